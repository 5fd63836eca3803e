use std::fmt;

use serde::{Deserialize, Serialize};

use super::PhyError;

pub const NUM_BASIC_CHANNELS: usize = 4;

/// One 20 MHz basic channel, indexed 1..=4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct ChannelId(u8);

impl ChannelId {
    pub const ALL: [ChannelId; 4] = [ChannelId(1), ChannelId(2), ChannelId(3), ChannelId(4)];

    pub fn new(index: u8) -> Result<Self, PhyError> {
        if (1..=NUM_BASIC_CHANNELS as u8).contains(&index) {
            Ok(ChannelId(index))
        } else {
            Err(PhyError::InvalidChannel(index))
        }
    }

    pub fn index(self) -> u8 {
        self.0
    }

    /// Zero-based position, handy for per-channel arrays.
    pub fn slot(self) -> usize {
        usize::from(self.0 - 1)
    }

    fn bit(self) -> u8 {
        1 << (self.0 - 1)
    }
}

impl TryFrom<u8> for ChannelId {
    type Error = PhyError;
    fn try_from(v: u8) -> Result<Self, PhyError> {
        ChannelId::new(v)
    }
}

impl From<ChannelId> for u8 {
    fn from(c: ChannelId) -> u8 {
        c.0
    }
}

impl fmt::Display for ChannelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Arbitrary subset of the basic channels (bit `i` = channel `i + 1`).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ChannelSet(u8);

impl ChannelSet {
    pub const EMPTY: ChannelSet = ChannelSet(0);
    pub const FULL: ChannelSet = ChannelSet(0b1111);

    pub fn from_bits(bits: u8) -> Self {
        ChannelSet(bits & 0b1111)
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn single(c: ChannelId) -> Self {
        ChannelSet(c.bit())
    }

    pub fn contains(self, c: ChannelId) -> bool {
        self.0 & c.bit() != 0
    }

    pub fn insert(&mut self, c: ChannelId) {
        self.0 |= c.bit();
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: ChannelSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: ChannelSet) -> bool {
        self.0 & other.0 != 0
    }

    pub fn union(self, other: ChannelSet) -> ChannelSet {
        ChannelSet(self.0 | other.0)
    }

    pub fn difference(self, other: ChannelSet) -> ChannelSet {
        ChannelSet(self.0 & !other.0)
    }

    pub fn iter(self) -> impl Iterator<Item = ChannelId> {
        ChannelId::ALL
            .into_iter()
            .filter(move |c| self.contains(*c))
    }

    /// The legal bonded group with exactly these members, if any.
    pub fn as_group(self) -> Option<OperationalChannel> {
        OperationalChannel::ALL
            .into_iter()
            .find(|g| g.members() == self)
    }
}

impl FromIterator<ChannelId> for ChannelSet {
    fn from_iter<I: IntoIterator<Item = ChannelId>>(iter: I) -> Self {
        let mut s = ChannelSet::EMPTY;
        for c in iter {
            s.insert(c);
        }
        s
    }
}

impl fmt::Display for ChannelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, c) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Width {
    Mhz20,
    Mhz40,
    Mhz80,
}

impl Width {
    pub fn mhz(self) -> u32 {
        match self {
            Width::Mhz20 => 20,
            Width::Mhz40 => 40,
            Width::Mhz80 => 80,
        }
    }

    pub fn from_mhz(mhz: u32) -> Option<Width> {
        match mhz {
            20 => Some(Width::Mhz20),
            40 => Some(Width::Mhz40),
            80 => Some(Width::Mhz80),
            _ => None,
        }
    }

    /// 802.11ax data subcarriers for a full-band SU PPDU.
    pub fn data_subcarriers(self) -> u64 {
        match self {
            Width::Mhz20 => 234,
            Width::Mhz40 => 468,
            Width::Mhz80 => 980,
        }
    }
}

/// One of the seven legal contiguous groups, labelled #1..#7:
/// {1},{2},{3},{4},{1,2},{3,4},{1,2,3,4}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct OperationalChannel(u8);

const GROUP_BITS: [u8; 7] = [0b0001, 0b0010, 0b0100, 0b1000, 0b0011, 0b1100, 0b1111];

impl OperationalChannel {
    pub const ALL: [OperationalChannel; 7] = [
        OperationalChannel(1),
        OperationalChannel(2),
        OperationalChannel(3),
        OperationalChannel(4),
        OperationalChannel(5),
        OperationalChannel(6),
        OperationalChannel(7),
    ];

    pub fn from_label(label: u8) -> Result<Self, PhyError> {
        if (1..=7).contains(&label) {
            Ok(OperationalChannel(label))
        } else {
            Err(PhyError::InvalidOperationalChannel(label))
        }
    }

    pub fn label(self) -> u8 {
        self.0
    }

    /// Zero-based index into [`OperationalChannel::ALL`].
    pub fn index(self) -> usize {
        usize::from(self.0 - 1)
    }

    pub fn members(self) -> ChannelSet {
        ChannelSet(GROUP_BITS[self.index()])
    }

    pub fn contains(self, c: ChannelId) -> bool {
        self.members().contains(c)
    }

    pub fn width(self) -> Width {
        match self.members().len() {
            1 => Width::Mhz20,
            2 => Width::Mhz40,
            _ => Width::Mhz80,
        }
    }

    /// Lowest-indexed member; the primary a legacy AP uses.
    pub fn lowest(self) -> ChannelId {
        self.members().iter().next().expect("groups are non-empty")
    }
}

impl TryFrom<u8> for OperationalChannel {
    type Error = PhyError;
    fn try_from(v: u8) -> Result<Self, PhyError> {
        OperationalChannel::from_label(v)
    }
}

impl From<OperationalChannel> for u8 {
    fn from(c: OperationalChannel) -> u8 {
        c.0
    }
}

impl fmt::Display for OperationalChannel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}:{}", self.0, self.members())
    }
}
