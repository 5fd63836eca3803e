use crate::phy::{ChannelId, ChannelSet, OperationalChannel, NUM_BASIC_CHANNELS};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BondDecision {
    Transmit(ChannelSet),
    Defer,
}

fn idle_set(busy: &[bool; NUM_BASIC_CHANNELS]) -> ChannelSet {
    ChannelId::ALL
        .iter()
        .filter(|c| !busy[c.slot()])
        .copied()
        .collect()
}

/// Static bonding: the whole operational channel if every secondary stayed
/// idle through PIFS, otherwise back off again. `busy` flags for the primary
/// are ignored since the backoff already won it.
pub fn scb_gate(
    channel: OperationalChannel,
    primary: ChannelId,
    busy: &[bool; NUM_BASIC_CHANNELS],
) -> BondDecision {
    let secondaries = channel.members().difference(ChannelSet::single(primary));
    if secondaries.is_subset(idle_set(busy)) {
        BondDecision::Transmit(channel.members())
    } else {
        BondDecision::Defer
    }
}

/// Dynamic bonding: the widest legal group inside `channel` that contains
/// `primary` and whose members are all idle.
pub fn dcb_transmit_set(
    channel: OperationalChannel,
    primary: ChannelId,
    busy: &[bool; NUM_BASIC_CHANNELS],
) -> ChannelSet {
    let mut idle = idle_set(busy);
    idle.insert(primary);
    // Groups ordered widest first: #7, #5/#6, then singles.
    const WIDEST_FIRST: [u8; 7] = [7, 5, 6, 1, 2, 3, 4];
    WIDEST_FIRST
        .iter()
        .map(|&l| OperationalChannel::ALL[usize::from(l) - 1].members())
        .find(|g| g.contains(primary) && g.is_subset(channel.members()) && g.is_subset(idle))
        .expect("the primary alone is always a legal group")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ch(i: u8) -> ChannelId {
        ChannelId::new(i).unwrap()
    }

    fn oc(label: u8) -> OperationalChannel {
        OperationalChannel::from_label(label).unwrap()
    }

    fn busy(ids: &[u8]) -> [bool; 4] {
        let mut b = [false; 4];
        for &i in ids {
            b[usize::from(i) - 1] = true;
        }
        b
    }

    fn set(ids: &[u8]) -> ChannelSet {
        ids.iter().map(|&i| ch(i)).collect()
    }

    #[test]
    fn scb_examples() {
        assert_eq!(
            scb_gate(oc(7), ch(1), &busy(&[])),
            BondDecision::Transmit(ChannelSet::FULL)
        );
        assert_eq!(scb_gate(oc(7), ch(1), &busy(&[4])), BondDecision::Defer);
        assert_eq!(
            scb_gate(oc(2), ch(2), &busy(&[1, 3, 4])),
            BondDecision::Transmit(set(&[2]))
        );
    }

    #[test]
    fn dcb_examples() {
        assert_eq!(dcb_transmit_set(oc(7), ch(1), &busy(&[3])), set(&[1, 2]));
        assert_eq!(dcb_transmit_set(oc(7), ch(1), &busy(&[2])), set(&[1]));
        assert_eq!(dcb_transmit_set(oc(7), ch(3), &busy(&[1])), set(&[3, 4]));
        assert_eq!(dcb_transmit_set(oc(6), ch(4), &busy(&[])), set(&[3, 4]));
    }

    #[test]
    fn scb_singleton_never_defers() {
        for label in 1..=4 {
            for mask in 0u8..16 {
                let b: [bool; 4] = std::array::from_fn(|i| mask & (1 << i) != 0);
                let c = oc(label);
                assert!(matches!(
                    scb_gate(c, c.lowest(), &b),
                    BondDecision::Transmit(_)
                ));
            }
        }
    }

    proptest! {
        #[test]
        fn clearing_a_flag_never_shrinks(label in 1u8..=7, p in 1u8..=4, mask in 0u8..16, clear in 0usize..4) {
            let c = oc(label);
            prop_assume!(c.contains(ch(p)));
            let b: [bool; 4] = std::array::from_fn(|i| mask & (1 << i) != 0);
            let mut cleared = b;
            cleared[clear] = false;
            let before = dcb_transmit_set(c, ch(p), &b);
            let after = dcb_transmit_set(c, ch(p), &cleared);
            prop_assert!(before.is_subset(after));
        }
    }
}
