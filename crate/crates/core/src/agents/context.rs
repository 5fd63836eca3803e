use serde::{Deserialize, Serialize};

use super::AgentError;
use crate::phy::{ChannelId, OperationalChannel, NUM_BASIC_CHANNELS};

/// Raw observations an AP has at decision time.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Sensors {
    /// F1: per-channel busy fraction over the trailing 100 ms (own BSS excluded).
    pub occupancy: [f64; NUM_BASIC_CHANNELS],
    /// F2: instantaneous per-channel busy flags (own BSS excluded).
    pub busy: [bool; NUM_BASIC_CHANNELS],
    /// F3: transmit-queue fill level.
    pub queue_utilization: f64,
}

/// Which decision a context feeds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Role {
    SingleAgent,
    Channel,
    Primary,
    ContentionWindow,
}

impl Role {
    pub fn dim(self) -> usize {
        match self {
            Role::SingleAgent | Role::Channel => 9,
            Role::Primary => 12,
            Role::ContentionWindow => 17,
        }
    }
}

/// Feature vector in `[0, 1]^d`, laid out F1 | F2 | F3 | F4 | F5 with the
/// features a role does not use left out.
#[derive(Clone, Debug, PartialEq)]
pub struct ContextVector(Vec<f64>);

impl ContextVector {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// FNV-1a over the bit patterns; identifies a context in decision logs.
    pub fn fingerprint(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for v in &self.0 {
            for byte in v.to_bits().to_le_bytes() {
                h ^= u64::from(byte);
                h = h.wrapping_mul(0x0000_0100_0000_01b3);
            }
        }
        h
    }
}

/// Assembles the context for `role`. Roles after the channel agent need the
/// decisions made upstream in the same round: F4 is the multi-hot membership
/// of the chosen operational channel over the four basic channels, F5 the
/// one-hot primary.
pub fn build_context(
    sensors: &Sensors,
    role: Role,
    channel: Option<OperationalChannel>,
    primary: Option<ChannelId>,
) -> Result<ContextVector, AgentError> {
    let mut v = Vec::with_capacity(role.dim());
    v.extend(sensors.occupancy.iter().map(|x| x.clamp(0.0, 1.0)));
    v.extend(sensors.busy.iter().map(|&b| if b { 1.0 } else { 0.0 }));
    if role != Role::Primary {
        v.push(sensors.queue_utilization.clamp(0.0, 1.0));
    }
    if matches!(role, Role::Primary | Role::ContentionWindow) {
        let ch = channel.ok_or(AgentError::MissingDecision(role, "channel"))?;
        v.extend(
            ChannelId::ALL
                .iter()
                .map(|&c| if ch.contains(c) { 1.0 } else { 0.0 }),
        );
    }
    if role == Role::ContentionWindow {
        let p = primary.ok_or(AgentError::MissingDecision(role, "primary"))?;
        v.extend(
            ChannelId::ALL
                .iter()
                .map(|&c| if c == p { 1.0 } else { 0.0 }),
        );
    }
    debug_assert_eq!(v.len(), role.dim());
    Ok(ContextVector(v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn silent_network_single_agent() {
        let ctx = build_context(&Sensors::default(), Role::SingleAgent, None, None).unwrap();
        assert_eq!(ctx.as_slice(), &[0.0; 9]);
    }

    #[test]
    fn cw_role_encodes_upstream_choices() {
        let ch5 = OperationalChannel::from_label(5).unwrap();
        let p1 = ChannelId::new(1).unwrap();
        let ctx = build_context(
            &Sensors::default(),
            Role::ContentionWindow,
            Some(ch5),
            Some(p1),
        )
        .unwrap();
        assert_eq!(ctx.dim(), 17);
        assert_eq!(&ctx.as_slice()[9..13], &[1.0, 1.0, 0.0, 0.0]);
        assert_eq!(&ctx.as_slice()[13..17], &[1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn dims_per_role() {
        let ch = Some(OperationalChannel::from_label(7).unwrap());
        let p = Some(ChannelId::new(4).unwrap());
        let dims: Vec<usize> = [
            Role::SingleAgent,
            Role::Channel,
            Role::Primary,
            Role::ContentionWindow,
        ]
        .iter()
        .map(|&r| build_context(&Sensors::default(), r, ch, p).unwrap().dim())
        .collect();
        assert_eq!(dims, vec![9, 9, 12, 17]);
    }

    #[test]
    fn missing_upstream_decision() {
        assert_eq!(
            build_context(&Sensors::default(), Role::Primary, None, None),
            Err(AgentError::MissingDecision(Role::Primary, "channel"))
        );
        let ch = Some(OperationalChannel::from_label(1).unwrap());
        assert!(build_context(&Sensors::default(), Role::ContentionWindow, ch, None).is_err());
    }

    #[test]
    fn primary_role_skips_queue() {
        let s = Sensors {
            queue_utilization: 0.5,
            ..Sensors::default()
        };
        let ch = Some(OperationalChannel::from_label(2).unwrap());
        let ctx = build_context(&s, Role::Primary, ch, None).unwrap();
        assert!(!ctx.as_slice().contains(&0.5));
    }
}
