//! Event-driven IEEE 802.11 channel-access simulator with bandit-driven
//! channel, primary and contention-window selection.

pub mod agents;
pub mod engine;
pub mod mac;
pub mod metrics;
pub mod phy;
pub mod report;
pub mod scenarios;
pub mod traffic;
