//! Deterministic discrete-event kernel.
//!
//! Time is kept in integer nanoseconds, events are ordered by
//! `(fire_at, sequence)` and every random draw comes from a named,
//! independently seeded stream.

mod rng;
mod scheduler;
mod time;

pub use rng::{Purpose, RngStream, StreamId};
pub use scheduler::{Event, EventHandle, Scheduler};
pub use time::SimTime;
