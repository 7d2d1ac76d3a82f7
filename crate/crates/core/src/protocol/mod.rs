//! The multi-pass padlock protocol.
//!
//! Alice locks a qubit with `n` secret rotations, Bob adds `n` of his own,
//! and the two then take turns removing one padlock per pass. Because all
//! padlocks are rotations of linear polarization they commute, so after the
//! `2n + 1` passes Bob removes his last padlock and finds the prepared bit
//! with certainty. Neither party ever reveals an angle.

mod channel;
pub mod classical;
mod key;
mod party;
mod repetition;
mod schedule;
mod session;

pub use channel::{Channel, ClonedTokens, StateToken};
pub use classical::{classical_ks_break, classical_ks_run, classical_ks_run_with_keys, ClassicalWord, KsRun, KsWire};
pub use key::{AngleDistribution, PadlockKey};
pub use party::{Alice, Bob};
pub use repetition::{repetition_check, MismatchTally};
pub use schedule::{pass_count, schedule_passes, Direction, PadlockAction, Party, PassDescriptor};
pub use session::{run_session, run_session_with_keys, EveLog, PassEvent, SessionConfig, SessionTranscript};
