use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Party {
    Alice,
    Bob,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    AliceToBob,
    BobToAlice,
}

/// What the sending party does to its own padlocks before the qubit goes
/// on the wire.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PadlockAction {
    /// Apply all `count` padlocks (the opening pass of each party).
    ApplyAll { count: usize },
    /// Remove the padlock in `slot`.
    Remove { slot: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PassDescriptor {
    /// 1-based pass number.
    pub index: usize,
    pub sender: Party,
    pub direction: Direction,
    pub action: PadlockAction,
}

/// The `2n + 1` pass schedule for `n` padlocks per party.
///
/// Pass 1: Alice applies all her padlocks. Pass 2: Bob applies all of his.
/// From pass 3 on the parties alternate, each removing one of its own
/// padlocks per pass, so Alice removes slots `0..n` on passes 3, 5, …, 2n+1
/// and Bob removes slots `0..n-1` on passes 4, 6, …, 2n. Bob's last padlock
/// (slot `n-1`) is removed at finalization, right before he measures.
pub fn schedule_passes(n: usize) -> Result<Vec<PassDescriptor>> {
    if n < 1 {
        return Err(Error::invalid("padlocks per party must be at least 1"));
    }
    let mut passes = Vec::with_capacity(2 * n + 1);
    for index in 1..=2 * n + 1 {
        let sender = if index % 2 == 1 { Party::Alice } else { Party::Bob };
        let direction = match sender {
            Party::Alice => Direction::AliceToBob,
            Party::Bob => Direction::BobToAlice,
        };
        let action = match index {
            1 | 2 => PadlockAction::ApplyAll { count: n },
            k => PadlockAction::Remove { slot: (k - 3) / 2 },
        };
        passes.push(PassDescriptor { index, sender, direction, action });
    }
    Ok(passes)
}

pub fn pass_count(n: usize) -> usize {
    2 * n + 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_pass_schedule() {
        let s = schedule_passes(1).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s[0].action, PadlockAction::ApplyAll { count: 1 });
        assert_eq!(s[0].sender, Party::Alice);
        assert_eq!(s[1].action, PadlockAction::ApplyAll { count: 1 });
        assert_eq!(s[1].sender, Party::Bob);
        assert_eq!(s[2].action, PadlockAction::Remove { slot: 0 });
        assert_eq!(s[2].sender, Party::Alice);
        assert_eq!(s[2].direction, Direction::AliceToBob);
    }

    #[test]
    fn five_exchanges_for_two_padlocks() {
        let s = schedule_passes(2).unwrap();
        assert_eq!(s.len(), 5);
        let removals: Vec<_> = s[2..].iter().map(|p| (p.sender, p.action)).collect();
        assert_eq!(
            removals,
            vec![
                (Party::Alice, PadlockAction::Remove { slot: 0 }),
                (Party::Bob, PadlockAction::Remove { slot: 0 }),
                (Party::Alice, PadlockAction::Remove { slot: 1 }),
            ]
        );
    }

    #[test]
    fn zero_padlocks_rejected() {
        assert!(matches!(schedule_passes(0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn directions_alternate_and_end_at_bob() {
        for n in 1..8 {
            let s = schedule_passes(n).unwrap();
            assert_eq!(s.len(), pass_count(n));
            assert_eq!(s[0].direction, Direction::AliceToBob);
            assert_eq!(s.last().unwrap().direction, Direction::AliceToBob);
            for w in s.windows(2) {
                assert_ne!(w[0].direction, w[1].direction);
            }
        }
    }

    #[test]
    fn every_padlock_applied_and_removed_once() {
        // Net rotation over a schedule telescopes to zero: count signed
        // applications per (party, slot), with Bob's final removal.
        for n in 1..8 {
            let mut net = std::collections::HashMap::new();
            for p in schedule_passes(n).unwrap() {
                match p.action {
                    PadlockAction::ApplyAll { count } => {
                        for slot in 0..count {
                            *net.entry((p.sender, slot)).or_insert(0) += 1;
                        }
                    }
                    PadlockAction::Remove { slot } => *net.entry((p.sender, slot)).or_insert(0) -= 1,
                }
            }
            *net.get_mut(&(Party::Bob, n - 1)).unwrap() -= 1;
            assert_eq!(net.len(), 2 * n);
            assert!(net.values().all(|&v| v == 0));
        }
    }
}
