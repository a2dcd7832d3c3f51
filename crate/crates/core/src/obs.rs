//! What a budgeted evaluation of a U-program observed.

use crate::vm::QueryEvent;
use crate::Nat;

/// A directed edge of a binary-relation program's domain.
pub type Edge = (Nat, Nat);

/// How far a budgeted observation can be trusted to be final.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Settled {
    /// The computation provably finished (halted, or a declared finite domain was exhausted).
    Complete,
    /// Nothing new happened in the second half of the budget.
    Stable,
    /// Still changing near the end of the budget.
    Unstable,
}

impl Settled {
    pub fn acceptable(self) -> bool {
        self != Settled::Unstable
    }

    /// The weaker of two settledness levels.
    pub fn meet(self, other: Settled) -> Settled {
        self.max(other)
    }
}

/// Stable iff the last event at 0-based step `last` lies before the final ⌈T/2⌉ steps.
pub fn settled_by_steps(last: Option<u64>, budget: u64) -> Settled {
    let window_start = budget - budget.div_ceil(2);
    if last.is_none_or(|t| t < window_start) {
        Settled::Stable
    } else {
        Settled::Unstable
    }
}

/// Stable iff the last discovery, in 1-based round `last`, lies before the final ⌈s/2⌉ rounds.
pub fn settled_by_rounds(last: Option<u64>, rounds: u64) -> Settled {
    let cutoff = rounds - rounds.div_ceil(2);
    if last.is_none_or(|r| r <= cutoff) {
        Settled::Stable
    } else {
        Settled::Unstable
    }
}

/// Run of a halting-mode or streaming-mode program.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub steps: u64,
    pub budget: u64,
    pub emit_steps: Vec<u64>,
    pub queries: Vec<QueryEvent>,
    /// Halting value; for streams, `Some` means the run finished.
    pub halted: Option<Nat>,
    pub settled: Settled,
    /// No oracle answer behind this trace was merely assumed.
    pub certain: bool,
}

impl Trace {
    pub fn diverged(budget: u64) -> Self {
        Trace {
            steps: budget,
            budget,
            emit_steps: Vec::new(),
            queries: Vec::new(),
            halted: None,
            settled: Settled::Unstable,
            certain: true,
        }
    }

    /// A stream that runs forever without emitting.
    pub fn silent_stream(budget: u64) -> Self {
        Trace {
            settled: Settled::Stable,
            ..Trace::diverged(budget)
        }
    }

    pub fn emits(&self) -> u64 {
        self.emit_steps.len() as u64
    }

    pub fn finished(&self) -> bool {
        self.halted.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Discovered<P> {
    pub point: P,
    /// Schedule time of the discovery (dovetail round, emission step or emulation tick).
    pub round: u64,
    pub global_step: u64,
}

/// Discovered part of the domain of a partial function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainObs<P> {
    /// In discovery order; `round` is nondecreasing.
    pub points: Vec<Discovered<P>>,
    /// Last schedule time observed.
    pub horizon: u64,
    /// Total work spent (global steps).
    pub steps: u64,
    pub settled: Settled,
    pub certain: bool,
}

impl<P: PartialEq> DomainObs<P> {
    pub fn empty(horizon: u64, steps: u64) -> Self {
        DomainObs {
            points: Vec::new(),
            horizon,
            steps,
            settled: Settled::Stable,
            certain: true,
        }
    }

    pub fn count(&self) -> u64 {
        self.points.len() as u64
    }

    pub fn count_through(&self, round: u64) -> u64 {
        self.points.iter().take_while(|d| d.round <= round).count() as u64
    }

    /// First discovery time strictly after `round`.
    pub fn next_after(&self, round: u64) -> Option<u64> {
        self.points.iter().map(|d| d.round).find(|&r| r > round)
    }

    pub fn contains(&self, point: &P) -> bool {
        self.points.iter().any(|d| &d.point == point)
    }

    pub fn point_list(&self) -> impl Iterator<Item = &P> {
        self.points.iter().map(|d| &d.point)
    }
}

/// The two halves of a card^Z program.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairObs {
    pub first: DomainObs<Nat>,
    pub second: DomainObs<Nat>,
}

impl PairObs {
    pub fn settled(&self) -> Settled {
        self.first.settled.meet(self.second.settled)
    }

    pub fn certain(&self) -> bool {
        self.first.certain && self.second.certain
    }

    pub fn difference(&self) -> i64 {
        self.first.count() as i64 - self.second.count() as i64
    }
}
