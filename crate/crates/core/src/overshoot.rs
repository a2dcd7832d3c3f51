//! Harmless-overshoot emulation of oracle programs.
//!
//! The oracle program is run with every new query answered NO, while a
//! verification search for each NO runs alongside. Time is measured in
//! ticks: step `k` of an attempt started at tick `t0` happens at `t0 + k`,
//! and the verification of a query asked at step `s` refutes the NO at tick
//! `t0 + s + h` where `h` is the search's halting time. Within one tick the
//! program moves before any verification. On a refutation the whole
//! emulation restarts at the next tick with the corrected answer prefix.

use std::collections::HashSet;

use crate::obs::{Discovered, DomainObs, Edge, PairObs, Settled};
use crate::oracle::AssumeNo;
use crate::universe::{EvalError, Universe};
use crate::word::Word;
use crate::{nat, Nat};

/// Restarts after which an emulation is reported unsettled.
pub const MAX_ATTEMPTS: u64 = 4096;

#[derive(Debug, Clone)]
struct Pending {
    index: usize,
    ask_tick: u64,
    refute_tick: Option<u64>,
    certified: bool,
}

struct Corrector {
    overrides: Vec<bool>,
    pending: Vec<Pending>,
    tick0: u64,
    attempts: u64,
}

struct Correction {
    tick: u64,
    query: usize,
    ask_tick: u64,
}

impl Corrector {
    fn new() -> Self {
        Corrector {
            overrides: Vec::new(),
            pending: Vec::new(),
            tick0: 0,
            attempts: 0,
        }
    }

    /// Start verifications for the queries this attempt answered NO for the first time,
    /// then return the earliest refutation among all running verifications.
    fn schedule(
        &mut self,
        u: &Universe,
        oracle: &AssumeNo,
        query_steps: &[u64],
        verify_budget: u64,
    ) -> Option<Correction> {
        for (i, &step) in query_steps.iter().enumerate().skip(self.overrides.len()) {
            let res = u.resolve(&oracle.asked[i], verify_budget);
            let ask_tick = self.tick0 + step;
            self.pending.push(Pending {
                index: i,
                ask_tick,
                refute_tick: res.halts_after.map(|h| ask_tick + h),
                certified: res.certified_no,
            });
        }
        self.pending
            .iter()
            .filter_map(|p| p.refute_tick.map(|r| (r, p.index, p.ask_tick)))
            .min()
            .map(|(tick, query, ask_tick)| Correction {
                tick,
                query,
                ask_tick,
            })
    }

    fn correct(&mut self, c: &Correction) {
        let j = c.query;
        self.overrides = (0..j)
            .map(|i| self.overrides.get(i).copied().unwrap_or(false))
            .chain([true])
            .collect();
        self.pending.retain(|p| p.index < j);
        self.tick0 = c.tick + 1;
    }

    /// Answers used by the final attempt, and whether each NO among them is certified.
    fn final_answers(&self, asked: usize) -> (Vec<bool>, bool) {
        let answers: Vec<bool> = (0..asked)
            .map(|i| self.overrides.get(i).copied().unwrap_or(false))
            .collect();
        let certain = answers
            .iter()
            .enumerate()
            .all(|(i, &yes)| yes || self.pending.iter().any(|p| p.index == i && p.certified));
        (answers, certain)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LedgerKind {
    /// A point added to D₁ by an output of the current attempt.
    Add,
    /// A refuted NO: `cancelled` live points were matched by fresh D₂ points.
    Correction {
        query: usize,
        ask_tick: u64,
        cancelled: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LedgerEvent {
    pub tick: u64,
    pub kind: LedgerKind,
    pub d1: u64,
    pub d2: u64,
    pub live: u64,
}

#[derive(Debug, Clone)]
pub struct CardzEmulation {
    pub d1: Vec<Discovered<Nat>>,
    pub d2: Vec<Discovered<Nat>>,
    pub log: Vec<LedgerEvent>,
    pub attempts: u64,
    pub answers: Vec<bool>,
    pub horizon: u64,
    pub settled: Settled,
    pub certain: bool,
}

impl CardzEmulation {
    pub fn difference(&self) -> i64 {
        self.d1.len() as i64 - self.d2.len() as i64
    }

    pub fn pair_obs(self) -> PairObs {
        let half = |points| DomainObs {
            points,
            horizon: self.horizon,
            steps: self.horizon,
            settled: self.settled,
            certain: self.certain,
        };
        PairObs {
            first: half(self.d1.clone()),
            second: half(self.d2.clone()),
        }
    }
}

/// Emulate a halting oracle program `p` as a pair of partial functions whose
/// domain sizes differ by `p`'s output. An output `v` adds `v` fresh points
/// to the first domain; each refuted NO adds one fresh point to the second
/// domain per live point produced after the refuted query.
pub fn emulate_cardz(u: &Universe, p: &Word, budget: u64) -> Result<CardzEmulation, EvalError> {
    let mut c = Corrector::new();
    let mut d1 = Vec::new();
    let mut d2 = Vec::new();
    let mut log = Vec::new();
    // number of queries preceding each live point
    let mut live: Vec<usize> = Vec::new();
    let mut next_point = 0u64;
    let mut fresh = |round: u64| {
        next_point += 1;
        Discovered {
            point: nat(next_point - 1),
            round,
            global_step: round,
        }
    };
    loop {
        c.attempts += 1;
        let mut oracle = AssumeNo::new(c.overrides.clone());
        let trace = u.run_nat(p, Some(&mut oracle), budget)?;
        let steps: Vec<u64> = trace.queries.iter().map(|q| q.step).collect();
        let refutation = c.schedule(u, &oracle, &steps, budget);
        if let Some(v) = &trace.halted {
            let halt_tick = c.tick0 + trace.steps.saturating_sub(1);
            if refutation.as_ref().is_none_or(|r| halt_tick <= r.tick) {
                let suppress = live.len() as u64;
                let mut k = 0u64;
                while nat(k) < *v {
                    if k >= suppress {
                        d1.push(fresh(halt_tick));
                        live.push(steps.len());
                        log.push(LedgerEvent {
                            tick: halt_tick,
                            kind: LedgerKind::Add,
                            d1: d1.len() as u64,
                            d2: d2.len() as u64,
                            live: live.len() as u64,
                        });
                    }
                    k += 1;
                }
            }
        }
        match refutation {
            Some(r) if c.attempts < MAX_ATTEMPTS => {
                let before = live.len();
                live.retain(|&qb| qb <= r.query);
                let cancelled = (before - live.len()) as u64;
                for _ in 0..cancelled {
                    d2.push(fresh(r.tick));
                }
                log.push(LedgerEvent {
                    tick: r.tick,
                    kind: LedgerKind::Correction {
                        query: r.query,
                        ask_tick: r.ask_tick,
                        cancelled,
                    },
                    d1: d1.len() as u64,
                    d2: d2.len() as u64,
                    live: live.len() as u64,
                });
                c.correct(&r);
            }
            unfinished => {
                let (answers, certain) = c.final_answers(steps.len());
                let settled = if trace.halted.is_some() && unfinished.is_none() {
                    Settled::Complete
                } else {
                    Settled::Unstable
                };
                return Ok(CardzEmulation {
                    d1,
                    d2,
                    log,
                    attempts: c.attempts,
                    answers,
                    horizon: c.tick0 + trace.steps,
                    settled,
                    certain,
                });
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrdEvent {
    /// An emission of the current attempt.
    Emit { tick: u64, point: Nat },
    /// A refuted NO: the current chain collapsed into one class.
    Collapse {
        tick: u64,
        query: usize,
        size: usize,
    },
}

#[derive(Debug, Clone)]
pub struct OrdEmulation {
    pub relation: DomainObs<Edge>,
    pub log: Vec<OrdEvent>,
    pub attempts: u64,
    /// Emissions of the final attempt.
    pub final_emits: u64,
}

struct EdgeSet {
    seen: HashSet<Edge>,
    points: Vec<Discovered<Edge>>,
}

impl EdgeSet {
    fn add(&mut self, edge: Edge, tick: u64) {
        if self.seen.insert(edge.clone()) {
            self.points.push(Discovered {
                point: edge,
                round: tick,
                global_step: tick,
            });
        }
    }
}

/// Emulate a streaming oracle program `p` (emitting `n >= 1`) as a relation
/// whose reachability quotient is a chain of `n` classes. The first emission
/// of an attempt makes `0` a vertex; each later one adds a fresh point `k`
/// above every point of the current chain `X`. A refuted NO collapses `X`
/// into a single class and the emulation restarts with `X = {0}`.
pub fn emulate_ord(u: &Universe, p: &Word, budget: u64) -> Result<OrdEmulation, EvalError> {
    let mut c = Corrector::new();
    let mut edges = EdgeSet {
        seen: HashSet::new(),
        points: Vec::new(),
    };
    let mut log = Vec::new();
    let mut next_point = 1u64;
    loop {
        c.attempts += 1;
        let mut oracle = AssumeNo::new(c.overrides.clone());
        let trace = u.run_stream(p, Some(&mut oracle), budget)?;
        let steps: Vec<u64> = trace.queries.iter().map(|q| q.step).collect();
        let refutation = c.schedule(u, &oracle, &steps, budget);
        let mut chain: Vec<Nat> = vec![nat(0)];
        let mut emitted = 0u64;
        for &s in &trace.emit_steps {
            let tick = c.tick0 + s;
            if refutation.as_ref().is_some_and(|r| tick > r.tick) {
                break;
            }
            let point = if emitted == 0 {
                edges.add((nat(0), nat(0)), tick);
                nat(0)
            } else {
                let k = nat(next_point);
                next_point += 1;
                for x in &chain {
                    edges.add((x.clone(), k.clone()), tick);
                }
                chain.push(k.clone());
                k
            };
            emitted += 1;
            log.push(OrdEvent::Emit { tick, point });
        }
        match refutation {
            Some(r) if c.attempts < MAX_ATTEMPTS => {
                if emitted > 0 {
                    for x in &chain {
                        for y in &chain {
                            edges.add((x.clone(), y.clone()), r.tick);
                        }
                    }
                }
                log.push(OrdEvent::Collapse {
                    tick: r.tick,
                    query: r.query,
                    size: if emitted > 0 { chain.len() } else { 0 },
                });
                c.correct(&r);
            }
            unfinished => {
                let (_, certain) = c.final_answers(steps.len());
                let settled = if unfinished.is_some() {
                    Settled::Unstable
                } else {
                    trace.settled
                };
                let horizon = c.tick0 + trace.steps;
                return Ok(OrdEmulation {
                    relation: DomainObs {
                        points: edges.points,
                        horizon,
                        steps: horizon,
                        settled,
                        certain,
                    },
                    log,
                    attempts: c.attempts,
                    final_emits: emitted,
                });
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::quotient;
    use crate::vm::assemble_bits;

    fn raw(src: &str) -> Word {
        let code = assemble_bits(src).unwrap();
        Word::from_bits(
            std::iter::once(true)
                .chain(code.bits().iter().copied())
                .collect(),
        )
    }

    /// U-word of a program that halts after two INCs.
    fn halting_target() -> u64 {
        let w = raw("INC r0\nINC r0");
        num_traits::ToPrimitive::to_u64(&crate::word::word_to_nat(&w)).unwrap()
    }

    #[test]
    fn no_queries_reduces_to_plain_output() {
        let u = Universe::default();
        let e = emulate_cardz(&u, &raw("LOADC r1, #2\nOUTPUT r1"), 1000).unwrap();
        assert_eq!((e.d1.len(), e.d2.len()), (2, 0));
        assert_eq!(e.settled, Settled::Complete);
        assert!(e.certain);
    }

    #[test]
    fn wrong_no_is_corrected() {
        let u = Universe::default();
        let target = halting_target();
        // YES -> output 1, NO -> output 2
        let prog = raw(&format!(
            "LOADC r1, #{target}\nQUERY r1, no\nLOADC r2, #1\nOUTPUT r2\nno: LOADC r2, #2\nOUTPUT r2"
        ));
        let e = emulate_cardz(&u, &prog, 1000).unwrap();
        assert_eq!(e.difference(), 1);
        assert_eq!(e.attempts, 2);
        assert_eq!(e.answers, vec![true]);
    }

    #[test]
    fn ord_without_queries_is_a_chain() {
        let u = Universe::default();
        for n in 1..5 {
            let src = "EMIT\n".repeat(n) + "HALT";
            let e = emulate_ord(&u, &raw(&src), 1000).unwrap();
            let edges: Vec<Edge> = e.relation.point_list().cloned().collect();
            assert_eq!(quotient(&edges).classes(), Some(n));
        }
    }
}
