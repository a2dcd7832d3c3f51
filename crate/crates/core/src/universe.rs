//! The strongly universal machine `U`.
//!
//! A U-program is evaluated at a *kind*: as a halting program (a natural),
//! a stream (unary output), a partial function, a pair of partial functions,
//! a binary relation, or an effective operation. The header of the program
//! picks the combinator; combinators evaluate their payload at the source
//! kind with the same budget, so a transformed program is settled exactly
//! when its source is.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use num_traits::{ToPrimitive, Zero};

use crate::church::{self, Successor};
use crate::combinators::{universal_decode, Combinator};
use crate::dovetail::{cantor_unpair, rounds_for_budget, DovetailRun, Task};
use crate::obs::{
    settled_by_rounds, settled_by_steps, Discovered, DomainObs, Edge, PairObs, Settled, Trace,
};
use crate::oracle::{Certainty, DeclaredDomain, Oracle, OracleError, Query, Registry, Resolution};
use crate::order;
use crate::overshoot;
use crate::vm::{
    run_traced, ArgFn, Env, MachineState, Mode, Program, QueryEvent, RunTrace, VmError,
};
use crate::word::{couple_decode, Word};
use crate::{nat, Nat};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error(transparent)]
    Vm(#[from] VmError),
    #[error("{0} needs an oracle")]
    OracleRequired(&'static str),
}

impl From<OracleError> for EvalError {
    fn from(e: OracleError) -> Self {
        EvalError::Vm(VmError::Oracle(e))
    }
}

/// Value of a partial function at one point, with the steps spent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Applied {
    pub value: Option<Nat>,
    pub steps: u64,
}

impl Applied {
    pub fn undefined(budget: u64) -> Self {
        Applied {
            value: None,
            steps: budget,
        }
    }
}

pub struct Universe {
    registry: Arc<Registry>,
    halt_cache: Mutex<HashMap<(Word, u64), Option<u64>>>,
}

impl Default for Universe {
    fn default() -> Self {
        Universe::new(Registry::new())
    }
}

struct VmTask<'a> {
    universe: &'a Universe,
    program: &'a Program,
    state: MachineState,
}

impl Task for VmTask<'_> {
    type Value = Nat;
    type Error = VmError;

    fn halted(&self) -> Option<Nat> {
        self.state.halted.clone()
    }

    fn step(&mut self) -> Result<(), VmError> {
        self.state
            .step(self.program, &mut Env::plain(self.universe))
            .map(|_| ())
    }
}

fn trace_from_run(run: RunTrace, streaming: bool) -> Trace {
    let certain = run.certain();
    let settled = match (&run.halt_value, streaming) {
        (Some(_), _) => Settled::Complete,
        (None, true) => settled_by_steps(run.emit_steps.last().copied(), run.budget),
        (None, false) => Settled::Unstable,
    };
    Trace {
        steps: run.steps,
        budget: run.budget,
        emit_steps: run.emit_steps,
        queries: run.queries,
        halted: run.halt_value,
        settled,
        certain,
    }
}

impl Universe {
    pub fn new(registry: Registry) -> Self {
        Universe {
            registry: Arc::new(registry),
            halt_cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn registry(&self) -> &Registry {
        &self.registry
    }

    fn run_code(
        &self,
        code: &Word,
        mode: Mode,
        inputs: Vec<Nat>,
        oracle: Option<&mut dyn Oracle>,
        arg: Option<&dyn ArgFn>,
        budget: u64,
    ) -> Result<RunTrace, VmError> {
        let program = Program::decode(code);
        let mut env = Env {
            universe: self,
            oracle: oracle.map(|o| o as &mut dyn Oracle),
            arg,
        };
        run_traced(&program, mode, inputs, &mut env, budget)
    }

    /// Steps `w` needs to halt as an oracle-free halting program, if at most `budget`.
    pub fn halting_steps(&self, w: &Word, budget: u64) -> Option<u64> {
        let key = (w.clone(), budget);
        if let Some(hit) = self.halt_cache.lock().expect("cache lock").get(&key) {
            return *hit;
        }
        let result = match self.run_nat(w, None, budget) {
            Ok(t) if t.halted.is_some() => Some(t.steps),
            _ => None,
        };
        self.halt_cache
            .lock()
            .expect("cache lock")
            .insert(key, result);
        result
    }

    /// Run the search behind a query for at most `budget` steps.
    pub fn resolve(&self, query: &Query, budget: u64) -> Resolution {
        let (halts_after, certified_no) = match query {
            Query::Halts(w) => (self.halting_steps(w, budget), self.registry.is_divergent(w)),
            Query::MoreDiscoveries {
                halves,
                after_round,
            } => {
                let next = [
                    halves.first.next_after(*after_round),
                    halves.second.next_after(*after_round),
                ]
                .into_iter()
                .flatten()
                .min();
                let closed = halves.settled() == Settled::Complete && halves.certain();
                (next.map(|r| r - after_round), closed)
            }
            Query::VertexFrom { rel, from } => {
                (order::vertex_from_time(rel, from), order::closed(rel))
            }
            Query::IsVertex { rel, vertex } => {
                (order::vertex_time(rel, vertex), order::closed(rel))
            }
            Query::Reaches { rel, from, to } => {
                (order::reach_time(rel, from, to), order::closed(rel))
            }
        };
        Resolution {
            halts_after: halts_after.filter(|&h| h <= budget),
            certified_no,
        }
    }

    /// Halting-mode evaluation. With an oracle, `QUERY` is legal.
    pub fn run_nat(
        &self,
        w: &Word,
        oracle: Option<&mut dyn Oracle>,
        budget: u64,
    ) -> Result<Trace, EvalError> {
        let (comb, payload) = universal_decode(w);
        match comb {
            Combinator::Raw => {
                let mode = Mode::Halting {
                    oracle: oracle.is_some(),
                };
                let run = self.run_code(&payload, mode, Vec::new(), oracle, None, budget)?;
                Ok(trace_from_run(run, false))
            }
            Combinator::Id => self.run_nat(&payload, oracle, budget),
            Combinator::ChurchExtract => {
                let a = self.apply_effop(&payload, &Successor, &Nat::zero(), budget)?;
                Ok(match a.value {
                    Some(v) => Trace {
                        steps: a.steps,
                        budget,
                        emit_steps: Vec::new(),
                        queries: Vec::new(),
                        halted: Some(v),
                        settled: Settled::Complete,
                        certain: true,
                    },
                    None => Trace::diverged(budget),
                })
            }
            Combinator::CardZ2Oracle => {
                let oracle = oracle.ok_or(EvalError::OracleRequired("CARDZ2ORACLE"))?;
                let pair = Arc::new(self.pair_domains(&payload, budget)?);
                self.cardz_host(pair, oracle, budget)
            }
            _ => Ok(Trace::diverged(budget)),
        }
    }

    /// Streaming-mode evaluation: output is the number of emissions.
    pub fn run_stream(
        &self,
        w: &Word,
        oracle: Option<&mut dyn Oracle>,
        budget: u64,
    ) -> Result<Trace, EvalError> {
        let (comb, payload) = universal_decode(w);
        match comb {
            Combinator::Raw => {
                let mode = Mode::Streaming {
                    oracle: oracle.is_some(),
                };
                let run = self.run_code(&payload, mode, Vec::new(), oracle, None, budget)?;
                Ok(trace_from_run(run, true))
            }
            Combinator::Id => self.run_stream(&payload, oracle, budget),
            Combinator::Halt2Stream => {
                let t = self.run_nat(&payload, oracle, budget)?;
                Ok(match &t.halted {
                    Some(n) => {
                        let n = n.to_u64().expect("halting value fits in u64");
                        Trace {
                            steps: t.steps + n,
                            budget,
                            emit_steps: (t.steps..t.steps + n).collect(),
                            queries: t.queries.clone(),
                            halted: Some(nat(n)),
                            settled: Settled::Complete,
                            certain: t.certain,
                        }
                    }
                    None => Trace {
                        queries: t.queries.clone(),
                        certain: t.certain,
                        ..Trace::silent_stream(budget)
                    },
                })
            }
            Combinator::Card2Stream => {
                let d = self.domain(&payload, budget)?;
                Ok(Trace {
                    steps: d.steps,
                    budget,
                    emit_steps: d.points.iter().map(|p| p.global_step).collect(),
                    queries: Vec::new(),
                    halted: None,
                    settled: d.settled,
                    certain: d.certain,
                })
            }
            Combinator::Ord2OracleStream => {
                let oracle = oracle.ok_or(EvalError::OracleRequired("ORD2ORACLESTREAM"))?;
                let rel = Arc::new(self.relation(&payload, budget)?);
                order::ord_host(self, rel, oracle, budget)
            }
            _ => Ok(Trace::silent_stream(budget)),
        }
    }

    fn certify<P: Ord + Clone>(obs: &mut DomainObs<P>, declared: Option<&BTreeSet<P>>) {
        if let Some(declared) = declared {
            let seen: BTreeSet<P> = obs.point_list().cloned().collect();
            if &seen == declared {
                obs.settled = Settled::Complete;
            }
        }
    }

    fn dovetail_raw<P, F>(
        &self,
        code: &Word,
        budget: u64,
        inputs_of: F,
    ) -> Result<DomainObs<P>, EvalError>
    where
        P: PartialEq,
        F: Fn(u64) -> (P, Vec<Nat>),
    {
        let program = Program::decode(code);
        let rounds = rounds_for_budget(budget);
        let mut run = DovetailRun::new(|i| VmTask {
            universe: self,
            program: &program,
            state: MachineState::new(&program, Mode::Function, inputs_of(i).1),
        });
        run.run_rounds(rounds)?;
        let steps = run.global_steps();
        let points: Vec<Discovered<P>> = run
            .into_log()
            .into_iter()
            .map(|d| Discovered {
                point: inputs_of(d.task).0,
                round: d.round,
                global_step: d.global_step,
            })
            .collect();
        let last = points.last().map(|d| d.round);
        Ok(DomainObs {
            points,
            horizon: rounds,
            steps,
            settled: settled_by_rounds(last, rounds),
            certain: true,
        })
    }

    /// Discovered domain of a unary partial function.
    pub fn domain(&self, w: &Word, budget: u64) -> Result<DomainObs<Nat>, EvalError> {
        let (comb, payload) = universal_decode(w);
        match comb {
            Combinator::Raw => {
                let mut obs = self.dovetail_raw(&payload, budget, |i| (nat(i), vec![nat(i)]))?;
                let declared = match self.registry.domain(w) {
                    Some(DeclaredDomain::Unary(d)) => Some(d),
                    _ => None,
                };
                Self::certify(&mut obs, declared);
                Ok(obs)
            }
            Combinator::Id => self.domain(&payload, budget),
            Combinator::Stream2Card => {
                let t = self.run_stream(&payload, None, budget)?;
                Ok(DomainObs {
                    points: t
                        .emit_steps
                        .iter()
                        .map(|&s| Discovered {
                            point: nat(s),
                            round: s,
                            global_step: s,
                        })
                        .collect(),
                    horizon: t.budget,
                    steps: t.steps,
                    settled: t.settled,
                    certain: t.certain,
                })
            }
            _ => Ok(DomainObs::empty(rounds_for_budget(budget), 0)),
        }
    }

    /// Both halves of a card^Z program.
    pub fn pair_domains(&self, w: &Word, budget: u64) -> Result<PairObs, EvalError> {
        let (comb, payload) = universal_decode(w);
        let rounds = rounds_for_budget(budget);
        match comb {
            Combinator::Raw => match couple_decode(&payload) {
                Ok(pair) => Ok(PairObs {
                    first: self.domain(&pair.header, budget)?,
                    second: self.domain(&pair.payload, budget)?,
                }),
                Err(_) => Ok(PairObs {
                    first: DomainObs::empty(rounds, 0),
                    second: DomainObs::empty(rounds, 0),
                }),
            },
            Combinator::Id => self.pair_domains(&payload, budget),
            Combinator::Oracle2CardZ => {
                Ok(overshoot::emulate_cardz(self, &payload, budget)?.pair_obs())
            }
            _ => Ok(PairObs {
                first: DomainObs::empty(rounds, 0),
                second: DomainObs::empty(rounds, 0),
            }),
        }
    }

    /// Discovered domain of a binary partial function.
    pub fn relation(&self, w: &Word, budget: u64) -> Result<DomainObs<Edge>, EvalError> {
        let (comb, payload) = universal_decode(w);
        match comb {
            Combinator::Raw => {
                let mut obs = self.dovetail_raw(&payload, budget, |i| {
                    let (x, y) = cantor_unpair(i);
                    ((nat(x), nat(y)), vec![nat(x), nat(y)])
                })?;
                let declared = match self.registry.domain(w) {
                    Some(DeclaredDomain::Binary(d)) => Some(d),
                    _ => None,
                };
                Self::certify(&mut obs, declared);
                Ok(obs)
            }
            Combinator::Id => self.relation(&payload, budget),
            Combinator::OracleStream2Ord => {
                Ok(overshoot::emulate_ord(self, &payload, budget)?.relation)
            }
            _ => Ok(DomainObs::empty(rounds_for_budget(budget), 0)),
        }
    }

    /// A unary partial function at one point.
    pub fn apply_func(&self, w: &Word, x: &Nat, budget: u64) -> Result<Applied, EvalError> {
        let (comb, payload) = universal_decode(w);
        match comb {
            Combinator::Raw => {
                let run = self.run_code(
                    &payload,
                    Mode::Function,
                    vec![x.clone()],
                    None,
                    None,
                    budget,
                )?;
                Ok(Applied {
                    value: run.halt_value,
                    steps: run.steps,
                })
            }
            Combinator::Id => self.apply_func(&payload, x, budget),
            Combinator::Stream2Card => {
                let t = self.run_stream(&payload, None, budget)?;
                let hit = x.to_u64().and_then(|x| t.emit_steps.binary_search(&x).ok());
                Ok(match hit {
                    Some(i) => Applied {
                        value: Some(nat(1)),
                        steps: t.emit_steps[i] + 1,
                    },
                    None => Applied::undefined(budget),
                })
            }
            _ => Ok(Applied::undefined(budget)),
        }
    }

    /// A binary partial function at one point.
    pub fn apply_rel(&self, w: &Word, x: &Nat, y: &Nat, budget: u64) -> Result<Applied, EvalError> {
        let (comb, payload) = universal_decode(w);
        match comb {
            Combinator::Raw => {
                let inputs = vec![x.clone(), y.clone()];
                let run = self.run_code(&payload, Mode::Function, inputs, None, None, budget)?;
                Ok(Applied {
                    value: run.halt_value,
                    steps: run.steps,
                })
            }
            Combinator::Id => self.apply_rel(&payload, x, y, budget),
            Combinator::OracleStream2Ord => {
                let rel = overshoot::emulate_ord(self, &payload, budget)?.relation;
                let edge = (x.clone(), y.clone());
                Ok(match rel.points.iter().find(|d| d.point == edge) {
                    Some(d) => Applied {
                        value: Some(nat(1)),
                        steps: d.global_step + 1,
                    },
                    None => Applied::undefined(budget),
                })
            }
            _ => Ok(Applied::undefined(budget)),
        }
    }

    /// An effective operation applied to `f`, then to `x`.
    pub fn apply_effop(
        &self,
        w: &Word,
        f: &dyn ArgFn,
        x: &Nat,
        budget: u64,
    ) -> Result<Applied, EvalError> {
        let (comb, payload) = universal_decode(w);
        match comb {
            Combinator::Raw => {
                let run = self.run_code(
                    &payload,
                    Mode::EffOp,
                    vec![x.clone()],
                    None,
                    Some(f),
                    budget,
                )?;
                Ok(Applied {
                    value: run.halt_value,
                    steps: run.steps,
                })
            }
            Combinator::Id => self.apply_effop(&payload, f, x, budget),
            Combinator::Iter(n) => Ok(church::iterate(f, &n, x, budget)),
            Combinator::NegIter(n) => Ok(church::neg_iterate(f, &n, x, budget)),
            Combinator::Iterate => {
                let t = self.run_nat(&payload, None, budget)?;
                Ok(match t.halted {
                    Some(n) => {
                        let mut a = church::iterate(f, &n, x, budget.saturating_sub(t.steps));
                        a.steps += t.steps;
                        a
                    }
                    None => Applied::undefined(budget),
                })
            }
            _ => Ok(Applied::undefined(budget)),
        }
    }

    /// Oracle program: after each dovetail round, ask whether either half
    /// will still discover a point; on NO, halt with the difference of counts.
    fn cardz_host(
        &self,
        pair: Arc<PairObs>,
        oracle: &mut dyn Oracle,
        budget: u64,
    ) -> Result<Trace, EvalError> {
        let mut queries = Vec::new();
        let mut round = 0u64;
        while round < budget {
            let q = Query::MoreDiscoveries {
                halves: Arc::clone(&pair),
                after_round: round,
            };
            let answer = oracle.answer(self, &q)?;
            queries.push(QueryEvent {
                step: round,
                yes: answer.yes,
                certainty: answer.certainty,
            });
            if !answer.yes {
                let diff = pair.first.count_through(round) as i64
                    - pair.second.count_through(round) as i64;
                let certain = queries.iter().all(|q| q.certainty == Certainty::Certain);
                if diff < 0 || round + 2 > budget {
                    return Ok(Trace {
                        queries,
                        certain,
                        ..Trace::diverged(budget)
                    });
                }
                return Ok(Trace {
                    steps: round + 2,
                    budget,
                    emit_steps: Vec::new(),
                    queries,
                    halted: Some(nat(diff as u64)),
                    settled: Settled::Complete,
                    certain,
                });
            }
            round += 1;
        }
        let certain = queries.iter().all(|q| q.certainty == Certainty::Certain);
        Ok(Trace {
            queries,
            certain,
            ..Trace::diverged(budget)
        })
    }
}
