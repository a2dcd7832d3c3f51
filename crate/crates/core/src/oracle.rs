//! Σ⁰₁ oracle stand-ins.
//!
//! The jump oracle is not computable. Every source here answers a [`Query`]
//! and tags the answer with a [`Certainty`]: a YES is only ever given when a
//! halting computation was witnessed; a NO is [`Certainty::Assumed`] unless
//! the registry of known-divergent programs backs it.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use crate::obs::{DomainObs, Edge, PairObs};
use crate::universe::Universe;
use crate::word::Word;
use crate::Nat;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Certainty {
    Certain,
    Assumed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleAnswer {
    pub yes: bool,
    pub certainty: Certainty,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("scripted oracle has no answers left")]
    Exhausted,
}

/// A Σ⁰₁ question. Each one is the existence of a halting search, which is
/// what [`Universe::resolve`] runs.
#[derive(Clone)]
pub enum Query {
    /// Does the U-program halt in halting mode with no input and no oracle?
    Halts(Word),
    /// Will either half of a dovetailed pair still discover a point after `after_round`?
    MoreDiscoveries {
        halves: Arc<PairObs>,
        after_round: u64,
    },
    /// Is some vertex `>= from` mentioned by the relation?
    VertexFrom {
        rel: Arc<DomainObs<Edge>>,
        from: Nat,
    },
    IsVertex {
        rel: Arc<DomainObs<Edge>>,
        vertex: Nat,
    },
    /// Is `to` reachable from `from` in the reflexive-transitive closure?
    Reaches {
        rel: Arc<DomainObs<Edge>>,
        from: Nat,
        to: Nat,
    },
}

impl fmt::Debug for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Query::Halts(w) => write!(f, "Halts({w:?})"),
            Query::MoreDiscoveries { after_round, .. } => {
                write!(f, "MoreDiscoveries(after round {after_round})")
            }
            Query::VertexFrom { from, .. } => write!(f, "VertexFrom({from})"),
            Query::IsVertex { vertex, .. } => write!(f, "IsVertex({vertex})"),
            Query::Reaches { from, to, .. } => write!(f, "Reaches({from} -> {to})"),
        }
    }
}

/// How the search behind a query behaves in the budgeted stand-in world.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Resolution {
    /// Search steps until the witnessing halt, if it halts.
    pub halts_after: Option<u64>,
    /// Registry-backed proof that the search never halts.
    pub certified_no: bool,
}

pub trait Oracle {
    fn answer(&mut self, universe: &Universe, query: &Query) -> Result<OracleAnswer, OracleError>;
}

#[derive(Debug, Clone)]
pub enum OracleSource {
    /// Fixed answer list, consumed in order. Scripted answers count as certain.
    Scripted(VecDeque<bool>),
    /// YES iff the search halts within `budget` steps; NO is always assumed.
    BudgetedTruth { budget: u64 },
    /// As `BudgetedTruth`, but NO is certain when the universe's registry backs it.
    RegistryAugmented { budget: u64 },
}

impl OracleSource {
    pub fn scripted(answers: impl IntoIterator<Item = bool>) -> Self {
        OracleSource::Scripted(answers.into_iter().collect())
    }
}

impl Oracle for OracleSource {
    fn answer(&mut self, universe: &Universe, query: &Query) -> Result<OracleAnswer, OracleError> {
        let (budget, use_registry) = match self {
            OracleSource::Scripted(answers) => {
                let yes = answers.pop_front().ok_or(OracleError::Exhausted)?;
                return Ok(OracleAnswer {
                    yes,
                    certainty: Certainty::Certain,
                });
            }
            OracleSource::BudgetedTruth { budget } => (*budget, false),
            OracleSource::RegistryAugmented { budget } => (*budget, true),
        };
        let res = universe.resolve(query, budget);
        Ok(match res.halts_after {
            Some(_) => OracleAnswer {
                yes: true,
                certainty: Certainty::Certain,
            },
            None => OracleAnswer {
                yes: false,
                certainty: if use_registry && res.certified_no {
                    Certainty::Certain
                } else {
                    Certainty::Assumed
                },
            },
        })
    }
}

/// Single-query convenience wrapper.
pub fn oracle_answer(
    source: &mut OracleSource,
    universe: &Universe,
    program: &Word,
) -> Result<OracleAnswer, OracleError> {
    source.answer(universe, &Query::Halts(program.clone()))
}

/// Declared finite domain of a registered function fixture.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeclaredDomain {
    Unary(BTreeSet<Nat>),
    Binary(BTreeSet<Edge>),
}

/// Programs asserted divergent, and function programs asserted to diverge
/// outside a declared finite domain.
#[derive(Debug, Clone, Default)]
pub struct Registry {
    divergent: HashMap<Word, String>,
    domains: HashMap<Word, DeclaredDomain>,
}

impl Registry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_divergent(&mut self, program: Word, justification: impl Into<String>) {
        self.divergent.insert(program, justification.into());
    }

    pub fn add_domain(&mut self, program: Word, domain: DeclaredDomain) {
        self.domains.insert(program, domain);
    }

    pub fn is_divergent(&self, program: &Word) -> bool {
        self.divergent.contains_key(program)
    }

    pub fn justification(&self, program: &Word) -> Option<&str> {
        self.divergent.get(program).map(String::as_str)
    }

    pub fn domain(&self, program: &Word) -> Option<&DeclaredDomain> {
        self.domains.get(program)
    }

    pub fn len(&self) -> usize {
        self.divergent.len() + self.domains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Answers from an override list, NO (assumed) beyond it, recording every
/// query asked. This is the "answer NO and check later" oracle of the
/// overshoot emulations.
#[derive(Debug, Default)]
pub struct AssumeNo {
    overrides: Vec<bool>,
    pub asked: Vec<Query>,
}

impl AssumeNo {
    pub fn new(overrides: Vec<bool>) -> Self {
        AssumeNo {
            overrides,
            asked: Vec::new(),
        }
    }
}

impl Oracle for AssumeNo {
    fn answer(&mut self, _universe: &Universe, query: &Query) -> Result<OracleAnswer, OracleError> {
        let index = self.asked.len();
        self.asked.push(query.clone());
        let yes = self.overrides.get(index).copied().unwrap_or(false);
        Ok(OracleAnswer {
            yes,
            certainty: if yes {
                Certainty::Certain
            } else {
                Certainty::Assumed
            },
        })
    }
}
