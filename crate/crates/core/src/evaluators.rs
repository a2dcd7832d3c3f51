//! Budgeted representation maps: card^N, card^Z, ord and Church, with a
//! brute-force order-type oracle for explicit edge sets.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;

use crate::church::{check_church, Probe};
use crate::obs::{Edge, Settled};
use crate::order::quotient;
use crate::universe::{EvalError, Universe};
use crate::word::Word;
use crate::Nat;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    /// Backed by a finiteness certificate.
    Exact,
    /// Only the stability window vouches for the value.
    AtBudget,
    /// The observation contradicts membership in the representation's domain.
    UndefinedDetected,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Exact => "exact",
            Status::AtBudget => "at-budget",
            Status::UndefinedDetected => "undefined-detected",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalResult {
    pub value: Option<BigInt>,
    pub status: Status,
    /// No discovery in the second half of the budget (or a certificate).
    pub stable: bool,
    /// No oracle answer behind the value was merely assumed.
    pub certain: bool,
    pub budget: u64,
}

impl EvalResult {
    fn from_settled(value: BigInt, settled: Settled, certain: bool, budget: u64) -> Self {
        EvalResult {
            value: Some(value),
            status: if settled == Settled::Complete {
                Status::Exact
            } else {
                Status::AtBudget
            },
            stable: settled.acceptable(),
            certain,
            budget,
        }
    }

    fn undefined(budget: u64) -> Self {
        EvalResult {
            value: None,
            status: Status::UndefinedDetected,
            stable: false,
            certain: true,
            budget,
        }
    }

    /// The value, if the evaluation is stable and not refuted.
    pub fn stable_value(&self) -> Option<&BigInt> {
        self.value
            .as_ref()
            .filter(|_| self.stable && self.status != Status::UndefinedDetected)
    }
}

pub fn eval_card_n(u: &Universe, p: &Word, budget: u64) -> Result<EvalResult, EvalError> {
    let d = u.domain(p, budget)?;
    Ok(EvalResult::from_settled(
        d.count().into(),
        d.settled,
        d.certain,
        budget,
    ))
}

pub fn eval_card_z(u: &Universe, p: &Word, budget: u64) -> Result<EvalResult, EvalError> {
    let pair = u.pair_domains(p, budget)?;
    Ok(EvalResult::from_settled(
        pair.difference().into(),
        pair.settled(),
        pair.certain(),
        budget,
    ))
}

pub fn eval_ord(u: &Universe, p: &Word, budget: u64) -> Result<EvalResult, EvalError> {
    let rel = u.relation(p, budget)?;
    let edges: Vec<Edge> = rel.point_list().cloned().collect();
    Ok(match quotient(&edges).classes() {
        Some(n) => EvalResult::from_settled(n.into(), rel.settled, rel.certain, budget),
        None => EvalResult::undefined(budget),
    })
}

/// Probe-based Church evaluation; never better than at-budget.
pub fn eval_church_probe(
    u: &Universe,
    p: &Word,
    probes: &[Probe],
    budget: u64,
) -> Result<EvalResult, EvalError> {
    let check = check_church(u, p, probes, budget)?;
    Ok(match check.accepted() {
        Some(n) => EvalResult {
            value: Some(BigInt::from(n.clone())),
            status: Status::AtBudget,
            stable: true,
            certain: true,
            budget,
        },
        None => EvalResult::undefined(budget),
    })
}

/// Order type of the reachability quotient by boolean closure, or `None`
/// when the quotient is not a chain.
#[allow(clippy::needless_range_loop)]
pub fn brute_quotient_oracle(edges: &[Edge]) -> Option<usize> {
    let vertices: Vec<&Nat> = edges
        .iter()
        .flat_map(|(a, b)| [a, b])
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let n = vertices.len();
    let idx = |v: &Nat| vertices.binary_search(&v).expect("vertex");
    let mut reach = vec![vec![false; n]; n];
    for (i, row) in reach.iter_mut().enumerate() {
        row[i] = true;
    }
    for (a, b) in edges {
        reach[idx(a)][idx(b)] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                for j in 0..n {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if !reach[i][j] && !reach[j][i] {
                return None;
            }
        }
    }
    // count classes by their least member
    let classes = (0..n)
        .filter(|&i| (0..i).all(|j| !(reach[i][j] && reach[j][i])))
        .count();
    Some(classes)
}
