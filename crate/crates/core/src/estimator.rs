//! Budgeted upper bounds for each complexity notion by exhaustive
//! enumeration, and checks of the constructive `≤ct` reductions.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::church::Probe;
use crate::combinators::Combinator;
use crate::evaluators::{eval_card_n, eval_card_z, eval_church_probe, eval_ord, Status};
use crate::obs::{Settled, Trace};
use crate::oracle::{Oracle, OracleSource};
use crate::universe::{EvalError, Universe};
use crate::word::{words_up_to, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Notion {
    K,
    Kinf,
    Kprime,
    KprimeInf,
    CardN,
    CardZ,
    Ord,
    Church,
}

impl Notion {
    pub const ALL: [Notion; 8] = [
        Notion::K,
        Notion::Kinf,
        Notion::Kprime,
        Notion::KprimeInf,
        Notion::CardN,
        Notion::CardZ,
        Notion::Ord,
        Notion::Church,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Notion::K => "K",
            Notion::Kinf => "Kinf",
            Notion::Kprime => "Kprime",
            Notion::KprimeInf => "Kprime_inf",
            Notion::CardN => "CardN",
            Notion::CardZ => "CardZ",
            Notion::Ord => "Ord",
            Notion::Church => "Church",
        }
    }
}

impl fmt::Display for Notion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown notion {0:?}")]
pub struct UnknownNotion(pub String);

impl FromStr for Notion {
    type Err = UnknownNotion;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Notion::ALL
            .into_iter()
            .find(|n| n.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| UnknownNotion(s.to_string()))
    }
}

/// Which oracle stands in for the halting problem in the primed notions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMode {
    Budgeted,
    Registry,
}

impl fmt::Display for OracleMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OracleMode::Budgeted => "budgeted",
            OracleMode::Registry => "registry",
        })
    }
}

impl FromStr for OracleMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "budgeted" => Ok(OracleMode::Budgeted),
            "registry" => Ok(OracleMode::Registry),
            other => Err(format!("unknown oracle mode {other:?}")),
        }
    }
}

/// Everything an evaluation depends on.
pub struct EvalContext<'a> {
    pub universe: &'a Universe,
    pub budget: u64,
    pub oracle_budget: u64,
    pub oracle_mode: OracleMode,
    pub probes: Vec<Probe>,
}

impl EvalContext<'_> {
    pub fn oracle(&self) -> OracleSource {
        match self.oracle_mode {
            OracleMode::Budgeted => OracleSource::BudgetedTruth {
                budget: self.oracle_budget,
            },
            OracleMode::Registry => OracleSource::RegistryAugmented {
                budget: self.oracle_budget,
            },
        }
    }
}

/// A value a program denotes under a notion, with how much it can be trusted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evaluation {
    pub value: BigInt,
    pub exact: bool,
    pub certain: bool,
}

impl Evaluation {
    pub fn sound(&self) -> bool {
        self.exact && self.certain
    }

    pub fn status(&self) -> String {
        let base = if self.exact { "exact" } else { "at-budget" };
        if self.certain {
            base.to_string()
        } else {
            format!("{base}+assumed")
        }
    }
}

fn from_trace(t: &Trace, value: u64) -> Evaluation {
    Evaluation {
        value: value.into(),
        exact: t.settled == Settled::Complete,
        certain: t.certain,
    }
}

/// What `w` denotes under `notion`, if the budgeted evaluation is acceptable:
/// halted for the halting notions, settled for the limit notions.
pub fn evaluate(
    ctx: &EvalContext<'_>,
    notion: Notion,
    w: &Word,
) -> Result<Option<Evaluation>, EvalError> {
    let u = ctx.universe;
    let t = ctx.budget;
    let halting = |tr: Trace| {
        tr.halted
            .as_ref()
            .and_then(|v| v.to_u64())
            .map(|v| from_trace(&tr, v))
    };
    let streaming = |tr: Trace| tr.settled.acceptable().then(|| from_trace(&tr, tr.emits()));
    let result = match notion {
        Notion::K => halting(u.run_nat(w, None, t)?),
        Notion::Kinf => streaming(u.run_stream(w, None, t)?),
        Notion::Kprime => halting(u.run_nat(w, Some(&mut ctx.oracle() as &mut dyn Oracle), t)?),
        Notion::KprimeInf => {
            streaming(u.run_stream(w, Some(&mut ctx.oracle() as &mut dyn Oracle), t)?)
        }
        Notion::CardN | Notion::CardZ | Notion::Ord | Notion::Church => {
            let r = match notion {
                Notion::CardN => eval_card_n(u, w, t)?,
                Notion::CardZ => eval_card_z(u, w, t)?,
                Notion::Ord => eval_ord(u, w, t)?,
                _ => eval_church_probe(u, w, &ctx.probes, t)?,
            };
            r.stable_value().map(|v| Evaluation {
                value: v.clone(),
                exact: r.status == Status::Exact,
                certain: r.certain,
            })
        }
    };
    Ok(result)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row {
    pub n: u64,
    pub witness: Word,
    pub status: String,
    pub sound: bool,
}

impl Row {
    pub fn ub_length(&self) -> usize {
        self.witness.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EstimateTable {
    pub notion: Notion,
    pub max_len: usize,
    pub budget: u64,
    pub rows: BTreeMap<u64, Row>,
}

impl EstimateTable {
    pub fn get(&self, n: u64) -> Option<&Row> {
        self.rows.get(&n)
    }

    /// Keep, per `n`, the length-lex least witness. Associative and commutative.
    pub fn merge(mut self, other: EstimateTable) -> EstimateTable {
        for (n, row) in other.rows {
            match self.rows.get(&n) {
                Some(old) if old.witness <= row.witness => {}
                _ => {
                    self.rows.insert(n, row);
                }
            }
        }
        self
    }

    pub fn csv(&self) -> String {
        let mut out = String::new();
        for row in self.rows.values() {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                self.notion,
                row.n,
                row.ub_length(),
                row.witness,
                self.budget,
                row.status
            ));
        }
        out
    }
}

pub const TABLE_HEADER: &str = "notion,n,ub_length,witness_bits,budget,status\n";

/// Guard on the enumeration length: 2^21 words is already slow.
pub const MAX_ENUM_LEN: usize = 20;

fn scan(
    ctx: &EvalContext<'_>,
    notion: Notion,
    words: &[Word],
    range: &RangeInclusive<u64>,
) -> BTreeMap<u64, Row> {
    let mut rows = BTreeMap::new();
    for w in words {
        // harness errors (mode violations) disqualify a word, nothing more
        let Ok(Some(e)) = evaluate(ctx, notion, w) else {
            continue;
        };
        let Some(n) = e.value.to_u64().filter(|n| range.contains(n)) else {
            continue;
        };
        rows.entry(n).or_insert_with(|| Row {
            n,
            witness: w.clone(),
            status: e.status(),
            sound: e.sound(),
        });
    }
    rows
}

/// First witness per `n` among all words of length `<= max_len`, in length-lex order.
pub fn enumerate_estimate(
    ctx: &EvalContext<'_>,
    notion: Notion,
    max_len: usize,
    range: RangeInclusive<u64>,
    workers: usize,
) -> EstimateTable {
    assert!(
        max_len <= MAX_ENUM_LEN,
        "max_len {max_len} exceeds {MAX_ENUM_LEN}"
    );
    let words: Vec<Word> = words_up_to(max_len).collect();
    let empty = EstimateTable {
        notion,
        max_len,
        budget: ctx.budget,
        rows: BTreeMap::new(),
    };
    if workers <= 1 {
        return EstimateTable {
            rows: scan(ctx, notion, &words, &range),
            ..empty
        };
    }
    let chunk = words.len().div_ceil(workers * 8).max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool");
    pool.install(|| {
        words
            .par_chunks(chunk)
            .map(|part| EstimateTable {
                rows: scan(ctx, notion, part, &range),
                ..empty.clone()
            })
            .reduce(|| empty.clone(), EstimateTable::merge)
    })
}

/// The nine constructive reductions: a witness for `n` under the first notion,
/// wrapped with the combinator, is a witness for `n` under the second.
pub fn standard_wirings() -> Vec<(Notion, Notion, Combinator)> {
    vec![
        (Notion::K, Notion::Church, Combinator::Iterate),
        (Notion::Church, Notion::K, Combinator::ChurchExtract),
        (Notion::Kinf, Notion::CardN, Combinator::Stream2Card),
        (Notion::CardN, Notion::Kinf, Combinator::Card2Stream),
        (Notion::Kprime, Notion::CardZ, Combinator::Oracle2CardZ),
        (Notion::CardZ, Notion::Kprime, Combinator::CardZ2Oracle),
        (Notion::KprimeInf, Notion::Ord, Combinator::OracleStream2Ord),
        (Notion::Ord, Notion::KprimeInf, Combinator::Ord2OracleStream),
        (Notion::K, Notion::Kinf, Combinator::Halt2Stream),
    ]
}

/// Smallest `n` a wiring applies to.
fn wiring_min_n(a: Notion, b: Notion) -> u64 {
    // the chain construction needs at least one emission to place vertex 0
    if (a, b) == (Notion::KprimeInf, Notion::Ord) {
        1
    } else {
        0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CtWitness {
    pub a: Notion,
    pub b: Notion,
    pub combinator: Combinator,
    pub header: Word,
    pub c: usize,
    pub range: Option<(u64, u64)>,
    pub checked: usize,
    /// Rows whose source witness was exact and certain.
    pub sound: usize,
    /// Largest `K̂_B(n) − K̂_A(n)` seen (never above `c`).
    pub max_gap: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{a} -> {b} via {combinator} fails at n={n} (witness {witness}): {detail}")]
pub struct CtViolation {
    pub a: Notion,
    pub b: Notion,
    pub combinator: Combinator,
    pub n: u64,
    pub witness: Word,
    pub detail: String,
}

/// Check `K̂_B(n) <= K̂_A(n) + 2|e| + 1` on every row of `table_a` by
/// evaluating `couple(e, p)` under `b`. `table_b`, when given, tightens the
/// reported gap with independently found `b`-witnesses.
pub fn check_ct(
    ctx: &EvalContext<'_>,
    b: Notion,
    combinator: &Combinator,
    table_a: &EstimateTable,
    table_b: Option<&EstimateTable>,
) -> Result<CtWitness, CtViolation> {
    let a = table_a.notion;
    let c = combinator.constant();
    let mut witness = CtWitness {
        a,
        b,
        combinator: combinator.clone(),
        header: combinator.header(),
        c,
        range: None,
        checked: 0,
        sound: 0,
        max_gap: i64::MIN,
    };
    for row in table_a.rows.values() {
        if row.n < wiring_min_n(a, b) {
            continue;
        }
        let transformed = combinator.compile(&row.witness);
        let violation = |detail: String| CtViolation {
            a,
            b,
            combinator: combinator.clone(),
            n: row.n,
            witness: row.witness.clone(),
            detail,
        };
        if transformed.len() != row.ub_length() + c {
            return Err(violation(format!(
                "length {} is not {} + {c}",
                transformed.len(),
                row.ub_length()
            )));
        }
        match evaluate(ctx, b, &transformed) {
            Ok(Some(e)) if e.value == BigInt::from(row.n) => {}
            Ok(Some(e)) => return Err(violation(format!("evaluates to {}", e.value))),
            Ok(None) => return Err(violation("no acceptable value at this budget".into())),
            Err(err) => return Err(violation(err.to_string())),
        }
        let ub_b = table_b
            .and_then(|t| t.get(row.n))
            .map_or(transformed.len(), |r| r.ub_length().min(transformed.len()));
        witness.max_gap = witness.max_gap.max(ub_b as i64 - row.ub_length() as i64);
        witness.checked += 1;
        if row.sound {
            witness.sound += 1;
        }
        witness.range = Some(match witness.range {
            None => (row.n, row.n),
            Some((lo, hi)) => (lo.min(row.n), hi.max(row.n)),
        });
    }
    if witness.checked == 0 {
        witness.max_gap = 0;
    }
    Ok(witness)
}
