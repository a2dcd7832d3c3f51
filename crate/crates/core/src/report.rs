//! Tables for every notion, the verified `≤ct` ledger, and the text report.

use std::fmt::Write as _;

use crate::church::standard_probes;
use crate::config::ExperimentConfig;
use crate::estimator::{
    check_ct, enumerate_estimate, standard_wirings, CtViolation, CtWitness, EstimateTable,
    EvalContext, Notion, TABLE_HEADER,
};
use crate::universe::Universe;

pub const LEDGER_HEADER: &str = "notionA,notionB,header_bits,c,range,verified\n";

/// Printed verbatim in every report.
pub const DISCLAIMER: &str = "\
DISCLAIMER: strict separations (the >ct relations) are asymptotic statements
about uncomputable functions. They are NOT certified by this report: finite
tables at bounded length and budget cannot witness that a gap grows beyond
every constant. Only the <=ct inequalities listed in the ledger were checked.";

/// Strict separations claimed by the theory; listed but never checked.
pub const STRICT: [(&str, &str); 6] = [
    ("K", "Kinf"),
    ("Kinf", "Kprime"),
    ("Kprime", "Kprime_inf"),
    ("Church", "CardN"),
    ("CardN", "CardZ"),
    ("CardZ", "Ord"),
];

pub fn context<'a>(cfg: &ExperimentConfig, universe: &'a Universe) -> EvalContext<'a> {
    EvalContext {
        universe,
        budget: cfg.budget,
        oracle_budget: cfg.oracle_budget,
        oracle_mode: cfg.oracle,
        probes: standard_probes(cfg.probes_extra, cfg.seed),
    }
}

pub fn estimate_tables(
    cfg: &ExperimentConfig,
    universe: &Universe,
    notions: &[Notion],
) -> Vec<EstimateTable> {
    let ctx = context(cfg, universe);
    notions
        .iter()
        .map(|&n| enumerate_estimate(&ctx, n, cfg.max_len, cfg.n_min..=cfg.n_max, cfg.workers))
        .collect()
}

/// CSV with header for a list of tables.
pub fn tables_csv(tables: &[EstimateTable]) -> String {
    let mut out = String::from(TABLE_HEADER);
    for t in tables {
        out.push_str(&t.csv());
    }
    out
}

#[derive(Debug, Clone)]
pub struct Hierarchy {
    pub max_len: usize,
    pub budget: u64,
    pub tables: Vec<EstimateTable>,
    pub witnesses: Vec<CtWitness>,
}

impl Hierarchy {
    pub fn table(&self, notion: Notion) -> Option<&EstimateTable> {
        self.tables.iter().find(|t| t.notion == notion)
    }

    pub fn witness(&self, a: Notion, b: Notion) -> Option<&CtWitness> {
        self.witnesses.iter().find(|w| w.a == a && w.b == b)
    }
}

/// Tables for all notions and all nine wirings checked against them.
pub fn run_hierarchy(
    cfg: &ExperimentConfig,
    universe: &Universe,
) -> Result<Hierarchy, CtViolation> {
    let tables = estimate_tables(cfg, universe, &Notion::ALL);
    let ctx = context(cfg, universe);
    let find = |n: Notion| {
        tables
            .iter()
            .find(|t| t.notion == n)
            .expect("all notions tabulated")
    };
    let witnesses = standard_wirings()
        .iter()
        .map(|(a, b, comb)| check_ct(&ctx, *b, comb, find(*a), Some(find(*b))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Hierarchy {
        max_len: cfg.max_len,
        budget: cfg.budget,
        tables,
        witnesses,
    })
}

fn range_text(w: &CtWitness) -> String {
    match w.range {
        Some((lo, hi)) => format!("{lo}-{hi}"),
        None => "none".into(),
    }
}

pub fn ledger_csv(witnesses: &[CtWitness]) -> String {
    let mut out = String::from(LEDGER_HEADER);
    for w in witnesses {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            w.a,
            w.b,
            w.header,
            w.c,
            range_text(w),
            if w.checked > 0 { "yes" } else { "vacuous" }
        );
    }
    out
}

pub fn report_text(h: &Hierarchy) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "Kolmogorov complexity estimates");
    let _ = writeln!(s, "max_len = {}, budget = {}", h.max_len, h.budget);
    let _ = writeln!(s);

    let _ = writeln!(
        s,
        "Upper bounds per n (bits; * = at-budget or assumed oracle, - = no witness)"
    );
    let mut ns: Vec<u64> = h
        .tables
        .iter()
        .flat_map(|t| t.rows.keys().copied())
        .collect();
    ns.sort_unstable();
    ns.dedup();
    let _ = write!(s, "{:>4}", "n");
    for t in &h.tables {
        let _ = write!(s, " {:>11}", t.notion.name());
    }
    let _ = writeln!(s);
    for n in ns {
        let _ = write!(s, "{n:>4}");
        for t in &h.tables {
            let cell = match t.get(n) {
                Some(r) if r.sound => r.ub_length().to_string(),
                Some(r) => format!("{}*", r.ub_length()),
                None => "-".into(),
            };
            let _ = write!(s, " {cell:>11}");
        }
        let _ = writeln!(s);
    }
    let _ = writeln!(s);

    let _ = writeln!(
        s,
        "Verified <=ct ledger: B(n) <= A(n) + c for every tabulated n"
    );
    for w in &h.witnesses {
        let _ = writeln!(
            s,
            "  {:<10} <=ct {:<10} + {:>2}  via {:<16} rows {:>3} (sound {:>3})  range {:<7} max gap {}",
            w.b.name(),
            w.a.name(),
            w.c,
            w.combinator.name(),
            w.checked,
            w.sound,
            range_text(w),
            w.max_gap
        );
    }
    let sound: usize = h.witnesses.iter().map(|w| w.sound).sum();
    let flagged: usize = h.witnesses.iter().map(|w| w.checked - w.sound).sum();
    let _ = writeln!(
        s,
        "  totals: {sound} sound rows verified; {flagged} flagged rows checked but excluded"
    );
    let _ = writeln!(s);

    let _ = writeln!(s, "=ct pairs (both directions checked)");
    for w in &h.witnesses {
        if w.a < w.b {
            if let Some(back) = h.witness(w.b, w.a) {
                let _ = writeln!(
                    s,
                    "  {} =ct {}  (+{} one way, +{} the other)",
                    w.a.name(),
                    w.b.name(),
                    w.c,
                    back.c
                );
            }
        }
    }
    let _ = writeln!(s);

    let _ = writeln!(s, "Strict separations");
    for (a, b) in STRICT {
        let _ = writeln!(s, "  {a} >ct {b}: not desk-verifiable");
    }
    let _ = writeln!(s);
    let _ = writeln!(s, "{DISCLAIMER}");
    s
}
