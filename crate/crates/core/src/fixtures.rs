//! Fixture programs: built-in definitions, the on-disk fixture directory
//! (`<name>.prog` files plus `manifest.toml` and `registry.txt`), and the
//! registry they induce.

use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::oracle::{DeclaredDomain, Registry};
use crate::universe::Universe;
use crate::vm::{assemble_bits, AsmError};
use crate::word::{word_to_nat, Word, WordError};
use crate::{nat, Nat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FixtureMode {
    /// Halting program; output is the halting value.
    Halt,
    /// Streaming program; output is the number of emissions.
    Stream,
    /// Unary partial function.
    Func,
    /// Binary partial function.
    Func2,
    /// Effective operation.
    Effop,
    /// Halting program that may query the halting oracle.
    Oracle,
    /// Streaming program that may query the halting oracle.
    Ostream,
}

impl fmt::Display for FixtureMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FixtureMode::Halt => "halt",
            FixtureMode::Stream => "stream",
            FixtureMode::Func => "func",
            FixtureMode::Func2 => "func2",
            FixtureMode::Effop => "effop",
            FixtureMode::Oracle => "oracle",
            FixtureMode::Ostream => "ostream",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Flag {
    KnownHalting,
    KnownDivergent,
    /// A function that halts on some inputs only.
    Partial,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureMeta {
    pub name: String,
    pub mode: FixtureMode,
    pub behavior: String,
    pub flag: Flag,
    /// Output value, emission count, domain size, class count or iteration count.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<i64>,
    /// Declared finite domain of a unary function.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<Vec<u64>>,
    /// Declared finite domain of a binary function.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<[u64; 2]>>,
    /// Truthful oracle answers, in query order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub answers: Option<Vec<bool>>,
    /// Whether an effective operation is a Church iterator.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iterator: Option<bool>,
    /// Why a divergent program never halts; goes to the registry file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub justification: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fixture {
    pub meta: FixtureMeta,
    /// The U-program (raw programs carry the leading `1`).
    pub program: Word,
}

impl Fixture {
    pub fn name(&self) -> &str {
        &self.meta.name
    }
}

#[derive(Debug, thiserror::Error)]
pub enum FixtureError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("manifest: {0}")]
    Manifest(#[from] toml::de::Error),
    #[error("fixture {name}: {source}")]
    Asm { name: String, source: AsmError },
    #[error("fixture {name}: {source}")]
    BadProgram { name: String, source: WordError },
    #[error("registry names unknown fixture {0}")]
    UnknownRegistryEntry(String),
    #[error("registry line {0} is not `name: justification`")]
    BadRegistryLine(usize),
}

#[derive(Serialize, Deserialize)]
struct Manifest {
    fixture: Vec<FixtureMeta>,
}

#[derive(Debug, Clone)]
pub struct FixtureSet {
    pub fixtures: Vec<Fixture>,
    pub registry: Registry,
}

impl FixtureSet {
    pub fn get(&self, name: &str) -> Option<&Fixture> {
        self.fixtures.iter().find(|f| f.name() == name)
    }

    pub fn by_mode(&self, mode: FixtureMode) -> impl Iterator<Item = &Fixture> {
        self.fixtures.iter().filter(move |f| f.meta.mode == mode)
    }

    pub fn universe(&self) -> Universe {
        Universe::new(self.registry.clone())
    }
}

/// Prefix machine code with the RAW header.
pub fn raw_word(code: &Word) -> Word {
    let mut w = Word::new();
    w.push(true);
    w.extend_from(code);
    w
}

fn raw(src: &str) -> Word {
    raw_word(&assemble_bits(src).expect("built-in fixture assembles"))
}

/// Literal operand naming a U-program, for `QUERY`.
fn program_literal(src: &str) -> Nat {
    word_to_nat(&raw(src))
}

const TARGET_HALT1: &str = "INC r0";
const TARGET_HALT2: &str = "INC r0\nINC r0";
const TARGET_LOOP: &str = "DECJZ r0, 0";
const TARGET_INVALID: &str = "INVALID";

struct Def {
    meta: FixtureMeta,
    src: String,
}

fn meta(name: &str, mode: FixtureMode, behavior: &str, flag: Flag) -> FixtureMeta {
    FixtureMeta {
        name: name.to_string(),
        mode,
        behavior: behavior.to_string(),
        flag,
        expect: None,
        domain: None,
        edges: None,
        answers: None,
        iterator: None,
        justification: None,
    }
}

fn emit_halt(k: usize) -> String {
    "EMIT\n".repeat(k) + "HALT"
}

fn emit_loop(k: usize) -> String {
    "EMIT\n".repeat(k) + "DECJZ r0, 0"
}

/// Halts iff `a <= x < b`; r0 stays 0 and serves as an always-jump register.
fn range_src(a: u64, b: u64) -> String {
    format!(
        "        INPUT 0, r1
        LOADC r2, #{a}
        LOADC r3, #{width}
sub:    DECJZ r2, check
        DECJZ r1, spin
        DECJZ r0, sub
check:  DECJZ r3, spin
        DECJZ r1, done
        DECJZ r0, check
spin:   DECJZ r0, 0
done:   HALT",
        width = b - a
    )
}

/// Halts iff `(x, y)` is one of the edges.
fn edges_src(edges: &[(u64, u64)]) -> String {
    let mut src = String::new();
    for (i, (a, b)) in edges.iter().enumerate() {
        let next = format!("e{}", i + 1);
        src.push_str(&format!(
            "e{i}:    INPUT 0, r1
        INPUT 1, r2
        LOADC r3, #{a}
x{i}:    DECJZ r3, xt{i}
        DECJZ r1, {next}
        DECJZ r0, x{i}
xt{i}:   DECJZ r1, y{i}
        DECJZ r0, {next}
y{i}:    LOADC r3, #{b}
ys{i}:   DECJZ r3, yt{i}
        DECJZ r2, {next}
        DECJZ r0, ys{i}
yt{i}:   DECJZ r2, done
        DECJZ r0, {next}
"
        ));
    }
    src.push_str(&format!("e{}:    DECJZ r0, 0\ndone:  HALT", edges.len()));
    src
}

fn builtin_defs() -> Vec<Def> {
    use FixtureMode::*;
    let mut defs = Vec::new();
    let mut add = |m: FixtureMeta, src: String| defs.push(Def { meta: m, src });

    // halting programs, also used as query targets
    let mut m = meta("output0", Halt, "halts at once with 0", Flag::KnownHalting);
    m.expect = Some(0);
    add(m, "HALT".into());
    let mut m = meta(
        "output5",
        Halt,
        "loads 5 and outputs it",
        Flag::KnownHalting,
    );
    m.expect = Some(5);
    add(m, "LOADC r1, #5\nOUTPUT r1".into());
    let mut m = meta(
        "inc1",
        Halt,
        "increments r0 once and falls off the end",
        Flag::KnownHalting,
    );
    m.expect = Some(1);
    add(m, TARGET_HALT1.into());
    let mut m = meta(
        "inc2",
        Halt,
        "increments r0 twice and falls off the end",
        Flag::KnownHalting,
    );
    m.expect = Some(2);
    add(m, TARGET_HALT2.into());
    let mut m = meta(
        "selfloop",
        Halt,
        "jumps to itself forever",
        Flag::KnownDivergent,
    );
    m.justification = Some("DECJZ on the zero register with offset 0 never moves pc".into());
    add(m, TARGET_LOOP.into());
    let mut m = meta(
        "invalid_spin",
        Halt,
        "invalid opcode spins forever",
        Flag::KnownDivergent,
    );
    m.justification = Some("an invalid opcode leaves pc unchanged".into());
    add(m, TARGET_INVALID.into());

    // streams with 0..=10 emissions
    for k in 0..=10usize {
        let mut m = meta(
            &format!("emit{k}"),
            Stream,
            &format!("emits {k} times then halts"),
            Flag::KnownHalting,
        );
        m.expect = Some(k as i64);
        add(m, emit_halt(k));
    }
    for k in 0..=8usize {
        let mut m = meta(
            &format!("emit{k}_loop"),
            Stream,
            &format!("emits {k} times then spins forever"),
            Flag::KnownDivergent,
        );
        m.expect = Some(k as i64);
        m.justification = Some(format!(
            "after {k} emissions a zero-offset jump spins forever"
        ));
        add(m, emit_loop(k));
    }

    // functions with declared finite domains
    let mut ranges: Vec<(u64, u64)> = (0..10).map(|k| (0, k)).collect();
    ranges.extend([
        (1, 3),
        (2, 5),
        (3, 4),
        (4, 8),
        (5, 6),
        (6, 9),
        (7, 12),
        (2, 3),
        (10, 12),
        (1, 6),
    ]);
    for (a, b) in ranges {
        let name = if a == 0 {
            format!("dom{b}")
        } else {
            format!("range{a}_{b}")
        };
        let mut m = meta(
            &name,
            Func,
            &format!("halts with 0 iff {a} <= x < {b}, spins otherwise"),
            Flag::Partial,
        );
        m.expect = Some((b - a) as i64);
        m.domain = Some((a..b).collect());
        add(m, range_src(a, b));
    }
    let mut m = meta(
        "identity",
        Func,
        "returns its input; total",
        Flag::KnownHalting,
    );
    add(m.clone(), "INPUT 0, r0".into());
    m = meta(
        "nowhere",
        Func,
        "spins on every input",
        Flag::KnownDivergent,
    );
    m.domain = Some(Vec::new());
    m.expect = Some(0);
    m.justification = Some("first instruction is a zero-offset jump".into());
    add(m, TARGET_LOOP.into());

    // binary relations given by explicit edge lists
    type RelationDef<'a> = (&'a str, &'a [(u64, u64)], Option<i64>);
    let relations: [RelationDef; 8] = [
        ("rel_empty", &[], Some(0)),
        ("rel_loop0", &[(0, 0)], Some(1)),
        ("rel_chain3", &[(0, 1), (1, 2)], Some(3)),
        ("rel_chain4", &[(0, 1), (1, 2), (2, 3)], Some(4)),
        ("rel_back3", &[(2, 1), (1, 0)], Some(3)),
        ("rel_cycle2", &[(0, 1), (1, 0)], Some(1)),
        ("rel_cycle3", &[(0, 1), (1, 2), (2, 0)], Some(1)),
        ("rel_fork", &[(0, 1), (0, 2)], None),
    ];
    for (name, edges, expect) in relations {
        let behavior = match expect {
            Some(n) => format!("halts exactly on {edges:?}; quotient is a chain of {n}"),
            None => format!("halts exactly on {edges:?}; quotient is not a chain"),
        };
        let mut m = meta(name, Func2, &behavior, Flag::Partial);
        m.expect = expect;
        m.edges = Some(edges.iter().map(|&(a, b)| [a, b]).collect());
        add(m, edges_src(edges));
    }

    // effective operations
    let mut m = meta(
        "effop_const0",
        Effop,
        "F(f) = the constant 0 function",
        Flag::KnownHalting,
    );
    m.iterator = Some(false);
    m.expect = Some(0);
    add(m, "HALT".into());
    let mut m = meta(
        "effop_identity",
        Effop,
        "F(f) = identity",
        Flag::KnownHalting,
    );
    m.iterator = Some(true);
    m.expect = Some(0);
    add(m, "INPUT 0, r0".into());
    let mut m = meta("effop_twice", Effop, "F(f) = f∘f", Flag::KnownHalting);
    m.iterator = Some(true);
    m.expect = Some(2);
    add(m, "INPUT 0, r0\nCALLARG r0\nCALLARG r0".into());
    let mut m = meta(
        "effop_plus1",
        Effop,
        "F(f)(x) = f(x) + 1",
        Flag::KnownHalting,
    );
    m.iterator = Some(false);
    m.expect = Some(2);
    add(m, "INPUT 0, r0\nCALLARG r0\nINC r0".into());

    // oracle programs (halting value output)
    let halt1 = program_literal(TARGET_HALT1);
    let halt2 = program_literal(TARGET_HALT2);
    let looping = program_literal(TARGET_LOOP);
    let invalid = program_literal(TARGET_INVALID);

    let mut m = meta(
        "oq0_const2",
        Oracle,
        "no queries; outputs 2",
        Flag::KnownHalting,
    );
    m.expect = Some(2);
    m.answers = Some(vec![]);
    add(m, "LOADC r1, #2\nOUTPUT r1".into());

    let one_query = |target: &Nat| {
        format!(
            "        LOADC r1, #{target}
        LOADC r2, #2
        QUERY r1, no
        LOADC r2, #1
        OUTPUT r2
no:     OUTPUT r2"
        )
    };
    let mut m = meta(
        "oq1_yes",
        Oracle,
        "asks about inc2; 1 on YES, 2 on NO",
        Flag::KnownHalting,
    );
    m.expect = Some(1);
    m.answers = Some(vec![true]);
    add(m, one_query(&halt2));
    let mut m = meta(
        "oq1_no",
        Oracle,
        "asks about selfloop; 1 on YES, 2 on NO",
        Flag::KnownHalting,
    );
    m.expect = Some(2);
    m.answers = Some(vec![false]);
    add(m, one_query(&looping));

    // 1 + (Q1 ? 1 : 0) + (Q2 ? 2 : 0) [+ (Q3 ? 4 : 0)]
    let sum_queries = |targets: &[&Nat]| {
        let mut src = String::from("        INC r2\n");
        for (i, t) in targets.iter().enumerate() {
            let weight = 1u64 << i;
            src.push_str(&format!("        LOADC r1, #{t}\n        QUERY r1, s{i}\n"));
            src.push_str(&"        INC r2\n".repeat(weight as usize));
            src.push_str(&format!("s{i}:    INC r3\n"));
        }
        src.push_str("        OUTPUT r2");
        src
    };
    let mut m = meta(
        "oq2_mixed",
        Oracle,
        "1 + [inc1 halts] + 2[selfloop halts]",
        Flag::KnownHalting,
    );
    m.expect = Some(2);
    m.answers = Some(vec![true, false]);
    add(m, sum_queries(&[&halt1, &looping]));
    let mut m = meta(
        "oq3_sum",
        Oracle,
        "1 + [inc2 halts] + 2[invalid_spin halts] + 4[inc1 halts]",
        Flag::KnownHalting,
    );
    m.expect = Some(6);
    m.answers = Some(vec![true, false, true]);
    add(m, sum_queries(&[&halt2, &invalid, &halt1]));

    let mut m = meta(
        "oq2_nested",
        Oracle,
        "asks about inc1; on YES asks about inc2; outputs 1, 2 or 3",
        Flag::KnownHalting,
    );
    m.expect = Some(3);
    m.answers = Some(vec![true, true]);
    add(
        m,
        format!(
            "        LOADC r2, #1
        LOADC r1, #{halt1}
        QUERY r1, out
        INC r2
        LOADC r1, #{halt2}
        QUERY r1, out
        INC r2
out:    OUTPUT r2"
        ),
    );

    // oracle streams (unary output)
    for k in [1usize, 3] {
        let mut m = meta(
            &format!("os_emit{k}"),
            Ostream,
            &format!("no queries; emits {k} times"),
            Flag::KnownHalting,
        );
        m.expect = Some(k as i64);
        m.answers = Some(vec![]);
        add(m, emit_halt(k));
    }
    let mut m = meta(
        "os1_yes",
        Ostream,
        "emits once, asks about inc2; one more emission on YES, three on NO",
        Flag::KnownHalting,
    );
    m.expect = Some(2);
    m.answers = Some(vec![true]);
    add(
        m,
        format!(
            "        LOADC r1, #{halt2}
        EMIT
        QUERY r1, no
        EMIT
        HALT
no:     EMIT
        EMIT
        EMIT"
        ),
    );
    let mut m = meta(
        "os1_no",
        Ostream,
        "asks about selfloop; emits 3 times on YES, once on NO",
        Flag::KnownHalting,
    );
    m.expect = Some(1);
    m.answers = Some(vec![false]);
    add(
        m,
        format!(
            "        LOADC r1, #{looping}
        QUERY r1, no
        EMIT
        EMIT
no:     EMIT"
        ),
    );
    let mut m = meta(
        "os2_mixed",
        Ostream,
        "one emission, then one more per YES about selfloop and inc1",
        Flag::KnownHalting,
    );
    m.expect = Some(2);
    m.answers = Some(vec![false, true]);
    add(
        m,
        format!(
            "        EMIT
        LOADC r1, #{looping}
        QUERY r1, a
        EMIT
a:      LOADC r1, #{halt1}
        QUERY r1, b
        EMIT
b:      HALT"
        ),
    );
    let mut m = meta(
        "os3_chain",
        Ostream,
        "emits once before each query about inc1, inc2, invalid_spin, and once per YES",
        Flag::KnownHalting,
    );
    m.expect = Some(5);
    m.answers = Some(vec![true, true, false]);
    add(
        m,
        format!(
            "        EMIT
        LOADC r1, #{halt1}
        QUERY r1, a
        EMIT
a:      EMIT
        LOADC r1, #{halt2}
        QUERY r1, b
        EMIT
b:      EMIT
        LOADC r1, #{invalid}
        QUERY r1, c
        EMIT
c:      HALT"
        ),
    );

    defs
}

/// Assemble the built-in fixture set.
pub fn builtin() -> FixtureSet {
    let fixtures: Vec<Fixture> = builtin_defs()
        .into_iter()
        .map(|d| Fixture {
            program: raw(&d.src),
            meta: d.meta,
        })
        .collect();
    let registry = build_registry(&fixtures, &registry_entries(&fixtures))
        .expect("built-in registry is consistent");
    FixtureSet { fixtures, registry }
}

fn registry_entries(fixtures: &[Fixture]) -> Vec<(String, String)> {
    fixtures
        .iter()
        .filter_map(|f| {
            f.meta
                .justification
                .as_ref()
                .map(|j| (f.meta.name.clone(), j.clone()))
        })
        .collect()
}

fn build_registry(
    fixtures: &[Fixture],
    divergent: &[(String, String)],
) -> Result<Registry, FixtureError> {
    let mut reg = Registry::new();
    for (name, why) in divergent {
        let f = fixtures
            .iter()
            .find(|f| &f.meta.name == name)
            .ok_or_else(|| FixtureError::UnknownRegistryEntry(name.clone()))?;
        reg.add_divergent(f.program.clone(), why.clone());
    }
    for f in fixtures {
        if let Some(d) = &f.meta.domain {
            let set: BTreeSet<Nat> = d.iter().map(|&x| nat(x)).collect();
            reg.add_domain(f.program.clone(), DeclaredDomain::Unary(set));
        }
        if let Some(e) = &f.meta.edges {
            let set = e.iter().map(|&[a, b]| (nat(a), nat(b))).collect();
            reg.add_domain(f.program.clone(), DeclaredDomain::Binary(set));
        }
    }
    Ok(reg)
}

pub const MANIFEST: &str = "manifest.toml";
pub const REGISTRY: &str = "registry.txt";

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> FixtureError + '_ {
    move |source| FixtureError::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn manifest_text(set: &FixtureSet) -> String {
    let manifest = Manifest {
        fixture: set.fixtures.iter().map(|f| f.meta.clone()).collect(),
    };
    toml::to_string(&manifest).expect("manifest serializes")
}

pub fn registry_text(set: &FixtureSet) -> String {
    registry_entries(&set.fixtures)
        .into_iter()
        .map(|(name, why)| format!("{name}: {why}\n"))
        .collect()
}

/// Write `<name>.prog`, the manifest and the registry into `dir`.
pub fn write_dir(set: &FixtureSet, dir: &Path) -> Result<(), FixtureError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    for f in &set.fixtures {
        let path = dir.join(format!("{}.prog", f.name()));
        fs::write(&path, format!("{}\n", f.program)).map_err(io_err(&path))?;
    }
    let path = dir.join(MANIFEST);
    fs::write(&path, manifest_text(set)).map_err(io_err(&path))?;
    let path = dir.join(REGISTRY);
    fs::write(&path, registry_text(set)).map_err(io_err(&path))?;
    Ok(())
}

/// Read a program file: '0'/'1' text, surrounding whitespace ignored.
pub fn read_program(path: &Path) -> Result<Word, FixtureError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    text.trim()
        .parse()
        .map_err(|source| FixtureError::BadProgram {
            name: path.display().to_string(),
            source,
        })
}

pub fn parse_registry(text: &str) -> Result<Vec<(String, String)>, FixtureError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| {
            l.split_once(':')
                .map(|(n, j)| (n.trim().to_string(), j.trim().to_string()))
                .ok_or(FixtureError::BadRegistryLine(i + 1))
        })
        .collect()
}

/// Load a fixture directory written by [`write_dir`].
pub fn load_dir(dir: &Path) -> Result<FixtureSet, FixtureError> {
    let path = dir.join(MANIFEST);
    let text = fs::read_to_string(&path).map_err(io_err(&path))?;
    let manifest: Manifest = toml::from_str(&text)?;
    let mut fixtures = Vec::new();
    for meta in manifest.fixture {
        let program = read_program(&dir.join(format!("{}.prog", meta.name)))?;
        fixtures.push(Fixture { meta, program });
    }
    let path = dir.join(REGISTRY);
    let text = fs::read_to_string(&path).map_err(io_err(&path))?;
    let registry = build_registry(&fixtures, &parse_registry(&text)?)?;
    Ok(FixtureSet { fixtures, registry })
}

pub const ENV_VAR: &str = "REPRK_FIXTURES";

/// `$REPRK_FIXTURES`, else the `fixtures/` directory shipped with the workspace.
pub fn default_dir() -> PathBuf {
    match std::env::var_os(ENV_VAR) {
        Some(dir) => PathBuf::from(dir),
        None => Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_unique() {
        let set = builtin();
        let names: BTreeSet<&str> = set.fixtures.iter().map(Fixture::name).collect();
        assert_eq!(names.len(), set.fixtures.len());
    }

    #[test]
    fn corpus_sizes() {
        let set = builtin();
        assert_eq!(set.by_mode(FixtureMode::Stream).count(), 20);
        let declared = set
            .by_mode(FixtureMode::Func)
            .filter(|f| f.meta.domain.as_ref().is_some_and(|d| !d.is_empty()))
            .count();
        assert!(declared >= 19);
    }

    #[test]
    fn write_then_load_roundtrips() {
        let set = builtin();
        let dir = tempfile::tempdir().unwrap();
        write_dir(&set, dir.path()).unwrap();
        let back = load_dir(dir.path()).unwrap();
        assert_eq!(back.fixtures, set.fixtures);
        assert_eq!(back.registry.len(), set.registry.len());
    }

    #[test]
    fn registry_lines_parse() {
        let entries = parse_registry("# comment\nselfloop: spins\n\n").unwrap();
        assert_eq!(entries, vec![("selfloop".to_string(), "spins".to_string())]);
        assert!(parse_registry("no colon here").is_err());
    }
}
