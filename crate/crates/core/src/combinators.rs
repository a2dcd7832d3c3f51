//! Header dispatch of the universal machine.
//!
//! A U-program is `couple(e, p)`. The header `e` selects a host-implemented
//! transformation applied to the payload `p`; the empty header runs `p` as
//! raw machine code. Every combinator costs exactly `2|e| + 1` extra bits.

use std::fmt;
use std::str::FromStr;

use crate::word::{couple_decode, couple_encode, nat_to_word, word_to_nat, Word};
use crate::Nat;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Combinator {
    Raw,
    Halt2Stream,
    Stream2Card,
    Card2Stream,
    Oracle2CardZ,
    CardZ2Oracle,
    OracleStream2Ord,
    Ord2OracleStream,
    ChurchExtract,
    /// Payload is a halting program for `n`; denotes `f ↦ f⁽ⁿ⁾`.
    Iterate,
    Id,
    Iter(Nat),
    NegIter(Nat),
    /// No combinator has this header: the program is defined nowhere.
    Unknown,
}

const FIXED: [(Combinator, &str, &str); 10] = [
    (Combinator::Halt2Stream, "0000", "HALT2STREAM"),
    (Combinator::Stream2Card, "0001", "STREAM2CARD"),
    (Combinator::Card2Stream, "0010", "CARD2STREAM"),
    (Combinator::Oracle2CardZ, "0011", "ORACLE2CARDZ"),
    (Combinator::CardZ2Oracle, "0100", "CARDZ2ORACLE"),
    (Combinator::OracleStream2Ord, "0101", "ORACLESTREAM2ORD"),
    (Combinator::Ord2OracleStream, "0110", "ORD2ORACLESTREAM"),
    (Combinator::ChurchExtract, "0111", "CHURCH_EXTRACT"),
    (Combinator::Iterate, "1110", "ITERATE"),
    (Combinator::Id, "1111", "ID"),
];

const ITER_PREFIX: &str = "10";
const NEGITER_PREFIX: &str = "110";

fn word(s: &str) -> Word {
    s.parse().expect("static header")
}

impl Combinator {
    /// All combinators with a fixed header, plus RAW.
    pub fn fixed() -> Vec<Combinator> {
        std::iter::once(Combinator::Raw)
            .chain(FIXED.iter().map(|(c, _, _)| c.clone()))
            .collect()
    }

    pub fn header(&self) -> Word {
        match self {
            Combinator::Raw => Word::new(),
            Combinator::Iter(n) => word(ITER_PREFIX).concat(&nat_to_word(n)),
            Combinator::NegIter(n) => word(NEGITER_PREFIX).concat(&nat_to_word(n)),
            Combinator::Unknown => panic!("the unknown combinator has no header"),
            fixed => FIXED
                .iter()
                .find(|(c, _, _)| c == fixed)
                .map(|(_, h, _)| word(h))
                .expect("fixed combinator"),
        }
    }

    /// Length overhead `2|e| + 1`.
    pub fn constant(&self) -> usize {
        2 * self.header().len() + 1
    }

    pub fn compile(&self, payload: &Word) -> Word {
        couple_encode(&self.header(), payload)
    }

    pub fn from_header(header: &Word) -> Combinator {
        if header.is_empty() {
            return Combinator::Raw;
        }
        let text = header.to_string();
        if let Some((c, _, _)) = FIXED.iter().find(|(_, h, _)| *h == text) {
            return c.clone();
        }
        if let Some(rest) = text.strip_prefix(NEGITER_PREFIX) {
            return Combinator::NegIter(word_to_nat(&word(rest)));
        }
        if let Some(rest) = text.strip_prefix(ITER_PREFIX) {
            return Combinator::Iter(word_to_nat(&word(rest)));
        }
        Combinator::Unknown
    }

    pub fn name(&self) -> String {
        match self {
            Combinator::Raw => "RAW".into(),
            Combinator::Iter(n) => format!("ITER:{n}"),
            Combinator::NegIter(n) => format!("NEGITER:{n}"),
            Combinator::Unknown => "UNKNOWN".into(),
            fixed => FIXED
                .iter()
                .find(|(c, _, _)| c == fixed)
                .map(|(_, _, name)| (*name).to_string())
                .expect("fixed combinator"),
        }
    }
}

impl fmt::Display for Combinator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown combinator {0:?} (expected RAW, ITER:n, NEGITER:n or one of the fixed names)")]
pub struct UnknownCombinator(pub String);

impl FromStr for Combinator {
    type Err = UnknownCombinator;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let upper = s.trim().to_ascii_uppercase();
        let bad = || UnknownCombinator(s.to_string());
        if upper == "RAW" {
            return Ok(Combinator::Raw);
        }
        if let Some((kind, n)) = upper.split_once(':') {
            let n: Nat = n.parse().map_err(|_| bad())?;
            return match kind {
                "ITER" => Ok(Combinator::Iter(n)),
                "NEGITER" => Ok(Combinator::NegIter(n)),
                _ => Err(bad()),
            };
        }
        FIXED
            .iter()
            .find(|(_, _, name)| *name == upper)
            .map(|(c, _, _)| c.clone())
            .ok_or_else(bad)
    }
}

/// Split a U-program into its combinator and payload. Total: words that do
/// not decode, or carry an unregistered header, map to [`Combinator::Unknown`].
pub fn universal_decode(w: &Word) -> (Combinator, Word) {
    match couple_decode(w) {
        Ok(pair) => match Combinator::from_header(&pair.header) {
            Combinator::Unknown => (Combinator::Unknown, pair.payload),
            c => (c, pair.payload),
        },
        Err(_) => (Combinator::Unknown, Word::new()),
    }
}

/// `name,header_bits,c` rows for the published table.
pub fn table_csv() -> String {
    let mut out = String::from("name,header_bits,c\n");
    for c in Combinator::fixed() {
        out.push_str(&format!("{},{},{}\n", c.name(), c.header(), c.constant()));
    }
    out.push_str("ITER:n,10+w(n),5+2|w(n)|\n");
    out.push_str("NEGITER:n,110+w(n),7+2|w(n)|\n");
    out
}
