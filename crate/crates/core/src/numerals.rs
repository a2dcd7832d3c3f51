//! Number-theoretic representations: positional systems seen as digit-map
//! algebras (`S_d : x ↦ kx + d`) and the additive four-squares / prime-sum
//! representations.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NumeralError {
    #[error("digit {digit} is not in the digit set of {system}")]
    DigitOutOfRange { digit: i64, system: String },
    #[error("{0} is not representable in {1}")]
    NegativeNotRepresentable(BigInt, String),
    #[error("rewrite does not match the relation at position {0}")]
    RelationMismatch(usize),
    #[error("{0} is not a sum of primes")]
    NotRepresentable(u64),
    #[error("invalid base {0} for {1}")]
    BadBase(u32, &'static str),
    #[error("cannot parse digit string {0:?}")]
    BadDigits(String),
    #[error("unknown numeral system {0:?}")]
    UnknownSystem(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SystemKind {
    Unary,
    KAry,
    KAdic,
    Avizienis,
}

impl FromStr for SystemKind {
    type Err = NumeralError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "unary" => Ok(Self::Unary),
            "k-ary" | "kary" => Ok(Self::KAry),
            "k-adic" | "kadic" => Ok(Self::KAdic),
            "avizienis" => Ok(Self::Avizienis),
            other => Err(NumeralError::UnknownSystem(other.to_string())),
        }
    }
}

/// A positional system: base plus digit set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PositionalSystem {
    kind: SystemKind,
    base: u32,
}

impl PositionalSystem {
    pub fn unary() -> Self {
        Self {
            kind: SystemKind::Unary,
            base: 1,
        }
    }

    pub fn k_ary(k: u32) -> Result<Self, NumeralError> {
        Self::new(SystemKind::KAry, k)
    }

    pub fn k_adic(k: u32) -> Result<Self, NumeralError> {
        Self::new(SystemKind::KAdic, k)
    }

    pub fn avizienis(k: u32) -> Result<Self, NumeralError> {
        Self::new(SystemKind::Avizienis, k)
    }

    /// Unary ignores `k` (its base is always 1).
    pub fn new(kind: SystemKind, k: u32) -> Result<Self, NumeralError> {
        match kind {
            SystemKind::Unary => Ok(Self::unary()),
            _ if k < 2 => Err(NumeralError::BadBase(k, "positional systems need k >= 2")),
            _ => Ok(Self { kind, base: k }),
        }
    }

    pub fn kind(&self) -> SystemKind {
        self.kind
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    /// Inclusive digit range.
    pub fn digit_range(&self) -> (i64, i64) {
        let k = i64::from(self.base);
        match self.kind {
            SystemKind::Unary => (1, 1),
            SystemKind::KAry => (0, k - 1),
            SystemKind::KAdic => (1, k),
            SystemKind::Avizienis => (-k + 1, k - 1),
        }
    }

    pub fn contains(&self, digit: i64) -> bool {
        let (lo, hi) = self.digit_range();
        (lo..=hi).contains(&digit)
    }

    /// `S_d(x) = kx + d`.
    pub fn apply_digit(&self, d: i64, x: &BigInt) -> BigInt {
        x * BigInt::from(self.base) + BigInt::from(d)
    }
}

impl fmt::Display for PositionalSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SystemKind::Unary => f.write_str("unary"),
            SystemKind::KAry => write!(f, "{}-ary", self.base),
            SystemKind::KAdic => write!(f, "{}-adic", self.base),
            SystemKind::Avizienis => write!(f, "avizienis-{}", self.base),
        }
    }
}

/// Digits `d_n … d_0`, most significant first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct DigitString(pub Vec<i64>);

impl DigitString {
    pub fn digits(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Digits 0..=9 are written contiguously; anything else is comma separated.
impl fmt::Display for DigitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|d| (0..=9).contains(d)) {
            for d in &self.0 {
                write!(f, "{d}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(|d| d.to_string()).collect();
            f.write_str(&parts.join(","))
        }
    }
}

impl FromStr for DigitString {
    type Err = NumeralError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || NumeralError::BadDigits(s.to_string());
        let s = s.trim();
        if s.is_empty() {
            return Ok(DigitString::default());
        }
        if s.contains(',') {
            s.split(',')
                .map(|p| p.trim().parse::<i64>().map_err(|_| bad()))
                .collect::<Result<Vec<_>, _>>()
                .map(DigitString)
        } else {
            s.chars()
                .map(|c| c.to_digit(10).map(i64::from).ok_or_else(bad))
                .collect::<Result<Vec<_>, _>>()
                .map(DigitString)
        }
    }
}

/// Horner evaluation, i.e. `S_{d_0} ∘ … ∘ S_{d_n}(0)`.
pub fn digits_to_value(sys: &PositionalSystem, ds: &DigitString) -> Result<BigInt, NumeralError> {
    let mut acc = BigInt::zero();
    for &d in ds.digits() {
        if !sys.contains(d) {
            return Err(NumeralError::DigitOutOfRange {
                digit: d,
                system: sys.to_string(),
            });
        }
        acc = sys.apply_digit(d, &acc);
    }
    Ok(acc)
}

pub fn value_to_digits(sys: &PositionalSystem, n: &BigInt) -> Result<DigitString, NumeralError> {
    if n.is_negative() && sys.kind != SystemKind::Avizienis {
        return Err(NumeralError::NegativeNotRepresentable(
            n.clone(),
            sys.to_string(),
        ));
    }
    let k = BigInt::from(sys.base);
    let mut out = Vec::new();
    let mut n = n.clone();
    match sys.kind {
        SystemKind::Unary => {
            let count = n.to_usize().ok_or_else(|| {
                NumeralError::NegativeNotRepresentable(n.clone(), sys.to_string())
            })?;
            return Ok(DigitString(vec![1; count]));
        }
        SystemKind::KAry => {
            if n.is_zero() {
                return Ok(DigitString(vec![0]));
            }
            while !n.is_zero() {
                let (q, r) = n.div_rem(&k);
                out.push(r.to_i64().expect("digit fits"));
                n = q;
            }
        }
        SystemKind::KAdic => {
            // Remainder taken in {1..k}.
            while !n.is_zero() {
                let mut r = n.mod_floor(&k);
                if r.is_zero() {
                    r = k.clone();
                }
                out.push(r.to_i64().expect("digit fits"));
                n = (n - r) / &k;
            }
        }
        SystemKind::Avizienis => {
            let half = i64::from(sys.base) / 2;
            let kk = i64::from(sys.base);
            while !n.is_zero() {
                let mut d = n.mod_floor(&k).to_i64().expect("digit fits");
                if d > half || (d == half && kk % 2 == 0 && n.is_negative()) {
                    d -= kk;
                }
                out.push(d);
                n = (n - d) / &k;
            }
        }
    }
    out.reverse();
    Ok(DigitString(out))
}

/// One instance of `S_{-k+i} ∘ S_{j+1} = S_i ∘ S_j`: at `position` (0 = least
/// significant) the digit pair `(higher, lower)` is `(j+1, -k+i)` on one side
/// and `(j, i)` on the other.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rewrite {
    Identity,
    Relation { position: usize, j: i64, i: i64 },
}

pub fn avizienis_rewrite(
    sys: &PositionalSystem,
    ds: &DigitString,
    rewrite: Rewrite,
) -> Result<DigitString, NumeralError> {
    let Rewrite::Relation { position, j, i } = rewrite else {
        return Ok(ds.clone());
    };
    let k = i64::from(sys.base);
    if sys.kind != SystemKind::Avizienis || !(-k < j && j < k - 1) || !(0 < i && i < k) {
        return Err(NumeralError::RelationMismatch(position));
    }
    let len = ds.len();
    if position + 1 >= len {
        return Err(NumeralError::RelationMismatch(position));
    }
    let lo = len - 1 - position;
    let hi = lo - 1;
    let mut digits = ds.0.clone();
    match (digits[hi], digits[lo]) {
        (h, l) if h == j + 1 && l == -k + i => {
            digits[hi] = j;
            digits[lo] = i;
        }
        (h, l) if h == j && l == i => {
            digits[hi] = j + 1;
            digits[lo] = -k + i;
        }
        _ => return Err(NumeralError::RelationMismatch(position)),
    }
    Ok(DigitString(digits))
}

/// Lexicographically least `(x, y, z, t)` with `x ≥ y ≥ z ≥ t` and
/// `x² + y² + z² + t² = n`.
pub fn four_squares(n: u64) -> (u64, u64, u64, u64) {
    if n == 0 {
        return (0, 0, 0, 0);
    }
    let root = n.isqrt();
    // x is the largest component, so 4x² ≥ n.
    let mut x = (n / 4).isqrt();
    while 4 * x * x < n {
        x += 1;
    }
    while x <= root {
        let r1 = n - x * x;
        for y in 0..=x.min(r1.isqrt()) {
            let r2 = r1 - y * y;
            for z in 0..=y.min(r2.isqrt()) {
                let r3 = r2 - z * z;
                let t = r3.isqrt();
                if t * t == r3 && t <= z {
                    return (x, y, z, t);
                }
            }
        }
        x += 1;
    }
    unreachable!("Lagrange: every natural is a sum of four squares")
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub const MAX_PRIME_SUMMANDS: usize = 7;

/// Non-increasing list of at most seven primes summing to `n`, found by
/// greedy largest-first search with backtracking.
pub fn prime_sum(n: u64) -> Result<Vec<u64>, NumeralError> {
    fn search(rem: u64, cap: u64, depth: usize, acc: &mut Vec<u64>) -> bool {
        if rem == 0 {
            return true;
        }
        if depth == 0 {
            return false;
        }
        let mut p = rem.min(cap);
        while p >= 2 {
            if is_prime(p) {
                acc.push(p);
                if search(rem - p, p, depth - 1, acc) {
                    return true;
                }
                acc.pop();
            }
            p -= 1;
        }
        false
    }
    if n < 2 {
        return Err(NumeralError::NotRepresentable(n));
    }
    let mut acc = Vec::new();
    if search(n, n, MAX_PRIME_SUMMANDS, &mut acc) {
        Ok(acc)
    } else {
        Err(NumeralError::NotRepresentable(n))
    }
}
