//! Church iterators and probe checks for effective operations.

use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dovetail::{rounds_for_budget, DovetailRun, Task};
use crate::universe::{Applied, EvalError, Universe};
use crate::vm::ArgFn;
use crate::word::Word;
use crate::{nat, Nat};

/// `x ↦ x + 1`.
#[derive(Debug, Clone, Copy)]
pub struct Successor;

impl ArgFn for Successor {
    fn call(&self, x: &Nat) -> Option<Nat> {
        Some(x + 1u32)
    }
}

/// `x ↦ 2x` on `x < limit`, undefined above: a finite table.
#[derive(Debug, Clone, Copy)]
pub struct DoublingTable {
    pub limit: u64,
}

impl Default for DoublingTable {
    fn default() -> Self {
        DoublingTable { limit: 1 << 24 }
    }
}

impl ArgFn for DoublingTable {
    fn call(&self, x: &Nat) -> Option<Nat> {
        x.to_u64().filter(|&v| v < self.limit).map(|v| nat(2 * v))
    }
}

/// `f⁽ⁿ⁾(x)`, one step per application of `f`.
pub fn iterate(f: &dyn ArgFn, n: &Nat, x: &Nat, budget: u64) -> Applied {
    let Some(n) = n.to_u64().filter(|&n| n <= budget) else {
        return Applied::undefined(budget);
    };
    let mut v = x.clone();
    for _ in 0..n {
        match f.call(&v) {
            Some(next) => v = next,
            None => return Applied::undefined(budget),
        }
    }
    Applied {
        value: Some(v),
        steps: n,
    }
}

struct IterTask<'a> {
    f: &'a dyn ArgFn,
    remaining: u64,
    value: Nat,
    stuck: bool,
}

impl Task for IterTask<'_> {
    type Value = Nat;
    type Error = std::convert::Infallible;

    fn halted(&self) -> Option<Nat> {
        (self.remaining == 0 && !self.stuck).then(|| self.value.clone())
    }

    fn step(&mut self) -> Result<(), Self::Error> {
        if self.stuck {
            return Ok(());
        }
        match self.f.call(&self.value) {
            Some(v) => {
                self.value = v;
                self.remaining -= 1;
            }
            None => self.stuck = true,
        }
        Ok(())
    }
}

/// `It₋ₙ(f)(x)`: the `y` of the first computation `f⁽ⁿ⁾(y)`, in dovetail
/// order, that halts with value `x`.
pub fn neg_iterate(f: &dyn ArgFn, n: &Nat, x: &Nat, budget: u64) -> Applied {
    let Some(n) = n.to_u64() else {
        return Applied::undefined(budget);
    };
    let mut run = DovetailRun::new(|y| IterTask {
        f,
        remaining: n,
        value: nat(y),
        stuck: false,
    });
    let mut seen = 0;
    for _ in 0..rounds_for_budget(budget) {
        let Ok(()) = run.run_round();
        if let Some(d) = run.log()[seen..].iter().find(|d| &d.value == x) {
            return Applied {
                value: Some(nat(d.task)),
                steps: run.global_steps(),
            };
        }
        seen = run.log().len();
    }
    Applied::undefined(budget)
}

/// Argument functions a probe may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeFn {
    Successor,
    Doubling,
}

impl ProbeFn {
    pub fn as_arg(self) -> &'static dyn ArgFn {
        match self {
            ProbeFn::Successor => &Successor,
            ProbeFn::Doubling => &DoublingTable { limit: 1 << 24 },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Probe {
    pub f: ProbeFn,
    pub x: u64,
}

/// Successor and doubling at `x ∈ {0, 1, 5}`, plus `extra` points drawn from `seed`.
pub fn standard_probes(extra: usize, seed: u64) -> Vec<Probe> {
    let mut probes = Vec::new();
    for f in [ProbeFn::Successor, ProbeFn::Doubling] {
        for x in [0, 1, 5] {
            probes.push(Probe { f, x });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..extra {
        let f = if rng.gen_bool(0.5) {
            ProbeFn::Successor
        } else {
            ProbeFn::Doubling
        };
        probes.push(Probe {
            f,
            x: rng.gen_range(0..64),
        });
    }
    probes
}

/// Outcome of checking an effective operation against `It_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChurchCheck {
    /// `F(Succ)(0)`, if it converged within budget.
    pub extracted: Option<Nat>,
    pub failed_probe: Option<Probe>,
}

impl ChurchCheck {
    pub fn accepted(&self) -> Option<&Nat> {
        self.extracted
            .as_ref()
            .filter(|_| self.failed_probe.is_none())
    }
}

/// Extract `n = F(Succ)(0)`, then compare `F(f)(x)` with `f⁽ⁿ⁾(x)` on every probe.
/// Both sides undefined within the budget counts as agreement.
pub fn check_church(
    u: &Universe,
    w: &Word,
    probes: &[Probe],
    budget: u64,
) -> Result<ChurchCheck, EvalError> {
    let extracted = u.apply_effop(w, &Successor, &Nat::zero(), budget)?.value;
    let Some(n) = extracted.clone() else {
        return Ok(ChurchCheck {
            extracted,
            failed_probe: None,
        });
    };
    for probe in probes {
        let f = probe.f.as_arg();
        let x = nat(probe.x);
        let got = u.apply_effop(w, f, &x, budget)?.value;
        let want = iterate(f, &n, &x, budget).value;
        if got != want {
            return Ok(ChurchCheck {
                extracted,
                failed_probe: Some(probe.clone()),
            });
        }
    }
    Ok(ChurchCheck {
        extracted,
        failed_probe: None,
    })
}
