//! Deterministic, step-counted register machine.

use num_bigint::BigUint;
use num_traits::Zero;

use super::instr::{Instruction, Program, NUM_REGS};
use crate::oracle::{Certainty, Oracle, OracleError, Query};
use crate::universe::Universe;
use crate::word::{nat_to_word, word_to_nat};
use crate::Nat;

/// A type-1 argument for `CALLARG`: a partial function on naturals.
pub trait ArgFn {
    fn call(&self, x: &Nat) -> Option<Nat>;
}

impl<F: Fn(&Nat) -> Option<Nat>> ArgFn for F {
    fn call(&self, x: &Nat) -> Option<Nat> {
        self(x)
    }
}

/// Which instructions are legal and what halting means.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Output is the halting value (`OUTPUT r`, or `r0` on `HALT`).
    Halting { oracle: bool },
    /// Output is the number of `EMIT`s; the run may go on forever.
    Streaming { oracle: bool },
    /// Partial function of the inputs.
    Function,
    /// Effective operation: partial function of the inputs that may call its argument.
    EffOp,
}

impl Mode {
    pub fn oracle_enabled(self) -> bool {
        matches!(
            self,
            Mode::Halting { oracle: true } | Mode::Streaming { oracle: true }
        )
    }

    pub fn emit_enabled(self) -> bool {
        matches!(self, Mode::Streaming { .. })
    }

    pub fn callarg_enabled(self) -> bool {
        matches!(self, Mode::EffOp)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VmError {
    #[error("{instr} is not allowed in {mode:?} mode")]
    ModeViolation { instr: &'static str, mode: Mode },
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// What the environment provides to a run.
pub struct Env<'a> {
    pub universe: &'a Universe,
    pub oracle: Option<&'a mut dyn Oracle>,
    pub arg: Option<&'a dyn ArgFn>,
}

impl<'a> Env<'a> {
    pub fn plain(universe: &'a Universe) -> Self {
        Env {
            universe,
            oracle: None,
            arg: None,
        }
    }

    pub fn with_oracle(universe: &'a Universe, oracle: &'a mut dyn Oracle) -> Self {
        Env {
            universe,
            oracle: Some(oracle),
            arg: None,
        }
    }

    pub fn with_arg(universe: &'a Universe, arg: &'a dyn ArgFn) -> Self {
        Env {
            universe,
            oracle: None,
            arg: Some(arg),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepEvent {
    Continue,
    Emit,
    Query { yes: bool, certainty: Certainty },
    Halt(Nat),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MachineState {
    pub pc: i64,
    pub regs: [Nat; NUM_REGS],
    pub steps: u64,
    pub emits: u64,
    pub inputs: Vec<Nat>,
    pub mode: Mode,
    pub halted: Option<Nat>,
}

impl MachineState {
    pub fn new(program: &Program, mode: Mode, inputs: Vec<Nat>) -> Self {
        let mut state = MachineState {
            pc: 0,
            regs: Default::default(),
            steps: 0,
            emits: 0,
            inputs,
            mode,
            halted: None,
        };
        state.check_fall_off(program);
        state
    }

    pub fn is_halted(&self) -> bool {
        self.halted.is_some()
    }

    fn check_fall_off(&mut self, program: &Program) {
        if self.pc < 0 || self.pc as usize >= program.len() {
            self.halted = Some(self.regs[0].clone());
        }
    }

    fn jump(&mut self, offset: i8) {
        self.pc += i64::from(offset);
    }

    /// One step. Leaving the code (either end) halts with `r0`.
    pub fn step(&mut self, program: &Program, env: &mut Env<'_>) -> Result<StepEvent, VmError> {
        debug_assert!(self.halted.is_none(), "step on a halted machine");
        let ins = &program.instrs[self.pc as usize];
        let mode = self.mode;
        let violation = |instr| VmError::ModeViolation { instr, mode };
        self.steps += 1;
        let mut event = StepEvent::Continue;
        match ins {
            Instruction::Halt => {
                let v = self.regs[0].clone();
                self.halted = Some(v.clone());
                return Ok(StepEvent::Halt(v));
            }
            Instruction::Output(r) => {
                let v = self.regs[r.index()].clone();
                self.halted = Some(v.clone());
                return Ok(StepEvent::Halt(v));
            }
            Instruction::Inc(r) => {
                self.regs[r.index()] += 1u32;
                self.pc += 1;
            }
            Instruction::DecJz(r, d) => {
                let reg = &mut self.regs[r.index()];
                if reg.is_zero() {
                    self.jump(*d);
                } else {
                    *reg -= 1u32;
                    self.pc += 1;
                }
            }
            Instruction::Emit => {
                if !mode.emit_enabled() {
                    return Err(violation("EMIT"));
                }
                self.emits += 1;
                self.pc += 1;
                event = StepEvent::Emit;
            }
            Instruction::Input(j, r) => {
                self.regs[r.index()] = self
                    .inputs
                    .get(usize::from(*j))
                    .cloned()
                    .unwrap_or_else(BigUint::zero);
                self.pc += 1;
            }
            Instruction::Query(r, d) => {
                if !mode.oracle_enabled() {
                    return Err(violation("QUERY"));
                }
                let oracle = env
                    .oracle
                    .as_deref_mut()
                    .ok_or_else(|| violation("QUERY"))?;
                let q = Query::Halts(nat_to_word(&self.regs[r.index()]));
                let answer = oracle.answer(env.universe, &q)?;
                if answer.yes {
                    self.pc += 1;
                } else {
                    self.jump(*d);
                }
                event = StepEvent::Query {
                    yes: answer.yes,
                    certainty: answer.certainty,
                };
            }
            Instruction::CallArg(r) => {
                if !mode.callarg_enabled() {
                    return Err(violation("CALLARG"));
                }
                let arg = env.arg.ok_or_else(|| violation("CALLARG"))?;
                // An undefined argument value leaves pc in place: a self-loop.
                if let Some(v) = arg.call(&self.regs[r.index()]) {
                    self.regs[r.index()] = v;
                    self.pc += 1;
                }
            }
            Instruction::LoadC(r, w) => {
                self.regs[r.index()] = word_to_nat(w);
                self.pc += 1;
            }
            Instruction::Invalid => {}
        }
        self.check_fall_off(program);
        if let Some(v) = &self.halted {
            if event == StepEvent::Continue {
                return Ok(StepEvent::Halt(v.clone()));
            }
        }
        Ok(event)
    }
}

/// Result of a budgeted run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RunOutcome {
    Halted(Nat),
    /// Streaming mode. `stable` ⇔ no EMIT in the last ⌈T/2⌉ steps (or the run finished).
    Emitting {
        count: u64,
        stable: bool,
        finished: bool,
    },
    OutOfBudget {
        emits: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryEvent {
    pub step: u64,
    pub yes: bool,
    pub certainty: Certainty,
}

/// Full record of a budgeted run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunTrace {
    pub outcome: RunOutcome,
    pub steps: u64,
    pub budget: u64,
    /// 0-based step indices at which EMIT executed.
    pub emit_steps: Vec<u64>,
    pub queries: Vec<QueryEvent>,
    /// Halting value (set whenever the machine stopped, streaming mode included).
    pub halt_value: Option<Nat>,
}

impl RunTrace {
    pub fn certain(&self) -> bool {
        self.queries
            .iter()
            .all(|q| q.certainty == Certainty::Certain)
    }
}

/// Number of trailing steps that must be EMIT-free for a stream to count as stable.
pub fn stability_window(budget: u64) -> u64 {
    budget.div_ceil(2)
}

pub fn run_traced(
    program: &Program,
    mode: Mode,
    inputs: Vec<Nat>,
    env: &mut Env<'_>,
    budget: u64,
) -> Result<RunTrace, VmError> {
    let mut state = MachineState::new(program, mode, inputs);
    let mut emit_steps = Vec::new();
    let mut queries = Vec::new();
    while !state.is_halted() && state.steps < budget {
        let at = state.steps;
        match state.step(program, env)? {
            StepEvent::Emit => emit_steps.push(at),
            StepEvent::Query { yes, certainty } => queries.push(QueryEvent {
                step: at,
                yes,
                certainty,
            }),
            StepEvent::Continue | StepEvent::Halt(_) => {}
        }
    }
    let finished = state.is_halted();
    let outcome = match mode {
        Mode::Streaming { .. } => {
            let window_start = budget - stability_window(budget);
            let stable = finished || emit_steps.last().is_none_or(|&s| s < window_start);
            RunOutcome::Emitting {
                count: state.emits,
                stable,
                finished,
            }
        }
        _ => match &state.halted {
            Some(v) => RunOutcome::Halted(v.clone()),
            None => RunOutcome::OutOfBudget { emits: state.emits },
        },
    };
    Ok(RunTrace {
        outcome,
        steps: state.steps,
        budget,
        emit_steps,
        queries,
        halt_value: state.halted,
    })
}

pub fn run(
    program: &Program,
    mode: Mode,
    inputs: Vec<Nat>,
    env: &mut Env<'_>,
    budget: u64,
) -> Result<RunOutcome, VmError> {
    run_traced(program, mode, inputs, env, budget).map(|t| t.outcome)
}

/// Value of a function-mode program at `inputs`, if it halts within `budget`.
pub fn apply_function(
    program: &Program,
    inputs: Vec<Nat>,
    env: &mut Env<'_>,
    budget: u64,
) -> Result<Option<Nat>, VmError> {
    match run(program, Mode::Function, inputs, env, budget)? {
        RunOutcome::Halted(v) => Ok(Some(v)),
        _ => Ok(None),
    }
}
