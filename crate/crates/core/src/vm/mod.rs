//! The payload language: a four-register machine with a fixed bit encoding.

pub mod asm;
pub mod instr;
pub mod machine;

pub use asm::{assemble, assemble_bits, AsmError};
pub use instr::{Instruction, Program, Reg};
pub use machine::{
    apply_function, run, run_traced, stability_window, ArgFn, Env, MachineState, Mode, QueryEvent,
    RunOutcome, RunTrace, StepEvent, VmError,
};
