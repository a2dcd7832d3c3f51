//! Tiny two-pass assembler for fixture programs.
//!
//! ```text
//! ; comment
//! start:  LOADC r1, #3        ; literal by value (length-lex word of 3)
//!         LOADC r2, "0110"    ; literal as bits
//! loop:   DECJZ r1, done      ; label or signed offset (+2 / -1)
//!         EMIT
//!         DECJZ r3, loop
//! done:   HALT
//! ```

use std::collections::HashMap;

use num_bigint::BigUint;

use super::instr::{Instruction, Program, Reg, MAX_LITERAL_BITS};
use crate::word::{nat_to_word, Word};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {msg}")]
pub struct AsmError {
    pub line: usize,
    pub msg: String,
}

fn err(line: usize, msg: impl Into<String>) -> AsmError {
    AsmError {
        line,
        msg: msg.into(),
    }
}

enum Target {
    Offset(i64),
    Label(String),
}

enum Pending {
    Ready(Instruction),
    Jump {
        query: bool,
        reg: Reg,
        target: Target,
    },
}

fn parse_reg(line: usize, s: &str) -> Result<Reg, AsmError> {
    s.strip_prefix('r')
        .and_then(|n| n.parse::<u8>().ok())
        .and_then(Reg::new)
        .ok_or_else(|| err(line, format!("bad register {s:?}")))
}

fn parse_target(s: &str) -> Target {
    match s.parse::<i64>() {
        Ok(d) => Target::Offset(d),
        Err(_) => Target::Label(s.to_string()),
    }
}

fn parse_literal(line: usize, s: &str) -> Result<Word, AsmError> {
    let w = if let Some(v) = s.strip_prefix('#') {
        let n: BigUint = v
            .parse()
            .map_err(|_| err(line, format!("bad literal value {s:?}")))?;
        nat_to_word(&n)
    } else {
        s.trim_matches('"')
            .parse::<Word>()
            .map_err(|e| err(line, e.to_string()))?
    };
    if w.len() > MAX_LITERAL_BITS {
        return Err(err(
            line,
            format!("literal {s} longer than {MAX_LITERAL_BITS} bits"),
        ));
    }
    Ok(w)
}

pub fn assemble(src: &str) -> Result<Program, AsmError> {
    let mut labels = HashMap::new();
    let mut pending = Vec::new();
    for (lineno, raw) in src.lines().enumerate() {
        let line = lineno + 1;
        let mut text = raw.split(';').next().unwrap_or("").trim();
        while let Some((label, rest)) = text.split_once(':') {
            let label = label.trim();
            if label.is_empty() || label.contains(char::is_whitespace) {
                break;
            }
            if labels.insert(label.to_string(), pending.len()).is_some() {
                return Err(err(line, format!("duplicate label {label}")));
            }
            text = rest.trim();
        }
        if text.is_empty() {
            continue;
        }
        let (mnemonic, rest) = text.split_once(char::is_whitespace).unwrap_or((text, ""));
        let args: Vec<&str> = rest
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .collect();
        let want = |n: usize| {
            if args.len() == n {
                Ok(())
            } else {
                Err(err(line, format!("{mnemonic} takes {n} operand(s)")))
            }
        };
        let item = match mnemonic.to_ascii_uppercase().as_str() {
            "HALT" => want(0).map(|_| Pending::Ready(Instruction::Halt))?,
            "EMIT" => want(0).map(|_| Pending::Ready(Instruction::Emit))?,
            "INVALID" => want(0).map(|_| Pending::Ready(Instruction::Invalid))?,
            "INC" => {
                want(1)?;
                Pending::Ready(Instruction::Inc(parse_reg(line, args[0])?))
            }
            "OUTPUT" => {
                want(1)?;
                Pending::Ready(Instruction::Output(parse_reg(line, args[0])?))
            }
            "CALLARG" => {
                want(1)?;
                Pending::Ready(Instruction::CallArg(parse_reg(line, args[0])?))
            }
            "INPUT" => {
                want(2)?;
                let slot = match args[0] {
                    "0" => 0,
                    "1" => 1,
                    other => return Err(err(line, format!("bad input slot {other}"))),
                };
                Pending::Ready(Instruction::Input(slot, parse_reg(line, args[1])?))
            }
            "LOADC" => {
                want(2)?;
                Pending::Ready(Instruction::LoadC(
                    parse_reg(line, args[0])?,
                    parse_literal(line, args[1])?,
                ))
            }
            op @ ("DECJZ" | "QUERY") => {
                want(2)?;
                Pending::Jump {
                    query: op == "QUERY",
                    reg: parse_reg(line, args[0])?,
                    target: parse_target(args[1]),
                }
            }
            other => return Err(err(line, format!("unknown mnemonic {other}"))),
        };
        pending.push((line, item));
    }

    let mut instrs = Vec::with_capacity(pending.len());
    for (index, (line, item)) in pending.into_iter().enumerate() {
        let ins = match item {
            Pending::Ready(ins) => ins,
            Pending::Jump { query, reg, target } => {
                let offset = match target {
                    Target::Offset(d) => d,
                    Target::Label(l) => {
                        let at = labels
                            .get(&l)
                            .ok_or_else(|| err(line, format!("unknown label {l}")))?;
                        *at as i64 - index as i64
                    }
                };
                let offset = i8::try_from(offset)
                    .ok()
                    .filter(|d| (-32..32).contains(d))
                    .ok_or_else(|| err(line, format!("jump offset {offset} out of range")))?;
                if query {
                    Instruction::Query(reg, offset)
                } else {
                    Instruction::DecJz(reg, offset)
                }
            }
        };
        instrs.push(ins);
    }
    Ok(Program { instrs })
}

/// Assemble and encode to machine-code bits.
pub fn assemble_bits(src: &str) -> Result<Word, AsmError> {
    assemble(src).map(|p| p.encode())
}
