//! Bit-exact instruction encoding.
//!
//! | opcode | mnemonic        | operands                                 | bits      |
//! |--------|-----------------|------------------------------------------|-----------|
//! | 0000   | `HALT`          |                                          | 4         |
//! | 0001   | `INC r`         | r: 2                                     | 6         |
//! | 0010   | `DECJZ r, Δ`    | r: 2, Δ: 6 (two's complement)            | 12        |
//! | 0011   | `EMIT`          |                                          | 4         |
//! | 0100   | `INPUT j, r`    | j: 1, r: 2                               | 7         |
//! | 0101   | `OUTPUT r`      | r: 2                                     | 6         |
//! | 0110   | `QUERY r, Δ`    | r: 2, Δ: 6                               | 12        |
//! | 0111   | `CALLARG r`     | r: 2                                     | 6         |
//! | 1000   | `LOADC r, w`    | r: 2, \|w\|: 4, w                         | 10 + \|w\| |
//! | 1001–1111 | invalid      |                                          | 4         |
//!
//! Decoding is total: unknown opcodes and a truncated trailing instruction
//! decode to [`Instruction::Invalid`], which spins forever when reached.

use std::fmt;

use crate::word::Word;

pub const NUM_REGS: usize = 4;
pub const OFFSET_BITS: usize = 6;
pub const MAX_LITERAL_BITS: usize = 15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Reg(u8);

impl Reg {
    pub fn new(index: u8) -> Option<Reg> {
        (usize::from(index) < NUM_REGS).then_some(Reg(index))
    }

    pub fn index(self) -> usize {
        usize::from(self.0)
    }
}

impl fmt::Display for Reg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Instruction {
    Halt,
    Inc(Reg),
    /// Jump by the offset if the register is zero, otherwise decrement it.
    DecJz(Reg, i8),
    Emit,
    Input(u8, Reg),
    Output(Reg),
    /// Ask whether the program `nat_to_word(r)` halts; jump by the offset on NO.
    Query(Reg, i8),
    CallArg(Reg),
    LoadC(Reg, Word),
    Invalid,
}

impl Instruction {
    pub fn opcode(&self) -> u64 {
        match self {
            Instruction::Halt => 0,
            Instruction::Inc(_) => 1,
            Instruction::DecJz(..) => 2,
            Instruction::Emit => 3,
            Instruction::Input(..) => 4,
            Instruction::Output(_) => 5,
            Instruction::Query(..) => 6,
            Instruction::CallArg(_) => 7,
            Instruction::LoadC(..) => 8,
            Instruction::Invalid => 15,
        }
    }

    pub fn encoded_len(&self) -> usize {
        match self {
            Instruction::Halt | Instruction::Emit | Instruction::Invalid => 4,
            Instruction::Inc(_) | Instruction::Output(_) | Instruction::CallArg(_) => 6,
            Instruction::Input(..) => 7,
            Instruction::DecJz(..) | Instruction::Query(..) => 12,
            Instruction::LoadC(_, w) => 10 + w.len(),
        }
    }

    pub fn encode_into(&self, out: &mut Word) {
        out.push_uint(self.opcode(), 4);
        match self {
            Instruction::Halt | Instruction::Emit | Instruction::Invalid => {}
            Instruction::Inc(r) | Instruction::Output(r) | Instruction::CallArg(r) => {
                out.push_uint(r.0 as u64, 2)
            }
            Instruction::DecJz(r, d) | Instruction::Query(r, d) => {
                out.push_uint(r.0 as u64, 2);
                out.push_uint((*d as u8 as u64) & 0x3f, OFFSET_BITS);
            }
            Instruction::Input(j, r) => {
                out.push_uint(u64::from(*j), 1);
                out.push_uint(r.0 as u64, 2);
            }
            Instruction::LoadC(r, w) => {
                assert!(w.len() <= MAX_LITERAL_BITS, "literal too long");
                out.push_uint(r.0 as u64, 2);
                out.push_uint(w.len() as u64, 4);
                out.extend_from(w);
            }
        }
    }
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instruction::Halt => f.write_str("HALT"),
            Instruction::Inc(r) => write!(f, "INC {r}"),
            Instruction::DecJz(r, d) => write!(f, "DECJZ {r}, {d:+}"),
            Instruction::Emit => f.write_str("EMIT"),
            Instruction::Input(j, r) => write!(f, "INPUT {j}, {r}"),
            Instruction::Output(r) => write!(f, "OUTPUT {r}"),
            Instruction::Query(r, d) => write!(f, "QUERY {r}, {d:+}"),
            Instruction::CallArg(r) => write!(f, "CALLARG {r}"),
            Instruction::LoadC(r, w) => write!(f, "LOADC {r}, \"{w}\""),
            Instruction::Invalid => f.write_str("INVALID"),
        }
    }
}

fn sign_extend(raw: u64) -> i8 {
    let v = raw as i8;
    (v << 2) >> 2
}

/// Decoded machine code.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Program {
    pub instrs: Vec<Instruction>,
}

impl Program {
    pub fn decode(code: &Word) -> Program {
        let mut instrs = Vec::new();
        let mut pos = 0;
        let len = code.len();
        while pos < len {
            let Some(op) = code.read_uint(pos, 4) else {
                instrs.push(Instruction::Invalid);
                break;
            };
            pos += 4;
            let reg = |at: usize| code.read_uint(at, 2).map(|r| Reg(r as u8));
            let decoded = match op {
                0 => Some((Instruction::Halt, 0)),
                3 => Some((Instruction::Emit, 0)),
                1 | 5 | 7 => reg(pos).map(|r| {
                    let ins = match op {
                        1 => Instruction::Inc(r),
                        5 => Instruction::Output(r),
                        _ => Instruction::CallArg(r),
                    };
                    (ins, 2)
                }),
                2 | 6 => reg(pos).and_then(|r| {
                    code.read_uint(pos + 2, OFFSET_BITS).map(|d| {
                        let d = sign_extend(d);
                        let ins = if op == 2 {
                            Instruction::DecJz(r, d)
                        } else {
                            Instruction::Query(r, d)
                        };
                        (ins, 2 + OFFSET_BITS)
                    })
                }),
                4 => code
                    .read_uint(pos, 1)
                    .and_then(|j| reg(pos + 1).map(|r| (Instruction::Input(j as u8, r), 3))),
                8 => reg(pos).and_then(|r| {
                    code.read_uint(pos + 2, 4).and_then(|n| {
                        let n = n as usize;
                        (pos + 6 + n <= len).then(|| {
                            (
                                Instruction::LoadC(r, code.slice(pos + 6, pos + 6 + n)),
                                6 + n,
                            )
                        })
                    })
                }),
                _ => Some((Instruction::Invalid, 0)),
            };
            match decoded {
                Some((ins, operand_bits)) => {
                    instrs.push(ins);
                    pos += operand_bits;
                }
                None => {
                    // truncated trailing instruction
                    instrs.push(Instruction::Invalid);
                    break;
                }
            }
        }
        Program { instrs }
    }

    pub fn encode(&self) -> Word {
        let mut out = Word::new();
        for ins in &self.instrs {
            ins.encode_into(&mut out);
        }
        out
    }

    pub fn len(&self) -> usize {
        self.instrs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instrs.is_empty()
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, ins) in self.instrs.iter().enumerate() {
            writeln!(f, "{i:4}: {ins}")?;
        }
        Ok(())
    }
}
