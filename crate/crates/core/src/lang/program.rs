use std::fmt;

use super::{Expr, LangError};

/// One machine instruction. Register indices are 0-based (`R1` is index 0).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Instruction {
    Compute { target: usize, expr: Expr },
    /// Jump to `if_le` when `R[left] <= R[right]`, else to `if_gt`.
    Branch { left: usize, right: usize, if_le: usize, if_gt: usize },
    Halt,
}

impl Instruction {
    pub fn compute(target: usize, expr: Expr) -> Self {
        Instruction::Compute { target, expr }
    }

    pub fn branch(left: usize, right: usize, if_le: usize, if_gt: usize) -> Self {
        Instruction::Branch { left, right, if_le, if_gt }
    }

    pub fn goto(target: usize) -> Self {
        Instruction::Branch { left: 0, right: 0, if_le: target, if_gt: target }
    }
}

/// A validated program. Line `len()` is the fall-off halt target.
///
/// Line notes are printed as trailing comments and ignored by equality.
#[derive(Clone, Debug)]
pub struct Program {
    registers: usize,
    instructions: Vec<Instruction>,
    notes: Vec<Option<String>>,
}

impl PartialEq for Program {
    fn eq(&self, other: &Self) -> bool {
        self.registers == other.registers && self.instructions == other.instructions
    }
}

impl Eq for Program {}

impl std::hash::Hash for Program {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.registers.hash(state);
        self.instructions.hash(state);
    }
}

impl Program {
    pub fn new(registers: usize, instructions: Vec<Instruction>) -> Result<Self, LangError> {
        if registers == 0 {
            return Err(LangError::Invalid { line: 0, reason: "register count must be at least 1".into() });
        }
        if instructions.is_empty() {
            return Err(LangError::Invalid { line: 0, reason: "program has no instructions".into() });
        }
        let len = instructions.len();
        for (line, ins) in instructions.iter().enumerate() {
            let bad = |reason: String| Err(LangError::Invalid { line, reason });
            match ins {
                Instruction::Compute { target, expr } => {
                    if *target >= registers {
                        return bad(format!("register R{} out of range", target + 1));
                    }
                    if expr.arity() > registers {
                        return bad(format!("register R{} out of range", expr.arity()));
                    }
                }
                Instruction::Branch { left, right, if_le, if_gt } => {
                    if *left >= registers || *right >= registers {
                        return bad(format!("register R{} out of range", left.max(right) + 1));
                    }
                    if *if_le > len || *if_gt > len {
                        return bad(format!("jump target {} out of range", if_le.max(if_gt)));
                    }
                }
                Instruction::Halt => {}
            }
        }
        let notes = vec![None; len];
        Ok(Program { registers, instructions, notes })
    }

    /// Attaches a comment to each line (`None` for no comment).
    pub fn with_notes(mut self, notes: Vec<Option<String>>) -> Self {
        assert_eq!(notes.len(), self.instructions.len());
        self.notes = notes;
        self
    }

    pub fn note(&self, pc: usize) -> Option<&str> {
        self.notes.get(pc).and_then(|n| n.as_deref())
    }

    pub fn registers(&self) -> usize {
        self.registers
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    pub fn get(&self, pc: usize) -> Option<&Instruction> {
        self.instructions.get(pc)
    }
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instruction::Compute { target, expr } => write!(f, "R{} := {}", target + 1, expr),
            Instruction::Branch { left, right, if_le, if_gt } if left == right && if_le == if_gt => {
                write!(f, "goto {if_le}")
            }
            Instruction::Branch { left, right, if_le, if_gt } => {
                write!(f, "if R{} <= R{} goto {} else goto {}", left + 1, right + 1, if_le, if_gt)
            }
            Instruction::Halt => write!(f, "halt"),
        }
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "registers {}", self.registers)?;
        for (i, ins) in self.instructions.iter().enumerate() {
            match &self.notes[i] {
                Some(note) => writeln!(f, "{i}: {ins}  # {note}")?,
                None => writeln!(f, "{i}: {ins}")?,
            }
        }
        Ok(())
    }
}
