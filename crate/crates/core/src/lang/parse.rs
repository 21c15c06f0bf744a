use super::{Expr, Instruction, LangError, Program};
use crate::number::Rational;

/// Parses the line-oriented program text format.
pub fn parse_program(text: &str) -> Result<Program, LangError> {
    let mut registers: Option<usize> = None;
    let mut body: Vec<(usize, Instruction)> = Vec::new();
    let mut jumps: Vec<(usize, usize)> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let err = |reason: String| LangError::Parse { line: line_no, reason };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some(n) = registers else {
            let count = line
                .strip_prefix("registers")
                .map(str::trim)
                .and_then(|t| t.parse::<usize>().ok())
                .ok_or_else(|| err("expected `registers <n>` header".into()))?;
            if count == 0 {
                return Err(err("register count must be at least 1".into()));
            }
            registers = Some(count);
            continue;
        };
        let (idx, rest) = line.split_once(':').ok_or_else(|| err("expected `<index>: <instruction>`".into()))?;
        let idx: usize = idx.trim().parse().map_err(|_| err(format!("bad line index {:?}", idx.trim())))?;
        if idx != body.len() {
            return Err(err(format!("line index {idx} out of sequence, expected {}", body.len())));
        }
        let ins = parse_instruction(rest.trim(), n).map_err(err)?;
        if let Instruction::Branch { if_le, if_gt, .. } = &ins {
            jumps.push((line_no, *if_le.max(if_gt)));
        }
        body.push((line_no, ins));
    }
    let registers = registers.ok_or(LangError::Parse { line: 0, reason: "empty program text".into() })?;
    if body.is_empty() {
        return Err(LangError::Parse { line: 0, reason: "program has no instructions".into() });
    }
    for (line, target) in jumps {
        if target > body.len() {
            return Err(LangError::Parse { line, reason: format!("jump target {target} out of range") });
        }
    }
    Program::new(registers, body.into_iter().map(|(_, i)| i).collect())
}

fn parse_register(tok: &str, n: usize) -> Result<usize, String> {
    let i: usize = tok
        .strip_prefix('R')
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| format!("expected register name, got {tok:?}"))?;
    if i == 0 || i > n {
        return Err(format!("register {tok} out of range 1..={n}"));
    }
    Ok(i - 1)
}

fn parse_target(tok: Option<&str>) -> Result<usize, String> {
    let tok = tok.ok_or("missing jump target")?;
    tok.parse().map_err(|_| format!("bad jump target {tok:?}"))
}

fn parse_instruction(src: &str, n: usize) -> Result<Instruction, String> {
    if src == "halt" {
        return Ok(Instruction::Halt);
    }
    let words: Vec<&str> = src.split_whitespace().collect();
    if words.first() == Some(&"goto") {
        if words.len() != 2 {
            return Err("expected `goto <line>`".into());
        }
        return Ok(Instruction::goto(parse_target(words.get(1).copied())?));
    }
    if words.first() == Some(&"if") {
        // if R<i> <= R<j> goto <a> else goto <b>
        match words.as_slice() {
            ["if", l, "<=", r, "goto", a, "else", "goto", b] => {
                return Ok(Instruction::Branch {
                    left: parse_register(l, n)?,
                    right: parse_register(r, n)?,
                    if_le: parse_target(Some(a))?,
                    if_gt: parse_target(Some(b))?,
                });
            }
            _ => return Err("expected `if R<i> <= R<j> goto <a> else goto <b>`".into()),
        }
    }
    let (lhs, rhs) = src.split_once(":=").ok_or_else(|| format!("unrecognised instruction {src:?}"))?;
    let target = parse_register(lhs.trim(), n)?;
    let expr = parse_expr(rhs, n)?;
    Ok(Instruction::Compute { target, expr })
}

/// Parses an arithmetic expression over `R1..Rn`.
pub fn parse_expr(src: &str, n: usize) -> Result<Expr, String> {
    let toks = tokenize(src)?;
    let mut p = ExprParser { toks, pos: 0, n };
    let e = p.sum()?;
    if p.pos != p.toks.len() {
        return Err(format!("unexpected {:?} in expression", p.toks[p.pos]));
    }
    Ok(e.folded())
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rational),
    Reg(String),
    Op(char),
}

fn tokenize(src: &str) -> Result<Vec<Tok>, String> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if "+-*/()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            let lit: String = chars[start..i].iter().collect();
            out.push(Tok::Num(lit.parse().map_err(|_| format!("bad literal {lit:?}"))?));
        } else if c == 'R' {
            let start = i;
            i += 1;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            out.push(Tok::Reg(chars[start..i].iter().collect()));
        } else {
            return Err(format!("unexpected character {c:?}"));
        }
    }
    Ok(out)
}

struct ExprParser {
    toks: Vec<Tok>,
    pos: usize,
    n: usize,
}

impl ExprParser {
    fn eat(&mut self, op: char) -> bool {
        if self.toks.get(self.pos) == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> Result<Expr, String> {
        let mut acc = self.product()?;
        loop {
            if self.eat('+') {
                acc = Expr::add(acc, self.product()?);
            } else if self.eat('-') {
                acc = Expr::sub(acc, self.product()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> Result<Expr, String> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = Expr::mul(acc, self.unary()?);
            } else if self.eat('/') {
                acc = Expr::div(acc, self.unary()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, String> {
        if self.eat('-') {
            return Ok(Expr::neg(self.unary()?).folded());
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Expr, String> {
        let tok = self.toks.get(self.pos).cloned().ok_or("unexpected end of expression")?;
        self.pos += 1;
        match tok {
            Tok::Num(c) => Ok(Expr::Const(c)),
            Tok::Reg(name) => Ok(Expr::Reg(parse_register(&name, self.n)?)),
            Tok::Op('(') => {
                let e = self.sum()?;
                if !self.eat(')') {
                    return Err("missing `)`".into());
                }
                // Parenthesised constants such as `(1/2)` denote a single literal.
                Ok(e.folded())
            }
            Tok::Op(c) => Err(format!("unexpected {c:?}")),
        }
    }
}
