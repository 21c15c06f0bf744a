use std::fmt;

use crate::number::{NumberError, Poly, Rational, RationalFunction};

/// Right-hand side of a compute instruction, kept as written.
///
/// Evaluation works on the tree, so `1/(R2 - R2)` is a legal program that
/// crashes when run; symbolic work goes through [`Expr::to_ratfun`].
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Expr {
    Const(Rational),
    /// 0-based register index.
    Reg(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn constant(c: impl Into<Rational>) -> Expr {
        Expr::Const(c.into())
    }

    pub fn reg(i: usize) -> Expr {
        Expr::Reg(i)
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        Expr::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::Sub(Box::new(a), Box::new(b))
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        Expr::Mul(Box::new(a), Box::new(b))
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        Expr::Div(Box::new(a), Box::new(b))
    }

    pub fn neg(a: Expr) -> Expr {
        Expr::Neg(Box::new(a))
    }

    /// Folds constant subtrees, leaving division by a literal zero in place.
    pub fn folded(self) -> Expr {
        use Expr::*;
        match self {
            Neg(a) => match a.folded() {
                Const(c) => Const(-c),
                a => Neg(Box::new(a)),
            },
            Add(a, b) => fold2(a.folded(), b.folded(), Add, |x, y| Some(x + y)),
            Sub(a, b) => fold2(a.folded(), b.folded(), Sub, |x, y| Some(x - y)),
            Mul(a, b) => fold2(a.folded(), b.folded(), Mul, |x, y| Some(x * y)),
            Div(a, b) => fold2(a.folded(), b.folded(), Div, |x, y| x.checked_div(&y).ok()),
            e => e,
        }
    }

    pub fn eval(&self, regs: &[Rational]) -> Result<Rational, NumberError> {
        Ok(match self {
            Expr::Const(c) => c.clone(),
            Expr::Reg(i) => regs
                .get(*i)
                .cloned()
                .ok_or(NumberError::Arity { needed: i + 1, given: regs.len() })?,
            Expr::Neg(a) => -a.eval(regs)?,
            Expr::Add(a, b) => a.eval(regs)? + b.eval(regs)?,
            Expr::Sub(a, b) => a.eval(regs)? - b.eval(regs)?,
            Expr::Mul(a, b) => a.eval(regs)? * b.eval(regs)?,
            Expr::Div(a, b) => a.eval(regs)?.checked_div(&b.eval(regs)?)?,
        })
    }

    /// Every divisor subexpression, outermost first.
    pub fn divisors(&self) -> Vec<&Expr> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(e) = stack.pop() {
            match e {
                Expr::Const(_) | Expr::Reg(_) => {}
                Expr::Neg(a) => stack.push(a),
                Expr::Div(a, b) => {
                    out.push(&**b);
                    stack.push(b);
                    stack.push(a);
                }
                Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                    stack.push(b);
                    stack.push(a);
                }
            }
        }
        out
    }

    pub fn to_ratfun(&self) -> Result<RationalFunction, NumberError> {
        Ok(match self {
            Expr::Const(c) => RationalFunction::constant(c.clone()),
            Expr::Reg(i) => RationalFunction::var(*i),
            Expr::Neg(a) => a.to_ratfun()?.neg(),
            Expr::Add(a, b) => a.to_ratfun()?.add(&b.to_ratfun()?),
            Expr::Sub(a, b) => a.to_ratfun()?.sub(&b.to_ratfun()?),
            Expr::Mul(a, b) => a.to_ratfun()?.mul(&b.to_ratfun()?),
            Expr::Div(a, b) => a.to_ratfun()?.div(&b.to_ratfun()?)?,
        })
    }

    /// Expression tree for a rational function (sum of monomials over sum of monomials).
    pub fn from_ratfun(f: &RationalFunction) -> Expr {
        let num = Expr::from_poly(f.numer());
        if f.is_polynomial() {
            return num;
        }
        Expr::div(num, Expr::from_poly(f.denom()))
    }

    pub fn from_poly(p: &Poly) -> Expr {
        let mut acc: Option<Expr> = None;
        for (m, c) in p.terms().collect::<Vec<_>>().into_iter().rev() {
            let mut factors: Vec<Expr> = Vec::new();
            for (i, e) in m.exps().iter().enumerate() {
                for _ in 0..*e {
                    factors.push(Expr::Reg(i));
                }
            }
            let mag = c.abs();
            let mut term = if factors.is_empty() {
                Expr::Const(mag.clone())
            } else {
                let mut it = factors.into_iter();
                let first = it.next().unwrap();
                let prod = it.fold(first, Expr::mul);
                if mag == Rational::one() {
                    prod
                } else {
                    Expr::mul(Expr::Const(mag.clone()), prod)
                }
            };
            acc = Some(match acc {
                None if c.is_negative() => {
                    term = Expr::neg(term).folded();
                    term
                }
                None => term,
                Some(a) if c.is_negative() => Expr::sub(a, term),
                Some(a) => Expr::add(a, term),
            });
        }
        acc.unwrap_or(Expr::Const(Rational::zero()))
    }

    /// Largest register index used, plus one.
    pub fn arity(&self) -> usize {
        match self {
            Expr::Const(_) => 0,
            Expr::Reg(i) => i + 1,
            Expr::Neg(a) => a.arity(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => a.arity().max(b.arity()),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(..) => 3,
            Expr::Const(c) if c.is_negative() || !c.is_integer() => 0,
            Expr::Const(_) | Expr::Reg(_) => 4,
        }
    }

    fn fmt_operand(&self, f: &mut fmt::Formatter<'_>, parens: bool) -> fmt::Result {
        if parens {
            write!(f, "(")?;
            self.fmt_bare(f)?;
            write!(f, ")")
        } else {
            self.fmt_bare(f)
        }
    }

    fn fmt_bare(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b, op) = match self {
            Expr::Const(c) => return write!(f, "{c}"),
            Expr::Reg(i) => return write!(f, "R{}", i + 1),
            Expr::Neg(a) => {
                write!(f, "-")?;
                return a.fmt_operand(f, a.precedence() < 4);
            }
            Expr::Add(a, b) => (a, b, "+"),
            Expr::Sub(a, b) => (a, b, "-"),
            Expr::Mul(a, b) => (a, b, "*"),
            Expr::Div(a, b) => (a, b, "/"),
        };
        let p = self.precedence();
        a.fmt_operand(f, a.precedence() < p)?;
        write!(f, " {op} ")?;
        b.fmt_operand(f, b.precedence() <= p)
    }
}

fn fold2(
    a: Expr,
    b: Expr,
    build: fn(Box<Expr>, Box<Expr>) -> Expr,
    op: impl Fn(Rational, Rational) -> Option<Rational>,
) -> Expr {
    if let (Expr::Const(x), Expr::Const(y)) = (&a, &b) {
        if let Some(v) = op(x.clone(), y.clone()) {
            return Expr::Const(v);
        }
    }
    build(Box::new(a), Box::new(b))
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_bare(f)
    }
}
