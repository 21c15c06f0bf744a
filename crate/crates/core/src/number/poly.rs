use std::collections::BTreeMap;
use std::fmt;

use super::{NumberError, Rational};

/// Exponent vector, `exps[i]` is the power of variable `x_{i+1}`.
///
/// Trailing zeros are trimmed, so the derived ordering is lexicographic with
/// `x1` most significant. That order is a monomial order, which exact division
/// relies on.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(index: usize) -> Self {
        let mut exps = vec![0; index + 1];
        exps[index] = 1;
        Monomial(exps)
    }

    pub fn from_exps(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Monomial(exps)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn exp(&self, var: usize) -> u32 {
        self.0.get(var).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().max(other.0.len());
        let exps = (0..n).map(|i| self.exp(i) + other.exp(i)).collect();
        Monomial::from_exps(exps)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if other.0.len() > self.0.len() {
            return None;
        }
        let mut exps = self.0.clone();
        for (i, e) in other.0.iter().enumerate() {
            exps[i] = exps[i].checked_sub(*e)?;
        }
        Some(Monomial::from_exps(exps))
    }

    pub fn common(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().min(other.0.len());
        Monomial::from_exps((0..n).map(|i| self.exp(i).min(other.exp(i))).collect())
    }
}

/// Sparse multivariate polynomial with rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Poly::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    /// The variable `x_{index+1}` (0-based index).
    pub fn var(index: usize) -> Self {
        let mut p = Poly::zero();
        p.add_term(Monomial::var(index), Rational::one());
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Poly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m).or_insert_with(Rational::zero);
        *slot = &*slot + &c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Constant value if the polynomial has no variables.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Number of variable slots touched (1 + highest variable index).
    pub fn arity(&self) -> usize {
        self.terms.keys().map(|m| m.exps().len()).max().unwrap_or(0)
    }

    pub fn uses_var(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.exp(var) > 0)
    }

    pub fn vars(&self) -> Vec<usize> {
        (0..self.arity()).filter(|&v| self.uses_var(v)).collect()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.exp(var)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Poly {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Evaluates at `args[i]` for `x_{i+1}`; missing arguments are an error.
    pub fn eval(&self, args: &[Rational]) -> Result<Rational, NumberError> {
        if self.arity() > args.len() {
            return Err(NumberError::Arity {
                needed: self.arity(),
                given: args.len(),
            });
        }
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, e) in m.exps().iter().enumerate() {
                if *e > 0 {
                    t = t * args[i].pow(*e);
                }
            }
            acc = acc + t;
        }
        Ok(acc)
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Monomial::one();
        };
        it.fold(first.clone(), |acc, m| acc.common(m))
    }

    /// Exact quotient `self / divisor`, or `None` if there is a remainder.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        let (dm, dc) = divisor.leading()?;
        let (dm, dc) = (dm.clone(), dc.clone());
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        // Each round strictly lowers the leading monomial of `rem`.
        while let Some((rm, rc)) = rem.leading() {
            let m = rm.div(&dm)?;
            let c = rc.checked_div(&dc).ok()?;
            let step = Poly::from_terms([(m, c)]);
            rem = rem.sub(&divisor.mul(&step));
            quot = quot.add(&step);
        }
        Some(quot)
    }

    /// Univariate gcd (monic) when both polynomials mention at most `var`.
    pub fn univariate_gcd(&self, other: &Poly, var: usize) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.univariate_rem(&b, var);
            a = b;
            b = r;
        }
        match a.leading() {
            Some((_, c)) => {
                let inv = c.recip().expect("leading coefficient is nonzero");
                a.scale(&inv)
            }
            None => a,
        }
    }

    fn univariate_rem(&self, divisor: &Poly, var: usize) -> Poly {
        let (dm, dc) = divisor.leading().expect("nonzero divisor");
        let ddeg = dm.exp(var);
        let dc = dc.clone();
        let mut rem = self.clone();
        loop {
            let Some((rm, rc)) = rem.leading() else { break };
            let rdeg = rm.exp(var);
            if rdeg < ddeg {
                break;
            }
            let mut exps = vec![0; var + 1];
            exps[var] = rdeg - ddeg;
            let step = Poly::from_terms([(
                Monomial::from_exps(exps),
                rc.checked_div(&dc).expect("nonzero"),
            )]);
            rem = rem.sub(&divisor.mul(&step));
        }
        rem
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            if k == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { "-" } else { "+" })?;
            }
            let mut factors = Vec::new();
            if m.is_one() || mag != Rational::one() {
                factors.push(if mag.is_integer() {
                    mag.to_string()
                } else {
                    format!("({mag})")
                });
            }
            for (i, e) in m.exps().iter().enumerate() {
                for _ in 0..*e {
                    factors.push(format!("R{}", i + 1));
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn exact_division() {
        // (x1 + 1)(x2 - 1) / (x2 - 1)
        let a = Poly::var(0).add(&Poly::one());
        let b = Poly::var(1).sub(&Poly::one());
        let prod = a.mul(&b);
        assert_eq!(prod.div_exact(&b), Some(a.clone()));
        assert_eq!(prod.add(&Poly::one()).div_exact(&b), None);
    }

    #[test]
    fn gcd_of_univariate() {
        let x = Poly::var(0);
        let a = x.mul(&x).sub(&Poly::one()); // x^2 - 1
        let b = x.sub(&Poly::one()).scale(&q("3")); // 3x - 3
        assert_eq!(a.univariate_gcd(&b, 0), x.sub(&Poly::one()));
    }

    #[test]
    fn evaluate() {
        // x1^2 + x2 at (3, 1)
        let p = Poly::var(0).pow(2).add(&Poly::var(1));
        assert_eq!(p.eval(&[q("3"), q("1")]).unwrap(), q("10"));
        assert!(p.eval(&[q("3")]).is_err());
    }

    #[test]
    fn renders_register_names() {
        let p = Poly::var(0).scale(&q("1/2")).add(&Poly::one());
        assert_eq!(p.to_string(), "(1/2)*R1 + 1");
    }
}
