use std::fmt;

use super::{NumberError, Poly, Rational};

/// Quotient of two polynomials over the register variables.
///
/// Kept in a canonical shape: a constant denominator is folded into the
/// numerator, otherwise the denominator's leading coefficient is 1, common
/// monomial factors are cancelled and exact polynomial quotients collapse.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Result<Self, NumberError> {
        if den.is_zero() {
            return Err(NumberError::ZeroDenominatorPoly);
        }
        Ok(RationalFunction { num, den }.canonical())
    }

    pub fn from_poly(p: Poly) -> Self {
        RationalFunction { num: p, den: Poly::one() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn var(index: usize) -> Self {
        Self::from_poly(Poly::var(index))
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.as_constant().is_some()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        n.checked_div(&d).ok()
    }

    pub fn arity(&self) -> usize {
        self.num.arity().max(self.den.arity())
    }

    pub fn uses_var(&self, var: usize) -> bool {
        self.num.uses_var(var) || self.den.uses_var(var)
    }

    pub fn vars(&self) -> Vec<usize> {
        (0..self.arity()).filter(|&v| self.uses_var(v)).collect()
    }

    pub fn eval(&self, args: &[Rational]) -> Result<Rational, NumberError> {
        let d = self.den.eval(args)?;
        if d.is_zero() {
            return Err(NumberError::DivisionByZero);
        }
        self.num.eval(args)?.checked_div(&d)
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.den == other.den {
            return RationalFunction { num: self.num.add(&other.num), den: self.den.clone() }.canonical();
        }
        RationalFunction {
            num: self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            den: self.den.mul(&other.den),
        }
        .canonical()
    }

    pub fn neg(&self) -> Self {
        RationalFunction { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        RationalFunction {
            num: self.num.mul(&other.num),
            den: self.den.mul(&other.den),
        }
        .canonical()
    }

    pub fn div(&self, other: &Self) -> Result<Self, NumberError> {
        if other.num.is_zero() {
            return Err(NumberError::DivisionByZero);
        }
        Ok(RationalFunction {
            num: self.num.mul(&other.den),
            den: self.den.mul(&other.num),
        }
        .canonical())
    }

    fn canonical(mut self) -> Self {
        if self.num.is_zero() {
            return RationalFunction { num: Poly::zero(), den: Poly::one() };
        }
        let common = self.num.monomial_content().common(&self.den.monomial_content());
        if !common.is_one() {
            let strip = |p: &Poly| {
                Poly::from_terms(p.terms().map(|(m, c)| (m.div(&common).expect("content divides"), c.clone())))
            };
            self.num = strip(&self.num);
            self.den = strip(&self.den);
        }
        if let Some(c) = self.den.as_constant() {
            let inv = c.recip().expect("denominator is nonzero");
            return RationalFunction { num: self.num.scale(&inv), den: Poly::one() };
        }
        if let Some(q) = self.num.div_exact(&self.den) {
            return RationalFunction { num: q, den: Poly::one() };
        }
        let vars: Vec<usize> = {
            let mut v = self.num.vars();
            v.extend(self.den.vars());
            v.sort_unstable();
            v.dedup();
            v
        };
        if vars.len() == 1 {
            let g = self.num.univariate_gcd(&self.den, vars[0]);
            if g.total_degree() > 0 {
                self.num = self.num.div_exact(&g).expect("gcd divides");
                self.den = self.den.div_exact(&g).expect("gcd divides");
            }
        }
        let lead = self.den.leading().map(|(_, c)| c.clone()).expect("nonzero denominator");
        if lead != Rational::one() {
            let inv = lead.recip().expect("nonzero");
            self.num = self.num.scale(&inv);
            self.den = self.den.scale(&inv);
        }
        self
    }

    /// Substitutes `subst[i]` for `x_{i+1}`.
    ///
    /// Each variable's denominator is raised to the maximal degree that
    /// variable has in either part, so no spurious factors appear.
    pub fn compose(&self, subst: &[RationalFunction]) -> Result<RationalFunction, NumberError> {
        let arity = self.arity();
        if arity > subst.len() {
            return Err(NumberError::Arity { needed: arity, given: subst.len() });
        }
        let max_exp: Vec<u32> = (0..arity)
            .map(|v| self.num.degree_in(v).max(self.den.degree_in(v)))
            .collect();
        let expand = |p: &Poly| {
            let mut out = Poly::zero();
            for (m, c) in p.terms() {
                let mut t = Poly::constant(c.clone());
                for (v, &top) in max_exp.iter().enumerate() {
                    let e = m.exp(v);
                    if e > 0 {
                        t = t.mul(&subst[v].num.pow(e));
                    }
                    if top > e {
                        t = t.mul(&subst[v].den.pow(top - e));
                    }
                }
                out = out.add(&t);
            }
            out
        };
        RationalFunction::new(expand(&self.num), expand(&self.den))
    }

    /// Coefficients `(a, b)` when this is `a*x_{var+1} + b`.
    pub fn as_affine_in(&self, var: usize) -> Option<(Rational, Rational)> {
        if !self.is_polynomial() || self.num.total_degree() > 1 {
            return None;
        }
        let vars = self.num.vars();
        if vars.iter().any(|&v| v != var) {
            return None;
        }
        let a = self
            .num
            .terms()
            .find(|(m, _)| !m.is_one())
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero);
        let b = self
            .num
            .terms()
            .find(|(m, _)| m.is_one())
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero);
        Some((a, b))
    }

    /// Coefficients `[a, b, c, d]` when this is `(a*x + b)/(c*x + d)` in `x_{var+1}`.
    pub fn as_mobius_in(&self, var: usize) -> Option<[Rational; 4]> {
        let lin = |p: &Poly| -> Option<(Rational, Rational)> {
            if p.total_degree() > 1 || p.vars().iter().any(|&v| v != var) {
                return None;
            }
            let mut a = Rational::zero();
            let mut b = Rational::zero();
            for (m, c) in p.terms() {
                if m.is_one() {
                    b = c.clone();
                } else {
                    a = c.clone();
                }
            }
            Some((a, b))
        };
        let (a, b) = lin(&self.num)?;
        let (c, d) = lin(&self.den)?;
        Some([a, b, c, d])
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.as_constant().is_some() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
