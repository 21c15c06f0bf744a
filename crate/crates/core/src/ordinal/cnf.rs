use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use super::OrdinalError;

/// Ordinal below epsilon_0 in Cantor normal form.
///
/// `terms` holds `(exponent, coefficient)` pairs with strictly decreasing
/// exponents and positive coefficients; the empty list is 0.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Ordinal {
    terms: Vec<(Ordinal, u64)>,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal::default()
    }

    pub fn nat(n: u64) -> Self {
        if n == 0 {
            Ordinal::zero()
        } else {
            Ordinal { terms: vec![(Ordinal::zero(), n)] }
        }
    }

    pub fn one() -> Self {
        Ordinal::nat(1)
    }

    pub fn omega() -> Self {
        Ordinal::omega_pow(1)
    }

    /// `w^k` for finite `k`.
    pub fn omega_pow(k: u64) -> Self {
        Ordinal::omega_pow_ord(Ordinal::nat(k))
    }

    pub fn omega_pow_ord(exp: Ordinal) -> Self {
        Ordinal { terms: vec![(exp, 1)] }
    }

    /// `w^exp * coeff`; a zero coefficient gives 0.
    pub fn term(exp: Ordinal, coeff: u64) -> Self {
        if coeff == 0 {
            Ordinal::zero()
        } else {
            Ordinal { terms: vec![(exp, coeff)] }
        }
    }

    /// Builds from terms, which must already be in normal form.
    pub fn from_terms(terms: Vec<(Ordinal, u64)>) -> Result<Self, OrdinalError> {
        for w in terms.windows(2) {
            if w[0].0 <= w[1].0 {
                return Err(OrdinalError::NotNormalForm);
            }
        }
        if terms.iter().any(|(_, c)| *c == 0) {
            return Err(OrdinalError::NotNormalForm);
        }
        Ok(Ordinal { terms })
    }

    /// Builds `sum_k w^k * coeffs[k]` (coefficient of `w^k` at index `k`).
    pub fn from_coeffs(coeffs: &[u64]) -> Self {
        let terms = coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| **c > 0)
            .map(|(k, c)| (Ordinal::nat(k as u64), *c))
            .collect();
        Ordinal { terms }
    }

    pub fn terms(&self) -> &[(Ordinal, u64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_nat(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(e, c)] if e.is_zero() => Some(*c),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.as_nat().is_some()
    }

    pub fn is_limit(&self) -> bool {
        matches!(self.terms.last(), Some((e, _)) if !e.is_zero())
    }

    pub fn is_successor(&self) -> bool {
        matches!(self.terms.last(), Some((e, _)) if e.is_zero())
    }

    /// Coefficients of `w^0, w^1, ...` when the ordinal is below `w^w`.
    pub fn coeffs(&self) -> Option<Vec<u64>> {
        let Some((lead, _)) = self.terms.first() else {
            return Some(Vec::new());
        };
        let top = lead.as_nat()? as usize;
        let mut out = vec![0; top + 1];
        for (e, c) in &self.terms {
            out[e.as_nat()? as usize] = *c;
        }
        Some(out)
    }

    /// Finite part: the coefficient of `w^0`.
    pub fn finite_part(&self) -> u64 {
        match self.terms.last() {
            Some((e, c)) if e.is_zero() => *c,
            _ => 0,
        }
    }

    pub fn succ(&self) -> Ordinal {
        self.add(&Ordinal::one())
    }

    pub fn add(&self, rhs: &Ordinal) -> Ordinal {
        let Some((lead, lead_c)) = rhs.terms.first() else {
            return self.clone();
        };
        let mut terms: Vec<(Ordinal, u64)> = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        let mut merged = *lead_c;
        for (e, c) in &self.terms {
            match e.cmp(lead) {
                Ordering::Greater => terms.push((e.clone(), *c)),
                Ordering::Equal => merged += *c,
                Ordering::Less => break,
            }
        }
        terms.push((lead.clone(), merged));
        terms.extend(rhs.terms[1..].iter().cloned());
        Ordinal { terms }
    }

    pub fn mul(&self, rhs: &Ordinal) -> Ordinal {
        let Some((lead, lead_c)) = self.terms.first() else {
            return Ordinal::zero();
        };
        let mut acc = Ordinal::zero();
        for (e, c) in &rhs.terms {
            let part = if e.is_zero() {
                let mut terms = self.terms.clone();
                terms[0].1 = lead_c * c;
                Ordinal { terms }
            } else {
                Ordinal::term(lead.add(e), *c)
            };
            acc = acc.add(&part);
        }
        acc
    }

    /// Least `d` with `self + d == target`, if `self <= target`.
    pub fn left_subtract(&self, target: &Ordinal) -> Option<Ordinal> {
        if self > target {
            return None;
        }
        // Strip the common prefix of terms; the first differing term of
        // `target` absorbs whatever remains of `self`.
        let mut i = 0;
        while i < self.terms.len() && i < target.terms.len() && self.terms[i] == target.terms[i] {
            i += 1;
        }
        if i == self.terms.len() {
            return Some(Ordinal { terms: target.terms[i..].to_vec() });
        }
        let (se, sc) = &self.terms[i];
        let (te, tc) = &target.terms[i];
        let mut terms = Vec::new();
        if se == te {
            terms.push((te.clone(), tc - sc));
        } else {
            terms.push((te.clone(), *tc));
        }
        terms.extend(target.terms[i + 1..].iter().cloned());
        let d = Ordinal { terms };
        debug_assert_eq!(&self.add(&d), target);
        Some(d)
    }

    /// Least multiple of `w^d` strictly greater than `self`.
    pub fn next_multiple_of_omega_pow(&self, d: u64) -> Ordinal {
        let bound = Ordinal::nat(d);
        let high: Vec<(Ordinal, u64)> = self.terms.iter().filter(|(e, _)| *e >= bound).cloned().collect();
        Ordinal { terms: high }.add(&Ordinal::omega_pow(d))
    }

    /// True when `self` is a nonzero multiple of `w^d`.
    pub fn is_multiple_of_omega_pow(&self, d: u64) -> bool {
        let bound = Ordinal::nat(d);
        !self.is_zero() && self.terms.iter().all(|(e, _)| *e >= bound)
    }

    /// Largest `d` such that `self` is a multiple of `w^d` (0 for successors and 0).
    pub fn limit_depth(&self) -> u64 {
        match self.terms.last() {
            Some((e, _)) => e.as_nat().unwrap_or(u64::MAX),
            None => 0,
        }
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(&other.terms) {
            match a.0.cmp(&b.0).then(a.1.cmp(&b.1)) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

pub fn ord_cmp(a: &Ordinal, b: &Ordinal) -> Ordering {
    a.cmp(b)
}

pub fn ord_add(a: &Ordinal, b: &Ordinal) -> Ordinal {
    a.add(b)
}

pub fn ord_succ(a: &Ordinal) -> Ordinal {
    a.succ()
}

pub fn ord_mul(a: &Ordinal, b: &Ordinal) -> Ordinal {
    a.mul(b)
}

pub fn is_limit(a: &Ordinal) -> bool {
    a.is_limit()
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            if e.is_zero() {
                write!(f, "{c}")?;
                continue;
            }
            write!(f, "w")?;
            match e.as_nat() {
                Some(1) => {}
                Some(k) => write!(f, "^{k}")?,
                None if *e == Ordinal::omega() => write!(f, "^w")?,
                None => write!(f, "^({e})")?,
            }
            if *c > 1 {
                write!(f, "*{c}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Ordinal {
    type Err = OrdinalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser { src: s.as_bytes(), pos: 0 };
        let out = p.sum()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(OrdinalError::Parse(s.to_string()));
        }
        Ok(out)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self) -> OrdinalError {
        OrdinalError::Parse(String::from_utf8_lossy(self.src).into_owned())
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn nat(&mut self) -> Result<u64, OrdinalError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| self.err())
    }

    fn sum(&mut self) -> Result<Ordinal, OrdinalError> {
        let mut acc = self.term()?;
        while self.eat(b'+') {
            acc = acc.add(&self.term()?);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Ordinal, OrdinalError> {
        let base = if self.eat(b'w') {
            let exp = if self.eat(b'^') { self.atom()? } else { Ordinal::one() };
            Ordinal::omega_pow_ord(exp)
        } else if self.eat(b'(') {
            let inner = self.sum()?;
            if !self.eat(b')') {
                return Err(self.err());
            }
            inner
        } else {
            Ordinal::nat(self.nat()?)
        };
        let mut acc = base;
        while self.eat(b'*') {
            let rhs = self.atom()?;
            acc = acc.mul(&rhs);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Ordinal, OrdinalError> {
        if self.eat(b'w') {
            if self.eat(b'^') {
                let exp = self.atom()?;
                return Ok(Ordinal::omega_pow_ord(exp));
            }
            return Ok(Ordinal::omega());
        }
        if self.eat(b'(') {
            let inner = self.sum()?;
            if !self.eat(b')') {
                return Err(self.err());
            }
            return Ok(inner);
        }
        Ok(Ordinal::nat(self.nat()?))
    }
}
