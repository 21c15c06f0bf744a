//! Binary sequences stored in the odd fractional bits of a rational in [0, 1).
//!
//! Digit convention: `r = sum b_i * 2^-(i+1)`, 0-indexed; sequence bit `t(n)`
//! lives at digit `2n + 1` and every even digit is 0. Dyadic rationals use
//! their terminating expansion.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::number::Rational;
use crate::ordinal::{canonical_index, rho, Ordinal};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CodecError {
    #[error("{0} does not code a binary sequence")]
    NotASequenceCode(Rational),
    #[error("interleaving is not eventually periodic")]
    NonPeriodicResult,
    #[error("position {0} is not below the interleaving length")]
    PositionOutOfRange(Ordinal),
}

/// Eventually periodic bit sequence `prefix (period)^inf` in canonical form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Bits {
    prefix: Vec<bool>,
    period: Vec<bool>,
}

impl Bits {
    pub fn zero() -> Self {
        Bits { prefix: Vec::new(), period: vec![false] }
    }

    /// Finitely supported sequence with the given leading bits.
    pub fn finite(bits: impl IntoIterator<Item = bool>) -> Self {
        Bits::new(bits.into_iter().collect(), vec![false])
    }

    pub fn new(prefix: Vec<bool>, period: Vec<bool>) -> Self {
        assert!(!period.is_empty(), "period must be nonempty");
        let mut b = Bits { prefix, period };
        b.canonicalize();
        b
    }

    fn canonicalize(&mut self) {
        let p = self.period.len();
        if let Some(d) = (1..=p).find(|&d| p.is_multiple_of(d) && (0..p).all(|i| self.period[i] == self.period[i % d])) {
            self.period.truncate(d);
        }
        while let Some(&last) = self.prefix.last() {
            if last != *self.period.last().unwrap() {
                break;
            }
            self.prefix.pop();
            self.period.rotate_right(1);
        }
    }

    pub fn prefix(&self) -> &[bool] {
        &self.prefix
    }

    pub fn period(&self) -> &[bool] {
        &self.period
    }

    pub fn get(&self, n: usize) -> bool {
        if n < self.prefix.len() {
            self.prefix[n]
        } else {
            self.period[(n - self.prefix.len()) % self.period.len()]
        }
    }

    /// True when only finitely many bits are set.
    pub fn is_finite(&self) -> bool {
        self.period.iter().all(|b| !b)
    }

    pub fn is_zero(&self) -> bool {
        self.is_finite() && self.prefix.iter().all(|b| !b)
    }

    /// Indices of set bits, only meaningful when [`Bits::is_finite`].
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.prefix.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i)
    }

    pub fn with_bit(&self, n: usize, v: bool) -> Bits {
        let mut prefix = self.prefix.clone();
        let mut period = self.period.clone();
        while prefix.len() <= n {
            prefix.push(period[0]);
            period.rotate_left(1);
        }
        prefix[n] = v;
        Bits::new(prefix, period)
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = |v: &[bool]| v.iter().map(|b| if *b { '1' } else { '0' }).collect::<String>();
        write!(f, "{}({})", s(&self.prefix), s(&self.period))
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl std::str::FromStr for Bits {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("bad bit pattern {s:?}");
        let (pre, rest) = s.split_once('(').ok_or_else(bad)?;
        let per = rest.strip_suffix(')').ok_or_else(bad)?;
        let parse = |t: &str| -> Result<Vec<bool>, String> {
            t.chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    _ => Err(bad()),
                })
                .collect()
        };
        let period = parse(per)?;
        if period.is_empty() {
            return Err(bad());
        }
        Ok(Bits::new(parse(pre)?, period))
    }
}

fn pow4(k: usize) -> BigInt {
    BigInt::one() << (2 * k)
}

/// Packs `t` into the odd digits: `A/4^L + B/(4^L (4^P - 1))`.
pub fn seq_to_real(t: &Bits) -> Rational {
    let fold = |bits: &[bool]| {
        bits.iter().fold(BigInt::zero(), |acc, b| (acc << 2) + if *b { 1 } else { 0 })
    };
    let l = t.prefix.len();
    let p = t.period.len();
    let a = fold(&t.prefix);
    let b = fold(&t.period);
    let cycle = pow4(p) - 1;
    Rational::new(a * &cycle + b, pow4(l) * cycle).expect("nonzero denominator")
}

/// Binary digits of `r` in [0, 1) as `(digits, start of period)`.
fn binary_digits(r: &Rational) -> (Vec<bool>, usize) {
    let b = r.denom().clone();
    let mut x = r.numer().clone();
    let mut seen: HashMap<BigInt, usize> = HashMap::new();
    let mut digits = Vec::new();
    loop {
        if let Some(&start) = seen.get(&x) {
            return (digits, start);
        }
        seen.insert(x.clone(), digits.len());
        x <<= 1;
        let d = x >= b;
        if d {
            x -= &b;
        }
        digits.push(d);
    }
}

pub fn real_to_seq(r: &Rational) -> Result<Bits, CodecError> {
    let bad = || CodecError::NotASequenceCode(r.clone());
    if r.is_negative() || *r >= Rational::one() {
        return Err(bad());
    }
    let (digits, start) = binary_digits(r);
    let per = digits.len() - start;
    let dig = |k: usize| {
        if k < digits.len() {
            digits[k]
        } else {
            digits[start + (k - start) % per]
        }
    };
    if (0..digits.len() + per + 2).step_by(2).any(dig) {
        return Err(bad());
    }
    let lt = start.div_ceil(2);
    let prefix = (0..lt).map(|n| dig(2 * n + 1)).collect();
    let period = (lt..lt + per).map(|n| dig(2 * n + 1)).collect();
    Ok(Bits::new(prefix, period))
}

pub fn get_bit(r: &Rational, n: usize) -> Result<bool, CodecError> {
    Ok(real_to_seq(r)?.get(n))
}

pub fn set_bit(r: &Rational, n: usize, v: bool) -> Result<Rational, CodecError> {
    Ok(seq_to_real(&real_to_seq(r)?.with_bit(n, v)))
}

/// Interleaves finitely supported strands: bit `rho(i, k)` of the result is
/// bit `i` of `strands[k]`.
pub fn interleave_ranked(strands: &[(u64, Bits)]) -> Result<Bits, CodecError> {
    let mut ones = Vec::new();
    for (k, s) in strands {
        if !s.is_finite() {
            return Err(CodecError::NonPeriodicResult);
        }
        ones.extend(s.ones().map(|i| rho(i as u64, *k) as usize));
    }
    let len = ones.iter().max().map_or(0, |m| m + 1);
    let mut bits = vec![false; len];
    for i in ones {
        bits[i] = true;
    }
    Ok(Bits::finite(bits))
}

/// `(+)` over positions `alpha < lambda`, ranked by the canonical enumeration
/// of `lambda`. Positions missing from `values` hold the code 0.
pub fn interleave(values: &BTreeMap<Ordinal, Rational>, lambda: &Ordinal) -> Result<Rational, CodecError> {
    let mut strands = Vec::with_capacity(values.len());
    for (alpha, code) in values {
        if alpha >= lambda {
            return Err(CodecError::PositionOutOfRange(alpha.clone()));
        }
        let rank = canonical_index(lambda, alpha).ok_or(CodecError::NonPeriodicResult)?;
        strands.push((rank, real_to_seq(code)?));
    }
    Ok(seq_to_real(&interleave_ranked(&strands)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn b(s: &str) -> Bits {
        s.parse().unwrap()
    }

    #[test]
    fn packs_examples() {
        assert_eq!(seq_to_real(&b("1(0)")), q("1/4"));
        assert_eq!(seq_to_real(&Bits::zero()), q("0"));
        assert_eq!(seq_to_real(&b("(10)")), q("4/15"));
    }

    #[test]
    fn unpacks_examples() {
        assert_eq!(real_to_seq(&q("1/4")).unwrap(), b("1(0)"));
        assert_eq!(real_to_seq(&q("1/2")), Err(CodecError::NotASequenceCode(q("1/2"))));
        assert_eq!(real_to_seq(&q("4/15")).unwrap().to_string(), "(10)");
        assert!(real_to_seq(&q("1")).is_err());
        assert!(real_to_seq(&q("-1/4")).is_err());
    }

    #[test]
    fn bit_access() {
        assert!(get_bit(&q("1/4"), 0).unwrap());
        assert_eq!(set_bit(&q("0"), 2, true).unwrap(), seq_to_real(&b("001(0)")));
        assert_eq!(set_bit(&q("4/15"), 0, false).unwrap(), seq_to_real(&b("0(01)")));
    }

    #[test]
    fn canonical_form() {
        assert_eq!(b("0101(0101)").to_string(), "(01)");
        assert_eq!(b("11(0)"), Bits::finite([true, true]));
    }

    #[test]
    fn interleave_two_strands() {
        let mut values = BTreeMap::new();
        values.insert(Ordinal::nat(0), seq_to_real(&b("1(0)")));
        values.insert(Ordinal::nat(1), seq_to_real(&b("01(0)")));
        let r = interleave(&values, &Ordinal::nat(2)).unwrap();
        let t = real_to_seq(&r).unwrap();
        assert_eq!(t.ones().collect::<Vec<_>>(), vec![0, 4]);
    }

    #[test]
    fn interleave_single_strand() {
        let c = seq_to_real(&b("101(0)"));
        let values = BTreeMap::from([(Ordinal::zero(), c)]);
        let t = real_to_seq(&interleave(&values, &Ordinal::one()).unwrap()).unwrap();
        let want: Vec<usize> = [0u64, 2].iter().map(|&i| rho(i, 0) as usize).collect();
        assert_eq!(t.ones().collect::<Vec<_>>(), want);
    }

    #[test]
    fn interleave_zero_and_periodic() {
        let values = BTreeMap::from([(Ordinal::nat(3), q("0"))]);
        assert_eq!(interleave(&values, &Ordinal::omega()).unwrap(), q("0"));
        let values = BTreeMap::from([(Ordinal::zero(), q("4/15"))]);
        assert_eq!(interleave(&values, &Ordinal::omega()), Err(CodecError::NonPeriodicResult));
    }
}
