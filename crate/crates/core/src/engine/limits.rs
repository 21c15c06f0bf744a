//! Limit points of classified tails and the five register limit rules.

use std::collections::BTreeSet;
use std::fmt;

use super::{CrashReason, OffsetTail, Snapshot, Variant};
use crate::number::Rational;

/// Rational extended with the two infinities.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ext {
    NegInf,
    Finite(Rational),
    PosInf,
}

impl Ext {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Ext::Finite(r) => Some(r),
            _ => None,
        }
    }
}

impl From<Rational> for Ext {
    fn from(r: Rational) -> Self {
        Ext::Finite(r)
    }
}

impl fmt::Display for Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ext::NegInf => write!(f, "-inf"),
            Ext::Finite(r) => write!(f, "{r}"),
            Ext::PosInf => write!(f, "+inf"),
        }
    }
}

/// How an infinity relates to a tail.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum InfFlag {
    #[default]
    Absent,
    LimitPoint,
    StrongLimit,
}

/// Limit points of one register's tail.
///
/// `finite_points` holds every finite limit point when there are finitely
/// many; for tails summarised from nested blocks it holds the least and the
/// greatest, which is all the limit rules consult.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LimitSetDescriptor {
    pub finite_points: BTreeSet<Rational>,
    pub plus_inf: InfFlag,
    pub minus_inf: InfFlag,
}

impl LimitSetDescriptor {
    pub fn point(c: Rational) -> Self {
        LimitSetDescriptor { finite_points: BTreeSet::from([c]), ..Default::default() }
    }

    pub fn points(cs: impl IntoIterator<Item = Rational>) -> Self {
        LimitSetDescriptor { finite_points: cs.into_iter().collect(), ..Default::default() }
    }

    pub fn strong_plus() -> Self {
        LimitSetDescriptor { plus_inf: InfFlag::StrongLimit, ..Default::default() }
    }

    pub fn strong_minus() -> Self {
        LimitSetDescriptor { minus_inf: InfFlag::StrongLimit, ..Default::default() }
    }

    pub fn oscillating() -> Self {
        LimitSetDescriptor {
            plus_inf: InfFlag::LimitPoint,
            minus_inf: InfFlag::LimitPoint,
            ..Default::default()
        }
    }

    /// Limit points of a sequence interleaving all `parts` cofinally.
    ///
    /// An infinity stays strong only if every part is strong on that side.
    pub fn union<'a>(parts: impl IntoIterator<Item = &'a LimitSetDescriptor>) -> Self {
        let mut out = LimitSetDescriptor::default();
        let mut all_plus_strong = true;
        let mut all_minus_strong = true;
        let mut any = false;
        for p in parts {
            any = true;
            out.finite_points.extend(p.finite_points.iter().cloned());
            out.plus_inf = out.plus_inf.max(p.plus_inf.min(InfFlag::LimitPoint));
            out.minus_inf = out.minus_inf.max(p.minus_inf.min(InfFlag::LimitPoint));
            all_plus_strong &= p.plus_inf == InfFlag::StrongLimit;
            all_minus_strong &= p.minus_inf == InfFlag::StrongLimit;
        }
        if any && all_plus_strong {
            out.plus_inf = InfFlag::StrongLimit;
        }
        if any && all_minus_strong {
            out.minus_inf = InfFlag::StrongLimit;
        }
        out
    }

    pub fn is_cauchy(&self) -> Option<&Rational> {
        if self.finite_points.len() == 1 && self.plus_inf == InfFlag::Absent && self.minus_inf == InfFlag::Absent {
            self.finite_points.iter().next()
        } else {
            None
        }
    }

    /// Least element of the strong limit set, `None` when that set is empty.
    pub fn min_strong(&self) -> Option<Ext> {
        if self.minus_inf == InfFlag::StrongLimit {
            Some(Ext::NegInf)
        } else if let Some(m) = self.finite_points.first() {
            Some(Ext::Finite(m.clone()))
        } else if self.plus_inf == InfFlag::StrongLimit {
            Some(Ext::PosInf)
        } else {
            None
        }
    }

    pub fn min_all(&self) -> Option<Ext> {
        if self.minus_inf != InfFlag::Absent {
            Some(Ext::NegInf)
        } else if let Some(m) = self.finite_points.first() {
            Some(Ext::Finite(m.clone()))
        } else if self.plus_inf != InfFlag::Absent {
            Some(Ext::PosInf)
        } else {
            None
        }
    }
}

/// Limit points per register from the tail descriptors of its cycle offsets.
pub fn limit_sets(tails: &[Vec<OffsetTail>]) -> Result<Vec<LimitSetDescriptor>, usize> {
    tails
        .iter()
        .enumerate()
        .map(|(reg, offsets)| {
            let parts = offsets
                .iter()
                .map(|t| t.limit_set().ok_or(reg))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(LimitSetDescriptor::union(&parts))
        })
        .collect()
}

/// Register value at a limit stage under `variant`.
pub fn limit_value(variant: Variant, set: &LimitSetDescriptor) -> Result<Rational, CrashReason> {
    let zero = Rational::zero;
    match variant {
        Variant::Itbm => set.is_cauchy().cloned().ok_or(CrashReason::UndefinedLimit),
        Variant::Witbm => {
            if let Some(l) = set.is_cauchy() {
                return Ok(l.clone());
            }
            match set.min_strong() {
                Some(Ext::NegInf | Ext::PosInf) => Ok(zero()),
                _ => Err(CrashReason::UndefinedLimit),
            }
        }
        Variant::Sitbm => match set.min_strong() {
            Some(Ext::Finite(_)) => match set.min_all() {
                Some(Ext::Finite(m)) => Ok(m),
                _ => Err(CrashReason::UndefinedLimit),
            },
            Some(_) => Ok(zero()),
            None => Err(CrashReason::EmptyStrongLimitSet),
        },
        Variant::Bsitbm => match set.min_strong() {
            Some(Ext::Finite(m)) => Ok(m),
            _ => Err(CrashReason::UndefinedLimit),
        },
        Variant::Ssitbm => match set.min_all() {
            Some(Ext::Finite(m)) => Ok(m),
            _ => Ok(zero()),
        },
    }
}

/// Limit snapshot: registers by the variant's rule, pc as the least line
/// visited cofinally.
pub fn apply_limit_rule(
    variant: Variant,
    sets: &[LimitSetDescriptor],
    pc_tail: &BTreeSet<usize>,
) -> Result<Snapshot, (usize, CrashReason)> {
    let registers = sets
        .iter()
        .enumerate()
        .map(|(i, s)| limit_value(variant, s).map_err(|e| (i, e)))
        .collect::<Result<Vec<_>, _>>()?;
    let pc = *pc_tail.first().expect("a cycle visits at least one line");
    Ok(Snapshot { registers, pc })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn tails(ts: Vec<OffsetTail>) -> Vec<LimitSetDescriptor> {
        limit_sets(&[ts]).unwrap()
    }

    #[test]
    fn two_constants() {
        let sets = tails(vec![OffsetTail::Constant(q("0")), OffsetTail::Constant(q("1"))]);
        assert_eq!(sets[0], LimitSetDescriptor::points([q("0"), q("1")]));
    }

    #[test]
    fn contracting_orbit_has_its_fixed_point() {
        let sets = tails(vec![OffsetTail::AffineOrbit { a: q("1/2"), b: q("1"), start: q("0") }]);
        assert_eq!(sets[0], LimitSetDescriptor::point(q("2")));
        // Independent check: 64 concrete iterations approach 2.
        let mut x = q("0");
        for _ in 0..64 {
            x = x * q("1/2") + q("1");
        }
        assert!((q("2") - x) < q("1/1000000000000000000"));
    }

    #[test]
    fn unit_increment_is_strong() {
        let sets = tails(vec![OffsetTail::AffineOrbit { a: q("1"), b: q("1"), start: q("0") }]);
        assert_eq!(sets[0], LimitSetDescriptor::strong_plus());
    }

    #[test]
    fn strong_flag_demoted_by_other_offsets() {
        let sets = tails(vec![OffsetTail::MonotoneUp, OffsetTail::Constant(q("3"))]);
        assert_eq!(sets[0].plus_inf, InfFlag::LimitPoint);
        assert_eq!(sets[0].finite_points, BTreeSet::from([q("3")]));
        let sets = tails(vec![OffsetTail::MonotoneUp, OffsetTail::MonotoneUp]);
        assert_eq!(sets[0], LimitSetDescriptor::strong_plus());
    }

    #[test]
    fn rule_examples() {
        let pcs = BTreeSet::from([2, 3]);
        let s = apply_limit_rule(Variant::Sitbm, &[LimitSetDescriptor::points([q("0"), q("1")])], &pcs).unwrap();
        assert_eq!(s.registers[0], q("0"));
        assert_eq!(s.pc, 2);
        let s = apply_limit_rule(Variant::Sitbm, &[LimitSetDescriptor::strong_plus()], &pcs).unwrap();
        assert_eq!(s.registers[0], q("0"));
        let osc = LimitSetDescriptor::oscillating();
        assert_eq!(
            apply_limit_rule(Variant::Sitbm, &[osc.clone()], &pcs),
            Err((0, CrashReason::EmptyStrongLimitSet))
        );
        assert_eq!(apply_limit_rule(Variant::Ssitbm, &[osc], &pcs).unwrap().registers[0], q("0"));
    }

    #[test]
    fn oscillation_oracle() {
        // x -> -2x + 1 from 0: brute force 32 steps, magnitudes grow and signs alternate.
        let mut x = q("0");
        let mut prev_sign = None;
        for k in 0..32 {
            x = q("-2") * x + q("1");
            if k > 2 {
                let sign = x.is_positive();
                assert_ne!(Some(sign), prev_sign);
                prev_sign = Some(sign);
            }
        }
        assert!(x.abs() > q("1000000"));
        let sets = tails(vec![OffsetTail::AffineOrbit { a: q("-2"), b: q("1"), start: q("0") }]);
        assert_eq!(sets[0], LimitSetDescriptor::oscillating());
    }

    #[test]
    fn variant_table() {
        let strong = LimitSetDescriptor::strong_plus();
        let pair = LimitSetDescriptor::points([q("1"), q("2")]);
        let with_minus = LimitSetDescriptor {
            finite_points: BTreeSet::from([q("1")]),
            minus_inf: InfFlag::LimitPoint,
            plus_inf: InfFlag::Absent,
        };
        use CrashReason::*;
        assert_eq!(limit_value(Variant::Itbm, &strong), Err(UndefinedLimit));
        assert_eq!(limit_value(Variant::Witbm, &strong), Ok(q("0")));
        assert_eq!(limit_value(Variant::Witbm, &pair), Err(UndefinedLimit));
        assert_eq!(limit_value(Variant::Sitbm, &pair), Ok(q("1")));
        assert_eq!(limit_value(Variant::Bsitbm, &pair), Ok(q("1")));
        assert_eq!(limit_value(Variant::Bsitbm, &strong), Err(UndefinedLimit));
        assert_eq!(limit_value(Variant::Sitbm, &with_minus), Err(UndefinedLimit));
        assert_eq!(limit_value(Variant::Bsitbm, &with_minus), Ok(q("1")));
        assert_eq!(limit_value(Variant::Ssitbm, &with_minus), Ok(q("0")));
    }
}
