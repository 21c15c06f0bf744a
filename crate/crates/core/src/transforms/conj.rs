use crate::number::Rational;

use super::TransformError;

/// The order bijection `G(x) = 1/2 + x / (2(1 + |x|))` from the reals onto
/// `(0, 1)`, rational on rationals, with its inverse.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ConjugationMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Fwd,
    Inv,
}

impl ConjugationMap {
    pub fn forward(&self, x: &Rational) -> Rational {
        let one = Rational::one();
        let two = Rational::from_int(2);
        if x.is_negative() {
            one.checked_div(&(&two - &(&two * x))).expect("positive denominator")
        } else {
            (&two * x + &one).checked_div(&(&two * x + &two)).expect("positive denominator")
        }
    }

    pub fn inverse(&self, y: &Rational) -> Result<Rational, TransformError> {
        let one = Rational::one();
        if !y.is_positive() || *y >= one {
            return Err(TransformError::OutOfDomain(y.clone()));
        }
        let two = Rational::from_int(2);
        let u = &two * y - &one;
        let den = if u.is_negative() { &two * y } else { &two - &(&two * y) };
        Ok(u.checked_div(&den).expect("nonzero inside (0, 1)"))
    }
}

pub fn conj_apply(m: &ConjugationMap, direction: Direction, x: &Rational) -> Result<Rational, TransformError> {
    match direction {
        Direction::Fwd => Ok(m.forward(x)),
        Direction::Inv => m.inverse(x),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn examples() {
        let g = ConjugationMap;
        assert_eq!(conj_apply(&g, Direction::Fwd, &q("0")).unwrap(), q("1/2"));
        assert_eq!(g.forward(&q("2")), q("5/6"));
        assert_eq!(g.inverse(&q("5/6")).unwrap(), q("2"));
        assert_eq!(g.forward(&q("-2")), q("1/6"));
        assert!(matches!(g.inverse(&q("1")), Err(TransformError::OutOfDomain(_))));
        assert!(g.inverse(&q("0")).is_err());
    }
}
