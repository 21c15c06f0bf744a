use proptest::prelude::*;

use tbss_core::codec::{get_bit, real_to_seq, seq_to_real, set_bit, Bits};
use tbss_core::engine::{Ext, OffsetTail};
use tbss_core::number::Rational;
use tbss_core::transforms::ConjugationMap;

fn rational() -> impl Strategy<Value = Rational> {
    (-10_000i64..10_000, 1i64..500).prop_map(|(n, d)| Rational::new(n, d).unwrap())
}

fn bits() -> impl Strategy<Value = Bits> {
    (prop::collection::vec(any::<bool>(), 0..24), prop::collection::vec(any::<bool>(), 1..8))
        .prop_map(|(prefix, period)| Bits::new(prefix, period))
}

fn inside(lo: &Option<Ext>, hi: &Option<Ext>, v: &Rational) -> bool {
    let above = match lo {
        Some(Ext::Finite(l)) => l <= v,
        Some(Ext::PosInf) => false,
        _ => true,
    };
    let below = match hi {
        Some(Ext::Finite(h)) => v <= h,
        Some(Ext::NegInf) => false,
        _ => true,
    };
    above && below
}

proptest! {
    #[test]
    fn conjugation_is_an_order_embedding_into_the_unit_interval(x in rational(), y in rational()) {
        let g = ConjugationMap;
        let (gx, gy) = (g.forward(&x), g.forward(&y));
        prop_assert!(gx.is_positive() && gx < Rational::one());
        prop_assert_eq!(x.cmp(&y), gx.cmp(&gy));
        prop_assert_eq!(g.inverse(&gx).unwrap(), x);
    }

    #[test]
    fn inverse_rejects_the_closed_complement(x in rational()) {
        let g = ConjugationMap;
        if !x.is_positive() || x >= Rational::one() {
            prop_assert!(g.inverse(&x).is_err());
        } else {
            prop_assert_eq!(g.forward(&g.inverse(&x).unwrap()), x);
        }
    }

    #[test]
    fn eventually_periodic_sequences_round_trip(t in bits()) {
        let r = seq_to_real(&t);
        prop_assert_eq!(real_to_seq(&r).unwrap(), t.clone());
        for n in 0..40 {
            prop_assert_eq!(get_bit(&r, n).unwrap(), t.get(n));
        }
    }

    #[test]
    fn set_bit_touches_one_position(t in bits(), n in 0usize..40, v in any::<bool>()) {
        let r = set_bit(&seq_to_real(&t), n, v).unwrap();
        for m in 0..48 {
            let want = if m == n { v } else { t.get(m) };
            prop_assert_eq!(get_bit(&r, m).unwrap(), want);
        }
    }

    #[test]
    fn affine_limit_set_ignores_the_first_passes(
        a in rational(), b in rational(), start in rational(), k in 0usize..6,
    ) {
        let tail = OffsetTail::AffineOrbit { a: a.clone(), b: b.clone(), start };
        let later = OffsetTail::AffineOrbit { a, b, start: tail.value(k).unwrap() };
        prop_assert_eq!(tail.limit_set(), later.limit_set());
    }

    #[test]
    fn cycle_limit_set_ignores_rotation(vals in prop::collection::vec(rational(), 1..6), k in 0usize..6) {
        let mut rotated = vals.clone();
        rotated.rotate_left(k % vals.len());
        prop_assert_eq!(
            OffsetTail::FiniteSet(vals).limit_set(),
            OffsetTail::FiniteSet(rotated).limit_set()
        );
    }

    #[test]
    fn cauchy_limits_are_approached(
        n in -99i64..100, b in rational(), start in rational(),
    ) {
        let a = Rational::new(n, 100).unwrap();
        let tail = OffsetTail::AffineOrbit { a: a.clone(), b: b.clone(), start };
        let set = tail.limit_set().expect("contractions are classified");
        let limit = set.is_cauchy().expect("single finite limit").clone();
        prop_assert_eq!(&limit, &b.checked_div(&(Rational::one() - &a)).unwrap());
        for k in 0..8 {
            let d0 = (tail.value(k).unwrap() - &limit).abs();
            let d1 = (tail.value(k + 1).unwrap() - &limit).abs();
            prop_assert_eq!(d1, a.abs() * d0);
        }
    }

    #[test]
    fn hull_contains_every_future_value(
        a in rational(), b in rational(), start in rational(),
    ) {
        let tail = OffsetTail::AffineOrbit { a, b, start };
        let (lo, hi) = tail.hull();
        for k in 0..8 {
            let v = tail.value(k).unwrap();
            prop_assert!(inside(&lo, &hi, &v), "{:?} outside {:?}..{:?}", v, lo, hi);
        }
    }
}
