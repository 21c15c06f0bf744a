//! Per-offset tail sequences and their exact orbit shapes.

use super::limits::{Ext, LimitSetDescriptor};
use crate::number::{Rational, RationalFunction};

const MAX_TRANSIENT: usize = 64;
const MAX_ELLIPTIC_ORDER: u32 = 12;

/// The values one register takes at one cycle offset, pass after pass.
///
/// Orbits are indexed from the current pass: `start` is the value now.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OffsetTail {
    Constant(Rational),
    /// `y_{k+1} = a*y_k + b`.
    AffineOrbit { a: Rational, b: Rational, start: Rational },
    /// `y_{k+1} = (m0*y_k + m1) / (m2*y_k + m3)`.
    MobiusOrbit { m: [Rational; 4], start: Rational },
    MonotoneUp,
    MonotoneDown,
    /// Values repeating in the listed order.
    FiniteSet(Vec<Rational>),
    /// `y_k = f(x_k)` for a univariate `f` in `R1` and the inner sequence `x`.
    Image { f: RationalFunction, inner: Box<OffsetTail> },
    /// Converges to the given value; no bound on the approach is known.
    Converges(Rational),
    /// Termwise sum of sequences advancing together.
    Sum(Vec<OffsetTail>),
    Unclassified,
}

/// Exact qualitative description of a tail.
///
/// Bounds are closures of the set of values from the current pass on,
/// `None` where no exact bound is available.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Shape {
    Fixed(Rational),
    Cycle(Vec<Rational>),
    Converges { limit: Rational, lo: Option<Rational>, hi: Option<Rational> },
    Up { lo: Option<Rational> },
    Down { hi: Option<Rational> },
    Oscillates,
    Irregular,
}

fn div(a: &Rational, b: &Rational) -> Rational {
    a.checked_div(b).expect("nonzero divisor")
}

fn hull_of<'a>(vals: impl IntoIterator<Item = &'a Rational>) -> (Rational, Rational) {
    let mut it = vals.into_iter();
    let first = it.next().expect("nonempty").clone();
    it.fold((first.clone(), first), |(lo, hi), v| (lo.min(v.clone()), hi.max(v.clone())))
}

fn lcm(a: usize, b: usize) -> usize {
    let gcd = |mut x: usize, mut y: usize| {
        while y != 0 {
            (x, y) = (y, x % y);
        }
        x
    };
    a / gcd(a, b) * b
}

fn converging(limit: Rational, vals: &[Rational]) -> Shape {
    let (lo, hi) = hull_of(vals.iter().chain(std::iter::once(&limit)));
    Shape::Converges { limit, lo: Some(lo), hi: Some(hi) }
}

fn affine_shape(a: &Rational, b: &Rational, s: &Rational) -> Shape {
    let one = Rational::one();
    let next = a * s + b;
    if &next == s {
        return Shape::Fixed(s.clone());
    }
    if a.is_zero() {
        return converging(b.clone(), std::slice::from_ref(s));
    }
    if *a == one {
        return if b.is_positive() { Shape::Up { lo: Some(s.clone()) } } else { Shape::Down { hi: Some(s.clone()) } };
    }
    if *a == -one.clone() {
        return Shape::Cycle(vec![s.clone(), next]);
    }
    let fixed = div(b, &(one.clone() - a));
    if a.abs() < one {
        return converging(fixed, &[s.clone(), next]);
    }
    if a.is_positive() {
        if *s > fixed {
            Shape::Up { lo: Some(s.clone()) }
        } else {
            Shape::Down { hi: Some(s.clone()) }
        }
    } else {
        Shape::Oscillates
    }
}

fn mobius_eval(m: &[Rational; 4], x: &Rational) -> Option<Rational> {
    let den = &m[2] * x + &m[3];
    if den.is_zero() {
        None
    } else {
        Some(div(&(&m[0] * x + &m[1]), &den))
    }
}

fn mat_mul(p: &[Rational; 4], q: &[Rational; 4]) -> [Rational; 4] {
    [
        &p[0] * &q[0] + &p[1] * &q[2],
        &p[0] * &q[1] + &p[1] * &q[3],
        &p[2] * &q[0] + &p[3] * &q[2],
        &p[2] * &q[1] + &p[3] * &q[3],
    ]
}

fn orbit_values(m: &[Rational; 4], s: &Rational, n: usize) -> Option<Vec<Rational>> {
    let mut out = vec![s.clone()];
    for _ in 1..n {
        let x = mobius_eval(m, out.last().unwrap())?;
        out.push(x);
    }
    Some(out)
}

fn mobius_shape(m: &[Rational; 4], s: &Rational) -> Shape {
    let [a, b, c, d] = m;
    if c.is_zero() {
        if d.is_zero() {
            return Shape::Irregular;
        }
        return affine_shape(&div(a, d), &div(b, d), s);
    }
    let det = a * d - b * c;
    let Some(next) = mobius_eval(m, s) else { return Shape::Irregular };
    if &next == s {
        return Shape::Fixed(s.clone());
    }
    if det.is_zero() {
        let v = div(a, c);
        if (c * &v + d).is_zero() {
            return Shape::Irregular;
        }
        return converging(v, std::slice::from_ref(s));
    }
    let two = Rational::from_int(2);
    let disc = (a - d).pow(2) + Rational::from_int(4) * b * c;
    if disc.is_negative() {
        let mut pw = m.clone();
        for order in 2..=MAX_ELLIPTIC_ORDER {
            pw = mat_mul(&pw, m);
            if pw[1].is_zero() && pw[2].is_zero() && pw[0] == pw[3] {
                return match orbit_values(m, s, order as usize) {
                    Some(v) => Shape::Cycle(v),
                    None => Shape::Irregular,
                };
            }
        }
        return Shape::Irregular;
    }
    if disc.is_zero() {
        let p = div(&(a - d), &(&two * c));
        let step = div(&(&two * c), &(a + d));
        let y0 = div(&Rational::one(), &(s - &p));
        let mut vals = vec![s.clone()];
        let mut y = y0;
        let mut k = 0;
        while y.is_positive() != step.is_positive() {
            y = y + &step;
            k += 1;
            if y.is_zero() || k > MAX_TRANSIENT {
                return Shape::Irregular;
            }
            vals.push(&p + &div(&Rational::one(), &y));
        }
        return converging(p, &vals);
    }
    let Some(root) = disc.sqrt_exact() else { return Shape::Irregular };
    let r1 = div(&(a - d + &root), &(&two * c));
    let r2 = div(&(a - d - &root), &(&two * c));
    let k1 = div(&(c * &r2 + d), &(c * &r1 + d));
    let (p, q, k) = if k1.abs() < Rational::one() { (r1, r2, k1) } else { let k2 = div(&(c * &r1 + d), &(c * &r2 + d)); (r2, r1, k2) };
    if s == &q {
        return Shape::Fixed(s.clone());
    }
    if k.abs() == Rational::one() {
        return Shape::Cycle(vec![s.clone(), next]);
    }
    let mut y = div(&(s - &p), &(s - &q));
    let mut vals = vec![s.clone()];
    let mut steps = 0;
    while y.abs() >= Rational::one() {
        y = &k * &y;
        steps += 1;
        if y == Rational::one() || steps > MAX_TRANSIENT {
            return Shape::Irregular;
        }
        let Some(x) = mobius_eval(m, vals.last().unwrap()) else { return Shape::Irregular };
        vals.push(x);
    }
    if k.is_negative() {
        let Some(x) = mobius_eval(m, vals.last().unwrap()) else { return Shape::Irregular };
        vals.push(x);
    }
    converging(p, &vals)
}

/// Behaviour of a univariate rational function at `+inf` (or `-inf`).
fn at_infinity(f: &RationalFunction, positive: bool) -> Ext {
    let (Some((mn, ln)), Some((md, ld))) = (f.numer().leading(), f.denom().leading()) else {
        return Ext::Finite(Rational::zero());
    };
    let (dn, dd) = (mn.degree(), md.degree());
    if dn < dd {
        return Ext::Finite(Rational::zero());
    }
    let ratio = div(ln, ld);
    if dn == dd {
        return Ext::Finite(ratio);
    }
    let flip = !positive && (dn - dd) % 2 == 1;
    if ratio.is_positive() != flip {
        Ext::PosInf
    } else {
        Ext::NegInf
    }
}

fn image_shape(f: &RationalFunction, inner: Shape) -> Shape {
    let affine = f.as_affine_in(0);
    let ev = |x: &Rational| f.eval(std::slice::from_ref(x)).ok();
    let map_bound = |x: &Option<Rational>| -> Option<Rational> {
        match (&affine, x) {
            (Some(_), Some(x)) => ev(x),
            _ => None,
        }
    };
    match inner {
        Shape::Fixed(s) => ev(&s).map_or(Shape::Irregular, Shape::Fixed),
        Shape::Cycle(vs) => vs.iter().map(ev).collect::<Option<Vec<_>>>().map_or(Shape::Irregular, Shape::Cycle),
        Shape::Converges { limit, lo, hi } => {
            let Some(l) = ev(&limit) else { return Shape::Irregular };
            let (mut nlo, mut nhi) = (map_bound(&lo), map_bound(&hi));
            if let Some((c, _)) = &affine {
                if c.is_negative() {
                    std::mem::swap(&mut nlo, &mut nhi);
                }
            }
            Shape::Converges { limit: l, lo: nlo, hi: nhi }
        }
        Shape::Up { lo } => diverging_image(f, &affine, true, lo.as_ref()),
        Shape::Down { hi } => diverging_image(f, &affine, false, hi.as_ref()),
        Shape::Oscillates => match (&affine, at_infinity(f, true), at_infinity(f, false)) {
            (Some((c, d)), _, _) if c.is_zero() => Shape::Fixed(d.clone()),
            (Some(_), _, _) => Shape::Oscillates,
            (None, Ext::Finite(u), Ext::Finite(v)) if u == v => Shape::Converges { limit: u, lo: None, hi: None },
            _ => Shape::Irregular,
        },
        Shape::Irregular => Shape::Irregular,
    }
}

fn diverging_image(f: &RationalFunction, affine: &Option<(Rational, Rational)>, up: bool, bound: Option<&Rational>) -> Shape {
    if let Some((c, d)) = affine {
        if c.is_zero() {
            return Shape::Fixed(d.clone());
        }
        let b = bound.map(|x| c * x + d);
        return if c.is_positive() == up { Shape::Up { lo: b } } else { Shape::Down { hi: b } };
    }
    match at_infinity(f, up) {
        Ext::PosInf => Shape::Up { lo: None },
        Ext::NegInf => Shape::Down { hi: None },
        Ext::Finite(v) => Shape::Converges { limit: v, lo: None, hi: None },
    }
}

impl OffsetTail {
    pub fn shape(&self) -> Shape {
        match self.raw_shape() {
            Shape::Cycle(v) if v.iter().all(|x| *x == v[0]) => Shape::Fixed(v[0].clone()),
            s => s,
        }
    }

    fn raw_shape(&self) -> Shape {
        match self {
            OffsetTail::Constant(c) => Shape::Fixed(c.clone()),
            OffsetTail::AffineOrbit { a, b, start } => affine_shape(a, b, start),
            OffsetTail::MobiusOrbit { m, start } => mobius_shape(m, start),
            OffsetTail::MonotoneUp => Shape::Up { lo: None },
            OffsetTail::MonotoneDown => Shape::Down { hi: None },
            OffsetTail::FiniteSet(v) if v.is_empty() => Shape::Irregular,
            OffsetTail::FiniteSet(v) => Shape::Cycle(v.clone()),
            OffsetTail::Image { f, inner } => image_shape(f, inner.shape()),
            OffsetTail::Converges(l) => Shape::Converges { limit: l.clone(), lo: None, hi: None },
            OffsetTail::Sum(parts) => self.sum_shape(parts),
            OffsetTail::Unclassified => Shape::Irregular,
        }
    }

    fn sum_shape(&self, parts: &[OffsetTail]) -> Shape {
        let shapes: Vec<Shape> = parts.iter().map(OffsetTail::shape).collect();
        let add = |a: Option<Rational>, b: Option<Rational>| Some(a? + b?);
        let mut period = 1usize;
        let (mut limit, mut lo, mut hi) = (Some(Rational::zero()), Some(Rational::zero()), Some(Rational::zero()));
        let (mut up, mut down, mut cyclic) = (false, false, false);
        for sh in &shapes {
            match sh {
                Shape::Fixed(c) => {
                    limit = add(limit, Some(c.clone()));
                    lo = add(lo, Some(c.clone()));
                    hi = add(hi, Some(c.clone()));
                }
                Shape::Cycle(v) => {
                    cyclic = true;
                    period = lcm(period, v.len());
                    let (l, h) = hull_of(v);
                    limit = None;
                    lo = add(lo, Some(l));
                    hi = add(hi, Some(h));
                }
                Shape::Converges { limit: l, lo: a, hi: b } => {
                    limit = add(limit, Some(l.clone()));
                    lo = add(lo, a.clone());
                    hi = add(hi, b.clone());
                }
                Shape::Up { lo: a } => {
                    up = true;
                    lo = add(lo, a.clone());
                }
                Shape::Down { hi: b } => {
                    down = true;
                    hi = add(hi, b.clone());
                }
                Shape::Oscillates | Shape::Irregular => return Shape::Irregular,
            }
        }
        let bounded_rest = |dir: fn(&Shape) -> bool| {
            shapes.iter().all(|sh| dir(sh) || matches!(sh, Shape::Fixed(_) | Shape::Cycle(_)) || matches!(sh, Shape::Converges { lo: Some(_), hi: Some(_), .. }))
        };
        match (up, down) {
            (true, true) => Shape::Irregular,
            (true, false) if bounded_rest(|s| matches!(s, Shape::Up { .. })) => Shape::Up { lo },
            (false, true) if bounded_rest(|s| matches!(s, Shape::Down { .. })) => Shape::Down { hi },
            (true, _) | (_, true) => Shape::Irregular,
            _ if cyclic => {
                if shapes.iter().any(|sh| matches!(sh, Shape::Converges { .. })) || period > MAX_TRANSIENT {
                    return Shape::Irregular;
                }
                match (0..period).map(|k| self.value(k)).collect::<Option<Vec<_>>>() {
                    Some(v) => Shape::Cycle(v),
                    None => Shape::Irregular,
                }
            }
            _ => match limit {
                Some(l) if shapes.iter().all(|sh| matches!(sh, Shape::Fixed(_))) => Shape::Fixed(l),
                Some(l) => Shape::Converges { limit: l, lo, hi },
                None => Shape::Irregular,
            },
        }
    }

    /// Limit points of the sequence, `None` when it is not classified.
    pub fn limit_set(&self) -> Option<LimitSetDescriptor> {
        Some(match self.shape() {
            Shape::Fixed(c) => LimitSetDescriptor::point(c),
            Shape::Cycle(v) => LimitSetDescriptor::points(v),
            Shape::Converges { limit, .. } => LimitSetDescriptor::point(limit),
            Shape::Up { .. } => LimitSetDescriptor::strong_plus(),
            Shape::Down { .. } => LimitSetDescriptor::strong_minus(),
            Shape::Oscillates => LimitSetDescriptor::oscillating(),
            Shape::Irregular => return None,
        })
    }

    /// Closed hull of all present and future values with their limit
    /// points; `None` on a side with no exact bound.
    pub fn hull(&self) -> (Option<Ext>, Option<Ext>) {
        let fin = |x: Option<Rational>| x.map(Ext::Finite);
        match self.shape() {
            Shape::Fixed(c) => (Some(Ext::Finite(c.clone())), Some(Ext::Finite(c))),
            Shape::Cycle(v) => {
                let (lo, hi) = hull_of(&v);
                (Some(Ext::Finite(lo)), Some(Ext::Finite(hi)))
            }
            Shape::Converges { lo, hi, .. } => (fin(lo), fin(hi)),
            Shape::Up { lo } => (fin(lo), Some(Ext::PosInf)),
            Shape::Down { hi } => (Some(Ext::NegInf), fin(hi)),
            Shape::Oscillates => (Some(Ext::NegInf), Some(Ext::PosInf)),
            Shape::Irregular => (None, None),
        }
    }

    /// The value `k` passes from now, when it can be computed exactly.
    pub fn value(&self, k: usize) -> Option<Rational> {
        match self {
            OffsetTail::Constant(c) => Some(c.clone()),
            OffsetTail::AffineOrbit { a, b, start } => {
                let mut x = start.clone();
                for _ in 0..k {
                    x = a * &x + b;
                }
                Some(x)
            }
            OffsetTail::MobiusOrbit { m, start } => {
                let mut x = start.clone();
                for _ in 0..k {
                    x = mobius_eval(m, &x)?;
                }
                Some(x)
            }
            OffsetTail::FiniteSet(v) if !v.is_empty() => Some(v[k % v.len()].clone()),
            OffsetTail::Image { f, inner } => f.eval(&[inner.value(k)?]).ok(),
            OffsetTail::Sum(parts) => parts.iter().try_fold(Rational::zero(), |acc, p| Some(acc + p.value(k)?)),
            _ => None,
        }
    }

    /// The limit when the sequence converges to a single finite value.
    pub fn limit(&self) -> Option<Rational> {
        match self.shape() {
            Shape::Fixed(c) => Some(c),
            Shape::Converges { limit, .. } => Some(limit),
            _ => None,
        }
    }

    /// True when the sequence converges to a limit it never reaches.
    pub fn limit_unattained(&self) -> bool {
        let Shape::Converges { limit, .. } = self.shape() else { return false };
        match self {
            OffsetTail::AffineOrbit { a, start, .. } => !a.is_zero() && *start != limit,
            OffsetTail::MobiusOrbit { m: [a, b, c, d], start } => !(a * d - b * c).is_zero() && *start != limit,
            OffsetTail::Image { f, inner } => {
                inner.limit_unattained()
                    && f.as_mobius_in(0).is_some_and(|[a, b, c, d]| !(&a * &d - &b * &c).is_zero())
            }
            _ => false,
        }
    }

    /// True when no present or future value equals zero.
    pub fn never_zero(&self) -> bool {
        let shape = self.shape();
        match &shape {
            Shape::Fixed(c) => return !c.is_zero(),
            Shape::Cycle(v) => return v.iter().all(|x| !x.is_zero()),
            _ => {}
        }
        let zero = Ext::Finite(Rational::zero());
        match self.hull() {
            (Some(lo), _) if lo > zero => return true,
            (_, Some(hi)) if hi < zero => return true,
            _ => {}
        }
        if let Shape::Converges { limit, .. } = &shape {
            if limit.is_zero() {
                if let OffsetTail::AffineOrbit { start, .. } | OffsetTail::MobiusOrbit { start, .. } = self {
                    return !start.is_zero();
                }
            } else if let (Some(Ext::Finite(lo)), Some(Ext::Finite(hi))) = self.hull() {
                return lo.is_positive() || hi.is_negative();
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn brute(m: &[Rational; 4], s: &Rational, n: usize) -> Vec<Rational> {
        orbit_values(m, s, n).unwrap()
    }

    #[test]
    fn affine_shapes() {
        let t = OffsetTail::AffineOrbit { a: q("1/2"), b: q("1"), start: q("0") };
        assert_eq!(t.shape(), Shape::Converges { limit: q("2"), lo: Some(q("0")), hi: Some(q("2")) });
        let t = OffsetTail::AffineOrbit { a: q("-1/2"), b: q("0"), start: q("4") };
        assert_eq!(t.hull(), (Some(Ext::Finite(q("-2"))), Some(Ext::Finite(q("4")))));
        let t = OffsetTail::AffineOrbit { a: q("3"), b: q("-2"), start: q("2") };
        assert_eq!(t.shape(), Shape::Up { lo: Some(q("2")) });
        let t = OffsetTail::AffineOrbit { a: q("-1"), b: q("1"), start: q("0") };
        assert_eq!(t.shape(), Shape::Cycle(vec![q("0"), q("1")]));
    }

    #[test]
    fn hyperbolic_mobius_matches_iteration() {
        // x -> (3x + 2) / (x + 2): fixed points 2 and -1, attracting at 2.
        let m = [q("3"), q("2"), q("1"), q("2")];
        let t = OffsetTail::MobiusOrbit { m: m.clone(), start: q("0") };
        let Shape::Converges { limit, lo, hi } = t.shape() else { panic!() };
        assert_eq!(limit, q("2"));
        let vals = brute(&m, &q("0"), 40);
        let (blo, bhi) = hull_of(&vals);
        assert_eq!(lo.unwrap(), blo);
        assert!(hi.unwrap() >= bhi);
        assert!(vals.iter().all(|v| *v < q("2")));
    }

    #[test]
    fn parabolic_mobius() {
        // x -> x / (x + 1): parabolic at 0, orbit 1, 1/2, 1/3, ...
        let t = OffsetTail::MobiusOrbit { m: [q("1"), q("0"), q("1"), q("1")], start: q("1") };
        assert_eq!(t.shape(), Shape::Converges { limit: q("0"), lo: Some(q("0")), hi: Some(q("1")) });
        assert!(t.never_zero());
    }

    #[test]
    fn elliptic_finite_order() {
        // x -> -1/x has order two.
        let t = OffsetTail::MobiusOrbit { m: [q("0"), q("-1"), q("1"), q("0")], start: q("2") };
        assert_eq!(t.shape(), Shape::Cycle(vec![q("2"), q("-1/2")]));
    }

    #[test]
    fn images() {
        let inner = OffsetTail::AffineOrbit { a: q("1"), b: q("1"), start: q("0") };
        let f = RationalFunction::var(0).mul(&RationalFunction::constant(q("-2")));
        let t = OffsetTail::Image { f, inner: Box::new(inner.clone()) };
        assert_eq!(t.shape(), Shape::Down { hi: Some(q("0")) });
        let recip = RationalFunction::constant(q("1")).div(&RationalFunction::var(0).add(&RationalFunction::constant(q("1")))).unwrap();
        let t = OffsetTail::Image { f: recip, inner: Box::new(inner) };
        assert_eq!(t.limit(), Some(q("0")));
        assert_eq!(t.value(3), Some(q("1/4")));
    }
}
