use std::cmp::Ordering;

use super::{rho, Ordinal, OrdinalError};
use crate::codec::Bits;

/// Degree cap and coefficient cap used when recognising infinite order types.
const DECODE_MAX_DEGREE: usize = 4;
const DECODE_MAX_COEFF: u64 = 8;

/// Set `A` of naturals coding the relation `n < m iff rho(n, m) in A`.
///
/// The diagonal bit `rho(n, n)` marks `n` as a member of the field, which is
/// how a one-element order is told apart from the empty one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderCode {
    pub bits: Bits,
}

/// The first `count` elements of `alpha` (below `w^w`) in canonical order:
/// by coefficient sum, then by ordinal order.
pub fn canonical_enumeration(alpha: &Ordinal, count: usize) -> Option<Vec<Ordinal>> {
    let top = alpha.coeffs()?;
    if let Some(n) = alpha.as_nat() {
        return Some((0..n.min(count as u64)).map(Ordinal::nat).collect());
    }
    let slots = top.len();
    let mut out = Vec::with_capacity(count);
    let mut size = 0u64;
    while out.len() < count {
        let mut level = Vec::new();
        tuples_with_sum(slots, size, &mut vec![0; slots], 0, &mut level);
        // `level` holds coefficient vectors indexed by power of w.
        let mut members: Vec<Ordinal> = level.iter().map(|c| Ordinal::from_coeffs(c)).filter(|b| b < alpha).collect();
        members.sort();
        for m in members {
            if out.len() == count {
                break;
            }
            out.push(m);
        }
        size += 1;
    }
    Some(out)
}

fn tuples_with_sum(slots: usize, remaining: u64, cur: &mut Vec<u64>, at: usize, out: &mut Vec<Vec<u64>>) {
    if at + 1 == slots {
        cur[at] = remaining;
        out.push(cur.clone());
        return;
    }
    for v in 0..=remaining {
        cur[at] = v;
        tuples_with_sum(slots, remaining - v, cur, at + 1, out);
    }
}

/// Position of `beta` in the canonical enumeration of `alpha`.
pub fn canonical_index(alpha: &Ordinal, beta: &Ordinal) -> Option<u64> {
    if beta >= alpha {
        return None;
    }
    if alpha.is_finite() {
        return beta.as_nat();
    }
    let slots = alpha.coeffs()?.len();
    let bc = beta.coeffs()?;
    let size: u64 = bc.iter().sum();
    let mut before = 0u64;
    for s in 0..=size {
        let mut level = Vec::new();
        tuples_with_sum(slots, s, &mut vec![0; slots], 0, &mut level);
        for c in level {
            let o = Ordinal::from_coeffs(&c);
            if o < *alpha && (s < size || o < *beta) {
                before += 1;
            }
        }
    }
    Some(before)
}

/// Codes the order type of `alpha` on the first `bound` naturals.
pub fn ordinal_to_code(alpha: &Ordinal, bound: usize) -> Result<OrderCode, OrdinalError> {
    let elems = canonical_enumeration(alpha, bound).ok_or(OrdinalError::TooLarge)?;
    let mut ones = Vec::new();
    for (n, a) in elems.iter().enumerate() {
        ones.push(rho(n as u64, n as u64) as usize);
        for (m, b) in elems.iter().enumerate() {
            if a < b {
                ones.push(rho(n as u64, m as u64) as usize);
            }
        }
    }
    let len = ones.iter().max().map_or(0, |m| m + 1);
    let mut bits = vec![false; len];
    for i in ones {
        bits[i] = true;
    }
    Ok(OrderCode { bits: Bits::finite(bits) })
}

/// Reads the order coded on the first `bound` naturals.
///
/// A field smaller than `bound` is a finite ordinal. A saturated field is read
/// as the least infinite ordinal whose canonical enumeration induces the same
/// order on the prefix.
pub fn code_to_ordinal(code: &OrderCode, bound: usize) -> Result<Ordinal, OrdinalError> {
    let bit = |n: usize, m: usize| code.bits.get(rho(n as u64, m as u64) as usize);
    let field = (0..bound).take_while(|&n| bit(n, n)).count();
    if (field..bound).any(|n| bit(n, n)) {
        return Err(OrdinalError::NotAWellOrderCode("field is not an initial segment".into()));
    }
    for n in 0..bound {
        for m in 0..bound {
            if n != m && (n >= field || m >= field) && bit(n, m) {
                return Err(OrdinalError::NotAWellOrderCode(format!("pair ({n}, {m}) outside the field")));
            }
        }
    }
    let less = |n: usize, m: usize| bit(n, m);
    for n in 0..field {
        for m in 0..field {
            if n != m && less(n, m) == less(m, n) {
                return Err(OrdinalError::NotAWellOrderCode(format!("{n} and {m} are not comparable exactly one way")));
            }
        }
    }
    for a in 0..field {
        for b in 0..field {
            for c in 0..field {
                if less(a, b) && less(b, c) && !less(a, c) {
                    return Err(OrdinalError::NotAWellOrderCode(format!("{a} < {b} < {c} is not transitive")));
                }
            }
        }
    }
    if field < bound {
        return Ok(Ordinal::nat(field as u64));
    }
    let target = |n: usize, m: usize| less(n, m);
    for degree in 2..=DECODE_MAX_DEGREE + 1 {
        let mut coeffs = vec![0u64; degree];
        if let Some(found) = search_coeffs(&mut coeffs, degree - 1, bound, &target) {
            return Ok(found);
        }
    }
    Err(OrdinalError::UnrecognizedOrderType)
}

/// Tries coefficient vectors from the top power down, in increasing order.
fn search_coeffs(
    coeffs: &mut Vec<u64>,
    slot: usize,
    bound: usize,
    target: &dyn Fn(usize, usize) -> bool,
) -> Option<Ordinal> {
    let top = coeffs.len() - 1;
    let start = if slot == top { 1 } else { 0 };
    for v in start..=DECODE_MAX_COEFF {
        coeffs[slot] = v;
        let found = if slot == 0 {
            let alpha = Ordinal::from_coeffs(coeffs);
            matches_prefix(&alpha, bound, target).then_some(alpha)
        } else {
            search_coeffs(coeffs, slot - 1, bound, target)
        };
        if found.is_some() {
            return found;
        }
    }
    coeffs[slot] = 0;
    None
}

fn matches_prefix(alpha: &Ordinal, bound: usize, target: &dyn Fn(usize, usize) -> bool) -> bool {
    let Some(elems) = canonical_enumeration(alpha, bound) else {
        return false;
    };
    for (n, a) in elems.iter().enumerate() {
        for (m, b) in elems.iter().enumerate().take(n) {
            let want = target(m, n);
            if (b.cmp(a) == Ordering::Less) != want {
                return false;
            }
        }
    }
    true
}
