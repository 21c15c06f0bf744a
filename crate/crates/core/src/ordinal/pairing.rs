/// Cantor pairing `(n + m)(n + m + 1)/2 + n`.
pub fn rho(n: u64, m: u64) -> u64 {
    let s = n + m;
    s * (s + 1) / 2 + n
}

pub fn rho_inv(k: u64) -> (u64, u64) {
    // Largest s with s(s+1)/2 <= k.
    let mut s = (((8 * k as u128 + 1) as f64).sqrt() as u64).saturating_sub(1) / 2;
    while (s + 1) * (s + 2) / 2 <= k {
        s += 1;
    }
    while s * (s + 1) / 2 > k {
        s -= 1;
    }
    let n = k - s * (s + 1) / 2;
    (n, s - n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(rho(0, 0), 0);
        assert_eq!(rho(1, 1), 4);
        assert_eq!(rho_inv(2), (1, 0));
    }

    #[test]
    fn inverse_by_enumeration() {
        // Oracle: list pairs diagonal by diagonal and number them in order.
        let mut k = 0;
        for s in 0..140u64 {
            for n in 0..=s {
                let m = s - n;
                assert_eq!(rho(n, m), k);
                assert_eq!(rho_inv(k), (n, m));
                k += 1;
            }
        }
    }

    #[test]
    fn injective_on_first_ten_thousand_pairs() {
        let mut seen = std::collections::HashSet::new();
        for n in 0..100 {
            for m in 0..100 {
                assert!(seen.insert(rho(n, m)));
                assert_eq!(rho_inv(rho(n, m)), (n, m));
            }
        }
    }
}
