//! Toy functions on bit codes for the iteration operator, with host-side
//! versions that work on bit sequences directly.

use tbss_core::codec::Bits;
use tbss_core::ordinal::rho_inv;

pub const IDENTITY: &str = "registers 1\n0: halt\n";

pub const SET_BIT_ZERO: &str = "registers 2
0: R2 := 1/4
1: if R2 <= R1 goto 3 else goto 2
2: R1 := R1 + 1/4
3: halt
";

/// Sets the lowest clear bit of a finitely supported code.
pub const APPEND_ONE: &str = "registers 3
0: R2 := R1
1: R3 := 1/4
2: if R3 <= R2 goto 3 else goto 6
3: R2 := R2 - R3
4: R3 := R3 / 4
5: goto 2
6: R1 := R1 + R3
7: halt
";

pub fn host_append_one(x: &Bits) -> Bits {
    let free = (0..).find(|&i| !x.get(i)).unwrap();
    x.with_bit(free, true)
}

pub fn host_set_bit_zero(x: &Bits) -> Bits {
    x.with_bit(0, true)
}

/// The first `bits` bits of the interleaving of `f^n(0)` over `n < w`,
/// computed on bit sequences without the engine.
pub fn host_prefix(f: fn(&Bits) -> Bits, bits: usize) -> Vec<bool> {
    let pos: Vec<(u64, u64)> = (0..bits as u64).map(rho_inv).collect();
    let strands = pos.iter().map(|p| p.1).max().unwrap() as usize + 1;
    let mut iterates = vec![Bits::zero()];
    for _ in 1..strands {
        let next = f(iterates.last().unwrap());
        iterates.push(next);
    }
    pos.iter().map(|&(i, k)| iterates[k as usize].get(i as usize)).collect()
}
