//! ITRM test programs. `R3`-style registers that are never written serve
//! as constant zero for unconditional jumps.

pub const PROGRAMS: &[(&str, &str)] = &[
    ("two_plus_two", "registers 3
inc R1
inc R1
inc R2
inc R2
jz R2 8
dec R2
inc R1
jz R3 4
halt
"),
    ("three_times_two", "registers 5
inc R2
inc R2
inc R2
inc R4
inc R4
jz R4 14
dec R4
copy R2 R3
jz R3 12
dec R3
inc R1
jz R5 8
jz R5 5
halt
halt
"),
    ("countdown", "registers 2
inc R1
inc R1
inc R1
inc R1
inc R1
jz R1 8
dec R1
jz R2 5
halt
"),
    ("reset_at_omega", "registers 3
inc R1
jz R1 4
inc R1
jz R3 1
halt
"),
    ("counter_loop", "registers 2
inc R1
jz R2 0
"),
    ("liminf_one", "registers 6
inc R4
inc R2
inc R5
jz R5 10
zero R5
inc R5
copy R4 R1
copy R2 R1
inc R2
jz R3 3
halt
"),
    ("liminf_two", "registers 6
inc R4
inc R4
inc R2
inc R2
inc R5
jz R5 12
zero R5
inc R5
copy R4 R1
copy R2 R1
inc R2
jz R3 5
halt
"),
    ("omega_squared", "registers 3
inc R1
inc R2
jz R1 5
inc R1
jz R3 2
jz R2 9
inc R2
inc R1
jz R3 2
halt
"),
    ("copy_chain", "registers 4
inc R1
inc R1
copy R1 R2
copy R2 R3
inc R3
halt
"),
    ("zero_then_count", "registers 2
inc R1
inc R1
zero R1
inc R1
halt
"),
    ("pingpong_liminf_zero", "registers 4
inc R3
jz R3 6
zero R1
inc R1
inc R3
jz R2 1
halt
"),
    ("fall_off_end", "registers 1
inc R1
inc R1
"),
    ("jump_to_end", "registers 2
inc R1
jz R2 3
inc R1
"),
    ("decrement_pair", "registers 3
inc R1
inc R1
inc R2
dec R1
dec R2
jz R2 7
inc R1
halt
"),
];

/// Halts after `k` limits, counting them down in `R4`.
pub fn after_limits(k: usize) -> String {
    let mut s = String::from("registers 4\n");
    for _ in 0..k {
        s.push_str("inc R4\n");
    }
    let l = k;
    s.push_str(&format!(
        "inc R1\njz R1 {a}\ninc R1\njz R3 {b}\ndec R4\njz R4 {h}\ninc R1\njz R3 {b}\nhalt\n",
        a = l + 4,
        b = l + 1,
        h = l + 8
    ));
    s
}

pub fn all() -> Vec<(String, String)> {
    let mut v: Vec<(String, String)> = PROGRAMS.iter().map(|(n, s)| (n.to_string(), s.to_string())).collect();
    for k in 1..=6 {
        v.push((format!("after_{k}_limits"), after_limits(k)));
    }
    v
}
