//! SDPA sparse text format.
//!
//! The standard pair maps onto SDPA's dual with `F₀ = −C`, `F_k = A_k` and
//! `c = b`; hermitian blocks are realified first.

use std::fmt::Write as _;

use super::problem::{realify, SdpProblem};

/// Values are written with `+ 0.0`, which prints `-0` as `0`.
pub fn to_sdpa(p: &SdpProblem) -> String {
    let real = if p.is_real() { p.clone() } else { realify(p) };
    let mut out = String::new();
    let _ = writeln!(out, "\"disturbance SDP, F0 = -C, F_k = A_k, c = b");
    let _ = writeln!(out, "{}", real.a.len());
    let _ = writeln!(out, "{}", real.blocks.len());
    let dims: Vec<String> = real.blocks.iter().map(|b| b.dim.to_string()).collect();
    let _ = writeln!(out, "{}", dims.join(" "));
    let b: Vec<String> = real.b.iter().map(|v| format!("{:e}", v + 0.0)).collect();
    let _ = writeln!(out, "{}", b.join(" "));
    for e in &real.c.entries {
        let _ = writeln!(out, "0 {} {} {} {:e}", e.block + 1, e.row + 1, e.col + 1, -e.value.re + 0.0);
    }
    for (k, a) in real.a.iter().enumerate() {
        for e in &a.entries {
            let _ = writeln!(out, "{} {} {} {} {:e}", k + 1, e.block + 1, e.row + 1, e.col + 1, e.value.re + 0.0);
        }
    }
    out
}
