//! Target measurements used throughout the examples.

use std::f64::consts::PI;

use crate::error::{invalid, Result};
use crate::linalg::{ComplexMatrix, C64};

use super::Povm;

/// `{|i⟩⟨i|}` on `C^d`.
pub fn computational_basis(d: usize) -> Povm {
    Povm::from_effects_unchecked((0..d).map(|i| ComplexMatrix::unit(d, i, i)).collect())
}

/// Tetrahedral qubit SIC, `E_i = (1 + r_i·σ)/4`.
pub fn qubit_sic() -> Povm {
    let s = 1.0 / 3f64.sqrt();
    let bloch = [[s, s, s], [s, -s, -s], [-s, s, -s], [-s, -s, s]];
    Povm::from_effects_unchecked(
        bloch
            .iter()
            .map(|r| {
                ComplexMatrix::from_fn(2, 2, |a, b| match (a, b) {
                    (0, 0) => C64::new(1.0 + r[2], 0.0),
                    (0, 1) => C64::new(r[0], -r[1]),
                    (1, 0) => C64::new(r[0], r[1]),
                    _ => C64::new(1.0 - r[2], 0.0),
                })
                .scale(0.25)
            })
            .collect(),
    )
}

/// Hesse qutrit SIC: the nine vectors obtained from `(0, 1, -1)/√2` and its
/// cyclic shifts with phases `η = e^{2πi/3}`, each effect `|v⟩⟨v|/3`.
pub fn qutrit_sic() -> Povm {
    let eta = C64::from_polar(1.0, 2.0 * PI / 3.0);
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let mut vectors = Vec::with_capacity(9);
    for k in 0..3 {
        let ek = eta.powu(k);
        vectors.push([zero, one, -ek]);
        vectors.push([-ek, zero, one]);
        vectors.push([one, -ek, zero]);
    }
    let h = 1.0 / 2f64.sqrt();
    Povm::from_effects_unchecked(
        vectors
            .iter()
            .map(|v| {
                let v: Vec<C64> = v.iter().map(|z| z * h).collect();
                ComplexMatrix::projector(&v).scale(1.0 / 3.0)
            })
            .collect(),
    )
}

pub fn sic(d: usize) -> Result<Povm> {
    match d {
        2 => Ok(qubit_sic()),
        3 => Ok(qutrit_sic()),
        _ => Err(invalid(format!("no built-in SIC in dimension {d}"))),
    }
}

/// Two-outcome projective measurement `{P ⊕ 0, 0 ⊕ P}` on `C^{2k}`, where
/// `P` is the identity on `C^k`.
pub fn degenerate_von_neumann(k: usize) -> Povm {
    let d = 2 * k;
    let half = |lo: usize| {
        ComplexMatrix::diag(
            &(0..d)
                .map(|i| if (lo..lo + k).contains(&i) { 1.0 } else { 0.0 })
                .collect::<Vec<_>>(),
        )
    };
    Povm::from_effects_unchecked(vec![half(0), half(k)])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn targets_are_valid_povms() {
        computational_basis(4).validate().unwrap();
        qubit_sic().validate().unwrap();
        qutrit_sic().validate().unwrap();
        degenerate_von_neumann(2).validate().unwrap();
    }

    #[test]
    fn sic_overlaps_are_equiangular() {
        for p in [qubit_sic(), qutrit_sic()] {
            let d = p.dim() as f64;
            let m = p.outcomes();
            for i in 0..m {
                // rank-one projectors scaled by 1/d
                let pi = p.effect(i).scale(d);
                assert!((pi.trace().re - 1.0).abs() < 1e-12);
                for j in 0..m {
                    let pj = p.effect(j).scale(d);
                    let ov = pi.hs_inner(&pj).re;
                    let want = if i == j { 1.0 } else { 1.0 / (d + 1.0) };
                    assert!((ov - want).abs() < 1e-12, "overlap {i},{j} = {ov}");
                }
            }
        }
    }
}
