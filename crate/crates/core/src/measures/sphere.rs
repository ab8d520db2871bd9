//! Local optimization over unit vectors of `C^d`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::linalg::{normalize, vec_norm, ComplexMatrix, C64};
use crate::quantum::random::random_pure;

const GRAD_TOL: f64 = 1e-9;
const MAX_STEPS: usize = 2000;

/// A smooth real function of a unit vector with its euclidean gradient
/// operator: `g(ψ)` and a hermitian `G(ψ)` such that `∇g = G ψ`.
pub(crate) trait SphereObjective: Sync {
    fn value(&self, psi: &[C64]) -> f64;
    fn gradient_operator(&self, psi: &[C64]) -> ComplexMatrix;
}

/// Best point found from one start, minimizing `sign · g`.
#[derive(Debug, Clone)]
pub(crate) struct Local {
    pub value: f64,
    pub psi: Vec<C64>,
}

/// Riemannian steepest descent with Armijo backtracking.
fn descend(obj: &dyn SphereObjective, sign: f64, mut psi: Vec<C64>) -> Local {
    let mut f = sign * obj.value(&psi);
    let mut step: f64 = 1.0;
    for _ in 0..MAX_STEPS {
        let g = obj.gradient_operator(&psi);
        let gpsi = g.mul_vec(&psi);
        let along: C64 = psi.iter().zip(&gpsi).map(|(a, b)| a.conj() * b).sum();
        let grad: Vec<C64> = gpsi
            .iter()
            .zip(&psi)
            .map(|(gp, p)| (gp - along * p) * sign)
            .collect();
        let gn = vec_norm(&grad);
        if gn < GRAD_TOL {
            break;
        }
        let mut moved = false;
        step = (step * 2.0).min(4.0);
        while step > 1e-12 {
            let mut trial: Vec<C64> =
                psi.iter().zip(&grad).map(|(p, g)| p - g * step).collect();
            normalize(&mut trial);
            let ft = sign * obj.value(&trial);
            // the slope along −grad is −2‖grad‖²; asking for half of the
            // linear decrease rejects steps past the minimizer of the local
            // quadratic model, which would otherwise oscillate
            if ft <= f - step * gn * gn {
                psi = trial;
                f = ft;
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if !moved {
            break;
        }
    }
    Local {
        value: sign * f,
        psi,
    }
}

/// Runs `restarts` descents from Haar-random starts seeded `seed + k` and
/// returns the best one, ties going to the lowest index.
pub(crate) fn optimize(
    obj: &dyn SphereObjective,
    d: usize,
    maximize: bool,
    restarts: usize,
    seed: u64,
) -> Local {
    let sign = if maximize { -1.0 } else { 1.0 };
    let runs: Vec<Local> = (0..restarts)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(k as u64));
            descend(obj, sign, random_pure(d, &mut rng))
        })
        .collect();
    runs.into_iter()
        .reduce(|best, r| {
            if sign * r.value < sign * best.value {
                r
            } else {
                best
            }
        })
        .expect("at least one restart")
}
