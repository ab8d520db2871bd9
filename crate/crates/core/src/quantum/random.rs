//! Haar-distributed unitaries and the random states, channels and
//! instruments built from them.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{normalize, vec_inner, ComplexMatrix, C64};

use super::{Channel, DensityMatrix, Instrument, Povm};

fn gaussian(rng: &mut impl Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Uniformly random unit vector in `C^d`.
pub fn random_pure(d: usize, rng: &mut impl Rng) -> Vec<C64> {
    let mut v: Vec<C64> = (0..d).map(|_| gaussian(rng)).collect();
    normalize(&mut v);
    v
}

/// Haar isometry `C^d -> C^n` (`n ≥ d`), via Gram–Schmidt on a Ginibre
/// matrix.
pub fn random_isometry(d: usize, n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    assert!(n >= d, "isometry needs n >= d");
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(d);
    while cols.len() < d {
        let mut v: Vec<C64> = (0..n).map(|_| gaussian(rng)).collect();
        for _ in 0..2 {
            for c in &cols {
                let p = vec_inner(c, &v);
                for (x, y) in v.iter_mut().zip(c) {
                    *x -= p * y;
                }
            }
        }
        if crate::linalg::vec_norm(&v) > 1e-8 {
            normalize(&mut v);
            cols.push(v);
        }
    }
    ComplexMatrix::from_fn(n, d, |r, c| cols[c][r])
}

pub fn random_unitary(d: usize, rng: &mut impl Rng) -> ComplexMatrix {
    random_isometry(d, d, rng)
}

/// Full-rank random state from the Hilbert–Schmidt ensemble.
pub fn random_density(d: usize, rng: &mut impl Rng) -> DensityMatrix {
    let g = ComplexMatrix::from_fn(d, d, |_, _| gaussian(rng));
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::from_matrix_unchecked(m.scale(1.0 / tr).hermitian_part())
}

/// Channel from a Haar isometry `C^d -> C^d ⊗ C^d`.
pub fn random_channel(d: usize, rng: &mut impl Rng) -> Channel {
    let v = random_isometry(d, d * d, rng);
    let kraus: Vec<ComplexMatrix> = (0..d)
        .map(|k| ComplexMatrix::from_fn(d, d, |a, b| v[(a * d + k, b)]))
        .collect();
    Channel::from_kraus(&kraus).expect("Kraus operators share dimensions")
}

/// `m`-outcome instrument on `M_d`: a Haar isometry `C^d -> C^d ⊗ C^m`
/// split by its second factor, one Kraus operator per outcome.
pub fn random_instrument(m: usize, d: usize, rng: &mut impl Rng) -> Instrument {
    let v = random_isometry(d, d * m, rng);
    let branches = (0..m)
        .map(|i| {
            let k = ComplexMatrix::from_fn(d, d, |a, b| v[(a * m + i, b)]);
            Channel::from_kraus(&[k]).expect("square Kraus operator")
        })
        .collect();
    Instrument::from_branches_unchecked(branches).expect("branches share dimensions")
}

/// POVM induced by a random instrument.
pub fn random_povm(m: usize, d: usize, rng: &mut impl Rng) -> Povm {
    random_instrument(m, d, rng).povm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let u = random_unitary(4, &mut rng);
        let err = (&(&u.adjoint() * &u) - &ComplexMatrix::identity(4)).max_abs();
        assert!(err < 1e-12);
    }

    #[test]
    fn random_objects_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        random_instrument(3, 2, &mut rng).validate().unwrap();
        random_povm(4, 3, &mut rng).validate().unwrap();
        random_channel(3, &mut rng).validate().unwrap();
        DensityMatrix::new(random_density(3, &mut rng).into_matrix()).unwrap();
    }

    #[test]
    fn seeding_is_deterministic() {
        let a = random_unitary(3, &mut ChaCha8Rng::seed_from_u64(7));
        let b = random_unitary(3, &mut ChaCha8Rng::seed_from_u64(7));
        assert_eq!(a, b);
    }
}
