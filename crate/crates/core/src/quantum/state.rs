use crate::error::{invalid, Error, Result};
use crate::linalg::{ComplexMatrix, C64};

/// Unit-trace positive semidefinite operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(invalid("density matrix must be square"));
        }
        if !matrix.is_hermitian() {
            return Err(Error::Validation("density matrix is not hermitian".into()));
        }
        let tr = matrix.trace().re;
        if (tr - 1.0).abs() > 1e-10 {
            return Err(Error::Validation(format!("trace is {tr}, expected 1")));
        }
        let lo = matrix.min_eigenvalue()?;
        if lo < -1e-10 {
            return Err(Error::Validation(format!(
                "density matrix has negative eigenvalue {lo:.3e}"
            )));
        }
        Ok(Self { matrix })
    }

    pub fn pure(psi: &[C64]) -> Result<Self> {
        let n = crate::linalg::vec_norm(psi);
        if n == 0.0 {
            return Err(invalid("zero vector is not a state"));
        }
        let v: Vec<C64> = psi.iter().map(|z| z / n).collect();
        Ok(Self {
            matrix: ComplexMatrix::projector(&v),
        })
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(d).scale(1.0 / d as f64),
        }
    }

    /// Basis state `|i⟩⟨i|`.
    pub fn basis(d: usize, i: usize) -> Self {
        Self {
            matrix: ComplexMatrix::unit(d, i, i),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub(crate) fn from_matrix_unchecked(matrix: ComplexMatrix) -> Self {
        Self { matrix }
    }
}

/// Root fidelity `F(ρ, σ) = ‖√ρ √σ‖₁`.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(invalid(format!(
            "fidelity of states of dimension {} and {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    let a = rho.matrix.mat_sqrt_psd()?;
    let b = sigma.matrix.mat_sqrt_psd()?;
    Ok((&a * &b).trace_norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fidelity_examples() {
        let zero = DensityMatrix::basis(2, 0);
        let one = DensityMatrix::basis(2, 1);
        let mixed = DensityMatrix::maximally_mixed(2);
        assert!((fidelity(&zero, &zero).unwrap() - 1.0).abs() < 1e-12);
        assert!(fidelity(&zero, &one).unwrap().abs() < 1e-12);
        let f = fidelity(&zero, &mixed).unwrap();
        assert!((f - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_trace() {
        assert!(DensityMatrix::new(ComplexMatrix::identity(2)).is_err());
        assert!(DensityMatrix::new(ComplexMatrix::diag(&[1.5, -0.5])).is_err());
    }
}
