use crate::error::{invalid, Error, Result};
use crate::linalg::ComplexMatrix;

use super::VALIDATION_TOL;

/// Positive operators `E_1, ..., E_m` on `C^d` summing to the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    effects: Vec<ComplexMatrix>,
}

impl Povm {
    pub fn new(effects: Vec<ComplexMatrix>) -> Result<Self> {
        let povm = Self { effects };
        povm.validate()?;
        Ok(povm)
    }

    pub(crate) fn from_effects_unchecked(effects: Vec<ComplexMatrix>) -> Self {
        Self { effects }
    }

    /// Checks every invariant and reports all violations at once.
    pub fn validate(&self) -> Result<()> {
        let Some(first) = self.effects.first() else {
            return Err(invalid("a POVM needs at least one effect"));
        };
        let d = first.rows();
        let mut problems = Vec::new();
        let mut sum = ComplexMatrix::zeros(d, d);
        for (i, e) in self.effects.iter().enumerate() {
            if e.rows() != d || e.cols() != d {
                return Err(invalid(format!("effect {i} is not {d}x{d}")));
            }
            if !e.is_hermitian() {
                problems.push(format!("effect {i} is not hermitian"));
                continue;
            }
            let lo = e.min_eigenvalue()?;
            if lo < -VALIDATION_TOL {
                problems.push(format!("effect {i} has negative eigenvalue {lo:.3e}"));
            }
            sum += e;
        }
        let defect = (&sum - &ComplexMatrix::identity(d)).spectral_norm();
        if defect > VALIDATION_TOL {
            problems.push(format!("effects sum to identity only up to {defect:.3e}"));
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(problems.join("; ")))
        }
    }

    pub fn dim(&self) -> usize {
        self.effects[0].rows()
    }

    pub fn outcomes(&self) -> usize {
        self.effects.len()
    }

    pub fn effects(&self) -> &[ComplexMatrix] {
        &self.effects
    }

    pub fn effect(&self, i: usize) -> &ComplexMatrix {
        &self.effects[i]
    }

    /// Outcome distribution `tr(E_i ρ)`.
    pub fn probabilities(&self, rho: &ComplexMatrix) -> Vec<f64> {
        self.effects
            .iter()
            .map(|e| e.hs_inner(rho).re)
            .collect()
    }

    /// `E'_i = t E_i + (1 - t) tr(E_i) 1/d`: mixes the POVM with the trivial
    /// measurement of the same outcome weights.
    pub fn mix_with_trivial(&self, t: f64) -> Self {
        let d = self.dim();
        let id = ComplexMatrix::identity(d);
        Self {
            effects: self
                .effects
                .iter()
                .map(|e| &e.scale(t) + &id.scale((1.0 - t) * e.trace().re / d as f64))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reports_every_violation() {
        let err = Povm::new(vec![
            ComplexMatrix::diag(&[1.2, 0.0]),
            ComplexMatrix::diag(&[-0.1, 0.5]),
        ])
        .unwrap_err()
        .to_string();
        assert!(err.contains("negative eigenvalue"), "{err}");
        assert!(err.contains("sum to identity"), "{err}");
    }

    #[test]
    fn trivial_mixture_stays_normalized() {
        let p = super::super::targets::computational_basis(3).mix_with_trivial(0.3);
        p.validate().unwrap();
        assert!((p.effect(0)[(0, 0)].re - (0.3 + 0.7 / 3.0)).abs() < 1e-15);
    }
}
