use crate::error::{invalid, Error, Result};
use crate::linalg::ComplexMatrix;

use super::{Channel, Povm, VALIDATION_TOL};

/// Completely positive maps `T_1, ..., T_m` on `M_d` whose sum is trace
/// preserving.
#[derive(Debug, Clone, PartialEq)]
pub struct Instrument {
    branches: Vec<Channel>,
}

impl Instrument {
    pub fn new(branches: Vec<Channel>) -> Result<Self> {
        let inst = Self::from_branches_unchecked(branches)?;
        inst.validate()?;
        Ok(inst)
    }

    /// Only checks that the branches share a square shape.
    pub fn from_branches_unchecked(branches: Vec<Channel>) -> Result<Self> {
        let Some(first) = branches.first() else {
            return Err(invalid("an instrument needs at least one branch"));
        };
        let d = first.input_dim();
        if branches
            .iter()
            .any(|b| b.input_dim() != d || b.output_dim() != d)
        {
            return Err(invalid(format!("every branch must map M_{d} to M_{d}")));
        }
        Ok(Self { branches })
    }

    pub fn from_kraus(kraus: &[Vec<ComplexMatrix>]) -> Result<Self> {
        let branches = kraus
            .iter()
            .map(|k| Channel::from_kraus(k))
            .collect::<Result<Vec<_>>>()?;
        Self::new(branches)
    }

    /// Lüders instrument `ρ ↦ √E_i ρ √E_i`.
    pub fn luders(povm: &Povm) -> Result<Self> {
        let kraus = povm
            .effects()
            .iter()
            .map(|e| Ok(vec![e.mat_sqrt_psd()?]))
            .collect::<Result<Vec<_>>>()?;
        Self::from_kraus(&kraus)
    }

    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        for (i, b) in self.branches.iter().enumerate() {
            let v = b.cp_violation();
            if v > VALIDATION_TOL {
                problems.push(format!("branch {i} is not CP: Choi eigenvalue {:.3e}", -v));
            }
        }
        let total = self.total_channel();
        let tp = total.tp_violation();
        if tp > VALIDATION_TOL {
            problems.push(format!("branches sum to a non-TP map: defect {tp:.3e}"));
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(problems.join("; ")))
        }
    }

    pub fn dim(&self) -> usize {
        self.branches[0].input_dim()
    }

    pub fn outcomes(&self) -> usize {
        self.branches.len()
    }

    pub fn branches(&self) -> &[Channel] {
        &self.branches
    }

    pub fn branch(&self, i: usize) -> &Channel {
        &self.branches[i]
    }

    /// Induced POVM `E'_i = T_i*(1)`.
    pub fn povm(&self) -> Povm {
        Povm::from_effects_unchecked(
            self.branches
                .iter()
                .map(|b| b.dual_of_identity().hermitian_part())
                .collect(),
        )
    }

    /// Non-selective channel `Σ_i T_i`.
    pub fn total_channel(&self) -> Channel {
        let terms: Vec<(f64, &Channel)> = self.branches.iter().map(|b| (1.0, b)).collect();
        Channel::combination(&terms).expect("branches share dimensions")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::targets;

    #[test]
    fn luders_reproduces_povm() {
        let p = targets::qubit_sic();
        let inst = Instrument::luders(&p).unwrap();
        let induced = inst.povm();
        for (a, b) in induced.effects().iter().zip(p.effects()) {
            assert!((a - b).max_abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_non_tp_sum() {
        let err = Instrument::new(vec![Channel::identity(2), Channel::identity(2)])
            .unwrap_err()
            .to_string();
        assert!(err.contains("non-TP"), "{err}");
    }
}
