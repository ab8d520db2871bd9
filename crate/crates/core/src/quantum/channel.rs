use crate::error::{invalid, Error, Result};
use crate::linalg::{ComplexMatrix, Factor, C64, ZERO};

use super::{DensityMatrix, VALIDATION_TOL};

/// Linear map `M_d -> M_{d'}` held as its Choi matrix on `C^{d'} ⊗ C^d`.
///
/// The type itself only requires a hermitian Choi matrix, so it also covers
/// instrument branches (CP, not TP) and differences of channels.
/// [`Channel::validate`] checks complete positivity and trace preservation.
#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    input_dim: usize,
    output_dim: usize,
    choi: ComplexMatrix,
}

impl Channel {
    pub fn from_choi(input_dim: usize, output_dim: usize, choi: ComplexMatrix) -> Result<Self> {
        let n = input_dim * output_dim;
        if choi.rows() != n || choi.cols() != n {
            return Err(invalid(format!(
                "Choi matrix of a map M_{input_dim} -> M_{output_dim} must be {n}x{n}"
            )));
        }
        if !choi.is_hermitian() {
            return Err(invalid("Choi matrix is not hermitian"));
        }
        Ok(Self {
            input_dim,
            output_dim,
            choi,
        })
    }

    /// Builds the Choi matrix by evaluating `map` on matrix units.
    pub fn from_map(
        input_dim: usize,
        output_dim: usize,
        map: impl Fn(&ComplexMatrix) -> ComplexMatrix,
    ) -> Result<Self> {
        let (d, dp) = (input_dim, output_dim);
        let mut choi = ComplexMatrix::zeros(d * dp, d * dp);
        for i in 0..d {
            for j in 0..d {
                let out = map(&ComplexMatrix::unit(d, i, j));
                if out.rows() != dp || out.cols() != dp {
                    return Err(invalid("map returned an operator of the wrong size"));
                }
                for a in 0..dp {
                    for b in 0..dp {
                        choi[(a * d + i, b * d + j)] = out[(a, b)];
                    }
                }
            }
        }
        Self::from_choi(input_dim, output_dim, choi.hermitian_part())
    }

    /// `ρ ↦ Σ_k K_k ρ K_k*`.
    pub fn from_kraus(kraus: &[ComplexMatrix]) -> Result<Self> {
        let Some(first) = kraus.first() else {
            return Err(invalid("need at least one Kraus operator"));
        };
        let (dp, d) = (first.rows(), first.cols());
        if kraus.iter().any(|k| k.rows() != dp || k.cols() != d) {
            return Err(invalid("Kraus operators must share dimensions"));
        }
        let n = d * dp;
        let mut choi = ComplexMatrix::zeros(n, n);
        for k in kraus {
            // vec(K) with the output index first
            let v: Vec<C64> = (0..n).map(|r| k[(r / d, r % d)]).collect();
            for r in 0..n {
                if v[r] == ZERO {
                    continue;
                }
                for c in 0..n {
                    choi[(r, c)] += v[r] * v[c].conj();
                }
            }
        }
        Self::from_choi(d, dp, choi)
    }

    pub fn identity(d: usize) -> Self {
        Self::unitary(&ComplexMatrix::identity(d)).expect("identity is unitary")
    }

    /// `ρ ↦ U ρ U*`.
    pub fn unitary(u: &ComplexMatrix) -> Result<Self> {
        Self::from_kraus(std::slice::from_ref(u))
    }

    /// `ρ ↦ tr(ρ) 1/d`.
    pub fn depolarizing(d: usize) -> Self {
        let choi = ComplexMatrix::identity(d * d).scale(1.0 / d as f64);
        Self::from_choi(d, d, choi).expect("valid Choi matrix")
    }

    /// `ρ ↦ Σ_i |i⟩⟨i| ρ |i⟩⟨i|`.
    pub fn dephasing(d: usize) -> Self {
        let mut choi = ComplexMatrix::zeros(d * d, d * d);
        for i in 0..d {
            choi[(i * d + i, i * d + i)] = C64::new(1.0, 0.0);
        }
        Self::from_choi(d, d, choi).expect("valid Choi matrix")
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn output_dim(&self) -> usize {
        self.output_dim
    }

    pub fn choi(&self) -> &ComplexMatrix {
        &self.choi
    }

    pub fn into_choi(self) -> ComplexMatrix {
        self.choi
    }

    pub fn is_square(&self) -> bool {
        self.input_dim == self.output_dim
    }

    /// `tr₁ J`, the partial trace over the output factor (equals `T*(1)ᵀ`).
    pub fn output_traced(&self) -> ComplexMatrix {
        self.choi
            .partial_trace(self.output_dim, self.input_dim, Factor::First)
            .expect("Choi dimensions are consistent")
    }

    /// `T*(1)`.
    pub fn dual_of_identity(&self) -> ComplexMatrix {
        self.output_traced().transpose()
    }

    pub fn cp_violation(&self) -> f64 {
        (-self.choi.min_eigenvalue().unwrap_or(f64::NEG_INFINITY)).max(0.0)
    }

    pub fn tp_violation(&self) -> f64 {
        (&self.output_traced() - &ComplexMatrix::identity(self.input_dim)).spectral_norm()
    }

    pub fn check_cp(&self) -> Result<()> {
        let v = self.cp_violation();
        if v > VALIDATION_TOL {
            return Err(Error::Validation(format!(
                "not completely positive: Choi eigenvalue {:.3e}",
                -v
            )));
        }
        Ok(())
    }

    /// Checks complete positivity and trace preservation.
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if let Err(e) = self.check_cp() {
            problems.push(e.to_string());
        }
        let tp = self.tp_violation();
        if tp > VALIDATION_TOL {
            problems.push(format!("not trace preserving: ‖tr₁J - 1‖ = {tp:.3e}"));
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(problems.join("; ")))
        }
    }

    /// `T(X) = tr₂[J (1 ⊗ Xᵀ)]` for any operator `X`.
    pub fn apply_matrix(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let (d, dp) = (self.input_dim, self.output_dim);
        assert_eq!(x.rows(), d, "channel input dimension mismatch");
        ComplexMatrix::from_fn(dp, dp, |a, b| {
            let mut acc = ZERO;
            for i in 0..d {
                for j in 0..d {
                    acc += self.choi[(a * d + i, b * d + j)] * x[(i, j)];
                }
            }
            acc
        })
    }

    /// Dual map, `tr(X T(ρ)) = tr(T*(X) ρ)`.
    pub fn apply_dual(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let (d, dp) = (self.input_dim, self.output_dim);
        assert_eq!(x.rows(), dp, "channel output dimension mismatch");
        ComplexMatrix::from_fn(d, d, |i, j| {
            let mut acc = ZERO;
            for a in 0..dp {
                for b in 0..dp {
                    acc += x[(b, a)] * self.choi[(a * d + j, b * d + i)];
                }
            }
            acc
        })
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.input_dim {
            return Err(invalid(format!(
                "state of dimension {} fed to a channel on M_{}",
                rho.dim(),
                self.input_dim
            )));
        }
        Ok(DensityMatrix::from_matrix_unchecked(
            self.apply_matrix(rho.matrix()).hermitian_part(),
        ))
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn compose(&self, first: &Channel) -> Result<Channel> {
        if first.output_dim != self.input_dim {
            return Err(invalid("composition dimension mismatch"));
        }
        Channel::from_map(first.input_dim, self.output_dim, |x| {
            self.apply_matrix(&first.apply_matrix(x))
        })
    }

    /// `X ↦ U T(U* X U) U*`.
    pub fn conjugated(&self, u: &ComplexMatrix) -> Result<Channel> {
        if !self.is_square() || u.rows() != self.input_dim {
            return Err(invalid("conjugation needs a square channel and matching unitary"));
        }
        let ua = u.adjoint();
        Channel::from_map(self.input_dim, self.output_dim, |x| {
            &(u * &self.apply_matrix(&(&(&ua * x) * u))) * &ua
        })
    }

    /// Weighted sum `Σ w_k T_k` of maps with equal dimensions.
    pub fn combination(terms: &[(f64, &Channel)]) -> Result<Channel> {
        let Some((_, first)) = terms.first() else {
            return Err(invalid("empty combination"));
        };
        let mut choi = ComplexMatrix::zeros(first.choi.rows(), first.choi.cols());
        for (w, t) in terms {
            if t.input_dim != first.input_dim || t.output_dim != first.output_dim {
                return Err(invalid("combination of maps with different dimensions"));
            }
            choi += &t.choi.scale(*w);
        }
        Channel::from_choi(first.input_dim, first.output_dim, choi)
    }

    /// `self - other`, a hermiticity-preserving map.
    pub fn difference(&self, other: &Channel) -> Result<Channel> {
        Self::combination(&[(1.0, self), (-1.0, other)])
    }
}
