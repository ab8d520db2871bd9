//! Measurement-error functionals on POVM pairs and disturbance functionals
//! on channels.
//!
//! Exact values come from eigenvalue computations or the diamond-norm SDP.
//! Worst-case quantities over pure states without a closed form are local
//! searches from many random starts, recorded as such in
//! [`MeasureValue::method`].

mod sphere;

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::linalg::{ComplexMatrix, C64};
use crate::quantum::{Channel, Povm};
use crate::sdp::{self, SolverOptions};

use sphere::{optimize, SphereObjective};

pub const DEFAULT_RESTARTS: usize = 200;
pub const DEFAULT_SEED: u64 = 0x5eed;

/// Largest outcome count accepted by [`delta_tv`].
pub const MAX_SIGN_OUTCOMES: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Method {
    Exact,
    SignEnumeration,
    HeuristicRestarts { restarts: usize },
    Sdp,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certificate {
    /// Unit vector attaining the value.
    State(Vec<C64>),
    /// Sign pattern and the state attaining `½ tr(Σ s_i Δ_i ρ)`.
    Signs { signs: Vec<i8>, state: Vec<C64> },
    /// Maximizer and minimizer of an expectation.
    Pair { sup: Vec<C64>, inf: Vec<C64> },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureValue {
    pub value: f64,
    pub method: Method,
    pub certificate: Option<Certificate>,
}

impl MeasureValue {
    fn exact(value: f64, certificate: Option<Certificate>) -> Self {
        Self {
            value,
            method: Method::Exact,
            certificate,
        }
    }
}

fn check_pair(e: &Povm, ep: &Povm) -> Result<()> {
    if e.dim() != ep.dim() || e.outcomes() != ep.outcomes() {
        return Err(invalid(format!(
            "POVMs differ in shape: d={}, m={} vs d={}, m={}",
            e.dim(),
            e.outcomes(),
            ep.dim(),
            ep.outcomes()
        )));
    }
    Ok(())
}

fn check_channel(t: &Channel) -> Result<()> {
    if !t.is_square() {
        return Err(invalid("disturbance needs a channel M_d -> M_d"));
    }
    t.validate()
}

fn check_restarts(restarts: usize) -> Result<()> {
    if restarts == 0 {
        return Err(invalid("at least one restart is required"));
    }
    Ok(())
}

/// Worst-case total variation `sup_ρ ½ Σ_i |tr[(E'_i − E_i) ρ]|`, exact by
/// enumerating sign patterns.
///
/// `Σ Δ_i = 0`, so flipping every sign negates the operator; fixing
/// `s_1 = +1` and taking both spectral ends covers all patterns.
pub fn delta_tv(e: &Povm, ep: &Povm) -> Result<MeasureValue> {
    check_pair(e, ep)?;
    let m = e.outcomes();
    if m > MAX_SIGN_OUTCOMES {
        return Err(invalid(format!(
            "{m} outcomes exceed the sign-enumeration limit of {MAX_SIGN_OUTCOMES}"
        )));
    }
    let diffs: Vec<ComplexMatrix> = ep
        .effects()
        .iter()
        .zip(e.effects())
        .map(|(a, b)| a - b)
        .collect();
    let d = e.dim();
    let mut best = (f64::NEG_INFINITY, 0u64, 1.0, Vec::new());
    for mask in 0..(1u64 << (m - 1)) {
        let mut s = ComplexMatrix::zeros(d, d);
        for (i, di) in diffs.iter().enumerate() {
            if i > 0 && mask >> (i - 1) & 1 == 1 {
                s -= di;
            } else {
                s += di;
            }
        }
        let eig = s.hermitian_part().herm_eig()?;
        let (hi, lo) = (eig.values[0], eig.values[d - 1]);
        let (val, flip, k) = if hi >= -lo { (hi, 1.0, 0) } else { (-lo, -1.0, d - 1) };
        if val > best.0 {
            best = (val, mask, flip, eig.vector(k));
        }
    }
    let (val, mask, flip, state) = best;
    let signs = (0..m)
        .map(|i| {
            let s = if i > 0 && mask >> (i - 1) & 1 == 1 { -1.0 } else { 1.0 };
            (s * flip) as i8
        })
        .collect();
    Ok(MeasureValue {
        value: (0.5 * val).max(0.0),
        method: Method::SignEnumeration,
        certificate: Some(Certificate::Signs { signs, state }),
    })
}

/// `max_i ‖E'_i − E_i‖∞`.
pub fn delta_linf(e: &Povm, ep: &Povm) -> Result<MeasureValue> {
    check_pair(e, ep)?;
    let mut best = (0.0, None);
    for (a, b) in ep.effects().iter().zip(e.effects()) {
        let eig = (a - b).hermitian_part().herm_eig()?;
        let n = eig.values.len();
        let (v, k) = if eig.values[0] >= -eig.values[n - 1] {
            (eig.values[0], 0)
        } else {
            (-eig.values[n - 1], n - 1)
        };
        if best.1.is_none() || v > best.0 {
            best = (v, Some(eig.vector(k)));
        }
    }
    Ok(MeasureValue::exact(best.0, best.1.map(Certificate::State)))
}

/// `ψ ↦ ⟨ψ|T(|ψ⟩⟨ψ|)|ψ⟩`.
struct Expectation<'a>(&'a Channel);

impl SphereObjective for Expectation<'_> {
    fn value(&self, psi: &[C64]) -> f64 {
        self.0.apply_matrix(&ComplexMatrix::projector(psi)).expectation(psi)
    }

    fn gradient_operator(&self, psi: &[C64]) -> ComplexMatrix {
        let p = ComplexMatrix::projector(psi);
        (&self.0.apply_matrix(&p) + &self.0.apply_dual(&p)).hermitian_part()
    }
}

/// Worst-case fidelity `inf_ψ ⟨ψ|T(|ψ⟩⟨ψ|)|ψ⟩`.
pub fn worst_fidelity(t: &Channel, restarts: usize) -> Result<MeasureValue> {
    worst_fidelity_seeded(t, restarts, DEFAULT_SEED)
}

pub fn worst_fidelity_seeded(t: &Channel, restarts: usize, seed: u64) -> Result<MeasureValue> {
    check_channel(t)?;
    check_restarts(restarts)?;
    let best = optimize(&Expectation(t), t.input_dim(), false, restarts, seed);
    Ok(MeasureValue {
        value: best.value.clamp(0.0, 1.0),
        method: Method::HeuristicRestarts { restarts },
        certificate: Some(Certificate::State(best.psi)),
    })
}

/// Haar average of `⟨ψ|T(|ψ⟩⟨ψ|)|ψ⟩`, from the entanglement fidelity
/// `F_e = ⟨Ω|J|Ω⟩/d` as `(d F_e + 1)/(d + 1)`.
pub fn avg_fidelity(t: &Channel) -> Result<MeasureValue> {
    check_channel(t)?;
    let d = t.input_dim();
    let j = t.choi();
    let mut s = 0.0;
    for i in 0..d {
        for k in 0..d {
            s += j[(i * d + i, k * d + k)].re;
        }
    }
    let fe = s / (d * d) as f64;
    let df = d as f64;
    Ok(MeasureValue::exact(((df * fe + 1.0) / (df + 1.0)).clamp(0.0, 1.0), None))
}

/// `½ sup_ψ ‖T(|ψ⟩⟨ψ|) − |ψ⟩⟨ψ|‖₁`.
///
/// For a fixed projector `Q` the objective `tr[Q(T(P) − P)]` is a quadratic
/// form in `ψ`, maximized by the top eigenvector of `T*(Q) − Q`; for fixed
/// `ψ` the best `Q` projects onto the positive part of `T(P) − P`. Each
/// start alternates the two steps, which never decreases the value.
pub fn trace_norm_disturbance(t: &Channel, restarts: usize) -> Result<MeasureValue> {
    trace_norm_disturbance_seeded(t, restarts, DEFAULT_SEED)
}

pub fn trace_norm_disturbance_seeded(
    t: &Channel,
    restarts: usize,
    seed: u64,
) -> Result<MeasureValue> {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rayon::prelude::*;

    check_channel(t)?;
    check_restarts(restarts)?;
    let d = t.input_dim();
    let half_norm = |psi: &[C64]| -> Result<(f64, ComplexMatrix)> {
        let p = ComplexMatrix::projector(psi);
        let diff = (&t.apply_matrix(&p) - &p).hermitian_part();
        let eig = diff.herm_eig()?;
        let q = eig.map_values(|x| if x > 0.0 { 1.0 } else { 0.0 });
        let v = eig.values.iter().filter(|&&x| x > 0.0).sum::<f64>();
        Ok((v, q))
    };
    let runs: Vec<Result<(f64, Vec<C64>)>> = (0..restarts)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(k as u64));
            let mut psi = crate::quantum::random::random_pure(d, &mut rng);
            let (mut val, mut q) = half_norm(&psi)?;
            for _ in 0..500 {
                let g = (&t.apply_dual(&q) - &q).hermitian_part();
                let next = g.herm_eig()?.vector(0);
                let (nv, nq) = half_norm(&next)?;
                if nv <= val + 1e-14 {
                    break;
                }
                (val, q, psi) = (nv, nq, next);
            }
            Ok((val, psi))
        })
        .collect();
    let mut best: Option<(f64, Vec<C64>)> = None;
    for r in runs {
        let r = r?;
        if best.as_ref().is_none_or(|b| r.0 > b.0) {
            best = Some(r);
        }
    }
    let (value, psi) = best.expect("at least one restart");
    Ok(MeasureValue {
        value: value.clamp(0.0, 1.0),
        method: Method::HeuristicRestarts { restarts },
        certificate: Some(Certificate::State(psi)),
    })
}

/// `sup_ψ ⟨ψ|T(|ψ⟩⟨ψ|)|ψ⟩ − inf_φ ⟨φ|T(|φ⟩⟨φ|)|φ⟩`.
pub fn hat_delta(t: &Channel, restarts: usize) -> Result<MeasureValue> {
    hat_delta_seeded(t, restarts, DEFAULT_SEED)
}

pub fn hat_delta_seeded(t: &Channel, restarts: usize, seed: u64) -> Result<MeasureValue> {
    check_channel(t)?;
    check_restarts(restarts)?;
    let d = t.input_dim();
    let obj = Expectation(t);
    let sup = optimize(&obj, d, true, restarts, seed);
    let inf = optimize(&obj, d, false, restarts, seed.wrapping_add(restarts as u64));
    Ok(MeasureValue {
        value: (sup.value - inf.value).max(0.0),
        method: Method::HeuristicRestarts { restarts },
        certificate: Some(Certificate::Pair {
            sup: sup.psi,
            inf: inf.psi,
        }),
    })
}

/// `‖T − id‖⋄` from the diamond-norm SDP.
pub fn diamond_distance(t: &Channel) -> Result<MeasureValue> {
    diamond_distance_with(t, &SolverOptions::default())
}

pub fn diamond_distance_with(t: &Channel, opts: &SolverOptions) -> Result<MeasureValue> {
    check_channel(t)?;
    let v = sdp::diamond_distance(t, &Channel::identity(t.input_dim()), opts)?;
    Ok(MeasureValue {
        value: v.min(2.0),
        method: Method::Sdp,
        certificate: None,
    })
}
