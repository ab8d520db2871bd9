//! Channels and instruments that commute with diagonal unitaries and basis
//! permutations, in three equivalent parametrizations:
//!
//! * [`SymmetricParams`] `(α, β, γ)` of `Φ = α tr[·]1/d + β id + γ Σ|i⟩⟨i|⟨i|·|i⟩`,
//! * [`FamilyParams`] `(z, μ, ν)` of the optimal instrument family,
//! * [`ConePoint`] `(x, y, z)` on the unit cone.

use crate::error::{invalid, Result};
use crate::linalg::{ComplexMatrix, C64};
use crate::quantum::{Channel, Instrument, Povm};

const PARAM_TOL: f64 = 1e-12;
const CP_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetricParams {
    pub d: usize,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

/// Spectrum of the normalized Choi matrix of a symmetric channel: `a` on the
/// off-diagonal pairs `|ij⟩` (multiplicity `d² − d`), `b` on the maximally
/// entangled vector, `c` on the rest of `span{|ii⟩}` (multiplicity `d − 1`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChoiSpectrum {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl SymmetricParams {
    pub fn new(d: usize, alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        if d < 2 {
            return Err(invalid("symmetric channels need d ≥ 2"));
        }
        let sum = alpha + beta + gamma;
        if (sum - 1.0).abs() > PARAM_TOL {
            return Err(invalid(format!("α + β + γ = {sum}, not 1")));
        }
        let p = Self {
            d,
            alpha,
            beta,
            gamma,
        };
        let s = p.spectrum();
        for (name, v) in [("a", s.a), ("b", s.b), ("c", s.c)] {
            if v < -CP_TOL {
                return Err(invalid(format!(
                    "not completely positive: Choi eigenvalue {name} = {v:.3e}"
                )));
            }
        }
        Ok(p)
    }

    pub fn spectrum(&self) -> ChoiSpectrum {
        let d = self.d as f64;
        let a = self.alpha / (d * d);
        let c = a + self.gamma / d;
        ChoiSpectrum {
            a,
            b: self.beta + c,
            c,
        }
    }

    pub fn from_spectrum(d: usize, s: ChoiSpectrum) -> Self {
        let df = d as f64;
        Self {
            d,
            alpha: df * df * s.a,
            beta: s.b - s.c,
            gamma: df * (s.c - s.a),
        }
    }
}

/// `(z, μ, ν)` with `d μ² + ν² + 2μν = 1`, canonicalized to `μ ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyParams {
    pub d: usize,
    pub z: f64,
    pub mu: f64,
    pub nu: f64,
}

impl FamilyParams {
    pub fn new(d: usize, z: f64, mu: f64, nu: f64) -> Result<Self> {
        if d < 2 {
            return Err(invalid("the instrument family needs d ≥ 2"));
        }
        if !(0.0..=1.0).contains(&z) {
            return Err(invalid(format!("z = {z} outside [0, 1]")));
        }
        let df = d as f64;
        let tp = df * mu * mu + nu * nu + 2.0 * mu * nu;
        if (tp - 1.0).abs() > PARAM_TOL {
            return Err(invalid(format!("dμ² + ν² + 2μν = {tp}, not 1")));
        }
        let (mu, nu) = if mu < 0.0 { (-mu, -nu) } else { (mu, nu) };
        Ok(Self { d, z, mu, nu })
    }

    /// `α₂ = d(1 − z)μ²`, the weight of `1/d` in the induced POVM.
    pub fn alpha2(&self) -> f64 {
        self.d as f64 * (1.0 - self.z) * self.mu * self.mu
    }

    /// `α₁ = dz/(d − 1)` of the total channel.
    pub fn alpha1(&self) -> f64 {
        let d = self.d as f64;
        d * self.z / (d - 1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConePoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl ConePoint {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&z) {
            return Err(invalid(format!("z = {z} outside [0, 1]")));
        }
        if x * x + y * y > (1.0 - z).powi(2) + PARAM_TOL {
            return Err(invalid(format!("({x}, {y}, {z}) lies outside the unit cone")));
        }
        Ok(Self { x, y, z })
    }

    pub fn on_envelope(&self) -> bool {
        (self.x * self.x + self.y * self.y - (1.0 - self.z).powi(2)).abs() <= 1e-9
    }
}

/// `I_i(ρ) = z⟨i|ρ|i⟩(1 − |i⟩⟨i|)/(d − 1) + (1 − z) K_i ρ K_i*` with
/// `K_i = μ1 + ν|i⟩⟨i|`.
pub fn family_instrument(p: &FamilyParams) -> Result<Instrument> {
    let FamilyParams { d, z, mu, nu } = *p;
    if d < 2 {
        return Err(invalid("the instrument family needs d ≥ 2"));
    }
    let flip = (z / (d as f64 - 1.0)).sqrt();
    let keep = (1.0 - z).sqrt();
    let kraus: Vec<Vec<ComplexMatrix>> = (0..d)
        .map(|i| {
            let mut ops: Vec<ComplexMatrix> = (0..d)
                .filter(|&k| k != i)
                .map(|k| ComplexMatrix::unit(d, k, i).scale(flip))
                .collect();
            let mut k = ComplexMatrix::identity(d).scale(mu);
            k[(i, i)] += C64::new(nu, 0.0);
            ops.push(k.scale(keep));
            ops
        })
        .collect();
    Instrument::from_kraus(&kraus)
}

pub fn symmetric_channel(p: &SymmetricParams) -> Result<Channel> {
    let p = SymmetricParams::new(p.d, p.alpha, p.beta, p.gamma)?;
    let d = p.d;
    let mut j = ComplexMatrix::identity(d * d).scale(p.alpha / d as f64);
    for i in 0..d {
        for k in 0..d {
            j[(i * d + i, k * d + k)] += C64::new(p.beta, 0.0);
        }
        j[(i * d + i, i * d + i)] += C64::new(p.gamma, 0.0);
    }
    Channel::from_choi(d, d, j)
}

/// Projection of a channel onto the symmetric ones, read off from the
/// expectations of the spectral projectors of the twirled Choi matrix.
pub fn twirl_channel(t: &Channel) -> Result<SymmetricParams> {
    if !t.is_square() || t.input_dim() < 2 {
        return Err(invalid("twirling needs a channel M_d -> M_d with d ≥ 2"));
    }
    let d = t.input_dim();
    let df = d as f64;
    let j = t.choi().scale(1.0 / df);
    let diag: f64 = (0..d).map(|i| j[(i * d + i, i * d + i)].re).sum();
    let total = j.trace().re;
    let mut omega = 0.0;
    for i in 0..d {
        for k in 0..d {
            omega += j[(i * d + i, k * d + k)].re;
        }
    }
    let b = omega / df;
    let s = ChoiSpectrum {
        a: (total - diag) / (df * df - df),
        b,
        c: (diag - b) / (df - 1.0),
    };
    Ok(SymmetricParams::from_spectrum(d, s))
}

/// `α₂` of the symmetrized POVM `α₂ 1/d + (1 − α₂)|i⟩⟨i|`.
pub fn twirl_povm(ep: &Povm) -> Result<f64> {
    let d = ep.dim();
    if ep.outcomes() != d || d < 2 {
        return Err(invalid(format!(
            "twirling a POVM needs m = d ≥ 2, got m = {}, d = {d}",
            ep.outcomes()
        )));
    }
    let df = d as f64;
    let hits: f64 = (0..d).map(|i| ep.effect(i)[(i, i)].re).sum();
    Ok(df / (df - 1.0) * (1.0 - hits / df))
}

/// `E''_i = α₂ 1/d + (1 − α₂)|i⟩⟨i|`.
pub fn symmetric_povm(d: usize, alpha2: f64) -> Result<Povm> {
    let effects = (0..d)
        .map(|i| {
            let mut e = ComplexMatrix::identity(d).scale(alpha2 / d as f64);
            e[(i, i)] += C64::new(1.0 - alpha2, 0.0);
            e
        })
        .collect();
    Povm::new(effects)
}

/// Marginal parameters of the device at a cone point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeMarginals {
    pub alpha1: f64,
    pub beta1: f64,
    pub a2: f64,
    pub delta_tv: f64,
}

/// Evaluates the marginals in the fixed Bloch-plane realization where `e₂`
/// has Bloch vector `(1, 0)` and `e₁` has `(2/d − 1, 2√(d−1)/d)`. Values are
/// raw formula values; nothing is clipped.
pub fn cone_to_marginals(c: &ConePoint, d: usize) -> Result<ConeMarginals> {
    if d < 2 {
        return Err(invalid("cone parametrization needs d ≥ 2"));
    }
    let df = d as f64;
    let (ex, ey) = (2.0 / df - 1.0, 2.0 * (df - 1.0).sqrt() / df);
    let rest = 1.0 - c.z;
    let e1 = 0.5 * (rest + c.x * ex + c.y * ey);
    let e2 = 0.5 * (rest + c.x);
    Ok(ConeMarginals {
        alpha1: df * c.z / (df - 1.0),
        beta1: e1 - (rest - e1) / (df - 1.0),
        a2: (1.0 - e2 - c.z) / (df * df - df),
        delta_tv: (1.0 - c.z - c.x) / 2.0,
    })
}

/// Closed-form measures of a symmetric channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymMeasures {
    /// Worst-case fidelity.
    pub f: f64,
    pub avg_fidelity: f64,
    /// Worst-case trace-norm disturbance `1 − f`.
    pub delta_trace: f64,
    /// Diamond distance to the identity, only for `α = 0`.
    pub delta_diamond: Option<f64>,
    /// `α(1 − 1/d)`: total variation of the POVM with the same parameters.
    pub delta_tv: f64,
}

pub fn sym_measures(p: &SymmetricParams) -> SymMeasures {
    let SymmetricParams {
        d,
        alpha,
        beta,
        gamma,
    } = *p;
    let df = d as f64;
    let f = alpha / df + beta + if gamma >= 0.0 { gamma / df } else { gamma };
    let avg = 2.0 / (df + 1.0) - alpha * (df - 1.0) / (df * (df + 1.0))
        + beta * (df - 1.0) / (df + 1.0);
    SymMeasures {
        f,
        avg_fidelity: avg,
        delta_trace: 1.0 - f,
        delta_diamond: (alpha.abs() <= PARAM_TOL).then(|| 2.0 * gamma * (1.0 - 1.0 / df)),
        delta_tv: alpha * (1.0 - 1.0 / df),
    }
}

/// The `z = 0` member of the family whose induced POVM has total variation
/// error `δ ∈ [0, 1 − 1/d]`.
pub fn achiever_from_delta(d: usize, delta: f64) -> Result<FamilyParams> {
    if d < 2 {
        return Err(invalid("the instrument family needs d ≥ 2"));
    }
    let df = d as f64;
    let top = 1.0 - 1.0 / df;
    if !(delta >= 0.0 && delta <= top + PARAM_TOL) {
        return Err(invalid(format!("δ = {delta} outside [0, {top}]")));
    }
    let mu = (delta.min(top) / (df - 1.0)).sqrt();
    let nu = -mu + (1.0 - (df - 1.0) * mu * mu).max(0.0).sqrt();
    FamilyParams::new(d, 0.0, mu, nu)
}
