use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::linalg::{ComplexMatrix, Factor, ZERO};
use crate::quantum::{Channel, Instrument, Povm};

use super::lmi::{LmiProgram, LmiSolution, Placement, Var};
use super::solver::SolverOptions;

/// Largest eigenvalue of a hermitian matrix: `min t  s.t.  t·1 − H ⪰ 0`.
pub fn lambda_max_sdp(h: &ComplexMatrix, opts: &SolverOptions) -> Result<LmiSolution> {
    if !h.is_hermitian() {
        return Err(invalid("λ_max program needs a hermitian matrix"));
    }
    let mut p = LmiProgram::new();
    let t = p.scalar();
    let b = p.block(h.rows());
    p.add_term(b, 1.0, t, Placement::Identity);
    p.add_constant(b, &h.scale(-1.0));
    p.minimize_scalar(t, 1.0);
    p.solve(opts)
}

/// `‖M‖₁ = min ½(tr P + tr Q)  s.t.  [[P, M], [M*, Q]] ⪰ 0`.
pub fn trace_norm_sdp(m: &ComplexMatrix, opts: &SolverOptions) -> Result<LmiSolution> {
    if !m.is_square() {
        return Err(invalid("trace-norm program needs a square matrix"));
    }
    let n = m.rows();
    let mut p = LmiProgram::new();
    let ps = p.hermitian(n);
    let qs = p.hermitian(n);
    let b = p.block(2 * n);
    p.add_term(b, 1.0, ps, Placement::Diagonal(0));
    p.add_term(b, 1.0, qs, Placement::Diagonal(n));
    p.add_constant(b, &off_diagonal(m));
    p.minimize_trace(ps, 0.5);
    p.minimize_trace(qs, 0.5);
    p.solve(opts)
}

/// `[[0, M], [M*, 0]]`.
fn off_diagonal(m: &ComplexMatrix) -> ComplexMatrix {
    let n = m.rows();
    ComplexMatrix::from_fn(2 * n, 2 * n, |r, c| match (r < n, c < n) {
        (true, false) => m[(r, c - n)],
        (false, true) => m[(c, r - n)].conj(),
        _ => ZERO,
    })
}

/// Diamond norm of a hermiticity-preserving map given by its Choi matrix
/// on `C^{d_out} ⊗ C^{d_in}` (Watrous' program):
///
/// ```text
/// min ½(λ₀ + λ₁)  s.t.  [[Y₀, −J], [−J, Y₁]] ⪰ 0,  λ_k·1 − tr₁Y_k ⪰ 0
/// ```
pub fn diamond_norm(
    choi: &ComplexMatrix,
    d_out: usize,
    d_in: usize,
    opts: &SolverOptions,
) -> Result<f64> {
    let n = d_out * d_in;
    if choi.rows() != n || choi.cols() != n {
        return Err(invalid(format!("Choi matrix must be {n}x{n}")));
    }
    if !choi.is_hermitian() {
        return Err(invalid("diamond norm needs a hermiticity-preserving map"));
    }
    if choi.max_abs() == 0.0 {
        return Ok(0.0);
    }
    let mut p = LmiProgram::new();
    let y0 = p.hermitian(n);
    let y1 = p.hermitian(n);
    let l0 = p.scalar();
    let l1 = p.scalar();
    let big = p.block(2 * n);
    p.add_term(big, 1.0, y0, Placement::Diagonal(0));
    p.add_term(big, 1.0, y1, Placement::Diagonal(n));
    p.add_constant(big, &off_diagonal(&choi.scale(-1.0)));
    for (y, l) in [(y0, l0), (y1, l1)] {
        let b = p.block(d_in);
        p.add_term(b, 1.0, l, Placement::Identity);
        p.add_term(b, -1.0, y, Placement::TraceFirst { d_out, d_in });
    }
    p.minimize_scalar(l0, 0.5);
    p.minimize_scalar(l1, 0.5);
    let sol = p.solve(opts)?;
    let sol = require(sol)?;
    Ok(sol.value.max(0.0))
}

/// `‖Φ − Ψ‖⋄` for two maps of equal shape.
pub fn diamond_distance(a: &Channel, b: &Channel, opts: &SolverOptions) -> Result<f64> {
    let diff = a.difference(b)?;
    diamond_norm(diff.choi(), diff.output_dim(), diff.input_dim(), opts)
}

fn require(sol: LmiSolution) -> Result<LmiSolution> {
    let status = sol.solution.status;
    match status {
        super::Status::Optimal => Ok(sol),
        _ => Err(Error::Solver {
            status: status.to_string(),
            gap: sol.solution.relative_gap,
            iterations: sol.solution.iterations,
        }),
    }
}

const FACE_TOL: f64 = 1e-12;

/// Sizes `(d̂, ď)` of the packed tradeoff program: total block dimension and
/// number of real variables.
pub fn tradeoff_dims(d: usize, m: usize) -> (usize, usize) {
    ((m + 4) * d * d + 2 * (m + 2) * d, 2 + (m + 2) * d * d)
}

/// The tradeoff program with handles to its variables.
pub struct TradeoffProgram {
    pub program: LmiProgram,
    pub branches: Vec<Var>,
    pub dim: usize,
}

/// Builds `ν(E, λ) = min ‖Σ_i I_i − id‖⋄  s.t.  ‖I_i*(1) − E_i‖∞ ≤ λ`
/// from its constraint list, with the normalization kept as a pair of
/// opposite inequalities.
pub fn tradeoff_program(e: &Povm, lambda: f64) -> Result<TradeoffProgram> {
    e.validate()?;
    if !(0.0..=1.0).contains(&lambda) {
        return Err(invalid(format!("λ = {lambda} outside [0, 1]")));
    }
    let d = e.dim();
    let m = e.outcomes();
    let n = d * d;
    let tr1 = Placement::TraceFirst { d_out: d, d_in: d };
    let id_d = ComplexMatrix::identity(d);

    let mut p = LmiProgram::new();
    let y0 = p.hermitian(n);
    let y1 = p.hermitian(n);
    // At λ = 0 the constraints force tr₁J_i = E_iᵀ, so J_i ⪰ 0 lives on
    // C^d ⊗ range(E_iᵀ). Parametrizing it there keeps an interior point.
    let frames: Vec<Option<ComplexMatrix>> = (0..m)
        .map(|i| {
            if lambda > 0.0 {
                return Ok(None);
            }
            let eig = e.effect(i).transpose().hermitian_part().herm_eig()?;
            let scale = eig.values.first().copied().unwrap_or(0.0).max(1.0);
            let r = eig.values.iter().filter(|&&v| v > FACE_TOL * scale).count();
            if r == d {
                return Ok(None);
            }
            let v = ComplexMatrix::from_fn(d, r, |row, k| eig.vectors[(row, k)]);
            Ok(Some(ComplexMatrix::identity(d).kron(&v)))
        })
        .collect::<Result<_>>()?;
    let branches: Vec<Var> = frames
        .iter()
        .map(|f| match f {
            Some(w) => p.hermitian_framed(w),
            None => p.hermitian(n),
        })
        .collect();
    let l0 = p.scalar();
    let l1 = p.scalar();

    // [[Y0, ΣJ_i], [ΣJ_i, Y1]] ⪰ [[0, J(id)], [J(id), 0]]
    let big = p.block(2 * n);
    p.add_term(big, 1.0, y0, Placement::Diagonal(0));
    p.add_term(big, 1.0, y1, Placement::Diagonal(n));
    for &j in &branches {
        p.add_term(big, 1.0, j, Placement::OffDiagonal(n));
    }
    p.add_constant(big, &off_diagonal(&Channel::identity(d).choi().scale(-1.0)));

    // λ_k·1 − tr₁Y_k ⪰ 0
    for (y, l) in [(y0, l0), (y1, l1)] {
        let b = p.block(d);
        p.add_term(b, 1.0, l, Placement::Identity);
        p.add_term(b, -1.0, y, tr1);
    }
    // Y_k ⪰ 0
    for y in [y0, y1] {
        let b = p.block(n);
        p.add_term(b, 1.0, y, Placement::Diagonal(0));
    }
    // ±(tr₁J_i − E_iᵀ) + λ·1 ⪰ 0
    for (i, &j) in branches.iter().enumerate() {
        let et = e.effect(i).transpose();
        for sign in [1.0, -1.0] {
            let b = p.block(d);
            p.add_term(b, sign, j, tr1);
            p.add_constant(b, &(&id_d.scale(lambda) - &et.scale(sign)));
        }
    }
    // J_i ⪰ 0
    for (&j, f) in branches.iter().zip(&frames) {
        let b = p.block(f.as_ref().map_or(n, |w| w.cols()));
        p.add_term(b, 1.0, j, Placement::Intrinsic(0));
    }
    // Σ tr₁J_i ⪰ 1 and −Σ tr₁J_i ⪰ −1
    for sign in [1.0, -1.0] {
        let b = p.block(d);
        for &j in &branches {
            p.add_term(b, sign, j, tr1);
        }
        p.add_constant(b, &id_d.scale(-sign));
    }
    p.minimize_scalar(l0, 0.5);
    p.minimize_scalar(l1, 0.5);
    Ok(TradeoffProgram {
        program: p,
        branches,
        dim: d,
    })
}

/// One solved point of the tradeoff curve.
#[derive(Debug, Clone)]
pub struct TradeoffSolution {
    pub lambda: f64,
    /// Optimal value of the program.
    pub nu: f64,
    /// Repaired optimal instrument.
    pub instrument: Instrument,
    /// `max_i ‖E'_i − E_i‖∞` of the repaired instrument.
    pub delta_linf: f64,
    pub relative_gap: f64,
    pub iterations: usize,
}

/// Solves `ν(E, λ)` and returns the optimal instrument.
///
/// The raw branches are projected onto the PSD cone and renormalized by
/// `J_i ↦ (1 ⊗ N^{-1/2}) J_i (1 ⊗ N^{-1/2})` with `N = Σ tr₁J_i`, which
/// removes solver-tolerance defects without moving the point measurably.
pub fn tradeoff_sdp(e: &Povm, lambda: f64, opts: &SolverOptions) -> Result<TradeoffSolution> {
    let tp = tradeoff_program(e, lambda)?;
    let sol = require(tp.program.solve(opts)?)?;
    let d = tp.dim;
    let raw: Vec<ComplexMatrix> = tp
        .branches
        .iter()
        .map(|&v| {
            let j = sol.matrix(v);
            j.herm_eig().map(|eig| eig.map_values(|x| x.max(0.0)))
        })
        .collect::<Result<_>>()?;
    let mut total = ComplexMatrix::zeros(d, d);
    for j in &raw {
        total += &j.partial_trace(d, d, Factor::First)?;
    }
    let eig = total.hermitian_part().herm_eig()?;
    if eig.values.last().copied().unwrap_or(0.0) <= 0.0 {
        return Err(Error::Validation("solver returned a degenerate instrument".into()));
    }
    let inv_sqrt = eig.map_values(|x| 1.0 / x.sqrt());
    let s = ComplexMatrix::identity(d).kron(&inv_sqrt);
    let branches = raw
        .iter()
        .map(|j| Channel::from_choi(d, d, (&(&s * j) * &s).hermitian_part()))
        .collect::<Result<Vec<_>>>()?;
    let instrument = Instrument::new(branches)?;
    let delta_linf = instrument
        .povm()
        .effects()
        .iter()
        .zip(e.effects())
        .map(|(a, b)| (a - b).spectral_norm())
        .fold(0.0, f64::max);
    Ok(TradeoffSolution {
        lambda,
        nu: sol.value.max(0.0),
        instrument,
        delta_linf,
        relative_gap: sol.solution.relative_gap,
        iterations: sol.solution.iterations,
    })
}

/// Solves the program on a λ grid in parallel; results keep grid order.
pub fn tradeoff_sweep(
    e: &Povm,
    lambdas: &[f64],
    opts: &SolverOptions,
) -> Vec<Result<TradeoffSolution>> {
    lambdas
        .par_iter()
        .map(|&l| tradeoff_sdp(e, l, opts))
        .collect()
}

/// `λ` grid `[0, max_i ‖E_i − tr(E_i)·1/d‖∞]` beyond which `ν = 0`.
pub fn lambda_range(e: &Povm) -> f64 {
    let d = e.dim();
    let id = ComplexMatrix::identity(d);
    e.effects()
        .iter()
        .map(|x| (x - &id.scale(x.trace().re / d as f64)).spectral_norm())
        .fold(0.0, f64::max)
}
