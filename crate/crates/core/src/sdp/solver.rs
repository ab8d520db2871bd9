//! Infeasible primal-dual path following with the HKM direction and a
//! Mehrotra predictor-corrector.

use crate::error::Result;
use crate::linalg::{ComplexMatrix, C64};

use super::dense::{cholesky_solve, max_step, Mat};
use super::presolve;
use super::problem::{realify, unrealify_primal, unrealify_slack, SdpProblem, SdpSolution, Status};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Bound on the relative gap and the normalized residuals.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iter: 200,
        }
    }
}

/// Consecutive iterations of growing residuals before giving up.
const DIVERGENCE_WINDOW: usize = 30;
/// Iterations without improvement of the best iterate before stopping.
const STALL_WINDOW: usize = 12;

/// Full-matrix entries `(i, j, v)` of one constraint inside one block.
type Entries = Vec<(usize, usize, f64)>;

struct RealSdp {
    dims: Vec<usize>,
    c: Vec<Mat>,
    b: Vec<f64>,
    /// For each block, the constraints touching it with their entries.
    by_block: Vec<Vec<(usize, Entries)>>,
}

impl RealSdp {
    fn new(p: &SdpProblem) -> Self {
        let dims: Vec<usize> = p.blocks.iter().map(|b| b.dim).collect();
        let mut c: Vec<Mat> = dims.iter().map(|&n| Mat::zeros(n)).collect();
        for e in &p.c.entries {
            c[e.block].set(e.row, e.col, e.value.re);
            c[e.block].set(e.col, e.row, e.value.re);
        }
        let mut by_block: Vec<Vec<(usize, Entries)>> = vec![Vec::new(); dims.len()];
        for (k, a) in p.a.iter().enumerate() {
            let mut per: Vec<Entries> = vec![Vec::new(); dims.len()];
            for e in &a.entries {
                per[e.block].push((e.row, e.col, e.value.re));
                if e.row != e.col {
                    per[e.block].push((e.col, e.row, e.value.re));
                }
            }
            for (blk, ent) in per.into_iter().enumerate() {
                if !ent.is_empty() {
                    by_block[blk].push((k, ent));
                }
            }
        }
        Self {
            dims,
            c,
            b: p.b.clone(),
            by_block,
        }
    }

    fn m(&self) -> usize {
        self.b.len()
    }

    fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// `𝒜(G)_k = Σ_b tr(A_k G_b)`, valid for non-symmetric `G`.
    fn apply(&self, g: &[Mat]) -> Vec<f64> {
        let mut out = vec![0.0; self.m()];
        for (blk, vars) in self.by_block.iter().enumerate() {
            let gb = &g[blk];
            for (k, ent) in vars {
                out[*k] += ent.iter().map(|&(i, j, v)| v * gb.get(j, i)).sum::<f64>();
            }
        }
        out
    }

    /// `Σ_k y_k A_k`.
    fn adjoint(&self, y: &[f64]) -> Vec<Mat> {
        let mut out: Vec<Mat> = self.dims.iter().map(|&n| Mat::zeros(n)).collect();
        for (blk, vars) in self.by_block.iter().enumerate() {
            for (k, ent) in vars {
                if y[*k] == 0.0 {
                    continue;
                }
                for &(i, j, v) in ent {
                    out[blk].add_at(i, j, y[*k] * v);
                }
            }
        }
        out
    }

    /// Schur complement `M_kl = Σ_b tr(A_k X A_l W)`.
    fn schur(&self, x: &[Mat], w: &[Mat]) -> Mat {
        let m = self.m();
        let mut out = Mat::zeros(m);
        for (blk, vars) in self.by_block.iter().enumerate() {
            let (xb, wb) = (&x[blk], &w[blk]);
            let n = xb.n;
            let mut g = Mat::zeros(n);
            for (pos, (l, ent_l)) in vars.iter().enumerate() {
                g.data.iter_mut().for_each(|v| *v = 0.0);
                // X A_l W as a sum of rank-one terms v X[:, r] W[s, :]
                for &(r, s, v) in ent_l {
                    let wrow = wb.row(s);
                    for p in 0..n {
                        let f = v * xb.get(p, r);
                        if f == 0.0 {
                            continue;
                        }
                        let grow = &mut g.data[p * n..(p + 1) * n];
                        for (gv, wv) in grow.iter_mut().zip(wrow) {
                            *gv += f * wv;
                        }
                    }
                }
                for (k, ent_k) in &vars[..=pos] {
                    let val: f64 = ent_k.iter().map(|&(i, j, v)| v * g.get(j, i)).sum();
                    out.add_at(*k, *l, val);
                    if k != l {
                        out.add_at(*l, *k, val);
                    }
                }
            }
        }
        out
    }

    fn initial_point(&self) -> (Vec<Mat>, Vec<Mat>) {
        let mut xs = Vec::new();
        let mut zs = Vec::new();
        for (blk, &n) in self.dims.iter().enumerate() {
            let sq = (n as f64).sqrt();
            let mut xi: f64 = 10f64.max(sq);
            let mut eta: f64 = 10f64.max(sq).max(self.c[blk].norm());
            for (k, ent) in &self.by_block[blk] {
                let norm = ent.iter().map(|e| e.2 * e.2).sum::<f64>().sqrt();
                xi = xi.max(n as f64 * (1.0 + self.b[*k].abs()) / (1.0 + norm));
                eta = eta.max(norm);
            }
            xs.push(Mat::scaled_identity(n, xi));
            zs.push(Mat::scaled_identity(n, eta));
        }
        (xs, zs)
    }
}

fn dot_all(a: &[Mat], b: &[Mat]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.dot(y)).sum()
}

fn norm_all(a: &[Mat]) -> f64 {
    a.iter().map(|x| x.dot(x)).sum::<f64>().sqrt()
}

fn vnorm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

struct Iterate {
    x: Vec<Mat>,
    y: Vec<f64>,
    z: Vec<Mat>,
}

struct Metrics {
    pobj: f64,
    dobj: f64,
    gap: f64,
    pinf: f64,
    dinf: f64,
}

impl Metrics {
    fn merit(&self) -> f64 {
        self.gap.max(self.pinf).max(self.dinf)
    }
}

/// Solves the standard-form pair of `p`; hermitian blocks are realified
/// first and the solution is mapped back.
pub fn sdp_solve(p: &SdpProblem, opts: &SolverOptions) -> Result<SdpSolution> {
    p.validate()?;
    let real = if p.is_real() { p.clone() } else { realify(p) };
    let full = RealSdp::new(&real);

    let (x, y, iterations, status, metrics) = match presolve::reduce(&real) {
        None => {
            let (it, m, iters, status) = run(&full, opts);
            (it.x, it.y, iters, status, m)
        }
        Some(Err(())) => {
            let (x, _) = full.initial_point();
            let y = vec![0.0; full.m()];
            let (m, _, _) = evaluate(&full, &Iterate { x: x.clone(), y: y.clone(), z: x.clone() }, 0.0, 0.0);
            (x, y, 0, Status::Infeasible, m)
        }
        Some(Ok(red)) => {
            let sub = RealSdp::new(&red.problem);
            let (it, mut m, iters, status) = run(&sub, opts);
            let y = red.expand(&it.y);
            let mut x: Vec<Mat> = full.dims.iter().map(|&n| Mat::zeros(n)).collect();
            for (i, &b) in red.kept.iter().enumerate() {
                x[b] = it.x[i].clone();
            }
            m.pobj += red.offset;
            m.dobj += red.offset;
            m.gap = (m.pobj - m.dobj).abs() / (1.0 + m.pobj.abs());
            (x, y, iters, status, m)
        }
    };
    // slack recomputed from y on every original block
    let aty = full.adjoint(&y);
    let z: Vec<Mat> = full.c.iter().zip(&aty).map(|(c, a)| c.sub(a)).collect();

    let to_complex = |ms: &[Mat]| -> Vec<ComplexMatrix> {
        ms.iter()
            .map(|m| ComplexMatrix::from_fn(m.n, m.n, |r, c| C64::new(m.get(r, c), 0.0)))
            .collect()
    };
    let (x, z) = if p.is_real() {
        (to_complex(&x), to_complex(&z))
    } else {
        (
            unrealify_primal(&p.blocks, &to_complex(&x)),
            unrealify_slack(&p.blocks, &to_complex(&z)),
        )
    };
    Ok(SdpSolution {
        x,
        y,
        z,
        primal_objective: metrics.pobj,
        dual_objective: metrics.dobj,
        relative_gap: metrics.gap,
        primal_residual: metrics.pinf,
        dual_residual: metrics.dinf,
        iterations,
        status,
    })
}

fn evaluate(sdp: &RealSdp, it: &Iterate, bnorm: f64, cnorm: f64) -> (Metrics, Vec<f64>, Vec<Mat>) {
    let ax = sdp.apply(&it.x);
    let rp: Vec<f64> = sdp.b.iter().zip(&ax).map(|(b, a)| b - a).collect();
    let aty = sdp.adjoint(&it.y);
    let rd: Vec<Mat> = sdp
        .c
        .iter()
        .zip(&it.z)
        .zip(&aty)
        .map(|((c, z), a)| c.sub(z).sub(a))
        .collect();
    let pobj = dot_all(&sdp.c, &it.x);
    let dobj = sdp.b.iter().zip(&it.y).map(|(b, y)| b * y).sum::<f64>();
    let m = Metrics {
        pobj,
        dobj,
        gap: (pobj - dobj).abs() / (1.0 + pobj.abs()),
        pinf: vnorm(&rp) / (1.0 + bnorm),
        dinf: norm_all(&rd) / (1.0 + cnorm),
    };
    (m, rp, rd)
}

fn run(sdp: &RealSdp, opts: &SolverOptions) -> (Iterate, Metrics, usize, Status) {
    let (x, z) = sdp.initial_point();
    let mut it = Iterate {
        x,
        y: vec![0.0; sdp.m()],
        z,
    };
    let nt = sdp.total_dim() as f64;
    let bnorm = vnorm(&sdp.b);
    let cnorm = norm_all(&sdp.c);

    let mut best: Option<(Iterate, Metrics, usize)> = None;
    let mut since_best = 0;
    let mut diverging = 0;
    let mut last_inf = f64::INFINITY;

    for iter in 0..opts.max_iter {
        let (metrics, _rp, rd) = evaluate(sdp, &it, bnorm, cnorm);
        let converged =
            metrics.gap <= opts.tol && metrics.pinf <= opts.tol && metrics.dinf <= opts.tol;
        if converged {
            return (it, metrics, iter, Status::Optimal);
        }
        if !metrics.merit().is_finite() {
            break;
        }

        let inf = metrics.pinf.max(metrics.dinf);
        if inf > last_inf * (1.0 + 1e-12) && inf > opts.tol {
            diverging += 1;
        } else {
            diverging = 0;
        }
        last_inf = inf;
        if diverging >= DIVERGENCE_WINDOW {
            return (it, metrics, iter, Status::Infeasible);
        }

        let improved = best
            .as_ref()
            .is_none_or(|(_, m, _)| metrics.merit() < 0.9 * m.merit());
        if improved {
            best = Some((
                Iterate {
                    x: it.x.clone(),
                    y: it.y.clone(),
                    z: it.z.clone(),
                },
                metrics,
                iter,
            ));
            since_best = 0;
        } else {
            since_best += 1;
            if since_best >= STALL_WINDOW {
                break;
            }
        }

        match step(sdp, &mut it, &rd, nt) {
            Some(()) => {}
            None => break,
        }
    }

    let (it_best, m_best, iters) = match best {
        Some(b) => b,
        None => {
            let (m, _, _) = evaluate(sdp, &it, bnorm, cnorm);
            (it, m, opts.max_iter)
        }
    };
    let status = if m_best.gap <= opts.tol && m_best.pinf <= opts.tol && m_best.dinf <= opts.tol {
        Status::Optimal
    } else {
        Status::MaxIter
    };
    (it_best, m_best, iters, status)
}

/// One predictor-corrector step; `None` on numerical breakdown.
fn step(sdp: &RealSdp, it: &mut Iterate, rd: &[Mat], nt: f64) -> Option<()> {
    let lx: Vec<Mat> = it.x.iter().map(|x| x.cholesky()).collect::<Option<_>>()?;
    let lz: Vec<Mat> = it.z.iter().map(|z| z.cholesky()).collect::<Option<_>>()?;
    let w: Vec<Mat> = lz.iter().map(Mat::spd_inverse).collect();
    let mu = dot_all(&it.x, &it.z) / nt;

    let schur = sdp.schur(&it.x, &w);
    let lm = factor_regularized(&mut schur.clone())?;

    let xrdw: Vec<Mat> = it
        .x
        .iter()
        .zip(rd)
        .zip(&w)
        .map(|((x, r), w)| x.matmul(r).matmul(w))
        .collect();
    let a_xrdw = sdp.apply(&xrdw);
    let a_w = sdp.apply(&w);

    let direction = |sigma: f64, corr: Option<&[Mat]>| -> (Vec<Mat>, Vec<f64>, Vec<Mat>) {
        let corr_w: Option<Vec<Mat>> =
            corr.map(|c| c.iter().zip(&w).map(|(c, w)| c.matmul(w)).collect());
        let a_corr = corr_w.as_ref().map(|cw| sdp.apply(cw));
        let mut rhs: Vec<f64> = (0..sdp.m())
            .map(|k| {
                sdp.b[k] - sigma * mu * a_w[k]
                    + a_xrdw[k]
                    + a_corr.as_ref().map_or(0.0, |a| a[k])
            })
            .collect();
        solve_refined(&schur, &lm, &mut rhs);
        let aty = sdp.adjoint(&rhs);
        let dz: Vec<Mat> = rd.iter().zip(&aty).map(|(r, a)| r.sub(a)).collect();
        let dx: Vec<Mat> = (0..sdp.dims.len())
            .map(|b| {
                let mut t = w[b].scaled(sigma * mu);
                t.axpy(-1.0, &it.x[b]);
                t.axpy(-1.0, &it.x[b].matmul(&dz[b]).matmul(&w[b]));
                if let Some(cw) = &corr_w {
                    t.axpy(-1.0, &cw[b]);
                }
                t.symmetrized()
            })
            .collect();
        (dx, rhs, dz)
    };

    let steps = |dx: &[Mat], dz: &[Mat]| -> (f64, f64) {
        let ap = lx
            .iter()
            .zip(dx)
            .map(|(l, d)| max_step(l, d, f64::INFINITY))
            .fold(f64::INFINITY, f64::min);
        let ad = lz
            .iter()
            .zip(dz)
            .map(|(l, d)| max_step(l, d, f64::INFINITY))
            .fold(f64::INFINITY, f64::min);
        (ap, ad)
    };

    // predictor
    let (dxp, _, dzp) = direction(0.0, None);
    let (ap, ad) = steps(&dxp, &dzp);
    let (ap, ad) = (ap.min(1.0), ad.min(1.0));
    let mut trial = 0.0;
    for b in 0..sdp.dims.len() {
        let mut xb = it.x[b].clone();
        xb.axpy(ap, &dxp[b]);
        let mut zb = it.z[b].clone();
        zb.axpy(ad, &dzp[b]);
        trial += xb.dot(&zb);
    }
    let sigma = (trial / (mu * nt)).clamp(0.0, 1.0).powi(3);

    // corrector
    let corr: Vec<Mat> = dxp.iter().zip(&dzp).map(|(a, b)| a.matmul(b)).collect();
    let (dx, dy, dz) = direction(sigma, Some(&corr));
    let (ap, ad) = steps(&dx, &dz);
    let tau = 0.9 + 0.09 * ap.min(ad).min(1.0);
    let ap = (tau * ap).min(1.0);
    let ad = (tau * ad).min(1.0);
    if !(ap.is_finite() && ad.is_finite()) {
        return None;
    }
    for b in 0..sdp.dims.len() {
        it.x[b].axpy(ap, &dx[b]);
        it.z[b].axpy(ad, &dz[b]);
    }
    for (y, d) in it.y.iter_mut().zip(&dy) {
        *y += ad * d;
    }
    Some(())
}

/// Solves `M x = b` with the (possibly shifted) factor `L` and two rounds
/// of iterative refinement against the unshifted `M`.
fn solve_refined(m: &Mat, l: &Mat, b: &mut [f64]) {
    let rhs = b.to_vec();
    cholesky_solve(l, b);
    for _ in 0..2 {
        let mut r: Vec<f64> = (0..m.n)
            .map(|i| rhs[i] - m.row(i).iter().zip(b.iter()).map(|(a, x)| a * x).sum::<f64>())
            .collect();
        cholesky_solve(l, &mut r);
        b.iter_mut().zip(&r).for_each(|(x, d)| *x += d);
    }
}

/// Cholesky of the Schur complement, shifting the diagonal on failure.
fn factor_regularized(m: &mut Mat) -> Option<Mat> {
    if let Some(l) = m.cholesky() {
        return Some(l);
    }
    let scale = (0..m.n).map(|i| m.get(i, i).abs()).fold(0.0, f64::max).max(1e-300);
    let mut shift = 1e-14 * scale;
    for _ in 0..12 {
        for i in 0..m.n {
            m.add_at(i, i, shift);
        }
        if let Some(l) = m.cholesky() {
            return Some(l);
        }
        shift *= 10.0;
    }
    None
}
