//! Linear matrix inequalities over scalar and hermitian-matrix variables,
//! lowered to the standard form of [`SdpProblem`].
//!
//! A program reads `min cᵀy  s.t.  K_b + Σ_k y_k F_{b,k} ⪰ 0` for every
//! block `b`, where `y` collects the real parameters of all variables. It
//! is the dual side of the standard pair with `C = K`, `A_k = −F_k` and
//! `b = −c`, so its optimum is minus the dual objective.

use crate::error::{invalid, Result};
use crate::linalg::{ComplexMatrix, C64, ZERO};

use super::problem::{Block, BlockKind, Entry, SdpProblem, SparseSym};
use super::solver::{sdp_solve, SolverOptions};
use super::SdpSolution;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Var(usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockId(usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum VarKind {
    Scalar,
    Hermitian(usize),
}

/// How a variable enters a block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Placement {
    /// Scalar times the identity of the block.
    Identity,
    /// Matrix placed on the diagonal at the given offset.
    Diagonal(usize),
    /// `H ↦ [[0, H], [H*, 0]]` with blocks of the given size.
    OffDiagonal(usize),
    /// `tr₁` over the first factor of `C^{d_out} ⊗ C^{d_in}`.
    TraceFirst { d_out: usize, d_in: usize },
    /// The underlying parameter matrix `K` of a framed variable on the
    /// diagonal; same as `Diagonal` for plain variables.
    Intrinsic(usize),
}

#[derive(Debug, Clone)]
struct VarInfo {
    kind: VarKind,
    offset: usize,
    /// `W` of a framed variable `H = W K W*`.
    frame: Option<ComplexMatrix>,
}

impl VarInfo {
    /// Size of the matrix seen by placements other than `Intrinsic`.
    fn outer_dim(&self) -> usize {
        match (&self.frame, self.kind) {
            (Some(w), _) => w.rows(),
            (None, VarKind::Hermitian(n)) => n,
            (None, VarKind::Scalar) => 1,
        }
    }
}

#[derive(Debug, Clone)]
struct LmiBlock {
    dim: usize,
    constant: ComplexMatrix,
    terms: Vec<(f64, Var, Placement)>,
}

#[derive(Debug, Clone, Default)]
pub struct LmiProgram {
    vars: Vec<VarInfo>,
    params: usize,
    blocks: Vec<LmiBlock>,
    objective: Vec<f64>,
}

impl LmiProgram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn scalar(&mut self) -> Var {
        self.push_var(VarKind::Scalar, 1)
    }

    /// `n x n` hermitian variable with `n²` real parameters.
    pub fn hermitian(&mut self, n: usize) -> Var {
        self.push_var(VarKind::Hermitian(n), n * n)
    }

    /// Hermitian variable `H = W K W*` confined to the range of `W`, with
    /// `K` of size `W.cols()`.
    pub fn hermitian_framed(&mut self, w: &ComplexMatrix) -> Var {
        let r = w.cols();
        let v = self.push_var(VarKind::Hermitian(r), r * r);
        self.vars[v.0].frame = Some(w.clone());
        v
    }

    fn push_var(&mut self, kind: VarKind, count: usize) -> Var {
        self.vars.push(VarInfo {
            kind,
            offset: self.params,
            frame: None,
        });
        self.params += count;
        self.objective.resize(self.params, 0.0);
        Var(self.vars.len() - 1)
    }

    pub fn block(&mut self, dim: usize) -> BlockId {
        self.blocks.push(LmiBlock {
            dim,
            constant: ComplexMatrix::zeros(dim, dim),
            terms: Vec::new(),
        });
        BlockId(self.blocks.len() - 1)
    }

    pub fn add_constant(&mut self, block: BlockId, m: &ComplexMatrix) {
        let b = &mut self.blocks[block.0];
        assert_eq!(m.rows(), b.dim, "constant does not fit its block");
        b.constant += m;
    }

    pub fn add_term(&mut self, block: BlockId, coef: f64, var: Var, placement: Placement) {
        self.blocks[block.0].terms.push((coef, var, placement));
    }

    /// Adds `coef · s` to the objective of a scalar variable.
    pub fn minimize_scalar(&mut self, var: Var, coef: f64) {
        let v = &self.vars[var.0];
        assert_eq!(v.kind, VarKind::Scalar, "not a scalar variable");
        self.objective[v.offset] += coef;
    }

    /// Adds `coef · tr H` to the objective.
    pub fn minimize_trace(&mut self, var: Var, coef: f64) {
        let v = &self.vars[var.0];
        assert!(matches!(v.kind, VarKind::Hermitian(_)), "not a matrix variable");
        let basis = Self::basis(v);
        for (k, b) in basis.iter().enumerate() {
            let t: f64 = b.iter().filter(|e| e.0 == e.1).map(|e| e.2.re).sum();
            self.objective[v.offset + k] += coef * t;
        }
    }

    pub fn num_params(&self) -> usize {
        self.params
    }

    /// Matrix size of each variable, `1` for scalars.
    pub fn variable_dims(&self) -> Vec<usize> {
        self.vars.iter().map(VarInfo::outer_dim).collect()
    }

    pub fn block_dims(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.dim).collect()
    }

    /// Basis matrices of a variable as full entry lists, mapped through the
    /// frame if there is one.
    fn basis(v: &VarInfo) -> Vec<Vec<(usize, usize, C64)>> {
        let raw = Self::raw_basis(v.kind);
        let Some(w) = &v.frame else {
            return raw;
        };
        let n = w.rows();
        raw.iter()
            .map(|b| {
                let mut k = ComplexMatrix::zeros(w.cols(), w.cols());
                for &(r, c, x) in b {
                    k[(r, c)] += x;
                }
                let h = &(w * &k) * &w.adjoint();
                let mut out = Vec::new();
                for r in 0..n {
                    for c in 0..n {
                        if h[(r, c)].norm() > 1e-15 {
                            out.push((r, c, h[(r, c)]));
                        }
                    }
                }
                out
            })
            .collect()
    }

    fn raw_basis(kind: VarKind) -> Vec<Vec<(usize, usize, C64)>> {
        match kind {
            VarKind::Scalar => vec![vec![(0, 0, C64::new(1.0, 0.0))]],
            VarKind::Hermitian(n) => {
                let mut out: Vec<Vec<(usize, usize, C64)>> =
                    (0..n).map(|p| vec![(p, p, C64::new(1.0, 0.0))]).collect();
                for p in 0..n {
                    for q in (p + 1)..n {
                        out.push(vec![(p, q, C64::new(1.0, 0.0)), (q, p, C64::new(1.0, 0.0))]);
                        out.push(vec![(p, q, C64::new(0.0, 1.0)), (q, p, C64::new(0.0, -1.0))]);
                    }
                }
                out
            }
        }
    }

    fn place(
        dim: usize,
        placement: Placement,
        entries: &[(usize, usize, C64)],
    ) -> Vec<(usize, usize, C64)> {
        match placement {
            Placement::Identity => (0..dim).map(|i| (i, i, entries[0].2)).collect(),
            Placement::Diagonal(o) | Placement::Intrinsic(o) => entries.iter().map(|&(r, c, v)| (r + o, c + o, v)).collect(),
            Placement::OffDiagonal(h) => entries
                .iter()
                .flat_map(|&(r, c, v)| [(r, h + c, v), (h + c, r, v.conj())])
                .collect(),
            Placement::TraceFirst { d_out, d_in } => entries
                .iter()
                .filter(|&&(r, c, _)| r / d_in == c / d_in && r / d_in < d_out)
                .map(|&(r, c, v)| (r % d_in, c % d_in, v))
                .collect(),
        }
    }

    /// Standard-form problem; blocks whose data are all real are declared
    /// real.
    pub fn to_problem(&self) -> Result<SdpProblem> {
        for (bi, b) in self.blocks.iter().enumerate() {
            if !b.constant.is_hermitian() {
                return Err(invalid(format!("constant of block {bi} is not hermitian")));
            }
            for &(_, var, placement) in &b.terms {
                let info = &self.vars[var.0];
                let n = info.outer_dim();
                let ok = match (info.kind, placement) {
                    (VarKind::Scalar, Placement::Identity) => true,
                    (VarKind::Hermitian(r), Placement::Intrinsic(o)) => o + r <= b.dim,
                    (VarKind::Hermitian(_), Placement::Diagonal(o)) => o + n <= b.dim,
                    (VarKind::Hermitian(_), Placement::OffDiagonal(h)) => n == h && 2 * h == b.dim,
                    (VarKind::Hermitian(_), Placement::TraceFirst { d_out, d_in }) => {
                        n == d_out * d_in && d_in == b.dim
                    }
                    _ => false,
                };
                if !ok {
                    return Err(invalid(format!("term does not fit block {bi}")));
                }
            }
        }

        let mut a: Vec<Vec<Entry>> = vec![Vec::new(); self.params];
        for (bi, b) in self.blocks.iter().enumerate() {
            for &(coef, var, placement) in &b.terms {
                let info = &self.vars[var.0];
                let off = info.offset;
                let basis = match placement {
                    Placement::Intrinsic(_) => Self::raw_basis(info.kind),
                    _ => Self::basis(info),
                };
                for (k, basis) in basis.iter().enumerate() {
                    for (r, c, v) in Self::place(b.dim, placement, basis) {
                        if r <= c {
                            a[off + k].push(Entry {
                                block: bi,
                                row: r,
                                col: c,
                                value: -v * coef,
                            });
                        }
                    }
                }
            }
        }
        let a: Vec<SparseSym> = a.into_iter().map(SparseSym::from_entries).collect();
        let c = SparseSym::from_entries(self.blocks.iter().enumerate().flat_map(|(bi, b)| {
            let n = b.dim;
            (0..n).flat_map(move |r| {
                (r..n).filter_map(move |col| {
                    let v = b.constant[(r, col)];
                    (v != ZERO).then_some(Entry {
                        block: bi,
                        row: r,
                        col,
                        value: v,
                    })
                })
            })
        }));

        let mut complex = vec![false; self.blocks.len()];
        for e in c.entries.iter().chain(a.iter().flat_map(|s| &s.entries)) {
            if e.value.im != 0.0 {
                complex[e.block] = true;
            }
        }
        let blocks = self
            .blocks
            .iter()
            .zip(&complex)
            .map(|(b, &cx)| Block {
                dim: b.dim,
                kind: if cx { BlockKind::Hermitian } else { BlockKind::Real },
            })
            .collect();
        Ok(SdpProblem {
            blocks,
            c,
            a,
            b: self.objective.iter().map(|v| -v).collect(),
        })
    }

    pub fn solve(&self, opts: &SolverOptions) -> Result<LmiSolution> {
        let problem = self.to_problem()?;
        let solution = sdp_solve(&problem, opts)?;
        let value = self
            .objective
            .iter()
            .zip(&solution.y)
            .map(|(c, y)| c * y)
            .sum();
        Ok(LmiSolution {
            value,
            vars: self.vars.clone(),
            solution,
        })
    }
}

#[derive(Debug, Clone)]
pub struct LmiSolution {
    /// `cᵀy` at the returned point.
    pub value: f64,
    vars: Vec<VarInfo>,
    pub solution: SdpSolution,
}

impl LmiSolution {
    pub fn scalar(&self, var: Var) -> f64 {
        let v = &self.vars[var.0];
        assert_eq!(v.kind, VarKind::Scalar);
        self.solution.y[v.offset]
    }

    /// Value of a matrix variable, `W K W*` for framed ones.
    pub fn matrix(&self, var: Var) -> ComplexMatrix {
        let v = &self.vars[var.0];
        let k = self.intrinsic(var);
        match &v.frame {
            Some(w) => &(w * &k) * &w.adjoint(),
            None => k,
        }
    }

    /// The parameter matrix `K` of a variable.
    pub fn intrinsic(&self, var: Var) -> ComplexMatrix {
        let VarInfo { kind, offset: off, .. } = self.vars[var.0].clone();
        let VarKind::Hermitian(n) = kind else {
            panic!("not a matrix variable");
        };
        let y = &self.solution.y[off..off + n * n];
        let mut m = ComplexMatrix::zeros(n, n);
        let mut k = n;
        for p in 0..n {
            m[(p, p)] = C64::new(y[p], 0.0);
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let z = C64::new(y[k], y[k + 1]);
                m[(p, q)] = z;
                m[(q, p)] = z.conj();
                k += 2;
            }
        }
        m
    }
}
