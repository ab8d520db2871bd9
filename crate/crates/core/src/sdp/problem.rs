use std::collections::BTreeMap;

use crate::error::{invalid, Result};
use crate::linalg::{ComplexMatrix, C64, HERMITIAN_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockKind {
    Real,
    Hermitian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Block {
    pub dim: usize,
    pub kind: BlockKind,
}

/// Upper-triangle entry `(row ≤ col)` of a symmetric/hermitian block
/// matrix; the mirrored entry is implied.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Entry {
    pub block: usize,
    pub row: usize,
    pub col: usize,
    pub value: C64,
}

/// Sparse symmetric (real blocks) or hermitian (complex blocks) block
/// matrix stored by its upper triangle.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SparseSym {
    pub entries: Vec<Entry>,
}

impl SparseSym {
    /// Accumulates entries, folding lower-triangle input onto the upper
    /// triangle and dropping zeros.
    pub fn from_entries(entries: impl IntoIterator<Item = Entry>) -> Self {
        let mut acc: BTreeMap<(usize, usize, usize), C64> = BTreeMap::new();
        for e in entries {
            let (r, c, v) = if e.row <= e.col {
                (e.row, e.col, e.value)
            } else {
                (e.col, e.row, e.value.conj())
            };
            *acc.entry((e.block, r, c)).or_default() += v;
        }
        Self {
            entries: acc
                .into_iter()
                .filter(|(_, v)| v.norm() > 0.0)
                .map(|((block, row, col), value)| Entry {
                    block,
                    row,
                    col,
                    value,
                })
                .collect(),
        }
    }

    /// Dense hermitian matrix of one block.
    pub fn block_dense(&self, block: usize, dim: usize) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(dim, dim);
        for e in self.entries.iter().filter(|e| e.block == block) {
            m[(e.row, e.col)] += e.value;
            if e.row != e.col {
                m[(e.col, e.row)] += e.value.conj();
            }
        }
        m
    }

    /// `Σ_blocks Re tr(S X_b)`.
    pub fn inner(&self, x: &[ComplexMatrix]) -> f64 {
        self.entries
            .iter()
            .map(|e| {
                let xv = x[e.block][(e.col, e.row)];
                if e.row == e.col {
                    (e.value * xv).re
                } else {
                    2.0 * (e.value * xv).re
                }
            })
            .sum()
    }
}

/// Primal-dual pair in standard form:
///
/// ```text
/// (P)  min ⟨C, X⟩   s.t. ⟨A_k, X⟩ = b_k,  X ⪰ 0
/// (D)  max bᵀy      s.t. Z = C − Σ_k y_k A_k ⪰ 0
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct SdpProblem {
    pub blocks: Vec<Block>,
    pub c: SparseSym,
    pub a: Vec<SparseSym>,
    pub b: Vec<f64>,
}

impl SdpProblem {
    pub fn validate(&self) -> Result<()> {
        if self.blocks.is_empty() {
            return Err(invalid("SDP needs at least one block"));
        }
        if self.a.len() != self.b.len() {
            return Err(invalid(format!(
                "{} constraint matrices but {} right-hand sides",
                self.a.len(),
                self.b.len()
            )));
        }
        if self.b.iter().any(|v| !v.is_finite()) {
            return Err(invalid("non-finite right-hand side"));
        }
        for s in std::iter::once(&self.c).chain(&self.a) {
            for e in &s.entries {
                let Some(block) = self.blocks.get(e.block) else {
                    return Err(invalid(format!("entry refers to missing block {}", e.block)));
                };
                if e.row > e.col || e.col >= block.dim {
                    return Err(invalid(format!(
                        "entry ({}, {}) outside upper triangle of a {}x{} block",
                        e.row, e.col, block.dim, block.dim
                    )));
                }
                let must_be_real = block.kind == BlockKind::Real || e.row == e.col;
                if must_be_real && e.value.im.abs() > HERMITIAN_TOL {
                    return Err(invalid("imaginary entry in a real position"));
                }
                if !e.value.re.is_finite() || !e.value.im.is_finite() {
                    return Err(invalid("non-finite matrix entry"));
                }
            }
        }
        Ok(())
    }

    pub fn is_real(&self) -> bool {
        self.blocks.iter().all(|b| b.kind == BlockKind::Real)
    }

    /// Number of primal rows after realification.
    pub fn real_dim(&self) -> usize {
        self.blocks
            .iter()
            .map(|b| match b.kind {
                BlockKind::Real => b.dim,
                BlockKind::Hermitian => 2 * b.dim,
            })
            .sum()
    }
}

/// Replaces every hermitian block `H` by `[[Re H, −Im H], [Im H, Re H]]`.
///
/// The map preserves `⟨A, X⟩` once solutions are mapped back with
/// [`unrealify_primal`], and leaves `y` untouched.
pub fn realify(p: &SdpProblem) -> SdpProblem {
    let blocks = p
        .blocks
        .iter()
        .map(|b| Block {
            dim: match b.kind {
                BlockKind::Real => b.dim,
                BlockKind::Hermitian => 2 * b.dim,
            },
            kind: BlockKind::Real,
        })
        .collect();
    let map = |s: &SparseSym| {
        let mut out = Vec::with_capacity(4 * s.entries.len());
        for e in &s.entries {
            let b = p.blocks[e.block];
            let re = C64::new(e.value.re, 0.0);
            if b.kind == BlockKind::Real {
                out.push(Entry { value: re, ..*e });
                continue;
            }
            let n = b.dim;
            let (r, c, im) = (e.row, e.col, e.value.im);
            out.push(Entry { value: re, ..*e });
            out.push(Entry {
                row: r + n,
                col: c + n,
                value: re,
                ..*e
            });
            if im != 0.0 {
                // upper-right holds −Im H; its (r, c) and (c, r) entries
                out.push(Entry {
                    row: r,
                    col: n + c,
                    value: C64::new(-im, 0.0),
                    ..*e
                });
                if r != c {
                    out.push(Entry {
                        row: c,
                        col: n + r,
                        value: C64::new(im, 0.0),
                        ..*e
                    });
                }
            }
        }
        SparseSym::from_entries(out)
    };
    SdpProblem {
        blocks,
        c: map(&p.c),
        a: p.a.iter().map(map).collect(),
        b: p.b.clone(),
    }
}

/// Maps a realified primal block back: `X = (X₁₁ + X₂₂) + i(X₂₁ − X₁₂)`.
pub fn unrealify_primal(blocks: &[Block], x: &[ComplexMatrix]) -> Vec<ComplexMatrix> {
    unrealify(blocks, x, 1.0)
}

/// Maps a realified slack block back: `Z = ½[(Z₁₁ + Z₂₂) + i(Z₂₁ − Z₁₂)]`.
pub fn unrealify_slack(blocks: &[Block], z: &[ComplexMatrix]) -> Vec<ComplexMatrix> {
    unrealify(blocks, z, 0.5)
}

fn unrealify(blocks: &[Block], m: &[ComplexMatrix], scale: f64) -> Vec<ComplexMatrix> {
    blocks
        .iter()
        .zip(m)
        .map(|(b, x)| match b.kind {
            BlockKind::Real => x.clone(),
            BlockKind::Hermitian => {
                let n = b.dim;
                ComplexMatrix::from_fn(n, n, |r, c| {
                    let re = x[(r, c)].re + x[(r + n, c + n)].re;
                    let im = x[(r + n, c)].re - x[(r, c + n)].re;
                    C64::new(re, im) * scale
                })
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Optimal,
    MaxIter,
    Infeasible,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Optimal => "optimal",
            Status::MaxIter => "max-iter",
            Status::Infeasible => "infeasible",
        }
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone)]
pub struct SdpSolution {
    pub x: Vec<ComplexMatrix>,
    pub y: Vec<f64>,
    pub z: Vec<ComplexMatrix>,
    pub primal_objective: f64,
    pub dual_objective: f64,
    pub relative_gap: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub iterations: usize,
    pub status: Status,
}

impl SdpSolution {
    /// Turns a non-optimal outcome into [`crate::Error::Solver`].
    pub fn require_optimal(self) -> Result<Self> {
        match self.status {
            Status::Optimal => Ok(self),
            s => Err(crate::Error::Solver {
                status: s.to_string(),
                gap: self.relative_gap,
                iterations: self.iterations,
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn herm_problem() -> SdpProblem {
        // min ⟨C, X⟩ s.t. tr X = 1 over 2x2 hermitian X
        let c = SparseSym::from_entries([
            Entry { block: 0, row: 0, col: 0, value: C64::new(1.0, 0.0) },
            Entry { block: 0, row: 0, col: 1, value: C64::new(0.3, -0.4) },
            Entry { block: 0, row: 1, col: 1, value: C64::new(-1.0, 0.0) },
        ]);
        let a = SparseSym::from_entries((0..2).map(|i| Entry {
            block: 0,
            row: i,
            col: i,
            value: C64::new(1.0, 0.0),
        }));
        SdpProblem {
            blocks: vec![Block { dim: 2, kind: BlockKind::Hermitian }],
            c,
            a: vec![a],
            b: vec![1.0],
        }
    }

    #[test]
    fn realify_preserves_inner_products() {
        let p = herm_problem();
        p.validate().unwrap();
        let r = realify(&p);
        r.validate().unwrap();
        let x = ComplexMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => C64::new(0.6, 0.0),
            (1, 1) => C64::new(0.4, 0.0),
            (0, 1) => C64::new(0.1, 0.2),
            _ => C64::new(0.1, -0.2),
        });
        let cx = p.c.inner(std::slice::from_ref(&x));
        // embed X as ½[[Re X, −Im X], [Im X, Re X]] so the map back returns X
        let xr = ComplexMatrix::from_fn(4, 4, |i, j| {
            let (bi, bj) = (i / 2, j / 2);
            let v = x[(i % 2, j % 2)];
            let e = match (bi, bj) {
                (0, 0) | (1, 1) => v.re,
                (0, 1) => -v.im,
                _ => v.im,
            };
            C64::new(0.5 * e, 0.0)
        });
        assert!((r.c.inner(std::slice::from_ref(&xr)) - cx).abs() < 1e-15);
        let back = unrealify_primal(&p.blocks, std::slice::from_ref(&xr));
        assert!((&back[0] - &x).max_abs() < 1e-15);
    }

    #[test]
    fn validation_rejects_lower_entries() {
        let mut p = herm_problem();
        p.c.entries.push(Entry { block: 0, row: 1, col: 0, value: C64::new(1.0, 0.0) });
        assert!(p.validate().is_err());
        let mut p = herm_problem();
        p.b.push(2.0);
        assert!(p.validate().is_err());
    }
}
