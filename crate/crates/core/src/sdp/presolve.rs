//! Collapses pairs of opposite blocks into linear equalities on `y`.
//!
//! Two blocks with `C_b' = −C_b` and `A_{k,b'} = −A_{k,b}` for all `k` force
//! `C_b − Σ y_k A_{k,b} = 0`. Such a pair leaves the dual without interior
//! points, which costs interior-point methods half their digits. The
//! equalities are solved by Gauss–Jordan elimination, `y = y₀ + N w`, and
//! the reduced problem in `w` drops both blocks.

use std::collections::BTreeMap;

use crate::linalg::C64;

use super::problem::{Entry, SdpProblem, SparseSym};

const PAIR_TOL: f64 = 1e-13;
const RANK_TOL: f64 = 1e-10;

pub(crate) struct Reduction {
    pub problem: SdpProblem,
    /// Blocks of the original problem kept in the reduced one.
    pub kept: Vec<usize>,
    y0: Vec<f64>,
    /// `y = y₀ + Σ_j w_j n_j` with sparse columns `n_j`.
    columns: Vec<Vec<(usize, f64)>>,
    /// `bᵀy₀`, the objective offset of the reduced problem.
    pub offset: f64,
}

impl Reduction {
    pub fn expand(&self, w: &[f64]) -> Vec<f64> {
        let mut y = self.y0.clone();
        for (col, &wj) in self.columns.iter().zip(w) {
            for &(k, v) in col {
                y[k] += v * wj;
            }
        }
        y
    }
}

/// Per-block data of a real problem: constant and constraint entries.
fn block_data(p: &SdpProblem) -> Vec<Vec<(usize, usize, usize, f64)>> {
    // (k + 1, row, col, value) with k = 0 reserved for C
    let mut out = vec![Vec::new(); p.blocks.len()];
    for e in &p.c.entries {
        out[e.block].push((0, e.row, e.col, e.value.re));
    }
    for (k, a) in p.a.iter().enumerate() {
        for e in &a.entries {
            out[e.block].push((k + 1, e.row, e.col, e.value.re));
        }
    }
    for v in &mut out {
        v.sort_by_key(|a| (a.0, a.1, a.2));
    }
    out
}

fn opposite(a: &[(usize, usize, usize, f64)], b: &[(usize, usize, usize, f64)]) -> bool {
    a.len() == b.len()
        && !a.is_empty()
        && a.iter().zip(b).all(|(x, y)| {
            (x.0, x.1, x.2) == (y.0, y.1, y.2)
                && (x.3 + y.3).abs() <= PAIR_TOL * (1.0 + x.3.abs())
        })
}

/// Returns `None` when the problem has no opposite pairs, and `Err(())`
/// when the collapsed equalities are inconsistent.
pub(crate) fn reduce(p: &SdpProblem) -> Option<Result<Reduction, ()>> {
    debug_assert!(p.is_real());
    let data = block_data(p);
    let nb = p.blocks.len();
    let mut partner = vec![None; nb];
    for i in 0..nb {
        if partner[i].is_some() {
            continue;
        }
        for j in (i + 1)..nb {
            if partner[j].is_none()
                && p.blocks[i].dim == p.blocks[j].dim
                && opposite(&data[i], &data[j])
            {
                partner[i] = Some(j);
                partner[j] = Some(i);
                break;
            }
        }
    }
    if partner.iter().all(Option::is_none) {
        return None;
    }

    // rows Σ_k A_k[r,c] y_k = C[r,c] for the first block of each pair
    let m = p.b.len();
    let mut rows: BTreeMap<(usize, usize, usize), (Vec<f64>, f64)> = BTreeMap::new();
    for (bi, part) in partner.iter().enumerate() {
        if !matches!(part, Some(j) if *j > bi) {
            continue;
        }
        for &(k, r, c, v) in &data[bi] {
            let row = rows
                .entry((bi, r, c))
                .or_insert_with(|| (vec![0.0; m], 0.0));
            if k == 0 {
                row.1 += v;
            } else {
                row.0[k - 1] += v;
            }
        }
    }
    let (mut g, mut h): (Vec<Vec<f64>>, Vec<f64>) = rows.into_values().unzip();

    // Gauss–Jordan with partial pivoting
    let scale = g
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0f64, |a, v| a.max(v.abs()))
        .max(1.0);
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut row = 0;
    for col in 0..m {
        if row == g.len() {
            break;
        }
        let (best, val) = (row..g.len())
            .map(|r| (r, g[r][col].abs()))
            .fold((row, 0.0), |a, b| if b.1 > a.1 { b } else { a });
        if val <= RANK_TOL * scale {
            continue;
        }
        g.swap(row, best);
        h.swap(row, best);
        let pv = g[row][col];
        g[row].iter_mut().for_each(|v| *v /= pv);
        h[row] /= pv;
        let (pivot_row, pivot_h) = (g[row].clone(), h[row]);
        for r in 0..g.len() {
            if r != row {
                let f = g[r][col];
                if f != 0.0 {
                    g[r].iter_mut().zip(&pivot_row).for_each(|(a, b)| *a -= f * b);
                    h[r] -= f * pivot_h;
                }
            }
        }
        pivots.push((row, col));
        row += 1;
    }
    let hscale = h.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(1.0);
    if h[row..].iter().any(|v| v.abs() > 1e-9 * hscale) {
        return Some(Err(()));
    }

    let mut is_pivot = vec![false; m];
    let mut y0 = vec![0.0; m];
    for &(r, c) in &pivots {
        is_pivot[c] = true;
        y0[c] = h[r];
    }
    let free: Vec<usize> = (0..m).filter(|&k| !is_pivot[k]).collect();
    let columns: Vec<Vec<(usize, f64)>> = free
        .iter()
        .map(|&f| {
            let mut col = vec![(f, 1.0)];
            for &(r, c) in &pivots {
                let v = g[r][f];
                if v != 0.0 {
                    col.push((c, -v));
                }
            }
            col
        })
        .collect();

    let kept_blocks: Vec<bool> = partner.iter().map(Option::is_none).collect();
    // free directions invisible to the kept blocks are fixed at zero, unless
    // they move the objective, in which case the dual is unbounded
    let mut columns = columns;
    let mut bad = false;
    columns.retain(|col| {
        let touches = col
            .iter()
            .any(|&(k, _)| p.a[k].entries.iter().any(|e| kept_blocks[e.block]));
        if !touches && col.iter().map(|&(k, v)| v * p.b[k]).sum::<f64>().abs() > 1e-12 {
            bad = true;
        }
        touches
    });
    if bad {
        return Some(Err(()));
    }

    let kept: Vec<usize> = (0..nb).filter(|&b| partner[b].is_none()).collect();
    let mut new_index = vec![usize::MAX; nb];
    for (i, &b) in kept.iter().enumerate() {
        new_index[b] = i;
    }
    let remap = |entries: &mut dyn Iterator<Item = (usize, usize, usize, f64)>| {
        SparseSym::from_entries(entries.filter(|e| new_index[e.0] != usize::MAX).map(
            |(b, r, c, v)| Entry {
                block: new_index[b],
                row: r,
                col: c,
                value: C64::new(v, 0.0),
            },
        ))
    };

    // C' = C − Σ y0_k A_k
    let mut c_entries: Vec<(usize, usize, usize, f64)> =
        p.c.entries.iter().map(|e| (e.block, e.row, e.col, e.value.re)).collect();
    for (k, &yk) in y0.iter().enumerate() {
        if yk != 0.0 {
            c_entries.extend(
                p.a[k]
                    .entries
                    .iter()
                    .map(|e| (e.block, e.row, e.col, -yk * e.value.re)),
            );
        }
    }
    let c = remap(&mut c_entries.into_iter());
    let a: Vec<SparseSym> = columns
        .iter()
        .map(|col| {
            let mut it = col.iter().flat_map(|&(k, v)| {
                p.a[k]
                    .entries
                    .iter()
                    .map(move |e| (e.block, e.row, e.col, v * e.value.re))
            });
            remap(&mut it)
        })
        .collect();
    let b: Vec<f64> = columns
        .iter()
        .map(|col| col.iter().map(|&(k, v)| v * p.b[k]).sum())
        .collect();
    let offset = p.b.iter().zip(&y0).map(|(b, y)| b * y).sum();
    let blocks = kept.iter().map(|&b| p.blocks[b]).collect();
    Some(Ok(Reduction {
        problem: SdpProblem { blocks, c, a, b },
        kept,
        y0,
        columns,
        offset,
    }))
}
