//! Row-major real square matrices for the interior-point iterations.

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Mat {
    pub n: usize,
    pub data: Vec<f64>,
}

impl Mat {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn scaled_identity(n: usize, s: f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = s;
        }
        m
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.n + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.n + c] = v;
    }

    #[inline]
    pub fn add_at(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.n + c] += v;
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.n..(r + 1) * self.n]
    }

    /// Frobenius inner product.
    pub fn dot(&self, other: &Mat) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn axpy(&mut self, a: f64, x: &Mat) {
        self.data
            .iter_mut()
            .zip(&x.data)
            .for_each(|(s, v)| *s += a * v);
    }

    pub fn scaled(&self, a: f64) -> Mat {
        Mat {
            n: self.n,
            data: self.data.iter().map(|v| a * v).collect(),
        }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        Mat {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn transpose(&self) -> Mat {
        let n = self.n;
        let mut t = Mat::zeros(n);
        for r in 0..n {
            for c in 0..n {
                t.data[c * n + r] = self.data[r * n + c];
            }
        }
        t
    }

    /// `(M + Mᵀ)/2`.
    pub fn symmetrized(&self) -> Mat {
        let n = self.n;
        let mut s = Mat::zeros(n);
        for r in 0..n {
            for c in 0..n {
                s.data[r * n + c] = 0.5 * (self.data[r * n + c] + self.data[c * n + r]);
            }
        }
        s
    }

    pub fn matmul(&self, other: &Mat) -> Mat {
        let n = self.n;
        let mut out = Mat::zeros(n);
        for r in 0..n {
            let orow = &mut out.data[r * n..(r + 1) * n];
            for k in 0..n {
                let a = self.data[r * n + k];
                if a == 0.0 {
                    continue;
                }
                let brow = &other.data[k * n..(k + 1) * n];
                for (o, b) in orow.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        out
    }

    /// Lower Cholesky factor, or `None` if the matrix is not positive
    /// definite.
    pub fn cholesky(&self) -> Option<Mat> {
        let n = self.n;
        let mut l = Mat::zeros(n);
        for j in 0..n {
            let (head, tail) = l.data.split_at_mut(j * n);
            let lj = &mut tail[..n];
            // row j of L is built from the rows above it
            for k in 0..j {
                let lk = &head[k * n..k * n + k];
                let s: f64 = lk.iter().zip(&lj[..k]).map(|(a, b)| a * b).sum();
                lj[k] = (self.data[j * n + k] - s) / head[k * n + k];
            }
            let s: f64 = lj[..j].iter().map(|a| a * a).sum();
            let d = self.data[j * n + j] - s;
            if !d.is_finite() || d <= 0.0 {
                return None;
            }
            lj[j] = d.sqrt();
        }
        Some(l)
    }

    /// Inverse of a lower triangular matrix.
    pub fn lower_inverse(&self) -> Mat {
        let n = self.n;
        let mut inv = Mat::zeros(n);
        for i in 0..n {
            inv.data[i * n + i] = 1.0 / self.data[i * n + i];
            for j in (0..i).rev() {
                let mut s = 0.0;
                for k in j..i {
                    s += self.data[i * n + k] * inv.data[k * n + j];
                }
                inv.data[i * n + j] = -s / self.data[i * n + i];
            }
        }
        inv
    }

    /// Inverse of a positive definite matrix from its Cholesky factor.
    pub fn spd_inverse(l: &Mat) -> Mat {
        let li = l.lower_inverse();
        // (L Lᵀ)⁻¹ = L⁻ᵀ L⁻¹
        let n = l.n;
        let mut out = Mat::zeros(n);
        for r in 0..n {
            for c in r..n {
                let mut s = 0.0;
                for k in c..n {
                    s += li.data[k * n + r] * li.data[k * n + c];
                }
                out.data[r * n + c] = s;
                out.data[c * n + r] = s;
            }
        }
        out
    }

    /// Eigenvalues of a symmetric matrix by cyclic Jacobi, ascending.
    pub fn sym_eigenvalues(&self) -> Vec<f64> {
        let n = self.n;
        let mut a = self.symmetrized();
        let total = a.norm().max(f64::MIN_POSITIVE);
        for _ in 0..60 {
            let mut off = 0.0;
            for p in 0..n {
                for q in (p + 1)..n {
                    off += a.get(p, q) * a.get(p, q);
                }
            }
            if off.sqrt() <= 1e-15 * total {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a.get(p, q);
                    if apq == 0.0 {
                        continue;
                    }
                    let app = a.get(p, p);
                    let aqq = a.get(q, q);
                    let tau = (aqq - app) / (2.0 * apq);
                    let t = if tau >= 0.0 {
                        1.0 / (tau + (1.0 + tau * tau).sqrt())
                    } else {
                        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let akp = a.get(k, p);
                        let akq = a.get(k, q);
                        a.set(k, p, c * akp - s * akq);
                        a.set(k, q, s * akp + c * akq);
                    }
                    for k in 0..n {
                        let apk = a.get(p, k);
                        let aqk = a.get(q, k);
                        a.set(p, k, c * apk - s * aqk);
                        a.set(q, k, s * apk + c * aqk);
                    }
                    a.set(p, q, 0.0);
                    a.set(q, p, 0.0);
                }
            }
        }
        let mut ev: Vec<f64> = (0..n).map(|i| a.get(i, i)).collect();
        ev.sort_by(f64::total_cmp);
        ev
    }
}

/// Solves `L Lᵀ x = b` in place.
pub(crate) fn cholesky_solve(l: &Mat, b: &mut [f64]) {
    let n = l.n;
    for i in 0..n {
        let s: f64 = l.row(i)[..i].iter().zip(&b[..i]).map(|(a, x)| a * x).sum();
        b[i] = (b[i] - s) / l.get(i, i);
    }
    for i in (0..n).rev() {
        let s: f64 = ((i + 1)..n).map(|k| l.get(k, i) * b[k]).sum();
        b[i] = (b[i] - s) / l.get(i, i);
    }
}

/// Largest step `α ≤ cap` keeping `X + α dX` positive semidefinite, given
/// the Cholesky factor of `X`.
pub(crate) fn max_step(l: &Mat, dx: &Mat, cap: f64) -> f64 {
    let li = l.lower_inverse();
    let m = li.matmul(dx).matmul(&li.transpose());
    let lo = m.sym_eigenvalues()[0];
    if lo >= 0.0 {
        cap
    } else {
        (-1.0 / lo).min(cap)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Mat {
        let mut m = Mat::zeros(3);
        m.data = vec![4.0, 1.0, 0.5, 1.0, 3.0, 0.2, 0.5, 0.2, 2.0];
        m
    }

    #[test]
    fn cholesky_inverse_round_trip() {
        let m = sample();
        let l = m.cholesky().unwrap();
        let inv = Mat::spd_inverse(&l);
        let id = m.matmul(&inv);
        assert!(id.sub(&Mat::scaled_identity(3, 1.0)).norm() < 1e-14);
        let mut b = vec![1.0, 2.0, 3.0];
        cholesky_solve(&l, &mut b);
        let x = inv.data.chunks(3).map(|r| r[0] + 2.0 * r[1] + 3.0 * r[2]);
        for (u, v) in x.zip(&b) {
            assert!((u - v).abs() < 1e-14);
        }
    }

    #[test]
    fn jacobi_eigenvalues() {
        let mut m = Mat::zeros(2);
        m.data = vec![2.0, 1.0, 1.0, 2.0];
        let ev = m.sym_eigenvalues();
        assert!((ev[0] - 1.0).abs() < 1e-14 && (ev[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn step_to_boundary() {
        let l = Mat::scaled_identity(2, 1.0).cholesky().unwrap();
        let mut dx = Mat::zeros(2);
        dx.data = vec![-2.0, 0.0, 0.0, 1.0];
        assert!((max_step(&l, &dx, 10.0) - 0.5).abs() < 1e-14);
        assert!(Mat::scaled_identity(2, -1.0).cholesky().is_none());
    }
}
