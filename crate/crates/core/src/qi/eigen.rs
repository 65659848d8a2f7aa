//! Dense symmetric eigensolver: Householder tridiagonalization followed by
//! the implicit QL algorithm with Wilkinson-style shifts (EISPACK tred2/tql2).
//!
//! The basis is kept transposed (`basis[j * n + k]` is component `k` of
//! vector `j`) so that both the Householder accumulation and the Givens
//! rotations of the QL sweeps work on contiguous rows.

use crate::error::{Error, Result};

/// Full spectrum of a real symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem {
    n: usize,
    /// Ascending.
    eigenvalues: Vec<f64>,
    /// Row `k` is the unit eigenvector paired with `eigenvalues[k]`.
    eigenvectors: Vec<f64>,
}

impl EigenSystem {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvector(&self, k: usize) -> &[f64] {
        &self.eigenvectors[k * self.n..(k + 1) * self.n]
    }

    pub fn eigenvectors(&self) -> impl Iterator<Item = (f64, &[f64])> + '_ {
        self.eigenvalues
            .iter()
            .copied()
            .zip(self.eigenvectors.chunks_exact(self.n.max(1)))
    }

    /// `max_k ||A v_k - λ_k v_k||_inf` against a dense row-major matrix.
    pub fn max_residual(&self, a: &[f64]) -> f64 {
        let n = self.n;
        let mut worst = 0.0f64;
        for (lambda, v) in self.eigenvectors() {
            for i in 0..n {
                let row = &a[i * n..(i + 1) * n];
                let av: f64 = row.iter().zip(v).map(|(x, y)| x * y).sum();
                worst = worst.max((av - lambda * v[i]).abs());
            }
        }
        worst
    }

    /// `max_{j,k} |<v_j, v_k> - δ_jk|`.
    pub fn max_orthonormality_error(&self) -> f64 {
        let mut worst = 0.0f64;
        for j in 0..self.n {
            let vj = self.eigenvector(j);
            for k in j..self.n {
                let dot: f64 = vj.iter().zip(self.eigenvector(k)).map(|(a, b)| a * b).sum();
                let want = if j == k { 1.0 } else { 0.0 };
                worst = worst.max((dot - want).abs());
            }
        }
        worst
    }
}

/// Per-eigenvalue QL iteration budget used by [`symmetric_eigen`].
pub const DEFAULT_MAX_ITERATIONS: usize = 64;

/// Eigendecomposition of the symmetric row-major `n × n` matrix `a`.
///
/// Only the lower triangle is read.
pub fn symmetric_eigen(a: &[f64], n: usize) -> Result<EigenSystem> {
    symmetric_eigen_with_budget(a, n, DEFAULT_MAX_ITERATIONS)
}

pub fn symmetric_eigen_with_budget(
    a: &[f64],
    n: usize,
    max_iterations: usize,
) -> Result<EigenSystem> {
    assert_eq!(a.len(), n * n, "matrix must be n x n");
    if n == 0 {
        return Ok(EigenSystem {
            n,
            eigenvalues: Vec::new(),
            eigenvectors: Vec::new(),
        });
    }
    // Symmetric input, so the transposed working copy starts equal to `a`.
    let mut t = a.to_vec();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tridiagonalize(&mut t, &mut d, &mut e, n);
    ql_implicit(&mut t, &mut d, &mut e, n, max_iterations)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]).then(i.cmp(&j)));
    let eigenvalues = order.iter().map(|&i| d[i]).collect();
    let mut eigenvectors = Vec::with_capacity(n * n);
    for &i in &order {
        eigenvectors.extend_from_slice(&t[i * n..(i + 1) * n]);
    }
    Ok(EigenSystem {
        n,
        eigenvalues,
        eigenvectors,
    })
}

// `t[c * n + r]` holds V[r][c] of the textbook formulation.
fn tridiagonalize(t: &mut [f64], d: &mut [f64], e: &mut [f64], n: usize) {
    let at = |r: usize, c: usize| c * n + r;

    for j in 0..n {
        d[j] = t[at(n - 1, j)];
    }

    for i in (1..n).rev() {
        let scale: f64 = d[..i].iter().map(|v| v.abs()).sum();
        let mut h = 0.0;
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = t[at(i - 1, j)];
                t[at(i, j)] = 0.0;
                t[at(j, i)] = 0.0;
            }
        } else {
            for dk in &mut d[..i] {
                *dk /= scale;
                h += *dk * *dk;
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            e[..i].fill(0.0);

            for j in 0..i {
                f = d[j];
                t[at(j, i)] = f;
                let col = &t[j * n..j * n + i];
                g = e[j] + col[j] * f;
                for k in j + 1..i {
                    g += col[k] * d[k];
                    e[k] += col[k] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                let f = d[j];
                let g = e[j];
                let col = &mut t[j * n..j * n + i];
                for k in j..i {
                    col[k] -= f * e[k] + g * d[k];
                }
                d[j] = t[at(i - 1, j)];
                t[at(i, j)] = 0.0;
            }
        }
        d[i] = h;
    }

    // Accumulate the Householder reflections.
    for i in 0..n - 1 {
        t[at(n - 1, i)] = t[at(i, i)];
        t[at(i, i)] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            let (head, tail) = t.split_at_mut((i + 1) * n);
            let next = &tail[..=i];
            for k in 0..=i {
                d[k] = next[k] / h;
            }
            for j in 0..=i {
                let col = &mut head[j * n..j * n + i + 1];
                let g: f64 = next.iter().zip(col.iter()).map(|(a, b)| a * b).sum();
                for (c, dk) in col.iter_mut().zip(&d[..=i]) {
                    *c -= g * dk;
                }
            }
        }
        for k in 0..=i {
            t[at(k, i + 1)] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = t[at(n - 1, j)];
        t[at(n - 1, j)] = 0.0;
    }
    t[at(n - 1, n - 1)] = 1.0;
    e[0] = 0.0;
}

fn ql_implicit(
    t: &mut [f64],
    d: &mut [f64],
    e: &mut [f64],
    n: usize,
    max_iterations: usize,
) -> Result<()> {
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let mut f = 0.0;
    let mut tst1 = 0.0f64;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }

        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > max_iterations {
                    return Err(Error::NoConvergence(max_iterations));
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let h = g - d[l];
                for di in &mut d[l + 2..n] {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    let h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);

                    let (lo, hi) = t.split_at_mut((i + 1) * n);
                    let vi = &mut lo[i * n..];
                    let vi1 = &mut hi[..n];
                    for (a, b) in vi.iter_mut().zip(vi1.iter_mut()) {
                        let h = *b;
                        *b = s * *a + c * h;
                        *a = c * *a - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}
