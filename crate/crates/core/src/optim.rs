//! Derivative-free local search and the unitary parametrization used by the
//! fully-entangled-fraction optimizer.

use crate::linalg::{c, hermitian_eigen};
use crate::{CMatrix, Complex64};

/// Result of a local minimization.
#[derive(Clone, Debug)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
}

/// Nelder–Mead simplex search with standard coefficients.
#[derive(Clone, Debug)]
pub struct NelderMead {
    /// Stop once the spread of objective values over the simplex is at most this.
    pub tol: f64,
    pub max_evals: usize,
    /// Edge length of the initial simplex.
    pub step: f64,
}

impl Default for NelderMead {
    fn default() -> Self {
        Self {
            tol: crate::tol::OPT,
            max_evals: 4000,
            step: 0.4,
        }
    }
}

impl NelderMead {
    /// Minimizes `f` from `x0`. After the simplex collapses, the search is
    /// restarted from the best vertex with a smaller simplex until a restart
    /// no longer improves the value by more than `tol`.
    pub fn minimize(&self, mut f: impl FnMut(&[f64]) -> f64, x0: &[f64]) -> Minimum {
        let mut best = self.run(&mut f, x0, self.step, self.max_evals);
        let mut evals = best.evals;
        let mut step = self.step * 0.25;
        while evals < self.max_evals {
            let next = self.run(&mut f, &best.x, step, self.max_evals - evals);
            evals += next.evals;
            let improved = best.value - next.value;
            if next.value < best.value {
                best = next;
            }
            if improved <= self.tol {
                break;
            }
            step *= 0.25;
        }
        best.evals = evals;
        best
    }

    fn run(
        &self,
        f: &mut impl FnMut(&[f64]) -> f64,
        x0: &[f64],
        step: f64,
        budget: usize,
    ) -> Minimum {
        let n = x0.len();
        let mut simplex: Vec<Vec<f64>> = vec![x0.to_vec()];
        for k in 0..n {
            let mut v = x0.to_vec();
            v[k] += step;
            simplex.push(v);
        }
        let mut values: Vec<f64> = simplex.iter().map(|v| f(v)).collect();
        let mut evals = n + 1;

        loop {
            let mut order: Vec<usize> = (0..=n).collect();
            order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
            simplex = order.iter().map(|&i| simplex[i].clone()).collect();
            values = order.iter().map(|&i| values[i]).collect();

            if values[n] - values[0] <= self.tol || evals >= budget {
                break;
            }

            let centroid: Vec<f64> = (0..n)
                .map(|k| simplex[..n].iter().map(|v| v[k]).sum::<f64>() / n as f64)
                .collect();
            let along = |t: f64| -> Vec<f64> {
                centroid
                    .iter()
                    .zip(&simplex[n])
                    .map(|(c, w)| c + t * (w - c))
                    .collect()
            };

            let xr = along(-1.0);
            let fr = f(&xr);
            evals += 1;
            if fr < values[0] {
                let xe = along(-2.0);
                let fe = f(&xe);
                evals += 1;
                if fe < fr {
                    simplex[n] = xe;
                    values[n] = fe;
                } else {
                    simplex[n] = xr;
                    values[n] = fr;
                }
            } else if fr < values[n - 1] {
                simplex[n] = xr;
                values[n] = fr;
            } else {
                let (xc, fc) = if fr < values[n] {
                    let x = along(-0.5);
                    let v = f(&x);
                    (x, v)
                } else {
                    let x = along(0.5);
                    let v = f(&x);
                    (x, v)
                };
                evals += 1;
                if fc < values[n].min(fr) {
                    simplex[n] = xc;
                    values[n] = fc;
                } else {
                    // shrink towards the best vertex
                    for i in 1..=n {
                        let v: Vec<f64> = simplex[0]
                            .iter()
                            .zip(&simplex[i])
                            .map(|(b, x)| b + 0.5 * (x - b))
                            .collect();
                        values[i] = f(&v);
                        simplex[i] = v;
                    }
                    evals += n;
                }
            }
        }
        Minimum {
            x: simplex.swap_remove(0),
            value: values[0],
            evals,
        }
    }
}

/// Traceless Hermitian basis of `d×d` matrices (generalized Gell-Mann),
/// `d² − 1` elements. For `d = 2` these are the Pauli matrices.
pub fn gell_mann(d: usize) -> Vec<CMatrix> {
    let mut out = Vec::with_capacity(d * d - 1);
    for j in 0..d {
        for k in (j + 1)..d {
            let mut s = CMatrix::zeros(d, d);
            s[(j, k)] = c(1.0, 0.0);
            s[(k, j)] = c(1.0, 0.0);
            out.push(s);
            let mut a = CMatrix::zeros(d, d);
            a[(j, k)] = c(0.0, -1.0);
            a[(k, j)] = c(0.0, 1.0);
            out.push(a);
        }
    }
    for l in 1..d {
        let norm = (2.0 / (l * (l + 1)) as f64).sqrt();
        let mut diag = vec![0.0; d];
        for x in diag.iter_mut().take(l) {
            *x = norm;
        }
        diag[l] = -(l as f64) * norm;
        out.push(CMatrix::from_diag(&diag));
    }
    out
}

/// `exp(i Σ x_k G_k)` for the Gell-Mann basis `G`.
pub fn unitary_from_params(basis: &[CMatrix], x: &[f64]) -> CMatrix {
    let d = basis[0].rows();
    let mut h = CMatrix::zeros(d, d);
    for (g, &xk) in basis.iter().zip(x) {
        if xk != 0.0 {
            h = &h + &g.scale(xk);
        }
    }
    expi_hermitian(&h)
}

/// `exp(iH)` for Hermitian `H`; closed form for traceless 2×2.
pub fn expi_hermitian(h: &CMatrix) -> CMatrix {
    if h.rows() == 2 && h.trace().norm() < 1e-15 {
        let a = h[(0, 0)].re;
        let b = h[(0, 1)];
        let r = (a * a + b.norm_sqr()).sqrt();
        if r < 1e-300 {
            return CMatrix::identity(2);
        }
        let (s, cs) = r.sin_cos();
        let k = Complex64::new(0.0, s / r);
        return CMatrix::from_fn(2, 2, |i, j| {
            let id = if i == j { c(cs, 0.0) } else { c(0.0, 0.0) };
            id + k * h[(i, j)]
        });
    }
    hermitian_eigen(h)
        .expect("generator combination is Hermitian")
        .map(|l| Complex64::from_polar(1.0, l))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimizes_rosenbrock() {
        let nm = NelderMead {
            tol: 1e-14,
            max_evals: 20_000,
            step: 0.5,
        };
        let m = nm.minimize(
            |x| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2),
            &[-1.2, 1.0],
        );
        assert!(
            (m.x[0] - 1.0).abs() < 1e-4 && (m.x[1] - 1.0).abs() < 1e-4,
            "{m:?}"
        );
    }

    #[test]
    fn minimizes_quadratic_to_tolerance() {
        let m = NelderMead::default().minimize(
            |x| {
                x.iter()
                    .enumerate()
                    .map(|(i, v)| (i + 1) as f64 * (v - 0.3).powi(2))
                    .sum()
            },
            &[0.0; 4],
        );
        assert!(m.value < 1e-8);
    }

    #[test]
    fn gell_mann_basis_is_orthogonal_and_traceless() {
        for d in 2..5 {
            let b = gell_mann(d);
            assert_eq!(b.len(), d * d - 1);
            for (i, g) in b.iter().enumerate() {
                assert!(g.trace().norm() < 1e-14);
                assert!(g.hermiticity_error() < 1e-15);
                for (j, h) in b.iter().enumerate() {
                    let ip = g.trace_product(h).re;
                    let want = if i == j { 2.0 } else { 0.0 };
                    assert!((ip - want).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn expi_closed_form_matches_spectral() {
        let b = gell_mann(2);
        let x = [0.3, -1.1, 0.7];
        let mut h = CMatrix::zeros(2, 2);
        for (g, &xk) in b.iter().zip(&x) {
            h = &h + &g.scale(xk);
        }
        let fast = expi_hermitian(&h);
        let slow = hermitian_eigen(&h)
            .unwrap()
            .map(|l| Complex64::from_polar(1.0, l));
        assert!(fast.distance(&slow) < 1e-13);
        assert!(
            unitary_from_params(&gell_mann(3), &[0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8])
                .unitarity_error()
                < 1e-12
        );
    }
}
