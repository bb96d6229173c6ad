//! Tridiagonal LU with partial pivoting, plus a cyclic variant via
//! Sherman–Morrison. Factor once, solve many times.

use crate::error::{Error, Result};

/// LU factors of a tridiagonal matrix. `sub[i] = A[i+1][i]`, `sup[i] = A[i][i+1]`.
#[derive(Debug, Clone)]
pub struct Tridiagonal {
    dl: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swapped: Vec<bool>,
}

impl Tridiagonal {
    pub fn factor(sub: &[f64], diag: &[f64], sup: &[f64]) -> Result<Self> {
        let n = diag.len();
        assert!(n >= 1 && sub.len() + 1 == n && sup.len() + 1 == n);
        let mut dl = sub.to_vec();
        let mut d = diag.to_vec();
        let mut du = sup.to_vec();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= dl[i].abs() {
                if d[i] != 0.0 {
                    let fact = dl[i] / d[i];
                    dl[i] = fact;
                    d[i + 1] -= fact * du[i];
                }
            } else {
                // swap rows i and i+1
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                swapped[i] = true;
            }
        }
        if let Some(i) = d.iter().position(|&x| x == 0.0 || !x.is_finite()) {
            return Err(Error::SolverBreakdown(i));
        }
        Ok(Self {
            dl,
            d,
            du,
            du2,
            swapped,
        })
    }

    pub fn solve_in_place(&self, b: &mut [f64]) {
        let n = self.d.len();
        assert_eq!(b.len(), n);
        for i in 0..n - 1 {
            if self.swapped[i] {
                let temp = b[i] - self.dl[i] * b[i + 1];
                b[i] = b[i + 1];
                b[i + 1] = temp;
            } else {
                b[i + 1] -= self.dl[i] * b[i];
            }
        }
        b[n - 1] /= self.d[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
    }
}

/// Tridiagonal matrix with the two corner entries `A[0][n-1] = top_right` and
/// `A[n-1][0] = bottom_left`, as produced by periodic stencils.
#[derive(Debug, Clone)]
pub struct CyclicTridiagonal {
    inner: Tridiagonal,
    z: Vec<f64>,
    v_last: f64,
    denom: f64,
}

impl CyclicTridiagonal {
    pub fn factor(
        sub: &[f64],
        diag: &[f64],
        sup: &[f64],
        top_right: f64,
        bottom_left: f64,
    ) -> Result<Self> {
        let n = diag.len();
        assert!(n >= 3);
        // A = A' + u v^T with u = (g, 0, .., 0, bottom_left), v = (1, 0, .., 0, top_right / g)
        let g = if diag[0] != 0.0 { -diag[0] } else { 1.0 };
        let mut d = diag.to_vec();
        d[0] -= g;
        d[n - 1] -= top_right * bottom_left / g;
        let inner = Tridiagonal::factor(sub, &d, sup)?;
        let mut z = vec![0.0; n];
        z[0] = g;
        z[n - 1] = bottom_left;
        inner.solve_in_place(&mut z);
        let v_last = top_right / g;
        let denom = 1.0 + z[0] + v_last * z[n - 1];
        if denom == 0.0 || !denom.is_finite() {
            return Err(Error::SolverBreakdown(0));
        }
        Ok(Self {
            inner,
            z,
            v_last,
            denom,
        })
    }

    pub fn solve_in_place(&self, b: &mut [f64]) {
        self.inner.solve_in_place(b);
        let n = b.len();
        let factor = (b[0] + self.v_last * b[n - 1]) / self.denom;
        for (bi, zi) in b.iter_mut().zip(&self.z) {
            *bi -= factor * zi;
        }
    }
}
