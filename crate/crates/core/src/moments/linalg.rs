//! Jacobi methods for complex Hermitian eigenproblems and singular values.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 80;

/// Eigenvalues (ascending) and unitary eigenvectors (as columns).
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: DMatrix<Complex64>,
}

impl HermitianEigen {
    pub fn lambda_min(&self) -> f64 {
        self.values[0]
    }

    pub fn lambda_max(&self) -> f64 {
        *self.values.last().expect("nonempty spectrum")
    }
}

fn check_finite(m: &DMatrix<Complex64>) -> Result<()> {
    if m.is_empty() {
        return Err(Error::Domain("empty matrix".into()));
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Domain("matrix has non-finite entries".into()));
    }
    Ok(())
}

/// Rotation `J = [[c, s·e], [−s·ē, c]]` that annihilates the off-diagonal
/// entry `g·e` of the Hermitian 2×2 block `[[a, g·e], [g·ē, b]]`.
fn rotation(a: f64, b: f64, off: Complex64) -> (f64, f64, Complex64) {
    let g = off.norm();
    let e = off / g;
    let theta = (b - a) / (2.0 * g);
    let t = if theta == 0.0 {
        1.0
    } else {
        theta.signum() / (theta.abs() + theta.hypot(1.0))
    };
    let c = 1.0 / t.hypot(1.0);
    (c, t * c, e)
}

/// Cyclic two-sided Jacobi for a Hermitian matrix.
pub fn hermitian_eigen(h: &DMatrix<Complex64>) -> Result<HermitianEigen> {
    check_finite(h)?;
    if !h.is_square() {
        return Err(Error::Domain("eigenproblem needs a square matrix".into()));
    }
    let n = h.nrows();
    let mut a = h.clone();
    let mut v = DMatrix::<Complex64>::identity(n, n);
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let g = apq.norm();
                if g <= f64::EPSILON * (app * aqq).abs().sqrt() || g < f64::MIN_POSITIVE {
                    continue;
                }
                rotated = true;
                let (c, s, e) = rotation(app, aqq, apq);
                let jpq = e * s;
                let jqp = -e.conj() * s;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * c + akq * jqp;
                    a[(k, q)] = akp * jpq + akq * c;
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * c + vkq * jqp;
                    v[(k, q)] = vkp * jpq + vkq * c;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk * c + aqk * jqp.conj();
                    a[(q, k)] = apk * jpq.conj() + aqk * c;
                }
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                a[(p, p)].im = 0.0;
                a[(q, q)].im = 0.0;
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Numerical(format!(
            "Jacobi eigensolver did not converge in {MAX_SWEEPS} sweeps"
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(HermitianEigen { values, vectors })
}

/// Singular values (ascending) by one-sided Jacobi, after a QR reduction
/// when the matrix is tall.
pub fn singular_values(m: &DMatrix<Complex64>) -> Result<Vec<f64>> {
    check_finite(m)?;
    let mut a = if m.nrows() > m.ncols() {
        m.clone().qr().r()
    } else {
        m.clone()
    };
    let (rows, cols) = a.shape();
    // Rounding in the column inner products is of order rows·ε.
    let tol = rows.max(1) as f64 * f64::EPSILON;
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let (mut alpha, mut beta) = (0.0, 0.0);
                let mut gamma = Complex64::new(0.0, 0.0);
                for k in 0..rows {
                    let x = a[(k, p)];
                    let y = a[(k, q)];
                    alpha += x.norm_sqr();
                    beta += y.norm_sqr();
                    gamma += x.conj() * y;
                }
                let g = gamma.norm();
                if g <= tol * (alpha * beta).sqrt() || g < f64::MIN_POSITIVE {
                    continue;
                }
                rotated = true;
                let (c, s, e) = rotation(alpha, beta, gamma);
                let jpq = e * s;
                let jqp = -e.conj() * s;
                for k in 0..rows {
                    let x = a[(k, p)];
                    let y = a[(k, q)];
                    a[(k, p)] = x * c + y * jqp;
                    a[(k, q)] = x * jpq + y * c;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Numerical(format!(
            "one-sided Jacobi did not converge in {MAX_SWEEPS} sweeps"
        )));
    }
    let mut sv: Vec<f64> = (0..cols).map(|j| a.column(j).norm()).collect();
    if m.nrows() < m.ncols() {
        // A wide matrix has at least ncols − nrows zero singular values.
        sv.sort_by(|x, y| y.total_cmp(x));
        for s in sv.iter_mut().skip(m.nrows()) {
            *s = 0.0;
        }
    }
    sv.sort_by(f64::total_cmp);
    Ok(sv)
}
