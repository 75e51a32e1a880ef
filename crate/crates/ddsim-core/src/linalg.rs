//! Dense complex linear algebra helpers.
//!
//! Matrices are column-major `nalgebra` matrices of `Complex64`.  The hot
//! products go through `matrixmultiply::zgemm` directly; Hermitian
//! eigendecompositions use `nalgebra`'s `SymmetricEigen`, which handles
//! complex Hermitian input.

use matrixmultiply::CGemmOption;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{DdError, Result};

pub type CMat = DMatrix<C64>;
pub type RVec = DVector<f64>;

const ONE: [f64; 2] = [1.0, 0.0];
const ZERO: [f64; 2] = [0.0, 0.0];

fn as_cgemm(p: *const C64) -> *const [f64; 2] {
    // Complex64 is repr(C) { re: f64, im: f64 }, layout-compatible with [f64; 2].
    p as *const [f64; 2]
}

fn as_cgemm_mut(p: *mut C64) -> *mut [f64; 2] {
    p as *mut [f64; 2]
}

/// out = a * b (zgemm).
pub fn mul_into(out: &mut CMat, a: &CMat, b: &CMat) {
    let (m, k) = a.shape();
    let (k2, n) = b.shape();
    assert_eq!(k, k2, "inner dimensions differ");
    assert_eq!(out.shape(), (m, n), "output shape mismatch");
    unsafe {
        matrixmultiply::zgemm(
            CGemmOption::Standard,
            CGemmOption::Standard,
            m,
            k,
            n,
            ONE,
            as_cgemm(a.as_slice().as_ptr()),
            1,
            m as isize,
            as_cgemm(b.as_slice().as_ptr()),
            1,
            k as isize,
            ZERO,
            as_cgemm_mut(out.as_mut_slice().as_mut_ptr()),
            1,
            m as isize,
        );
    }
}

/// out = a† * b.  The adjoint is materialized (O(d^2), negligible next to
/// the product).
pub fn adjoint_mul_into(out: &mut CMat, a: &CMat, b: &CMat) {
    let adj = a.adjoint();
    mul_into(out, &adj, b);
}

/// out = a * b†.
pub fn mul_adjoint_into(out: &mut CMat, a: &CMat, b: &CMat) {
    let adj = b.adjoint();
    mul_into(out, a, &adj);
}

pub fn matmul(a: &CMat, b: &CMat) -> CMat {
    let mut out = CMat::zeros(a.nrows(), b.ncols());
    mul_into(&mut out, a, b);
    out
}

/// Frobenius norm of m - m†.
pub fn hermiticity_residual(m: &CMat) -> f64 {
    (m - m.adjoint()).norm()
}

/// Largest elementwise deviation from Hermiticity.
pub fn hermiticity_residual_max(m: &CMat) -> f64 {
    let mut worst = 0.0f64;
    for r in 0..m.nrows() {
        for c in r..m.ncols() {
            let diff = (m[(r, c)] - m[(c, r)].conj()).norm();
            if diff > worst {
                worst = diff;
            }
        }
    }
    worst
}

fn require_hermitian(m: &CMat, tol: f64, what: &str) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(DdError::Validation(format!("{what}: matrix is not square")));
    }
    let resid = hermiticity_residual_max(m);
    if resid > tol {
        return Err(DdError::Validation(format!(
            "{what}: Hermiticity residual {resid:.3e} exceeds {tol:.1e}"
        )));
    }
    Ok(())
}

/// Eigendecomposition of a Hermitian matrix: h = V diag(vals) V†, eigenvalues
/// ascending.  The input is validated to be Hermitian within `tol`
/// (elementwise) and the decomposition is validated by its reconstruction
/// residual before being returned.
///
/// Cyclic Jacobi rotations: slower than tridiagonalization but robust for the
/// degenerate, sparsely structured matrices this simulator produces (which
/// broke nalgebra's SymmetricEigen), and accurate to machine precision.
pub fn eigh(h: &CMat, tol: f64) -> Result<(RVec, CMat)> {
    require_hermitian(h, tol, "eigh")?;
    let d = h.nrows();
    let mut a = h.clone();
    let mut v = CMat::identity(d, d);
    let scale = h.iter().map(|x| x.norm()).fold(0.0f64, f64::max).max(1e-300);

    const MAX_SWEEPS: usize = 64;
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0f64;
        for p in 0..d {
            for q in (p + 1)..d {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= 1e-15 * scale * d as f64 {
            converged = true;
            break;
        }
        for p in 0..d {
            for q in (p + 1)..d {
                let g = a[(p, q)];
                let m = g.norm();
                if m <= 1e-300 {
                    continue;
                }
                let alpha = a[(p, p)].re;
                let beta = a[(q, q)].re;
                let u = g / C64::new(m, 0.0); // unit phase of the pivot
                // Annihilation condition: t^2 - 2 zeta t - 1 = 0, stable root.
                let zeta = (beta - alpha) / (2.0 * m);
                let t = if zeta >= 0.0 {
                    -1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
                } else {
                    1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = u.conj() * C64::new(t * c, 0.0); // rotation entry R[q,p]
                let s_conj = s.conj();
                let cc = C64::new(c, 0.0);

                // A <- A R (mix columns p and q), R = [[c, -s̄],[s, c]] in the
                // (p, q) plane.
                for i in 0..d {
                    let aip = a[(i, p)];
                    let aiq = a[(i, q)];
                    a[(i, p)] = cc * aip + s * aiq;
                    a[(i, q)] = cc * aiq - s_conj * aip;
                }
                // A <- R† A (mix rows p and q).
                for j in 0..d {
                    let apj = a[(p, j)];
                    let aqj = a[(q, j)];
                    a[(p, j)] = cc * apj + s_conj * aqj;
                    a[(q, j)] = cc * aqj - s * apj;
                }
                // Pivot is annihilated by construction; pin it exactly.
                a[(p, q)] = C64::new(0.0, 0.0);
                a[(q, p)] = C64::new(0.0, 0.0);
                a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
                // V <- V R.
                for i in 0..d {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = cc * vip + s * viq;
                    v[(i, q)] = cc * viq - s_conj * vip;
                }
            }
        }
    }
    if !converged {
        return Err(DdError::NumericalFailure("jacobi eigensolver did not converge".into()));
    }

    // Sort ascending, permuting eigenvectors along.
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let vals = RVec::from_iterator(d, order.iter().map(|&i| a[(i, i)].re));
    let mut vecs = CMat::zeros(d, d);
    for (dst, &src) in order.iter().enumerate() {
        vecs.set_column(dst, &v.column(src));
    }

    // A wrong-but-orthonormal basis would still produce a unitary exponential,
    // so validate the decomposition itself.
    let mut hv = CMat::zeros(d, d);
    mul_into(&mut hv, h, &vecs);
    let mut vd = vecs.clone();
    for (j, &l) in vals.iter().enumerate() {
        for x in vd.column_mut(j).iter_mut() {
            *x *= C64::new(l, 0.0);
        }
    }
    let resid = (&hv - &vd).norm();
    if resid > 1e-10 * scale.max(1.0) * d as f64 {
        return Err(DdError::NumericalFailure(format!(
            "eigendecomposition residual {resid:.3e} too large"
        )));
    }
    Ok((vals, vecs))
}

/// exp(-i h t) of a Hermitian matrix via eigendecomposition.
pub fn expm_hermitian(h: &CMat, t: f64) -> Result<CMat> {
    let (vals, vecs) = eigh(h, 1e-10)?;
    let mut w = vecs.clone();
    for (j, &lambda) in vals.iter().enumerate() {
        let phase = C64::from_polar(1.0, -lambda * t);
        for v in w.column_mut(j).iter_mut() {
            *v *= phase;
        }
    }
    let mut out = CMat::zeros(h.nrows(), h.ncols());
    mul_adjoint_into(&mut out, &w, &vecs);
    Ok(out)
}

/// Frobenius norm of u†u - 1.
pub fn unitarity_residual(u: &CMat) -> f64 {
    let d = u.nrows();
    let mut g = CMat::zeros(d, d);
    adjoint_mul_into(&mut g, u, u);
    for i in 0..d {
        g[(i, i)] -= C64::new(1.0, 0.0);
    }
    g.norm()
}

/// Max |eigenvalue| of a Hermitian matrix; errors if the input is not
/// Hermitian within `tol`.
pub fn spectral_norm_hermitian(h: &CMat, tol: f64) -> Result<f64> {
    let (vals, _) = eigh(h, tol)?;
    Ok(vals.iter().fold(0.0f64, |acc, &v| acc.max(v.abs())))
}

/// m minus tr(m)/d times the identity.
pub fn traceless_part(m: &CMat) -> CMat {
    let d = m.nrows();
    let mean = m.trace() / C64::new(d as f64, 0.0);
    let mut out = m.clone();
    for i in 0..d {
        out[(i, i)] -= mean;
    }
    out
}

/// m <- diag(phases) * m (row scaling).
pub fn scale_rows(m: &mut CMat, phases: &[C64]) {
    let d = m.nrows();
    assert_eq!(phases.len(), d);
    for col in m.as_mut_slice().chunks_exact_mut(d) {
        for (v, p) in col.iter_mut().zip(phases) {
            *v *= *p;
        }
    }
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    a.iter().zip(b.iter()).fold(0.0f64, |acc, (x, y)| acc.max((x - y).norm()))
}
