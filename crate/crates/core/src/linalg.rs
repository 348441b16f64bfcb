//! Dense complex linear algebra helpers on top of nalgebra.

use std::f64::consts::{FRAC_1_PI, SQRT_2};

use nalgebra::{ComplexField, DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub const I: C64 = C64 { re: 0.0, im: 1.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };
pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn frob(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn frob_vec(v: &CVec) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Frobenius distance scaled by the larger of the two norms (floored at 1).
pub fn rel_diff(a: &CMat, b: &CMat) -> f64 {
    frob(&(a - b)) / frob(a).max(frob(b)).max(1.0)
}

/// Thin singular value decomposition `A = U diag(σ) Vᴴ`, singular values descending.
#[derive(Debug, Clone)]
pub struct Svd<T: ComplexField<RealField = f64>> {
    pub u: DMatrix<T>,
    pub singular_values: Vec<f64>,
    pub v: DMatrix<T>,
}

const JACOBI_MAX_SWEEPS: usize = 80;

/// Disjoint mutable views of columns `p < q` of a column-major matrix.
fn column_pair<T: ComplexField<RealField = f64>>(
    m: &mut DMatrix<T>,
    p: usize,
    q: usize,
) -> (&mut [T], &mut [T]) {
    let rows = m.nrows();
    let (left, right) = m.as_mut_slice().split_at_mut(q * rows);
    (&mut left[p * rows..(p + 1) * rows], &mut right[..rows])
}

/// `(x, y) ← (c·x − s·φy, s·x + c·φy)` elementwise.
fn rotate<T: ComplexField<RealField = f64>>(x: &mut [T], y: &mut [T], phase: &T, c: f64, s: f64) {
    for (a, b) in x.iter_mut().zip(y.iter_mut()) {
        let xa = a.clone();
        let yb = b.clone() * phase.clone();
        *a = xa.clone().scale(c) - yb.clone().scale(s);
        *b = xa.scale(s) + yb.scale(c);
    }
}

/// One-sided (Hestenes) Jacobi SVD for `rows ≥ cols`. Tall inputs are first reduced by QR.
fn jacobi_svd_tall<T: ComplexField<RealField = f64>>(a: &DMatrix<T>) -> Svd<T> {
    let (m, n) = a.shape();
    if m > 2 * n {
        let qr = a.clone().qr();
        let q = qr.q();
        let inner = jacobi_svd_tall(&qr.r());
        return Svd {
            u: q * inner.u,
            singular_values: inner.singular_values,
            v: inner.v,
        };
    }
    let mut w = a.clone();
    let mut v = DMatrix::<T>::identity(n, n);
    // A column below this norm is numerical noise: rotating it against a large column only
    // reshuffles rounding errors and would prevent convergence.
    let negligible = (f64::EPSILON * (m as f64) * a.norm()).powi(2);
    let threshold = f64::EPSILON * (m as f64).sqrt();
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let (cp, cq) = column_pair(&mut w, p, q);
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = T::zero();
                for (x, y) in cp.iter().zip(cq.iter()) {
                    alpha += x.clone().modulus_squared();
                    beta += y.clone().modulus_squared();
                    gamma += x.clone().conjugate() * y.clone();
                }
                let g = gamma.clone().modulus();
                if g == 0.0
                    || g <= threshold * (alpha * beta).sqrt()
                    || alpha.min(beta) <= negligible
                {
                    continue;
                }
                rotated = true;
                let phase = gamma.unscale(g).conjugate();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(cp, cq, &phase, c, s);
                let (vp, vq) = column_pair(&mut v, p, q);
                rotate(vp, vq, &phase, c, s);
            }
        }
        if !rotated {
            break;
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = (0..n).map(|j| w.column(j).norm()).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let mut u = DMatrix::<T>::zeros(m, n);
    let mut vs = DMatrix::<T>::zeros(n, n);
    let mut values = Vec::with_capacity(n);
    let smax = norms.iter().cloned().fold(0.0, f64::max);
    let mut missing = Vec::new();
    for (j, &i) in order.iter().enumerate() {
        values.push(norms[i]);
        vs.set_column(j, &v.column(i));
        if norms[i] > 1e-300 && norms[i] > f64::EPSILON * 1e-3 * smax {
            u.set_column(j, &w.column(i).unscale(norms[i]));
        } else {
            missing.push(j);
        }
    }
    // Complete U with orthonormal vectors where the singular value vanishes.
    let mut candidate = 0;
    for j in missing {
        while candidate < m {
            let mut e = DVector::<T>::zeros(m);
            e[candidate] = T::one();
            candidate += 1;
            for k in 0..n {
                if k != j {
                    let col = u.column(k).into_owned();
                    let proj = col.dotc(&e);
                    e -= col * proj;
                }
            }
            let nrm = e.norm();
            if nrm > 0.5 {
                u.set_column(j, &e.unscale(nrm));
                break;
            }
        }
    }
    Svd {
        u,
        singular_values: values,
        v: vs,
    }
}

/// Thin SVD of a real or complex matrix.
pub fn svd_of<T: ComplexField<RealField = f64>>(a: &DMatrix<T>) -> Svd<T> {
    let (m, n) = a.shape();
    if m >= n {
        jacobi_svd_tall(a)
    } else {
        let t = jacobi_svd_tall(&a.adjoint());
        Svd {
            u: t.v,
            singular_values: t.singular_values,
            v: t.u,
        }
    }
}

pub fn svd(a: &CMat) -> Svd<C64> {
    svd_of(a)
}

/// Largest singular value.
pub fn op_norm(m: &CMat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    svd(m).singular_values[0]
}

/// Smallest singular value of a square matrix.
pub fn sigma_min(m: &CMat) -> f64 {
    if m.is_empty() {
        return f64::INFINITY;
    }
    *svd(m).singular_values.last().expect("non-empty")
}

fn null_space_of<T: ComplexField<RealField = f64>>(m: &DMatrix<T>, tol: f64) -> DMatrix<T> {
    let (rows, cols) = m.shape();
    if cols == 0 {
        return DMatrix::zeros(0, 0);
    }
    let padded = if rows < cols {
        let mut p = DMatrix::<T>::zeros(cols, cols);
        p.view_mut((0, 0), (rows, cols)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let d = svd_of(&padded);
    let smax = d.singular_values[0];
    let thresh = tol * smax.max(1.0);
    let keep: Vec<usize> = (0..d.singular_values.len())
        .filter(|&i| d.singular_values[i] <= thresh)
        .collect();
    let mut out = DMatrix::<T>::zeros(cols, keep.len());
    for (j, &i) in keep.iter().enumerate() {
        out.set_column(j, &d.v.column(i));
    }
    out
}

/// Orthonormal basis (as columns) of the null space of `m`.
///
/// A singular value counts as zero when it is at most `tol * max(1, sigma_max)`.
pub fn null_space(m: &CMat, tol: f64) -> CMat {
    null_space_of(m, tol)
}

/// Null space of a real matrix, same thresholding as [`null_space`].
pub fn real_null_space(m: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    null_space_of(m, tol)
}

/// Numerical rank with the same threshold convention as [`null_space`].
pub fn rank(m: &CMat, tol: f64) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = svd(m).singular_values;
    let smax = sv[0];
    sv.iter().filter(|&&s| s > tol * smax.max(1.0)).count()
}

/// Orthonormal basis of the column span.
pub fn orth(m: &CMat, tol: f64) -> CMat {
    let (rows, cols) = m.shape();
    if cols == 0 || rows == 0 {
        return CMat::zeros(rows, 0);
    }
    let d = svd(m);
    let smax = d.singular_values[0];
    let keep: Vec<usize> = (0..d.singular_values.len())
        .filter(|&i| d.singular_values[i] > tol * smax.max(1.0))
        .collect();
    let mut out = CMat::zeros(rows, keep.len());
    for (j, &i) in keep.iter().enumerate() {
        out.set_column(j, &d.u.column(i));
    }
    out
}

/// Least-squares solution of `a x ≈ b` (minimum norm), with the relative residual.
pub fn least_squares(a: &CMat, b: &CVec) -> (CVec, f64) {
    let d = svd(a);
    let smax = d.singular_values.first().copied().unwrap_or(0.0);
    let mut x = CVec::zeros(a.ncols());
    for (k, &s) in d.singular_values.iter().enumerate() {
        if s > 1e-13 * smax.max(1e-300) {
            let coef = d.u.column(k).dotc(b) / C64::new(s, 0.0);
            x += d.v.column(k) * coef;
        }
    }
    let residual = frob_vec(&(a * &x - b)) / frob_vec(b).max(1.0);
    (x, residual)
}

/// Spectral-norm distance between the orthogonal projections onto two column spans.
pub fn subspace_distance(a: &CMat, b: &CMat, tol: f64) -> f64 {
    let qa = orth(a, tol);
    let qb = orth(b, tol);
    if qa.ncols() != qb.ncols() {
        return 1.0;
    }
    let pa = &qa * qa.adjoint();
    let pb = &qb * qb.adjoint();
    op_norm(&(pa - pb))
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
pub fn hermitian_eigen(m: &CMat) -> (Vec<f64>, CMat) {
    let n = m.nrows();
    if n == 0 {
        return (vec![], CMat::zeros(0, 0));
    }
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let eig = h.clone().symmetric_eigen();
    let (mut vals, mut q): (Vec<f64>, CMat) =
        (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors);
    let scale = frob(&h).max(1e-300);
    let recon =
        &q * CMat::from_diagonal(&CVec::from_iterator(
            n,
            vals.iter().map(|&v| C64::new(v, 0.0)),
        )) * q.adjoint();
    let unitarity = frob(&(q.adjoint() * &q - CMat::identity(n, n)));
    if frob(&(recon - &h)) > 1e-10 * scale || unitarity > 1e-10 {
        (vals, q) = jacobi_hermitian(&h);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| vals[i].total_cmp(&vals[j]));
    let values = order.iter().map(|&i| vals[i]).collect();
    let mut vecs = CMat::zeros(n, n);
    for (j, &i) in order.iter().enumerate() {
        vecs.set_column(j, &q.column(i));
    }
    (values, vecs)
}

/// Cyclic two-sided Jacobi eigensolver for Hermitian matrices.
fn jacobi_hermitian(h: &CMat) -> (Vec<f64>, CMat) {
    let n = h.nrows();
    let mut a = h.clone();
    let mut q = CMat::identity(n, n);
    let scale = frob(h).max(1e-300);
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut off = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    off += a[(i, j)].norm_sqr();
                }
            }
        }
        if off.sqrt() <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for r in (p + 1)..n {
                let hpq = a[(p, r)];
                let g = hpq.norm();
                if g <= 1e-300 {
                    continue;
                }
                let phase = (hpq / g).conj();
                let (ap, ar) = (a[(p, p)].re, a[(r, r)].re);
                let zeta = (ar - ap) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                // G = diag(1, phase) · [[c, s], [-s, c]] on coordinates (p, r).
                let g_pp = C64::new(c, 0.0);
                let g_pr = C64::new(s, 0.0);
                let g_rp = phase * (-s);
                let g_rr = phase * c;
                for k in 0..n {
                    let (x, y) = (a[(k, p)], a[(k, r)]);
                    a[(k, p)] = x * g_pp + y * g_rp;
                    a[(k, r)] = x * g_pr + y * g_rr;
                    let (x, y) = (q[(k, p)], q[(k, r)]);
                    q[(k, p)] = x * g_pp + y * g_rp;
                    q[(k, r)] = x * g_pr + y * g_rr;
                }
                for k in 0..n {
                    let (x, y) = (a[(p, k)], a[(r, k)]);
                    a[(p, k)] = g_pp.conj() * x + g_rp.conj() * y;
                    a[(r, k)] = g_pr.conj() * x + g_rr.conj() * y;
                }
                a[(p, r)] = C64::new(0.0, 0.0);
                a[(r, p)] = C64::new(0.0, 0.0);
            }
        }
    }
    ((0..n).map(|i| a[(i, i)].re).collect(), q)
}

/// Apply a real function to a Hermitian matrix.
pub fn hermitian_function(m: &CMat, f: impl Fn(f64) -> f64) -> CMat {
    let (vals, vecs) = hermitian_eigen(m);
    let d = CMat::from_diagonal(&CVec::from_iterator(
        vals.len(),
        vals.iter().map(|&v| C64::new(f(v), 0.0)),
    ));
    &vecs * d * vecs.adjoint()
}

/// Eigen-decomposition of a normal matrix.
///
/// A normal matrix is diagonalised by the eigenvectors of a generic real combination of its
/// Hermitian and skew-Hermitian parts; a few fixed combinations are tried and the one with
/// the smallest off-diagonal remainder is kept. Returns eigenvalues, the unitary `Q`, and the
/// off-diagonal Frobenius norm of `Q*MQ` (zero exactly when `M` is normal and separated).
pub fn normal_eigen(m: &CMat) -> (Vec<C64>, CMat, f64) {
    let n = m.nrows();
    if n == 0 {
        return (vec![], CMat::zeros(0, 0), 0.0);
    }
    let re = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let im = (m - m.adjoint()) * C64::new(0.0, -0.5);
    let scale = frob(m).max(1e-300);
    let mut best: Option<(Vec<C64>, CMat, f64)> = None;
    for (a, b) in [(1.0, 0.577_215_664_9), (FRAC_1_PI, 1.0), (1.0, -SQRT_2)] {
        let h = &re * C64::new(a, 0.0) + &im * C64::new(b, 0.0);
        let (_, q) = hermitian_eigen(&h);
        let t = q.adjoint() * m * &q;
        let mut off = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    off += t[(i, j)].norm_sqr();
                }
            }
        }
        let off = off.sqrt();
        let vals = (0..n).map(|i| t[(i, i)]).collect();
        if best.as_ref().is_none_or(|b| off < b.2) {
            best = Some((vals, q, off));
        }
        if off <= 1e-12 * scale {
            break;
        }
    }
    best.expect("at least one combination")
}

/// Apply a complex function to a normal matrix.
pub fn normal_function(m: &CMat, f: impl Fn(C64) -> C64) -> CMat {
    let (vals, q, _) = normal_eigen(m);
    let d = CMat::from_diagonal(&CVec::from_iterator(vals.len(), vals.iter().map(|&v| f(v))));
    &q * d * q.adjoint()
}

/// Group sorted values into clusters whose consecutive gaps are below `gap`.
pub fn clusters(sorted: &[f64], gap: f64) -> Vec<std::ops::Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=sorted.len() {
        if i == sorted.len() || sorted[i] - sorted[i - 1] > gap {
            if i > start {
                out.push(start..i);
            }
            start = i;
        }
    }
    out
}

/// Closest unitary in Frobenius norm (polar factor).
pub fn unitary_part(m: &CMat) -> CMat {
    let d = svd(m);
    &d.u * d.v.adjoint()
}

/// Stack a list of vectors as columns.
pub fn columns(cols: &[CVec], rows: usize) -> CMat {
    let mut m = CMat::zeros(rows, cols.len());
    for (j, v) in cols.iter().enumerate() {
        m.set_column(j, v);
    }
    m
}

/// Real representation of a complex-linear or antilinear map given by its action on
/// the real basis `{e_k, i e_k}`.
pub fn realify(n: usize, f: impl Fn(&CVec) -> CVec) -> DMatrix<f64> {
    let out_dim = f(&CVec::zeros(n)).len();
    let mut m = DMatrix::zeros(2 * out_dim, 2 * n);
    for k in 0..2 * n {
        let mut x = CVec::zeros(n);
        x[k % n] = if k < n { ONE } else { I };
        let y = f(&x);
        for r in 0..out_dim {
            m[(r, k)] = y[r].re;
            m[(out_dim + r, k)] = y[r].im;
        }
    }
    m
}

/// Inverse of [`realify`] on vectors: `[re; im] -> re + i im`.
pub fn complexify(v: &DVector<f64>) -> CVec {
    let n = v.len() / 2;
    CVec::from_iterator(n, (0..n).map(|k| C64::new(v[k], v[n + k])))
}

/// Swap permutation on `C^n (x) C^n` in pair ordering `k*n + l`.
pub fn swap_matrix(n: usize) -> CMat {
    let mut s = CMat::zeros(n * n, n * n);
    for k in 0..n {
        for l in 0..n {
            s[(l * n + k, k * n + l)] = ONE;
        }
    }
    s
}
