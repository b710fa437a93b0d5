//! Eigendecompositions, characteristic polynomials and the polynomial
//! functional calculus `p ↦ p(A)`.

use std::cmp::Ordering;
use std::ops::{Add, Mul};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{dot, op_norm_or_hs, Field, Matrix, Scalar, Vector, ONE, ZERO};

// ---------------------------------------------------------------------------
// Polynomial
// ---------------------------------------------------------------------------

/// Univariate polynomial with degree-ascending coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Scalar>,
}

impl Polynomial {
    /// Trailing exact zeros are trimmed; the zero polynomial keeps one coefficient.
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.len() > 1 && *coeffs.last().unwrap() == ZERO {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(ZERO);
        }
        Self { coeffs }
    }

    pub fn real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn constant(c: Scalar) -> Self {
        Self::new(vec![c])
    }

    /// `z^m`.
    pub fn monomial(m: usize) -> Self {
        let mut c = vec![ZERO; m + 1];
        c[m] = ONE;
        Self { coeffs: c }
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> Scalar {
        *self.coeffs.last().unwrap()
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == ONE
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == ZERO
    }

    /// Horner evaluation at a scalar.
    pub fn eval(&self, z: Scalar) -> Scalar {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    /// Remainder on division by a monic polynomial.
    pub fn derivative(&self) -> Polynomial {
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    pub fn rem_monic(&self, divisor: &Polynomial) -> Polynomial {
        assert!(divisor.is_monic(), "divisor must be monic");
        let d = divisor.degree();
        let mut r = self.coeffs.clone();
        while r.len() > d && r.len() > 1 {
            let top = r.len() - 1;
            let lead = r[top];
            if lead != ZERO {
                for (k, &q) in divisor.coeffs.iter().enumerate() {
                    r[top - d + k] -= lead * q;
                }
            }
            r.pop();
        }
        Polynomial::new(r)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let c = (0..n)
            .map(|k| {
                self.coeffs.get(k).copied().unwrap_or(ZERO) + rhs.coeffs.get(k).copied().unwrap_or(ZERO)
            })
            .collect();
        Polynomial::new(c)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut c = vec![ZERO; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Polynomial::new(c)
    }
}

// ---------------------------------------------------------------------------
// Eigendecomposition
// ---------------------------------------------------------------------------

/// Eigenvalues with an orthonormal basis of eigenvectors (as columns).
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<Scalar>,
    pub basis: Matrix,
}

impl EigenDecomposition {
    /// `B · diag(f(λ)) · B*`.
    pub fn reconstruct_with(&self, f: impl Fn(Scalar) -> Scalar) -> Matrix {
        let d = Matrix::diag(&self.eigenvalues.iter().map(|&l| f(l)).collect::<Vec<_>>());
        &(&self.basis * &d) * &self.basis.adjoint()
    }

    pub fn reconstruct(&self) -> Matrix {
        self.reconstruct_with(|l| l)
    }

    /// Real parts of the eigenvalues (exact for self-adjoint input).
    pub fn real_eigenvalues(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|l| l.re).collect()
    }
}

const SELF_ADJOINT_TOL: f64 = 1e-10;
const JACOBI_TOL: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 100;

/// Eigendecomposition of a self-adjoint matrix by cyclic Jacobi rotations.
///
/// Sweeps visit pivots in row-major order until the off-diagonal Frobenius
/// mass is at most `1e-12 · ‖A‖_HS`. Eigenvalues are sorted ascending.
pub fn eigh(a: &Matrix) -> Result<EigenDecomposition> {
    a.require_square()?;
    let n = a.rows();
    let hs = a.hs_norm();
    let residual = a.self_adjoint_residual();
    if residual > SELF_ADJOINT_TOL * hs {
        return Err(Error::NotSelfAdjoint { residual });
    }
    let sym = (a + &a.adjoint()).scale_real(0.5);
    let mut w: Vec<Scalar> = sym.entries().to_vec();
    let mut v: Vec<Scalar> = Matrix::identity(n, a.field()).entries().to_vec();
    let tol = JACOBI_TOL * hs;

    let off_mass = |w: &[Scalar]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += w[i * n + j].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut converged = off_mass(&w) <= tol;
    let mut sweeps = 0;
    while !converged && sweeps < JACOBI_MAX_SWEEPS {
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut w, &mut v, n, p, q);
            }
        }
        sweeps += 1;
        converged = off_mass(&w) <= tol;
    }
    if !converged {
        return Err(Error::DidNotConverge {
            what: "Jacobi eigenvalue sweeps",
            residual: off_mass(&w),
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        w[i * n + i]
            .re
            .partial_cmp(&w[j * n + j].re)
            .unwrap_or(Ordering::Equal)
    });
    let eigenvalues: Vec<Scalar> = order
        .iter()
        .map(|&i| Complex64::new(w[i * n + i].re, 0.0))
        .collect();
    let mut basis = vec![ZERO; n * n];
    for (new_j, &old_j) in order.iter().enumerate() {
        for i in 0..n {
            basis[i * n + new_j] = v[i * n + old_j];
        }
    }
    if a.field() == Field::Real {
        for z in &mut basis {
            z.im = 0.0;
        }
    }
    Ok(EigenDecomposition {
        eigenvalues,
        basis: Matrix::new(n, n, a.field(), basis)?,
    })
}

/// One Hermitian Jacobi rotation annihilating entry `(p, q)`.
///
/// With `a_pq = r·u`, `|u| = 1`, the unitary `J = diag(1, ū) · [[c, s], [-s, c]]`
/// makes `(J* A J)_pq = 0`.
fn rotate(w: &mut [Scalar], v: &mut [Scalar], n: usize, p: usize, q: usize) {
    let b = w[p * n + q];
    let r = b.norm();
    if r == 0.0 {
        return;
    }
    let u = b / r;
    let app = w[p * n + p].re;
    let aqq = w[q * n + q].re;
    let tau = (aqq - app) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let jpp = Complex64::new(c, 0.0);
    let jpq = Complex64::new(s, 0.0);
    let jqp = -u.conj() * s;
    let jqq = u.conj() * c;

    // A <- A J
    for k in 0..n {
        let akp = w[k * n + p];
        let akq = w[k * n + q];
        w[k * n + p] = akp * jpp + akq * jqp;
        w[k * n + q] = akp * jpq + akq * jqq;
    }
    // A <- J* A
    for k in 0..n {
        let apk = w[p * n + k];
        let aqk = w[q * n + k];
        w[p * n + k] = jpp.conj() * apk + jqp.conj() * aqk;
        w[q * n + k] = jpq.conj() * apk + jqq.conj() * aqk;
    }
    w[p * n + q] = ZERO;
    w[q * n + p] = ZERO;
    w[p * n + p].im = 0.0;
    w[q * n + q].im = 0.0;
    // V <- V J
    for k in 0..n {
        let vkp = v[k * n + p];
        let vkq = v[k * n + q];
        v[k * n + p] = vkp * jpp + vkq * jqp;
        v[k * n + q] = vkp * jpq + vkq * jqq;
    }
}

const NORMAL_TOL: f64 = 1e-10;
const CLUSTER_TOL: f64 = 1e-8;

/// Unitary diagonalization of a normal matrix.
///
/// Splits `T = T₁ + i·T₂` into commuting self-adjoint parts, diagonalizes
/// `T₁`, then diagonalizes `T₂` inside each eigenvalue cluster of `T₁`.
/// Real input is treated as complex. Eigenvalues are Rayleigh quotients
/// `v* T v` of the returned basis columns.
pub fn eig_normal(t: &Matrix) -> Result<EigenDecomposition> {
    t.require_square()?;
    let t = t.complexify();
    let n = t.rows();
    let hs = t.hs_norm();
    let ts = t.adjoint();
    let residual = (&(&t * &ts) - &(&ts * &t)).hs_norm();
    if residual > NORMAL_TOL * hs * hs {
        return Err(Error::NotNormal { residual });
    }
    let t1 = (&t + &ts).scale_real(0.5);
    let t2 = (&t - &ts).scale(Complex64::new(0.0, -0.5));
    let e1 = eigh(&t1)?;
    let mu = e1.real_eigenvalues();
    let t1_norm = mu.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let tol = CLUSTER_TOL * t1_norm.max(op_norm_or_hs(&t2));

    let mut columns: Vec<Vector> = Vec::with_capacity(n);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && mu[end] - mu[end - 1] <= tol {
            end += 1;
        }
        let block: Vec<Vector> = (start..end).map(|j| e1.basis.column(j)).collect();
        if block.len() == 1 {
            columns.extend(block);
        } else {
            let c = Matrix::from_columns(&block)?;
            let m = &(&c.adjoint() * &t2) * &c;
            let m = (&m + &m.adjoint()).scale_real(0.5);
            let inner = eigh(&m)?;
            let rotated = &c * &inner.basis;
            columns.extend(rotated.columns());
        }
        start = end;
    }
    let eigenvalues = columns
        .iter()
        .map(|v| dot(&t.apply(v).expect("square"), v))
        .collect();
    Ok(EigenDecomposition {
        eigenvalues,
        basis: Matrix::from_columns(&columns)?,
    })
}

/// `A` self-adjoint with minimum eigenvalue `≥ -1e-10 · ‖A‖_op`.
pub fn is_nonnegative(a: &Matrix) -> Result<bool> {
    let e = eigh(a)?;
    let ev = e.real_eigenvalues();
    let norm = ev.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    Ok(ev.first().copied().unwrap_or(0.0) >= -1e-10 * norm)
}

// ---------------------------------------------------------------------------
// Characteristic polynomial and functional calculus
// ---------------------------------------------------------------------------

/// Monic `det(z·I − A)` by the Faddeev-LeVerrier recursion.
pub fn char_poly(a: &Matrix) -> Result<Polynomial> {
    a.require_square()?;
    let n = a.rows();
    let id = Matrix::identity(n, a.field());
    let mut c = vec![ZERO; n + 1];
    c[n] = ONE;
    let mut m = id.clone();
    for k in 1..=n {
        let am = a * &m;
        c[n - k] = -am.trace()? / k as f64;
        m = &am + &id.scale(c[n - k]);
    }
    Ok(Polynomial { coeffs: c })
}

/// `p(A)` by Horner's rule in the matrix algebra.
pub fn poly_eval(p: &Polynomial, a: &Matrix) -> Result<Matrix> {
    a.require_square()?;
    let n = a.rows();
    let field = p
        .coeffs
        .iter()
        .fold(a.field(), |f, c| if c.im != 0.0 { Field::Complex } else { f });
    let id = Matrix::identity(n, field);
    let mut acc = Matrix::zeros(n, n, field);
    for &c in p.coeffs.iter().rev() {
        acc = &(a * &acc) + &id.scale(c);
    }
    Ok(acc)
}

/// `‖q_A(A)‖_HS / max(1, ‖A‖_op^n)`.
pub fn cayley_hamilton_residual(a: &Matrix) -> Result<f64> {
    let q = char_poly(a)?;
    let qa = poly_eval(&q, a)?;
    let scale = op_norm_or_hs(a).powi(a.rows() as i32).max(1.0);
    Ok(qa.hs_norm() / scale)
}

/// Polynomial of degree `< n` agreeing with `A^m`, from `z^m mod q_A(z)`.
pub fn power_reduce(a: &Matrix, m: usize) -> Result<Polynomial> {
    a.require_square()?;
    let n = a.rows();
    if m < n {
        return Ok(Polynomial::monomial(m));
    }
    let q = char_poly(a)?;
    // Multiply by z and reduce, m times.
    let mut r = vec![ZERO; n];
    r[0] = ONE;
    for _ in 0..m {
        let top = r[n - 1];
        for k in (1..n).rev() {
            r[k] = r[k - 1] - top * q.coeffs[k];
        }
        r[0] = -top * q.coeffs[0];
    }
    Ok(Polynomial::new(r))
}

// ---------------------------------------------------------------------------
// General eigenvalues
// ---------------------------------------------------------------------------

const DURAND_KERNER_MAX_ITER: usize = 500;
const ROOT_CLUSTER_TOL: f64 = 1e-4;

/// Merge radius (relative) for a cluster of `m` roots: an `m`-fold root
/// perturbed at the rounding level `ε` splits by about `ε^(1/m)`.
fn multiple_root_tol(m: usize) -> f64 {
    ROOT_CLUSTER_TOL.max(10.0 * 1e-15f64.powf(1.0 / m as f64))
}

/// Clusters roots, largest multiplicity first: at level `m` (from `n` down
/// to 2), single-linkage groups at radius `multiple_root_tol(m)` with at
/// least `m` members are accepted and removed. Leftovers are singletons.
fn cluster_multiple_roots(z: &[Scalar], scale: f64) -> Vec<Vec<usize>> {
    let mut remaining: Vec<usize> = (0..z.len()).collect();
    let mut out = Vec::new();
    for m in (2..=z.len()).rev() {
        if remaining.len() < m {
            continue;
        }
        let pts: Vec<Scalar> = remaining.iter().map(|&i| z[i]).collect();
        let groups = cluster_roots(&pts, multiple_root_tol(m) * scale);
        let mut taken = vec![false; remaining.len()];
        for g in groups.into_iter().filter(|g| g.len() >= m) {
            for &k in &g {
                taken[k] = true;
            }
            out.push(g.iter().map(|&k| remaining[k]).collect());
        }
        remaining = remaining
            .iter()
            .zip(&taken)
            .filter(|(_, &t)| !t)
            .map(|(&i, _)| i)
            .collect();
    }
    out.extend(remaining.into_iter().map(|i| vec![i]));
    out
}

/// Newton iteration on `p` from `z0`; `None` if it fails to settle.
fn newton_polish(p: &Polynomial, z0: Scalar) -> Option<Scalar> {
    let dp = p.derivative();
    let mut z = z0;
    for _ in 0..50 {
        let d = dp.eval(z);
        if d == ZERO {
            return None;
        }
        let step = p.eval(z) / d;
        z -= step;
        if step.norm() <= 1e-15 * z.norm().max(1.0) {
            return Some(z);
        }
    }
    None
}

/// Eigenvalues of an arbitrary square matrix as roots of its characteristic
/// polynomial (Durand-Kerner, at most 500 iterations).
///
/// Accuracy is conditional: roots within `1e-4` relative of each other
/// (more for larger clusters, matching the `ε^(1/m)` splitting of an
/// `m`-fold root) are treated as one multiple eigenvalue and replaced by
/// their mean, which is well conditioned even when the individual roots are
/// not. Genuinely distinct eigenvalues closer than that are merged. For real input, roots
/// within the same tolerance of the real axis are snapped onto it, since a
/// conjugate pair that close would already have been merged. Results are sorted
/// by real then imaginary part.
pub fn eigenvalues_general(a: &Matrix) -> Result<Vec<Scalar>> {
    let q = char_poly(a)?;
    let n = q.degree();
    let bound = 1.0 + q.coeffs[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let radius = 0.5 * bound;
    let mut z: Vec<Scalar> = (0..n)
        .map(|k| Complex64::from_polar(radius, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64))
        .collect();
    for _ in 0..DURAND_KERNER_MAX_ITER {
        let mut max_step: f64 = 0.0;
        for k in 0..n {
            let mut denom = ONE;
            for j in 0..n {
                if j != k {
                    denom *= z[k] - z[j];
                }
            }
            if denom == ZERO {
                // Coincident iterates; nudge apart.
                z[k] += Complex64::new(1e-8 * bound, 1e-8 * bound);
                max_step = f64::INFINITY;
                continue;
            }
            let step = q.eval(z[k]) / denom;
            z[k] -= step;
            max_step = max_step.max(step.norm() / z[k].norm().max(1.0));
        }
        if max_step <= 1e-15 {
            break;
        }
    }

    let scale = z.iter().map(|r| r.norm()).fold(1.0, f64::max);
    let groups = cluster_multiple_roots(&z, scale);
    let mut out = Vec::with_capacity(n);
    for g in groups {
        let m = g.len();
        let mean = g.iter().map(|&i| z[i]).sum::<Scalar>() / m as f64;
        // An m-fold root is a simple root of the (m-1)-th derivative.
        let mut center = mean;
        if m > 1 {
            let mut p = q.clone();
            for _ in 1..m {
                p = p.derivative();
            }
            if let Some(c) = newton_polish(&p, mean) {
                if (c - mean).norm() <= multiple_root_tol(m) * scale {
                    center = c;
                }
            }
        }
        for _ in 0..m {
            out.push(center);
        }
    }
    if a.field() == Field::Real {
        for r in &mut out {
            if r.im.abs() <= ROOT_CLUSTER_TOL * scale {
                r.im = 0.0;
            }
        }
    }
    out.sort_by(|x, y| {
        x.re.partial_cmp(&y.re)
            .unwrap_or(Ordering::Equal)
            .then(x.im.partial_cmp(&y.im).unwrap_or(Ordering::Equal))
    });
    Ok(out)
}

/// Single-linkage clusters of points within `tol` of each other.
pub(crate) fn cluster_roots(z: &[Scalar], tol: f64) -> Vec<Vec<usize>> {
    let n = z.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn find(label: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while label[r] != r {
            r = label[r];
        }
        label[i] = r;
        r
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (z[i] - z[j]).norm() <= tol {
                let (a, b) = (find(&mut label, i), find(&mut label, j));
                if a != b {
                    label[b] = a;
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut roots: Vec<usize> = Vec::new();
    for i in 0..n {
        let r = find(&mut label, i);
        match roots.iter().position(|&x| x == r) {
            Some(k) => groups[k].push(i),
            None => {
                roots.push(r);
                groups.push(vec![i]);
            }
        }
    }
    groups
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;

    fn c(re: f64, im: f64) -> Scalar {
        Complex64::new(re, im)
    }

    #[test]
    fn eigh_identity_and_diagonal() {
        let e = eigh(&Matrix::identity(3, Field::Real)).unwrap();
        assert_eq!(e.real_eigenvalues(), vec![1.0, 1.0, 1.0]);

        let e = eigh(&Matrix::diag_real(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(e.real_eigenvalues(), vec![1.0, 2.0, 3.0]);
        // Permuted standard basis: column j is ±e_{k} with λ_j = d_k.
        let expected_axis = [1, 2, 0];
        for (j, &k) in expected_axis.iter().enumerate() {
            assert!((e.basis.get(k, j).norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn eigh_two_by_two() {
        // (2-λ)² - 1 = 0 ⇒ λ ∈ {1, 3}
        let e = eigh(&Matrix::from_rows(&[&[2.0, 1.0], &[1.0, 2.0]])).unwrap();
        let ev = e.real_eigenvalues();
        assert!((ev[0] - 1.0).abs() < 1e-14 && (ev[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn eigh_hermitian_reconstruction() {
        let mut rng = sample::rng(7);
        for n in 1..=6 {
            let a = sample::self_adjoint(&mut rng, Field::Complex, n);
            let e = eigh(&a).unwrap();
            assert!(e.reconstruct().dist(&a) <= 1e-9 * a.hs_norm());
            let gram = &e.basis.adjoint() * &e.basis;
            assert!(gram.dist(&Matrix::identity(n, Field::Complex)) < 1e-10);
            for w in e.real_eigenvalues().windows(2) {
                assert!(w[0] <= w[1]);
            }
        }
    }

    #[test]
    fn eigh_rejects_non_self_adjoint() {
        let a = Matrix::from_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(eigh(&a), Err(Error::NotSelfAdjoint { .. })));
    }

    #[test]
    fn eig_normal_examples() {
        let u = Matrix::diag(&[c(0.0, 1.0), c(0.0, -1.0)]);
        let e = eig_normal(&u).unwrap();
        let mut ev = e.eigenvalues.clone();
        ev.sort_by(|a, b| a.im.partial_cmp(&b.im).unwrap());
        assert!((ev[0] - c(0.0, -1.0)).norm() < 1e-14);
        assert!((ev[1] - c(0.0, 1.0)).norm() < 1e-14);

        let s = Matrix::from_rows(&[&[2.0, 1.0], &[1.0, 2.0]]);
        let e = eig_normal(&s).unwrap();
        let h = eigh(&s).unwrap();
        for (a, b) in e.eigenvalues.iter().zip(&h.eigenvalues) {
            assert!((a - b).norm() < 1e-12);
            assert!(a.im.abs() <= 1e-10);
        }

        let mut rng = sample::rng(11);
        for n in 2..=5 {
            let q = sample::unitary(&mut rng, Field::Complex, n);
            let e = eig_normal(&q).unwrap();
            for l in &e.eigenvalues {
                assert!((l.norm() - 1.0).abs() < 1e-9);
            }
            assert!(e.reconstruct().dist(&q) < 1e-9);
        }
    }

    #[test]
    fn eig_normal_rejects_non_normal() {
        let a = Matrix::from_rows(&[&[1.0, 1.0], &[0.0, 1.0]]);
        assert!(matches!(eig_normal(&a), Err(Error::NotNormal { .. })));
    }

    #[test]
    fn char_poly_examples() {
        let z2 = char_poly(&Matrix::zeros(2, 2, Field::Real)).unwrap();
        assert_eq!(z2, Polynomial::real(&[0.0, 0.0, 1.0]));
        let p = char_poly(&Matrix::diag_real(&[1.0, 2.0])).unwrap();
        assert_eq!(p, Polynomial::real(&[2.0, -3.0, 1.0]));
        assert!(char_poly(&Matrix::zeros(2, 3, Field::Real)).is_err());
    }

    #[test]
    fn poly_eval_examples() {
        let a = Matrix::from_rows(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let k = poly_eval(&Polynomial::real(&[2.5]), &a).unwrap();
        assert_eq!(k, Matrix::identity(2, Field::Real).scale_real(2.5));
        let n = Matrix::from_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let sq = poly_eval(&Polynomial::monomial(2), &n).unwrap();
        assert_eq!(sq, Matrix::zeros(2, 2, Field::Real));
    }

    #[test]
    fn cayley_hamilton_examples() {
        assert_eq!(cayley_hamilton_residual(&Matrix::identity(2, Field::Real)).unwrap(), 0.0);
        assert!(cayley_hamilton_residual(&Matrix::diag_real(&[1.0, 2.0, 3.0])).unwrap() <= 1e-12);
    }

    #[test]
    fn power_reduce_examples() {
        let a = sample::real_matrix(&mut sample::rng(3), 3, 3, -1.0, 1.0);
        assert_eq!(power_reduce(&a, 2).unwrap(), Polynomial::monomial(2));
        // Idempotent projection: q(z) = z² - z, so z² ≡ z.
        let p = Matrix::from_rows(&[&[1.0, 0.0], &[0.0, 0.0]]);
        let r = power_reduce(&p, 2).unwrap();
        assert_eq!(r, Polynomial::real(&[0.0, 1.0]));
    }

    #[test]
    fn polynomial_arithmetic() {
        let p = Polynomial::real(&[1.0, 1.0]);
        let q = Polynomial::real(&[-1.0, 1.0]);
        assert_eq!(&p * &q, Polynomial::real(&[-1.0, 0.0, 1.0]));
        assert_eq!(&p + &q, Polynomial::real(&[0.0, 2.0]));
        let r = Polynomial::real(&[1.0, 0.0, 0.0, 1.0]).rem_monic(&Polynomial::real(&[-1.0, 0.0, 1.0]));
        // z³ + 1 = z (z² - 1) + z + 1
        assert_eq!(r, Polynomial::real(&[1.0, 1.0]));
        assert_eq!(p.eval(c(2.0, 0.0)), c(3.0, 0.0));
    }

    #[test]
    fn general_eigenvalues() {
        let ev = eigenvalues_general(&Matrix::diag_real(&[-1.0, -2.0])).unwrap();
        assert!((ev[0] - c(-2.0, 0.0)).norm() < 1e-12);
        assert!((ev[1] - c(-1.0, 0.0)).norm() < 1e-12);

        let ev = eigenvalues_general(&Matrix::identity(2, Field::Real).scale_real(-1.0)).unwrap();
        for l in ev {
            assert!((l - c(-1.0, 0.0)).norm() < 1e-10);
        }
        let rot = Matrix::from_rows(&[&[0.0, -1.0], &[1.0, 0.0]]);
        let ev = eigenvalues_general(&rot).unwrap();
        assert!((ev[0] - c(0.0, -1.0)).norm() < 1e-12);
        assert!((ev[1] - c(0.0, 1.0)).norm() < 1e-12);
        let ev = eigenvalues_general(&Matrix::identity(4, Field::Real)).unwrap();
        for l in ev {
            assert!((l - ONE).norm() < 1e-10);
        }
    }
}
