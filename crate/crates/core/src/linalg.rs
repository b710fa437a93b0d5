//! Dense real/complex matrices and vectors.
//!
//! Storage is row-major: `data[i * cols + j]` holds entry `(i, j)`. Every
//! entry is a [`Scalar`] (a `Complex64`); a [`Field::Real`] matrix keeps all
//! imaginary parts at exactly zero, so real and complex inputs share one
//! code path. Operators (`+`, `-`, `*`) panic on shape mismatch; the named
//! functions return [`Result`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub type Scalar = Complex64;

pub(crate) const ZERO: Scalar = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Scalar = Complex64::new(1.0, 0.0);

/// Real numbers or complex numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    Real,
    Complex,
}

impl Field {
    /// The smallest field containing both operands.
    pub fn join(self, other: Field) -> Field {
        if self == Field::Complex || other == Field::Complex {
            Field::Complex
        } else {
            Field::Real
        }
    }

    fn of_scalar(z: Scalar) -> Field {
        if z.im == 0.0 {
            Field::Real
        } else {
            Field::Complex
        }
    }
}

fn clean(field: Field, mut data: Vec<Scalar>) -> Vec<Scalar> {
    if field == Field::Real {
        for z in &mut data {
            z.im = 0.0;
        }
    }
    data
}

// ---------------------------------------------------------------------------
// Vector
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub struct Vector {
    field: Field,
    data: Vec<Scalar>,
}

impl Vector {
    pub fn new(field: Field, data: Vec<Scalar>) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::InvalidData("vector must have positive dimension".into()));
        }
        if field == Field::Real && data.iter().any(|z| z.im != 0.0) {
            return Err(Error::InvalidData(
                "real vector has a nonzero imaginary part".into(),
            ));
        }
        Ok(Self { field, data })
    }

    /// Panics if `xs` is empty.
    pub fn real(xs: &[f64]) -> Self {
        assert!(!xs.is_empty(), "vector must have positive dimension");
        Self {
            field: Field::Real,
            data: xs.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        }
    }

    /// Panics if `zs` is empty.
    pub fn complex(zs: &[Scalar]) -> Self {
        assert!(!zs.is_empty(), "vector must have positive dimension");
        Self {
            field: Field::Complex,
            data: zs.to_vec(),
        }
    }

    pub fn zeros(dim: usize, field: Field) -> Self {
        assert!(dim > 0, "vector must have positive dimension");
        Self {
            field,
            data: vec![ZERO; dim],
        }
    }

    /// The `i`-th standard basis vector.
    pub fn unit(dim: usize, i: usize, field: Field) -> Self {
        let mut v = Self::zeros(dim, field);
        v.data[i] = ONE;
        v
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn get(&self, i: usize) -> Scalar {
        self.data[i]
    }

    /// Real parts of the entries.
    pub fn to_real(&self) -> Vec<f64> {
        self.data.iter().map(|z| z.re).collect()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, s: Scalar) -> Vector {
        let field = self.field.join(Field::of_scalar(s));
        Vector {
            field,
            data: clean(field, self.data.iter().map(|z| z * s).collect()),
        }
    }

    pub fn conj(&self) -> Vector {
        Vector {
            field: self.field,
            data: clean(self.field, self.data.iter().map(|z| z.conj()).collect()),
        }
    }

    pub fn complexify(&self) -> Vector {
        Vector {
            field: Field::Complex,
            data: self.data.clone(),
        }
    }

    /// Interleaved `(re, im)` coordinates in `R^{2n}`.
    pub fn realify(&self) -> Vector {
        let mut out = Vec::with_capacity(2 * self.dim());
        for z in &self.data {
            out.push(z.re);
            out.push(z.im);
        }
        Vector::real(&out)
    }

    /// Inverse of [`Vector::realify`]; panics on odd dimension.
    pub fn from_realified(v: &Vector) -> Vector {
        assert!(v.dim().is_multiple_of(2), "realified vector must have even dimension");
        let zs: Vec<Scalar> = v
            .data
            .chunks(2)
            .map(|c| Complex64::new(c[0].re, c[1].re))
            .collect();
        Vector::complex(&zs)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Vector) -> f64 {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    fn zip_with(&self, other: &Vector, f: impl Fn(Scalar, Scalar) -> Scalar) -> Vector {
        assert_eq!(self.dim(), other.dim(), "vector dimension mismatch");
        let field = self.field.join(other.field);
        Vector {
            field,
            data: clean(
                field,
                self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
            ),
        }
    }
}

impl Add for &Vector {
    type Output = Vector;
    fn add(self, rhs: &Vector) -> Vector {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &Vector {
    type Output = Vector;
    fn sub(self, rhs: &Vector) -> Vector {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul<f64> for &Vector {
    type Output = Vector;
    fn mul(self, rhs: f64) -> Vector {
        self.scale(Complex64::new(rhs, 0.0))
    }
}

// ---------------------------------------------------------------------------
// Matrix
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    field: Field,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, field: Field, data: Vec<Scalar>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidData(format!(
                "matrix shape must be positive, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::InvalidData(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                data.len()
            )));
        }
        if field == Field::Real && data.iter().any(|z| z.im != 0.0) {
            return Err(Error::InvalidData(
                "real matrix has a nonzero imaginary part".into(),
            ));
        }
        Ok(Self {
            rows,
            cols,
            field,
            data,
        })
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::new(
            rows,
            cols,
            Field::Real,
            data.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    /// Real matrix from row slices. Panics on ragged or empty input.
    pub fn from_rows(rows: &[&[f64]]) -> Self {
        assert!(!rows.is_empty() && !rows[0].is_empty(), "empty matrix");
        let cols = rows[0].len();
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let data: Vec<f64> = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Self::from_real(rows.len(), cols, &data).expect("shape checked")
    }

    /// Complex matrix from row slices. Panics on ragged or empty input.
    pub fn from_complex_rows(rows: &[&[Scalar]]) -> Self {
        assert!(!rows.is_empty() && !rows[0].is_empty(), "empty matrix");
        let cols = rows[0].len();
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let data: Vec<Scalar> = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Self::new(rows.len(), cols, Field::Complex, data).expect("shape checked")
    }

    pub fn zeros(rows: usize, cols: usize, field: Field) -> Self {
        assert!(rows > 0 && cols > 0, "matrix shape must be positive");
        Self {
            rows,
            cols,
            field,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize, field: Field) -> Self {
        let mut m = Self::zeros(n, n, field);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    pub fn diag_real(d: &[f64]) -> Self {
        let n = d.len();
        let mut m = Self::zeros(n, n, Field::Real);
        for (i, &x) in d.iter().enumerate() {
            m.data[i * n + i] = Complex64::new(x, 0.0);
        }
        m
    }

    pub fn diag(d: &[Scalar]) -> Self {
        let n = d.len();
        let field = d
            .iter()
            .fold(Field::Real, |f, &z| f.join(Field::of_scalar(z)));
        let mut m = Self::zeros(n, n, field);
        for (i, &z) in d.iter().enumerate() {
            m.data[i * n + i] = z;
        }
        m
    }

    /// Matrix whose columns are `cols`.
    pub fn from_columns(cols: &[Vector]) -> Result<Self> {
        let first = cols
            .first()
            .ok_or_else(|| Error::InvalidData("no columns".into()))?;
        let rows = first.dim();
        let field = cols.iter().fold(Field::Real, |f, v| f.join(v.field));
        let mut m = Self::zeros(rows, cols.len(), field);
        for (j, c) in cols.iter().enumerate() {
            if c.dim() != rows {
                return Err(Error::DimensionMismatch {
                    expected: rows.to_string(),
                    got: c.dim().to_string(),
                });
            }
            for i in 0..rows {
                m.data[i * cols.len() + j] = c.data[i];
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.data[i * self.cols + j]
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vector {
        Vector {
            field: self.field,
            data: (0..self.rows).map(|i| self.get(i, j)).collect(),
        }
    }

    pub fn columns(&self) -> Vec<Vector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    /// Entrywise map; the result field is inferred from the output.
    pub fn map(&self, f: impl Fn(Scalar) -> Scalar) -> Matrix {
        let data: Vec<Scalar> = self.data.iter().map(|&z| f(z)).collect();
        let field = if self.field == Field::Real && data.iter().all(|z| z.im == 0.0) {
            Field::Real
        } else {
            Field::Complex
        };
        Matrix {
            rows: self.rows,
            cols: self.cols,
            field,
            data,
        }
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows, self.field);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.get(i, j);
            }
        }
        out
    }

    /// Conjugate transpose (plain transpose for real matrices).
    pub fn adjoint(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows, self.field);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.get(i, j).conj();
            }
        }
        out.data = clean(self.field, out.data);
        out
    }

    pub fn conj(&self) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            data: clean(self.field, self.data.iter().map(|z| z.conj()).collect()),
        }
    }

    /// The same entries regarded as a complex matrix.
    pub fn complexify(&self) -> Matrix {
        Matrix {
            field: Field::Complex,
            ..self.clone()
        }
    }

    /// The real-linear map on `R^{2m} -> R^{2n}` induced by a complex `n x m`
    /// matrix, using interleaved `(re, im)` coordinates.
    pub fn realify(&self) -> Matrix {
        let (r, c) = (2 * self.rows, 2 * self.cols);
        let mut out = Matrix::zeros(r, c, Field::Real);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let z = self.get(i, j);
                out.data[(2 * i) * c + 2 * j] = Complex64::new(z.re, 0.0);
                out.data[(2 * i) * c + 2 * j + 1] = Complex64::new(-z.im, 0.0);
                out.data[(2 * i + 1) * c + 2 * j] = Complex64::new(z.im, 0.0);
                out.data[(2 * i + 1) * c + 2 * j + 1] = Complex64::new(z.re, 0.0);
            }
        }
        out
    }

    /// Real part as a real matrix.
    pub fn real_part(&self) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            field: Field::Real,
            data: self.data.iter().map(|z| Complex64::new(z.re, 0.0)).collect(),
        }
    }

    /// Largest modulus of an imaginary part.
    pub fn max_imag(&self) -> f64 {
        self.data.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    pub fn scale(&self, s: Scalar) -> Matrix {
        let field = self.field.join(Field::of_scalar(s));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            field,
            data: clean(field, self.data.iter().map(|z| z * s).collect()),
        }
    }

    pub fn scale_real(&self, s: f64) -> Matrix {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: format!("{} rows", self.cols),
                got: format!("{}x{}", other.rows, other.cols),
            });
        }
        let field = self.field.join(other.field);
        let mut data = vec![ZERO; self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                let out = &mut data[i * other.cols..(i + 1) * other.cols];
                for (o, b) in out.iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
        Ok(Matrix {
            rows: self.rows,
            cols: other.cols,
            field,
            data: clean(field, data),
        })
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &Vector) -> Result<Vector> {
        if self.cols != v.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.cols.to_string(),
                got: v.dim().to_string(),
            });
        }
        let field = self.field.join(v.field);
        let data = (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(&v.data)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect();
        Ok(Vector {
            field,
            data: clean(field, data),
        })
    }

    pub fn trace(&self) -> Result<Scalar> {
        self.require_square()?;
        Ok((0..self.rows).map(|i| self.get(i, i)).sum())
    }

    pub fn hs_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Hilbert-Schmidt distance to `other`.
    pub fn dist(&self, other: &Matrix) -> f64 {
        (self - other).hs_norm()
    }

    /// `‖A - A*‖_HS`.
    pub fn self_adjoint_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.dist(&self.adjoint())
    }

    /// Integer power by repeated squaring; `m = 0` gives the identity.
    pub fn powi(&self, m: u32) -> Result<Matrix> {
        self.require_square()?;
        let mut result = Matrix::identity(self.rows, self.field);
        let mut base = self.clone();
        let mut e = m;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(result)
    }

    pub(crate) fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    /// LU factorization with partial pivoting, or `None` if a pivot is exactly zero.
    fn lu(&self) -> Option<Lu> {
        let n = self.rows;
        let mut a = self.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, a[i * n + k].norm()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pmax == 0.0 {
                return None;
            }
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let pivot = a[k * n + k];
            for i in (k + 1)..n {
                let factor = a[i * n + k] / pivot;
                a[i * n + k] = factor;
                if factor == ZERO {
                    continue;
                }
                for j in (k + 1)..n {
                    let akj = a[k * n + j];
                    a[i * n + j] -= factor * akj;
                }
            }
        }
        Some(Lu { n, a, perm, sign })
    }

    /// Determinant by LU with partial pivoting.
    pub fn det(&self) -> Result<Scalar> {
        self.require_square()?;
        let det = match self.lu() {
            None => ZERO,
            Some(lu) => {
                let prod: Scalar = (0..lu.n).map(|i| lu.a[i * lu.n + i]).product();
                prod * lu.sign
            }
        };
        Ok(if self.field == Field::Real {
            Complex64::new(det.re, 0.0)
        } else {
            det
        })
    }

    pub fn inverse(&self) -> Result<Matrix> {
        self.require_square()?;
        let n = self.rows;
        let lu = self.lu().ok_or(Error::Singular {
            condition: f64::INFINITY,
        })?;
        let mut out = Matrix::zeros(n, n, self.field);
        for j in 0..n {
            // Solve L U x = P e_j.
            let mut x = vec![ZERO; n];
            for i in 0..n {
                let mut s = if lu.perm[i] == j { ONE } else { ZERO };
                for k in 0..i {
                    s -= lu.a[i * n + k] * x[k];
                }
                x[i] = s;
            }
            for i in (0..n).rev() {
                let mut s = x[i];
                for k in (i + 1)..n {
                    s -= lu.a[i * n + k] * x[k];
                }
                x[i] = s / lu.a[i * n + i];
            }
            for i in 0..n {
                out.data[i * n + j] = x[i];
            }
        }
        out.data = clean(self.field, out.data);
        Ok(out)
    }

    /// `‖A‖_HS · ‖A⁻¹‖_HS / n`, infinite when singular. Always ≥ 1.
    pub fn condition_estimate(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        match self.inverse() {
            Ok(inv) => {
                let c = self.hs_norm() * inv.hs_norm() / self.rows as f64;
                if c.is_finite() {
                    c
                } else {
                    f64::INFINITY
                }
            }
            Err(_) => f64::INFINITY,
        }
    }

    /// Inverse, failing when the condition estimate exceeds `max_condition`.
    pub fn checked_inverse(&self, max_condition: f64) -> Result<Matrix> {
        self.require_square()?;
        let inv = self.inverse()?;
        let c = self.hs_norm() * inv.hs_norm() / self.rows as f64;
        if !c.is_finite() || c > max_condition {
            return Err(Error::Singular { condition: c });
        }
        Ok(inv)
    }

    fn zip_with(&self, other: &Matrix, f: impl Fn(Scalar, Scalar) -> Scalar) -> Matrix {
        assert_eq!(self.shape(), other.shape(), "matrix shape mismatch");
        let field = self.field.join(other.field);
        Matrix {
            rows: self.rows,
            cols: self.cols,
            field,
            data: clean(
                field,
                self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
            ),
        }
    }
}

struct Lu {
    n: usize,
    a: Vec<Scalar>,
    perm: Vec<usize>,
    sign: f64,
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        self.scale_real(-1.0)
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.matmul(rhs).expect("matrix shape mismatch in product")
    }
}

impl Mul<f64> for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: f64) -> Matrix {
        self.scale_real(rhs)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| {
                    let z = self.get(i, j);
                    match self.field {
                        Field::Real => format!("{:>12.6}", z.re),
                        Field::Complex => format!("{:>10.4}{:+.4}i", z.re, z.im),
                    }
                })
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Named operations
// ---------------------------------------------------------------------------

/// `⟨v, w⟩ = Σ v_j · conj(w_j)`; linear in the first slot.
pub fn inner_product(v: &Vector, w: &Vector) -> Result<Scalar> {
    if v.dim() != w.dim() {
        return Err(Error::DimensionMismatch {
            expected: v.dim().to_string(),
            got: w.dim().to_string(),
        });
    }
    if v.field != w.field {
        return Err(Error::FieldMismatch);
    }
    Ok(v.data.iter().zip(&w.data).map(|(a, b)| a * b.conj()).sum())
}

/// Inner product that promotes mixed fields instead of rejecting them.
pub(crate) fn dot(v: &Vector, w: &Vector) -> Scalar {
    v.data.iter().zip(&w.data).map(|(a, b)| a * b.conj()).sum()
}

pub fn adjoint(t: &Matrix) -> Matrix {
    t.adjoint()
}

pub fn trace(t: &Matrix) -> Result<Scalar> {
    t.trace()
}

pub fn det(t: &Matrix) -> Result<Scalar> {
    t.det()
}

pub fn hs_norm(t: &Matrix) -> f64 {
    t.hs_norm()
}

const POWER_ITERATION_TOL: f64 = 1e-12;
const POWER_ITERATION_MAX: usize = 10_000;

/// Operator norm `max |T v| / |v|` by power iteration on `T*T`.
///
/// The start vector is all-ones plus a fixed-seed perturbation. Fails with
/// [`Error::NoConvergence`] (bracket `[current estimate, ‖T‖_HS]`) if the
/// Rayleigh quotient has not settled to relative change 1e-12 after 10 000
/// iterations.
pub fn op_norm(t: &Matrix) -> Result<f64> {
    let hs = t.hs_norm();
    if hs == 0.0 {
        return Ok(0.0);
    }
    // Scale to unit HS norm so the Rayleigh quotient stays O(1).
    let ts = t.scale_real(1.0 / hs);
    let m = &ts.adjoint() * &ts;
    let n = m.rows;
    let mut rng = ChaCha8Rng::seed_from_u64(0x6f70_6e6f_726d);
    let start: Vec<Scalar> = (0..n)
        .map(|_| Complex64::new(1.0 + 0.1 * rng.gen_range(-1.0..1.0), 0.0))
        .collect();
    let mut x = Vector {
        field: m.field,
        data: start,
    };
    x = &x * (1.0 / x.norm());
    let mut rho_prev = f64::NAN;
    for _ in 0..POWER_ITERATION_MAX {
        let y = m.apply(&x).expect("square");
        let rho = dot(&y, &x).re;
        let ny = y.norm();
        if ny == 0.0 {
            // Start vector fell in the kernel; T*T is nonzero so restart on a basis vector.
            x = Vector::unit(n, 0, m.field);
            continue;
        }
        if (rho - rho_prev).abs() <= POWER_ITERATION_TOL * rho {
            return Ok(hs * rho.max(0.0).sqrt());
        }
        rho_prev = rho;
        x = &y * (1.0 / ny);
    }
    Err(Error::NoConvergence {
        what: "operator-norm power iteration",
        lower: hs * rho_prev.max(0.0).sqrt(),
        upper: hs,
    })
}

/// Operator norm, falling back to the Hilbert-Schmidt upper bound when
/// power iteration stalls.
pub(crate) fn op_norm_or_hs(t: &Matrix) -> f64 {
    op_norm(t).unwrap_or_else(|_| t.hs_norm())
}

const RANK_TOL: f64 = 1e-10;

/// Orthonormalizes `vs`, dropping vectors whose residual after projection is
/// at most `1e-10 · max |v|`. Two passes of modified Gram-Schmidt per vector.
pub fn gram_schmidt(vs: &[Vector]) -> Result<Vec<Vector>> {
    let first = vs
        .first()
        .ok_or_else(|| Error::InvalidArgument("gram_schmidt needs at least one vector".into()))?;
    for v in vs {
        if v.dim() != first.dim() {
            return Err(Error::DimensionMismatch {
                expected: first.dim().to_string(),
                got: v.dim().to_string(),
            });
        }
        if v.field != first.field {
            return Err(Error::FieldMismatch);
        }
    }
    let max_norm = vs.iter().map(Vector::norm).fold(0.0, f64::max);
    let mut out: Vec<Vector> = Vec::new();
    if max_norm == 0.0 {
        return Ok(out);
    }
    let tol = RANK_TOL * max_norm;
    for v in vs {
        let mut w = v.clone();
        for _ in 0..2 {
            for q in &out {
                let c = dot(&w, q);
                w = &w - &q.scale(c);
            }
        }
        let nw = w.norm();
        if nw > tol {
            out.push(&w * (1.0 / nw));
        }
    }
    Ok(out)
}

/// Largest deviation of the Gram matrix of `basis` from the identity.
pub fn orthonormality_residual(basis: &[Vector]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, a) in basis.iter().enumerate() {
        for (j, b) in basis.iter().enumerate() {
            let target = if i == j { ONE } else { ZERO };
            worst = worst.max((dot(a, b) - target).norm());
        }
    }
    worst
}

/// `u' = Σ ⟨u, v_j⟩ v_j` for an orthonormal `basis`.
pub fn orthogonal_projection(basis: &[Vector], u: &Vector) -> Result<Vector> {
    for v in basis {
        if v.dim() != u.dim() {
            return Err(Error::DimensionMismatch {
                expected: u.dim().to_string(),
                got: v.dim().to_string(),
            });
        }
        if v.field != u.field {
            return Err(Error::FieldMismatch);
        }
    }
    let residual = orthonormality_residual(basis);
    if residual > RANK_TOL {
        return Err(Error::NotOrthonormal { residual });
    }
    let mut out = Vector::zeros(u.dim(), u.field);
    for v in basis {
        out = &out + &v.scale(dot(u, v));
    }
    Ok(out)
}

/// `A B - B A`.
pub fn commutator(a: &Matrix, b: &Matrix) -> Matrix {
    &(a * b) - &(b * a)
}

// ---------------------------------------------------------------------------
// Permutation-sum determinant
// ---------------------------------------------------------------------------

/// Sign of a permutation of `0..n`, from its cycle decomposition:
/// parity is `n - #cycles (mod 2)`.
pub fn permutation_sign(perm: &[usize]) -> i32 {
    let n = perm.len();
    let mut seen = vec![false; n];
    let mut cycles = 0;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        cycles += 1;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
        }
    }
    if (n - cycles).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        out.push(p.clone());
        // Next lexicographic permutation.
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).expect("exists");
        p.swap(i - 1, j);
        p[i..].reverse();
    }
    out
}

/// `Σ_π sign(π) Π_j a_{j, π(j)}`. Factorial cost; intended for `n ≤ 8`.
pub fn det_permutation_sum(t: &Matrix) -> Result<Scalar> {
    t.require_square()?;
    let n = t.rows;
    let mut total = ZERO;
    for p in permutations(n) {
        let term: Scalar = (0..n).map(|j| t.get(j, p[j])).product();
        total += term * permutation_sign(&p) as f64;
    }
    Ok(total)
}
