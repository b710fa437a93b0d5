//! Projective spaces, Grassmannians and homogeneous maps of the projective line.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{gram_schmidt, inner_product, Field, Matrix, Scalar, Vector, ONE, ZERO};
use crate::manifolds::MAX_CONDITION;

/// Two normalized representatives closer than this (max-abs) are equal.
pub const POINT_TOL: f64 = 1e-12;
/// Grassmann points are equal when their projectors are this close (HS).
pub const GRASS_TOL: f64 = 1e-9;
const PIVOT_SLACK: f64 = 1e-10;
const CHART_TOL: f64 = 1e-12;

// ---------------------------------------------------------------------------
// Projective points
// ---------------------------------------------------------------------------

/// A line through the origin, stored as a unit vector whose pivot (the
/// first component of near-maximal modulus) is real and positive.
#[derive(Debug, Clone)]
pub struct ProjPoint {
    rep: Vector,
}

impl PartialEq for ProjPoint {
    fn eq(&self, other: &Self) -> bool {
        self.rep.dim() == other.rep.dim() && self.distance(other) <= POINT_TOL
    }
}

/// Index of the first component within `1 − 1e-10` of the largest modulus.
/// The slack makes the choice stable under rescaling of the vector.
fn pivot(v: &Vector) -> usize {
    let max = v.entries().iter().map(|z| z.norm()).fold(0.0, f64::max);
    v.entries()
        .iter()
        .position(|z| z.norm() >= (1.0 - PIVOT_SLACK) * max)
        .unwrap_or(0)
}

impl ProjPoint {
    /// The line through `v`.
    pub fn from_vector(v: &Vector) -> Result<Self> {
        let scale = v.entries().iter().map(|z| z.norm()).fold(0.0, f64::max);
        if scale == 0.0 || !scale.is_finite() {
            return Err(Error::ZeroVector);
        }
        // Pre-scale by the max entry so the norm cannot overflow.
        let v = v.scale(Complex64::new(1.0 / scale, 0.0));
        let u = v.scale(Complex64::new(1.0 / v.norm(), 0.0));
        let p = u.get(pivot(&u));
        let phase = p.conj() / p.norm();
        let rep = match u.field() {
            Field::Real => u.scale(Complex64::new(phase.re.signum(), 0.0)),
            Field::Complex => u.scale(phase),
        };
        Ok(ProjPoint { rep })
    }

    pub fn rep(&self) -> &Vector {
        &self.rep
    }

    /// Dimension of the ambient vector space (`n + 1` for `Pⁿ`).
    pub fn ambient_dim(&self) -> usize {
        self.rep.dim()
    }

    pub fn field(&self) -> Field {
        self.rep.field()
    }

    /// Max-abs distance between normalized representatives.
    pub fn distance(&self, other: &ProjPoint) -> f64 {
        self.rep.max_abs_diff(&other.rep)
    }

    /// Gauge-free distance `‖vv* − ww*‖_HS` between the lines.
    pub fn line_distance(&self, other: &ProjPoint) -> f64 {
        let o = inner_product(&self.rep, &other.rep).map(|z| z.norm()).unwrap_or(0.0);
        (2.0 * (1.0 - o * o).max(0.0)).sqrt()
    }

    /// The chart with the largest `|rep_j|` (at least `1/√(n+1)`).
    pub fn best_chart(&self) -> usize {
        pivot(&self.rep)
    }
}

pub fn proj_from(v: &Vector) -> Result<ProjPoint> {
    ProjPoint::from_vector(v)
}

/// The point `[x_0 : … : 1 : … : x_{n−1}]` with the 1 inserted at slot `j`
/// (0-based).
pub fn affine_chart(j: usize, x: &Vector) -> Result<ProjPoint> {
    if j > x.dim() {
        return Err(Error::InvalidArgument(format!(
            "chart index {j} out of range for {} coordinates",
            x.dim()
        )));
    }
    let mut data = x.entries().to_vec();
    data.insert(j, ONE);
    ProjPoint::from_vector(&Vector::new(x.field(), data)?)
}

/// Inverse of [`affine_chart`]: divide by `rep_j` and drop slot `j`.
pub fn chart_extract(j: usize, p: &ProjPoint) -> Result<Vector> {
    if j >= p.ambient_dim() {
        return Err(Error::InvalidArgument(format!("chart index {j} out of range")));
    }
    let d = p.rep.get(j);
    if d.norm() <= CHART_TOL {
        return Err(Error::NotInChart { chart: j });
    }
    let data: Vec<Scalar> = p
        .rep
        .entries()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != j)
        .map(|(_, &z)| z / d)
        .collect();
    Vector::new(p.field(), data)
}

/// The induced map `Â([v]) = [Av]`.
pub fn apply_projective(a: &Matrix, p: &ProjPoint) -> Result<ProjPoint> {
    a.checked_inverse(MAX_CONDITION)?;
    ProjPoint::from_vector(&a.apply(&p.rep)?)
}

/// Orthonormal (unitary) basis whose first column is `v`.
fn completed_basis(v: &Vector, field: Field) -> Result<Matrix> {
    let n = v.dim();
    let mut vs = vec![v.clone()];
    vs.extend((0..n).map(|i| Vector::unit(n, i, field)));
    Matrix::from_columns(&gram_schmidt(&vs)?)
}

/// A unitary (orthogonal for real points) `A` with `Â(P) = Q`, built from
/// orthonormal completions of the two representatives.
pub fn projective_transport(p: &ProjPoint, q: &ProjPoint) -> Result<Matrix> {
    if p.ambient_dim() != q.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: p.ambient_dim().to_string(),
            got: q.ambient_dim().to_string(),
        });
    }
    let field = p.field().join(q.field());
    let bp = completed_basis(&p.rep, field)?;
    let bq = completed_basis(&q.rep, field)?;
    Ok(&bq * &bp.adjoint())
}

// ---------------------------------------------------------------------------
// Grassmannians
// ---------------------------------------------------------------------------

/// A `k`-dimensional subspace of an `n`-dimensional space.
#[derive(Debug, Clone)]
pub struct GrassPoint {
    n: usize,
    field: Field,
    basis: Vec<Vector>,
    projector: Matrix,
}

impl PartialEq for GrassPoint {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.projector.dist(&other.projector) <= GRASS_TOL
    }
}

impl GrassPoint {
    /// The span of linearly independent vectors in dimension `n`.
    pub fn new(n: usize, vectors: &[Vector]) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.dim() != n) {
            return Err(Error::DimensionMismatch {
                expected: n.to_string(),
                got: v.dim().to_string(),
            });
        }
        let field = vectors.iter().fold(Field::Real, |f, v| f.join(v.field()));
        let basis = if vectors.is_empty() {
            Vec::new()
        } else {
            gram_schmidt(vectors)?
        };
        if basis.len() != vectors.len() {
            return Err(Error::LinearlyDependent {
                rank: basis.len(),
                expected: vectors.len(),
            });
        }
        Ok(GrassPoint::from_orthonormal(n, field, basis))
    }

    fn from_orthonormal(n: usize, field: Field, basis: Vec<Vector>) -> Self {
        let mut projector = Matrix::zeros(n, n, field);
        if !basis.is_empty() {
            let b = Matrix::from_columns(&basis).expect("consistent columns");
            projector = &b * &b.adjoint();
            projector = (&projector + &projector.adjoint()).scale_real(0.5);
        }
        GrassPoint {
            n,
            field,
            basis,
            projector,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Orthonormal basis.
    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn projector(&self) -> &Matrix {
        &self.projector
    }

    pub fn basis_matrix(&self) -> Option<Matrix> {
        (!self.basis.is_empty()).then(|| Matrix::from_columns(&self.basis).expect("consistent columns"))
    }

    /// `‖(I − P)v‖`, zero exactly for `v` in the subspace.
    pub fn distance_to(&self, v: &Vector) -> Result<f64> {
        let pv = self.projector.apply(v)?;
        Ok((v - &pv).norm())
    }

    /// Image `T(L)` under an invertible map.
    pub fn image(&self, t: &Matrix) -> Result<GrassPoint> {
        t.checked_inverse(MAX_CONDITION)?;
        let vs = self.basis.iter().map(|v| t.apply(v)).collect::<Result<Vec<_>>>()?;
        GrassPoint::new(self.n, &vs)
    }
}

pub fn grass_from(n: usize, vectors: &[Vector]) -> Result<GrassPoint> {
    GrassPoint::new(n, vectors)
}

fn stacked(l: &GrassPoint, m: &GrassPoint) -> Result<Matrix> {
    if l.n != m.n || l.dim() + m.dim() != l.n {
        return Err(Error::NotComplementary {
            condition: f64::INFINITY,
        });
    }
    let mut cols = l.basis.clone();
    cols.extend(m.basis.iter().cloned());
    let s = Matrix::from_columns(&cols)?;
    let condition = s.condition_estimate();
    if condition > 1e9 {
        return Err(Error::NotComplementary { condition });
    }
    Ok(s)
}

/// Graph chart around `L` with complement `M`: the span of
/// `ℓ_i + Σ_j A_{ji} m_j` for an `(n−k)×k` matrix `A`.
pub fn graph_chart(l: &GrassPoint, m: &GrassPoint, a: &Matrix) -> Result<GrassPoint> {
    stacked(l, m)?;
    let k = l.dim();
    if a.shape() != (m.dim(), k) {
        return Err(Error::DimensionMismatch {
            expected: format!("({}, {k})", m.dim()),
            got: format!("{:?}", a.shape()),
        });
    }
    let vs: Vec<Vector> = (0..k)
        .map(|i| {
            m.basis
                .iter()
                .enumerate()
                .fold(l.basis[i].complexify(), |acc, (j, mj)| &acc + &mj.scale(a.get(j, i)))
        })
        .collect();
    let field = l.field.join(m.field).join(a.field());
    let vs: Vec<Vector> = match field {
        Field::Real => vs.iter().map(|v| Vector::real(&v.to_real())).collect(),
        Field::Complex => vs,
    };
    GrassPoint::new(l.n, &vs)
}

/// Inverse of [`graph_chart`]: the matrix `A` whose graph is `P`.
/// Fails with `NotInChart` when `P` meets `M` nontrivially.
pub fn graph_chart_coords(l: &GrassPoint, m: &GrassPoint, p: &GrassPoint) -> Result<Matrix> {
    let s = stacked(l, m)?;
    let k = l.dim();
    if p.dim() != k || p.n != l.n {
        return Err(Error::DimensionMismatch {
            expected: format!("{k}-plane in dimension {}", l.n),
            got: format!("{}-plane in dimension {}", p.dim(), p.n),
        });
    }
    if k == 0 {
        return Matrix::new(m.dim(), 0, Field::Real, vec![]);
    }
    let c = &s.inverse()? * &p.basis_matrix().expect("k > 0");
    let n = l.n;
    let pick = |rows: std::ops::Range<usize>| {
        let data: Vec<Scalar> = rows.clone().flat_map(|i| (0..k).map(move |j| (i, j))).map(|(i, j)| c.get(i, j)).collect();
        Matrix::new(rows.len(), k, c.field(), data)
    };
    let x = pick(0..k)?;
    let y = pick(k..n)?;
    let xinv = x.checked_inverse(MAX_CONDITION).map_err(|_| Error::NotInChart { chart: 0 })?;
    let a = &y * &xinv;
    Ok(match l.field.join(m.field).join(p.field) {
        Field::Real => a.real_part(),
        Field::Complex => a,
    })
}

/// Orthogonal complement (the annihilator under the standard pairing).
pub fn annihilator(l: &GrassPoint) -> GrassPoint {
    let mut vs = l.basis.clone();
    vs.extend((0..l.n).map(|i| Vector::unit(l.n, i, l.field)));
    let full = gram_schmidt(&vs).expect("nonempty input");
    let rest = full[l.dim()..].to_vec();
    GrassPoint::from_orthonormal(l.n, l.field, rest)
}

// ---------------------------------------------------------------------------
// Homogeneous maps of the projective line
// ---------------------------------------------------------------------------

/// Pair of binary forms of common degree `a`; `p[k]` multiplies `w₁ᵏ w₂^{a−k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneousMapP1 {
    p1: Vec<Scalar>,
    p2: Vec<Scalar>,
}

/// Sylvester resultant of two binary forms of degree `a`, as polynomials in
/// `w₁` with formal degree `a` (so a common zero at `[1:0]` is detected).
pub fn resultant(p1: &[Scalar], p2: &[Scalar]) -> Result<Scalar> {
    let a = p1.len() - 1;
    if p2.len() != a + 1 {
        return Err(Error::DimensionMismatch {
            expected: format!("degree {a}"),
            got: format!("degree {}", p2.len() - 1),
        });
    }
    let size = 2 * a;
    let mut s = vec![ZERO; size * size];
    for (row, p) in (0..a).map(|r| (r, p1)).chain((0..a).map(|r| (r + a, p2))) {
        let shift = row % a;
        // Descending powers of w₁.
        for (k, &c) in p.iter().rev().enumerate() {
            s[row * size + shift + k] = c;
        }
    }
    Matrix::new(size, size, Field::Complex, s)?.det()
}

impl HomogeneousMapP1 {
    pub fn new(p1: Vec<Scalar>, p2: Vec<Scalar>) -> Result<Self> {
        if p1.len() < 2 || p1.len() != p2.len() {
            return Err(Error::InvalidArgument(
                "binary forms must share a degree of at least 1".into(),
            ));
        }
        let res = resultant(&p1, &p2)?;
        let scale = p1.iter().chain(&p2).map(|c| c.norm()).fold(0.0, f64::max);
        let a = p1.len() - 1;
        if res.norm() <= 1e-12 * scale.powi(2 * a as i32) {
            return Err(Error::ResultantZero { resultant: res.norm() });
        }
        Ok(HomogeneousMapP1 { p1, p2 })
    }

    pub fn real(p1: &[f64], p2: &[f64]) -> Result<Self> {
        let c = |p: &[f64]| p.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        HomogeneousMapP1::new(c(p1), c(p2))
    }

    /// `z ↦ (az + b)/(cz + d)` in the chart `[z : 1]`.
    pub fn mobius(a: Scalar, b: Scalar, c: Scalar, d: Scalar) -> Result<Self> {
        HomogeneousMapP1::new(vec![b, a], vec![d, c])
    }

    pub fn degree(&self) -> usize {
        self.p1.len() - 1
    }

    pub fn forms(&self) -> (&[Scalar], &[Scalar]) {
        (&self.p1, &self.p2)
    }

    fn eval_form(p: &[Scalar], w1: Scalar, w2: Scalar) -> Scalar {
        let a = p.len() - 1;
        p.iter()
            .enumerate()
            .map(|(k, &c)| c * w1.powu(k as u32) * w2.powu((a - k) as u32))
            .sum()
    }

    /// `p̂([w₁ : w₂]) = [p₁(w) : p₂(w)]`.
    pub fn apply(&self, p: &ProjPoint) -> Result<ProjPoint> {
        if p.ambient_dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: "2".into(),
                got: p.ambient_dim().to_string(),
            });
        }
        let (w1, w2) = (p.rep.get(0), p.rep.get(1));
        ProjPoint::from_vector(&Vector::complex(&[
            Self::eval_form(&self.p1, w1, w2),
            Self::eval_form(&self.p2, w1, w2),
        ]))
    }

    /// `self ∘ inner`, of degree `deg(self)·deg(inner)`.
    pub fn compose(&self, inner: &HomogeneousMapP1) -> Result<HomogeneousMapP1> {
        let (a, b) = (self.degree(), inner.degree());
        // Dehomogenize at w₂ = 1; index = power of w₁ throughout.
        let mul = |x: &[Scalar], y: &[Scalar]| {
            let mut out = vec![ZERO; x.len() + y.len() - 1];
            for (i, &u) in x.iter().enumerate() {
                for (j, &v) in y.iter().enumerate() {
                    out[i + j] += u * v;
                }
            }
            out
        };
        let pow = |x: &[Scalar], e: usize| (0..e).fold(vec![ONE], |acc, _| mul(&acc, x));
        let outer = |p: &[Scalar]| {
            let mut out = vec![ZERO; a * b + 1];
            for (k, &c) in p.iter().enumerate() {
                let term = mul(&pow(&inner.p1, k), &pow(&inner.p2, a - k));
                for (i, t) in term.into_iter().enumerate() {
                    out[i] += c * t;
                }
            }
            out
        };
        // Res(f∘g) is a product of powers of Res(f) and Res(g), so it is
        // nonzero whenever both factors are. A floating-point threshold on
        // the composite would reject valid high-degree compositions.
        Ok(HomogeneousMapP1 {
            p1: outer(&self.p1),
            p2: outer(&self.p2),
        })
    }
}

pub fn homogeneous_map_p1(f: &HomogeneousMapP1, p: &ProjPoint) -> Result<ProjPoint> {
    f.apply(p)
}

// ---------------------------------------------------------------------------
// Real-linear maps of Cⁿ
// ---------------------------------------------------------------------------

/// Normal form `αz + β z̄ = θ(z + μ z̄)` with `θ = α`, `μ = β/α`; requires
/// `|β| < |α|`, which makes the map invertible (`|μ| < 1`).
pub fn normalize_real_linear_c1(alpha: Scalar, beta: Scalar) -> Result<(Scalar, Scalar)> {
    if !(beta.norm() < alpha.norm()) {
        return Err(Error::InvalidArgument(format!(
            "majorization |β| < |α| fails: |β| = {}, |α| = {}",
            beta.norm(),
            alpha.norm()
        )));
    }
    Ok((alpha, beta / alpha))
}

/// `T(z) = M z + conj(N z)` on `Cⁿ`.
#[derive(Debug, Clone, PartialEq)]
pub struct RealLinearMap {
    m: Matrix,
    n: Matrix,
}

impl RealLinearMap {
    pub fn new(m: Matrix, n: Matrix) -> Result<Self> {
        m.require_square()?;
        if m.shape() != n.shape() {
            return Err(Error::DimensionMismatch {
                expected: format!("{:?}", m.shape()),
                got: format!("{:?}", n.shape()),
            });
        }
        Ok(RealLinearMap {
            m: m.complexify(),
            n: n.complexify(),
        })
    }

    pub fn apply(&self, z: &Vector) -> Result<Vector> {
        Ok(&self.m.apply(z)? + &self.n.apply(z)?.conj())
    }

    /// Matrix on `R²ⁿ` (interleaved): `R(M) + C·R(N)` with `C` the
    /// coordinatewise conjugation `diag(1, −1, 1, −1, …)`.
    pub fn realify(&self) -> Matrix {
        let rm = self.m.realify();
        let rn = self.n.realify();
        let c = Matrix::diag_real(&(0..rm.rows()).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect::<Vec<_>>());
        &rm + &(&c * &rn)
    }

    /// Exact invertibility through the realification.
    pub fn is_invertible(&self) -> bool {
        self.realify().condition_estimate() <= MAX_CONDITION
    }

    /// Sampled sufficient test `|Nz| < |Mz|` on the given directions.
    pub fn majorized_on(&self, samples: &[Vector]) -> Result<bool> {
        for z in samples {
            if self.n.apply(z)?.norm() >= self.m.apply(z)?.norm() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;

    fn c(re: f64, im: f64) -> Scalar {
        Complex64::new(re, im)
    }

    #[test]
    fn normalization_examples() {
        let v = Vector::real(&[0.3, -1.7, 2.2]);
        assert_eq!(proj_from(&v).unwrap(), proj_from(&(&v * 2.0)).unwrap());
        assert_eq!(proj_from(&v).unwrap(), proj_from(&(&v * -3.5)).unwrap());
        assert_eq!(proj_from(&Vector::real(&[-1.0, 0.0])).unwrap().rep(), &Vector::real(&[1.0, 0.0]));
        let p = proj_from(&Vector::complex(&[c(0.0, 1.0), ZERO])).unwrap();
        assert!(p.rep().max_abs_diff(&Vector::complex(&[ONE, ZERO])) < 1e-16);
        let w = Vector::complex(&[c(1.0, 2.0), c(-0.5, 0.1)]);
        assert_eq!(proj_from(&w).unwrap(), proj_from(&w.scale(c(0.3, -2.0))).unwrap());
        assert_eq!(proj_from(&Vector::real(&[0.0, 0.0])), Err(Error::ZeroVector));
    }

    #[test]
    fn chart_examples() {
        let e = affine_chart(2, &Vector::real(&[0.0, 0.0])).unwrap();
        assert_eq!(e.rep(), &Vector::real(&[0.0, 0.0, 1.0]));
        let p = affine_chart(1, &Vector::real(&[1.0])).unwrap();
        assert!(chart_extract(1, &p).unwrap().max_abs_diff(&Vector::real(&[1.0])) < 1e-12);
        let p = affine_chart(1, &Vector::real(&[2.0])).unwrap();
        assert!((chart_extract(0, &p).unwrap().get(0).re - 0.5).abs() < 1e-15);
        let inf = proj_from(&Vector::real(&[1.0, 0.0])).unwrap();
        assert_eq!(chart_extract(1, &inf), Err(Error::NotInChart { chart: 1 }));
    }

    #[test]
    fn projective_map_examples() {
        let mut rng = sample::rng(21);
        let p = proj_from(&sample::vector(&mut rng, Field::Complex, 3)).unwrap();
        let i = Matrix::identity(3, Field::Real);
        assert_eq!(apply_projective(&i, &p).unwrap(), p);
        assert_eq!(apply_projective(&i.scale_real(2.0), &p).unwrap(), p);
        let q = proj_from(&sample::vector(&mut rng, Field::Complex, 3)).unwrap();
        let a = projective_transport(&p, &q).unwrap();
        assert!(apply_projective(&a, &p).unwrap().distance(&q) < 1e-12);
    }

    #[test]
    fn grass_examples() {
        let e = |i| Vector::unit(4, i, Field::Real);
        let l = grass_from(4, &[e(0), e(1)]).unwrap();
        assert!(l.projector().dist(&Matrix::diag_real(&[1.0, 1.0, 0.0, 0.0])) < 1e-15);
        let l2 = grass_from(4, &[&e(0) + &e(1), &e(0) - &(&e(1) * 3.0)]).unwrap();
        assert_eq!(l, l2);
        assert!(matches!(grass_from(4, &[e(0), &e(0) * 2.0]), Err(Error::LinearlyDependent { .. })));

        let v = Vector::real(&[1.0, 2.0, -1.0]);
        let line = grass_from(3, std::slice::from_ref(&v)).unwrap();
        let r = proj_from(&v).unwrap();
        let rr = Matrix::from_columns(&[r.rep().clone()]).unwrap();
        assert!(line.projector().dist(&(&rr * &rr.adjoint())) < 1e-14);
    }

    #[test]
    fn graph_chart_examples() {
        let e = |i| Vector::unit(2, i, Field::Real);
        let l = grass_from(2, &[e(0)]).unwrap();
        let m = grass_from(2, &[e(1)]).unwrap();
        assert_eq!(graph_chart(&l, &m, &Matrix::zeros(1, 1, Field::Real)).unwrap(), l);
        let g = graph_chart(&l, &m, &Matrix::from_rows(&[&[0.7]])).unwrap();
        assert_eq!(g, grass_from(2, &[Vector::real(&[1.0, 0.7])]).unwrap());
        let a = graph_chart_coords(&l, &m, &g).unwrap();
        assert!((a.get(0, 0).re - 0.7).abs() < 1e-14);
        assert!(matches!(graph_chart(&l, &l, &Matrix::zeros(1, 1, Field::Real)), Err(Error::NotComplementary { .. })));
    }

    #[test]
    fn annihilator_examples() {
        let e = |i| Vector::unit(3, i, Field::Real);
        let l = grass_from(3, &[e(0)]).unwrap();
        assert_eq!(annihilator(&l), grass_from(3, &[e(1), e(2)]).unwrap());
        let full = grass_from(3, &[e(0), e(1), e(2)]).unwrap();
        assert_eq!(annihilator(&full).dim(), 0);
        assert_eq!(annihilator(&annihilator(&l)), l);
        let zero = grass_from(3, &[]).unwrap();
        assert_eq!(annihilator(&zero), full);
    }

    #[test]
    fn homogeneous_examples() {
        let id = HomogeneousMapP1::mobius(ONE, ZERO, ZERO, ONE).unwrap();
        let p = affine_chart(1, &Vector::real(&[1.0])).unwrap();
        let out = chart_extract(1, &id.apply(&p).unwrap()).unwrap();
        assert!((out.get(0) - ONE).norm() < 1e-15);

        let sq = HomogeneousMapP1::real(&[0.0, 0.0, 1.0], &[1.0, 0.0, 0.0]).unwrap();
        let p = affine_chart(1, &Vector::real(&[3.0])).unwrap();
        let out = chart_extract(1, &sq.apply(&p).unwrap()).unwrap();
        assert!((out.get(0) - c(9.0, 0.0)).norm() < 1e-13);

        // Common zero at [0:1]: both forms are divisible by w₁.
        assert!(matches!(
            HomogeneousMapP1::real(&[0.0, 1.0, 1.0], &[0.0, 2.0, 0.0]),
            Err(Error::ResultantZero { .. })
        ));
        // Common zero at [1:0]: neither form has a w₁² term.
        assert!(matches!(
            HomogeneousMapP1::real(&[1.0, 1.0, 0.0], &[2.0, 3.0, 0.0]),
            Err(Error::ResultantZero { .. })
        ));
    }

    #[test]
    fn real_linear_examples() {
        let (theta, mu) = normalize_real_linear_c1(c(2.0, 1.0), c(0.5, 0.0)).unwrap();
        assert_eq!(theta, c(2.0, 1.0));
        assert!(mu.norm() < 1.0);
        assert!(normalize_real_linear_c1(c(1.0, 0.0), c(0.0, 1.0)).is_err());

        let m = Matrix::diag(&[c(2.0, 0.0)]);
        let n = Matrix::diag(&[c(0.0, 1.0)]);
        let t = RealLinearMap::new(m, n).unwrap();
        let z = Vector::complex(&[c(0.3, -0.7)]);
        let direct = t.apply(&z).unwrap();
        let via = Vector::from_realified(&t.realify().apply(&z.realify()).unwrap());
        assert!(direct.max_abs_diff(&via) < 1e-15);
        assert!(t.is_invertible());
        // z + conj(z) kills the imaginary axis.
        let fold = RealLinearMap::new(Matrix::diag(&[ONE]), Matrix::diag(&[ONE])).unwrap();
        assert!(!fold.is_invertible());
    }
}
