//! Matrix groups and the trace metric `⟨A,B⟩_T = tr(T⁻¹AT⁻¹B)` on GL.
//!
//! Geodesics are closed-form `Y·exp(tA)`; SPD geodesics use the conjugated
//! form `Z·exp(t·Z⁻¹SZ⁻¹)·Z` with `Z = √P` and ambient velocity `S`.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::expmlog::{expm, logm_spd};
use crate::linalg::{gram_schmidt, op_norm_or_hs, Field, Matrix, Scalar, Vector, ONE};
use crate::spectral::{eigh, EigenDecomposition};

/// Relative tolerance for group membership and tangent admissibility.
pub const MEMBERSHIP_TOL: f64 = 1e-9;
/// Condition estimate above which a matrix counts as singular.
pub const MAX_CONDITION: f64 = 1e12;

// ---------------------------------------------------------------------------
// SPD matrices
// ---------------------------------------------------------------------------

/// Self-adjoint positive-definite matrix together with its eigendecomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct SpdMatrix {
    value: Matrix,
    eigen: EigenDecomposition,
}

impl SpdMatrix {
    /// Validates self-adjointness (`1e-10·‖P‖_HS`) and positivity
    /// (minimum eigenvalue `> 1e-12·‖P‖_op`).
    pub fn new(value: Matrix) -> Result<Self> {
        value.require_square()?;
        let hs = value.hs_norm();
        let residual = value.self_adjoint_residual();
        if residual > 1e-10 * hs {
            return Err(Error::NotSelfAdjoint { residual });
        }
        let eigen = eigh(&value)?;
        let ev = eigen.real_eigenvalues();
        let min = ev.first().copied().unwrap_or(0.0);
        let max = ev.last().copied().unwrap_or(0.0).abs();
        if !(min > 1e-12 * max) || min <= 0.0 {
            return Err(Error::NotPositiveDefinite { min_eigenvalue: min });
        }
        Ok(SpdMatrix { value, eigen })
    }

    pub fn value(&self) -> &Matrix {
        &self.value
    }

    pub fn into_matrix(self) -> Matrix {
        self.value
    }

    pub fn dim(&self) -> usize {
        self.value.rows()
    }

    pub fn eigen(&self) -> &EigenDecomposition {
        &self.eigen
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigen.eigenvalues[0].re
    }

    /// `B·diag(f(λ))·B*`, symmetrized and returned in the field of `P`.
    pub fn apply_fn(&self, f: impl Fn(f64) -> f64) -> Matrix {
        let m = self.eigen.reconstruct_with(|l| Complex64::new(f(l.re), 0.0));
        let m = (&m + &m.adjoint()).scale_real(0.5);
        match self.value.field() {
            Field::Real => m.real_part(),
            Field::Complex => m,
        }
    }

    /// The unique SPD square root.
    pub fn sqrt(&self) -> SpdMatrix {
        SpdMatrix::new(self.apply_fn(f64::sqrt)).expect("square root of SPD is SPD")
    }

    pub fn inverse(&self) -> SpdMatrix {
        SpdMatrix::new(self.apply_fn(|l| 1.0 / l)).expect("inverse of SPD is SPD")
    }
}

pub fn sqrtm_spd(p: &SpdMatrix) -> SpdMatrix {
    p.sqrt()
}

// ---------------------------------------------------------------------------
// Group points
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Group {
    GL,
    SL,
    O,
    U,
    SO,
    SU,
    SPD,
    GLFlag,
    SLFlag,
}

impl Group {
    pub fn is_flag(self) -> bool {
        matches!(self, Group::GLFlag | Group::SLFlag)
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl std::str::FromStr for Group {
    type Err = Error;

    fn from_str(s: &str) -> Result<Group> {
        Ok(match s.to_ascii_uppercase().as_str() {
            "GL" => Group::GL,
            "SL" => Group::SL,
            "O" => Group::O,
            "U" => Group::U,
            "SO" => Group::SO,
            "SU" => Group::SU,
            "SPD" => Group::SPD,
            "GLFLAG" => Group::GLFlag,
            "SLFLAG" => Group::SLFlag,
            _ => return Err(Error::InvalidArgument(format!("unknown group {s:?}"))),
        })
    }
}

fn not_in(group: Group, residual: f64) -> Error {
    Error::NotInGroup {
        group: group.to_string(),
        residual,
    }
}

fn unitary_residual(t: &Matrix) -> f64 {
    (&t.adjoint() * t).dist(&Matrix::identity(t.rows(), t.field()))
}

/// A matrix certified to lie in a group.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupPoint {
    value: Matrix,
    group: Group,
    flag: Option<Vec<usize>>,
}

impl GroupPoint {
    /// Checks membership to [`MEMBERSHIP_TOL`]. Flag groups require `flag`.
    pub fn new(value: Matrix, group: Group, flag: Option<Vec<usize>>) -> Result<Self> {
        value.require_square()?;
        let cond = value.condition_estimate();
        if cond > MAX_CONDITION {
            return Err(Error::Singular { condition: cond });
        }
        let det_residual = || -> Result<f64> { Ok((value.det()? - ONE).norm()) };
        let check = |ok: bool, residual: f64| if ok { Ok(()) } else { Err(not_in(group, residual)) };
        match group {
            Group::GL => {}
            Group::SL => {
                let r = det_residual()?;
                check(r <= MEMBERSHIP_TOL, r)?;
            }
            Group::O | Group::SO => {
                if value.field() != Field::Real {
                    return Err(not_in(group, value.max_imag()));
                }
                let r = unitary_residual(&value);
                check(r <= MEMBERSHIP_TOL, r)?;
                if group == Group::SO {
                    let r = det_residual()?;
                    check(r <= MEMBERSHIP_TOL, r)?;
                }
            }
            Group::U | Group::SU => {
                let r = unitary_residual(&value);
                check(r <= MEMBERSHIP_TOL, r)?;
                if group == Group::SU {
                    let r = det_residual()?;
                    check(r <= MEMBERSHIP_TOL, r)?;
                }
            }
            Group::SPD => {
                SpdMatrix::new(value.clone())?;
            }
            Group::GLFlag | Group::SLFlag => {
                let dims = flag
                    .as_ref()
                    .ok_or_else(|| Error::MalformedFlag("flag group requires a flag".into()))?;
                let r = flag_residual(&value, dims)?;
                check(r <= 1e-12 * value.hs_norm(), r)?;
                if group == Group::SLFlag {
                    let r = det_residual()?;
                    check(r <= MEMBERSHIP_TOL, r)?;
                }
            }
        }
        let flag = if group.is_flag() { flag } else { None };
        Ok(GroupPoint { value, group, flag })
    }

    pub fn gl(value: Matrix) -> Result<Self> {
        GroupPoint::new(value, Group::GL, None)
    }

    pub fn value(&self) -> &Matrix {
        &self.value
    }

    pub fn group(&self) -> Group {
        self.group
    }

    pub fn flag(&self) -> Option<&[usize]> {
        self.flag.as_deref()
    }

    pub fn dim(&self) -> usize {
        self.value.rows()
    }

    /// `⟨A, B⟩` at this point.
    pub fn metric(&self, a: &Matrix, b: &Matrix) -> Result<f64> {
        metric_gl(&self.value, a, b)
    }
}

/// Tangent direction at a group point, checked against the group's
/// tangent-space constraint.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentVector {
    at: GroupPoint,
    direction: Matrix,
}

impl TangentVector {
    /// Constraints (ambient form): SL `tr(T⁻¹A) = 0`; O/U/SO/SU
    /// `T*A + A*T = 0`; SPD self-adjoint; flag groups `T⁻¹A` respects the flag.
    pub fn new(at: GroupPoint, direction: Matrix) -> Result<Self> {
        let t = at.value();
        if direction.shape() != t.shape() {
            return Err(Error::DimensionMismatch {
                expected: format!("{:?}", t.shape()),
                got: format!("{:?}", direction.shape()),
            });
        }
        let scale = direction.hs_norm();
        let inadmissible = |residual: f64| Error::InadmissibleDirection {
            group: at.group().to_string(),
            residual,
        };
        let tinv_a = || -> Result<Matrix> { Ok(&t.checked_inverse(MAX_CONDITION)? * &direction) };
        let residual = match at.group() {
            Group::GL => 0.0,
            Group::SL => tinv_a()?.trace()?.norm(),
            Group::O | Group::U | Group::SO | Group::SU => {
                let m = &t.adjoint() * &direction;
                let mut r = (&m + &m.adjoint()).hs_norm();
                if at.group() == Group::SU {
                    r = r.max(tinv_a()?.trace()?.norm());
                }
                if at.group() != Group::U && at.group() != Group::SU && direction.field() != Field::Real {
                    r = r.max(direction.max_imag());
                }
                r
            }
            Group::SPD => direction.self_adjoint_residual(),
            Group::GLFlag | Group::SLFlag => {
                let m = tinv_a()?;
                let mut r = flag_residual(&m, at.flag().expect("flag group has a flag"))?;
                if at.group() == Group::SLFlag {
                    r = r.max(m.trace()?.norm());
                }
                r
            }
        };
        if residual > MEMBERSHIP_TOL * scale {
            return Err(inadmissible(residual));
        }
        Ok(TangentVector { at, direction })
    }

    pub fn at(&self) -> &GroupPoint {
        &self.at
    }

    pub fn direction(&self) -> &Matrix {
        &self.direction
    }
}

// ---------------------------------------------------------------------------
// Metric and differentials
// ---------------------------------------------------------------------------

fn require_same_shape(t: &Matrix, a: &Matrix) -> Result<()> {
    if t.shape() != a.shape() {
        return Err(Error::DimensionMismatch {
            expected: format!("{:?}", t.shape()),
            got: format!("{:?}", a.shape()),
        });
    }
    Ok(())
}

/// The complex bilinear form `tr(T⁻¹AT⁻¹B)` without taking the real part.
pub fn holomorphic_form(t: &Matrix, a: &Matrix, b: &Matrix) -> Result<Scalar> {
    t.require_square()?;
    require_same_shape(t, a)?;
    require_same_shape(t, b)?;
    let tinv = t.checked_inverse(MAX_CONDITION)?;
    (&(&tinv * a) * &(&tinv * b)).trace()
}

/// `Re tr(T⁻¹AT⁻¹B)`, symmetric and invariant under left and right
/// translation and under inversion.
pub fn metric_gl(t: &Matrix, a: &Matrix, b: &Matrix) -> Result<f64> {
    let x = holomorphic_form(t, a, b)?;
    Ok(x.re)
}

/// `d(det)_T(A) = det T · tr(T⁻¹A)`.
pub fn det_differential(t: &Matrix, a: &Matrix) -> Result<Scalar> {
    t.require_square()?;
    require_same_shape(t, a)?;
    let tinv = t.checked_inverse(MAX_CONDITION)?;
    Ok(t.det()? * (&tinv * a).trace()?)
}

/// Differential of inversion: `−T⁻¹AT⁻¹`.
pub fn inverse_differential(t: &Matrix, a: &Matrix) -> Result<Matrix> {
    t.require_square()?;
    require_same_shape(t, a)?;
    let tinv = t.checked_inverse(MAX_CONDITION)?;
    Ok(-&(&(&tinv * a) * &tinv))
}

const GAUSS_NODES: [f64; 4] = [
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GAUSS_WEIGHTS: [f64; 4] = [
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// Differential of the exponential map,
/// `dexp_T(A) = ∫₀¹ exp(sT)·A·exp((1−s)T) ds`, by composite 8-point
/// Gauss-Legendre quadrature with panels of width at most `1/(2‖T‖)`.
pub fn dexp(t: &Matrix, a: &Matrix) -> Result<Matrix> {
    t.require_square()?;
    require_same_shape(t, a)?;
    let panels = (2.0 * op_norm_or_hs(t)).ceil().max(1.0) as usize;
    let h = 1.0 / panels as f64;
    let mut out = Matrix::zeros(t.rows(), t.cols(), t.field().join(a.field()));
    for p in 0..panels {
        let mid = (p as f64 + 0.5) * h;
        for (x, w) in GAUSS_NODES.iter().zip(GAUSS_WEIGHTS) {
            for s in [mid - x * h / 2.0, mid + x * h / 2.0] {
                let left = expm(&t.scale_real(s)).value;
                let right = expm(&t.scale_real(1.0 - s)).value;
                out = &out + &(&(&left * a) * &right).scale_real(w * h / 2.0);
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Geodesics
// ---------------------------------------------------------------------------

/// Residual of `A` as a Lie-algebra direction for `group` (relative to `‖A‖_HS`
/// by the caller).
fn algebra_residual(a: &Matrix, group: Group, flag: Option<&[usize]>) -> Result<f64> {
    let skew = || (a + &a.adjoint()).hs_norm();
    Ok(match group {
        Group::GL | Group::SPD => 0.0,
        Group::SL => a.trace()?.norm(),
        Group::O => skew(),
        Group::SO => skew().max(a.max_imag()),
        Group::U => skew(),
        Group::SU => skew().max(a.trace()?.norm()),
        Group::GLFlag => flag_residual(a, flag.expect("flag group has a flag"))?,
        Group::SLFlag => flag_residual(a, flag.expect("flag group has a flag"))?.max(a.trace()?.norm()),
    })
}

/// `γ(t) = Y·exp(tA)`, tagged with `Y`'s group.
///
/// `A` is the left-translated direction (so `γ'(0) = YA`); it must lie in
/// the group's Lie algebra: trace-free for SL, anti-self-adjoint for O/U,
/// real and anti-self-adjoint for SO, anti-self-adjoint and trace-free
/// for SU, flag-respecting for flag groups. For SPD points, `A` is the
/// ambient self-adjoint velocity and the call delegates to [`geodesic_spd`].
pub fn geodesic(y: &GroupPoint, a: &Matrix, t: f64) -> Result<GroupPoint> {
    require_same_shape(y.value(), a)?;
    if y.group() == Group::SPD {
        let p = SpdMatrix::new(y.value().clone())?;
        let q = geodesic_spd(&p, a, t)?;
        return Ok(GroupPoint {
            value: q.into_matrix(),
            group: Group::SPD,
            flag: None,
        });
    }
    let residual = algebra_residual(a, y.group(), y.flag())?;
    if residual > MEMBERSHIP_TOL * a.hs_norm().max(1.0) {
        return Err(Error::InadmissibleDirection {
            group: y.group().to_string(),
            residual,
        });
    }
    let value = y.value() * &expm(&a.scale_real(t)).value;
    let value = if y.group() == Group::O || y.group() == Group::SO {
        value.real_part()
    } else {
        value
    };
    Ok(GroupPoint {
        value,
        group: y.group(),
        flag: y.flag.clone(),
    })
}

/// SPD geodesic with ambient initial velocity `S`:
/// `Z·exp(t·Z⁻¹SZ⁻¹)·Z`, `Z = √P`.
pub fn geodesic_spd(p: &SpdMatrix, s: &Matrix, t: f64) -> Result<SpdMatrix> {
    require_same_shape(p.value(), s)?;
    let residual = s.self_adjoint_residual();
    if residual > 1e-10 * s.hs_norm().max(1.0) {
        return Err(Error::NotSelfAdjoint { residual });
    }
    if t == 0.0 {
        return Ok(p.clone());
    }
    let z = p.sqrt();
    let zinv = z.inverse();
    let inner = &(zinv.value() * s) * zinv.value();
    let inner = (&inner + &inner.adjoint()).scale_real(0.5 * t);
    let e = expm(&inner).value;
    let out = &(z.value() * &e) * z.value();
    let out = (&out + &out.adjoint()).scale_real(0.5);
    let out = match p.value().field().join(s.field()) {
        Field::Real => out.real_part(),
        Field::Complex => out,
    };
    SpdMatrix::new(out)
}

/// Initial velocity of the SPD geodesic from `P` reaching `Q` at `t = 1`:
/// `Z·log(Z⁻¹QZ⁻¹)·Z`, `Z = √P`.
pub fn spd_log_map(p: &SpdMatrix, q: &SpdMatrix) -> Result<Matrix> {
    require_same_shape(p.value(), q.value())?;
    let z = p.sqrt();
    let zinv = z.inverse();
    let inner = SpdMatrix::new({
        let m = &(zinv.value() * q.value()) * zinv.value();
        (&m + &m.adjoint()).scale_real(0.5)
    })?;
    let s = &(z.value() * &logm_spd(&inner)) * z.value();
    Ok((&s + &s.adjoint()).scale_real(0.5))
}

// ---------------------------------------------------------------------------
// Polar decomposition and the quotient by the orthogonal group
// ---------------------------------------------------------------------------

/// `T = R·P` with `P = √(T*T)` positive-definite and `R = T·P⁻¹`
/// orthogonal (real input) or unitary (complex input).
pub fn polar_decompose(t: &Matrix) -> Result<(GroupPoint, SpdMatrix)> {
    t.require_square()?;
    t.checked_inverse(MAX_CONDITION)?;
    let p = quotient_representative(t)?.sqrt();
    let r = t * p.inverse().value();
    let group = match t.field() {
        Field::Real => Group::O,
        Field::Complex => Group::U,
    };
    Ok((GroupPoint::new(r, group, None)?, p))
}

/// `T*T`, constant on orbits `T ↦ R·T` of the orthogonal/unitary group.
pub fn quotient_representative(t: &Matrix) -> Result<SpdMatrix> {
    t.require_square()?;
    t.checked_inverse(MAX_CONDITION)?;
    let g = &t.adjoint() * t;
    SpdMatrix::new((&g + &g.adjoint()).scale_real(0.5))
}

/// Orthogonality residual `‖R*R − I‖_HS` of `R = T₂·T₁⁻¹`; zero exactly when
/// `T₂` lies in the orbit of `T₁`.
pub fn orbit_residual(t1: &Matrix, t2: &Matrix) -> Result<f64> {
    require_same_shape(t1, t2)?;
    let r = t2 * &t1.checked_inverse(MAX_CONDITION)?;
    Ok(unitary_residual(&r))
}

// ---------------------------------------------------------------------------
// Flags
// ---------------------------------------------------------------------------

fn validate_flag(n: usize, dims: &[usize]) -> Result<()> {
    if dims.iter().any(|&d| d == 0 || d >= n) {
        return Err(Error::MalformedFlag(format!(
            "dimensions {dims:?} must lie strictly between 0 and {n}"
        )));
    }
    if dims.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::MalformedFlag(format!("dimensions {dims:?} must be strictly ascending")));
    }
    Ok(())
}

/// Frobenius mass of the entries `(i, k)` with `k < d_j ≤ i` for some `j`:
/// the entries that must vanish for `A` to map each coordinate subspace
/// `span(e_0, …, e_{d_j − 1})` into itself.
pub fn flag_residual(a: &Matrix, dims: &[usize]) -> Result<f64> {
    a.require_square()?;
    let n = a.rows();
    validate_flag(n, dims)?;
    let mut mass = 0.0;
    for i in 0..n {
        // Largest flag dimension ≤ i bounds the columns that must vanish.
        let Some(limit) = dims.iter().filter(|&&d| d <= i).max() else {
            continue;
        };
        for k in 0..*limit {
            mass += a.get(i, k).norm_sqr();
        }
    }
    Ok(mass.sqrt())
}

/// Whether `A` preserves the coordinate flag `dims`, to `1e-12·‖A‖_HS`.
pub fn flag_check(a: &Matrix, dims: &[usize]) -> Result<bool> {
    Ok(flag_residual(a, dims)? <= 1e-12 * a.hs_norm())
}

/// An arbitrary flag `L_1 ⊂ … ⊂ L_k`, stored as an orthonormal adapted
/// basis (first `d_j` columns span `L_j`) plus the dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct Flag {
    basis: Matrix,
    dims: Vec<usize>,
}

impl Flag {
    /// Builds the flag from spanning sets of the nested subspaces, smallest
    /// first. Each set only needs to span `L_j`; nesting is checked.
    pub fn from_subspaces(n: usize, subspaces: &[Vec<Vector>]) -> Result<Self> {
        let field = subspaces
            .iter()
            .flatten()
            .fold(Field::Real, |f, v| f.join(v.field()));
        let mut adapted: Vec<Vector> = Vec::new();
        let mut dims = Vec::with_capacity(subspaces.len());
        for (j, span) in subspaces.iter().enumerate() {
            if span.iter().any(|v| v.dim() != n) {
                return Err(Error::MalformedFlag(format!("subspace {j} has vectors outside dimension {n}")));
            }
            let own = gram_schmidt(span)?.len();
            let mut all = adapted.clone();
            all.extend(span.iter().cloned());
            let grown = gram_schmidt(&all)?;
            if own != grown.len() {
                return Err(Error::MalformedFlag(format!("subspace {j} does not contain its predecessor")));
            }
            adapted = grown;
            dims.push(adapted.len());
        }
        validate_flag(n, &dims)?;
        let mut all = adapted;
        all.extend((0..n).map(|i| Vector::unit(n, i, field)));
        let basis = gram_schmidt(&all)?;
        Ok(Flag {
            basis: Matrix::from_columns(&basis)?,
            dims,
        })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    /// `A` written in the adapted basis: `Q*AQ`.
    pub fn to_coordinates(&self, a: &Matrix) -> Matrix {
        &(&self.basis.adjoint() * a) * &self.basis
    }

    /// Whether `A(L_j) ⊆ L_j` for every `j`.
    pub fn preserved_by(&self, a: &Matrix) -> Result<bool> {
        flag_check(&self.to_coordinates(a), &self.dims)
    }
}
