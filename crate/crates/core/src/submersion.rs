//! Concrete submersions, their Euclidean connections, horizontal lifting
//! and curvature.
//!
//! Points of the total space are real vectors in an ambient `R^N`:
//! sphere points directly, complex sphere points realified (interleaved),
//! matrices of GL flattened row-major. Images live in an ambient `R^m` of
//! the target: the entries of `xxᵀ`, the realified entries of `zz*`, or the
//! upper triangle of `TᵀT`. The connection is always the orthogonal
//! complement of the vertical space in the ambient Euclidean metric.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{gram_schmidt, Field, Matrix, Vector};
use crate::sample::{self, SampleRng};
use crate::spectral::eigh;

/// Step of the central-difference Jacobian. Every built-in map is at most
/// quadratic, so central differences are exact and only rounding matters.
const JACOBIAN_STEP: f64 = 1e-3;
/// Default step of the bracket differences in [`Submersion::curvature_numeric`].
pub const CURVATURE_STEP: f64 = 1e-4;
/// Largest admissible RK4 step.
pub const MAX_LIFT_STEP: f64 = 1e-2;
/// Condition estimate bounding the GL trust region during lifting.
pub const GL_TRUST_CONDITION: f64 = 1e6;
const MEMBERSHIP_TOL: f64 = 1e-9;
/// Step of the fourth-order velocity stencil for base paths.
const VELOCITY_STEP: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubmersionKind {
    /// `Sⁿ → RPⁿ`, `x ↦ xxᵀ`.
    SphereToRP(usize),
    /// `S^{2n+1} ⊂ C^{n+1} → CPⁿ`, `z ↦ zz*`.
    SphereToCP(usize),
    /// `GL(n, R) → SPD(n)`, `T ↦ TᵀT`.
    GlToSpd(usize),
    /// `Rⁿ → Rᵏ`, projection onto the first `k` coordinates.
    ProductProjection { n: usize, k: usize },
}

impl fmt::Display for SubmersionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubmersionKind::SphereToRP(n) => write!(f, "S^{n} -> RP^{n}"),
            SubmersionKind::SphereToCP(n) => write!(f, "S^{} -> CP^{n}", 2 * n + 1),
            SubmersionKind::GlToSpd(n) => write!(f, "GL({n}) -> SPD({n})"),
            SubmersionKind::ProductProjection { n, k } => write!(f, "R^{n} -> R^{k}"),
        }
    }
}

impl SubmersionKind {
    /// Dimension `N` of the ambient space of the total space.
    pub fn ambient_dim(&self) -> usize {
        match *self {
            SubmersionKind::SphereToRP(n) => n + 1,
            SubmersionKind::SphereToCP(n) => 2 * (n + 1),
            SubmersionKind::GlToSpd(n) => n * n,
            SubmersionKind::ProductProjection { n, .. } => n,
        }
    }

    pub fn manifold_dim(&self) -> usize {
        match *self {
            SubmersionKind::SphereToRP(n) => n,
            SubmersionKind::SphereToCP(n) => 2 * n + 1,
            SubmersionKind::GlToSpd(n) => n * n,
            SubmersionKind::ProductProjection { n, .. } => n,
        }
    }

    pub fn target_dim(&self) -> usize {
        match *self {
            SubmersionKind::SphereToRP(n) => n,
            SubmersionKind::SphereToCP(n) => 2 * n,
            SubmersionKind::GlToSpd(n) => n * (n + 1) / 2,
            SubmersionKind::ProductProjection { k, .. } => k,
        }
    }

    /// Dimension `m` of the coordinates used for image points.
    pub fn target_ambient_dim(&self) -> usize {
        match *self {
            SubmersionKind::SphereToRP(n) => (n + 1) * (n + 1),
            SubmersionKind::SphereToCP(n) => 2 * (n + 1) * (n + 1),
            SubmersionKind::GlToSpd(n) => n * (n + 1) / 2,
            SubmersionKind::ProductProjection { k, .. } => k,
        }
    }

    fn is_sphere(&self) -> bool {
        matches!(self, SubmersionKind::SphereToRP(_) | SubmersionKind::SphereToCP(_))
    }

    /// The map itself, on the whole ambient space.
    fn eval(&self, x: &[f64]) -> Vec<f64> {
        match *self {
            SubmersionKind::SphereToRP(_) => x.iter().flat_map(|&a| x.iter().map(move |&b| a * b)).collect(),
            SubmersionKind::SphereToCP(n) => {
                let z: Vec<Complex64> = (0..=n).map(|i| Complex64::new(x[2 * i], x[2 * i + 1])).collect();
                let mut out = Vec::with_capacity(2 * (n + 1) * (n + 1));
                for zi in &z {
                    for zj in &z {
                        let e = zi * zj.conj();
                        out.push(e.re);
                        out.push(e.im);
                    }
                }
                out
            }
            SubmersionKind::GlToSpd(n) => {
                let mut out = Vec::with_capacity(n * (n + 1) / 2);
                for i in 0..n {
                    for j in i..n {
                        out.push((0..n).map(|k| x[k * n + i] * x[k * n + j]).sum());
                    }
                }
                out
            }
            SubmersionKind::ProductProjection { k, .. } => x[..k].to_vec(),
        }
    }
}

/// A built-in submersion with the ambient-Euclidean connection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Submersion {
    kind: SubmersionKind,
}

/// Tangent-space data at a point: an orthonormal tangent basis (columns,
/// `N × d`) and the eigendecomposition of `JᵀJ` for the restricted
/// Jacobian `J` (`m × d`), eigenvalues ascending.
struct Frame {
    tangent: Matrix,
    jt: Matrix,
    eigenvalues: Vec<f64>,
    eigenvectors: Matrix,
}

fn max_imag(v: &Vector) -> f64 {
    v.entries().iter().map(|z| z.im.abs()).fold(0.0, f64::max)
}

fn col_vec(m: &Matrix) -> Vector {
    m.column(0)
}

fn as_col(v: &Vector) -> Matrix {
    Matrix::from_columns(std::slice::from_ref(v)).expect("nonempty vector")
}

impl Submersion {
    /// Validates the dimensions and samples the rank of the differential
    /// at 20 seeded random points.
    pub fn new(kind: SubmersionKind) -> Result<Self> {
        let ok = match kind {
            SubmersionKind::SphereToRP(n) | SubmersionKind::SphereToCP(n) | SubmersionKind::GlToSpd(n) => n >= 1,
            SubmersionKind::ProductProjection { n, k } => k >= 1 && k < n,
        };
        if !ok {
            return Err(Error::InvalidArgument(format!("degenerate submersion {kind:?}")));
        }
        let s = Submersion { kind };
        let mut rng = sample::rng(0x5b_6d_65_72);
        for _ in 0..20 {
            let p = s.random_point(&mut rng);
            let f = s.frame(&p.to_real())?;
            let d = kind.manifold_dim();
            let t = kind.target_dim();
            let top = f.eigenvalues.last().copied().unwrap_or(0.0);
            let smallest_horizontal = f.eigenvalues[d - t];
            if !(smallest_horizontal > 1e-8 * top) {
                return Err(Error::InvalidArgument(format!("differential of {kind} is not surjective")));
            }
        }
        Ok(s)
    }

    pub fn kind(&self) -> SubmersionKind {
        self.kind
    }

    /// Image point `f(p)` in target coordinates.
    pub fn map(&self, p: &Vector) -> Result<Vector> {
        self.check_dim(p)?;
        Ok(Vector::real(&self.kind.eval(&p.to_real())))
    }

    fn check_dim(&self, p: &Vector) -> Result<()> {
        if p.dim() != self.kind.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.kind.ambient_dim().to_string(),
                got: p.dim().to_string(),
            });
        }
        Ok(())
    }

    /// Distance of `p` from the total space: `|‖p‖ − 1|` on spheres;
    /// zero inside GL's trust region (infinite outside) and for projections.
    pub fn membership_residual(&self, p: &Vector) -> Result<f64> {
        self.check_dim(p)?;
        Ok(match self.kind {
            SubmersionKind::SphereToRP(_) | SubmersionKind::SphereToCP(_) => (p.norm() - 1.0).abs().max(max_imag(p)),
            SubmersionKind::GlToSpd(_) => {
                if self.gl_condition(&p.to_real()) <= GL_TRUST_CONDITION {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            SubmersionKind::ProductProjection { .. } => max_imag(p),
        })
    }

    fn require_on_manifold(&self, p: &Vector) -> Result<()> {
        let residual = self.membership_residual(p)?;
        if residual > MEMBERSHIP_TOL {
            return Err(Error::OffManifold { residual });
        }
        Ok(())
    }

    fn gl_condition(&self, x: &[f64]) -> f64 {
        let SubmersionKind::GlToSpd(n) = self.kind else {
            return 1.0;
        };
        Matrix::from_real(n, n, x).map(|t| t.condition_estimate()).unwrap_or(f64::INFINITY)
    }

    /// Nearest point of the total space used when differentiating fields:
    /// radial projection for spheres, identity otherwise.
    fn retract(&self, x: &[f64]) -> Vec<f64> {
        if self.kind.is_sphere() {
            let r = x.iter().map(|a| a * a).sum::<f64>().sqrt();
            x.iter().map(|a| a / r).collect()
        } else {
            x.to_vec()
        }
    }

    /// A seeded random point of the total space.
    pub fn random_point(&self, rng: &mut SampleRng) -> Vector {
        let n_amb = self.kind.ambient_dim();
        match self.kind {
            SubmersionKind::SphereToRP(_) | SubmersionKind::SphereToCP(_) => loop {
                let v: Vec<f64> = (0..n_amb).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let r = v.iter().map(|a| a * a).sum::<f64>().sqrt();
                if r > 0.1 {
                    return Vector::real(&v.iter().map(|a| a / r).collect::<Vec<_>>());
                }
            },
            SubmersionKind::GlToSpd(n) => {
                let t = sample::invertible(rng, Field::Real, n, 20.0);
                Vector::real(&t.entries().iter().map(|z| z.re).collect::<Vec<_>>())
            }
            SubmersionKind::ProductProjection { .. } => {
                Vector::real(&(0..n_amb).map(|_| rng.gen_range(-1.0..1.0)).collect::<Vec<_>>())
            }
        }
    }

    fn frame(&self, x: &[f64]) -> Result<Frame> {
        let n_amb = self.kind.ambient_dim();
        let m = self.kind.target_ambient_dim();
        let tangent = if self.kind.is_sphere() {
            let p = Vector::real(&self.retract(x));
            let mut vs = vec![p];
            vs.extend((0..n_amb).map(|i| Vector::unit(n_amb, i, Field::Real)));
            let basis = gram_schmidt(&vs)?;
            Matrix::from_columns(&basis[1..])?
        } else {
            Matrix::identity(n_amb, Field::Real)
        };
        let mut jac = vec![0.0; m * n_amb];
        let mut xp = x.to_vec();
        for j in 0..n_amb {
            xp[j] = x[j] + JACOBIAN_STEP;
            let fp = self.kind.eval(&xp);
            xp[j] = x[j] - JACOBIAN_STEP;
            let fm = self.kind.eval(&xp);
            xp[j] = x[j];
            for i in 0..m {
                jac[i * n_amb + j] = (fp[i] - fm[i]) / (2.0 * JACOBIAN_STEP);
            }
        }
        let jac = Matrix::from_real(m, n_amb, &jac)?;
        let jt = if self.kind.is_sphere() { &jac * &tangent } else { jac };
        let gram = &jt.transpose() * &jt;
        let gram = (&gram + &gram.transpose()).scale_real(0.5);
        let e = eigh(&gram)?;
        Ok(Frame {
            tangent,
            jt,
            eigenvalues: e.real_eigenvalues(),
            eigenvectors: e.basis.real_part(),
        })
    }

    fn vertical_count(&self) -> usize {
        self.kind.manifold_dim() - self.kind.target_dim()
    }

    /// Orthonormal basis (ambient coordinates) of `ker df_p ∩ T_pM`.
    pub fn vertical_space(&self, p: &Vector) -> Result<Vec<Vector>> {
        self.check_dim(p)?;
        self.require_on_manifold(p)?;
        let f = self.frame(&p.to_real())?;
        Ok(self.vertical_from(&f))
    }

    fn vertical_from(&self, f: &Frame) -> Vec<Vector> {
        (0..self.vertical_count())
            .map(|j| col_vec(&(&f.tangent * &as_col(&f.eigenvectors.column(j)))))
            .collect()
    }

    /// Orthonormal basis of the horizontal space `H_p = V_p^⊥ ∩ T_pM`.
    pub fn horizontal_space(&self, p: &Vector) -> Result<Vec<Vector>> {
        self.check_dim(p)?;
        self.require_on_manifold(p)?;
        let f = self.frame(&p.to_real())?;
        Ok((self.vertical_count()..self.kind.manifold_dim())
            .map(|j| col_vec(&(&f.tangent * &as_col(&f.eigenvectors.column(j)))))
            .collect())
    }

    /// `df_p(v)` for an ambient vector `v`.
    pub fn pushforward(&self, p: &Vector, v: &Vector) -> Result<Vector> {
        self.check_dim(p)?;
        self.check_dim(v)?;
        let f = self.frame(&p.to_real())?;
        let coords = &f.tangent.transpose() * &as_col(v);
        Ok(col_vec(&(&f.jt * &coords)))
    }

    /// Minimum-norm horizontal `w` with `df_x(w)` the least-squares fit to
    /// `u`; also returns `‖df_x(w) − u‖`.
    fn lift_vector(&self, f: &Frame, u: &[f64]) -> (Vec<f64>, f64) {
        let d = self.kind.manifold_dim();
        let u = Matrix::from_real(u.len(), 1, u).expect("nonempty");
        let b = &f.jt.transpose() * &u;
        let mut y = Matrix::zeros(d, 1, Field::Real);
        for j in self.vertical_count()..d {
            let v = as_col(&f.eigenvectors.column(j));
            let c = (&v.transpose() * &b).get(0, 0).re / f.eigenvalues[j];
            y = &y + &v.scale_real(c);
        }
        let fit = (&(&f.jt * &y) - &u).hs_norm();
        let w = &f.tangent * &y;
        (w.entries().iter().map(|z| z.re).collect(), fit)
    }

    /// The horizontal lift of a target tangent vector `u` at `p`.
    pub fn horizontal_velocity(&self, p: &Vector, u: &Vector) -> Result<Vector> {
        self.check_dim(p)?;
        self.require_on_manifold(p)?;
        if u.dim() != self.kind.target_ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.kind.target_ambient_dim().to_string(),
                got: u.dim().to_string(),
            });
        }
        let f = self.frame(&p.to_real())?;
        let (w, residual) = self.lift_vector(&f, &u.to_real());
        if residual > 1e-6 * u.norm().max(1e-300) {
            return Err(Error::NotTangent { residual });
        }
        Ok(Vector::real(&w))
    }

    /// Smallest singular value of `df_p` restricted to `H_p`: the image of a
    /// small ball of radius `r` about `p` contains a target ball of radius
    /// about this gain times `r`.
    pub fn min_horizontal_gain(&self, p: &Vector) -> Result<f64> {
        self.check_dim(p)?;
        self.require_on_manifold(p)?;
        let f = self.frame(&p.to_real())?;
        Ok(f.eigenvalues[self.vertical_count()].max(0.0).sqrt())
    }

    fn velocity_field(&self, x: &[f64], u: &[f64]) -> Result<Vec<f64>> {
        let f = self.frame(x)?;
        Ok(self.lift_vector(&f, u).0)
    }

    fn trust_check(&self, x: &[f64], t: f64) -> Result<()> {
        if let SubmersionKind::GlToSpd(_) = self.kind {
            let condition = self.gl_condition(x);
            if condition > GL_TRUST_CONDITION {
                return Err(Error::LeftTrustRegion { t, condition });
            }
        }
        Ok(())
    }

    /// Horizontal lift of `alpha` starting at `p0 ∈ f⁻¹(α(a))`, by classical
    /// RK4 with the path's step count, reprojecting onto the sphere after
    /// each step.
    pub fn horizontal_lift(&self, alpha: &BasePath, p0: &Vector) -> Result<LiftedPath> {
        self.check_dim(p0)?;
        self.require_on_manifold(p0)?;
        let h = alpha.step();
        if h > MAX_LIFT_STEP {
            return Err(Error::StepTooLarge { step: h, max: MAX_LIFT_STEP });
        }
        let a0 = alpha.at(alpha.a);
        if a0.dim() != self.kind.target_ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.kind.target_ambient_dim().to_string(),
                got: a0.dim().to_string(),
            });
        }
        let residual = self.map(p0)?.max_abs_diff(&a0);
        if residual > MEMBERSHIP_TOL * a0.norm().max(1.0) {
            return Err(Error::OffFiber { residual });
        }

        let axpy = |x: &[f64], s: f64, k: &[f64]| -> Vec<f64> { x.iter().zip(k).map(|(a, b)| a + s * b).collect() };
        let mut x = p0.to_real();
        let mut times = Vec::with_capacity(alpha.steps + 1);
        let mut points = Vec::with_capacity(alpha.steps + 1);
        let mut velocities = Vec::with_capacity(alpha.steps + 1);
        for i in 0..=alpha.steps {
            let t = alpha.a + i as f64 * h;
            let v0 = self.velocity_field(&x, &alpha.velocity(t).to_real())?;
            times.push(t);
            points.push(Vector::real(&x));
            velocities.push(Vector::real(&v0));
            if i == alpha.steps {
                break;
            }
            let um = alpha.velocity(t + h / 2.0).to_real();
            // Stage points are checked too: a stage can jump far outside
            // the region where the lifted field is tame.
            let stage = |y: Vec<f64>, s: f64, u: &[f64]| -> Result<Vec<f64>> {
                self.trust_check(&y, s)?;
                self.velocity_field(&y, u)
            };
            let k1 = v0;
            let k2 = stage(axpy(&x, h / 2.0, &k1), t + h / 2.0, &um)?;
            let k3 = stage(axpy(&x, h / 2.0, &k2), t + h / 2.0, &um)?;
            let k4 = stage(axpy(&x, h, &k3), t + h, &alpha.velocity(t + h).to_real())?;
            x = x
                .iter()
                .enumerate()
                .map(|(j, &xj)| xj + h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]))
                .collect();
            x = self.retract(&x);
            self.trust_check(&x, t + h)?;
        }
        Ok(LiftedPath {
            times,
            points,
            velocities,
        })
    }

    /// Transports each fiber point over `alpha(a)` along the closed path.
    pub fn fiber_transport(&self, alpha: &BasePath, samples: &[Vector]) -> Result<Vec<(Vector, Vector)>> {
        let gap = alpha.gap();
        if gap > MEMBERSHIP_TOL {
            return Err(Error::NotClosed { gap });
        }
        samples
            .iter()
            .map(|p| Ok((p.clone(), self.horizontal_lift(alpha, p)?.end().clone())))
            .collect()
    }

    /// Vertical part of `[X₁, X₂]` at `p`, where `Xᵢ` is the horizontal lift
    /// of the field obtained by projecting `uᵢ` onto the tangent space of the
    /// target at each nearby image point. Uses [`CURVATURE_STEP`].
    pub fn curvature_numeric(&self, p: &Vector, u1: &Vector, u2: &Vector) -> Result<Vector> {
        self.curvature_with_step(p, u1, u2, CURVATURE_STEP)
    }

    pub fn curvature_with_step(&self, p: &Vector, u1: &Vector, u2: &Vector, h: f64) -> Result<Vector> {
        self.check_dim(p)?;
        self.require_on_manifold(p)?;
        let x = p.to_real();
        let f = self.frame(&x)?;
        let lift = |u: &Vector| -> Result<Vec<f64>> {
            if u.dim() != self.kind.target_ambient_dim() {
                return Err(Error::DimensionMismatch {
                    expected: self.kind.target_ambient_dim().to_string(),
                    got: u.dim().to_string(),
                });
            }
            let (w, residual) = self.lift_vector(&f, &u.to_real());
            if residual > 1e-6 * u.norm().max(1e-300) {
                return Err(Error::NotTangent { residual });
            }
            Ok(w)
        };
        let x1 = lift(u1)?;
        let x2 = lift(u2)?;
        let field_at = |y: &[f64], u: &Vector| -> Result<Vec<f64>> { self.velocity_field(&self.retract(y), &u.to_real()) };
        // D X_u · v by central differences along retracted points.
        let deriv = |u: &Vector, v: &[f64]| -> Result<Vec<f64>> {
            let plus: Vec<f64> = x.iter().zip(v).map(|(a, b)| a + h * b).collect();
            let minus: Vec<f64> = x.iter().zip(v).map(|(a, b)| a - h * b).collect();
            let fp = field_at(&plus, u)?;
            let fm = field_at(&minus, u)?;
            Ok(fp.iter().zip(&fm).map(|(a, b)| (a - b) / (2.0 * h)).collect())
        };
        let d2_x1 = deriv(u2, &x1)?;
        let d1_x2 = deriv(u1, &x2)?;
        let bracket = Vector::real(&d2_x1.iter().zip(&d1_x2).map(|(a, b)| a - b).collect::<Vec<_>>());
        let mut out = Vector::zeros(x.len(), Field::Real);
        for v in self.vertical_from(&f) {
            let c: f64 = v.to_real().iter().zip(bracket.to_real()).map(|(a, b)| a * b).sum();
            out = &out + &(&v * c);
        }
        Ok(out)
    }
}

/// Phase `φ` with `p₁ = e^{iφ}·p₀` for two points of the same circle fiber
/// of the complex Hopf map (realified coordinates).
pub fn holonomy_phase(p0: &Vector, p1: &Vector) -> f64 {
    let z0 = Vector::from_realified(p0);
    let z1 = Vector::from_realified(p1);
    let s: Complex64 = z1.entries().iter().zip(z0.entries()).map(|(a, b)| a * b.conj()).sum();
    s.arg()
}

/// Closure type of base paths.
pub type PathFn = Arc<dyn Fn(f64) -> Vector + Send + Sync>;

/// A path `α: [a, b] → target` sampled at `steps + 1` equally spaced times.
/// The closure must be defined slightly beyond the interval (the velocity
/// stencil reaches `2·10⁻³` outside it).
#[derive(Clone)]
pub struct BasePath {
    f: PathFn,
    pub a: f64,
    pub b: f64,
    pub steps: usize,
}

impl fmt::Debug for BasePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BasePath")
            .field("a", &self.a)
            .field("b", &self.b)
            .field("steps", &self.steps)
            .finish()
    }
}

impl BasePath {
    pub fn new(f: impl Fn(f64) -> Vector + Send + Sync + 'static, a: f64, b: f64, steps: usize) -> Result<Self> {
        if !(a < b) || steps == 0 {
            return Err(Error::InvalidArgument(format!(
                "path needs a < b and at least one step, got [{a}, {b}] with {steps}"
            )));
        }
        Ok(BasePath {
            f: Arc::new(f),
            a,
            b,
            steps,
        })
    }

    /// `α = f ∘ γ` for a curve `γ` in the total space.
    pub fn projected(
        sub: Submersion,
        gamma: impl Fn(f64) -> Vector + Send + Sync + 'static,
        a: f64,
        b: f64,
        steps: usize,
    ) -> Result<Self> {
        BasePath::new(move |t| sub.map(&gamma(t)).expect("curve has the ambient dimension"), a, b, steps)
    }

    /// The constant path at `point`.
    pub fn constant(point: Vector, a: f64, b: f64, steps: usize) -> Result<Self> {
        BasePath::new(move |_| point.clone(), a, b, steps)
    }

    pub fn at(&self, t: f64) -> Vector {
        (self.f)(t)
    }

    /// `α'(t)` by the fourth-order central stencil.
    pub fn velocity(&self, t: f64) -> Vector {
        let d = VELOCITY_STEP;
        let f1 = &self.at(t + d) - &self.at(t - d);
        let f2 = &self.at(t + 2.0 * d) - &self.at(t - 2.0 * d);
        &(&f1 * (8.0 / (12.0 * d))) - &(&f2 * (1.0 / (12.0 * d)))
    }

    pub fn step(&self) -> f64 {
        (self.b - self.a) / self.steps as f64
    }

    pub fn with_steps(&self, steps: usize) -> Result<Self> {
        BasePath::new_arc(self.f.clone(), self.a, self.b, steps)
    }

    fn new_arc(f: PathFn, a: f64, b: f64, steps: usize) -> Result<Self> {
        if steps == 0 {
            return Err(Error::InvalidArgument("path needs at least one step".into()));
        }
        Ok(BasePath { f, a, b, steps })
    }

    /// `t ↦ α(a + b − t)`.
    pub fn reversed(&self) -> BasePath {
        let f = self.f.clone();
        let (a, b) = (self.a, self.b);
        BasePath {
            f: Arc::new(move |t| f(a + b - t)),
            a,
            b,
            steps: self.steps,
        }
    }

    /// `‖α(b) − α(a)‖`, max-abs.
    pub fn gap(&self) -> f64 {
        self.at(self.b).max_abs_diff(&self.at(self.a))
    }
}

/// Great-circle arc `cos(πt)·p + sin(πt)·q` for orthonormal `p, q`.
pub fn great_circle(p: Vector, q: Vector) -> impl Fn(f64) -> Vector + Send + Sync + 'static {
    move |t| &(&p * (PI * t).cos()) + &(&q * (PI * t).sin())
}

/// Samples of a horizontal lift.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftedPath {
    pub times: Vec<f64>,
    pub points: Vec<Vector>,
    /// Right-hand side `β̇` of the lifting equation at each sample.
    pub velocities: Vec<Vector>,
}

impl LiftedPath {
    pub fn start(&self) -> &Vector {
        &self.points[0]
    }

    pub fn end(&self) -> &Vector {
        self.points.last().expect("at least one sample")
    }

    /// `max_i ‖f(β(tᵢ)) − α(tᵢ)‖` (max-abs).
    pub fn projection_residual(&self, sub: &Submersion, alpha: &BasePath) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for (t, p) in self.times.iter().zip(&self.points) {
            worst = worst.max(sub.map(p)?.max_abs_diff(&alpha.at(*t)));
        }
        Ok(worst)
    }

    /// `max |⟨β̇(tᵢ), v⟩|` over vertical basis vectors `v` at each sample.
    pub fn horizontality_residual(&self, sub: &Submersion) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for (p, v) in self.points.iter().zip(&self.velocities) {
            let p = Vector::real(&sub.retract(&p.to_real()));
            for w in sub.vertical_space(&p)? {
                let ip: f64 = w.to_real().iter().zip(v.to_real()).map(|(a, b)| a * b).sum();
                worst = worst.max(ip.abs());
            }
        }
        Ok(worst)
    }

    /// Max-abs distance to another lift sampled on a coarser or equal grid
    /// whose times are a subset of these.
    pub fn max_distance_to(&self, coarse: &LiftedPath) -> f64 {
        let ratio = (self.times.len() - 1) / (coarse.times.len() - 1).max(1);
        coarse
            .points
            .iter()
            .enumerate()
            .map(|(i, p)| p.max_abs_diff(&self.points[i * ratio]))
            .fold(0.0, f64::max)
    }
}
