//! Matrix exponential and logarithms.
//!
//! `expm` is the Taylor series `Σ A^k / k!` after scaling by `2^-s`, with
//! `s` squarings afterwards. Logarithms go through spectral decompositions:
//! self-adjoint positive-definite, unitary, special orthogonal, and a
//! decision procedure for real logarithms of real matrices.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{commutator, gram_schmidt, op_norm_or_hs, Field, Matrix, Scalar, Vector, ONE};
use crate::manifolds::SpdMatrix;
use crate::spectral::{eig_normal, eigenvalues_general, eigh};

/// Taylor terms are added until the next-term bound `‖X‖^k / k!` drops to this.
const TERM_BOUND: f64 = 1e-18;

#[derive(Debug, Clone, PartialEq)]
pub struct ExpResult {
    pub value: Matrix,
    pub scaling_squarings: u32,
    pub taylor_terms: usize,
}

/// Matrix exponential by scaling and squaring of the truncated Taylor series.
///
/// Picks `s = max(0, ⌈log₂ ‖A‖_op⌉)` so that `‖A / 2^s‖_op ≤ 1`.
/// Panics if `a` is not square.
pub fn expm(a: &Matrix) -> ExpResult {
    assert!(a.is_square(), "expm requires a square matrix");
    let n = a.rows();
    let norm = op_norm_or_hs(a);
    let mut s: u32 = if norm > 1.0 { norm.log2().ceil() as u32 } else { 0 };
    while norm / 2f64.powi(s as i32) > 1.0 {
        s += 1;
    }
    let x = a.scale_real(1.0 / 2f64.powi(s as i32));
    let xn = norm / 2f64.powi(s as i32);

    let mut sum = Matrix::identity(n, a.field());
    let mut term = sum.clone();
    let mut terms = 1;
    let mut bound = 1.0;
    loop {
        let k = terms as f64;
        bound *= xn / k;
        if bound <= TERM_BOUND {
            break;
        }
        term = (&x * &term).scale_real(1.0 / k);
        sum = &sum + &term;
        terms += 1;
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    ExpResult {
        value: sum,
        scaling_squarings: s,
        taylor_terms: terms,
    }
}

/// Residuals of the exponential group laws for a pair of matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpIdentityReport {
    /// `‖exp(A)·exp(−A) − I‖_HS / √n`
    pub inverse_residual: f64,
    /// `‖exp(A)* − exp(A*)‖_HS / ‖exp(A)‖_HS`
    pub adjoint_residual: f64,
    /// `‖exp(A+B) − exp(A)·exp(B)‖_HS / ‖exp(A+B)‖_HS`; only expected to
    /// vanish when `commuting` is true.
    pub product_rule_residual: f64,
    /// `‖AB − BA‖_HS ≤ 1e-12`
    pub commuting: bool,
}

impl ExpIdentityReport {
    /// Every law that applies holds within `tol`.
    pub fn holds(&self, tol: f64) -> bool {
        self.inverse_residual <= tol
            && self.adjoint_residual <= tol
            && (!self.commuting || self.product_rule_residual <= tol)
    }
}

pub fn expm_identities_check(a: &Matrix, b: &Matrix) -> Result<ExpIdentityReport> {
    a.require_square()?;
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch {
            expected: format!("{:?}", a.shape()),
            got: format!("{:?}", b.shape()),
        });
    }
    let n = a.rows();
    let ea = expm(a).value;
    let ema = expm(&-a).value;
    let id = Matrix::identity(n, a.field());
    let inverse_residual = (&ea * &ema).dist(&id) / (n as f64).sqrt();
    let adjoint_residual = ea.adjoint().dist(&expm(&a.adjoint()).value) / ea.hs_norm();
    let eab = expm(&(a + b)).value;
    let product_rule_residual = eab.dist(&(&ea * &expm(b).value)) / eab.hs_norm();
    Ok(ExpIdentityReport {
        inverse_residual,
        adjoint_residual,
        product_rule_residual,
        commuting: commutator(a, b).hs_norm() <= 1e-12,
    })
}

/// `(det(exp A), exp(tr A))` computed along independent paths.
pub fn det_exp_identity(a: &Matrix) -> Result<(Scalar, Scalar)> {
    let tr = a.trace()?;
    let lhs = expm(a).value.det()?;
    Ok((lhs, tr.exp()))
}

/// Integrates `E' = A·E` by classical RK4 across `t_grid`, starting from
/// `E(t₀) = exp(t₀·A)` (so `E(0) = I` when the grid starts at zero), and
/// returns `max_t ‖E_rk4(t) − exp(t·A)‖_HS`.
pub fn exp_ode_residual(a: &Matrix, t_grid: &[f64]) -> Result<f64> {
    a.require_square()?;
    let (&t0, rest) = t_grid
        .split_first()
        .ok_or_else(|| Error::InvalidArgument("time grid is empty".into()))?;
    if t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("time grid must be strictly ascending".into()));
    }
    let mut e = expm(&a.scale_real(t0)).value;
    let mut t = t0;
    let mut worst: f64 = 0.0;
    for &t_next in rest {
        let h = t_next - t;
        let k1 = a * &e;
        let k2 = a * &(&e + &k1.scale_real(h / 2.0));
        let k3 = a * &(&e + &k2.scale_real(h / 2.0));
        let k4 = a * &(&e + &k3.scale_real(h));
        let incr = &(&(&k1 + &k2.scale_real(2.0)) + &k3.scale_real(2.0)) + &k4;
        e = &e + &incr.scale_real(h / 6.0);
        t = t_next;
        worst = worst.max(e.dist(&expm(&a.scale_real(t)).value));
    }
    Ok(worst)
}

/// The unique self-adjoint logarithm of a positive-definite matrix.
pub fn logm_spd(p: &SpdMatrix) -> Matrix {
    p.apply_fn(f64::ln)
}

const UNITARY_TOL: f64 = 1e-9;

fn unitary_residual(u: &Matrix) -> f64 {
    (&u.adjoint() * u).dist(&Matrix::identity(u.rows(), u.field()))
}

/// Principal argument in `(−π, π]`.
fn principal_arg(z: Scalar) -> f64 {
    let theta = z.arg();
    if theta <= -PI {
        PI
    } else {
        theta
    }
}

/// Anti-self-adjoint logarithm of a unitary matrix, using principal
/// arguments in `(−π, π]`. Real orthogonal input is treated as complex.
pub fn logm_unitary(u: &Matrix) -> Result<Matrix> {
    u.require_square()?;
    let u = u.complexify();
    let residual = unitary_residual(&u);
    if residual > UNITARY_TOL {
        return Err(Error::NotUnitary { residual });
    }
    let e = eig_normal(&u)?;
    let a = e.reconstruct_with(|l| Complex64::new(0.0, principal_arg(l)));
    Ok((&a - &a.adjoint()).scale_real(0.5))
}

/// Eigenvalues within this distance of −1 are paired into rotation-by-π blocks.
const MINUS_ONE_TOL: f64 = 1e-9;

/// Real antisymmetric logarithm of a rotation (orthogonal, determinant 1).
///
/// Eigenvalues `e^{±iθ}` away from −1 contribute their principal logs; the
/// −1 eigenspace (even-dimensional when `det = 1`) gets an orthonormal real
/// basis whose consecutive vectors are paired into `±π` rotation blocks.
pub fn logm_special_orthogonal(r: &Matrix) -> Result<Matrix> {
    r.require_square()?;
    if r.field() != Field::Real {
        return Err(Error::InvalidArgument(
            "logm_special_orthogonal expects a real matrix".into(),
        ));
    }
    let n = r.rows();
    let residual = unitary_residual(r);
    if residual > UNITARY_TOL {
        return Err(Error::NotUnitary { residual });
    }
    let d = r.det()?.re;
    if (d - 1.0).abs() > UNITARY_TOL {
        return Err(Error::NoRealAntisymmetricLog);
    }
    let e = eig_normal(r)?;
    let mut generic = Matrix::zeros(n, n, Field::Complex);
    let mut minus_one = Matrix::zeros(n, n, Field::Complex);
    for (j, &l) in e.eigenvalues.iter().enumerate() {
        let v = Matrix::from_columns(&[e.basis.column(j)])?;
        let proj = &v * &v.adjoint();
        if (l + ONE).norm() <= MINUS_ONE_TOL {
            minus_one = &minus_one + &proj;
        } else {
            generic = &generic + &proj.scale(Complex64::new(0.0, principal_arg(l)));
        }
    }
    let mut a = generic.real_part();
    let p = minus_one.real_part();
    if p.hs_norm() > 0.0 {
        let w = gram_schmidt(&p.columns())?;
        if w.len() % 2 != 0 {
            return Err(Error::NoRealAntisymmetricLog);
        }
        for pair in w.chunks(2) {
            let w1 = Matrix::from_columns(&[pair[0].clone()])?;
            let w2 = Matrix::from_columns(&[pair[1].clone()])?;
            let block = &(&w2 * &w1.transpose()) - &(&w1 * &w2.transpose());
            a = &a + &block.scale_real(PI);
        }
    }
    Ok((&a - &a.transpose()).scale_real(0.5))
}

/// Why a real matrix has no real logarithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Obstruction {
    None,
    NegativeRealEigenvalue,
    Singular,
}

/// Outcome of [`real_log_exists`].
#[derive(Debug, Clone, PartialEq)]
pub struct LogReport {
    /// A real logarithm, when one exists and the input is diagonalizable.
    pub value: Option<Matrix>,
    pub exists_real: bool,
    pub obstruction: Obstruction,
}

const SINGULAR_CONDITION: f64 = 1e12;
const NULL_SPACE_TOL: f64 = 1e-7;

/// Orthonormal basis of the (numerical) null space of `m`: eigenvectors of
/// `m* m` whose singular value is at most `tol`.
fn null_space(m: &Matrix, tol: f64) -> Result<Vec<Vector>> {
    let g = &m.adjoint() * m;
    let e = eigh(&g)?;
    Ok(e.real_eigenvalues()
        .iter()
        .enumerate()
        .filter(|(_, &l)| l.max(0.0).sqrt() <= tol)
        .map(|(j, _)| e.basis.column(j))
        .collect())
}

/// Decides whether a real matrix is the exponential of a real matrix.
///
/// Restricted to matrices diagonalizable over C when a negative eigenvalue
/// is present: then a real logarithm exists iff every negative eigenvalue
/// has even multiplicity, and the −λ eigenspaces are split into real
/// rotation-by-π pairs. Without negative eigenvalues a real logarithm
/// always exists; its value is computed when the matrix is diagonalizable.
/// A defective matrix with a negative eigenvalue yields
/// [`Error::Unsupported`].
pub fn real_log_exists(b: &Matrix) -> Result<LogReport> {
    b.require_square()?;
    if b.field() != Field::Real {
        return Err(Error::InvalidArgument("real_log_exists expects a real matrix".into()));
    }
    let n = b.rows();
    if b.condition_estimate() > SINGULAR_CONDITION {
        return Ok(LogReport {
            value: None,
            exists_real: false,
            obstruction: Obstruction::Singular,
        });
    }
    let ev = eigenvalues_general(b)?;
    let scale = ev.iter().map(|l| l.norm()).fold(1.0, f64::max);

    // eigenvalues_general returns identical values for each multiple root.
    let mut distinct: Vec<(Scalar, usize)> = Vec::new();
    for l in ev {
        match distinct.iter_mut().find(|(m, _)| *m == l) {
            Some(entry) => entry.1 += 1,
            None => distinct.push((l, 1)),
        }
    }

    let bc = b.complexify();
    let id = Matrix::identity(n, Field::Complex);
    let mut eigenspaces = Vec::with_capacity(distinct.len());
    let mut diagonalizable = true;
    for &(l, mult) in &distinct {
        let negative = l.im == 0.0 && l.re < 0.0;
        let shifted = if negative {
            // Real shift keeps the eigenspace basis real.
            b - &Matrix::identity(n, Field::Real).scale_real(l.re)
        } else {
            &bc - &id.scale(l)
        };
        let basis = null_space(&shifted, NULL_SPACE_TOL * scale)?;
        if basis.len() != mult {
            diagonalizable = false;
        }
        eigenspaces.push((l, mult, negative, basis));
    }

    let has_negative = eigenspaces.iter().any(|e| e.2);
    if has_negative && !diagonalizable {
        return Err(Error::Unsupported(
            "real-log decision for a non-diagonalizable matrix with a negative eigenvalue".into(),
        ));
    }
    if eigenspaces.iter().any(|e| e.2 && e.1 % 2 == 1) {
        return Ok(LogReport {
            value: None,
            exists_real: false,
            obstruction: Obstruction::NegativeRealEigenvalue,
        });
    }
    if !diagonalizable {
        return Ok(LogReport {
            value: None,
            exists_real: true,
            obstruction: Obstruction::None,
        });
    }

    let mut columns: Vec<Vector> = Vec::with_capacity(n);
    let mut d = Matrix::zeros(n, n, Field::Complex).entries().to_vec();
    for (l, _, negative, basis) in &eigenspaces {
        if *negative {
            let ln_abs = l.norm().ln();
            for pair in basis.chunks(2) {
                let j = columns.len();
                columns.push(pair[0].complexify());
                columns.push(pair[1].complexify());
                d[j * n + j] = Complex64::new(ln_abs, 0.0);
                d[(j + 1) * n + j + 1] = Complex64::new(ln_abs, 0.0);
                d[(j + 1) * n + j] = Complex64::new(PI, 0.0);
                d[j * n + j + 1] = Complex64::new(-PI, 0.0);
            }
        } else {
            let log_l = Complex64::new(l.norm().ln(), principal_arg(*l));
            for v in basis {
                let j = columns.len();
                columns.push(v.complexify());
                d[j * n + j] = log_l;
            }
        }
    }
    let v = Matrix::from_columns(&columns)?;
    let d = Matrix::new(n, n, Field::Complex, d)?;
    let log = &(&v * &d) * &v.inverse()?;
    let value = log.real_part();
    let residual = expm(&value).value.dist(b) / b.hs_norm();
    if residual > 1e-8 {
        return Err(Error::DidNotConverge {
            what: "real logarithm reconstruction",
            residual,
        });
    }
    Ok(LogReport {
        value: Some(value),
        exists_real: true,
        obstruction: Obstruction::None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;
    use std::f64::consts::E;

    #[test]
    fn expm_examples() {
        let z = expm(&Matrix::zeros(3, 3, Field::Real));
        assert_eq!(z.value, Matrix::identity(3, Field::Real));
        assert_eq!(z.scaling_squarings, 0);
        assert_eq!(z.taylor_terms, 1);

        let d = expm(&Matrix::diag_real(&[0.5, -1.25])).value;
        assert!((d.get(0, 0).re - 0.5f64.exp()).abs() < 1e-15);
        assert!((d.get(1, 1).re - (-1.25f64).exp()).abs() < 1e-15);
        assert_eq!(d.get(0, 1).norm(), 0.0);

        let theta: f64 = 1.0;
        let g = Matrix::from_rows(&[&[0.0, -theta], &[theta, 0.0]]);
        let r = expm(&g).value;
        let expected = Matrix::from_rows(&[&[theta.cos(), -theta.sin()], &[theta.sin(), theta.cos()]]);
        assert!(r.dist(&expected) < 1e-12);
    }

    #[test]
    fn expm_scaling_count() {
        let r = expm(&Matrix::diag_real(&[5.0, 0.0]));
        assert_eq!(r.scaling_squarings, 3);
        assert!((r.value.get(0, 0).re - 5f64.exp()).abs() < 1e-12 * 5f64.exp());
    }

    #[test]
    fn identity_report_examples() {
        let z = Matrix::zeros(2, 2, Field::Real);
        let rep = expm_identities_check(&z, &z).unwrap();
        assert_eq!(rep.inverse_residual, 0.0);
        assert_eq!(rep.adjoint_residual, 0.0);
        assert_eq!(rep.product_rule_residual, 0.0);

        let a = sample::real_matrix(&mut sample::rng(1), 3, 3, -1.0, 1.0);
        let rep = expm_identities_check(&a, &(&a * &a)).unwrap();
        assert!(rep.commuting);
        assert!(rep.holds(1e-9));

        let n1 = Matrix::from_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let n2 = Matrix::from_rows(&[&[0.0, 0.0], &[1.0, 0.0]]);
        let rep = expm_identities_check(&n1, &n2).unwrap();
        assert!(!rep.commuting);
        assert!(rep.product_rule_residual > 1e-3);
    }

    #[test]
    fn det_exp_examples() {
        let (l, r) = det_exp_identity(&Matrix::zeros(2, 2, Field::Real)).unwrap();
        assert_eq!((l, r), (ONE, ONE));
        let (l, r) = det_exp_identity(&Matrix::diag_real(&[1.0, 2.0])).unwrap();
        assert!((l - r).norm() <= 1e-12 * r.norm());
        assert!((r.re - 3f64.exp()).abs() < 1e-12);
        let (l, r) = det_exp_identity(&Matrix::from_rows(&[&[1.0, 2.0], &[3.0, 4.0]])).unwrap();
        assert!((l - r).norm() <= 1e-9 * r.norm());
        assert!((r.re - 5f64.exp()).abs() < 1e-10);
    }

    #[test]
    fn ode_residual_examples() {
        let grid: Vec<f64> = (0..=100).map(|k| k as f64 * 0.01).collect();
        assert_eq!(exp_ode_residual(&Matrix::zeros(2, 2, Field::Real), &grid).unwrap(), 0.0);
        let one = Matrix::from_rows(&[&[1.0]]);
        assert!(exp_ode_residual(&one, &grid).unwrap() <= 1e-8);
        assert!(exp_ode_residual(&one, &[]).is_err());
        assert!(exp_ode_residual(&one, &[0.0, 0.0]).is_err());
    }

    #[test]
    fn logm_spd_examples() {
        let i = SpdMatrix::new(Matrix::identity(3, Field::Real)).unwrap();
        assert!(logm_spd(&i).hs_norm() < 1e-15);
        let p = SpdMatrix::new(Matrix::diag_real(&[E, E * E])).unwrap();
        assert!(logm_spd(&p).dist(&Matrix::diag_real(&[1.0, 2.0])) < 1e-14);
    }

    #[test]
    fn logm_unitary_examples() {
        let i = Matrix::identity(2, Field::Complex);
        assert!(logm_unitary(&i).unwrap().hs_norm() < 1e-15);
        let d = Matrix::diag(&[Complex64::new(0.0, 1.0)]);
        let l = logm_unitary(&d).unwrap();
        assert!((l.get(0, 0) - Complex64::new(0.0, PI / 2.0)).norm() < 1e-15);
        assert!(matches!(
            logm_unitary(&Matrix::diag_real(&[2.0, 1.0])),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn logm_special_orthogonal_examples() {
        assert!(logm_special_orthogonal(&Matrix::identity(3, Field::Real))
            .unwrap()
            .hs_norm()
            < 1e-15);
        let minus = Matrix::identity(2, Field::Real).scale_real(-1.0);
        let a = logm_special_orthogonal(&minus).unwrap();
        let expected = Matrix::from_rows(&[&[0.0, -PI], &[PI, 0.0]]);
        assert!(a.dist(&expected) < 1e-14);
        assert!(expm(&a).value.dist(&minus) < 1e-14);

        let reflection = Matrix::diag_real(&[1.0, -1.0]);
        assert_eq!(
            logm_special_orthogonal(&reflection),
            Err(Error::NoRealAntisymmetricLog)
        );
    }

    #[test]
    fn real_log_examples() {
        let r = real_log_exists(&Matrix::diag_real(&[-1.0, -2.0])).unwrap();
        assert!(!r.exists_real);
        assert_eq!(r.obstruction, Obstruction::NegativeRealEigenvalue);
        assert!(r.value.is_none());

        let r = real_log_exists(&Matrix::identity(2, Field::Real).scale_real(-1.0)).unwrap();
        assert!(r.exists_real);
        let expected = Matrix::from_rows(&[&[0.0, -PI], &[PI, 0.0]]);
        assert!(r.value.unwrap().dist(&expected) < 1e-12);

        let r = real_log_exists(&Matrix::diag_real(&[1.0, 2.0])).unwrap();
        assert!(r.exists_real);
        assert!(r.value.unwrap().dist(&Matrix::diag_real(&[0.0, 2f64.ln()])) < 1e-12);

        let r = real_log_exists(&Matrix::from_rows(&[&[1.0, 2.0], &[2.0, 4.0]])).unwrap();
        assert_eq!(r.obstruction, Obstruction::Singular);
        assert!(!r.exists_real);

        let jordan = Matrix::from_rows(&[&[-1.0, 1.0], &[0.0, -1.0]]);
        assert!(matches!(real_log_exists(&jordan), Err(Error::Unsupported(_))));

        // Defective with positive spectrum: exists, value not computed.
        let r = real_log_exists(&Matrix::from_rows(&[&[1.0, 1.0], &[0.0, 1.0]])).unwrap();
        assert!(r.exists_real && r.value.is_none());
    }

    #[test]
    fn real_log_of_rotation_like_matrix() {
        // Complex-conjugate eigenvalues, plus a doubled negative eigenvalue.
        let mut rng = sample::rng(5);
        let q = sample::unitary(&mut rng, Field::Real, 4);
        let core = Matrix::from_rows(&[
            &[0.5, -1.5, 0.0, 0.0],
            &[1.5, 0.5, 0.0, 0.0],
            &[0.0, 0.0, -3.0, 0.0],
            &[0.0, 0.0, 0.0, -3.0],
        ]);
        let b = &(&q * &core) * &q.transpose();
        let r = real_log_exists(&b).unwrap();
        assert!(r.exists_real);
        let v = r.value.unwrap();
        assert!(expm(&v).value.dist(&b) <= 1e-8 * b.hs_norm());
    }
}
