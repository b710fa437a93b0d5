//! Lattices `L = B(Zⁿ)`, tori `Rⁿ/L`, and Hopf quotients.
//!
//! Complex lattices live in `R²ⁿ` through the interleaved realification.
//! Unimodularity decisions are made in exact integer arithmetic after
//! rounding.

use crate::error::{Error, Result};
use crate::linalg::{op_norm, Field, Matrix, Vector};
use crate::manifolds::MAX_CONDITION;
use crate::spectral::eigenvalues_general;

/// Absolute tolerance for recognizing an integer.
pub const INTEGER_TOL: f64 = 1e-9;
/// Torus coordinates are quantized to multiples of this, so that reduction
/// is exactly idempotent.
const COORD_QUANTUM: f64 = 1.0 / (1u64 << 40) as f64;

#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    basis: Matrix,
    inverse: Matrix,
    covolume: f64,
}

impl Lattice {
    /// The lattice spanned by the columns of a real invertible `basis`.
    pub fn new(basis: Matrix) -> Result<Self> {
        basis.require_square()?;
        if basis.field() != Field::Real {
            return Err(Error::InvalidArgument(
                "lattice bases are real; realify complex bases first".into(),
            ));
        }
        let inverse = basis.checked_inverse(MAX_CONDITION)?;
        let covolume = basis.det()?.re.abs();
        Ok(Lattice {
            basis,
            inverse,
            covolume,
        })
    }

    /// `Zⁿ`.
    pub fn integer(n: usize) -> Self {
        Lattice::new(Matrix::identity(n, Field::Real)).expect("identity is invertible")
    }

    /// `B(Z[i]ⁿ)` for a complex invertible `B`, stored in `R²ⁿ`.
    pub fn gaussian(basis: &Matrix) -> Result<Self> {
        Lattice::new(basis.complexify().realify())
    }

    /// `Z[i]ⁿ ⊂ Cⁿ ≅ R²ⁿ`.
    pub fn gaussian_integers(n: usize) -> Self {
        Lattice::integer(2 * n)
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    /// `|det B|`.
    pub fn covolume(&self) -> f64 {
        self.covolume
    }

    /// Image lattice `T(L)`.
    pub fn transformed(&self, t: &Matrix) -> Result<Lattice> {
        Lattice::new(t.matmul(&self.basis)?.real_part())
    }

    /// Coordinates of `x` in the lattice basis.
    pub fn coordinates(&self, x: &Vector) -> Result<Vec<f64>> {
        if x.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim().to_string(),
                got: x.dim().to_string(),
            });
        }
        Ok(self.inverse.apply(&x.complexify())?.entries().iter().map(|c| c.re).collect())
    }

    /// Whether `x ∈ L`, with coordinates integral to [`INTEGER_TOL`].
    pub fn contains(&self, x: &Vector) -> Result<bool> {
        Ok(self
            .coordinates(x)?
            .iter()
            .all(|c| (c - c.round()).abs() <= INTEGER_TOL))
    }
}

pub fn covolume(l: &Lattice) -> f64 {
    l.covolume()
}

/// A point of `Rⁿ/L`, represented in the half-open fundamental
/// parallelepiped of the lattice basis. The coset is canonical; the
/// representative depends on the chosen basis.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusPoint {
    lattice: Lattice,
    coords: Vec<f64>,
    rep: Vector,
}

impl TorusPoint {
    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    /// Fractional coordinates, each in `[0, 1)`.
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn rep(&self) -> &Vector {
        &self.rep
    }
}

fn frac(c: f64) -> f64 {
    let f = ((c - c.floor()) / COORD_QUANTUM).round() * COORD_QUANTUM;
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

/// The canonical quotient map `q: Rⁿ → Rⁿ/L`.
pub fn reduce_mod(l: &Lattice, x: &Vector) -> Result<TorusPoint> {
    let coords: Vec<f64> = l.coordinates(x)?.into_iter().map(frac).collect();
    let rep = l.basis.apply(&Vector::real(&coords))?.to_real();
    Ok(TorusPoint {
        lattice: l.clone(),
        coords,
        rep: Vector::real(&rep),
    })
}

/// The map `Â: Rⁿ/L₁ → Rⁿ/L₂` induced by a linear `A` with `A(L₁) = L₂`,
/// so that `Â ∘ q₁ = q₂ ∘ A`.
pub fn induced_torus_map(a: &Matrix, p: &TorusPoint, target: &Lattice) -> Result<TorusPoint> {
    let image = p.lattice.transformed(a)?;
    if !lattices_equal(&image, target)? {
        return Err(Error::InvalidArgument("A does not carry the source lattice onto the target".into()));
    }
    reduce_mod(target, &a.apply(&p.rep)?)
}

// ---------------------------------------------------------------------------
// Exact integer arithmetic
// ---------------------------------------------------------------------------

/// Rounds every entry to an integer, or `None` if some entry is farther
/// than `tol` from one (or is complex).
pub fn round_integer_matrix(t: &Matrix, tol: f64) -> Option<Vec<Vec<i128>>> {
    if t.max_imag() > 0.0 {
        return None;
    }
    let n = t.cols();
    let mut out = Vec::with_capacity(t.rows());
    for i in 0..t.rows() {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            let x = t.get(i, j).re;
            let r = x.round();
            if (x - r).abs() > tol || r.abs() > 1e30 {
                return None;
            }
            row.push(r as i128);
        }
        out.push(row);
    }
    Some(out)
}

/// Exact determinant: Leibniz expansion for `n ≤ 5`, Bareiss fraction-free
/// elimination otherwise.
pub fn integer_det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    if n <= 5 {
        return crate::linalg::permutations(n)
            .iter()
            .map(|p| {
                let prod: i128 = p.iter().enumerate().map(|(i, &j)| m[i][j]).product();
                crate::linalg::permutation_sign(p) as i128 * prod
            })
            .sum();
    }
    let mut a: Vec<Vec<i128>> = m.to_vec();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Adjugate (transpose of the cofactor matrix), so `M·adj(M) = det(M)·I`.
pub fn integer_adjugate(m: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let n = m.len();
    if n == 1 {
        return vec![vec![1]];
    }
    let mut adj = vec![vec![0i128; n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<i128>> = m
                .iter()
                .enumerate()
                .filter(|&(r, _)| r != i)
                .map(|(_, row)| {
                    row.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != j)
                        .map(|(_, &x)| x)
                        .collect()
                })
                .collect();
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            adj[j][i] = sign * integer_det(&minor);
        }
    }
    adj
}

fn integer_matmul(a: &[Vec<i128>], b: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let n = a.len();
    let m = b[0].len();
    (0..n)
        .map(|i| (0..m).map(|j| (0..b.len()).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

fn is_integer_identity(m: &[Vec<i128>]) -> bool {
    m.iter()
        .enumerate()
        .all(|(i, row)| row.iter().enumerate().all(|(j, &x)| x == i128::from(i == j)))
}

/// Whether `T` is an integer matrix with determinant exactly 1. Also
/// confirms that the adjugate is an integer two-sided inverse.
pub fn is_unimodular_integer(t: &Matrix) -> bool {
    if !t.is_square() || t.field() != Field::Real {
        return false;
    }
    let Some(m) = round_integer_matrix(t, INTEGER_TOL) else {
        return false;
    };
    if integer_det(&m) != 1 {
        return false;
    }
    let adj = integer_adjugate(&m);
    is_integer_identity(&integer_matmul(&m, &adj)) && is_integer_identity(&integer_matmul(&adj, &m))
}

/// Equality of lattices: `B₂⁻¹B₁` is an integer matrix of determinant ±1.
pub fn lattices_equal(l1: &Lattice, l2: &Lattice) -> Result<bool> {
    if l1.dim() != l2.dim() {
        return Err(Error::DimensionMismatch {
            expected: l1.dim().to_string(),
            got: l2.dim().to_string(),
        });
    }
    let m = &l2.inverse * &l1.basis;
    Ok(match round_integer_matrix(&m, INTEGER_TOL) {
        Some(mi) => integer_det(&mi).abs() == 1,
        None => false,
    })
}

// ---------------------------------------------------------------------------
// Hopf quotients
// ---------------------------------------------------------------------------

const HOPF_MAX_STEPS: usize = 100_000;

/// Canonical representative of the orbit `{Aʲv : j ∈ Z}` for a strict
/// contraction `A`: the unique `w = Aʲv` with `|w| ≥ 1 > |Aw|`.
pub fn hopf_representative(a: &Matrix, v: &Vector) -> Result<(Vector, i64)> {
    a.require_square()?;
    if v.dim() != a.cols() {
        return Err(Error::DimensionMismatch {
            expected: a.cols().to_string(),
            got: v.dim().to_string(),
        });
    }
    let norm = match op_norm(a) {
        Ok(x) => x,
        Err(Error::NoConvergence { upper, .. }) => upper,
        Err(e) => return Err(e),
    };
    if norm >= 1.0 {
        return Err(Error::NotContraction { norm });
    }
    if v.norm() == 0.0 {
        return Err(Error::ZeroVector);
    }
    let inv = a.checked_inverse(MAX_CONDITION)?;
    let mut w = v.clone();
    let mut j: i64 = 0;
    for _ in 0..HOPF_MAX_STEPS {
        if w.norm() < 1.0 {
            w = inv.apply(&w)?;
            j -= 1;
            continue;
        }
        let next = a.apply(&w)?;
        if next.norm() >= 1.0 {
            w = next;
            j += 1;
            continue;
        }
        return Ok((w, j));
    }
    Err(Error::DidNotConverge {
        what: "Hopf orbit normalization",
        residual: w.norm(),
    })
}

/// Whether every orbit `Aˡv` tends to zero (spectral radius below 1).
/// Weaker than the contraction required by [`hopf_representative`].
pub fn is_spectral_contraction(a: &Matrix) -> Result<bool> {
    Ok(eigenvalues_general(a)?.iter().all(|l| l.norm() < 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn covolume_examples() {
        assert_eq!(covolume(&Lattice::integer(3)), 1.0);
        let l = Lattice::new(Matrix::identity(3, Field::Real).scale_real(2.0 * PI)).unwrap();
        assert!((l.covolume() - (2.0 * PI).powi(3)).abs() <= 1e-12 * l.covolume());
        assert!((Lattice::new(Matrix::diag_real(&[2.0, 3.0])).unwrap().covolume() - 6.0).abs() < 1e-15);
        assert_eq!(Lattice::gaussian_integers(2).covolume(), 1.0);
        assert!(Lattice::new(Matrix::from_rows(&[&[1.0, 2.0], &[2.0, 4.0]])).is_err());
    }

    #[test]
    fn reduce_examples() {
        let z2 = Lattice::integer(2);
        let p = reduce_mod(&z2, &Vector::real(&[1.5, -0.25])).unwrap();
        assert_eq!(p.rep(), &Vector::real(&[0.5, 0.75]));
        let p = reduce_mod(&z2, &Vector::real(&[3.0, -7.0])).unwrap();
        assert_eq!(p.rep(), &Vector::real(&[0.0, 0.0]));

        let l = Lattice::new(Matrix::from_rows(&[&[1.3, 0.4], &[-0.2, 0.9]])).unwrap();
        let x = Vector::real(&[5.123, -3.77]);
        let p = reduce_mod(&l, &x).unwrap();
        let q = reduce_mod(&l, p.rep()).unwrap();
        assert_eq!(p, q);
        assert!(l.contains(&(&x - p.rep())).unwrap());
        assert!(p.coords().iter().all(|&c| (0.0..1.0).contains(&c)));
    }

    #[test]
    fn unimodular_examples() {
        assert!(is_unimodular_integer(&Matrix::identity(3, Field::Real)));
        assert!(is_unimodular_integer(&Matrix::from_rows(&[&[1.0, 1.0], &[0.0, 1.0]])));
        assert!(!is_unimodular_integer(&Matrix::diag_real(&[2.0, 1.0])));
        assert!(!is_unimodular_integer(&Matrix::diag_real(&[-1.0, 1.0])));
        assert!(!is_unimodular_integer(&Matrix::from_rows(&[&[1.0, 0.5], &[0.0, 1.0]])));
        let adj = integer_adjugate(&[vec![1, 1], vec![0, 1]]);
        assert_eq!(adj, vec![vec![1, -1], vec![0, 1]]);
    }

    #[test]
    fn bareiss_matches_leibniz() {
        let m: Vec<Vec<i128>> = (0..6)
            .map(|i| (0..6).map(|j| ((i * 7 + j * 3) % 5) as i128 - 2 + i128::from(i == j) * 3).collect())
            .collect();
        let leibniz: i128 = crate::linalg::permutations(6)
            .iter()
            .map(|p| {
                let prod: i128 = p.iter().enumerate().map(|(i, &j)| m[i][j]).product();
                crate::linalg::permutation_sign(p) as i128 * prod
            })
            .sum();
        assert_eq!(integer_det(&m), leibniz);
    }

    #[test]
    fn equality_examples() {
        let b = Matrix::from_rows(&[&[2.0, 1.0], &[0.5, 3.0]]);
        let swapped = Matrix::from_rows(&[&[1.0, 2.0], &[3.0, 0.5]]);
        assert!(lattices_equal(&Lattice::new(b).unwrap(), &Lattice::new(swapped).unwrap()).unwrap());
        let shear = Lattice::new(Matrix::from_rows(&[&[1.0, 1.0], &[0.0, 1.0]])).unwrap();
        assert!(lattices_equal(&Lattice::integer(2), &shear).unwrap());
        let two = Lattice::new(Matrix::identity(2, Field::Real).scale_real(2.0)).unwrap();
        assert!(!lattices_equal(&Lattice::integer(2), &two).unwrap());
        assert!(!lattices_equal(&two, &Lattice::integer(2)).unwrap());
    }

    #[test]
    fn induced_map_commutes_with_quotient() {
        let l1 = Lattice::integer(2);
        let a = Matrix::from_rows(&[&[2.0, 1.0], &[1.0, 1.5]]);
        let l2 = l1.transformed(&a).unwrap();
        let x = Vector::real(&[3.7, -1.2]);
        let lhs = induced_torus_map(&a, &reduce_mod(&l1, &x).unwrap(), &l2).unwrap();
        let rhs = reduce_mod(&l2, &a.apply(&x).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn hopf_examples() {
        let half = Matrix::identity(2, Field::Real).scale_real(0.5);
        let (w, j) = hopf_representative(&half, &Vector::real(&[1.0, 0.0])).unwrap();
        assert_eq!((w, j), (Vector::real(&[1.0, 0.0]), 0));
        // |(2,0)| ≥ 1 but |A(2,0)| = 1 is not < 1, so one more step.
        let (w, j) = hopf_representative(&half, &Vector::real(&[4.0, 0.0])).unwrap();
        assert_eq!((w, j), (Vector::real(&[1.0, 0.0]), 2));
        let (w, j) = hopf_representative(&half, &Vector::real(&[0.3, 0.0])).unwrap();
        assert_eq!((w, j), (Vector::real(&[1.2, 0.0]), -2));

        assert!(matches!(
            hopf_representative(&Matrix::identity(2, Field::Real), &Vector::real(&[1.0, 0.0])),
            Err(Error::NotContraction { .. })
        ));
        assert_eq!(hopf_representative(&half, &Vector::real(&[0.0, 0.0])), Err(Error::ZeroVector));

        // Spectral radius below one but not a contraction.
        let shear = Matrix::from_rows(&[&[0.5, 10.0], &[0.0, 0.5]]);
        assert!(is_spectral_contraction(&shear).unwrap());
        assert!(hopf_representative(&shear, &Vector::real(&[1.0, 1.0])).is_err());
    }
}
