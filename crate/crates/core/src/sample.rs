//! Seeded random instances for property checks and demos.
//!
//! Everything here is deterministic given the seed (ChaCha8).

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::expmlog::expm;
use crate::linalg::{gram_schmidt, op_norm_or_hs, Field, Matrix, Vector};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Entries uniform in `[lo, hi)`.
pub fn real_matrix(rng: &mut SampleRng, rows: usize, cols: usize, lo: f64, hi: f64) -> Matrix {
    let data: Vec<f64> = (0..rows * cols).map(|_| rng.gen_range(lo..hi)).collect();
    Matrix::from_real(rows, cols, &data).expect("positive shape")
}

/// Real and imaginary parts uniform in `[lo, hi)`.
pub fn complex_matrix(rng: &mut SampleRng, rows: usize, cols: usize, lo: f64, hi: f64) -> Matrix {
    let data: Vec<Complex64> = (0..rows * cols)
        .map(|_| Complex64::new(rng.gen_range(lo..hi), rng.gen_range(lo..hi)))
        .collect();
    Matrix::new(rows, cols, Field::Complex, data).expect("positive shape")
}

pub fn matrix(rng: &mut SampleRng, field: Field, rows: usize, cols: usize) -> Matrix {
    match field {
        Field::Real => real_matrix(rng, rows, cols, -1.0, 1.0),
        Field::Complex => complex_matrix(rng, rows, cols, -1.0, 1.0),
    }
}

pub fn vector(rng: &mut SampleRng, field: Field, dim: usize) -> Vector {
    matrix(rng, field, dim, 1).column(0)
}

/// Random square matrix rescaled so that its operator norm equals `norm`.
pub fn with_op_norm(rng: &mut SampleRng, field: Field, n: usize, norm: f64) -> Matrix {
    let a = matrix(rng, field, n, n);
    let s = op_norm_or_hs(&a);
    a.scale_real(norm / s)
}

/// Orthogonal (real) or unitary (complex) matrix from Gram-Schmidt on random columns.
pub fn unitary(rng: &mut SampleRng, field: Field, n: usize) -> Matrix {
    loop {
        let cols: Vec<Vector> = (0..n).map(|_| vector(rng, field, n)).collect();
        let q = gram_schmidt(&cols).expect("nonempty");
        if q.len() == n {
            return Matrix::from_columns(&q).expect("square");
        }
    }
}

/// Special orthogonal matrix `exp(K)` for a random antisymmetric `K`.
pub fn special_orthogonal(rng: &mut SampleRng, n: usize, scale: f64) -> Matrix {
    let a = real_matrix(rng, n, n, -scale, scale);
    let k = &a - &a.transpose();
    expm(&k).value
}

/// `T* T + shift · I` for random `T`.
pub fn spd(rng: &mut SampleRng, field: Field, n: usize, shift: f64) -> Matrix {
    let t = matrix(rng, field, n, n);
    let p = &(&t.adjoint() * &t) + &Matrix::identity(n, field).scale_real(shift);
    // Exact self-adjointness.
    (&p + &p.adjoint()).scale_real(0.5)
}

/// Self-adjoint matrix with entries in `[-1, 1)`.
pub fn self_adjoint(rng: &mut SampleRng, field: Field, n: usize) -> Matrix {
    let a = matrix(rng, field, n, n);
    (&a + &a.adjoint()).scale_real(0.5)
}

/// Anti-self-adjoint matrix with entries in `[-1, 1)`.
pub fn anti_self_adjoint(rng: &mut SampleRng, field: Field, n: usize) -> Matrix {
    let a = matrix(rng, field, n, n);
    (&a - &a.adjoint()).scale_real(0.5)
}

/// Invertible matrix with condition estimate at most `max_condition`.
pub fn invertible(rng: &mut SampleRng, field: Field, n: usize, max_condition: f64) -> Matrix {
    loop {
        let a = matrix(rng, field, n, n);
        if a.condition_estimate() <= max_condition {
            return a;
        }
    }
}

/// Integer matrix with determinant `+1`: a product of random elementary
/// row operations, optionally followed by a signed permutation.
pub fn unimodular(rng: &mut SampleRng, n: usize, ops: usize) -> Matrix {
    let mut m = vec![vec![0i64; n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1;
    }
    if n >= 2 {
        for _ in 0..ops {
            let i = rng.gen_range(0..n);
            let mut j = rng.gen_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            let k: i64 = if rng.gen_bool(0.5) { 1 } else { -1 };
            let src = m[j].clone();
            for (a, b) in m[i].iter_mut().zip(src) {
                *a += k * b;
            }
        }
    }
    let data: Vec<f64> = m.iter().flatten().map(|&x| x as f64).collect();
    Matrix::from_real(n, n, &data).expect("positive shape")
}
