//! Random states, unitaries and Hermitian matrices for sampling and testing.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::matkernel::{c64, CMatrix, CScalar, CVector};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> CScalar {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c64(re, im)
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Haar-random unit vector.
pub fn haar_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CVector {
    loop {
        let v = CVector::from_vec((0..dim).map(|_| gaussian(rng)).collect());
        if let Some(u) = v.normalized() {
            return u;
        }
    }
}

/// Haar-random unitary via Gram–Schmidt on a Ginibre matrix.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    let g = ginibre(dim, dim, rng);
    let mut cols: Vec<CVector> = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut w = g.column(j);
        for _ in 0..2 {
            for b in &cols {
                let c = b.inner(&w);
                w = &w - &b.scale(c);
            }
        }
        cols.push(w.normalized().expect("Gaussian columns are independent almost surely"));
    }
    CMatrix::from_columns(&cols).expect("columns share a dimension")
}

/// GUE-distributed Hermitian matrix.
pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    let g = ginibre(dim, dim, rng);
    (&g + &g.adjoint()).scale_real(0.5)
}

/// Random traceless Hermitian matrix with unit Frobenius norm.
pub fn random_generator<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    let h = random_hermitian(dim, rng);
    let shift = h.trace().re / dim as f64;
    let traceless = &h - &CMatrix::identity(dim).scale_real(shift);
    let n = traceless.frobenius_norm();
    traceless.scale_real(1.0 / n)
}
