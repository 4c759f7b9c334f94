//! Deterministic random matrices for tests and probes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::numerics::matrix::{DenseMatrix, C64};

pub fn random_matrix(rows: usize, cols: usize, seed: u64) -> DenseMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    DenseMatrix::from_fn(rows, cols, |_, _| {
        C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

pub fn random_hermitian(n: usize, seed: u64) -> DenseMatrix {
    let a = random_matrix(n, n, seed);
    (&a + &a.adjoint()).scale_real(0.5)
}
