//! Dense complex linear algebra.

pub mod expm;
pub mod hermitian;
pub mod lu;
pub mod matrix;
pub mod schur;
pub mod superop;
pub mod sylvester;

pub mod testing;

pub use expm::expm;
pub use hermitian::{eigh, eigvalsh, spectral_norm, sqrt_psd, trace_norm_hermitian};
pub use lu::{inverse, solve, Lu};
pub use matrix::{DenseMatrix, C64};
pub use schur::{schur, schur_sorted, Schur};
pub use superop::{devectorize, left_super, right_super, sandwich_super, vectorize, SuperOperator};
pub use sylvester::{solve_sylvester, solve_triangular_sylvester};
