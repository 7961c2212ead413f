//! Numerical foundations: 2×2 complex matrices, dense Hermitian
//! eigenvalues, log-domain binomials and entropies of degenerate spectra.

mod binomial;
mod eigen;
mod entropy;
mod matrix;

pub use binomial::{log_add_exp, log_binomial, log_binomial_row};
pub use eigen::{hermitian_eigenvalues, hermitian_eigenvalues_with, Eigensolver};
pub use entropy::{
    binary_entropy, invert_binary_entropy, spectrum_entropy, Spectrum, SpectrumItem,
    NEGATIVE_TOLERANCE, WEIGHT_TOLERANCE,
};
pub use matrix::{eig_2x2_hermitian, Complex2x2, HermitianMatrix};

pub use num_complex::Complex64 as C64;
