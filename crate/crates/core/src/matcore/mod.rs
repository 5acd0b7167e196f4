//! Dense complex linear algebra at desk sizes.

pub mod block;
mod cmat;
mod funcs;
pub(crate) mod gram_schmidt;
mod spectral;
mod tol;

pub use block::{block_compose, block_extract, direct_sum, fourier, hadamard4, kron, vstack};
pub use cmat::{CMat, C64};
pub use funcs::{
    abs_modulus, abs_power, lambda_min, lp_norm, lp_pow, op_norm, psd_leq, psd_power, psd_power_with, schatten_norm,
    schatten_pow, PsdOrder,
};
pub use spectral::{herm_eig, herm_eig_with, mu, singular_values, svd, svd_with, SpectralData};
pub use tol::Tolerances;
