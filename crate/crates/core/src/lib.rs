//! Eigenvalue statistics of the chiral Gaussian Hermitian ensemble
//! `P(dx) ∝ |det x|^{2μ} e^{-tr x²} dx` on `n × n` Hermitian matrices.
//!
//! * [`specfun`]: orthonormal Laguerre / generalized Hermite functions and
//!   the hypergeometric series used by the transforms.
//! * [`finite`]: the exact one-point density, kernel, moments and Laplace
//!   transforms at finite `n`.
//! * [`limit`]: the `n → ∞` law for `μ/n → c` and its transforms.
//! * [`sampler`]: Metropolis sampling of the joint eigenvalue density and
//!   the statistics built on it.
//! * [`cli`] and [`verify`]: file-producing commands and the verification
//!   suite behind the `chiral` binary.

pub mod cli;
pub mod error;
pub mod finite;
pub mod limit;
pub mod quadrature;
pub mod sampler;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};
pub use finite::{
    density, density_curve, kernel, laplace_tau_scaled, moment, partial_laplace, DensityCurve,
    EnsembleParams, Scaling,
};
pub use limit::{
    bessel_integral_identity, endpoints, g_density, limit_cdf, limit_density, limit_laplace,
    LimitLaw,
};
pub use sampler::{
    b_n_value, concentration_check, empirical_cdf, extreme_stats, log_joint_density,
    mcmc_sample, SamplerConfig, SpectrumDraw,
};
pub use specfun::{
    bessel_f, hermite_fn, hyp2f1_terminating, laguerre_fn, laguerre_fn_sequence, log_gamma,
    HermiteOrder, LaguerreOrder,
};
