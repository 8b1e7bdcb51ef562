//! Shared numerical machinery: finite differences, log-log order fits,
//! Gauss quadrature with refinement, scalar root solves and deterministic
//! sampling.

pub mod fd;
pub mod fit;
pub mod quad;
pub mod sample;
pub mod solve;

pub use fd::{d1_central2, d1_central4, grad4, jacobian4, laplacian5};
pub use fit::{fit_growth_constant, order_fit, OrderFit};
pub use quad::{gauss_legendre, integrate_adaptive, integrate_panels, integrate_refining, KahanSum};
pub use sample::{linspace, log_spaced, rng_from_seed, sample_unit_disk};
pub use solve::{bisect, newton_bracketed};
