//! Scalar kernels: log-gamma, the Riemann–Siegel theta function, Hardy's Z
//! and the prime-counting function.

mod gamma;
mod primes;
mod theta;
mod zeta;
mod zeros;

pub use gamma::ln_gamma;
pub use primes::{prime_count, PRIME_COUNT_LIMIT};
pub use theta::riemann_siegel_theta;
pub use zeros::{locate_zero, sign_change_brackets};
pub use zeta::{hardy_z, zeta_sq_modulus, RS_CROSSOVER};

pub(crate) use gamma::ln_gamma_unchecked;
pub(crate) use zeta::hardy_z_unchecked;
