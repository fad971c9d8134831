//! Numerical constants shared by every module.
//!
//! All residual checks downstream depend on these exact literals, so they are
//! carried to 15 significant digits and never re-derived locally.

use serde::{Deserialize, Serialize};

/// Euler's constant.
pub const EULER_C: f64 = 0.577215664901533;

/// ln(2π).
pub const LN_TWO_PI: f64 = 1.837877066409345;

/// ln √(2π).
pub const LN_SQRT_TWO_PI: f64 = LN_TWO_PI / 2.0;

/// 1 − c, the slope of the almost-linear increments.
pub const ONE_MINUS_C: f64 = 1.0 - EULER_C;

/// ln 2π − 1 − c, the rectangle-term coefficient of the Raabe decomposition.
pub const RECTANGLE_COEFFICIENT: f64 = LN_TWO_PI - 1.0 - EULER_C;

/// The value printed for ln 2π − c − 1 in the source literature. It does not
/// agree with Euler's constant and is only echoed in reports.
pub const PUBLISHED_RECTANGLE_COEFFICIENT: f64 = 0.68;

/// The constants block embedded in every emitted report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    pub euler_c: f64,
    pub ln_two_pi: f64,
    pub ln_sqrt_two_pi: f64,
}

impl Constants {
    pub const STANDARD: Constants = Constants {
        euler_c: EULER_C,
        ln_two_pi: LN_TWO_PI,
        ln_sqrt_two_pi: LN_SQRT_TWO_PI,
    };

    pub fn one_minus_c(&self) -> f64 {
        1.0 - self.euler_c
    }

    pub fn rectangle_coefficient(&self) -> f64 {
        self.ln_two_pi - 1.0 - self.euler_c
    }
}

impl Default for Constants {
    fn default() -> Self {
        Self::STANDARD
    }
}
