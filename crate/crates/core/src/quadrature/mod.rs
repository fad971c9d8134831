//! Quadrature of |ζ(1/2 + it)|² and the checkpointed Hardy–Littlewood
//! integral J(T).

mod adaptive;
mod checkpoint;
mod gauss;
mod zeta_integral;

pub use adaptive::{
    base_panels, integrate_panels, integrate_smooth, AdaptiveOptions, IntegralResult,
    DEFAULT_EVAL_BUDGET,
};
pub use checkpoint::{
    default_store_path, load_checkpoints, save_checkpoints, Checkpoint, CheckpointTable,
    HardyLittlewood, CHECKPOINT_DIR_ENV, CHECKPOINT_SPACING,
};
pub use gauss::{gauss16, gauss8, GaussRule};
pub use zeta_integral::{
    hli_reference, integrate_zeta_sq, integrate_zeta_sq_with, max_panel_width, DEFAULT_TOL,
};
