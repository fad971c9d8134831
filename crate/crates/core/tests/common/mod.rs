//! Shared helpers for the integration tests.
#![allow(dead_code)]

pub mod oracle;

use std::path::PathBuf;
use std::sync::{Arc, OnceLock};

use ladderlab::{HardyLittlewood, Ladder, LadderConfig};

/// Checkpoint file shared by every test binary of the workspace.
pub fn store_path() -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR"))
        .join("ladderlab-store")
        .join("hardy_littlewood_tol1e-8.csv")
}

/// One ladder per test binary over the persistent store.
pub fn shared_ladder() -> &'static Ladder {
    static LADDER: OnceLock<Ladder> = OnceLock::new();
    LADDER.get_or_init(|| {
        let store = HardyLittlewood::open(store_path(), 1e-8).expect("open checkpoint store");
        Ladder::with_store(LadderConfig::default(), Arc::new(store)).expect("default ladder")
    })
}
