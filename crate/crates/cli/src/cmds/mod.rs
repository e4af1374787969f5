//! One module per subcommand. Each returns the process exit code under
//! the shared contract: 0 = all checks passed, 1 = a mathematical check
//! failed (or a solve did not converge), 2 = usage or input error
//! (signalled by returning `Err` with a message for stderr).

pub mod bench;
pub mod bounds;
pub mod sinkhorn;
pub mod spectrum;
pub mod table1;
pub mod verify;

use wmm_core::config::DEFAULT_DENSE_LIMIT;

/// Dense materialization cap, overridable through `WMM_DENSE_LIMIT`.
pub fn dense_limit() -> Result<usize, String> {
    match std::env::var("WMM_DENSE_LIMIT") {
        Err(_) => Ok(DEFAULT_DENSE_LIMIT),
        Ok(raw) => raw
            .parse()
            .map_err(|_| format!("WMM_DENSE_LIMIT must be an integer, got {raw:?}")),
    }
}
