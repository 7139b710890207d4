//! Config parsing, task dispatch and report emission for the cocycle
//! engine. The binary (`cocycle`) is a thin wrapper over this library.

pub mod config;
pub mod report;
pub mod resolve;
pub mod runner;

use cocycle_core::Budget;

use config::{ConfigAst, Diagnostic};
use resolve::ResolvedConfig;

/// Environment variable overriding the default node budget.
pub const BUDGET_ENV: &str = "COCYCLE_BUDGET";

/// The default budget: compile-time defaults, then the environment
/// variable when set and well-formed.
pub fn default_budget() -> Budget {
    let mut budget = Budget::default();
    if let Ok(text) = std::env::var(BUDGET_ENV) {
        if let Ok(nodes) = text.trim().parse::<u64>() {
            budget.max_nodes = nodes;
        }
    }
    budget
}

/// Parse and fully validate a config: the `parse_config` operation. The
/// budget precedence is CLI flag over config `budgets` block over the
/// environment default.
pub fn parse_config(
    text: &str,
    base_budget: Budget,
) -> Result<(ConfigAst, ResolvedConfig), Diagnostic> {
    let ast = config::parse_config_text(text)?;
    let resolved = ResolvedConfig::from_ast(&ast, base_budget)?;
    Ok((ast, resolved))
}
