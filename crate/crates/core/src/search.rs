use std::path::PathBuf;

use crate::cache;
use crate::error::{Error, Result};

/// Settings shared by the deterministic searches.
#[derive(Clone, Debug)]
pub struct SearchConfig {
    /// Maximum number of search nodes before giving up.
    pub budget: u64,
    /// Where search results are cached; `None` disables caching.
    pub cache_dir: Option<PathBuf>,
}

impl SearchConfig {
    pub const DEFAULT_BUDGET: u64 = 50_000_000;

    pub fn uncached(budget: u64) -> Self {
        SearchConfig { budget, cache_dir: None }
    }

    /// Default budget with the cache directory taken from the environment.
    pub fn from_env() -> Self {
        SearchConfig { budget: Self::DEFAULT_BUDGET, cache_dir: Some(cache::dir_from_env()) }
    }
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig::uncached(Self::DEFAULT_BUDGET)
    }
}

/// Node counter that trips once the budget is spent.
#[derive(Debug)]
pub(crate) struct Budget {
    limit: u64,
    pub(crate) used: u64,
}

impl Budget {
    pub(crate) fn new(limit: u64) -> Self {
        Budget { limit, used: 0 }
    }

    /// Counts one node; false once the limit is exceeded.
    pub(crate) fn tick(&mut self) -> bool {
        self.used += 1;
        self.used <= self.limit
    }

    pub(crate) fn exhausted(&self) -> bool {
        self.used > self.limit
    }

    pub(crate) fn error(&self, context: impl Into<String>) -> Error {
        Error::BudgetExceeded { context: context.into(), nodes: self.used }
    }

    pub(crate) fn check(&self, context: &str) -> Result<()> {
        if self.exhausted() {
            Err(self.error(context))
        } else {
            Ok(())
        }
    }
}
