//! A thread-pool runtime for the search oracles.

use std::time::Instant;

use rayon::prelude::*;
use zerosum_core::Runtime;

/// Runs subtree tasks on a dedicated rayon pool and measures wall-clock time
/// from construction, so time budgets are enforced.
pub struct PoolRuntime {
    pool: rayon::ThreadPool,
    started: Instant,
}

impl PoolRuntime {
    pub fn new(width: usize) -> Result<Self, rayon::ThreadPoolBuildError> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(width.max(1))
            .thread_name(|i| format!("zerosum-{i}"))
            .build()?;
        Ok(PoolRuntime {
            pool,
            started: Instant::now(),
        })
    }

    pub fn width(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl Runtime for PoolRuntime {
    fn map<T, F>(&self, tasks: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync,
    {
        if self.width() == 1 {
            return (0..tasks).map(f).collect();
        }
        // one task per item so small subtrees do not serialise behind large ones
        #[allow(clippy::redundant_closure)] // `f` itself is not Send
        self.pool
            .install(|| (0..tasks).into_par_iter().with_max_len(1).map(|i| f(i)).collect())
    }

    fn elapsed_seconds(&self) -> Option<f64> {
        Some(self.started.elapsed().as_secs_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use zerosum_core::{search, AbelianGroup, SearchBudget, Sequential};

    #[test]
    fn results_keep_task_order() {
        let rt = PoolRuntime::new(4).unwrap();
        assert_eq!(rt.map(100, |i| i * i), (0..100).map(|i| i * i).collect::<Vec<_>>());
    }

    #[test]
    fn parallel_matches_sequential() {
        let g = AbelianGroup::new(&[2, 2, 4]).unwrap();
        let budget = SearchBudget::default();
        let a = search::gamma_exact(&g, 1, &budget, &Sequential).unwrap();
        let b = search::gamma_exact(&g, 1, &budget, &PoolRuntime::new(8).unwrap()).unwrap();
        assert_eq!(a, b);
        let a = search::census(&g, 5, &budget, &Sequential).unwrap();
        let b = search::census(&g, 5, &budget, &PoolRuntime::new(3).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn time_budget_is_enforced() {
        let g = AbelianGroup::new(&[4, 4]).unwrap();
        let budget = SearchBudget {
            max_seconds: 0.0,
            ..SearchBudget::default()
        };
        let err = search::max_cross_number(&g, &budget, &PoolRuntime::new(2).unwrap()).unwrap_err();
        assert!(matches!(
            err,
            zerosum_core::Error::BudgetExceeded { limit: zerosum_core::BudgetLimit::Seconds, .. }
        ));
    }
}
