//! Shared fixtures for the benchmark suite.

use dualpred::{Trace, gen_random_walk};

/// A 5000-sample random walk, the evaluation trace length.
pub fn walk_5k() -> Trace {
    gen_random_walk(0xBE7C, 0.5, 5000).unwrap()
}

/// Five named walks with error budgets attached, a full comparison grid.
pub fn walk_grid() -> Vec<Trace> {
    (0..5u64)
        .map(|i| {
            let mut trace = gen_random_walk(i, 0.5, 5000)
                .unwrap()
                .with_eps(0.5)
                .unwrap();
            trace.name = format!("walk{i}");
            trace
        })
        .collect()
}
