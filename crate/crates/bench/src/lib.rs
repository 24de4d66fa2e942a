//! Inputs shared by the criterion benchmarks.

use loopswap::scenario::Scenario;
use loopswap::Workspace;

/// The 80 x 40 rectangle with `n` random agents of radius 1.
pub fn rectangle(n: usize) -> Scenario {
    let mut s = Scenario::new("rectangle", Workspace::rectangle(80.0, 40.0), 1.0);
    s.random_agents = Some(n);
    s.params.seed = Some(1);
    s.resolved(None).expect("random agents fit")
}
