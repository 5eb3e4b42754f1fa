//! Fixtures shared by the benchmarks.

use dirbreak_core::{Direction, Measure};

/// `n` equally weighted atoms spread over `[0, spread)`.
pub fn fan(n: usize, spread: f64) -> Measure {
    let pts: Vec<Direction> = (0..n)
        .map(|i| Direction::circle(spread * i as f64 / n as f64))
        .collect();
    Measure::empirical(&pts).expect("nonempty")
}
