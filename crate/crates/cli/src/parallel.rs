use rayon::prelude::*;
use uncoded_bc::montecarlo::{mmse_coefficients, simulate_block, BlockStats};
use uncoded_bc::{Problem, Result, SimulationConfig, SimulationReport};

/// Same report as [`uncoded_bc::montecarlo::simulate`], with blocks spread
/// over the rayon pool. Block results are merged in block order, so the
/// output does not depend on the thread count.
pub fn simulate_parallel(problem: &Problem, config: &SimulationConfig) -> Result<SimulationReport> {
    let gains = mmse_coefficients(problem, config.coeffs)?;
    let blocks: Vec<BlockStats> = (0..config.num_blocks())
        .into_par_iter()
        .map(|b| simulate_block(problem, config, &gains, b))
        .collect();
    let mut total = BlockStats::default();
    for b in &blocks {
        total.merge(b);
    }
    Ok(SimulationReport::from_stats(&total, config))
}
