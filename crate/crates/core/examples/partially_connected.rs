//! Partially-connected design: each RF chain drives its own subarray.

use hybridsim::admm::design_partially_connected;
use hybridsim::channel::ChannelModel;
use hybridsim::digital::optimal_factors;
use hybridsim::numerics::frobenius_sq;
use hybridsim::AdmmConfig;

fn main() -> hybridsim::Result<()> {
    let n_rf = 4;
    let h = ChannelModel::new(8, 4).realize(11, 1).matrices.remove(0);
    let t = optimal_factors(&h, 2)?.f_opt;
    let d = design_partially_connected(&t, n_rf, &AdmmConfig::default(), true)?;

    let m = t.nrows() / n_rf;
    let nonzero: Vec<usize> = (0..n_rf)
        .map(|c| d.f_rf.column(c).iter().filter(|z| z.norm() > 0.0).count())
        .collect();
    println!("subarray size {m}, active entries per column {nonzero:?}");
    println!("{} iterations, fit {:.4}, ||F||^2 = {:.6}", d.iterations, d.objective, frobenius_sq(&d.composite(0)));
    for t in d.trace.iter().step_by(5) {
        println!("  iter {:>3}  objective {:.5}", t.iteration, t.objective);
    }
    Ok(())
}
