//! Effect of finite phase-shifter resolution on the fitting error.

use hybridsim::admm::design_fully_connected;
use hybridsim::channel::ChannelModel;
use hybridsim::digital::optimal_factors;
use hybridsim::AdmmConfig;

fn main() -> hybridsim::Result<()> {
    let model = ChannelModel::new(8, 4);
    let runs = 50;
    for bits in [None, Some(1), Some(2), Some(3), Some(4)] {
        let mut total = 0.0;
        for seed in 0..runs {
            let t = optimal_factors(model.realize(seed, 1).narrowband(), 2)?.f_opt;
            let cfg = AdmmConfig { phase_bits: bits, seed, ..Default::default() };
            total += design_fully_connected(&t, 4, &cfg, true)?.objective;
        }
        let label = bits.map_or("continuous".to_string(), |b| format!("{b} bit"));
        println!("{label:>10}: mean fit {:.4}", total / runs as f64);
    }
    Ok(())
}
