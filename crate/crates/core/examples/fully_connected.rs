//! Fully-connected hybrid precoder for one channel, compared with the
//! unconstrained optimum.

use hybridsim::admm::design_fully_connected;
use hybridsim::channel::ChannelModel;
use hybridsim::digital::{db_to_linear, optimal_factors, spectral_efficiency};
use hybridsim::AdmmConfig;

fn main() -> hybridsim::Result<()> {
    let (n_s, n_rf) = (2, 4);
    let h = ChannelModel::new(8, 4).realize(7, 1).matrices.remove(0);
    let opt = optimal_factors(&h, n_s)?;

    let cfg = AdmmConfig::default();
    let pre = design_fully_connected(&opt.f_opt, n_rf, &cfg, true)?;
    let comb = design_fully_connected(&opt.w_opt, n_rf, &cfg.with_seed(1), false)?;
    println!("precoder: {} iterations, fit {:.3e}", pre.iterations, pre.objective);

    for snr_db in [-10.0, 0.0, 10.0] {
        let snr = db_to_linear(snr_db);
        let digital = spectral_efficiency(&h, &opt.f_opt, &opt.w_opt, snr, n_s)?;
        let hybrid = spectral_efficiency(&h, &pre.composite(0), &comb.composite(0), snr, n_s)?;
        println!("{snr_db:>6} dB  digital {digital:6.3}  hybrid {hybrid:6.3} bit/s/Hz");
    }
    Ok(())
}
