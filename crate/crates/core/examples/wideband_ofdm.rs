//! One analog precoder shared by all subcarriers of an OFDM channel.

use hybridsim::admm::{design_wideband, WidebandTargets};
use hybridsim::channel::ChannelModel;
use hybridsim::digital::{db_to_linear, optimal_factors, spectral_efficiency};
use hybridsim::AdmmConfig;

fn main() -> hybridsim::Result<()> {
    let (n_s, n_rf, k) = (2, 4, 16);
    let ch = ChannelModel::new(8, 4).realize(3, k);
    let opt = ch
        .matrices
        .iter()
        .map(|h| optimal_factors(h, n_s))
        .collect::<hybridsim::Result<Vec<_>>>()?;

    let cfg = AdmmConfig::default();
    let f = WidebandTargets::new(opt.iter().map(|o| o.f_opt.clone()).collect())?;
    let w = WidebandTargets::new(opt.iter().map(|o| o.w_opt.clone()).collect())?;
    let pre = design_wideband(&f, n_rf, &cfg, true)?;
    let comb = design_wideband(&w, n_rf, &cfg.with_seed(1), false)?;
    println!("{k} subcarriers, {} iterations, summed fit {:.4}", pre.iterations, pre.objective);

    let snr = db_to_linear(0.0);
    let (mut digital, mut hybrid) = (0.0, 0.0);
    for (i, h) in ch.matrices.iter().enumerate() {
        digital += spectral_efficiency(h, &opt[i].f_opt, &opt[i].w_opt, snr, n_s)?;
        hybrid += spectral_efficiency(h, &pre.composite(i), &comb.composite(i), snr, n_s)?;
    }
    println!("at 0 dB: digital {:.3}, hybrid {:.3} bit/s/Hz", digital / k as f64, hybrid / k as f64);
    Ok(())
}
