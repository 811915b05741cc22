//! A small Monte Carlo sweep through the harness, printed as a table.

use hybridsim::harness::{collect_records, summarize, SweepSpec};

fn main() -> hybridsim::Result<()> {
    let spec = SweepSpec::from_json(
        r#"{
            "scenario": "narrowband_full",
            "n_s": 2,
            "n_rf": [2, 4],
            "n_tx_side": 8,
            "n_rx_side": 4,
            "snr_db_list": [-20, -10, 0, 10],
            "runs": 40,
            "base_seed": 1
        }"#,
    )?;
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    let points = summarize(&collect_records(&spec, workers)?);
    println!("{:>5} {:>7} {:>16} {:>10} {:>8}", "n_rf", "snr_db", "method", "mean", "stderr");
    for p in points {
        println!("{:>5} {:>7} {:>16} {:>10.4} {:>8.4}", p.n_rf, p.snr_db, p.method.as_str(), p.mean, p.std_error);
    }
    Ok(())
}
