//! Monte Carlo sweeps: channel draw, digital baseline, hybrid design and
//! rate evaluation per run, with CSV and JSON metadata output.
//!
//! Every run is seeded independently (`base_seed + run_index`), so runs can
//! be distributed over any number of workers and still produce identical
//! rows.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize};

use crate::admm::{
    design_fully_connected, design_partially_connected, design_wideband, AdmmConfig, HybridFactors,
    WidebandTargets,
};
use crate::channel::{ArrayGeometry, ChannelModel, ChannelRealization, ClusterParams};
use crate::digital::{db_to_linear, optimal_factors, spectral_efficiency, OptimalFactors};
use crate::error::{Error, Result};
use crate::numerics::ComplexMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    NarrowbandFull,
    NarrowbandPartial,
    Wideband,
}

impl Scenario {
    pub fn as_str(&self) -> &'static str {
        match self {
            Scenario::NarrowbandFull => "narrowband_full",
            Scenario::NarrowbandPartial => "narrowband_partial",
            Scenario::Wideband => "wideband",
        }
    }

    pub fn hybrid_method(&self) -> Method {
        match self {
            Scenario::NarrowbandFull => Method::HybridFull,
            Scenario::NarrowbandPartial => Method::HybridPartial,
            Scenario::Wideband => Method::HybridWideband,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    DigitalOpt,
    HybridFull,
    HybridPartial,
    HybridWideband,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::DigitalOpt => "digital_opt",
            Method::HybridFull => "hybrid_full",
            Method::HybridPartial => "hybrid_partial",
            Method::HybridWideband => "hybrid_wideband",
        }
    }
}

/// Channel knobs that are not part of the experiment grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ChannelSettings {
    pub n_clusters: usize,
    pub n_rays: usize,
    pub angular_spread_deg: f64,
    pub spacing_over_lambda: f64,
}

impl Default for ChannelSettings {
    fn default() -> Self {
        let c = ClusterParams::default();
        Self {
            n_clusters: c.n_clusters,
            n_rays: c.n_rays,
            angular_spread_deg: c.angular_spread_rad.to_degrees(),
            spacing_over_lambda: 0.5,
        }
    }
}

fn one_or_many<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<usize>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany {
        One(usize),
        Many(Vec<usize>),
    }
    Ok(match OneOrMany::deserialize(d)? {
        OneOrMany::One(x) => vec![x],
        OneOrMany::Many(v) => v,
    })
}

fn default_k() -> usize {
    1
}
fn default_runs() -> usize {
    200
}
fn default_multistart() -> usize {
    1
}

/// Declarative description of a sweep; the JSON config file mirrors it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub scenario: Scenario,
    pub n_s: usize,
    /// A single value or a list in the config file.
    #[serde(deserialize_with = "one_or_many")]
    pub n_rf: Vec<usize>,
    pub n_tx_side: usize,
    pub n_rx_side: usize,
    /// Subcarriers; only used by the wideband scenario.
    #[serde(default = "default_k")]
    pub k: usize,
    pub snr_db_list: Vec<f64>,
    #[serde(default = "default_runs")]
    pub runs: usize,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default)]
    pub admm: AdmmConfig,
    /// Random restarts per design; the lowest final objective wins.
    #[serde(default = "default_multistart")]
    pub multistart: usize,
    #[serde(default)]
    pub channel: ChannelSettings,
}

impl SweepSpec {
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    pub fn n_tx(&self) -> usize {
        self.n_tx_side * self.n_tx_side
    }

    pub fn n_rx(&self) -> usize {
        self.n_rx_side * self.n_rx_side
    }

    /// Subcarriers actually simulated.
    pub fn subcarriers(&self) -> usize {
        match self.scenario {
            Scenario::Wideband => self.k,
            _ => 1,
        }
    }

    pub fn channel_model(&self) -> ChannelModel {
        let geom = |side| ArrayGeometry {
            side,
            spacing_over_lambda: self.channel.spacing_over_lambda,
        };
        ChannelModel {
            tx: geom(self.n_tx_side),
            rx: geom(self.n_rx_side),
            clusters: ClusterParams {
                n_clusters: self.channel.n_clusters,
                n_rays: self.channel.n_rays,
                angular_spread_rad: self.channel.angular_spread_deg.to_radians(),
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        let cfg = |m: String| Err(Error::Config(m));
        if self.snr_db_list.is_empty() || self.n_rf.is_empty() {
            return cfg("empty sweep axis".into());
        }
        if self.snr_db_list.iter().any(|s| !s.is_finite()) {
            return cfg("snr_db_list must contain finite values".into());
        }
        if self.runs == 0 {
            return cfg("runs must be >= 1".into());
        }
        if self.multistart == 0 {
            return cfg("multistart must be >= 1".into());
        }
        if self.k == 0 {
            return cfg("k must be >= 1".into());
        }
        if self.n_s == 0 {
            return cfg("n_s must be >= 1".into());
        }
        self.channel_model().validate()?;
        self.admm.validate()?;
        let (n_tx, n_rx) = (self.n_tx(), self.n_rx());
        for &n_rf in &self.n_rf {
            if self.n_s > n_rf || n_rf > n_tx.min(n_rx) {
                return cfg(format!(
                    "need n_s ({}) <= n_rf ({n_rf}) <= min(n_tx, n_rx) ({})",
                    self.n_s,
                    n_tx.min(n_rx)
                ));
            }
            if self.scenario == Scenario::NarrowbandPartial && (n_tx % n_rf != 0 || n_rx % n_rf != 0) {
                return cfg(format!(
                    "partially-connected arrays need n_tx ({n_tx}) and n_rx ({n_rx}) divisible by n_rf ({n_rf})"
                ));
            }
        }
        Ok(())
    }
}

/// One CSV row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRecord {
    pub scenario: Scenario,
    pub snr_db: f64,
    pub n_rf: usize,
    pub run_index: usize,
    pub seed: u64,
    pub method: Method,
    /// bits/s/Hz, averaged over subcarriers for wideband runs.
    pub spectral_efficiency: f64,
    pub final_objective: f64,
    pub iterations_used: usize,
    pub wall_time_ms: f64,
    /// Set when the run failed; numeric fields are then NaN.
    pub error: Option<String>,
}

pub const CSV_HEADER: [&str; 11] = [
    "scenario",
    "snr_db",
    "n_rf",
    "run_index",
    "seed",
    "method",
    "spectral_efficiency",
    "final_objective",
    "iterations_used",
    "wall_time_ms",
    "error",
];

/// Formats with at least 15 significant digits.
pub fn format_real(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..15).contains(&exp) {
        let decimals = (14 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.14e}")
    }
}

impl ResultRecord {
    pub fn csv_fields(&self) -> [String; 11] {
        [
            self.scenario.as_str().into(),
            format_real(self.snr_db),
            self.n_rf.to_string(),
            self.run_index.to_string(),
            self.seed.to_string(),
            self.method.as_str().into(),
            format_real(self.spectral_efficiency),
            format_real(self.final_objective),
            self.iterations_used.to_string(),
            format_real(self.wall_time_ms),
            self.error.clone().unwrap_or_default(),
        ]
    }
}

/// Seed of the analog initialization for one design call. `role` is 0 for
/// the precoder and 1 for the combiner.
pub fn design_seed(admm_seed: u64, run_index: usize, start: usize, role: u64) -> u64 {
    admm_seed
        .wrapping_add((run_index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add((start as u64) << 1 | role)
}

/// Runs the scenario's designer on `targets` (one per subcarrier).
pub fn design(
    scenario: Scenario,
    targets: &[ComplexMatrix],
    n_rf: usize,
    cfg: &AdmmConfig,
    normalize_power: bool,
) -> Result<HybridFactors> {
    match scenario {
        Scenario::NarrowbandFull => design_fully_connected(&targets[0], n_rf, cfg, normalize_power),
        Scenario::NarrowbandPartial => design_partially_connected(&targets[0], n_rf, cfg, normalize_power),
        Scenario::Wideband => {
            design_wideband(&WidebandTargets::new(targets.to_vec())?, n_rf, cfg, normalize_power)
        }
    }
}

fn best_of(
    spec: &SweepSpec,
    targets: &[ComplexMatrix],
    n_rf: usize,
    run_index: usize,
    role: u64,
) -> Result<HybridFactors> {
    let mut best: Option<HybridFactors> = None;
    let mut last_err = None;
    for start in 0..spec.multistart {
        let cfg = spec.admm.with_seed(design_seed(spec.admm.seed, run_index, start, role));
        match design(spec.scenario, targets, n_rf, &cfg, role == 0) {
            Ok(d) => {
                if best.as_ref().is_none_or(|b| d.objective < b.objective) {
                    best = Some(d);
                }
            }
            Err(e) => last_err = Some(e),
        }
    }
    best.ok_or_else(|| last_err.expect("at least one start"))
}

/// Hybrid precoder and combiner for one run.
#[derive(Debug, Clone)]
pub struct RunDesign {
    pub precoder: HybridFactors,
    pub combiner: HybridFactors,
}

/// Precoder (power normalized) and combiner designs for one run from the
/// per-subcarrier optimal factors.
pub fn design_pair(
    spec: &SweepSpec,
    f_opt: &[ComplexMatrix],
    w_opt: &[ComplexMatrix],
    n_rf: usize,
    run_index: usize,
) -> Result<RunDesign> {
    Ok(RunDesign {
        precoder: best_of(spec, f_opt, n_rf, run_index, 0)?,
        combiner: best_of(spec, w_opt, n_rf, run_index, 1)?,
    })
}

/// Channel and hybrid designs exactly as [`run_single`] produces them.
pub fn run_designs(spec: &SweepSpec, n_rf: usize, run_index: usize) -> Result<(ChannelRealization, RunDesign)> {
    let seed = spec.base_seed.wrapping_add(run_index as u64);
    let channel = spec.channel_model().realize(seed, spec.subcarriers());
    let (mut f_opt, mut w_opt) = (Vec::new(), Vec::new());
    for h in &channel.matrices {
        let o = optimal_factors(h, spec.n_s)?;
        f_opt.push(o.f_opt);
        w_opt.push(o.w_opt);
    }
    let d = design_pair(spec, &f_opt, &w_opt, n_rf, run_index)?;
    Ok((channel, d))
}

fn mean_rate(
    channels: &[ComplexMatrix],
    precoders: &[ComplexMatrix],
    combiners: &[ComplexMatrix],
    snr: f64,
    n_s: usize,
) -> Result<f64> {
    let mut acc = 0.0;
    for ((h, f), w) in channels.iter().zip(precoders).zip(combiners) {
        acc += spectral_efficiency(h, f, w, snr, n_s)?;
    }
    Ok(acc / channels.len() as f64)
}

/// Executes one Monte Carlo run for one RF-chain count and returns a
/// digital and a hybrid record per SNR point.
pub fn run_single(spec: &SweepSpec, n_rf: usize, run_index: usize) -> Vec<ResultRecord> {
    let seed = spec.base_seed.wrapping_add(run_index as u64);
    let hybrid = spec.scenario.hybrid_method();
    let record = |snr_db: f64, method: Method| ResultRecord {
        scenario: spec.scenario,
        snr_db,
        n_rf,
        run_index,
        seed,
        method,
        spectral_efficiency: f64::NAN,
        final_objective: f64::NAN,
        iterations_used: 0,
        wall_time_ms: f64::NAN,
        error: None,
    };
    let fail = |method: Method, e: &Error| -> Vec<ResultRecord> {
        spec.snr_db_list
            .iter()
            .map(|&s| ResultRecord {
                error: Some(e.to_string()),
                ..record(s, method)
            })
            .collect()
    };

    let channel = spec.channel_model().realize(seed, spec.subcarriers());
    let t0 = Instant::now();
    let optimal: Result<Vec<OptimalFactors>> = channel
        .matrices
        .iter()
        .map(|h| optimal_factors(h, spec.n_s))
        .collect();
    let digital_ms = t0.elapsed().as_secs_f64() * 1e3;
    let optimal = match optimal {
        Ok(o) => o,
        Err(e) => {
            let mut rows = fail(Method::DigitalOpt, &e);
            rows.extend(fail(hybrid, &e));
            return sort_rows(rows);
        }
    };
    let f_opt: Vec<ComplexMatrix> = optimal.iter().map(|o| o.f_opt.clone()).collect();
    let w_opt: Vec<ComplexMatrix> = optimal.iter().map(|o| o.w_opt.clone()).collect();

    let t1 = Instant::now();
    let designed = design_pair(spec, &f_opt, &w_opt, n_rf, run_index);
    let hybrid_ms = t1.elapsed().as_secs_f64() * 1e3;

    let mut rows = Vec::with_capacity(2 * spec.snr_db_list.len());
    for &snr_db in &spec.snr_db_list {
        let snr = db_to_linear(snr_db);
        rows.push(match mean_rate(&channel.matrices, &f_opt, &w_opt, snr, spec.n_s) {
            Ok(se) => ResultRecord {
                spectral_efficiency: se,
                final_objective: 0.0,
                wall_time_ms: digital_ms,
                ..record(snr_db, Method::DigitalOpt)
            },
            Err(e) => ResultRecord {
                error: Some(e.to_string()),
                ..record(snr_db, Method::DigitalOpt)
            },
        });
        let row = designed.as_ref().map_err(Clone::clone).and_then(|d| {
            let k = channel.matrices.len();
            let f: Vec<_> = (0..k).map(|i| d.precoder.composite(i)).collect();
            let w: Vec<_> = (0..k).map(|i| d.combiner.composite(i)).collect();
            let se = mean_rate(&channel.matrices, &f, &w, snr, spec.n_s)?;
            Ok(ResultRecord {
                spectral_efficiency: se,
                final_objective: d.precoder.objective,
                iterations_used: d.precoder.iterations,
                wall_time_ms: hybrid_ms,
                ..record(snr_db, hybrid)
            })
        });
        rows.push(row.unwrap_or_else(|e| ResultRecord {
            error: Some(e.to_string()),
            ..record(snr_db, hybrid)
        }));
    }
    rows
}

fn sort_rows(mut rows: Vec<ResultRecord>) -> Vec<ResultRecord> {
    rows.sort_by(|a, b| a.snr_db.total_cmp(&b.snr_db).then(a.method.cmp(&b.method)));
    rows
}

/// Runs every `(n_rf, run)` pair on `workers` threads and returns rows in
/// `(n_rf, snr, run_index, method)` order, following the list orders of the
/// spec.
pub fn collect_records(spec: &SweepSpec, workers: usize) -> Result<Vec<ResultRecord>> {
    spec.validate()?;
    let jobs: Vec<(usize, usize)> = spec
        .n_rf
        .iter()
        .flat_map(|&n_rf| (0..spec.runs).map(move |r| (n_rf, r)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;
    let mut rows: Vec<ResultRecord> = pool.install(|| {
        jobs.par_iter()
            .flat_map_iter(|&(n_rf, r)| run_single(spec, n_rf, r))
            .collect()
    });
    let pos_rf = |n: usize| spec.n_rf.iter().position(|&x| x == n).unwrap_or(usize::MAX);
    let pos_snr = |s: f64| {
        spec.snr_db_list
            .iter()
            .position(|&x| x.to_bits() == s.to_bits())
            .unwrap_or(usize::MAX)
    };
    rows.sort_by_key(|r| (pos_rf(r.n_rf), pos_snr(r.snr_db), r.run_index, r.method));
    Ok(rows)
}

/// Aggregate of one `(n_rf, snr, method)` point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSummary {
    pub n_rf: usize,
    pub snr_db: f64,
    pub method: Method,
    pub count: usize,
    pub errors: usize,
    pub mean: f64,
    pub std_error: f64,
}

pub fn summarize(rows: &[ResultRecord]) -> Vec<PointSummary> {
    let mut groups: BTreeMap<(usize, u64, Method), (f64, Vec<f64>, usize)> = BTreeMap::new();
    let mut order = Vec::new();
    for r in rows {
        let key = (r.n_rf, r.snr_db.to_bits(), r.method);
        let g = groups.entry(key).or_insert_with(|| {
            order.push(key);
            (r.snr_db, Vec::new(), 0)
        });
        if r.error.is_some() {
            g.2 += 1;
        } else {
            g.1.push(r.spectral_efficiency);
        }
    }
    order
        .into_iter()
        .map(|key| {
            let (snr_db, values, errors) = &groups[&key];
            let (mean, std_error) = mean_and_stderr(values);
            PointSummary {
                n_rf: key.0,
                snr_db: *snr_db,
                method: key.2,
                count: values.len(),
                errors: *errors,
                mean,
                std_error,
            }
        })
        .collect()
}

/// Sample mean and standard error of the mean.
pub fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepMetadata {
    pub software: String,
    pub version: String,
    pub spec: SweepSpec,
    pub rows: usize,
    pub error_rows: usize,
    pub spectral_efficiency_convention: String,
    pub points: Vec<PointSummary>,
}

#[derive(Debug, Clone)]
pub struct SweepReport {
    pub csv_path: PathBuf,
    pub metadata_path: PathBuf,
    pub records: Vec<ResultRecord>,
    pub metadata: SweepMetadata,
}

pub fn metadata_path(csv: &Path) -> PathBuf {
    let mut s = csv.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

fn partial_path(csv: &Path) -> PathBuf {
    let mut s = csv.as_os_str().to_owned();
    s.push(".partial");
    PathBuf::from(s)
}

pub fn write_csv<W: std::io::Write>(out: W, rows: &[ResultRecord]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record(r.csv_fields())?;
    }
    w.flush()?;
    Ok(())
}

/// Runs the sweep and writes `out` (CSV) plus `out.meta.json`.
///
/// Rows are written to `out.partial` first and renamed on success; a left
/// over `.partial` file marks an aborted sweep.
pub fn run_sweep(spec: &SweepSpec, out: &Path, workers: usize) -> Result<SweepReport> {
    let records = collect_records(spec, workers)?;
    let tmp = partial_path(out);
    write_csv(fs::File::create(&tmp)?, &records)?;
    fs::rename(&tmp, out)?;

    let metadata = SweepMetadata {
        software: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        spec: spec.clone(),
        rows: records.len(),
        error_rows: records.iter().filter(|r| r.error.is_some()).count(),
        spectral_efficiency_convention: if spec.scenario == Scenario::Wideband {
            "mean over subcarriers of the per-subcarrier rate".into()
        } else {
            "narrowband rate".into()
        },
        points: summarize(&records),
    };
    let meta_path = metadata_path(out);
    fs::write(&meta_path, serde_json::to_string_pretty(&metadata)?)?;
    Ok(SweepReport {
        csv_path: out.to_path_buf(),
        metadata_path: meta_path,
        records,
        metadata,
    })
}

/// Precoder design of run 0 at the first RF-chain count, for trace export.
pub fn trace_design(spec: &SweepSpec) -> Result<HybridFactors> {
    spec.validate()?;
    let seed = spec.base_seed;
    let channel = spec.channel_model().realize(seed, spec.subcarriers());
    let targets = channel
        .matrices
        .iter()
        .map(|h| optimal_factors(h, spec.n_s).map(|o| o.f_opt))
        .collect::<Result<Vec<_>>>()?;
    let cfg = spec.admm.with_seed(design_seed(spec.admm.seed, 0, 0, 0));
    design(spec.scenario, &targets, spec.n_rf[0], &cfg, true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_spec() -> SweepSpec {
        SweepSpec::from_json(
            r#"{"scenario": "narrowband_full", "n_s": 2, "n_rf": 3,
                "n_tx_side": 3, "n_rx_side": 2, "snr_db_list": [-10, 0],
                "runs": 3, "base_seed": 11}"#,
        )
        .unwrap()
    }

    #[test]
    fn parses_defaults() {
        let s = small_spec();
        assert_eq!(s.n_rf, vec![3]);
        assert_eq!(s.k, 1);
        assert_eq!(s.multistart, 1);
        assert_eq!(s.admm, AdmmConfig::default());
        assert_eq!(s.channel, ChannelSettings::default());
        let many: SweepSpec = SweepSpec::from_json(
            r#"{"scenario": "wideband", "n_s": 1, "n_rf": [1, 2], "n_tx_side": 2,
                "n_rx_side": 2, "k": 4, "snr_db_list": [0]}"#,
        )
        .unwrap();
        assert_eq!(many.n_rf, vec![1, 2]);
        assert_eq!(many.runs, 200);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let e = SweepSpec::from_json(
            r#"{"scenario": "narrowband_full", "n_s": 2, "n_rf": 3, "n_tx_side": 3,
                "n_rx_side": 2, "snr_db_list": [0], "rnus": 3}"#,
        );
        assert!(e.is_err());
    }

    #[test]
    fn empty_axis_is_an_error() {
        let mut s = small_spec();
        s.snr_db_list.clear();
        let e = s.validate().unwrap_err();
        assert!(e.to_string().contains("empty sweep axis"));
    }

    #[test]
    fn partial_requires_divisibility() {
        let mut s = small_spec();
        s.scenario = Scenario::NarrowbandPartial;
        assert!(s.validate().is_err());
        s.n_rf = vec![2];
        s.n_tx_side = 4;
        assert!(s.validate().is_ok());
    }

    #[test]
    fn cardinality() {
        let rows = collect_records(&small_spec(), 2).unwrap();
        assert_eq!(rows.len(), 12);
        assert!(rows.iter().all(|r| r.error.is_none() && r.spectral_efficiency >= 0.0));
        assert!(rows.iter().all(|r| r.iterations_used <= 30));
    }

    #[test]
    fn format_real_keeps_precision() {
        for x in [0.1, 12.345678901234567, 1e-9, -3.25, 123456.789, 7e20] {
            let s = format_real(x);
            let back: f64 = s.parse().unwrap();
            assert!((back - x).abs() <= 1e-13 * x.abs(), "{s}");
        }
        assert_eq!(format_real(0.0), "0");
    }

    #[test]
    fn summary_statistics() {
        let (m, se) = mean_and_stderr(&[1.0, 2.0, 3.0, 4.0]);
        assert!((m - 2.5).abs() < 1e-15);
        assert!((se - (5.0f64 / 12.0).sqrt()).abs() < 1e-15);
    }
}
