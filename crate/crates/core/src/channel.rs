//! Clustered (Saleh-Valenzuela style) mmWave channels over uniform square
//! planar arrays, narrowband and OFDM frequency-selective.
//!
//! Random draws use [`SimRng`] (ChaCha8) and consume the stream in a fixed
//! order so that a seed reproduces a realization bit for bit on any platform:
//!
//! 1. ray gains, cluster-major then ray, real part before imaginary part;
//! 2. cluster means, per cluster `(tx az, tx el, rx az, rx el)`;
//! 3. ray offsets, cluster by cluster, per ray `(tx az, tx el, rx az, rx el)`.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{ComplexMatrix, ComplexVector, C64};

pub type SimRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SimRng {
    SimRng::seed_from_u64(seed)
}

/// Square `side x side` planar array with element spacing `d / lambda`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArrayGeometry {
    pub side: usize,
    pub spacing_over_lambda: f64,
}

impl ArrayGeometry {
    pub fn new(side: usize) -> Self {
        Self {
            side,
            spacing_over_lambda: 0.5,
        }
    }

    pub fn elements(&self) -> usize {
        self.side * self.side
    }

    pub fn validate(&self) -> Result<()> {
        if self.side == 0 {
            return Err(Error::Config("array side must be >= 1".into()));
        }
        if !(self.spacing_over_lambda > 0.0) || !self.spacing_over_lambda.is_finite() {
            return Err(Error::Config("array spacing must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClusterParams {
    pub n_clusters: usize,
    pub n_rays: usize,
    /// Common standard deviation of the azimuth/elevation ray offsets, tx and rx.
    pub angular_spread_rad: f64,
}

impl Default for ClusterParams {
    fn default() -> Self {
        Self {
            n_clusters: 8,
            n_rays: 10,
            angular_spread_rad: 10f64.to_radians(),
        }
    }
}

impl ClusterParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_clusters == 0 || self.n_rays == 0 {
            return Err(Error::Config("cluster and ray counts must be >= 1".into()));
        }
        if !(self.angular_spread_rad >= 0.0) || !self.angular_spread_rad.is_finite() {
            return Err(Error::Config("angular spread must be finite and >= 0".into()));
        }
        Ok(())
    }
}

/// Array response toward azimuth `azimuth` and elevation `elevation`.
///
/// Element `p * side + q` is
/// `exp(j 2 pi (d/lambda) (p sin(az) sin(el) + q cos(el))) / side`, so the
/// vector has unit norm.
pub fn array_response(geom: &ArrayGeometry, azimuth: f64, elevation: f64) -> ComplexVector {
    let side = geom.side;
    let scale = 1.0 / side as f64;
    let k = TAU * geom.spacing_over_lambda;
    let u = azimuth.sin() * elevation.sin();
    let v = elevation.cos();
    ComplexVector::from_fn(side * side, |idx, _| {
        let (p, q) = ((idx / side) as f64, (idx % side) as f64);
        C64::from_polar(scale, k * (p * u + q * v))
    })
}

/// Transmit and receive angles of one ray (radians).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RayAngles {
    pub tx_azimuth: f64,
    pub tx_elevation: f64,
    pub rx_azimuth: f64,
    pub rx_elevation: f64,
}

impl RayAngles {
    fn draw<R: Rng + ?Sized, D: Distribution<f64>>(rng: &mut R, dist: &D) -> Self {
        Self {
            tx_azimuth: dist.sample(rng),
            tx_elevation: dist.sample(rng),
            rx_azimuth: dist.sample(rng),
            rx_elevation: dist.sample(rng),
        }
    }

    fn offset_by(&self, d: &RayAngles) -> RayAngles {
        RayAngles {
            tx_azimuth: self.tx_azimuth + d.tx_azimuth,
            tx_elevation: self.tx_elevation + d.tx_elevation,
            rx_azimuth: self.rx_azimuth + d.rx_azimuth,
            rx_elevation: self.rx_elevation + d.rx_elevation,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterAngles {
    pub means: Vec<RayAngles>,
    /// `offsets[cluster][ray]`
    pub offsets: Vec<Vec<RayAngles>>,
}

impl ClusterAngles {
    pub fn ray(&self, cluster: usize, ray: usize) -> RayAngles {
        self.means[cluster].offset_by(&self.offsets[cluster][ray])
    }
}

/// Cluster means uniform on `[0, 2 pi)`, ray offsets zero-mean Gaussian with
/// standard deviation `params.angular_spread_rad`.
pub fn sample_cluster_angles<R: Rng + ?Sized>(rng: &mut R, params: &ClusterParams) -> ClusterAngles {
    let uniform = rand_distr::Uniform::new(0.0, TAU).expect("valid range");
    let means = (0..params.n_clusters)
        .map(|_| RayAngles::draw(rng, &uniform))
        .collect();
    let offsets = if params.angular_spread_rad > 0.0 {
        let gauss = Normal::new(0.0, params.angular_spread_rad).expect("finite spread");
        (0..params.n_clusters)
            .map(|_| (0..params.n_rays).map(|_| RayAngles::draw(rng, &gauss)).collect())
            .collect()
    } else {
        vec![vec![RayAngles::default(); params.n_rays]; params.n_clusters]
    };
    ClusterAngles { means, offsets }
}

/// `CN(0, 1)` sample.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    pub clusters: ClusterParams,
    pub tx: ArrayGeometry,
    pub rx: ArrayGeometry,
    pub subcarriers: usize,
}

/// One channel draw: `matrices[k]` is the `N_rx x N_tx` response of
/// subcarrier `k` (a single matrix for narrowband).
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub matrices: Vec<ComplexMatrix>,
    pub seed: u64,
    pub params: ChannelParams,
}

impl ChannelRealization {
    pub fn narrowband(&self) -> &ComplexMatrix {
        &self.matrices[0]
    }
}

/// The random ingredients of a draw, kept so the subcarrier sum can be
/// rebuilt term by term.
#[derive(Debug, Clone)]
pub struct ClusterDraw {
    /// `gains[cluster][ray]`
    pub gains: Vec<Vec<C64>>,
    pub angles: ClusterAngles,
}

pub fn draw_clusters<R: Rng + ?Sized>(rng: &mut R, params: &ClusterParams) -> ClusterDraw {
    let gains = (0..params.n_clusters)
        .map(|_| (0..params.n_rays).map(|_| complex_gaussian(rng)).collect())
        .collect();
    let angles = sample_cluster_angles(rng, params);
    ClusterDraw { gains, angles }
}

/// `sqrt(N_tx N_rx / (N_cl N_ray))`, which gives `E ||H||_F^2 = N_tx N_rx`
/// with unit-norm steering vectors and `CN(0, 1)` gains.
pub fn normalization(tx: &ArrayGeometry, rx: &ArrayGeometry, params: &ClusterParams) -> f64 {
    ((tx.elements() * rx.elements()) as f64 / (params.n_clusters * params.n_rays) as f64).sqrt()
}

/// Assembles `H[k] = gamma sum_c e^{-j 2 pi c k / K} sum_l alpha a_r a_t^H`
/// for `k = 0..K`.
pub fn assemble(
    draw: &ClusterDraw,
    tx: &ArrayGeometry,
    rx: &ArrayGeometry,
    params: &ClusterParams,
    subcarriers: usize,
) -> Vec<ComplexMatrix> {
    let gamma = normalization(tx, rx, params);
    let per_cluster: Vec<ComplexMatrix> = (0..params.n_clusters)
        .map(|c| {
            let mut acc = ComplexMatrix::zeros(rx.elements(), tx.elements());
            for l in 0..params.n_rays {
                let a = draw.angles.ray(c, l);
                let a_r = array_response(rx, a.rx_azimuth, a.rx_elevation);
                let a_t = array_response(tx, a.tx_azimuth, a.tx_elevation);
                acc += (a_r * draw.gains[c][l]) * a_t.adjoint();
            }
            acc
        })
        .collect();

    (0..subcarriers)
        .map(|k| {
            let mut h = ComplexMatrix::zeros(rx.elements(), tx.elements());
            for (c, cluster) in per_cluster.iter().enumerate() {
                let turns = (c * k) % subcarriers;
                if turns == 0 {
                    h += cluster;
                } else {
                    let phase = -TAU * turns as f64 / subcarriers as f64;
                    h += cluster * C64::from_polar(1.0, phase);
                }
            }
            h * C64::new(gamma, 0.0)
        })
        .collect()
}

/// Draws a wideband realization with `subcarriers` bins. One set of gains
/// and angles is shared across all bins.
pub fn gen_wideband<R: Rng + ?Sized>(
    rng: &mut R,
    tx: &ArrayGeometry,
    rx: &ArrayGeometry,
    params: &ClusterParams,
    subcarriers: usize,
) -> Vec<ComplexMatrix> {
    assert!(subcarriers >= 1, "at least one subcarrier is required");
    let draw = draw_clusters(rng, params);
    assemble(&draw, tx, rx, params, subcarriers)
}

pub fn gen_narrowband<R: Rng + ?Sized>(
    rng: &mut R,
    tx: &ArrayGeometry,
    rx: &ArrayGeometry,
    params: &ClusterParams,
) -> ComplexMatrix {
    gen_wideband(rng, tx, rx, params, 1).remove(0)
}

/// Seeded channel source.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelModel {
    pub tx: ArrayGeometry,
    pub rx: ArrayGeometry,
    pub clusters: ClusterParams,
}

impl ChannelModel {
    pub fn new(tx_side: usize, rx_side: usize) -> Self {
        Self {
            tx: ArrayGeometry::new(tx_side),
            rx: ArrayGeometry::new(rx_side),
            clusters: ClusterParams::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.tx.validate()?;
        self.rx.validate()?;
        self.clusters.validate()
    }

    pub fn realize(&self, seed: u64, subcarriers: usize) -> ChannelRealization {
        let mut rng = rng_from_seed(seed);
        let matrices = gen_wideband(&mut rng, &self.tx, &self.rx, &self.clusters, subcarriers);
        ChannelRealization {
            matrices,
            seed,
            params: ChannelParams {
                clusters: self.clusters,
                tx: self.tx,
                rx: self.rx,
                subcarriers,
            },
        }
    }
}

/// Portable JSON form of a realization. Each matrix is stored row-major with
/// interleaved `re, im` pairs.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelDump {
    pub n_rx: usize,
    pub n_tx: usize,
    pub subcarriers: usize,
    pub seed: u64,
    pub params: ChannelParams,
    pub matrices: Vec<Vec<f64>>,
}

impl From<&ChannelRealization> for ChannelDump {
    fn from(ch: &ChannelRealization) -> Self {
        let h0 = ch.narrowband();
        let matrices = ch
            .matrices
            .iter()
            .map(|h| {
                let mut flat = Vec::with_capacity(2 * h.len());
                for i in 0..h.nrows() {
                    for j in 0..h.ncols() {
                        flat.push(h[(i, j)].re);
                        flat.push(h[(i, j)].im);
                    }
                }
                flat
            })
            .collect();
        ChannelDump {
            n_rx: h0.nrows(),
            n_tx: h0.ncols(),
            subcarriers: ch.matrices.len(),
            seed: ch.seed,
            params: ch.params,
            matrices,
        }
    }
}

impl TryFrom<ChannelDump> for ChannelRealization {
    type Error = Error;

    fn try_from(d: ChannelDump) -> Result<Self> {
        if d.matrices.len() != d.subcarriers || d.subcarriers == 0 {
            return Err(Error::Dimension(format!(
                "dump declares {} subcarriers but holds {} matrices",
                d.subcarriers,
                d.matrices.len()
            )));
        }
        let matrices = d
            .matrices
            .iter()
            .map(|flat| {
                if flat.len() != 2 * d.n_rx * d.n_tx {
                    return Err(Error::Dimension(format!(
                        "expected {} values per matrix, found {}",
                        2 * d.n_rx * d.n_tx,
                        flat.len()
                    )));
                }
                Ok(ComplexMatrix::from_fn(d.n_rx, d.n_tx, |i, j| {
                    let o = 2 * (i * d.n_tx + j);
                    C64::new(flat[o], flat[o + 1])
                }))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ChannelRealization {
            matrices,
            seed: d.seed,
            params: d.params,
        })
    }
}

impl ChannelRealization {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&ChannelDump::from(self))?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let dump: ChannelDump = serde_json::from_str(s)?;
        dump.try_into()
    }
}
