//! Monte Carlo block error rate of CSS codes on the depolarizing channel,
//! decoding the X and Z parts separately with sum-product.
//!
//! The channel parameter `f_m` is read either as the probability of each
//! Pauli or as the total error probability; see [`ChannelReading`].
//!
//! Random streams: sweep point `i` of a run with seed `s` uses the ChaCha8
//! key `seed_from_u64(mix(s, i))`, and trial `t` at that point uses stream
//! `t` of that key. Trials are therefore independent of how they are
//! scheduled across threads.

use std::time::{Duration, Instant};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::decoder::{build_tanner, DecoderError, SumProduct, TannerGraph, DEFAULT_MAX_ITER};
use crate::gf2::{BitMatrix, BitVec, RankProfile};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("f_m out of range for the channel reading: {0}")]
    InvalidChannel(f64),
    #[error("trials must be at least 1")]
    NoTrials,
    #[error(transparent)]
    Decoder(#[from] DecoderError),
}

/// How the channel parameter `f_m` maps to Pauli probabilities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ChannelReading {
    /// X, Y and Z each occur with probability `f_m`.
    PerPauli,
    /// `f_m` is the total error probability, split evenly over X, Y and Z.
    #[default]
    Depolarizing,
}

impl std::fmt::Display for ChannelReading {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ChannelReading::PerPauli => "per-pauli",
            ChannelReading::Depolarizing => "depolarizing",
        })
    }
}

impl std::str::FromStr for ChannelReading {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "per-pauli" | "pauli" => Ok(ChannelReading::PerPauli),
            "depolarizing" | "total" => Ok(ChannelReading::Depolarizing),
            _ => Err(format!("unknown channel reading {s:?} (per-pauli, depolarizing)")),
        }
    }
}

/// Each qubit independently suffers X, Y or Z, each with the same
/// probability.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelModel {
    f_m: f64,
    pauli: f64,
    // thresholds on a uniform u64 for X, Y and Z
    cut: [u64; 3],
}

impl ChannelModel {
    /// X, Y and Z each with probability `f_m`; needs `3 f_m <= 1`.
    pub fn new(f_m: f64) -> Result<Self, SimError> {
        Self::with_reading(f_m, ChannelReading::PerPauli)
    }

    pub fn with_reading(f_m: f64, reading: ChannelReading) -> Result<Self, SimError> {
        if !(f_m.is_finite() && f_m >= 0.0) {
            return Err(SimError::InvalidChannel(f_m));
        }
        let pauli = match reading {
            ChannelReading::PerPauli => f_m,
            ChannelReading::Depolarizing => f_m / 3.0,
        };
        if 3.0 * pauli > 1.0 + 1e-12 {
            return Err(SimError::InvalidChannel(f_m));
        }
        let scale = |x: f64| {
            if x >= 1.0 {
                u64::MAX
            } else {
                (x * 18_446_744_073_709_551_616.0) as u64
            }
        };
        Ok(Self {
            f_m,
            pauli,
            cut: [scale(pauli), scale(2.0 * pauli), scale(3.0 * pauli)],
        })
    }

    pub fn f_m(&self) -> f64 {
        self.f_m
    }

    /// Probability of each of X, Y and Z.
    pub fn pauli_probability(&self) -> f64 {
        self.pauli
    }

    /// Marginal flip probability of each of the X and Z components.
    pub fn component_prior(&self) -> f64 {
        2.0 * self.pauli
    }
}

/// Draws a Pauli error on `n` qubits into `x` and `z` (one byte per qubit):
/// X sets `x`, Z sets `z`, Y sets both.
pub fn sample_error_into(channel: &ChannelModel, rng: &mut impl RngCore, x: &mut [u8], z: &mut [u8]) {
    let [cx, cy, cz] = channel.cut;
    for (xi, zi) in x.iter_mut().zip(z.iter_mut()) {
        let u = rng.next_u64();
        let (a, b) = if u >= cz {
            (0, 0)
        } else if u < cx {
            (1, 0)
        } else if u < cy {
            (1, 1)
        } else {
            (0, 1)
        };
        *xi = a;
        *zi = b;
    }
}

pub fn sample_error(channel: &ChannelModel, n: usize, rng: &mut impl RngCore) -> (BitVec, BitVec) {
    let mut x = vec![0u8; n];
    let mut z = vec![0u8; n];
    sample_error_into(channel, rng, &mut x, &mut z);
    (BitVec::from_bits(&x), BitVec::from_bits(&z))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SuccessCriterion {
    /// The residual error after correction is a stabilizer (lies in the row
    /// space of H).
    #[default]
    StabilizerEquivalent,
    /// The decoder must return the sampled error exactly.
    ExactRecovery,
}

/// A CSS code defined by one parity-check matrix used for both components.
pub struct SimCode {
    pub h: BitMatrix,
    pub graph: TannerGraph,
    row_space: RankProfile,
}

impl SimCode {
    pub fn new(h: BitMatrix) -> Self {
        let graph = build_tanner(&h);
        let row_space = RankProfile::new(&h);
        Self {
            h,
            graph,
            row_space,
        }
    }

    pub fn n(&self) -> usize {
        self.h.cols()
    }

    /// Whether a residual error (estimate plus truth) counts as success.
    pub fn accepts(&self, residual: &[u8], criterion: SuccessCriterion) -> bool {
        if residual.iter().all(|&r| r == 0) {
            return true;
        }
        match criterion {
            SuccessCriterion::ExactRecovery => false,
            SuccessCriterion::StabilizerEquivalent => {
                self.row_space.contains(&BitVec::from_bits(residual))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimConfig {
    pub f_m: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
    pub max_iter: usize,
    pub reading: ChannelReading,
    /// Prior fed to both decoders instead of the component flip probability.
    pub prior_override: Option<f64>,
    pub criterion: SuccessCriterion,
}

impl SimConfig {
    pub fn new(f_m: Vec<f64>, trials: u64, seed: u64) -> Self {
        Self {
            f_m,
            trials,
            seed,
            max_iter: DEFAULT_MAX_ITER,
            reading: ChannelReading::default(),
            prior_override: None,
            criterion: SuccessCriterion::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlerRecord {
    pub f_m: f64,
    pub trials: u64,
    pub block_errors: u64,
    pub bler: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub wall_time: Duration,
}

pub const WILSON_Z95: f64 = 1.959963984540054;

/// Wilson score interval for `errors` successes out of `trials`.
pub fn wilson_interval(errors: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = errors as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let low = if errors == 0 { 0.0 } else { (centre - half).max(0.0) };
    let high = if errors == trials { 1.0 } else { (centre + half).min(1.0) };
    (low, high)
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Generator for trial `trial` at sweep point `point`.
pub fn trial_rng(seed: u64, point: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(point)));
    rng.set_stream(trial);
    rng
}

/// Per-thread scratch space for trials.
pub struct TrialWorkspace<'c> {
    code: &'c SimCode,
    sp: SumProduct<'c>,
    x: Vec<u8>,
    z: Vec<u8>,
}

impl<'c> TrialWorkspace<'c> {
    pub fn new(code: &'c SimCode, max_iter: usize) -> Self {
        let mut sp = SumProduct::new(&code.graph);
        sp.max_iter = max_iter;
        Self {
            code,
            sp,
            x: vec![0; code.n()],
            z: vec![0; code.n()],
        }
    }

    fn correct(&mut self, component: Component, prior: f64, criterion: SuccessCriterion) -> Result<bool, SimError> {
        let truth = match component {
            Component::X => &self.x,
            Component::Z => &self.z,
        };
        let syndrome = self.code.graph.syndrome_of(truth);
        let residual: Vec<u8> = if syndrome.iter().all(|&s| s == 0) {
            truth.clone()
        } else {
            let (converged, _) = self.sp.decode_bytes(&syndrome, prior)?;
            if !converged {
                return Ok(false);
            }
            self.sp.estimate().iter().zip(truth).map(|(a, b)| a ^ b).collect()
        };
        Ok(self.code.accepts(&residual, criterion))
    }

    /// Samples one error and reports whether both components are corrected.
    pub fn run_trial(
        &mut self,
        channel: &ChannelModel,
        prior: f64,
        criterion: SuccessCriterion,
        rng: &mut impl RngCore,
    ) -> Result<bool, SimError> {
        sample_error_into(channel, rng, &mut self.x, &mut self.z);
        Ok(self.correct(Component::X, prior, criterion)?
            && self.correct(Component::Z, prior, criterion)?)
    }

    /// Corrects a given error (one byte per qubit for each component).
    pub fn run_fixed(
        &mut self,
        x: &[u8],
        z: &[u8],
        prior: f64,
        criterion: SuccessCriterion,
    ) -> Result<bool, SimError> {
        self.x.copy_from_slice(x);
        self.z.copy_from_slice(z);
        Ok(self.correct(Component::X, prior, criterion)?
            && self.correct(Component::Z, prior, criterion)?)
    }
}

#[derive(Clone, Copy)]
enum Component {
    X,
    Z,
}

fn count_failures(
    code: &SimCode,
    config: &SimConfig,
    point: u64,
    channel: &ChannelModel,
    prior: f64,
) -> Result<u64, SimError> {
    let trial = |ws: &mut TrialWorkspace<'_>, t: u64| -> Result<u64, SimError> {
        let mut rng = trial_rng(config.seed, point, t);
        Ok(u64::from(!ws.run_trial(channel, prior, config.criterion, &mut rng)?))
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..config.trials)
            .into_par_iter()
            .map_init(|| TrialWorkspace::new(code, config.max_iter), |ws, t| trial(ws, t))
            .try_reduce(|| 0, |a, b| Ok(a + b))
    }
    #[cfg(not(feature = "parallel"))]
    {
        let mut ws = TrialWorkspace::new(code, config.max_iter);
        let mut total = 0;
        for t in 0..config.trials {
            total += trial(&mut ws, t)?;
        }
        Ok(total)
    }
}

/// Block error rate at each `f_m` of the configuration, calling `on_point`
/// after each point.
pub fn estimate_bler_with(
    code: &SimCode,
    config: &SimConfig,
    mut on_point: impl FnMut(&BlerRecord),
) -> Result<Vec<BlerRecord>, SimError> {
    if config.trials == 0 {
        return Err(SimError::NoTrials);
    }
    let channels: Vec<ChannelModel> = config
        .f_m
        .iter()
        .map(|&f| ChannelModel::with_reading(f, config.reading))
        .collect::<Result<_, _>>()?;
    let mut out = Vec::with_capacity(channels.len());
    for (i, channel) in channels.iter().enumerate() {
        let start = Instant::now();
        let errors = if channel.f_m() == 0.0 {
            0
        } else {
            let prior = config.prior_override.unwrap_or(channel.component_prior());
            if !(prior > 0.0 && prior < 0.5) {
                return Err(DecoderError::InvalidPrior(prior).into());
            }
            count_failures(code, config, i as u64, channel, prior)?
        };
        let (ci_low, ci_high) = wilson_interval(errors, config.trials, WILSON_Z95);
        let rec = BlerRecord {
            f_m: channel.f_m(),
            trials: config.trials,
            block_errors: errors,
            bler: errors as f64 / config.trials as f64,
            ci_low,
            ci_high,
            wall_time: start.elapsed(),
        };
        on_point(&rec);
        out.push(rec);
    }
    Ok(out)
}

pub fn estimate_bler(code: &SimCode, config: &SimConfig) -> Result<Vec<BlerRecord>, SimError> {
    estimate_bler_with(code, config, |_| {})
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::build_pg;

    #[test]
    fn channel_bounds() {
        assert!(ChannelModel::new(-0.1).is_err());
        assert!(ChannelModel::new(0.34).is_err());
        assert!(ChannelModel::new(1.0 / 3.0).is_ok());
        assert!(ChannelModel::new(f64::NAN).is_err());
        let d = ChannelModel::with_reading(0.03, ChannelReading::Depolarizing).unwrap();
        assert!((d.pauli_probability() - 0.01).abs() < 1e-15);
        assert!((d.component_prior() - 0.02).abs() < 1e-15);
        assert!(ChannelModel::with_reading(1.0, ChannelReading::Depolarizing).is_ok());
        assert!(ChannelModel::with_reading(1.01, ChannelReading::Depolarizing).is_err());
        assert_eq!("per-pauli".parse(), Ok(ChannelReading::PerPauli));
    }

    #[test]
    fn extreme_channels() {
        let mut rng = trial_rng(1, 0, 0);
        let (x, z) = sample_error(&ChannelModel::new(0.0).unwrap(), 100, &mut rng);
        assert!(x.is_zero() && z.is_zero());
        let ch = ChannelModel::new(1.0 / 3.0).unwrap();
        let mut x = vec![0u8; 10_000];
        let mut z = vec![0u8; 10_000];
        sample_error_into(&ch, &mut rng, &mut x, &mut z);
        assert!(x.iter().zip(&z).all(|(a, b)| a | b == 1));
    }

    #[test]
    fn wilson_contains_estimate() {
        let (lo, hi) = wilson_interval(30, 1000, WILSON_Z95);
        assert!(lo < 0.03 && 0.03 < hi);
        let (lo, hi) = wilson_interval(0, 100, WILSON_Z95);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0 && hi < 0.05);
    }

    #[test]
    fn streams_differ_and_repeat() {
        let a: Vec<u64> = (0..4).map(|_| trial_rng(7, 0, 0).next_u64()).collect();
        assert!(a.windows(2).all(|w| w[0] == w[1]));
        assert_ne!(trial_rng(7, 0, 0).next_u64(), trial_rng(7, 0, 1).next_u64());
        assert_ne!(trial_rng(7, 0, 0).next_u64(), trial_rng(7, 1, 0).next_u64());
    }

    #[test]
    fn zero_noise_and_single_errors() {
        let g = build_pg(3, 2).unwrap();
        let code = SimCode::new(g.structure.point_by_block());
        let cfg = SimConfig::new(vec![0.0], 10, 3);
        assert_eq!(estimate_bler(&code, &cfg).unwrap()[0].block_errors, 0);
        let mut ws = TrialWorkspace::new(&code, 100);
        for i in 0..code.n() {
            let mut x = vec![0u8; code.n()];
            x[i] = 1;
            let z = vec![0u8; code.n()];
            assert!(ws.run_fixed(&x, &z, 0.01, SuccessCriterion::StabilizerEquivalent).unwrap());
        }
    }

    #[test]
    fn row_of_h_is_a_harmless_error() {
        let g = build_pg(3, 2).unwrap();
        let code = SimCode::new(g.structure.point_by_block());
        let mut r = code.h.row(0);
        r.xor_assign(&code.h.row(5));
        let r = r.to_bits();
        assert!(code.accepts(&r, SuccessCriterion::StabilizerEquivalent));
        assert!(!code.accepts(&r, SuccessCriterion::ExactRecovery));
        let mut single = vec![0u8; code.n()];
        single[0] = 1;
        assert!(!code.accepts(&single, SuccessCriterion::StabilizerEquivalent));
    }
}
