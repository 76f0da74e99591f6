//! Path simulation of the Slepian process, used as an independent oracle.
//!
//! A Brownian motion is sampled on `[0, 1 + t_max]` by Gaussian increments
//! and differenced at lag one: `S(u_k) = B(u_k + 1) - B(u_k)`. Because the lag
//! is a whole number of steps, consecutive values follow the exact recursion
//! `S_{k} = S_{k-1} + ΔB_{k-1+n} - ΔB_{k-1}` with `n = 1/h`.
//!
//! Every path draws from its own ChaCha8 stream, keyed by the master seed
//! and selected by the path index, so results do not depend on how paths are
//! spread over worker threads.
//!
//! Two ways of turning grid values into a running maximum are offered:
//!
//! * [`MaxSampling::Grid`] takes the maximum over grid points only. It is
//!   biased low by roughly `0.58·√(2h)`.
//! * [`MaxSampling::BridgeExact`] also samples the maximum inside each grid
//!   interval. Given the Brownian grid values, `S` between two grid points
//!   is the linear interpolant plus `√2` times an independent Brownian bridge
//!   (the two bridges of `B` it differences never coincide while
//!   `t_max ≤ 1`), whose maximum has a closed-form law. Intervals where the
//!   chance of exceeding the current maximum is below `e^{-50}` are skipped.

use rand::{Rng, RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Paths per unit of parallel work. Fixed so that the partition of work is
/// independent of the worker count.
const CHUNK: usize = 512;

/// Skip the intra-interval draw when the exceedance probability is below
/// `exp(-SKIP_EXPONENT)`.
const SKIP_EXPONENT: f64 = 50.0;

const DOMAIN_PATHS: u64 = 0x534c_4550_5041_5448; // "SLEPPATH"
const DOMAIN_BRIDGE: u64 = 0x534c_4550_4252_4447; // "SLEPBRDG"

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaxSampling {
    Grid,
    BridgeExact,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McSpec {
    pub paths: usize,
    /// Time step; must divide 1.
    pub grid_step: f64,
    pub master_seed: u64,
    pub workers: usize,
    pub sampling: MaxSampling,
    /// Upper bound on `paths × steps per path`.
    pub step_budget: u128,
}

impl Default for McSpec {
    fn default() -> Self {
        Self {
            paths: 1_000_000,
            grid_step: 1e-4,
            master_seed: 42,
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            sampling: MaxSampling::Grid,
            step_budget: 100_000_000_000,
        }
    }
}

impl McSpec {
    pub fn validate(&self) -> Result<()> {
        if self.paths == 0 {
            return Err(Error::domain("paths must be at least 1"));
        }
        if !(self.grid_step > 0.0 && self.grid_step <= 1e-2) {
            return Err(Error::domain(format!("grid_step must lie in (0, 0.01], got {}", self.grid_step)));
        }
        let n = (1.0 / self.grid_step).round();
        if (n * self.grid_step - 1.0).abs() > 1e-12 {
            return Err(Error::domain(format!("grid_step {} does not divide 1", self.grid_step)));
        }
        if self.workers == 0 {
            return Err(Error::domain("workers must be at least 1"));
        }
        Ok(())
    }

    /// Number of grid steps in one unit of time.
    pub fn steps_per_unit(&self) -> usize {
        (1.0 / self.grid_step).round() as usize
    }

    fn steps_for(&self, u: f64) -> Result<usize> {
        let n = self.steps_per_unit() as f64;
        let k = (u * n).round();
        if !(0.0..=1.0).contains(&u) || (k - u * n).abs() > 1e-6 {
            return Err(Error::domain(format!("time {u} is not a grid point in [0, 1]")));
        }
        Ok(k as usize)
    }

    fn check_budget(&self, steps_per_path: usize) -> Result<()> {
        let requested = self.paths as u128 * steps_per_path as u128;
        if requested > self.step_budget {
            return Err(Error::Resource { requested, budget: self.step_budget });
        }
        Ok(())
    }

    fn pool(&self) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .map_err(|e| Error::domain(format!("cannot start worker pool: {e}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub paths_used: usize,
}

impl McEstimate {
    fn proportion(hits: usize, n: usize) -> Self {
        let p = hits as f64 / n as f64;
        Self {
            estimate: p,
            std_error: (p * (1.0 - p) / n as f64).sqrt(),
            paths_used: n,
        }
    }

    fn from_values(values: impl Iterator<Item = f64> + Clone, n: usize) -> Self {
        let mean = values.clone().sum::<f64>() / n as f64;
        let var = if n > 1 {
            values.map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64
        } else {
            0.0
        };
        Self {
            estimate: mean,
            std_error: (var / n as f64).sqrt(),
            paths_used: n,
        }
    }
}

/// Running maxima `(m_s, M_t)` of one path for a pair of horizons `s ≤ t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathSample {
    pub m_s: f64,
    pub big_m_t: f64,
}

/// Running maxima of every simulated path at each recorded horizon.
#[derive(Debug, Clone)]
pub struct RunningMaxSamples {
    horizons: Vec<f64>,
    paths: usize,
    // row-major: paths × horizons
    data: Vec<f64>,
}

impl RunningMaxSamples {
    pub fn horizons(&self) -> &[f64] {
        &self.horizons
    }

    pub fn paths(&self) -> usize {
        self.paths
    }

    /// Maxima of path `i`, one per horizon.
    pub fn path(&self, i: usize) -> &[f64] {
        let w = self.horizons.len();
        &self.data[i * w..(i + 1) * w]
    }

    fn index_of(&self, s: f64) -> Result<usize> {
        self.horizons
            .iter()
            .position(|&h| (h - s).abs() < 1e-12)
            .ok_or_else(|| Error::domain(format!("horizon {s} was not simulated")))
    }

    /// `m_s` for every path.
    pub fn column(&self, s: f64) -> Result<Vec<f64>> {
        let j = self.index_of(s)?;
        let w = self.horizons.len();
        Ok(self.data.iter().skip(j).step_by(w).copied().collect())
    }

    pub fn pairs(&self, s: f64, t: f64) -> Result<Vec<PathSample>> {
        if s > t {
            return Err(Error::domain(format!("need s ≤ t, got s={s}, t={t}")));
        }
        let (i, j) = (self.index_of(s)?, self.index_of(t)?);
        Ok((0..self.paths)
            .map(|p| {
                let row = self.path(p);
                PathSample { m_s: row[i], big_m_t: row[j] }
            })
            .collect())
    }
}

/// Values `S(u)` of every path at requested grid times.
#[derive(Debug, Clone)]
pub struct ValueSamples {
    times: Vec<f64>,
    paths: usize,
    data: Vec<f64>,
}

impl ValueSamples {
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn column(&self, u: f64) -> Result<Vec<f64>> {
        let j = self
            .times
            .iter()
            .position(|&h| (h - u).abs() < 1e-12)
            .ok_or_else(|| Error::domain(format!("time {u} was not recorded")))?;
        let w = self.times.len();
        Ok(self.data.iter().skip(j).step_by(w).take(self.paths).copied().collect())
    }
}

fn stream(master_seed: u64, domain: u64, index: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&master_seed.to_le_bytes());
    key[8..16].copy_from_slice(&domain.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(index);
    rng
}

/// Uniform on (0, 1].
#[inline]
fn open_uniform<R: Rng>(rng: &mut R) -> f64 {
    1.0 - rng.random::<f64>()
}

/// Running maximum after the grid interval from `a` to `b`, for a path with
/// variance rate 2 and the current maximum `running ≥ a`.
#[inline]
fn bridge_interval_max<R: Rng>(rng: &mut R, a: f64, b: f64, running: f64, h: f64) -> f64 {
    // P(max > r) = exp(-(r-a)(r-b)/h) for r ≥ max(a, b)
    let sample = |u: f64| 0.5 * (a + b + ((b - a) * (b - a) - 4.0 * h * u.ln()).sqrt());
    if b >= running {
        return sample(open_uniform(rng));
    }
    let exponent = (running - a) * (running - b) / h;
    if exponent > SKIP_EXPONENT {
        return running;
    }
    let u = open_uniform(rng);
    if u.ln() < -exponent {
        sample(u).max(running)
    } else {
        running
    }
}

struct PathLayout<'a> {
    lag: usize,
    last: usize,
    h: f64,
    sampling: MaxSampling,
    horizon_steps: &'a [usize],
    value_steps: &'a [usize],
}

fn simulate_one<R: Rng>(rng: &mut R, layout: &PathLayout<'_>, incr: &mut Vec<f64>, row: &mut [f64]) {
    let PathLayout { lag, last, h, sampling, horizon_steps, value_steps } = *layout;
    let root_h = h.sqrt();
    incr.clear();
    incr.extend((0..lag + last).map(|_| root_h * rng.sample::<f64, _>(StandardNormal)));

    let (max_out, val_out) = row.split_at_mut(horizon_steps.len());
    let mut s: f64 = incr[..lag].iter().sum();
    let mut running = s;
    let (mut hi, mut vi) = (0, 0);
    let mut record = |k: usize, s: f64, running: f64, hi: &mut usize, vi: &mut usize| {
        while *hi < horizon_steps.len() && horizon_steps[*hi] == k {
            max_out[*hi] = running;
            *hi += 1;
        }
        while *vi < value_steps.len() && value_steps[*vi] == k {
            val_out[*vi] = s;
            *vi += 1;
        }
    };
    record(0, s, running, &mut hi, &mut vi);
    for k in 1..=last {
        let prev = s;
        s += incr[lag + k - 1] - incr[k - 1];
        running = match sampling {
            MaxSampling::Grid => running.max(s),
            MaxSampling::BridgeExact => bridge_interval_max(rng, prev, s, running, h),
        };
        record(k, s, running, &mut hi, &mut vi);
    }
    for w in max_out.windows(2) {
        assert!(w[0] <= w[1], "running maxima must be nested");
    }
}

fn run_paths(spec: &McSpec, horizons: &[f64], times: &[f64]) -> Result<(Vec<usize>, Vec<usize>, Vec<f64>)> {
    spec.validate()?;
    let horizon_steps = horizons.iter().map(|&u| spec.steps_for(u)).collect::<Result<Vec<_>>>()?;
    let value_steps = times.iter().map(|&u| spec.steps_for(u)).collect::<Result<Vec<_>>>()?;
    let last = horizon_steps.iter().chain(&value_steps).copied().max().unwrap_or(0);
    let lag = spec.steps_per_unit();
    spec.check_budget(lag + last)?;

    let layout = PathLayout {
        lag,
        last,
        h: spec.grid_step,
        sampling: spec.sampling,
        horizon_steps: &horizon_steps,
        value_steps: &value_steps,
    };
    let width = horizon_steps.len() + value_steps.len();
    let mut data = vec![0.0; spec.paths * width];
    spec.pool()?.install(|| {
        data.par_chunks_mut(CHUNK * width).enumerate().for_each(|(c, chunk)| {
            let mut incr = Vec::with_capacity(lag + last);
            for (i, row) in chunk.chunks_mut(width).enumerate() {
                let index = (c * CHUNK + i) as u64;
                let mut rng = stream(spec.master_seed, DOMAIN_PATHS, index);
                simulate_one(&mut rng, &layout, &mut incr, row);
            }
        });
    });
    Ok((horizon_steps, value_steps, data))
}

fn sorted_unique(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    v
}

/// Simulate `spec.paths` Slepian paths on `[0, t_max]` and record the running
/// maximum at every horizon in `s_list` and at `t_max`.
pub fn simulate_running_max(spec: &McSpec, s_list: &[f64], t_max: f64) -> Result<RunningMaxSamples> {
    if let Some(&bad) = s_list.iter().find(|&&s| !(s <= t_max)) {
        return Err(Error::domain(format!("horizon {bad} exceeds t_max = {t_max}")));
    }
    let mut all = s_list.to_vec();
    all.push(t_max);
    let horizons = sorted_unique(all);
    let (_, _, data) = run_paths(spec, &horizons, &[])?;
    Ok(RunningMaxSamples { horizons, paths: spec.paths, data })
}

/// Simulate the same paths as [`simulate_running_max`] and record `S(u)` at
/// the given grid times.
pub fn simulate_values(spec: &McSpec, times: &[f64]) -> Result<ValueSamples> {
    let times = sorted_unique(times.to_vec());
    if times.is_empty() {
        return Err(Error::EmptyInput);
    }
    // keep the final time as a (discarded) horizon so the layout is non-empty
    let last = *times.last().expect("non-empty");
    let (_, _, data) = run_paths(spec, &[last], &times)?;
    let w = times.len() + 1;
    let values = data.chunks(w).flat_map(|row| row[1..].iter().copied()).collect();
    Ok(ValueSamples { times, paths: spec.paths, data: values })
}

/// Fraction of samples at or below `level`, with its binomial standard error.
pub fn empirical_cdf(samples: &[f64], level: f64) -> Result<McEstimate> {
    if samples.is_empty() {
        return Err(Error::EmptyInput);
    }
    if level.is_nan() {
        return Err(Error::domain("level is NaN"));
    }
    let hits = samples.iter().filter(|&&x| x <= level).count();
    Ok(McEstimate::proportion(hits, samples.len()))
}

/// Fraction of paths with `m_s ≤ m` and `M_t ≤ M`.
pub fn empirical_joint_cdf(samples: &[PathSample], m: f64, big_m: f64) -> Result<McEstimate> {
    if samples.is_empty() {
        return Err(Error::EmptyInput);
    }
    if m.is_nan() || big_m.is_nan() {
        return Err(Error::domain("levels must not be NaN"));
    }
    let hits = samples.iter().filter(|p| p.m_s <= m && p.big_m_t <= big_m).count();
    Ok(McEstimate::proportion(hits, samples.len()))
}

/// Sample mean of `x^k` with its standard error.
pub fn sample_moment(samples: &[f64], k: u32) -> Result<McEstimate> {
    if samples.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(McEstimate::from_values(samples.iter().map(|x| x.powi(k as i32)), samples.len()))
}

/// Sample covariance of paired values, with a delta-method standard error.
pub fn sample_covariance(x: &[f64], y: &[f64]) -> Result<McEstimate> {
    if x.is_empty() || x.len() != y.len() {
        return Err(Error::EmptyInput);
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let prods = x.iter().zip(y).map(move |(a, b)| (a - mx) * (b - my));
    Ok(McEstimate::from_values(prods, x.len()))
}

/// Fraction of Brownian bridges from `0` to `y` over `[0, s̄]` that stay at or
/// below `a·u + b`.
///
/// On the grid alone crossings between grid points are missed, so
/// [`MaxSampling::Grid`] over-estimates the non-crossing probability;
/// [`MaxSampling::BridgeExact`] also draws those crossings.
pub fn simulate_bridge_noncross(a: f64, b: f64, sbar: f64, y: f64, spec: &McSpec) -> Result<McEstimate> {
    spec.validate()?;
    if !(sbar > 0.0 && sbar.is_finite()) {
        return Err(Error::domain(format!("bridge length must be positive, got {sbar}")));
    }
    if y > a * sbar + b {
        return Err(Error::domain(format!("bridge endpoint {y} lies above the boundary")));
    }
    if b <= 0.0 {
        return Ok(McEstimate { estimate: 0.0, std_error: 0.0, paths_used: spec.paths });
    }
    let steps = ((sbar / spec.grid_step).round() as usize).max(1);
    spec.check_budget(steps)?;
    let dt = sbar / steps as f64;
    let root_dt = dt.sqrt();

    let mut survived = vec![false; spec.paths];
    spec.pool()?.install(|| {
        survived.par_chunks_mut(CHUNK).enumerate().for_each(|(c, chunk)| {
            let mut walk = Vec::with_capacity(steps + 1);
            for (i, out) in chunk.iter_mut().enumerate() {
                let mut rng = stream(spec.master_seed, DOMAIN_BRIDGE, (c * CHUNK + i) as u64);
                walk.clear();
                walk.push(0.0);
                let mut w = 0.0;
                for _ in 0..steps {
                    w += root_dt * rng.sample::<f64, _>(StandardNormal);
                    walk.push(w);
                }
                let pull = walk[steps] - y;
                let mut gap_prev = b;
                let mut alive = true;
                for (k, &wk) in walk.iter().enumerate().skip(1) {
                    let frac = k as f64 / steps as f64;
                    let x = if k == steps { y } else { wk - frac * pull };
                    let gap = a * (k as f64 * dt) + b - x;
                    if gap < 0.0 {
                        alive = false;
                        break;
                    }
                    if spec.sampling == MaxSampling::BridgeExact {
                        let exponent = 2.0 * gap_prev * gap / dt;
                        if exponent <= SKIP_EXPONENT && open_uniform(&mut rng).ln() < -exponent {
                            alive = false;
                            break;
                        }
                    }
                    gap_prev = gap;
                }
                *out = alive;
            }
        });
    });
    let hits = survived.iter().filter(|&&v| v).count();
    Ok(McEstimate::proportion(hits, spec.paths))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::global_max_cdf;

    fn small(paths: usize) -> McSpec {
        McSpec { paths, grid_step: 1e-3, master_seed: 7, workers: 2, ..McSpec::default() }
    }

    #[test]
    fn spec_validation() {
        assert!(McSpec { paths: 0, ..small(1) }.validate().is_err());
        assert!(McSpec { grid_step: 0.03, ..small(1) }.validate().is_err());
        assert!(McSpec { grid_step: 0.003, ..small(1) }.validate().is_err());
        assert!(McSpec { workers: 0, ..small(1) }.validate().is_err());
        assert!(small(1).validate().is_ok());
    }

    #[test]
    fn budget_enforced() {
        let spec = McSpec { step_budget: 1000, ..small(10) };
        assert!(matches!(simulate_running_max(&spec, &[0.5], 1.0), Err(Error::Resource { .. })));
    }

    #[test]
    fn horizons_must_be_grid_points() {
        assert!(simulate_running_max(&small(4), &[0.12345], 1.0).is_err());
        assert!(simulate_running_max(&small(4), &[0.6], 0.5).is_err());
    }

    #[test]
    fn empirical_cdf_examples() {
        let e = empirical_cdf(&[1.0, 2.0, 3.0], 2.0).unwrap();
        assert!((e.estimate - 2.0 / 3.0).abs() < 1e-15);
        assert!((e.std_error - ((2.0 / 3.0) * (1.0 / 3.0) / 3.0f64).sqrt()).abs() < 1e-15);
        assert_eq!(empirical_cdf(&[1.0, 2.0], f64::NEG_INFINITY).unwrap().estimate, 0.0);
        assert_eq!(empirical_cdf(&[1.0, 2.0], f64::INFINITY).unwrap().estimate, 1.0);
        assert!(matches!(empirical_cdf(&[], 0.0), Err(Error::EmptyInput)));
    }

    #[test]
    fn joint_empirical_examples() {
        let spec = small(2000);
        let sim = simulate_running_max(&spec, &[0.3], 0.8).unwrap();
        let pairs = sim.pairs(0.3, 0.8).unwrap();
        let all = empirical_joint_cdf(&pairs, f64::INFINITY, f64::INFINITY).unwrap();
        assert_eq!(all.estimate, 1.0);
        let nested = empirical_joint_cdf(&pairs, 0.7, 0.7).unwrap();
        let top = empirical_cdf(&sim.column(0.8).unwrap(), 0.7).unwrap();
        assert_eq!(nested.estimate, top.estimate);
        assert!(matches!(empirical_joint_cdf(&[], 0.0, 0.0), Err(Error::EmptyInput)));
    }

    #[test]
    fn time_zero_maximum_is_standard_normal() {
        let spec = McSpec { paths: 20_000, ..small(1) };
        let sim = simulate_running_max(&spec, &[0.0], 0.0).unwrap();
        let e = empirical_cdf(&sim.column(0.0).unwrap(), 0.0).unwrap();
        assert!((e.estimate - 0.5).abs() <= 3.0 * e.std_error);
    }

    #[test]
    fn global_maximum_nonpositive_probability() {
        let spec = McSpec { paths: 20_000, sampling: MaxSampling::BridgeExact, ..small(1) };
        let sim = simulate_running_max(&spec, &[], 1.0).unwrap();
        let e = empirical_cdf(&sim.column(1.0).unwrap(), 0.0).unwrap();
        let want = global_max_cdf(0.0);
        assert!((e.estimate - want).abs() <= (3.0 * e.std_error).max(5e-3), "{e:?} vs {want}");
    }

    #[test]
    fn covariance_and_stationarity() {
        let spec = McSpec { paths: 20_000, ..small(1) };
        let v = simulate_values(&spec, &[0.0, 0.2, 0.5, 0.7, 1.0]).unwrap();
        let cov = sample_covariance(&v.column(0.2).unwrap(), &v.column(0.7).unwrap()).unwrap();
        assert!((cov.estimate - 0.5).abs() <= 4.0 * cov.std_error, "{cov:?}");
        for u in [0.0, 0.5, 1.0] {
            let col = v.column(u).unwrap();
            let m1 = sample_moment(&col, 1).unwrap();
            let m2 = sample_moment(&col, 2).unwrap();
            assert!(m1.estimate.abs() <= 4.0 * m1.std_error, "mean at {u}: {m1:?}");
            assert!((m2.estimate - 1.0).abs() <= 4.0 * m2.std_error, "second moment at {u}: {m2:?}");
        }
    }

    #[test]
    fn values_share_streams_with_maxima() {
        let spec = small(50);
        let v = simulate_values(&spec, &[0.0]).unwrap();
        let sim = simulate_running_max(&spec, &[0.0], 0.0).unwrap();
        assert_eq!(v.column(0.0).unwrap(), sim.column(0.0).unwrap());
    }

    #[test]
    fn deterministic_across_worker_counts() {
        for sampling in [MaxSampling::Grid, MaxSampling::BridgeExact] {
            let base = McSpec { paths: 1500, sampling, ..small(1) };
            let one = simulate_running_max(&McSpec { workers: 1, ..base }, &[0.2, 0.5], 1.0).unwrap();
            let four = simulate_running_max(&McSpec { workers: 4, ..base }, &[0.2, 0.5], 1.0).unwrap();
            assert_eq!(one.data, four.data);
            let b1 = simulate_bridge_noncross(0.0, 1.0, 1.0, 0.0, &McSpec { workers: 1, ..base }).unwrap();
            let b3 = simulate_bridge_noncross(0.0, 1.0, 1.0, 0.0, &McSpec { workers: 3, ..base }).unwrap();
            assert_eq!(b1, b3);
        }
    }

    #[test]
    fn maxima_are_nested_and_exact_dominates_grid() {
        let grid = simulate_running_max(&small(300), &[0.1, 0.4], 0.9).unwrap();
        let exact = simulate_running_max(&McSpec { sampling: MaxSampling::BridgeExact, ..small(300) }, &[0.1, 0.4], 0.9).unwrap();
        for i in 0..300 {
            let (g, e) = (grid.path(i), exact.path(i));
            assert!(g.windows(2).all(|w| w[0] <= w[1]));
            // same normals, so the exact maximum can only be larger
            for (a, b) in g.iter().zip(e) {
                assert!(b >= a);
            }
        }
    }

    #[test]
    fn grid_refinement_reduces_bias() {
        let coarse = McSpec { paths: 20_000, grid_step: 1e-2, ..small(1) };
        let fine = McSpec { grid_step: 5e-3, ..coarse };
        let f = |spec: &McSpec| {
            let sim = simulate_running_max(spec, &[], 0.5).unwrap();
            empirical_cdf(&sim.column(0.5).unwrap(), 1.0).unwrap()
        };
        let (c, d) = (f(&coarse), f(&fine));
        let se = (c.std_error.powi(2) + d.std_error.powi(2)).sqrt();
        assert!(c.estimate >= d.estimate - 3.0 * se, "{c:?} {d:?}");
    }

    #[test]
    fn bridge_examples() {
        let spec = McSpec { paths: 20_000, ..small(1) };
        let want = 1.0 - (-2.0f64).exp();
        for sampling in [MaxSampling::Grid, MaxSampling::BridgeExact] {
            let e = simulate_bridge_noncross(0.0, 1.0, 1.0, 0.0, &McSpec { sampling, ..spec }).unwrap();
            assert!((e.estimate - want).abs() <= (3.0 * e.std_error).max(1e-2), "{sampling:?}: {e:?}");
        }
        let touching = simulate_bridge_noncross(0.0, 1.0, 1.0, 1.0, &spec).unwrap();
        assert!(touching.estimate <= 0.5 + 3.0 * touching.std_error);
        let exact = McSpec { sampling: MaxSampling::BridgeExact, ..spec };
        assert_eq!(simulate_bridge_noncross(0.0, 1.0, 1.0, 1.0, &exact).unwrap().estimate, 0.0);
        assert_eq!(simulate_bridge_noncross(0.0, -0.5, 1.0, -1.0, &spec).unwrap().estimate, 0.0);
        assert!(simulate_bridge_noncross(0.0, 1.0, 1.0, 2.0, &spec).is_err());
    }
}
