//! Analytic-versus-oracle comparison grid.
//!
//! Every analytic quantity is compared with the path simulator and, where one
//! exists, with a second numerical route. The report is plain text with fixed
//! formatting so that identical inputs give byte-identical output.

use std::fmt::Write as _;

use crate::bachelier::{bl_finite, bridge_noncross, segment_noncross, twopiece_noncross, LinearBoundary, TwoPieceBoundary};
use crate::dist::{global_max_cdf, joint_cdf, prob_nonpositive, running_max_cdf, JointQuery, MarginalQuery};
use crate::error::{Error, Result};
use crate::moments::{mean, mgf, moment_k, second_moment, second_moment_uncorrected};
use crate::montecarlo::{
    empirical_cdf, empirical_joint_cdf, sample_moment, simulate_bridge_noncross, simulate_running_max, McEstimate,
    McSpec, RunningMaxSamples,
};
use crate::quadrature::QuadratureSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    Marginal,
    Joint,
    Moments,
    Bridge,
    All,
}

impl Scope {
    fn includes(self, other: Scope) -> bool {
        self == Scope::All || self == other
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// A check that is supposed to fail; it does not count against the run.
    ExpectedFail,
    /// A check that was supposed to fail but passed.
    UnexpectedPass,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::ExpectedFail => "FAIL (expected)",
            Status::UnexpectedPass => "PASS (unexpected)",
        }
    }

    pub fn is_ok(self) -> bool {
        matches!(self, Status::Pass | Status::ExpectedFail)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub group: &'static str,
    pub label: String,
    pub analytic: f64,
    pub reference: f64,
    pub std_error: Option<f64>,
    pub abs_diff: f64,
    pub tolerance: f64,
    pub status: Status,
}

#[derive(Debug, Clone, Copy)]
pub struct ValidationConfig {
    pub mc: McSpec,
    pub quad: QuadratureSpec,
    /// Bridges per parameter point in the bridge group.
    pub bridges: usize,
}

impl Default for ValidationConfig {
    fn default() -> Self {
        Self {
            mc: McSpec { sampling: crate::montecarlo::MaxSampling::BridgeExact, ..McSpec::default() },
            quad: QuadratureSpec::default(),
            bridges: 100_000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub checks: Vec<Check>,
    pub header: String,
}

impl Report {
    pub fn all_ok(&self) -> bool {
        self.checks.iter().all(|c| c.status.is_ok())
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.status.is_ok())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{}", self.header).unwrap();
        writeln!(
            out,
            "{:<8} {:<56} {:>19} {:>19} {:>10} {:>10} {:>10}  status",
            "group", "check", "analytic", "reference", "std_err", "abs_diff", "tol"
        )
        .unwrap();
        for c in &self.checks {
            let se = c.std_error.map_or("-".to_string(), |v| format!("{v:.3e}"));
            writeln!(
                out,
                "{:<8} {:<56} {:>19.12} {:>19.12} {:>10} {:>10.3e} {:>10.3e}  {}",
                c.group,
                c.label,
                c.analytic,
                c.reference,
                se,
                c.abs_diff,
                c.tolerance,
                c.status.label()
            )
            .unwrap();
        }
        let failed = self.failures().count();
        writeln!(
            out,
            "{} checks, {} failed: {}",
            self.checks.len(),
            failed,
            if failed == 0 { "OK" } else { "FAILED" }
        )
        .unwrap();
        out
    }
}

pub const MARGINAL_S: [f64; 5] = [0.1, 0.3, 0.5, 0.8, 1.0];
pub const MARGINAL_M: [f64; 7] = [-1.0, 0.0, 0.5, 1.0, 1.5, 2.0, 3.0];
pub const JOINT_WINDOWS: [(f64, f64); 4] = [(0.3, 0.8), (0.5, 1.0), (0.2, 0.4), (0.0, 0.5)];
pub const JOINT_LEVELS: [(f64, f64); 5] = [(-0.5, 0.0), (0.0, 0.5), (0.5, 1.0), (1.0, 1.5), (1.0, 2.5)];
pub const MOMENT_S: [f64; 4] = [0.1, 0.25, 0.5, 1.0];
/// `(a, b, s̄, y)` for the bridge group.
pub const BRIDGE_POINTS: [(f64, f64, f64, f64); 5] = [
    (0.0, 1.0, 1.0, 0.0),
    (0.5, 0.5, 1.0, 0.2),
    (1.0, 0.3, 0.5, -0.4),
    (-0.5, 1.2, 0.8, 0.1),
    (0.2, 0.8, 0.25, 0.5),
];

const MC_FLOOR: f64 = 5e-3;
const BRIDGE_FLOOR: f64 = 1e-2;

struct Builder {
    checks: Vec<Check>,
}

impl Builder {
    fn push(&mut self, group: &'static str, label: String, analytic: f64, reference: f64, se: Option<f64>, tol: f64) {
        let abs_diff = (analytic - reference).abs();
        let status = if abs_diff <= tol { Status::Pass } else { Status::Fail };
        self.checks.push(Check { group, label, analytic, reference, std_error: se, abs_diff, tolerance: tol, status });
    }

    fn mc(&mut self, group: &'static str, label: String, analytic: f64, e: McEstimate, sigmas: f64, floor: f64) {
        self.push(group, label, analytic, e.estimate, Some(e.std_error), (sigmas * e.std_error).max(floor));
    }

    /// A check whose failure is the expected outcome.
    fn expect_fail(&mut self, group: &'static str, label: String, analytic: f64, reference: f64, se: Option<f64>, tol: f64) {
        self.push(group, label, analytic, reference, se, tol);
        let last = self.checks.last_mut().expect("just pushed");
        last.status = match last.status {
            Status::Fail => Status::ExpectedFail,
            _ => Status::UnexpectedPass,
        };
    }
}

fn horizons(scope: Scope) -> Vec<f64> {
    let mut h = Vec::new();
    if scope.includes(Scope::Marginal) {
        h.extend(MARGINAL_S);
    }
    if scope.includes(Scope::Joint) {
        for (s, t) in JOINT_WINDOWS {
            h.extend([s, t]);
        }
    }
    if scope.includes(Scope::Moments) {
        h.extend(MOMENT_S);
    }
    h
}

/// Run every check in `scope`.
pub fn run(scope: Scope, config: &ValidationConfig) -> Result<Report> {
    config.mc.validate()?;
    config.quad.validate()?;
    if config.bridges == 0 {
        return Err(Error::domain("bridges must be at least 1"));
    }
    let header = format!(
        "validation scope={:?} paths={} grid_step={:e} seed={} sampling={:?} bridges={}",
        scope, config.mc.paths, config.mc.grid_step, config.mc.master_seed, config.mc.sampling, config.bridges
    )
    .to_lowercase();

    let hs = horizons(scope);
    let sim = if hs.is_empty() {
        None
    } else {
        let t_max = hs.iter().copied().fold(0.0, f64::max);
        Some(simulate_running_max(&config.mc, &hs, t_max)?)
    };

    let mut b = Builder { checks: Vec::new() };
    if let Some(sim) = &sim {
        if scope.includes(Scope::Marginal) {
            marginal(&mut b, sim, &config.quad)?;
        }
        if scope.includes(Scope::Joint) {
            joint(&mut b, sim, &config.quad)?;
        }
        if scope.includes(Scope::Moments) {
            moments(&mut b, sim, &config.quad)?;
        }
    }
    if scope.includes(Scope::Bridge) {
        bridge(&mut b, config)?;
    }
    Ok(Report { checks: b.checks, header })
}

fn marginal(b: &mut Builder, sim: &RunningMaxSamples, quad: &QuadratureSpec) -> Result<()> {
    for s in MARGINAL_S {
        let col = sim.column(s)?;
        for m in MARGINAL_M {
            let analytic = running_max_cdf(MarginalQuery::new(m, s)?, quad)?;
            b.mc("marginal", format!("P(m_s<=m) s={s} m={m} vs mc"), analytic, empirical_cdf(&col, m)?, 3.0, MC_FLOOR);
        }
    }
    for m in [-1.0, 0.0, 0.5, 1.0, 2.0, 3.0] {
        let analytic = running_max_cdf(MarginalQuery::new(m, 1.0)?, quad)?;
        b.push("marginal", format!("P(m_1<=m) m={m} vs closed form"), analytic, global_max_cdf(m), None, 1e-8);
    }
    for s in [0.1, 0.5, 1.0] {
        let analytic = running_max_cdf(MarginalQuery::new(0.0, s)?, quad)?;
        b.push("marginal", format!("P(m_s<=0) s={s} vs closed form"), analytic, prob_nonpositive(s)?, None, 1e-8);
    }
    Ok(())
}

fn joint(b: &mut Builder, sim: &RunningMaxSamples, quad: &QuadratureSpec) -> Result<()> {
    for (s, t) in JOINT_WINDOWS {
        let pairs = sim.pairs(s, t)?;
        for (m, big_m) in JOINT_LEVELS {
            let analytic = joint_cdf(JointQuery::new(m, big_m, s, t)?, quad)?;
            let e = empirical_joint_cdf(&pairs, m, big_m)?;
            b.mc("joint", format!("P(m_s<=m,M_t<=M) s={s} t={t} m={m} M={big_m}"), analytic, e, 3.0, MC_FLOOR);

            let first = running_max_cdf(MarginalQuery::new(m, s)?, quad)?;
            let second = running_max_cdf(MarginalQuery::new(big_m, t)?, quad)?;
            let lower = (first + second - 1.0).max(0.0);
            let upper = first.min(second);
            // distance outside the Fréchet band, zero when inside
            let outside = (lower - analytic).max(analytic - upper).max(0.0);
            b.push("joint", format!("frechet s={s} t={t} m={m} M={big_m}"), outside, 0.0, None, 1e-9);
        }
        if s > 0.0 {
            let m = 0.5;
            let wide = joint_cdf(JointQuery::new(m, 12.0, s, t)?, quad)?;
            let cdf = running_max_cdf(MarginalQuery::new(m, s)?, quad)?;
            b.push("joint", format!("joint(m,M=12)=cdf(m,s) s={s} t={t}"), wide, cdf, None, 1e-7);
        }
        let c = 1.0;
        let equal = joint_cdf(JointQuery::new(c, c, s, t)?, quad)?;
        let cdf = running_max_cdf(MarginalQuery::new(c, t)?, quad)?;
        b.push("joint", format!("joint(c,c)=cdf(c,t) s={s} t={t}"), equal, cdf, None, 1e-7);
    }
    Ok(())
}

fn moments(b: &mut Builder, sim: &RunningMaxSamples, quad: &QuadratureSpec) -> Result<()> {
    for s in MOMENT_S {
        let col = sim.column(s)?;
        let m1 = sample_moment(&col, 1)?;
        let m2 = sample_moment(&col, 2)?;
        let mean_s = mean(s)?;
        let second = second_moment(s)?;
        let printed = second_moment_uncorrected(s)?;
        let q1 = moment_k(1, s, quad)?;
        let q2 = moment_k(2, s, quad)?;

        b.push("moments", format!("mean s={s} vs quadrature"), mean_s, q1, None, 1e-8);
        b.mc("moments", format!("mean s={s} vs mc"), mean_s, m1, 3.0, 0.0);
        b.push("moments", format!("second corrected s={s} vs quadrature"), second, q2, None, 1e-8);
        b.mc("moments", format!("second corrected s={s} vs mc"), second, m2, 3.0, 0.0);
        b.expect_fail("moments", format!("second printed s={s} vs quadrature"), printed, q2, None, 1e-8);
        b.expect_fail("moments", format!("second printed s={s} vs mc"), printed, m2.estimate, Some(m2.std_error), 3.0 * m2.std_error);
        let m3 = sample_moment(&col, 3)?;
        b.mc("moments", format!("third s={s} quadrature vs mc"), moment_k(3, s, quad)?, m3, 4.0, 0.0);
        b.push("moments", format!("mgf(0) s={s}"), mgf(0.0, s, quad)?, 1.0, None, 1e-9);
    }
    // the printed constant overshoots by 1/(1+s̄), which is at least 0.4 at s=0.1
    let s = 0.1;
    let gap = second_moment_uncorrected(s)? - moment_k(2, s, quad)?;
    b.push("moments", format!("printed minus quadrature s={s} (>=0.4)"), gap.min(0.4), 0.4, None, 0.0);
    Ok(())
}

fn bridge(b: &mut Builder, config: &ValidationConfig) -> Result<()> {
    let spec = McSpec { paths: config.bridges, ..config.mc };
    for (a, bb, sbar, y) in BRIDGE_POINTS {
        let analytic = bridge_noncross(a, bb, sbar, y)?;
        let e = simulate_bridge_noncross(a, bb, sbar, y, &spec)?;
        b.mc("bridge", format!("bridge a={a} b={bb} sbar={sbar} y={y} vs mc"), analytic, e, 3.0, BRIDGE_FLOOR);
    }
    // segment factor is Bachelier–Lévy with a shifted intercept
    for (c, d, sbar, horizon, y) in [(0.5, 1.0, 0.4, 1.0, 0.3), (-0.2, 0.8, 0.2, 0.6, -0.5), (1.0, 0.1, 0.5, 0.9, 0.5)] {
        let seg = segment_noncross(c, d, sbar, horizon, y)?;
        let shifted = bl_finite(d + c * sbar - y, c, horizon - sbar)?;
        b.push("bridge", format!("segment c={c} d={d} sbar={sbar} T={horizon} y={y}"), seg, shifted, None, 1e-14);
    }
    // a two-piece boundary that is really one line
    for (a, slope, sbar, horizon) in [(1.0, 0.5, 0.4, 1.0), (0.3, -0.2, 0.2, 0.7), (2.0, 1.0, 0.5, 0.6)] {
        let line = LinearBoundary::new(a, slope);
        let boundary = TwoPieceBoundary { first: line, second: line, breakpoint: sbar, horizon };
        let two = twopiece_noncross(&boundary, &config.quad)?;
        b.push("bridge", format!("two-piece continuous a={a} b={slope} sbar={sbar} T={horizon}"), two, bl_finite(a, slope, horizon)?, None, 1e-9);
    }
    Ok(())
}
