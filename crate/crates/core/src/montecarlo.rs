//! Seeded Monte Carlo experiments on random submatrices.
//!
//! Every trial draws its row set and column set from its own ChaCha stream,
//! keyed by `(master_seed, point, trial, side)`. Trials run in parallel and
//! are collected in trial order, and every aggregate is a compensated sum in
//! that order, so results do not depend on the number of threads.

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{extrapolation_bound, small_moment_bound, tail_bound, TailModel, TailParams};
use crate::error::{ensure_domain, Error, Result};
use crate::linalg::{spectral_norm, DEFAULT_TOL};
use crate::matrix::{submatrix, BoundedMatrix, Dft, Hadamard};
use crate::random_sets::{sample_set, stream_index, SeedSpec, SetModel, Side};
use crate::scalar::Real;
use crate::stats::{clopper_pearson, describe, CompensatedSum};

pub const DEFAULT_TRIALS: usize = 100;

/// Largest `|O| * |T|` a trial may materialize.
pub const DEFAULT_DENSE_BUDGET: usize = 1 << 22;

/// Confidence level of the tail verifier's binomial intervals.
pub const TAIL_CONFIDENCE: f64 = 0.999;

/// Width, in jackknife standard errors, of the moment-root upper edge.
pub const MOMENT_EDGE_SE: f64 = 3.0;

/// Factor applied to each sampled norm.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scaling {
    None,
    /// `delta^{-1/2}` with `delta` the row model's sampling rate.
    InverseSqrtDelta,
    /// `max{|T|/n, |O|/n}^{-1/2}` for the realized sets.
    InverseSqrtMax,
    /// `sqrt(n / |O|)` for the realized row set.
    SqrtNOverOmega,
}

impl Scaling {
    pub fn as_str(&self) -> &'static str {
        match self {
            Scaling::None => "none",
            Scaling::InverseSqrtDelta => "inverse_sqrt_delta",
            Scaling::InverseSqrtMax => "inverse_sqrt_max",
            Scaling::SqrtNOverOmega => "sqrt_n_over_omega",
        }
    }

    /// The factor for one trial. Empty sets give factor 1 since the norm is 0.
    pub fn factor(&self, n: usize, row_model: &SetModel, omega_size: usize, t_size: usize) -> f64 {
        let inv_sqrt = |x: f64| if x > 0.0 { x.sqrt().recip() } else { 1.0 };
        match self {
            Scaling::None => 1.0,
            Scaling::InverseSqrtDelta => inv_sqrt(row_model.delta()),
            Scaling::InverseSqrtMax => inv_sqrt(omega_size.max(t_size) as f64 / n as f64),
            Scaling::SqrtNOverOmega => inv_sqrt(omega_size as f64 / n as f64),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Statistic {
    MeanNorm,
    /// Also report `(mean x^{2q})^{1/2q}`.
    Moment { q: usize },
    /// Also report the frequency of `x >= u`.
    Tail { u: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MatrixSpec {
    Dft { n: usize },
    Hadamard { n: usize },
}

impl MatrixSpec {
    pub fn n(&self) -> usize {
        match *self {
            MatrixSpec::Dft { n } | MatrixSpec::Hadamard { n } => n,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlanPoint {
    pub label: String,
    pub row_model: SetModel,
    pub col_model: SetModel,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentPlan {
    pub matrix: MatrixSpec,
    pub points: Vec<PlanPoint>,
    pub trials: usize,
    pub master_seed: u64,
    pub scaling: Scaling,
    pub statistic: Statistic,
    pub dense_budget: usize,
    pub tol: f64,
}

impl ExperimentPlan {
    pub fn new(matrix: MatrixSpec, points: Vec<PlanPoint>, trials: usize, master_seed: u64) -> Self {
        Self {
            matrix,
            points,
            trials,
            master_seed,
            scaling: Scaling::None,
            statistic: Statistic::MeanNorm,
            dense_budget: DEFAULT_DENSE_BUDGET,
            tol: DEFAULT_TOL,
        }
    }

    fn validate(&self) -> Result<()> {
        ensure_domain!(self.trials >= 1, "trials must be at least 1");
        ensure_domain!(self.tol > 0.0, "tolerance must be positive");
        match self.statistic {
            Statistic::Moment { q } => ensure_domain!(q >= 1, "moment order q must be at least 1"),
            Statistic::Tail { u } => ensure_domain!(u >= 0.0, "tail level u must be nonnegative"),
            Statistic::MeanNorm => {}
        }
        let n = self.matrix.n();
        for p in &self.points {
            ensure_domain!(
                p.row_model.n() == n && p.col_model.n() == n,
                "point {} uses a model of the wrong dimension",
                p.label
            );
            if let (SetModel::FixedCardinality { m: rows, .. }, SetModel::FixedCardinality { m: cols, .. }) =
                (p.row_model, p.col_model)
            {
                check_budget(rows, cols, self.dense_budget)?;
            }
        }
        Ok(())
    }
}

fn check_budget(rows: usize, cols: usize, budget: usize) -> Result<()> {
    if rows.saturating_mul(cols) > budget {
        return Err(Error::Budget(format!(
            "{rows} x {cols} submatrix exceeds the dense budget of {budget} entries"
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialSummary {
    pub label: String,
    pub delta_t: f64,
    pub delta_omega: f64,
    pub mean: f64,
    pub std_dev: f64,
    pub min: f64,
    pub max: f64,
    pub trials: usize,
    pub moment_root: Option<f64>,
    pub moment_std_error: Option<f64>,
    pub tail_frequency: Option<f64>,
}

/// Raw norms of one grid point, in trial order, with the per-trial scaling
/// factors of the plan.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSamples {
    pub label: String,
    pub delta_t: f64,
    pub delta_omega: f64,
    pub norms: Vec<f64>,
    pub factors: Vec<f64>,
}

impl PointSamples {
    pub fn scaled(&self) -> Vec<f64> {
        self.norms.iter().zip(&self.factors).map(|(x, f)| x * f).collect()
    }
}

/// Draws every trial of `plan` against `a` and returns the raw norms.
pub fn sample_norms<T: Real, A: BoundedMatrix<T> + ?Sized>(a: &A, plan: &ExperimentPlan) -> Result<Vec<PointSamples>> {
    plan.validate()?;
    ensure_domain!(
        a.dim() == plan.matrix.n(),
        "matrix dimension {} does not match plan dimension {}",
        a.dim(),
        plan.matrix.n()
    );
    let n = a.dim();
    let tol = T::lit(plan.tol);
    let work: Vec<(usize, usize)> =
        (0..plan.points.len()).flat_map(|p| (0..plan.trials).map(move |t| (p, t))).collect();
    let draws: Vec<(f64, f64)> = work
        .par_iter()
        .map(|&(p, t)| {
            let point = &plan.points[p];
            let seed = |side| SeedSpec::new(plan.master_seed, stream_index(p as u64, t as u64, side));
            let omega = sample_set(&point.row_model, seed(Side::Rows));
            let cols = sample_set(&point.col_model, seed(Side::Cols));
            check_budget(omega.len(), cols.len(), plan.dense_budget)?;
            let norm = spectral_norm(&submatrix(a, &omega, &cols)?, tol)?.value.to_f64_lossy();
            Ok((norm, plan.scaling.factor(n, &point.row_model, omega.len(), cols.len())))
        })
        .collect::<Result<_>>()?;
    Ok(plan
        .points
        .iter()
        .zip(draws.chunks(plan.trials))
        .map(|(point, chunk)| PointSamples {
            label: point.label.clone(),
            delta_t: point.col_model.delta(),
            delta_omega: point.row_model.delta(),
            norms: chunk.iter().map(|d| d.0).collect(),
            factors: chunk.iter().map(|d| d.1).collect(),
        })
        .collect())
}

/// Aggregates one point's values under `statistic`.
pub fn summarize(samples: &PointSamples, values: &[f64], statistic: Statistic) -> TrialSummary {
    let m = describe(values);
    let mut s = TrialSummary {
        label: samples.label.clone(),
        delta_t: samples.delta_t,
        delta_omega: samples.delta_omega,
        mean: m.mean,
        std_dev: m.std_dev,
        min: m.min,
        max: m.max,
        trials: values.len(),
        moment_root: None,
        moment_std_error: None,
        tail_frequency: None,
    };
    match statistic {
        Statistic::MeanNorm => {}
        Statistic::Moment { q } => {
            let e = moment_root_of(values, q);
            s.moment_root = Some(e.root);
            s.moment_std_error = Some(e.moment_std_error);
        }
        Statistic::Tail { u } => {
            let hits = values.iter().filter(|&&x| x >= u).count();
            s.tail_frequency = Some(hits as f64 / values.len() as f64);
        }
    }
    s
}

/// Runs `plan` against an explicit matrix.
pub fn run_experiment_with<T: Real, A: BoundedMatrix<T> + ?Sized>(
    a: &A,
    plan: &ExperimentPlan,
) -> Result<Vec<TrialSummary>> {
    Ok(sample_norms(a, plan)?
        .iter()
        .map(|p| summarize(p, &p.scaled(), plan.statistic))
        .collect())
}

/// Runs `plan` against the matrix it names, in double precision.
pub fn run_experiment(plan: &ExperimentPlan) -> Result<Vec<TrialSummary>> {
    match plan.matrix {
        MatrixSpec::Dft { n } => run_experiment_with(&Dft::<f64>::new(n)?, plan),
        MatrixSpec::Hadamard { n } => run_experiment_with(&Hadamard::<f64>::new(n)?, plan),
    }
}

/// Plug-in moment root `(mean x^{2q})^{1/2q}` with its uncertainty.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MomentEstimate {
    pub q: usize,
    pub samples: usize,
    pub root: f64,
    /// Jackknife standard error of `root`.
    pub std_error: f64,
    /// Standard error of the plug-in `2q`-th moment.
    pub moment_std_error: f64,
    /// `root + 3 std_error`.
    pub upper_edge: f64,
    pub max_sample: f64,
}

/// Moment root of nonnegative samples. Powers are taken relative to the
/// largest sample so that `x^{2q}` cannot underflow.
pub fn moment_root_of(samples: &[f64], q: usize) -> MomentEstimate {
    assert!(!samples.is_empty() && q >= 1);
    let n = samples.len();
    let two_q = 2 * q as i32;
    let max = samples.iter().copied().fold(0.0f64, f64::max);
    if max == 0.0 {
        return MomentEstimate {
            q,
            samples: n,
            root: 0.0,
            std_error: 0.0,
            moment_std_error: 0.0,
            upper_edge: 0.0,
            max_sample: 0.0,
        };
    }
    let powers: Vec<f64> = samples.iter().map(|x| (x / max).powi(two_q)).collect();
    let total = powers.iter().copied().collect::<CompensatedSum>().total();
    let inv = 1.0 / (2.0 * q as f64);
    let root = (total / n as f64).powf(inv) * max;
    let (std_error, moment_std_error) = if n > 1 {
        let leave_out: Vec<f64> = powers
            .iter()
            .map(|y| ((total - y).max(0.0) / (n - 1) as f64).powf(inv) * max)
            .collect();
        // sqrt((n-1)/n * sum (r_i - mean r)^2) in terms of the sample std dev
        let jack = describe(&leave_out).std_dev * (n - 1) as f64 / (n as f64).sqrt();
        let moment_sd = describe(&powers).std_dev / (n as f64).sqrt() * max.powi(two_q);
        (jack, moment_sd)
    } else {
        (0.0, 0.0)
    };
    MomentEstimate {
        q,
        samples: n,
        root,
        std_error,
        moment_std_error,
        upper_edge: root + MOMENT_EDGE_SE * std_error,
        max_sample: max,
    }
}

fn single_point_plan(n: usize, row_model: SetModel, col_model: SetModel, trials: usize, seed: u64) -> ExperimentPlan {
    ExperimentPlan::new(
        MatrixSpec::Dft { n },
        vec![PlanPoint { label: "0".into(), row_model, col_model }],
        trials,
        seed,
    )
}

/// Estimates `(E ||P_O A P_T'||^{2q})^{1/2q}` by sampling.
pub fn estimate_moment_root<T: Real, A: BoundedMatrix<T> + ?Sized>(
    a: &A,
    row_model: SetModel,
    col_model: SetModel,
    q: usize,
    trials: usize,
    seed: u64,
) -> Result<MomentEstimate> {
    ensure_domain!(q >= 1, "moment order q must be at least 1");
    let mut plan = single_point_plan(a.dim(), row_model, col_model, trials, seed);
    plan.matrix = MatrixSpec::Dft { n: a.dim() };
    let samples = sample_norms(a, &plan)?;
    Ok(moment_root_of(&samples[0].norms, q))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SmallMomentReport {
    pub n: usize,
    pub q: usize,
    pub rho: f64,
    pub estimate: MomentEstimate,
    pub bound: f64,
    /// `bound / root`, to compare with the expected `log q` slack.
    pub ratio: f64,
    pub log_q: f64,
    pub holds: bool,
}

/// Checks `(E ||R_rho F R_rho'||^{2q})^{1/2q} <= 2q / sqrt(n)` with
/// `rho = 1/n`, judged on the upper confidence edge.
pub fn verify_small_moment(n: usize, q: usize, trials: usize, seed: u64) -> Result<SmallMomentReport> {
    let bound = small_moment_bound::<f64>(n, q)?;
    let rho = 1.0 / n as f64;
    let model = SetModel::bernoulli(n, rho)?;
    let estimate = estimate_moment_root(&Dft::<f64>::new(n)?, model, model, q, trials, seed)?;
    Ok(SmallMomentReport {
        n,
        q,
        rho,
        bound,
        ratio: if estimate.root > 0.0 { bound / estimate.root } else { f64::INFINITY },
        log_q: (q as f64).ln(),
        holds: estimate.upper_edge <= bound,
        estimate,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtrapolationReport {
    pub n: usize,
    pub q: usize,
    pub lambda: f64,
    pub delta: f64,
    pub rho: f64,
    /// Moment root at sampling rate `delta`.
    pub lhs: MomentEstimate,
    /// Moment root at sampling rate `rho = 1/n`.
    pub small: MomentEstimate,
    pub rhs: f64,
    /// `rhs - lhs.upper_edge`.
    pub margin: f64,
    pub holds: bool,
}

/// Checks the extrapolation inequality on every `(lambda, delta)` pair.
/// One sample at `rho = 1/n` and one per `delta` serve all `lambda`.
pub fn extrapolation_reports(
    n: usize,
    q: usize,
    lambdas: &[f64],
    deltas: &[f64],
    trials: usize,
    seed: u64,
) -> Result<Vec<ExtrapolationReport>> {
    crate::bounds::extrapolation_q_premise(n, q)?;
    let rho = 1.0 / n as f64;
    let mut points = vec![PlanPoint {
        label: "rho".into(),
        row_model: SetModel::bernoulli(n, rho)?,
        col_model: SetModel::bernoulli(n, rho)?,
    }];
    for &d in deltas {
        ensure_domain!(d >= rho && d <= 1.0, "delta {d} outside [1/n, 1]");
        points.push(PlanPoint {
            label: format!("{d}"),
            row_model: SetModel::bernoulli(n, d)?,
            col_model: SetModel::bernoulli(n, d)?,
        });
    }
    let plan = ExperimentPlan::new(MatrixSpec::Dft { n }, points, trials, seed);
    let samples = sample_norms(&Dft::<f64>::new(n)?, &plan)?;
    let small = moment_root_of(&samples[0].norms, q);
    let mut out = Vec::new();
    for (&delta, s) in deltas.iter().zip(&samples[1..]) {
        let lhs = moment_root_of(&s.norms, q);
        for &lambda in lambdas {
            let rhs = extrapolation_bound(small.root, rho, delta, lambda, q, n)?;
            out.push(ExtrapolationReport {
                n,
                q,
                lambda,
                delta,
                rho,
                lhs,
                small,
                rhs,
                margin: rhs - lhs.upper_edge,
                holds: lhs.upper_edge <= rhs,
            });
        }
    }
    Ok(out)
}

pub fn verify_extrapolation(
    n: usize,
    q: usize,
    lambda: f64,
    delta: f64,
    trials: usize,
    seed: u64,
) -> Result<ExtrapolationReport> {
    Ok(extrapolation_reports(n, q, &[lambda], &[delta], trials, seed)?.remove(0))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TailRow {
    pub u: f64,
    pub threshold: f64,
    pub cap: f64,
    pub hits: usize,
    pub frequency: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// The whole confidence interval lies above the cap.
    pub violation: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TailReport {
    pub n: usize,
    pub delta: f64,
    pub lambda: f64,
    pub q: usize,
    pub model: TailModel,
    pub trials: usize,
    pub q_premise_holds: bool,
    pub rows: Vec<TailRow>,
    pub pass: bool,
}

/// Empirical exceedance of the tail threshold against its probability cap,
/// one row per `u`, all rows sharing one sample of norms.
#[allow(clippy::too_many_arguments)]
pub fn verify_tail(
    n: usize,
    delta: f64,
    lambda: f64,
    q: usize,
    u_grid: &[f64],
    trials: usize,
    seed: u64,
    model: TailModel,
) -> Result<TailReport> {
    ensure_domain!(!u_grid.is_empty(), "empty u grid");
    let set_model = match model {
        TailModel::Bernoulli => SetModel::bernoulli(n, delta)?,
        TailModel::FixedCardinality => SetModel::fixed_from_delta(n, delta)?,
    };
    let plan = single_point_plan(n, set_model, set_model, trials, seed);
    let norms = sample_norms(&Dft::<f64>::new(n)?, &plan)?.remove(0).norms;
    let mut rows = Vec::new();
    let mut q_premise_holds = false;
    for &u in u_grid {
        let tb = tail_bound(&TailParams { delta, lambda, q, u, n }, model)?;
        q_premise_holds = tb.q_premise_holds;
        let hits = norms.iter().filter(|&&x| x >= tb.threshold).count();
        let (ci_low, ci_high) = clopper_pearson(hits as u64, trials as u64, TAIL_CONFIDENCE);
        rows.push(TailRow {
            u,
            threshold: tb.threshold,
            cap: tb.probability,
            hits,
            frequency: hits as f64 / trials as f64,
            ci_low,
            ci_high,
            violation: ci_low > tb.probability,
        });
    }
    let pass = rows.iter().all(|r| !r.violation);
    Ok(TailReport { n, delta, lambda, q, model, trials, q_premise_holds, rows, pass })
}

/// `2 sqrt(delta (1 - delta))`, the conjectured limit of the mean norm.
pub fn quarter_circle(delta: f64) -> f64 {
    2.0 * (delta * (1.0 - delta)).max(0.0).sqrt()
}

/// One square-sweep grid point, with unscaled and `delta^{-1/2}`-scaled
/// summaries computed from the same draws.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SquareRow {
    pub delta: f64,
    pub m: usize,
    /// `quarter_circle(m / n)`.
    pub curve: f64,
    pub unscaled: TrialSummary,
    pub scaled: TrialSummary,
}

/// Square submatrices `P_delta F P_delta'` of the DFT with `m = floor(delta n)`.
pub fn sweep_square_rows(n: usize, deltas: &[f64], trials: usize, seed: u64) -> Result<Vec<SquareRow>> {
    let mut points = Vec::new();
    for &d in deltas {
        let model = SetModel::fixed_from_delta(n, d)?;
        points.push(PlanPoint { label: format!("{d}"), row_model: model, col_model: model });
    }
    let mut plan = ExperimentPlan::new(MatrixSpec::Dft { n }, points, trials, seed);
    plan.scaling = Scaling::InverseSqrtDelta;
    let samples = sample_norms(&Dft::<f64>::new(n)?, &plan)?;
    Ok(deltas
        .iter()
        .zip(&samples)
        .map(|(&delta, s)| {
            let m = crate::random_sets::floor_fraction(delta, n);
            SquareRow {
                delta,
                m,
                curve: quarter_circle(m as f64 / n as f64),
                unscaled: summarize(s, &s.norms, Statistic::MeanNorm),
                scaled: summarize(s, &s.scaled(), Statistic::MeanNorm),
            }
        })
        .collect())
}

pub fn sweep_square(n: usize, deltas: &[f64], trials: usize, seed: u64, scaled: bool) -> Result<Vec<TrialSummary>> {
    Ok(sweep_square_rows(n, deltas, trials, seed)?
        .into_iter()
        .map(|r| if scaled { r.scaled } else { r.unscaled })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RectRow {
    pub delta_t: f64,
    pub delta_omega: f64,
    /// `quarter_circle((delta_t + delta_omega) / 2)` at the realized
    /// proportions, divided by `sqrt(max{delta_t, delta_omega})` when scaled.
    pub trend: f64,
    pub summary: TrialSummary,
    /// `summary.mean - trend`.
    pub deviation: f64,
}

/// Rectangular submatrices over the grid `delta_t x delta_omega`, row-major
/// in `delta_t`. Scaling is `max{delta_t, delta_omega}^{-1/2}`.
pub fn sweep_rect(
    n: usize,
    delta_t_grid: &[f64],
    delta_omega_grid: &[f64],
    trials: usize,
    seed: u64,
    scaled: bool,
) -> Result<Vec<RectRow>> {
    let mut points = Vec::new();
    for &dt in delta_t_grid {
        for &dw in delta_omega_grid {
            points.push(PlanPoint {
                label: format!("{dt}x{dw}"),
                row_model: SetModel::fixed_from_delta(n, dw)?,
                col_model: SetModel::fixed_from_delta(n, dt)?,
            });
        }
    }
    let mut plan = ExperimentPlan::new(MatrixSpec::Dft { n }, points, trials, seed);
    plan.scaling = if scaled { Scaling::InverseSqrtMax } else { Scaling::None };
    let summaries = run_experiment(&plan)?;
    Ok(summaries
        .into_iter()
        .zip(&plan.points)
        .map(|(summary, point)| {
            let (et, ew) = (point.col_model.delta(), point.row_model.delta());
            let mut trend = quarter_circle((et + ew) / 2.0);
            if scaled && et.max(ew) > 0.0 {
                trend /= et.max(ew).sqrt();
            }
            RectRow {
                delta_t: et,
                delta_omega: ew,
                trend,
                deviation: summary.mean - trend,
                summary,
            }
        })
        .collect())
}

/// Distinct cardinalities on a logarithmic grid from 1 to `n/2`.
pub fn log_cardinality_grid(n: usize, points: usize) -> Vec<usize> {
    let top = (n / 2).max(1);
    if points <= 1 {
        return vec![1];
    }
    let ratio = (top as f64).ln() / (points - 1) as f64;
    let mut ms: Vec<usize> = (0..points).map(|i| ((ratio * i as f64).exp().round() as usize).clamp(1, top)).collect();
    ms.dedup();
    ms
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ArgmaxResult {
    pub delta: f64,
    pub m: usize,
    pub rows: Vec<SquareRow>,
}

/// The sampling rate, among `m / n` for `m` in `ms`, maximizing the scaled
/// mean norm; ties go to the smaller rate.
pub fn argmax_over(n: usize, ms: &[usize], trials: usize, seed: u64) -> Result<ArgmaxResult> {
    ensure_domain!(!ms.is_empty(), "empty cardinality grid");
    let deltas: Vec<f64> = ms.iter().map(|&m| m as f64 / n as f64).collect();
    let rows = sweep_square_rows(n, &deltas, trials, seed)?;
    let best = rows
        .iter()
        .enumerate()
        .fold(0, |b, (i, r)| if r.scaled.mean > rows[b].scaled.mean { i } else { b });
    Ok(ArgmaxResult { delta: rows[best].m as f64 / n as f64, m: rows[best].m, rows })
}

/// Scans a logarithmic grid of `points` rates from `1/n` to `1/2`.
pub fn argmax_scaled_delta(n: usize, trials: usize, seed: u64, points: usize) -> Result<ArgmaxResult> {
    argmax_over(n, &log_cardinality_grid(n, points), trials, seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moment_root_constant_samples() {
        let e = moment_root_of(&[0.3; 50], 5);
        assert!((e.root - 0.3).abs() < 1e-15);
        assert!(e.std_error < 1e-15);
    }

    #[test]
    fn moment_root_approaches_max() {
        let mut xs = vec![0.0; 99];
        xs.push(1.0);
        let low = moment_root_of(&xs, 1).root;
        let high = moment_root_of(&xs, 500).root;
        assert!(low < high && high > 0.99 && high <= 1.0);
    }

    #[test]
    fn moment_root_zero_samples() {
        assert_eq!(moment_root_of(&[0.0; 4], 3).root, 0.0);
    }

    #[test]
    fn jackknife_matches_direct_formula() {
        let xs: Vec<f64> = (1..=40).map(|i| (i as f64 * 0.37).sin().abs()).collect();
        let q = 3;
        let e = moment_root_of(&xs, q);
        let n = xs.len() as f64;
        let loo: Vec<f64> = (0..xs.len())
            .map(|i| {
                let s: f64 = xs.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, x)| x.powi(6)).sum();
                (s / (n - 1.0)).powf(1.0 / 6.0)
            })
            .collect();
        let mean = loo.iter().sum::<f64>() / n;
        let se = ((n - 1.0) / n * loo.iter().map(|r| (r - mean).powi(2)).sum::<f64>()).sqrt();
        assert!((e.std_error - se).abs() < 1e-12 * se.max(1.0), "{} vs {se}", e.std_error);
    }

    #[test]
    fn single_entry_scaled_is_one() {
        let n = 64;
        let rows = sweep_square_rows(n, &[1.0 / n as f64], 5, 3).unwrap();
        for v in [rows[0].scaled.min, rows[0].scaled.max] {
            assert!((v - 1.0).abs() < 1e-12, "{v}");
        }
    }

    #[test]
    fn scaled_and_unscaled_share_draws() {
        let n = 64;
        let rows = sweep_square_rows(n, &[0.1, 0.25, 0.5], 20, 9).unwrap();
        for r in rows {
            let f = (n as f64 / r.m as f64).sqrt();
            assert!((r.scaled.mean - f * r.unscaled.mean).abs() < 1e-12 * r.scaled.mean);
            assert!((r.scaled.max - f * r.unscaled.max).abs() < 1e-12 * r.scaled.max);
        }
    }

    #[test]
    fn budget_guard() {
        let model = SetModel::fixed(64, 40).unwrap();
        let mut plan = single_point_plan(64, model, model, 2, 0);
        plan.dense_budget = 1000;
        assert!(matches!(run_experiment(&plan), Err(Error::Budget(_))));
        let b = SetModel::bernoulli(64, 0.9).unwrap();
        let mut plan = single_point_plan(64, b, b, 2, 0);
        plan.dense_budget = 1000;
        assert!(matches!(run_experiment(&plan), Err(Error::Budget(_))));
    }

    #[test]
    fn log_grid_is_distinct_and_bounded() {
        let g = log_cardinality_grid(1024, 30);
        assert_eq!(g[0], 1);
        assert_eq!(*g.last().unwrap(), 512);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(log_cardinality_grid(1024, 1), vec![1]);
    }

    #[test]
    fn argmax_single_point() {
        let r = argmax_over(32, &[4], 3, 0).unwrap();
        assert_eq!((r.m, r.delta), (4, 0.125));
    }

    #[test]
    fn rect_one_column_scaled_is_one() {
        let n = 64;
        let rows = sweep_rect(n, &[1.0 / n as f64], &[0.25], 5, 1, true).unwrap();
        assert!((rows[0].summary.mean - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hadamard_plan_runs() {
        let model = SetModel::fixed(16, 4).unwrap();
        let mut plan = single_point_plan(16, model, model, 10, 0);
        plan.matrix = MatrixSpec::Hadamard { n: 16 };
        let s = run_experiment(&plan).unwrap();
        assert!(s[0].max <= 1.0 + 1e-10);
    }

    #[test]
    fn statistics_populate_optional_fields() {
        let model = SetModel::fixed(16, 4).unwrap();
        let mut plan = single_point_plan(16, model, model, 10, 0);
        plan.statistic = Statistic::Moment { q: 2 };
        assert!(run_experiment(&plan).unwrap()[0].moment_root.is_some());
        plan.statistic = Statistic::Tail { u: 0.5 };
        let s = &run_experiment(&plan).unwrap()[0];
        assert!(s.tail_frequency.is_some() && s.moment_root.is_none());
    }
}
