//! The `dftsub` command line.
//!
//! Exit codes: 0 success or pass, 1 verification failure, 2 usage error or
//! enumeration guard, 3 resource budget.

pub mod args;
pub mod config;
pub mod output;
pub mod plot;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;
use serde_json::{json, Value};

use crate::bounds::{
    both_rand_recipe, candes_romberg, deterministic_reports, random_subdict, rip_partition_bound, BoundReport,
    TailModel,
};
use crate::error::{Error, Result};
use crate::linalg::{condition_number, frobenius_norm, spectral_norm, DEFAULT_TOL};
use crate::matrix::{gram_matrix, spread, submatrix, Dft, IndexSet};
use crate::montecarlo::{
    argmax_over, extrapolation_reports, log_cardinality_grid, quarter_circle, sweep_rect, sweep_square_rows,
    verify_small_moment, verify_tail, Scaling, TrialSummary, DEFAULT_TRIALS,
};
use crate::verify::{
    donoho_stark_exhaustive, rand_coords_check, square_case_check, tao_exhaustive, tao_sampled, unit_grid,
};
use args::{Cli, Command, ExperimentKind, Flags, Format, VerifyTarget};
use output::{float, Table};
use plot::Series;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

pub const DEFAULT_GRID: &str = "0.05:0.45:9";
pub const ARGMAX_POINTS: usize = 24;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Budget(_) => EXIT_BUDGET,
        Error::Domain(_) | Error::Guard(_) | Error::Parse(_) | Error::Io(_) => EXIT_USAGE,
    }
}

/// The result of one command before rendering.
pub struct Outcome {
    pub table: Table,
    /// `Some` for verification targets.
    pub pass: Option<bool>,
    pub svg: Option<String>,
    pub default_format: Format,
}

/// Parses `args` (program name first), runs the command and writes its
/// output. Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = stderr.write_all(text.as_bytes());
                EXIT_USAGE
            } else {
                let _ = stdout.write_all(text.as_bytes());
                EXIT_OK
            };
        }
    };
    match execute(cli, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "dftsub: {e}");
            exit_code(&e)
        }
    }
}

fn execute(cli: Cli, stdout: &mut dyn Write) -> Result<i32> {
    let (command, flags) = match cli.command {
        Command::Norm(f) => (Cmd::Norm, f),
        Command::Bounds(f) => (Cmd::Bounds, f),
        Command::Experiment { kind, flags } => (Cmd::Experiment(kind), flags),
        Command::Verify { target, flags } => (Cmd::Verify(target), flags),
    };
    let flags = match &flags.config {
        Some(path) => config::merge(flags.clone(), config::load(path)?),
        None => flags,
    };
    if flags.svg.is_some() && !matches!(command, Cmd::Experiment(_)) {
        return Err(Error::Parse("--svg is only valid for experiment sweeps".into()));
    }
    let outcome = match command {
        Cmd::Norm => cmd_norm(&flags)?,
        Cmd::Bounds => cmd_bounds(&flags)?,
        Cmd::Experiment(kind) => cmd_experiment(kind, &flags)?,
        Cmd::Verify(target) => cmd_verify(target, &flags)?,
    };
    let text = outcome.table.render(flags.format.unwrap_or(outcome.default_format));
    match &flags.out {
        Some(path) => std::fs::write(path, &text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    if let (Some(path), Some(svg)) = (&flags.svg, &outcome.svg) {
        std::fs::write(path, svg)?;
    }
    Ok(verdict_code(outcome.pass))
}

pub fn verdict_code(pass: Option<bool>) -> i32 {
    match pass {
        Some(false) => EXIT_FAIL,
        _ => EXIT_OK,
    }
}

#[derive(Clone, Copy)]
enum Cmd {
    Norm,
    Bounds,
    Experiment(ExperimentKind),
    Verify(VerifyTarget),
}

fn required<T: Clone>(value: &Option<T>, flag: &str) -> Result<T> {
    value.clone().ok_or_else(|| Error::Parse(format!("missing required flag --{flag}")))
}

fn table_outcome(table: Table) -> Outcome {
    Outcome { table, pass: None, svg: None, default_format: Format::Csv }
}

/// `T` is a nonempty run of cyclically adjacent indices.
fn is_block(t: &IndexSet) -> bool {
    let n = t.ambient();
    !t.is_empty() && (t.len() == n || t.iter().filter(|&j| !t.contains(j % n + 1)).count() == 1)
}

fn report_cells(r: Option<&BoundReport>) -> [Value; 2] {
    match r {
        Some(r) => [Value::Bool(r.premises_hold), float(r.bound_value)],
        None => [Value::Null, Value::Null],
    }
}

fn cmd_norm(flags: &Flags) -> Result<Outcome> {
    let n = required(&flags.n, "n")?;
    let omega = IndexSet::parse(n, &required(&flags.rows, "rows")?)?;
    let t = IndexSet::parse(n, &required(&flags.cols, "cols")?)?;
    let f = Dft::<f64>::new(n)?;
    let m = submatrix(&f, &omega, &t)?;
    let norm = spectral_norm(&m, DEFAULT_TOL)?;
    let gram = gram_matrix(&f, &omega, &t)?.extreme_eigenvalues();
    let kappa = condition_number(norm.value.min(1.0))?;
    let reports = deterministic_reports(t.len(), omega.len(), n, spread(&omega).ok(), is_block(&t))?;
    let find = |name: &str| reports.iter().find(|r| r.name == name);

    let mut table = Table::new(&[
        "n",
        "rows",
        "cols",
        "omega_size",
        "t_size",
        "norm",
        "method",
        "iterations",
        "residual",
        "gram_min",
        "gram_max",
        "kappa",
        "frobenius",
        "donoho_stark_applies",
        "donoho_stark_bound",
        "additive_applies",
        "additive_bound",
        "tao_applies",
        "tao_bound",
        "large_sieve_applies",
        "large_sieve_bound",
    ]);
    table.meta("command", "norm").meta("n", n);
    for r in &reports {
        table.meta(&format!("{}_detail", r.name), r.premise_detail.clone());
    }
    let text = |s: &IndexSet| s.iter().map(|j| j.to_string()).collect::<Vec<_>>().join(",");
    let mut row = vec![
        json!(n),
        json!(text(&omega)),
        json!(text(&t)),
        json!(omega.len()),
        json!(t.len()),
        float(norm.value),
        serde_json::to_value(norm.method).expect("unit enum"),
        json!(norm.iterations),
        float(norm.residual),
        output::opt_float(gram.map(|g| g.0)),
        output::opt_float(gram.map(|g| g.1)),
        float(kappa),
        float(frobenius_norm(&m)),
    ];
    for name in ["donoho_stark", "additive_uncertainty", "tao_prime", "large_sieve"] {
        row.extend(report_cells(find(name)));
    }
    table.push(row);
    Ok(table_outcome(table))
}

fn cmd_bounds(flags: &Flags) -> Result<Outcome> {
    let n = required(&flags.n, "n")?;
    let t = required(&flags.t_size, "t-size")?;
    let w = required(&flags.omega_size, "omega-size")?;
    let s = flags.s.unwrap_or(1.0);
    if n == 0 {
        return Err(Error::Domain("n must be positive".into()));
    }
    let mut reports = deterministic_reports(t, w, n, flags.spread, true)?;
    reports.push(candes_romberg(t, w, n, s, 1.0)?);
    reports.push(random_subdict(t, w, n, s, 1.0));
    reports.push(rip_partition_bound(t, w, n, s, 1.0));
    let mut table = Table::from_records(&reports)?;
    table
        .meta("command", "bounds")
        .meta("n", n)
        .meta("t_size", t)
        .meta("omega_size", w)
        .meta("s", s)
        .meta("note", "unspecified constants are set to 1 and listed under conjectural; the large sieve row takes T to be a block");
    Ok(table_outcome(table))
}

fn grid(flags: &Flags) -> Result<Vec<f64>> {
    config::parse_grid(flags.delta_grid.as_deref().unwrap_or(DEFAULT_GRID))
}

fn summary_cells(s: &TrialSummary) -> [Value; 4] {
    [float(s.mean), float(s.std_dev), float(s.min), float(s.max)]
}

fn cmd_experiment(kind: ExperimentKind, flags: &Flags) -> Result<Outcome> {
    let default_n = match kind {
        ExperimentKind::Fig1 | ExperimentKind::Fig2 | ExperimentKind::Argmax => 1024,
        ExperimentKind::Fig3 | ExperimentKind::Fig4 => 128,
        ExperimentKind::Quartercircle => 512,
    };
    let n = flags.n.unwrap_or(default_n);
    let trials = flags.trials.unwrap_or(DEFAULT_TRIALS);
    let seed = flags.seed.unwrap_or(0);
    let scaled = flags.scaled || matches!(kind, ExperimentKind::Fig2 | ExperimentKind::Fig4);
    let name = match kind {
        ExperimentKind::Fig1 => "fig1",
        ExperimentKind::Fig2 => "fig2",
        ExperimentKind::Fig3 => "fig3",
        ExperimentKind::Fig4 => "fig4",
        ExperimentKind::Argmax => "argmax",
        ExperimentKind::Quartercircle => "quartercircle",
    };
    let (mut table, svg) = match kind {
        ExperimentKind::Fig1 | ExperimentKind::Fig2 => square_experiment(n, &grid(flags)?, trials, seed, scaled)?,
        ExperimentKind::Fig3 | ExperimentKind::Fig4 => rect_experiment(n, &grid(flags)?, trials, seed, scaled)?,
        ExperimentKind::Argmax => argmax_experiment(n, trials, seed)?,
        ExperimentKind::Quartercircle => quartercircle_experiment(n, &grid(flags)?, trials, seed)?,
    };
    let mut meta = table.metadata.clone();
    table.metadata.clear();
    table.meta("command", format!("experiment {name}")).meta("n", n).meta("trials", trials).meta("seed", seed);
    table.metadata.append(&mut meta);
    Ok(Outcome { table, pass: None, svg: Some(svg), default_format: Format::Csv })
}

const SQUARE_HEADER: [&str; 8] = ["delta", "mean_norm", "std_norm", "min_norm", "max_norm", "trials", "n", "scaling"];

fn square_experiment(n: usize, deltas: &[f64], trials: usize, seed: u64, scaled: bool) -> Result<(Table, String)> {
    let rows = sweep_square_rows(n, deltas, trials, seed)?;
    let scaling = if scaled { Scaling::InverseSqrtDelta } else { Scaling::None };
    let mut table = Table::new(&SQUARE_HEADER);
    table
        .meta("scaling", scaling.as_str())
        .meta("set_model", "fixed cardinality, m = floor(delta n) for rows and columns");
    let mut means = Vec::new();
    let mut curve = Vec::new();
    for r in &rows {
        let s = if scaled { &r.scaled } else { &r.unscaled };
        let mut row = vec![float(r.delta)];
        row.extend(summary_cells(s));
        row.extend([json!(s.trials), json!(n), json!(scaling.as_str())]);
        table.push(row);
        means.push((r.delta, s.mean));
        let c = quarter_circle(r.delta);
        curve.push((r.delta, if scaled { c / r.delta.sqrt() } else { c }));
    }
    let (title, y) = if scaled {
        ("Scaled mean norm of square DFT submatrices", "delta^(-1/2) E||P F P'||")
    } else {
        ("Mean norm of square DFT submatrices", "E||P F P'||")
    };
    let reference = if scaled { "2 sqrt(1 - delta)" } else { "2 sqrt(delta (1 - delta))" };
    let svg = plot::render(
        &format!("{title}, n = {n}"),
        "delta",
        y,
        &[Series::data("mean", means), Series::reference(reference, curve)],
    );
    Ok((table, svg))
}

fn rect_experiment(n: usize, grid: &[f64], trials: usize, seed: u64, scaled: bool) -> Result<(Table, String)> {
    let rows = sweep_rect(n, grid, grid, trials, seed, scaled)?;
    let scaling = if scaled { Scaling::InverseSqrtMax } else { Scaling::None };
    let mut table = Table::new(&[
        "delta_t",
        "delta_omega",
        "t_size",
        "omega_size",
        "mean_norm",
        "std_norm",
        "min_norm",
        "max_norm",
        "trials",
        "n",
        "scaling",
        "trend",
        "deviation",
    ]);
    table.meta("scaling", scaling.as_str()).meta(
        "interpretation",
        "trend = 2 sqrt(d (1 - d)) with d = (|T|/n + |Omega|/n) / 2; scaled trend divides by sqrt(max(|T|, |Omega|)/n)",
    );
    let worst = rows.iter().map(|r| r.deviation.abs()).fold(0.0, f64::max);
    table.meta("max_abs_deviation", float(worst));
    let mut series: Vec<Series> = grid.iter().map(|dw| Series::data(format!("delta_omega = {dw}"), Vec::new())).collect();
    let pairs = grid.iter().flat_map(|&dt| grid.iter().enumerate().map(move |(j, &dw)| (dt, j, dw)));
    for ((dt, j, dw), r) in pairs.zip(&rows) {
        let mut row = vec![
            float(dt),
            float(dw),
            json!((r.delta_t * n as f64).round() as usize),
            json!((r.delta_omega * n as f64).round() as usize),
        ];
        row.extend(summary_cells(&r.summary));
        row.extend([json!(r.summary.trials), json!(n), json!(scaling.as_str()), float(r.trend), float(r.deviation)]);
        table.push(row);
        series[j].points.push((dt, r.summary.mean));
    }
    let title = if scaled { "Scaled mean norm, rectangular DFT submatrices" } else { "Mean norm, rectangular DFT submatrices" };
    let svg = plot::render(&format!("{title}, n = {n}"), "delta_t", "mean norm", &series);
    Ok((table, svg))
}

fn argmax_experiment(n: usize, trials: usize, seed: u64) -> Result<(Table, String)> {
    let result = argmax_over(n, &log_cardinality_grid(n, ARGMAX_POINTS), trials, seed)?;
    let mut table = Table::new(&["delta", "m", "mean_scaled", "std_scaled", "mean_norm", "trials", "n", "argmax"]);
    let reference = 2.0 / (n as f64).sqrt();
    table
        .meta("argmax_delta", float(result.delta))
        .meta("argmax_m", result.m)
        .meta("reference_delta", float(reference))
        .meta("ratio_to_reference", float(result.delta / reference));
    let mut points = Vec::new();
    for r in &result.rows {
        let delta = r.m as f64 / n as f64;
        table.push(vec![
            float(delta),
            json!(r.m),
            float(r.scaled.mean),
            float(r.scaled.std_dev),
            float(r.unscaled.mean),
            json!(r.scaled.trials),
            json!(n),
            json!(r.m == result.m),
        ]);
        points.push((delta.log10(), r.scaled.mean));
    }
    let svg = plot::render(
        &format!("Scaled mean norm against log10 delta, n = {n}"),
        "log10 delta",
        "delta^(-1/2) E||P F P'||",
        &[Series::data("scaled mean", points)],
    );
    Ok((table, svg))
}

fn quartercircle_experiment(n: usize, deltas: &[f64], trials: usize, seed: u64) -> Result<(Table, String)> {
    let rows = sweep_square_rows(n, deltas, trials, seed)?;
    let mut header = SQUARE_HEADER.to_vec();
    header.extend(["curve", "deviation"]);
    let mut table = Table::new(&header);
    table.meta("scaling", "none").meta("deviation", "curve - mean_norm, curve evaluated at m/n");
    let (mut means, mut curve) = (Vec::new(), Vec::new());
    let mut min_dev = f64::INFINITY;
    for r in &rows {
        let s = &r.unscaled;
        let mut row = vec![float(r.delta)];
        row.extend(summary_cells(s));
        row.extend([json!(s.trials), json!(n), json!("none"), float(r.curve), float(r.curve - s.mean)]);
        table.push(row);
        min_dev = min_dev.min(r.curve - s.mean);
        means.push((r.delta, s.mean));
        curve.push((r.delta, r.curve));
    }
    table.meta("min_deviation", float(min_dev));
    let svg = plot::render(
        &format!("Mean norm against the quarter circle, n = {n}"),
        "delta",
        "E||P F P'||",
        &[Series::data("mean", means), Series::reference("2 sqrt(delta (1 - delta))", curve)],
    );
    Ok((table, svg))
}

fn verdict(mut table: Table, target: &str, claim: &str, pass: bool) -> Outcome {
    let mut meta = std::mem::take(&mut table.metadata);
    table.meta("command", format!("verify {target}")).meta("claim", claim).meta("pass", pass);
    table.metadata.append(&mut meta);
    Outcome { table, pass: Some(pass), svg: None, default_format: Format::Json }
}

fn u_grid(flags: &Flags) -> Vec<f64> {
    flags.u.map(|u| vec![u]).unwrap_or_else(unit_grid)
}

fn cmd_verify(target: VerifyTarget, flags: &Flags) -> Result<Outcome> {
    let seed = flags.seed.unwrap_or(0);
    match target {
        VerifyTarget::DonohoStark => {
            let n = flags.n.unwrap_or(8);
            let c = donoho_stark_exhaustive(n)?;
            let mut table = Table::from_record(&c)?;
            table.meta("method", "exhaustive over all set pairs");
            Ok(verdict(
                table,
                "donoho-stark",
                "|T| |Omega| < n implies ||F_OT|| < 1, and ||F_OT||^2 <= |T| |Omega| / n for every pair",
                c.pass(),
            ))
        }
        VerifyTarget::Tao => {
            let n = flags.n.unwrap_or(7);
            let c = if n <= crate::random_sets::MAX_ENUM_TWO_SIDED {
                tao_exhaustive(n)?
            } else {
                tao_sampled(n, flags.trials.unwrap_or(10_000), seed)?
            };
            let mut table = Table::from_record(&c)?;
            table.meta("seed", seed);
            Ok(verdict(table, "tao", "n prime and |T| + |Omega| <= n implies ||F_OT|| < 1", c.pass()))
        }
        VerifyTarget::Coords => {
            let n = flags.n.unwrap_or(6);
            let delta = flags.delta.unwrap_or(0.5);
            let rows = rand_coords_check(&Dft::<f64>::new(n)?, delta, &u_grid(flags))?;
            let mut table = Table::new(&[
                "u",
                "fixed_one_sided",
                "bernoulli_one_sided",
                "ratio_one_sided",
                "fixed_two_sided",
                "bernoulli_two_sided",
                "ratio_two_sided",
                "ok",
            ]);
            let (mut r1, mut r2) = (0.0f64, 0.0f64);
            for r in &rows {
                r1 = r1.max(r.ratio_one_sided());
                r2 = r2.max(r.ratio_two_sided());
                table.push(vec![
                    float(r.u),
                    float(r.fixed_one_sided),
                    float(r.bernoulli_one_sided),
                    float(r.ratio_one_sided()),
                    float(r.fixed_two_sided),
                    float(r.bernoulli_two_sided),
                    float(r.ratio_two_sided()),
                    json!(r.ok),
                ]);
            }
            table
                .meta("n", n)
                .meta("delta", delta)
                .meta("max_ratio_one_sided", float(r1))
                .meta("max_ratio_two_sided", float(r2));
            Ok(verdict(
                table,
                "coords",
                "P(||P_delta A|| >= u) <= 2 P(||R_delta A|| >= u); two-sided with factor 4 (exact enumeration)",
                rows.iter().all(|r| r.ok),
            ))
        }
        VerifyTarget::SquareCase => {
            let n = flags.n.unwrap_or(8);
            let max_m = n / 2;
            let rows = square_case_check(&Dft::<f64>::new(n)?, max_m, &u_grid(flags))?;
            let mut header = vec!["u".to_string()];
            header.extend((0..=max_m).map(|m| format!("tail_m{m}")));
            header.push("monotone".into());
            let mut table = Table::new(&header.iter().map(String::as_str).collect::<Vec<_>>());
            for r in &rows {
                let mut row = vec![float(r.u)];
                row.extend(r.tails.iter().map(|&p| float(p)));
                row.push(json!(r.monotone));
                table.push(row);
            }
            table.meta("n", n).meta("max_m", max_m);
            Ok(verdict(
                table,
                "square-case",
                "P(||F_OT|| >= u) with |Omega| = |T| = m is nondecreasing in m (exact enumeration)",
                rows.iter().all(|r| r.monotone),
            ))
        }
        VerifyTarget::Moment => {
            let n = flags.n.unwrap_or(4096);
            let q = flags.q.unwrap_or(17);
            let trials = flags.trials.unwrap_or(100_000);
            let r = verify_small_moment(n, q, trials, seed)?;
            let e = &r.estimate;
            let mut table = Table::new(&[
                "n", "q", "trials", "rho", "root", "std_error", "upper_edge", "max_sample", "bound", "margin", "ratio",
                "log_q", "holds",
            ]);
            table.push(vec![
                json!(n),
                json!(q),
                json!(e.samples),
                float(r.rho),
                float(e.root),
                float(e.std_error),
                float(e.upper_edge),
                float(e.max_sample),
                float(r.bound),
                float(r.bound - e.upper_edge),
                float(r.ratio),
                float(r.log_q),
                json!(r.holds),
            ]);
            table.meta("seed", seed).meta("judged_on", "upper_edge = root + 3 jackknife standard errors");
            Ok(verdict(
                table,
                "moment",
                "(E ||R_rho F R_rho'||^(2q))^(1/(2q)) <= 2q / sqrt(n) at rho = 1/n",
                r.holds,
            ))
        }
        VerifyTarget::Extrap => {
            let n = flags.n.unwrap_or(128);
            let q = flags.q.unwrap_or(64);
            let trials = flags.trials.unwrap_or(10_000);
            let lambdas = flags.lambda.map(|l| vec![l]).unwrap_or_else(|| vec![0.25, 0.5]);
            let deltas = flags.delta.map(|d| vec![d]).unwrap_or_else(|| vec![0.25, 0.5]);
            let reports = extrapolation_reports(n, q, &lambdas, &deltas, trials, seed)?;
            let mut table = Table::new(&[
                "lambda",
                "delta",
                "lhs_root",
                "lhs_std_error",
                "lhs_upper_edge",
                "small_root",
                "rhs",
                "margin",
                "holds",
            ]);
            for r in &reports {
                table.push(vec![
                    float(r.lambda),
                    float(r.delta),
                    float(r.lhs.root),
                    float(r.lhs.std_error),
                    float(r.lhs.upper_edge),
                    float(r.small.root),
                    float(r.rhs),
                    float(r.margin),
                    json!(r.holds),
                ]);
            }
            table.meta("n", n).meta("q", q).meta("trials", trials).meta("seed", seed);
            Ok(verdict(
                table,
                "extrap",
                "moment root at rate delta <= extrapolation of the empirical moment root at rate 1/n",
                reports.iter().all(|r| r.holds),
            ))
        }
        VerifyTarget::Tail => {
            let n = flags.n.unwrap_or(128);
            let delta = flags.delta.unwrap_or(0.05);
            let recipe = both_rand_recipe(n, delta)?;
            let lambda = flags.lambda.unwrap_or(recipe.lambda);
            let q = flags.q.unwrap_or(recipe.q);
            let u = flags.u.unwrap_or(recipe.u);
            let trials = flags.trials.unwrap_or(10_000);
            let r = verify_tail(n, delta, lambda, q, &[u, 2.0 * u, 4.0 * u], trials, seed, TailModel::FixedCardinality)?;
            let mut table = Table::from_records(&r.rows)?;
            table
                .meta("n", n)
                .meta("delta", delta)
                .meta("lambda", float(lambda))
                .meta("q", q)
                .meta("model", "fixed_cardinality")
                .meta("trials", trials)
                .meta("seed", seed)
                .meta("q_premise_holds", r.q_premise_holds)
                .meta("violation_rule", "the 99.9% Clopper-Pearson interval lies entirely above the cap");
            Ok(verdict(table, "tail", "P(||P_delta F P_delta'|| >= threshold(u)) <= cap(u)", r.pass))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(verdict_code(None), EXIT_OK);
        assert_eq!(verdict_code(Some(true)), EXIT_OK);
        assert_eq!(verdict_code(Some(false)), EXIT_FAIL);
        assert_eq!(exit_code(&Error::Budget(String::new())), EXIT_BUDGET);
        assert_eq!(exit_code(&Error::Guard(String::new())), EXIT_USAGE);
        assert_eq!(exit_code(&Error::Parse(String::new())), EXIT_USAGE);
    }

    #[test]
    fn blocks_are_cyclic_runs() {
        let set = |v: Vec<usize>| IndexSet::new(8, v).unwrap();
        assert!(is_block(&set(vec![3, 4, 5])));
        assert!(is_block(&set(vec![1, 7, 8])));
        assert!(is_block(&set((1..=8).collect())));
        assert!(!is_block(&set(vec![1, 3])));
        assert!(!is_block(&set(vec![])));
    }

    #[test]
    fn run_reports_parse_errors_on_stderr() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(["dftsub", "norm", "--n", "8", "--rows", "0", "--cols", "1"], &mut out, &mut err);
        assert_eq!(code, EXIT_USAGE);
        assert!(out.is_empty() && !err.is_empty());
    }
}
