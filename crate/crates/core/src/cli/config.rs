use std::path::Path;

use super::args::Flags;
use crate::error::{Error, Result};

/// Reads a TOML file whose keys are flag names without the leading dashes.
pub fn load(path: &Path) -> Result<Flags> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("config {}: {e}", path.display())))?;
    parse(&text)
}

pub fn parse(text: &str) -> Result<Flags> {
    toml::from_str(text).map_err(|e| Error::Parse(format!("config: {}", e.message())))
}

/// `flags` over `file`, field by field.
pub fn merge(flags: Flags, file: Flags) -> Flags {
    Flags {
        n: flags.n.or(file.n),
        rows: flags.rows.or(file.rows),
        cols: flags.cols.or(file.cols),
        t_size: flags.t_size.or(file.t_size),
        omega_size: flags.omega_size.or(file.omega_size),
        delta: flags.delta.or(file.delta),
        delta_grid: flags.delta_grid.or(file.delta_grid),
        trials: flags.trials.or(file.trials),
        seed: flags.seed.or(file.seed),
        q: flags.q.or(file.q),
        lambda: flags.lambda.or(file.lambda),
        u: flags.u.or(file.u),
        s: flags.s.or(file.s),
        spread: flags.spread.or(file.spread),
        scaled: flags.scaled || file.scaled,
        format: flags.format.or(file.format),
        out: flags.out.or(file.out),
        svg: flags.svg.or(file.svg),
        config: flags.config,
    }
}

/// Parses `lo:hi:steps` into `lo + k (hi - lo) / (steps - 1)`, `k < steps`,
/// each rounded to 12 decimals.
pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    let bad = || Error::Parse(format!("delta grid {text:?} is not lo:hi:steps"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let steps: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if steps == 0 || !lo.is_finite() || !hi.is_finite() || hi < lo {
        return Err(bad());
    }
    if steps == 1 {
        return Ok(vec![lo]);
    }
    Ok((0..steps)
        .map(|k| {
            let x = lo + k as f64 * (hi - lo) / (steps - 1) as f64;
            (x * 1e12).round() / 1e12
        })
        .collect())
}
