//! The demo operations as plain functions so they can be tested off the browser.

use std::fmt::Write as _;

use specular::expr::Expression;
use specular::harness::{reports_to_markdown, sweep_schemes, Norm};
use specular::svg::{sweep_plot, trajectory_plot};
use specular::{load_problem, solve_ivp, specular_derivative, DiffSchedule, SchemeConfig, SchemeId};

/// Largest sweep exponent offered in the page; 2^14 steps per scheme stays interactive.
pub const MAX_K: u32 = 14;

fn msg(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// One-sided derivatives and the specular derivative of `expr` (in `x`) at `x`.
pub fn specular_report(expr: &str, x: f64) -> Result<String, String> {
    let f = Expression::compile(expr, &["x"]).map_err(msg)?;
    let r = specular_derivative(|x| f.eval(&[x]), x, &DiffSchedule::default()).map_err(msg)?;
    let mut out = String::new();
    let _ = writeln!(out, "right derivative: {}", r.dplus);
    let _ = writeln!(out, "left derivative:  {}", r.dminus);
    match r.value {
        Some(v) => {
            let _ = writeln!(out, "specular:         {v}");
        }
        None => out.push_str("specular:         does not exist (both one-sided derivatives are the same infinity)\n"),
    }
    Ok(out)
}

/// Trajectory of one scheme on a TOML-described problem, as SVG.
pub fn solve_svg(config: &str, scheme: &str, h: f64) -> Result<String, String> {
    let problem = load_problem(config).map_err(msg)?;
    let scheme: SchemeId = scheme.parse().map_err(msg)?;
    let cfg = SchemeConfig::new(scheme, h);
    cfg.validate().map_err(msg)?;
    let traj = solve_ivp(&problem, &cfg).map_err(msg)?;
    let exact = problem.exact().map(|f| f as &dyn Fn(f64) -> f64);
    let title = format!("{} with {scheme}, h = {h}", problem.name());
    Ok(trajectory_plot(&title, scheme.code(), &traj, exact).to_svg())
}

/// Error sweep over N = 2^k with the sup norm: an SVG plot and a markdown table.
pub fn sweep(config: &str, schemes: &str, k_min: u32, k_max: u32) -> Result<(String, String), String> {
    if k_min > k_max {
        return Err(format!("k min ({k_min}) exceeds k max ({k_max})"));
    }
    if k_max > MAX_K {
        return Err(format!("k max is limited to {MAX_K} in the browser"));
    }
    let problem = load_problem(config).map_err(msg)?;
    let ids = schemes
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<SchemeId>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(msg)?;
    if ids.is_empty() {
        return Err("no schemes given".into());
    }
    let ks: Vec<u32> = (k_min..=k_max).collect();
    let base = SchemeConfig::new(ids[0], 1.0);
    let reports = sweep_schemes(&problem, &ids, &ks, Norm::Inf, &base).map_err(msg)?;
    let svg = sweep_plot(&format!("{}: sup-norm error", problem.name()), &reports).to_svg();
    let table = reports_to_markdown(&reports).map_err(msg)?;
    Ok((svg, table))
}
