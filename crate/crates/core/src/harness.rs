//! Accumulated errors, error ratios and convergence sweeps over `N = 2^k`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::ode::{solve_ivp, IvpProblem, SchemeConfig, SchemeId, Trajectory};

/// The `p` of the accumulated `ℓᵖ` error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Norm {
    L1,
    L2,
    Inf,
}

impl Norm {
    pub fn code(self) -> &'static str {
        match self {
            Norm::L1 => "1",
            Norm::L2 => "2",
            Norm::Inf => "inf",
        }
    }
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for Norm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Norm> {
        match s.trim().to_ascii_lowercase().as_str() {
            "1" => Ok(Norm::L1),
            "2" => Ok(Norm::L2),
            "inf" | "infinity" | "max" => Ok(Norm::Inf),
            _ => Err(Error::Config(format!("unknown norm `{s}`; valid: 1, 2, inf"))),
        }
    }
}

/// `ℰ = (h·Σₙ|u(tₙ) − uₙ|ᵖ)^{1/p}` over every node of `traj`, or `maxₙ|u(tₙ) − uₙ|` for `p = ∞`.
pub fn accumulated_error(traj: &Trajectory, exact: &dyn Fn(f64) -> f64, p: Norm) -> f64 {
    let errors = traj.values.iter().map(|&(t, u)| (exact(t) - u).abs());
    match p {
        Norm::Inf => errors.fold(0.0, f64::max),
        Norm::L1 => traj.h * errors.sum::<f64>(),
        Norm::L2 => (traj.h * errors.map(|e| e * e).sum::<f64>()).sqrt(),
    }
}

/// `ℛ = log₂(E_half / E)`, the observed order between `N/2` and `N`.
pub fn error_ratio(e_half: f64, e: f64) -> Result<f64> {
    if e_half > 0.0 && e > 0.0 && e_half.is_finite() && e.is_finite() {
        Ok((e_half / e).log2())
    } else {
        Err(Error::UndefinedRatio { e_half, e })
    }
}

/// One row of a convergence study.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub problem: String,
    pub scheme: SchemeId,
    pub p: Norm,
    /// `N = 2^k`; the step size is `h = 1/N`.
    pub n: u64,
    pub h: f64,
    pub e: f64,
    /// Ratio against the report at `N/2`; absent when that report is not in the sweep.
    pub r: Option<f64>,
}

fn validate_ks(ks: &[u32]) -> Result<()> {
    if ks.is_empty() {
        return Err(Error::Config("empty range of k".into()));
    }
    if ks.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config(format!("k values must be strictly ascending, got {ks:?}")));
    }
    if ks[ks.len() - 1] > 40 {
        return Err(Error::Config(format!("k = {} is too large", ks[ks.len() - 1])));
    }
    Ok(())
}

fn solve_one(problem: &IvpProblem, scheme: SchemeId, k: u32, p: Norm, base: &SchemeConfig) -> Result<f64> {
    let exact = problem.exact().ok_or(Error::MissingExact)?;
    let n = 1u64 << k;
    let config = SchemeConfig {
        scheme,
        h: 1.0 / n as f64,
        ..*base
    };
    let traj = solve_ivp(problem, &config).map_err(|e| e.context(format!("scheme {scheme}, N = {n}")))?;
    Ok(accumulated_error(&traj, exact, p))
}

fn chain(problem: &IvpProblem, scheme: SchemeId, ks: &[u32], p: Norm, errors: Vec<f64>) -> Vec<ErrorReport> {
    let mut reports: Vec<ErrorReport> = Vec::with_capacity(ks.len());
    for (i, (&k, e)) in ks.iter().zip(errors).enumerate() {
        let r = match i.checked_sub(1) {
            Some(j) if ks[j] + 1 == k => error_ratio(reports[j].e, e).ok(),
            _ => None,
        };
        let n = 1u64 << k;
        reports.push(ErrorReport {
            problem: problem.name().to_string(),
            scheme,
            p,
            n,
            h: 1.0 / n as f64,
            e,
            r,
        });
    }
    reports
}

/// Solves `problem` with `h = 1/2^k` for each `k` in `ks` (ascending) and
/// reports `ℰ` with ratios chained over consecutive `k`.
///
/// `base` supplies `η`, `M` and the `u₁` policy; its scheme and `h` are ignored.
pub fn convergence_sweep(
    problem: &IvpProblem,
    scheme: SchemeId,
    ks: &[u32],
    p: Norm,
    base: &SchemeConfig,
) -> Result<Vec<ErrorReport>> {
    validate_ks(ks)?;
    let errors = ks
        .iter()
        .map(|&k| solve_one(problem, scheme, k, p, base))
        .collect::<Result<Vec<_>>>()?;
    Ok(chain(problem, scheme, ks, p, errors))
}

/// [`convergence_sweep`] for several schemes, concatenated in the order given.
///
/// With the `parallel` feature the individual solves run on the rayon pool;
/// results are identical to the sequential order.
pub fn sweep_schemes(
    problem: &IvpProblem,
    schemes: &[SchemeId],
    ks: &[u32],
    p: Norm,
    base: &SchemeConfig,
) -> Result<Vec<ErrorReport>> {
    validate_ks(ks)?;
    let jobs: Vec<(SchemeId, u32)> = schemes
        .iter()
        .flat_map(|&s| ks.iter().map(move |&k| (s, k)))
        .collect();
    let run = |&(s, k): &(SchemeId, u32)| solve_one(problem, s, k, p, base);

    #[cfg(feature = "parallel")]
    let errors: Vec<Result<f64>> = {
        use rayon::prelude::*;
        jobs.par_iter().map(run).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let errors: Vec<Result<f64>> = jobs.iter().map(run).collect();

    let errors = errors.into_iter().collect::<Result<Vec<f64>>>()?;
    Ok(schemes
        .iter()
        .zip(errors.chunks(ks.len()))
        .flat_map(|(&s, es)| chain(problem, s, ks, p, es.to_vec()))
        .collect())
}

/// Least-squares slope of `log₂ E` against `log₂ h`, i.e. the fitted order.
pub fn fitted_order(reports: &[ErrorReport]) -> Option<f64> {
    let points: Vec<(f64, f64)> = reports
        .iter()
        .filter(|r| r.e > 0.0)
        .map(|r| (r.h.log2(), r.e.log2()))
        .collect();
    log_log_slope(&points)
}

/// Least-squares slope through `(x, y)` points; `None` for fewer than two distinct `x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Six significant digits in scientific notation, e.g. `8.10000e-2`.
pub fn sci(x: f64) -> String {
    format!("{x:.5e}")
}

pub const CSV_HEADER: &str = "problem,scheme,p,N,h,E,R";

/// Renders reports as CSV with header [`CSV_HEADER`]; `R` is empty when absent.
pub fn reports_to_csv(reports: &[ErrorReport]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in reports {
        let ratio = r.r.map(sci).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.problem,
            r.scheme,
            r.p,
            r.n,
            sci(r.h),
            sci(r.e),
            ratio
        ));
    }
    out
}

/// Renders reports as a markdown table with one row per `N` and an
/// `E`, `R` column pair per scheme. All reports must share problem and norm.
pub fn reports_to_markdown(reports: &[ErrorReport]) -> Result<String> {
    let first = reports
        .first()
        .ok_or_else(|| Error::Config("no reports to render".into()))?;
    if reports.iter().any(|r| r.problem != first.problem || r.p != first.p) {
        return Err(Error::Config("a table holds one problem and one norm".into()));
    }
    let mut schemes: Vec<SchemeId> = Vec::new();
    let mut ns: Vec<u64> = Vec::new();
    for r in reports {
        if !schemes.contains(&r.scheme) {
            schemes.push(r.scheme);
        }
        if !ns.contains(&r.n) {
            ns.push(r.n);
        }
    }
    ns.sort_unstable();

    let mut out = format!("problem: {}, p = {}\n\n| N |", first.problem, first.p);
    for s in &schemes {
        out.push_str(&format!(" {s} E | {s} R |"));
    }
    out.push_str("\n|---:|");
    out.push_str(&"---:|---:|".repeat(schemes.len()));
    out.push('\n');
    for &n in &ns {
        out.push_str(&format!("| {n} |"));
        for &s in &schemes {
            match reports.iter().find(|r| r.scheme == s && r.n == n) {
                Some(r) => {
                    let ratio = r.r.map(sci).unwrap_or_else(|| "-".into());
                    out.push_str(&format!(" {} | {} |", sci(r.e), ratio));
                }
                None => out.push_str(" - | - |"),
            }
        }
        out.push('\n');
    }
    Ok(out)
}

/// Parses a table written by [`reports_to_markdown`] back into reports.
pub fn parse_markdown(text: &str) -> Result<Vec<ErrorReport>> {
    let bad = |line: usize, message: String| Error::Parse {
        line,
        column: 1,
        message,
    };
    let mut lines = text.lines().enumerate();
    let (_, caption) = lines.next().ok_or_else(|| bad(1, "empty table".into()))?;
    let (problem, p) = caption
        .strip_prefix("problem: ")
        .and_then(|rest| rest.split_once(", p = "))
        .ok_or_else(|| bad(1, format!("expected `problem: <name>, p = <norm>`, got `{caption}`")))?;
    let p: Norm = p.parse()?;

    let mut rows = lines.filter(|(_, l)| l.starts_with('|'));
    let (header_no, header) = rows.next().ok_or_else(|| bad(2, "missing header row".into()))?;
    let cells = |l: &str| -> Vec<String> {
        l.trim().trim_matches('|').split('|').map(|c| c.trim().to_string()).collect()
    };
    let header = cells(header);
    let schemes = header[1..]
        .chunks(2)
        .map(|pair| {
            pair[0]
                .strip_suffix(" E")
                .ok_or_else(|| bad(header_no + 1, format!("unexpected column `{}`", pair[0])))?
                .parse::<SchemeId>()
        })
        .collect::<Result<Vec<_>>>()?;
    rows.next();

    let number = |line: usize, s: &str| -> Result<f64> {
        s.parse::<f64>()
            .map_err(|_| bad(line, format!("not a number: `{s}`")))
    };
    let mut by_scheme: Vec<Vec<ErrorReport>> = vec![Vec::new(); schemes.len()];
    for (no, row) in rows {
        let row = cells(row);
        if row.len() != 1 + 2 * schemes.len() {
            return Err(bad(no + 1, format!("expected {} cells", 1 + 2 * schemes.len())));
        }
        let n: u64 = row[0]
            .parse()
            .map_err(|_| bad(no + 1, format!("bad N `{}`", row[0])))?;
        for (i, &scheme) in schemes.iter().enumerate() {
            let (e, r) = (&row[1 + 2 * i], &row[2 + 2 * i]);
            if e == "-" {
                continue;
            }
            by_scheme[i].push(ErrorReport {
                problem: problem.to_string(),
                scheme,
                p,
                n,
                h: 1.0 / n as f64,
                e: number(no + 1, e)?,
                r: if r == "-" { None } else { Some(number(no + 1, r)?) },
            });
        }
    }
    Ok(by_scheme.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{circle_problem, dahlquist};

    fn traj(h: f64, values: Vec<(f64, f64)>) -> Trajectory {
        Trajectory {
            t0: 0.0,
            h,
            fp_iterations: vec![0; values.len() - 1],
            values,
            nonconverged_steps: vec![],
        }
    }

    #[test]
    fn error_of_exact_and_two_node_trajectories() {
        let exact = |t: f64| t * t;
        let tr = traj(0.5, vec![(0.0, 0.0), (0.5, 0.25), (1.0, 1.0)]);
        for p in [Norm::L1, Norm::L2, Norm::Inf] {
            assert_eq!(accumulated_error(&tr, &exact, p), 0.0);
        }
        let tr = traj(0.5, vec![(0.0, 0.0), (0.5, 0.25 + 0.3)]);
        assert!((accumulated_error(&tr, &exact, Norm::Inf) - 0.3).abs() < 1e-15);
        assert!((accumulated_error(&tr, &exact, Norm::L1) - 0.15).abs() < 1e-15);
        assert!((accumulated_error(&tr, &exact, Norm::L2) - (0.5f64 * 0.09).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn ratios() {
        assert_eq!(error_ratio(2.0, 1.0).unwrap(), 1.0);
        assert_eq!(error_ratio(4e-3, 1e-3).unwrap(), 2.0);
        assert!((error_ratio(2.0e-3, 5.0e-4).unwrap() - 2.0).abs() < 1e-12);
        assert!(matches!(error_ratio(0.0, 1.0), Err(Error::UndefinedRatio { .. })));
        assert!(error_ratio(1.0, -1.0).is_err());
    }

    #[test]
    fn circle_euler_n8() {
        let p = circle_problem(0.9).unwrap();
        let base = SchemeConfig::new(SchemeId::Ee, 1.0);
        let r = convergence_sweep(&p, SchemeId::Ee, &[3], Norm::Inf, &base).unwrap();
        assert_eq!(r.len(), 1);
        assert!(r[0].r.is_none());
        assert!((r[0].e - 8.1e-2).abs() < 0.005, "{}", r[0].e);
    }

    #[test]
    fn gaps_leave_ratio_absent() {
        let p = dahlquist(-3.0, 1.0, 0.0, 2.5).unwrap();
        let base = SchemeConfig::new(SchemeId::Ee, 1.0);
        let r = convergence_sweep(&p, SchemeId::Ee, &[4, 5, 7], Norm::Inf, &base).unwrap();
        assert!(r[0].r.is_none());
        assert!(r[1].r.is_some());
        assert!(r[2].r.is_none());
        assert!(convergence_sweep(&p, SchemeId::Ee, &[5, 4], Norm::Inf, &base).is_err());
        assert!(convergence_sweep(&p, SchemeId::Ee, &[], Norm::Inf, &base).is_err());
    }

    #[test]
    fn multi_scheme_sweep_matches_single() {
        let p = dahlquist(-3.0, 1.0, 0.0, 2.5).unwrap();
        let base = SchemeConfig::new(SchemeId::Ee, 1.0);
        let ks = [3, 4, 5, 6];
        let all = sweep_schemes(&p, &[SchemeId::Cn, SchemeId::Se5], &ks, Norm::L2, &base).unwrap();
        let cn = convergence_sweep(&p, SchemeId::Cn, &ks, Norm::L2, &base).unwrap();
        let se5 = convergence_sweep(&p, SchemeId::Se5, &ks, Norm::L2, &base).unwrap();
        assert_eq!(all, [cn, se5].concat());
    }

    #[test]
    fn missing_exact_is_reported() {
        let p = IvpProblem::new("bare", |_, u| Ok(u), 0.0, 1.0, 1.0).unwrap();
        let base = SchemeConfig::new(SchemeId::Ee, 1.0);
        let err = convergence_sweep(&p, SchemeId::Ee, &[3], Norm::Inf, &base).unwrap_err();
        assert_eq!(err, Error::MissingExact);
    }

    #[test]
    fn csv_and_markdown() {
        let p = dahlquist(-3.0, 1.0, 0.0, 2.5).unwrap();
        let base = SchemeConfig::new(SchemeId::Ee, 1.0);
        let reports = sweep_schemes(&p, &[SchemeId::Ee, SchemeId::Se5], &[3, 4], Norm::Inf, &base).unwrap();
        let csv = reports_to_csv(&reports);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert!(lines[1].starts_with("dahlquist,ee,inf,8,1.25000e-1,"), "{}", lines[1]);
        assert!(lines[1].ends_with(','));
        assert_eq!(lines.len(), 5);

        let md = reports_to_markdown(&reports).unwrap();
        assert!(md.starts_with("problem: dahlquist, p = inf\n\n| N | ee E | ee R | se5 E | se5 R |\n"));
        let back = parse_markdown(&md).unwrap();
        assert_eq!(back.len(), reports.len());
        for (a, b) in back.iter().zip(&reports) {
            assert_eq!((a.scheme, a.n, a.p), (b.scheme, b.n, b.p));
            assert_eq!(sci(a.e), sci(b.e));
            assert_eq!(a.r.map(sci), b.r.map(sci));
        }
    }

    #[test]
    fn slope_fit() {
        let pts = [(0.0, 1.0), (1.0, 3.0), (2.0, 5.0)];
        assert!((log_log_slope(&pts).unwrap() - 2.0).abs() < 1e-15);
        assert!(log_log_slope(&pts[..1]).is_none());
        assert!(log_log_slope(&[(1.0, 0.0), (1.0, 2.0)]).is_none());
    }

    #[test]
    fn norm_codes() {
        for n in [Norm::L1, Norm::L2, Norm::Inf] {
            assert_eq!(n.code().parse::<Norm>().unwrap(), n);
        }
        assert!("3".parse::<Norm>().is_err());
    }
}
