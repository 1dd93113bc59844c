use std::fmt::Write as _;

use specular::expr::Expression;
use specular::harness::{reports_to_csv, reports_to_markdown, sci, sweep_schemes, ErrorReport, Norm};
use specular::problems::{builtin, circle_problem, dahlquist, load_problem, nonsmooth_linear, BuiltinParams};
use specular::probes::{
    lipschitz_from_bounded_sd, named_function, quasi_fermat_probe, quasi_mvt_bracket, quasi_rolle_bracket,
    Bracket,
};
use specular::svg::{sweep_plot, trajectory_plot};
use specular::{solve_ivp, DiffSchedule, Error, IvpProblem, SchemeConfig, SchemeId, U1Policy};

use crate::cli::{Format, Preset, ProbeArgs, ProbeKind, ProblemArgs, SolveArgs, SolverArgs, SweepArgs, TableArgs};

/// A failure with the process exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Failure {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = if e.step_index().is_some() {
            3
        } else {
            match e.root() {
                Error::BracketNotFound { .. } => 4,
                Error::Config(_)
                | Error::Parse { .. }
                | Error::UnknownBuiltin(_)
                | Error::MissingParameter(_)
                | Error::MissingExact
                | Error::Domain(_) => 2,
                _ => 3,
            }
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

pub type Outcome = Result<Output, Failure>;

/// Text to write plus warnings for stderr.
#[derive(Debug, Default)]
pub struct Output {
    pub text: String,
    pub warnings: Vec<String>,
}

fn load(args: &ProblemArgs) -> Result<IvpProblem, Failure> {
    let params = BuiltinParams {
        lambda: args.lambda,
        u0: args.u0,
        t0: args.t0,
        t_end: args.t_end,
        c: args.c,
    };
    match (&args.builtin, &args.config) {
        (Some(name), None) => Ok(builtin(name, &params)?),
        (None, Some(path)) => {
            if params != BuiltinParams::default() {
                return Err(Failure::usage("problem parameters go in the config file when --config is used"));
            }
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
            load_problem(&text).map_err(|e| {
                let mut f = Failure::from(e);
                f.message = format!("{}: {}", path.display(), f.message);
                f
            })
        }
        _ => Err(Failure::usage("give exactly one of --builtin or --config")),
    }
}

fn solver_config(scheme: SchemeId, h: f64, args: &SolverArgs) -> Result<SchemeConfig, Failure> {
    let mut config = SchemeConfig::new(scheme, h)
        .with_eta(args.eta)
        .with_max_iters(args.max_iters);
    if let Some(u1) = &args.u1 {
        config = config.with_u1_policy(u1.parse::<U1Policy>()?);
    }
    config.validate()?;
    Ok(config)
}

pub fn solve(args: &SolveArgs) -> Outcome {
    let problem = load(&args.problem)?;
    let scheme: SchemeId = args.scheme.parse()?;
    let config = solver_config(scheme, args.h, &args.solver)?;
    if args.format == Format::Markdown {
        return Err(Failure::usage("solve writes csv or svg"));
    }
    let traj = solve_ivp(&problem, &config)?;

    let mut warnings = Vec::new();
    if !traj.nonconverged_steps.is_empty() {
        warnings.push(format!(
            "fixed-point iteration reached the cap of {} at {} step(s), first at step {}",
            config.max_iters,
            traj.nonconverged_steps.len(),
            traj.nonconverged_steps[0]
        ));
    }

    let text = match args.format {
        Format::Svg => {
            let title = format!("{} with {}, h = {}", problem.name(), scheme, args.h);
            let exact = problem.exact().map(|f| f as &dyn Fn(f64) -> f64);
            trajectory_plot(&title, scheme.code(), &traj, exact).to_svg()
        }
        _ => {
            let mut out = String::from("t,u,exact,error,fp_iters\n");
            for (n, &(t, u)) in traj.values.iter().enumerate() {
                let iters = n.checked_sub(1).map_or(0, |m| traj.fp_iterations[m]);
                let (exact, error) = match problem.exact_at(t) {
                    Some(e) => (sci(e), sci((u - e).abs())),
                    None => (String::new(), String::new()),
                };
                let _ = writeln!(out, "{},{},{exact},{error},{iters}", sci(t), sci(u));
            }
            out
        }
    };
    Ok(Output { text, warnings })
}

fn k_range(k_min: u32, k_max: u32) -> Result<Vec<u32>, Failure> {
    if k_min > k_max {
        return Err(Failure::usage(format!("--k-min ({k_min}) exceeds --k-max ({k_max})")));
    }
    if k_max > 24 {
        return Err(Failure::usage(format!("--k-max {k_max} is too large (at most 24)")));
    }
    Ok((k_min..=k_max).collect())
}

fn render(title: &str, reports: &[ErrorReport], format: Format) -> Result<String, Failure> {
    Ok(match format {
        Format::Csv => reports_to_csv(reports),
        Format::Markdown => reports_to_markdown(reports)?,
        Format::Svg => sweep_plot(title, reports).to_svg(),
    })
}

fn parse_schemes(codes: &[String]) -> Result<Vec<SchemeId>, Failure> {
    let schemes = codes
        .iter()
        .map(|c| c.parse::<SchemeId>())
        .collect::<Result<Vec<_>, _>>()?;
    if schemes.is_empty() {
        return Err(Failure::usage("no schemes given"));
    }
    Ok(schemes)
}

pub fn sweep(args: &SweepArgs) -> Outcome {
    let problem = load(&args.problem)?;
    let schemes = parse_schemes(&args.schemes)?;
    let ks = k_range(args.k_min, args.k_max)?;
    let p: Norm = args.p.parse()?;
    let base = solver_config(schemes[0], 1.0, &args.solver)?;
    if !problem.has_exact() {
        return Err(Failure::usage("a sweep needs a problem with an exact solution"));
    }
    let reports = sweep_schemes(&problem, &schemes, &ks, p, &base)?;
    let title = format!("{}: l{} error", problem.name(), p);
    Ok(Output {
        text: render(&title, &reports, args.format)?,
        warnings: Vec::new(),
    })
}

pub fn table(args: &TableArgs) -> Outcome {
    let problem = match args.preset {
        Preset::Circle => circle_problem(0.9)?,
        Preset::Dahlquist => dahlquist(-3.0, 1.0, 0.0, 2.5)?,
        Preset::Nonsmooth => nonsmooth_linear(0.3, -0.2, 1.5)?,
    };
    let schemes = [SchemeId::Ee, SchemeId::Ie, SchemeId::Cn, SchemeId::Se5, SchemeId::Se6];
    let ks = k_range(args.k_min, args.k_max)?;
    let p: Norm = args.p.parse()?;
    let base = solver_config(SchemeId::Ee, 1.0, &args.solver)?;
    let reports = sweep_schemes(&problem, &schemes, &ks, p, &base)?;
    let title = format!("{}: l{} error", problem.name(), p);
    Ok(Output {
        text: render(&title, &reports, args.format)?,
        warnings: Vec::new(),
    })
}

type Target = Box<dyn Fn(f64) -> f64 + Send + Sync>;

fn target(args: &ProbeArgs) -> Result<Target, Failure> {
    match (&args.expr, &args.builtin) {
        (Some(text), None) => {
            let e = Expression::compile(text, &["x"])?;
            Ok(Box::new(move |x| e.eval(&[x])))
        }
        (None, Some(name)) => Ok(named_function(name, args.eps)?),
        _ => Err(Failure::usage("give exactly one of --expr or --builtin")),
    }
}

fn need(value: Option<f64>, flag: &str) -> Result<f64, Failure> {
    value.ok_or_else(|| Failure::usage(format!("this probe needs {flag}")))
}

fn bracket_lines(out: &mut String, b: &Bracket) {
    let _ = writeln!(out, "target={}", sci(b.target));
    let _ = writeln!(out, "c1={}", sci(b.c1));
    let _ = writeln!(out, "lower_value={}", sci(b.lower_value));
    let _ = writeln!(out, "c2={}", sci(b.c2));
    let _ = writeln!(out, "upper_value={}", sci(b.upper_value));
}

pub fn probe(args: &ProbeArgs) -> Outcome {
    let f = target(args)?;
    let sched = DiffSchedule::default();
    let mut out = String::new();
    match args.kind {
        ProbeKind::Fermat => {
            let x = need(args.x, "--x")?;
            let r = quasi_fermat_probe(&*f, x, &sched, args.tol)?;
            let _ = writeln!(out, "probe=fermat\nx={}\nvalue={}\nbound=1\npass={}", sci(x), sci(r.value), r.pass);
        }
        ProbeKind::Mvt | ProbeKind::Rolle => {
            let (a, b) = (need(args.a, "--a")?, need(args.b, "--b")?);
            let (name, bracket) = if args.kind == ProbeKind::Mvt {
                ("mvt", quasi_mvt_bracket(&*f, a, b, args.grid_n, &sched, args.tol))
            } else {
                ("rolle", quasi_rolle_bracket(&*f, a, b, args.grid_n, &sched, args.tol))
            };
            let bracket = bracket?;
            let _ = writeln!(out, "probe={name}\na={}\nb={}\ngrid_n={}", sci(a), sci(b), args.grid_n);
            bracket_lines(&mut out, &bracket);
        }
        ProbeKind::Lipschitz => {
            let (a, b) = (need(args.a, "--a")?, need(args.b, "--b")?);
            let m = need(args.m, "--M")?;
            let r = lipschitz_from_bounded_sd(&*f, a, b, m, args.samples, &sched, args.seed)?;
            let _ = writeln!(
                out,
                "probe=lipschitz\na={}\nb={}\nM={}\nsamples={}\nworst_ratio={}\nmax_abs_sd={}\npass={}",
                sci(a),
                sci(b),
                sci(m),
                args.samples,
                sci(r.worst_ratio),
                sci(r.max_abs_sd),
                r.pass
            );
        }
    }
    Ok(Output {
        text: out,
        warnings: Vec::new(),
    })
}
