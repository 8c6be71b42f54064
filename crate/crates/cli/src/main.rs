//! `cft`: quantum benchmarks for squeezed-state teleportation and storage.

mod fraction;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;
use squeeze_bench::benchmark::{
    self, avg_bound_over_purity, critical_squeezing, experiment, fit_eval,
    minimal_resource_squeezing, quantum_teleport_fidelity, BoundResult, Side, Verdict, EXPERIMENTS,
    FIT_MU_MIN,
};
use squeeze_bench::estimation::{thermal_cutoff, NORM_TOL};
use squeeze_bench::export::{bounds_csv, density_csv};
use squeeze_bench::fock_oracle::verification_checks;
use squeeze_bench::specfun::{Parity, Seed};
use squeeze_bench::states::r_to_db;
use squeeze_bench::{Error, Estimator, Purity, QuadConfig, TabulatedDensity};

use output::{csv_table, json_document, Format, Obj, Style};

/// Purity labels of the published bound table.
const TABLE_MU: [&str; 9] = ["1/9", "1/5", "1/3", "3/7", "1/2", "3/5", "7/9", "19/21", "1"];

#[derive(Parser)]
#[command(name = "cft", version, about = "Classical fidelity thresholds for squeezed states of unknown squeezing")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    #[arg(long, value_enum, default_value = "csv", global = true)]
    format: Format,
    /// Significant digits in the output.
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u8).range(3..=12), global = true)]
    precision: u8,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Run the brute-force oracle checks and report agreement on stderr.
    #[arg(long, global = true)]
    verify: bool,
    /// TOML file with quadrature settings.
    #[arg(long, env = "CFT_CONFIG", global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    abs_tol: Option<f64>,
    #[arg(long, global = true)]
    rel_tol: Option<f64>,
    #[arg(long, global = true)]
    outer_tol: Option<f64>,
    #[arg(long, global = true)]
    tail_cut: Option<f64>,
    /// Half-width of the δ grid.
    #[arg(long, global = true)]
    delta_max: Option<f64>,
    /// Number of δ intervals.
    #[arg(long, global = true)]
    n_points: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Pure-state CFT.
    Pure,
    /// Upper and lower bounds on the average CFT at fixed purity.
    #[command(group(ArgGroup::new("purities").required(true).args(["mu", "mu_range"])))]
    Bounds {
        /// Comma-separated purities; fractions such as 3/7 are exact.
        #[arg(long)]
        mu: Option<String>,
        /// START:STOP:COUNT, endpoints included.
        #[arg(long)]
        mu_range: Option<String>,
    },
    /// A bound averaged over a flat purity prior on [eps, 1].
    Average {
        #[arg(long, default_value = "upper")]
        side: Side,
        #[arg(long, default_value = "1/9")]
        eps: String,
    },
    /// Tabulated estimation densities.
    Dist {
        #[arg(long, value_enum)]
        kind: DistKind,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        seed: Option<usize>,
        #[arg(long)]
        mu: Option<String>,
        /// Fock cutoff of the thermal mixture.
        #[arg(long)]
        n_cut: Option<usize>,
        /// Keep every stride-th grid point.
        #[arg(long, default_value_t = 1)]
        stride: usize,
    },
    /// Twin-beam teleportation against the CFT.
    Quantum {
        #[command(subcommand)]
        command: QuantumCommand,
    },
    /// Place a measured fidelity against the bounds.
    #[command(group(ArgGroup::new("input").required(true).args(["mu", "experiment"])))]
    Verdict {
        #[arg(long, requires_all = ["fidelity", "sigma"])]
        mu: Option<String>,
        #[arg(long, conflicts_with = "experiment")]
        fidelity: Option<f64>,
        #[arg(long, conflicts_with = "experiment")]
        sigma: Option<f64>,
        #[arg(long)]
        experiment: Option<String>,
    },
    /// Bound table, polynomial fits and experiment points.
    Fig1 {
        #[arg(long)]
        fits_only: bool,
        /// Samples of each fit curve on [1/9, 1].
        #[arg(long, default_value_t = 89)]
        fit_points: usize,
    },
}

#[derive(Subcommand)]
enum QuantumCommand {
    /// F^Q(r, s).
    Eval {
        #[arg(long, allow_hyphen_values = true)]
        r: f64,
        #[arg(long, allow_hyphen_values = true)]
        s: f64,
    },
    /// Input squeezing at which F^Q drops to the threshold.
    Critical {
        #[arg(long, allow_hyphen_values = true)]
        s: f64,
        /// Defaults to the computed pure-state CFT.
        #[arg(long)]
        threshold: Option<f64>,
    },
    /// Smallest resource squeezing that reaches the threshold at r = 0.
    MinResource {
        #[arg(long)]
        threshold: Option<f64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DistKind {
    OptVacuum,
    OptFock,
    Cross,
    ThermalLower,
}

enum Failure {
    Usage(String),
    Numeric(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain { .. } | Error::Unsupported(_) | Error::Config(_) | Error::Truncation { .. } => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Numeric(e.to_string()),
        }
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn usage<T>(msg: impl Into<String>) -> Outcome<T> {
    Err(Failure::Usage(msg.into()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}

fn load_config(g: &Global) -> Outcome<QuadConfig> {
    let mut cfg = match &g.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
            toml::from_str(&text)
                .map_err(|e| Failure::Usage(format!("bad config {}: {e}", path.display())))?
        }
        None => QuadConfig::default(),
    };
    if let Some(v) = g.abs_tol {
        cfg.abs_tol = v;
    }
    if let Some(v) = g.rel_tol {
        cfg.rel_tol = v;
    }
    if let Some(v) = g.outer_tol {
        cfg.outer_tol = v;
    }
    if let Some(v) = g.tail_cut {
        cfg.tail_cut = v;
    }
    if let Some(v) = g.delta_max {
        cfg.delta_max = v;
    }
    if let Some(v) = g.n_points {
        cfg.n_points = v;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn purity(s: &str) -> Outcome<Purity> {
    let v = fraction::parse_number(s).map_err(Failure::Usage)?;
    Ok(Purity::new(v)?)
}

fn run(cli: Cli) -> Outcome<()> {
    let g = &cli.global;
    let style = Style {
        format: g.format,
        precision: g.precision as usize,
    };
    let est = Estimator::new(load_config(g)?)?;
    let (text, deferred) = dispatch(&cli.command, &est, style)?;
    match &g.output {
        Some(path) => std::fs::write(path, &text)
            .map_err(|e| Failure::Numeric(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    if g.verify {
        verify(&est, style)?;
    }
    deferred
}

/// Output text, plus a failure to report after the text is written.
type Rendered = (String, Outcome<()>);

fn dispatch(cmd: &Command, est: &Estimator, style: Style) -> Outcome<Rendered> {
    match cmd {
        Command::Pure => cmd_pure(est, style),
        Command::Bounds { mu, mu_range } => cmd_bounds(mu.as_deref(), mu_range.as_deref(), est, style),
        Command::Average { side, eps } => cmd_average(*side, eps, est, style),
        Command::Dist {
            kind,
            n,
            seed,
            mu,
            n_cut,
            stride,
        } => cmd_dist(*kind, *n, *seed, mu.as_deref(), *n_cut, *stride, est, style),
        Command::Quantum { command } => cmd_quantum(command, est, style),
        Command::Verdict {
            mu,
            fidelity,
            sigma,
            experiment,
        } => cmd_verdict(mu.as_deref(), *fidelity, *sigma, experiment.as_deref(), est, style),
        Command::Fig1 { fits_only, fit_points } => cmd_fig1(*fits_only, *fit_points, est, style),
    }
}

fn done(text: String) -> Outcome<Rendered> {
    Ok((text, Ok(())))
}

fn cmd_pure(est: &Estimator, style: Style) -> Outcome<Rendered> {
    let e = benchmark::cft_pure(est)?;
    done(match style.format {
        Format::Csv => csv_table(&["value", "error"], &[vec![style.fmt(e.value), style.fmt(e.error)]]),
        Format::Json => json_document(
            &Obj::new()
                .put("value", style.num(e.value))
                .put("error", style.num(e.error))
                .put("config", serde_json::to_value(est.config()).expect("config serializes"))
                .done(),
        ),
    })
}

fn bound_json(b: &BoundResult, style: Style) -> Value {
    Obj::new()
        .put("mu", style.num(b.mu))
        .put("f_up", style.num(b.f_up))
        .put("f_lo", style.num(b.f_lo))
        .put("n_cut", b.n_cut_used)
        .put("err", style.num(b.error_estimate))
        .done()
}

fn cmd_bounds(list: Option<&str>, range: Option<&str>, est: &Estimator, style: Style) -> Outcome<Rendered> {
    let values = match (list, range) {
        (Some(l), _) => fraction::parse_list(l),
        (None, Some(r)) => fraction::parse_range(r),
        (None, None) => unreachable!("clap requires one purity source"),
    }
    .map_err(Failure::Usage)?;
    let mus: Vec<Purity> = values.into_iter().map(Purity::new).collect::<Result<_, _>>()?;
    let mut rows = Vec::new();
    let mut failed = Vec::new();
    for mu in mus {
        match benchmark::bounds(mu, est) {
            Ok(b) => rows.push(b),
            Err(e) => {
                eprintln!("error: mu = {}: {e}", mu.value());
                failed.push(mu.value());
            }
        }
    }
    let text = match style.format {
        Format::Csv => bounds_csv(&rows, style.precision),
        Format::Json => json_document(&Value::Array(rows.iter().map(|b| bound_json(b, style)).collect())),
    };
    let status = if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Numeric(format!("{} of the rows failed", failed.len())))
    };
    Ok((text, status))
}

fn side_name(side: Side) -> &'static str {
    match side {
        Side::Upper => "upper",
        Side::Lower => "lower",
    }
}

fn cmd_average(side: Side, eps: &str, est: &Estimator, style: Style) -> Outcome<Rendered> {
    let eps = fraction::parse_number(eps).map_err(Failure::Usage)?;
    let e = avg_bound_over_purity(side, eps, est)?;
    done(match style.format {
        Format::Csv => csv_table(
            &["side", "eps", "value", "error"],
            &[vec![side_name(side).into(), style.fmt(eps), style.fmt(e.value), style.fmt(e.error)]],
        ),
        Format::Json => json_document(
            &Obj::new()
                .put("side", side_name(side))
                .put("eps", style.num(eps))
                .put("value", style.num(e.value))
                .put("error", style.num(e.error))
                .done(),
        ),
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_dist(
    kind: DistKind,
    n: Option<usize>,
    seed: Option<usize>,
    mu: Option<&str>,
    n_cut: Option<usize>,
    stride: usize,
    est: &Estimator,
    style: Style,
) -> Outcome<Rendered> {
    let allowed: &[&str] = match kind {
        DistKind::OptVacuum => &[],
        DistKind::OptFock => &["n"],
        DistKind::Cross => &["n", "seed"],
        DistKind::ThermalLower => &["mu", "n-cut"],
    };
    let given = [("n", n.is_some()), ("seed", seed.is_some()), ("mu", mu.is_some()), ("n-cut", n_cut.is_some())];
    for (flag, present) in given {
        if present && !allowed.contains(&flag) {
            return usage(format!("--{flag} does not apply to this kind"));
        }
    }
    let need_n = || n.ok_or_else(|| Failure::Usage("--n is required for this kind".into()));
    let mut meta = Obj::new();
    let p: std::sync::Arc<TabulatedDensity> = match kind {
        DistKind::OptVacuum => {
            meta = meta.put("kind", "opt-vacuum");
            est.opt_vacuum()?
        }
        DistKind::OptFock => {
            let n = need_n()?;
            meta = meta.put("kind", "opt-fock").put("n", n);
            est.opt_fock(n)?
        }
        DistKind::Cross => {
            let n = need_n()?;
            let s = seed.ok_or_else(|| Failure::Usage("--seed is required for cross".into()))?;
            let s = Seed::from_index(s)?;
            if Parity::of(n) != s.parity() {
                eprintln!(
                    "warning: n = {n} and seed {} have different parity; the density vanishes identically",
                    s.index()
                );
            }
            meta = meta.put("kind", "cross").put("n", n).put("seed", s.index());
            est.cross(n, s)?
        }
        DistKind::ThermalLower => {
            let mu = purity(mu.ok_or_else(|| Failure::Usage("--mu is required for thermal-lower".into()))?)?;
            let cut = n_cut.unwrap_or_else(|| thermal_cutoff(mu));
            meta = meta.put("kind", "thermal-lower").put("mu", style.num(mu.value())).put("n_cut", cut);
            est.thermal_lower(mu, cut)?
        }
    };
    if !p.is_zero() {
        p.accept(NORM_TOL)?;
    }
    if stride == 0 {
        return usage("--stride must be positive");
    }
    let shown = if stride == 1 { (*p).clone() } else { p.resample(stride, p.grid.half / stride) };
    done(match style.format {
        Format::Csv => density_csv(&shown, style.precision),
        Format::Json => {
            let (d, v): (Vec<Value>, Vec<Value>) = shown.iter().map(|(d, v)| (style.num(d), style.num(v))).unzip();
            json_document(
                &meta
                    .put("mass", style.num(p.mass))
                    .put("norm_defect", style.num(p.norm_defect))
                    .put("delta", d)
                    .put("density", v)
                    .done(),
            )
        }
    })
}

fn threshold_or_cft(t: Option<f64>, est: &Estimator) -> Outcome<f64> {
    match t {
        Some(t) => Ok(t),
        None => Ok(benchmark::cft_pure(est)?.value),
    }
}

fn cmd_quantum(cmd: &QuantumCommand, est: &Estimator, style: Style) -> Outcome<Rendered> {
    let (header, row, json): (&[&str], Vec<String>, Value) = match *cmd {
        QuantumCommand::Eval { r, s } => {
            let f = quantum_teleport_fidelity(r, s)?;
            (
                &["r", "s", "fidelity"],
                vec![style.fmt(r), style.fmt(s), style.fmt(f)],
                Obj::new().put("r", style.num(r)).put("s", style.num(s)).put("fidelity", style.num(f)).done(),
            )
        }
        QuantumCommand::Critical { s, threshold } => {
            let t = threshold_or_cft(threshold, est)?;
            let rc = critical_squeezing(s, t)?;
            let db = rc.map(r_to_db);
            (
                &["s", "threshold", "r_c", "r_c_db"],
                vec![style.fmt(s), style.fmt(t), style.csv_opt(rc), style.csv_opt(db)],
                Obj::new()
                    .put("s", style.num(s))
                    .put("threshold", style.num(t))
                    .put("r_c", style.opt(rc))
                    .put("r_c_db", style.opt(db))
                    .done(),
            )
        }
        QuantumCommand::MinResource { threshold } => {
            let t = threshold_or_cft(threshold, est)?;
            let s = minimal_resource_squeezing(t)?;
            (
                &["threshold", "s", "s_db"],
                vec![style.fmt(t), style.fmt(s), style.fmt(r_to_db(s))],
                Obj::new()
                    .put("threshold", style.num(t))
                    .put("s", style.num(s))
                    .put("s_db", style.num(r_to_db(s)))
                    .done(),
            )
        }
    };
    done(match style.format {
        Format::Csv => csv_table(header, &[row]),
        Format::Json => json_document(&json),
    })
}

fn classification_name(v: &Verdict) -> String {
    serde_json::to_value(v.classification)
        .ok()
        .and_then(|c| c.as_str().map(str::to_string))
        .expect("unit variants serialize as strings")
}

fn cmd_verdict(
    mu: Option<&str>,
    fidelity: Option<f64>,
    sigma: Option<f64>,
    key: Option<&str>,
    est: &Estimator,
    style: Style,
) -> Outcome<Rendered> {
    let (mu, f, sigma, exp) = match key {
        Some(k) => {
            let Some(e) = experiment(k) else {
                let known: Vec<&str> = EXPERIMENTS.iter().map(|e| e.key).collect();
                return usage(format!("unknown experiment {k:?}; known: {}", known.join(", ")));
            };
            (Purity::new(e.mu)?, e.fidelity, e.sigma, Some(e))
        }
        None => {
            let mu = purity(mu.expect("clap requires mu or experiment"))?;
            (mu, fidelity.expect("required with mu"), sigma.expect("required with mu"), None)
        }
    };
    let v = benchmark::verdict(mu, f, sigma, est)?;
    let class = classification_name(&v);
    done(match style.format {
        Format::Csv => csv_table(
            &[
                "experiment",
                "mu",
                "f_measured",
                "sigma",
                "f_up",
                "f_lo",
                "bound_error",
                "classification",
                "margin_upper",
                "margin_lower",
                "on_boundary",
            ],
            &[vec![
                exp.map_or("none", |e| e.key).to_string(),
                style.fmt(v.mu),
                style.fmt(v.f_measured),
                style.fmt(v.sigma),
                style.fmt(v.f_up),
                style.fmt(v.f_lo),
                style.fmt(v.bound_error),
                class,
                style.fmt(v.margin_upper),
                style.fmt(v.margin_lower),
                v.on_boundary.to_string(),
            ]],
        ),
        Format::Json => {
            let mut o = Obj::new();
            if let Some(e) = exp {
                o = o
                    .put("experiment", e.key)
                    .put("description", e.description)
                    .put("citation", e.citation)
                    .put("squeezing_db", style.num(e.squeezing_db));
            }
            json_document(
                &o.put("mu", style.num(v.mu))
                    .put("f_measured", style.num(v.f_measured))
                    .put("sigma", style.num(v.sigma))
                    .put("f_up", style.num(v.f_up))
                    .put("f_lo", style.num(v.f_lo))
                    .put("bound_error", style.num(v.bound_error))
                    .put("classification", class)
                    .put("margin_upper", style.num(v.margin_upper))
                    .put("margin_lower", style.num(v.margin_lower))
                    .put("sigma_margin_upper", style.opt(v.sigma_margin_upper))
                    .put("sigma_margin_lower", style.opt(v.sigma_margin_lower))
                    .put("on_boundary", v.on_boundary)
                    .done(),
            )
        }
    })
}

fn cmd_fig1(fits_only: bool, points: usize, est: &Estimator, style: Style) -> Outcome<Rendered> {
    if points < 2 {
        return usage("--fit-points must be at least 2");
    }
    let fits: Vec<(f64, f64, f64)> = (0..points)
        .map(|i| {
            let mu = if i == points - 1 {
                1.0
            } else {
                FIT_MU_MIN + (1.0 - FIT_MU_MIN) * i as f64 / (points - 1) as f64
            };
            Ok((mu, fit_eval(mu, Side::Upper)?, fit_eval(mu, Side::Lower)?))
        })
        .collect::<Outcome<_>>()?;
    let fit_rows: Vec<Vec<String>> = fits
        .iter()
        .map(|&(m, u, l)| vec![style.fmt(m), style.fmt(u), style.fmt(l)])
        .collect();
    let fit_header = ["mu", "fit_up", "fit_lo"];
    if fits_only {
        return done(match style.format {
            Format::Csv => csv_table(&fit_header, &fit_rows),
            Format::Json => json_document(&Obj::new().put("fits", fits_json(&fits, style)).done()),
        });
    }

    let mut table = Vec::new();
    for label in TABLE_MU {
        table.push((label, benchmark::bounds(purity(label)?, est)?));
    }
    let mut verdicts = Vec::new();
    for e in &EXPERIMENTS {
        verdicts.push((e, benchmark::verdict(Purity::new(e.mu)?, e.fidelity, e.sigma, est)?));
    }
    done(match style.format {
        Format::Csv => {
            let rows: Vec<Vec<String>> = table
                .iter()
                .map(|(l, b)| {
                    vec![
                        l.to_string(),
                        style.fmt(b.mu),
                        style.fmt(b.f_up),
                        style.fmt(b.f_lo),
                        b.n_cut_used.to_string(),
                        style.fmt(b.error_estimate),
                    ]
                })
                .collect();
            let exp_rows: Vec<Vec<String>> = verdicts
                .iter()
                .map(|(e, v)| {
                    vec![
                        e.key.to_string(),
                        style.fmt(e.mu),
                        style.fmt(e.squeezing_db),
                        style.fmt(e.fidelity),
                        style.fmt(e.sigma),
                        classification_name(v),
                    ]
                })
                .collect();
            [
                csv_table(&["label", "mu", "f_up", "f_lo", "n_cut", "err"], &rows),
                csv_table(&fit_header, &fit_rows),
                csv_table(&["experiment", "mu", "squeezing_db", "fidelity", "sigma", "classification"], &exp_rows),
            ]
            .join("\n")
        }
        Format::Json => {
            let table_json: Vec<Value> = table
                .iter()
                .map(|(l, b)| {
                    let Value::Object(mut m) = bound_json(b, style) else { unreachable!() };
                    m.shift_insert(0, "label".into(), Value::from(*l));
                    Value::Object(m)
                })
                .collect();
            let exp_json: Vec<Value> = verdicts
                .iter()
                .map(|(e, v)| {
                    Obj::new()
                        .put("experiment", e.key)
                        .put("mu", style.num(e.mu))
                        .put("squeezing_db", style.num(e.squeezing_db))
                        .put("fidelity", style.num(e.fidelity))
                        .put("sigma", style.num(e.sigma))
                        .put("classification", classification_name(v))
                        .put("citation", e.citation)
                        .done()
                })
                .collect();
            json_document(
                &Obj::new()
                    .put("table", table_json)
                    .put("fits", fits_json(&fits, style))
                    .put("experiments", exp_json)
                    .done(),
            )
        }
    })
}

fn fits_json(fits: &[(f64, f64, f64)], style: Style) -> Value {
    Value::Array(
        fits.iter()
            .map(|&(m, u, l)| {
                Obj::new()
                    .put("mu", style.num(m))
                    .put("fit_up", style.num(u))
                    .put("fit_lo", style.num(l))
                    .done()
            })
            .collect(),
    )
}

fn verify(est: &Estimator, style: Style) -> Outcome<()> {
    let checks = verification_checks(est)?;
    let mut failed = 0;
    for c in &checks {
        eprintln!(
            "verify: {}: deviation {} (tolerance {}) {}",
            c.name,
            style.fmt(c.deviation),
            style.fmt(c.tolerance),
            if c.passed { "ok" } else { "FAILED" }
        );
        failed += usize::from(!c.passed);
    }
    if failed > 0 {
        return Err(Failure::Numeric(format!("{failed} oracle checks failed")));
    }
    Ok(())
}
