//! Command-line front end. `run` returns the process exit code:
//! 0 success, 1 usage or invalid input, 2 Padé approximant does not exist,
//! 3 numeric failure (including a certificate that did not pass),
//! 4 fit failed, 5 index sequence exhausted, 6 no admissible perturbation.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::compact::{exhausting_family, outer_family, DomainSpec, FamilyMode, OuterMode};
use crate::constructive::{
    build_universal_polynomial, greedy_universal_run, reproduction_spot_check, seleznev_extend, verify_conclusions,
    verify_extension, Certificate,
};
use crate::error::{Error, Result};
use crate::pade::{hankel_determinant, order_condition_residual, pade_approximant_via, PadeRoute};
use crate::report::{emit_pade_table, load_run, save_run, Environment, RunRecord};
use crate::scenario::{parse, GreedyScenario, SeleznevScenario, UniversalScenario};
use crate::series::{Complex, FormalPowerSeries, Polynomial, ToleranceConfig};

#[derive(Parser, Debug)]
#[command(
    name = "pade-universal",
    version,
    about = "Padé approximants and certified universal Padé-Taylor approximation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Padé approximant [f; p/q] with its order-condition residual.
    Pade(PadeArgs),
    /// Hankel determinant and existence for every (p, q) up to the bounds, as CSV.
    Table(TableArgs),
    /// Build and certify u = P + d z^p for a scenario.
    Build(RunArgs),
    /// One coefficient-extension step for a formal power series.
    Seleznev(RunArgs),
    /// A chain of coefficient-extension steps.
    Greedy(RunArgs),
    /// Re-measure the certificates stored in a run record.
    Verify(VerifyArgs),
    /// Print one member of an exhausting or outer compact family.
    Family(FamilyArgs),
}

#[derive(Args, Debug)]
struct SeriesArgs {
    /// File or inline JSON: a series object, a list of numbers or [re, im]
    /// pairs, or a preset `exp:N`, `log1p:N`, `geometric:N`.
    #[arg(long)]
    series: String,
    /// Expansion center as `re` or `re,im`; overrides the series' own.
    #[arg(long, allow_hyphen_values = true)]
    center: Option<String>,
    /// Relative Hankel threshold.
    #[arg(long)]
    det_tol: Option<f64>,
}

#[derive(Args, Debug)]
struct PadeArgs {
    #[command(flatten)]
    series: SeriesArgs,
    #[arg(long)]
    p: usize,
    #[arg(long)]
    q: usize,
    #[arg(long, value_enum, default_value_t = RouteArg::Auto)]
    route: RouteArg,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum RouteArg {
    Auto,
    Jacobi,
    Toeplitz,
}

#[derive(Args, Debug)]
struct TableArgs {
    #[command(flatten)]
    series: SeriesArgs,
    #[arg(long)]
    p_max: usize,
    #[arg(long)]
    q_max: usize,
    /// Write the CSV here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[arg(long)]
    scenario: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Seed for the randomized spot checks; overrides the scenario's.
    #[arg(long)]
    seed: Option<u64>,
    /// Number of random reproduction spot checks.
    #[arg(long, default_value_t = 16)]
    spot_checks: usize,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    record: PathBuf,
    /// Write the re-measured record here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ModeArg {
    Interior,
    Boundary,
    OffOmega,
    OffClosure,
}

#[derive(Args, Debug)]
struct FamilyArgs {
    /// `disk` for the unit disk, or a domain as inline JSON or a file.
    #[arg(long, default_value = "disk")]
    domain: String,
    #[arg(long, value_enum)]
    mode: ModeArg,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = crate::compact::DEFAULT_SAMPLES)]
    samples: usize,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return 0;
        }
        Err(e) => {
            let diag = json!({"error": "usage", "exit_code": 1, "message": e.to_string()});
            eprintln!("{diag}");
            return 1;
        }
    };
    let outcome = match cli.command {
        Command::Pade(a) => cmd_pade(a),
        Command::Table(a) => cmd_table(a),
        Command::Build(a) => cmd_build(a),
        Command::Seleznev(a) => cmd_seleznev(a),
        Command::Greedy(a) => cmd_greedy(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Family(a) => cmd_family(a),
    };
    match outcome {
        Ok(code) => code,
        // Reader went away (`| head`); nothing left to report to.
        Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => 0,
        Err(Error::Json(e)) if e.io_error_kind() == Some(std::io::ErrorKind::BrokenPipe) => 0,
        Err(e) => {
            let diag = diagnostic(&e);
            eprintln!("{diag}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e.root() {
        Error::PadeNotExist { .. } => 2,
        Error::FitFailed { .. } => 4,
        Error::IndexExhausted { .. } => 5,
        Error::PerturbationFailed { .. } => 6,
        Error::InvalidArgument(_)
        | Error::Schema(_)
        | Error::Overlap { .. }
        | Error::OriginInK
        | Error::EmptySpec
        | Error::EmptyResult(_)
        | Error::Unsupported(_)
        | Error::TruncationExceeded { .. }
        | Error::LengthMismatch { .. }
        | Error::DegreeMismatch { .. }
        | Error::InsufficientPoints { .. }
        | Error::Io(_)
        | Error::Json(_)
        | Error::Csv(_) => 1,
        _ => 3,
    }
}

fn kind(e: &Error) -> &'static str {
    match e {
        Error::TruncationExceeded { .. } => "truncation_exceeded",
        Error::LengthMismatch { .. } => "length_mismatch",
        Error::NonFinite(_) => "non_finite",
        Error::InvalidArgument(_) => "invalid_argument",
        Error::PadeNotExist { .. } => "pade_not_exist",
        Error::DegenerateDenominator(_) => "degenerate_denominator",
        Error::PoleProximity { .. } => "pole_proximity",
        Error::DegreeMismatch { .. } => "degree_mismatch",
        Error::EmptySpec => "empty_spec",
        Error::EmptyResult(_) => "empty_result",
        Error::Unsupported(_) => "unsupported",
        Error::IndexExhausted { .. } => "index_exhausted",
        Error::IllConditioned { .. } => "ill_conditioned",
        Error::InsufficientPoints { .. } => "insufficient_points",
        Error::FitFailed { .. } => "fit_failed",
        Error::PerturbationFailed { .. } => "perturbation_failed",
        Error::OriginInK => "origin_in_k",
        Error::Overlap { .. } => "overlap",
        Error::AtPoint { .. } => "at_point",
        Error::Step { .. } => "step",
        Error::Schema(_) => "schema",
        Error::Io(_) => "io",
        Error::Json(_) => "json",
        Error::Csv(_) => "csv",
    }
}

/// Machine-readable description of a failure.
pub fn diagnostic(e: &Error) -> Value {
    let root = e.root();
    let mut out = Map::new();
    out.insert("error".into(), json!(kind(root)));
    out.insert("exit_code".into(), json!(exit_code(e)));
    out.insert("message".into(), json!(e.to_string()));
    let mut cur = e;
    loop {
        match cur {
            Error::AtPoint { point, source } => {
                out.entry("point").or_insert(json!([point.re, point.im]));
                cur = source;
            }
            Error::Step { index, source } => {
                out.insert("step".into(), json!(index));
                cur = source;
            }
            _ => break,
        }
    }
    if let Error::PadeNotExist {
        p,
        q,
        center,
        value,
        threshold,
    } = root
    {
        out.insert(
            "hankel".into(),
            json!({
                "p": p, "q": q,
                "center": [center.re, center.im],
                "value": [value.re, value.im],
                "abs": value.norm(),
                "threshold": threshold,
            }),
        );
    }
    Value::Object(out)
}

fn parse_complex(s: &str) -> Result<Complex> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| {
        t.parse::<f64>()
            .map_err(|_| Error::InvalidArgument(format!("cannot parse {t:?} as a number")))
    };
    match parts.as_slice() {
        [re] => Ok(Complex::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex::new(num(re)?, num(im)?)),
        _ => Err(Error::InvalidArgument(format!("expected `re` or `re,im`, got {s:?}"))),
    }
}

fn read_inline_or_file(arg: &str) -> Result<String> {
    let path = Path::new(arg);
    if !arg.trim_start().starts_with(['{', '[']) && path.is_file() {
        Ok(std::fs::read_to_string(path)?)
    } else {
        Ok(arg.to_string())
    }
}

fn load_series(args: &SeriesArgs) -> Result<FormalPowerSeries> {
    let center = args.center.as_deref().map(parse_complex).transpose()?;
    let series = if let Some((name, len)) = args.series.split_once(':').filter(|(n, _)| !n.contains(['{', '['])) {
        let len: usize = len
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad preset length {len:?}")))?;
        match name {
            "exp" => FormalPowerSeries::exponential(len)?,
            "log1p" => FormalPowerSeries::log1p(len)?,
            "geometric" => FormalPowerSeries::geometric(len)?,
            other => return Err(Error::InvalidArgument(format!("unknown preset {other:?}"))),
        }
    } else {
        let text = read_inline_or_file(&args.series)?;
        let value: Value = serde_json::from_str(&text).map_err(|e| Error::InvalidArgument(format!("series: {e}")))?;
        match value {
            Value::Object(_) => parse::<FormalPowerSeries>(&value)?,
            Value::Array(items) => {
                let coeffs = items
                    .iter()
                    .map(|v| match v {
                        Value::Number(n) => n.as_f64().map(|x| Complex::new(x, 0.0)),
                        Value::Array(pair) if pair.len() == 2 => {
                            Some(Complex::new(pair[0].as_f64()?, pair[1].as_f64()?))
                        }
                        _ => None,
                    })
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| Error::InvalidArgument("series entries must be numbers or [re, im]".into()))?;
                FormalPowerSeries::new(Complex::default(), coeffs)?
            }
            _ => return Err(Error::InvalidArgument("series must be a JSON object or array".into())),
        }
    };
    match center {
        Some(c) => FormalPowerSeries::new(c, series.coeffs().to_vec()),
        None => Ok(series),
    }
}

fn tolerances(det: Option<f64>) -> Result<ToleranceConfig> {
    let tol = ToleranceConfig::default();
    match det {
        Some(d) => tol.with_det(d),
        None => Ok(tol),
    }
}

fn print_json(value: &impl serde::Serialize) -> Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn cmd_pade(a: PadeArgs) -> Result<i32> {
    let f = load_series(&a.series)?;
    let tol = tolerances(a.series.det_tol)?;
    let route = match a.route {
        RouteArg::Auto => PadeRoute::Auto,
        RouteArg::Jacobi => PadeRoute::Jacobi,
        RouteArg::Toeplitz => PadeRoute::Toeplitz,
    };
    let hankel = hankel_determinant(&f, a.p, a.q, &tol)?;
    let r = pade_approximant_via(&f, a.p, a.q, &tol, route)?;
    let residual = order_condition_residual(&f, &r, &tol)?;
    print_json(&json!({"approximant": r, "residual": residual, "hankel": hankel}))?;
    Ok(0)
}

fn cmd_table(a: TableArgs) -> Result<i32> {
    let f = load_series(&a.series)?;
    let tol = tolerances(a.series.det_tol)?;
    let csv = emit_pade_table(&f, a.p_max, a.q_max, &tol)?;
    match a.out {
        Some(path) => std::fs::write(path, csv)?,
        None => std::io::stdout().lock().write_all(csv.as_bytes())?,
    }
    Ok(0)
}

fn read_scenario(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Schema(format!("scenario is not valid JSON: {e}")))
}

/// Writes the record and maps the run outcome to an exit code. Failed runs
/// still produce a record carrying the diagnostic.
fn finish_run(mut record: RunRecord, outcome: Result<()>, out: &Path) -> Result<i32> {
    let code = match &outcome {
        Ok(()) if !record.certificates.is_empty() && record.certificates.iter().all(|c| c.passed) => 0,
        Ok(()) => {
            let diag = json!({"error": "certificate_not_passed", "exit_code": 3,
                "message": "the run completed but its certificate did not pass"});
            eprintln!("{diag}");
            record.extra.insert("error".into(), diag);
            3
        }
        Err(e) => {
            let diag = diagnostic(e);
            eprintln!("{diag}");
            record.extra.insert("error".into(), diag);
            exit_code(e)
        }
    };
    save_run(&record, out)?;
    Ok(code)
}

fn new_record(command: &str, scenario: Value, seed: u64, tol: ToleranceConfig) -> RunRecord {
    let mut record = RunRecord::new(scenario, Vec::new(), Environment::current(tol));
    record.extra.insert("command".into(), json!(command));
    record.extra.insert("seed".into(), json!(seed));
    record
}

fn cmd_build(a: RunArgs) -> Result<i32> {
    let raw = read_scenario(&a.scenario)?;
    let (record, outcome) = build_record(raw, a.seed, a.spot_checks)?;
    finish_run(record, outcome, &a.out)
}

/// Runs a universal build scenario. The outer error means the scenario itself
/// is unusable; the inner one is the builder's, and the record is still
/// worth keeping in that case.
pub fn build_record(raw: Value, seed: Option<u64>, spot_checks: usize) -> Result<(RunRecord, Result<()>)> {
    let sc: UniversalScenario = parse(&raw)?;
    let opts = sc.options.build_options();
    let seed = seed.unwrap_or(sc.seed);
    let mut record = new_record("build", raw, seed, opts.tol);
    let outcome = build_universal_polynomial(&sc.requirement, &sc.f_on_l, sc.j(), &sc.f, &opts).and_then(|b| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spot = if b.certificate.hankel_ok {
            Some(reproduction_spot_check(
                &b.u,
                &sc.requirement.l,
                &[&sc.requirement.k, sc.j()],
                b.certificate.selected,
                spot_checks,
                &mut rng,
                &opts.tol,
            )?)
        } else {
            None
        };
        record.extra.insert(
            "spot_check".into(),
            json!({"samples": spot_checks, "max_pade_minus_u": spot}),
        );
        record.polynomials.insert("u".into(), b.u);
        record.polynomials.insert("P".into(), b.fit.poly);
        record.certificates.push(b.certificate);
        Ok(())
    });
    Ok((record, outcome))
}

fn coefficients_poly(coeffs: &[Complex]) -> Result<Polynomial> {
    Polynomial::new(Complex::default(), coeffs.to_vec())
}

fn cmd_seleznev(a: RunArgs) -> Result<i32> {
    let raw = read_scenario(&a.scenario)?;
    let sc: SeleznevScenario = parse(&raw)?;
    let opts = sc.options.build_options();
    let mut record = new_record("seleznev", raw, a.seed.unwrap_or(sc.seed), opts.tol);
    let outcome = seleznev_extend(&sc.prefix, &sc.requirement, &sc.f, &opts).and_then(|step| {
        record.polynomials.insert("h".into(), coefficients_poly(&step.coeffs)?);
        record.certificates.push(step.certificate);
        Ok(())
    });
    finish_run(record, outcome, &a.out)
}

fn cmd_greedy(a: RunArgs) -> Result<i32> {
    let raw = read_scenario(&a.scenario)?;
    let sc: GreedyScenario = parse(&raw)?;
    let opts = sc.options.build_options();
    let mut record = new_record("greedy", raw, a.seed.unwrap_or(sc.seed), opts.tol);
    let outcome = greedy_universal_run(&sc.prefix, &sc.schedule, &sc.f, &opts).and_then(|run| {
        record.polynomials.insert("h".into(), coefficients_poly(&run.coeffs)?);
        record.certificates = run.certificates;
        Ok(())
    });
    if outcome.is_ok() && sc.schedule.is_empty() {
        save_run(&record, &a.out)?;
        return Ok(0);
    }
    finish_run(record, outcome, &a.out)
}

/// Copies the search metadata that a pure re-measurement cannot know.
fn with_metadata(mut fresh: Certificate, stored: &Certificate) -> Certificate {
    fresh.index_position = stored.index_position;
    fresh.fit_degree = stored.fit_degree;
    fresh.fit_residual = stored.fit_residual;
    fresh.d_window = stored.d_window;
    fresh.notes = stored.notes.clone();
    fresh
}

fn stored_polynomial<'a>(record: &'a RunRecord, name: &str) -> Result<&'a Polynomial> {
    record
        .polynomials
        .get(name)
        .ok_or_else(|| Error::Schema(format!("record has no polynomial {name:?}")))
}

/// Re-measures every certificate of a loaded record.
pub fn reverify(record: &RunRecord) -> Result<Vec<Certificate>> {
    let command = record.extra.get("command").and_then(Value::as_str).unwrap_or("build");
    match command {
        "build" => {
            let sc: UniversalScenario = parse(&record.scenario)?;
            let tol = sc.options.build_options().tol;
            let u = stored_polynomial(record, "u")?;
            record
                .certificates
                .iter()
                .map(|stored| {
                    let fresh = verify_conclusions(
                        u,
                        &sc.requirement,
                        stored.selected,
                        sc.j(),
                        &sc.f_on_l,
                        sc.requirement.derivative_levels,
                        &tol,
                    )?;
                    Ok(with_metadata(fresh, stored))
                })
                .collect()
        }
        "seleznev" | "greedy" => {
            let (prefix, schedule, tol) = if command == "seleznev" {
                let sc: SeleznevScenario = parse(&record.scenario)?;
                (sc.prefix, vec![sc.requirement], sc.options.build_options().tol)
            } else {
                let sc: GreedyScenario = parse(&record.scenario)?;
                (sc.prefix, sc.schedule, sc.options.build_options().tol)
            };
            let h = stored_polynomial(record, "h")?.coeffs();
            if schedule.len() != record.certificates.len() {
                return Err(Error::Schema("certificate count does not match the schedule".into()));
            }
            let mut current = prefix;
            let mut out = Vec::with_capacity(schedule.len());
            for (req, stored) in schedule.iter().zip(&record.certificates) {
                let p = stored.selected.0;
                let coeffs = h
                    .get(..=p)
                    .ok_or_else(|| Error::Schema("stored coefficients are shorter than the selected degree".into()))?;
                let fresh = verify_extension(&current, coeffs, req, stored.selected, &tol)?;
                out.push(with_metadata(fresh, stored));
                current = coeffs.to_vec();
            }
            Ok(out)
        }
        other => Err(Error::Schema(format!("unknown command {other:?} in record"))),
    }
}

fn cmd_verify(a: VerifyArgs) -> Result<i32> {
    let record = load_run(&a.record)?;
    let fresh = reverify(&record)?;
    let reproduced = fresh == record.certificates;
    let passed = !fresh.is_empty() && fresh.iter().all(|c| c.passed);
    if let Some(out) = a.out {
        let mut updated = record.clone();
        updated.certificates = fresh.clone();
        updated.environment = Environment::current(record.environment.tolerances);
        save_run(&updated, &out)?;
    }
    print_json(&json!({"reproduced": reproduced, "passed": passed, "certificates": fresh.len()}))?;
    if reproduced {
        Ok(0)
    } else {
        eprintln!(
            "{}",
            json!({"error": "not_reproduced", "exit_code": 3, "message": "re-measured certificates differ from the stored ones"})
        );
        Ok(3)
    }
}

fn cmd_family(a: FamilyArgs) -> Result<i32> {
    let omega = if a.domain == "disk" {
        DomainSpec::unit_disk()
    } else {
        let text = read_inline_or_file(&a.domain)?;
        let value: Value = serde_json::from_str(&text).map_err(|e| Error::InvalidArgument(format!("domain: {e}")))?;
        parse::<DomainSpec>(&value)?
    };
    let spec = match a.mode {
        ModeArg::Interior => exhausting_family(&omega, a.k, FamilyMode::Interior, a.samples)?,
        ModeArg::Boundary => exhausting_family(&omega, a.k, FamilyMode::Boundary, a.samples)?,
        ModeArg::OffOmega => outer_family(&omega, a.k, OuterMode::OffOmega, a.samples)?,
        ModeArg::OffClosure => outer_family(&omega, a.k, OuterMode::OffClosure, a.samples)?,
    };
    print_json(&spec)?;
    Ok(0)
}
