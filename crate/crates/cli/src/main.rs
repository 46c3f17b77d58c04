mod plot;
mod scenario;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use mps_core::bounds::{
    corollary71, corollary71_preset, BoundReport, CorollaryPreset, CorollaryReport,
    CorollaryScenario, RingSplitting, TheoremConstants, TheoremId,
};
use mps_core::config::{read_json, write_json, ParticleFile, ScenarioFile};
use mps_core::functions::TestFunction;
use mps_core::geometry::{DomainSpec, Point2, Rect};
use mps_core::operators::{evaluate_all, exact_value, OperatorKind, OperatorValue};
use mps_core::study::{run_preset, run_study, Generator, StudyConfig, StudyOutcome};

use scenario::Loaded;

#[derive(Parser)]
#[command(
    name = "mps",
    version,
    about = "Particle operator error bounds on Voronoi site sets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a particle file (or a scenario file when h or C_star is given).
    Generate(GenerateArgs),
    /// Check the standing assumptions of a scenario file.
    Validate(ValidateArgs),
    /// Evaluate the operators of every stage at the focal site.
    ApplyOp(ApplyArgs),
    /// Bound constants and theorem right-hand sides for a scenario.
    Bounds(BoundsArgs),
    /// Sweep configurations and compare measured errors with the bounds.
    Study(StudyArgs),
    /// Closed-form coefficients for the indicator weight with h = C_* r_σ.
    Corollary71(CorollaryArgs),
}

#[derive(Args)]
struct ScenarioArgs {
    /// Scenario JSON.
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    focal_index: Option<usize>,
    #[arg(long)]
    lambda: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum GeneratorKind {
    Lattice,
    Jittered,
    Hex,
    PoissonDisk,
}

/// Generator settings read with `--config`.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct GenerateConfig {
    omega: Rect,
    #[serde(rename = "H")]
    padding: f64,
    generator: Generator,
    #[serde(default)]
    seed: u64,
    #[serde(default)]
    spacing: Option<f64>,
    #[serde(default)]
    r_sigma_target: Option<f64>,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "lattice")]
    generator: GeneratorKind,
    #[arg(long, default_value_t = 0.0)]
    jitter: f64,
    /// Physical domain as `xmin,ymin,xmax,ymax`.
    #[arg(long, default_value = "0,0,1,1")]
    omega: String,
    /// Padding width H.
    #[arg(long = "H", default_value_t = 0.1)]
    padding: f64,
    /// Site spacing; sites fill the padded domain.
    #[arg(long)]
    spacing: Option<f64>,
    /// Spacing chosen so the unperturbed arrangement has this r_σ.
    #[arg(long)]
    r_sigma_target: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    h: Option<f64>,
    #[arg(long = "C-star")]
    c_star: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    /// Output directory; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    /// Also fail on the cover clause.
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
struct ApplyArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    /// Operator slug such as `grad_tilde`, or `all`.
    #[arg(long, default_value = "all")]
    op: String,
    #[arg(long, default_value = "constant,x1,quadratic,sincos,gaussian")]
    functions: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BoundsArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    #[arg(long, default_value = "constant,x1,quadratic,sincos,gaussian")]
    functions: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct StudyArgs {
    /// Study configuration JSON.
    #[arg(long, required_unless_present = "preset")]
    config: Option<PathBuf>,
    /// `corollary71-i` or `corollary71-ii`.
    #[arg(long, conflicts_with = "config")]
    preset: Option<String>,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    functions: Option<String>,
    #[arg(long)]
    focal_index: Option<usize>,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct CorollaryArgs {
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    r_sigma: Option<f64>,
    #[arg(long = "C-star")]
    c_star: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(a) => generate(a),
        Command::Validate(a) => validate(a),
        Command::ApplyOp(a) => apply_op(a),
        Command::Bounds(a) => bounds(a),
        Command::Study(a) => study(a),
        Command::Corollary71(a) => corollary(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// 2 for unreadable or incomplete input, 1 for everything else.
fn exit_code(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if cause.downcast_ref::<serde_json::Error>().is_some()
            || cause.downcast_ref::<std::io::Error>().is_some()
        {
            return 2;
        }
        if let Some(err) = cause.downcast_ref::<mps_core::Error>() {
            return match err {
                mps_core::Error::Json(_) | mps_core::Error::Io(_) | mps_core::Error::Config(_) => 2,
                _ => 1,
            };
        }
    }
    1
}

fn parse_rect(s: &str) -> Result<Rect> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .with_context(|| format!("--omega expects xmin,ymin,xmax,ymax, got {s:?}"))?;
    if v.len() != 4 {
        bail!("--omega expects four numbers, got {}", v.len());
    }
    Ok(Rect::new(Point2::new(v[0], v[1]), Point2::new(v[2], v[3]))?)
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn generate(a: GenerateArgs) -> Result<ExitCode> {
    let cfg = match &a.config {
        Some(p) => {
            let mut c: GenerateConfig =
                read_json(p).with_context(|| format!("reading {}", p.display()))?;
            if let Some(s) = a.seed {
                c.seed = s;
            }
            c
        }
        None => GenerateConfig {
            omega: parse_rect(&a.omega)?,
            padding: a.padding,
            generator: match a.generator {
                GeneratorKind::Lattice if a.jitter > 0.0 => {
                    Generator::Jittered { jitter: a.jitter }
                }
                GeneratorKind::Lattice => Generator::Lattice,
                GeneratorKind::Jittered => Generator::Jittered { jitter: a.jitter },
                GeneratorKind::Hex => Generator::Hex,
                GeneratorKind::PoissonDisk => Generator::PoissonDisk,
            },
            seed: a.seed.unwrap_or(0),
            spacing: a.spacing,
            r_sigma_target: a.r_sigma_target,
        },
    };
    let spacing = match (cfg.spacing, cfg.r_sigma_target) {
        (Some(s), _) => s,
        (None, Some(r)) => cfg.generator.spacing_for(r),
        (None, None) => {
            return Err(
                mps_core::Error::Config("give a spacing or an r_sigma target".into()).into(),
            )
        }
    };
    let domain = DomainSpec::new(cfg.omega, cfg.padding)?;
    let sites = cfg
        .generator
        .generate(domain.omega_h(), spacing, cfg.seed)?;
    let particles = ParticleFile { domain, sites };
    let decomp = particles.build()?;
    eprintln!(
        "{} sites, spacing {spacing}, measured r_σ = {}",
        decomp.len(),
        decomp.r_sigma()
    );
    let name;
    let value = if a.h.is_some() || a.c_star.is_some() {
        name = "scenario.json";
        serde_json::to_value(ScenarioFile {
            particles,
            h: a.h,
            c_star: a.c_star,
            delta: None,
            focal: None,
            lambda: a.lambda,
            weight: Default::default(),
        })?
    } else {
        name = "sites.json";
        serde_json::to_value(particles)?
    };
    match a.out {
        Some(dir) => {
            ensure_dir(&dir)?;
            write_json(&dir.join(name), &value)?;
        }
        None => print_json(&value)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn validate(a: ValidateArgs) -> Result<ExitCode> {
    let loaded = Loaded::read(&a.scenario.config, a.scenario.focal_index)?;
    let report = loaded.validation()?;
    print!("{report}");
    let mut ok = if a.strict {
        report.passed_strict()
    } else {
        report.passed()
    };
    if report.passed() {
        let lambda = a.scenario.lambda.or(loaded.scenario.lambda);
        match loaded
            .weight()
            .and_then(|w| loaded.context(&w, lambda).map(|ctx| ctx.c0()))
        {
            Ok(c0) => println!("ok   positivity: C0 = {c0:e}"),
            Err(e) => {
                println!("FAIL positivity: {e}");
                ok = false;
            }
        }
    }
    for f in report.failures() {
        if f.blocking || a.strict {
            eprintln!("violated: {}: {}", f.label, f.detail);
        }
    }
    Ok(if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

#[derive(Serialize)]
struct AppliedOperator {
    function: String,
    operator: String,
    symbol: String,
    value: OperatorValue,
    exact: OperatorValue,
    error: f64,
}

fn apply_op(a: ApplyArgs) -> Result<ExitCode> {
    let loaded = Loaded::read(&a.scenario.config, a.scenario.focal_index)?;
    loaded.require_valid()?;
    let w = loaded.weight()?;
    let ctx = loaded.context(&w, a.scenario.lambda.or(loaded.scenario.lambda))?;
    let kinds: Vec<OperatorKind> = if a.op == "all" {
        OperatorKind::all().collect()
    } else {
        vec![OperatorKind::parse(&a.op).with_context(|| format!("unknown operator {:?}", a.op))?]
    };
    let mut out = Vec::new();
    for f in TestFunction::parse_list(&a.functions)? {
        let table = evaluate_all(&ctx, &f, true)?;
        for &k in &kinds {
            let exact = exact_value(k.family, &f, ctx.x());
            let value = table.value(k);
            out.push(AppliedOperator {
                function: f.name(),
                operator: k.slug(),
                symbol: k.symbol(),
                value,
                exact,
                error: exact.distance(&value),
            });
        }
    }
    match a.out {
        Some(dir) => {
            ensure_dir(&dir)?;
            write_json(&dir.join("apply_op.json"), &out)?;
        }
        None => print_json(&out)?,
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct BoundsOutput {
    focal: usize,
    x: Point2,
    r_sigma: f64,
    h: f64,
    delta: f64,
    lambda: Option<f64>,
    reports: Vec<BoundReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ring_splitting: Option<RingSplitting>,
}

#[derive(Serialize)]
struct BoundRow {
    r_sigma: f64,
    h: f64,
    #[serde(rename = "C_star")]
    c_star: f64,
    lambda: Option<f64>,
    theorem: String,
    function: String,
    error: f64,
    rhs: f64,
    pass: bool,
}

fn bounds(a: BoundsArgs) -> Result<ExitCode> {
    let loaded = Loaded::read(&a.scenario.config, a.scenario.focal_index)?;
    loaded.require_valid()?;
    let w = loaded.weight()?;
    let lambda = a.scenario.lambda.or(loaded.scenario.lambda);
    let ctx = loaded.context(&w, lambda)?;
    let tc = TheoremConstants::compute(&ctx)?;
    let reports: Vec<BoundReport> = TheoremId::ALL
        .into_iter()
        .filter(|t| !t.needs_lambda() || lambda.is_some())
        .map(|t| BoundReport::from_constants(t, &tc))
        .collect::<mps_core::Result<_>>()?;
    let mut rows = Vec::new();
    let omega_h = loaded.decomp.omega_h();
    for f in TestFunction::parse_list(&a.functions)? {
        let table = evaluate_all(&ctx, &f, true)?;
        let s = f.seminorms(&omega_h);
        for rep in &reports {
            let fam = rep.theorem.family();
            let error = table.error(fam);
            let rhs = rep.rhs(&s);
            let scale = table.exact(fam).magnitude() + table.get(OperatorKind::tilde(fam)).scale;
            rows.push(BoundRow {
                r_sigma: ctx.r_sigma(),
                h: ctx.h(),
                c_star: ctx.h() / ctx.r_sigma(),
                lambda,
                theorem: rep.theorem.number().into(),
                function: f.name(),
                error,
                rhs,
                pass: mps_core::lemmas::within_bound(error, rhs, scale),
            });
        }
    }
    let output = BoundsOutput {
        focal: ctx.focal(),
        x: ctx.x(),
        r_sigma: ctx.r_sigma(),
        h: ctx.h(),
        delta: ctx.delta(),
        lambda,
        reports,
        ring_splitting: lambda.map(|_| RingSplitting::compute(&ctx)).transpose()?,
    };
    match a.out {
        Some(dir) => {
            ensure_dir(&dir)?;
            write_json(&dir.join("bounds.json"), &output)?;
            let mut w = csv::Writer::from_path(dir.join("bounds.csv"))?;
            for r in &rows {
                w.serialize(r)?;
            }
            w.flush()?;
        }
        None => {
            print_json(&output)?;
            let mut w = csv::Writer::from_writer(std::io::stdout());
            for r in &rows {
                w.serialize(r)?;
            }
            w.flush()?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// The columns of `study.csv`.
#[derive(Serialize)]
struct CsvRow<'a> {
    r_sigma: f64,
    h: f64,
    #[serde(rename = "C_star")]
    c_star: f64,
    lambda: f64,
    function: &'a str,
    operator: &'a str,
    error: f64,
    rhs: f64,
    pass: bool,
}

fn write_study(dir: &Path, outcome: &StudyOutcome) -> Result<()> {
    ensure_dir(dir)?;
    let mut w = csv::Writer::from_path(dir.join("study.csv"))?;
    for r in &outcome.rows {
        w.serialize(CsvRow {
            r_sigma: r.r_sigma,
            h: r.h,
            c_star: r.c_star,
            lambda: r.lambda,
            function: &r.function,
            operator: &r.operator,
            error: r.error,
            rhs: r.rhs,
            pass: r.pass,
        })?;
    }
    w.flush()?;
    if !outcome.lemmas.is_empty() {
        let mut w = csv::Writer::from_path(dir.join("lemmas.csv"))?;
        for r in &outcome.lemmas {
            w.serialize(r)?;
        }
        w.flush()?;
    }
    write_json(&dir.join("study.json"), outcome)?;
    if !outcome.rows.is_empty() {
        plot::error_vs_r_sigma(&dir.join("study.svg"), &outcome.rows)?;
    }
    Ok(())
}

fn study(a: StudyArgs) -> Result<ExitCode> {
    let functions = a
        .functions
        .as_deref()
        .map(|s| -> Result<Vec<String>> {
            Ok(TestFunction::parse_list(s)?
                .iter()
                .map(|f| f.name())
                .collect())
        })
        .transpose()?;
    let outcome = match (&a.preset, &a.config) {
        (Some(p), _) => {
            let preset = CorollaryPreset::parse(p, a.m)?;
            if a.lambda.is_some() || a.focal_index.is_some() {
                bail!("--lambda and --focal-index are fixed by the preset");
            }
            run_preset(preset, functions, a.seed)?
        }
        (None, Some(path)) => {
            let mut cfg: StudyConfig =
                read_json(path).with_context(|| format!("reading {}", path.display()))?;
            if let Some(s) = a.seed {
                cfg.seed = s;
            }
            if let Some(l) = a.lambda {
                cfg.lambda = l;
            }
            if let Some(f) = functions {
                cfg.functions = f;
            }
            if a.focal_index.is_some() {
                cfg.focal_index = a.focal_index;
            }
            run_study(&cfg)?
        }
        (None, None) => unreachable!("clap requires --config or --preset"),
    };
    write_study(&a.out, &outcome)?;
    for s in &outcome.skips {
        println!("skipped: {}", s.reason);
    }
    if let Some(c) = &outcome.corollary {
        print_corollary(c);
    }
    println!("{}", outcome.summary());
    let theorem_ok = outcome.rows.iter().all(|r| r.pass && r.apriori_pass);
    Ok(if theorem_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn print_corollary(c: &CorollaryReport) {
    let s = &c.scenario;
    println!(
        "{}r_σ = {:e}, C_* = {}, λ = {}, h = {:e}, δ = {:e}",
        c.preset
            .as_ref()
            .map(|p| format!("{p}: "))
            .unwrap_or_default(),
        s.r_sigma,
        s.c_star,
        s.lambda,
        s.h(),
        s.delta
    );
    for (i, g) in c.general.iter().enumerate() {
        let printed = c
            .printed
            .map(|p| format!("  printed ({:e}, {:e})", p[i].first, p[i].second))
            .unwrap_or_default();
        println!(
            "  {:<2} |f|_C{} {:.6e}, |f|_C{} {:.6e}{printed}",
            g.family.symbol(),
            g.orders.0,
            g.first,
            g.orders.1,
            g.second
        );
    }
    if let Some(d) = c.printed_dominates() {
        println!("  general forms within printed coefficients: {d}");
    }
}

fn corollary(a: CorollaryArgs) -> Result<ExitCode> {
    let report = match (a.r_sigma, a.c_star, a.lambda) {
        (None, None, None) => {
            let preset =
                CorollaryPreset::parse(a.preset.as_deref().unwrap_or("corollary71-ii"), a.m)?;
            corollary71_preset(preset)?
        }
        (Some(r), Some(c), Some(l)) if a.preset.is_none() => {
            corollary71(CorollaryScenario::new(r, c, l)?)?
        }
        _ => bail!("give --preset, or all of --r-sigma, --C-star and --lambda"),
    };
    print_corollary(&report);
    if let Some(dir) = a.out {
        ensure_dir(&dir)?;
        write_json(&dir.join("corollary71.json"), &report)?;
    }
    Ok(ExitCode::SUCCESS)
}
