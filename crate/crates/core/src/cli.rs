//! Command-line front end: argument parsing, subcommand dispatch and report files.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::config::{parse_scalar, GeometrySpec, OutputFormat, RunConfig};
use crate::diagnostics::{
    combine, nec_series, sin_tail_analysis, sj_hadamard_disjointness, sj_sj_disjointness,
    sphere_asymptotic_check, sphere_candidate_taus, tau_grid, tau_scan, torus_incommensurability,
    Outcome, SeriesOptions, SeriesReport, TailStatistic, TorusReport, Verdict,
};
use crate::error::Error;
use crate::export::{write_json, Table};
use crate::modes::ModeTable;
use crate::oracle::{
    default_bound_grids, dominated_bound_check, limit_tau_check, run_validation_suite,
    DominatedBound, LimitReport, ValidationResult,
};
use crate::smearing::bump;
use crate::spectrum::{Geometry, SpatialSpectrum, SpectrumDocument};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_ACCURACY: i32 = 3;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_IO: i32 = 74;

/// Environment variable fixing the worker thread count.
pub const THREADS_ENV: &str = "SJSLAB_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "sjslab",
    version,
    about = "Mode-by-mode diagnostics for Sorkin-Johnston states on ultrastatic slabs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubcommandKind {
    Spectrum,
    Modes,
    Hadamard,
    Disjoint,
    Limit,
    Oracle,
    Scan,
}

impl SubcommandKind {
    pub fn name(self) -> &'static str {
        match self {
            SubcommandKind::Spectrum => "spectrum",
            SubcommandKind::Modes => "modes",
            SubcommandKind::Hadamard => "hadamard",
            SubcommandKind::Disjoint => "disjoint",
            SubcommandKind::Limit => "limit",
            SubcommandKind::Oracle => "oracle",
            SubcommandKind::Scan => "scan",
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenfrequencies and multiplicities of the spatial operator.
    Spectrum(RunArgs),
    /// Per-level constants: sin 2ωτ, sinc 2ωτ, ‖C‖², ‖S‖², δ, λ₊.
    Modes(RunArgs),
    /// Hilbert–Schmidt series of the normal-ordered S-J two-point function.
    Hadamard(RunArgs),
    /// Disjointness series against the ground state and between two slabs.
    Disjoint(RunArgs),
    /// Smeared normal-ordered two-point function along growing τ.
    Limit(RunArgs),
    /// Brute-force validation of the closed forms.
    Oracle(RunArgs),
    /// Tail of |sin 2ωτ| over a grid of τ.
    Scan(RunArgs),
}

impl Command {
    pub fn split(self) -> (SubcommandKind, RunArgs) {
        match self {
            Command::Spectrum(a) => (SubcommandKind::Spectrum, a),
            Command::Modes(a) => (SubcommandKind::Modes, a),
            Command::Hadamard(a) => (SubcommandKind::Hadamard, a),
            Command::Disjoint(a) => (SubcommandKind::Disjoint, a),
            Command::Limit(a) => (SubcommandKind::Limit, a),
            Command::Oracle(a) => (SubcommandKind::Oracle, a),
            Command::Scan(a) => (SubcommandKind::Scan, a),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GeometryKind {
    Sphere,
    Torus,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

/// Flags shared by every subcommand; each overrides the config file.
#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// JSON run configuration; flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub geometry: Option<GeometryKind>,
    /// Sphere radius R (accepts expressions such as `pi/2`).
    #[arg(long, value_parser = parse_scalar, allow_negative_numbers = true)]
    pub radius: Option<f64>,
    /// Torus period L.
    #[arg(long, value_parser = parse_scalar, allow_negative_numbers = true)]
    pub period: Option<f64>,
    /// Spectrum document for `--geometry custom`.
    #[arg(long)]
    pub spectrum_file: Option<PathBuf>,
    #[arg(long, value_parser = parse_scalar, allow_negative_numbers = true)]
    pub mass: Option<f64>,
    /// Slab half-width τ.
    #[arg(long, value_parser = parse_scalar, allow_negative_numbers = true)]
    pub tau: Option<f64>,
    /// Second slab half-width τ' < τ.
    #[arg(long, value_parser = parse_scalar, allow_negative_numbers = true)]
    pub tau_prime: Option<f64>,
    /// Highest level (sphere), highest |n|² (torus), level cap (custom).
    #[arg(long)]
    pub levels: Option<usize>,
    /// Trailing window for tail statistics.
    #[arg(long)]
    pub window: Option<usize>,
    /// Largest r of the torus subsequences.
    #[arg(long)]
    pub r_max: Option<usize>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output formats.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub format: Option<Vec<FormatArg>>,
    /// Mode frequency for `limit`.
    #[arg(long, value_parser = parse_scalar, allow_negative_numbers = true)]
    pub omega: Option<f64>,
    /// Half-width of the bump for `limit`.
    #[arg(long, value_parser = parse_scalar, allow_negative_numbers = true)]
    pub bump_width: Option<f64>,
    /// τ schedule for `limit`.
    #[arg(long, value_parser = parse_scalar, value_delimiter = ',', allow_negative_numbers = true)]
    pub taus: Option<Vec<f64>>,
    /// Quadrature nodes for `oracle`.
    #[arg(long)]
    pub nodes: Option<usize>,
    #[arg(long, value_parser = parse_scalar, allow_negative_numbers = true)]
    pub tau_min: Option<f64>,
    #[arg(long, value_parser = parse_scalar, allow_negative_numbers = true)]
    pub tau_max: Option<f64>,
    #[arg(long, value_parser = parse_scalar, allow_negative_numbers = true)]
    pub tau_step: Option<f64>,
}

/// A failed run: exit status plus message.
#[derive(Debug)]
pub struct Failure {
    pub status: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure {
            status: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn io(path: &Path, e: std::io::Error) -> Failure {
        Failure {
            status: EXIT_IO,
            message: format!("{}: {e}", path.display()),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure {
            status: exit_code(&e),
            message: e.to_string(),
        }
    }
}

/// 3 for accuracy and numerical failures, 2 for everything else.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Accuracy { .. } | Error::Numerical(_) => EXIT_ACCURACY,
        _ => EXIT_VALIDATION,
    }
}

impl RunArgs {
    /// Merges the config file (if any) with the flags.
    pub fn resolve(&self) -> Result<RunConfig, Failure> {
        let mut c = match &self.config {
            Some(path) => {
                let text = RunConfig::load(path)
                    .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
                RunConfig::from_json(&text).map_err(|e| Failure::usage(e.to_string()))?
            }
            None => RunConfig::default(),
        };
        match self.geometry {
            Some(GeometryKind::Sphere) => {
                let radius = self.radius.or(match c.geometry {
                    GeometrySpec::Sphere { radius } => Some(radius),
                    _ => None,
                });
                c.geometry = GeometrySpec::Sphere {
                    radius: radius.unwrap_or(1.0),
                };
            }
            Some(GeometryKind::Torus) => {
                let period = self.period.or(match c.geometry {
                    GeometrySpec::Torus { period } => Some(period),
                    _ => None,
                });
                c.geometry = GeometrySpec::Torus {
                    period: period.unwrap_or(1.0),
                };
            }
            Some(GeometryKind::Custom) => {
                let path = match (&self.spectrum_file, &c.geometry) {
                    (Some(p), _) => p.clone(),
                    (None, GeometrySpec::Custom { path }) => path.clone(),
                    _ => return Err(Failure::usage("--geometry custom needs --spectrum-file")),
                };
                c.geometry = GeometrySpec::Custom { path };
            }
            None => match &mut c.geometry {
                GeometrySpec::Sphere { radius } => *radius = self.radius.unwrap_or(*radius),
                GeometrySpec::Torus { period } => *period = self.period.unwrap_or(*period),
                GeometrySpec::Custom { path } => {
                    if let Some(p) = &self.spectrum_file {
                        *path = p.clone();
                    }
                }
            },
        }
        if let Some(v) = self.mass {
            c.mass = v;
        }
        if let Some(v) = self.tau {
            c.tau = v;
        }
        if self.tau_prime.is_some() {
            c.tau_prime = self.tau_prime;
        }
        if let Some(v) = self.levels {
            c.levels = v;
        }
        if let Some(v) = self.window {
            c.window = v;
        }
        if let Some(v) = self.r_max {
            c.r_max = v;
        }
        if let Some(v) = &self.out {
            c.out = v.clone();
        }
        if let Some(v) = &self.format {
            let mut formats: Vec<OutputFormat> = v
                .iter()
                .map(|f| match f {
                    FormatArg::Csv => OutputFormat::Csv,
                    FormatArg::Json => OutputFormat::Json,
                })
                .collect();
            formats.sort();
            formats.dedup();
            c.formats = formats;
        }
        if let Some(v) = self.omega {
            c.limit.omega = v;
        }
        if let Some(v) = self.bump_width {
            c.limit.bump_width = v;
        }
        if let Some(v) = &self.taus {
            c.limit.taus = v.clone();
        }
        if let Some(v) = self.nodes {
            c.oracle.nodes = v;
        }
        if let Some(v) = self.tau_min {
            c.scan.tau_min = v;
        }
        if let Some(v) = self.tau_max {
            c.scan.tau_max = v;
        }
        if let Some(v) = self.tau_step {
            c.scan.tau_step = v;
        }
        Ok(c)
    }
}

/// Files written by one run plus the headline outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub written: Vec<PathBuf>,
    pub headline: String,
}

struct Sink<'a> {
    config: &'a RunConfig,
    name: &'static str,
    written: Vec<PathBuf>,
}

impl Sink<'_> {
    fn csv(&mut self, suffix: &str, table: &Table) -> Result<(), Failure> {
        if !self.config.wants(OutputFormat::Csv) {
            return Ok(());
        }
        let path = self.config.out.join(format!("{}{suffix}.csv", self.name));
        table.write_to(&path).map_err(|e| Failure::io(&path, e))?;
        self.written.push(path);
        Ok(())
    }

    fn json<T: Serialize>(&mut self, report: &T) -> Result<(), Failure> {
        if !self.config.wants(OutputFormat::Json) {
            return Ok(());
        }
        let path = self.config.out.join(format!("{}.json", self.name));
        let doc = Envelope {
            subcommand: self.name,
            config: self.config,
            report,
        };
        write_json(&path, &doc).map_err(|e| Failure::io(&path, e))?;
        self.written.push(path);
        Ok(())
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    subcommand: &'static str,
    config: &'a RunConfig,
    report: &'a T,
}

/// Scalar summary of a [`SeriesReport`] for JSON output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesSummary {
    pub name: String,
    pub tau: f64,
    pub tau_secondary: Option<f64>,
    pub level_count: usize,
    pub last_level: Option<usize>,
    pub total: f64,
    pub growth_ratio: Option<f64>,
    pub tail_sequence_name: String,
    pub tail: TailStatistic,
    pub verdict: Verdict,
}

impl From<&SeriesReport> for SeriesSummary {
    fn from(r: &SeriesReport) -> Self {
        SeriesSummary {
            name: r.name.clone(),
            tau: r.tau,
            tau_secondary: r.tau_secondary,
            level_count: r.len(),
            last_level: r.levels.last().copied(),
            total: r.total(),
            growth_ratio: r.growth_ratio,
            tail_sequence_name: r.tail_sequence_name.clone(),
            tail: r.tail,
            verdict: r.verdict,
        }
    }
}

/// Columns: index, omega, multiplicity, term, partial_sum, tail_sequence.
pub fn series_table(r: &SeriesReport) -> Table {
    let mut t = Table::new(&[
        "index",
        "omega",
        "multiplicity",
        "term",
        "partial_sum",
        "tail_sequence",
    ]);
    for i in 0..r.len() {
        t.push(vec![
            r.levels[i].into(),
            r.omegas[i].into(),
            r.multiplicities[i].into(),
            r.terms[i].into(),
            r.partial_sums[i].into(),
            r.tail_sequence[i].into(),
        ]);
    }
    t
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SphereExtras {
    pub candidate_taus: Vec<f64>,
    /// k with τ = kπR/2, when τ is a candidate.
    pub k: Option<usize>,
    /// (j, ratio) for the last levels.
    pub asymptotic_ratios: Vec<(usize, f64)>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HadamardReport {
    pub geometry: String,
    pub verdict: Outcome,
    pub c_branch: SeriesSummary,
    pub s_branch: SeriesSummary,
    pub sin_tail: TailStatistic,
    pub sphere: Option<SphereExtras>,
    pub torus: Option<TorusReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DisjointReport {
    pub geometry: String,
    pub sj_hadamard: SeriesSummary,
    pub sj_sj: Option<SeriesSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitOutput {
    pub limit: LimitReport,
    pub decreasing: bool,
    /// |value(τ_last)| / |value(τ_first)|.
    pub decay_ratio: f64,
    pub dominated_bound: DominatedBound,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleOutput {
    pub all_pass: bool,
    pub results: Vec<ValidationResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanOutput {
    pub window: usize,
    pub near_vanishing: Vec<f64>,
    pub points: Vec<crate::diagnostics::ScanPoint>,
}

fn spectrum_table(s: &SpatialSpectrum) -> Table {
    let mut t = Table::new(&["index", "omega", "multiplicity"]);
    for l in &s.levels {
        t.push(vec![
            l.level_index.into(),
            l.omega.into(),
            l.multiplicity.into(),
        ]);
    }
    t
}

fn series_options(c: &RunConfig) -> SeriesOptions {
    SeriesOptions {
        window: c.window,
        thresholds: c.thresholds,
    }
}

fn sphere_extras(radius: f64, c: &RunConfig, last_level: usize) -> SphereExtras {
    let candidate_taus = sphere_candidate_taus(radius, 4);
    let k_real = 2.0 * c.tau / (std::f64::consts::PI * radius);
    let k = k_real.round();
    if k < 1.0 || (k_real - k).abs() > 1e-12 * k_real {
        return SphereExtras {
            candidate_taus,
            k: None,
            asymptotic_ratios: Vec::new(),
            note: Some("tau is not of the form k*pi*R/2".into()),
        };
    }
    let k = k as usize;
    let lo = last_level.saturating_sub(4).max(1);
    match sphere_asymptotic_check(radius, c.mass, k, lo..=last_level) {
        Ok(r) => SphereExtras {
            candidate_taus,
            k: Some(k),
            asymptotic_ratios: r,
            note: None,
        },
        Err(e) => SphereExtras {
            candidate_taus,
            k: Some(k),
            asymptotic_ratios: Vec::new(),
            note: Some(e.to_string()),
        },
    }
}

/// Runs one subcommand, writing its artifacts under `config.out`.
pub fn run(kind: SubcommandKind, config: &RunConfig) -> Result<RunSummary, Failure> {
    config.validate()?;
    std::fs::create_dir_all(&config.out).map_err(|e| Failure::io(&config.out, e))?;
    let mut sink = Sink {
        config,
        name: kind.name(),
        written: Vec::new(),
    };
    let headline = match kind {
        SubcommandKind::Spectrum => {
            let s = config.spectrum()?;
            sink.csv("", &spectrum_table(&s))?;
            sink.json(&SpectrumDocument::from(&s))?;
            format!(
                "{} levels, total multiplicity {}",
                s.len(),
                s.total_multiplicity()
            )
        }
        SubcommandKind::Modes => {
            let s = config.spectrum()?;
            let table = ModeTable::build(&s, config.tau)?;
            let mut t = Table::new(&[
                "index",
                "omega",
                "multiplicity",
                "sin_2wt",
                "sinc_2wt",
                "norm_c2",
                "norm_s2",
                "delta",
                "lambda_plus",
            ]);
            for row in &table.levels {
                let m = &row.constants;
                t.push(vec![
                    row.level.into(),
                    m.omega.into(),
                    row.multiplicity.into(),
                    m.sin2wt.into(),
                    m.sinc2wt.into(),
                    m.norm_c2.into(),
                    m.norm_s2.into(),
                    m.delta.into(),
                    m.lambda_plus.into(),
                ]);
            }
            sink.csv("", &t)?;
            sink.json(&table.levels)?;
            format!("{} rows", table.len())
        }
        SubcommandKind::Hadamard => {
            let s = config.spectrum()?;
            let last = s.len().saturating_sub(1);
            let (c, sb) = nec_series(&s, config.tau, None, last, series_options(config))?;
            let sin_tail = sin_tail_analysis(&s, config.tau, config.window);
            let (sphere, torus) = match s.geometry {
                Geometry::Sphere { radius } => (
                    Some(sphere_extras(radius, config, s.levels[last].level_index)),
                    None,
                ),
                Geometry::Torus { period } => (
                    None,
                    Some(torus_incommensurability(
                        period,
                        config.tau,
                        config.r_max,
                        config.window,
                        Some(config.mass),
                        config.thresholds,
                    )?),
                ),
                Geometry::Custom => (None, None),
            };
            let mut verdicts = vec![c.verdict, sb.verdict];
            if let Some(t) = &torus {
                verdicts.push(t.verdict);
            }
            let verdict = combine(&verdicts);
            sink.csv("_c", &series_table(&c))?;
            sink.csv("_s", &series_table(&sb))?;
            let report = HadamardReport {
                geometry: s.geometry.label(),
                verdict,
                c_branch: (&c).into(),
                s_branch: (&sb).into(),
                sin_tail,
                sphere,
                torus,
            };
            sink.json(&report)?;
            format!(
                "{} (growth ratios {:?}, {:?})",
                outcome_name(verdict),
                c.growth_ratio,
                sb.growth_ratio
            )
        }
        SubcommandKind::Disjoint => {
            let s = config.spectrum()?;
            let last = s.len().saturating_sub(1);
            let h = sj_hadamard_disjointness(&s, config.tau, last, series_options(config))?;
            sink.csv("_sj_hadamard", &series_table(&h))?;
            let sj = match config.tau_prime {
                Some(tp) => {
                    let r = sj_sj_disjointness(&s, config.tau, tp, last, series_options(config))?;
                    sink.csv("_sj_sj", &series_table(&r))?;
                    Some(r)
                }
                None => None,
            };
            let mut headline = format!("sj_hadamard {}", outcome_name(h.verdict.outcome));
            if let Some(r) = &sj {
                headline.push_str(&format!(", sj_sj {}", outcome_name(r.verdict.outcome)));
            }
            sink.json(&DisjointReport {
                geometry: s.geometry.label(),
                sj_hadamard: (&h).into(),
                sj_sj: sj.as_ref().map(Into::into),
            })?;
            headline
        }
        SubcommandKind::Limit => {
            let l = &config.limit;
            let f = bump(l.bump_width, 1.0)?;
            let limit = limit_tau_check(l.omega, &f, &l.taus)?;
            let (fit, check) = default_bound_grids();
            let bound = dominated_bound_check(
                &f,
                config.mass,
                l.bound_power,
                &fit,
                &check,
                l.bound_margin,
            )?;
            let mut t = Table::new(&[
                "tau",
                "delta",
                "kernel_value",
                "plus_convention",
                "minus_convention",
            ]);
            for r in &limit.rows {
                t.push(vec![
                    r.tau.into(),
                    r.delta.into(),
                    r.kernel_value.into(),
                    r.plus_convention.into(),
                    r.minus_convention.into(),
                ]);
            }
            sink.csv("", &t)?;
            let decay_ratio = match (limit.rows.first(), limit.rows.last()) {
                (Some(a), Some(b)) => b.kernel_value.abs() / a.kernel_value.abs(),
                _ => f64::NAN,
            };
            let out = LimitOutput {
                decreasing: limit.decreasing(),
                decay_ratio,
                dominated_bound: bound,
                limit,
            };
            sink.json(&out)?;
            format!(
                "decay ratio {decay_ratio:e}, decreasing: {}",
                out.decreasing
            )
        }
        SubcommandKind::Oracle => {
            let results = run_validation_suite(config.oracle.nodes)?;
            let mut t = Table::new(&["case", "N", "deviation", "pass"]);
            for r in &results {
                t.push(vec![
                    r.case.clone().into(),
                    r.n.into(),
                    r.deviation.into(),
                    r.pass.into(),
                ]);
            }
            sink.csv("", &t)?;
            let all_pass = results.iter().all(|r| r.pass);
            sink.json(&OracleOutput { all_pass, results })?;
            if !all_pass {
                return Err(Failure {
                    status: EXIT_ACCURACY,
                    message: "validation suite: some cases exceeded tolerance".into(),
                });
            }
            "all validation cases pass".to_string()
        }
        SubcommandKind::Scan => {
            let s = config.spectrum()?;
            let sc = &config.scan;
            let taus = tau_grid(sc.tau_min, sc.tau_max, sc.tau_step)?;
            let report = tau_scan(&s, &taus, config.window)?;
            let mut t = Table::new(&["tau", "tail_sup", "tail_mean"]);
            for p in &report.points {
                t.push(vec![p.tau.into(), p.tail_sup.into(), p.tail_mean.into()]);
            }
            sink.csv("", &t)?;
            let near = report.near_vanishing(sc.report_below);
            let headline = format!(
                "{} of {} grid points below {}",
                near.len(),
                taus.len(),
                sc.report_below
            );
            sink.json(&ScanOutput {
                window: report.window,
                near_vanishing: near,
                points: report.points,
            })?;
            headline
        }
    };
    Ok(RunSummary {
        written: sink.written,
        headline,
    })
}

fn outcome_name(o: Outcome) -> &'static str {
    match o {
        Outcome::ConsistentWithSummable => "CONSISTENT_WITH_SUMMABLE",
        Outcome::DivergenceIndicated => "DIVERGENCE_INDICATED",
        Outcome::ExactZero => "EXACT_ZERO",
    }
}

/// Parses `args` (including the program name), runs, prints, and returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let status = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return status;
        }
    };
    let (kind, args) = cli.command.split();
    let outcome = args.resolve().and_then(|c| run(kind, &c));
    match outcome {
        Ok(summary) => {
            println!("{}: {}", kind.name(), summary.headline);
            for p in &summary.written {
                println!("  wrote {}", p.display());
            }
            EXIT_OK
        }
        Err(f) => {
            eprintln!("sjslab {}: {}", kind.name(), f.message);
            f.status
        }
    }
}

/// Sizes the global thread pool from `SJSLAB_THREADS`, if set.
pub fn configure_threads() -> Result<(), String> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => {
            let n: usize = v
                .trim()
                .parse()
                .map_err(|_| format!("{THREADS_ENV} must be a positive integer, got {v:?}"))?;
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| e.to_string())
        }
        Err(_) => Ok(()),
    }
}
