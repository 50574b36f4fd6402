//! Command-line front end.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use polystab_core::exact::{QVec, Rat};
use polystab_core::moment::MomentMapModel;
use polystab_core::presets;
use polystab_core::stability::{self, FutakiOracle, StabilityVerdict, SweepReport};
use polystab_core::toric::{AffineFn, PolytopePencil};
use polystab_core::{DeformationModel, Support};

use crate::error::{CliError, CliResult};
use crate::input::{
    builtin_pencil, from_json_str, int_vec, int_vecs, parse_rat, ConeJson, JobJson, ModelJson, MomentJson,
    PencilJson, ToricOracleJson,
};
use crate::report::{
    rat, rat_list, rat_vec, ConeDualReport, FutakiDocument, ImageDocument, InvariantReport, LimitReport,
    OrbitLimitDocument, PolygonReport, StabilizerDocument, Style, SweepDocument, VerdictDocument, VerdictReport,
    ZeroCertificateReport,
};

#[derive(Debug, Parser)]
#[command(name = "polystab", version, about = "Exact local K-polystability checks for torus-equivariant deformations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dual of a polyhedral cone given as {"dim", "generators"}.
    ConeDual(ConeDualArgs),
    /// Limits of the point along one-parameter subgroups.
    OrbitLimit(OrbitLimitArgs),
    /// Stabiliser, support cone, dual rays and orbit closedness.
    Stabilizer(ModelArgs),
    /// Toric Futaki invariants of a polygon pencil at one parameter value.
    Futaki(FutakiArgs),
    /// Stability verdict at one parameter value.
    Verdict(VerdictArgs),
    /// Verdicts over an interval, with exact wall locations.
    Sweep(SweepArgs),
    /// Zero of the moment map and containment of the shifted cone in its image.
    VerifyImage(ImageArgs),
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Directory receiving the report files.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Add decimal approximations (fields ending in `_approx`).
    #[arg(long)]
    pub float: bool,
}

#[derive(Debug, Args)]
pub struct SourceArgs {
    /// Built-in example, e.g. p1p1-blowup4.
    #[arg(long)]
    pub builtin: Option<String>,
    /// JSON input file.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Corner depth of the built-in pencil.
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<String>,
    /// Support as weight vectors, e.g. "0,1" or "1,0;0,1".
    #[arg(long, allow_hyphen_values = true, conflicts_with = "support_index")]
    pub support: Option<String>,
    /// Support as indices into the weight list, e.g. "2" or "0,2".
    #[arg(long)]
    pub support_index: Option<String>,
}

#[derive(Debug, Args)]
pub struct ConeDualArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct OrbitLimitArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// One-parameter subgroups, e.g. "0,1;1,1". Defaults to the dual cone
    /// generators.
    #[arg(long, allow_hyphen_values = true)]
    pub one_ps: Option<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct FutakiArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub eps: String,
    /// Also interpolate numerator polynomials on this interval, "lo,hi".
    #[arg(long, allow_hyphen_values = true)]
    pub interval: Option<String>,
    /// Affine function "a,b,c" for a·x + b·y + c; repeatable.
    #[arg(long = "hamiltonian", allow_hyphen_values = true)]
    pub hamiltonians: Vec<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerdictArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub eps: String,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// "lo,hi".
    #[arg(long, allow_hyphen_values = true)]
    pub interval: String,
    #[arg(long, default_value_t = 20)]
    pub grid: usize,
    /// Worker threads for the verdicts.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ImageArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Parameter value fixing the base point for built-in examples.
    #[arg(long, allow_hyphen_values = true)]
    pub eps: Option<String>,
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub eta: String,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn read_input(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path.display().to_string(), e))
}

fn parse_list(s: &str) -> CliResult<Vec<Rat>> {
    s.split(',').map(parse_rat).collect()
}

fn parse_vectors(s: &str) -> CliResult<Vec<QVec>> {
    s.split(';').map(|part| parse_list(part).map(QVec::new)).collect()
}

fn parse_interval(s: &str) -> CliResult<(Rat, Rat)> {
    match parse_list(s)?.as_slice() {
        [lo, hi] if lo < hi => Ok((lo.clone(), hi.clone())),
        [_, _] => Err(CliError::Input(format!("interval {s:?} is empty"))),
        _ => Err(CliError::Input(format!("interval must be \"lo,hi\", got {s:?}"))),
    }
}

fn parse_affine(s: &str) -> CliResult<AffineFn> {
    match parse_list(s)?.as_slice() {
        [a, b, c] => Ok(AffineFn::new(a.clone(), b.clone(), c.clone())),
        _ => Err(CliError::Input(format!("hamiltonian must be \"a,b,c\", got {s:?}"))),
    }
}

/// A model together with the oracle that belongs to it, if any.
struct Loaded {
    model: DeformationModel,
    oracle: Option<FutakiOracle>,
}

impl SourceArgs {
    fn delta(&self) -> CliResult<Option<Rat>> {
        self.delta.as_deref().map(parse_rat).transpose()
    }

    fn builtin_or_input(&self) -> CliResult<Either<'_>> {
        match (&self.builtin, &self.input) {
            (Some(name), None) => Ok(Either::Builtin(name)),
            (None, Some(path)) => {
                if self.delta.is_some() {
                    return Err(CliError::Input("--delta applies to built-in examples only".into()));
                }
                Ok(Either::Input(read_input(path)?))
            }
            _ => Err(CliError::Input("exactly one of --builtin and --input is required".into())),
        }
    }

    fn builtin_model(&self, name: &str) -> CliResult<Loaded> {
        let pencil = builtin_pencil(name, self.delta()?.as_ref())?;
        let oracle = FutakiOracle::toric(pencil, presets::p1p1_hamiltonians().to_vec())?;
        let weights = presets::cross_weights();
        let support = Support::new(vec![presets::EXAMPLE_SUPPORT_INDEX]);
        let model = DeformationModel::with_support(2, weights, &support, None)?;
        Ok(Loaded { model, oracle: Some(oracle) })
    }

    /// Applies `--support` / `--support-index`: coefficient 1 on the chosen
    /// weights, 0 elsewhere.
    fn apply_support(&self, model: DeformationModel) -> CliResult<DeformationModel> {
        let indices = if let Some(s) = &self.support {
            parse_vectors(s)?
                .iter()
                .map(|v| {
                    model
                        .weights()
                        .iter()
                        .position(|w| w == v)
                        .ok_or_else(|| CliError::Input(format!("{v} is not one of the weights")))
                })
                .collect::<CliResult<Vec<_>>>()?
        } else if let Some(s) = &self.support_index {
            s.split(',')
                .map(|x| {
                    x.trim()
                        .parse::<usize>()
                        .map_err(|_| CliError::Input(format!("not a weight index: {x:?}")))
                })
                .collect::<CliResult<Vec<_>>>()?
        } else {
            return Ok(model);
        };
        let gram = model.gram_input().cloned();
        Ok(DeformationModel::with_support(
            model.dim_t(),
            model.weights().to_vec(),
            &Support::new(indices),
            gram,
        )?)
    }

    /// Model for commands that do not need an oracle: a model document or
    /// any document with a `model` field.
    fn load_model(&self) -> CliResult<Loaded> {
        let loaded = match self.builtin_or_input()? {
            Either::Builtin(name) => self.builtin_model(name)?,
            Either::Input(text) => {
                let value: serde_json::Value = from_json_str(&text)?;
                let model: ModelJson = match value.get("model") {
                    Some(m) => serde_json::from_value(m.clone())?,
                    None => serde_json::from_value(value)?,
                };
                Loaded { model: model.to_model()?, oracle: None }
            }
        };
        Ok(Loaded { model: self.apply_support(loaded.model)?, ..loaded })
    }

    fn load_job(&self) -> CliResult<(DeformationModel, FutakiOracle)> {
        let loaded = match self.builtin_or_input()? {
            Either::Builtin(name) => self.builtin_model(name)?,
            Either::Input(text) => {
                let job: JobJson = from_json_str(&text)?;
                let model = job.model.to_model()?;
                let oracle = job.oracle.to_oracle(model.dim_t())?;
                Loaded { model, oracle: Some(oracle) }
            }
        };
        let oracle = loaded.oracle.expect("both sources provide an oracle");
        Ok((self.apply_support(loaded.model)?, oracle))
    }

    fn load_pencil(&self) -> CliResult<(PolytopePencil, Option<Vec<AffineFn>>)> {
        match self.builtin_or_input()? {
            Either::Builtin(name) => Ok((builtin_pencil(name, self.delta()?.as_ref())?, None)),
            Either::Input(text) => {
                let value: serde_json::Value = from_json_str(&text)?;
                if value.get("pencil").is_some() {
                    let t: ToricOracleJson = serde_json::from_value(value)?;
                    let hs = t
                        .hamiltonians
                        .as_ref()
                        .map(|hs| hs.iter().map(crate::input::affine).collect::<CliResult<Vec<_>>>())
                        .transpose()?;
                    Ok((t.pencil.to_pencil()?, hs))
                } else {
                    let p: PencilJson = serde_json::from_value(value)?;
                    Ok((p.to_pencil()?, None))
                }
            }
        }
    }
}

enum Either<'a> {
    Builtin(&'a str),
    Input(String),
}

fn support_vec(m: &DeformationModel) -> Vec<usize> {
    m.support().indices().to_vec()
}

/// Prints the report and, with `--out`, writes it as `<name>.json`.
fn emit<T: Serialize>(out: &mut dyn Write, output: &OutputArgs, name: &str, report: &T) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(report).expect("reports serialize");
    text.push('\n');
    if let Some(dir) = &output.out {
        write_file(dir, &format!("{name}.json"), text.as_bytes())?;
    }
    out.write_all(text.as_bytes()).map_err(|e| CliError::io("<stdout>", e))
}

fn write_file(dir: &Path, file: &str, bytes: &[u8]) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir.display().to_string(), e))?;
    let path = dir.join(file);
    fs::write(&path, bytes).map_err(|e| CliError::io(path.display().to_string(), e))
}

fn style(o: &OutputArgs) -> Style {
    Style { float: o.float }
}

fn cone_dual(args: &ConeDualArgs, out: &mut dyn Write) -> CliResult<()> {
    let cone: ConeJson = from_json_str(&read_input(&args.input)?)?;
    let report = ConeDualReport::new(&cone.to_cone()?)?;
    emit(out, &args.output, "cone-dual", &report)
}

fn orbit_limit(args: &OrbitLimitArgs, out: &mut dyn Write) -> CliResult<()> {
    let m = args.source.load_model()?.model;
    let directions = match &args.one_ps {
        Some(s) => parse_vectors(s)?
            .iter()
            .map(|v| v.primitive_direction().map_err(CliError::from))
            .collect::<CliResult<Vec<_>>>()?,
        None => m.destabilizer_candidates()?,
    };
    let limits = directions
        .iter()
        .map(|v| {
            let limit = m.one_ps_limit(v)?;
            Ok(LimitReport {
                one_ps: int_vec(v)?,
                exists: limit.is_some(),
                support: limit.as_ref().map(support_vec),
                limit: limit.as_ref().map(ModelJson::from_model).transpose()?,
            })
        })
        .collect::<CliResult<Vec<_>>>()?;
    let report = OrbitLimitDocument {
        model: ModelJson::from_model(&m)?,
        support: support_vec(&m),
        limits,
    };
    emit(out, &args.output, "orbit-limit", &report)
}

fn stabilizer(args: &ModelArgs, out: &mut dyn Write) -> CliResult<()> {
    let m = args.source.load_model()?.model;
    let origin = m.support().is_empty();
    let report = StabilizerDocument {
        model: ModelJson::from_model(&m)?,
        support: support_vec(&m),
        stabilizer: int_vecs(&m.stabilizer_algebra())?,
        orbit_closed: m.is_orbit_closed(),
        support_cone: if origin { None } else { Some(int_vecs(m.support_cone()?.canonicalized().generators())?) },
        destabilizer_candidates: if origin { Vec::new() } else { int_vecs(&m.destabilizer_candidates()?)? },
        quotient_rays: if origin { Vec::new() } else { int_vecs(&m.quotient_rays()?)? },
        zero_in_orbit_closure: m.zero_in_orbit_closure().as_ref().map(int_vec).transpose()?,
    };
    emit(out, &args.output, "stabilizer", &report)
}

fn futaki(args: &FutakiArgs, out: &mut dyn Write) -> CliResult<()> {
    let (pencil, from_file) = args.source.load_pencil()?;
    let eps = parse_rat(&args.eps)?;
    let polygon = pencil.realize(&eps)?;
    let named: Vec<(String, AffineFn)> = if !args.hamiltonians.is_empty() {
        args.hamiltonians
            .iter()
            .enumerate()
            .map(|(k, s)| Ok((format!("h{k}"), parse_affine(s)?)))
            .collect::<CliResult<_>>()?
    } else {
        let hs = from_file.unwrap_or_else(|| presets::p1p1_hamiltonians().to_vec());
        hs.into_iter().enumerate().map(|(k, f)| (format!("e{}", k + 1), f)).collect()
    };
    let st = style(&args.output);
    let interval = args.interval.as_deref().map(parse_interval).transpose()?;
    let mut invariants = Vec::new();
    for (name, f) in &named {
        let mut inv = InvariantReport::new(name, &polygon, f, st);
        if let Some((lo, hi)) = &interval {
            inv.numerator = Some(rat_list(pencil.futaki_pencil_numerator(f, lo, hi)?.coeffs()));
        }
        invariants.push(inv);
    }
    let report = FutakiDocument {
        eps: rat(&eps),
        polygon: PolygonReport::new(&polygon)?,
        invariants,
        combinatorially_stable: interval.as_ref().map(|(lo, hi)| pencil.is_combinatorially_stable(lo, hi)),
        interval: interval.map(|(lo, hi)| [rat(&lo), rat(&hi)]),
    };
    emit(out, &args.output, "futaki", &report)
}

fn verdict(args: &VerdictArgs, out: &mut dyn Write) -> CliResult<()> {
    let (m, oracle) = args.source.load_job()?;
    let eps = parse_rat(&args.eps)?;
    let v = stability::verdict(&m, &oracle, &eps)?;
    let report = VerdictDocument {
        model: ModelJson::from_model(&m)?,
        support: support_vec(&m),
        verdict: VerdictReport::new(&v, style(&args.output))?,
    };
    emit(out, &args.output, "verdict", &report)
}

/// Verdicts at the grid points, on `jobs` threads, in grid order.
pub fn sweep_parallel(
    m: &DeformationModel,
    oracle: &FutakiOracle,
    lo: &Rat,
    hi: &Rat,
    grid: usize,
    jobs: usize,
) -> CliResult<SweepReport> {
    if jobs == 0 {
        return Err(CliError::Input("--jobs must be positive".into()));
    }
    let eps = stability::sweep_grid(lo, hi, grid)?;
    let series = stability::sweep_series(m, oracle, lo, hi)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Input(e.to_string()))?;
    let points: Vec<StabilityVerdict> = pool.install(|| {
        eps.par_iter()
            .map(|e| stability::verdict(m, oracle, e))
            .collect::<Result<Vec<_>, _>>()
    })?;
    Ok(SweepReport::assemble(lo.clone(), hi.clone(), grid, series, points))
}

/// Plot-ready table: one row per grid point.
pub fn sweep_csv(doc: &SweepDocument) -> CliResult<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["eps".to_string(), "eps_exact".to_string()];
    for s in &doc.series {
        header.push(format!("fut_{}", s.name));
        header.push(format!("fut_{}_exact", s.name));
    }
    header.push("status".into());
    w.write_record(&header).map_err(|e| CliError::Input(e.to_string()))?;
    for p in &doc.points {
        let decimal = |s: &str| parse_rat(s).map(|r| r.to_decimal(crate::report::APPROX_DIGITS));
        let mut row = vec![decimal(&p.eps)?, p.eps.clone()];
        for wit in &p.witnesses {
            row.push(decimal(&wit.fut)?);
            row.push(wit.fut.clone());
        }
        row.push(p.status.clone());
        w.write_record(&row).map_err(|e| CliError::Input(e.to_string()))?;
    }
    w.into_inner().map_err(|e| CliError::Input(e.to_string()))
}

fn sweep(args: &SweepArgs, out: &mut dyn Write) -> CliResult<()> {
    let (m, oracle) = args.source.load_job()?;
    let (lo, hi) = parse_interval(&args.interval)?;
    if let FutakiOracle::Toric { pencil, .. } = &oracle {
        if !pencil.is_combinatorially_stable(&lo, &hi) {
            let breaks: Vec<String> = pencil
                .breakpoints()
                .iter()
                .filter(|b| **b >= lo && **b <= hi)
                .map(rat)
                .collect();
            return Err(CliError::Precondition(format!(
                "pencil changes combinatorial type in [{lo}, {hi}] at eps = {}",
                breaks.join(", ")
            )));
        }
    }
    let report = sweep_parallel(&m, &oracle, &lo, &hi, args.grid, args.jobs)?;
    let doc = SweepDocument::new(ModelJson::from_model(&m)?, support_vec(&m), &report, style(&args.output))?;
    if let Some(dir) = &args.output.out {
        write_file(dir, "sweep.csv", &sweep_csv(&doc)?)?;
    }
    emit(out, &args.output, "sweep", &doc)
}

fn verify_image(args: &ImageArgs, out: &mut dyn Write) -> CliResult<()> {
    let eta = parse_rat(&args.eta)?;
    let mm = match args.source.builtin_or_input()? {
        Either::Builtin(_) => {
            let eps = args
                .eps
                .as_deref()
                .ok_or_else(|| CliError::Input("--eps is required with --builtin".into()))?;
            let eps = parse_rat(eps)?;
            let (m, oracle) = args.source.load_job()?;
            let v = stability::verdict(&m, &oracle, &eps)?;
            let base = v.base_value.expect("toric oracles determine the base value");
            MomentMapModel::with_default_masses(base, m)?
        }
        Either::Input(text) => {
            if args.eps.is_some() {
                return Err(CliError::Input("--eps applies to built-in examples only".into()));
            }
            let doc: MomentJson = from_json_str(&text)?;
            let mm = doc.to_moment()?;
            let model = args.source.apply_support(mm.model().clone())?;
            if model != *mm.model() {
                MomentMapModel::with_default_masses(mm.base_value().clone(), model)?
            } else {
                mm
            }
        }
    };
    let targets = mm.default_targets(&eta)?;
    let containment = mm.check_image_containment(&eta, &targets)?;
    let (eta_s, outcomes, contained) = ImageDocument::containment(&containment)?;
    let moment_value = mm.moment_value();
    let report = ImageDocument {
        model: ModelJson::from_model(mm.model())?,
        base_value: rat_vec(mm.base_value()),
        masses: rat_list(mm.masses()),
        moment_value_approx: style(&args.output).approx_vec(&moment_value),
        moment_value: rat_vec(&moment_value),
        eta: eta_s,
        zero_certificate: ZeroCertificateReport::new(&mm.find_zero_in_orbit_closure()?)?,
        outcomes,
        sigma_eta_contained: contained,
    };
    emit(out, &args.output, "verify-image", &report)
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> CliResult<()> {
    match &cli.command {
        Command::ConeDual(a) => cone_dual(a, out),
        Command::OrbitLimit(a) => orbit_limit(a, out),
        Command::Stabilizer(a) => stabilizer(a, out),
        Command::Futaki(a) => futaki(a, out),
        Command::Verdict(a) => verdict(a, out),
        Command::Sweep(a) => sweep(a, out),
        Command::VerifyImage(a) => verify_image(a, out),
    }
}

/// Parses arguments and runs the command; returns the exit status after
/// writing the report to `out` or an error object to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let failure = CliError::Input(e.to_string().trim_end().to_string());
            let _ = writeln!(err, "{}", failure.to_json());
            return failure.exit_code();
        }
    };
    match execute(&cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "{}", e.to_json());
            e.exit_code()
        }
    }
}
