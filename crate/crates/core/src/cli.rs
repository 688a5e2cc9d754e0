//! The `sphereloci` command line.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::classify::classify_2d;
use crate::config::{ConfigError, Format, JobConfig, Problem};
use crate::export::{self, Manifest, PointRecord, ResidualStats};
use crate::extract::{
    count_branches, count_mesh_components, count_polyline_components, euler_characteristic, mesh_3d,
    normalized_residual, trace_2d, GridSpec, Polyline, RefineOptions, ScalarField,
};
use crate::geometry::SimplexPair;
use crate::locus::{angle_cos_sq, AngleParam, LocusFunction, LocusKind};
use crate::oracle::{count_clusters, oracle_cloud, set_distance};
use crate::pseudo::{Part, PseudoConfig, PseudoField, PseudoKind};
use crate::Error;

#[derive(Debug, Parser)]
#[command(name = "sphereloci", version, about = "Loci of common points of sphere families through two simplexes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Trace a plane curve.
    Trace(Common),
    /// Mesh a surface in space.
    Mesh(Common),
    /// Trace one part of a pseudo-Euclidean slice at fixed t.
    Slice {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = PartArg::Re)]
        part: PartArg,
        /// Overrides `t` from the config.
        #[arg(long, allow_hyphen_values = true)]
        t: Option<f64>,
    },
    /// Sample the locus from the sphere families directly.
    Oracle {
        #[command(flatten)]
        common: Common,
        /// CSV from an earlier run to measure the set distance against.
        #[arg(long)]
        against: Option<PathBuf>,
    },
    /// Degeneracy flags of a plane configuration.
    Classify(Common),
    /// Locus function values at one point.
    Eval {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        point: Vec<f64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PartArg {
    Re,
    Im,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    #[arg(long)]
    pub config: PathBuf,
    /// Cells per axis.
    #[arg(long)]
    pub resolution: Option<usize>,
    /// `min,max` per axis.
    #[arg(long = "box", value_delimiter = ',', allow_hyphen_values = true)]
    pub bounds: Option<Vec<f64>>,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long)]
    pub threads: Option<usize>,
    /// Jitter seed for the oracle sweep.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Residual bound for refined vertices.
    #[arg(long)]
    pub tolerance: Option<f64>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{context}: {source}")]
    Io {
        context: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Domain(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(Error::DegenerateSimplex(_) | Error::IdenticalSimplexes) => 2,
            CliError::Domain(Error::EmptyZeroSet) => 3,
            _ => 1,
        }
    }
}

fn config_error(field: &str, message: impl Into<String>) -> CliError {
    CliError::Config(ConfigError::Invalid {
        field: field.into(),
        message: message.into(),
    })
}

/// What a finished command produced.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub manifest: Option<Manifest>,
    pub written: Vec<PathBuf>,
    pub stdout: String,
    pub warnings: Vec<String>,
    /// Wall time of the run; kept out of the manifest so reruns match byte for byte.
    pub elapsed: std::time::Duration,
}

/// Runs `cli` inside a thread pool of the requested size.
pub fn run(cli: &Cli) -> Result<Report, CliError> {
    let common = match &cli.command {
        Command::Trace(c) | Command::Mesh(c) | Command::Classify(c) => c,
        Command::Slice { common, .. } | Command::Oracle { common, .. } | Command::Eval { common, .. } => common,
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = common.threads {
        if n == 0 {
            return Err(config_error("--threads", "must be positive"));
        }
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| config_error("--threads", e.to_string()))?;
    pool.install(|| dispatch(cli))
}

struct Job {
    config: JobConfig,
    stem: String,
    common: Common,
    opts: RefineOptions,
    started: Instant,
}

impl Job {
    fn load(common: &Common) -> Result<Self, CliError> {
        let config = JobConfig::load(&common.config)?;
        let stem = common
            .config
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "run".into());
        let mut opts = RefineOptions::default();
        if let Some(t) = common.tolerance {
            if !(t > 0.0 && t.is_finite()) {
                return Err(config_error("--tolerance", "must be a positive number"));
            }
            opts.tolerance = t;
        }
        Ok(Self {
            config,
            stem,
            common: common.clone(),
            opts,
            started: Instant::now(),
        })
    }

    fn problem(&self) -> Result<Problem, CliError> {
        Ok(self.config.problem()??)
    }

    fn grid(&self) -> Result<GridSpec, CliError> {
        Ok(self
            .config
            .grid(self.common.resolution, self.common.bounds.as_deref())?)
    }

    fn manifest(&self, command: &str, grid: Option<&GridSpec>) -> Manifest {
        let mut m = Manifest::new();
        m.push("command", command)
            .push(
                "config",
                self.common
                    .config
                    .file_name()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_default(),
            )
            .push("dim", self.config.dim);
        if let Some(g) = grid {
            m.push("grid_box", describe_box(g))
                .push(
                    "grid_resolution",
                    g.resolution().iter().map(|r| r.to_string()).collect::<Vec<_>>().join("x"),
                )
                .push("refine_tolerance", format!("{:e}", self.opts.tolerance));
        }
        m
    }

    /// Output targets of the given formats, defaulting to `<stem><suffix>.<ext>`.
    fn targets(&self, allowed: &[Format], defaults: &[Format], suffix: &str) -> Result<Vec<(Format, PathBuf)>, CliError> {
        if self.config.outputs.is_empty() {
            return Ok(defaults
                .iter()
                .map(|&f| (f, self.common.out.join(format!("{}{suffix}.{}", self.stem, extension(f)))))
                .collect());
        }
        let mut out = Vec::new();
        for (k, o) in self.config.outputs.iter().enumerate() {
            if !allowed.contains(&o.format) {
                return Err(config_error(
                    &format!("outputs[{k}].format"),
                    format!("{} output does not apply to this command", extension(o.format)),
                ));
            }
            let path = if o.path.is_absolute() {
                o.path.clone()
            } else {
                self.common.out.join(&o.path)
            };
            out.push((o.format, path));
        }
        Ok(out)
    }

    fn finish(&self, manifest: Manifest, name: &str, report: &mut Report) -> Result<(), CliError> {
        report.elapsed = self.started.elapsed();
        let path = self.common.out.join(name);
        write(&path, &manifest.render())?;
        report.written.push(path);
        report.manifest = Some(manifest);
        Ok(())
    }
}

fn extension(f: Format) -> &'static str {
    match f {
        Format::Svg => "svg",
        Format::Obj => "obj",
        Format::Csv => "csv",
    }
}

fn describe_box(g: &GridSpec) -> String {
    g.bounds()
        .iter()
        .map(|(a, b)| format!("[{a},{b}]"))
        .collect::<Vec<_>>()
        .join("x")
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|source| CliError::Io {
            context: format!("cannot create {}", dir.display()),
            source,
        })?;
    }
    std::fs::write(path, text).map_err(|source| CliError::Io {
        context: format!("cannot write {}", path.display()),
        source,
    })
}

fn describe_kind(kind: LocusKind) -> String {
    match kind {
        LocusKind::G { i, j } => format!("G_{i}{j}"),
        LocusKind::GSumSq => "sum_G_sq".into(),
        LocusKind::H => "H".into(),
        LocusKind::F => "F".into(),
    }
}

fn describe_pseudo(kind: PseudoKind) -> &'static str {
    match kind {
        PseudoKind::GSumSq => "sum_G_sq",
        PseudoKind::H => "H",
        PseudoKind::F => "F",
    }
}

fn real_problem(job: &Job) -> Result<(SimplexPair, AngleParam, LocusKind), CliError> {
    match job.problem()? {
        Problem::Real { pair, angle, kind } => Ok((pair, angle, kind)),
        Problem::Slice { .. } => Err(config_error("t", "only the slice and eval commands take a pseudo-Euclidean slice")),
    }
}

/// `|cos² − target|` of the achieved angle, where the angle is defined.
fn angle_error(pair: &SimplexPair, angle: AngleParam, p: &[f64]) -> Option<(f64, f64)> {
    let c = angle_cos_sq(pair, p).ok()?;
    Some((c, (c - angle.cos_sq()?).abs()))
}

fn flags_into(manifest: &mut Manifest, pair: &SimplexPair) -> Result<(), CliError> {
    let class = classify_2d(pair)?;
    for (name, value) in class.flags() {
        manifest.push(name, value);
    }
    manifest
        .push("angle_between_segments", format!("{:.12}", class.angle_between_segments))
        .push("exact_predicates", class.exact);
    Ok(())
}

fn dispatch(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Trace(c) => trace(c),
        Command::Mesh(c) => mesh(c),
        Command::Slice { common, part, t } => slice(common, *part, *t),
        Command::Oracle { common, against } => oracle(common, against.as_deref()),
        Command::Classify(c) => classify(c),
        Command::Eval { common, point } => eval(common, point),
    }
}

/// Writes the manifest for an empty zero set before reporting it.
fn empty_zero_set(job: &Job, mut manifest: Manifest, name: &str, report: &mut Report) -> CliError {
    manifest.push("status", "empty_zero_set");
    if let Err(e) = job.finish(manifest, name, report) {
        return e;
    }
    Error::EmptyZeroSet.into()
}

fn trace(common: &Common) -> Result<Report, CliError> {
    let job = Job::load(common)?;
    let (pair, angle, kind) = real_problem(&job)?;
    if pair.dim() != 2 {
        return Err(config_error("dim", "trace needs dim 2; use mesh for dim 3"));
    }
    let grid = job.grid()?;
    let targets = job.targets(&[Format::Svg, Format::Csv], &[Format::Csv, Format::Svg], "")?;
    let field = LocusFunction::new(pair.clone(), angle, kind)?;
    let mut report = Report::default();
    let mut m = job.manifest("trace", Some(&grid));
    m.push("function", describe_kind(kind));
    let manifest_name = format!("{}.manifest.txt", job.stem);
    let polylines = match trace_2d(&field, &grid, &job.opts) {
        Ok(p) => p,
        Err(Error::EmptyZeroSet) => return Err(empty_zero_set(&job, m, &manifest_name, &mut report)),
        Err(e) => return Err(e.into()),
    };
    let records = polyline_records(&polylines, |p| angle_error(&pair, angle, p).map(|(c, _)| c));
    summarize_curves(&mut m, &polylines, &grid, &job.opts);
    let worst_angle = polylines
        .iter()
        .flat_map(|l| l.points.iter())
        .filter_map(|p| angle_error(&pair, angle, p).map(|(_, e)| e))
        .fold(0.0, f64::max);
    m.push("angle_error_max", format!("{worst_angle:e}"));
    flags_into(&mut m, &pair)?;
    let segments = [&pair.first, &pair.second].map(|s| {
        let v = s.vertices();
        [[v[0][0], v[0][1]], [v[1][0], v[1][1]]]
    });
    for (format, path) in targets {
        let text = match format {
            Format::Csv => export::csv(&records, 2),
            _ => export::svg(&polylines, &grid, &segments),
        };
        write(&path, &text)?;
        report.written.push(path);
    }
    job.finish(m, &manifest_name, &mut report)?;
    Ok(report)
}

fn polyline_records(polylines: &[Polyline], cos_sq: impl Fn(&[f64]) -> Option<f64>) -> Vec<PointRecord> {
    polylines
        .iter()
        .flat_map(|l| l.points.iter().zip(&l.residuals))
        .map(|(p, &r)| PointRecord {
            coords: p.to_vec(),
            residual: r,
            cos_sq: cos_sq(p),
        })
        .collect()
}

fn summarize_curves(m: &mut Manifest, polylines: &[Polyline], grid: &GridSpec, opts: &RefineOptions) {
    let points: Vec<[f64; 2]> = polylines.iter().flat_map(|l| l.points.iter().copied()).collect();
    let h = grid.spacing(0).max(grid.spacing(1));
    m.push("polylines", polylines.len())
        .push("closed_polylines", polylines.iter().filter(|l| l.closed).count())
        .push("vertices", points.len())
        .push("components", count_polyline_components(polylines, 2.0 * grid.cell_diagonal()))
        .push("branches", count_branches(&points, 3.0 * h, BRANCH_ANGLE))
        .push_stats(&ResidualStats::of(
            polylines.iter().flat_map(|l| l.residuals.iter().copied()),
            opts.tolerance,
        ));
}

/// Tangent agreement required to link two samples of one branch, in radians.
pub const BRANCH_ANGLE: f64 = 0.3;

fn mesh(common: &Common) -> Result<Report, CliError> {
    let job = Job::load(common)?;
    let (pair, angle, kind) = real_problem(&job)?;
    if pair.dim() != 3 {
        return Err(config_error("dim", "mesh needs dim 3; use trace for dim 2"));
    }
    let grid = job.grid()?;
    let targets = job.targets(&[Format::Obj, Format::Csv], &[Format::Csv, Format::Obj], "")?;
    let field = LocusFunction::new(pair.clone(), angle, kind)?;
    let mut report = Report::default();
    let mut m = job.manifest("mesh", Some(&grid));
    m.push("function", describe_kind(kind));
    let manifest_name = format!("{}.manifest.txt", job.stem);
    let surface = match mesh_3d(&field, &grid, &job.opts) {
        Ok(s) => s,
        Err(Error::EmptyZeroSet) => return Err(empty_zero_set(&job, m, &manifest_name, &mut report)),
        Err(e) => return Err(e.into()),
    };
    m.push("vertices", surface.vertices.len())
        .push("triangles", surface.triangles.len())
        .push("components", count_mesh_components(&surface))
        .push_stats(&ResidualStats::of(surface.residuals.iter().copied(), job.opts.tolerance));
    match euler_characteristic(&surface) {
        Ok(chi) => m.push("euler_characteristic", chi),
        Err(Error::OpenMesh(edges)) => m.push("euler_characteristic", format!("undefined (open mesh, {edges} boundary edges)")),
        Err(e) => return Err(e.into()),
    };
    let worst_angle = surface
        .vertices
        .iter()
        .filter_map(|p| angle_error(&pair, angle, p).map(|(_, e)| e))
        .fold(0.0, f64::max);
    m.push("angle_error_max", format!("{worst_angle:e}"));
    for (format, path) in targets {
        let text = match format {
            Format::Obj => export::obj(&surface),
            _ => {
                let records: Vec<PointRecord> = surface
                    .vertices
                    .iter()
                    .zip(&surface.residuals)
                    .map(|(p, &r)| PointRecord {
                        coords: p.to_vec(),
                        residual: r,
                        cos_sq: angle_error(&pair, angle, p).map(|(c, _)| c),
                    })
                    .collect();
                export::csv(&records, 3)
            }
        };
        write(&path, &text)?;
        report.written.push(path);
    }
    job.finish(m, &manifest_name, &mut report)?;
    Ok(report)
}

fn slice_problem(config: &JobConfig) -> Result<(PseudoConfig, PseudoKind), CliError> {
    if config.t.is_none() {
        return Err(config_error("t", "slice needs a slice parameter (set `t` or pass --t)"));
    }
    if config.dim != 3 {
        return Err(config_error("dim", "slices are traced for dim 3"));
    }
    match config.problem()?? {
        Problem::Slice { config, kind } => Ok((config, kind)),
        Problem::Real { .. } => unreachable!("t is set"),
    }
}

fn slice(common: &Common, part: PartArg, t: Option<f64>) -> Result<Report, CliError> {
    let mut job = Job::load(common)?;
    if t.is_some() {
        job.config.t = t;
    }
    let (config, kind) = slice_problem(&job.config)?;
    let grid = job.grid()?;
    let targets = job.targets(&[Format::Svg, Format::Csv], &[Format::Csv, Format::Svg], "")?;
    let part = match part {
        PartArg::Re => Part::Re,
        PartArg::Im => Part::Im,
    };
    let mut report = Report {
        warnings: config.warnings(),
        ..Default::default()
    };
    let field = PseudoField { config: &config, kind, part };
    let mut m = job.manifest("slice", Some(&grid));
    m.push("function", describe_pseudo(kind))
        .push("part", if part == Part::Re { "re" } else { "im" })
        .push("t", config.t)
        .push("input_warnings", report.warnings.len());
    let manifest_name = format!("{}.manifest.txt", job.stem);
    let polylines = match trace_2d(&field, &grid, &job.opts) {
        Ok(p) => p,
        Err(Error::EmptyZeroSet) => return Err(empty_zero_set(&job, m, &manifest_name, &mut report)),
        Err(e) => return Err(e.into()),
    };
    summarize_curves(&mut m, &polylines, &grid, &job.opts);
    let records = polyline_records(&polylines, |_| None);
    for (format, path) in targets {
        let text = match format {
            Format::Csv => export::csv(&records, 2),
            _ => export::svg(&polylines, &grid, &[]),
        };
        write(&path, &text)?;
        report.written.push(path);
    }
    job.finish(m, &manifest_name, &mut report)?;
    Ok(report)
}

fn oracle(common: &Common, against: Option<&Path>) -> Result<Report, CliError> {
    let job = Job::load(common)?;
    let (pair, angle, kind) = real_problem(&job)?;
    let grid = job.grid()?;
    // the cloud table never clobbers the outputs of an extraction run
    let csv_path = job.common.out.join(format!("{}.oracle.csv", job.stem));
    let mut sweep = job.config.sweep(common.seed);
    sweep.bounds = Some(grid.bounds().to_vec());
    let cloud = oracle_cloud(&pair, angle, &sweep)?;
    let field = LocusFunction::new(pair.clone(), angle, kind)?;
    let mut report = Report::default();
    let mut m = job.manifest("oracle", Some(&grid));
    m.push("function", describe_kind(kind))
        .push("sweep_samples", sweep.samples)
        .push("sweep_tolerance", format!("{:e}", sweep.tolerance))
        .push(
            "sweep_seed",
            sweep.jitter_seed.map(|s| s.to_string()).unwrap_or_else(|| "none".into()),
        )
        .push("cloud_points", cloud.len());
    let manifest_name = format!("{}.oracle.manifest.txt", job.stem);
    if cloud.is_empty() {
        return Err(empty_zero_set(&job, m, &manifest_name, &mut report));
    }
    let records: Vec<PointRecord> = cloud
        .points
        .iter()
        .zip(&cloud.cos_sq)
        .map(|(p, &c)| {
            let (v, s) = field.sample(p);
            PointRecord {
                coords: p.clone(),
                residual: normalized_residual(v, s),
                cos_sq: Some(c),
            }
        })
        .collect();
    m.push("clusters", count_clusters(&cloud.points, 2.0 * grid.cell_diagonal()));
    if pair.dim() == 2 {
        let pts: Vec<[f64; 2]> = cloud.points.iter().map(|p| [p[0], p[1]]).collect();
        let h = grid.spacing(0).max(grid.spacing(1));
        m.push("branches", count_branches(&pts, 3.0 * h, BRANCH_ANGLE));
    }
    m.push_stats(&ResidualStats::of(records.iter().map(|r| r.residual), sweep.tolerance));
    if let Some(path) = against {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            context: format!("cannot read {}", path.display()),
            source,
        })?;
        let reference = export::read_csv_points(&text, pair.dim()).map_err(|e| config_error("--against", e))?;
        let (to_curve, to_cloud) = set_distance(&cloud.points, &reference)?;
        let diag = grid.cell_diagonal();
        m.push("against", path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default())
            .push("distance_cloud_to_reference", format!("{to_curve:e}"))
            .push("distance_reference_to_cloud", format!("{to_cloud:e}"))
            .push("cell_diagonal", format!("{diag:e}"))
            .push("within_two_cells", to_curve.max(to_cloud) < 2.0 * diag);
    }
    write(&csv_path, &export::csv(&records, pair.dim()))?;
    report.written.push(csv_path);
    job.finish(m, &manifest_name, &mut report)?;
    Ok(report)
}

fn classify(common: &Common) -> Result<Report, CliError> {
    let job = Job::load(common)?;
    let (pair, _, _) = real_problem(&job)?;
    if pair.dim() != 2 {
        return Err(config_error("dim", "classification covers plane configurations (dim 2)"));
    }
    let mut flags = Manifest::new();
    flags_into(&mut flags, &pair)?;
    let mut m = job.manifest("classify", None);
    flags_into(&mut m, &pair)?;
    let mut report = Report {
        stdout: flags.render(),
        ..Default::default()
    };
    job.finish(m, &format!("{}.classify.manifest.txt", job.stem), &mut report)?;
    Ok(report)
}

fn eval(common: &Common, point: &[f64]) -> Result<Report, CliError> {
    let job = Job::load(common)?;
    let mut out = String::new();
    let mut line = |k: &str, v: String| out.push_str(&format!("{k}: {v}\n"));
    match job.problem()? {
        Problem::Real { pair, angle, .. } => {
            let n = pair.dim();
            if point.len() != n {
                return Err(config_error("--point", format!("expected {n} coordinates, got {}", point.len())));
            }
            for i in 1..=n {
                for j in i + 1..=n {
                    let f = LocusFunction::new(pair.clone(), AngleParam::Tangent, LocusKind::G { i, j })?;
                    let (v, s) = f.value_and_scale(point)?;
                    line(&format!("G_{i}{j}"), format!("{v:e}"));
                    line(&format!("G_{i}{j}_residual"), format!("{:e}", normalized_residual(v, s)));
                }
            }
            let mut kinds = vec![(AngleParam::Tangent, LocusKind::GSumSq), (AngleParam::Orthogonal, LocusKind::H)];
            if matches!(angle, AngleParam::General { .. }) {
                kinds.push((angle, LocusKind::F));
            }
            for (a, kind) in kinds {
                let (v, s) = LocusFunction::new(pair.clone(), a, kind)?.value_and_scale(point)?;
                line(&describe_kind(kind), format!("{v:e}"));
                line(&format!("{}_residual", describe_kind(kind)), format!("{:e}", normalized_residual(v, s)));
            }
            match angle_cos_sq(&pair, point) {
                Ok(c) => line("cos_sq", format!("{c:e}")),
                Err(e) => line("cos_sq", format!("undefined ({e})")),
            }
        }
        Problem::Slice { config, .. } => {
            if point.len() + 1 != config.dim() {
                return Err(config_error(
                    "--point",
                    format!("expected {} spatial coordinates, got {}", config.dim() - 1, point.len()),
                ));
            }
            line("t", config.t.to_string());
            let mut kinds = vec![PseudoKind::GSumSq, PseudoKind::H];
            if matches!(config.angle, AngleParam::General { .. } | AngleParam::ComplexGeneral { .. }) {
                kinds.push(PseudoKind::F);
            }
            for kind in kinds {
                let (z, s) = config.value_and_scale(kind, point)?;
                let name = describe_pseudo(kind);
                line(&format!("{name}_re"), format!("{:e}", z.re));
                line(&format!("{name}_im"), format!("{:e}", z.im));
                line(&format!("{name}_residual"), format!("{:e}", normalized_residual(z.norm(), s)));
            }
        }
    }
    Ok(Report {
        stdout: out,
        ..Default::default()
    })
}
