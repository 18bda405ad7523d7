//! Command-line front end: evaluation, singular structure, trochoids,
//! limit tables, meshing, verification and figure regeneration.
//!
//! Exit codes: 0 success, 1 verification or I/O failure, 2 usage or input error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use catenoid_core::export::{
    export_bundle, export_polyline, fmt_float, render_polyline_csv, sha256_hex, write_file, ExportFormat, FileRecord,
    LibraryInfo, MetaDocument,
};
use catenoid_core::lorentz::membership_residual;
use catenoid_core::mesh::{curve_polyline, sample_and_mesh, CurveKind, Projection, RunConfig};
use catenoid_core::singular::{
    classify_region, cone_point, light_lines, limit_of_sequence, limit_table, scenario_sequence, sector_index,
    singular_curves, singular_residual, LimitOutcome, LimitScenario, SequenceShape,
};
use catenoid_core::trochoid::{
    curvature_sign_changes, fit_hypotrochoid, image_period, is_convex, trochoid_params, turning_number,
};
use catenoid_core::verify::{run_suite, SuiteConfig};
use catenoid_core::{Family, SurfaceSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "catenoid", version, about = "Exceptional CMC-1 catenoids in de Sitter space")]
struct Cli {
    /// Worker threads for grid evaluation (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args, Clone, Copy)]
struct SurfaceArgs {
    /// Surface family: I, II or AdS.
    #[arg(long)]
    family: Family,
    #[arg(long)]
    m: u32,
}

impl SurfaceArgs {
    fn spec(&self) -> catenoid_core::Result<SurfaceSpec> {
        SurfaceSpec::new(self.family, self.m)
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate the surface at one domain point (for AdS, `--r` is `s`).
    Eval {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long, allow_negative_numbers = true)]
        r: f64,
        #[arg(long, allow_negative_numbers = true)]
        theta: f64,
        #[arg(long)]
        json: bool,
    },
    /// Trace the singular set, cone points and light-like lines.
    Singular {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long, default_value_t = 0.05)]
        r_min: f64,
        #[arg(long, default_value_t = 20.0)]
        r_max: f64,
        #[arg(long, default_value_t = 200)]
        n_r: usize,
        #[arg(long, default_value_t = 400)]
        n_theta: usize,
        /// Directory for CSV output; only a summary is printed without it.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// The limit curve and its hypo-trochoid.
    Trochoid {
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 2000)]
        samples: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Print the ideal limit table and validate it with random sequences.
    Limits {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long, default_value_t = 20)]
        sequences: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Sample, triangulate and export.
    Mesh(MeshArgs),
    /// Run the property suite and print a JSON report.
    Verify {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        /// Also write the report here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Regenerate every figure into a directory.
    Figures {
        #[arg(long)]
        output: PathBuf,
        #[arg(long, default_value_t = 64)]
        n_r: usize,
        #[arg(long, default_value_t = 128)]
        n_theta: usize,
    },
}

#[derive(Debug, Args)]
struct MeshArgs {
    #[command(flatten)]
    surface: SurfaceArgs,
    #[arg(long)]
    r_min: Option<f64>,
    #[arg(long)]
    r_max: Option<f64>,
    #[arg(long, default_value_t = 64)]
    n_r: usize,
    #[arg(long, default_value_t = 128)]
    n_theta: usize,
    /// hollowball, solid_torus or none (default depends on the family).
    #[arg(long)]
    projection: Option<Projection>,
    /// obj, ply, csv or json.
    #[arg(long, default_value = "obj")]
    format: ExportFormat,
    #[arg(long)]
    output: PathBuf,
    /// Add the light-like lines of the extension.
    #[arg(long)]
    lines: bool,
    /// Add the second sheet: r < 0 for type I, the iota-image for type II with even m.
    #[arg(long)]
    second_sheet: bool,
    #[arg(long)]
    no_refine: bool,
    /// Override the membership tolerance.
    #[arg(long)]
    membership_tol: Option<f64>,
    /// Write a JSON metadata file with checksums next to the output.
    #[arg(long)]
    meta: bool,
}

impl MeshArgs {
    fn config(&self) -> RunConfig {
        let mut c = RunConfig::new(self.surface.family, self.surface.m);
        if let Some(v) = self.r_min {
            c.r_min = v;
        }
        if let Some(v) = self.r_max {
            c.r_max = v;
        }
        c.n_r = self.n_r;
        c.n_theta = self.n_theta;
        if let Some(p) = self.projection {
            c.projection = p;
        }
        c.format = self.format;
        c.output = Some(self.output.clone());
        c.include_lines = self.lines;
        c.include_second_sheet = self.second_sheet;
        c.refine_singular = !self.no_refine;
        if let Some(t) = self.membership_tol {
            c.tolerances.membership = t;
        }
        c
    }
}

/// Parses `argv` (including the program name) and runs it, printing to the
/// process stdout and stderr.
pub fn cli_dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    cli_dispatch_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// [`cli_dispatch`] with explicit output streams.
pub fn cli_dispatch_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::new().filter("CATENOID_LOG")).try_init();
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        pool = pool.num_threads(n);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start thread pool: {e}");
            return EXIT_FAILURE;
        }
    };
    // Commands write into a buffer inside the pool; it is flushed afterwards.
    let mut buffer = Vec::new();
    let result = pool.install(|| run(cli.command, &mut buffer));
    let _ = out.write_all(&buffer);
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            exit_code(&e)
        }
    }
}

/// Input errors from the library are usage errors; I/O and anything else
/// count as failures.
fn exit_code(e: &anyhow::Error) -> i32 {
    match e.downcast_ref::<catenoid_core::Error>() {
        Some(catenoid_core::Error::Io { .. }) | None => EXIT_FAILURE,
        Some(_) => EXIT_USAGE,
    }
}

fn run(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Eval {
            surface,
            r,
            theta,
            json,
        } => eval(surface.spec()?, r, theta, json, out),
        Command::Singular {
            surface,
            r_min,
            r_max,
            n_r,
            n_theta,
            output,
        } => singular(surface.spec()?, (r_min, r_max, n_r, n_theta), output.as_deref(), out),
        Command::Trochoid { m, samples, output } => trochoid(m, samples, output.as_deref(), out),
        Command::Limits {
            surface,
            sequences,
            seed,
        } => limits(surface.spec()?, sequences, seed, out),
        Command::Mesh(args) => mesh(&args, out),
        Command::Verify {
            surface,
            seed,
            samples,
            report,
        } => verify(surface.spec()?, seed, samples, report.as_deref(), out),
        Command::Figures { output, n_r, n_theta } => {
            let manifest = figures(&output, n_r, n_theta)?;
            writeln!(out, "wrote {} files to {}", manifest.files.len(), output.display())?;
            Ok(EXIT_OK)
        }
    }
}

#[derive(Serialize)]
struct EvalOutput {
    spec: SurfaceSpec,
    r: f64,
    theta: f64,
    point: [f64; 4],
    membership_residual: f64,
    singular_residual: Option<f64>,
    region: Option<String>,
    projected: Option<[f64; 3]>,
}

fn eval(spec: SurfaceSpec, r: f64, theta: f64, json: bool, out: &mut dyn Write) -> Result<i32> {
    let p = spec.evaluate(r, theta)?;
    let residual = membership_residual(&p, spec.family.signature());
    let singular = match spec.family {
        Family::AdS => None,
        _ => Some(singular_residual(spec, r, theta)?),
    };
    let region = match spec.family {
        Family::I => Some(classify_region(spec.m, r, theta)?.as_str().to_string()),
        _ => None,
    };
    let projected = Projection::default_for(spec.family).apply(&p).ok();
    if json {
        let doc = EvalOutput {
            spec,
            r,
            theta,
            point: p.to_array(),
            membership_residual: residual,
            singular_residual: singular,
            region,
            projected,
        };
        writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
        return Ok(EXIT_OK);
    }
    let coords = p.to_array().map(fmt_float).join(", ");
    writeln!(out, "f = ({coords})")?;
    writeln!(out, "residual = {}", fmt_float(residual))?;
    if let Some(s) = singular {
        writeln!(out, "singular residual = {}", fmt_float(s))?;
    }
    if let Some(label) = region {
        writeln!(out, "region = {label}")?;
    }
    if let Some(v) = projected {
        writeln!(out, "{} = ({})", Projection::default_for(spec.family), v.map(fmt_float).join(", "))?;
    }
    Ok(EXIT_OK)
}

fn singular(
    spec: SurfaceSpec,
    (r_min, r_max, n_r, n_theta): (f64, f64, usize, usize),
    output: Option<&Path>,
    out: &mut dyn Write,
) -> Result<i32> {
    let curves = singular_curves(spec, r_min, r_max, n_r, n_theta)?;
    let m = spec.m;
    let per_sheet = |s: i8| curves.iter().filter(|c| c.sheet == s).count();
    writeln!(out, "{spec}: {} singular curves", curves.len())?;
    writeln!(out, "  sheet r > 0: {}", per_sheet(1))?;
    if spec.family == Family::I {
        writeln!(out, "  sheet r < 0: {}", per_sheet(-1))?;
    }
    if spec.family == Family::II {
        for k in 0..2 * m as i64 {
            let p = cone_point(m, k)?;
            writeln!(out, "  cone point k={k}: ({})", p.to_array().map(fmt_float).join(", "))?;
        }
    }
    for k in 0..2 * m as i64 {
        for (b, line) in light_lines(spec, k)?.iter().enumerate() {
            writeln!(
                out,
                "  light line k={k} branch={b}: base ({}) direction ({})",
                line.base.to_array().map(fmt_float).join(", "),
                line.direction.to_array().map(fmt_float).join(", ")
            )?;
        }
    }
    let Some(dir) = output else {
        return Ok(EXIT_OK);
    };
    let mut domain = String::from("curve,sheet,closed,r,theta\n");
    for (i, c) in curves.iter().enumerate() {
        for p in &c.points {
            domain.push_str(&format!("{i},{},{},{},{}\n", c.sheet, c.closed, fmt_float(p.r), fmt_float(p.theta)));
        }
    }
    write_file(&dir.join("singular_domain.csv"), &domain)?;
    let mut regions = String::from("r,theta,region,residual\n");
    let sheets: &[f64] = if spec.family == Family::I { &[1.0, -1.0] } else { &[1.0] };
    let (lo, hi) = (r_min.ln(), r_max.ln());
    for &sheet in sheets {
        for i in 0..n_r {
            let r = sheet * (lo + (hi - lo) * i as f64 / (n_r - 1) as f64).exp();
            for j in 0..n_theta {
                let theta = std::f64::consts::TAU * j as f64 / n_theta as f64;
                let res = singular_residual(spec, r, theta)?;
                let label = match spec.family {
                    Family::I => classify_region(m, r, theta)?.as_str().to_string(),
                    _ => format!("sector{}", sector_index(m, theta)),
                };
                regions.push_str(&format!("{},{},{label},{}\n", fmt_float(r), fmt_float(theta), fmt_float(res)));
            }
        }
    }
    write_file(&dir.join("regions.csv"), &regions)?;
    if spec.family == Family::I {
        for c in 0..2 * m as usize {
            let poly = curve_polyline(CurveKind::SingularImage { spec, component: c }, 400, Projection::Hollowball)?;
            export_polyline(&poly, ExportFormat::Csv, &dir.join(format!("singular_image_{c}.csv")))?;
        }
    }
    for k in 0..2 * m as i64 {
        for b in 0..light_lines(spec, k)?.len() {
            let kind = CurveKind::LightLine {
                spec,
                k,
                branch: b,
                t_min: -4.0,
                t_max: 4.0,
            };
            let poly = curve_polyline(kind, 200, Projection::Hollowball)?;
            export_polyline(&poly, ExportFormat::Csv, &dir.join(format!("light_line_{k}_{b}.csv")))?;
        }
    }
    writeln!(out, "wrote CSV files to {}", dir.display())?;
    Ok(EXIT_OK)
}

fn trochoid(m: u32, samples: usize, output: Option<&Path>, out: &mut dyn Write) -> Result<i32> {
    let params = trochoid_params(m);
    let fit = fit_hypotrochoid(m, samples)?;
    writeln!(
        out,
        "gamma_{m}: r_c = {}, r_m = {}, d = {}",
        fmt_float(params.r_c),
        fmt_float(params.r_m),
        fmt_float(params.d)
    )?;
    writeln!(
        out,
        "fitted hypo-trochoid: fixed {}, rolling {}, pen {}, {:?}, Hausdorff {:.3e}",
        fmt_float(fit.roulette.fixed),
        fmt_float(fit.roulette.rolling),
        fmt_float(fit.roulette.pen),
        fit.assignment,
        fit.hausdorff
    )?;
    let grid = samples.max(10_000);
    writeln!(out, "curvature sign changes: {}", curvature_sign_changes(m, grid)?)?;
    writeln!(
        out,
        "tangent turns over one image period: {}",
        fmt_float(turning_number(m, image_period(m), grid)?)
    )?;
    writeln!(out, "convex: {}", is_convex(m, grid)?)?;
    if let Some(dir) = output {
        let g = curve_polyline(CurveKind::Trochoid { m }, samples, Projection::None)?;
        export_polyline(&g, ExportFormat::Csv, &dir.join(format!("gamma_m{m}.csv")))?;
        let h = curve_polyline(CurveKind::FittedHypotrochoid { m }, samples, Projection::None)?;
        export_polyline(&h, ExportFormat::Csv, &dir.join(format!("hypotrochoid_m{m}.csv")))?;
        writeln!(out, "wrote CSV files to {}", dir.display())?;
    }
    Ok(EXIT_OK)
}

fn limits(spec: SurfaceSpec, sequences: usize, seed: u64, out: &mut dyn Write) -> Result<i32> {
    use rand::{Rng, SeedableRng};
    let scenarios = LimitScenario::for_family(spec.family);
    if scenarios.is_empty() {
        anyhow::bail!(catenoid_core::Error::Unsupported {
            operation: "limit table",
            family: spec.family.name(),
        });
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    writeln!(out, "{spec} limit table")?;
    for scenario in scenarios {
        let expected = limit_table(spec, scenario)?;
        let (mut hits, mut worst) = (0usize, 0.0_f64);
        for _ in 0..sequences {
            let shape = SequenceShape::from_unit(spec.m, rng.gen());
            match limit_of_sequence(spec, &scenario_sequence(spec, scenario, &shape)?)? {
                LimitOutcome::Ideal { point, distance } if point.tag == expected.tag => {
                    hits += 1;
                    worst = worst.max(distance);
                }
                _ => {}
            }
        }
        failures += sequences - hits;
        writeln!(
            out,
            "  {scenario:<32} -> {:<3} {hits}/{sequences} sequences, max distance {worst:.2e}",
            expected.tag.to_string()
        )?;
    }
    Ok(if failures == 0 { EXIT_OK } else { EXIT_FAILURE })
}

fn mesh(args: &MeshArgs, out: &mut dyn Write) -> Result<i32> {
    let config = args.config();
    let bundle = sample_and_mesh(&config)?;
    let record = export_bundle(&bundle, config.format, &args.output)?;
    let s = bundle.provenance.stats;
    writeln!(
        out,
        "{}: {} vertices, {} triangles ({} refined cells, {} dropped), {} bytes",
        args.output.display(),
        bundle.vertices.len(),
        bundle.triangles.len(),
        s.refined_cells,
        s.dropped_triangles,
        record.bytes
    )?;
    if args.meta && config.format != ExportFormat::JsonMeta {
        let meta = MetaDocument::new(Some(config), Some(s), vec![record]);
        let path = args.output.with_extension("json");
        write_file(&path, &meta.render())?;
        writeln!(out, "{}: metadata", path.display())?;
    }
    Ok(EXIT_OK)
}

fn verify(spec: SurfaceSpec, seed: u64, samples: usize, report: Option<&Path>, out: &mut dyn Write) -> Result<i32> {
    let config = SuiteConfig {
        samples,
        ..SuiteConfig::new(spec, seed)
    };
    let result = run_suite(&config)?;
    let json = result.to_json();
    writeln!(out, "{json}")?;
    if let Some(path) = report {
        write_file(path, &format!("{json}\n"))?;
    }
    Ok(if result.passed { EXIT_OK } else { EXIT_FAILURE })
}

#[derive(Debug, Clone, Serialize)]
pub struct FigureEntry {
    pub figure: u32,
    pub description: String,
    pub config: Option<RunConfig>,
    pub file: FileRecord,
}

#[derive(Debug, Clone, Serialize)]
pub struct FigureManifest {
    pub library: LibraryInfo,
    pub files: Vec<FigureEntry>,
}

/// Writes every figure artifact into `dir` together with `manifest.json`.
/// Output bytes depend only on the arguments.
pub fn figures(dir: &Path, n_r: usize, n_theta: usize) -> Result<FigureManifest> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut files = Vec::new();
    let mut surface = |figure: u32, name: &str, description: &str, mut config: RunConfig| -> Result<()> {
        config.n_r = n_r;
        config.n_theta = n_theta;
        let path = dir.join(name);
        config.output = Some(PathBuf::from(name));
        let bundle = sample_and_mesh(&config)?;
        let file = export_bundle(&bundle, config.format, &path)?;
        files.push(FigureEntry {
            figure,
            description: description.into(),
            config: Some(config),
            file,
        });
        Ok(())
    };
    let mut c = RunConfig::new(Family::II, 2);
    c.include_lines = true;
    c.include_second_sheet = true;
    surface(1, "fig1_extension_ii_m2.obj", "type II, m = 2: the closed extension with its light-like lines", c)?;
    surface(1, "fig1_image_ii_m2.obj", "type II, m = 2: image of the catenoid", RunConfig::new(Family::II, 2))?;
    let mut c = RunConfig::new(Family::II, 3);
    c.include_lines = true;
    surface(2, "fig2_extension_ii_m3.obj", "type II, m = 3: the closed extension with its light-like lines", c)?;
    for m in [2, 3] {
        surface(
            4,
            &format!("fig4_ads_m{m}.obj"),
            &format!("anti-de Sitter companion, m = {m}, in the solid torus"),
            RunConfig::new(Family::AdS, m),
        )?;
    }
    for m in [2, 3, 4] {
        for (kind, name, what) in [
            (CurveKind::Trochoid { m }, format!("fig3_gamma_m{m}.csv"), "limit curve"),
            (CurveKind::FittedHypotrochoid { m }, format!("fig3_hypotrochoid_m{m}.csv"), "fitted hypo-trochoid"),
        ] {
            let poly = curve_polyline(kind, 2000, Projection::None)?;
            let file = write_file(&dir.join(&name), &render_polyline_csv(&poly))?;
            files.push(FigureEntry {
                figure: 3,
                description: format!("{what}, m = {m}"),
                config: None,
                file,
            });
        }
    }
    files.sort_by_key(|e| (e.figure, e.file.name.clone()));
    let manifest = FigureManifest {
        library: LibraryInfo::default(),
        files,
    };
    let text = format!("{}\n", serde_json::to_string_pretty(&manifest)?);
    write_file(&dir.join("manifest.json"), &text)?;
    log::info!("manifest sha256 {}", sha256_hex(text.as_bytes()));
    Ok(manifest)
}
