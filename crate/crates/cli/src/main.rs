use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use wgft::experiment::{preset, preset_names, run_experiment, ExperimentConfig};
use wgft::graph::{load_graph, Graph, LaplacianKind, LoadOptions};
use wgft::io;
use wgft::transform::{frame_bounds, mwgft_analyze, mwgft_synthesize, spectrogram};
use wgft::windows::check_nondegeneracy;
use wgft::SpectralBasis;

#[derive(Parser)]
#[command(
    name = "wgft",
    version,
    about = "Windowed graph Fourier transform experiments"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Experiment config (TOML).
    #[arg(long, global = true, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Built-in experiment preset.
    #[arg(long, global = true)]
    preset: Option<String>,
    /// Output directory.
    #[arg(long, global = true, default_value = "wgft-out")]
    out: PathBuf,
    /// Worker threads; 1 keeps outputs bit-reproducible.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Overrides the seed of random graphs and random signals.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Edge-list file (1-based `i j [w]` lines) replacing the configured graph.
    #[arg(long, global = true)]
    graph: Option<PathBuf>,
    /// Laplacian used when no config is given.
    #[arg(long, global = true, value_parser = parse_kind)]
    laplacian: Option<LaplacianKind>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a full analysis/synthesis experiment.
    Run,
    /// Print size, degree and connectivity statistics.
    GraphInfo,
    /// Print the Laplacian spectrum and write eigenvalues/eigenvectors CSVs.
    Eig,
    /// Evaluate the reconstruction denominators of the window family.
    WindowsCheck,
    /// Compute coefficients of the configured signal.
    Analyze {
        /// Signal CSV (`vertex,re,im`) instead of the configured signal.
        #[arg(long)]
        signal: Option<PathBuf>,
    },
    /// Reconstruct a signal from a coefficient file.
    Synthesize {
        #[arg(long)]
        coefficients: PathBuf,
    },
    /// Write spectrograms of a coefficient file.
    Spectrogram {
        #[arg(long)]
        coefficients: PathBuf,
    },
    /// Optimal frame bounds of each analysis window.
    FrameBounds,
    /// List built-in presets.
    Presets,
}

fn parse_kind(s: &str) -> Result<LaplacianKind, String> {
    match s {
        "unnormalized" => Ok(LaplacianKind::Unnormalized),
        "symmetric-normalized" | "normalized" => Ok(LaplacianKind::SymmetricNormalized),
        _ => Err(format!("unknown Laplacian kind `{s}`")),
    }
}

struct Session {
    config: Option<ExperimentConfig>,
    base_dir: PathBuf,
    common: Common,
}

impl Session {
    fn new(common: Common) -> anyhow::Result<Self> {
        let (config, base_dir) = match (&common.config, &common.preset) {
            (Some(path), _) => {
                let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
                (Some(ExperimentConfig::load(path)?), base)
            }
            (None, Some(name)) => (Some(preset(name)?), PathBuf::new()),
            (None, None) => (None, PathBuf::new()),
        };
        let config = config.map(|mut c| {
            if let Some(seed) = common.seed {
                c.set_seed(seed);
            }
            if let Some(graph) = &common.graph {
                c.set_graph_file(std::path::absolute(graph).unwrap_or_else(|_| graph.clone()));
            }
            if let Some(kind) = common.laplacian {
                c.laplacian = kind;
            }
            c
        });
        Ok(Session {
            config,
            base_dir,
            common,
        })
    }

    fn config(&self) -> anyhow::Result<&ExperimentConfig> {
        match &self.config {
            Some(c) => Ok(c),
            None => bail!(wgft::Error::Config(
                "this command needs --config or --preset".into()
            )),
        }
    }

    fn graph(&self) -> anyhow::Result<Graph> {
        if let Some(c) = &self.config {
            return Ok(c.build_graph(&self.base_dir)?);
        }
        match &self.common.graph {
            Some(path) => Ok(load_graph(path, &LoadOptions::default())?),
            None => bail!(wgft::Error::Config(
                "this command needs --config, --preset or --graph".into()
            )),
        }
    }

    fn kind(&self) -> LaplacianKind {
        match (&self.config, self.common.laplacian) {
            (Some(c), _) => c.laplacian,
            (None, Some(k)) => k,
            (None, None) => LaplacianKind::SymmetricNormalized,
        }
    }

    fn basis(&self) -> anyhow::Result<SpectralBasis> {
        let graph = self.graph()?;
        Ok(SpectralBasis::from_graph(&graph, self.kind())
            .map_err(|e| e.at("eigendecomposition"))?)
    }

    fn out_dir(&self) -> anyhow::Result<&Path> {
        let dir = &self.common.out;
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        Ok(dir)
    }
}

fn execute(command: Command, ctx: &Session) -> anyhow::Result<bool> {
    match command {
        Command::Run => {
            let config = ctx.config()?;
            let report = run_experiment(config, &ctx.base_dir, ctx.out_dir()?)?;
            println!("experiment      {}", report.name);
            println!("vertices        {}", report.vertices);
            println!("windows         {}", report.windows);
            println!("relative_error  {:e}", report.relative_error);
            println!(
                "min |d(n)|      {:e} (vertex {})",
                report.min_abs_denominator, report.min_denominator_vertex
            );
            println!(
                "peak            vertex {}, mode {}",
                report.spectrogram_peak_vertex, report.spectrogram_peak_mode
            );
            println!("passed          {}", report.passed);
            Ok(report.passed)
        }
        Command::GraphInfo => {
            let graph = ctx.graph()?;
            let degrees = graph.degrees();
            let min = degrees.iter().copied().fold(f64::INFINITY, f64::min);
            let max = degrees.iter().copied().fold(0.0, f64::max);
            println!("vertices    {}", graph.num_vertices());
            println!("edges       {}", graph.num_edges());
            println!("degree      min {min}, max {max}");
            println!("coordinates {}", graph.coordinates().is_some());
            Ok(true)
        }
        Command::Eig => {
            let basis = ctx.basis()?;
            let out = ctx.out_dir()?;
            io::write_eigenvalues(&out.join("eigenvalues.csv"), &basis)?;
            io::write_eigenvectors(&out.join("eigenvectors.csv"), &basis)?;
            println!("# fingerprint {}", basis.fingerprint());
            for (l, lambda) in basis.eigenvalues().iter().enumerate() {
                println!("{l} {lambda:.12}");
            }
            Ok(true)
        }
        Command::WindowsCheck => {
            let config = ctx.config()?;
            let basis = ctx.basis()?;
            let family = config
                .design_family(&basis, &ctx.base_dir)
                .map_err(|e| e.at("windows"))?;
            let report = check_nondegeneracy(&basis, &family, config.tolerances.nondegeneracy)?;
            let out = ctx.out_dir()?;
            io::write_window_family(&out.join("windows.csv"), &basis, &family)?;
            io::write_condition_report(&out.join("denominators.csv"), &report)?;
            let summary = io::condition_summary(&report);
            fs::write(out.join("condition.txt"), &summary)?;
            print!("{summary}");
            Ok(report.satisfied)
        }
        Command::Analyze { signal } => {
            let config = ctx.config()?;
            let basis = ctx.basis()?;
            let family = config
                .design_family(&basis, &ctx.base_dir)
                .map_err(|e| e.at("windows"))?;
            let f = match signal {
                Some(path) => io::read_signal(&path)?,
                None => config.signal.generate(&basis).map_err(|e| e.at("signal"))?,
            };
            let coeffs = mwgft_analyze(&basis, &family, &f).map_err(|e| e.at("analysis"))?;
            let out = ctx.out_dir()?;
            io::write_signal(&out.join("signal.csv"), &f)?;
            let path = out.join("coefficients.csv");
            io::write_coefficients(&path, &coeffs)?;
            println!(
                "wrote {} ({} windows, fingerprint {})",
                path.display(),
                coeffs.window_count(),
                coeffs.fingerprint()
            );
            Ok(true)
        }
        Command::Synthesize { coefficients } => {
            let config = ctx.config()?;
            let basis = ctx.basis()?;
            let family = config
                .design_family(&basis, &ctx.base_dir)
                .map_err(|e| e.at("windows"))?;
            let coeffs = io::read_coefficients(&coefficients)?;
            let rec = mwgft_synthesize(&basis, &family, &coeffs).map_err(|e| e.at("synthesis"))?;
            let path = ctx.out_dir()?.join("reconstructed.csv");
            io::write_signal(&path, &rec)?;
            println!("wrote {}", path.display());
            Ok(true)
        }
        Command::Spectrogram { coefficients } => {
            let coeffs = io::read_coefficients(&coefficients)?;
            let sg = spectrogram(&coeffs);
            let out = ctx.out_dir()?;
            for (j, m) in sg.per_window.iter().enumerate() {
                io::write_spectrogram(&out.join(format!("spectrogram_window_{}.csv", j + 1)), m)?;
            }
            io::write_spectrogram(&out.join("spectrogram_averaged.csv"), &sg.averaged)?;
            io::write_pgm(&out.join("spectrogram_averaged.pgm"), &sg.averaged)?;
            let (vertex, mode) = sg.argmax();
            println!("peak vertex {} mode {}", vertex + 1, mode);
            Ok(true)
        }
        Command::FrameBounds => {
            let config = ctx.config()?;
            let basis = ctx.basis()?;
            let family = config
                .design_family(&basis, &ctx.base_dir)
                .map_err(|e| e.at("windows"))?;
            println!("window,A,B,argmin,argmax,dual_A,dual_B");
            for (j, (g, gamma)) in family.pairs().enumerate() {
                let fb = frame_bounds(&basis, &g.samples, Some(&gamma.samples))
                    .map_err(|e| e.at("frame-bounds"))?;
                let (da, db) = fb.dual_pair_bounds.unwrap_or((f64::NAN, f64::NAN));
                println!(
                    "{},{},{},{},{},{},{}",
                    j + 1,
                    fb.lower,
                    fb.upper,
                    fb.argmin + 1,
                    fb.argmax + 1,
                    da,
                    db
                );
            }
            Ok(true)
        }
        Command::Presets => {
            for name in preset_names() {
                println!("{name}");
            }
            Ok(true)
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<wgft::Error>() {
        Some(e) if e.is_numerical() => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.common.threads.max(1))
        .build()
        .map_err(anyhow::Error::from)
        .and_then(|pool| {
            let session = Session::new(cli.common)?;
            pool.install(|| execute(cli.command, &session))
        });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
