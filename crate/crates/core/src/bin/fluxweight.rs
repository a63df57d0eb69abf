use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};

use fluxweight::amr::weight_demo;
use fluxweight::experiments::{format_report, run_manifest, Manifest, RunOptions, PROBLEMS};
use fluxweight::mesh::write_mesh;

#[derive(Parser)]
#[command(
    version,
    about = "Adaptive finite elements for the boundary normal flux"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the studies of a JSON manifest.
    Run {
        manifest: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long)]
        dump_mesh: bool,
        #[arg(long)]
        dump_indicators: bool,
        #[arg(long)]
        dump_pyramid: bool,
    },
    /// Refine the 4x4 square on the distance weights alone.
    DemoWeights {
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 1.0)]
        c2: f64,
        #[arg(long, default_value_t = 7)]
        steps: usize,
        #[arg(long, default_value_t = 0.5)]
        theta: f64,
        /// Write the mesh of every step into this directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the registered problems.
    ListProblems,
}

fn main() -> anyhow::Result<ExitCode> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match Cli::parse().command {
        Command::Run {
            manifest,
            out,
            dump_mesh,
            dump_indicators,
            dump_pyramid,
        } => {
            let text = std::fs::read_to_string(&manifest)
                .with_context(|| format!("reading {}", manifest.display()))?;
            let manifest = Manifest::from_json(&text).context("parsing manifest")?;
            let opts = RunOptions {
                out,
                dump_mesh,
                dump_indicators,
                dump_pyramid,
            };
            let report = run_manifest(&manifest, &opts)?;
            print!("{}", format_report(&report));
            Ok(if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::DemoWeights {
            k,
            c2,
            steps,
            theta,
            out,
        } => {
            let demo = weight_demo::<f64>(k, c2, steps, theta)?;
            if let Some(dir) = &out {
                std::fs::create_dir_all(dir)?;
                for (i, m) in demo.meshes.iter().enumerate() {
                    let f = std::fs::File::create(dir.join(format!("weights_step{i:02}.txt")))?;
                    write_mesh(m, std::io::BufWriter::new(f))?;
                }
            }
            println!("step,elements");
            for (i, m) in demo.meshes.iter().enumerate() {
                println!("{i},{}", m.num_elements());
            }
            println!(
                "boundary level {}, center level {}",
                demo.boundary_level(),
                demo.center_level()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::ListProblems => {
            for (name, about) in PROBLEMS {
                println!("{name:16} {about}");
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
