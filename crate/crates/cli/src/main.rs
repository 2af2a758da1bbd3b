//! `pose`: inspect, convert, normalize, augment, render and benchmark `.pose` files.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use pose_core::benchmark::{bench_run, DEFAULT_REPS};
use pose_core::ingest::{parse_openpose_directory, parse_openpose_file, IngestOptions};
use pose_core::ops::{augment, normalize, AugmentationSpec, NormalizationInfo};
use pose_core::render::{render_gif, render_png_sequence, RenderOptions};
use pose_core::{read_pose, write_pose, PointRef, Pose};

#[derive(Parser)]
#[command(name = "pose", version, about = "Tools for .pose keypoint sequence files")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print header and body summary.
    Info { file: PathBuf },
    /// Convert pose estimator output to .pose.
    Convert(ConvertArgs),
    /// Scale and center so the mean distance between two points is 1.
    Normalize(NormalizeArgs),
    /// Apply an augmentation pipeline from a JSON spec.
    Augment(AugmentArgs),
    /// Draw frames as a GIF or a PNG sequence.
    Render(RenderArgs),
    /// Compare .pose against OpenPose JSON in size and read speed.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Source {
    Openpose,
}

#[derive(Args)]
struct ConvertArgs {
    #[arg(long, value_enum)]
    from: Source,
    /// Directory of per-frame JSON files, or one monolithic JSON file.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    fps: u16,
    #[arg(long)]
    width: u16,
    #[arg(long)]
    height: u16,
    #[arg(long, default_value_t = 1)]
    max_people: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct NormalizeArgs {
    /// Reference point as COMPONENT:POINT.
    #[arg(long)]
    left: PointRef,
    #[arg(long)]
    right: PointRef,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct AugmentArgs {
    #[arg(long)]
    spec: PathBuf,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("target").required(true).multiple(true).args(["gif", "frames"]))]
struct RenderArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    gif: Option<PathBuf>,
    /// Output directory for one PNG per frame.
    #[arg(long)]
    frames: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0)]
    scale: f64,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [1usize, 10, 100, 1000, 10000])]
    frames_list: Vec<usize>,
    #[arg(long, default_value_t = DEFAULT_REPS)]
    reps: usize,
    /// Also write the report as JSON.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn load(path: &Path) -> Result<Pose> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    read_pose(&bytes).with_context(|| format!("parsing {}", path.display()))
}

fn save(pose: &Pose, path: &Path) -> Result<()> {
    let bytes = write_pose(pose)?;
    fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

fn info(path: &Path) -> Result<()> {
    let pose = load(path)?;
    let h = &pose.header;
    let t = pose.tensor();
    println!("version: {}", h.version);
    println!("dimensions: {}x{}x{}", h.width, h.height, h.depth);
    println!("dims: {}", t.dims());
    println!("components: {}", h.components.len());
    for c in &h.components {
        println!(
            "  {} ({}): {} points, {} limbs, {} colors",
            c.name,
            c.format,
            c.points.len(),
            c.limbs.len(),
            c.colors.len()
        );
    }
    println!("points: {}", h.total_points());
    println!("frames: {}", t.frames());
    println!("people: {}", t.people());
    println!("fps: {}", pose.body.fps);
    Ok(())
}

fn convert(args: ConvertArgs) -> Result<()> {
    let Source::Openpose = args.from;
    let opts = IngestOptions {
        fps: args.fps,
        width: args.width,
        height: args.height,
        max_people: args.max_people,
    };
    let pose = if args.input.is_dir() {
        parse_openpose_directory(&args.input, &opts)?
    } else {
        parse_openpose_file(&args.input, &opts)?
    };
    save(&pose, &args.out)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Info { file } => info(&file),
        Command::Convert(args) => convert(args),
        Command::Normalize(args) => {
            let pose = load(&args.input)?;
            let out = normalize(&pose, &NormalizationInfo::new(args.left, args.right))?;
            save(&out, &args.out)
        }
        Command::Augment(args) => {
            let text = fs::read_to_string(&args.spec).with_context(|| format!("reading {}", args.spec.display()))?;
            let spec: AugmentationSpec =
                serde_json::from_str(&text).with_context(|| format!("parsing {}", args.spec.display()))?;
            let pose = load(&args.input)?;
            save(&augment(&pose, &spec)?, &args.out)
        }
        Command::Render(args) => {
            let pose = load(&args.input)?;
            let opts = RenderOptions {
                scale: args.scale,
                ..Default::default()
            };
            if let Some(gif) = args.gif {
                render_gif(&pose, &gif, &opts)?;
            }
            if let Some(dir) = args.frames {
                let written = render_png_sequence(&pose, &dir, &opts)?;
                eprintln!("wrote {} frames to {}", written.len(), dir.display());
            }
            Ok(())
        }
        Command::Bench(args) => {
            if let Some(&bad) = args.frames_list.iter().find(|&&f| f == 0) {
                anyhow::bail!("frame counts must be at least 1, got {bad}");
            }
            let report = bench_run(&args.frames_list, args.reps)?;
            print!("{}", report.to_table());
            if let Some(path) = args.out {
                let json = serde_json::to_string_pretty(&report)?;
                fs::write(&path, json).with_context(|| format!("writing {}", path.display()))?;
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
