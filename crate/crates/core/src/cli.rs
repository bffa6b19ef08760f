//! Command-line front end. Every number printed or written here is the
//! return value of a library call; this module only parses flags, converts
//! degrees to radians and formats output.

use crate::error::{Result, StereoError};
use crate::geometry::CameraModel;
use crate::matcher::Scene;
use crate::misalignment::fig2_curve;
use crate::pipeline::{closing_warnings, process_frame, FrameEstimate, FrameSpec, DEFAULT_TTC_THRESHOLD_S};
use crate::ranging::{
    design_baseline, fig1_curve, fig3_curve, min_reliable_disparity, range_from_disparity, Disparity, DEFAULT_KAPPA,
};
use crate::report::{write_curve, write_estimates, write_warnings, CurveKind};
use crate::scene_file::SceneFile;
use clap::{Args, Parser, Subcommand};
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

#[derive(Debug, Parser)]
#[command(name = "stereo-range", version, about = "Stereo rangefinding, error models and simulation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Minimum reliable disparity and the baseline needed to reach a range.
    Design {
        #[arg(long = "range")]
        range_m: f64,
        #[arg(long)]
        fov_deg: f64,
        #[arg(long)]
        hres: u32,
        #[arg(long, default_value_t = 0.05)]
        sensitivity: f64,
    },
    /// Range and quantization error for one integer disparity.
    Range {
        #[arg(long = "baseline")]
        baseline_m: f64,
        #[arg(long)]
        fov_deg: f64,
        #[arg(long)]
        hres: u32,
        #[arg(long, allow_negative_numbers = true)]
        disparity: i64,
    },
    /// Range against disparity (CSV).
    Fig1(Fig1Args),
    /// Misalignment error against yaw for several baselines (CSV).
    Fig2(Fig2Args),
    /// Size-dependent error against range for several target widths (CSV).
    Fig3(Fig3Args),
    /// Render a scene, match every target and write images plus estimates.
    Simulate(SceneArgs),
    /// Like `simulate`, additionally writing closing-rate warnings.
    Track {
        #[command(flatten)]
        scene: SceneArgs,
        #[arg(long = "ttc-threshold", default_value_t = DEFAULT_TTC_THRESHOLD_S)]
        ttc_threshold_s: f64,
    },
}

#[derive(Debug, Args)]
struct Fig1Args {
    #[arg(long = "baseline", default_value_t = 1.14)]
    baseline_m: f64,
    #[arg(long, default_value_t = 13.0)]
    fov_deg: f64,
    #[arg(long, default_value_t = 1920)]
    hres: u32,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    dx_min: i64,
    #[arg(long, default_value_t = 200, allow_negative_numbers = true)]
    dx_max: i64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct Fig2Args {
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.60, 1.00, 1.14])]
    baselines: Vec<f64>,
    #[arg(long = "range", default_value_t = 500.0)]
    range_m: f64,
    #[arg(long, default_value_t = 13.0)]
    fov_deg: f64,
    #[arg(long, default_value_t = 1920)]
    hres: u32,
    #[arg(long, default_value_t = 1080)]
    vres: u32,
    /// First yaw of the sweep; negative yaw reduces disparity.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    delta_from_deg: f64,
    #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
    delta_to_deg: f64,
    #[arg(long, default_value_t = 0.01)]
    delta_step_deg: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct Fig3Args {
    #[arg(long = "baseline", default_value_t = 1.14)]
    baseline_m: f64,
    #[arg(long, default_value_t = 13.0)]
    fov_deg: f64,
    #[arg(long, default_value_t = 1920)]
    hres: u32,
    #[arg(long, default_value_t = 1080)]
    vres: u32,
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.5, 1.0, 2.0])]
    widths: Vec<f64>,
    #[arg(long, default_value_t = 10.0)]
    range_min: f64,
    #[arg(long, default_value_t = 500.0)]
    range_max: f64,
    #[arg(long, default_value_t = 10.0)]
    range_step: f64,
    #[arg(long, default_value_t = DEFAULT_KAPPA)]
    kappa: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct SceneArgs {
    #[arg(long)]
    scene: PathBuf,
    #[arg(long)]
    out_dir: PathBuf,
}

/// Formats with six significant digits in plain decimal notation.
pub fn format_sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (5 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    // rounding can carry into a new digit (9.999995 -> 10.00000)
    let rounded: f64 = s.parse().unwrap_or(x);
    if rounded != 0.0 && rounded.abs().log10().floor() as i32 > magnitude && decimals > 0 {
        return format!("{x:.prec$}", prec = decimals - 1);
    }
    s
}

/// Runs the command line and returns the process exit code: 0 on success,
/// 1 for argument or input errors, 2 for computation failures.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return 0;
            }
            let text = e.to_string();
            let line = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("invalid arguments");
            let _ = writeln!(stderr, "{}", line.trim());
            return 1;
        }
    };
    match execute(cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(command: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Design { range_m, fov_deg, hres, sensitivity } => {
            let dx_min = min_reliable_disparity(sensitivity)?;
            let baseline = design_baseline(range_m, fov_deg.to_radians(), hres, dx_min)?;
            writeln!(stdout, "min_disparity_px: {dx_min}")?;
            writeln!(stdout, "baseline_m: {}", format_sig6(baseline))?;
            Ok(0)
        }
        Command::Range { baseline_m, fov_deg, hres, disparity } => {
            let dx = Disparity::new(disparity)
                .map_err(|_| StereoError::invalid(format!("disparity must be ≥ 1 (got {disparity})")))?;
            let est = range_from_disparity(baseline_m, hres, fov_deg.to_radians(), dx)?;
            writeln!(stdout, "range_m: {}", format_sig6(est.range_m))?;
            writeln!(stdout, "eps: {}", format_sig6(est.eps_quantization))?;
            Ok(0)
        }
        Command::Fig1(a) => {
            let samples = fig1_curve(a.baseline_m, a.hres, a.fov_deg.to_radians(), (a.dx_min, a.dx_max))?;
            write_csv_file(&a.out, |w| write_curve(CurveKind::Fig1, &samples, w))?;
            writeln!(stdout, "wrote {} rows to {}", samples.len(), a.out.display())?;
            Ok(0)
        }
        Command::Fig2(a) => {
            let camera = CameraModel::from_degrees(a.hres, a.vres, a.fov_deg)?;
            let samples =
                fig2_curve(&camera, &a.baselines, a.range_m, (a.delta_from_deg, a.delta_to_deg), a.delta_step_deg)?;
            write_csv_file(&a.out, |w| write_curve(CurveKind::Fig2, &samples, w))?;
            writeln!(stdout, "wrote {} rows to {}", samples.len(), a.out.display())?;
            Ok(0)
        }
        Command::Fig3(a) => {
            let camera = CameraModel::from_degrees(a.hres, a.vres, a.fov_deg)?;
            let samples =
                fig3_curve(&camera, a.baseline_m, &a.widths, (a.range_min, a.range_max), a.range_step, a.kappa)?;
            write_csv_file(&a.out, |w| write_curve(CurveKind::Fig3, &samples, w))?;
            writeln!(stdout, "wrote {} rows to {}", samples.len(), a.out.display())?;
            Ok(0)
        }
        Command::Simulate(a) => simulate(&a, None, stdout, stderr),
        Command::Track { scene, ttc_threshold_s } => simulate(&scene, Some(ttc_threshold_s), stdout, stderr),
    }
}

fn write_csv_file(path: &Path, body: impl FnOnce(&mut BufWriter<File>) -> Result<()>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    body(&mut w)?;
    w.flush()?;
    Ok(())
}

fn simulate(
    args: &SceneArgs,
    ttc_threshold_s: Option<f64>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<i32> {
    if let Some(t) = ttc_threshold_s {
        if !(t > 0.0) {
            return Err(StereoError::invalid(format!("TTC threshold must be > 0 (got {t})")));
        }
    }
    let (scene, frames): (Scene, Vec<FrameSpec>) = SceneFile::load(&args.scene)?.build()?;
    std::fs::create_dir_all(&args.out_dir)?;

    let mut estimates: Vec<FrameEstimate> = Vec::new();
    let mut skipped = 0usize;
    for (i, frame) in frames.iter().enumerate() {
        let result = process_frame(&scene, i, frame)?;
        result.images.left.write_pgm(args.out_dir.join(format!("left_{i:03}.pgm")))?;
        result.images.right.write_pgm(args.out_dir.join(format!("right_{i:03}.pgm")))?;
        for s in &result.skipped {
            writeln!(stderr, "frame {} target {}: no estimate ({:?})", s.frame_index, s.target_index, s.reason)?;
        }
        skipped += result.skipped.len();
        estimates.extend(result.estimates);
    }
    write_csv_file(&args.out_dir.join("estimates.csv"), |w| write_estimates(&estimates, w))?;
    writeln!(stdout, "frames: {}", frames.len())?;
    writeln!(stdout, "estimates: {}", estimates.len())?;

    if let Some(threshold) = ttc_threshold_s {
        let events = closing_warnings(&estimates, threshold)?;
        write_csv_file(&args.out_dir.join("warnings.csv"), |w| write_warnings(&events, w))?;
        writeln!(stdout, "warnings: {}", events.len())?;
    }
    Ok(if skipped > 0 { 2 } else { 0 })
}
