use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use desws::commands::{self, EvalInput, ThresholdOptions};
use desws::{CliError, Format};
use desws_core::TestMethod;

/// Distance estimation and safety warning pipeline.
#[derive(Parser)]
#[command(name = "desws", version)]
struct Cli {
    /// Pipeline configuration (JSON); built-in defaults when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Distance per detection.
    Estimate { detections: PathBuf },
    /// Distance and Safe/Dangerous verdict per detection.
    Warn { detections: PathBuf },
    /// Per-class AP and mAP against a directory of label files.
    Eval {
        gt_dir: PathBuf,
        detections: PathBuf,
        #[arg(long, default_value_t = 0.5)]
        iou_threshold: f64,
        /// Image size for label files without a `# size` line, as WxH.
        #[arg(long, value_parser = parse_size)]
        image_size: Option<(f64, f64)>,
    },
    /// Rank test between the dangerous and safe count columns.
    ThresholdTest {
        samples: PathBuf,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long, value_parser = parse_method)]
        method: Option<TestMethod>,
        /// Also write the threshold/count series as CSV.
        #[arg(long)]
        plot_data: Option<PathBuf>,
    },
    /// Synthetic scene: labels/<id>.txt, detections.json and truth.csv.
    Simulate {
        scene: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// DIoU breakdown for a predicted and a target box.
    Diou {
        #[arg(allow_negative_numbers = true, num_args = 8, value_names = ["X_MIN", "Y_MIN", "X_MAX", "Y_MAX"])]
        coords: Vec<f64>,
    },
}

fn parse_size(s: &str) -> Result<(f64, f64), String> {
    let (w, h) = s.split_once(['x', 'X']).ok_or("expected WIDTHxHEIGHT")?;
    let w: f64 = w.parse().map_err(|_| format!("bad width `{w}`"))?;
    let h: f64 = h.parse().map_err(|_| format!("bad height `{h}`"))?;
    if w > 0.0 && h > 0.0 && w.is_finite() && h.is_finite() {
        Ok((w, h))
    } else {
        Err("image size must be positive".into())
    }
}

fn parse_method(s: &str) -> Result<TestMethod, String> {
    [
        TestMethod::MannWhitneyExact,
        TestMethod::MannWhitneyNormalApprox,
        TestMethod::KruskalWallis,
    ]
    .into_iter()
    .find(|m| m.name() == s)
    .ok_or_else(|| {
        "expected mann-whitney-exact, mann-whitney-normal-approx or kruskal-wallis".to_string()
    })
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text)
        .map_err(|e| CliError::Input(anyhow::anyhow!("cannot write {}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<String, CliError> {
    let config = commands::load_config(cli.config.as_deref())?;
    let format = cli.format;
    match cli.command {
        Command::Estimate { detections } => {
            commands::cmd_estimate(&config, &commands::read_text(&detections)?, format)
        }
        Command::Warn { detections } => {
            commands::cmd_warn(&config, &commands::read_text(&detections)?, format)
        }
        Command::Eval {
            gt_dir,
            detections,
            iou_threshold,
            image_size,
        } => {
            let labels = commands::load_ground_truth(&gt_dir, config.class_names.len())?;
            let dets = commands::read_text(&detections)?;
            let args = EvalInput {
                labels: &labels,
                detections_json: &dets,
                iou_threshold,
                image_size,
            };
            commands::cmd_eval(&config, &args, format)
        }
        Command::ThresholdTest {
            samples,
            alpha,
            method,
            plot_data,
        } => {
            let opts = ThresholdOptions { alpha, method };
            let (report, _, plot) = commands::cmd_threshold_test(
                &config,
                &commands::read_text(&samples)?,
                opts,
                format,
            )?;
            if let Some(path) = plot_data {
                write_file(&path, &plot)?;
            }
            Ok(report)
        }
        Command::Simulate {
            scene,
            seed,
            out_dir,
        } => {
            let (report, out) =
                commands::cmd_simulate(&config, &commands::read_text(&scene)?, seed, format)?;
            out.write_to(&out_dir)?;
            Ok(report)
        }
        Command::Diou { coords } => {
            let coords: [f64; 8] = coords
                .try_into()
                .map_err(|_| CliError::Input(anyhow::anyhow!("diou needs exactly 8 numbers")))?;
            commands::cmd_diou(coords, format)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    let output = cli.output.clone();
    let result = run(cli).and_then(|report| match &output {
        Some(path) => write_file(path, &report),
        None => std::io::stdout()
            .write_all(report.as_bytes())
            .map_err(|e| CliError::Internal(e.into())),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("desws: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
