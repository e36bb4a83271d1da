use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use cigan_core::data::write_csv_with_column;
use cigan_core::eval::{run_pipeline, sweep, to_sorted_json, SweepOptions, TrialStatus};
use cigan_core::{fit_resample, load_csv, ClassifierSpec, Dataset, GanConfig, SplitSpec};

use crate::args::{CommonArgs, EvalArgs, PipelineArgs, ResampleArgs, SweepArgs};
use crate::config::{resolve_gan_config, FlagOverrides};
use crate::error::{write_error, CliError};

pub const ORIGIN_COLUMN: &str = "__origin__";

struct Prepared {
    config: GanConfig,
    out: PathBuf,
}

fn prepare(common: &CommonArgs) -> Result<Prepared, CliError> {
    let flags = FlagOverrides {
        seed: common.seed,
        n_jobs: common.n_jobs,
    };
    let config = resolve_gan_config(common.config.as_deref(), std::env::vars(), &flags)?;
    Ok(Prepared {
        config,
        out: common.out.clone(),
    })
}

fn load(common: &CommonArgs) -> Result<Dataset, CliError> {
    let ds = load_csv(&common.data, &common.target)
        .map_err(|e| CliError::from(e).with_context(&common.data))?;
    log::info!(
        "loaded {} rows, {} features, {} classes from {}",
        ds.n_samples(),
        ds.n_features(),
        ds.class_labels().len(),
        common.data.display()
    );
    Ok(ds)
}

fn prepare_out_dir(out: &Path, force: bool) -> Result<(), CliError> {
    if out.exists() {
        if !out.is_dir() {
            return Err(CliError::Config(format!(
                "{} is not a directory",
                out.display()
            )));
        }
        let occupied = fs::read_dir(out)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", out.display())))?
            .next()
            .is_some();
        if occupied && !force {
            return Err(CliError::Config(format!(
                "output directory {} is not empty; pass --force to write into it",
                out.display()
            )));
        }
    }
    fs::create_dir_all(out).map_err(|e| write_error(out, e))
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| write_error(path, e))
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let text = to_sorted_json(value).map_err(|e| write_error(path, e))?;
    write_text(path, &text)
}

fn classifier(eval: &EvalArgs) -> Result<ClassifierSpec, CliError> {
    ClassifierSpec::from_kind(&eval.classifier).ok_or_else(|| {
        CliError::Config(format!(
            "unknown classifier `{}` (expected gbt or softmax)",
            eval.classifier
        ))
    })
}

/// Parses `train,val,test` fractions. The split seed is the `--seed` flag when
/// given, else the resolved `random_seed`.
fn split_spec(eval: &EvalArgs, seed: u64) -> Result<SplitSpec, CliError> {
    let parts: Vec<f64> = eval
        .split
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Config(format!("--split `{}`: {e}", eval.split)))?;
    let [train, val, test] = parts[..] else {
        return Err(CliError::Config(format!(
            "--split needs three comma-separated fractions, got `{}`",
            eval.split
        )));
    };
    SplitSpec::new(train, val, test, seed).map_err(|e| CliError::Config(e.to_string()))
}

/// File-name-safe form of a class label.
pub fn label_slug(label: &str) -> String {
    label
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.') {
                c
            } else {
                '_'
            }
        })
        .collect()
}

pub fn resample(args: &ResampleArgs) -> Result<(), CliError> {
    let Prepared { config, out } = prepare(&args.common)?;
    prepare_out_dir(&out, args.common.force)?;
    let ds = load(&args.common)?;

    let result = fit_resample(&ds, &config)?;

    let csv_path = out.join("balanced.csv");
    let file = fs::File::create(&csv_path).map_err(|e| write_error(&csv_path, e))?;
    write_csv_with_column(
        BufWriter::new(file),
        &result.balanced.dataset,
        ORIGIN_COLUMN,
        &result.balanced.origin_labels(),
    )
    .map_err(|e| write_error(&csv_path, e))?;
    write_json(&out.join("plan.json"), &result.plan)?;
    for log in &result.logs {
        let path = out.join(format!("trainlog_{}.csv", label_slug(&log.class_label)));
        write_text(&path, &log.log.to_csv())?;
    }

    print!("{}", result.plan.to_table());
    println!(
        "wrote {} rows ({} synthetic) to {}",
        result.balanced.dataset.n_samples(),
        result.balanced.dataset.n_samples() - result.balanced.n_original(),
        csv_path.display()
    );
    Ok(())
}

pub fn pipeline(args: &PipelineArgs) -> Result<(), CliError> {
    let Prepared { config, out } = prepare(&args.common)?;
    let spec = classifier(&args.eval)?;
    let split = split_spec(&args.eval, config.random_seed)?;
    prepare_out_dir(&out, args.common.force)?;
    let ds = load(&args.common)?;

    let report = run_pipeline(&ds, &config, &split, &spec)?;

    let json = report.to_json().map_err(|e| write_error(&out, e))?;
    write_text(&out.join("report.json"), &json)?;
    let text = report.to_text();
    write_text(&out.join("report.txt"), &text)?;
    print!("{text}");
    Ok(())
}

pub fn sweep_cmd(args: &SweepArgs) -> Result<(), CliError> {
    let Prepared { config, out } = prepare(&args.common)?;
    let spec = classifier(&args.eval)?;
    let split = split_spec(&args.eval, config.random_seed)?;
    if args.max_trials == Some(0) {
        return Err(CliError::Config("--max-trials must be at least 1".into()));
    }
    prepare_out_dir(&out, args.common.force)?;
    let ds = load(&args.common)?;

    let options = SweepOptions {
        max_trials: args.max_trials,
        ..SweepOptions::default()
    };
    let outcome = sweep(&ds, &config, &split, &spec, &options)?;
    write_json(&out.join("trials.json"), &outcome.trials)?;

    for t in &outcome.trials {
        let status = match &t.status {
            TrialStatus::Ok {
                validation_macro_f1,
            } => format!("{validation_macro_f1:.4}"),
            TrialStatus::Failed { error } => format!("failed: {error}"),
        };
        println!(
            "trial {:>2}  lr x{:<6} width x{:<4} epochs x{:<2} {status}",
            t.index, t.factors.learning_rate, t.factors.layer_size, t.factors.max_iter
        );
    }

    match &outcome.best {
        Some((index, best)) => {
            write_json(&out.join("best_config.json"), best)?;
            println!(
                "best: trial {index}, validation macro-F1 {:.4}",
                outcome.best_score().unwrap_or(f64::NAN)
            );
            Ok(())
        }
        None => Err(CliError::Divergence(format!(
            "all {} trials failed",
            outcome.trials.len()
        ))),
    }
}
