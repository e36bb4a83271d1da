use std::path::Path;

use cigan_core::GanConfig;
use serde_json::{Map, Value};

use crate::error::CliError;

pub const ENV_PREFIX: &str = "CIGAN_";

/// Values given on the command line, which win over every other layer.
#[derive(Debug, Clone, Default)]
pub struct FlagOverrides {
    pub seed: Option<u64>,
    pub n_jobs: Option<usize>,
}

/// Builds the oversampler configuration from four layers, highest first:
/// command-line flags, `CIGAN_<KEY>` environment variables, the JSON config
/// file, and built-in defaults.
///
/// Environment values are parsed as JSON when possible and taken as strings
/// otherwise, so `CIGAN_MAX_ITER=20` and `CIGAN_MINOR_CLASSES=all` both work.
pub fn resolve_gan_config<I>(
    file: Option<&Path>,
    env: I,
    flags: &FlagOverrides,
) -> Result<GanConfig, CliError>
where
    I: IntoIterator<Item = (String, String)>,
{
    let mut merged = match file {
        Some(path) => read_config_file(path)?,
        None => Map::new(),
    };

    let keys = config_keys();
    for (name, raw) in env {
        let Some(key) = name.strip_prefix(ENV_PREFIX).map(str::to_ascii_lowercase) else {
            continue;
        };
        if !keys.contains(&key) {
            continue;
        }
        let value = serde_json::from_str(&raw).unwrap_or(Value::String(raw));
        merged.insert(key, value);
    }

    if let Some(seed) = flags.seed {
        merged.insert("random_seed".into(), seed.into());
    }
    if let Some(n_jobs) = flags.n_jobs {
        merged.insert("n_jobs".into(), n_jobs.into());
    }

    let config: GanConfig = serde_json::from_value(Value::Object(merged))
        .map_err(|e| CliError::Config(format!("invalid configuration: {e}")))?;
    config.validate()?;
    Ok(config)
}

fn read_config_file(path: &Path) -> Result<Map<String, Value>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
    match serde_json::from_str(&text) {
        Ok(Value::Object(map)) => Ok(map),
        Ok(_) => Err(CliError::Config(format!(
            "config {} must contain a JSON object",
            path.display()
        ))),
        Err(e) => Err(CliError::Config(format!("config {}: {e}", path.display()))),
    }
}

fn config_keys() -> Vec<String> {
    match serde_json::to_value(GanConfig::default()) {
        Ok(Value::Object(map)) => map.keys().cloned().collect(),
        _ => Vec::new(),
    }
}
