//! Flat TOML configuration merged underneath command-line flags.
//!
//! Each key names a long flag. Entries are turned into arguments and placed
//! before the user's own, so a flag given on the command line wins.

use std::ffi::OsString;
use std::path::Path;

use clap::CommandFactory;

use crate::args::Cli;

pub fn config_path(args: &[OsString]) -> Option<OsString> {
    let mut found = None;
    let mut iter = args.iter();
    while let Some(arg) = iter.next() {
        let Some(s) = arg.to_str() else { continue };
        if s == "--config" {
            found = iter.next().cloned();
        } else if let Some(path) = s.strip_prefix("--config=") {
            found = Some(path.into());
        }
    }
    found
}

fn render(key: &str, value: &toml::Value) -> Result<Option<String>, String> {
    Ok(Some(match value {
        toml::Value::String(s) => s.clone(),
        toml::Value::Integer(i) => i.to_string(),
        toml::Value::Float(f) => f.to_string(),
        toml::Value::Boolean(_) => return Ok(None),
        toml::Value::Array(items) => items
            .iter()
            .map(|v| match render(key, v)? {
                Some(s) => Ok(s),
                None => Err(format!(
                    "config key `{key}`: nested booleans are not allowed"
                )),
            })
            .collect::<Result<Vec<_>, _>>()?
            .join(","),
        _ => return Err(format!("config key `{key}` must be a scalar or array")),
    }))
}

/// Arguments contributed by the config file for `subcommand`. Keys known to
/// another subcommand are skipped; keys known to none are an error.
pub fn config_args(path: &Path, subcommand: &str) -> Result<Vec<String>, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let table: toml::Table = text
        .parse()
        .map_err(|e| format!("invalid config {}: {e}", path.display()))?;

    let cli = Cli::command();
    let knows =
        |cmd: &clap::Command, key: &str| cmd.get_arguments().any(|a| a.get_long() == Some(key));
    let target = cli.find_subcommand(subcommand);

    let mut out = Vec::new();
    for (key, value) in &table {
        if key == "config" {
            return Err("config files cannot include other config files".into());
        }
        match target {
            Some(cmd) if knows(cmd, key) => {}
            _ if cli.get_subcommands().any(|c| knows(c, key)) => continue,
            _ => return Err(format!("unknown config key `{key}`")),
        }
        match (value, render(key, value)?) {
            (toml::Value::Boolean(true), _) => out.push(format!("--{key}")),
            (toml::Value::Boolean(false), _) => {}
            (_, Some(s)) => out.push(format!("--{key}={s}")),
            (_, None) => unreachable!(),
        }
    }
    Ok(out)
}
