//! `--config FILE` support. The file holds `key = value` lines whose keys are
//! long flag names; its entries are spliced in front of the command-line
//! flags, so an explicit flag always wins.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{CliError, CliResult};

/// Flags that replace each other rather than conflict.
const ALTERNATIVES: &[&[&str]] = &[&["A", "A-over-b"], &["b", "inv-b"], &["states", "n", "l"]];

/// Parsed `key = value` entries in file order.
pub fn parse_config(text: &str, path: &Path) -> CliResult<Vec<(String, String)>> {
    let mut entries = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let syntax = |reason: &str| CliError::ConfigSyntax { path: path.to_path_buf(), line: i + 1, reason: reason.into() };
        let (key, value) = line.split_once('=').ok_or_else(|| syntax("expected key = value"))?;
        let key = key.trim().trim_start_matches("--");
        if key.is_empty() {
            return Err(syntax("empty key"));
        }
        if key == "config" {
            return Err(syntax("nested config files are not supported"));
        }
        entries.push((key.to_string(), value.trim().to_string()));
    }
    Ok(entries)
}

fn flag_name(token: &str) -> Option<&str> {
    let name = token.strip_prefix("--")?;
    Some(name.split_once('=').map_or(name, |(k, _)| k))
}

fn config_path(args: &[String]) -> Option<PathBuf> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(PathBuf::from(p));
        }
    }
    None
}

/// Insert config entries right after the subcommand token, dropping any
/// entry the command line already sets directly or through an alternative.
pub fn merge_config(args: Vec<String>, subcommands: &[&str]) -> CliResult<Vec<String>> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = fs::read_to_string(&path).map_err(|source| CliError::Config { path: path.clone(), source })?;
    let entries = parse_config(&text, &path)?;
    let Some(pos) = args.iter().skip(1).position(|a| subcommands.contains(&a.as_str())).map(|p| p + 1) else {
        return Ok(args);
    };
    let given: Vec<&str> = args[pos + 1..].iter().filter_map(|a| flag_name(a)).collect();
    let shadowed = |key: &str| {
        given.contains(&key)
            || ALTERNATIVES.iter().any(|group| group.contains(&key) && group.iter().any(|g| given.contains(g)))
    };
    let mut injected = Vec::new();
    for (key, value) in entries {
        if shadowed(&key) {
            continue;
        }
        match value.as_str() {
            "true" => injected.push(format!("--{key}")),
            "false" => {}
            _ => injected.push(format!("--{key}={value}")),
        }
    }
    let mut merged = args[..=pos].to_vec();
    merged.extend(injected);
    merged.extend_from_slice(&args[pos + 1..]);
    Ok(merged)
}
