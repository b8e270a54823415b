//! `key = value` config files merged into the command line.
//!
//! Keys are long flag names without dashes; `command` names the subcommand.
//! Blank lines and `#` comments are ignored. Flags given on the command line
//! win over file values.

use std::ffi::OsString;
use std::path::Path;

use anyhow::{bail, Context, Result};
use clap::CommandFactory;

use crate::Cli;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub line: usize,
    pub key: String,
    pub value: String,
}

pub fn parse(text: &str) -> Result<Vec<Entry>> {
    let mut out: Vec<Entry> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            bail!("config line {line}: expected `key = value`, got `{content}`");
        };
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_') {
            bail!("config line {line}: invalid key `{key}`");
        }
        let key = key.replace('_', "-");
        if let Some(prev) = out.iter().find(|e| e.key == key) {
            bail!("config line {line}: `{key}` already set on line {}", prev.line);
        }
        out.push(Entry { line, key, value: value.to_owned() });
    }
    Ok(out)
}

fn config_path(args: &[OsString]) -> Option<OsString> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(p.into());
        }
    }
    None
}

fn has_flag(args: &[OsString], long: &str) -> bool {
    let flag = format!("--{long}");
    let with_eq = format!("--{long}=");
    args.iter().any(|a| {
        let s = a.to_string_lossy();
        s == flag || s.starts_with(&with_eq)
    })
}

/// Returns `args` with config-file settings appended for every flag the
/// command line leaves unset.
pub fn merge(args: Vec<OsString>) -> Result<Vec<OsString>> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let path = Path::new(&path);
    let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    let entries = parse(&text).with_context(|| format!("in {}", path.display()))?;

    let root = Cli::command();
    let subcommands: Vec<String> = root.get_subcommands().map(|c| c.get_name().to_owned()).collect();
    let mut args = args;
    let given = args.iter().skip(1).find_map(|a| {
        let s = a.to_string_lossy();
        subcommands.iter().find(|c| **c == s).cloned()
    });
    let command = match (given, entries.iter().find(|e| e.key == "command")) {
        (Some(c), _) => c,
        (None, Some(e)) => {
            if !subcommands.contains(&e.value) {
                bail!("config line {}: unknown command `{}`", e.line, e.value);
            }
            args.insert(1, e.value.clone().into());
            e.value.clone()
        }
        (None, None) => return Ok(args),
    };

    let sub = root.find_subcommand(&command).expect("listed above");
    let known = |key: &str| {
        sub.get_arguments()
            .chain(root.get_arguments())
            .find(|a| a.get_long() == Some(key))
            .map(|a| a.get_action().takes_values())
    };
    for e in entries.iter().filter(|e| e.key != "command" && e.key != "config") {
        let Some(takes_value) = known(&e.key) else {
            bail!("config line {}: `{}` is not an option of `{command}`", e.line, e.key);
        };
        if has_flag(&args, &e.key) {
            continue;
        }
        if takes_value {
            args.push(format!("--{}", e.key).into());
            args.push(e.value.clone().into());
        } else {
            match e.value.as_str() {
                "true" | "yes" | "1" => args.push(format!("--{}", e.key).into()),
                "false" | "no" | "0" => {}
                other => bail!("config line {}: `{}` expects true or false, got `{other}`", e.line, e.key),
            }
        }
    }
    Ok(args)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_reports_line_numbers() {
        let e = parse("# header\ncommand = vc\n\nk = 4  # trailing\nerm_cap=30\n").unwrap();
        assert_eq!(e.len(), 3);
        assert_eq!((e[1].line, e[1].key.as_str(), e[1].value.as_str()), (4, "k", "4"));
        assert_eq!(e[2].key, "erm-cap");
        let err = parse("k = 4\nnonsense\n").unwrap_err().to_string();
        assert!(err.contains("line 2"), "{err}");
        let err = parse("k = 4\nk = 5\n").unwrap_err().to_string();
        assert!(err.contains("line 2") && err.contains("line 1"), "{err}");
    }
}
