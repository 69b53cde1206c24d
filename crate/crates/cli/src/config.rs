//! Optional TOML config. A `[bench.run]` table supplies defaults for
//! `bench run`, keyed by long flag name; flags on the command line win.

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};

fn flag_present(args: &[OsString], name: &str) -> bool {
    let long = format!("--{name}");
    let prefixed = format!("{long}=");
    args.iter().any(|a| {
        let a = a.to_string_lossy();
        a == long || a.starts_with(&prefixed)
    })
}

/// Strips `--config FILE` from `args` and appends the file's defaults for
/// the invoked subcommand.
pub fn merge(args: Vec<OsString>) -> Result<Vec<OsString>> {
    let mut out = Vec::with_capacity(args.len());
    let mut path: Option<PathBuf> = None;
    let mut it = args.into_iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy().into_owned();
        if s == "--config" {
            path = Some(it.next().context("--config needs a file")?.into());
        } else if let Some(p) = s.strip_prefix("--config=") {
            path = Some(p.into());
        } else {
            out.push(a);
        }
    }
    let Some(path) = path else { return Ok(out) };
    let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
    let root: toml::Table = text.parse().with_context(|| format!("parsing {}", path.display()))?;

    let words: Vec<String> = out
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .take_while(|a| !a.starts_with('-'))
        .take(2)
        .collect();
    let mut table = Some(&root);
    for w in &words {
        table = table.and_then(|t| t.get(w)).and_then(|v| v.as_table());
    }
    let Some(table) = table else { return Ok(out) };
    for (key, value) in table {
        if value.is_table() || flag_present(&out, key) {
            continue;
        }
        match value {
            toml::Value::Boolean(true) => out.push(format!("--{key}").into()),
            toml::Value::Boolean(false) => {}
            toml::Value::String(s) => out.extend([format!("--{key}").into(), s.into()]),
            toml::Value::Integer(_) | toml::Value::Float(_) => {
                out.extend([format!("--{key}").into(), value.to_string().into()])
            }
            other => bail!("config key `{key}`: unsupported value {other}"),
        }
    }
    Ok(out)
}
