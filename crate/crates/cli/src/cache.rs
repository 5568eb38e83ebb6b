//! On-disk cache of `log(1 + N(z))` keyed by variable count and order.

use std::fs;
use std::io::ErrorKind;
use std::path::Path;

use polycount::counts::{count_monic_total, log_series};
use polycount::{Result, ZSeries};
use serde::{Deserialize, Serialize};
use serde_json::Value;

const VERSION: &str = "v1";

#[derive(Serialize, Deserialize)]
struct CacheFile {
    version: String,
    entries: Vec<Entry>,
}

#[derive(Serialize, Deserialize)]
struct Entry {
    nu: u32,
    trunc: u32,
    series: ZSeries,
}

fn warn(path: &Path, msg: &str) {
    eprintln!("warning: cache {}: {msg}; recomputing", path.display());
}

fn load(path: &Path) -> Vec<Entry> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == ErrorKind::NotFound => return Vec::new(),
        Err(e) => {
            warn(path, &e.to_string());
            return Vec::new();
        }
    };
    let value: Value = match serde_json::from_str(&text) {
        Ok(v) => v,
        Err(e) => {
            warn(path, &format!("unreadable ({e})"));
            return Vec::new();
        }
    };
    match value.get("version").and_then(Value::as_str) {
        Some(VERSION) => {}
        other => {
            warn(path, &format!("version {other:?} is not {VERSION:?}"));
            return Vec::new();
        }
    }
    match serde_json::from_value::<CacheFile>(value) {
        Ok(f) => f.entries,
        Err(e) => {
            warn(path, &format!("malformed ({e})"));
            Vec::new()
        }
    }
}

// cheap structural checks; a stale or hand-edited entry must not be misread
fn plausible(e: &Entry) -> bool {
    e.series.trunc() == e.trunc as usize
        && match (e.series.coeff(1), count_monic_total(e.nu, 1)) {
            (Ok(c), Ok(n1)) => *c == n1,
            _ => false,
        }
}

fn save(path: &Path, entries: Vec<Entry>) {
    let file = CacheFile {
        version: VERSION.to_string(),
        entries,
    };
    let tmp = path.with_extension("tmp");
    let result = serde_json::to_string(&file)
        .map_err(|e| e.to_string())
        .and_then(|s| fs::write(&tmp, s).map_err(|e| e.to_string()))
        .and_then(|_| fs::rename(&tmp, path).map_err(|e| e.to_string()));
    if let Err(e) = result {
        eprintln!("warning: could not write cache {}: {e}", path.display());
    }
}

/// `log(1 + N(z))` to order `trunc`, read from or added to the cache at `path`.
pub fn cached_log_series(nu: u32, trunc: u32, path: Option<&Path>) -> Result<ZSeries> {
    let Some(path) = path else {
        return log_series(nu, trunc);
    };
    let mut entries = load(path);
    let before = entries.len();
    entries.retain(plausible);
    if entries.len() != before {
        warn(path, "dropped entries that failed validation");
    }
    if let Some(e) = entries.iter().find(|e| e.nu == nu && e.trunc >= trunc) {
        return e.series.truncated(trunc as usize);
    }
    let series = log_series(nu, trunc)?;
    entries.retain(|e| e.nu != nu);
    entries.push(Entry {
        nu,
        trunc,
        series: series.clone(),
    });
    entries.sort_by_key(|e| e.nu);
    save(path, entries);
    Ok(series)
}
