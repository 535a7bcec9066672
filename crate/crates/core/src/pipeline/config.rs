//! Line-oriented run configuration: `[section]` headers followed by
//! `key = value` lines; `#` and `;` start comment lines.
//!
//! ```text
//! [wavelet]
//! family = haar        # haar | db4 | sym4 | coif3
//! level = auto         # auto | integer
//!
//! [run]
//! ratio = 0.8
//! alpha = 0.05
//! period = 12
//! horizon = 24
//! seed = 42
//! ljung_box_lags = 12
//! clip_negative = true
//!
//! [sarima]
//! order = auto         # auto | p,d,q,P,D,Q,s
//! max_p = 3
//! max_q = 3
//! max_seasonal_p = 2
//! max_seasonal_q = 2
//! max_d = 1
//! max_seasonal_d = 1
//! constant = auto      # auto | true | false
//!
//! [transformer]
//! preset = tuned       # tuned | compact, applied before the other keys
//! num_blocks = 2
//! d_model = 128
//! head_size = 32
//! num_heads = 4
//! d_ff = 4
//! mlp_units = 64
//! dropout = 0.25
//! mlp_dropout = 0.4
//! window = 12
//! horizon = 1
//! batch_size = 32
//! max_epochs = 100
//! early_stop_patience = 10
//! learning_rate = 0.001
//! validation_fraction = 0.1
//! positional_encoding = true
//! ```
//!
//! Every key is optional; unknown sections or keys and repeated keys are
//! errors. Transformer seeds are derived from `run.seed`.

use std::collections::HashSet;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::transformer::TransformerConfig;

use super::HybridConfig;

struct Entry {
    section: String,
    key: String,
    value: String,
    line: usize,
}

fn number<T: FromStr>(v: &str) -> std::result::Result<T, String> {
    v.parse().map_err(|_| format!("cannot parse '{v}' as a number"))
}

fn boolean(v: &str) -> std::result::Result<bool, String> {
    match v.to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(format!("cannot parse '{v}' as a boolean")),
    }
}

fn auto_or<T>(v: &str, f: impl FnOnce(&str) -> std::result::Result<T, String>) -> std::result::Result<Option<T>, String> {
    if v.eq_ignore_ascii_case("auto") {
        Ok(None)
    } else {
        f(v).map(Some)
    }
}

fn apply(cfg: &mut HybridConfig, e: &Entry) -> std::result::Result<(), String> {
    let v = e.value.as_str();
    let t = &mut cfg.transformer;
    match (e.section.as_str(), e.key.as_str()) {
        ("wavelet", "family") => cfg.family = v.parse().map_err(|err: Error| err.to_string())?,
        ("wavelet", "level") => cfg.level = auto_or(v, number)?,
        ("run", "ratio") => cfg.split_ratio = number(v)?,
        ("run", "alpha") => cfg.alpha = number(v)?,
        ("run", "period") => cfg.period = number(v)?,
        ("run", "horizon") => cfg.horizon = number(v)?,
        ("run", "seed") => cfg.seed = number(v)?,
        ("run", "ljung_box_lags") => cfg.ljung_box_lags = number(v)?,
        ("run", "clip_negative") => cfg.clip_negative = boolean(v)?,
        ("sarima", "order") => cfg.order = auto_or(v, |s| s.parse().map_err(|err: Error| err.to_string()))?,
        ("sarima", "max_p") => cfg.grid.max_p = number(v)?,
        ("sarima", "max_q") => cfg.grid.max_q = number(v)?,
        ("sarima", "max_seasonal_p") => cfg.grid.max_seasonal_p = number(v)?,
        ("sarima", "max_seasonal_q") => cfg.grid.max_seasonal_q = number(v)?,
        ("sarima", "max_d") => cfg.grid.max_d = number(v)?,
        ("sarima", "max_seasonal_d") => cfg.grid.max_seasonal_d = number(v)?,
        ("sarima", "constant") => cfg.grid.constant = auto_or(v, boolean)?,
        ("transformer", "preset") => {}
        ("transformer", "num_blocks") => t.num_blocks = number(v)?,
        ("transformer", "d_model") => t.d_model = number(v)?,
        ("transformer", "head_size") => t.head_size = number(v)?,
        ("transformer", "num_heads") => t.num_heads = number(v)?,
        ("transformer", "d_ff") => t.d_ff = number(v)?,
        ("transformer", "mlp_units") => t.mlp_units = number(v)?,
        ("transformer", "dropout") => t.dropout = number(v)?,
        ("transformer", "mlp_dropout") => t.mlp_dropout = number(v)?,
        ("transformer", "window") => t.window = number(v)?,
        ("transformer", "horizon") => t.horizon = number(v)?,
        ("transformer", "batch_size") => t.batch_size = number(v)?,
        ("transformer", "max_epochs") => t.max_epochs = number(v)?,
        ("transformer", "early_stop_patience") => t.early_stop_patience = number(v)?,
        ("transformer", "learning_rate") => t.learning_rate = number(v)?,
        ("transformer", "validation_fraction") => t.validation_fraction = number(v)?,
        ("transformer", "positional_encoding") => t.use_positional_encoding = boolean(v)?,
        (section, key) => return Err(format!("unknown key '{key}' in section [{section}]")),
    }
    Ok(())
}

const SECTIONS: [&str; 4] = ["wavelet", "run", "sarima", "transformer"];

/// Parses a configuration, starting from [`HybridConfig::default`].
pub fn parse_config(text: &str) -> Result<HybridConfig> {
    let mut section: Option<(String, usize)> = None;
    let mut entries = Vec::new();
    let mut seen = HashSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let err = |message: String| Error::Config { line, message };
        let s = raw.trim();
        if s.is_empty() || s.starts_with('#') || s.starts_with(';') {
            continue;
        }
        if let Some(rest) = s.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| err(format!("malformed section header '{s}'")))?
                .trim()
                .to_ascii_lowercase();
            if !SECTIONS.contains(&name.as_str()) {
                return Err(err(format!("unknown section [{name}]")));
            }
            section = Some((name, line));
            continue;
        }
        let (key, value) = s
            .split_once('=')
            .ok_or_else(|| err(format!("expected 'key = value', found '{s}'")))?;
        let value = value.split_once(" #").map_or(value, |(v, _)| v).trim();
        let key = key.trim().to_ascii_lowercase();
        let (sec, _) = section
            .as_ref()
            .ok_or_else(|| err(format!("key '{key}' appears before any [section]")))?;
        if !seen.insert((sec.clone(), key.clone())) {
            return Err(err(format!("key '{key}' repeated in section [{sec}]")));
        }
        entries.push(Entry {
            section: sec.clone(),
            key,
            value: value.to_string(),
            line,
        });
    }

    let mut cfg = HybridConfig::default();
    if let Some(e) = entries.iter().find(|e| e.section == "transformer" && e.key == "preset") {
        cfg.transformer = match e.value.to_ascii_lowercase().as_str() {
            "tuned" => TransformerConfig::tuned(),
            "compact" => TransformerConfig::compact(),
            other => {
                return Err(Error::Config {
                    line: e.line,
                    message: format!("unknown transformer preset '{other}' (expected tuned or compact)"),
                })
            }
        };
    }
    for e in &entries {
        apply(&mut cfg, e).map_err(|message| Error::Config { line: e.line, message })?;
    }
    cfg.validate().map_err(|err| Error::Config {
        line: 0,
        message: err.to_string(),
    })?;
    Ok(cfg)
}

pub fn load_config(path: impl AsRef<Path>) -> Result<HybridConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&text)
}
