//! Flat `key=value` run manifests.

use std::collections::BTreeMap;
use std::fmt::Write as _;

/// Everything needed to reproduce a clustering run, plus what it cost.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunManifest {
    pub input: String,
    pub format: String,
    pub p: usize,
    pub h: usize,
    pub engine: String,
    pub lambda: f64,
    pub symmetrize: bool,
    pub strict_band: bool,
    pub selection: String,
    pub seed: Option<u64>,
    pub wall_time_s: f64,
    pub pencil_entries: usize,
    pub heap_max: usize,
}

impl RunManifest {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let seed = self
            .seed
            .map_or_else(|| "none".to_string(), |v| v.to_string());
        for (k, v) in [
            ("input", self.input.clone()),
            ("format", self.format.clone()),
            ("p", self.p.to_string()),
            ("h", self.h.to_string()),
            ("engine", self.engine.clone()),
            ("lambda", self.lambda.to_string()),
            ("symmetrize", self.symmetrize.to_string()),
            ("strict_band", self.strict_band.to_string()),
            ("selection", self.selection.clone()),
            ("seed", seed),
            ("wall_time_s", format!("{:.6}", self.wall_time_s)),
            ("pencil_entries", self.pencil_entries.to_string()),
            ("heap_max", self.heap_max.to_string()),
        ] {
            let _ = writeln!(s, "{k}={v}");
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let mut kv = BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected key=value", n + 1))?;
            kv.insert(k.trim().to_string(), v.trim().to_string());
        }
        let get = |k: &str| {
            kv.get(k)
                .cloned()
                .ok_or_else(|| format!("missing key {k:?}"))
        };
        let num = |k: &str| -> Result<usize, String> {
            get(k)?
                .parse()
                .map_err(|_| format!("invalid value for {k:?}"))
        };
        let flag = |k: &str| {
            kv.get(k).map_or(Ok(false), |v| {
                v.parse().map_err(|_| format!("invalid value for {k:?}"))
            })
        };
        Ok(Self {
            input: get("input")?,
            format: get("format")?,
            p: num("p")?,
            h: num("h")?,
            engine: get("engine")?,
            lambda: get("lambda")?
                .parse()
                .map_err(|_| "invalid value for \"lambda\"".to_string())?,
            symmetrize: flag("symmetrize")?,
            strict_band: flag("strict_band")?,
            selection: kv
                .get("selection")
                .cloned()
                .unwrap_or_else(|| "none".into()),
            seed: kv.get("seed").and_then(|s| s.parse().ok()),
            wall_time_s: kv
                .get("wall_time_s")
                .and_then(|s| s.parse().ok())
                .unwrap_or(0.0),
            pencil_entries: kv
                .get("pencil_entries")
                .and_then(|s| s.parse().ok())
                .unwrap_or(0),
            heap_max: kv.get("heap_max").and_then(|s| s.parse().ok()).unwrap_or(0),
        })
    }
}
