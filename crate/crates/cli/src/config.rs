//! Optional JSON config file; command-line flags take precedence over its
//! entries.

use serde::Deserialize;

#[derive(Debug, Default, Deserialize)]
pub struct FileConfig {
    pub body: Option<String>,
    pub phi: Option<String>,
    pub n: Option<u32>,
    pub delta: Option<f64>,
    pub seed: Option<u64>,
    pub reps: Option<usize>,
    pub out: Option<String>,
    pub format: Option<String>,
    pub point: Option<String>,
    pub dir: Option<String>,
    pub probes: Option<String>,
    pub rays: Option<usize>,
    pub check: Option<String>,
    pub accept: Option<usize>,
    pub label: Option<String>,
}

impl FileConfig {
    pub fn load(path: &str) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {path}: {e}"))?;
        serde_json::from_str(&text).map_err(|e| format!("cannot parse config {path}: {e}"))
    }
}

/// Flag value if present, else config entry, else an error naming the flag.
pub fn pick<T: Clone>(flag: &Option<T>, cfg: &Option<T>, name: &str) -> Result<T, String> {
    flag.clone()
        .or_else(|| cfg.clone())
        .ok_or_else(|| format!("missing required option --{name}"))
}

/// Flag value if present, else config entry, else a default.
pub fn pick_or<T: Clone>(flag: &Option<T>, cfg: &Option<T>, default: T) -> T {
    flag.clone().or_else(|| cfg.clone()).unwrap_or(default)
}
