//! Optional `key = value` defaults file. Blank lines and `#` comments are
//! ignored; command-line flags take precedence over every entry.

use std::path::Path;

use crate::angle::parse_angle_list;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Config {
    pub theta_points: Option<usize>,
    pub phis: Option<Vec<f64>>,
    pub seed: Option<u64>,
    pub shots: Option<u64>,
    pub channels: Option<usize>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut cfg = Config::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected key = value", lineno + 1))?;
            let (key, value) = (key.trim(), value.trim());
            let bad = |what: &str| format!("line {}: invalid {what} {value:?}", lineno + 1);
            match key {
                "theta_points" => cfg.theta_points = Some(value.parse().map_err(|_| bad("theta_points"))?),
                "phis" => cfg.phis = Some(parse_angle_list(value).map_err(|e| format!("line {}: {e}", lineno + 1))?),
                "seed" => cfg.seed = Some(value.parse().map_err(|_| bad("seed"))?),
                "shots" => cfg.shots = Some(value.parse().map_err(|_| bad("shots"))?),
                "channels" => cfg.channels = Some(value.parse().map_err(|_| bad("channels"))?),
                other => return Err(format!("line {}: unknown key {other:?}", lineno + 1)),
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        Self::parse(&text)
    }
}
