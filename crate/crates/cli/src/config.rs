//! Optional `key = value` file overriding search defaults.

use std::path::Path;

use anyhow::{bail, Context, Result};
use hkbound_core::rational;
use hkbound_core::SearchParams;
use serde::Deserialize;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub s_lo: Option<toml::Value>,
    pub s_hi: Option<toml::Value>,
    pub t_lo: Option<toml::Value>,
    pub t_hi: Option<toml::Value>,
    pub grid_s: Option<usize>,
    pub grid_t: Option<usize>,
    pub rounds: Option<u32>,
    pub max_denominator: Option<u64>,
}

fn exact(key: &str, value: &toml::Value) -> Result<rational::Rational> {
    let text = match value {
        toml::Value::String(s) => s.clone(),
        toml::Value::Integer(i) => i.to_string(),
        // the decimal text is exact, the f64 is not
        toml::Value::Float(f) => f.to_string(),
        other => bail!("{key}: expected a number or a fraction string, got {other}"),
    };
    rational::parse(&text).with_context(|| format!("{key} = {text}"))
}

impl Config {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn apply(&self, params: &mut SearchParams) -> Result<()> {
        if let Some(v) = &self.s_lo {
            params.s_lo = exact("s_lo", v)?;
        }
        if let Some(v) = &self.s_hi {
            params.s_hi = exact("s_hi", v)?;
        }
        if let Some(v) = &self.t_lo {
            params.t_lo = exact("t_lo", v)?;
        }
        if let Some(v) = &self.t_hi {
            params.t_hi = exact("t_hi", v)?;
        }
        if let Some(v) = self.grid_s {
            params.grid_s = v;
        }
        if let Some(v) = self.grid_t {
            params.grid_t = v;
        }
        if let Some(v) = self.rounds {
            params.rounds = v;
        }
        if let Some(v) = self.max_denominator {
            params.max_denominator = v;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides_only_given_keys() {
        let cfg: Config = toml::from_str("grid_s = 50\ns_hi = \"9/2\"\nt_hi = 0.5").unwrap();
        let mut params = SearchParams::for_dim(7);
        cfg.apply(&mut params).unwrap();
        assert_eq!(params.grid_s, 50);
        assert_eq!(params.grid_t, 100);
        assert_eq!(params.s_hi, rational::frac(9, 2));
        assert_eq!(params.t_hi, rational::frac(1, 2));
    }

    #[test]
    fn unknown_keys_are_errors() {
        assert!(toml::from_str::<Config>("grid = 5").is_err());
    }
}
