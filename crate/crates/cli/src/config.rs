//! Run settings: flags override a `key=value` file, which overrides defaults.

use std::path::PathBuf;

use num_rational::BigRational;
use tits_eisenstein::exactalg::parse_rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Settings as given, before defaults.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Partial {
    pub q: Option<u32>,
    pub m: Option<u32>,
    pub i: Option<u8>,
    pub radius: Option<u32>,
    pub degree: Option<usize>,
    pub precision: Option<usize>,
    pub z0: Option<String>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
}

impl Partial {
    /// `self` wins where both are set.
    pub fn over(self, base: Partial) -> Partial {
        Partial {
            q: self.q.or(base.q),
            m: self.m.or(base.m),
            i: self.i.or(base.i),
            radius: self.radius.or(base.radius),
            degree: self.degree.or(base.degree),
            precision: self.precision.or(base.precision),
            z0: self.z0.or(base.z0),
            output: self.output.or(base.output),
            format: self.format.or(base.format),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub q: u32,
    pub m: u32,
    pub i: u8,
    pub radius: u32,
    pub degree: usize,
    /// `None` means the oracle default `2 (D + R + 4)`.
    pub precision: Option<usize>,
    /// `None` keeps values symbolic where that is possible.
    pub z0: Option<BigRational>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
}

pub const DEFAULT_Q: u32 = 2;
pub const DEFAULT_M: u32 = 2;
pub const DEFAULT_RADIUS: u32 = 6;
pub const DEFAULT_DEGREE: usize = 8;

/// Parses `key=value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<Partial, String> {
    let mut out = Partial::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| format!("line {}: expected key=value", lineno + 1))?;
        let (key, value) = (key.trim(), value.trim());
        let bad = |what: &str| format!("line {}: bad {what} '{value}'", lineno + 1);
        match key {
            "q" => out.q = Some(value.parse().map_err(|_| bad("q"))?),
            "m" => out.m = Some(value.parse().map_err(|_| bad("m"))?),
            "i" => out.i = Some(value.parse().map_err(|_| bad("i"))?),
            "radius" => out.radius = Some(value.parse().map_err(|_| bad("radius"))?),
            "degree" | "deg" => out.degree = Some(value.parse().map_err(|_| bad("degree"))?),
            "precision" => out.precision = Some(value.parse().map_err(|_| bad("precision"))?),
            "z0" => out.z0 = Some(value.to_string()),
            "output" => out.output = Some(PathBuf::from(value)),
            "format" => {
                out.format = Some(match value {
                    "json" => Format::Json,
                    "csv" => Format::Csv,
                    _ => return Err(bad("format")),
                })
            }
            _ => return Err(format!("line {}: unknown key '{key}'", lineno + 1)),
        }
    }
    Ok(out)
}

impl RunConfig {
    pub fn resolve(p: Partial) -> Result<RunConfig, String> {
        let cfg = RunConfig {
            q: p.q.unwrap_or(DEFAULT_Q),
            m: p.m.unwrap_or(DEFAULT_M),
            i: p.i.unwrap_or(1),
            radius: p.radius.unwrap_or(DEFAULT_RADIUS),
            degree: p.degree.unwrap_or(DEFAULT_DEGREE),
            precision: p.precision,
            z0: p.z0.as_deref().map(parse_rational).transpose().map_err(|e| format!("z0: {e}"))?,
            output: p.output,
            format: p.format,
        };
        if cfg.q < 2 {
            return Err(format!("q must be at least 2, got {}", cfg.q));
        }
        if cfg.m < 2 {
            return Err(format!("m must be at least 2, got {}", cfg.m));
        }
        if cfg.i != 1 && cfg.i != 2 {
            return Err(format!("i must be 1 or 2, got {}", cfg.i));
        }
        if cfg.radius < 1 {
            return Err("radius must be at least 1".into());
        }
        Ok(cfg)
    }

    /// `z0`, or `1/4` when unset.
    pub fn z0_or_default(&self) -> BigRational {
        self.z0.clone().unwrap_or_else(|| BigRational::new(1.into(), 4.into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_flags() {
        let file = parse_config("# defaults\nq = 3\nradius=4\nz0=1/5\nformat=csv\n").unwrap();
        let flags = Partial { q: Some(5), ..Default::default() };
        let cfg = RunConfig::resolve(flags.over(file)).unwrap();
        assert_eq!((cfg.q, cfg.radius, cfg.format), (5, 4, Some(Format::Csv)));
        assert_eq!(cfg.z0, Some(BigRational::new(1.into(), 5.into())));
        assert_eq!(cfg.m, DEFAULT_M);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_config("colour=red").is_err());
        assert!(parse_config("q").is_err());
        assert!(parse_config("q=two").is_err());
        assert!(RunConfig::resolve(Partial { q: Some(1), ..Default::default() }).is_err());
        assert!(RunConfig::resolve(Partial { i: Some(3), ..Default::default() }).is_err());
        assert!(RunConfig::resolve(Partial { z0: Some("0.25".into()), ..Default::default() }).is_err());
    }
}
