//! Run configuration: defaults, a flat `key = value` file format mirroring
//! the command-line flags, and resolution into module specs and windows.

use std::fmt::Write as _;
use std::path::PathBuf;

use serde::Serialize;
use sl3theta_core::exactalg::{int, parse_rational, rat, Rational};
use sl3theta_core::qseries::Window;
use sl3theta_core::verma::{ModuleKind, ModuleSpec};
use sl3theta_core::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    pub fn parse(text: &str) -> Result<Format> {
        match text.trim().to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::Usage(format!("unknown format {text:?} (expected json or csv)"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

/// Partially specified settings, as read from a file or from flags.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Settings {
    pub module: Option<ModuleKind>,
    pub lambda1: Option<Rational>,
    pub lambda2: Option<Rational>,
    pub depth: Option<usize>,
    pub b: Option<i64>,
    pub d: Option<i64>,
    pub t: Option<i64>,
    pub cap: Option<i64>,
    pub samples: Option<Vec<(Rational, Rational)>>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Usage(format!("invalid value {value:?} for {key}")))
}

/// Parses `"l1:l2,l1:l2,..."`.
pub fn parse_samples(text: &str) -> Result<Vec<(Rational, Rational)>> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|pair| {
            let (a, b) = pair
                .split_once(':')
                .ok_or_else(|| Error::Usage(format!("sample {pair:?} is not of the form l1:l2")))?;
            Ok((parse_rational(a)?, parse_rational(b)?))
        })
        .collect()
}

pub fn format_samples(samples: &[(Rational, Rational)]) -> String {
    samples
        .iter()
        .map(|(a, b)| format!("{a}:{b}"))
        .collect::<Vec<_>>()
        .join(",")
}

impl Settings {
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "module" => self.module = Some(ModuleKind::parse(value)?),
            "lambda1" => self.lambda1 = Some(parse_rational(value)?),
            "lambda2" => self.lambda2 = Some(parse_rational(value)?),
            "depth" => self.depth = Some(parse_num(key, value)?),
            "B" => self.b = Some(parse_num(key, value)?),
            "D" => self.d = Some(parse_num(key, value)?),
            "T" => self.t = Some(parse_num(key, value)?),
            "cap" => self.cap = Some(parse_num(key, value)?),
            "samples" => self.samples = Some(parse_samples(value)?),
            "output" => self.output = Some(PathBuf::from(value.trim())),
            "format" => self.format = Some(Format::parse(value)?),
            _ => return Err(Error::Usage(format!("unknown configuration key {key:?}"))),
        }
        Ok(())
    }

    /// Reads `key = value` lines; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Settings> {
        let mut out = Settings::default();
        for (no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Usage(format!("config line {}: expected key = value", no + 1)))?;
            out.set(key.trim(), value.trim())?;
        }
        Ok(out)
    }

    /// Values set in `over` win.
    pub fn overlay(self, over: Settings) -> Settings {
        Settings {
            module: over.module.or(self.module),
            lambda1: over.lambda1.or(self.lambda1),
            lambda2: over.lambda2.or(self.lambda2),
            depth: over.depth.or(self.depth),
            b: over.b.or(self.b),
            d: over.d.or(self.d),
            t: over.t.or(self.t),
            cap: over.cap.or(self.cap),
            samples: over.samples.or(self.samples),
            output: over.output.or(self.output),
            format: over.format.or(self.format),
        }
    }

    pub fn resolve(self) -> Result<RunConfig> {
        let module = self.module.unwrap_or(ModuleKind::Borel);
        let lambda2 = self.lambda2.unwrap_or_else(|| match module {
            ModuleKind::Borel => rat(5, 7),
            ModuleKind::Parabolic => int(1),
        });
        let cfg = RunConfig {
            module,
            lambda1: self.lambda1.unwrap_or_else(|| rat(7, 3)),
            lambda2,
            depth: self.depth.unwrap_or(10),
            b: self.b.unwrap_or(5),
            d: self.d.unwrap_or(8),
            t: self.t.unwrap_or(8),
            cap: self.cap,
            samples: self.samples.unwrap_or_default(),
            output: self.output,
            format: self.format.unwrap_or(Format::Json),
        };
        cfg.window()?;
        cfg.spec()?;
        Ok(cfg)
    }
}

/// Fully resolved run configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub module: ModuleKind,
    pub lambda1: Rational,
    pub lambda2: Rational,
    pub depth: usize,
    pub b: i64,
    pub d: i64,
    pub t: i64,
    pub cap: Option<i64>,
    /// Explicit λ samples; empty means the built-in defaults.
    pub samples: Vec<(Rational, Rational)>,
    pub output: Option<PathBuf>,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        Settings::default().resolve().expect("defaults are valid")
    }
}

impl RunConfig {
    pub fn spec(&self) -> Result<ModuleSpec> {
        ModuleSpec::new(self.module, self.lambda1.clone(), self.lambda2.clone(), self.depth)
    }

    pub fn window(&self) -> Result<Window> {
        let w = Window::new(self.b, self.d, self.t)?;
        Ok(match self.cap {
            Some(c) => w.with_cap(c),
            None => w,
        })
    }

    /// The configuration in the file format accepted by [`Settings::parse`].
    pub fn to_file_string(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "module = {}", self.module.name());
        let _ = writeln!(s, "lambda1 = {}", self.lambda1);
        let _ = writeln!(s, "lambda2 = {}", self.lambda2);
        let _ = writeln!(s, "depth = {}", self.depth);
        let _ = writeln!(s, "B = {}", self.b);
        let _ = writeln!(s, "D = {}", self.d);
        let _ = writeln!(s, "T = {}", self.t);
        if let Some(cap) = self.cap {
            let _ = writeln!(s, "cap = {cap}");
        }
        if !self.samples.is_empty() {
            let _ = writeln!(s, "samples = {}", format_samples(&self.samples));
        }
        if let Some(out) = &self.output {
            let _ = writeln!(s, "output = {}", out.display());
        }
        let _ = writeln!(s, "format = {}", self.format.name());
        s
    }

    pub fn from_file_str(text: &str) -> Result<RunConfig> {
        Settings::parse(text)?.resolve()
    }
}

/// Configuration as echoed in reports (the output path is left out so the
/// report does not depend on where it is written).
#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ConfigView {
    pub module: ModuleKind,
    pub lambda1: String,
    pub lambda2: String,
    pub depth: usize,
    pub window: Window,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub lambda_samples: Vec<[String; 2]>,
    pub format: Format,
}

impl RunConfig {
    pub fn view(&self) -> Result<ConfigView> {
        Ok(ConfigView {
            module: self.module,
            lambda1: self.lambda1.to_string(),
            lambda2: self.lambda2.to_string(),
            depth: self.depth,
            window: self.window()?,
            lambda_samples: self.samples.iter().map(|(a, b)| [a.to_string(), b.to_string()]).collect(),
            format: self.format,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let cfg = RunConfig::default();
        assert_eq!(cfg.module, ModuleKind::Borel);
        assert_eq!((cfg.lambda1.clone(), cfg.lambda2.clone()), (rat(7, 3), rat(5, 7)));
        assert_eq!((cfg.depth, cfg.b, cfg.d, cfg.t, cfg.cap), (10, 5, 8, 8, None));
        let p = Settings {
            module: Some(ModuleKind::Parabolic),
            ..Settings::default()
        }
        .resolve()
        .unwrap();
        assert_eq!(p.lambda2, int(1));
    }

    #[test]
    fn round_trip() {
        let cfg = RunConfig {
            module: ModuleKind::Parabolic,
            lambda1: rat(-13, 4),
            lambda2: int(3),
            depth: 12,
            b: 3,
            d: 6,
            t: 4,
            cap: Some(5),
            samples: vec![(rat(-13, 4), int(3)), (rat(1, 2), int(3))],
            output: Some(PathBuf::from("out/report.json")),
            format: Format::Csv,
        };
        assert_eq!(RunConfig::from_file_str(&cfg.to_file_string()).unwrap(), cfg);
        let d = RunConfig::default();
        assert_eq!(RunConfig::from_file_str(&d.to_file_string()).unwrap(), d);
    }

    #[test]
    fn overlay_prefers_flags() {
        let file = Settings::parse("depth = 4\nlambda1 = 1/2\n# comment\n").unwrap();
        let flags = Settings {
            depth: Some(7),
            ..Settings::default()
        };
        let cfg = file.overlay(flags).resolve().unwrap();
        assert_eq!((cfg.depth, cfg.lambda1), (7, rat(1, 2)));
    }

    #[test]
    fn bad_input_is_rejected() {
        assert!(Settings::parse("depth 4").is_err());
        assert!(Settings::parse("colour = red").is_err());
        assert!(Settings::parse("lambda1 = 1/0").is_err());
        assert!(Settings::parse("module = parabolic\nlambda2 = 1/2").unwrap().resolve().is_err());
        assert!(Settings::parse("B = -1").unwrap().resolve().is_err());
        assert_eq!(parse_samples("7/3:5/7,11/5:-3/7").unwrap().len(), 2);
        assert!(parse_samples("7/3").is_err());
    }
}
