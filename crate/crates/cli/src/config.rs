//! Config files, presets and point lists.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use tropdyn::dynamics3d::SurfaceSpec;
use tropdyn::elliptic::CurveSpec;
use tropdyn::pl1d::PLMap1D;
use tropdyn::presets;
use tropdyn::rational::{int, parse_rational, rat, Display, Rational};
use tropdyn::trop::TropicalPolynomial;

use crate::CliError;

/// `{"coefficients": {"i,j,k": "p/q", …}, "level": "p/q"}`; missing keys are
/// `+∞`. The planar variant uses keys `"i,j"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceConfig {
    pub coefficients: BTreeMap<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<Value>,
}

fn rational_value(v: &Value, what: &str) -> Result<Rational, CliError> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        other => return Err(CliError::Domain(format!("{what}: expected a rational, found {other}"))),
    };
    parse_rational(&text).map_err(|e| CliError::Domain(format!("{what}: {e}")))
}

fn parse_key(key: &str, dim: usize) -> Result<Vec<i64>, CliError> {
    let bad = || CliError::Domain(format!("coefficient key `{key}` is not {dim} entries from -1, 0, 1"));
    let slope: Vec<i64> = key
        .split(',')
        .map(|s| s.trim().parse::<i64>().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    if slope.len() != dim || slope.iter().any(|s| s.abs() > 1) {
        return Err(bad());
    }
    if slope.iter().all(|&s| s == 0) {
        return Err(CliError::Domain(format!(
            "coefficient key `{key}` is the central monomial; its coefficient is the level"
        )));
    }
    Ok(slope)
}

impl SurfaceConfig {
    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Domain(format!("{}: {e}", path.display())))
    }

    pub fn polynomial(&self, dim: usize) -> Result<TropicalPolynomial, CliError> {
        let terms = self
            .coefficients
            .iter()
            .map(|(k, v)| Ok((parse_key(k, dim)?, rational_value(v, k)?)))
            .collect::<Result<Vec<_>, CliError>>()?;
        TropicalPolynomial::from_terms(terms).map_err(|e| CliError::Domain(e.to_string()))
    }

    pub fn level(&self) -> Result<Option<Rational>, CliError> {
        self.level.as_ref().map(|v| rational_value(v, "level")).transpose()
    }

    pub fn surface(&self, level: Option<Rational>) -> Result<SurfaceSpec, CliError> {
        let level = level
            .or(self.level()?)
            .ok_or_else(|| CliError::Domain("no level in the config and no --level given".into()))?;
        SurfaceSpec::new(self.polynomial(3)?, level).map_err(|e| CliError::Domain(e.to_string()))
    }

    pub fn curve(&self, level: Option<Rational>) -> Result<CurveSpec, CliError> {
        let hcirc = self.polynomial(2)?;
        let level = match level.or(self.level()?) {
            Some(l) => l,
            None => tropdyn::geometry::max_value(&hcirc)
                .map(|(m, _)| m - int(1))
                .map_err(|e| CliError::Domain(e.to_string()))?,
        };
        CurveSpec::new(hcirc, level).map_err(|e| CliError::Domain(e.to_string()))
    }

    pub fn from_polynomial(hcirc: &TropicalPolynomial, level: Option<&Rational>) -> Self {
        let coefficients = hcirc
            .forms()
            .iter()
            .map(|f| {
                let key = f.slope().iter().map(|s| s.to_string()).collect::<Vec<_>>().join(",");
                (key, Value::String(Display(f.constant()).to_string()))
            })
            .collect();
        Self { coefficients, level: level.map(|l| Value::String(Display(l).to_string())) }
    }

    pub fn from_surface(spec: &SurfaceSpec) -> Self {
        Self::from_polynomial(spec.hcirc(), Some(spec.level()))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data");
        s.push('\n');
        s
    }
}

/// `kummer`, `rubik` / `rubik:<s>` (level `-s`), `random:<seed>`, or a path.
pub fn load_surface(source: &str, level: Option<Rational>) -> Result<SurfaceSpec, CliError> {
    let with_level = |spec: SurfaceSpec| match &level {
        Some(l) => spec.with_level(l.clone()),
        None => spec,
    };
    if source == "kummer" {
        return Ok(with_level(presets::kummer_surface()));
    }
    if source == "rubik" {
        let (p, q) = presets::RUBIK_DEFAULT_S;
        return Ok(with_level(presets::rubik_surface(&rat(p, q))));
    }
    if let Some(s) = source.strip_prefix("rubik:") {
        let s = parse_rational(s).map_err(|e| CliError::Domain(format!("rubik preset: {e}")))?;
        return Ok(with_level(presets::rubik_surface(&s)));
    }
    if let Some(seed) = source.strip_prefix("random:") {
        let seed = parse_seed(seed)?;
        return Ok(with_level(presets::random_surface(seed, &int(2))));
    }
    SurfaceConfig::read(Path::new(source))?.surface(level)
}

/// `symmetric`, `random:<seed>`, or a path to a planar config.
pub fn load_curve(source: &str, level: Option<Rational>) -> Result<CurveSpec, CliError> {
    let with_level = |curve: CurveSpec| match &level {
        Some(l) => curve.with_level(l.clone()),
        None => curve,
    };
    if source == "symmetric" {
        return Ok(with_level(presets::symmetric_curve()));
    }
    if let Some(seed) = source.strip_prefix("random:") {
        return Ok(with_level(presets::random_curve(parse_seed(seed)?, &int(2))));
    }
    SurfaceConfig::read(Path::new(source))?.curve(level)
}

/// `tent` or a path to a map JSON `{"degree": n, "f0": [...], "f1": [...]}`.
pub fn load_map(source: &str) -> Result<PLMap1D, CliError> {
    if source == "tent" {
        return Ok(presets::tent_map());
    }
    let text = std::fs::read_to_string(source).map_err(|e| CliError::Io(format!("{source}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| CliError::Domain(format!("{source}: {e}")))
}

fn parse_seed(s: &str) -> Result<u64, CliError> {
    s.parse().map_err(|_| CliError::Domain(format!("bad seed `{s}`")))
}

pub fn parse_point(text: &str, dim: usize) -> Result<Vec<Rational>, CliError> {
    let p: Vec<Rational> = text
        .split(',')
        .map(|s| parse_rational(s).map_err(|e| CliError::Domain(format!("point `{text}`: {e}"))))
        .collect::<Result<_, _>>()?;
    if p.len() != dim {
        return Err(CliError::Domain(format!("point `{text}` needs {dim} coordinates")));
    }
    Ok(p)
}

/// One point per non-empty line; a first line that does not parse is taken
/// as a header.
pub fn read_points(path: &Path, dim: usize) -> Result<Vec<Vec<Rational>>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().map(str::trim).filter(|l| !l.is_empty()).enumerate() {
        match parse_point(line, dim) {
            Ok(p) => out.push(p),
            Err(_) if i == 0 => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}
