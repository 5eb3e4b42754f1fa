//! Parametric distribution specs such as `vm:mu=0,kappa=2`, `uniform:sphere` or
//! `pointmass:theta=0`.

use std::collections::BTreeMap;
use std::str::FromStr;

use dirbreak_core::{Direction, Measure, Space};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum DistSpec {
    VonMises { mu: f64, kappa: f64 },
    Uniform(Space),
    PointMass(PointAt),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PointAt {
    Angle(f64),
    Vector([f64; 3]),
}

impl FromStr for DistSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let bad = |msg: String| CliError::Input(format!("--dist {s:?}: {msg}"));
        let (name, rest) = match s.split_once(':') {
            Some((n, r)) => (n.trim(), r.trim()),
            None => (s.trim(), ""),
        };
        match name {
            "uniform" => match rest {
                "" | "circle" => Ok(DistSpec::Uniform(Space::Circle)),
                "sphere" => Ok(DistSpec::Uniform(Space::Sphere)),
                other => Err(bad(format!("unknown space {other:?}"))),
            },
            "vm" | "vonmises" => {
                let mut kv = params(rest).map_err(bad)?;
                let mu = kv.remove("mu").unwrap_or(0.0);
                let kappa = kv
                    .remove("kappa")
                    .ok_or_else(|| bad("missing kappa".into()))?;
                no_leftovers(&kv).map_err(bad)?;
                if !(kappa.is_finite() && kappa >= 0.0) {
                    return Err(bad(format!("kappa must be nonnegative, got {kappa}")));
                }
                Ok(DistSpec::VonMises { mu, kappa })
            }
            "pointmass" | "delta" => {
                let mut kv = params(rest).map_err(bad)?;
                let at = if let Some(theta) = kv.remove("theta") {
                    PointAt::Angle(theta)
                } else {
                    let mut coord =
                        |k: &str| kv.remove(k).ok_or_else(|| bad(format!("missing {k}")));
                    PointAt::Vector([coord("x")?, coord("y")?, coord("z")?])
                };
                no_leftovers(&kv).map_err(bad)?;
                Ok(DistSpec::PointMass(at))
            }
            other => Err(bad(format!("unknown distribution {other:?}"))),
        }
    }
}

fn params(rest: &str) -> Result<BTreeMap<String, f64>, String> {
    let mut out = BTreeMap::new();
    for item in rest.split(',').map(str::trim).filter(|i| !i.is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| format!("expected key=value, got {item:?}"))?;
        let v: f64 = v.trim().parse().map_err(|e| format!("{}: {e}", k.trim()))?;
        if !v.is_finite() {
            return Err(format!("{} is not finite", k.trim()));
        }
        if out.insert(k.trim().to_string(), v).is_some() {
            return Err(format!("duplicate key {}", k.trim()));
        }
    }
    Ok(out)
}

fn no_leftovers(kv: &BTreeMap<String, f64>) -> Result<(), String> {
    match kv.keys().next() {
        Some(k) => Err(format!("unknown parameter {k:?}")),
        None => Ok(()),
    }
}

impl DistSpec {
    /// Builds the measure; angles are read as degrees when `degrees` is set.
    pub fn measure(&self, degrees: bool) -> Result<Measure, CliError> {
        let rad = |a: f64| if degrees { a.to_radians() } else { a };
        Ok(match *self {
            DistSpec::VonMises { mu, kappa } => Measure::von_mises(rad(mu), kappa)?,
            DistSpec::Uniform(space) => Measure::uniform(space),
            DistSpec::PointMass(PointAt::Angle(t)) => {
                Measure::point_mass(Direction::circle(rad(t)))
            }
            DistSpec::PointMass(PointAt::Vector(v)) => Measure::point_mass(Direction::sphere(v)?),
        })
    }
}
