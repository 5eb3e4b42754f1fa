//! Equivariant directional functionals with an explicit domain of definability.
//!
//! A functional maps a measure either to a direction or to [`Estimate::Undefined`].
//! `Undefined` is an ordinary value meaning the measure lies outside the functional's
//! domain; it is never reported as an error.

use serde::Serialize;

use crate::error::{check_space, Error, Result};
use crate::geom::{angular_distance, Direction, GroupElement, Space};
use crate::measure::{mix, Measure, Resultant};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Estimate {
    Defined(Direction),
    Undefined,
}

impl Estimate {
    pub fn is_defined(&self) -> bool {
        matches!(self, Estimate::Defined(_))
    }

    pub fn direction(&self) -> Option<Direction> {
        match self {
            Estimate::Defined(d) => Some(*d),
            Estimate::Undefined => None,
        }
    }
}

/// Evaluates `T((1 − ε)P + ε·δ_x)` for a fixed `P`.
pub type ContaminationMap<'a> = Box<dyn Fn(f64, &Direction) -> Estimate + 'a>;

pub trait Functional {
    fn name(&self) -> &str;

    fn space(&self) -> Space;

    fn evaluate(&self, p: &Measure) -> Estimate;

    /// Membership in the domain `P_T`.
    fn in_domain(&self, p: &Measure) -> bool {
        self.evaluate(p).is_defined()
    }

    /// The functional along point-mass contaminations of `p`. The default builds each
    /// mixture; implementations may override with a closed form.
    fn contamination_map<'a>(&'a self, p: &'a Measure) -> ContaminationMap<'a> {
        Box::new(
            move |eps, at| match mix(p, &Measure::point_mass(*at), eps) {
                Ok(q) => self.evaluate(&q),
                Err(_) => Estimate::Undefined,
            },
        )
    }

    /// Smallest `i` in `1..=steps` such that `T((1 − ε)P + ε·δ_at)` with `ε = i/steps` lies
    /// within `angle_tol` of the antipode of `origin = T(P)`. The default scans the grid.
    fn first_flip(
        &self,
        p: &Measure,
        origin: &Direction,
        at: &Direction,
        steps: u32,
        angle_tol: f64,
    ) -> Option<u32> {
        let map = self.contamination_map(p);
        (1..=steps).find(|&i| is_flip(origin, &map(i as f64 / steps as f64, at), angle_tol))
    }
}

/// Whether `estimate` lies within `angle_tol` of the antipode of `origin`.
pub fn is_flip(origin: &Direction, estimate: &Estimate, angle_tol: f64) -> bool {
    estimate.direction().is_some_and(|t| {
        angular_distance(origin, &t).is_ok_and(|d| d >= std::f64::consts::PI - angle_tol)
    })
}

/// Mean direction: the normalized first vector moment, defined when the mean resultant
/// length is at least [`TAU_DOMAIN`](crate::measure::TAU_DOMAIN).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MeanDirection {
    space: Space,
}

impl MeanDirection {
    pub fn circular() -> Self {
        MeanDirection {
            space: Space::Circle,
        }
    }

    pub fn spherical() -> Self {
        MeanDirection {
            space: Space::Sphere,
        }
    }

    pub fn for_space(space: Space) -> Self {
        MeanDirection { space }
    }
}

impl Functional for MeanDirection {
    fn name(&self) -> &str {
        match self.space {
            Space::Circle => "circular_mean",
            Space::Sphere => "spherical_mean",
        }
    }

    fn space(&self) -> Space {
        self.space
    }

    fn evaluate(&self, p: &Measure) -> Estimate {
        if p.space() != self.space {
            return Estimate::Undefined;
        }
        match p.resultant().direction {
            Some(d) => Estimate::Defined(d),
            None => Estimate::Undefined,
        }
    }

    fn contamination_map<'a>(&'a self, p: &'a Measure) -> ContaminationMap<'a> {
        let space = self.space;
        let base = p.resultant().vector;
        let matches = p.space() == space;
        Box::new(move |eps, at| {
            if !matches || at.space() != space {
                return Estimate::Undefined;
            }
            let u = at.vector();
            let v = [
                (1.0 - eps) * base[0] + eps * u[0],
                (1.0 - eps) * base[1] + eps * u[1],
                (1.0 - eps) * base[2] + eps * u[2],
            ];
            match Resultant::from_vector(space, v).direction {
                Some(d) => Estimate::Defined(d),
                None => Estimate::Undefined,
            }
        })
    }

    // The contaminated moment moves along the segment from the mean vector to `at`, so its
    // angle to `origin` is monotone in ε and the flip set is an upper interval of the grid.
    fn first_flip(
        &self,
        p: &Measure,
        origin: &Direction,
        at: &Direction,
        steps: u32,
        angle_tol: f64,
    ) -> Option<u32> {
        let map = self.contamination_map(p);
        let flips = |i: u32| is_flip(origin, &map(i as f64 / steps as f64, at), angle_tol);
        if steps == 0 || !flips(steps) {
            return None;
        }
        let (mut lo, mut hi) = (0, steps);
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if flips(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Some(hi)
    }
}

pub fn circular_mean(p: &Measure) -> Estimate {
    MeanDirection::circular().evaluate(p)
}

pub fn spherical_mean(p: &Measure) -> Estimate {
    MeanDirection::spherical().evaluate(p)
}

/// Angular distance between `T(P^g)` and `g·T(P)`; zero for an equivariant functional.
pub fn check_equivariance<T: Functional + ?Sized>(
    functional: &T,
    p: &Measure,
    g: &GroupElement,
) -> Result<f64> {
    check_space(functional.space(), p.space())?;
    check_space(p.space(), g.space())?;
    let outside = || Error::OutsideDomain {
        functional: functional.name().to_string(),
    };
    let t = functional.evaluate(p).direction().ok_or_else(outside)?;
    let moved = functional
        .evaluate(&p.pushforward(g)?)
        .direction()
        .ok_or_else(outside)?;
    angular_distance(&moved, &g.apply(&t)?)
}
