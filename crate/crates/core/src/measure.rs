//! Probability measures on the circle and on S².
//!
//! Every measure splits into an atomic part and an absolutely continuous part
//! ([`Parts`]). Mixtures are stored in that split form, which keeps discrete and
//! continuous mass apart so the metrics can treat each exactly.

use std::f64::consts::TAU;

use crate::error::{check_space, Error, Result};
use crate::geom::{angular_distance, Direction, GroupElement, Space};
use crate::metric::exact_sum;
use crate::quad::{integrate, QUAD_TOL};
use crate::special::{bessel_i0_scaled, mean_resultant_length};

/// Resultant lengths below this are treated as zero: the mean direction is undefined.
pub const TAU_DOMAIN: f64 = 1e-10;

/// Atoms closer than this (angular distance) are the same point.
pub const ATOM_MERGE_TOL: f64 = 1e-12;

/// Allowed deviation of total weight from 1.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

/// A finitely supported probability measure.
#[derive(Debug, Clone, PartialEq)]
pub struct Discrete {
    space: Space,
    atoms: Vec<(Direction, f64)>,
}

impl Discrete {
    /// Weighted atoms; weights must be positive and sum to 1 within [`WEIGHT_SUM_TOL`].
    /// Coincident atoms are merged.
    pub fn new(atoms: Vec<(Direction, f64)>) -> Result<Self> {
        let space = atoms.first().ok_or(Error::EmptySample)?.0.space();
        for (d, w) in &atoms {
            check_space(space, d.space())?;
            if !(w.is_finite() && *w > 0.0) {
                return Err(Error::InvalidWeights(format!("weight {w} is not positive")));
            }
        }
        let total = exact_sum(atoms.iter().map(|(_, w)| *w));
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::InvalidWeights(format!(
                "weights sum to {total}, not 1"
            )));
        }
        Ok(Discrete {
            space,
            atoms: merge_atoms(space, atoms),
        })
    }

    /// The empirical measure of a sample: mass `1/n` at each point.
    pub fn empirical(points: &[Direction]) -> Result<Self> {
        let n = points.len();
        if n == 0 {
            return Err(Error::EmptySample);
        }
        let w = 1.0 / n as f64;
        Discrete::new(points.iter().map(|&d| (d, w)).collect())
    }

    /// Positive weights rescaled to sum to 1.
    pub fn normalized(atoms: Vec<(Direction, f64)>) -> Result<Self> {
        let total = exact_sum(atoms.iter().map(|(_, w)| *w));
        if !(total.is_finite() && total > 0.0) {
            return Err(Error::InvalidWeights(format!("total weight {total}")));
        }
        Discrete::new(atoms.into_iter().map(|(d, w)| (d, w / total)).collect())
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn atoms(&self) -> &[(Direction, f64)] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }
}

/// Merge atoms within [`ATOM_MERGE_TOL`], summing their weights. Circle atoms come back
/// sorted by angle.
pub(crate) fn merge_atoms(space: Space, mut atoms: Vec<(Direction, f64)>) -> Vec<(Direction, f64)> {
    match space {
        Space::Circle => {
            atoms.sort_by(|a, b| a.0.angle().unwrap().total_cmp(&b.0.angle().unwrap()));
            let mut out: Vec<(Direction, f64)> = Vec::with_capacity(atoms.len());
            for (d, w) in atoms {
                match out.last_mut() {
                    Some(last)
                        if d.angle().unwrap() - last.0.angle().unwrap() <= ATOM_MERGE_TOL =>
                    {
                        last.1 += w
                    }
                    _ => out.push((d, w)),
                }
            }
            if out.len() > 1 {
                let first = out[0].0;
                let last = out[out.len() - 1].0;
                if angular_distance(&first, &last).unwrap() <= ATOM_MERGE_TOL {
                    let (_, w) = out.pop().unwrap();
                    out[0].1 += w;
                }
            }
            out
        }
        Space::Sphere => {
            // Sorted by z, a representative within the tolerance has |Δz| ≤ tolerance,
            // so only a short tail of `out` needs scanning.
            atoms.sort_by(|a, b| {
                let (u, v) = (a.0.vector(), b.0.vector());
                u[2].total_cmp(&v[2])
                    .then(u[0].total_cmp(&v[0]))
                    .then(u[1].total_cmp(&v[1]))
            });
            let mut out: Vec<(Direction, f64)> = Vec::with_capacity(atoms.len());
            for (d, w) in atoms {
                let z = d.vector()[2];
                let slot = out
                    .iter_mut()
                    .rev()
                    .take_while(|(e, _)| e.vector()[2] >= z - 2.0 * ATOM_MERGE_TOL)
                    .find(|(e, _)| angular_distance(e, &d).unwrap() <= ATOM_MERGE_TOL);
                match slot {
                    Some(slot) => slot.1 += w,
                    None => out.push((d, w)),
                }
            }
            out
        }
    }
}

/// The von Mises law on the circle with mean direction `mu` and concentration `kappa`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VonMises {
    mu: f64,
    kappa: f64,
    // 2π·e^{−κ}·I₀(κ)
    norm: f64,
}

impl VonMises {
    pub fn new(mu: f64, kappa: f64) -> Result<Self> {
        if !mu.is_finite() {
            return Err(Error::InvalidParameter(format!("mu = {mu}")));
        }
        if !(kappa.is_finite() && kappa >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "kappa must be finite and nonnegative, got {kappa}"
            )));
        }
        Ok(VonMises {
            mu: Direction::circle(mu).angle().unwrap(),
            kappa,
            norm: TAU * bessel_i0_scaled(kappa),
        })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn density(&self, theta: f64) -> f64 {
        if self.kappa == 0.0 {
            return 1.0 / TAU;
        }
        (self.kappa * ((theta - self.mu).cos() - 1.0)).exp() / self.norm
    }

    /// `I₁(κ)/I₀(κ)`.
    pub fn mean_resultant_length(&self) -> f64 {
        mean_resultant_length(self.kappa)
    }
}

/// Absolutely continuous building blocks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Continuous {
    VonMises(VonMises),
    Uniform(Space),
}

impl Continuous {
    pub fn space(&self) -> Space {
        match self {
            Continuous::VonMises(_) => Space::Circle,
            Continuous::Uniform(s) => *s,
        }
    }

    fn density(&self, x: &Direction) -> f64 {
        match self {
            Continuous::Uniform(Space::Circle) => 1.0 / TAU,
            Continuous::Uniform(Space::Sphere) => 1.0 / (2.0 * TAU),
            Continuous::VonMises(vm) => vm.density(x.angle().unwrap()),
        }
    }

    fn circle_density(&self, theta: f64) -> f64 {
        match self {
            Continuous::VonMises(vm) => vm.density(theta),
            _ => 1.0 / TAU,
        }
    }

    fn first_moment(&self) -> [f64; 3] {
        match self {
            Continuous::Uniform(_) => [0.0; 3],
            Continuous::VonMises(vm) => {
                let r = vm.mean_resultant_length();
                let (s, c) = vm.mu.sin_cos();
                [r * c, r * s, 0.0]
            }
        }
    }

    fn pushforward(&self, g: &GroupElement) -> Continuous {
        match self {
            Continuous::Uniform(s) => Continuous::Uniform(*s),
            Continuous::VonMises(vm) => {
                let (shift, reflect) = g.circle_action().expect("circle element");
                let mu = if reflect {
                    shift - vm.mu
                } else {
                    shift + vm.mu
                };
                Continuous::VonMises(VonMises {
                    mu: Direction::circle(mu).angle().unwrap(),
                    ..*vm
                })
            }
        }
    }

    fn canonical(self) -> Continuous {
        match self {
            Continuous::VonMises(vm) if vm.kappa == 0.0 => Continuous::Uniform(Space::Circle),
            c => c,
        }
    }

    pub(crate) fn same_law(&self, other: &Continuous, tol: f64) -> bool {
        match (self, other) {
            (Continuous::Uniform(a), Continuous::Uniform(b)) => a == b,
            (Continuous::VonMises(a), Continuous::VonMises(b)) => {
                let d = (a.mu - b.mu).abs();
                d.min(TAU - d) <= tol && (a.kappa - b.kappa).abs() <= tol * a.kappa.max(1.0)
            }
            _ => false,
        }
    }

    fn into_measure(self) -> Measure {
        match self {
            Continuous::VonMises(vm) => Measure::VonMises(vm),
            Continuous::Uniform(s) => Measure::Uniform(s),
        }
    }
}

/// The atomic/continuous split of a measure. Masses are absolute, so each part is a
/// sub-probability measure and the two parts together sum to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Parts {
    pub space: Space,
    pub atoms: Vec<(Direction, f64)>,
    pub continuous: Vec<(Continuous, f64)>,
}

impl Parts {
    fn new(space: Space) -> Self {
        Parts {
            space,
            atoms: Vec::new(),
            continuous: Vec::new(),
        }
    }

    fn add(&mut self, m: &Measure, w: f64) {
        match m {
            Measure::Discrete(d) => self.atoms.extend(d.atoms.iter().map(|&(a, x)| (a, x * w))),
            Measure::PointMass(a) => self.atoms.push((*a, w)),
            Measure::VonMises(vm) => self.continuous.push((Continuous::VonMises(*vm), w)),
            Measure::Uniform(s) => self.continuous.push((Continuous::Uniform(*s), w)),
            Measure::Mixture(mx) => {
                self.atoms
                    .extend(mx.parts.atoms.iter().map(|&(a, x)| (a, x * w)));
                self.continuous
                    .extend(mx.parts.continuous.iter().map(|&(c, x)| (c, x * w)));
            }
        }
    }

    fn canonicalize(mut self) -> Self {
        self.atoms = merge_atoms(self.space, std::mem::take(&mut self.atoms));
        let mut merged: Vec<(Continuous, f64)> = Vec::new();
        for (c, w) in self.continuous.drain(..) {
            let c = c.canonical();
            match merged
                .iter_mut()
                .find(|(e, _)| e.same_law(&c, ATOM_MERGE_TOL))
            {
                Some(slot) => slot.1 += w,
                None => merged.push((c, w)),
            }
        }
        self.continuous = merged;
        self
    }

    pub fn atomic_mass(&self) -> f64 {
        self.atoms.iter().map(|(_, w)| w).sum()
    }

    pub fn continuous_mass(&self) -> f64 {
        self.continuous.iter().map(|(_, w)| w).sum()
    }

    /// Density of the continuous part at `x`.
    pub fn continuous_density(&self, x: &Direction) -> f64 {
        self.continuous.iter().map(|(c, w)| w * c.density(x)).sum()
    }

    pub(crate) fn continuous_circle_density(&self, theta: f64) -> f64 {
        self.continuous
            .iter()
            .map(|(c, w)| w * c.circle_density(theta))
            .sum()
    }

    pub fn first_moment(&self) -> [f64; 3] {
        let mut v = [0.0; 3];
        for (d, w) in &self.atoms {
            let u = d.vector();
            for i in 0..3 {
                v[i] += w * u[i];
            }
        }
        for (c, w) in &self.continuous {
            let u = c.first_moment();
            for i in 0..3 {
                v[i] += w * u[i];
            }
        }
        v
    }

    /// Whether the continuous parts are the same mixture of the same laws, matching
    /// components within `tol` in parameters and weights.
    pub fn continuous_matches(&self, other: &Parts, tol: f64) -> bool {
        if self.continuous.len() != other.continuous.len() {
            return false;
        }
        let mut used = vec![false; other.continuous.len()];
        self.continuous.iter().all(|(c, w)| {
            let hit = other
                .continuous
                .iter()
                .enumerate()
                .find(|(i, (d, x))| !used[*i] && c.same_law(d, tol) && (w - x).abs() <= tol);
            match hit {
                Some((i, _)) => {
                    used[i] = true;
                    true
                }
                None => false,
            }
        })
    }

    fn pushforward(&self, g: &GroupElement) -> Parts {
        Parts {
            space: self.space,
            atoms: merge_atoms(
                self.space,
                self.atoms
                    .iter()
                    .map(|(d, w)| (g.apply_unchecked(d), *w))
                    .collect(),
            ),
            continuous: self
                .continuous
                .iter()
                .map(|(c, w)| (c.pushforward(g), *w))
                .collect(),
        }
    }
}

/// A finite mixture, flattened and stored as its atomic/continuous split.
#[derive(Debug, Clone, PartialEq)]
pub struct Mixture {
    parts: Parts,
}

impl Mixture {
    pub fn space(&self) -> Space {
        self.parts.space
    }

    /// Depth-one components: at most one [`Discrete`] carrying all atoms, followed by
    /// the continuous laws.
    pub fn components(&self) -> Vec<(Measure, f64)> {
        let mut out = Vec::new();
        let mass = self.parts.atomic_mass();
        if !self.parts.atoms.is_empty() {
            let atoms = self
                .parts
                .atoms
                .iter()
                .map(|&(d, w)| (d, w / mass))
                .collect();
            out.push((
                Measure::Discrete(Discrete {
                    space: self.parts.space,
                    atoms,
                }),
                mass,
            ));
        }
        out.extend(
            self.parts
                .continuous
                .iter()
                .map(|&(c, w)| (c.into_measure(), w)),
        );
        out
    }

    pub fn parts(&self) -> &Parts {
        &self.parts
    }
}

/// Length and direction of the first vector moment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Resultant {
    pub vector: [f64; 3],
    pub length: f64,
    /// `None` iff `length < TAU_DOMAIN`.
    pub direction: Option<Direction>,
}

impl Resultant {
    pub fn from_vector(space: Space, vector: [f64; 3]) -> Self {
        let length = crate::geom::norm3(vector);
        let direction = if length < TAU_DOMAIN {
            None
        } else {
            Direction::from_vector(space, vector)
        };
        Resultant {
            vector,
            length,
            direction,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Measure {
    Discrete(Discrete),
    /// Circle only.
    VonMises(VonMises),
    Uniform(Space),
    PointMass(Direction),
    Mixture(Mixture),
}

impl Measure {
    pub fn von_mises(mu: f64, kappa: f64) -> Result<Measure> {
        VonMises::new(mu, kappa).map(Measure::VonMises)
    }

    pub fn point_mass(at: Direction) -> Measure {
        Measure::PointMass(at)
    }

    pub fn uniform(space: Space) -> Measure {
        Measure::Uniform(space)
    }

    pub fn empirical(points: &[Direction]) -> Result<Measure> {
        Discrete::empirical(points).map(Measure::Discrete)
    }

    pub fn discrete(atoms: Vec<(Direction, f64)>) -> Result<Measure> {
        Discrete::new(atoms).map(Measure::Discrete)
    }

    /// A finite mixture. Nested mixtures are flattened; a single component is returned
    /// unchanged; purely atomic mixtures become [`Measure::Discrete`] and mixtures of
    /// identical continuous laws collapse to that law.
    pub fn mixture(components: Vec<(Measure, f64)>) -> Result<Measure> {
        let space = components.first().ok_or(Error::EmptySample)?.0.space();
        for (m, w) in &components {
            check_space(space, m.space())?;
            if !(w.is_finite() && *w > 0.0) {
                return Err(Error::InvalidWeights(format!(
                    "mixture weight {w} is not positive"
                )));
            }
        }
        let total = exact_sum(components.iter().map(|(_, w)| *w));
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::InvalidWeights(format!(
                "mixture weights sum to {total}"
            )));
        }
        if components.len() == 1 {
            return Ok(components.into_iter().next().unwrap().0);
        }
        let mut parts = Parts::new(space);
        for (m, w) in &components {
            parts.add(m, *w);
        }
        Ok(Measure::from_parts(parts.canonicalize()))
    }

    fn from_parts(parts: Parts) -> Measure {
        if parts.continuous.is_empty() {
            return Measure::Discrete(Discrete {
                space: parts.space,
                atoms: parts.atoms,
            });
        }
        if parts.atoms.is_empty() && parts.continuous.len() == 1 {
            return parts.continuous[0].0.into_measure();
        }
        Measure::Mixture(Mixture { parts })
    }

    pub fn space(&self) -> Space {
        match self {
            Measure::Discrete(d) => d.space,
            Measure::VonMises(_) => Space::Circle,
            Measure::Uniform(s) => *s,
            Measure::PointMass(d) => d.space(),
            Measure::Mixture(m) => m.space(),
        }
    }

    /// Atomic and continuous parts, with `κ = 0` von Mises laws rewritten as uniform.
    pub fn parts(&self) -> Parts {
        let mut p = Parts::new(self.space());
        p.add(self, 1.0);
        p.canonicalize()
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Measure::Discrete(_) | Measure::PointMass(_))
    }

    /// The image measure `P^g`.
    pub fn pushforward(&self, g: &GroupElement) -> Result<Measure> {
        check_space(self.space(), g.space())?;
        Ok(match self {
            Measure::Discrete(d) => Measure::Discrete(Discrete {
                space: d.space,
                atoms: merge_atoms(
                    d.space,
                    d.atoms
                        .iter()
                        .map(|(x, w)| (g.apply_unchecked(x), *w))
                        .collect(),
                ),
            }),
            Measure::VonMises(vm) => match Continuous::VonMises(*vm).pushforward(g) {
                Continuous::VonMises(v) => Measure::VonMises(v),
                _ => unreachable!(),
            },
            Measure::Uniform(s) => Measure::Uniform(*s),
            Measure::PointMass(x) => Measure::PointMass(g.apply_unchecked(x)),
            Measure::Mixture(m) => Measure::Mixture(Mixture {
                parts: m.parts.pushforward(g),
            }),
        })
    }

    /// Mean resultant: norm and direction of `∫ x dP(x)`.
    pub fn resultant(&self) -> Resultant {
        let v = match self {
            Measure::PointMass(d) => d.vector(),
            Measure::VonMises(vm) => Continuous::VonMises(*vm).first_moment(),
            Measure::Uniform(_) => [0.0; 3],
            _ => self.parts().first_moment(),
        };
        Resultant::from_vector(self.space(), v)
    }

    /// Density with respect to the uniform surface measure (arc length on S¹).
    /// Fails if the measure has atoms.
    pub fn density(&self, x: &Direction) -> Result<f64> {
        check_space(self.space(), x.space())?;
        let parts = self.parts();
        if !parts.atoms.is_empty() {
            return Err(Error::Unsupported("density of a measure with atoms".into()));
        }
        Ok(parts.continuous_density(x))
    }

    /// `P([0, θ])`, angles measured counter-clockwise from 0. Circle only.
    pub fn cdf(&self, theta: f64) -> Result<f64> {
        if self.space() != Space::Circle {
            return Err(Error::Unsupported("cdf on the sphere".into()));
        }
        if theta.is_nan() {
            return Err(Error::InvalidParameter("cdf at NaN".into()));
        }
        if theta < 0.0 {
            return Ok(0.0);
        }
        if theta >= TAU {
            return Ok(1.0);
        }
        let parts = self.parts();
        let atomic: f64 = parts
            .atoms
            .iter()
            .filter(|(d, _)| d.angle().unwrap() <= theta)
            .map(|(_, w)| w)
            .sum();
        let cont = if parts.continuous.is_empty() {
            0.0
        } else {
            integrate(|t| parts.continuous_circle_density(t), 0.0, theta, QUAD_TOL)
        };
        Ok((atomic + cont).min(1.0))
    }
}

/// `(1 − ε)·P + ε·Q`.
pub fn mix(p: &Measure, q: &Measure, eps: f64) -> Result<Measure> {
    check_space(p.space(), q.space())?;
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::InvalidParameter(format!(
            "contamination fraction {eps} outside [0, 1]"
        )));
    }
    if eps == 0.0 {
        return Ok(p.clone());
    }
    if eps == 1.0 {
        return Ok(q.clone());
    }
    Measure::mixture(vec![(p.clone(), 1.0 - eps), (q.clone(), eps)])
}

pub fn pushforward(p: &Measure, g: &GroupElement) -> Result<Measure> {
    p.pushforward(g)
}

pub fn resultant(p: &Measure) -> Resultant {
    p.resultant()
}
