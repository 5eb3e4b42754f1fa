//! Random draws from the measures in [`crate::measure`].

use std::f64::consts::{PI, TAU};

use rand::Rng;
use rand_distr::{Distribution, Normal, StandardNormal};

use crate::error::{Error, Result};
use crate::geom::{Direction, Space};
use crate::measure::{Measure, Parts};

/// Best–Fisher rejection sampler for the von Mises law.
pub fn von_mises<R: Rng + ?Sized>(rng: &mut R, mu: f64, kappa: f64) -> f64 {
    if kappa < 1e-8 {
        return rng.random::<f64>() * TAU;
    }
    if kappa > 1e6 {
        let normal = Normal::new(mu, 1.0 / kappa.sqrt()).expect("positive sd");
        return Direction::circle(normal.sample(rng)).angle().unwrap();
    }
    let tau = 1.0 + (1.0 + 4.0 * kappa * kappa).sqrt();
    let rho = (tau - (2.0 * tau).sqrt()) / (2.0 * kappa);
    let r = (1.0 + rho * rho) / (2.0 * rho);
    loop {
        let u1: f64 = rng.random();
        let u2: f64 = rng.random();
        let u3: f64 = rng.random();
        let z = (PI * u1).cos();
        let f = (1.0 + r * z) / (r + z);
        let c = kappa * (r - f);
        if c * (2.0 - c) - u2 > 0.0 || (c / u2).ln() + 1.0 - c >= 0.0 {
            let sign = if u3 > 0.5 { 1.0 } else { -1.0 };
            return Direction::circle(mu + sign * f.clamp(-1.0, 1.0).acos())
                .angle()
                .unwrap();
        }
    }
}

pub fn uniform<R: Rng + ?Sized>(rng: &mut R, space: Space) -> Direction {
    match space {
        Space::Circle => Direction::circle(rng.random::<f64>() * TAU),
        Space::Sphere => loop {
            let v: [f64; 3] = [
                StandardNormal.sample(rng),
                StandardNormal.sample(rng),
                StandardNormal.sample(rng),
            ];
            if let Ok(d) = Direction::sphere(v) {
                break d;
            }
        },
    }
}

/// `n` independent draws from `p`.
pub fn sample<R: Rng + ?Sized>(rng: &mut R, p: &Measure, n: usize) -> Result<Vec<Direction>> {
    if n == 0 {
        return Err(Error::EmptySample);
    }
    let parts = p.parts();
    Ok((0..n).map(|_| draw(rng, &parts)).collect())
}

fn draw<R: Rng + ?Sized>(rng: &mut R, parts: &Parts) -> Direction {
    let mut u: f64 = rng.random();
    for (d, w) in &parts.atoms {
        if u < *w {
            return *d;
        }
        u -= w;
    }
    for (c, w) in &parts.continuous {
        if u < *w {
            return continuous_draw(rng, c);
        }
        u -= w;
    }
    // Rounding left a sliver of mass unassigned; take the last component.
    match parts.continuous.last() {
        Some((c, _)) => continuous_draw(rng, c),
        None => parts.atoms.last().expect("nonempty measure").0,
    }
}

fn continuous_draw<R: Rng + ?Sized>(rng: &mut R, c: &crate::measure::Continuous) -> Direction {
    use crate::measure::Continuous;
    match c {
        Continuous::VonMises(vm) => Direction::circle(von_mises(rng, vm.mu(), vm.kappa())),
        Continuous::Uniform(s) => uniform(rng, *s),
    }
}

/// Positive weights summing to 1.
fn random_weights<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| 0.05 + rng.random::<f64>()).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / total).collect()
}

/// A discrete measure with `1..=max_atoms` uniformly placed atoms and random weights.
pub fn random_discrete<R: Rng + ?Sized>(rng: &mut R, space: Space, max_atoms: usize) -> Measure {
    let n = rng.random_range(1..=max_atoms.max(1));
    let weights = random_weights(rng, n);
    let atoms = weights
        .into_iter()
        .map(|w| (uniform(rng, space), w))
        .collect();
    Measure::discrete(atoms).expect("valid random weights")
}

/// A random test measure: discrete, von Mises, or a mixture of both (uniform on S²).
pub fn random_measure<R: Rng + ?Sized>(rng: &mut R, space: Space) -> Measure {
    let continuous = |rng: &mut R| match space {
        Space::Circle => Measure::von_mises(rng.random::<f64>() * TAU, rng.random::<f64>() * 8.0)
            .expect("finite parameters"),
        Space::Sphere => Measure::uniform(Space::Sphere),
    };
    match rng.random_range(0..3) {
        0 => random_discrete(rng, space, 8),
        1 if space == Space::Circle => continuous(rng),
        _ => {
            let atoms = random_discrete(rng, space, 6);
            let c = continuous(rng);
            let eps = 0.1 + 0.8 * rng.random::<f64>();
            crate::measure::mix(&atoms, &c, eps).expect("eps in (0, 1)")
        }
    }
}
