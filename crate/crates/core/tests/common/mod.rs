#![allow(dead_code)]

use dirbreak_core::sampling::random_measure;
use dirbreak_core::{GroupElement, Measure, Space};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

pub const SEED: u64 = 0x5EED;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn circle_measure(seed: u64) -> Measure {
    random_measure(&mut rng(seed), Space::Circle)
}

pub fn sphere_measure(seed: u64) -> Measure {
    random_measure(&mut rng(seed), Space::Sphere)
}

/// A rotation or reflection of the circle.
pub fn circle_isometry<R: Rng>(rng: &mut R) -> GroupElement {
    let phi = rng.random::<f64>() * TAU;
    if rng.random::<bool>() {
        GroupElement::rotation(phi)
    } else {
        GroupElement::reflection(phi / 2.0)
    }
}

pub fn sphere_rotation<R: Rng>(rng: &mut R) -> GroupElement {
    let axis = [
        rng.random::<f64>() - 0.5,
        rng.random::<f64>() - 0.5,
        rng.random::<f64>() - 0.5,
    ];
    GroupElement::sphere_rotation(axis, rng.random::<f64>() * TAU).unwrap()
}
