//! Finite cyclic subgroups acting on measures: orbit averaging and invariance tests.

use crate::error::{check_space, Error, Result};
use crate::geom::{GroupElement, Space, IDENTITY_TOL};
use crate::measure::{Measure, Parts};
use crate::metric::align_atoms;

/// Default tolerance for [`is_invariant`] on atomic parts.
pub const INVARIANCE_TOL: f64 = 1e-9;

/// The cyclic subgroup `{ι, g, g², …, g^{k−1}}` generated by an element of order `k ≥ 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteSubgroup {
    generator: GroupElement,
    elements: Vec<GroupElement>,
}

impl FiniteSubgroup {
    /// Builds the subgroup from a generator with a declared order, checking that the
    /// `k` powers are distinct and that `g^k = ι`.
    pub fn new(generator: GroupElement) -> Result<Self> {
        let k = generator
            .order()
            .ok_or_else(|| Error::InvalidGroup("generator has no declared order".into()))?;
        if k < 2 {
            return Err(Error::InvalidGroup(format!("order {k} < 2")));
        }
        if !generator.power(k).is_identity(IDENTITY_TOL) {
            return Err(Error::InvalidGroup(format!(
                "generator^{k} is not the identity"
            )));
        }
        let elements: Vec<GroupElement> = (0..k).map(|j| generator.power(j)).collect();
        for (j, e) in elements.iter().enumerate().skip(1) {
            if e.is_identity(IDENTITY_TOL) {
                return Err(Error::InvalidGroup(format!(
                    "generator has order {j}, not the declared {k}"
                )));
            }
        }
        Ok(FiniteSubgroup {
            generator,
            elements,
        })
    }

    /// `{ι, antipodal map}`.
    pub fn antipodal(space: Space) -> Self {
        FiniteSubgroup::new(GroupElement::antipodal(space)).expect("antipodal map has order 2")
    }

    /// Rotations of the circle by multiples of `2π/k`.
    pub fn cyclic(k: u32) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidGroup(format!("order {k} < 2")));
        }
        FiniteSubgroup::new(GroupElement::cyclic(k)?)
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generator(&self) -> &GroupElement {
        &self.generator
    }

    /// `ι, g, …, g^{k−1}` in that order.
    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn space(&self) -> Space {
        self.generator.space()
    }
}

/// `P_k = (1/k) Σ_{j=0}^{k−1} P^{g^j}`, which is invariant under every element of `G`.
pub fn symmetrize(p: &Measure, group: &FiniteSubgroup) -> Result<Measure> {
    orbit_average(p, &group.elements)
}

/// `P̃_k = (1/(k−1)) Σ_{j=1}^{k−1} P^{g^j}`, so that `P_k = P/k + ((k−1)/k)·P̃_k`.
pub fn residual_symmetrize(p: &Measure, group: &FiniteSubgroup) -> Result<Measure> {
    orbit_average(p, &group.elements[1..])
}

fn orbit_average(p: &Measure, elements: &[GroupElement]) -> Result<Measure> {
    let w = 1.0 / elements.len() as f64;
    let images = elements
        .iter()
        .map(|g| p.pushforward(g).map(|m| (m, w)))
        .collect::<Result<Vec<_>>>()?;
    Measure::mixture(images)
}

/// Whether `P^g = P`. Atomic parts are compared in total variation (`≤ tol`), continuous
/// parts parametrically (a von Mises law is fixed only if `g` fixes its mean, or `κ = 0`).
pub fn is_invariant(p: &Measure, g: &GroupElement, tol: f64) -> Result<bool> {
    check_space(p.space(), g.space())?;
    let image = p.pushforward(g)?;
    let (a, b) = (p.parts(), image.parts());
    Ok(atomic_tv(&a, &b) <= tol && a.continuous_matches(&b, tol))
}

fn atomic_tv(a: &Parts, b: &Parts) -> f64 {
    0.5 * align_atoms(a.space, &a.atoms, &b.atoms)
        .iter()
        .map(|&(_, x, y)| (x - y).abs())
        .sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Direction;
    use crate::measure::mix;
    use crate::metric::tv;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn c(t: f64) -> Direction {
        Direction::circle(t)
    }

    fn delta(t: f64) -> Measure {
        Measure::point_mass(c(t))
    }

    fn assert_same(a: &Measure, b: &Measure) {
        assert!(tv(a, b).unwrap() < 1e-12, "{a:?} != {b:?}");
    }

    #[test]
    fn symmetrize_examples() {
        let g2 = FiniteSubgroup::antipodal(Space::Circle);
        let s = symmetrize(&delta(0.0), &g2).unwrap();
        assert_eq!(
            s,
            Measure::discrete(vec![(c(0.0), 0.5), (c(PI), 0.5)]).unwrap()
        );
        let u = Measure::uniform(Space::Circle);
        assert_eq!(symmetrize(&u, &g2).unwrap(), u);
        assert_eq!(
            symmetrize(&u, &FiniteSubgroup::cyclic(5).unwrap()).unwrap(),
            u
        );
        let vm = symmetrize(&Measure::von_mises(0.0, 1.0).unwrap(), &g2).unwrap();
        let Measure::Mixture(m) = &vm else {
            panic!("expected mixture, got {vm:?}")
        };
        assert_eq!(m.components().len(), 2);
        assert!(vm.resultant().length < 1e-15);
    }

    #[test]
    fn residual_examples() {
        let g2 = FiniteSubgroup::antipodal(Space::Circle);
        assert_eq!(residual_symmetrize(&delta(0.0), &g2).unwrap(), delta(PI));
        let u = Measure::uniform(Space::Circle);
        assert_eq!(residual_symmetrize(&u, &g2).unwrap(), u);
        let g4 = FiniteSubgroup::cyclic(4).unwrap();
        let r = residual_symmetrize(&delta(0.0), &g4).unwrap();
        let third = 1.0 / 3.0;
        assert_same(
            &r,
            &Measure::discrete(vec![
                (c(FRAC_PI_2), third),
                (c(PI), third),
                (c(3.0 * FRAC_PI_2), third),
            ])
            .unwrap(),
        );
    }

    #[test]
    fn mixture_identity_holds() {
        let p = mix(
            &Measure::von_mises(0.3, 2.0).unwrap(),
            &Measure::discrete(vec![(c(1.0), 0.5), (c(2.5), 0.5)]).unwrap(),
            0.4,
        )
        .unwrap();
        for k in [2, 3, 6] {
            let g = FiniteSubgroup::cyclic(k).unwrap();
            let pk = symmetrize(&p, &g).unwrap();
            let rk = residual_symmetrize(&p, &g).unwrap();
            let kf = k as f64;
            let rebuilt = mix(&p, &rk, (kf - 1.0) / kf).unwrap();
            assert!(tv(&pk, &rebuilt).unwrap() < 1e-12);
        }
    }

    #[test]
    fn is_invariant_examples() {
        let anti = GroupElement::antipodal(Space::Circle);
        assert!(is_invariant(
            &Measure::uniform(Space::Circle),
            &GroupElement::rotation(1.0),
            INVARIANCE_TOL
        )
        .unwrap());
        assert!(!is_invariant(&delta(0.0), &anti, INVARIANCE_TOL).unwrap());
        let pair = Measure::discrete(vec![(c(0.0), 0.5), (c(PI), 0.5)]).unwrap();
        assert!(is_invariant(&pair, &anti, INVARIANCE_TOL).unwrap());
        let vm = Measure::von_mises(1.0, 2.0).unwrap();
        assert!(!is_invariant(&vm, &anti, INVARIANCE_TOL).unwrap());
        assert!(is_invariant(&vm, &GroupElement::reflection(1.0), INVARIANCE_TOL).unwrap());
        assert!(is_invariant(
            &Measure::von_mises(1.0, 0.0).unwrap(),
            &anti,
            INVARIANCE_TOL
        )
        .unwrap());
    }

    #[test]
    fn subgroup_validation() {
        assert!(FiniteSubgroup::new(GroupElement::rotation(1.0)).is_err());
        assert!(FiniteSubgroup::cyclic(1).is_err());
        // rotation by π declared with order 4 hits the identity after 2 steps
        let bad = GroupElement::rotation(PI).with_order(4).unwrap();
        assert!(FiniteSubgroup::new(bad).is_err());
        let g = FiniteSubgroup::cyclic(6).unwrap();
        assert_eq!(g.order(), 6);
        assert!(g.elements()[0].is_identity(0.0));
        let s = FiniteSubgroup::antipodal(Space::Sphere);
        assert_eq!(s.order(), 2);
    }

    #[test]
    fn sphere_symmetrization() {
        let up = Direction::sphere([0.0, 0.0, 1.0]).unwrap();
        let g = FiniteSubgroup::antipodal(Space::Sphere);
        let s = symmetrize(&Measure::point_mass(up), &g).unwrap();
        assert!(s.resultant().direction.is_none());
        assert_abs_diff_eq!(tv(&Measure::point_mass(up), &s).unwrap(), 0.5);
        assert!(is_invariant(&s, g.generator(), 1e-12).unwrap());
    }

    #[test]
    fn space_mismatch() {
        let g = FiniteSubgroup::antipodal(Space::Sphere);
        assert!(symmetrize(&delta(0.0), &g).is_err());
        assert!(is_invariant(&delta(0.0), g.generator(), 1e-9).is_err());
    }
}
