//! Bounded metrics between probability measures: total variation and the Kuiper
//! (sup over arcs) distance on the circle.
//!
//! Both satisfy `d ≤ 1` and `d((1 − ε)P + εQ, P) = ε·d(Q, P) ≤ ε`, which is all the
//! symmetrization bound `d(P, P_k) ≤ (k − 1)/k` needs.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{check_space, Error, Result};
use crate::geom::{angular_distance, Direction, Space};
use crate::measure::{Measure, Parts, ATOM_MERGE_TOL};
use crate::quad::{integrate, integrate_panels, QUAD_TOL};

/// Uniform knots at which the Kuiper discrepancy of continuous parts is evaluated.
pub const KUIPER_KNOTS: usize = 4096;

/// Parameter tolerance under which two continuous parts are treated as the same law.
const STRUCTURAL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricKind {
    TotalVariation,
    Kuiper,
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MetricKind::TotalVariation => "tv",
            MetricKind::Kuiper => "kuiper",
        })
    }
}

impl FromStr for MetricKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "tv" | "total_variation" | "total-variation" => Ok(MetricKind::TotalVariation),
            "kuiper" => Ok(MetricKind::Kuiper),
            other => Err(Error::InvalidParameter(format!("unknown metric `{other}`"))),
        }
    }
}

pub fn distance(kind: MetricKind, p: &Measure, q: &Measure) -> Result<f64> {
    match kind {
        MetricKind::TotalVariation => tv(p, q),
        MetricKind::Kuiper => kuiper(p, q),
    }
}

/// Total variation distance `sup_A |P(A) − Q(A)|`.
pub fn tv(p: &Measure, q: &Measure) -> Result<f64> {
    check_space(p.space(), q.space())?;
    let (pp, qp) = (p.parts(), q.parts());
    // Mutually singular: one purely atomic, the other purely continuous.
    let p_atomic = pp.continuous.is_empty();
    let q_atomic = qp.continuous.is_empty();
    let p_cont = pp.atoms.is_empty();
    let q_cont = qp.atoms.is_empty();
    if (p_atomic && q_cont) || (p_cont && q_atomic) {
        return Ok(1.0);
    }
    let atomic = 0.5
        * exact_sum(
            align_atoms(pp.space, &pp.atoms, &qp.atoms)
                .iter()
                .map(|&(_, a, b)| (a - b).abs()),
        );
    let continuous = continuous_tv(&pp, &qp);
    Ok((atomic + continuous).clamp(0.0, 1.0))
}

fn continuous_tv(p: &Parts, q: &Parts) -> f64 {
    match (p.continuous.is_empty(), q.continuous.is_empty()) {
        (true, true) => return 0.0,
        (true, false) => return 0.5 * q.continuous_mass(),
        (false, true) => return 0.5 * p.continuous_mass(),
        _ => {}
    }
    if p.continuous_matches(q, STRUCTURAL_TOL) {
        return 0.0;
    }
    let single_law = p.continuous.len() == 1
        && q.continuous.len() == 1
        && p.continuous[0]
            .0
            .same_law(&q.continuous[0].0, STRUCTURAL_TOL);
    if single_law || p.space == Space::Sphere {
        // Same density up to scale (on S² only the uniform law is continuous).
        return 0.5 * (p.continuous_mass() - q.continuous_mass()).abs();
    }
    let diff = |t: f64| p.continuous_circle_density(t) - q.continuous_circle_density(t);
    // |f − g| has kinks where the densities cross; integrate the smooth difference
    // between crossings instead.
    let cuts = sign_changes(&diff, 0.0, TAU, KUIPER_KNOTS);
    0.5 * exact_sum(
        cuts.windows(2)
            .map(|w| integrate(diff, w[0], w[1], QUAD_TOL).abs()),
    )
}

/// `[a, …roots…, b]`: the sign changes of `f` on a uniform grid, refined by bisection.
/// Grid points where `f` vanishes exactly are cuts themselves.
fn sign_changes<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, grid: usize) -> Vec<f64> {
    let h = (b - a) / grid as f64;
    let mut cuts = vec![a];
    let mut last: Option<(f64, f64)> = None;
    for i in 0..=grid {
        let x = if i == grid { b } else { a + h * i as f64 };
        let fx = f(x);
        if fx == 0.0 {
            if x > a && x < b {
                cuts.push(x);
            }
            last = None;
            continue;
        }
        if let Some((px, pf)) = last {
            if pf * fx < 0.0 {
                let (mut lo, mut hi) = (px, x);
                for _ in 0..60 {
                    let mid = 0.5 * (lo + hi);
                    let fm = f(mid);
                    if fm == 0.0 {
                        (lo, hi) = (mid, mid);
                        break;
                    }
                    if fm * pf > 0.0 {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                    if hi - lo <= f64::EPSILON * hi.abs().max(1.0) {
                        break;
                    }
                }
                cuts.push(0.5 * (lo + hi));
            }
        }
        last = Some((x, fx));
    }
    cuts.push(b);
    cuts
}

/// Kuiper distance `sup over arcs A of |P(A) − Q(A)|`, computed as the range of
/// `F_P − F_Q` (the range does not depend on the cdf origin). Circle only.
pub fn kuiper(p: &Measure, q: &Measure) -> Result<f64> {
    check_space(p.space(), q.space())?;
    if p.space() != Space::Circle {
        return Err(Error::Unsupported("Kuiper distance on the sphere".into()));
    }
    let (pp, qp) = (p.parts(), q.parts());
    let atoms = align_atoms(Space::Circle, &pp.atoms, &qp.atoms);

    let has_continuous = !(pp.continuous.is_empty() && qp.continuous.is_empty())
        && !pp.continuous_matches(&qp, STRUCTURAL_TOL);

    // (angle, atom index or None for a knot), sorted by angle.
    let mut points: Vec<(f64, Option<usize>)> = atoms
        .iter()
        .enumerate()
        .map(|(i, (d, _, _))| (d.angle().unwrap(), Some(i)))
        .collect();
    let diff_density = |t: f64| pp.continuous_circle_density(t) - qp.continuous_circle_density(t);
    if has_continuous {
        // Between atoms the extrema of F_P − F_Q sit where the densities cross.
        let h = TAU / KUIPER_KNOTS as f64;
        points.extend((0..KUIPER_KNOTS).map(|j| (h * j as f64, None)));
        let crossings = sign_changes(&diff_density, 0.0, TAU, KUIPER_KNOTS);
        points.extend(crossings[1..crossings.len() - 1].iter().map(|&t| (t, None)));
    }
    points.sort_by(|a, b| a.0.total_cmp(&b.0));

    let step_tol = QUAD_TOL / points.len().max(1) as f64;

    let (mut lo, mut hi) = (0.0f64, 0.0f64);
    let mut atomic = 0.0;
    let mut cont = 0.0;
    let mut prev = 0.0;
    for &(t, atom) in &points {
        if has_continuous && t > prev {
            cont += integrate_panels(&diff_density, prev, t, step_tol, 1);
            prev = t;
        }
        let before = atomic + cont;
        lo = lo.min(before);
        hi = hi.max(before);
        if let Some(i) = atom {
            atomic += atoms[i].1 - atoms[i].2;
            let after = atomic + cont;
            lo = lo.min(after);
            hi = hi.max(after);
        }
    }
    Ok((hi - lo).clamp(0.0, 1.0))
}

/// Pair up the atoms of two measures, matching locations within [`ATOM_MERGE_TOL`].
/// Returns `(location, mass under P, mass under Q)`, sorted by angle on the circle.
pub(crate) fn align_atoms(
    space: Space,
    p: &[(Direction, f64)],
    q: &[(Direction, f64)],
) -> Vec<(Direction, f64, f64)> {
    match space {
        Space::Circle => {
            let mut tagged: Vec<(f64, Direction, f64, f64)> = p
                .iter()
                .map(|&(d, w)| (d.angle().unwrap(), d, w, 0.0))
                .chain(q.iter().map(|&(d, w)| (d.angle().unwrap(), d, 0.0, w)))
                .collect();
            tagged.sort_by(|a, b| a.0.total_cmp(&b.0));
            let mut out: Vec<(Direction, f64, f64)> = Vec::with_capacity(tagged.len());
            let mut last_angle = f64::NEG_INFINITY;
            for (t, d, a, b) in tagged {
                match out.last_mut() {
                    Some(slot) if t - last_angle <= ATOM_MERGE_TOL => {
                        slot.1 += a;
                        slot.2 += b;
                    }
                    _ => out.push((d, a, b)),
                }
                last_angle = t;
            }
            if out.len() > 1 {
                let first = out[0].0;
                let last = out[out.len() - 1].0;
                if angular_distance(&first, &last).unwrap() <= ATOM_MERGE_TOL {
                    let (_, a, b) = out.pop().unwrap();
                    out[0].1 += a;
                    out[0].2 += b;
                }
            }
            out
        }
        Space::Sphere => {
            let mut out: Vec<(Direction, f64, f64)> = p.iter().map(|&(d, w)| (d, w, 0.0)).collect();
            for &(d, w) in q {
                match out
                    .iter_mut()
                    .find(|(e, _, _)| angular_distance(e, &d).unwrap() <= ATOM_MERGE_TOL)
                {
                    Some(slot) => slot.2 += w,
                    None => out.push((d, 0.0, w)),
                }
            }
            out
        }
    }
}

/// Correctly rounded sum (Shewchuk's partials algorithm).
pub(crate) fn exact_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut partials: Vec<f64> = Vec::new();
    for mut x in values {
        let mut i = 0;
        for j in 0..partials.len() {
            let mut y = partials[j];
            if x.abs() < y.abs() {
                std::mem::swap(&mut x, &mut y);
            }
            let hi = x + y;
            let lo = y - (hi - x);
            if lo != 0.0 {
                partials[i] = lo;
                i += 1;
            }
            x = hi;
        }
        partials.truncate(i);
        partials.push(x);
    }
    // Round the partials back to a single float, handling the half-way case.
    let mut n = partials.len();
    if n == 0 {
        return 0.0;
    }
    n -= 1;
    let mut hi = partials[n];
    let mut lo = 0.0;
    while n > 0 {
        n -= 1;
        let x = hi;
        let y = partials[n];
        hi = x + y;
        let yr = hi - x;
        lo = y - yr;
        if lo != 0.0 {
            break;
        }
    }
    if n > 0 && ((lo < 0.0 && partials[n - 1] < 0.0) || (lo > 0.0 && partials[n - 1] > 0.0)) {
        let y = lo * 2.0;
        let x = hi + y;
        if y == x - hi {
            hi = x;
        }
    }
    hi
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::GroupElement;
    use crate::group::{symmetrize, FiniteSubgroup};
    use crate::measure::mix;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn c(t: f64) -> Direction {
        Direction::circle(t)
    }

    fn delta(t: f64) -> Measure {
        Measure::point_mass(c(t))
    }

    #[test]
    fn tv_examples() {
        assert_eq!(tv(&delta(0.0), &delta(PI)).unwrap(), 1.0);
        let g = FiniteSubgroup::antipodal(Space::Circle);
        let sym = symmetrize(&delta(0.0), &g).unwrap();
        assert_eq!(tv(&delta(0.0), &sym).unwrap(), 0.5);
        let pts: Vec<_> = (0..20).map(|i| c(0.3 * i as f64)).collect();
        let emp = Measure::empirical(&pts).unwrap();
        assert_eq!(tv(&emp, &Measure::uniform(Space::Circle)).unwrap(), 1.0);
    }

    #[test]
    fn tv_von_mises_uniform_golden() {
        // Closed form: vM(0, 1) mass between the density crossings ±t0, minus t0/π.
        let vm = Measure::von_mises(0.0, 1.0).unwrap();
        let d = distance(
            MetricKind::TotalVariation,
            &vm,
            &Measure::uniform(Space::Circle),
        )
        .unwrap();
        assert_abs_diff_eq!(d, 0.2887326037850421, epsilon = 1e-12);
    }

    #[test]
    fn tv_between_opposed_von_mises() {
        // Crossings fall exactly on grid points here.
        for (kappa, golden) in [(0.1, 0.06357370743690116), (2.0, 0.8499062333864004)] {
            let a = Measure::von_mises(0.0, kappa).unwrap();
            let b = Measure::von_mises(PI, kappa).unwrap();
            assert_abs_diff_eq!(tv(&a, &b).unwrap(), golden, epsilon = 1e-12);
            assert_abs_diff_eq!(kuiper(&a, &b).unwrap(), golden, epsilon = 1e-10);
        }
    }

    #[test]
    fn tv_of_partly_matching_mixtures() {
        let vm = Measure::von_mises(1.0, 2.0).unwrap();
        let u = Measure::uniform(Space::Circle);
        let a = mix(&vm, &delta(0.0), 0.25).unwrap();
        // Scaled copies of the same law: ½|0.75 − 1| from the continuous part plus ½·0.25.
        assert_abs_diff_eq!(tv(&a, &vm).unwrap(), 0.25, epsilon = 1e-15);
        let b = mix(&u, &delta(0.0), 0.25).unwrap();
        let expected = 0.75 * tv(&vm, &u).unwrap();
        assert_abs_diff_eq!(tv(&a, &b).unwrap(), expected, epsilon = 1e-9);
    }

    #[test]
    fn sphere_tv() {
        let up = Direction::sphere([0.0, 0.0, 1.0]).unwrap();
        let u = Measure::uniform(Space::Sphere);
        assert_eq!(tv(&Measure::point_mass(up), &u).unwrap(), 1.0);
        let m = mix(&u, &Measure::point_mass(up), 0.3).unwrap();
        assert_abs_diff_eq!(tv(&m, &u).unwrap(), 0.3, epsilon = 1e-15);
        assert!(kuiper(&m, &u).is_err());
        assert!(distance(MetricKind::Kuiper, &u, &u).is_err());
    }

    #[test]
    fn kuiper_examples() {
        assert_eq!(kuiper(&delta(0.0), &delta(PI)).unwrap(), 1.0);
        let m = mix(&delta(0.0), &delta(PI), 0.3).unwrap();
        assert_abs_diff_eq!(kuiper(&m, &delta(0.0)).unwrap(), 0.3, epsilon = 1e-15);
        let vm = Measure::von_mises(0.0, 2.0).unwrap();
        let u = Measure::uniform(Space::Circle);
        assert_eq!(kuiper(&u, &u).unwrap(), 0.0);
        assert_abs_diff_eq!(
            kuiper(&vm, &u).unwrap(),
            kuiper(&u, &vm).unwrap(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn kuiper_von_mises_goldens() {
        // Exact extrema where f_vM = 1/2π, integrated independently.
        let vm = Measure::von_mises(0.0, 2.0).unwrap();
        let u = Measure::uniform(Space::Circle);
        assert_abs_diff_eq!(
            kuiper(&vm, &u).unwrap(),
            0.4674498377813431,
            epsilon = 1e-10
        );
        let sym = symmetrize(&vm, &FiniteSubgroup::antipodal(Space::Circle)).unwrap();
        assert_abs_diff_eq!(
            kuiper(&vm, &sym).unwrap(),
            0.424_953_116_693_200_2,
            epsilon = 1e-10
        );
    }

    #[test]
    fn kuiper_is_rotation_invariant_for_continuous_parts() {
        let vm = Measure::von_mises(0.4, 3.0).unwrap();
        let u = Measure::uniform(Space::Circle);
        let g = GroupElement::rotation(1.234);
        let a = kuiper(&vm, &u).unwrap();
        let b = kuiper(&vm.pushforward(&g).unwrap(), &u).unwrap();
        assert_abs_diff_eq!(a, b, epsilon = 1e-6);
    }

    #[test]
    fn metric_kind_parsing() {
        assert_eq!(
            "tv".parse::<MetricKind>().unwrap(),
            MetricKind::TotalVariation
        );
        assert_eq!("Kuiper".parse::<MetricKind>().unwrap(), MetricKind::Kuiper);
        assert!("prokhorov".parse::<MetricKind>().is_err());
        assert_eq!(MetricKind::TotalVariation.to_string(), "tv");
    }

    #[test]
    fn exact_sum_is_correctly_rounded() {
        assert_eq!(exact_sum(std::iter::repeat_n(0.1, 10)), 1.0);
        assert_eq!(exact_sum([1e100, 1.0, -1e100]), 1.0);
        assert_eq!(exact_sum([]), 0.0);
        for n in 1..200 {
            let w = 1.0 / n as f64;
            let s = exact_sum(std::iter::repeat_n(w, 4));
            assert_eq!(s, 4.0 * w);
        }
    }
}
