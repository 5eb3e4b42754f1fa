mod common;

use std::f64::consts::{PI, TAU};

use common::{rng, SEED};
use dirbreak_core::sampling::{random_discrete, random_measure};
use dirbreak_core::{
    bias_breakdown, circular_mean, definability_bounds, finite_sample_breakdown,
    flip_threshold_circular_mean, invariant_set_distance_involution, tv, tv_fragility_demo,
    Direction, Estimate, FiniteSubgroup, GroupElement, MeanDirection, Measure, MetricKind,
    SearchParams, Space,
};
use itertools::Itertools;
use rand::Rng;

/// κ and R(κ)/(1 + R(κ)) from an independent Bessel-ratio evaluation.
const FLIP_GOLDENS: [(f64, f64); 6] = [
    (0.1, 0.0475624492334237),
    (0.5, 0.1951707752062029),
    (1.0, 0.30862352230149964),
    (2.0, 0.4109936820477624),
    (5.0, 0.47184487891807186),
    (10.0, 0.4868109979892954),
];

fn assert_grid_agrees(p: &Measure, search: &SearchParams) {
    let t = MeanDirection::circular();
    let threshold = flip_threshold_circular_mean(p).unwrap();
    let found = bias_breakdown(&t, p, MetricKind::TotalVariation, search)
        .unwrap()
        .expect("flip found");
    assert!(
        found.epsilon >= threshold - 1e-12
            && found.epsilon <= threshold + search.eps_step() + 1e-12,
        "grid {} vs threshold {threshold}",
        found.epsilon
    );
}

#[test]
fn grid_search_matches_flip_threshold() {
    let search = SearchParams::default();
    assert_grid_agrees(&Measure::point_mass(Direction::circle(0.0)), &search);
    for (kappa, _) in FLIP_GOLDENS {
        assert_grid_agrees(&Measure::von_mises(1.3, kappa).unwrap(), &search);
    }
    let mut r = rng(SEED);
    for _ in 0..200 {
        assert_grid_agrees(&random_discrete(&mut r, Space::Circle, 8), &search);
    }
}

#[test]
fn flip_threshold_goldens_and_monotonicity() {
    let mut prev = 0.0;
    let mut prev_kuiper = 0.0;
    let mut prev_tv = 0.0;
    let t = MeanDirection::circular();
    let anti = FiniteSubgroup::antipodal(Space::Circle);
    for (kappa, golden) in FLIP_GOLDENS {
        let p = Measure::von_mises(0.0, kappa).unwrap();
        let f = flip_threshold_circular_mean(&p).unwrap();
        assert!((f - golden).abs() < 1e-12, "κ = {kappa}: {f}");
        assert!(f > prev);
        prev = f;
        let b = definability_bounds(&t, &p, MetricKind::Kuiper, &anti).unwrap();
        assert!(b.bound_uniform >= prev_kuiper);
        prev_kuiper = b.bound_uniform;
        let tv_bound = definability_bounds(&t, &p, MetricKind::TotalVariation, &anti)
            .unwrap()
            .bound_symmetrized;
        assert!(tv_bound > prev_tv, "κ = {kappa}: {tv_bound}");
        prev_tv = tv_bound;
    }
    assert!(FLIP_GOLDENS[0].1 < 0.05 && FLIP_GOLDENS[5].1 > 0.45);
}

#[test]
fn bounds_stay_below_one_half() {
    let t = MeanDirection::circular();
    let anti = FiniteSubgroup::antipodal(Space::Circle);
    let search = SearchParams::default();
    let mut r = rng(SEED ^ 0xA5);
    for _ in 0..100 {
        let p = random_measure(&mut r, Space::Circle);
        for kind in [MetricKind::TotalVariation, MetricKind::Kuiper] {
            let b = definability_bounds(&t, &p, kind, &anti).unwrap();
            assert!(b.bound_symmetrized <= 0.5 + 1e-12);
            if let Some(found) = bias_breakdown(&t, &p, kind, &search).unwrap() {
                assert!(found.epsilon <= 0.5 + search.eps_step());
            }
        }
    }
}

fn unit(theta: f64) -> [f64; 2] {
    [theta.cos(), theta.sin()]
}

fn norm(v: [f64; 2]) -> f64 {
    v[0].hypot(v[1])
}

/// Replacement positions that could cancel `s` with `m` free points: `m − 2` coincident
/// points at a grid angle (or opposite `s`) and a closing pair, or a single point.
fn replacements(s: [f64; 2], m: usize) -> Vec<Vec<f64>> {
    let grid: Vec<f64> = (0..720)
        .map(|j| TAU * j as f64 / 720.0)
        .chain(std::iter::once((-s[1]).atan2(-s[0])))
        .collect();
    match m {
        0 => vec![vec![]],
        1 => grid.into_iter().map(|a| vec![a]).collect(),
        _ => grid
            .into_iter()
            .filter_map(|a| {
                let u = unit(a);
                let k = (m - 2) as f64;
                let t = [-s[0] - k * u[0], -s[1] - k * u[1]];
                let len = norm(t);
                if len > 2.0 {
                    return None;
                }
                let mid = t[1].atan2(t[0]);
                let spread = (len / 2.0).clamp(-1.0, 1.0).acos();
                let mut pts = vec![a; m - 2];
                pts.extend([mid + spread, mid - spread]);
                Some(pts)
            })
            .collect(),
    }
}

/// Fewest replacements making the empirical circular mean undefined, by direct search.
fn brute_force_breakdown(sample: &[f64]) -> Option<usize> {
    let n = sample.len();
    for m in 0..=n {
        for removed in (0..n).combinations(m) {
            let mut s = [0.0, 0.0];
            for (i, &t) in sample.iter().enumerate() {
                if !removed.contains(&i) {
                    let u = unit(t);
                    s = [s[0] + u[0], s[1] + u[1]];
                }
            }
            for extra in replacements(s, m) {
                let total = extra.iter().fold(s, |acc, &a| {
                    let u = unit(a);
                    [acc[0] + u[0], acc[1] + u[1]]
                });
                if norm(total) / (n as f64) < 1e-10 {
                    // Confirm with the library's own evaluation of the modified sample.
                    let mut pts: Vec<Direction> = sample
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| !removed.contains(i))
                        .map(|(_, &t)| Direction::circle(t))
                        .collect();
                    pts.extend(extra.iter().map(|&a| Direction::circle(a)));
                    let emp = Measure::empirical(&pts).unwrap();
                    assert_eq!(circular_mean(&emp), Estimate::Undefined);
                    return Some(m);
                }
            }
        }
    }
    None
}

#[test]
fn finite_sample_breakdown_matches_brute_force() {
    let mut r = rng(SEED);
    for seed in 0..100u64 {
        let n = 1 + (seed % 8) as usize;
        let sample: Vec<f64> = match seed % 4 {
            // antipodal pairs plus a few extra points
            0 => {
                let mut v: Vec<f64> = (0..n / 2)
                    .map(|_| r.random::<f64>() * PI)
                    .flat_map(|a| [a, a + PI])
                    .collect();
                v.extend((v.len()..n).map(|_| r.random::<f64>() * TAU));
                v
            }
            // concentrated
            1 => (0..n).map(|_| 0.3 * r.random::<f64>()).collect(),
            _ => (0..n).map(|_| r.random::<f64>() * TAU).collect(),
        };
        let pts: Vec<Direction> = sample.iter().map(|&t| Direction::circle(t)).collect();
        let got = finite_sample_breakdown(&pts).unwrap();
        assert!(got.exact);
        assert_eq!(
            got.replaced,
            brute_force_breakdown(&sample),
            "sample {sample:?}"
        );
    }
}

#[test]
fn three_close_points_need_two_replacements() {
    let pts: Vec<Direction> = [0.0f64, 10.0, 20.0]
        .iter()
        .map(|d| Direction::circle(d.to_radians()))
        .collect();
    let got = finite_sample_breakdown(&pts).unwrap();
    assert_eq!(got.replaced, Some(2));
    assert_eq!(
        brute_force_breakdown(&[0.0, 10f64.to_radians(), 20f64.to_radians()]),
        Some(2)
    );
}

/// Random antipodally invariant discrete measure on pairs drawn from `anchors` or at random.
fn random_invariant<R: Rng>(r: &mut R, anchors: &[f64]) -> Measure {
    let pairs = r.random_range(1..=8);
    let raw: Vec<f64> = (0..pairs).map(|_| 0.05 + r.random::<f64>()).collect();
    let total: f64 = raw.iter().sum();
    let mut atoms = Vec::new();
    for w in raw {
        let a = if !anchors.is_empty() && r.random::<bool>() {
            anchors[r.random_range(0..anchors.len())]
        } else {
            r.random::<f64>() * TAU
        };
        atoms.push((Direction::circle(a), 0.5 * w / total));
        atoms.push((Direction::circle(a + PI), 0.5 * w / total));
    }
    Measure::discrete(atoms).unwrap()
}

#[test]
fn no_invariant_measure_is_closer_than_the_symmetrization() {
    let anti = GroupElement::antipodal(Space::Circle);
    let mut r = rng(SEED);
    let delta = Measure::point_mass(Direction::circle(0.0));
    assert_eq!(
        invariant_set_distance_involution(&delta, &anti).unwrap(),
        0.5
    );
    let mut best = f64::INFINITY;
    for _ in 0..5000 {
        let q = random_invariant(&mut r, &[0.0]);
        best = best.min(tv(&delta, &q).unwrap());
    }
    assert!(best >= 0.5 - 1e-6, "{best}");

    for _ in 0..50 {
        let p = random_discrete(&mut r, Space::Circle, 5);
        let d = invariant_set_distance_involution(&p, &anti).unwrap();
        let anchors: Vec<f64> = p
            .parts()
            .atoms
            .iter()
            .map(|(a, _)| a.angle().unwrap())
            .collect();
        for _ in 0..200 {
            let q = random_invariant(&mut r, &anchors);
            assert!(tv(&p, &q).unwrap() >= d - 1e-12);
        }
    }
}

#[test]
fn fragility_is_independent_of_the_perturbation() {
    for n in [2, 4, 10, 50] {
        for delta in [1e-9, 1e-6, 0.5] {
            assert_eq!(tv_fragility_demo(n, delta).unwrap(), (0.0, 1.0 / n as f64));
        }
    }
}
