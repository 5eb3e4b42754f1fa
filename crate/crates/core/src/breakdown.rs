//! Breakdown computations for directional functionals.
//!
//! * [`bias_breakdown`]: smallest contamination distance that flips the estimate by π,
//!   found by grid search over point-mass contaminations.
//! * [`definability_bounds`]: upper bounds on the definability breakdown point from
//!   distances to invariant measures (the uniform law, the group symmetrization) and the
//!   group-order ceiling `(k − 1)/k`.
//! * [`finite_sample_breakdown`]: how many sample points must be replaced before the
//!   empirical circular mean becomes undefined.

use std::f64::consts::{PI, TAU};

use itertools::Itertools;
use serde::Serialize;

use crate::error::{check_space, Error, Result};
use crate::functional::Functional;
use crate::geom::{angular_distance, antipode, Direction, GroupElement, Space, IDENTITY_TOL};
use crate::group::{symmetrize, FiniteSubgroup};
use crate::measure::{mix, Measure, ATOM_MERGE_TOL, TAU_DOMAIN};
use crate::metric::{distance, tv, MetricKind};

/// Largest sample size solved by exhaustive subset enumeration.
pub const EXACT_ENUMERATION_LIMIT: usize = 20;

/// Grid for the contamination search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SearchParams {
    /// Contamination fractions `i / eps_steps`, `i = 1..=eps_steps`.
    pub eps_steps: u32,
    /// Number of equally spaced point-mass locations.
    pub locations: u32,
    /// A contaminated estimate within this many radians of the antipode counts as a flip.
    pub angle_tol: f64,
}

impl Default for SearchParams {
    fn default() -> Self {
        SearchParams {
            eps_steps: 2000,
            locations: 720,
            angle_tol: 1e-3,
        }
    }
}

impl SearchParams {
    pub fn eps_step(&self) -> f64 {
        1.0 / self.eps_steps as f64
    }

    pub fn location_step(&self) -> f64 {
        TAU / self.locations as f64
    }
}

/// The least-distance flipping contamination found on the grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BiasBreakdown {
    /// `d(P, Q)` for the flipping contamination `Q`; the breakdown estimate.
    pub epsilon: f64,
    /// Contaminating mass of `Q = (1 − ε)P + ε·δ_φ`.
    pub contamination_mass: f64,
    /// Location `φ` of the contaminating point mass.
    pub contamination_location: f64,
}

/// Grid estimate of `inf{ε : |T(P) − T(Q)| = π for some Q with d(P, Q) < ε}` over
/// point-mass contaminations `Q = (1 − ε)P + ε·δ_φ`. Circle only.
///
/// The location grid is anchored at the antipode of `T(P)`, so the search commutes with
/// rotations. For each location the smallest flipping mass is found; the estimate is the
/// least `d(P, Q)` among those. `None` means no grid point flips the estimate.
pub fn bias_breakdown<T: Functional + ?Sized>(
    functional: &T,
    p: &Measure,
    kind: MetricKind,
    search: &SearchParams,
) -> Result<Option<BiasBreakdown>> {
    check_space(functional.space(), p.space())?;
    if p.space() != Space::Circle {
        return Err(Error::Unsupported(
            "bias breakdown search on the sphere".into(),
        ));
    }
    if search.eps_steps == 0 || search.locations == 0 {
        return Err(Error::InvalidParameter("empty search grid".into()));
    }
    let t0 = functional
        .evaluate(p)
        .direction()
        .ok_or_else(|| Error::OutsideDomain {
            functional: functional.name().to_string(),
        })?;
    let anchor = antipode(&t0).angle().unwrap();
    let mut best: Option<BiasBreakdown> = None;
    for j in 0..search.locations {
        let at = Direction::circle(anchor + search.location_step() * j as f64);
        let first = functional.first_flip(p, &t0, &at, search.eps_steps, search.angle_tol);
        let Some(i) = first else { continue };
        let eps = i as f64 / search.eps_steps as f64;
        let q = mix(p, &Measure::point_mass(at), eps)?;
        let d = distance(kind, p, &q)?;
        if best.is_none_or(|b| d < b.epsilon) {
            best = Some(BiasBreakdown {
                epsilon: d,
                contamination_mass: eps,
                contamination_location: at.angle().unwrap(),
            });
        }
    }
    Ok(best)
}

/// `R/(1 + R)`: the point-mass contamination at the antipode of the mean at which the
/// contaminated resultant vanishes. Beyond it the circular mean points the other way.
pub fn flip_threshold_circular_mean(p: &Measure) -> Result<f64> {
    if p.space() != Space::Circle {
        return Err(Error::SpaceMismatch {
            expected: Space::Circle,
            found: p.space(),
        });
    }
    let r = p.resultant();
    if r.direction.is_none() {
        return Err(Error::OutsideDomain {
            functional: "circular_mean".into(),
        });
    }
    Ok(r.length / (1.0 + r.length))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DefinabilityBounds {
    /// `d(P, U)`.
    pub bound_uniform: f64,
    /// `d(P, P_k)`.
    pub bound_symmetrized: f64,
    /// `(k − 1)/k`.
    pub bound_group: f64,
}

/// Upper bounds on the definability breakdown point of an equivariant functional.
///
/// Fails with [`Error::GroupFunctionalMismatch`] if the symmetrized measure is still
/// inside the functional's domain, since then it is not a witness of undefinability.
pub fn definability_bounds<T: Functional + ?Sized>(
    functional: &T,
    p: &Measure,
    kind: MetricKind,
    group: &FiniteSubgroup,
) -> Result<DefinabilityBounds> {
    check_space(functional.space(), p.space())?;
    check_space(p.space(), group.space())?;
    let sym = symmetrize(p, group)?;
    if functional.in_domain(&sym) {
        return Err(Error::GroupFunctionalMismatch {
            functional: functional.name().to_string(),
        });
    }
    let k = group.order() as f64;
    let bounds = DefinabilityBounds {
        bound_uniform: distance(kind, p, &Measure::uniform(p.space()))?,
        bound_symmetrized: distance(kind, p, &sym)?,
        bound_group: (k - 1.0) / k,
    };
    if bounds.bound_symmetrized > bounds.bound_group + 1e-12 {
        return Err(Error::BoundViolated(format!(
            "d(P, P_k) = {} exceeds (k − 1)/k = {}",
            bounds.bound_symmetrized, bounds.bound_group
        )));
    }
    Ok(bounds)
}

/// Total variation distance from `P` to the set of `g`-invariant measures, for an
/// involution `g`. Equals `tv(P, (P + P^g)/2) = tv(P, P^g)/2`; no invariant measure is
/// closer, because `tv(P, P^g) ≤ tv(P, Q) + tv(Q^g, P^g) = 2·tv(P, Q)`.
pub fn invariant_set_distance_involution(p: &Measure, g: &GroupElement) -> Result<f64> {
    check_space(p.space(), g.space())?;
    if g.is_identity(IDENTITY_TOL) || !g.power(2).is_identity(IDENTITY_TOL) {
        return Err(Error::InvalidGroup("element is not an involution".into()));
    }
    let group = FiniteSubgroup::new(g.with_order(2)?)?;
    tv(p, &symmetrize(p, &group)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FiniteSampleBreakdown {
    pub n: usize,
    /// Fewest replacements that make the mean undefined; `None` if no number of
    /// replacements does (only for `n = 1`).
    pub replaced: Option<usize>,
    /// `false` when the count comes from the greedy search and is only an upper bound.
    pub exact: bool,
}

impl FiniteSampleBreakdown {
    pub fn fraction(&self) -> Option<f64> {
        self.replaced.map(|m| m as f64 / self.n as f64)
    }
}

/// Smallest number `m` of sample points whose replacement can drive the empirical mean
/// direction out of its domain.
///
/// Replacing `m` points leaves a kept sum `S` of `n − m` unit vectors, and the `m` new
/// unit vectors must cancel it. Sums of `m` unit vectors cover exactly: `{0}` for
/// `m = 0`, the unit sphere for `m = 1`, and the ball of radius `m` for `m ≥ 2`. Exact by
/// subset enumeration up to [`EXACT_ENUMERATION_LIMIT`] points; above that a greedy
/// removal order gives an upper bound.
pub fn finite_sample_breakdown(sample: &[Direction]) -> Result<FiniteSampleBreakdown> {
    let n = sample.len();
    let space = sample.first().ok_or(Error::EmptySample)?.space();
    for d in sample {
        check_space(space, d.space())?;
    }
    let vectors: Vec<[f64; 3]> = sample.iter().map(Direction::vector).collect();
    // |sum| / n < TAU_DOMAIN is the implemented "mean undefined".
    let tol = n as f64 * TAU_DOMAIN;

    if n <= EXACT_ENUMERATION_LIMIT {
        for m in 0..=n {
            let hit = (0..n).combinations(n - m).any(|kept| {
                let s = norm_of_sum(kept.iter().map(|&i| vectors[i]));
                cancellable(s, m, tol)
            });
            if hit {
                return Ok(FiniteSampleBreakdown {
                    n,
                    replaced: Some(m),
                    exact: true,
                });
            }
        }
        return Ok(FiniteSampleBreakdown {
            n,
            replaced: None,
            exact: true,
        });
    }

    let mut kept = vectors;
    for m in 0..=n {
        let sum = sum3(kept.iter().copied());
        if cancellable(crate::geom::norm3(sum), m, tol) {
            return Ok(FiniteSampleBreakdown {
                n,
                replaced: Some(m),
                exact: false,
            });
        }
        let Some((idx, _)) = kept
            .iter()
            .enumerate()
            .map(|(i, v)| (i, v[0] * sum[0] + v[1] * sum[1] + v[2] * sum[2]))
            .max_by(|a, b| a.1.total_cmp(&b.1))
        else {
            break;
        };
        kept.swap_remove(idx);
    }
    Ok(FiniteSampleBreakdown {
        n,
        replaced: None,
        exact: false,
    })
}

fn cancellable(kept_norm: f64, m: usize, tol: f64) -> bool {
    match m {
        0 => kept_norm < tol,
        1 => (kept_norm - 1.0).abs() < tol,
        _ => kept_norm < m as f64 + tol,
    }
}

fn sum3<I: Iterator<Item = [f64; 3]>>(it: I) -> [f64; 3] {
    it.fold([0.0; 3], |a, v| [a[0] + v[0], a[1] + v[1], a[2] + v[2]])
}

fn norm_of_sum<I: Iterator<Item = [f64; 3]>>(it: I) -> f64 {
    crate::geom::norm3(sum3(it))
}

/// Builds `n/2` antipodal pairs (an invariant sample), moves one point by `delta`, and
/// returns the total variation distance to the antipodally invariant measures before
/// and after. The result is `(0, 1/n)` for every `delta > 0`: an arbitrarily small
/// change to one observation moves the sample a full `1/n` away from invariance.
pub fn tv_fragility_demo(n: usize, delta: f64) -> Result<(f64, f64)> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "sample size must be even and at least 2, got {n}"
        )));
    }
    if !(delta.is_finite() && delta > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "perturbation must be positive, got {delta}"
        )));
    }
    let pairs = n / 2;
    let mut points: Vec<Direction> = (0..pairs)
        .flat_map(|i| {
            let t = (i as f64 + 0.5) * PI / pairs as f64;
            [Direction::circle(t), Direction::circle(t + PI)]
        })
        .collect();
    let anti = GroupElement::antipodal(Space::Circle);
    let before = invariant_set_distance_involution(&Measure::empirical(&points)?, &anti)?;

    let moved = Direction::circle(points[0].angle().unwrap() + delta);
    let collides = points[1..].iter().any(|d| {
        angular_distance(d, &moved).unwrap() <= ATOM_MERGE_TOL
            || angular_distance(&antipode(d), &moved).unwrap() <= ATOM_MERGE_TOL
    });
    if collides {
        return Err(Error::InvalidParameter(format!(
            "perturbation {delta} lands on another sample point or its antipode"
        )));
    }
    points[0] = moved;
    let after = invariant_set_distance_involution(&Measure::empirical(&points)?, &anti)?;
    Ok((before, after))
}

/// Everything computed for one measure.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BreakdownReport {
    pub functional: String,
    pub metric: MetricKind,
    /// `None` when no grid contamination flips the estimate.
    pub bias_breakdown: Option<f64>,
    pub contamination_mass: Option<f64>,
    pub contamination_location: Option<f64>,
    pub bound_uniform: f64,
    pub bound_symmetrized: f64,
    pub bound_group: f64,
    pub group_order: usize,
    pub eps_step: f64,
    pub location_step: f64,
    pub angle_tol: f64,
    /// The definability breakdown point itself (distance to the complement of the
    /// domain) is not computed; only the upper bounds above.
    pub definability_exact: bool,
    pub seed: u64,
}

pub fn breakdown_report<T: Functional + ?Sized>(
    functional: &T,
    p: &Measure,
    kind: MetricKind,
    group: &FiniteSubgroup,
    search: &SearchParams,
    seed: u64,
) -> Result<BreakdownReport> {
    let bias = bias_breakdown(functional, p, kind, search)?;
    let bounds = definability_bounds(functional, p, kind, group)?;
    Ok(BreakdownReport {
        functional: functional.name().to_string(),
        metric: kind,
        bias_breakdown: bias.map(|b| b.epsilon),
        contamination_mass: bias.map(|b| b.contamination_mass),
        contamination_location: bias.map(|b| b.contamination_location),
        bound_uniform: bounds.bound_uniform,
        bound_symmetrized: bounds.bound_symmetrized,
        bound_group: bounds.bound_group,
        group_order: group.order(),
        eps_step: search.eps_step(),
        location_step: search.location_step(),
        angle_tol: search.angle_tol,
        definability_exact: false,
        seed,
    })
}
