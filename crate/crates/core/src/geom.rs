//! Directions on the circle and on S², and the rotations/reflections acting on them.
//!
//! Angles are radians everywhere. A circle [`Direction`] is reduced to `[0, 2π)` when it is
//! built, and a sphere direction is renormalized to unit length, so every value in
//! circulation already satisfies its invariant.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{check_space, Error, Result};

/// Tolerance used when comparing group elements against the identity.
pub const IDENTITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Space {
    Circle,
    Sphere,
}

/// Reduce an angle to `[0, 2π)`.
///
/// `rem_euclid` can return exactly `2π` for tiny negative inputs; that case folds to 0.
pub fn reduce_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Coords {
    Circle(f64),
    Sphere([f64; 3]),
}

/// A point of the parameter space: an angle on S¹ or a unit vector on S².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction(Coords);

impl Direction {
    /// Circle direction at angle `theta` (radians).
    ///
    /// # Panics
    /// If `theta` is not finite.
    pub fn circle(theta: f64) -> Self {
        assert!(theta.is_finite(), "non-finite angle {theta}");
        Direction(Coords::Circle(reduce_angle(theta)))
    }

    /// Sphere direction along `v`, normalized. Fails on zero or non-finite vectors.
    pub fn sphere(v: [f64; 3]) -> Result<Self> {
        let n = norm3(v);
        if !n.is_finite() || n < 1e-300 {
            return Err(Error::InvalidDirection(format!(
                "cannot normalize vector {v:?}"
            )));
        }
        Ok(Direction(Coords::Sphere([v[0] / n, v[1] / n, v[2] / n])))
    }

    /// Direction of a first-moment vector in the given space; `None` for a zero vector.
    pub fn from_vector(space: Space, v: [f64; 3]) -> Option<Self> {
        match space {
            Space::Circle => {
                if v[0] == 0.0 && v[1] == 0.0 {
                    None
                } else {
                    Some(Direction::circle(v[1].atan2(v[0])))
                }
            }
            Space::Sphere => Direction::sphere(v).ok(),
        }
    }

    pub fn space(&self) -> Space {
        match self.0 {
            Coords::Circle(_) => Space::Circle,
            Coords::Sphere(_) => Space::Sphere,
        }
    }

    /// Angle in `[0, 2π)` for circle directions.
    pub fn angle(&self) -> Option<f64> {
        match self.0 {
            Coords::Circle(t) => Some(t),
            Coords::Sphere(_) => None,
        }
    }

    /// Embedding into R³; circle directions are `(cos θ, sin θ, 0)`.
    pub fn vector(&self) -> [f64; 3] {
        match self.0 {
            Coords::Circle(t) => {
                let (s, c) = t.sin_cos();
                [c, s, 0.0]
            }
            Coords::Sphere(v) => v,
        }
    }
}

pub(crate) fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Great-circle distance in `[0, π]`.
pub fn angular_distance(a: &Direction, b: &Direction) -> Result<f64> {
    match (a.0, b.0) {
        (Coords::Circle(x), Coords::Circle(y)) => {
            let d = (x - y).abs();
            Ok(d.min(TAU - d))
        }
        (Coords::Sphere(u), Coords::Sphere(v)) => Ok(norm3(cross(u, v)).atan2(dot(u, v))),
        _ => Err(Error::SpaceMismatch {
            expected: a.space(),
            found: b.space(),
        }),
    }
}

pub fn antipode(x: &Direction) -> Direction {
    match x.0 {
        Coords::Circle(t) => Direction::circle(t + PI),
        Coords::Sphere(v) => Direction(Coords::Sphere([-v[0], -v[1], -v[2]])),
    }
}

type Matrix3 = [[f64; 3]; 3];

const IDENTITY3: Matrix3 = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];

fn matmul(a: &Matrix3, b: &Matrix3) -> Matrix3 {
    let mut out = [[0.0; 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = (0..3).map(|l| a[i][l] * b[l][j]).sum();
        }
    }
    out
}

fn transpose(a: &Matrix3) -> Matrix3 {
    let mut out = [[0.0; 3]; 3];
    for (i, row) in a.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            out[j][i] = x;
        }
    }
    out
}

fn max_abs_diff(a: &Matrix3, b: &Matrix3) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Action {
    /// `x ↦ shift + x`, or `x ↦ shift − x` when `reflect` is set.
    Circle {
        shift: f64,
        reflect: bool,
    },
    Sphere(Matrix3),
}

/// An isometry of the sample space. The same map serves as the induced action on
/// directions, since mean-type functionals are equivariant under it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupElement {
    action: Action,
    order: Option<u32>,
}

impl GroupElement {
    pub fn identity(space: Space) -> Self {
        let action = match space {
            Space::Circle => Action::Circle {
                shift: 0.0,
                reflect: false,
            },
            Space::Sphere => Action::Sphere(IDENTITY3),
        };
        GroupElement {
            action,
            order: Some(1),
        }
    }

    /// Counter-clockwise rotation of the circle by `phi`.
    pub fn rotation(phi: f64) -> Self {
        assert!(phi.is_finite(), "non-finite rotation angle {phi}");
        GroupElement {
            action: Action::Circle {
                shift: reduce_angle(phi),
                reflect: false,
            },
            order: None,
        }
    }

    /// Reflection of the circle across the line through angle `axis`: `x ↦ 2·axis − x`.
    pub fn reflection(axis: f64) -> Self {
        assert!(axis.is_finite(), "non-finite reflection axis {axis}");
        GroupElement {
            action: Action::Circle {
                shift: reduce_angle(2.0 * axis),
                reflect: true,
            },
            order: Some(2),
        }
    }

    /// The antipodal map: rotation by π on the circle, `x ↦ −x` on the sphere.
    pub fn antipodal(space: Space) -> Self {
        match space {
            Space::Circle => GroupElement {
                action: Action::Circle {
                    shift: PI,
                    reflect: false,
                },
                order: Some(2),
            },
            Space::Sphere => GroupElement {
                action: Action::Sphere([[-1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, -1.0]]),
                order: Some(2),
            },
        }
    }

    /// Rotation by `2π/k`, generating the cyclic subgroup of order `k` on the circle.
    pub fn cyclic(k: u32) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidGroup(
                "cyclic order must be at least 1".into(),
            ));
        }
        GroupElement::rotation(TAU / k as f64).with_order(k)
    }

    /// An orthogonal 3×3 matrix acting on S².
    pub fn sphere_matrix(matrix: [[f64; 3]; 3]) -> Result<Self> {
        if matrix.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::InvalidGroup("non-finite matrix entry".into()));
        }
        let gram = matmul(&transpose(&matrix), &matrix);
        let err = max_abs_diff(&gram, &IDENTITY3);
        if err > IDENTITY_TOL {
            return Err(Error::InvalidGroup(format!(
                "matrix is not orthogonal (|MᵀM − I| = {err:e})"
            )));
        }
        Ok(GroupElement {
            action: Action::Sphere(matrix),
            order: None,
        })
    }

    /// Rotation of S² about `axis` by `angle` (Rodrigues' formula).
    pub fn sphere_rotation(axis: [f64; 3], angle: f64) -> Result<Self> {
        let n = norm3(axis);
        if !n.is_finite() || n < 1e-300 || !angle.is_finite() {
            return Err(Error::InvalidGroup(format!(
                "bad rotation axis {axis:?} or angle {angle}"
            )));
        }
        let [x, y, z] = [axis[0] / n, axis[1] / n, axis[2] / n];
        let (s, c) = angle.sin_cos();
        let t = 1.0 - c;
        let m = [
            [t * x * x + c, t * x * y - s * z, t * x * z + s * y],
            [t * x * y + s * z, t * y * y + c, t * y * z - s * x],
            [t * x * z - s * y, t * y * z + s * x, t * z * z + c],
        ];
        Ok(GroupElement {
            action: Action::Sphere(m),
            order: None,
        })
    }

    /// Declare the order `k` of this element, verifying `g^k = ι`.
    pub fn with_order(mut self, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidGroup("order must be positive".into()));
        }
        if !self.power(k).is_identity(IDENTITY_TOL) {
            return Err(Error::InvalidGroup(format!(
                "element composed {k} times is not the identity"
            )));
        }
        self.order = Some(k);
        Ok(self)
    }

    pub fn space(&self) -> Space {
        match self.action {
            Action::Circle { .. } => Space::Circle,
            Action::Sphere(_) => Space::Sphere,
        }
    }

    pub fn order(&self) -> Option<u32> {
        self.order
    }

    /// Rotation angle on the circle, with the reflection flag.
    pub fn circle_action(&self) -> Option<(f64, bool)> {
        match self.action {
            Action::Circle { shift, reflect } => Some((shift, reflect)),
            Action::Sphere(_) => None,
        }
    }

    pub fn matrix(&self) -> Option<[[f64; 3]; 3]> {
        match self.action {
            Action::Sphere(m) => Some(m),
            Action::Circle { .. } => None,
        }
    }

    pub fn apply(&self, x: &Direction) -> Result<Direction> {
        check_space(self.space(), x.space())?;
        Ok(self.apply_unchecked(x))
    }

    pub(crate) fn apply_unchecked(&self, x: &Direction) -> Direction {
        match (self.action, x.0) {
            (Action::Circle { shift, reflect }, Coords::Circle(t)) => {
                Direction::circle(if reflect { shift - t } else { shift + t })
            }
            (Action::Sphere(m), Coords::Sphere(v)) => {
                let w = [dot(m[0], v), dot(m[1], v), dot(m[2], v)];
                let n = norm3(w);
                Direction(Coords::Sphere([w[0] / n, w[1] / n, w[2] / n]))
            }
            _ => unreachable!("space checked by caller"),
        }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &GroupElement) -> Result<GroupElement> {
        check_space(self.space(), other.space())?;
        let action = match (self.action, other.action) {
            (
                Action::Circle {
                    shift: s1,
                    reflect: r1,
                },
                Action::Circle {
                    shift: s2,
                    reflect: r2,
                },
            ) => Action::Circle {
                shift: reduce_angle(if r1 { s1 - s2 } else { s1 + s2 }),
                reflect: r1 != r2,
            },
            (Action::Sphere(a), Action::Sphere(b)) => Action::Sphere(matmul(&a, &b)),
            _ => unreachable!(),
        };
        Ok(GroupElement {
            action,
            order: None,
        })
    }

    /// `self` composed with itself `j` times (`g⁰ = ι`).
    pub fn power(&self, j: u32) -> GroupElement {
        let mut acc = GroupElement::identity(self.space());
        for _ in 0..j {
            acc = self.compose(&acc).expect("same space");
        }
        if j == 1 {
            acc.order = self.order;
        }
        acc
    }

    pub fn inverse(&self) -> GroupElement {
        let action = match self.action {
            Action::Circle { shift, reflect } => Action::Circle {
                shift: if reflect { shift } else { reduce_angle(-shift) },
                reflect,
            },
            Action::Sphere(m) => Action::Sphere(transpose(&m)),
        };
        GroupElement {
            action,
            order: self.order,
        }
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        match self.action {
            Action::Circle { shift, reflect } => !reflect && shift.min(TAU - shift) <= tol,
            Action::Sphere(m) => max_abs_diff(&m, &IDENTITY3) <= tol,
        }
    }

    /// Whether `g` and `h` act identically, within `tol`.
    pub fn approx_eq(&self, other: &GroupElement, tol: f64) -> bool {
        match (self.action, other.action) {
            (
                Action::Circle {
                    shift: s1,
                    reflect: r1,
                },
                Action::Circle {
                    shift: s2,
                    reflect: r2,
                },
            ) => {
                let d = (s1 - s2).abs();
                r1 == r2 && d.min(TAU - d) <= tol
            }
            (Action::Sphere(a), Action::Sphere(b)) => max_abs_diff(&a, &b) <= tol,
            _ => false,
        }
    }

    /// Whether `g` fixes `x` (within `tol` in angular distance).
    pub fn fixes(&self, x: &Direction, tol: f64) -> bool {
        match self.apply(x) {
            Ok(y) => angular_distance(x, &y).map(|d| d <= tol).unwrap_or(false),
            Err(_) => false,
        }
    }
}
