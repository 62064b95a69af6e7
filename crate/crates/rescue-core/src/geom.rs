//! Planar geometry in a local east/north metre frame: vectors, camera
//! footprints, heading angles, and the rotated-footprint visibility test.
//!
//! Conventions used across the crate: `x` is east, `y` is north, headings
//! are measured clockwise from north in `(-pi, pi]`, and `rotate` turns a
//! vector counter-clockwise.

use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use crate::math;

pub const PI: f64 = core::f64::consts::PI;

/// A point or displacement in the planar east/north frame, in metres.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3-D cross product; positive when `other` lies
    /// counter-clockwise of `self`.
    pub fn cross(self, other: Vec2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        math::sqrt(self.norm_sq())
    }

    pub fn dist(self, other: Vec2) -> f64 {
        (self - other).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, rhs: f64) -> Vec2 {
        Vec2::new(self.x * rhs, self.y * rhs)
    }
}

/// Errors from geometric constructors and queries.
#[derive(Clone, Debug, PartialEq)]
pub enum GeomError {
    /// A camera half-aperture was outside the open interval (0, pi/2).
    InvalidAperture { axis: &'static str, value_rad: f64 },
    /// Flight altitude must be strictly positive.
    NonPositiveAltitude { value_m: f64 },
    /// The zero vector has no heading.
    HeadingUndefined,
}

impl fmt::Display for GeomError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeomError::InvalidAperture { axis, value_rad } => write!(
                f,
                "camera half-aperture {axis} must lie in (0, pi/2) rad, got {value_rad}"
            ),
            GeomError::NonPositiveAltitude { value_m } => {
                write!(f, "altitude must be positive, got {value_m} m")
            }
            GeomError::HeadingUndefined => write!(f, "heading of a zero vector is undefined"),
        }
    }
}

impl core::error::Error for GeomError {}

/// Gimbal-fixed nadir camera described by its two half-apertures.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CameraSpec {
    alpha_rad: f64,
    beta_rad: f64,
}

impl CameraSpec {
    /// `alpha_rad` spans across-track, `beta_rad` along-track; both must lie
    /// in the open interval (0, pi/2).
    pub fn new(alpha_rad: f64, beta_rad: f64) -> Result<Self, GeomError> {
        let check = |axis: &'static str, v: f64| -> Result<(), GeomError> {
            if v.is_finite() && v > 0.0 && v < PI / 2.0 {
                Ok(())
            } else {
                Err(GeomError::InvalidAperture { axis, value_rad: v })
            }
        };
        check("alpha", alpha_rad)?;
        check("beta", beta_rad)?;
        Ok(CameraSpec { alpha_rad, beta_rad })
    }

    pub fn alpha_rad(&self) -> f64 {
        self.alpha_rad
    }

    pub fn beta_rad(&self) -> f64 {
        self.beta_rad
    }
}

/// Rectangular ground footprint of a nadir camera, as half-extents.
///
/// `half_a_m` bounds the across-track axis and `half_b_m` the along-track
/// axis of the footprint, both in metres.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CameraFootprint {
    pub half_a_m: f64,
    pub half_b_m: f64,
}

/// Footprint of `camera` when flown level at `altitude_m` above ground.
pub fn compute_footprint(camera: CameraSpec, altitude_m: f64) -> Result<CameraFootprint, GeomError> {
    if !(altitude_m.is_finite() && altitude_m > 0.0) {
        return Err(GeomError::NonPositiveAltitude { value_m: altitude_m });
    }
    Ok(CameraFootprint {
        half_a_m: altitude_m * math::tan(camera.alpha_rad),
        half_b_m: altitude_m * math::tan(camera.beta_rad),
    })
}

/// Position plus heading (clockwise from north, radians) of a UAV.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UavPose {
    pub position: Vec2,
    pub heading_rad: f64,
}

/// Heading of a velocity vector, clockwise from north, in `(-pi, pi]`.
///
/// Returns an error for the zero vector.
pub fn heading_angle(v: Vec2) -> Result<f64, GeomError> {
    if v.x == 0.0 && v.y == 0.0 {
        return Err(GeomError::HeadingUndefined);
    }
    let h = math::atan2(v.x, v.y);
    // atan2 yields -pi for vectors like (-0.0, -1.0); fold onto +pi so the
    // range is the half-open (-pi, pi].
    if h == -PI {
        Ok(PI)
    } else {
        Ok(h)
    }
}

/// Rotate `v` counter-clockwise by `angle_rad`.
pub fn rotate(v: Vec2, angle_rad: f64) -> Vec2 {
    let (s, c) = (math::sin(angle_rad), math::cos(angle_rad));
    Vec2::new(v.x * c - v.y * s, v.x * s + v.y * c)
}

/// Whether `target` lies inside the camera footprint of a UAV at `pose`.
///
/// The displacement to the target is rotated into the camera frame (rotating
/// counter-clockwise by the heading maps world axes onto across/along-track
/// axes) and compared against the half-extents; the boundary counts as
/// visible.
pub fn target_visible(pose: UavPose, footprint: CameraFootprint, target: Vec2) -> bool {
    let rel = rotate(target - pose.position, pose.heading_rad);
    math::abs(rel.x) <= footprint.half_a_m && math::abs(rel.y) <= footprint.half_b_m
}

// ---------------------------------------------------------------------------
// Polygon-ring primitives shared by the waterway and sampling modules.
// Rings are open vertex lists (last vertex implicitly joins the first).

/// Signed shoelace area; positive for counter-clockwise rings.
pub fn ring_area(ring: &[Vec2]) -> f64 {
    let n = ring.len();
    if n < 3 {
        return 0.0;
    }
    let mut twice = 0.0;
    for i in 0..n {
        let a = ring[i];
        let b = ring[(i + 1) % n];
        twice += a.cross(b);
    }
    twice / 2.0
}

/// Axis-aligned bounding box `(min, max)`; `None` for an empty ring.
pub fn ring_bbox(ring: &[Vec2]) -> Option<(Vec2, Vec2)> {
    let first = *ring.first()?;
    let mut lo = first;
    let mut hi = first;
    for p in &ring[1..] {
        lo.x = lo.x.min(p.x);
        lo.y = lo.y.min(p.y);
        hi.x = hi.x.max(p.x);
        hi.y = hi.y.max(p.y);
    }
    Some((lo, hi))
}

/// Even-odd point-in-ring test. Points exactly on the boundary may land on
/// either side; callers that care use [`dist_point_ring`] with a tolerance.
pub fn point_in_ring(p: Vec2, ring: &[Vec2]) -> bool {
    let n = ring.len();
    if n < 3 {
        return false;
    }
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let a = ring[i];
        let b = ring[j];
        if (a.y > p.y) != (b.y > p.y) {
            let x_cross = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if p.x < x_cross {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

/// Closest point to `p` on segment `ab`.
pub fn closest_point_on_segment(p: Vec2, a: Vec2, b: Vec2) -> Vec2 {
    let ab = b - a;
    let len_sq = ab.norm_sq();
    if len_sq == 0.0 {
        return a;
    }
    let t = ((p - a).dot(ab) / len_sq).clamp(0.0, 1.0);
    a + ab * t
}

/// Distance from `p` to segment `ab`.
pub fn dist_point_segment(p: Vec2, a: Vec2, b: Vec2) -> f64 {
    p.dist(closest_point_on_segment(p, a, b))
}

/// Distance from `p` to the closed boundary of `ring`.
pub fn dist_point_ring(p: Vec2, ring: &[Vec2]) -> f64 {
    let n = ring.len();
    let mut best = f64::INFINITY;
    for i in 0..n {
        let d = dist_point_segment(p, ring[i], ring[(i + 1) % n]);
        best = best.min(d);
    }
    best
}

/// Whether segments `ab` and `cd` cross at a single interior point of both.
///
/// Shared endpoints, touching, and collinear overlap all return `false`;
/// only proper (transversal) crossings count.
pub fn segments_properly_cross(a: Vec2, b: Vec2, c: Vec2, d: Vec2) -> bool {
    let d1 = (b - a).cross(c - a);
    let d2 = (b - a).cross(d - a);
    let d3 = (d - c).cross(a - c);
    let d4 = (d - c).cross(b - c);
    ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
}
