use std::f64::consts::TAU;

use nalgebra::{Point2, Vector2};

use super::GeomError;

/// A circular arc solved from its endpoints, sweep and direction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ArcGeometry {
    pub center: Point2<f64>,
    pub radius: f64,
    /// Polar angle of `start` about `center`.
    pub start_angle: f64,
    /// `start_angle ± sweep`; may leave `[-π, π]`.
    pub end_angle: f64,
    pub ccw: bool,
    pub start: Point2<f64>,
    pub end: Point2<f64>,
}

impl ArcGeometry {
    pub fn sweep(&self) -> f64 {
        (self.end_angle - self.start_angle).abs()
    }

    /// Counter-clockwise angular interval `[lo, lo + sweep]` covered by the arc.
    pub fn ccw_interval(&self) -> (f64, f64) {
        if self.ccw {
            (self.start_angle, self.end_angle)
        } else {
            (self.end_angle, self.start_angle)
        }
    }

    pub fn point_at(&self, angle: f64) -> Point2<f64> {
        self.center + Vector2::new(angle.cos(), angle.sin()) * self.radius
    }

    /// Signed area contribution of this arc in a shoelace sum: chord term
    /// plus the circular segment between chord and arc.
    pub fn signed_area_term(&self) -> f64 {
        let chord = 0.5 * (self.start.x * self.end.y - self.end.x * self.start.y);
        let sweep = self.sweep();
        let segment = 0.5 * self.radius * self.radius * (sweep - sweep.sin());
        if self.ccw {
            chord + segment
        } else {
            chord - segment
        }
    }
}

/// Solves the circle through `start` and `end` subtending `alpha` radians.
/// `ccw` selects a counter-clockwise sweep from start to end.
///
/// The radius is `|end - start| / (2 sin(alpha / 2))`; the center sits on the
/// chord's perpendicular bisector at signed distance `r cos(alpha / 2)`, to
/// the left of the chord for counter-clockwise arcs.
pub fn solve_arc(start: Point2<f64>, end: Point2<f64>, alpha: f64, ccw: bool) -> Result<ArcGeometry, GeomError> {
    let chord = end - start;
    let length = chord.norm();
    if !(alpha.is_finite() && (1e-9..TAU - 1e-9).contains(&alpha)) {
        return Err(GeomError::DegenerateArc(format!("sweep {alpha} outside (0, 2π)")));
    }
    if length < 1e-12 {
        return Err(GeomError::DegenerateArc("start and end coincide".into()));
    }
    let half = 0.5 * alpha;
    let radius = length / (2.0 * half.sin());
    let left = Vector2::new(-chord.y, chord.x) / length;
    let normal = if ccw { left } else { -left };
    let mid = Point2::from((start.coords + end.coords) * 0.5);
    let center = mid + normal * (radius * half.cos());
    let start_angle = (start.y - center.y).atan2(start.x - center.x);
    let end_angle = if ccw { start_angle + alpha } else { start_angle - alpha };
    Ok(ArcGeometry { center, radius, start_angle, end_angle, ccw, start, end })
}
