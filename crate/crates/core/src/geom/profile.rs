use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::Point2;

use super::arc::{solve_arc, ArcGeometry};
use super::GeomError;
use crate::ccs::ContinuousCommand;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Segment {
    Line { start: Point2<f64>, end: Point2<f64> },
    Arc(ArcGeometry),
}

impl Segment {
    pub fn start(&self) -> Point2<f64> {
        match self {
            Segment::Line { start, .. } => *start,
            Segment::Arc(a) => a.start,
        }
    }

    pub fn end(&self) -> Point2<f64> {
        match self {
            Segment::Line { end, .. } => *end,
            Segment::Arc(a) => a.end,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum LoopShape {
    Circle { center: Point2<f64>, radius: f64 },
    Path(Vec<Segment>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Winding {
    CounterClockwise,
    Clockwise,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProfileLoop {
    pub shape: LoopShape,
    pub winding: Winding,
}

impl ProfileLoop {
    /// Signed enclosed area; positive for counter-clockwise loops.
    pub fn signed_area(&self) -> f64 {
        match &self.shape {
            LoopShape::Circle { radius, .. } => PI * radius * radius,
            LoopShape::Path(segments) => segments
                .iter()
                .map(|s| match s {
                    Segment::Line { start, end } => 0.5 * (start.x * end.y - end.x * start.y),
                    Segment::Arc(a) => a.signed_area_term(),
                })
                .sum(),
        }
    }
}

/// Closed 2D loops of one sketch. Containment is even-odd over all loops.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Profile2D {
    pub loops: Vec<ProfileLoop>,
}

/// Builds a profile from dequantized loop groups (curve commands only, one
/// inner `Vec` per `<SOL>`). Each Line/Arc loop starts at the endpoint of
/// its last curve.
pub fn build_profile(loops: &[Vec<ContinuousCommand>]) -> Result<Profile2D, GeomError> {
    let mut out = Vec::with_capacity(loops.len());
    for curves in loops {
        if let [ContinuousCommand::Circle { x, y, radius }] = curves.as_slice() {
            out.push(ProfileLoop {
                shape: LoopShape::Circle { center: Point2::new(*x, *y), radius: *radius },
                winding: Winding::CounterClockwise,
            });
            continue;
        }
        let endpoint = |c: &ContinuousCommand| match *c {
            ContinuousCommand::Line { x, y } | ContinuousCommand::Arc { x, y, .. } => Ok(Point2::new(x, y)),
            other => Err(GeomError::InvalidSequence(format!("{other:?} inside a line/arc loop"))),
        };
        let Some(last) = curves.last() else {
            return Err(GeomError::InvalidSequence("empty loop".into()));
        };
        let start = endpoint(last)?;
        let mut cursor = start;
        let mut segments = Vec::with_capacity(curves.len());
        for c in curves {
            let end = endpoint(c)?;
            let segment = match *c {
                ContinuousCommand::Arc { sweep, ccw, .. } => Segment::Arc(solve_arc(cursor, end, sweep, ccw)?),
                _ => Segment::Line { start: cursor, end },
            };
            if let Segment::Arc(a) = &segment {
                let gap = (a.point_at(a.end_angle) - end).norm();
                if gap > 1e-6 {
                    return Err(GeomError::OpenLoop { gap });
                }
            }
            segments.push(segment);
            cursor = end;
        }
        let gap = (cursor - start).norm();
        if gap > 1e-6 {
            return Err(GeomError::OpenLoop { gap });
        }
        let mut lp = ProfileLoop { shape: LoopShape::Path(segments), winding: Winding::CounterClockwise };
        if lp.signed_area() < 0.0 {
            lp.winding = Winding::Clockwise;
        }
        out.push(lp);
    }
    Ok(Profile2D { loops: out })
}

/// Even-odd containment of `p` in `profile`.
pub fn point_in_profile(profile: &Profile2D, p: Point2<f64>) -> bool {
    ContainmentIndex::new(profile).contains(p.x, p.y)
}

/// A y-monotone piece of a loop boundary.
#[derive(Clone, Copy, Debug)]
enum Piece {
    Line {
        x0: f64,
        y0: f64,
        x1: f64,
        y1: f64,
    },
    /// Quarter-or-less circle piece on one side (`side = ±1`) of the vertical
    /// line through its center.
    Arc {
        cx: f64,
        cy: f64,
        r: f64,
        side: f64,
    },
}

#[derive(Clone, Copy, Debug)]
struct MonotonePiece {
    y_lo: f64,
    y_hi: f64,
    piece: Piece,
}

/// Precomputed crossing structure for fast repeated containment queries.
///
/// Rays are cast toward `+x`; each boundary piece is y-monotone and counted
/// on the half-open interval `[y_lo, y_hi)`, so shared vertices between
/// pieces are counted once for pass-through and zero or two times at
/// extrema.
#[derive(Clone, Debug)]
pub struct ContainmentIndex {
    pieces: Vec<MonotonePiece>,
    circles: Vec<(f64, f64, f64)>,
    bbox: [f64; 4],
}

impl ContainmentIndex {
    pub fn new(profile: &Profile2D) -> Self {
        let mut pieces = Vec::new();
        let mut circles = Vec::new();
        let mut bbox = [f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY];
        let mut grow = |x: f64, y: f64| {
            bbox[0] = bbox[0].min(x);
            bbox[1] = bbox[1].min(y);
            bbox[2] = bbox[2].max(x);
            bbox[3] = bbox[3].max(y);
        };
        for lp in &profile.loops {
            match &lp.shape {
                LoopShape::Circle { center, radius } => {
                    circles.push((center.x, center.y, radius * radius));
                    grow(center.x - radius, center.y - radius);
                    grow(center.x + radius, center.y + radius);
                }
                LoopShape::Path(segments) => {
                    for s in segments {
                        match s {
                            Segment::Line { start, end } => {
                                grow(start.x, start.y);
                                push_piece(
                                    &mut pieces,
                                    (start.x, start.y),
                                    (end.x, end.y),
                                    Piece::Line { x0: start.x, y0: start.y, x1: end.x, y1: end.y },
                                );
                            }
                            Segment::Arc(a) => {
                                grow(a.center.x - a.radius, a.center.y - a.radius);
                                grow(a.center.x + a.radius, a.center.y + a.radius);
                                split_arc(a, &mut pieces);
                            }
                        }
                    }
                }
            }
        }
        ContainmentIndex { pieces, circles, bbox }
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        if x < self.bbox[0] || x > self.bbox[2] || y < self.bbox[1] || y > self.bbox[3] {
            return false;
        }
        let mut inside = false;
        for &(cx, cy, r2) in &self.circles {
            let (dx, dy) = (x - cx, y - cy);
            if dx * dx + dy * dy < r2 {
                inside = !inside;
            }
        }
        for mp in &self.pieces {
            if y < mp.y_lo || y >= mp.y_hi {
                continue;
            }
            let crossing = match mp.piece {
                Piece::Line { x0, y0, x1, y1 } => x0 + (y - y0) * (x1 - x0) / (y1 - y0),
                Piece::Arc { cx, cy, r, side } => {
                    let dy = y - cy;
                    cx + side * (r * r - dy * dy).max(0.0).sqrt()
                }
            };
            if crossing > x {
                inside = !inside;
            }
        }
        inside
    }
}

fn push_piece(pieces: &mut Vec<MonotonePiece>, a: (f64, f64), b: (f64, f64), piece: Piece) {
    if a.1 == b.1 {
        return;
    }
    pieces.push(MonotonePiece { y_lo: a.1.min(b.1), y_hi: a.1.max(b.1), piece });
}

/// Splits an arc at its top and bottom points into y-monotone pieces.
fn split_arc(arc: &ArcGeometry, pieces: &mut Vec<MonotonePiece>) {
    let (lo, hi) = arc.ccw_interval();
    let (first, last) = if arc.ccw { (arc.start, arc.end) } else { (arc.end, arc.start) };
    let (cx, cy, r) = (arc.center.x, arc.center.y, arc.radius);

    // split angles π/2 + k·π strictly inside (lo, hi); even k is the top
    let mut cuts = Vec::with_capacity(3);
    let mut k = ((lo - FRAC_PI_2) / PI).floor() as i64 + 1;
    loop {
        let angle = FRAC_PI_2 + k as f64 * PI;
        if angle >= hi {
            break;
        }
        if angle > lo {
            let y = if k.rem_euclid(2) == 0 { cy + r } else { cy - r };
            cuts.push((angle, (cx, y)));
        }
        k += 1;
    }

    let mut prev_angle = lo;
    let mut prev_point = (first.x, first.y);
    for i in 0..=cuts.len() {
        let (next_angle, next_point) = match cuts.get(i) {
            Some(&cut) => cut,
            None => (hi, (last.x, last.y)),
        };
        let mid = 0.5 * (prev_angle + next_angle);
        let side = if mid.cos() >= 0.0 { 1.0 } else { -1.0 };
        push_piece(pieces, prev_point, next_point, Piece::Arc { cx, cy, r, side });
        prev_angle = next_angle;
        prev_point = next_point;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ccs::{dequantize, parse_ccs};

    fn line(x: f64, y: f64) -> ContinuousCommand {
        ContinuousCommand::Line { x, y }
    }

    fn square() -> Profile2D {
        build_profile(&[vec![line(0.5, 0.0), line(0.5, 0.5), line(0.0, 0.5), line(0.0, 0.0)]]).unwrap()
    }

    #[test]
    fn square_loop() {
        let p = square();
        assert_eq!(p.loops.len(), 1);
        let LoopShape::Path(segments) = &p.loops[0].shape else { panic!() };
        assert_eq!(segments.len(), 4);
        assert_eq!(segments[0].start(), Point2::new(0.0, 0.0));
        assert_eq!(p.loops[0].winding, Winding::CounterClockwise);
        assert!((p.loops[0].signed_area() - 0.25).abs() < 1e-15);

        assert!(point_in_profile(&p, Point2::new(0.25, 0.25)));
        assert!(!point_in_profile(&p, Point2::new(0.5 + 1e-9, 0.5 + 1e-9)));
        assert!(!point_in_profile(&p, Point2::new(3.0, 0.25)));
        assert!(!point_in_profile(&p, Point2::new(-1.0, -1.0)));
    }

    #[test]
    fn annulus_by_even_odd() {
        let seq = parse_ccs("<SOL>\n<Circle>: x=128, y=128, r=47\n<SOL>\n<Circle>: x=128, y=128, r=40").unwrap();
        let cont = dequantize(&seq);
        let loops: Vec<_> = cont
            .commands
            .split(|c| *c == ContinuousCommand::Sol)
            .filter(|g| !g.is_empty())
            .map(<[_]>::to_vec)
            .collect();
        let p = build_profile(&loops).unwrap();
        assert_eq!(p.loops.len(), 2);
        // R = 47/128 ≈ 0.367, r = 40/128 ≈ 0.313
        assert!(point_in_profile(&p, Point2::new(0.34, 0.0)));
        assert!(point_in_profile(&p, Point2::new(0.0, -0.34)));
        assert!(!point_in_profile(&p, Point2::origin()));
        assert!(!point_in_profile(&p, Point2::new(0.3, 0.0)));
        assert!(!point_in_profile(&p, Point2::new(0.37, 0.0)));
    }

    #[test]
    fn rounded_rectangle_from_listing() {
        let text = "<SOL>
<Arc>: x=144, y=112, α=64, f=1
<Line>: x=207, y=112
<Arc>: x=223, y=128, α=64, f=1
<Line>: x=223, y=204
<Arc>: x=207, y=220, α=64, f=1
<Line>: x=144, y=220
<Arc>: x=128, y=204, α=64, f=1
<Line>: x=128, y=128";
        let cont = dequantize(&parse_ccs(text).unwrap());
        let p = build_profile(&[cont.commands[1..].to_vec()]).unwrap();
        let LoopShape::Path(segments) = &p.loops[0].shape else { panic!() };
        let arcs = segments.iter().filter(|s| matches!(s, Segment::Arc(_))).count();
        assert_eq!((arcs, segments.len() - arcs), (4, 4));
        assert_eq!(p.loops[0].winding, Winding::CounterClockwise);
        // quarter arcs of radius 16/128 at each corner
        for s in segments {
            if let Segment::Arc(a) = s {
                assert!((a.radius - 0.125).abs() < 1e-12);
            }
        }
        // rectangle 95x108 units minus four corner notches (r² − πr²/4 each)
        let r: f64 = 0.125;
        let expected = (95.0 / 128.0) * (108.0 / 128.0) - 4.0 * (r * r - PI * r * r / 4.0);
        assert!((p.loops[0].signed_area() - expected).abs() < 1e-12);

        let q = |x: f64, y: f64| Point2::new((x - 128.0) / 128.0, (y - 128.0) / 128.0);
        assert!(point_in_profile(&p, q(175.0, 166.0)));
        assert!(point_in_profile(&p, q(129.0, 150.0)));
        // corner notch: inside the bounding box, outside the rounded corner
        assert!(!point_in_profile(&p, q(128.5, 112.5)));
        assert!(!point_in_profile(&p, q(222.5, 219.5)));
        assert!(point_in_profile(&p, q(140.0, 116.0)));
    }

    #[test]
    fn clockwise_arcs_and_major_arcs() {
        // a "D" shape: line up the left side, clockwise semicircle back down
        let d =
            build_profile(&[vec![line(0.0, 0.5), ContinuousCommand::Arc { x: 0.0, y: -0.5, sweep: PI, ccw: false }]])
                .unwrap();
        assert_eq!(d.loops[0].winding, Winding::Clockwise);
        assert!((d.loops[0].signed_area() + PI * 0.125).abs() < 1e-12);
        assert!(point_in_profile(&d, Point2::new(0.4, 0.0)));
        assert!(point_in_profile(&d, Point2::new(0.01, 0.49)));
        assert!(!point_in_profile(&d, Point2::new(-0.01, 0.0)));
        assert!(!point_in_profile(&d, Point2::new(0.51, 0.0)));

        // three-quarter circle closed by two radii (a pac-man)
        let pac = build_profile(&[vec![
            line(0.5, 0.0),
            ContinuousCommand::Arc { x: 0.0, y: -0.5, sweep: 1.5 * PI, ccw: true },
            line(0.0, 0.0),
        ]])
        .unwrap();
        assert!((pac.loops[0].signed_area() - 0.75 * PI * 0.25).abs() < 1e-12);
        assert!(point_in_profile(&pac, Point2::new(-0.3, 0.0)));
        assert!(point_in_profile(&pac, Point2::new(0.1, 0.3)));
        assert!(!point_in_profile(&pac, Point2::new(0.2, -0.2)));
        // ray through the arc's top point and the center row
        assert!(point_in_profile(&pac, Point2::new(-0.2, 0.0)));
        assert!(!point_in_profile(&pac, Point2::new(0.0, 0.5 + 1e-9)));
    }

    #[test]
    fn degenerate_arc_is_propagated() {
        let err =
            build_profile(&[vec![line(0.5, 0.0), ContinuousCommand::Arc { x: 0.5, y: 0.0, sweep: 1.0, ccw: true }]])
                .unwrap_err();
        assert!(matches!(err, GeomError::DegenerateArc(_)));
    }
}
