//! Sample geometry: circles, squares, a lobed rational region, a cube and a
//! capped cylinder with trimmed caps.

use std::f64::consts::{PI, SQRT_2};

use crate::bezier::{Point2, Point3, RationalBezierCurve, RationalBezierPatch};
use crate::error::Result;
use crate::planar::PlanarRegion;
use crate::surface::TrimmedPatch;
use crate::trim_fit::fit_trim_curves;
use crate::volume::SolidModel;

/// Counter-clockwise circle as four rational quadratic quarter arcs, starting
/// at angle 0.
pub fn circle_curves(center: Point2, radius: f64) -> Vec<RationalBezierCurve> {
    let p = |x: f64, y: f64| Point2::new(center.x + radius * x, center.y + radius * y);
    let corners = [
        (1.0, 0.0),
        (1.0, 1.0),
        (0.0, 1.0),
        (-1.0, 1.0),
        (-1.0, 0.0),
        (-1.0, -1.0),
        (0.0, -1.0),
        (1.0, -1.0),
    ];
    (0..4)
        .map(|k| {
            let a = corners[2 * k];
            let b = corners[2 * k + 1];
            let c = corners[(2 * k + 2) % 8];
            RationalBezierCurve::new(
                vec![p(a.0, a.1), p(b.0, b.1), p(c.0, c.1)],
                vec![1.0, SQRT_2 / 2.0, 1.0],
            )
            .expect("finite circle")
        })
        .collect()
}

pub fn circle(center: Point2, radius: f64) -> PlanarRegion {
    PlanarRegion::single(circle_curves(center, radius)).expect("circle closes")
}

pub fn unit_circle() -> PlanarRegion {
    circle(Point2::new(0.0, 0.0), 1.0)
}

/// Counter-clockwise polygon with straight edges.
pub fn polygon(vertices: &[Point2]) -> Result<PlanarRegion> {
    let n = vertices.len();
    PlanarRegion::single(
        (0..n)
            .map(|i| RationalBezierCurve::line(vertices[i], vertices[(i + 1) % n]))
            .collect(),
    )
}

pub fn rectangle(lo: Point2, hi: Point2) -> PlanarRegion {
    polygon(&[lo, Point2::new(hi.x, lo.y), hi, Point2::new(lo.x, hi.y)]).expect("rectangle closes")
}

pub fn unit_square() -> PlanarRegion {
    rectangle(Point2::new(0.0, 0.0), Point2::new(1.0, 1.0))
}

/// Disk of radius `outer` with a concentric hole of radius `inner`.
pub fn annulus(center: Point2, outer: f64, inner: f64) -> PlanarRegion {
    let hole = circle_curves(center, inner)
        .iter()
        .rev()
        .map(RationalBezierCurve::reversed)
        .collect();
    PlanarRegion::new(vec![circle_curves(center, outer), hole]).expect("annulus closes")
}

/// Closed loop of rational quadratics through `vertices` (counter-clockwise).
/// Edge `i` has middle control point `edge midpoint + bulge[i] · outward
/// normal · edge length` and middle weight `weights[i]`.
pub fn bulged_polygon(vertices: &[Point2], bulge: &[f64], weights: &[f64]) -> Result<PlanarRegion> {
    let n = vertices.len();
    let curves = (0..n)
        .map(|i| {
            let a = vertices[i];
            let b = vertices[(i + 1) % n];
            let d = b - a;
            let normal = Point2::new(d.y, -d.x);
            let mid = (a + b) * 0.5 + normal * bulge[i];
            RationalBezierCurve::new(vec![a, mid, b], vec![1.0, weights[i], 1.0])
        })
        .collect::<Result<Vec<_>>>()?;
    PlanarRegion::single(curves)
}

/// Five-lobed region bounded by `n` rational cubics, a stand-in for a
/// mechanical outline with many boundary curves.
pub fn lobed_region(n: usize) -> PlanarRegion {
    let radius = |t: f64| 1.0 + 0.15 * (5.0 * t).cos();
    let point = |t: f64| Point2::new(radius(t) * t.cos(), radius(t) * t.sin());
    let tangent = |t: f64| {
        let r = radius(t);
        let dr = -0.75 * (5.0 * t).sin();
        Point2::new(dr * t.cos() - r * t.sin(), dr * t.sin() + r * t.cos())
    };
    let step = 2.0 * PI / n as f64;
    let knots: Vec<Point2> = (0..n).map(|k| point(k as f64 * step)).collect();
    let curves = (0..n)
        .map(|k| {
            let (t0, t1) = (k as f64 * step, (k + 1) as f64 * step);
            let a = knots[k];
            let b = knots[(k + 1) % n];
            let p1 = a + tangent(t0) * (step / 3.0);
            let p2 = b - tangent(t1) * (step / 3.0);
            RationalBezierCurve::new(vec![a, p1, p2, b], vec![1.0, 0.85, 1.15, 1.0])
                .expect("finite outline")
        })
        .collect();
    PlanarRegion::single(curves).expect("outline closes")
}

/// Axis-aligned cube with outward bilinear faces.
pub fn cube(origin: Point3, side: f64) -> SolidModel {
    let c = |x: f64, y: f64, z: f64| {
        Point3::new(
            origin.x + side * x,
            origin.y + side * y,
            origin.z + side * z,
        )
    };
    let face = |a, b, d, e| TrimmedPatch::untrimmed(RationalBezierPatch::bilinear(a, b, d, e));
    SolidModel::new(
        vec![
            face(c(0., 0., 0.), c(0., 1., 0.), c(1., 0., 0.), c(1., 1., 0.)),
            face(c(0., 0., 1.), c(1., 0., 1.), c(0., 1., 1.), c(1., 1., 1.)),
            face(c(0., 0., 0.), c(1., 0., 0.), c(0., 0., 1.), c(1., 0., 1.)),
            face(c(0., 1., 0.), c(0., 1., 1.), c(1., 1., 0.), c(1., 1., 1.)),
            face(c(0., 0., 0.), c(0., 0., 1.), c(0., 1., 0.), c(0., 1., 1.)),
            face(c(1., 0., 0.), c(1., 1., 0.), c(1., 0., 1.), c(1., 1., 1.)),
        ],
        true,
    )
}

pub fn unit_cube() -> SolidModel {
    cube(Point3::new(0.0, 0.0, 0.0), 1.0)
}

/// Radius of the trim circle centred in the parameter square. It stays clear
/// of the square's edges so that fitted approximations do too.
pub const CAP_TRIM_RADIUS: f64 = 0.45;

/// Exact trim circle of the cylinder caps.
pub fn parameter_disk_loop() -> Vec<RationalBezierCurve> {
    circle_curves(Point2::new(0.5, 0.5), CAP_TRIM_RADIUS)
}

/// Samples of the cap trim circle, `count` distinct points plus
/// the start repeated at the end.
pub fn parameter_circle_samples(count: usize) -> Vec<Point2> {
    let mut pts: Vec<Point2> = (0..count)
        .map(|i| {
            let t = 2.0 * PI * i as f64 / count as f64;
            Point2::new(
                0.5 + CAP_TRIM_RADIUS * t.cos(),
                0.5 + CAP_TRIM_RADIUS * t.sin(),
            )
        })
        .collect();
    pts.push(pts[0]);
    pts
}

/// Cubic fit of the cap trim circle with `segments` pieces.
pub fn fitted_parameter_disk_loop(segments: usize) -> Result<Vec<RationalBezierCurve>> {
    fit_trim_curves(&parameter_circle_samples(3 * segments), segments, 3)
}

/// Cylinder of the given radius over `z ∈ [0, height]`: four rational side
/// patches and two square caps trimmed by the exact parameter circle.
pub fn capped_cylinder(radius: f64, height: f64) -> SolidModel {
    capped_cylinder_with_trim(radius, height, parameter_disk_loop()).expect("exact trim is valid")
}

/// [`capped_cylinder`] with caps trimmed by `trim`, a counter-clockwise loop
/// in the parameter square meant to approximate the cap trim circle.
pub fn capped_cylinder_with_trim(
    radius: f64,
    height: f64,
    trim: Vec<RationalBezierCurve>,
) -> Result<SolidModel> {
    let mut patches = Vec::with_capacity(6);
    for arc in circle_curves(Point2::new(0.0, 0.0), radius) {
        let points = arc
            .points()
            .iter()
            .map(|p| vec![Point3::new(p.x, p.y, 0.0), Point3::new(p.x, p.y, height)])
            .collect();
        let weights = arc.weights().iter().map(|&w| vec![w, w]).collect();
        patches.push(TrimmedPatch::untrimmed(RationalBezierPatch::new(
            points, weights,
        )?));
    }
    let r = radius * 0.5 / CAP_TRIM_RADIUS;
    let top = RationalBezierPatch::bilinear(
        Point3::new(-r, -r, height),
        Point3::new(r, -r, height),
        Point3::new(-r, r, height),
        Point3::new(r, r, height),
    );
    // transposed so the normal points down; the disk is symmetric under the
    // swap, so the same trim loop applies
    let bottom = RationalBezierPatch::bilinear(
        Point3::new(-r, -r, 0.0),
        Point3::new(-r, r, 0.0),
        Point3::new(r, -r, 0.0),
        Point3::new(r, r, 0.0),
    );
    patches.push(TrimmedPatch::new(top, vec![trim.clone()])?);
    patches.push(TrimmedPatch::new(bottom, vec![trim])?);
    Ok(SolidModel::new(patches, true))
}
