//! Fixtures shared by the benchmarks.

use greenquad::shapes::{bulged_polygon, capped_cylinder, lobed_region, unit_circle};
use greenquad::{PlanarRegion, Point2, SolidModel};

/// Regions of growing boundary complexity, labelled for reports.
pub fn regions() -> Vec<(&'static str, PlanarRegion)> {
    let hexagon: Vec<Point2> = (0..6)
        .map(|i| {
            let t = std::f64::consts::PI * i as f64 / 3.0;
            Point2::new(t.cos(), t.sin())
        })
        .collect();
    let bulged = bulged_polygon(
        &hexagon,
        &[0.1, -0.05, 0.2, 0.0, 0.15, -0.1],
        &[0.8, 1.3, 0.7, 1.6, 1.0, 1.2],
    )
    .expect("hexagon closes");
    vec![
        ("circle", unit_circle()),
        ("bulged hexagon", bulged),
        ("lobed 46", lobed_region(46)),
    ]
}

pub fn cylinder() -> SolidModel {
    capped_cylinder(1.0, 1.0)
}

/// Smooth integrand used across benchmarks.
pub fn smooth(x: f64, y: f64, z: f64) -> f64 {
    (x + y).exp() * z.cos()
}
