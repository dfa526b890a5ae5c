//! Piecewise Bézier fits of ordered trim points, and loop closure checks.

use nalgebra::{DMatrix, DVector};

use crate::bezier::{Point2, RationalBezierCurve};
use crate::error::{Error, Result};

/// Default fit degree. Higher degrees start to ring on evenly spread data.
pub const DEFAULT_FIT_DEGREE: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Closure {
    pub closed: bool,
    /// Largest distance between the end of one curve and the start of the next.
    pub gap: f64,
}

/// Checks that each curve ends where the next one starts, wrapping around.
pub fn closure_check(curves: &[RationalBezierCurve], tolerance: f64) -> Closure {
    let n = curves.len();
    let gap = (0..n)
        .map(|i| curves[i].end().distance(curves[(i + 1) % n].start()))
        .fold(0.0, f64::max);
    Closure {
        closed: gap <= tolerance,
        gap,
    }
}

/// Cumulative chord length of a polyline, starting at zero.
pub fn chord_parameters(points: &[Point2]) -> Result<Vec<f64>> {
    let mut t = Vec::with_capacity(points.len());
    let mut acc = 0.0;
    t.push(0.0);
    for (i, w) in points.windows(2).enumerate() {
        let d = w[0].distance(w[1]);
        if !(d > 0.0 && d.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "trim points {i} and {} coincide or are not finite",
                i + 1
            )));
        }
        acc += d;
        t.push(acc);
    }
    Ok(t)
}

fn bernstein_row(degree: usize, t: f64) -> Vec<f64> {
    let mut row = vec![0.0; degree + 1];
    row[0] = 1.0;
    for k in 1..=degree {
        for j in (1..=k).rev() {
            row[j] = (1.0 - t) * row[j] + t * row[j - 1];
        }
        row[0] *= 1.0 - t;
    }
    row
}

fn nearest_index(t: &[f64], lo: usize, hi: usize, target: f64) -> usize {
    (lo..=hi)
        .min_by(|&a, &b| (t[a] - target).abs().total_cmp(&(t[b] - target).abs()))
        .expect("nonempty range")
}

/// Fits `segments` polynomial Bézier curves of the given degree to an ordered
/// point list.
///
/// Span boundaries sit at equal fractions of the total chord length. On each
/// span the curve interpolates `degree + 1` of the points (the span ends and
/// the points nearest evenly spaced chord positions), parametrised by
/// normalised chord length. Consecutive curves share their end points exactly.
pub fn fit_trim_curves(
    points: &[Point2],
    segments: usize,
    degree: usize,
) -> Result<Vec<RationalBezierCurve>> {
    if segments == 0 {
        return Err(Error::InvalidArgument(
            "segment count must be positive".into(),
        ));
    }
    if degree == 0 {
        return Err(Error::InvalidArgument("fit degree must be positive".into()));
    }
    let needed = segments * degree + 1;
    if points.len() < needed {
        return Err(Error::InvalidArgument(format!(
            "{} points cannot support {segments} segments of degree {degree}: each segment needs {} points including shared ends, {needed} in total",
            points.len(),
            degree + 1
        )));
    }
    let t = chord_parameters(points)?;
    let n = points.len();
    let total = t[n - 1];

    let mut bounds = vec![0usize];
    for k in 1..segments {
        let lo = bounds[k - 1] + degree;
        let hi = n - 1 - degree * (segments - k);
        bounds.push(nearest_index(
            &t,
            lo,
            hi,
            total * k as f64 / segments as f64,
        ));
    }
    bounds.push(n - 1);

    bounds
        .windows(2)
        .map(|b| fit_span(points, &t, b[0], b[1], degree))
        .collect()
}

fn fit_span(
    points: &[Point2],
    t: &[f64],
    a: usize,
    b: usize,
    degree: usize,
) -> Result<RationalBezierCurve> {
    let mut picks = vec![a];
    for j in 1..degree {
        let target = t[a] + (t[b] - t[a]) * j as f64 / degree as f64;
        let lo = picks[j - 1] + 1;
        let hi = b - (degree - j);
        picks.push(nearest_index(t, lo, hi, target));
    }
    picks.push(b);

    let span = t[b] - t[a];
    let tau: Vec<f64> = picks.iter().map(|&i| (t[i] - t[a]) / span).collect();
    let (first, last) = (points[a], points[b]);
    let mut ctrl = vec![first; degree + 1];
    ctrl[degree] = last;

    if degree > 1 {
        let inner = degree - 1;
        let mut m = DMatrix::<f64>::zeros(inner, inner);
        let mut rx = DVector::<f64>::zeros(inner);
        let mut ry = DVector::<f64>::zeros(inner);
        for r in 0..inner {
            let row = bernstein_row(degree, tau[r + 1]);
            let p = points[picks[r + 1]];
            for c in 0..inner {
                m[(r, c)] = row[c + 1];
            }
            rx[r] = p.x - row[0] * first.x - row[degree] * last.x;
            ry[r] = p.y - row[0] * first.y - row[degree] * last.y;
        }
        let lu = m.lu();
        let (Some(cx), Some(cy)) = (lu.solve(&rx), lu.solve(&ry)) else {
            return Err(Error::IllConditioned {
                condition: f64::INFINITY,
            });
        };
        for k in 0..inner {
            ctrl[k + 1] = Point2::new(cx[k], cy[k]);
        }
    }
    RationalBezierCurve::polynomial(ctrl)
}
