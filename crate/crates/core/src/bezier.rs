//! Rational Bernstein–Bézier curves and tensor-product patches.
//!
//! Everything is evaluated by de Casteljau's algorithm on homogeneous
//! coordinates `(w·x, w·y[, w·z], w)` followed by a perspective divide.
//! Control point `j` of a degree-`m` curve multiplies `C(m,j) (1-s)^(m-j) s^j`,
//! so the curve starts at the first control point and ends at the last.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Basis conversion above this degree loses roughly ten digits.
pub const CONVERSION_DEGREE_WARN: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: Point2) -> f64 {
        (self - other).norm()
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, k: f64) -> Point2 {
        Point2::new(self.x * k, self.y * k)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Point3 { x, y, z }
    }

    pub fn norm(self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn cross(self, o: Point3) -> Point3 {
        Point3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn dot(self, o: Point3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }
}

impl Add for Point3 {
    type Output = Point3;
    fn add(self, o: Point3) -> Point3 {
        Point3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Point3 {
    type Output = Point3;
    fn sub(self, o: Point3) -> Point3 {
        Point3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Point3 {
    type Output = Point3;
    fn mul(self, k: f64) -> Point3 {
        Point3::new(self.x * k, self.y * k, self.z * k)
    }
}

/// Axis-aligned box over control points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundingBox<const D: usize> {
    pub min: [f64; D],
    pub max: [f64; D],
}

pub type BoundingBox2 = BoundingBox<2>;
pub type BoundingBox3 = BoundingBox<3>;

impl<const D: usize> BoundingBox<D> {
    pub fn empty() -> Self {
        BoundingBox {
            min: [f64::INFINITY; D],
            max: [f64::NEG_INFINITY; D],
        }
    }

    pub fn is_empty(&self) -> bool {
        (0..D).any(|k| self.min[k] > self.max[k])
    }

    pub fn include(&mut self, p: [f64; D]) {
        for (k, x) in p.into_iter().enumerate() {
            self.min[k] = self.min[k].min(x);
            self.max[k] = self.max[k].max(x);
        }
    }

    pub fn union(mut self, other: &Self) -> Self {
        if !other.is_empty() {
            self.include(other.min);
            self.include(other.max);
        }
        self
    }

    pub fn diagonal(&self) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        (0..D)
            .map(|k| (self.max[k] - self.min[k]).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    pub fn inflate(mut self, margin: f64) -> Self {
        for k in 0..D {
            self.min[k] -= margin;
            self.max[k] += margin;
        }
        self
    }

    pub fn contains(&self, p: [f64; D]) -> bool {
        (0..D).all(|k| p[k] >= self.min[k] && p[k] <= self.max[k])
    }
}

/// Anything defined by control points that has a control bounding box.
pub trait ControlNet<const D: usize> {
    fn control_bbox(&self) -> BoundingBox<D>;
}

impl<const D: usize, T: ControlNet<D>> ControlNet<D> for [T] {
    fn control_bbox(&self) -> BoundingBox<D> {
        self.iter()
            .fold(BoundingBox::empty(), |b, g| b.union(&g.control_bbox()))
    }
}

impl<const D: usize, T: ControlNet<D>> ControlNet<D> for Vec<T> {
    fn control_bbox(&self) -> BoundingBox<D> {
        self.as_slice().control_bbox()
    }
}

/// Runs de Casteljau on homogeneous control points and returns the value and
/// the first derivative (from the penultimate level).
#[allow(clippy::needless_range_loop)]
fn de_casteljau<const N: usize>(
    ctrl: &[[f64; N]],
    t: f64,
    work: &mut Vec<[f64; N]>,
) -> ([f64; N], [f64; N]) {
    let m = ctrl.len() - 1;
    work.clear();
    work.extend_from_slice(ctrl);
    if m == 0 {
        return (work[0], [0.0; N]);
    }
    let s = 1.0 - t;
    for level in 1..m {
        for j in 0..=(m - level) {
            for k in 0..N {
                work[j][k] = s * work[j][k] + t * work[j + 1][k];
            }
        }
    }
    let (a, b) = (work[0], work[1]);
    let mut value = [0.0; N];
    let mut deriv = [0.0; N];
    for k in 0..N {
        value[k] = s * a[k] + t * b[k];
        deriv[k] = m as f64 * (b[k] - a[k]);
    }
    (value, deriv)
}

fn check_unit(s: f64) -> Result<()> {
    if (0.0..=1.0).contains(&s) {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange { value: s })
    }
}

fn check_weights<'a>(weights: impl IntoIterator<Item = &'a f64>) -> Result<()> {
    for (j, &w) in weights.into_iter().enumerate() {
        if !(w.is_finite() && w > 0.0) {
            return Err(Error::InvalidGeometry(format!(
                "weight {j} is {w}; weights must be finite and strictly positive"
            )));
        }
    }
    Ok(())
}

/// Degree-`m` planar rational Bézier curve.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalBezierCurve {
    points: Vec<Point2>,
    weights: Vec<f64>,
    homogeneous: Vec<[f64; 3]>,
}

impl RationalBezierCurve {
    pub fn new(points: Vec<Point2>, weights: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidGeometry("curve has no control points".into()));
        }
        if points.len() != weights.len() {
            return Err(Error::InvalidGeometry(format!(
                "curve has {} control points but {} weights",
                points.len(),
                weights.len()
            )));
        }
        check_weights(&weights)?;
        if let Some(j) = points
            .iter()
            .position(|p| !(p.x.is_finite() && p.y.is_finite()))
        {
            return Err(Error::InvalidGeometry(format!(
                "control point {j} is not finite"
            )));
        }
        let homogeneous = points
            .iter()
            .zip(&weights)
            .map(|(p, &w)| [w * p.x, w * p.y, w])
            .collect();
        Ok(RationalBezierCurve {
            points,
            weights,
            homogeneous,
        })
    }

    /// Polynomial curve (all weights one).
    pub fn polynomial(points: Vec<Point2>) -> Result<Self> {
        let n = points.len();
        Self::new(points, vec![1.0; n])
    }

    pub fn line(a: Point2, b: Point2) -> Self {
        Self::polynomial(vec![a, b]).expect("finite line endpoints")
    }

    pub fn degree(&self) -> usize {
        self.points.len() - 1
    }

    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn start(&self) -> Point2 {
        self.points[0]
    }

    pub fn end(&self) -> Point2 {
        self.points[self.degree()]
    }

    /// All weights equal within 1e-14 relative, i.e. the curve is polynomial.
    pub fn is_polynomial(&self) -> bool {
        let w0 = self.weights[0];
        self.weights.iter().all(|w| (w - w0).abs() <= 1e-14 * w0)
    }

    pub fn reversed(&self) -> Self {
        let mut points = self.points.clone();
        let mut weights = self.weights.clone();
        points.reverse();
        weights.reverse();
        Self::new(points, weights).expect("reversal keeps validity")
    }

    pub fn map_points(&self, f: impl Fn(Point2) -> Point2) -> Result<Self> {
        Self::new(
            self.points.iter().map(|&p| f(p)).collect(),
            self.weights.clone(),
        )
    }

    /// Point on the curve; `s` must lie in `[0, 1]`.
    pub fn eval(&self, s: f64) -> Result<Point2> {
        check_unit(s)?;
        Ok(self.eval_extrapolate(s))
    }

    /// Point on the curve without the parameter range check.
    pub fn eval_extrapolate(&self, s: f64) -> Point2 {
        self.eval_with_derivative(s).0
    }

    /// `(dx/ds, dy/ds)`; `s` must lie in `[0, 1]`.
    pub fn derivative(&self, s: f64) -> Result<Point2> {
        check_unit(s)?;
        Ok(self.eval_with_derivative(s).1)
    }

    /// Value and parametric derivative from one de Casteljau sweep.
    pub fn eval_with_derivative(&self, s: f64) -> (Point2, Point2) {
        let mut work = Vec::with_capacity(self.homogeneous.len());
        let (h, dh) = de_casteljau(&self.homogeneous, s, &mut work);
        let w = h[2];
        let p = Point2::new(h[0] / w, h[1] / w);
        let d = Point2::new((dh[0] - p.x * dh[2]) / w, (dh[1] - p.y * dh[2]) / w);
        (p, d)
    }

    /// The weight (denominator) polynomial at `s`.
    pub fn weight_at(&self, s: f64) -> f64 {
        let mut work = Vec::new();
        let ctrl: Vec<[f64; 1]> = self.weights.iter().map(|&w| [w]).collect();
        de_casteljau(&ctrl, s, &mut work).0[0]
    }
}

impl ControlNet<2> for RationalBezierCurve {
    fn control_bbox(&self) -> BoundingBox2 {
        let mut b = BoundingBox::empty();
        for p in &self.points {
            b.include([p.x, p.y]);
        }
        b
    }
}

/// Tensor-product rational patch of bi-degree `(m, n)`.
///
/// `points[i][j]` is the control point with `u`-index `i` and `v`-index `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalBezierPatch {
    points: Vec<Vec<Point3>>,
    weights: Vec<Vec<f64>>,
    homogeneous: Vec<Vec<[f64; 4]>>,
}

/// Position and both parametric partial derivatives of a patch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatchFrame {
    pub point: Point3,
    pub du: Point3,
    pub dv: Point3,
}

impl PatchFrame {
    /// Unnormalised normal `∂S/∂u × ∂S/∂v`.
    pub fn normal(&self) -> Point3 {
        self.du.cross(self.dv)
    }
}

impl RationalBezierPatch {
    pub fn new(points: Vec<Vec<Point3>>, weights: Vec<Vec<f64>>) -> Result<Self> {
        if points.is_empty() || points[0].is_empty() {
            return Err(Error::InvalidGeometry("patch has no control points".into()));
        }
        let cols = points[0].len();
        if points.iter().any(|row| row.len() != cols) {
            return Err(Error::InvalidGeometry(
                "patch control grid is ragged".into(),
            ));
        }
        if weights.len() != points.len() || weights.iter().any(|row| row.len() != cols) {
            return Err(Error::InvalidGeometry(format!(
                "patch weight grid does not match the {}x{} control grid",
                points.len(),
                cols
            )));
        }
        check_weights(weights.iter().flatten())?;
        let homogeneous = points
            .iter()
            .zip(&weights)
            .map(|(row, wrow)| {
                row.iter()
                    .zip(wrow)
                    .map(|(p, &w)| [w * p.x, w * p.y, w * p.z, w])
                    .collect()
            })
            .collect();
        Ok(RationalBezierPatch {
            points,
            weights,
            homogeneous,
        })
    }

    pub fn polynomial(points: Vec<Vec<Point3>>) -> Result<Self> {
        let weights = points.iter().map(|r| vec![1.0; r.len()]).collect();
        Self::new(points, weights)
    }

    /// Bilinear patch with corners `S(0,0)`, `S(1,0)`, `S(0,1)`, `S(1,1)`.
    pub fn bilinear(p00: Point3, p10: Point3, p01: Point3, p11: Point3) -> Self {
        Self::polynomial(vec![vec![p00, p01], vec![p10, p11]]).expect("finite corners")
    }

    pub fn degree_u(&self) -> usize {
        self.points.len() - 1
    }

    pub fn degree_v(&self) -> usize {
        self.points[0].len() - 1
    }

    pub fn points(&self) -> &[Vec<Point3>] {
        &self.points
    }

    pub fn weights(&self) -> &[Vec<f64>] {
        &self.weights
    }

    /// Swaps the roles of `u` and `v`, which flips the normal.
    pub fn transposed(&self) -> Self {
        let (m, n) = (self.degree_u(), self.degree_v());
        let points = (0..=n)
            .map(|j| (0..=m).map(|i| self.points[i][j]).collect())
            .collect();
        let weights = (0..=n)
            .map(|j| (0..=m).map(|i| self.weights[i][j]).collect())
            .collect();
        Self::new(points, weights).expect("transpose keeps validity")
    }

    pub fn map_points(&self, f: impl Fn(Point3) -> Point3) -> Result<Self> {
        let points = self
            .points
            .iter()
            .map(|row| row.iter().map(|&p| f(p)).collect())
            .collect();
        Self::new(points, self.weights.clone())
    }

    pub fn eval(&self, u: f64, v: f64) -> Result<Point3> {
        check_unit(u)?;
        check_unit(v)?;
        Ok(self.frame(u, v).point)
    }

    /// Unnormalised normal `∂S/∂u × ∂S/∂v` at `(u, v)`.
    pub fn normal(&self, u: f64, v: f64) -> Result<Point3> {
        check_unit(u)?;
        check_unit(v)?;
        Ok(self.frame(u, v).normal())
    }

    /// Normal, or `None` when its magnitude is below `1e-14 · diag²` of the
    /// control box (collapsed edges, e.g. sphere poles).
    pub fn normal_checked(&self, u: f64, v: f64) -> Result<Option<Point3>> {
        let n = self.normal(u, v)?;
        Ok(if self.is_degenerate_normal(n) {
            None
        } else {
            Some(n)
        })
    }

    pub(crate) fn is_degenerate_normal(&self, n: Point3) -> bool {
        let d = self.control_bbox().diagonal();
        n.norm() < 1e-14 * d * d
    }

    /// Point and rational partial derivatives, no range check.
    pub fn frame(&self, u: f64, v: f64) -> PatchFrame {
        let mut work = Vec::new();
        let mut along_u_value = Vec::with_capacity(self.homogeneous.len());
        let mut along_u_dv = Vec::with_capacity(self.homogeneous.len());
        for row in &self.homogeneous {
            let (h, dh) = de_casteljau(row, v, &mut work);
            along_u_value.push(h);
            along_u_dv.push(dh);
        }
        let (h, h_u) = de_casteljau(&along_u_value, u, &mut work);
        let (h_v, _) = de_casteljau(&along_u_dv, u, &mut work);
        let w = h[3];
        let p = Point3::new(h[0] / w, h[1] / w, h[2] / w);
        let quotient = |d: [f64; 4]| {
            Point3::new(
                (d[0] - p.x * d[3]) / w,
                (d[1] - p.y * d[3]) / w,
                (d[2] - p.z * d[3]) / w,
            )
        };
        PatchFrame {
            point: p,
            du: quotient(h_u),
            dv: quotient(h_v),
        }
    }
}

impl ControlNet<3> for RationalBezierPatch {
    fn control_bbox(&self) -> BoundingBox3 {
        let mut b = BoundingBox::empty();
        for p in self.points.iter().flatten() {
            b.include([p.x, p.y, p.z]);
        }
        b
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn warn_degree(len: usize) {
    if len > CONVERSION_DEGREE_WARN + 1 {
        log::warn!(
            "basis conversion at degree {} loses about {} digits",
            len - 1,
            (len - 1) / 2
        );
    }
}

/// Bernstein coefficients `b_j` of `Σ b_j C(m,j)(1-s)^(m-j) s^j` to monomial
/// coefficients `a_k` of `Σ a_k s^k`.
pub fn bernstein_to_monomial(coeffs: &[f64]) -> Result<Vec<f64>> {
    if coeffs.is_empty() {
        return Err(Error::InvalidArgument("empty coefficient list".into()));
    }
    warn_degree(coeffs.len());
    let m = coeffs.len() - 1;
    Ok((0..=m)
        .map(|k| {
            let inner: f64 = (0..=k)
                .map(|j| {
                    let sign = if (k - j) % 2 == 0 { 1.0 } else { -1.0 };
                    sign * binomial(k, j) * coeffs[j]
                })
                .sum();
            binomial(m, k) * inner
        })
        .collect())
}

/// Inverse of [`bernstein_to_monomial`].
pub fn monomial_to_bernstein(coeffs: &[f64]) -> Result<Vec<f64>> {
    if coeffs.is_empty() {
        return Err(Error::InvalidArgument("empty coefficient list".into()));
    }
    warn_degree(coeffs.len());
    let m = coeffs.len() - 1;
    Ok((0..=m)
        .map(|j| {
            (0..=j)
                .map(|k| binomial(j, k) / binomial(m, k) * coeffs[k])
                .sum()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

    fn quarter_arc() -> RationalBezierCurve {
        RationalBezierCurve::new(
            vec![
                Point2::new(1.0, 0.0),
                Point2::new(1.0, 1.0),
                Point2::new(0.0, 1.0),
            ],
            vec![1.0, SQRT_2 / 2.0, 1.0],
        )
        .unwrap()
    }

    fn unit_square_patch(z: f64) -> RationalBezierPatch {
        RationalBezierPatch::bilinear(
            Point3::new(0.0, 0.0, z),
            Point3::new(1.0, 0.0, z),
            Point3::new(0.0, 1.0, z),
            Point3::new(1.0, 1.0, z),
        )
    }

    #[test]
    fn arc_endpoints_and_midpoint() {
        let c = quarter_arc();
        assert_eq!(c.eval(0.0).unwrap(), Point2::new(1.0, 0.0));
        assert_eq!(c.eval(1.0).unwrap(), Point2::new(0.0, 1.0));
        let mid = c.eval(0.5).unwrap();
        // x(s) = (1 + (√2-2)s + (1-√2)s²) / (1 + (√2-2)s + (2-√2)s²)
        let s: f64 = 0.5;
        let den = 1.0 + (SQRT_2 - 2.0) * s + (2.0 - SQRT_2) * s * s;
        let x = (1.0 + (SQRT_2 - 2.0) * s + (1.0 - SQRT_2) * s * s) / den;
        let y = (SQRT_2 * s + (1.0 - SQRT_2) * s * s) / den;
        assert!((mid.x - x).abs() < 1e-15 && (mid.y - y).abs() < 1e-15);
        assert!((mid.x - FRAC_1_SQRT_2).abs() < 1e-10);
        assert!((mid.y - FRAC_1_SQRT_2).abs() < 1e-10);
    }

    #[test]
    fn out_of_range_parameter_rejected() {
        let c = quarter_arc();
        assert!(matches!(
            c.eval(1.5),
            Err(Error::ParameterOutOfRange { .. })
        ));
        assert!(c.derivative(-0.1).is_err());
        // extrapolation is explicit
        let p = c.eval_extrapolate(1.5);
        assert!(p.x.is_finite());
    }

    #[test]
    fn arc_derivatives() {
        let c = quarter_arc();
        let d0 = c.derivative(0.0).unwrap();
        assert!(d0.x.abs() < 1e-15);
        assert!((d0.y - SQRT_2).abs() < 1e-14);

        let line = RationalBezierCurve::line(Point2::new(0.0, 0.0), Point2::new(2.0, 0.0));
        for s in [0.0, 0.3, 1.0] {
            assert_eq!(line.derivative(s).unwrap(), Point2::new(2.0, 0.0));
        }

        let s = 0.004210269296207;
        let d = c.derivative(s).unwrap();
        let h = 1e-7;
        let fd = (c.eval(s + h).unwrap() - c.eval(s - h).unwrap()) * (0.5 / h);
        assert!((d.x - fd.x).abs() < 1e-7 && (d.y - fd.y).abs() < 1e-7);
        assert!((d.y.abs() - 1.41).abs() < 0.01);
        assert!((d.x.abs() - 0.00845).abs() < 1e-4);
    }

    #[test]
    fn invalid_curves_rejected() {
        assert!(RationalBezierCurve::new(vec![], vec![]).is_err());
        assert!(RationalBezierCurve::new(vec![Point2::default()], vec![1.0, 1.0]).is_err());
        assert!(RationalBezierCurve::new(
            vec![Point2::default(), Point2::new(1.0, 0.0)],
            vec![1.0, 0.0]
        )
        .is_err());
        assert!(RationalBezierCurve::new(vec![Point2::new(f64::NAN, 0.0)], vec![1.0]).is_err());
    }

    #[test]
    fn patch_evaluation() {
        let p = unit_square_patch(0.0);
        assert_eq!(p.eval(0.25, 0.75).unwrap(), Point3::new(0.25, 0.75, 0.0));
        assert_eq!(p.eval(0.0, 0.0).unwrap(), p.points()[0][0]);
        assert_eq!(p.normal(0.3, 0.6).unwrap(), Point3::new(0.0, 0.0, 1.0));
        assert_eq!(
            p.transposed().normal(0.3, 0.6).unwrap(),
            Point3::new(0.0, 0.0, -1.0)
        );

        let heavy =
            RationalBezierPatch::new(p.points().to_vec(), vec![vec![2.0, 2.0], vec![2.0, 2.0]])
                .unwrap();
        let a = heavy.eval(0.4, 0.7).unwrap();
        let b = p.eval(0.4, 0.7).unwrap();
        assert!((a - b).norm() < 1e-15);
    }

    #[test]
    fn octant_normal_matches_finite_differences() {
        // Degree (2,2) rational patch: quarter arc swept about the z axis.
        let arc = [(1.0, 0.0), (1.0, 1.0), (0.0, 1.0)];
        let w = [1.0, SQRT_2 / 2.0, 1.0];
        let mut points = vec![];
        let mut weights = vec![];
        for (i, &(r, z)) in arc.iter().enumerate() {
            let row = vec![
                Point3::new(r, 0.0, z),
                Point3::new(r, r, z),
                Point3::new(0.0, r, z),
            ];
            points.push(row);
            weights.push(w.iter().map(|wj| wj * w[i]).collect());
        }
        let patch = RationalBezierPatch::new(points, weights).unwrap();
        let (u, v) = (0.37, 0.61);
        let p = patch.eval(u, v).unwrap();
        assert!((p.norm() - 1.0).abs() < 1e-14);
        let h = 1e-6;
        let su = (patch.eval(u + h, v).unwrap() - patch.eval(u - h, v).unwrap()) * (0.5 / h);
        let sv = (patch.eval(u, v + h).unwrap() - patch.eval(u, v - h).unwrap()) * (0.5 / h);
        let fd = su.cross(sv);
        let n = patch.normal(u, v).unwrap();
        assert!((n - fd).norm() < 1e-8, "{n:?} vs {fd:?}");
        // collapsed pole edge at u = 1
        assert!(patch.normal_checked(1.0, 0.5).unwrap().is_none());
        assert!(patch.normal_checked(0.5, 0.5).unwrap().is_some());
    }

    #[test]
    fn basis_conversion_examples() {
        let m = bernstein_to_monomial(&[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(m, vec![1.0, 0.0, 0.0]);
        let b = monomial_to_bernstein(&[0.0, 0.0, 1.0]).unwrap();
        assert_eq!(b, vec![0.0, 0.0, 1.0]);
        assert!(bernstein_to_monomial(&[]).is_err());
        assert!(monomial_to_bernstein(&[]).is_err());
    }

    #[test]
    fn bbox_examples() {
        let c = quarter_arc();
        let rot = |p: Point2| Point2::new(-p.y, p.x);
        let mut curves = vec![c.clone()];
        for _ in 0..3 {
            let last = curves.last().unwrap().clone();
            curves.push(last.map_points(rot).unwrap());
        }
        let b = curves.control_bbox();
        assert_eq!(b.min, [-1.0, -1.0]);
        assert_eq!(b.max, [1.0, 1.0]);

        let dot = RationalBezierCurve::polynomial(vec![Point2::new(2.0, 3.0); 3]).unwrap();
        let b = dot.control_bbox();
        assert_eq!(b.min, b.max);
        assert_eq!(b.diagonal(), 0.0);

        let moved = c.map_points(|p| p + Point2::new(5.0, -1.0)).unwrap();
        let (b0, b1) = (c.control_bbox(), moved.control_bbox());
        assert_eq!(b1.min, [b0.min[0] + 5.0, b0.min[1] - 1.0]);
        assert_eq!(b1.max, [b0.max[0] + 5.0, b0.max[1] - 1.0]);
    }
}
