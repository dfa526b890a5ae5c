//! Spectral and SpectralPE rules for planar regions bounded by loops of
//! rational Bézier curves.
//!
//! For `F(x, y) = ∫_C^y f(x, t) dt`, Green's theorem turns the area integral
//! into a sum of line integrals `-∮ F dx` over the boundary. Each line
//! integral uses a 1D rule in the curve parameter (the intermediate rule),
//! and `F` at every intermediate node uses a Gauss rule on `[C, y]`.

use std::collections::HashMap;

use crate::bezier::{BoundingBox2, ControlNet, Point2, RationalBezierCurve};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::quad1d::{
    gauss_legendre, rational_rule, weight_poly_roots, GaussLegendre, PoleSet, Rule1D,
};
use crate::trim_fit::closure_check;

/// Loops must close to within this fraction of their bounding-box diagonal.
pub const LOOP_CLOSURE_TOL: f64 = 1e-10;

/// Curves whose weights agree to this relative tolerance are polynomial.
pub const POLYNOMIAL_WEIGHT_TOL: f64 = 1e-14;

/// Region bounded by closed loops. Counter-clockwise loops add material,
/// clockwise loops remove it.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanarRegion {
    loops: Vec<Vec<RationalBezierCurve>>,
}

impl PlanarRegion {
    pub fn new(loops: Vec<Vec<RationalBezierCurve>>) -> Result<Self> {
        validate_loops(&loops)?;
        Ok(PlanarRegion { loops })
    }

    pub fn single(curves: Vec<RationalBezierCurve>) -> Result<Self> {
        Self::new(vec![curves])
    }

    pub fn loops(&self) -> &[Vec<RationalBezierCurve>] {
        &self.loops
    }

    /// All curves in loop order; the position is the global curve index.
    pub fn curves(&self) -> impl Iterator<Item = &RationalBezierCurve> {
        self.loops.iter().flatten()
    }

    pub fn curve_count(&self) -> usize {
        self.loops.iter().map(Vec::len).sum()
    }

    pub fn map_points(&self, f: impl Fn(Point2) -> Point2) -> Result<Self> {
        let loops = self
            .loops
            .iter()
            .map(|l| {
                l.iter()
                    .map(|c| c.map_points(&f))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(loops)
    }

    pub fn translated(&self, dx: f64, dy: f64) -> Self {
        self.map_points(|p| Point2::new(p.x + dx, p.y + dy))
            .expect("translation keeps a valid region valid")
    }

    /// Same region with every loop traversed the other way.
    pub fn reversed(&self) -> Self {
        let loops = self
            .loops
            .iter()
            .map(|l| l.iter().rev().map(RationalBezierCurve::reversed).collect())
            .collect();
        PlanarRegion { loops }
    }
}

impl ControlNet<2> for PlanarRegion {
    fn control_bbox(&self) -> BoundingBox2 {
        self.loops
            .iter()
            .fold(BoundingBox2::empty(), |b, l| b.union(&l.control_bbox()))
    }
}

pub(crate) fn validate_loops(loops: &[Vec<RationalBezierCurve>]) -> Result<()> {
    if loops.is_empty() {
        return Err(Error::InvalidGeometry("region has no loops".into()));
    }
    for (k, l) in loops.iter().enumerate() {
        if l.is_empty() {
            return Err(Error::InvalidGeometry(format!("loop {k} has no curves")));
        }
        let tolerance = LOOP_CLOSURE_TOL * l.control_bbox().diagonal();
        let closure = closure_check(l, tolerance);
        if !closure.closed {
            return Err(Error::OpenLoop {
                loop_index: k,
                gap: closure.gap,
                tolerance,
            });
        }
    }
    Ok(())
}

/// Lowest control-point `y`: the lower limit of the `y` antiderivative.
pub fn region_constant_c(region: &PlanarRegion) -> f64 {
    region.control_bbox().min[1]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Provenance2D {
    /// Global curve index (loops concatenated).
    pub curve: usize,
    /// Intermediate node index along the curve.
    pub q: usize,
    /// Antiderivative node index.
    pub zeta: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Rule2D {
    pub points: Vec<Point2>,
    pub weights: Vec<f64>,
    pub provenance: Vec<Provenance2D>,
}

impl Rule2D {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn integrate(&self, f: impl FnMut(f64, f64) -> f64) -> Result<f64> {
        integrate2d(self, f)
    }

    pub fn integrate_expr(&self, e: &Expr) -> Result<f64> {
        weighted_sum(
            self.points.iter().map(|p| [p.x, p.y, 0.0]),
            &self.weights,
            |p| Ok(e.eval(p)?),
        )
    }
}

/// `Σ w_l f(x_l, y_l)`; a non-finite value names the offending node.
pub fn integrate2d(rule: &Rule2D, mut f: impl FnMut(f64, f64) -> f64) -> Result<f64> {
    weighted_sum(
        rule.points.iter().map(|p| [p.x, p.y, 0.0]),
        &rule.weights,
        |p| Ok(f(p[0], p[1])),
    )
}

pub(crate) fn weighted_sum(
    points: impl Iterator<Item = [f64; 3]>,
    weights: &[f64],
    mut f: impl FnMut([f64; 3]) -> Result<f64>,
) -> Result<f64> {
    let mut total = 0.0;
    for (index, (p, &w)) in points.zip(weights).enumerate() {
        let value = f(p)?;
        if !value.is_finite() {
            return Err(Error::NonFiniteIntegrand {
                index,
                point: format!("({}, {}, {})", p[0], p[1], p[2]),
                value,
            });
        }
        total += w * value;
    }
    Ok(total)
}

/// Builds the Green's rule over `loops` with antiderivative constant `c` and
/// `p` antiderivative nodes. `intermediate` supplies the rule on `[0, 1]` for
/// each curve, given its global index.
pub(crate) fn green_rule(
    loops: &[Vec<RationalBezierCurve>],
    c: f64,
    p: usize,
    mut intermediate: impl FnMut(usize, &RationalBezierCurve) -> Result<Rule1D>,
) -> Result<Rule2D> {
    let anti = GaussLegendre::new(p)?;
    let mut rule = Rule2D::default();
    for (i, curve) in loops.iter().flatten().enumerate() {
        if curve.control_bbox().diagonal() == 0.0 {
            log::warn!("curve {i} has zero length; its quadrature points carry zero weight");
        }
        let inter = intermediate(i, curve).map_err(|e| e.in_curve(i))?;
        for (q, (&s, &gamma)) in inter.nodes.iter().zip(&inter.weights).enumerate() {
            let (pt, d) = curve.eval_with_derivative(s);
            for (zeta, (y, gz)) in anti.mapped(c, pt.y).enumerate() {
                rule.points.push(Point2::new(pt.x, y));
                rule.weights.push(-(gamma * gz * d.x));
                rule.provenance.push(Provenance2D { curve: i, q, zeta });
            }
        }
    }
    Ok(rule)
}

/// Gauss–Legendre intermediate rule with `q` nodes per curve and `p`
/// antiderivative nodes. `q · p` points per curve.
pub fn spectral_rule(region: &PlanarRegion, q: usize, p: usize) -> Result<Rule2D> {
    if q == 0 || p == 0 {
        return Err(Error::InvalidArgument(format!(
            "rule orders must be positive (got Q = {q}, P = {p})"
        )));
    }
    let inter = gauss_legendre(q, 0.0, 1.0)?;
    green_rule(region.loops(), region_constant_c(region), p, |_, _| {
        Ok(inter.clone())
    })
}

/// Number of antiderivative nodes that make degree-`k` polynomials exact.
pub fn pe_antiderivative_points(k: usize) -> usize {
    (k + 2) / 2
}

/// Whether all weights of the curve agree to [`POLYNOMIAL_WEIGHT_TOL`].
pub fn has_equal_weights(curve: &RationalBezierCurve) -> bool {
    let w = curve.weights();
    let (lo, hi) = w
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
            (lo.min(x), hi.max(x))
        });
    hi - lo <= POLYNOMIAL_WEIGHT_TOL * hi
}

/// Intermediate rule for one curve that makes degree-`k` integrands exact,
/// refined by `extra` polynomial degrees on rational curves.
pub fn pe_intermediate_rule(curve: &RationalBezierCurve, k: usize, extra: usize) -> Result<Rule1D> {
    let m = curve.degree();
    if has_equal_weights(curve) {
        let degree = m * (k + 2) + m.saturating_sub(1) + extra;
        return gauss_legendre(degree / 2 + 1, 0.0, 1.0);
    }
    let roots = weight_poly_roots(curve.weights())?;
    let poles = PoleSet::from_roots(&roots)?.scaled(k + 3);
    // A drop in the weight polynomial's degree moves that many poles to
    // infinity; polynomial exactness takes their place so that the node
    // count stays m(k + 3) + 1.
    let lost = (m - roots.len()) * (k + 3);
    rational_rule(&poles, lost + extra)
}

/// Rule exact (to rounding) for polynomials of total degree `≤ k`.
pub fn spectral_pe_rule(region: &PlanarRegion, k: usize) -> Result<Rule2D> {
    spectral_pe_rule_refined(region, k, 0)
}

/// [`spectral_pe_rule`] with `extra` more intermediate nodes per curve, which
/// refines the rule for non-polynomial integrands.
pub fn spectral_pe_rule_refined(region: &PlanarRegion, k: usize, extra: usize) -> Result<Rule2D> {
    // the intermediate rule depends only on the weights, which outlines
    // built from one primitive often share
    let mut cache: HashMap<Vec<u64>, Rule1D> = HashMap::new();
    green_rule(
        region.loops(),
        region_constant_c(region),
        pe_antiderivative_points(k),
        |_, curve| {
            let key: Vec<u64> = curve.weights().iter().map(|w| w.to_bits()).collect();
            if let Some(rule) = cache.get(&key) {
                return Ok(rule.clone());
            }
            let rule = pe_intermediate_rule(curve, k, extra)?;
            cache.insert(key, rule.clone());
            Ok(rule)
        },
    )
}

/// Point count of [`spectral_pe_rule`] when every curve takes the rational
/// path: `⌈(k+1)/2⌉ · Σ (m_i (k+3) + 1)`.
pub fn pe_point_count(degrees: impl IntoIterator<Item = usize>, k: usize) -> usize {
    pe_antiderivative_points(k) * degrees.into_iter().map(|m| m * (k + 3) + 1).sum::<usize>()
}
