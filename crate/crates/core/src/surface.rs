//! Rules over trimmed rational Bézier patches.
//!
//! The retained part of the parameter square is integrated with the planar
//! Green's machinery (antiderivative in `v` from `v = 0`), then each
//! parametric point is pushed through the patch and its weight multiplied by
//! the normal factor.

use crate::bezier::{ControlNet, Point2, Point3, RationalBezierCurve, RationalBezierPatch};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::planar::{green_rule, validate_loops, weighted_sum, Rule2D};
use crate::quad1d::{gauss_legendre, GaussLegendre};

/// Trim control points may stray this far outside the unit square.
pub const TRIM_BOX_SLACK: f64 = 1e-9;

/// Trim loops must close to within this distance in parameter space.
pub const TRIM_CLOSURE_TOL: f64 = 1e-10;

/// Patch with optional trim loops in its `(u, v)` square. No loops means
/// the whole square is kept.
#[derive(Debug, Clone, PartialEq)]
pub struct TrimmedPatch {
    patch: RationalBezierPatch,
    trim_loops: Vec<Vec<RationalBezierCurve>>,
}

impl TrimmedPatch {
    pub fn new(
        patch: RationalBezierPatch,
        trim_loops: Vec<Vec<RationalBezierCurve>>,
    ) -> Result<Self> {
        for (k, l) in trim_loops.iter().enumerate() {
            validate_trim_loop(l).map_err(|e| match e {
                Error::OpenLoop { gap, tolerance, .. } => Error::OpenLoop {
                    loop_index: k,
                    gap,
                    tolerance,
                },
                Error::InvalidGeometry(msg) => {
                    Error::InvalidGeometry(format!("trim loop {k}: {msg}"))
                }
                other => other,
            })?;
        }
        Ok(TrimmedPatch { patch, trim_loops })
    }

    pub fn untrimmed(patch: RationalBezierPatch) -> Self {
        TrimmedPatch {
            patch,
            trim_loops: Vec::new(),
        }
    }

    pub fn patch(&self) -> &RationalBezierPatch {
        &self.patch
    }

    pub fn trim_loops(&self) -> &[Vec<RationalBezierCurve>] {
        &self.trim_loops
    }

    pub fn is_trimmed(&self) -> bool {
        !self.trim_loops.is_empty()
    }

    /// Same trims on a patch with the opposite normal. The parameter square is
    /// transposed, so the trim loops are mirrored and reversed to match.
    pub fn flipped(&self) -> Self {
        let trim_loops = self
            .trim_loops
            .iter()
            .map(|l| {
                l.iter()
                    .rev()
                    .map(|c| {
                        c.reversed()
                            .map_points(|p| Point2::new(p.y, p.x))
                            .expect("mirroring keeps a valid curve valid")
                    })
                    .collect()
            })
            .collect();
        TrimmedPatch {
            patch: self.patch.transposed(),
            trim_loops,
        }
    }

    pub fn map_points(&self, f: impl Fn(Point3) -> Point3) -> Result<Self> {
        Ok(TrimmedPatch {
            patch: self.patch.map_points(f)?,
            trim_loops: self.trim_loops.clone(),
        })
    }
}

fn validate_trim_loop(curves: &[RationalBezierCurve]) -> Result<()> {
    if curves.is_empty() {
        return Err(Error::InvalidGeometry("trim loop has no curves".into()));
    }
    for (j, c) in curves.iter().enumerate() {
        let b = c.control_bbox();
        let lo = -TRIM_BOX_SLACK;
        let hi = 1.0 + TRIM_BOX_SLACK;
        if b.min.iter().any(|&m| m < lo) || b.max.iter().any(|&m| m > hi) {
            return Err(Error::InvalidGeometry(format!(
                "segment {j} has control points outside the parameter square"
            )));
        }
    }
    let closure = crate::trim_fit::closure_check(curves, TRIM_CLOSURE_TOL);
    if !closure.closed {
        return Err(Error::OpenLoop {
            loop_index: 0,
            gap: closure.gap,
            tolerance: TRIM_CLOSURE_TOL,
        });
    }
    Ok(())
}

/// Counter-clockwise boundary of the unit parameter square.
pub fn unit_square_loop() -> Vec<RationalBezierCurve> {
    let c = [
        Point2::new(0.0, 0.0),
        Point2::new(1.0, 0.0),
        Point2::new(1.0, 1.0),
        Point2::new(0.0, 1.0),
    ];
    (0..4)
        .map(|i| RationalBezierCurve::line(c[i], c[(i + 1) % 4]))
        .collect()
}

/// Which normal factor multiplies the parametric weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormalMode {
    /// `|∂S/∂u × ∂S/∂v|`: surface integrals.
    Full,
    /// `z` component of `∂S/∂u × ∂S/∂v`: the volume pipeline.
    Z,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SurfaceProvenance {
    pub patch: usize,
    /// Trim loop, or 0 for the tensor rule of an untrimmed patch.
    pub loop_index: usize,
    /// Segment within the loop, or 0 for the tensor rule.
    pub segment: usize,
    /// Intermediate node index (the `u` node for the tensor rule).
    pub mu: usize,
    /// Antiderivative node index (the `v` node for the tensor rule).
    pub eta: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SurfaceRule {
    pub points: Vec<Point3>,
    pub weights: Vec<f64>,
    /// Parametric preimage `(u, v)` of each point.
    pub params: Vec<Point2>,
    pub provenance: Vec<SurfaceProvenance>,
    /// Points dropped because the normal degenerates there.
    pub degenerate: usize,
}

impl SurfaceRule {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn integrate(&self, mut f: impl FnMut(f64, f64, f64) -> f64) -> Result<f64> {
        weighted_sum(
            self.points.iter().map(|p| [p.x, p.y, p.z]),
            &self.weights,
            |p| Ok(f(p[0], p[1], p[2])),
        )
    }

    pub fn integrate_expr(&self, e: &Expr) -> Result<f64> {
        weighted_sum(
            self.points.iter().map(|p| [p.x, p.y, p.z]),
            &self.weights,
            |p| Ok(e.eval(p)?),
        )
    }

    fn append(&mut self, mut other: SurfaceRule) {
        self.points.append(&mut other.points);
        self.weights.append(&mut other.weights);
        self.params.append(&mut other.params);
        self.provenance.append(&mut other.provenance);
        self.degenerate += other.degenerate;
    }
}

/// Green's rule for the area inside `loops` in parameter space, with
/// `m_q` intermediate and `n_q` antiderivative nodes and `v` antiderivative
/// starting at 0.
pub fn parametric_area_rule(
    loops: &[Vec<RationalBezierCurve>],
    m_q: usize,
    n_q: usize,
) -> Result<Rule2D> {
    if m_q == 0 || n_q == 0 {
        return Err(Error::InvalidArgument(format!(
            "rule orders must be positive (got {m_q}, {n_q})"
        )));
    }
    validate_loops(loops)?;
    let inter = gauss_legendre(m_q, 0.0, 1.0)?;
    green_rule(loops, 0.0, n_q, |_, _| Ok(inter.clone()))
}

struct Lift<'a> {
    patch: &'a RationalBezierPatch,
    mode: NormalMode,
    threshold: f64,
    rule: SurfaceRule,
}

impl<'a> Lift<'a> {
    fn new(patch: &'a RationalBezierPatch, mode: NormalMode) -> Self {
        let d = patch.control_bbox().diagonal();
        Lift {
            patch,
            mode,
            threshold: 1e-14 * d * d,
            rule: SurfaceRule::default(),
        }
    }

    fn push(&mut self, u: f64, v: f64, w: f64, provenance: SurfaceProvenance) {
        let (u, v) = (u.clamp(0.0, 1.0), v.clamp(0.0, 1.0));
        let frame = self.patch.frame(u, v);
        let n = frame.normal();
        let factor = if n.norm() < self.threshold {
            self.rule.degenerate += 1;
            0.0
        } else {
            match self.mode {
                NormalMode::Full => n.norm(),
                NormalMode::Z => n.z,
            }
        };
        self.rule.points.push(frame.point);
        self.rule.weights.push(w * factor);
        self.rule.params.push(Point2::new(u, v));
        self.rule.provenance.push(provenance);
    }

    fn finish(self, patch_index: usize) -> SurfaceRule {
        if self.rule.degenerate > 0 {
            log::warn!(
                "patch {patch_index}: {} quadrature points sit on a degenerate normal and carry zero weight",
                self.rule.degenerate
            );
        }
        self.rule
    }
}

fn lift_parametric(
    tp: &TrimmedPatch,
    loops: &[Vec<RationalBezierCurve>],
    param: &Rule2D,
    mode: NormalMode,
    patch_index: usize,
) -> SurfaceRule {
    let mut starts = Vec::with_capacity(loops.len());
    let mut acc = 0;
    for l in loops {
        starts.push(acc);
        acc += l.len();
    }
    let mut lift = Lift::new(&tp.patch, mode);
    for ((p, &w), prov) in param
        .points
        .iter()
        .zip(&param.weights)
        .zip(&param.provenance)
    {
        let loop_index = starts.partition_point(|&s| s <= prov.curve) - 1;
        lift.push(
            p.x,
            p.y,
            w,
            SurfaceProvenance {
                patch: patch_index,
                loop_index,
                segment: prov.curve - starts[loop_index],
                mu: prov.q,
                eta: prov.zeta,
            },
        );
    }
    lift.finish(patch_index)
}

fn surface_rule_indexed(
    tp: &TrimmedPatch,
    m_q: usize,
    n_q: usize,
    mode: NormalMode,
    patch_index: usize,
) -> Result<SurfaceRule> {
    let square;
    let loops: &[Vec<RationalBezierCurve>] = if tp.is_trimmed() {
        &tp.trim_loops
    } else {
        square = vec![unit_square_loop()];
        &square
    };
    let param = parametric_area_rule(loops, m_q, n_q)?;
    Ok(lift_parametric(tp, loops, &param, mode, patch_index))
}

/// Rule for one patch through its trim loops (the unit-square loop when it is
/// untrimmed).
pub fn surface_rule(
    tp: &TrimmedPatch,
    m_q: usize,
    n_q: usize,
    mode: NormalMode,
) -> Result<SurfaceRule> {
    surface_rule_indexed(tp, m_q, n_q, mode, 0)
}

fn untrimmed_rule_indexed(
    patch: &RationalBezierPatch,
    n: usize,
    mode: NormalMode,
    patch_index: usize,
) -> Result<SurfaceRule> {
    let g = GaussLegendre::new(n)?;
    let nodes: Vec<(f64, f64)> = g.mapped(0.0, 1.0).collect();
    let mut lift = Lift::new(patch, mode);
    for (mu, &(u, wu)) in nodes.iter().enumerate() {
        for (eta, &(v, wv)) in nodes.iter().enumerate() {
            lift.push(
                u,
                v,
                wu * wv,
                SurfaceProvenance {
                    patch: patch_index,
                    loop_index: 0,
                    segment: 0,
                    mu,
                    eta,
                },
            );
        }
    }
    Ok(lift.finish(patch_index))
}

/// `n × n` tensor Gauss rule over the whole patch.
pub fn untrimmed_rule(
    patch: &RationalBezierPatch,
    n: usize,
    mode: NormalMode,
) -> Result<SurfaceRule> {
    untrimmed_rule_indexed(patch, n, mode, 0)
}

/// Rule for one patch of a model: untrimmed patches take the tensor rule with
/// `max(m_q, n_q)` nodes per direction.
pub fn patch_rule(
    tp: &TrimmedPatch,
    m_q: usize,
    n_q: usize,
    mode: NormalMode,
    patch_index: usize,
) -> Result<SurfaceRule> {
    let rule = if tp.is_trimmed() {
        surface_rule_indexed(tp, m_q, n_q, mode, patch_index)
    } else {
        untrimmed_rule_indexed(&tp.patch, m_q.max(n_q), mode, patch_index)
    };
    rule.map_err(|e| e.in_patch(patch_index))
}

/// Concatenated rule over all patches, ordered by patch.
pub fn surfaces_rule(
    patches: &[TrimmedPatch],
    m_q: usize,
    n_q: usize,
    mode: NormalMode,
) -> Result<SurfaceRule> {
    let mut all = SurfaceRule::default();
    for (i, tp) in patches.iter().enumerate() {
        all.append(patch_rule(tp, m_q, n_q, mode, i)?);
    }
    Ok(all)
}

/// `∫ f dS` over the union of the patches.
pub fn surface_integrate(
    patches: &[TrimmedPatch],
    f: impl FnMut(f64, f64, f64) -> f64,
    m_q: usize,
    n_q: usize,
) -> Result<f64> {
    if patches.is_empty() {
        return Ok(0.0);
    }
    surfaces_rule(patches, m_q, n_q, NormalMode::Full)?.integrate(f)
}
