//! Volume rules for solids bounded by closed sets of outward patches.
//!
//! With `F(x, y, z) = ∫_{P_z}^z f(x, y, t) dt`, the divergence theorem gives
//! `∫_V f dV = ∮ F n_z dS`. The surface rule supplies the `n_z`-weighted
//! points and a Gauss rule on `[P_z, z]` supplies `F`.

use crate::bezier::{BoundingBox3, ControlNet, Point3};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::planar::weighted_sum;
use crate::quad1d::GaussLegendre;
use crate::surface::{patch_rule, NormalMode, TrimmedPatch};

/// Patches with outward normals. `closed` is the provider's word that the
/// patches bound a volume; it is not checked geometrically.
#[derive(Debug, Clone, PartialEq)]
pub struct SolidModel {
    pub patches: Vec<TrimmedPatch>,
    pub closed: bool,
}

impl SolidModel {
    pub fn new(patches: Vec<TrimmedPatch>, closed: bool) -> Self {
        SolidModel { patches, closed }
    }

    /// Same solid with every normal reversed.
    pub fn flipped(&self) -> Self {
        SolidModel {
            patches: self.patches.iter().map(TrimmedPatch::flipped).collect(),
            closed: self.closed,
        }
    }

    pub fn map_points(&self, f: impl Fn(Point3) -> Point3) -> Result<Self> {
        let patches = self
            .patches
            .iter()
            .map(|p| p.map_points(&f))
            .collect::<Result<Vec<_>>>()?;
        Ok(SolidModel {
            patches,
            closed: self.closed,
        })
    }

    pub fn translated(&self, d: Point3) -> Self {
        self.map_points(|p| p + d)
            .expect("translation keeps a valid solid valid")
    }
}

impl ControlNet<3> for SolidModel {
    fn control_bbox(&self) -> BoundingBox3 {
        self.patches.iter().fold(BoundingBox3::empty(), |b, p| {
            b.union(&p.patch().control_bbox())
        })
    }
}

/// Lowest control-point `z`: the lower limit of the `z` antiderivative.
pub fn solid_constant_pz(solid: &SolidModel) -> f64 {
    solid.control_bbox().min[2]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Provenance3D {
    pub patch: usize,
    /// Surface node index within the patch.
    pub sigma: usize,
    /// Antiderivative node index.
    pub psi: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Rule3D {
    pub points: Vec<Point3>,
    pub weights: Vec<f64>,
    pub provenance: Vec<Provenance3D>,
}

impl Rule3D {
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
}

/// Volume rule with `m_q`, `n_q` nodes for each patch's parametric rule and
/// `n_p` nodes along `z`.
pub fn volume_rule(solid: &SolidModel, m_q: usize, n_q: usize, n_p: usize) -> Result<Rule3D> {
    volume_rule_with_constant(solid, m_q, n_q, n_p, solid_constant_pz(solid))
}

/// [`volume_rule`] with an explicit lower limit for the `z` antiderivative.
pub fn volume_rule_with_constant(
    solid: &SolidModel,
    m_q: usize,
    n_q: usize,
    n_p: usize,
    pz: f64,
) -> Result<Rule3D> {
    if !solid.closed {
        return Err(Error::NotClosed);
    }
    if n_p == 0 {
        return Err(Error::InvalidArgument("n_p must be positive".into()));
    }
    let anti = GaussLegendre::new(n_p)?;
    let mut rule = Rule3D::default();
    for (i, tp) in solid.patches.iter().enumerate() {
        let surf = patch_rule(tp, m_q, n_q, NormalMode::Z, i)?;
        for (sigma, (p, &w)) in surf.points.iter().zip(&surf.weights).enumerate() {
            for (psi, (z, wz)) in anti.mapped(pz, p.z).enumerate() {
                rule.points.push(Point3::new(p.x, p.y, z));
                rule.weights.push(w * wz);
                rule.provenance.push(Provenance3D {
                    patch: i,
                    sigma,
                    psi,
                });
            }
        }
    }
    Ok(rule)
}

/// `∫_V f dV`.
pub fn volume_integrate(
    solid: &SolidModel,
    f: impl FnMut(f64, f64, f64) -> f64,
    m_q: usize,
    n_q: usize,
    n_p: usize,
) -> Result<f64> {
    volume_rule(solid, m_q, n_q, n_p)?.integrate(f)
}
