//! Mesh-free quadrature over regions bounded by rational Bézier curves,
//! trimmed rational Bézier patches and solids bounded by such patches.
//!
//! Area integrals become boundary integrals of a numeric antiderivative, and
//! volume integrals become surface integrals the same way, so no mesh of the
//! interior is ever built.
//!
//! ```
//! use greenquad::{spectral_pe_rule, shapes::unit_circle};
//!
//! let rule = spectral_pe_rule(&unit_circle(), 2).unwrap();
//! let second_moment = rule.integrate(|x, _| x * x).unwrap();
//! assert!((second_moment - std::f64::consts::PI / 4.0).abs() < 1e-12);
//! ```

pub mod bezier;
pub mod convergence;
pub mod error;
pub mod expr;
pub mod io;
pub mod moments;
pub mod planar;
pub mod quad1d;
pub mod shapes;
pub mod surface;
pub mod trim_fit;
pub mod volume;

pub use bezier::{
    BoundingBox, BoundingBox2, BoundingBox3, ControlNet, Point2, Point3, RationalBezierCurve,
    RationalBezierPatch,
};
pub use convergence::{convergence_study, ConvergenceRow};
pub use error::{Error, Result};
pub use expr::{parse as parse_expr, Expr};
pub use io::{Model, RuleFile};
pub use moments::{
    geometric_moments_2d, geometric_moments_3d, moment_fit_weights, MomentFit, MomentVector,
};
pub use planar::{
    integrate2d, spectral_pe_rule, spectral_rule, PlanarRegion, Provenance2D, Rule2D,
};
pub use quad1d::{
    gauss_legendre, partial_fraction_moment, rational_rule, weight_poly_roots, Pole, PoleSet,
    Rule1D,
};
pub use surface::{surface_integrate, surface_rule, NormalMode, SurfaceRule, TrimmedPatch};
pub use trim_fit::fit_trim_curves;
pub use volume::{volume_integrate, volume_rule, Provenance3D, Rule3D, SolidModel};
