//! Geometric moments and moment-fitted weights.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::planar::{spectral_pe_rule, PlanarRegion};
use crate::volume::{volume_rule, SolidModel};

/// Relative change allowed when 3D moment orders are doubled.
pub const MOMENT_3D_TOL: f64 = 1e-11;

/// Order doubling for 3D moments stops here.
pub const MOMENT_3D_MAX_ORDER: usize = 128;

/// Least-squares fits fail above this residual relative to the moments.
pub const FIT_RESIDUAL_LIMIT: f64 = 1e-8;

/// Exponents of all monomials of total degree `≤ p` in `dim` variables,
/// graded by degree and, within a degree, lexicographically with higher `x`
/// powers first: `1, x, y, x², xy, y², …`.
pub fn monomial_exponents(dim: usize, p: u32) -> Vec<[u32; 3]> {
    let mut out = Vec::new();
    for d in 0..=p {
        match dim {
            2 => out.extend((0..=d).rev().map(|a| [a, d - a, 0])),
            3 => {
                for a in (0..=d).rev() {
                    for b in (0..=d - a).rev() {
                        out.push([a, b, d - a - b]);
                    }
                }
            }
            _ => panic!("moments are defined in two or three dimensions"),
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentVector {
    pub dim: usize,
    pub max_degree: u32,
    pub exponents: Vec<[u32; 3]>,
    pub values: Vec<f64>,
}

impl MomentVector {
    pub fn new(dim: usize, max_degree: u32, values: Vec<f64>) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return Err(Error::InvalidArgument(format!(
                "moment dimension must be 2 or 3, not {dim}"
            )));
        }
        let exponents = monomial_exponents(dim, max_degree);
        if exponents.len() != values.len() {
            return Err(Error::InvalidArgument(format!(
                "{} moments given, degree {max_degree} in {dim}D has {}",
                values.len(),
                exponents.len()
            )));
        }
        Ok(MomentVector {
            dim,
            max_degree,
            exponents,
            values,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Moment of `x^a y^b z^c`, if it is in the vector.
    pub fn get(&self, e: [u32; 3]) -> Option<f64> {
        self.exponents
            .iter()
            .position(|&x| x == e)
            .map(|i| self.values[i])
    }
}

/// Values of every monomial in `exponents` at `p`, from shared power tables.
fn monomials_at(
    p: [f64; 3],
    degree: u32,
    exponents: &[[u32; 3]],
    out: &mut [f64],
    powers: &mut [Vec<f64>; 3],
) {
    for (k, table) in powers.iter_mut().enumerate() {
        table.clear();
        let mut acc = 1.0;
        for _ in 0..=degree {
            table.push(acc);
            acc *= p[k];
        }
    }
    for (o, e) in out.iter_mut().zip(exponents) {
        *o = powers[0][e[0] as usize] * powers[1][e[1] as usize] * powers[2][e[2] as usize];
    }
}

fn weighted_moments(
    points: impl Iterator<Item = [f64; 3]>,
    weights: &[f64],
    exponents: &[[u32; 3]],
    degree: u32,
) -> Vec<f64> {
    let mut sums = vec![0.0; exponents.len()];
    let mut row = vec![0.0; exponents.len()];
    let mut powers = [Vec::new(), Vec::new(), Vec::new()];
    for (p, &w) in points.zip(weights) {
        monomials_at(p, degree, exponents, &mut row, &mut powers);
        for (s, r) in sums.iter_mut().zip(&row) {
            *s += w * r;
        }
    }
    sums
}

/// `∫ x^a y^b dA` for `a + b ≤ p`, from the degree-`p` SpectralPE rule.
pub fn geometric_moments_2d(region: &PlanarRegion, p: u32) -> Result<MomentVector> {
    let rule = spectral_pe_rule(region, p as usize)?;
    let exponents = monomial_exponents(2, p);
    let values = weighted_moments(
        rule.points.iter().map(|q| [q.x, q.y, 0.0]),
        &rule.weights,
        &exponents,
        p,
    );
    MomentVector::new(2, p, values)
}

/// `∫ x^a y^b z^c dV` for `a + b + c ≤ p`. Orders start at `⌈(p+1)/2⌉ + 4`
/// and double until the moments settle to [`MOMENT_3D_TOL`].
pub fn geometric_moments_3d(solid: &SolidModel, p: u32) -> Result<MomentVector> {
    let exponents = monomial_exponents(3, p);
    let at_order = |n: usize| -> Result<Vec<f64>> {
        let rule = volume_rule(solid, n, n, n)?;
        Ok(weighted_moments(
            rule.points.iter().map(|q| [q.x, q.y, q.z]),
            &rule.weights,
            &exponents,
            p,
        ))
    };
    let mut order = (p as usize + 2) / 2 + 4;
    let mut coarse = at_order(order)?;
    loop {
        let fine = at_order(2 * order)?;
        let scale = fine
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()))
            .max(f64::MIN_POSITIVE);
        let change = coarse
            .iter()
            .zip(&fine)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
            / scale;
        if change < MOMENT_3D_TOL {
            return MomentVector::new(3, p, fine);
        }
        if 2 * order >= MOMENT_3D_MAX_ORDER {
            return Err(Error::NotConverged { change, order });
        }
        order *= 2;
        coarse = fine;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentFit {
    pub weights: Vec<f64>,
    /// `‖V w − m‖₂`.
    pub residual: f64,
}

/// Minimum-norm least-squares weights at `points` that reproduce `moments`.
/// Points are `[x, y, z]`; `z` is ignored for 2D moments.
pub fn moment_fit_weights(points: &[[f64; 3]], moments: &MomentVector) -> Result<MomentFit> {
    if points.is_empty() {
        return Err(Error::InvalidArgument(
            "moment fitting needs at least one point".into(),
        ));
    }
    if let Some(i) = points.iter().position(|p| p.iter().any(|c| !c.is_finite())) {
        return Err(Error::InvalidArgument(format!(
            "fitting point {i} is not finite"
        )));
    }
    let rows = moments.len();
    let cols = points.len();
    let mut v = DMatrix::<f64>::zeros(rows, cols);
    let mut col = vec![0.0; rows];
    let mut powers = [Vec::new(), Vec::new(), Vec::new()];
    for (j, p) in points.iter().enumerate() {
        monomials_at(
            *p,
            moments.max_degree,
            &moments.exponents,
            &mut col,
            &mut powers,
        );
        for (i, &c) in col.iter().enumerate() {
            v[(i, j)] = c;
        }
    }
    let b = DVector::from_column_slice(&moments.values);
    let svd = v.clone().svd(true, true);
    let cutoff = svd.singular_values.max() * rows.max(cols) as f64 * f64::EPSILON;
    let w = svd
        .solve(&b, cutoff)
        .map_err(|msg| Error::InvalidArgument(msg.to_string()))?;
    let residual = (&v * &w - &b).norm();
    let limit = FIT_RESIDUAL_LIMIT * b.norm();
    if residual > limit {
        return Err(Error::Residual { residual, limit });
    }
    Ok(MomentFit {
        weights: w.iter().copied().collect(),
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bezier::Point2;
    use crate::shapes::{unit_circle, unit_cube, unit_square};
    use std::f64::consts::PI;

    #[test]
    fn exponent_order() {
        assert_eq!(
            monomial_exponents(2, 2),
            vec![
                [0, 0, 0],
                [1, 0, 0],
                [0, 1, 0],
                [2, 0, 0],
                [1, 1, 0],
                [0, 2, 0]
            ]
        );
        assert_eq!(
            monomial_exponents(3, 1),
            vec![[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]]
        );
        assert_eq!(monomial_exponents(3, 4).len(), 35);
    }

    #[test]
    fn circle_and_square_moments() {
        let m = geometric_moments_2d(&unit_circle(), 2).unwrap();
        let want = [PI, 0.0, 0.0, PI / 4.0, 0.0, PI / 4.0];
        for (g, w) in m.values.iter().zip(want) {
            assert!((g - w).abs() < 1e-10, "{g} vs {w}");
        }
        let m = geometric_moments_2d(&unit_square(), 1).unwrap();
        for (g, w) in m.values.iter().zip([1.0, 0.5, 0.5]) {
            assert!((g - w).abs() < 1e-14);
        }
    }

    #[test]
    fn reflection_negates_odd_moments() {
        let r = unit_square().translated(0.3, 0.1);
        let mirrored = r.map_points(|p| Point2::new(-p.x, p.y)).unwrap().reversed();
        let a = geometric_moments_2d(&r, 3).unwrap();
        let b = geometric_moments_2d(&mirrored, 3).unwrap();
        for ((e, x), y) in a.exponents.iter().zip(&a.values).zip(&b.values) {
            let sign = if e[0] % 2 == 1 { -1.0 } else { 1.0 };
            assert!((x * sign - y).abs() < 1e-13);
        }
    }

    #[test]
    fn cube_moments() {
        let m = geometric_moments_3d(&unit_cube(), 2).unwrap();
        for (e, v) in m.exponents.iter().zip(&m.values) {
            let want: f64 = e.iter().map(|&k| 1.0 / (k + 1) as f64).product();
            assert!((v - want).abs() < 1e-12);
        }
    }

    #[test]
    fn fit_examples() {
        let g = 0.5 / 3f64.sqrt();
        let pts = [
            [0.5 - g, 0.5 - g, 0.0],
            [0.5 + g, 0.5 - g, 0.0],
            [0.5 - g, 0.5 + g, 0.0],
            [0.5 + g, 0.5 + g, 0.0],
        ];
        let m = MomentVector::new(2, 1, vec![1.0, 0.5, 0.5]).unwrap();
        let fit = moment_fit_weights(&pts, &m).unwrap();
        for w in &fit.weights {
            assert!((w - 0.25).abs() < 1e-14);
        }
        assert!(fit.residual <= 1e-13);

        let m = MomentVector::new(2, 0, vec![2.5]).unwrap();
        let fit = moment_fit_weights(&[[0.3, 0.1, 0.0]], &m).unwrap();
        assert!((fit.weights[0] - 2.5).abs() < 1e-15);

        let m = geometric_moments_2d(&unit_square(), 4).unwrap();
        let fit = moment_fit_weights(&pts, &m);
        // 2x2 Gauss is exact only through degree 3 per variable
        assert!(matches!(fit, Err(Error::Residual { .. })));
    }

    #[test]
    fn fitted_rule_reproduces_xy() {
        let m = geometric_moments_2d(&unit_square(), 2).unwrap();
        let pts: Vec<[f64; 3]> = (0..5)
            .flat_map(|i| {
                (0..5).map(move |j| [(i as f64 + 0.5) / 5.0, (j as f64 + 0.5) / 5.0, 0.0])
            })
            .collect();
        let fit = moment_fit_weights(&pts, &m).unwrap();
        let xy: f64 = pts
            .iter()
            .zip(&fit.weights)
            .map(|(p, w)| w * p[0] * p[1])
            .sum();
        assert!((xy - 0.25).abs() < 1e-12);
    }
}
