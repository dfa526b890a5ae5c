use std::f64::consts::PI;

use greenquad::bezier::{bernstein_to_monomial, monomial_to_bernstein, ControlNet};
use greenquad::expr::{parse, BinOp, Expr, Func, Var};
use greenquad::moments::{geometric_moments_2d, monomial_exponents};
use greenquad::planar::{region_constant_c, spectral_pe_rule, spectral_rule};
use greenquad::quad1d::{
    gauss_legendre, partial_fraction_moment, rational_rule, weight_poly_roots, GaussLegendre, Pole,
    PoleSet,
};
use greenquad::shapes::{annulus, bulged_polygon, capped_cylinder, cube, rectangle};
use greenquad::surface::{
    parametric_area_rule, surface_rule, surfaces_rule, untrimmed_rule, NormalMode, TrimmedPatch,
};
use greenquad::trim_fit::fit_trim_curves;
use greenquad::volume::{volume_rule, volume_rule_with_constant};
use greenquad::{Point2, Point3, RationalBezierCurve, RationalBezierPatch};
use num_complex::Complex64;
use proptest::prelude::*;

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(48)
}

fn curve_strategy(max_degree: usize) -> impl Strategy<Value = RationalBezierCurve> {
    (1..=max_degree).prop_flat_map(|m| {
        (
            prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64), m + 1),
            prop::collection::vec(0.5..2.0f64, m + 1),
        )
            .prop_map(|(pts, w)| {
                RationalBezierCurve::new(
                    pts.into_iter().map(|(x, y)| Point2::new(x, y)).collect(),
                    w,
                )
                .unwrap()
            })
    })
}

fn cross(o: Point2, a: Point2, b: Point2) -> f64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

/// Counter-clockwise hull by the monotone chain.
fn hull(points: &[Point2]) -> Vec<Point2> {
    let mut p = points.to_vec();
    p.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    let mut lower: Vec<Point2> = Vec::new();
    for &q in &p {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], q) <= 0.0 {
            lower.pop();
        }
        lower.push(q);
    }
    let mut upper: Vec<Point2> = Vec::new();
    for &q in p.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], q) <= 0.0 {
            upper.pop();
        }
        upper.push(q);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn in_hull(h: &[Point2], q: Point2, tol: f64) -> bool {
    match h.len() {
        0 => false,
        1 => h[0].distance(q) <= tol,
        2 => {
            let d = h[1] - h[0];
            let t = ((q - h[0]).x * d.x + (q - h[0]).y * d.y) / (d.x * d.x + d.y * d.y);
            (h[0] + d * t.clamp(0.0, 1.0)).distance(q) <= tol
        }
        n => (0..n).all(|i| {
            let (a, b) = (h[i], h[(i + 1) % n]);
            cross(a, b, q) >= -tol * a.distance(b)
        }),
    }
}

fn bernstein_at(w: &[f64], z: Complex64) -> Complex64 {
    let m = w.len() - 1;
    let one = Complex64::new(1.0, 0.0);
    let mut binom = 1.0;
    let mut sum = Complex64::new(0.0, 0.0);
    for (j, &wj) in w.iter().enumerate() {
        sum += (one - z).powi((m - j) as i32) * z.powi(j as i32) * (wj * binom);
        binom = binom * (m - j) as f64 / (j + 1) as f64;
    }
    sum
}

fn region_strategy() -> impl Strategy<Value = greenquad::PlanarRegion> {
    (3usize..=6).prop_flat_map(|n| {
        (
            prop::collection::vec((0.1..0.9f64, 0.5..1.0f64), n),
            prop::collection::vec(-0.15..0.25f64, n),
            prop::collection::vec(0.6..1.8f64, n),
            (-3.0..3.0f64, -3.0..3.0f64),
        )
            .prop_map(move |(polar, bulge, weights, (cx, cy))| {
                let vertices: Vec<Point2> = polar
                    .iter()
                    .enumerate()
                    .map(|(i, &(jitter, r))| {
                        let t = 2.0 * PI * (i as f64 + jitter) / n as f64;
                        Point2::new(cx + r * t.cos(), cy + r * t.sin())
                    })
                    .collect();
                bulged_polygon(&vertices, &bulge, &weights).unwrap()
            })
    })
}

fn pole_set_strategy() -> impl Strategy<Value = PoleSet> {
    let real = (prop_oneof![-1.5..-0.1f64, 1.1..2.5f64], 1usize..=3).prop_map(|(re, m)| {
        vec![Pole {
            location: Complex64::new(re, 0.0),
            multiplicity: m,
        }]
    });
    let pair = (-0.5..1.5f64, 0.1..1.5f64, 1usize..=2).prop_map(|(re, im, m)| {
        let z = Complex64::new(re, im);
        vec![
            Pole {
                location: z,
                multiplicity: m,
            },
            Pole {
                location: z.conj(),
                multiplicity: m,
            },
        ]
    });
    prop::collection::vec(prop_oneof![real, pair], 1..=3).prop_map(|groups| {
        let mut poles: Vec<Pole> = Vec::new();
        for p in groups.into_iter().flatten() {
            if poles.iter().map(|q| q.multiplicity).sum::<usize>() + p.multiplicity <= 12
                && !poles
                    .iter()
                    .any(|q| (q.location - p.location).norm() < 1e-3)
            {
                poles.push(p);
            }
        }
        // a pair may have lost its partner to the budget
        let kept: Vec<Pole> = poles
            .iter()
            .copied()
            .filter(|p| {
                p.location.im == 0.0 || poles.iter().any(|q| q.location == p.location.conj())
            })
            .collect();
        PoleSet::new(kept).unwrap()
    })
}

fn bicubic_strategy() -> impl Strategy<Value = RationalBezierPatch> {
    (
        prop::collection::vec((-0.08..0.08f64, -0.08..0.08f64, -0.3..0.3f64), 16),
        prop::collection::vec(0.5..2.0f64, 16),
    )
        .prop_map(|(jitter, w)| {
            let points = (0..4)
                .map(|i| {
                    (0..4)
                        .map(|j| {
                            let (dx, dy, z) = jitter[4 * i + j];
                            Point3::new(i as f64 / 3.0 + dx, j as f64 / 3.0 + dy, z)
                        })
                        .collect()
                })
                .collect();
            let weights = (0..4).map(|i| w[4 * i..4 * i + 4].to_vec()).collect();
            RationalBezierPatch::new(points, weights).unwrap()
        })
}

fn expr_strategy() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (0.0..100.0f64).prop_map(Expr::Num),
        prop_oneof![Just(Var::X), Just(Var::Y), Just(Var::Z)].prop_map(Expr::Var),
    ];
    leaf.prop_recursive(4, 32, 2, |inner| {
        let op = prop_oneof![
            Just(BinOp::Add),
            Just(BinOp::Sub),
            Just(BinOp::Mul),
            Just(BinOp::Div)
        ];
        let func = prop_oneof![
            Just(Func::Sqrt),
            Just(Func::Exp),
            Just(Func::Sin),
            Just(Func::Cos),
            Just(Func::Log)
        ];
        prop_oneof![
            inner.clone().prop_map(|a| Expr::Neg(Box::new(a))),
            (op, inner.clone(), inner.clone()).prop_map(|(o, a, b)| Expr::Binary(
                o,
                Box::new(a),
                Box::new(b)
            )),
            (inner.clone(), 0u32..5).prop_map(|(a, n)| Expr::Pow(Box::new(a), n)),
            (func, inner).prop_map(|(f, a)| Expr::Call(f, Box::new(a))),
        ]
    })
}

fn polynomial_strategy() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (0.0..10.0f64).prop_map(Expr::Num),
        prop_oneof![Just(Var::X), Just(Var::Y), Just(Var::Z)].prop_map(Expr::Var),
    ];
    leaf.prop_recursive(3, 16, 2, |inner| {
        let op = prop_oneof![Just(BinOp::Add), Just(BinOp::Sub), Just(BinOp::Mul)];
        prop_oneof![
            (op, inner.clone(), inner.clone()).prop_map(|(o, a, b)| Expr::Binary(
                o,
                Box::new(a),
                Box::new(b)
            )),
            (inner, 0u32..4).prop_map(|(a, n)| Expr::Pow(Box::new(a), n)),
        ]
    })
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn curve_points_stay_in_control_hull(c in curve_strategy(6), s in 0.0..=1.0f64) {
        let p = c.eval(s).unwrap();
        let h = hull(c.points());
        let scale = c.control_bbox().diagonal().max(1.0);
        prop_assert!(in_hull(&h, p, 1e-12 * scale), "{p:?} outside {h:?}");
    }

    #[test]
    fn weight_scaling_leaves_curves_and_patches_unchanged(
        c in curve_strategy(5),
        patch in bicubic_strategy(),
        lambda in 0.01..100.0f64,
        s in 0.0..=1.0f64,
        t in 0.0..=1.0f64,
    ) {
        let scaled = RationalBezierCurve::new(c.points().to_vec(), c.weights().iter().map(|w| w * lambda).collect()).unwrap();
        prop_assert!(c.eval(s).unwrap().distance(scaled.eval(s).unwrap()) <= 1e-14 * 4.0);
        let sp = RationalBezierPatch::new(
            patch.points().to_vec(),
            patch.weights().iter().map(|r| r.iter().map(|w| w * lambda).collect()).collect(),
        ).unwrap();
        let d = patch.eval(s, t).unwrap() - sp.eval(s, t).unwrap();
        prop_assert!(d.norm() <= 1e-14 * 2.0);
    }

    #[test]
    fn curve_derivative_matches_differences(c in curve_strategy(5), s in 0.01..0.99f64) {
        let h = 1e-6;
        let fd = (c.eval(s + h).unwrap() - c.eval(s - h).unwrap()) * (0.5 / h);
        let d = c.derivative(s).unwrap();
        prop_assert!((fd - d).norm() <= 1e-6 * d.norm().max(1.0), "{fd:?} vs {d:?}");
    }

    #[test]
    fn basis_conversion_round_trips(coeffs in prop::collection::vec(-5.0..5.0f64, 1..=9)) {
        let back = monomial_to_bernstein(&bernstein_to_monomial(&coeffs).unwrap()).unwrap();
        for (a, b) in coeffs.iter().zip(&back) {
            prop_assert!((a - b).abs() <= 1e-10);
        }
    }

    #[test]
    fn gauss_integrates_monomials(n in 1usize..=40) {
        let rule = gauss_legendre(n, 0.0, 1.0).unwrap();
        for k in 0..2 * n {
            let got = rule.integrate(|s| s.powi(k as i32));
            prop_assert!((got - 1.0 / (k + 1) as f64).abs() <= 1e-14, "n {n} k {k}: {got}");
        }
    }

    #[test]
    fn weight_roots_are_roots_off_the_interval(w in prop::collection::vec(0.1..10.0f64, 2..=7)) {
        let roots = weight_poly_roots(&w).unwrap();
        let m = w.len() - 1;
        let mut binom = vec![1.0; m + 1];
        for j in 1..=m {
            binom[j] = binom[j - 1] * (m - j + 1) as f64 / j as f64;
        }
        let largest = w.iter().zip(&binom).map(|(a, b)| a * b).fold(0.0, f64::max);
        for r in roots {
            // far from the origin the terms of w grow like |z|^m, and so does
            // the rounding in any evaluation of w
            let scale = largest * r.norm().max(1.0).powi(m as i32);
            prop_assert!(bernstein_at(&w, r).norm() <= 1e-8 * scale, "{r}: {}", bernstein_at(&w, r));
            prop_assert!(!(r.im.abs() < 1e-12 && (0.0..=1.0).contains(&r.re)));
        }
    }

    #[test]
    fn rational_rule_is_exact(poles in pole_set_strategy(), extra in 0usize..=4) {
        let rule = rational_rule(&poles, extra).unwrap();
        prop_assert_eq!(rule.len(), poles.total_multiplicity() + extra + 1);
        prop_assert!((rule.weights.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        for p in poles.poles() {
            for j in 1..=p.multiplicity {
                let got = rule.integrate_complex(|s| (Complex64::new(s, 0.0) - p.location).powi(-(j as i32)));
                let want = partial_fraction_moment(p.location, j).unwrap();
                prop_assert!((got - want).norm() <= 1e-11 * want.norm(), "{:?} j {j}", p);
            }
        }
        for i in 0..=extra {
            prop_assert!((rule.integrate(|s| s.powi(i as i32)) - 1.0 / (i + 1) as f64).abs() <= 1e-12);
        }
    }

    #[test]
    fn rule_points_stay_in_control_box(region in region_strategy(), k in 0usize..=4) {
        let b = region.control_bbox();
        let bb = b.inflate(1e-12 * b.diagonal().max(1.0));
        for rule in [spectral_pe_rule(&region, k).unwrap(), spectral_rule(&region, 6, 5).unwrap()] {
            for p in &rule.points {
                prop_assert!(bb.contains([p.x, p.y]), "{p:?}");
            }
        }
    }

    #[test]
    fn weights_factor_into_provenance(region in region_strategy(), q in 1usize..=8, p in 1usize..=6) {
        let rule = spectral_rule(&region, q, p).unwrap();
        let inter = gauss_legendre(q, 0.0, 1.0).unwrap();
        let anti = GaussLegendre::new(p).unwrap();
        let c = region_constant_c(&region);
        let curves: Vec<&RationalBezierCurve> = region.curves().collect();
        for (w, o) in rule.weights.iter().zip(&rule.provenance) {
            let (pt, d) = curves[o.curve].eval_with_derivative(inter.nodes[o.q]);
            let (_, gz) = anti.mapped(c, pt.y).nth(o.zeta).unwrap();
            let want = -(inter.weights[o.q] * gz * d.x);
            prop_assert!((w - want).abs() <= 1e-15 * want.abs(), "{w} vs {want}");
        }
    }

    #[test]
    fn pe_rule_is_exact_on_random_regions(region in region_strategy(), k in 1usize..=3) {
        let pe = spectral_pe_rule(&region, k).unwrap();
        let reference = spectral_rule(&region, 40, 40).unwrap();
        // monomials in coordinates centred on the region so that none of them
        // cancels to nearly nothing
        let b = region.control_bbox();
        let (cx, cy) = (b.min[0] - 1.0, b.min[1] - 1.0);
        for e in monomial_exponents(2, k as u32) {
            let f = |x: f64, y: f64| (x - cx).powi(e[0] as i32) * (y - cy).powi(e[1] as i32);
            let want = reference.integrate(f).unwrap();
            let got = pe.integrate(f).unwrap();
            prop_assert!((got - want).abs() <= 1e-9 * want.abs(), "{e:?}: {got} vs {want}");
        }
    }

    #[test]
    fn annulus_area(outer in 0.5..3.0f64, frac in 0.05..0.95f64, cx in -2.0..2.0f64, cy in -2.0..2.0f64) {
        let inner = outer * frac;
        let a = spectral_pe_rule(&annulus(Point2::new(cx, cy), outer, inner), 0).unwrap().integrate(|_, _| 1.0).unwrap();
        prop_assert!((a - PI * (outer * outer - inner * inner)).abs() <= 1e-10);
    }

    #[test]
    fn translating_a_region_translates_its_rule(region in region_strategy(), a in -5.0..5.0f64, b in -5.0..5.0f64) {
        let r0 = spectral_rule(&region, 5, 4).unwrap();
        let r1 = spectral_rule(&region.translated(a, b), 5, 4).unwrap();
        prop_assert_eq!(r0.len(), r1.len());
        for i in 0..r0.len() {
            let moved = r0.points[i] + Point2::new(a, b);
            prop_assert!(moved.distance(r1.points[i]) <= 1e-13 * (1.0 + moved.norm()));
            prop_assert!((r0.weights[i] - r1.weights[i]).abs() <= 1e-13 * r0.weights[i].abs().max(1.0));
        }
    }

    #[test]
    fn untrimmed_rules_agree(patch in bicubic_strategy(), n in 4usize..=10) {
        let f = |x: f64, y: f64, z: f64| (0.5 * x).exp() * y.cos() + z * z;
        let tensor = untrimmed_rule(&patch, n, NormalMode::Full).unwrap();
        let green = surface_rule(&TrimmedPatch::untrimmed(patch), n, n, NormalMode::Full).unwrap();
        prop_assert_eq!(tensor.len(), n * n);
        prop_assert_eq!(green.len(), 4 * n * n);
        let (a, b) = (tensor.integrate(f).unwrap(), green.integrate(f).unwrap());
        prop_assert!((a - b).abs() <= 1e-12, "{a} vs {b}");
    }

    #[test]
    fn trim_and_complement_cover_the_square(a in 0.1..0.9f64, b in 0.1..0.9f64, bend in -0.3..0.3f64) {
        let p = |x, y| Point2::new(x, y);
        let cut = RationalBezierCurve::polynomial(vec![p(1.0, b), p(0.6, b + bend), p(0.3, a - bend), p(0.0, a)]).unwrap();
        let line = RationalBezierCurve::line;
        let below = vec![line(p(0.0, 0.0), p(1.0, 0.0)), line(p(1.0, 0.0), p(1.0, b)), cut.clone(), line(p(0.0, a), p(0.0, 0.0))];
        let above = vec![cut.reversed(), line(p(1.0, b), p(1.0, 1.0)), line(p(1.0, 1.0), p(0.0, 1.0)), line(p(0.0, 1.0), p(0.0, a))];
        let area = |l: Vec<RationalBezierCurve>| parametric_area_rule(&[l], 4, 4).unwrap().integrate(|_, _| 1.0).unwrap();
        prop_assert!((area(below) + area(above) - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn trimmed_surface_rules_stay_in_parameter_square(patch in bicubic_strategy(), r in 0.1..0.45f64, m in 2usize..=8) {
        let trim = greenquad::shapes::circle(Point2::new(0.5, 0.5), r).loops()[0].clone();
        let tp = TrimmedPatch::new(patch, vec![trim.clone()]).unwrap();
        let full = surface_rule(&tp, m, m, NormalMode::Full).unwrap();
        let param = parametric_area_rule(&[trim], m, m).unwrap();
        prop_assert_eq!(full.len(), param.len());
        for i in 0..full.len() {
            let uv = full.params[i];
            prop_assert!((0.0..=1.0).contains(&uv.x) && (0.0..=1.0).contains(&uv.y));
            prop_assert!(full.weights[i] * param.weights[i] >= 0.0);
            let n = tp.patch().normal(uv.x, uv.y).unwrap().norm();
            prop_assert!((full.weights[i] - param.weights[i] * n).abs() <= 1e-13 * (param.weights[i].abs() * n).max(1e-300));
        }
    }

    #[test]
    fn lower_limit_shift_keeps_volume_integrals(shift in 0.1..3.0f64, dx in -1.0..1.0f64, dz in -1.0..1.0f64) {
        let solid = capped_cylinder(1.0, 1.5).translated(Point3::new(dx, 0.0, dz));
        let f = |x: f64, y: f64, z: f64| (0.3 * z).exp() * x.cos() + y * y;
        let base = volume_rule(&solid, 14, 14, 14).unwrap();
        let pz = base.points.iter().map(|p| p.z).fold(f64::INFINITY, f64::min).min(dz);
        let moved = volume_rule_with_constant(&solid, 14, 14, 14, pz - shift).unwrap();
        prop_assert!((base.integrate(f).unwrap() - moved.integrate(f).unwrap()).abs() <= 1e-10);
    }

    #[test]
    fn volume_matches_z_flux(side in 0.2..3.0f64, ox in -2.0..2.0f64, oz in -2.0..2.0f64) {
        for solid in [cube(Point3::new(ox, 0.0, oz), side), capped_cylinder(side, side).translated(Point3::new(ox, 0.0, oz))] {
            let v = volume_rule(&solid, 12, 12, 12).unwrap().integrate(|_, _, _| 1.0).unwrap();
            let flux = surfaces_rule(&solid.patches, 12, 12, NormalMode::Z).unwrap().integrate(|_, _, z| z).unwrap();
            prop_assert!((v - flux).abs() <= 1e-10 * v.abs().max(1.0), "{v} vs {flux}");
        }
    }

    #[test]
    fn z_translation_shifts_volume_points(c in -5.0..5.0f64) {
        let solid = capped_cylinder(1.0, 1.0);
        let r0 = volume_rule(&solid, 5, 5, 4).unwrap();
        let r1 = volume_rule(&solid.translated(Point3::new(0.0, 0.0, c)), 5, 5, 4).unwrap();
        prop_assert_eq!(r0.len(), r1.len());
        let b = solid.control_bbox().inflate(1e-12);
        for i in 0..r0.len() {
            let p = r0.points[i];
            prop_assert!(b.contains([p.x, p.y, p.z]));
            let q = r1.points[i];
            prop_assert!((q.z - p.z - c).abs() <= 1e-13 * (1.0 + c.abs()) && q.x == p.x && q.y == p.y);
            prop_assert!((r0.weights[i] - r1.weights[i]).abs() <= 1e-13 * r0.weights[i].abs().max(1.0));
        }
    }

    #[test]
    fn fitted_curves_interpolate(segments in 1usize..=6, degree in 1usize..=4, phase in 0.0..PI, span in 0.5..2.5f64) {
        let n = segments * degree + 1;
        let points: Vec<Point2> = (0..n)
            .map(|i| {
                let t = phase + span * i as f64 / (n - 1) as f64;
                Point2::new(t.cos() + 0.1 * t, t.sin())
            })
            .collect();
        let curves = fit_trim_curves(&points, segments, degree).unwrap();
        prop_assert_eq!(curves.len(), segments);
        for (j, c) in curves.iter().enumerate() {
            let local = &points[j * degree..=(j + 1) * degree];
            let mut chord = vec![0.0];
            for w in local.windows(2) {
                chord.push(chord.last().unwrap() + w[0].distance(w[1]));
            }
            let total = *chord.last().unwrap();
            for (p, s) in local.iter().zip(&chord) {
                prop_assert!(c.eval(s / total).unwrap().distance(*p) <= 1e-12, "segment {j}");
            }
        }
    }

    #[test]
    fn rectangle_moments_match_closed_form(x0 in -2.0..2.0f64, y0 in -2.0..2.0f64, w in 0.1..2.0f64, h in 0.1..2.0f64) {
        let m = geometric_moments_2d(&rectangle(Point2::new(x0, y0), Point2::new(x0 + w, y0 + h)), 4).unwrap();
        let line = |a: f64, b: f64, k: u32| (b.powi(k as i32 + 1) - a.powi(k as i32 + 1)) / (k + 1) as f64;
        for (e, v) in m.exponents.iter().zip(&m.values) {
            let want = line(x0, x0 + w, e[0]) * line(y0, y0 + h, e[1]);
            prop_assert!((v - want).abs() <= 1e-10 * want.abs().max(1.0));
        }
    }

    #[test]
    fn printed_expressions_reparse(e in expr_strategy()) {
        prop_assert_eq!(parse(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn degrees_add_under_products(a in polynomial_strategy(), b in polynomial_strategy()) {
        let (da, db) = (a.polynomial_degree().unwrap(), b.polynomial_degree().unwrap());
        let product = Expr::Binary(BinOp::Mul, Box::new(a), Box::new(b));
        prop_assert_eq!(product.polynomial_degree(), Some(da + db));
    }
}
