//! One-dimensional rules: Gauss–Legendre, weight-polynomial poles, and rules
//! that are exact for rational functions with prescribed poles on `[0, 1]`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::bezier::bernstein_to_monomial;
use crate::error::{Error, Result};

/// Poles closer than this to `[0, 1]` are rejected.
pub const POLE_CUTOFF: f64 = 1e-8;

/// Largest acceptable condition estimate of a collocation system.
pub const MAX_CONDITION: f64 = 1e13;

#[derive(Debug, Clone, PartialEq)]
pub struct Rule1D {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub interval: (f64, f64),
}

impl Rule1D {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    pub fn integrate_complex(&self, f: impl Fn(f64) -> Complex64) -> Complex64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| f(x) * w)
            .sum()
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, reusable on any interval.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

impl GaussLegendre {
    /// Golub–Welsch eigenvalues of the Jacobi matrix, then Newton polishing.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "Gauss rule needs at least one node".into(),
            ));
        }
        let mut jacobi = DMatrix::<f64>::zeros(n, n);
        for k in 1..n {
            let kf = k as f64;
            let beta = kf / (4.0 * kf * kf - 1.0).sqrt();
            jacobi[(k, k - 1)] = beta;
            jacobi[(k - 1, k)] = beta;
        }
        let mut nodes: Vec<f64> = SymmetricEigen::new(jacobi)
            .eigenvalues
            .iter()
            .copied()
            .collect();
        nodes.sort_by(f64::total_cmp);

        let mut weights = vec![0.0; n];
        for (x, w) in nodes.iter_mut().zip(weights.iter_mut()) {
            for _ in 0..3 {
                let (p, dp) = legendre(n, *x);
                let step = p / dp;
                *x -= step;
                if step.abs() < 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre(n, *x);
            *w = 2.0 / ((1.0 - *x * *x) * dp * dp);
        }
        // enforce the exact symmetry of the rule
        for i in 0..n / 2 {
            let j = n - 1 - i;
            let x = 0.5 * (nodes[j] - nodes[i]);
            let w = 0.5 * (weights[i] + weights[j]);
            nodes[i] = -x;
            nodes[j] = x;
            weights[i] = w;
            weights[j] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Ok(GaussLegendre { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped affinely onto `[lo, hi]`. `hi < lo` yields
    /// negated weights and `hi == lo` zero weights.
    pub fn mapped(&self, lo: f64, hi: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn rule(&self, lo: f64, hi: f64) -> Rule1D {
        let (nodes, weights) = self.mapped(lo, hi).unzip();
        Rule1D {
            nodes,
            weights,
            interval: (lo, hi),
        }
    }
}

/// `n`-point Gauss–Legendre rule on `[lo, hi]`. A reversed interval is the
/// signed convention (weights negated); an empty one is rejected.
pub fn gauss_legendre(n: usize, lo: f64, hi: f64) -> Result<Rule1D> {
    if !(lo.is_finite() && hi.is_finite()) || lo == hi {
        return Err(Error::InvalidArgument(format!(
            "degenerate integration interval [{lo}, {hi}]"
        )));
    }
    Ok(GaussLegendre::new(n)?.rule(lo, hi))
}

/// A pole location with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pole {
    pub location: Complex64,
    pub multiplicity: usize,
}

/// Distance from `p` to the segment `[0, 1]` of the real axis.
pub fn distance_to_unit_interval(p: Complex64) -> f64 {
    let nearest = p.re.clamp(0.0, 1.0);
    (p - nearest).norm()
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PoleSet {
    poles: Vec<Pole>,
    conjugate_closed: bool,
}

impl PoleSet {
    pub fn empty() -> Self {
        PoleSet {
            poles: Vec::new(),
            conjugate_closed: true,
        }
    }

    pub fn new(poles: Vec<Pole>) -> Result<Self> {
        for p in &poles {
            if !(p.location.re.is_finite() && p.location.im.is_finite()) {
                return Err(Error::InvalidArgument("pole location is not finite".into()));
            }
            if p.multiplicity == 0 {
                return Err(Error::InvalidArgument(
                    "pole multiplicity must be positive".into(),
                ));
            }
        }
        let conjugate_closed = poles.iter().all(|p| {
            let z = p.location;
            let tol = 1e-12 * (1.0 + z.norm());
            z.im.abs() <= tol
                || poles.iter().any(|q| {
                    (q.location - z.conj()).norm() <= tol && q.multiplicity == p.multiplicity
                })
        });
        Ok(PoleSet {
            poles,
            conjugate_closed,
        })
    }

    /// Each root becomes a pole of multiplicity one; exact repeats merge.
    pub fn from_roots(roots: &[Complex64]) -> Result<Self> {
        let mut poles: Vec<Pole> = Vec::new();
        for &r in roots {
            match poles.iter_mut().find(|p| p.location == r) {
                Some(p) => p.multiplicity += 1,
                None => poles.push(Pole {
                    location: r,
                    multiplicity: 1,
                }),
            }
        }
        Self::new(poles)
    }

    pub fn poles(&self) -> &[Pole] {
        &self.poles
    }

    pub fn is_conjugate_closed(&self) -> bool {
        self.conjugate_closed
    }

    pub fn total_multiplicity(&self) -> usize {
        self.poles.iter().map(|p| p.multiplicity).sum()
    }

    /// Every multiplicity multiplied by `factor`.
    pub fn scaled(&self, factor: usize) -> Self {
        PoleSet {
            poles: self
                .poles
                .iter()
                .map(|p| Pole {
                    location: p.location,
                    multiplicity: p.multiplicity * factor,
                })
                .collect(),
            conjugate_closed: self.conjugate_closed,
        }
    }

    /// Smallest distance from any pole to `[0, 1]`.
    pub fn min_distance(&self) -> f64 {
        self.poles
            .iter()
            .map(|p| distance_to_unit_interval(p.location))
            .fold(f64::INFINITY, f64::min)
    }
}

fn horner(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &a in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

/// Complex roots of the Bernstein-form polynomial `Σ w_j B_j^m(s)`, from the
/// eigenvalues of the monomial companion matrix. Nonreal roots come out in
/// exactly conjugate pairs, sorted by real then imaginary part.
pub fn weight_poly_roots(weights: &[f64]) -> Result<Vec<Complex64>> {
    if weights.is_empty() {
        return Err(Error::InvalidArgument("empty weight list".into()));
    }
    let mut a = bernstein_to_monomial(weights)?;
    let scale = a.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    if scale == 0.0 {
        return Err(Error::InvalidArgument(
            "weight polynomial is identically zero".into(),
        ));
    }
    while a.len() > 1 && a.last().unwrap().abs() <= 1e-14 * scale {
        a.pop();
    }
    let d = a.len() - 1;
    if d == 0 {
        return Ok(Vec::new());
    }
    let lead = a[d];
    let mut companion = DMatrix::<f64>::zeros(d, d);
    for i in 1..d {
        companion[(i, i - 1)] = 1.0;
    }
    for i in 0..d {
        companion[(i, d - 1)] = -a[i] / lead;
    }
    let mut roots: Vec<Complex64> = companion
        .complex_eigenvalues()
        .iter()
        .map(|z| Complex64::new(z.re, z.im))
        .collect();

    for z in roots.iter_mut() {
        for _ in 0..4 {
            let (p, dp) = horner(&a, *z);
            if dp.norm() == 0.0 {
                break;
            }
            let next = *z - p / dp;
            if horner(&a, next).0.norm() < p.norm() {
                *z = next;
            } else {
                break;
            }
        }
    }
    Ok(pair_conjugates(roots))
}

fn pair_conjugates(mut roots: Vec<Complex64>) -> Vec<Complex64> {
    for z in roots.iter_mut() {
        if z.im.abs() <= 1e-12 * (1.0 + z.norm()) {
            z.im = 0.0;
        }
    }
    let mut upper: Vec<Complex64> = roots.iter().copied().filter(|z| z.im > 0.0).collect();
    let mut lower: Vec<Complex64> = roots.iter().copied().filter(|z| z.im < 0.0).collect();
    let mut out: Vec<Complex64> = roots.iter().copied().filter(|z| z.im == 0.0).collect();
    upper.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    for z in upper {
        let best = lower
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| (**a - z.conj()).norm().total_cmp(&(**b - z.conj()).norm()))
            .map(|(i, _)| i);
        match best {
            Some(i) => {
                let w = lower.swap_remove(i);
                let avg = Complex64::new(0.5 * (z.re + w.re), 0.5 * (z.im - w.im));
                out.push(avg);
                out.push(avg.conj());
            }
            None => out.push(z),
        }
    }
    out.extend(lower);
    out.sort_by(|a, b| a.re.total_cmp(&b.re).then(b.im.total_cmp(&a.im)));
    out
}

/// Exact `∫₀¹ (s − p)^(−j) ds`.
pub fn partial_fraction_moment(p: Complex64, j: usize) -> Result<Complex64> {
    if j == 0 {
        return Err(Error::InvalidArgument(
            "partial fraction order must be positive".into(),
        ));
    }
    if distance_to_unit_interval(p) == 0.0 {
        return Err(Error::PoleTooClose {
            re: p.re,
            im: p.im,
            distance: 0.0,
        });
    }
    let one = Complex64::new(1.0, 0.0);
    if j == 1 {
        Ok(((one - p) / (-p)).ln())
    } else {
        let e = 1.0 - j as f64;
        Ok(((one - p).powf(e) - (-p).powf(e)) / e)
    }
}

/// `∏ (|½ − p| / |s − p|)^μ`: the reciprocal of the pole polynomial,
/// normalised to one at `s = ½`. Positive on `[0, 1]` for conjugate-closed sets.
fn pole_weight(poles: &PoleSet, s: f64) -> f64 {
    poles
        .poles()
        .iter()
        .map(|p| {
            let ratio = (Complex64::new(0.5, 0.0) - p.location).norm()
                / (Complex64::new(s, 0.0) - p.location).norm();
            ratio.powi(p.multiplicity as i32)
        })
        .product()
}

fn chebyshev_all(x: f64, out: &mut [f64]) {
    let n = out.len();
    if n == 0 {
        return;
    }
    out[0] = 1.0;
    if n > 1 {
        out[1] = x;
    }
    for i in 2..n {
        out[i] = 2.0 * x * out[i - 1] - out[i - 2];
    }
}

/// Discrete version of the measure `ω(s) ds` on `[0, 1]`: composite Gauss
/// pieces, bisected until every `ω`-weighted Chebyshev moment below degree
/// `degree` stops changing.
fn discretize_weight(poles: &PoleSet, degree: usize) -> (Vec<f64>, Vec<f64>) {
    let gauss = GaussLegendre::new(degree / 2 + 20).expect("nonzero order");
    let mut cheb = vec![0.0; degree];
    let piece = |a: f64, b: f64, cheb: &mut Vec<f64>| {
        let mut xs = Vec::with_capacity(gauss.len());
        let mut ws = Vec::with_capacity(gauss.len());
        let mut acc = vec![0.0; cheb.len()];
        for (s, w) in gauss.mapped(a, b) {
            let wt = w * pole_weight(poles, s);
            chebyshev_all(2.0 * s - 1.0, cheb);
            for (m, t) in acc.iter_mut().zip(cheb.iter()) {
                *m += wt * t;
            }
            xs.push(s);
            ws.push(wt);
        }
        let mass = ws.iter().sum::<f64>();
        (xs, ws, acc, mass)
    };

    let (_, _, whole, scale) = piece(0.0, 1.0, &mut cheb);
    let mut xs = Vec::new();
    let mut ws = Vec::new();
    let mut stack = vec![(0.0, 1.0, whole, 0u32)];
    while let Some((a, b, est, depth)) = stack.pop() {
        let mid = 0.5 * (a + b);
        let (lx, lw, left, lm) = piece(a, mid, &mut cheb);
        let (rx, rw, right, rm) = piece(mid, b, &mut cheb);
        let err = est
            .iter()
            .zip(left.iter().zip(&right))
            .map(|(e, (l, r))| (e - l - r).abs())
            .fold(0.0, f64::max);
        if err <= 2e-16 * scale + 1e-14 * (lm + rm) || depth >= 60 {
            xs.extend(lx);
            xs.extend(rx);
            ws.extend(lw);
            ws.extend(rw);
        } else {
            stack.push((a, mid, left, depth + 1));
            stack.push((mid, b, right, depth + 1));
        }
    }
    (xs, ws)
}

/// Recurrence coefficients `(α, β, μ₀)` of the polynomials orthonormal for
/// the discrete measure, by Lanczos with full reorthogonalisation.
fn lanczos(xs: &[f64], ws: &[f64], n: usize) -> Result<(Vec<f64>, Vec<f64>, f64)> {
    let mu0: f64 = ws.iter().sum();
    let norm0 = mu0.sqrt();
    let mut basis: Vec<Vec<f64>> = vec![ws.iter().map(|w| w.sqrt() / norm0).collect()];
    let mut alpha = Vec::with_capacity(n);
    let mut beta = Vec::with_capacity(n.saturating_sub(1));
    for k in 0..n {
        let q = &basis[k];
        let mut v: Vec<f64> = xs.iter().zip(q).map(|(x, q)| x * q).collect();
        if k > 0 {
            let prev = &basis[k - 1];
            for (vi, pi) in v.iter_mut().zip(prev) {
                *vi -= beta[k - 1] * pi;
            }
        }
        let a: f64 = v.iter().zip(q).map(|(v, q)| v * q).sum();
        alpha.push(a);
        if k + 1 == n {
            break;
        }
        for (vi, qi) in v.iter_mut().zip(q) {
            *vi -= a * qi;
        }
        for _ in 0..2 {
            for b in &basis {
                let c: f64 = v.iter().zip(b).map(|(v, b)| v * b).sum();
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= c * bi;
                }
            }
        }
        let b = v.iter().map(|v| v * v).sum::<f64>().sqrt();
        if b.is_nan() || b <= 1e-13 {
            return Err(Error::IllConditioned {
                condition: 1.0 / b.max(f64::MIN_POSITIVE),
            });
        }
        beta.push(b);
        basis.push(v.into_iter().map(|v| v / b).collect());
    }
    Ok((alpha, beta, mu0))
}

/// Rule on `[0, 1]` with `N = Σμ + l + 1` nodes that is exact for every
/// partial fraction `(s − p)^(−j)`, `j ≤ μ_p`, and every polynomial of degree
/// `≤ l`.
///
/// That space equals `{ q / D : deg q ≤ N − 1 }` with `D = ∏ (s − p)^μ`. The
/// rule is the `N`-point Gauss rule for the weight `1/|D|` (exact up to
/// degree `2N − 1`), with the weights divided back by `1/|D|` at the nodes.
/// Its nodes cluster towards nearby poles and its weighted form is positive,
/// which keeps the rule accurate when poles approach the interval.
pub fn rational_rule(poles: &PoleSet, extra_poly_degree: usize) -> Result<Rule1D> {
    if !poles.is_conjugate_closed() {
        return Err(Error::InvalidArgument(
            "pole set is not closed under conjugation".into(),
        ));
    }
    for p in poles.poles() {
        let d = distance_to_unit_interval(p.location);
        if d <= POLE_CUTOFF {
            return Err(Error::PoleTooClose {
                re: p.location.re,
                im: p.location.im,
                distance: d,
            });
        }
    }
    let n = poles.total_multiplicity() + extra_poly_degree + 1;
    if poles.poles().is_empty() {
        return gauss_legendre(n, 0.0, 1.0);
    }

    let (xs, ws) = discretize_weight(poles, 2 * n);
    let (alpha, beta, mu0) = lanczos(&xs, &ws, n)?;
    let jacobi = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            alpha[i]
        } else if i == j + 1 {
            beta[j]
        } else if j == i + 1 {
            beta[i]
        } else {
            0.0
        }
    });
    let mut nodes: Vec<f64> = SymmetricEigen::new(jacobi)
        .eigenvalues
        .iter()
        .copied()
        .collect();
    nodes.sort_by(f64::total_cmp);
    if nodes.windows(2).any(|w| w[0] >= w[1]) || nodes.iter().any(|&s| !(s > 0.0 && s < 1.0)) {
        return Err(Error::IllConditioned {
            condition: f64::INFINITY,
        });
    }

    // Christoffel numbers from the orthonormal recurrence keep full relative
    // accuracy where the weight is tiny, unlike eigenvector components.
    let weights = nodes
        .iter()
        .map(|&s| {
            let mut prev = 0.0;
            let mut cur = 1.0 / mu0.sqrt();
            let mut sum = cur * cur;
            for k in 0..n - 1 {
                let back = if k > 0 { beta[k - 1] * prev } else { 0.0 };
                let next = ((s - alpha[k]) * cur - back) / beta[k];
                prev = cur;
                cur = next;
                sum += cur * cur;
            }
            1.0 / (sum * pole_weight(poles, s))
        })
        .collect();
    Ok(Rule1D {
        nodes,
        weights,
        interval: (0.0, 1.0),
    })
}
