//! Explicit equilateral sets: the `ℓ1`-sum with a line, the canonical
//! `ℓ∞^d` simplex, the two extensions of the `ℓp` unit basis, the five-point
//! set for `p` near 1, and the two-Hadamard-simplex construction together
//! with its parameter solver and the table of bounds it yields.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::hadamard::{construct_hadamard, is_reachable_order, to_simplex, HadamardMethod};
use crate::scalar_solve::{planar_pair_range, solve_basis_extension_roots, solve_planar_pair};
use crate::space::{pow_abs, root, Exponent, SpaceSpec, Vector};

/// `log₂ x`.
fn log2(x: f64) -> f64 {
    libm::log2(x)
}

/// Upper end `log(5/2)/log 2` of the five-point regime.
pub fn five_point_limit() -> f64 {
    log2(2.5)
}

/// Upper end `log(23/6)/log 2` of the tabulated range.
pub fn table_limit() -> f64 {
    log2(23.0 / 6.0)
}

/// Points together with the space they live in and their common distance.
#[derive(Debug, Clone, PartialEq)]
pub struct Construction {
    pub space: SpaceSpec,
    pub points: Vec<Vector>,
    pub common_distance: f64,
    pub notes: Vec<String>,
}

/// `{(o, 1), (o, −1), (u, 0), (−u, 0)}` in `inner ⊕₁ ℝ`: a 2-equilateral set
/// that is maximal when `u` is a smooth point of the unit sphere of `inner`.
/// Smoothness is not checked.
pub fn construct_petty(inner: &SpaceSpec, u: &Vector) -> Result<Construction> {
    inner.validate()?;
    let n = inner.total_dim();
    if n < 2 {
        return Err(Error::InvalidArgument("inner space must have dimension at least 2".into()));
    }
    let norm = inner.norm(u)?;
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidArgument(format!("‖u‖ = {norm}, expected a unit vector")));
    }
    let lift = |x: &[f64], t: f64| {
        let mut c = x.to_vec();
        c.push(t);
        Vector::from_raw(c)
    };
    let o = vec![0.0; n];
    let minus_u: Vec<f64> = u.iter().map(|x| -x).collect();
    Ok(Construction {
        space: SpaceSpec::sum(1.0, vec![inner.clone(), SpaceSpec::lp(1.0, 1)]),
        points: vec![lift(&o, 1.0), lift(&o, -1.0), lift(u, 0.0), lift(&minus_u, 0.0)],
        common_distance: 2.0,
        notes: Vec::new(),
    })
}

/// A unit vector known to be a smooth point of the unit sphere of `spec`:
/// `e₁` for `ℓp`, `1 < p ≤ ∞`; `(1/d, …, 1/d)` for `ℓ1^d`; for an `ℓq`-sum
/// with `q > 1`, a smooth point of the first summand padded with zeros.
/// `None` for `ℓ1`-sums, where no padded point is smooth.
pub fn smooth_unit_vector(spec: &SpaceSpec) -> Option<Vector> {
    match spec {
        SpaceSpec::Leaf { p: Exponent::Finite(p), d } if *p == 1.0 => {
            Some(Vector::from_raw(vec![1.0 / *d as f64; *d]))
        }
        SpaceSpec::Leaf { d, .. } => {
            let mut c = vec![0.0; *d];
            c[0] = 1.0;
            Some(Vector::from_raw(c))
        }
        SpaceSpec::Sum { q, summands } if *q > 1.0 => {
            smooth_unit_vector(summands.first()?).map(|u| u.padded(spec.total_dim()))
        }
        SpaceSpec::Sum { .. } => None,
    }
}

/// `pᵢ⁽ⁿ⁾ = −1` if `n = i`, `0` if `n > i`, `1` if `n < i`, for `i ∈ [d+1]`:
/// a 2-equilateral set of `ℓ∞^d` on the unit sphere.
pub fn construct_linf_canonical(d: usize) -> Result<Vec<Vector>> {
    if d == 0 {
        return Err(Error::InvalidArgument("dimension must be at least 1".into()));
    }
    Ok((0..=d)
        .map(|i| {
            Vector::from_raw(
                (0..d)
                    .map(|n| match n.cmp(&i) {
                        core::cmp::Ordering::Equal => -1.0,
                        core::cmp::Ordering::Greater => 0.0,
                        core::cmp::Ordering::Less => 1.0,
                    })
                    .collect(),
            )
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtensionSign {
    /// Add `λ·j`.
    Plus,
    /// Add `−μ·j`.
    Minus,
}

/// The unit basis of `ℓp^d` together with one of its two equidistant
/// diagonal points; `2^{1/p}`-equilateral.
pub fn construct_lp_basis_extension(p: f64, d: usize, sign: ExtensionSign) -> Result<Vec<Vector>> {
    let roots = solve_basis_extension_roots(p, d)?;
    let mut points: Vec<Vector> = (0..d)
        .map(|i| {
            let mut c = vec![0.0; d];
            c[i] = 1.0;
            Vector::from_raw(c)
        })
        .collect();
    let x = match sign {
        ExtensionSign::Plus => roots.lambda,
        ExtensionSign::Minus => -roots.mu,
    };
    points.push(Vector::from_raw(vec![x; d]));
    Ok(points)
}

/// The five-point set `(±1, ±1, ±1, 0)` (even number of minus signs) plus
/// `(0, 0, 0, λ)`, `λ = (2^{p+1} − 3)^{1/p}`, zero-padded to dimension `d`.
#[derive(Debug, Clone, PartialEq)]
pub struct FivePointSet {
    pub p: f64,
    pub points: Vec<Vector>,
    /// The fourth coordinate `λ` of the apex.
    pub lambda_coord: f64,
    /// `2^{1+1/p}`.
    pub common_distance: f64,
    /// At `p = log(5/2)/log 2` the set has exactly one extension, `(0,0,0,−λ)`.
    pub extendable_once: bool,
}

pub fn construct_prop17(p: f64, d: usize) -> Result<FivePointSet> {
    let limit = five_point_limit();
    if !(p >= 1.0 && p <= limit + 1e-12) {
        return Err(Error::InvalidArgument(format!("p = {p} outside [1, log(5/2)/log 2 = {limit}]")));
    }
    if d < 4 {
        return Err(Error::InvalidArgument(format!("dimension d = {d} must be at least 4")));
    }
    let lambda = root(libm::exp2(p + 1.0) - 3.0, p);
    let rows: [[f64; 4]; 5] = [
        [1.0, 1.0, 1.0, 0.0],
        [1.0, -1.0, -1.0, 0.0],
        [-1.0, 1.0, -1.0, 0.0],
        [-1.0, -1.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, lambda],
    ];
    let points = rows.iter().map(|r| Vector::from_raw(r.to_vec()).padded(d)).collect();
    Ok(FivePointSet {
        p,
        points,
        lambda_coord: lambda,
        common_distance: 2.0 * root(2.0, p),
        extendable_once: (p - limit).abs() <= 1e-12,
    })
}

impl FivePointSet {
    /// The unique extension point when [`Self::extendable_once`] holds.
    pub fn extension(&self) -> Option<Vector> {
        self.extendable_once.then(|| {
            let d = self.points[0].len();
            let mut c = vec![0.0; d];
            c[3] = -self.lambda_coord;
            Vector::from_raw(c)
        })
    }
}

/// Which of the Hadamard-order conditions hold for `(p, k₁, k₂)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrderConditions {
    /// `2 − 2^{p−1} < 1/k₁ + 1/k₂`
    pub c12_left: bool,
    /// `1/k₁ + 1/k₂ < 4 − 2^p`
    pub c12_right: bool,
    /// `(1−2^{−p})(2−2^{p−1}) < (1−2^{1−p})/k₁ + 1/k₂`
    pub c13: bool,
    /// `(1−2^{−p})(2−2^{p−1}) < 1/k₁ + (1−2^{1−p})/k₂`
    pub c14: bool,
}

impl OrderConditions {
    pub fn evaluate(p: f64, k1: usize, k2: usize) -> Self {
        let (r1, r2) = (1.0 / k1 as f64, 1.0 / k2 as f64);
        let s = r1 + r2;
        let t = 2.0 - libm::exp2(p - 1.0);
        let lhs = (1.0 - libm::exp2(-p)) * t;
        let c = 1.0 - libm::exp2(1.0 - p);
        OrderConditions {
            c12_left: t < s,
            c12_right: s < 4.0 - libm::exp2(p),
            c13: lhs < c * r1 + r2,
            c14: lhs < r1 + c * r2,
        }
    }

    pub fn c12(&self) -> bool {
        self.c12_left && self.c12_right
    }

    pub fn all(&self) -> bool {
        self.c12() && self.c13 && self.c14
    }

    fn failures(&self) -> String {
        let mut out = Vec::new();
        if !self.c12_left {
            out.push("2 − 2^{p−1} < 1/k1 + 1/k2");
        }
        if !self.c12_right {
            out.push("1/k1 + 1/k2 < 4 − 2^p");
        }
        if !self.c13 {
            out.push("(1−2^{−p})(2−2^{p−1}) < (1−2^{1−p})/k1 + 1/k2");
        }
        if !self.c14 {
            out.push("(1−2^{−p})(2−2^{p−1}) < 1/k1 + (1−2^{1−p})/k2");
        }
        out.join("; ")
    }
}

/// Solved parameters of the two-simplex construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prop20Params {
    pub p: f64,
    pub k1: usize,
    pub k2: usize,
    pub x1: f64,
    pub x2: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub lambda1: f64,
    pub lambda2: f64,
}

impl Prop20Params {
    /// `2^p(3 − 2^{p−1} − 1/k₁ − 1/k₂)`, the required value of `x₁ + x₂`.
    pub fn line_sum(p: f64, k1: usize, k2: usize) -> f64 {
        libm::exp2(p) * (3.0 - libm::exp2(p - 1.0) - 1.0 / k1 as f64 - 1.0 / k2 as f64)
    }

    /// Residuals of the three distance equations:
    /// `(2αᵢ)^p + (1−1/kᵢ)λᵢ^p = 2^{p−1}` and
    /// `α₁^p + α₂^p + 2 − (1/k₁+1/k₂) = 2^{p−1}`.
    pub fn equation_residuals(&self) -> [f64; 3] {
        let p = self.p;
        let half = libm::exp2(p - 1.0);
        let (r1, r2) = (1.0 / self.k1 as f64, 1.0 / self.k2 as f64);
        [
            pow_abs(2.0 * self.alpha1, p) + (1.0 - r1) * pow_abs(self.lambda1, p) - half,
            pow_abs(2.0 * self.alpha2, p) + (1.0 - r2) * pow_abs(self.lambda2, p) - half,
            pow_abs(self.alpha1, p) + pow_abs(self.alpha2, p) + 2.0 - (r1 + r2) - half,
        ]
    }

    /// The two candidate sphere radii `(αᵢ^p + 1)^{1/p}` about the origin.
    pub fn origin_radii(&self) -> (f64, f64) {
        (
            root(pow_abs(self.alpha1, self.p) + 1.0, self.p),
            root(pow_abs(self.alpha2, self.p) + 1.0, self.p),
        )
    }

    /// Ambient dimension `2(k₁ + k₂ − 1)`.
    pub fn dimension(&self) -> usize {
        2 * (self.k1 + self.k2 - 1)
    }

    /// Number of points `2(k₁ + k₂)`.
    pub fn size(&self) -> usize {
        2 * (self.k1 + self.k2)
    }
}

/// Chooses `(x₁, x₂)` on the line `x₁ + x₂ = 2^p(3 − 2^{p−1} − 1/k₁ − 1/k₂)`
/// inside the rectangle `2^{p−1}(1−1/kᵢ) ≤ xᵢ ≤ min(2^{p−1}, 2(1−1/kᵢ))`,
/// `xᵢ < 2^{p−1}`, `x₁ ≠ x₂`: the midpoint of the feasible segment, moved
/// by a quarter of its length when the midpoint has `x₁ = x₂`. A segment
/// that degenerates to the lower-left corner is accepted when `k₁ ≠ k₂`.
pub fn solve_prop20_params(p: f64, k1: usize, k2: usize) -> Result<Prop20Params> {
    if !(1.0..2.0).contains(&p) {
        return Err(Error::InvalidArgument(format!("p = {p} outside [1, 2)")));
    }
    for k in [k1, k2] {
        if k < 2 {
            return Err(Error::InvalidArgument(format!("Hadamard order {k} must be at least 2")));
        }
        if !is_reachable_order(k) {
            return Err(Error::UnreachableOrder(k));
        }
    }
    let conds = OrderConditions::evaluate(p, k1, k2);
    let half = libm::exp2(p - 1.0);
    let (w1, w2) = (1.0 - 1.0 / k1 as f64, 1.0 - 1.0 / k2 as f64);
    let s = Prop20Params::line_sum(p, k1, k2);
    let (a1, a2) = (half * w1, half * w2);
    let (b1, b2) = (half.min(2.0 * w1), half.min(2.0 * w2));
    let lo = a1.max(s - b2);
    let hi = b1.min(s - a2);
    let len = hi - lo;
    let eps = 1e-12;
    let infeasible = || {
        Error::Infeasible(format!(
            "p = {p}, (k1, k2) = ({k1}, {k2}): failed {}",
            if conds.all() { String::from("x1 ≠ x2 on the feasible segment") } else { conds.failures() }
        ))
    };
    let x1 = if len > eps {
        let mid = 0.5 * (lo + hi);
        if (2.0 * mid - s).abs() <= eps {
            mid + 0.25 * len
        } else {
            mid
        }
    } else if len >= -eps && (a1 - a2).abs() > eps && lo < half {
        // Degenerate: the line touches the rectangle only at its corner.
        a1
    } else {
        return Err(infeasible());
    };
    let x2 = s - x1;
    if !(x1 < half && x2 < half) || (x1 - x2).abs() <= eps {
        return Err(infeasible());
    }
    let lambda_of = |x: f64, w: f64| root((x / w).max(0.0), p);
    let alpha_of = |x: f64| root((half - x) / libm::exp2(p), p);
    let (range_lo, range_hi) = planar_pair_range(p);
    let clampl = |l: f64| l.clamp(range_lo, range_hi);
    let params = Prop20Params {
        p,
        k1,
        k2,
        x1,
        x2,
        alpha1: alpha_of(x1),
        alpha2: alpha_of(x2),
        lambda1: clampl(lambda_of(x1, w1)),
        lambda2: clampl(lambda_of(x2, w2)),
    };
    if params.equation_residuals().iter().any(|r| r.abs() > 1e-12) {
        return Err(Error::NoConvergence {
            iterations: 0,
            residual: params.equation_residuals().iter().fold(0.0, |m, r| m.max(r.abs())),
        });
    }
    Ok(params)
}

/// The `2(k₁+k₂)` points `(∓α₁, k₁^{−1/p} gᵢ⊗{u₁|v₁}, 0, o)` and
/// `(0, o, ∓α₂, k₂^{−1/p} hᵢ⊗{u₂|v₂})` in `ℓp^{2(k₁+k₂−1)}`, laid out as
/// `ℝ ⊕ ℓp^{2(k₁−1)} ⊕ ℝ ⊕ ℓp^{2(k₂−1)}`; `2^{1−1/p}`-equilateral.
pub fn construct_prop20(params: &Prop20Params) -> Result<Vec<Vector>> {
    let p = params.p;
    let dim = params.dimension();
    let offset2 = 1 + 2 * (params.k1 - 1);
    let mut points = Vec::with_capacity(params.size());
    let blocks = [
        (params.k1, params.alpha1, params.lambda1, 0usize),
        (params.k2, params.alpha2, params.lambda2, offset2),
    ];
    for (k, alpha, lambda, start) in blocks {
        let simplex = to_simplex(&construct_hadamard(k, HadamardMethod::Auto)?);
        let pair = solve_planar_pair(p, lambda)?;
        let scale = 1.0 / root(k as f64, p);
        for (sign, w) in [(-1.0, &pair.u), (1.0, &pair.v)] {
            for g in simplex.vertices() {
                let mut c = vec![0.0; dim];
                c[start] = sign * alpha;
                for (j, &gj) in g.iter().enumerate() {
                    c[start + 1 + 2 * j] = scale * f64::from(gj) * w[0];
                    c[start + 2 + 2 * j] = scale * f64::from(gj) * w[1];
                }
                points.push(Vector::from_raw(c));
            }
        }
    }
    Ok(points)
}

/// Builds the two-simplex construction end to end.
pub fn prop20_construction(p: f64, k1: usize, k2: usize) -> Result<(Prop20Params, Construction)> {
    let params = solve_prop20_params(p, k1, k2)?;
    let points = construct_prop20(&params)?;
    Ok((
        params,
        Construction {
            space: SpaceSpec::lp(p, params.dimension()),
            points,
            common_distance: libm::exp2(1.0 - 1.0 / p),
            notes: Vec::new(),
        },
    ))
}

/// One end of a table interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Endpoint {
    pub value: f64,
    pub inclusive: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// The five-point set.
    FivePoint,
    /// Two Hadamard simplices of orders `(k1, k2)`.
    TwoSimplex { k1: usize, k2: usize },
}

/// A row of the table of bounds `m(ℓp^d) ≤ C` for `d ≥ d₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableRow {
    pub lower: Endpoint,
    pub upper: Endpoint,
    pub regime: Regime,
    pub c: usize,
    pub d0: usize,
}

impl TableRow {
    pub fn contains(&self, p: f64) -> bool {
        let above = if self.lower.inclusive { p >= self.lower.value } else { p > self.lower.value };
        let below = if self.upper.inclusive { p <= self.upper.value } else { p < self.upper.value };
        above && below
    }
}

/// All rows, in increasing order of `p`.
pub fn table_rows() -> Vec<TableRow> {
    let e = |x: f64, inclusive: bool| Endpoint { value: log2(x), inclusive };
    let two = |k1, k2| Regime::TwoSimplex { k1, k2 };
    let row = |lower, upper, regime, c, d0| TableRow { lower, upper, regime, c, d0 };
    vec![
        row(Endpoint { value: 1.0, inclusive: true }, e(2.5, false), Regime::FivePoint, 5, 4),
        row(e(2.5, true), e(2.5, true), Regime::FivePoint, 6, 4),
        row(e(2.5, false), e(3.0, false), two(2, 2), 8, 6),
        row(e(3.0, true), e(3.25, true), two(2, 4), 12, 10),
        row(e(3.25, false), e(3.5, false), two(4, 4), 16, 14),
        row(e(3.5, true), e(29.0 / 8.0, true), two(4, 8), 24, 22),
        row(e(29.0 / 8.0, false), e(3.75, false), two(8, 8), 32, 30),
        row(e(3.75, true), e(91.0 / 24.0, true), two(8, 12), 40, 38),
        row(e(91.0 / 24.0, false), e(23.0 / 6.0, false), two(12, 12), 48, 46),
    ]
}

pub fn table_row(p: f64) -> Result<TableRow> {
    table_rows().into_iter().find(|r| r.contains(p)).ok_or_else(|| {
        Error::InvalidArgument(format!(
            "p = {p} outside the tabulated range [1, log(23/6)/log 2 = {})",
            table_limit()
        ))
    })
}

/// Smallest Hadamard order `k` with `k₁ = k₂ = k` satisfying all order
/// conditions at `p`, searching orders up to `max_order`.
pub fn equal_order_for(p: f64, max_order: usize) -> Option<usize> {
    (2..=max_order)
        .filter(|&k| is_reachable_order(k))
        .find(|&k| OrderConditions::evaluate(p, k, k).all())
}
