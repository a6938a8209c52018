//! Norms of `ℓp^d` and of nested `ℓq`-direct sums, distances, and
//! equilateral certificates.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Deref;

use crate::error::{Error, Result};

/// A dense real coordinate vector; never empty, all entries finite.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector(Vec<f64>);

impl Vector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidArgument("vector must have at least one coordinate".into()));
        }
        if let Some(index) = coords.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Vector(coords))
    }

    /// The origin of `ℝ^n`, `n ≥ 1`.
    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1, "vector must have at least one coordinate");
        Vector(vec![0.0; n])
    }

    /// Builds a vector the caller knows to be finite and non-empty.
    pub(crate) fn from_raw(coords: Vec<f64>) -> Self {
        debug_assert!(!coords.is_empty() && coords.iter().all(|x| x.is_finite()));
        Vector(coords)
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn scaled(&self, t: f64) -> Vector {
        Vector(self.0.iter().map(|x| t * x).collect())
    }

    /// The vector extended with zeros to length `n` (no-op when already that long).
    pub fn padded(&self, n: usize) -> Vector {
        let mut c = self.0.clone();
        if c.len() < n {
            c.resize(n, 0.0);
        }
        Vector(c)
    }
}

impl Deref for Vector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// A norm exponent: finite `p ≥ 1` or `∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinite,
}

impl Exponent {
    pub fn from_f64(p: f64) -> Self {
        if p == f64::INFINITY {
            Exponent::Infinite
        } else {
            Exponent::Finite(p)
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Exponent::Finite(p) => p,
            Exponent::Infinite => f64::INFINITY,
        }
    }
}

/// A norm on `ℝ^n`: either `ℓp^d` or the `ℓq`-sum of other specs, in order.
#[derive(Debug, Clone, PartialEq)]
pub enum SpaceSpec {
    Leaf { p: Exponent, d: usize },
    Sum { q: f64, summands: Vec<SpaceSpec> },
}

impl SpaceSpec {
    /// `ℓp^d`; `p = f64::INFINITY` gives `ℓ∞^d`.
    pub fn lp(p: f64, d: usize) -> Self {
        SpaceSpec::Leaf { p: Exponent::from_f64(p), d }
    }

    pub fn linf(d: usize) -> Self {
        SpaceSpec::Leaf { p: Exponent::Infinite, d }
    }

    pub fn sum(q: f64, summands: Vec<SpaceSpec>) -> Self {
        SpaceSpec::Sum { q, summands }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SpaceSpec::Leaf { p, d } => {
                if *d == 0 {
                    return Err(Error::InvalidSpace("leaf dimension must be positive".into()));
                }
                if let Exponent::Finite(p) = p {
                    if !(p.is_finite() && *p >= 1.0) {
                        return Err(Error::InvalidSpace(format!("leaf exponent {p} is not in [1, ∞]")));
                    }
                }
                Ok(())
            }
            SpaceSpec::Sum { q, summands } => {
                if !(q.is_finite() && *q >= 1.0) {
                    return Err(Error::InvalidSpace(format!("sum exponent {q} is not in [1, ∞)")));
                }
                if summands.is_empty() {
                    return Err(Error::InvalidSpace("sum needs at least one summand".into()));
                }
                summands.iter().try_for_each(SpaceSpec::validate)
            }
        }
    }

    pub fn total_dim(&self) -> usize {
        match self {
            SpaceSpec::Leaf { d, .. } => *d,
            SpaceSpec::Sum { summands, .. } => summands.iter().map(SpaceSpec::total_dim).sum(),
        }
    }

    /// `Some(p)` when the spec is a single `ℓp` leaf.
    pub fn leaf_exponent(&self) -> Option<Exponent> {
        match self {
            SpaceSpec::Leaf { p, .. } => Some(*p),
            SpaceSpec::Sum { .. } => None,
        }
    }

    fn check_vector(&self, v: &[f64]) -> Result<()> {
        let n = self.total_dim();
        if v.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: v.len() });
        }
        if let Some(index) = v.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(())
    }

    pub fn norm(&self, v: &[f64]) -> Result<f64> {
        self.validate()?;
        self.check_vector(v)?;
        Ok(self.norm_unchecked(v))
    }

    pub fn distance(&self, a: &[f64], b: &[f64]) -> Result<f64> {
        self.validate()?;
        self.check_vector(a)?;
        self.check_vector(b)?;
        Ok(self.distance_unchecked(a, b))
    }

    pub(crate) fn norm_unchecked(&self, v: &[f64]) -> f64 {
        self.eval(&|i| v[i], 0)
    }

    pub(crate) fn distance_unchecked(&self, a: &[f64], b: &[f64]) -> f64 {
        self.eval(&|i| a[i] - b[i], 0)
    }

    fn eval<F: Fn(usize) -> f64>(&self, at: &F, offset: usize) -> f64 {
        match self {
            SpaceSpec::Leaf { p, d } => lp_norm((offset..offset + d).map(at), *p),
            SpaceSpec::Sum { q, summands } => {
                let mut parts = Vec::with_capacity(summands.len());
                let mut start = offset;
                for s in summands {
                    parts.push(s.eval(at, start));
                    start += s.total_dim();
                }
                // A one-summand sum is the summand itself, bit for bit.
                if parts.len() == 1 {
                    parts[0]
                } else {
                    lp_norm(parts.into_iter(), Exponent::Finite(*q))
                }
            }
        }
    }
}

/// `|x|^p`, with exact branches for `p ∈ {1, 2}`.
pub fn pow_abs(x: f64, p: f64) -> f64 {
    let a = x.abs();
    if a == 0.0 {
        0.0
    } else if p == 1.0 {
        a
    } else if p == 2.0 {
        a * a
    } else {
        libm::exp(p * libm::log(a))
    }
}

/// `x^(1/p)` for `x ≥ 0`.
pub fn root(x: f64, p: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else if p == 1.0 {
        x
    } else if p == 2.0 {
        libm::sqrt(x)
    } else {
        libm::exp(libm::log(x) / p)
    }
}

fn lp_norm<I>(it: I, p: Exponent) -> f64
where
    I: Iterator<Item = f64> + Clone,
{
    match p {
        Exponent::Infinite => it.fold(0.0, |m, x| m.max(x.abs())),
        Exponent::Finite(p) if p == 1.0 => it.map(f64::abs).sum(),
        Exponent::Finite(p) if p == 2.0 => libm::sqrt(it.map(|x| x * x).sum()),
        Exponent::Finite(p) => {
            // Rescale by the largest entry so exp/ln stay in range.
            let m = it.clone().fold(0.0, |m: f64, x| m.max(x.abs()));
            if m == 0.0 {
                return 0.0;
            }
            let s: f64 = it.map(|x| pow_abs(x / m, p)).sum();
            m * root(s, p)
        }
    }
}

pub fn norm(spec: &SpaceSpec, v: &Vector) -> Result<f64> {
    spec.norm(v)
}

/// Symmetric matrix of `‖pᵢ − pⱼ‖` with a zero diagonal.
pub fn pairwise_distances(spec: &SpaceSpec, points: &[Vector]) -> Result<Vec<Vec<f64>>> {
    spec.validate()?;
    for p in points {
        spec.check_vector(p)?;
    }
    let k = points.len();
    let mut m = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in i + 1..k {
            let dij = spec.distance_unchecked(&points[i], &points[j]);
            m[i][j] = dij;
            m[j][i] = dij;
        }
    }
    Ok(m)
}

/// A point set together with its measured common distance.
#[derive(Debug, Clone, PartialEq)]
pub struct EquilateralCertificate {
    pub points: Vec<Vector>,
    pub lambda: f64,
    pub max_deviation: f64,
    pub tolerance: f64,
    /// Free-form remarks attached by constructions (e.g. a known extension).
    pub notes: Vec<String>,
}

impl EquilateralCertificate {
    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }
}

/// Certifies that `points` is equilateral: `lambda` is the mean off-diagonal
/// distance and every distance is within `tolerance` of it.
pub fn check_equilateral(
    spec: &SpaceSpec,
    points: &[Vector],
    tolerance: f64,
) -> Result<EquilateralCertificate> {
    if points.len() < 2 {
        return Err(Error::InvalidArgument("need at least two points".into()));
    }
    if !(tolerance > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance {tolerance} must be positive")));
    }
    let dist = pairwise_distances(spec, points)?;
    let k = points.len();
    let mut sum = 0.0;
    for i in 0..k {
        for j in i + 1..k {
            if dist[i][j] == 0.0 {
                return Err(Error::Degenerate { first: i, second: j });
            }
            sum += dist[i][j];
        }
    }
    let lambda = sum / (k * (k - 1) / 2) as f64;
    let max_deviation = (0..k)
        .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
        .map(|(i, j)| (dist[i][j] - lambda).abs())
        .fold(0.0, f64::max);
    if max_deviation > tolerance {
        return Err(Error::NotEquilateral { lambda, max_deviation, tolerance });
    }
    Ok(EquilateralCertificate {
        points: points.to_vec(),
        lambda,
        max_deviation,
        tolerance,
        notes: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[f64]) -> Vector {
        Vector::new(c.to_vec()).unwrap()
    }

    #[test]
    fn leaf_norms() {
        assert_eq!(SpaceSpec::lp(2.0, 3).norm(&[1.0, 1.0, 1.0]).unwrap(), 3f64.sqrt());
        assert_eq!(SpaceSpec::linf(2).norm(&[-1.0, 0.5]).unwrap(), 1.0);
        assert_eq!(SpaceSpec::lp(1.0, 3).norm(&[1.0, -2.0, 0.5]).unwrap(), 3.5);
        let n = SpaceSpec::lp(3.0, 2).norm(&[1.0, 1.0]).unwrap();
        assert!((n - 2f64.powf(1.0 / 3.0)).abs() < 1e-15);
    }

    #[test]
    fn sum_norm() {
        let spec = SpaceSpec::sum(1.0, vec![SpaceSpec::lp(2.0, 2), SpaceSpec::lp(1.0, 1)]);
        assert_eq!(spec.norm(&[1.0, 0.0, 1.0]).unwrap(), 2.0);
        let spec = SpaceSpec::sum(2.0, vec![SpaceSpec::lp(1.0, 2), SpaceSpec::linf(2)]);
        assert_eq!(spec.norm(&[3.0, 1.0, -3.0, 2.0]).unwrap(), 5.0);
    }

    #[test]
    fn norm_errors() {
        let spec = SpaceSpec::lp(2.0, 3);
        assert_eq!(spec.norm(&[1.0, 2.0]), Err(Error::DimensionMismatch { expected: 3, found: 2 }));
        assert_eq!(spec.norm(&[1.0, f64::NAN, 0.0]), Err(Error::NonFinite { index: 1 }));
        assert!(matches!(SpaceSpec::lp(0.5, 2).norm(&[1.0, 1.0]), Err(Error::InvalidSpace(_))));
        assert!(matches!(SpaceSpec::sum(f64::INFINITY, vec![SpaceSpec::lp(2.0, 1)]).validate(), Err(Error::InvalidSpace(_))));
        assert!(matches!(SpaceSpec::sum(1.0, vec![]).validate(), Err(Error::InvalidSpace(_))));
        assert!(Vector::new(vec![]).is_err());
    }

    #[test]
    fn pairwise_examples() {
        let m = pairwise_distances(&SpaceSpec::linf(2), &[v(&[0.0, 0.0]), v(&[1.0, 1.0])]).unwrap();
        assert_eq!(m, vec![vec![0.0, 1.0], vec![1.0, 0.0]]);

        let pts = [
            v(&[1.0, 1.0, 1.0]),
            v(&[1.0, -1.0, -1.0]),
            v(&[-1.0, 1.0, -1.0]),
            v(&[-1.0, -1.0, 1.0]),
        ];
        let m = pairwise_distances(&SpaceSpec::lp(1.0, 3), &pts).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(m[i][j], if i == j { 0.0 } else { 4.0 });
            }
        }

        let basis = [v(&[1.0, 0.0, 0.0]), v(&[0.0, 1.0, 0.0]), v(&[0.0, 0.0, 1.0])];
        let m = pairwise_distances(&SpaceSpec::lp(2.0, 3), &basis).unwrap();
        assert_eq!(m[0][1], 2f64.sqrt());
        assert_eq!(m[1][2], 2f64.sqrt());

        assert!(pairwise_distances(&SpaceSpec::lp(2.0, 3), &[v(&[1.0])]).is_err());
    }

    #[test]
    fn equilateral_check() {
        let basis = [v(&[1.0, 0.0, 0.0]), v(&[0.0, 1.0, 0.0]), v(&[0.0, 0.0, 1.0])];
        let cert = check_equilateral(&SpaceSpec::lp(2.0, 3), &basis, 1e-12).unwrap();
        assert!((cert.lambda - 2f64.sqrt()).abs() < 1e-15);
        assert!(cert.max_deviation <= 1e-12);

        let bad = [v(&[0.0, 0.0, 0.0]), v(&[1.0, 0.0, 0.0]), v(&[3.0, 0.0, 0.0])];
        match check_equilateral(&SpaceSpec::lp(2.0, 3), &bad, 1e-12) {
            Err(Error::NotEquilateral { lambda, max_deviation, .. }) => {
                assert_eq!(lambda, 2.0);
                assert_eq!(max_deviation, 1.0);
            }
            other => panic!("unexpected {other:?}"),
        }

        let dup = [v(&[1.0, 0.0]), v(&[1.0, 0.0]), v(&[0.0, 1.0])];
        assert_eq!(
            check_equilateral(&SpaceSpec::lp(2.0, 2), &dup, 1e-12),
            Err(Error::Degenerate { first: 0, second: 1 })
        );
        assert!(check_equilateral(&SpaceSpec::lp(2.0, 2), &dup[..1], 1e-12).is_err());
        assert!(check_equilateral(&SpaceSpec::lp(2.0, 2), &dup, 0.0).is_err());
    }
}
