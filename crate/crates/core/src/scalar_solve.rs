//! Bracketing root finders and the two scalar equations the constructions
//! depend on: the diagonal extension equation of the unit basis of `ℓp^d`
//! and the planar pair `u = (α, β)`, `v = (−β, α)` of `ℓp²`.

use alloc::format;

use crate::error::{Error, Result};
use crate::space::{pow_abs, root, Vector};

/// Bisection on `[a, b]` until `|f(x)| ≤ tol` and the sign change is
/// located within `tol`; stops early if the bracket collapses to adjacent
/// floats with a residual still above `tol` (reported as non-convergence).
pub fn bracket_root<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if !(tol > 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidArgument(format!("bad bracket [{a}, {b}] or tolerance {tol}")));
    }
    let (mut lo, mut hi) = if a <= b { (a, b) } else { (b, a) };
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() || flo.is_nan() || fhi.is_nan() {
        return Err(Error::NoSignChange { a: lo, b: hi, fa: flo, fb: fhi });
    }
    let mut iterations = 0;
    loop {
        iterations += 1;
        let mid = lo + 0.5 * (hi - lo);
        let fm = f(mid);
        if fm == 0.0 || (fm.abs() <= tol && hi - lo <= tol) {
            return Ok(mid);
        }
        if mid <= lo || mid >= hi {
            // Adjacent floats: the best achievable point.
            let fh = f(hi);
            let (x, fx) = if flo.abs() <= fh.abs() { (lo, flo) } else { (hi, fh) };
            return if fx.abs() <= tol {
                Ok(x)
            } else {
                Err(Error::NoConvergence { iterations, residual: fx.abs() })
            };
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
}

/// Bisection to machine precision, returning the endpoint of the collapsed
/// bracket with the smaller residual.
fn bisect_full<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> Result<f64> {
    let (mut lo, mut hi) = if a <= b { (a, b) } else { (b, a) };
    let (mut flo, mut fhi) = (f(lo), f(hi));
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() || flo.is_nan() || fhi.is_nan() {
        return Err(Error::NoSignChange { a: lo, b: hi, fa: flo, fb: fhi });
    }
    loop {
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            return Ok(if flo.abs() <= fhi.abs() { lo } else { hi });
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }
}

/// The two nonzero solutions of `|x−1|^p + (d−1)|x|^p = 2`: `x = λ ∈ (0, 1]`
/// and `x = −μ ∈ (−1, 0)`. The points `λ·j` and `−μ·j` (all-ones `j`) are
/// the only ways to extend the unit basis of `ℓp^d` equilaterally.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisExtensionRoots {
    pub p: f64,
    pub d: usize,
    pub lambda: f64,
    pub mu: f64,
}

impl BasisExtensionRoots {
    /// `f(x) = |x−1|^p + (d−1)|x|^p`.
    pub fn equation(p: f64, d: usize, x: f64) -> f64 {
        pow_abs(x - 1.0, p) + (d as f64 - 1.0) * pow_abs(x, p)
    }

    pub fn residuals(&self) -> (f64, f64) {
        (
            (Self::equation(self.p, self.d, self.lambda) - 2.0).abs(),
            (Self::equation(self.p, self.d, -self.mu) - 2.0).abs(),
        )
    }

    /// `‖λj − (−μj)‖_p = d^{1/p}(λ+μ)`.
    pub fn witness_separation(&self) -> f64 {
        root(self.d as f64, self.p) * (self.lambda + self.mu)
    }
}

pub fn solve_basis_extension_roots(p: f64, d: usize) -> Result<BasisExtensionRoots> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(Error::InvalidArgument(format!("exponent p = {p} must satisfy 1 < p < ∞")));
    }
    if d < 3 {
        return Err(Error::InvalidArgument(format!("dimension d = {d} must be at least 3")));
    }
    let g = |x: f64| BasisExtensionRoots::equation(p, d, x) - 2.0;
    // g(0) = −1 < 0, g(1) = d − 3 ≥ 0, g(−1) = 2^p + d − 3 > 0.
    let lambda = bisect_full(g, 0.0, 1.0)?;
    let mu = -bisect_full(g, -1.0, 0.0)?;
    let roots = BasisExtensionRoots { p, d, lambda, mu };
    let (r1, r2) = roots.residuals();
    if r1 > 1e-12 || r2 > 1e-12 {
        return Err(Error::NoConvergence { iterations: 0, residual: r1.max(r2) });
    }
    debug_assert!(lambda + mu > root(2.0 / d as f64, p));
    Ok(roots)
}

/// Unit vectors `u = (α, β)`, `v = (−β, α)` of `ℓp²` with `‖u ± v‖_p = λ`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanarPair {
    pub p: f64,
    pub lambda: f64,
    pub alpha: f64,
    pub beta: f64,
    pub u: Vector,
    pub v: Vector,
}

/// `‖(α,β) ± (−β,α)‖_p^p = |α+β|^p + |α−β|^p`.
pub fn planar_pair_power(p: f64, alpha: f64, beta: f64) -> f64 {
    pow_abs(alpha + beta, p) + pow_abs(alpha - beta, p)
}

/// Admissible range `[2^{1−1/p}, 2^{1/p}]` of `λ` for the planar pair.
pub fn planar_pair_range(p: f64) -> (f64, f64) {
    (libm::exp2(1.0 - 1.0 / p), libm::exp2(1.0 / p))
}

pub fn solve_planar_pair(p: f64, lambda: f64) -> Result<PlanarPair> {
    if !(1.0..=2.0).contains(&p) {
        return Err(Error::InvalidArgument(format!("exponent p = {p} must lie in [1, 2]")));
    }
    let (lo, hi) = planar_pair_range(p);
    let slack = 1e-12;
    if !(lambda >= lo - slack && lambda <= hi + slack) {
        return Err(Error::InvalidArgument(format!(
            "λ = {lambda} outside the admissible interval [{lo}, {hi}]"
        )));
    }
    let target = pow_abs(lambda, p);
    let beta_of = |alpha: f64| root((1.0 - pow_abs(alpha, p)).max(0.0), p);
    let h = |alpha: f64| planar_pair_power(p, alpha, beta_of(alpha)) - target;
    let right = root(0.5, p);
    let (h0, h1) = (h(0.0), h(right));
    // Endpoint slack: λ may sit a rounding error outside the range.
    let alpha = if h0 <= 0.0 {
        0.0
    } else if h1 >= 0.0 {
        right
    } else {
        bisect_full(h, 0.0, right)?
    };
    let beta = beta_of(alpha);
    Ok(PlanarPair {
        p,
        lambda,
        alpha,
        beta,
        u: Vector::from_raw(alloc::vec![alpha, beta]),
        v: Vector::from_raw(alloc::vec![-beta, alpha]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::SpaceSpec;

    #[test]
    fn bracket_examples() {
        let r = bracket_root(|x| x * x - 2.0, 1.0, 2.0, 1e-12).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(bracket_root(|x| x, -1.0, 1.0, 1e-12).unwrap(), 0.0);
        // 3x² − 2x − 1 = (3x + 1)(x − 1)
        let r = bracket_root(|x| 3.0 * x * x - 2.0 * x - 1.0, 0.5, 2.0, 1e-12).unwrap();
        assert!((r - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bracket_without_sign_change() {
        assert!(matches!(
            bracket_root(|x| x * x + 1.0, -1.0, 1.0, 1e-12),
            Err(Error::NoSignChange { .. })
        ));
    }

    #[test]
    fn basis_roots_closed_form() {
        // p = 2, d = 3: 3x² − 2x − 1 = 0
        let r = solve_basis_extension_roots(2.0, 3).unwrap();
        assert!((r.lambda - 1.0).abs() < 1e-14);
        assert!((r.mu - 1.0 / 3.0).abs() < 1e-14);
        assert!(r.lambda + r.mu > (2.0f64 / 3.0).sqrt());

        // p = 2, d = 4: 4x² − 2x − 1 = 0
        let r = solve_basis_extension_roots(2.0, 4).unwrap();
        assert!((r.lambda - (1.0 + 5f64.sqrt()) / 4.0).abs() < 1e-14);
        assert!((r.mu - (5f64.sqrt() - 1.0) / 4.0).abs() < 1e-14);
    }

    #[test]
    fn basis_roots_against_dense_scan() {
        let (p, d) = (1.5, 3);
        let r = solve_basis_extension_roots(p, d).unwrap();
        let (r1, r2) = r.residuals();
        assert!(r1 <= 1e-12 && r2 <= 1e-12);
        assert!(r.lambda + r.mu > (2.0f64 / 3.0).powf(1.0 / p));
        // Independent scan: sign changes of f − 2 on a fine grid of [−1, 1].
        let f = |x: f64| (x - 1.0).abs().powf(p) + 2.0 * x.abs().powf(p) - 2.0;
        let n = 200_000;
        let mut changes = alloc::vec::Vec::new();
        for i in 0..n {
            let a = -1.0 + 2.0 * i as f64 / n as f64;
            let b = -1.0 + 2.0 * (i + 1) as f64 / n as f64;
            if f(a) * f(b) <= 0.0 {
                changes.push(0.5 * (a + b));
            }
        }
        assert_eq!(changes.len(), 2);
        assert!((changes[0] + r.mu).abs() < 1e-5);
        assert!((changes[1] - r.lambda).abs() < 1e-5);
    }

    #[test]
    fn basis_roots_reject_bad_input() {
        assert!(solve_basis_extension_roots(1.0, 4).is_err());
        assert!(solve_basis_extension_roots(2.0, 2).is_err());
    }

    #[test]
    fn planar_pair_examples() {
        let pair = solve_planar_pair(1.0, 2.0).unwrap();
        assert_eq!((pair.alpha, pair.beta), (0.0, 1.0));
        assert_eq!(pair.u.coords(), &[0.0, 1.0]);
        assert_eq!(pair.v.coords(), &[-1.0, 0.0]);

        let pair = solve_planar_pair(1.0, 1.0).unwrap();
        assert!((pair.alpha - 0.5).abs() < 1e-12 && (pair.beta - 0.5).abs() < 1e-12);

        let pair = solve_planar_pair(2.0, 2f64.sqrt()).unwrap();
        let l2 = SpaceSpec::lp(2.0, 2);
        assert!((l2.norm(&pair.u).unwrap() - 1.0).abs() < 1e-15);
        assert!(pair.u.iter().zip(pair.v.iter()).map(|(a, b)| a * b).sum::<f64>().abs() < 1e-15);

        assert!(solve_planar_pair(1.5, 1.0).is_err());
        assert!(solve_planar_pair(2.5, 1.5).is_err());
    }

    #[test]
    fn planar_pair_distances() {
        for &p in &[1.0, 1.2, 1.5, 1.8, 2.0] {
            let (lo, hi) = planar_pair_range(p);
            let spec = SpaceSpec::lp(p, 2);
            for i in 0..=10 {
                let lambda = lo + (hi - lo) * i as f64 / 10.0;
                let pair = solve_planar_pair(p, lambda).unwrap();
                let plus = [pair.u[0] + pair.v[0], pair.u[1] + pair.v[1]];
                let minus = [pair.u[0] - pair.v[0], pair.u[1] - pair.v[1]];
                let (a, b) = (spec.norm(&plus).unwrap(), spec.norm(&minus).unwrap());
                assert!((a - lambda).abs() < 1e-12, "p={p} λ={lambda} got {a}");
                assert!((b - lambda).abs() < 1e-12);
                assert!((spec.norm(&pair.u).unwrap() - 1.0).abs() < 1e-12);
            }
        }
    }
}
