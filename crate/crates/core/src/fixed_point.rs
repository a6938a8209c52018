//! Equilateral sets in norms close to `ℓ∞^d` or `ℓp^d`, obtained as fixed
//! points of the pair-indexed maps `φ` on a cube of perturbation
//! parameters.
//!
//! Brouwer's theorem guarantees a fixed point but says nothing about how to
//! find it; the solver is damped iteration `z ← (1−θ)z + θφ(z)` with random
//! restarts and a Nelder–Mead fallback on `‖φ(z) − z‖∞`. Non-convergence is
//! reported as an error carrying the best residual.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::optim::{nelder_mead, Bounds, Counted};
use crate::rng::Uniform;
use crate::space::{root, Exponent, SpaceSpec, Vector};

/// Number of random vectors used to spot-check an oracle's sandwich bound.
pub const ORACLE_SAMPLES: usize = 1000;
const ORACLE_SEED: u64 = 0x05ee_d0f0_ac1e;
const SANDWICH_SLACK: f64 = 1e-12;

/// Comparison norm of an oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Reference {
    Linf,
    Lp(f64),
}

impl Reference {
    fn norm(self, x: &[f64]) -> f64 {
        let p = match self {
            Reference::Linf => Exponent::Infinite,
            Reference::Lp(p) => Exponent::Finite(p),
        };
        SpaceSpec::Leaf { p, d: x.len() }.norm_unchecked(x)
    }
}

pub type NormFn = Box<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// A black-box norm on `ℝ^dim` with the claim `‖x‖ ≤ ‖x‖_ref ≤ bound·‖x‖`.
pub struct NormOracle {
    dim: usize,
    reference: Reference,
    bound: f64,
    eval: NormFn,
}

impl core::fmt::Debug for NormOracle {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("NormOracle")
            .field("dim", &self.dim)
            .field("reference", &self.reference)
            .field("bound", &self.bound)
            .finish_non_exhaustive()
    }
}

impl NormOracle {
    /// Wraps `eval` after checking the sandwich inequality on
    /// [`ORACLE_SAMPLES`] seeded vectors uniform on `[−1, 1]^dim`.
    pub fn new(dim: usize, reference: Reference, bound: f64, eval: NormFn) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("oracle dimension must be positive".into()));
        }
        if !(bound >= 1.0) || !bound.is_finite() {
            return Err(Error::InvalidArgument(format!("sandwich bound {bound} must be ≥ 1")));
        }
        if let Reference::Lp(p) = reference {
            if !(p >= 1.0 && p.is_finite()) {
                return Err(Error::InvalidArgument(format!("reference exponent {p} must be in [1, ∞)")));
            }
        }
        let oracle = NormOracle { dim, reference, bound, eval };
        let mut rng = Uniform::seeded(ORACLE_SEED);
        let mut x = vec![0.0; dim];
        for sample in 0..ORACLE_SAMPLES {
            x.iter_mut().for_each(|c| *c = rng.range(-1.0, 1.0));
            let (n, r) = (oracle.eval(&x), reference.norm(&x));
            if !(n <= r * (1.0 + SANDWICH_SLACK)) || !(r <= bound * n * (1.0 + SANDWICH_SLACK)) {
                return Err(Error::OracleBound(format!(
                    "sample {sample}: ‖x‖ = {n}, ‖x‖_ref = {r}, claimed bound {bound}"
                )));
            }
        }
        Ok(oracle)
    }

    /// `ℓ∞^d` itself (`D = 1`).
    pub fn exact_linf(d: usize) -> Result<Self> {
        let spec = SpaceSpec::linf(d);
        Self::new(d, Reference::Linf, 1.0, Box::new(move |x| spec.norm_unchecked(x)))
    }

    /// `ℓp^d` itself, compared with `ℓp` (`R = 1`).
    pub fn exact_lp(p: f64, d: usize) -> Result<Self> {
        let spec = SpaceSpec::lp(p, d);
        Self::new(d, Reference::Lp(p), 1.0, Box::new(move |x| spec.norm_unchecked(x)))
    }

    /// `‖x‖ = d^{−1/p}‖x‖_p`, compared with `ℓ∞` with `D = d^{1/p}`.
    pub fn scaled_lp_near_linf(p: f64, d: usize) -> Result<Self> {
        let spec = SpaceSpec::lp(p, d);
        let scale = root(d as f64, p);
        Self::new(d, Reference::Linf, scale, Box::new(move |x| spec.norm_unchecked(x) / scale))
    }

    /// An `ℓp^d` norm compared with `ℓq^d`: `‖x‖ = c·‖x‖_p` with the smallest
    /// `c` for which `‖x‖ ≤ ‖x‖_q`, and `bound` the resulting distortion.
    pub fn lp_against_lq(p: f64, q: f64, d: usize) -> Result<Self> {
        let spec = SpaceSpec::lp(p, d);
        let n = d as f64;
        // ‖x‖_p / ‖x‖_q ranges over [min(1, n^{1/p−1/q}), max(1, n^{1/p−1/q})].
        let e = 1.0 / p - 1.0 / q;
        let ratio = libm::pow(n, e);
        let (lo, hi) = if ratio >= 1.0 { (1.0, ratio) } else { (ratio, 1.0) };
        let c = 1.0 / hi;
        Self::new(d, Reference::Lp(q), hi / lo, Box::new(move |x| c * spec.norm_unchecked(x)))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn reference(&self) -> Reference {
        self.reference
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        (self.eval)(x)
    }

    pub fn distance(&self, a: &[f64], b: &[f64]) -> f64 {
        let diff: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        self.eval(&diff)
    }
}

/// Index of the unordered pair `{i, j}` (`i ≠ j`) among `C(m, 2)` pairs.
pub fn pair_index(i: usize, j: usize, m: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    i * m - i * (i + 1) / 2 + (j - i - 1)
}

/// Perturbation parameters `z^{i,j}` at the returned fixed point.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationState {
    /// Number of indexed points `m`; `z` has `C(m, 2)` entries.
    pub points: usize,
    pub z: Vec<f64>,
    /// Upper end of the cube `[0, cap]^{C(m,2)}`.
    pub cap: f64,
    /// `‖φ(z) − z‖∞`.
    pub residual: f64,
    pub iterations: usize,
}

impl PerturbationState {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.z[pair_index(i, j, self.points)]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointConfig {
    pub damping: f64,
    pub max_iterations: usize,
    pub restarts: usize,
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for FixedPointConfig {
    fn default() -> Self {
        FixedPointConfig { damping: 0.5, max_iterations: 100_000, restarts: 20, tolerance: 1e-12, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FixedPointSolution {
    pub points: Vec<Vector>,
    pub state: PerturbationState,
    pub common_distance: f64,
    /// Largest `|‖pᵢ − pⱼ‖ − common_distance|` under the oracle norm.
    pub max_deviation: f64,
    pub notes: Vec<String>,
}

/// A continuous self-map of `[0, cap]^n` evaluated into `out`; errors when
/// an iterate violates the proof's bounds `0 ≤ φ ≤ cap`.
trait CubeMap {
    fn len(&self) -> usize;
    fn cap(&self) -> f64;
    fn apply(&self, z: &[f64], out: &mut [f64]) -> Result<()>;
}

fn residual_of<M: CubeMap>(map: &M, z: &[f64], buf: &mut [f64]) -> Result<f64> {
    map.apply(z, buf)?;
    Ok(z.iter().zip(buf.iter()).fold(0.0f64, |m, (a, b)| m.max((a - b).abs())))
}

/// Damped iteration from `z`, stopping on convergence, stall or budget.
fn damped<M: CubeMap>(map: &M, z: &mut [f64], cfg: &FixedPointConfig, budget: usize) -> Result<(f64, usize)> {
    let n = map.len();
    let cap = map.cap();
    let mut phi = vec![0.0; n];
    let mut best = f64::INFINITY;
    let mut checkpoint = f64::INFINITY;
    for it in 0..budget {
        map.apply(z, &mut phi)?;
        let res = z.iter().zip(&phi).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        best = best.min(res);
        if res <= cfg.tolerance {
            return Ok((res, it));
        }
        if it % 1000 == 999 {
            if best > 0.5 * checkpoint {
                return Ok((best, it));
            }
            checkpoint = best;
        }
        for (zi, fi) in z.iter_mut().zip(&phi) {
            *zi = ((1.0 - cfg.damping) * *zi + cfg.damping * fi).clamp(0.0, cap);
        }
    }
    let res = residual_of(map, z, &mut phi)?;
    Ok((res, budget))
}

fn solve_cube<M: CubeMap>(map: &M, cfg: &FixedPointConfig) -> Result<(Vec<f64>, f64, usize)> {
    let n = map.len();
    let cap = map.cap();
    let mut z = vec![0.0; n];
    if n == 0 {
        return Ok((z, 0.0, 0));
    }
    let (res, mut total) = damped(map, &mut z, cfg, cfg.max_iterations)?;
    let (mut best_z, mut best_res) = (z.clone(), res);
    if best_res <= cfg.tolerance {
        return Ok((best_z, best_res, total));
    }
    let mut rng = Uniform::seeded(cfg.seed ^ 0x9e37_79b9_7f4a_7c15);
    let per_restart = (cfg.max_iterations / cfg.restarts.max(1)).max(1000);
    for _ in 0..cfg.restarts {
        let mut z: Vec<f64> = (0..n).map(|_| rng.range(0.0, cap)).collect();
        let (res, it) = damped(map, &mut z, cfg, per_restart)?;
        total += it;
        if res < best_res {
            best_res = res;
            best_z = z;
        }
        if best_res <= cfg.tolerance {
            return Ok((best_z, best_res, total));
        }
    }
    let bounds = Bounds { lo: vec![0.0; n], hi: vec![cap; n] };
    let mut buf = vec![0.0; n];
    let mut violation = None;
    let mut f = Counted::new(|z: &[f64]| match residual_of(map, z, &mut buf) {
        Ok(r) => r,
        Err(e) => {
            violation.get_or_insert(e);
            f64::INFINITY
        }
    });
    let (z, r) = nelder_mead(&mut f, &best_z, 0.1 * cap.max(1e-3), 200 * (n + 1) * (n + 1), 1e-16, Some(&bounds));
    total += f.evals;
    if let Some(e) = violation {
        return Err(e);
    }
    if r < best_res {
        best_res = r;
        best_z = z;
    }
    if best_res <= cfg.tolerance {
        Ok((best_z, best_res, total))
    } else {
        Err(Error::NoConvergence { iterations: total, residual: best_res })
    }
}

const BOUND_SLACK: f64 = 1e-12;

fn check_bounds(phi: &[f64], cap: f64) -> Result<()> {
    if let Some((k, v)) = phi.iter().enumerate().find(|(_, v)| !(**v >= -BOUND_SLACK && **v <= cap + BOUND_SLACK)) {
        return Err(Error::OracleBound(format!("φ component {k} = {v} outside [0, {cap}]")));
    }
    Ok(())
}

struct LinfMap<'a> {
    oracle: &'a NormOracle,
    d: usize,
}

impl LinfMap<'_> {
    /// `pᵢ⁽ⁿ⁾(z)`: `−1` at `n = i`, `0` above, `1 + z^{n,i}` below.
    fn point(&self, z: &[f64], i: usize) -> Vec<f64> {
        let m = self.d + 1;
        (0..self.d)
            .map(|n| match n.cmp(&i) {
                core::cmp::Ordering::Equal => -1.0,
                core::cmp::Ordering::Greater => 0.0,
                core::cmp::Ordering::Less => 1.0 + z[pair_index(n, i, m)],
            })
            .collect()
    }
}

impl CubeMap for LinfMap<'_> {
    fn len(&self) -> usize {
        let m = self.d + 1;
        m * (m - 1) / 2
    }

    fn cap(&self) -> f64 {
        1.0
    }

    fn apply(&self, z: &[f64], out: &mut [f64]) -> Result<()> {
        let m = self.d + 1;
        let pts: Vec<Vec<f64>> = (0..m).map(|i| self.point(z, i)).collect();
        for i in 0..m {
            for j in i + 1..m {
                let k = pair_index(i, j, m);
                out[k] = 2.0 + z[k] - self.oracle.distance(&pts[i], &pts[j]);
            }
        }
        check_bounds(out, 1.0)
    }
}

/// A 2-equilateral `(d+1)`-set in a norm with `‖x‖ ≤ ‖x‖∞ ≤ D‖x‖`, `D < 3/2`,
/// perturbing the canonical `ℓ∞^d` set; maximal by the structure of the
/// perturbation.
pub fn solve_linf_perturbation(oracle: &NormOracle, d: usize) -> Result<FixedPointSolution> {
    solve_linf_perturbation_with(oracle, d, &FixedPointConfig::default())
}

pub fn solve_linf_perturbation_with(
    oracle: &NormOracle,
    d: usize,
    cfg: &FixedPointConfig,
) -> Result<FixedPointSolution> {
    if oracle.reference() != Reference::Linf {
        return Err(Error::InvalidArgument("oracle must be compared with ℓ∞".into()));
    }
    if !(oracle.bound() < 1.5) {
        return Err(Error::InvalidArgument(format!("bound {} ≥ 3/2", oracle.bound())));
    }
    if oracle.dim() != d || d == 0 {
        return Err(Error::DimensionMismatch { expected: d, found: oracle.dim() });
    }
    let map = LinfMap { oracle, d };
    let (z, residual, iterations) = solve_cube(&map, cfg)?;
    let points: Vec<Vector> = (0..=d).map(|i| Vector::from_raw(map.point(&z, i))).collect();
    let max_deviation = oracle_deviation(oracle, &points, 2.0);
    Ok(FixedPointSolution {
        points,
        state: PerturbationState { points: d + 1, z, cap: 1.0, residual, iterations },
        common_distance: 2.0,
        max_deviation,
        notes: Vec::new(),
    })
}

fn oracle_deviation(oracle: &NormOracle, points: &[Vector], lambda: f64) -> f64 {
    let mut dev: f64 = 0.0;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            dev = dev.max((oracle.distance(&points[i], &points[j]) - lambda).abs());
        }
    }
    dev
}

/// `ε`, `R`, `γ = 1/λ`, `β = γε` and `λ = (2 + (d−2)ε^p)^{1/p}` for the
/// near-`ℓp` construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LpApproxParams {
    pub p: f64,
    pub d: usize,
    pub epsilon: f64,
    pub r: f64,
    pub gamma: f64,
    pub beta: f64,
    pub lambda: f64,
}

impl LpApproxParams {
    /// Largest admissible `ε = (2d−4)^{−1/(p−1)}`.
    pub fn max_epsilon(p: f64, d: usize) -> f64 {
        libm::pow(2.0 * d as f64 - 4.0, -1.0 / (p - 1.0))
    }

    /// `ε = 0` is accepted as the degenerate case (standard basis).
    pub fn new(p: f64, d: usize, epsilon: f64) -> Result<Self> {
        if !(p > 1.0 && p.is_finite()) {
            return Err(Error::InvalidArgument(format!("p = {p} must satisfy 1 < p < ∞")));
        }
        if d < 3 {
            return Err(Error::InvalidArgument(format!("d = {d} must be at least 3")));
        }
        let max = Self::max_epsilon(p, d);
        if !(epsilon >= 0.0 && epsilon <= max * (1.0 + 1e-15)) {
            return Err(Error::InvalidArgument(format!(
                "ε = {epsilon} outside 0 < ε ≤ (2d−4)^(−1/(p−1)) = {max}"
            )));
        }
        let lambda = root(2.0 + (d as f64 - 2.0) * libm::pow(epsilon, p), p);
        let gamma = 1.0 / lambda;
        Ok(LpApproxParams {
            p,
            d,
            epsilon,
            r: root(1.0 + 0.5 * (p - 1.0) * epsilon, p),
            gamma,
            beta: gamma * epsilon,
            lambda,
        })
    }
}

struct LpMap<'a> {
    oracle: &'a NormOracle,
    params: LpApproxParams,
}

impl LpMap<'_> {
    /// `pᵢ(z) = (z^{1,i}, …, z^{i−1,i}, −γ, 0, …, 0)`.
    fn point(&self, z: &[f64], i: usize) -> Vec<f64> {
        let d = self.params.d;
        (0..d)
            .map(|n| match n.cmp(&i) {
                core::cmp::Ordering::Less => z[pair_index(n, i, d)],
                core::cmp::Ordering::Equal => -self.params.gamma,
                core::cmp::Ordering::Greater => 0.0,
            })
            .collect()
    }
}

impl CubeMap for LpMap<'_> {
    fn len(&self) -> usize {
        self.params.d * (self.params.d - 1) / 2
    }

    fn cap(&self) -> f64 {
        self.params.beta
    }

    fn apply(&self, z: &[f64], out: &mut [f64]) -> Result<()> {
        let d = self.params.d;
        let pts: Vec<Vec<f64>> = (0..d).map(|i| self.point(z, i)).collect();
        for i in 0..d {
            for j in i + 1..d {
                let k = pair_index(i, j, d);
                out[k] = 1.0 + z[k] - self.oracle.distance(&pts[i], &pts[j]);
            }
        }
        check_bounds(out, self.params.beta)
    }
}

/// Slack on the strict sign pattern `−ε < pᵢ⁽ʲ⁾ < 0` of the near-`ℓp` set.
pub const SIGN_PATTERN_SLACK: f64 = 1e-9;

/// A `λ`-equilateral `d`-set in a norm with `‖x‖ ≤ ‖x‖_p ≤ R‖x‖` with
/// `pᵢ⁽ⁱ⁾ = 1`, `−ε < pᵢ⁽ʲ⁾ < 0` for `j < i` and `pᵢ⁽ʲ⁾ = 0` for `j > i`.
pub fn solve_lp_approx(oracle: &NormOracle, params: &LpApproxParams) -> Result<FixedPointSolution> {
    solve_lp_approx_with(oracle, params, &FixedPointConfig::default())
}

pub fn solve_lp_approx_with(
    oracle: &NormOracle,
    params: &LpApproxParams,
    cfg: &FixedPointConfig,
) -> Result<FixedPointSolution> {
    if oracle.reference() != Reference::Lp(params.p) {
        return Err(Error::InvalidArgument(format!("oracle must be compared with ℓ{}", params.p)));
    }
    if oracle.bound() > params.r * (1.0 + 1e-12) {
        return Err(Error::InvalidArgument(format!(
            "oracle bound {} exceeds R = {}",
            oracle.bound(),
            params.r
        )));
    }
    if oracle.dim() != params.d {
        return Err(Error::DimensionMismatch { expected: params.d, found: oracle.dim() });
    }
    let map = LpMap { oracle, params: *params };
    let (z, residual, iterations) = solve_cube(&map, cfg)?;
    let d = params.d;
    let points: Vec<Vector> = (0..d)
        .map(|i| Vector::from_raw(map.point(&z, i).into_iter().map(|x| -params.lambda * x + 0.0).collect()))
        .collect();
    let max_deviation = oracle_deviation(oracle, &points, params.lambda);
    let mut notes = Vec::new();
    if !sign_pattern_holds(&points, params.epsilon, SIGN_PATTERN_SLACK) {
        notes.push(format!("sign pattern violated beyond slack {SIGN_PATTERN_SLACK:e}"));
    } else if !sign_pattern_holds(&points, params.epsilon, 0.0) {
        notes.push(format!("sign pattern holds only up to slack {SIGN_PATTERN_SLACK:e}"));
    }
    Ok(FixedPointSolution {
        points,
        state: PerturbationState { points: d, z, cap: params.beta, residual, iterations },
        common_distance: params.lambda,
        max_deviation,
        notes,
    })
}

/// `pᵢ⁽ⁱ⁾ = 1`, `−ε − slack < pᵢ⁽ʲ⁾ < slack` for `j < i`, `pᵢ⁽ʲ⁾ = 0` for `j > i`.
/// With `slack = 0` the strict inequalities are required unless `ε = 0`.
pub fn sign_pattern_holds(points: &[Vector], epsilon: f64, slack: f64) -> bool {
    points.iter().enumerate().all(|(i, p)| {
        p.iter().enumerate().all(|(j, &x)| match j.cmp(&i) {
            core::cmp::Ordering::Equal => (x - 1.0).abs() <= 1e-12,
            core::cmp::Ordering::Greater => x == 0.0,
            core::cmp::Ordering::Less if epsilon == 0.0 => x == 0.0,
            core::cmp::Ordering::Less => x > -epsilon - slack && x < slack,
        })
    })
}
