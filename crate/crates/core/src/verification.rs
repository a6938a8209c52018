//! Extending and certifying equilateral sets.
//!
//! A λ-equilateral set is maximal iff no sphere of radius λ passes through
//! it. Exact answers come from family-specific reductions or, in `ℓ∞^d`, a
//! combinatorial search; everything else goes through a seeded multistart
//! search whose negative answers are heuristic.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::optim::{levenberg_marquardt, local_search};
use crate::rng::{SeedHasher, Uniform};
use crate::scalar_solve::solve_basis_extension_roots;
use crate::space::{check_equilateral, EquilateralCertificate, Exponent, SpaceSpec, Vector};

/// Parts `(A_n⁰, A_n¹)` of a cover of the pairs of `[k]` (zero-based) by
/// complete bipartite graphs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartitionCover {
    k: usize,
    parts: Vec<[Vec<usize>; 2]>,
}

impl BipartitionCover {
    /// Checks `d ≥ k`, that each part has disjoint sides with a nonempty
    /// union, and that every pair `{i, j}` is split by some part.
    pub fn new(k: usize, parts: Vec<[Vec<usize>; 2]>) -> Result<Self> {
        let d = parts.len();
        if k == 0 {
            return Err(Error::InvalidCover("k must be positive".into()));
        }
        if d < k {
            return Err(Error::InvalidCover(format!("{d} parts for {k} vertices; need d ≥ k")));
        }
        let mut side = vec![vec![None; k]; d];
        for (n, [a0, a1]) in parts.iter().enumerate() {
            if a0.is_empty() && a1.is_empty() {
                return Err(Error::InvalidCover(format!("part {n} has an empty union")));
            }
            for (e, a) in [a0, a1].into_iter().enumerate() {
                for &i in a {
                    if i >= k {
                        return Err(Error::InvalidCover(format!("part {n} names vertex {i} ≥ k = {k}")));
                    }
                    if side[n][i].replace(e).is_some() {
                        return Err(Error::InvalidCover(format!("vertex {i} appears twice in part {n}")));
                    }
                }
            }
        }
        for i in 0..k {
            for j in i + 1..k {
                let split = side.iter().any(|s| matches!((s[i], s[j]), (Some(a), Some(b)) if a != b));
                if !split {
                    return Err(Error::InvalidCover(format!("pair {{{i}, {j}}} is not covered")));
                }
            }
        }
        Ok(BipartitionCover { k, parts })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn d(&self) -> usize {
        self.parts.len()
    }

    pub fn parts(&self) -> &[[Vec<usize>; 2]] {
        &self.parts
    }

    /// Whether `A₁^{σ₁} ∪ … ∪ A_d^{σ_d} = [k]`.
    pub fn is_covering(&self, sigma: &[u8]) -> bool {
        if sigma.len() != self.d() || sigma.iter().any(|&s| s > 1) {
            return false;
        }
        let mut hit = vec![false; self.k];
        for (part, &s) in self.parts.iter().zip(sigma) {
            for &i in &part[usize::from(s)] {
                hit[i] = true;
            }
        }
        hit.into_iter().all(|h| h)
    }
}

/// A selection `σ ∈ {0,1}^d` whose chosen sides cover every vertex.
pub fn cover_choice(cover: &BipartitionCover) -> Result<Vec<u8>> {
    let d = cover.d();
    let mut sigma = vec![0u8; d];
    let mut used = vec![false; d];
    let mut uncovered: Vec<bool> = vec![true; cover.k];
    if reduce(cover, &mut uncovered, &mut used, &mut sigma) || exhaustive(cover, &mut sigma) {
        debug_assert!(cover.is_covering(&sigma));
        Ok(sigma)
    } else {
        Err(Error::InvalidCover("no covering selection exists".into()))
    }
}

fn restricted<'a>(side: &'a [usize], live: &'a [bool]) -> impl Iterator<Item = usize> + 'a {
    side.iter().copied().filter(move |&i| live[i])
}

/// The inductive argument: pick a whole side `S` of an unused part, drop
/// `S` from the live vertices and recurse. Pairs inside the remainder are
/// never split by the dropped part, so pair coverage is inherited; the step
/// is taken only if it keeps at least as many usable parts as live vertices.
fn reduce(cover: &BipartitionCover, live: &mut Vec<bool>, used: &mut [bool], sigma: &mut [u8]) -> bool {
    let remaining = live.iter().filter(|&&l| l).count();
    if remaining == 0 {
        return true;
    }
    let width = |n: usize, live: &[bool]| {
        let [a0, a1] = &cover.parts[n];
        restricted(a0, live).count() + restricted(a1, live).count()
    };
    let free: Vec<usize> = (0..cover.d()).filter(|&n| !used[n] && width(n, live) > 0).collect();
    // All remaining parts are singletons: match vertices to parts directly.
    if free.iter().all(|&n| width(n, live) == 1) {
        let mut taken = vec![false; cover.d()];
        let mut picks = Vec::new();
        for v in (0..cover.k).filter(|&v| live[v]) {
            let Some((n, e)) = free.iter().find_map(|&n| {
                let [a0, a1] = &cover.parts[n];
                let e = if a0.contains(&v) { 0 } else if a1.contains(&v) { 1 } else { return None };
                (!taken[n]).then_some((n, e))
            }) else {
                return false;
            };
            taken[n] = true;
            picks.push((n, e));
        }
        for (n, e) in picks {
            used[n] = true;
            sigma[n] = e;
        }
        live.iter_mut().for_each(|l| *l = false);
        return true;
    }
    let mut order = free.clone();
    order.sort_by_key(|&n| (width(n, live), n));
    for n in order {
        let mut sides: [(u8, usize); 2] = [0, 1].map(|e| (e, restricted(&cover.parts[n][usize::from(e)], live).count()));
        sides.sort_by(|a, b| b.1.cmp(&a.1));
        for (e, size) in sides {
            if size == 0 {
                continue;
            }
            let mut next = live.clone();
            for &i in &cover.parts[n][usize::from(e)] {
                next[i] = false;
            }
            let left = next.iter().filter(|&&l| l).count();
            let usable = (0..cover.d()).filter(|&m| m != n && !used[m] && width(m, &next) > 0).count();
            if usable < left {
                continue;
            }
            used[n] = true;
            sigma[n] = e;
            *live = next;
            return reduce(cover, live, used, sigma);
        }
    }
    false
}

/// Depth-first search branching on the uncovered vertex with the fewest
/// options.
fn exhaustive(cover: &BipartitionCover, sigma: &mut [u8]) -> bool {
    fn go(cover: &BipartitionCover, assigned: &mut [Option<u8>], hit: &mut [usize]) -> bool {
        fn options(cover: &BipartitionCover, v: usize, assigned: &[Option<u8>]) -> Vec<(usize, u8)> {
            let mut out = Vec::new();
            for (n, [a0, a1]) in cover.parts.iter().enumerate() {
                if assigned[n].is_some() {
                    continue;
                }
                if a0.contains(&v) {
                    out.push((n, 0));
                } else if a1.contains(&v) {
                    out.push((n, 1));
                }
            }
            out
        }
        let Some(v) = (0..cover.k).filter(|&v| hit[v] == 0).min_by_key(|&v| options(cover, v, assigned).len()) else {
            return true;
        };
        for (n, e) in options(cover, v, assigned) {
            assigned[n] = Some(e);
            for &i in &cover.parts[n][usize::from(e)] {
                hit[i] += 1;
            }
            if go(cover, assigned, hit) {
                return true;
            }
            for &i in &cover.parts[n][usize::from(e)] {
                hit[i] -= 1;
            }
            assigned[n] = None;
        }
        false
    }
    let mut assigned = vec![None; cover.d()];
    let mut hit = vec![0; cover.k];
    if !go(cover, &mut assigned, &mut hit) {
        return false;
    }
    for (s, a) in sigma.iter_mut().zip(assigned) {
        *s = a.unwrap_or(0);
    }
    true
}

/// Coordinates within this distance of 0 or 1 after normalisation are
/// treated as equal to it when building the cover.
pub const SNAP_TOLERANCE: f64 = 1e-9;

/// A point at `ℓ∞`-distance `lambda` from each of `k ≤ d` points of a
/// `lambda`-equilateral set in `ℓ∞^d`.
pub fn extend_linf(points: &[Vector], lambda: f64) -> Result<Vector> {
    let Some(first) = points.first() else {
        return Err(Error::InvalidArgument("no points to extend".into()));
    };
    let d = first.len();
    let k = points.len();
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidArgument(format!("λ = {lambda} must be positive")));
    }
    if k > d {
        return Err(Error::InvalidArgument(format!("{k} points in dimension {d}; need k ≤ d")));
    }
    let spec = SpaceSpec::linf(d);
    if k >= 2 {
        let tol = SNAP_TOLERANCE * lambda.max(1.0);
        let cert = check_equilateral(&spec, points, tol)?;
        if (cert.lambda - lambda).abs() > tol {
            return Err(Error::NotEquilateral { lambda: cert.lambda, max_deviation: (cert.lambda - lambda).abs(), tolerance: tol });
        }
    } else {
        spec.norm(first)?;
    }
    // Translate each coordinate so its minimum is 0 and scale to λ = 1; all
    // coordinates then lie in [0, 1] and A_n⁰ is never empty.
    let shift: Vec<f64> = (0..d).map(|n| points.iter().map(|p| p[n]).fold(f64::INFINITY, f64::min)).collect();
    let mut parts = Vec::with_capacity(d);
    for n in 0..d {
        let mut sides = [Vec::new(), Vec::new()];
        for (i, p) in points.iter().enumerate() {
            let t = (p[n] - shift[n]) / lambda;
            if t > 1.0 + SNAP_TOLERANCE {
                return Err(Error::InvalidArgument(format!(
                    "coordinate {n} spreads {} > λ; the points cannot be normalised",
                    t * lambda
                )));
            }
            if t <= SNAP_TOLERANCE {
                sides[0].push(i);
            } else if t >= 1.0 - SNAP_TOLERANCE {
                sides[1].push(i);
            }
        }
        parts.push(sides);
    }
    let cover = BipartitionCover::new(k, parts)?;
    let sigma = cover_choice(&cover)?;
    let q: Vec<f64> = (0..d).map(|n| lambda * f64::from(1 - sigma[n]) + shift[n]).collect();
    Ok(Vector::from_raw(q))
}

/// Multistart search settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    pub random_starts: usize,
    /// Mixed into the hash-derived seed.
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { random_starts: 100, seed: 0 }
    }
}

/// Points found at distance `r` from every input point.
#[derive(Debug, Clone, PartialEq)]
pub struct EquidistantSearch {
    pub candidates: Vec<Vector>,
    pub starts: usize,
    /// Smallest `Σᵢ (‖x − pᵢ‖ − r)²` reached over all starts.
    pub best_objective: f64,
}

/// Objective threshold for accepting a candidate.
pub const ACCEPT_OBJECTIVE: f64 = 1e-18;
/// Candidates closer than this are the same witness.
pub const DEDUP_DISTANCE: f64 = 1e-6;

fn hash_spec(h: &mut SeedHasher, spec: &SpaceSpec) {
    match spec {
        SpaceSpec::Leaf { p, d } => {
            h.word(1).float(p.value()).word(*d as u64);
        }
        SpaceSpec::Sum { q, summands } => {
            h.word(2).float(*q).word(summands.len() as u64);
            summands.iter().for_each(|s| hash_spec(h, s));
        }
    }
}

fn search_seed(spec: &SpaceSpec, points: &[Vector], r: f64, extra: u64) -> u64 {
    let mut h = SeedHasher::new();
    hash_spec(&mut h, spec);
    for p in points {
        p.iter().for_each(|&x| {
            h.float(x);
        });
    }
    h.float(r).word(extra);
    h.finish()
}

fn validate_points(spec: &SpaceSpec, points: &[Vector]) -> Result<()> {
    spec.validate()?;
    if points.len() < 2 {
        return Err(Error::InvalidArgument("need at least two points".into()));
    }
    points.iter().try_for_each(|p| spec.norm(p).map(|_| ()))
}

fn centroid(points: &[Vector]) -> Vec<f64> {
    let n = points[0].len();
    let mut c = vec![0.0; n];
    for p in points {
        c.iter_mut().zip(p.iter()).for_each(|(a, b)| *a += b);
    }
    c.iter_mut().for_each(|a| *a /= points.len() as f64);
    c
}

fn bounding_box(points: &[Vector], pad: f64) -> (Vec<f64>, Vec<f64>) {
    let n = points[0].len();
    let lo = (0..n).map(|i| points.iter().map(|p| p[i]).fold(f64::INFINITY, f64::min) - pad).collect();
    let hi = (0..n).map(|i| points.iter().map(|p| p[i]).fold(f64::NEG_INFINITY, f64::max) + pad).collect();
    (lo, hi)
}

/// Deterministic starting points: multiples of the all-ones vector, the
/// centroid, the origin, and the reflections `−pᵢ` and `2c − pᵢ`.
fn structural_seeds(points: &[Vector], r: f64) -> Vec<Vec<f64>> {
    let n = points[0].len();
    let c = centroid(points);
    let mut seeds = Vec::new();
    for t in [-2.0, -1.0, -0.5, -1.0 / 3.0, 0.5, 1.0, 2.0] {
        seeds.push(vec![t * r / libm::sqrt(n as f64).max(1.0); n]);
        seeds.push(vec![t * r; n]);
    }
    seeds.push(c.clone());
    seeds.push(vec![0.0; n]);
    for p in points {
        seeds.push(p.iter().map(|x| -x).collect());
        seeds.push(c.iter().zip(p.iter()).map(|(a, b)| 2.0 * a - b).collect());
    }
    seeds
}

fn lex_cmp(a: &[f64], b: &[f64]) -> core::cmp::Ordering {
    a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(core::cmp::Ordering::Equal)
}

/// Minimises one start: derivative-free descent, then a least-squares
/// polish on the residuals `‖x − pᵢ‖ − r`.
fn descend<F>(residuals: &F, m: usize, x0: &[f64], scale: f64, budget: usize, polish: bool) -> (Vec<f64>, f64)
where
    F: Fn(&[f64], &mut [f64]),
{
    let g = |x: &[f64]| {
        let mut r = vec![0.0; m];
        residuals(x, &mut r);
        r.iter().map(|v| v * v).sum::<f64>()
    };
    let (x, fx, _) = local_search(g, x0, scale, budget, None);
    if !polish {
        return (x, fx);
    }
    let (y, fy) = levenberg_marquardt(|x: &[f64], out: &mut [f64]| residuals(x, out), &x, m, 40);
    if fy < fx {
        (y, fy)
    } else {
        (x, fx)
    }
}

/// Whether every norm in the spec is differentiable away from zero, so a
/// Gauss–Newton polish can help.
fn is_smooth(spec: &SpaceSpec) -> bool {
    match spec {
        SpaceSpec::Leaf { p: Exponent::Finite(p), .. } => *p > 1.0,
        SpaceSpec::Leaf { p: Exponent::Infinite, .. } => false,
        SpaceSpec::Sum { q, summands } => (*q > 1.0 || summands.len() == 1) && summands.iter().all(is_smooth),
    }
}

fn local_budget(n: usize) -> usize {
    (150 * (n + 1)).min(6000)
}

/// Every `x` found with `‖x − pᵢ‖ = r` for all `i` (to `Σ` squared error
/// `≤ 1e−18`), deduplicated at `1e−6`.
pub fn find_equidistant(spec: &SpaceSpec, points: &[Vector], r: f64) -> Result<EquidistantSearch> {
    find_equidistant_with(spec, points, r, &SearchConfig::default())
}

pub fn find_equidistant_with(
    spec: &SpaceSpec,
    points: &[Vector],
    r: f64,
    cfg: &SearchConfig,
) -> Result<EquidistantSearch> {
    validate_points(spec, points)?;
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidArgument(format!("radius {r} must be positive")));
    }
    let n = spec.total_dim();
    let m = points.len();
    let residuals = |x: &[f64], out: &mut [f64]| {
        for (o, p) in out.iter_mut().zip(points) {
            *o = spec.distance_unchecked(x, p) - r;
        }
    };
    let mut starts = structural_seeds(points, r);
    let (lo, hi) = bounding_box(points, 2.0 * r);
    let mut rng = Uniform::seeded(search_seed(spec, points, r, cfg.seed));
    for _ in 0..cfg.random_starts {
        starts.push(lo.iter().zip(&hi).map(|(a, b)| rng.range(*a, *b)).collect());
    }
    let mut best = f64::INFINITY;
    let mut found: Vec<(Vec<f64>, f64)> = Vec::new();
    for x0 in &starts {
        let (x, fx) = descend(&residuals, m, x0, 0.5 * r, local_budget(n), is_smooth(spec));
        best = best.min(fx);
        if fx <= ACCEPT_OBJECTIVE {
            found.push((x, fx));
        }
    }
    Ok(EquidistantSearch { candidates: dedup(spec, found), starts: starts.len(), best_objective: best })
}

/// Sorts lexicographically and keeps one representative (the one with the
/// smallest objective) per cluster of candidates within [`DEDUP_DISTANCE`].
fn dedup(spec: &SpaceSpec, mut found: Vec<(Vec<f64>, f64)>) -> Vec<Vector> {
    found.sort_by(|a, b| lex_cmp(&a.0, &b.0));
    let mut reps: Vec<(Vec<f64>, f64)> = Vec::new();
    for (x, fx) in found {
        match reps.iter_mut().find(|(y, _)| spec.distance_unchecked(&x, y) < DEDUP_DISTANCE) {
            Some(rep) if fx < rep.1 => *rep = (x, fx),
            Some(_) => {}
            None => reps.push((x, fx)),
        }
    }
    reps.into_iter().map(|(x, _)| Vector::from_raw(x.into_iter().map(|v| v + 0.0).collect())).collect()
}

/// A center and radius with all points on the sphere, if the search finds
/// one with every `|‖x − pᵢ‖ − radius| ≤ 1e−9`.
pub fn sphere_fit(spec: &SpaceSpec, points: &[Vector]) -> Result<Option<(Vector, f64)>> {
    sphere_fit_with(spec, points, &SearchConfig { random_starts: 20, seed: 0 })
}

/// Maximum deviation accepted by [`sphere_fit`].
pub const SPHERE_TOLERANCE: f64 = 1e-9;

pub fn sphere_fit_with(spec: &SpaceSpec, points: &[Vector], cfg: &SearchConfig) -> Result<Option<(Vector, f64)>> {
    validate_points(spec, points)?;
    let n = spec.total_dim();
    let m = points.len();
    let spread = |x: &[f64]| {
        let d: Vec<f64> = points.iter().map(|p| spec.distance_unchecked(x, p)).collect();
        let mean = d.iter().sum::<f64>() / m as f64;
        let dev = d.iter().fold(0.0f64, |a, v| a.max((v - mean).abs()));
        (mean, dev)
    };
    let accept = |x: &[f64]| {
        let (mean, dev) = spread(x);
        (dev <= SPHERE_TOLERANCE).then(|| (Vector::from_raw(x.iter().map(|v| v + 0.0).collect()), mean))
    };
    let (lo, hi) = bounding_box(points, 0.0);
    let mid: Vec<f64> = lo.iter().zip(&hi).map(|(a, b)| 0.5 * (a + b)).collect();
    let mut starts = vec![vec![0.0; n], centroid(points), mid];
    for x in &starts {
        if let Some(hit) = accept(x) {
            return Ok(Some(hit));
        }
    }
    let scale = lo.iter().zip(&hi).fold(0.0f64, |a, (l, h)| a.max(h - l)).max(1.0);
    let (lo, hi) = bounding_box(points, scale);
    let mut rng = Uniform::seeded(search_seed(spec, points, 0.0, cfg.seed));
    for _ in 0..cfg.random_starts {
        starts.push(lo.iter().zip(&hi).map(|(a, b)| rng.range(*a, *b)).collect());
    }
    // Unknowns (x, ρ) with residuals ‖x − pᵢ‖ − ρ.
    let residuals = |z: &[f64], out: &mut [f64]| {
        let (x, rho) = z.split_at(n);
        for (o, p) in out.iter_mut().zip(points) {
            *o = spec.distance_unchecked(x, p) - rho[0];
        }
    };
    for x0 in &starts {
        let mut z0 = x0.clone();
        z0.push(spread(x0).0);
        let (z, _) = descend(&residuals, m, &z0, 0.25 * scale, local_budget(n + 1), is_smooth(spec));
        if let Some(hit) = accept(&z[..n]) {
            return Ok(Some(hit));
        }
    }
    Ok(None)
}

/// Family-specific reduction to apply in [`check_maximal`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyHint {
    /// A multiple of the standard basis of `ℓp^d`, `1 < p < ∞`, `d ≥ 3`.
    Basis,
    /// The two-simplex construction in `ℓp^{2(k₁+k₂−1)}`.
    Prop20,
    /// Any set in `ℓ∞^d` with `d·k ≤ 24`.
    Linf,
}

impl core::str::FromStr for FamilyHint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "basis" | "lp-basis" => Ok(FamilyHint::Basis),
            "prop20" => Ok(FamilyHint::Prop20),
            "linf" => Ok(FamilyHint::Linf),
            _ => Err(Error::InvalidArgument(format!("unknown family hint {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaximalityStatus {
    ExtensionFound,
    /// The numeric search found nothing; heuristic.
    NoExtensionFound,
    ProvenMaximal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictMethod {
    Structural,
    Numeric,
    Combinatorial,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchReport {
    pub starts: usize,
    pub best_objective: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaximalityVerdict {
    pub status: MaximalityStatus,
    /// Extension points, each at distance λ from every point within `1e−9`.
    pub witnesses: Vec<Vector>,
    pub method: VerdictMethod,
    pub search: Option<SearchReport>,
    pub notes: Vec<String>,
}

impl MaximalityVerdict {
    pub fn witness(&self) -> Option<&Vector> {
        self.witnesses.first()
    }

    /// `proven_maximal`, or a heuristic `no_extension_found`.
    pub fn is_maximal(&self) -> bool {
        self.status != MaximalityStatus::ExtensionFound
    }
}

/// Largest number of `d·k` for the exhaustive `ℓ∞` check.
pub const LINF_EXHAUSTIVE_LIMIT: usize = 24;
const WITNESS_TOLERANCE: f64 = 1e-9;

/// Decides whether the certified set extends, using the reduction for
/// `hint` when given and the numeric search otherwise.
pub fn check_maximal(
    spec: &SpaceSpec,
    cert: &EquilateralCertificate,
    hint: Option<FamilyHint>,
) -> Result<MaximalityVerdict> {
    check_maximal_with(spec, cert, hint, &SearchConfig::default())
}

pub fn check_maximal_with(
    spec: &SpaceSpec,
    cert: &EquilateralCertificate,
    hint: Option<FamilyHint>,
    cfg: &SearchConfig,
) -> Result<MaximalityVerdict> {
    let recheck = check_equilateral(spec, &cert.points, cert.tolerance)?;
    if (recheck.lambda - cert.lambda).abs() > cert.tolerance {
        return Err(Error::NotEquilateral {
            lambda: recheck.lambda,
            max_deviation: (recheck.lambda - cert.lambda).abs(),
            tolerance: cert.tolerance,
        });
    }
    let verdict = match hint {
        Some(FamilyHint::Basis) => basis_verdict(spec, cert)?,
        Some(FamilyHint::Prop20) => prop20_verdict(spec, cert)?,
        Some(FamilyHint::Linf) => {
            if !matches!(spec, SpaceSpec::Leaf { p: Exponent::Infinite, .. }) {
                return Err(Error::HintMismatch("linf hint needs an ℓ∞ space".into()));
            }
            if spec.total_dim() * cert.points.len() <= LINF_EXHAUSTIVE_LIMIT {
                linf_exhaustive(cert)
            } else {
                let mut v = numeric_verdict(spec, cert, cfg)?;
                v.notes.push(format!("d·k > {LINF_EXHAUSTIVE_LIMIT}; exhaustive check skipped"));
                v
            }
        }
        None => numeric_verdict(spec, cert, cfg)?,
    };
    for w in &verdict.witnesses {
        debug_assert!(cert
            .points
            .iter()
            .all(|p| (spec.distance_unchecked(w, p) - cert.lambda).abs() <= WITNESS_TOLERANCE * cert.lambda.max(1.0)));
    }
    Ok(verdict)
}

fn numeric_verdict(spec: &SpaceSpec, cert: &EquilateralCertificate, cfg: &SearchConfig) -> Result<MaximalityVerdict> {
    let search = find_equidistant_with(spec, &cert.points, cert.lambda, cfg)?;
    let report = SearchReport { starts: search.starts, best_objective: search.best_objective };
    let (status, notes) = if search.candidates.is_empty() {
        (MaximalityStatus::NoExtensionFound, vec![String::from("heuristic: numeric search found no extension")])
    } else {
        (MaximalityStatus::ExtensionFound, Vec::new())
    };
    Ok(MaximalityVerdict { status, witnesses: search.candidates, method: VerdictMethod::Numeric, search: Some(report), notes })
}

/// Extensions of `{s·e₁, …, s·e_d}` lie on the diagonal, where the distance
/// condition is the scalar equation `|x−1|^p + (d−1)|x|^p = 2`.
fn basis_verdict(spec: &SpaceSpec, cert: &EquilateralCertificate) -> Result<MaximalityVerdict> {
    let (p, d) = match spec {
        SpaceSpec::Leaf { p: Exponent::Finite(p), d } if *p > 1.0 && *d >= 3 => (*p, *d),
        _ => return Err(Error::HintMismatch("basis hint needs ℓp^d with 1 < p < ∞ and d ≥ 3".into())),
    };
    if cert.points.len() != d {
        return Err(Error::HintMismatch(format!("expected {d} points, found {}", cert.points.len())));
    }
    let s = cert.points[0].iter().copied().fold(0.0f64, |a, x| a.max(x.abs()));
    let mut seen = vec![false; d];
    for pt in &cert.points {
        let nonzero: Vec<usize> = (0..d).filter(|&i| pt[i] != 0.0).collect();
        match nonzero.as_slice() {
            [i] if pt[*i] == s && !seen[*i] => seen[*i] = true,
            _ => return Err(Error::HintMismatch("points are not a multiple of the standard basis".into())),
        }
    }
    let roots = solve_basis_extension_roots(p, d)?;
    let witnesses = [roots.lambda, -roots.mu].map(|t| Vector::from_raw(vec![s * t; d])).to_vec();
    Ok(MaximalityVerdict {
        status: MaximalityStatus::ExtensionFound,
        witnesses,
        method: VerdictMethod::Structural,
        search: None,
        notes: vec![format!("diagonal roots λ = {}, −μ = {}", roots.lambda, -roots.mu)],
    })
}

/// A sphere through the two-simplex set must be centred at the origin, so
/// the set extends iff every point has norm λ.
fn prop20_verdict(spec: &SpaceSpec, cert: &EquilateralCertificate) -> Result<MaximalityVerdict> {
    let p = match spec {
        SpaceSpec::Leaf { p: Exponent::Finite(p), .. } if (1.0..2.0).contains(p) => *p,
        _ => return Err(Error::HintMismatch("prop20 hint needs ℓp with 1 ≤ p < 2".into())),
    };
    let n = spec.total_dim();
    let size = cert.points.len();
    let k1 = cert.points.iter().filter(|x| x[0] != 0.0).count();
    if k1 % 2 != 0 || size % 2 != 0 || k1 == 0 || k1 == size {
        return Err(Error::HintMismatch("cannot split the points into two simplex blocks".into()));
    }
    let (k1, k2) = (k1 / 2, (size - k1) / 2);
    if n != 2 * (k1 + k2 - 1) {
        return Err(Error::HintMismatch(format!("dimension {n} ≠ 2(k₁+k₂−1) for (k₁,k₂) = ({k1},{k2})")));
    }
    let split = 1 + 2 * (k1 - 1);
    for x in &cert.points {
        let block1 = x[0] != 0.0;
        let foreign = if block1 { &x[split..] } else { &x[..split] };
        if foreign.iter().any(|&c| c != 0.0) {
            return Err(Error::HintMismatch("a point has support in both blocks".into()));
        }
    }
    let origin = vec![0.0; n];
    let radii: Vec<f64> = cert.points.iter().map(|x| spec.distance_unchecked(x, &origin)).collect();
    let (lo, hi) = radii.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &r| (a.min(r), b.max(r)));
    let tol = cert.tolerance.max(WITNESS_TOLERANCE);
    let mut notes = vec![format!("p = {p}, (k₁, k₂) = ({k1}, {k2}), radii from o in [{lo}, {hi}]")];
    let (status, witnesses) = if hi - lo > tol {
        notes.push(String::from("α₁ ≠ α₂: not on any sphere"));
        (MaximalityStatus::ProvenMaximal, Vec::new())
    } else if (lo - cert.lambda).abs() > tol {
        notes.push(String::from("on a sphere about o whose radius is not λ"));
        (MaximalityStatus::ProvenMaximal, Vec::new())
    } else {
        (MaximalityStatus::ExtensionFound, vec![Vector::zeros(n)])
    };
    Ok(MaximalityVerdict { status, witnesses, method: VerdictMethod::Structural, search: None, notes })
}

/// `‖x − pᵢ‖∞ = λ` for all `i` iff every coordinate of `x` lies in the box
/// `⋂ᵢ [pᵢ − λ, pᵢ + λ]` and every `i` is hit (`|xₙ − pᵢ⁽ⁿ⁾| = λ`) in some
/// coordinate. Dynamic programming over coordinates on the set of hit points
/// decides this exactly.
fn linf_exhaustive(cert: &EquilateralCertificate) -> MaximalityVerdict {
    let points = &cert.points;
    let lambda = cert.lambda;
    let (k, d) = (points.len(), points[0].len());
    let tol = WITNESS_TOLERANCE * lambda.max(1.0);
    // Per coordinate: admissible values with the mask of points they hit.
    let mut options: Vec<Vec<(f64, u32)>> = Vec::with_capacity(d);
    for n in 0..d {
        let lo = points.iter().map(|p| p[n] - lambda).fold(f64::NEG_INFINITY, f64::max);
        let hi = points.iter().map(|p| p[n] + lambda).fold(f64::INFINITY, f64::min);
        let mut opts = Vec::new();
        if lo <= hi + tol {
            let mid = 0.5 * (lo + hi);
            opts.push((mid, hit_mask(points, n, mid, lambda, tol)));
            for p in points {
                for v in [p[n] - lambda, p[n] + lambda] {
                    if v >= lo - tol && v <= hi + tol {
                        opts.push((v, hit_mask(points, n, v, lambda, tol)));
                    }
                }
            }
        }
        opts.sort_by(|a, b| a.1.cmp(&b.1).then(a.0.total_cmp(&b.0)));
        opts.dedup_by_key(|o| o.1);
        options.push(opts);
    }
    let full = if k == 32 { u32::MAX } else { (1u32 << k) - 1 };
    // reach[n][mask] = choice index at coordinate n leading to mask.
    let states = 1usize << k;
    let mut reach: Vec<Vec<Option<(u32, usize)>>> = Vec::with_capacity(d + 1);
    let mut layer = vec![None; states];
    layer[0] = Some((0, 0));
    reach.push(layer);
    for opts in &options {
        let prev = reach.last().expect("nonempty");
        let mut next = vec![None; states];
        for (mask, entry) in prev.iter().enumerate() {
            if entry.is_none() {
                continue;
            }
            for (c, &(_, hit)) in opts.iter().enumerate() {
                let m = mask | hit as usize;
                if next[m].is_none() {
                    next[m] = Some((mask as u32, c));
                }
            }
        }
        reach.push(next);
    }
    let notes = vec![format!("exhaustive over {d} coordinates × {k} points")];
    if reach[d][full as usize].is_none() {
        return MaximalityVerdict {
            status: MaximalityStatus::ProvenMaximal,
            witnesses: Vec::new(),
            method: VerdictMethod::Combinatorial,
            search: None,
            notes,
        };
    }
    let mut x = vec![0.0; d];
    let mut mask = full as usize;
    for n in (0..d).rev() {
        let (prev, c) = reach[n + 1][mask].expect("reachable");
        x[n] = options[n][c].0;
        mask = prev as usize;
    }
    MaximalityVerdict {
        status: MaximalityStatus::ExtensionFound,
        witnesses: vec![Vector::from_raw(x)],
        method: VerdictMethod::Combinatorial,
        search: None,
        notes,
    }
}

fn hit_mask(points: &[Vector], n: usize, v: f64, lambda: f64, tol: f64) -> u32 {
    points
        .iter()
        .enumerate()
        .filter(|(_, p)| ((v - p[n]).abs() - lambda).abs() <= tol)
        .fold(0, |m, (i, _)| m | (1 << i))
}
