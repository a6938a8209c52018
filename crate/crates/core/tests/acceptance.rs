//! End-to-end acceptance checks, one line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so the summary lines always
//! appear in `cargo test` output. Expected values are recomputed here from
//! first principles rather than taken from the library.

use std::process::ExitCode;
use std::time::Instant;

use eqsets_core::constructions::{
    construct_linf_canonical, construct_lp_basis_extension, construct_petty, construct_prop17, construct_prop20,
    five_point_limit, smooth_unit_vector, solve_prop20_params, table_row, table_rows, ExtensionSign, Regime,
};
use eqsets_core::fixed_point::{
    sign_pattern_holds, solve_linf_perturbation, solve_lp_approx, LpApproxParams, NormOracle, SIGN_PATTERN_SLACK,
};
use eqsets_core::hadamard::{construct_hadamard, to_simplex, verify_hadamard, HadamardMethod};
use eqsets_core::scalar_solve::solve_basis_extension_roots;
use eqsets_core::space::check_equilateral;
use eqsets_core::verification::{cover_choice, extend_linf, find_equidistant, sphere_fit, BipartitionCover};
use eqsets_core::{SpaceSpec, Vector};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn lp_dist(a: &[f64], b: &[f64], p: f64) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs().powf(p)).sum::<f64>().powf(1.0 / p)
}

fn linf_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn pairs(k: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..k).flat_map(move |i| (i + 1..k).map(move |j| (i, j)))
}

fn max_dev(points: &[Vector], lambda: f64, dist: impl Fn(&[f64], &[f64]) -> f64) -> f64 {
    pairs(points.len()).map(|(i, j)| (dist(&points[i], &points[j]) - lambda).abs()).fold(0.0, f64::max)
}

fn hadamard_correctness() -> Outcome {
    for n in [1usize, 2, 4, 8, 12, 16, 20, 24] {
        let h = construct_hadamard(n, HadamardMethod::Auto).map_err(|e| format!("order {n}: {e}"))?;
        let rows = h.rows();
        for (i, j) in (0..n).flat_map(|i| (0..n).map(move |j| (i, j))) {
            let dot: i64 = (0..n).map(|c| i64::from(rows[i][c]) * i64::from(rows[j][c])).sum();
            ensure!(dot == if i == j { n as i64 } else { 0 }, "order {n}: (HHᵀ)[{i}][{j}] = {dot}");
        }
        ensure!(verify_hadamard(&rows) == Ok(true), "order {n}: verify_hadamard disagrees");
        let s = to_simplex(&h);
        for (i, j) in pairs(n) {
            let ham = s.vertices()[i].iter().zip(&s.vertices()[j]).filter(|(a, b)| a != b).count();
            ensure!(2 * ham == n, "order {n}: vertices {i}, {j} differ in {ham} coordinates");
        }
    }
    Ok("orders 1,2,4,8,12,16,20,24 exact; simplex Hamming distance n/2".into())
}

fn canonical_linf() -> Outcome {
    let mut worst = f64::INFINITY;
    for d in 1..=50 {
        let pts = construct_linf_canonical(d).map_err(|e| e.to_string())?;
        ensure!(pts.len() == d + 1, "d = {d}: {} points", pts.len());
        for (i, j) in pairs(d + 1) {
            ensure!(linf_dist(&pts[i], &pts[j]) == 2.0, "d = {d}: distance ({i},{j}) ≠ 2");
        }
        let spec = SpaceSpec::linf(d);
        let fit = sphere_fit(&spec, &pts).map_err(|e| e.to_string())?;
        ensure!(
            matches!(&fit, Some((c, r)) if c.iter().all(|&x| x == 0.0) && *r == 1.0),
            "d = {d}: sphere_fit gave {fit:?}"
        );
        let search = find_equidistant(&spec, &pts, 2.0).map_err(|e| e.to_string())?;
        ensure!(search.candidates.is_empty(), "d = {d}: extension {:?}", search.candidates[0]);
        ensure!(search.best_objective >= 1e-6, "d = {d}: objective {:e}", search.best_objective);
        worst = worst.min(search.best_objective);
    }
    Ok(format!("d = 1..50 exact, sphere (o,1), no extension (min objective {worst:.3e})"))
}

fn random_cover(rng: &mut ChaCha8Rng) -> Option<BipartitionCover> {
    let d = 1 + (rng.next_u32() % 12) as usize;
    let k = 1 + (rng.next_u32() as usize % d);
    let density = 0.15 + 0.7 * (rng.next_u32() as f64 / u32::MAX as f64);
    let parts: Vec<[Vec<usize>; 2]> = (0..d)
        .map(|_| {
            let mut sides = [Vec::new(), Vec::new()];
            for v in 0..k {
                if (rng.next_u32() as f64 / u32::MAX as f64) < density {
                    sides[(rng.next_u32() & 1) as usize].push(v);
                }
            }
            sides
        })
        .collect();
    BipartitionCover::new(k, parts).ok()
}

fn brute_force_cover(c: &BipartitionCover) -> bool {
    (0u32..1 << c.d()).any(|bits| {
        let mut hit = vec![false; c.k()];
        for (n, part) in c.parts().iter().enumerate() {
            part[((bits >> n) & 1) as usize].iter().for_each(|&i| hit[i] = true);
        }
        hit.into_iter().all(|h| h)
    })
}

/// A random 1-equilateral set in `ℓ∞^d` with dyadic coordinates.
fn random_linf_set(rng: &mut ChaCha8Rng) -> Vec<Vector> {
    loop {
        let d = 1 + (rng.next_u32() % 8) as usize;
        let k = 1 + (rng.next_u32() as usize % d);
        let mut pts = vec![vec![0.0; d]; k];
        for n in 0..d {
            let offset = f64::from(rng.next_u32() % 17) / 4.0 - 2.0;
            for p in pts.iter_mut() {
                p[n] = offset
                    + match rng.next_u32() % 3 {
                        0 => 0.0,
                        1 => 1.0,
                        _ => f64::from(1 + rng.next_u32() % 7) / 8.0,
                    };
            }
        }
        if pairs(k).all(|(i, j)| linf_dist(&pts[i], &pts[j]) == 1.0) {
            return pts.into_iter().map(|p| Vector::new(p).unwrap()).collect();
        }
    }
}

fn extension_algorithm() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut covers = 0;
    while covers < 500 {
        let Some(c) = random_cover(&mut rng) else { continue };
        covers += 1;
        ensure!(brute_force_cover(&c), "brute force found no selection for {:?}", c.parts());
        let sigma = cover_choice(&c).map_err(|e| format!("{e} for {:?}", c.parts()))?;
        ensure!(c.is_covering(&sigma), "σ = {sigma:?} does not cover {:?}", c.parts());
    }
    for _ in 0..100 {
        let pts = random_linf_set(&mut rng);
        let q = extend_linf(&pts, 1.0).map_err(|e| format!("{e} for {pts:?}"))?;
        for p in &pts {
            ensure!(linf_dist(p, &q) == 1.0, "q = {q:?} at distance {} from {p:?}", linf_dist(p, &q));
        }
    }
    Ok("500 covers match brute force; 100 ℓ∞ sets extended at exact distance 1".into())
}

fn basis_roots() -> Outcome {
    let mut worst: f64 = 0.0;
    for p in [1.1, 1.25, 1.5, 2.0, 3.0, 5.0] {
        for d in 3..=12usize {
            let r = solve_basis_extension_roots(p, d).map_err(|e| format!("p = {p}, d = {d}: {e}"))?;
            let f = |x: f64| (x - 1.0).abs().powf(p) + (d as f64 - 1.0) * x.abs().powf(p);
            let (e1, e2) = ((f(r.lambda) - 2.0).abs(), (f(-r.mu) - 2.0).abs());
            worst = worst.max(e1).max(e2);
            ensure!(e1 <= 1e-12 && e2 <= 1e-12, "p = {p}, d = {d}: residuals {e1:e}, {e2:e}");
            ensure!(r.lambda + r.mu > (2.0 / d as f64).powf(1.0 / p), "p = {p}, d = {d}: λ+μ too small");
            let edge = 2f64.powf(1.0 / p);
            let mut witnesses = Vec::new();
            for sign in [ExtensionSign::Plus, ExtensionSign::Minus] {
                let pts = construct_lp_basis_extension(p, d, sign).map_err(|e| e.to_string())?;
                let cert = check_equilateral(&SpaceSpec::lp(p, d), &pts, 1e-12).map_err(|e| format!("p = {p}, d = {d}: {e}"))?;
                ensure!((cert.lambda - edge).abs() <= 1e-12, "p = {p}, d = {d}: λ = {}", cert.lambda);
                ensure!(max_dev(&pts, edge, |a, b| lp_dist(a, b, p)) <= 1e-12, "p = {p}, d = {d}: deviation");
                witnesses.push(pts[d].clone());
            }
            let gap = lp_dist(&witnesses[0], &witnesses[1], p);
            ensure!(gap > edge, "p = {p}, d = {d}: witnesses {gap} apart");
        }
    }
    let r = solve_basis_extension_roots(2.0, 3).map_err(|e| e.to_string())?;
    ensure!((r.lambda - 1.0).abs() <= 1e-14 && (r.mu - 1.0 / 3.0).abs() <= 1e-14, "p = 2, d = 3: {r:?}");
    Ok(format!("60 grid points, max residual {worst:.1e}; p=2,d=3 gives λ=1, μ=1/3"))
}

fn five_point() -> Outcome {
    let mut worst = f64::INFINITY;
    for p in [1.0, 1.2, 1.3] {
        for d in [4usize, 6] {
            let s = construct_prop17(p, d).map_err(|e| e.to_string())?;
            let edge = 2f64.powf(1.0 + 1.0 / p);
            let dev = max_dev(&s.points, edge, |a, b| lp_dist(a, b, p));
            ensure!(dev <= 1e-12, "p = {p}, d = {d}: deviation {dev:e}");
            let search = find_equidistant(&SpaceSpec::lp(p, d), &s.points, edge).map_err(|e| e.to_string())?;
            ensure!(search.candidates.is_empty(), "p = {p}, d = {d}: found {:?}", search.candidates);
            worst = worst.min(search.best_objective);
        }
    }
    let p = (2.5f64).ln() / 2f64.ln();
    ensure!((p - five_point_limit()).abs() <= 1e-15, "boundary exponent mismatch");
    for d in [4usize, 6] {
        let s = construct_prop17(p, d).map_err(|e| e.to_string())?;
        let edge = 2f64.powf(1.0 + 1.0 / p);
        let lambda = (2f64.powf(p + 1.0) - 3.0).powf(1.0 / p);
        let search = find_equidistant(&SpaceSpec::lp(p, d), &s.points, edge).map_err(|e| e.to_string())?;
        ensure!(search.candidates.len() == 1, "boundary, d = {d}: {} witnesses {:?}", search.candidates.len(), search.candidates);
        let mut expect = vec![0.0; d];
        expect[3] = -lambda;
        let err = linf_dist(&search.candidates[0], &expect);
        ensure!(err <= 1e-9, "boundary, d = {d}: witness off by {err:e}");
    }
    Ok(format!("equilateral to 1e-12, no extension below the boundary (min objective {worst:.3e}); one witness at the boundary"))
}

fn two_simplex_table() -> Outcome {
    // (C, d₀) as printed, row by row.
    let printed = [(5, 4), (6, 4), (8, 6), (12, 10), (16, 14), (24, 22), (32, 30), (40, 38), (48, 46)];
    let rows = table_rows();
    ensure!(rows.len() == printed.len(), "{} rows", rows.len());
    let mut checked = 0;
    for (row, (c, d0)) in rows.iter().zip(printed) {
        let (lo, hi) = (row.lower.value, row.upper.value);
        let samples: Vec<f64> =
            if lo == hi { vec![lo] } else { [0.25, 0.5, 0.75].iter().map(|t| lo + t * (hi - lo)).collect() };
        for p in samples {
            let found = table_row(p).map_err(|e| e.to_string())?;
            ensure!((found.c, found.d0) == (c, d0), "p = {p}: (C, d₀) = ({}, {})", found.c, found.d0);
            let Regime::TwoSimplex { k1, k2 } = row.regime else {
                ensure!(c == 5 || c == 6, "five-point row with C = {c}");
                continue;
            };
            ensure!(c == 2 * (k1 + k2) && d0 == 2 * (k1 + k2 - 1), "row ({k1},{k2}) inconsistent with (C, d₀)");
            let params = solve_prop20_params(p, k1, k2).map_err(|e| format!("p = {p}, ({k1},{k2}): {e}"))?;
            let pts = construct_prop20(&params).map_err(|e| e.to_string())?;
            ensure!(pts.len() == c && pts.iter().all(|x| x.len() == d0), "p = {p}: shape");
            let edge = 2f64.powf(1.0 - 1.0 / p);
            let dev = max_dev(&pts, edge, |a, b| lp_dist(a, b, p));
            ensure!(dev <= 1e-10, "p = {p}, ({k1},{k2}): deviation {dev:e}");
            let fit = sphere_fit(&SpaceSpec::lp(p, d0), &pts).map_err(|e| e.to_string())?;
            ensure!(fit.is_none(), "p = {p}, ({k1},{k2}): sphere {fit:?}");
            checked += 1;
        }
    }
    Ok(format!("9 rows reproduce (C, d₀); {checked} two-simplex sets equilateral and non-spherical"))
}

fn fixed_points() -> Outcome {
    let exact = NormOracle::exact_linf(4).map_err(|e| e.to_string())?;
    let sol = solve_linf_perturbation(&exact, 4).map_err(|e| e.to_string())?;
    ensure!(sol.state.residual == 0.0 && sol.state.z.iter().all(|&z| z == 0.0), "exact ℓ∞: z ≠ 0");
    ensure!(sol.points == construct_linf_canonical(4).unwrap(), "exact ℓ∞: not the canonical set");

    let oracle = NormOracle::scaled_lp_near_linf(4.0, 3).map_err(|e| e.to_string())?;
    ensure!(oracle.bound() < 1.5, "D = {}", oracle.bound());
    let sol = solve_linf_perturbation(&oracle, 3).map_err(|e| e.to_string())?;
    let dev4 = max_dev(&sol.points, 2.0, |a, b| lp_dist(a, b, 4.0) / 3f64.powf(0.25));
    ensure!(dev4 <= 1e-10, "ℓ4³: deviation {dev4:e}");

    let params = LpApproxParams::new(2.0, 3, 0.1).map_err(|e| e.to_string())?;
    ensure!((params.lambda - 2.01f64.sqrt()).abs() <= 1e-15, "λ = {}", params.lambda);
    let oracle = NormOracle::exact_lp(2.0, 3).map_err(|e| e.to_string())?;
    let sol = solve_lp_approx(&oracle, &params).map_err(|e| e.to_string())?;
    let dev2 = max_dev(&sol.points, 2.01f64.sqrt(), |a, b| lp_dist(a, b, 2.0));
    ensure!(dev2 <= 1e-10, "ℓ2³: deviation {dev2:e}");
    ensure!(sign_pattern_holds(&sol.points, 0.1, SIGN_PATTERN_SLACK), "ℓ2³: sign pattern {:?}", sol.points);
    Ok(format!("exact ℓ∞ gives z = 0; ℓ4³ deviation {dev4:.1e}; ℓ2³ (ε = 0.1) deviation {dev2:.1e} with sign pattern"))
}

fn petty() -> Outcome {
    let inners = [
        (SpaceSpec::lp(2.0, 2), smooth_unit_vector(&SpaceSpec::lp(2.0, 2)).unwrap()),
        (SpaceSpec::lp(3.0, 3), smooth_unit_vector(&SpaceSpec::lp(3.0, 3)).unwrap()),
        (SpaceSpec::lp(1.0, 3), Vector::new(vec![1.0 / 3.0; 3]).unwrap()),
    ];
    let mut worst = f64::INFINITY;
    for (inner, u) in inners {
        let c = construct_petty(&inner, &u).map_err(|e| e.to_string())?;
        ensure!(c.points.len() == 4, "{} points", c.points.len());
        for (i, j) in pairs(4) {
            let d = c.space.distance(&c.points[i], &c.points[j]).map_err(|e| e.to_string())?;
            ensure!(d == 2.0, "{inner:?}: distance ({i},{j}) = {d}");
        }
        let search = find_equidistant(&c.space, &c.points, 2.0).map_err(|e| e.to_string())?;
        ensure!(search.candidates.is_empty(), "{inner:?}: extension {:?}", search.candidates);
        ensure!(search.best_objective >= 1e-4, "{inner:?}: objective {:e}", search.best_objective);
        worst = worst.min(search.best_objective);
    }
    Ok(format!("three inner spaces exactly 2-equilateral, no extension (min objective {worst:.3e})"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("hadamard correctness", hadamard_correctness),
        ("canonical ℓ∞ set", canonical_linf),
        ("ℓ∞ extension algorithm", extension_algorithm),
        ("diagonal extension roots", basis_roots),
        ("five-point sets", five_point),
        ("two-simplex sets / table", two_simplex_table),
        ("fixed-point solvers", fixed_points),
        ("Petty family", petty),
    ];
    let mut failed = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("criterion {}: PASS  {name}: {msg} [{secs:.1}s]", n + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {msg} [{secs:.1}s]", n + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
