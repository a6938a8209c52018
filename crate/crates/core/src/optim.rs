//! Derivative-free local minimisation and least-squares polishing used by
//! the fixed-point fallback and the equidistant-point searches.

use alloc::vec;
use alloc::vec::Vec;

/// Axis-aligned search box.
#[derive(Debug, Clone)]
pub(crate) struct Bounds {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl Bounds {
    pub(crate) fn clamp(&self, x: &mut [f64]) {
        for ((xi, lo), hi) in x.iter_mut().zip(&self.lo).zip(&self.hi) {
            *xi = xi.clamp(*lo, *hi);
        }
    }
}

/// Counts evaluations against a budget.
pub(crate) struct Counted<F> {
    f: F,
    pub evals: usize,
}

impl<F: FnMut(&[f64]) -> f64> Counted<F> {
    pub(crate) fn new(f: F) -> Self {
        Counted { f, evals: 0 }
    }

    pub(crate) fn call(&mut self, x: &[f64]) -> f64 {
        self.evals += 1;
        let v = (self.f)(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    }
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for a minimum of `f` on `[a, b]`.
pub(crate) fn golden_section<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, iters: usize) -> (f64, f64) {
    let (mut a, mut b) = (a, b);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..iters {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// One sweep of coordinate-wise golden-section searches on
/// `[xᵢ − h, xᵢ + h]`; keeps a coordinate only if it improves `fx`.
pub(crate) fn coordinate_sweep<F: FnMut(&[f64]) -> f64>(
    f: &mut Counted<F>,
    x: &mut [f64],
    fx: &mut f64,
    h: f64,
    bounds: Option<&Bounds>,
) {
    for i in 0..x.len() {
        let orig = x[i];
        let (mut lo, mut hi) = (orig - h, orig + h);
        if let Some(b) = bounds {
            lo = lo.max(b.lo[i]);
            hi = hi.min(b.hi[i]);
        }
        if !(hi > lo) {
            continue;
        }
        let mut probe = x.to_vec();
        let (t, ft) = golden_section(
            |t| {
                probe[i] = t;
                f.call(&probe)
            },
            lo,
            hi,
            24,
        );
        if ft < *fx {
            x[i] = t;
            *fx = ft;
        } else {
            x[i] = orig;
        }
    }
}

/// Nelder–Mead with the usual coefficients; returns the best vertex.
pub(crate) fn nelder_mead<F: FnMut(&[f64]) -> f64>(
    f: &mut Counted<F>,
    x0: &[f64],
    step: f64,
    max_evals: usize,
    ftol: f64,
    bounds: Option<&Bounds>,
) -> (Vec<f64>, f64) {
    let n = x0.len();
    let start = f.evals;
    let clamp = |x: &mut Vec<f64>| {
        if let Some(b) = bounds {
            b.clamp(x);
        }
    };
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), f.call(x0)));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += if x[i].abs() > 1e-12 { step * x[i].abs().max(1.0) } else { step };
        clamp(&mut x);
        let fx = f.call(&x);
        simplex.push((x, fx));
    }
    while f.evals - start < max_evals {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (best, worst) = (simplex[0].1, simplex[n].1);
        if (worst - best).abs() <= ftol * (best.abs() + worst.abs()) + 1e-300 {
            break;
        }
        let mut centroid = vec![0.0; n];
        for (x, _) in &simplex[..n] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / n as f64;
            }
        }
        let towards = |t: f64, target: &[f64]| -> Vec<f64> {
            centroid.iter().zip(target).map(|(c, w)| c + t * (w - c)).collect()
        };
        let mut xr = towards(-1.0, &simplex[n].0);
        clamp(&mut xr);
        let fr = f.call(&xr);
        if fr < simplex[0].1 {
            let mut xe = towards(-2.0, &simplex[n].0);
            clamp(&mut xe);
            let fe = f.call(&xe);
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
        } else {
            let (mut xc, fc) = if fr < simplex[n].1 {
                let mut xc = towards(-0.5, &simplex[n].0);
                clamp(&mut xc);
                let fc = f.call(&xc);
                (xc, fc)
            } else {
                let mut xc = towards(0.5, &simplex[n].0);
                clamp(&mut xc);
                let fc = f.call(&xc);
                (xc, fc)
            };
            if fc < simplex[n].1.min(fr) {
                simplex[n] = (core::mem::take(&mut xc), fc);
            } else {
                let x_best = simplex[0].0.clone();
                for (x, fx) in simplex.iter_mut().skip(1) {
                    for (xi, bi) in x.iter_mut().zip(&x_best) {
                        *xi = bi + 0.5 * (*xi - bi);
                    }
                    *fx = f.call(x);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    simplex.swap_remove(0)
}

/// Derivative-free local search: coordinate golden-section sweeps with a
/// shrinking window, alternated with Nelder–Mead restarts at the incumbent.
pub(crate) fn local_search<F: FnMut(&[f64]) -> f64>(
    f: F,
    x0: &[f64],
    window: f64,
    budget: usize,
    bounds: Option<&Bounds>,
) -> (Vec<f64>, f64, usize) {
    let mut f = Counted::new(f);
    let mut x = x0.to_vec();
    let mut fx = f.call(&x);
    let mut h = window;
    while f.evals < budget && h > 1e-13 && fx > 0.0 {
        let before = fx;
        coordinate_sweep(&mut f, &mut x, &mut fx, h, bounds);
        if f.evals < budget {
            let remaining = (budget - f.evals).min(200 * (x.len() + 1));
            let (y, fy) = nelder_mead(&mut f, &x, h * 0.25, remaining, 1e-15, bounds);
            if fy < fx {
                x = y;
                fx = fy;
            }
        }
        if fx > 0.5 * before {
            h *= 0.25;
        }
    }
    (x, fx, f.evals)
}

/// Solves `A x = b` (`A` row-major `n×n`) by Gaussian elimination with
/// partial pivoting; `None` when singular.
pub(crate) fn solve_linear(mut a: Vec<f64>, mut b: Vec<f64>, n: usize) -> Option<Vec<f64>> {
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i * n + col].abs().total_cmp(&a[j * n + col].abs()))?;
        if a[piv * n + col].abs() < 1e-300 {
            return None;
        }
        if piv != col {
            for k in 0..n {
                a.swap(piv * n + k, col * n + k);
            }
            b.swap(piv, col);
        }
        for r in col + 1..n {
            let m = a[r * n + col] / a[col * n + col];
            if m != 0.0 {
                for k in col..n {
                    a[r * n + k] -= m * a[col * n + k];
                }
                b[r] -= m * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|k| a[r * n + k] * x[k]).sum();
        x[r] = (b[r] - s) / a[r * n + r];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

/// Levenberg–Marquardt on `Σ rᵢ(x)²` with a central-difference Jacobian.
/// Returns the best point seen and its sum of squares.
pub(crate) fn levenberg_marquardt<R: FnMut(&[f64], &mut [f64])>(
    mut residuals: R,
    x0: &[f64],
    m: usize,
    iters: usize,
) -> (Vec<f64>, f64) {
    let n = x0.len();
    let sumsq = |r: &[f64]| r.iter().map(|v| v * v).sum::<f64>();
    let mut x = x0.to_vec();
    let mut r = vec![0.0; m];
    residuals(&x, &mut r);
    let mut cost = sumsq(&r);
    let mut mu = 1e-3;
    let (mut rp, mut rm) = (vec![0.0; m], vec![0.0; m]);
    let mut jac = vec![0.0; m * n];
    for _ in 0..iters {
        if cost == 0.0 {
            break;
        }
        for j in 0..n {
            let h = 1e-7 * x[j].abs().max(1.0);
            let mut xp = x.clone();
            xp[j] += h;
            residuals(&xp, &mut rp);
            xp[j] -= 2.0 * h;
            residuals(&xp, &mut rm);
            for i in 0..m {
                jac[i * n + j] = (rp[i] - rm[i]) / (2.0 * h);
            }
        }
        let mut jtj = vec![0.0; n * n];
        let mut jtr = vec![0.0; n];
        for i in 0..m {
            for a in 0..n {
                let ja = jac[i * n + a];
                jtr[a] -= ja * r[i];
                for b in 0..n {
                    jtj[a * n + b] += ja * jac[i * n + b];
                }
            }
        }
        let mut improved = false;
        for _ in 0..12 {
            let mut lhs = jtj.clone();
            for a in 0..n {
                lhs[a * n + a] += mu * (1.0 + jtj[a * n + a]);
            }
            let Some(step) = solve_linear(lhs, jtr.clone(), n) else {
                mu *= 10.0;
                continue;
            };
            let trial: Vec<f64> = x.iter().zip(&step).map(|(a, s)| a + s).collect();
            let mut rt = vec![0.0; m];
            residuals(&trial, &mut rt);
            let ct = sumsq(&rt);
            if ct < cost {
                x = trial;
                r = rt;
                cost = ct;
                mu = (mu * 0.3).max(1e-12);
                improved = true;
                break;
            }
            mu *= 10.0;
        }
        if !improved {
            break;
        }
    }
    (x, cost)
}
