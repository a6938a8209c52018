//! Hadamard matrices (Sylvester, Paley for prime `q ≡ 3 mod 4`, Kronecker
//! products) in exact integer arithmetic, and the simplices they induce.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::space::{root, Vector};

/// Largest order the automatic factorisation searches.
pub const MAX_AUTO_ORDER: usize = 1000;

/// A verified `±1` matrix `H` of order `n` with `H·Hᵀ = n·I`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HadamardMatrix {
    order: usize,
    /// Row-major entries, each `±1`.
    entries: Vec<i8>,
}

impl HadamardMatrix {
    /// Validates `rows` and wraps them; fails unless `H·Hᵀ = n·I`.
    pub fn from_rows(rows: &[Vec<i32>]) -> Result<Self> {
        if !verify_hadamard(rows)? {
            return Err(Error::InvalidMatrix("H·Hᵀ ≠ n·I".into()));
        }
        let order = rows.len();
        let entries = rows.iter().flatten().map(|&x| x as i8).collect();
        Ok(HadamardMatrix { order, entries })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> i32 {
        i32::from(self.entries[i * self.order + j])
    }

    pub fn row(&self, i: usize) -> &[i8] {
        &self.entries[i * self.order..(i + 1) * self.order]
    }

    pub fn rows(&self) -> Vec<Vec<i32>> {
        (0..self.order).map(|i| self.row(i).iter().map(|&x| i32::from(x)).collect()).collect()
    }

    pub fn identity_one() -> Self {
        HadamardMatrix { order: 1, entries: vec![1] }
    }

    pub fn sylvester_two() -> Self {
        HadamardMatrix { order: 2, entries: vec![1, 1, 1, -1] }
    }

    fn is_hadamard(&self) -> bool {
        let n = self.order;
        (0..n).all(|i| {
            (i..n).all(|j| {
                let dot: i64 = self
                    .row(i)
                    .iter()
                    .zip(self.row(j))
                    .map(|(&a, &b)| i64::from(a) * i64::from(b))
                    .sum();
                dot == if i == j { n as i64 } else { 0 }
            })
        })
    }
}

/// `true` iff `M·Mᵀ = n·I` exactly. Errors on non-square input or entries other than `±1`.
pub fn verify_hadamard(m: &[Vec<i32>]) -> Result<bool> {
    let n = m.len();
    if n == 0 {
        return Err(Error::InvalidMatrix("empty matrix".into()));
    }
    for (i, row) in m.iter().enumerate() {
        if row.len() != n {
            return Err(Error::InvalidMatrix(format!("row {i} has length {}, expected {n}", row.len())));
        }
        if let Some(j) = row.iter().position(|&x| x != 1 && x != -1) {
            return Err(Error::InvalidMatrix(format!("entry ({i}, {j}) = {} is not ±1", row[j])));
        }
    }
    let h = HadamardMatrix { order: n, entries: m.iter().flatten().map(|&x| x as i8).collect() };
    Ok(h.is_hadamard())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HadamardMethod {
    Auto,
    Sylvester,
    Paley,
    Kronecker,
}

/// `H1 ⊗ H2`, of order `n1·n2`.
pub fn kronecker(h1: &HadamardMatrix, h2: &HadamardMatrix) -> HadamardMatrix {
    let (n1, n2) = (h1.order, h2.order);
    let n = n1 * n2;
    let mut entries = vec![0i8; n * n];
    for i1 in 0..n1 {
        for j1 in 0..n1 {
            let a = h1.entries[i1 * n1 + j1];
            for i2 in 0..n2 {
                for j2 in 0..n2 {
                    entries[(i1 * n2 + i2) * n + j1 * n2 + j2] = a * h2.entries[i2 * n2 + j2];
                }
            }
        }
    }
    let h = HadamardMatrix { order: n, entries };
    debug_assert!(h.is_hadamard());
    h
}

fn is_prime(q: usize) -> bool {
    if q < 2 {
        return false;
    }
    let mut f = 2;
    while f * f <= q {
        if q % f == 0 {
            return false;
        }
        f += 1;
    }
    true
}

/// `q` prime with `q ≡ 3 (mod 4)`, so that `q + 1` has a Paley matrix.
fn paley_prime(order: usize) -> Option<usize> {
    let q = order.checked_sub(1)?;
    (q % 4 == 3 && is_prime(q)).then_some(q)
}

/// Paley type I: `H = I + [[0, jᵀ], [−j, Q]]` with the Jacobsthal matrix
/// `Q[i][j] = χ(j − i)` of the quadratic character mod `q`.
fn paley(q: usize) -> HadamardMatrix {
    let mut is_residue = vec![false; q];
    for x in 1..q {
        is_residue[x * x % q] = true;
    }
    let chi = |x: usize| -> i8 {
        match x % q {
            0 => 0,
            r if is_residue[r] => 1,
            _ => -1,
        }
    };
    let n = q + 1;
    let mut entries = vec![0i8; n * n];
    for i in 0..n {
        for j in 0..n {
            let s = match (i, j) {
                (0, 0) => 0,
                (0, _) => 1,
                (_, 0) => -1,
                _ => chi(j + q - i),
            };
            entries[i * n + j] = s + i8::from(i == j);
        }
    }
    HadamardMatrix { order: n, entries }
}

fn sylvester(order: usize) -> Option<HadamardMatrix> {
    if !order.is_power_of_two() {
        return None;
    }
    let mut h = HadamardMatrix::identity_one();
    let two = HadamardMatrix::sylvester_two();
    while h.order < order {
        h = kronecker(&two, &h);
    }
    Some(h)
}

/// Recipe for building a matrix of a given order from the base constructions.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Recipe {
    Sylvester(usize),
    Paley(usize),
    Product(usize, usize),
}

/// Factorises `order` into Sylvester/Paley bases, preferring Sylvester,
/// then Paley, then the product with the smallest available left factor.
fn recipe(order: usize, memo: &mut Vec<Option<Option<Recipe>>>) -> Option<Recipe> {
    if let Some(Some(r)) = memo.get(order) {
        return r.clone();
    }
    let r = if order.is_power_of_two() {
        Some(Recipe::Sylvester(order))
    } else if let Some(q) = paley_prime(order) {
        Some(Recipe::Paley(q))
    } else if order % 4 != 0 {
        None
    } else {
        (2..order)
            .filter(|a| order % a == 0 && order / a >= 2)
            .find(|&a| recipe(a, memo).is_some() && recipe(order / a, memo).is_some())
            .map(|a| Recipe::Product(a, order / a))
    };
    if order < memo.len() {
        memo[order] = Some(r.clone());
    }
    r
}

fn build(r: &Recipe, memo: &mut Vec<Option<Option<Recipe>>>) -> HadamardMatrix {
    match *r {
        Recipe::Sylvester(n) => sylvester(n).expect("power of two"),
        Recipe::Paley(q) => paley(q),
        Recipe::Product(a, b) => {
            let ra = recipe(a, memo).expect("reachable factor");
            let rb = recipe(b, memo).expect("reachable factor");
            kronecker(&build(&ra, memo), &build(&rb, memo))
        }
    }
}

/// Whether [`construct_hadamard`] with [`HadamardMethod::Auto`] reaches `order`.
pub fn is_reachable_order(order: usize) -> bool {
    order >= 1 && order <= MAX_AUTO_ORDER && recipe(order, &mut vec![None; order + 1]).is_some()
}

pub fn construct_hadamard(order: usize, method: HadamardMethod) -> Result<HadamardMatrix> {
    if order == 0 {
        return Err(Error::InvalidArgument("order must be positive".into()));
    }
    if order > 2 && order % 4 != 0 {
        return Err(Error::UnreachableOrder(order));
    }
    let mut memo = vec![None; order.min(MAX_AUTO_ORDER) + 1];
    let h = match method {
        HadamardMethod::Sylvester => sylvester(order).ok_or_else(|| {
            Error::InvalidArgument(format!("Sylvester construction needs a power of two, got {order}"))
        })?,
        HadamardMethod::Paley => {
            let q = paley_prime(order).ok_or_else(|| {
                Error::InvalidArgument(format!("Paley construction needs order − 1 prime ≡ 3 (mod 4), got {order}"))
            })?;
            paley(q)
        }
        HadamardMethod::Kronecker => {
            if order > MAX_AUTO_ORDER {
                return Err(Error::UnreachableOrder(order));
            }
            let (a, b) = (2..order)
                .filter(|a| order % a == 0 && order / a >= 2)
                .find(|&a| recipe(a, &mut memo).is_some() && recipe(order / a, &mut memo).is_some())
                .map(|a| (a, order / a))
                .ok_or_else(|| {
                    Error::InvalidArgument(format!("order {order} is not a product of two reachable orders"))
                })?;
            let ra = recipe(a, &mut memo).expect("checked");
            let rb = recipe(b, &mut memo).expect("checked");
            kronecker(&build(&ra, &mut memo), &build(&rb, &mut memo))
        }
        HadamardMethod::Auto => {
            if order == 1 {
                HadamardMatrix::identity_one()
            } else if order > MAX_AUTO_ORDER {
                return Err(Error::UnreachableOrder(order));
            } else {
                let r = recipe(order, &mut memo).ok_or(Error::UnreachableOrder(order))?;
                build(&r, &mut memo)
            }
        }
    };
    if !h.is_hadamard() {
        return Err(Error::InvalidMatrix(format!("construction of order {order} failed verification")));
    }
    Ok(h)
}

/// The rows `h₁, …, hₙ ∈ {±1}^{n−1}` of a normalised Hadamard matrix with
/// its all-ones first column removed.
#[derive(Debug, Clone, PartialEq)]
pub struct HadamardSimplex {
    order: usize,
    vertices: Vec<Vec<i8>>,
}

impl HadamardSimplex {
    pub fn order(&self) -> usize {
        self.order
    }

    /// Vertices as `±1` integer rows of length `n − 1`.
    pub fn vertices(&self) -> &[Vec<i8>] {
        &self.vertices
    }

    /// Vertices embedded in `ℝ^{n−1}`. Empty coordinate lists (order 1) are skipped.
    pub fn real_vertices(&self) -> Vec<Vector> {
        self.vertices
            .iter()
            .filter(|v| !v.is_empty())
            .map(|v| Vector::from_raw(v.iter().map(|&x| f64::from(x)).collect()))
            .collect()
    }

    /// Common `ℓp` distance `n^{1/p}·2^{1−1/p}` between distinct vertices.
    pub fn lp_edge(&self, p: f64) -> f64 {
        root(self.order as f64, p) * libm::exp2(1.0 - 1.0 / p)
    }

    /// Common `ℓp` norm `(n−1)^{1/p}` of the vertices.
    pub fn lp_radius(&self, p: f64) -> f64 {
        root((self.order - 1) as f64, p)
    }
}

/// Hamming distance between two `±1` rows.
pub fn hamming(a: &[i8], b: &[i8]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

pub fn to_simplex(h: &HadamardMatrix) -> HadamardSimplex {
    let n = h.order;
    let vertices = (0..n)
        .map(|i| {
            let row = h.row(i);
            let s = row[0];
            row[1..].iter().map(|&x| x * s).collect()
        })
        .collect();
    HadamardSimplex { order: n, vertices }
}
