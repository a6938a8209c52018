use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A vector's length does not match the dimension of its space.
    DimensionMismatch { expected: usize, found: usize },
    /// A coordinate is NaN or infinite.
    NonFinite { index: usize },
    /// Malformed space description (bad exponent, empty sum, zero dimension).
    InvalidSpace(String),
    /// An argument is outside the domain of the operation.
    InvalidArgument(String),
    /// Two points of a supposedly equilateral set coincide.
    Degenerate { first: usize, second: usize },
    /// The set is not equilateral within the tolerance.
    NotEquilateral { lambda: f64, max_deviation: f64, tolerance: f64 },
    /// A bracket `[a, b]` without a sign change.
    NoSignChange { a: f64, b: f64, fa: f64, fb: f64 },
    /// An iterative method ran out of budget.
    NoConvergence { iterations: usize, residual: f64 },
    /// The order is not reachable by the available Hadamard constructions.
    UnreachableOrder(usize),
    /// A matrix entry is not `±1`, or the matrix is not square.
    InvalidMatrix(String),
    /// The Hadamard-order conditions of the two-simplex construction fail.
    Infeasible(String),
    /// A norm oracle violated its claimed sandwich inequality.
    OracleBound(String),
    /// A bipartition cover is malformed or does not split every pair.
    InvalidCover(String),
    /// A maximality hint does not match the structure of the point set.
    HintMismatch(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::NonFinite { index } => write!(f, "non-finite coordinate at index {index}"),
            Error::InvalidSpace(msg) => write!(f, "invalid space: {msg}"),
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::Degenerate { first, second } => {
                write!(f, "degenerate set: points {first} and {second} coincide")
            }
            Error::NotEquilateral { lambda, max_deviation, tolerance } => write!(
                f,
                "not equilateral: mean distance {lambda}, max deviation {max_deviation:e} > tolerance {tolerance:e}"
            ),
            Error::NoSignChange { a, b, fa, fb } => {
                write!(f, "no sign change on [{a}, {b}]: f(a) = {fa}, f(b) = {fb}")
            }
            Error::NoConvergence { iterations, residual } => write!(
                f,
                "no convergence after {iterations} iterations (best residual {residual:e})"
            ),
            Error::UnreachableOrder(n) => write!(f, "no available Hadamard construction of order {n}"),
            Error::InvalidMatrix(msg) => write!(f, "invalid matrix: {msg}"),
            Error::Infeasible(msg) => write!(f, "infeasible parameters: {msg}"),
            Error::OracleBound(msg) => write!(f, "norm oracle bound violated: {msg}"),
            Error::InvalidCover(msg) => write!(f, "invalid cover: {msg}"),
            Error::HintMismatch(msg) => write!(f, "hint does not match point set: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
