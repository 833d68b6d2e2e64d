use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid deformation parameter: {0}")]
    InvalidQ(String),

    /// `n*q == n-1`, so alpha_k vanishes for every `k > n`.
    #[error("q is degenerate at n = {n} (n*q = n-1)")]
    DegenerateQ { n: usize },

    #[error("argument outside the convergence disk: {value} exceeds radius {radius}")]
    OutOfDisk { value: f64, radius: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("product factor vanishes at k = {k}")]
    ZeroFactor { k: usize },

    /// Coefficient beyond the top degree of a finite-dimensional space.
    #[error("space is finite dimensional (top degree {top_degree}); nonzero coefficient at degree {degree}")]
    FiniteDimensional { top_degree: usize, degree: usize },

    #[error("degree bound {available} is smaller than the required {needed}")]
    DegreeBound { needed: usize, available: usize },

    #[error("insufficient degree: bound {bound} < {required}")]
    InsufficientDegree { bound: usize, required: usize },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("phi sequence vanishes at k = {k}")]
    ZeroPhi { k: usize },

    #[error("parse error: {0}")]
    Parse(String),
}
