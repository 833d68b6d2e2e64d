//! Degree-bounded formal power series with complex scalar or complex matrix
//! coefficients.
//!
//! The degree bound is explicit: a series with bound `N` stores exactly
//! `N + 1` coefficients, and trailing zeros are meaningful. Binary operations
//! on series of different bounds return a result with the smaller bound.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::qcore::{check_disk, kernel_is_polynomial, QParam};
use crate::scalar::{cnorm_sqr, creal, Real};

pub type CMatrix<R> = DMatrix<Complex<R>>;

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries<R: Real> {
    coeffs: Vec<Complex<R>>,
}

impl<R: Real> TruncatedSeries<R> {
    /// Series whose degree bound is `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<Complex<R>>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Shape("a series needs at least one coefficient".into()));
        }
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: Vec<R>) -> Result<Self> {
        Self::new(coeffs.into_iter().map(creal).collect())
    }

    pub fn zero(degree_bound: usize) -> Self {
        Self { coeffs: vec![Complex::zero(); degree_bound + 1] }
    }

    pub fn constant(c: Complex<R>, degree_bound: usize) -> Self {
        let mut s = Self::zero(degree_bound);
        s.coeffs[0] = c;
        s
    }

    /// `z^k` with the given bound; `k > degree_bound` gives the zero series.
    pub fn monomial(k: usize, degree_bound: usize) -> Self {
        let mut s = Self::zero(degree_bound);
        if k <= degree_bound {
            s.coeffs[k] = Complex::one();
        }
        s
    }

    pub fn degree_bound(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex<R>] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex<R>> {
        self.coeffs
    }

    /// Coefficient of `z^k`, zero above the bound.
    pub fn coeff(&self, k: usize) -> Complex<R> {
        self.coeffs.get(k).cloned().unwrap_or_else(Complex::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Largest index with a nonzero coefficient.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    /// Keeps degrees `0..=bound` (pads with zeros when the bound grows).
    pub fn truncate(&self, bound: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(bound + 1, Complex::zero());
        Self { coeffs }
    }

    pub fn scale(&self, c: &Complex<R>) -> Self {
        Self { coeffs: self.coeffs.iter().map(|x| x.clone() * c.clone()).collect() }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&Complex<R>, &Complex<R>) -> Complex<R>) -> Self {
        let n = self.coeffs.len().min(other.coeffs.len());
        Self { coeffs: (0..n).map(|k| f(&self.coeffs[k], &other.coeffs[k])).collect() }
    }

    /// Cauchy product truncated at the smaller bound.
    pub fn cauchy(&self, other: &Self) -> Self {
        let n = self.coeffs.len().min(other.coeffs.len());
        let coeffs = (0..n)
            .map(|k| {
                (0..=k).fold(Complex::zero(), |acc, i| {
                    acc + self.coeffs[i].clone() * other.coeffs[k - i].clone()
                })
            })
            .collect();
        Self { coeffs }
    }

    /// Horner evaluation of the partial sum at `z`.
    pub fn eval(&self, z: &Complex<R>) -> Complex<R> {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex::zero(), |acc, c| acc * z.clone() + c.clone())
    }

    /// `f(lambda z)`: coefficient `k` is multiplied by `lambda^k`.
    pub fn scale_argument(&self, lambda: &Complex<R>) -> Self {
        let mut power = Complex::one();
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            coeffs.push(c.clone() * power.clone());
            power *= lambda.clone();
        }
        Self { coeffs }
    }

    /// Termwise derivative; the bound drops by one (a constant maps to the
    /// zero series of bound 0).
    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::zero(0);
        }
        let coeffs = (1..self.coeffs.len())
            .map(|k| self.coeffs[k].clone() * creal(R::from_usize(k)))
            .collect();
        Self { coeffs }
    }

    /// Component-wise maximum modulus `max_k max(|re|, |im|)` of `self - other`
    /// over the common degree range.
    pub fn max_defect(&self, other: &Self) -> R {
        let diff = self - other;
        diff.coeffs.iter().map(crate::scalar::cmax).fold(R::zero(), |m, x| if x > m { x } else { m })
    }
}

impl<R: Real> Add for &TruncatedSeries<R> {
    type Output = TruncatedSeries<R>;
    fn add(self, rhs: Self) -> TruncatedSeries<R> {
        self.zip_with(rhs, |a, b| a.clone() + b.clone())
    }
}

impl<R: Real> Sub for &TruncatedSeries<R> {
    type Output = TruncatedSeries<R>;
    fn sub(self, rhs: Self) -> TruncatedSeries<R> {
        self.zip_with(rhs, |a, b| a.clone() - b.clone())
    }
}

impl<R: Real> Mul for &TruncatedSeries<R> {
    type Output = TruncatedSeries<R>;
    fn mul(self, rhs: Self) -> TruncatedSeries<R> {
        self.cauchy(rhs)
    }
}

impl<R: Real> Neg for &TruncatedSeries<R> {
    type Output = TruncatedSeries<R>;
    fn neg(self) -> TruncatedSeries<R> {
        TruncatedSeries { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }
}

/// Power series with `n x m` complex matrix coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixSeries<R: Real> {
    coeffs: Vec<CMatrix<R>>,
    shape: (usize, usize),
}

impl<R: Real> MatrixSeries<R> {
    pub fn new(coeffs: Vec<CMatrix<R>>, shape: (usize, usize)) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Shape("a series needs at least one coefficient".into()));
        }
        if let Some((k, m)) = coeffs.iter().enumerate().find(|(_, m)| m.shape() != shape) {
            return Err(Error::Shape(format!(
                "coefficient {k} has shape {:?}, expected {shape:?}",
                m.shape()
            )));
        }
        Ok(Self { coeffs, shape })
    }

    pub fn zero(shape: (usize, usize), degree_bound: usize) -> Self {
        Self { coeffs: vec![CMatrix::zeros(shape.0, shape.1); degree_bound + 1], shape }
    }

    /// A `1 x 1` matrix series from a scalar series.
    pub fn from_scalar(f: &TruncatedSeries<R>) -> Self {
        let coeffs = f.coeffs().iter().map(|c| CMatrix::from_element(1, 1, c.clone())).collect();
        Self { coeffs, shape: (1, 1) }
    }

    pub fn shape(&self) -> (usize, usize) {
        self.shape
    }

    pub fn degree_bound(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[CMatrix<R>] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &CMatrix<R> {
        &self.coeffs[k]
    }

    /// Scalar series of entry `(i, j)`.
    pub fn entry(&self, i: usize, j: usize) -> TruncatedSeries<R> {
        TruncatedSeries { coeffs: self.coeffs.iter().map(|m| m[(i, j)].clone()).collect() }
    }

    /// Scales coefficient `k` by `weights[k]`.
    pub fn weighted(&self, weights: &[R]) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .zip(weights)
            .map(|(m, w)| m.map(|x| x * creal(w.clone())))
            .collect();
        Self { coeffs, shape: self.shape }
    }

    pub fn eval(&self, z: &Complex<R>) -> CMatrix<R> {
        self.coeffs
            .iter()
            .rev()
            .fold(CMatrix::zeros(self.shape.0, self.shape.1), |acc, c| {
                acc.map(|x| x * z.clone()) + c
            })
    }

    pub fn max_defect(&self, other: &Self) -> R {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .flat_map(|(a, b)| (a - b).iter().map(crate::scalar::cmax).collect::<Vec<_>>())
            .fold(R::zero(), |m, x| if x > m { x } else { m })
    }
}

/// Squared Frobenius norm, the safe-side estimate of the spectral norm.
pub fn frobenius_sqr<R: Real>(a: &CMatrix<R>) -> R {
    a.iter().fold(R::zero(), |acc, x| acc + cnorm_sqr(x))
}

/// `sum_{k=0}^{trunc} alpha_k/k! (zA)^k`, the truncated `e_q(zA)`.
///
/// Requires `|z| ||A||_F < 1/|1-q|` unless the series terminates within
/// `trunc` (polynomial kernel) or `q = 1`.
pub fn matrix_q_exp<R: Real>(
    a: &CMatrix<R>,
    z: &Complex<R>,
    q: &QParam<R>,
    trunc: usize,
) -> Result<CMatrix<R>> {
    if !a.is_square() {
        return Err(Error::Shape(format!("matrix_q_exp needs a square matrix, got {:?}", a.shape())));
    }
    if !kernel_is_polynomial(q, trunc) {
        check_disk(&(cnorm_sqr(z) * frobenius_sqr(a)), q)?;
    }
    let n = a.nrows();
    let za = a.map(|x| x * z.clone());
    let mut term = CMatrix::<R>::identity(n, n);
    let mut sum = term.clone();
    for k in 0..trunc {
        let scale = creal(q.factor(k) / R::from_usize(k + 1));
        term = (&term * &za).map(|x| x * scale.clone());
        sum += &term;
    }
    Ok(sum)
}
