//! q-rational matrix-valued functions.
//!
//! The q-Tsallis Borel transform scales `F_k` by `α_k/k!`; its inverse by
//! `γ_k = k!/α_k`. A series is q-rational when its inverse transform is a
//! classical rational function, which is tested through the block Hankel
//! matrix of the coefficients `γ_k F_k` (classical Markov parameters
//! `C A^k B` for a realization `F(z) = C e_q(zA) B`).
//!
//! The Gelfond-Leontiev variants replace `α_k/k!` by an arbitrary nonzero
//! sequence `φ_k`.

use num_complex::Complex;
use num_traits::Zero;
use rand::Rng;

use crate::error::{Error, Result};
use crate::operators::{DiagonalShiftOperator, OpKind};
use crate::qcore::{check_disk, kernel_coefficients, kernel_is_polynomial, CoeffSequence, QParam};
use crate::scalar::{cnorm_sqr, creal, cto_f64, Real};
use crate::series::{frobenius_sqr, CMatrix, MatrixSeries, TruncatedSeries};

/// `F(z) = C e_q(zA) B`, with an optional feedthrough `D` used by the
/// integration form `D + I(C e_q(zA) B)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Realization<R: Real> {
    pub c: CMatrix<R>,
    pub a: CMatrix<R>,
    pub b: CMatrix<R>,
    pub d: Option<CMatrix<R>>,
}

impl<R: Real> Realization<R> {
    pub fn new(c: CMatrix<R>, a: CMatrix<R>, b: CMatrix<R>, d: Option<CMatrix<R>>) -> Result<Self> {
        let n_state = a.nrows();
        if !a.is_square() || c.ncols() != n_state || b.nrows() != n_state {
            return Err(Error::Shape(format!(
                "C {:?}, A {:?}, B {:?} do not compose",
                c.shape(),
                a.shape(),
                b.shape()
            )));
        }
        if let Some(d) = &d {
            if d.shape() != (c.nrows(), b.ncols()) {
                return Err(Error::Shape(format!(
                    "D has shape {:?}, expected {:?}",
                    d.shape(),
                    (c.nrows(), b.ncols())
                )));
            }
        }
        Ok(Self { c, a, b, d })
    }

    pub fn state_dim(&self) -> usize {
        self.a.nrows()
    }

    /// `(n, m)`: outputs by inputs.
    pub fn shape(&self) -> (usize, usize) {
        (self.c.nrows(), self.b.ncols())
    }

    /// Classical Markov parameters `C A^k B` for `k = 0..=n`.
    pub fn markov(&self, n: usize) -> Vec<CMatrix<R>> {
        let mut out = Vec::with_capacity(n + 1);
        let mut ab = self.b.clone();
        for _ in 0..=n {
            out.push(&self.c * &ab);
            ab = &self.a * &ab;
        }
        out
    }

    pub fn to_f64(&self) -> Realization<f64> {
        let conv = |m: &CMatrix<R>| m.map(|x| cto_f64(&x));
        Realization { c: conv(&self.c), a: conv(&self.a), b: conv(&self.b), d: self.d.as_ref().map(conv) }
    }
}

/// A weight sequence `φ_k`, nonzero at every stored index.
#[derive(Debug, Clone, PartialEq)]
pub struct PhiSequence<R: Real> {
    phis: Vec<R>,
}

impl<R: Real> PhiSequence<R> {
    pub fn new(phis: Vec<R>) -> Result<Self> {
        if let Some(k) = phis.iter().position(Zero::is_zero) {
            return Err(Error::ZeroPhi { k });
        }
        Ok(Self { phis })
    }

    /// `φ_k = α_k/k!`, the q-Tsallis case.
    pub fn tsallis(q: &QParam<R>, n: usize) -> Result<Self> {
        Self::new(kernel_coefficients(q, n))
    }

    /// `φ_k = 1/k!`, the classical derivative and Borel transform.
    pub fn classical(n: usize) -> Self {
        Self { phis: (0..=n).map(|k| R::factorial(k).recip()).collect() }
    }

    /// `φ_k = 1`, the backward shift.
    pub fn ones(n: usize) -> Self {
        Self { phis: vec![R::one(); n + 1] }
    }

    pub fn phis(&self) -> &[R] {
        &self.phis
    }

    pub fn degree_bound(&self) -> usize {
        self.phis.len() - 1
    }

    fn require(&self, bound: usize) -> Result<()> {
        if self.phis.len() <= bound {
            return Err(Error::DegreeBound { needed: bound, available: self.phis.len().saturating_sub(1) });
        }
        Ok(())
    }
}

fn tsallis_weights<R: Real>(q: &QParam<R>, bound: usize) -> Result<CoeffSequence<R>> {
    q.require_nondegenerate(bound.saturating_sub(1))?;
    Ok(CoeffSequence::new(q, bound))
}

/// `(B_q F)_k = α_k/k! F_k`.
pub fn borel<R: Real>(f: &MatrixSeries<R>, q: &QParam<R>) -> Result<MatrixSeries<R>> {
    tsallis_weights(q, f.degree_bound())?;
    Ok(f.weighted(&kernel_coefficients(q, f.degree_bound())))
}

/// `(B_q^{-1} G)_k = k!/α_k G_k`.
pub fn inverse_borel<R: Real>(g: &MatrixSeries<R>, q: &QParam<R>) -> Result<MatrixSeries<R>> {
    Ok(g.weighted(&gammas(q, g.degree_bound())?))
}

fn gammas<R: Real>(q: &QParam<R>, bound: usize) -> Result<Vec<R>> {
    let seq = tsallis_weights(q, bound)?;
    Ok(seq.gammas.into_iter().map(|g| g.expect("nondegenerate")).collect())
}

fn block_hankel<R: Real>(coeffs: &[CMatrix<R>], shape: (usize, usize), rows: usize, cols: usize) -> CMatrix<R> {
    let (n, m) = shape;
    let mut h = CMatrix::zeros(rows * n, cols * m);
    for i in 0..rows {
        for j in 0..cols {
            h.view_mut((i * n, j * m), (n, m)).copy_from(&coeffs[i + j]);
        }
    }
    h
}

fn require_hankel_bound(bound: usize, rows: usize, cols: usize) -> Result<()> {
    if rows == 0 || cols == 0 {
        return Err(Error::Domain("Hankel dimensions must be positive".into()));
    }
    let required = rows + cols - 2;
    if bound < required {
        return Err(Error::InsufficientDegree { bound, required });
    }
    Ok(())
}

/// Block Hankel matrix with block `(i, j) = γ_{i+j} F_{i+j}`.
pub fn hankel<R: Real>(f: &MatrixSeries<R>, q: &QParam<R>, rows: usize, cols: usize) -> Result<CMatrix<R>> {
    require_hankel_bound(f.degree_bound(), rows, cols)?;
    let unweighted = inverse_borel(f, q)?;
    Ok(block_hankel(unweighted.coeffs(), f.shape(), rows, cols))
}

/// Number of singular values above `rel_tol * σ_max` (0 for the zero matrix).
pub fn numerical_rank<R: Real>(m: &CMatrix<R>, rel_tol: f64) -> usize {
    if m.is_empty() {
        return 0;
    }
    let mf: CMatrix<f64> = m.map(|x| cto_f64(&x));
    let sv = mf.singular_values();
    let top = sv.iter().cloned().fold(0.0, f64::max);
    if top == 0.0 || !top.is_finite() {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * top).count()
}

/// `F_k = α_k/k! C A^k B` for `k = 0..=N` (the feedthrough `D` is not part
/// of this form).
pub fn taylor_from_realization<R: Real>(r: &Realization<R>, q: &QParam<R>, n: usize) -> MatrixSeries<R> {
    MatrixSeries::new(r.markov(n), r.shape())
        .expect("realization shapes compose")
        .weighted(&kernel_coefficients(q, n))
}

/// The φ analogue `F_k = φ_k C A^k B`.
pub fn gl_taylor_from_realization<R: Real>(r: &Realization<R>, phi: &PhiSequence<R>, n: usize) -> Result<MatrixSeries<R>> {
    phi.require(n)?;
    Ok(MatrixSeries::new(r.markov(n), r.shape())
        .expect("realization shapes compose")
        .weighted(phi.phis()))
}

/// Rank-stabilization test on the two largest square Hankels the degree
/// bound allows. Returns the flag and the rank of the largest one.
///
/// In finite precision the rank of a non-rational series saturates once the
/// Hankel is ill conditioned beyond `rel_tol`, so a `false` verdict is only
/// reachable at moderate degree bounds.
pub fn is_q_rational<R: Real>(f: &MatrixSeries<R>, q: &QParam<R>, rel_tol: f64) -> Result<(bool, usize)> {
    let bound = f.degree_bound();
    if bound < 6 {
        return Err(Error::InsufficientDegree { bound, required: 6 });
    }
    let s = bound / 2 + 1;
    let big = numerical_rank(&hankel(f, q, s, s)?, rel_tol);
    let small = numerical_rank(&hankel(f, q, s - 1, s - 1)?, rel_tol);
    Ok((big == small, big))
}

/// Numerical dimension of the span of the columns of `(M_z^*)^k F`,
/// `k = 0..=depth`. Coefficients are compared on degrees `0..=N-depth`, the
/// window where every power is determined by the data. Each column vector is
/// normalized before the rank is taken.
pub fn adjoint_span_dimension<R: Real>(
    f: &MatrixSeries<R>,
    q: &QParam<R>,
    depth: usize,
    rel_tol: f64,
) -> Result<usize> {
    let bound = f.degree_bound();
    if depth > bound {
        return Err(Error::InsufficientDegree { bound, required: depth });
    }
    let window = bound - depth;
    let (n, m) = f.shape();
    let adj = DiagonalShiftOperator::new(OpKind::MzAdj, q);
    let mut vectors: Vec<Vec<Complex<f64>>> = Vec::new();
    for j in 0..m {
        for i in 0..n {
            let mut g = f.entry(i, j);
            let mut powers = vec![g.clone()];
            for _ in 0..depth {
                g = adj.apply(&g)?;
                powers.push(g.clone());
            }
            for (k, p) in powers.iter().enumerate() {
                if vectors.len() < (j * (depth + 1) + k + 1) {
                    vectors.push(vec![Complex::zero(); n * (window + 1)]);
                }
                let v = &mut vectors[j * (depth + 1) + k];
                for d in 0..=window {
                    v[i * (window + 1) + d] = cto_f64(&p.coeff(d));
                }
            }
        }
    }
    let cols: Vec<_> = vectors
        .into_iter()
        .filter_map(|v| {
            let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            (norm > 0.0).then(|| v.into_iter().map(|x| x / norm).collect::<Vec<_>>())
        })
        .collect();
    if cols.is_empty() {
        return Ok(0);
    }
    let mat = CMatrix::<f64>::from_fn(n * (window + 1), cols.len(), |r, c| cols[c][r]);
    Ok(numerical_rank(&mat, rel_tol))
}

/// `D + I(C e_q(zA) B)` evaluated at `z`, with `I z^k = z^{k+1}/(k+1)`
/// applied termwise to the series truncated at `trunc`.
pub fn integration_form_eval<R: Real>(
    r: &Realization<R>,
    q: &QParam<R>,
    z: &Complex<R>,
    trunc: usize,
) -> Result<CMatrix<R>> {
    if !kernel_is_polynomial(q, trunc) {
        check_disk(&(cnorm_sqr(z) * frobenius_sqr(&r.a)), q)?;
    }
    let (n, m) = r.shape();
    let series = taylor_from_realization(r, q, trunc);
    let mut acc = r.d.clone().unwrap_or_else(|| CMatrix::zeros(n, m));
    let mut power = z.clone();
    for (k, fk) in series.coeffs().iter().enumerate() {
        let w = power.clone() * creal(R::from_usize(k + 1).recip());
        acc += fk.map(|x| x * w.clone());
        power *= z.clone();
    }
    Ok(acc)
}

/// `(∂_φ f)_{k-1} = f_k φ_{k-1}/φ_k`; the bound drops by one.
pub fn gl_derivative<R: Real>(f: &TruncatedSeries<R>, phi: &PhiSequence<R>) -> Result<TruncatedSeries<R>> {
    let bound = f.degree_bound();
    phi.require(bound)?;
    if bound == 0 {
        return Ok(TruncatedSeries::zero(0));
    }
    let p = phi.phis();
    let coeffs = (1..=bound)
        .map(|k| f.coeff(k) * creal(p[k - 1].clone() / p[k].clone()))
        .collect();
    TruncatedSeries::new(coeffs)
}

/// `(B_φ F)_k = φ_k F_k`.
pub fn gl_borel<R: Real>(f: &MatrixSeries<R>, phi: &PhiSequence<R>) -> Result<MatrixSeries<R>> {
    phi.require(f.degree_bound())?;
    Ok(f.weighted(phi.phis()))
}

/// `(B_φ^{-1} G)_k = G_k/φ_k`.
pub fn gl_inverse_borel<R: Real>(g: &MatrixSeries<R>, phi: &PhiSequence<R>) -> Result<MatrixSeries<R>> {
    phi.require(g.degree_bound())?;
    let inv: Vec<R> = phi.phis().iter().map(R::recip).collect();
    Ok(g.weighted(&inv))
}

/// Block Hankel with block `(i, j) = F_{i+j}/φ_{i+j}`.
pub fn gl_hankel<R: Real>(f: &MatrixSeries<R>, phi: &PhiSequence<R>, rows: usize, cols: usize) -> Result<CMatrix<R>> {
    require_hankel_bound(f.degree_bound(), rows, cols)?;
    let unweighted = gl_inverse_borel(f, phi)?;
    Ok(block_hankel(unweighted.coeffs(), f.shape(), rows, cols))
}

/// A random realization with entries whose real and imaginary parts are
/// uniform in `[-1, 1]`.
pub fn random_realization<G: Rng + ?Sized>(rng: &mut G, state_dim: usize, shape: (usize, usize)) -> Realization<f64> {
    let mut draw = |r: usize, c: usize| {
        CMatrix::<f64>::from_fn(r, c, |_, _| Complex::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)))
    };
    let c = draw(shape.0, state_dim);
    let a = draw(state_dim, state_dim);
    let b = draw(state_dim, shape.1);
    Realization { c, a, b, d: None }
}

/// Draws realizations until the classical Hankel of the Markov parameters
/// has numerical rank `state_dim` at `min_tol`. Gives up after `attempts`.
pub fn random_minimal_realization<G: Rng + ?Sized>(
    rng: &mut G,
    state_dim: usize,
    shape: (usize, usize),
    min_tol: f64,
    attempts: usize,
) -> Option<Realization<f64>> {
    let size = state_dim + 1;
    (0..attempts).find_map(|_| {
        let r = random_realization(rng, state_dim, shape);
        let h = block_hankel(&r.markov(2 * size), shape, size, size);
        (numerical_rank(&h, min_tol) == state_dim).then_some(r)
    })
}
