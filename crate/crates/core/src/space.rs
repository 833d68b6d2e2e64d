//! The q-Fock-Tsallis space on truncated series: the indefinite inner
//! product `[f, g] = sum_k gamma_k conj(g_k) f_k`, the definite product with
//! weights `|gamma_k|`, the fundamental symmetry and the reproducing property.
//!
//! The fundamental decomposition is the monomial one: `z^k` is a positive
//! direction when `gamma_k > 0` and a negative one otherwise. For degenerate
//! `q = (k-1)/k` the space has top degree `k`, and series carrying nonzero
//! coefficients above it are rejected.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::qcore::{kernel_coefficients, CoeffSequence, KreinSignature, QParam};
use crate::scalar::{creal, Real};
use crate::series::TruncatedSeries;

/// Weights `gamma_k` for a fixed `q`, up to a working degree.
#[derive(Debug, Clone, PartialEq)]
pub struct InnerProductContext<R: Real> {
    q: QParam<R>,
    weights: Vec<R>,
    max_degree: usize,
}

impl<R: Real> InnerProductContext<R> {
    pub fn new(q: &QParam<R>, max_degree: usize) -> Self {
        let seq = CoeffSequence::new(q, max_degree);
        let weights = seq.gammas.into_iter().map_while(|g| g).collect();
        Self { q: q.clone(), weights, max_degree }
    }

    pub fn q(&self) -> &QParam<R> {
        &self.q
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Top degree of a finite-dimensional space (`q = (k-1)/k` gives `k`).
    pub fn top_degree(&self) -> Option<usize> {
        (self.weights.len() <= self.max_degree).then(|| self.weights.len() - 1)
    }

    pub fn weight(&self, k: usize) -> Option<&R> {
        self.weights.get(k)
    }

    pub fn weights(&self) -> &[R] {
        &self.weights
    }

    pub fn signature(&self) -> KreinSignature {
        let signs: Vec<i8> = self.weights.iter().map(|g| if g.is_negative() { -1 } else { 1 }).collect();
        let n_plus = signs.iter().filter(|&&s| s > 0).count();
        let first_flip = (1..signs.len()).find(|&k| signs[k] != signs[k - 1]);
        KreinSignature { n_minus: signs.len() - n_plus, n_plus, signs, first_flip }
    }

    fn check(&self, f: &TruncatedSeries<R>) -> Result<()> {
        if f.degree_bound() > self.max_degree {
            return Err(Error::DegreeBound { needed: f.degree_bound(), available: self.max_degree });
        }
        if let Some(top) = self.top_degree() {
            if let Some(degree) = f.degree().filter(|&d| d > top) {
                return Err(Error::FiniteDimensional { top_degree: top, degree });
            }
        }
        Ok(())
    }

    fn weighted_sum(
        &self,
        f: &TruncatedSeries<R>,
        g: &TruncatedSeries<R>,
        weight: impl Fn(&R) -> R,
    ) -> Result<Complex<R>> {
        self.check(f)?;
        self.check(g)?;
        let n = f.coeffs().len().min(g.coeffs().len()).min(self.weights.len());
        Ok((0..n)
            .filter(|&k| !f.coeffs()[k].is_zero() && !g.coeffs()[k].is_zero())
            .fold(Complex::zero(), |acc, k| {
                acc + f.coeffs()[k].clone() * g.coeffs()[k].conj() * creal(weight(&self.weights[k]))
            }))
    }
}

/// `[f, g] = sum_k gamma_k conj(g_k) f_k`; linear in `f`, antilinear in `g`.
pub fn indefinite_inner<R: Real>(
    f: &TruncatedSeries<R>,
    g: &TruncatedSeries<R>,
    ctx: &InnerProductContext<R>,
) -> Result<Complex<R>> {
    ctx.weighted_sum(f, g, R::clone)
}

/// `<f, g> = sum_k |gamma_k| conj(g_k) f_k`, the Hilbert-space product of the
/// monomial fundamental decomposition.
pub fn definite_inner<R: Real>(
    f: &TruncatedSeries<R>,
    g: &TruncatedSeries<R>,
    ctx: &InnerProductContext<R>,
) -> Result<Complex<R>> {
    ctx.weighted_sum(f, g, R::abs)
}

/// `J f`: flips the coefficients at indices with `gamma_k < 0`.
pub fn apply_fundamental_symmetry<R: Real>(
    f: &TruncatedSeries<R>,
    ctx: &InnerProductContext<R>,
) -> Result<TruncatedSeries<R>> {
    ctx.check(f)?;
    let coeffs = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| match ctx.weight(k) {
            Some(g) if g.is_negative() => -c.clone(),
            _ => c.clone(),
        })
        .collect();
    TruncatedSeries::new(coeffs)
}

/// The kernel slice `K_q(., w) = sum_k alpha_k/k! conj(w)^k z^k` truncated at
/// `degree_bound`.
pub fn kernel_slice<R: Real>(w: &Complex<R>, q: &QParam<R>, degree_bound: usize) -> TruncatedSeries<R> {
    let coeffs = kernel_coefficients(q, degree_bound).into_iter().map(creal).collect();
    TruncatedSeries::new(coeffs)
        .expect("kernel slice has at least one coefficient")
        .scale_argument(&w.conj())
}

/// `[f, K_q(., z)]`, which equals `f(z)` for polynomials of degree at most
/// the bound of `f`.
pub fn reproduce<R: Real>(
    f: &TruncatedSeries<R>,
    z: &Complex<R>,
    ctx: &InnerProductContext<R>,
) -> Result<Complex<R>> {
    let slice = kernel_slice(z, ctx.q(), f.degree_bound());
    indefinite_inner(f, &slice, ctx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{gamma, sign_signature};
    use crate::scalar::Rational;
    use num_bigint::BigInt;
    use num_complex::Complex64;
    use num_traits::Signed;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn qr(n: i64, d: i64) -> QParam<Rational> {
        QParam::ratio(n, d).unwrap()
    }

    fn mono(k: usize, n: usize) -> TruncatedSeries<Rational> {
        TruncatedSeries::monomial(k, n)
    }

    #[test]
    fn monomials_are_orthogonal_with_gamma_weights() {
        let q = qr(3, 5);
        let ctx = InnerProductContext::new(&q, 12);
        for n in 0..=12 {
            for k in 0..=12 {
                let v = indefinite_inner(&mono(n, 12), &mono(k, 12), &ctx).unwrap();
                let expected = if n == k { gamma(k, &q).unwrap() } else { rat(0, 1) };
                assert_eq!(v, creal(expected));
            }
        }
        for q in [qr(1, 3), qr(2, 1), qr(7, 3)] {
            let ctx = InnerProductContext::new(&q, 4);
            assert_eq!(indefinite_inner(&mono(0, 4), &mono(0, 4), &ctx).unwrap(), creal(rat(1, 1)));
        }
        let ctx = InnerProductContext::new(&qr(3, 4), 6);
        assert_eq!(indefinite_inner(&mono(2, 6), &mono(2, 6), &ctx).unwrap(), creal(rat(8, 3)));
    }

    #[test]
    fn definite_examples() {
        let ctx = InnerProductContext::new(&qr(1, 1), 5);
        assert_eq!(definite_inner(&mono(3, 5), &mono(3, 5), &ctx).unwrap(), creal(rat(6, 1)));
        let zero = TruncatedSeries::<Rational>::zero(5);
        assert!(definite_inner(&zero, &zero, &ctx).unwrap().is_zero());

        // all signs positive for q >= 1: both products agree
        let q = qr(3, 2);
        assert_eq!(sign_signature(&q, 8).unwrap().n_minus, 0);
        let ctx = InnerProductContext::new(&q, 8);
        let f = TruncatedSeries::from_real((0..9).map(|k| rat(k as i64 - 3, 2)).collect()).unwrap();
        let g = TruncatedSeries::from_real((0..9).map(|k| rat(1, k as i64 + 1)).collect()).unwrap();
        assert_eq!(definite_inner(&f, &g, &ctx).unwrap(), indefinite_inner(&f, &g, &ctx).unwrap());
    }

    #[test]
    fn fundamental_symmetry_examples() {
        let f = TruncatedSeries::from_real((0..11).map(|k| rat(k as i64 + 1, 3)).collect()).unwrap();
        let ctx = InnerProductContext::new(&qr(1, 1), 10);
        assert_eq!(apply_fundamental_symmetry(&f, &ctx).unwrap(), f);

        let ctx = InnerProductContext::new(&qr(3, 5), 10);
        let jf = apply_fundamental_symmetry(&f, &ctx).unwrap();
        assert_eq!(apply_fundamental_symmetry(&jf, &ctx).unwrap(), f);
        // oracle: sign of prod_{n<k} (0.6 n - (n-1))
        for k in 0..=10usize {
            let negatives = (1..k).filter(|&n| 3 * n < 5 * (n - 1)).count();
            let flipped = negatives % 2 == 1;
            assert_eq!(jf.coeff(k) == -f.coeff(k), flipped, "k = {k}");
        }
        assert_eq!(ctx.signature(), sign_signature(&qr(3, 5), 10).unwrap());
    }

    #[test]
    fn reproduce_examples() {
        let q = qr(3, 5);
        let ctx = InnerProductContext::new(&q, 10);
        let z = Complex::new(rat(1, 5), rat(-1, 7));
        let one = TruncatedSeries::constant(Complex::new(rat(1, 1), rat(0, 1)), 10);
        assert_eq!(reproduce(&one, &z, &ctx).unwrap(), creal(rat(1, 1)));
        for m in 0..=10 {
            let mut zm = Complex::new(rat(1, 1), rat(0, 1));
            for _ in 0..m {
                zm *= z.clone();
            }
            assert_eq!(reproduce(&mono(m, 10), &z, &ctx).unwrap(), zm);
        }
    }

    #[test]
    fn reproduce_random_degree_ten_float() {
        let q = QParam::float(0.6).unwrap();
        let ctx = InnerProductContext::new(&q, 10);
        let coeffs: Vec<Complex64> = (0..11)
            .map(|k| Complex64::new((k as f64 * 0.37).sin(), (k as f64 * 1.3).cos()))
            .collect();
        let f = TruncatedSeries::new(coeffs.clone()).unwrap();
        let z = Complex64::new(0.2, 0.0);
        let brute: Complex64 = coeffs.iter().enumerate().map(|(k, c)| c * z.powi(k as i32)).sum();
        assert!((reproduce(&f, &z, &ctx).unwrap() - brute).norm() < 1e-10);
    }

    #[test]
    fn kernel_slice_matches_kernel_eval() {
        let q = QParam::float(0.7).unwrap();
        let w = Complex64::new(0.3, -0.4);
        let z = Complex64::new(-0.5, 0.2);
        let slice = kernel_slice(&w, &q, 40);
        let direct = crate::qcore::kernel_eval(&z, &w, &q, 40).unwrap();
        assert!((slice.eval(&z) - direct).norm() < 1e-14);
    }

    #[test]
    fn degree_and_dimension_limits() {
        let ctx = InnerProductContext::new(&qr(3, 5), 4);
        assert_eq!(
            indefinite_inner(&mono(1, 6), &mono(1, 4), &ctx),
            Err(Error::DegreeBound { needed: 6, available: 4 })
        );
        let ctx = InnerProductContext::new(&qr(3, 4), 10);
        assert_eq!(ctx.top_degree(), Some(4));
        assert!(indefinite_inner(&mono(4, 10), &mono(4, 10), &ctx).is_ok());
        assert_eq!(
            indefinite_inner(&mono(5, 10), &mono(1, 10), &ctx),
            Err(Error::FiniteDimensional { top_degree: 4, degree: 5 })
        );
        // kernel slices vanish above the top degree, so they are accepted
        let slice = kernel_slice(&Complex::new(rat(1, 1), rat(0, 1)), &qr(3, 4), 10);
        assert!(definite_inner(&slice, &slice, &ctx).is_ok());
        assert_eq!(InnerProductContext::new(&qr(0, 1), 5).top_degree(), Some(1));
        assert_eq!(InnerProductContext::new(&qr(3, 5), 5).top_degree(), None);
    }

    #[test]
    fn krein_space_has_negative_squares() {
        let ctx = InnerProductContext::new(&qr(3, 5), 10);
        let v = indefinite_inner(&mono(4, 10), &mono(4, 10), &ctx).unwrap();
        assert!(v.re.is_negative());
        let d = definite_inner(&mono(4, 10), &mono(4, 10), &ctx).unwrap();
        assert_eq!(d.re, -v.re);
    }

    fn exact_series(n: usize) -> impl Strategy<Value = TruncatedSeries<Rational>> {
        proptest::collection::vec((-20i64..20, -20i64..20, 1i64..9), n + 1).prop_map(|v| {
            TruncatedSeries::new(
                v.into_iter()
                    .map(|(a, b, d)| Complex::new(rat(a, d), rat(b, d)))
                    .collect(),
            )
            .unwrap()
        })
    }

    fn exact_scalar() -> impl Strategy<Value = Complex<Rational>> {
        (-30i64..30, -30i64..30, 1i64..7).prop_map(|(a, b, d)| Complex::new(rat(a, d), rat(b, d)))
    }

    fn float_series(n: usize) -> impl Strategy<Value = TruncatedSeries<f64>> {
        proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n + 1).prop_map(|v| {
            TruncatedSeries::new(v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect()).unwrap()
        })
    }

    proptest! {
        #[test]
        fn conjugate_symmetric_and_sesquilinear(f in exact_series(8), g in exact_series(8),
                                                lam in exact_scalar(), mu in exact_scalar()) {
            let ctx = InnerProductContext::new(&qr(1, 3), 8);
            let fg = indefinite_inner(&f, &g, &ctx).unwrap();
            prop_assert_eq!(indefinite_inner(&g, &f, &ctx).unwrap(), fg.conj());
            let lhs = indefinite_inner(&f.scale(&lam), &g.scale(&mu), &ctx).unwrap();
            prop_assert_eq!(lhs, mu.conj() * lam * fg);
        }

        #[test]
        fn j_compatibility(f in float_series(15), g in float_series(15)) {
            let ctx = InnerProductContext::new(&QParam::float(0.6).unwrap(), 15);
            let direct = indefinite_inner(&f, &g, &ctx).unwrap();
            let via_j = definite_inner(&f, &apply_fundamental_symmetry(&g, &ctx).unwrap(), &ctx).unwrap();
            let via_jf = definite_inner(&apply_fundamental_symmetry(&f, &ctx).unwrap(), &g, &ctx).unwrap();
            let scale = direct.norm().max(1.0);
            prop_assert!((direct - via_j).norm() <= 1e-12 * scale);
            prop_assert!((direct - via_jf).norm() <= 1e-12 * scale);
        }

        #[test]
        fn cauchy_schwarz_definite(f in float_series(12), g in float_series(12)) {
            let ctx = InnerProductContext::new(&QParam::float(0.45).unwrap(), 12);
            let fg = definite_inner(&f, &g, &ctx).unwrap().norm();
            let ff = definite_inner(&f, &f, &ctx).unwrap().re;
            let gg = definite_inner(&g, &g, &ctx).unwrap().re;
            prop_assert!(ff >= 0.0 && gg >= 0.0);
            prop_assert!(fg * fg <= ff * gg * (1.0 + 1e-12));
        }

        #[test]
        fn reproduces_exactly(f in exact_series(10), z in exact_scalar()) {
            let z = Complex::new(z.re / rat(40, 1), z.im / rat(40, 1));
            let ctx = InnerProductContext::new(&qr(3, 2), 10);
            prop_assert_eq!(reproduce(&f, &z, &ctx).unwrap(), f.eval(&z));
        }
    }
}
