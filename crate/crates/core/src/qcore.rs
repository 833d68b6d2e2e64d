//! Scalar Tsallis functions, the coefficient sequences `alpha_k` and
//! `gamma_k`, kernel evaluation, convergence radii and the classification of
//! the space induced by a deformation parameter `q`.
//!
//! The kernel coefficients are
//!
//! ```text
//! alpha_0 = alpha_1 = 1,   alpha_k = prod_{n=1}^{k-1} (n q - (n - 1)),
//! K_q(z, w) = sum_k alpha_k / k! (z conj(w))^k,
//! ```
//!
//! and the inner-product weight of `z^k` is `gamma_k = k! / alpha_k`.

use num_complex::{Complex, Complex64};
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{cnorm_sqr, creal, parse_rational, Rational, Real, DEGENERACY_EPS};

/// Validated deformation parameter.
///
/// `q > 0` for every operation on the space; `q = 0` is accepted only as the
/// degenerate linear limit (see [`classify`]).
#[derive(Debug, Clone, PartialEq)]
pub struct QParam<R: Real> {
    q: R,
}

impl<R: Real> QParam<R> {
    pub fn new(q: R) -> Result<Self> {
        if q.is_negative() {
            return Err(Error::InvalidQ(format!("q = {} must be non-negative", q.render())));
        }
        Ok(Self { q })
    }

    pub fn value(&self) -> &R {
        &self.q
    }

    pub fn to_f64(&self) -> f64 {
        self.q.to_f64()
    }

    /// The factor `n q - (n - 1)`. `factor(0) = 1`, so
    /// `alpha_{k+1} = alpha_k * factor(k)` for every `k >= 0`.
    pub fn factor(&self, n: usize) -> R {
        R::from_usize(n) * self.q.clone() - (R::from_usize(n) - R::one())
    }

    /// Whether `n q - (n - 1)` vanishes (exactly, or within the relative
    /// degeneracy epsilon in float mode).
    pub fn is_degenerate_at(&self, n: usize) -> bool {
        n >= 1 && self.factor(n).is_negligible(&R::from_usize(n), DEGENERACY_EPS)
    }

    /// First `n` in `1..=horizon` with `n q = n - 1`.
    pub fn degenerate_at(&self, horizon: usize) -> Option<usize> {
        (1..=horizon).find(|&n| self.is_degenerate_at(n))
    }

    pub fn is_one(&self) -> bool {
        (self.q.clone() - R::one()).is_negligible(&R::one(), DEGENERACY_EPS)
    }

    pub fn is_two(&self) -> bool {
        (self.q.clone() - R::from_i64(2)).is_negligible(&R::one(), DEGENERACY_EPS)
    }

    pub fn is_zero(&self) -> bool {
        self.q.is_negligible(&R::one(), DEGENERACY_EPS)
    }

    pub fn one_minus_q(&self) -> R {
        R::one() - self.q.clone()
    }

    /// Error naming the first degenerate index among `1..=horizon`.
    pub fn require_nondegenerate(&self, horizon: usize) -> Result<()> {
        match self.degenerate_at(horizon) {
            Some(n) => Err(Error::DegenerateQ { n }),
            None => Ok(()),
        }
    }
}

impl QParam<f64> {
    pub fn float(q: f64) -> Result<Self> {
        if !q.is_finite() {
            return Err(Error::InvalidQ(format!("q = {q} is not finite")));
        }
        Self::new(q)
    }
}

impl QParam<Rational> {
    /// Parses `p/r`, an integer, or a decimal literal into an exact `q`.
    pub fn parse(text: &str) -> Result<Self> {
        Self::new(parse_rational(text)?)
    }

    pub fn ratio(numer: i64, denom: i64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::InvalidQ("zero denominator".into()));
        }
        Self::new(Rational::new(numer.into(), denom.into()))
    }
}

/// The Tsallis q-exponential `[1 + (1-q) x]^{1/(1-q)}` (zero where the base
/// is negative, `exp(x)` at `q = 1`). At a base of exactly zero with `q > 1`
/// the pole yields `+inf`.
pub fn q_exp<R: Real>(x: f64, q: &QParam<R>) -> f64 {
    if q.is_one() {
        return x.exp();
    }
    let one_minus_q = 1.0 - q.to_f64();
    let base = 1.0 + one_minus_q * x;
    if base < 0.0 {
        0.0
    } else {
        base.powf(1.0 / one_minus_q)
    }
}

/// The Tsallis q-logarithm `(x^{1-q} - 1)/(1-q)`, `ln x` at `q = 1`.
pub fn q_ln<R: Real>(x: f64, q: &QParam<R>) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("q-logarithm needs x > 0, got {x}")));
    }
    if q.is_one() {
        return Ok(x.ln());
    }
    let one_minus_q = 1.0 - q.to_f64();
    Ok((x.powf(one_minus_q) - 1.0) / one_minus_q)
}

/// `alpha_k = prod_{n=1}^{k-1} (n q - (n - 1))`.
pub fn alpha<R: Real>(k: usize, q: &QParam<R>) -> R {
    (1..k).fold(R::one(), |acc, n| acc * q.factor(n))
}

/// `gamma_k = k! / alpha_k`; fails when some factor with `n <= k - 1`
/// vanishes.
pub fn gamma<R: Real>(k: usize, q: &QParam<R>) -> Result<R> {
    q.require_nondegenerate(k.saturating_sub(1))?;
    Ok(R::factorial(k) / alpha(k, q))
}

/// The sequences `alpha_k` and `gamma_k` for `k = 0..=max_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffSequence<R: Real> {
    pub alphas: Vec<R>,
    /// `None` where `alpha_k = 0` (degenerate `q`).
    pub gammas: Vec<Option<R>>,
}

impl<R: Real> CoeffSequence<R> {
    pub fn new(q: &QParam<R>, max_k: usize) -> Self {
        let mut alphas = Vec::with_capacity(max_k + 1);
        let mut gammas = Vec::with_capacity(max_k + 1);
        let mut a = R::one();
        let mut fact = R::one();
        let mut dead = false;
        for k in 0..=max_k {
            if k >= 1 {
                fact *= R::from_usize(k);
            }
            if k >= 2 {
                a *= q.factor(k - 1);
                dead |= q.is_degenerate_at(k - 1);
            }
            gammas.push((!dead).then(|| fact.clone() / a.clone()));
            alphas.push(a.clone());
        }
        Self { alphas, gammas }
    }

    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }
}

/// `gamma~_n = gamma~_0 / prod_{k=1}^n (1 + (b/a)(1 - 1/k))`: the weights for
/// which `M_z^* = (a R_0 + b I^*)/(a + b)`.
///
/// The closed form stays defined at `a + b = 0`, where it yields the
/// classical Fock weights `gamma~_0 n!`; only the operator identity needs
/// `a + b != 0` (see [`gamma_ab_recursion_defect`]).
pub fn gamma_ab<R: Real>(
    n: usize,
    a: &Complex<R>,
    b: &Complex<R>,
    gamma0: &Complex<R>,
) -> Result<Complex<R>> {
    if a.is_zero() {
        return Err(Error::Domain("a must be nonzero".into()));
    }
    let ratio = b.clone() / a.clone();
    let mut denom = Complex::<R>::one();
    for k in 1..=n {
        let kk = R::from_usize(k);
        let factor = Complex::<R>::one() + ratio.clone() * creal(R::one() - kk.recip());
        if factor.is_zero() {
            return Err(Error::ZeroFactor { k });
        }
        denom *= factor;
    }
    Ok(gamma0.clone() / denom)
}

/// Defect of the recursion
/// `gamma~_n = a/(a+b) gamma~_{n-1} + b/(a+b) gamma~_n / n` at index `n >= 1`.
pub fn gamma_ab_recursion_defect<R: Real>(
    n: usize,
    a: &Complex<R>,
    b: &Complex<R>,
    gamma0: &Complex<R>,
) -> Result<Complex<R>> {
    assert!(n >= 1, "the recursion starts at n = 1");
    if (a.clone() + b.clone()).is_zero() {
        return Err(Error::Domain("a + b must be nonzero".into()));
    }
    let cur = gamma_ab(n, a, b, gamma0)?;
    let prev = gamma_ab(n - 1, a, b, gamma0)?;
    let sum = a.clone() + b.clone();
    let rhs = a.clone() / sum.clone() * prev + b.clone() / sum * cur.clone() / creal(R::from_usize(n));
    Ok(cur - rhs)
}

/// Kernel Taylor coefficients `alpha_k / k!` for `k = 0..=trunc`.
pub fn kernel_coefficients<R: Real>(q: &QParam<R>, trunc: usize) -> Vec<R> {
    let mut out = Vec::with_capacity(trunc + 1);
    let mut c = R::one();
    for k in 0..=trunc {
        out.push(c.clone());
        c = c * q.factor(k) / R::from_usize(k + 1);
    }
    out
}

/// Whether the kernel truncated at `trunc` is already the full polynomial
/// kernel, i.e. `alpha_k = 0` for every `k > trunc`.
pub fn kernel_is_polynomial<R: Real>(q: &QParam<R>, trunc: usize) -> bool {
    q.degenerate_at(trunc).is_some()
}

/// Checks `|x| < 1/|1-q|` for a squared modulus `x_sq = |x|^2`, with the
/// float-mode margin.
pub fn check_disk<R: Real>(x_sq: &R, q: &QParam<R>) -> Result<()> {
    if q.is_one() {
        return Ok(());
    }
    let omq = q.one_minus_q();
    let scaled = x_sq.clone() * omq.clone() * omq;
    if R::inside_unit_disk(&scaled) {
        Ok(())
    } else {
        Err(Error::OutOfDisk { value: x_sq.to_f64().sqrt(), radius: radius(q) })
    }
}

/// Partial sum `sum_{k<=trunc} alpha_k/k! (z conj(w))^k` of the reproducing
/// kernel `K_q(z, w)`.
///
/// The disk condition `|z conj(w)| < 1/|1-q|` is skipped when the kernel is a
/// polynomial of degree `<= trunc`, where the partial sum is the kernel
/// itself.
pub fn kernel_eval<R: Real>(
    z: &Complex<R>,
    w: &Complex<R>,
    q: &QParam<R>,
    trunc: usize,
) -> Result<Complex<R>> {
    let x = z.clone() * w.conj();
    if !kernel_is_polynomial(q, trunc) {
        check_disk(&cnorm_sqr(&x), q)?;
    }
    let mut sum = Complex::<R>::zero();
    let mut power = Complex::<R>::one();
    let mut coeffs = kernel_coefficients(q, trunc);
    while coeffs.last().is_some_and(Zero::is_zero) {
        coeffs.pop();
    }
    for c in coeffs {
        sum += power.clone() * creal(c);
        power *= x.clone();
    }
    Ok(sum)
}

/// Radius `1/|1-q|` of the disk where `K_q(z, w)` converges in `z conj(w)`.
pub fn radius<R: Real>(q: &QParam<R>) -> f64 {
    if q.is_one() {
        f64::INFINITY
    } else {
        1.0 / q.one_minus_q().to_f64().abs()
    }
}

/// The kind of space a given `q` induces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "class", content = "degree")]
pub enum SpaceClass {
    /// `q = 1`: kernel `e^{z conj(w)}`.
    ClassicalFock,
    /// `q = 2`: kernel `1/(1 - z conj(w))`.
    Hardy,
    /// `q = (k-1)/k` with `k >= 2`: polynomial kernel of degree `k`.
    FiniteDimensional(usize),
    /// Any other `q > 1`.
    HilbertSpace,
    /// Any other `q` in `(0, 1)`: indefinite weights.
    KreinSpace,
    /// `q = 0`: kernel `1 + z conj(w)`.
    DegenerateLinear,
}

/// Classifies `q`, searching `n q = n - 1` for `n <= horizon`.
pub fn classify<R: Real>(q: &QParam<R>, horizon: usize) -> SpaceClass {
    if q.is_zero() {
        SpaceClass::DegenerateLinear
    } else if q.is_one() {
        SpaceClass::ClassicalFock
    } else if q.is_two() {
        SpaceClass::Hardy
    } else if *q.value() > R::one() {
        SpaceClass::HilbertSpace
    } else if let Some(k) = q.degenerate_at(horizon) {
        SpaceClass::FiniteDimensional(k)
    } else {
        SpaceClass::KreinSpace
    }
}

/// Sign pattern of the weights `gamma_k` and the induced monomial
/// fundamental decomposition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KreinSignature {
    pub signs: Vec<i8>,
    pub n_plus: usize,
    pub n_minus: usize,
    /// First `k` with `sign(gamma_k) != sign(gamma_{k-1})`.
    pub first_flip: Option<usize>,
}

impl KreinSignature {
    pub fn is_positive(&self, k: usize) -> bool {
        self.signs.get(k).is_some_and(|&s| s > 0)
    }
}

/// Signs of `gamma_k`, `k = 0..=n_max`, read off the factor signs of the
/// `alpha` product.
pub fn sign_signature<R: Real>(q: &QParam<R>, n_max: usize) -> Result<KreinSignature> {
    q.require_nondegenerate(n_max.saturating_sub(1))?;
    let mut signs = Vec::with_capacity(n_max + 1);
    let mut sign: i8 = 1;
    for k in 0..=n_max {
        if k >= 2 && q.factor(k - 1).is_negative() {
            sign = -sign;
        }
        signs.push(sign);
    }
    let n_plus = signs.iter().filter(|&&s| s > 0).count();
    let first_flip = (1..signs.len()).find(|&k| signs[k] != signs[k - 1]);
    Ok(KreinSignature { n_minus: signs.len() - n_plus, n_plus, signs, first_flip })
}

/// Both sides of
/// `1 + sum_n z^n prod_{k=1}^n (1 + alpha (1 - 1/k)) = (1 - (1+alpha) z)^{-1/(1+alpha)}`
/// (`e^z` when `alpha = -1`): the truncated series and the closed form.
pub fn fhab_check(alpha: Complex64, z: Complex64, trunc: usize) -> Result<(Complex64, Complex64)> {
    let one = Complex64::new(1.0, 0.0);
    let exponential = (alpha + one).norm() <= DEGENERACY_EPS;
    if !exponential {
        let arg = ((one + alpha) * z).norm();
        if !(arg < 1.0) {
            return Err(Error::OutOfDisk { value: arg, radius: 1.0 });
        }
    }
    let mut term = one;
    let mut series = one;
    for n in 1..=trunc {
        term *= z * (one + alpha * (1.0 - 1.0 / n as f64));
        series += term;
    }
    let closed = if exponential {
        z.exp()
    } else {
        (one - (one + alpha) * z).powc(-one / (alpha + one))
    };
    Ok((series, closed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn qf(q: f64) -> QParam<f64> {
        QParam::float(q).unwrap()
    }

    fn qr(n: i64, d: i64) -> QParam<Rational> {
        QParam::ratio(n, d).unwrap()
    }

    #[test]
    fn rejects_negative_q() {
        assert!(QParam::float(-0.1).is_err());
        assert!(QParam::float(f64::NAN).is_err());
        assert!(QParam::ratio(-1, 2).is_err());
        assert!(QParam::ratio(1, 0).is_err());
    }

    #[test]
    fn q_exp_examples() {
        assert_eq!(q_exp(0.0, &qf(0.5)), 1.0);
        assert!((q_exp(0.5, &qf(2.0)) - 2.0).abs() < 1e-15);
        assert_eq!(q_exp(-3.0, &qf(0.5)), 0.0);
        // q -> 0 limit is x + 1
        assert!((q_exp(1.0, &qf(0.0)) - 2.0).abs() < 1e-15);
        assert!((q_exp(1.0, &qf(1e-9)) - 2.0).abs() < 1e-8);
        assert_eq!(q_exp(0.7, &qf(1.0)), 0.7f64.exp());
    }

    #[test]
    fn q_ln_examples() {
        assert_eq!(q_ln(1.0, &qf(0.7)).unwrap(), 0.0);
        assert!((q_ln(2.0, &qf(0.0)).unwrap() - 1.0).abs() < 1e-15);
        let x = q_exp(0.3, &qf(0.6));
        assert!((q_ln(x, &qf(0.6)).unwrap() - 0.3).abs() < 1e-12);
        assert!(matches!(q_ln(0.0, &qf(0.5)), Err(Error::Domain(_))));
        assert!(matches!(q_ln(-1.0, &qf(1.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(alpha(2, &qr(3, 4)), rat(3, 4));
        assert_eq!(alpha(4, &qr(3, 4)), rat(3, 32));
        // alpha_4 / 4! is the printed z^4 kernel coefficient for q = 3/4.
        assert_eq!(alpha(4, &qr(3, 4)) / Rational::factorial(4), rat(1, 256));
        for q in [qr(1, 3), qr(5, 2), qr(0, 1)] {
            assert_eq!(alpha(0, &q), rat(1, 1));
            assert_eq!(alpha(1, &q), rat(1, 1));
        }
        // q = (k-1)/k kills everything above degree k.
        for j in 5..12 {
            assert_eq!(alpha(j, &qr(3, 4)), rat(0, 1));
        }
    }

    #[test]
    fn gamma_examples() {
        let q = qr(7, 5);
        assert_eq!(gamma(2, &q).unwrap(), rat(2, 1) / rat(7, 5));
        assert_eq!(gamma(0, &q).unwrap(), rat(1, 1));
        assert_eq!(gamma(1, &q).unwrap(), rat(1, 1));
        assert_eq!(gamma(5, &qr(1, 1)).unwrap(), rat(120, 1));
        assert_eq!(gamma(5, &qr(3, 4)), Err(Error::DegenerateQ { n: 4 }));
        assert!(gamma(4, &qr(3, 4)).is_ok());
    }

    #[test]
    fn coeff_sequence_matches_pointwise() {
        let q = qr(3, 5);
        let seq = CoeffSequence::new(&q, 20);
        assert_eq!(seq.len(), 21);
        for k in 0..=20 {
            assert_eq!(seq.alphas[k], alpha(k, &q));
            let g = seq.gammas[k].clone().unwrap();
            assert_eq!(g.clone(), gamma(k, &q).unwrap());
            assert_eq!(g * seq.alphas[k].clone(), Rational::factorial(k));
        }
        let finite = CoeffSequence::new(&qr(2, 3), 6);
        assert!(finite.gammas[3].is_some());
        assert!(finite.gammas[4].is_none());
    }

    #[test]
    fn gamma_ab_examples() {
        let one = Complex::new(rat(1, 1), rat(0, 1));
        let zero = Complex::new(rat(0, 1), rat(0, 1));
        for n in 0..8 {
            assert_eq!(gamma_ab(n, &one, &zero, &one).unwrap(), one);
        }
        let minus_one = -one.clone();
        // b/a = -1: prod (1/k) = 1/n!, the classical Fock weights.
        assert_eq!(gamma_ab(3, &one, &minus_one, &one).unwrap(), Complex::new(rat(6, 1), rat(0, 1)));
        assert!(gamma_ab_recursion_defect(3, &one, &minus_one, &one).is_err());
        // a = 2, b = -1 gives factors 1 - (1 - 1/k)/2 = (k+1)/(2k)
        let two = Complex::new(rat(2, 1), rat(0, 1));
        let g3 = gamma_ab(3, &two, &minus_one, &one).unwrap();
        assert_eq!(g3.re, rat(1, 1) / (rat(1, 1) * rat(3, 4) * rat(4, 6)));

        let q = rat(3, 7);
        let b = Complex::new(q.clone() - rat(2, 1), rat(0, 1));
        assert_eq!(gamma_ab(2, &one, &b, &one).unwrap().re, rat(2, 1) / q);
        assert!(matches!(gamma_ab(1, &zero, &one, &one), Err(Error::Domain(_))));
        // b/a = -2: factor at k = 2 is 1 - 2 * 1/2 = 0
        let b = Complex::new(rat(-2, 1), rat(0, 1));
        assert_eq!(gamma_ab(4, &one, &b, &one), Err(Error::ZeroFactor { k: 2 }));
    }

    #[test]
    fn gamma_ab_recursion_holds() {
        let a = Complex::new(rat(3, 2), rat(1, 3));
        let b = Complex::new(rat(-1, 5), rat(2, 1));
        let g0 = Complex::new(rat(7, 3), rat(0, 1));
        for n in 1..15 {
            assert!(gamma_ab_recursion_defect(n, &a, &b, &g0).unwrap().is_zero());
        }
    }

    #[test]
    fn kernel_examples() {
        let one = Complex::new(rat(1, 1), rat(0, 1));
        let k = kernel_eval(&one, &one, &qr(3, 4), 6).unwrap();
        let expected = rat(1, 1) + rat(1, 1) + rat(3, 8) + rat(1, 16) + rat(1, 256);
        assert_eq!(k, creal(expected));
        assert_eq!(k.re, rat(625, 256));

        let zero = Complex::new(rat(0, 1), rat(0, 1));
        let w = Complex::new(rat(3, 2), rat(-1, 2));
        assert_eq!(kernel_eval(&zero, &w, &qr(3, 5), 30).unwrap(), one);

        let k = kernel_eval(&Complex64::new(0.3, 0.0), &Complex64::new(0.5, 0.0), &qf(2.0), 64).unwrap();
        assert!((k.re - 1.0 / 0.85).abs() < 1e-14);
        assert_eq!(k.im, 0.0);
    }

    #[test]
    fn kernel_disk_precondition() {
        let z = Complex64::new(2.5, 0.0);
        let w = Complex64::new(1.0, 0.0);
        assert!(matches!(kernel_eval(&z, &w, &qf(0.6), 64), Err(Error::OutOfDisk { .. })));
        assert!(kernel_eval(&Complex64::new(2.49, 0.0), &w, &qf(0.6), 64).is_ok());
        // exact mode is strict: |zw| = radius fails
        let z = Complex::new(rat(5, 2), rat(0, 1));
        let w = Complex::new(rat(1, 1), rat(0, 1));
        assert!(kernel_eval(&z, &w, &qr(3, 5), 10).is_err());
        // classical Fock has no disk
        assert!(kernel_eval(&Complex64::new(40.0, 0.0), &Complex64::new(1.0, 0.0), &qf(1.0), 64).is_ok());
        // polynomial kernels are entire
        assert!(kernel_eval(&Complex64::new(40.0, 0.0), &Complex64::new(1.0, 0.0), &qf(0.75), 64).is_ok());
    }

    #[test]
    fn radius_examples() {
        assert_eq!(radius(&qf(2.0)), 1.0);
        assert_eq!(radius(&qf(1.0)), f64::INFINITY);
        assert_eq!(radius(&qf(0.5)), 2.0);
        assert_eq!(radius(&qr(3, 5)), 2.5);
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&qf(2.0), 100), SpaceClass::Hardy);
        assert_eq!(classify(&qr(3, 4), 100), SpaceClass::FiniteDimensional(4));
        assert_eq!(classify(&qf(0.75), 100), SpaceClass::FiniteDimensional(4));
        assert_eq!(classify(&qf(0.6), 100), SpaceClass::KreinSpace);
        assert_eq!(classify(&qf(1.0), 100), SpaceClass::ClassicalFock);
        assert_eq!(classify(&qf(1.5), 100), SpaceClass::HilbertSpace);
        assert_eq!(classify(&qf(0.0), 100), SpaceClass::DegenerateLinear);
        assert_eq!(classify(&qr(1, 2), 100), SpaceClass::FiniteDimensional(2));
        // detection is limited by the horizon
        assert_eq!(classify(&qr(9, 10), 5), SpaceClass::KreinSpace);
        assert_eq!(classify(&qr(9, 10), 10), SpaceClass::FiniteDimensional(10));
        // float-mode epsilon
        assert_eq!(classify(&qf(2.0 / 3.0), 100), SpaceClass::FiniteDimensional(3));
    }

    #[test]
    fn sign_signature_examples() {
        let s = sign_signature(&qf(1.5), 20).unwrap();
        assert_eq!(s.n_minus, 0);
        assert_eq!(s.n_plus, 21);
        assert_eq!(s.first_flip, None);

        let s = sign_signature(&qf(0.9), 3).unwrap();
        assert!(s.signs.iter().all(|&x| x > 0));

        // q = 0.6: factors 0.6, 0.2, -0.2, -0.6, ... so alpha_4 is the first negative.
        let s = sign_signature(&qf(0.6), 10).unwrap();
        let mut expected = Vec::new();
        for k in 0..=10usize {
            let negatives = (1..k).filter(|&n| 0.6 * n as f64 - (n as f64 - 1.0) < 0.0).count();
            expected.push(if negatives % 2 == 0 { 1 } else { -1 });
        }
        assert_eq!(s.signs, expected);
        assert_eq!(s.first_flip, Some(4));
        assert_eq!(s.n_plus + s.n_minus, 11);

        assert_eq!(sign_signature(&qr(3, 4), 8), Err(Error::DegenerateQ { n: 4 }));
    }

    #[test]
    fn fhab_examples() {
        let (s, c) = fhab_check(Complex64::new(-1.0, 0.0), Complex64::new(0.5, 0.0), 64).unwrap();
        assert!((s - 0.5f64.exp()).norm() < 1e-14);
        assert!((c - 0.5f64.exp()).norm() < 1e-14);

        let (s, c) = fhab_check(Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.0), 64).unwrap();
        assert!((s - Complex64::new(2.0, 0.0)).norm() < 1e-15);
        assert!((c - Complex64::new(2.0, 0.0)).norm() < 1e-15);

        // oracle: binomial series of (1 - x)^{-1/2} with x = 2z is sum C(2n, n) (x/4)^n
        let z = 0.2;
        let mut oracle = 0.0;
        let mut central = 1.0f64;
        for n in 0..=64 {
            if n > 0 {
                central *= (2 * n) as f64 * (2 * n - 1) as f64 / (n as f64 * n as f64);
            }
            oracle += central * (2.0 * z / 4.0f64).powi(n);
        }
        let (s, c) = fhab_check(Complex64::new(1.0, 0.0), Complex64::new(z, 0.0), 64).unwrap();
        let closed = 0.6f64.powf(-0.5);
        assert!((oracle - closed).abs() < 1e-13);
        assert!((s.re - closed).abs() < 1e-13);
        assert!((c.re - closed).abs() < 1e-13);

        assert!(fhab_check(Complex64::new(1.0, 0.0), Complex64::new(0.5, 0.0), 64).is_err());
    }
}
