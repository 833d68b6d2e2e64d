//! Generalized eigenvectors of `M_z^*`: solutions of
//! `(M_z^* - λ) f = e_q(λ z)` on truncated series.
//!
//! Matching the coefficient of `z^k` gives
//! `f_{k+1} = (kq-(k-1))/(k+1) (λ f_k + λ^k α_k/k!)` with `f_0` free. At
//! `λ = 1` the closed form is `f_k = f_0 α_k/k! + α_k/(k-1)!`, i.e.
//! `f = f_0 e_q + M_z ∂ e_q`.

use num_complex::Complex;
use num_traits::One;

use crate::error::{Error, Result};
use crate::operators::{DiagonalShiftOperator, OpKind};
use crate::qcore::{kernel_coefficients, QParam};
use crate::scalar::{cmax, creal, Real};
use crate::series::TruncatedSeries;

#[derive(Debug, Clone, PartialEq)]
pub struct JordanSolution<R: Real> {
    pub f0: Complex<R>,
    pub lambda: Complex<R>,
    pub coeffs: TruncatedSeries<R>,
    /// Max coefficient defect of the defining equation on degrees `0..N-1`.
    pub residual: R,
    /// Recursion against closed form (`solve_jordan` only).
    pub closed_form_defect: Option<R>,
    /// Residual of the candidate `f(λz)` against `e_q(λz)` (`solve_shifted`
    /// only).
    pub candidate_defect: Option<R>,
    /// Residual of the candidate against `λ e_q(λz)` (`solve_shifted` only).
    pub candidate_scaled_defect: Option<R>,
}

/// `e_q(λ z)` truncated at `n`.
pub fn q_exp_series<R: Real>(lambda: &Complex<R>, q: &QParam<R>, n: usize) -> TruncatedSeries<R> {
    TruncatedSeries::from_real(kernel_coefficients(q, n))
        .expect("nonempty")
        .scale_argument(lambda)
}

fn recurrence<R: Real>(f0: &Complex<R>, lambda: &Complex<R>, q: &QParam<R>, n: usize) -> TruncatedSeries<R> {
    let c = kernel_coefficients(q, n);
    let mut coeffs = Vec::with_capacity(n + 1);
    coeffs.push(f0.clone());
    // λ^k with 0^0 = 1
    let mut power = Complex::<R>::one();
    for k in 0..n {
        let rhs = lambda.clone() * coeffs[k].clone() + power.clone() * creal(c[k].clone());
        coeffs.push(rhs * creal(q.factor(k) / R::from_usize(k + 1)));
        power *= lambda.clone();
    }
    TruncatedSeries::new(coeffs).expect("nonempty")
}

fn defect_against<R: Real>(
    f: &TruncatedSeries<R>,
    lambda: &Complex<R>,
    rhs: &TruncatedSeries<R>,
    q: &QParam<R>,
    n: usize,
) -> Result<R> {
    if n > f.degree_bound() {
        return Err(Error::DegreeBound { needed: n, available: f.degree_bound() });
    }
    let lowered = DiagonalShiftOperator::new(OpKind::MzAdj, q).apply(f)?;
    let mut max = R::zero();
    for k in 0..n {
        let d = cmax(&(lowered.coeff(k) - lambda.clone() * f.coeff(k) - rhs.coeff(k)));
        if d > max {
            max = d;
        }
    }
    Ok(max)
}

/// Max coefficient of `(M_z^* - λ) f - e_q(λ .)` over degrees `0..N-1`.
pub fn residual<R: Real>(f: &TruncatedSeries<R>, lambda: &Complex<R>, q: &QParam<R>, n: usize) -> Result<R> {
    defect_against(f, lambda, &q_exp_series(lambda, q, n), q, n)
}

/// Solves `(M_z^* - 1) f = e_q` through degree `N`.
pub fn solve_jordan<R: Real>(f0: &Complex<R>, q: &QParam<R>, n: usize) -> Result<JordanSolution<R>> {
    if n == 0 {
        return Err(Error::Domain("degree bound must be positive".into()));
    }
    q.require_nondegenerate(n)?;
    let one = Complex::one();
    let coeffs = recurrence(f0, &one, q, n);
    let c = kernel_coefficients(q, n);
    let mut closed_form_defect = R::zero();
    for k in 1..=n {
        // α_k/(k-1)! = k α_k/k!
        let closed = f0.clone() * creal(c[k].clone()) + creal(c[k].clone() * R::from_usize(k));
        let d = cmax(&(closed - coeffs.coeff(k)));
        if d > closed_form_defect {
            closed_form_defect = d;
        }
    }
    let residual = residual(&coeffs, &one, q, n)?;
    Ok(JordanSolution {
        f0: f0.clone(),
        lambda: one,
        coeffs,
        residual,
        closed_form_defect: Some(closed_form_defect),
        candidate_defect: None,
        candidate_scaled_defect: None,
    })
}

/// Solves `(M_z^* - λ) f = e_q(λ z)` by the recurrence, and reports how the
/// rescaled candidate `f(λ z)` built from [`solve_jordan`] fares.
pub fn solve_shifted<R: Real>(
    f0: &Complex<R>,
    lambda: &Complex<R>,
    q: &QParam<R>,
    n: usize,
) -> Result<JordanSolution<R>> {
    let base = solve_jordan(f0, q, n)?;
    let coeffs = recurrence(f0, lambda, q, n);
    let residual = residual(&coeffs, lambda, q, n)?;
    let candidate = base.coeffs.scale_argument(lambda);
    let candidate_defect = residual_of(&candidate, lambda, q, n, false)?;
    let candidate_scaled_defect = residual_of(&candidate, lambda, q, n, true)?;
    Ok(JordanSolution {
        f0: f0.clone(),
        lambda: lambda.clone(),
        coeffs,
        residual,
        closed_form_defect: None,
        candidate_defect: Some(candidate_defect),
        candidate_scaled_defect: Some(candidate_scaled_defect),
    })
}

fn residual_of<R: Real>(
    f: &TruncatedSeries<R>,
    lambda: &Complex<R>,
    q: &QParam<R>,
    n: usize,
    scaled: bool,
) -> Result<R> {
    let mut rhs = q_exp_series(lambda, q, n);
    if scaled {
        rhs = rhs.scale(lambda);
    }
    defect_against(f, lambda, &rhs, q, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use num_bigint::BigInt;
    use num_complex::Complex64;
    use num_traits::Zero;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn crat(n: i64, d: i64) -> Complex<Rational> {
        creal(rat(n, d))
    }

    fn qr(n: i64, d: i64) -> QParam<Rational> {
        QParam::ratio(n, d).unwrap()
    }

    #[test]
    fn recursion_matches_closed_form() {
        for q in [qr(1, 3), qr(3, 5), qr(1, 1), qr(3, 2), qr(2, 1), qr(7, 2)] {
            for f0 in [crat(0, 1), crat(-2, 3), Complex::new(rat(1, 2), rat(5, 1))] {
                let s = solve_jordan(&f0, &q, 64).unwrap();
                assert!(s.closed_form_defect.unwrap().is_zero());
                assert!(s.residual.is_zero());
                assert_eq!(s.coeffs.coeff(0), f0);
            }
        }
    }

    #[test]
    fn limit_cases() {
        // q = 1: z e^z, f_k = 1/(k-1)!
        let s = solve_jordan(&crat(0, 1), &qr(1, 1), 30).unwrap();
        let mut inv_fact = rat(1, 1);
        assert!(s.coeffs.coeff(0).is_zero());
        for k in 1..=30 {
            assert_eq!(s.coeffs.coeff(k), creal(inv_fact.clone()));
            inv_fact /= rat(k as i64, 1);
        }
        // q = 2: f_k = k, the series of +z/(1-z)^2
        let s = solve_jordan(&crat(0, 1), &qr(2, 1), 30).unwrap();
        for k in 0..=30 {
            assert_eq!(s.coeffs.coeff(k), crat(k as i64, 1));
        }
        // f0 = 0: f = M_z ∂ e_q
        let q = qr(3, 5);
        let s = solve_jordan(&crat(0, 1), &q, 20).unwrap();
        let e = q_exp_series(&crat(1, 1), &q, 21);
        let mz_d = DiagonalShiftOperator::new(OpKind::Mz, &q).apply(&e.derivative()).unwrap();
        assert_eq!(s.coeffs, mz_d.truncate(20));
    }

    #[test]
    fn residual_examples() {
        let q = qr(3, 5);
        let zero = TruncatedSeries::zero(10);
        assert_eq!(residual(&zero, &crat(1, 1), &q, 10).unwrap(), rat(1, 1));
        let s = solve_jordan(&crat(1, 1), &q, 10).unwrap();
        let mut bump = s.coeffs.clone().into_coeffs();
        bump[3] = bump[3].clone() + crat(1, 1000);
        let r1 = residual(&TruncatedSeries::new(bump.clone()).unwrap(), &crat(1, 1), &q, 10).unwrap();
        bump[3] = bump[3].clone() + crat(1, 1000);
        let r2 = residual(&TruncatedSeries::new(bump).unwrap(), &crat(1, 1), &q, 10).unwrap();
        assert_eq!(r2, r1 * rat(2, 1));
        assert!(matches!(residual(&zero, &crat(1, 1), &q, 11), Err(Error::DegreeBound { .. })));
    }

    #[test]
    fn shifted_solutions() {
        let q = qr(3, 5);
        let f0 = crat(2, 7);
        let base = solve_jordan(&f0, &q, 30).unwrap();
        let s = solve_shifted(&f0, &crat(1, 1), &q, 30).unwrap();
        assert_eq!(s.coeffs, base.coeffs);
        assert!(s.candidate_defect.unwrap().is_zero());

        // λ = 0: M_z^* f = 1, so f_1 = 1 and the rest vanish
        let s = solve_shifted(&crat(0, 1), &crat(0, 1), &q, 12).unwrap();
        assert!(s.residual.is_zero());
        assert_eq!(s.coeffs.coeff(1), crat(1, 1));
        assert!((2..=12).all(|k| s.coeffs.coeff(k).is_zero()));

        // the rescaled candidate solves the λ-scaled equation
        let lambda = Complex::new(rat(1, 2), rat(-1, 3));
        let s = solve_shifted(&f0, &lambda, &q, 25).unwrap();
        assert!(s.residual.is_zero());
        assert!(!s.candidate_defect.unwrap().is_zero());
        assert!(s.candidate_scaled_defect.unwrap().is_zero());

        let q1 = QParam::float(1.0).unwrap();
        let s = solve_shifted(&Complex64::new(0.0, 0.0), &Complex64::new(2.0, 0.0), &q1, 40).unwrap();
        assert!(s.residual < 1e-10);
    }

    #[test]
    fn degenerate_q_rejected() {
        assert_eq!(solve_jordan(&crat(0, 1), &qr(3, 4), 10), Err(Error::DegenerateQ { n: 4 }));
        assert!(solve_jordan(&crat(0, 1), &qr(3, 4), 3).is_ok());
    }

    #[test]
    fn float_residual_small() {
        let q = QParam::float(0.6).unwrap();
        let s = solve_jordan(&Complex64::new(0.3, -0.2), &q, 60).unwrap();
        let scale = s.coeffs.coeffs().iter().map(|c| c.norm()).fold(1.0, f64::max);
        assert!(s.residual <= 1e-11 * scale);
    }

    proptest! {
        #[test]
        fn ratio_test_approaches_one_minus_q(q in 0.2f64..3.0) {
            prop_assume!((q - 1.0).abs() >= 0.15);
            let q = QParam::float(q).unwrap();
            prop_assume!(q.degenerate_at(150).is_none());
            let s = solve_jordan(&Complex64::new(0.0, 0.0), &q, 150).unwrap();
            let ratio = (s.coeffs.coeff(150) / s.coeffs.coeff(149)).norm();
            let target = (1.0 - q.to_f64()).abs();
            prop_assert!((ratio - target).abs() < 1e-2, "{} vs {}", ratio, target);
        }

        #[test]
        fn exact_residual_zero(num in 1i64..30, den in 1i64..9, f0 in -20i64..20) {
            let q = qr(num, den);
            prop_assume!(q.degenerate_at(20).is_none());
            let s = solve_jordan(&crat(f0, 3), &q, 20).unwrap();
            prop_assert!(s.residual.is_zero());
            prop_assert!(s.closed_form_defect.unwrap().is_zero());
        }
    }
}
