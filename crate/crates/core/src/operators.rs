//! The shift algebra on truncated series: `M_z`, `R_0`, the integration
//! operator `I` and their adjoints in the q-Fock-Tsallis space, together with
//! the structural identities between them.
//!
//! Degree bookkeeping: a raising operator maps bound `N` to `N + 1` and a
//! lowering operator maps `N` to `N - 1` (saturating at `0`). In both cases
//! every coefficient of the output is determined by the input coefficients,
//! so truncation never contaminates the returned series.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qcore::{check_disk, kernel_is_polynomial, radius, CoeffSequence, QParam};
use crate::scalar::{cmax, cnorm_sqr, creal, Real};
use crate::series::TruncatedSeries;
use crate::space::{indefinite_inner, kernel_slice, InnerProductContext};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum OpKind {
    Mz,
    R0,
    Integ,
    MzAdj,
    R0Adj,
    IntegAdj,
}

impl OpKind {
    pub const ALL: [OpKind; 6] =
        [OpKind::Mz, OpKind::R0, OpKind::Integ, OpKind::MzAdj, OpKind::R0Adj, OpKind::IntegAdj];

    pub fn is_raising(self) -> bool {
        matches!(self, OpKind::Mz | OpKind::Integ | OpKind::R0Adj)
    }

    pub fn adjoint(self) -> OpKind {
        match self {
            OpKind::Mz => OpKind::MzAdj,
            OpKind::R0 => OpKind::R0Adj,
            OpKind::Integ => OpKind::IntegAdj,
            OpKind::MzAdj => OpKind::Mz,
            OpKind::R0Adj => OpKind::R0,
            OpKind::IntegAdj => OpKind::Integ,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            OpKind::Mz => "Mz",
            OpKind::R0 => "R0",
            OpKind::Integ => "Integ",
            OpKind::MzAdj => "MzAdj",
            OpKind::R0Adj => "R0Adj",
            OpKind::IntegAdj => "IntegAdj",
        }
    }
}

impl fmt::Display for OpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for OpKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        OpKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown operator {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalShiftOperator<R: Real> {
    pub kind: OpKind,
    pub q: QParam<R>,
}

impl<R: Real> DiagonalShiftOperator<R> {
    pub fn new(kind: OpKind, q: &QParam<R>) -> Self {
        Self { kind, q: q.clone() }
    }

    /// Image of `z^k` as `(degree, coefficient)`, or `None` when it is zero.
    pub fn on_monomial(&self, k: usize) -> Result<Option<(usize, R)>> {
        let q = &self.q;
        let lowered_denominator = |k: usize| {
            if q.is_degenerate_at(k - 1) {
                Err(Error::DegenerateQ { n: k - 1 })
            } else {
                Ok(q.factor(k - 1))
            }
        };
        Ok(match self.kind {
            OpKind::Mz => Some((k + 1, R::one())),
            OpKind::Integ => Some((k + 1, R::from_usize(k + 1).recip())),
            OpKind::R0Adj => Some((k + 1, q.factor(k) / R::from_usize(k + 1))),
            _ if k == 0 => None,
            OpKind::R0 => Some((k - 1, R::one())),
            OpKind::MzAdj => Some((k - 1, R::from_usize(k) / lowered_denominator(k)?)),
            OpKind::IntegAdj => Some((k - 1, lowered_denominator(k)?.recip())),
        })
    }

    pub fn output_bound(&self, input_bound: usize) -> usize {
        if self.kind.is_raising() {
            input_bound + 1
        } else {
            input_bound.saturating_sub(1)
        }
    }

    /// Linear extension of the monomial action. A degenerate factor is an
    /// error only where the input coefficient is nonzero.
    pub fn apply(&self, f: &TruncatedSeries<R>) -> Result<TruncatedSeries<R>> {
        let mut out = vec![Complex::zero(); self.output_bound(f.degree_bound()) + 1];
        for (k, c) in f.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if let Some((m, w)) = self.on_monomial(k)? {
                out[m] += c.clone() * creal(w);
            }
        }
        TruncatedSeries::new(out)
    }
}

/// Applies `ops` right to left: `compose(&[A, B], f) = A(B f)`.
pub fn compose<R: Real>(
    ops: &[OpKind],
    q: &QParam<R>,
    f: &TruncatedSeries<R>,
) -> Result<TruncatedSeries<R>> {
    ops.iter()
        .rev()
        .try_fold(f.clone(), |g, &k| DiagonalShiftOperator::new(k, q).apply(&g))
}

/// Maximum coefficient defect of a family of checks. `worst` is the `(n, k)`
/// pair where it occurred; checks indexed by a single degree report `(k, k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Defect<R: Real> {
    pub max: R,
    pub checked: usize,
    pub worst: Option<(usize, usize)>,
}

impl<R: Real> Default for Defect<R> {
    fn default() -> Self {
        Self { max: R::zero(), checked: 0, worst: None }
    }
}

impl<R: Real> Defect<R> {
    pub fn record(&mut self, d: R, at: (usize, usize)) {
        self.checked += 1;
        if d > self.max {
            self.max = d;
            self.worst = Some(at);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.max.is_zero()
    }

    pub fn within(&self, tol: f64) -> bool {
        self.max.to_f64() <= tol
    }
}

fn series_defect<R: Real>(a: &TruncatedSeries<R>, b: &TruncatedSeries<R>) -> R {
    let n = a.degree_bound().max(b.degree_bound());
    a.truncate(n).max_defect(&b.truncate(n))
}

/// Checks `[A z^n, z^k] = [z^n, B z^k]` for `n, k <= N`.
///
/// In a finite-dimensional space only monomials up to the top degree are
/// used, and pairs whose image leaves the space are skipped.
pub fn verify_adjoint<R: Real>(
    a: &DiagonalShiftOperator<R>,
    b: &DiagonalShiftOperator<R>,
    ctx: &InnerProductContext<R>,
    n_max: usize,
) -> Result<Defect<R>> {
    if ctx.max_degree() < n_max + 1 {
        return Err(Error::DegreeBound { needed: n_max + 1, available: ctx.max_degree() });
    }
    let space_top = ctx.top_degree().unwrap_or(usize::MAX);
    let top = space_top.min(n_max);
    let leaves = |op: &DiagonalShiftOperator<R>, k: usize| -> Result<bool> {
        Ok(op.on_monomial(k)?.is_some_and(|(m, _)| m > space_top))
    };
    let mut defect = Defect::default();
    for n in 0..=top {
        if leaves(a, n)? {
            continue;
        }
        let an = a.apply(&TruncatedSeries::monomial(n, n_max))?;
        let zn = TruncatedSeries::monomial(n, n_max);
        for k in 0..=top {
            if leaves(b, k)? {
                continue;
            }
            let zk = TruncatedSeries::monomial(k, n_max);
            let lhs = indefinite_inner(&an, &zk, ctx)?;
            let rhs = indefinite_inner(&zn, &b.apply(&zk)?, ctx)?;
            defect.record(cmax(&(lhs - rhs)), (n, k));
        }
    }
    Ok(defect)
}

/// Compares two operators on `z^k` for `k <= N`.
pub fn operators_agree<R: Real>(
    a: &DiagonalShiftOperator<R>,
    b: &DiagonalShiftOperator<R>,
    n_max: usize,
) -> Result<Defect<R>> {
    let mut defect = Defect::default();
    for k in 0..=n_max {
        let zk = TruncatedSeries::monomial(k, n_max);
        defect.record(series_defect(&a.apply(&zk)?, &b.apply(&zk)?), (k, k));
    }
    Ok(defect)
}

/// `R_0^* z^k = ((q-1) M_z - (q-2) I) z^k` for `k <= N`.
pub fn check_identity_r0adj<R: Real>(q: &QParam<R>, n_max: usize) -> Result<Defect<R>> {
    let q1 = creal(q.value().clone() - R::one());
    let q2 = creal(q.value().clone() - R::from_i64(2));
    let op = |k| DiagonalShiftOperator::new(k, q);
    let mut defect = Defect::default();
    for k in 0..=n_max {
        let zk = TruncatedSeries::monomial(k, n_max);
        let lhs = op(OpKind::R0Adj).apply(&zk)?;
        let rhs = &op(OpKind::Mz).apply(&zk)?.scale(&q1) - &op(OpKind::Integ).apply(&zk)?.scale(&q2);
        defect.record(series_defect(&lhs, &rhs), (k, k));
    }
    Ok(defect)
}

/// `(q-1) M_z^* z^k = (R_0 + (q-2) I^*) z^k` for `k <= N`. The multiplied
/// form is checked, so `q = 1` is allowed (it states `R_0 = I^*`).
pub fn check_identity_mzadj<R: Real>(q: &QParam<R>, n_max: usize) -> Result<Defect<R>> {
    let q1 = creal(q.value().clone() - R::one());
    let q2 = creal(q.value().clone() - R::from_i64(2));
    let op = |k| DiagonalShiftOperator::new(k, q);
    let mut defect = Defect::default();
    for k in 0..=n_max {
        let zk = TruncatedSeries::monomial(k, n_max);
        let lhs = op(OpKind::MzAdj).apply(&zk)?.scale(&q1);
        let rhs = &op(OpKind::R0).apply(&zk)? + &op(OpKind::IntegAdj).apply(&zk)?.scale(&q2);
        defect.record(series_defect(&lhs, &rhs), (k, k));
    }
    Ok(defect)
}

/// `M_z^* K_q(., w) = conj(w) K_q(., w)` on the slice truncated at `trunc`,
/// compared through degree `trunc - 1`.
pub fn kernel_eigen_check<R: Real>(w: &Complex<R>, q: &QParam<R>, trunc: usize) -> Result<Defect<R>> {
    if !kernel_is_polynomial(q, trunc) {
        let w_sq = cnorm_sqr(w);
        check_disk(&(w_sq.clone() * w_sq), q)?;
    }
    let slice = kernel_slice(w, q, trunc);
    let lhs = DiagonalShiftOperator::new(OpKind::MzAdj, q).apply(&slice)?;
    let rhs = slice.scale(&w.conj()).truncate(lhs.degree_bound());
    let mut defect = Defect::default();
    for k in 0..=lhs.degree_bound() {
        defect.record(cmax(&(lhs.coeff(k) - rhs.coeff(k))), (k, k));
    }
    Ok(defect)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundednessProfile<R: Real> {
    /// `|gamma_{k+1}| / |gamma_k|` for `k = 0..=K`.
    pub ratios: Vec<R>,
    /// `(k+1) / |k q - (k-1)|`, the same quantity in closed form.
    pub closed_form: Vec<R>,
    /// `1/|1-q|`; `None` at `q = 1`, where the ratios diverge.
    pub limit: Option<f64>,
}

impl<R: Real> BoundednessProfile<R> {
    pub fn sup(&self) -> f64 {
        self.ratios.iter().map(R::to_f64).fold(0.0, f64::max)
    }
}

/// Ratio profile of `|gamma_{k+1}|/|gamma_k|`; `M_z` is bounded exactly when
/// it has a finite supremum.
pub fn mz_boundedness_profile<R: Real>(q: &QParam<R>, k_max: usize) -> Result<BoundednessProfile<R>> {
    q.require_nondegenerate(k_max)?;
    let mut ratios = Vec::with_capacity(k_max + 1);
    let mut closed_form = Vec::with_capacity(k_max + 1);
    let seq = CoeffSequence::new(q, k_max + 1);
    let gammas: Vec<R> = seq.gammas.into_iter().map(|g| g.expect("nondegenerate").abs()).collect();
    for k in 0..=k_max {
        ratios.push(gammas[k + 1].clone() / gammas[k].clone());
        closed_form.push(R::from_usize(k + 1) / q.factor(k).abs());
    }
    let limit = (!q.is_one()).then(|| radius(q));
    Ok(BoundednessProfile { ratios, closed_form, limit })
}

/// Result of a commutator check on `z^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct CommutatorCheck<R: Real> {
    pub k: usize,
    /// The closed-form eigencoefficient.
    pub coefficient: R,
    /// Defect against direct two-sided application `AB z^k - BA z^k`.
    pub brute_force_defect: R,
    /// Defect of the stated operator-composition form, where it applies.
    pub operator_form_defect: Option<R>,
    /// Defect of an alternative composition with the same action, if any.
    pub alternate_form_defect: Option<R>,
}

fn commutator_brute<R: Real>(a: OpKind, b: OpKind, k: usize, q: &QParam<R>) -> Result<TruncatedSeries<R>> {
    let zk = TruncatedSeries::monomial(k, k + 2);
    Ok(&compose(&[a, b], q, &zk)? - &compose(&[b, a], q, &zk)?)
}

fn form_defect<R: Real>(
    scalar: &R,
    ops: &[OpKind],
    k: usize,
    coefficient: &R,
    q: &QParam<R>,
) -> Result<R> {
    let bound = k + ops.len();
    let image = compose(ops, q, &TruncatedSeries::monomial(k, bound))?.scale(&creal(scalar.clone()));
    let expected = TruncatedSeries::monomial(k, bound).scale(&creal(coefficient.clone()));
    Ok(series_defect(&image, &expected))
}

/// Eigencoefficient of `[R_0, R_0^*]` on `z^k`: `1` at `k = 0`, else
/// `(q-2)/(k(k+1))`.
pub fn commutator_r0_coefficient<R: Real>(k: usize, q: &QParam<R>) -> R {
    if k == 0 {
        return R::one();
    }
    (q.value().clone() - R::from_i64(2)) / R::from_usize(k * (k + 1))
}

/// Checks the `[R_0, R_0^*]` coefficient against direct application and
/// against `(q-2) R_0 I^2 R_0` for `k >= 1`.
pub fn commutator_r0<R: Real>(k: usize, q: &QParam<R>) -> Result<CommutatorCheck<R>> {
    use OpKind::*;
    let coefficient = commutator_r0_coefficient(k, q);
    let brute = commutator_brute(R0, R0Adj, k, q)?;
    let expected = TruncatedSeries::monomial(k, brute.degree_bound()).scale(&creal(coefficient.clone()));
    let q2 = q.value().clone() - R::from_i64(2);
    let operator_form_defect =
        if k >= 1 { Some(form_defect(&q2, &[R0, Integ, Integ, R0], k, &coefficient, q)?) } else { None };
    Ok(CommutatorCheck {
        k,
        brute_force_defect: series_defect(&brute, &expected),
        coefficient,
        operator_form_defect,
        alternate_form_defect: None,
    })
}

/// Eigencoefficient of `[M_z, M_z^*]` on `z^k`: `-1` at `k = 0`, otherwise
/// `(q-2)/([kq-(k-1)][(k-1)q-(k-2)])` (which is `(q-2)/q` at `k = 1`).
pub fn commutator_mz_coefficient<R: Real>(k: usize, q: &QParam<R>) -> Result<R> {
    if k == 0 {
        return Ok(-R::one());
    }
    for n in [k - 1, k] {
        if q.is_degenerate_at(n) {
            return Err(Error::DegenerateQ { n });
        }
    }
    Ok((q.value().clone() - R::from_i64(2)) / (q.factor(k) * q.factor(k - 1)))
}

/// Checks the `[M_z, M_z^*]` coefficient against direct application. For
/// `k >= 2` it also checks the composition `(q-2) (I^*)^2 R_0^2` and the
/// alternative `(q-2) (I^* M_z^2)^2 R_0^2`.
pub fn commutator_mz<R: Real>(k: usize, q: &QParam<R>) -> Result<CommutatorCheck<R>> {
    use OpKind::*;
    let coefficient = commutator_mz_coefficient(k, q)?;
    let brute = commutator_brute(Mz, MzAdj, k, q)?;
    let expected = TruncatedSeries::monomial(k, brute.degree_bound()).scale(&creal(coefficient.clone()));
    let q2 = q.value().clone() - R::from_i64(2);
    let (operator_form_defect, alternate_form_defect) = if k >= 2 {
        (
            Some(form_defect(&q2, &[IntegAdj, IntegAdj, R0, R0], k, &coefficient, q)?),
            Some(form_defect(&q2, &[IntegAdj, Mz, Mz, IntegAdj, Mz, Mz, R0, R0], k, &coefficient, q)?),
        )
    } else {
        (None, None)
    };
    Ok(CommutatorCheck {
        k,
        brute_force_defect: series_defect(&brute, &expected),
        coefficient,
        operator_form_defect,
        alternate_form_defect,
    })
}

/// A polynomial in the symbol `λ` with integer coefficients (index = power).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LambdaPoly {
    coeffs: Vec<BigInt>,
}

impl LambdaPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    /// `c λ^power`.
    pub fn monomial(c: i64, power: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); power + 1];
        coeffs[power] = BigInt::from(c);
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, power: usize) -> BigInt {
        self.coeffs.get(power).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn sub_scaled_shift(&self, other: &Self, factor: &BigInt) -> Self {
        // self - factor * λ * other
        let n = self.coeffs.len().max(other.coeffs.len() + 1);
        let coeffs = (0..n)
            .map(|i| {
                let shifted = if i == 0 { BigInt::zero() } else { other.coeff(i - 1) };
                self.coeff(i) - factor * shifted
            })
            .collect();
        Self::new(coeffs)
    }

    pub fn eval<R: Real>(&self, lambda: &R) -> R {
        self.coeffs.iter().rev().fold(R::zero(), |acc, c| {
            let c = c
                .to_i64()
                .map(R::from_i64)
                .unwrap_or_else(|| R::parse_literal(&c.to_string()).expect("integer literal"));
            acc * lambda.clone() + c
        })
    }

    pub fn eval_int(&self, lambda: i64) -> BigInt {
        let l = BigInt::from(lambda);
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * &l + c)
    }
}

impl fmt::Display for LambdaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (p, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else if first { "" } else { "+" };
            let mag = c.abs();
            let mag = if mag.is_one() && p > 0 { String::new() } else { mag.to_string() };
            let var = match p {
                0 => String::new(),
                1 => "λ".to_string(),
                _ => format!("λ^{p}"),
            };
            write!(f, "{sign}{mag}{var}")?;
            first = false;
        }
        Ok(())
    }
}

/// Triangular table `C(n, j)`, `1 <= j <= n`, of the recursion
/// `C(n+1, j) = C(n, j-1) - j λ C(n, j)` with `C(1, 1) = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StirlingTable {
    rows: Vec<Vec<LambdaPoly>>,
}

impl StirlingTable {
    pub fn n_max(&self) -> usize {
        self.rows.len()
    }

    /// Row `n` (1-based), with `n` entries.
    pub fn row(&self, n: usize) -> &[LambdaPoly] {
        &self.rows[n - 1]
    }

    pub fn rows(&self) -> &[Vec<LambdaPoly>] {
        &self.rows
    }

    /// Entry `C(n, j)`, zero outside `1 <= j <= n`.
    pub fn entry(&self, n: usize, j: usize) -> LambdaPoly {
        if n == 0 || j == 0 || n > self.rows.len() || j > n {
            return LambdaPoly::default();
        }
        self.rows[n - 1][j - 1].clone()
    }
}

pub fn stirling_table(n_max: usize) -> StirlingTable {
    let mut rows: Vec<Vec<LambdaPoly>> = Vec::with_capacity(n_max);
    if n_max >= 1 {
        rows.push(vec![LambdaPoly::monomial(1, 0)]);
    }
    for n in 1..n_max {
        let prev = &rows[n - 1];
        let at = |j: usize| if j >= 1 && j <= n { prev[j - 1].clone() } else { LambdaPoly::default() };
        let row = (1..=n + 1)
            .map(|j| at(j - 1).sub_scaled_shift(&at(j), &BigInt::from(j)))
            .collect();
        rows.push(row);
    }
    StirlingTable { rows }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StirlingCheck<R: Real> {
    pub lambda: R,
    /// Coefficient of `z^k` in `(M_z M_z^*)^n z^k`.
    pub lhs: R,
    /// Coefficient of `z^k` in `sum_j C(n, j) M_z^j (M_z^*)^j z^k`.
    pub rhs: R,
    pub defect: R,
}

/// Applies both sides of `(M_z M_z^*)^n z^k = sum_j C(n,j) M_z^j (M_z^*)^j z^k`
/// with `λ = λ(k; q)` substituted. Both sides are multiples of `z^k`.
pub fn stirling_expansion_check<R: Real>(n: usize, k: usize, q: &QParam<R>) -> Result<StirlingCheck<R>> {
    if n == 0 || k == 0 {
        return Err(Error::Domain("n and k must be positive".into()));
    }
    q.require_nondegenerate(k)?;
    let lambda = commutator_mz_coefficient(k, q)?;
    let zk = TruncatedSeries::monomial(k, k);
    let mz = DiagonalShiftOperator::new(OpKind::Mz, q);
    let adj = DiagonalShiftOperator::new(OpKind::MzAdj, q);

    let mut left = zk.clone();
    for _ in 0..n {
        left = mz.apply(&adj.apply(&left)?)?;
    }
    let table = stirling_table(n);
    let mut rhs = Complex::<R>::zero();
    for j in 1..=n {
        let mut g = zk.clone();
        for _ in 0..j {
            g = adj.apply(&g)?;
        }
        for _ in 0..j {
            g = mz.apply(&g)?;
        }
        rhs += g.coeff(k) * creal(table.entry(n, j).eval(&lambda));
    }
    let lhs = left.coeff(k).re;
    let rhs = rhs.re;
    Ok(StirlingCheck { defect: (lhs.clone() - rhs.clone()).abs(), lambda, lhs, rhs })
}
