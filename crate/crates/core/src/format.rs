//! JSON encodings of series, matrix series, realizations and run
//! configurations.
//!
//! A complex entry is a pair `[re, im]`. Each part may be a JSON number or a
//! string holding a decimal or a fraction `p/r`; in exact mode numbers are
//! read from their literal text, so no precision passes through `f64`. A bare
//! number or a string such as `"1-2i"` is also accepted as an entry.
//!
//! Output uses `[re, im]` with JSON numbers in float mode and `"p/r"`
//! strings in exact mode. Object keys are emitted in sorted order.

use num_complex::Complex;
use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::rational::Realization;
use crate::scalar::{parse_complex, Real};
use crate::series::{CMatrix, MatrixSeries, TruncatedSeries};

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub fn from_str(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))
}

pub fn scalar_from_json<R: Real>(v: &Value) -> Result<R> {
    match v {
        Value::Number(n) => R::parse_literal(&n.to_string()),
        Value::String(s) => R::parse_literal(s),
        other => Err(parse_err(format!("expected a real number, found {other}"))),
    }
}

pub fn complex_from_json<R: Real>(v: &Value) -> Result<Complex<R>> {
    match v {
        Value::Array(parts) if parts.len() == 2 => {
            Ok(Complex::new(scalar_from_json(&parts[0])?, scalar_from_json(&parts[1])?))
        }
        Value::Array(parts) => Err(parse_err(format!("complex entry needs 2 parts, found {}", parts.len()))),
        Value::Number(_) => Ok(Complex::new(scalar_from_json(v)?, R::zero())),
        Value::String(s) => parse_complex(s),
        other => Err(parse_err(format!("expected a complex entry, found {other}"))),
    }
}

pub fn scalar_to_json<R: Real>(x: &R) -> Value {
    if R::EXACT {
        return Value::String(x.render());
    }
    let f = x.to_f64();
    serde_json::Number::from_f64(f).map_or_else(|| Value::String(f.to_string()), Value::Number)
}

pub fn complex_to_json<R: Real>(z: &Complex<R>) -> Value {
    Value::Array(vec![scalar_to_json(&z.re), scalar_to_json(&z.im)])
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| parse_err(format!("{what} must be an array")))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| parse_err(format!("missing field {key:?}")))
}

fn object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| parse_err(format!("{what} must be an object")))
}

fn usize_field(obj: &Map<String, Value>, key: &str) -> Result<usize> {
    field(obj, key)?
        .as_u64()
        .and_then(|n| usize::try_from(n).ok())
        .ok_or_else(|| parse_err(format!("{key:?} must be a non-negative integer")))
}

/// A matrix as an array of rows; an empty array is a matrix with no rows and
/// unknown column count.
fn matrix_rows<R: Real>(v: &Value, what: &str) -> Result<(Vec<Vec<Complex<R>>>, Option<usize>)> {
    let rows = array(v, what)?;
    let mut out = Vec::with_capacity(rows.len());
    let mut cols = None;
    for (i, row) in rows.iter().enumerate() {
        let entries = array(row, what)?;
        if *cols.get_or_insert(entries.len()) != entries.len() {
            return Err(parse_err(format!("{what}: row {i} has {} entries, expected {}", entries.len(), cols.unwrap())));
        }
        out.push(entries.iter().map(complex_from_json).collect::<Result<Vec<_>>>()?);
    }
    Ok((out, cols))
}

fn to_matrix<R: Real>(rows: Vec<Vec<Complex<R>>>, cols: usize) -> CMatrix<R> {
    let n = rows.len();
    CMatrix::from_fn(n, cols, |i, j| rows[i][j].clone())
}

pub fn matrix_from_json<R: Real>(v: &Value, shape: (usize, usize)) -> Result<CMatrix<R>> {
    let (rows, cols) = matrix_rows(v, "matrix")?;
    let actual = (rows.len(), cols.unwrap_or(shape.1));
    if actual != shape {
        return Err(Error::Shape(format!("matrix has shape {actual:?}, expected {shape:?}")));
    }
    Ok(to_matrix(rows, shape.1))
}

pub fn matrix_to_json<R: Real>(m: &CMatrix<R>) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| complex_to_json(&m[(i, j)])).collect()))
            .collect(),
    )
}

fn check_bound(obj: &Map<String, Value>, len: usize) -> Result<()> {
    let bound = usize_field(obj, "degree_bound")?;
    if len != bound + 1 {
        return Err(parse_err(format!("degree_bound {bound} needs {} coefficients, found {len}", bound + 1)));
    }
    Ok(())
}

/// `{"degree_bound": N, "coeffs": [[re, im], ...]}`.
pub fn series_from_json<R: Real>(text: &str) -> Result<TruncatedSeries<R>> {
    series_from_value(&from_str(text)?)
}

pub fn series_from_value<R: Real>(v: &Value) -> Result<TruncatedSeries<R>> {
    let obj = object(v, "series")?;
    let coeffs = array(field(obj, "coeffs")?, "coeffs")?;
    check_bound(obj, coeffs.len())?;
    TruncatedSeries::new(coeffs.iter().map(complex_from_json).collect::<Result<_>>()?)
}

pub fn series_to_json<R: Real>(f: &TruncatedSeries<R>) -> Value {
    json!({
        "degree_bound": f.degree_bound(),
        "coeffs": f.coeffs().iter().map(complex_to_json).collect::<Vec<_>>(),
    })
}

/// Series JSON with `"shape": [n, m]` and row-major coefficient matrices; a
/// file without `shape` is read as a `1 x 1` series.
pub fn matrix_series_from_json<R: Real>(text: &str) -> Result<MatrixSeries<R>> {
    matrix_series_from_value(&from_str(text)?)
}

pub fn matrix_series_from_value<R: Real>(v: &Value) -> Result<MatrixSeries<R>> {
    let obj = object(v, "matrix series")?;
    let Some(shape) = obj.get("shape") else {
        return Ok(MatrixSeries::from_scalar(&series_from_value(v)?));
    };
    let dims = array(shape, "shape")?;
    let dim = |i: usize| {
        dims.get(i)
            .and_then(Value::as_u64)
            .and_then(|n| usize::try_from(n).ok())
            .ok_or_else(|| parse_err("shape must be [n, m]"))
    };
    if dims.len() != 2 {
        return Err(parse_err("shape must be [n, m]"));
    }
    let shape = (dim(0)?, dim(1)?);
    let coeffs = array(field(obj, "coeffs")?, "coeffs")?;
    check_bound(obj, coeffs.len())?;
    let mats = coeffs.iter().map(|c| matrix_from_json(c, shape)).collect::<Result<_>>()?;
    MatrixSeries::new(mats, shape)
}

pub fn matrix_series_to_json<R: Real>(f: &MatrixSeries<R>) -> Value {
    let (n, m) = f.shape();
    json!({
        "degree_bound": f.degree_bound(),
        "shape": [n, m],
        "coeffs": f.coeffs().iter().map(matrix_to_json).collect::<Vec<_>>(),
    })
}

/// `{"C": [[..]], "A": [[..]], "B": [[..]], "D": [[..]] | null}`. With a
/// zero-dimensional state the input count is taken from `D`.
pub fn realization_from_json<R: Real>(text: &str) -> Result<Realization<R>> {
    realization_from_value(&from_str(text)?)
}

pub fn realization_from_value<R: Real>(v: &Value) -> Result<Realization<R>> {
    let obj = object(v, "realization")?;
    let (a_rows, a_cols) = matrix_rows::<R>(field(obj, "A")?, "A")?;
    let n_state = a_rows.len();
    if a_cols.unwrap_or(0) != n_state {
        return Err(Error::Shape("A must be square".into()));
    }
    let (c_rows, c_cols) = matrix_rows::<R>(field(obj, "C")?, "C")?;
    let (b_rows, b_cols) = matrix_rows::<R>(field(obj, "B")?, "B")?;
    let d = match obj.get("D") {
        None | Some(Value::Null) => None,
        Some(d) => Some(matrix_rows::<R>(d, "D")?),
    };
    let d_cols = d.as_ref().and_then(|(_, c)| *c);
    let m = match (b_cols, d_cols) {
        (Some(m), _) | (None, Some(m)) => m,
        (None, None) if n_state == 0 => return Err(Error::Shape("input dimension cannot be inferred".into())),
        (None, None) => 0,
    };
    let c = to_matrix(c_rows, c_cols.unwrap_or(n_state));
    let b = to_matrix(b_rows, m);
    let a = to_matrix(a_rows, n_state);
    let d = d.map(|(rows, cols)| to_matrix(rows, cols.unwrap_or(m)));
    Realization::new(c, a, b, d)
}

pub fn realization_to_json<R: Real>(r: &Realization<R>) -> Value {
    json!({
        "C": matrix_to_json(&r.c),
        "A": matrix_to_json(&r.a),
        "B": matrix_to_json(&r.b),
        "D": r.d.as_ref().map_or(Value::Null, matrix_to_json),
    })
}

/// Run configuration file; every field is optional and command-line flags
/// take precedence.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub q: Option<Value>,
    pub trunc: Option<usize>,
    pub tol: Option<f64>,
    pub mode: Option<String>,
    pub seed: Option<u64>,
    pub output: Option<String>,
    pub out: Option<String>,
}

impl ConfigFile {
    /// `q` as literal text (numbers keep their exact spelling).
    pub fn q_text(&self) -> Result<Option<String>> {
        match &self.q {
            None => Ok(None),
            Some(Value::Number(n)) => Ok(Some(n.to_string())),
            Some(Value::String(s)) => Ok(Some(s.clone())),
            Some(other) => Err(parse_err(format!("q must be a number or a string, found {other}"))),
        }
    }
}

pub fn config_from_json(text: &str) -> Result<ConfigFile> {
    let cfg: ConfigFile = serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))?;
    cfg.q_text()?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use num_bigint::BigInt;
    use num_complex::Complex64;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn series_round_trip_exact() {
        let text = r#"{"degree_bound": 2, "coeffs": [[1, 0], ["1/3", "-2/7"], [0.1, "5"]]}"#;
        let f: TruncatedSeries<Rational> = series_from_json(text).unwrap();
        assert_eq!(f.coeff(1), Complex::new(rat(1, 3), rat(-2, 7)));
        assert_eq!(f.coeff(2).re, rat(1, 10));
        let out = series_to_json(&f).to_string();
        assert_eq!(out, r#"{"coeffs":[["1","0"],["1/3","-2/7"],["1/10","5"]],"degree_bound":2}"#);
        assert_eq!(series_from_json::<Rational>(&out).unwrap(), f);
    }

    #[test]
    fn series_float() {
        let text = r#"{"degree_bound": 1, "coeffs": [[0.5, -1.25], "2+3i"]}"#;
        let f: TruncatedSeries<f64> = series_from_json(text).unwrap();
        assert_eq!(f.coeff(1), Complex64::new(2.0, 3.0));
        let again: TruncatedSeries<f64> = series_from_json(&series_to_json(&f).to_string()).unwrap();
        assert_eq!(again, f);
    }

    #[test]
    fn exact_numbers_skip_f64() {
        let text = r#"{"degree_bound": 0, "coeffs": [[0.1000000000000000000001, 0]]}"#;
        let f: TruncatedSeries<Rational> = series_from_json(text).unwrap();
        assert_ne!(f.coeff(0).re, rat(1, 10));
        assert_eq!(f.coeff(0).re * Rational::from_integer(BigInt::from(10).pow(22)), Rational::from_integer(BigInt::from(10).pow(21) + 1));
    }

    #[test]
    fn malformed_inputs() {
        for text in [
            "",
            "{",
            "[]",
            r#"{"coeffs": [[1, 0]]}"#,
            r#"{"degree_bound": 1, "coeffs": [[1, 0]]}"#,
            r#"{"degree_bound": 0, "coeffs": [[1, 0, 2]]}"#,
            r#"{"degree_bound": 0, "coeffs": [[true, 0]]}"#,
            r#"{"degree_bound": -1, "coeffs": []}"#,
            r#"{"degree_bound": 0, "coeffs": [["1/0", 0]]}"#,
            r#"{"degree_bound": 0, "coeffs": [[1e400, 0]]}"#,
        ] {
            assert!(matches!(series_from_json::<f64>(text), Err(Error::Parse(_) | Error::Shape(_))), "{text}");
        }
    }

    #[test]
    fn matrix_series_round_trip() {
        let text = r#"{"degree_bound": 1, "shape": [2, 1],
                       "coeffs": [[[[1, 0]], [[0, 1]]], [[["1/2", 0]], [[0, "-1/4"]]]]}"#;
        let f: MatrixSeries<Rational> = matrix_series_from_json(text).unwrap();
        assert_eq!(f.shape(), (2, 1));
        assert_eq!(f.coeff(1)[(1, 0)], Complex::new(rat(0, 1), rat(-1, 4)));
        let back: MatrixSeries<Rational> = matrix_series_from_json(&matrix_series_to_json(&f).to_string()).unwrap();
        assert_eq!(back, f);
        let bad = r#"{"degree_bound": 0, "shape": [2, 2], "coeffs": [[[[1, 0]], [[0, 1]]]]}"#;
        assert!(matrix_series_from_json::<f64>(bad).is_err());
        let scalar = r#"{"degree_bound": 0, "coeffs": [[3, 0]]}"#;
        assert_eq!(matrix_series_from_json::<f64>(scalar).unwrap().shape(), (1, 1));
    }

    #[test]
    fn realization_round_trip() {
        let text = r#"{"C": [[[1, 0], [0, 0]]], "A": [[[0.5, 0], [1, 0]], [[0, 0], [0.25, 0]]],
                       "B": [[[1, 0]], [[1, 0]]], "D": null}"#;
        let r: Realization<f64> = realization_from_json(text).unwrap();
        assert_eq!((r.state_dim(), r.shape()), (2, (1, 1)));
        let back: Realization<f64> = realization_from_json(&realization_to_json(&r).to_string()).unwrap();
        assert_eq!(back, r);

        let empty = r#"{"C": [[], []], "A": [], "B": [], "D": [[[1, 0], [2, 0], [3, 0]], [[0, 0], [0, 0], [0, 0]]]}"#;
        let r: Realization<Rational> = realization_from_json(empty).unwrap();
        assert_eq!((r.state_dim(), r.shape()), (0, (2, 3)));
        let no_d = r#"{"C": [[]], "A": [], "B": [], "D": null}"#;
        assert!(realization_from_json::<f64>(no_d).is_err());
        let bad = r#"{"C": [[[1, 0]]], "A": [[[1, 0]]], "B": [[[1, 0]], [[1, 0]]]}"#;
        assert!(realization_from_json::<f64>(bad).is_err());
    }

    #[test]
    fn config_files() {
        let cfg = config_from_json(r#"{"q": "3/4", "trunc": 32, "mode": "exact"}"#).unwrap();
        assert_eq!(cfg.q_text().unwrap().as_deref(), Some("3/4"));
        assert_eq!(cfg.trunc, Some(32));
        let cfg = config_from_json(r#"{"q": 0.6}"#).unwrap();
        assert_eq!(cfg.q_text().unwrap().as_deref(), Some("0.6"));
        assert!(config_from_json(r#"{"q": [1]}"#).is_err());
        assert!(config_from_json(r#"{"bogus": 1}"#).is_err());
        assert_eq!(config_from_json("{}").unwrap(), ConfigFile::default());
    }
}
