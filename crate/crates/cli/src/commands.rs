use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use tsallis::format::{
    complex_to_json, matrix_series_from_value, matrix_series_to_json, matrix_to_json, realization_from_json,
    realization_to_json, scalar_to_json, series_to_json,
};
use tsallis::jordan::{solve_jordan, solve_shifted, JordanSolution};
use tsallis::operators::{commutator_mz_coefficient, stirling_table};
use tsallis::qcore::{classify, kernel_eval, radius, CoeffSequence};
use tsallis::rational::{
    borel, hankel, inverse_borel, is_q_rational, numerical_rank, random_minimal_realization, taylor_from_realization,
    Realization,
};
use tsallis::scalar::{cfrom_f64, parse_complex};
use tsallis::series::CMatrix;
use tsallis::{Error, MatrixSeries, QParam, Real};

use crate::config::{read_file, CliError, RunConfig};
use crate::output::{complex_cell, matrix_series_table, matrix_table, series_table, Document, Table};
use crate::{verify, Command, Direction, Emit};

pub fn dispatch<R: Real>(cfg: &RunConfig, cmd: &Command) -> Result<(Document, bool), CliError> {
    let doc = match cmd {
        Command::Coeffs { k_max } => coeffs::<R>(cfg, k_max.unwrap_or(cfg.trunc))?,
        Command::Kernel { z, w } => kernel::<R>(cfg, z, w)?,
        Command::Verify { suite, realization } => return verify::run::<R>(cfg, *suite, realization.as_deref()),
        Command::Stirling { n_max, k } => stirling::<R>(cfg, *n_max, *k)?,
        Command::Borel { input, direction } => borel_file::<R>(cfg, input, *direction)?,
        Command::Jordan { f0, lambda } => jordan::<R>(cfg, f0, lambda.as_deref())?,
        Command::Hankel { input, rows, cols, rank_tol } => hankel_file::<R>(cfg, input, *rows, *cols, *rank_tol)?,
        Command::Realize { input, state_dim, outputs, inputs, emit } => {
            realize::<R>(cfg, input.as_deref(), *state_dim, (*outputs, *inputs), *emit)?
        }
    };
    Ok((doc, true))
}

fn q_json<R: Real>(q: &QParam<R>) -> Value {
    scalar_to_json(q.value())
}

fn coeffs<R: Real>(cfg: &RunConfig, k_max: usize) -> Result<Document, CliError> {
    let q = cfg.q::<R>()?;
    let seq = CoeffSequence::new(&q, k_max + 1);
    let mut table = Table::new(&["k", "alpha", "gamma", "sign", "ratio"]);
    let mut rows = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        let gamma = seq.gammas[k].as_ref();
        let sign = gamma.map(|g| if g.is_negative() { "-" } else { "+" });
        let ratio = match (gamma, seq.gammas[k + 1].as_ref()) {
            (Some(g), Some(next)) if !g.is_zero() => Some(next.abs() / g.abs()),
            _ => None,
        };
        let cell = |x: Option<&R>| x.map(Real::render).unwrap_or_default();
        table.push(vec![
            k.to_string(),
            seq.alphas[k].render(),
            cell(gamma),
            sign.unwrap_or_default().to_string(),
            cell(ratio.as_ref()),
        ]);
        rows.push(json!({
            "k": k,
            "alpha": scalar_to_json(&seq.alphas[k]),
            "gamma": gamma.map_or(Value::Null, scalar_to_json),
            "sign": sign,
            "ratio": ratio.as_ref().map_or(Value::Null, scalar_to_json),
        }));
    }
    Ok(Document { json: json!({ "q": q_json(&q), "k_max": k_max, "rows": rows }), table })
}

fn kernel<R: Real>(cfg: &RunConfig, z: &str, w: &str) -> Result<Document, CliError> {
    let q = cfg.q::<R>()?;
    let z = parse_complex::<R>(z)?;
    let w = parse_complex::<R>(w)?;
    let value = kernel_eval(&z, &w, &q, cfg.trunc)?;
    let radius = radius(&q);
    let class = classify(&q, cfg.trunc);
    let json = json!({
        "q": q_json(&q),
        "trunc": cfg.trunc,
        "z": complex_to_json(&z),
        "w": complex_to_json(&w),
        "value": complex_to_json(&value),
        "radius": scalar_to_json(&radius),
        "space": class,
    });
    let mut table = Table::new(&["q", "trunc", "z", "w", "value", "radius", "space"]);
    table.push(vec![
        q.value().render(),
        cfg.trunc.to_string(),
        complex_cell(&z),
        complex_cell(&w),
        complex_cell(&value),
        radius.render(),
        format!("{class:?}"),
    ]);
    Ok(Document { json, table })
}

fn stirling<R: Real>(cfg: &RunConfig, n_max: usize, k: Option<usize>) -> Result<Document, CliError> {
    if n_max == 0 {
        return Err(Error::Domain("n_max must be positive".into()).into());
    }
    let table = stirling_table(n_max);
    let lambda = match k {
        Some(k) => Some(commutator_mz_coefficient(k, &cfg.q::<R>()?)?),
        None => None,
    };
    let mut headers = vec!["n", "j", "entry"];
    if lambda.is_some() {
        headers.push("value");
    }
    let mut out = Table::new(&headers);
    let mut rows = Vec::new();
    let mut values = Vec::new();
    for (i, row) in table.rows().iter().enumerate() {
        rows.push(row.iter().map(|p| p.to_string()).collect::<Vec<_>>());
        let evaluated: Option<Vec<R>> = lambda.as_ref().map(|l| row.iter().map(|p| p.eval(l)).collect());
        for (j, p) in row.iter().enumerate() {
            let mut cells = vec![(i + 1).to_string(), (j + 1).to_string(), p.to_string()];
            if let Some(vals) = &evaluated {
                cells.push(vals[j].render());
            }
            out.push(cells);
        }
        if let Some(vals) = evaluated {
            values.push(vals.iter().map(scalar_to_json).collect::<Vec<_>>());
        }
    }
    let mut json = json!({ "n_max": n_max, "rows": rows });
    if let (Some(k), Some(l)) = (k, &lambda) {
        json["k"] = json!(k);
        json["lambda"] = scalar_to_json(l);
        json["values"] = json!(values);
    }
    Ok(Document { json, table: out })
}

/// A series file, remembering whether it was scalar (no `shape` key).
fn read_series<R: Real>(path: &std::path::Path) -> Result<(MatrixSeries<R>, bool), CliError> {
    let value = tsallis::format::from_str(&read_file(path)?)?;
    let scalar = value.get("shape").is_none();
    Ok((matrix_series_from_value(&value)?, scalar))
}

fn series_document<R: Real>(f: &MatrixSeries<R>, scalar: bool) -> Document {
    if scalar {
        let s = f.entry(0, 0);
        Document { json: series_to_json(&s), table: series_table(&s) }
    } else {
        Document { json: matrix_series_to_json(f), table: matrix_series_table(f) }
    }
}

fn borel_file<R: Real>(cfg: &RunConfig, input: &std::path::Path, direction: Direction) -> Result<Document, CliError> {
    let q = cfg.q::<R>()?;
    let (f, scalar) = read_series::<R>(input)?;
    let g = match direction {
        Direction::Forward => borel(&f, &q)?,
        Direction::Inverse => inverse_borel(&f, &q)?,
    };
    Ok(series_document(&g, scalar))
}

fn jordan<R: Real>(cfg: &RunConfig, f0: &str, lambda: Option<&str>) -> Result<Document, CliError> {
    let q = cfg.q::<R>()?;
    let f0 = parse_complex::<R>(f0)?;
    let sol: JordanSolution<R> = match lambda {
        None => solve_jordan(&f0, &q, cfg.trunc)?,
        Some(l) => solve_shifted(&f0, &parse_complex(l)?, &q, cfg.trunc)?,
    };
    let opt = |x: &Option<R>| x.as_ref().map_or(Value::Null, scalar_to_json);
    let json = json!({
        "q": q_json(&q),
        "f0": complex_to_json(&sol.f0),
        "lambda": complex_to_json(&sol.lambda),
        "series": series_to_json(&sol.coeffs),
        "residual": scalar_to_json(&sol.residual),
        "closed_form_defect": opt(&sol.closed_form_defect),
        "candidate_defect": opt(&sol.candidate_defect),
        "candidate_scaled_defect": opt(&sol.candidate_scaled_defect),
    });
    Ok(Document { json, table: series_table(&sol.coeffs) })
}

fn hankel_file<R: Real>(
    cfg: &RunConfig,
    input: &std::path::Path,
    rows: Option<usize>,
    cols: Option<usize>,
    rank_tol: f64,
) -> Result<Document, CliError> {
    let q = cfg.q::<R>()?;
    let (f, _) = read_series::<R>(input)?;
    let half = f.degree_bound() / 2 + 1;
    let (rows, cols) = (rows.unwrap_or(half), cols.unwrap_or(half));
    if rows == 0 || cols == 0 {
        return Err(Error::Domain("rows and cols must be positive".into()).into());
    }
    let h = hankel(&f, &q, rows, cols)?;
    let rank = numerical_rank(&h, rank_tol);
    let rational = match is_q_rational(&f, &q, rank_tol) {
        Ok((flag, rank)) => json!({ "flag": flag, "rank": rank }),
        Err(Error::InsufficientDegree { .. }) => Value::Null,
        Err(e) => return Err(e.into()),
    };
    let json = json!({
        "q": q_json(&q),
        "rows": rows,
        "cols": cols,
        "rank": rank,
        "rank_tol": rank_tol,
        "q_rational": rational,
        "hankel": matrix_to_json(&h),
    });
    Ok(Document { json, table: matrix_table(&h) })
}

pub fn lift<R: Real>(r: &Realization<f64>) -> Realization<R> {
    let m = |a: &CMatrix<f64>| a.map(|x| cfrom_f64::<R>(x).expect("random entries are finite"));
    Realization { c: m(&r.c), a: m(&r.a), b: m(&r.b), d: r.d.as_ref().map(m) }
}

/// Minimal synthetic realization: rejection at `1e-6` on the classical
/// Hankel rank.
pub fn synthetic(rng: &mut ChaCha8Rng, state_dim: usize, shape: (usize, usize)) -> Result<Realization<f64>, CliError> {
    random_minimal_realization(rng, state_dim, shape, 1e-6, 1000).ok_or_else(|| {
        Error::Domain(format!("no minimal realization of dimension {state_dim} and shape {shape:?} found")).into()
    })
}

fn realize<R: Real>(
    cfg: &RunConfig,
    input: Option<&std::path::Path>,
    state_dim: usize,
    shape: (usize, usize),
    emit: Emit,
) -> Result<Document, CliError> {
    let r: Realization<R> = match input {
        Some(path) => realization_from_json(&read_file(path)?)?,
        None => {
            if shape.0 == 0 || shape.1 == 0 {
                return Err(Error::Shape("outputs and inputs must be positive".into()).into());
            }
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            lift(&synthetic(&mut rng, state_dim, shape)?)
        }
    };
    Ok(match emit {
        Emit::Realization => {
            let mut table = Table::new(&["matrix", "i", "j", "entry"]);
            let mut add = |name: &str, m: &CMatrix<R>| {
                for row in matrix_table(m).rows {
                    table.push(std::iter::once(name.to_string()).chain(row).collect());
                }
            };
            add("C", &r.c);
            add("A", &r.a);
            add("B", &r.b);
            if let Some(d) = &r.d {
                add("D", d);
            }
            Document { json: realization_to_json(&r), table }
        }
        Emit::Series => {
            let f = taylor_from_realization(&r, &cfg.q::<R>()?, cfg.trunc);
            series_document(&f, false)
        }
    })
}
