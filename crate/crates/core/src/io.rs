//! JSON formats for states, channels, PPOVMs and conversion instances.
//!
//! A complex entry is either a number or a pair `[re, im]`. Matrices are
//! arrays of rows. Two-qubit indices follow `|00⟩, |01⟩, |10⟩, |11⟩`, the
//! first factor being the reference (ancilla) side.
//!
//! ```json
//! {"kind": "kraus", "data": [[[1, 0], [0, 1]]], "class": "R"}
//! {"kind": "ptm",   "data": [[1,0,0,0],[0,0.5,0,0],[0,0,0.5,0],[0,0,0,0.5]]}
//! {"kind": "choi",  "data": [[...4 entries...], ...]}
//! {"kind": "density", "data": [[...4 entries...], ...]}
//! {"kind": "pure", "data": [a00, a01, a10, a11]}
//! {"ancilla_marginal": [[0.5, 0], [0, 0.5]],
//!  "effects": [{"label": "success", "data": [[...], ...]}, ...]}
//! {"psi": [[1,0],[0,0]], "phi": ..., "e": ..., "f": ...}
//! {"x": 0.5, "y": 0.8}
//! ```
//!
//! Transpose example: for `ρ = |+i⟩⟨+i|` the PPOVM normalization is
//! `ρᵀ ⊗ I`, and `ρᵀ = |−i⟩⟨−i|` has entry `(0, 1)` equal to `+i/2`.

use nalgebra::{Matrix4, SMatrix, Vector4};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::channels::{ChannelClass, QubitChannel, Representation};
use crate::convertibility::ConversionInstance;
use crate::error::{Error, Result};
use crate::measurement::Ppovm;
use crate::qubit::{Mat2, Mat4, PureState, QubitState, TwoQubitState};

fn field<'a>(v: &'a Value, name: &str, path: &str) -> Result<&'a Value> {
    v.get(name).ok_or_else(|| Error::schema(path, format!("missing field {name:?}")))
}

fn complex(v: &Value, path: &str) -> Result<Complex64> {
    match v {
        Value::Number(n) => Ok(Complex64::new(n.as_f64().expect("finite JSON number"), 0.0)),
        Value::Array(parts) if parts.len() == 2 => {
            let get = |k: usize| {
                parts[k]
                    .as_f64()
                    .ok_or_else(|| Error::schema(format!("{path}[{k}]"), "expected a number"))
            };
            Ok(Complex64::new(get(0)?, get(1)?))
        }
        _ => Err(Error::schema(path, "expected a number or [re, im]")),
    }
}

fn real(v: &Value, path: &str) -> Result<f64> {
    v.as_f64().ok_or_else(|| Error::schema(path, "expected a real number"))
}

fn array<'a>(v: &'a Value, len: usize, path: &str) -> Result<&'a Vec<Value>> {
    match v.as_array() {
        Some(a) if a.len() == len => Ok(a),
        Some(a) => Err(Error::schema(path, format!("expected {len} elements, found {}", a.len()))),
        None => Err(Error::schema(path, "expected an array")),
    }
}

fn complex_matrix<const N: usize>(v: &Value, path: &str) -> Result<SMatrix<Complex64, N, N>> {
    let rows = array(v, N, path)?;
    let mut m = SMatrix::<Complex64, N, N>::zeros();
    for (i, row) in rows.iter().enumerate() {
        let row_path = format!("{path}[{i}]");
        for (j, entry) in array(row, N, &row_path)?.iter().enumerate() {
            m[(i, j)] = complex(entry, &format!("{row_path}[{j}]"))?;
        }
    }
    Ok(m)
}

fn real_matrix4(v: &Value, path: &str) -> Result<Matrix4<f64>> {
    let rows = array(v, 4, path)?;
    let mut m = Matrix4::zeros();
    for (i, row) in rows.iter().enumerate() {
        let row_path = format!("{path}[{i}]");
        for (j, entry) in array(row, 4, &row_path)?.iter().enumerate() {
            m[(i, j)] = real(entry, &format!("{row_path}[{j}]"))?;
        }
    }
    Ok(m)
}

fn complex_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn matrix_json<const N: usize>(m: &SMatrix<Complex64, N, N>) -> Value {
    Value::Array((0..N).map(|i| Value::Array((0..N).map(|j| complex_json(m[(i, j)])).collect())).collect())
}

fn kind<'a>(v: &'a Value, path: &str) -> Result<&'a str> {
    field(v, "kind", path)?
        .as_str()
        .ok_or_else(|| Error::schema(format!("{path}.kind"), "expected a string"))
}

pub fn channel_from_json(v: &Value) -> Result<QubitChannel> {
    let data = field(v, "data", "$")?;
    let channel = match kind(v, "$")? {
        "kraus" => {
            let ops = data.as_array().ok_or_else(|| Error::schema("$.data", "expected an array of matrices"))?;
            let ops = ops
                .iter()
                .enumerate()
                .map(|(k, m)| complex_matrix::<2>(m, &format!("$.data[{k}]")))
                .collect::<Result<Vec<Mat2>>>()?;
            QubitChannel::from_kraus(ops)?
        }
        "ptm" => QubitChannel::from_ptm(real_matrix4(data, "$.data")?)?,
        "choi" => QubitChannel::from_choi(complex_matrix::<4>(data, "$.data")?)?,
        other => return Err(Error::schema("$.kind", format!("unknown channel kind {other:?}"))),
    };
    match v.get("class") {
        None | Some(Value::Null) => Ok(channel),
        Some(Value::String(tag)) => Ok(channel.with_class(tag.parse::<ChannelClass>()?)),
        Some(_) => Err(Error::schema("$.class", "expected a class tag string")),
    }
}

pub fn channel_to_json(channel: &QubitChannel) -> Value {
    let mut out = match channel.representation() {
        Representation::Kraus(ops) => json!({"kind": "kraus", "data": ops.iter().map(matrix_json).collect::<Vec<_>>()}),
        Representation::Ptm(t) => {
            let rows: Vec<Vec<f64>> = (0..4).map(|i| (0..4).map(|j| t[(i, j)]).collect()).collect();
            json!({"kind": "ptm", "data": rows})
        }
        Representation::Choi(j) => json!({"kind": "choi", "data": matrix_json(j)}),
    };
    if let Some(class) = channel.class() {
        out["class"] = json!(class.tag());
    }
    out
}

pub fn two_qubit_state_from_json(v: &Value) -> Result<TwoQubitState> {
    let data = field(v, "data", "$")?;
    match kind(v, "$")? {
        "density" => TwoQubitState::new(complex_matrix::<4>(data, "$.data")?),
        "pure" => {
            let entries = array(data, 4, "$.data")?;
            let mut a = Vector4::zeros();
            for (k, e) in entries.iter().enumerate() {
                a[k] = complex(e, &format!("$.data[{k}]"))?;
            }
            TwoQubitState::pure(a)
        }
        other => Err(Error::schema("$.kind", format!("unknown state kind {other:?}"))),
    }
}

pub fn two_qubit_state_to_json(tau: &TwoQubitState) -> Value {
    json!({"kind": "density", "data": matrix_json(tau.matrix())})
}

pub fn ppovm_from_json(v: &Value) -> Result<Ppovm> {
    let marginal = QubitState::new(complex_matrix::<2>(field(v, "ancilla_marginal", "$")?, "$.ancilla_marginal")?)?;
    let effects = field(v, "effects", "$")?
        .as_array()
        .ok_or_else(|| Error::schema("$.effects", "expected an array"))?;
    let mut labels = Vec::with_capacity(effects.len());
    let mut ops = Vec::with_capacity(effects.len());
    for (k, e) in effects.iter().enumerate() {
        let path = format!("$.effects[{k}]");
        let label = match e.get("label") {
            Some(Value::String(s)) => s.clone(),
            Some(_) => return Err(Error::schema(format!("{path}.label"), "expected a string")),
            None => k.to_string(),
        };
        labels.push(label);
        ops.push(complex_matrix::<4>(field(e, "data", &path)?, &format!("{path}.data"))?);
    }
    Ppovm::new(labels, ops, marginal)
}

pub fn ppovm_to_json(ppovm: &Ppovm) -> Value {
    let effects: Vec<Value> = ppovm
        .labels()
        .iter()
        .zip(ppovm.effects())
        .map(|(label, s): (&String, &Mat4)| json!({"label": label, "data": matrix_json(s)}))
        .collect();
    json!({"ancilla_marginal": matrix_json(ppovm.ancilla_marginal().matrix()), "effects": effects})
}

fn pure_state(v: &Value, path: &str) -> Result<PureState> {
    let a = array(v, 2, path)?;
    PureState::new(complex(&a[0], &format!("{path}[0]"))?, complex(&a[1], &format!("{path}[1]"))?)
}

pub fn instance_from_json(v: &Value) -> Result<ConversionInstance> {
    if v.get("psi").is_some() {
        let get = |name: &str| pure_state(field(v, name, "$")?, &format!("$.{name}"));
        return Ok(ConversionInstance::new(get("psi")?, get("phi")?, get("e")?, get("f")?));
    }
    let x = real(field(v, "x", "$")?, "$.x")?;
    let y = real(field(v, "y", "$")?, "$.y")?;
    ConversionInstance::from_overlaps(x, y)
}

pub fn instance_to_json(inst: &ConversionInstance) -> Value {
    let state = |s: &PureState| Value::Array(s.amplitudes().iter().map(|z| complex_json(*z)).collect());
    json!({"psi": state(&inst.psi), "phi": state(&inst.phi), "e": state(&inst.e), "f": state(&inst.f)})
}

/// Parse text, reporting syntax errors with line and column.
pub fn parse(text: &str) -> Result<Value> {
    Ok(serde_json::from_str(text)?)
}
