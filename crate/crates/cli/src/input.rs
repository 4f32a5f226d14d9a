use std::fs;

use anyhow::{bail, Context, Result};
use qcb_core::detection::{ancilla_free_scheme, entangled_scheme};
use qcb_core::io;
use qcb_core::qubit::QubitState;
use qcb_core::{ChannelClass, ConversionInstance, Ppovm, PureState, QubitChannel, TwoQubitState};

fn load_json(path: &str) -> Result<serde_json::Value> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
    io::parse(&text).with_context(|| format!("parsing {path}"))
}

/// `maximally-entangled`, `maximally-mixed`, `product-00`, `werner-state:<w>`, or a JSON file.
pub fn tau(spec: &str) -> Result<TwoQubitState> {
    match spec {
        "maximally-entangled" => return Ok(TwoQubitState::maximally_entangled()),
        "maximally-mixed" => return Ok(TwoQubitState::maximally_mixed()),
        "product-00" => {
            let z = PureState::zero().density();
            return Ok(TwoQubitState::product(&z, &z));
        }
        _ => {}
    }
    if let Some(w) = spec.strip_prefix("werner-state:") {
        return Ok(TwoQubitState::werner(number(w)?)?);
    }
    let v = load_json(spec)?;
    io::two_qubit_state_from_json(&v).with_context(|| format!("loading state from {spec}"))
}

/// `identity`, `depolarizing`, `werner:<w>`, or a JSON file.
pub fn channel(spec: &str) -> Result<QubitChannel> {
    match spec {
        "identity" => return Ok(QubitChannel::identity()),
        "depolarizing" => return Ok(QubitChannel::depolarizing(&QubitState::maximally_mixed())),
        _ => {}
    }
    if let Some(w) = spec.strip_prefix("werner:") {
        return Ok(QubitChannel::werner(number(w)?)?);
    }
    let v = load_json(spec)?;
    io::channel_from_json(&v).with_context(|| format!("loading channel from {spec}"))
}

/// `entangled`, `ancilla-free`, or a JSON file.
pub fn ppovm(spec: &str) -> Result<Ppovm> {
    match spec {
        "entangled" => Ok(entangled_scheme()),
        "ancilla-free" => Ok(ancilla_free_scheme()),
        path => {
            let v = load_json(path)?;
            io::ppovm_from_json(&v).with_context(|| format!("loading PPOVM from {path}"))
        }
    }
}

pub fn instance(path: &str) -> Result<ConversionInstance> {
    let v = load_json(path)?;
    io::instance_from_json(&v).with_context(|| format!("loading instance from {path}"))
}

pub fn class_pair(spec: &str) -> Result<(ChannelClass, ChannelClass)> {
    let Some((a, b)) = spec.split_once(',') else {
        bail!("expected a pair like UE,D, got {spec:?}");
    };
    Ok((a.trim().parse()?, b.trim().parse()?))
}

fn term(s: &str) -> Result<f64> {
    let s = s.trim();
    if let Some(rest) = s.strip_prefix("sqrt") {
        let inner = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(rest);
        return Ok(term(inner)?.sqrt());
    }
    if let Some((coef, root)) = s.split_once("sqrt") {
        let coef = coef.trim_end_matches('*');
        return Ok(term(coef)? * term(&format!("sqrt{root}"))?);
    }
    s.parse::<f64>().with_context(|| format!("not a number: {s:?}"))
}

/// A real number, optionally written as `a/b` with `sqrtN`, `sqrt(N)` or `c*sqrtN` terms.
pub fn number(s: &str) -> Result<f64> {
    let value = match s.split_once('/') {
        Some((num, den)) => term(num)? / term(den)?,
        None => term(s)?,
    };
    if !value.is_finite() {
        bail!("{s:?} is not a finite number");
    }
    Ok(value)
}

/// Clap value parser wrapper around [`number`].
pub fn parse_number(s: &str) -> std::result::Result<f64, String> {
    number(s).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers() {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(number("0.25").unwrap(), 0.25);
        assert!((number("1/sqrt2").unwrap() - r).abs() < 1e-15);
        assert!((number("1/sqrt(2)").unwrap() - r).abs() < 1e-15);
        assert!((number("sqrt(2)/2").unwrap() - r).abs() < 1e-15);
        assert!((number("2/sqrt5").unwrap() - 2.0 / 5f64.sqrt()).abs() < 1e-15);
        assert!((number("3*sqrt2/6").unwrap() - r).abs() < 1e-15);
        assert!(number("1/0").is_err());
        assert!(number("abc").is_err());
    }

    #[test]
    fn presets() {
        assert_eq!(tau("maximally-entangled").unwrap(), TwoQubitState::maximally_entangled());
        assert!(tau("werner-state:0.5").is_ok());
        assert!(tau("werner-state:2").is_err());
        assert!(channel("werner:1/3").is_ok());
        assert_eq!(ppovm("ancilla-free").unwrap().len(), 6);
        let (a, b) = class_pair("UE, D").unwrap();
        assert_eq!((a, b), (ChannelClass::UnitalEntanglementBreaking, ChannelClass::Depolarizing));
        assert!(class_pair("UE").is_err());
    }
}
