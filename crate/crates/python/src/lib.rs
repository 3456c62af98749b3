//! Python bindings. Symbols cross the boundary as the same JSON documents the
//! CLI reads and writes.

use cequant::codec::{self, PolyDoc};
use cequant::harmonic::gamma;
use cequant::quantizer::Quantizer;
use cequant::resonance::{enumerate_sigma, sigma_values};
use cequant::star::{StarProduct, StarTruncation};
use cequant::verify::{run_suite, Suite, SuiteConfig};
use cequant::{Error, Rational, Signature, SymbolPolynomial, Weights};
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

create_exception!(cequant, ResonanceError, PyException, "The requested quantization hits a critical resonance.");

fn to_py(e: Error) -> PyErr {
    if e.is_resonance() {
        ResonanceError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn rational(s: &str) -> PyResult<Rational> {
    codec::parse_rational(s).map_err(to_py)
}

fn decode(text: &str) -> PyResult<(SymbolPolynomial, Signature)> {
    codec::decode_poly(&codec::from_json::<PolyDoc>(text).map_err(to_py)?).map_err(to_py)
}

fn encode(p: &SymbolPolynomial, sig: &Signature, role: &str) -> String {
    codec::to_json(&codec::encode_poly(p, sig, Some(role)))
}

/// Quantizes a symbol document. `form` is "hbar", "tilde" or "graded".
#[pyfunction]
#[pyo3(signature = (symbol, lam, mu, form = "hbar"))]
fn quantize(symbol: &str, lam: &str, mu: &str, form: &str) -> PyResult<String> {
    let (p, sig) = decode(symbol)?;
    let quant = Quantizer::new(&sig, &Weights::new(rational(lam)?, rational(mu)?));
    match form {
        "hbar" => Ok(encode(quant.quantize(&p).map_err(to_py)?.body(), &sig, "operator")),
        "tilde" => Ok(encode(&quant.apply_tilde(&p).map_err(to_py)?, &sig, "operator")),
        "graded" => Ok(encode(&quant.quantize_graded(&p).map_err(to_py)?, &sig, "symbol")),
        other => Err(PyValueError::new_err(format!("unknown form {other:?}"))),
    }
}

#[pyfunction]
#[pyo3(signature = (left, right, lam = "1/2", order = 2))]
fn star(left: &str, right: &str, lam: &str, order: u32) -> PyResult<String> {
    let (a, sa) = decode(left)?;
    let (b, sb) = decode(right)?;
    if sa != sb {
        return Err(PyValueError::new_err("left and right symbols have different signatures"));
    }
    let product = StarProduct::new(&StarTruncation::new(order, rational(lam)?), &sa).product(&a, &b).map_err(to_py)?;
    Ok(encode(&product, &sa, "symbol"))
}

/// Distinct resonant values of δ for ξ-degrees up to `max_k`, as strings.
#[pyfunction]
fn resonance_values(n: usize, max_k: u32) -> PyResult<Vec<String>> {
    let sig = Signature::euclidean(n).map_err(to_py)?;
    let entries = enumerate_sigma(&sig, max_k).map_err(to_py)?;
    Ok(sigma_values(&entries).iter().map(Rational::to_string).collect())
}

/// Eigenvalue of the symbol Casimir on the (k, s) component.
#[pyfunction]
fn casimir_eigenvalue(k: u32, s: u32, n: usize, delta: &str) -> PyResult<String> {
    let sig = Signature::euclidean(n).map_err(to_py)?;
    Ok(gamma(k, s, &sig, &rational(delta)?).map_err(to_py)?.to_string())
}

/// Runs a self-check suite; returns `(checked, failures)`.
#[pyfunction]
#[pyo3(signature = (suite, p, q = 0, seed = 1))]
fn verify(suite: &str, p: usize, q: usize, seed: u64) -> PyResult<(usize, usize)> {
    let suite: Suite = suite.parse().map_err(to_py)?;
    let sig = Signature::new(p, q).map_err(to_py)?;
    let rep = run_suite(suite, &SuiteConfig::new(sig, seed)).map_err(to_py)?;
    Ok((rep.checked, rep.failures))
}

#[pymodule]
#[pyo3(name = "cequant")]
fn cequant_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("ResonanceError", m.py().get_type::<ResonanceError>())?;
    m.add_function(wrap_pyfunction!(quantize, m)?)?;
    m.add_function(wrap_pyfunction!(star, m)?)?;
    m.add_function(wrap_pyfunction!(resonance_values, m)?)?;
    m.add_function(wrap_pyfunction!(casimir_eigenvalue, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
