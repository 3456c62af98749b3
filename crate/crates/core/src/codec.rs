//! JSON documents for symbols, operators, endomorphisms and jets.
//!
//! Rationals travel as strings (`"3"`, `"-1/2"`), ħ-powers as integers, and
//! terms are emitted in canonical (sorted) order so output is byte-stable.

use serde::{Deserialize, Serialize};

use crate::endo::EndoOperator;
use crate::error::{Error, Result};
use crate::jet::TaylorJet;
use crate::poly::{Monomial, Signature, SymbolPolynomial, VarKind, MAX_N};
use crate::scalar::{Coefficient, Gaussian, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    pub x: Vec<u32>,
    pub xi: Vec<u32>,
    /// `[re, im, hpow]` triples
    pub c: Vec<(String, String, u32)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyDoc {
    pub n: usize,
    pub p: usize,
    pub q: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub role: Option<String>,
    pub terms: Vec<TermDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EndoTermDoc {
    pub x: Vec<u32>,
    pub xi: Vec<u32>,
    pub dx: Vec<u32>,
    pub dxi: Vec<u32>,
    pub c: Vec<(String, String, u32)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EndoDoc {
    pub n: usize,
    pub p: usize,
    pub q: usize,
    pub terms: Vec<EndoTermDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JetTermDoc {
    pub x: Vec<u32>,
    pub v: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JetDoc {
    pub r: u32,
    pub coeffs: Vec<JetTermDoc>,
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    s.trim().parse::<Rational>().map_err(|e| Error::Parse(format!("bad rational {s:?}: {e}")))
}

fn encode_coefficient(c: &Coefficient) -> Vec<(String, String, u32)> {
    c.terms().iter().map(|t| (t.value.re.to_string(), t.value.im.to_string(), t.hpow)).collect()
}

fn decode_coefficient(parts: &[(String, String, u32)]) -> Result<Coefficient> {
    let mut c = Coefficient::zero();
    for (re, im, h) in parts {
        c.add_assign_ref(&Coefficient::scaled(Gaussian::new(parse_rational(re)?, parse_rational(im)?), *h));
    }
    Ok(c)
}

fn exps(m: &Monomial, kind: VarKind, n: usize) -> Vec<u32> {
    (0..n).map(|i| m.get(kind, i) as u32).collect()
}

fn fill(m: &mut Monomial, kind: VarKind, e: &[u32], n: usize) -> Result<()> {
    if e.len() != n {
        return Err(Error::Parse(format!("exponent vector has length {}, expected {n}", e.len())));
    }
    for (i, &v) in e.iter().enumerate() {
        let v = u8::try_from(v).map_err(|_| Error::Parse(format!("exponent {v} too large")))?;
        m.set(kind, i, v);
    }
    Ok(())
}

fn signature_of(n: usize, p: usize, q: usize) -> Result<Signature> {
    if p + q != n {
        return Err(Error::Parse(format!("p + q = {} does not match n = {n}", p + q)));
    }
    if n > MAX_N {
        return Err(Error::UnsupportedDimension { n, reason: "dimension exceeds MAX_N" });
    }
    Signature::new(p, q)
}

pub fn encode_poly(p: &SymbolPolynomial, sig: &Signature, role: Option<&str>) -> PolyDoc {
    let n = p.n();
    PolyDoc {
        n,
        p: sig.p(),
        q: sig.q(),
        role: role.map(str::to_string),
        terms: p
            .terms()
            .map(|(m, c)| TermDoc { x: exps(m, VarKind::X, n), xi: exps(m, VarKind::Xi, n), c: encode_coefficient(c) })
            .collect(),
    }
}

pub fn decode_poly(doc: &PolyDoc) -> Result<(SymbolPolynomial, Signature)> {
    let sig = signature_of(doc.n, doc.p, doc.q)?;
    let mut p = SymbolPolynomial::zero(doc.n);
    for t in &doc.terms {
        let mut m = Monomial::one();
        fill(&mut m, VarKind::X, &t.x, doc.n)?;
        fill(&mut m, VarKind::Xi, &t.xi, doc.n)?;
        p.add_term(m, decode_coefficient(&t.c)?);
    }
    Ok((p, sig))
}

pub fn encode_endo(e: &EndoOperator, sig: &Signature) -> EndoDoc {
    let n = e.n();
    EndoDoc {
        n,
        p: sig.p(),
        q: sig.q(),
        terms: e
            .terms()
            .map(|((m, d), c)| EndoTermDoc {
                x: exps(m, VarKind::X, n),
                xi: exps(m, VarKind::Xi, n),
                dx: exps(d, VarKind::X, n),
                dxi: exps(d, VarKind::Xi, n),
                c: encode_coefficient(c),
            })
            .collect(),
    }
}

pub fn decode_endo(doc: &EndoDoc) -> Result<(EndoOperator, Signature)> {
    let sig = signature_of(doc.n, doc.p, doc.q)?;
    let mut e = EndoOperator::zero(doc.n);
    for t in &doc.terms {
        let mut m = Monomial::one();
        let mut d = Monomial::one();
        fill(&mut m, VarKind::X, &t.x, doc.n)?;
        fill(&mut m, VarKind::Xi, &t.xi, doc.n)?;
        fill(&mut d, VarKind::X, &t.dx, doc.n)?;
        fill(&mut d, VarKind::Xi, &t.dxi, doc.n)?;
        e.add_term(m, d, decode_coefficient(&t.c)?);
    }
    Ok((e, sig))
}

pub fn encode_jet(j: &TaylorJet) -> JetDoc {
    JetDoc {
        r: j.order(),
        coeffs: j.terms().map(|(m, v)| JetTermDoc { x: exps(m, VarKind::X, j.n()), v: v.to_string() }).collect(),
    }
}

/// Decodes a jet; `n` is needed when the document has no terms.
pub fn decode_jet(doc: &JetDoc, n: usize) -> Result<TaylorJet> {
    let mut terms = Vec::new();
    for t in &doc.coeffs {
        let mut m = Monomial::one();
        fill(&mut m, VarKind::X, &t.x, n)?;
        if m.x_degree() > doc.r {
            return Err(Error::Parse(format!("jet term of degree {} exceeds order {}", m.x_degree(), doc.r)));
        }
        terms.push((m, parse_rational(&t.v)?));
    }
    Ok(TaylorJet::from_terms(n, doc.r, terms))
}

pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("documents always serialize")
}
