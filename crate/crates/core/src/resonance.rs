//! Resonant weight shifts δ_{k,ℓ;s,t}, the sets Σ ⊃ Σ₀, and an empirical
//! probe that decides which resonances actually obstruct the quantization.

use std::fmt;

use crate::error::{Error, Result};
use crate::harmonic::{HarmonicComponent, Spectral};
use crate::poly::{monomials_of_degree, Signature, SymbolPolynomial, VarKind, Weights};
use crate::quantizer::Quantizer;
use crate::scalar::{Coefficient, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResonanceEntry {
    pub k: u32,
    pub l: u32,
    pub s: u32,
    pub t: u32,
    pub delta: Rational,
    /// `0 ≤ s − t ≤ k − ℓ`
    pub in_sigma0: bool,
}

fn check_indices(k: u32, l: u32, s: u32, t: u32) -> Result<()> {
    if l >= k || 2 * s > k || 2 * t > l {
        return Err(Error::Range(format!("need k > l >= 0, 2s <= k, 2t <= l; got k={k}, l={l}, s={s}, t={t}")));
    }
    Ok(())
}

fn delta_unchecked(k: u32, l: u32, s: u32, t: u32, n: usize) -> Rational {
    let (k, l, s, t, n) = (k as i64, l as i64, s as i64, t as i64, n as i64);
    let num = (k - l + t - s) * (k + l - 2 * (s + t) + n - 1) + (s - t) * (k + l + 1) + 2 * (k * t - l * s);
    Rational::new(num, n * (k - l))
}

/// The shift δ at which `γ_{k,s} = γ_{ℓ,t}`.
pub fn delta_value(k: u32, l: u32, s: u32, t: u32, sig: &Signature) -> Result<Rational> {
    check_indices(k, l, s, t)?;
    Ok(delta_unchecked(k, l, s, t, sig.n()))
}

/// All resonances with `k ≤ k_max`, sorted by δ and then by indices.
pub fn enumerate_sigma(sig: &Signature, k_max: u32) -> Result<Vec<ResonanceEntry>> {
    if k_max < 1 {
        return Err(Error::Argument("k_max must be at least 1".into()));
    }
    let mut out = Vec::new();
    for k in 1..=k_max {
        for l in 0..k {
            for s in 0..=k / 2 {
                for t in 0..=l / 2 {
                    let delta = delta_unchecked(k, l, s, t, sig.n());
                    let in_sigma0 = s >= t && s - t <= k - l;
                    out.push(ResonanceEntry { k, l, s, t, delta, in_sigma0 });
                }
            }
        }
    }
    out.sort_by(|a, b| a.delta.cmp(&b.delta).then((a.k, a.l, a.s, a.t).cmp(&(b.k, b.l, b.s, b.t))));
    out.dedup_by(|a, b| (a.k, a.l, a.s, a.t) == (b.k, b.l, b.s, b.t));
    Ok(out)
}

/// Distinct δ values of a list of entries, ascending.
pub fn sigma_values(entries: &[ResonanceEntry]) -> Vec<Rational> {
    let mut v: Vec<Rational> = entries.iter().map(|e| e.delta.clone()).collect();
    v.sort();
    v.dedup();
    v
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProbeStatus {
    Ok,
    ResonantConsistent,
    Critical,
}

impl fmt::Display for ProbeStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProbeStatus::Ok => "OK",
            ProbeStatus::ResonantConsistent => "ResonantConsistent",
            ProbeStatus::Critical => "Critical",
        })
    }
}

/// The component and the division step that failed (or vanished).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub l: u32,
    pub t: u32,
    pub element: SymbolPolynomial,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeEntry {
    pub k: u32,
    pub s: u32,
    pub status: ProbeStatus,
    /// Size of the spanning set that was solved.
    pub checked: usize,
    pub witness: Option<Witness>,
}

/// Spanning set of `S_{(k,s)}` large enough to exercise every level of the
/// recurrence: projections of `x^a ξ^b` with `|b| = k`, `|a| ≤ k`.
pub fn spanning_set(sig: &Signature, k: u32) -> Vec<Vec<SymbolPolynomial>> {
    let n = sig.n();
    let spectral = Spectral::new(sig);
    let mut cells: Vec<Vec<SymbolPolynomial>> = vec![Vec::new(); (k / 2 + 1) as usize];
    let xi_monos = monomials_of_degree(n, VarKind::Xi, k);
    let mut x_monos = Vec::new();
    for d in 0..=k {
        x_monos.extend(monomials_of_degree(n, VarKind::X, d));
    }
    for b in &xi_monos {
        let pure = SymbolPolynomial::monomial(n, *b, Coefficient::one());
        let parts = spectral.split(&pure, k, sig);
        for (s, part) in parts.into_iter().enumerate() {
            if part.is_zero() || cells[s].contains(&part) {
                continue;
            }
            for a in &x_monos {
                cells[s].push(part.mul_monomial(a, &Coefficient::one()));
            }
        }
    }
    cells
}

/// Runs the recurrence on a spanning set of every cell `(k,s)`, `k ≤ k_max`.
pub fn probe_critical(sig: &Signature, w: &Weights, k_max: u32) -> Vec<ProbeEntry> {
    let quant = Quantizer::new(sig, w);
    let mut report = Vec::new();
    for k in 0..=k_max {
        for (s, elements) in spanning_set(sig, k).into_iter().enumerate() {
            let s = s as u32;
            let mut entry = ProbeEntry { k, s, status: ProbeStatus::Ok, checked: 0, witness: None };
            for element in elements {
                entry.checked += 1;
                let comp = HarmonicComponent { k, s, part: element.clone() };
                let mut trace = Vec::new();
                match quant.solve_component(&comp, &mut trace) {
                    Err(Error::CriticalResonance { l, t, .. }) => {
                        entry.status = ProbeStatus::Critical;
                        entry.witness = Some(Witness { l, t, element });
                        break;
                    }
                    Err(e) => unreachable!("solver failed unexpectedly: {e}"),
                    Ok(_) => {
                        if let Some(hit) = trace.iter().find(|e| e.resonant) {
                            if entry.status == ProbeStatus::Ok {
                                entry.status = ProbeStatus::ResonantConsistent;
                                entry.witness = Some(Witness { l: hit.l, t: hit.t, element });
                            }
                        }
                    }
                }
            }
            report.push(entry);
        }
    }
    report
}
