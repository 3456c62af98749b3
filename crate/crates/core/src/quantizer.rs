//! The conformally equivariant quantization map, built by diagonalizing the
//! operator Casimir degree by degree, plus the closed second-order map and the
//! Weyl map.

use crate::diff_op::OperatorSymbol;
use crate::endo::EndoOperator;
use crate::error::{Error, Result};
use crate::harmonic::{decompose, gamma_unchecked, HarmonicComponent, Spectral};
use crate::invariants::{d_op, euler_op, g_op, laplacian_op, nilpotent_part, t_op};
use crate::poly::{Signature, SymbolPolynomial, Weights};
use crate::scalar::{factorial, Coefficient, Gaussian, Rational};

/// One division step of the recurrence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEntry {
    pub k: u32,
    pub s: u32,
    pub l: u32,
    pub t: u32,
    /// `γ_{k,s} − γ_{ℓ,t}`
    pub divisor: Rational,
    /// True when the divisor vanished against a zero right-hand side.
    pub resonant: bool,
}

#[derive(Clone, Debug)]
pub struct QuantizationResult {
    pub input: SymbolPolynomial,
    pub output: OperatorSymbol,
    pub weights: Weights,
    pub trace: Vec<TraceEntry>,
}

/// Reusable solver for fixed signature and weights.
pub struct Quantizer {
    sig: Signature,
    weights: Weights,
    nilpotent: EndoOperator,
    spectral: Spectral,
}

impl Quantizer {
    pub fn new(sig: &Signature, w: &Weights) -> Self {
        Quantizer { sig: *sig, weights: w.clone(), nilpotent: nilpotent_part(sig, w.lambda()), spectral: Spectral::new(sig) }
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn weights(&self) -> &Weights {
        &self.weights
    }

    /// The eigenvector of `C_{λ,μ}` with eigenvalue `γ_{k,s}` and principal
    /// part `comp.part`. Trace entries are appended to `trace`.
    pub fn solve_component(&self, comp: &HarmonicComponent, trace: &mut Vec<TraceEntry>) -> Result<SymbolPolynomial> {
        let n = self.sig.n();
        let delta = self.weights.delta();
        let (k, s) = (comp.k, comp.s);
        let target = gamma_unchecked(k, s, n, delta);
        let mut total = comp.part.clone();
        let mut level = comp.part.clone();
        for l in (0..k).rev() {
            let rhs = self.nilpotent.apply(&level);
            let mut next = SymbolPolynomial::zero(n);
            let t_min = s.saturating_sub(k - l);
            let t_max = s.min(l / 2);
            let pieces = self.spectral.split(&rhs, l, &self.sig);
            debug_assert!(
                pieces.iter().enumerate().all(|(t, p)| (t_min as usize..=t_max as usize).contains(&t) || p.is_zero()),
                "right-hand side left the tree"
            );
            for t in t_min..=t_max {
                let piece = &pieces[t as usize];
                let divisor = &target - &gamma_unchecked(l, t, n, delta);
                if divisor.is_zero() {
                    if !piece.is_zero() {
                        return Err(Error::CriticalResonance { k, s, l, t, delta: delta.clone() });
                    }
                    trace.push(TraceEntry { k, s, l, t, divisor, resonant: true });
                    continue;
                }
                if !piece.is_zero() {
                    next.add_assign(&piece.scale(&divisor.recip()));
                    trace.push(TraceEntry { k, s, l, t, divisor, resonant: false });
                }
            }
            if next.is_zero() {
                // every lower level is generated from this one
                if l > 0 {
                    self.record_tail(k, s, l, &target, trace);
                }
                break;
            }
            total.add_assign(&next);
            level = next;
        }
        Ok(total)
    }

    /// Zero divisors below a level whose right-hand side vanished are
    /// consistent; record them so the trace stays complete.
    fn record_tail(&self, k: u32, s: u32, below: u32, target: &Rational, trace: &mut Vec<TraceEntry>) {
        let n = self.sig.n();
        for l in (0..below).rev() {
            for t in s.saturating_sub(k - l)..=s.min(l / 2) {
                let divisor = target - &gamma_unchecked(l, t, n, self.weights.delta());
                if divisor.is_zero() {
                    trace.push(TraceEntry { k, s, l, t, divisor, resonant: true });
                }
            }
        }
    }

    pub fn quantize_tilde(&self, p: &SymbolPolynomial) -> Result<QuantizationResult> {
        if p.n() != self.sig.n() {
            return Err(Error::DimensionMismatch { left: p.n(), right: self.sig.n() });
        }
        let mut out = SymbolPolynomial::zero(p.n());
        let mut trace = Vec::new();
        for comp in decompose(p, &self.sig) {
            out.add_assign(&self.solve_component(&comp, &mut trace)?);
        }
        Ok(QuantizationResult { input: p.clone(), output: OperatorSymbol::new(out), weights: self.weights.clone(), trace })
    }

    pub fn apply_tilde(&self, p: &SymbolPolynomial) -> Result<SymbolPolynomial> {
        Ok(self.quantize_tilde(p)?.output.into_body())
    }

    pub fn quantize(&self, p: &SymbolPolynomial) -> Result<OperatorSymbol> {
        Ok(self.quantize_tilde(&i_hbar(p, false)?)?.output)
    }

    pub fn quantize_graded(&self, p: &SymbolPolynomial) -> Result<SymbolPolynomial> {
        let q = self.quantize(p)?;
        i_hbar(q.body(), true)
    }
}

pub fn solve_eigenvector(comp: &HarmonicComponent, w: &Weights, sig: &Signature) -> Result<OperatorSymbol> {
    let mut trace = Vec::new();
    Ok(OperatorSymbol::new(Quantizer::new(sig, w).solve_component(comp, &mut trace)?))
}

pub fn quantize_tilde(p: &SymbolPolynomial, w: &Weights, sig: &Signature) -> Result<QuantizationResult> {
    Quantizer::new(sig, w).quantize_tilde(p)
}

pub fn quantize(p: &SymbolPolynomial, w: &Weights, sig: &Signature) -> Result<OperatorSymbol> {
    Quantizer::new(sig, w).quantize(p)
}

pub fn quantize_graded(p: &SymbolPolynomial, w: &Weights, sig: &Signature) -> Result<SymbolPolynomial> {
    Quantizer::new(sig, w).quantize_graded(p)
}

/// Multiplies each ξ-degree-m term by `(iħ)^m`, or divides when `invert`.
pub fn i_hbar(p: &SymbolPolynomial, invert: bool) -> Result<SymbolPolynomial> {
    let mut out = SymbolPolynomial::zero(p.n());
    for (m, c) in p.terms() {
        let deg = m.xi_degree();
        let coeff = if invert {
            let shifted = c
                .shift_hpow(-(deg as i64))
                .ok_or_else(|| Error::Argument(format!("term of ξ-degree {deg} carries too small a power of ħ")))?;
            let minus_i = Gaussian::i_pow((4 - deg % 4) % 4);
            &shifted * &Coefficient::scaled(minus_i, 0)
        } else {
            c * &Coefficient::i_hbar_pow(deg)
        };
        out.add_term(*m, coeff);
    }
    Ok(out)
}

/// The resonant shifts of the second-order map.
pub fn second_order_resonances(n: usize) -> Vec<Rational> {
    let n = n as i64;
    let mut v = vec![
        Rational::new(2, n),
        Rational::new(n + 2, 2 * n),
        Rational::one(),
        Rational::new(n + 1, n),
        Rational::new(n + 2, n),
    ];
    v.sort();
    v.dedup();
    v
}

/// The five coefficients `γ₁..γ₅` of the second-order map.
pub fn second_order_coefficients(sig: &Signature, w: &Weights) -> Result<[Rational; 5]> {
    let delta = w.delta();
    if second_order_resonances(sig.n()).contains(delta) {
        return Err(Error::SecondOrderResonance { delta: delta.clone() });
    }
    let n = Rational::from(sig.n() as i64);
    let one = Rational::one();
    let two = Rational::from(2);
    let (l, m) = (w.lambda(), w.mu());
    let nd = &n * delta;
    let nd1 = &n * &(delta - &one); // n(δ−1)
    let a = &nd - &two; // nδ − 2
    let b = &nd1 - &two; // n(δ−1) − 2
    let c = &nd1 - &one; // n(δ−1) − 1
    let e = &(&n * &(&(&two * delta) - &one)) - &two; // n(2δ−1) − 2

    let g1 = &(&n * &(&(l + m) - &one)) / &(&(&two * &a) * &b);
    let g2 = l / &(&one - delta);
    let g3 = &(&(&one - l) - m) / &(&(delta - &one) * &b);
    let quad = &(&(&(&two * l) * l) - &(l * m)) - &(m * m);
    let quad = &(&quad + &(&two * m)) - &one;
    let poly = &(&two + &(&(&(&Rational::from(4) * l) - &one) * &n)) + &(&quad * &(&n * &n));
    let g4 = &(&(&n * l) * &poly) / &(&(&(&(&two * &c) * &e) * &a) * &b);
    let g5 = &(&(&n * l) * &(&(&n * l) + &one)) / &(&(&two * &c) * &b);
    Ok([g1, g2, g3, g4, g5])
}

/// `Id + γ₁G₀ + γ₂D + γ₃ℰD + γ₄Δ₀ + γ₅D²`.
pub fn second_order_map(sig: &Signature, w: &Weights) -> Result<EndoOperator> {
    let [g1, g2, g3, g4, g5] = second_order_coefficients(sig, w)?;
    let n = sig.n();
    let t = t_op(sig);
    let d = d_op(sig);
    let mut op = EndoOperator::identity(n);
    op.add_assign(&g_op(sig).compose(&t).scale(&g1));
    op.add_assign(&d.scale(&g2));
    op.add_assign(&euler_op(sig).compose(&d).scale(&g3));
    op.add_assign(&laplacian_op(sig).compose(&t).scale(&g4));
    op.add_assign(&d.compose(&d).scale(&g5));
    Ok(op)
}

/// `Σ_m (1/m!) (iħ/2)^m D^m (P)`.
pub fn weyl_map(p: &SymbolPolynomial, sig: &Signature) -> SymbolPolynomial {
    let d = d_op(sig);
    let half = Rational::new(1, 2);
    let mut out = p.clone();
    let mut cur = p.clone();
    let mut m = 0u32;
    loop {
        cur = d.apply(&cur);
        if cur.is_zero() {
            break;
        }
        m += 1;
        let k = Coefficient::i_hbar_pow(m).scale(&(&half.pow(m) / &factorial(m)));
        out.add_assign(&cur.scale_coeff(&k));
    }
    out
}
