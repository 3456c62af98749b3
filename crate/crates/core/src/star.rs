//! The associative product induced on symbols by the quantization map, and
//! its first-order analysis.

use crate::diff_op::compose;
use crate::error::{Error, Result};
use crate::invariants::d_op;
use crate::poly::{Signature, SymbolPolynomial, VarKind, Weights};
use crate::quantizer::{i_hbar, Quantizer};
use crate::scalar::{Coefficient, Gaussian, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarTruncation {
    /// Highest power of ħ kept.
    pub order: u32,
    pub lambda: Rational,
}

impl StarTruncation {
    pub fn new(order: u32, lambda: Rational) -> Self {
        StarTruncation { order, lambda }
    }
}

/// Star product for fixed weight, reusing one quantizer.
pub struct StarProduct {
    quantizer: Quantizer,
    order: u32,
}

impl StarProduct {
    pub fn new(cfg: &StarTruncation, sig: &Signature) -> Self {
        StarProduct { quantizer: Quantizer::new(sig, &Weights::equal(cfg.lambda.clone())), order: cfg.order }
    }

    /// `Q̃⁻¹(X) = Σ_j (−𝒩)^j X` with `𝒩 = Q̃ − Id` nilpotent.
    fn inverse_tilde(&self, x: &SymbolPolynomial) -> Result<SymbolPolynomial> {
        let mut out = x.clone();
        let mut cur = x.clone();
        let mut sign_negative = true;
        loop {
            let next = &self.quantizer.apply_tilde(&cur)? - &cur;
            if next.is_zero() {
                break;
            }
            if sign_negative {
                out.sub_assign(&next);
            } else {
                out.add_assign(&next);
            }
            sign_negative = !sign_negative;
            cur = next;
        }
        Ok(out)
    }

    pub fn product(&self, p: &SymbolPolynomial, q: &SymbolPolynomial) -> Result<SymbolPolynomial> {
        if p.n() != q.n() {
            return Err(Error::DimensionMismatch { left: p.n(), right: q.n() });
        }
        let qp = self.quantizer.quantize(p)?;
        let qq = self.quantizer.quantize(q)?;
        let composed = compose(&qp, &qq);
        let back = self.inverse_tilde(composed.body())?;
        Ok(i_hbar(&back, true)?.truncate_hbar(self.order))
    }

    /// First-order part `A` of the graded quantization map:
    /// `Q(P) = P + iħ A(P) + O(ħ²)` for ħ-free `P`.
    pub fn first_order_cochain(&self, p: &SymbolPolynomial) -> Result<SymbolPolynomial> {
        let g = self.quantizer.quantize_graded(p)?;
        Ok(divide_by_i(&g.hbar_coefficient(1)))
    }
}

fn divide_by_i(p: &SymbolPolynomial) -> SymbolPolynomial {
    p.scale_coeff(&Coefficient::scaled(Gaussian::new(Rational::zero(), Rational::from(-1)), 0))
}

pub fn star(p: &SymbolPolynomial, q: &SymbolPolynomial, cfg: &StarTruncation, sig: &Signature) -> Result<SymbolPolynomial> {
    StarProduct::new(cfg, sig).product(p, q)
}

/// `{P,Q} = ∂_{ξ_i}P ∂_iQ − ∂_iP ∂_{ξ_i}Q`.
pub fn poisson(p: &SymbolPolynomial, q: &SymbolPolynomial) -> SymbolPolynomial {
    let mut out = SymbolPolynomial::zero(p.n());
    for i in 0..p.n() {
        out.add_assign(&(&p.differentiate(VarKind::Xi, i) * &q.differentiate(VarKind::X, i)));
        out.sub_assign(&(&p.differentiate(VarKind::X, i) * &q.differentiate(VarKind::Xi, i)));
    }
    out
}

/// Hochschild coboundary `dA(P,Q) = A(P)Q + PA(Q) − A(PQ)` of a linear map.
pub fn hochschild<F>(a: F, p: &SymbolPolynomial, q: &SymbolPolynomial) -> Result<SymbolPolynomial>
where
    F: Fn(&SymbolPolynomial) -> Result<SymbolPolynomial>,
{
    let mut out = &a(p)? * q;
    out.add_assign(&(p * &a(q)?));
    out.sub_assign(&a(&(p * q))?);
    Ok(out)
}

/// The ħ¹ coefficient of `P * Q`, divided by `i`, minus `½{P,Q}`. It vanishes
/// exactly when the first-order term is the Poisson bracket.
pub fn star_deviation(p: &SymbolPolynomial, q: &SymbolPolynomial, lambda: &Rational, sig: &Signature) -> Result<SymbolPolynomial> {
    let sp = StarProduct::new(&StarTruncation::new(1, lambda.clone()), sig);
    let first = divide_by_i(&sp.product(p, q)?.hbar_coefficient(1));
    Ok(&first - &poisson(p, q).scale(&Rational::new(1, 2)))
}

/// The coboundary `d(A − ½D)(P,Q)` predicted for [`star_deviation`].
pub fn predicted_deviation(p: &SymbolPolynomial, q: &SymbolPolynomial, lambda: &Rational, sig: &Signature) -> Result<SymbolPolynomial> {
    let sp = StarProduct::new(&StarTruncation::new(1, lambda.clone()), sig);
    let d = d_op(sig);
    let half = Rational::new(1, 2);
    hochschild(|x| Ok(&sp.first_order_cochain(x)? - &d.apply(x).scale(&half)), p, q)
}
