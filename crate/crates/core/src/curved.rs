//! Conformally flat metrics `g = F·η` known as jets at the origin: Levi-Civita
//! data, scalar curvature, the Laplace–Beltrami operator, and the quantized
//! geodesic flow compared against the conformal Laplacian.

use crate::diff_op::{compose, OperatorSymbol};
use crate::error::{Error, Result};
use crate::jet::TaylorJet;
use crate::poly::{Monomial, Signature, SymbolPolynomial, VarKind, Weights};
use crate::quantizer::Quantizer;
use crate::scalar::{Coefficient, Gaussian, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricJet {
    factor: TaylorJet,
    sig: Signature,
}

impl MetricJet {
    pub fn new(factor: TaylorJet, sig: Signature) -> Result<Self> {
        if factor.n() != sig.n() {
            return Err(Error::DimensionMismatch { left: factor.n(), right: sig.n() });
        }
        if !factor.constant_term().is_one() {
            return Err(Error::Argument("the conformal factor must satisfy F(0) = 1".into()));
        }
        Ok(MetricJet { factor, sig })
    }

    pub fn flat(sig: Signature, r: u32) -> Self {
        MetricJet { factor: TaylorJet::one(sig.n(), r), sig }
    }

    pub fn factor(&self) -> &TaylorJet {
        &self.factor
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn order(&self) -> u32 {
        self.factor.order()
    }

    fn n(&self) -> usize {
        self.sig.n()
    }

    fn eta(&self, i: usize) -> Rational {
        Rational::from(self.sig.g(i))
    }

    /// `g_{ij}` (zero off the diagonal).
    pub fn metric(&self, i: usize, j: usize) -> TaylorJet {
        if i != j {
            return TaylorJet::zero(self.n(), self.order());
        }
        self.factor.scale(&self.eta(i))
    }

    /// `g^{ij}`.
    pub fn inverse_metric(&self, i: usize, j: usize) -> Result<TaylorJet> {
        if i != j {
            return Ok(TaylorJet::zero(self.n(), self.order()));
        }
        Ok(self.factor.inv()?.scale(&self.eta(i)))
    }
}

/// Christoffel symbols `Γ^a_{bc}` indexed `[a][b][c]`, valid to order r−1.
pub fn christoffel(m: &MetricJet) -> Result<Vec<Vec<Vec<TaylorJet>>>> {
    let n = m.n();
    let ginv: Vec<TaylorJet> = (0..n).map(|i| m.inverse_metric(i, i)).collect::<Result<_>>()?;
    // ∂_b g_{dc}
    let dg: Vec<Vec<Vec<TaylorJet>>> =
        (0..n).map(|b| (0..n).map(|d| (0..n).map(|c| m.metric(d, c).derivative(b)).collect()).collect()).collect();
    let half = Rational::new(1, 2);
    let mut gamma = vec![vec![vec![TaylorJet::zero(n, m.order().saturating_sub(1)); n]; n]; n];
    for (a, ga) in gamma.iter_mut().enumerate() {
        for (b, gab) in ga.iter_mut().enumerate() {
            for (c, slot) in gab.iter_mut().enumerate() {
                // only d = a survives the diagonal inverse metric
                let d = a;
                let s = dg[b][d][c].add(&dg[c][d][b]).sub(&dg[d][b][c]);
                *slot = ginv[a].mul(&s).scale(&half);
            }
        }
    }
    Ok(gamma)
}

/// Scalar curvature of `g` as a jet, valid to order r−2.
pub fn scalar_curvature(m: &MetricJet) -> Result<TaylorJet> {
    if m.order() < 2 {
        return Err(Error::JetOrder { have: m.order(), need: 2 });
    }
    let n = m.n();
    let g = christoffel(m)?;
    let r2 = m.order() - 2;
    // Ric_{bd} = R^a_{bad} = ∂_aΓ^a_{bd} − ∂_dΓ^a_{ba} + Γ^a_{ae}Γ^e_{bd} − Γ^a_{de}Γ^e_{ba}
    let mut scalar = TaylorJet::zero(n, r2);
    for b in 0..n {
        let d = b;
        let mut ric = TaylorJet::zero(n, r2);
        for a in 0..n {
            ric = ric.add(&g[a][b][d].derivative(a)).sub(&g[a][b][a].derivative(d));
            for e in 0..n {
                ric = ric.add(&g[a][a][e].mul(&g[e][b][d])).sub(&g[a][d][e].mul(&g[e][b][a]));
            }
        }
        scalar = scalar.add(&m.inverse_metric(b, d)?.mul(&ric));
    }
    Ok(scalar.truncate(r2))
}

pub fn curvature_at_origin(m: &MetricJet) -> Result<Rational> {
    Ok(scalar_curvature(m)?.constant_term())
}

/// An operator symbol whose x-dependence is known to a finite order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetOperator {
    pub symbol: OperatorSymbol,
    /// Coefficients are exact up to this x-degree.
    pub order: u32,
}

impl JetOperator {
    pub fn new(symbol: SymbolPolynomial, order: u32) -> Self {
        JetOperator { symbol: OperatorSymbol::new(symbol.truncate_x(order)), order }
    }
}

fn jet_symbol(j: &TaylorJet) -> SymbolPolynomial {
    j.to_polynomial()
}

/// Laplace–Beltrami `Δ_g = g^{ij}(∂_i∂_j − Γ^k_{ij}∂_k)` as a σ-symbol, valid
/// to order r−1.
pub fn laplace_beltrami(m: &MetricJet) -> Result<JetOperator> {
    let n = m.n();
    let gamma = christoffel(m)?;
    let mut out = SymbolPolynomial::zero(n);
    for i in 0..n {
        let gii = m.inverse_metric(i, i)?;
        let xi2 = {
            let mut mono = Monomial::one();
            mono.set(VarKind::Xi, i, 2);
            mono
        };
        out.add_assign(&jet_symbol(&gii).mul_monomial(&xi2, &Coefficient::one()));
        for (k, gk) in gamma.iter().enumerate() {
            let c = gii.mul(&gk[i][i]);
            out.sub_assign(&jet_symbol(&c).mul_monomial(&Monomial::var(VarKind::Xi, k), &Coefficient::one()));
        }
    }
    Ok(JetOperator::new(out, m.order().saturating_sub(1)))
}

/// `P̂ = |Vol_g|^{−μ} ∘ Q_{λ,μ}(P) ∘ |Vol_g|^{λ}` with `|Vol_g| = F^{n/2}`,
/// for a symbol whose coefficients are known to the metric's jet order.
pub fn quantum_hamiltonian(p: &SymbolPolynomial, m: &MetricJet, w: &Weights) -> Result<JetOperator> {
    if w.lambda() + w.mu() != Rational::one() {
        return Err(Error::Argument("the Schrödinger picture needs λ + μ = 1".into()));
    }
    let n = m.n();
    if p.n() != n {
        return Err(Error::DimensionMismatch { left: p.n(), right: n });
    }
    let r = m.order();
    let k = p.xi_degree().unwrap_or(0);
    if k > r {
        return Err(Error::JetOrder { have: r, need: k });
    }
    let half_n = Rational::new(n as i64, 2);
    let right = m.factor().pow(&(&half_n * w.lambda()))?;
    let left = m.factor().pow(&-&(&half_n * w.mu()))?;
    let quant = Quantizer::new(m.signature(), w).quantize(&p.truncate_x(r))?;
    let composed = compose(&quant, &OperatorSymbol::new(jet_symbol(&right)));
    let composed = compose(&OperatorSymbol::new(jet_symbol(&left)), &composed);
    Ok(JetOperator::new(composed.into_body(), r - k))
}

/// `n² / (4(n−1)(n+2))`.
pub fn yamabe_constant(n: usize) -> Rational {
    let n = n as i64;
    Rational::new(n * n, 4 * (n - 1) * (n + 2))
}

#[derive(Clone, Debug)]
pub struct GeodesicReport {
    pub n: usize,
    pub jet_order: u32,
    /// Both sides are compared up to this x-degree.
    pub compared_order: u32,
    pub curvature_at_origin: Rational,
    pub quantized: SymbolPolynomial,
    pub expected: SymbolPolynomial,
    /// (monomial, quantized coefficient, expected coefficient)
    pub mismatches: Vec<(Monomial, Coefficient, Coefficient)>,
}

impl GeodesicReport {
    pub fn pass(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Quantizes `H = g^{ij}ξ_iξ_j` at λ = μ = ½ and compares it with
/// `−ħ²(Δ_g − n²/(4(n−1)(n+2)) R_g)` on the common valid jet order.
pub fn geodesic_flow_check(m: &MetricJet) -> Result<GeodesicReport> {
    let n = m.n();
    let r = m.order();
    if r < 4 {
        return Err(Error::JetOrder { have: r, need: 4 });
    }
    let finv = m.factor().inv()?;
    let mut h = SymbolPolynomial::zero(n);
    for i in 0..n {
        let mut mono = Monomial::one();
        mono.set(VarKind::Xi, i, 2);
        h.add_assign(&jet_symbol(&finv.scale(&m.eta(i))).mul_monomial(&mono, &Coefficient::one()));
    }
    let half = Rational::new(1, 2);
    let quantized = quantum_hamiltonian(&h, m, &Weights::equal(half))?;

    let lap = laplace_beltrami(m)?;
    let curv = scalar_curvature(m)?;
    let corrected = &lap.symbol.into_body() - &jet_symbol(&curv.scale(&yamabe_constant(n)));
    let minus_h2 = Coefficient::scaled(Gaussian::real(Rational::from(-1)), 2);
    let expected_full = corrected.scale_coeff(&minus_h2);

    let compared = quantized.order.min(lap.order).min(curv.order());
    let lhs = quantized.symbol.body().truncate_x(compared);
    let rhs = expected_full.truncate_x(compared);
    let mut mismatches = Vec::new();
    let diff = &lhs - &rhs;
    for (mono, _) in diff.terms() {
        mismatches.push((*mono, lhs.coefficient(mono), rhs.coefficient(mono)));
    }
    Ok(GeodesicReport {
        n,
        jet_order: r,
        compared_order: compared,
        curvature_at_origin: curv.constant_term(),
        quantized: lhs,
        expected: rhs,
        mismatches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_metric() {
        let s = Signature::euclidean(3).unwrap();
        let m = MetricJet::flat(s, 4);
        assert!(curvature_at_origin(&m).unwrap().is_zero());
        let rep = geodesic_flow_check(&m).unwrap();
        assert!(rep.pass());
        let minus_h2 = Coefficient::scaled(Gaussian::real(Rational::from(-1)), 2);
        let lap = crate::poly::metric_square(&s, VarKind::Xi).scale_coeff(&minus_h2);
        assert_eq!(rep.quantized, lap);
    }

    #[test]
    fn round_sphere_like_factor() {
        // F = e^{2φ} with □φ(0) = 3 and ∇φ(0) = 0, so R(0) = −2(n−1)□φ(0) = −12.
        let s = Signature::euclidean(3).unwrap();
        let mut f = TaylorJet::one(3, 2);
        for i in 0..3 {
            f = f.add(&TaylorJet::coordinate(3, 2, i).mul(&TaylorJet::coordinate(3, 2, i)));
        }
        let m = MetricJet::new(f, s).unwrap();
        assert_eq!(curvature_at_origin(&m).unwrap(), Rational::from(-12));
    }

    #[test]
    fn order_requirements() {
        let s = Signature::euclidean(2).unwrap();
        assert!(matches!(geodesic_flow_check(&MetricJet::flat(s, 3)), Err(Error::JetOrder { .. })));
        assert!(matches!(curvature_at_origin(&MetricJet::flat(s, 1)), Err(Error::JetOrder { .. })));
        assert!(MetricJet::new(TaylorJet::constant(2, 4, Rational::from(2)), s).is_err());
    }

    #[test]
    fn trivial_conjugation() {
        let s = Signature::euclidean(2).unwrap();
        let m = MetricJet::flat(s, 4);
        let xi1 = SymbolPolynomial::xi(2, 0);
        let op = quantum_hamiltonian(&xi1, &m, &Weights::equal(Rational::new(1, 2))).unwrap();
        assert_eq!(op.symbol.into_body(), xi1.scale_coeff(&Coefficient::i_hbar_pow(1)));
    }
}
