//! Randomized and exhaustive self-checks, exposed through `cequant verify`.
//!
//! Every suite counts the identities it checked and the ones that failed.
//! Errors (a critical resonance at the requested weights, a bad option) are
//! returned as errors rather than failures.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::codec;
use crate::curved::{geodesic_flow_check, MetricJet};
use crate::endo::commutator;
use crate::error::{Error, Result};
use crate::harmonic::{decompose, rho};
use crate::invariants::{
    algebra_relations, casimir_operators, casimir_operators_basis_sum, casimir_sl2_relation, casimir_symbols,
    casimir_symbols_basis_sum, inversion_relations, invariant_operator, InvariantName,
};
use crate::jet::TaylorJet;
use crate::lie::{conformal_generators, operator_lie, operator_lie_endo, symbol_lie, symbol_lie_endo};
use crate::poly::{Signature, SymbolPolynomial, Weights};
use crate::quantizer::Quantizer;
use crate::resonance::enumerate_sigma;
use crate::harmonic::gamma;
use crate::scalar::Rational;
use crate::star::{predicted_deviation, star_deviation, StarProduct, StarTruncation};
use crate::diff_op::OperatorSymbol;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Equivariance,
    Casimir,
    Commutant,
    Harmonic,
    Star,
    SelfAdjoint,
    Resonance,
    Geodesic,
    Codec,
    All,
}

impl Suite {
    pub const EACH: [Suite; 9] = [
        Suite::Equivariance,
        Suite::Casimir,
        Suite::Commutant,
        Suite::Harmonic,
        Suite::Star,
        Suite::SelfAdjoint,
        Suite::Resonance,
        Suite::Geodesic,
        Suite::Codec,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Suite::Equivariance => "equivariance",
            Suite::Casimir => "casimir",
            Suite::Commutant => "commutant",
            Suite::Harmonic => "harmonic",
            Suite::Star => "star",
            Suite::SelfAdjoint => "selfadjoint",
            Suite::Resonance => "resonance",
            Suite::Geodesic => "geodesic",
            Suite::Codec => "codec",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.as_str() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub sig: Signature,
    /// Weights for suites that need one; each suite has its own default.
    pub weights: Option<Weights>,
    /// Maximal ξ-degree of random symbols.
    pub degree: u32,
    /// Maximal x-degree of random symbols.
    pub x_degree: u32,
    pub samples: usize,
    pub max_k: u32,
    /// ħ-truncation for the star suite, jet order for the geodesic suite.
    pub order: Option<u32>,
    pub seed: u64,
}

impl SuiteConfig {
    pub fn new(sig: Signature, seed: u64) -> Self {
        SuiteConfig { sig, weights: None, degree: 3, x_degree: 2, samples: 10, max_k: 4, order: None, seed }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checked: usize,
    pub failures: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failed: Vec<String>,
}

impl SuiteReport {
    fn new(suite: Suite) -> Self {
        SuiteReport { suite: suite.as_str().to_string(), ..Default::default() }
    }

    fn record(&mut self, ok: bool, label: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures += 1;
            self.failed.push(label());
        }
    }

    fn absorb(&mut self, other: SuiteReport) {
        self.checked += other.checked;
        self.failures += other.failures;
        self.failed.extend(other.failed.into_iter().map(|f| format!("{}: {f}", other.suite)));
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

fn q(a: i64, b: i64) -> Rational {
    Rational::new(a, b)
}

pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let sig = &cfg.sig;
    let n = sig.n();
    let mut rep = SuiteReport::new(suite);
    match suite {
        Suite::All => {
            for s in Suite::EACH {
                rep.absorb(run_suite(s, cfg)?);
            }
        }
        Suite::Equivariance => {
            let w = cfg.weights.clone().unwrap_or_else(|| Weights::new(q(1, 3), q(3, 4)));
            let basis = conformal_generators(sig)?;
            let quant = Quantizer::new(sig, &w);
            for sample in 0..cfg.samples {
                let p = SymbolPolynomial::random(&mut rng, n, cfg.degree, cfg.x_degree, 4, false);
                let qp = OperatorSymbol::new(quant.apply_tilde(&p)?);
                for (id, x) in basis.ids().iter().zip(basis.generators()) {
                    let lhs = operator_lie(x, &qp, &w).into_body();
                    let rhs = quant.apply_tilde(&symbol_lie(x, &p, w.delta()))?;
                    rep.record(lhs == rhs, || format!("sample {sample}, generator {id}"));
                }
            }
        }
        Suite::Casimir => {
            let w = cfg.weights.clone().unwrap_or_else(|| Weights::new(q(1, 3), q(3, 4)));
            let c_sym = casimir_symbols(sig, w.delta());
            let c_op = casimir_operators(sig, &w);
            rep.record(casimir_symbols_basis_sum(sig, w.delta())? == c_sym, || "C_delta basis sum".into());
            rep.record(casimir_operators_basis_sum(sig, &w)? == c_op, || "C_lambda,mu basis sum".into());
            rep.record(casimir_sl2_relation(sig, w.delta()).holds(), || "C_delta via sl(2) Casimir".into());
            let basis = conformal_generators(sig)?;
            for (id, x) in basis.ids().iter().zip(basis.generators()) {
                let a = commutator(&c_sym, &symbol_lie_endo(x, w.delta()));
                rep.record(a.is_zero(), || format!("[C_delta, L({id})] != 0"));
                let b = commutator(&c_op, &operator_lie_endo(x, &w));
                rep.record(b.is_zero(), || format!("[C_lambda,mu, L({id})] != 0"));
            }
        }
        Suite::Commutant => {
            let delta = cfg.weights.as_ref().map(|w| w.delta().clone()).unwrap_or_else(|| q(2, 5));
            for rel in algebra_relations(sig) {
                rep.record(rel.holds(), || rel.name.clone());
            }
            for i in 0..n {
                for rel in inversion_relations(sig, &delta, i)? {
                    rep.record(rel.holds(), || rel.name.clone());
                }
            }
            if n == 2 {
                let z = invariant_operator(InvariantName::Z, sig)?;
                rep.record(z.is_zero(), || "Z vanishes".into());
            }
        }
        Suite::Harmonic => {
            let r0 = invariant_operator(InvariantName::R0, sig)?;
            for sample in 0..cfg.samples {
                let p = SymbolPolynomial::random(&mut rng, n, cfg.degree, cfg.x_degree, 6, false);
                let comps = decompose(&p, sig);
                let mut sum = SymbolPolynomial::zero(n);
                for c in &comps {
                    sum.add_assign(&c.part);
                    let ev = rho(c.k, c.s, sig)?;
                    rep.record(r0.apply(&c.part) == c.part.scale(&ev), || {
                        format!("sample {sample}: component ({},{}) is not an R0 eigenvector", c.k, c.s)
                    });
                }
                rep.record(sum == p, || format!("sample {sample}: components do not sum back"));
            }
        }
        Suite::Star => {
            let lambda = cfg.weights.as_ref().map(|w| w.lambda().clone()).unwrap_or_else(|| q(1, 3));
            let order = cfg.order.unwrap_or(2);
            let sp = StarProduct::new(&StarTruncation::new(order, lambda.clone()), sig);
            let deg = cfg.degree.min(3);
            for sample in 0..cfg.samples {
                let a = SymbolPolynomial::random(&mut rng, n, deg, cfg.x_degree, 3, false);
                let b = SymbolPolynomial::random(&mut rng, n, deg, cfg.x_degree, 3, false);
                let c = SymbolPolynomial::random(&mut rng, n, deg, cfg.x_degree, 2, false);
                let half = star_deviation(&a, &b, &q(1, 2), sig)?;
                rep.record(half.is_zero(), || format!("sample {sample}: first order is not half the Poisson bracket"));
                let dev = star_deviation(&a, &b, &lambda, sig)?;
                rep.record(dev == predicted_deviation(&a, &b, &lambda, sig)?, || {
                    format!("sample {sample}: deviation differs from the coboundary")
                });
                let left = sp.product(&sp.product(&a, &b)?, &c)?;
                let right = sp.product(&a, &sp.product(&b, &c)?)?;
                rep.record(left == right, || format!("sample {sample}: not associative to order {order}"));
            }
        }
        Suite::SelfAdjoint => {
            let delta = cfg.weights.as_ref().map(|w| w.delta().clone()).unwrap_or_else(Rational::zero);
            let lambda = &(&Rational::one() - &delta) * &q(1, 2);
            let quant = Quantizer::new(sig, &Weights::from_delta(lambda, delta));
            for sample in 0..cfg.samples {
                let p = SymbolPolynomial::random(&mut rng, n, cfg.degree, cfg.x_degree, 4, true);
                let qp = quant.quantize(&p)?;
                rep.record(qp.adjoint() == qp, || format!("sample {sample}: quantization is not self-adjoint"));
            }
        }
        Suite::Resonance => {
            for e in enumerate_sigma(sig, cfg.max_k)? {
                let label = || format!("({},{};{},{})", e.k, e.l, e.s, e.t);
                let collide = gamma(e.k, e.s, sig, &e.delta)? == gamma(e.l, e.t, sig, &e.delta)?;
                rep.record(collide, || format!("{}: eigenvalues do not collide", label()));
                if e.in_sigma0 {
                    rep.record(e.delta.signum() > 0, || format!("{}: Sigma0 entry is not positive", label()));
                }
            }
        }
        Suite::Geodesic => {
            let r = cfg.order.unwrap_or(4);
            let flat = MetricJet::flat(*sig, r);
            rep.record(geodesic_flow_check(&flat)?.pass(), || "flat metric".into());
            for sample in 0..cfg.samples {
                let f = TaylorJet::random_unit(&mut rng, n, r, sample % 2 == 0);
                let report = geodesic_flow_check(&MetricJet::new(f, *sig)?)?;
                rep.record(report.pass(), || format!("sample {sample}: {} mismatches", report.mismatches.len()));
            }
        }
        Suite::Codec => {
            for sample in 0..cfg.samples {
                let p = SymbolPolynomial::random(&mut rng, n, cfg.degree, cfg.x_degree, 8, false);
                let text = codec::to_json(&codec::encode_poly(&p, sig, None));
                let back = codec::from_json(&text).and_then(|d| codec::decode_poly(&d));
                rep.record(matches!(back, Ok((ref b, s)) if *b == p && s == *sig), || format!("sample {sample}"));
            }
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suites_pass() {
        for sig in [Signature::new(2, 0).unwrap(), Signature::new(1, 1).unwrap()] {
            let mut cfg = SuiteConfig::new(sig, 7);
            cfg.samples = 2;
            cfg.degree = 2;
            cfg.max_k = 3;
            let rep = run_suite(Suite::All, &cfg).unwrap();
            assert!(rep.passed(), "{rep:?}");
            assert!(rep.checked > 50);
        }
    }

    #[test]
    fn suite_names() {
        for s in Suite::EACH {
            assert_eq!(s.as_str().parse::<Suite>().unwrap(), s);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }
}
