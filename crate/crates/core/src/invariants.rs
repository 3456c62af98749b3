//! The invariant operators on symbols: the sl(2,ℝ) triple R, E, T, the
//! Heisenberg triple G, D, Δ, their weighted composites, the n=2 ideal element
//! Z, and the Casimir operators in closed and dual-basis form.

use std::fmt;
use std::str::FromStr;

use crate::endo::{anticommutator, commutator, EndoOperator};
use crate::error::{Error, Result};
use crate::lie::{conformal_generators, operator_lie_endo, symbol_lie_endo, ConformalBasis};
use crate::poly::{Monomial, Signature, VarKind, Weights};
use crate::scalar::{Coefficient, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InvariantName {
    R,
    E,
    T,
    G,
    D,
    Delta,
    Euler,
    R0,
    G0,
    Delta0,
    Z,
    CSl2,
}

impl InvariantName {
    pub const ALL: [InvariantName; 12] = [
        InvariantName::R,
        InvariantName::E,
        InvariantName::T,
        InvariantName::G,
        InvariantName::D,
        InvariantName::Delta,
        InvariantName::Euler,
        InvariantName::R0,
        InvariantName::G0,
        InvariantName::Delta0,
        InvariantName::Z,
        InvariantName::CSl2,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            InvariantName::R => "R",
            InvariantName::E => "E",
            InvariantName::T => "T",
            InvariantName::G => "G",
            InvariantName::D => "D",
            InvariantName::Delta => "Delta",
            InvariantName::Euler => "Euler",
            InvariantName::R0 => "R0",
            InvariantName::G0 => "G0",
            InvariantName::Delta0 => "Delta0",
            InvariantName::Z => "Z",
            InvariantName::CSl2 => "C_sl2",
        }
    }
}

impl fmt::Display for InvariantName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for InvariantName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        InvariantName::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| Error::Parse(format!("unknown invariant operator {s:?}")))
    }
}

fn term(n: usize, mul: Monomial, der: Monomial, c: i64) -> EndoOperator {
    let mut e = EndoOperator::zero(n);
    e.add_term(mul, der, Coefficient::from_int(c));
    e
}

fn sq(kind: VarKind, i: usize) -> Monomial {
    let mut m = Monomial::one();
    m.set(kind, i, 2);
    m
}

/// Multiplication by `R = ξ^iξ_i`.
pub fn r_op(sig: &Signature) -> EndoOperator {
    let n = sig.n();
    let mut e = EndoOperator::zero(n);
    for i in 0..n {
        e.add_assign(&term(n, sq(VarKind::Xi, i), Monomial::one(), sig.g(i)));
    }
    e
}

/// `T = ∂_{ξ^i}∂_{ξ_i}`.
pub fn t_op(sig: &Signature) -> EndoOperator {
    let n = sig.n();
    let mut e = EndoOperator::zero(n);
    for i in 0..n {
        e.add_assign(&term(n, Monomial::one(), sq(VarKind::Xi, i), sig.g(i)));
    }
    e
}

/// The Euler operator `ℰ = ξ_i∂_{ξ_i}`.
pub fn euler_op(sig: &Signature) -> EndoOperator {
    let n = sig.n();
    let mut e = EndoOperator::zero(n);
    for i in 0..n {
        e.add_assign(&term(n, Monomial::var(VarKind::Xi, i), Monomial::var(VarKind::Xi, i), 1));
    }
    e
}

/// `E = ℰ + n/2`.
pub fn e_op(sig: &Signature) -> EndoOperator {
    &euler_op(sig) + &EndoOperator::rational(sig.n(), Rational::new(sig.n() as i64, 2))
}

/// `G = ξ^i∂_i`.
pub fn g_op(sig: &Signature) -> EndoOperator {
    let n = sig.n();
    let mut e = EndoOperator::zero(n);
    for i in 0..n {
        e.add_assign(&term(n, Monomial::var(VarKind::Xi, i), Monomial::var(VarKind::X, i), sig.g(i)));
    }
    e
}

/// `D = ∂_{ξ_i}∂_i`.
pub fn d_op(sig: &Signature) -> EndoOperator {
    let n = sig.n();
    let mut e = EndoOperator::zero(n);
    for i in 0..n {
        let der = Monomial::var(VarKind::Xi, i).mul(&Monomial::var(VarKind::X, i));
        e.add_assign(&term(n, Monomial::one(), der, 1));
    }
    e
}

/// `Δ = ∂^i∂_i`.
pub fn laplacian_op(sig: &Signature) -> EndoOperator {
    let n = sig.n();
    let mut e = EndoOperator::zero(n);
    for i in 0..n {
        e.add_assign(&term(n, Monomial::one(), sq(VarKind::X, i), sig.g(i)));
    }
    e
}

/// The sl(2) Casimir `E² − ½(RT + TR)`.
pub fn casimir_sl2(sig: &Signature) -> EndoOperator {
    let e = e_op(sig);
    let rt = anticommutator(&r_op(sig), &t_op(sig));
    &e.compose(&e) - &rt.scale(&Rational::new(1, 2))
}

pub fn invariant_operator(name: InvariantName, sig: &Signature) -> Result<EndoOperator> {
    Ok(match name {
        InvariantName::R => r_op(sig),
        InvariantName::E => e_op(sig),
        InvariantName::T => t_op(sig),
        InvariantName::G => g_op(sig),
        InvariantName::D => d_op(sig),
        InvariantName::Delta => laplacian_op(sig),
        InvariantName::Euler => euler_op(sig),
        InvariantName::R0 => r_op(sig).compose(&t_op(sig)),
        InvariantName::G0 => g_op(sig).compose(&t_op(sig)),
        InvariantName::Delta0 => laplacian_op(sig).compose(&t_op(sig)),
        InvariantName::CSl2 => casimir_sl2(sig),
        InvariantName::Z => {
            if sig.n() != 2 {
                return Err(Error::UnsupportedDimension { n: sig.n(), reason: "Z is only defined for n = 2" });
            }
            let c = casimir_sl2(sig);
            let d = d_op(sig);
            let g = g_op(sig);
            let shifted = &c + &EndoOperator::rational(2, Rational::new(3, 2));
            let first = shifted.compose(&laplacian_op(sig));
            let a = anticommutator(&d, &commutator(&g, &c));
            let b = anticommutator(&g, &commutator(&d, &c));
            &first + &(&a - &b).scale(&Rational::new(1, 4))
        }
    })
}

/// `C_δ = R₀ + 2(1 + n(δ−1) − ℰ)ℰ − n²δ(δ−1)`.
pub fn casimir_symbols(sig: &Signature, delta: &Rational) -> EndoOperator {
    let n = sig.n();
    let nr = Rational::from(n as i64);
    let euler = euler_op(sig);
    let shift = &Rational::one() + &(&nr * &(delta - &Rational::one()));
    let factor = &EndoOperator::rational(n, shift) - &euler;
    let mut c = r_op(sig).compose(&t_op(sig));
    c.add_assign(&factor.compose(&euler).scale(&Rational::from(2)));
    let constant = &(&(&nr * &nr) * delta) * &(delta - &Rational::one());
    c.sub_assign(&EndoOperator::rational(n, constant));
    c
}

/// The nilpotent part `N_λ = G₀ − 2(nλ + ℰ)D` of the operator Casimir.
pub fn nilpotent_part(sig: &Signature, lambda: &Rational) -> EndoOperator {
    let n = sig.n();
    let g0 = g_op(sig).compose(&t_op(sig));
    let nl = &Rational::from(n as i64) * lambda;
    let f = &EndoOperator::rational(n, nl) + &euler_op(sig);
    &g0 - &f.compose(&d_op(sig)).scale(&Rational::from(2))
}

/// `C_{λ,μ} = C_δ + G₀ − 2(nλ + ℰ)D`.
pub fn casimir_operators(sig: &Signature, w: &Weights) -> EndoOperator {
    &casimir_symbols(sig, w.delta()) + &nilpotent_part(sig, w.lambda())
}

fn basis_sum(basis: &ConformalBasis, action: impl Fn(usize) -> EndoOperator) -> EndoOperator {
    let n = basis.signature().n();
    let ops: Vec<EndoOperator> = (0..basis.len()).map(action).collect();
    let mut out = EndoOperator::zero(n);
    for (a, row) in basis.inverse_gram().iter().enumerate() {
        for (b, coeff) in row.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            out.add_assign(&ops[a].compose(&ops[b]).scale(coeff));
        }
    }
    out
}

/// `B^{αβ} L^δ_{X_α} L^δ_{X_β}` summed over the conformal basis.
pub fn casimir_symbols_basis_sum(sig: &Signature, delta: &Rational) -> Result<EndoOperator> {
    let basis = conformal_generators(sig)?;
    let gens = basis.generators().to_vec();
    Ok(basis_sum(&basis, |a| symbol_lie_endo(&gens[a], delta)))
}

/// `B^{αβ} L^{λ,μ}_{X_α} L^{λ,μ}_{X_β}` on differential operators.
pub fn casimir_operators_basis_sum(sig: &Signature, w: &Weights) -> Result<EndoOperator> {
    let basis = conformal_generators(sig)?;
    let gens = basis.generators().to_vec();
    Ok(basis_sum(&basis, |a| operator_lie_endo(&gens[a], w)))
}

/// An identity between two endomorphisms, checked by exact comparison.
#[derive(Clone, Debug)]
pub struct Relation {
    pub name: String,
    pub lhs: EndoOperator,
    pub rhs: EndoOperator,
}

impl Relation {
    fn new(name: impl Into<String>, lhs: EndoOperator, rhs: EndoOperator) -> Self {
        Relation { name: name.into(), lhs, rhs }
    }

    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// Bracket relations of sl(2,ℝ) ⋉ h₁ in the realization R, E, T, G, D, Δ.
pub fn algebra_relations(sig: &Signature) -> Vec<Relation> {
    let n = sig.n();
    let (r, e, t) = (r_op(sig), e_op(sig), t_op(sig));
    let (g, d, lap) = (g_op(sig), d_op(sig), laplacian_op(sig));
    let zero = EndoOperator::zero(n);
    let two = Rational::from(2);
    let mut out = vec![
        Relation::new("[E,R] = 2R", commutator(&e, &r), r.scale(&two)),
        Relation::new("[E,T] = -2T", commutator(&e, &t), t.scale(&Rational::from(-2))),
        Relation::new("[T,R] = 4E", commutator(&t, &r), e.scale(&Rational::from(4))),
        Relation::new("[E,G] = G", commutator(&e, &g), g.clone()),
        Relation::new("[E,D] = -D", commutator(&e, &d), -&d),
        Relation::new("[D,R] = 2G", commutator(&d, &r), g.scale(&two)),
        Relation::new("[T,G] = 2D", commutator(&t, &g), d.scale(&two)),
        Relation::new("[R,G] = 0", commutator(&r, &g), zero.clone()),
        Relation::new("[T,D] = 0", commutator(&t, &d), zero.clone()),
        Relation::new("[D,G] = Delta", commutator(&d, &g), lap.clone()),
    ];
    for (name, op) in [("R", &r), ("E", &e), ("T", &t), ("G", &g), ("D", &d)] {
        out.push(Relation::new(format!("[Delta,{name}] = 0"), commutator(&lap, op), zero.clone()));
    }
    out
}

/// `C_δ = −C − (E − nδ)² − n(1 − n/2)`, with `C` the sl(2) Casimir.
pub fn casimir_sl2_relation(sig: &Signature, delta: &Rational) -> Relation {
    let n = sig.n();
    let nr = Rational::from(n as i64);
    let shifted = &e_op(sig) - &EndoOperator::rational(n, &nr * delta);
    let constant = &nr * &(&Rational::one() - &Rational::new(n as i64, 2));
    let mut rhs = -&casimir_sl2(sig);
    rhs.sub_assign(&shifted.compose(&shifted));
    rhs.sub_assign(&EndoOperator::rational(n, constant));
    Relation::new("C_delta = -C - (E - n delta)^2 - n(1 - n/2)", casimir_symbols(sig, delta), rhs)
}

/// Commutators of E, R₀, G₀, D, Δ₀ with the inversion `L^δ_{X̄_i}`, against
/// their closed forms. `∂_{ξ^i}` is `g_ii ∂_{ξ_i}`.
pub fn inversion_relations(sig: &Signature, delta: &Rational, i: usize) -> Result<Vec<Relation>> {
    let n = sig.n();
    let inv = crate::lie::generator_field(sig, crate::lie::GeneratorId::Inversion(i))?;
    let l = symbol_lie_endo(&inv, delta);
    let nr = Rational::from(n as i64);
    let t = t_op(sig);
    let euler = euler_op(sig);
    let r0 = r_op(sig).compose(&t);
    let g0 = g_op(sig).compose(&t);
    let d = d_op(sig);
    let delta0 = laplacian_op(sig).compose(&t);
    let d_xi_up = EndoOperator::derivative(n, VarKind::Xi, i).scale(&Rational::from(sig.g(i)));
    let xi_i = EndoOperator::variable(n, VarKind::Xi, i);
    let d_x = EndoOperator::derivative(n, VarKind::X, i);
    let c = |v: Rational| EndoOperator::rational(n, v);
    let two = Rational::from(2);

    let g0_rhs = &r0.compose(&d_xi_up) + &c(&two - &(&nr * delta)).compose(&xi_i).compose(&t);
    let d_rhs = {
        let mut a = -&xi_i.compose(&t);
        a.add_assign(&euler.compose(&d_xi_up).scale(&two));
        a.add_assign(&d_xi_up.scale(&(&nr * &(&Rational::one() - delta))));
        a
    };
    let delta0_rhs = {
        let mut a = euler.compose(&d_x).compose(&t);
        a.add_assign(&g0.compose(&d_xi_up));
        a.sub_assign(&xi_i.compose(&d).compose(&t));
        let mut a = a.scale(&Rational::from(4));
        let k = &two + &(&nr * &(&Rational::one() - &(&two * delta)));
        a.add_assign(&d_x.compose(&t).scale(&(&two * &k)));
        a
    };
    let zero = EndoOperator::zero(n);
    let idx = i + 1;
    Ok(vec![
        Relation::new(format!("[E,L(Xbar_{idx})] = 0"), commutator(&e_op(sig), &l), zero.clone()),
        Relation::new(format!("[R0,L(Xbar_{idx})] = 0"), commutator(&r0, &l), zero),
        Relation::new(format!("[G0,L(Xbar_{idx})]"), commutator(&g0, &l), g0_rhs.scale(&two)),
        Relation::new(format!("[D,L(Xbar_{idx})]"), commutator(&d, &l), d_rhs.scale(&two)),
        Relation::new(format!("[Delta0,L(Xbar_{idx})]"), commutator(&delta0, &l), delta0_rhs),
    ])
}
