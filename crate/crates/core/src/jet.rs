//! Truncated Taylor expansions at the origin with exact rational coefficients.

use std::collections::BTreeMap;

use rand::Rng;

use crate::error::{Error, Result};
use crate::poly::{monomials_of_degree, Monomial, SymbolPolynomial, VarKind};
use crate::scalar::{binomial_rational, Coefficient, Rational};

/// A function of x known modulo terms of degree `r + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaylorJet {
    n: usize,
    r: u32,
    coeffs: BTreeMap<Monomial, Rational>,
}

impl TaylorJet {
    pub fn zero(n: usize, r: u32) -> Self {
        TaylorJet { n, r, coeffs: BTreeMap::new() }
    }

    pub fn constant(n: usize, r: u32, c: Rational) -> Self {
        let mut j = TaylorJet::zero(n, r);
        j.add_term(Monomial::one(), c);
        j
    }

    pub fn one(n: usize, r: u32) -> Self {
        TaylorJet::constant(n, r, Rational::one())
    }

    /// The coordinate function `x^i`.
    pub fn coordinate(n: usize, r: u32, i: usize) -> Self {
        let mut j = TaylorJet::zero(n, r);
        j.add_term(Monomial::var(VarKind::X, i), Rational::one());
        j
    }

    /// Truncates a real polynomial in x.
    pub fn from_polynomial(p: &SymbolPolynomial, r: u32) -> Result<Self> {
        let mut j = TaylorJet::zero(p.n(), r);
        for (m, c) in p.terms() {
            if m.xi_degree() > 0 {
                return Err(Error::Argument("a jet cannot depend on ξ".into()));
            }
            let v = c
                .as_rational()
                .ok_or_else(|| Error::Argument("jet coefficients must be real and ħ-free".into()))?;
            j.add_term(*m, v);
        }
        Ok(j)
    }

    pub fn from_terms(n: usize, r: u32, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut j = TaylorJet::zero(n, r);
        for (m, v) in terms {
            j.add_term(m, v);
        }
        j
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> u32 {
        self.r
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.coeffs.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.coeffs.get(m).cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Monomial::one())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn add_term(&mut self, m: Monomial, v: Rational) {
        if v.is_zero() || m.x_degree() > self.r {
            return;
        }
        let e = self.coeffs.entry(m).or_insert_with(Rational::zero);
        *e += &v;
        if e.is_zero() {
            self.coeffs.remove(&m);
        }
    }

    /// Lowers the order (never raises it).
    pub fn truncate(&self, r: u32) -> TaylorJet {
        let r = r.min(self.r);
        TaylorJet {
            n: self.n,
            r,
            coeffs: self.coeffs.iter().filter(|(m, _)| m.x_degree() <= r).map(|(m, v)| (*m, v.clone())).collect(),
        }
    }

    pub fn add(&self, other: &TaylorJet) -> TaylorJet {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let mut out = self.truncate(other.r);
        for (m, v) in &other.coeffs {
            out.add_term(*m, v.clone());
        }
        out
    }

    pub fn sub(&self, other: &TaylorJet) -> TaylorJet {
        self.add(&other.scale(&Rational::from(-1)))
    }

    pub fn scale(&self, c: &Rational) -> TaylorJet {
        if c.is_zero() {
            return TaylorJet::zero(self.n, self.r);
        }
        TaylorJet { n: self.n, r: self.r, coeffs: self.coeffs.iter().map(|(m, v)| (*m, v * c)).collect() }
    }

    pub fn mul(&self, other: &TaylorJet) -> TaylorJet {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let mut out = TaylorJet::zero(self.n, self.r.min(other.r));
        for (ma, va) in &self.coeffs {
            for (mb, vb) in &other.coeffs {
                if ma.x_degree() + mb.x_degree() <= out.r {
                    out.add_term(ma.mul(mb), va * vb);
                }
            }
        }
        out
    }

    /// `1/a`, for a nonzero constant term.
    pub fn inv(&self) -> Result<TaylorJet> {
        let c = self.constant_term();
        if c.is_zero() {
            return Err(Error::Argument("jet with zero constant term is not invertible".into()));
        }
        let cinv = c.recip();
        // a = c(1 + u), 1/a = c⁻¹ Σ (−u)^j
        let u = self.scale(&cinv).sub(&TaylorJet::one(self.n, self.r));
        let minus_u = u.scale(&Rational::from(-1));
        let mut sum = TaylorJet::one(self.n, self.r);
        let mut power = TaylorJet::one(self.n, self.r);
        for _ in 0..self.r {
            power = power.mul(&minus_u);
            sum = sum.add(&power);
        }
        Ok(sum.scale(&cinv))
    }

    /// `a^e` for rational `e`, when the constant term is 1.
    pub fn pow(&self, e: &Rational) -> Result<TaylorJet> {
        if !self.constant_term().is_one() {
            return Err(Error::Argument("rational powers need constant term 1".into()));
        }
        let u = self.sub(&TaylorJet::one(self.n, self.r));
        let mut sum = TaylorJet::one(self.n, self.r);
        let mut power = TaylorJet::one(self.n, self.r);
        for j in 1..=self.r {
            power = power.mul(&u);
            if power.is_zero() {
                break;
            }
            sum = sum.add(&power.scale(&binomial_rational(e, j)));
        }
        Ok(sum)
    }

    /// `∂_i a`, valid to order `r − 1`.
    pub fn derivative(&self, i: usize) -> TaylorJet {
        assert!(i < self.n);
        let mut out = TaylorJet::zero(self.n, self.r.saturating_sub(1));
        for (m, v) in &self.coeffs {
            let e = m.get(VarKind::X, i);
            if e == 0 {
                continue;
            }
            let mut d = *m;
            d.set(VarKind::X, i, e - 1);
            out.add_term(d, v * &Rational::from(e as i64));
        }
        out
    }

    /// The jet as an ordinary polynomial in x.
    pub fn to_polynomial(&self) -> SymbolPolynomial {
        SymbolPolynomial::from_terms(self.n, self.coeffs.iter().map(|(m, v)| (*m, Coefficient::from_rational(v.clone()))))
    }

    /// A random jet with constant term 1. With `flat_first_order`, the linear
    /// part vanishes too.
    pub fn random_unit<R: Rng + ?Sized>(rng: &mut R, n: usize, r: u32, flat_first_order: bool) -> TaylorJet {
        let mut j = TaylorJet::one(n, r);
        let start = if flat_first_order { 2 } else { 1 };
        for d in start..=r {
            for m in monomials_of_degree(n, VarKind::X, d) {
                if rng.gen_bool(0.6) {
                    let num: i64 = rng.gen_range(-4..=4);
                    let den: i64 = rng.gen_range(1..=4);
                    j.add_term(m, Rational::new(num, den));
                }
            }
        }
        j
    }
}
