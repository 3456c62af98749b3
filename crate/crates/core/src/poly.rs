//! Multinomials on T*ℝⁿ in the coordinates x¹..xⁿ, ξ₁..ξₙ with coefficients
//! in ℚ(i)[ħ].
//!
//! Indices are zero-based in the API. The flat metric is diagonal with `p`
//! entries +1 followed by `q` entries −1, so raising or lowering an index is a
//! sign flip on the last `q` slots.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;

use crate::error::{Error, Result};
use crate::scalar::{Coefficient, Gaussian, Rational};

/// Largest supported dimension.
pub const MAX_N: usize = 8;

/// Exponents of x (slots `0..MAX_N`) and ξ (slots `MAX_N..2*MAX_N`).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial {
    exps: [u8; 2 * MAX_N],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VarKind {
    X,
    Xi,
}

impl VarKind {
    fn slot(self, index: usize) -> usize {
        match self {
            VarKind::X => index,
            VarKind::Xi => MAX_N + index,
        }
    }
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn from_exps(x: &[u8], xi: &[u8]) -> Self {
        assert!(x.len() <= MAX_N && xi.len() <= MAX_N);
        let mut m = Monomial::default();
        m.exps[..x.len()].copy_from_slice(x);
        m.exps[MAX_N..MAX_N + xi.len()].copy_from_slice(xi);
        m
    }

    pub fn var(kind: VarKind, index: usize) -> Self {
        let mut m = Monomial::default();
        m.exps[kind.slot(index)] = 1;
        m
    }

    #[inline]
    pub fn get(&self, kind: VarKind, index: usize) -> u8 {
        self.exps[kind.slot(index)]
    }

    #[inline]
    pub fn set(&mut self, kind: VarKind, index: usize, e: u8) {
        self.exps[kind.slot(index)] = e;
    }

    /// Raw exponent by slot (`0..2*MAX_N`).
    #[inline]
    pub fn slot(&self, slot: usize) -> u8 {
        self.exps[slot]
    }

    #[inline]
    pub fn set_slot(&mut self, slot: usize, e: u8) {
        self.exps[slot] = e;
    }

    pub fn x_exps(&self, n: usize) -> &[u8] {
        &self.exps[..n]
    }

    pub fn xi_exps(&self, n: usize) -> &[u8] {
        &self.exps[MAX_N..MAX_N + n]
    }

    pub fn xi_degree(&self) -> u32 {
        self.exps[MAX_N..].iter().map(|&e| e as u32).sum()
    }

    pub fn x_degree(&self) -> u32 {
        self.exps[..MAX_N].iter().map(|&e| e as u32).sum()
    }

    pub fn x_part(&self) -> Monomial {
        let mut m = *self;
        m.exps[MAX_N..].fill(0);
        m
    }

    pub fn xi_part(&self) -> Monomial {
        let mut m = *self;
        m.exps[..MAX_N].fill(0);
        m
    }

    #[inline]
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut m = *self;
        for (a, b) in m.exps.iter_mut().zip(other.exps.iter()) {
            *a = a.checked_add(*b).expect("exponent overflow");
        }
        m
    }

    /// `self / other` if `other` divides `self`.
    #[inline]
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut m = *self;
        for (a, b) in m.exps.iter_mut().zip(other.exps.iter()) {
            *a = a.checked_sub(*b)?;
        }
        Some(m)
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{:?}ξ{:?}", &self.exps[..MAX_N], &self.exps[MAX_N..])
    }
}

/// Metric signature (p, q) of the flat metric `g = diag(+1^p, −1^q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    p: usize,
    q: usize,
}

impl Signature {
    pub fn new(p: usize, q: usize) -> Result<Self> {
        let n = p + q;
        if n < 2 {
            return Err(Error::UnsupportedDimension { n, reason: "need n = p + q >= 2" });
        }
        if n > MAX_N {
            return Err(Error::UnsupportedDimension { n, reason: "dimension exceeds MAX_N" });
        }
        Ok(Signature { p, q })
    }

    pub fn euclidean(n: usize) -> Result<Self> {
        Signature::new(n, 0)
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn n(&self) -> usize {
        self.p + self.q
    }

    /// `g_{ii}` (equal to `g^{ii}` since g² = 1).
    pub fn g(&self, i: usize) -> i64 {
        if i < self.p {
            1
        } else {
            -1
        }
    }
}

/// Density weights (λ, μ) with shift δ = μ − λ.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Weights {
    lambda: Rational,
    mu: Rational,
    delta: Rational,
}

impl Weights {
    pub fn new(lambda: Rational, mu: Rational) -> Self {
        let delta = &mu - &lambda;
        Weights { lambda, mu, delta }
    }

    pub fn equal(lambda: Rational) -> Self {
        Weights::new(lambda.clone(), lambda)
    }

    pub fn from_delta(lambda: Rational, delta: Rational) -> Self {
        let mu = &lambda + &delta;
        Weights { lambda, mu, delta }
    }

    pub fn lambda(&self) -> &Rational {
        &self.lambda
    }

    pub fn mu(&self) -> &Rational {
        &self.mu
    }

    pub fn delta(&self) -> &Rational {
        &self.delta
    }
}

/// An exact polynomial symbol `Σ c · x^a ξ^b`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SymbolPolynomial {
    n: usize,
    terms: BTreeMap<Monomial, Coefficient>,
}

impl SymbolPolynomial {
    pub fn zero(n: usize) -> Self {
        assert!(n <= MAX_N, "dimension {n} exceeds MAX_N");
        SymbolPolynomial { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: Coefficient) -> Self {
        let mut p = SymbolPolynomial::zero(n);
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn from_rational(n: usize, r: Rational) -> Self {
        SymbolPolynomial::constant(n, Coefficient::from_rational(r))
    }

    pub fn one(n: usize) -> Self {
        SymbolPolynomial::constant(n, Coefficient::one())
    }

    pub fn monomial(n: usize, mono: Monomial, c: Coefficient) -> Self {
        let mut p = SymbolPolynomial::zero(n);
        p.add_term(mono, c);
        p
    }

    /// The coordinate function xⁱ.
    pub fn x(n: usize, i: usize) -> Self {
        assert!(i < n);
        SymbolPolynomial::monomial(n, Monomial::var(VarKind::X, i), Coefficient::one())
    }

    /// The fibre coordinate ξᵢ.
    pub fn xi(n: usize, i: usize) -> Self {
        assert!(i < n);
        SymbolPolynomial::monomial(n, Monomial::var(VarKind::Xi, i), Coefficient::one())
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Monomial, Coefficient)>) -> Self {
        let mut p = SymbolPolynomial::zero(n);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Coefficient)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Coefficient {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, m: Monomial, c: Coefficient) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                o.get_mut().add_assign_ref(&c);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled_term(&mut self, m: Monomial, c: &Coefficient, r: &Rational) {
        if r.is_zero() || c.is_zero() {
            return;
        }
        self.add_term(m, c.scale(r));
    }

    pub fn add_assign(&mut self, other: &SymbolPolynomial) {
        assert_eq!(self.n, other.n, "dimension mismatch");
        for (m, c) in &other.terms {
            self.add_term(*m, c.clone());
        }
    }

    pub fn sub_assign(&mut self, other: &SymbolPolynomial) {
        assert_eq!(self.n, other.n, "dimension mismatch");
        for (m, c) in &other.terms {
            self.add_term(*m, -c);
        }
    }

    fn check_dim(&self, other: &SymbolPolynomial) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { left: self.n, right: other.n });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &SymbolPolynomial) -> Result<SymbolPolynomial> {
        self.check_dim(other)?;
        Ok(self + other)
    }

    pub fn checked_sub(&self, other: &SymbolPolynomial) -> Result<SymbolPolynomial> {
        self.check_dim(other)?;
        Ok(self - other)
    }

    pub fn checked_mul(&self, other: &SymbolPolynomial) -> Result<SymbolPolynomial> {
        self.check_dim(other)?;
        Ok(self * other)
    }

    pub fn scale(&self, r: &Rational) -> SymbolPolynomial {
        if r.is_zero() {
            return SymbolPolynomial::zero(self.n);
        }
        SymbolPolynomial {
            n: self.n,
            terms: self.terms.iter().map(|(m, c)| (*m, c.scale(r))).collect(),
        }
    }

    pub fn scale_coeff(&self, k: &Coefficient) -> SymbolPolynomial {
        let mut out = SymbolPolynomial::zero(self.n);
        for (m, c) in &self.terms {
            out.add_term(*m, c * k);
        }
        out
    }

    pub fn mul_monomial(&self, mono: &Monomial, k: &Coefficient) -> SymbolPolynomial {
        let mut out = SymbolPolynomial::zero(self.n);
        for (m, c) in &self.terms {
            out.add_term(m.mul(mono), c * k);
        }
        out
    }

    pub fn pow(&self, e: u32) -> SymbolPolynomial {
        let mut acc = SymbolPolynomial::one(self.n);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Complex conjugation of coefficients (ħ is real).
    pub fn conj(&self) -> SymbolPolynomial {
        SymbolPolynomial { n: self.n, terms: self.terms.iter().map(|(m, c)| (*m, c.conj())).collect() }
    }

    /// Exact formal partial derivative in `x^index` or `ξ_index`.
    pub fn differentiate(&self, kind: VarKind, index: usize) -> SymbolPolynomial {
        assert!(index < self.n, "index out of range");
        let mut out = SymbolPolynomial::zero(self.n);
        for (m, c) in &self.terms {
            let e = m.get(kind, index);
            if e == 0 {
                continue;
            }
            let mut dm = *m;
            dm.set(kind, index, e - 1);
            out.add_term(dm, c.scale(&Rational::from(e as i64)));
        }
        out
    }

    /// `∂_{ξ^i} = g_{ii} ∂_{ξ_i}`, and for x the matching `∂_{x_i} = g^{ii} ∂_{x^i}`.
    pub fn differentiate_raised(&self, sig: &Signature, kind: VarKind, index: usize) -> SymbolPolynomial {
        let d = self.differentiate(kind, index);
        if sig.g(index) < 0 {
            -&d
        } else {
            d
        }
    }

    /// Moves the given slot across the metric: substitutes the variable by
    /// `g^{ii}` times itself. Applying it twice is the identity.
    pub fn raise_index(&self, sig: &Signature, kind: VarKind, index: usize) -> Result<SymbolPolynomial> {
        if index >= self.n {
            return Err(Error::InvalidIndex { index, n: self.n });
        }
        if sig.n() != self.n {
            return Err(Error::DimensionMismatch { left: self.n, right: sig.n() });
        }
        if sig.g(index) > 0 {
            return Ok(self.clone());
        }
        let mut out = SymbolPolynomial::zero(self.n);
        for (m, c) in &self.terms {
            if m.get(kind, index) % 2 == 1 {
                out.add_term(*m, -c);
            } else {
                out.add_term(*m, c.clone());
            }
        }
        Ok(out)
    }

    /// Homogeneous parts by ξ-degree, ascending; zero parts omitted.
    pub fn xi_degree_split(&self) -> Vec<(u32, SymbolPolynomial)> {
        let mut parts: BTreeMap<u32, SymbolPolynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            parts
                .entry(m.xi_degree())
                .or_insert_with(|| SymbolPolynomial::zero(self.n))
                .terms
                .insert(*m, c.clone());
        }
        parts.into_iter().collect()
    }

    pub fn xi_homogeneous_part(&self, k: u32) -> SymbolPolynomial {
        SymbolPolynomial {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.xi_degree() == k)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Highest ξ-degree, or `None` for the zero polynomial.
    pub fn xi_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.xi_degree()).max()
    }

    pub fn x_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.x_degree()).max()
    }

    pub fn is_x_only(&self) -> bool {
        self.terms.keys().all(|m| m.xi_degree() == 0)
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(|c| c.terms().iter().all(|t| t.value.im.is_zero()))
    }

    /// Applies `f` to every coefficient, dropping zeros.
    pub fn map_coefficients(&self, mut f: impl FnMut(&Monomial, &Coefficient) -> Coefficient) -> SymbolPolynomial {
        let mut out = SymbolPolynomial::zero(self.n);
        for (m, c) in &self.terms {
            out.add_term(*m, f(m, c));
        }
        out
    }

    /// Keeps the terms for which `keep` holds.
    pub fn filter_terms(&self, mut keep: impl FnMut(&Monomial, &Coefficient) -> bool) -> SymbolPolynomial {
        SymbolPolynomial {
            n: self.n,
            terms: self.terms.iter().filter(|(m, c)| keep(m, c)).map(|(m, c)| (*m, c.clone())).collect(),
        }
    }

    /// Drops terms of x-degree above `order`.
    pub fn truncate_x(&self, order: u32) -> SymbolPolynomial {
        self.filter_terms(|m, _| m.x_degree() <= order)
    }

    /// Drops ħ-powers above `order`.
    pub fn truncate_hbar(&self, order: u32) -> SymbolPolynomial {
        self.map_coefficients(|_, c| c.truncate(order))
    }

    /// The `ħ^h` part, as a polynomial whose coefficients still carry `ħ^h`.
    pub fn hbar_part(&self, h: u32) -> SymbolPolynomial {
        self.map_coefficients(|_, c| c.hpow_part(h))
    }

    /// The Gaussian coefficient of `ħ^h`, returned as an ħ-free polynomial.
    pub fn hbar_coefficient(&self, h: u32) -> SymbolPolynomial {
        self.map_coefficients(|_, c| Coefficient::scaled(c.at_hpow(h), 0))
    }

    /// Evaluates the x-part at the origin (keeps only x-free terms).
    pub fn at_origin(&self) -> SymbolPolynomial {
        self.filter_terms(|m, _| m.x_degree() == 0)
    }

    /// A random polynomial with `nterms` monomials, small integer-ratio
    /// coefficients and the given degree bounds.
    pub fn random<R: Rng + ?Sized>(
        rng: &mut R,
        n: usize,
        max_xi_degree: u32,
        max_x_degree: u32,
        nterms: usize,
        real: bool,
    ) -> SymbolPolynomial {
        let mut p = SymbolPolynomial::zero(n);
        let rand_coeff = |rng: &mut R| -> Rational {
            loop {
                let num: i64 = rng.gen_range(-5..=5);
                if num != 0 {
                    let den: i64 = rng.gen_range(1..=3);
                    return Rational::new(num, den);
                }
            }
        };
        for _ in 0..nterms {
            let xi_deg = rng.gen_range(0..=max_xi_degree);
            let x_deg = rng.gen_range(0..=max_x_degree);
            let mut m = Monomial::one();
            for _ in 0..xi_deg {
                let i = rng.gen_range(0..n);
                m.set(VarKind::Xi, i, m.get(VarKind::Xi, i) + 1);
            }
            for _ in 0..x_deg {
                let i = rng.gen_range(0..n);
                m.set(VarKind::X, i, m.get(VarKind::X, i) + 1);
            }
            let re = rand_coeff(rng);
            let im = if real || rng.gen_bool(0.7) { Rational::zero() } else { rand_coeff(rng) };
            p.add_term(m, Coefficient::scaled(Gaussian::new(re, im), 0));
        }
        p
    }
}

/// All monomials in the given kind of variables of total degree exactly `d`.
pub fn monomials_of_degree(n: usize, kind: VarKind, d: u32) -> Vec<Monomial> {
    fn rec(n: usize, kind: VarKind, i: usize, left: u32, cur: &mut Monomial, out: &mut Vec<Monomial>) {
        if i + 1 == n {
            cur.set(kind, i, left as u8);
            out.push(*cur);
            cur.set(kind, i, 0);
            return;
        }
        for e in (0..=left).rev() {
            cur.set(kind, i, e as u8);
            rec(n, kind, i + 1, left - e, cur, out);
        }
        cur.set(kind, i, 0);
    }
    let mut out = Vec::new();
    rec(n, kind, 0, d, &mut Monomial::one(), &mut out);
    out
}

/// The contraction `Σ g^{ii} v_i v_i` of a variable kind: `R = ξ^iξ_i` or `x_ix^i`.
pub fn metric_square(sig: &Signature, kind: VarKind) -> SymbolPolynomial {
    let n = sig.n();
    let mut p = SymbolPolynomial::zero(n);
    for i in 0..n {
        let mut m = Monomial::one();
        m.set(kind, i, 2);
        p.add_term(m, Coefficient::from_int(sig.g(i)));
    }
    p
}

/// The index-moved coordinate `g_{ii} v_i` (e.g. `x_i` or `ξ^i`).
pub fn moved_coordinate(sig: &Signature, kind: VarKind, i: usize) -> SymbolPolynomial {
    SymbolPolynomial::monomial(sig.n(), Monomial::var(kind, i), Coefficient::from_int(sig.g(i)))
}

impl<'a> Add<&'a SymbolPolynomial> for &'a SymbolPolynomial {
    type Output = SymbolPolynomial;
    fn add(self, rhs: &SymbolPolynomial) -> SymbolPolynomial {
        let mut out = self.clone();
        out.add_assign(rhs);
        out
    }
}

impl<'a> Sub<&'a SymbolPolynomial> for &'a SymbolPolynomial {
    type Output = SymbolPolynomial;
    fn sub(self, rhs: &SymbolPolynomial) -> SymbolPolynomial {
        let mut out = self.clone();
        out.sub_assign(rhs);
        out
    }
}

impl<'a> Mul<&'a SymbolPolynomial> for &'a SymbolPolynomial {
    type Output = SymbolPolynomial;
    fn mul(self, rhs: &SymbolPolynomial) -> SymbolPolynomial {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        let mut out = SymbolPolynomial::zero(self.n);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &SymbolPolynomial {
    type Output = SymbolPolynomial;
    fn neg(self) -> SymbolPolynomial {
        self.scale(&Rational::from(-1))
    }
}

macro_rules! forward_poly {
    ($tr:ident, $m:ident) => {
        impl $tr<SymbolPolynomial> for SymbolPolynomial {
            type Output = SymbolPolynomial;
            fn $m(self, rhs: SymbolPolynomial) -> SymbolPolynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_poly!(Add, add);
forward_poly!(Sub, sub);
forward_poly!(Mul, mul);

impl fmt::Display for SymbolPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            for i in 0..self.n {
                match m.get(VarKind::X, i) {
                    0 => {}
                    1 => write!(f, "·x{}", i + 1)?,
                    e => write!(f, "·x{}^{}", i + 1, e)?,
                }
            }
            for i in 0..self.n {
                match m.get(VarKind::Xi, i) {
                    0 => {}
                    1 => write!(f, "·ξ{}", i + 1)?,
                    e => write!(f, "·ξ{}^{}", i + 1, e)?,
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for SymbolPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[n={}] {}", self.n, self)
    }
}
