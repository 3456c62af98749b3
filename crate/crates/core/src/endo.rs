//! Polynomial differential operators acting on symbols (the algebra generated
//! by x, ξ, ∂_x, ∂_ξ), kept in normal order: multiplications left of
//! derivatives. Equality of normal forms is equality of endomorphisms.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::diff_op::for_each_multi_index;
use crate::poly::{Monomial, SymbolPolynomial, VarKind, MAX_N};
use crate::scalar::{binomial, falling, Coefficient, Rational};

const SLOTS: usize = 2 * MAX_N;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EndoOperator {
    n: usize,
    /// (multiplier monomial, derivative multi-index) → coefficient
    terms: BTreeMap<(Monomial, Monomial), Coefficient>,
}

impl EndoOperator {
    pub fn zero(n: usize) -> Self {
        EndoOperator { n, terms: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        EndoOperator::scalar(n, Coefficient::one())
    }

    pub fn scalar(n: usize, c: Coefficient) -> Self {
        let mut e = EndoOperator::zero(n);
        e.add_term(Monomial::one(), Monomial::one(), c);
        e
    }

    pub fn rational(n: usize, r: Rational) -> Self {
        EndoOperator::scalar(n, Coefficient::from_rational(r))
    }

    /// Multiplication by a polynomial.
    pub fn multiplication(p: &SymbolPolynomial) -> Self {
        let mut e = EndoOperator::zero(p.n());
        for (m, c) in p.terms() {
            e.add_term(*m, Monomial::one(), c.clone());
        }
        e
    }

    /// `∂_{x^i}` or `∂_{ξ_i}`.
    pub fn derivative(n: usize, kind: VarKind, i: usize) -> Self {
        assert!(i < n);
        let mut e = EndoOperator::zero(n);
        e.add_term(Monomial::one(), Monomial::var(kind, i), Coefficient::one());
        e
    }

    /// Multiplication by the variable `x^i` or `ξ_i`.
    pub fn variable(n: usize, kind: VarKind, i: usize) -> Self {
        assert!(i < n);
        let mut e = EndoOperator::zero(n);
        e.add_term(Monomial::var(kind, i), Monomial::one(), Coefficient::one());
        e
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = ((Monomial, Monomial), Coefficient)>) -> Self {
        let mut e = EndoOperator::zero(n);
        for ((m, d), c) in terms {
            e.add_term(m, d, c);
        }
        e
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

    pub fn terms(&self) -> impl Iterator<Item = (&(Monomial, Monomial), &Coefficient)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, mul: Monomial, der: Monomial, c: Coefficient) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry((mul, der)) {
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

    pub fn add_assign(&mut self, other: &EndoOperator) {
        assert_eq!(self.n, other.n, "dimension mismatch");
        for ((m, d), c) in &other.terms {
            self.add_term(*m, *d, c.clone());
        }
    }

    pub fn sub_assign(&mut self, other: &EndoOperator) {
        assert_eq!(self.n, other.n, "dimension mismatch");
        for ((m, d), c) in &other.terms {
            self.add_term(*m, *d, -c);
        }
    }

    pub fn scale(&self, r: &Rational) -> EndoOperator {
        if r.is_zero() {
            return EndoOperator::zero(self.n);
        }
        EndoOperator { n: self.n, terms: self.terms.iter().map(|(k, c)| (*k, c.scale(r))).collect() }
    }

    pub fn scale_coeff(&self, k: &Coefficient) -> EndoOperator {
        let mut out = EndoOperator::zero(self.n);
        for ((m, d), c) in &self.terms {
            out.add_term(*m, *d, c * k);
        }
        out
    }

    /// Normal form of `self ∘ other`.
    pub fn compose(&self, other: &EndoOperator) -> EndoOperator {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let mut out = EndoOperator::zero(self.n);
        for ((ma, da), ca) in &self.terms {
            for ((mb, db), cb) in &other.terms {
                let prod = ca * cb;
                // a ∂^α ∘ b ∂^β = Σ_γ C(α,γ) a (∂^γ b) ∂^{α−γ+β}
                let mut bound = [0u8; SLOTS];
                let mut active = Vec::with_capacity(4);
                for s in 0..SLOTS {
                    let k = da.slot(s).min(mb.slot(s));
                    bound[s] = k;
                    if k > 0 {
                        active.push(s);
                    }
                }
                let small: Vec<u8> = active.iter().map(|&s| bound[s]).collect();
                let base_m = ma.mul(mb);
                let base_d = da.mul(db);
                for_each_multi_index(&small, |gamma| {
                    let mut factor = Rational::one();
                    let mut m = base_m;
                    let mut d = base_d;
                    for (j, &s) in active.iter().enumerate() {
                        let g = gamma[j];
                        if g == 0 {
                            continue;
                        }
                        factor *= &(&binomial(da.slot(s) as u32, g as u32)
                            * &Rational::from(falling(mb.slot(s) as u32, g as u32)));
                        m.set_slot(s, m.slot(s) - g);
                        d.set_slot(s, d.slot(s) - g);
                    }
                    out.add_term(m, d, prod.scale(&factor));
                });
            }
        }
        out
    }

    pub fn apply(&self, p: &SymbolPolynomial) -> SymbolPolynomial {
        assert_eq!(self.n, p.n(), "dimension mismatch");
        let mut out = SymbolPolynomial::zero(self.n);
        for ((m, d), c) in &self.terms {
            for (mp, cp) in p.terms() {
                let Some(rest) = mp.div(d) else { continue };
                let mut factor = 1i64;
                for s in 0..SLOTS {
                    let k = d.slot(s);
                    if k > 0 {
                        factor *= falling(mp.slot(s) as u32, k as u32);
                    }
                }
                out.add_term(rest.mul(m), (c * cp).scale(&Rational::from(factor)));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> EndoOperator {
        let mut acc = EndoOperator::identity(self.n);
        for _ in 0..e {
            acc = acc.compose(self);
        }
        acc
    }

    pub fn max_derivative_order(&self) -> u32 {
        self.terms.keys().map(|(_, d)| d.x_degree() + d.xi_degree()).max().unwrap_or(0)
    }
}

pub fn commutator(a: &EndoOperator, b: &EndoOperator) -> EndoOperator {
    let mut out = a.compose(b);
    out.sub_assign(&b.compose(a));
    out
}

pub fn anticommutator(a: &EndoOperator, b: &EndoOperator) -> EndoOperator {
    let mut out = a.compose(b);
    out.add_assign(&b.compose(a));
    out
}

impl<'a> Add<&'a EndoOperator> for &'a EndoOperator {
    type Output = EndoOperator;
    fn add(self, rhs: &EndoOperator) -> EndoOperator {
        let mut out = self.clone();
        out.add_assign(rhs);
        out
    }
}

impl<'a> Sub<&'a EndoOperator> for &'a EndoOperator {
    type Output = EndoOperator;
    fn sub(self, rhs: &EndoOperator) -> EndoOperator {
        let mut out = self.clone();
        out.sub_assign(rhs);
        out
    }
}

impl<'a> Mul<&'a EndoOperator> for &'a EndoOperator {
    type Output = EndoOperator;
    fn mul(self, rhs: &EndoOperator) -> EndoOperator {
        self.compose(rhs)
    }
}

impl Neg for &EndoOperator {
    type Output = EndoOperator;
    fn neg(self) -> EndoOperator {
        self.scale(&Rational::from(-1))
    }
}

macro_rules! forward_endo {
    ($tr:ident, $m:ident) => {
        impl $tr<EndoOperator> for EndoOperator {
            type Output = EndoOperator;
            fn $m(self, rhs: EndoOperator) -> EndoOperator {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_endo!(Add, add);
forward_endo!(Sub, sub);
forward_endo!(Mul, mul);

impl fmt::Debug for EndoOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, ((m, d), c)) in self.terms.iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            for i in 0..self.n {
                for (kind, name) in [(VarKind::X, "x"), (VarKind::Xi, "ξ")] {
                    match m.get(kind, i) {
                        0 => {}
                        1 => write!(f, "·{name}{}", i + 1)?,
                        e => write!(f, "·{name}{}^{e}", i + 1)?,
                    }
                }
            }
            for i in 0..self.n {
                for (kind, name) in [(VarKind::X, "∂x"), (VarKind::Xi, "∂ξ")] {
                    match d.get(kind, i) {
                        0 => {}
                        1 => write!(f, "·{name}{}", i + 1)?,
                        e => write!(f, "·{name}{}^{e}", i + 1)?,
                    }
                }
            }
        }
        Ok(())
    }
}
