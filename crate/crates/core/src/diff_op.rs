//! Differential operators with polynomial coefficients, stored as normal
//! ordered σ-symbols: the monomial `x^a ξ^b` stands for `x^a ∂^b`.

use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};
use crate::poly::{Monomial, SymbolPolynomial, VarKind, MAX_N};
use crate::scalar::{binomial, falling, Coefficient, Rational};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct OperatorSymbol {
    body: SymbolPolynomial,
}

impl OperatorSymbol {
    pub fn new(body: SymbolPolynomial) -> Self {
        OperatorSymbol { body }
    }

    pub fn zero(n: usize) -> Self {
        OperatorSymbol::new(SymbolPolynomial::zero(n))
    }

    pub fn identity(n: usize) -> Self {
        OperatorSymbol::new(SymbolPolynomial::one(n))
    }

    pub fn body(&self) -> &SymbolPolynomial {
        &self.body
    }

    pub fn into_body(self) -> SymbolPolynomial {
        self.body
    }

    pub fn n(&self) -> usize {
        self.body.n()
    }

    pub fn scale(&self, r: &Rational) -> Self {
        OperatorSymbol::new(self.body.scale(r))
    }

    pub fn apply(&self, f: &SymbolPolynomial) -> Result<SymbolPolynomial> {
        apply(self, f)
    }

    pub fn compose(&self, other: &OperatorSymbol) -> OperatorSymbol {
        compose(self, other)
    }

    pub fn adjoint(&self) -> OperatorSymbol {
        adjoint(self)
    }
}

impl From<SymbolPolynomial> for OperatorSymbol {
    fn from(body: SymbolPolynomial) -> Self {
        OperatorSymbol::new(body)
    }
}

impl<'a> Add<&'a OperatorSymbol> for &'a OperatorSymbol {
    type Output = OperatorSymbol;
    fn add(self, rhs: &OperatorSymbol) -> OperatorSymbol {
        OperatorSymbol::new(&self.body + &rhs.body)
    }
}

impl<'a> Sub<&'a OperatorSymbol> for &'a OperatorSymbol {
    type Output = OperatorSymbol;
    fn sub(self, rhs: &OperatorSymbol) -> OperatorSymbol {
        OperatorSymbol::new(&self.body - &rhs.body)
    }
}

impl Neg for &OperatorSymbol {
    type Output = OperatorSymbol;
    fn neg(self) -> OperatorSymbol {
        OperatorSymbol::new(-&self.body)
    }
}

/// `Σ_α A_α(x) ∂^α f` for a function `f` of x alone.
pub fn apply(a: &OperatorSymbol, f: &SymbolPolynomial) -> Result<SymbolPolynomial> {
    let n = a.n();
    if f.n() != n {
        return Err(Error::DimensionMismatch { left: n, right: f.n() });
    }
    if !f.is_x_only() {
        return Err(Error::Argument("operators act on functions of x only; argument contains ξ".into()));
    }
    let mut out = SymbolPolynomial::zero(n);
    for (ma, ca) in a.body().terms() {
        for (mf, cf) in f.terms() {
            let mut factor = 1i64;
            let mut m = ma.x_part();
            let mut dead = false;
            for i in 0..n {
                let b = ma.get(VarKind::Xi, i) as u32;
                let c = mf.get(VarKind::X, i) as u32;
                if b > c {
                    dead = true;
                    break;
                }
                factor *= falling(c, b);
                m.set(VarKind::X, i, (ma.get(VarKind::X, i) as u32 + c - b) as u8);
            }
            if dead {
                continue;
            }
            out.add_term(m, (ca * cf).scale(&Rational::from(factor)));
        }
    }
    Ok(out)
}

/// Visits every multi-index `α ≤ bound` (componentwise).
pub(crate) fn for_each_multi_index(bound: &[u8], mut f: impl FnMut(&[u8])) {
    let n = bound.len();
    let mut alpha = [0u8; 2 * MAX_N];
    loop {
        f(&alpha[..n]);
        let mut i = 0;
        loop {
            if i == n {
                return;
            }
            if alpha[i] < bound[i] {
                alpha[i] += 1;
                break;
            }
            alpha[i] = 0;
            i += 1;
        }
    }
}

/// σ(A∘B) = Σ_α (1/α!) ∂_ξ^α A · ∂_x^α B.
pub fn compose(a: &OperatorSymbol, b: &OperatorSymbol) -> OperatorSymbol {
    assert_eq!(a.n(), b.n(), "dimension mismatch");
    let n = a.n();
    let mut out = SymbolPolynomial::zero(n);
    for (ma, ca) in a.body().terms() {
        for (mb, cb) in b.body().terms() {
            let prod = ca * cb;
            let base = ma.mul(mb);
            let mut bound = [0u8; MAX_N];
            for (i, slot) in bound.iter_mut().enumerate().take(n) {
                *slot = ma.get(VarKind::Xi, i).min(mb.get(VarKind::X, i));
            }
            for_each_multi_index(&bound[..n], |alpha| {
                let mut factor = Rational::one();
                let mut m: Monomial = base;
                for i in 0..n {
                    let k = alpha[i];
                    if k == 0 {
                        continue;
                    }
                    let ea = ma.get(VarKind::Xi, i) as u32;
                    let eb = mb.get(VarKind::X, i) as u32;
                    factor *= &(&binomial(ea, k as u32) * &Rational::from(falling(eb, k as u32)));
                    m.set(VarKind::Xi, i, m.get(VarKind::Xi, i) - k);
                    m.set(VarKind::X, i, m.get(VarKind::X, i) - k);
                }
                out.add_term(m, prod.scale(&factor));
            });
        }
    }
    OperatorSymbol::new(out)
}

/// Formal adjoint `Σ_α (−1)^{|α|} ∂^α ∘ conj(A_α)`, with ħ real.
pub fn adjoint(a: &OperatorSymbol) -> OperatorSymbol {
    let n = a.n();
    let mut out = SymbolPolynomial::zero(n);
    for (m, c) in a.body().terms() {
        let d = OperatorSymbol::new(SymbolPolynomial::monomial(n, m.xi_part(), Coefficient::one()));
        let coeff = OperatorSymbol::new(SymbolPolynomial::monomial(n, m.x_part(), c.conj()));
        let term = compose(&d, &coeff);
        if m.xi_degree() % 2 == 1 {
            out.sub_assign(term.body());
        } else {
            out.add_assign(term.body());
        }
    }
    OperatorSymbol::new(out)
}
