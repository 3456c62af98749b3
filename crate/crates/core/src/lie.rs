//! Vector fields, the conformal algebra o(p+1,q+1) realized by polynomial
//! vector fields, and its three actions: on densities, on weighted symbols and
//! on differential operators.

use std::fmt;
use std::str::FromStr;

use crate::diff_op::{compose, for_each_multi_index, OperatorSymbol};
use crate::endo::EndoOperator;
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::poly::{Monomial, Signature, SymbolPolynomial, VarKind, Weights, MAX_N};
use crate::scalar::{factorial, Coefficient, Rational};

/// `X = X^i ∂_i` with polynomial components.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct VectorField {
    components: Vec<SymbolPolynomial>,
}

impl VectorField {
    pub fn new(components: Vec<SymbolPolynomial>) -> Result<Self> {
        let n = components.len();
        for c in &components {
            if c.n() != n {
                return Err(Error::DimensionMismatch { left: n, right: c.n() });
            }
            if !c.is_x_only() {
                return Err(Error::Argument("vector field components must not depend on ξ".into()));
            }
        }
        Ok(VectorField { components })
    }

    pub fn zero(n: usize) -> Self {
        VectorField { components: vec![SymbolPolynomial::zero(n); n] }
    }

    /// The coordinate field `∂_i`.
    pub fn coordinate(n: usize, i: usize) -> Self {
        let mut v = VectorField::zero(n);
        v.components[i] = SymbolPolynomial::one(n);
        v
    }

    pub fn n(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[SymbolPolynomial] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.is_zero())
    }

    /// `Div(X) = ∂_i X^i`.
    pub fn divergence(&self) -> SymbolPolynomial {
        let mut d = SymbolPolynomial::zero(self.n());
        for (i, c) in self.components.iter().enumerate() {
            d.add_assign(&c.differentiate(VarKind::X, i));
        }
        d
    }

    /// The fibre-linear symbol `X^i ξ_i`.
    pub fn as_symbol(&self) -> SymbolPolynomial {
        let n = self.n();
        let mut s = SymbolPolynomial::zero(n);
        for (i, c) in self.components.iter().enumerate() {
            s.add_assign(&c.mul_monomial(&Monomial::var(VarKind::Xi, i), &Coefficient::one()));
        }
        s
    }

    /// `X(f)` for a function of x.
    pub fn apply(&self, f: &SymbolPolynomial) -> SymbolPolynomial {
        let mut out = SymbolPolynomial::zero(self.n());
        for (i, c) in self.components.iter().enumerate() {
            out.add_assign(&(c * &f.differentiate(VarKind::X, i)));
        }
        out
    }

    pub fn scale(&self, r: &Rational) -> VectorField {
        VectorField { components: self.components.iter().map(|c| c.scale(r)).collect() }
    }

    pub fn add(&self, other: &VectorField) -> VectorField {
        VectorField { components: self.components.iter().zip(&other.components).map(|(a, b)| a + b).collect() }
    }
}

/// `[X,Y]^i = X(Y^i) − Y(X^i)`.
pub fn vf_bracket(x: &VectorField, y: &VectorField) -> VectorField {
    assert_eq!(x.n(), y.n(), "dimension mismatch");
    let components = (0..x.n()).map(|i| &x.apply(&y.components[i]) - &y.apply(&x.components[i])).collect();
    VectorField { components }
}

/// `X(f) + λ Div(X) f` in the trivialization by `|dx¹…dxⁿ|`.
pub fn density_lie(x: &VectorField, f: &SymbolPolynomial, lambda: &Rational) -> SymbolPolynomial {
    &x.apply(f) + &(&x.divergence() * f).scale(lambda)
}

/// Lie derivative of a δ-weighted symbol:
/// `∂_{ξ_i}X·∂_iP − ∂_iX·∂_{ξ_i}P + δ Div(X) P` with `X = X^jξ_j`.
pub fn symbol_lie(x: &VectorField, p: &SymbolPolynomial, delta: &Rational) -> SymbolPolynomial {
    symbol_lie_endo(x, delta).apply(p)
}

pub fn symbol_lie_endo(x: &VectorField, delta: &Rational) -> EndoOperator {
    let n = x.n();
    let mut e = EndoOperator::multiplication(&x.divergence().scale(delta));
    for (i, c) in x.components().iter().enumerate() {
        e.add_assign(&EndoOperator::multiplication(c).compose(&EndoOperator::derivative(n, VarKind::X, i)));
    }
    let xs = x.as_symbol();
    for i in 0..n {
        let coeff = xs.differentiate(VarKind::X, i);
        if coeff.is_zero() {
            continue;
        }
        e.sub_assign(&EndoOperator::multiplication(&coeff).compose(&EndoOperator::derivative(n, VarKind::Xi, i)));
    }
    e
}

/// The operator `L^λ_X = X^i ∂_i + λ Div(X)` as a σ-symbol.
pub fn density_lie_operator(x: &VectorField, lambda: &Rational) -> OperatorSymbol {
    OperatorSymbol::new(&x.as_symbol() + &x.divergence().scale(lambda))
}

/// σ(L^μ_X ∘ A − A ∘ L^λ_X), by honest composition.
pub fn operator_lie(x: &VectorField, a: &OperatorSymbol, w: &Weights) -> OperatorSymbol {
    let left = compose(&density_lie_operator(x, w.mu()), a);
    let right = compose(a, &density_lie_operator(x, w.lambda()));
    &left - &right
}

/// The same action as an endomorphism of σ-symbols:
/// `δ Div X + X^i ∂_{x^i} − Σ_{|α|≥1} (1/α!) (∂_x^α L^λ_X) ∂_ξ^α`.
pub fn operator_lie_endo(x: &VectorField, w: &Weights) -> EndoOperator {
    let n = x.n();
    let mut e = EndoOperator::multiplication(&x.divergence().scale(w.delta()));
    for (i, c) in x.components().iter().enumerate() {
        e.add_assign(&EndoOperator::multiplication(c).compose(&EndoOperator::derivative(n, VarKind::X, i)));
    }
    let l = density_lie_operator(x, w.lambda()).into_body();
    let deg = l.x_degree().unwrap_or(0) as u8;
    let bound = [deg; MAX_N];
    for_each_multi_index(&bound[..n], |alpha| {
        let order: u32 = alpha.iter().map(|&a| a as u32).sum();
        if order == 0 || order > deg as u32 {
            return;
        }
        let mut d = l.clone();
        let mut der = Monomial::one();
        let mut norm = Rational::one();
        for (i, &a) in alpha.iter().enumerate() {
            for _ in 0..a {
                d = d.differentiate(VarKind::X, i);
            }
            der.set(VarKind::Xi, i, a);
            norm *= &factorial(a as u32);
        }
        if d.is_zero() {
            return;
        }
        let mut term = EndoOperator::zero(n);
        for (m, c) in d.terms() {
            term.add_term(*m, der, c.scale(&norm.recip()));
        }
        e.sub_assign(&term);
    });
    e
}

/// Stable identifier of a conformal generator (indices are zero-based here,
/// one-based in the string form).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GeneratorId {
    Translation(usize),
    Rotation(usize, usize),
    Dilation,
    Inversion(usize),
}

impl fmt::Display for GeneratorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorId::Translation(i) => write!(f, "X_i:{}", i + 1),
            GeneratorId::Rotation(i, j) => write!(f, "X_ij:{},{}", i + 1, j + 1),
            GeneratorId::Dilation => write!(f, "X0"),
            GeneratorId::Inversion(i) => write!(f, "Xbar_i:{}", i + 1),
        }
    }
}

impl FromStr for GeneratorId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("unknown generator id {s:?}"));
        let index = |t: &str| -> Result<usize> {
            let v: usize = t.trim().parse().map_err(|_| bad())?;
            v.checked_sub(1).ok_or_else(bad)
        };
        if s == "X0" {
            return Ok(GeneratorId::Dilation);
        }
        if let Some(rest) = s.strip_prefix("X_ij:") {
            let (a, b) = rest.split_once(',').ok_or_else(bad)?;
            let (i, j) = (index(a)?, index(b)?);
            if i >= j {
                return Err(bad());
            }
            return Ok(GeneratorId::Rotation(i, j));
        }
        if let Some(rest) = s.strip_prefix("X_i:") {
            return Ok(GeneratorId::Translation(index(rest)?));
        }
        if let Some(rest) = s.strip_prefix("Xbar_i:") {
            return Ok(GeneratorId::Inversion(index(rest)?));
        }
        Err(bad())
    }
}

/// The vector field of a generator for the given signature.
pub fn generator_field(sig: &Signature, id: GeneratorId) -> Result<VectorField> {
    let n = sig.n();
    let check = |i: usize| if i < n { Ok(()) } else { Err(Error::InvalidIndex { index: i, n }) };
    let x = |i: usize| SymbolPolynomial::x(n, i);
    let g = |i: usize| Rational::from(sig.g(i));
    let mut comps = vec![SymbolPolynomial::zero(n); n];
    match id {
        GeneratorId::Translation(i) => {
            check(i)?;
            comps[i] = SymbolPolynomial::one(n);
        }
        GeneratorId::Rotation(i, j) => {
            check(i)?;
            check(j)?;
            // x_i ∂_j − x_j ∂_i with lowered coordinates
            comps[j] = x(i).scale(&g(i));
            comps[i] = x(j).scale(&-g(j));
        }
        GeneratorId::Dilation => {
            for (i, c) in comps.iter_mut().enumerate() {
                *c = x(i);
            }
        }
        GeneratorId::Inversion(i) => {
            check(i)?;
            // x_j x^j ∂_i − 2 x_i x^j ∂_j
            let sq = crate::poly::metric_square(sig, VarKind::X);
            let xi_low = x(i).scale(&g(i));
            for (k, c) in comps.iter_mut().enumerate() {
                *c = (&xi_low * &x(k)).scale(&Rational::from(-2));
            }
            comps[i].add_assign(&sq);
        }
    }
    VectorField::new(comps)
}

/// Ordered list of generator ids: translations, rotations (i<j), dilation,
/// inversions.
pub fn generator_ids(n: usize) -> Vec<GeneratorId> {
    let mut ids: Vec<GeneratorId> = (0..n).map(GeneratorId::Translation).collect();
    for i in 0..n {
        for j in i + 1..n {
            ids.push(GeneratorId::Rotation(i, j));
        }
    }
    ids.push(GeneratorId::Dilation);
    ids.extend((0..n).map(GeneratorId::Inversion));
    ids
}

/// Matrix of a generator in the defining representation of o(p+1,q+1), as
/// `(scale², M)` with the actual matrix `√scale² · M`.
fn generator_matrix(sig: &Signature, id: GeneratorId) -> (i64, Matrix) {
    let n = sig.n();
    let size = n + 2;
    let mut m = vec![vec![Rational::zero(); size]; size];
    let g = |i: usize| Rational::from(sig.g(i));
    let scale2 = match id {
        GeneratorId::Translation(i) => {
            m[i][n] = Rational::from(-1);
            m[n + 1][i] = g(i);
            2
        }
        GeneratorId::Rotation(i, j) => {
            m[j][i] += &g(i);
            m[i][j] -= &g(j);
            1
        }
        GeneratorId::Dilation => {
            m[n][n] = Rational::from(-1);
            m[n + 1][n + 1] = Rational::one();
            1
        }
        GeneratorId::Inversion(i) => {
            m[i][n + 1] = Rational::one();
            m[n][i] = -g(i);
            2
        }
    };
    (scale2, m)
}

fn trace_product(a: &Matrix, b: &Matrix) -> Rational {
    let mut t = Rational::zero();
    for (i, row) in a.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if !v.is_zero() && !b[j][i].is_zero() {
                t += &(v * &b[j][i]);
            }
        }
    }
    t
}

/// The conformal generators with their Killing-dual basis.
#[derive(Clone, Debug)]
pub struct ConformalBasis {
    sig: Signature,
    ids: Vec<GeneratorId>,
    generators: Vec<VectorField>,
    gram: Matrix,
    inverse_gram: Matrix,
    dual_generators: Vec<VectorField>,
}

impl ConformalBasis {
    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[GeneratorId] {
        &self.ids
    }

    pub fn generators(&self) -> &[VectorField] {
        &self.generators
    }

    pub fn dual_generators(&self) -> &[VectorField] {
        &self.dual_generators
    }

    /// Killing pairing `B(X_α, X_β) = −½ Tr(X_α X_β)`.
    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    /// `B^{αβ}`, so that `X^α = B^{αβ} X_β`.
    pub fn inverse_gram(&self) -> &Matrix {
        &self.inverse_gram
    }

    pub fn get(&self, id: GeneratorId) -> Option<&VectorField> {
        self.ids.iter().position(|&g| g == id).map(|k| &self.generators[k])
    }

    /// Coordinates of `v` in the generator basis, if it lies in the span.
    pub fn coordinates(&self, v: &VectorField) -> Option<Vec<Rational>> {
        let mut keys: Vec<(usize, Monomial)> = Vec::new();
        let mut collect = |f: &VectorField| {
            for (i, c) in f.components().iter().enumerate() {
                for (m, _) in c.terms() {
                    if !keys.contains(&(i, *m)) {
                        keys.push((i, *m));
                    }
                }
            }
        };
        for g in &self.generators {
            collect(g);
        }
        collect(v);
        let real = |f: &VectorField, i: usize, m: &Monomial| -> Option<Rational> {
            let c = f.components()[i].coefficient(m);
            if c.is_zero() {
                return Some(Rational::zero());
            }
            c.as_rational()
        };
        let mut a: Matrix = Vec::with_capacity(keys.len());
        let mut b = Vec::with_capacity(keys.len());
        for (i, m) in &keys {
            let mut row = Vec::with_capacity(self.generators.len());
            for g in &self.generators {
                row.push(real(g, *i, m)?);
            }
            a.push(row);
            b.push(real(v, *i, m)?);
        }
        linalg::solve(&a, &b)
    }
}

pub fn conformal_generators(sig: &Signature) -> Result<ConformalBasis> {
    let n = sig.n();
    if n < 2 {
        return Err(Error::UnsupportedDimension { n, reason: "conformal generators need n >= 2" });
    }
    let ids = generator_ids(n);
    let generators = ids.iter().map(|&id| generator_field(sig, id)).collect::<Result<Vec<_>>>()?;
    let mats: Vec<(i64, Matrix)> = ids.iter().map(|&id| generator_matrix(sig, id)).collect();
    let half = Rational::new(-1, 2);
    let mut gram = vec![vec![Rational::zero(); ids.len()]; ids.len()];
    for (a, (sa, ma)) in mats.iter().enumerate() {
        for (b, (sb, mb)) in mats.iter().enumerate() {
            let t = trace_product(ma, mb);
            let value = match (sa, sb) {
                (1, 1) => t,
                (2, 2) => &t * &Rational::from(2),
                _ => {
                    // √2 · rational: the trace must vanish for the pairing to be rational.
                    assert!(t.is_zero(), "irrational Killing pairing");
                    t
                }
            };
            gram[a][b] = &value * &half;
        }
    }
    let inverse_gram = linalg::inverse(&gram).expect("Killing form is nondegenerate");
    let dual_generators = inverse_gram
        .iter()
        .map(|row| {
            let mut v = VectorField::zero(n);
            for (c, g) in row.iter().zip(&generators) {
                if !c.is_zero() {
                    v = v.add(&g.scale(c));
                }
            }
            v
        })
        .collect();
    Ok(ConformalBasis { sig: *sig, ids, generators, gram, inverse_gram, dual_generators })
}
