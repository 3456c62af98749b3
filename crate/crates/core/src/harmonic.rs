//! The (k,s) decomposition of symbols into eigenvectors of R₀ = RT and of the
//! Casimir operator C_δ.

use crate::endo::EndoOperator;
use crate::error::{Error, Result};
use crate::invariants::{r_op, t_op};
use crate::poly::{Signature, SymbolPolynomial};
use crate::scalar::Rational;

/// A ξ-homogeneous piece `R^s · Q` with `T(Q) = 0`, of ξ-degree `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HarmonicComponent {
    pub k: u32,
    pub s: u32,
    pub part: SymbolPolynomial,
}

fn check_range(k: u32, s: u32) -> Result<()> {
    if 2 * s > k {
        return Err(Error::Range(format!("need 0 <= 2s <= k, got k={k}, s={s}")));
    }
    Ok(())
}

fn rho_unchecked(k: u32, s: u32, n: usize) -> Rational {
    let v = 2 * s as i64 * (n as i64 + 2 * (k as i64 - s as i64 - 1));
    Rational::from(v)
}

/// `ρ_{k,s} = 2s(n + 2(k−s−1))`, the R₀-eigenvalue on `P_{k,s}`.
pub fn rho(k: u32, s: u32, sig: &Signature) -> Result<Rational> {
    check_range(k, s)?;
    Ok(rho_unchecked(k, s, sig.n()))
}

pub(crate) fn gamma_unchecked(k: u32, s: u32, n: usize, delta: &Rational) -> Rational {
    let nr = Rational::from(n as i64);
    let kr = Rational::from(k as i64);
    let one = Rational::one();
    let lin = &(&one + &(&nr * &(delta - &one))) - &kr;
    let mut g = rho_unchecked(k, s, n);
    g += &(&(&Rational::from(2) * &kr) * &lin);
    g -= &(&(&(&nr * &nr) * delta) * &(delta - &one));
    g
}

/// `γ_{k,s} = ρ_{k,s} + 2k(1 + n(δ−1) − k) − n²δ(δ−1)`, the C_δ-eigenvalue.
pub fn gamma(k: u32, s: u32, sig: &Signature, delta: &Rational) -> Result<Rational> {
    check_range(k, s)?;
    Ok(gamma_unchecked(k, s, sig.n(), delta))
}

/// Coefficients (ascending powers) of the Lagrange basis polynomial that is 1
/// at `nodes[s]` and 0 at the other nodes.
fn lagrange_coefficients(nodes: &[Rational], s: usize) -> Vec<Rational> {
    let mut poly = vec![Rational::one()];
    for (t, node) in nodes.iter().enumerate() {
        if t == s {
            continue;
        }
        let denom = (&nodes[s] - node).recip();
        let mut next = vec![Rational::zero(); poly.len() + 1];
        for (j, c) in poly.iter().enumerate() {
            let scaled = c * &denom;
            next[j + 1] += &scaled;
            next[j] -= &(&scaled * node);
        }
        poly = next;
    }
    poly
}

/// Spectral projection by R₀, with the operator built once.
pub(crate) struct Spectral {
    r0: EndoOperator,
}

impl Spectral {
    pub(crate) fn new(sig: &Signature) -> Self {
        Spectral { r0: r_op(sig).compose(&t_op(sig)) }
    }

    /// All (k,s) components, s = 0..=k/2, of a ξ-homogeneous polynomial of
    /// degree `k`.
    pub(crate) fn split(&self, pk: &SymbolPolynomial, k: u32, sig: &Signature) -> Vec<SymbolPolynomial> {
        let count = (k / 2 + 1) as usize;
        let nodes: Vec<Rational> = (0..count as u32).map(|s| rho_unchecked(k, s, sig.n())).collect();
        let mut krylov = Vec::with_capacity(count);
        krylov.push(pk.clone());
        for j in 1..count {
            let next = self.r0.apply(&krylov[j - 1]);
            krylov.push(next);
        }
        (0..count)
            .map(|s| {
                let coeffs = lagrange_coefficients(&nodes, s);
                let mut out = SymbolPolynomial::zero(sig.n());
                for (c, v) in coeffs.iter().zip(&krylov) {
                    if !c.is_zero() {
                        out.add_assign(&v.scale(c));
                    }
                }
                out
            })
            .collect()
    }
}

/// Decomposes `P` into its nonzero (k,s) components, ordered by (k,s).
pub fn decompose(p: &SymbolPolynomial, sig: &Signature) -> Vec<HarmonicComponent> {
    assert_eq!(p.n(), sig.n(), "dimension mismatch");
    let spectral = Spectral::new(sig);
    let mut out = Vec::new();
    for (k, pk) in p.xi_degree_split() {
        for (s, part) in spectral.split(&pk, k, sig).into_iter().enumerate() {
            if !part.is_zero() {
                out.push(HarmonicComponent { k, s: s as u32, part });
            }
        }
    }
    out
}

/// The (k,s) component of `P`.
pub fn project(p: &SymbolPolynomial, k: u32, s: u32, sig: &Signature) -> Result<SymbolPolynomial> {
    check_range(k, s)?;
    if p.n() != sig.n() {
        return Err(Error::DimensionMismatch { left: p.n(), right: sig.n() });
    }
    let pk = p.xi_homogeneous_part(k);
    if pk.is_zero() {
        return Ok(pk);
    }
    Ok(Spectral::new(sig).split(&pk, k, sig).swap_remove(s as usize))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{metric_square, VarKind};

    fn sig(p: usize, q: usize) -> Signature {
        Signature::new(p, q).unwrap()
    }

    #[test]
    fn eigenvalue_examples() {
        let s2 = sig(2, 0);
        let s3 = sig(3, 0);
        assert_eq!(rho(5, 0, &s3).unwrap(), Rational::zero());
        assert_eq!(rho(2, 1, &s2).unwrap(), Rational::from(4));
        assert_eq!(rho(4, 2, &s3).unwrap(), Rational::from(20));
        assert!(rho(2, 2, &s2).is_err());
        let d = Rational::new(3, 5);
        let expect = -&(&(&Rational::from(9) * &d) * &(&d - &Rational::one()));
        assert_eq!(gamma(0, 0, &s3, &d).unwrap(), expect);
        assert_eq!(gamma(2, 1, &s2, &Rational::zero()).unwrap(), Rational::from(-8));
        assert_eq!(gamma(1, 0, &s3, &Rational::zero()).unwrap(), Rational::from(-6));
        assert!(gamma(1, 1, &s3, &d).is_err());
    }

    #[test]
    fn decomposition_examples() {
        let s2 = sig(2, 0);
        let xi1 = SymbolPolynomial::xi(2, 0);
        assert_eq!(decompose(&xi1, &s2), vec![HarmonicComponent { k: 1, s: 0, part: xi1.clone() }]);

        let xi2 = SymbolPolynomial::xi(2, 1);
        let half = Rational::new(1, 2);
        let sq = &xi1 * &xi1;
        let r = metric_square(&s2, VarKind::Xi);
        let comps = decompose(&sq, &s2);
        assert_eq!(
            comps,
            vec![
                HarmonicComponent { k: 2, s: 0, part: (&sq - &(&xi2 * &xi2)).scale(&half) },
                HarmonicComponent { k: 2, s: 1, part: r.scale(&half) },
            ]
        );
        assert_eq!(project(&sq, 2, 1, &s2).unwrap(), r.scale(&half));
        assert_eq!(project(&r, 2, 1, &s2).unwrap(), r);
        assert!(project(&xi1, 2, 0, &s2).unwrap().is_zero());

        let s3 = sig(3, 0);
        let r3 = metric_square(&s3, VarKind::Xi);
        let r3sq = &r3 * &r3;
        assert_eq!(decompose(&r3sq, &s3), vec![HarmonicComponent { k: 4, s: 2, part: r3sq.clone() }]);
    }
}
