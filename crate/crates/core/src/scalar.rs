//! Exact scalars: rationals, Gaussian rationals and the coefficient ring
//! ℚ(i)[ħ] in which every symbol and operator coefficient lives.
//!
//! [`Rational`] keeps an `i64` fast path and falls back to a big-integer
//! representation only when a result does not fit. The representation is
//! canonical (lowest terms, positive denominator, small whenever possible), so
//! structural equality is numeric equality.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use smallvec::SmallVec;

use crate::error::Error;

#[derive(Clone)]
enum Repr {
    Small(i64, i64),
    Big(BigInt, BigInt),
}

/// An exact rational number in lowest terms.
#[derive(Clone)]
pub struct Rational(Repr);

fn gcd_i128(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Rational {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_i128(num as i128, den as i128)
    }

    pub fn from_int(v: i64) -> Self {
        Rational(Repr::Small(v, 1))
    }

    fn from_i128(num: i128, den: i128) -> Self {
        debug_assert!(den != 0);
        let g = gcd_i128(num, den);
        let (mut n, mut d) = if g > 1 { (num / g, den / g) } else { (num, den) };
        if d < 0 {
            n = -n;
            d = -d;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Rational(Repr::Small(n, d)),
            _ => Rational(Repr::Big(BigInt::from(n), BigInt::from(d))),
        }
    }

    fn from_big(num: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let g = num.gcd(&den);
        let (mut n, mut d) = if g.is_one() { (num, den) } else { (num / &g, den / &g) };
        if d.is_negative() {
            n = -n;
            d = -d;
        }
        match (n.to_i64(), d.to_i64()) {
            (Some(n), Some(d)) => Rational(Repr::Small(n, d)),
            _ => Rational(Repr::Big(n, d)),
        }
    }

    fn to_big(&self) -> (BigInt, BigInt) {
        match &self.0 {
            Repr::Small(n, d) => (BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(n, d) => (n.clone(), d.clone()),
        }
    }

    pub fn zero() -> Self {
        Rational(Repr::Small(0, 1))
    }

    pub fn one() -> Self {
        Rational(Repr::Small(1, 1))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }

    pub fn is_one(&self) -> bool {
        matches!(self.0, Repr::Small(1, 1))
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(_, d) => *d == 1,
            Repr::Big(_, d) => d.is_one(),
        }
    }

    pub fn signum(&self) -> i32 {
        match &self.0 {
            Repr::Small(n, _) => n.signum() as i32,
            Repr::Big(n, _) => {
                if n.is_negative() {
                    -1
                } else if n.is_zero() {
                    0
                } else {
                    1
                }
            }
        }
    }

    pub fn numer(&self) -> BigInt {
        self.to_big().0
    }

    pub fn denom(&self) -> BigInt {
        self.to_big().1
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        match &self.0 {
            Repr::Small(n, d) => Self::from_i128(*d as i128, *n as i128),
            Repr::Big(n, d) => Self::from_big(d.clone(), n.clone()),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Rational::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small(n, d) => *n as f64 / *d as f64,
            Repr::Big(n, d) => n.to_f64().unwrap_or(f64::NAN) / d.to_f64().unwrap_or(f64::NAN),
        }
    }
}

impl Default for Rational {
    fn default() -> Self {
        Rational::zero()
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational::from_int(v)
    }
}

impl From<i32> for Rational {
    fn from(v: i32) -> Self {
        Rational::from_int(v as i64)
    }
}

impl From<usize> for Rational {
    fn from(v: usize) -> Self {
        Rational::from_int(v as i64)
    }
}

impl PartialEq for Rational {
    fn eq(&self, other: &Self) -> bool {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => a == c && b == d,
            (Repr::Big(a, b), Repr::Big(c, d)) => a == c && b == d,
            _ => false,
        }
    }
}

impl Eq for Rational {}

impl Hash for Rational {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match &self.0 {
            Repr::Small(n, d) => {
                0u8.hash(state);
                n.hash(state);
                d.hash(state);
            }
            Repr::Big(n, d) => {
                1u8.hash(state);
                n.hash(state);
                d.hash(state);
            }
        }
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                ((*a as i128) * (*d as i128)).cmp(&((*c as i128) * (*b as i128)))
            }
            _ => {
                let (a, b) = self.to_big();
                let (c, d) = other.to_big();
                (a * d).cmp(&(c * b))
            }
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> Add<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn add(self, rhs: &Rational) -> Rational {
        match (&self.0, &rhs.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                if *b == 1 && *d == 1 {
                    return Rational::from_i128(*a as i128 + *c as i128, 1);
                }
                let num = (*a as i128) * (*d as i128) + (*c as i128) * (*b as i128);
                Rational::from_i128(num, (*b as i128) * (*d as i128))
            }
            _ => {
                let (a, b) = self.to_big();
                let (c, d) = rhs.to_big();
                Rational::from_big(a * &d + c * &b, b * d)
            }
        }
    }
}

impl<'a> Sub<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn sub(self, rhs: &Rational) -> Rational {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn mul(self, rhs: &Rational) -> Rational {
        match (&self.0, &rhs.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                Rational::from_i128((*a as i128) * (*c as i128), (*b as i128) * (*d as i128))
            }
            _ => {
                let (a, b) = self.to_big();
                let (c, d) = rhs.to_big();
                Rational::from_big(a * c, b * d)
            }
        }
    }
}

impl<'a> Div<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn div(self, rhs: &Rational) -> Rational {
        self * &rhs.recip()
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match &self.0 {
            Repr::Small(n, d) => Rational::from_i128(-(*n as i128), *d as i128),
            Repr::Big(n, d) => Rational::from_big(-n.clone(), d.clone()),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: &Rational) -> Rational {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<Rational> for &'a Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        -&self
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        *self = &*self * rhs;
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, d) = match &self.0 {
            Repr::Small(n, d) => (n.to_string(), d.to_string()),
            Repr::Big(n, d) => (n.to_string(), d.to_string()),
        };
        if d == "1" {
            write!(f, "{n}")
        } else {
            write!(f, "{n}/{d}")
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts `"a"` or `"a/b"` with optional sign; rejects a zero denominator.
    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let bad = || Error::Parse(format!("malformed rational {s:?}"));
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        Ok(Rational::from_big(n, d))
    }
}

/// Binomial coefficient C(n, k) as a rational (exact for any n < 2^31).
pub fn binomial(n: u32, k: u32) -> Rational {
    if k > n {
        return Rational::zero();
    }
    let mut acc = Rational::one();
    for i in 0..k {
        acc = &acc * &Rational::new((n - i) as i64, (i + 1) as i64);
    }
    acc
}

/// Generalized binomial coefficient C(e, k) for a rational exponent.
pub fn binomial_rational(e: &Rational, k: u32) -> Rational {
    let mut acc = Rational::one();
    for i in 0..k {
        let top = e - &Rational::from(i as i64);
        acc = &(&acc * &top) / &Rational::from((i + 1) as i64);
    }
    acc
}

pub fn factorial(n: u32) -> Rational {
    (1..=n).fold(Rational::one(), |acc, i| &acc * &Rational::from(i as i64))
}

/// Falling factorial a (a-1) ... (a-k+1).
pub fn falling(a: u32, k: u32) -> i64 {
    if k > a {
        return 0;
    }
    (0..k).fold(1i64, |acc, i| acc * (a - i) as i64)
}

/// A Gaussian rational `re + i·im`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Gaussian {
    pub re: Rational,
    pub im: Rational,
}

impl Gaussian {
    pub fn new(re: Rational, im: Rational) -> Self {
        Gaussian { re, im }
    }

    pub fn real(re: Rational) -> Self {
        Gaussian { re, im: Rational::zero() }
    }

    pub fn i() -> Self {
        Gaussian { re: Rational::zero(), im: Rational::one() }
    }

    pub fn zero() -> Self {
        Gaussian::default()
    }

    pub fn one() -> Self {
        Gaussian::real(Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Gaussian { re: self.re.clone(), im: -&self.im }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Gaussian { re: &self.re * r, im: &self.im * r }
    }

    /// `i^k`.
    pub fn i_pow(k: u32) -> Self {
        match k % 4 {
            0 => Gaussian::one(),
            1 => Gaussian::i(),
            2 => Gaussian::real(Rational::from(-1)),
            _ => Gaussian::new(Rational::zero(), Rational::from(-1)),
        }
    }

    pub fn inv(&self) -> Self {
        let norm = &(&self.re * &self.re) + &(&self.im * &self.im);
        assert!(!norm.is_zero(), "inverse of zero");
        Gaussian { re: &self.re / &norm, im: -(&self.im / &norm) }
    }
}

impl<'a> Add<&'a Gaussian> for &'a Gaussian {
    type Output = Gaussian;
    fn add(self, rhs: &Gaussian) -> Gaussian {
        Gaussian { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl<'a> Mul<&'a Gaussian> for &'a Gaussian {
    type Output = Gaussian;
    fn mul(self, rhs: &Gaussian) -> Gaussian {
        if self.im.is_zero() && rhs.im.is_zero() {
            return Gaussian::real(&self.re * &rhs.re);
        }
        Gaussian {
            re: &(&self.re * &rhs.re) - &(&self.im * &rhs.im),
            im: &(&self.re * &rhs.im) + &(&self.im * &rhs.re),
        }
    }
}

impl Neg for &Gaussian {
    type Output = Gaussian;
    fn neg(self) -> Gaussian {
        Gaussian { re: -&self.re, im: -&self.im }
    }
}

impl fmt::Display for Gaussian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            _ => write!(f, "({}+{}i)", self.re, self.im),
        }
    }
}

impl fmt::Debug for Gaussian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A Gaussian rational times a formal power of ħ.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ScaledCoefficient {
    pub value: Gaussian,
    pub hpow: u32,
}

/// An element of ℚ(i)[ħ]: scaled coefficients with distinct ħ-powers, sorted
/// by ħ-power, none zero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Coefficient {
    terms: SmallVec<[ScaledCoefficient; 1]>,
}

impl Coefficient {
    pub fn zero() -> Self {
        Coefficient::default()
    }

    pub fn one() -> Self {
        Coefficient::from_rational(Rational::one())
    }

    pub fn from_rational(r: Rational) -> Self {
        Coefficient::scaled(Gaussian::real(r), 0)
    }

    pub fn from_int(v: i64) -> Self {
        Coefficient::from_rational(Rational::from(v))
    }

    pub fn scaled(value: Gaussian, hpow: u32) -> Self {
        let mut terms = SmallVec::new();
        if !value.is_zero() {
            terms.push(ScaledCoefficient { value, hpow });
        }
        Coefficient { terms }
    }

    /// `(iħ)^m`.
    pub fn i_hbar_pow(m: u32) -> Self {
        Coefficient::scaled(Gaussian::i_pow(m), m)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[ScaledCoefficient] {
        &self.terms
    }

    pub fn min_hpow(&self) -> Option<u32> {
        self.terms.first().map(|t| t.hpow)
    }

    pub fn max_hpow(&self) -> Option<u32> {
        self.terms.last().map(|t| t.hpow)
    }

    /// The Gaussian coefficient of `ħ^h`.
    pub fn at_hpow(&self, h: u32) -> Gaussian {
        self.terms
            .iter()
            .find(|t| t.hpow == h)
            .map(|t| t.value.clone())
            .unwrap_or_default()
    }

    /// The rational value, if this is a real ħ-free scalar.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [t] if t.hpow == 0 && t.value.im.is_zero() => Some(t.value.re.clone()),
            _ => None,
        }
    }

    pub fn push_term(&mut self, value: Gaussian, hpow: u32) {
        if value.is_zero() {
            return;
        }
        match self.terms.binary_search_by(|t| t.hpow.cmp(&hpow)) {
            Ok(idx) => {
                let v = &self.terms[idx].value + &value;
                if v.is_zero() {
                    self.terms.remove(idx);
                } else {
                    self.terms[idx].value = v;
                }
            }
            Err(idx) => self.terms.insert(idx, ScaledCoefficient { value, hpow }),
        }
    }

    pub fn add_assign_ref(&mut self, rhs: &Coefficient) {
        for t in &rhs.terms {
            self.push_term(t.value.clone(), t.hpow);
        }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Coefficient::zero();
        }
        Coefficient {
            terms: self
                .terms
                .iter()
                .map(|t| ScaledCoefficient { value: t.value.scale(r), hpow: t.hpow })
                .collect(),
        }
    }

    pub fn conj(&self) -> Self {
        Coefficient {
            terms: self
                .terms
                .iter()
                .map(|t| ScaledCoefficient { value: t.value.conj(), hpow: t.hpow })
                .collect(),
        }
    }

    /// Multiply by `ħ^shift` (negative shifts require enough ħ).
    pub fn shift_hpow(&self, shift: i64) -> Option<Self> {
        let mut terms = SmallVec::new();
        for t in &self.terms {
            let h = t.hpow as i64 + shift;
            if h < 0 {
                return None;
            }
            terms.push(ScaledCoefficient { value: t.value.clone(), hpow: h as u32 });
        }
        Some(Coefficient { terms })
    }

    /// Drop every ħ-power above `order`.
    pub fn truncate(&self, order: u32) -> Self {
        Coefficient { terms: self.terms.iter().filter(|t| t.hpow <= order).cloned().collect() }
    }

    /// Keep only the `ħ^h` term.
    pub fn hpow_part(&self, h: u32) -> Self {
        Coefficient { terms: self.terms.iter().filter(|t| t.hpow == h).cloned().collect() }
    }
}

impl<'a> Add<&'a Coefficient> for &'a Coefficient {
    type Output = Coefficient;
    fn add(self, rhs: &Coefficient) -> Coefficient {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl<'a> Mul<&'a Coefficient> for &'a Coefficient {
    type Output = Coefficient;
    fn mul(self, rhs: &Coefficient) -> Coefficient {
        if let ([a], [b]) = (self.terms.as_slice(), rhs.terms.as_slice()) {
            return Coefficient::scaled(&a.value * &b.value, a.hpow + b.hpow);
        }
        let mut out = Coefficient::zero();
        for a in &self.terms {
            for b in &rhs.terms {
                out.push_term(&a.value * &b.value, a.hpow + b.hpow);
            }
        }
        out
    }
}

impl Neg for &Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        self.scale(&Rational::from(-1))
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, t) in self.terms.iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            match t.hpow {
                0 => write!(f, "{}", t.value)?,
                1 => write!(f, "{}ħ", t.value)?,
                h => write!(f, "{}ħ^{}", t.value, h)?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
