//! Finite Grassmann algebra `Λ = ℂ[β₁, …, βₙ]` with sparse bitmask storage.
//!
//! A monomial `β_{i₁}⋯β_{i_k}` with `i₁ < ⋯ < i_k` is stored as the bitmask
//! with bits `i₁, …, i_k` set (generator `βᵢ` is bit `i − 1`).

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported number of generators.
pub const MAX_GENERATORS: usize = 16;

/// Default absolute tolerance per coefficient for approximate comparisons.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Z/2 grading of a homogeneous element or of a matrix index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of_mask(mask: u32) -> Parity {
        if mask.count_ones() % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    /// Sum in Z/2.
    pub fn add(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    /// 0 for even, 1 for odd.
    pub fn bit(self) -> u32 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }
}

/// Sign `±1` picked up when the ascending monomials `a` and `b` are
/// concatenated and sorted. Zero is never returned; callers must check
/// that the masks are disjoint.
#[inline]
pub fn reorder_sign(a: u32, b: u32) -> f64 {
    let mut inversions = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        inversions += (a >> j >> 1).count_ones();
        rest &= rest - 1;
    }
    if inversions & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Real structure `ω` on `Λ` with sign convention `ε`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RealStructure {
    epsilon: i8,
}

impl RealStructure {
    pub fn new(epsilon: i8) -> Result<Self> {
        if epsilon == 1 || epsilon == -1 {
            Ok(RealStructure { epsilon })
        } else {
            Err(Error::Invalid(format!("epsilon must be +1 or -1, got {epsilon}")))
        }
    }

    pub fn epsilon(&self) -> i8 {
        self.epsilon
    }
}

/// Element of a finite Grassmann algebra with complex coefficients.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ScalarRepr", into = "ScalarRepr")]
pub struct GrassmannScalar {
    n: usize,
    /// Sorted by mask, no exact zeros.
    terms: Vec<(u32, Complex64)>,
}

impl GrassmannScalar {
    fn check_n(n: usize) {
        assert!(n <= MAX_GENERATORS, "at most {MAX_GENERATORS} generators are supported, got {n}");
    }

    pub fn zero(n: usize) -> Self {
        Self::check_n(n);
        GrassmannScalar { n, terms: Vec::new() }
    }

    pub fn one(n: usize) -> Self {
        Self::scalar(n, Complex64::new(1.0, 0.0))
    }

    pub fn scalar(n: usize, c: Complex64) -> Self {
        Self::monomial(n, 0, c)
    }

    pub fn real(n: usize, x: f64) -> Self {
        Self::scalar(n, Complex64::new(x, 0.0))
    }

    /// The generator `β_{i+1}` (zero-based `i`).
    pub fn generator(n: usize, i: usize) -> Self {
        assert!(i < n, "generator index {i} out of range for {n} generators");
        Self::monomial(n, 1 << i, Complex64::new(1.0, 0.0))
    }

    pub fn monomial(n: usize, mask: u32, c: Complex64) -> Self {
        Self::check_n(n);
        assert!(mask >> n == 0, "monomial {mask:#b} uses generators beyond {n}");
        let terms = if c == Complex64::new(0.0, 0.0) { Vec::new() } else { vec![(mask, c)] };
        GrassmannScalar { n, terms }
    }

    /// Builds an element from arbitrary `(mask, coefficient)` pairs; repeated
    /// masks are summed.
    pub fn from_terms<I: IntoIterator<Item = (u32, Complex64)>>(n: usize, terms: I) -> Self {
        Self::check_n(n);
        let mut v: Vec<(u32, Complex64)> = terms.into_iter().collect();
        for (m, _) in &v {
            assert!(m >> n == 0, "monomial {m:#b} uses generators beyond {n}");
        }
        GrassmannScalar { n, terms: normalize(v.as_mut_slice()) }
    }

    /// Builds an element from a dense coefficient vector of length `2ⁿ`.
    pub fn from_dense(n: usize, dense: &[Complex64]) -> Self {
        Self::check_n(n);
        assert_eq!(dense.len(), 1 << n);
        let terms = dense
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != Complex64::new(0.0, 0.0))
            .map(|(m, c)| (m as u32, *c))
            .collect();
        GrassmannScalar { n, terms }
    }

    pub fn to_dense(&self) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); 1 << self.n];
        for &(m, c) in &self.terms {
            out[m as usize] = c;
        }
        out
    }

    pub fn n_generators(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[(u32, Complex64)] {
        &self.terms
    }

    pub fn coeff(&self, mask: u32) -> Complex64 {
        match self.terms.binary_search_by_key(&mask, |t| t.0) {
            Ok(k) => self.terms[k].1,
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Constant term (the image under reduction modulo nilpotents).
    pub fn body(&self) -> Complex64 {
        self.coeff(0)
    }

    pub fn reduce(&self) -> Complex64 {
        self.body()
    }

    /// Nilpotent part.
    pub fn soul(&self) -> Self {
        self.filter(|m| m != 0)
    }

    pub fn even_part(&self) -> Self {
        self.filter(|m| m.count_ones() % 2 == 0)
    }

    pub fn odd_part(&self) -> Self {
        self.filter(|m| m.count_ones() % 2 == 1)
    }

    fn filter<F: Fn(u32) -> bool>(&self, keep: F) -> Self {
        GrassmannScalar {
            n: self.n,
            terms: self.terms.iter().copied().filter(|(m, _)| keep(*m)).collect(),
        }
    }

    /// True when every stored monomial has even degree (zero counts as even).
    pub fn is_even(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.count_ones() % 2 == 0)
    }

    /// True when every stored monomial has odd degree (zero counts as odd).
    pub fn is_odd(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.count_ones() % 2 == 1)
    }

    pub fn has_parity(&self, p: Parity) -> bool {
        match p {
            Parity::Even => self.is_even(),
            Parity::Odd => self.is_odd(),
        }
    }

    /// Parity of a homogeneous element; `None` when inhomogeneous. Zero is even.
    pub fn parity(&self) -> Option<Parity> {
        if self.is_even() {
            Some(Parity::Even)
        } else if self.is_odd() {
            Some(Parity::Odd)
        } else {
            None
        }
    }

    /// Same element viewed in an algebra with `n` generators (`n ≥` current).
    pub fn embed(&self, n: usize) -> Self {
        assert!(n >= self.n, "cannot embed {} generators into {n}", self.n);
        Self::check_n(n);
        GrassmannScalar { n, terms: self.terms.clone() }
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self - other).max_abs()
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.n == other.n && self.max_abs_diff(other) <= tol
    }

    /// Drops coefficients of modulus at most `tol`.
    pub fn chop(&self, tol: f64) -> Self {
        GrassmannScalar {
            n: self.n,
            terms: self.terms.iter().copied().filter(|(_, c)| c.norm() > tol).collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        if c == Complex64::new(0.0, 0.0) {
            return Self::zero(self.n);
        }
        GrassmannScalar { n: self.n, terms: self.terms.iter().map(|&(m, x)| (m, x * c)).collect() }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_algebra(other)?;
        let mut v: Vec<(u32, Complex64)> = self.terms.iter().chain(other.terms.iter()).copied().collect();
        Ok(GrassmannScalar { n: self.n, terms: normalize(v.as_mut_slice()) })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_algebra(other)?;
        if self.terms.is_empty() || other.terms.is_empty() {
            return Ok(Self::zero(self.n));
        }
        let mut v = Vec::with_capacity(self.terms.len() * other.terms.len());
        for &(ma, ca) in &self.terms {
            for &(mb, cb) in &other.terms {
                if ma & mb == 0 {
                    v.push((ma | mb, ca * cb * reorder_sign(ma, mb)));
                }
            }
        }
        Ok(GrassmannScalar { n: self.n, terms: normalize(v.as_mut_slice()) })
    }

    fn same_algebra(&self, other: &Self) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(Error::Dimension(format!(
                "Grassmann algebras with {} and {} generators",
                self.n, other.n
            )))
        }
    }

    /// Multiplicative inverse via the terminating series
    /// `b⁻¹ Σ (−s/b)ᵐ` for body `b` and soul `s`.
    pub fn invert(&self) -> Result<Self> {
        let b = self.body();
        if b == Complex64::new(0.0, 0.0) {
            return Err(Error::NotInvertible("element has zero body".into()));
        }
        let binv = Complex64::new(1.0, 0.0) / b;
        let step = self.soul().scale(-binv);
        let mut acc = Self::one(self.n);
        let mut power = Self::one(self.n);
        loop {
            power = &power * &step;
            if power.is_zero() {
                break;
            }
            acc += &power;
        }
        Ok(acc.scale(binv))
    }

    /// Exponential `e^{body} Σ soulᵏ/k!`; the series terminates.
    pub fn exp(&self) -> Self {
        let soul = self.soul();
        let mut acc = Self::one(self.n);
        let mut power = Self::one(self.n);
        let mut k = 1.0;
        loop {
            power = (&power * &soul).scale(Complex64::new(1.0 / k, 0.0));
            if power.is_zero() {
                break;
            }
            acc += &power;
            k += 1.0;
        }
        acc.scale(self.body().exp())
    }

    pub fn powi(&self, k: u32) -> Self {
        let mut acc = Self::one(self.n);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Applies the real structure: conjugates coefficients, fixes every
    /// generator and reverses products up to the sign `ε^{|a||b|}`.
    pub fn conjugate(&self, s: RealStructure) -> Self {
        let minus_eps = -f64::from(s.epsilon);
        let terms = self
            .terms
            .iter()
            .map(|&(m, c)| {
                let k = m.count_ones() as i32;
                let sign = minus_eps.powi(k * (k - 1) / 2);
                (m, c.conj() * sign)
            })
            .collect();
        GrassmannScalar { n: self.n, terms }
    }
}

fn normalize(v: &mut [(u32, Complex64)]) -> Vec<(u32, Complex64)> {
    v.sort_unstable_by_key(|t| t.0);
    let mut out: Vec<(u32, Complex64)> = Vec::with_capacity(v.len());
    for &(m, c) in v.iter() {
        match out.last_mut() {
            Some(last) if last.0 == m => last.1 += c,
            _ => out.push((m, c)),
        }
    }
    out.retain(|(_, c)| *c != Complex64::new(0.0, 0.0));
    out
}

impl fmt::Debug for GrassmannScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GrassmannScalar(n={}, {})", self.n, self)
    }
}

impl fmt::Display for GrassmannScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, &(m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({}{:+}i)", c.re, c.im)?;
            for i in 0..self.n {
                if m & (1 << i) != 0 {
                    write!(f, "*b{}", i + 1)?;
                }
            }
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:expr) => {
        impl $tr<&GrassmannScalar> for &GrassmannScalar {
            type Output = GrassmannScalar;
            fn $method(self, rhs: &GrassmannScalar) -> GrassmannScalar {
                let f: fn(&GrassmannScalar, &GrassmannScalar) -> Result<GrassmannScalar> = $checked;
                f(self, rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<GrassmannScalar> for GrassmannScalar {
            type Output = GrassmannScalar;
            fn $method(self, rhs: GrassmannScalar) -> GrassmannScalar {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&GrassmannScalar> for GrassmannScalar {
            type Output = GrassmannScalar;
            fn $method(self, rhs: &GrassmannScalar) -> GrassmannScalar {
                (&self).$method(rhs)
            }
        }
        impl $tr<GrassmannScalar> for &GrassmannScalar {
            type Output = GrassmannScalar;
            fn $method(self, rhs: GrassmannScalar) -> GrassmannScalar {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| a.checked_add(b));
forward_binop!(Sub, sub, |a, b| a.checked_add(&-b));
forward_binop!(Mul, mul, |a, b| a.checked_mul(b));

impl Neg for &GrassmannScalar {
    type Output = GrassmannScalar;
    fn neg(self) -> GrassmannScalar {
        GrassmannScalar { n: self.n, terms: self.terms.iter().map(|&(m, c)| (m, -c)).collect() }
    }
}

impl Neg for GrassmannScalar {
    type Output = GrassmannScalar;
    fn neg(self) -> GrassmannScalar {
        -&self
    }
}

impl AddAssign<&GrassmannScalar> for GrassmannScalar {
    fn add_assign(&mut self, rhs: &GrassmannScalar) {
        *self = &*self + rhs;
    }
}

impl AddAssign<GrassmannScalar> for GrassmannScalar {
    fn add_assign(&mut self, rhs: GrassmannScalar) {
        *self = &*self + &rhs;
    }
}

impl SubAssign<&GrassmannScalar> for GrassmannScalar {
    fn sub_assign(&mut self, rhs: &GrassmannScalar) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&GrassmannScalar> for GrassmannScalar {
    fn mul_assign(&mut self, rhs: &GrassmannScalar) {
        *self = &*self * rhs;
    }
}

impl Mul<Complex64> for &GrassmannScalar {
    type Output = GrassmannScalar;
    fn mul(self, rhs: Complex64) -> GrassmannScalar {
        self.scale(rhs)
    }
}

impl Mul<f64> for &GrassmannScalar {
    type Output = GrassmannScalar;
    fn mul(self, rhs: f64) -> GrassmannScalar {
        self.scale(Complex64::new(rhs, 0.0))
    }
}

/// JSON shape: `{"n": 2, "terms": [{"mask": [1, 2], "re": 0.0, "im": 1.0}]}`
/// with one-based generator indices.
#[derive(Serialize, Deserialize)]
struct ScalarRepr {
    n: usize,
    terms: Vec<TermRepr>,
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    mask: Vec<usize>,
    re: f64,
    #[serde(default)]
    im: f64,
}

impl TryFrom<ScalarRepr> for GrassmannScalar {
    type Error = Error;

    fn try_from(r: ScalarRepr) -> Result<Self> {
        if r.n > MAX_GENERATORS {
            return Err(Error::Invalid(format!("n = {} exceeds {MAX_GENERATORS}", r.n)));
        }
        let mut v = Vec::with_capacity(r.terms.len());
        for t in r.terms {
            let mut mask = 0u32;
            let mut prev = 0usize;
            for &i in &t.mask {
                if i == 0 || i > r.n {
                    return Err(Error::Invalid(format!("generator index {i} outside 1..={}", r.n)));
                }
                if i <= prev {
                    return Err(Error::Invalid(format!("mask {:?} is not strictly ascending", t.mask)));
                }
                prev = i;
                mask |= 1 << (i - 1);
            }
            if !t.re.is_finite() || !t.im.is_finite() {
                return Err(Error::Invalid("non-finite coefficient".into()));
            }
            v.push((mask, Complex64::new(t.re, t.im)));
        }
        Ok(GrassmannScalar::from_terms(r.n, v))
    }
}

impl From<GrassmannScalar> for ScalarRepr {
    fn from(a: GrassmannScalar) -> Self {
        let terms = a
            .terms
            .iter()
            .map(|&(m, c)| TermRepr {
                mask: (0..a.n).filter(|i| m & (1 << i) != 0).map(|i| i + 1).collect(),
                re: c.re,
                im: c.im,
            })
            .collect();
        ScalarRepr { n: a.n, terms }
    }
}
