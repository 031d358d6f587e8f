//! Intersection-form arithmetic on the second homology of `CP^2 # k(-CP^2)`
//! and of blown-up ruled surfaces over a genus `h` curve.
//!
//! Rational classes are stored as `(a; b_1, .., b_k)` meaning `aH - sum b_i E_i`.
//! The form `<1> + k<-1>` gives `A.B = a a' - sum b_i b'_i`, which is the same
//! expression as for signed coefficients because every `E_i` term flips sign in
//! both factors. Ruled classes are stored with signed coefficients
//! `sS + fF + sum c_i E_i` and pair through the hyperbolic plane on `(S, F)`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Signed;
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

/// Coefficient ring used by classes: integers for homology, rationals for cohomology.
pub trait Coeff:
    Clone + fmt::Debug + PartialEq + PartialOrd + num_traits::Num + Signed + JsonNumber
{
}

impl<T> Coeff for T where
    T: Clone + fmt::Debug + PartialEq + PartialOrd + num_traits::Num + Signed + JsonNumber
{
}

/// Lossless JSON encoding of an exact number.
pub trait JsonNumber {
    fn to_json(&self) -> serde_json::Value;
}

impl JsonNumber for BigInt {
    fn to_json(&self) -> serde_json::Value {
        match i64::try_from(self) {
            Ok(v) => serde_json::Value::from(v),
            Err(_) => serde_json::Value::String(self.to_string()),
        }
    }
}

impl JsonNumber for BigRational {
    fn to_json(&self) -> serde_json::Value {
        if self.is_integer() {
            self.numer().to_json()
        } else {
            serde_json::Value::String(format!("{}/{}", self.numer(), self.denom()))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("class has {found} exceptional coefficients but the manifold has k = {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("class belongs to a {found} manifold, expected {expected}")]
    KindMismatch {
        expected: &'static str,
        found: &'static str,
    },
    #[error("ruled manifolds need base genus h >= 1, got {0}")]
    BadGenus(u32),
    #[error("cannot embed a class with k = {from} into k = {to}")]
    Shrink { from: usize, to: usize },
}

/// Ambient manifold: `CP^2 # k(-CP^2)` or an irrational ruled surface over a
/// genus `h >= 1` base blown up `k` times.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Manifold {
    Rational { k: usize },
    Ruled { h: u32, k: usize },
}

impl Manifold {
    pub fn rational(k: usize) -> Self {
        Manifold::Rational { k }
    }

    pub fn ruled(h: u32, k: usize) -> Result<Self, LatticeError> {
        if h == 0 {
            return Err(LatticeError::BadGenus(h));
        }
        Ok(Manifold::Ruled { h, k })
    }

    pub fn k(&self) -> usize {
        match *self {
            Manifold::Rational { k } | Manifold::Ruled { k, .. } => k,
        }
    }

    /// Rank of the negative definite part of the form.
    pub fn b_minus(&self) -> usize {
        match *self {
            Manifold::Rational { k } => k,
            Manifold::Ruled { k, .. } => k + 1,
        }
    }

    pub fn rank(&self) -> usize {
        self.b_minus() + 1
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Manifold::Rational { .. } => "rational",
            Manifold::Ruled { .. } => "ruled",
        }
    }
}

/// `aH - sum b_i E_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalClass<T = BigInt> {
    pub a: T,
    pub b: Vec<T>,
}

/// `sS + fF + sum c_i E_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RuledClass<T = BigInt> {
    pub s: T,
    pub f: T,
    pub c: Vec<T>,
}

/// A class on either family of manifolds.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Class<T = BigInt> {
    Rational(RationalClass<T>),
    Ruled(RuledClass<T>),
}

/// Cohomology classes are identified with rational homology classes.
pub type CohomologyClass = Class<BigRational>;

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

impl<T: Coeff> RationalClass<T> {
    pub fn new(a: T, b: Vec<T>) -> Self {
        RationalClass { a, b }
    }

    pub fn zero(k: usize) -> Self {
        RationalClass {
            a: T::zero(),
            b: vec![T::zero(); k],
        }
    }

    /// The line class `H`.
    pub fn line(k: usize) -> Self {
        let mut z = Self::zero(k);
        z.a = T::one();
        z
    }

    /// The exceptional class `E_i`, 1-based.
    pub fn exceptional(k: usize, i: usize) -> Self {
        assert!(i >= 1 && i <= k, "E_{i} out of range for k = {k}");
        let mut z = Self::zero(k);
        z.b[i - 1] = -T::one();
        z
    }

    pub fn k(&self) -> usize {
        self.b.len()
    }

    /// Intersection pairing.
    ///
    /// # Panics
    /// If the two classes have different `k`; use [`pair`] for a checked version.
    pub fn dot(&self, other: &Self) -> T {
        assert_eq!(self.k(), other.k(), "pairing classes of different k");
        let mut acc = self.a.clone() * other.a.clone();
        for (x, y) in self.b.iter().zip(&other.b) {
            acc = acc - x.clone() * y.clone();
        }
        acc
    }

    pub fn square(&self) -> T {
        self.dot(self)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.k(), other.k());
        RationalClass {
            a: self.a.clone() + other.a.clone(),
            b: self
                .b
                .iter()
                .zip(&other.b)
                .map(|(x, y)| x.clone() + y.clone())
                .collect(),
        }
    }

    pub fn scaled(&self, t: &T) -> Self {
        RationalClass {
            a: self.a.clone() * t.clone(),
            b: self.b.iter().map(|x| x.clone() * t.clone()).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scaled(&-T::one())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.iter().all(|x| x.is_zero())
    }

    /// Widen to `k2 >= k` by appending zero coefficients.
    pub fn embed(&self, k2: usize) -> Result<Self, LatticeError> {
        if k2 < self.k() {
            return Err(LatticeError::Shrink {
                from: self.k(),
                to: k2,
            });
        }
        let mut b = self.b.clone();
        b.resize(k2, T::zero());
        Ok(RationalClass {
            a: self.a.clone(),
            b,
        })
    }

    /// `K_st = -3H + sum E_i`, stored as `(-3; -1, .., -1)`.
    pub fn canonical_std(k: usize) -> Self {
        let three = T::one() + T::one() + T::one();
        RationalClass {
            a: -three,
            b: vec![-T::one(); k],
        }
    }
}

impl RationalClass<BigInt> {
    pub fn from_i64(a: i64, b: &[i64]) -> Self {
        RationalClass {
            a: BigInt::from(a),
            b: ints(b),
        }
    }

    pub fn to_rational(&self) -> RationalClass<BigRational> {
        RationalClass {
            a: BigRational::from_integer(self.a.clone()),
            b: self
                .b
                .iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect(),
        }
    }

    pub fn is_characteristic(&self) -> bool {
        self.a.is_odd() && self.b.iter().all(|x| x.is_odd())
    }

    /// Coefficients as `i64`, if they all fit.
    pub fn to_i64(&self) -> Option<(i64, Vec<i64>)> {
        let a = i64::try_from(&self.a).ok()?;
        let b = self
            .b
            .iter()
            .map(|x| i64::try_from(x).ok())
            .collect::<Option<Vec<_>>>()?;
        Some((a, b))
    }
}

impl<T: Coeff> RuledClass<T> {
    pub fn new(s: T, f: T, c: Vec<T>) -> Self {
        RuledClass { s, f, c }
    }

    pub fn zero(k: usize) -> Self {
        RuledClass {
            s: T::zero(),
            f: T::zero(),
            c: vec![T::zero(); k],
        }
    }

    pub fn section(k: usize) -> Self {
        let mut z = Self::zero(k);
        z.s = T::one();
        z
    }

    pub fn fiber(k: usize) -> Self {
        let mut z = Self::zero(k);
        z.f = T::one();
        z
    }

    /// `E_i`, 1-based.
    pub fn exceptional(k: usize, i: usize) -> Self {
        assert!(i >= 1 && i <= k, "E_{i} out of range for k = {k}");
        let mut z = Self::zero(k);
        z.c[i - 1] = T::one();
        z
    }

    pub fn k(&self) -> usize {
        self.c.len()
    }

    /// # Panics
    /// If the two classes have different `k`.
    pub fn dot(&self, other: &Self) -> T {
        assert_eq!(self.k(), other.k(), "pairing classes of different k");
        let mut acc = self.s.clone() * other.f.clone() + other.s.clone() * self.f.clone();
        for (x, y) in self.c.iter().zip(&other.c) {
            acc = acc - x.clone() * y.clone();
        }
        acc
    }

    pub fn square(&self) -> T {
        self.dot(self)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.k(), other.k());
        RuledClass {
            s: self.s.clone() + other.s.clone(),
            f: self.f.clone() + other.f.clone(),
            c: self
                .c
                .iter()
                .zip(&other.c)
                .map(|(x, y)| x.clone() + y.clone())
                .collect(),
        }
    }

    pub fn scaled(&self, t: &T) -> Self {
        RuledClass {
            s: self.s.clone() * t.clone(),
            f: self.f.clone() * t.clone(),
            c: self.c.iter().map(|x| x.clone() * t.clone()).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scaled(&-T::one())
    }

    pub fn is_zero(&self) -> bool {
        self.s.is_zero() && self.f.is_zero() && self.c.iter().all(|x| x.is_zero())
    }

    pub fn embed(&self, k2: usize) -> Result<Self, LatticeError> {
        if k2 < self.k() {
            return Err(LatticeError::Shrink {
                from: self.k(),
                to: k2,
            });
        }
        let mut c = self.c.clone();
        c.resize(k2, T::zero());
        Ok(RuledClass {
            s: self.s.clone(),
            f: self.f.clone(),
            c,
        })
    }

    /// `K_st = -2S + (2h-2)F + sum E_i`.
    pub fn canonical_std(h: u32, k: usize) -> Self {
        let two = T::one() + T::one();
        let mut f = T::zero();
        for _ in 0..h {
            f = f + two.clone();
        }
        RuledClass {
            s: -two.clone(),
            f: f - two,
            c: vec![T::one(); k],
        }
    }
}

impl RuledClass<BigInt> {
    pub fn from_i64(s: i64, f: i64, c: &[i64]) -> Self {
        RuledClass {
            s: BigInt::from(s),
            f: BigInt::from(f),
            c: ints(c),
        }
    }

    pub fn to_rational(&self) -> RuledClass<BigRational> {
        RuledClass {
            s: BigRational::from_integer(self.s.clone()),
            f: BigRational::from_integer(self.f.clone()),
            c: self
                .c
                .iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect(),
        }
    }

    pub fn is_characteristic(&self) -> bool {
        self.s.is_even() && self.f.is_even() && self.c.iter().all(|x| x.is_odd())
    }
}

impl<T: Coeff> Class<T> {
    pub fn k(&self) -> usize {
        match self {
            Class::Rational(r) => r.k(),
            Class::Ruled(r) => r.k(),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Class::Rational(_) => "rational",
            Class::Ruled(_) => "ruled",
        }
    }

    /// Checks that this class lives on `m`.
    pub fn check(&self, m: &Manifold) -> Result<(), LatticeError> {
        if self.kind_name() != m.kind_name() {
            return Err(LatticeError::KindMismatch {
                expected: m.kind_name(),
                found: self.kind_name(),
            });
        }
        if self.k() != m.k() {
            return Err(LatticeError::DimensionMismatch {
                expected: m.k(),
                found: self.k(),
            });
        }
        Ok(())
    }

    pub fn zero(m: &Manifold) -> Self {
        match *m {
            Manifold::Rational { k } => Class::Rational(RationalClass::zero(k)),
            Manifold::Ruled { k, .. } => Class::Ruled(RuledClass::zero(k)),
        }
    }

    pub fn canonical_std(m: &Manifold) -> Self {
        match *m {
            Manifold::Rational { k } => Class::Rational(RationalClass::canonical_std(k)),
            Manifold::Ruled { h, k } => Class::Ruled(RuledClass::canonical_std(h, k)),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        match (self, other) {
            (Class::Rational(x), Class::Rational(y)) => Class::Rational(x.add(y)),
            (Class::Ruled(x), Class::Ruled(y)) => Class::Ruled(x.add(y)),
            _ => panic!("adding classes from different manifold families"),
        }
    }

    pub fn scaled(&self, t: &T) -> Self {
        match self {
            Class::Rational(x) => Class::Rational(x.scaled(t)),
            Class::Ruled(x) => Class::Ruled(x.scaled(t)),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Class::Rational(x) => x.is_zero(),
            Class::Ruled(x) => x.is_zero(),
        }
    }

    /// Pairing without a manifold check.
    ///
    /// # Panics
    /// On mismatched families or `k`.
    pub fn dot(&self, other: &Self) -> T {
        match (self, other) {
            (Class::Rational(x), Class::Rational(y)) => x.dot(y),
            (Class::Ruled(x), Class::Ruled(y)) => x.dot(y),
            _ => panic!("pairing classes from different manifold families"),
        }
    }

    pub fn embed(&self, k2: usize) -> Result<Self, LatticeError> {
        Ok(match self {
            Class::Rational(x) => Class::Rational(x.embed(k2)?),
            Class::Ruled(x) => Class::Ruled(x.embed(k2)?),
        })
    }
}

impl Class<BigInt> {
    pub fn to_rational(&self) -> CohomologyClass {
        match self {
            Class::Rational(x) => Class::Rational(x.to_rational()),
            Class::Ruled(x) => Class::Ruled(x.to_rational()),
        }
    }

    pub fn as_rational(&self) -> Option<&RationalClass> {
        match self {
            Class::Rational(x) => Some(x),
            Class::Ruled(_) => None,
        }
    }

    pub fn as_ruled(&self) -> Option<&RuledClass> {
        match self {
            Class::Ruled(x) => Some(x),
            Class::Rational(_) => None,
        }
    }
}

/// Checked intersection pairing of two classes on `m`.
pub fn pair<T: Coeff>(a: &Class<T>, b: &Class<T>, m: &Manifold) -> Result<T, LatticeError> {
    a.check(m)?;
    b.check(m)?;
    Ok(a.dot(b))
}

/// Pairing of a cohomology class with an integral class.
pub fn pair_mixed(
    omega: &CohomologyClass,
    a: &Class,
    m: &Manifold,
) -> Result<BigRational, LatticeError> {
    pair(omega, &a.to_rational(), m)
}

pub fn square<T: Coeff>(a: &Class<T>, m: &Manifold) -> Result<T, LatticeError> {
    pair(a, a, m)
}

pub fn canonical_std(m: &Manifold) -> Class {
    Class::canonical_std(m)
}

pub fn is_characteristic(a: &Class, m: &Manifold) -> Result<bool, LatticeError> {
    a.check(m)?;
    Ok(match a {
        Class::Rational(x) => x.is_characteristic(),
        Class::Ruled(x) => x.is_characteristic(),
    })
}

/// Standard basis of the lattice of `m`, in storage order.
pub fn basis(m: &Manifold) -> Vec<Class> {
    match *m {
        Manifold::Rational { k } => {
            let mut v = vec![Class::Rational(RationalClass::line(k))];
            v.extend((1..=k).map(|i| Class::Rational(RationalClass::exceptional(k, i))));
            v
        }
        Manifold::Ruled { k, .. } => {
            let mut v = vec![
                Class::Ruled(RuledClass::section(k)),
                Class::Ruled(RuledClass::fiber(k)),
            ];
            v.extend((1..=k).map(|i| Class::Ruled(RuledClass::exceptional(k, i))));
            v
        }
    }
}

pub fn embed(a: &Class, k2: usize) -> Result<Class, LatticeError> {
    a.embed(k2)
}

fn write_list<T: fmt::Display>(f: &mut fmt::Formatter<'_>, v: &[T]) -> fmt::Result {
    for (i, x) in v.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{x}")?;
    }
    Ok(())
}

impl<T: fmt::Display> fmt::Display for RationalClass<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}", self.a)?;
        if !self.b.is_empty() {
            write!(f, "; ")?;
            write_list(f, &self.b)?;
        }
        write!(f, "]")
    }
}

impl<T: fmt::Display> fmt::Display for RuledClass<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{s:{}, f:{}, c:[", self.s, self.f)?;
        for (i, x) in self.c.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "]}}")
    }
}

impl<T: fmt::Display> fmt::Display for Class<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Class::Rational(x) => x.fmt(f),
            Class::Ruled(x) => x.fmt(f),
        }
    }
}

fn json_list<T: JsonNumber>(v: &[T]) -> serde_json::Value {
    serde_json::Value::Array(v.iter().map(JsonNumber::to_json).collect())
}

impl<T: JsonNumber> Serialize for RationalClass<T> {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        serde_json::json!({ "a": self.a.to_json(), "b": json_list(&self.b) }).serialize(ser)
    }
}

impl<T: JsonNumber> Serialize for RuledClass<T> {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        serde_json::json!({
            "s": self.s.to_json(),
            "f": self.f.to_json(),
            "c": json_list(&self.c),
        })
        .serialize(ser)
    }
}

impl<T: JsonNumber> Serialize for Class<T> {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        match self {
            Class::Rational(x) => x.serialize(ser),
            Class::Ruled(x) => x.serialize(ser),
        }
    }
}

/// Serializes a `BigInt` through [`JsonNumber`].
pub fn ser_bigint<S: Serializer>(v: &BigInt, ser: S) -> Result<S::Ok, S::Error> {
    v.to_json().serialize(ser)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn r(a: i64, b: &[i64]) -> RationalClass {
        RationalClass::from_i64(a, b)
    }

    #[test]
    fn basis_pairings() {
        let h = RationalClass::<BigInt>::line(3);
        let e1 = RationalClass::<BigInt>::exceptional(3, 1);
        assert_eq!(h.dot(&h), big(1));
        assert_eq!(e1.dot(&e1), big(-1));
        assert_eq!(h.dot(&e1), big(0));
    }

    #[test]
    fn square_examples() {
        // -H + 2E_1 - E_2
        assert_eq!(r(-1, &[-2, 1]).square(), big(-4));
        assert_eq!(r(1, &[1, 1, 1, 1, 1]).square(), big(-4));
        assert_eq!(RationalClass::<BigInt>::zero(4).square(), big(0));
        for l in 1..6usize {
            let mut c = vec![-1i64; l];
            c.resize(l + 2, 0);
            assert_eq!(RuledClass::from_i64(0, 1, &c).square(), big(-(l as i64)));
        }
    }

    #[test]
    fn canonical_classes() {
        assert_eq!(RationalClass::<BigInt>::canonical_std(2), r(-3, &[-1, -1]));
        assert_eq!(
            RuledClass::<BigInt>::canonical_std(1, 0),
            RuledClass::from_i64(-2, 0, &[])
        );
        assert_eq!(
            RuledClass::<BigInt>::canonical_std(3, 2),
            RuledClass::from_i64(-2, 4, &[1, 1])
        );
        assert_eq!(RationalClass::<BigInt>::canonical_std(9).square(), big(0));
    }

    #[test]
    fn characteristic_examples() {
        assert!(r(1, &[1, 1, 1, 1, 1]).is_characteristic());
        assert!(!r(0, &[-1, 1, 0]).is_characteristic());
        assert!(RuledClass::from_i64(0, 0, &[1, -1, -1, -1]).is_characteristic());
        assert!(!RuledClass::from_i64(0, 1, &[-1, -1]).is_characteristic());
    }

    #[test]
    fn checked_pair_rejects_mismatch() {
        let m = Manifold::rational(2);
        let a = Class::Rational(r(1, &[1, 1, 0]));
        assert_eq!(
            pair(&a, &a, &m),
            Err(LatticeError::DimensionMismatch {
                expected: 2,
                found: 3
            })
        );
        let m = Manifold::ruled(1, 3).unwrap();
        assert!(matches!(
            pair(&a, &a, &m),
            Err(LatticeError::KindMismatch { .. })
        ));
        assert!(Manifold::ruled(0, 1).is_err());
    }

    #[test]
    fn embed_is_explicit() {
        let a = r(1, &[1, 1]);
        let w = a.embed(4).unwrap();
        assert_ne!(a, w);
        assert_eq!(w, r(1, &[1, 1, 0, 0]));
        assert_eq!(w.square(), a.square());
        assert!(a.embed(1).is_err());
    }

    #[test]
    fn display_and_json() {
        let a = r(3, &[2, 2]);
        assert_eq!(a.to_string(), "[3; 2, 2]");
        assert_eq!(serde_json::to_string(&a).unwrap(), r#"{"a":3,"b":[2,2]}"#);
        let q = RuledClass::from_i64(0, -2, &[1, 1, 1, -1]);
        assert_eq!(q.to_string(), "{s:0, f:-2, c:[1,1,1,-1]}");
        let w = RationalClass::new(
            BigRational::new(big(1), big(2)),
            vec![BigRational::from_integer(big(3))],
        );
        assert_eq!(serde_json::to_string(&w).unwrap(), r#"{"a":"1/2","b":[3]}"#);
    }
}
