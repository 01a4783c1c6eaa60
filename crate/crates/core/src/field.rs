//! Small finite fields `F_p` and `F_{p^2}` for `p ∈ {2, 3, 5}`.
//!
//! An element of `F_{p^2} = F_p[x]/(m(x))` is stored as `c0 + c1·p` where
//! `c0 + c1·x` is its coordinate vector. The moduli are `x²+x+1` over `F_2`,
//! `x²+1` over `F_3` and `x²+2` over `F_5`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Field {
    F2,
    F3,
    F5,
    F4,
    F9,
    F25,
}

impl Field {
    pub fn new(p: u8, e: u8) -> Result<Field> {
        match (p, e) {
            (2, 1) => Ok(Field::F2),
            (3, 1) => Ok(Field::F3),
            (5, 1) => Ok(Field::F5),
            (2, 2) => Ok(Field::F4),
            (3, 2) => Ok(Field::F9),
            (5, 2) => Ok(Field::F25),
            _ => Err(Error::UnsupportedField { p, e }),
        }
    }

    /// Field with `q` elements.
    pub fn with_order(q: u32) -> Result<Field> {
        match q {
            2 => Ok(Field::F2),
            3 => Ok(Field::F3),
            5 => Ok(Field::F5),
            4 => Ok(Field::F4),
            9 => Ok(Field::F9),
            25 => Ok(Field::F25),
            _ => Err(Error::UnsupportedField { p: 0, e: 0 }),
        }
    }

    pub fn p(self) -> u8 {
        match self {
            Field::F2 | Field::F4 => 2,
            Field::F3 | Field::F9 => 3,
            Field::F5 | Field::F25 => 5,
        }
    }

    pub fn degree(self) -> u8 {
        match self {
            Field::F2 | Field::F3 | Field::F5 => 1,
            _ => 2,
        }
    }

    pub fn order(self) -> u32 {
        (self.p() as u32).pow(self.degree() as u32)
    }

    /// The quadratic extension of a prime field.
    pub fn quadratic_extension(self) -> Result<Field> {
        match self {
            Field::F2 => Ok(Field::F4),
            Field::F3 => Ok(Field::F9),
            Field::F5 => Ok(Field::F25),
            _ => Err(Error::UnsupportedField { p: self.p(), e: 4 }),
        }
    }

    pub fn prime_field(self) -> Field {
        match self.p() {
            2 => Field::F2,
            3 => Field::F3,
            _ => Field::F5,
        }
    }

    /// `x² = r0 + r1·x` in the chosen basis.
    fn x_squared(self) -> (u8, u8) {
        match self {
            Field::F4 => (1, 1),
            Field::F9 => (2, 0),
            Field::F25 => (3, 0),
            _ => (0, 0),
        }
    }

    pub fn elements(self) -> Vec<Fq> {
        (0..self.order() as u8).map(|v| Fq { field: self, v }).collect()
    }

    pub fn nonzero(self) -> Vec<Fq> {
        self.elements().into_iter().filter(|x| !x.is_zero()).collect()
    }

    pub fn zero(self) -> Fq {
        Fq { field: self, v: 0 }
    }

    pub fn one(self) -> Fq {
        Fq { field: self, v: 1 }
    }

    pub fn from_int(self, k: i64) -> Fq {
        let p = self.p() as i64;
        Fq { field: self, v: k.rem_euclid(p) as u8 }
    }

    /// The class of `x` in `F_{p^2}`.
    pub fn generator(self) -> Fq {
        if self.degree() == 1 {
            return self.one();
        }
        Fq { field: self, v: self.p() }
    }

    pub fn from_coeffs(self, c: &[i64]) -> Result<Fq> {
        if c.is_empty() || c.len() > self.degree() as usize {
            return Err(Error::Parse(format!("expected at most {} coefficients", self.degree())));
        }
        let p = self.p() as i64;
        let c0 = c[0].rem_euclid(p);
        let c1 = c.get(1).copied().unwrap_or(0).rem_euclid(p);
        Ok(Fq { field: self, v: (c0 + c1 * p) as u8 })
    }

    pub fn random<R: Rng + ?Sized>(self, rng: &mut R) -> Fq {
        Fq { field: self, v: rng.gen_range(0..self.order()) as u8 }
    }

    pub fn random_nonzero<R: Rng + ?Sized>(self, rng: &mut R) -> Fq {
        Fq { field: self, v: rng.gen_range(1..self.order()) as u8 }
    }

    /// A fixed square root of `-1` when one exists in this field.
    pub fn sqrt_minus_one(self) -> Option<Fq> {
        let m1 = -self.one();
        self.elements().into_iter().find(|x| *x * *x == m1)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F{}", self.order())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fq {
    field: Field,
    v: u8,
}

impl Fq {
    pub fn field(self) -> Field {
        self.field
    }

    pub fn index(self) -> u8 {
        self.v
    }

    pub fn coeffs(self) -> (u8, u8) {
        let p = self.field.p();
        (self.v % p, self.v / p)
    }

    fn from_pair(field: Field, c0: u8, c1: u8) -> Fq {
        let p = field.p();
        Fq { field, v: (c0 % p) + (c1 % p) * p }
    }

    pub fn is_zero(self) -> bool {
        self.v == 0
    }

    pub fn is_one(self) -> bool {
        self.v == 1
    }

    pub fn in_prime_field(self) -> bool {
        self.coeffs().1 == 0
    }

    pub fn pow(self, mut k: u64) -> Fq {
        let mut base = self;
        let mut acc = self.field.one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            k >>= 1;
        }
        acc
    }

    pub fn inv(self) -> Result<Fq> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(self.field.order() as u64 - 2))
    }

    pub fn div(self, other: Fq) -> Result<Fq> {
        Ok(self * other.inv()?)
    }

    /// `x ↦ x^p`.
    pub fn frobenius(self) -> Fq {
        self.pow(self.field.p() as u64)
    }

    pub fn checked_add(self, other: Fq) -> Result<Fq> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        Ok(self + other)
    }

    pub fn checked_mul(self, other: Fq) -> Result<Fq> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        Ok(self * other)
    }

    pub fn to_coeff_vec(self) -> Vec<i64> {
        let (c0, c1) = self.coeffs();
        if self.field.degree() == 1 {
            vec![c0 as i64]
        } else {
            vec![c0 as i64, c1 as i64]
        }
    }
}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (c0, c1) = self.coeffs();
        match (c0, c1) {
            (_, 0) => write!(f, "{c0}"),
            (0, 1) => write!(f, "x"),
            (0, _) => write!(f, "{c1}x"),
            (_, 1) => write!(f, "x+{c0}"),
            _ => write!(f, "{c1}x+{c0}"),
        }
    }
}

impl Add for Fq {
    type Output = Fq;
    fn add(self, o: Fq) -> Fq {
        assert_eq!(self.field, o.field, "field mismatch");
        let (a0, a1) = self.coeffs();
        let (b0, b1) = o.coeffs();
        Fq::from_pair(self.field, a0 + b0, a1 + b1)
    }
}

impl Neg for Fq {
    type Output = Fq;
    fn neg(self) -> Fq {
        let p = self.field.p();
        let (a0, a1) = self.coeffs();
        Fq::from_pair(self.field, (p - a0) % p, (p - a1) % p)
    }
}

impl Sub for Fq {
    type Output = Fq;
    fn sub(self, o: Fq) -> Fq {
        self + (-o)
    }
}

impl Mul for Fq {
    type Output = Fq;
    fn mul(self, o: Fq) -> Fq {
        assert_eq!(self.field, o.field, "field mismatch");
        let p = self.field.p() as u32;
        let (a0, a1) = self.coeffs();
        let (b0, b1) = o.coeffs();
        let (a0, a1, b0, b1) = (a0 as u32, a1 as u32, b0 as u32, b1 as u32);
        let (r0, r1) = self.field.x_squared();
        let hi = a1 * b1;
        let c0 = a0 * b0 + hi * r0 as u32;
        let c1 = a0 * b1 + a1 * b0 + hi * r1 as u32;
        Fq::from_pair(self.field, (c0 % p) as u8, (c1 % p) as u8)
    }
}

impl Serialize for Fq {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_coeff_vec().serialize(s)
    }
}

impl std::iter::Sum for Fq {
    fn sum<I: Iterator<Item = Fq>>(mut iter: I) -> Fq {
        let first = iter.next().expect("sum of an empty iterator has no field");
        iter.fold(first, |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ALL: [Field; 6] = [Field::F2, Field::F3, Field::F5, Field::F4, Field::F9, Field::F25];

    #[test]
    fn field_axioms_exhaustive() {
        for f in ALL {
            let els = f.elements();
            assert_eq!(els.len() as u32, f.order());
            for &a in &els {
                assert_eq!(a + f.zero(), a);
                assert_eq!(a * f.one(), a);
                assert_eq!(a + (-a), f.zero());
                if !a.is_zero() {
                    assert_eq!(a * a.inv().unwrap(), f.one());
                }
                for &b in &els {
                    assert_eq!(a + b, b + a);
                    assert_eq!(a * b, b * a);
                    for &c in &els {
                        assert_eq!((a * b) * c, a * (b * c));
                        assert_eq!(a * (b + c), a * b + a * c);
                    }
                }
            }
        }
    }

    #[test]
    fn no_zero_divisors() {
        for f in ALL {
            for a in f.nonzero() {
                for b in f.nonzero() {
                    assert!(!(a * b).is_zero(), "{f}: {a}*{b}");
                }
            }
        }
    }

    #[test]
    fn frobenius_fixes_prime_field() {
        for f in ALL {
            let fixed: Vec<Fq> = f.elements().into_iter().filter(|x| x.frobenius() == *x).collect();
            assert_eq!(fixed.len(), f.p() as usize);
            assert!(fixed.iter().all(|x| x.in_prime_field()));
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!((a * b).frobenius(), a.frobenius() * b.frobenius());
                    assert_eq!((a + b).frobenius(), a.frobenius() + b.frobenius());
                }
            }
        }
    }

    #[test]
    fn moduli() {
        let x = Field::F4.generator();
        assert_eq!(x * x + x + Field::F4.one(), Field::F4.zero());
        let x = Field::F9.generator();
        assert_eq!(x * x + Field::F9.one(), Field::F9.zero());
        let x = Field::F25.generator();
        assert_eq!(x * x + Field::F25.from_int(2), Field::F25.zero());
        assert_eq!(Field::F9.sqrt_minus_one(), Some(Field::F9.generator()));
        assert_eq!(Field::F3.sqrt_minus_one(), None);
    }

    #[test]
    fn errors() {
        assert_eq!(Field::new(7, 1), Err(Error::UnsupportedField { p: 7, e: 1 }));
        assert_eq!(Field::F2.zero().inv(), Err(Error::DivisionByZero));
        assert_eq!(Field::F2.one().checked_add(Field::F3.one()), Err(Error::FieldMismatch));
        assert_eq!(Field::F9.from_coeffs(&[1, 2]).unwrap().to_coeff_vec(), vec![1, 2]);
    }
}
