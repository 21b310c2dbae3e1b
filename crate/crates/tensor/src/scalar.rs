//! Coefficient fields for the component oracle.

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use wforms_core::Rational;

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + AddAssign
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn inv(&self) -> Self;
    fn is_zero(&self) -> bool;

    fn from_i64(v: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(v)))
    }
}

/// Integers modulo the Mersenne prime `2^61 − 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Fp(pub u64);

pub const P61: u64 = (1 << 61) - 1;

impl Fp {
    fn reduce(x: u128) -> u64 {
        let lo = (x as u64) & P61;
        let hi = (x >> 61) as u64;
        let mut s = lo + (hi & P61) + (hi >> 61);
        while s >= P61 {
            s -= P61;
        }
        s
    }

    pub fn pow(self, mut e: u64) -> Fp {
        let mut base = self;
        let mut acc = Fp(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    fn from_bigint(b: &BigInt) -> Fp {
        let m = BigInt::from(P61);
        let mut r = b % &m;
        if r.is_negative() {
            r += &m;
        }
        Fp(r.to_u64().unwrap())
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, o: Fp) -> Fp {
        let s = self.0 + o.0;
        Fp(if s >= P61 { s - P61 } else { s })
    }
}

impl AddAssign for Fp {
    fn add_assign(&mut self, o: Fp) {
        *self = *self + o;
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, o: Fp) -> Fp {
        Fp(if self.0 >= o.0 { self.0 - o.0 } else { self.0 + P61 - o.0 })
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, o: Fp) -> Fp {
        Fp(Fp::reduce(self.0 as u128 * o.0 as u128))
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp(if self.0 == 0 { 0 } else { P61 - self.0 })
    }
}

impl Scalar for Fp {
    fn zero() -> Self {
        Fp(0)
    }
    fn one() -> Self {
        Fp(1)
    }
    fn from_rational(r: &Rational) -> Self {
        Fp::from_bigint(r.numer()) * Fp::from_bigint(r.denom()).inv()
    }
    fn from_i64(v: i64) -> Self {
        Fp::from_bigint(&BigInt::from(v))
    }
    fn inv(&self) -> Self {
        assert!(self.0 != 0, "inverse of zero in F_p");
        self.pow(P61 - 2)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl Scalar for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn inv(&self) -> Self {
        self.recip()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
}

/// First-order infinitesimals `re + eps·ε`, `ε² = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Dual<F> {
    pub re: F,
    pub eps: F,
}

impl<F: Scalar> Dual<F> {
    pub fn new(re: F, eps: F) -> Self {
        Dual { re, eps }
    }
}

impl<F: Scalar> Add for Dual<F> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Dual::new(self.re + o.re, self.eps + o.eps)
    }
}

impl<F: Scalar> AddAssign for Dual<F> {
    fn add_assign(&mut self, o: Self) {
        self.re += o.re;
        self.eps += o.eps;
    }
}

impl<F: Scalar> Sub for Dual<F> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Dual::new(self.re - o.re, self.eps - o.eps)
    }
}

impl<F: Scalar> Mul for Dual<F> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let eps = self.re.clone() * o.eps + self.eps * o.re.clone();
        Dual::new(self.re * o.re, eps)
    }
}

impl<F: Scalar> Neg for Dual<F> {
    type Output = Self;
    fn neg(self) -> Self {
        Dual::new(-self.re, -self.eps)
    }
}

impl<F: Scalar> Scalar for Dual<F> {
    fn zero() -> Self {
        Dual::new(F::zero(), F::zero())
    }
    fn one() -> Self {
        Dual::new(F::one(), F::zero())
    }
    fn from_rational(r: &Rational) -> Self {
        Dual::new(F::from_rational(r), F::zero())
    }
    fn from_i64(v: i64) -> Self {
        Dual::new(F::from_i64(v), F::zero())
    }
    fn inv(&self) -> Self {
        let r = self.re.inv();
        let eps = -(self.eps.clone() * r.clone() * r.clone());
        Dual::new(r, eps)
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.eps.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use wforms_core::exact::rat;

    #[test]
    fn field_inverse() {
        let a = Fp::from_rational(&rat(-7, 3));
        assert_eq!(a * Fp::from_i64(3), Fp::from_i64(-7));
        assert_eq!(a * a.inv(), Fp(1));
    }

    #[test]
    fn dual_inverse() {
        let d = Dual::new(Fp::from_i64(2), Fp::from_i64(5));
        assert_eq!(d.clone() * d.inv(), Dual::<Fp>::one());
    }
}
