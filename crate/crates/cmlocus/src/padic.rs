//! The unramified quadratic extension Z_{p^2} of Z_p, modulo p^N.
//!
//! Elements are `a + b*w` with `w^2 = n`, `n` the least quadratic
//! nonresidue mod p. The Frobenius `sigma` sends `w` to `-w`.

use crate::error::{Error, Result};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Raw coefficient pair, used by the inner loops.
pub type Raw = [u64; 2];

pub fn is_odd_prime(p: u64) -> bool {
    if p < 3 || p % 2 == 0 {
        return false;
    }
    let mut d = 3;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Ring context: p, the nonresidue n, and the precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Zp2 {
    p: u64,
    n: u64,
    prec: u32,
    modulus: u64,
}

impl Zp2 {
    /// Largest precision whose modulus stays below 2^63.
    pub fn max_precision(p: u64) -> u32 {
        let mut d = 0;
        let mut m: u128 = 1;
        while m * (p as u128) < (1u128 << 63) {
            m *= p as u128;
            d += 1;
        }
        d
    }

    pub fn new(p: u64, prec: u32) -> Result<Self> {
        if !is_odd_prime(p) {
            return Err(Error::BadPrime(p));
        }
        let max = Self::max_precision(p);
        if prec == 0 || prec > max {
            return Err(Error::BadPrecision { p, prec, max });
        }
        let n = (2..p)
            .find(|&a| pow_mod(a, (p - 1) / 2, p) == p - 1)
            .expect("odd prime has a nonresidue");
        Ok(Zp2 { p, n, prec, modulus: p.pow(prec) })
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn nonresidue(&self) -> u64 {
        self.n
    }
    pub fn precision(&self) -> u32 {
        self.prec
    }
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Same p and nonresidue, different precision.
    pub fn with_precision(&self, prec: u32) -> Result<Self> {
        Zp2::new(self.p, prec)
    }

    pub fn pow_p(&self, e: u32) -> u64 {
        if e >= self.prec {
            0
        } else {
            self.p.pow(e)
        }
    }

    #[inline]
    pub fn mulm(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.modulus as u128) as u64
    }
    #[inline]
    pub fn addm(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }
    #[inline]
    pub fn subm(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }

    pub fn from_i64(&self, v: i64) -> Raw {
        [v.rem_euclid(self.modulus as i64) as u64, 0]
    }

    pub fn reduce_i128(&self, v: i128) -> u64 {
        v.rem_euclid(self.modulus as i128) as u64
    }

    #[inline]
    pub fn add(&self, x: Raw, y: Raw) -> Raw {
        [self.addm(x[0], y[0]), self.addm(x[1], y[1])]
    }
    #[inline]
    pub fn sub(&self, x: Raw, y: Raw) -> Raw {
        [self.subm(x[0], y[0]), self.subm(x[1], y[1])]
    }
    #[inline]
    pub fn neg(&self, x: Raw) -> Raw {
        self.sub([0, 0], x)
    }
    #[inline]
    pub fn mul(&self, x: Raw, y: Raw) -> Raw {
        let m = self.modulus as u128;
        let bb = (x[1] as u128 * y[1] as u128) % m;
        let re = (x[0] as u128 * y[0] as u128 + bb * self.n as u128) % m;
        let im = (x[0] as u128 * y[1] as u128 + x[1] as u128 * y[0] as u128) % m;
        [re as u64, im as u64]
    }
    #[inline]
    pub fn sigma(&self, x: Raw) -> Raw {
        [x[0], self.subm(0, x[1])]
    }
    #[inline]
    pub fn is_zero(&self, x: Raw) -> bool {
        x[0] == 0 && x[1] == 0
    }
    pub fn scale(&self, x: Raw, s: u64) -> Raw {
        [self.mulm(x[0], s % self.modulus), self.mulm(x[1], s % self.modulus)]
    }

    /// p-adic valuation, `prec` for zero.
    pub fn val(&self, x: Raw) -> u32 {
        if self.is_zero(x) {
            return self.prec;
        }
        let (mut a, mut b, mut v) = (x[0], x[1], 0);
        while a % self.p == 0 && b % self.p == 0 {
            a /= self.p;
            b /= self.p;
            v += 1;
        }
        v
    }

    pub fn is_unit(&self, x: Raw) -> bool {
        x[0] % self.p != 0 || x[1] % self.p != 0
    }

    /// Reduce modulo p^e (e <= prec).
    pub fn trunc(&self, x: Raw, e: u32) -> Raw {
        if e >= self.prec {
            return x;
        }
        let m = self.p.pow(e);
        [x[0] % m, x[1] % m]
    }

    /// Exact division by p^e.
    pub fn divp(&self, x: Raw, e: u32) -> Result<Raw> {
        if e == 0 {
            return Ok(x);
        }
        let m = self.p.pow(e);
        if x[0] % m != 0 || x[1] % m != 0 {
            return Err(Error::InexactDivision(e));
        }
        Ok([x[0] / m, x[1] / m])
    }

    /// Norm a^2 - n b^2 in Z_p / p^N.
    pub fn norm(&self, x: Raw) -> u64 {
        let a2 = self.mulm(x[0], x[0]);
        let b2 = self.mulm(self.mulm(x[1], x[1]), self.n);
        self.subm(a2, b2)
    }

    pub fn inv(&self, x: Raw) -> Result<Raw> {
        if !self.is_unit(x) {
            return Err(Error::NotAUnit);
        }
        let nm = self.norm(x);
        let ni = inv_mod(nm, self.modulus).ok_or(Error::NotAUnit)?;
        let s = self.sigma(x);
        Ok([self.mulm(s[0], ni), self.mulm(s[1], ni)])
    }

    pub fn one(&self) -> Raw {
        [1 % self.modulus, 0]
    }
    pub fn omega(&self) -> Raw {
        [0, 1]
    }

    pub fn scalar(&self, x: Raw) -> WittScalar {
        WittScalar { ring: *self, v: [x[0] % self.modulus, x[1] % self.modulus] }
    }
    pub fn int(&self, v: i64) -> WittScalar {
        self.scalar(self.from_i64(v))
    }
}

pub fn pow_mod(b: u64, mut e: u64, m: u64) -> u64 {
    let mut r: u128 = 1 % m as u128;
    let mut bb = (b % m) as u128;
    while e > 0 {
        if e & 1 == 1 {
            r = r * bb % m as u128;
        }
        bb = bb * bb % m as u128;
        e >>= 1;
    }
    r as u64
}

/// Inverse modulo m by extended Euclid.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

/// An element of Z_{p^2}/p^N carrying its ring.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct WittScalar {
    ring: Zp2,
    v: Raw,
}

impl WittScalar {
    pub fn ring(&self) -> Zp2 {
        self.ring
    }
    pub fn raw(&self) -> Raw {
        self.v
    }
    pub fn sigma(&self) -> Self {
        self.ring.scalar(self.ring.sigma(self.v))
    }
    pub fn is_unit(&self) -> bool {
        self.ring.is_unit(self.v)
    }
    pub fn is_zero(&self) -> bool {
        self.ring.is_zero(self.v)
    }
    pub fn valuation(&self) -> u32 {
        self.ring.val(self.v)
    }
    pub fn invert(&self) -> Result<Self> {
        Ok(self.ring.scalar(self.ring.inv(self.v)?))
    }
    /// Reduce to a lower precision.
    pub fn reduce_to(&self, prec: u32) -> Result<Self> {
        if prec > self.ring.prec {
            return Err(Error::BadPrecision { p: self.ring.p, prec, max: self.ring.prec });
        }
        let r = self.ring.with_precision(prec)?;
        Ok(r.scalar(self.v))
    }
    pub fn div_p(&self, e: u32) -> Result<Self> {
        Ok(self.ring.scalar(self.ring.divp(self.v, e)?))
    }
    /// Residue mod p as a pair of integers in [0, p).
    pub fn residue(&self) -> [u64; 2] {
        [self.v[0] % self.ring.p, self.v[1] % self.ring.p]
    }
    /// Signed representatives in (-m/2, m/2].
    pub fn signed(&self) -> [i64; 2] {
        let m = self.ring.modulus;
        let s = |x: u64| if x > m / 2 { x as i64 - m as i64 } else { x as i64 };
        [s(self.v[0]), s(self.v[1])]
    }
}

impl fmt::Debug for WittScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for WittScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b] = self.signed();
        match (a, b) {
            (_, 0) => write!(f, "{a}"),
            (0, _) => write!(f, "{b}w"),
            _ => write!(f, "{a}{:+}w", b),
        }
    }
}

impl Add for WittScalar {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        debug_assert_eq!(self.ring, o.ring);
        self.ring.scalar(self.ring.add(self.v, o.v))
    }
}
impl Sub for WittScalar {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        debug_assert_eq!(self.ring, o.ring);
        self.ring.scalar(self.ring.sub(self.v, o.v))
    }
}
impl Mul for WittScalar {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        debug_assert_eq!(self.ring, o.ring);
        self.ring.scalar(self.ring.mul(self.v, o.v))
    }
}
impl Neg for WittScalar {
    type Output = Self;
    fn neg(self) -> Self {
        self.ring.scalar(self.ring.neg(self.v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_two_and_composites() {
        assert!(Zp2::new(2, 4).is_err());
        assert!(Zp2::new(9, 4).is_err());
        assert!(Zp2::new(3, 40).is_err());
        assert_eq!(Zp2::max_precision(3), 39);
        assert_eq!(Zp2::max_precision(5), 27);
        assert_eq!(Zp2::max_precision(7), 22);
    }

    #[test]
    fn omega_squares_to_nonresidue() {
        let r = Zp2::new(5, 6).unwrap();
        let w = r.scalar(r.omega());
        assert_eq!(w * w, r.int(r.nonresidue() as i64));
        assert_eq!(w.sigma(), -w);
        assert_eq!(w.sigma().sigma(), w);
    }

    #[test]
    fn inverse_round_trip() {
        let r = Zp2::new(3, 10).unwrap();
        let x = r.scalar([4, 7]);
        assert_eq!(x * x.invert().unwrap(), r.int(1));
        assert!(r.scalar([3, 6]).invert().is_err());
    }
}
