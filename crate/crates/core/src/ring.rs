//! Coefficient domains.
//!
//! [`Ring`] is the minimal interface the polynomial code needs (exact
//! division is required for fraction-free remainder sequences). [`RealField`]
//! adds exact sign determination, which is what root isolation and curve
//! topology are built on. Rationals implement both; real algebraic extensions
//! live in [`crate::algebraic`].

use std::cmp::Ordering;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Signed;

pub type Q = BigRational;

pub trait Ring: Clone + Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Division that is known to be exact. Panics otherwise.
    fn exact_div(&self, other: &Self) -> Self;

    fn is_one(&self) -> bool {
        self.sub(&Self::one()).is_zero()
    }

    fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    fn from_i64(n: i64) -> Self {
        let mut acc = Self::zero();
        let one = Self::one();
        let mut base = if n < 0 { one.neg() } else { one };
        let mut k = n.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.add(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.add(&base);
            }
        }
        acc
    }
}

/// An ordered field with exact zero test and sign.
pub trait RealField: Ring {
    fn from_rational(q: &Q) -> Self;
    fn inv(&self) -> Self;
    fn sign(&self) -> Ordering;
    /// An enclosure of width at most `2^-bits`.
    fn enclose(&self, bits: u32) -> Interval;
    /// The exact rational value, when the element is known to be rational.
    fn as_rational(&self) -> Option<Q>;

    fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv())
    }

    fn to_f64(&self) -> f64 {
        self.enclose(60).mid_f64()
    }
}

impl Ring for Q {
    fn zero() -> Self {
        num_traits::Zero::zero()
    }
    fn one() -> Self {
        num_traits::One::one()
    }
    fn is_zero(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn exact_div(&self, other: &Self) -> Self {
        self / other
    }
    fn is_one(&self) -> bool {
        num_traits::One::is_one(self)
    }
    fn from_i64(n: i64) -> Self {
        Q::from_integer(BigInt::from(n))
    }
}

impl RealField for Q {
    fn from_rational(q: &Q) -> Self {
        q.clone()
    }
    fn inv(&self) -> Self {
        self.recip()
    }
    fn sign(&self) -> Ordering {
        self.cmp(&Q::zero())
    }
    fn enclose(&self, _bits: u32) -> Interval {
        Interval::point(self.clone())
    }
    fn as_rational(&self) -> Option<Q> {
        Some(self.clone())
    }
    fn to_f64(&self) -> f64 {
        q_to_f64(self)
    }
}

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_to_f64(v: &Q) -> f64 {
    use num_traits::ToPrimitive;
    match (v.numer().to_f64(), v.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() && d != 0.0 => n / d,
        _ => {
            // huge numerator or denominator: scale by a power of two first
            let shift = v.numer().bits() as i64 - v.denom().bits() as i64;
            let scaled = if shift > 0 {
                v / Q::from_integer(<BigInt as num_traits::One>::one() << shift as usize)
            } else {
                v * Q::from_integer(<BigInt as num_traits::One>::one() << (-shift) as usize)
            };
            let n = scaled.numer().to_f64().unwrap_or(0.0);
            let d = scaled.denom().to_f64().unwrap_or(1.0);
            (n / d) * 2f64.powi(shift as i32)
        }
    }
}

/// Smallest dyadic rational approximation of an `f64`, exact.
pub fn f64_to_q(v: f64) -> Q {
    Q::from_float(v).unwrap_or_else(Q::zero)
}

pub fn pow2(e: i64) -> Q {
    if e >= 0 {
        Q::from_integer(<BigInt as num_traits::One>::one() << e as usize)
    } else {
        Q::new(<BigInt as num_traits::One>::one(), <BigInt as num_traits::One>::one() << (-e) as usize)
    }
}

fn floor_dyadic(v: &Q, bits: u32) -> Q {
    let scale = <BigInt as num_traits::One>::one() << bits as usize;
    let n = (v.numer() * &scale).div_floor(v.denom());
    Q::new(n, scale)
}

fn ceil_dyadic(v: &Q, bits: u32) -> Q {
    let scale = <BigInt as num_traits::One>::one() << bits as usize;
    let n = (v.numer() * &scale).div_ceil(v.denom());
    Q::new(n, scale)
}

/// Closed interval with rational endpoints, used for certified sign
/// evaluation of algebraic quantities.
#[derive(Clone, Debug, PartialEq)]
pub struct Interval {
    pub lo: Q,
    pub hi: Q,
}

impl Interval {
    pub fn new(lo: Q, hi: Q) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn point(v: Q) -> Self {
        Interval { lo: v.clone(), hi: v }
    }

    pub fn width(&self) -> Q {
        &self.hi - &self.lo
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn sign(&self) -> Option<Ordering> {
        if self.lo.is_positive() {
            Some(Ordering::Greater)
        } else if self.hi.is_negative() {
            Some(Ordering::Less)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn mid(&self) -> Q {
        (&self.lo + &self.hi) / qi(2)
    }

    pub fn mid_f64(&self) -> f64 {
        q_to_f64(&self.mid())
    }

    pub fn abs_upper(&self) -> Q {
        std::cmp::max(self.lo.abs(), self.hi.abs())
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval::new(&self.lo + &o.lo, &self.hi + &o.hi)
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        Interval::new(&self.lo - &o.hi, &self.hi - &o.lo)
    }

    pub fn neg(&self) -> Interval {
        Interval::new(-&self.hi, -&self.lo)
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Interval::new(lo, hi)
    }

    pub fn scale(&self, k: &Q) -> Interval {
        let a = &self.lo * k;
        let b = &self.hi * k;
        if a <= b {
            Interval::new(a, b)
        } else {
            Interval::new(b, a)
        }
    }

    /// Outward rounding to dyadic endpoints with `bits` fractional bits.
    pub fn round(&self, bits: u32) -> Interval {
        if self.lo.denom().bits() <= bits as u64 + 1 && self.hi.denom().bits() <= bits as u64 + 1 {
            return self.clone();
        }
        Interval::new(floor_dyadic(&self.lo, bits), ceil_dyadic(&self.hi, bits))
    }

    /// Horner evaluation of a polynomial with interval coefficients, in
    /// fixed point with `bits + 8` fractional bits and outward rounding.
    pub fn horner(coeffs: &[Interval], at: &Interval, bits: u32) -> Interval {
        let p = bits as usize + 8;
        let xl = fixed_floor(&at.lo, p);
        let xh = fixed_ceil(&at.hi, p);
        let mut lo = BigInt::from(0);
        let mut hi = BigInt::from(0);
        for c in coeffs.iter().rev() {
            let prods = [&lo * &xl, &lo * &xh, &hi * &xl, &hi * &xh];
            let mn = prods.iter().min().unwrap();
            let mx = prods.iter().max().unwrap();
            lo = (mn >> p) + fixed_floor(&c.lo, p);
            hi = -((-mx) >> p) + fixed_ceil(&c.hi, p);
        }
        let scale = <BigInt as num_traits::One>::one() << p;
        Interval::new(Q::new(lo, scale.clone()), Q::new(hi, scale))
    }
}

fn fixed_floor(v: &Q, p: usize) -> BigInt {
    (v.numer() << p).div_floor(v.denom())
}

fn fixed_ceil(v: &Q, p: usize) -> BigInt {
    (v.numer() << p).div_ceil(v.denom())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_pow_and_from_i64() {
        assert_eq!(<Q as Ring>::from_i64(-7), qi(-7));
        assert_eq!(q(2, 3).pow(3), q(8, 27));
        assert_eq!(<Q as Ring>::pow(&qi(5), 0), qi(1));
    }

    #[test]
    fn interval_rounding_is_outward() {
        let i = Interval::new(q(1, 3), q(2, 3)).round(8);
        assert!(i.lo <= q(1, 3) && i.hi >= q(2, 3));
        assert!(i.width() < q(1, 3) + q(1, 64));
    }

    #[test]
    fn interval_mul_signs() {
        let a = Interval::new(qi(-1), qi(2));
        let b = Interval::new(qi(-3), qi(1));
        let p = a.mul(&b);
        assert_eq!(p, Interval::new(qi(-6), qi(3)));
        assert_eq!(Interval::new(qi(1), qi(2)).sign(), Some(Ordering::Greater));
        assert_eq!(p.sign(), None);
    }

    #[test]
    fn f64_conversion_handles_huge_values() {
        let big = Q::from_integer(<BigInt as num_traits::One>::one() << 2000usize) / Q::from_integer(<BigInt as num_traits::One>::one() << 1990usize);
        assert_eq!(q_to_f64(&big), 1024.0);
        assert!((q_to_f64(&q(1, 3)) - 1.0 / 3.0).abs() < 1e-16);
    }
}
