//! Dense univariate polynomials over a generic coefficient ring.

use std::cmp::Ordering;

use crate::ring::{Interval, RealField, Ring, Q};

/// Coefficients are stored lowest degree first; the leading coefficient is
/// never zero and the zero polynomial has no coefficients.
#[derive(Clone, Debug)]
pub struct UPoly<R: Ring> {
    coeffs: Vec<R>,
}

impl<R: Ring> UPoly<R> {
    pub fn new(mut coeffs: Vec<R>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: R) -> Self {
        UPoly::new(vec![c])
    }

    pub fn one() -> Self {
        UPoly::constant(R::one())
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        UPoly::new(vec![R::zero(), R::one()])
    }

    pub fn monomial(c: R, deg: usize) -> Self {
        let mut v = vec![R::zero(); deg + 1];
        v[deg] = c;
        UPoly::new(v)
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<R> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lc(&self) -> R {
        self.coeffs.last().cloned().unwrap_or_else(R::zero)
    }

    pub fn coeff(&self, i: usize) -> R {
        self.coeffs.get(i).cloned().unwrap_or_else(R::zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let v = (0..n)
            .map(|i| match (self.coeffs.get(i), o.coeffs.get(i)) {
                (Some(a), Some(b)) => a.add(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        UPoly::new(v)
    }

    pub fn neg(&self) -> Self {
        UPoly { coeffs: self.coeffs.iter().map(|c| c.neg()).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut v = vec![R::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] = v[i + j].add(&a.mul(b));
            }
        }
        UPoly::new(v)
    }

    pub fn scale(&self, k: &R) -> Self {
        UPoly::new(self.coeffs.iter().map(|c| c.mul(k)).collect())
    }

    pub fn exact_div_scalar(&self, k: &R) -> Self {
        UPoly::new(self.coeffs.iter().map(|c| c.exact_div(k)).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = UPoly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        UPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.mul(&R::from_i64(i as i64)))
                .collect(),
        )
    }

    pub fn eval(&self, at: &R) -> R {
        let mut acc = R::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(at).add(c);
        }
        acc
    }

    /// Composition `self(other)`.
    pub fn compose(&self, other: &Self) -> Self {
        let mut acc = UPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(other).add(&UPoly::constant(c.clone()));
        }
        acc
    }

    /// `p(x + 1)` by repeated synthetic division.
    pub fn taylor_shift_one(&self) -> Self {
        let mut a = self.coeffs.clone();
        let n = a.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                a[j] = a[j].add(&a[j + 1]);
            }
        }
        UPoly::new(a)
    }

    /// `x^n p(1/x)`, with `n` the degree.
    pub fn reverse(&self) -> Self {
        let mut v = self.coeffs.clone();
        v.reverse();
        UPoly::new(v)
    }

    /// Pseudo-remainder: `lc(b)^(deg a - deg b + 1) a = q b + r`.
    pub fn prem(&self, b: &Self) -> Self {
        let db = b.degree().expect("prem by zero polynomial");
        let Some(da) = self.degree() else { return UPoly::zero() };
        if da < db {
            return self.clone();
        }
        let lb = b.lc();
        let mut r = self.coeffs.clone();
        let mut steps = da - db + 1;
        while r.len() > db && r.len() >= 1 {
            let dr = r.len() - 1;
            if dr < db {
                break;
            }
            let lr = r[dr].clone();
            // r = lb * r - lr * x^(dr-db) * b
            for c in r.iter_mut() {
                *c = c.mul(&lb);
            }
            for (j, bc) in b.coeffs.iter().enumerate() {
                let k = dr - db + j;
                r[k] = r[k].sub(&lr.mul(bc));
            }
            r.pop();
            while r.last().map_or(false, |c| c.is_zero()) {
                r.pop();
            }
            steps -= 1;
        }
        let mut out = UPoly::new(r);
        if steps > 0 {
            out = out.scale(&lb.pow(steps as u32));
        }
        out
    }

    /// Exact quotient by a polynomial that divides `self`.
    pub fn exact_div(&self, b: &Self) -> Self {
        let db = b.degree().expect("division by zero polynomial");
        let Some(da) = self.degree() else { return UPoly::zero() };
        if da < db {
            assert!(self.is_zero(), "inexact polynomial division");
            return UPoly::zero();
        }
        let lb = b.lc();
        let mut r = self.coeffs.clone();
        let mut quot = vec![R::zero(); da - db + 1];
        for k in (0..=da - db).rev() {
            let c = r[k + db].exact_div(&lb);
            if !c.is_zero() {
                for (j, bc) in b.coeffs.iter().enumerate() {
                    r[k + j] = r[k + j].sub(&c.mul(bc));
                }
            }
            quot[k] = c;
        }
        debug_assert!(r.iter().all(|c| c.is_zero()), "inexact polynomial division");
        UPoly::new(quot)
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> UPoly<S> {
        UPoly::new(self.coeffs.iter().map(f).collect())
    }
}

/// Resultant by the subresultant remainder sequence; only exact divisions
/// in the coefficient ring are required.
pub fn resultant<R: Ring>(a: &UPoly<R>, b: &UPoly<R>) -> R {
    if a.is_zero() || b.is_zero() {
        return R::zero();
    }
    let (mut a, mut b) = (a.clone(), b.clone());
    let mut s = false;
    if a.deg() < b.deg() {
        if a.deg() % 2 == 1 && b.deg() % 2 == 1 {
            s = !s;
        }
        std::mem::swap(&mut a, &mut b);
    }
    if b.deg() == 0 {
        let r = b.lc().pow(a.deg() as u32);
        return if s { r.neg() } else { r };
    }
    let mut g = R::one();
    let mut h = R::one();
    loop {
        let da = a.deg();
        let db = b.deg();
        let delta = (da - db) as u32;
        if da % 2 == 1 && db % 2 == 1 {
            s = !s;
        }
        let r = a.prem(&b);
        if r.is_zero() {
            return R::zero();
        }
        a = b;
        let div = g.mul(&h.pow(delta));
        b = r.exact_div_scalar(&div);
        g = a.lc();
        h = if delta == 0 {
            h
        } else {
            g.pow(delta).exact_div(&h.pow(delta - 1))
        };
        if b.deg() == 0 {
            let da = a.deg() as u32;
            // h^(1-da) * lc(b)^da
            let num = b.lc().pow(da);
            let res = if da == 0 {
                h.mul(&num)
            } else {
                num.exact_div(&h.pow(da - 1))
            };
            return if s { res.neg() } else { res };
        }
    }
}

impl<K: RealField> UPoly<K> {
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.lc().inv();
        self.scale(&inv)
    }

    pub fn div_rem(&self, b: &Self) -> (Self, Self) {
        let db = b.degree().expect("division by zero polynomial");
        let Some(da) = self.degree() else { return (UPoly::zero(), UPoly::zero()) };
        if da < db {
            return (UPoly::zero(), self.clone());
        }
        let inv = b.lc().inv();
        let mut r = self.coeffs.clone();
        let mut quot = vec![K::zero(); da - db + 1];
        for k in (0..=da - db).rev() {
            let c = r[k + db].mul(&inv);
            if !c.is_zero() {
                for (j, bc) in b.coeffs.iter().enumerate() {
                    r[k + j] = r[k + j].sub(&c.mul(bc));
                }
            }
            quot[k] = c;
        }
        r.truncate(db);
        (UPoly::new(quot), UPoly::new(r))
    }

    pub fn rem(&self, b: &Self) -> Self {
        self.div_rem(b).1
    }

    /// Monic gcd by the Euclidean algorithm (zero coefficients are detected
    /// exactly by the field).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s)` with `g = gcd(self, m)` and `s * self = g (mod m)`.
    pub fn gcd_ext(&self, m: &Self) -> (Self, Self) {
        let (mut r0, mut r1) = (m.clone(), self.rem(m));
        let (mut s0, mut s1) = (UPoly::zero(), UPoly::one());
        while !r1.is_zero() {
            let (qq, r) = r0.div_rem(&r1);
            let s = s0.sub(&qq.mul(&s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        let inv = r0.lc().inv();
        (r0.scale(&inv), s0.scale(&inv))
    }

    pub fn squarefree(&self) -> Self {
        if self.deg() == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.exact_div(&g).monic()
    }

    /// Yun's square-free factorisation: `(factor, multiplicity)` pairs with
    /// monic, pairwise coprime, square-free factors of positive degree.
    pub fn squarefree_factors(&self) -> Vec<(Self, u32)> {
        let mut out = Vec::new();
        if self.deg() == 0 {
            return out;
        }
        let f = self.monic();
        let d = f.derivative();
        let a = f.gcd(&d);
        let mut b = f.exact_div(&a);
        let mut c = d.exact_div(&a);
        let mut dd = c.sub(&b.derivative());
        let mut i = 1;
        loop {
            let g = b.gcd(&dd);
            if g.deg() > 0 {
                out.push((g.clone(), i));
            }
            b = b.exact_div(&g);
            if b.deg() == 0 {
                break;
            }
            c = dd.exact_div(&g);
            dd = c.sub(&b.derivative());
            i += 1;
        }
        out
    }

    /// Interval enclosure of the value at an interval, coefficients enclosed
    /// to `bits` bits.
    pub fn eval_interval(&self, at: &Interval, bits: u32) -> Interval {
        let cs: Vec<Interval> = self.coeffs.iter().map(|c| c.enclose(bits)).collect();
        Interval::horner(&cs, at, bits)
    }

    pub fn eval_q(&self, at: &Q) -> K {
        self.eval(&K::from_rational(at))
    }

    pub fn sign_at(&self, at: &Q) -> Ordering {
        self.eval_q(at).sign()
    }
}

impl<R: Ring> Ring for UPoly<R> {
    fn zero() -> Self {
        UPoly::zero()
    }
    fn one() -> Self {
        UPoly::one()
    }
    fn is_zero(&self) -> bool {
        UPoly::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        UPoly::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        UPoly::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        UPoly::mul(self, o)
    }
    fn neg(&self) -> Self {
        UPoly::neg(self)
    }
    fn exact_div(&self, o: &Self) -> Self {
        UPoly::exact_div(self, o)
    }
}

impl<R: Ring> PartialEq for UPoly<R> {
    fn eq(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }
}
