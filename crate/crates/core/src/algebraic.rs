//! Arithmetic in `K(alpha)` for a real root `alpha` of a square-free
//! polynomial over a real field `K`.
//!
//! Elements are polynomials in `alpha` reduced modulo a shared defining
//! polynomial. The defining polynomial need not be irreducible: a zero test
//! that meets a proper factor splits the modulus and keeps the factor that
//! vanishes at `alpha`, so later operations work in a smaller ring.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use parking_lot::RwLock;

use crate::realroots::RealRoot;
use crate::ring::{pow2, Interval, RealField, Ring, Q};
use crate::upoly::UPoly;

/// Precision cap for sign determination of a nonzero element.
const MAX_BITS: u32 = 1 << 16;

#[derive(Debug)]
struct State<K: RealField> {
    modulus: UPoly<K>,
    lo: Q,
    hi: Q,
}

/// A real algebraic number used as the generator of an extension.
#[derive(Debug)]
pub struct ExtCtx<K: RealField> {
    state: RwLock<State<K>>,
}

impl<K: RealField> ExtCtx<K> {
    pub fn new(root: &RealRoot<K>) -> Arc<Self> {
        Arc::new(ExtCtx {
            state: RwLock::new(State { modulus: root.defining.monic(), lo: root.lo.clone(), hi: root.hi.clone() }),
        })
    }

    pub fn modulus(&self) -> UPoly<K> {
        self.state.read().modulus.clone()
    }

    pub fn root(&self) -> RealRoot<K> {
        let s = self.state.read();
        RealRoot { defining: s.modulus.clone(), lo: s.lo.clone(), hi: s.hi.clone() }
    }

    /// Isolating interval of width at most `2^-bits`.
    fn interval(&self, bits: u32) -> Interval {
        let target = pow2(-(bits as i64));
        {
            let s = self.state.read();
            if &s.hi - &s.lo <= target {
                return Interval::new(s.lo.clone(), s.hi.clone());
            }
        }
        let mut r = self.root();
        r.refine_to(&target);
        let mut s = self.state.write();
        // another thread may have refined further or split the modulus
        if &r.hi - &r.lo < &s.hi - &s.lo {
            s.lo = r.lo.clone();
            s.hi = r.hi.clone();
        }
        Interval::new(s.lo.clone(), s.hi.clone())
    }

    /// Whether `e(alpha) = 0`; splits the modulus when `e` shares a factor.
    fn vanishes(&self, e: &UPoly<K>) -> bool {
        let m = self.modulus();
        let e = e.rem(&m);
        if e.is_zero() {
            return true;
        }
        if e.deg() == 0 {
            return false;
        }
        let g = e.gcd(&m);
        if g.deg() == 0 {
            return false;
        }
        let (lo, hi) = {
            let s = self.state.read();
            (s.lo.clone(), s.hi.clone())
        };
        let zero = if lo == hi {
            g.sign_at(&lo) == Ordering::Equal
        } else {
            g.sign_at(&lo) != g.sign_at(&hi)
        };
        let mut s = self.state.write();
        if s.modulus.deg() == m.deg() {
            s.modulus = if zero { g } else { m.exact_div(&g).monic() };
        }
        zero
    }
}

/// An element of `K(alpha)`. Elements without a context are constants of `K`.
#[derive(Clone)]
pub struct Ext<K: RealField> {
    ctx: Option<Arc<ExtCtx<K>>>,
    rep: UPoly<K>,
}

impl<K: RealField> fmt::Debug for Ext<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ext({:?} ~ {})", self.rep.coeffs(), self.to_f64())
    }
}

impl<K: RealField> Ext<K> {
    /// The generator `alpha` itself.
    pub fn generator(ctx: &Arc<ExtCtx<K>>) -> Self {
        Ext::from_poly(ctx, UPoly::x())
    }

    pub fn from_poly(ctx: &Arc<ExtCtx<K>>, p: UPoly<K>) -> Self {
        let m = ctx.modulus();
        Ext { ctx: Some(ctx.clone()), rep: p.rem(&m) }
    }

    pub fn from_base(k: K) -> Self {
        Ext { ctx: None, rep: UPoly::constant(k) }
    }

    pub fn ctx(&self) -> Option<&Arc<ExtCtx<K>>> {
        self.ctx.as_ref()
    }

    fn join(&self, o: &Self) -> Option<Arc<ExtCtx<K>>> {
        match (&self.ctx, &o.ctx) {
            (Some(a), Some(b)) => {
                debug_assert!(Arc::ptr_eq(a, b), "mixing elements of different extensions");
                Some(a.clone())
            }
            (Some(a), None) | (None, Some(a)) => Some(a.clone()),
            (None, None) => None,
        }
    }

    fn reduce(ctx: Option<Arc<ExtCtx<K>>>, p: UPoly<K>) -> Self {
        let rep = match &ctx {
            Some(c) if p.deg() > 0 => {
                let m = c.modulus();
                if p.deg() >= m.deg() {
                    p.rem(&m)
                } else {
                    p
                }
            }
            _ => p,
        };
        Ext { ctx, rep }
    }

    /// Lift a polynomial over `K` to one over `K(alpha)`.
    pub fn lift_poly(p: &UPoly<K>) -> UPoly<Ext<K>> {
        p.map(|c| Ext::from_base(c.clone()))
    }
}

impl<K: RealField> Ring for Ext<K> {
    fn zero() -> Self {
        Ext { ctx: None, rep: UPoly::zero() }
    }
    fn one() -> Self {
        Ext { ctx: None, rep: UPoly::one() }
    }
    fn is_zero(&self) -> bool {
        if self.rep.is_zero() {
            return true;
        }
        match &self.ctx {
            None => false,
            Some(_) if self.rep.deg() == 0 => false,
            Some(c) => {
                // cheap exclusion before the exact gcd test
                if !self.enclose_raw(48).contains_zero() {
                    return false;
                }
                c.vanishes(&self.rep)
            }
        }
    }
    fn add(&self, o: &Self) -> Self {
        Ext { ctx: self.join(o), rep: self.rep.add(&o.rep) }
    }
    fn sub(&self, o: &Self) -> Self {
        Ext { ctx: self.join(o), rep: self.rep.sub(&o.rep) }
    }
    fn mul(&self, o: &Self) -> Self {
        Ext::reduce(self.join(o), self.rep.mul(&o.rep))
    }
    fn neg(&self) -> Self {
        Ext { ctx: self.ctx.clone(), rep: self.rep.neg() }
    }
    fn exact_div(&self, o: &Self) -> Self {
        self.mul(&o.inv())
    }
}

impl<K: RealField> RealField for Ext<K> {
    fn from_rational(q: &Q) -> Self {
        Ext::from_base(K::from_rational(q))
    }

    fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        match &self.ctx {
            Some(c) if self.rep.deg() > 0 => {
                // a shared factor of the modulus does not vanish at alpha
                // (the zero test ruled that out), so it can be divided away
                let mut m = c.modulus();
                loop {
                    let (g, s) = self.rep.rem(&m).gcd_ext(&m);
                    if g.deg() == 0 {
                        return Ext { ctx: self.ctx.clone(), rep: s };
                    }
                    m = m.exact_div(&g);
                }
            }
            _ => Ext { ctx: self.ctx.clone(), rep: UPoly::constant(self.rep.coeff(0).inv()) },
        }
    }

    fn sign(&self) -> Ordering {
        if self.rep.deg() == 0 {
            return self.rep.coeff(0).sign();
        }
        if let Some(s) = self.enclose_raw(48).sign() {
            if s != Ordering::Equal {
                return s;
            }
        }
        if self.is_zero() {
            return Ordering::Equal;
        }
        let mut bits = 96;
        loop {
            if let Some(s) = self.enclose_raw(bits).sign() {
                if s != Ordering::Equal {
                    return s;
                }
            }
            assert!(bits <= MAX_BITS, "sign of a nonzero algebraic element undecided at {bits} bits");
            bits *= 2;
        }
    }

    fn enclose(&self, bits: u32) -> Interval {
        if self.rep.deg() == 0 {
            return self.rep.coeff(0).enclose(bits);
        }
        let target = pow2(-(bits as i64));
        let mut b = bits + 8;
        loop {
            let i = self.enclose_raw(b);
            if i.width() <= target || b > MAX_BITS {
                return i;
            }
            b *= 2;
        }
    }

    fn as_rational(&self) -> Option<Q> {
        if self.rep.deg() == 0 {
            return self.rep.coeff(0).as_rational();
        }
        let c = self.ctx.as_ref()?;
        let r = c.root();
        let v = r.as_rational()?;
        self.rep.eval_q(&v).as_rational()
    }
}

impl<K: RealField> Ext<K> {
    fn enclose_raw(&self, bits: u32) -> Interval {
        match &self.ctx {
            None => self.rep.coeff(0).enclose(bits),
            Some(c) => {
                let at = c.interval(bits + 4);
                self.rep.eval_interval(&at, bits + 8)
            }
        }
    }

    /// Whether two elements are equal.
    pub fn eq_exact(&self, o: &Self) -> bool {
        self.sub(o).is_zero()
    }
}
