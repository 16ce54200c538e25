//! Real root isolation, refinement, comparison and sample selection.
//!
//! Isolation is Descartes' rule of signs with bisection, run on each factor
//! of the square-free decomposition so that every root carries a small
//! defining polynomial. Coefficients may live in any [`RealField`]; signs are
//! decided exactly.

use std::cmp::Ordering;

use num_traits::Signed;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mpoly::{MPoly, Var};
use crate::ring::{pow2, q_to_f64, qi, Interval, RealField, Ring, Q};
use crate::upoly::UPoly;

/// A real root of `defining` isolated in `[lo, hi]`.
///
/// When `lo == hi` the root is that rational. Otherwise `defining` is
/// square-free, nonzero at both endpoints and has exactly one root in the
/// open interval.
#[derive(Clone, Debug)]
pub struct RealRoot<K: RealField> {
    pub defining: UPoly<K>,
    pub lo: Q,
    pub hi: Q,
}

/// A real algebraic number over the rationals.
pub type AlgebraicNumber = RealRoot<Q>;

impl<K: RealField> RealRoot<K> {
    pub fn rational(v: Q) -> Self {
        RealRoot { defining: UPoly::new(vec![K::from_rational(&-v.clone()), K::one()]), lo: v.clone(), hi: v }
    }

    pub fn is_rational(&self) -> bool {
        self.lo == self.hi
    }

    pub fn as_rational(&self) -> Option<Q> {
        self.is_rational().then(|| self.lo.clone())
    }

    pub fn width(&self) -> Q {
        &self.hi - &self.lo
    }

    pub fn interval(&self) -> Interval {
        Interval::new(self.lo.clone(), self.hi.clone())
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_rational() {
            return q_to_f64(&self.lo);
        }
        let r = self.refined(&pow2(-24));
        if r.is_rational() {
            return q_to_f64(&r.lo);
        }
        let (lo, hi) = (q_to_f64(&r.lo), q_to_f64(&r.hi));
        let c: Vec<f64> = r.defining.coeffs().iter().map(|k| k.to_f64()).collect();
        let d: Vec<f64> = c.iter().enumerate().skip(1).map(|(i, v)| v * i as f64).collect();
        let mut x = 0.5 * (lo + hi);
        for _ in 0..60 {
            let step = crate::numeric::horner(&c, x) / crate::numeric::horner(&d, x);
            if !step.is_finite() || !(lo..=hi).contains(&(x - step)) {
                break;
            }
            x -= step;
            if step.abs() <= 4.0 * f64::EPSILON * x.abs().max(f64::MIN_POSITIVE) {
                return x;
            }
        }
        let r = r.refined(&pow2(-60));
        q_to_f64(&((&r.lo + &r.hi) / qi(2)))
    }

    /// One bisection step.
    pub fn bisect(&mut self) {
        if self.is_rational() {
            return;
        }
        let mid = (&self.lo + &self.hi) / qi(2);
        let sm = self.defining.sign_at(&mid);
        if sm == Ordering::Equal {
            self.lo = mid.clone();
            self.hi = mid;
            return;
        }
        let sl = self.defining.sign_at(&self.lo);
        if sl == sm {
            self.lo = mid;
        } else {
            self.hi = mid;
        }
    }

    /// Same root, interval width at most `width`.
    pub fn refined(&self, width: &Q) -> Self {
        let mut r = self.clone();
        r.refine_to(width);
        r
    }

    pub fn refine_to(&mut self, width: &Q) {
        if self.is_rational() || self.width() <= *width {
            return;
        }
        let mut sl = self.defining.sign_at(&self.lo);
        while self.width() > *width {
            let mid = (&self.lo + &self.hi) / qi(2);
            let sm = self.defining.sign_at(&mid);
            if sm == Ordering::Equal {
                self.lo = mid.clone();
                self.hi = mid;
                return;
            }
            if sm == sl {
                self.lo = mid;
                sl = sm;
            } else {
                self.hi = mid;
            }
        }
    }

    /// Exact order of two real roots.
    pub fn compare(&self, other: &Self) -> Ordering {
        let (mut a, mut b) = (self.clone(), other.clone());
        if let (Some(x), Some(y)) = (a.as_rational(), b.as_rational()) {
            return x.cmp(&y);
        }
        if let Some(v) = a.as_rational() {
            return cmp_rational_root(&v, &mut b);
        }
        if let Some(v) = b.as_rational() {
            return cmp_rational_root(&v, &mut a).reverse();
        }
        if a.hi <= b.lo {
            return Ordering::Less;
        }
        if b.hi <= a.lo {
            return Ordering::Greater;
        }
        let g = a.defining.gcd(&b.defining);
        if g.deg() > 0 && sign_change(&g, &a.lo, &a.hi) {
            // a's root is a root of g, hence of b.defining; equal iff it sits in b's interval
            let mut r = RealRoot { defining: g, lo: a.lo.clone(), hi: a.hi.clone() };
            loop {
                if let Some(v) = r.as_rational() {
                    return cmp_rational_root(&v, &mut b);
                }
                if r.hi <= b.lo {
                    return Ordering::Less;
                }
                if b.hi <= r.lo {
                    return Ordering::Greater;
                }
                if r.lo >= b.lo && r.hi <= b.hi {
                    return Ordering::Equal;
                }
                r.bisect();
            }
        }
        loop {
            if a.hi <= b.lo {
                return Ordering::Less;
            }
            if b.hi <= a.lo {
                return Ordering::Greater;
            }
            a.bisect();
            b.bisect();
            if let Some(v) = a.as_rational() {
                return cmp_rational_root(&v, &mut b);
            }
            if let Some(v) = b.as_rational() {
                return cmp_rational_root(&v, &mut a).reverse();
            }
        }
    }

    /// Sign of `p` at this root.
    pub fn sign_of(&self, p: &UPoly<K>) -> Ordering {
        if let Some(v) = self.as_rational() {
            return p.sign_at(&v);
        }
        let g = p.gcd(&self.defining);
        if g.deg() > 0 && sign_change(&g, &self.lo, &self.hi) {
            return Ordering::Equal;
        }
        // p has no root in the closure once the interval is small enough
        let mut r = self.clone();
        loop {
            let pl = p.sign_at(&r.lo);
            let ph = p.sign_at(&r.hi);
            if pl == ph && pl != Ordering::Equal && !sign_change_count_positive(p, &r.lo, &r.hi) {
                return pl;
            }
            r.bisect();
            if let Some(v) = r.as_rational() {
                return p.sign_at(&v);
            }
        }
    }
}

fn cmp_rational_root<K: RealField>(v: &Q, b: &mut RealRoot<K>) -> Ordering {
    loop {
        if let Some(w) = b.as_rational() {
            return v.cmp(&w);
        }
        if *v <= b.lo {
            return Ordering::Less;
        }
        if *v >= b.hi {
            return Ordering::Greater;
        }
        if b.defining.sign_at(v) == Ordering::Equal {
            return Ordering::Equal;
        }
        b.bisect();
    }
}

fn sign_change<K: RealField>(p: &UPoly<K>, lo: &Q, hi: &Q) -> bool {
    if lo == hi {
        return p.sign_at(lo) == Ordering::Equal;
    }
    let a = p.sign_at(lo);
    let b = p.sign_at(hi);
    a != b && a != Ordering::Equal && b != Ordering::Equal
}

fn sign_change_count_positive<K: RealField>(p: &UPoly<K>, lo: &Q, hi: &Q) -> bool {
    if p.deg() == 0 {
        return false;
    }
    descartes_on(p, lo, hi) > 0
}

/// Descartes sign-variation bound for the roots of `p` in the open interval.
fn descartes_on<K: RealField>(p: &UPoly<K>, lo: &Q, hi: &Q) -> usize {
    // p(lo + (hi - lo) x) then count on (0, 1)
    let w = hi - lo;
    let shifted = p.compose(&UPoly::new(vec![K::from_rational(lo), K::from_rational(&w)]));
    variations01(&shifted)
}

/// Sign variations of `(x + 1)^n p(1 / (x + 1))`, a bound on roots in (0, 1).
fn variations01<K: RealField>(p: &UPoly<K>) -> usize {
    let t = p.reverse().taylor_shift_one();
    let mut count = 0;
    let mut last = Ordering::Equal;
    for c in t.coeffs() {
        let s = c.sign();
        if s == Ordering::Equal {
            continue;
        }
        if last != Ordering::Equal && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Cauchy bound `1 + max |a_i| / |a_n|`.
pub fn root_bound<K: RealField>(p: &UPoly<K>) -> Result<Q> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let n = p.deg();
    if n == 0 {
        return Ok(qi(1));
    }
    if let Some(lc) = p.lc().as_rational() {
        let mut m = Q::zero();
        let mut all_rational = true;
        for c in &p.coeffs()[..n] {
            match c.as_rational() {
                Some(v) => m = m.max(v.abs()),
                None => {
                    all_rational = false;
                    break;
                }
            }
        }
        if all_rational {
            return Ok(qi(1) + m / lc.abs());
        }
    }
    // enclosures: upper bound of numerators over lower bound of |lc|
    let mut bits = 16;
    loop {
        let lc = p.lc().enclose(bits);
        let lc_low = if lc.lo.is_positive() {
            lc.lo.clone()
        } else if lc.hi.is_negative() {
            -lc.hi.clone()
        } else {
            bits *= 2;
            continue;
        };
        let m = p.coeffs()[..n].iter().map(|c| c.enclose(bits).abs_upper()).max().unwrap_or_else(Q::zero);
        return Ok(qi(1) + m / lc_low);
    }
}

fn pow2_ceiling(v: &Q) -> Q {
    let mut b = qi(1);
    while b < *v {
        b *= qi(2);
    }
    b
}

/// Isolating intervals of a square-free polynomial, ascending.
fn isolate_squarefree<K: RealField>(p: &UPoly<K>) -> Vec<(Q, Q)> {
    let n = p.deg();
    if n == 0 {
        return Vec::new();
    }
    let b = pow2_ceiling(&root_bound(p).expect("nonzero"));
    // roots of p lie in (-b, b); map to (0, 1)
    let start = p.compose(&UPoly::new(vec![K::from_rational(&-b.clone()), K::from_rational(&(qi(2) * &b))]));
    let mut out: Vec<(Q, Q)> = Vec::new();
    let mut stack = vec![(start, -b.clone(), qi(2) * &b)];
    while let Some((poly, a, w)) = stack.pop() {
        let v = variations01(&poly);
        if v == 0 {
            continue;
        }
        if v == 1 {
            out.push((a.clone(), &a + &w));
            continue;
        }
        let half = &w / qi(2);
        let mid = &a + &half;
        let left = halve(&poly);
        let right = left.taylor_shift_one();
        if right.coeff(0).is_zero() {
            out.push((mid.clone(), mid.clone()));
        }
        stack.push((left, a, half.clone()));
        stack.push((right, mid, half));
    }
    let mut out: Vec<(Q, Q)> = out.into_iter().map(|(lo, hi)| tighten_endpoints(p, lo, hi)).collect();
    out.sort_by(|x, y| x.0.cmp(&y.0));
    out
}

/// `2^n p(x / 2)`.
fn halve<K: RealField>(p: &UPoly<K>) -> UPoly<K> {
    let n = p.deg();
    UPoly::new(
        p.coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| c.mul(&K::from_rational(&pow2((n - i) as i64))))
            .collect(),
    )
}

/// Moves endpoints that are themselves roots slightly inward.
fn tighten_endpoints<K: RealField>(p: &UPoly<K>, mut lo: Q, mut hi: Q) -> (Q, Q) {
    if lo == hi {
        return (lo, hi);
    }
    let w = &hi - &lo;
    if p.sign_at(&lo) == Ordering::Equal {
        let mut d = &w / qi(4);
        loop {
            let cand = &lo + &d;
            if p.sign_at(&cand) != Ordering::Equal && descartes_on(p, &cand, &hi) == 1 {
                lo = cand;
                break;
            }
            d /= qi(2);
        }
    }
    if p.sign_at(&hi) == Ordering::Equal {
        let mut d = &w / qi(4);
        loop {
            let cand = &hi - &d;
            if p.sign_at(&cand) != Ordering::Equal && descartes_on(p, &lo, &cand) == 1 {
                hi = cand;
                break;
            }
            d /= qi(2);
        }
    }
    (lo, hi)
}

/// All distinct real roots, ascending; each root's defining polynomial is
/// the square-free factor (in Yun's decomposition) it belongs to.
pub fn isolate_real_roots<K: RealField>(p: &UPoly<K>) -> Result<Vec<RealRoot<K>>> {
    Ok(isolate_with_multiplicity(p)?.into_iter().map(|(r, _)| r).collect())
}

/// Distinct real roots, ascending, each with its multiplicity in `p`.
pub fn isolate_with_multiplicity<K: RealField>(p: &UPoly<K>) -> Result<Vec<(RealRoot<K>, u32)>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    // the bound is strict, so clipping to it keeps endpoints off the roots
    let b = root_bound(p)?;
    let mut roots = Vec::new();
    for (factor, mult) in p.squarefree_factors() {
        if factor.deg() == 1 {
            if let Some(v) = factor.coeff(0).div(&factor.coeff(1)).neg().as_rational() {
                roots.push((RealRoot::rational(v), mult));
                continue;
            }
        }
        for (lo, hi) in isolate_squarefree(&factor) {
            let (lo, hi) = if lo == hi { (lo, hi) } else { (lo.max(-b.clone()), hi.min(b.clone())) };
            let r = if lo == hi { RealRoot::rational(lo) } else { RealRoot { defining: factor.clone(), lo, hi } };
            roots.push((r, mult));
        }
    }
    // factors are coprime, so roots are distinct
    roots.sort_by(|a, b| a.0.compare(&b.0));
    for i in 1..roots.len() {
        while roots[i - 1].0.hi >= roots[i].0.lo {
            if roots[i - 1].0.width() >= roots[i].0.width() {
                roots[i - 1].0.bisect();
            } else {
                roots[i].0.bisect();
            }
        }
    }
    Ok(roots)
}

/// Sorts roots, refining until intervals are pairwise disjoint, and drops
/// duplicates.
pub fn sort_roots<K: RealField>(roots: &mut Vec<RealRoot<K>>) {
    roots.sort_by(|a, b| a.compare(b));
    roots.dedup_by(|a, b| a.compare(b) == Ordering::Equal);
    separate(roots);
}

/// Refines adjacent isolating intervals of a sorted root list until disjoint.
pub fn separate<K: RealField>(roots: &mut [RealRoot<K>]) {
    for i in 1..roots.len() {
        while roots[i - 1].hi >= roots[i].lo {
            if roots[i - 1].width() >= roots[i].width() {
                roots[i - 1].bisect();
            } else {
                roots[i].bisect();
            }
        }
    }
}

/// Isolation for a univariate [`MPoly`].
pub fn isolate_mpoly(p: &MPoly, v: Var) -> Result<Vec<AlgebraicNumber>> {
    let u = p.to_univariate(v).ok_or(Error::ZeroPolynomial)?;
    isolate_real_roots(&u)
}

#[derive(Clone, Debug)]
pub struct SamplePlan<K: RealField> {
    pub roots: Vec<RealRoot<K>>,
    pub samples: Vec<Q>,
}

/// Rational sample points strictly interleaving sorted, disjoint roots.
pub fn sample_plan<K: RealField>(roots: &[RealRoot<K>]) -> SamplePlan<K> {
    let mut roots = roots.to_vec();
    separate(&mut roots);
    if roots.is_empty() {
        return SamplePlan { roots, samples: vec![Q::zero()] };
    }
    let mut samples = Vec::with_capacity(roots.len() + 1);
    samples.push(&roots[0].lo - qi(1));
    for w in roots.windows(2) {
        samples.push(simplest_between(&w[0].hi, &w[1].lo));
    }
    samples.push(&roots[roots.len() - 1].hi + qi(1));
    // endpoint samples must avoid the roots themselves
    for (i, s) in samples.iter_mut().enumerate() {
        if i > 0 && i < roots.len() && (*s == roots[i - 1].hi || *s == roots[i].lo) {
            *s = (&roots[i - 1].hi + &roots[i].lo) / qi(2);
        }
    }
    SamplePlan { roots, samples }
}

/// Rational with smallest denominator in the closed interval `[a, b]`,
/// preferring the open interval when it is nonempty.
pub fn simplest_between(a: &Q, b: &Q) -> Q {
    debug_assert!(a <= b);
    if a == b {
        return a.clone();
    }
    // dyadic search: the coarsest grid 2^-k that has a point strictly inside
    let mut k: i64 = -64;
    loop {
        let step = pow2(-k);
        let n = (a / &step).floor() + qi(1);
        let cand = &n * &step;
        if cand > *a && cand < *b {
            // smallest magnitude grid point inside
            if a.is_negative() && b.is_positive() {
                return Q::zero();
            }
            let m = if b.is_negative() { ((b / &step).ceil() - qi(1)) * &step } else { cand };
            return if m > *a && m < *b { m } else { (a + b) / qi(2) };
        }
        k += 1;
        if k > 4096 {
            return (a + b) / qi(2);
        }
    }
}

/// A sign-invariant decimal rendering of a root.
pub fn approx_decimal<K: RealField>(r: &RealRoot<K>, digits: usize) -> String {
    format!("{:.*}", digits, r.to_f64())
}

#[derive(Clone, Debug, Serialize)]
pub struct RootJson {
    pub decimal: f64,
    pub defining: String,
    pub interval: [String; 2],
}

impl RootJson {
    pub fn from_root(r: &AlgebraicNumber, v: Var) -> Self {
        let rr = r.refined(&pow2(-64));
        RootJson {
            decimal: r.to_f64(),
            defining: MPoly::from_univariate(v, &r.defining).normalize().to_string(),
            interval: [crate::mpoly::fmt_q(&rr.lo), crate::mpoly::fmt_q(&rr.hi)],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::q;

    fn p(cs: &[Q]) -> UPoly<Q> {
        UPoly::new(cs.to_vec())
    }

    #[test]
    fn isolates_s1_factor() {
        // z^4 - 2 z^2 - 1/2
        let f = p(&[q(-1, 2), qi(0), qi(-2), qi(0), qi(1)]);
        let r = isolate_real_roots(&f).unwrap();
        assert_eq!(r.len(), 2);
        assert!((r[0].to_f64() + 1.491557867).abs() < 1e-9);
        assert!((r[1].to_f64() - 1.491557867).abs() < 1e-9);
        let refined = r[1].refined(&q(1, 1_000_000_000));
        assert!(refined.lo <= q(1491557867, 1_000_000_000) + q(1, 1_000_000_000));
        assert!(refined.hi >= q(1491557866, 1_000_000_000));
    }

    #[test]
    fn no_real_roots() {
        assert!(isolate_real_roots(&p(&[qi(1), qi(0), qi(1)])).unwrap().is_empty());
        assert!(matches!(isolate_real_roots(&UPoly::<Q>::zero()), Err(Error::ZeroPolynomial)));
    }

    #[test]
    fn sqrt_two_refinement_and_compare() {
        let f = p(&[qi(-2), qi(0), qi(1)]);
        let r = isolate_real_roots(&f).unwrap();
        assert_eq!(r.len(), 2);
        let s = RealRoot { defining: f.clone(), lo: qi(1), hi: qi(2) };
        let t = s.refined(&q(1, 100_000));
        assert!(t.lo >= q(14142, 10000) && t.hi <= q(14143, 10000));
        assert_eq!(s.compare(&RealRoot::rational(q(3, 2))), Ordering::Less);
        assert_eq!(s.compare(&r[1]), Ordering::Equal);
        assert_eq!(r[0].compare(&r[1]), Ordering::Less);
        let ex = RealRoot::<Q>::rational(qi(5));
        assert_eq!(ex.refined(&q(1, 10)).lo, qi(5));
    }

    #[test]
    fn exact_rational_roots_found() {
        // x (x - 1)(x + 1/2)
        let f = p(&[qi(0), qi(1)]).mul(&p(&[qi(-1), qi(1)])).mul(&p(&[q(1, 2), qi(1)]));
        let r = isolate_real_roots(&f).unwrap();
        assert_eq!(r.len(), 3);
        for (root, want) in r.iter().zip([-0.5, 0.0, 1.0]) {
            assert!((root.to_f64() - want).abs() < 1e-12);
            if !root.is_rational() {
                assert_ne!(root.defining.sign_at(&root.lo), Ordering::Equal);
                assert_ne!(root.defining.sign_at(&root.hi), Ordering::Equal);
            }
        }
    }

    #[test]
    fn root_bound_examples() {
        assert_eq!(root_bound(&p(&[qi(-2), qi(0), qi(1)])).unwrap(), qi(3));
        assert_eq!(root_bound(&p(&[qi(0), qi(0), qi(0), qi(0), qi(0), qi(1)])).unwrap(), qi(1));
        assert_eq!(root_bound(&p(&[q(-1, 2), qi(0), qi(-2), qi(0), qi(1)])).unwrap(), qi(3));
    }

    #[test]
    fn sample_plan_examples() {
        let roots = vec![RealRoot::<Q>::rational(qi(-1)), RealRoot::rational(qi(1))];
        assert_eq!(sample_plan(&roots).samples, vec![qi(-2), qi(0), qi(2)]);
        assert_eq!(sample_plan::<Q>(&[]).samples, vec![qi(0)]);
    }

    #[test]
    fn simplest_between_prefers_small_denominators() {
        assert_eq!(simplest_between(&q(13, 10), &q(149, 100)), q(11, 8));
        assert_eq!(simplest_between(&qi(-3), &qi(5)), qi(0));
        let s = simplest_between(&q(-149, 100), &q(-131, 100));
        assert!(s > q(-149, 100) && s < q(-131, 100));
        assert_eq!(s, q(-11, 8));
    }
}
