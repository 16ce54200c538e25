use std::cmp::Ordering;

use num_traits::{Signed, Zero};
use proptest::prelude::*;
use surftop_core::realroots::{isolate_real_roots, root_bound, sample_plan, RealRoot};
use surftop_core::ring::{q, qi, Q};
use surftop_core::upoly::UPoly;

fn upoly(cs: &[i64]) -> UPoly<Q> {
    UPoly::new(cs.iter().map(|&c| qi(c)).collect())
}

fn sturm_chain(p: &UPoly<Q>) -> Vec<UPoly<Q>> {
    let mut chain = vec![p.clone(), p.derivative()];
    while !chain[chain.len() - 1].is_zero() {
        let n = chain.len();
        let r = chain[n - 2].rem(&chain[n - 1]).neg();
        chain.push(r);
    }
    chain.pop();
    chain
}

fn sign_changes(chain: &[UPoly<Q>], at: &Q) -> usize {
    let signs: Vec<bool> = chain.iter().map(|p| p.eval(at)).filter(|v| !v.is_zero()).map(|v| v.is_positive()).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Distinct real roots in `(a, b]`.
fn sturm_count(p: &UPoly<Q>, a: &Q, b: &Q) -> usize {
    let chain = sturm_chain(p);
    sign_changes(&chain, a) - sign_changes(&chain, b)
}

fn check_intervals(p: &UPoly<Q>, roots: &[RealRoot<Q>]) {
    let b = root_bound(p).unwrap();
    for r in roots {
        assert!(r.lo >= -b.clone() && r.hi <= b, "{r:?} outside {b}");
        if r.is_rational() {
            assert!(p.eval(&r.lo).is_zero());
        } else {
            assert!(r.lo < r.hi);
            let (sl, sh) = (r.defining.sign_at(&r.lo), r.defining.sign_at(&r.hi));
            assert!(sl != Ordering::Equal && sh != Ordering::Equal && sl != sh);
            assert_eq!(sturm_count(p, &r.lo, &r.hi), 1);
        }
    }
    for w in roots.windows(2) {
        assert!(w[0].hi <= w[1].lo);
        assert_eq!(w[0].compare(&w[1]), Ordering::Less);
    }
}

#[test]
fn s1_factor_decimal() {
    let p = UPoly::new(vec![q(-1, 2), qi(0), qi(-2), qi(0), qi(1)]);
    let r = isolate_real_roots(&p).unwrap();
    assert_eq!(r.len(), 2);
    let t = r[0].refined(&q(1, 1_000_000_000));
    let want = q(-1491557867, 1_000_000_000);
    assert!(t.lo - q(1, 1_000_000_000) <= want && want <= t.hi + q(1, 1_000_000_000));
    check_intervals(&p, &r);
}

#[test]
fn sqrt_two_by_bisection() {
    let p = upoly(&[-2, 0, 1]);
    let r = isolate_real_roots(&p).unwrap();
    assert_eq!(r.len(), 2);
    // plain bisection on (1, 2) as the oracle
    let (mut lo, mut hi) = (1.0f64, 2.0f64);
    for _ in 0..60 {
        let m = 0.5 * (lo + hi);
        if m * m < 2.0 {
            lo = m;
        } else {
            hi = m;
        }
    }
    assert!((r[1].to_f64() - lo).abs() < 1e-12);
    assert!((r[0].to_f64() + lo).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn counts_agree_with_sturm(cs in prop::collection::vec(-6i64..=6, 2..=8)) {
        let p = upoly(&cs);
        prop_assume!(p.deg() >= 1);
        let roots = isolate_real_roots(&p).unwrap();
        let b = root_bound(&p).unwrap();
        prop_assert_eq!(roots.len(), sturm_count(&p, &(-b.clone() - qi(1)), &b));
        check_intervals(&p, &roots);
    }

    #[test]
    fn constructed_roots_recovered(
        nums in prop::collection::btree_set(-12i64..=12, 1..=5),
        den in 1i64..=4,
        extra in prop::sample::select(vec![vec![1i64], vec![1, 0, 1], vec![3, 1, 2]]),
    ) {
        let want: Vec<Q> = {
            let mut v: Vec<Q> = nums.iter().map(|&n| q(n, den)).collect();
            v.sort();
            v.dedup();
            v
        };
        let p = want.iter().fold(upoly(&extra), |acc, r| acc.mul(&UPoly::new(vec![-r.clone(), qi(1)])));
        let roots = isolate_real_roots(&p).unwrap();
        prop_assert_eq!(roots.len(), want.len());
        for (r, w) in roots.iter().zip(&want) {
            prop_assert!(r.lo <= *w && *w <= r.hi);
            prop_assert_eq!(r.compare(&RealRoot::rational(w.clone())), Ordering::Equal);
        }
    }

    #[test]
    fn samples_interleave_and_avoid_roots(cs in prop::collection::vec(-6i64..=6, 2..=7), ds in prop::collection::vec(-6i64..=6, 2..=5)) {
        let (p, d) = (upoly(&cs), upoly(&ds));
        prop_assume!(p.deg() >= 1 && d.deg() >= 1);
        let mut roots = isolate_real_roots(&p).unwrap();
        roots.extend(isolate_real_roots(&d).unwrap());
        roots.sort_by(|a, b| a.compare(b));
        roots.dedup_by(|a, b| a.compare(b) == Ordering::Equal);
        let plan = sample_plan(&roots);
        prop_assert_eq!(plan.samples.len(), plan.roots.len() + 1);
        for s in &plan.samples {
            prop_assert!(!p.eval(s).is_zero() && !d.eval(s).is_zero());
        }
        for (i, r) in plan.roots.iter().enumerate() {
            let below = RealRoot::rational(plan.samples[i].clone());
            let above = RealRoot::rational(plan.samples[i + 1].clone());
            prop_assert_eq!(below.compare(r), Ordering::Less);
            prop_assert_eq!(r.compare(&above), Ordering::Less);
        }
    }

    #[test]
    fn compare_matches_decimals(a in prop::collection::vec(-5i64..=5, 3..=5), b in prop::collection::vec(-5i64..=5, 3..=5)) {
        let (pa, pb) = (upoly(&a), upoly(&b));
        prop_assume!(pa.deg() >= 1 && pb.deg() >= 1);
        let eps = q(1, 1_000_000_000_000);
        for x in isolate_real_roots(&pa).unwrap() {
            for y in isolate_real_roots(&pb).unwrap() {
                let (xr, yr) = (x.refined(&eps), y.refined(&eps));
                let (xf, yf) = (xr.to_f64(), yr.to_f64());
                match x.compare(&y) {
                    Ordering::Less => prop_assert!(xr.lo < yr.hi && xf <= yf + 1e-12),
                    Ordering::Greater => prop_assert!(yr.lo < xr.hi && yf <= xf + 1e-12),
                    Ordering::Equal => prop_assert!((xf - yf).abs() < 1e-12),
                }
            }
        }
    }
}
