mod common;

use common::*;
use proptest::prelude::*;
use surftop_core::levelsets::CurveView;
use surftop_core::planecurve::{component_samples, signature, CurveAnalysis, CurveClassTag, PlaneCurve};
use surftop_core::ring::qi;
use surftop_core::{LinearMap3, MPoly, Var, Q};

fn analyze(s: &str) -> CurveAnalysis<Q> {
    PlaneCurve::new(&poly(s), Var::X, Var::Y).unwrap().analyze().unwrap()
}

/// Components of the cells of an `n`-by-`n` grid whose corners disagree in
/// sign, cells touching along sides or corners.
fn marching_components(f: &MPoly, w: f64, h: f64, n: usize) -> usize {
    let m = n + 1;
    let pos: Vec<bool> = (0..m * m)
        .map(|k| {
            let (i, j) = (k / m, k % m);
            let x = -w + 2.0 * w * i as f64 / n as f64;
            let y = -h + 2.0 * h * j as f64 / n as f64;
            f.eval_f64([x, y, 0.0]) >= 0.0
        })
        .collect();
    let active: Vec<bool> = (0..n * n)
        .map(|k| {
            let (i, j) = (k / n, k % n);
            let c = [pos[i * m + j], pos[(i + 1) * m + j], pos[i * m + j + 1], pos[(i + 1) * m + j + 1]];
            c.iter().any(|&b| b) && c.iter().any(|&b| !b)
        })
        .collect();
    let mut seen = vec![false; n * n];
    let mut count = 0;
    for s in 0..n * n {
        if !active[s] || seen[s] {
            continue;
        }
        count += 1;
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(c) = stack.pop() {
            let (i, j) = ((c / n) as i64, (c % n) as i64);
            for (di, dj) in [(-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1)] {
                let (a, b) = (i + di, j + dj);
                if a < 0 || b < 0 || a >= n as i64 || b >= n as i64 {
                    continue;
                }
                let e = (a as usize) * n + b as usize;
                if active[e] && !seen[e] {
                    seen[e] = true;
                    stack.push(e);
                }
            }
        }
    }
    count
}

const CURVES: [&str; 9] = [
    "x^2+y^2-1",
    "(x^2-1)^2+(y^2-1)^2-723/1250",
    "(x^2-1)^2+(y^2-1)^2-3/4",
    "x^2+y^2+x*y-3/4",
    "y^2-x^2",
    "y^2-x^3-x^2",
    "(x^2+y^2-1)*(x^2+y^2-4)",
    "y^2-x^2*(1-x^2)",
    "(x^2-1)^2+(y^2-1)^2+1/4",
];

#[test]
fn components_match_marching_squares() {
    for s in CURVES {
        let a = analyze(s);
        // the graph lives in the box of the sheared frame x = x_s + shear * y
        let m = LinearMap3::new([[qi(1), a.shear.clone(), qi(0)], [qi(0), qi(1), qi(0)], [qi(0), qi(0), qi(1)]]).unwrap();
        let g = poly(s).apply_linear_map(&m).unwrap();
        let w = a.box_half_width();
        let h = a.graph.vertices.iter().map(|v| v.y.abs()).fold(1.0, f64::max) + 1.0;
        let want = marching_components(&g, w, h, 400);
        assert_eq!(a.graph.components.len(), want, "{s}");
    }
}

#[test]
fn degree_sum_and_delineability() {
    for s in CURVES {
        let a = analyze(s);
        let g = &a.graph;
        let total: usize = (0..g.vertices.len()).map(|v| g.degree(v)).sum();
        assert_eq!(total, 2 * g.edges.len(), "{s}");
        assert!(a.delineable().unwrap(), "{s}");
    }
}

#[test]
fn real_curves_have_samples_on_them() {
    for s in CURVES {
        let a = analyze(s);
        let f = poly(s);
        if a.classify().tag != CurveClassTag::RealCurve {
            continue;
        }
        let samples = component_samples(&a.graph);
        assert!(samples.iter().any(|c| !c.isolated), "{s}");
        for c in samples.iter().filter(|c| !c.isolated) {
            let v = f.eval_f64([c.point[0], c.point[1], 0.0]);
            assert!(v.abs() < 1e-9, "{s}: {v}");
        }
    }
}

#[test]
fn shear_keeps_the_signature() {
    for s in CURVES {
        let base = signature(&analyze(s).graph);
        for k in [1, -2, 3] {
            let m = LinearMap3::new([[qi(1), qi(k), qi(0)], [qi(0), qi(1), qi(0)], [qi(0), qi(0), qi(1)]]).unwrap();
            let g = poly(s).apply_linear_map(&m).unwrap();
            let a = PlaneCurve::new(&g, Var::X, Var::Y).unwrap().analyze().unwrap();
            assert_eq!(signature(&a.graph), base, "{s} sheared by {k}");
        }
    }
}

fn small_curve() -> impl Strategy<Value = MPoly> {
    prop::collection::vec(((0u32..=3, 0u32..=3), -4i64..=4), 2..=6).prop_map(|terms| {
        terms.into_iter().fold(MPoly::zero(), |acc, ((a, b), k)| acc.add(&MPoly::term(qi(k), [a, b, 0])))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_curves_are_consistent(f in small_curve()) {
        prop_assume!(f.degree(Var::Y) >= 1 && f.total_degree() <= 4);
        let a = PlaneCurve::new(&f, Var::X, Var::Y).unwrap().analyze().unwrap();
        let g = &a.graph;
        let total: usize = (0..g.vertices.len()).map(|v| g.degree(v)).sum();
        prop_assert_eq!(total, 2 * g.edges.len());
        prop_assert!(a.delineable().unwrap());
        let mut covered: Vec<usize> = g.components.iter().flatten().copied().collect();
        covered.sort();
        prop_assert_eq!(covered, (0..g.vertices.len()).collect::<Vec<_>>());
    }
}
