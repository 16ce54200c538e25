//! One line per acceptance criterion; exits non-zero if any fails.

use std::cmp::Ordering;
use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use surftop::{error_json, render_json, run, Command, Verb};
use surftop_core::connect::{analyze_connectivity, component_seeds, follow, working_box_diagonal, ConnectConfig, ConnectReport, Direction, Field, PathEnd, PathParams};
use surftop_core::levelsets::{analyze_axis, load_surface, StratumKind};
use surftop_core::planecurve::PlaneCurve;
use surftop_core::realroots::{isolate_real_roots, root_bound, RealRoot};
use surftop_core::ring::{q, qi, Q};
use surftop_core::surfprops::{decide_compactness, decide_reality, normalize_for_all_axes, plotting_box, RealPart};
use surftop_core::upoly::UPoly;
use surftop_core::{parse_polynomial, LinearMap3, MPoly, Var};

const S1: &str = "(x^2-1)^2+(y^2-1)^2+(z^2-1)^2-3/2";
const S2: &str = "(x^2+y^2-1)^2+z^2";
const S5: &str = "x^2+y^2+z^2+2*x*y*z-1";
const S6: &str = "(x^2-1)^2+(y^2-1)^2+(z^2-1)^2-3/4";
const SPHERE: &str = "x^2+y^2+z^2-1";
const WHITNEY: &str = "x^2-y^2*z";
const EMPTY: &str = "x^2+y^2+z^2+1";
const FIXTURES: [&str; 7] = [S1, S2, S5, S6, SPHERE, WHITNEY, EMPTY];

type Outcome = Result<String, String>;

fn poly(s: &str) -> MPoly {
    parse_polynomial(s).unwrap()
}

macro_rules! ensure {
    ($c:expr, $($m:tt)+) => {
        if !$c {
            return Err(format!($($m)+));
        }
    };
}

fn within(limit: Duration, t: Instant, what: &str) -> Result<f64, String> {
    let s = t.elapsed().as_secs_f64();
    ensure!(t.elapsed() < limit, "{what} took {s:.1} s, limit {} s", limit.as_secs());
    Ok(s)
}

fn c1() -> Outcome {
    let want = [-1.491557867, -1.306562965, -0.5411961001, 0.5411961001, 1.306562965, 1.491557867];
    let t = Instant::now();
    let (_, _, st) = analyze_axis(&poly(S1), Var::Z).map_err(|e| e.to_string())?;
    let got: Vec<f64> = st.criticals.values.iter().map(|r| r.refined(&q(1, 1 << 40)).to_f64()).collect();
    let secs = within(Duration::from_secs(10), t, "S1 critical set")?;
    ensure!(got.len() == 6, "expected 6 values, got {got:?}");
    let err = got.iter().zip(want).map(|(g, w)| (g - w).abs()).fold(0.0, f64::max);
    ensure!(err < 1e-6, "max deviation {err:e}");
    Ok(format!("6 values, max deviation {err:.1e}, {secs:.2} s"))
}

fn c2() -> Outcome {
    let s = load_surface(&poly(S2), Var::Z).map_err(|e| e.to_string())?;
    let (_, _, st) = analyze_axis(&poly(S2), Var::Z).map_err(|e| e.to_string())?;
    let v = &st.criticals.values;
    ensure!(v.len() == 1 && v[0].compare(&RealRoot::rational(qi(0))) == Ordering::Equal, "critical set {v:?}");
    let r = decide_reality(&s).map_err(|e| e.to_string())?;
    ensure!(!r.is_real, "reported real");
    ensure!(r.real_part == RealPart::SpaceCurve, "real part {:?}", r.real_part);
    let circle = r.support.iter().find(|l| l.level.exact.as_deref() == Some("0")).ok_or("no support at z = 0")?;
    ensure!(!circle.points.is_empty(), "no witness points");
    for p in &circle.points {
        ensure!((p[0].hypot(p[1]) - 1.0).abs() < 1e-9 && p[2] == 0.0, "{p:?} is off the unit circle");
    }
    Ok(format!("A_z = {{0}}, not real, space curve, {} points on the circle z = 0", circle.points.len()))
}

fn c3() -> Outcome {
    let real = |s: &str| decide_reality(&load_surface(&poly(s), Var::Z).unwrap()).unwrap();
    let r = real(S1);
    ensure!(r.is_real && r.real_part == RealPart::TwoDimensional, "S1: {:?}", r.real_part);
    let w = r.witness.as_ref().ok_or("S1: no witness")?;
    ensure!(-1.4916 < w.level.decimal && w.level.decimal < -1.3066, "S1 witness at z = {}", w.level.decimal);
    ensure!(poly(S1).eval_f64(w.point).abs() < 1e-9, "S1 witness off the surface");
    let r = real(EMPTY);
    ensure!(r.real_part == RealPart::Empty, "x^2+y^2+z^2+1: {:?}", r.real_part);
    let r = real("x^2+y^2+z^2");
    ensure!(r.real_part == RealPart::FinitePoints, "x^2+y^2+z^2: {:?}", r.real_part);
    let pts: Vec<[f64; 3]> = r.support.iter().flat_map(|l| l.points.clone()).collect();
    ensure!(pts.len() == 1 && pts[0].iter().all(|c| c.abs() < 1e-12), "points {pts:?}");
    let r = real("x^2+y^2");
    ensure!(r.real_part == RealPart::SpaceCurve, "x^2+y^2: {:?}", r.real_part);
    Ok(format!("S1 witness z = {:.5}; empty; {{(0,0,0)}}; space curve", w.level.decimal))
}

fn c4() -> Outcome {
    let t = normalize_for_all_axes(&poly(S1), 0).map_err(|e| e.to_string())?;
    let c = decide_compactness(&t).map_err(|e| e.to_string())?;
    ensure!(c.is_compact, "S1 not compact");
    ensure!(c.per_axis.len() == 3 && c.per_axis.iter().all(|a| a.low_empty && a.high_empty), "{:?}", c.per_axis);
    let bounds: Vec<&str> = c.per_axis.iter().map(|a| a.bound.as_str()).collect();
    let bounds = bounds.join(", ");
    let t = normalize_for_all_axes(&poly(WHITNEY), 0).map_err(|e| e.to_string())?;
    let w = decide_compactness(&t).map_err(|e| e.to_string())?;
    ensure!(!w.is_compact, "x^2-y^2*z reported compact");
    Ok(format!("S1 compact, empty slices at +-(k+1) with k = {bounds}; x^2-y^2*z not compact"))
}

fn c5() -> Outcome {
    let mut widths = Vec::new();
    for (s, half) in [(S5, qi(2)), (S1, q(3, 2))] {
        let t = normalize_for_all_axes(&poly(s), 0).map_err(|e| e.to_string())?;
        ensure!(t.map.is_identity(), "{s}: box in a transformed frame");
        let b = plotting_box(&t, false).map_err(|e| e.to_string())?;
        for iv in &b.intervals {
            ensure!(iv.lo_q <= -half.clone() && half <= iv.hi_q, "{s}: {} = [{}, {}]", iv.axis, iv.lo, iv.hi);
            ensure!(iv.endpoints_noncritical, "{s}: critical endpoint on {}", iv.axis);
        }
        widths.push(format!("[{}, {}]^3", b.intervals[0].lo, b.intervals[0].hi));
    }
    Ok(format!("S5 box {}, S1 box {}, endpoints non-critical", widths[0], widths[1]))
}

fn connectivity(s: &str) -> (ConnectReport, f64) {
    let t = Instant::now();
    let r = analyze_connectivity(&load_surface(&poly(s), Var::Z).unwrap(), &ConnectConfig::default()).unwrap();
    (r, t.elapsed().as_secs_f64())
}

fn c6(runs: &[(&str, usize, &ConnectReport, f64)]) -> Outcome {
    let mut parts = Vec::new();
    for (name, want, r, secs) in runs {
        ensure!(r.components == *want, "{name}: {} components, expected {want}", r.components);
        ensure!(*secs < 60.0, "{name} took {secs:.1} s");
        parts.push(format!("{name} {} in {secs:.1} s", r.components));
    }
    Ok(parts.join(", "))
}

fn det(mut m: Vec<Vec<Q>>) -> Q {
    let n = m.len();
    let mut d = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else { return Q::zero() };
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        d *= m[c][c].clone();
        for r in c + 1..n {
            let f = m[r][c].clone() / m[c][c].clone();
            for k in c..n {
                let t = m[c][k].clone() * f.clone();
                m[r][k] -= t;
            }
        }
    }
    d
}

/// Sylvester determinant of two coefficient lists, lowest degree first.
fn sylvester(a: &[Q], b: &[Q]) -> Q {
    let (m, n) = (a.len() - 1, b.len() - 1);
    let mut rows = Vec::new();
    for (rep, src) in [(n, a), (m, b)] {
        for i in 0..rep {
            let mut r = vec![Q::zero(); m + n];
            for (j, c) in src.iter().rev().enumerate() {
                r[i + j] = c.clone();
            }
            rows.push(r);
        }
    }
    det(rows)
}

fn random_bivariate(rng: &mut ChaCha8Rng) -> MPoly {
    (0..rng.gen_range(2..=6)).fold(MPoly::zero(), |acc, _| {
        let e = [rng.gen_range(0..=2), rng.gen_range(0..=3), 0];
        acc.add(&MPoly::term(qi(rng.gen_range(-4..=4)), e))
    })
}

fn coeffs_at(p: &MPoly, x0: &Q) -> Vec<Q> {
    let u = p.substitute(Var::X, x0);
    let mut c = vec![Q::zero(); u.degree(Var::Y) as usize + 1];
    for (m, k) in u.terms() {
        c[m.0[Var::Y.idx()] as usize] += k.clone();
    }
    c
}

fn resultant_oracle(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let mut done = 0;
    while done < 200 {
        let (a, b) = (random_bivariate(rng), random_bivariate(rng));
        let x0 = qi(rng.gen_range(-5..=5));
        let (ca, cb) = (coeffs_at(&a, &x0), coeffs_at(&b, &x0));
        let full = |c: &[Q], p: &MPoly| p.degree(Var::Y) >= 1 && c.len() as u32 == p.degree(Var::Y) + 1 && !c.last().unwrap().is_zero();
        if !full(&ca, &a) || !full(&cb, &b) {
            continue;
        }
        let r = a.resultant(&b, Var::Y).map_err(|e| e.to_string())?;
        ensure!(r.eval(&[x0.clone(), qi(0), qi(0)]) == sylvester(&ca, &cb), "Res_y({a}, {b}) at x = {x0}");
        done += 1;
    }
    Ok(done)
}

fn sturm_count(p: &UPoly<Q>, a: &Q, b: &Q) -> usize {
    let mut chain = vec![p.clone(), p.derivative()];
    while !chain[chain.len() - 1].is_zero() {
        let n = chain.len();
        let r = chain[n - 2].rem(&chain[n - 1]).neg();
        chain.push(r);
    }
    chain.pop();
    let changes = |x: &Q| {
        let s: Vec<bool> = chain.iter().map(|c| c.eval(x)).filter(|v| !v.is_zero()).map(|v| v.is_positive()).collect();
        s.windows(2).filter(|w| w[0] != w[1]).count()
    };
    changes(a) - changes(b)
}

fn root_count_oracle(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let mut done = 0;
    while done < 200 {
        let cs: Vec<Q> = (0..rng.gen_range(2..=9)).map(|_| qi(rng.gen_range(-6..=6))).collect();
        let p = UPoly::new(cs);
        if p.deg() < 1 {
            continue;
        }
        let b = root_bound(&p).map_err(|e| e.to_string())?;
        let n = isolate_real_roots(&p).map_err(|e| e.to_string())?.len();
        ensure!(n == sturm_count(&p, &(-b.clone() - qi(1)), &b), "root count of {p:?}");
        done += 1;
    }
    Ok(done)
}

fn marching_components(f: &MPoly, w: f64, h: f64, n: usize) -> usize {
    let m = n + 1;
    let pos: Vec<bool> = (0..m * m)
        .map(|k| {
            let (i, j) = (k / m, k % m);
            f.eval_f64([-w + 2.0 * w * i as f64 / n as f64, -h + 2.0 * h * j as f64 / n as f64, 0.0]) >= 0.0
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
            for di in -1..=1 {
                for dj in -1..=1 {
                    let (a, b) = (i + di, j + dj);
                    if a < 0 || b < 0 || a >= n as i64 || b >= n as i64 {
                        continue;
                    }
                    let e = a as usize * n + b as usize;
                    if active[e] && !seen[e] {
                        seen[e] = true;
                        stack.push(e);
                    }
                }
            }
        }
    }
    count
}

/// Delineability on every stratum; marching squares on every sampled level
/// (critical levels are irrational or tangential, where a sign grid is blind).
fn curve_oracles() -> Result<(usize, usize), String> {
    let (mut strata, mut grids) = (0, 0);
    for s in FIXTURES {
        let (surface, _, st) = analyze_axis(&poly(s), Var::Z).map_err(|e| e.to_string())?;
        for (i, stratum) in st.strata.iter().enumerate() {
            ensure!(stratum.curve.delineable().map_err(|e| e.to_string())?, "{s}: stratum {i} not delineable");
            strata += 1;
            if stratum.kind != StratumKind::OpenInterval {
                continue;
            }
            let level = stratum.level.exact.as_rational().ok_or("irrational sample")?;
            let a = PlaneCurve::new(&surface.f.substitute(Var::Z, &level), Var::X, Var::Y)
                .and_then(|c| c.analyze())
                .map_err(|e| e.to_string())?;
            let m = LinearMap3::new([[qi(1), a.shear.clone(), qi(0)], [qi(0), qi(1), qi(0)], [qi(0), qi(0), qi(1)]]).unwrap();
            let g = surface.f.substitute(Var::Z, &level).apply_linear_map(&m).map_err(|e| e.to_string())?;
            let w = a.bound;
            let h = a.graph.vertices.iter().map(|v| v.y.abs()).fold(1.0, f64::max) + 1.0;
            let want = marching_components(&g, w, h, 400);
            ensure!(stratum.signature.component_count == want, "{s} at z = {level}: {} components, grid {want}", stratum.signature.component_count);
            grids += 1;
        }
    }
    Ok((strata, grids))
}

/// Ends of paths from two different seeds on each component.
fn seed_independence(r: &ConnectReport, name: &str) -> Result<usize, String> {
    let cfg = ConnectConfig::default();
    let f = Field::new(&r.surface.f);
    let diag = working_box_diagonal(&r.surface).map_err(|e| e.to_string())?;
    let strata = &r.stratification.strata;
    let mut pairs = 0;
    for (i, st) in strata.iter().enumerate() {
        if st.kind != StratumKind::OpenInterval {
            continue;
        }
        let seeds = component_seeds(st.curve.as_ref(), st.level.approx, &f, cfg.correction_tol, 2);
        for (j, dir) in [(i.checked_sub(1), Direction::Descend), (Some(i + 1).filter(|&j| j < strata.len()), Direction::Ascend)] {
            let Some(j) = j else { continue };
            let target = &strata[j];
            let level = target.level.approx;
            let g = target.curve.graph();
            let sing: Vec<[f64; 3]> = target.curve.singular_points().iter().map(|p| [p[0], p[1], level]).collect();
            let comp: Vec<usize> = target.curve.singular_vertices().iter().map(|&v| g.component_of(v)).collect();
            let prm = PathParams::resolve(&cfg, diag, (level - st.level.approx).abs());
            for pair in seeds.iter().filter(|c| c.len() == 2) {
                let mut ends = Vec::new();
                for &p in pair {
                    let path = follow(&f, p, level, dir, &sing, &prm).map_err(|e| e.to_string())?;
                    ends.push(match path.end {
                        PathEnd::Snapped { index } => Some(comp[index]),
                        PathEnd::Reached => target.curve.locate(path.point[0], path.point[1]),
                    });
                }
                ensure!(ends[0].is_some() && ends[0] == ends[1], "{name}: stratum {i} towards {j} ends {ends:?}");
                pairs += 1;
            }
        }
    }
    ensure!(pairs > 0, "{name}: no component had two seeds");
    Ok(pairs)
}

fn c7(runs: &[(&str, usize, &ConnectReport, f64)]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let res = resultant_oracle(&mut rng)?;
    let roots = root_count_oracle(&mut rng)?;
    let (strata, grids) = curve_oracles()?;
    let mut paths = 0;
    let mut worst: f64 = 0.0;
    for (name, _, r, _) in runs {
        for t in &r.chain_graph.traces {
            if let Some(p) = &t.path {
                ensure!(p.max_residual <= 1e-10, "{name}: residual {:e}", p.max_residual);
                worst = worst.max(p.max_residual);
                paths += 1;
            }
        }
    }
    let pairs: usize = runs.iter().filter(|r| r.0 != "sphere").map(|r| seed_independence(r.2, r.0)).sum::<Result<usize, String>>()?;
    Ok(format!(
        "{res} resultants, {roots} root counts, {strata} strata delineable, {grids} grids, {paths} paths with residual <= {worst:.1e}, {pairs} seed pairs agree"
    ))
}

fn c8() -> Outcome {
    for s in FIXTURES {
        let once = |seed: u64| {
            let mut cmd = Command::inline(Verb::All, s);
            cmd.settings.seed = seed;
            // failures are reports too
            render_json(&run(&cmd).map(|o| o.report).unwrap_or_else(|e| error_json(&e)))
        };
        for seed in [0, 3] {
            ensure!(once(seed) == once(seed), "{s}: reports differ with seed {seed}");
        }
    }
    Ok(format!("{} fixtures, two seeds each, byte-identical reruns", FIXTURES.len()))
}

fn report(n: usize, name: &str, f: impl FnOnce() -> Outcome) -> bool {
    let t = Instant::now();
    let hook = panic::take_hook();
    panic::set_hook(Box::new(|_| {}));
    let r = panic::catch_unwind(AssertUnwindSafe(f));
    panic::set_hook(hook);
    let r = r.unwrap_or_else(|p| {
        Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
    });
    let secs = t.elapsed().as_secs_f64();
    match &r {
        Ok(msg) => println!("criterion {n} PASS  {name}: {msg} [{secs:.1} s]"),
        Err(msg) => println!("criterion {n} FAIL  {name}: {msg} [{secs:.1} s]"),
    }
    r.is_ok()
}

fn main() {
    let mut ok = true;
    ok &= report(1, "critical set of S1", c1);
    ok &= report(2, "critical set and reality of S2", c2);
    ok &= report(3, "reality fixtures", c3);
    ok &= report(4, "compactness", c4);
    ok &= report(5, "plotting box", c5);
    let (s5, t5) = connectivity(S5);
    let (s6, t6) = connectivity(S6);
    let (sp, ts) = connectivity(SPHERE);
    let runs = [("S5", 1, &s5, t5), ("S6", 8, &s6, t6), ("sphere", 1, &sp, ts)];
    ok &= report(6, "connectivity", || c6(&runs));
    ok &= report(7, "property suite", || c7(&runs));
    ok &= report(8, "determinism", c8);
    if !ok {
        std::process::exit(1);
    }
}
