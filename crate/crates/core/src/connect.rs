//! Connected components of a surface by joining level-curve components.
//!
//! Each component of a non-critical level curve is carried down and up to
//! the neighbouring critical levels along a curve on the surface, obtained
//! by integrating a tangent field and projecting back onto the level curve
//! after every step. The reached components are linked; the connected
//! chains of links are the components of the surface.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::levelsets::{
    compute_mr, critical_bound, critical_level_set, load_surface, stratify, CriticalLevelSet, LevelStratification,
    StratumKind, SurfaceInput,
};
use crate::mpoly::{LinearMap3, MPoly, Var};
use crate::numeric;
use crate::planecurve::{bipoly_from_mpoly, component_samples, content, CurveAnalysis, PlaneCurve};
use crate::realroots::{isolate_real_roots, RealRoot};
use crate::ring::{q_to_f64, RealField, Q};
use crate::algebraic::{Ext, ExtCtx};

const TRANSFORM_ATTEMPTS: usize = 16;
/// Reseed walks stop at a local maximum of `|F_x| / |(F_x, F_y)|` above this.
const RESEED_RATIO: f64 = 0.25;
const TRACE_POINTS: usize = 64;
const SEED_RATIO: f64 = 0.1;

#[derive(Clone, Debug, Serialize)]
pub struct ConnectConfig {
    /// Snap radius around singular points; `None` means `1e-4` times the
    /// plotting-box diagonal.
    pub epsilon_snap: Option<f64>,
    /// Guard on `|F_x|`, relative to `|grad F|`.
    pub epsilon_fx: f64,
    /// Integration step in `z`; `None` means `1/256` of the interval.
    pub rk4_step: Option<f64>,
    pub max_steps: usize,
    pub correction_tol: f64,
    pub max_reseeds: usize,
    pub seed: u64,
}

impl Default for ConnectConfig {
    fn default() -> Self {
        ConnectConfig {
            epsilon_snap: None,
            epsilon_fx: 1e-6,
            rk4_step: None,
            max_steps: 1_000_000,
            correction_tol: 1e-10,
            max_reseeds: 8,
            seed: 0,
        }
    }
}

/// `F` and its gradient compiled for floating-point evaluation.
#[derive(Clone, Debug)]
pub struct Field {
    parts: [Vec<(f64, [i32; 3])>; 4],
}

fn compile(p: &MPoly) -> Vec<(f64, [i32; 3])> {
    p.terms().map(|(m, c)| (q_to_f64(c), [m.0[0] as i32, m.0[1] as i32, m.0[2] as i32])).collect()
}

fn eval_terms(t: &[(f64, [i32; 3])], p: [f64; 3]) -> f64 {
    t.iter().map(|(c, e)| c * p[0].powi(e[0]) * p[1].powi(e[1]) * p[2].powi(e[2])).sum()
}

/// Coefficients of `(a + t b)^n` in `t`.
fn binomial_power(a: f64, b: f64, n: i32) -> Vec<f64> {
    let mut out = vec![1.0];
    for _ in 0..n {
        let mut next = vec![0.0; out.len() + 1];
        for (i, c) in out.iter().enumerate() {
            next[i] += c * a;
            next[i + 1] += c * b;
        }
        out = next;
    }
    out
}

impl Field {
    pub fn new(f: &MPoly) -> Self {
        Field {
            parts: [
                compile(f),
                compile(&f.differentiate(Var::X)),
                compile(&f.differentiate(Var::Y)),
                compile(&f.differentiate(Var::Z)),
            ],
        }
    }

    pub fn value(&self, p: [f64; 3]) -> f64 {
        eval_terms(&self.parts[0], p)
    }

    pub fn grad(&self, p: [f64; 3]) -> [f64; 3] {
        [eval_terms(&self.parts[1], p), eval_terms(&self.parts[2], p), eval_terms(&self.parts[3], p)]
    }

    /// `|F_x| / |grad F|`, zero at critical points.
    pub fn fx_ratio(&self, p: [f64; 3]) -> f64 {
        let g = self.grad(p);
        let n = norm(g);
        if n == 0.0 {
            0.0
        } else {
            g[0].abs() / n
        }
    }

    /// `|F_x| / |(F_x, F_y)|`: where the level-curve tangent sits between
    /// horizontal and vertical, regardless of how steep the surface is.
    pub fn fx_share(&self, p: [f64; 3]) -> f64 {
        let g = self.grad(p);
        let n = g[0].hypot(g[1]);
        if n == 0.0 {
            0.0
        } else {
            g[0].abs() / n
        }
    }

    /// `F(p + t (d, 0))` as a polynomial in `t`.
    fn along(&self, p: [f64; 3], d: [f64; 2]) -> Vec<f64> {
        let mut out: Vec<f64> = Vec::new();
        for (c, e) in &self.parts[0] {
            let k = c * p[2].powi(e[2]);
            let px = binomial_power(p[0], d[0], e[0]);
            let py = binomial_power(p[1], d[1], e[1]);
            if out.len() < px.len() + py.len() - 1 {
                out.resize(px.len() + py.len() - 1, 0.0);
            }
            for (i, a) in px.iter().enumerate() {
                for (j, b) in py.iter().enumerate() {
                    out[i + j] += k * a * b;
                }
            }
        }
        out
    }
}

fn norm(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

fn dist(a: [f64; 3], b: [f64; 3]) -> f64 {
    norm([a[0] - b[0], a[1] - b[1], a[2] - b[2]])
}

/// Moves `p` within its level plane onto the level curve, along the line
/// through `p` in the direction `(F_x, F_y)`; the intersection nearest to
/// `p` is taken.
pub fn correct(field: &Field, p: [f64; 3], tol: f64) -> Result<[f64; 3]> {
    let g = field.grad(p);
    let gn = g[0].hypot(g[1]);
    if gn == 0.0 || !gn.is_finite() {
        return Err(Error::NoIntersection);
    }
    let d = [g[0] / gn, g[1] / gn];
    let roots = numeric::real_roots(&field.along(p, d), 1e-6);
    let mut t = roots.into_iter().min_by(|a, b| a.abs().total_cmp(&b.abs())).ok_or(Error::NoIntersection)?;
    // polish against F itself
    for _ in 0..4 {
        let q = [p[0] + t * d[0], p[1] + t * d[1], p[2]];
        let gq = field.grad(q);
        let slope = gq[0] * d[0] + gq[1] * d[1];
        let v = field.value(q);
        if slope == 0.0 || v == 0.0 {
            break;
        }
        let step = v / slope;
        if !step.is_finite() || step.abs() > 1e-3 * (1.0 + t.abs()) {
            break;
        }
        t -= step;
    }
    let q = [p[0] + t * d[0], p[1] + t * d[1], p[2]];
    if field.value(q).abs() > tol {
        return Err(Error::NoIntersection);
    }
    Ok(q)
}

/// Index of the singular point within `eps` of `p`: the nearest one, ties
/// broken by the lexicographic order of coordinates.
pub fn snap_singular(p: [f64; 3], singulars: &[[f64; 3]], eps: f64) -> Option<usize> {
    singulars
        .iter()
        .enumerate()
        .map(|(i, k)| (dist(p, *k), i))
        .filter(|(d, _)| *d < eps)
        .min_by(|a, b| {
            a.0.total_cmp(&b.0).then_with(|| {
                let (ka, kb) = (singulars[a.1], singulars[b.1]);
                ka[0].total_cmp(&kb[0]).then(ka[1].total_cmp(&kb[1])).then(ka[2].total_cmp(&kb[2]))
            })
        })
        .map(|(_, i)| i)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Descend,
    Ascend,
}

/// Integration parameters after defaults are resolved against a box.
#[derive(Clone, Debug)]
pub struct PathParams {
    pub epsilon_snap: f64,
    pub epsilon_fx: f64,
    pub step: f64,
    pub max_steps: usize,
    pub tol: f64,
    pub max_reseeds: usize,
    /// Longest accepted step; keeps a step from hopping to another branch
    /// where the curve turns vertical.
    pub max_move: f64,
    /// Horizontal distance from the axis past which a path is walked back
    /// along its level curve.
    pub escape_radius: f64,
    pub flow: Flow,
}

/// Horizontal part of the path field. `Prescribed` is the tangent system
/// `x' = -F_y +- F_z/F_x, y' = F_x`; `Normal` moves across the level curves
/// only, `(x', y') = -+F_z (F_x, F_y) / (F_x^2 + F_y^2)`, and has no drift
/// along them. Both are tangent to the surface with unit vertical speed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Flow {
    Prescribed,
    Normal,
}

impl PathParams {
    pub fn resolve(cfg: &ConnectConfig, box_diagonal: f64, interval: f64) -> Self {
        PathParams {
            epsilon_snap: cfg.epsilon_snap.unwrap_or(1e-4 * box_diagonal),
            epsilon_fx: cfg.epsilon_fx,
            step: cfg.rk4_step.unwrap_or(interval / 256.0),
            max_steps: cfg.max_steps,
            tol: cfg.correction_tol,
            max_reseeds: cfg.max_reseeds,
            max_move: box_diagonal / 200.0,
            escape_radius: box_diagonal / 2.0,
            flow: Flow::Prescribed,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum PathEnd {
    /// The level `target_z` was reached at a regular point of its curve.
    Reached,
    /// Stopped within the snap radius of the given singular point.
    Snapped { index: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct PathResult {
    pub end: PathEnd,
    pub point: [f64; 3],
    pub steps: usize,
    pub reseeds: usize,
    pub max_residual: f64,
    pub flow: Flow,
    /// Accepted points, thinned.
    pub trace: Vec<[f64; 3]>,
}

/// Right-hand side of the path field; `None` where its guard trips
/// (`F_x`, or the horizontal gradient for `Normal`, small against `grad F`).
fn velocity(field: &Field, p: [f64; 3], dir: Direction, eps_fx: f64, flow: Flow) -> Option<[f64; 3]> {
    let g = field.grad(p);
    let (sigma, zdot) = match dir {
        Direction::Descend => (1.0, -1.0),
        Direction::Ascend => (-1.0, 1.0),
    };
    match flow {
        Flow::Prescribed => {
            if !(g[0].abs() > eps_fx * norm(g)) {
                return None;
            }
            Some([-g[1] + sigma * g[2] / g[0], g[0], zdot])
        }
        Flow::Normal => {
            let h = g[0] * g[0] + g[1] * g[1];
            if !(h.sqrt() > eps_fx * norm(g)) {
                return None;
            }
            Some([-zdot * g[2] * g[0] / h, -zdot * g[2] * g[1] / h, zdot])
        }
    }
}

fn rk4(field: &Field, p: [f64; 3], h: f64, dir: Direction, eps_fx: f64, flow: Flow) -> Option<[f64; 3]> {
    let add = |a: [f64; 3], k: [f64; 3], s: f64| [a[0] + s * k[0], a[1] + s * k[1], a[2] + s * k[2]];
    let k1 = velocity(field, p, dir, eps_fx, flow)?;
    let k2 = velocity(field, add(p, k1, h / 2.0), dir, eps_fx, flow)?;
    let k3 = velocity(field, add(p, k2, h / 2.0), dir, eps_fx, flow)?;
    let k4 = velocity(field, add(p, k3, h), dir, eps_fx, flow)?;
    let q: [f64; 3] = std::array::from_fn(|i| p[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]));
    q.iter().all(|v| v.is_finite()).then_some(q)
}

/// Walks along the level curve through `p` to a point where `|F_x|` is
/// locally maximal relative to the horizontal gradient; tries the preferred side first.
fn reseed(field: &Field, p: [f64; 3], prefer: f64, walk: f64, tol: f64) -> Option<[f64; 3]> {
    for sign in [prefer, -prefer] {
        let mut q = p;
        let mut ratio = field.fx_share(q);
        let mut s = walk;
        for _ in 0..2000 {
            let g = field.grad(q);
            let gn = g[0].hypot(g[1]);
            if gn == 0.0 {
                break;
            }
            let cand = [q[0] - sign * s * g[1] / gn, q[1] + sign * s * g[0] / gn, q[2]];
            match correct(field, cand, tol) {
                Ok(c) if dist(c, cand) < 0.5 * s => {
                    let r = field.fx_share(c);
                    if r < ratio && ratio >= RESEED_RATIO {
                        return Some(q);
                    }
                    q = c;
                    ratio = r;
                    if ratio >= 0.99 {
                        return Some(q);
                    }
                }
                _ => {
                    s /= 2.0;
                    if s < walk * 1e-6 {
                        break;
                    }
                }
            }
        }
    }
    None
}

/// Walks along the level curve through `p` towards the axis until the
/// distance to it stops decreasing or drops below `radius`.
fn walk_inward(field: &Field, p: [f64; 3], radius: f64, walk: f64, tol: f64) -> Option<[f64; 3]> {
    let mut q = p;
    let mut s = walk;
    let mut heading: Option<[f64; 2]> = None;
    for _ in 0..100_000 {
        let r = q[0].hypot(q[1]);
        if r < radius {
            break;
        }
        let g = field.grad(q);
        let gn = g[0].hypot(g[1]);
        if gn == 0.0 || !gn.is_finite() {
            return None;
        }
        let mut t = [-g[1] / gn, g[0] / gn];
        let flip = match heading {
            Some(h) => t[0] * h[0] + t[1] * h[1] < 0.0,
            None => t[0] * q[0] + t[1] * q[1] > 0.0,
        };
        if flip {
            t = [-t[0], -t[1]];
        }
        let step = s.max(r * 1e-2);
        let cand = [q[0] + step * t[0], q[1] + step * t[1], q[2]];
        match correct(field, cand, tol) {
            Ok(c) if dist(c, cand) < 0.5 * step => {
                if c[0].hypot(c[1]) >= r {
                    break;
                }
                heading = Some(t);
                q = c;
                s = walk;
            }
            _ => {
                s /= 2.0;
                if s < walk * 1e-6 {
                    break;
                }
            }
        }
    }
    (q != p).then_some(q)
}

/// Follows the tangent system from `start` to the level `target_z`.
/// Integrates from `start` to the level `target_z` with the prescribed
/// system; a path it cannot finish (`F_x` vanishing for good, or the step
/// budget) is retried from the start with the `Normal` field.
pub fn follow(
    field: &Field,
    start: [f64; 3],
    target_z: f64,
    dir: Direction,
    singulars: &[[f64; 3]],
    prm: &PathParams,
) -> Result<PathResult> {
    match follow_flow(field, start, target_z, dir, singulars, prm) {
        Err(Error::FxVanished(_) | Error::StepBudgetExceeded(_)) if prm.flow == Flow::Prescribed => {
            let normal = PathParams { flow: Flow::Normal, ..prm.clone() };
            follow_flow(field, start, target_z, dir, singulars, &normal)
        }
        r => r,
    }
}

fn follow_flow(
    field: &Field,
    start: [f64; 3],
    target_z: f64,
    dir: Direction,
    singulars: &[[f64; 3]],
    prm: &PathParams,
) -> Result<PathResult> {
    let zsign = match dir {
        Direction::Descend => -1.0,
        Direction::Ascend => 1.0,
    };
    assert!((target_z - start[2]) * zsign >= 0.0, "target level on the wrong side");
    let mut p = correct(field, start, prm.tol)?;
    let walk = 10.0 * prm.epsilon_snap;
    let mut all = vec![p];
    if p[0].hypot(p[1]) > prm.escape_radius {
        // any point of the start's level-curve component will do
        if let Some(w) = walk_inward(field, p, prm.escape_radius / 4.0, walk, prm.tol) {
            p = w;
            all.push(p);
        }
    }
    let mut dt = prm.step;
    let mut steps = 0;
    let mut reseeds = 0;
    // reseeds since the remaining distance last shrank by a tenth
    let mut stuck = 0;
    let mut progress_mark = (target_z - p[2]).abs();
    let mut max_residual = field.value(p).abs();
    let mut escape = prm.escape_radius.max(2.0 * p[0].hypot(p[1]));
    let finish = |end: PathEnd, point: [f64; 3], all: Vec<[f64; 3]>, steps, reseeds, max_residual| {
        let stride = all.len().div_ceil(TRACE_POINTS).max(1);
        let mut trace: Vec<[f64; 3]> = all.iter().step_by(stride).copied().collect();
        if trace.last() != all.last() {
            trace.push(*all.last().unwrap());
        }
        Ok(PathResult { end, point, steps, reseeds, max_residual, flow: prm.flow, trace })
    };
    // stalled within the snap radius of the target level: the point over it
    let settle = |_: Error, p: [f64; 3], mut all: Vec<[f64; 3]>, steps, reseeds, max_residual| {
        let q = [p[0], p[1], target_z];
        all.push(q);
        finish(PathEnd::Reached, q, all, steps, reseeds, max_residual)
    };
    loop {
        if let Some(index) = snap_singular(p, singulars, prm.epsilon_snap) {
            let k = singulars[index];
            all.push(k);
            return finish(PathEnd::Snapped { index }, k, all, steps, reseeds, max_residual);
        }
        let remaining = (target_z - p[2]) * zsign;
        if remaining <= 0.0 {
            return finish(PathEnd::Reached, p, all, steps, reseeds, max_residual);
        }
        if steps >= prm.max_steps {
            return Err(Error::StepBudgetExceeded(steps));
        }
        steps += 1;
        let last = dt >= remaining;
        let h = if last { remaining } else { dt };
        let stalled = |dt: f64| dt < prm.step * 1e-9 || dt < remaining * 1e-6;
        if remaining < 0.9 * progress_mark {
            progress_mark = remaining;
            stuck = 0;
        }
        let mut try_reseed = |p: [f64; 3]| -> Result<[f64; 3]> {
            reseeds += 1;
            stuck += 1;
            if stuck > prm.max_reseeds {
                return Err(Error::FxVanished(p));
            }
            // side the tangential part of the velocity points to
            let g = field.grad(p);
            let prefer = if g[0] * g[1] * g[2] * zsign >= 0.0 { 1.0 } else { -1.0 };
            reseed(field, p, prefer, walk, prm.tol).ok_or(Error::FxVanished(p))
        };
        let Some(mut q) = rk4(field, p, h, dir, prm.epsilon_fx, prm.flow) else {
            match try_reseed(p) {
                Ok(r) => p = r,
                Err(e) if remaining <= prm.epsilon_snap => {
                    return settle(e, p, all, steps, reseeds, max_residual);
                }
                Err(e) => return Err(e),
            }
            all.push(p);
            continue;
        };
        q[2] = if last { target_z } else { p[2] + zsign * h };
        match correct(field, q, prm.tol) {
            Ok(c) if dist(p, q) <= prm.max_move && dist(c, q) <= 0.25 * dist(p, q) + prm.tol => {
                p = c;
                max_residual = max_residual.max(field.value(p).abs());
                all.push(p);
                dt = (dt * 1.5).min(prm.step);
                if p[0].hypot(p[1]) > escape {
                    // the tangential drift is running off along an unbounded branch
                    reseeds += 1;
                    stuck += 1;
                    if stuck > prm.max_reseeds {
                        return Err(Error::FxVanished(p));
                    }
                    if let Some(w) = walk_inward(field, p, prm.escape_radius / 4.0, walk, prm.tol) {
                        p = w;
                        all.push(p);
                    }
                    escape = prm.escape_radius.max(2.0 * p[0].hypot(p[1]));
                }
            }
            _ => {
                dt = h / 2.0;
                if stalled(dt) {
                    match try_reseed(p) {
                        Ok(r) => p = r,
                        Err(e) if remaining <= prm.epsilon_snap => {
                            return settle(e, p, all, steps, reseeds, max_residual);
                        }
                        Err(e) => return Err(e),
                    }
                    all.push(p);
                    dt = prm.step;
                }
            }
        }
    }
}

pub fn descend(field: &Field, start: [f64; 3], target_z: f64, singulars: &[[f64; 3]], prm: &PathParams) -> Result<PathResult> {
    follow(field, start, target_z, Direction::Descend, singulars, prm)
}

pub fn ascend(field: &Field, start: [f64; 3], target_z: f64, singulars: &[[f64; 3]], prm: &PathParams) -> Result<PathResult> {
    follow(field, start, target_z, Direction::Ascend, singulars, prm)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum H3Status {
    Verified,
    AssumedAfterTransform,
}

#[derive(Clone, Debug, Serialize)]
pub struct HypothesisReport {
    /// No factor of `F` free of `x`, so `gcd(F, F_x) = 1`.
    pub h1: bool,
    /// No plane `z = a` contains a line of `F = F_x = 0` parallel to the
    /// `y`-axis.
    pub h2: bool,
    pub h3: H3Status,
    /// Map applied on top of the input frame; identity when none was needed.
    pub transform: LinearMap3,
    pub attempts: usize,
}

/// Whether the plane `z = a` holds a real line `x = c` on which `F` and
/// `F_x` both vanish.
fn y_parallel_line_at<K: RealField>(f: &MPoly, fx: &MPoly, a: &K) -> Result<bool> {
    let bf = bipoly_from_mpoly(f, Var::X, Var::Y, Some((Var::Z, a)));
    let bg = bipoly_from_mpoly(fx, Var::X, Var::Y, Some((Var::Z, a)));
    let c = content(&bf).gcd(&content(&bg));
    Ok(c.deg() > 0 && !isolate_real_roots(&c)?.is_empty())
}

fn at_root<T>(r: &RealRoot<Q>, on_q: impl Fn(&Q) -> Result<T>, on_ext: impl Fn(&Ext<Q>) -> Result<T>) -> Result<T> {
    match r.as_rational() {
        Some(v) => on_q(&v),
        None => on_ext(&Ext::generator(&ExtCtx::new(r))),
    }
}

fn h2_holds(f: &MPoly) -> Result<bool> {
    let fx = f.differentiate(Var::X);
    if f.degree(Var::X) == 0 {
        return Ok(true);
    }
    let d = f.resultant(&fx, Var::X)?;
    let mut c = d.content_in(Var::Y).mul(&f.leading_coefficient(Var::X).content_in(Var::Y));
    if c.involves(Var::X) || c.involves(Var::Y) {
        // both contents are free of y; x never survives the resultant
        c = MPoly::one();
    }
    let Some(u) = c.to_univariate(Var::Z) else { return Ok(true) };
    if u.deg() == 0 {
        return Ok(true);
    }
    for r in isolate_real_roots(&u)? {
        if at_root(&r, |a| y_parallel_line_at(f, &fx, a), |a| y_parallel_line_at(f, &fx, a))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether `p`, viewed in `x, y`, vanishes identically at `z = r`.
fn vanishes_at(p: &MPoly, r: &RealRoot<Q>) -> Result<bool> {
    if p.is_constant() {
        return Ok(false);
    }
    let c = p.content_in(Var::X).content_in(Var::Y);
    let Some(u) = c.to_univariate(Var::Z) else { return Ok(false) };
    if u.deg() == 0 {
        return Ok(false);
    }
    Ok(r.sign_of(&u) == std::cmp::Ordering::Equal)
}

fn h3_holds(f: &MPoly, crit: &CriticalLevelSet) -> Result<bool> {
    let lx = f.leading_coefficient(Var::X);
    let ly = f.leading_coefficient(Var::Y);
    for r in &crit.values {
        if vanishes_at(&lx, r)? || vanishes_at(&ly, r)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn h1_holds(f: &MPoly) -> bool {
    f.degree(Var::X) > 0 && f.gcd(&f.differentiate(Var::X)).is_constant()
}

/// Checks the three hypotheses, applying seeded random maps until they hold.
/// Returns the report and the surface the rest of the pipeline must use.
pub fn check_hypotheses(s: &SurfaceInput, seed: u64) -> Result<(HypothesisReport, SurfaceInput)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = s.clone();
    let mut transform = LinearMap3::identity();
    for attempt in 0..=TRANSFORM_ATTEMPTS {
        let f = &current.f;
        let h1 = h1_holds(f);
        let h2 = h1 && h2_holds(f)?;
        let h3 = h2 && {
            let crit = critical_level_set(&compute_mr(&current)?)?;
            h3_holds(f, &crit)?
        };
        if h1 && h2 && h3 {
            let status = if attempt == 0 { H3Status::Verified } else { H3Status::AssumedAfterTransform };
            return Ok((HypothesisReport { h1, h2, h3: status, transform, attempts: attempt }, current));
        }
        if attempt == TRANSFORM_ATTEMPTS {
            break;
        }
        let m = crate::surfprops::random_map(&mut rng);
        let g = s.f.apply_linear_map(&m)?;
        let Ok(mut next) = load_surface(&g, Var::Z) else { continue };
        transform = m.then(&next.normalization);
        next.normalization = s.normalization.then(&transform);
        next.original = s.original.clone();
        next.hypothesis_flags.rotated |= s.hypothesis_flags.rotated;
        current = next;
    }
    Err(Error::HypothesesUnreachable(TRANSFORM_ATTEMPTS))
}

/// A projection of the curve `F = F_w = 0` onto a coordinate plane
/// `(z, u)`, traced as polylines.
#[derive(Debug)]
pub struct Projection {
    pub curve: PlaneCurve,
    lines: Vec<Vec<[f64; 2]>>,
    ends: Vec<(usize, usize)>,
    vertices: usize,
    scale: f64,
}

impl Projection {
    fn new(p: &MPoly, u: Var, reach: f64) -> Result<Self> {
        let curve = PlaneCurve::new(p, Var::Z, u)?;
        let a: CurveAnalysis<Q> = curve.analyze()?;
        let lines = a.edge_polylines_reaching(256, reach);
        let ends = a.graph.edges.iter().map(|e| (e.a, e.b)).collect();
        Ok(Projection { curve, lines, ends, vertices: a.graph.vertices.len(), scale: 1.0 + a.bound })
    }

    /// Label of each query point among the pieces of the curve inside the
    /// slab `lo <= z <= hi`; `None` when a query is off the curve. Works on
    /// polyline segments clipped to the slab, so slabs thinner than the
    /// sampling step still see the curve.
    fn labels(&self, lo: f64, hi: f64, queries: &[[f64; 2]]) -> Vec<Option<usize>> {
        let eta = 1e-9 * self.scale;
        let (lo, hi) = (lo - eta, hi + eta);
        let inside = |p: &[f64; 2]| p[0] >= lo && p[0] <= hi;
        // nodes: graph vertices, then one per clipped segment
        let mut pieces: Vec<[[f64; 2]; 2]> = Vec::new();
        let mut links: Vec<(usize, usize)> = Vec::new();
        for (line, &(a, b)) in self.lines.iter().zip(&self.ends) {
            let n = line.len();
            let mut prev: Option<usize> = None;
            for i in 1..n {
                let Some(piece) = clip(line[i - 1], line[i], lo, hi) else {
                    prev = None;
                    continue;
                };
                let id = self.vertices + pieces.len();
                pieces.push(piece);
                if i == 1 && inside(&line[0]) {
                    links.push((a, id));
                }
                if let Some(p) = prev.filter(|_| inside(&line[i - 1])) {
                    links.push((p, id));
                }
                if i + 1 == n && inside(&line[n - 1]) {
                    links.push((id, b));
                }
                prev = Some(id);
            }
        }
        let mut uf = UnionFind::new(self.vertices + pieces.len());
        for (a, b) in links {
            uf.union(a, b);
        }
        let reach = 0.05 * self.scale;
        queries
            .iter()
            .map(|q| {
                let mut best = (f64::INFINITY, None);
                for (k, seg) in pieces.iter().enumerate() {
                    let d = segment_distance(*q, seg[0], seg[1]);
                    if d < best.0 {
                        best = (d, Some(self.vertices + k));
                    }
                }
                best.1.filter(|_| best.0 <= reach).map(|i| uf.find(i))
            })
            .collect()
    }
}

/// The part of the segment `a b` with first coordinate in `[lo, hi]`.
fn clip(a: [f64; 2], b: [f64; 2], lo: f64, hi: f64) -> Option<[[f64; 2]; 2]> {
    let (mut t0, mut t1) = (0.0f64, 1.0f64);
    let d = b[0] - a[0];
    if d == 0.0 {
        if a[0] < lo || a[0] > hi {
            return None;
        }
    } else {
        let (u, v) = ((lo - a[0]) / d, (hi - a[0]) / d);
        t0 = t0.max(u.min(v));
        t1 = t1.min(u.max(v));
        if t0 > t1 {
            return None;
        }
    }
    let at = |t: f64| [a[0] + t * d, a[1] + t * (b[1] - a[1])];
    Some([at(t0), at(t1)])
}

fn segment_distance(q: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let len2 = dx * dx + dy * dy;
    let t = if len2 > 0.0 { (((q[0] - a[0]) * dx + (q[1] - a[1]) * dy) / len2).clamp(0.0, 1.0) } else { 0.0 };
    (q[0] - a[0] - t * dx).hypot(q[1] - a[1] - t * dy)
}

/// Projections used to follow a one-dimensional singular locus whose points
/// appear as isolated points of level curves.
#[derive(Debug)]
pub struct IsolatedLocus {
    /// `sqfree(Res_y(F, F_x))` in `(z, x)`, then `sqfree(Res_x(F, F_y))` in
    /// `(z, y)`; either may be missing when degenerate.
    pub projections: Vec<(Var, Projection)>,
}

impl IsolatedLocus {
    /// Levels up to `reach` in absolute value can be tracked.
    pub fn new(f: &MPoly, reach: f64) -> Result<Self> {
        let mut projections = Vec::new();
        for (elim, deriv, keep) in [(Var::Y, Var::X, Var::X), (Var::X, Var::Y, Var::Y)] {
            let r = f.resultant(&f.differentiate(deriv), elim);
            if let Ok(r) = r {
                if !r.is_zero() && !r.is_constant() {
                    if let Ok(p) = Projection::new(&r, keep, reach) {
                        projections.push((keep, p));
                    }
                }
            }
        }
        if projections.is_empty() {
            return Err(Error::ProjectionAmbiguous("no usable projection of the singular locus".into()));
        }
        Ok(IsolatedLocus { projections })
    }
}

/// For each isolated point at `from_level`, the index of the point of
/// `to_points` (at `to_level`) joined to it along the singular locus.
pub fn track_isolated(
    loc: &IsolatedLocus,
    from_level: f64,
    to_level: f64,
    from_points: &[[f64; 2]],
    to_points: &[[f64; 2]],
) -> Result<Vec<usize>> {
    let (lo, hi) = if from_level <= to_level { (from_level, to_level) } else { (to_level, from_level) };
    let mut candidates: Vec<Vec<usize>> = vec![(0..to_points.len()).collect(); from_points.len()];
    for (u, proj) in &loc.projections {
        let k = u.idx();
        let mut queries: Vec<[f64; 2]> = from_points.iter().map(|p| [from_level, p[k]]).collect();
        queries.extend(to_points.iter().map(|p| [to_level, p[k]]));
        let labels = proj.labels(lo, hi, &queries);
        let (from_l, to_l) = labels.split_at(from_points.len());
        for (i, c) in candidates.iter_mut().enumerate() {
            c.retain(|&j| from_l[i].is_some() && from_l[i] == to_l[j]);
        }
    }
    candidates
        .into_iter()
        .enumerate()
        .map(|(i, c)| match c.as_slice() {
            [j] => Ok(*j),
            _ => Err(Error::ProjectionAmbiguous(format!(
                "isolated point {:?} at level {from_level} has {} candidates at level {to_level}",
                from_points[i],
                c.len()
            ))),
        })
        .collect()
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    IntervalLevel,
    CriticalLevel,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainNode {
    /// Index into the stratification's strata.
    pub stratum: usize,
    pub component: usize,
    pub kind: NodeKind,
    pub level: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LinkMethod {
    Path,
    SingularLocus,
}

#[derive(Clone, Debug, Serialize)]
pub struct LinkTrace {
    pub from: usize,
    pub to: usize,
    pub method: LinkMethod,
    pub direction: Direction,
    /// Path details; absent for links along a singular locus.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<PathResult>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainGraph {
    pub nodes: Vec<ChainNode>,
    pub links: Vec<[usize; 2]>,
    pub chains: Vec<Vec<usize>>,
    pub traces: Vec<LinkTrace>,
}

pub fn count_components(g: &ChainGraph) -> usize {
    g.chains.len()
}

/// Diagonal of the box `[-k-1, k+1]` per axis, with `k` the critical bound
/// along that axis of the working polynomial.
pub fn working_box_diagonal(s: &SurfaceInput) -> Result<f64> {
    let kz = q_to_f64(&critical_bound(&compute_mr(s)?)?.bound);
    let mut sum = 0.0;
    for v in Var::ALL {
        let k = if v == Var::Z {
            kz
        } else {
            load_surface(&s.f, v)
                .and_then(|t| critical_bound(&compute_mr(&t)?))
                .map(|b| q_to_f64(&b.bound))
                .unwrap_or(kz)
        };
        sum += (2.0 * (k + 1.0)).powi(2);
    }
    Ok(sum.sqrt())
}

/// Starting points on each component of a level curve; isolated components
/// get none. Points with `|F_x| / |grad F|` at least `SEED_RATIO` come first,
/// nearest the axis first, since paths started far out on an unbounded
/// branch tend to run off; the rest follow by decreasing ratio.
pub fn component_seeds(
    curve: &dyn crate::levelsets::CurveView,
    level: f64,
    field: &Field,
    tol: f64,
    per_component: usize,
) -> Vec<Vec<[f64; 3]>> {
    let g = curve.graph();
    let lines = curve.edge_polylines(16);
    let spread = 1e-3 * (1.0 + curve.box_half_width());
    let mut out = vec![Vec::new(); g.components.len()];
    for (c, seeds) in out.iter_mut().enumerate() {
        let mut cand: Vec<(f64, [f64; 3])> = Vec::new();
        for (e, line) in g.edges.iter().zip(&lines) {
            if g.component_of(e.a) != c {
                continue;
            }
            let interior = line.len().saturating_sub(2);
            for p in line.iter().skip(1).take(interior).chain(std::iter::once(&e.sample)) {
                let q = [p[0], p[1], level];
                cand.push((field.fx_ratio(q), q));
            }
        }
        let key = |&(r, q): &(f64, [f64; 3])| if r >= SEED_RATIO { (0, q[0].hypot(q[1])) } else { (1, -r) };
        cand.sort_by(|a, b| {
            let (ka, kb) = (key(a), key(b));
            ka.0.cmp(&kb.0).then(ka.1.total_cmp(&kb.1))
        });
        for (_, q) in cand {
            if seeds.len() >= per_component {
                break;
            }
            let Ok(p) = correct(field, q, tol) else { continue };
            if seeds.iter().all(|s: &[f64; 3]| dist(*s, p) > spread) {
                seeds.push(p);
            }
        }
    }
    out
}

struct CriticalInfo {
    level: f64,
    singulars: Vec<[f64; 3]>,
    singular_components: Vec<usize>,
}

fn critical_info(strat: &LevelStratification, i: usize) -> CriticalInfo {
    let st = &strat.strata[i];
    let g = st.curve.graph();
    let level = st.level.approx;
    CriticalInfo {
        level,
        singulars: st.curve.singular_points().into_iter().map(|p| [p[0], p[1], level]).collect(),
        singular_components: st.curve.singular_vertices().into_iter().map(|v| g.component_of(v)).collect(),
    }
}

/// Joins the components of every sampled level curve to those of the
/// neighbouring critical level curves.
pub fn build_chain_graph(s: &SurfaceInput, strat: &LevelStratification, cfg: &ConnectConfig) -> Result<ChainGraph> {
    let field = Field::new(&s.f);
    let diagonal = working_box_diagonal(s)?;
    let mut nodes = Vec::new();
    let mut node_of: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (si, st) in strat.strata.iter().enumerate() {
        let kind = match st.kind {
            StratumKind::OpenInterval => NodeKind::IntervalLevel,
            StratumKind::CriticalValue => NodeKind::CriticalLevel,
        };
        for c in 0..st.curve.graph().components.len() {
            node_of.insert((si, c), nodes.len());
            nodes.push(ChainNode { stratum: si, component: c, kind, level: st.level.approx });
        }
    }
    let mut traces = Vec::new();
    let mut locus: Option<IsolatedLocus> = None;
    for (si, st) in strat.strata.iter().enumerate() {
        if st.kind != StratumKind::OpenInterval || st.curve.graph().components.is_empty() {
            continue;
        }
        let b = st.level.approx;
        let samples = component_samples(st.curve.graph());
        let seeds = component_seeds(st.curve.as_ref(), b, &field, cfg.correction_tol, 1);
        let isolated: Vec<usize> = samples.iter().filter(|c| c.isolated).map(|c| c.component).collect();
        let neighbours = [(si.checked_sub(1), Direction::Descend), (Some(si + 1).filter(|&j| j < strat.strata.len()), Direction::Ascend)];
        for (target, direction) in neighbours {
            let Some(ti) = target else { continue };
            let info = critical_info(strat, ti);
            let target_curve = &strat.strata[ti].curve;
            let prm = PathParams::resolve(cfg, diagonal, (info.level - b).abs());
            for (c, comp_seeds) in seeds.iter().enumerate() {
                if isolated.contains(&c) {
                    continue;
                }
                let Some(&start) = comp_seeds.first() else {
                    return Err(Error::NoIntersection);
                };
                let path = follow(&field, start, info.level, direction, &info.singulars, &prm)?;
                let reached = match path.end {
                    PathEnd::Snapped { index } => info.singular_components[index],
                    PathEnd::Reached => {
                        target_curve.locate(path.point[0], path.point[1]).ok_or(Error::NoIntersection)?
                    }
                };
                traces.push(LinkTrace {
                    from: node_of[&(si, c)],
                    to: node_of[&(ti, reached)],
                    method: LinkMethod::Path,
                    direction,
                    path: Some(path),
                });
            }
            if !isolated.is_empty() {
                if locus.is_none() {
                    let reach = strat.strata.iter().map(|t| t.level.approx.abs()).fold(0.0, f64::max) + 1.0;
                    locus = Some(IsolatedLocus::new(&s.f, reach)?);
                }
                let from: Vec<[f64; 2]> = isolated.iter().map(|&c| samples[c].point).collect();
                let to: Vec<[f64; 2]> = info.singulars.iter().map(|p| [p[0], p[1]]).collect();
                let hits = track_isolated(locus.as_ref().unwrap(), b, info.level, &from, &to)?;
                for (&c, j) in isolated.iter().zip(hits) {
                    traces.push(LinkTrace {
                        from: node_of[&(si, c)],
                        to: node_of[&(ti, info.singular_components[j])],
                        method: LinkMethod::SingularLocus,
                        direction,
                        path: None,
                    });
                }
            }
        }
    }
    let links: Vec<[usize; 2]> = traces.iter().map(|t| [t.from, t.to]).collect();
    let mut uf = UnionFind::new(nodes.len());
    for l in &links {
        uf.union(l[0], l[1]);
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..nodes.len() {
        groups.entry(uf.find(i)).or_default().push(i);
    }
    Ok(ChainGraph { nodes, links, chains: groups.into_values().collect(), traces })
}

#[derive(Debug, Serialize)]
pub struct ConnectReport {
    pub hypotheses: HypothesisReport,
    pub components: usize,
    pub chain_graph: ChainGraph,
    #[serde(skip)]
    pub surface: SurfaceInput,
    #[serde(skip)]
    pub stratification: LevelStratification,
}

/// Hypotheses, stratification of the (possibly transformed) surface and the
/// chain graph.
pub fn analyze_connectivity(s: &SurfaceInput, cfg: &ConnectConfig) -> Result<ConnectReport> {
    let (hypotheses, surface) = check_hypotheses(s, cfg.seed)?;
    let crit = critical_level_set(&compute_mr(&surface)?)?;
    let stratification = stratify(&surface, &crit)?;
    let chain_graph = build_chain_graph(&surface, &stratification, cfg)?;
    Ok(ConnectReport { hypotheses, components: count_components(&chain_graph), chain_graph, surface, stratification })
}
