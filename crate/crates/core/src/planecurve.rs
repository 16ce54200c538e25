//! Topology of real plane algebraic curves.
//!
//! A curve is held as a polynomial in the vertical variable whose
//! coefficients are polynomials in the horizontal one, over any
//! [`RealField`]. The analysis shears the curve until the vertical leading
//! coefficient is constant and every critical fiber carries at most one real
//! critical point, then connects branches between consecutive fibers.

use std::cmp::Ordering;
use std::sync::Arc;

use rand::Rng as _;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebraic::{Ext, ExtCtx};
use crate::error::{Error, Result};
use crate::mpoly::{MPoly, Mono, Var};
use crate::numeric;
use crate::realroots::{isolate_real_roots, isolate_with_multiplicity, sample_plan, AlgebraicNumber, RealRoot};
use crate::ring::{f64_to_q, q_to_f64, qi, RealField, Ring, Q};
use crate::upoly::{resultant, UPoly};

/// Polynomial in the vertical variable with coefficients in `K[h]`.
pub type BiPoly<K> = UPoly<UPoly<K>>;

const SHEAR_ATTEMPTS: usize = 24;

/// Builds a bivariate polynomial from `p`, substituting `value` for the
/// third variable when given.
pub fn bipoly_from_mpoly<K: RealField>(p: &MPoly, h: Var, v: Var, level: Option<(Var, &K)>) -> BiPoly<K> {
    let mut grid: Vec<Vec<K>> = Vec::new();
    let mut powers: Vec<K> = vec![K::one()];
    for (mono, c) in p.terms() {
        let a = mono.0[h.idx()] as usize;
        let b = mono.0[v.idx()] as usize;
        let mut coeff = K::from_rational(c);
        if let Some((w, val)) = level {
            let e = mono.0[w.idx()] as usize;
            while powers.len() <= e {
                let next = powers.last().unwrap().mul(val);
                powers.push(next);
            }
            coeff = coeff.mul(&powers[e]);
        } else {
            debug_assert!(mono.0.iter().enumerate().all(|(i, e)| *e == 0 || i == h.idx() || i == v.idx()));
        }
        if grid.len() <= b {
            grid.resize(b + 1, Vec::new());
        }
        if grid[b].len() <= a {
            grid[b].resize(a + 1, K::zero());
        }
        grid[b][a] = grid[b][a].add(&coeff);
    }
    UPoly::new(grid.into_iter().map(UPoly::new).collect())
}

/// Inverse of [`bipoly_from_mpoly`] for rational coefficients.
pub fn bipoly_to_mpoly(f: &BiPoly<Q>, h: Var, v: Var) -> MPoly {
    let mut terms = Vec::new();
    for (b, cx) in f.coeffs().iter().enumerate() {
        for (a, c) in cx.coeffs().iter().enumerate() {
            let mut e = [0u32; 3];
            e[h.idx()] = a as u32;
            e[v.idx()] = b as u32;
            terms.push((Mono(e), c.clone()));
        }
    }
    MPoly::from_terms(terms)
}

/// `f(h + lambda v, v)`.
pub fn shear<K: RealField>(f: &BiPoly<K>, lambda: &Q) -> BiPoly<K> {
    if Ring::is_zero(lambda) {
        return f.clone();
    }
    let lam = K::from_rational(lambda);
    let mut grid: Vec<Vec<K>> = Vec::new();
    let mut put = |b: usize, a: usize, c: K| {
        if grid.len() <= b {
            grid.resize(b + 1, Vec::new());
        }
        if grid[b].len() <= a {
            grid[b].resize(a + 1, K::zero());
        }
        grid[b][a] = grid[b][a].add(&c);
    };
    for (b, cx) in f.coeffs().iter().enumerate() {
        for (a, c) in cx.coeffs().iter().enumerate() {
            if Ring::is_zero(c) {
                continue;
            }
            // (h + lam v)^a = sum C(a, i) h^i lam^(a-i) v^(a-i)
            let mut binom = qi(1);
            for i in (0..=a).rev() {
                let k = a - i;
                let term = c.mul(&K::from_rational(&binom)).mul(&lam.pow(k as u32));
                put(b + k, i, term);
                binom = binom * qi(i as i64) / qi(k as i64 + 1);
            }
        }
    }
    UPoly::new(grid.into_iter().map(UPoly::new).collect())
}

/// Derivative with respect to the horizontal variable.
pub fn diff_h<K: RealField>(f: &BiPoly<K>) -> BiPoly<K> {
    UPoly::new(f.coeffs().iter().map(|c| c.derivative()).collect())
}

/// Specialises the horizontal variable at a rational.
pub fn at_h<K: RealField>(f: &BiPoly<K>, h0: &Q) -> UPoly<K> {
    f.map(|c| c.eval_q(h0))
}

/// Gcd of the coefficients in `v`, monic in `h`.
pub fn content<K: RealField>(p: &BiPoly<K>) -> UPoly<K> {
    let mut g = UPoly::zero();
    for c in p.coeffs().iter().filter(|c| !c.is_zero()) {
        g = if g.is_zero() { c.monic() } else { g.gcd(c) };
        if g.deg() == 0 {
            break;
        }
    }
    g
}

fn primitive<K: RealField>(p: &BiPoly<K>) -> BiPoly<K> {
    if p.is_zero() {
        return p.clone();
    }
    let c = content(p);
    p.map(|x| UPoly::exact_div(x, &c))
}

/// Gcd over `K(h)[v]`, primitive in `v`.
pub fn gcd_bi<K: RealField>(a: &BiPoly<K>, b: &BiPoly<K>) -> BiPoly<K> {
    let (mut a, mut b) = (primitive(a), primitive(b));
    if a.deg() < b.deg() {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        if b.is_zero() {
            return a;
        }
        if b.deg() == 0 {
            return UPoly::one();
        }
        let r = a.prem(&b);
        a = b;
        b = primitive(&r);
    }
}

/// Square-free part of a polynomial whose leading coefficient in `v` is a
/// nonzero constant; the result is monic in `v`.
fn squarefree_bi<K: RealField>(f: &BiPoly<K>) -> BiPoly<K> {
    if f.deg() == 0 {
        return f.clone();
    }
    let g = gcd_bi(f, &f.derivative());
    let s = if g.deg() == 0 { f.clone() } else { f.exact_div(&g) };
    let lc = s.lc().coeff(0).inv();
    s.map(|c| c.scale(&lc))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VertexKind {
    Critical,
    Boundary,
    Isolated,
    RegularSample,
}

#[derive(Clone, Debug, Serialize)]
pub struct Vertex {
    pub id: usize,
    pub x: f64,
    pub y: f64,
    pub kind: VertexKind,
}

#[derive(Clone, Debug, Serialize)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    /// A regular point on the branch.
    pub sample: [f64; 2],
}

#[derive(Clone, Debug, Serialize)]
pub struct CurveTopologyGraph {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    pub components: Vec<Vec<usize>>,
}

impl CurveTopologyGraph {
    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().map(|e| (e.a == v) as usize + (e.b == v) as usize).sum()
    }

    pub fn component_of(&self, v: usize) -> usize {
        self.components.iter().position(|c| c.contains(&v)).expect("vertex in a component")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TopologySignature {
    pub component_count: usize,
    pub isolated_point_count: usize,
    pub vertex_degree_multiset: Vec<usize>,
    pub edge_count: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveClassTag {
    Empty,
    FinitePoints,
    RealCurve,
}

#[derive(Clone, Debug, Serialize)]
pub struct CurveClass {
    pub tag: CurveClassTag,
    pub points: Vec<[f64; 2]>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComponentSample {
    pub component: usize,
    pub point: [f64; 2],
    pub isolated: bool,
}

/// The fiber over a critical abscissa.
#[derive(Clone, Debug)]
pub struct CritFiber<K: RealField> {
    pub ctx: Arc<ExtCtx<K>>,
    pub points: Vec<RealRoot<Ext<K>>>,
    /// Index of the unique real critical point, if any.
    pub special: Option<usize>,
    pub singular: bool,
    pub vertex_ids: Vec<usize>,
}

/// Full analysis of a curve in generic position.
#[derive(Clone, Debug)]
pub struct CurveAnalysis<K: RealField> {
    pub shear: Q,
    /// Square-free, sheared polynomial, monic in `v`.
    pub poly: BiPoly<K>,
    pub crit: Vec<RealRoot<K>>,
    pub crit_f64: Vec<f64>,
    pub samples: Vec<Q>,
    pub sample_fibers: Vec<Vec<RealRoot<K>>>,
    pub crit_fibers: Vec<CritFiber<K>>,
    /// Edge index for (interval, branch).
    pub edge_of: Vec<Vec<usize>>,
    pub graph: CurveTopologyGraph,
    /// Half-width of the working box (sheared frame).
    pub bound: f64,
}

struct Prepared<K: RealField> {
    poly: BiPoly<K>,
    crit: Vec<RealRoot<K>>,
    fibers: Vec<CritFiber<K>>,
}

fn prepare<K: RealField>(f: &BiPoly<K>, lambda: &Q) -> Result<Option<Prepared<K>>> {
    let g = shear(f, lambda);
    if g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if g.lc().deg() > 0 {
        return Ok(None);
    }
    let g = squarefree_bi(&g);
    if g.deg() == 0 {
        return Ok(Some(Prepared { poly: g, crit: Vec::new(), fibers: Vec::new() }));
    }
    let d = resultant(&g, &g.derivative());
    let crit = isolate_real_roots(&d)?;
    let gx = diff_h(&g);
    let mut fibers = Vec::with_capacity(crit.len());
    for c in &crit {
        let ctx = ExtCtx::new(c);
        let fc: UPoly<Ext<K>> = g.map(|cx| Ext::from_poly(&ctx, cx.clone()));
        let with_mult = isolate_with_multiplicity(&fc)?;
        let mut special = None;
        for (i, (_, m)) in with_mult.iter().enumerate() {
            if *m > 1 {
                if special.is_some() {
                    return Ok(None);
                }
                special = Some(i);
            }
        }
        let points: Vec<RealRoot<Ext<K>>> = with_mult.into_iter().map(|(r, _)| r).collect();
        let singular = match special {
            Some(j) => {
                let fx: UPoly<Ext<K>> = gx.map(|cx| Ext::from_poly(&ctx, cx.clone()));
                points[j].sign_of(&fx) == Ordering::Equal
            }
            None => false,
        };
        fibers.push(CritFiber { ctx, points, special, singular, vertex_ids: Vec::new() });
    }
    Ok(Some(Prepared { poly: g, crit, fibers }))
}

/// Shear candidates: small integers first, then random rationals.
pub fn shear_candidates(n: usize) -> Vec<Q> {
    let mut out: Vec<Q> = [0, 1, -1, 2, -2, 3, -3].iter().map(|&k| qi(k)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    while out.len() < n {
        let num: i64 = rng.gen_range(-12..=12);
        let den: i64 = rng.gen_range(1..=12);
        let c = Q::new(num.into(), den.into());
        if !out.contains(&c) {
            out.push(c);
        }
    }
    out.truncate(n);
    out
}

/// Which end of a critical fiber a branch arriving from one side meets.
fn attach<K: RealField>(cf: &CritFiber<K>, m: usize, b: usize) -> Option<usize> {
    let mc = cf.points.len();
    match cf.special {
        None => (m == mc).then(|| cf.vertex_ids[b]),
        Some(j) => {
            let above = mc - 1 - j;
            if m + 1 < mc || m < j + above {
                return None;
            }
            let idx = if b < j {
                b
            } else if b >= m - above {
                j + 1 + (b - (m - above))
            } else {
                j
            };
            Some(cf.vertex_ids[idx])
        }
    }
}

fn union_find_components(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for v in 0..n {
        let r = find(&mut parent, v);
        groups.entry(r).or_default().push(v);
    }
    groups.into_values().collect()
}

impl<K: RealField> CurveAnalysis<K> {
    /// Analyses the curve `f = 0`, shearing as needed.
    pub fn new(f: &BiPoly<K>) -> Result<Self> {
        if f.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        for lambda in shear_candidates(SHEAR_ATTEMPTS) {
            let Some(prep) = prepare(f, &lambda)? else { continue };
            if let Some(a) = Self::build(prep, lambda)? {
                return Ok(a);
            }
        }
        Err(Error::GenericityFailed(SHEAR_ATTEMPTS))
    }

    /// Original-frame coordinates of a sheared-frame point.
    pub fn unshear(&self, xs: f64, y: f64) -> [f64; 2] {
        [xs + q_to_f64(&self.shear) * y, y]
    }

    fn build(mut p: Prepared<K>, lambda: Q) -> Result<Option<Self>> {
        let plan = sample_plan(&p.crit);
        let crit = plan.roots;
        let samples = plan.samples;
        let sample_fibers: Vec<Vec<RealRoot<K>>> = if p.poly.deg() == 0 {
            vec![Vec::new(); samples.len()]
        } else {
            samples.iter().map(|s| isolate_real_roots(&at_h(&p.poly, s))).collect::<Result<_>>()?
        };
        let crit_f64: Vec<f64> = crit.iter().map(|c| c.to_f64()).collect();
        let lam = q_to_f64(&lambda);

        let mut bound = 0.0f64;
        for c in &crit_f64 {
            bound = bound.max(c.abs());
        }
        for (s, fib) in samples.iter().zip(&sample_fibers) {
            bound = bound.max(q_to_f64(s).abs());
            for r in fib {
                bound = bound.max(r.to_f64().abs());
            }
        }
        let xb = bound.ceil() + 1.0;

        let mut vertices = Vec::new();
        let vert = |x: f64, y: f64, kind: VertexKind, vs: &mut Vec<Vertex>| {
            let id = vs.len();
            vs.push(Vertex { id, x: x + lam * y, y, kind });
            id
        };
        for (i, cf) in p.fibers.iter_mut().enumerate() {
            cf.vertex_ids = cf
                .points
                .iter()
                .enumerate()
                .map(|(k, r)| {
                    let kind = if Some(k) == cf.special { VertexKind::Critical } else { VertexKind::RegularSample };
                    vert(crit_f64[i], r.to_f64(), kind, &mut vertices)
                })
                .collect();
        }
        let k = crit.len();
        let boundary_fiber = |x: f64| -> Result<Vec<f64>> {
            if p.poly.deg() == 0 {
                return Ok(Vec::new());
            }
            Ok(isolate_real_roots(&at_h(&p.poly, &f64_to_q(x)))?.iter().map(|r| r.to_f64()).collect())
        };
        let left_y = boundary_fiber(-xb)?;
        let right_y = boundary_fiber(xb)?;
        if left_y.len() != sample_fibers[0].len() || right_y.len() != sample_fibers[k].len() {
            return Ok(None);
        }
        let left_ids: Vec<usize> =
            left_y.iter().map(|&y| vert(-xb, y, VertexKind::Boundary, &mut vertices)).collect();
        let right_ids: Vec<usize> =
            right_y.iter().map(|&y| vert(xb, y, VertexKind::Boundary, &mut vertices)).collect();

        let mut edges = Vec::new();
        let mut edge_of = Vec::with_capacity(k + 1);
        for i in 0..=k {
            let m = sample_fibers[i].len();
            let sx = q_to_f64(&samples[i]);
            let mut ids = Vec::with_capacity(m);
            for b in 0..m {
                let a = if i == 0 { Some(left_ids[b]) } else { attach(&p.fibers[i - 1], m, b) };
                let c = if i == k { Some(right_ids[b]) } else { attach(&p.fibers[i], m, b) };
                let (Some(a), Some(c)) = (a, c) else { return Ok(None) };
                let y = sample_fibers[i][b].to_f64();
                ids.push(edges.len());
                edges.push(Edge { a, b: c, sample: [sx + lam * y, y] });
            }
            edge_of.push(ids);
        }
        for cf in &p.fibers {
            if let Some(j) = cf.special {
                let v = cf.vertex_ids[j];
                if !edges.iter().any(|e| e.a == v || e.b == v) {
                    vertices[v].kind = VertexKind::Isolated;
                }
            }
        }
        let pairs: Vec<(usize, usize)> = edges.iter().map(|e| (e.a, e.b)).collect();
        let components = union_find_components(vertices.len(), &pairs);
        Ok(Some(CurveAnalysis {
            shear: lambda,
            poly: p.poly,
            crit,
            crit_f64,
            samples,
            sample_fibers,
            crit_fibers: p.fibers,
            edge_of,
            graph: CurveTopologyGraph { vertices, edges, components },
            bound: xb,
        }))
    }

    pub fn classify(&self) -> CurveClass {
        if self.sample_fibers.iter().any(|f| !f.is_empty()) {
            return CurveClass { tag: CurveClassTag::RealCurve, points: Vec::new() };
        }
        let points: Vec<[f64; 2]> = self.graph.vertices.iter().map(|v| [v.x, v.y]).collect();
        if points.is_empty() {
            CurveClass { tag: CurveClassTag::Empty, points }
        } else {
            CurveClass { tag: CurveClassTag::FinitePoints, points }
        }
    }

    /// Real singular points, original frame.
    pub fn singular_points(&self) -> Vec<[f64; 2]> {
        let mut out = Vec::new();
        for cf in &self.crit_fibers {
            if let (true, Some(j)) = (cf.singular, cf.special) {
                let v = &self.graph.vertices[cf.vertex_ids[j]];
                out.push([v.x, v.y]);
            }
        }
        out
    }

    /// Vertex ids of singular points.
    pub fn singular_vertices(&self) -> Vec<usize> {
        self.crit_fibers.iter().filter(|cf| cf.singular).filter_map(|cf| cf.special.map(|j| cf.vertex_ids[j])).collect()
    }

    /// Component containing the point `(x, y)` of the curve, original frame.
    pub fn locate(&self, x: f64, y: f64) -> Option<usize> {
        let g = &self.graph;
        if g.components.is_empty() {
            return None;
        }
        let xs = x - q_to_f64(&self.shear) * y;
        let nearest_vertex = |ids: &[usize]| -> Option<usize> {
            ids.iter().copied().min_by(|&a, &b| {
                let da = (g.vertices[a].y - y).abs();
                let db = (g.vertices[b].y - y).abs();
                da.total_cmp(&db)
            })
        };
        for (i, c) in self.crit_f64.iter().enumerate() {
            if (xs - c).abs() <= 1e-7 * (1.0 + c.abs()) {
                return nearest_vertex(&self.crit_fibers[i].vertex_ids).map(|v| g.component_of(v));
            }
        }
        let i = self.crit_f64.iter().filter(|c| **c < xs).count();
        if self.poly.deg() > 0 {
            let xq = f64_to_q(xs);
            if let Ok(fib) = isolate_real_roots(&at_h(&self.poly, &xq)) {
                if fib.len() == self.edge_of[i].len() && !fib.is_empty() {
                    let b = (0..fib.len())
                        .min_by(|&a, &b| (fib[a].to_f64() - y).abs().total_cmp(&(fib[b].to_f64() - y).abs()))
                        .unwrap();
                    let e = &g.edges[self.edge_of[i][b]];
                    return Some(g.component_of(e.a));
                }
            }
        }
        // fall back to the nearest recorded point
        let mut best = (f64::INFINITY, None);
        for v in &g.vertices {
            let d = (v.x - x).hypot(v.y - y);
            if d < best.0 {
                best = (d, Some(g.component_of(v.id)));
            }
        }
        for e in &g.edges {
            let d = (e.sample[0] - x).hypot(e.sample[1] - y);
            if d < best.0 {
                best = (d, Some(g.component_of(e.a)));
            }
        }
        best.1
    }

    /// Polylines tracing every edge, original frame, `per_interval` interior
    /// samples each.
    pub fn edge_polylines(&self, per_interval: usize) -> Vec<Vec<[f64; 2]>> {
        self.edge_polylines_reaching(per_interval, self.bound)
    }

    /// As `edge_polylines`, with the unbounded edges traced out to `|x| =
    /// reach` when that exceeds the box; their outer ends then sit at the
    /// fiber over `±reach` instead of the box vertex.
    pub fn edge_polylines_reaching(&self, per_interval: usize, reach: f64) -> Vec<Vec<[f64; 2]>> {
        let grid: Vec<Vec<f64>> =
            self.poly.coeffs().iter().map(|c| c.coeffs().iter().map(|k| k.to_f64()).collect()).collect();
        let lam = q_to_f64(&self.shear);
        let k = self.crit.len();
        let outer = reach.max(self.bound);
        let extend = outer > self.bound;
        let mut out = vec![Vec::new(); self.graph.edges.len()];
        for i in 0..=k {
            let x0 = if i == 0 { -outer } else { self.crit_f64[i - 1] };
            let x1 = if i == k { outer } else { self.crit_f64[i] };
            let m = self.edge_of[i].len();
            let first = if extend && i == 0 { 0 } else { 1 };
            let last = if extend && i == k { per_interval + 1 } else { per_interval };
            let mut traces: Vec<Vec<[f64; 2]>> = vec![Vec::new(); m];
            let mut ends = [false; 2];
            for s in first..=last {
                let xs = x0 + (x1 - x0) * s as f64 / (per_interval + 1) as f64;
                let coeffs: Vec<f64> = grid.iter().map(|c| numeric::horner(c, xs)).collect();
                let roots = numeric::real_roots(&coeffs, 1e-7);
                if roots.len() == m {
                    for (b, y) in roots.into_iter().enumerate() {
                        traces[b].push([xs + lam * y, y]);
                    }
                    ends[0] |= s == 0;
                    ends[1] |= s == per_interval + 1;
                }
            }
            for (b, mut trace) in traces.into_iter().enumerate() {
                let e = &self.graph.edges[self.edge_of[i][b]];
                let va = &self.graph.vertices[e.a];
                let vb = &self.graph.vertices[e.b];
                let mut line = Vec::with_capacity(trace.len() + 2);
                if !ends[0] {
                    line.push([va.x, va.y]);
                }
                let tail = ends[1].then(|| trace.pop()).flatten();
                line.extend(trace);
                line.push(tail.unwrap_or([vb.x, vb.y]));
                out[self.edge_of[i][b]] = line;
            }
        }
        out
    }
}

/// One point per component: an edge sample, or the vertex itself when the
/// component has no edges.
pub fn component_samples(g: &CurveTopologyGraph) -> Vec<ComponentSample> {
    g.components
        .iter()
        .enumerate()
        .map(|(ci, comp)| {
            match g.edges.iter().find(|e| comp.contains(&e.a)) {
                Some(e) => ComponentSample { component: ci, point: e.sample, isolated: false },
                None => {
                    let v = &g.vertices[comp[0]];
                    ComponentSample { component: ci, point: [v.x, v.y], isolated: v.kind == VertexKind::Isolated }
                }
            }
        })
        .collect()
}

/// Signature of the graph after suppressing degree-2 vertices; a component
/// that is a closed loop counts as two vertices and two edges.
pub fn signature(g: &CurveTopologyGraph) -> TopologySignature {
    let n = g.vertices.len();
    let mut edges: Vec<(usize, usize)> = g.edges.iter().map(|e| (e.a, e.b)).collect();
    let mut alive = vec![true; edges.len()];
    let mut gone = vec![false; n];
    loop {
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, &(a, b)) in edges.iter().enumerate() {
            if alive[i] {
                incident[a].push(i);
                incident[b].push(i);
            }
        }
        let pick = (0..n).find(|&v| !gone[v] && incident[v].len() == 2 && incident[v][0] != incident[v][1]);
        let Some(v) = pick else { break };
        let (e1, e2) = (incident[v][0], incident[v][1]);
        let other = |e: (usize, usize)| if e.0 == v { e.1 } else { e.0 };
        let (a, b) = (other(edges[e1]), other(edges[e2]));
        edges[e1] = (a, b);
        alive[e2] = false;
        gone[v] = true;
    }
    let live: Vec<(usize, usize)> = edges.iter().zip(&alive).filter(|(_, a)| **a).map(|(e, _)| *e).collect();
    let comps = union_find_components(n, &live);
    let mut degrees = Vec::new();
    let mut edge_count = 0;
    let mut component_count = 0;
    let mut isolated = 0;
    for comp in comps {
        let comp: Vec<usize> = comp.into_iter().filter(|v| !gone[*v]).collect();
        if comp.is_empty() {
            continue;
        }
        component_count += 1;
        let ce: Vec<&(usize, usize)> = live.iter().filter(|e| comp.contains(&e.0)).collect();
        if comp.len() == 1 && ce.len() == 1 {
            degrees.extend([2, 2]);
            edge_count += 2;
            continue;
        }
        for &v in &comp {
            let d: usize = ce.iter().map(|e| (e.0 == v) as usize + (e.1 == v) as usize).sum();
            if d == 0 {
                isolated += 1;
            }
            degrees.push(d);
        }
        edge_count += ce.len();
    }
    degrees.sort_unstable_by(|a, b| b.cmp(a));
    TopologySignature {
        component_count,
        isolated_point_count: isolated,
        vertex_degree_multiset: degrees,
        edge_count,
    }
}

/// A rational plane curve in two named variables.
#[derive(Clone, Debug)]
pub struct PlaneCurve {
    pub poly: MPoly,
    /// (horizontal, vertical)
    pub frame: (Var, Var),
}

impl PlaneCurve {
    /// The square-free part of `poly` is stored.
    pub fn new(poly: &MPoly, h: Var, v: Var) -> Result<Self> {
        assert_ne!(h, v);
        if poly.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(PlaneCurve { poly: poly.squarefree_part()?, frame: (h, v) })
    }

    pub fn bipoly(&self) -> BiPoly<Q> {
        bipoly_from_mpoly(&self.poly, self.frame.0, self.frame.1, None)
    }

    pub fn analyze(&self) -> Result<CurveAnalysis<Q>> {
        CurveAnalysis::new(&self.bipoly())
    }
}

/// The curve sheared into generic position and the shear used.
pub fn make_generic(c: &PlaneCurve) -> Result<(PlaneCurve, Q)> {
    let a = c.analyze()?;
    let (h, v) = c.frame;
    let sheared = shear(&c.bipoly(), &a.shear);
    let poly = bipoly_to_mpoly(&sheared, h, v).normalize();
    Ok((PlaneCurve { poly, frame: c.frame }, a.shear))
}

/// Real roots of the square-free discriminant in the vertical variable.
pub fn critical_abscissas(c: &PlaneCurve) -> Result<Vec<AlgebraicNumber>> {
    let (h, v) = c.frame;
    let target = if c.poly.degree(v) == 0 { c.poly.clone() } else { c.poly.discriminant(v)? };
    match target.to_univariate(h) {
        Some(u) if !u.is_zero() => isolate_real_roots(&u),
        _ => Ok(Vec::new()),
    }
}

/// Sorted real roots of the vertical polynomial at `h = h0`.
pub fn fiber(c: &PlaneCurve, h0: &Q) -> Result<Vec<AlgebraicNumber>> {
    let u = at_h(&c.bipoly(), h0);
    if u.is_zero() {
        return Err(Error::VerticalLineComponent(crate::mpoly::fmt_q(h0)));
    }
    if u.deg() == 0 {
        return Ok(Vec::new());
    }
    isolate_real_roots(&u)
}

pub fn topology_graph(c: &PlaneCurve) -> Result<CurveTopologyGraph> {
    Ok(c.analyze()?.graph)
}

pub fn classify(c: &PlaneCurve) -> Result<CurveClass> {
    Ok(c.analyze()?.classify())
}

pub fn singular_points(c: &PlaneCurve) -> Result<Vec<[f64; 2]>> {
    Ok(c.analyze()?.singular_points())
}
