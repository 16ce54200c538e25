//! Critical level values of a surface along an axis and the stratification
//! of that axis into open intervals and critical values.

use std::sync::Arc;

use serde::Serialize;

use crate::algebraic::{Ext, ExtCtx};
use crate::error::{Error, Result};
use crate::mpoly::{fmt_q, LinearMap3, MPoly, Var};
use crate::planecurve::{
    at_h, bipoly_from_mpoly, signature, CurveAnalysis, CurveClass, CurveTopologyGraph, TopologySignature,
};
use crate::realroots::{isolate_real_roots, root_bound, sample_plan, AlgebraicNumber, RealRoot};
use crate::ring::{q, qi, q_to_f64, RealField, Q};

/// Rational points on the unit circle used for rotations about an axis.
const PYTHAGOREAN: [(i64, i64, i64); 8] =
    [(3, 4, 5), (5, 12, 13), (8, 15, 17), (7, 24, 25), (20, 21, 29), (12, 35, 37), (9, 40, 41), (28, 45, 53)];

#[derive(Clone, Debug, Serialize)]
pub struct HypothesisFlags {
    pub no_axis_only_factor: bool,
    pub lcoeff_y_free_of_x: bool,
    pub rotated: bool,
}

/// A square-free surface polynomial in a working frame where the
/// stratification axis is `z`.
#[derive(Clone, Debug, Serialize)]
pub struct SurfaceInput {
    /// Polynomial in the working frame.
    pub f: MPoly,
    /// Square-free input polynomial in the caller's coordinates.
    pub original: MPoly,
    pub axis: Var,
    /// `f = original ∘ normalization`; working points map to caller
    /// coordinates by `normalization.apply_point`.
    pub normalization: LinearMap3,
    pub hypothesis_flags: HypothesisFlags,
}

impl SurfaceInput {
    pub fn to_original(&self, p: [f64; 3]) -> [f64; 3] {
        self.normalization.apply_point(p)
    }
}

/// Substitution moving `axis` to the `z` slot of the working frame.
pub fn axis_permutation(axis: Var) -> LinearMap3 {
    let (o, z) = (qi(1), qi(0));
    let m = match axis {
        Var::Z => return LinearMap3::identity(),
        // original x <- z, y <- x, z <- y
        Var::X => [[z.clone(), z.clone(), o.clone()], [o.clone(), z.clone(), z.clone()], [z.clone(), o.clone(), z]],
        // original x <- y, y <- z, z <- x
        Var::Y => [[z.clone(), o.clone(), z.clone()], [z.clone(), z.clone(), o.clone()], [o, z.clone(), z]],
    };
    LinearMap3 { matrix: m }
}

/// The factor of `f` depending on `v` alone.
pub fn univariate_content(f: &MPoly, v: Var) -> MPoly {
    let others: Vec<Var> = Var::ALL.into_iter().filter(|&w| w != v).collect();
    let c = f.content_in(others[0]);
    if c.is_constant() {
        return c;
    }
    c.content_in(others[1])
}

/// Square-free part, frame change and hypothesis checks for one axis.
pub fn load_surface(f_raw: &MPoly, axis: Var) -> Result<SurfaceInput> {
    let original = f_raw.squarefree_part()?;
    let perm = axis_permutation(axis);
    let mut f = original.apply_linear_map(&perm)?;
    if univariate_content(&f, Var::Z).involves(Var::Z) {
        return Err(Error::PlanarComponentInAxis(axis));
    }
    let mut normalization = perm;
    let mut rotated = false;
    if f.degree(Var::Y) > 0 && f.leading_coefficient(Var::Y).involves(Var::X) {
        let mut found = false;
        for (a, b, c) in PYTHAGOREAN {
            let rot = LinearMap3::rotation(Var::Z, q(a, c), q(b, c));
            let g = f.apply_linear_map(&rot)?;
            if !g.leading_coefficient(Var::Y).involves(Var::X) {
                f = g;
                normalization = normalization.then(&rot);
                rotated = true;
                found = true;
                break;
            }
        }
        if !found {
            return Err(Error::NormalizationFailed(PYTHAGOREAN.len()));
        }
    }
    Ok(SurfaceInput {
        f: f.normalize(),
        original,
        axis,
        normalization,
        hypothesis_flags: HypothesisFlags { no_axis_only_factor: true, lcoeff_y_free_of_x: true, rotated },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CriticalCase {
    RNonzero,
    RZeroMZero,
    RZeroMNonzero,
    Constant,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriticalLevelData {
    pub axis: Var,
    pub m: MPoly,
    pub r: MPoly,
    pub case: CriticalCase,
    /// The univariate polynomial whose real roots form the critical set.
    pub relevant: MPoly,
}

pub fn compute_mr(s: &SurfaceInput) -> Result<CriticalLevelData> {
    let f = &s.f;
    let m = if f.degree(Var::Y) == 0 { MPoly::zero() } else { f.discriminant(Var::Y)?.squarefree_part()? };
    let r = if m.is_zero() || m.degree(Var::X) == 0 { MPoly::zero() } else { m.discriminant(Var::X)? };
    let (case, relevant) = if !r.is_zero() {
        (CriticalCase::RNonzero, r.clone())
    } else if m.is_zero() {
        let d = if f.degree(Var::X) == 0 { MPoly::one() } else { f.discriminant(Var::X)? };
        (CriticalCase::RZeroMZero, d)
    } else {
        (CriticalCase::RZeroMNonzero, m.clone())
    };
    let case = if relevant.is_constant() { CriticalCase::Constant } else { case };
    Ok(CriticalLevelData { axis: s.axis, m, r, case, relevant })
}

#[derive(Clone, Debug)]
pub struct CriticalLevelSet {
    pub axis: Var,
    pub values: Vec<AlgebraicNumber>,
}

pub fn critical_level_set(d: &CriticalLevelData) -> Result<CriticalLevelSet> {
    if d.case == CriticalCase::Constant {
        return Ok(CriticalLevelSet { axis: d.axis, values: Vec::new() });
    }
    let u = d.relevant.to_univariate(Var::Z).ok_or(Error::ZeroPolynomial)?;
    Ok(CriticalLevelSet { axis: d.axis, values: isolate_real_roots(&u)? })
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub axis: Var,
    #[serde(serialize_with = "ser_q")]
    pub bound: Q,
}

fn ser_q<S: serde::Serializer>(v: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_q(v))
}

/// Largest Cauchy bound over the square-free factors of the relevant
/// polynomial.
pub fn critical_bound(d: &CriticalLevelData) -> Result<BoundReport> {
    if d.case == CriticalCase::Constant {
        return Ok(BoundReport { axis: d.axis, bound: qi(0) });
    }
    let u = d.relevant.to_univariate(Var::Z).ok_or(Error::ZeroPolynomial)?;
    let mut bound = qi(0);
    for (factor, _) in u.squarefree_factors() {
        bound = bound.max(root_bound(&factor)?);
    }
    Ok(BoundReport { axis: d.axis, bound })
}

/// Common view of level-curve analyses over different coefficient fields.
pub trait CurveView: Send + Sync + std::fmt::Debug {
    fn graph(&self) -> &CurveTopologyGraph;
    fn classify(&self) -> CurveClass;
    fn singular_points(&self) -> Vec<[f64; 2]>;
    fn singular_vertices(&self) -> Vec<usize>;
    fn locate(&self, x: f64, y: f64) -> Option<usize>;
    fn edge_polylines(&self, per_interval: usize) -> Vec<Vec<[f64; 2]>>;
    /// Whether fiber counts agree at two extra points of every interval
    /// between critical abscissas.
    fn delineable(&self) -> Result<bool>;
    fn box_half_width(&self) -> f64;
}

impl<K: RealField> CurveView for CurveAnalysis<K> {
    fn graph(&self) -> &CurveTopologyGraph {
        &self.graph
    }
    fn classify(&self) -> CurveClass {
        CurveAnalysis::classify(self)
    }
    fn singular_points(&self) -> Vec<[f64; 2]> {
        CurveAnalysis::singular_points(self)
    }
    fn singular_vertices(&self) -> Vec<usize> {
        CurveAnalysis::singular_vertices(self)
    }
    fn locate(&self, x: f64, y: f64) -> Option<usize> {
        CurveAnalysis::locate(self, x, y)
    }
    fn edge_polylines(&self, per_interval: usize) -> Vec<Vec<[f64; 2]>> {
        CurveAnalysis::edge_polylines(self, per_interval)
    }
    fn delineable(&self) -> Result<bool> {
        if self.poly.deg() == 0 {
            return Ok(true);
        }
        let k = self.crit.len();
        for i in 0..=k {
            let lo = if i == 0 { &self.samples[0] - qi(1) } else { self.crit[i - 1].refined(&q(1, 1 << 20)).hi.clone() };
            let hi = if i == k { &self.samples[k] + qi(1) } else { self.crit[i].refined(&q(1, 1 << 20)).lo.clone() };
            for t in [q(1, 3), q(2, 3)] {
                let p = &lo + (&hi - &lo) * t;
                if isolate_real_roots(&at_h(&self.poly, &p))?.len() != self.sample_fibers[i].len() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
    fn box_half_width(&self) -> f64 {
        self.bound
    }
}

/// A level value, exact and approximate.
#[derive(Clone, Debug)]
pub struct Level {
    pub exact: AlgebraicNumber,
    pub approx: f64,
}

impl Level {
    pub fn rational(v: Q) -> Self {
        Level { approx: q_to_f64(&v), exact: RealRoot::rational(v) }
    }

    pub fn from_root(r: &AlgebraicNumber) -> Self {
        Level { approx: r.to_f64(), exact: r.clone() }
    }

    pub fn json(&self) -> LevelJson {
        match self.exact.as_rational() {
            Some(v) => LevelJson { decimal: self.approx, exact: Some(fmt_q(&v)), defining: None },
            None => LevelJson {
                decimal: self.approx,
                exact: None,
                defining: Some(MPoly::from_univariate(Var::Z, &self.exact.defining).normalize().to_string()),
            },
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelJson {
    pub decimal: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub defining: Option<String>,
}

/// Analysis of the level curve `f(x, y, level) = 0` in the working frame.
pub fn level_curve(f: &MPoly, level: &Level) -> Result<Arc<dyn CurveView>> {
    if let Some(v) = level.exact.as_rational() {
        let bi = bipoly_from_mpoly::<Q>(f, Var::X, Var::Y, Some((Var::Z, &v)));
        return Ok(Arc::new(CurveAnalysis::new(&bi)?));
    }
    let ctx = ExtCtx::new(&level.exact);
    let alpha = Ext::generator(&ctx);
    let bi = bipoly_from_mpoly::<Ext<Q>>(f, Var::X, Var::Y, Some((Var::Z, &alpha)));
    if bi.is_zero() {
        return Err(Error::PlanarComponentInAxis(Var::Z));
    }
    Ok(Arc::new(CurveAnalysis::new(&bi)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StratumKind {
    OpenInterval,
    CriticalValue,
}

#[derive(Clone, Debug)]
pub struct Stratum {
    pub kind: StratumKind,
    pub level: Level,
    pub curve: Arc<dyn CurveView>,
    pub signature: TopologySignature,
    pub class: CurveClass,
}

#[derive(Clone, Debug)]
pub struct LevelStratification {
    pub axis: Var,
    pub criticals: CriticalLevelSet,
    pub samples: Vec<Q>,
    pub strata: Vec<Stratum>,
}

fn make_stratum(f: &MPoly, kind: StratumKind, level: Level) -> Result<Stratum> {
    let curve = level_curve(f, &level)?;
    let signature = signature(curve.graph());
    let class = curve.classify();
    Ok(Stratum { kind, level, curve, signature, class })
}

pub fn stratify(s: &SurfaceInput, a: &CriticalLevelSet) -> Result<LevelStratification> {
    let plan = sample_plan(&a.values);
    let mut strata = Vec::with_capacity(2 * plan.roots.len() + 1);
    for (i, sample) in plan.samples.iter().enumerate() {
        strata.push(make_stratum(&s.f, StratumKind::OpenInterval, Level::rational(sample.clone()))?);
        if let Some(r) = plan.roots.get(i) {
            strata.push(make_stratum(&s.f, StratumKind::CriticalValue, Level::from_root(r))?);
        }
    }
    Ok(LevelStratification {
        axis: a.axis,
        criticals: CriticalLevelSet { axis: a.axis, values: plan.roots },
        samples: plan.samples,
        strata,
    })
}

/// Load, critical set and stratification in one call.
pub fn analyze_axis(f: &MPoly, axis: Var) -> Result<(SurfaceInput, CriticalLevelData, LevelStratification)> {
    let s = load_surface(f, axis)?;
    let d = compute_mr(&s)?;
    let a = critical_level_set(&d)?;
    let strat = stratify(&s, &a)?;
    Ok((s, d, strat))
}

#[derive(Clone, Debug, Serialize)]
pub struct StratumJson {
    pub kind: StratumKind,
    pub level: LevelJson,
    pub signature: TopologySignature,
    pub class: CurveClass,
}

#[derive(Clone, Debug, Serialize)]
pub struct StratificationJson {
    pub axis: Var,
    pub critical_values: Vec<LevelJson>,
    pub strata: Vec<StratumJson>,
}

impl LevelStratification {
    pub fn json(&self) -> StratificationJson {
        StratificationJson {
            axis: self.axis,
            critical_values: self.criticals.values.iter().map(|r| Level::from_root(r).json()).collect(),
            strata: self
                .strata
                .iter()
                .map(|s| StratumJson {
                    kind: s.kind,
                    level: s.level.json(),
                    signature: s.signature.clone(),
                    class: s.class.clone(),
                })
                .collect(),
        }
    }
}
