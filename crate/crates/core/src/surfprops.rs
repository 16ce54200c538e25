//! Reality, compactness and plotting boxes.

use rand::Rng as _;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::levelsets::{
    compute_mr, critical_bound, critical_level_set, level_curve, load_surface, stratify, univariate_content,
    CriticalLevelSet, Level, LevelJson, LevelStratification, StratumKind, SurfaceInput,
};
use crate::mpoly::{fmt_q, LinearMap3, MPoly, Var};
use crate::planecurve::{component_samples, CurveClass, CurveClassTag};
use crate::realroots::RealRoot;
use crate::ring::{q_to_f64, qi, Q};

const NORMALIZATION_ATTEMPTS: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RealPart {
    TwoDimensional,
    SpaceCurve,
    FinitePoints,
    Empty,
}

#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub level: LevelJson,
    /// Point on the surface, caller's coordinates.
    pub point: [f64; 3],
}

#[derive(Clone, Debug, Serialize)]
pub struct EvidenceRow {
    pub kind: StratumKind,
    pub level: LevelJson,
    pub class: CurveClass,
}

/// A level carrying lower-dimensional real points when the surface is not
/// real.
#[derive(Clone, Debug, Serialize)]
pub struct SupportLevel {
    pub level: LevelJson,
    pub class: CurveClassTag,
    /// One point per component, caller's coordinates.
    pub points: Vec<[f64; 3]>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RealityReport {
    pub is_real: bool,
    pub real_part: RealPart,
    pub witness: Option<Witness>,
    /// Critical levels holding the real points of a surface whose real part
    /// is lower dimensional.
    pub support: Vec<SupportLevel>,
    pub evidence: Vec<EvidenceRow>,
}

fn lift(s: &SurfaceInput, p: [f64; 2], level: f64) -> [f64; 3] {
    s.to_original([p[0], p[1], level])
}

/// Reality from a stratification along the working `z` axis.
pub fn reality_from_strata(s: &SurfaceInput, st: &LevelStratification) -> RealityReport {
    let evidence: Vec<EvidenceRow> = st
        .strata
        .iter()
        .map(|x| EvidenceRow { kind: x.kind, level: x.level.json(), class: x.class.clone() })
        .collect();
    let witness_stratum =
        st.strata.iter().find(|x| x.kind == StratumKind::OpenInterval && x.class.tag == CurveClassTag::RealCurve);
    if let Some(w) = witness_stratum {
        let sample = component_samples(w.curve.graph()).into_iter().find(|c| !c.isolated).expect("real curve");
        return RealityReport {
            is_real: true,
            real_part: RealPart::TwoDimensional,
            witness: Some(Witness { level: w.level.json(), point: lift(s, sample.point, w.level.approx) }),
            support: Vec::new(),
            evidence,
        };
    }
    let nonempty: Vec<_> = st.strata.iter().filter(|x| x.class.tag != CurveClassTag::Empty).collect();
    let real_part = if nonempty.is_empty() {
        RealPart::Empty
    } else if nonempty.iter().all(|x| x.kind == StratumKind::CriticalValue && x.class.tag == CurveClassTag::FinitePoints)
    {
        RealPart::FinitePoints
    } else {
        RealPart::SpaceCurve
    };
    let support = nonempty
        .iter()
        .filter(|x| x.kind == StratumKind::CriticalValue)
        .map(|x| SupportLevel {
            level: x.level.json(),
            class: x.class.tag,
            points: component_samples(x.curve.graph()).iter().map(|c| lift(s, c.point, x.level.approx)).collect(),
        })
        .collect();
    RealityReport { is_real: false, real_part, witness: None, support, evidence }
}

pub fn decide_reality(s: &SurfaceInput) -> Result<RealityReport> {
    let d = compute_mr(s)?;
    let a = critical_level_set(&d)?;
    let st = stratify(s, &a)?;
    Ok(reality_from_strata(s, &st))
}

/// The surface normalised so that every axis satisfies the stratification
/// hypotheses with constant leading coefficients.
#[derive(Clone, Debug, Serialize)]
pub struct SurfaceTriple {
    /// Normalised polynomial: `original ∘ map`.
    pub f: MPoly,
    pub original: MPoly,
    pub map: LinearMap3,
    #[serde(skip)]
    pub axes: Vec<SurfaceInput>,
}

impl SurfaceTriple {
    pub fn axis(&self, v: Var) -> &SurfaceInput {
        &self.axes[v.idx()]
    }
}

fn normalized_ok(f: &MPoly) -> bool {
    Var::ALL.into_iter().all(|v| {
        f.degree(v) > 0 && f.leading_coefficient(v).is_constant() && !univariate_content(f, v).involves(v)
    })
}

/// Next map of the seeded sequence: unit diagonal, off-diagonal entries
/// drawn from `-3..=3`, singular draws skipped.
pub(crate) fn random_map(rng: &mut ChaCha8Rng) -> LinearMap3 {
    loop {
        let m: [[Q; 3]; 3] = std::array::from_fn(|i| {
            std::array::from_fn(|j| if i == j { qi(1) } else { qi(rng.gen_range(-3..=3)) })
        });
        if let Ok(map) = LinearMap3::new(m) {
            return map;
        }
    }
}

pub fn normalize_for_all_axes(f: &MPoly, seed: u64) -> Result<SurfaceTriple> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let original = f.squarefree_part()?;
    let mut map = LinearMap3::identity();
    let mut g = original.clone();
    if !normalized_ok(&g) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut found = false;
        for _ in 0..NORMALIZATION_ATTEMPTS {
            let m = random_map(&mut rng);
            let h = original.apply_linear_map(&m)?.normalize();
            if normalized_ok(&h) {
                map = m;
                g = h;
                found = true;
                break;
            }
        }
        if !found {
            return Err(Error::NormalizationFailed(NORMALIZATION_ATTEMPTS));
        }
    }
    let mut axes = Vec::with_capacity(3);
    for v in Var::ALL {
        let mut s = load_surface(&g, v)?;
        s.normalization = map.then(&s.normalization);
        s.original = original.clone();
        axes.push(s);
    }
    Ok(SurfaceTriple { f: g, original, map, axes })
}

#[derive(Clone, Debug, Serialize)]
pub struct AxisCompactness {
    pub axis: Var,
    pub bound: String,
    pub low_empty: bool,
    pub high_empty: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CompactnessReport {
    pub is_compact: bool,
    pub per_axis: Vec<AxisCompactness>,
}

fn slice_is_empty(s: &SurfaceInput, level: &Q) -> Result<bool> {
    let c = level_curve(&s.f, &Level::rational(level.clone()))?;
    Ok(c.classify().tag == CurveClassTag::Empty)
}

pub fn decide_compactness(t: &SurfaceTriple) -> Result<CompactnessReport> {
    let mut per_axis = Vec::new();
    for v in Var::ALL {
        let s = t.axis(v);
        let k = critical_bound(&compute_mr(s)?)?.bound;
        let edge = &k + qi(1);
        let low_empty = slice_is_empty(s, &-edge.clone())?;
        let high_empty = low_empty && slice_is_empty(s, &edge)?;
        per_axis.push(AxisCompactness { axis: v, bound: fmt_q(&k), low_empty, high_empty });
        if !(low_empty && high_empty) {
            return Ok(CompactnessReport { is_compact: false, per_axis });
        }
    }
    Ok(CompactnessReport { is_compact: true, per_axis })
}

#[derive(Clone, Debug, Serialize)]
pub struct AxisInterval {
    pub axis: Var,
    pub lo: String,
    pub hi: String,
    #[serde(skip)]
    pub lo_q: Q,
    #[serde(skip)]
    pub hi_q: Q,
    /// Endpoints compared exactly against the critical values.
    pub endpoints_noncritical: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PlotBox {
    pub intervals: Vec<AxisInterval>,
    /// Box coordinates are those of the normalised polynomial.
    pub map: LinearMap3,
    pub tightened: bool,
}

impl PlotBox {
    pub fn as_f64(&self) -> [[f64; 2]; 3] {
        std::array::from_fn(|i| [q_to_f64(&self.intervals[i].lo_q), q_to_f64(&self.intervals[i].hi_q)])
    }

    pub fn diagonal(&self) -> f64 {
        self.as_f64().iter().map(|[a, b]| (b - a) * (b - a)).sum::<f64>().sqrt()
    }
}

fn strictly_inside(values: &CriticalLevelSet, lo: &Q, hi: &Q) -> bool {
    let lo_r = RealRoot::rational(lo.clone());
    let hi_r = RealRoot::rational(hi.clone());
    values.values.iter().all(|r| {
        lo_r.compare(r) == std::cmp::Ordering::Less && r.compare(&hi_r) == std::cmp::Ordering::Less
    })
}

/// `[-k-1, k+1]` per axis; with `tighten`, each endpoint moves toward the
/// outermost critical value, keeping 1/8 of the gap.
pub fn plotting_box(t: &SurfaceTriple, tighten: bool) -> Result<PlotBox> {
    let mut intervals = Vec::new();
    for v in Var::ALL {
        let s = t.axis(v);
        let d = compute_mr(s)?;
        let k = critical_bound(&d)?.bound;
        let a = critical_level_set(&d)?;
        let mut lo = -(&k + qi(1));
        let mut hi = &k + qi(1);
        if tighten {
            let eighth = |gap: Q| gap / qi(8);
            if let (Some(first), Some(last)) = (a.values.first(), a.values.last()) {
                let f = first.refined(&Q::new(1.into(), 1024.into()));
                let l = last.refined(&Q::new(1.into(), 1024.into()));
                lo = &f.lo - eighth(&f.lo - &lo);
                hi = &l.hi + eighth(&hi - &l.hi);
            } else {
                lo = qi(-1);
                hi = qi(1);
            }
        }
        let ok = strictly_inside(&a, &lo, &hi);
        intervals.push(AxisInterval { axis: v, lo: fmt_q(&lo), hi: fmt_q(&hi), lo_q: lo, hi_q: hi, endpoints_noncritical: ok });
    }
    Ok(PlotBox { intervals, map: t.map.clone(), tightened: tighten })
}
