//! Orchestration behind the `surftop` binary: option resolution, the JSON
//! report and the SVG level-curve diagrams.

pub mod svg;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};
use surftop_core::connect::{build_chain_graph, check_hypotheses, ConnectConfig, ConnectReport};
use surftop_core::levelsets::{analyze_axis, critical_bound, stratify, critical_level_set, compute_mr, CriticalLevelData, LevelStratification, SurfaceInput};
use surftop_core::mpoly::fmt_q;
use surftop_core::surfprops::{decide_compactness, normalize_for_all_axes, plotting_box, reality_from_strata, PlotBox, SurfaceTriple};
use surftop_core::{parse_polynomial, Error, LinearMap3, MPoly, Var};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verb {
    Levels,
    Reality,
    Compact,
    Box,
    Connect,
    Plot,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AxisArg {
    X,
    Y,
    Z,
}

impl From<AxisArg> for Var {
    fn from(a: AxisArg) -> Var {
        match a {
            AxisArg::X => Var::X,
            AxisArg::Y => Var::Y,
            AxisArg::Z => Var::Z,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "surftop", version, about = "Topology of real algebraic surfaces through their level curves")]
pub struct Cli {
    pub verb: Verb,
    /// Polynomial file; use `-e` for an inline expression.
    #[arg(required_unless_present = "expr", conflicts_with = "expr")]
    pub file: Option<PathBuf>,
    #[arg(short = 'e', long = "expr", value_name = "POLY")]
    pub expr: Option<String>,
    #[arg(long)]
    pub axis: Option<AxisArg>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// `key = value` lines; command-line flags take precedence.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[arg(long, value_name = "OUT")]
    pub json: Option<PathBuf>,
    #[arg(long, value_name = "OUT")]
    pub svg: Option<PathBuf>,
    #[arg(long = "eps-snap", value_name = "V")]
    pub eps_snap: Option<f64>,
    #[arg(long = "eps-fx", value_name = "V")]
    pub eps_fx: Option<f64>,
    #[arg(long = "rk4-step", value_name = "V")]
    pub rk4_step: Option<f64>,
    #[arg(long, value_name = "V")]
    pub tol: Option<f64>,
    /// Shrink the plotting box toward the outermost critical values.
    #[arg(long)]
    pub tighten: bool,
    /// Add wall-clock timings; the report is then no longer reproducible.
    #[arg(long)]
    pub timing: bool,
}

/// Resolved settings, echoed in the report.
#[derive(Clone, Debug, Serialize)]
pub struct Settings {
    pub axis: Var,
    pub seed: u64,
    pub eps_snap: Option<f64>,
    pub eps_fx: f64,
    pub rk4_step: Option<f64>,
    pub tol: f64,
    pub max_steps: usize,
    pub max_reseeds: usize,
    pub tighten: bool,
}

impl Default for Settings {
    fn default() -> Self {
        let c = ConnectConfig::default();
        Settings {
            axis: Var::Z,
            seed: c.seed,
            eps_snap: c.epsilon_snap,
            eps_fx: c.epsilon_fx,
            rk4_step: c.rk4_step,
            tol: c.correction_tol,
            max_steps: c.max_steps,
            max_reseeds: c.max_reseeds,
            tighten: false,
        }
    }
}

impl Settings {
    /// Applies `key = value` lines; `#` starts a comment.
    pub fn merge_text(&mut self, text: &str) -> Result<(), Error> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |what: &str| Error::IoError(format!("config line {}: {what}", n + 1));
            let (k, v) = line.split_once('=').ok_or_else(|| bad("expected key = value"))?;
            let (k, v) = (k.trim().replace('-', "_"), v.trim().trim_matches('"'));
            let num = |v: &str| v.parse::<f64>().map_err(|_| bad("expected a number"));
            let int = |v: &str| v.parse::<u64>().map_err(|_| bad("expected an integer"));
            match k.as_str() {
                "axis" => {
                    self.axis = match v {
                        "x" => Var::X,
                        "y" => Var::Y,
                        "z" => Var::Z,
                        _ => return Err(bad("axis must be x, y or z")),
                    }
                }
                "seed" => self.seed = int(v)?,
                "eps_snap" => self.eps_snap = Some(num(v)?),
                "eps_fx" => self.eps_fx = num(v)?,
                "rk4_step" => self.rk4_step = Some(num(v)?),
                "tol" => self.tol = num(v)?,
                "max_steps" => self.max_steps = int(v)? as usize,
                "max_reseeds" => self.max_reseeds = int(v)? as usize,
                "tighten" => self.tighten = v.parse().map_err(|_| bad("expected true or false"))?,
                _ => return Err(bad(&format!("unknown key {k}"))),
            }
        }
        Ok(())
    }

    pub fn connect_config(&self) -> ConnectConfig {
        ConnectConfig {
            epsilon_snap: self.eps_snap,
            epsilon_fx: self.eps_fx,
            rk4_step: self.rk4_step,
            max_steps: self.max_steps,
            correction_tol: self.tol,
            max_reseeds: self.max_reseeds,
            seed: self.seed,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Inline,
    File,
}

#[derive(Clone, Debug)]
pub struct Command {
    pub verb: Verb,
    pub source: Source,
    pub text: String,
    pub settings: Settings,
    pub timing: bool,
    /// Keep what the SVG emitter needs.
    pub figure: bool,
}

impl Command {
    pub fn inline(verb: Verb, text: &str) -> Self {
        Command { verb, source: Source::Inline, text: text.to_string(), settings: Settings::default(), timing: false, figure: verb == Verb::Plot }
    }

    /// Reads the input and the config file, then applies the flags.
    pub fn from_cli(cli: &Cli) -> Result<Self, Error> {
        let mut settings = Settings::default();
        if let Some(p) = &cli.config {
            settings.merge_text(&read(p)?)?;
        }
        if let Some(a) = cli.axis {
            settings.axis = a.into();
        }
        if let Some(s) = cli.seed {
            settings.seed = s;
        }
        if cli.eps_snap.is_some() {
            settings.eps_snap = cli.eps_snap;
        }
        if let Some(v) = cli.eps_fx {
            settings.eps_fx = v;
        }
        if cli.rk4_step.is_some() {
            settings.rk4_step = cli.rk4_step;
        }
        settings.tighten |= cli.tighten;
        if let Some(v) = cli.tol {
            settings.tol = v;
        }
        let (source, text) = match (&cli.expr, &cli.file) {
            (Some(e), _) => (Source::Inline, e.clone()),
            (None, Some(p)) => (Source::File, read(p)?),
            (None, None) => return Err(Error::IoError("no input polynomial".into())),
        };
        let figure = cli.svg.is_some() || cli.verb == Verb::Plot;
        Ok(Command { verb: cli.verb, source, text, settings, timing: cli.timing, figure })
    }
}

fn read(p: &PathBuf) -> Result<String, Error> {
    std::fs::read_to_string(p).map_err(|e| Error::IoError(format!("{}: {e}", p.display())))
}

/// Drawing input for the SVG emitter.
pub struct Figure {
    pub stratification: LevelStratification,
    pub chains: Option<surftop_core::connect::ChainGraph>,
    /// Horizontal window `[[x0, x1], [y0, y1]]` shared by every panel.
    pub window: [[f64; 2]; 2],
}

pub struct Outcome {
    pub report: Value,
    pub figure: Option<Figure>,
}

/// Intermediate results shared between verbs.
struct Session<'a> {
    f: MPoly,
    cmd: &'a Command,
    axis: Option<(SurfaceInput, CriticalLevelData, LevelStratification)>,
    triple: Option<SurfaceTriple>,
    plot_box: Option<PlotBox>,
    connect: Option<ConnectReport>,
}

impl<'a> Session<'a> {
    fn axis(&mut self) -> Result<&(SurfaceInput, CriticalLevelData, LevelStratification), Error> {
        if self.axis.is_none() {
            self.axis = Some(analyze_axis(&self.f, self.cmd.settings.axis)?);
        }
        Ok(self.axis.as_ref().unwrap())
    }

    fn triple(&mut self) -> Result<&SurfaceTriple, Error> {
        if self.triple.is_none() {
            self.triple = Some(normalize_for_all_axes(&self.f, self.cmd.settings.seed)?);
        }
        Ok(self.triple.as_ref().unwrap())
    }

    fn plot_box(&mut self) -> Result<&PlotBox, Error> {
        if self.plot_box.is_none() {
            let tighten = self.cmd.settings.tighten;
            let b = plotting_box(self.triple()?, tighten)?;
            self.plot_box = Some(b);
        }
        Ok(self.plot_box.as_ref().unwrap())
    }

    fn connect(&mut self) -> Result<&ConnectReport, Error> {
        if self.connect.is_none() {
            let cfg = self.cmd.settings.connect_config();
            let (s, _, st) = self.axis()?;
            let (hypotheses, surface) = check_hypotheses(s, cfg.seed)?;
            // the cached stratification is reused when no transform was needed
            let stratification = if hypotheses.transform.is_identity() {
                st.clone()
            } else {
                stratify(&surface, &critical_level_set(&compute_mr(&surface)?)?)?
            };
            let chain_graph = build_chain_graph(&surface, &stratification, &cfg)?;
            self.connect = Some(ConnectReport {
                hypotheses,
                components: chain_graph.chains.len(),
                chain_graph,
                surface,
                stratification,
            });
        }
        Ok(self.connect.as_ref().unwrap())
    }

    /// Panel window: the plotting box over the horizontal axes when the
    /// drawn surface lives in the box frame, else the widest curve box.
    fn window(&mut self, surface: &SurfaceInput, st: &LevelStratification) -> [[f64; 2]; 2] {
        let axis = self.cmd.settings.axis;
        let same_frame = surface.normalization == surftop_core::levelsets::axis_permutation(axis);
        if same_frame {
            if let Ok(true) = self.triple().map(|t| t.map.is_identity()) {
                if let Ok(b) = self.plot_box() {
                    let r = b.as_f64();
                    let (h, v) = horizontal(axis);
                    return [r[h.idx()], r[v.idx()]];
                }
            }
        }
        let w = st.strata.iter().map(|s| s.curve.box_half_width()).fold(1.0, f64::max);
        [[-w, w], [-w, w]]
    }
}

/// Original variables that become the working `x` and `y` for `axis`.
pub fn horizontal(axis: Var) -> (Var, Var) {
    match axis {
        Var::Z => (Var::X, Var::Y),
        Var::X => (Var::Y, Var::Z),
        Var::Y => (Var::Z, Var::X),
    }
}

fn map_json(m: &LinearMap3) -> Value {
    serde_json::to_value(m).expect("linear maps serialise")
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report blocks serialise")
}

/// Runs the verb and assembles the report. Object keys are sorted, so
/// equal inputs give byte-identical output unless timings are requested.
pub fn run(cmd: &Command) -> Result<Outcome, Error> {
    let f = parse_polynomial(&cmd.text)?;
    let mut report = Map::new();
    report.insert("version".into(), json!(VERSION));
    report.insert("verb".into(), to_value(&cmd.verb));
    report.insert(
        "input".into(),
        json!({ "source": to_value(&cmd.source), "text": cmd.text.trim(), "polynomial": f.to_string() }),
    );
    report.insert("config".into(), to_value(&cmd.settings));
    let mut s = Session { f, cmd, axis: None, triple: None, plot_box: None, connect: None };
    let mut normalization = Map::new();
    let mut timing = Map::new();
    let mut figure = None;
    let v = cmd.verb;
    let wants = |x: Verb| v == x || v == Verb::All;

    if wants(Verb::Levels) || v == Verb::Plot {
        let t = Instant::now();
        let (surface, data, st) = s.axis()?;
        normalization.insert("axis".into(), map_json(&surface.normalization));
        report.insert("critical_bound".into(), json!(fmt_q(&critical_bound(data)?.bound)));
        report.insert("levels".into(), to_value(&st.json()));
        timing.insert("levels".into(), json!(t.elapsed().as_millis() as u64));
    }
    if wants(Verb::Reality) {
        let t = Instant::now();
        let (surface, _, st) = s.axis()?;
        normalization.insert("axis".into(), map_json(&surface.normalization));
        let r = reality_from_strata(surface, st);
        report.insert("real_part".into(), to_value(&r.real_part));
        report.insert("reality".into(), to_value(&r));
        timing.insert("reality".into(), json!(t.elapsed().as_millis() as u64));
    }
    if wants(Verb::Compact) {
        let t = Instant::now();
        let triple = s.triple()?;
        normalization.insert("all_axes".into(), map_json(&triple.map));
        let c = decide_compactness(triple)?;
        report.insert("compact".into(), json!(c.is_compact));
        report.insert("compactness".into(), to_value(&c));
        timing.insert("compact".into(), json!(t.elapsed().as_millis() as u64));
    }
    if wants(Verb::Box) {
        let t = Instant::now();
        let b = s.plot_box()?.clone();
        normalization.insert("all_axes".into(), map_json(&b.map));
        report.insert("box".into(), to_value(&b));
        timing.insert("box".into(), json!(t.elapsed().as_millis() as u64));
    }
    if wants(Verb::Connect) {
        let t = Instant::now();
        let c = s.connect()?;
        normalization.insert("axis".into(), map_json(&c.surface.normalization));
        report.insert("chains".into(), json!(c.components));
        report.insert("connectivity".into(), to_value(c));
        timing.insert("connect".into(), json!(t.elapsed().as_millis() as u64));
    }
    if cmd.figure {
        figure = Some(match s.connect.take() {
            Some(c) => {
                let window = s.window(&c.surface, &c.stratification);
                Figure { window, stratification: c.stratification, chains: Some(c.chain_graph) }
            }
            None => {
                s.axis()?;
                let (surface, _, st) = s.axis.take().expect("levels computed");
                let window = s.window(&surface, &st);
                Figure { window, stratification: st, chains: None }
            }
        });
    }
    report.insert("normalization".into(), Value::Object(normalization));
    if cmd.timing {
        report.insert("timing_ms".into(), Value::Object(timing));
    }
    Ok(Outcome { report: Value::Object(report), figure })
}

/// Exit status for a failure: 2 when the surface cannot be brought into the
/// required position, 3 when exact sign decisions ran out of precision.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::HypothesesUnreachable(_)
        | Error::NormalizationFailed(_)
        | Error::PlanarComponentInAxis(_)
        | Error::GenericityFailed(_) => 2,
        Error::PrecisionExhausted(_) => 3,
        _ => 1,
    }
}

pub fn error_json(e: &Error) -> Value {
    let mut detail = Map::new();
    detail.insert("name".into(), json!(e.name()));
    detail.insert("message".into(), json!(e.to_string()));
    if let Error::ParseError { pos, expected } = e {
        detail.insert("position".into(), json!(pos));
        detail.insert("expected".into(), json!(expected));
    }
    json!({ "version": VERSION, "error": Value::Object(detail) })
}

/// Pretty JSON with a trailing newline.
pub fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialise");
    s.push('\n');
    s
}
