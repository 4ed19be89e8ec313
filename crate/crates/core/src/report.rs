//! Run orchestration: refinement studies, per-command record collection and
//! CSV/JSON report emission.

use std::fmt;
use std::io::Write;

use serde::{Serialize, Serializer};

use crate::asymptotics::{
    alpha_profile, riccati_alpha, riccati_y, sample_profile, synthetic_bhat_peak, tanh_bound_check, tanh_lambda,
    tanh_solution, turning_time, tz_exponent, write_profile_csv, RiccatiSpec,
};
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::lattice::synthetic::decomposable_config;
use crate::lattice::{sample_family, GaugeConfig, GridSpec, Sampling};
use crate::model::{model_fields, sinh_ratio, theta_x, triple_product_model, w_model, Family, PointTZ};
use crate::relax::{comparison_solution, random_init, solve_u, SolverConfig};
use crate::residual::{constraint_flux, run_checks, Check, Equation};

/// Residuals below this on every grid count as exact zeros.
pub const FLOOR: f64 = 1e-10;
pub const RATIO_RANGE: (f64, f64) = (3.2, 4.8);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
        })
    }
}

/// Acceptance rule attached to a measured value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Threshold {
    AtMost(f64),
    AtLeast(f64),
    Within(f64, f64),
    /// Refinement ratios in range unless every error is below the floor.
    Ratio,
    /// Informational value; passes when finite.
    Finite,
}

impl Threshold {
    pub fn accepts(&self, v: f64) -> bool {
        match *self {
            Threshold::AtMost(t) => v <= t,
            Threshold::AtLeast(t) => v >= t,
            Threshold::Within(lo, hi) => (lo..=hi).contains(&v),
            Threshold::Ratio => (RATIO_RANGE.0..=RATIO_RANGE.1).contains(&v),
            Threshold::Finite => v.is_finite(),
        }
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Threshold::AtMost(t) => write!(f, "<= {t:e}"),
            Threshold::AtLeast(t) => write!(f, ">= {t:e}"),
            Threshold::Within(lo, hi) => write!(f, "in [{lo:e}, {hi:e}]"),
            Threshold::Ratio => write!(f, "in [{}, {}] or all < {FLOOR:e}", RATIO_RANGE.0, RATIO_RANGE.1),
            Threshold::Finite => f.write_str("finite"),
        }
    }
}

impl Serialize for Threshold {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Record {
    pub name: String,
    pub status: Status,
    pub value: f64,
    pub threshold: Threshold,
    pub units: String,
}

impl Record {
    pub fn measure(name: impl Into<String>, value: f64, threshold: Threshold, units: &str) -> Self {
        let status = if threshold.accepts(value) { Status::Pass } else { Status::Fail };
        Record { name: name.into(), status, value, threshold, units: units.into() }
    }

    pub fn with_status(name: impl Into<String>, value: f64, threshold: Threshold, units: &str, pass: bool) -> Self {
        let status = if pass { Status::Pass } else { Status::Fail };
        Record { name: name.into(), status, value, threshold, units: units.into() }
    }

    /// A failed record carrying the error text in its name.
    pub fn error(name: &str, err: &Error) -> Self {
        Record {
            name: format!("{name}: {err}"),
            status: Status::Fail,
            value: f64::NAN,
            threshold: Threshold::Finite,
            units: String::new(),
        }
    }
}

/// A named text file produced alongside the report.
#[derive(Clone, Debug, PartialEq)]
pub struct Artifact {
    pub name: String,
    pub contents: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub version: String,
    pub timestamp: u64,
    pub command: String,
    pub config: std::collections::BTreeMap<String, String>,
    pub records: Vec<Record>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.status == Status::Pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn write_csv(&self, out: &mut impl Write) -> Result<()> {
        writeln!(out, "name,status,value,threshold,units")?;
        for r in &self.records {
            writeln!(out, "{},{},{:e},{},{}", csv_field(&r.name), r.status, r.value, csv_field(&r.threshold.to_string()), r.units)?;
        }
        Ok(())
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            self.to_json() + "\n"
        } else {
            let mut buf = Vec::new();
            self.write_csv(&mut buf).expect("writing to memory");
            String::from_utf8(buf).expect("utf-8")
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StudyRow {
    pub equation: Equation,
    pub grid_h: f64,
    pub max_abs: f64,
    pub l2: f64,
    pub excluded: usize,
    pub ratio_vs_previous: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub equation: Equation,
    pub errors: [f64; 3],
    pub ratios: [f64; 2],
    pub pass: bool,
}

impl Verdict {
    fn new(equation: Equation, errors: [f64; 3]) -> Self {
        let ratios = [errors[0] / errors[1], errors[1] / errors[2]];
        let floor = errors.iter().all(|&e| e < FLOOR);
        let pass = floor || ratios.iter().all(|&r| Threshold::Ratio.accepts(r));
        Verdict { equation, errors, ratios, pass }
    }

    /// The ratio farthest from 4 in the logarithmic sense.
    pub fn worst_ratio(&self) -> f64 {
        let off = |r: f64| if r.is_nan() { f64::INFINITY } else { (r / 4.0).ln().abs() };
        if off(self.ratios[0]) >= off(self.ratios[1]) {
            self.ratios[0]
        } else {
            self.ratios[1]
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Study {
    pub check: String,
    pub rows: Vec<StudyRow>,
    pub verdicts: Vec<Verdict>,
}

impl Study {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn verdict(&self, eq: Equation) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.equation == eq)
    }

    pub fn write_csv(&self, out: &mut impl Write) -> Result<()> {
        writeln!(out, "equation,grid_h,max_abs,l2,excluded,ratio_vs_previous")?;
        for r in &self.rows {
            let ratio = r.ratio_vs_previous.map(|x| format!("{x:e}")).unwrap_or_default();
            writeln!(out, "{},{:e},{:e},{:e},{},{ratio}", r.equation, r.grid_h, r.max_abs, r.l2, r.excluded)?;
        }
        Ok(())
    }

    pub fn records(&self, prefix: &str) -> Vec<Record> {
        self.verdicts
            .iter()
            .map(|v| Record::with_status(format!("{prefix}{}", v.equation), v.worst_ratio(), Threshold::Ratio, "ratio", v.pass))
            .collect()
    }
}

/// Residual refinement study of `checks` over three nested grids; each grid
/// must be the refinement of the previous one.
pub fn convergence_study(
    make: &dyn Fn(GridSpec) -> Result<GaugeConfig>,
    checks: &[Check],
    grids: &[GridSpec],
) -> Result<Study> {
    if grids.len() != 3 {
        return Err(Error::DegenerateStudy(grids.len()));
    }
    if grids.windows(2).any(|w| w[1] != w[0].refined()) {
        return Err(Error::BadParam("grids must be successive refinements".into()));
    }
    let mut rows: Vec<StudyRow> = Vec::new();
    for (level, spec) in grids.iter().enumerate() {
        let cfg = make(*spec)?;
        for r in run_checks(&cfg, checks, Sampling::nested(level as u32))? {
            let previous = rows.iter().rev().find(|p| p.equation == r.equation).map(|p| p.max_abs / r.max_abs);
            rows.push(StudyRow {
                equation: r.equation,
                grid_h: spec.h_x(),
                max_abs: r.max_abs,
                l2: r.l2,
                excluded: r.excluded,
                ratio_vs_previous: previous,
            });
        }
    }
    let mut verdicts = Vec::new();
    for eq in Equation::ALL {
        let e: Vec<f64> = rows.iter().filter(|r| r.equation == *eq).map(|r| r.max_abs).collect();
        if e.len() == 3 {
            verdicts.push(Verdict::new(*eq, [e[0], e[1], e[2]]));
        }
    }
    let check = checks.iter().map(|c| c.name()).collect::<Vec<_>>().join("+");
    Ok(Study { check, rows, verdicts })
}

/// `[base, base/2, base/4]` in mesh size.
pub fn nested_triple(base: GridSpec) -> [GridSpec; 3] {
    let a = base.refined();
    [base, a, a.refined()]
}

/// One verb per module surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    ModelEval,
    ModelTable,
    Residual,
    Identity,
    Flux,
    SolveW,
    Ode,
    Asym,
    /// Every study above except the model listings.
    Report,
}

impl Command {
    pub const ALL: [Command; 9] = [
        Command::ModelEval,
        Command::ModelTable,
        Command::Residual,
        Command::Identity,
        Command::Flux,
        Command::SolveW,
        Command::Ode,
        Command::Asym,
        Command::Report,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::ModelEval => "model-eval",
            Command::ModelTable => "model-table",
            Command::Residual => "residual",
            Command::Identity => "identity",
            Command::Flux => "flux",
            Command::SolveW => "solve-w",
            Command::Ode => "ode",
            Command::Asym => "asym",
            Command::Report => "report",
        }
    }

    pub fn parse(s: &str) -> Option<Command> {
        Command::ALL.into_iter().find(|c| c.name() == s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteOutput {
    pub report: Report,
    pub artifacts: Vec<Artifact>,
}

struct Collector {
    records: Vec<Record>,
    artifacts: Vec<Artifact>,
}

impl Collector {
    /// Runs one stage, turning its error into a failed record.
    fn stage(&mut self, name: &str, f: impl FnOnce(&mut Collector) -> Result<()>) {
        if let Err(e) = f(self) {
            self.records.push(Record::error(name, &e));
        }
    }

    fn csv(&mut self, name: &str, write: impl FnOnce(&mut Vec<u8>) -> Result<()>) -> Result<()> {
        let mut buf = Vec::new();
        write(&mut buf)?;
        self.artifacts.push(Artifact { name: name.into(), contents: String::from_utf8(buf).expect("utf-8") });
        Ok(())
    }
}

/// Dispatch `command` with `cfg`; module errors become failed records.
pub fn run_suite(cfg: &RunConfig, command: Command) -> SuiteOutput {
    let mut c = Collector { records: Vec::new(), artifacts: Vec::new() };
    let stages: &[Command] = match command {
        Command::Report => &[Command::Residual, Command::Identity, Command::Flux, Command::SolveW, Command::Ode, Command::Asym],
        _ => std::slice::from_ref(&command),
    };
    for &s in stages {
        c.stage(s.name(), |c| match s {
            Command::ModelEval => model_eval(cfg, c),
            Command::ModelTable => model_table(cfg, c),
            Command::Residual => residual(cfg, c),
            Command::Identity => identity(cfg, c),
            Command::Flux => flux(cfg, c),
            Command::SolveW => solve_w(cfg, c),
            Command::Ode => ode(cfg, c),
            Command::Asym => asym(cfg, c),
            Command::Report => unreachable!("report expands into stages"),
        });
    }
    SuiteOutput {
        report: Report {
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: cfg.timestamp(),
            command: command.name().to_string(),
            config: cfg.entries().clone(),
            records: c.records,
        },
        artifacts: c.artifacts,
    }
}

fn model_eval(cfg: &RunConfig, c: &mut Collector) -> Result<()> {
    let p = cfg.eval_point();
    let family = cfg.family();
    family.validate()?;
    let s = family.sample(&p);
    let mut rec = |name: &str, v: f64| c.records.push(Record::measure(name, v, Threshold::Finite, ""));
    rec("|a|", s.higgs_norm());
    rec("|phi|", s.phi().norm());
    rec("a3.sigma3", s.higgs[2].c[2]);
    rec("|A|", s.conn.iter().map(|a| a.norm_sq()).sum::<f64>().sqrt());
    if let Family::Model { m } = family {
        let (theta, _) = theta_x(&p);
        rec("theta", theta);
        rec("w", w_model(m, theta));
        rec("triple_product", triple_product_model(crate::model::ModelParams { m }, &p));
    }
    Ok(())
}

fn model_table(cfg: &RunConfig, c: &mut Collector) -> Result<()> {
    let m = cfg.model().m;
    let t = cfg.eval_point().t;
    let (rho_max, n) = cfg.table();
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let rho = rho_max * i as f64 / (n - 1) as f64;
        let p = PointTZ::new(t, rho, 0.0);
        let s = model_fields(crate::model::ModelParams { m }, &p);
        let (theta, _) = theta_x(&p);
        rows.push((rho, theta, sinh_ratio(m, theta), w_model(m, theta), s.higgs[2].c[2], s.phi().norm()));
    }
    let phi_up = rows.windows(2).all(|w| w[1].5 >= w[0].5 * (1.0 - 1e-14));
    // α runs from −(m+1)/2t up to −1/2t, so its modulus is what decreases
    let alpha_down = rows.windows(2).all(|w| w[1].4 >= w[0].4 - 1e-14 * w[0].4.abs());
    c.records.push(Record::with_status("phi nondecreasing in |z|", 0.0, Threshold::Finite, "", phi_up));
    c.records.push(Record::with_status("|alpha| nonincreasing in |z|", 0.0, Threshold::Finite, "", alpha_down));
    c.csv("model_table.csv", |out| {
        writeln!(out, "t,rho,theta,sinh_ratio,w,a3,phi_norm")?;
        for (rho, theta, s, w, a3, ph) in &rows {
            writeln!(out, "{t:e},{rho:e},{theta:e},{s:e},{w:e},{a3:e},{ph:e}")?;
        }
        Ok(())
    })
}

fn residual(cfg: &RunConfig, c: &mut Collector) -> Result<()> {
    let family = cfg.family();
    let study = convergence_study(&|s| sample_family(&family, s), &cfg.checks(), &nested_triple(cfg.grid()))?;
    c.records.extend(study.records(&format!("{}: ", family.label())));
    c.csv("residual.csv", |out| study.write_csv(out))
}

fn identity(cfg: &RunConfig, c: &mut Collector) -> Result<()> {
    let mut all = Vec::new();
    for k in 0..cfg.identity_configs() as u64 {
        let seed = cfg.seed().wrapping_add(k);
        let study =
            convergence_study(&|s| Ok(decomposable_config(s, seed)), &[Check::CurvatureProjection], &nested_triple(cfg.grid()))?;
        c.records.extend(study.records(&format!("synthetic seed {seed}: ")));
        all.push(study);
    }
    c.csv("identity.csv", |out| {
        for s in &all {
            s.write_csv(out)?;
        }
        Ok(())
    })
}

fn flux(cfg: &RunConfig, c: &mut Collector) -> Result<()> {
    let family = cfg.family();
    family.validate()?;
    let curve = constraint_flux(&|p| family.sample(p), &cfg.flux_radii(), cfg.flux_truncation())?;
    let spread = curve.spread();
    c.records.push(Record::measure("flux.spread R f(R)", spread, Threshold::AtMost(cfg.flux_spread_max()), "ratio"));
    for (i, g) in curve.growth().into_iter().enumerate() {
        c.records.push(Record::measure(format!("flux.growth[{i}]"), g, Threshold::Finite, "ratio"));
    }
    c.csv("flux.csv", |out| {
        writeln!(out, "R,f,R_f")?;
        for (r, f) in &curve.points {
            writeln!(out, "{r:e},{f:e},{:e}", r * f)?;
        }
        Ok(())
    })
}

fn solve_w(cfg: &RunConfig, c: &mut Collector) -> Result<()> {
    let m = cfg.model().m;
    let grid = cfg.w_grid()?;
    let solver: SolverConfig = cfg.solver();
    solver.validate()?;
    let a = cfg.solve_amplitude();
    if cfg.comparison() {
        let u = comparison_solution(m, &grid, a, &solver)?;
        let half = comparison_solution(m, &grid, 0.5 * a, &solver)?;
        let order = u.data.iter().zip(&half.data).map(|(x, y)| x - y).fold(f64::NEG_INFINITY, f64::max);
        c.records.push(Record::measure("comparison.max_u", u.max(), Threshold::AtMost(1e-8), ""));
        c.records.push(Record::measure("comparison.min_u", u.min(), Threshold::Finite, ""));
        c.records.push(Record::measure("comparison.max(u(a) - u(a/2))", order, Threshold::AtMost(1e-8), ""));
        c.csv("u.csv", |out| u.write_csv(out))
    } else {
        let init = random_init(&grid, a, cfg.seed());
        let zero = grid.map(|_, _| 0.0);
        let out = solve_u(m, &zero, &init, &solver)?;
        c.records.push(Record::measure("uniqueness.sup_u", out.u.max_abs(), Threshold::AtMost(1e-6), ""));
        c.records.push(Record::measure("uniqueness.sweeps", out.sweeps as f64, Threshold::Finite, "sweeps"));
        c.csv("u.csv", |w| out.u.write_csv(w))?;
        c.csv("solve_log.csv", |w| out.write_log_csv(w))
    }
}

fn ode(cfg: &RunConfig, c: &mut Collector) -> Result<()> {
    let ctl = cfg.step_control();
    if cfg.ode_alpha() {
        let (z, a0, t0, t1) = (cfg.ode_value("z"), cfg.ode_value("alpha0"), cfg.ode_value("t0"), cfg.ode_value("t_end"));
        let tr = riccati_alpha(z, a0, t0, t1, ctl)?;
        let blow = match tr.termination {
            crate::asymptotics::Termination::BlowUp { at } => at,
            _ => f64::NAN,
        };
        c.records.push(Record::measure("alpha.final", tr.last().1, Threshold::Finite, ""));
        c.records.push(Record::measure("alpha.blow_up_t", blow, Threshold::Finite, "t"));
        if let Ok(Some(tz)) = turning_time(&tr) {
            c.records.push(Record::measure("alpha.turning_time", tz, Threshold::Finite, "t"));
        }
        return c.csv("trajectory.csv", |out| tr.write_csv(out, ["t", "alpha"]));
    }
    let k = cfg.ode_k();
    let spec = RiccatiSpec { k, mu: cfg.ode_value("mu"), y0: cfg.ode_value("y0"), tau0: 0.0 };
    let amp = cfg.ode_value("forcing");
    let tr = riccati_y(spec, &|tau| amp * tau.sin(), cfg.ode_value("tau_end"), ctl)?;
    c.records.push(Record::with_status("y.blow_up", tr.blew_up() as u8 as f64, Threshold::Finite, "flag", true));
    if amp == 0.0 && spec.y0.abs() < spec.lambda() {
        let err = tr.samples.iter().map(|&(t, y)| (y - tanh_solution(k, spec.y0, t)).abs()).fold(0.0, f64::max);
        c.records.push(Record::measure("y.tanh_error", err, Threshold::AtMost(1e-8), ""));
    }
    if tanh_lambda(k, spec.mu).map(|l| spec.y0.abs() < l).unwrap_or(false) {
        let v = tanh_bound_check(k, spec.mu, &tr)?;
        c.records.push(Record::measure("y.lower_bound_violation", v, Threshold::AtMost(1e-8), ""));
    }
    c.csv("trajectory.csv", |out| tr.write_csv(out, ["tau", "y"]))
}

fn asym(cfg: &RunConfig, c: &mut Collector) -> Result<()> {
    let (k, m) = cfg.asym_km();
    let tz = cfg.asym_value("t_z");
    let tr = sample_profile(|t| alpha_profile(k, t, tz), cfg.asym_value("t_min"), cfg.asym_value("t_max"), cfg.asym_samples());
    match turning_time(&tr)? {
        Some(found) => c.records.push(Record::measure("asym.turning_time_error", (found - tz).abs(), Threshold::AtMost(1e-6), "t")),
        None => c.records.push(Record::with_status("asym.turning_time_error", f64::NAN, Threshold::AtMost(1e-6), "t", false)),
    }
    if k > m && (k - m) % 2 == 0 {
        let p = (k - m) / 2;
        let r = tz_exponent(m, p)?;
        let exact = num_rational::Ratio::new((k - m) as i64, 2 * (k as i64 + 1));
        c.records.push(Record::with_status(
            format!("asym.tz_exponent(m={m},p={p}) = {r}"),
            *r.numer() as f64 / *r.denom() as f64,
            Threshold::Finite,
            "",
            r == exact,
        ));
        if let Some(slope) = peak_slope(k, m)? {
            let target = (k as f64 + 1.0) / p as f64;
            c.records.push(Record::measure("asym.bhat_peak_slope_error", (slope - target).abs(), Threshold::AtMost(1e-3), ""));
        }
    }
    let rows: Vec<(f64, f64, f64)> = tr.samples.iter().map(|&(t, a)| (t, 0.0, a)).collect();
    c.csv("alpha_profile.csv", |out| write_profile_csv(out, &rows))
}

/// Log-log slope of the `|b̂|` peak radius against `t`.
pub fn peak_slope(k: u32, m: u32) -> Result<Option<f64>> {
    let ts = [1e-3, 1e-2, 1e-1];
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for t in ts {
        match synthetic_bhat_peak(k, m, t)? {
            Some(r) => {
                xs.push(t.ln());
                ys.push(r.ln());
            }
            None => return Ok(None),
        }
    }
    Ok(Some(crate::model::linear_fit(&xs, &ys).0))
}
