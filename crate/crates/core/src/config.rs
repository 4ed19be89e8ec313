//! Run configuration from `section.key = value` text plus overrides.
//!
//! Every key has a default, so an empty file is a valid configuration.
//! Unknown keys are rejected and each value is checked when parsed.

use std::collections::BTreeMap;
use std::path::Path;

use crate::asymptotics::StepControl;
use crate::error::{Error, Result};
use crate::lattice::GridSpec;
use crate::model::{Family, ModelParams};
use crate::relax::{ScalarGrid2D, Scheme, SolverConfig};
use crate::residual::{Check, FluxTruncation};
use crate::su2::C64;

#[derive(Clone, Copy, Debug)]
enum Kind {
    /// Non-negative integer.
    Count,
    /// Integer at least this large.
    AtLeast(u64),
    Positive,
    NonNegative,
    Real,
    Choice(&'static [&'static str]),
    PositiveList,
    Checks,
}

const CHECK_NAMES: &[&str] = &[
    "kw",
    "second_order",
    "projected",
    "curvature_projection",
    "pairing_flow",
    "balance",
    "bochner",
    "w_equation",
    "divergence",
];

const KEYS: &[(&str, &str, Kind)] = &[
    ("run.seed", "0", Kind::Count),
    ("run.timestamp", "0", Kind::Count),
    ("run.format", "csv", Kind::Choice(&["csv", "json"])),
    ("family.kind", "model", Kind::Choice(&["model", "imposter", "abelian", "c_family", "scaled_nahm"])),
    ("model.m", "1", Kind::Count),
    ("imposter.w_re", "0.5", Kind::Real),
    ("imposter.w_im", "0", Kind::Real),
    ("abelian.r", "1", Kind::Positive),
    ("c_family.c", "1", Kind::Positive),
    ("scaled_nahm.factor", "1.1", Kind::Real),
    ("grid.t_min", "0.5", Kind::Positive),
    ("grid.t_max", "2", Kind::Positive),
    ("grid.x_half", "2", Kind::Positive),
    ("grid.nt", "33", Kind::AtLeast(8)),
    ("grid.nx", "33", Kind::AtLeast(8)),
    ("residual.checks", "kw,second_order", Kind::Checks),
    ("identity.configs", "10", Kind::AtLeast(1)),
    ("flux.radii", "4,8,16", Kind::PositiveList),
    ("flux.t_min", "0.05", Kind::Positive),
    ("flux.t_max", "20", Kind::Positive),
    ("flux.outer_factor", "8", Kind::Positive),
    ("flux.spread_max", "1.5", Kind::Positive),
    ("solver.tolerance", "1e-12", Kind::Positive),
    ("solver.max_sweeps", "200000", Kind::AtLeast(1)),
    ("solver.damping", "0.8", Kind::Positive),
    ("solver.scheme", "gauss_seidel_newton", Kind::Choice(&["gauss_seidel_newton", "jacobi_newton"])),
    ("wgrid.t_min", "0.2", Kind::Positive),
    ("wgrid.t_max", "5", Kind::Positive),
    ("wgrid.rho_max", "10", Kind::Positive),
    ("wgrid.nt", "129", Kind::AtLeast(5)),
    ("wgrid.nrho", "129", Kind::AtLeast(5)),
    ("solve.experiment", "uniqueness", Kind::Choice(&["uniqueness", "comparison"])),
    ("solve.amplitude", "0.5", Kind::NonNegative),
    ("ode.equation", "y", Kind::Choice(&["y", "alpha"])),
    ("ode.k", "1", Kind::Count),
    ("ode.mu", "0", Kind::NonNegative),
    ("ode.forcing", "0", Kind::NonNegative),
    ("ode.y0", "0", Kind::Real),
    ("ode.tau_end", "5", Kind::Positive),
    ("ode.z", "0", Kind::Real),
    ("ode.alpha0", "-0.5", Kind::Real),
    ("ode.t0", "1", Kind::Positive),
    ("ode.t_end", "10", Kind::Positive),
    ("ode.tolerance", "1e-10", Kind::Positive),
    ("asym.k", "2", Kind::Count),
    ("asym.m", "0", Kind::Count),
    ("asym.t_z", "0.1", Kind::Positive),
    ("asym.t_min", "0.01", Kind::Positive),
    ("asym.t_max", "1", Kind::Positive),
    ("asym.samples", "400", Kind::AtLeast(4)),
    ("eval.t", "1", Kind::Positive),
    ("eval.x1", "0.5", Kind::Real),
    ("eval.x2", "0", Kind::Real),
    ("table.rho_max", "10", Kind::Positive),
    ("table.samples", "41", Kind::AtLeast(2)),
];

fn check_value(key: &str, kind: Kind, v: &str) -> Result<()> {
    let bad = || Error::BadValue(key.to_string());
    let real = |s: &str| s.trim().parse::<f64>().ok().filter(|x| x.is_finite());
    let ok = match kind {
        Kind::Count => v.parse::<u64>().is_ok(),
        Kind::AtLeast(n) => v.parse::<u64>().map(|x| x >= n).unwrap_or(false),
        Kind::Positive => real(v).map(|x| x > 0.0).unwrap_or(false),
        Kind::NonNegative => real(v).map(|x| x >= 0.0).unwrap_or(false),
        Kind::Real => real(v).is_some(),
        Kind::Choice(opts) => opts.contains(&v),
        Kind::PositiveList => v.split(',').all(|s| real(s).map(|x| x > 0.0).unwrap_or(false)),
        Kind::Checks => v.split(',').all(|s| CHECK_NAMES.contains(&s.trim())),
    };
    if ok {
        Ok(())
    } else {
        Err(bad())
    }
}

fn kind_of(key: &str) -> Option<Kind> {
    KEYS.iter().find(|(k, _, _)| *k == key).map(|&(_, _, kind)| kind)
}

/// `key = value` with the key validated and the value trimmed.
fn split_assignment(text: &str) -> Option<(&str, &str)> {
    let (k, v) = text.split_once('=')?;
    let (k, v) = (k.trim(), v.trim());
    if k.is_empty() || v.is_empty() {
        None
    } else {
        Some((k, v))
    }
}

/// Validated configuration: every known key mapped to its resolved value.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    values: BTreeMap<String, String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            values: KEYS.iter().map(|(k, d, _)| (k.to_string(), d.to_string())).collect(),
        }
    }
}

/// Parse config text, then apply `key=value` overrides in order.
pub fn parse_config_str(text: &str, overrides: &[String]) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = split_assignment(line).ok_or_else(|| Error::ParseError { line: n + 1, text: raw.to_string() })?;
        cfg.set(k, v)?;
    }
    for o in overrides {
        let (k, v) = split_assignment(o).ok_or_else(|| Error::ParseError { line: 0, text: o.clone() })?;
        cfg.set(k, v)?;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Read and parse a config file; `None` gives the defaults plus overrides.
pub fn parse_config(path: Option<&Path>, overrides: &[String]) -> Result<RunConfig> {
    let text = match path {
        Some(p) => std::fs::read_to_string(p)?,
        None => String::new(),
    };
    parse_config_str(&text, overrides)
}

impl RunConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let kind = kind_of(key).ok_or_else(|| Error::UnknownKey(key.to_string()))?;
        check_value(key, kind, value)?;
        self.values.insert(key.to_string(), value.to_string());
        Ok(())
    }

    pub fn get(&self, key: &str) -> &str {
        &self.values[key]
    }

    /// Resolved `key → value` pairs in key order.
    pub fn entries(&self) -> &BTreeMap<String, String> {
        &self.values
    }

    fn f(&self, key: &str) -> f64 {
        self.get(key).parse().expect("validated real")
    }

    fn u(&self, key: &str) -> u64 {
        self.get(key).parse().expect("validated integer")
    }

    fn u32(&self, key: &str) -> Result<u32> {
        u32::try_from(self.u(key)).map_err(|_| Error::BadValue(key.to_string()))
    }

    fn usize(&self, key: &str) -> usize {
        self.u(key) as usize
    }

    fn validate(&self) -> Result<()> {
        let ordered = |lo: &str, hi: &str| {
            if self.f(hi) > self.f(lo) {
                Ok(())
            } else {
                Err(Error::BadValue(hi.to_string()))
            }
        };
        ordered("grid.t_min", "grid.t_max")?;
        ordered("wgrid.t_min", "wgrid.t_max")?;
        ordered("flux.t_min", "flux.t_max")?;
        ordered("ode.t0", "ode.t_end")?;
        ordered("asym.t_min", "asym.t_max")?;
        if self.f("flux.outer_factor") <= 1.0 {
            return Err(Error::BadValue("flux.outer_factor".into()));
        }
        if self.f("solver.damping") > 1.0 {
            return Err(Error::BadValue("solver.damping".into()));
        }
        let radii = self.flux_radii();
        if radii.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::BadValue("flux.radii".into()));
        }
        for key in ["model.m", "ode.k", "asym.k", "asym.m"] {
            self.u32(key)?;
        }
        self.family()
            .validate()
            .map_err(|_| Error::BadValue(format!("{}.*", self.get("family.kind"))))?;
        Ok(())
    }

    pub fn seed(&self) -> u64 {
        self.u("run.seed")
    }

    pub fn timestamp(&self) -> u64 {
        self.u("run.timestamp")
    }

    pub fn json(&self) -> bool {
        self.get("run.format") == "json"
    }

    pub fn model(&self) -> ModelParams {
        ModelParams { m: self.u32("model.m").expect("validated") }
    }

    pub fn family(&self) -> Family {
        match self.get("family.kind") {
            "imposter" => Family::Imposter { w: C64::new(self.f("imposter.w_re"), self.f("imposter.w_im")) },
            "abelian" => Family::Abelian { r: self.f("abelian.r") },
            "c_family" => Family::CFamily { c: self.f("c_family.c") },
            "scaled_nahm" => Family::ScaledNahm { factor: self.f("scaled_nahm.factor") },
            _ => Family::Model { m: self.model().m },
        }
    }

    pub fn grid(&self) -> GridSpec {
        GridSpec {
            t_min: self.f("grid.t_min"),
            t_max: self.f("grid.t_max"),
            x_half: self.f("grid.x_half"),
            n_t: self.usize("grid.nt"),
            n_x: self.usize("grid.nx"),
        }
    }

    /// Requested residual checks; the w-calculus ones take the family's
    /// vanishing degree (0 when it has none).
    pub fn checks(&self) -> Vec<Check> {
        let m = self.family().vanishing_degree().unwrap_or(0);
        self.get("residual.checks")
            .split(',')
            .map(|s| match s.trim() {
                "kw" => Check::Kw,
                "second_order" => Check::SecondOrder,
                "projected" => Check::Projected,
                "curvature_projection" => Check::CurvatureProjection,
                "pairing_flow" => Check::PairingFlow,
                "balance" => Check::Balance,
                "bochner" => Check::Bochner,
                "w_equation" => Check::WEquation { m },
                _ => Check::Divergence { m },
            })
            .collect()
    }

    pub fn identity_configs(&self) -> usize {
        self.usize("identity.configs")
    }

    pub fn flux_radii(&self) -> Vec<f64> {
        self.get("flux.radii").split(',').map(|s| s.trim().parse().expect("validated list")).collect()
    }

    pub fn flux_truncation(&self) -> FluxTruncation {
        FluxTruncation {
            t_min: self.f("flux.t_min"),
            t_max: self.f("flux.t_max"),
            outer_factor: self.f("flux.outer_factor"),
        }
    }

    pub fn flux_spread_max(&self) -> f64 {
        self.f("flux.spread_max")
    }

    pub fn solver(&self) -> SolverConfig {
        SolverConfig {
            tolerance: self.f("solver.tolerance"),
            max_sweeps: self.usize("solver.max_sweeps"),
            damping: self.f("solver.damping"),
            scheme: match self.get("solver.scheme") {
                "jacobi_newton" => Scheme::JacobiNewton,
                _ => Scheme::GaussSeidelNewton,
            },
        }
    }

    pub fn w_grid(&self) -> Result<ScalarGrid2D> {
        ScalarGrid2D::zeros(
            self.f("wgrid.t_min"),
            self.f("wgrid.t_max"),
            self.f("wgrid.rho_max"),
            self.usize("wgrid.nt"),
            self.usize("wgrid.nrho"),
        )
    }

    pub fn comparison(&self) -> bool {
        self.get("solve.experiment") == "comparison"
    }

    pub fn solve_amplitude(&self) -> f64 {
        self.f("solve.amplitude")
    }

    pub fn ode_alpha(&self) -> bool {
        self.get("ode.equation") == "alpha"
    }

    pub fn ode_k(&self) -> u32 {
        self.u32("ode.k").expect("validated")
    }

    pub fn ode_value(&self, key: &str) -> f64 {
        self.f(&format!("ode.{key}"))
    }

    pub fn step_control(&self) -> StepControl {
        StepControl { tolerance: self.f("ode.tolerance"), ..StepControl::default() }
    }

    pub fn asym_km(&self) -> (u32, u32) {
        (self.u32("asym.k").expect("validated"), self.u32("asym.m").expect("validated"))
    }

    pub fn asym_value(&self, key: &str) -> f64 {
        self.f(&format!("asym.{key}"))
    }

    pub fn asym_samples(&self) -> usize {
        self.usize("asym.samples")
    }

    pub fn eval_point(&self) -> crate::model::PointTZ {
        crate::model::PointTZ::new(self.f("eval.t"), self.f("eval.x1"), self.f("eval.x2"))
    }

    pub fn table(&self) -> (f64, usize) {
        (self.f("table.rho_max"), self.usize("table.samples"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn model_degree_parses() {
        let c = parse_config_str("model.m = 2\n", &[]).unwrap();
        assert_eq!(c.model(), ModelParams { m: 2 });
        assert_eq!(c.family(), Family::Model { m: 2 });
    }

    #[test]
    fn negative_degree_is_rejected() {
        assert!(matches!(parse_config_str("model.m = -1", &[]), Err(Error::BadValue(k)) if k == "model.m"));
    }

    #[test]
    fn overrides_win_in_order() {
        let c = parse_config_str("grid.nt = 65", &["grid.nt=129".into()]).unwrap();
        assert_eq!(c.grid().n_t, 129);
        let c = parse_config_str("", &["grid.nt=65".into(), "grid.nt = 17".into()]).unwrap();
        assert_eq!(c.grid().n_t, 17);
    }

    #[test]
    fn comments_blank_lines_and_errors() {
        let text = "# header\n\n  run.seed = 7   # trailing\nfamily.kind = imposter\n";
        let c = parse_config_str(text, &[]).unwrap();
        assert_eq!(c.seed(), 7);
        assert_eq!(c.family(), Family::Imposter { w: C64::new(0.5, 0.0) });
        assert!(matches!(parse_config_str("a\nno equals sign", &[]), Err(Error::ParseError { line: 1, .. })));
        assert!(matches!(parse_config_str("grid.bogus = 1", &[]), Err(Error::UnknownKey(k)) if k == "grid.bogus"));
        assert!(matches!(parse_config_str("grid.t_max = 0.1", &[]), Err(Error::BadValue(_))));
        assert!(matches!(parse_config_str("flux.radii = 4,2", &[]), Err(Error::BadValue(_))));
        assert!(matches!(parse_config_str("family.kind = abelian\nabelian.r = 0", &[]), Err(Error::BadValue(_))));
        assert!(matches!(parse_config_str("", &["oops".into()]), Err(Error::ParseError { line: 0, .. })));
    }

    #[test]
    fn checks_take_the_family_degree() {
        let c = parse_config_str("model.m = 2\nresidual.checks = kw, w_equation,divergence", &[]).unwrap();
        assert_eq!(c.checks(), vec![Check::Kw, Check::WEquation { m: 2 }, Check::Divergence { m: 2 }]);
    }

    #[test]
    fn defaults_are_valid_and_complete() {
        let c = parse_config_str("", &[]).unwrap();
        assert_eq!(c.entries().len(), KEYS.len());
        assert_eq!(c.solver(), SolverConfig::default());
        assert_eq!(c.flux_truncation(), FluxTruncation::default());
        assert_eq!(c.grid(), GridSpec::default_box(33));
        for (k, d, kind) in KEYS {
            check_value(k, *kind, d).unwrap();
        }
    }
}
