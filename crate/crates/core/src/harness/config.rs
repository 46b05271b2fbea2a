//! Campaign files: TOML with one table per campaign.
//!
//! ```toml
//! [bounded]
//! kind = "invariant_region"
//! alpha = [0.5, 0.8, 1.0]
//! s = [0.4, 0.7]
//! n = 128
//! dt = 0.02
//! t_end = 50.0
//! profiles = ["plateau(0.9)", "sine(1)"]
//!
//! [bounded.tolerances]
//! bound = 1e-8
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use toml::{Table, Value};

use crate::error::{Error, Result};
use crate::rd_solver::{Profile, DEFAULT_BLOW_THRESHOLD};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CampaignKind {
    InvariantRegion,
    Decay,
    Blowup,
    MlTable,
    EigenConvergence,
    L1Convergence,
    ScalarBlowup,
    Comparison,
    Determinism,
}

impl CampaignKind {
    pub const ALL: [CampaignKind; 9] = [
        CampaignKind::InvariantRegion,
        CampaignKind::Decay,
        CampaignKind::Blowup,
        CampaignKind::MlTable,
        CampaignKind::EigenConvergence,
        CampaignKind::L1Convergence,
        CampaignKind::ScalarBlowup,
        CampaignKind::Comparison,
        CampaignKind::Determinism,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CampaignKind::InvariantRegion => "invariant_region",
            CampaignKind::Decay => "decay",
            CampaignKind::Blowup => "blowup",
            CampaignKind::MlTable => "ml_table",
            CampaignKind::EigenConvergence => "eigen_convergence",
            CampaignKind::L1Convergence => "l1_convergence",
            CampaignKind::ScalarBlowup => "scalar_blowup",
            CampaignKind::Comparison => "comparison",
            CampaignKind::Determinism => "determinism",
        }
    }

    /// Tolerance names accepted in the `tolerances` table, with defaults.
    pub fn default_tolerances(self) -> &'static [(&'static str, f64)] {
        match self {
            CampaignKind::InvariantRegion => &[("bound", 1e-8)],
            CampaignKind::Decay => &[("slope", 0.15), ("comparison_slack", 0.05)],
            CampaignKind::Blowup => &[("stability", 0.05)],
            CampaignKind::MlTable => &[("relative", 1e-10), ("reference", 1e-9)],
            CampaignKind::EigenConvergence => &[
                ("symmetry", 1e-12),
                ("psd", 1e-10),
                ("constants", 1e-12),
                ("oracle", 1e-10),
                ("cauchy_ratio", 1.5),
                ("poincare", 1e-12),
            ],
            CampaignKind::L1Convergence => &[("order_slack_low", 0.1), ("order_slack_high", 0.2)],
            CampaignKind::ScalarBlowup => &[("relative", 0.01)],
            CampaignKind::Comparison => &[("order", 1e-8)],
            CampaignKind::Determinism => &[],
        }
    }
}

impl std::str::FromStr for CampaignKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CampaignKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::parse("kind", format!("unknown campaign kind `{s}`")))
    }
}

/// Simulation sweep shared by the invariant-region and decay campaigns.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub alphas: Vec<f64>,
    pub s_values: Vec<f64>,
    pub domain: (f64, f64),
    pub n: usize,
    pub dt: f64,
    pub t_end: f64,
    pub profiles: Vec<Profile>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlowupSpec {
    pub alphas: Vec<f64>,
    pub s: f64,
    pub domain: (f64, f64),
    pub n: usize,
    /// Shape whose amplitude is scaled to hit each target `H₀`.
    pub profile: Profile,
    /// Targets `H₀ = factor·(1 + λ₁)`.
    pub h0_factors: Vec<f64>,
    /// Absolute targets for `H₀`.
    pub h0_targets: Vec<f64>,
    /// The initial step is `upper / steps_per_bracket`.
    pub steps_per_bracket: f64,
    pub blow_threshold: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenSpec {
    pub s_values: Vec<f64>,
    pub domain: (f64, f64),
    pub n: usize,
    pub n_sequence: Vec<usize>,
    pub probes: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct L1Spec {
    pub alphas: Vec<f64>,
    /// Steps `2^{−k}` for `k` in `k_min..=k_max`.
    pub k_min: u32,
    pub k_max: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalarBlowupSpec {
    pub y0: Vec<f64>,
    pub dts: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonSpec {
    pub pairs: usize,
    pub seed: u64,
    pub alphas: Vec<f64>,
    pub s_values: Vec<f64>,
    pub domain: (f64, f64),
    pub n: usize,
    pub dt: f64,
    pub t_end: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CampaignSpec {
    InvariantRegion(SweepSpec),
    Decay(SweepSpec),
    Blowup(BlowupSpec),
    /// Oracle table path; `None` uses the table shipped with the crate.
    MlTable {
        table: Option<String>,
    },
    EigenConvergence(EigenSpec),
    L1Convergence(L1Spec),
    ScalarBlowup(ScalarBlowupSpec),
    Comparison(ComparisonSpec),
    Determinism {
        target: String,
    },
}

impl CampaignSpec {
    pub fn kind(&self) -> CampaignKind {
        match self {
            CampaignSpec::InvariantRegion(_) => CampaignKind::InvariantRegion,
            CampaignSpec::Decay(_) => CampaignKind::Decay,
            CampaignSpec::Blowup(_) => CampaignKind::Blowup,
            CampaignSpec::MlTable { .. } => CampaignKind::MlTable,
            CampaignSpec::EigenConvergence(_) => CampaignKind::EigenConvergence,
            CampaignSpec::L1Convergence(_) => CampaignKind::L1Convergence,
            CampaignSpec::ScalarBlowup(_) => CampaignKind::ScalarBlowup,
            CampaignSpec::Comparison(_) => CampaignKind::Comparison,
            CampaignSpec::Determinism { .. } => CampaignKind::Determinism,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Campaign {
    pub name: String,
    pub spec: CampaignSpec,
    pub tolerances: BTreeMap<String, f64>,
}

impl Campaign {
    pub fn kind(&self) -> CampaignKind {
        self.spec.kind()
    }

    pub fn tolerance(&self, key: &str) -> f64 {
        self.tolerances[key]
    }
}

/// Typed access to one campaign table; remembers which keys were read.
struct Section<'a> {
    name: &'a str,
    table: &'a Table,
    used: Vec<&'static str>,
}

impl<'a> Section<'a> {
    fn context(&self) -> String {
        format!("campaign `{}`", self.name)
    }

    fn range(&self, key: &str, value: impl ToString, expected: &str) -> Error {
        Error::Range {
            context: self.context(),
            key: key.into(),
            value: value.to_string(),
            expected: expected.into(),
        }
    }

    fn get(&mut self, key: &'static str) -> Option<&'a Value> {
        self.used.push(key);
        self.table.get(key)
    }

    fn require(&mut self, key: &'static str) -> Result<&'a Value> {
        let ctx = self.context();
        self.get(key)
            .ok_or_else(|| Error::parse(ctx, format!("missing key `{key}`")))
    }

    fn wrong_type(&self, key: &str, expected: &str) -> Error {
        Error::parse(self.context(), format!("key `{key}` must be {expected}"))
    }

    fn as_f64(&self, key: &str, v: &Value) -> Result<f64> {
        let x = match v {
            Value::Float(f) => *f,
            Value::Integer(i) => *i as f64,
            _ => return Err(self.wrong_type(key, "a number")),
        };
        if !x.is_finite() {
            return Err(self.range(key, x, "finite"));
        }
        Ok(x)
    }

    fn f64_list(&mut self, key: &'static str) -> Result<Vec<f64>> {
        let v = self.require(key)?;
        self.list_of(key, v)
    }

    fn list_of(&self, key: &str, v: &Value) -> Result<Vec<f64>> {
        let list = match v {
            Value::Array(items) => items
                .iter()
                .map(|x| self.as_f64(key, x))
                .collect::<Result<Vec<_>>>()?,
            scalar => vec![self.as_f64(key, scalar)?],
        };
        if list.is_empty() {
            return Err(self.range(key, "[]", "at least one value"));
        }
        Ok(list)
    }

    fn opt_f64_list(&mut self, key: &'static str) -> Result<Vec<f64>> {
        match self.get(key) {
            None => Ok(Vec::new()),
            Some(v) => self.list_of(key, v),
        }
    }

    fn f64_or(&mut self, key: &'static str, default: Option<f64>) -> Result<f64> {
        match (self.get(key), default) {
            (Some(v), _) => self.as_f64(key, v),
            (None, Some(d)) => Ok(d),
            (None, None) => Err(Error::parse(self.context(), format!("missing key `{key}`"))),
        }
    }

    fn f64(&mut self, key: &'static str) -> Result<f64> {
        self.f64_or(key, None)
    }

    fn uint_or(&mut self, key: &'static str, default: Option<u64>) -> Result<u64> {
        match (self.get(key), default) {
            (Some(Value::Integer(i)), _) if *i >= 0 => Ok(*i as u64),
            (Some(Value::Integer(i)), _) => Err(self.range(key, i, "non-negative integer")),
            (Some(_), _) => Err(self.wrong_type(key, "an integer")),
            (None, Some(d)) => Ok(d),
            (None, None) => Err(Error::parse(self.context(), format!("missing key `{key}`"))),
        }
    }

    fn usize_or(&mut self, key: &'static str, default: Option<usize>) -> Result<usize> {
        let v = self.uint_or(key, default.map(|d| d as u64))?;
        usize::try_from(v).map_err(|_| self.range(key, v, "fits in usize"))
    }

    fn usize_list(&mut self, key: &'static str) -> Result<Vec<usize>> {
        let v = self.require(key)?;
        let Value::Array(items) = v else {
            return Err(self.wrong_type(key, "an array of integers"));
        };
        let out = items
            .iter()
            .map(|x| match x {
                Value::Integer(i) if *i >= 0 => Ok(*i as usize),
                _ => Err(self.wrong_type(key, "an array of non-negative integers")),
            })
            .collect::<Result<Vec<_>>>()?;
        if out.is_empty() {
            return Err(self.range(key, "[]", "at least one value"));
        }
        Ok(out)
    }

    fn string(&mut self, key: &'static str) -> Result<&'a str> {
        match self.require(key)? {
            Value::String(s) => Ok(s),
            _ => Err(self.wrong_type(key, "a string")),
        }
    }

    fn profile_list(&mut self, key: &'static str) -> Result<Vec<Profile>> {
        let ctx = self.context();
        let items: Vec<&str> = match self.require(key)? {
            Value::String(s) => vec![s.as_str()],
            Value::Array(items) => items
                .iter()
                .map(|x| {
                    x.as_str()
                        .ok_or_else(|| self.wrong_type(key, "an array of strings"))
                })
                .collect::<Result<_>>()?,
            _ => return Err(self.wrong_type(key, "a string or an array of strings")),
        };
        if items.is_empty() {
            return Err(self.range(key, "[]", "at least one profile"));
        }
        items
            .into_iter()
            .map(|p| {
                p.parse::<Profile>().map_err(|e| match e {
                    Error::Parse { context, message } => {
                        Error::parse(format!("{ctx}, key `{key}`, {context}"), message)
                    }
                    other => other,
                })
            })
            .collect()
    }

    fn domain(&mut self) -> Result<(f64, f64)> {
        let Some(v) = self.get("domain") else {
            return Ok((0.0, 1.0));
        };
        let list = self.list_of("domain", v)?;
        match list[..] {
            [a, b] if a < b => Ok((a, b)),
            _ => Err(self.range("domain", format!("{list:?}"), "two values a < b")),
        }
    }

    fn check_alphas(&self, alphas: &[f64]) -> Result<()> {
        for &a in alphas {
            if !(a > 0.0 && a <= 1.0) {
                return Err(self.range("alpha", a, "0 < alpha <= 1"));
            }
        }
        Ok(())
    }

    fn check_s(&self, s: &[f64]) -> Result<()> {
        for &v in s {
            if !(v > 0.0 && v < 1.0) {
                return Err(self.range("s", v, "0 < s < 1"));
            }
        }
        Ok(())
    }

    fn check_n(&self, key: &str, n: usize) -> Result<()> {
        if !(2..=4096).contains(&n) {
            return Err(self.range(key, n, "2 <= n <= 4096"));
        }
        Ok(())
    }

    fn check_positive(&self, key: &str, v: f64) -> Result<()> {
        if !(v > 0.0) {
            return Err(self.range(key, v, "> 0"));
        }
        Ok(())
    }

    fn time_axis(&mut self) -> Result<(f64, f64)> {
        let dt = self.f64("dt")?;
        let t_end = self.f64("t_end")?;
        self.check_positive("t_end", t_end)?;
        if !(dt > 0.0 && dt <= t_end) {
            return Err(self.range("dt", dt, "0 < dt <= t_end"));
        }
        Ok((dt, t_end))
    }

    fn sweep(&mut self, bounded_data: bool) -> Result<SweepSpec> {
        let alphas = self.f64_list("alpha")?;
        self.check_alphas(&alphas)?;
        let s_values = self.f64_list("s")?;
        self.check_s(&s_values)?;
        let domain = self.domain()?;
        let n = self.usize_or("n", None)?;
        self.check_n("n", n)?;
        let (dt, t_end) = self.time_axis()?;
        let profiles = self.profile_list("profiles")?;
        if bounded_data {
            for p in &profiles {
                let (lo, hi) = p.range();
                if lo < 0.0 || hi > 1.0 {
                    return Err(self.range("profiles", p, "values in [0, 1]"));
                }
            }
        }
        Ok(SweepSpec {
            alphas,
            s_values,
            domain,
            n,
            dt,
            t_end,
            profiles,
        })
    }

    fn finish(&self) -> Result<()> {
        for key in self.table.keys() {
            if !self.used.contains(&key.as_str()) {
                return Err(Error::parse(self.context(), format!("unknown key `{key}`")));
            }
        }
        Ok(())
    }
}

fn parse_campaign(name: &str, table: &Table) -> Result<Campaign> {
    let mut sec = Section {
        name,
        table,
        used: vec!["tolerances"],
    };
    let kind: CampaignKind = sec.string("kind")?.parse().map_err(|e| match e {
        Error::Parse { message, .. } => Error::parse(sec.context(), message),
        other => other,
    })?;
    let spec = match kind {
        CampaignKind::InvariantRegion => CampaignSpec::InvariantRegion(sec.sweep(true)?),
        CampaignKind::Decay => CampaignSpec::Decay(sec.sweep(true)?),
        CampaignKind::Blowup => {
            let alphas = sec.f64_list("alpha")?;
            sec.check_alphas(&alphas)?;
            let s = sec.f64("s")?;
            sec.check_s(&[s])?;
            let domain = sec.domain()?;
            let n = sec.usize_or("n", None)?;
            sec.check_n("n", n)?;
            let profile = match sec.get("profile") {
                None => Profile::Sine(1.0),
                Some(Value::String(p)) => p.parse()?,
                Some(_) => return Err(sec.wrong_type("profile", "a string")),
            };
            let h0_factors = sec.opt_f64_list("h0_factors")?;
            let h0_targets = sec.opt_f64_list("h0_targets")?;
            if h0_factors.is_empty() && h0_targets.is_empty() {
                return Err(Error::parse(
                    sec.context(),
                    "missing key `h0_factors` (or `h0_targets`): an amplitude scan is required",
                ));
            }
            for &f in h0_factors.iter() {
                sec.check_positive("h0_factors", f)?;
            }
            for &f in h0_targets.iter() {
                sec.check_positive("h0_targets", f)?;
            }
            let steps_per_bracket = sec.f64_or("steps_per_bracket", Some(200.0))?;
            if !(steps_per_bracket >= 2.0) {
                return Err(sec.range("steps_per_bracket", steps_per_bracket, ">= 2"));
            }
            let blow_threshold = sec.f64_or("blow_threshold", Some(DEFAULT_BLOW_THRESHOLD))?;
            sec.check_positive("blow_threshold", blow_threshold)?;
            CampaignSpec::Blowup(BlowupSpec {
                alphas,
                s,
                domain,
                n,
                profile,
                h0_factors,
                h0_targets,
                steps_per_bracket,
                blow_threshold,
            })
        }
        CampaignKind::MlTable => {
            let table = match sec.get("table") {
                None => None,
                Some(Value::String(p)) => Some(p.clone()),
                Some(_) => return Err(sec.wrong_type("table", "a path string")),
            };
            CampaignSpec::MlTable { table }
        }
        CampaignKind::EigenConvergence => {
            let s_values = sec.f64_list("s")?;
            sec.check_s(&s_values)?;
            let domain = sec.domain()?;
            let n = sec.usize_or("n", Some(64))?;
            sec.check_n("n", n)?;
            let n_sequence = sec.usize_list("n_sequence")?;
            for &m in &n_sequence {
                sec.check_n("n_sequence", m)?;
            }
            if n_sequence.len() < 3 || n_sequence.windows(2).any(|w| w[1] <= w[0]) {
                return Err(sec.range(
                    "n_sequence",
                    format!("{n_sequence:?}"),
                    "at least three increasing sizes",
                ));
            }
            let probes = sec.usize_or("probes", Some(100))?;
            if probes == 0 {
                return Err(sec.range("probes", 0, ">= 1"));
            }
            let seed = sec.uint_or("seed", Some(1))?;
            CampaignSpec::EigenConvergence(EigenSpec {
                s_values,
                domain,
                n,
                n_sequence,
                probes,
                seed,
            })
        }
        CampaignKind::L1Convergence => {
            let alphas = sec.f64_list("alpha")?;
            sec.check_alphas(&alphas)?;
            let k_min = sec.uint_or("k_min", Some(6))?;
            let k_max = sec.uint_or("k_max", Some(12))?;
            if !(k_min < k_max && k_max - k_min >= 2 && k_max <= 20) {
                return Err(sec.range("k_max", k_max, "k_min + 2 <= k_max <= 20"));
            }
            CampaignSpec::L1Convergence(L1Spec {
                alphas,
                k_min: k_min as u32,
                k_max: k_max as u32,
            })
        }
        CampaignKind::ScalarBlowup => {
            let y0 = sec.f64_list("y0")?;
            for &y in &y0 {
                sec.check_positive("y0", y)?;
            }
            let dts = sec.f64_list("dt")?;
            for &d in &dts {
                if !(d > 0.0 && d < 1.0) {
                    return Err(sec.range("dt", d, "0 < dt < 1"));
                }
            }
            CampaignSpec::ScalarBlowup(ScalarBlowupSpec { y0, dts })
        }
        CampaignKind::Comparison => {
            let pairs = sec.usize_or("pairs", None)?;
            if pairs == 0 || pairs > 10_000 {
                return Err(sec.range("pairs", pairs, "1 <= pairs <= 10000"));
            }
            let seed = sec.uint_or("seed", Some(1))?;
            let alphas = sec.f64_list("alpha")?;
            sec.check_alphas(&alphas)?;
            let s_values = sec.f64_list("s")?;
            sec.check_s(&s_values)?;
            let domain = sec.domain()?;
            let n = sec.usize_or("n", None)?;
            sec.check_n("n", n)?;
            let (dt, t_end) = sec.time_axis()?;
            CampaignSpec::Comparison(ComparisonSpec {
                pairs,
                seed,
                alphas,
                s_values,
                domain,
                n,
                dt,
                t_end,
            })
        }
        CampaignKind::Determinism => CampaignSpec::Determinism {
            target: sec.string("target")?.to_string(),
        },
    };
    sec.used.push("kind");
    sec.finish()?;

    let mut tolerances: BTreeMap<String, f64> = kind
        .default_tolerances()
        .iter()
        .map(|(k, v)| (k.to_string(), *v))
        .collect();
    match table.get("tolerances") {
        None => {}
        Some(Value::Table(t)) => {
            for (key, value) in t {
                if !tolerances.contains_key(key) {
                    return Err(Error::parse(
                        sec.context(),
                        format!("unknown tolerance `{key}`"),
                    ));
                }
                let v = sec.as_f64(key, value)?;
                sec.check_positive(key, v)?;
                tolerances.insert(key.clone(), v);
            }
        }
        Some(_) => return Err(sec.wrong_type("tolerances", "a table")),
    }
    Ok(Campaign {
        name: name.to_string(),
        spec,
        tolerances,
    })
}

/// Parses and validates a campaign file's contents.
pub fn parse_config_str(text: &str) -> Result<Vec<Campaign>> {
    let root: Table = text.parse().map_err(|e: toml::de::Error| {
        Error::parse("config", e.to_string().trim_end().to_string())
    })?;
    let mut campaigns = Vec::with_capacity(root.len());
    for (name, value) in &root {
        let Value::Table(table) = value else {
            return Err(Error::parse(
                "config",
                format!("top-level key `{name}` must be a campaign table"),
            ));
        };
        campaigns.push(parse_campaign(name, table)?);
    }
    for c in &campaigns {
        if let CampaignSpec::Determinism { target } = &c.spec {
            let found = campaigns.iter().find(|o| &o.name == target);
            match found {
                None => {
                    return Err(Error::Range {
                        context: format!("campaign `{}`", c.name),
                        key: "target".into(),
                        value: target.clone(),
                        expected: "name of another campaign in the file".into(),
                    })
                }
                Some(o) if o.kind() == CampaignKind::Determinism => {
                    return Err(Error::Range {
                        context: format!("campaign `{}`", c.name),
                        key: "target".into(),
                        value: target.clone(),
                        expected: "a campaign that is not itself a determinism check".into(),
                    })
                }
                Some(_) => {}
            }
        }
    }
    Ok(campaigns)
}

pub fn parse_config(path: &Path) -> Result<Vec<Campaign>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config_str(&text).map_err(|e| match e {
        Error::Parse { context, message } => {
            Error::parse(format!("{}: {context}", path.display()), message)
        }
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const DECAY: &str = r#"
[slow]
kind = "decay"
alpha = [0.5, 0.8]
s = 0.5
n = 64
dt = 0.1
t_end = 1000
profiles = ["plateau(0.9)"]
"#;

    #[test]
    fn minimal_decay_campaign() {
        let c = parse_config_str(DECAY).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].kind(), CampaignKind::Decay);
        assert_eq!(c[0].name, "slow");
        assert_eq!(c[0].tolerance("slope"), 0.15);
        let CampaignSpec::Decay(sw) = &c[0].spec else {
            panic!()
        };
        assert_eq!(sw.alphas, vec![0.5, 0.8]);
        assert_eq!(sw.s_values, vec![0.5]);
        assert_eq!(sw.domain, (0.0, 1.0));
    }

    fn range_key(text: &str) -> String {
        match parse_config_str(text) {
            Err(Error::Range { key, .. }) => key,
            other => panic!("expected range error, got {other:?}"),
        }
    }

    fn parse_message(text: &str) -> String {
        match parse_config_str(text) {
            Err(Error::Parse { message, .. }) => message,
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn alpha_out_of_range_names_alpha() {
        assert_eq!(range_key(&DECAY.replace("[0.5, 0.8]", "1.5")), "alpha");
    }

    #[test]
    fn missing_s_names_s() {
        assert!(parse_message(&DECAY.replace("s = 0.5\n", "")).contains("`s`"));
    }

    #[test]
    fn other_rejections() {
        assert_eq!(range_key(&DECAY.replace("n = 64", "n = 1")), "n");
        assert_eq!(range_key(&DECAY.replace("dt = 0.1", "dt = 2000")), "dt");
        assert_eq!(
            range_key(&DECAY.replace("t_end = 1000", "t_end = 0")),
            "t_end"
        );
        assert_eq!(
            range_key(&DECAY.replace("plateau(0.9)", "sine(3)")),
            "profiles"
        );
        assert!(
            parse_message(&DECAY.replace("kind = \"decay\"", "kind = \"other\"")).contains("other")
        );
        assert!(parse_message(&format!("{DECAY}extra = 1\n")).contains("extra"));
        assert!(
            parse_message(&format!("{DECAY}[slow.tolerances]\nwhatever = 1\n"))
                .contains("whatever")
        );
        assert!(parse_message("x = 1").contains("campaign table"));
        assert!(parse_message("[a\nkind=").contains("line"));
        assert!(parse_message(&DECAY.replace("n = 64", "n = \"64\"")).contains("`n`"));
    }

    #[test]
    fn tolerance_overrides() {
        let c = parse_config_str(&format!("{DECAY}[slow.tolerances]\nslope = 0.3\n")).unwrap();
        assert_eq!(c[0].tolerance("slope"), 0.3);
        assert_eq!(c[0].tolerance("comparison_slack"), 0.05);
    }

    #[test]
    fn blowup_requires_amplitude_scan() {
        let text = "[b]\nkind = \"blowup\"\nalpha = [1.0]\ns = 0.5\nn = 32\n";
        assert!(parse_message(text).contains("h0_factors"));
        let ok = parse_config_str(&format!("{text}h0_targets = [2.0]\n")).unwrap();
        let CampaignSpec::Blowup(b) = &ok[0].spec else {
            panic!()
        };
        assert_eq!(b.profile, Profile::Sine(1.0));
        assert_eq!(b.blow_threshold, DEFAULT_BLOW_THRESHOLD);
    }

    #[test]
    fn determinism_target_must_exist() {
        let text = format!("{DECAY}\n[again]\nkind = \"determinism\"\ntarget = \"slow\"\n");
        assert_eq!(parse_config_str(&text).unwrap().len(), 2);
        assert_eq!(
            range_key(&text.replace("target = \"slow\"", "target = \"nope\"")),
            "target"
        );
        assert_eq!(
            range_key(&text.replace("target = \"slow\"", "target = \"again\"")),
            "target"
        );
    }

    #[test]
    fn every_kind_parses() {
        let text = r#"
[a]
kind = "invariant_region"
alpha = 1
s = [0.4]
n = 8
dt = 0.1
t_end = 1
profiles = "sine(1)"
[b]
kind = "ml_table"
[c]
kind = "eigen_convergence"
s = [0.5]
n_sequence = [8, 16, 32]
[d]
kind = "l1_convergence"
alpha = [0.5]
[e]
kind = "scalar_blowup"
y0 = [1.0]
dt = [1e-3]
[f]
kind = "comparison"
pairs = 2
alpha = 0.5
s = 0.5
n = 8
dt = 0.1
t_end = 1
[g]
kind = "blowup"
alpha = 1
s = 0.5
n = 8
h0_factors = [4]
"#;
        let kinds: Vec<CampaignKind> = parse_config_str(text)
            .unwrap()
            .iter()
            .map(|c| c.kind())
            .collect();
        assert_eq!(kinds.len(), 7);
    }
}
