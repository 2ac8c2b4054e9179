//! Batch verification harness: a registry of named checks, suite selection
//! over parameter sweeps, and deterministic text/JSON reports.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::arith::{q, GaussianRational};
use crate::error::{Error, Result};
use crate::gkmodule::{self, ModuleParams, Sample, Sign, TruncatedElement};
use crate::liealg::{self, CasimirKind, EnvelopingElement, Flavor, LieAlgebra, LieElement, Signature};
use crate::poly::{harmonic_basis, harmonic_dimension, Block, MultiPoly};
use crate::symsq::{self, SymSquareTensor};
use crate::weyl::WeylOperator;

type GR = GaussianRational;

/// `(p, q, m)` triples used when none are given.
pub const DEFAULT_SWEEP: [(usize, usize, usize); 5] = [(2, 4, 0), (3, 3, 0), (4, 4, 0), (4, 4, 1), (4, 6, 2)];

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Lie,
    Weyl,
    Casimir,
    Module,
    Paction,
    Symsq,
    Garfinkle,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Lie,
        Suite::Weyl,
        Suite::Casimir,
        Suite::Module,
        Suite::Paction,
        Suite::Symsq,
        Suite::Garfinkle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lie => "lie",
            Suite::Weyl => "weyl",
            Suite::Casimir => "casimir",
            Suite::Module => "module",
            Suite::Paction => "paction",
            Suite::Symsq => "symsq",
            Suite::Garfinkle => "garfinkle",
        }
    }

    /// Whether the suite works with module parameters and so needs them
    /// to be admissible.
    pub fn needs_module(self) -> bool {
        matches!(self, Suite::Casimir | Suite::Module | Suite::Paction | Suite::Garfinkle)
    }

    /// Parses a comma-separated list; `all` selects every suite.
    pub fn parse_list(s: &str) -> Result<Vec<Suite>> {
        let mut out = BTreeSet::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            if part == "all" {
                out.extend(Suite::ALL);
                continue;
            }
            let suite = Suite::ALL
                .into_iter()
                .find(|x| x.name() == part)
                .ok_or_else(|| Error::InvalidConfig(format!("unknown suite '{part}'")))?;
            out.insert(suite);
        }
        if out.is_empty() {
            return Err(Error::InvalidConfig("no suites selected".into()));
        }
        Ok(out.into_iter().collect())
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            other => Err(Error::InvalidConfig(format!("unknown format '{other}'"))),
        }
    }
}

/// Settings as given by flags or a config file, before defaults apply.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConfigOverrides {
    pub p: Option<usize>,
    pub q: Option<usize>,
    pub m: Option<usize>,
    pub max_degree: Option<i64>,
    pub k_max: Option<usize>,
    pub l_max: Option<usize>,
    pub paction_max: Option<usize>,
    pub suite: Option<String>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
}

fn parse_value<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| Error::InvalidConfig(format!("bad value '{v}' for '{key}'")))
}

impl ConfigOverrides {
    /// Reads `key = value` lines; `#` starts a comment. Keys mirror the
    /// long flags, with `-` or `_`.
    pub fn from_kv(text: &str) -> Result<Self> {
        let mut c = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::InvalidConfig(format!("line {}: expected key=value", lineno + 1)))?;
            let key = key.trim().replace('-', "_");
            let value = value.trim();
            match key.as_str() {
                "p" => c.p = Some(parse_value(&key, value)?),
                "q" => c.q = Some(parse_value(&key, value)?),
                "m" => c.m = Some(parse_value(&key, value)?),
                "max_degree" => c.max_degree = Some(parse_value(&key, value)?),
                "k_max" => c.k_max = Some(parse_value(&key, value)?),
                "l_max" => c.l_max = Some(parse_value(&key, value)?),
                "paction_max" => c.paction_max = Some(parse_value(&key, value)?),
                "suite" | "suites" => c.suite = Some(value.to_string()),
                "format" => c.format = Some(value.parse()?),
                "out" => c.out = Some(PathBuf::from(value)),
                other => return Err(Error::InvalidConfig(format!("unknown key '{other}'"))),
            }
        }
        Ok(c)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::from_kv(&std::fs::read_to_string(path)?)
    }

    /// Fields set in `self` win over those in `base`.
    pub fn over(self, base: Self) -> Self {
        Self {
            p: self.p.or(base.p),
            q: self.q.or(base.q),
            m: self.m.or(base.m),
            max_degree: self.max_degree.or(base.max_degree),
            k_max: self.k_max.or(base.k_max),
            l_max: self.l_max.or(base.l_max),
            paction_max: self.paction_max.or(base.paction_max),
            suite: self.suite.or(base.suite),
            format: self.format.or(base.format),
            out: self.out.or(base.out),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteConfig {
    /// `(p, q, m)` triples.
    pub sweep: Vec<(usize, usize, usize)>,
    /// Truncation degree; `None` means `2m + 12` per triple.
    pub max_degree: Option<i64>,
    pub k_max: usize,
    pub l_max: usize,
    pub paction_max: usize,
    pub suites: Vec<Suite>,
    pub format: Format,
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

impl SuiteConfig {
    pub fn resolve(c: ConfigOverrides) -> Result<Self> {
        let sweep = match (c.p, c.q, c.m) {
            (None, None, None) => DEFAULT_SWEEP.to_vec(),
            (Some(p), Some(q), m) => vec![(p, q, m.unwrap_or(0))],
            _ => return Err(Error::InvalidConfig("give both p and q, or neither".into())),
        };
        let cfg = Self {
            sweep,
            max_degree: c.max_degree,
            k_max: c.k_max.unwrap_or(3),
            l_max: c.l_max.unwrap_or(3),
            paction_max: c.paction_max.unwrap_or(2),
            suites: Suite::parse_list(c.suite.as_deref().unwrap_or("all"))?,
            format: c.format.unwrap_or(Format::Text),
            out: c.out,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let needs_module = self.suites.iter().any(|s| s.needs_module());
        for &(p, q, m) in &self.sweep {
            if p + q < 2 || p == 0 || q == 0 {
                return Err(Error::InvalidConfig(format!("p = {p}, q = {q}: both blocks must be nonempty")));
            }
            if needs_module {
                ModuleParams::new(p, q, m, Sign::Plus)
                    .validate()
                    .map_err(|e| Error::InvalidConfig(e.to_string()))?;
            }
        }
        if let Some(d) = self.max_degree {
            if d < 0 {
                return Err(Error::InvalidConfig(format!("max-degree {d} is negative")));
            }
        }
        Ok(())
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
enum Scope {
    /// Depends on `(p, q)` only.
    Signature,
    /// Depends on `(p, q, m)` and the truncation degree.
    Module,
}

/// Inputs of one check invocation.
#[derive(Clone, Debug)]
pub struct Job {
    pub params: ModuleParams,
    pub validity: i64,
    pub k_max: usize,
    pub l_max: usize,
    pub paction_max: usize,
}

impl Job {
    fn sig(&self) -> Signature {
        self.params.signature()
    }

    /// Signs whose modules differ: both for `m > 0`, one for `m = 0`.
    fn signs(&self) -> Vec<Sign> {
        if self.params.m == 0 {
            vec![Sign::Plus]
        } else {
            vec![Sign::Plus, Sign::Minus]
        }
    }
}

pub struct Outcome {
    pub passed: bool,
    pub validity: Option<i64>,
    pub detail: Value,
}

impl Outcome {
    fn new(passed: bool, detail: Value) -> Self {
        Self {
            passed,
            validity: None,
            detail,
        }
    }

    fn at(mut self, validity: i64) -> Self {
        self.validity = Some(validity);
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckInfo {
    pub name: &'static str,
    pub suite: Suite,
    /// The identity being verified.
    pub anchor: &'static str,
}

struct Check {
    info: CheckInfo,
    scope: Scope,
    run: fn(&Job) -> Result<Outcome>,
}

macro_rules! check {
    ($name:literal, $suite:ident, $scope:ident, $anchor:literal, $run:expr) => {
        Check {
            info: CheckInfo {
                name: $name,
                suite: Suite::$suite,
                anchor: $anchor,
            },
            scope: Scope::$scope,
            run: $run,
        }
    };
}

fn registry() -> Vec<Check> {
    vec![
        check!("lie.bracket_structure", Lie, Signature, "structure constants agree with matrix commutators of the X_ij", lie_bracket_structure),
        check!("lie.jacobi", Lie, Signature, "Jacobi identity on all basis triples of g", lie_jacobi),
        check!("lie.form_dual_basis", Lie, Signature, "B(X_ij, X_kl^dual) = delta for B(X,Y) = tr(XY)/2", lie_dual_basis),
        check!("lie.phi_isomorphism", Lie, Signature, "Phi: g -> o_n respects brackets", lie_phi_isomorphism),
        check!("lie.pi_homomorphism", Lie, Signature, "[pi(X), pi(Y)] = pi([X, Y]) on generators", lie_pi_homomorphism),
        check!("lie.sl2_relations", Lie, Signature, "[H, X+] = 2X+, [H, X-] = -2X-, [X+, X-] = H", lie_sl2_relations),
        check!("lie.commutant", Lie, Signature, "pi(g) commutes with H, X+, X-", lie_commutant),
        check!("lie.pbw_confluence", Lie, Signature, "PBW normal form is independent of the rewriting order", lie_pbw_confluence),
        check!("lie.casimir_central", Lie, Signature, "Omega_g is central in U(g)", lie_casimir_central),
        check!("weyl.ccr", Weyl, Signature, "[d_i, x_j] = delta_ij, [x_i, x_j] = [d_i, d_j] = 0", weyl_ccr),
        check!("weyl.compose_apply", Weyl, Signature, "(A B) f = A (B f)", weyl_compose_apply),
        check!("weyl.harmonic_dimension", Weyl, Signature, "dim H^k(R^n) = C(n+k-1, n-1) - C(n+k-3, n-1)", weyl_harmonic_dimension),
        check!("weyl.product_rule", Weyl, Signature, "Delta(h phi(rho)) = (2d+n) h phi'(rho) + 2 rho h phi''(rho) for harmonic h", weyl_product_rule),
        check!("weyl.dagger_harmonic", Weyl, Signature, "(x_i h)^dagger is harmonic for harmonic h", weyl_dagger_harmonic),
        check!("casimir.g_closed_form", Casimir, Signature, "pi(Omega_g) equals its closed form in E, r^2, Delta", casimir_g_closed_form),
        check!("casimir.op_closed_form", Casimir, Signature, "pi(Omega_op) = E_x^2 + (p-2)E_x - r_x^2 Delta_x", casimir_op_closed_form),
        check!("casimir.oq_closed_form", Casimir, Signature, "pi(Omega_oq) = E_y^2 + (q-2)E_y - r_y^2 Delta_y", casimir_oq_closed_form),
        check!("casimir.sl2_relation", Casimir, Signature, "pi(Omega_g) = Omega_g' - (p+q)^2/4 + (p+q)", casimir_sl2_relation),
        check!("casimir.op_eigenvalue", Casimir, Module, "Omega_op acts by (kappa_+ - 1)^2 - (p-2)^2/4 on K-type kappa", casimir_op_eigenvalue),
        check!("casimir.oq_eigenvalue", Casimir, Module, "Omega_oq acts by (kappa_- - 1)^2 - (q-2)^2/4 on K-type kappa", casimir_oq_eigenvalue),
        check!("casimir.g_eigenvalue", Casimir, Module, "Omega_g acts by m(m+2) - (p+q)^2/4 + (p+q)", casimir_g_eigenvalue),
        check!("casimir.xi_eigenvalue", Casimir, Module, "pi(gamma2(Xi)) acts by (k+ - k-)(k+ + k- - 2) - ((p-q)/(p+q)) m(m+2)", casimir_xi_eigenvalue),
        check!("module.psi_recurrence", Module, Module, "c_{j+1} (j+1)(alpha+j) + c_j = 0, c_0 = 1", module_psi_recurrence),
        check!("module.ktype_formula", Module, Module, "K-types are kappa_+ - kappa_- in {-m, -m+2, ..., m} with multiplicity dim H^k dim H^l", module_ktype_formula),
        check!("module.membership_plus", Module, Module, "Hf = mf, X+ f = 0, (X-)^(m+1) f = 0", module_membership_plus),
        check!("module.membership_minus", Module, Module, "Hf = -mf, X- f = 0, (X+)^(m+1) f = 0", module_membership_minus),
        check!("module.apply_exact", Module, Module, "truncated application agrees with exact application and is linear", module_apply_exact),
        check!("paction.plus", Paction, Module, "four-term p-action on h1 h2 rho_y^mu psi_kappa+", paction_plus),
        check!("paction.minus", Paction, Module, "four-term p-action on h1 h2 rho_x^mu psi_kappa-", paction_minus),
        check!("symsq.q_lemma", Symsq, Signature, "gamma2(Q) = 2 Omega_g and Phi^-1(Q^) = Q", symsq_q_lemma),
        check!("symsq.xi_closed_form", Symsq, Signature, "Phi^-1 of (sum S_ii over [p] - over p+[q])/2 equals the closed form of Xi", symsq_xi_closed_form),
        check!("symsq.xi_lemma", Symsq, Signature, "gamma2(Xi) = Omega_op - Omega_oq - ((p-q)/(p+q)) Omega_g", symsq_xi_lemma),
        check!("symsq.s4_vanishing", Symsq, Signature, "pi(Phi^-1(S_ijkl)) = 0 for all i<j<k<l", symsq_s4_vanishing),
        check!("symsq.s2_trace", Symsq, Signature, "S_ij symmetric, sum_i S_ii = 0", symsq_s2_trace),
        check!("symsq.q_invariance", Symsq, Signature, "ad(X) Q = 0 for g and o_n", symsq_q_invariance),
        check!("symsq.decomposition", Symsq, Signature, "S^2(o_n) = E_0 + E_(1111) + E_(2) + E_(22), invariant, direct", symsq_decomposition),
        check!("symsq.highest_weight", Symsq, Signature, "e_alpha (x) e_alpha lies in E_(22)", symsq_highest_weight),
        check!("garfinkle.obstruction", Garfinkle, Module, "pi(Y) f = (lambda_kappa - lambda) f solvable iff m = 0", garfinkle_obstruction),
        check!("garfinkle.theorem", Garfinkle, Module, "annihilator is the Joseph ideal iff m = 0, failing at the E_(2) step", garfinkle_theorem),
    ]
}

pub fn list_checks() -> Vec<CheckInfo> {
    registry().into_iter().map(|c| c.info).collect()
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Error => "ERROR",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub params: BTreeMap<String, i64>,
    pub status: Status,
    pub validity: Option<i64>,
    pub detail: Value,
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub errors: usize,
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub config: SuiteConfig,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        i32::from(self.summary.failed + self.summary.errors > 0)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let params: Vec<String> = c.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let validity = c.validity.map(|v| format!(" D={v}")).unwrap_or_default();
            out.push_str(&format!(
                "{:<5} {} [{}]{} {}\n",
                c.status.to_string(),
                c.name,
                params.join(" "),
                validity,
                c.detail
            ));
        }
        let s = &self.summary;
        out.push_str(&format!(
            "{} checks: {} passed, {} failed, {} errors\n",
            s.total, s.passed, s.failed, s.errors
        ));
        out
    }

    pub fn render(&self) -> String {
        match self.config.format {
            Format::Text => self.to_text(),
            Format::Json => self.to_json(),
        }
    }
}

fn record_params(job: &Job, scope: Scope) -> BTreeMap<String, i64> {
    let mut m = BTreeMap::new();
    m.insert("p".to_string(), job.params.p as i64);
    m.insert("q".to_string(), job.params.q as i64);
    if scope == Scope::Module {
        m.insert("m".to_string(), job.params.m as i64);
        m.insert("D".to_string(), job.validity);
    }
    m
}

/// Runs every selected check over the sweep. Checks run on the current rayon
/// pool; the report is assembled in sorted order.
pub fn run(config: &SuiteConfig) -> Result<Report> {
    config.validate()?;
    let start = Instant::now();
    let checks = registry();
    let mut jobs: Vec<(usize, Job)> = Vec::new();
    let mut seen = BTreeSet::new();
    for (ci, c) in checks.iter().enumerate() {
        if !config.suites.contains(&c.info.suite) {
            continue;
        }
        for &(p, q, m) in &config.sweep {
            let params = ModuleParams::new(p, q, m, Sign::Plus);
            let validity = config.max_degree.unwrap_or_else(|| params.default_validity());
            let key = match c.scope {
                Scope::Signature => (ci, p, q, 0, 0),
                Scope::Module => (ci, p, q, m, validity),
            };
            if !seen.insert(key) {
                continue;
            }
            jobs.push((
                ci,
                Job {
                    params,
                    validity,
                    k_max: config.k_max,
                    l_max: config.l_max,
                    paction_max: config.paction_max,
                },
            ));
        }
    }
    let mut records: Vec<CheckRecord> = jobs
        .par_iter()
        .map(|(ci, job)| {
            let c = &checks[*ci];
            let t = Instant::now();
            let result = (c.run)(job);
            let elapsed_ms = t.elapsed().as_millis() as u64;
            let (status, validity, detail) = match result {
                Ok(o) => (if o.passed { Status::Pass } else { Status::Fail }, o.validity, o.detail),
                Err(e) => (Status::Error, None, json!({ "error": e.to_string() })),
            };
            CheckRecord {
                name: c.info.name.to_string(),
                params: record_params(job, c.scope),
                status,
                validity,
                detail,
                elapsed_ms,
            }
        })
        .collect();
    records.sort_by(|a, b| {
        let key = |r: &CheckRecord| (r.name.clone(), ["p", "q", "m", "D"].map(|k| r.params.get(k).copied()));
        key(a).cmp(&key(b))
    });
    let count = |s: Status| records.iter().filter(|r| r.status == s).count();
    let summary = Summary {
        total: records.len(),
        passed: count(Status::Pass),
        failed: count(Status::Fail),
        errors: count(Status::Error),
        elapsed_ms: start.elapsed().as_millis() as u64,
    };
    Ok(Report {
        config: config.clone(),
        checks: records,
        summary,
    })
}

/// Removes timing fields so that reports can be compared.
pub fn strip_timing(report: &mut Value) {
    if let Some(checks) = report.get_mut("checks").and_then(Value::as_array_mut) {
        for c in checks {
            if let Some(obj) = c.as_object_mut() {
                obj.remove("elapsed_ms");
            }
        }
    }
    if let Some(s) = report.get_mut("summary").and_then(Value::as_object_mut) {
        s.remove("elapsed_ms");
    }
}

/// Worker count from `GKVERIFY_THREADS`, if set.
pub fn threads_from_env() -> Result<Option<usize>> {
    match std::env::var("GKVERIFY_THREADS") {
        Ok(v) => {
            let n: usize = parse_value("GKVERIFY_THREADS", v.trim())?;
            if n == 0 {
                return Err(Error::InvalidConfig("GKVERIFY_THREADS must be positive".into()));
            }
            Ok(Some(n))
        }
        Err(_) => Ok(None),
    }
}

/// Runs on a dedicated pool sized by `GKVERIFY_THREADS` and writes the
/// rendered report to the configured path, if any.
pub fn run_and_write(config: &SuiteConfig) -> Result<Report> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads_from_env()? {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
    let report = pool.install(|| run(config))?;
    if let Some(path) = &config.out {
        std::fs::write(path, report.render())?;
    }
    Ok(report)
}

fn basis_elements(sig: Signature, flavor: Flavor) -> Result<Vec<LieElement>> {
    LieAlgebra::get(sig, flavor)
        .basis()
        .iter()
        .map(|g| LieElement::generator(sig, flavor, g.i, g.j))
        .collect()
}

fn lie_bracket_structure(job: &Job) -> Result<Outcome> {
    let sig = job.sig();
    let mut bad = Vec::new();
    let mut pairs = 0;
    for flavor in [Flavor::G, Flavor::On] {
        let alg = LieAlgebra::get(sig, flavor);
        let mats: Vec<_> = alg.basis().iter().map(|g| alg.generator_matrix(*g)).collect();
        for a in 0..alg.dim() {
            for b in 0..alg.dim() {
                pairs += 1;
                let comm = liealg::mat_sub(&liealg::matmul(&mats[a], &mats[b]), &liealg::matmul(&mats[b], &mats[a]));
                if alg.decompose_matrix(&comm).as_ref() != Some(alg.bracket_basis(a, b)) {
                    bad.push(format!("{:?}/{:?}", alg.basis()[a], alg.basis()[b]));
                }
            }
        }
    }
    Ok(Outcome::new(bad.is_empty(), json!({ "pairs": pairs, "mismatches": bad })))
}

fn lie_jacobi(job: &Job) -> Result<Outcome> {
    let xs = basis_elements(job.sig(), Flavor::G)?;
    let d = xs.len();
    let mut triples = 0;
    let mut bad = 0;
    for a in 0..d {
        for b in a + 1..d {
            let ab = xs[a].bracket(&xs[b])?;
            for c in b + 1..d {
                triples += 1;
                let s = xs[a]
                    .bracket(&xs[b].bracket(&xs[c])?)?
                    .add(&xs[b].bracket(&xs[c].bracket(&xs[a])?)?)?
                    .add(&xs[c].bracket(&ab)?)?;
                if !s.is_zero() {
                    bad += 1;
                }
            }
        }
    }
    Ok(Outcome::new(bad == 0, json!({ "triples": triples, "violations": bad })))
}

fn lie_dual_basis(job: &Job) -> Result<Outcome> {
    let sig = job.sig();
    let alg = LieAlgebra::get(sig, Flavor::G);
    let xs = basis_elements(sig, Flavor::G)?;
    let mut bad = 0;
    for (a, x) in xs.iter().enumerate() {
        for (b, g) in alg.basis().iter().enumerate() {
            let v = x.form_b(&liealg::dual_generator(sig, g.i, g.j)?)?;
            let expect = if a == b { GR::one() } else { GR::zero() };
            if v != expect {
                bad += 1;
            }
        }
    }
    Ok(Outcome::new(bad == 0, json!({ "pairs": xs.len() * xs.len(), "violations": bad })))
}

fn lie_phi_isomorphism(job: &Job) -> Result<Outcome> {
    let xs = basis_elements(job.sig(), Flavor::G)?;
    let mut bad = 0;
    for a in &xs {
        for b in &xs {
            if a.bracket(b)?.phi()? != a.phi()?.bracket(&b.phi()?)? {
                bad += 1;
            }
        }
    }
    Ok(Outcome::new(bad == 0, json!({ "pairs": xs.len() * xs.len(), "violations": bad })))
}

fn lie_pi_homomorphism(job: &Job) -> Result<Outcome> {
    let xs = basis_elements(job.sig(), Flavor::G)?;
    let ops: Vec<WeylOperator> = xs.iter().map(liealg::pi_lie).collect::<Result<_>>()?;
    let mut bad = Vec::new();
    for a in 0..xs.len() {
        for b in a + 1..xs.len() {
            if ops[a].commutator(&ops[b])? != liealg::pi_lie(&xs[a].bracket(&xs[b])?)? {
                bad.push(format!("{:?}", (xs[a].coeffs().keys().next(), xs[b].coeffs().keys().next())));
            }
        }
    }
    let pairs = xs.len() * (xs.len() - 1) / 2;
    Ok(Outcome::new(bad.is_empty(), json!({ "pairs": pairs, "mismatches": bad })))
}

fn lie_sl2_relations(job: &Job) -> Result<Outcome> {
    let (h, xp, xm) = liealg::sl2_triple(job.sig());
    let two = GR::from_int(2);
    let r1 = h.commutator(&xp)? == xp.scale(&two);
    let r2 = h.commutator(&xm)? == xm.scale(&-two);
    let r3 = xp.commutator(&xm)? == h;
    Ok(Outcome::new(r1 && r2 && r3, json!({ "h_xplus": r1, "h_xminus": r2, "xplus_xminus": r3 })))
}

fn lie_commutant(job: &Job) -> Result<Outcome> {
    let sig = job.sig();
    let (h, xp, xm) = liealg::sl2_triple(sig);
    let mut bad = 0;
    let gens = LieAlgebra::get(sig, Flavor::G).basis().to_vec();
    for g in &gens {
        let op = liealg::pi_generator(*g, sig);
        for z in [&h, &xp, &xm] {
            if !op.commutator(z)?.is_zero() {
                bad += 1;
            }
        }
    }
    Ok(Outcome::new(bad == 0, json!({ "generators": gens.len(), "violations": bad })))
}

fn lie_pbw_confluence(job: &Job) -> Result<Outcome> {
    let sig = job.sig();
    let dim = LieAlgebra::get(sig, Flavor::G).dim() as u16;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed + (sig.p * 31 + sig.q) as u64);
    let mut bad = 0;
    let words = 24;
    for _ in 0..words {
        let len = rng.random_range(2..=4);
        let w: Vec<u16> = (0..len).map(|_| rng.random_range(0..dim)).collect();
        let u = EnvelopingElement::from_word(sig, w, GR::one());
        let left = liealg::pbw_normal_form_with(&u, &mut |_, _| 0);
        let right = liealg::pbw_normal_form_with(&u, &mut |_, d| d.len() - 1);
        let mut inner = ChaCha8Rng::seed_from_u64(rng.random());
        let random = liealg::pbw_normal_form_with(&u, &mut |_, d| inner.random_range(0..d.len()));
        let memo = liealg::pbw_normal_form(&u);
        if !(left == right && right == random && random == memo && memo.is_normal()) {
            bad += 1;
        }
    }
    Ok(Outcome::new(bad == 0, json!({ "words": words, "disagreements": bad })))
}

fn lie_casimir_central(job: &Job) -> Result<Outcome> {
    let sig = job.sig();
    let omega = liealg::casimir(CasimirKind::G, sig);
    let mut bad = 0;
    let xs = basis_elements(sig, Flavor::G)?;
    for x in &xs {
        let u = EnvelopingElement::from_lie(x)?;
        let c = omega.mul(&u)?.sub(&u.mul(&omega)?)?;
        if !liealg::pbw_normal_form(&c).is_zero() {
            bad += 1;
        }
    }
    Ok(Outcome::new(bad == 0, json!({ "generators": xs.len(), "violations": bad })))
}

fn weyl_ccr(job: &Job) -> Result<Outcome> {
    let s = job.sig().space();
    let n = s.nvars();
    let mut bad = 0;
    for a in 0..n {
        for b in 0..n {
            let (xa, xb) = (WeylOperator::var(s, a), WeylOperator::var(s, b));
            let (da, db) = (WeylOperator::partial(s, a), WeylOperator::partial(s, b));
            let expect = if a == b { WeylOperator::identity(s) } else { WeylOperator::zero(s) };
            if da.commutator(&xb)? != expect || !xa.commutator(&xb)?.is_zero() || !da.commutator(&db)?.is_zero() {
                bad += 1;
            }
        }
    }
    Ok(Outcome::new(bad == 0, json!({ "pairs": n * n, "violations": bad })))
}

fn test_polynomial(job: &Job) -> MultiPoly {
    let s = job.sig().space();
    let mut f = MultiPoly::one(s);
    for v in 0..s.nvars() {
        let lin = &MultiPoly::var(s, v) + &MultiPoly::constant(s, GR::from_int(v as i64 + 1));
        f = &f * &lin;
        if f.degree() >= Some(4) {
            break;
        }
    }
    &f + &(&MultiPoly::r_squared(s, Block::X) * &MultiPoly::r_squared(s, Block::Y))
}

fn weyl_compose_apply(job: &Job) -> Result<Outcome> {
    let (h, xp, xm) = liealg::sl2_triple(job.sig());
    let f = test_polynomial(job);
    let ops = [&h, &xp, &xm];
    let mut bad = 0;
    for a in ops {
        for b in ops {
            if a.compose(b)?.apply(&f)? != a.apply(&b.apply(&f)?)? {
                bad += 1;
            }
        }
    }
    Ok(Outcome::new(bad == 0, json!({ "pairs": 9, "violations": bad })))
}

fn weyl_harmonic_dimension(job: &Job) -> Result<Outcome> {
    let s = job.sig().space();
    let mut rows = Vec::new();
    let mut ok = true;
    for block in [Block::X, Block::Y] {
        let n = s.block_size(block);
        for k in 0..=4 {
            let basis = harmonic_basis(s, block, k);
            let expected = harmonic_dimension(n, k);
            let harmonic = basis.elements.iter().all(|h| h.is_harmonic(block));
            ok &= basis.len() == expected && harmonic;
            rows.push(json!([block.name(), k, basis.len(), expected]));
        }
    }
    Ok(Outcome::new(ok, json!({ "block_k_found_expected": rows })))
}

fn weyl_product_rule(job: &Job) -> Result<Outcome> {
    let s = job.sig().space();
    let mut cases = 0;
    let mut bad = 0;
    for block in [Block::X, Block::Y] {
        for k in 0..=3 {
            let h = harmonic_basis(s, block, k).elements.swap_remove(0);
            let alpha = q(2 * k as i64 + s.block_size(block) as i64, 2);
            cases += 1;
            if !gkmodule::product_rule_check(&h, block, &alpha, 10)? {
                bad += 1;
            }
        }
    }
    Ok(Outcome::new(bad == 0, json!({ "cases": cases, "violations": bad })).at(10))
}

fn weyl_dagger_harmonic(job: &Job) -> Result<Outcome> {
    let s = job.sig().space();
    let mut cases = 0;
    let mut bad = 0;
    for block in [Block::X, Block::Y] {
        for k in 0..=2 {
            let h = harmonic_basis(s, block, k).elements.swap_remove(0);
            for i in 0..s.block_size(block) {
                let v = MultiPoly::var(s, s.var(block, i));
                cases += 1;
                if !(&v * &h).dagger(block)?.is_harmonic(block) {
                    bad += 1;
                }
            }
        }
    }
    Ok(Outcome::new(bad == 0, json!({ "cases": cases, "violations": bad })))
}

fn closed_form(job: &Job, which: CasimirKind) -> Result<Outcome> {
    let sig = job.sig();
    let img = gkmodule::casimir_image(which, sig)?;
    let ok = *img == liealg::casimir_operator_closed_form(which, sig);
    Ok(Outcome::new(ok, json!({ "terms": img.len() })))
}

fn casimir_g_closed_form(job: &Job) -> Result<Outcome> {
    closed_form(job, CasimirKind::G)
}

fn casimir_op_closed_form(job: &Job) -> Result<Outcome> {
    closed_form(job, CasimirKind::Op)
}

fn casimir_oq_closed_form(job: &Job) -> Result<Outcome> {
    closed_form(job, CasimirKind::Oq)
}

fn casimir_sl2_relation(job: &Job) -> Result<Outcome> {
    let sig = job.sig();
    let n = sig.n() as i64;
    let shift = WeylOperator::scalar(sig.space(), &q(n * n, 4) - &GR::from_int(n));
    let rhs = &liealg::sl2_casimir_operator(sig) - &shift;
    let ok = *gkmodule::casimir_image(CasimirKind::G, sig)? == rhs;
    Ok(Outcome::new(ok, json!({ "shift": shift.terms().values().next().map(|c| c.to_string()) })))
}

/// Samples of every distinct sign, through `k_max`, `l_max`.
fn module_samples(job: &Job, k_max: usize, l_max: usize) -> Result<Vec<(Sign, std::sync::Arc<Vec<Sample>>)>> {
    job.signs()
        .into_iter()
        .map(|sign| Ok((sign, gkmodule::cached_samples(&job.params.with_sign(sign), k_max, l_max, job.validity)?)))
        .collect()
}

fn eigen_sweep(job: &Job, check: impl Fn(&ModuleParams, &Sample) -> Result<gkmodule::EigenCheck> + Sync) -> Result<Outcome> {
    let mut rows = Vec::new();
    let mut ok = true;
    let mut validity = i64::MAX;
    for (sign, samples) in module_samples(job, job.k_max, job.l_max)? {
        let params = job.params.with_sign(sign);
        let results: Vec<_> = samples.par_iter().map(|s| check(&params, s)).collect::<Result<_>>()?;
        for (s, r) in samples.iter().zip(results) {
            ok &= r.passed;
            validity = validity.min(r.validity);
            rows.push(json!({ "sign": sign, "kappa": s.ktype.to_string(), "expected": r.expected, "passed": r.passed }));
        }
    }
    let validity = if rows.is_empty() { job.validity } else { validity };
    Ok(Outcome::new(ok && !rows.is_empty(), json!({ "samples": rows })).at(validity))
}

fn casimir_op_eigenvalue(job: &Job) -> Result<Outcome> {
    eigen_sweep(job, |p, s| gkmodule::casimir_eigenvalue_check_one(p, CasimirKind::Op, &s.ktype, &s.element))
}

fn casimir_oq_eigenvalue(job: &Job) -> Result<Outcome> {
    eigen_sweep(job, |p, s| gkmodule::casimir_eigenvalue_check_one(p, CasimirKind::Oq, &s.ktype, &s.element))
}

fn casimir_g_eigenvalue(job: &Job) -> Result<Outcome> {
    eigen_sweep(job, |p, s| gkmodule::casimir_eigenvalue_check_one(p, CasimirKind::G, &s.ktype, &s.element))
}

fn casimir_xi_eigenvalue(job: &Job) -> Result<Outcome> {
    let mut out = eigen_sweep(job, |p, s| gkmodule::xi_eigenvalue_check(p, &s.ktype, &s.element))?;
    if job.params.m == 0 {
        // λ must vanish identically.
        let all_zero = out.detail["samples"]
            .as_array()
            .is_some_and(|rows| rows.iter().all(|r| r["expected"] == "0"));
        out.passed &= all_zero;
    }
    Ok(out)
}

fn module_psi_recurrence(job: &Job) -> Result<Outcome> {
    let mut alphas = BTreeSet::new();
    for e in gkmodule::ktype_enumeration(&job.params, job.k_max, job.l_max) {
        let kt = job.params.ktype(e.k, e.l);
        for a in [kt.kappa_plus(), kt.kappa_minus()] {
            for shift in [-1i64, 0, 1] {
                alphas.insert((&a + &GR::from_int(shift)).to_string());
            }
        }
    }
    let mut ok = true;
    let mut checked = Vec::new();
    for (a, alpha) in alphas.iter().map(|s| (s, parse_rational(s))) {
        let series = match gkmodule::psi_series(&alpha, job.validity) {
            Ok(s) => s,
            Err(Error::Pole(_)) => continue,
            Err(e) => return Err(e),
        };
        let c: Vec<&GR> = series.coeffs.values().collect();
        ok &= c.first().is_some_and(|c0| c0.is_one());
        for j in 0..c.len().saturating_sub(1) {
            let lhs = &(c[j + 1] * &(&GR::from_int(j as i64 + 1) * &(&alpha + &GR::from_int(j as i64)))) + c[j];
            ok &= lhs.is_zero();
        }
        checked.push(a.clone());
    }
    Ok(Outcome::new(ok, json!({ "alphas": checked })).at(job.validity))
}

fn parse_rational(s: &str) -> GR {
    match s.split_once('/') {
        Some((n, d)) => q(n.parse().unwrap(), d.parse().unwrap()),
        None => GR::from_int(s.parse().unwrap()),
    }
}

fn module_ktype_formula(job: &Job) -> Result<Outcome> {
    let params = &job.params;
    let s = params.space();
    let listed = gkmodule::ktype_enumeration(params, job.k_max, job.l_max);
    let pairs: Vec<_> = listed.iter().map(|e| (e.k, e.l)).collect();
    let constructible = gkmodule::constructible_ktypes(params, job.k_max, job.l_max);
    let mut ok = pairs == constructible;
    for e in &listed {
        let kt = params.ktype(e.k, e.l);
        let d = kt.kappa_diff();
        ok &= d.unsigned_abs() as usize <= params.m && (params.m as i64 - d) % 2 == 0;
        let counted = harmonic_basis(s, Block::X, e.k).len() * harmonic_basis(s, Block::Y, e.l).len();
        ok &= counted == e.multiplicity;
    }
    Ok(Outcome::new(ok, json!({ "ktypes": listed })))
}

fn membership(job: &Job, sign: Sign) -> Result<Outcome> {
    let params = job.params.with_sign(sign);
    let samples = gkmodule::cached_samples(&params, job.k_max, job.l_max, job.validity)?;
    let reports: Vec<_> = samples
        .par_iter()
        .map(|s| gkmodule::verify_membership(&params, &s.element))
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    let mut ok = !samples.is_empty();
    let mut validity = job.validity;
    for (s, r) in samples.iter().zip(&reports) {
        ok &= r.passed();
        validity = validity.min(r.validity);
        rows.push(json!({ "kappa": s.ktype.to_string(), "h": r.h_eigenvalue, "kill": r.annihilated, "power_kill": r.power_annihilated }));
    }
    Ok(Outcome::new(ok, json!({ "samples": rows })).at(validity))
}

fn module_membership_plus(job: &Job) -> Result<Outcome> {
    membership(job, Sign::Plus)
}

fn module_membership_minus(job: &Job) -> Result<Outcome> {
    membership(job, Sign::Minus)
}

fn module_apply_exact(job: &Job) -> Result<Outcome> {
    let sig = job.sig();
    let f = test_polynomial(job);
    let g = &MultiPoly::x(sig.space(), 0) * &f;
    let deg = f.degree().unwrap_or(0).max(g.degree().unwrap_or(0)) as i64;
    let big = deg + 8;
    let (tf, tg) = (TruncatedElement::new(f.clone(), big), TruncatedElement::new(g.clone(), big));
    let c = GR::complex((2, 3), (-1, 1));
    let mut ok = true;
    let ops = [
        gkmodule::casimir_image(CasimirKind::G, sig)?.as_ref().clone(),
        liealg::sl2_triple(sig).2,
        WeylOperator::laplacian(sig.space(), Block::Y),
    ];
    for op in &ops {
        let exact = op.apply(&f)?;
        let trunc = gkmodule::apply_operator(op, &tf)?;
        ok &= trunc.expansion == exact.truncate(trunc.validity) && exact.degree().unwrap_or(0) as i64 <= trunc.validity;
        let lin = gkmodule::apply_operator(op, &tf.add(&tg.scale(&c)))?;
        let sum = gkmodule::apply_operator(op, &tf)?.add(&gkmodule::apply_operator(op, &tg)?.scale(&c));
        ok &= lin.equals_up_to_validity(&sum);
    }
    Ok(Outcome::new(ok, json!({ "operators": ops.len() })).at(big))
}

fn paction(job: &Job, sign: Sign) -> Result<Outcome> {
    let params = job.params.with_sign(sign);
    let k = job.paction_max.min(job.k_max);
    let l = job.paction_max.min(job.l_max);
    let samples = gkmodule::cached_samples(&params, k, l, job.validity)?;
    let cases: Vec<(usize, usize, usize)> = (0..samples.len())
        .flat_map(|s| (0..params.p).flat_map(move |i| (0..params.q).map(move |j| (s, i, j))))
        .collect();
    let results: Vec<_> = cases
        .par_iter()
        .map(|&(s, i, j)| gkmodule::p_action_check(&params, &samples[s], i, j))
        .collect();
    let mut checked = 0;
    let mut excluded = BTreeSet::new();
    let mut failures = Vec::new();
    let mut validity = job.validity;
    for (&(s, i, j), r) in cases.iter().zip(results) {
        let kappa = samples[s].ktype.to_string();
        match r {
            Ok(r) => {
                checked += 1;
                validity = validity.min(r.validity);
                if !r.equal {
                    failures.push(json!({ "kappa": kappa, "i": i + 1, "j": j + 1 }));
                }
            }
            Err(Error::DegenerateDenominator(why)) | Err(Error::Pole(why)) => {
                excluded.insert(format!("{kappa}: {why}"));
            }
            Err(e) => return Err(e),
        }
    }
    let ok = failures.is_empty() && checked > 0;
    Ok(Outcome::new(ok, json!({ "checked": checked, "excluded": excluded, "failures": failures })).at(validity))
}

fn paction_plus(job: &Job) -> Result<Outcome> {
    paction(job, Sign::Plus)
}

fn paction_minus(job: &Job) -> Result<Outcome> {
    paction(job, Sign::Minus)
}

fn symsq_q_lemma(job: &Job) -> Result<Outcome> {
    let sig = job.sig();
    let qg = symsq::build_q(Flavor::G, sig);
    let phi_ok = symsq::build_q(Flavor::On, sig).phi_inv()? == qg;
    let lhs = liealg::pbw_normal_form(&liealg::gamma2(&qg)?);
    let rhs = liealg::pbw_normal_form(&liealg::casimir(CasimirKind::G, sig).scale(&GR::from_int(2)));
    Ok(Outcome::new(phi_ok && lhs == rhs, json!({ "phi": phi_ok, "gamma2": lhs == rhs })))
}

fn symsq_xi_closed_form(job: &Job) -> Result<Outcome> {
    let sig = job.sig();
    let ok = symsq::build_xi(sig)? == symsq::build_xi_closed_form(sig)?;
    Ok(Outcome::new(ok, json!({})))
}

fn symsq_xi_lemma(job: &Job) -> Result<Outcome> {
    let sig = job.sig();
    let lhs = liealg::pbw_normal_form(&liealg::gamma2(&symsq::build_xi(sig)?)?);
    let c = q(sig.p as i64 - sig.q as i64, sig.n() as i64);
    let rhs = liealg::casimir(CasimirKind::Op, sig)
        .sub(&liealg::casimir(CasimirKind::Oq, sig))?
        .sub(&liealg::casimir(CasimirKind::G, sig).scale(&c))?;
    let ok = lhs == liealg::pbw_normal_form(&rhs);
    Ok(Outcome::new(ok, json!({ "coefficient": c.to_string() })))
}

fn symsq_s4_vanishing(job: &Job) -> Result<Outcome> {
    let sig = job.sig();
    let n = sig.n();
    let mut quads = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                for l in k + 1..n {
                    quads.push((i, j, k, l));
                }
            }
        }
    }
    let bad: usize = quads
        .par_iter()
        .map(|&(i, j, k, l)| -> Result<usize> {
            let t = symsq::build_s4(sig, i, j, k, l)?.phi_inv()?;
            Ok(usize::from(!symsq::pi_of_tensor(&t)?.is_zero()))
        })
        .sum::<Result<usize>>()?;
    Ok(Outcome::new(bad == 0, json!({ "tensors": quads.len(), "nonvanishing": bad })))
}

fn symsq_s2_trace(job: &Job) -> Result<Outcome> {
    let sig = Signature::new(job.sig().n(), 0);
    let n = sig.n();
    let mut sum = SymSquareTensor::zero(sig, Flavor::On);
    let mut symmetric = true;
    for i in 0..n {
        for j in i..n {
            let t = symsq::build_s2(sig, i, j)?;
            symmetric &= t.is_symmetric();
            if i == j {
                sum = sum.plus(&t)?;
            }
        }
    }
    Ok(Outcome::new(symmetric && sum.is_zero(), json!({ "symmetric": symmetric, "trace_zero": sum.is_zero() })))
}

fn symsq_q_invariance(job: &Job) -> Result<Outcome> {
    let sig = job.sig();
    let mut bad = 0;
    for flavor in [Flavor::G, Flavor::On] {
        let qt = symsq::build_q(flavor, sig);
        for x in basis_elements(sig, flavor)? {
            if !symsq::adjoint_action(&x, &qt)?.is_zero() {
                bad += 1;
            }
        }
    }
    Ok(Outcome::new(bad == 0, json!({ "violations": bad })))
}

fn symsq_decomposition(job: &Job) -> Result<Outcome> {
    let r = symsq::decomposition_report(job.sig().n())?;
    Ok(Outcome::new(r.passed(), serde_json::to_value(&r)?))
}

fn symsq_highest_weight(job: &Job) -> Result<Outcome> {
    let ok = symsq::highest_weight_check(job.sig().n())?;
    Ok(Outcome::new(ok, json!({ "n": job.sig().n() })))
}

fn garfinkle_obstruction(job: &Job) -> Result<Outcome> {
    let r = gkmodule::garfinkle_default(&job.params, job.validity)?;
    let expected = job.params.m == 0;
    let ok = r.exists == expected && r.warnings.is_empty();
    let validity = r.validity;
    Ok(Outcome::new(ok, serde_json::to_value(&r)?).at(validity))
}

fn garfinkle_theorem(job: &Job) -> Result<Outcome> {
    let r = symsq::theorem_ingredients(&job.params, job.validity)?;
    let ok = if job.params.m == 0 {
        r.joseph_consistent
    } else {
        !r.joseph_consistent && r.failed_step.as_deref() == Some("e2_obstruction")
    };
    let detail = json!({
        "joseph_consistent": r.joseph_consistent,
        "failed_step": r.failed_step,
        "casimir_scalar": r.casimir_scalar,
        "casimir_samples": r.casimir_samples,
        "s4_vanishing": r.s4_vanishing,
        "s4_count": r.s4_count,
        "obstruction_solvable": r.garfinkle.exists,
    });
    Ok(Outcome::new(ok, detail).at(r.validity))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_names_unique_and_large() {
        let list = list_checks();
        let names: BTreeSet<_> = list.iter().map(|c| c.name).collect();
        assert_eq!(names.len(), list.len());
        assert!(list.len() >= 25);
        assert!(names.contains("casimir.op_eigenvalue"));
        assert!(names.contains("symsq.s4_vanishing"));
        for c in &list {
            assert!(c.name.starts_with(c.suite.name()), "{}", c.name);
        }
    }

    #[test]
    fn config_resolution() {
        let c = SuiteConfig::resolve(ConfigOverrides::default()).unwrap();
        assert_eq!(c.sweep, DEFAULT_SWEEP.to_vec());
        assert_eq!(c.suites, Suite::ALL.to_vec());

        let odd = ConfigOverrides {
            p: Some(3),
            q: Some(4),
            ..Default::default()
        };
        assert!(matches!(SuiteConfig::resolve(odd.clone()), Err(Error::InvalidConfig(_))));
        let lie_only = ConfigOverrides {
            suite: Some("lie,weyl".into()),
            ..odd
        };
        assert!(SuiteConfig::resolve(lie_only).is_ok());
        assert!(SuiteConfig::resolve(ConfigOverrides {
            p: Some(4),
            ..Default::default()
        })
        .is_err());
        assert!(Suite::parse_list("lie,bogus").is_err());
    }

    #[test]
    fn kv_file_and_precedence() {
        let file = ConfigOverrides::from_kv("# sweep\np = 4\nq=4\nm = 1\nmax-degree = 9\nsuite = garfinkle\nformat = json\n").unwrap();
        assert_eq!(file.max_degree, Some(9));
        let flags = ConfigOverrides {
            m: Some(0),
            ..Default::default()
        };
        let merged = flags.over(file);
        assert_eq!((merged.p, merged.m, merged.format), (Some(4), Some(0), Some(Format::Json)));
        assert!(ConfigOverrides::from_kv("nonsense").is_err());
        assert!(ConfigOverrides::from_kv("colour = red").is_err());
    }

    #[test]
    fn small_run_is_sorted_and_passes() {
        let c = SuiteConfig::resolve(ConfigOverrides {
            p: Some(2),
            q: Some(2),
            suite: Some("lie,weyl".into()),
            ..Default::default()
        })
        .unwrap();
        let r = run(&c).unwrap();
        assert_eq!(r.exit_code(), 0, "{}", r.to_text());
        let names: Vec<_> = r.checks.iter().map(|c| c.name.clone()).collect();
        let mut sorted = names.clone();
        sorted.sort();
        assert_eq!(names, sorted);
    }
}
