//! Verification harness: each check computes both sides of one identity
//! through independent routes and records the residual against a tolerance
//! that must exceed the combined rigorous error, so a pass can never be an
//! artifact of error-bound slack.
//!
//! Suites group related checks; `run_suite` executes them (optionally on a
//! worker pool), sorts rows into their enumeration order, and renders a
//! deterministic JSON report: identical config in, identical bytes out.

mod checks;
mod gammaid;

use std::collections::VecDeque;
use std::path::PathBuf;
use std::sync::Mutex;

use astro_float::BigFloat;
use num_bigint::BigInt;
use num_traits::One;

use crate::engine::{Engine, EngineConfig};
use crate::error::{Error, Result};
use crate::numerics::{mag_to_bigfloat, value_le, BigReal};

/// Evaluation point for the generating-function checks.
#[derive(Clone, Copy, Debug)]
pub struct SamplePoint {
    pub x: f64,
    pub y: f64,
    pub t: f64,
}

impl SamplePoint {
    /// The series compared here converge only for |tx| < 1, |y| < 1 and
    /// |x+y| < 1.
    pub fn validate(&self) -> Result<()> {
        let ok = (self.t * self.x).abs() < 1.0 && self.y.abs() < 1.0 && (self.x + self.y).abs() < 1.0;
        if ok {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "sample point (x={}, y={}, t={}) is outside the convergence domain",
                self.x, self.y, self.t
            )))
        }
    }
}

/// One verified identity instance.
#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: String,
    pub params: Vec<(String, String)>,
    pub lhs: BigReal,
    pub rhs: BigReal,
    pub residual: BigFloat,
    pub tol: BigReal,
    pub pass: bool,
}

impl CheckResult {
    /// |lhs - rhs| within the combined rigorous error of the two sides.
    pub fn within_combined_err(&self) -> bool {
        let budget = mag_to_bigfloat(self.lhs.err().add(self.rhs.err()), self.lhs.prec());
        value_le(&self.residual, &budget)
    }
}

/// pass needs residual <= tol and, to rule out vacuous rows, tol strictly
/// above the combined error of the two sides.
pub(crate) fn row(
    name: &str,
    params: Vec<(String, String)>,
    lhs: BigReal,
    rhs: BigReal,
    tol: &BigReal,
) -> CheckResult {
    let residual = lhs.residual(&rhs);
    let errsum = mag_to_bigfloat(lhs.err().add(rhs.err()), lhs.prec());
    let pass = value_le(&residual, tol.value()) && !value_le(tol.value(), &errsum);
    CheckResult {
        name: name.into(),
        params,
        lhs,
        rhs,
        residual,
        tol: tol.clone(),
        pass,
    }
}

pub(crate) fn param(key: &str, val: impl std::fmt::Display) -> (String, String) {
    (key.into(), val.to_string())
}

/// Tolerance ladder. Exact identities get 10^-(3d/4 - 5) at d digits of
/// working precision ("strong") or five digits less for sums with heavier
/// cancellation ("soft"); the truncated analytic checks use fixed relaxed
/// thresholds matching their documented tail budgets.
#[derive(Clone, Debug)]
pub struct Tols {
    pub strong: BigReal,
    pub soft: BigReal,
    pub prop2: BigReal,
    pub genfun: BigReal,
}

fn ten_pow_neg(e: u32, prec: usize) -> BigReal {
    let den = BigInt::from(10u32).pow(e);
    BigReal::from_ratio(&BigInt::one(), &den, prec)
}

impl Tols {
    pub fn for_digits(digits: usize, prec: usize) -> Tols {
        let strong_exp = (3 * digits / 4).saturating_sub(5).max(6) as u32;
        Tols {
            strong: ten_pow_neg(strong_exp, prec),
            soft: ten_pow_neg(strong_exp.saturating_sub(5), prec),
            prop2: ten_pow_neg(10, prec),
            genfun: ten_pow_neg(5, prec),
        }
    }

    /// A user override replaces every threshold.
    pub fn with_override(digits: usize, prec: usize, tol: Option<f64>) -> Result<Tols> {
        let mut t = Tols::for_digits(digits, prec);
        if let Some(v) = tol {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Usage(format!("tolerance override {v} must be positive")));
            }
            let o = BigReal::from_f64(v, prec);
            t.strong = o.clone();
            t.soft = o.clone();
            t.prop2 = o.clone();
            t.genfun = o;
        }
        Ok(t)
    }
}

/// Per-suite loop bounds; `None` means the suite's documented default.
#[derive(Clone, Copy, Debug, Default)]
pub struct Bounds {
    pub kmax: Option<u32>,
    pub lmax: Option<u32>,
    pub rmax: Option<u32>,
    pub nmax: Option<u32>,
    pub pmax: Option<u32>,
}

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub prec_digits: usize,
    pub bounds: Bounds,
    pub tol_override: Option<f64>,
    pub threads: usize,
    pub cache_path: Option<PathBuf>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            prec_digits: 60,
            bounds: Bounds::default(),
            tol_override: None,
            threads: 1,
            cache_path: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub suite: String,
    pub prec_digits: usize,
    pub results: Vec<CheckResult>,
    pub all_pass: bool,
}

pub const SUITE_NAMES: [&str; 9] = [
    "main1",
    "main2",
    "main3",
    "sum-int",
    "corollary",
    "remark",
    "prop2",
    "genfun",
    "engine",
];

type Task<'a> = Box<dyn FnOnce() -> Result<Vec<CheckResult>> + Send + 'a>;

pub fn run_suite(suite: &str, opts: &SuiteOptions) -> Result<Report> {
    if opts.prec_digits < 15 {
        return Err(Error::Usage(format!(
            "precision {} digits is below the minimum of 15",
            opts.prec_digits
        )));
    }
    if opts.threads < 1 {
        return Err(Error::Usage("thread count must be at least 1".into()));
    }
    let selected: Vec<&str> = if suite == "all" {
        SUITE_NAMES.to_vec()
    } else if SUITE_NAMES.contains(&suite) {
        vec![suite]
    } else {
        return Err(Error::Usage(format!(
            "unknown suite {suite:?}; expected one of {} or all",
            SUITE_NAMES.join(", ")
        )));
    };

    let cfg = EngineConfig::for_digits(opts.prec_digits);
    let prec = cfg.prec_bits;
    let eng = Engine::new(cfg);
    if let Some(path) = &opts.cache_path {
        if path.exists() {
            eng.load_cache(path)?;
        }
    }
    let tols = Tols::with_override(opts.prec_digits, prec, opts.tol_override)?;

    let mut tasks: Vec<Task> = Vec::new();
    for name in &selected {
        checks::collect_tasks(name, &eng, &tols, &opts.bounds, opts.prec_digits, &mut tasks);
    }
    let results = execute(tasks, opts.threads)?;

    if let Some(path) = &opts.cache_path {
        eng.save_cache(path)?;
    }
    let all_pass = results.iter().all(|r| r.pass);
    Ok(Report {
        suite: suite.to_string(),
        prec_digits: opts.prec_digits,
        results,
        all_pass,
    })
}

/// Runs tasks (in order when single-threaded, via a shared queue otherwise)
/// and restores assembly order, so reports do not depend on thread count.
fn execute(tasks: Vec<Task>, threads: usize) -> Result<Vec<CheckResult>> {
    if threads <= 1 || tasks.len() <= 1 {
        let mut out = Vec::new();
        for t in tasks {
            out.extend(t()?);
        }
        return Ok(out);
    }
    let queue: Mutex<VecDeque<(usize, Task)>> = Mutex::new(tasks.into_iter().enumerate().collect());
    let done: Mutex<Vec<(usize, Result<Vec<CheckResult>>)>> = Mutex::new(Vec::new());
    std::thread::scope(|s| {
        for _ in 0..threads {
            s.spawn(|| loop {
                let job = queue.lock().unwrap().pop_front();
                let Some((seq, task)) = job else { break };
                let res = task();
                done.lock().unwrap().push((seq, res));
            });
        }
    });
    let mut finished = done.into_inner().unwrap();
    finished.sort_by_key(|(seq, _)| *seq);
    let mut out = Vec::new();
    for (_, res) in finished {
        out.extend(res?);
    }
    Ok(out)
}

fn json_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

/// Compact single-line JSON; field order and real formatting are fixed, so
/// equal reports serialize to equal bytes.
pub fn render_json(report: &Report) -> String {
    let sig = report.prec_digits;
    let mut s = String::new();
    s.push_str(&format!(
        "{{\"suite\":\"{}\",\"prec_digits\":{},\"results\":[",
        json_escape(&report.suite),
        report.prec_digits
    ));
    for (i, r) in report.results.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        s.push_str(&format!("{{\"name\":\"{}\",\"params\":{{", json_escape(&r.name)));
        for (j, (k, v)) in r.params.iter().enumerate() {
            if j > 0 {
                s.push(',');
            }
            s.push_str(&format!("\"{}\":\"{}\"", json_escape(k), json_escape(v)));
        }
        let residual = BigReal::from_parts(r.residual.clone(), crate::numerics::Mag::ZERO, r.lhs.prec());
        s.push_str(&format!(
            "}},\"lhs\":\"{}\",\"rhs\":\"{}\",\"residual\":\"{}\",\"tol\":\"{}\",\"pass\":{}}}",
            r.lhs.to_decimal(sig),
            r.rhs.to_decimal(sig),
            residual.to_decimal(12),
            r.tol.to_decimal(12),
            r.pass
        ));
    }
    s.push_str(&format!("],\"all_pass\":{}}}", report.all_pass));
    s.push('\n');
    s
}
