//! Command-line front end: single-value evaluation and the verification
//! suites. Exit codes: 0 success (all checks pass), 1 a verification row
//! failed, 2 usage or domain errors.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::engine::{mpl_half, Engine, EngineConfig};
use crate::error::{Error, Result};
use crate::harness::{render_json, run_suite, Bounds, SuiteOptions};
use crate::indices::{tpoly_eval, Index, TPoly};
use crate::numerics::BigReal;
use crate::values;

#[derive(Parser)]
#[command(name = "mzvlab", about = "High-precision multiple zeta values and identity checks")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate one value; prints `value=... err=...` or `tpoly=[...]`
    Eval(EvalArgs),
    /// Run a verification suite and print its JSON report
    Verify(VerifyArgs),
}

#[derive(Args)]
struct EvalArgs {
    /// zeta | zeta-star | zeta-t | xi | xi-t | eta | mpl-half | S | T
    kind: String,
    /// an index like "1,2" (runs of ones may be written "{1}^3,2") and any
    /// integer arguments the kind needs: m for xi/xi-t, r and m for eta,
    /// k for S, r and k for T
    args: Vec<String>,
    /// evaluate polynomial kinds at this t instead of listing coefficients
    #[arg(long)]
    t: Option<f64>,
    /// working precision in decimal digits (>= 15; default 60 or $MZVLAB_PREC)
    #[arg(long)]
    prec: Option<usize>,
    /// load/store computed values in this file
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// main1 | main2 | main3 | sum-int | corollary | remark | prop2 | genfun | engine | all
    #[arg(long)]
    suite: String,
    #[arg(long)]
    kmax: Option<u32>,
    #[arg(long)]
    lmax: Option<u32>,
    #[arg(long)]
    rmax: Option<u32>,
    #[arg(long)]
    nmax: Option<u32>,
    #[arg(long)]
    pmax: Option<u32>,
    /// working precision in decimal digits (>= 15; default 60 or $MZVLAB_PREC)
    #[arg(long)]
    prec: Option<usize>,
    /// replace every tolerance with this value
    #[arg(long)]
    tol: Option<f64>,
    /// also write the JSON report to this file
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// load/store computed values in this file
    #[arg(long)]
    cache: Option<PathBuf>,
}

pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let out = match cli.cmd {
        Cmd::Eval(a) => cmd_eval(a),
        Cmd::Verify(a) => cmd_verify(a),
    };
    match out {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{e}");
            2
        }
    }
}

fn resolve_prec(flag: Option<usize>) -> Result<usize> {
    let digits = match flag {
        Some(p) => p,
        None => match std::env::var("MZVLAB_PREC") {
            Ok(s) => s.trim().parse().map_err(|_| {
                Error::Usage(format!("MZVLAB_PREC must be a positive integer, got {s:?}"))
            })?,
            Err(_) => 60,
        },
    };
    if digits < 15 {
        return Err(Error::Usage(format!(
            "precision must be at least 15 digits, got {digits}"
        )));
    }
    Ok(digits)
}

/// Comma-separated parts; a token `{1}^n` expands to n ones.
fn expand_index(s: &str) -> Result<Index> {
    let mut parts: Vec<u32> = Vec::new();
    for tok in s.split(',') {
        let tok = tok.trim();
        if let Some(rest) = tok.strip_prefix("{1}^") {
            let n: usize = rest
                .parse()
                .map_err(|_| Error::Usage(format!("bad repeat count in {tok:?}")))?;
            parts.extend(std::iter::repeat_n(1u32, n));
        } else {
            parts.push(
                tok.parse()
                    .map_err(|_| Error::Usage(format!("bad index part {tok:?}")))?,
            );
        }
    }
    Index::new(parts)
}

fn int_arg<T: std::str::FromStr>(args: &[String], i: usize, what: &str) -> Result<T> {
    let s = args
        .get(i)
        .ok_or_else(|| Error::Usage(format!("missing argument: {what}")))?;
    s.parse()
        .map_err(|_| Error::Usage(format!("bad {what}: {s:?}")))
}

fn expect_args(kind: &str, args: &[String], n: usize) -> Result<()> {
    if args.len() != n {
        return Err(Error::Usage(format!(
            "{kind} takes {n} argument{}, got {}",
            if n == 1 { "" } else { "s" },
            args.len()
        )));
    }
    Ok(())
}

enum Out {
    Scalar(BigReal),
    Poly(TPoly),
}

fn cmd_eval(a: EvalArgs) -> Result<i32> {
    let digits = resolve_prec(a.prec)?;
    let cfg = EngineConfig::for_digits(digits);
    let prec = cfg.prec_bits;
    let eng = Engine::new(cfg);
    if let Some(path) = &a.cache {
        if path.exists() {
            eng.load_cache(path)?;
        }
    }

    let out = match a.kind.as_str() {
        "zeta" => {
            expect_args("zeta", &a.args, 1)?;
            Out::Scalar(values::zeta(&eng, &expand_index(&a.args[0])?)?)
        }
        "zeta-star" => {
            expect_args("zeta-star", &a.args, 1)?;
            Out::Scalar(values::zeta_star(&eng, &expand_index(&a.args[0])?)?)
        }
        "zeta-t" => {
            expect_args("zeta-t", &a.args, 1)?;
            Out::Poly(values::zeta_t(&eng, &expand_index(&a.args[0])?)?)
        }
        "xi" => {
            expect_args("xi", &a.args, 2)?;
            Out::Scalar(values::xi(&eng, &expand_index(&a.args[0])?, int_arg(&a.args, 1, "m")?)?)
        }
        "xi-t" => {
            expect_args("xi-t", &a.args, 2)?;
            Out::Poly(values::xi_t(&eng, &expand_index(&a.args[0])?, int_arg(&a.args, 1, "m")?)?)
        }
        "eta" => {
            expect_args("eta", &a.args, 2)?;
            Out::Scalar(values::eta(
                &eng,
                int_arg(&a.args, 0, "r")?,
                int_arg(&a.args, 1, "m")?,
            )?)
        }
        "mpl-half" => {
            expect_args("mpl-half", &a.args, 1)?;
            Out::Scalar(mpl_half(&expand_index(&a.args[0])?, eng.cfg()))
        }
        "S" => {
            expect_args("S", &a.args, 1)?;
            Out::Scalar(values::s_value(&eng, int_arg(&a.args, 0, "k")?)?)
        }
        "T" => {
            expect_args("T", &a.args, 2)?;
            Out::Scalar(values::t_value(
                &eng,
                int_arg(&a.args, 0, "r")?,
                int_arg(&a.args, 1, "k")?,
            )?)
        }
        other => {
            return Err(Error::Usage(format!(
                "unknown kind {other:?}; expected zeta, zeta-star, zeta-t, xi, xi-t, eta, mpl-half, S, or T"
            )))
        }
    };

    let out = match (out, a.t) {
        (Out::Poly(p), Some(t0)) => {
            if !t0.is_finite() {
                return Err(Error::Usage(format!("--t must be finite, got {t0}")));
            }
            Out::Scalar(tpoly_eval(&p, &BigReal::from_f64(t0, prec)))
        }
        (Out::Scalar(_), Some(_)) => {
            return Err(Error::Usage(
                "--t only applies to the polynomial kinds zeta-t and xi-t".into(),
            ))
        }
        (o, None) => o,
    };

    match &out {
        Out::Scalar(v) => println!("value={} err={}", v.to_decimal(digits), v.err_decimal()),
        Out::Poly(p) => {
            let cs: Vec<String> = (0..p.coeffs().len().max(1))
                .map(|j| p.coeff(j).to_decimal(digits))
                .collect();
            println!("tpoly=[{}]", cs.join(", "));
        }
    }
    if let Some(path) = &a.cache {
        eng.save_cache(path)?;
    }
    Ok(0)
}

fn cmd_verify(a: VerifyArgs) -> Result<i32> {
    let opts = SuiteOptions {
        prec_digits: resolve_prec(a.prec)?,
        bounds: Bounds {
            kmax: a.kmax,
            lmax: a.lmax,
            rmax: a.rmax,
            nmax: a.nmax,
            pmax: a.pmax,
        },
        tol_override: a.tol,
        threads: a.threads,
        cache_path: a.cache,
    };
    let report = run_suite(&a.suite, &opts)?;
    let json = render_json(&report);
    print!("{json}");
    if let Some(path) = &a.json {
        std::fs::write(path, &json)?;
    }
    Ok(if report.all_pass { 0 } else { 1 })
}
