use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use wallcross_core::assembly::{self, Ledger};
use wallcross_core::cohom::LinearHilbertPolynomial;
use wallcross_core::error::Error;
use wallcross_core::hilb::{self, Family, SurfaceBetti};
use wallcross_core::pairs::find_walls;
use wallcross_core::{Golden, Registry};

#[derive(Parser)]
#[command(
    name = "wallcross",
    version,
    about = "Wall-crossing computations for sheaves on P1 x P1"
)]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Model and pair-class registry (defaults to the built-in copy).
    #[arg(long, global = true, env = "WALLCROSS_REGISTRY")]
    registry: Option<PathBuf>,
    /// Reference values to compare against (defaults to the built-in copy).
    #[arg(long, global = true, env = "WALLCROSS_GOLDEN")]
    golden: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the walls for a Hilbert polynomial rm + sn + t.
    Walls {
        /// Coefficients as r,s,t.
        #[arg(long, value_parser = parse_hilbert, allow_hyphen_values = true)]
        hilbert: LinearHilbertPolynomial,
    },
    /// Poincare polynomial of the Hilbert scheme of n points on P1 x P1.
    Hilb {
        #[arg(long)]
        n: usize,
    },
    /// Ext dimensions giving the fibers of every flipping locus.
    ExtTable,
    /// Poincare polynomial ledger of a moduli space.
    Poincare {
        #[arg(long, value_enum, default_value = "m")]
        target: Target,
    },
    /// Randomized exact check of h1(I_Z(a,b)) = 0.
    VerifyLemma {
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Restrict to one family of configurations.
        #[arg(long, value_enum)]
        degenerate: Option<Degenerate>,
        /// Bidegree as a,b.
        #[arg(long, value_parser = parse_pair, default_value = "3,3")]
        bidegree: (u32, u32),
        #[arg(long, default_value_t = 4)]
        length: usize,
        /// Value of h1 every trial must report.
        #[arg(long, default_value_t = 0)]
        expect_h1: i64,
    },
    /// Compare the computed polynomial with the closed form.
    ClosedForm,
    /// Run every computation and compare with the reference values.
    Reproduce,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    M0plus,
    M0minus,
    M,
}

#[derive(Clone, Copy, ValueEnum)]
enum Degenerate {
    Generic,
    Collinear,
    Curvilinear,
}

impl From<Degenerate> for Family {
    fn from(d: Degenerate) -> Self {
        match d {
            Degenerate::Generic => Family::Generic,
            Degenerate::Collinear => Family::Collinear,
            Degenerate::Curvilinear => Family::Curvilinear,
        }
    }
}

fn parse_ints(s: &str, n: usize) -> Result<Vec<i64>, String> {
    let v: Vec<i64> = s
        .split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|e| format!("{x:?}: {e}")))
        .collect::<Result<_, _>>()?;
    if v.len() != n {
        return Err(format!("expected {n} comma-separated integers"));
    }
    Ok(v)
}

fn parse_hilbert(s: &str) -> Result<LinearHilbertPolynomial, String> {
    let v = parse_ints(s, 3)?;
    Ok(LinearHilbertPolynomial::new(v[0], v[1], v[2]))
}

fn parse_pair(s: &str) -> Result<(u32, u32), String> {
    let v = parse_ints(s, 2)?;
    let c = |x: i64| u32::try_from(x).map_err(|_| format!("{x} is negative"));
    Ok((c(v[0])?, c(v[1])?))
}

/// Failure of a subcommand: a library error, or a check that did not hold.
enum Failure {
    Core(Error),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

macro_rules! from_core {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Failure::Core(e.into())
            }
        }
    )*};
}
from_core!(
    wallcross_core::error::RegistryError,
    wallcross_core::error::PairsError,
    wallcross_core::error::HilbError,
    wallcross_core::error::CohomError
);

struct Ctx {
    json: bool,
    registry: Option<PathBuf>,
    golden: Option<PathBuf>,
}

impl Ctx {
    fn registry(&self) -> Result<Registry, Failure> {
        Ok(Registry::load(self.registry.as_deref())?)
    }

    fn golden(&self) -> Result<Golden, Failure> {
        Ok(Golden::load(self.golden.as_deref())?)
    }

    fn emit(&self, value: &Value, text: impl FnOnce() -> String) {
        let out = if self.json {
            serde_json::to_string_pretty(value).expect("JSON values serialize")
        } else {
            text()
        };
        // a closed pipe is not an error worth reporting
        let _ = writeln!(std::io::stdout().lock(), "{out}");
    }
}

fn hilbert_json(p: LinearHilbertPolynomial) -> Value {
    json!([p.r, p.s, p.t])
}

fn walls(ctx: &Ctx, total: LinearHilbertPolynomial) -> Result<(), Failure> {
    let golden = ctx.golden()?;
    let walls = find_walls(total)?;
    let value = json!({
        "hilbert": hilbert_json(total),
        "walls": walls.iter().map(|w| json!({
            "alpha": w.alpha.to_string(),
            "decompositions": w.decompositions.iter().map(|d| json!({
                "sub": hilbert_json(d.sub),
                "quot": hilbert_json(d.quot),
            })).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    });
    ctx.emit(&value, || {
        let mut out = format!("walls of {total}:");
        if walls.is_empty() {
            out.push_str(" none");
        }
        for w in &walls {
            let parts: Vec<_> = w
                .decompositions
                .iter()
                .map(|d| format!("({}) + ({})", d.sub, d.quot))
                .collect();
            out.push_str(&format!("\n  alpha = {}: {}", w.alpha, parts.join(", ")));
        }
        out
    });
    golden.check_walls(total, &walls)?;
    Ok(())
}

fn hilb_cmd(ctx: &Ctx, n: usize) -> Result<(), Failure> {
    let golden = ctx.golden()?;
    let p = hilb::goettsche_poincare(SurfaceBetti::P1_X_P1, n)?;
    let value = json!({
        "n": n,
        "polynomial": p,
        "text": p.to_text(false),
        "euler": p.eval_at_one().to_string(),
    });
    ctx.emit(&value, || {
        format!(
            "P(Hilb^{n}) = {}\neuler = {}",
            p.to_text(false),
            p.eval_at_one()
        )
    });
    golden.check_hilb(n, &p)?;
    Ok(())
}

fn ext_table_cmd(ctx: &Ctx) -> Result<(), Failure> {
    let registry = ctx.registry()?;
    let golden = ctx.golden()?;
    let table = assembly::ext_table(&registry)?;
    let value = serde_json::to_value(&table).expect("table serializes");
    ctx.emit(&value, || {
        let mut out = String::from(
            "total           alpha  pair         Ext1(sub,quot)  Ext1(quot,sub)  fibers",
        );
        for r in &table.rows {
            out.push_str(&format!(
                "\n{:<15} {:>5}  {:<12} {:>14}  {:>14}  P^{} / P^{}",
                r.total.to_string(),
                r.alpha,
                format!("{}, {}", r.sub_class, r.quot_class),
                r.ext1_sub_quot,
                r.ext1_quot_sub,
                r.ext1_sub_quot - 1,
                r.ext1_quot_sub - 1,
            ));
        }
        for s in &table.self_ext {
            let show = |x: Option<u64>| x.map_or("?".to_string(), |v| v.to_string());
            out.push_str(&format!(
                "\nExt^*({0}, {0}) = {1}, {2}, {3}",
                s.model,
                show(s.hom),
                show(s.ext1),
                show(s.ext2)
            ));
        }
        out
    });
    assembly::check_ext_table(&table, &golden)?;
    Ok(())
}

fn ledger_text(ledger: &Ledger) -> String {
    let mut out = String::new();
    for s in &ledger.steps {
        out.push_str(&format!(
            "{}\n    {}\n",
            s.description,
            s.polynomial.to_text(false)
        ));
    }
    let coeffs: Vec<String> = ledger
        .final_polynomial
        .dense_coeffs()
        .iter()
        .map(|c| c.to_string())
        .collect();
    out.push_str(&format!(
        "final = {}\ncoefficients = ({})\neuler = {}",
        ledger.final_polynomial.to_text(false),
        coeffs.join(","),
        ledger.euler
    ));
    out
}

fn poincare(ctx: &Ctx, target: Target) -> Result<(), Failure> {
    let registry = ctx.registry()?;
    let golden = ctx.golden()?;
    let ledger = match target {
        Target::M => assembly::compute_theorem(&registry, &golden)?,
        Target::M0plus => {
            let l = assembly::compute_m0plus_plus(&registry)?;
            golden.check_summary("M^0+(3m + 3n + 1)", &golden.m0plus, &l.final_polynomial)?;
            l
        }
        Target::M0minus => {
            let l = assembly::compute_m0plus_minus(&registry)?;
            golden.check_summary("M^0+(3m + 3n - 1)", &golden.m0minus, &l.final_polynomial)?;
            l
        }
    };
    let value = serde_json::to_value(&ledger).expect("ledger serializes");
    ctx.emit(&value, || ledger_text(&ledger));
    Ok(())
}

fn verify_lemma(
    ctx: &Ctx,
    trials: u64,
    seed: u64,
    family: Option<Family>,
    bidegree: (u32, u32),
    length: usize,
    expect_h1: i64,
) -> Result<(), Failure> {
    let report = hilb::run_trials(trials, seed, family, bidegree, length, expect_h1)?;
    let value = serde_json::to_value(&report).expect("report serializes");
    ctx.emit(&value, || {
        format!(
            "{} trials at bidegree ({},{}), length {}: {} failures\nh0 counts {:?}\nh1 counts {:?}\nfamilies {:?}",
            report.trials,
            bidegree.0,
            bidegree.1,
            length,
            report.failures,
            report.h0_counts,
            report.h1_counts,
            report.families
        )
    });
    if report.failures > 0 {
        return Err(Failure::Check(format!(
            "{} of {} configurations have h1 != {expect_h1}",
            report.failures, report.trials
        )));
    }
    Ok(())
}

fn closed_form(ctx: &Ctx) -> Result<(), Failure> {
    let registry = ctx.registry()?;
    let golden = ctx.golden()?;
    let ok = assembly::closed_form_check(&registry, &golden)?;
    ctx.emit(&json!({ "closed_form": ok }), || ok.to_string());
    if ok {
        Ok(())
    } else {
        Err(Failure::Core(Error::GoldenMismatch(
            "closed form differs from the computed polynomial".into(),
        )))
    }
}

fn reproduce(ctx: &Ctx) -> Result<(), Failure> {
    let registry = ctx.registry()?;
    let golden = ctx.golden()?;
    let mut results: Vec<(String, Result<(), Error>)> = Vec::new();

    for g in &golden.walls {
        let total = LinearHilbertPolynomial::new(g.hilbert.0, g.hilbert.1, g.hilbert.2);
        let r = find_walls(total)
            .map_err(Error::from)
            .and_then(|w| golden.check_walls(total, &w));
        results.push((format!("walls of {total}"), r));
    }
    let r = assembly::ext_table(&registry).and_then(|t| assembly::check_ext_table(&t, &golden));
    results.push(("ext table".into(), r));
    for g in &golden.hilb {
        let r = hilb::goettsche_poincare(SurfaceBetti::P1_X_P1, g.n)
            .map_err(Error::from)
            .and_then(|p| golden.check_hilb(g.n, &p));
        results.push((format!("Hilb^{}", g.n), r));
    }
    let r = assembly::compute_theorem(&registry, &golden).map(|_| ());
    results.push(("Poincare polynomial of M".into(), r));
    let r = assembly::closed_form_check(&registry, &golden).and_then(|ok| {
        if ok {
            Ok(())
        } else {
            Err(Error::GoldenMismatch("closed form differs".into()))
        }
    });
    results.push(("closed form".into(), r));
    let r = hilb::run_trials(100, 0, None, (3, 3), 4, 0)
        .map_err(Error::from)
        .and_then(|rep| {
            if rep.failures == 0 {
                Ok(())
            } else {
                Err(Error::GoldenMismatch(format!(
                    "{} vanishing failures",
                    rep.failures
                )))
            }
        });
    results.push(("vanishing, 100 trials".into(), r));

    let value = json!(results
        .iter()
        .map(|(name, r)| json!({
            "check": name,
            "ok": r.is_ok(),
            "error": r.as_ref().err().map(ToString::to_string),
        }))
        .collect::<Vec<_>>());
    ctx.emit(&value, || {
        results
            .iter()
            .map(|(name, r)| match r {
                Ok(()) => format!("ok    {name}"),
                Err(e) => format!("FAIL  {name}: {e}"),
            })
            .collect::<Vec<_>>()
            .join("\n")
    });
    // a registry or chase failure outranks a plain mismatch
    let mut worst: Option<Error> = None;
    for (_, r) in results {
        if let Err(e) = r {
            if worst.as_ref().is_none_or(|w| w.exit_code() < e.exit_code()) {
                worst = Some(e);
            }
        }
    }
    match worst {
        Some(e) => Err(Failure::Core(e)),
        None => Ok(()),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let ctx = Ctx {
        json: cli.json,
        registry: cli.registry,
        golden: cli.golden,
    };
    match cli.command {
        Command::Walls { hilbert } => walls(&ctx, hilbert),
        Command::Hilb { n } => hilb_cmd(&ctx, n),
        Command::ExtTable => ext_table_cmd(&ctx),
        Command::Poincare { target } => poincare(&ctx, target),
        Command::VerifyLemma {
            trials,
            seed,
            degenerate,
            bidegree,
            length,
            expect_h1,
        } => verify_lemma(
            &ctx,
            trials,
            seed,
            degenerate.map(Into::into),
            bidegree,
            length,
            expect_h1,
        ),
        Command::ClosedForm => closed_form(&ctx),
        Command::Reproduce => reproduce(&ctx),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
