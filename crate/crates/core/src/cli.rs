//! The `microcech` command line. Every subcommand reads JSON files and writes
//! one JSON document to stdout; errors go to stderr as JSON.
//!
//! Exit codes: 0 success or verified-true, 1 verified-false, 2 usage or
//! format error, 3 indeterminate (short window or exhausted budget).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::json;

use crate::acceptance;
use crate::classify::{classify_algebroid, CircleBundleModel, CircleBundleModelJson, FiveTermSequence};
use crate::descent::json::BundleJson;
use crate::descent::{twist_by_lambda, verify_descent, ChartAlgebra, Truth};
use crate::error::{Error, Result};
use crate::homology::{cohomology, Cochain, CochainJson, CoefficientGroup, CoverNerve, NerveJson};
use crate::microdiff::{adjoint, ad_conjugation, formal_inverse, principal_symbol, MicrodiffOperator};
use crate::symcore::{GradedSymbol, SymbolJson};
use crate::twogroup::{compare_with_abelian, h1_pointed_set, Budget, CrossedModule, CrossedModuleJson, DEFAULT_BUDGET};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INDETERMINATE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "microcech", version, about = "Exact microdifferential symbols, Čech cohomology and algebroid descent")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum OpVerb {
    /// P·Q
    Mul,
    /// P⁻¹
    Inv,
    /// P*
    Adj,
    /// P·Q·P⁻¹
    Ad,
    /// principal symbol of P
    Sigma,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Operator arithmetic on symbol files.
    Op {
        verb: OpVerb,
        p: PathBuf,
        q: Option<PathBuf>,
        /// Print the symbol as text instead of JSON.
        #[arg(long)]
        text: bool,
    },
    /// Cohomology of a nerve with constant coefficients.
    Cohomology {
        nerve: PathBuf,
        /// Z, Z/m, Q, Q/Z or RCx.
        #[arg(long, default_value = "Z")]
        coeff: String,
        #[arg(long, default_value_t = 1)]
        deg: usize,
    },
    /// H¹ of a nerve with coefficients in a finite crossed module.
    H1 {
        nerve: PathBuf,
        xmod: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
        /// Also compare against abelian cohomology when the crossed module allows it.
        #[arg(long)]
        compare: bool,
    },
    /// Check the descent identities of a bundle.
    Verify {
        bundle: PathBuf,
        /// Override the decision window of the bundle's chart algebra.
        #[arg(long)]
        window: Option<usize>,
    },
    /// Build normal-form descent data from a shift cocycle and a scalar cocycle.
    Twist {
        nerve: PathBuf,
        /// Q/Z (or Q) 1-cocycle; zero when omitted.
        #[arg(long)]
        lambda: Option<PathBuf>,
        /// RCx (or Q/Z) 2-cocycle; zero when omitted.
        #[arg(long)]
        scalar: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        nvars: usize,
        #[arg(long, default_value_t = 3)]
        window: usize,
    },
    /// Class of a normal-form bundle over a circle-bundle model.
    Classify {
        bundle: PathBuf,
        #[arg(long)]
        model: PathBuf,
    },
    /// The five-term sequence of a circle-bundle model.
    Sequence {
        model: PathBuf,
        #[arg(long)]
        coeff: String,
    },
    /// Run the acceptance suite.
    Selftest {
        #[arg(long, default_value_t = acceptance::DEFAULT_SEED)]
        seed: u64,
    },
}

struct Outcome {
    code: i32,
    doc: Option<serde_json::Value>,
    text: Option<String>,
}

impl Outcome {
    fn json(code: i32, v: impl Serialize) -> Result<Self> {
        let doc = serde_json::to_value(v).map_err(|e| Error::InvalidValue(e.to_string()))?;
        Ok(Self { code, doc: Some(doc), text: None })
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse { path: path.display().to_string(), message: e.to_string() })?;
    crate::symcore::parse_json(&text).map_err(|e| match e {
        Error::Parse { path: p, message } => Error::Parse { path: format!("{}:{p}", path.display()), message },
        other => other,
    })
}

fn read_op(path: &Path) -> Result<MicrodiffOperator> {
    let j: SymbolJson = read_json(path)?;
    Ok(MicrodiffOperator::from_symbol(GradedSymbol::try_from(&j)?))
}

fn read_nerve(path: &Path) -> Result<CoverNerve> {
    CoverNerve::from_json(&read_json::<NerveJson>(path)?)
}

fn read_model(path: &Path) -> Result<CircleBundleModel> {
    CircleBundleModel::from_json(&read_json::<CircleBundleModelJson>(path)?)
}

fn truth_code(t: Truth) -> i32 {
    match t {
        Truth::True => EXIT_OK,
        Truth::False => EXIT_FALSE,
        Truth::Indeterminate => EXIT_INDETERMINATE,
    }
}

fn threads() -> Result<Option<usize>> {
    match std::env::var("MICROCECH_THREADS") {
        Err(_) => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Error::InvalidValue(format!("MICROCECH_THREADS must be a positive integer, got {s:?}"))),
        },
    }
}

fn execute(cmd: Command) -> Result<Outcome> {
    // Everything runs on the calling thread, so any cap is already met.
    threads()?;
    match cmd {
        Command::Op { verb, p, q, text } => {
            let p = read_op(&p)?;
            let need_q = || q.as_deref().ok_or_else(|| Error::InvalidValue(format!("{verb:?} needs a second operator"))).and_then(read_op);
            let out = match verb {
                OpVerb::Mul => p.mul(&need_q()?)?,
                OpVerb::Ad => ad_conjugation(&p, &need_q()?)?,
                OpVerb::Inv => formal_inverse(&p)?,
                OpVerb::Adj => adjoint(&p)?,
                OpVerb::Sigma => MicrodiffOperator::from_symbol(principal_symbol(&p)?.1),
            };
            if text {
                return Ok(Outcome { code: EXIT_OK, doc: None, text: Some(out.to_string()) });
            }
            Outcome::json(EXIT_OK, SymbolJson::from(out.symbol()))
        }
        Command::Cohomology { nerve, coeff, deg } => {
            let n = read_nerve(&nerve)?;
            let coeff: CoefficientGroup = coeff.parse()?;
            let h = cohomology(&n, coeff, deg);
            Outcome::json(
                EXIT_OK,
                json!({
                    "coeff": coeff.to_string(),
                    "degree": deg,
                    "summands": h.summand_labels(),
                    "free_rank": h.free_rank(),
                    "torsion": h.torsion(),
                    "order": h.order().map(|o| o.to_string()),
                }),
            )
        }
        Command::H1 { nerve, xmod, budget, compare } => {
            let n = read_nerve(&nerve)?;
            let g = CrossedModule::from_json(&read_json::<CrossedModuleJson>(&xmod)?)?;
            let mut b = Budget::new(budget);
            let h = h1_pointed_set(&n, &g, &mut b)?;
            let comparison = if compare { Some(compare_with_abelian(&n, &g, &mut Budget::new(budget))?) } else { None };
            Outcome::json(
                EXIT_OK,
                json!({
                    "classes": h.classes.len(),
                    "base_point": h.base_point,
                    "representatives": h.classes,
                    "budget_used": b.used().to_string(),
                    "comparison": comparison,
                }),
            )
        }
        Command::Verify { bundle, window } => {
            let mut d = read_json::<BundleJson>(&bundle)?.to_descent()?;
            if let Some(w) = window {
                d.algebra = ChartAlgebra::new(d.algebra.nvars(), w)?;
            }
            let v = verify_descent(&d)?;
            Outcome::json(truth_code(v.truth), v)
        }
        Command::Twist { nerve, lambda, scalar, nvars, window } => {
            let n = read_nerve(&nerve)?;
            let read_cochain = |p: &Option<PathBuf>, deg: usize, default: CoefficientGroup| -> Result<Cochain> {
                match p {
                    None => Ok(Cochain::zero(deg, default, n.count(deg))),
                    Some(p) => {
                        let c = Cochain::from_json(&n, &read_json::<CochainJson>(p)?)?;
                        if c.degree() != deg {
                            return Err(Error::InvalidValue(format!("{} holds a {}-cochain, expected degree {deg}", p.display(), c.degree())));
                        }
                        Ok(c)
                    }
                }
            };
            let l = read_cochain(&lambda, 1, CoefficientGroup::QmodZ)?;
            let c = read_cochain(&scalar, 2, CoefficientGroup::RCx)?;
            let d = twist_by_lambda(&n, &l, &c, &ChartAlgebra::new(nvars, window)?)?;
            Outcome::json(EXIT_OK, BundleJson::from_descent(&d))
        }
        Command::Classify { bundle, model } => {
            let m = read_model(&model)?;
            let d = read_json::<BundleJson>(&bundle)?.to_descent()?;
            Outcome::json(EXIT_OK, classify_algebroid(&m, &d)?.to_json(&m))
        }
        Command::Sequence { model, coeff } => {
            let m = read_model(&model)?;
            let seq = FiveTermSequence::new(&m, coeff.parse()?)?;
            let r = seq.report()?;
            let code = if r.exact.is_some_and(|e| !e.iter().all(|&x| x)) { EXIT_FALSE } else { EXIT_OK };
            Outcome::json(code, r)
        }
        Command::Selftest { seed } => {
            let rows = acceptance::run_all(seed);
            let ok = rows.iter().all(|r| r.pass);
            Outcome::json(if ok { EXIT_OK } else { EXIT_FALSE }, json!({ "seed": seed, "passed": ok, "criteria": rows }))
        }
    }
}

fn error_code(e: &Error) -> i32 {
    match e {
        Error::BudgetExceeded { .. } => EXIT_INDETERMINATE,
        _ => EXIT_USAGE,
    }
}

fn error_doc(e: &Error) -> serde_json::Value {
    match e {
        Error::Parse { path, message } => json!({ "error": "parse", "path": path, "message": message }),
        Error::BudgetExceeded { needed, budget } => json!({ "error": "budget", "needed": needed.to_string(), "budget": budget.to_string(), "message": e.to_string() }),
        other => json!({ "error": "invalid", "message": other.to_string() }),
    }
}

/// Runs a parsed command line and returns the exit code.
pub fn run(cli: Cli, out: &mut impl Write, err: &mut impl Write) -> i32 {
    match execute(cli.command) {
        Ok(o) => {
            let written = match (&o.doc, &o.text) {
                (Some(doc), _) => serde_json::to_writer_pretty(&mut *out, doc).map_err(std::io::Error::from).and_then(|_| writeln!(out)),
                (None, Some(t)) => writeln!(out, "{t}"),
                (None, None) => Ok(()),
            };
            if written.is_err() {
                return EXIT_USAGE;
            }
            o.code
        }
        Err(e) => {
            let _ = writeln!(err, "{}", error_doc(&e));
            error_code(&e)
        }
    }
}

/// Parses `args` (including the program name) and runs; clap usage errors exit 2.
pub fn main_with_args<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli, out, err),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{rendered}") } else { write!(out, "{rendered}") };
            code
        }
    }
}
