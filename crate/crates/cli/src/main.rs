use std::fs;
use std::io::{self, IsTerminal, Write};
use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use szlenk::fuzz::{self, Estimate, FuzzConfig};
use szlenk::grasberg::{Grasberg, StepFunction};
use szlenk::szlenk::{extract_small_combination, index_of_ck, index_of_interval};
use szlenk::trees::{FiniteTree, MarchingIndicators, TableFamily, WeaklyNullFamily};
use szlenk::{ClosedSet, Error, Ordinal, Rational};

#[derive(Parser)]
#[command(name = "szlenk", version, about = "Cantor-Bendixson and Szlenk indices of C([0, z])")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ordinal arithmetic in Cantor normal form.
    Ord {
        #[command(subcommand)]
        op: OrdOp,
    },
    /// Cantor-Bendixson index of [0, z].
    Cb {
        #[arg(value_parser = ordinal)]
        z: Ordinal,
    },
    /// Iterated derived set of [0, z].
    Derive {
        #[arg(value_parser = ordinal)]
        z: Ordinal,
        #[arg(long, value_parser = ordinal)]
        times: Ordinal,
    },
    /// CB index and Szlenk index of C([0, z]).
    Szlenk {
        #[arg(value_parser = ordinal)]
        z: Ordinal,
    },
    /// Grasberg norm quantities on [0, z].
    Grasberg {
        #[command(subcommand)]
        op: GrasbergOp,
    },
    /// Fuzz one of the two norm estimates.
    Check {
        estimate: EstimateArg,
        #[arg(long, value_parser = ordinal)]
        space: Ordinal,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        pieces: usize,
    },
    /// Rank and rank facts of a finite tree.
    Tree {
        op: TreeOp,
        /// Tree file: "id parent" lines, or JSON {"nodes": [...]}.
        #[arg(long)]
        file: String,
    },
    /// Small convex combination from a weakly null family.
    Extract {
        #[arg(long, value_parser = ordinal)]
        space: Ordinal,
        /// "marching-indicators" or a family file.
        #[arg(long, default_value = "marching-indicators")]
        family: String,
        #[arg(long, value_parser = rational)]
        delta: Rational,
        /// Ladder step of the marching indicators.
        #[arg(long, value_parser = ordinal, default_value = "1")]
        ladder: Ordinal,
    },
}

#[derive(Subcommand)]
enum OrdOp {
    /// Canonical form.
    Eval {
        #[arg(value_parser = ordinal)]
        a: Ordinal,
    },
    Cmp {
        #[arg(value_parser = ordinal)]
        a: Ordinal,
        #[arg(value_parser = ordinal)]
        b: Ordinal,
    },
    /// Left-to-right sum.
    Add {
        #[arg(value_parser = ordinal, required = true)]
        terms: Vec<Ordinal>,
    },
    /// a * k for a positive natural k.
    Mul {
        #[arg(value_parser = ordinal)]
        a: Ordinal,
        #[arg(value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
    },
    /// The c with a + c = b.
    Sub {
        #[arg(value_parser = ordinal)]
        a: Ordinal,
        #[arg(value_parser = ordinal)]
        b: Ordinal,
    },
}

#[derive(Subcommand)]
enum GrasbergOp {
    /// o(K), b(K) and CB(K).
    Params(SpaceArg),
    /// Grasberg norm and sup norm of a step function.
    Norm(FnArgs),
    /// Critical set Phi(f, eps).
    Phi {
        #[command(flatten)]
        f: FnArgs,
        #[arg(long, value_parser = rational)]
        eps: Rational,
    },
}

#[derive(Args)]
struct SpaceArg {
    #[arg(long, value_parser = ordinal)]
    space: Ordinal,
}

#[derive(Args)]
struct FnArgs {
    #[arg(long, value_parser = ordinal)]
    space: Ordinal,
    /// Step function JSON, inline or a file path.
    #[arg(long = "fn")]
    function: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum EstimateArg {
    King,
    Queen,
}

#[derive(Clone, Copy, ValueEnum)]
enum TreeOp {
    Rank,
    Facts,
}

fn ordinal(s: &str) -> Result<Ordinal, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn rational(s: &str) -> Result<Rational, String> {
    s.trim().parse().map_err(|_| format!("expected a rational p/q, got {s:?}"))
}

/// Failure of a command: exit 1 for domain errors, 2 for bad input.
struct Failure {
    code: u8,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Syntax { .. } | Error::ZeroCoefficient { .. } | Error::NonDecreasingExponents { .. } => 2,
            _ => 1,
        };
        Failure {
            code,
            msg: e.to_string(),
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        msg: msg.into(),
    }
}

struct Out {
    json: bool,
    color: bool,
    lines: Vec<String>,
}

impl Out {
    fn text(&mut self, line: impl Into<String>) {
        self.lines.push(line.into());
    }

    /// Prints `value` in JSON mode or `text` otherwise.
    fn either(&mut self, value: Value, text: impl Into<String>) {
        if self.json {
            self.lines.push(value.to_string());
        } else {
            self.lines.push(text.into());
        }
    }

    fn verdict(&self, pass: bool) -> String {
        let word = if pass { "pass" } else { "FAIL" };
        match (self.color, pass) {
            (false, _) => word.to_string(),
            (true, true) => format!("\x1b[32m{word}\x1b[0m"),
            (true, false) => format!("\x1b[31m{word}\x1b[0m"),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let color = !cli.json && std::env::var_os("NO_COLOR").is_none() && io::stdout().is_terminal();
    let mut out = Out {
        json: cli.json,
        color,
        lines: Vec::new(),
    };
    let result = run(cli.command, &mut out);
    let mut stdout = io::stdout().lock();
    for line in &out.lines {
        let _ = writeln!(stdout, "{line}");
    }
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command, out: &mut Out) -> Result<u8, Failure> {
    match command {
        Command::Ord { op } => ord(op, out)?,
        Command::Cb { z } => {
            let cb = ClosedSet::interval(z).cb_index();
            out.either(json!({ "cb": cb, "text": cb.to_string() }), cb.to_string());
        }
        Command::Derive { z, times } => {
            let set = ClosedSet::interval(z).iterated_derivative(&times);
            let cb = set.cb_index();
            out.either(
                json!({ "set": set, "cb": cb, "text": set.to_string() }),
                set.to_string(),
            );
        }
        Command::Szlenk { z } => {
            let r = if z.is_finite() {
                index_of_ck(&ClosedSet::interval(z))?
            } else {
                index_of_interval(&z)?
            };
            out.either(
                json!({ "cb": r.cb, "index": r.index, "exponent": r.exponent, "text": {
                    "cb": r.cb.to_string(), "index": r.index.to_string() } }),
                format!("CB={}, Sz(C(K))={}", r.cb, r.index),
            );
        }
        Command::Grasberg { op } => grasberg(op, out)?,
        Command::Check {
            estimate,
            space,
            trials,
            seed,
            pieces,
        } => return check(estimate, space, trials, seed, pieces, out),
        Command::Tree { op, file } => return tree(op, &file, out),
        Command::Extract {
            space,
            family,
            delta,
            ladder,
        } => extract(space, &family, delta, ladder, out)?,
    }
    Ok(0)
}

fn ord(op: OrdOp, out: &mut Out) -> Result<(), Failure> {
    let result = match op {
        OrdOp::Eval { a } => a,
        OrdOp::Cmp { a, b } => {
            let sign = match a.cmp(&b) {
                std::cmp::Ordering::Less => "<",
                std::cmp::Ordering::Equal => "=",
                std::cmp::Ordering::Greater => ">",
            };
            out.either(json!({ "cmp": sign }), format!("{a} {sign} {b}"));
            return Ok(());
        }
        OrdOp::Add { terms } => terms.iter().fold(Ordinal::zero(), |acc, t| acc.add(t)),
        OrdOp::Mul { a, k } => a.mul_nat(k),
        OrdOp::Sub { a, b } => a.left_subtract(&b)?,
    };
    out.either(json!({ "ordinal": result, "text": result.to_string() }), result.to_string());
    Ok(())
}

/// Inline JSON if it looks like JSON, otherwise a file path.
fn read_source(arg: &str) -> Result<String, Failure> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        return Ok(arg.to_string());
    }
    fs::read_to_string(arg).map_err(|e| usage(format!("cannot read {arg}: {e}")))
}

fn step_function(args: &FnArgs) -> Result<(ClosedSet, StepFunction<Rational>), Failure> {
    let text = read_source(&args.function)?;
    let f: StepFunction<Rational> =
        serde_json::from_str(&text).map_err(|e| Failure::from(Error::Json(e.to_string())))?;
    if *f.ambient() != args.space {
        return Err(Error::AmbientMismatch(f.ambient().to_string(), args.space.to_string()).into());
    }
    Ok((ClosedSet::interval(args.space.clone()), f))
}

fn grasberg(op: GrasbergOp, out: &mut Out) -> Result<(), Failure> {
    match op {
        GrasbergOp::Params(SpaceArg { space }) => {
            let g = Grasberg::new(&ClosedSet::interval(space))?;
            let p = g.params();
            out.either(
                json!({ "o": p.o, "b": p.b, "cb": p.cb }),
                format!("o={}, b={}, CB={}", p.o, p.b, p.cb),
            );
        }
        GrasbergOp::Norm(args) => {
            let (k, f) = step_function(&args)?;
            let g = Grasberg::new(&k)?;
            let (norm, sup) = (g.norm(&f)?, g.sup_norm(&f)?);
            out.either(
                json!({ "norm": norm.to_string(), "supNorm": sup.to_string() }),
                format!("|f|={norm}, sup={sup}"),
            );
        }
        GrasbergOp::Phi { f: args, eps } => {
            let (k, f) = step_function(&args)?;
            let g = Grasberg::new(&k)?;
            let report = g.check_king(&f, &eps)?;
            out.either(
                json!({ "phi": report.phi, "cb": report.cb_phi, "text": report.phi.to_string() }),
                format!("{} (CB={})", report.phi, report.cb_phi),
            );
        }
    }
    Ok(())
}

fn check(
    estimate: EstimateArg,
    space: Ordinal,
    trials: usize,
    seed: u64,
    pieces: usize,
    out: &mut Out,
) -> Result<u8, Failure> {
    let estimate = match estimate {
        EstimateArg::King => Estimate::King,
        EstimateArg::Queen => Estimate::Queen,
    };
    if pieces == 0 {
        return Err(usage("--pieces must be at least 1"));
    }
    let config = FuzzConfig {
        trials,
        seed,
        max_pieces: pieces,
    };
    let report = fuzz::run::<Rational>(&ClosedSet::interval(space), estimate, &config)?;
    let pass = report.all_passed();
    let cases: Vec<Value> = report
        .counterexamples
        .iter()
        .map(|c| {
            json!({
                "trial": c.trial,
                "seed": seed.wrapping_add(c.trial as u64),
                "f": c.f,
                "g": c.g,
                "eps": c.eps.to_string(),
            })
        })
        .collect();
    if out.json {
        out.text(
            json!({
                "estimate": estimate.to_string(),
                "trials": report.trials,
                "passed": report.passed,
                "counterexamples": cases,
            })
            .to_string(),
        );
    } else {
        out.text(format!("{report}"));
        if !pass {
            out.text(out.verdict(false));
        }
        for c in &cases {
            out.text(format!("counterexample (shrunk): {c}"));
        }
    }
    Ok(if pass { 0 } else { 1 })
}

fn read_tree(path: &str) -> Result<FiniteTree, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {path}: {e}")))?;
    let is_json = Path::new(path).extension().is_some_and(|e| e == "json") || text.trim_start().starts_with('{');
    Ok(if is_json {
        FiniteTree::from_json(&text)?
    } else {
        FiniteTree::parse_text(&text)?
    })
}

fn tree(op: TreeOp, path: &str, out: &mut Out) -> Result<u8, Failure> {
    let t = read_tree(path)?;
    let rank = t.rank();
    match op {
        TreeOp::Rank => {
            out.either(json!({ "nodes": t.len(), "rank": rank }), rank.to_string());
            Ok(0)
        }
        TreeOp::Facts => {
            let mut all = true;
            let mut rows = Vec::new();
            for k in 0..=rank {
                let i = t.check_fact_i(k)?;
                let ii = t.check_fact_ii(k)?;
                all &= i.pass && ii.pass;
                if !out.json {
                    out.text(format!(
                        "k={k}: (i) rank(T\\T^k)={} {}, (ii) {} nodes {}",
                        i.strip_rank,
                        out.verdict(i.pass),
                        ii.checked,
                        out.verdict(ii.pass)
                    ));
                }
                rows.push(json!({ "k": k, "factI": i, "factII": ii }));
            }
            out.either(
                json!({ "rank": rank, "facts": rows, "pass": all }),
                format!("rank {rank}: {}", out.verdict(all)),
            );
            Ok(if all { 0 } else { 1 })
        }
    }
}

/// `{"cutoff": N, "functions": [step function, ...]}`.
#[derive(Deserialize)]
struct FamilyFile {
    cutoff: usize,
    functions: Vec<StepFunction<Rational>>,
}

fn extract(space: Ordinal, family: &str, delta: Rational, ladder: Ordinal, out: &mut Out) -> Result<(), Failure> {
    let k = ClosedSet::interval(space);
    let family: Box<dyn WeaklyNullFamily<Rational>> = if family == "marching-indicators" {
        Box::new(MarchingIndicators::new(k.clone(), ladder)?)
    } else {
        let text = read_source(family)?;
        let file: FamilyFile = serde_json::from_str(&text).map_err(|e| Failure::from(Error::Json(e.to_string())))?;
        Box::new(TableFamily::new(k.clone(), file.functions, file.cutoff)?)
    };
    let cert = extract_small_combination(&k, family.as_ref(), &delta)?;
    if out.json {
        let mut v = serde_json::to_value(cert.summary()).expect("summary serializes");
        v["delta"] = json!(delta.to_string());
        v["b"] = json!(cert.params.b);
        v["final"] = serde_json::to_value(&cert.final_fn).expect("step functions serialize");
        out.text(v.to_string());
    } else {
        out.text(format!("b={}, n={}, eps={}", cert.params.b, cert.n, cert.eps));
        out.text(format!("branch {:?}", cert.branch.last().expect("n >= 1")));
        let last = cert.stage_norms.last().expect("n >= 1");
        out.text(format!(
            "stage norms within (1+eps)^(m-1); last {last} <= {}",
            cert.stage_bounds.last().expect("n >= 1")
        ));
        out.text(format!(
            "|f|={} <= {} < {} < {delta}",
            cert.final_norm, cert.chain.fine, cert.chain.coarse
        ));
    }
    Ok(())
}
