use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use lashof::classify::{classification_table, render_table};
use lashof::config::{Context, ContextConfig};
use lashof::graded::GeneratorSpec;
use lashof::op_expr::{adem_normalize, parse_ops, OpSeq, Strategy};
use lashof::r_algebra::{find_isomorphisms, kill_element, AlgebraPresentation};
use lashof::scenario::{self, ScenarioParams, ScenarioReport, BUILTIN};
use lashof::steenrod::Basis;
use lashof::unstable::{enumerate_generators, free_unstable_poincare, WordReport};
use lashof::{Error, Prime};

#[derive(Parser)]
#[command(name = "lashof", version, about = "Dyer-Lashof operations on graded-commutative F_p-algebras")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// The prime.
    #[arg(long, global = true)]
    p: Option<u32>,
    /// Degree bound.
    #[arg(long, global = true)]
    bound: Option<u32>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run packaged scenarios; exits nonzero if any assertion fails.
    Scenario(ScenarioArgs),
    /// Evaluate an expression to normal form.
    Eval {
        expr: String,
        /// `p2-dual`, `p3-dual` or a TOML config file. Defaults to the dual for `--p`.
        #[arg(long)]
        context: Option<String>,
        #[arg(long, value_enum)]
        basis: Option<BasisArg>,
    },
    /// Postnikov extension counts and collapse verdicts.
    Classify {
        #[arg(long, default_value_t = 10)]
        n_max: u32,
    },
    /// Generators of a free unstable algebra, e.g. `--gens zeta1@4,taubar1@5`.
    Enumerate {
        #[arg(long, value_delimiter = ',', required = true)]
        gens: Vec<String>,
    },
    /// Adem-normalize a composite operation such as `Q^1 Q^3`.
    Normalize {
        word: String,
        #[arg(long, value_enum, default_value_t = StrategyArg::Leftmost)]
        strategy: StrategyArg,
    },
    /// Kill a top-degree class of a presentation.
    Kill {
        #[arg(long)]
        context: PathBuf,
        element: String,
    },
    /// Isomorphisms between two presentations that respect the recorded operations.
    Iso {
        left: PathBuf,
        right: PathBuf,
        /// Ignore the operation data.
        #[arg(long)]
        bare: bool,
    },
}

#[derive(Args)]
struct ScenarioArgs {
    /// Scenario names; all built-ins when empty.
    names: Vec<String>,
    #[arg(long)]
    n_max: Option<u32>,
    #[arg(long)]
    parallel: bool,
    /// Include wall time in JSON output.
    #[arg(long)]
    timing: bool,
    #[arg(long)]
    list: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum BasisArg {
    Milnor,
    Zeta,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Leftmost,
    Rightmost,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            report_error(&cli, &e);
            ExitCode::from(2)
        }
    }
}

fn report_error(cli: &Cli, e: &Error) {
    if let (Error::Parse { position, .. }, Command::Eval { expr, .. }) = (e, &cli.command) {
        eprintln!("error: {e}\n  {expr}\n  {}^", " ".repeat(*position));
    } else if let (Error::Parse { position, .. }, Command::Normalize { word, .. }) = (e, &cli.command) {
        eprintln!("error: {e}\n  {word}\n  {}^", " ".repeat(*position));
    } else {
        eprintln!("error: {e}");
    }
}

fn prime(cli: &Cli) -> Result<Prime, Error> {
    Prime::new(cli.p.unwrap_or(2))
}

fn emit(json: bool, value: &impl Serialize, text: impl FnOnce() -> String) {
    if json {
        println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
    } else {
        print!("{}", text());
    }
}

fn run(cli: &Cli) -> Result<bool, Error> {
    match &cli.command {
        Command::Scenario(args) => run_scenarios(cli, args),
        Command::Eval { expr, context, basis } => {
            let name = match context {
                Some(c) => c.clone(),
                None => format!("p{}-dual", prime(cli)?),
            };
            let mut ctx = Context::resolve(&name, cli.bound)?;
            if let Some(b) = basis {
                ctx = ctx.with_basis(match b {
                    BasisArg::Milnor => Basis::Milnor,
                    BasisArg::Zeta => Basis::Zeta,
                });
            }
            let value = ctx.eval(expr)?;
            emit(cli.json, &json!({ "expr": expr, "value": value }), || format!("{value}\n"));
            Ok(true)
        }
        Command::Classify { n_max } => {
            let primes = match cli.p {
                Some(v) => vec![Prime::new(v)?],
                None => vec![Prime::two(), Prime::new(3)?, Prime::new(5)?],
            };
            let rows: Vec<_> = primes.iter().flat_map(|&p| classification_table(p, *n_max)).collect();
            emit(cli.json, &rows, || render_table(&rows));
            Ok(true)
        }
        Command::Enumerate { gens } => {
            let p = prime(cli)?;
            let specs = gens
                .iter()
                .map(|g| lashof::config::GeneratorEntry::Compact(g.clone()).spec())
                .collect::<Result<Vec<GeneratorSpec>, _>>()?;
            let bound = cli.bound.unwrap_or(2 * p.value() * p.value() - 2);
            let words: Vec<WordReport> = enumerate_generators(p, &specs, bound).iter().map(WordReport::from).collect();
            let poincare = free_unstable_poincare(p, &specs, bound)?;
            emit(cli.json, &json!({ "prime": p.value(), "bound": bound, "generators": words, "poincare": poincare }), || {
                let mut out = String::new();
                for w in &words {
                    out.push_str(&format!("{:>4}  {}\n", w.degree, w.word));
                }
                out.push_str(&format!("poincare: {poincare:?}\n"));
                out
            });
            Ok(true)
        }
        Command::Normalize { word, strategy } => {
            let p = prime(cli)?;
            let seq = OpSeq::new(p, parse_ops(word)?)?;
            let strategy = match strategy {
                StrategyArg::Leftmost => Strategy::LeftFirst,
                StrategyArg::Rightmost => Strategy::RightFirst,
            };
            let sum = adem_normalize(&seq, strategy);
            let text = sum.to_string();
            emit(cli.json, &json!({ "word": seq.to_string(), "normal_form": text, "degree": seq.degree() }), || format!("{text}\n"));
            Ok(true)
        }
        Command::Kill { context, element } => {
            let pres = load_presentation(context)?;
            let x = pres.parse_element(element)?;
            let out = kill_element(&pres, &x)?;
            let report = out.ring.report();
            emit(cli.json, &json!({ "ring": report, "tor": out.tor }), || {
                format!(
                    "relations: {}\npoincare: {:?}\nhigher Tor vanishes below {}: {}\n",
                    report.relations.join(", "),
                    report.poincare,
                    out.tor.n,
                    out.tor.vanishes_below(out.tor.n)
                )
            });
            Ok(true)
        }
        Command::Iso { left, right, bare } => {
            let (mut x, mut y) = (load_presentation(left)?, load_presentation(right)?);
            if *bare {
                x = x.without_q_data();
                y = y.without_q_data();
            }
            let isos = find_isomorphisms(&x, &y)?;
            let maps: Vec<Vec<(String, String)>> = isos.iter().map(|i| i.forward.describe(&x)).collect();
            emit(cli.json, &json!({ "count": maps.len(), "isomorphisms": maps }), || {
                let mut out = format!("{} isomorphism(s)\n", maps.len());
                for m in &maps {
                    let parts: Vec<String> = m.iter().map(|(g, v)| format!("{g} -> {v}")).collect();
                    out.push_str(&format!("  {}\n", parts.join(", ")));
                }
                out
            });
            Ok(true)
        }
    }
}

fn load_presentation(path: &PathBuf) -> Result<AlgebraPresentation, Error> {
    match ContextConfig::load(path)?.build()? {
        Context::Presentation { pres, .. } => Ok(pres),
        Context::Dual { .. } => Err(Error::Config(format!(
            "{}: expected kind = \"presentation\"",
            path.display()
        ))),
    }
}

fn run_scenarios(cli: &Cli, args: &ScenarioArgs) -> Result<bool, Error> {
    if args.list {
        for name in BUILTIN {
            println!("{name}");
        }
        return Ok(true);
    }
    let params = ScenarioParams {
        p: cli.p,
        bound: cli.bound,
        n_max: args.n_max,
    };
    let names: Vec<&str> = if args.names.is_empty() {
        BUILTIN.to_vec()
    } else {
        args.names.iter().map(String::as_str).collect()
    };
    let specs = names
        .iter()
        .map(|n| scenario::builtin(n, params))
        .collect::<Result<Vec<_>, _>>()?;
    let results = scenario::run_all(&specs, args.parallel);
    let pass = results.iter().all(|(r, _)| r.pass);
    if cli.json {
        let reports: Vec<serde_json::Value> = results
            .iter()
            .map(|(r, t)| {
                let mut v = serde_json::to_value(r).expect("serializable");
                if args.timing {
                    v["wall_ms"] = json!(t.as_secs_f64() * 1000.0);
                }
                v
            })
            .collect();
        println!("{}", serde_json::to_string_pretty(&reports).expect("serializable"));
    } else {
        for (r, t) in &results {
            print_report(r, t.as_secs_f64() * 1000.0);
        }
    }
    Ok(pass)
}

fn print_report(r: &ScenarioReport, ms: f64) {
    let verdict = if r.pass { "PASS" } else { "FAIL" };
    println!("{} {verdict} ({} assertions, {ms:.1} ms)", r.scenario, r.assertions.len());
    for a in &r.assertions {
        let mark = if a.pass { "ok  " } else { "FAIL" };
        println!("  {mark} [{}] {}: {}", a.label, a.name, a.actual);
        if !a.pass {
            println!("         expected: {}", a.expected);
        }
    }
}
