use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use proofsys::bits::{format_bits, parse_bits};
use proofsys::circuit::{self, Circuit};
use proofsys::expr::{self, parse_expr, parse_spec, Expr};
use proofsys::graph::GraphKind;
use proofsys::np::PadKind;
use proofsys::verify::{
    check_completeness, check_range, check_soundness, locality_audit, Bounds, Report,
    SoundnessOptions, DEFAULT_BUDGET,
};
use proofsys::Error;

const SPEC_HELP: &str = "\
Language specs (--lang):
  regular:FILE:N      words of length N accepted by the automaton in FILE
  structured:FILE     words accepted by the branching program in FILE
  threshold:N:T       length-N words with at least T ones
  exact:N:T           length-N words with exactly T ones
  cycles:N            even-degree graphs on N vertices
  ustconn:N           graphs on N vertices with 1 and N connected
  unreach:N           digraphs on N vertices with no path from 1 to N
  sac:FILE            verifier language plus 1^n
  co-sac:FILE         verifier language plus 0^n
  padded:FILE:N       1.L.0 plus 0^N and 1^N (co-padded: dual circuit)
  expr:EXPRESSION     combinator expression, e.g. union(exact(3,1),exact(3,3))

Exit codes: 0 pass, 1 verification failure, 2 usage or input error.";

#[derive(Parser)]
#[command(name = "proofsys", version, about = "Synthesize and verify small-depth proof systems", after_help = SPEC_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a proof-system circuit and write it to a file
    Synth(SynthArgs),
    /// Evaluate a circuit on one proof input
    Eval {
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long)]
        input: String,
    },
    /// Check a circuit against a language
    Verify {
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long)]
        lang: String,
        #[arg(long, value_enum)]
        mode: VerifyMode,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Trials in sample mode
        #[arg(long, default_value_t = 1 << 16)]
        samples: u64,
    },
    /// Print circuit metrics and audit optional bounds
    Stats {
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long)]
        bound_cone: Option<usize>,
        #[arg(long)]
        bound_depth: Option<usize>,
        #[arg(long)]
        bound_alt: Option<usize>,
    },
    /// Print a proof input producing a word
    Witness {
        #[arg(long)]
        lang: String,
        #[arg(long)]
        word: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyMode {
    Exhaustive,
    Sample,
    Witness,
}

#[derive(Args)]
struct SynthArgs {
    #[command(subcommand)]
    family: Option<Family>,
    /// Combinator expression instead of a family
    #[arg(long, global = true)]
    expr: Option<String>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Family {
    Regular {
        #[arg(long)]
        dfa: String,
        #[arg(long)]
        n: usize,
    },
    Structured {
        #[arg(long)]
        bp: String,
    },
    Threshold {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: usize,
    },
    Exact {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: usize,
    },
    Cycles {
        #[arg(long)]
        n: usize,
    },
    Ustconn {
        #[arg(long)]
        n: usize,
    },
    Unreach {
        #[arg(long)]
        n: usize,
    },
    CoSac {
        #[arg(long)]
        verifier: String,
    },
    Sac {
        #[arg(long)]
        verifier: String,
    },
    Padded {
        #[arg(long)]
        verifier: String,
        #[arg(long)]
        n: usize,
        /// Emit the dual (co-SAC) circuit
        #[arg(long)]
        co: bool,
    },
}

enum Failure {
    Usage(String),
    Check,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn family_expr(f: Family) -> Result<Expr, Error> {
    let graph = |kind, n| Expr::Graph { kind, n };
    let np = |path: &str, pad, co_sac| -> Result<Expr, Error> {
        Ok(Expr::Np {
            verifier: expr::load_verifier(path)?,
            pad,
            co_sac,
        })
    };
    Ok(match f {
        Family::Regular { dfa, n } => Expr::Regular {
            automaton: expr::load_automaton(&dfa)?,
            n,
        },
        Family::Structured { bp } => Expr::Structured(expr::load_bp(&bp)?),
        Family::Threshold { n, t } => Expr::Threshold { n, t },
        Family::Exact { n, t } => Expr::Exact { n, t },
        Family::Cycles { n } => graph(GraphKind::Cycles, n),
        Family::Ustconn { n } => graph(GraphKind::UstConn, n),
        Family::Unreach { n } => graph(GraphKind::UnReach, n),
        Family::CoSac { verifier } => np(&verifier, PadKind::CoSac, true)?,
        Family::Sac { verifier } => np(&verifier, PadKind::Sac, false)?,
        Family::Padded { verifier, n, co } => {
            let e = np(&verifier, PadKind::Padded, co)?;
            if e.output_len() != n {
                return Err(Error::Parameter(format!(
                    "padded length {n} does not match the verifier's input bits plus 2"
                )));
            }
            e
        }
    })
}

fn write_file(path: &Path, text: &str) -> Result<(), Error> {
    fs::write(path, text).map_err(|e| Error::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })
}

fn load_circuit(path: &Path) -> Result<Circuit, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })?;
    circuit::parse(&text)
}

fn synth(args: SynthArgs) -> Outcome {
    let out = args
        .out
        .ok_or_else(|| Failure::Usage("synth needs --out FILE".into()))?;
    let e = match (args.family, args.expr) {
        (Some(f), None) => family_expr(f)?,
        (None, Some(src)) => parse_expr(&src)?,
        _ => {
            return Err(Failure::Usage(
                "synth needs exactly one of a family or --expr".into(),
            ))
        }
    };
    let sys = e.build()?;
    write_file(&out, &circuit::serialize(sys.circuit()))?;
    if let Some(layout) = sys.layout() {
        let mut name = out.clone().into_os_string();
        name.push(".layout");
        write_file(Path::new(&name), layout)?;
    }
    let c = sys.circuit();
    println!(
        "wrote {}: {} inputs, {} outputs, size {}, depth {}",
        out.display(),
        c.num_inputs(),
        c.num_outputs(),
        c.metrics().size,
        c.depth()
    );
    Ok(())
}

fn finish(reports: &[Report]) -> Outcome {
    for r in reports {
        println!("{r}");
    }
    if reports.iter().all(Report::pass) {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn verify(
    path: &Path,
    lang: &str,
    mode: VerifyMode,
    budget: u64,
    seed: u64,
    samples: u64,
) -> Outcome {
    let c = load_circuit(path)?;
    let e = parse_spec(lang)?;
    let spec = e.language();
    let n = e.size();
    match mode {
        VerifyMode::Exhaustive => {
            let m = c.num_inputs();
            if m >= 64 || 1u64 << m > budget {
                return Err(Failure::Usage(format!(
                    "exhaustive sweep over 2^{m} proofs exceeds the budget {budget}"
                )));
            }
            let opts = SoundnessOptions {
                budget,
                seed,
                ..Default::default()
            };
            let mut reports = vec![check_soundness(&c, &spec, n, &opts)];
            // Completeness too when the slice is small enough to list.
            match check_range(&c, &spec, n, budget) {
                Ok(r) => reports.push(r),
                Err(Error::Budget { .. }) => {}
                Err(e) => return Err(e.into()),
            }
            finish(&reports)
        }
        VerifyMode::Sample => {
            let sys = e.build()?;
            let bases = spec
                .enumerate_slice(n, budget as u128)
                .map(|members| {
                    let step = (members.len() / 16).max(1);
                    members
                        .iter()
                        .step_by(step)
                        .filter_map(|w| sys.witness(w).ok())
                        .filter(|p| p.len() == c.num_inputs())
                        .collect()
                })
                .unwrap_or_default();
            let opts = SoundnessOptions {
                budget,
                seed,
                force_sample: true,
                samples,
                bases,
            };
            finish(&[check_soundness(&c, &spec, n, &opts)])
        }
        VerifyMode::Witness => {
            let sys = e.build()?;
            let mut w = |word: &[bool]| sys.witness(word);
            finish(&[check_completeness(&c, &spec, n, &mut w, budget)?])
        }
    }
}

fn stats(path: &Path, bounds: Bounds) -> Outcome {
    let c = load_circuit(path)?;
    let m = c.metrics();
    println!("inputs: {}", c.num_inputs());
    println!("outputs: {}", c.num_outputs());
    println!("size: {}", m.size);
    println!("depth: {}", m.depth);
    println!("alternations: {}", m.alternations);
    println!("max cone: {}", m.max_cone());
    if bounds == Bounds::default() {
        return Ok(());
    }
    finish(&[locality_audit(&c, &bounds)])
}

fn witness(lang: &str, word: &str) -> Outcome {
    let e = parse_spec(lang)?;
    let word = parse_bits(word)?;
    let sys = e.build()?;
    match sys.witness(&word) {
        Ok(proof) => {
            println!("{}", format_bits(&proof));
            Ok(())
        }
        Err(e) => {
            eprintln!("{e}");
            Err(Failure::Check)
        }
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Synth(args) => synth(args),
        Command::Eval { circuit, input } => {
            let c = load_circuit(&circuit)?;
            let out = c.eval(&parse_bits(&input)?)?;
            println!("{}", format_bits(&out));
            Ok(())
        }
        Command::Verify {
            circuit,
            lang,
            mode,
            budget,
            seed,
            samples,
        } => verify(&circuit, &lang, mode, budget, seed, samples),
        Command::Stats {
            circuit,
            bound_cone,
            bound_depth,
            bound_alt,
        } => stats(
            &circuit,
            Bounds {
                max_cone: bound_cone,
                max_depth: bound_depth,
                max_alternations: bound_alt,
            },
        ),
        Command::Witness { lang, word } => witness(&lang, &word),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
