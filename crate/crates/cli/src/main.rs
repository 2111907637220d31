mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pfcirc::acceptance::{self, DEFAULT_SEED};
use pfcirc::certs;
use pfcirc::circuit::{
    edge_order_from_embedding, evaluate_bruteforce, evaluate_with_order, evaluators, topologies,
    CircuitJson,
};
use pfcirc::invariants::{dual_invariants, invariants, InvariantVector};
use pfcirc::swapsub::{self, SwapSolution};
use pfcirc::tensor::TensorJson;
use pfcirc::varieties::{check_membership, VarietySide};
use pfcirc::{samplers, Circuit, EdgeOrder, QubitTensor, Scalar, Variance};

use report::RunReport;

#[derive(Parser, Debug)]
#[command(
    name = "pfcirc",
    version,
    about = "Exact evaluation and analysis of Pfaffian circuits"
)]
struct Cli {
    /// Print the full report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Record wall-clock time in the report. Reports with timing are not reproducible byte for byte.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a circuit given as JSON.
    Eval {
        circuit: PathBuf,
        /// Also contract the circuit exhaustively and compare.
        #[arg(long)]
        oracle: bool,
        /// `auto` to derive edge labels from the embedding, or a JSON file `{"sequence": [...]}`.
        #[arg(long, default_value = "auto")]
        order: String,
        /// Registered evaluator to use when the order is automatic.
        #[arg(long, default_value = "pfaffian")]
        evaluator: String,
    },
    /// Test a tensor against the Pfaffian gate or cogate variety.
    Member {
        tensor: PathBuf,
        #[arg(long, value_enum)]
        side: SideArg,
        /// Drop the normalization, testing the cone instead.
        #[arg(long)]
        cone: bool,
        /// Turn the answer into a verdict.
        #[arg(long, value_enum)]
        expect: Option<Expect>,
    },
    /// The four-qubit invariants H, det L, det M, det B (daggered for bra tensors).
    Invariants {
        tensor: PathBuf,
        /// Expected values as `h,l,m,b` integers, turned into a verdict.
        #[arg(long, value_delimiter = ',')]
        expect: Option<Vec<i64>>,
    },
    /// Replace one SWAP by a Pfaffian cogate and compare circuit values.
    SwapDemo {
        /// Use the solution with a = e = 1/2, b = f = 1/sqrt2 (default when no other source is given).
        #[arg(long, conflicts_with = "params")]
        paper_solution: bool,
        /// Free parameters `b,c,f,h` of the solution, e.g. `1,2,1/3,5`.
        #[arg(long, value_delimiter = ',')]
        params: Option<Vec<String>>,
        /// Additional randomly sampled solutions.
        #[arg(long, default_value_t = 0)]
        trials: usize,
        /// Random host circuits per solution, alternating between the two host shapes.
        #[arg(long, default_value_t = 20)]
        hosts: usize,
    },
    /// Check that several replaced SWAPs leave the cogate cone.
    SwapObstruction {
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Number of solution tuples; the first uses the explicit solution.
        #[arg(long, default_value_t = 10)]
        trials: usize,
    },
    /// Search for an ideal membership certificate.
    Cert {
        #[arg(long, value_enum, default_value = "paper-i-plus-j")]
        system: System,
        /// A single degree bound instead of the default ladder 8, 10, 12.
        #[arg(long)]
        degree: Option<u32>,
        /// Write the multipliers as JSON.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Run the acceptance checks.
    Selftest {
        /// Run a single check (1 to 9).
        #[arg(long)]
        only: Option<u8>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SideArg {
    Gate,
    Cogate,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum Expect {
    Member,
    NonMember,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum System {
    /// Invariant values of SWAP together with the four-leg Pfaffian equations.
    PaperIPlusJ,
}

/// Bad input: unreadable or malformed files, invalid parameters.
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

type Outcome = Result<(), InputError>;

struct Inputs(Vec<Vec<u8>>);

impl Inputs {
    fn read(&mut self, path: &Path) -> Result<Vec<u8>, InputError> {
        let bytes =
            std::fs::read(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
        self.0.push(bytes.clone());
        Ok(bytes)
    }

    fn json<T: serde::de::DeserializeOwned>(&mut self, path: &Path) -> Result<T, InputError> {
        let bytes = self.read(path)?;
        serde_json::from_slice(&bytes).map_err(|e| InputError(format!("{}: {e}", path.display())))
    }

    fn circuit(&mut self, path: &Path) -> Result<Circuit, InputError> {
        let j: CircuitJson = self.json(path)?;
        Circuit::from_json(&j).map_err(|e| InputError(format!("{}: {e}", path.display())))
    }

    fn tensor(&mut self, path: &Path) -> Result<QubitTensor, InputError> {
        let j: TensorJson = self.json(path)?;
        QubitTensor::from_json(&j).map_err(|e| InputError(format!("{}: {e}", path.display())))
    }
}

fn eval(
    r: &mut RunReport,
    inputs: &mut Inputs,
    path: &Path,
    oracle: bool,
    order: &str,
    evaluator: &str,
) -> Outcome {
    let c = inputs.circuit(path)?;
    let value = if order == "auto" {
        let ev = evaluators().get(evaluator)?;
        r.note(format!("evaluator: {}", ev.name()));
        ev.evaluate(&c)?
    } else {
        let order: EdgeOrder = inputs.json(Path::new(order))?;
        let order = EdgeOrder::from_sequence(order.sequence().to_vec(), c.edges().len())?;
        evaluate_with_order(&c, &order, false)?.value
    };
    r.value("value", &value);
    if order == "auto" && c.components().len() == 1 {
        if let Ok(o) = edge_order_from_embedding(&c) {
            r.note(format!("edge order: {:?}", o.sequence()));
        }
    }
    if oracle {
        let exhaustive = evaluate_bruteforce(&c)?;
        r.value("exhaustive", &exhaustive);
        r.verdict("value equals exhaustive contraction", exhaustive == value);
    }
    Ok(())
}

fn member(
    r: &mut RunReport,
    inputs: &mut Inputs,
    path: &Path,
    side: SideArg,
    cone: bool,
    expect: Option<Expect>,
) -> Outcome {
    let t = inputs.tensor(path)?;
    let side = match side {
        SideArg::Gate => VarietySide::Gate,
        SideArg::Cogate => VarietySide::Cogate,
    };
    let rep = check_membership(&t, side, cone)?;
    let what = if cone { "cone" } else { "variety" };
    r.note(format!("member of {side:?} {what}: {}", rep.member));
    r.note(format!("relations checked: {}", rep.relations_checked));
    if let Some(v) = &rep.violation {
        r.note(format!("violation: {v}"));
    }
    if let Some(e) = expect {
        r.verdict(
            format!("expected {e:?}"),
            rep.member == (e == Expect::Member),
        );
    }
    Ok(())
}

fn invariant_values(
    r: &mut RunReport,
    inputs: &mut Inputs,
    path: &Path,
    expect: Option<Vec<i64>>,
) -> Outcome {
    let t = inputs.tensor(path)?;
    let values = if t.is_all(Variance::Bra) {
        r.note("bra tensor: daggered generators");
        dual_invariants(&t)?
    } else {
        invariants(&t)?
    };
    for (name, v) in ["H", "det L", "det M", "det B"]
        .into_iter()
        .zip(values.as_array())
    {
        r.value(name, v);
    }
    if let Some(e) = expect {
        if e.len() != 4 {
            return Err(InputError(format!(
                "--expect needs four values, got {}",
                e.len()
            )));
        }
        let want = InvariantVector::from_i64([e[0], e[1], e[2], e[3]]);
        r.verdict(format!("invariants equal {e:?}"), values == want);
    }
    Ok(())
}

fn parse_solution(params: &[String]) -> Result<SwapSolution, InputError> {
    if params.len() != 4 {
        return Err(InputError(format!(
            "--params needs b,c,f,h, got {} values",
            params.len()
        )));
    }
    let vals: Vec<Scalar> = params
        .iter()
        .map(|p| {
            p.trim()
                .parse::<Scalar>()
                .map_err(|e| InputError(format!("parameter {p:?}: {e}")))
        })
        .collect::<Result<_, _>>()?;
    Ok(swapsub::sample_solution(&[
        vals[0].clone(),
        vals[1].clone(),
        vals[2].clone(),
        vals[3].clone(),
    ])?)
}

fn swap_demo(
    r: &mut RunReport,
    rng: &mut ChaCha8Rng,
    paper: bool,
    params: Option<Vec<String>>,
    trials: usize,
    hosts: usize,
) -> Outcome {
    let mut sols = Vec::new();
    match params {
        Some(p) => sols.push(("given", parse_solution(&p)?)),
        None if paper || trials == 0 => sols.push(("explicit", swapsub::paper_solution())),
        None => {}
    }
    sols.extend((0..trials).map(|_| ("sampled", swapsub::random_solution(rng))));
    let shapes =
        ["double-digon", "cogate-pair"].map(|n| topologies::by_name(n).expect("catalog shape"));
    for (k, (kind, sol)) in sols.iter().enumerate() {
        let s = sol.s();
        for (i, j) in [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)] {
            r.value(
                format!("solution {k} ({kind}) S[{}{}]", i + 1, j + 1),
                s.get(i, j),
            );
        }
        let (p, _) = sol.parts();
        let rep = check_membership(&p, VarietySide::Cogate, false)?;
        r.verdict(
            format!("solution {k}: even part is a Pfaffian cogate"),
            rep.member,
        );
        let mut agree = 0;
        for h in 0..hosts {
            let host = samplers::randomize_circuit(&shapes[h % 2], rng);
            let out = swapsub::demo_substitution(&host, 0, sol)?;
            if h == 0 {
                r.value(format!("solution {k} host 0 before"), &out.before);
                r.value(format!("solution {k} host 0 after"), &out.after);
            }
            agree += out.equal() as usize;
        }
        r.verdict(
            format!("solution {k}: {agree}/{hosts} substitutions keep the value"),
            agree == hosts,
        );
    }
    Ok(())
}

fn swap_obstruction(r: &mut RunReport, rng: &mut ChaCha8Rng, k: usize, trials: usize) -> Outcome {
    for t in 0..trials {
        let sols: Vec<SwapSolution> = (0..k)
            .map(|_| {
                if t == 0 {
                    swapsub::paper_solution()
                } else {
                    swapsub::random_solution(rng)
                }
            })
            .collect();
        let rep = swapsub::multi_swap_obstruction(k, &sols)?;
        if let Some(v) = &rep.violation {
            r.note(format!("tuple {t}: {v}"));
        }
        r.verdict(
            format!("tuple {t}: even part leaves the cogate cone"),
            !rep.cone_member,
        );
    }
    Ok(())
}

fn cert(r: &mut RunReport, degree: Option<u32>, dump: Option<PathBuf>) -> Outcome {
    let ladder = match degree {
        Some(d) => vec![d],
        None => certs::DEGREE_LADDER.to_vec(),
    };
    let run = certs::paper_certificate(&ladder);
    for a in &run.attempts {
        r.note(format!(
            "degree {}: {} unknowns, {} equations, rank {}",
            a.degree, a.unknowns, a.equations, a.rank
        ));
    }
    match &run.certificate {
        Some(c) => {
            r.note(format!(
                "certificate at degree bound {}: {} multiplier terms",
                c.degree,
                c.size()
            ));
            if let Some(path) = dump {
                let text = serde_json::to_string(&c.to_json())?;
                std::fs::write(&path, text)
                    .map_err(|e| InputError(format!("{}: {e}", path.display())))?;
                r.note(format!("multipliers written to {}", path.display()));
            }
        }
        None => r.note(format!(
            "no certificate up to degree {}",
            run.degree_reached().unwrap_or(0)
        )),
    }
    r.verdict("1 lies in the ideal (verified certificate)", run.verified);
    Ok(())
}

fn selftest(r: &mut RunReport, seed: u64, only: Option<u8>) -> Outcome {
    let results =
        match only {
            Some(id) => vec![acceptance::run_one(id, seed)
                .ok_or_else(|| InputError(format!("no check {id}")))?],
            None => acceptance::run_all(seed),
        };
    for c in results {
        r.note(format!("{}. {}: {}", c.id, c.name, c.detail));
        r.verdict(format!("{}. {}", c.id, c.name), c.passed);
    }
    Ok(())
}

fn run(cli: Cli, argv: Vec<String>) -> (RunReport, Outcome) {
    let mut r = RunReport::new(argv, cli.seed);
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let mut inputs = Inputs(Vec::new());
    let start = Instant::now();
    let outcome = match cli.command {
        Command::Eval {
            circuit,
            oracle,
            order,
            evaluator,
        } => eval(&mut r, &mut inputs, &circuit, oracle, &order, &evaluator),
        Command::Member {
            tensor,
            side,
            cone,
            expect,
        } => member(&mut r, &mut inputs, &tensor, side, cone, expect),
        Command::Invariants { tensor, expect } => {
            invariant_values(&mut r, &mut inputs, &tensor, expect)
        }
        Command::SwapDemo {
            paper_solution,
            params,
            trials,
            hosts,
        } => swap_demo(&mut r, &mut rng, paper_solution, params, trials, hosts),
        Command::SwapObstruction { k, trials } => swap_obstruction(&mut r, &mut rng, k, trials),
        Command::Cert {
            system: System::PaperIPlusJ,
            degree,
            dump,
        } => cert(&mut r, degree, dump),
        Command::Selftest { only } => selftest(&mut r, cli.seed, only),
    };
    r.set_digest(&inputs.0);
    if cli.timing {
        r.wall_clock_ms = Some(start.elapsed().as_millis());
    }
    (r, outcome)
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    let json = cli.json;
    let (report, outcome) = run(cli, argv.into_iter().skip(1).collect());
    if let Err(InputError(msg)) = outcome {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(&report).expect("report serializes")
        );
    } else {
        print!("{}", report.to_text());
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
