use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use mso_compose::partition::default_bound;
use mso_compose::semigroup::SemigroupError;
use mso_compose::tree::FiniteTree;
use mso_compose::{
    a2_wellorder, additive_ramsey, decide, decomposition_search, enumerate_types, eval_named, lex_uniformize,
    log_of, model_check, omega_power_tower, omega_sum, ord_add, ord_cmp, ord_left_sub, ord_mul, parse,
    parse_theory, partition_order_type, product_uniformize, serialize, sum_finite, synthesize_wellorder,
    theory_of_ordinal, tree_uniformize, verify_wellorder, AdditiveColoring, Budget, ChainTerm, Error,
    FiniteStructure, IntervalPartition, OrdinalCnf, SemigroupTable, TheorySequence,
};

#[derive(Parser)]
#[command(name = "msoc", version, about = "Composition-method toolkit for MSO on chains and trees")]
struct Cli {
    /// Wrap the output in a JSON object.
    #[arg(long, global = true)]
    json: bool,
    /// Work limit; computations that would exceed it stop with exit code 2.
    #[arg(long, global = true, default_value_t = Budget::default().limit)]
    budget: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Source {
    /// Chain file: `size N` then `NAME: points` lines.
    #[arg(long, conflicts_with = "tree")]
    chain: Option<PathBuf>,
    /// Tree file: `id parent|-` lines then `NAME: ids` lines.
    #[arg(long)]
    tree: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Canonical theory of a finite structure with its named sets.
    Theory {
        #[command(flatten)]
        source: Source,
        #[arg(short = 'n', long)]
        depth: usize,
    },
    /// Truth of a formula in a structure or an ordinal.
    Decide {
        #[arg(long)]
        formula: String,
        #[command(flatten)]
        source: Source,
        /// Ordinal below ω^ω, e.g. `w^2*3 + 1`.
        #[arg(long, conflicts_with_all = ["chain", "tree"])]
        ordinal: Option<String>,
    },
    /// Sum of theories, optionally with an ω-repeated tail.
    Compose {
        /// Theories in canonical text, or files holding them.
        theories: Vec<String>,
        /// The last PERIOD theories are repeated ω times.
        #[arg(long, default_value_t = 0)]
        period: usize,
    },
    /// Formally possible theories of a given depth and arity.
    Types {
        #[arg(short = 'n', long)]
        depth: usize,
        #[arg(short = 'l', long)]
        arity: usize,
        /// Print only the count.
        #[arg(long)]
        count: bool,
    },
    /// Ordinal arithmetic, partitions and decompositions.
    Ordinal {
        #[command(subcommand)]
        op: OrdinalOp,
    },
    /// Definable well order of a scattered chain term.
    WellorderChain {
        #[arg(long)]
        term: String,
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Sub-branch decomposition and well order of a finite tree.
    WellorderTree {
        #[arg(long)]
        tree: PathBuf,
    },
    /// Select one X for every Y with φ(X, Y).
    Uniformize {
        #[arg(long)]
        formula: String,
        #[command(flatten)]
        source: Source,
        /// `lex` or `product` on chains; trees always use the tree method.
        #[arg(long, default_value = "lex")]
        method: String,
        /// Block size for the product method.
        #[arg(long, default_value_t = 1)]
        block: usize,
    },
    /// Homogeneous set of an additive colouring.
    Ramsey {
        /// Semigroup table file.
        #[arg(long)]
        semigroup: PathBuf,
        /// Colours of consecutive pairs; the colour of `i < j` is their sum.
        #[arg(long, num_args = 1.., value_delimiter = ' ')]
        word: Vec<String>,
        #[arg(long, default_value_t = 3)]
        size: usize,
    },
    /// ω-power tower of a theory and where it stabilizes.
    Tower {
        #[arg(long)]
        theory: String,
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
}

#[derive(Subcommand)]
enum OrdinalOp {
    Add { a: String, b: String },
    Mul { a: String, b: String },
    Cmp { a: String, b: String },
    /// The ξ with a + ξ = b.
    Sub { a: String, b: String },
    Log { a: String },
    /// Order type of the concatenation described by a partition.
    Parttype {
        #[arg(long)]
        alpha: String,
        /// Classes separated by `;`, intervals written `[a, b)`.
        #[arg(long)]
        classes: String,
    },
    /// Search γ1, γ2 with γ2 + γ1 = b and γ1 + γ2 = a.
    Decompose {
        a: String,
        b: String,
        #[arg(long)]
        bound: Option<u64>,
    },
}

fn read(path: &PathBuf) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn load(source: &Source) -> Result<FiniteStructure, Error> {
    match (&source.chain, &source.tree) {
        (Some(p), _) => Ok(FiniteStructure::parse_chain(&read(p)?)?),
        (None, Some(p)) => {
            let (tree, sets) = FiniteTree::parse(&read(p)?)?;
            let mut s = tree.structure();
            for (name, m) in sets {
                s = s.with_set(name, m)?;
            }
            Ok(s)
        }
        (None, None) => Err(Error::Input("one of --chain or --tree is required".into())),
    }
}

fn ordinal(text: &str) -> Result<OrdinalCnf, Error> {
    Ok(text.parse()?)
}

fn theory_arg(text: &str) -> Result<mso_compose::Theory, Error> {
    let body = if std::path::Path::new(text).is_file() { read(&PathBuf::from(text))? } else { text.to_string() };
    Ok(parse_theory(&body)?)
}

/// Human-readable text and the JSON payload.
type Output = (String, Value);

fn plain(text: String) -> Output {
    let v = Value::String(text.clone());
    (text, v)
}

fn run(cli: &Cli) -> Result<Output, Error> {
    let budget = Budget::new(cli.budget);
    match &cli.command {
        Command::Theory { source, depth } => {
            let s = load(source)?;
            Ok(plain(serialize(&eval_named(&s, *depth, &budget)?)))
        }
        Command::Decide { formula, source, ordinal: alpha } => {
            let phi = parse(formula)?;
            let value = match alpha {
                Some(a) => {
                    let t = theory_of_ordinal(&ordinal(a)?, phi.dp(), &budget)?;
                    decide(&phi, &t)?
                }
                None => model_check(&load(source)?, &phi, &[], &budget)?,
            };
            Ok((value.to_string(), Value::Bool(value)))
        }
        Command::Compose { theories, period } => {
            let ts: Vec<_> = theories.iter().map(|t| theory_arg(t)).collect::<Result<_, _>>()?;
            let first = ts.first().ok_or_else(|| Error::Input("no theories given".into()))?;
            let (level, arity) = (first.level(), first.arity());
            let t = if *period == 0 {
                sum_finite(&TheorySequence::finite(level, arity, ts)?)?
            } else {
                let split = ts.len().checked_sub(*period).ok_or_else(|| Error::Input("period longer than the list".into()))?;
                let (pre, per) = ts.split_at(split);
                omega_sum(&TheorySequence::periodic(level, arity, pre.to_vec(), per.to_vec())?, &budget)?
            };
            Ok(plain(serialize(&t)))
        }
        Command::Types { depth, arity, count } => {
            let space = enumerate_types(*depth, *arity, &budget)?;
            if *count {
                return Ok((space.len().to_string(), json!(space.len())));
            }
            let lines: Vec<String> = space.members().iter().map(serialize).collect();
            Ok((lines.join("\n"), json!(lines)))
        }
        Command::Ordinal { op } => run_ordinal(op),
        Command::WellorderChain { term, samples, seed } => {
            let t: ChainTerm = term.parse()?;
            let cert = synthesize_wellorder(&t)?;
            let report = verify_wellorder(&cert, &t, *samples, *seed)?;
            let mut text = format!("degree: {}\nformula: {}\n", cert.degree, cert.formula);
            for p in &cert.params {
                text.push_str(&format!("param {p}\n"));
            }
            text.push_str(&format!("verify: {report}"));
            let v = json!({
                "degree": cert.degree,
                "formula": cert.formula.to_string(),
                "params": cert.params,
                "pairs": report.pairs,
                "passed": report.passed,
            });
            if !report.passed {
                return Err(Error::Input(text));
            }
            Ok((text, v))
        }
        Command::WellorderTree { tree } => {
            let (t, _) = FiniteTree::parse(&read(tree)?)?;
            let w = a2_wellorder(&t);
            w.verify().map_err(Error::Input)?;
            let order: Vec<&str> = w.order.iter().map(|&x| t.name(x)).collect();
            let v = json!({ "order": order, "sub_branches": w.gamma.len(), "colours": w.colours() });
            Ok((w.to_string().trim_end().to_string(), v))
        }
        Command::Uniformize { formula, source, method, block } => {
            let phi = parse(formula)?;
            let u = match (&source.tree, method.as_str()) {
                (Some(p), _) => {
                    let (t, sets) = FiniteTree::parse(&read(p)?)?;
                    tree_uniformize(&phi, &t, &sets, &budget)?
                }
                (None, "lex") => lex_uniformize(&phi, &load(source)?, &budget)?,
                (None, "product") => product_uniformize(&phi, &load(source)?, *block, &budget)?,
                (None, other) => return Err(Error::Input(format!("unknown method '{other}'"))),
            };
            let sel: Vec<Value> = u
                .selection
                .iter()
                .map(|(y, x)| json!({ "Y": mso_compose::uniformize::show_set(*y), "X": mso_compose::uniformize::show_set(*x) }))
                .collect();
            Ok((u.to_string().trim_end().to_string(), json!({ "level": u.level, "selection": sel })))
        }
        Command::Ramsey { semigroup, word, size } => {
            let table = SemigroupTable::parse(&read(semigroup)?)?;
            let steps: Vec<usize> = word
                .iter()
                .map(|w| table.index_of(w).ok_or_else(|| SemigroupError::Domain(format!("unknown element '{w}'"))))
                .collect::<Result<_, _>>()?;
            let c = AdditiveColoring::new(steps.len() + 1, table.clone(), |i, j| {
                steps[i + 1..j].iter().fold(steps[i], |acc, &s| table.add(acc, s))
            })?;
            match additive_ramsey(&c, *size) {
                Some(v) => {
                    let colour = if v.len() > 1 { table.name(c.colour(v[0], v[1])) } else { "-" };
                    let pts: Vec<String> = v.iter().map(usize::to_string).collect();
                    Ok((format!("{} colour {colour}", pts.join(" ")), json!({ "points": v, "colour": colour })))
                }
                None => Err(Error::Input(format!("no homogeneous set of size {size}"))),
            }
        }
        Command::Tower { theory, depth } => {
            let t = theory_arg(theory)?;
            let tower = omega_power_tower(&t, *depth, &budget)?;
            let stable = tower.stabilization.map_or("not within depth".to_string(), |p| format!("omega^{}", p + 1));
            let text = format!(
                "reachable theories: {}\nstabilizes at: {stable}\n{}",
                tower.reachable,
                tower.stable_value().map(serialize).unwrap_or_default()
            );
            let v = json!({
                "reachable": tower.reachable,
                "stabilization": tower.stabilization.map(|p| p + 1),
                "value": tower.stable_value().map(serialize),
            });
            Ok((text.trim_end().to_string(), v))
        }
    }
}

fn run_ordinal(op: &OrdinalOp) -> Result<Output, Error> {
    let value = match op {
        OrdinalOp::Add { a, b } => ord_add(&ordinal(a)?, &ordinal(b)?).to_string(),
        OrdinalOp::Mul { a, b } => ord_mul(&ordinal(a)?, &ordinal(b)?).to_string(),
        OrdinalOp::Cmp { a, b } => match ord_cmp(&ordinal(a)?, &ordinal(b)?) {
            std::cmp::Ordering::Less => "<".into(),
            std::cmp::Ordering::Equal => "=".into(),
            std::cmp::Ordering::Greater => ">".into(),
        },
        OrdinalOp::Sub { a, b } => ord_left_sub(&ordinal(a)?, &ordinal(b)?)?.to_string(),
        OrdinalOp::Log { a } => log_of(&ordinal(a)?)?.to_string(),
        OrdinalOp::Parttype { alpha, classes } => {
            let p = IntervalPartition::parse(ordinal(alpha)?, classes)?;
            partition_order_type(&p)?.to_string()
        }
        OrdinalOp::Decompose { a, b, bound } => {
            let (a, b) = (ordinal(a)?, ordinal(b)?);
            let bound = bound.unwrap_or_else(|| default_bound(&a, &b));
            match decomposition_search(&a, &b, bound) {
                Some((g1, g2)) => format!("{g1} ; {g2}"),
                None => return Err(Error::Input(format!("no decomposition within bound {bound}"))),
            }
        }
    };
    Ok(plain(value))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(&cli) {
        Ok((text, value)) => {
            if cli.json {
                println!("{}", json!({ "ok": true, "result": value }));
            } else {
                println!("{text}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            if cli.json {
                println!("{}", json!({ "ok": false, "error": e.to_string() }));
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(if e.is_budget() { 2 } else { 1 })
        }
    }
}
