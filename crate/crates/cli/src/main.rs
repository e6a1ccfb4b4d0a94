use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use kgraph::algebra::{self, Element};
use kgraph::constructions::{self, EdgePairing, MonoidMap};
use kgraph::dynamics::{self, Bounds};
use kgraph::expr::parse_expression;
use kgraph::format::{emit_kgraph, parse_action, parse_cocycle, parse_kgraph, KGraphFile};
use kgraph::iso::{isomorphism_search, SearchOutcome, DEFAULT_BUDGET};
use kgraph::{Degree, Error, KGraph};

#[derive(Parser)]
#[command(name = "kgtool", version, about = "Build, check and analyze higher-rank graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a graph file and check unique factorization up to a degree.
    Check {
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        bound: u32,
    },
    /// Count the morphisms of a given degree with range a given vertex.
    Count {
        file: PathBuf,
        #[arg(long)]
        vertex: String,
        #[arg(long)]
        degree: String,
    },
    /// Print the vertex matrix of a degree.
    Matrix {
        file: PathBuf,
        #[arg(long)]
        degree: String,
    },
    /// Aperiodicity, cofinality, simplicity and pure infiniteness verdicts.
    Analyze {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        period_bound: u32,
        #[arg(long, default_value_t = 6)]
        horizon: u32,
    },
    /// The Bratteli diagram of the AF core.
    Bratteli {
        file: PathBuf,
        #[arg(long, default_value_t = 4)]
        levels: u32,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Build a new graph file from existing ones.
    Construct {
        #[command(subcommand)]
        kind: Construction,
        /// Write here instead of standard output.
        #[arg(long, short, global = true)]
        output: Option<PathBuf>,
    },
    /// Evaluate an expression in the algebra and print it in canonical form.
    Algebra {
        file: PathBuf,
        #[arg(long)]
        eval: String,
    },
    /// Search for an isomorphism between two graphs.
    Iso {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        max_degree: String,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Check the truncated path-space representation against the symbolic algebra.
    RepCheck {
        file: PathBuf,
        #[arg(long)]
        depth: String,
    },
}

#[derive(Subcommand)]
enum Construction {
    Product { a: PathBuf, b: PathBuf },
    /// Pull back along `--map "k x l: a11,a12;a21,a22"`.
    Pullback {
        file: PathBuf,
        #[arg(long)]
        map: String,
    },
    Coordinate {
        file: PathBuf,
        /// 1-based color.
        #[arg(long)]
        color: usize,
    },
    Skew {
        file: PathBuf,
        #[arg(long)]
        cocycle: PathBuf,
    },
    Quotient {
        file: PathBuf,
        #[arg(long)]
        action: PathBuf,
    },
    /// `A ∗_θ B`; θ is `flip`, `identity`, or a file of `theta a b = b' a'` lines.
    Assemble {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value = "flip")]
        theta: String,
    },
}

enum Failure {
    /// A verdict the command asserts came out negative.
    Verdict(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

fn read(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> std::result::Result<KGraph, Failure> {
    parse_kgraph(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn degree(g: &KGraph, text: &str) -> std::result::Result<Degree, Failure> {
    let d = Degree::parse(text).ok_or_else(|| Failure::Usage(format!("bad degree {text}")))?;
    if d.rank() == 1 && g.rank() > 1 {
        return Ok(Degree::diagonal(g.rank(), d.get(0)));
    }
    if d.rank() != g.rank() {
        return Err(Failure::Usage(format!("degree {text} does not have rank {}", g.rank())));
    }
    Ok(d)
}

fn window_note(g: &KGraph) {
    if g.is_windowed() {
        println!("note: interior-only, the graph is a finite window");
    }
}

fn check(file: &Path, bound: u32) -> Outcome {
    let parsed = KGraphFile::parse(&read(file)?)?;
    let g = parsed
        .validate()
        .map_err(|e| Failure::Verdict(format!("validation: FAILS {e}")))?;
    println!(
        "validation: HOLDS rank {}, {} vertices, {} edges, {} squares",
        g.rank(),
        g.vertex_count(),
        g.skeleton().edge_count(),
        g.squares().len()
    );
    window_note(&g);
    if g.is_windowed() {
        return Ok(());
    }
    let top = Degree::diagonal(g.rank(), bound);
    let mut splits = 0;
    for n in top.box_below() {
        for lambda in g.morphisms_of_degree(&n)? {
            for m in n.box_below() {
                let rest = n.checked_sub(&m).expect("m ≤ n");
                let (mu, nu) = g.factor(&lambda, &m, &rest)?;
                if g.compose(&mu, &nu)? != lambda {
                    return Err(Failure::Verdict(format!(
                        "factorization: FAILS {} at {m} + {rest}",
                        g.word_string(&lambda)
                    )));
                }
                splits += 1;
            }
        }
    }
    println!("factorization: HOLDS {splits} splits recomposed, degrees ≤ {top}");
    let mut pairs = 0;
    for m in top.box_below() {
        for n in top.box_below() {
            if g.vertex_matrix(&(&m + &n))? != g.vertex_matrix(&m)?.mul(&g.vertex_matrix(&n)?) {
                return Err(Failure::Verdict(format!("vertex matrices: FAILS M^({m}+{n}) ≠ M^{m} M^{n}")));
            }
            pairs += 1;
        }
    }
    println!("vertex matrices: HOLDS M^(m+n) = M^m M^n for {pairs} pairs");
    Ok(())
}

fn analyze(file: &Path, bounds: Bounds) -> Outcome {
    let g = load(file)?;
    window_note(&g);
    let a = dynamics::aperiodicity(&g, bounds.period_bound, bounds.horizon)?;
    let c = dynamics::cofinality_check(&g)?;
    let s = dynamics::simplicity_verdict(&g, bounds)?;
    let p = dynamics::pure_infiniteness_hypothesis(&g)?;
    print!("aperiodicity: {}", a.render(&g));
    print!("cofinality: {}", c.render(&g));
    print!("simplicity: {}", s.render(&g));
    if s.status == dynamics::Status::Unknown {
        println!("  the aperiodicity hypothesis is not established, so the criterion does not apply");
    }
    print!("pure infiniteness hypothesis: {}", p.render(&g));
    Ok(())
}

fn write_output(text: &str, output: Option<&Path>) -> Outcome {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn theta_pairing(a: &KGraph, b: &KGraph, spec: &str) -> std::result::Result<EdgePairing, Failure> {
    match spec {
        "flip" => Ok(EdgePairing::flip(a)),
        "identity" | "iota" => Ok(EdgePairing::identity(a)),
        path => {
            let text = read(Path::new(path))?;
            let mut theta = EdgePairing::new();
            for (i, line) in text.lines().enumerate() {
                let line = line.split('#').next().unwrap_or("");
                let t: Vec<&str> = line.split_whitespace().collect();
                if t.is_empty() {
                    continue;
                }
                let ["theta", x, y, "=", y2, x2] = t[..] else {
                    return Err(Failure::Usage(format!("{path}:{}: expected `theta a b = b' a'`", i + 1)));
                };
                let edge = |g: &KGraph, name: &str| {
                    g.edge_by_name(name)
                        .ok_or_else(|| Failure::Usage(format!("{path}:{}: unknown edge {name}", i + 1)))
                };
                theta.insert(edge(a, x)?, edge(b, y)?, edge(b, y2)?, edge(a, x2)?);
            }
            Ok(theta)
        }
    }
}

fn construct(kind: Construction, output: Option<&Path>) -> Outcome {
    let g = match kind {
        Construction::Product { a, b } => constructions::product(&load(&a)?, &load(&b)?)?,
        Construction::Pullback { file, map } => {
            let f = MonoidMap::parse(&map)?;
            constructions::pullback(&f, &load(&file)?)?.graph
        }
        Construction::Coordinate { file, color } => {
            let base = load(&file)?;
            if color == 0 || color > base.rank() {
                return Err(Failure::Usage(format!("color {color} is not in 1..={}", base.rank())));
            }
            constructions::coordinate(&base, color - 1)?.graph
        }
        Construction::Skew { file, cocycle } => {
            let base = load(&file)?;
            let c = parse_cocycle(&base, &read(&cocycle)?)?;
            constructions::skew_product(&c, &base)?.graph
        }
        Construction::Quotient { file, action } => {
            let base = load(&file)?;
            let act = parse_action(&base, &read(&action)?)?;
            constructions::quotient(&base, &act)?.graph
        }
        Construction::Assemble { a, b, theta } => {
            let (a, b) = (load(&a)?, load(&b)?);
            let pairing = theta_pairing(&a, &b, &theta)?;
            constructions::assemble_2graph(&a, &b, &pairing)?
        }
    };
    let text = emit_kgraph(&g).map_err(|e| {
        Failure::Usage(format!("{e}; the result has rank {} and cannot be written as a square presentation", g.rank()))
    })?;
    write_output(&text, output)
}

fn iso(a: &Path, b: &Path, max_degree: &str, budget: u64) -> Outcome {
    let (ga, gb) = (load(a)?, load(b)?);
    let d = degree(&ga, max_degree)?;
    match isomorphism_search(&ga, &gb, &d, budget)? {
        SearchOutcome::Found(i) => {
            println!("isomorphism (verified on degrees ≤ {d}):");
            print!("{}", i.display(&ga, &gb));
        }
        SearchOutcome::NoneExists { explored } => {
            println!("NONE: no isomorphism exists ({explored} search nodes exhausted)");
        }
    }
    Ok(())
}

fn rep_check(file: &Path, depth: &str) -> Outcome {
    let g = load(file)?;
    let depth = degree(&g, depth)?;
    let rep = algebra::InteriorRep::new(&g, &depth)?;
    let report = rep.check_relations(&depth)?;
    print!("{}", report.render());
    let unit_degrees: Vec<Degree> = std::iter::once(Degree::zero(g.rank()))
        .chain((0..g.rank()).map(|c| Degree::unit(g.rank(), c)))
        .collect();
    let mut generators = Vec::new();
    for d in &unit_degrees {
        for m in g.morphisms_of_degree(d)? {
            generators.push(Element::s(&g, &m));
            generators.push(Element::s_star(&g, &m));
        }
    }
    let (mut pairs, mut columns) = (0, 0);
    for x in &generators {
        for y in &generators {
            match rep.check_product(x, y)? {
                Ok(n) => columns += n,
                Err(v) => {
                    return Err(Failure::Verdict(format!(
                        "FAIL products: ({x}) · ({y}) differs at e_{}",
                        g.display_morphism(&v)
                    )))
                }
            }
            pairs += 1;
        }
    }
    println!("pass products: {pairs} generator products agree on {columns} interior columns");
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Verdict("relation check failed".into()))
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Check { file, bound } => check(&file, bound),
        Command::Count { file, vertex, degree: d } => {
            let g = load(&file)?;
            let v = g.vertex(&vertex)?;
            let n = degree(&g, &d)?;
            println!("{}", g.count(v, &n)?);
            Ok(())
        }
        Command::Matrix { file, degree: d } => {
            let g = load(&file)?;
            let n = degree(&g, &d)?;
            print!("{}", g.vertex_matrix(&n)?);
            Ok(())
        }
        Command::Analyze {
            file,
            period_bound,
            horizon,
        } => analyze(&file, Bounds { period_bound, horizon }),
        Command::Bratteli { file, levels, dot } => {
            let g = load(&file)?;
            let d = algebra::bratteli(&g, levels)?;
            print!("{}", d.render());
            if !d.check_recursion() {
                return Err(Failure::Verdict("Bratteli recursion FAILS".into()));
            }
            println!("recursion N(l+1) = N(l) M^p: HOLDS for {} levels", d.levels());
            if let Some(path) = dot {
                write_output(&d.to_dot(), Some(&path))?;
            }
            Ok(())
        }
        Command::Construct { kind, output } => construct(kind, output.as_deref()),
        Command::Algebra { file, eval } => {
            let g = load(&file)?;
            let x = parse_expression(&g, &eval)?;
            println!("{}", x.canonical()?);
            Ok(())
        }
        Command::Iso {
            a,
            b,
            max_degree,
            budget,
        } => iso(&a, &b, &max_degree, budget),
        Command::RepCheck { file, depth } => rep_check(&file, &depth),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verdict(msg)) => {
            println!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
