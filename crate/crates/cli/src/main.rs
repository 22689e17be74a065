use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use pcsp_core::minionlab::{tiebreak, MinionElement};
use pcsp_core::polymorph::{
    example_polymorphism, first_h_asymmetry, polymorphism_violation, FiniteFunction, Operation, TieMatrix,
    DEFAULT_BUDGET,
};
use pcsp_core::propagation::{cblp_run, clap_run, sblp_run, SweepMode, TraceEvent, Verdict};
use pcsp_core::relaxations::Skeleton;
use pcsp_core::reproduce::{run_criterion, CRITERIA, DEFAULT_SEED};
use pcsp_core::structures::{find_homomorphism, parse_instance, parse_template, RelationalStructure};

#[derive(Parser)]
#[command(name = "pcsp", version, about = "Exact solvers and polymorphism tools for promise CSPs")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Worker threads; above 1 the propagation sweeps run in Jacobi mode.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Seed for randomized sweeps.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Refuse tables or relation powers with more entries than this.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Decide an instance against a template; prints ACCEPT or REJECT.
    Check {
        #[arg(long, value_enum, default_value_t = Algorithm::Clap)]
        algorithm: Algorithm,
        /// Write the propagation trace here (cblp and clap).
        #[arg(long)]
        trace: Option<PathBuf>,
        template: PathBuf,
        instance: PathBuf,
    },
    #[command(subcommand)]
    Poly(PolyCommand),
    #[command(subcommand)]
    Minion(MinionCommand),
    /// Run the acceptance suite and print one line per criterion.
    Reproduce,
}

#[derive(Subcommand)]
enum PolyCommand {
    /// Is the function a polymorphism from A to B?
    Check { template: PathBuf, function: PathBuf },
    /// Is the function H-symmetric?
    Hsym { function: PathBuf, tie_matrix: PathBuf },
    /// Print the example polymorphism of the given arity as a function file.
    GenExample {
        #[arg(long)]
        arity: usize,
    },
}

#[derive(Subcommand)]
enum MinionCommand {
    /// Tie-breaking vector for the matrices of the given elements.
    Tiebreak { elements: PathBuf, tie_matrix: PathBuf },
    /// Minor of an element along a map such as `0,0,1`.
    Minor {
        element: PathBuf,
        #[arg(long, value_delimiter = ',')]
        map: Vec<usize>,
        #[arg(long)]
        target: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algorithm {
    /// Search for a homomorphism into B.
    Brute,
    Blp,
    Aip,
    BlpAip,
    Sblp,
    Cblp,
    Clap,
}

impl Algorithm {
    fn name(self) -> &'static str {
        match self {
            Algorithm::Brute => "brute",
            Algorithm::Blp => "blp",
            Algorithm::Aip => "aip",
            Algorithm::BlpAip => "blp-aip",
            Algorithm::Sblp => "sblp",
            Algorithm::Cblp => "cblp",
            Algorithm::Clap => "clap",
        }
    }
}

struct RunReport {
    algorithm: Algorithm,
    verdict: Verdict,
    blp_calls: usize,
    aip_calls: usize,
    millis: u128,
    trace: Option<PathBuf>,
}

impl RunReport {
    fn line(&self) -> String {
        let mut s = format!(
            "{} algorithm={} blp_calls={} aip_calls={} time={}ms",
            self.verdict,
            self.algorithm.name(),
            self.blp_calls,
            self.aip_calls,
            self.millis
        );
        if let Some(p) = &self.trace {
            s.push_str(&format!(" trace={}", p.display()));
        }
        s
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_template(path: &Path) -> Result<(RelationalStructure, RelationalStructure)> {
    parse_template(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn load_function(path: &Path) -> Result<FiniteFunction> {
    FiniteFunction::parse(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn load_tie_matrix(path: &Path) -> Result<TieMatrix> {
    TieMatrix::parse(&read(path)?).with_context(|| format!("in {}", path.display()))
}

/// Splits a file into `mel` blocks and parses each.
fn load_elements(path: &Path) -> Result<Vec<MinionElement>> {
    let text = read(path)?;
    let mut blocks: Vec<String> = Vec::new();
    for line in text.lines() {
        if line.split_whitespace().next() == Some("mel") || blocks.is_empty() {
            blocks.push(String::new());
        }
        let last = blocks.last_mut().expect("pushed above");
        last.push_str(line);
        last.push('\n');
    }
    let blocks: Vec<String> = blocks
        .into_iter()
        .filter(|b| b.lines().any(|l| !l.split('#').next().unwrap_or("").trim().is_empty()))
        .collect();
    if blocks.is_empty() {
        bail!("{} holds no elements", path.display());
    }
    blocks
        .iter()
        .enumerate()
        .map(|(i, b)| MinionElement::parse(b).with_context(|| format!("element {} of {}", i + 1, path.display())))
        .collect()
}

fn check(
    algorithm: Algorithm,
    trace: Option<PathBuf>,
    template: &Path,
    instance: &Path,
    mode: &SweepMode,
) -> Result<RunReport> {
    let (a, b) = load_template(template)?;
    let x = parse_instance(&read(instance)?).with_context(|| format!("in {}", instance.display()))?;
    let x = x.align_to(a.signature()).with_context(|| format!("{} does not fit the template", instance.display()))?;
    if trace.is_some() && !matches!(algorithm, Algorithm::Cblp | Algorithm::Clap) {
        bail!("--trace is only produced by cblp and clap");
    }
    let start = Instant::now();
    if algorithm == Algorithm::Brute {
        let found = find_homomorphism(&x, &b)?.is_some();
        return Ok(RunReport {
            algorithm,
            verdict: found.into(),
            blp_calls: 0,
            aip_calls: 0,
            millis: start.elapsed().as_millis(),
            trace: None,
        });
    }
    let sk = Skeleton::new(&x, &a)?;
    let mut events: Vec<TraceEvent> = Vec::new();
    let accepted = match algorithm {
        Algorithm::Brute => unreachable!("handled above"),
        Algorithm::Blp => sk.blp_feasible(&[])?,
        Algorithm::Aip => sk.aip_solution(&[]).is_some(),
        Algorithm::BlpAip => sk.blp_aip(&[])?,
        Algorithm::Sblp => sk.x().domain_size() == 0 || sblp_run(&sk)?,
        Algorithm::Cblp => {
            let (smap, t) = cblp_run(&sk, mode)?;
            events = t;
            !smap.any_empty()
        }
        Algorithm::Clap => {
            let d = clap_run(&sk, mode)?;
            let accepted = d.accepted();
            events = d.trace;
            accepted
        }
    };
    let millis = start.elapsed().as_millis();
    if let Some(path) = &trace {
        let sig = sk.x().signature();
        let text: String = events.iter().map(|e| e.render(|s| sig.name(s).to_string()) + "\n").collect();
        fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(RunReport {
        algorithm,
        verdict: accepted.into(),
        blp_calls: sk.counters().blp_calls(),
        aip_calls: sk.counters().aip_calls(),
        millis,
        trace,
    })
}

fn run(cli: Cli) -> Result<ExitCode> {
    let g = cli.global;
    let mut mode = SweepMode::Sequential;
    if let Some(k) = g.jobs {
        if k == 0 {
            bail!("--jobs must be positive");
        }
        rayon::ThreadPoolBuilder::new().num_threads(k).build_global()?;
        if k > 1 {
            mode = SweepMode::Jacobi;
        }
    }
    let code = |ok: bool| if ok { ExitCode::SUCCESS } else { ExitCode::from(1) };
    match cli.command {
        Command::Check { algorithm, trace, template, instance } => {
            let report = check(algorithm, trace, &template, &instance, &mode)?;
            println!("{}", report.line());
            Ok(code(report.verdict == Verdict::Accept))
        }
        Command::Poly(PolyCommand::Check { template, function }) => {
            let (a, b) = load_template(&template)?;
            let f = load_function(&function)?;
            let violation = polymorphism_violation(&f, &a, &b, g.budget)?;
            match &violation {
                None => println!("YES"),
                Some((s, rows)) => println!("NO symbol={} rows={rows:?}", a.signature().name(*s)),
            }
            Ok(code(violation.is_none()))
        }
        Command::Poly(PolyCommand::Hsym { function, tie_matrix }) => {
            let f = load_function(&function)?;
            let h = load_tie_matrix(&tie_matrix)?;
            if h.num_cols() != f.domain_size() {
                bail!("tie matrix has {} columns, function domain has {} elements", h.num_cols(), f.domain_size());
            }
            let witness = first_h_asymmetry(&f, &h);
            match &witness {
                None => println!("YES"),
                Some(t) => println!("NO input={t:?}"),
            }
            Ok(code(witness.is_none()))
        }
        Command::Poly(PolyCommand::GenExample { arity }) => {
            print!("{}", example_polymorphism(arity, g.budget)?.serialize());
            Ok(ExitCode::SUCCESS)
        }
        Command::Minion(MinionCommand::Tiebreak { elements, tie_matrix }) => {
            let els = load_elements(&elements)?;
            let h = load_tie_matrix(&tie_matrix)?;
            let ms: Vec<_> = els.into_iter().map(|e| e.m).collect();
            let r = tiebreak(&ms, &h)?;
            let v: Vec<String> = r.v.iter().map(ToString::to_string).collect();
            println!("v {}", v.join(" "));
            println!("iterations {} initial_ties {}", r.iterations, r.initial_ties);
            Ok(ExitCode::SUCCESS)
        }
        Command::Minion(MinionCommand::Minor { element, map, target }) => {
            let els = load_elements(&element)?;
            let [el] = els.as_slice() else { bail!("{} must hold exactly one element", element.display()) };
            print!("{}", el.minor(&map, target)?.serialize());
            Ok(ExitCode::SUCCESS)
        }
        Command::Reproduce => {
            let mut all = true;
            for id in 1..=CRITERIA.len() {
                let r = run_criterion(id, g.seed);
                println!("{r}");
                all &= r.passed;
            }
            Ok(code(all))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
