//! `wordeq`: solve, classify and normalize one-variable word equations, run
//! reduction traces and exhaustive campaigns, and search three-variable
//! systems.
//!
//! Exit codes: 0 on success, 1 on bad input, 2 when a check finds a
//! violation.

mod input;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;
use wordeq::campaign::{run_campaign, CampaignConfig, CampaignReport};
use wordeq::normalizer::normal_form_of;
use wordeq::reduction::{reduce_equation, ChainOutcome};
use wordeq::solver::{classify_with_bound, default_bound, oracle};
use wordeq::threevar::{search_independent_systems, SearchConfig};
use wordeq::{OneVarEquation, SolutionSet};

#[derive(Parser)]
#[command(name = "wordeq", version, about = "One-variable word equations with constants")]
struct Cli {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve every equation in FILE.
    Solve {
        file: PathBuf,
        /// Candidate lengths tried (default: total token length).
        #[arg(long)]
        max_len: Option<usize>,
        /// Cross-check against brute force over the equation's letters.
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value_t = 8)]
        oracle_len: usize,
    },
    /// Print the classified solution set of every equation in FILE.
    Classify { file: PathBuf },
    /// Rewrite every equation in FILE into normal form.
    Normalize { file: PathBuf },
    /// Run the reduction chain on every equation in FILE; always JSON.
    Reduce { file: PathBuf },
    /// Exhaustive campaign with the normal-form and lemma suites.
    CheckLemmas(CampaignArgs),
    /// Exhaustive campaign: classify and cross-check every equation.
    Exhaustive(CampaignArgs),
    /// Search independent systems of constant-free three-variable equations.
    #[command(name = "search-3var")]
    Search3var {
        #[arg(long, default_value_t = 8)]
        max_eq_len: usize,
        #[arg(long, default_value_t = 3)]
        max_size: usize,
        #[arg(long, default_value_t = 6)]
        image_len: usize,
        #[arg(long, default_value_t = 10)]
        examples: usize,
    },
}

#[derive(Args)]
struct CampaignArgs {
    #[arg(long, default_value_t = 2)]
    alphabet: usize,
    #[arg(long, default_value_t = 6)]
    max_const_len: usize,
    #[arg(long, default_value_t = 2)]
    occurrences: usize,
    #[arg(long, default_value_t = 8)]
    oracle_len: usize,
    /// Defaults to the number of available cores.
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 20)]
    examples: usize,
    /// Write the JSON report here as well.
    #[arg(long)]
    output: Option<PathBuf>,
}

impl CampaignArgs {
    fn config(&self, lemmas: bool) -> CampaignConfig {
        CampaignConfig {
            alphabet_size: self.alphabet,
            max_const_len: self.max_const_len,
            occurrences: self.occurrences,
            oracle_len: self.oracle_len,
            workers: self.workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())),
            seed: self.seed,
            lemmas,
            example_cap: self.examples,
        }
    }
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("reports serialize"));
}

/// One value per equation, unwrapped when the file holds a single equation.
fn print_json_list<T: Serialize>(items: Vec<T>) {
    match <[T; 1]>::try_from(items) {
        Ok([one]) => print_json(&one),
        Err(items) => print_json(&items),
    }
}

fn solve(file: &Path, max_len: Option<usize>, check: bool, oracle_len: usize, json: bool) -> Result<i32, Failure> {
    let f = input::read(file)?;
    let mut code = 0;
    let mut out = Vec::new();
    for e in &f.equations {
        let set = classify_with_bound(e, max_len.unwrap_or_else(|| default_bound(e)));
        if check {
            let mut letters: Vec<u8> = e.letters().into_iter().collect();
            if letters.is_empty() {
                letters.push(b'a');
            }
            if let Err(d) = oracle::check(e, &set, &letters, oracle_len) {
                code = 2;
                eprintln!("{e}: oracle disagrees on '{}' (oracle says solution: {})", d.word, d.oracle_says_solution);
            }
        }
        if json {
            out.push(set);
        } else {
            println!("{e}: {set}");
            if set.is_infinite() {
                let shown: Vec<String> = set.members_up_to(12).iter().map(ToString::to_string).collect();
                println!("  members up to length 12: {}", shown.join(", "));
            }
        }
    }
    if json {
        print_json_list(out);
    }
    Ok(code)
}

fn classify_file(file: &Path, json: bool) -> Result<i32, Failure> {
    let f = input::read(file)?;
    let sets: Vec<(&OneVarEquation, SolutionSet)> =
        f.equations.iter().map(|e| (e, classify_with_bound(e, default_bound(e)))).collect();
    if json {
        print_json_list(sets.into_iter().map(|(e, s)| json!({"equation": e.to_string(), "solutions": s})).collect());
    } else {
        for (e, s) in sets {
            println!("{e}: {s}");
        }
    }
    Ok(0)
}

fn normalize(file: &Path, json: bool) -> Result<i32, Failure> {
    let f = input::read(file)?;
    let mut out = Vec::new();
    for e in &f.equations {
        let nf = normal_form_of(e, &f.alphabet_for(e)).map_err(|err| Failure(format!("{e}: {err}")))?;
        if json {
            out.push(json!({"input": e.to_string(), "normal_form": nf, "checks": nf.report()}));
        } else {
            println!("{e}");
            println!("  normal form: {}", nf.base);
            println!("  witness: {}", nf.witness);
            println!("  values: {}", nf.alphabet);
            for s in &nf.rewrites {
                println!("  {:?} at {}: {} -> {}", s.rule, s.index, s.before, s.after);
            }
        }
    }
    if json {
        print_json_list(out);
    }
    Ok(0)
}

fn reduce(file: &Path) -> Result<i32, Failure> {
    let f = input::read(file)?;
    let mut out = Vec::new();
    let mut code = 0;
    for e in &f.equations {
        let outcome: ChainOutcome =
            reduce_equation(e, &f.alphabet_for(e)).map_err(|err| Failure(format!("{e}: {err}")))?;
        if outcome.is_violation() {
            code = 2;
        }
        out.push(json!({"equation": e.to_string(), "outcome": outcome}));
    }
    print_json_list(out);
    Ok(code)
}

fn campaign(args: &CampaignArgs, lemmas: bool, json: bool) -> Result<i32, Failure> {
    let config = args.config(lemmas);
    let start = Instant::now();
    let report = run_campaign(&config)?;
    eprintln!("elapsed: {:.2?} with {} workers", start.elapsed(), config.workers);
    if let Some(path) = &args.output {
        std::fs::write(path, serde_json::to_string_pretty(&report)?)?;
    }
    if json {
        print_json(&report);
    } else {
        print_campaign(&report);
    }
    Ok(report.exit_code())
}

fn print_campaign(r: &CampaignReport) {
    println!("{}", r.summary_line());
    println!("instances: {} ({} sides)", r.instances, r.sides);
    let finite: Vec<String> = r.classification.finite.iter().map(|(k, v)| format!("{k}:{v}")).collect();
    println!(
        "classified: all {}, infinite {}, finite by size {{{}}}",
        r.classification.all,
        r.classification.infinite,
        finite.join(", ")
    );
    println!("oracle: {} checked, {} disagreements", r.oracle.checked, r.oracle.disagreements);
    for ex in r.oracle.examples.iter().chain(&r.over_three_examples) {
        println!("  {}: {}", ex.equation, ex.detail);
    }
    if let Some(l) = &r.lemmas {
        println!("{:<32} {:>10} {:>10} {:>8}", "hypothesis", "instances", "holds", "violated");
        for (name, c) in &l.hypotheses {
            println!("{name:<32} {:>10} {:>10} {:>8}", c.instances, c.holds, c.violated);
        }
        for (name, n) in &l.observations {
            println!("observed {name}: {n}");
        }
        for w in &l.warnings {
            println!("warning: {w}");
        }
        for ex in &l.examples {
            println!("  {}: {}", ex.equation, ex.detail);
        }
    }
}

fn search(max_eq_len: usize, max_size: usize, image_len: usize, examples: usize, json: bool) -> Result<i32, Failure> {
    if max_eq_len < 2 || max_size == 0 {
        return Err(Failure("--max-eq-len must be at least 2 and --max-size positive".into()));
    }
    let config = SearchConfig { max_eq_len, max_size, image_len, example_cap: examples };
    let start = Instant::now();
    let r = search_independent_systems(&config).report;
    eprintln!("elapsed: {:.2?}", start.elapsed());
    if json {
        print_json(&r);
    } else {
        println!("largest independent system with a nonperiodic solution: {}", r.max_size);
        println!(
            "equations: {}, morphisms: {}, classes: {} ({} with a nonperiodic solution)",
            r.equations, r.morphisms, r.classes, r.nonperiodic_classes
        );
        for (size, n) in &r.independent_by_size {
            println!("size {size}: {n}");
        }
        println!("independent pairs with only periodic common solutions: {}", r.periodic_only_pairs);
        for ex in r.examples.iter().filter(|e| e.equations.len() > 1) {
            let eqs: Vec<String> = ex.equations.iter().map(ToString::to_string).collect();
            let ws: Vec<String> = ex.witnesses.iter().map(ToString::to_string).collect();
            println!("  {{{}}} solution {} witnesses {}", eqs.join("; "), ex.nonperiodic_solution, ws.join(" "));
        }
    }
    if r.exit_code() != 0 {
        eprintln!("found an independent system of size {} with a nonperiodic solution", r.max_size);
    }
    Ok(r.exit_code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return ExitCode::from(if err.use_stderr() { 1 } else { 0 });
        }
    };
    let json = cli.json;
    let result = match &cli.command {
        Command::Solve { file, max_len, oracle, oracle_len } => solve(file, *max_len, *oracle, *oracle_len, json),
        Command::Classify { file } => classify_file(file, json),
        Command::Normalize { file } => normalize(file, json),
        Command::Reduce { file } => reduce(file),
        Command::CheckLemmas(args) => campaign(args, true, json),
        Command::Exhaustive(args) => campaign(args, false, json),
        Command::Search3var { max_eq_len, max_size, image_len, examples } => {
            search(*max_eq_len, *max_size, *image_len, *examples, json)
        }
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
