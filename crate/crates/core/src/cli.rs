//! Command-line front end. Results go to stdout as JSON (CSV for `census`,
//! DOT for `export-dot`); one-line human summaries go to stderr. Exit codes:
//! 0 success, 2 invalid input, 3 a cap was hit, 4 internal invariant breach.

use crate::analysis::{
    analyze, analyze_machine, classify_growth, count_by_heights, decide, f_pure_hull_additive, growth_constants,
    orbit_closure, orbit_decompose, Analysis, OrbitDescription, Question,
};
use crate::automata::{census_csv, to_dot, Dfa};
use crate::error::{Error, Result};
use crate::mlengine::{build, BuildOptions, DEFAULT_SAFETY_FACTOR};
use crate::problem::{DigitSetSpec, Problem, ProblemSpec};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Debug, Parser)]
#[command(name = "frobml", version, about = "Frobenius automata for subvarieties of split groups over F_q(t)")]
pub struct Cli {
    /// Worker threads for machine construction and enumeration.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Overrides options.state_cap of the problem file.
    #[arg(long, global = true)]
    pub state_cap: Option<usize>,
    /// Overrides options.depth of the problem file.
    #[arg(long, global = true)]
    pub depth: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct SpecArg {
    /// Problem file (JSON).
    #[arg(long)]
    pub spec: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the machine and write machine.dot, machine.json, states.json and bounds.json.
    Build {
        #[command(flatten)]
        input: SpecArg,
        #[arg(long)]
        out: PathBuf,
    },
    /// Answer a decision question about X ∩ Γ.
    Decide {
        #[arg(value_enum)]
        question: DecideArg,
        #[command(flatten)]
        input: SpecArg,
        /// Reuse a machine.json written by `build` instead of rebuilding.
        #[arg(long)]
        machine: Option<PathBuf>,
    },
    /// Decompose X ∩ Γ into orbits and E-sets.
    Decompose {
        #[command(flatten)]
        input: SpecArg,
        /// Also rewrite each solved E-set as a sum of orbits.
        #[arg(long)]
        closure: bool,
    },
    /// Per-length counts of the representative language as CSV.
    Census {
        #[command(flatten)]
        input: SpecArg,
    },
    /// Number of points of X ∩ Γ with height at most H.
    Count {
        #[command(flatten)]
        input: SpecArg,
        #[arg(long = "height", required = true)]
        heights: Vec<u64>,
    },
    /// Sparse or non-sparse growth, with sampled counts.
    Classify {
        #[command(flatten)]
        input: SpecArg,
    },
    /// F-pure hull of a submodule of G_a.
    Hull {
        #[command(flatten)]
        input: SpecArg,
    },
    /// Graphviz rendering of one of the automata.
    ExportDot {
        #[command(flatten)]
        input: SpecArg,
        #[arg(long, value_enum, default_value_t = DotTarget::Machine)]
        which: DotTarget,
        /// Write to this directory instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DecideArg {
    #[value(alias = "empty")]
    Nonempty,
    Infinite,
    Coset,
}

impl From<DecideArg> for Question {
    fn from(d: DecideArg) -> Self {
        match d {
            DecideArg::Nonempty => Question::Nonempty,
            DecideArg::Infinite => Question::Infinite,
            DecideArg::Coset => Question::InfiniteCoset,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DotTarget {
    /// The machine automaton as built.
    Machine,
    /// L, minimized.
    Language,
    /// L′.
    Representatives,
}

/// The machine automaton together with the digit set it reads.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MachineFile {
    pub alphabet: usize,
    pub start: usize,
    pub accepting: Vec<bool>,
    pub delta: Vec<u32>,
    pub digits: DigitSetSpec,
}

impl MachineFile {
    pub fn new(dfa: &Dfa, digits: DigitSetSpec) -> Self {
        MachineFile {
            alphabet: dfa.alphabet(),
            start: dfa.start(),
            accepting: dfa.accepting().to_vec(),
            delta: dfa.transitions().to_vec(),
            digits,
        }
    }

    pub fn to_dfa(&self) -> Result<Dfa> {
        Dfa::new(self.alphabet, self.start, self.accepting.clone(), self.delta.clone())
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli, stdout, stderr) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

/// Output is buffered so that a dedicated thread pool can run the command.
pub fn execute(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let result = match cli.threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::validation(format!("--threads: {e}")))?;
            pool.install(|| dispatch(cli, &mut out, &mut err))
        }
        None => dispatch(cli, &mut out, &mut err),
    };
    stderr.write_all(&err)?;
    stdout.write_all(&out)?;
    result
}

fn load(cli: &Cli, input: &SpecArg) -> Result<(ProblemSpec, Problem)> {
    let (spec, base) = ProblemSpec::load(&input.spec)?;
    let mut problem = spec.resolve(&base)?;
    if let Some(cap) = cli.state_cap {
        problem.settings.state_cap = cap;
    }
    if let Some(depth) = cli.depth {
        problem.settings.depth = depth;
    }
    Ok((spec, problem))
}

fn pretty(value: &impl Serialize) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Internal(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

fn json_line(out: &mut dyn Write, value: &impl Serialize) -> Result<()> {
    out.write_all(pretty(value)?.as_bytes())?;
    Ok(())
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Ok(path)
}

fn letter_names(problem: &Problem) -> impl Fn(usize) -> String + '_ {
    move |i| problem.sigma.digit(i).to_string()
}

fn build_options(problem: &Problem) -> BuildOptions {
    BuildOptions { state_cap: problem.settings.state_cap, safety_factor: DEFAULT_SAFETY_FACTOR }
}

fn dispatch(cli: &Cli, stdout: &mut Vec<u8>, stderr: &mut Vec<u8>) -> Result<()> {
    match &cli.command {
        Command::Build { input, out } => {
            let (_, problem) = load(cli, input)?;
            let machine = build(&problem.variety, &problem.sigma, &build_options(&problem))?;
            std::fs::create_dir_all(out).map_err(|e| Error::Io(format!("{}: {e}", out.display())))?;
            let file = MachineFile::new(&machine.dfa, DigitSetSpec::from_digit_set(&problem.sigma));
            write_file(out, "machine.dot", &to_dot(&machine.dfa, letter_names(&problem)))?;
            write_file(out, "machine.json", &pretty(&file)?)?;
            write_file(out, "states.json", &pretty(&machine.state_table())?)?;
            write_file(out, "bounds.json", &pretty(&machine.report)?)?;
            let accepting = machine.dfa.accepting().iter().filter(|&&a| a).count();
            writeln!(stderr, "built {} states ({accepting} accepting) over {} digits", machine.dfa.state_count(), problem.sigma.len())?;
            json_line(
                stdout,
                &serde_json::json!({
                    "states": machine.dfa.state_count(),
                    "accepting": accepting,
                    "digits": problem.sigma.len(),
                    "files": ["machine.dot", "machine.json", "states.json", "bounds.json"],
                    "bounds": machine.report,
                }),
            )
        }
        Command::Decide { question, input, machine } => {
            let (_, problem) = load(cli, input)?;
            let a = match machine {
                Some(path) => analyze_machine(&problem, load_machine(path, &problem)?)?,
                None => analyze(&problem)?,
            };
            let verdict = decide(&a, (*question).into());
            writeln!(stderr, "{:?}: {}", verdict.question, verdict.answer)?;
            json_line(stdout, &verdict)
        }
        Command::Decompose { input, closure } => {
            let (_, problem) = load(cli, input)?;
            let a = analyze(&problem)?;
            let descriptions = orbit_decompose(&problem, &a)?;
            let closures: Vec<Option<OrbitDescription>> = if *closure {
                descriptions
                    .iter()
                    .map(|d| match d {
                        OrbitDescription::Eset { .. } => orbit_closure(&problem.shape, d).ok(),
                        _ => None,
                    })
                    .collect()
            } else {
                Vec::new()
            };
            writeln!(stderr, "{} component(s)", descriptions.len())?;
            if *closure {
                json_line(stdout, &serde_json::json!({ "descriptions": descriptions, "closures": closures }))
            } else {
                json_line(stdout, &serde_json::json!({ "descriptions": descriptions }))
            }
        }
        Command::Census { input } => {
            let (_, problem) = load(cli, input)?;
            let a = analyze(&problem)?;
            let table = a.representatives.census(problem.settings.depth);
            writeln!(stderr, "census of L′ to length {}", problem.settings.depth)?;
            write!(stdout, "{}", census_csv(&table))?;
            Ok(())
        }
        Command::Count { input, heights } => {
            let (_, problem) = load(cli, input)?;
            let a = analyze(&problem)?;
            let gc = growth_constants(&problem.sigma)?;
            let counts = count_by_heights(&problem, &a, &gc, heights)?;
            let rows: Vec<_> =
                heights.iter().zip(&counts).map(|(h, n)| serde_json::json!({ "height": h, "count": n })).collect();
            writeln!(stderr, "counted {} height bound(s)", heights.len())?;
            json_line(stdout, &serde_json::json!({ "constants": gc, "counts": rows }))
        }
        Command::Classify { input } => {
            let (_, problem) = load(cli, input)?;
            let a = analyze(&problem)?;
            let gc = growth_constants(&problem.sigma)?;
            let verdict = classify_growth(&problem, &a, &gc, problem.settings.depth)?;
            writeln!(stderr, "{:?}", verdict.classification)?;
            json_line(stdout, &verdict)
        }
        Command::Hull { input } => {
            let (spec, _) = ProblemSpec::load(&input.spec)?;
            let gens = spec.additive_generators()?;
            let hull = f_pure_hull_additive(&gens)?;
            writeln!(stderr, "hull after {} replacement(s)", hull.rounds)?;
            json_line(stdout, &hull)
        }
        Command::ExportDot { input, which, out } => {
            let (_, problem) = load(cli, input)?;
            let dot = match which {
                DotTarget::Machine => {
                    let machine = build(&problem.variety, &problem.sigma, &build_options(&problem))?;
                    to_dot(&machine.dfa, letter_names(&problem))
                }
                DotTarget::Language | DotTarget::Representatives => {
                    let a: Analysis = analyze(&problem)?;
                    let dfa = if *which == DotTarget::Language { &a.language } else { &a.representatives };
                    to_dot(dfa, letter_names(&problem))
                }
            };
            match out {
                Some(dir) => {
                    std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
                    let name = match which {
                        DotTarget::Machine => "machine.dot",
                        DotTarget::Language => "language.dot",
                        DotTarget::Representatives => "representatives.dot",
                    };
                    let path = write_file(dir, name, &dot)?;
                    writeln!(stderr, "wrote {}", path.display())?;
                }
                None => write!(stdout, "{dot}")?,
            }
            Ok(())
        }
    }
}

fn load_machine(path: &Path, problem: &Problem) -> Result<Dfa> {
    let src = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let file: MachineFile = serde_json::from_str(&src)?;
    if file.digits != DigitSetSpec::from_digit_set(&problem.sigma) {
        return Err(Error::validation("machine file was built for a different digit set"));
    }
    file.to_dfa()
}
