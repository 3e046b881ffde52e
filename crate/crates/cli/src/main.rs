//! `lolli`: run programs on the reference interpreter or by proof search,
//! check and normalize proofs, and compare the two evaluators.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};

use lolli_core::encoding::{describe_event, mimicry_report, run_via_logic, LogicError};
use lolli_core::engine::{SearchConfig, DEFAULT_BUDGET};
use lolli_core::kernel::text::{parse_proof, print_proof};
use lolli_core::kernel::{check, ProofTree, Rule, System};
use lolli_core::lang::{eval_oracle, format_memory, parse_memory, parse_program, EvalError, Memory, Program};
use lolli_core::normalize::{normalize, NormalizeError, Stage};
use lolli_core::Signature;

const EXIT_OTHER: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_STUCK: u8 = 3;
const EXIT_BUDGET: u8 = 4;
const EXIT_VIOLATION: u8 = 5;

#[derive(Parser)]
#[command(name = "lolli", version, about = "Linear logic programming workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a program with the reference interpreter.
    Run {
        program: PathBuf,
        memory: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Print a JSON report instead of plain lines.
        #[arg(long)]
        json: bool,
        /// Include wall-clock time in the JSON report.
        #[arg(long)]
        timing: bool,
    },
    /// Evaluate a program by proof search on its encoding.
    Prove {
        program: PathBuf,
        memory: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Write the proof found, in kernel text format.
        #[arg(long, value_name = "PATH")]
        emit_proof: Option<PathBuf>,
        /// Write one backchaining event per line.
        #[arg(long, value_name = "PATH")]
        trace: Option<PathBuf>,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        timing: bool,
    },
    /// Check a proof file.
    Check {
        proof: PathBuf,
        #[arg(long, value_enum, default_value_t = SystemArg::Full)]
        system: SystemArg,
    },
    /// Normalize a full-calculus proof. The proof goes to stdout (or `-o`),
    /// the step trace to stderr.
    Normalize {
        proof: PathBuf,
        #[arg(long, value_enum)]
        to: StageArg,
        #[arg(short, long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// Run both evaluators and compare results and rule counts.
    Compare {
        program: PathBuf,
        memory: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SystemArg {
    Full,
    Reduced,
}

#[derive(Clone, Copy, ValueEnum)]
enum StageArg {
    Uniform,
    Simple,
    Coincided,
    Reduced,
}

impl From<StageArg> for Stage {
    fn from(s: StageArg) -> Stage {
        match s {
            StageArg::Uniform => Stage::Uniform,
            StageArg::Simple => Stage::Simple,
            StageArg::Coincided => Stage::Coincided,
            StageArg::Reduced => Stage::Reduced,
        }
    }
}

/// A failed command: exit code and message for stderr.
struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure { code, message: message.into() }
}

#[derive(Serialize)]
struct Digests {
    program: String,
    memory: String,
}

#[derive(Serialize, Default)]
struct Counts {
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_steps: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bc_nodes: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bc_steps: Option<u64>,
}

#[derive(Serialize)]
struct RunReport {
    mode: &'static str,
    sha256: Digests,
    outcome: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    memory: Option<Memory>,
    counts: Counts,
    #[serde(skip_serializing_if = "Option::is_none")]
    elapsed_ms: Option<f64>,
}

impl RunReport {
    fn new(mode: &'static str, inputs: &Inputs) -> RunReport {
        RunReport {
            mode,
            sha256: Digests { program: sha256(&inputs.program_src), memory: sha256(&inputs.memory_src) },
            outcome: "ok",
            value: None,
            memory: None,
            counts: Counts::default(),
            elapsed_ms: None,
        }
    }
}

struct Inputs {
    program_src: String,
    memory_src: String,
    program: Program,
    memory: Memory,
}

fn sha256(s: &str) -> String {
    hex::encode(Sha256::digest(s.as_bytes()))
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| fail(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn write(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| fail(EXIT_OTHER, format!("{}: {e}", path.display())))
}

fn load(program: &Path, memory: &Path) -> Result<Inputs, Failure> {
    let program_src = read(program)?;
    let memory_src = read(memory)?;
    let p = parse_program(&program_src).map_err(|e| fail(EXIT_PARSE, format!("{}:{e}", program.display())))?;
    let m = parse_memory(&memory_src).map_err(|e| fail(EXIT_PARSE, format!("{}:{e}", memory.display())))?;
    Ok(Inputs { program_src, memory_src, program: p, memory: m })
}

fn load_proof(path: &Path) -> Result<ProofTree, Failure> {
    let src = read(path)?;
    parse_proof(&src, &mut Signature::new()).map_err(|e| fail(EXIT_PARSE, format!("{}:{e}", path.display())))
}

fn bc_nodes(t: &ProofTree) -> u64 {
    let mut n = 0;
    t.visit(&mut |_, node| n += u64::from(matches!(node.rule, Rule::BCu | Rule::BCb)));
    n
}

fn eval_failure(e: &EvalError) -> (&'static str, u8) {
    match e {
        EvalError::Stuck { .. } => ("stuck", EXIT_STUCK),
        EvalError::BudgetExhausted { .. } => ("budget_exhausted", EXIT_BUDGET),
    }
}

fn logic_failure(e: &LogicError) -> (&'static str, u8) {
    match e {
        LogicError::Unprovable { .. } => ("unprovable", EXIT_STUCK),
        LogicError::BudgetExhausted { .. } => ("budget_exhausted", EXIT_BUDGET),
        _ => ("error", EXIT_OTHER),
    }
}

/// Print the report and turn a failed outcome into its exit code.
fn finish(report: RunReport, json: bool, error: Option<(u8, String)>) -> Result<(), Failure> {
    if json {
        let s = serde_json::to_string_pretty(&report).map_err(|e| fail(EXIT_OTHER, e.to_string()))?;
        println!("{s}");
    } else if let (Some(v), Some(m)) = (report.value, &report.memory) {
        print!("value {v}\n{}", format_memory(m));
    }
    match error {
        Some((code, message)) => Err(fail(code, message)),
        None => Ok(()),
    }
}

fn cmd_run(program: &Path, memory: &Path, budget: u64, json: bool, timing: bool) -> Result<(), Failure> {
    let inputs = load(program, memory)?;
    let mut report = RunReport::new("run", &inputs);
    let start = Instant::now();
    let result = eval_oracle(&inputs.program, &inputs.memory, budget);
    if timing {
        report.elapsed_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    let error = match result {
        Ok(ev) => {
            report.value = Some(ev.value);
            report.memory = Some(ev.memory);
            report.counts.oracle_steps = Some(ev.steps);
            None
        }
        Err(e) => {
            let (outcome, code) = eval_failure(&e);
            report.outcome = outcome;
            Some((code, e.to_string()))
        }
    };
    finish(report, json, error)
}

#[allow(clippy::too_many_arguments)]
fn cmd_prove(
    program: &Path,
    memory: &Path,
    budget: u64,
    emit_proof: Option<&Path>,
    trace: Option<&Path>,
    json: bool,
    timing: bool,
) -> Result<(), Failure> {
    let inputs = load(program, memory)?;
    let mut report = RunReport::new("prove", &inputs);
    let start = Instant::now();
    let result = run_via_logic(&inputs.program, &inputs.memory, &SearchConfig { budget });
    if timing {
        report.elapsed_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    let error = match result {
        Ok(run) => {
            if let Some(path) = emit_proof {
                write(path, &print_proof(&run.proof))?;
            }
            if let Some(path) = trace {
                let lines: String = run.trace.iter().map(|ev| describe_event(ev) + "\n").collect();
                write(path, &lines)?;
            }
            report.value = Some(run.value);
            report.counts.bc_nodes = Some(bc_nodes(&run.proof));
            report.counts.bc_steps = Some(run.steps);
            report.memory = Some(run.memory);
            None
        }
        Err(e) => {
            let (outcome, code) = logic_failure(&e);
            report.outcome = outcome;
            Some((code, e.to_string()))
        }
    };
    finish(report, json, error)
}

fn cmd_check(path: &Path, system: SystemArg) -> Result<(), Failure> {
    let proof = load_proof(path)?;
    let system = match system {
        SystemArg::Full => System::Full,
        SystemArg::Reduced => System::Reduced,
    };
    check(&proof, system).map_err(|v| fail(EXIT_VIOLATION, format!("violation: {v}")))?;
    println!("ok");
    Ok(())
}

fn cmd_normalize(path: &Path, to: StageArg, output: Option<&Path>) -> Result<(), Failure> {
    let proof = load_proof(path)?;
    let out = normalize(&proof, to.into()).map_err(|e| match e {
        NormalizeError::Invalid(v) => fail(EXIT_VIOLATION, format!("violation: {v}")),
        e => fail(EXIT_OTHER, e.to_string()),
    })?;
    for step in &out.trace {
        eprintln!("{step}");
    }
    let text = print_proof(&out.proof);
    match output {
        Some(path) => write(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_compare(program: &Path, memory: &Path, budget: u64) -> Result<(), Failure> {
    let inputs = load(program, memory)?;
    let oracle = eval_oracle(&inputs.program, &inputs.memory, budget);
    let logic = run_via_logic(&inputs.program, &inputs.memory, &SearchConfig { budget });
    match (oracle, logic) {
        (Ok(ev), Ok(run)) => {
            let table = mimicry_report(&ev.derivation, &run.proof);
            print!("{table}");
            let same_value = ev.value == run.value;
            let same_memory = ev.memory == run.memory;
            println!("value: oracle {} logic {}", ev.value, run.value);
            println!("memory: {}", if same_memory { "equal" } else { "different" });
            if same_value && same_memory && table.ok() {
                println!("agree");
                Ok(())
            } else {
                println!("disagree");
                Err(fail(EXIT_OTHER, "the evaluators disagree"))
            }
        }
        (Err(a), Err(b)) => {
            let (oa, _) = eval_failure(&a);
            let (ob, _) = logic_failure(&b);
            println!("oracle: {oa} ({a})");
            println!("logic: {ob} ({b})");
            let matched = matches!(
                (&a, &b),
                (EvalError::Stuck { .. }, LogicError::Unprovable { .. })
                    | (EvalError::BudgetExhausted { .. }, LogicError::BudgetExhausted { .. })
            );
            if matched {
                println!("agree-on-failure");
                Ok(())
            } else {
                println!("disagree");
                Err(fail(EXIT_OTHER, "the evaluators fail differently"))
            }
        }
        (Ok(ev), Err(b)) => {
            println!("oracle: value {}", ev.value);
            println!("logic: {b}");
            println!("disagree");
            Err(fail(EXIT_OTHER, "only the oracle succeeded"))
        }
        (Err(a), Ok(run)) => {
            println!("oracle: {a}");
            println!("logic: value {}", run.value);
            println!("disagree");
            Err(fail(EXIT_OTHER, "only proof search succeeded"))
        }
    }
}

fn real_main(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Run { program, memory, budget, json, timing } => cmd_run(&program, &memory, budget, json, timing),
        Command::Prove { program, memory, budget, emit_proof, trace, json, timing } => {
            cmd_prove(&program, &memory, budget, emit_proof.as_deref(), trace.as_deref(), json, timing)
        }
        Command::Check { proof, system } => cmd_check(&proof, system),
        Command::Normalize { proof, to, output } => cmd_normalize(&proof, to, output.as_deref()),
        Command::Compare { program, memory, budget } => cmd_compare(&program, &memory, budget),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    // Long loops give deep proofs; the kernel and printer recurse on them.
    let worker = std::thread::Builder::new().stack_size(256 << 20).spawn(move || real_main(cli));
    let result = match worker {
        Ok(handle) => handle.join().unwrap_or_else(|_| Err(fail(EXIT_OTHER, "internal error"))),
        Err(e) => Err(fail(EXIT_OTHER, e.to_string())),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("lolli: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
