//! `tradenet`: batch decisions on trading networks.
//!
//! Exit codes: 0 yes / stable / found, 3 no / unstable / none, 4 unknown
//! because the search budget ran out, 2 usage or input error, 1 internal
//! failure (for example a choice function that is not fully substitutable
//! breaking deferred acceptance).

mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tradenet_core::choice::audit::{audit_full_substitutability, audit_irc, AuditError, DEFAULT_AUDIT_CAP};
use tradenet_core::dot::export_dot;
use tradenet_core::generate::random_flow_network;
use tradenet_core::io::{load_network, load_outcome, read_json, save_network, save_outcome, to_json, write_json};
use tradenet_core::reduce::{
    oracle_lower_bound_experiment, reduce_acyclic_bipartition, reduce_partition_to_instability, Digraph, DigraphDocument, PartitionInstance,
};
use tradenet_core::solve::{check, deferred_acceptance, exists_outcome, Budget, Concept, Verdict, BUDGET_ENV};
use tradenet_core::{IoError, ReduceError, SolveError, TradingNetwork};

use report::{describe_violation, BudgetInfo, Counters, RunReport, RunVerdict, Witness};

#[derive(Parser, Debug)]
#[command(name = "tradenet", version, about = "Stability concepts for trading networks with bilateral contracts")]
struct Cli {
    /// Cap exponential searches at 2^BITS examined nodes.
    #[arg(long, global = true, env = BUDGET_ENV, default_value_t = Budget::DEFAULT_BITS)]
    budget_bits: u32,
    /// Print a machine-readable JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute a trail-stable outcome by deferred acceptance.
    Solve {
        network: PathBuf,
        /// Also write the outcome document here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check an outcome against a stability concept.
    Check {
        #[arg(long, value_enum)]
        concept: ConceptArg,
        network: PathBuf,
        outcome: PathBuf,
    },
    /// Decide whether some outcome satisfies a stability concept.
    Exists {
        #[arg(long, value_enum)]
        concept: ConceptArg,
        network: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a hardness instance.
    #[command(subcommand)]
    Reduce(Reduce),
    /// Audit choice functions exhaustively.
    Audit {
        #[arg(long, value_enum)]
        property: Property,
        network: PathBuf,
        /// Audit only this firm.
        #[arg(long)]
        firm: Option<String>,
        /// Largest contract set to enumerate.
        #[arg(long, default_value_t = DEFAULT_AUDIT_CAP)]
        cap: usize,
    },
    /// Run an experiment.
    #[command(subcommand)]
    Experiment(Experiment),
    /// Generate random instances.
    #[command(subcommand)]
    Gen(Gen),
    /// Render a network as Graphviz DOT.
    ExportDot {
        network: PathBuf,
        /// Draw these contracts solid.
        #[arg(long)]
        outcome: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum Reduce {
    /// Digraph JSON to a flow network whose path-or-cycle-stable outcomes
    /// encode acyclic bipartitions.
    AcyclicBipartition {
        digraph: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Write the vertex/arc correspondence here.
        #[arg(long)]
        map: Option<PathBuf>,
    },
    /// Partition weights to a two-firm network where the empty outcome is
    /// unstable exactly when the weights split evenly.
    Partition {
        #[arg(long, value_delimiter = ',', required = true)]
        weights: Vec<u64>,
        #[arg(long)]
        out: PathBuf,
        /// Write the challenged (empty) outcome here.
        #[arg(long)]
        outcome: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum Experiment {
    /// Oracle queries needed to verify stability.
    OracleCalls {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Subcommand, Debug)]
enum Gen {
    /// A random flow network.
    Flow(GenFlow),
}

#[derive(Args, Debug)]
struct GenFlow {
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    firms: usize,
    #[arg(long)]
    density: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ConceptArg {
    Trail,
    WeakTrail,
    Pc,
    Stable,
}

impl From<ConceptArg> for Concept {
    fn from(c: ConceptArg) -> Self {
        match c {
            ConceptArg::Trail => Concept::Trail,
            ConceptArg::WeakTrail => Concept::WeakTrail,
            ConceptArg::Pc => Concept::PathOrCycle,
            ConceptArg::Stable => Concept::Stable,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Property {
    Irc,
    FullSub,
}

/// A failure that ends the run without a verdict.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl ToString) -> Self {
        Failure {
            code: 2,
            message: message.to_string(),
        }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure::input(e)
    }
}

impl From<ReduceError> for Failure {
    fn from(e: ReduceError) -> Self {
        match e {
            ReduceError::Solve(s) => s.into(),
            other => Failure::input(other),
        }
    }
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::Model(m) => Failure::input(m),
            other => Failure {
                code: 1,
                message: other.to_string(),
            },
        }
    }
}

/// What a command produced: a report, or an artifact for stdout.
enum Output {
    Report(Box<RunReport>),
    Text(String),
}

struct Ctx {
    argv: Vec<String>,
    budget: Budget,
    started: Instant,
}

impl Ctx {
    fn report(&self, verdict: RunVerdict, net: Option<&TradingNetwork>) -> RunReport {
        RunReport {
            command: self.argv.clone(),
            concept: None,
            verdict,
            witness: None,
            counters: net.map(Counters::from_network).unwrap_or_default(),
            budget: BudgetInfo::new(self.budget),
            wall_time_ms: self.started.elapsed().as_secs_f64() * 1e3,
            details: None,
        }
    }

    /// Turns an exhausted budget into an unknown verdict; other errors pass.
    fn or_unknown<T>(&self, result: Result<T, SolveError>, net: &TradingNetwork, concept: Option<Concept>) -> Result<Result<T, RunReport>, Failure> {
        match result {
            Ok(v) => Ok(Ok(v)),
            Err(SolveError::BudgetExceeded { examined }) => {
                let mut report = self.report(RunVerdict::UnknownBudget, Some(net));
                report.concept = concept.map(|c| c.to_string());
                report.budget.examined = Some(examined);
                Ok(Err(report))
            }
            Err(e) => Err(e.into()),
        }
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let ctx = Ctx {
        argv,
        budget: Budget::bits(cli.budget_bits),
        started: Instant::now(),
    };
    match run(&ctx, cli.command) {
        Ok(Output::Text(text)) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Ok(Output::Report(mut report)) => {
            report.wall_time_ms = ctx.started.elapsed().as_secs_f64() * 1e3;
            if cli.json {
                print!("{}", to_json(&report));
            } else {
                print!("{}", report.render_text());
            }
            ExitCode::from(report.verdict.exit_code())
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(ctx: &Ctx, command: Command) -> Result<Output, Failure> {
    match command {
        Command::Solve { network, out } => solve(ctx, &network, out.as_deref()),
        Command::Check { concept, network, outcome } => check_cmd(ctx, concept.into(), &network, &outcome),
        Command::Exists { concept, network, out } => exists(ctx, concept.into(), &network, out.as_deref()),
        Command::Reduce(r) => reduce(ctx, r),
        Command::Audit {
            property,
            network,
            firm,
            cap,
        } => audit(ctx, property, &network, firm.as_deref(), cap),
        Command::Experiment(Experiment::OracleCalls { n }) => oracle_calls(ctx, n),
        Command::Gen(Gen::Flow(args)) => gen_flow(ctx, args),
        Command::ExportDot { network, outcome, out } => {
            let net = load_network(&network)?;
            let a = outcome.map(|p| load_outcome(&p, &net)).transpose()?;
            let text = export_dot(&net, a.as_ref());
            write_or_print(out.as_deref(), text)
        }
    }
}

fn write_or_print(out: Option<&Path>, text: String) -> Result<Output, Failure> {
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
            Ok(Output::Text(String::new()))
        }
        None => Ok(Output::Text(text)),
    }
}

fn solve(ctx: &Ctx, network: &Path, out: Option<&Path>) -> Result<Output, Failure> {
    let net = load_network(network)?;
    let da = deferred_acceptance(&net)?;
    if let Some(path) = out {
        save_outcome(path, &net, &da.outcome)?;
    }
    let mut report = ctx.report(RunVerdict::Yes, Some(&net));
    report.concept = Some(Concept::Trail.to_string());
    report.witness = Some(Witness::outcome(&net, &da.outcome));
    report.counters.rounds = Some(da.rounds);
    report.counters.rejections = Some(da.rejections);
    Ok(Output::Report(Box::new(report)))
}

fn check_cmd(ctx: &Ctx, concept: Concept, network: &Path, outcome: &Path) -> Result<Output, Failure> {
    let net = load_network(network)?;
    let a = load_outcome(outcome, &net)?;
    let verdict = match ctx.or_unknown(check(&net, &a, concept, ctx.budget), &net, Some(concept))? {
        Ok(v) => v,
        Err(report) => return Ok(Output::Report(Box::new(report))),
    };
    let (run_verdict, witness) = match &verdict {
        Verdict::Holds => (RunVerdict::Yes, None),
        Verdict::NotAcceptable { firms } => (RunVerdict::No, Some(Witness::not_acceptable(&net, firms))),
        Verdict::Blocked(block) => (RunVerdict::No, Some(Witness::block(&net, block))),
    };
    let mut report = ctx.report(run_verdict, Some(&net));
    report.concept = Some(concept.to_string());
    report.witness = witness;
    Ok(Output::Report(Box::new(report)))
}

fn exists(ctx: &Ctx, concept: Concept, network: &Path, out: Option<&Path>) -> Result<Output, Failure> {
    let net = load_network(network)?;
    let found = match ctx.or_unknown(exists_outcome(&net, concept, ctx.budget), &net, Some(concept))? {
        Ok(v) => v,
        Err(report) => return Ok(Output::Report(Box::new(report))),
    };
    let mut report = ctx.report(if found.is_some() { RunVerdict::Yes } else { RunVerdict::No }, Some(&net));
    report.concept = Some(concept.to_string());
    if let Some(a) = &found {
        if let Some(path) = out {
            save_outcome(path, &net, a)?;
        }
        report.witness = Some(Witness::outcome(&net, a));
    }
    Ok(Output::Report(Box::new(report)))
}

fn reduce(ctx: &Ctx, r: Reduce) -> Result<Output, Failure> {
    match r {
        Reduce::AcyclicBipartition { digraph, out, map } => {
            let doc: DigraphDocument = read_json(&digraph)?;
            let d = Digraph::from_document(&doc)?;
            let (net, reduction) = reduce_acyclic_bipartition(&d)?;
            save_network(&out, &net)?;
            if let Some(path) = map {
                write_json(&path, &reduction.to_document(&net, &d))?;
            }
            let mut report = ctx.report(RunVerdict::Yes, None);
            report.details = Some(serde_json::json!({
                "firms": net.firm_count(),
                "contracts": net.contract_count(),
                "flow_network": net.is_flow_network(),
            }));
            Ok(Output::Report(Box::new(report)))
        }
        Reduce::Partition { weights, out, outcome } => {
            let instance = PartitionInstance::new(weights)?;
            let red = reduce_partition_to_instability(&instance)?;
            save_network(&out, &red.network)?;
            if let Some(path) = outcome {
                save_outcome(&path, &red.network, &red.challenged)?;
            }
            let mut report = ctx.report(RunVerdict::Yes, None);
            report.details = Some(serde_json::json!({
                "firms": red.network.firm_count(),
                "contracts": red.network.contract_count(),
                "weights": instance.weights(),
            }));
            Ok(Output::Report(Box::new(report)))
        }
    }
}

fn audit(ctx: &Ctx, property: Property, network: &Path, firm: Option<&str>, cap: usize) -> Result<Output, Failure> {
    let net = load_network(network)?;
    let firms = match firm {
        Some(name) => vec![net.firm_id(name).map_err(Failure::input)?],
        None => net.firms().collect(),
    };
    let mut violations = Vec::new();
    for f in firms {
        let choice = net.choice(f);
        let up = net.upstream_contracts(f);
        let down = net.downstream_contracts(f);
        let result = match property {
            Property::Irc => {
                let all: Vec<_> = up.iter().chain(down).copied().collect();
                audit_irc(choice, &all, cap)
            }
            Property::FullSub => audit_full_substitutability(choice, up, down, cap),
        };
        match result {
            Ok(found) => violations.extend(found.iter().map(|v| describe_violation(&net, f, v))),
            Err(AuditError::CapExceeded { size, .. }) => {
                let mut report = ctx.report(RunVerdict::UnknownBudget, Some(&net));
                report.details = Some(serde_json::json!({
                    "firm": net.firm_name(f),
                    "contracts": size,
                    "cap": cap,
                }));
                return Ok(Output::Report(Box::new(report)));
            }
        }
    }
    let mut report = ctx.report(if violations.is_empty() { RunVerdict::Yes } else { RunVerdict::No }, Some(&net));
    if !violations.is_empty() {
        report.witness = Some(Witness::Violations { violations });
    }
    Ok(Output::Report(Box::new(report)))
}

fn oracle_calls(ctx: &Ctx, n: usize) -> Result<Output, Failure> {
    let result = oracle_lower_bound_experiment(n)?;
    let mut report = ctx.report(if result.consistent() { RunVerdict::Yes } else { RunVerdict::No }, None);
    report.counters.oracle_queries = result.decider_total_queries;
    report.details = Some(serde_json::to_value(&result).expect("report serializes"));
    Ok(Output::Report(Box::new(report)))
}

fn gen_flow(ctx: &Ctx, args: GenFlow) -> Result<Output, Failure> {
    let net = random_flow_network(args.seed, args.firms, args.density).map_err(Failure::input)?;
    match args.out {
        Some(path) => {
            save_network(&path, &net)?;
            let mut report = ctx.report(RunVerdict::Yes, None);
            report.details = Some(serde_json::json!({
                "firms": net.firm_count(),
                "contracts": net.contract_count(),
            }));
            Ok(Output::Report(Box::new(report)))
        }
        None => Ok(Output::Text(tradenet_core::io::network_to_json(&net))),
    }
}
