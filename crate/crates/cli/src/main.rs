//! `coalflow`: translate access-control policies into information-flow
//! graphs, compose them, and analyse the result.

mod error;
mod io;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgMatches, Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use coalflow::analyze::{common_flows, conflicting, conflicts, diffs};
use coalflow::compose::{append_all, append_strict_all, merge_all};
use coalflow::{CommonRepresentation, InterfaceId, RbacSemantics};

use crate::error::CliError;
use crate::report::{Analysis, QueryResult, Report, RuleComposition};

#[derive(Parser)]
#[command(name = "coalflow", version, about = "Information-flow analysis of access-control policies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Translate a policy file (acl, capabilities, lbac, rbac) into a CR.
    Translate {
        policy: PathBuf,
        #[arg(long, value_enum, default_value_t = SemanticsArg::Literal)]
        rbac_semantics: SemanticsArg,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Fold CR files left to right with one composite.
    Compose {
        #[arg(value_enum)]
        op: ComposeOp,
        #[arg(required = true, num_args = 2..)]
        crs: Vec<PathBuf>,
        /// Rule file, required by the `rule` operation.
        #[arg(long, required_if_eq("op", "rule"))]
        rule: Option<PathBuf>,
        /// For `rule`: also write the resulting CR here.
        #[arg(long)]
        cr_out: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Report conflicts, common flows and differences between two CRs.
    Analyze {
        a: PathBuf,
        b: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Answer grant, reachability and liveliness queries on a CR.
    Check(CheckArgs),
    /// Render a CR as a Graphviz digraph.
    ExportDot {
        cr: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("queries").required(true).multiple(true).args(["grant", "reachable", "lively"]))]
struct CheckArgs {
    cr: PathBuf,
    /// Interfaces are written ENTITY.R, ENTITY.W or AGENT#LABEL.
    #[arg(long, num_args = 2, value_names = ["FROM", "TO"], action = clap::ArgAction::Append)]
    grant: Vec<String>,
    #[arg(long, num_args = 2, value_names = ["FROM", "TO"], action = clap::ArgAction::Append)]
    reachable: Vec<String>,
    #[arg(long)]
    lively: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SemanticsArg {
    Literal,
    CrossObject,
}

impl From<SemanticsArg> for RbacSemantics {
    fn from(s: SemanticsArg) -> Self {
        match s {
            SemanticsArg::Literal => RbacSemantics::Literal,
            SemanticsArg::CrossObject => RbacSemantics::CrossObject,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ComposeOp {
    Merge,
    Append,
    AppendStrict,
    Rule,
}

fn main() -> ExitCode {
    let matches = Cli::command().get_matches();
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(cli, &matches) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !matches!(e, CliError::Rejected) {
                eprintln!("error: {e}");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: Cli, matches: &ArgMatches) -> Result<(), CliError> {
    match cli.command {
        Command::Translate {
            policy,
            rbac_semantics,
            output,
        } => {
            let p = io::load_policy(&policy)?;
            let cr = p.to_cr(rbac_semantics.into()).map_err(|e| CliError::Invalid {
                path: policy.display().to_string(),
                message: e.to_string(),
            })?;
            io::emit(output.as_ref(), &cr.to_json())
        }
        Command::Compose {
            op,
            crs,
            rule,
            cr_out,
            output,
        } => compose(op, &crs, rule, cr_out, output),
        Command::Analyze { a, b, output } => {
            let (ca, cb) = (io::load_cr(&a)?, io::load_cr(&b)?);
            let outcome = Analysis {
                conflicting: conflicting(&ca, &cb),
                conflicts: conflicts(&ca, &cb),
                common_flows: common_flows(&ca, &cb),
                diffs: diffs(&ca, &cb),
            };
            let mut report = Report::new("analyze", &[a, b], outcome);
            if ca.interfaces().is_disjoint(cb.interfaces()) {
                report.warn("inputs share no interfaces, so no conflict is possible");
            }
            io::emit(output.as_ref(), &io::to_json(&report))
        }
        Command::Check(args) => {
            let sub = matches
                .subcommand_matches("check")
                .expect("check arguments were parsed");
            check(args, sub)
        }
        Command::ExportDot { cr, output } => {
            let g = io::load_cr(&cr)?;
            io::emit(output.as_ref(), &coalflow::dot::to_dot(&g))
        }
    }
}

fn compose(
    op: ComposeOp,
    paths: &[PathBuf],
    rule: Option<PathBuf>,
    cr_out: Option<PathBuf>,
    output: Option<PathBuf>,
) -> Result<(), CliError> {
    let crs = paths.iter().map(|p| io::load_cr(p)).collect::<Result<Vec<_>, _>>()?;
    let fold = match op {
        ComposeOp::Merge => merge_all,
        ComposeOp::Append => append_all,
        ComposeOp::AppendStrict => append_strict_all,
        ComposeOp::Rule => {
            let rule_path = rule.expect("clap enforces --rule for the rule operation");
            let rule = io::load_rule(&rule_path)?;
            let mut inputs = paths.to_vec();
            inputs.push(rule_path);

            let mut decisions = Vec::new();
            let mut acc = Some(crs[0].clone());
            let mut warn_disjoint = false;
            for next in &crs[1..] {
                let Some(cur) = acc.take() else { break };
                warn_disjoint |= cur.interfaces().is_disjoint(next.interfaces());
                let decision = rule.apply(&cur, next);
                acc = decision.result.clone();
                decisions.push(decision);
            }
            let rejected = acc.is_none();
            if let (Some(cr), Some(path)) = (&acc, &cr_out) {
                io::emit(Some(path), &cr.to_json())?;
            }
            let mut report = Report::new("compose", &inputs, RuleComposition { decisions, result: acc });
            if warn_disjoint {
                report.warn("a composed pair shares no interfaces; the rule condition saw no conflicts");
            }
            io::emit(output.as_ref(), &io::to_json(&report))?;
            return if rejected { Err(CliError::Rejected) } else { Ok(()) };
        }
    };
    let cr = fold(&crs).expect("clap requires at least two CR files");
    io::emit(output.as_ref(), &cr.to_json())
}

fn parse_interface(s: &str) -> Result<InterfaceId, CliError> {
    s.parse().map_err(|e: coalflow::cr::ParseInterfaceError| CliError::Query(e.to_string()))
}

fn pair_indices(m: &ArgMatches, id: &str) -> Vec<usize> {
    m.indices_of(id)
        .map(|it| it.step_by(2).collect())
        .unwrap_or_default()
}

fn check(args: CheckArgs, m: &ArgMatches) -> Result<(), CliError> {
    let cr = io::load_cr(&args.cr)?;

    // answer queries in command-line order
    let mut queries: Vec<(usize, QueryResult)> = Vec::new();
    for (idx, pair) in pair_indices(m, "grant").into_iter().zip(args.grant.chunks(2)) {
        let (from, to) = (parse_interface(&pair[0])?, parse_interface(&pair[1])?);
        let result = cr.grant(&from, &to);
        queries.push((
            idx,
            QueryResult::Grant {
                from: pair[0].clone(),
                to: pair[1].clone(),
                result,
            },
        ));
    }
    for (idx, pair) in pair_indices(m, "reachable").into_iter().zip(args.reachable.chunks(2)) {
        let (from, to) = (parse_interface(&pair[0])?, parse_interface(&pair[1])?);
        let result = cr
            .reachable(&from, &to)
            .map_err(|e| CliError::Query(e.to_string()))?;
        queries.push((
            idx,
            QueryResult::Reachable {
                from: pair[0].clone(),
                to: pair[1].clone(),
                result,
            },
        ));
    }
    if args.lively {
        let idx = m.index_of("lively").unwrap_or(usize::MAX);
        queries.push((idx, lively(&cr)));
    }
    queries.sort_by_key(|(idx, _)| *idx);

    let outcome: Vec<QueryResult> = queries.into_iter().map(|(_, q)| q).collect();
    let report = Report::new("check", std::slice::from_ref(&args.cr), outcome);
    io::emit(args.output.as_ref(), &io::to_json(&report))
}

fn lively(cr: &CommonRepresentation) -> QueryResult {
    let components = cr.availability_graph().component_count();
    QueryResult::Lively {
        result: components == 1,
        components,
    }
}
