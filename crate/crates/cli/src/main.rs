//! `sl2var`: generate modules, run checks, linearize, and run the acceptance suite.

mod checks;
mod gen;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use sl2var::arith::DEFAULT_MAX_FIELD_SIZE;
use sl2var::io::{read_action_with_bound, to_canonical_string, write_action};
use sl2var::linearize::{char3_biquadratic, linearize_group_quadratic, linearize_lie_quadratic, vandermonde_det_check};
use sl2var::pbw::{confluence_check, verify_induction_identities, FreeWord};
use sl2var::presentation::{Action, ActionKind};
use sl2var::report::{CheckReport, Verdict};
use sl2var::suite;

use checks::Params;
use gen::GenArgs;

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] sl2var::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: invalid JSON: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use sl2var::Error as E;
        match self {
            CliError::Core(E::Inconsistent { .. } | E::RelationsFailed(_)) => 1,
            _ => 2,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "sl2var", version, about = "Exact checks and linearization for SL2(K)- and sl2(K)-modules")]
struct Cli {
    /// Largest field order accepted in inputs and generators.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_FIELD_SIZE)]
    max_field_size: u64,
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write an action file for a standard module.
    Gen {
        #[command(flatten)]
        args: GenArgs,
        /// Action files consumed by `sum`, `conjugate` and `twist`.
        #[arg(long)]
        input: Vec<PathBuf>,
    },
    /// Run named checks on an action file.
    Check {
        #[arg(long, required_unless_present = "list")]
        input: Option<PathBuf>,
        /// Comma-separated check names.
        #[arg(long, value_delimiter = ',', conflicts_with = "all")]
        checks: Vec<String>,
        /// Run every check for the action's kind; gated checks are reported as not applicable.
        #[arg(long)]
        all: bool,
        /// Print the check names with their statements and exit.
        #[arg(long)]
        list: bool,
        /// Nilpotency degree k of u - 1 for v4 and v5 (default: the smallest valid one).
        #[arg(long)]
        k: Option<u32>,
        /// Length n for v6 (default: the smallest n with (u_l - 1)^n = 0 for all l).
        #[arg(long)]
        n: Option<u32>,
    },
    /// Write a linearization certificate for a quadratic action.
    Linearize {
        #[arg(long)]
        input: PathBuf,
        /// Expect an sl2(K) action.
        #[arg(long)]
        lie: bool,
        /// For characteristic 3 Lie actions with x^2 = y^2 = 0.
        #[arg(long, requires = "lie")]
        char3: bool,
    },
    /// Verify the enveloping-ring identities, Vandermonde determinants and PBW confluence.
    Identities {
        #[arg(long, default_value_t = 12)]
        pbw_max: usize,
        #[arg(long, default_value_t = 12)]
        det_max: u32,
        /// Number of random words for the confluence check.
        #[arg(long, default_value_t = 1000)]
        words: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the acceptance criteria.
    Suite {
        #[arg(long)]
        criterion: Option<u32>,
    },
}

fn read_action(path: &Path, max_field_size: u64) -> CliResult<Action> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
    let value: Value = serde_json::from_str(&text).map_err(|source| CliError::Json { path: path.into(), source })?;
    Ok(read_action_with_bound(&value, max_field_size)?)
}

fn emit(output: Option<&Path>, value: &Value) -> CliResult<()> {
    let text = to_canonical_string(value);
    match output {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io { path: path.into(), source }),
        None => {
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            Ok(())
        }
    }
}

fn kind_label(kind: ActionKind) -> &'static str {
    kind.as_str()
}

fn list_checks() {
    let text: String = checks::CHECKS
        .iter()
        .map(|c| format!("{:<20} {:<6} {}\n", c.name, kind_label(c.kind), c.statement))
        .collect();
    // a closed pipe (e.g. `| head`) is not an error
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn relation_check_name(kind: ActionKind) -> &'static str {
    match kind {
        ActionKind::Group => checks::STEINBERG_RELATIONS,
        ActionKind::Lie => checks::BRACKET_RELATIONS,
    }
}

fn check_output(action: &Action, reports: &mut [CheckReport]) -> Value {
    reports.sort_by(|a, b| a.check.cmp(&b.check));
    json!({
        "field": action.field().desc(),
        "kind": action.kind().as_str(),
        "passed": reports.iter().all(|r| r.verdict != Verdict::Fail),
        "reports": reports,
    })
}

fn cmd_check(cli: &Cli, input: &Path, names: &[String], all: bool, params: Params) -> CliResult<u8> {
    let action = read_action(input, cli.max_field_size)?;
    let kind = action.kind();
    let selected: Vec<String> = if all || names.is_empty() {
        checks::names_for(kind).into_iter().map(String::from).collect()
    } else {
        for name in names {
            if !checks::is_known(name) {
                return Err(CliError::Usage(format!("unknown check `{name}`; see `sl2var check --list`")));
            }
        }
        names.to_vec()
    };
    let relations = checks::run(relation_check_name(kind), &action, params)?;
    if !relations.passed() {
        let skipped = selected
            .iter()
            .filter(|n| *n != relation_check_name(kind))
            .map(|n| CheckReport::not_applicable(n, "skipped: the defining relations fail"));
        let mut reports: Vec<_> = std::iter::once(relations).chain(skipped).collect();
        emit(cli.output.as_deref(), &check_output(&action, &mut reports))?;
        return Ok(1);
    }
    let mut reports = Vec::new();
    let mut gated = false;
    for name in &selected {
        let report = match checks::run(name, &action, params) {
            Ok(r) => r,
            Err(e @ (sl2var::Error::Hypothesis { .. } | sl2var::Error::BoundExceeded { .. })) => {
                gated |= !all;
                CheckReport::not_applicable(name, e.to_string())
            }
            Err(e @ sl2var::Error::Inconsistent { .. }) => CheckReport::fail(name, e.to_string()),
            Err(e) => return Err(e.into()),
        };
        reports.push(report);
    }
    let out = check_output(&action, &mut reports);
    emit(cli.output.as_deref(), &out)?;
    Ok(if out["passed"] == json!(false) {
        1
    } else if gated {
        2
    } else {
        0
    })
}

fn cmd_linearize(cli: &Cli, input: &Path, lie: bool, char3: bool) -> CliResult<u8> {
    let action = read_action(input, cli.max_field_size)?;
    let relations = action.verify();
    if !relations.passed() {
        return Err(sl2var::Error::RelationsFailed(Box::new(relations)).into());
    }
    let cert = match (&action, lie) {
        (Action::Group(a), false) => linearize_group_quadratic(a)?,
        (Action::Lie(l), true) if char3 => char3_biquadratic(l)?,
        (Action::Lie(l), true) => linearize_lie_quadratic(l)?,
        (a, _) => {
            return Err(sl2var::Error::KindMismatch(format!(
                "input is a {} action; pass --lie exactly for Lie actions",
                a.kind().as_str()
            ))
            .into())
        }
    };
    emit(cli.output.as_deref(), &cert.to_json())?;
    Ok(0)
}

fn cmd_identities(cli: &Cli, pbw_max: usize, det_max: u32, words: usize, seed: u64) -> CliResult<u8> {
    if det_max < 2 {
        return Err(CliError::Usage("--det-max must be at least 2".into()));
    }
    let mut reports = vec![verify_induction_identities(pbw_max)];
    let mut det = CheckReport::pass("vandermonde");
    for n in 2..=det_max {
        let v = vandermonde_det_check(n)?;
        det.require(v.equal_up_to_sign, || format!("n = {n}: det {} but formula {}", v.determinant, v.formula));
    }
    reports.push(det.with_detail(format!("n = 2..={det_max}")));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sample: Vec<FreeWord> = (0..words).map(|_| FreeWord::random(&mut rng, 8)).collect();
    reports.push(confluence_check(&sample, seed));
    reports.sort_by(|a, b| a.check.cmp(&b.check));
    let passed = reports.iter().all(CheckReport::passed);
    emit(cli.output.as_deref(), &json!({ "passed": passed, "reports": reports }))?;
    Ok(u8::from(!passed))
}

fn cmd_suite(cli: &Cli, criterion: Option<u32>) -> CliResult<u8> {
    let outcomes = match criterion {
        Some(id) => vec![suite::run_criterion(id).ok_or_else(|| {
            CliError::Usage(format!("unknown criterion {id}; valid ids are {:?}", suite::criterion_ids()))
        })?],
        None => suite::run_all(),
    };
    for o in &outcomes {
        eprintln!("{}", o.line());
    }
    let passed = outcomes.iter().all(|o| o.passed);
    emit(cli.output.as_deref(), &json!({ "passed": passed, "criteria": outcomes }))?;
    Ok(u8::from(!passed))
}

fn run(cli: &Cli) -> CliResult<u8> {
    match &cli.command {
        Command::Gen { args, input } => {
            let inputs = input.iter().map(|p| read_action(p, cli.max_field_size)).collect::<CliResult<Vec<_>>>()?;
            let action = gen::generate(args, cli.max_field_size, &inputs)?;
            emit(cli.output.as_deref(), &write_action(&action))?;
            Ok(0)
        }
        Command::Check { list: true, .. } => {
            list_checks();
            Ok(0)
        }
        Command::Check { input, checks, all, k, n, .. } => {
            let input = input.as_deref().expect("clap requires --input without --list");
            cmd_check(cli, input, checks, *all, Params { k: *k, n: *n })
        }
        Command::Linearize { input, lie, char3 } => cmd_linearize(cli, input, *lie, *char3),
        Command::Identities { pbw_max, det_max, words, seed } => cmd_identities(cli, *pbw_max, *det_max, *words, *seed),
        Command::Suite { criterion } => cmd_suite(cli, *criterion),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
