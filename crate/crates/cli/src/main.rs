use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use infobroker::builtin::{builtin_source, example_report, property_sweep, EXAMPLE_NAMES};
use infobroker::complement::{
    complement_binary, complement_bruteforce, complement_diagonal_simple, BruteForceConfig,
};
use infobroker::mechanism::{
    build_menu_binary, build_menu_diagonal, enumerate_partitions, verify_menu, DEFAULT_PARTITION_CAP,
};
use infobroker::report::{
    audit_report, complement_report, eval_report, join_report, signal_block, value_report, Format,
    Report, Table,
};
use infobroker::scenario::{parse_scenario_with, ParseOptions};
use infobroker::{Error, ScenarioFile};

#[derive(Parser)]
#[command(name = "infobroker", version, about = "Exact value-of-information and screening-menu calculator")]
struct Cli {
    /// Scenario file, or the name of a bundled example (monopolist, clinical, triangular).
    #[arg(long, global = true)]
    scenario: Option<String>,

    #[arg(long, global = true, default_value = "text")]
    format: Format,

    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = TieBreak::LowestIndex)]
    tie_break: TieBreak,

    /// Accept problems where some state has several optimal actions.
    #[arg(long, global = true)]
    allow_degenerate: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum TieBreak {
    LowestIndex,
}

#[derive(Clone, Copy, ValueEnum)]
enum ComplementKind {
    Binary,
    Diagonal,
    Bruteforce,
}

#[derive(Clone, Copy, ValueEnum)]
enum MenuKind {
    Binary,
    Diagonal,
}

#[derive(Subcommand)]
enum Command {
    /// Ex-ante payoff of a signal with its per-message breakdown.
    Eval {
        #[arg(long)]
        signal: String,
    },
    /// Join of two signals.
    Join { left: String, right: String },
    /// Value of adding a signal to one already owned.
    Value {
        added: String,
        #[arg(long)]
        given: String,
    },
    /// A minimal complementary signal.
    Complement {
        #[arg(long)]
        signal: String,
        #[arg(long, value_enum)]
        method: ComplementKind,
        #[arg(long, default_value_t = 2)]
        max_messages: usize,
        #[arg(long, default_value_t = 8)]
        grid: u32,
    },
    /// Build and audit the full-extraction menu for the scenario's types.
    Menu {
        #[arg(long, value_enum)]
        method: MenuKind,
    },
    /// Audit a menu from the scenario.
    Verify {
        #[arg(long)]
        menu: String,
    },
    /// Every partition of the states with its payoff.
    Partitions {
        #[arg(long, default_value_t = DEFAULT_PARTITION_CAP)]
        cap: usize,
    },
    /// The bundled worked examples.
    Examples {
        #[arg(long)]
        name: Option<String>,
        /// Run all checks and a seeded randomized sweep; exit 1 on any failure.
        #[arg(long)]
        verify: bool,
    },
}

enum Failure {
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn load(cli: &Cli) -> Result<ScenarioFile, Failure> {
    let path = cli
        .scenario
        .as_deref()
        .ok_or_else(|| Failure::Usage("this command needs --scenario".into()))?;
    let text = match builtin_source(path) {
        Some(src) if !std::path::Path::new(path).exists() => src.to_string(),
        _ => std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{path}: {e}")))?,
    };
    let options = ParseOptions {
        allow_degenerate: cli.allow_degenerate,
    };
    parse_scenario_with(&text, options).map_err(|e| Failure::Usage(format!("{path}: {e}")))
}

fn run(cli: &Cli) -> Result<(Vec<Report>, bool), Failure> {
    let TieBreak::LowestIndex = cli.tie_break;
    if let Command::Examples { name, verify } = &cli.command {
        return examples(name.as_deref(), *verify, cli.seed);
    }
    let scenario = load(cli)?;
    let problem = &scenario.problem;
    let report = match &cli.command {
        Command::Eval { signal } => eval_report(problem, &scenario.require_signal(signal)?)?,
        Command::Join { left, right } => join_report(
            problem,
            &scenario.require_signal(left)?,
            &scenario.require_signal(right)?,
        )?,
        Command::Value { added, given } => value_report(
            &problem.incremental_value(&scenario.require_signal(added)?, &scenario.require_signal(given)?)?,
        ),
        Command::Complement {
            signal,
            method,
            max_messages,
            grid,
        } => {
            let base = scenario.require_signal(signal)?;
            let result = match method {
                ComplementKind::Binary => complement_binary(&base, problem)?,
                ComplementKind::Diagonal => complement_diagonal_simple(&base, problem)?,
                ComplementKind::Bruteforce => {
                    complement_bruteforce(&base, problem, &BruteForceConfig::new(*max_messages, *grid))?
                }
            };
            complement_report(&base, &problem.full_info_payoff(), &result)
        }
        Command::Menu { method } => {
            let types = scenario
                .type_space()?
                .ok_or_else(|| Failure::Usage("scenario has no types block".into()))?;
            let menu = match method {
                MenuKind::Binary => build_menu_binary(&types, problem)?,
                MenuKind::Diagonal => build_menu_diagonal(&types, problem)?,
            };
            let audit = verify_menu(&menu, &types, problem)?;
            let mut r = audit_report("built menu", &audit);
            let mut listing = String::new();
            for (id, item) in menu.items() {
                let name = format!("item-{id}");
                listing.push_str(&signal_block(&item.offered.clone().with_name(name)));
            }
            listing.push_str("menu built\n");
            for (id, item) in menu.items() {
                listing.push_str(&format!(
                    "  item {id} = item-{id} price {}\n",
                    infobroker::rational::format_exact(&item.price)
                ));
            }
            r.block("menu", listing);
            return Ok((vec![r], audit.passes()));
        }
        Command::Verify { menu } => {
            let types = scenario
                .type_space()?
                .ok_or_else(|| Failure::Usage("scenario has no types block".into()))?;
            let audit = verify_menu(&scenario.menu(menu)?, &types, problem)?;
            return Ok((vec![audit_report(&format!("audit of menu {menu}"), &audit)], audit.passes()));
        }
        Command::Partitions { cap } => {
            let mut r = Report::new("partitions of the states");
            r.field("full-information U", problem.full_info_payoff());
            let mut t = Table::new("partitions", &["partition", "blocks", "U"]);
            let parts = enumerate_partitions(problem, *cap)?;
            for p in &parts {
                let blocks = p
                    .messages()
                    .iter()
                    .map(|m| format!("{{{}}}", m.label().replace('+', ",")))
                    .collect::<Vec<_>>()
                    .join(" ");
                t.push(vec![p.name().into(), blocks.into(), problem.exante_payoff(p)?.into()]);
            }
            r.field("count", parts.len().to_string());
            r.table(t);
            r
        }
        Command::Examples { .. } => unreachable!("handled above"),
    };
    Ok((vec![report], true))
}

fn examples(name: Option<&str>, verify: bool, seed: u64) -> Result<(Vec<Report>, bool), Failure> {
    let names: Vec<&str> = match name {
        Some(n) if EXAMPLE_NAMES.contains(&n) => vec![n],
        Some(n) => {
            return Err(Failure::Usage(format!(
                "unknown example `{n}` (expected one of {})",
                EXAMPLE_NAMES.join(", ")
            )))
        }
        None => EXAMPLE_NAMES.to_vec(),
    };
    let mut reports = Vec::new();
    let mut ok = true;
    for n in names {
        let (report, checks) = example_report(n)?;
        ok &= checks.iter().all(|c| c.pass);
        reports.push(report);
    }
    if verify {
        let mut r = Report::new(format!("randomized sweep (seed {seed})"));
        let mut t = Table::new("checks", &["check", "status"]);
        for c in property_sweep(seed)? {
            ok &= c.pass;
            t.push(vec![c.name.into(), if c.pass { "PASS" } else { "FAIL" }.into()]);
        }
        r.table(t);
        r.field("result", if ok { "PASS" } else { "FAIL" });
        reports.push(r);
    }
    Ok((reports, ok || !verify))
}

/// Exit code, stdout and stderr for an argument vector.
fn execute<I, T>(args: I) -> (u8, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() { (2, String::new(), text) } else { (0, text, String::new()) };
        }
    };
    match run(&cli) {
        Ok((reports, ok)) => {
            let rendered: Vec<String> = reports.iter().map(|r| r.render(cli.format)).collect();
            (if ok { 0 } else { 1 }, rendered.join("\n"), String::new())
        }
        Err(Failure::Usage(msg)) => (2, String::new(), format!("error: {msg}\n")),
    }
}

fn main() -> ExitCode {
    let (code, out, err) = execute(std::env::args_os());
    print!("{out}");
    eprint!("{err}");
    ExitCode::from(code)
}

#[cfg(test)]
mod tests {
    use super::*;
    use infobroker::rational::rat;
    use infobroker::report::rational_from_json;

    fn cli(args: &[&str]) -> (u8, String, String) {
        execute(std::iter::once("infobroker").chain(args.iter().copied()))
    }

    #[test]
    fn eval_prints_exact_and_decimal() {
        let (code, out, _) = cli(&["eval", "--scenario", "monopolist", "--signal", "residential"]);
        assert_eq!(code, 0);
        assert!(out.contains("367/5 (73.4)"));
    }

    #[test]
    fn clinical_example_table() {
        let (code, out, _) = cli(&["examples", "--name", "clinical"]);
        assert_eq!(code, 0);
        for needle in ["10/3", "20/3", "10", "menu audit", "PASS"] {
            assert!(out.contains(needle), "missing {needle}");
        }
        assert!(!out.contains("FAIL"));
    }

    #[test]
    fn triangular_example_reports_ic_failure() {
        let (code, out, _) = cli(&["examples", "--name", "triangular"]);
        assert_eq!(code, 0);
        assert!(out.contains("2/3"));
        assert!(out.contains("1/4 (0.25)") && out.contains("1/3 (0.3333"));
        assert!(out.contains("IC-FAIL") && out.contains("-1/12"));
    }

    #[test]
    fn verification_exit_codes() {
        assert_eq!(cli(&["verify", "--scenario", "monopolist", "--menu", "efficient"]).0, 0);
        let (code, out, _) = cli(&["verify", "--scenario", "triangular", "--menu", "canonical"]);
        assert_eq!(code, 1);
        assert!(out.contains("FAIL"));
        assert_eq!(cli(&["examples", "--verify", "--seed", "3"]).0, 0);
        assert_eq!(cli(&["menu", "--scenario", "monopolist", "--method", "binary"]).0, 0);
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(cli(&["eval", "--signal", "x"]).0, 2);
        assert_eq!(cli(&["nonsense"]).0, 2);
        assert_eq!(cli(&["examples", "--name", "nope"]).0, 2);
        assert_eq!(cli(&["eval", "--scenario", "monopolist", "--signal", "nope"]).0, 2);
        assert_eq!(cli(&["menu", "--scenario", "monopolist", "--method", "diagonal"]).0, 2);
        assert_eq!(cli(&["--help"]).0, 0);
    }

    #[test]
    fn json_output_round_trips_rationals() {
        let (code, out, _) = cli(&[
            "value", "full", "--given", "residential", "--scenario", "monopolist", "--format", "json-like",
        ]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(rational_from_json(&v["fields"]["value"]).unwrap(), rat(58, 5));
        assert_eq!(rational_from_json(&v["fields"]["U(base)"]).unwrap(), rat(367, 5));
    }

    #[test]
    fn commands_are_deterministic() {
        for args in [
            vec!["complement", "--scenario", "triangular", "--signal", "partial", "--method", "bruteforce", "--grid", "12"],
            vec!["menu", "--scenario", "clinical", "--method", "diagonal", "--format", "csv"],
            vec!["partitions", "--scenario", "clinical"],
            vec!["join", "residential", "civil-status", "--scenario", "monopolist"],
        ] {
            let first = cli(&args);
            assert_eq!(first.0, 0, "{args:?}");
            assert_eq!(first, cli(&args), "{args:?}");
        }
    }

    #[test]
    fn bruteforce_complement_of_partial_type() {
        let (_, out, _) = cli(&[
            "complement", "--scenario", "triangular", "--signal", "partial", "--method", "bruteforce", "--grid", "12",
        ]);
        assert!(out.contains("U(complement)") && out.contains("4/3"), "{out}");
        assert!(out.contains("complete") && out.contains("yes"));
    }

    #[test]
    fn partitions_lists_bell_many() {
        let (_, out, _) = cli(&["partitions", "--scenario", "clinical", "--format", "csv"]);
        assert_eq!(out.lines().filter(|l| l.starts_with("partitions,")).count(), 5);
    }
}
