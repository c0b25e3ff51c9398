use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use tamegamma::suites::{interpolation_report, run_suite, Suite, SuiteConfig, SuiteReport};
use tamegamma::Error;

mod compute;

use compute::{compute, load, specialize, Factor};

#[derive(Parser)]
#[command(name = "tamegamma", version, about = "Local factors and gamma factors of tame Weil group representations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute one factor of the representation in a document.
    Compute {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        factor: Factor,
        /// A fiber: its name in the document, a JSON fiber block, or
        /// assignments such as `T=3` or `T=3@GF(7)`.
        #[arg(long)]
        fiber: Option<String>,
    },
    /// Run a seeded property suite.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 9)]
        qmax: u64,
        #[arg(long, default_value_t = 6)]
        dimmax: usize,
        /// Family documents for the interpolation suite, replacing the
        /// bundled fixtures.
        #[arg(long)]
        input: Vec<PathBuf>,
        /// One JSON report per case followed by a summary line.
        #[arg(long)]
        json: bool,
    },
    /// Compare the specialization of γ_R at a fiber with the fiber's own γ.
    Specialize {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        fiber: String,
        #[arg(long, value_enum, default_value_t = SpecializeFactor::Gamma)]
        factor: SpecializeFactor,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SpecializeFactor {
    Gamma,
}

fn exit_code(e: &Error) -> u8 {
    if e.is_parse() {
        2
    } else {
        3
    }
}

fn fail(e: Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(exit_code(&e))
}

fn print_report(report: &SuiteReport, json: bool) {
    if json {
        for case in &report.cases {
            println!("{}", case.to_json());
        }
        let summary = serde_json::json!({
            "suite": report.suite.name(),
            "passed": report.passed(),
            "total": report.cases.len(),
        });
        println!("{summary}");
        return;
    }
    for case in report.failed() {
        println!("FAIL {} ({})", case.id, case.digest);
        if let Some(e) = &case.error {
            println!("  error: {e}");
        }
        for c in case.checks.iter().filter(|c| !c.pass) {
            println!("  {}: {} != {}", c.name, c.lhs, c.rhs);
        }
        if let Some(doc) = &case.document {
            println!("  document: {doc}");
        }
    }
    println!("{}", report.summary());
}

fn verify(suite: &str, cfg: SuiteConfig, inputs: &[PathBuf], json: bool) -> Result<bool, Error> {
    let suite: Suite = suite.parse()?;
    let report = if suite == Suite::Interpolation && !inputs.is_empty() {
        let cases = inputs
            .iter()
            .map(|path| {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
                Ok(interpolation_report(format!("interpolation-{}", path.display()), &text))
            })
            .collect::<Result<Vec<_>, Error>>()?;
        SuiteReport { suite, cases }
    } else {
        run_suite(suite, &cfg)
    };
    print_report(&report, json);
    Ok(report.all_pass())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Compute { input, factor, fiber } => {
            match load(&input).and_then(|doc| compute(&doc, factor, fiber.as_deref())) {
                Ok(value) => {
                    println!("{value}");
                    ExitCode::SUCCESS
                }
                Err(e) => fail(e),
            }
        }
        Command::Verify { suite, trials, seed, qmax, dimmax, input, json } => {
            match verify(&suite, SuiteConfig { trials, seed, qmax, dimmax }, &input, json) {
                Ok(true) => ExitCode::SUCCESS,
                Ok(false) => ExitCode::from(1),
                Err(e) => fail(e),
            }
        }
        Command::Specialize { input, fiber, factor: SpecializeFactor::Gamma } => {
            match load(&input).and_then(|doc| specialize(&doc, &fiber)) {
                Ok(report) => {
                    println!("specialized: {}", report.specialized.normalized());
                    println!("fiber:       {}", report.direct.normalized());
                    println!("verdict: {}", if report.pass { "equal" } else { "different" });
                    if report.pass {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(1)
                    }
                }
                Err(e) => fail(e),
            }
        }
    }
}
