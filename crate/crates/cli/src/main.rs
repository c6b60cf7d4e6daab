use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use commclosure_core::pipeline::{brute_closure, run_pipeline, verify, PipelineOptions, PipelineReport};
use commclosure_core::{Alphabet, Dfa, Error, VerdictKind};
use serde_json::json;

/// Decide whether the commutative closure of a regular expression is regular
/// and build a DFA for it.
#[derive(Parser)]
#[command(name = "commclosure", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the closure automaton.
    Build {
        #[command(flatten)]
        common: Common,
        /// Minimize with Moore's algorithm.
        #[arg(long)]
        min: bool,
        /// Write the automaton as Graphviz DOT.
        #[arg(long, value_name = "PATH")]
        dot: Option<PathBuf>,
        /// Write the automaton as JSON.
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
    },
    /// Print the characteristic series and its reduced form.
    Series {
        #[command(flatten)]
        common: Common,
    },
    /// Print only the verdict.
    Decide {
        #[command(flatten)]
        common: Common,
    },
    /// List the closure words up to a length by brute force.
    Oracle {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 6)]
        max_len: usize,
    },
    /// Compare the automaton with the brute-force closure.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
    },
}

#[derive(Args)]
struct Common {
    /// Regular expression: letters, `|`, `*`, parentheses, `_` (empty word), `#` (empty set).
    regex: String,
    /// Declared alphabet, e.g. `abc`.
    #[arg(long)]
    alphabet: Option<String>,
    /// Print the semilinear and consistent semi-simple forms.
    #[arg(long)]
    dump_semilinear: bool,
    /// Print the resimple system.
    #[arg(long)]
    dump_resimple: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

impl Common {
    fn options(&self) -> Result<PipelineOptions, Error> {
        let alphabet = self.alphabet.as_deref().map(Alphabet::parse).transpose()?;
        Ok(PipelineOptions { alphabet })
    }

    fn dumps(&self, r: &PipelineReport) {
        if self.dump_semilinear {
            println!("semilinear: {}", r.semilinear);
            println!("semisimple: {}", r.semisimple);
        }
        if self.dump_resimple {
            if let Some(sys) = &r.resimple {
                println!("resimple:");
                for line in sys.lines() {
                    println!("  {line}");
                }
            }
        }
    }
}

fn verdict_code(v: VerdictKind) -> ExitCode {
    match v {
        VerdictKind::Regular => ExitCode::SUCCESS,
        VerdictKind::NotRegular => ExitCode::from(2),
    }
}

fn witness_text(r: &PipelineReport) -> String {
    r.witness.as_ref().map_or_else(String::new, |w| {
        let parts: Vec<String> = w.iter().map(u64::to_string).collect();
        format!("({})", parts.join(","))
    })
}

fn print_dfa(d: &Dfa) {
    let name = |s: usize| format!("q{s}");
    let alphabet: String = d.alphabet().iter().collect();
    println!("alphabet: {alphabet}");
    println!("states: {}", d.num_states());
    println!("initial: {}", name(d.initial()));
    let finals: Vec<String> = d.finals().into_iter().map(name).collect();
    println!("finals: {}", finals.join(" "));
    for (s, c, t) in d.edges() {
        println!("{} {c} {}", name(s), name(t));
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Build {
            common,
            min,
            dot,
            json,
        } => {
            let r = run_pipeline(&common.regex, &common.options()?)?;
            let dfa = if min {
                r.artifacts.min_dfa.as_ref()
            } else {
                r.artifacts.dfa.as_ref()
            };
            if let Some(d) = dfa {
                if let Some(path) = &dot {
                    write_file(path, &d.to_dot())?;
                }
                if let Some(path) = &json {
                    write_file(path, &d.to_json())?;
                }
            }
            match common.format {
                Format::Json => {
                    let automaton = dfa.map(|d| {
                        serde_json::from_str::<serde_json::Value>(&d.to_json())
                            .expect("automaton JSON parses")
                    });
                    print_json(&json!({ "report": r, "automaton": automaton }));
                }
                Format::Text => {
                    println!("verdict: {}", r.verdict);
                    println!("series: {}", r.fraction);
                    common.dumps(&r);
                    match (&r.reduced, dfa) {
                        (Some(reduced), Some(d)) => {
                            println!("reduced: {reduced}");
                            println!(
                                "raw states: {}, minimized states: {}",
                                r.raw_states.unwrap_or(0),
                                r.min_states.unwrap_or(0)
                            );
                            print_dfa(d);
                        }
                        _ => println!("witness: {}", witness_text(&r)),
                    }
                }
            }
            Ok(verdict_code(r.verdict))
        }
        Command::Series { common } => {
            let r = run_pipeline(&common.regex, &common.options()?)?;
            match common.format {
                Format::Json => print_json(&json!({
                    "series": r.fraction,
                    "reduced": r.reduced,
                    "verdict": r.verdict,
                    "witness": r.witness,
                })),
                Format::Text => {
                    println!("series: {}", r.fraction);
                    match &r.reduced {
                        Some(reduced) => println!("reduced: {reduced}"),
                        None => println!("witness: {}", witness_text(&r)),
                    }
                    common.dumps(&r);
                }
            }
            Ok(verdict_code(r.verdict))
        }
        Command::Decide { common } => {
            let r = run_pipeline(&common.regex, &common.options()?)?;
            match common.format {
                Format::Json => print_json(&json!({ "verdict": r.verdict, "witness": r.witness })),
                Format::Text => {
                    match r.verdict {
                        VerdictKind::Regular => println!("{}", r.verdict),
                        VerdictKind::NotRegular => println!("{} witness {}", r.verdict, witness_text(&r)),
                    }
                    common.dumps(&r);
                }
            }
            Ok(verdict_code(r.verdict))
        }
        Command::Oracle { common, max_len } => {
            let options = common.options()?;
            let words = brute_closure(&common.regex, options.alphabet.as_ref(), max_len)?;
            match common.format {
                Format::Json => print_json(&json!({ "max_len": max_len, "words": words })),
                Format::Text => {
                    for w in &words {
                        println!("{}", if w.is_empty() { "_" } else { w });
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { common, max_len } => {
            let v = verify(&common.regex, &common.options()?, max_len)?;
            match common.format {
                Format::Json => print_json(&json!(v)),
                Format::Text => match &v.counterexample {
                    None => println!("PASS ({} words up to length {max_len})", v.words_checked),
                    Some(c) => println!(
                        "FAIL word {:?}: automaton {}, oracle {}",
                        c.word, c.automaton, c.oracle
                    ),
                },
            }
            Ok(if v.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

fn write_file(path: &PathBuf, text: &str) -> Result<(), Error> {
    fs::write(path, text).map_err(|e| Error::Malformed(format!("cannot write {}: {e}", path.display())))
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("JSON value serializes"));
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
