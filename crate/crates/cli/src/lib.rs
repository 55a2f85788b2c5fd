//! Command implementations behind the `motive-calc` binary.
//!
//! [`run_command`] never touches the process: it takes the parsed arguments
//! and a stdin reader and returns the exit code with both output streams, so
//! the commands can be tested without spawning anything.

use std::io::Read;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use motive_calc_core::atlas::Atlas;
use motive_calc_core::dsl::{self, ParseError, HILB_DIVISOR};
use motive_calc_core::gm::{self, GmScenario, REPORT_SCHEMA};
use motive_calc_core::hodge::{lefschetz_section_profile, realize_profile, ProfileTable};
use motive_calc_core::motive::{dim_of, normalize, solve_tensor_factor, MotiveExpr, NormalForm};
use motive_calc_core::{realize_hodge, Betti, Error, TatePolynomial};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "motive-calc", version, about = "Exact calculus of motivic decompositions")]
pub struct Cli {
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Print only the result (or nothing, for verification).
    #[arg(long, short, global = true)]
    pub quiet: bool,
    /// Extra atlas entries: a JSON array of {name, dim, diamond, torsion}.
    #[arg(long, global = true, value_name = "FILE")]
    pub atlas: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the normal form of an expression.
    Normalize { expr: String },
    /// Print the Hodge diamond of an expression.
    Hodge { expr: String },
    /// Print the Betti numbers b_0, ..., b_2n.
    Betti { expr: String },
    /// Print the topological Euler characteristic.
    Euler { expr: String },
    /// Print the dimension.
    Dim { expr: String },
    /// Solve `unknown * m1 + m2 = rhs` for the unknown.
    Solve {
        /// Twist polynomial multiplying the unknown, e.g. `1 + 2L + L^2`.
        m1: String,
        /// The known summand on the left.
        m2: String,
        /// The right-hand side.
        rhs: String,
        #[arg(long, default_value = "X")]
        unknown: String,
    },
    /// Run the full Gushel-Mukai sixfold verification.
    #[command(name = "verify-gm6")]
    VerifyGm6,
    /// Print every atlas entry as JSON.
    #[command(name = "atlas-dump")]
    AtlasDump,
}

#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: i32, stderr: String) -> Self {
        Self {
            code,
            stdout: String::new(),
            stderr,
        }
    }
}

enum Failure {
    Input(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotDivisible { .. } | Error::NotASummand { .. } => Failure::Verification(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

struct Session<'a> {
    cli: &'a Cli,
    atlas: Atlas,
    stdin: Option<String>,
}

impl Session<'_> {
    fn parse(&mut self, text: &str, stdin: &mut dyn Read) -> Result<MotiveExpr, Failure> {
        let src = if text == "-" {
            if self.stdin.is_none() {
                let mut buf = String::new();
                stdin
                    .read_to_string(&mut buf)
                    .map_err(|e| Failure::Input(format!("reading stdin: {e}")))?;
                self.stdin = Some(buf);
            }
            self.stdin.clone().unwrap_or_default()
        } else {
            text.to_owned()
        };
        dsl::parse(src.trim_end(), &self.atlas).map_err(|e: ParseError| Failure::Input(e.render(src.trim_end())))
    }

    fn profiles(&self) -> Result<ProfileTable, Failure> {
        let mut table = self.atlas.profile_table();
        let k3 = self.atlas.k3()?;
        let hilb = self.atlas.hilb2(&k3)?;
        table.insert(
            HILB_DIVISOR.to_owned(),
            lefschetz_section_profile(&hilb.diamond, hilb.torsion_free)?,
        );
        Ok(table)
    }

    fn emit(&self, command: &str, input: Value, result: Value, text: String) -> String {
        if self.cli.json {
            let report = json!({
                "schema": REPORT_SCHEMA,
                "command": command,
                "input": input,
                "result": result,
            });
            serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
        } else {
            text
        }
    }
}

/// Executes one command.
pub fn run_command(cli: &Cli, stdin: &mut dyn Read) -> Outcome {
    let atlas = match load_atlas(cli) {
        Ok(a) => a,
        Err(msg) => return Outcome::fail(EXIT_INPUT, msg + "\n"),
    };
    let mut session = Session {
        cli,
        atlas,
        stdin: None,
    };
    match dispatch(&mut session, stdin) {
        Ok(outcome) => outcome,
        Err(Failure::Input(msg)) => Outcome::fail(EXIT_INPUT, format!("error: {msg}\n")),
        Err(Failure::Verification(msg)) => Outcome::fail(EXIT_FAILED, format!("failed: {msg}\n")),
    }
}

fn load_atlas(cli: &Cli) -> Result<Atlas, String> {
    let atlas = dsl::default_atlas().map_err(|e| format!("error: {e}"))?;
    if let Some(path) = &cli.atlas {
        let text = std::fs::read_to_string(path).map_err(|e| format!("error: reading {}: {e}", path.display()))?;
        atlas
            .load_json(&text)
            .map_err(|e| format!("error: {}: {e}", path.display()))?;
    }
    Ok(atlas)
}

fn dispatch(s: &mut Session<'_>, stdin: &mut dyn Read) -> Result<Outcome, Failure> {
    let cli = s.cli;
    let out = match &cli.command {
        Command::Normalize { expr } => {
            let nf = normalize(&s.parse(expr, stdin)?);
            s.emit("normalize", json!(expr), nf.to_json(), format!("{nf}\n"))
        }
        Command::Hodge { expr } => {
            let nf = normalize(&s.parse(expr, stdin)?);
            let d = realize_hodge(&nf, &s.atlas.diamond_table())?;
            let text = if cli.quiet {
                format!("{}\n", d.pretty())
            } else {
                format!("{nf}\n{}\n", d.pretty())
            };
            s.emit("hodge", json!(expr), d.to_json(), text)
        }
        Command::Betti { expr } => {
            let nf = normalize(&s.parse(expr, stdin)?);
            let (ranks, text) = betti_ranks(s, &nf)?;
            s.emit("betti", json!(expr), json!(ranks), format!("({text})\n"))
        }
        Command::Euler { expr } => {
            let nf = normalize(&s.parse(expr, stdin)?);
            let chi = euler(s, &nf)?;
            s.emit("euler", json!(expr), json!(chi), format!("{chi}\n"))
        }
        Command::Dim { expr } => {
            let e = s.parse(expr, stdin)?;
            let d = dim_of(&e, s.atlas.registry())?;
            s.emit("dim", json!(expr), json!(d), format!("{d}\n"))
        }
        Command::Solve { m1, m2, rhs, unknown } => {
            let factor: TatePolynomial = m1.parse().map_err(|e: Error| Failure::Input(e.to_string()))?;
            let m2_nf = normalize(&s.parse(m2, stdin)?);
            let rhs_nf = normalize(&s.parse(rhs, stdin)?);
            let sol = solve_tensor_factor(unknown, &factor, &m2_nf, &rhs_nf)?;
            let text = if cli.quiet {
                format!("{}\n", sol.value)
            } else {
                format!("{unknown} = {}\nnote: {}\n", sol.value, sol.provenance)
            };
            s.emit(
                "solve",
                json!({"m1": m1, "m2": m2, "rhs": rhs, "unknown": unknown}),
                serde_json::to_value(&sol).expect("solution serializes"),
                text,
            )
        }
        Command::VerifyGm6 => return verify_gm6(cli),
        Command::AtlasDump => {
            let dump = s.atlas.dump_json();
            if cli.json {
                s.emit("atlas-dump", Value::Null, dump, String::new())
            } else {
                serde_json::to_string_pretty(&dump).expect("atlas serializes") + "\n"
            }
        }
    };
    Ok(Outcome::ok(out))
}

fn betti_ranks(s: &Session<'_>, nf: &NormalForm) -> Result<(Value, String), Failure> {
    match realize_hodge(nf, &s.atlas.diamond_table()) {
        Ok(d) => {
            let b = d.betti();
            let text = b.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
            Ok((json!(b), text))
        }
        Err(Error::MissingRealization(_)) => {
            let p = realize_profile(nf, &s.profiles()?)?;
            let ranks: Vec<String> = p.degrees().iter().map(|d| d.rank.to_string()).collect();
            Ok((json!(ranks), ranks.join(",")))
        }
        Err(e) => Err(e.into()),
    }
}

fn euler(s: &Session<'_>, nf: &NormalForm) -> Result<i64, Failure> {
    match realize_hodge(nf, &s.atlas.diamond_table()) {
        Ok(d) => Ok(d.euler()),
        Err(Error::MissingRealization(_)) => Ok(realize_profile(nf, &s.profiles()?)?.euler_characteristic()?),
        Err(e) => Err(e.into()),
    }
}

fn verify_gm6(cli: &Cli) -> Result<Outcome, Failure> {
    let scenario = GmScenario::canonical()?;
    let report = gm::run(&scenario);
    let code = if report.ok() { EXIT_OK } else { EXIT_FAILED };
    let stdout = if cli.json {
        serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
    } else if cli.quiet {
        String::new()
    } else {
        report.to_text()
    };
    Ok(Outcome {
        code,
        stdout,
        stderr: String::new(),
    })
}
