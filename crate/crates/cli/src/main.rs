//! `lieobs`: obstruction classes of Lie algebra couplings from the command line.
//!
//! Exit codes: 0 success, 1 invalid input, 2 internal invariant violation,
//! 3 I/O or parse error.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use lieobs_core::ce::{self, Cochain};
use lieobs_core::coup;
use lieobs_core::derivations::DerivationSpaces;
use lieobs_core::json::{self, CoupElementJson, CouplingJson, LieAlgebraJson, TModuleJson};
use lieobs_core::obstruction;
use lieobs_core::rational::{format_rational, format_vector, parse_rational, unit, Rational};
use lieobs_core::Error;

#[derive(Parser, Debug)]
#[command(
    name = "lieobs",
    version,
    about = "Obstruction classes for couplings of Lie algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Output {
    /// Emit a readable summary instead of JSON.
    #[arg(long, conflicts_with = "json")]
    text: bool,
    /// Emit JSON (the default).
    #[arg(long)]
    json: bool,
    /// Write the report to a file instead of stdout.
    #[arg(short, long, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate an algebra and report its center, Der, Inn and Out.
    Analyze {
        algebra: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Validate a coupling.
    CouplingCheck {
        coupling: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Compute the obstruction class of a coupling.
    Obstruction {
        coupling: PathBuf,
        #[command(flatten)]
        out: Output,
        /// Add a non-central element to every value of Ω before the central check.
        #[arg(long, hide = true)]
        perturb_omega: bool,
    },
    /// Build the extension algebra when the obstruction vanishes.
    Extend {
        coupling: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Combine two elements with scalars α, β and check linearity.
    Combine {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, allow_hyphen_values = true, value_parser = rational_arg)]
        alpha: Rational,
        #[arg(long, allow_hyphen_values = true, value_parser = rational_arg)]
        beta: Rational,
        #[command(flatten)]
        out: Output,
    },
    /// Betti number of a module in one degree.
    Cohomology {
        module: PathBuf,
        #[arg(long)]
        degree: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Recompute the class under seeded re-choices of (∇, Ω).
    Independence {
        coupling: PathBuf,
        #[arg(long, default_value_t = 25)]
        trials: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Debug)]
enum Failure {
    Io(PathBuf, io::Error),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Io(..) | Failure::Lib(Error::Parse(_)) => 3,
            Failure::Lib(e) if e.is_internal() => 2,
            Failure::Lib(_) => 1,
        }
    }

    fn report(&self) {
        match self {
            Failure::Io(path, e) => eprintln!("lieobs: {}: {e}", path.display()),
            Failure::Lib(e) => {
                eprintln!("lieobs: {e}");
                if let Some(detail) = json::error_report(e).get("detail") {
                    eprintln!("{}", serde_json::to_string_pretty(detail).expect("serializable"));
                }
            }
        }
    }
}

type Outcome = Result<(), Failure>;

fn read<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))?;
    Ok(json::from_str(&text)?)
}

fn emit(out: &Output, value: &Value, text: impl FnOnce() -> String) -> Outcome {
    let body = if out.text {
        text()
    } else {
        serde_json::to_string_pretty(value).expect("serializable") + "\n"
    };
    match &out.output {
        Some(path) => fs::write(path, body).map_err(|e| Failure::Io(path.clone(), e)),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn class_text(v: &Value) -> String {
    match v.as_array() {
        Some(a) => a.iter().filter_map(Value::as_str).collect::<Vec<_>>().join(", "),
        None => String::new(),
    }
}

fn analyze(path: &Path, out: &Output) -> Outcome {
    let g = read::<LieAlgebraJson>(path)?.to_algebra()?.validated()?;
    let spaces = DerivationSpaces::new(&g)?;
    let report = json::analyze_report(&g, &spaces);
    emit(out, &report, || {
        format!(
            "center {}, der {}, inn {}, out {}\n",
            g.center().dim(),
            spaces.der().dim(),
            spaces.inn().dim(),
            spaces.out_dim()
        )
    })
}

fn coupling_check(path: &Path, out: &Output) -> Outcome {
    let c = read::<CouplingJson>(path)?.to_coupling()?;
    emit(out, &json::coupling_report(&c), || {
        format!(
            "valid coupling: base {}, fiber {}, center {}, out {}\n",
            c.base().dim(),
            c.fiber().dim(),
            c.center().dim(),
            c.spaces().out_dim()
        )
    })
}

fn obstruction_cmd(path: &Path, out: &Output, perturb: bool) -> Outcome {
    let c = read::<CouplingJson>(path)?.to_coupling()?;
    let result = if perturb {
        let mut o = obstruction::lift_omega(&c, &obstruction::lift_connection(&c))?;
        let n = c.fiber().dim();
        if let Some(k) = (0..n).find(|&k| !c.fiber().is_central(&unit(n, k))) {
            let bump = Cochain::from_fn(c.base().dim(), 2, n, |_| unit(n, k));
            o.omega = o.omega.add(&bump);
        }
        obstruction::obstruction_class_with(&c, &o)?
    } else {
        obstruction::obstruction_class(&c)?
    };
    let report = json::obstruction_report(&result);
    emit(out, &report, || {
        format!(
            "center {}, betti3 {}, class [{}], {}\n",
            result.zmodule.dim(),
            result.betti3,
            class_text(&report["class"]),
            if result.trivial { "trivial" } else { "nontrivial" }
        )
    })
}

fn extend(path: &Path, out: &Output) -> Outcome {
    let c = read::<CouplingJson>(path)?.to_coupling()?;
    match obstruction::construct_extension(&c)? {
        Some(e) => emit(out, &json::extension_report(&e), || {
            format!("extension of dimension {} constructed\n", e.total.dim())
        }),
        None => {
            let class = obstruction::obstruction_class(&c)?.class;
            emit(out, &json::refusal_report(&class), || {
                format!(
                    "not extended: class [{}]\n",
                    format_vector(class.coordinates()).join(", ")
                )
            })
        }
    }
}

fn combine(first: &Path, second: &Path, alpha: &Rational, beta: &Rational, out: &Output) -> Outcome {
    let c1 = read::<CoupElementJson>(first)?.to_element()?;
    let c2 = read::<CoupElementJson>(second)?.to_element()?;
    let r = coup::combine(&c1, &c2, alpha, beta)?;
    let report = json::combine_report(alpha, beta, &r);
    emit(out, &report, || {
        format!(
            "alpha {}, beta {}: class3 [{}], linearity pass\n",
            format_rational(alpha),
            format_rational(beta),
            class_text(&report["class3"])
        )
    })
}

fn cohomology(path: &Path, degree: usize, out: &Output) -> Outcome {
    let m = read::<TModuleJson>(path)?.to_module()?;
    let betti = ce::cohomology(&m, degree)?.betti();
    emit(out, &json::cohomology_report(degree, betti), || {
        format!("H^{degree}: dimension {betti}\n")
    })
}

fn independence(path: &Path, trials: usize, seed: u64, out: &Output) -> Outcome {
    let c = read::<CouplingJson>(path)?.to_coupling()?;
    let r = obstruction::verify_independence(&c, trials, seed)?;
    emit(out, &json::independence_report(trials, seed, &r), || {
        format!(
            "{} trials, seed {}: {}\n",
            trials,
            seed,
            if r.all_equal() {
                "all classes equal"
            } else {
                "classes differ"
            }
        )
    })
}

fn run(cli: Cli) -> Outcome {
    match &cli.command {
        Command::Analyze { algebra, out } => analyze(algebra, out),
        Command::CouplingCheck { coupling, out } => coupling_check(coupling, out),
        Command::Obstruction {
            coupling,
            out,
            perturb_omega,
        } => obstruction_cmd(coupling, out, *perturb_omega),
        Command::Extend { coupling, out } => extend(coupling, out),
        Command::Combine {
            first,
            second,
            alpha,
            beta,
            out,
        } => combine(first, second, alpha, beta, out),
        Command::Cohomology { module, degree, out } => cohomology(module, *degree, out),
        Command::Independence {
            coupling,
            trials,
            seed,
            out,
        } => independence(coupling, *trials, *seed, out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            f.report();
            ExitCode::from(f.exit_code())
        }
    }
}
