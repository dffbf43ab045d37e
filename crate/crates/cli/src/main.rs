mod request;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::Value;

use cubictk_core::riemann_roch::BranchData;
use cubictk_core::Error;
use request::{Request, RunReport};

/// Exact cubic-structure, Riemann-Roch and Stickelberger computations.
#[derive(Parser)]
#[command(name = "cubictk", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Checks that λ_{s_n}(α) satisfies the n-cubic laws.
    CheckCubic {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        elem: PathBuf,
    },
    /// Exponent bound for the kernel of the cubic restriction map.
    KernelBound {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        assume_vandiver: bool,
    },
    /// Class group of Z[ζ_r], certified against h⁻.
    Classgroup {
        #[arg(long)]
        r: u64,
        #[arg(long)]
        invert_two: bool,
        /// Factor-base norm bound.
        #[arg(long)]
        bound: Option<u64>,
    },
    /// The prime P_χ above p and its class.
    Pchi(PrimeArgs),
    /// Coefficients of θ₂, optionally applied to [P_χ].
    Theta2 {
        #[command(flatten)]
        prime: PrimeArgs,
        #[arg(long, value_enum)]
        apply_to: Option<Target>,
    },
    /// Irregular indices k with r | B_k.
    Herbrand {
        #[arg(long)]
        r: u64,
    },
    /// Relative class number h⁻ of Q(ζ_r).
    Hminus {
        #[arg(long)]
        r: u64,
    },
    /// Gauss-sum identities and prime valuations.
    Gauss {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        r: u64,
    },
    /// B_k, optionally reduced mod a prime.
    Bernoulli {
        #[arg(long)]
        k: usize,
        #[arg(long = "mod")]
        modulus: Option<u64>,
    },
    /// T_π(χ) for a branch-data file.
    Tpi {
        #[arg(long)]
        branch: PathBuf,
        /// Character exponents, comma separated for non-cyclic groups.
        #[arg(long, value_delimiter = ',', required = true)]
        chi_exponent: Vec<u64>,
    },
    /// Local exponents of the main-theorem idèle.
    MainthmIdele {
        #[arg(long)]
        branch: PathBuf,
        #[arg(long)]
        squared: bool,
    },
    /// Alternating telescoping sum in n variables of degree q.
    Telescope {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u32,
    },
    /// Steinitz class of the χ-part of the weight-2 lattice.
    ModularClass {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        r: u64,
        /// Evaluate every character of order r, by two paths.
        #[arg(long)]
        sweep: bool,
    },
    /// Class relation between θ₂[P_χ], Sha and Mordell-Weil classes.
    BsdCheck {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        r: u64,
        #[arg(long)]
        sha: PathBuf,
        #[arg(long)]
        mw: PathBuf,
    },
    /// Runs the acceptance suite.
    Acceptance {
        #[arg(long)]
        only: Option<u32>,
    },
    /// Re-runs the request recorded in a report.
    Replay {
        #[arg(long)]
        report: PathBuf,
    },
}

#[derive(Args)]
struct PrimeArgs {
    #[arg(long)]
    r: u64,
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 1)]
    chi_exponent: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Pchi,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum GroupFile {
    Factors(Vec<u64>),
    Tagged { invariant_factors: Vec<u64> },
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Number {
    Int(i64),
    Text(String),
}

impl Number {
    fn text(self) -> String {
        match self {
            Number::Int(n) => n.to_string(),
            Number::Text(s) => s,
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ClassFile {
    Coords(Vec<Number>),
    Tagged { coords: Vec<Number> },
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn read_group(path: &Path) -> Result<Vec<u64>, Error> {
    Ok(match read_json::<GroupFile>(path)? {
        GroupFile::Factors(f) | GroupFile::Tagged { invariant_factors: f } => f,
    })
}

fn read_class(path: &Path) -> Result<Vec<String>, Error> {
    Ok(match read_json::<ClassFile>(path)? {
        ClassFile::Coords(c) | ClassFile::Tagged { coords: c } => c.into_iter().map(Number::text).collect(),
    })
}

fn read_branch(path: &Path) -> Result<BranchData, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    BranchData::from_json(&text)
}

fn resolve(cmd: Command) -> Result<Request, Error> {
    Ok(match cmd {
        Command::CheckCubic { group, n, elem } => {
            let elem: Vec<(Vec<u64>, Number)> = read_json(&elem)?;
            Request::CheckCubic {
                group: read_group(&group)?,
                n,
                elem: elem.into_iter().map(|(g, c)| (g, c.text())).collect(),
            }
        }
        Command::KernelBound { group, n, assume_vandiver } => {
            Request::KernelBound { group: read_group(&group)?, n, assume_vandiver }
        }
        Command::Classgroup { r, invert_two, bound } => Request::Classgroup { r, invert_two, bound },
        Command::Pchi(a) => Request::Pchi { r: a.r, p: a.p, chi_exponent: a.chi_exponent },
        Command::Theta2 { prime, apply_to } => Request::Theta2 {
            r: prime.r,
            p: prime.p,
            apply_to: apply_to.map(|Target::Pchi| "pchi".to_string()),
            chi_exponent: prime.chi_exponent,
        },
        Command::Herbrand { r } => Request::Herbrand { r },
        Command::Hminus { r } => Request::Hminus { r },
        Command::Gauss { p, r } => Request::Gauss { p, r },
        Command::Bernoulli { k, modulus } => Request::Bernoulli { k, modulus },
        Command::Tpi { branch, chi_exponent } => Request::Tpi { branch: read_branch(&branch)?, chi_exponent },
        Command::MainthmIdele { branch, squared } => Request::MainthmIdele { branch: read_branch(&branch)?, squared },
        Command::Telescope { n, q } => Request::Telescope { n, q },
        Command::ModularClass { p, r, sweep } => Request::ModularClass { p, r, sweep },
        Command::BsdCheck { p, r, sha, mw } => Request::BsdCheck { p, r, sha: read_class(&sha)?, mw: read_class(&mw)? },
        Command::Acceptance { only } => Request::Acceptance { only },
        Command::Replay { report } => {
            let v: Value = read_json(&report)?;
            let req = v.get("request").cloned().ok_or_else(|| Error::Input("report has no request".into()))?;
            serde_json::from_value(req).map_err(|e| Error::Input(format!("request: {e}")))?
        }
    })
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Input(_) => 2,
        Error::Math(_) | Error::Unknown(_) | Error::Budget(_) => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let start = Instant::now();
    let outcome = resolve(cli.command).and_then(|req| req.run());
    eprintln!("elapsed: {:.3}s", start.elapsed().as_secs_f64());
    match outcome {
        Ok(report) => {
            print_report(&report);
            ExitCode::from(if report.passed { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("cubictk: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn print_report(report: &RunReport) {
    println!("{}", serde_json::to_string_pretty(report).expect("report serializes"));
}
