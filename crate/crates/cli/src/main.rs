use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use newton_strata::{crosssec, fqoracle, isocrystal, preset, strata, CoVec, Error, RootDatum};
use serde_json::json;

#[derive(Parser, Debug)]
#[command(name = "newton-strata", version, about = "Newton strata of the Coxeter-type cross-section")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Clone, PartialEq, Eq)]
enum Command {
    /// Stratum table of B(G, mu), checked against the brute-force enumeration
    Bgmu(CommonArgs),
    /// Stratum shapes as JSON
    Shapes(CommonArgs),
    /// Hasse diagram of B(G, mu)
    Hasse(CommonArgs),
    /// Both q-identities
    Identity(CommonArgs),
    /// Finite-field tally for split GL_n
    Oracle(CommonArgs),
    /// Beta roots and nilpotence depth of the Cross operator
    Cross(CommonArgs),
}

#[derive(clap::Args, Debug, Clone, PartialEq, Eq)]
struct CommonArgs {
    /// Preset name, e.g. GL3, SL2, B2, 2A3, 3D4
    #[arg(long)]
    group: String,
    /// Comma-separated cocharacter coordinates
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    mu: Vec<i64>,
    /// Prime residue field size (oracle)
    #[arg(long)]
    q: Option<u64>,
    /// Truncation level (oracle)
    #[arg(long = "M")]
    level: Option<usize>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write the report here instead of standard output
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Tsv,
    Json,
    Dot,
}

enum Failure {
    Config(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::UnknownPreset(_)
            | Error::IncompatibleTwist(_)
            | Error::InvalidDatum(_)
            | Error::IndexOutOfRange { .. }
            | Error::NonIntegral(_)
            | Error::NonDominant(_)
            | Error::Dimension { .. }
            | Error::NotPrime(_)
            | Error::LevelTooSmall { .. }
            | Error::Parse(_) => Failure::Config(e.to_string()),
            _ => Failure::Verification(e.to_string()),
        }
    }
}

struct Report {
    text: String,
    ok: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, args) = match &cli.command {
        Command::Bgmu(a) => ("bgmu", a),
        Command::Shapes(a) => ("shapes", a),
        Command::Hasse(a) => ("hasse", a),
        Command::Identity(a) => ("identity", a),
        Command::Oracle(a) => ("oracle", a),
        Command::Cross(a) => ("cross", a),
    };
    match run(name, args) {
        Ok(report) => {
            if let Some(path) = &args.output {
                if let Err(e) = std::fs::write(path, &report.text) {
                    return fail(2, "io", &e.to_string());
                }
            } else {
                print!("{}", report.text);
            }
            if report.ok {
                ExitCode::SUCCESS
            } else {
                fail(1, "verification", &format!("{name} checks failed"))
            }
        }
        Err(Failure::Config(msg)) => fail(2, "config", &msg),
        Err(Failure::Verification(msg)) => fail(1, "verification", &msg),
    }
}

fn fail(code: u8, kind: &str, msg: &str) -> ExitCode {
    eprintln!("{}", json!({ "status": code, "kind": kind, "message": msg }));
    ExitCode::from(code)
}

fn run(command: &str, args: &CommonArgs) -> Result<Report, Failure> {
    let datum = preset(&args.group)?;
    if args.mu.len() != datum.rank() {
        return Err(Error::Dimension { expected: datum.rank(), got: args.mu.len() }.into());
    }
    let mu = CoVec::from_ints(&args.mu);
    match command {
        "bgmu" => bgmu(&datum, &mu, format(args, &[Format::Tsv, Format::Json])?),
        "shapes" => shapes(&datum, &mu, format(args, &[Format::Json])?),
        "hasse" => hasse(&datum, &mu, format(args, &[Format::Dot, Format::Json])?),
        "identity" => identity(&datum, &mu, format(args, &[Format::Json, Format::Tsv])?),
        "oracle" => oracle(&datum, args, format(args, &[Format::Tsv, Format::Json])?),
        "cross" => cross(&datum, format(args, &[Format::Tsv, Format::Json])?),
        _ => unreachable!(),
    }
}

/// The requested format if allowed, else the first allowed one.
fn format(args: &CommonArgs, allowed: &[Format]) -> Result<Format, Failure> {
    match args.format {
        None => Ok(allowed[0]),
        Some(f) if allowed.contains(&f) => Ok(f),
        Some(f) => Err(Failure::Config(format!("format {f:?} not available for this command"))),
    }
}

fn to_json(v: serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("report serializes");
    s.push('\n');
    s
}

fn bgmu(datum: &RootDatum, mu: &CoVec, fmt: Format) -> Result<Report, Failure> {
    let rows = strata::stratum_table(datum, mu)?;
    let bound = isocrystal::default_bound(datum, mu);
    let brute = isocrystal::brute_force_bgmu(datum, mu, bound)?;
    let ok = brute.len() == rows.len() && brute.iter().zip(&rows).all(|(b, r)| *b == r.shape.class);
    let text = match fmt {
        Format::Json => to_json(json!({ "group": datum.name(), "mu": mu, "classes": rows, "brute_force_agrees": ok })),
        _ => strata::stratum_table_tsv(&rows),
    };
    Ok(Report { text, ok })
}

fn shapes(datum: &RootDatum, mu: &CoVec, _fmt: Format) -> Result<Report, Failure> {
    let mut out = Vec::new();
    let mut ok = true;
    for b in isocrystal::enumerate_bgmu(datum, mu)? {
        let s = crosssec::stratum_shape(datum, mu, &b)?;
        ok &= s.codim() >= 0;
        out.push(s);
    }
    Ok(Report { text: to_json(json!(out)), ok })
}

fn hasse(datum: &RootDatum, mu: &CoVec, fmt: Format) -> Result<Report, Failure> {
    let classes = isocrystal::enumerate_bgmu(datum, mu)?;
    let edges = strata::hasse_diagram(datum, &classes);
    let mut ok = true;
    for &(lo, hi) in &edges {
        ok &= strata::length_formula(datum, mu, &classes[hi], &classes[lo])? == 1;
    }
    let text = match fmt {
        Format::Json => to_json(json!({
            "classes": classes,
            "edges": edges.iter().map(|&(lo, hi)| json!({ "lower": lo, "upper": hi })).collect::<Vec<_>>(),
        })),
        _ => strata::hasse_dot(datum, mu)?,
    };
    Ok(Report { text, ok })
}

fn identity(datum: &RootDatum, mu: &CoVec, fmt: Format) -> Result<Report, Failure> {
    let full = strata::verify_identity_full(datum, mu)?;
    let irr = strata::verify_identity_irr(datum, mu)?;
    let ok = full.ok && irr.as_ref().is_none_or(|r| r.ok);
    let text = match fmt {
        Format::Tsv => {
            let mut s = String::from("identity\tsum\tok\n");
            let _ = writeln!(s, "full\t{}\t{}", full.sum, full.ok);
            match &irr {
                Some(r) => {
                    let _ = writeln!(s, "irreducible\t{}\t{}", r.sum, r.ok);
                }
                None => s.push_str("irreducible\tnot-applicable\ttrue\n"),
            }
            s
        }
        _ => to_json(json!({ "full": full, "irreducible": irr })),
    };
    Ok(Report { text, ok })
}

fn oracle(datum: &RootDatum, args: &CommonArgs, fmt: Format) -> Result<Report, Failure> {
    let n = datum.rank();
    if args.group.to_ascii_uppercase() != format!("GL{n}") {
        return Err(Failure::Config("the oracle only supports split GL_n presets".into()));
    }
    let p = args.q.ok_or_else(|| Failure::Config("--q is required".into()))?;
    let level = args.level.ok_or_else(|| Failure::Config("--M is required".into()))?;
    let report = fqoracle::tally_strata(n, &args.mu, p, level)?;
    let text = match fmt {
        Format::Json => to_json(json!(report)),
        _ => report.to_tsv(),
    };
    Ok(Report { text, ok: report.ok })
}

fn cross(datum: &RootDatum, fmt: Format) -> Result<Report, Failure> {
    let betas = crosssec::beta_roots(datum);
    let depth = crosssec::cross_nilpotence_depth(datum)?;
    let ok = depth <= datum.positive_roots().len();
    let text = match fmt {
        Format::Json => to_json(json!({ "group": datum.name(), "beta": betas, "depth": depth })),
        _ => {
            let mut s = String::from("i\tbeta\n");
            for (i, b) in betas.iter().enumerate() {
                let coeffs: Vec<String> = b.iter().map(i64::to_string).collect();
                let _ = writeln!(s, "{}\t{}", i + 1, coeffs.join(","));
            }
            let _ = writeln!(s, "depth\t{depth}");
            s
        }
    };
    Ok(Report { text, ok })
}
