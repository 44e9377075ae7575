//! Command-line front end. [`execute`] does the work and returns what would
//! be printed; [`run`] prints it.
//!
//! Exit codes: 0 when a value is produced or a checked property holds, 1
//! when a checked property fails, 2 on any error.

use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::companion::{
    check_pq_duality_from, companion_matrix, diagonal_connections, diagonalize, gauge_b, nabla,
    nabla_hat, object_of_from, Convention,
};
use crate::connection::{ConnectionJson, ExponentialFactor, FactorJson, ObjectJson, FACTOR_VAR};
use crate::diffop::{ks_dual_operator, ks_operator, verify_rho_identity};
use crate::fourier::fourier_factor_from;
use crate::kac_schwarz::{
    check_wq_duality_from, ks_connection_from, ks_dual_connection_from, DualityReport, Polynomial,
};
use crate::series::{parse_poly, parse_series, GRAMMAR};
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILS: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "pqfourier",
    version,
    about = "Exact formal classes, Fourier transforms and (p,q)-duality checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fourier transform of an exponential factor E[f, r]
    Fourier {
        /// The exponent f, a Puiseux polynomial in one variable
        #[arg(long = "f", allow_hyphen_values = true)]
        f: String,
        /// Ramification to read f at (a multiple of its own)
        #[arg(long)]
        ram: Option<u32>,
        #[command(flatten)]
        common: Common,
    },
    /// Formal class at infinity of the Kac-Schwarz operator of (W, Q)
    Ks(PairArgs),
    /// Formal class at infinity of the dual operator of (W, Q)
    KsDual(PairArgs),
    /// Check the (W, Q) duality
    Duality {
        #[command(flatten)]
        pair: PairArgs,
        /// Compute both sides even for even deg W
        #[arg(long)]
        force: bool,
    },
    /// The companion matrix M(p, q) and the gauge B(p, q)
    Companion {
        #[command(flatten)]
        pq: PqArgs,
        #[arg(long)]
        json: bool,
    },
    /// Formal diagonalization of the (p, q) matrix connection
    Diag {
        #[command(flatten)]
        pq: PqArgs,
        /// Use the hatted connection
        #[arg(long)]
        hat: bool,
        #[arg(long, default_value = "dual", value_parser = parse_convention)]
        convention: Convention,
        #[command(flatten)]
        common: Common,
    },
    /// Check the (p, q) duality on matrix connections
    PqDuality {
        #[command(flatten)]
        pq: PqArgs,
        #[arg(long)]
        force: bool,
        #[arg(long, default_value = "dual", value_parser = parse_convention)]
        convention: Convention,
        #[command(flatten)]
        common: Common,
    },
    /// Check the conjugation identity for the monomial pair (z^p, z^q)
    RhoCheck {
        #[command(flatten)]
        pq: PqArgs,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args, Debug)]
struct Common {
    /// Emit JSON
    #[arg(long)]
    json: bool,
    /// Initial working term count; raised automatically when short
    #[arg(long, value_parser = clap::value_parser!(i64).range(8..))]
    precision: Option<i64>,
}

#[derive(Args, Debug)]
struct PairArgs {
    /// Polynomial W(z)
    #[arg(long, allow_hyphen_values = true)]
    w: String,
    /// Polynomial Q(z)
    #[arg(long, allow_hyphen_values = true)]
    q: String,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct PqArgs {
    #[arg(long)]
    p: u32,
    #[arg(long)]
    q: u32,
}

fn parse_convention(s: &str) -> std::result::Result<Convention, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// What a command printed and how it exited.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn checked(holds: bool, stdout: String) -> Self {
        Outcome {
            code: if holds { EXIT_OK } else { EXIT_FAILS },
            stdout,
            stderr: String::new(),
        }
    }

    fn error(e: &Error) -> Self {
        let mut stderr = format!("error: {e}\n");
        if matches!(e, Error::Parse { .. }) {
            let _ = writeln!(stderr, "grammar: {GRAMMAR}");
        }
        Outcome {
            code: EXIT_ERROR,
            stdout: String::new(),
            stderr,
        }
    }
}

/// Run with `argv` (program name first) and print the result.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let out = execute(argv);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    out.code
}

pub fn execute<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome::ok(text);
            }
            return Outcome {
                code: EXIT_ERROR,
                stdout: String::new(),
                stderr: format!("{text}\nseries grammar: {GRAMMAR}\n"),
            };
        }
    };
    dispatch(cli.command).unwrap_or_else(|e| Outcome::error(&e))
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string(v).expect("JSON shapes serialize");
    s.push('\n');
    s
}

fn poly(text: &str) -> Result<Polynomial> {
    parse_poly(text, 'z')
}

fn dispatch(command: Command) -> Result<Outcome> {
    match command {
        Command::Fourier { f, ram, common } => fourier(&f, ram, &common),
        Command::Ks(pair) => ks(&pair, false),
        Command::KsDual(pair) => ks(&pair, true),
        Command::Duality { pair, force } => {
            let report = check_wq_duality_from(
                &poly(&pair.w)?,
                &poly(&pair.q)?,
                force,
                pair.common.precision,
            )?;
            Ok(report_outcome(&report, pair.common.json))
        }
        Command::Companion { pq, json } => companion(&pq, json),
        Command::Diag {
            pq,
            hat,
            convention,
            common,
        } => diag(&pq, hat, convention, &common),
        Command::PqDuality {
            pq,
            force,
            convention,
            common,
        } => {
            let report = check_pq_duality_from(pq.p, pq.q, force, convention, common.precision)?;
            Ok(report_outcome(&report, common.json))
        }
        Command::RhoCheck { pq, json } => {
            let holds = verify_rho_identity(pq.p, pq.q)?;
            let text = if json {
                to_json(&json!({ "p": pq.p, "q": pq.q, "holds": holds }))
            } else {
                format!("rho identity for (z^{}, z^{}): holds={holds}\n", pq.p, pq.q)
            };
            Ok(Outcome::checked(holds, text))
        }
    }
}

fn fourier(f: &str, ram: Option<u32>, common: &Common) -> Result<Outcome> {
    let series = parse_series(f, FACTOR_VAR)?;
    if !series.is_exact() {
        return Err(Error::Invalid(
            "the exponent of a factor must be exact".into(),
        ));
    }
    let series = match ram {
        Some(0) => return Err(Error::Invalid("ramification must be positive".into())),
        Some(r) if r % series.ramification() != 0 => {
            return Err(Error::Invalid(format!(
                "{f} has exponents in (1/{})Z, not in (1/{r})Z",
                series.ramification()
            )))
        }
        Some(r) => series.with_ramification(r),
        None => series,
    };
    let input = ExponentialFactor::new(series.with_var(FACTOR_VAR))?;
    let out = fourier_factor_from(&input, common.precision)?;
    Ok(Outcome::ok(if common.json {
        to_json(&FactorJson::from(&out.value))
    } else {
        format!("{input} ↦ {}\nterms: {}\n", out.value, out.terms)
    }))
}

fn ks(pair: &PairArgs, dual: bool) -> Result<Outcome> {
    let (w, q) = (poly(&pair.w)?, poly(&pair.q)?);
    let start = pair.common.precision;
    let (op, conn) = if dual {
        (
            ks_dual_operator(&w, &q)?,
            ks_dual_connection_from(&w, &q, start)?,
        )
    } else {
        (ks_operator(&w, &q)?, ks_connection_from(&w, &q, start)?)
    };
    let factor = conn.value.to_factor()?;
    Ok(Outcome::ok(if pair.common.json {
        to_json(&json!({
            "operator": op.to_string(),
            "connection": ConnectionJson::from(&conn.value),
            "factor": FactorJson::from(&factor),
            "terms": conn.terms,
        }))
    } else {
        format!(
            "operator: {op}\nconnection: {}\nclass: {factor}\nterms: {}\n",
            conn.value, conn.terms
        )
    }))
}

fn report_outcome(report: &DualityReport, json: bool) -> Outcome {
    let text = if json {
        to_json(&report.to_json())
    } else {
        let mut s = format!(
            "holds={}\nlhs: {}\nrhs: {}\n",
            report.holds, report.lhs, report.rhs
        );
        if let Some(t) = &report.twist {
            let t: Vec<String> = t.iter().map(ToString::to_string).collect();
            let _ = writeln!(s, "twist: {}", t.join(", "));
        }
        let _ = writeln!(s, "precision: {}", report.precision);
        for n in &report.notes {
            let _ = writeln!(s, "note: {n}");
        }
        s
    };
    Outcome::checked(report.holds, text)
}

fn companion(pq: &PqArgs, json: bool) -> Result<Outcome> {
    let m = companion_matrix(pq.p, pq.q)?;
    let b = gauge_b(pq.p, pq.q)?;
    Ok(Outcome::ok(if json {
        to_json(
            &json!({ "p": pq.p, "q": pq.q, "matrix": m.to_text_rows(), "gauge": b.to_text_rows() }),
        )
    } else {
        format!("M({p},{q}) = {m}\nB({p},{q}) = {b}\n", p = pq.p, q = pq.q)
    }))
}

fn diag(pq: &PqArgs, hat: bool, convention: Convention, common: &Common) -> Result<Outcome> {
    let mc = if hat {
        nabla_hat(pq.p, pq.q)?
    } else {
        nabla(pq.p, pq.q)?
    };
    let d = diagonalize(&mc, common.precision)?;
    let verified = d.verify()?;
    let conns = diagonal_connections(&mc, convention, common.precision)?;
    let object = object_of_from(&mc, convention, common.precision)?;
    let text = if common.json {
        let conns: Vec<ConnectionJson> = conns.iter().map(ConnectionJson::from).collect();
        to_json(&json!({
            "ramification": mc.ramification(),
            "sheared": d.sheared,
            "terms": d.terms,
            "gammas": d.gammas.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "connections": conns,
            "verified": verified,
            "object": ObjectJson::from(&object),
        }))
    } else {
        let mut s = format!(
            "connection: {mc}\nsheared: {}\nterms: {}\n",
            d.sheared, d.terms
        );
        for (k, (g, c)) in d.gammas.iter().zip(&conns).enumerate() {
            let _ = writeln!(s, "γ_{k} = {g}\n    {c}");
        }
        let _ = writeln!(s, "residual vanishes: {verified}\nclass: {object}");
        s
    };
    Ok(Outcome::checked(verified, text))
}
