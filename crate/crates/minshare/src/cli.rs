//! Command-line front end over files: entropy evaluation, distribution
//! tables, share/combine round trips, and verification reports.
//!
//! Exit codes are part of the interface:
//!
//! | code | meaning                                             |
//! |------|-----------------------------------------------------|
//! | 0    | success                                             |
//! | 2    | invalid parameters or malformed input               |
//! | 3    | entropy order not admissible for the measure        |
//! | 4    | the supplied shares do not form a qualified set     |
//! | 5    | a requested verification check failed               |
//!
//! Probabilities and orders are written as exact rationals (`3/4`, `1/2`,
//! `2`); decimals are rejected so no value is silently approximated. All
//! randomness comes from an explicit `--seed`, making every invocation
//! reproducible byte for byte.

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde_json::json;

use crate::access::AccessStructure;
use crate::dist::JointDist;
use crate::entropy::{
    avg_cond_min_entropy, cond_renyi_arimoto, renyi_entropy, worst_cond_min_entropy, Order,
};
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::rational::{self, Rational};
use crate::schemes::{
    general_combine, general_joint_distribution, general_share, pi1_combine,
    pi1_joint_distribution, pi1_share, pi2_combine, pi2_distribution_table, pi2_joint_distribution,
    pi2_share, GeneralParams, Pi1Params, Pi2Params, SchemeParams, ShareBundle,
};
use crate::verify;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_ORDER: i32 = 3;
pub const EXIT_NOT_QUALIFIED: i32 = 4;
pub const EXIT_CHECK_FAILED: i32 = 5;

/// Parse the process arguments, run the selected command, and return the
/// process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(&cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_of(&e)
        }
    }
}

fn exit_code_of(e: &Error) -> i32 {
    match e {
        Error::UnsupportedOrder(_) => EXIT_ORDER,
        Error::NotQualified(_) => EXIT_NOT_QUALIFIED,
        _ => EXIT_USAGE,
    }
}

#[derive(Parser)]
#[command(
    name = "minshare",
    version,
    about = "Exact-arithmetic secret sharing with entropy-based verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Entropy of a joint-distribution file, unconditional or conditional.
    Entropy(EntropyArgs),
    /// Print the threshold construction's distribution table as CSV.
    Table(TableArgs),
    /// Split a secret into a share bundle (JSON).
    Share(ShareArgs),
    /// Recover the secret from a share-bundle file.
    Combine(CombineArgs),
    /// Run verification checks against a scheme's exact joint law.
    Verify(VerifyArgs),
    /// Emit security and ideality reports as JSON, without pass/fail gating.
    Report(ReportArgs),
}

fn dispatch(command: &Command) -> Result<i32> {
    match command {
        Command::Entropy(a) => cmd_entropy(a),
        Command::Table(a) => cmd_table(a),
        Command::Share(a) => cmd_share(a),
        Command::Combine(a) => cmd_combine(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Report(a) => cmd_report(a),
    }
}

// ---------------------------------------------------------------------------
// entropy
// ---------------------------------------------------------------------------

#[derive(Args)]
struct EntropyArgs {
    /// Joint-distribution JSON file.
    file: PathBuf,
    /// Entropy order: `0`, `1`, `inf`, or a positive rational like `1/2`.
    #[arg(long)]
    order: String,
    /// Condition within the joint law instead of taking the whole tuple.
    #[arg(long)]
    joint: bool,
    /// Target variable (requires --joint).
    #[arg(long)]
    target: Option<String>,
    /// Conditioning variables, comma separated (requires --joint).
    #[arg(long, value_delimiter = ',')]
    given: Vec<String>,
    /// Conditional measure: `arimoto` (average-style) or `worst`.
    #[arg(long, default_value = "arimoto")]
    measure: String,
}

fn cmd_entropy(a: &EntropyArgs) -> Result<i32> {
    let joint = JointDist::from_json(&fs::read_to_string(&a.file)?)?;
    let order = Order::parse(&a.order)?;
    if a.joint && matches!(order, Order::Zero) {
        return Err(Error::UnsupportedOrder(
            "order 0 is not defined for the conditional measures".into(),
        ));
    }

    if !a.joint {
        let dist = joint.row_dist();
        let pre_log = match order {
            Order::Infinity => Some(dist.max_mass().clone()),
            Order::Zero => Some(Rational::from_integer(dist.support_size().into())),
            _ => None,
        };
        print_bits(renyi_entropy(&dist, &order), pre_log.as_ref());
        return Ok(EXIT_OK);
    }

    let target = a
        .target
        .as_deref()
        .ok_or_else(|| Error::InvalidParams("--joint requires --target".into()))?;
    let given: Vec<&str> = a.given.iter().map(String::as_str).collect();

    if given.is_empty() {
        // Marginal entropy of the target variable.
        let dist = joint.prob_dist(target)?;
        let pre_log = match order {
            Order::Infinity => Some(dist.max_mass().clone()),
            Order::Zero => Some(Rational::from_integer(dist.support_size().into())),
            _ => None,
        };
        print_bits(renyi_entropy(&dist, &order), pre_log.as_ref());
        return Ok(EXIT_OK);
    }

    match a.measure.as_str() {
        "arimoto" => match order {
            Order::Infinity => {
                let r = avg_cond_min_entropy(&joint, target, &given)?;
                print_bits(r.bits(), Some(&r.inner_sum));
            }
            _ => {
                let bits = cond_renyi_arimoto(&joint, target, &given, &order)?;
                print_bits(bits, None);
            }
        },
        "worst" => {
            if !matches!(order, Order::Infinity) {
                return Err(Error::UnsupportedOrder(
                    "the worst-case conditional measure is defined at order inf only".into(),
                ));
            }
            let r = worst_cond_min_entropy(&joint, target, &given)?;
            print_bits(r.bits(), Some(&r.max_conditional));
        }
        other => {
            return Err(Error::InvalidParams(format!(
                "unknown measure `{other}`; expected arimoto or worst"
            )));
        }
    }
    Ok(EXIT_OK)
}

fn print_bits(bits: f64, pre_log: Option<&Rational>) {
    match pre_log {
        Some(r) => println!("{bits:.12} ({})", rational::format_ratio(r)),
        None => println!("{bits:.12}"),
    }
}

// ---------------------------------------------------------------------------
// table
// ---------------------------------------------------------------------------

#[derive(Args)]
struct TableArgs {
    /// Prime field size.
    #[arg(long)]
    t: u64,
    /// Reconstruction threshold.
    #[arg(long)]
    k: usize,
    /// Number of parties.
    #[arg(long)]
    n: usize,
}

fn cmd_table(a: &TableArgs) -> Result<i32> {
    let field = PrimeField::new(a.t)?;
    let table = pi2_distribution_table(field, a.k, a.n)?;
    print!("{}", table.to_csv());
    Ok(EXIT_OK)
}

// ---------------------------------------------------------------------------
// share / combine
// ---------------------------------------------------------------------------

#[derive(Args)]
struct ShareArgs {
    /// Scheme: `pi1`, `pi2`, or `general`.
    #[arg(long)]
    scheme: String,
    /// Number of parties (pi1, pi2).
    #[arg(long)]
    n: Option<usize>,
    /// Distinguished probability mass, as a rational like `3/4`.
    #[arg(long)]
    p: String,
    /// Prime field size (pi2).
    #[arg(long)]
    t: Option<u64>,
    /// Reconstruction threshold (pi2).
    #[arg(long)]
    k: Option<usize>,
    /// Access-structure JSON file (general).
    #[arg(long)]
    structure: Option<PathBuf>,
    /// The secret to split.
    #[arg(long)]
    secret: u64,
    /// RNG seed; the same seed reproduces the bundle byte for byte.
    #[arg(long)]
    seed: u64,
    /// Output file for the bundle JSON (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn cmd_share(a: &ShareArgs) -> Result<i32> {
    let p = rational::parse_ratio(&a.p)?;
    let mut rng = ChaCha12Rng::seed_from_u64(a.seed);
    let bundle = match a.scheme.as_str() {
        "pi1" => {
            let n = require(a.n, "--n")?;
            let params = Pi1Params::new(n, p)?;
            pi1_share(bit_secret(a.secret)?, &params, &mut rng)?
        }
        "pi2" => {
            let field = PrimeField::new(require(a.t, "--t")?)?;
            let params = Pi2Params::new(field, require(a.k, "--k")?, require(a.n, "--n")?, p)?;
            pi2_share(a.secret, &params, &mut rng)?
        }
        "general" => {
            let path = a
                .structure
                .as_ref()
                .ok_or_else(|| Error::InvalidParams("general requires --structure".into()))?;
            let structure = AccessStructure::from_json(&fs::read_to_string(path)?)?;
            let params = GeneralParams::new(structure, p)?;
            general_share(bit_secret(a.secret)?, &params, &mut rng)?
        }
        other => {
            return Err(Error::InvalidParams(format!(
                "unknown scheme `{other}`; expected pi1, pi2, or general"
            )));
        }
    };
    let text = bundle.to_json()?;
    match &a.out {
        Some(path) => fs::write(path, format!("{text}\n"))?,
        None => println!("{text}"),
    }
    Ok(EXIT_OK)
}

#[derive(Args)]
struct CombineArgs {
    /// Share-bundle JSON file produced by `share`.
    file: PathBuf,
    /// Optional cross-check against the scheme recorded in the bundle.
    #[arg(long)]
    scheme: Option<String>,
    /// Use only these parties' shares, comma separated (default: all).
    #[arg(long, value_delimiter = ',')]
    parties: Vec<usize>,
}

fn cmd_combine(a: &CombineArgs) -> Result<i32> {
    let bundle = ShareBundle::from_json(&fs::read_to_string(&a.file)?)?;
    if let Some(expected) = &a.scheme {
        if expected != bundle.scheme_name() {
            return Err(Error::InvalidParams(format!(
                "bundle was produced by scheme {}, not {expected}",
                bundle.scheme_name()
            )));
        }
    }
    let bundle = if a.parties.is_empty() {
        bundle
    } else {
        bundle.restrict(&a.parties)?
    };
    let secret = match bundle.params().clone() {
        SchemeParams::Xor(_) => u64::from(pi1_combine(&bundle)?),
        SchemeParams::Threshold(params) => pi2_combine(&bundle, &params)?,
        SchemeParams::General(params) => u64::from(general_combine(&bundle, &params)?),
    };
    println!("{secret}");
    Ok(EXIT_OK)
}

fn require<T>(value: Option<T>, flag: &str) -> Result<T> {
    value.ok_or_else(|| Error::InvalidParams(format!("{flag} is required for this scheme")))
}

fn bit_secret(s: u64) -> Result<u8> {
    u8::try_from(s)
        .ok()
        .filter(|&b| b <= 1)
        .ok_or_else(|| Error::InvalidParams(format!("secret {s} is not a bit")))
}

// ---------------------------------------------------------------------------
// verify / report
// ---------------------------------------------------------------------------

#[derive(Args)]
struct VerifyArgs {
    /// Scheme: `pi1`, `pi2`, or `general`.
    #[arg(long)]
    scheme: String,
    /// Number of parties (pi1, pi2).
    #[arg(long)]
    n: Option<usize>,
    /// Distinguished probability mass, as a rational like `3/4`.
    #[arg(long)]
    p: String,
    /// Prime field size (pi2).
    #[arg(long)]
    t: Option<u64>,
    /// Reconstruction threshold (pi2).
    #[arg(long)]
    k: Option<usize>,
    /// Access-structure JSON file (general).
    #[arg(long)]
    structure: Option<PathBuf>,
    /// Checks to run, comma separated: t3, t4, t5, t6, ideal, nonperfect.
    /// Defaults to every check applicable to the scheme.
    #[arg(long, value_delimiter = ',')]
    checks: Vec<String>,
    /// Orders for the share-bound check (t3), comma separated.
    #[arg(long, value_delimiter = ',', default_value = "1/2,1,2,inf")]
    orders: Vec<String>,
    /// Write the full JSON report here in addition to the summary.
    #[arg(long)]
    report: Option<PathBuf>,
}

/// A scheme instance inflated from CLI flags: its exact joint law, its
/// access structure, and whether it is expected to be non-perfect.
struct Instance {
    scheme: String,
    params: InstanceParams,
    joint: JointDist,
    structure: AccessStructure,
    expect_non_perfect: bool,
}

enum InstanceParams {
    Xor(Pi1Params),
    Threshold(Pi2Params),
    General(GeneralParams),
}

fn build_instance(
    scheme: &str,
    n: Option<usize>,
    p: &str,
    t: Option<u64>,
    k: Option<usize>,
    structure: Option<&PathBuf>,
) -> Result<Instance> {
    let p = rational::parse_ratio(p)?;
    match scheme {
        "pi1" => {
            let n = require(n, "--n")?;
            let params = Pi1Params::new(n, p)?;
            let joint = pi1_joint_distribution(&params);
            Ok(Instance {
                scheme: scheme.into(),
                joint,
                structure: AccessStructure::threshold(n, n)?,
                // The closing share is always correlated with the secret.
                expect_non_perfect: true,
                params: InstanceParams::Xor(params),
            })
        }
        "pi2" => {
            let field = PrimeField::new(require(t, "--t")?)?;
            let params = Pi2Params::new(field, require(k, "--k")?, require(n, "--n")?, p)?;
            let joint = pi2_joint_distribution(&params)?;
            let uniform = Rational::new(1.into(), params.table_size().into());
            Ok(Instance {
                scheme: scheme.into(),
                joint,
                structure: AccessStructure::threshold(params.threshold(), params.party_count())?,
                // Skewing the all-zero row is exactly what breaks
                // independence; the uniform table is perfect.
                expect_non_perfect: *params.zero_mass() > uniform,
                params: InstanceParams::Threshold(params),
            })
        }
        "general" => {
            let path = structure
                .ok_or_else(|| Error::InvalidParams("general requires --structure".into()))?;
            let g = AccessStructure::from_json(&fs::read_to_string(path)?)?;
            let params = GeneralParams::new(g.clone(), p)?;
            let joint = general_joint_distribution(&params)?;
            Ok(Instance {
                scheme: scheme.into(),
                joint,
                structure: g,
                // With a single block every forbidden view is empty, and the
                // secret is trivially independent of it.
                expect_non_perfect: params.block_count() >= 2,
                params: InstanceParams::General(params),
            })
        }
        other => Err(Error::InvalidParams(format!(
            "unknown scheme `{other}`; expected pi1, pi2, or general"
        ))),
    }
}

fn default_checks(scheme: &str) -> Vec<String> {
    let construction = match scheme {
        "pi1" => "t5",
        "pi2" => "t6",
        _ => "t4",
    };
    ["t3", construction, "ideal", "nonperfect"]
        .iter()
        .map(|s| s.to_string())
        .collect()
}

fn cmd_verify(a: &VerifyArgs) -> Result<i32> {
    let instance = build_instance(&a.scheme, a.n, &a.p, a.t, a.k, a.structure.as_ref())?;
    let checks = if a.checks.is_empty() {
        default_checks(&instance.scheme)
    } else {
        a.checks.clone()
    };

    let mut entries = Vec::new();
    let mut all_pass = true;
    for name in &checks {
        let (pass, detail, report) = run_check(name, &instance, &a.orders)?;
        match &detail {
            Some(text) => println!("{name} {} ({text})", verdict(pass)),
            None => println!("{name} {}", verdict(pass)),
        }
        all_pass &= pass;
        entries.push(json!({ "check": name, "pass": pass, "report": report }));
    }

    if let Some(path) = &a.report {
        let doc = json!({ "scheme": instance.scheme, "checks": entries });
        fs::write(path, format!("{}\n", serde_json::to_string_pretty(&doc)?))?;
    }
    Ok(if all_pass { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "FAIL"
    }
}

/// Run one named check; returns (pass, optional summary detail, JSON report).
fn run_check(
    name: &str,
    instance: &Instance,
    orders: &[String],
) -> Result<(bool, Option<String>, serde_json::Value)> {
    match name {
        "t3" => {
            let mut pass = true;
            let mut reports = Vec::new();
            for text in orders {
                let order = Order::parse(text)?;
                let security =
                    verify::epsilon_security(&instance.joint, &instance.structure, &order)?;
                let bounds = verify::check_share_bounds(
                    &instance.joint,
                    &instance.structure,
                    &order,
                    security.epsilon,
                )?;
                pass &= bounds.pass;
                reports.push(json!({
                    "order": order.to_string(),
                    "security": serde_json::to_value(&security)?,
                    "bounds": serde_json::to_value(&bounds)?,
                }));
            }
            Ok((pass, None, serde_json::Value::Array(reports)))
        }
        "t5" => {
            let InstanceParams::Xor(params) = &instance.params else {
                return Err(Error::InvalidParams(
                    "check t5 applies to scheme pi1".into(),
                ));
            };
            let report = verify::theorem5_check(params)?;
            Ok((report.pass, None, serde_json::to_value(&report)?))
        }
        "t6" => {
            let InstanceParams::Threshold(params) = &instance.params else {
                return Err(Error::InvalidParams(
                    "check t6 applies to scheme pi2".into(),
                ));
            };
            let report = verify::theorem6_check(params)?;
            Ok((report.pass, None, serde_json::to_value(&report)?))
        }
        "t4" => {
            let InstanceParams::General(params) = &instance.params else {
                return Err(Error::InvalidParams(
                    "check t4 applies to scheme general".into(),
                ));
            };
            let report = verify::theorem4_check(params)?;
            Ok((report.pass, None, serde_json::to_value(&report)?))
        }
        "ideal" => {
            let report = verify::ideality(&instance.joint)?;
            let detail = report
                .parties
                .iter()
                .find(|p| !p.equal)
                .map(|p| format!("party {}", p.party));
            Ok((report.ideal, detail, serde_json::to_value(&report)?))
        }
        "nonperfect" => {
            let (actual, witness) = verify::is_non_perfect(&instance.joint, &instance.structure)?;
            let pass = actual == instance.expect_non_perfect;
            let detail = witness.as_ref().map(|w| format!("witness {w:?}"));
            let report = json!({
                "non_perfect": actual,
                "expected": instance.expect_non_perfect,
                "witness": witness,
            });
            Ok((pass, detail, report))
        }
        other => Err(Error::InvalidParams(format!(
            "unknown check `{other}`; expected t3, t4, t5, t6, ideal, or nonperfect"
        ))),
    }
}

#[derive(Args)]
struct ReportArgs {
    /// Scheme: `pi1`, `pi2`, or `general`.
    #[arg(long)]
    scheme: String,
    /// Number of parties (pi1, pi2).
    #[arg(long)]
    n: Option<usize>,
    /// Distinguished probability mass, as a rational like `3/4`.
    #[arg(long)]
    p: String,
    /// Prime field size (pi2).
    #[arg(long)]
    t: Option<u64>,
    /// Reconstruction threshold (pi2).
    #[arg(long)]
    k: Option<usize>,
    /// Access-structure JSON file (general).
    #[arg(long)]
    structure: Option<PathBuf>,
    /// Orders for the gap table, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "inf")]
    orders: Vec<String>,
    /// Output file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn cmd_report(a: &ReportArgs) -> Result<i32> {
    let instance = build_instance(&a.scheme, a.n, &a.p, a.t, a.k, a.structure.as_ref())?;
    let mut security = Vec::new();
    for text in &a.orders {
        let order = Order::parse(text)?;
        let report = verify::epsilon_security(&instance.joint, &instance.structure, &order)?;
        security.push(serde_json::to_value(&report)?);
    }
    let ideality = verify::ideality(&instance.joint)?;
    let doc = json!({
        "scheme": instance.scheme,
        "security": security,
        "ideality": serde_json::to_value(&ideality)?,
    });
    let text = serde_json::to_string_pretty(&doc)?;
    match &a.out {
        Some(path) => fs::write(path, format!("{text}\n"))?,
        None => println!("{text}"),
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn command_line_shape_parses() {
        let cli = Cli::try_parse_from([
            "minshare", "share", "--scheme", "pi1", "--n", "3", "--p", "3/4", "--secret", "1",
            "--seed", "7",
        ])
        .unwrap();
        match cli.command {
            Command::Share(a) => {
                assert_eq!(a.scheme, "pi1");
                assert_eq!(a.n, Some(3));
                assert_eq!(a.secret, 1);
            }
            _ => panic!("wrong subcommand"),
        }
    }

    #[test]
    fn comma_separated_lists_split() {
        let cli = Cli::try_parse_from([
            "minshare",
            "verify",
            "--scheme",
            "pi2",
            "--t",
            "2",
            "--k",
            "2",
            "--n",
            "3",
            "--p",
            "3/8",
            "--checks",
            "t6,ideal,nonperfect",
        ])
        .unwrap();
        match cli.command {
            Command::Verify(a) => {
                assert_eq!(a.checks, ["t6", "ideal", "nonperfect"]);
                assert_eq!(a.orders, ["1/2", "1", "2", "inf"]);
            }
            _ => panic!("wrong subcommand"),
        }
    }

    #[test]
    fn decimal_probabilities_are_rejected() {
        assert!(rational::parse_ratio("0.75").is_err());
    }

    #[test]
    fn exit_codes_map_error_classes() {
        assert_eq!(exit_code_of(&Error::InvalidParams("x".into())), EXIT_USAGE);
        assert_eq!(exit_code_of(&Error::MalformedInput("x".into())), EXIT_USAGE);
        assert_eq!(
            exit_code_of(&Error::UnsupportedOrder("x".into())),
            EXIT_ORDER
        );
        assert_eq!(
            exit_code_of(&Error::NotQualified("x".into())),
            EXIT_NOT_QUALIFIED
        );
    }

    #[test]
    fn bit_secrets_are_validated() {
        assert_eq!(bit_secret(0).unwrap(), 0);
        assert_eq!(bit_secret(1).unwrap(), 1);
        assert!(bit_secret(2).is_err());
        assert!(bit_secret(1 << 40).is_err());
    }
}
