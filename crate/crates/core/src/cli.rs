//! Command-line front end. Every subcommand prints one JSON document (or a flat
//! `key<TAB>value` table) on stdout.
//!
//! Exit codes: 0 success, 1 usage, 2 domain error, 3 overflow or out-of-range input,
//! 4 internal inconsistency or audit failure.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::decide::{decide_with, HypothesisAttestation};
use crate::error::Error;
use crate::galoisrep::{
    contains_minus_one, dual_pairing, gamma_orbits, gamma_subgroup, orbit_count, FieldTag, Prime,
};
use crate::homology::{
    betti, resolve_b2, wh_h1_fixed_dim_with, wh_h1_rank, ChainComplexData, Epsilon, SignConvention,
};
use crate::ktheory::{carter_ledger, k_minus_one_report, localized_piece, wh1_rank, witness_pair};
use crate::numtheory::{divisors, local_cyclotomic_degree, mult_order, phi, GroupSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_OVERFLOW: i32 = 3;
pub const EXIT_INCONSISTENT: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "lowerk",
    version,
    about = "Lower K-theory of Z[Z/m] and duality eigenspaces"
)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Convention {
    Negated,
    Direct,
}

impl From<Convention> for SignConvention {
    fn from(c: Convention) -> Self {
        match c {
            Convention::Negated => SignConvention::NegatedKMinusOne,
            Convention::Direct => SignConvention::Direct,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AttestFlag {
    /// G cyclic of odd order at least 5
    CyclicOddOrder,
    /// fixed component closed, aspherical, pi_1-injective
    Aspherical,
    /// Farrell-Jones conjecture for pi_1 M and pi_1 X
    FarrellJones,
    /// fixed set of codimension at least 2
    Codimension,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Carter-resolution ranks and rank of K_-1(Z[Z/m])
    Ledger {
        #[arg(long)]
        m: u64,
    },
    /// Involution profile of K_-1(Z[Z/m]) with its per-divisor pieces
    Kprofile {
        #[arg(long)]
        m: u64,
    },
    /// Rank and involution profile of Wh_1(Z/m)
    Wh1 {
        #[arg(long)]
        m: u64,
    },
    /// Local Galois image Gamma_{Q_p}, its orbits on Z/m and -1 membership
    Galois {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        p: u64,
    },
    /// Field count s_p, local degree and duality type of Q_p (x) Q(zeta_d)
    Sfactor {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        p: u64,
    },
    /// Rational Betti numbers of a chain complex file
    Betti {
        #[arg(long)]
        complex: PathBuf,
    },
    /// Rank and fixed dimensions of H_1(X; Wh_K(F)) rationally
    H1wh {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        b0: u64,
        #[arg(long)]
        b2: u64,
        #[arg(long, allow_negative_numbers = true, conflicts_with = "dim")]
        epsilon: Option<i64>,
        #[arg(long)]
        dim: Option<u64>,
        #[arg(long, value_enum, default_value_t = Convention::Negated)]
        convention: Convention,
    },
    /// Verdict on the hypotheses for infinitely many stably trivial G-smoothings
    Decide(DecideArgs),
    /// Sweep the internal consistency identities for all m up to a bound
    Audit {
        #[arg(long)]
        max: u64,
    },
}

#[derive(Debug, Args)]
struct DecideArgs {
    #[arg(long)]
    m: u64,
    #[arg(long)]
    dim: u64,
    #[arg(long, required_unless_present = "complex")]
    b2: Option<u64>,
    #[arg(long)]
    complex: Option<PathBuf>,
    #[arg(long, conflicts_with = "attest")]
    attest_all: bool,
    #[arg(long, value_enum, num_args = 1..)]
    attest: Vec<AttestFlag>,
    #[arg(long, value_enum, default_value_t = Convention::Negated)]
    convention: Convention,
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliOutcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Usage(String),
    Lib(Error),
    Audit(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Domain(_) | Error::Input(_) => EXIT_DOMAIN,
        Error::OutOfRange { .. } | Error::Overflow(_) => EXIT_OVERFLOW,
        Error::Inconsistent(_) => EXIT_INCONSISTENT,
    }
}

pub fn run<I, T>(args: I) -> CliOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                CliOutcome {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                CliOutcome {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let (code, value, stderr) = match execute(&cli.command) {
        Ok(v) => (EXIT_OK, Some(v), String::new()),
        Err(Failure::Usage(msg)) => (EXIT_USAGE, None, format!("error: {msg}")),
        Err(Failure::Lib(e)) => (exit_code(&e), None, format!("error: {e}")),
        Err(Failure::Audit(v)) => (EXIT_INCONSISTENT, Some(v), "audit failed".to_string()),
    };
    let stdout = value.map_or_else(String::new, |v| render(&v, cli.format));
    CliOutcome {
        code,
        stdout,
        stderr,
    }
}

fn render(v: &Value, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(v).expect("values serialize"),
        Format::Table => {
            let mut lines = Vec::new();
            flatten("", v, &mut lines);
            lines.join("\n")
        }
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<String>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(map) => map.iter().for_each(|(k, v)| flatten(&key(k), v, out)),
        Value::Array(items) if items.iter().any(|x| x.is_object()) => items
            .iter()
            .enumerate()
            .for_each(|(i, v)| flatten(&key(&i.to_string()), v, out)),
        other => out.push(format!("{prefix}\t{other}")),
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("values serialize")
}

fn load_complex(path: &PathBuf) -> Result<ChainComplexData, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(ChainComplexData::from_json(&text)?)
}

fn execute(command: &Command) -> Result<Value, Failure> {
    match command {
        Command::Ledger { m } => Ok(to_value(&carter_ledger(&GroupSpec::new(*m)?)?)),
        Command::Kprofile { m } => {
            let report = k_minus_one_report(&GroupSpec::new(*m)?)?;
            let e = report.profile.eigenspaces;
            Ok(json!({
                "m": m,
                "label": report.profile.label,
                "rank": report.profile.rank,
                "eigenspaces_asserted": e.is_some(),
                "plus": e.map(|e| e.plus),
                "minus": e.map(|e| e.minus),
                "pieces": report.pieces,
            }))
        }
        Command::Wh1 { m } => {
            let spec = GroupSpec::new(*m)?;
            let rank = wh1_rank(&spec)?;
            let profile = spec
                .is_odd()
                .then(|| crate::ktheory::wh1_profile(&spec))
                .transpose()?;
            Ok(json!({ "m": m, "rank": rank, "profile": profile }))
        }
        Command::Galois { m, p } => {
            let spec = GroupSpec::new(*m)?;
            let prime = Prime::new(*p)?;
            let gamma = gamma_subgroup(&spec, FieldTag::Padic(prime))?;
            let orbits = gamma_orbits(&spec, &gamma)?;
            let pairing = dual_pairing(&orbits);
            Ok(json!({
                "m": m,
                "p": p,
                "gamma": gamma,
                "gamma_order": gamma.order(),
                "orbit_count": orbits.len(),
                "orbits": orbits.blocks(),
                "minus_one_in_gamma": gamma.contains_minus_one(),
                "minus_one_prime_by_prime": contains_minus_one(&spec, *p)?,
                "pairing": pairing,
            }))
        }
        Command::Sfactor { d, p } => {
            let spec = GroupSpec::new(*d)?;
            Prime::new(*p)?;
            let degree = local_cyclotomic_degree(&spec, *p)?;
            let piece = localized_piece(&spec)?;
            let component = piece
                .components
                .iter()
                .find(|c| c.p == *p)
                .ok_or_else(|| Error::Inconsistent(format!("no component for {p} in d={d}")))?;
            Ok(json!({
                "d": d,
                "p": p,
                "s": component.s,
                "order": mult_order(*p, spec.prime_to_part(*p))?,
                "local_degree": degree,
                "module_type": component.module_type,
            }))
        }
        Command::Betti { complex } => {
            let c = load_complex(complex)?;
            Ok(json!({ "dims": c.dims(), "betti": betti(&c)?.betti }))
        }
        Command::H1wh {
            m,
            b0,
            b2,
            epsilon,
            dim,
            convention,
        } => {
            let spec = GroupSpec::new(*m)?;
            let convention = SignConvention::from(*convention);
            let chosen = match (epsilon, dim) {
                (Some(e), _) => Some((Epsilon::from_sign(*e)?, "epsilon")),
                (None, Some(n)) => Some((Epsilon::from_dimension(*n), "dimension")),
                (None, None) => None,
            };
            match chosen {
                Some((eps, source)) => {
                    let profile = wh_h1_fixed_dim_with(*b0, *b2, &spec, eps, convention)?;
                    let mut v = to_value(&profile);
                    v["epsilon_source"] = json!(source);
                    if let Some(n) = dim {
                        v["dim"] = json!(n);
                    }
                    Ok(v)
                }
                None => {
                    let rank = wh_h1_rank(*b0, *b2, &spec)?;
                    let fixed = if spec.is_odd() {
                        let plus =
                            wh_h1_fixed_dim_with(*b0, *b2, &spec, Epsilon::Plus, convention)?;
                        let minus =
                            wh_h1_fixed_dim_with(*b0, *b2, &spec, Epsilon::Minus, convention)?;
                        json!({ "plus": plus.dim_fixed, "minus": minus.dim_fixed })
                    } else {
                        Value::Null
                    };
                    Ok(json!({
                        "m": m,
                        "rank": rank,
                        "dim_fixed": fixed,
                        "convention": convention,
                    }))
                }
            }
        }
        Command::Decide(args) => {
            let spec = GroupSpec::new(args.m)?;
            let complex = args.complex.as_ref().map(load_complex).transpose()?;
            let b2 = resolve_b2(args.b2, complex.as_ref())?;
            let has = |f| args.attest_all || args.attest.contains(&f);
            let att = HypothesisAttestation {
                group_cyclic_odd_order_ge5: has(AttestFlag::CyclicOddOrder),
                fixed_component_closed_aspherical_pi1_injective: has(AttestFlag::Aspherical),
                farrell_jones_holds: has(AttestFlag::FarrellJones),
                codim_at_least_2: has(AttestFlag::Codimension),
                manifold_dim: args.dim,
                b2,
            };
            let verdict = decide_with(&spec, &att, args.convention.into())?;
            let mut v = to_value(&verdict);
            if let crate::decide::Outcome::Inconclusive { reason } = &verdict.outcome {
                v["outcome"]["message"] = json!(reason.to_string());
            }
            Ok(v)
        }
        Command::Audit { max } => audit(*max),
    }
}

#[derive(Debug, Default, Clone, Copy, Serialize)]
struct AuditCounts {
    rank_equality: u64,
    orbit_formula: u64,
    eigenspace_criterion: u64,
    theorem_consistency: u64,
    /// (m, p) with odd m where the prime-by-prime -1 test disagrees with direct
    /// membership in Gamma_{Q_p}; informational only.
    minus_one_prime_by_prime_divergences: u64,
}

impl std::ops::Add for AuditCounts {
    type Output = AuditCounts;

    fn add(self, o: AuditCounts) -> AuditCounts {
        AuditCounts {
            rank_equality: self.rank_equality + o.rank_equality,
            orbit_formula: self.orbit_formula + o.orbit_formula,
            eigenspace_criterion: self.eigenspace_criterion + o.eigenspace_criterion,
            theorem_consistency: self.theorem_consistency + o.theorem_consistency,
            minus_one_prime_by_prime_divergences: self.minus_one_prime_by_prime_divergences
                + o.minus_one_prime_by_prime_divergences,
        }
    }
}

struct AuditFailure {
    check: &'static str,
    m: u64,
    detail: String,
}

fn audit_one(m: u64) -> Result<Result<AuditCounts, AuditFailure>, Error> {
    let spec = GroupSpec::new(m)?;
    let mut counts = AuditCounts::default();
    let fail = |check, detail: String| Ok(Err(AuditFailure { check, m, detail }));

    let ledger = carter_ledger(&spec)?;
    let pieces_rank: u64 = divisors(m)?
        .into_iter()
        .map(|d| localized_piece(&GroupSpec::new(d)?).map(|p| p.rank))
        .sum::<Result<u64, Error>>()?;
    if pieces_rank != ledger.rank_k_minus_1 {
        return fail(
            "rank_equality",
            format!("ledger {} vs pieces {pieces_rank}", ledger.rank_k_minus_1),
        );
    }
    counts.rank_equality += 1;

    for p in spec.primes() {
        let m_p = spec.prime_to_part(p);
        let level_sum: u64 = divisors(m_p)?
            .into_iter()
            .map(|e| Ok(phi(e)? / mult_order(p, e)?))
            .sum::<Result<u64, Error>>()?;
        let r = spec.exponent_of(p) as u64;
        let prime = Prime::new(p)?;
        let gamma = gamma_subgroup(&spec, FieldTag::Padic(prime))?;
        let local = orbit_count(m, gamma.generators())? as u64;
        let residue = orbit_count(m_p, &[p % m_p])? as u64;
        if local != (r + 1) * level_sum || residue != level_sum {
            return fail(
                "orbit_formula",
                format!(
                    "p={p}: orbits ({local}, {residue}), formula ({}, {level_sum})",
                    (r + 1) * level_sum
                ),
            );
        }
        counts.orbit_formula += 1;
        if spec.is_odd() && gamma.contains_minus_one() != contains_minus_one(&spec, p)? {
            counts.minus_one_prime_by_prime_divergences += 1;
        }
    }

    if spec.is_odd() {
        let report = k_minus_one_report(&spec)?;
        let e = report
            .profile
            .eigenspaces
            .ok_or_else(|| Error::Inconsistent("odd m without eigenspaces".into()))?;
        let witness = witness_pair(&spec)?;
        if e.plus + e.minus != report.profile.rank || (e.minus > 0) != witness.is_some() {
            return fail(
                "eigenspace_criterion",
                format!(
                    "profile {e:?}, rank {}, witness {witness:?}",
                    report.profile.rank
                ),
            );
        }
        counts.eigenspace_criterion += 1;

        if m >= 5 {
            let conv = SignConvention::default();
            let plus = wh_h1_fixed_dim_with(1, 1, &spec, Epsilon::Plus, conv)?.dim_fixed;
            let minus = wh_h1_fixed_dim_with(1, 1, &spec, Epsilon::Minus, conv)?.dim_fixed;
            let wh = wh1_rank(&spec)?;
            if (plus > 0) != witness.is_some() || minus < wh {
                return fail(
                    "theorem_consistency",
                    format!("fixed (+1: {plus}, -1: {minus}), wh1 {wh}, witness {witness:?}"),
                );
            }
            counts.theorem_consistency += 1;
        }
    }
    Ok(Ok(counts))
}

fn audit(max: u64) -> Result<Value, Failure> {
    crate::numtheory::check_range("max", max)?;
    let results: Vec<_> = (1..=max).into_par_iter().map(audit_one).collect();
    let mut total = AuditCounts::default();
    for r in results {
        match r? {
            Ok(c) => total = total + c,
            Err(f) => {
                return Err(Failure::Audit(json!({
                    "status": "failed",
                    "max": max,
                    "check": f.check,
                    "m": f.m,
                    "detail": f.detail,
                    "checked_before_failure": total,
                })))
            }
        }
    }
    Ok(json!({ "status": "ok", "max": max, "checked": total }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> CliOutcome {
        run(std::iter::once("lowerk").chain(args.iter().copied()))
    }

    fn json_out(args: &[&str]) -> Value {
        let out = call(args);
        assert_eq!(out.code, 0, "stderr: {}", out.stderr);
        serde_json::from_str(&out.stdout).unwrap()
    }

    #[test]
    fn kprofile_33() {
        let v = json_out(&["kprofile", "--m", "33"]);
        assert_eq!(
            (v["rank"].as_u64(), v["plus"].as_u64(), v["minus"].as_u64()),
            (Some(2), Some(1), Some(1))
        );
        assert_eq!(v["pieces"].as_array().unwrap().len(), 4);
    }

    #[test]
    fn ledger_1() {
        assert_eq!(json_out(&["ledger", "--m", "1"])["rank_k_minus_1"], 0);
    }

    #[test]
    fn decide_21() {
        let v = json_out(&[
            "decide",
            "--m",
            "21",
            "--dim",
            "4",
            "--b2",
            "1",
            "--attest-all",
        ]);
        assert_eq!(v["outcome"]["case"], "case2_even_dim");
        assert_eq!(v["outcome"]["witness"], json!([7, 3]));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(call(&["ledger"]).code, EXIT_USAGE);
        assert_eq!(call(&["bogus"]).code, EXIT_USAGE);
        assert_eq!(call(&["ledger", "--m", "0"]).code, EXIT_DOMAIN);
        assert_eq!(call(&["wh1", "--m", "2000000"]).code, EXIT_OVERFLOW);
        assert_eq!(
            call(&[
                "h1wh",
                "--m",
                "12",
                "--b0",
                "1",
                "--b2",
                "1",
                "--epsilon",
                "1"
            ])
            .code,
            EXIT_DOMAIN
        );
        assert_eq!(
            call(&[
                "h1wh",
                "--m",
                "15",
                "--b0",
                "1",
                "--b2",
                "1",
                "--epsilon",
                "1",
                "--dim",
                "3"
            ])
            .code,
            EXIT_USAGE
        );
        assert_eq!(call(&["--help"]).code, EXIT_OK);
    }

    #[test]
    fn table_format() {
        let out = call(&["--format", "table", "ledger", "--m", "33"]);
        assert_eq!(out.code, 0);
        assert!(out.stdout.lines().any(|l| l == "rank_k_minus_1\t2"));
        assert!(out.stdout.lines().any(|l| l == "local.0.r_qp\t6"));
    }
}
