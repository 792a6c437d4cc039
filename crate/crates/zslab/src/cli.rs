//! Command-line front end: argument parsing, dispatch, JSON/TSV output,
//! and a content-addressed result cache.
//!
//! Every subcommand writes a single JSON document (or TSV with
//! `--format tsv`) to stdout and diagnostics to stderr. Exit codes:
//! 0 success, 1 verification failure (a counterexample or mismatch was
//! found), 2 usage error, 3 enumeration budget refusal.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::arith::{parse_length, PrimeModulus};
use crate::counting::{self, CountMode};
use crate::error::{Error, Result};
use crate::identities::{
    base_identity, lift_identity, remark1_relations, remark_identity_zp2, theorem1_chain,
    verify_identity, CampaignProfile, CountIdentity, DeriveOutcome, VerifyStatus,
};
use crate::linearfp::{
    assemble_system, diff_solutions, exceptional_primes, parameter_for_size, reference_solution,
    residual_check, solve_triangular, AffineVector,
};
use crate::polysum::{self, lemma3_check, polysum_reduced, theorem3_verdict};
use crate::search::{
    s_constant, validate_witness, verify_statement, CampaignStatus, ConstantOutcome,
    SearchOptions, StatementId,
};
use crate::sequences::{
    known_extremal, random_sequence, theorem2_construction, ExtremalFamily, GeneratorProfile,
    GroupElement, ZSequence,
};

mod cache;

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum OutputFormat {
    Json,
    Tsv,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum ModeArg {
    Exact,
    Mod,
}

impl From<ModeArg> for CountMode {
    fn from(m: ModeArg) -> CountMode {
        match m {
            ModeArg::Exact => CountMode::Exact,
            ModeArg::Mod => CountMode::Mod,
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "zslab",
    version,
    about = "Zero-sum subsequence workbench over Z_n^d",
    max_term_width = 100
)]
pub struct Cli {
    /// Directory for content-addressed result caching (or env ZSLAB_CACHE)
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,

    /// Output format for the result document
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,

    /// Parallelism budget for campaigns, searches and point sums
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

/// Where a subcommand takes its identity from.
#[derive(Args, Debug)]
pub struct IdentitySource {
    /// The alternating identity at size Kp-3 over Z_p^3
    #[arg(long)]
    pub base_k: Option<u32>,

    /// The dimension-2 identity at size 3p-3
    #[arg(long, default_value_t = false)]
    pub remark_zp2: bool,

    /// Read the identity from a JSON document
    #[arg(long)]
    pub identity: Option<PathBuf>,
}

impl IdentitySource {
    fn load(&self) -> Result<CountIdentity> {
        match (self.base_k, self.remark_zp2, &self.identity) {
            (Some(k), false, None) => base_identity(k),
            (None, true, None) => Ok(remark_identity_zp2()),
            (None, false, Some(path)) => {
                let text = std::fs::read_to_string(path)?;
                let id: CountIdentity = serde_json::from_str(&text)?;
                id.validate()?;
                Ok(id)
            }
            _ => Err(Error::InvalidArgument(
                "give exactly one of --base-k, --remark-zp2, --identity".into(),
            )),
        }
    }

    fn descriptor(&self) -> Result<String> {
        Ok(match (self.base_k, self.remark_zp2, &self.identity) {
            (Some(k), false, None) => format!("base-k={k}"),
            (None, true, None) => "remark-zp2".into(),
            (None, false, Some(path)) => format!("identity-sha256={}", cache::file_digest(path)?),
            _ => {
                return Err(Error::InvalidArgument(
                    "give exactly one of --base-k, --remark-zp2, --identity".into(),
                ))
            }
        })
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Count subsequences of one length with a prescribed sum
    Count {
        /// Sequence file (JSON: {"n":..,"d":..,"elements":[[..],..]})
        #[arg(long)]
        seq: PathBuf,
        /// Length: a plain integer or an expression like "2p" (p = n)
        #[arg(long)]
        len: String,
        /// Target sum, comma-separated coordinates (default zero)
        #[arg(long)]
        target: Option<String>,
        #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
        mode: ModeArg,
        /// Expected modulus, validated against the file
        #[arg(long)]
        n: Option<u64>,
        /// Expected dimension, validated against the file
        #[arg(long)]
        d: Option<u32>,
    },

    /// Zero-sum counts at several lengths, one DP pass
    Profile {
        #[arg(long)]
        seq: PathBuf,
        /// Comma-separated lengths ("p,2p,3p" or plain integers)
        #[arg(long)]
        lens: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Mod)]
        mode: ModeArg,
    },

    /// Emit a counting identity document
    Identity {
        #[command(flatten)]
        source: IdentitySource,
    },

    /// Lift an identity to a larger size
    Lift {
        #[command(flatten)]
        source: IdentitySource,
        /// Target size expression, e.g. "9p-3"
        #[arg(long)]
        target: String,
    },

    /// Empirical verification campaign for one identity
    Verify {
        #[command(flatten)]
        source: IdentitySource,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 200)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// uniform | low-support:S | mixed
        #[arg(long, default_value = "mixed")]
        profile: String,
        /// Probe below the identity's asserted p threshold
        #[arg(long, default_value_t = false)]
        force: bool,
    },

    /// Replay a forward derivation at a concrete prime
    Derive {
        /// lemma1 | lemma2 | theorem1
        #[arg(long)]
        replay: String,
        #[arg(long)]
        p: u64,
    },

    /// Assemble and solve the triangular system at size Kp-3
    Solve {
        /// Size expression: 4p-3 through 9p-3
        #[arg(long)]
        size: String,
        /// Parameter name for N^{2p} (defaults to the conventional letter)
        #[arg(long)]
        param: Option<String>,
    },

    /// Pairwise exceptional-prime analysis of an affine vector
    Exceptional {
        /// corollary1-printed | corollary1-derived | corollary2 |
        /// corollary3 | corollary4 | 9p-3-printed | 9p-3-derived
        #[arg(long)]
        preset: Option<String>,
        /// Affine-vector file: `{"param":"k","forms":[[1,0],[6,56],...]}`
        #[arg(long)]
        forms: Option<PathBuf>,
        #[arg(long, default_value_t = 7)]
        cutoff: u64,
    },

    /// Reduced pair sum of the polynomial family over one sequence
    Polysum {
        #[arg(long)]
        seq: PathBuf,
        /// Omitted factor pair, e.g. "1,8"
        #[arg(long, default_value = "1,8")]
        pair: String,
    },

    /// Check that all 28 pair sums coincide
    Lemma3 {
        /// Sequence file; omit to run a random campaign at --p
        #[arg(long)]
        seq: Option<PathBuf>,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, default_value_t = 20)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },

    /// Dichotomy verdict for one sequence of size 9p-3
    Theorem3 {
        #[arg(long)]
        seq: PathBuf,
    },

    /// Emit a named construction as a sequence document
    Construct {
        /// theorem2 | egz-d1 | kemnitz-d2
        #[arg(long)]
        family: String,
        /// Prime for the theorem2 construction
        #[arg(long)]
        p: Option<u64>,
        /// Modulus for the witness families
        #[arg(long)]
        n: Option<u64>,
    },

    /// Exhaustive search commands
    #[command(subcommand)]
    Search(SearchCmd),

    /// Statement-level falsification campaigns
    Campaign {
        /// lemma1 | lemma2 | corollary-4p | corollary-5p | corollary-4p-5p |
        /// theorem2 | application1 | theorem1-hypothesis
        #[arg(long)]
        statement: String,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },

    /// Oracle-equivalence campaigns
    #[command(subcommand)]
    Oracle(OracleCmd),
}

#[derive(Subcommand, Debug)]
pub enum SearchCmd {
    /// Compute s_k(Z_n^d) with an extremal witness
    #[command(name = "s-constant")]
    SConstant {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        d: u32,
        #[arg(long, default_value_t = 1)]
        k: u64,
        /// Enumeration node budget
        #[arg(long, default_value_t = 200_000_000)]
        budget: u64,
        /// Disable coordinate-permutation pruning
        #[arg(long, default_value_t = false)]
        no_symmetry: bool,
        #[arg(long, default_value_t = 64)]
        max_size: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum OracleCmd {
    /// DP counts against brute-force enumeration
    Counting {
        #[arg(long, default_value_t = 500)]
        instances: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = counting::DEFAULT_ENUMERATION_BUDGET)]
        budget: u64,
    },
    /// Downsized literal point sums against the reduction formula
    Polysum {
        #[arg(long, default_value_t = 100)]
        instances: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = polysum::DEFAULT_POINT_BUDGET)]
        budget: u64,
    },
}

/// A computed result document plus the exit code it implies.
struct Outcome {
    document: Value,
    exit: i32,
}

fn load_sequence(path: &PathBuf) -> Result<ZSequence> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn parse_concrete_length(expr: &str, p_for_symbolic: u64) -> Result<u64> {
    if let Ok(v) = expr.trim().parse::<u64>() {
        return Ok(v);
    }
    let sym = parse_length(expr)?;
    Ok(sym.instantiate(p_for_symbolic))
}

fn parse_target(spec: Option<&str>, d: u32, n: u64) -> Result<GroupElement> {
    let Some(spec) = spec else {
        return Ok(GroupElement::zero(d));
    };
    let coords: Vec<u32> = spec
        .split(',')
        .map(|c| {
            c.trim()
                .parse::<u32>()
                .map_err(|_| Error::InvalidArgument(format!("bad coordinate {c:?}")))
        })
        .collect::<Result<_>>()?;
    if coords.len() != d as usize {
        return Err(Error::InvalidArgument(format!(
            "target has {} coordinates, sequence dimension is {d}",
            coords.len()
        )));
    }
    if let Some(c) = coords.iter().find(|&&c| c as u64 >= n) {
        return Err(Error::InvalidArgument(format!(
            "target coordinate {c} out of range for modulus {n}"
        )));
    }
    Ok(GroupElement::new(coords))
}

fn parse_pair(spec: &str) -> Result<(u8, u8)> {
    let parts: Vec<&str> = spec.split(',').collect();
    if parts.len() != 2 {
        return Err(Error::InvalidArgument(format!(
            "pair must be \"m,n\", got {spec:?}"
        )));
    }
    let m = parts[0].trim().parse::<u8>();
    let n = parts[1].trim().parse::<u8>();
    match (m, n) {
        (Ok(m), Ok(n)) => Ok((m, n)),
        _ => Err(Error::InvalidArgument(format!("bad pair {spec:?}"))),
    }
}

fn parse_profile(spec: &str) -> Result<CampaignProfile> {
    if spec == "mixed" {
        return Ok(CampaignProfile::Mixed);
    }
    Ok(match GeneratorProfile::from_str(spec)? {
        GeneratorProfile::Uniform => CampaignProfile::Uniform,
        GeneratorProfile::LowSupport(s) => CampaignProfile::LowSupport(s),
    })
}

fn to_value<T: serde::Serialize>(v: &T) -> Result<Value> {
    Ok(serde_json::to_value(v)?)
}

fn affine_vector_value(v: &AffineVector) -> Result<Value> {
    Ok(json!({
        "param": v.param,
        "forms": v.forms,
        "display": v.forms.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
    }))
}

fn preset_vector(preset: &str) -> Result<AffineVector> {
    let solve_derived = |k: u64| -> Result<AffineVector> {
        let size = parse_length(&format!("{k}p-3"))?;
        let p_len = parse_length("p")?;
        let two_p = parse_length("2p")?;
        let sys = assemble_system(&size, &[(p_len, 0)], (&two_p, parameter_for_size(k)))?;
        Ok(AffineVector::new(
            parameter_for_size(k),
            solve_triangular(&sys)?,
        ))
    };
    match preset {
        "corollary1-printed" | "8p-3-printed" => Ok(reference_solution(8).unwrap()),
        "corollary1-derived" | "8p-3-derived" => solve_derived(8),
        "corollary2" | "7p-3" => Ok(reference_solution(7).unwrap()),
        "corollary3" | "6p-3" => Ok(reference_solution(6).unwrap()),
        "corollary4" | "5p-3" => Ok(reference_solution(5).unwrap()),
        "9p-3-printed" => Ok(reference_solution(9).unwrap()),
        "9p-3-derived" => solve_derived(9),
        other => Err(Error::InvalidArgument(format!(
            "unknown preset {other:?}"
        ))),
    }
}

fn run_command(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Count {
            seq,
            len,
            target,
            mode,
            n,
            d,
        } => {
            let sequence = load_sequence(seq)?;
            if let Some(n) = n {
                if *n != sequence.modulus() {
                    return Err(Error::InvalidArgument(format!(
                        "--n {n} does not match file modulus {}",
                        sequence.modulus()
                    )));
                }
            }
            if let Some(d) = d {
                if *d != sequence.dimension() {
                    return Err(Error::InvalidArgument(format!(
                        "--d {d} does not match file dimension {}",
                        sequence.dimension()
                    )));
                }
            }
            let len = parse_concrete_length(len, sequence.modulus())?;
            let target = parse_target(target.as_deref(), sequence.dimension(), sequence.modulus())?;
            let count = counting::count_subsequences(&sequence, len, &target, (*mode).into())?;
            Ok(Outcome {
                document: json!({ "count": count.to_string_value() }),
                exit: 0,
            })
        }

        Command::Profile { seq, lens, mode } => {
            let sequence = load_sequence(seq)?;
            let lengths: Vec<u64> = lens
                .split(',')
                .map(|l| parse_concrete_length(l, sequence.modulus()))
                .collect::<Result<_>>()?;
            let profile = counting::count_profile(&sequence, &lengths, (*mode).into())?;
            let entries: Vec<Value> = profile
                .entries
                .iter()
                .map(|(l, c)| json!({ "len": l, "count": c.to_string_value() }))
                .collect();
            Ok(Outcome {
                document: json!({
                    "mode": match mode { ModeArg::Exact => "exact", ModeArg::Mod => "mod" },
                    "entries": entries,
                }),
                exit: 0,
            })
        }

        Command::Identity { source } => {
            let id = source.load()?;
            Ok(Outcome {
                document: to_value(&id)?,
                exit: 0,
            })
        }

        Command::Lift { source, target } => {
            let id = source.load()?;
            let target = parse_length(target)?;
            let lifted = lift_identity(&id, &target)?;
            Ok(Outcome {
                document: to_value(&lifted)?,
                exit: 0,
            })
        }

        Command::Verify {
            source,
            p,
            trials,
            seed,
            profile,
            force,
        } => {
            let id = source.load()?;
            let p = PrimeModulus::new(*p)?;
            let profile = parse_profile(profile)?;
            let report = verify_identity(&id, p, *trials, profile, *seed, *force)?;
            let exit = if report.status == VerifyStatus::Pass { 0 } else { 1 };
            Ok(Outcome {
                document: to_value(&report)?,
                exit,
            })
        }

        Command::Derive { replay, p } => run_derive(replay, *p),

        Command::Solve { size, param } => {
            let size = parse_length(size)?;
            let k = size.coefficient();
            let param = param.clone().unwrap_or_else(|| parameter_for_size(k).to_string());
            let p_len = parse_length("p")?;
            let two_p = parse_length("2p")?;
            let sys = assemble_system(&size, &[(p_len, 0)], (&two_p, &param))?;
            let solution = solve_triangular(&sys)?;
            let residuals = residual_check(&sys, &solution)?;
            let derived = AffineVector::new(&param, solution.clone());
            let mut doc = json!({
                "size": size.to_string(),
                "param": param,
                "assumptions": ["N^{p} = 0"],
                "unknowns": sys.unknowns.iter().map(|u| format!("N^{{{u}}}")).collect::<Vec<_>>(),
                "matrix": sys.rows.iter().map(|r| r.coefficients.clone()).collect::<Vec<_>>(),
                "rhs": sys.rows.iter().map(|r| r.rhs.to_string()).collect::<Vec<_>>(),
                "solution": affine_vector_value(&derived)?,
                "residuals_zero": residuals.iter().all(|r| r.is_identically_zero()),
                "p_min": sys.p_min,
            });
            if let Some(reference) = reference_solution(k) {
                let diff = diff_solutions(&solution, &reference.forms);
                let ref_residuals = residual_check(&sys, &reference.forms)?;
                doc["reference"] = affine_vector_value(&reference)?;
                doc["reference_residuals"] =
                    Value::from(ref_residuals.iter().map(|r| r.to_string()).collect::<Vec<_>>());
                doc["diff"] = to_value(&diff)?;
            }
            Ok(Outcome {
                document: doc,
                exit: 0,
            })
        }

        Command::Exceptional {
            preset,
            forms,
            cutoff,
        } => {
            let vector = match (preset, forms) {
                (Some(p), None) => preset_vector(p)?,
                (None, Some(path)) => {
                    let text = std::fs::read_to_string(path)?;
                    let v: AffineVector = serde_json::from_str(&text)?;
                    AffineVector::new(&v.param.clone(), v.forms)
                }
                _ => {
                    return Err(Error::InvalidArgument(
                        "give exactly one of --preset, --forms".into(),
                    ))
                }
            };
            let report = exceptional_primes(&vector.forms, *cutoff)?;
            Ok(Outcome {
                document: json!({
                    "vector": affine_vector_value(&vector)?,
                    "report": to_value(&report)?,
                }),
                exit: 0,
            })
        }

        Command::Polysum { seq, pair } => {
            let sequence = load_sequence(seq)?;
            let p = PrimeModulus::new(sequence.modulus())?;
            let pair = parse_pair(pair)?;
            let value = polysum_reduced(&sequence, p, pair)?;
            let q = p.get();
            let lengths: Vec<u64> = (1..=8).map(|j| j * q).collect();
            let profile = counting::count_profile(&sequence, &lengths, CountMode::Mod)?;
            let entries: Vec<Value> = profile
                .entries
                .iter()
                .map(|(l, c)| json!({ "len": l, "count": c.to_string_value() }))
                .collect();
            Ok(Outcome {
                document: json!({
                    "p": q,
                    "pair": [pair.0, pair.1],
                    "value": value,
                    "profile": entries,
                }),
                exit: 0,
            })
        }

        Command::Lemma3 {
            seq,
            p,
            trials,
            seed,
        } => run_lemma3(seq.as_ref(), *p, *trials, *seed),

        Command::Theorem3 { seq } => {
            let sequence = load_sequence(seq)?;
            let p = PrimeModulus::new(sequence.modulus())?;
            let report = theorem3_verdict(&sequence, p)?;
            let exit = if report.claim_holds { 0 } else { 1 };
            Ok(Outcome {
                document: to_value(&report)?,
                exit,
            })
        }

        Command::Construct { family, p, n } => {
            let seq = match family.as_str() {
                "theorem2" => {
                    let p = p.ok_or_else(|| {
                        Error::InvalidArgument("theorem2 construction needs --p".into())
                    })?;
                    theorem2_construction(PrimeModulus::new(p)?)?
                }
                other => {
                    let family = ExtremalFamily::from_str(other)?;
                    let n = n.ok_or_else(|| {
                        Error::InvalidArgument("witness families need --n".into())
                    })?;
                    known_extremal(family, n)?
                }
            };
            Ok(Outcome {
                document: to_value(&seq)?,
                exit: 0,
            })
        }

        Command::Search(SearchCmd::SConstant {
            n,
            d,
            k,
            budget,
            no_symmetry,
            max_size,
        }) => {
            let opts = SearchOptions {
                start: None,
                max_size: *max_size,
                node_budget: *budget,
                symmetry_reduction: !no_symmetry,
            };
            let result = s_constant(*n, *d, *k, &opts)?;
            let mut doc = to_value(&result)?;
            if let (ConstantOutcome::Determined { value }, Some(w)) =
                (&result.outcome, &result.witness)
            {
                doc["value"] = Value::from(*value);
                let ok = validate_witness(w, k * n, counting::DEFAULT_ENUMERATION_BUDGET)?;
                doc["witness_validated"] = Value::from(ok);
                if !ok {
                    return Ok(Outcome { document: doc, exit: 1 });
                }
            }
            Ok(Outcome {
                document: doc,
                exit: 0,
            })
        }

        Command::Campaign {
            statement,
            p,
            trials,
            seed,
        } => {
            let statement = StatementId::from_str(statement)?;
            let p = PrimeModulus::new(*p)?;
            let report = verify_statement(statement, p, *trials, *seed)?;
            let exit = if report.status == CampaignStatus::Fail { 1 } else { 0 };
            Ok(Outcome {
                document: to_value(&report)?,
                exit,
            })
        }

        Command::Oracle(OracleCmd::Counting {
            instances,
            seed,
            budget,
        }) => {
            let report = counting::oracle_campaign(*instances, *seed, *budget)?;
            let exit = if report.passed() { 0 } else { 1 };
            Ok(Outcome {
                document: to_value(&report)?,
                exit,
            })
        }

        Command::Oracle(OracleCmd::Polysum {
            instances,
            seed,
            budget,
        }) => {
            let report = polysum::oracle_campaign(*instances, *seed, *budget)?;
            let exit = if report.passed() { 0 } else { 1 };
            Ok(Outcome {
                document: to_value(&report)?,
                exit,
            })
        }
    }
}

fn run_derive(replay: &str, p: u64) -> Result<Outcome> {
    let p = PrimeModulus::new(p)?;
    let q = p.get();
    let label = |len: u64| -> String {
        if len % q == 0 {
            format!("{}p", len / q)
        } else {
            len.to_string()
        }
    };
    match replay {
        "lemma1" => {
            let size = parse_length("5p-3")?;
            let insts = vec![
                lift_identity(&base_identity(4)?, &size)?.instantiate(p)?,
                base_identity(5)?.instantiate(p)?,
            ];
            let outcome =
                crate::identities::derive_counts(&insts, &[(q, 0), (2 * q, 0)], &[], p)?;
            derive_outcome_doc("lemma1", q, outcome, label)
        }
        "lemma2" => {
            let size = parse_length("7p-3")?;
            let insts = vec![
                lift_identity(&base_identity(4)?, &size)?.instantiate(p)?,
                lift_identity(&base_identity(5)?, &size)?.instantiate(p)?,
                lift_identity(&base_identity(6)?, &size)?.instantiate(p)?,
            ];
            let outcome =
                crate::identities::derive_counts(&insts, &[(q, 0), (3 * q, 0)], &[], p)?;
            derive_outcome_doc("lemma2", q, outcome, label)
        }
        "theorem1" => {
            let chain = theorem1_chain(p)?;
            let relations = remark1_relations()?;
            Ok(Outcome {
                document: json!({
                    "replay": "theorem1",
                    "p": q,
                    "chain": to_value(&chain)?,
                    "parameter_relations": to_value(&relations)?,
                }),
                exit: if chain.consistent { 0 } else { 1 },
            })
        }
        other => Err(Error::InvalidArgument(format!(
            "unknown replay {other:?} (expected lemma1, lemma2 or theorem1)"
        ))),
    }
}

fn derive_outcome_doc(
    replay: &str,
    q: u64,
    outcome: DeriveOutcome,
    label: impl Fn(u64) -> String,
) -> Result<Outcome> {
    match outcome {
        DeriveOutcome::Solved { forms, binding } => {
            let mut counts = serde_json::Map::new();
            for (len, form) in &forms {
                counts.insert(
                    format!("N^{{{}}}", label(*len)),
                    json!({
                        "form": form.to_string(),
                        "residue": form.eval_mod(0, PrimeModulus::new(q).unwrap()),
                    }),
                );
            }
            Ok(Outcome {
                document: json!({
                    "replay": replay,
                    "p": q,
                    "counts": Value::Object(counts),
                    "parameter_binding": binding.map(|(n, v)| json!({ "param": n, "residue": v })),
                }),
                exit: 0,
            })
        }
        DeriveOutcome::Contradiction { identity, residue } => Ok(Outcome {
            document: json!({
                "replay": replay,
                "p": q,
                "contradiction": { "identity": identity, "residue": residue },
            }),
            exit: 1,
        }),
    }
}

fn run_lemma3(seq: Option<&PathBuf>, p: Option<u64>, trials: u64, seed: u64) -> Result<Outcome> {
    match (seq, p) {
        (Some(path), _) => {
            let sequence = load_sequence(path)?;
            let p = PrimeModulus::new(sequence.modulus())?;
            let report = lemma3_check(&sequence, p)?;
            let exit = if report.all_equal() { 0 } else { 1 };
            Ok(Outcome {
                document: to_value(&report)?,
                exit,
            })
        }
        (None, Some(p)) => {
            let p = PrimeModulus::new(p)?;
            let q = p.get();
            let mut deviating = 0u64;
            let mut first_failure: Option<Value> = None;
            for trial in 0..trials {
                let profile = if trial % 2 == 0 {
                    GeneratorProfile::Uniform
                } else {
                    GeneratorProfile::LowSupport(1 + (trial / 2) % 4)
                };
                let seq = random_sequence(
                    q,
                    3,
                    9 * q - 3,
                    profile,
                    crate::sequences::mix_seed(&[seed, trial]),
                )?;
                let report = lemma3_check(&seq, p)?;
                if !report.all_equal() {
                    deviating += 1;
                    if first_failure.is_none() {
                        first_failure = Some(to_value(&report)?);
                    }
                }
            }
            let doc = json!({
                "p": q,
                "trials": trials,
                "seed": seed,
                "deviating_trials": deviating,
                "first_failure": first_failure,
            });
            Ok(Outcome {
                document: doc,
                exit: if deviating == 0 { 0 } else { 1 },
            })
        }
        (None, None) => Err(Error::InvalidArgument(
            "lemma3 needs --seq or --p".into(),
        )),
    }
}

/// Canonical request encoding for the cache: version, command name, and a
/// sorted argument map with file arguments replaced by content digests.
fn canonical_request(cmd: &Command) -> Result<Value> {
    let mut args: BTreeMap<String, String> = BTreeMap::new();
    let name;
    let file = |key: &str, path: &PathBuf, args: &mut BTreeMap<String, String>| -> Result<()> {
        args.insert(key.into(), cache::file_digest(path)?);
        Ok(())
    };
    match cmd {
        Command::Count {
            seq,
            len,
            target,
            mode,
            n,
            d,
        } => {
            name = "count";
            file("seq", seq, &mut args)?;
            args.insert("len".into(), len.clone());
            if let Some(t) = target {
                args.insert("target".into(), t.clone());
            }
            args.insert("mode".into(), format!("{mode:?}"));
            if let Some(n) = n {
                args.insert("n".into(), n.to_string());
            }
            if let Some(d) = d {
                args.insert("d".into(), d.to_string());
            }
        }
        Command::Profile { seq, lens, mode } => {
            name = "profile";
            file("seq", seq, &mut args)?;
            args.insert("lens".into(), lens.clone());
            args.insert("mode".into(), format!("{mode:?}"));
        }
        Command::Identity { source } => {
            name = "identity";
            args.insert("source".into(), source.descriptor()?);
        }
        Command::Lift { source, target } => {
            name = "lift";
            args.insert("source".into(), source.descriptor()?);
            args.insert("target".into(), target.clone());
        }
        Command::Verify {
            source,
            p,
            trials,
            seed,
            profile,
            force,
        } => {
            name = "verify";
            args.insert("source".into(), source.descriptor()?);
            args.insert("p".into(), p.to_string());
            args.insert("trials".into(), trials.to_string());
            args.insert("seed".into(), seed.to_string());
            args.insert("profile".into(), profile.clone());
            args.insert("force".into(), force.to_string());
        }
        Command::Derive { replay, p } => {
            name = "derive";
            args.insert("replay".into(), replay.clone());
            args.insert("p".into(), p.to_string());
        }
        Command::Solve { size, param } => {
            name = "solve";
            args.insert("size".into(), size.clone());
            if let Some(p) = param {
                args.insert("param".into(), p.clone());
            }
        }
        Command::Exceptional {
            preset,
            forms,
            cutoff,
        } => {
            name = "exceptional";
            if let Some(p) = preset {
                args.insert("preset".into(), p.clone());
            }
            if let Some(path) = forms {
                file("forms", path, &mut args)?;
            }
            args.insert("cutoff".into(), cutoff.to_string());
        }
        Command::Polysum { seq, pair } => {
            name = "polysum";
            file("seq", seq, &mut args)?;
            args.insert("pair".into(), pair.clone());
        }
        Command::Lemma3 {
            seq,
            p,
            trials,
            seed,
        } => {
            name = "lemma3";
            if let Some(path) = seq {
                file("seq", path, &mut args)?;
            }
            if let Some(p) = p {
                args.insert("p".into(), p.to_string());
            }
            args.insert("trials".into(), trials.to_string());
            args.insert("seed".into(), seed.to_string());
        }
        Command::Theorem3 { seq } => {
            name = "theorem3";
            file("seq", seq, &mut args)?;
        }
        Command::Construct { family, p, n } => {
            name = "construct";
            args.insert("family".into(), family.clone());
            if let Some(p) = p {
                args.insert("p".into(), p.to_string());
            }
            if let Some(n) = n {
                args.insert("n".into(), n.to_string());
            }
        }
        Command::Search(SearchCmd::SConstant {
            n,
            d,
            k,
            budget,
            no_symmetry,
            max_size,
        }) => {
            name = "search.s-constant";
            args.insert("n".into(), n.to_string());
            args.insert("d".into(), d.to_string());
            args.insert("k".into(), k.to_string());
            args.insert("budget".into(), budget.to_string());
            args.insert("no_symmetry".into(), no_symmetry.to_string());
            args.insert("max_size".into(), max_size.to_string());
        }
        Command::Campaign {
            statement,
            p,
            trials,
            seed,
        } => {
            name = "campaign";
            args.insert("statement".into(), statement.clone());
            args.insert("p".into(), p.to_string());
            args.insert("trials".into(), trials.to_string());
            args.insert("seed".into(), seed.to_string());
        }
        Command::Oracle(OracleCmd::Counting {
            instances,
            seed,
            budget,
        }) => {
            name = "oracle.counting";
            args.insert("instances".into(), instances.to_string());
            args.insert("seed".into(), seed.to_string());
            args.insert("budget".into(), budget.to_string());
        }
        Command::Oracle(OracleCmd::Polysum {
            instances,
            seed,
            budget,
        }) => {
            name = "oracle.polysum";
            args.insert("instances".into(), instances.to_string());
            args.insert("seed".into(), seed.to_string());
            args.insert("budget".into(), budget.to_string());
        }
    }
    Ok(json!({
        "version": env!("CARGO_PKG_VERSION"),
        "command": name,
        "args": args,
    }))
}

/// Flatten a JSON document to tab-separated path/value lines.
pub fn to_tsv(value: &Value) -> String {
    fn walk(prefix: &str, v: &Value, out: &mut String) {
        match v {
            Value::Object(map) => {
                for (k, v) in map {
                    let path = if prefix.is_empty() {
                        k.clone()
                    } else {
                        format!("{prefix}.{k}")
                    };
                    walk(&path, v, out);
                }
            }
            Value::Array(items) => {
                for (i, v) in items.iter().enumerate() {
                    walk(&format!("{prefix}.{i}"), v, out);
                }
            }
            Value::Null => {
                out.push_str(prefix);
                out.push('\t');
                out.push_str("null\n");
            }
            Value::String(s) => {
                out.push_str(prefix);
                out.push('\t');
                out.push_str(s);
                out.push('\n');
            }
            other => {
                out.push_str(prefix);
                out.push('\t');
                out.push_str(&other.to_string());
                out.push('\n');
            }
        }
    }
    let mut out = String::new();
    walk("", value, &mut out);
    out
}

/// Parse argv, dispatch, print the result document, map errors to exit
/// codes. Heavy operations are served from the cache when configured.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders help/version on stdout with success
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if let Some(jobs) = cli.jobs {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    let cache_dir = cli
        .cache_dir
        .clone()
        .or_else(|| std::env::var_os("ZSLAB_CACHE").map(PathBuf::from));

    let outcome = match dispatch(&cli.command, cache_dir.as_deref()) {
        Ok(outcome) => outcome,
        Err(e) => {
            eprintln!("error: {e}");
            return match e {
                Error::BudgetExceeded { .. } => 3,
                _ => 2,
            };
        }
    };
    match cli.format {
        OutputFormat::Json => {
            println!(
                "{}",
                serde_json::to_string_pretty(&outcome.document).expect("serializable document")
            );
        }
        OutputFormat::Tsv => print!("{}", to_tsv(&outcome.document)),
    }
    outcome.exit
}

fn dispatch(cmd: &Command, cache_dir: Option<&std::path::Path>) -> Result<Outcome> {
    let Some(dir) = cache_dir else {
        return run_command(cmd);
    };
    let request = canonical_request(cmd)?;
    cache::get_or_compute(dir, &request, || {
        let outcome = run_command(cmd)?;
        Ok((outcome.document, outcome.exit))
    })
    .map(|(document, exit)| Outcome { document, exit })
}
