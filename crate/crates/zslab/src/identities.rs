//! Counting congruences as first-class values: construction, the lifting
//! transform, empirical verification, and forward derivation of count
//! residues.
//!
//! An identity asserts that for every prime p >= p_min and every sequence
//! J over Z_p^d of size domain(p),
//!
//! ```text
//! constant + sum_i coefficient_i * N^{l_i(p)}(J) == 0  (mod p)
//! ```
//!
//! Lifting sums an identity over all size-domain subsequences of a larger
//! sequence; counting how often each subsequence is hit turns the constant
//! into C(target, domain)·constant and each coefficient into
//! C(target - l, domain - l)·coefficient, all reduced symbolically.
//!
//! The base identities for Z_p^3 at sizes kp-3 are axioms of this
//! workbench: they are constructed with the asserted threshold p_min = 11
//! and subjected to falsification campaigns; verification below the
//! threshold is possible behind an explicit flag and is how the small-p
//! scope metadata gets produced.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{symbolic_binom, PrimeModulus, SymbolicLength};
use crate::counting::{count_profile, CountMode};
use crate::error::{Error, Result};
use crate::linearfp::AffineForm;
use crate::sequences::{mix_seed, random_sequence, GeneratorProfile, ZSequence};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct IdentityTerm {
    #[serde(rename = "len")]
    pub length: SymbolicLength,
    #[serde(rename = "coef")]
    pub coefficient: i64,
}

/// An asserted congruence over all sequences of a symbolic size.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CountIdentity {
    pub domain: SymbolicLength,
    pub constant: i64,
    pub terms: Vec<IdentityTerm>,
    #[serde(rename = "d")]
    pub dimension: u32,
    pub p_min: u64,
}

impl CountIdentity {
    pub fn validate(&self) -> Result<()> {
        if self.terms.is_empty() {
            return Err(Error::InvalidArgument("identity has no terms".into()));
        }
        for w in self.terms.windows(2) {
            if !(w[0].length < w[1].length) {
                return Err(Error::InvalidArgument(
                    "term lengths must be strictly increasing".into(),
                ));
            }
        }
        for t in &self.terms {
            if t.coefficient == 0 {
                return Err(Error::InvalidArgument("zero coefficient term".into()));
            }
            if !t.length.le(&self.domain) {
                return Err(Error::InvalidArgument(format!(
                    "term length {} exceeds domain {}",
                    t.length, self.domain
                )));
            }
        }
        Ok(())
    }

    /// Concrete lengths and coefficients at a given prime.
    pub fn instantiate(&self, p: PrimeModulus) -> Result<InstantiatedIdentity> {
        let q = p.get();
        let domain = self.domain.instantiate(q);
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let len = t.length.instantiate(q);
            if len > domain {
                return Err(Error::Unsupported(format!(
                    "term length {} exceeds domain {domain} at p = {q}",
                    t.length
                )));
            }
            terms.push((len, t.coefficient));
        }
        Ok(InstantiatedIdentity {
            label: self.to_string(),
            p: q,
            domain,
            constant: self.constant,
            terms,
        })
    }
}

impl fmt::Display for CountIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.constant)?;
        for t in &self.terms {
            let sign = if t.coefficient >= 0 { '+' } else { '-' };
            match t.coefficient.abs() {
                1 => write!(f, " {sign} N^{{{}}}", t.length)?,
                c => write!(f, " {sign} {c}N^{{{}}}", t.length)?,
            }
        }
        write!(f, " == 0 at size {} (d={})", self.domain, self.dimension)
    }
}

/// The alternating identity 1 - N^p + N^2p - ... at size kp-3 over Z_p^3.
pub fn base_identity(k: u32) -> Result<CountIdentity> {
    if !(4..=9).contains(&k) {
        return Err(Error::InvalidArgument(format!(
            "base identity defined for sizes 4p-3 through 9p-3, got k = {k}"
        )));
    }
    let terms = (1..k as u64)
        .map(|j| IdentityTerm {
            length: SymbolicLength::new(j, 0).unwrap(),
            coefficient: if j % 2 == 0 { 1 } else { -1 },
        })
        .collect();
    Ok(CountIdentity {
        domain: SymbolicLength::new(k as u64, -3).unwrap(),
        constant: 1,
        terms,
        dimension: 3,
        // asserted range of the axiom; structural validity starts lower
        // and is probed behind the out-of-domain flag
        p_min: 11,
    })
}

/// The dimension-2 identity at size 3p-3:
/// 1 - N^{p-1} - N^p + N^{2p-1} + N^{2p} == 0.
pub fn remark_identity_zp2() -> CountIdentity {
    let term = |q: u64, r: i64, c: i64| IdentityTerm {
        length: SymbolicLength::new(q, r).unwrap(),
        coefficient: c,
    };
    CountIdentity {
        domain: SymbolicLength::new(3, -3).unwrap(),
        constant: 1,
        terms: vec![term(1, -1, -1), term(1, 0, -1), term(2, -1, 1), term(2, 0, 1)],
        dimension: 2,
        p_min: 3,
    }
}

/// Lift an identity to a larger size by double counting: every zero-sum
/// subsequence of length l is hit C(target - l, domain - l) times across
/// the size-domain subsequences, and the constant C(target, domain) times.
pub fn lift_identity(identity: &CountIdentity, target: &SymbolicLength) -> Result<CountIdentity> {
    identity.validate()?;
    if !identity.domain.le(target) {
        return Err(Error::InvalidArgument(format!(
            "lift target {target} is below the domain {}",
            identity.domain
        )));
    }
    let constant_sv = symbolic_binom(target, &identity.domain)?;
    let mut p_min = identity.p_min.max(constant_sv.p_min).max(target.min_prime());
    let constant = constant_sv
        .value
        .checked_mul(identity.constant)
        .ok_or_else(|| Error::Unsupported("lifted constant overflow".into()))?;
    let mut terms = Vec::with_capacity(identity.terms.len());
    for t in &identity.terms {
        let num = target.sub(&t.length)?;
        let den = identity.domain.sub(&t.length)?;
        let sv = symbolic_binom(&num, &den)?;
        p_min = p_min.max(sv.p_min);
        let coefficient = sv
            .value
            .checked_mul(t.coefficient)
            .ok_or_else(|| Error::Unsupported("lifted coefficient overflow".into()))?;
        if coefficient != 0 {
            terms.push(IdentityTerm {
                length: t.length,
                coefficient,
            });
        }
    }
    let lifted = CountIdentity {
        domain: *target,
        constant,
        terms,
        dimension: identity.dimension,
        p_min,
    };
    lifted.validate()?;
    Ok(lifted)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifyStatus {
    Pass,
    Fail,
}

/// Outcome of an empirical campaign against one identity.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerificationReport {
    pub identity: String,
    pub p: u64,
    pub trials: u64,
    pub profile: String,
    pub seed: u64,
    /// true when p is below the identity's asserted threshold and the
    /// campaign was an explicit out-of-domain probe
    pub below_p_min: bool,
    pub failures: Vec<ZSequence>,
    pub status: VerifyStatus,
}

/// Trial mix for verification campaigns.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CampaignProfile {
    Uniform,
    LowSupport(u64),
    /// 50% uniform, 50% low-support with cycling support sizes. Uniform
    /// sequences are far from extremal and alone would weakly test the
    /// identities.
    Mixed,
}

impl fmt::Display for CampaignProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CampaignProfile::Uniform => write!(f, "uniform"),
            CampaignProfile::LowSupport(s) => write!(f, "low-support:{s}"),
            CampaignProfile::Mixed => write!(f, "mixed"),
        }
    }
}

impl CampaignProfile {
    pub(crate) fn for_trial(&self, trial: u64) -> GeneratorProfile {
        match self {
            CampaignProfile::Uniform => GeneratorProfile::Uniform,
            CampaignProfile::LowSupport(s) => GeneratorProfile::LowSupport(*s),
            CampaignProfile::Mixed => {
                if trial % 2 == 0 {
                    GeneratorProfile::Uniform
                } else {
                    GeneratorProfile::LowSupport(1 + (trial / 2) % 4)
                }
            }
        }
    }
}

#[cfg(test)]
fn eval_instantiated(inst: &InstantiatedIdentity, seq: &ZSequence, p: PrimeModulus) -> Result<u64> {
    let lengths: Vec<u64> = inst.terms.iter().map(|(l, _)| *l).collect();
    let profile = count_profile(seq, &lengths, CountMode::Mod)?;
    let q = p.get();
    let mut acc = p.reduce_i64(inst.constant);
    for (len, coef) in &inst.terms {
        let count = profile.get(*len).expect("profile covers term").as_mod(q);
        acc = (acc + p.reduce_i64(*coef) * count) % q;
    }
    Ok(acc)
}

/// Verify several identities sharing one domain on the same trial
/// sequences, one count profile per trial.
pub fn verify_identity_batch(
    identities: &[&CountIdentity],
    p: PrimeModulus,
    trials: u64,
    profile: CampaignProfile,
    seed: u64,
    allow_below_p_min: bool,
) -> Result<Vec<VerificationReport>> {
    let Some(first) = identities.first() else {
        return Ok(Vec::new());
    };
    for id in identities {
        id.validate()?;
        if (id.domain, id.dimension) != (first.domain, first.dimension) {
            return Err(Error::InvalidArgument(
                "batched identities must share domain and dimension".into(),
            ));
        }
        if p.get() < id.p_min && !allow_below_p_min {
            return Err(Error::InvalidArgument(format!(
                "p = {p} is below the identity threshold {}; pass the out-of-domain flag to probe anyway",
                id.p_min
            )));
        }
    }
    let insts: Vec<InstantiatedIdentity> = identities
        .iter()
        .map(|id| id.instantiate(p))
        .collect::<Result<_>>()?;
    let q = p.get();
    let domain = first.domain.instantiate(q);
    let mut lengths: Vec<u64> = insts
        .iter()
        .flat_map(|i| i.terms.iter().map(|(l, _)| *l))
        .collect();
    lengths.sort_unstable();
    lengths.dedup();

    let failures: Vec<(u64, Vec<usize>, ZSequence)> = (0..trials)
        .into_par_iter()
        .filter_map(|trial| {
            let gen = profile.for_trial(trial);
            let seq = random_sequence(
                q,
                first.dimension,
                domain,
                gen,
                mix_seed(&[seed, trial]),
            )
            .expect("generator arguments are valid");
            let counts = count_profile(&seq, &lengths, CountMode::Mod)
                .expect("profile lengths within domain");
            let mut bad = Vec::new();
            for (idx, inst) in insts.iter().enumerate() {
                let mut acc = (inst.constant.rem_euclid(q as i64)) as u64;
                for (len, coef) in &inst.terms {
                    let count = counts.get(*len).unwrap().as_mod(q);
                    acc = (acc + (coef.rem_euclid(q as i64)) as u64 * count) % q;
                }
                if acc != 0 {
                    bad.push(idx);
                }
            }
            (!bad.is_empty()).then_some((trial, bad, seq))
        })
        .collect();

    let mut sorted = failures;
    sorted.sort_by_key(|(t, _, _)| *t);
    Ok(insts
        .iter()
        .enumerate()
        .map(|(idx, inst)| {
            let witnesses: Vec<ZSequence> = sorted
                .iter()
                .filter(|(_, bad, _)| bad.contains(&idx))
                .map(|(_, _, s)| s.clone())
                .collect();
            VerificationReport {
                identity: inst.label.clone(),
                p: q,
                trials,
                profile: profile.to_string(),
                seed,
                below_p_min: q < identities[idx].p_min,
                status: if witnesses.is_empty() {
                    VerifyStatus::Pass
                } else {
                    VerifyStatus::Fail
                },
                failures: witnesses,
            }
        })
        .collect())
}

/// Evaluate the congruence on randomly generated sequences of the
/// identity's size, collecting counterexamples.
pub fn verify_identity(
    identity: &CountIdentity,
    p: PrimeModulus,
    trials: u64,
    profile: CampaignProfile,
    seed: u64,
    allow_below_p_min: bool,
) -> Result<VerificationReport> {
    let mut reports =
        verify_identity_batch(&[identity], p, trials, profile, seed, allow_below_p_min)?;
    Ok(reports.pop().expect("one report per identity"))
}

/// An identity with concrete lengths, ready for derivation at a fixed p.
#[derive(Clone, Debug)]
pub struct InstantiatedIdentity {
    pub label: String,
    pub p: u64,
    pub domain: u64,
    pub constant: i64,
    pub terms: Vec<(u64, i64)>,
}

/// Result of forward derivation.
#[derive(Clone, Debug)]
pub enum DeriveOutcome {
    Solved {
        /// determined counts, keyed by concrete length
        forms: BTreeMap<u64, AffineForm>,
        /// residue forced on the free parameter, if some identity closed
        /// over it (e.g. t == -6 in the chain arguments)
        binding: Option<(String, u64)>,
    },
    /// An identity all of whose counts were fixed evaluated to a nonzero
    /// residue: the assumption set is impossible.
    Contradiction { identity: String, residue: u64 },
}

/// Forward substitution over affine forms in at most one free parameter.
///
/// Each identity must introduce at most one yet-unknown length (its
/// pivot). Identities with every length fixed must reduce to zero; a
/// nonzero constant residue is a contradiction certificate, and a residue
/// that still involves the parameter pins the parameter instead.
pub fn derive_counts(
    identities: &[InstantiatedIdentity],
    assumptions: &[(u64, u64)],
    free: &[(u64, String)],
    p: PrimeModulus,
) -> Result<DeriveOutcome> {
    if free.len() > 1 {
        return Err(Error::Unsupported(
            "derivation supports at most one free parameter".into(),
        ));
    }
    let q = p.get();
    let mut known: BTreeMap<u64, AffineForm> = BTreeMap::new();
    for &(len, residue) in assumptions {
        known.insert(len, AffineForm::constant((residue % q) as i64));
    }
    let param_name = free.first().map(|(_, name)| name.clone());
    for (len, name) in free {
        known.insert(*len, AffineForm::new(name, 1, 0));
    }

    let mut derived: BTreeMap<u64, AffineForm> = BTreeMap::new();
    let mut binding: Option<(String, u64)> = None;

    for inst in identities {
        let unknowns: Vec<usize> = inst
            .terms
            .iter()
            .enumerate()
            .filter(|(_, (len, _))| !known.contains_key(len))
            .map(|(i, _)| i)
            .collect();
        match unknowns.len() {
            0 => {
                let mut acc = AffineForm::constant(inst.constant);
                for (len, coef) in &inst.terms {
                    acc = acc.add(&known[len].scaled(*coef));
                }
                let alpha = p.reduce_i64(acc.alpha);
                let beta = p.reduce_i64(acc.beta);
                if alpha == 0 && beta == 0 {
                    continue;
                }
                if alpha == 0 {
                    return Ok(DeriveOutcome::Contradiction {
                        identity: inst.label.clone(),
                        residue: beta,
                    });
                }
                // alpha·x + beta == 0 pins the parameter
                let value = (q - beta) % q * p.inv(alpha) % q;
                match &binding {
                    None => {
                        binding = Some((
                            param_name.clone().unwrap_or_else(|| "x".into()),
                            value,
                        ))
                    }
                    Some((_, prev)) if *prev == value => {}
                    Some((name, prev)) => {
                        return Ok(DeriveOutcome::Contradiction {
                            identity: format!(
                                "{} (parameter {name} already pinned to {prev}, now {value})",
                                inst.label
                            ),
                            residue: (value + q - prev) % q,
                        })
                    }
                }
            }
            1 => {
                let pivot = unknowns[0];
                let (pivot_len, pivot_coef) = inst.terms[pivot];
                let mut acc = AffineForm::constant(inst.constant);
                for (i, (len, coef)) in inst.terms.iter().enumerate() {
                    if i != pivot {
                        acc = acc.add(&known[len].scaled(*coef));
                    }
                }
                // pivot_coef · x = -acc
                let neg = acc.scaled(-1);
                let form = if pivot_coef != 0
                    && neg.alpha % pivot_coef == 0
                    && neg.beta % pivot_coef == 0
                {
                    AffineForm {
                        param: neg.param.clone(),
                        alpha: neg.alpha / pivot_coef,
                        beta: neg.beta / pivot_coef,
                    }
                } else {
                    let inv = p.inv(p.reduce_i64(pivot_coef));
                    AffineForm {
                        param: neg.param.clone(),
                        alpha: (p.reduce_i64(neg.alpha) * inv % q) as i64,
                        beta: (p.reduce_i64(neg.beta) * inv % q) as i64,
                    }
                };
                known.insert(pivot_len, form.clone());
                derived.insert(pivot_len, form);
            }
            n => {
                return Err(Error::CannotOrient {
                    identity: inst.label.clone(),
                    unknowns: n,
                })
            }
        }
    }
    Ok(DeriveOutcome::Solved {
        forms: derived,
        binding,
    })
}

/// A linear relation between named parameters, constant on the right:
/// sum of coefficient·name == constant (mod p), for p >= p_min.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Congruence {
    pub terms: Vec<(i64, String)>,
    pub constant: i64,
    pub p_min: u64,
}

impl Congruence {
    /// Divide all coefficients by their gcd.
    pub fn reduced(&self) -> Congruence {
        let mut g = self.constant.unsigned_abs();
        for (c, _) in &self.terms {
            g = num_integer::gcd(g, c.unsigned_abs());
        }
        if g <= 1 {
            return self.clone();
        }
        Congruence {
            terms: self
                .terms
                .iter()
                .map(|(c, n)| (c / g as i64, n.clone()))
                .collect(),
            constant: self.constant / g as i64,
            p_min: self.p_min,
        }
    }

    pub fn eval_mod(&self, values: &BTreeMap<String, u64>, p: PrimeModulus) -> Result<u64> {
        let q = p.get();
        let mut acc = p.reduce_i64(-self.constant);
        for (c, name) in &self.terms {
            let v = values.get(name).ok_or_else(|| {
                Error::InvalidArgument(format!("no value bound for parameter {name}"))
            })?;
            acc = (acc + p.reduce_i64(*c) * (v % q)) % q;
        }
        Ok(acc)
    }
}

impl fmt::Display for Congruence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut lhs = String::new();
        let mut rhs = String::new();
        for (c, name) in &self.terms {
            let side = if *c >= 0 { &mut lhs } else { &mut rhs };
            let c = c.abs();
            if !side.is_empty() {
                side.push_str(" + ");
            }
            if c == 1 {
                side.push_str(name);
            } else {
                side.push_str(&format!("{c}{name}"));
            }
        }
        if self.constant != 0 || rhs.is_empty() {
            if !rhs.is_empty() {
                rhs.push_str(" + ");
            }
            rhs.push_str(&self.constant.to_string());
        }
        if lhs.is_empty() {
            lhs.push('0');
        }
        write!(f, "{lhs} == {rhs}")
    }
}

/// Double counting at one length: if N^l(I) == c for every size-`small`
/// subsequence I of J (|J| = big), then
/// C(big-l, small-l)·N^l(J) == C(big, small)·c.
pub fn relate_parameters(
    small: &SymbolicLength,
    big: &SymbolicLength,
    len: &SymbolicLength,
    lhs_name: &str,
    rhs_name: &str,
) -> Result<Congruence> {
    if !small.le(big) || !len.le(small) {
        return Err(Error::InvalidArgument(format!(
            "need len <= small <= big, got {len}, {small}, {big}"
        )));
    }
    let lhs = symbolic_binom(&big.sub(len)?, &small.sub(len)?)?;
    let rhs = symbolic_binom(big, small)?;
    Ok(Congruence {
        terms: vec![(lhs.value, lhs_name.into()), (-rhs.value, rhs_name.into())],
        constant: 0,
        p_min: lhs.p_min.max(rhs.p_min),
    })
}

/// The printed parameter relations alongside recomputed ones.
///
/// The recomputation applies the double-counting mechanism with the
/// hypothesis constant c at size 4p-3 and length 2p. The printed list is
/// retained verbatim; the two disagree on the k relation (printed
/// 3k == 14t versus recomputed 6k == 56c, which with 3t == 10c would force
/// 56c == 0), and neither is asserted as ground truth here.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RemarkRelations {
    pub printed: Vec<String>,
    pub recomputed: Vec<String>,
}

pub fn remark1_relations() -> Result<RemarkRelations> {
    let printed = vec![
        "5r == 3t".to_string(),
        "5r == 2m".to_string(),
        "7r == 2l".to_string(),
        "3k == 14t".to_string(),
        "3t == 10c".to_string(),
        "2m == 10c".to_string(),
        "r == 2c".to_string(),
    ];
    let small = SymbolicLength::new(4, -3).unwrap();
    let two_p = SymbolicLength::new(2, 0).unwrap();
    let mut recomputed = Vec::new();
    for (k, name) in [(5u64, "r"), (6, "t"), (7, "m"), (8, "l"), (9, "k")] {
        let big = SymbolicLength::new(k, -3).unwrap();
        let rel = relate_parameters(&small, &big, &two_p, name, "c")?;
        recomputed.push(rel.to_string());
    }
    Ok(RemarkRelations {
        printed,
        recomputed,
    })
}

/// Replay of the first chain argument at a concrete prime: the count at
/// 5p of a size-(6p-3) subsequence forces t == -6, double counting links
/// 3t == 10c, and the hypothesis constant must satisfy 5c == -9.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Theorem1Chain {
    pub p: u64,
    /// residue of t = N^{2p} at size 6p-3 forced by N^{5p} == 0
    pub t: u64,
    /// the double-counting relation used
    pub relation: String,
    /// residue of the hypothesis constant c solved from the relation
    pub c: u64,
    /// residue of 5c, expected congruent to -9
    pub five_c: u64,
    pub five_c_expected: u64,
    pub consistent: bool,
    /// N^{4p} at size 6p-3 under the binding, expected -3
    pub n4p: u64,
    pub n4p_expected: u64,
}

pub fn theorem1_chain(p: PrimeModulus) -> Result<Theorem1Chain> {
    let q = p.get();
    if q <= 7 {
        return Err(Error::InvalidArgument(
            "the chain argument assumes p > 7".into(),
        ));
    }
    let size = SymbolicLength::new(6, -3).unwrap();
    let b4 = lift_identity(&base_identity(4)?, &size)?;
    let b5 = lift_identity(&base_identity(5)?, &size)?;
    let b6 = base_identity(6)?;
    let insts = vec![
        b4.instantiate(p)?,
        b5.instantiate(p)?,
        b6.instantiate(p)?,
    ];
    let assumptions = vec![(q, 0u64), (5 * q, 0u64)];
    let free = vec![(2 * q, "t".to_string())];
    let outcome = derive_counts(&insts, &assumptions, &free, p)?;
    let DeriveOutcome::Solved { forms, binding } = outcome else {
        return Err(Error::InvalidArgument(
            "chain derivation contradicted itself".into(),
        ));
    };
    let (_, t) = binding.ok_or_else(|| {
        Error::InvalidArgument("chain derivation did not pin the parameter".into())
    })?;

    let small = SymbolicLength::new(4, -3).unwrap();
    let two_p = SymbolicLength::new(2, 0).unwrap();
    let relation = relate_parameters(&small, &size, &two_p, "t", "c")?;
    // relation is A·t - B·c == 0: solve for c given t
    let a = p.reduce_i64(relation.terms[0].0);
    let b = p.reduce_i64(-relation.terms[1].0);
    let c = a * t % q * p.inv(b) % q;
    let five_c = 5 * c % q;
    let five_c_expected = p.reduce_i64(-9);
    let n4p_form = forms
        .get(&(4 * q))
        .ok_or_else(|| Error::InvalidArgument("N^{4p} not derived".into()))?;
    let n4p = n4p_form.eval_mod(t, p);
    Ok(Theorem1Chain {
        p: q,
        t,
        relation: relation.to_string(),
        c,
        five_c,
        five_c_expected,
        consistent: five_c == five_c_expected,
        n4p,
        n4p_expected: p.reduce_i64(-3),
    })
}
