//! Counting N^l(J): the number of index subsets of J of a given size whose
//! element sum hits a prescribed target in Z_n^d.
//!
//! The DP runs over states (chosen count, partial sum), with the partial
//! sum flattened to a single index of size n^d. Each distinct element
//! contributes transitions weighted by C(multiplicity, j), which is what
//! makes the multiset representation count index subsets. Exact mode uses
//! big integers; mod mode reduces by the group modulus throughout.
//!
//! `brute_force_count` is the independent oracle: it enumerates
//! sub-multisets and sums multiplicity weights, sharing no code with the
//! DP beyond the data model.

use num_bigint::BigUint;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::binom_exact;
use crate::error::{Error, Result};
use crate::sequences::{mix_seed, random_sequence, GeneratorProfile, GroupElement, ZSequence};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CountMode {
    Exact,
    Mod,
}

/// A subsequence count, exact or reduced mod n.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Count {
    Exact(BigUint),
    Mod(u64),
}

impl Count {
    pub fn to_string_value(&self) -> String {
        match self {
            Count::Exact(v) => v.to_string(),
            Count::Mod(v) => v.to_string(),
        }
    }

    pub fn as_mod(&self, n: u64) -> u64 {
        match self {
            Count::Exact(v) => {
                let r = v % n;
                r.to_u64_digits().first().copied().unwrap_or(0)
            }
            Count::Mod(v) => *v,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Count::Exact(v) => v.is_zero(),
            Count::Mod(v) => *v == 0,
        }
    }
}

/// Counts at several lengths of one sequence, same mode, lengths ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountVector {
    pub mode: CountMode,
    pub entries: Vec<(u64, Count)>,
}

impl CountVector {
    pub fn get(&self, len: u64) -> Option<&Count> {
        self.entries
            .iter()
            .find(|(l, _)| *l == len)
            .map(|(_, c)| c)
    }
}

/// Flatten coordinates to an index in [0, n^d), most significant first.
pub(crate) fn flat_index(coords: &[u32], n: u64) -> usize {
    let mut idx = 0usize;
    for &c in coords {
        idx = idx * n as usize + c as usize;
    }
    idx
}

pub(crate) fn state_count(n: u64, d: u32) -> Result<usize> {
    let m = (n as u128).checked_pow(d).filter(|&m| m <= 1 << 24).ok_or_else(|| {
        Error::Unsupported(format!("state space n^d = {n}^{d} too large for the DP"))
    })?;
    Ok(m as usize)
}

/// Table mapping each flattened sum s to s + e.
fn shift_table(e: &GroupElement, n: u64, d: u32, m: usize) -> Vec<u32> {
    let mut table = vec![0u32; m];
    let mut coords = vec![0u32; d as usize];
    for (s, slot) in table.iter_mut().enumerate() {
        let mut shifted = 0usize;
        for (i, &c) in coords.iter().enumerate() {
            let v = (c + e.coords()[i]) as u64 % n;
            shifted = shifted * n as usize + v as usize;
        }
        *slot = shifted as u32;
        // odometer increment of coords
        let _ = s;
        for i in (0..coords.len()).rev() {
            coords[i] += 1;
            if (coords[i] as u64) < n {
                break;
            }
            coords[i] = 0;
        }
    }
    table
}

/// Mod-n DP over (chosen count <= max_len, flattened sum).
/// Returned table is indexed [count * m + sum].
pub(crate) fn dp_mod(seq: &ZSequence, max_len: u64) -> Result<Vec<u64>> {
    let n = seq.modulus();
    let d = seq.dimension();
    let m = state_count(n, d)?;
    let rows = (max_len + 1) as usize;
    let mut dp = vec![0u64; rows * m];
    dp[0] = 1; // zero chosen, zero sum
    for (e, mult) in seq.iter() {
        let shift = shift_table(e, n, d, m);
        let weights: Vec<u64> = (0..=mult.min(max_len))
            .map(|j| {
                let w = binom_exact(mult, j) % n;
                w.to_u64_digits().first().copied().unwrap_or(0)
            })
            .collect();
        let old = dp;
        dp = vec![0u64; rows * m];
        for c in 0..rows {
            let top = (rows - 1 - c).min(weights.len() - 1);
            for s in 0..m {
                let v = old[c * m + s];
                if v == 0 {
                    continue;
                }
                let mut idx = s;
                for (j, &w) in weights.iter().enumerate().take(top + 1) {
                    if w != 0 {
                        let cell = &mut dp[(c + j) * m + idx];
                        *cell = (*cell + v * w) % n;
                    }
                    if j < top {
                        idx = shift[idx] as usize;
                    }
                }
            }
        }
    }
    Ok(dp)
}

/// Exact DP with big-integer counts.
pub(crate) fn dp_exact(seq: &ZSequence, max_len: u64) -> Result<Vec<BigUint>> {
    let n = seq.modulus();
    let d = seq.dimension();
    let m = state_count(n, d)?;
    let rows = (max_len + 1) as usize;
    let mut dp = vec![BigUint::zero(); rows * m];
    dp[0] = BigUint::from(1u32);
    for (e, mult) in seq.iter() {
        let shift = shift_table(e, n, d, m);
        let weights: Vec<BigUint> = (0..=mult.min(max_len)).map(|j| binom_exact(mult, j)).collect();
        let old = dp;
        dp = vec![BigUint::zero(); rows * m];
        for c in 0..rows {
            let top = (rows - 1 - c).min(weights.len() - 1);
            for s in 0..m {
                let v = &old[c * m + s];
                if v.is_zero() {
                    continue;
                }
                let mut idx = s;
                for (j, w) in weights.iter().enumerate().take(top + 1) {
                    dp[(c + j) * m + idx] += v * w;
                    if j < top {
                        idx = shift[idx] as usize;
                    }
                }
            }
        }
    }
    Ok(dp)
}

/// Boolean reachability DP: which (count, sum) states admit an index subset.
pub(crate) fn dp_reach(seq: &ZSequence, max_len: u64) -> Result<Vec<bool>> {
    let n = seq.modulus();
    let d = seq.dimension();
    let m = state_count(n, d)?;
    let rows = (max_len + 1) as usize;
    let mut dp = vec![false; rows * m];
    dp[0] = true;
    for (e, mult) in seq.iter() {
        let shift = shift_table(e, n, d, m);
        let old = dp.clone();
        for c in 0..rows {
            let top = (rows - 1 - c).min(mult as usize);
            for s in 0..m {
                if !old[c * m + s] {
                    continue;
                }
                let mut idx = s;
                for j in 1..=top {
                    idx = shift[idx] as usize;
                    dp[(c + j) * m + idx] = true;
                }
            }
        }
    }
    Ok(dp)
}

/// Whether some index subset of the given size sums to zero. Exact test,
/// via reachability rather than counts.
pub(crate) fn reaches_zero_sum(seq: &ZSequence, len: u64) -> Result<bool> {
    if len > seq.len() {
        return Err(Error::LengthOutOfRange {
            len,
            max: seq.len(),
        });
    }
    let m = state_count(seq.modulus(), seq.dimension())?;
    let dp = dp_reach(seq, len)?;
    Ok(dp[len as usize * m])
}

/// Count index subsets of size `len` whose sum equals `target`.
pub fn count_subsequences(
    seq: &ZSequence,
    len: u64,
    target: &GroupElement,
    mode: CountMode,
) -> Result<Count> {
    if len > seq.len() {
        return Err(Error::LengthOutOfRange {
            len,
            max: seq.len(),
        });
    }
    if target.dim() != seq.dimension() {
        return Err(Error::InvalidArgument(format!(
            "target dimension {} does not match sequence dimension {}",
            target.dim(),
            seq.dimension()
        )));
    }
    let m = state_count(seq.modulus(), seq.dimension())?;
    let t = flat_index(target.coords(), seq.modulus());
    match mode {
        CountMode::Mod => {
            let dp = dp_mod(seq, len)?;
            Ok(Count::Mod(dp[len as usize * m + t]))
        }
        CountMode::Exact => {
            let dp = dp_exact(seq, len)?;
            Ok(Count::Exact(dp[len as usize * m + t].clone()))
        }
    }
}

/// Batched zero-target counts sharing one DP pass.
pub fn count_profile(seq: &ZSequence, lengths: &[u64], mode: CountMode) -> Result<CountVector> {
    let mut sorted: Vec<u64> = lengths.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if let Some(&max) = sorted.last() {
        if max > seq.len() {
            return Err(Error::LengthOutOfRange {
                len: max,
                max: seq.len(),
            });
        }
    }
    let m = state_count(seq.modulus(), seq.dimension())?;
    let max = sorted.last().copied().unwrap_or(0);
    let entries = match mode {
        CountMode::Mod => {
            let dp = dp_mod(seq, max)?;
            sorted
                .into_iter()
                .map(|l| (l, Count::Mod(dp[l as usize * m])))
                .collect()
        }
        CountMode::Exact => {
            let dp = dp_exact(seq, max)?;
            sorted
                .into_iter()
                .map(|l| (l, Count::Exact(dp[l as usize * m].clone())))
                .collect()
        }
    };
    Ok(CountVector { mode, entries })
}

pub const DEFAULT_ENUMERATION_BUDGET: u64 = 10_000_000;

/// Independent oracle: enumerate sub-multisets with multiplicity weights.
/// Refuses (never truncates) when C(|J|, len) exceeds the budget.
pub fn brute_force_count(
    seq: &ZSequence,
    len: u64,
    target: &GroupElement,
    budget: u64,
) -> Result<Count> {
    if len > seq.len() {
        return Err(Error::LengthOutOfRange {
            len,
            max: seq.len(),
        });
    }
    let work = binom_exact(seq.len(), len);
    if work > BigUint::from(budget) {
        return Err(Error::BudgetExceeded {
            needed: work.to_string(),
            budget,
        });
    }
    let n = seq.modulus();
    let d = seq.dimension() as usize;
    let mut total = BigUint::zero();
    for sub in seq.sub_multisets(len)? {
        let mut sum = vec![0u64; d];
        let mut weight = BigUint::from(1u32);
        for (e, m) in sub.iter() {
            for (acc, &c) in sum.iter_mut().zip(e.coords()) {
                *acc = (*acc + c as u64 * m) % n;
            }
            weight *= binom_exact(seq.multiplicity(e), m);
        }
        let hit = sum
            .iter()
            .zip(target.coords())
            .all(|(&s, &t)| s == t as u64);
        if hit {
            total += weight;
        }
    }
    Ok(Count::Exact(total))
}

/// One DP-vs-brute-force comparison that disagreed.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CountMismatch {
    pub instance: u64,
    pub sequence: ZSequence,
    pub len: u64,
    pub target: Vec<u32>,
    pub dp: String,
    pub brute: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OracleReport {
    pub instances: u64,
    pub comparisons: u64,
    pub seed: u64,
    pub mismatches: Vec<CountMismatch>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// DP vs brute-force equivalence campaign over random small instances,
/// every length, zero plus sampled targets, exact mode on both sides.
pub fn oracle_campaign(instances: u64, seed: u64, budget: u64) -> Result<OracleReport> {
    let results: Vec<(u64, Vec<CountMismatch>)> = (0..instances)
        .into_par_iter()
        .map(|i| -> Result<(u64, Vec<CountMismatch>)> {
            let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(&[seed, i, 0xC0]));
            let n = [2u64, 3, 5][rng.gen_range(0..3)];
            let d = rng.gen_range(1..=3u32);
            let len = rng.gen_range(0..=12u64);
            let profile = if rng.gen_bool(0.5) {
                GeneratorProfile::Uniform
            } else {
                GeneratorProfile::LowSupport(rng.gen_range(1..=4))
            };
            let seq = random_sequence(n, d, len, profile, mix_seed(&[seed, i, 1]))?;
            let mut targets: Vec<GroupElement> = vec![GroupElement::zero(d)];
            for _ in 0..2 {
                targets.push(GroupElement::new(
                    (0..d).map(|_| rng.gen_range(0..n) as u32).collect(),
                ));
            }
            let mut mism = Vec::new();
            let mut comparisons = 0u64;
            for l in 0..=seq.len() {
                for t in &targets {
                    let dp = count_subsequences(&seq, l, t, CountMode::Exact)?;
                    let brute = brute_force_count(&seq, l, t, budget)?;
                    comparisons += 1;
                    if dp != brute {
                        mism.push(CountMismatch {
                            instance: i,
                            sequence: seq.clone(),
                            len: l,
                            target: t.coords().to_vec(),
                            dp: dp.to_string_value(),
                            brute: brute.to_string_value(),
                        });
                    }
                }
            }
            Ok((comparisons, mism))
        })
        .collect::<Result<_>>()?;
    let comparisons = results.iter().map(|(c, _)| c).sum();
    let mismatches = results.into_iter().flat_map(|(_, m)| m).collect();
    Ok(OracleReport {
        instances,
        comparisons,
        seed,
        mismatches,
    })
}
