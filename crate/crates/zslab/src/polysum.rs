//! The polynomial-method character sums over Z_p^(9p-3) and their
//! reduction to zero-sum count profiles.
//!
//! For a sequence J = {(a_i, b_i, c_i)} of length 9p-3 the product
//!
//! ```text
//! P_mn(x) = C(g(x)-1, p-1) · Q_1 Q_2 Q_3 · prod_{i in {1..8}\{m,n}} (C(g(x), p) - i)
//! ```
//!
//! with g(x) = sum x_i^(p-1) and Q_j = C(coordinate-weighted sum - 1, p-1)
//! vanishes unless the support of x has size divisible by p and all three
//! coordinate sums vanish. Grouping the full sum over Z_p^(9p-3) by
//! support therefore collapses it to
//!
//! ```text
//! sum_j (p-1)^(jp) · N^{jp}(J) · prod_{i in {1..8}\{m,n}} (j - i)
//! ```
//!
//! with the j = 0 term contributing the zero-point value P_mn(0). At the
//! zero point every binomial factor is C(-1, p-1) = 1 under the
//! falling-factorial convention, so P_18(0) = 2·3·...·7 = 5040.
//!
//! The full-size domain is astronomically large, so the verified object
//! is the reduction step: `polysum_direct_downsized` literally sums a
//! downsized family over all p^|J| points and must agree with the
//! downsized reduction formula.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{generalized_binom_mod, PrimeModulus};
use crate::counting::{count_profile, reaches_zero_sum, CountMode};
use crate::error::{Error, Result};
use crate::sequences::{mix_seed, random_sequence, GeneratorProfile, GroupElement, ZSequence};

/// All unordered index pairs 1 <= m < n <= 8.
pub fn all_pairs() -> Vec<(u8, u8)> {
    let mut out = Vec::with_capacity(28);
    for m in 1..=8u8 {
        for n in m + 1..=8 {
            out.push((m, n));
        }
    }
    out
}

/// The full-size polynomial family for one sequence and one omitted pair.
#[derive(Clone, Debug)]
pub struct PolyFamilySpec {
    p: PrimeModulus,
    elements: Vec<GroupElement>,
    pair: (u8, u8),
}

impl PolyFamilySpec {
    pub fn new(p: PrimeModulus, seq: &ZSequence, pair: (u8, u8)) -> Result<Self> {
        let q = p.get();
        if seq.modulus() != q || seq.dimension() != 3 {
            return Err(Error::InvalidArgument(format!(
                "family needs a sequence over Z_{q}^3"
            )));
        }
        if seq.len() != 9 * q - 3 {
            return Err(Error::InvalidArgument(format!(
                "family needs |J| = 9p-3 = {}, got {}",
                9 * q - 3,
                seq.len()
            )));
        }
        let (m, n) = normalize_pair(pair)?;
        let mut elements = Vec::with_capacity(seq.len() as usize);
        for (e, mult) in seq.iter() {
            for _ in 0..mult {
                elements.push(e.clone());
            }
        }
        Ok(PolyFamilySpec {
            p,
            elements,
            pair: (m, n),
        })
    }

    pub fn variable_count(&self) -> usize {
        self.elements.len()
    }
}

fn normalize_pair(pair: (u8, u8)) -> Result<(u8, u8)> {
    let (m, n) = if pair.0 <= pair.1 { pair } else { (pair.1, pair.0) };
    if m == n || m < 1 || n > 8 {
        return Err(Error::InvalidArgument(format!(
            "omitted pair must satisfy 1 <= m < n <= 8, got ({}, {})",
            pair.0, pair.1
        )));
    }
    Ok((m, n))
}

/// prod over i in {1..8} minus the omitted pair of (j - i), mod p.
fn retained_factor_product(j: i64, pair: (u8, u8), p: PrimeModulus) -> u64 {
    let mut acc = 1u64;
    for i in 1..=8u8 {
        if i == pair.0 || i == pair.1 {
            continue;
        }
        acc = acc * p.reduce_i64(j - i as i64) % p.get();
    }
    acc
}

/// Shared product evaluation from support statistics: support size g and
/// the d coordinate-weighted sums (as nonnegative integers).
fn product_from_support(g: u64, coord_sums: &[u64], factors: &[i64], p: PrimeModulus) -> u64 {
    let q = p.get();
    let mut acc = generalized_binom_mod(g as i64 - 1, q - 1, p);
    if acc == 0 {
        return 0;
    }
    for &s in coord_sums {
        acc = acc * generalized_binom_mod(s as i64 - 1, q - 1, p) % q;
        if acc == 0 {
            return 0;
        }
    }
    let cgp = generalized_binom_mod(g as i64, q, p);
    for &i in factors {
        acc = acc * p.reduce_i64(cgp as i64 - i) % q;
    }
    acc
}

/// Evaluate the product at a single point of Z_p^(9p-3).
pub fn eval_poly_at_point(spec: &PolyFamilySpec, x: &[u64]) -> Result<u64> {
    if x.len() != spec.elements.len() {
        return Err(Error::InvalidArgument(format!(
            "point has {} coordinates, expected {}",
            x.len(),
            spec.elements.len()
        )));
    }
    let p = spec.p;
    let q = p.get();
    let mut g = 0u64;
    let mut sums = [0u64; 3];
    for (xi, e) in x.iter().zip(&spec.elements) {
        // x^(p-1) is the nonzero indicator by Fermat
        let ind = if xi % q == 0 { 0u64 } else { 1 };
        g += ind;
        for (s, &c) in sums.iter_mut().zip(e.coords()) {
            *s += ind * c as u64;
        }
    }
    let factors: Vec<i64> = (1..=8i64)
        .filter(|&i| i != spec.pair.0 as i64 && i != spec.pair.1 as i64)
        .collect();
    Ok(product_from_support(g, &sums, &factors, p))
}

/// The zero-point value P_mn(0) = prod of the retained (0 - i).
pub fn zero_point_value(pair: (u8, u8), p: PrimeModulus) -> Result<u64> {
    let pair = normalize_pair(pair)?;
    Ok(retained_factor_product(0, pair, p))
}

/// Pair sum evaluated from an already-computed count profile
/// (counts[j-1] = N^{jp}(J) mod p for j = 1..8).
pub fn pair_value_from_profile(counts: &[u64; 8], pair: (u8, u8), p: PrimeModulus) -> Result<u64> {
    let pair = normalize_pair(pair)?;
    let q = p.get();
    let mut acc = retained_factor_product(0, pair, p);
    for j in 1..=8i64 {
        // (p-1)^(jp) == (-1)^j for odd p
        let sign = if j % 2 == 0 { 1i64 } else { -1 };
        let weight = p.reduce_i64(sign) * retained_factor_product(j, pair, p) % q;
        acc = (acc + weight * counts[j as usize - 1]) % q;
    }
    Ok(acc)
}

/// Reduce the full p^(9p-3)-point sum to the count profile by support
/// counting: each support subset of size s contributes (p-1)^s, and only
/// supports of size jp with vanishing coordinate sums survive.
pub fn polysum_reduced(seq: &ZSequence, p: PrimeModulus, pair: (u8, u8)) -> Result<u64> {
    let pair = normalize_pair(pair)?;
    let q = p.get();
    if seq.modulus() != q || seq.dimension() != 3 || seq.len() != 9 * q - 3 {
        return Err(Error::InvalidArgument(format!(
            "reduction needs |J| = 9p-3 over Z_{q}^3"
        )));
    }
    let counts = profile_mod(seq, p)?;
    pair_value_from_profile(&counts, pair, p)
}

fn profile_mod(seq: &ZSequence, p: PrimeModulus) -> Result<[u64; 8]> {
    let q = p.get();
    let lengths: Vec<u64> = (1..=8).map(|j| j * q).collect();
    let profile = count_profile(seq, &lengths, CountMode::Mod)?;
    let mut counts = [0u64; 8];
    for (j, slot) in counts.iter_mut().enumerate() {
        *slot = profile.get((j as u64 + 1) * q).unwrap().as_mod(q);
    }
    Ok(counts)
}

/// Downsized analog of the family: arbitrary |J| over Z_p^d, an arbitrary
/// finite factor index set T, and a Q factor per coordinate.
#[derive(Clone, Debug)]
pub struct DownsizedPolySpec {
    pub p: PrimeModulus,
    pub seq: ZSequence,
    pub factors: Vec<i64>,
}

impl DownsizedPolySpec {
    pub fn new(p: PrimeModulus, seq: ZSequence, factors: Vec<i64>) -> Result<Self> {
        let q = p.get();
        if q == 2 {
            return Err(Error::InvalidArgument(
                "downsized family restricted to odd p".into(),
            ));
        }
        if seq.modulus() != q {
            return Err(Error::InvalidArgument(format!(
                "sequence modulus {} does not match p = {q}",
                seq.modulus()
            )));
        }
        let top = seq.len() / q;
        for &i in &factors {
            if i < 1 || i as u64 > top.max(1) {
                return Err(Error::InvalidArgument(format!(
                    "factor index {i} outside 1..={top}"
                )));
            }
        }
        Ok(DownsizedPolySpec { p, seq, factors })
    }
}

pub const DEFAULT_POINT_BUDGET: u64 = 100_000_000;

/// Literal summation of the downsized product over all p^|J| points.
pub fn polysum_direct_downsized(spec: &DownsizedPolySpec, budget: u64) -> Result<u64> {
    let q = spec.p.get();
    let len = spec.seq.len() as u32;
    let points = (q as u128).checked_pow(len).ok_or(Error::BudgetExceeded {
        needed: format!("{q}^{len}"),
        budget,
    })?;
    if points > budget as u128 {
        return Err(Error::BudgetExceeded {
            needed: points.to_string(),
            budget,
        });
    }
    let p = spec.p;
    let d = spec.seq.dimension() as usize;
    let mut elements: Vec<Vec<u64>> = Vec::with_capacity(len as usize);
    for (e, m) in spec.seq.iter() {
        for _ in 0..m {
            elements.push(e.coords().iter().map(|&c| c as u64).collect());
        }
    }
    // nonzero indicator x^(p-1) per residue, computed honestly by powering
    let indicator: Vec<u64> = (0..q).map(|v| p.pow_mod(v, q - 1)).collect();

    // value tables over the bounded support statistics
    let max_g = len as u64;
    let gbin: Vec<u64> = (0..=max_g)
        .map(|g| generalized_binom_mod(g as i64 - 1, q - 1, p))
        .collect();
    let cgp: Vec<u64> = (0..=max_g)
        .map(|g| generalized_binom_mod(g as i64, q, p))
        .collect();
    let sfac: Vec<u64> = (0..=max_g)
        .map(|g| {
            let mut acc = 1u64;
            for &i in &spec.factors {
                acc = acc * p.reduce_i64(cgp[g as usize] as i64 - i) % q;
            }
            acc
        })
        .collect();
    let max_s = (q - 1) * max_g;
    let qbin: Vec<u64> = (0..=max_s)
        .map(|s| generalized_binom_mod(s as i64 - 1, q - 1, p))
        .collect();

    fn recurse(
        elements: &[Vec<u64>],
        q: u64,
        indicator: &[u64],
        g: u64,
        sums: &mut [u64],
        leaf: &mut impl FnMut(u64, &[u64]) -> u64,
        acc: &mut u64,
    ) {
        let Some((first, rest)) = elements.split_first() else {
            *acc = (*acc + leaf(g, sums)) % q;
            return;
        };
        for v in 0..q {
            let ind = indicator[v as usize];
            if ind == 1 {
                for (s, c) in sums.iter_mut().zip(first) {
                    *s += c;
                }
            }
            recurse(rest, q, indicator, g + ind, sums, leaf, acc);
            if ind == 1 {
                for (s, c) in sums.iter_mut().zip(first) {
                    *s -= c;
                }
            }
        }
    }

    // parallelize over the first variable when there is one
    if elements.is_empty() {
        let sums = vec![0u64; d];
        let leaf = |g: u64, sums: &[u64]| {
            let mut v = gbin[g as usize];
            for &s in sums {
                v = v * qbin[s as usize] % q;
            }
            v * sfac[g as usize] % q
        };
        return Ok(leaf(0, &sums));
    }
    let (first, rest) = elements.split_first().unwrap();
    let total = (0..q)
        .into_par_iter()
        .map(|v| {
            let ind = indicator[v as usize];
            let mut sums = vec![0u64; d];
            if ind == 1 {
                for (s, c) in sums.iter_mut().zip(first) {
                    *s += c;
                }
            }
            let mut acc = 0u64;
            let mut leaf = |g: u64, sums: &[u64]| {
                let mut val = gbin[g as usize];
                for &s in sums {
                    val = val * qbin[s as usize] % q;
                }
                val * sfac[g as usize] % q
            };
            recurse(rest, q, &indicator, ind, &mut sums, &mut leaf, &mut acc);
            acc
        })
        .reduce(|| 0, |a, b| (a + b) % q);
    Ok(total % q)
}

/// The downsized reduction formula, the other side of the oracle pair:
/// sum_j (p-1)^(jp) · N^{jp}(J) · prod_{i in T} (j - i).
pub fn downsized_reduction(spec: &DownsizedPolySpec) -> Result<u64> {
    let p = spec.p;
    let q = p.get();
    let top = spec.seq.len() / q;
    let lengths: Vec<u64> = (0..=top).map(|j| j * q).collect();
    let profile = count_profile(&spec.seq, &lengths, CountMode::Mod)?;
    let mut acc = 0u64;
    for j in 0..=top {
        let count = profile.get(j * q).unwrap().as_mod(q);
        let sign = if j % 2 == 0 { 1i64 } else { -1 };
        let mut weight = p.reduce_i64(sign);
        for &i in &spec.factors {
            weight = weight * p.reduce_i64(j as i64 - i) % q;
        }
        acc = (acc + weight * count) % q;
    }
    Ok(acc)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Lemma3Report {
    pub p: u64,
    pub profile: Vec<(u64, u64)>,
    pub pair_values: Vec<((u8, u8), u64)>,
    pub common_value: Option<u64>,
    pub deviating_pairs: Vec<(u8, u8)>,
}

impl Lemma3Report {
    pub fn all_equal(&self) -> bool {
        self.deviating_pairs.is_empty()
    }
}

/// Evaluate every omitted pair; all 28 sums should coincide.
pub fn lemma3_check(seq: &ZSequence, p: PrimeModulus) -> Result<Lemma3Report> {
    let q = p.get();
    if seq.modulus() != q || seq.dimension() != 3 || seq.len() != 9 * q - 3 {
        return Err(Error::InvalidArgument(format!(
            "pair-sum check needs |J| = 9p-3 over Z_{q}^3"
        )));
    }
    let counts = profile_mod(seq, p)?;
    let mut pair_values = Vec::with_capacity(28);
    for pair in all_pairs() {
        pair_values.push((pair, pair_value_from_profile(&counts, pair, p)?));
    }
    let first = pair_values[0].1;
    let deviating: Vec<(u8, u8)> = pair_values
        .iter()
        .filter(|(_, v)| *v != first)
        .map(|(pr, _)| *pr)
        .collect();
    Ok(Lemma3Report {
        p: q,
        profile: (1..=8).map(|j| (j * q, counts[j as usize - 1])).collect(),
        pair_values,
        common_value: deviating.is_empty().then_some(first),
        deviating_pairs: deviating,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Theorem3Report {
    pub p: u64,
    /// whether the sequence has an actual zero-sum subsequence of length p
    pub n_p_positive: bool,
    pub profile: Vec<(u64, u64)>,
    /// indices i in 2..=8 with N^{ip} nonzero mod p
    pub nonzero_indices: Vec<u8>,
    pub branch: String,
    pub claim_holds: bool,
    /// the common pair sum m
    pub m: u64,
    /// zero-point values P_1j(0) mod p for j = 2..8
    pub zero_point_values: Vec<(u8, u64)>,
    pub zero_points_distinct: bool,
    /// integer coefficient pairs (a_j, b_j) in m - P_1j(0) = a_j N^p + b_j N^{jp}
    pub coefficient_pairs: Vec<(u8, i64, i64)>,
    /// whether the profile satisfies all 28 pair-sum equalities
    pub profile_consistent: bool,
}

/// Integer coefficients of the equation m - P_1j(0) = a_j N^p + b_j N^{jp}:
/// a_j = -prod_{i in {2..8}\{j}} (1 - i), b_j = prod_{i in {2..8}\{j}} (j - i)
/// carrying the (p-1)^(jp) = (-1)^j sign.
pub fn equation_coefficients(j: u8) -> Result<(i64, i64)> {
    if !(2..=8).contains(&j) {
        return Err(Error::InvalidArgument(format!(
            "equation index {j} outside 2..=8"
        )));
    }
    let mut a = -1i64;
    let mut b = if j % 2 == 0 { 1i64 } else { -1 };
    for i in 2..=8i64 {
        if i == j as i64 {
            continue;
        }
        a *= 1 - i;
        b *= j as i64 - i;
    }
    Ok((a, b))
}

/// Verdict logic from a synthetic profile; `n_p_positive` is the exact
/// positivity of the length-p count, counts[j-1] = N^{jp} mod p.
pub fn theorem3_verdict_from_profile(
    p: PrimeModulus,
    n_p_positive: bool,
    counts: &[u64; 8],
) -> Result<Theorem3Report> {
    let q = p.get();
    if q <= 7 {
        return Err(Error::InvalidArgument(
            "the verdict assumes p > 7 (the retained factor products degenerate below)".into(),
        ));
    }
    let m = pair_value_from_profile(counts, (1, 8), p)?;
    let mut profile_consistent = true;
    for pair in all_pairs() {
        if pair_value_from_profile(counts, pair, p)? != m {
            profile_consistent = false;
        }
    }
    let nonzero_indices: Vec<u8> = (2..=8u8)
        .filter(|&i| counts[i as usize - 1] != 0)
        .collect();
    let mut zero_point_values = Vec::new();
    let mut seen = Vec::new();
    for j in 2..=8u8 {
        let v = zero_point_value((1, j), p)?;
        seen.push(v);
        zero_point_values.push((j, v));
    }
    seen.sort_unstable();
    let distinct = seen.windows(2).all(|w| w[0] != w[1]);
    let coefficient_pairs: Vec<(u8, i64, i64)> = (2..=8u8)
        .map(|j| {
            let (a, b) = equation_coefficients(j).unwrap();
            (j, a, b)
        })
        .collect();
    let (branch, claim_holds) = if n_p_positive {
        ("N^p positive".to_string(), true)
    } else if nonzero_indices.len() >= 6 {
        (
            format!("{} of N^{{2p}}..N^{{8p}} nonzero mod p", nonzero_indices.len()),
            true,
        )
    } else if !profile_consistent {
        ("synthetic profile inconsistent with the pair-sum equalities".to_string(), false)
    } else {
        ("claim violated".to_string(), false)
    };
    Ok(Theorem3Report {
        p: q,
        n_p_positive,
        profile: (1..=8).map(|j| (j * q, counts[j as usize - 1])).collect(),
        nonzero_indices,
        branch,
        claim_holds,
        m,
        zero_point_values,
        zero_points_distinct: distinct,
        coefficient_pairs,
        profile_consistent,
    })
}

/// Which branch of the dichotomy a concrete sequence satisfies.
pub fn theorem3_verdict(seq: &ZSequence, p: PrimeModulus) -> Result<Theorem3Report> {
    let q = p.get();
    if seq.modulus() != q || seq.dimension() != 3 || seq.len() != 9 * q - 3 {
        return Err(Error::InvalidArgument(format!(
            "verdict needs |J| = 9p-3 over Z_{q}^3"
        )));
    }
    let counts = profile_mod(seq, p)?;
    let n_p_positive = reaches_zero_sum(seq, q)?;
    theorem3_verdict_from_profile(p, n_p_positive, &counts)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolysumMismatch {
    pub instance: u64,
    pub p: u64,
    pub sequence: ZSequence,
    pub factors: Vec<i64>,
    pub direct: u64,
    pub reduced: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolysumOracleReport {
    pub instances: u64,
    pub seed: u64,
    pub mismatches: Vec<PolysumMismatch>,
}

impl PolysumOracleReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Direct-vs-reduction equivalence campaign on random downsized instances
/// (p in {3, 5}, d in {1, 2}, |J| small enough to enumerate).
pub fn oracle_campaign(instances: u64, seed: u64, budget: u64) -> Result<PolysumOracleReport> {
    let results: Vec<Option<PolysumMismatch>> = (0..instances)
        .into_par_iter()
        .map(|i| -> Result<Option<PolysumMismatch>> {
            let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(&[seed, i, 0xF0]));
            let p = if rng.gen_bool(0.5) { 3u64 } else { 5 };
            let d = rng.gen_range(1..=2u32);
            // keep the literal point count within a sane budget
            let len = if p == 3 {
                rng.gen_range(4..=12u64)
            } else {
                rng.gen_range(4..=9u64)
            };
            let profile = if rng.gen_bool(0.5) {
                GeneratorProfile::Uniform
            } else {
                GeneratorProfile::LowSupport(rng.gen_range(1..=3))
            };
            let seq = random_sequence(p, d, len, profile, mix_seed(&[seed, i, 2]))?;
            let top = (len / p).max(1);
            let mut factors = Vec::new();
            for t in 1..=top {
                if rng.gen_bool(0.5) {
                    factors.push(t as i64);
                }
            }
            let pm = PrimeModulus::new(p)?;
            let spec = DownsizedPolySpec::new(pm, seq.clone(), factors.clone())?;
            let direct = polysum_direct_downsized(&spec, budget)?;
            let reduced = downsized_reduction(&spec)?;
            Ok((direct != reduced).then_some(PolysumMismatch {
                instance: i,
                p,
                sequence: seq,
                factors,
                direct,
                reduced,
            }))
        })
        .collect::<Result<_>>()?;
    let mut mismatches: Vec<PolysumMismatch> = results.into_iter().flatten().collect();
    mismatches.sort_by_key(|m| m.instance);
    Ok(PolysumOracleReport {
        instances,
        seed,
        mismatches,
    })
}
