//! Sequences over Z_n^d: a multiset data model with named constructions,
//! seeded random generators, and sub-multiset enumeration.
//!
//! A sequence is stored as a multiset, but the counting layer treats equal
//! elements as distinguishable positions, so every count weights a
//! sub-multiset by the product of per-element binomials.
//!
//! The JSON interchange form is
//! `{"n": 3, "d": 2, "elements": [[0,0],[0,1],[0,1]]}`
//! with repetition for multiplicity; canonical output lists elements in
//! lexicographic order.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::PrimeModulus;
use crate::error::{Error, Result};

/// One element of Z_n^d, coordinates in [0, n).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct GroupElement(Vec<u32>);

impl GroupElement {
    pub fn new(coords: Vec<u32>) -> Self {
        GroupElement(coords)
    }

    pub fn zero(d: u32) -> Self {
        GroupElement(vec![0; d as usize])
    }

    pub fn coords(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> u32 {
        self.0.len() as u32
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A finite multiset of elements of Z_n^d.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ZSequence {
    n: u64,
    d: u32,
    multiset: BTreeMap<GroupElement, u64>,
    len: u64,
}

impl ZSequence {
    pub fn empty(n: u64, d: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!("modulus {n} must be >= 2")));
        }
        if d == 0 {
            return Err(Error::InvalidArgument("dimension must be >= 1".into()));
        }
        Ok(ZSequence {
            n,
            d,
            multiset: BTreeMap::new(),
            len: 0,
        })
    }

    fn check_element(&self, e: &GroupElement) -> Result<()> {
        if e.dim() != self.d {
            return Err(Error::InvalidArgument(format!(
                "element {e} has dimension {}, expected {}",
                e.dim(),
                self.d
            )));
        }
        if let Some(c) = e.coords().iter().find(|&&c| c as u64 >= self.n) {
            return Err(Error::InvalidArgument(format!(
                "coordinate {c} out of range for modulus {}",
                self.n
            )));
        }
        Ok(())
    }

    pub fn push(&mut self, e: GroupElement, multiplicity: u64) -> Result<()> {
        self.check_element(&e)?;
        if multiplicity == 0 {
            return Ok(());
        }
        *self.multiset.entry(e).or_insert(0) += multiplicity;
        self.len += multiplicity;
        Ok(())
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn dimension(&self) -> u32 {
        self.d
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Number of distinct elements.
    pub fn support_size(&self) -> usize {
        self.multiset.len()
    }

    /// Distinct elements with multiplicities, in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (&GroupElement, u64)> {
        self.multiset.iter().map(|(e, &m)| (e, m))
    }

    pub fn multiplicity(&self, e: &GroupElement) -> u64 {
        self.multiset.get(e).copied().unwrap_or(0)
    }

    /// Element-wise sum of the whole sequence, reduced mod n.
    pub fn full_sum(&self) -> GroupElement {
        let mut acc = vec![0u64; self.d as usize];
        for (e, m) in self.iter() {
            for (a, &c) in acc.iter_mut().zip(e.coords()) {
                *a = (*a + c as u64 % self.n * (m % self.n)) % self.n;
            }
        }
        GroupElement(acc.into_iter().map(|v| v as u32).collect())
    }

    /// Enumerate sub-multisets of the given size, each exactly once.
    pub fn sub_multisets(&self, size: u64) -> Result<SubMultisets<'_>> {
        if size > self.len {
            return Err(Error::LengthOutOfRange {
                len: size,
                max: self.len,
            });
        }
        Ok(SubMultisets::new(self, size))
    }
}

impl Serialize for ZSequence {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Raw<'a> {
            n: u64,
            d: u32,
            elements: Vec<&'a [u32]>,
        }
        let mut elements = Vec::with_capacity(self.len as usize);
        for (e, m) in self.iter() {
            for _ in 0..m {
                elements.push(e.coords());
            }
        }
        Raw {
            n: self.n,
            d: self.d,
            elements,
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for ZSequence {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            n: u64,
            d: u32,
            elements: Vec<Vec<u32>>,
        }
        let raw = Raw::deserialize(de)?;
        let elems = raw.elements.into_iter().map(GroupElement::new);
        sequence_from_elements(raw.n, raw.d, elems).map_err(D::Error::custom)
    }
}

/// Aggregate a list of elements into a sequence, validating ranges.
pub fn sequence_from_elements<I>(n: u64, d: u32, elements: I) -> Result<ZSequence>
where
    I: IntoIterator<Item = GroupElement>,
{
    let mut seq = ZSequence::empty(n, d)?;
    for e in elements {
        seq.push(e, 1)?;
    }
    Ok(seq)
}

/// The lower-bound construction over Z_p^3:
/// {0^(p-1), e1^(p-1), e2^(p-1), e3^(p-1), (1,1,1)^((p-1)/2)}.
pub fn theorem2_construction(p: PrimeModulus) -> Result<ZSequence> {
    let q = p.get();
    if q == 2 {
        return Err(Error::InvalidArgument(
            "construction degenerates at p = 2 ((p-1)/2 vanishing)".into(),
        ));
    }
    let mut seq = ZSequence::empty(q, 3)?;
    seq.push(GroupElement::new(vec![0, 0, 0]), q - 1)?;
    seq.push(GroupElement::new(vec![1, 0, 0]), q - 1)?;
    seq.push(GroupElement::new(vec![0, 1, 0]), q - 1)?;
    seq.push(GroupElement::new(vec![0, 0, 1]), q - 1)?;
    seq.push(GroupElement::new(vec![1, 1, 1]), (q - 1) / 2)?;
    Ok(seq)
}

/// Named zero-sum-free witness families.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ExtremalFamily {
    /// {0^(n-1), 1^(n-1)} over Z_n — length 2n-2, no n-term zero-sum.
    EgzD1,
    /// {(0,0)^(n-1), (1,0)^(n-1), (0,1)^(n-1), (1,1)^(n-1)} over Z_n^2.
    KemnitzD2,
}

impl FromStr for ExtremalFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "egz-d1" => Ok(ExtremalFamily::EgzD1),
            "kemnitz-d2" => Ok(ExtremalFamily::KemnitzD2),
            other => Err(Error::InvalidArgument(format!(
                "unknown extremal family {other:?} (expected egz-d1 or kemnitz-d2)"
            ))),
        }
    }
}

pub fn known_extremal(family: ExtremalFamily, n: u64) -> Result<ZSequence> {
    match family {
        ExtremalFamily::EgzD1 => {
            let mut seq = ZSequence::empty(n, 1)?;
            seq.push(GroupElement::new(vec![0]), n - 1)?;
            seq.push(GroupElement::new(vec![1]), n - 1)?;
            Ok(seq)
        }
        ExtremalFamily::KemnitzD2 => {
            let mut seq = ZSequence::empty(n, 2)?;
            seq.push(GroupElement::new(vec![0, 0]), n - 1)?;
            seq.push(GroupElement::new(vec![1, 0]), n - 1)?;
            seq.push(GroupElement::new(vec![0, 1]), n - 1)?;
            seq.push(GroupElement::new(vec![1, 1]), n - 1)?;
            Ok(seq)
        }
    }
}

/// Generator profile for random sequences.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GeneratorProfile {
    /// I.i.d. uniform elements.
    Uniform,
    /// Draw s distinct elements first, then distribute the length among
    /// them uniformly (multinomially). Near-extremal sequences have few
    /// distinct values, so these stress the identities harder.
    LowSupport(u64),
}

impl fmt::Display for GeneratorProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorProfile::Uniform => write!(f, "uniform"),
            GeneratorProfile::LowSupport(s) => write!(f, "low-support:{s}"),
        }
    }
}

impl FromStr for GeneratorProfile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "uniform" {
            return Ok(GeneratorProfile::Uniform);
        }
        if let Some(rest) = s.strip_prefix("low-support:") {
            let v: u64 = rest
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad support size {rest:?}")))?;
            if v == 0 {
                return Err(Error::InvalidArgument("support size must be >= 1".into()));
            }
            return Ok(GeneratorProfile::LowSupport(v));
        }
        Err(Error::InvalidArgument(format!(
            "unknown profile {s:?} (expected uniform or low-support:S)"
        )))
    }
}

/// Stable 64-bit mixer (splitmix64 finalizer) for deriving stream seeds.
/// Campaigns derive per-trial seeds as mix_seed(&[master, trial]), which
/// keeps reports reproducible regardless of worker scheduling.
pub fn mix_seed(parts: &[u64]) -> u64 {
    let mut h = 0x9e3779b97f4a7c15u64;
    for &p in parts {
        let mut z = h ^ p;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        h = z ^ (z >> 31);
    }
    h
}

/// Deterministic random sequence: identical arguments yield an identical
/// multiset, independent of platform.
pub fn random_sequence(
    n: u64,
    d: u32,
    length: u64,
    profile: GeneratorProfile,
    seed: u64,
) -> Result<ZSequence> {
    let profile_tag = match profile {
        GeneratorProfile::Uniform => 0,
        GeneratorProfile::LowSupport(s) => s,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(&[seed, n, d as u64, length, profile_tag]));
    let mut seq = ZSequence::empty(n, d)?;
    let draw = |rng: &mut ChaCha8Rng| {
        GroupElement::new((0..d).map(|_| rng.gen_range(0..n) as u32).collect())
    };
    match profile {
        GeneratorProfile::Uniform => {
            for _ in 0..length {
                seq.push(draw(&mut rng), 1)?;
            }
        }
        GeneratorProfile::LowSupport(s) => {
            if s == 0 {
                return Err(Error::InvalidArgument("support size must be >= 1".into()));
            }
            let alphabet = (n as u128).saturating_pow(d);
            let s = (s as u128).min(alphabet) as u64;
            let mut support: Vec<GroupElement> = Vec::with_capacity(s as usize);
            while (support.len() as u64) < s {
                let e = draw(&mut rng);
                if !support.contains(&e) {
                    support.push(e);
                }
            }
            for _ in 0..length {
                let idx = rng.gen_range(0..support.len());
                seq.push(support[idx].clone(), 1)?;
            }
        }
    }
    Ok(seq)
}

/// Iterator over all sub-multisets of a fixed size.
///
/// States are multiplicity vectors over the distinct elements, emitted in
/// decreasing lexicographic order starting from the greedy left-packed fill.
pub struct SubMultisets<'a> {
    seq: &'a ZSequence,
    elems: Vec<(GroupElement, u64)>,
    counts: Vec<u64>,
    size: u64,
    state: IterState,
}

enum IterState {
    Fresh,
    Running,
    Done,
}

impl<'a> SubMultisets<'a> {
    fn new(seq: &'a ZSequence, size: u64) -> Self {
        let elems: Vec<(GroupElement, u64)> =
            seq.iter().map(|(e, m)| (e.clone(), m)).collect();
        let mut counts = vec![0u64; elems.len()];
        let mut rem = size;
        for (i, (_, cap)) in elems.iter().enumerate() {
            counts[i] = rem.min(*cap);
            rem -= counts[i];
        }
        debug_assert_eq!(rem, 0, "size exceeds sequence length");
        SubMultisets {
            seq,
            elems,
            counts,
            size,
            state: IterState::Fresh,
        }
    }

    fn emit(&self) -> ZSequence {
        let mut out = ZSequence::empty(self.seq.n, self.seq.d).unwrap();
        for (i, (e, _)) in self.elems.iter().enumerate() {
            if self.counts[i] > 0 {
                out.push(e.clone(), self.counts[i]).unwrap();
            }
        }
        out
    }

    /// Advance to the next multiplicity vector; false when exhausted.
    fn advance(&mut self) -> bool {
        let k = self.counts.len();
        if k == 0 {
            return false;
        }
        // Moving right to left, find a position that can release one unit
        // into spare capacity on its right, then repack greedily.
        let mut suffix_count = 0u64;
        let mut suffix_cap = 0u64;
        for i in (0..k.saturating_sub(1)).rev() {
            suffix_count += self.counts[i + 1];
            suffix_cap += self.elems[i + 1].1;
            if self.counts[i] > 0 && suffix_count < suffix_cap {
                self.counts[i] -= 1;
                let mut rem = suffix_count + 1;
                for j in i + 1..k {
                    self.counts[j] = rem.min(self.elems[j].1);
                    rem -= self.counts[j];
                }
                debug_assert_eq!(rem, 0);
                return true;
            }
        }
        false
    }
}

impl<'a> Iterator for SubMultisets<'a> {
    type Item = ZSequence;

    fn next(&mut self) -> Option<ZSequence> {
        match self.state {
            IterState::Fresh => {
                self.state = IterState::Running;
                if self.size == 0 && self.elems.is_empty() {
                    self.state = IterState::Done;
                    // the empty sub-multiset of the empty sequence
                    return Some(ZSequence::empty(self.seq.n, self.seq.d).unwrap());
                }
                Some(self.emit())
            }
            IterState::Running => {
                if self.advance() {
                    Some(self.emit())
                } else {
                    self.state = IterState::Done;
                    None
                }
            }
            IterState::Done => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{binom_exact, next_prime_at_least};
    use num_bigint::BigUint;
    use proptest::prelude::*;

    fn e(coords: &[u32]) -> GroupElement {
        GroupElement::new(coords.to_vec())
    }

    #[test]
    fn from_elements_aggregates() {
        let seq =
            sequence_from_elements(3, 3, vec![e(&[0, 0, 0]), e(&[0, 0, 0])]).unwrap();
        assert_eq!(seq.len(), 2);
        assert_eq!(seq.multiplicity(&e(&[0, 0, 0])), 2);

        let seq =
            sequence_from_elements(5, 2, vec![e(&[1, 0]), e(&[0, 1]), e(&[1, 0])]).unwrap();
        assert_eq!(seq.len(), 3);
        assert_eq!(seq.multiplicity(&e(&[1, 0])), 2);
        assert_eq!(seq.multiplicity(&e(&[0, 1])), 1);
    }

    #[test]
    fn from_elements_rejects_bad_coordinates() {
        assert!(sequence_from_elements(3, 3, vec![e(&[0, 0, 3])]).is_err());
        assert!(sequence_from_elements(3, 3, vec![e(&[0, 0])]).is_err());
        assert!(ZSequence::empty(1, 1).is_err());
        assert!(ZSequence::empty(3, 0).is_err());
    }

    #[test]
    fn theorem2_lengths_and_multiplicities() {
        let p5 = PrimeModulus::new(5).unwrap();
        let seq = theorem2_construction(p5).unwrap();
        assert_eq!(seq.len(), 18); // 4p-4 + (p-1)/2
        assert_eq!(seq.multiplicity(&e(&[1, 1, 1])), 2);

        let p3 = PrimeModulus::new(3).unwrap();
        let seq = theorem2_construction(p3).unwrap();
        assert_eq!(seq.len(), 9);
        let mults: Vec<u64> = seq.iter().map(|(_, m)| m).collect();
        assert_eq!(mults.iter().sum::<u64>(), 9);
        assert_eq!(seq.multiplicity(&e(&[1, 1, 1])), 1);

        let p7 = PrimeModulus::new(7).unwrap();
        assert_eq!(theorem2_construction(p7).unwrap().len(), 27);

        assert!(theorem2_construction(PrimeModulus::new(2).unwrap()).is_err());
    }

    #[test]
    fn theorem2_full_sum_is_diagonal() {
        // full sum has every coordinate congruent to 3(p-1)/2
        let mut p = 3u64;
        while p <= 31 {
            let m = PrimeModulus::new(p).unwrap();
            let seq = theorem2_construction(m).unwrap();
            assert_eq!(seq.len(), 4 * p - 4 + (p - 1) / 2);
            let want = (3 * (p - 1) / 2 % p) as u32;
            assert_eq!(seq.full_sum().coords(), &[want, want, want], "p = {p}");
            p = next_prime_at_least(p + 1);
        }
    }

    #[test]
    fn extremal_families() {
        let seq = known_extremal(ExtremalFamily::EgzD1, 3).unwrap();
        assert_eq!(seq.len(), 4);
        let seq = known_extremal(ExtremalFamily::KemnitzD2, 3).unwrap();
        assert_eq!(seq.len(), 8);
        let seq = known_extremal(ExtremalFamily::KemnitzD2, 2).unwrap();
        assert_eq!(seq.len(), 4);
        assert_eq!(seq.support_size(), 4);
        assert!("nope".parse::<ExtremalFamily>().is_err());
    }

    #[test]
    fn random_sequence_is_reproducible() {
        let a = random_sequence(3, 3, 15, GeneratorProfile::Uniform, 1).unwrap();
        let b = random_sequence(3, 3, 15, GeneratorProfile::Uniform, 1).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 15);

        let c = random_sequence(3, 3, 15, GeneratorProfile::Uniform, 2).unwrap();
        assert_ne!(a, c, "different seeds should differ at this size");

        let low = random_sequence(5, 3, 22, GeneratorProfile::LowSupport(4), 7).unwrap();
        assert_eq!(low.len(), 22);
        assert!(low.support_size() <= 4);

        let empty = random_sequence(2, 1, 0, GeneratorProfile::Uniform, 0).unwrap();
        assert!(empty.is_empty());
    }

    #[test]
    fn sub_multisets_small_cases() {
        let mut seq = ZSequence::empty(5, 1).unwrap();
        seq.push(e(&[1]), 2).unwrap();
        seq.push(e(&[2]), 1).unwrap();
        let subs: Vec<ZSequence> = seq.sub_multisets(2).unwrap().collect();
        assert_eq!(subs.len(), 2);
        assert_eq!(subs[0].multiplicity(&e(&[1])), 2);
        assert_eq!(subs[1].multiplicity(&e(&[1])), 1);
        assert_eq!(subs[1].multiplicity(&e(&[2])), 1);

        let subs: Vec<ZSequence> = seq.sub_multisets(0).unwrap().collect();
        assert_eq!(subs.len(), 1);
        assert!(subs[0].is_empty());

        assert!(seq.sub_multisets(4).is_err());
    }

    #[test]
    fn sub_multisets_weighted_count() {
        // weighted by the product of per-element binomials, size-3
        // sub-multisets of a length-6 sequence must count C(6,3) = 20
        let mut seq = ZSequence::empty(7, 1).unwrap();
        seq.push(e(&[1]), 3).unwrap();
        seq.push(e(&[2]), 2).unwrap();
        seq.push(e(&[3]), 1).unwrap();
        let mut total = BigUint::from(0u32);
        for sub in seq.sub_multisets(3).unwrap() {
            let mut w = BigUint::from(1u32);
            for (el, m) in sub.iter() {
                w *= binom_exact(seq.multiplicity(el), m);
            }
            total += w;
        }
        assert_eq!(total, binom_exact(6, 3));
    }

    #[test]
    fn json_round_trip_is_canonical() {
        let mut seq = ZSequence::empty(3, 2).unwrap();
        seq.push(e(&[2, 1]), 1).unwrap();
        seq.push(e(&[0, 1]), 2).unwrap();
        let json = serde_json::to_string(&seq).unwrap();
        assert_eq!(json, r#"{"n":3,"d":2,"elements":[[0,1],[0,1],[2,1]]}"#);
        let back: ZSequence = serde_json::from_str(&json).unwrap();
        assert_eq!(back, seq);

        let bad = r#"{"n":3,"d":2,"elements":[[0,3]]}"#;
        assert!(serde_json::from_str::<ZSequence>(bad).is_err());
    }

    proptest! {
        #[test]
        fn sub_multiset_weights_sum_to_binomial(
            mults in proptest::collection::vec(1u64..4, 1..5),
            pick in 0u64..12,
        ) {
            let mut seq = ZSequence::empty(5, 1).unwrap();
            for (i, &m) in mults.iter().enumerate() {
                seq.push(e(&[i as u32]), m).unwrap();
            }
            let size = pick.min(seq.len());
            let mut total = BigUint::from(0u32);
            let mut seen = 0u64;
            for sub in seq.sub_multisets(size).unwrap() {
                prop_assert_eq!(sub.len(), size);
                let mut w = BigUint::from(1u32);
                for (el, m) in sub.iter() {
                    w *= binom_exact(seq.multiplicity(el), m);
                }
                total += w;
                seen += 1;
            }
            prop_assert!(seen >= 1);
            prop_assert_eq!(total, binom_exact(seq.len(), size));
        }

        #[test]
        fn random_sequences_round_trip_json(seed in 0u64..500, len in 0u64..20) {
            let seq = random_sequence(4, 2, len, GeneratorProfile::Uniform, seed).unwrap();
            let json = serde_json::to_string(&seq).unwrap();
            let back: ZSequence = serde_json::from_str(&json).unwrap();
            prop_assert_eq!(back, seq);
        }
    }
}
