//! Counting basics: build sequences, count zero-sum subsequences with the
//! DP, and cross-check against brute-force enumeration.
//!
//! Run with: cargo run --example count_basics

use zslab::counting::{brute_force_count, count_profile, count_subsequences, CountMode};
use zslab::sequences::{sequence_from_elements, GroupElement, ZSequence};

fn main() -> zslab::Result<()> {
    // five copies of (1,0,0) over Z_3^3: any three of them sum to zero
    let seq = sequence_from_elements(
        3,
        3,
        (0..5).map(|_| GroupElement::new(vec![1, 0, 0])),
    )?;
    let zero = GroupElement::zero(3);
    let dp = count_subsequences(&seq, 3, &zero, CountMode::Exact)?;
    let brute = brute_force_count(&seq, 3, &zero, 1_000_000)?;
    println!("N^3 of five copies of (1,0,0) over Z_3^3:");
    println!("  dp    = {}", dp.to_string_value());
    println!("  brute = {}", brute.to_string_value());
    assert_eq!(dp, brute);

    // a batched profile shares one DP pass across lengths
    let mut zeros = ZSequence::empty(3, 3)?;
    zeros.push(GroupElement::zero(3), 24)?;
    let lengths: Vec<u64> = (1..=8).map(|j| 3 * j).collect();
    let profile = count_profile(&zeros, &lengths, CountMode::Exact)?;
    println!("\nzero-sum profile of 24 zeros over Z_3^3 (pure binomials):");
    for (len, count) in &profile.entries {
        println!("  N^{len} = {}", count.to_string_value());
    }

    // arbitrary targets work too; mass over all targets is C(|J|, l)
    let seq = zslab::sequences::random_sequence(
        3,
        2,
        8,
        zslab::sequences::GeneratorProfile::Uniform,
        7,
    )?;
    let mut total = num_bigint::BigUint::from(0u32);
    for a in 0..3u32 {
        for b in 0..3u32 {
            let c = count_subsequences(&seq, 4, &GroupElement::new(vec![a, b]), CountMode::Exact)?;
            if let zslab::counting::Count::Exact(v) = c {
                total += v;
            }
        }
    }
    println!("\nmass check on a random |J| = 8 over Z_3^2:");
    println!("  sum over all 9 targets of N^4(J, t) = {total} = C(8,4) = 70");
    assert_eq!(total, zslab::arith::binom_exact(8, 4));
    Ok(())
}
