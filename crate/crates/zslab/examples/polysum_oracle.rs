//! The polynomial-method sums: literal point summation of the downsized
//! family against the count-profile reduction, the 28 pair-sum equalities
//! at full size, and the dichotomy verdict.
//!
//! Run with: cargo run --example polysum_oracle

use zslab::arith::PrimeModulus;
use zslab::polysum::{
    downsized_reduction, lemma3_check, polysum_direct_downsized, polysum_reduced,
    theorem3_verdict, DownsizedPolySpec,
};
use zslab::sequences::{random_sequence, GeneratorProfile, GroupElement, ZSequence};

fn main() -> zslab::Result<()> {
    // downsized oracle: p = 3, |J| = 10 over Z_3^2, factor set {1, 2}
    let p3 = PrimeModulus::new(3)?;
    let seq = random_sequence(3, 2, 10, GeneratorProfile::Uniform, 5)?;
    let spec = DownsizedPolySpec::new(p3, seq, vec![1, 2])?;
    let direct = polysum_direct_downsized(&spec, 100_000_000)?;
    let reduced = downsized_reduction(&spec)?;
    println!("downsized oracle at p = 3, |J| = 10, T = {{1,2}}:");
    println!("  literal sum over 3^10 points = {direct}");
    println!("  reduction via count profile  = {reduced}");
    assert_eq!(direct, reduced);

    // full size: the worked instance of 96 zeros at p = 11
    let p11 = PrimeModulus::new(11)?;
    let mut zeros = ZSequence::empty(11, 3)?;
    zeros.push(GroupElement::zero(3), 96)?;
    let value = polysum_reduced(&zeros, p11, (1, 8))?;
    println!("\npair (1,8) sum for 96 zeros at p = 11: {value} (5040 - 720*8 + 720*1 == 0)");

    // all 28 pair sums coincide on a random sequence of size 9p-3
    let seq = random_sequence(11, 3, 96, GeneratorProfile::LowSupport(4), 9)?;
    let report = lemma3_check(&seq, p11)?;
    println!(
        "\npair sums on a random low-support |J| = 96: common value {:?}, deviations {:?}",
        report.common_value, report.deviating_pairs
    );
    assert!(report.all_equal());

    // the dichotomy verdict, with the zero-point values and coefficients
    let verdict = theorem3_verdict(&seq, p11)?;
    println!("\nverdict for that sequence:");
    println!("  branch: {}", verdict.branch);
    println!("  N^p positive: {}", verdict.n_p_positive);
    println!(
        "  zero-point values P_1j(0) (j, value mod 11): {:?}",
        verdict.zero_point_values
    );
    println!(
        "  pairwise distinct mod p: {}",
        verdict.zero_points_distinct
    );
    println!(
        "  equation coefficients (j, a_j, b_j): {:?}",
        verdict.coefficient_pairs
    );
    Ok(())
}
