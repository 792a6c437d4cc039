//! Empirical verification campaigns: run the counting congruences against
//! randomly generated sequences and report counterexamples (there are
//! none for the genuine identities; a corrupted one fails immediately).
//!
//! Run with: cargo run --example verify_identities

use zslab::arith::PrimeModulus;
use zslab::identities::{
    base_identity, remark_identity_zp2, verify_identity, CampaignProfile, VerifyStatus,
};

fn main() -> zslab::Result<()> {
    let trials = 200;

    println!("dimension-2 identity at small primes:");
    for q in [3u64, 5, 7] {
        let p = PrimeModulus::new(q)?;
        let report = verify_identity(
            &remark_identity_zp2(),
            p,
            trials,
            CampaignProfile::Mixed,
            1,
            false,
        )?;
        println!(
            "  p = {q}: {:?} over {} trials (profile {})",
            report.status, report.trials, report.profile
        );
    }

    println!("\nbase identities over Z_p^3 at p = 5 and 7 (below the asserted");
    println!("threshold p > 7, probed behind the out-of-domain flag):");
    for q in [5u64, 7] {
        let p = PrimeModulus::new(q)?;
        for k in [4u32, 6, 9] {
            let id = base_identity(k)?;
            let report = verify_identity(&id, p, trials, CampaignProfile::Mixed, 2, true)?;
            println!(
                "  p = {q}, size {k}p-3: {:?} (below_p_min = {})",
                report.status, report.below_p_min
            );
        }
    }

    // harness sanity: corrupting the constant must produce a witness
    let mut corrupted = remark_identity_zp2();
    corrupted.constant = 2;
    let p = PrimeModulus::new(5)?;
    let report = verify_identity(&corrupted, p, trials, CampaignProfile::Mixed, 3, false)?;
    assert_eq!(report.status, VerifyStatus::Fail);
    println!(
        "\ncorrupted identity (constant 2): {:?} with {} witnesses, e.g.\n  {}",
        report.status,
        report.failures.len(),
        serde_json::to_string(&report.failures[0])?
    );
    Ok(())
}
