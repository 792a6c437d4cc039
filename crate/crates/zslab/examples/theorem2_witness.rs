//! The lower-bound construction over Z_p^3: length 4p-4+(p-1)/2, no
//! zero-sum of length p or 2p, and N^{2p} = 0 on every size-(4p-3)
//! sub-multiset, confirmed exhaustively.
//!
//! Run with: cargo run --example theorem2_witness

use zslab::arith::{binom_exact, PrimeModulus};
use zslab::search::{has_zero_sum, verify_statement, StatementId};
use zslab::sequences::theorem2_construction;

fn main() -> zslab::Result<()> {
    for q in [3u64, 5, 7, 11] {
        let p = PrimeModulus::new(q)?;
        let seq = theorem2_construction(p)?;
        println!("p = {q}: |J| = {} = 4p-4+(p-1)/2", seq.len());
        for (e, m) in seq.iter() {
            println!("    {e} x{m}");
        }
        println!(
            "  zero-sum of length p: {}, of length 2p: {}",
            has_zero_sum(&seq, q)?,
            has_zero_sum(&seq, 2 * q)?
        );
        let sub_size = 4 * q - 3;
        let mut distinct = 0u64;
        let mut clean = true;
        for sub in seq.sub_multisets(sub_size)? {
            distinct += 1;
            clean &= !has_zero_sum(&sub, 2 * q)?;
        }
        println!(
            "  sub-multisets of size {sub_size}: {distinct} distinct ({} as index subsets), all with N^{{2p}} = 0: {clean}",
            binom_exact(seq.len(), sub_size)
        );
    }

    // the same checks are packaged as a campaign statement
    let report = verify_statement(StatementId::Theorem2, PrimeModulus::new(7)?, 0, 0)?;
    println!("\ncampaign report at p = 7: {:?}", report.status);
    for note in &report.notes {
        println!("  {note}");
    }
    Ok(())
}
