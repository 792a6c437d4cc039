//! Exhaustive zero-sum constants at desk scale: s_1(Z_n) = 2n-1,
//! s_1(Z_n^2) = 4n-3 for tiny n, and s_1(Z_2^3) = 9, each with an
//! independently validated extremal witness.
//!
//! Run with: cargo run --example zero_sum_constants

use zslab::search::{s_constant, validate_witness, ConstantOutcome, SearchOptions};

fn main() -> zslab::Result<()> {
    println!("{:<12} {:>8} {:>10} {:>12}", "group", "value", "witness", "nodes");
    for (n, d) in [(2u64, 1u32), (3, 1), (4, 1), (5, 1), (6, 1), (7, 1), (2, 2), (3, 2), (2, 3)] {
        let result = s_constant(n, d, 1, &SearchOptions::default())?;
        let ConstantOutcome::Determined { value } = result.outcome else {
            println!("Z_{n}^{d}: search bracketed, raise the budget");
            continue;
        };
        let witness = result.witness.expect("extremal witness");
        assert!(validate_witness(&witness, n, 10_000_000)?);
        println!(
            "{:<12} {:>8} {:>10} {:>12}",
            format!("Z_{n}^{d}"),
            value,
            witness.len(),
            result.stats.nodes
        );
    }

    // higher k: s_2(Z_3) = 2*3 + 3 - 1... computed, not assumed
    let result = s_constant(3, 1, 2, &SearchOptions::default())?;
    println!("\ns_2(Z_3) = {:?}", result.outcome);
    if let Some(w) = &result.witness {
        println!("witness of length {}: {}", w.len(), serde_json::to_string(w)?);
    }
    Ok(())
}
