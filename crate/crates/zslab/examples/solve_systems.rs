//! Triangular systems: assemble the congruences at size kp-3 under
//! N^p = 0 into a matrix, solve by forward substitution over exact
//! integer affine forms, check residuals, diff against the published
//! reference vectors, and analyze exceptional primes.
//!
//! Run with: cargo run --example solve_systems

use zslab::arith::parse_length;
use zslab::linearfp::{
    assemble_system, diff_solutions, exceptional_primes, parameter_for_size, reference_solution,
    residual_check, solve_triangular,
};

fn main() -> zslab::Result<()> {
    for k in [5u64, 6, 7, 8, 9] {
        let size = parse_length(&format!("{k}p-3"))?;
        let param = parameter_for_size(k);
        let sys = assemble_system(
            &size,
            &[(parse_length("p")?, 0)],
            (&parse_length("2p")?, param),
        )?;
        let solution = solve_triangular(&sys)?;
        let residuals = residual_check(&sys, &solution)?;
        assert!(residuals.iter().all(|r| r.is_identically_zero()));
        let display: Vec<String> = solution.iter().map(|f| f.to_string()).collect();
        println!("size {size}: N^{{2p}}..N^{{{}p}} = ({})", k - 1, display.join(", "));

        if let Some(reference) = reference_solution(k) {
            let diff = diff_solutions(&solution, &reference.forms);
            if diff.is_empty() {
                println!("  matches the reference table entry for entry");
            } else {
                for d in &diff {
                    println!(
                        "  DIFF at entry {}: derived {} vs reference {}",
                        d.index, d.derived, d.reference
                    );
                }
                let res = residual_check(&sys, &reference.forms)?;
                let consts: Vec<i64> = res.iter().map(|r| r.beta).collect();
                println!("  reference vector residuals: {consts:?}");
            }
        }
    }

    println!("\nexceptional primes above cutoff 7:");
    let printed8 = reference_solution(8).unwrap();
    let report = exceptional_primes(&printed8.forms, 7)?;
    println!(
        "  printed 8p-3 vector: {:?}",
        report.exceptional_primes
    );
    for pair in report.pairs.iter().filter(|p| !p.primes_above_cutoff.is_empty()) {
        println!(
            "    ({}, {}): resultant {} = {:?}",
            pair.form_i, pair.form_j, pair.resultant, pair.factorization
        );
    }

    // the recomputed 8p-3 vector has no exceptions at all
    let size = parse_length("8p-3")?;
    let sys = assemble_system(&size, &[(parse_length("p")?, 0)], (&parse_length("2p")?, "l"))?;
    let derived = solve_triangular(&sys)?;
    let report = exceptional_primes(&derived, 7)?;
    println!("  derived 8p-3 vector: {:?}", report.exceptional_primes);
    Ok(())
}
