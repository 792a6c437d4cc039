//! Forward derivation of count residues from instantiated identities,
//! replaying the classical chain arguments at a concrete prime.
//!
//! Run with: cargo run --example derive_replay

use zslab::arith::{parse_length, PrimeModulus};
use zslab::identities::{
    base_identity, derive_counts, lift_identity, remark1_relations, theorem1_chain,
    DeriveOutcome,
};

fn main() -> zslab::Result<()> {
    let q = 11u64;
    let p = PrimeModulus::new(q)?;

    // at size 5p-3 with no p- or 2p-zero-sums: N^{3p} == 4, N^{4p} == 3
    let size = parse_length("5p-3")?;
    let insts = vec![
        lift_identity(&base_identity(4)?, &size)?.instantiate(p)?,
        base_identity(5)?.instantiate(p)?,
    ];
    let DeriveOutcome::Solved { forms, .. } =
        derive_counts(&insts, &[(q, 0), (2 * q, 0)], &[], p)?
    else {
        unreachable!()
    };
    println!("size 5p-3, assuming N^p = N^2p = 0, at p = {q}:");
    for (len, form) in &forms {
        println!("  N^{{{}p}} == {}", len / q, form.eval_mod(0, p));
    }

    // at size 7p-3 with no p- or 3p-zero-sums: -5, 15, 16
    let size = parse_length("7p-3")?;
    let insts: Vec<_> = (4..=6u32)
        .map(|k| {
            lift_identity(&base_identity(k).unwrap(), &size)
                .unwrap()
                .instantiate(p)
                .unwrap()
        })
        .collect();
    let DeriveOutcome::Solved { forms, .. } =
        derive_counts(&insts, &[(q, 0), (3 * q, 0)], &[], p)?
    else {
        unreachable!()
    };
    println!("\nsize 7p-3, assuming N^p = N^3p = 0, at p = {q}:");
    for (len, form) in &forms {
        println!("  N^{{{}p}} == {}", len / q, form.eval_mod(0, p));
    }

    // an impossible assumption set yields a contradiction certificate
    let outcome = derive_counts(
        &[base_identity(5)?.instantiate(p)?],
        &[(q, 0), (2 * q, 0), (3 * q, 0), (4 * q, 0)],
        &[],
        p,
    )?;
    if let DeriveOutcome::Contradiction { identity, residue } = outcome {
        println!("\nall counts assumed zero at size 5p-3 contradicts:");
        println!("  {identity}");
        println!("  residue {residue} != 0");
    }

    // the chain argument: N^{5p} == 0 at 6p-3 pins t == -6, double
    // counting gives 3t == 10c, hence 5c == -9
    for q in [11u64, 13, 31] {
        let chain = theorem1_chain(PrimeModulus::new(q)?)?;
        println!(
            "\nchain at p = {q}: t == {} (== -6), {}, c == {}, 5c == {} (expect {}), consistent: {}",
            chain.t, chain.relation, chain.c, chain.five_c, chain.five_c_expected, chain.consistent
        );
    }

    // both relation sets between the table parameters are recorded
    let rels = remark1_relations()?;
    println!("\nparameter relations, printed: {:?}", rels.printed);
    println!("parameter relations, recomputed: {:?}", rels.recomputed);
    Ok(())
}
