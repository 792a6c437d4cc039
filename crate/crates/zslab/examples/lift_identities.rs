//! The lifting transform: start from the counting congruences at sizes
//! kp-3 and lift them to larger sizes, reproducing the classical
//! coefficient tables.
//!
//! Run with: cargo run --example lift_identities

use zslab::arith::parse_length;
use zslab::identities::{base_identity, lift_identity, remark_identity_zp2};

fn main() -> zslab::Result<()> {
    println!("base identities over Z_p^3 (axioms of the workbench):");
    for k in 4..=9u32 {
        println!("  {}", base_identity(k)?);
    }

    println!("\nlifts to size 9p-3:");
    let target = parse_length("9p-3")?;
    for k in 4..=8u32 {
        let lifted = lift_identity(&base_identity(k)?, &target)?;
        println!("  from {}p-3: {}", k, lifted);
    }

    println!("\nthe dimension-2 identity and its lift to 4p-3:");
    let remark = remark_identity_zp2();
    println!("  {}", remark);
    let lifted = lift_identity(&remark, &parse_length("4p-3")?)?;
    println!("  {}", lifted);

    // lifting twice equals lifting once, scaled by a single binomial
    let mid = parse_length("6p-3")?;
    let two_step = lift_identity(&lift_identity(&base_identity(4)?, &mid)?, &target)?;
    let direct = lift_identity(&base_identity(4)?, &target)?;
    let scalar = zslab::arith::symbolic_binom(
        &target.sub(&parse_length("4p-3")?)?,
        &mid.sub(&parse_length("4p-3")?)?,
    )?
    .value;
    println!("\ntwo-step lift law through 6p-3 (scalar C(5p,2p) = {scalar}):");
    println!("  two-step: {}", two_step);
    println!("  direct  : {}", direct);
    assert_eq!(two_step.constant, scalar * direct.constant);

    // identity documents serialize to a stable interchange form
    println!(
        "\ninterchange JSON of the first lift:\n  {}",
        serde_json::to_string(&direct)?
    );
    Ok(())
}
