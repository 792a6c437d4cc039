//! Statement-level falsification campaigns, including hypothesis-
//! conditioned statements that report vacuity honestly when the
//! hypothesis never fires.
//!
//! Run with: cargo run --example campaigns

use zslab::arith::PrimeModulus;
use zslab::search::{verify_statement, StatementId};

fn main() -> zslab::Result<()> {
    let p3 = PrimeModulus::new(3)?;
    let p5 = PrimeModulus::new(5)?;

    // unconditional forcing statements at sizes 6p-3 .. 9p-3
    for st in [
        StatementId::Lemma1,
        StatementId::Lemma2,
        StatementId::Corollary4p,
        StatementId::Corollary5p,
    ] {
        let report = verify_statement(st, p3, 2000, 1)?;
        println!(
            "{:<22} p = 3: {:?} over {} trials ({})",
            report.statement, report.status, report.trials, report.notes[0]
        );
    }

    // conditional statements: hypothesis satisfaction is tracked and
    // vacuity is a distinct status, never a silent pass
    let report = verify_statement(StatementId::Application1, p5, 300, 2)?;
    println!(
        "\n{} p = 5: {:?}, hypothesis satisfied in {}/{} trials",
        report.statement, report.status, report.hypothesis_satisfied, report.trials
    );
    for note in &report.notes {
        println!("  {note}");
    }

    let report = verify_statement(StatementId::Theorem1Hypothesis, p3, 60, 3)?;
    println!(
        "\n{} p = 3: {:?}, hypothesis satisfied in {}/{} trials ({} undetermined)",
        report.statement,
        report.status,
        report.hypothesis_satisfied,
        report.trials,
        report.hypothesis_undetermined
    );
    for note in &report.notes {
        println!("  {note}");
    }
    Ok(())
}
