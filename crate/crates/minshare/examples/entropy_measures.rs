//! Compute the order-α entropy ladder of a small distribution, then compare
//! the average-case and worst-case conditional min-entropies on a correlated
//! pair — the two quantities the security definitions in this crate rest on.
//!
//! Run with: `cargo run -p minshare --example entropy_measures`

use minshare::dist::JointDist;
use minshare::entropy::{
    avg_cond_min_entropy, cond_renyi_arimoto, renyi_entropy, worst_cond_min_entropy, Order,
};
use minshare::rational::Rational;
use minshare::Result;

fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}

fn main() -> Result<()> {
    // A correlated pair: X is 0 with probability 3/4, and Y echoes X except
    // that half of the X = 0 mass flips to Y = 1.
    let joint = JointDist::new(
        vec!["X".into(), "Y".into()],
        vec![
            (vec!["0".into(), "0".into()], ratio(1, 2)),
            (vec!["0".into(), "1".into()], ratio(1, 4)),
            (vec!["1".into(), "1".into()], ratio(1, 4)),
        ],
    )?;
    let x = joint.prob_dist("X")?;

    // The ladder is non-increasing in the order: higher α weighs the heavy
    // outcomes more, so the reported uncertainty can only shrink.
    println!("entropy ladder of X ~ (3/4, 1/4):");
    for text in ["0", "1/2", "1", "2", "inf"] {
        let order = Order::parse(text)?;
        println!("  order {text:>3}: {:.6} bits", renyi_entropy(&x, &order));
    }

    // Conditioning on Y: the average-case measure keeps the exact pre-log
    // sum Σ_y max_x P(x,y) as a rational, so downstream equality checks
    // never go through floating point.
    let avg = avg_cond_min_entropy(&joint, "X", &["Y"])?;
    println!("\naverage-case min-entropy of X given Y:");
    println!("  guessing mass Σ_y max_x P(x,y) = {}", avg.inner_sum);
    println!("  entropy = {:.6} bits", avg.bits());

    // The worst-case measure asks for the single most revealing condition.
    // Here Y = 0 pins X = 0 with certainty, so it collapses to zero even
    // though the average view retains most of the uncertainty.
    let worst = worst_cond_min_entropy(&joint, "X", &["Y"])?;
    println!("worst-case min-entropy of X given Y:");
    println!("  largest conditional mass = {}", worst.max_conditional);
    println!("  entropy = {:.6} bits", worst.bits());

    // The general conditional form interpolates between the Shannon case
    // (order 1) and the average-case min-entropy (order ∞).
    println!("\nconditional ladder of X given Y:");
    for text in ["1/2", "1", "2", "inf"] {
        let order = Order::parse(text)?;
        let bits = cond_renyi_arimoto(&joint, "X", &["Y"], &order)?;
        println!("  order {text:>3}: {bits:.6} bits");
    }
    Ok(())
}
