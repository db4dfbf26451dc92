//! Quantify a scheme's security by brute force: measure the entropy gap of
//! every forbidden view at several orders, feed the resulting ε into the
//! share-size bound, and — because the min-entropy gap is exactly zero —
//! run the stricter equality suite that zero slack unlocks.
//!
//! Run with: `cargo run -p minshare --example verify_security`

use minshare::access::AccessStructure;
use minshare::entropy::Order;
use minshare::rational::Rational;
use minshare::schemes::{pi1_joint_distribution, Pi1Params};
use minshare::verify::{check_share_bounds, epsilon_security, ideality, report_to_json};
use minshare::Result;

fn main() -> Result<()> {
    // The 3-party XOR scheme with a 3/4-biased secret: exactly min-entropy
    // secure, yet measurably leaky at order 1 and not ideal at party 3.
    let params = Pi1Params::new(3, Rational::new(3.into(), 4.into()))?;
    let joint = pi1_joint_distribution(&params);
    let structure = AccessStructure::threshold(3, 3)?;

    println!("largest forbidden-view entropy gap by order:");
    for text in ["1/2", "1", "2", "inf"] {
        let order = Order::parse(text)?;
        let sec = epsilon_security(&joint, &structure, &order)?;
        println!("  order {text:>3}: epsilon = {:.6} bits", sec.epsilon);
    }

    // At order ∞ the gap is zero as an exact rational identity, so ε = 0
    // goes into the share bound with no tolerance, and each share must
    // carry at least the secret's full min-entropy.
    let inf = Order::parse("inf")?;
    let sec = epsilon_security(&joint, &structure, &inf)?;
    let bounds = check_share_bounds(&joint, &structure, &inf, sec.epsilon)?;
    println!(
        "\nshare-size bound at order inf with epsilon = {}:",
        sec.epsilon
    );
    println!("  secret: {:.6} bits", bounds.secret_bits);
    for party in &bounds.parties {
        println!(
            "  party {}: {:.6} bits, pass = {}",
            party.party, party.share_bits, party.pass
        );
    }
    if let Some(suite) = &bounds.corollaries {
        println!("  zero-gap equality suite (all orders, plus support sizes):");
        for check in &suite.orders {
            println!(
                "    order {:>3}: {}",
                check.order,
                if check.pass { "pass" } else { "FAIL" }
            );
        }
        println!(
            "    support sizes: {}",
            if suite.support_sizes_ok {
                "pass"
            } else {
                "FAIL"
            }
        );
    }

    // Ideality is where this scheme pays: the closing share is flatter than
    // the secret, so its min-entropy is strictly larger.
    let ideal = ideality(&joint)?;
    println!("\nideal: {}", ideal.ideal);
    for party in &ideal.parties {
        println!(
            "  party {}: {:.6} bits (max mass {}), equal = {}",
            party.party, party.share_min_entropy_bits, party.share_max_mass, party.equal
        );
    }

    // Every report serializes to stable JSON for machine consumption.
    println!("\nsecurity report as JSON:\n{}", report_to_json(&sec)?);
    Ok(())
}
