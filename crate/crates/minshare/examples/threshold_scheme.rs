//! Run the polynomial k-out-of-n threshold scheme over a prime field: print
//! its distribution table, share and reconstruct a secret from different
//! quorums, and confirm that every share's law matches the secret's — the
//! scheme stays ideal even though its secret is biased.
//!
//! Run with: `cargo run -p minshare --example threshold_scheme`

use minshare::field::PrimeField;
use minshare::rational::Rational;
use minshare::schemes::{
    pi2_combine, pi2_distribution_table, pi2_joint_distribution, pi2_share, Pi2Params,
};
use minshare::verify::{ideality, is_non_perfect, theorem6_check};
use minshare::Result;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

fn main() -> Result<()> {
    let field = PrimeField::new(5)?;
    let (k, n) = (2, 4);
    let p = Rational::new(1.into(), 3.into());
    let params = Pi2Params::new(field, k, n, p)?;

    // The scheme is a lookup into the table of all polynomials of degree
    // < k: column s is the constant term, column v_i the value at party i's
    // evaluation point. The all-zero row carries mass p, the rest share the
    // remainder uniformly.
    let table = pi2_distribution_table(field, k, n)?;
    println!(
        "distribution table: {} rows, first four:",
        table.row_count()
    );
    for row in table.rows().iter().take(4) {
        println!("  {row:?}");
    }

    let mut rng = ChaCha12Rng::seed_from_u64(9);
    let bundle = pi2_share(3, &params, &mut rng)?;
    println!("\nshares of secret 3 (t = 5, k = {k}, n = {n}, p = 1/3):");
    for (party, value) in bundle.shares() {
        println!("  party {party}: {value:?}");
    }

    // Any k parties at distinct evaluation points interpolate the secret;
    // fewer are refused.
    for quorum in [vec![1, 2], vec![2, 4], vec![1, 2, 3, 4]] {
        let subset = bundle.restrict(&quorum)?;
        println!("combining {quorum:?}: {}", pi2_combine(&subset, &params)?);
    }
    let below = bundle.restrict(&[2])?;
    println!(
        "combining [2] fails: {}",
        pi2_combine(&below, &params).unwrap_err()
    );

    // Profile: all n + 1 column marginals are identical, and their common
    // largest mass has a closed form in t, k, and p.
    let profile = theorem6_check(&params)?;
    println!("\nmarginals identical: {}", profile.marginals_identical);
    println!(
        "common largest mass: {} ({:.6} bits)",
        profile.closed_form_max_mass, profile.min_entropy_bits
    );

    // Ideality: every share carries exactly the secret's min-entropy.
    let joint = pi2_joint_distribution(&params)?;
    let ideal = ideality(&joint)?;
    println!(
        "ideal: {} (secret max mass {})",
        ideal.ideal, ideal.secret_max_mass
    );

    // The price of short shares: the scheme is not perfectly secure unless
    // the table rows are uniform. With p = 1/3 > 1/25 a forbidden view is
    // correlated with the secret, and the witness names one.
    let structure = minshare::access::AccessStructure::threshold(k, n)?;
    let (nonperfect, witness) = is_non_perfect(&joint, &structure)?;
    println!("non-perfect: {nonperfect} (witness view: {witness:?})");
    Ok(())
}
