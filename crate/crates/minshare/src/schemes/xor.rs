//! The `(n,n)` XOR construction over bits: the secret and the first `n−1`
//! shares are independent draws biased toward zero, and the last share
//! closes the XOR so that `v₁ ⊕ ⋯ ⊕ vₙ = s`. Only the full party set can
//! reconstruct, and the closing share is the one place the secret leaks
//! Shannon-entropy-wise, which is exactly what the verification layer
//! measures.

use num_traits::One;
use rand::Rng;

use crate::access::MAX_PARTIES;
use crate::dist::JointDist;
use crate::error::{Error, Result};
use crate::rational::Rational;

use super::{bernoulli, check_bias, SchemeParams, ShareBundle, ShareValue};

/// Parameters of the XOR scheme: party count and the common zero-bias of
/// the secret and the free shares.
#[derive(Clone, Debug, PartialEq)]
pub struct Pi1Params {
    n: usize,
    p: Rational,
}

impl Pi1Params {
    /// `n ≥ 2` parties; `1/2 < p < 1` strictly (the boundary values make the
    /// secret independent of every share family, collapsing the scheme into
    /// the perfectly-secure regime this construction deliberately leaves).
    pub fn new(n: usize, p: Rational) -> Result<Self> {
        if !(2..=MAX_PARTIES).contains(&n) {
            return Err(Error::InvalidParams(format!(
                "party count {n} outside 2..={MAX_PARTIES}"
            )));
        }
        check_bias(&p)?;
        Ok(Pi1Params { n, p })
    }

    pub fn party_count(&self) -> usize {
        self.n
    }

    /// The probability that the secret (and each free share) is 0.
    pub fn bias(&self) -> &Rational {
        &self.p
    }
}

/// Draw a secret bit: 0 with probability `p`, else 1.
pub fn pi1_sample_secret<R: Rng + ?Sized>(params: &Pi1Params, rng: &mut R) -> u8 {
    u8::from(!bernoulli(&params.p, rng))
}

/// Share a secret bit: draw the free shares, close the XOR, bundle all `n`.
pub fn pi1_share<R: Rng + ?Sized>(s: u8, params: &Pi1Params, rng: &mut R) -> Result<ShareBundle> {
    check_bit(s)?;
    let values = xor_share_bits(s, params.n, &params.p, rng);
    let shares = values
        .into_iter()
        .enumerate()
        .map(|(idx, bit)| (idx + 1, ShareValue::Element(u64::from(bit))))
        .collect();
    Ok(ShareBundle::new(SchemeParams::Xor(params.clone()), shares))
}

/// Recover the secret from a full bundle: the XOR of all `n` shares.
pub fn pi1_combine(bundle: &ShareBundle) -> Result<u8> {
    let params = match bundle.params() {
        SchemeParams::Xor(p) => p,
        other => {
            return Err(Error::InvalidParams(format!(
                "expected a pi1 bundle, found scheme `{}`",
                other.scheme_name()
            )));
        }
    };
    let bits = collect_bits(bundle, params.n)?;
    Ok(bits.iter().fold(0, |acc, &b| acc ^ b))
}

/// Exact joint law of `(S, V₁, …, Vₙ)`: each of the `2^n` free patterns
/// `(s, v₁, …, v_{n−1})` carries mass `p^z (1−p)^{n−z}` where `z` counts its
/// zeros, and `vₙ` is determined by the XOR relation.
pub fn pi1_joint_distribution(params: &Pi1Params) -> JointDist {
    let mut variables = vec!["S".to_string()];
    for i in 1..=params.n {
        variables.push(format!("V{i}"));
    }
    xor_joint(params.n, &params.p, variables)
}

/// Draw `(v₁, …, v_m)` with `v₁ ⊕ ⋯ ⊕ v_m = s`: the first `m−1` shares are
/// independent `p`-biased bits and the last closes the XOR. Supports `m = 1`
/// (the single share is the secret itself), which the general compiler
/// needs when a structure has exactly one maximal forbidden set.
pub(crate) fn xor_share_bits<R: Rng + ?Sized>(
    s: u8,
    share_count: usize,
    p: &Rational,
    rng: &mut R,
) -> Vec<u8> {
    let mut values = Vec::with_capacity(share_count);
    let mut acc = s;
    for _ in 0..share_count - 1 {
        let bit = u8::from(!bernoulli(p, rng));
        acc ^= bit;
        values.push(bit);
    }
    values.push(acc);
    values
}

/// Exact joint law of `(secret, share₁, …, share_m)` under the XOR closing
/// rule, with caller-supplied variable names (`variables[0]` is the secret).
/// Supports `m = 1`.
pub(crate) fn xor_joint(share_count: usize, p: &Rational, variables: Vec<String>) -> JointDist {
    debug_assert_eq!(variables.len(), share_count + 1);
    let q = Rational::one() - p;
    let free = share_count; // s plus the m−1 free shares
    let mut entries = Vec::with_capacity(1 << free);
    for pattern in 0u32..1 << free {
        let mut tuple = Vec::with_capacity(share_count + 1);
        let mut zeros = 0usize;
        let mut acc = 0u8;
        for pos in 0..free {
            let bit = (pattern >> pos & 1) as u8;
            if bit == 0 {
                zeros += 1;
            }
            acc ^= bit;
            tuple.push(bit.to_string());
        }
        tuple.push(acc.to_string()); // the closing share
        let mass = pow_mass(p, zeros) * pow_mass(&q, free - zeros);
        entries.push((tuple, mass));
    }
    JointDist::new(variables, entries).expect("XOR joint law is a valid distribution")
}

fn pow_mass(base: &Rational, exp: usize) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

fn check_bit(s: u8) -> Result<()> {
    if s > 1 {
        return Err(Error::InvalidParams(format!("secret {s} is not a bit")));
    }
    Ok(())
}

/// All `n` share bits of a full XOR bundle, erroring on gaps or non-bits.
fn collect_bits(bundle: &ShareBundle, n: usize) -> Result<Vec<u8>> {
    let mut bits = Vec::with_capacity(n);
    for party in 1..=n {
        let value = bundle.share_of(party).ok_or_else(|| {
            Error::NotQualified(format!(
                "party {party} is missing; recovery needs all {n} parties"
            ))
        })?;
        match value {
            ShareValue::Element(v) if *v <= 1 => bits.push(*v as u8),
            ShareValue::Element(v) => {
                return Err(Error::MalformedInput(format!(
                    "share of party {party} is {v}, not a bit"
                )));
            }
            ShareValue::SubShares(_) => {
                return Err(Error::MalformedInput(format!(
                    "share of party {party} is a sub-share tuple, not a bit"
                )));
            }
        }
    }
    Ok(bits)
}
