//! The three share-generation constructions, each with an exact joint law.
//!
//! * XOR-based `pi1`: an `(n,n)`-threshold scheme over bits — the secret
//!   and the first `n−1` shares are independently biased toward zero, and the
//!   last share closes the XOR. Correct for the full party set only.
//! * polynomial `pi2`: a `(k,n)`-threshold scheme over a prime field whose
//!   share vectors are rows of a polynomial evaluation table, drawn from a
//!   skewed two-mass law (the all-zero row is favored).
//! * `general`: a compiler from an arbitrary monotone access structure to
//!   sub-tuples of an internal `(m,m)` XOR instance, one building-block index
//!   per maximal forbidden set.
//!
//! Every scheme exposes `…_joint_distribution`, the exact rational law of
//! `(S, V₁, …, Vₙ)` that the verification layer consumes; sampling functions
//! realize precisely that law (exact rational Bernoulli draws, no floating
//! point).
//!
//! Share bundles serialize to a stable JSON form
//! `{"scheme", "params", "shares"}` with shares ordered by party and
//! sub-shares by index, so identical inputs produce byte-identical files.

mod general;
mod threshold;
mod xor;

pub(crate) use general::bundle_of_blocks;
pub use general::{
    general_combine, general_joint_distribution, general_share, GeneralParams, MAX_BLOCKS,
};
pub use threshold::{
    pi2_combine, pi2_distribution_table, pi2_joint_distribution, pi2_sample, pi2_share,
    DistributionTable, Pi2Params,
};
pub(crate) use xor::xor_joint;
pub use xor::{pi1_combine, pi1_joint_distribution, pi1_sample_secret, pi1_share, Pi1Params};

use num_bigint::RandBigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{RatioRepr, Rational};

/// One draw that is `true` with exact probability `p` (a rational in
/// `[0,1]`): a uniform integer below the denominator is compared against the
/// numerator, so no floating-point rounding enters the sample path.
pub(crate) fn bernoulli<R: Rng + ?Sized>(p: &Rational, rng: &mut R) -> bool {
    debug_assert!(!p.is_negative() && *p <= Rational::one());
    let num = p.numer().to_biguint().expect("nonnegative numerator");
    let den = p.denom().to_biguint().expect("positive denominator");
    if num.is_zero() {
        return false;
    }
    rng.gen_biguint_below(&den) < num
}

/// Shared invariant for the XOR-based schemes: the zero-bias `p` must lie
/// strictly between 1/2 and 1. At the boundaries the secret is independent
/// of every share family and the construction degenerates; callers wanting a
/// bias below 1/2 can relabel the alphabet.
pub(crate) fn check_bias(p: &Rational) -> Result<()> {
    let half = Rational::new(1.into(), 2.into());
    if *p <= half || *p >= Rational::one() {
        return Err(Error::InvalidParams(format!(
            "zero-bias p = {p} outside the open interval (1/2, 1)"
        )));
    }
    Ok(())
}

/// Scheme tag plus the full parameter set, echoed inside every bundle so
/// that combining never needs out-of-band context.
#[derive(Clone, Debug, PartialEq)]
pub enum SchemeParams {
    Xor(Pi1Params),
    Threshold(Pi2Params),
    General(GeneralParams),
}

impl SchemeParams {
    pub fn scheme_name(&self) -> &'static str {
        match self {
            SchemeParams::Xor(_) => "pi1",
            SchemeParams::Threshold(_) => "pi2",
            SchemeParams::General(_) => "general",
        }
    }

    pub fn party_count(&self) -> usize {
        match self {
            SchemeParams::Xor(p) => p.party_count(),
            SchemeParams::Threshold(p) => p.party_count(),
            SchemeParams::General(p) => p.structure().party_count(),
        }
    }
}

/// One party's share payload.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShareValue {
    /// A single alphabet value: a bit for the XOR schemes, a field element
    /// for the threshold scheme.
    Element(u64),
    /// Indexed sub-shares for the general construction, ascending in the
    /// building-block index `j`. Indices are explicit so that combining
    /// never guesses positions.
    SubShares(Vec<(usize, u8)>),
}

/// The output of a sharing run: scheme tag, parameter echo, and per-party
/// values, ordered by party.
#[derive(Clone, Debug, PartialEq)]
pub struct ShareBundle {
    params: SchemeParams,
    shares: Vec<(usize, ShareValue)>,
}

impl ShareBundle {
    pub(crate) fn new(params: SchemeParams, mut shares: Vec<(usize, ShareValue)>) -> Self {
        shares.sort_by_key(|(party, _)| *party);
        ShareBundle { params, shares }
    }

    /// Assemble a bundle from externally stored shares. Parties must be
    /// distinct and within range, and every value must be of the kind the
    /// scheme produces: field elements for the single-value schemes, bit
    /// sub-tuples with distinct nonzero indices for the general scheme.
    pub fn from_shares(
        params: SchemeParams,
        shares: Vec<(usize, ShareValue)>,
    ) -> Result<ShareBundle> {
        let n = params.party_count();
        let mut seen: Vec<usize> = Vec::with_capacity(shares.len());
        for (party, value) in &shares {
            if *party == 0 || *party > n {
                return Err(Error::InvalidParams(format!(
                    "party {party} outside 1..={n}"
                )));
            }
            seen.push(*party);
            match (&params, value) {
                (SchemeParams::General(_), ShareValue::SubShares(pairs)) => {
                    let mut indices: Vec<usize> = pairs.iter().map(|(j, _)| *j).collect();
                    indices.sort_unstable();
                    indices.dedup();
                    if indices.len() != pairs.len() {
                        return Err(Error::InvalidParams(format!(
                            "party {party} repeats a sub-share index"
                        )));
                    }
                    if pairs.iter().any(|&(j, bit)| j == 0 || bit > 1) {
                        return Err(Error::InvalidParams(format!(
                            "party {party} has an out-of-range sub-share"
                        )));
                    }
                }
                (SchemeParams::General(_), ShareValue::Element(_)) => {
                    return Err(Error::InvalidParams(format!(
                        "party {party}: the general scheme carries sub-shares, not elements"
                    )));
                }
                (_, ShareValue::Element(_)) => {}
                (_, ShareValue::SubShares(_)) => {
                    return Err(Error::InvalidParams(format!(
                        "party {party}: this scheme carries single elements, not sub-shares"
                    )));
                }
            }
        }
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParams("duplicate party in bundle".into()));
        }
        Ok(ShareBundle::new(params, shares))
    }

    pub fn scheme_name(&self) -> &'static str {
        self.params.scheme_name()
    }

    pub fn params(&self) -> &SchemeParams {
        &self.params
    }

    /// Shares as `(party, value)` pairs, ascending by party.
    pub fn shares(&self) -> &[(usize, ShareValue)] {
        &self.shares
    }

    pub fn share_of(&self, party: usize) -> Option<&ShareValue> {
        self.shares
            .iter()
            .find(|(i, _)| *i == party)
            .map(|(_, v)| v)
    }

    /// Keep only the listed parties (deduplicated); every requested party
    /// must be present in the bundle.
    pub fn restrict(&self, parties: &[usize]) -> Result<ShareBundle> {
        let mut keep: Vec<usize> = parties.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let shares = keep
            .iter()
            .map(|&party| {
                self.share_of(party)
                    .map(|v| (party, v.clone()))
                    .ok_or_else(|| {
                        Error::InvalidParams(format!("party {party} is not in the bundle"))
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ShareBundle {
            params: self.params.clone(),
            shares,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        let params = match &self.params {
            SchemeParams::Xor(p) => serde_json::to_value(XorParamsJson {
                n: p.party_count(),
                p: RatioRepr::try_from_ratio(p.bias())?,
            })?,
            SchemeParams::Threshold(p) => serde_json::to_value(ThresholdParamsJson {
                t: p.field().modulus(),
                k: p.threshold(),
                n: p.party_count(),
                p: RatioRepr::try_from_ratio(p.zero_mass())?,
            })?,
            SchemeParams::General(p) => serde_json::to_value(GeneralParamsJson {
                n: p.structure().party_count(),
                min_qualified: p
                    .structure()
                    .minimal_qualified_sets()
                    .iter()
                    .map(|&m| crate::access::parties_of(m))
                    .collect(),
                p: RatioRepr::try_from_ratio(p.bias())?,
            })?,
        };
        let shares = self
            .shares
            .iter()
            .map(|(party, value)| match value {
                ShareValue::Element(v) => PartyJson {
                    party: *party,
                    value: Some(*v),
                    subshares: None,
                },
                ShareValue::SubShares(subs) => PartyJson {
                    party: *party,
                    value: None,
                    subshares: Some(
                        subs.iter()
                            .map(|&(j, bit)| SubShareJson { j, bit })
                            .collect(),
                    ),
                },
            })
            .collect();
        let repr = BundleJson {
            scheme: self.scheme_name().to_string(),
            params,
            shares,
        };
        Ok(serde_json::to_string_pretty(&repr)?)
    }

    pub fn from_json(text: &str) -> Result<ShareBundle> {
        let repr: BundleJson = serde_json::from_str(text)
            .map_err(|e| Error::MalformedInput(format!("share-bundle json: {e}")))?;
        let params = match repr.scheme.as_str() {
            "pi1" => {
                let p: XorParamsJson = from_params(repr.params)?;
                SchemeParams::Xor(Pi1Params::new(p.n, p.p.to_ratio())?)
            }
            "pi2" => {
                let p: ThresholdParamsJson = from_params(repr.params)?;
                let field = crate::field::PrimeField::new(p.t)?;
                SchemeParams::Threshold(Pi2Params::new(field, p.k, p.n, p.p.to_ratio())?)
            }
            "general" => {
                let p: GeneralParamsJson = from_params(repr.params)?;
                let structure =
                    crate::access::AccessStructure::from_minimal_qualified(p.n, &p.min_qualified)?;
                SchemeParams::General(GeneralParams::new(structure, p.p.to_ratio())?)
            }
            other => {
                return Err(Error::MalformedInput(format!(
                    "unknown scheme tag `{other}`"
                )));
            }
        };
        let n = params.party_count();
        let mut shares = Vec::with_capacity(repr.shares.len());
        for entry in repr.shares {
            if entry.party == 0 || entry.party > n {
                return Err(Error::MalformedInput(format!(
                    "party {} outside 1..={n}",
                    entry.party
                )));
            }
            let value = match (&params, entry.value, entry.subshares) {
                (SchemeParams::General(_), None, Some(subs)) => {
                    let mut pairs: Vec<(usize, u8)> =
                        subs.into_iter().map(|s| (s.j, s.bit)).collect();
                    pairs.sort_unstable();
                    for window in pairs.windows(2) {
                        if window[0].0 == window[1].0 {
                            return Err(Error::MalformedInput(format!(
                                "party {} repeats sub-share index {}",
                                entry.party, window[0].0
                            )));
                        }
                    }
                    for &(j, bit) in &pairs {
                        if j == 0 || bit > 1 {
                            return Err(Error::MalformedInput(format!(
                                "party {} has an invalid sub-share ({j}, {bit})",
                                entry.party
                            )));
                        }
                    }
                    ShareValue::SubShares(pairs)
                }
                (SchemeParams::General(_), _, _) => {
                    return Err(Error::MalformedInput(format!(
                        "party {}: the general scheme carries `subshares`, not `value`",
                        entry.party
                    )));
                }
                (_, Some(v), None) => ShareValue::Element(v),
                _ => {
                    return Err(Error::MalformedInput(format!(
                        "party {}: exactly one of `value`/`subshares` must be present",
                        entry.party
                    )));
                }
            };
            shares.push((entry.party, value));
        }
        let mut seen: Vec<usize> = shares.iter().map(|(p, _)| *p).collect();
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::MalformedInput("duplicate party in bundle".into()));
        }
        Ok(ShareBundle::new(params, shares))
    }
}

fn from_params<T: serde::de::DeserializeOwned>(value: serde_json::Value) -> Result<T> {
    serde_json::from_value(value).map_err(|e| Error::MalformedInput(format!("scheme params: {e}")))
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BundleJson {
    scheme: String,
    params: serde_json::Value,
    shares: Vec<PartyJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PartyJson {
    party: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    subshares: Option<Vec<SubShareJson>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SubShareJson {
    j: usize,
    bit: u8,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct XorParamsJson {
    n: usize,
    p: RatioRepr,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ThresholdParamsJson {
    t: u64,
    k: usize,
    n: usize,
    p: RatioRepr,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeneralParamsJson {
    n: usize,
    min_qualified: Vec<Vec<usize>>,
    p: RatioRepr,
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    use crate::rational::ratio;

    #[test]
    fn bernoulli_is_exact_and_reproducible() {
        let p = ratio(3, 4);
        let mut a = ChaCha12Rng::seed_from_u64(11);
        let mut b = ChaCha12Rng::seed_from_u64(11);
        for _ in 0..100 {
            assert_eq!(bernoulli(&p, &mut a), bernoulli(&p, &mut b));
        }
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        let hits = (0..100_000).filter(|_| bernoulli(&p, &mut rng)).count();
        let freq = hits as f64 / 100_000.0;
        assert!((freq - 0.75).abs() < 0.01, "frequency {freq}");
        // Degenerate masses never fire / always fire.
        assert!(!bernoulli(&ratio(0, 1), &mut rng));
        assert!(bernoulli(&ratio(1, 1), &mut rng));
    }

    #[test]
    fn bias_domain_is_the_open_interval() {
        assert!(check_bias(&ratio(51, 100)).is_ok());
        assert!(check_bias(&ratio(1, 2)).is_err());
        assert!(check_bias(&ratio(1, 1)).is_err());
        assert!(check_bias(&ratio(1, 4)).is_err());
    }

    #[test]
    fn bundle_json_round_trips_each_scheme() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);

        let xor = Pi1Params::new(3, ratio(3, 4)).unwrap();
        let b = pi1_share(1, &xor, &mut rng).unwrap();
        let back = ShareBundle::from_json(&b.to_json().unwrap()).unwrap();
        assert_eq!(back, b);

        let field = crate::field::PrimeField::new(5).unwrap();
        let thr = Pi2Params::new(field, 2, 3, ratio(3, 8)).unwrap();
        let b = pi2_share(4, &thr, &mut rng).unwrap();
        let back = ShareBundle::from_json(&b.to_json().unwrap()).unwrap();
        assert_eq!(back, b);

        let structure = crate::access::AccessStructure::threshold(2, 3).unwrap();
        let gen = GeneralParams::new(structure, ratio(3, 4)).unwrap();
        let b = general_share(0, &gen, &mut rng).unwrap();
        let back = ShareBundle::from_json(&b.to_json().unwrap()).unwrap();
        assert_eq!(back, b);
    }

    #[test]
    fn bundle_json_is_deterministic() {
        let mut rng = ChaCha12Rng::seed_from_u64(9);
        let params = Pi1Params::new(4, ratio(9, 10)).unwrap();
        let b = pi1_share(0, &params, &mut rng).unwrap();
        let text = b.to_json().unwrap();
        let again = ShareBundle::from_json(&text).unwrap().to_json().unwrap();
        assert_eq!(text, again);
    }

    #[test]
    fn malformed_bundles_are_rejected() {
        assert!(ShareBundle::from_json("{").is_err());
        assert!(ShareBundle::from_json(r#"{"scheme":"nope","params":{},"shares":[]}"#).is_err());
        // Duplicate party.
        let text = r#"{
            "scheme": "pi1",
            "params": {"n": 2, "p": {"num": 3, "den": 4}},
            "shares": [{"party": 1, "value": 0}, {"party": 1, "value": 1}]
        }"#;
        assert!(ShareBundle::from_json(text).is_err());
        // Sub-shares on a non-general scheme.
        let text = r#"{
            "scheme": "pi1",
            "params": {"n": 2, "p": {"num": 3, "den": 4}},
            "shares": [{"party": 1, "subshares": [{"j": 1, "bit": 0}]}]
        }"#;
        assert!(ShareBundle::from_json(text).is_err());
        // Party outside the range fixed by the params echo.
        let text = r#"{
            "scheme": "pi1",
            "params": {"n": 2, "p": {"num": 3, "den": 4}},
            "shares": [{"party": 3, "value": 0}]
        }"#;
        assert!(ShareBundle::from_json(text).is_err());
    }

    #[test]
    fn restrict_selects_a_subset() {
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let params = Pi1Params::new(3, ratio(3, 4)).unwrap();
        let b = pi1_share(1, &params, &mut rng).unwrap();
        let sub = b.restrict(&[2, 1]).unwrap();
        assert_eq!(sub.shares().len(), 2);
        assert_eq!(sub.shares()[0].0, 1);
        assert!(b.restrict(&[4]).is_err());
    }
}
