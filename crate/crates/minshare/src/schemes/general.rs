//! Compiler from an arbitrary monotone access structure to the XOR
//! building block: one block index per maximal forbidden set, distributed
//! so that qualified sets collect all `m` block shares while forbidden sets
//! always miss at least one. Party `i`'s share is the sub-tuple
//! `(w_j : j ∈ φ(i))` of an internal `(m,m)` XOR instance.

use std::collections::BTreeMap;

use rand::Rng;

use crate::access::{AccessStructure, CumulativeMap};
use crate::dist::JointDist;
use crate::error::{Error, Result};
use crate::rational::Rational;

use super::xor::xor_share_bits;
use super::{check_bias, SchemeParams, ShareBundle, ShareValue};

/// Bound on the internal block count: the joint law enumerates `2^m` rows.
pub const MAX_BLOCKS: usize = 20;

/// Parameters of the general construction: a proper monotone access
/// structure and the zero-bias of the internal XOR instance.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneralParams {
    structure: AccessStructure,
    cumulative: CumulativeMap,
    p: Rational,
}

impl GeneralParams {
    /// The structure must be monotone with the empty set forbidden and the
    /// full set qualified (otherwise sharing is vacuous); `1/2 < p < 1` as
    /// in the XOR scheme.
    pub fn new(structure: AccessStructure, p: Rational) -> Result<Self> {
        check_bias(&p)?;
        if !structure.is_monotone() {
            return Err(Error::InvalidParams(
                "access structure is not monotone".into(),
            ));
        }
        if structure.is_qualified(0) {
            return Err(Error::InvalidParams(
                "the empty set must be forbidden".into(),
            ));
        }
        let full = (1u32 << structure.party_count()) - 1;
        if !structure.is_qualified(full) {
            return Err(Error::InvalidParams(
                "the full party set must be qualified".into(),
            ));
        }
        let cumulative = structure.cumulative_map()?;
        Ok(GeneralParams {
            structure,
            cumulative,
            p,
        })
    }

    pub fn structure(&self) -> &AccessStructure {
        &self.structure
    }

    /// The block-index assignment derived from the maximal forbidden sets.
    pub fn cumulative(&self) -> &CumulativeMap {
        &self.cumulative
    }

    /// Number of internal XOR shares (= number of maximal forbidden sets).
    pub fn block_count(&self) -> usize {
        self.cumulative.block_count()
    }

    pub fn bias(&self) -> &Rational {
        &self.p
    }
}

/// Share a secret bit: draw the `m` block shares from the XOR instance and
/// hand each party its assigned sub-tuple.
pub fn general_share<R: Rng + ?Sized>(
    s: u8,
    params: &GeneralParams,
    rng: &mut R,
) -> Result<ShareBundle> {
    if s > 1 {
        return Err(Error::InvalidParams(format!("secret {s} is not a bit")));
    }
    let w = xor_share_bits(s, params.block_count(), &params.p, rng);
    Ok(bundle_of_blocks(params, &w))
}

/// The deterministic sub-tuple layout for a fixed block-share vector `w`
/// (length `m`): party `i` receives `(j, w_j)` for `j ∈ φ(i)`, ascending.
pub(crate) fn bundle_of_blocks(params: &GeneralParams, w: &[u8]) -> ShareBundle {
    debug_assert_eq!(w.len(), params.block_count());
    let shares = (1..=params.structure.party_count())
        .map(|party| {
            let subs = params
                .cumulative
                .phi(party)
                .into_iter()
                .map(|j| (j, w[j - 1]))
                .collect();
            (party, ShareValue::SubShares(subs))
        })
        .collect();
    ShareBundle::new(SchemeParams::General(params.clone()), shares)
}

/// Recover the secret from a qualified sub-bundle: a qualified party set
/// holds every block index, and the secret is the XOR of all `m` block
/// shares.
pub fn general_combine(bundle: &ShareBundle, params: &GeneralParams) -> Result<u8> {
    match bundle.params() {
        SchemeParams::General(echo) if echo == params => {}
        SchemeParams::General(_) => {
            return Err(Error::InvalidParams(
                "bundle parameter echo disagrees with the supplied parameters".into(),
            ));
        }
        other => {
            return Err(Error::InvalidParams(format!(
                "expected a general bundle, found scheme `{}`",
                other.scheme_name()
            )));
        }
    }
    let n = params.structure.party_count();
    let mut mask = 0u32;
    let mut blocks: BTreeMap<usize, u8> = BTreeMap::new();
    for (party, value) in bundle.shares() {
        if *party == 0 || *party > n {
            return Err(Error::MalformedInput(format!(
                "party {party} outside 1..={n}"
            )));
        }
        mask |= 1 << (party - 1);
        let subs = match value {
            ShareValue::SubShares(subs) => subs,
            ShareValue::Element(_) => {
                return Err(Error::MalformedInput(format!(
                    "share of party {party} is a single value, not a sub-share tuple"
                )));
            }
        };
        for &(j, bit) in subs {
            if j == 0 || j > params.block_count() || bit > 1 {
                return Err(Error::MalformedInput(format!(
                    "party {party} carries an invalid sub-share ({j}, {bit})"
                )));
            }
            match blocks.get(&j) {
                Some(&other) if other != bit => {
                    return Err(Error::MalformedInput(format!(
                        "conflicting values for block index {j}"
                    )));
                }
                _ => {
                    blocks.insert(j, bit);
                }
            }
        }
    }
    if !params.structure.is_qualified(mask) {
        return Err(Error::NotQualified(format!(
            "party set {:?} is forbidden",
            crate::access::parties_of(mask)
        )));
    }
    if blocks.len() != params.block_count() {
        return Err(Error::MalformedInput(format!(
            "bundle covers {} of {} block indices",
            blocks.len(),
            params.block_count()
        )));
    }
    Ok(blocks.values().fold(0, |acc, &b| acc ^ b))
}

/// Exact joint law of `(S, V₁, …, Vₙ)`: the XOR law of `(S, W₁, …, W_m)`
/// pushed forward through the deterministic sub-tuple layout. Each share
/// symbol is the party's block bits concatenated in ascending index order
/// (the empty string if the party holds no block).
pub fn general_joint_distribution(params: &GeneralParams) -> Result<JointDist> {
    let m = params.block_count();
    if m > MAX_BLOCKS {
        return Err(Error::InvalidParams(format!(
            "block count {m} exceeds the enumeration bound {MAX_BLOCKS}"
        )));
    }
    let n = params.structure.party_count();
    let q = Rational::from_integer(1.into()) - &params.p;
    let mut variables = vec!["S".to_string()];
    for i in 1..=n {
        variables.push(format!("V{i}"));
    }
    let mut entries = Vec::with_capacity(1 << m);
    for pattern in 0u32..1 << m {
        // Free coordinates: the secret and the first m−1 block shares.
        let mut w = Vec::with_capacity(m);
        let s = (pattern & 1) as u8;
        let mut zeros = usize::from(s == 0);
        let mut acc = s;
        for pos in 1..m {
            let bit = (pattern >> pos & 1) as u8;
            if bit == 0 {
                zeros += 1;
            }
            acc ^= bit;
            w.push(bit);
        }
        w.push(acc); // the closing block share
        let mut tuple = Vec::with_capacity(n + 1);
        tuple.push(s.to_string());
        for party in 1..=n {
            let bits: String = params
                .cumulative
                .phi(party)
                .into_iter()
                .map(|j| char::from(b'0' + w[j - 1]))
                .collect();
            tuple.push(bits);
        }
        let mass = pow(&params.p, zeros) * pow(&q, m - zeros);
        entries.push((tuple, mass));
    }
    // The full party set is qualified, so it covers every block index and
    // the pushforward is injective; duplicate tuples would be a bug.
    JointDist::new(variables, entries)
}

fn pow(base: &Rational, exp: usize) -> Rational {
    let mut acc = Rational::from_integer(1.into());
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    use crate::entropy::avg_cond_min_entropy;
    use crate::rational::ratio;
    use crate::schemes::{pi1_joint_distribution, Pi1Params};

    fn threshold_params(k: usize, n: usize, num: i64, den: i64) -> GeneralParams {
        let structure = AccessStructure::threshold(k, n).unwrap();
        GeneralParams::new(structure, ratio(num, den)).unwrap()
    }

    #[test]
    fn params_reject_degenerate_structures() {
        // Empty set qualified.
        let all = AccessStructure::from_families(2, &[0b00, 0b01, 0b10, 0b11], &[]).unwrap();
        assert!(GeneralParams::new(all, ratio(3, 4)).is_err());
        // Full set forbidden.
        let none = AccessStructure::from_families(2, &[], &[0b00, 0b01, 0b10, 0b11]).unwrap();
        assert!(GeneralParams::new(none, ratio(3, 4)).is_err());
        // Non-monotone.
        let broken = AccessStructure::from_families(2, &[0b01, 0b11], &[0b00, 0b10]).unwrap();
        assert!(GeneralParams::new(broken, ratio(3, 4)).is_ok());
        let broken = AccessStructure::from_families(2, &[0b01], &[0b00, 0b10, 0b11]).unwrap();
        assert!(GeneralParams::new(broken, ratio(3, 4)).is_err());
        // Bias domain.
        let ok = AccessStructure::threshold(2, 2).unwrap();
        assert!(GeneralParams::new(ok, ratio(1, 2)).is_err());
    }

    #[test]
    fn two_of_three_layout_matches_the_cumulative_map() {
        let params = threshold_params(2, 3, 3, 4);
        assert_eq!(params.block_count(), 3);
        let bundle = bundle_of_blocks(&params, &[0, 1, 1]);
        assert_eq!(
            bundle.share_of(1).unwrap(),
            &ShareValue::SubShares(vec![(2, 1), (3, 1)])
        );
        assert_eq!(
            bundle.share_of(2).unwrap(),
            &ShareValue::SubShares(vec![(1, 0), (3, 1)])
        );
        assert_eq!(
            bundle.share_of(3).unwrap(),
            &ShareValue::SubShares(vec![(1, 0), (2, 1)])
        );
    }

    #[test]
    fn qualified_pairs_recover_and_forbidden_singletons_fail() {
        let params = threshold_params(2, 3, 3, 4);
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        for s in [0u8, 1] {
            let bundle = general_share(s, &params, &mut rng).unwrap();
            for pair in [[1usize, 2], [1, 3], [2, 3]] {
                let sub = bundle.restrict(&pair).unwrap();
                assert_eq!(general_combine(&sub, &params).unwrap(), s);
            }
            let single = bundle.restrict(&[1]).unwrap();
            assert!(matches!(
                general_combine(&single, &params),
                Err(Error::NotQualified(_))
            ));
            assert_eq!(general_combine(&bundle, &params).unwrap(), s);
        }
    }

    #[test]
    fn chain_structure_reconstructs_on_exactly_the_qualified_sets() {
        let structure =
            AccessStructure::from_minimal_qualified(4, &[vec![1, 2], vec![2, 3], vec![3, 4]])
                .unwrap();
        let params = GeneralParams::new(structure, ratio(2, 3)).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(6);
        for s in [0u8, 1] {
            let bundle = general_share(s, &params, &mut rng).unwrap();
            for mask in 1u32..16 {
                let parties = crate::access::parties_of(mask);
                let sub = bundle.restrict(&parties).unwrap();
                let got = general_combine(&sub, &params);
                if params.structure().is_qualified(mask) {
                    assert_eq!(got.unwrap(), s);
                } else {
                    assert!(matches!(got, Err(Error::NotQualified(_))));
                }
            }
        }
    }

    #[test]
    fn n_of_n_joint_is_the_xor_joint_up_to_block_relabeling() {
        for n in 2..=4usize {
            let params = threshold_params(n, n, 3, 4);
            let joint = general_joint_distribution(&params).unwrap();
            let base = pi1_joint_distribution(&Pi1Params::new(n, ratio(3, 4)).unwrap());
            // Each party holds exactly one block; map party → its block.
            let sigma: Vec<usize> = (1..=n).map(|i| params.cumulative().phi(i)[0]).collect();
            assert_eq!(joint.entries().count(), base.entries().count());
            for (tuple, mass) in joint.entries() {
                let mut w = vec![String::new(); n];
                for (party, sym) in tuple[1..].iter().enumerate() {
                    w[sigma[party] - 1] = sym.clone();
                }
                let mut base_tuple = vec![tuple[0].clone()];
                base_tuple.extend(w);
                assert_eq!(base.mass(&base_tuple), Some(mass));
            }
        }
    }

    #[test]
    fn secret_marginal_keeps_the_bias() {
        let params = threshold_params(2, 3, 3, 5);
        let joint = general_joint_distribution(&params).unwrap();
        let s = joint.prob_dist("S").unwrap();
        assert_eq!(s.mass("0"), Some(&ratio(3, 5)));
        assert_eq!(s.mass("1"), Some(&ratio(2, 5)));
    }

    #[test]
    fn single_observed_party_leaves_the_secret_pinned_at_its_prior() {
        let params = threshold_params(2, 3, 3, 4);
        let joint = general_joint_distribution(&params).unwrap();
        let r = avg_cond_min_entropy(&joint, "S", &["V1"]).unwrap();
        assert_eq!(r.inner_sum, ratio(3, 4));
        assert!((r.bits() - (4.0f64 / 3.0).log2()).abs() < 1e-12);
    }

    #[test]
    fn empty_block_assignment_is_allowed() {
        // Party 2 sits in every maximal forbidden set, so it holds nothing.
        let structure = AccessStructure::from_minimal_qualified(2, &[vec![1]]).unwrap();
        let params = GeneralParams::new(structure, ratio(3, 4)).unwrap();
        assert_eq!(params.block_count(), 1);
        let mut rng = ChaCha12Rng::seed_from_u64(9);
        let bundle = general_share(1, &params, &mut rng).unwrap();
        assert_eq!(bundle.share_of(2).unwrap(), &ShareValue::SubShares(vec![]));
        let sub = bundle.restrict(&[1]).unwrap();
        assert_eq!(general_combine(&sub, &params).unwrap(), 1);
        let sub = bundle.restrict(&[2]).unwrap();
        assert!(general_combine(&sub, &params).is_err());

        let joint = general_joint_distribution(&params).unwrap();
        assert_eq!(joint.entries().count(), 2);
    }

    #[test]
    fn tampered_bundles_are_rejected() {
        let params = threshold_params(2, 3, 3, 4);
        let mut rng = ChaCha12Rng::seed_from_u64(10);
        let bundle = general_share(0, &params, &mut rng).unwrap();
        // Conflicting block value across parties.
        let mut shares: Vec<_> = bundle.shares().to_vec();
        if let ShareValue::SubShares(subs) = &mut shares[0].1 {
            subs[0].1 ^= 1;
        }
        let tampered = ShareBundle::new(SchemeParams::General(params.clone()), shares);
        assert!(matches!(
            general_combine(&tampered, &params),
            Err(Error::MalformedInput(_))
        ));
    }
}
