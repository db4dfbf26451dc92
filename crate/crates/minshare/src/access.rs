//! Monotone access structures over party sets, their maximal forbidden sets,
//! and the cumulative assignment of building-block share indices.
//!
//! Structures are stored explicitly as a qualified/forbidden partition of all
//! `2^n` subsets (bitmask-indexed), because everything downstream verifies
//! claims exhaustively; `n` is capped at 20 to keep that enumeration honest.
//! Parties are numbered `1..=n`, and subsets are bitmasks with bit `i−1`
//! standing for party `i`. Family enumerations are ordered by ascending
//! bitmask so every derived artifact (maximal forbidden sets, cumulative
//! maps, share layouts) is reproducible.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper bound on the party count; all queries enumerate `2^n` subsets.
pub const MAX_PARTIES: usize = 20;

/// A partition of all subsets of `[n]` into qualified and forbidden families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AccessStructure {
    n: usize,
    /// `qualified[mask]` — whether the subset with this bitmask is qualified.
    qualified: Vec<bool>,
}

impl AccessStructure {
    /// Build from explicit qualified/forbidden families; the two must
    /// partition the power set exactly. The result is not necessarily
    /// monotone — use [`AccessStructure::is_monotone`] to check.
    pub fn from_families(n: usize, qualified: &[u32], forbidden: &[u32]) -> Result<Self> {
        check_party_count(n)?;
        let size = 1usize << n;
        let mut seen = vec![0u8; size];
        let mut table = vec![false; size];
        for &mask in qualified {
            let idx = check_mask(mask, n)?;
            seen[idx] += 1;
            table[idx] = true;
        }
        for &mask in forbidden {
            let idx = check_mask(mask, n)?;
            seen[idx] += 1;
        }
        if seen.iter().any(|&c| c != 1) {
            return Err(Error::InvalidParams(
                "qualified and forbidden families must partition all subsets".into(),
            ));
        }
        Ok(AccessStructure {
            n,
            qualified: table,
        })
    }

    /// The `(k,n)`-threshold structure: sets of size `≥ k` are qualified.
    pub fn threshold(k: usize, n: usize) -> Result<Self> {
        check_party_count(n)?;
        if k == 0 || k > n {
            return Err(Error::InvalidParams(format!(
                "threshold {k} outside 1..={n}"
            )));
        }
        let qualified = (0u32..1 << n)
            .map(|mask| mask.count_ones() as usize >= k)
            .collect();
        Ok(AccessStructure { n, qualified })
    }

    /// Upward closure of a nonempty antichain of minimal qualified sets;
    /// everything else is forbidden. The result is monotone by construction.
    pub fn from_minimal_qualified(n: usize, min_qualified: &[Vec<usize>]) -> Result<Self> {
        check_party_count(n)?;
        if min_qualified.is_empty() {
            return Err(Error::InvalidParams(
                "empty minimal qualified family".into(),
            ));
        }
        let mut minimal = Vec::with_capacity(min_qualified.len());
        for parties in min_qualified {
            let mut mask = 0u32;
            for &i in parties {
                if i == 0 || i > n {
                    return Err(Error::InvalidParams(format!("party {i} outside 1..={n}")));
                }
                mask |= 1 << (i - 1);
            }
            minimal.push(mask);
        }
        for (a, &ma) in minimal.iter().enumerate() {
            for (b, &mb) in minimal.iter().enumerate() {
                if a != b && ma & mb == ma {
                    return Err(Error::InvalidParams(format!(
                        "minimal qualified family is not an antichain: {:?} ⊆ {:?}",
                        parties_of(ma),
                        parties_of(mb)
                    )));
                }
            }
        }
        // Not a membership test: `mask & q == q` asks whether q ⊆ mask.
        #[allow(clippy::manual_contains)]
        let qualified = (0u32..1 << n)
            .map(|mask| minimal.iter().any(|&q| mask & q == q))
            .collect();
        Ok(AccessStructure { n, qualified })
    }

    pub fn party_count(&self) -> usize {
        self.n
    }

    pub fn is_qualified(&self, mask: u32) -> bool {
        self.qualified[mask as usize]
    }

    pub fn is_forbidden(&self, mask: u32) -> bool {
        !self.qualified[mask as usize]
    }

    /// All subset bitmasks, ascending.
    pub fn all_masks(&self) -> impl Iterator<Item = u32> {
        0..1u32 << self.n
    }

    /// Forbidden subsets in ascending bitmask order.
    pub fn forbidden_masks(&self) -> impl Iterator<Item = u32> + '_ {
        self.all_masks().filter(move |&m| self.is_forbidden(m))
    }

    /// Both closure conditions, checked exhaustively: supersets of qualified
    /// sets are qualified and subsets of forbidden sets are forbidden (the
    /// two are equivalent on a partition; single-element steps suffice).
    pub fn is_monotone(&self) -> bool {
        for mask in self.all_masks() {
            if self.is_qualified(mask) {
                for i in 0..self.n {
                    let sup = mask | 1 << i;
                    if !self.is_qualified(sup) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Maximal forbidden sets: forbidden sets that become qualified when any
    /// single missing party joins (under monotonicity, one-party extensions
    /// suffice). Ascending bitmask order.
    pub fn maximal_forbidden_sets(&self) -> Result<Vec<u32>> {
        self.require_monotone()?;
        Ok(self
            .forbidden_masks()
            .filter(|&mask| {
                (0..self.n)
                    .filter(|&i| mask >> i & 1 == 0)
                    .all(|i| self.qualified[(mask | 1 << i) as usize])
            })
            .collect())
    }

    /// Minimal qualified sets, ascending bitmask order.
    pub fn minimal_qualified_sets(&self) -> Vec<u32> {
        (0..1u32 << self.n)
            .filter(|&mask| {
                self.is_qualified(mask)
                    && (0..self.n)
                        .filter(|&i| mask >> i & 1 == 1)
                        .all(|i| !self.qualified[(mask & !(1 << i)) as usize])
            })
            .collect()
    }

    /// The cumulative assignment over this structure's maximal forbidden
    /// sets: party `i` holds index `j` exactly when `i` is missing from the
    /// `j`-th maximal forbidden set.
    pub fn cumulative_map(&self) -> Result<CumulativeMap> {
        let maximal = self.maximal_forbidden_sets()?;
        let m = maximal.len();
        let assignment = (1..=self.n)
            .map(|party| {
                let bit = 1u32 << (party - 1);
                let mut phi = 0u32;
                for (j, &f) in maximal.iter().enumerate() {
                    if f & bit == 0 {
                        phi |= 1 << j;
                    }
                }
                phi
            })
            .collect();
        Ok(CumulativeMap {
            m,
            assignment,
            maximal_forbidden: maximal,
        })
    }

    fn require_monotone(&self) -> Result<()> {
        if !self.is_monotone() {
            return Err(Error::InvalidParams(
                "access structure is not monotone".into(),
            ));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let repr: AccessJson = serde_json::from_str(text)
            .map_err(|e| Error::MalformedInput(format!("access-structure json: {e}")))?;
        Self::from_minimal_qualified(repr.n, &repr.min_qualified)
    }

    /// Canonical JSON: the minimal qualified family in ascending bitmask
    /// order. Only monotone structures round-trip through this form.
    pub fn to_json(&self) -> Result<String> {
        self.require_monotone()?;
        let repr = AccessJson {
            n: self.n,
            min_qualified: self
                .minimal_qualified_sets()
                .iter()
                .map(|&m| parties_of(m))
                .collect(),
        };
        Ok(serde_json::to_string_pretty(&repr)?)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AccessJson {
    n: usize,
    min_qualified: Vec<Vec<usize>>,
}

/// Cumulative assignment derived from the maximal forbidden sets
/// `F_1, …, F_m` (ascending bitmask): `φ(i) = { j : i ∉ F_j }`.
///
/// Qualified sets cover all `m` indices; forbidden sets miss at least one —
/// that covering property is what makes the XOR building block compile to an
/// arbitrary monotone structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CumulativeMap {
    m: usize,
    /// Per party (index 0 = party 1): bitmask over `[m]` with bit `j−1` set
    /// when the party holds building-block index `j`.
    assignment: Vec<u32>,
    maximal_forbidden: Vec<u32>,
}

impl CumulativeMap {
    pub fn block_count(&self) -> usize {
        self.m
    }

    /// `φ(i)` as a bitmask over `[m]`.
    pub fn phi_mask(&self, party: usize) -> u32 {
        self.assignment[party - 1]
    }

    /// `φ(i)` as ascending indices `j ∈ [m]`.
    pub fn phi(&self, party: usize) -> Vec<usize> {
        mask_indices(self.phi_mask(party))
    }

    /// `φ(𝒰) = ∪_{i∈𝒰} φ(i)` for a party-set bitmask.
    pub fn phi_union_mask(&self, party_mask: u32) -> u32 {
        let mut acc = 0u32;
        for (idx, &phi) in self.assignment.iter().enumerate() {
            if party_mask >> idx & 1 == 1 {
                acc |= phi;
            }
        }
        acc
    }

    /// The maximal forbidden sets this assignment was derived from.
    pub fn maximal_forbidden(&self) -> &[u32] {
        &self.maximal_forbidden
    }
}

/// All monotone access structures on `n` parties, enumerated by depth-first
/// choice over subsets in ascending (popcount, mask) order. Intended for
/// exhaustive verification at small `n` (the count grows like the Dedekind
/// numbers: 6, 20, 168, 7581 for n = 2..5).
pub fn enumerate_monotone_structures(n: usize) -> Result<Vec<AccessStructure>> {
    check_party_count(n)?;
    if n > 6 {
        return Err(Error::InvalidParams(
            "monotone enumeration is intended for n ≤ 6".into(),
        ));
    }
    let size = 1usize << n;
    let mut order: Vec<u32> = (0..size as u32).collect();
    order.sort_by_key(|&m| (m.count_ones(), m));
    let mut table = vec![false; size];
    let mut out = Vec::new();
    fn recurse(
        pos: usize,
        order: &[u32],
        table: &mut Vec<bool>,
        n: usize,
        out: &mut Vec<AccessStructure>,
    ) {
        if pos == order.len() {
            out.push(AccessStructure {
                n,
                qualified: table.clone(),
            });
            return;
        }
        let mask = order[pos];
        // Forced qualified when any one-smaller subset already is.
        let forced = (0..n)
            .filter(|&i| mask >> i & 1 == 1)
            .any(|i| table[(mask & !(1 << i)) as usize]);
        if forced {
            table[mask as usize] = true;
            recurse(pos + 1, order, table, n, out);
        } else {
            table[mask as usize] = false;
            recurse(pos + 1, order, table, n, out);
            table[mask as usize] = true;
            recurse(pos + 1, order, table, n, out);
        }
        table[mask as usize] = false;
    }
    recurse(0, &order, &mut table, n, &mut out);
    Ok(out)
}

/// Parties (1-based, ascending) contained in a subset bitmask.
pub fn parties_of(mask: u32) -> Vec<usize> {
    (0..32)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| i + 1)
        .collect()
}

/// Bitmask for a list of 1-based party indices.
pub fn mask_of(parties: &[usize]) -> u32 {
    parties.iter().fold(0, |acc, &i| acc | 1 << (i - 1))
}

fn mask_indices(mask: u32) -> Vec<usize> {
    (0..32)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| i + 1)
        .collect()
}

fn check_party_count(n: usize) -> Result<usize> {
    if n == 0 || n > MAX_PARTIES {
        return Err(Error::InvalidParams(format!(
            "party count {n} outside 1..={MAX_PARTIES}"
        )));
    }
    Ok(n)
}

fn check_mask(mask: u32, n: usize) -> Result<usize> {
    if mask >= 1 << n {
        return Err(Error::InvalidParams(format!(
            "subset mask {mask} outside 2^[{n}]"
        )));
    }
    Ok(mask as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn threshold_families() {
        let g = AccessStructure::threshold(1, 1).unwrap();
        assert!(g.is_qualified(0b1));
        assert!(g.is_forbidden(0b0));

        let g = AccessStructure::threshold(2, 3).unwrap();
        for mask in g.all_masks() {
            assert_eq!(g.is_forbidden(mask), mask.count_ones() <= 1);
        }

        let g = AccessStructure::threshold(3, 3).unwrap();
        let qualified: Vec<u32> = g.all_masks().filter(|&m| g.is_qualified(m)).collect();
        assert_eq!(qualified, vec![0b111]);
    }

    #[test]
    fn minimal_qualified_closure() {
        let g = AccessStructure::from_minimal_qualified(2, &[vec![1, 2]]).unwrap();
        assert_eq!(g, AccessStructure::threshold(2, 2).unwrap());

        let g = AccessStructure::from_minimal_qualified(3, &[vec![1], vec![2], vec![3]]).unwrap();
        assert_eq!(g, AccessStructure::threshold(1, 3).unwrap());

        // Chain structure: {1,2},{2,3},{3,4} minimal.
        let g = AccessStructure::from_minimal_qualified(4, &[vec![1, 2], vec![2, 3], vec![3, 4]])
            .unwrap();
        assert!(g.is_qualified(mask_of(&[1, 3, 4]))); // ⊇ {3,4}
        let maximal = g.maximal_forbidden_sets().unwrap();
        assert_eq!(
            maximal,
            vec![mask_of(&[1, 3]), mask_of(&[1, 4]), mask_of(&[2, 4])]
        );
    }

    #[test]
    fn antichain_violations_rejected() {
        assert!(AccessStructure::from_minimal_qualified(3, &[vec![1], vec![1, 2]]).is_err());
        assert!(AccessStructure::from_minimal_qualified(3, &[]).is_err());
    }

    #[test]
    fn monotonicity_detects_violations() {
        assert!(AccessStructure::threshold(2, 3).unwrap().is_monotone());
        // {1} qualified but {1,2} forbidden.
        let qualified = [0b01u32];
        let forbidden = [0b00u32, 0b10, 0b11];
        let g = AccessStructure::from_families(2, &qualified, &forbidden).unwrap();
        assert!(!g.is_monotone());
        assert!(g.maximal_forbidden_sets().is_err());
    }

    #[test]
    fn partition_is_enforced() {
        assert!(AccessStructure::from_families(2, &[0b01], &[0b00, 0b10]).is_err());
        assert!(AccessStructure::from_families(2, &[0b01, 0b01], &[0b00, 0b10, 0b11]).is_err());
    }

    #[test]
    fn maximal_forbidden_of_thresholds() {
        let g = AccessStructure::threshold(2, 3).unwrap();
        assert_eq!(
            g.maximal_forbidden_sets().unwrap(),
            vec![0b001, 0b010, 0b100]
        );
        // (n,n): all (n−1)-subsets.
        let g = AccessStructure::threshold(4, 4).unwrap();
        let maximal = g.maximal_forbidden_sets().unwrap();
        assert_eq!(maximal.len(), 4);
        assert!(maximal.iter().all(|m| m.count_ones() == 3));
    }

    #[test]
    fn maximal_forbidden_is_an_antichain_covering_all_forbidden() {
        for g in [
            AccessStructure::threshold(2, 4).unwrap(),
            AccessStructure::from_minimal_qualified(4, &[vec![1, 2], vec![2, 3], vec![3, 4]])
                .unwrap(),
        ] {
            let maximal = g.maximal_forbidden_sets().unwrap();
            for (a, &ma) in maximal.iter().enumerate() {
                for (b, &mb) in maximal.iter().enumerate() {
                    assert!(a == b || ma & mb != ma, "antichain violated");
                }
            }
            for f in g.forbidden_masks() {
                assert!(
                    maximal.iter().any(|&m| f & m == f),
                    "forbidden set not covered"
                );
            }
        }
    }

    #[test]
    fn cumulative_map_of_23_threshold() {
        let g = AccessStructure::threshold(2, 3).unwrap();
        let cm = g.cumulative_map().unwrap();
        assert_eq!(cm.block_count(), 3);
        assert_eq!(cm.phi(1), vec![2, 3]);
        assert_eq!(cm.phi(2), vec![1, 3]);
        assert_eq!(cm.phi(3), vec![1, 2]);
        // Union over any qualified pair covers all three indices.
        assert_eq!(cm.phi_union_mask(mask_of(&[1, 2])), 0b111);
        assert_eq!(cm.phi_union_mask(mask_of(&[2, 3])), 0b111);
    }

    #[test]
    fn cumulative_map_of_nn_threshold_is_a_bijection() {
        let g = AccessStructure::threshold(4, 4).unwrap();
        let cm = g.cumulative_map().unwrap();
        assert_eq!(cm.block_count(), 4);
        let mut seen = 0u32;
        for party in 1..=4 {
            let phi = cm.phi_mask(party);
            assert_eq!(phi.count_ones(), 1);
            seen |= phi;
        }
        assert_eq!(seen, 0b1111);
    }

    #[test]
    fn covering_bounds_hold_for_sample_structures() {
        for g in [
            AccessStructure::threshold(2, 3).unwrap(),
            AccessStructure::threshold(3, 4).unwrap(),
            AccessStructure::from_minimal_qualified(4, &[vec![1, 2], vec![2, 3], vec![3, 4]])
                .unwrap(),
        ] {
            let cm = g.cumulative_map().unwrap();
            let m = cm.block_count() as u32;
            for mask in g.all_masks() {
                let covered = cm.phi_union_mask(mask).count_ones();
                if g.is_qualified(mask) {
                    assert_eq!(covered, m, "qualified set must cover all indices");
                } else {
                    assert!(covered < m, "forbidden set must miss an index");
                }
            }
        }
    }

    #[test]
    fn monotone_enumeration_matches_dedekind_counts() {
        assert_eq!(enumerate_monotone_structures(2).unwrap().len(), 6);
        assert_eq!(enumerate_monotone_structures(3).unwrap().len(), 20);
        assert_eq!(enumerate_monotone_structures(4).unwrap().len(), 168);
    }

    #[test]
    fn json_round_trip() {
        let g = AccessStructure::from_minimal_qualified(4, &[vec![1, 2], vec![2, 3], vec![3, 4]])
            .unwrap();
        let text = g.to_json().unwrap();
        let back = AccessStructure::from_json(&text).unwrap();
        assert_eq!(back, g);
    }
}
