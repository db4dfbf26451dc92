//! Exact finite probability distributions.
//!
//! [`ProbDist`] is a distribution over opaque symbols; [`JointDist`] is a
//! distribution over tuples of named variables and is the carrier for every
//! (secret, shares) joint in this crate. Both keep their masses as exact
//! rationals and validate that masses are non-negative and sum to exactly
//! one, so downstream entropy comparisons never depend on floating-point
//! normalization.
//!
//! The JSON interchange format for joints is
//! `{"variables": [...], "entries": [{"tuple": [...], "num": n, "den": d}]}`
//! with entries sorted lexicographically by tuple on output.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{RatioRepr, Rational};

/// A finite probability distribution with exact rational masses.
///
/// Symbols are opaque labels; zero-mass symbols may be listed (they are kept,
/// but ignored by support queries), and the support must be nonempty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbDist {
    outcomes: Vec<(String, Rational)>,
}

impl ProbDist {
    pub fn new(outcomes: Vec<(String, Rational)>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut total = Rational::zero();
        for (symbol, mass) in &outcomes {
            if !seen.insert(symbol.clone()) {
                return Err(Error::MalformedInput(format!(
                    "duplicate symbol `{symbol}`"
                )));
            }
            if mass.is_negative() {
                return Err(Error::MalformedInput(format!(
                    "negative mass at `{symbol}`"
                )));
            }
            total += mass;
        }
        if !total.is_one() {
            return Err(Error::MalformedInput(format!(
                "masses sum to {total}, not 1"
            )));
        }
        if outcomes.iter().all(|(_, m)| m.is_zero()) {
            return Err(Error::MalformedInput("empty support".into()));
        }
        Ok(ProbDist { outcomes })
    }

    /// Uniform distribution over the given symbols.
    pub fn uniform(symbols: &[&str]) -> Result<Self> {
        let n = symbols.len();
        if n == 0 {
            return Err(Error::MalformedInput("uniform over zero symbols".into()));
        }
        let mass = Rational::new(1.into(), (n as i64).into());
        Self::new(
            symbols
                .iter()
                .map(|s| (s.to_string(), mass.clone()))
                .collect(),
        )
    }

    pub fn outcomes(&self) -> &[(String, Rational)] {
        &self.outcomes
    }

    /// Iterator over the support (positive-mass outcomes).
    pub fn support(&self) -> impl Iterator<Item = (&str, &Rational)> {
        self.outcomes
            .iter()
            .filter(|(_, m)| m.is_positive())
            .map(|(s, m)| (s.as_str(), m))
    }

    pub fn support_size(&self) -> usize {
        self.support().count()
    }

    /// Largest mass; well-defined because the support is nonempty.
    pub fn max_mass(&self) -> &Rational {
        self.outcomes
            .iter()
            .map(|(_, m)| m)
            .max()
            .expect("nonempty support")
    }

    pub fn mass(&self, symbol: &str) -> Option<&Rational> {
        self.outcomes
            .iter()
            .find(|(s, _)| s == symbol)
            .map(|(_, m)| m)
    }
}

/// An exact joint distribution over a tuple of named variables.
///
/// The table maps symbol tuples (one symbol per variable, in variable order)
/// to rational masses. Tuples absent from the table have mass zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JointDist {
    variables: Vec<String>,
    table: BTreeMap<Vec<String>, Rational>,
}

impl JointDist {
    pub fn new<I>(variables: Vec<String>, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<String>, Rational)>,
    {
        if variables.is_empty() {
            return Err(Error::MalformedInput(
                "a joint needs at least one variable".into(),
            ));
        }
        let mut names = BTreeSet::new();
        for v in &variables {
            if !names.insert(v.clone()) {
                return Err(Error::MalformedInput(format!("duplicate variable `{v}`")));
            }
        }
        let mut table = BTreeMap::new();
        let mut total = Rational::zero();
        for (tuple, mass) in entries {
            if tuple.len() != variables.len() {
                return Err(Error::MalformedInput(format!(
                    "tuple {tuple:?} has arity {}, expected {}",
                    tuple.len(),
                    variables.len()
                )));
            }
            if mass.is_negative() {
                return Err(Error::MalformedInput(format!("negative mass at {tuple:?}")));
            }
            total += &mass;
            if table.insert(tuple.clone(), mass).is_some() {
                return Err(Error::MalformedInput(format!("duplicate tuple {tuple:?}")));
            }
        }
        if !total.is_one() {
            return Err(Error::MalformedInput(format!(
                "masses sum to {total}, not 1"
            )));
        }
        Ok(JointDist { variables, table })
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    /// Entries in lexicographic tuple order.
    pub fn entries(&self) -> impl Iterator<Item = (&Vec<String>, &Rational)> {
        self.table.iter()
    }

    /// Mass of one tuple; `None` when the tuple is not listed (mass zero).
    pub fn mass(&self, tuple: &[String]) -> Option<&Rational> {
        self.table.get(tuple)
    }

    pub fn var_index(&self, name: &str) -> Result<usize> {
        self.variables
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    /// Exact marginal over `keep` (any order, treated as a set); the result
    /// preserves this joint's variable order.
    pub fn marginalize(&self, keep: &[&str]) -> Result<JointDist> {
        if keep.is_empty() {
            return Err(Error::MalformedInput(
                "marginalize needs at least one variable".into(),
            ));
        }
        let mut keep_set = BTreeSet::new();
        for name in keep {
            self.var_index(name)?;
            keep_set.insert(*name);
        }
        let indices: Vec<usize> = self
            .variables
            .iter()
            .enumerate()
            .filter(|(_, v)| keep_set.contains(v.as_str()))
            .map(|(i, _)| i)
            .collect();
        let variables: Vec<String> = indices.iter().map(|&i| self.variables[i].clone()).collect();
        let mut table: BTreeMap<Vec<String>, Rational> = BTreeMap::new();
        for (tuple, mass) in &self.table {
            let key: Vec<String> = indices.iter().map(|&i| tuple[i].clone()).collect();
            *table.entry(key).or_insert_with(Rational::zero) += mass;
        }
        Ok(JointDist { variables, table })
    }

    /// Single-variable marginal as a [`ProbDist`].
    pub fn prob_dist(&self, name: &str) -> Result<ProbDist> {
        let marginal = self.marginalize(&[name])?;
        ProbDist::new(
            marginal
                .table
                .into_iter()
                .map(|(tuple, mass)| (tuple.into_iter().next().unwrap(), mass))
                .collect(),
        )
    }

    /// The whole tuple read as a single symbol: the distribution over rows.
    ///
    /// Symbols are JSON-encoded tuples, which keeps distinct tuples distinct
    /// regardless of what characters the per-variable symbols contain.
    pub fn row_dist(&self) -> ProbDist {
        let outcomes = self
            .table
            .iter()
            .map(|(tuple, mass)| {
                (
                    serde_json::to_string(tuple).expect("strings encode"),
                    mass.clone(),
                )
            })
            .collect();
        ProbDist::new(outcomes).expect("a valid joint yields a valid row distribution")
    }

    /// Fuse a group of variables into one composite variable whose symbols
    /// are the comma-joined sub-tuples, placed at the position of the first
    /// group member. Used to evaluate entropies of composite targets such as
    /// a (target, helper) pair against a condition.
    ///
    /// Symbols containing the separator are rejected: the fused symbol must
    /// split back unambiguously.
    pub fn merge_variables(&self, group: &[&str], new_name: &str) -> Result<JointDist> {
        if group.is_empty() {
            return Err(Error::MalformedInput(
                "merge needs at least one variable".into(),
            ));
        }
        let indices: Vec<usize> = group
            .iter()
            .map(|n| self.var_index(n))
            .collect::<Result<_>>()?;
        let first = *indices.iter().min().unwrap();
        let drop: BTreeSet<usize> = indices.iter().copied().collect();
        if drop.len() != indices.len() {
            return Err(Error::MalformedInput(
                "merge group repeats a variable".into(),
            ));
        }
        let mut variables = Vec::new();
        for (i, v) in self.variables.iter().enumerate() {
            if i == first {
                variables.push(new_name.to_string());
            } else if !drop.contains(&i) {
                variables.push(v.clone());
            }
        }
        if variables.iter().filter(|v| *v == new_name).count() != 1 {
            return Err(Error::MalformedInput(format!(
                "merged name `{new_name}` collides"
            )));
        }
        let mut table: BTreeMap<Vec<String>, Rational> = BTreeMap::new();
        for (tuple, mass) in &self.table {
            let mut fused = Vec::with_capacity(indices.len());
            for &i in &indices {
                if tuple[i].contains(',') {
                    return Err(Error::MalformedInput(format!(
                        "symbol `{}` contains the merge separator",
                        tuple[i]
                    )));
                }
                fused.push(tuple[i].as_str());
            }
            let fused = fused.join(",");
            let mut key = Vec::with_capacity(variables.len());
            for (i, sym) in tuple.iter().enumerate() {
                if i == first {
                    key.push(fused.clone());
                } else if !drop.contains(&i) {
                    key.push(sym.clone());
                }
            }
            *table.entry(key).or_insert_with(Rational::zero) += mass;
        }
        Ok(JointDist { variables, table })
    }

    pub fn from_json(text: &str) -> Result<JointDist> {
        let repr: JointJson = serde_json::from_str(text)
            .map_err(|e| Error::MalformedInput(format!("distribution json: {e}")))?;
        JointDist::new(
            repr.variables,
            repr.entries.into_iter().map(|e| {
                (
                    e.tuple,
                    RatioRepr {
                        num: e.num,
                        den: e.den,
                    }
                    .to_ratio(),
                )
            }),
        )
    }

    /// Deterministic JSON rendering: entries sorted lexicographically by
    /// tuple, rationals in lowest terms.
    pub fn to_json(&self) -> Result<String> {
        let entries = self
            .table
            .iter()
            .map(|(tuple, mass)| {
                let repr = RatioRepr::try_from_ratio(mass)?;
                Ok(EntryJson {
                    tuple: tuple.clone(),
                    num: repr.num,
                    den: repr.den,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let repr = JointJson {
            variables: self.variables.clone(),
            entries,
        };
        Ok(serde_json::to_string_pretty(&repr)?)
    }
}

#[derive(Serialize, Deserialize)]
struct JointJson {
    variables: Vec<String>,
    entries: Vec<EntryJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryJson {
    tuple: Vec<String>,
    num: i64,
    den: u64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn strs(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn prob_dist_validates_total_mass() {
        assert!(ProbDist::new(vec![("a".into(), ratio(1, 2))]).is_err());
        assert!(ProbDist::new(vec![("a".into(), ratio(1, 2)), ("b".into(), ratio(1, 2)),]).is_ok());
        assert!(
            ProbDist::new(vec![("a".into(), ratio(3, 2)), ("b".into(), ratio(-1, 2)),]).is_err()
        );
    }

    #[test]
    fn uniform_and_max_mass() {
        let d = ProbDist::uniform(&["w", "x", "y", "z"]).unwrap();
        assert_eq!(d.max_mass(), &ratio(1, 4));
        assert_eq!(d.support_size(), 4);
    }

    #[test]
    fn marginalize_product_recovers_factor() {
        // Independent X ~ (3/4, 1/4) and Y ~ (1/2, 1/2).
        let j = JointDist::new(
            strs(&["X", "Y"]),
            vec![
                (strs(&["0", "0"]), ratio(3, 8)),
                (strs(&["0", "1"]), ratio(3, 8)),
                (strs(&["1", "0"]), ratio(1, 8)),
                (strs(&["1", "1"]), ratio(1, 8)),
            ],
        )
        .unwrap();
        let x = j.prob_dist("X").unwrap();
        assert_eq!(x.mass("0"), Some(&ratio(3, 4)));
        assert_eq!(x.mass("1"), Some(&ratio(1, 4)));
        // Marginalizing to all variables is the identity.
        let all = j.marginalize(&["X", "Y"]).unwrap();
        assert_eq!(all, j);
    }

    #[test]
    fn duplicate_tuples_rejected() {
        let result = JointDist::new(
            strs(&["X"]),
            vec![(strs(&["0"]), ratio(1, 2)), (strs(&["0"]), ratio(1, 2))],
        );
        assert!(result.is_err());
    }

    #[test]
    fn merge_variables_fuses_tuples() {
        let j = JointDist::new(
            strs(&["X", "Y", "Z"]),
            vec![
                (strs(&["0", "a", "0"]), ratio(1, 2)),
                (strs(&["1", "b", "1"]), ratio(1, 2)),
            ],
        )
        .unwrap();
        let merged = j.merge_variables(&["X", "Y"], "XY").unwrap();
        assert_eq!(merged.variables(), &["XY".to_string(), "Z".to_string()]);
        let d = merged.prob_dist("XY").unwrap();
        assert_eq!(d.mass("0,a"), Some(&ratio(1, 2)));
        assert_eq!(d.mass("1,b"), Some(&ratio(1, 2)));
    }

    #[test]
    fn json_round_trip_is_deterministic() {
        let j = JointDist::new(
            strs(&["X", "Y"]),
            vec![
                (strs(&["1", "0"]), ratio(1, 4)),
                (strs(&["0", "0"]), ratio(3, 4)),
            ],
        )
        .unwrap();
        let text = j.to_json().unwrap();
        let back = JointDist::from_json(&text).unwrap();
        assert_eq!(back, j);
        assert_eq!(back.to_json().unwrap(), text);
        // Lexicographic entry order: ["0","0"] before ["1","0"].
        let zero_pos = text.find("\"0\",").unwrap();
        let one_pos = text.find("\"1\",").unwrap();
        assert!(zero_pos < one_pos);
    }
}
