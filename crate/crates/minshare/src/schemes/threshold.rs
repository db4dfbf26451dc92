//! The `(k,n)` threshold construction over a prime field 𝔽_t: share vectors
//! are rows of the degree-`(k−1)` polynomial evaluation table, and the joint
//! law puts mass `p` on the all-zero row and spreads the rest uniformly.
//! With `p` above the uniform mass the scheme is non-perfect yet its
//! min-entropy security is exact, which is what the verification layer
//! confirms.
//!
//! Party `i` evaluates at the wrapped point `((i−1) mod (t−1)) + 1`, so any
//! party count is accepted; when `n ≥ t` some parties share evaluation
//! points, reconstruction needs `k` shares at *distinct* points, and table
//! rows may repeat (the joint law then accumulates mass on the merged rows).
//! In the injective regime `n ≤ t−1` this reduces to the familiar setting
//! where any `k` parties reconstruct.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;
use rand::Rng;

use crate::access::MAX_PARTIES;
use crate::dist::JointDist;
use crate::error::{Error, Result};
use crate::field::{eval_poly, lagrange_at_zero, party_point, PrimeField};
use crate::rational::Rational;

use super::{bernoulli, SchemeParams, ShareBundle, ShareValue};

/// Enumeration ceiling for the `t^k`-row table.
pub const MAX_TABLE_ROWS: u64 = 1_000_000;

/// Parameters of the threshold scheme: field, threshold, party count, and
/// the mass of the all-zero row.
#[derive(Clone, Debug, PartialEq)]
pub struct Pi2Params {
    field: PrimeField,
    k: usize,
    n: usize,
    p: Rational,
}

impl Pi2Params {
    /// `1 ≤ k ≤ n`; `t^k` bounded for enumeration; `1/t^k ≤ p < 1` so the
    /// all-zero row carries at least the uniform mass but the secret stays
    /// non-deterministic.
    pub fn new(field: PrimeField, k: usize, n: usize, p: Rational) -> Result<Self> {
        let rows = check_shape(field, k, n)?;
        let rows_big = BigInt::from(rows);
        if &p * &rows_big < Rational::one() || p >= Rational::one() {
            return Err(Error::InvalidParams(format!(
                "all-zero row mass p = {p} outside [1/{rows}, 1)"
            )));
        }
        Ok(Pi2Params { field, k, n, p })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn threshold(&self) -> usize {
        self.k
    }

    pub fn party_count(&self) -> usize {
        self.n
    }

    /// The mass placed on the all-zero `(s, r)` input.
    pub fn zero_mass(&self) -> &Rational {
        &self.p
    }

    /// `t^k`, the number of `(s, r₁, …, r_{k−1})` inputs.
    pub fn table_size(&self) -> u64 {
        self.field.modulus().pow(self.k as u32)
    }

    /// The mass of each input other than the all-zero one:
    /// `(1−p)/(t^k−1)`.
    pub fn other_mass(&self) -> Rational {
        let rest = BigInt::from(self.table_size() - 1);
        (Rational::one() - &self.p) / Rational::from_integer(rest)
    }
}

/// All `(secret, share-vector)` rows a polynomial can produce, in the
/// lexicographic order of the generating `(s, r₁, …, r_{k−1})` inputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistributionTable {
    t: u64,
    k: usize,
    n: usize,
    rows: Vec<Vec<u64>>,
}

impl DistributionTable {
    /// Rows as `[s, v₁, …, vₙ]`, one per `(s, r)` input; `t^k` in total.
    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    /// Whether all rows are pairwise distinct. Holds exactly when the
    /// parties cover at least `k−1` distinct evaluation points; with heavy
    /// point-sharing (`min(n, t−1) < k−1`) different inputs can collide.
    pub fn is_injective(&self) -> bool {
        let mut sorted = self.rows.clone();
        sorted.sort_unstable();
        sorted.windows(2).all(|w| w[0] != w[1])
    }

    pub fn contains(&self, row: &[u64]) -> bool {
        self.rows.iter().any(|r| r == row)
    }

    /// CSV rendering: header `s,v1,…,vn`, one row per line, trailing
    /// newline.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("s");
        for i in 1..=self.n {
            out.push_str(&format!(",v{i}"));
        }
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// Enumerate the full table for `(field, k, n)`.
pub fn pi2_distribution_table(field: PrimeField, k: usize, n: usize) -> Result<DistributionTable> {
    let rows_total = check_shape(field, k, n)?;
    let mut rows = Vec::with_capacity(rows_total as usize);
    for idx in 0..rows_total {
        let (s, r) = input_of_index(idx, field.modulus(), k);
        rows.push(row_of_input(field, n, s, &r)?);
    }
    Ok(DistributionTable {
        t: field.modulus(),
        k,
        n,
        rows,
    })
}

/// Exact joint law of `(S, V₁, …, Vₙ)`: mass `p` flows through the all-zero
/// input, `(1−p)/(t^k−1)` through each other input; rows that coincide
/// accumulate their masses.
pub fn pi2_joint_distribution(params: &Pi2Params) -> Result<JointDist> {
    let table = pi2_distribution_table(params.field, params.k, params.n)?;
    let other = params.other_mass();
    let mut masses: BTreeMap<Vec<String>, Rational> = BTreeMap::new();
    for (idx, row) in table.rows().iter().enumerate() {
        let mass = if idx == 0 {
            params.p.clone()
        } else {
            other.clone()
        };
        let tuple: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        *masses.entry(tuple).or_default() += mass;
    }
    let mut variables = vec!["S".to_string()];
    for i in 1..=params.n {
        variables.push(format!("V{i}"));
    }
    JointDist::new(variables, masses)
}

/// Draw one `(secret, bundle)` pair from the joint law: the all-zero input
/// with probability `p`, otherwise a uniformly random non-zero input.
pub fn pi2_sample<R: Rng + ?Sized>(params: &Pi2Params, rng: &mut R) -> Result<(u64, ShareBundle)> {
    let idx = if bernoulli(&params.p, rng) {
        0
    } else {
        1 + rng.gen_range(0..params.table_size() - 1)
    };
    let (s, r) = input_of_index(idx, params.field.modulus(), params.k);
    Ok((s, bundle_of_input(params, s, &r)?))
}

/// Share a *given* secret by drawing the randomness from its conditional
/// law under the joint: for `s = 0` the all-zero randomness is picked with
/// probability `p / P_S(0)` and the rest uniformly; for `s ≠ 0` the
/// randomness is uniform. Marginalizing over the secret's own law
/// reproduces exactly the two-mass joint.
pub fn pi2_share<R: Rng + ?Sized>(s: u64, params: &Pi2Params, rng: &mut R) -> Result<ShareBundle> {
    let t = params.field.modulus();
    if s >= t {
        return Err(Error::InvalidParams(format!(
            "secret {s} outside the field of size {t}"
        )));
    }
    let r_total = t.pow((params.k - 1) as u32);
    let r = if s == 0 {
        let nonzero = r_total - 1;
        // P(r = 0 | S = 0) = p / (p + (t^{k−1}−1)·u).
        let secret_mass =
            &params.p + params.other_mass() * Rational::from_integer(BigInt::from(nonzero));
        let zero_given_zero = &params.p / secret_mass;
        if nonzero == 0 || bernoulli(&zero_given_zero, rng) {
            vec![0; params.k - 1]
        } else {
            digits_of_index(1 + rng.gen_range(0..nonzero), t, params.k - 1)
        }
    } else if r_total == 1 {
        Vec::new()
    } else {
        digits_of_index(rng.gen_range(0..r_total), t, params.k - 1)
    };
    bundle_of_input(params, s, &r)
}

/// Recover the secret from at least `k` shares at pairwise-distinct
/// evaluation points, by interpolation at zero.
pub fn pi2_combine(bundle: &ShareBundle, params: &Pi2Params) -> Result<u64> {
    match bundle.params() {
        SchemeParams::Threshold(echo) if echo == params => {}
        SchemeParams::Threshold(_) => {
            return Err(Error::InvalidParams(
                "bundle parameter echo disagrees with the supplied parameters".into(),
            ));
        }
        other => {
            return Err(Error::InvalidParams(format!(
                "expected a pi2 bundle, found scheme `{}`",
                other.scheme_name()
            )));
        }
    }
    let t = params.field.modulus();
    // Deduplicate by evaluation point; equal points must agree on the value.
    let mut by_point: BTreeMap<u64, (usize, u64)> = BTreeMap::new();
    for (party, value) in bundle.shares() {
        let v = match value {
            ShareValue::Element(v) if *v < t => *v,
            ShareValue::Element(v) => {
                return Err(Error::MalformedInput(format!(
                    "share of party {party} is {v}, outside the field of size {t}"
                )));
            }
            ShareValue::SubShares(_) => {
                return Err(Error::MalformedInput(format!(
                    "share of party {party} is a sub-share tuple, not a field element"
                )));
            }
        };
        if *party == 0 || *party > params.n {
            return Err(Error::MalformedInput(format!(
                "party {party} outside 1..={}",
                params.n
            )));
        }
        let x = party_point(params.field, *party as u64).value();
        match by_point.get(&x) {
            Some(&(other_party, other_value)) if other_value != v => {
                return Err(Error::MalformedInput(format!(
                    "parties {other_party} and {party} disagree at evaluation point {x}"
                )));
            }
            Some(_) => {}
            None => {
                by_point.insert(x, (*party, v));
            }
        }
    }
    if by_point.len() < params.k {
        return Err(Error::NotQualified(format!(
            "recovery needs {} shares at distinct evaluation points; got {}",
            params.k,
            by_point.len()
        )));
    }
    let points: Vec<_> = by_point
        .iter()
        .take(params.k)
        .map(|(&x, &(_, v))| (params.field.element(x), params.field.element(v)))
        .collect();
    Ok(lagrange_at_zero(&points)?.value())
}

fn check_shape(field: PrimeField, k: usize, n: usize) -> Result<u64> {
    if k == 0 || k > n || n > MAX_PARTIES {
        return Err(Error::InvalidParams(format!(
            "threshold/party counts (k={k}, n={n}) outside 1 ≤ k ≤ n ≤ {MAX_PARTIES}"
        )));
    }
    let rows = (field.modulus() as u128)
        .checked_pow(k as u32)
        .ok_or_else(|| Error::InvalidParams("table size t^k overflows".into()))?;
    if rows > MAX_TABLE_ROWS as u128 {
        return Err(Error::InvalidParams(format!(
            "table size t^k = {rows} exceeds the enumeration bound {MAX_TABLE_ROWS}"
        )));
    }
    Ok(rows as u64)
}

/// The `idx`-th input in lexicographic order, as `(s, r₁, …, r_{k−1})`:
/// big-endian base-`t` digits with the secret first.
fn input_of_index(idx: u64, t: u64, k: usize) -> (u64, Vec<u64>) {
    let digits = digits_of_index(idx, t, k);
    (digits[0], digits[1..].to_vec())
}

/// `count` big-endian base-`t` digits of `idx`.
fn digits_of_index(idx: u64, t: u64, count: usize) -> Vec<u64> {
    let mut digits = vec![0u64; count];
    let mut rest = idx;
    for slot in digits.iter_mut().rev() {
        *slot = rest % t;
        rest /= t;
    }
    debug_assert_eq!(rest, 0, "index outside t^count");
    digits
}

/// `[s, v₁, …, vₙ]` for one `(s, r)` input.
fn row_of_input(field: PrimeField, n: usize, s: u64, r: &[u64]) -> Result<Vec<u64>> {
    let s_elem = field.element(s);
    let r_elems: Vec<_> = r.iter().map(|&x| field.element(x)).collect();
    let mut row = Vec::with_capacity(n + 1);
    row.push(s);
    for i in 1..=n {
        row.push(eval_poly(s_elem, &r_elems, party_point(field, i as u64))?.value());
    }
    Ok(row)
}

fn bundle_of_input(params: &Pi2Params, s: u64, r: &[u64]) -> Result<ShareBundle> {
    let row = row_of_input(params.field, params.n, s, r)?;
    let shares = row[1..]
        .iter()
        .enumerate()
        .map(|(idx, &v)| (idx + 1, ShareValue::Element(v)))
        .collect();
    Ok(ShareBundle::new(
        SchemeParams::Threshold(params.clone()),
        shares,
    ))
}
