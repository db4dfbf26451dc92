//! Entropy measures over exact distributions.
//!
//! All measures are parameterized by an [`Order`] and return bits (base-2
//! logs). The family is:
//!
//! * order `0` — log of the support size;
//! * finite positive order `α ≠ 1` — `(1/(1−α))·log₂ Σ P(x)^α`;
//! * order `1` — Shannon entropy, computed directly (with `0·log 0 := 0`);
//! * order `∞` — min-entropy, `−log₂ max P(x)`.
//!
//! Conditional measures use the Arimoto form
//! `(α/(1−α))·log₂ Σ_y P(y)·(Σ_x P(x|y)^α)^{1/α}`, whose `α → ∞` limit is the
//! average conditional min-entropy `−log₂ Σ_y max_x P(x,y)`; the worst-case
//! variant `−log₂ max_{x,y} P(x|y)` is provided alongside. Conditional order
//! `0` is rejected: the limit is degenerate and nothing downstream needs it.
//!
//! Power sums for integer orders are evaluated in exact rational arithmetic,
//! and the order-`∞` measures expose their pre-log rationals so callers can
//! compare entropies with no tolerance at all. Fractional orders fall back to
//! floating point with max-normalized power sums, which keeps the α → 1 and
//! α → ∞ limit checks accurate to well below the documented 1e−3 bits.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::dist::{JointDist, ProbDist};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Entropy order: `Zero`, finite positive `α ≠ 1`, the Shannon point `One`,
/// or `Infinity`.
#[derive(Clone, Debug, PartialEq)]
pub enum Order {
    Zero,
    Finite(Rational),
    One,
    Infinity,
}

impl Order {
    /// Finite order constructor; requires `α > 0` and `α ≠ 1`.
    pub fn finite(alpha: Rational) -> Result<Self> {
        if !alpha.is_positive() {
            return Err(Error::InvalidParams(format!(
                "order {alpha} is not positive"
            )));
        }
        if alpha.is_one() {
            return Err(Error::InvalidParams(
                "order 1 is the Shannon point; use Order::One".into(),
            ));
        }
        Ok(Order::Finite(alpha))
    }

    /// Parse `0`, `1`, `inf`, or an exact rational `a/b`. The rationals `0`
    /// and `1` normalize to the dedicated limit orders.
    pub fn parse(text: &str) -> Result<Self> {
        match text.trim() {
            "inf" | "infinity" => Ok(Order::Infinity),
            other => {
                let alpha = rational::parse_ratio(other)?;
                if alpha.is_zero() {
                    Ok(Order::Zero)
                } else if alpha.is_one() {
                    Ok(Order::One)
                } else {
                    Order::finite(alpha)
                }
            }
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Zero => write!(f, "0"),
            Order::One => write!(f, "1"),
            Order::Infinity => write!(f, "inf"),
            Order::Finite(a) => write!(f, "{a}"),
        }
    }
}

/// Rényi entropy of `d` at order `a`, in bits.
pub fn renyi_entropy(d: &ProbDist, a: &Order) -> f64 {
    match a {
        Order::Zero => (d.support_size() as f64).log2(),
        Order::One => shannon(d.support().map(|(_, m)| m)),
        Order::Infinity => rational::neg_log2(d.max_mass()),
        Order::Finite(alpha) => {
            let coeff = coefficient(alpha); // 1/(1−α), exact before conversion
            coeff * log2_power_sum(d.support().map(|(_, m)| m), alpha)
        }
    }
}

/// Conditional Rényi entropy (Arimoto form) of `target` given the variables
/// in `given`, in bits. An empty `given` reduces to the unconditional
/// entropy of the `target` marginal. Order `Zero` is rejected.
pub fn cond_renyi_arimoto(j: &JointDist, target: &str, given: &[&str], a: &Order) -> Result<f64> {
    match a {
        Order::Zero => Err(Error::UnsupportedOrder(
            "conditional entropy of order 0 is not defined here".into(),
        )),
        Order::One => cond_shannon(j, target, given),
        Order::Infinity => Ok(avg_cond_min_entropy(j, target, given)?.bits()),
        Order::Finite(alpha) => {
            let groups = group_by_condition(j, target, given)?;
            let alpha_f = rational::to_f64(alpha);
            // The per-condition factor P(y)·(Σ_x P(x|y)^α)^{1/α} simplifies to
            // (Σ_x P(x,y)^α)^{1/α}: the conditioning denominators cancel, so
            // no division is ever performed.
            let mut total = 0.0;
            if let Some(exp) = integer_exponent(alpha) {
                for masses in groups.values() {
                    let mut sum = Rational::zero();
                    for m in masses {
                        if m.is_positive() {
                            sum += m.pow(exp);
                        }
                    }
                    total += (rational::log2(&sum) / alpha_f).exp2();
                }
            } else {
                for masses in groups.values() {
                    let logs: Vec<f64> = masses
                        .iter()
                        .filter(|m| m.is_positive())
                        .map(rational::log2)
                        .collect();
                    let top = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                    let scaled: f64 = logs.iter().map(|l| (alpha_f * (l - top)).exp2()).sum();
                    // log₂ Σ_x P^α = α·top + log₂(scaled); divide by α and exp.
                    total += (top + scaled.log2() / alpha_f).exp2();
                }
            }
            // (α/(1−α))·log₂ total, with the coefficient formed exactly.
            let coeff = rational::to_f64(&(alpha / (Rational::one() - alpha)));
            Ok(coeff * total.log2())
        }
    }
}

/// Average conditional min-entropy: the `α → ∞` limit of the Arimoto form.
///
/// The pre-log inner sum `Σ_y max_x P(x,y)` is exposed as an exact rational
/// so that equality claims against other entropies need no tolerance.
#[derive(Clone, Debug, PartialEq)]
pub struct AvgCondMinEntropy {
    pub inner_sum: Rational,
}

impl AvgCondMinEntropy {
    pub fn bits(&self) -> f64 {
        rational::neg_log2(&self.inner_sum)
    }
}

pub fn avg_cond_min_entropy(
    j: &JointDist,
    target: &str,
    given: &[&str],
) -> Result<AvgCondMinEntropy> {
    let groups = group_by_condition(j, target, given)?;
    let mut inner_sum = Rational::zero();
    for masses in groups.values() {
        let best = masses.iter().max().expect("nonempty group");
        inner_sum += best;
    }
    Ok(AvgCondMinEntropy { inner_sum })
}

/// Worst-case conditional min-entropy: `−log₂ max_{x,y: P(y)>0} P(x|y)`.
///
/// The maximizing conditional probability is exposed as an exact rational.
#[derive(Clone, Debug, PartialEq)]
pub struct WorstCondMinEntropy {
    pub max_conditional: Rational,
}

impl WorstCondMinEntropy {
    pub fn bits(&self) -> f64 {
        rational::neg_log2(&self.max_conditional)
    }
}

pub fn worst_cond_min_entropy(
    j: &JointDist,
    target: &str,
    given: &[&str],
) -> Result<WorstCondMinEntropy> {
    let groups = group_by_condition(j, target, given)?;
    let mut best: Option<Rational> = None;
    for masses in groups.values() {
        let total: Rational = masses.iter().sum();
        if total.is_zero() {
            continue;
        }
        let top = masses.iter().max().expect("nonempty group");
        let cond = top / &total;
        if best.as_ref().is_none_or(|b| cond > *b) {
            best = Some(cond);
        }
    }
    Ok(WorstCondMinEntropy {
        max_conditional: best.expect("a valid joint has a positive-mass condition"),
    })
}

/// Shannon entropy of a list of exact masses, in bits; zero masses are
/// skipped (`0·log 0 := 0`).
fn shannon<'a, I>(masses: I) -> f64
where
    I: Iterator<Item = &'a Rational>,
{
    let mut h = 0.0;
    for m in masses {
        if m.is_positive() {
            h -= rational::to_f64(m) * rational::log2(m);
        }
    }
    h
}

/// Conditional Shannon entropy via the chain rule `H(X|Y) = H(XY) − H(Y)`,
/// with both terms computed from exact masses.
fn cond_shannon(j: &JointDist, target: &str, given: &[&str]) -> Result<f64> {
    let groups = group_by_condition(j, target, given)?;
    let mut joint_masses = Vec::new();
    let mut cond_masses = Vec::new();
    for masses in groups.values() {
        joint_masses.extend(masses.iter().cloned());
        cond_masses.push(masses.iter().sum::<Rational>());
    }
    Ok(shannon(joint_masses.iter()) - shannon(cond_masses.iter()))
}

/// `1/(1−α)` formed in exact rational arithmetic (well-conditioned even for
/// α within 1e−4 of 1) and converted once.
fn coefficient(alpha: &Rational) -> f64 {
    rational::to_f64(&(Rational::one() / (Rational::one() - alpha)))
}

/// `log₂ Σ P^α` over positive masses: exact power sum for integer α,
/// max-normalized floating point otherwise.
fn log2_power_sum<'a, I>(masses: I, alpha: &Rational) -> f64
where
    I: Iterator<Item = &'a Rational>,
{
    if let Some(exp) = integer_exponent(alpha) {
        let mut sum = Rational::zero();
        for m in masses {
            sum += m.pow(exp);
        }
        rational::log2(&sum)
    } else {
        let alpha_f = rational::to_f64(alpha);
        let logs: Vec<f64> = masses.map(rational::log2).collect();
        let top = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let scaled: f64 = logs.iter().map(|l| (alpha_f * (l - top)).exp2()).sum();
        alpha_f * top + scaled.log2()
    }
}

fn integer_exponent(alpha: &Rational) -> Option<i32> {
    if alpha.is_integer() {
        alpha.numer().to_i32()
    } else {
        None
    }
}

/// Group the (target, condition) cells of the joint: for each value of the
/// `given` tuple, the exact masses `P(x, y)` across target values `x`.
/// Marginalizes over all remaining variables first. An empty `given` yields
/// a single group — the unconditional case.
fn group_by_condition(
    j: &JointDist,
    target: &str,
    given: &[&str],
) -> Result<BTreeMap<Vec<String>, Vec<Rational>>> {
    if given.contains(&target) {
        return Err(Error::InvalidParams(format!(
            "target `{target}` also appears in the conditioning set"
        )));
    }
    let mut keep: Vec<&str> = vec![target];
    keep.extend_from_slice(given);
    let marginal = j.marginalize(&keep)?;
    let given_idx: Vec<usize> = given
        .iter()
        .map(|g| marginal.var_index(g))
        .collect::<Result<_>>()?;
    // Each cell of the (target, given) marginal is one P(x, y) mass; grouping
    // by the condition tuple leaves the per-target masses inside each group.
    let mut groups: BTreeMap<Vec<String>, Vec<Rational>> = BTreeMap::new();
    for (tuple, mass) in marginal.entries() {
        let key: Vec<String> = given_idx.iter().map(|&i| tuple[i].clone()).collect();
        groups.entry(key).or_default().push(mass.clone());
    }
    Ok(groups)
}
