//! Prime-field arithmetic, share-polynomial evaluation, and Lagrange
//! interpolation for the threshold construction.
//!
//! Only prime moduli are supported: extension fields would force a choice of
//! irreducible polynomial that nothing downstream needs, and every statement
//! verified by this crate holds over prime fields. Primality is checked at
//! construction with a deterministic Miller–Rabin test that is exact for all
//! 64-bit inputs.

use crate::error::{Error, Result};

/// A prime field `F_t` identified by its modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    t: u64,
}

impl PrimeField {
    /// Construct the field, verifying that `t` is prime.
    pub fn new(t: u64) -> Result<Self> {
        if !is_prime_u64(t) {
            return Err(Error::InvalidParams(format!("{t} is not prime")));
        }
        Ok(PrimeField { t })
    }

    pub fn modulus(&self) -> u64 {
        self.t
    }

    /// The element `v mod t`.
    pub fn element(&self, v: u64) -> FieldElement {
        FieldElement {
            field: *self,
            value: v % self.t,
        }
    }

    pub fn zero(&self) -> FieldElement {
        self.element(0)
    }
}

/// An element of a prime field; values are kept reduced to `[0, t)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FieldElement {
    field: PrimeField,
    value: u64,
}

impl FieldElement {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement> {
        let t = self.same_field(other)?;
        Ok(self
            .field
            .element(((self.value as u128 + other.value as u128) % t as u128) as u64))
    }

    pub fn sub(&self, other: &FieldElement) -> Result<FieldElement> {
        let t = self.same_field(other)?;
        Ok(self
            .field
            .element(((self.value as u128 + (t - other.value) as u128) % t as u128) as u64))
    }

    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement> {
        let t = self.same_field(other)?;
        Ok(self
            .field
            .element(((self.value as u128 * other.value as u128) % t as u128) as u64))
    }

    /// Multiplicative inverse via Fermat's little theorem.
    pub fn inv(&self) -> Result<FieldElement> {
        if self.value == 0 {
            return Err(Error::ZeroInverse);
        }
        let t = self.field.t;
        Ok(self.field.element(mod_pow(self.value, t - 2, t)))
    }

    fn same_field(&self, other: &FieldElement) -> Result<u64> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        Ok(self.field.t)
    }
}

/// Evaluate the degree-`(k−1)` share polynomial `s + Σ_{ℓ=1}^{k−1} x^ℓ·r_ℓ`
/// at an arbitrary point `x`. The coefficient list `r` has length `k−1`.
pub fn eval_poly(s: FieldElement, r: &[FieldElement], x: FieldElement) -> Result<FieldElement> {
    // Horner evaluation of r_{k−1}·x^{k−1} + … + r_1·x + s.
    let mut acc = s.field().zero();
    for coeff in r.iter().rev() {
        acc = acc.mul(&x)?.add(coeff)?;
    }
    acc.mul(&x)?.add(&s)
}

/// Share value for party `i` out of `n`: the share polynomial evaluated at
/// the natural embedding of the party index.
///
/// This entry point keeps the textbook regime `1 ≤ i ≤ n < t`, where party
/// indices embed injectively as distinct nonzero field elements; the
/// threshold scheme relaxes the bound via [`party_point`].
pub fn eval_share_poly(
    s: FieldElement,
    r: &[FieldElement],
    i: u64,
    n: u64,
) -> Result<FieldElement> {
    let t = s.field().modulus();
    if n >= t {
        return Err(Error::InvalidParams(format!(
            "party count {n} does not embed into F_{t}; need n < t"
        )));
    }
    if i == 0 || i > n {
        return Err(Error::InvalidParams(format!(
            "party index {i} outside 1..={n}"
        )));
    }
    eval_poly(s, r, s.field().element(i))
}

/// Nonzero evaluation point assigned to party `i ≥ 1`: the natural embedding
/// for `i < t`, wrapping around the `t−1` nonzero elements beyond that
/// (`((i−1) mod (t−1)) + 1`).
///
/// Parties whose indices collide modulo `t−1` receive identical evaluation
/// points, so reconstruction then needs `k` shares on *distinct* points; the
/// wraparound exists so that distribution-table semantics stay well defined
/// for any party count.
pub fn party_point(field: PrimeField, i: u64) -> FieldElement {
    debug_assert!(i >= 1, "party indices start at 1");
    field.element((i - 1) % (field.modulus() - 1) + 1)
}

/// Value at zero of the unique degree-`≤ (points.len()−1)` polynomial through
/// the given points; x-coordinates must be distinct and nonzero.
pub fn lagrange_at_zero(points: &[(FieldElement, FieldElement)]) -> Result<FieldElement> {
    if points.is_empty() {
        return Err(Error::InvalidParams(
            "interpolation needs at least one point".into(),
        ));
    }
    let field = points[0].0.field();
    for (idx, (x, _)) in points.iter().enumerate() {
        if x.is_zero() {
            return Err(Error::InvalidParams(
                "evaluation point zero would reveal the constant term directly".into(),
            ));
        }
        if points[..idx].iter().any(|(other, _)| other == x) {
            return Err(Error::InvalidParams(format!(
                "duplicate evaluation point {}",
                x.value()
            )));
        }
    }
    // Σ_j y_j · Π_{l≠j} x_l / (x_l − x_j), evaluated at zero.
    let mut acc = field.zero();
    for (j, (xj, yj)) in points.iter().enumerate() {
        let mut weight = field.element(1);
        for (l, (xl, _)) in points.iter().enumerate() {
            if l == j {
                continue;
            }
            weight = weight.mul(xl)?.mul(&xl.sub(xj)?.inv()?)?;
        }
        acc = acc.add(&yj.mul(&weight)?)?;
    }
    Ok(acc)
}

/// Deterministic Miller–Rabin, exact for all `u64` values.
fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    // This witness set decides primality for every 64-bit integer.
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = mod_pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mod_pow(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut result = 1u64;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            result = ((result as u128 * base as u128) % modulus as u128) as u64;
        }
        base = ((base as u128 * base as u128) % modulus as u128) as u64;
        exp >>= 1;
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        assert!(PrimeField::new(2).is_ok());
        assert!(PrimeField::new(3).is_ok());
        assert!(PrimeField::new(5).is_ok());
        assert!(PrimeField::new(101).is_ok());
        assert!(PrimeField::new(2_147_483_647).is_ok()); // 2^31 − 1
        for bad in [0u64, 1, 4, 9, 91, 1_000_000] {
            assert!(PrimeField::new(bad).is_err(), "{bad} accepted");
        }
    }

    #[test]
    fn arithmetic_in_f5() {
        let f = PrimeField::new(5).unwrap();
        assert_eq!(f.element(3).add(&f.element(4)).unwrap().value(), 2);
        assert_eq!(f.element(2).inv().unwrap().value(), 3);
        assert_eq!(f.element(1).sub(&f.element(3)).unwrap().value(), 3);
        assert!(f.element(0).inv().is_err());
    }

    #[test]
    fn binary_field_wraps() {
        let f = PrimeField::new(2).unwrap();
        assert_eq!(f.element(1).add(&f.element(1)).unwrap().value(), 0);
    }

    #[test]
    fn mismatched_fields_are_rejected() {
        let a = PrimeField::new(5).unwrap().element(1);
        let b = PrimeField::new(7).unwrap().element(1);
        assert!(a.add(&b).is_err());
    }

    #[test]
    fn share_poly_hand_values() {
        let f5 = PrimeField::new(5).unwrap();
        // s=3, r=(2): value at party 1 is 3 + 2·1 = 5 ≡ 0.
        let v = eval_share_poly(f5.element(3), &[f5.element(2)], 1, 3).unwrap();
        assert_eq!(v.value(), 0);
        // All-zero coefficients: constant polynomial.
        let v = eval_share_poly(f5.element(4), &[f5.element(0), f5.element(0)], 3, 4).unwrap();
        assert_eq!(v.value(), 4);
        // Binary field: 1 + 1·1 ≡ 0.
        let f2 = PrimeField::new(2).unwrap();
        let v = eval_share_poly(f2.element(1), &[f2.element(1)], 1, 1).unwrap();
        assert_eq!(v.value(), 0);
    }

    #[test]
    fn share_poly_respects_embedding_bounds() {
        let f5 = PrimeField::new(5).unwrap();
        assert!(eval_share_poly(f5.element(1), &[], 0, 3).is_err());
        assert!(eval_share_poly(f5.element(1), &[], 4, 3).is_err());
        assert!(eval_share_poly(f5.element(1), &[], 1, 5).is_err()); // n ≥ t
    }

    #[test]
    fn party_points_wrap_over_nonzero_elements() {
        let f2 = PrimeField::new(2).unwrap();
        for i in 1..=4 {
            assert_eq!(party_point(f2, i).value(), 1);
        }
        let f3 = PrimeField::new(3).unwrap();
        assert_eq!(
            (1..=5)
                .map(|i| party_point(f3, i).value())
                .collect::<Vec<_>>(),
            vec![1, 2, 1, 2, 1]
        );
    }

    #[test]
    fn lagrange_hand_value() {
        // F₅, points (1,0),(2,2): the line 2x−2, value 3 at zero.
        let f = PrimeField::new(5).unwrap();
        let s = lagrange_at_zero(&[(f.element(1), f.element(0)), (f.element(2), f.element(2))])
            .unwrap();
        assert_eq!(s.value(), 3);
    }

    #[test]
    fn single_point_interpolation_is_identity() {
        let f = PrimeField::new(7).unwrap();
        let s = lagrange_at_zero(&[(f.element(3), f.element(6))]).unwrap();
        assert_eq!(s.value(), 6);
    }

    #[test]
    fn lagrange_rejects_bad_points() {
        let f = PrimeField::new(5).unwrap();
        assert!(lagrange_at_zero(&[]).is_err());
        assert!(lagrange_at_zero(&[(f.element(0), f.element(1))]).is_err());
        assert!(
            lagrange_at_zero(&[(f.element(2), f.element(1)), (f.element(2), f.element(3)),])
                .is_err()
        );
    }

    #[test]
    fn round_trip_all_small_fields() {
        // Exhaustive: every (s, r) and every k-subset of parties reconstructs s.
        for t in [2u64, 3, 5] {
            let f = PrimeField::new(t).unwrap();
            for k in 1..=3usize {
                let n = (t - 1).min(4) as usize; // stay in the injective regime
                if n < k {
                    continue;
                }
                let mut coeffs = vec![0u64; k]; // (s, r_1..r_{k−1})
                loop {
                    let s = f.element(coeffs[0]);
                    let r: Vec<FieldElement> = coeffs[1..].iter().map(|&c| f.element(c)).collect();
                    let shares: Vec<FieldElement> = (1..=n as u64)
                        .map(|i| eval_share_poly(s, &r, i, n as u64).unwrap())
                        .collect();
                    for subset in k_subsets(n, k) {
                        let points: Vec<_> = subset
                            .iter()
                            .map(|&i| (f.element(i as u64 + 1), shares[i]))
                            .collect();
                        assert_eq!(lagrange_at_zero(&points).unwrap(), s);
                    }
                    // Odometer over (F_t)^k.
                    let mut pos = 0;
                    loop {
                        if pos == coeffs.len() {
                            break;
                        }
                        coeffs[pos] += 1;
                        if coeffs[pos] < t {
                            break;
                        }
                        coeffs[pos] = 0;
                        pos += 1;
                    }
                    if pos == coeffs.len() {
                        break;
                    }
                }
            }
        }
    }

    fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize == k {
                out.push((0..n).filter(|i| mask >> i & 1 == 1).collect());
            }
        }
        out
    }
}
