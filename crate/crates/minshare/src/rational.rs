//! Exact rational arithmetic helpers.
//!
//! Every probability mass in this crate is an arbitrary-precision rational.
//! Equality claims between entropies are decided by comparing these pre-log
//! rationals, so they are tolerance-free; floating point enters only when a
//! final logarithm (or a fractional power) has to be taken, and the helpers
//! here keep that conversion accurate even when numerator and denominator are
//! far outside the `f64` range.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational; the exactness carrier for all masses.
pub type Rational = BigRational;

/// Build a rational from machine integers. Panics on a zero denominator,
/// which is a programming error rather than an input error.
pub fn ratio(num: i64, den: i64) -> Rational {
    assert!(den != 0, "rational with zero denominator");
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parse a rational written as `a/b` or as a bare integer `a`.
///
/// Decimal notation is rejected on purpose: a decimal literal hides a
/// base-ten denominator choice, and all interfaces of this crate promise
/// exact rational inputs.
pub fn parse_ratio(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = |msg: &str| Error::MalformedInput(format!("rational `{s}`: {msg}"));
    if s.contains('.') {
        return Err(bad(
            "decimal notation is not accepted; write an exact fraction like 3/4",
        ));
    }
    let mut parts = s.splitn(2, '/');
    let num: BigInt = parts
        .next()
        .unwrap_or("")
        .parse()
        .map_err(|_| bad("numerator is not an integer"))?;
    let den: BigInt = match parts.next() {
        None => BigInt::from(1),
        Some(d) => d
            .parse()
            .map_err(|_| bad("denominator is not an integer"))?,
    };
    if den.is_zero() {
        return Err(bad("denominator is zero"));
    }
    Ok(Rational::new(num, den))
}

/// Render a rational in the same `a/b` (or bare integer) syntax accepted by
/// [`parse_ratio`].
pub fn format_ratio(r: &Rational) -> String {
    r.to_string()
}

/// Base-2 logarithm of a positive rational, accurate to a few ulps even when
/// numerator or denominator exceed the `f64` range.
pub fn log2(r: &Rational) -> f64 {
    assert!(r.is_positive(), "log2 of a non-positive rational");
    log2_bigint(r.numer()) - log2_bigint(r.denom())
}

/// `−log₂ r`, the bit form of a probability mass. Normalizes the mass-one
/// case to `+0.0` so deterministic distributions never display as `-0`.
pub fn neg_log2(r: &Rational) -> f64 {
    let bits = -log2(r);
    if bits == 0.0 {
        0.0
    } else {
        bits
    }
}

fn log2_bigint(x: &BigInt) -> f64 {
    debug_assert!(x.is_positive());
    let bits = x.bits();
    if bits <= 53 {
        return x.to_f64().expect("small BigInt converts exactly").log2();
    }
    // Keep the top 53 bits as an exact mantissa and account for the shift.
    let shift = bits - 53;
    let mant = (x >> shift)
        .to_f64()
        .expect("53-bit mantissa converts exactly");
    mant.log2() + shift as f64
}

/// Convert a rational to `f64`, scaling numerator and denominator down
/// together when they are too large to convert directly.
pub fn to_f64(r: &Rational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    if r.is_negative() {
        return -to_f64(&-r);
    }
    let (n, d) = (r.numer(), r.denom());
    let nb = n.bits();
    let db = d.bits();
    if nb <= 53 && db <= 53 {
        return n.to_f64().unwrap() / d.to_f64().unwrap();
    }
    let shift = nb.max(db) - 53;
    let ns = n >> shift;
    if ns.is_zero() {
        // Numerator vanished under the shift: the value is far below the
        // subnormal range, and 2^log2 reproduces the best representable result.
        return log2(r).exp2();
    }
    ns.to_f64().unwrap() / (d >> shift).to_f64().unwrap()
}

/// Exact rational serialized as a `{num, den}` pair of machine integers.
///
/// Reports and JSON interfaces use this representation; values whose reduced
/// numerator or denominator do not fit are refused rather than rounded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct RatioRepr {
    pub num: i64,
    pub den: u64,
}

impl RatioRepr {
    pub fn try_from_ratio(r: &Rational) -> Result<Self> {
        let num = r
            .numer()
            .to_i64()
            .ok_or_else(|| Error::Overflow(format!("numerator of {r}")))?;
        let den = r
            .denom()
            .to_u64()
            .ok_or_else(|| Error::Overflow(format!("denominator of {r}")))?;
        Ok(RatioRepr { num, den })
    }

    pub fn to_ratio(self) -> Rational {
        Rational::new(BigInt::from(self.num), BigInt::from(self.den))
    }
}

/// Serde adapter for report fields: a `Rational` as a `{num, den}` pair of
/// decimal strings, lossless at any magnitude (exact masses can outgrow
/// machine integers long before they stop being meaningful).
pub(crate) fn serialize_ratio<S>(r: &Rational, ser: S) -> std::result::Result<S::Ok, S::Error>
where
    S: serde::Serializer,
{
    #[derive(serde::Serialize)]
    struct Repr {
        num: String,
        den: String,
    }
    let repr = Repr {
        num: r.numer().to_string(),
        den: r.denom().to_string(),
    };
    serde::Serialize::serialize(&repr, ser)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse_ratio("3/4").unwrap(), ratio(3, 4));
        assert_eq!(parse_ratio("2").unwrap(), ratio(2, 1));
        assert_eq!(parse_ratio(" 9/10 ").unwrap(), ratio(9, 10));
        assert_eq!(parse_ratio("-1/3").unwrap(), ratio(-1, 3));
    }

    #[test]
    fn rejects_decimals_and_garbage() {
        assert!(parse_ratio("0.75").is_err());
        assert!(parse_ratio("a/b").is_err());
        assert!(parse_ratio("1/0").is_err());
        assert!(parse_ratio("").is_err());
    }

    #[test]
    fn round_trips_display_form() {
        for s in ["3/4", "1", "12", "7/12"] {
            assert_eq!(format_ratio(&parse_ratio(s).unwrap()), s);
        }
    }

    #[test]
    fn log2_matches_f64_on_small_values() {
        assert_eq!(log2(&ratio(4, 1)), 2.0);
        assert!((log2(&ratio(3, 4)) - (0.75f64).log2()).abs() < 1e-14);
        assert!((log2(&ratio(4, 3)) - (4.0f64 / 3.0).log2()).abs() < 1e-14);
    }

    #[test]
    fn log2_handles_huge_values() {
        // 2^1000 is exactly representable as an exponent.
        let big = Rational::from(BigInt::from(2).pow(1000u32));
        assert_eq!(log2(&big), 1000.0);
        let tiny = Rational::new(BigInt::from(1), BigInt::from(2).pow(1000u32));
        assert_eq!(log2(&tiny), -1000.0);
        // 3^500 / 2^700: compare against logarithm identities.
        let r = Rational::new(BigInt::from(3).pow(500u32), BigInt::from(2).pow(700u32));
        let expect = 500.0 * 3f64.log2() - 700.0;
        assert!((log2(&r) - expect).abs() < 1e-9);
    }

    #[test]
    fn to_f64_is_exact_at_desk_scale() {
        assert_eq!(to_f64(&ratio(3, 4)), 0.75);
        assert_eq!(to_f64(&ratio(0, 1)), 0.0);
        let r = Rational::new(BigInt::from(3).pow(100u32), BigInt::from(3).pow(100u32) * 2);
        assert_eq!(to_f64(&r), 0.5);
    }

    #[test]
    fn ratio_repr_overflow_is_an_error() {
        let huge = Rational::from(BigInt::from(u64::MAX) * 4);
        assert!(RatioRepr::try_from_ratio(&huge).is_err());
        assert_eq!(
            RatioRepr::try_from_ratio(&ratio(7, 12)).unwrap(),
            RatioRepr { num: 7, den: 12 }
        );
    }
}
