//! Scalar values: exact rationals by default, floats for tolerant runs.
//!
//! Exact scalars are arbitrary-precision rationals kept in canonical form
//! (reduced, positive denominator). Values that fit in machine words use an
//! inline fast path and promote to heap-allocated big rationals only on
//! overflow, so tables of millions of scalars stay compact.
//!
//! Comparison comes in two regimes. [`CompareMode::Exact`] is the total
//! value order (finite floats embed into the rationals, so exact and float
//! values compare consistently). [`CompareMode::Tolerant`] treats values
//! within `eps` of each other as equal; that relation is not transitive, so
//! nothing in this crate ever sorts under it — sorting always uses strict
//! value order, and tolerance applies only in final matching scans and
//! residual checks.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Comparison regime for scalars and vectors.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum CompareMode {
    /// Strict value order; equality is exact.
    #[default]
    Exact,
    /// `a` and `b` compare equal when `|a - b| <= eps`. Not transitive.
    Tolerant(f64),
}

impl CompareMode {
    pub fn is_exact(self) -> bool {
        matches!(self, CompareMode::Exact)
    }

    /// The tolerance in effect, if any.
    pub fn tolerance(self) -> Option<f64> {
        match self {
            CompareMode::Exact => None,
            CompareMode::Tolerant(eps) => Some(eps),
        }
    }
}

/// An exact rational or a finite float. See the module docs for the
/// comparison contract.
#[derive(Clone)]
pub struct Scalar(Repr);

#[derive(Clone)]
enum Repr {
    // den >= 1 and gcd(|num|, den) == 1.
    Small { num: i64, den: i64 },
    // Canonical, and at least one of numerator/denominator outside i64.
    Big(Box<BigRational>),
    // Always finite.
    Float(f64),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar(Repr::Small { num: 0, den: 1 })
    }

    pub fn one() -> Self {
        Scalar(Repr::Small { num: 1, den: 1 })
    }

    pub fn from_int(v: i64) -> Self {
        Scalar(Repr::Small { num: v, den: 1 })
    }

    /// Exact rational `num/den`. Panics if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "Scalar::ratio: zero denominator");
        Self::from_i128(num as i128, den as i128)
    }

    /// A float scalar. Rejects NaN and infinities, which would break the
    /// total comparison order.
    pub fn from_f64(v: f64) -> Result<Self> {
        if v.is_finite() {
            Ok(Scalar(Repr::Float(v)))
        } else {
            Err(Error::Spec(format!("non-finite scalar {v}")))
        }
    }

    fn from_i128(num: i128, den: i128) -> Self {
        debug_assert!(den != 0);
        let neg = (num < 0) != (den < 0);
        let (mut n, mut d) = (num.unsigned_abs(), den.unsigned_abs());
        let g = n.gcd(&d);
        if g > 1 {
            n /= g;
            d /= g;
        }
        let fits = |u: u128| u <= i64::MAX as u128;
        if fits(n) && fits(d) {
            let num = if neg { -(n as i64) } else { n as i64 };
            Scalar(Repr::Small { num, den: d as i64 })
        } else {
            let mut bn = BigInt::from(n);
            if neg {
                bn = -bn;
            }
            Scalar(Repr::Big(Box::new(BigRational::new_raw(bn, BigInt::from(d)))))
        }
    }

    fn from_big(r: BigRational) -> Self {
        // `BigRational::new` (and arithmetic on canonical inputs) keeps the
        // value reduced with a positive denominator; only demotion remains.
        if let (Some(num), Some(den)) = (r.numer().to_i64(), r.denom().to_i64()) {
            Scalar(Repr::Small { num, den })
        } else {
            Scalar(Repr::Big(Box::new(r)))
        }
    }

    fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small { num, den } => {
                BigRational::new_raw(BigInt::from(*num), BigInt::from(*den))
            }
            Repr::Big(r) => (**r).clone(),
            Repr::Float(v) => {
                BigRational::from_float(*v).expect("float scalars are finite")
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Small { num, .. } => *num == 0,
            Repr::Big(r) => r.is_zero(),
            Repr::Float(v) => *v == 0.0,
        }
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small { num, .. } => *num < 0,
            Repr::Big(r) => r.is_negative(),
            Repr::Float(v) => *v < 0.0,
        }
    }

    /// True for rational representations, false for floats.
    pub fn is_exact(&self) -> bool {
        !matches!(&self.0, Repr::Float(_))
    }

    pub fn abs(&self) -> Scalar {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Nearest-float approximation of the value.
    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small { num, den } => *num as f64 / *den as f64,
            Repr::Big(r) => r.to_f64().unwrap_or(f64::NAN),
            Repr::Float(v) => *v,
        }
    }

    /// The same value as a float scalar.
    pub fn to_float_scalar(&self) -> Scalar {
        Scalar(Repr::Float(self.to_f64()))
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::from_int(v)
    }
}

fn add_repr(a: &Scalar, b: &Scalar) -> Scalar {
    match (&a.0, &b.0) {
        (Repr::Small { num: an, den: ad }, Repr::Small { num: bn, den: bd }) => {
            let l = (*an as i128) * (*bd as i128);
            let r = (*bn as i128) * (*ad as i128);
            match l.checked_add(r) {
                Some(n) => Scalar::from_i128(n, (*ad as i128) * (*bd as i128)),
                None => Scalar::from_big(a.to_big() + b.to_big()),
            }
        }
        (Repr::Float(x), _) => Scalar(Repr::Float(x + b.to_f64())),
        (_, Repr::Float(y)) => Scalar(Repr::Float(a.to_f64() + y)),
        _ => Scalar::from_big(a.to_big() + b.to_big()),
    }
}

fn mul_repr(a: &Scalar, b: &Scalar) -> Scalar {
    match (&a.0, &b.0) {
        (Repr::Small { num: an, den: ad }, Repr::Small { num: bn, den: bd }) => {
            Scalar::from_i128((*an as i128) * (*bn as i128), (*ad as i128) * (*bd as i128))
        }
        (Repr::Float(x), _) => Scalar(Repr::Float(x * b.to_f64())),
        (_, Repr::Float(y)) => Scalar(Repr::Float(a.to_f64() * y)),
        _ => Scalar::from_big(a.to_big() * b.to_big()),
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        add_repr(self, rhs)
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        add_repr(&self, &rhs)
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        add_repr(self, &-rhs)
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        add_repr(&self, &-&rhs)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        mul_repr(self, rhs)
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        mul_repr(&self, &rhs)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match &self.0 {
            Repr::Small { num, den } => match num.checked_neg() {
                Some(n) => Scalar(Repr::Small { num: n, den: *den }),
                None => Scalar::from_big(-self.to_big()),
            },
            Repr::Big(r) => Scalar::from_big(-(**r).clone()),
            Repr::Float(v) => Scalar(Repr::Float(-v)),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, x| acc + x)
    }
}

fn cmp_float_exact(x: f64, exact: &Scalar) -> Ordering {
    match BigRational::from_float(x) {
        Some(r) => r.cmp(&exact.to_big()),
        // Unreachable for values built through the public constructors,
        // but keep the order total for defensive callers.
        None => {
            if x == f64::NEG_INFINITY {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        }
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small { num: an, den: ad }, Repr::Small { num: bn, den: bd }) => {
                let l = (*an as i128) * (*bd as i128);
                let r = (*bn as i128) * (*ad as i128);
                l.cmp(&r)
            }
            (Repr::Float(x), Repr::Float(y)) => x.total_cmp(y),
            (Repr::Float(x), _) => cmp_float_exact(*x, other),
            (_, Repr::Float(y)) => cmp_float_exact(*y, self).reverse(),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Scalar {}

/// Compares two scalars under the given mode. Tolerant comparison checks
/// `|a - b| <= eps` exactly (the tolerance converts to a rational without
/// rounding), falling back to the strict order when the gap is wider.
pub fn compare_scalars(a: &Scalar, b: &Scalar, mode: CompareMode) -> Ordering {
    match mode {
        CompareMode::Exact => a.cmp(b),
        CompareMode::Tolerant(eps) => {
            debug_assert!(eps >= 0.0 && eps.is_finite(), "invalid tolerance {eps}");
            let eps = Scalar::from_f64(eps).expect("tolerance must be finite");
            if (a - b).abs() <= eps {
                Ordering::Equal
            } else {
                a.cmp(b)
            }
        }
    }
}

/// Parses one scalar token: an integer `-?d+`, a decimal `-?d+.d+`, or a
/// rational `-?d+/d+`. Anything else is rejected with the offset of the
/// offending byte. Values canonicalize on construction, so `-7/14` parses
/// to `-1/2` and `0.25` to `1/4`.
pub fn parse_scalar(token: &str) -> Result<Scalar> {
    let bytes = token.as_bytes();
    let err = |offset: usize, message: &str| {
        Err(Error::ScalarSyntax {
            token: token.to_string(),
            offset,
            message: message.to_string(),
        })
    };

    let mut pos = 0;
    if bytes.first() == Some(&b'-') {
        pos = 1;
    }
    let int_start = pos;
    while pos < bytes.len() && bytes[pos].is_ascii_digit() {
        pos += 1;
    }
    if pos == int_start {
        return err(pos, "expected a digit");
    }

    if pos == bytes.len() {
        let num: BigInt = token.parse().expect("scanned digits");
        return Ok(Scalar::from_big(BigRational::from_integer(num)));
    }

    match bytes[pos] {
        b'.' => {
            let frac_start = pos + 1;
            let mut end = frac_start;
            while end < bytes.len() && bytes[end].is_ascii_digit() {
                end += 1;
            }
            if end == frac_start {
                return err(frac_start, "expected a digit after '.'");
            }
            if end != bytes.len() {
                return err(end, "unexpected character in decimal");
            }
            let digits = format!("{}{}", &token[int_start..pos], &token[frac_start..end]);
            let mut num: BigInt = digits.parse().expect("scanned digits");
            if token.starts_with('-') {
                num = -num;
            }
            let den = BigInt::from(10u8).pow((end - frac_start) as u32);
            Ok(Scalar::from_big(BigRational::new(num, den)))
        }
        b'/' => {
            let den_start = pos + 1;
            let mut end = den_start;
            while end < bytes.len() && bytes[end].is_ascii_digit() {
                end += 1;
            }
            if end == den_start {
                return err(den_start, "expected a digit after '/'");
            }
            if end != bytes.len() {
                return err(end, "unexpected character in rational");
            }
            let num: BigInt = token[..pos].parse().expect("scanned digits");
            let den: BigInt = token[den_start..end].parse().expect("scanned digits");
            if den.is_zero() {
                return err(den_start, "zero denominator");
            }
            Ok(Scalar::from_big(BigRational::new(num, den)))
        }
        _ => err(pos, "unexpected character"),
    }
}

/// Canonical text form: the shortest of an integer or `p/q`. The inverse of
/// [`parse_scalar`] on exact values.
pub fn render_scalar(s: &Scalar) -> String {
    s.to_string()
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small { num, den } => {
                if *den == 1 {
                    write!(f, "{num}")
                } else {
                    write!(f, "{num}/{den}")
                }
            }
            Repr::Big(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Repr::Float(v) => write!(f, "{v}"),
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(text: &str) -> Scalar {
        parse_scalar(text).unwrap()
    }

    #[test]
    fn parses_integers_decimals_and_rationals() {
        assert_eq!(s("3"), Scalar::from_int(3));
        assert_eq!(s("-12"), Scalar::from_int(-12));
        assert_eq!(s("0.25"), Scalar::ratio(1, 4));
        assert_eq!(s("-7/14"), Scalar::ratio(-1, 2));
        assert_eq!(s("007"), Scalar::from_int(7));
        assert_eq!(s("-0"), Scalar::zero());
    }

    #[test]
    fn rejects_malformed_tokens() {
        for (token, offset) in [
            ("", 0),
            ("-", 1),
            ("1.", 2),
            (".5", 0),
            ("1/", 2),
            ("1//2", 2),
            ("1e5", 1),
            ("2-3", 1),
            ("1/-2", 2),
            ("1 2", 1),
        ] {
            match parse_scalar(token) {
                Err(Error::ScalarSyntax { offset: o, .. }) => {
                    assert_eq!(o, offset, "offset for {token:?}")
                }
                other => panic!("expected syntax error for {token:?}, got {other:?}"),
            }
        }
    }

    #[test]
    fn rejects_zero_denominator() {
        match parse_scalar("3/0") {
            Err(Error::ScalarSyntax { offset, message, .. }) => {
                assert_eq!(offset, 2);
                assert!(message.contains("zero denominator"));
            }
            other => panic!("expected zero-denominator error, got {other:?}"),
        }
    }

    #[test]
    fn renders_canonical_form() {
        assert_eq!(render_scalar(&s("3")), "3");
        assert_eq!(render_scalar(&s("-7/14")), "-1/2");
        assert_eq!(render_scalar(&s("0.25")), "1/4");
        assert_eq!(render_scalar(&s("4/2")), "2");
        assert_eq!(render_scalar(&Scalar::zero()), "0");
    }

    #[test]
    fn exact_comparison_is_by_value() {
        assert_eq!(
            compare_scalars(&s("1/3"), &s("0.3333"), CompareMode::Exact),
            Ordering::Greater
        );
        assert_eq!(compare_scalars(&s("2/4"), &s("1/2"), CompareMode::Exact), Ordering::Equal);
        assert_eq!(compare_scalars(&s("-1"), &s("1"), CompareMode::Exact), Ordering::Less);
    }

    #[test]
    fn tolerant_comparison_accepts_nearby_values() {
        let mode = CompareMode::Tolerant(0.001);
        assert_eq!(compare_scalars(&s("0.1000"), &s("0.1005"), mode), Ordering::Equal);
        assert_eq!(compare_scalars(&s("0.1000"), &s("0.2"), mode), Ordering::Less);
    }

    #[test]
    fn tolerant_equality_is_not_transitive() {
        // a ~ b and b ~ c but a !~ c: exactly why no sort runs under Tolerant.
        let mode = CompareMode::Tolerant(1.0);
        let (a, b, c) = (s("0"), s("1"), s("2"));
        assert_eq!(compare_scalars(&a, &b, mode), Ordering::Equal);
        assert_eq!(compare_scalars(&b, &c, mode), Ordering::Equal);
        assert_eq!(compare_scalars(&a, &c, mode), Ordering::Less);
    }

    #[test]
    fn arithmetic_promotes_and_demotes() {
        let huge = Scalar::from_int(i64::MAX);
        let sum = &huge + &huge;
        assert!(sum.is_exact());
        assert_eq!(&sum - &huge, huge);

        let product = &huge * &huge;
        let expected = BigRational::from_integer(BigInt::from(i64::MAX)).pow(2);
        assert_eq!(product.to_big(), expected);

        // A big value that cancels back into machine range demotes again.
        let back = &product * &Scalar::ratio(1, i64::MAX);
        assert_eq!(back, huge);
        assert!(matches!(back.0, Repr::Small { .. }));
    }

    #[test]
    fn float_scalars_compare_with_exact_ones() {
        let half = Scalar::from_f64(0.5).unwrap();
        assert_eq!(half, Scalar::ratio(1, 2));
        assert!(Scalar::from_f64(0.1).unwrap() > Scalar::ratio(1, 10)); // binary 0.1 is slightly high
        assert!(Scalar::from_f64(f64::NAN).is_err());
        assert!(Scalar::from_f64(f64::INFINITY).is_err());
    }

    #[test]
    fn sums_fold_exactly() {
        let total: Scalar = (1..=10).map(|k| Scalar::ratio(1, k)).sum();
        assert_eq!(total, Scalar::ratio(7381, 2520));
    }

    fn arb_rational() -> impl Strategy<Value = Scalar> {
        (any::<i32>(), 1..10_000i64).prop_map(|(n, d)| Scalar::ratio(n as i64, d))
    }

    proptest! {
        #[test]
        fn parse_render_round_trips(sc in arb_rational()) {
            let text = render_scalar(&sc);
            prop_assert_eq!(parse_scalar(&text).unwrap(), sc);
        }

        #[test]
        fn order_is_total_and_consistent(a in arb_rational(), b in arb_rational(), c in arb_rational()) {
            // Antisymmetry.
            prop_assert_eq!(a.cmp(&b), b.cmp(&a).reverse());
            // Transitivity of <=.
            if a <= b && b <= c {
                prop_assert!(a <= c);
            }
            // Agreement with the big-rational reference.
            prop_assert_eq!(a.cmp(&b), a.to_big().cmp(&b.to_big()));
        }

        #[test]
        fn arithmetic_matches_big_rational_reference(a in arb_rational(), b in arb_rational()) {
            prop_assert_eq!((&a + &b).to_big(), a.to_big() + b.to_big());
            prop_assert_eq!((&a - &b).to_big(), a.to_big() - b.to_big());
            prop_assert_eq!((&a * &b).to_big(), a.to_big() * b.to_big());
        }
    }
}
