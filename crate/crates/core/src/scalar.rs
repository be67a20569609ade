//! Probability scalars.
//!
//! Qualitative analysis only looks at supports, so any exact or floating
//! type will do; files always carry rational strings such as `"1/2"`.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

/// Tolerance used when checking that floating-point distributions sum to one.
pub const FLOAT_TOLERANCE: f64 = 1e-9;

/// A scalar type usable as a probability.
pub trait Probability:
    Num + Clone + Debug + PartialOrd + Send + Sync + 'static
{
    /// `num / den`.
    fn from_ratio(num: u64, den: u64) -> Self;

    fn to_f64(&self) -> f64;

    /// Whether a distribution total counts as one: exactly for exact types,
    /// within [`FLOAT_TOLERANCE`] for floats.
    fn is_unit(&self) -> bool;

    /// Parses `"n/d"`, `"n"` or a decimal literal.
    fn parse_probability(s: &str) -> Option<Self>;

    /// Renders as `"n/d"` for exact types, decimal otherwise.
    fn format_probability(&self) -> String;

    fn is_positive(&self) -> bool {
        *self > Self::zero()
    }
}

fn split_ratio(s: &str) -> (&str, Option<&str>) {
    match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s.trim(), None),
    }
}

macro_rules! float_probability {
    ($t:ty) => {
        impl Probability for $t {
            fn from_ratio(num: u64, den: u64) -> Self {
                (num as f64 / den as f64) as $t
            }

            fn to_f64(&self) -> f64 {
                *self as f64
            }

            fn is_unit(&self) -> bool {
                ((*self as f64) - 1.0).abs() <= FLOAT_TOLERANCE
            }

            fn parse_probability(s: &str) -> Option<Self> {
                let (n, d) = split_ratio(s);
                let n: f64 = n.parse().ok()?;
                let v = match d {
                    Some(d) => {
                        let d: f64 = d.parse().ok()?;
                        if d == 0.0 {
                            return None;
                        }
                        n / d
                    }
                    None => n,
                };
                (v.is_finite() && (0.0..=1.0 + FLOAT_TOLERANCE).contains(&v)).then_some(v as $t)
            }

            fn format_probability(&self) -> String {
                format!("{}", self)
            }
        }
    };
}

float_probability!(f64);
float_probability!(f32);

impl<T> Probability for Ratio<T>
where
    T: Integer + Signed + Clone + Debug + Display + FromStr + FromPrimitive + ToPrimitive + Send + Sync + 'static,
{
    fn from_ratio(num: u64, den: u64) -> Self {
        Ratio::new(
            T::from_u64(num).expect("numerator fits"),
            T::from_u64(den).expect("denominator fits"),
        )
    }

    fn to_f64(&self) -> f64 {
        match (self.numer().to_f64(), self.denom().to_f64()) {
            (Some(n), Some(d)) => n / d,
            _ => f64::NAN,
        }
    }

    fn is_unit(&self) -> bool {
        self.is_one()
    }

    fn parse_probability(s: &str) -> Option<Self> {
        let (n, d) = split_ratio(s);
        let n: T = n.parse().ok()?;
        let d: T = match d {
            Some(d) => d.parse().ok()?,
            None => T::one(),
        };
        if d.is_zero() {
            return None;
        }
        let v = Ratio::new(n, d);
        (v >= Self::zero() && v <= Self::one()).then_some(v)
    }

    fn format_probability(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }
}
