//! Exact two-decimal currency.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// A currency amount stored as an integer number of hundredths.
///
/// All arithmetic is exact. The textual form always carries exactly two
/// fraction digits (`"30.80"`, `"-4.05"`, `"0.00"`).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Money(i128);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseMoneyError {
    #[error("empty amount")]
    Empty,
    #[error("invalid amount {0:?}")]
    Invalid(String),
    #[error("amount {0:?} has more than two fraction digits")]
    TooPrecise(String),
    #[error("amount {0:?} is out of range")]
    OutOfRange(String),
}

impl Money {
    pub const ZERO: Money = Money(0);

    pub const fn from_cents(cents: i128) -> Self {
        Money(cents)
    }

    pub const fn from_dollars(dollars: i64) -> Self {
        Money(dollars as i128 * 100)
    }

    pub const fn cents(self) -> i128 {
        self.0
    }

    pub fn is_negative(self) -> bool {
        self.0 < 0
    }

    /// Cost of shipping `quantity` units at `self` per unit.
    pub fn times(self, quantity: i64) -> Money {
        Money(self.0 * quantity as i128)
    }
}

impl fmt::Display for Money {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.0 < 0 { "-" } else { "" };
        let abs = self.0.unsigned_abs();
        let text = format!("{sign}{}.{:02}", abs / 100, abs % 100);
        f.pad(&text)
    }
}

impl FromStr for Money {
    type Err = ParseMoneyError;

    /// Accepts an optional leading `-`, digits, and an optional fraction of
    /// one or two digits. No currency symbols or separators; cleaning raw
    /// text is the ingest module's job.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() {
            return Err(ParseMoneyError::Empty);
        }
        let (negative, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let (whole, frac) = match body.split_once('.') {
            Some((w, f)) => (w, f),
            None => (body, ""),
        };
        let digits = |t: &str| t.bytes().all(|b| b.is_ascii_digit());
        if whole.is_empty() || !digits(whole) || !digits(frac) || (body.contains('.') && frac.is_empty()) {
            return Err(ParseMoneyError::Invalid(s.to_string()));
        }
        if frac.len() > 2 {
            return Err(ParseMoneyError::TooPrecise(s.to_string()));
        }
        let out_of_range = || ParseMoneyError::OutOfRange(s.to_string());
        let whole: i128 = whole.parse().map_err(|_| out_of_range())?;
        let frac: i128 = match frac.len() {
            0 => 0,
            1 => frac.parse::<i128>().unwrap() * 10,
            _ => frac.parse().unwrap(),
        };
        let cents = whole
            .checked_mul(100)
            .and_then(|c| c.checked_add(frac))
            .filter(|c| *c <= i64::MAX as i128)
            .ok_or_else(out_of_range)?;
        Ok(Money(if negative { -cents } else { cents }))
    }
}

impl Add for Money {
    type Output = Money;
    fn add(self, rhs: Money) -> Money {
        Money(self.0 + rhs.0)
    }
}

impl AddAssign for Money {
    fn add_assign(&mut self, rhs: Money) {
        self.0 += rhs.0;
    }
}

impl Sub for Money {
    type Output = Money;
    fn sub(self, rhs: Money) -> Money {
        Money(self.0 - rhs.0)
    }
}

impl Neg for Money {
    type Output = Money;
    fn neg(self) -> Money {
        Money(-self.0)
    }
}

impl Mul<i64> for Money {
    type Output = Money;
    fn mul(self, rhs: i64) -> Money {
        self.times(rhs)
    }
}

impl Sum for Money {
    fn sum<I: Iterator<Item = Money>>(iter: I) -> Money {
        iter.fold(Money::ZERO, Add::add)
    }
}

impl Serialize for Money {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Money {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn formats_two_fraction_digits() {
        assert_eq!(Money::from_cents(3080).to_string(), "30.80");
        assert_eq!(Money::from_cents(48_593_000).to_string(), "485930.00");
        assert_eq!(Money::from_cents(-405).to_string(), "-4.05");
        assert_eq!(Money::from_cents(-5).to_string(), "-0.05");
        assert_eq!(Money::ZERO.to_string(), "0.00");
        assert_eq!(format!("{:>8}", Money::from_cents(100)), "    1.00");
    }

    #[test]
    fn parses_zero_to_two_fraction_digits() {
        assert_eq!("30.8".parse::<Money>().unwrap(), Money::from_cents(3080));
        assert_eq!("30.80".parse::<Money>().unwrap(), Money::from_cents(3080));
        assert_eq!("42".parse::<Money>().unwrap(), Money::from_dollars(42));
        assert_eq!("-6".parse::<Money>().unwrap(), Money::from_cents(-600));
    }

    #[test]
    fn rejects_malformed() {
        for bad in ["", "1.", ".5", "1.234", "1,000", "$3", "abc", "1.2.3", "--1", "+1"] {
            assert!(bad.parse::<Money>().is_err(), "{bad:?} accepted");
        }
        assert!(matches!("1.234".parse::<Money>(), Err(ParseMoneyError::TooPrecise(_))));
        assert!(matches!(
            "99999999999999999999999".parse::<Money>(),
            Err(ParseMoneyError::OutOfRange(_))
        ));
    }

    #[test]
    fn serde_uses_decimal_strings() {
        let json = serde_json::to_string(&Money::from_cents(3080)).unwrap();
        assert_eq!(json, "\"30.80\"");
        let back: Money = serde_json::from_str("\"35.5\"").unwrap();
        assert_eq!(back, Money::from_cents(3550));
        assert!(serde_json::from_str::<Money>("35.5").is_err());
    }

    proptest! {
        #[test]
        fn display_parse_round_trip(cents in -(i64::MAX as i128)..=(i64::MAX as i128)) {
            let m = Money::from_cents(cents);
            prop_assert_eq!(m.to_string().parse::<Money>().unwrap(), m);
        }
    }
}
