use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

/// Non-negative rational kept in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExactRatio {
    num: u64,
    den: u64,
}

impl ExactRatio {
    pub const ZERO: ExactRatio = ExactRatio { num: 0, den: 1 };
    pub const ONE: ExactRatio = ExactRatio { num: 1, den: 1 };

    /// Panics on a zero denominator.
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den > 0, "ExactRatio with zero denominator");
        let g = num.gcd(&den);
        Self {
            num: num / g,
            den: den / g,
        }
    }

    pub fn numerator(&self) -> u64 {
        self.num
    }

    pub fn denominator(&self) -> u64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// Fixed-point rendering with `digits` decimals, truncated.
    pub fn to_decimal_string(&self, digits: usize) -> String {
        let whole = self.num / self.den;
        let mut rem = self.num % self.den;
        let mut out = whole.to_string();
        if digits > 0 {
            out.push('.');
            for _ in 0..digits {
                rem *= 10;
                out.push(char::from(b'0' + (rem / self.den) as u8));
                rem %= self.den;
            }
        }
        out
    }
}

impl Ord for ExactRatio {
    fn cmp(&self, other: &Self) -> Ordering {
        (u128::from(self.num) * u128::from(other.den))
            .cmp(&(u128::from(other.num) * u128::from(self.den)))
    }
}

impl PartialOrd for ExactRatio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExactRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}
