//! Dimensionless evolution time.
//!
//! Times may be given numerically or as exact rational multiples of π. The
//! symbolic form is what unlocks the t = π/2 closed forms: a float that merely
//! rounds to π/2 never does.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Time {
    Radians(f64),
    /// `num·π/den`, kept in lowest terms with `den > 0`.
    PiRatio { num: i64, den: u64 },
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

impl Time {
    pub const ZERO: Time = Time::PiRatio { num: 0, den: 1 };
    pub const HALF_PI: Time = Time::PiRatio { num: 1, den: 2 };

    pub fn pi_ratio(num: i64, den: u64) -> Time {
        assert!(den > 0, "zero denominator");
        let g = gcd(num.unsigned_abs(), den).max(1);
        if num == 0 {
            return Time::ZERO;
        }
        Time::PiRatio {
            num: num / g as i64,
            den: den / g,
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Time::Radians(t) => t,
            Time::PiRatio { num, den } => num as f64 * PI / den as f64,
        }
    }

    /// `(cos t, sin t)`, exact at integer multiples of π/2.
    pub fn cos_sin(self) -> (f64, f64) {
        if let Time::PiRatio { num, den } = self {
            if 2 % den == 0 {
                let quarter = (num * (2 / den as i64)).rem_euclid(4);
                return match quarter {
                    0 => (1.0, 0.0),
                    1 => (0.0, 1.0),
                    2 => (-1.0, 0.0),
                    _ => (0.0, -1.0),
                };
            }
        }
        let t = self.value();
        (t.cos(), t.sin())
    }

    pub fn is_zero(self) -> bool {
        match self {
            Time::Radians(t) => t == 0.0,
            Time::PiRatio { num, .. } => num == 0,
        }
    }

    /// True only for the symbolic token π/2.
    pub fn is_half_pi(self) -> bool {
        matches!(self, Time::PiRatio { num: 1, den: 2 })
    }
}

impl From<f64> for Time {
    fn from(t: f64) -> Self {
        if t == 0.0 {
            Time::ZERO
        } else {
            Time::Radians(t)
        }
    }
}

impl fmt::Display for Time {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Time::Radians(t) => write!(f, "{t:?}"),
            Time::PiRatio { num: 0, .. } => write!(f, "0"),
            Time::PiRatio { num, den } => {
                match num {
                    1 => write!(f, "pi")?,
                    -1 => write!(f, "-pi")?,
                    n => write!(f, "{n}pi")?,
                }
                if den != 1 {
                    write!(f, "/{den}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for Time {
    type Err = Error;

    /// Accepts plain decimals and tokens of the form `[-][k]pi[/d]`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || Error::Domain(format!("cannot parse time `{s}`"));
        if let Some(pos) = s.find("pi") {
            let (head, tail) = (&s[..pos], &s[pos + 2..]);
            let num: i64 = match head {
                "" => 1,
                "-" => -1,
                h => h.trim_end_matches('*').parse().map_err(|_| bad())?,
            };
            let den: u64 = match tail {
                "" => 1,
                t => t
                    .strip_prefix('/')
                    .ok_or_else(bad)?
                    .parse()
                    .map_err(|_| bad())?,
            };
            if den == 0 {
                return Err(bad());
            }
            return Ok(Time::pi_ratio(num, den));
        }
        let v: f64 = s.parse().map_err(|_| bad())?;
        if !v.is_finite() {
            return Err(bad());
        }
        Ok(Time::from(v))
    }
}
