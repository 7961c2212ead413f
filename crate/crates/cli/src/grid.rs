//! Sweep axes as written in configs: `start:stop:count`, a comma list, or a
//! single value. Each grid prints back to the text it was parsed from, up to
//! normalization.

use std::fmt;

use qd_haze::Time;

#[derive(Debug, Clone, PartialEq)]
pub enum TimeGrid {
    Linspace { start: Time, stop: Time, count: usize },
    List(Vec<Time>),
}

impl TimeGrid {
    pub fn parse(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if s.contains(':') {
            let parts: Vec<&str> = s.split(':').collect();
            let [start, stop, count] = parts[..] else {
                return Err(format!("expected start:stop:count, got `{s}`"));
            };
            let start = parse_time(start)?;
            let stop = parse_time(stop)?;
            let count = parse_count(count)?;
            return Ok(TimeGrid::Linspace { start, stop, count });
        }
        let list = split_list(s)?.into_iter().map(parse_time).collect::<Result<Vec<_>, _>>()?;
        Ok(TimeGrid::List(list))
    }

    /// Grid points; symbolic endpoints give symbolic interior points, so a
    /// `0:pi/2:n` grid ends on the exact token.
    pub fn points(&self) -> Vec<Time> {
        match self {
            TimeGrid::List(v) => v.clone(),
            TimeGrid::Linspace { start, stop, count } => {
                let (start, stop, count) = (*start, *stop, *count);
                if count == 1 {
                    return vec![start];
                }
                let steps = (count - 1) as i128;
                (0..count)
                    .map(|i| {
                        if i == 0 {
                            return start;
                        }
                        if i == count - 1 {
                            return stop;
                        }
                        match (pi_parts(start), pi_parts(stop)) {
                            (Some((a, b)), Some((c, d))) => {
                                // a/b + i·(c/d − a/b)/steps, in units of π
                                let num = a * d * steps + i as i128 * (c * b - a * d);
                                let den = b * d * steps;
                                rational_time(num, den).unwrap_or_else(|| {
                                    Time::from(start.value() + i as f64 * (stop.value() - start.value()) / steps as f64)
                                })
                            }
                            _ => Time::from(start.value() + i as f64 * (stop.value() - start.value()) / steps as f64),
                        }
                    })
                    .collect()
            }
        }
    }
}

fn pi_parts(t: Time) -> Option<(i128, i128)> {
    match t {
        Time::PiRatio { num, den } => Some((num as i128, den as i128)),
        Time::Radians(_) => None,
    }
}

fn rational_time(num: i128, den: i128) -> Option<Time> {
    let g = gcd(num.unsigned_abs(), den.unsigned_abs()).max(1) as i128;
    let (num, den) = (num / g, den / g);
    Some(Time::pi_ratio(i64::try_from(num).ok()?, u64::try_from(den).ok()?))
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl fmt::Display for TimeGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TimeGrid::Linspace { start, stop, count } => write!(f, "{start}:{stop}:{count}"),
            TimeGrid::List(v) => write_list(f, v),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ValueGrid {
    Linspace { start: f64, stop: f64, count: usize },
    List(Vec<f64>),
}

impl ValueGrid {
    pub fn parse(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if s.contains(':') {
            let parts: Vec<&str> = s.split(':').collect();
            let [start, stop, count] = parts[..] else {
                return Err(format!("expected start:stop:count, got `{s}`"));
            };
            return Ok(ValueGrid::Linspace {
                start: parse_real(start)?,
                stop: parse_real(stop)?,
                count: parse_count(count)?,
            });
        }
        let list = split_list(s)?.into_iter().map(parse_real).collect::<Result<Vec<_>, _>>()?;
        Ok(ValueGrid::List(list))
    }

    pub fn points(&self) -> Vec<f64> {
        match self {
            ValueGrid::List(v) => v.clone(),
            ValueGrid::Linspace { start, stop, count } => {
                if *count == 1 {
                    return vec![*start];
                }
                let steps = (*count - 1) as f64;
                (0..*count)
                    .map(|i| {
                        if i == *count - 1 {
                            *stop
                        } else {
                            start + i as f64 * (stop - start) / steps
                        }
                    })
                    .collect()
            }
        }
    }
}

impl fmt::Display for ValueGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValueGrid::Linspace { start, stop, count } => write!(f, "{start:?}:{stop:?}:{count}"),
            ValueGrid::List(v) => {
                let items: Vec<String> = v.iter().map(|x| format!("{x:?}")).collect();
                f.write_str(&items.join(","))
            }
        }
    }
}

/// Fragment sizes: `all`, or a comma list of sizes and inclusive `a-b`
/// ranges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FragGrid {
    All,
    List(Vec<usize>),
}

impl FragGrid {
    pub fn parse(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if s == "all" {
            return Ok(FragGrid::All);
        }
        let mut out = Vec::new();
        for item in split_list(s)? {
            if let Some((a, b)) = item.split_once('-') {
                let (a, b) = (parse_size(a)?, parse_size(b)?);
                if a > b {
                    return Err(format!("empty range `{item}`"));
                }
                out.extend(a..=b);
            } else {
                out.push(parse_size(item)?);
            }
        }
        Ok(FragGrid::List(out))
    }

    /// Sorted, deduplicated sizes for an environment of `n_env` qubits.
    pub fn sizes(&self, n_env: usize) -> Vec<usize> {
        match self {
            FragGrid::All => (0..=n_env).collect(),
            FragGrid::List(v) => {
                let mut v = v.clone();
                v.sort_unstable();
                v.dedup();
                v
            }
        }
    }
}

impl fmt::Display for FragGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FragGrid::All => f.write_str("all"),
            FragGrid::List(v) => write_list(f, v),
        }
    }
}

fn write_list<T: fmt::Display>(f: &mut fmt::Formatter<'_>, v: &[T]) -> fmt::Result {
    for (i, x) in v.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{x}")?;
    }
    Ok(())
}

fn split_list(s: &str) -> Result<Vec<&str>, String> {
    let items: Vec<&str> = s.split(',').map(str::trim).collect();
    if items.iter().any(|x| x.is_empty()) {
        return Err(format!("empty entry in list `{s}`"));
    }
    Ok(items)
}

fn parse_time(s: &str) -> Result<Time, String> {
    s.parse::<Time>().map_err(|e| e.to_string())
}

fn parse_real(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("`{}` is not a number", s.trim()))?;
    if !v.is_finite() {
        return Err(format!("`{}` is not finite", s.trim()));
    }
    Ok(v)
}

fn parse_count(s: &str) -> Result<usize, String> {
    let n = parse_size(s)?;
    if n == 0 {
        return Err("grid count must be at least 1".into());
    }
    Ok(n)
}

fn parse_size(s: &str) -> Result<usize, String> {
    s.trim()
        .parse()
        .map_err(|_| format!("`{}` is not a non-negative integer", s.trim()))
}
