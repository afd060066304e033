//! Fixed-decimal rendering of reported numbers.
//!
//! The reference constants are quoted as 6-decimal truncations (for example
//! `Ψ′_0.7(0.390335) = 0.0270696…` is quoted as `0.027069`), so truncation is
//! the default. Nearest rounding is available as an option.

use serde_json::{Number, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Rounding {
    /// Drop digits past the last place (toward zero).
    #[default]
    Truncate,
    /// Round half away from zero.
    Nearest,
}

/// How numbers are rendered in every output format.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NumFormat {
    pub precision: usize,
    pub rounding: Rounding,
}

impl Default for NumFormat {
    fn default() -> Self {
        NumFormat {
            precision: 6,
            rounding: Rounding::Truncate,
        }
    }
}

impl NumFormat {
    pub fn new(precision: usize, rounding: Rounding) -> Self {
        NumFormat {
            precision,
            rounding,
        }
    }

    /// Renders `v` with exactly `precision` decimals.
    pub fn render(&self, v: f64) -> String {
        if !v.is_finite() {
            return v.to_string();
        }
        let s = match self.rounding {
            Rounding::Nearest => format!("{:.*}", self.precision, v),
            Rounding::Truncate => {
                // cut the shortest round-trip decimal, so 0.35 stays 0.350000
                let full = v.to_string();
                let (int, frac) = full.split_once('.').unwrap_or((&full, ""));
                if self.precision == 0 {
                    int.to_string()
                } else {
                    let mut frac: String = frac.chars().take(self.precision).collect();
                    while frac.len() < self.precision {
                        frac.push('0');
                    }
                    format!("{int}.{frac}")
                }
            }
        };
        normalize_negative_zero(s)
    }

    /// The rendered value as a JSON number, so JSON and text carry the same digits.
    pub fn json(&self, v: f64) -> Value {
        let s = self.render(v);
        match s.parse::<f64>().ok().and_then(Number::from_f64) {
            Some(n) => Value::Number(n),
            None => Value::String(s),
        }
    }
}

fn normalize_negative_zero(s: String) -> String {
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s[1..].to_string()
    } else {
        s
    }
}
