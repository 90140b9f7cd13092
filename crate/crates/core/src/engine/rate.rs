use std::fmt;

use serde::{Deserialize, Serialize};

/// A count relative to the number of processed records.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rate {
    pub count: u64,
    pub total: u64,
}

impl Rate {
    /// Unrounded percentage; 0 for an empty denominator.
    pub fn pct(self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            100.0 * self.count as f64 / self.total as f64
        }
    }

    /// Display form: half-up to 2 decimals, or to 4 decimals for non-zero
    /// rates below 0.01%. Zero renders as `0`.
    pub fn display(self) -> String {
        if self.count == 0 || self.total == 0 {
            return "0".to_string();
        }
        // 100 * count / total < 0.01  <=>  10_000 * count < total
        let decimals = if 10_000 * u128::from(self.count) < u128::from(self.total) {
            4
        } else {
            2
        };
        round_pct(self.count, self.total, decimals)
    }
}

impl fmt::Display for Rate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}%", self.display())
    }
}

pub fn error_rate(error_count: u64, total: u64) -> Rate {
    Rate {
        count: error_count,
        total,
    }
}

/// `100 * count / total` rounded half-up to `decimals` places, computed in
/// integers so ties are exact.
pub fn round_pct(count: u64, total: u64, decimals: u32) -> String {
    if total == 0 {
        return format_fixed(0, decimals);
    }
    let scale = 10u128.pow(decimals + 2);
    let (num, den) = (u128::from(count) * scale, u128::from(total));
    let scaled = (2 * num + den) / (2 * den);
    format_fixed(scaled, decimals)
}

fn format_fixed(scaled: u128, decimals: u32) -> String {
    if decimals == 0 {
        return scaled.to_string();
    }
    let unit = 10u128.pow(decimals);
    format!(
        "{}.{:0width$}",
        scaled / unit,
        scaled % unit,
        width = decimals as usize
    )
}
