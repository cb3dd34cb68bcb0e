/// Two-sided 98% standard normal quantile.
pub const Z_98: f64 = 2.326_347_874_040_841;

/// Proportion estimate with a normal-approximation binomial interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub n: u64,
}

impl Estimate {
    /// p̂ ± z √(p̂(1-p̂)/n), clipped to [0, 1].
    pub fn from_counts(successes: u64, n: u64, z: f64) -> Self {
        if n == 0 {
            return Estimate {
                value: 0.0,
                ci_low: 0.0,
                ci_high: 1.0,
                n,
            };
        }
        let p = successes as f64 / n as f64;
        let half = z * (p * (1.0 - p) / n as f64).sqrt();
        Estimate {
            value: p,
            ci_low: (p - half).max(0.0),
            ci_high: (p + half).min(1.0),
            n,
        }
    }

    pub fn half_width(&self) -> f64 {
        0.5 * (self.ci_high - self.ci_low)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.ci_low <= x && x <= self.ci_high
    }
}
