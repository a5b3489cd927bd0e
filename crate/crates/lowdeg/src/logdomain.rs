//! Sign/log-magnitude scalars for overflow-free bound evaluation.
//!
//! The closed-form correlation bounds contain factors like `(dn)^d` with
//! `n` up to `10^6` and `d` up to 100, which overflow `f64` long before the
//! final (often tiny) bound value does. `LogNum` carries a sign and the
//! natural log of the magnitude, with exact handling of zero and infinity,
//! and stable log-sum-exp addition for same-sign accumulation.

/// A real number stored as `sign * exp(ln_mag)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogNum {
    /// -1, 0, or +1.
    pub sign: i8,
    /// Natural log of |value|; `f64::NEG_INFINITY` when sign == 0.
    pub ln_mag: f64,
}

impl LogNum {
    pub const ZERO: LogNum = LogNum {
        sign: 0,
        ln_mag: f64::NEG_INFINITY,
    };
    pub const ONE: LogNum = LogNum { sign: 1, ln_mag: 0.0 };
    pub const INFINITY: LogNum = LogNum {
        sign: 1,
        ln_mag: f64::INFINITY,
    };

    pub fn from_f64(x: f64) -> LogNum {
        if x == 0.0 {
            LogNum::ZERO
        } else if x > 0.0 {
            LogNum { sign: 1, ln_mag: x.ln() }
        } else {
            LogNum {
                sign: -1,
                ln_mag: (-x).ln(),
            }
        }
    }

    /// `exp(ln_x)` as a positive LogNum.
    pub fn from_ln(ln_x: f64) -> LogNum {
        if ln_x == f64::NEG_INFINITY {
            LogNum::ZERO
        } else {
            LogNum { sign: 1, ln_mag: ln_x }
        }
    }

    pub fn to_f64(self) -> f64 {
        match self.sign {
            0 => 0.0,
            1 => self.ln_mag.exp(),
            _ => -self.ln_mag.exp(),
        }
    }

    pub fn is_zero(self) -> bool {
        self.sign == 0
    }

    pub fn is_infinite(self) -> bool {
        self.sign != 0 && self.ln_mag == f64::INFINITY
    }

    /// `self^k` for integer `k >= 0`.
    pub fn powi(self, k: u32) -> LogNum {
        if k == 0 {
            return LogNum::ONE;
        }
        if self.sign == 0 {
            return LogNum::ZERO;
        }
        let sign = if self.sign == 1 || k % 2 == 0 { 1 } else { -1 };
        LogNum {
            sign,
            ln_mag: self.ln_mag * k as f64,
        }
    }

    pub fn mul(self, other: LogNum) -> LogNum {
        if self.sign == 0 || other.sign == 0 {
            return LogNum::ZERO;
        }
        LogNum {
            sign: self.sign * other.sign,
            ln_mag: self.ln_mag + other.ln_mag,
        }
    }

    pub fn div(self, other: LogNum) -> LogNum {
        assert!(other.sign != 0, "division by zero LogNum");
        if self.sign == 0 {
            return LogNum::ZERO;
        }
        LogNum {
            sign: self.sign * other.sign,
            ln_mag: self.ln_mag - other.ln_mag,
        }
    }

    pub fn add(self, other: LogNum) -> LogNum {
        if self.sign == 0 {
            return other;
        }
        if other.sign == 0 {
            return self;
        }
        let (hi, lo) = if self.ln_mag >= other.ln_mag {
            (self, other)
        } else {
            (other, self)
        };
        if hi.sign == lo.sign {
            LogNum {
                sign: hi.sign,
                ln_mag: hi.ln_mag + (lo.ln_mag - hi.ln_mag).exp().ln_1p(),
            }
        } else {
            let diff = (lo.ln_mag - hi.ln_mag).exp();
            if diff >= 1.0 {
                // equal magnitudes, opposite signs
                return LogNum::ZERO;
            }
            LogNum {
                sign: hi.sign,
                ln_mag: hi.ln_mag + (-diff).ln_1p(),
            }
        }
    }

    pub fn sqrt(self) -> LogNum {
        assert!(self.sign >= 0, "sqrt of negative LogNum");
        if self.sign == 0 {
            return LogNum::ZERO;
        }
        LogNum {
            sign: 1,
            ln_mag: self.ln_mag / 2.0,
        }
    }
}

/// Nonnegative log-domain accumulator: Σ exp(ln_terms), streamed.
#[derive(Debug, Clone, Copy)]
pub struct LogSum {
    acc: LogNum,
}

impl LogSum {
    pub fn new() -> LogSum {
        LogSum { acc: LogNum::ZERO }
    }

    pub fn add_ln(&mut self, ln_term: f64) {
        self.acc = self.acc.add(LogNum::from_ln(ln_term));
    }

    pub fn add(&mut self, term: LogNum) {
        assert!(term.sign >= 0, "LogSum accepts nonnegative terms");
        self.acc = self.acc.add(term);
    }

    pub fn ln_value(&self) -> f64 {
        self.acc.ln_mag
    }

    pub fn value(&self) -> f64 {
        self.acc.to_f64()
    }

    pub fn lognum(&self) -> LogNum {
        self.acc
    }
}

impl Default for LogSum {
    fn default() -> Self {
        Self::new()
    }
}
