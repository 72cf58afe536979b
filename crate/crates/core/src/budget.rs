use num_bigint::BigUint;

use crate::error::{Error, Result};

/// Magnitude and work limits. The digit cap distinguishes desk-representable
/// quantities from full-scale-only ones; the step cap bounds how many
/// partition-interval iterations a single call may perform.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Maximum decimal digits an integer may have.
    pub digit_cap: usize,
    /// Maximum recursion/iteration steps per top-level call.
    pub step_cap: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            digit_cap: 2000,
            step_cap: 1 << 22,
        }
    }
}

impl Budget {
    pub fn with_digit_cap(digit_cap: usize) -> Self {
        Budget {
            digit_cap,
            ..Budget::default()
        }
    }

    /// Bit budget implied by the decimal digit cap.
    pub fn bit_cap(&self) -> u64 {
        // ceil(digits * log2(10)); 3.322 in fixed point, rounded up.
        (self.digit_cap as u64) * 3322 / 1000 + 2
    }

    pub fn check_magnitude(&self, n: &BigUint, what: &str) -> Result<()> {
        if n.bits() > self.bit_cap() {
            Err(Error::budget(format!("{what}: {} bits > cap", n.bits())))
        } else {
            Ok(())
        }
    }

    /// Charge `steps` against a running counter.
    pub fn charge(&self, counter: &mut u64, steps: u64, what: &str) -> Result<()> {
        *counter = counter.saturating_add(steps);
        if *counter > self.step_cap {
            Err(Error::budget(format!("{what}: step budget exhausted")))
        } else {
            Ok(())
        }
    }
}
