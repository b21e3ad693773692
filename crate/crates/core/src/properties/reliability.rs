use serde::{Deserialize, Serialize};

use crate::distribution::{Params, Pngkme};

/// Strength `X₁` and stress `X₂` for `R = P(X₂ < X₁)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReliabilityPair {
    pub strength: Params,
    pub stress: Params,
}

/// Which of the two laws sit on the `λ = 1` branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReliabilityCase {
    /// Case 1: `λ₁ ≠ 1`, `λ₂ ≠ 1`.
    BothTransformed,
    /// Case 2: `λ₁ = 1`, `λ₂ ≠ 1`.
    StrengthExponentiated,
    /// Case 3: `λ₁ ≠ 1`, `λ₂ = 1`.
    StressExponentiated,
    /// Case 4: `λ₁ = λ₂ = 1`, with free `α₁, α₂, β₁, β₂`.
    BothExponentiated,
}

impl ReliabilityCase {
    pub fn number(self) -> u8 {
        match self {
            ReliabilityCase::BothTransformed => 1,
            ReliabilityCase::StrengthExponentiated => 2,
            ReliabilityCase::StressExponentiated => 3,
            ReliabilityCase::BothExponentiated => 4,
        }
    }
}

impl ReliabilityPair {
    pub fn new(strength: Params, stress: Params) -> Self {
        ReliabilityPair { strength, stress }
    }

    pub fn case(&self) -> ReliabilityCase {
        let one = |p: &Params| Pngkme::new(*p).log_lambda() == 0.0;
        match (one(&self.strength), one(&self.stress)) {
            (false, false) => ReliabilityCase::BothTransformed,
            (true, false) => ReliabilityCase::StrengthExponentiated,
            (false, true) => ReliabilityCase::StressExponentiated,
            (true, true) => ReliabilityCase::BothExponentiated,
        }
    }

    pub fn swapped(&self) -> Self {
        ReliabilityPair { strength: self.stress, stress: self.strength }
    }
}
