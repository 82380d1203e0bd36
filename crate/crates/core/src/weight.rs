use serde::{Deserialize, Serialize};

/// Vertex weight `d_i`: short root (1) or long root (2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Weight {
    One = 1,
    Two = 2,
}

impl Weight {
    pub fn d(self) -> i64 {
        self as i64
    }

    pub fn gcd(self, other: Weight) -> i64 {
        if self == Weight::Two && other == Weight::Two {
            2
        } else {
            1
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("vertex weight must be 1 or 2, got {0}")]
pub struct BadWeight(pub u8);

impl TryFrom<u8> for Weight {
    type Error = BadWeight;
    fn try_from(v: u8) -> Result<Self, BadWeight> {
        match v {
            1 => Ok(Weight::One),
            2 => Ok(Weight::Two),
            _ => Err(BadWeight(v)),
        }
    }
}

impl From<Weight> for u8 {
    fn from(w: Weight) -> u8 {
        w as u8
    }
}
