use std::cmp::Ordering;
use std::fmt;

use crate::operators::Interpretation;

use super::LevelMapping;

/// A value of `d_l` or `ρ`: zero, or the symbol `2^-n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LevelDistance {
    Zero,
    /// `2^-n`
    Power(u32),
}

impl LevelDistance {
    pub fn is_zero(self) -> bool {
        self == LevelDistance::Zero
    }

    pub fn to_f64(self) -> f64 {
        match self {
            LevelDistance::Zero => 0.0,
            LevelDistance::Power(n) => 0.5f64.powi(n as i32),
        }
    }
}

impl Ord for LevelDistance {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (LevelDistance::Zero, LevelDistance::Zero) => Ordering::Equal,
            (LevelDistance::Zero, _) => Ordering::Less,
            (_, LevelDistance::Zero) => Ordering::Greater,
            (LevelDistance::Power(a), LevelDistance::Power(b)) => b.cmp(a),
        }
    }
}

impl PartialOrd for LevelDistance {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for LevelDistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LevelDistance::Zero => f.write_str("0"),
            LevelDistance::Power(n) => write!(f, "2^-{n}"),
        }
    }
}

/// `2^-β` with `β` the least level of an atom on which `i` and `j` disagree.
pub fn dl_distance(i: &Interpretation, j: &Interpretation, l: &LevelMapping) -> LevelDistance {
    i.symmetric_difference(j)
        .map(|a| l.level(a))
        .min()
        .map_or(LevelDistance::Zero, LevelDistance::Power)
}

/// `ρ(j, k) = max(d_l(j, anchor), d_l(anchor, k))`. Not zero on the diagonal
/// unless the point is the anchor itself.
pub fn rho_distance(
    j: &Interpretation,
    k: &Interpretation,
    anchor: &Interpretation,
    l: &LevelMapping,
) -> LevelDistance {
    dl_distance(j, anchor, l).max(dl_distance(anchor, k, l))
}
