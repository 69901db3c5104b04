use serde::{Deserialize, Serialize};

/// Cardinality landmarks for phase retrieval in `C^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CardinalityBounds {
    pub n: usize,
    /// Necessary lower bound `4n - 2 - 2 beta + c(n, beta)` where `beta` is
    /// the number of ones in the binary expansion of `n - 1`.
    pub hmw_lower: usize,
    pub two_n: usize,
    /// The conjectured critical cardinality `4n - 4`.
    pub conjectured_critical: usize,
    /// Above this, generic frames are retrievable.
    pub generic_upper: usize,
}

pub fn hmw_lower_bound(n: usize) -> CardinalityBounds {
    assert!(n >= 1, "dimension must be positive");
    let beta = (n - 1).count_ones() as usize;
    let correction = match (n % 2 == 1, beta % 4) {
        (true, 3) => 2,
        (true, 2) => 1,
        _ => 0,
    };
    CardinalityBounds {
        n,
        hmw_lower: 4 * n - 2 - 2 * beta + correction,
        two_n: 2 * n,
        conjectured_critical: (4 * n).saturating_sub(4),
        generic_upper: 4 * n - 2,
    }
}

/// True when `m` vectors are too few to be phase retrievable in `C^n`
/// (`m < 2n`). In `C^1` a single nonzero vector already suffices, so the gate
/// only applies from `n = 2` on.
pub fn cardinality_precheck(n: usize, m: usize) -> bool {
    n >= 2 && m < 2 * n
}
