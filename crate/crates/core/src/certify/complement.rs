use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::ComplexFrame;
use crate::linalg::{real_rank, DEFAULT_RANK_TOL};

/// Largest frame accepted by the exhaustive partition search.
pub const COMPLEMENT_LIMIT: usize = 30;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplementResult {
    pub holds: bool,
    /// First failing bipartition: `true` marks the side not containing `f_1`.
    pub failing_partition: Option<Vec<bool>>,
}

/// Complement property of a real frame: for every split into two parts, one
/// part spans `R^n`. For real frames this is equivalent to phase
/// retrievability.
///
/// Partitions are enumerated with `f_1` pinned to the unflagged side, masks
/// in increasing order starting from the empty flagged side, stopping at the
/// first failure.
pub fn complement_property(fr: &ComplexFrame) -> Result<ComplementResult> {
    if fr.vectors().iter().any(|v| v.iter().any(|c| c.im != 0.0)) {
        return Err(Error::NotRealFrame);
    }
    let m = fr.m();
    if m > COMPLEMENT_LIMIT {
        return Err(Error::TooLarge {
            m,
            limit: COMPLEMENT_LIMIT,
        });
    }
    let n = fr.n();
    let real: Vec<DVector<f64>> = fr
        .vectors()
        .iter()
        .map(|v| DVector::from_iterator(n, v.iter().map(|c| c.re)))
        .collect();

    let spans = |flagged: bool, mask: u64| {
        let cols: Vec<&DVector<f64>> = (0..m)
            .filter(|&k| in_flagged(mask, k) == flagged)
            .map(|k| &real[k])
            .collect();
        cols.len() >= n && real_rank(n, &cols, DEFAULT_RANK_TOL) == n
    };

    for mask in 0..(1u64 << (m - 1)) {
        if !spans(false, mask) && !spans(true, mask) {
            let partition = (0..m).map(|k| in_flagged(mask, k)).collect();
            return Ok(ComplementResult {
                holds: false,
                failing_partition: Some(partition),
            });
        }
    }
    Ok(ComplementResult {
        holds: true,
        failing_partition: None,
    })
}

// bit k-1 of the mask flags vector k; vector 0 is never flagged
fn in_flagged(mask: u64, k: usize) -> bool {
    k > 0 && (mask >> (k - 1)) & 1 == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::r3_example;
    use crate::linalg::CVector;
    use num_complex::Complex64;

    #[test]
    fn r3_example_holds() {
        let res = complement_property(&r3_example()).unwrap();
        assert!(res.holds);
        assert!(res.failing_partition.is_none());
    }

    #[test]
    fn first_five_fail() {
        let sub = r3_example().select(&[0, 1, 2, 3, 4]).unwrap();
        let res = complement_property(&sub).unwrap();
        assert!(!res.holds);
        assert_eq!(res.failing_partition.unwrap().len(), 5);
    }

    #[test]
    fn orthonormal_basis_fails() {
        for n in 2..6 {
            let rows: Vec<Vec<f64>> = (0..n)
                .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
                .collect();
            let fr = ComplexFrame::real(n, &rows).unwrap();
            assert!(!complement_property(&fr).unwrap().holds);
        }
    }

    #[test]
    fn complex_entries_rejected() {
        let fr = ComplexFrame::new(1, vec![CVector::from_vec(vec![Complex64::new(0.0, 1.0)])]).unwrap();
        assert!(matches!(complement_property(&fr), Err(Error::NotRealFrame)));
    }

    #[test]
    fn too_many_vectors_rejected() {
        let rows = vec![vec![1.0]; COMPLEMENT_LIMIT + 1];
        let fr = ComplexFrame::real(1, &rows).unwrap();
        assert!(matches!(complement_property(&fr), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn single_nonzero_scalar_is_retrievable_in_r1() {
        let fr = ComplexFrame::real(1, &[vec![2.0]]).unwrap();
        assert!(complement_property(&fr).unwrap().holds);
        let zero = ComplexFrame::real(1, &[vec![0.0]]).unwrap();
        assert!(!complement_property(&zero).unwrap().holds);
    }
}
