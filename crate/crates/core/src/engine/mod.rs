//! Value matrices of finite-dimensional spans and the multiplicity of their
//! linear combinations.

mod profile;
mod refute;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{Rat, RatMatrix};
use crate::sequence::{canonicalize, InfinitudeRelation, StepSequence, SymbolicPartition};

pub use profile::{
    pattern_feasible, profile, profile_with_cap, sample_profile, CoincidencePattern,
    MultiplicityProfile, DEFAULT_CAP,
};
pub use refute::{
    collapse, nesting_check, refute_interval, separation_radius, Collapse, Nesting, Radius,
    Refutation, RefuteMode,
};

/// `m × N` matrix whose column `j` holds the values of the `m` basis
/// sequences on atom `j` of a common partition.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ValueMatrix(RatMatrix);

impl ValueMatrix {
    pub fn new(m: RatMatrix) -> ValueMatrix {
        ValueMatrix(m)
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<ValueMatrix> {
        RatMatrix::from_ints(rows).map(ValueMatrix)
    }

    pub fn from_columns(cols: &[Vec<Rat>]) -> Result<ValueMatrix> {
        RatMatrix::from_columns(cols).map(ValueMatrix)
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.0
    }

    pub fn rows(&self) -> usize {
        self.0.rows()
    }

    pub fn cols(&self) -> usize {
        self.0.cols()
    }

    pub fn columns(&self) -> Vec<Vec<Rat>> {
        self.0.columns()
    }

    /// Whether the columns are pairwise distinct vectors.
    pub fn has_canonical_columns(&self) -> bool {
        let cols = self.columns();
        cols.iter().collect::<BTreeSet<_>>().len() == cols.len()
    }

    pub fn require_canonical(&self) -> Result<()> {
        if self.has_canonical_columns() {
            Ok(())
        } else {
            Err(Error::DuplicateColumns)
        }
    }

    /// Values `αᵀM` of the combination `Σ αᵢ·rowᵢ` on each atom.
    pub fn combine_values(&self, alpha: &[Rat]) -> Result<Vec<Rat>> {
        self.0.vec_mul(alpha)
    }

    /// The combination `Σ αᵢ·rowᵢ` as a canonical step sequence over atoms `C1, …, CN`.
    pub fn combination(&self, alpha: &[Rat]) -> Result<StepSequence> {
        let values = self.combine_values(alpha)?;
        canonicalize(SymbolicPartition::numbered("C", self.cols()), values)
    }

    /// Row `i` as a canonical step sequence.
    pub fn row_sequence(&self, i: usize) -> StepSequence {
        canonicalize(
            SymbolicPartition::numbered("C", self.cols()),
            self.0.row(i).to_vec(),
        )
        .expect("matrix has at least one column")
    }

    /// Which value classes of rows `i` and `j` share an atom.
    pub fn row_relation(&self, i: usize, j: usize) -> InfinitudeRelation {
        let x = self.row_sequence(i);
        let y = self.row_sequence(j);
        let pos = |s: &StepSequence, v: &Rat| {
            s.values().iter().position(|w| w == v).expect("value present")
        };
        let pairs: Vec<(usize, usize)> = (0..self.cols())
            .map(|c| (pos(&x, self.0.get(i, c)), pos(&y, self.0.get(j, c))))
            .collect();
        InfinitudeRelation::new(x.partition().ids(), y.partition().ids(), pairs)
            .expect("every value class occurs in some column")
    }
}

/// Number of distinct entries of `αᵀM`.
pub fn multiplicity(m: &ValueMatrix, alpha: &[Rat]) -> Result<usize> {
    if alpha.len() != m.rows() {
        return Err(Error::Shape(format!(
            "direction of length {} for {} rows",
            alpha.len(),
            m.rows()
        )));
    }
    if alpha.iter().all(Rat::is_zero) {
        return Err(Error::ZeroDirection);
    }
    let values = m.combine_values(alpha)?;
    Ok(values.iter().collect::<BTreeSet<_>>().len())
}

/// Merges equal columns, keeping first-occurrence order.
///
/// Returns the merged matrix and, for each kept column, the original indices it absorbed.
pub fn merge_columns(m: &ValueMatrix) -> (ValueMatrix, Vec<Vec<usize>>) {
    let mut index: BTreeMap<Vec<Rat>, usize> = BTreeMap::new();
    let mut kept: Vec<Vec<Rat>> = Vec::new();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (j, col) in m.columns().into_iter().enumerate() {
        match index.get(&col) {
            Some(&g) => groups[g].push(j),
            None => {
                index.insert(col.clone(), kept.len());
                kept.push(col);
                groups.push(vec![j]);
            }
        }
    }
    let merged = ValueMatrix::from_columns(&kept).expect("nonempty columns");
    (merged, groups)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiplicity_examples() {
        let m = ValueMatrix::from_ints(&[&[0, 1, 0], &[0, 0, 1]]).unwrap();
        assert_eq!(multiplicity(&m, &[Rat::one(), Rat::one()]).unwrap(), 2);
        let m = ValueMatrix::from_ints(&[&[1, 2, 3]]).unwrap();
        assert_eq!(multiplicity(&m, &[Rat::int(5)]).unwrap(), 3);
        let m = ValueMatrix::from_ints(&[&[0, 1], &[0, 1]]).unwrap();
        assert_eq!(multiplicity(&m, &[Rat::one(), Rat::int(-1)]).unwrap(), 1);
        assert_eq!(
            multiplicity(&m, &[Rat::zero(), Rat::zero()]).unwrap_err().code(),
            "zero-direction"
        );
        assert_eq!(multiplicity(&m, &[Rat::one()]).unwrap_err().code(), "shape");
    }

    #[test]
    fn merging_duplicate_columns() {
        let m = ValueMatrix::from_ints(&[&[1, 2, 1, 3], &[0, 0, 0, 1]]).unwrap();
        assert!(!m.has_canonical_columns());
        let (merged, groups) = merge_columns(&m);
        assert_eq!(merged, ValueMatrix::from_ints(&[&[1, 2, 3], &[0, 0, 1]]).unwrap());
        assert_eq!(groups, vec![vec![0, 2], vec![1], vec![3]]);
        assert!(merged.has_canonical_columns());
    }

    #[test]
    fn combination_matches_sequence_algebra() {
        let m = ValueMatrix::from_ints(&[&[0, 1, 0, 1], &[0, 0, 2, 2]]).unwrap();
        let x = m.row_sequence(0);
        let y = m.row_sequence(1);
        let rel = m.row_relation(0, 1);
        let alpha = [Rat::int(3), Rat::int(-1)];
        let via_seq = crate::sequence::combine(&alpha, &[x, y], &[Some(rel)]).unwrap();
        let direct = m.combination(&alpha).unwrap();
        assert_eq!(via_seq.accumulation_points(), direct.accumulation_points());
        assert_eq!(direct.len(), multiplicity(&m, &alpha).unwrap());
    }

    #[test]
    fn json_is_plain_matrix_form() {
        let m = ValueMatrix::from_ints(&[&[1, 2, 3]]).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"{"rows":1,"cols":3,"entries":[["1","2","3"]]}"#);
    }
}
