use serde::{Deserialize, Serialize};

use super::{multiplicity, ValueMatrix};
use crate::error::{Error, Result};
use crate::exact::{
    generic_point, normalize_direction, nullspace, AffineFunctional, AffineSubspace, Rat, RatMatrix,
};
use crate::sequence::{InfinitudeRelation, StepSequence};

/// Coefficients making the chosen columns take one common value `gamma`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Collapse {
    pub alpha: Vec<Rat>,
    pub gamma: Rat,
}

/// Finds `α ≠ 0` and `γ` with `α·c_j = γ` for every chosen column `c_j`.
///
/// Such a pair exists whenever at most `m` columns are chosen: the system in
/// `(α, γ)` has more unknowns than equations, and a kernel vector with `α = 0`
/// would force `γ = 0`.
pub fn collapse(m: &ValueMatrix, cols: &[usize]) -> Result<Collapse> {
    if cols.is_empty() || cols.len() > m.rows() {
        return Err(Error::Shape(format!(
            "collapse needs 1..={} columns, got {}",
            m.rows(),
            cols.len()
        )));
    }
    if let Some(&j) = cols.iter().find(|&&j| j >= m.cols()) {
        return Err(Error::Shape(format!("column {j} out of range")));
    }
    let rows: Vec<Vec<Rat>> = cols
        .iter()
        .map(|&j| {
            let mut r = m.matrix().column(j);
            r.push(-Rat::one());
            r
        })
        .collect();
    let kernel = nullspace(&RatMatrix::from_rows(rows)?);
    let v = normalize_direction(kernel.first().expect("more unknowns than equations"));
    let (alpha, gamma) = v.split_at(m.rows());
    Ok(Collapse {
        alpha: alpha.to_vec(),
        gamma: gamma[0].clone(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RefuteMode {
    /// All columns separated: `μ = N > n + d`.
    Separate,
    /// The listed columns collapsed to one value.
    Collapse { columns: Vec<usize>, gamma: Rat },
}

/// A direction whose multiplicity lies outside `[n, n+d]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Refutation {
    pub alpha: Vec<Rat>,
    pub multiplicity: usize,
    pub mode: RefuteMode,
}

/// Certifies that the span of `m` is not contained in `L(n) ∪ … ∪ L(n+d)`.
pub fn refute_interval(m: &ValueMatrix, n: usize, d: usize) -> Result<Refutation> {
    if n < 2 {
        return Err(Error::Degenerate(format!("n = {n}, need n ≥ 2")));
    }
    if m.rows() < d + 2 {
        return Err(Error::TooFewRows {
            need: d + 2,
            got: m.rows(),
        });
    }
    m.require_canonical()?;
    let big_n = m.cols();
    let (alpha, mode) = if big_n > n + d {
        let cols = m.columns();
        let avoid: Vec<AffineFunctional> = (0..big_n)
            .flat_map(|a| (a + 1..big_n).map(move |b| (a, b)))
            .map(|(a, b)| {
                AffineFunctional::linear(cols[a].iter().zip(&cols[b]).map(|(x, y)| x - y).collect())
            })
            .collect();
        let alpha = generic_point(&AffineSubspace::whole(m.rows()), &avoid)?;
        (normalize_direction(&alpha), RefuteMode::Separate)
    } else {
        let columns: Vec<usize> = (0..big_n.min(d + 2)).collect();
        let c = collapse(m, &columns)?;
        (
            c.alpha,
            RefuteMode::Collapse {
                columns,
                gamma: c.gamma,
            },
        )
    };
    let multiplicity = multiplicity(m, &alpha)?;
    Ok(Refutation {
        alpha,
        multiplicity,
        mode,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Nesting {
    /// `parent[j]` is the unique left atom met by right atom `j`.
    Nested { parent: Vec<usize> },
    /// Right atoms meeting two or more left atoms, with those left atoms.
    Counterexample { offending: Vec<(usize, Vec<usize>)> },
}

/// Whether every right atom lies, up to a finite set, inside one left atom.
pub fn nesting_check(rel: &InfinitudeRelation) -> Nesting {
    let mut parent = Vec::with_capacity(rel.right().len());
    let mut offending = Vec::new();
    for j in 0..rel.right().len() {
        let lefts = rel.meets_of_right(j);
        if lefts.len() == 1 {
            parent.push(lefts[0]);
        } else {
            offending.push((j, lefts));
        }
    }
    if offending.is_empty() {
        Nesting::Nested { parent }
    } else {
        Nesting::Counterexample { offending }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Radius {
    Finite(Rat),
    Infinite,
}

impl Radius {
    /// Whether `v < self`.
    pub fn exceeds(&self, v: &Rat) -> bool {
        match self {
            Radius::Finite(r) => v < r,
            Radius::Infinite => true,
        }
    }
}

/// Half the smallest gap between accumulation points.
pub fn separation_radius(x: &StepSequence) -> Radius {
    let mut vals = x.values().to_vec();
    vals.sort();
    vals.windows(2)
        .map(|w| &w[1] - &w[0])
        .min()
        .map_or(Radius::Infinite, |g| Radius::Finite(g / Rat::int(2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::sequence::{combine, SymbolicPartition};

    #[test]
    fn collapse_examples() {
        let m = ValueMatrix::from_ints(&[&[1, 2, 3], &[4, 5, 7]]).unwrap();
        let c = collapse(&m, &[0, 1]).unwrap();
        assert_eq!(c.alpha, vec![Rat::int(1), Rat::int(-1)]);
        assert_eq!(c.gamma, Rat::int(-3));
        assert_eq!(multiplicity(&m, &c.alpha).unwrap(), 2);

        let m = ValueMatrix::from_ints(&[&[1, 1], &[2, 3]]).unwrap();
        let c = collapse(&m, &[0, 1]).unwrap();
        let v = m.combine_values(&c.alpha).unwrap();
        assert_eq!(v[0], v[1]);
        assert_eq!(v[0], c.gamma);

        let m = ValueMatrix::from_ints(&[&[0, 0], &[1, 1]]).unwrap();
        let c = collapse(&m, &[0, 1]).unwrap();
        assert_eq!(c.alpha, vec![Rat::one(), Rat::zero()]);
        assert_eq!(c.gamma, Rat::zero());
    }

    #[test]
    fn collapse_rejects_too_many_columns() {
        let m = ValueMatrix::from_ints(&[&[1, 2, 3]]).unwrap();
        assert_eq!(collapse(&m, &[0, 1]).unwrap_err().code(), "shape");
    }

    #[test]
    fn refute_examples() {
        let m = ValueMatrix::from_ints(&[&[0, 1], &[1, 0]]).unwrap();
        let r = refute_interval(&m, 2, 0).unwrap();
        assert_eq!(r.alpha, vec![Rat::one(), Rat::one()]);
        assert_eq!(r.multiplicity, 1);

        let m = ValueMatrix::from_ints(&[&[0, 1, 0], &[0, 0, 1]]).unwrap();
        let r = refute_interval(&m, 2, 0).unwrap();
        assert_eq!(r.multiplicity, 3);
        assert_eq!(r.mode, RefuteMode::Separate);

        let m = ValueMatrix::from_ints(&[&[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]).unwrap();
        let r = refute_interval(&m, 3, 1).unwrap();
        assert!(r.multiplicity <= 2);

        assert_eq!(refute_interval(&m, 3, 2).unwrap_err().code(), "too-few-rows");
    }

    #[test]
    fn nesting_examples() {
        let ids = |p: &str, n: usize| SymbolicPartition::numbered(p, n).ids();
        let rel = InfinitudeRelation::new(ids("S", 2), ids("T", 3), [(0, 0), (0, 1), (1, 2)]).unwrap();
        assert_eq!(nesting_check(&rel), Nesting::Nested { parent: vec![0, 0, 1] });
        let rel = InfinitudeRelation::new(ids("S", 2), ids("T", 1), [(0, 0), (1, 0)]).unwrap();
        assert_eq!(
            nesting_check(&rel),
            Nesting::Counterexample { offending: vec![(0, vec![0, 1])] }
        );
        let rel = InfinitudeRelation::full(
            &SymbolicPartition::numbered("S", 2),
            &SymbolicPartition::numbered("T", 3),
        );
        match nesting_check(&rel) {
            Nesting::Counterexample { offending } => assert_eq!(offending.len(), 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn radius_examples() {
        let x = StepSequence::from_values(vec![Rat::int(0), Rat::int(1), Rat::int(5)]).unwrap();
        assert_eq!(separation_radius(&x), Radius::Finite(rat(1, 2)));
        let x = StepSequence::from_values(vec![Rat::int(7)]).unwrap();
        assert_eq!(separation_radius(&x), Radius::Infinite);

        let x = StepSequence::from_values(vec![Rat::int(0), Rat::int(10)]).unwrap();
        let y = StepSequence::new(
            SymbolicPartition::numbered("T", 2),
            vec![Rat::int(0), Rat::int(1)],
        )
        .unwrap();
        assert!(separation_radius(&x).exceeds(&y.sup_value()));
        let z = combine(&[Rat::one(), Rat::one()], &[x, y], &[]).unwrap();
        assert_eq!(z.len(), 4);
    }
}
