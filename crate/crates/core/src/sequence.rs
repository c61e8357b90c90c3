//! Symbolic bounded sequences modulo null sequences.
//!
//! A class with finitely many accumulation points is a step sequence: a
//! partition of ω into infinite atoms and one value per atom. Atoms are
//! symbolic; which intersections of two partitions are infinite is explicit
//! input ([`InfinitudeRelation`]), never computed.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::Rat;
use crate::lab::AtomLabel;

/// Separator used for the id of an atom obtained by merging atoms with equal values.
pub const MERGE_SEP: &str = "|";
/// Separator used for the id of a refined atom `S ∩ T`.
pub const MEET_SEP: &str = "&";

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Atom {
    pub id: String,
    /// Concrete realization inside ω, when the atom comes from the numeric lab.
    pub realization: Option<AtomLabel>,
}

impl Atom {
    pub fn new(id: impl Into<String>) -> Atom {
        Atom {
            id: id.into(),
            realization: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicPartition {
    atoms: Vec<Atom>,
}

impl SymbolicPartition {
    pub fn new(atoms: Vec<Atom>) -> Result<SymbolicPartition> {
        if atoms.is_empty() {
            return Err(Error::Empty("partition has no atoms".into()));
        }
        let mut seen = BTreeSet::new();
        for a in &atoms {
            if !seen.insert(a.id.as_str()) {
                return Err(Error::Shape(format!("duplicate atom id {:?}", a.id)));
            }
        }
        Ok(SymbolicPartition { atoms })
    }

    pub fn from_ids<S: Into<String>>(ids: impl IntoIterator<Item = S>) -> Result<SymbolicPartition> {
        SymbolicPartition::new(ids.into_iter().map(Atom::new).collect())
    }

    /// Atoms named `S1, …, Sn`.
    pub fn numbered(prefix: &str, n: usize) -> SymbolicPartition {
        SymbolicPartition {
            atoms: (1..=n).map(|i| Atom::new(format!("{prefix}{i}"))).collect(),
        }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn ids(&self) -> Vec<String> {
        self.atoms.iter().map(|a| a.id.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }
}

/// Canonical representative `ξ₁1_{S₁} + … + ξₙ1_{Sₙ}` with pairwise distinct values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepSequence {
    partition: SymbolicPartition,
    values: Vec<Rat>,
}

impl StepSequence {
    /// Wraps already-canonical data; fails if two atoms share a value.
    pub fn new(partition: SymbolicPartition, values: Vec<Rat>) -> Result<StepSequence> {
        if values.len() != partition.len() {
            return Err(Error::Shape(format!(
                "{} values for {} atoms",
                values.len(),
                partition.len()
            )));
        }
        let distinct: BTreeSet<&Rat> = values.iter().collect();
        if distinct.len() != values.len() {
            return Err(Error::NotCanonical);
        }
        Ok(StepSequence { partition, values })
    }

    /// Canonical sequence over atoms `S1, …, Sn`; values must be distinct.
    pub fn from_values(values: Vec<Rat>) -> Result<StepSequence> {
        if values.is_empty() {
            return Err(Error::Empty("no values".into()));
        }
        StepSequence::new(SymbolicPartition::numbered("S", values.len()), values)
    }

    /// The zero class: one atom covering ω with value 0.
    pub fn zero() -> StepSequence {
        StepSequence {
            partition: SymbolicPartition {
                atoms: vec![Atom::new("ω")],
            },
            values: vec![Rat::zero()],
        }
    }

    pub fn partition(&self) -> &SymbolicPartition {
        &self.partition
    }

    pub fn atoms(&self) -> &[Atom] {
        self.partition.atoms()
    }

    pub fn values(&self) -> &[Rat] {
        &self.values
    }

    /// Number of accumulation points, which is the number of atoms.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_convergent(&self) -> bool {
        self.values.len() == 1
    }

    pub fn accumulation_points(&self) -> BTreeSet<Rat> {
        self.values.iter().cloned().collect()
    }

    /// `max |ξᵢ|`, the norm of the class in ℓ∞/c₀.
    pub fn sup_value(&self) -> Rat {
        self.values
            .iter()
            .map(Rat::abs)
            .max()
            .unwrap_or_else(Rat::zero)
    }

    pub fn scale(&self, alpha: &Rat) -> StepSequence {
        if alpha.is_zero() {
            return canonicalize(
                self.partition.clone(),
                vec![Rat::zero(); self.values.len()],
            )
            .expect("nonempty partition");
        }
        StepSequence {
            partition: self.partition.clone(),
            values: self.values.iter().map(|v| v * alpha).collect(),
        }
    }
}

/// Merges atoms carrying equal values, keeping first-occurrence order.
pub fn canonicalize(partition: SymbolicPartition, values: Vec<Rat>) -> Result<StepSequence> {
    if partition.is_empty() {
        return Err(Error::Empty("partition has no atoms".into()));
    }
    if values.len() != partition.len() {
        return Err(Error::Shape(format!(
            "{} values for {} atoms",
            values.len(),
            partition.len()
        )));
    }
    let mut order: Vec<Rat> = Vec::new();
    let mut groups: BTreeMap<Rat, Vec<Atom>> = BTreeMap::new();
    for (atom, v) in partition.atoms.into_iter().zip(values) {
        let g = groups.entry(v.clone()).or_default();
        if g.is_empty() {
            order.push(v);
        }
        g.push(atom);
    }
    let mut atoms = Vec::with_capacity(order.len());
    for v in &order {
        let mut g = groups.remove(v).expect("group for value");
        let atom = if g.len() == 1 {
            g.pop().expect("one atom")
        } else {
            Atom::new(
                g.iter()
                    .map(|a| a.id.as_str())
                    .collect::<Vec<_>>()
                    .join(MERGE_SEP),
            )
        };
        atoms.push(atom);
    }
    Ok(StepSequence {
        partition: SymbolicPartition { atoms },
        values: order,
    })
}

/// Which intersections `Sᵢ ∩ Tⱼ` of a left and a right partition are infinite.
///
/// Pairs are 0-based `(left index, right index)`. Both partitions cover ω
/// with infinite atoms, so every atom on either side lies in some pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RelationJson", into = "RelationJson")]
pub struct InfinitudeRelation {
    left: Vec<String>,
    right: Vec<String>,
    pairs: BTreeSet<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct RelationJson {
    left: Vec<String>,
    right: Vec<String>,
    pairs: Vec<[usize; 2]>,
}

impl TryFrom<RelationJson> for InfinitudeRelation {
    type Error = Error;
    fn try_from(j: RelationJson) -> Result<Self> {
        InfinitudeRelation::new(
            j.left,
            j.right,
            j.pairs.into_iter().map(|[a, b]| (a, b)),
        )
    }
}

impl From<InfinitudeRelation> for RelationJson {
    fn from(r: InfinitudeRelation) -> Self {
        RelationJson {
            left: r.left,
            right: r.right,
            pairs: r.pairs.into_iter().map(|(a, b)| [a, b]).collect(),
        }
    }
}

impl InfinitudeRelation {
    pub fn new(
        left: Vec<String>,
        right: Vec<String>,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<InfinitudeRelation> {
        let pairs: BTreeSet<(usize, usize)> = pairs.into_iter().collect();
        if left.is_empty() || right.is_empty() {
            return Err(Error::BadRelation("a side has no atoms".into()));
        }
        if let Some(&(i, j)) = pairs
            .iter()
            .find(|(i, j)| *i >= left.len() || *j >= right.len())
        {
            return Err(Error::BadRelation(format!("pair ({i},{j}) out of range")));
        }
        if let Some(i) = (0..left.len()).find(|&i| !pairs.iter().any(|p| p.0 == i)) {
            return Err(Error::BadRelation(format!(
                "left atom {:?} meets no right atom",
                left[i]
            )));
        }
        if let Some(j) = (0..right.len()).find(|&j| !pairs.iter().any(|p| p.1 == j)) {
            return Err(Error::BadRelation(format!(
                "right atom {:?} meets no left atom",
                right[j]
            )));
        }
        Ok(InfinitudeRelation { left, right, pairs })
    }

    /// Generic position: every intersection is infinite.
    pub fn full(left: &SymbolicPartition, right: &SymbolicPartition) -> InfinitudeRelation {
        let pairs = (0..left.len())
            .flat_map(|i| (0..right.len()).map(move |j| (i, j)))
            .collect();
        InfinitudeRelation {
            left: left.ids(),
            right: right.ids(),
            pairs,
        }
    }

    /// A partition against itself: `Sᵢ ∩ Sⱼ` is infinite iff `i = j`.
    pub fn identity(p: &SymbolicPartition) -> InfinitudeRelation {
        InfinitudeRelation {
            left: p.ids(),
            right: p.ids(),
            pairs: (0..p.len()).map(|i| (i, i)).collect(),
        }
    }

    /// Right atom `j` lies (mod finite) inside left atom `parent[j]`.
    pub fn nested(
        left: &SymbolicPartition,
        right: &SymbolicPartition,
        parent: &[usize],
    ) -> Result<InfinitudeRelation> {
        if parent.len() != right.len() {
            return Err(Error::BadRelation(format!(
                "{} parents for {} right atoms",
                parent.len(),
                right.len()
            )));
        }
        InfinitudeRelation::new(
            left.ids(),
            right.ids(),
            parent.iter().enumerate().map(|(j, &i)| (i, j)),
        )
    }

    pub fn left(&self) -> &[String] {
        &self.left
    }

    pub fn right(&self) -> &[String] {
        &self.right
    }

    pub fn pairs(&self) -> &BTreeSet<(usize, usize)> {
        &self.pairs
    }

    /// Left atoms met infinitely by right atom `j`.
    pub fn meets_of_right(&self, j: usize) -> Vec<usize> {
        self.pairs
            .iter()
            .filter(|p| p.1 == j)
            .map(|p| p.0)
            .collect()
    }

    fn check_sides(&self, left: &[String], right: &[String]) -> Result<()> {
        if self.left != left {
            return Err(Error::BadRelation(format!(
                "left atoms {:?} do not match partition {:?}",
                self.left, left
            )));
        }
        if self.right != right {
            return Err(Error::BadRelation(format!(
                "right atoms {:?} do not match partition {:?}",
                self.right, right
            )));
        }
        Ok(())
    }
}

/// `Σ coeffs[i]·xs[i]` as a canonical step sequence.
///
/// Partitions are refined left to right: `rels[i]` relates the refinement of
/// `xs[0..=i]` (atom ids joined with `&`) to the partition of `xs[i+1]`.
/// `None`, or an empty `rels`, means generic position. Refined atoms not
/// declared infinite are dropped since they carry no accumulation point.
pub fn combine(
    coeffs: &[Rat],
    xs: &[StepSequence],
    rels: &[Option<InfinitudeRelation>],
) -> Result<StepSequence> {
    if coeffs.is_empty() || coeffs.len() != xs.len() {
        return Err(Error::Shape(format!(
            "{} coefficients for {} sequences",
            coeffs.len(),
            xs.len()
        )));
    }
    if !rels.is_empty() && rels.len() != xs.len() - 1 {
        return Err(Error::Shape(format!(
            "{} relations for {} sequences",
            rels.len(),
            xs.len()
        )));
    }
    let mut ids: Vec<String> = xs[0].partition.ids();
    let mut vals: Vec<Rat> = xs[0].values.iter().map(|v| v * &coeffs[0]).collect();
    for (step, (c, x)) in coeffs.iter().zip(xs).enumerate().skip(1) {
        let right = x.partition.ids();
        let pairs: Vec<(usize, usize)> = match rels.get(step - 1).and_then(Option::as_ref) {
            Some(rel) => {
                rel.check_sides(&ids, &right)?;
                rel.pairs.iter().copied().collect()
            }
            None => (0..ids.len())
                .flat_map(|i| (0..right.len()).map(move |j| (i, j)))
                .collect(),
        };
        let mut next_ids = Vec::with_capacity(pairs.len());
        let mut next_vals = Vec::with_capacity(pairs.len());
        for (i, j) in pairs {
            next_ids.push(format!("{}{MEET_SEP}{}", ids[i], right[j]));
            next_vals.push(&vals[i] + c * &x.values[j]);
        }
        ids = next_ids;
        vals = next_vals;
    }
    canonicalize(SymbolicPartition::from_ids(ids)?, vals)
}

/// Bounds on `|L_{αx+βy}|` for `x` with `k` and `y` with `n`
/// accumulation points and both coefficients nonzero: `⌈max{n/k, k/n}⌉ ..= kn`.
pub fn pair_bounds(k: usize, n: usize) -> (usize, usize) {
    let (lo, hi) = if k <= n { (k, n) } else { (n, k) };
    (hi.div_ceil(lo), k * n)
}

#[derive(Serialize, Deserialize)]
struct StepJson {
    atoms: Vec<String>,
    values: Vec<Rat>,
}

impl Serialize for StepSequence {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        StepJson {
            atoms: self.partition.ids(),
            values: self.values.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for StepSequence {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = StepJson::deserialize(d)?;
        let p = SymbolicPartition::from_ids(j.atoms).map_err(serde::de::Error::custom)?;
        StepSequence::new(p, j.values).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn seq(vals: &[i64]) -> StepSequence {
        StepSequence::from_values(vals.iter().map(|&v| Rat::int(v)).collect()).unwrap()
    }

    fn set(vals: &[i64]) -> BTreeSet<Rat> {
        vals.iter().map(|&v| Rat::int(v)).collect()
    }

    #[test]
    fn canonicalize_merges_equal_values() {
        let p = SymbolicPartition::from_ids(["S1", "S2", "S3"]).unwrap();
        let x = canonicalize(p, vec![Rat::int(1), Rat::int(1), Rat::int(2)]).unwrap();
        assert_eq!(x.len(), 2);
        assert_eq!(x.partition().ids(), vec!["S1|S2", "S3"]);
        assert_eq!(x.values(), &[Rat::int(1), Rat::int(2)]);
    }

    #[test]
    fn canonicalize_single_and_rational_forms() {
        let p = SymbolicPartition::from_ids(["S1"]).unwrap();
        let x = canonicalize(p, vec![Rat::zero()]).unwrap();
        assert!(x.is_convergent());
        let p = SymbolicPartition::from_ids(["S1", "S2"]).unwrap();
        let x = canonicalize(p, vec![rat(1, 2), rat(2, 4)]).unwrap();
        assert_eq!(x.values(), &[rat(1, 2)]);
    }

    #[test]
    fn canonicalize_empty_is_error() {
        assert_eq!(SymbolicPartition::new(vec![]).unwrap_err().code(), "empty");
    }

    #[test]
    fn canonicalize_is_idempotent() {
        let p = SymbolicPartition::numbered("A", 5);
        let x = canonicalize(p, [3, 1, 3, 2, 1].map(Rat::int).to_vec()).unwrap();
        let y = canonicalize(x.partition().clone(), x.values().to_vec()).unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn combine_generic_position() {
        let x = seq(&[0, 1]);
        let y = StepSequence::new(SymbolicPartition::numbered("T", 3), [0, 10, 20].map(Rat::int).to_vec()).unwrap();
        let z = combine(&[Rat::one(), Rat::one()], &[x, y], &[]).unwrap();
        assert_eq!(z.accumulation_points(), set(&[0, 1, 10, 11, 20, 21]));
        assert_eq!(z.len(), 6);
    }

    #[test]
    fn combine_with_zero_coefficient() {
        let x = seq(&[0, 1]);
        let y = StepSequence::new(SymbolicPartition::numbered("T", 3), [0, 10, 20].map(Rat::int).to_vec()).unwrap();
        let z = combine(&[Rat::one(), Rat::zero()], &[x.clone(), y], &[]).unwrap();
        assert_eq!(z.accumulation_points(), x.accumulation_points());
    }

    #[test]
    fn combine_x_minus_x_is_null() {
        let x = seq(&[0, 1, 5]);
        let rel = InfinitudeRelation::identity(x.partition());
        let z = combine(&[Rat::one(), Rat::int(-1)], &[x.clone(), x], &[Some(rel)]).unwrap();
        assert_eq!(z.values(), &[Rat::zero()]);
    }

    #[test]
    fn combine_checks_relation_sides() {
        let x = seq(&[0, 1]);
        let y = seq(&[0, 1]);
        let wrong = InfinitudeRelation::full(
            &SymbolicPartition::numbered("Q", 2),
            y.partition(),
        );
        let err = combine(&[Rat::one(), Rat::one()], &[x, y], &[Some(wrong)]).unwrap_err();
        assert_eq!(err.code(), "bad-relation");
    }

    #[test]
    fn combine_three_partitions_refines_iteratively() {
        let x = seq(&[0, 1]);
        let y = StepSequence::new(SymbolicPartition::numbered("T", 2), [0, 2].map(Rat::int).to_vec()).unwrap();
        let w = StepSequence::new(SymbolicPartition::numbered("U", 2), [0, 4].map(Rat::int).to_vec()).unwrap();
        let all = combine(&[Rat::one(), Rat::one(), Rat::one()], &[x.clone(), y.clone(), w.clone()], &[]).unwrap();
        assert_eq!(all.accumulation_points(), set(&[0, 1, 2, 3, 4, 5, 6, 7]));
        // x and y nested identically; w only meets the refined atom S1&T1 in its first atom.
        let rel_xy = InfinitudeRelation::new(x.partition().ids(), y.partition().ids(), [(0, 0), (1, 1)]).unwrap();
        let refined = vec!["S1&T1".to_string(), "S2&T2".to_string()];
        let rel_w = InfinitudeRelation::new(refined, w.partition().ids(), [(0, 0), (1, 0), (1, 1)]).unwrap();
        let z = combine(&[Rat::one(), Rat::one(), Rat::one()], &[x, y, w], &[Some(rel_xy), Some(rel_w)]).unwrap();
        assert_eq!(z.accumulation_points(), set(&[0, 3, 7]));
    }

    #[test]
    fn relation_cover_is_enforced() {
        let err = InfinitudeRelation::new(
            vec!["S1".into(), "S2".into()],
            vec!["T1".into()],
            [(0, 0)],
        )
        .unwrap_err();
        assert_eq!(err.code(), "bad-relation");
        assert!(InfinitudeRelation::new(vec!["S1".into()], vec!["T1".into()], [(0, 1)]).is_err());
    }

    #[test]
    fn relation_json_shape() {
        let r = InfinitudeRelation::new(
            vec!["S1".into(), "S2".into()],
            vec!["T1".into(), "T2".into(), "T3".into()],
            [(0, 0), (0, 1), (1, 2)],
        )
        .unwrap();
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(
            s,
            r#"{"left":["S1","S2"],"right":["T1","T2","T3"],"pairs":[[0,0],[0,1],[1,2]]}"#
        );
        assert_eq!(serde_json::from_str::<InfinitudeRelation>(&s).unwrap(), r);
        let bad = r#"{"left":["S1","S2"],"right":["T1"],"pairs":[[0,0]]}"#;
        assert!(serde_json::from_str::<InfinitudeRelation>(bad).is_err());
    }

    #[test]
    fn step_json_requires_canonical_values() {
        let x = seq(&[3, -1]);
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"atoms":["S1","S2"],"values":["3","-1"]}"#);
        assert_eq!(serde_json::from_str::<StepSequence>(&s).unwrap(), x);
        assert!(serde_json::from_str::<StepSequence>(r#"{"atoms":["a","b"],"values":["1","1"]}"#).is_err());
    }

    #[test]
    fn accumulation_points_examples() {
        assert_eq!(seq(&[3]).accumulation_points(), set(&[3]));
        assert_eq!(seq(&[-1, 0, 1]).accumulation_points(), set(&[-1, 0, 1]));
        assert_eq!(seq(&[-1, 0, 1]).sup_value(), Rat::one());
    }

    #[test]
    fn pair_bound_values() {
        assert_eq!(pair_bounds(2, 3), (2, 6));
        assert_eq!(pair_bounds(3, 2), (2, 6));
        assert_eq!(pair_bounds(2, 5), (3, 10));
        assert_eq!(pair_bounds(4, 4), (1, 16));
    }
}
