//! Witness spaces with prescribed multiplicity profiles.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::engine::{profile, ValueMatrix};
use crate::error::{Error, Result};
use crate::exact::{rank_of, GridPoints, Rat, RowSpace};
use crate::lab::{AtomLabel, Flavor};
use crate::partitions::{blocks, SetPartitions};
use crate::sequence::{canonicalize, Atom, StepSequence, SymbolicPartition};

/// Cap on `n + d` for [`generic_vectors`].
pub const VECTOR_CAP: usize = 9;
/// Cap on `k` for three-way sign families.
pub const THREE_SPLIT_CAP: usize = 6;
/// Cap on `k` for two-way sign families.
pub const TWO_SPLIT_CAP: usize = 10;
/// Coincidence tolerance for float polygon realizations.
pub const POLYGON_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Approximate,
}

fn check_cap(what: &'static str, got: usize, cap: usize) -> Result<()> {
    if got > cap {
        Err(Error::TooLarge { what, got, cap })
    } else {
        Ok(())
    }
}

/// `n + d` points of ℚ^{d+1} on which every nonzero linear functional takes at least `n` values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenericVectorFamily {
    pub n: usize,
    pub d: usize,
    pub vectors: Vec<Vec<Rat>>,
}

impl GenericVectorFamily {
    /// The `(d+1) × (n+d)` matrix with the vectors as columns.
    pub fn matrix(&self) -> ValueMatrix {
        ValueMatrix::from_columns(&self.vectors).expect("family is nonempty")
    }

    /// For every partition into at most `n - 1` blocks, the differences to
    /// block leaders have the largest rank possible, `min(|V| - blocks, d + 1)`.
    pub fn partition_criterion(&self) -> bool {
        let size = self.vectors.len();
        SetPartitions::new(size, self.n.saturating_sub(1)).all(|rgs| {
            let bs = blocks(&rgs);
            let diffs: Vec<Vec<Rat>> = bs
                .iter()
                .flat_map(|b| b[1..].iter().map(|&i| sub(&self.vectors[i], &self.vectors[b[0]])))
                .collect();
            rank_of(&diffs) == (size - bs.len()).min(self.d + 1)
        })
    }
}

fn sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Whether `cand` keeps the partition criterion for `prefix ∪ {cand}`.
///
/// Partitions where `cand` is alone reduce to partitions of the prefix, which
/// already pass, so only placements of `cand` into an existing block are checked.
fn admissible(prefix: &[Vec<Rat>], cand: &[Rat], n: usize, d: usize) -> bool {
    if prefix.iter().any(|v| v.as_slice() == cand) {
        return false;
    }
    let k = prefix.len();
    SetPartitions::new(k, n.saturating_sub(1)).all(|rgs| {
        let bs = blocks(&rgs);
        let mut space = RowSpace::new(d + 1);
        for b in &bs {
            for &i in &b[1..] {
                space.insert(sub(&prefix[i], &prefix[b[0]]));
            }
        }
        if space.rank() == d + 1 {
            return true;
        }
        bs.iter().all(|b| !space.contains(&sub(cand, &prefix[b[0]])))
    })
}

/// Builds the family greedily: `v₁ = 0`, then each next vector is the first
/// integer grid point (by max-norm) keeping the partition criterion.
pub fn generic_vectors(n: usize, d: usize) -> Result<GenericVectorFamily> {
    if n == 0 {
        return Err(Error::Degenerate("n must be at least 1".into()));
    }
    check_cap("n+d", n + d, VECTOR_CAP)?;
    let mut vectors = vec![vec![Rat::zero(); d + 1]];
    while vectors.len() < n + d {
        let next = GridPoints::new(d + 1)
            .map(|t| t.into_iter().map(Rat::int).collect::<Vec<_>>())
            .find(|c| admissible(&vectors, c, n, d))
            .expect("proper affine subspaces do not cover the grid");
        vectors.push(next);
    }
    Ok(GenericVectorFamily { n, d, vectors })
}

/// A `(d+1)`-row value matrix whose profile lies in `[n, n+d]`.
pub fn interval_space(n: usize, d: usize) -> Result<ValueMatrix> {
    if n < 2 {
        return Err(Error::Degenerate(format!("n = {n}, need n ≥ 2")));
    }
    Ok(generic_vectors(n, d)?.matrix())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Two,
    Three,
}

impl Split {
    /// Piece labels in increasing order.
    pub fn labels(&self) -> &'static [i8] {
        match self {
            Split::Two => &[0, 1],
            Split::Three => &[-1, 0, 1],
        }
    }

    pub fn cap(&self) -> usize {
        match self {
            Split::Two => TWO_SPLIT_CAP,
            Split::Three => THREE_SPLIT_CAP,
        }
    }
}

impl TryFrom<u8> for Split {
    type Error = Error;
    fn try_from(v: u8) -> Result<Split> {
        match v {
            2 => Ok(Split::Two),
            3 => Ok(Split::Three),
            _ => Err(Error::Range(format!("split must be 2 or 3, got {v}"))),
        }
    }
}

/// Generators over the atoms labeled by all sign vectors; generator `γ`'s
/// piece `e` is the set of atoms whose `γ`-th label is `e`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndependentFamily {
    pub k: usize,
    pub split: Split,
    /// Atom labels in lexicographic order.
    pub atoms: Vec<Vec<i8>>,
}

impl IndependentFamily {
    pub fn piece(&self, gamma: usize, e: i8) -> Vec<usize> {
        (0..self.atoms.len())
            .filter(|&a| self.atoms[a][gamma] == e)
            .collect()
    }

    /// Atoms in the intersection of piece `pattern[γ]` of every generator.
    pub fn pattern_atoms(&self, pattern: &[i8]) -> Vec<usize> {
        (0..self.atoms.len())
            .filter(|&a| self.atoms[a] == pattern)
            .collect()
    }

    /// Counts the label patterns whose intersection is nonempty.
    pub fn nonempty_patterns(&self) -> usize {
        sign_vectors(self.k, self.split.labels())
            .iter()
            .filter(|p| !self.pattern_atoms(p).is_empty())
            .count()
    }

    pub fn is_independent(&self) -> bool {
        self.nonempty_patterns() == self.split.labels().len().pow(self.k as u32)
    }
}

fn sign_vectors(k: usize, labels: &[i8]) -> Vec<Vec<i8>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|v| {
                labels.iter().map(move |&e| {
                    let mut w = v.clone();
                    w.push(e);
                    w
                })
            })
            .collect();
    }
    out
}

pub fn independent_family(k: usize, split: Split) -> Result<IndependentFamily> {
    if k == 0 {
        return Err(Error::Degenerate("k must be at least 1".into()));
    }
    check_cap("k", k, split.cap())?;
    Ok(IndependentFamily {
        k,
        split,
        atoms: sign_vectors(k, split.labels()),
    })
}

fn label_matrix(family: &IndependentFamily) -> ValueMatrix {
    let cols: Vec<Vec<Rat>> = family
        .atoms
        .iter()
        .map(|a| a.iter().map(|&e| Rat::int(e as i64)).collect())
        .collect();
    ValueMatrix::from_columns(&cols).expect("nonempty family")
}

/// `k × 3^k` matrix with one column per `e ∈ {-1,0,1}^k`.
pub fn odd_space(k: usize) -> Result<ValueMatrix> {
    Ok(label_matrix(&independent_family(k, Split::Three)?))
}

/// `k × 2^k` matrix of 0/1 generator indicators over the atoms.
pub fn nonconvergent_span(k: usize) -> Result<ValueMatrix> {
    Ok(label_matrix(&independent_family(k, Split::Two)?))
}

/// Vertex coordinates of a centred regular `2n`-gon, as two rows.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum PolygonSpace {
    /// An affine image of the regular polygon with rational vertices.
    Exact { matrix: ValueMatrix },
    /// Float vertices, compared with `tolerance`.
    Approximate { points: Vec<[f64; 2]>, tolerance: f64 },
}

impl PolygonSpace {
    pub fn mode(&self) -> Mode {
        match self {
            PolygonSpace::Exact { .. } => Mode::Exact,
            PolygonSpace::Approximate { .. } => Mode::Approximate,
        }
    }

    /// Achieved multiplicities: exact profile, or the float direction census.
    pub fn profile_counts(&self) -> Result<BTreeSet<usize>> {
        match self {
            PolygonSpace::Exact { matrix } => Ok(profile(matrix)?.achieved),
            PolygonSpace::Approximate { points, tolerance } => Ok(direction_census(points, *tolerance)),
        }
    }
}

/// Number of distinct values of `u × p` over the points, merging values within `tol`.
fn float_classes(points: &[[f64; 2]], u: [f64; 2], tol: f64) -> usize {
    let mut vals: Vec<f64> = points.iter().map(|p| u[0] * p[1] - u[1] * p[0]).collect();
    vals.sort_by(f64::total_cmp);
    1 + vals.windows(2).filter(|w| w[1] - w[0] > tol).count()
}

/// Class counts over every pair direction plus one generic direction (the
/// middle of the widest angular gap between pair directions).
pub fn direction_census(points: &[[f64; 2]], tol: f64) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    let mut angles = Vec::new();
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            let u = [q[0] - p[0], q[1] - p[1]];
            let norm = u[0].hypot(u[1]);
            out.insert(float_classes(points, [u[0] / norm, u[1] / norm], tol));
            angles.push(u[1].atan2(u[0]).rem_euclid(PI));
        }
    }
    if angles.is_empty() {
        out.insert(points.len().min(1));
        return out;
    }
    angles.sort_by(f64::total_cmp);
    let mut best = (angles[0] + PI - angles[angles.len() - 1], angles[angles.len() - 1]);
    for w in angles.windows(2) {
        if w[1] - w[0] > best.0 {
            best = (w[1] - w[0], w[0]);
        }
    }
    let theta = best.1 + best.0 / 2.0;
    out.insert(float_classes(points, [theta.cos(), theta.sin()], tol));
    out
}

pub fn polygon_space(n: usize) -> Result<PolygonSpace> {
    if n < 2 {
        return Err(Error::Degenerate(format!("n = {n}, need n ≥ 2")));
    }
    // affine images under (x, y) ↦ (3x + y, y), which keeps abscissas distinct
    let regular: &[(i64, i64)] = match n {
        2 => &[(1, 0), (0, 1), (-1, 0), (0, -1)],
        3 => &[(1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)],
        _ => {
            let count = 2 * n;
            let points = (0..count)
                .map(|i| {
                    let t = 2.0 * PI * i as f64 / count as f64 + PI / (2.0 * count as f64);
                    [t.cos(), t.sin()]
                })
                .collect();
            return Ok(PolygonSpace::Approximate {
                points,
                tolerance: POLYGON_TOLERANCE,
            });
        }
    };
    let cols: Vec<Vec<Rat>> = regular
        .iter()
        .map(|&(x, y)| vec![Rat::int(3 * x + y), Rat::int(y)])
        .collect();
    Ok(PolygonSpace::Exact {
        matrix: ValueMatrix::from_columns(&cols)?,
    })
}

/// Finite truncation of disjointly supported rows `Σ_k a_k·1_{A_{n,k}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceableRows {
    pub n_max: usize,
    pub k_max: usize,
    pub flavor: Flavor,
    /// `a_0, …, a_{k_max}`.
    pub coefficients: Vec<Rat>,
    /// Columns `A_{0,0}, …, A_{0,k_max}, A_{1,0}, …` followed by the residual atom.
    pub matrix: ValueMatrix,
    #[serde(skip)]
    pub sequences: Vec<StepSequence>,
}

impl SpaceableRows {
    /// No atom carries a nonzero value in two different rows.
    pub fn supports_disjoint(&self) -> bool {
        let m = self.matrix.matrix();
        (0..m.cols()).all(|c| (0..m.rows()).filter(|&r| !m.get(r, c).is_zero()).count() <= 1)
    }

    pub fn combination(&self, alpha: &[Rat]) -> Result<StepSequence> {
        self.matrix.combination(alpha)
    }

    /// `max_k a_k`, the sup of every row.
    pub fn row_sup(&self) -> Rat {
        self.coefficients.iter().max().cloned().unwrap_or_else(Rat::zero)
    }
}

pub fn spaceable_rows(n_max: usize, k_max: usize, flavor: Flavor) -> Result<SpaceableRows> {
    if n_max == 0 {
        return Err(Error::Degenerate("n_max must be at least 1".into()));
    }
    let coefficients: Vec<Rat> = (0..=k_max as u64).map(|k| flavor.coefficient(k)).collect();
    let width = n_max * (k_max + 1) + 1;
    let mut rows = vec![vec![Rat::zero(); width]; n_max];
    for (n, row) in rows.iter_mut().enumerate() {
        for (k, a) in coefficients.iter().enumerate() {
            row[n * (k_max + 1) + k] = a.clone();
        }
    }
    let matrix = ValueMatrix::new(crate::exact::RatMatrix::from_rows(rows)?);
    let sequences = (0..n_max)
        .map(|n| {
            let mut atoms: Vec<Atom> = (0..=k_max)
                .map(|k| Atom {
                    id: format!("A{n},{k}"),
                    realization: Some(AtomLabel::Pair {
                        n: n as u64,
                        k: k as u64,
                    }),
                })
                .collect();
            atoms.push(Atom::new(format!("Z{n}")));
            let mut values = coefficients.clone();
            values.push(Rat::zero());
            canonicalize(SymbolicPartition::new(atoms)?, values)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SpaceableRows {
        n_max,
        k_max,
        flavor,
        coefficients,
        matrix,
        sequences,
    })
}
