use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{multiplicity, ValueMatrix};
use crate::error::{Error, Result};
use crate::exact::{
    generic_point, normalize_direction, nullspace, solve_affine, AffineFunctional, AffineSubspace,
    Rat, RatMatrix, RowSpace,
};

/// Largest column count for exhaustive profiles (Bell(12) ≈ 4.2M patterns).
pub const DEFAULT_CAP: usize = 12;

/// A set partition of the column indices: which columns share a value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoincidencePattern {
    blocks: Vec<Vec<usize>>,
}

impl CoincidencePattern {
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<CoincidencePattern> {
        let mut seen = vec![false; n];
        for b in &blocks {
            if b.is_empty() {
                return Err(Error::Shape("empty block".into()));
            }
            for &j in b {
                if j >= n || seen[j] {
                    return Err(Error::Shape(format!("column {j} repeated or out of range")));
                }
                seen[j] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Shape("blocks do not cover all columns".into()));
        }
        Ok(CoincidencePattern { blocks })
    }

    /// From a restricted growth string (`rgs[j]` is the block of column `j`).
    pub fn from_rgs(rgs: &[usize]) -> CoincidencePattern {
        CoincidencePattern {
            blocks: crate::partitions::blocks(rgs),
        }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn columns(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }
}

/// The achieved multiplicities `{μ(α) : α ≠ 0}` with one witness each.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicityProfile {
    pub achieved: BTreeSet<usize>,
    pub witnesses: BTreeMap<usize, Vec<Rat>>,
}

impl MultiplicityProfile {
    pub fn min(&self) -> Option<usize> {
        self.achieved.first().copied()
    }

    pub fn max(&self) -> Option<usize> {
        self.achieved.last().copied()
    }

    pub fn is_within(&self, allowed: &BTreeSet<usize>) -> bool {
        self.achieved.is_subset(allowed)
    }

    /// Re-evaluates every witness; returns the first count whose witness disagrees.
    pub fn check_witnesses(&self, m: &ValueMatrix) -> std::result::Result<(), usize> {
        if self.achieved.iter().ne(self.witnesses.keys()) {
            return Err(self
                .achieved
                .symmetric_difference(&self.witnesses.keys().copied().collect())
                .next()
                .copied()
                .unwrap_or(0));
        }
        for (k, alpha) in &self.witnesses {
            if multiplicity(m, alpha).ok() != Some(*k) {
                return Err(*k);
            }
        }
        Ok(())
    }

    fn record(&mut self, k: usize, alpha: Vec<Rat>) {
        if self.achieved.insert(k) {
            self.witnesses.insert(k, alpha);
        }
    }
}

fn diff(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// A nonzero α in `space` at which all `separators` are nonzero, normalized.
fn pick_witness(space: &AffineSubspace, mut separators: Vec<AffineFunctional>) -> Option<Vec<Rat>> {
    if space.dim() == 0 {
        return None;
    }
    if separators.is_empty() {
        // keep α away from zero: some coordinate is free on the space
        let m = space.ambient_dim();
        let i = (0..m).find(|&i| space.directions.iter().any(|d| !d[i].is_zero()))?;
        let mut e = vec![Rat::zero(); m];
        e[i] = Rat::one();
        separators.push(AffineFunctional::linear(e));
    }
    generic_point(space, &separators)
        .ok()
        .map(|a| normalize_direction(&a))
}

/// Decides whether some α ≠ 0 makes exactly the columns within each block of
/// `p` coincide, and returns a normalized witness if so.
pub fn pattern_feasible(m: &ValueMatrix, p: &CoincidencePattern) -> Result<Option<Vec<Rat>>> {
    if p.columns() != m.cols() {
        return Err(Error::Shape(format!(
            "pattern over {} columns for a matrix with {}",
            p.columns(),
            m.cols()
        )));
    }
    m.require_canonical()?;
    let cols = m.columns();
    let rows: Vec<Vec<Rat>> = p
        .blocks()
        .iter()
        .flat_map(|b| b[1..].iter().map(|&j| diff(&cols[j], &cols[b[0]])).collect::<Vec<_>>())
        .collect();
    let space = if rows.is_empty() {
        AffineSubspace::whole(m.rows())
    } else {
        let a = RatMatrix::from_rows(rows)?;
        let zero = vec![Rat::zero(); a.rows()];
        match solve_affine(&a, &zero)?.into_subspace() {
            Some(s) => s,
            None => return Ok(None),
        }
    };
    let leaders: Vec<usize> = p.blocks().iter().map(|b| b[0]).collect();
    let mut separators = Vec::new();
    for (i, &a) in leaders.iter().enumerate() {
        for &b in &leaders[i + 1..] {
            let f = AffineFunctional::linear(diff(&cols[a], &cols[b]));
            if f.vanishes_on(&space) {
                return Ok(None);
            }
            separators.push(f);
        }
    }
    Ok(pick_witness(&space, separators))
}

struct Search<'a> {
    cols: &'a [Vec<Rat>],
    m: usize,
    space: RowSpace,
    reps: Vec<usize>,
    found: MultiplicityProfile,
}

impl Search<'_> {
    fn reps_separated(&self) -> bool {
        self.reps.iter().enumerate().all(|(i, &a)| {
            self.reps[i + 1..]
                .iter()
                .all(|&b| !self.space.contains(&diff(&self.cols[a], &self.cols[b])))
        })
    }

    fn leaf(&mut self) {
        let k = self.reps.len();
        if self.found.achieved.contains(&k) {
            return;
        }
        let directions = if self.space.rank() == 0 {
            AffineSubspace::whole(self.m).directions
        } else {
            let basis = RatMatrix::from_rows(self.space.basis()).expect("nonempty basis");
            nullspace(&basis)
        };
        let space = AffineSubspace {
            point: vec![Rat::zero(); self.m],
            directions,
        };
        let (cols, reps) = (self.cols, &self.reps);
        let mut separators = Vec::new();
        for (i, &a) in reps.iter().enumerate() {
            for &b in &reps[i + 1..] {
                separators.push(AffineFunctional::linear(diff(&cols[a], &cols[b])));
            }
        }
        let alpha = pick_witness(&space, separators).expect("feasible pattern has a witness");
        self.found.record(k, alpha);
    }

    fn walk(&mut self, t: usize) {
        let n = self.cols.len();
        if t == n {
            self.leaf();
            return;
        }
        let b = self.reps.len();
        if (b.max(1)..=b + n - t).all(|k| self.found.achieved.contains(&k)) {
            return;
        }
        for blk in 0..b {
            let before = self.space.rank();
            let grew = self
                .space
                .insert(diff(&self.cols[t], &self.cols[self.reps[blk]]));
            if self.space.rank() < self.m && (!grew || self.reps_separated()) {
                self.walk(t + 1);
            }
            self.space.truncate(before);
        }
        let opens = self
            .reps
            .iter()
            .all(|&r| !self.space.contains(&diff(&self.cols[t], &self.cols[r])));
        if opens {
            self.reps.push(t);
            self.walk(t + 1);
            self.reps.pop();
        }
    }
}

/// Exact profile with the default column cap.
pub fn profile(m: &ValueMatrix) -> Result<MultiplicityProfile> {
    profile_with_cap(m, DEFAULT_CAP)
}

/// Exact profile by depth-first enumeration of coincidence patterns.
///
/// Columns are assigned to blocks in index order. A branch is cut as soon as
/// its equalities force α = 0 or force two blocks to coincide, and when every
/// block count it could still reach already has a witness. The first pattern
/// reaching each count supplies its witness, so output is deterministic.
pub fn profile_with_cap(m: &ValueMatrix, cap: usize) -> Result<MultiplicityProfile> {
    if m.cols() > cap {
        return Err(Error::TooLarge {
            what: "columns",
            got: m.cols(),
            cap,
        });
    }
    m.require_canonical()?;
    let cols = m.columns();
    let mut s = Search {
        cols: &cols,
        m: m.rows(),
        space: RowSpace::new(m.rows()),
        reps: Vec::new(),
        found: MultiplicityProfile::default(),
    };
    s.walk(0);
    Ok(s.found)
}

/// Under-approximate profile from random integer directions in `[-bound, bound]^m`.
pub fn sample_profile(m: &ValueMatrix, samples: usize, bound: i64, seed: u64) -> Result<MultiplicityProfile> {
    if bound < 1 {
        return Err(Error::Range(format!("sampling bound {bound} must be positive")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = MultiplicityProfile::default();
    let mut drawn = 0;
    while drawn < samples {
        let alpha: Vec<Rat> = (0..m.rows())
            .map(|_| Rat::int(rng.gen_range(-bound..=bound)))
            .collect();
        if alpha.iter().all(Rat::is_zero) {
            continue;
        }
        drawn += 1;
        let k = multiplicity(m, &alpha)?;
        out.record(k, normalize_direction(&alpha));
    }
    Ok(out)
}
