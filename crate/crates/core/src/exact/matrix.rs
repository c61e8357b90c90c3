use serde::{Deserialize, Serialize};

use super::rat::{dot, Rat};
use crate::error::{Error, Result};

/// Dense row-major matrix over the rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rat>) -> Result<RatMatrix> {
        if rows == 0 || cols == 0 {
            return Err(Error::Shape(format!("{rows}x{cols} matrix is empty")));
        }
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(RatMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<RatMatrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        RatMatrix::new(r, c, rows.into_iter().flatten().collect())
    }

    /// Convenience constructor from small integers.
    pub fn from_ints(rows: &[&[i64]]) -> Result<RatMatrix> {
        RatMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Rat::int(x)).collect())
                .collect(),
        )
    }

    pub fn from_columns(cols: &[Vec<Rat>]) -> Result<RatMatrix> {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        if cols.iter().any(|col| col.len() != r) {
            return Err(Error::Shape("ragged columns".into()));
        }
        let mut data = Vec::with_capacity(r * c);
        for i in 0..r {
            for col in cols {
                data.push(col[i].clone());
            }
        }
        RatMatrix::new(r, c, data)
    }

    pub fn identity(n: usize) -> RatMatrix {
        let mut data = vec![Rat::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = Rat::one();
        }
        RatMatrix {
            rows: n,
            cols: n,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rat {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rat) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rat] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Rat>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vec<Rat> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Rat>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn transpose(&self) -> RatMatrix {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c).clone());
            }
        }
        RatMatrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Result<Vec<Rat>> {
        if v.len() != self.cols {
            return Err(Error::Shape(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows).map(|r| dot(self.row(r), v)).collect())
    }

    /// Left product `vᵀ·A`, the row combination with coefficients `v`.
    pub fn vec_mul(&self, v: &[Rat]) -> Result<Vec<Rat>> {
        if v.len() != self.rows {
            return Err(Error::Shape(format!(
                "vector of length {} against {} rows",
                v.len(),
                self.rows
            )));
        }
        Ok((0..self.cols)
            .map(|c| (0..self.rows).map(|r| &v[r] * self.get(r, c)).sum())
            .collect())
    }

    pub fn mul(&self, other: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != other.rows {
            return Err(Error::Shape("inner dimensions differ".into()));
        }
        let mut data = Vec::with_capacity(self.rows * other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                data.push((0..self.cols).map(|k| self.get(r, k) * other.get(k, c)).sum());
            }
        }
        RatMatrix::new(self.rows, other.cols, data)
    }

    /// Reduced row echelon form and its pivot columns.
    ///
    /// Pivots are taken as the first nonzero entry scanning rows top-down in
    /// each column, left to right.
    pub fn rref(&self) -> (RatMatrix, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut pr = 0;
        for col in 0..a.cols {
            if pr == a.rows {
                break;
            }
            let Some(found) = (pr..a.rows).find(|&r| !a.get(r, col).is_zero()) else {
                continue;
            };
            a.swap_rows(found, pr);
            let p = a.get(pr, col).clone();
            for c in col..a.cols {
                let v = a.get(pr, c) / &p;
                a.set(pr, c, v);
            }
            for r in 0..a.rows {
                if r == pr || a.get(r, col).is_zero() {
                    continue;
                }
                let f = a.get(r, col).clone();
                for c in col..a.cols {
                    let v = a.get(r, c) - &f * a.get(pr, c);
                    a.set(r, c, v);
                }
            }
            pivots.push(col);
            pr += 1;
        }
        (a, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

/// Rank of a list of vectors of equal length (0 for an empty list).
pub fn rank_of(vectors: &[Vec<Rat>]) -> usize {
    let mut space = RowSpace::new(vectors.first().map_or(0, Vec::len));
    for v in vectors {
        space.insert(v.clone());
    }
    space.rank()
}

/// Incrementally maintained row space with exact membership tests.
///
/// Each stored row is reduced against all earlier rows and scaled so its
/// pivot is one, so sequential reduction decides membership.
#[derive(Clone, Debug)]
pub struct RowSpace {
    dim: usize,
    rows: Vec<(usize, Vec<Rat>)>,
}

impl RowSpace {
    pub fn new(dim: usize) -> RowSpace {
        RowSpace {
            dim,
            rows: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, mut v: Vec<Rat>) -> Vec<Rat> {
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x -= &(&f * r);
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        self.reduce(v.to_vec()).iter().all(Rat::is_zero)
    }

    /// Adds `v`; returns false when it was already in the span.
    pub fn insert(&mut self, v: Vec<Rat>) -> bool {
        debug_assert_eq!(v.len(), self.dim);
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let lead = v[p].clone();
        for x in v.iter_mut() {
            *x = &*x / &lead;
        }
        self.rows.push((p, v));
        true
    }

    /// Drops rows inserted after the space had rank `rank`.
    pub fn truncate(&mut self, rank: usize) {
        self.rows.truncate(rank);
    }

    pub fn basis(&self) -> Vec<Vec<Rat>> {
        self.rows.iter().map(|(_, r)| r.clone()).collect()
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<Rat>>,
}

impl Serialize for RatMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson {
            rows: self.rows,
            cols: self.cols,
            entries: self.row_vecs(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = MatrixJson::deserialize(d)?;
        let m = RatMatrix::from_rows(j.entries).map_err(serde::de::Error::custom)?;
        if m.rows != j.rows || m.cols != j.cols {
            return Err(serde::de::Error::custom(format!(
                "declared {}x{} but entries are {}x{}",
                j.rows, j.cols, m.rows, m.cols
            )));
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_examples() {
        assert_eq!(RatMatrix::from_ints(&[&[1, 2], &[2, 4]]).unwrap().rank(), 1);
        assert_eq!(RatMatrix::identity(3).rank(), 3);
        assert_eq!(
            RatMatrix::from_ints(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]])
                .unwrap()
                .rank(),
            2
        );
    }

    #[test]
    fn shape_errors() {
        assert!(RatMatrix::from_rows(vec![]).is_err());
        assert!(RatMatrix::from_rows(vec![vec![Rat::one()], vec![]]).is_err());
        let m = RatMatrix::identity(2);
        assert_eq!(m.mul_vec(&[Rat::one()]).unwrap_err().code(), "shape");
    }

    #[test]
    fn row_space_membership() {
        let mut s = RowSpace::new(3);
        assert!(s.insert(vec![Rat::int(1), Rat::int(1), Rat::int(0)]));
        assert!(s.insert(vec![Rat::int(0), Rat::int(1), Rat::int(1)]));
        assert!(!s.insert(vec![Rat::int(1), Rat::int(2), Rat::int(1)]));
        assert!(s.contains(&[Rat::int(1), Rat::int(0), Rat::int(-1)]));
        assert!(!s.contains(&[Rat::int(0), Rat::int(0), Rat::int(1)]));
        assert_eq!(s.rank(), 2);
    }

    #[test]
    fn json_round_trip() {
        let m = RatMatrix::from_ints(&[&[0, 1, 0], &[0, 0, 1]]).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(
            s,
            r#"{"rows":2,"cols":3,"entries":[["0","1","0"],["0","0","1"]]}"#
        );
        let back: RatMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        let bad = r#"{"rows":3,"cols":3,"entries":[["0","1","0"],["0","0","1"]]}"#;
        assert!(serde_json::from_str::<RatMatrix>(bad).is_err());
    }
}
