use super::matrix::RatMatrix;
use super::rat::{dot, Rat};
use crate::error::{Error, Result};

/// An affine subspace `point + span(directions)` of ℚⁿ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSubspace {
    pub point: Vec<Rat>,
    pub directions: Vec<Vec<Rat>>,
}

impl AffineSubspace {
    /// The whole space ℚⁿ with the standard basis as directions.
    pub fn whole(n: usize) -> AffineSubspace {
        let directions = (0..n)
            .map(|i| {
                let mut e = vec![Rat::zero(); n];
                e[i] = Rat::one();
                e
            })
            .collect();
        AffineSubspace {
            point: vec![Rat::zero(); n],
            directions,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.point.len()
    }

    pub fn dim(&self) -> usize {
        self.directions.len()
    }

    /// The point with parameter vector `t` over the directions.
    pub fn at(&self, t: &[i64]) -> Vec<Rat> {
        let mut x = self.point.clone();
        for (ti, d) in t.iter().zip(&self.directions) {
            if *ti == 0 {
                continue;
            }
            let ti = Rat::int(*ti);
            for (xi, di) in x.iter_mut().zip(d) {
                *xi += &(&ti * di);
            }
        }
        x
    }
}

/// Outcome of solving `A·x = b` exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Unique(Vec<Rat>),
    Subspace(AffineSubspace),
    Infeasible,
}

impl Solution {
    pub fn into_subspace(self) -> Option<AffineSubspace> {
        match self {
            Solution::Unique(point) => Some(AffineSubspace {
                point,
                directions: Vec::new(),
            }),
            Solution::Subspace(s) => Some(s),
            Solution::Infeasible => None,
        }
    }
}

/// Affine functional `x ↦ coeffs·x + constant`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineFunctional {
    pub coeffs: Vec<Rat>,
    pub constant: Rat,
}

impl AffineFunctional {
    pub fn linear(coeffs: Vec<Rat>) -> AffineFunctional {
        AffineFunctional {
            coeffs,
            constant: Rat::zero(),
        }
    }

    pub fn eval(&self, x: &[Rat]) -> Rat {
        dot(&self.coeffs, x) + &self.constant
    }

    pub fn vanishes_on(&self, space: &AffineSubspace) -> bool {
        self.eval(&space.point).is_zero()
            && space
                .directions
                .iter()
                .all(|d| dot(&self.coeffs, d).is_zero())
    }
}

/// Basis of the kernel of `a`, one vector per free column of its RREF.
pub fn nullspace(a: &RatMatrix) -> Vec<Vec<Rat>> {
    let (r, pivots) = a.rref();
    let n = a.cols();
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..n)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![Rat::zero(); n];
            v[free] = Rat::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -r.get(row, free);
            }
            v
        })
        .collect()
}

pub fn solve_affine(a: &RatMatrix, b: &[Rat]) -> Result<Solution> {
    if b.len() != a.rows() {
        return Err(Error::Shape(format!(
            "right-hand side of length {} for {} rows",
            b.len(),
            a.rows()
        )));
    }
    let n = a.cols();
    let mut aug = Vec::with_capacity(a.rows() * (n + 1));
    for (r, rhs) in b.iter().enumerate() {
        aug.extend_from_slice(a.row(r));
        aug.push(rhs.clone());
    }
    let (red, pivots) = RatMatrix::new(a.rows(), n + 1, aug)?.rref();
    if pivots.last() == Some(&n) {
        return Ok(Solution::Infeasible);
    }
    let mut point = vec![Rat::zero(); n];
    for (row, &p) in pivots.iter().enumerate() {
        point[p] = red.get(row, n).clone();
    }
    let directions = nullspace(a);
    if directions.is_empty() {
        Ok(Solution::Unique(point))
    } else {
        Ok(Solution::Subspace(AffineSubspace { point, directions }))
    }
}

/// Integer parameter tuples in increasing max-norm.
///
/// Within a shell of norm `r` the tuples are ordered lexicographically by the
/// zigzag code `0, 1, -1, 2, -2, …` of each coordinate, so the walk is
/// deterministic and positive entries come before negative ones.
#[derive(Clone, Debug)]
pub struct GridPoints {
    dim: usize,
    radius: i64,
    codes: Vec<i64>,
    done_shell: bool,
}

impl GridPoints {
    pub fn new(dim: usize) -> GridPoints {
        GridPoints {
            dim,
            radius: 0,
            codes: vec![0; dim],
            done_shell: false,
        }
    }

    fn decode(c: i64) -> i64 {
        if c % 2 == 1 {
            (c + 1) / 2
        } else {
            -c / 2
        }
    }

    // Advances the odometer over codes 0..=2r; returns false on wrap-around.
    fn bump(&mut self) -> bool {
        let top = 2 * self.radius;
        for i in (0..self.dim).rev() {
            if self.codes[i] < top {
                self.codes[i] += 1;
                return true;
            }
            self.codes[i] = 0;
        }
        false
    }
}

impl Iterator for GridPoints {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        if self.dim == 0 {
            if self.done_shell {
                return None;
            }
            self.done_shell = true;
            return Some(Vec::new());
        }
        loop {
            if self.done_shell {
                self.radius += 1;
                self.codes = vec![0; self.dim];
                self.done_shell = false;
            }
            let r = self.radius;
            let on_shell = self.codes.iter().any(|&c| c >= 2 * r - 1) || r == 0;
            let out = on_shell.then(|| self.codes.iter().map(|&c| Self::decode(c)).collect());
            if !self.bump() {
                self.done_shell = true;
            }
            if let Some(t) = out {
                return Some(t);
            }
        }
    }
}

/// First point of `space`, in [`GridPoints`] order over its directions, at
/// which every functional in `avoid` is nonzero.
pub fn generic_point(space: &AffineSubspace, avoid: &[AffineFunctional]) -> Result<Vec<Rat>> {
    for (i, f) in avoid.iter().enumerate() {
        if f.coeffs.len() != space.ambient_dim() {
            return Err(Error::Shape(format!(
                "functional {i} has {} coefficients in dimension {}",
                f.coeffs.len(),
                space.ambient_dim()
            )));
        }
        if f.vanishes_on(space) {
            return Err(Error::Unavoidable(i));
        }
    }
    // Restrict each functional to the parameter space once.
    let restricted: Vec<(Vec<Rat>, Rat)> = avoid
        .iter()
        .map(|f| {
            let slope = space.directions.iter().map(|d| dot(&f.coeffs, d)).collect();
            (slope, f.eval(&space.point))
        })
        .collect();
    for t in GridPoints::new(space.dim()) {
        let hit = restricted.iter().all(|(slope, c)| {
            let v: Rat = slope
                .iter()
                .zip(&t)
                .filter(|(_, ti)| **ti != 0)
                .map(|(s, ti)| s * Rat::int(*ti))
                .sum();
            !(v + c).is_zero()
        });
        if hit {
            return Ok(space.at(&t));
        }
    }
    unreachable!("grid walk is infinite when dim > 0 and a 0-dim space was checked above")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::rat;

    fn ints(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| Rat::int(x)).collect()
    }

    #[test]
    fn solve_unique_1x1() {
        let a = RatMatrix::from_ints(&[&[1]]).unwrap();
        assert_eq!(
            solve_affine(&a, &ints(&[2])).unwrap(),
            Solution::Unique(ints(&[2]))
        );
    }

    #[test]
    fn solve_symmetric_line() {
        let a = RatMatrix::from_ints(&[&[1, 1]]).unwrap();
        let Solution::Subspace(s) = solve_affine(&a, &ints(&[0])).unwrap() else {
            panic!("expected a subspace");
        };
        assert_eq!(s.point, ints(&[0, 0]));
        assert_eq!(s.directions.len(), 1);
        let d = &s.directions[0];
        assert_eq!(&d[0], &-&d[1]);
        assert!(!d[0].is_zero());
    }

    #[test]
    fn solve_infeasible() {
        let a = RatMatrix::from_ints(&[&[1, 0], &[1, 0]]).unwrap();
        assert_eq!(
            solve_affine(&a, &ints(&[0, 1])).unwrap(),
            Solution::Infeasible
        );
    }

    #[test]
    fn solve_shape_error() {
        let a = RatMatrix::from_ints(&[&[1, 0]]).unwrap();
        assert_eq!(
            solve_affine(&a, &ints(&[0, 1])).unwrap_err().code(),
            "shape"
        );
    }

    #[test]
    fn nullspace_examples() {
        let k = nullspace(&RatMatrix::from_ints(&[&[1, 2]]).unwrap());
        assert_eq!(k.len(), 1);
        assert_eq!(
            crate::exact::normalize_direction(&k[0]),
            ints(&[2, -1])
        );
        assert!(nullspace(&RatMatrix::identity(2)).is_empty());
        let a = RatMatrix::from_ints(&[&[1, 1, 1]]).unwrap();
        let k = nullspace(&a);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(a.mul_vec(v).unwrap().iter().all(Rat::is_zero));
        }
        assert_eq!(crate::exact::matrix::rank_of(&k), 2);
    }

    #[test]
    fn grid_order() {
        let pts: Vec<Vec<i64>> = GridPoints::new(2).take(10).collect();
        assert_eq!(pts[0], vec![0, 0]);
        assert_eq!(pts[1], vec![0, 1]);
        assert_eq!(pts[2], vec![0, -1]);
        assert_eq!(pts[3], vec![1, 0]);
        assert_eq!(pts[8], vec![-1, -1]);
        assert_eq!(pts[9], vec![0, 2]);
        let one: Vec<Vec<i64>> = GridPoints::new(1).take(5).collect();
        assert_eq!(one, vec![vec![0], vec![1], vec![-1], vec![2], vec![-2]]);
        // each shell of radius r in dimension 2 has (2r+1)^2 - (2r-1)^2 points
        let shell2 = GridPoints::new(2)
            .skip(9)
            .take_while(|t| t.iter().map(|x| x.abs()).max() == Some(2))
            .count();
        assert_eq!(shell2, 16);
    }

    #[test]
    fn generic_point_examples() {
        let plane = AffineSubspace::whole(2);
        let first = AffineFunctional::linear(ints(&[1, 0]));
        assert_eq!(
            generic_point(&plane, std::slice::from_ref(&first)).unwrap(),
            ints(&[1, 0])
        );

        let a = RatMatrix::from_ints(&[&[1, -1]]).unwrap();
        let diag = solve_affine(&a, &ints(&[0])).unwrap().into_subspace().unwrap();
        assert_eq!(
            generic_point(&diag, std::slice::from_ref(&first)).unwrap(),
            ints(&[1, 1])
        );

        let a = RatMatrix::from_ints(&[&[1, 0]]).unwrap();
        let axis = solve_affine(&a, &ints(&[0])).unwrap().into_subspace().unwrap();
        assert_eq!(
            generic_point(&axis, &[first]).unwrap_err(),
            Error::Unavoidable(0)
        );
    }

    #[test]
    fn generic_point_affine_and_point_spaces() {
        let pt = AffineSubspace {
            point: vec![rat(1, 2)],
            directions: vec![],
        };
        let f = AffineFunctional {
            coeffs: ints(&[2]),
            constant: Rat::int(-1),
        };
        assert_eq!(generic_point(&pt, std::slice::from_ref(&f)).unwrap_err().code(), "unavoidable");
        let g = AffineFunctional::linear(ints(&[1]));
        assert_eq!(generic_point(&pt, &[g]).unwrap(), vec![rat(1, 2)]);
        // avoid 2x - 1 = 0 on the whole line: 0 works immediately
        assert_eq!(
            generic_point(&AffineSubspace::whole(1), &[f]).unwrap(),
            ints(&[0])
        );
    }
}
