//! Finite point sets in ℚ², parallel-line classes and escape directions.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{normalize_direction, Rat};
use crate::sequence::{combine, InfinitudeRelation, StepSequence};

/// Pairwise distinct points of ℚ².
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<(Rat, Rat)>", into = "Vec<(Rat, Rat)>")]
pub struct PointConfig {
    points: Vec<(Rat, Rat)>,
}

impl TryFrom<Vec<(Rat, Rat)>> for PointConfig {
    type Error = Error;
    fn try_from(points: Vec<(Rat, Rat)>) -> Result<PointConfig> {
        PointConfig::new(points)
    }
}

impl From<PointConfig> for Vec<(Rat, Rat)> {
    fn from(p: PointConfig) -> Self {
        p.points
    }
}

impl PointConfig {
    pub fn new(points: Vec<(Rat, Rat)>) -> Result<PointConfig> {
        if points.is_empty() {
            return Err(Error::Empty("no points".into()));
        }
        if points.iter().collect::<BTreeSet<_>>().len() != points.len() {
            return Err(Error::Shape("points are not pairwise distinct".into()));
        }
        Ok(PointConfig { points })
    }

    pub fn from_ints(points: &[(i64, i64)]) -> Result<PointConfig> {
        PointConfig::new(points.iter().map(|&(x, y)| (Rat::int(x), Rat::int(y))).collect())
    }

    pub fn points(&self) -> &[(Rat, Rat)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// A projective direction as a primitive integer pair `(a, b)` with `a > 0`, or `a = 0` and `b > 0`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Direction {
    pub a: Rat,
    pub b: Rat,
}

impl Direction {
    pub fn new(a: Rat, b: Rat) -> Result<Direction> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::ZeroDirection);
        }
        let v = normalize_direction(&[a, b]);
        Ok(Direction {
            a: v[0].clone(),
            b: v[1].clone(),
        })
    }

    pub fn through(p: &(Rat, Rat), q: &(Rat, Rat)) -> Result<Direction> {
        Direction::new(&q.0 - &p.0, &q.1 - &p.1)
    }

    /// Value of the normal functional `(b, -a)·p`, constant along lines of this direction.
    pub fn level(&self, p: &(Rat, Rat)) -> Rat {
        &self.b * &p.0 - &self.a * &p.1
    }
}

pub fn collinear(p: &PointConfig) -> bool {
    let pts = p.points();
    if pts.len() <= 2 {
        return true;
    }
    let d = Direction::through(&pts[0], &pts[1]).expect("distinct points");
    let c = d.level(&pts[0]);
    pts[2..].iter().all(|q| d.level(q) == c)
}

/// Number of lines parallel to `dir` needed to cover the points.
pub fn direction_classes(p: &PointConfig, dir: &Direction) -> usize {
    p.points()
        .iter()
        .map(|q| dir.level(q))
        .collect::<BTreeSet<_>>()
        .len()
}

/// Every direction through two of the points, with its class count.
pub fn pair_directions(p: &PointConfig) -> Vec<(Direction, usize)> {
    let pts = p.points();
    let dirs: BTreeSet<Direction> = pts
        .iter()
        .enumerate()
        .flat_map(|(i, a)| pts[i + 1..].iter().map(move |b| Direction::through(a, b).expect("distinct points")))
        .collect();
    dirs.into_iter()
        .map(|d| {
            let c = direction_classes(p, &d);
            (d, c)
        })
        .collect()
}

/// Pair directions by class count, largest first, ties by direction order.
fn ranked_directions(p: &PointConfig) -> Vec<(Direction, usize)> {
    let mut dirs = pair_directions(p);
    dirs.sort_by(|x, y| y.1.cmp(&x.1).then_with(|| x.0.cmp(&y.0)));
    dirs
}

/// The pair direction with the most parallel-line classes.
///
/// For `m` non-collinear points some pair direction needs at least
/// `⌊(m+1)/2⌋` lines; this returns the best one, so its count is at least that.
pub fn best_pair_direction(p: &PointConfig) -> Result<(Direction, usize)> {
    if p.len() < 3 || collinear(p) {
        return Err(Error::Collinear);
    }
    Ok(ranked_directions(p).into_iter().next().expect("at least one pair"))
}

/// A combination `αx + βy` whose accumulation-point count avoids `forbidden`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EscapeWitness {
    pub alpha: Rat,
    pub beta: Rat,
    pub class_count: usize,
    pub forbidden: BTreeSet<usize>,
    pub points: Vec<(Rat, Rat)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum Escape {
    Found(EscapeWitness),
    NotFound,
}

/// Points `(ξ_i, η_j)` over the infinite intersections `S_i ∩ T_j`.
pub fn relation_points(x: &StepSequence, y: &StepSequence, rel: &InfinitudeRelation) -> Result<PointConfig> {
    if rel.left() != x.partition().ids().as_slice() || rel.right() != y.partition().ids().as_slice() {
        return Err(Error::BadRelation("relation atoms do not match the sequences".into()));
    }
    PointConfig::new(
        rel.pairs()
            .iter()
            .map(|&(i, j)| (x.values()[i].clone(), y.values()[j].clone()))
            .collect(),
    )
}

/// Searches `span{x, y}` for an element whose number of accumulation points
/// is not in `forbidden`.
///
/// A collinear point set gives a convergent combination. Otherwise pair
/// directions are tried by decreasing class count. Every hit is recomputed
/// through [`combine`] before it is returned.
pub fn escape(
    x: &StepSequence,
    y: &StepSequence,
    rel: &InfinitudeRelation,
    forbidden: &BTreeSet<usize>,
) -> Result<Escape> {
    let pts = relation_points(x, y, rel)?;
    // a collinear set has a single pair direction, with one class
    let chosen = ranked_directions(&pts)
        .into_iter()
        .find(|(_, c)| !forbidden.contains(c));
    let Some((dir, count)) = chosen else {
        return Ok(Escape::NotFound);
    };
    let (alpha, beta) = (dir.b.clone(), -&dir.a);
    let z = combine(&[alpha.clone(), beta.clone()], &[x.clone(), y.clone()], &[Some(rel.clone())])?;
    assert_eq!(z.len(), count, "class count disagrees with the combination");
    Ok(Escape::Found(EscapeWitness {
        alpha,
        beta,
        class_count: count,
        forbidden: forbidden.clone(),
        points: pts.points().to_vec(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequence::SymbolicPartition;

    fn dir(a: i64, b: i64) -> Direction {
        Direction::new(Rat::int(a), Rat::int(b)).unwrap()
    }

    fn seq(prefix: &str, vals: &[i64]) -> StepSequence {
        StepSequence::new(
            SymbolicPartition::numbered(prefix, vals.len()),
            vals.iter().map(|&v| Rat::int(v)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn collinearity() {
        assert!(collinear(&PointConfig::from_ints(&[(0, 0), (1, 1), (2, 2)]).unwrap()));
        assert!(!collinear(&PointConfig::from_ints(&[(0, 0), (1, 0), (0, 1)]).unwrap()));
        assert!(collinear(&PointConfig::from_ints(&[(3, 4)]).unwrap()));
    }

    #[test]
    fn direction_normalization() {
        assert_eq!(dir(-2, -4), dir(1, 2));
        assert_eq!(dir(0, -3), dir(0, 1));
        assert_eq!(dir(2, -4), Direction { a: Rat::int(1), b: Rat::int(-2) });
        assert!(Direction::new(Rat::zero(), Rat::zero()).is_err());
    }

    #[test]
    fn class_counts() {
        let sq = PointConfig::from_ints(&[(0, 0), (1, 0), (0, 1), (1, 1)]).unwrap();
        assert_eq!(direction_classes(&sq, &dir(1, 0)), 2);
        assert_eq!(direction_classes(&sq, &dir(1, 1)), 3);
        let line = PointConfig::from_ints(&[(0, 0), (1, 1), (2, 2)]).unwrap();
        assert_eq!(direction_classes(&line, &dir(1, 1)), 1);
    }

    #[test]
    fn best_pair_direction_examples() {
        let sq = PointConfig::from_ints(&[(0, 0), (1, 0), (0, 1), (1, 1)]).unwrap();
        let (d, c) = best_pair_direction(&sq).unwrap();
        assert_eq!(c, 3);
        assert_eq!(d, dir(1, -1));
        let p = PointConfig::from_ints(&[(0, 0), (0, 1), (0, 2), (1, 3), (1, 4)]).unwrap();
        let (_, c) = best_pair_direction(&p).unwrap();
        assert!((3..=4).contains(&c));
        assert_eq!(direction_classes(&p, &dir(1, 3)), 3);
        let line = PointConfig::from_ints(&[(0, 0), (1, 1), (2, 2)]).unwrap();
        assert_eq!(best_pair_direction(&line).unwrap_err().code(), "collinear");
    }

    #[test]
    fn escape_nested_example() {
        let x = seq("S", &[0, 1]);
        let y = seq("T", &[0, 1, 2, 3, 4]);
        let rel = InfinitudeRelation::new(
            x.partition().ids(),
            y.partition().ids(),
            [(0, 0), (0, 1), (0, 2), (1, 3), (1, 4)],
        )
        .unwrap();
        let forbidden: BTreeSet<usize> = [2, 5].into();
        match escape(&x, &y, &rel, &forbidden).unwrap() {
            Escape::Found(w) => {
                assert!(!forbidden.contains(&w.class_count));
                let z = combine(&[w.alpha, w.beta], &[x, y], &[Some(rel)]).unwrap();
                assert_eq!(z.len(), w.class_count);
            }
            Escape::NotFound => panic!("expected an escape"),
        }
    }

    #[test]
    fn escape_collinear_example() {
        let x = seq("S", &[0, 1]);
        let y = seq("T", &[0, 2]);
        let rel = InfinitudeRelation::new(x.partition().ids(), y.partition().ids(), [(0, 0), (1, 1)]).unwrap();
        match escape(&x, &y, &rel, &[2].into()).unwrap() {
            Escape::Found(w) => {
                assert_eq!((w.alpha, w.beta), (Rat::int(2), Rat::int(-1)));
                assert_eq!(w.class_count, 1);
            }
            Escape::NotFound => panic!("expected the convergent combination"),
        }
    }

    #[test]
    fn escape_square_not_found() {
        // the square's coordinates: every pair direction gives 2 or 3 classes
        let x = seq("S", &[-1, 0, 1]);
        let y = seq("T", &[-1, 0, 1]);
        let rel = InfinitudeRelation::new(
            x.partition().ids(),
            y.partition().ids(),
            [(2, 1), (1, 2), (0, 1), (1, 0)],
        )
        .unwrap();
        assert_eq!(escape(&x, &y, &rel, &[2, 3, 4].into()).unwrap(), Escape::NotFound);
    }

    #[test]
    fn escape_json_fields() {
        let x = seq("S", &[0, 1]);
        let y = seq("T", &[0, 2]);
        let rel = InfinitudeRelation::identity(x.partition());
        let rel = InfinitudeRelation::new(rel.left().to_vec(), y.partition().ids(), [(0, 0), (1, 1)]).unwrap();
        let Escape::Found(w) = escape(&x, &y, &rel, &BTreeSet::new()).unwrap() else {
            panic!()
        };
        let s = serde_json::to_string(&w).unwrap();
        assert_eq!(
            s,
            r#"{"alpha":"2","beta":"-1","classCount":1,"forbidden":[],"points":[["0","0"],["1","2"]]}"#
        );
    }
}
