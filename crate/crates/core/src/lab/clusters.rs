use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::Rat;

/// Merge radius for cluster estimation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Epsilon {
    Absolute(f64),
    /// A multiple of the largest absolute value in the tail (of 1 when the tail is all zero).
    Relative(f64),
}

impl Default for Epsilon {
    fn default() -> Self {
        Epsilon::Relative(1e-6)
    }
}

pub const DEFAULT_TAIL: f64 = 0.5;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterEstimate {
    /// `(mean, support count)` in increasing order of value.
    pub centers: Vec<(f64, usize)>,
    /// Absolute merge radius actually used.
    pub epsilon: f64,
    /// Number of trailing values examined.
    pub tail: usize,
}

/// Single-linkage clustering of the last `⌈tail_fraction·N⌉` values at radius `ε`.
pub fn estimate_clusters(values: &[f64], tail_fraction: f64, eps: Epsilon) -> Result<ClusterEstimate> {
    if values.is_empty() {
        return Err(Error::Empty("no values to cluster".into()));
    }
    if !(tail_fraction > 0.0 && tail_fraction <= 1.0) {
        return Err(Error::Range(format!("tail fraction {tail_fraction} not in (0,1]")));
    }
    let n = values.len();
    let tail_len = ((n as f64) * tail_fraction).ceil().clamp(1.0, n as f64) as usize;
    let mut tail: Vec<f64> = values[n - tail_len..].to_vec();
    if tail.iter().any(|v| !v.is_finite()) {
        return Err(Error::Range("non-finite value in tail".into()));
    }
    tail.sort_by(f64::total_cmp);
    let radius = match eps {
        Epsilon::Absolute(e) => e,
        Epsilon::Relative(r) => {
            let scale = tail.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            r * if scale > 0.0 { scale } else { 1.0 }
        }
    };
    if radius.is_nan() || radius <= 0.0 {
        return Err(Error::Range(format!("merge radius {radius} must be positive")));
    }
    let mut centers = Vec::new();
    let mut start = 0;
    for i in 1..=tail.len() {
        if i == tail.len() || tail[i] - tail[i - 1] > radius {
            let group = &tail[start..i];
            let mean = group.iter().sum::<f64>() / group.len() as f64;
            centers.push((mean, group.len()));
            start = i;
        }
    }
    Ok(ClusterEstimate {
        centers,
        epsilon: radius,
        tail: tail_len,
    })
}

/// `index,value` rows; values in scientific notation with 17 significant digits.
pub fn to_csv(values: &[Rat], exact: bool) -> String {
    let mut out = String::from("index,value\n");
    for (i, v) in values.iter().enumerate() {
        if exact {
            writeln!(out, "{i},{v}").expect("write to string");
        } else {
            writeln!(out, "{i},{:.16e}", v.to_f64()).expect("write to string");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn constant_sequence_one_center() {
        let est = estimate_clusters(&[5.0; 100], 0.5, Epsilon::default()).unwrap();
        assert_eq!(est.centers, vec![(5.0, 50)]);
        assert_eq!(est.tail, 50);
    }

    #[test]
    fn separated_groups() {
        let vals = [0.0, 1.0, 0.0, 1.0, 0.001, 1.0005, 3.0, 3.0];
        let est = estimate_clusters(&vals, 1.0, Epsilon::Absolute(0.01)).unwrap();
        let counts: Vec<usize> = est.centers.iter().map(|c| c.1).collect();
        assert_eq!(counts, vec![3, 3, 2]);
        assert!(est.centers.windows(2).all(|w| w[1].0 - w[0].0 > est.epsilon));
    }

    #[test]
    fn errors() {
        assert_eq!(estimate_clusters(&[], 0.5, Epsilon::default()).unwrap_err().code(), "empty");
        assert!(estimate_clusters(&[1.0], 0.0, Epsilon::default()).is_err());
        assert_eq!(estimate_clusters(&[1.0], 1.0, Epsilon::Absolute(0.0)).unwrap_err().code(), "range");
    }

    #[test]
    fn zero_tail_is_one_cluster() {
        let e = estimate_clusters(&[0.0, 0.0], 1.0, Epsilon::default()).unwrap();
        assert_eq!(e.centers, vec![(0.0, 2)]);
    }

    #[test]
    fn csv_forms() {
        let v = vec![rat(1, 3), Rat::one()];
        assert_eq!(to_csv(&v, true), "index,value\n0,1/3\n1,1\n");
        let s = to_csv(&v, false);
        assert!(s.contains("0,3.3333333333333331e-1"), "{s}");
    }
}
