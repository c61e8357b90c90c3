//! Benchmark fixtures.

use accum_core::exact::Rat;
use accum_core::geometry::PointConfig;
use accum_core::ValueMatrix;

/// `rows × cols` matrix with distinct columns; the first row is `0, 1, …`.
pub fn pattern_matrix(rows: usize, cols: usize) -> ValueMatrix {
    let columns: Vec<Vec<Rat>> = (0..cols)
        .map(|j| {
            (0..rows)
                .map(|i| {
                    let (i, j) = (i as i64, j as i64);
                    Rat::int(if i == 0 { j } else { j * j * (i + 2) % 7 - 3 })
                })
                .collect()
        })
        .collect();
    ValueMatrix::from_columns(&columns).expect("nonempty")
}

/// Points `(i, i² mod p)` for `i < m`, in general position for prime `p > m`.
pub fn parabola_points(m: usize, p: i64) -> PointConfig {
    let pts: Vec<(i64, i64)> = (0..m as i64).map(|i| (i, i * i % p)).collect();
    PointConfig::from_ints(&pts).expect("distinct points")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_valid() {
        for (r, c) in [(2, 8), (3, 10), (4, 12)] {
            let m = pattern_matrix(r, c);
            assert!(m.has_canonical_columns());
            assert_eq!((m.rows(), m.cols()), (r, c));
        }
        assert_eq!(parabola_points(9, 11).len(), 9);
    }
}
