//! Set partitions of `{0, …, n-1}` as restricted growth strings.

/// Iterator over set partitions of `{0..n}` into at most `max_blocks` blocks.
///
/// Each item is a restricted growth string `a` with `a[0] = 0` and
/// `a[i] ≤ 1 + max(a[..i])`; `a[i]` is the block of element `i`.
pub struct SetPartitions {
    n: usize,
    max_blocks: usize,
    current: Option<Vec<usize>>,
}

impl SetPartitions {
    pub fn new(n: usize, max_blocks: usize) -> SetPartitions {
        let current = if n == 0 {
            Some(Vec::new())
        } else if max_blocks == 0 {
            None
        } else {
            Some(vec![0; n])
        };
        SetPartitions {
            n,
            max_blocks,
            current,
        }
    }

    pub fn all(n: usize) -> SetPartitions {
        SetPartitions::new(n, n.max(1))
    }
}

impl Iterator for SetPartitions {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let mut a = out.clone();
        // prefix maxima
        let mut pmax = vec![0; self.n];
        for i in 1..self.n {
            pmax[i] = pmax[i - 1].max(a[i - 1]);
        }
        let mut advanced = false;
        for i in (1..self.n).rev() {
            if a[i] <= pmax[i] && a[i] + 1 < self.max_blocks {
                a[i] += 1;
                for x in a.iter_mut().skip(i + 1) {
                    *x = 0;
                }
                advanced = true;
                break;
            }
        }
        self.current = advanced.then_some(a);
        Some(out)
    }
}

/// Groups element indices by block label.
pub fn blocks(rgs: &[usize]) -> Vec<Vec<usize>> {
    let count = rgs.iter().max().map_or(0, |m| m + 1);
    let mut out = vec![Vec::new(); count];
    for (i, &b) in rgs.iter().enumerate() {
        out[b].push(i);
    }
    out
}

/// Bell number `B(n)`.
pub fn bell(n: usize) -> u128 {
    let mut row = vec![1u128];
    for _ in 0..n {
        let mut next = vec![*row.last().expect("nonempty row")];
        for x in &row {
            let v = next.last().expect("nonempty") + x;
            next.push(v);
        }
        row = next;
    }
    row[0]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_match_bell_and_stirling() {
        for n in 0..=8 {
            assert_eq!(SetPartitions::all(n).count() as u128, bell(n));
        }
        // S(5,1)+S(5,2) = 1 + 15
        assert_eq!(SetPartitions::new(5, 2).count(), 16);
        assert_eq!(SetPartitions::new(3, 0).count(), 0);
    }

    #[test]
    fn order_and_blocks() {
        let all: Vec<_> = SetPartitions::all(3).collect();
        assert_eq!(
            all,
            vec![
                vec![0, 0, 0],
                vec![0, 0, 1],
                vec![0, 1, 0],
                vec![0, 1, 1],
                vec![0, 1, 2]
            ]
        );
        assert_eq!(blocks(&[0, 1, 0, 2]), vec![vec![0, 2], vec![1], vec![3]]);
        assert_eq!(bell(12), 4_213_597);
    }
}
