use serde::{Deserialize, Serialize};

/// How indices of ω are split into infinitely many infinite atoms.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    /// Atom `j` holds the indices `m` with `ν₂(m+1) = j`.
    #[default]
    DyadicValuation,
    /// `m = pair(a, i)` puts `m` at position `i` of atom `a`; atom `a` is block `unpair(a)`.
    Pairing,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AtomLabel {
    Dyadic(u64),
    Pair { n: u64, k: u64 },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct AtomRealization {
    pub scheme: Scheme,
}

/// 2-adic valuation of a positive integer.
pub fn nu2(x: u64) -> u32 {
    debug_assert!(x > 0);
    x.trailing_zeros()
}

pub fn cantor_pair(n: u64, k: u64) -> u64 {
    (n + k) * (n + k + 1) / 2 + k
}

pub fn cantor_unpair(z: u64) -> (u64, u64) {
    let w = ((((8 * z + 1) as f64).sqrt() - 1.0) / 2.0).floor() as u64;
    // guard against float rounding near perfect squares
    let w = (w.saturating_sub(1)..=w + 1)
        .rev()
        .find(|&w| w * (w + 1) / 2 <= z)
        .expect("some triangular number below z");
    let t = w * (w + 1) / 2;
    let k = z - t;
    (w - k, k)
}

impl AtomRealization {
    pub fn new(scheme: Scheme) -> AtomRealization {
        AtomRealization { scheme }
    }

    /// Atom containing `m`.
    pub fn atom(&self, m: u64) -> u64 {
        match self.scheme {
            Scheme::DyadicValuation => nu2(m + 1) as u64,
            Scheme::Pairing => cantor_unpair(m).0,
        }
    }

    /// Position of `m` inside its atom, counting from 0.
    pub fn position(&self, m: u64) -> u64 {
        match self.scheme {
            Scheme::DyadicValuation => ((m + 1) >> nu2(m + 1)) / 2,
            Scheme::Pairing => cantor_unpair(m).1,
        }
    }

    /// The `i`-th index of atom `j`.
    pub fn index(&self, j: u64, i: u64) -> u64 {
        match self.scheme {
            Scheme::DyadicValuation => ((2 * i + 1) << j) - 1,
            Scheme::Pairing => cantor_pair(j, i),
        }
    }

    pub fn label(&self, m: u64) -> AtomLabel {
        let j = self.atom(m);
        match self.scheme {
            Scheme::DyadicValuation => AtomLabel::Dyadic(j),
            Scheme::Pairing => {
                let (n, k) = cantor_unpair(j);
                AtomLabel::Pair { n, k }
            }
        }
    }

    /// Doubly indexed block `(n, k)` containing `m`: the atom index run through the unpairing.
    pub fn block(&self, m: u64) -> (u64, u64) {
        cantor_unpair(self.atom(m))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dyadic_atoms() {
        let r = AtomRealization::default();
        for m in [0, 2, 4, 100] {
            assert_eq!(r.atom(m), 0);
        }
        assert_eq!(r.atom(1), 1);
        assert_eq!(r.atom(3), 2);
        assert_eq!(r.label(5), AtomLabel::Dyadic(1));
    }

    #[test]
    fn index_and_position_invert() {
        for scheme in [Scheme::DyadicValuation, Scheme::Pairing] {
            let r = AtomRealization::new(scheme);
            for m in 0..2000u64 {
                assert_eq!(r.index(r.atom(m), r.position(m)), m);
            }
        }
    }

    #[test]
    fn pairing_round_trip() {
        for z in 0..5000u64 {
            let (n, k) = cantor_unpair(z);
            assert_eq!(cantor_pair(n, k), z);
        }
        let r = AtomRealization::new(Scheme::Pairing);
        assert_eq!(r.label(0), AtomLabel::Pair { n: 0, k: 0 });
        assert_eq!(r.block(0), (0, 0));
        // block (2, 8) starts early enough for prefix work
        let a = cantor_pair(2, 8);
        assert!(r.index(a, 0) < 3000);
        assert_eq!(r.block(r.index(a, 5)), (2, 8));
    }
}
