use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::realization::AtomRealization;
use crate::error::{Error, Result};
use crate::exact::Rat;

/// Stern's diatomic sequence: `fusc(0)=0, fusc(1)=1, fusc(2n)=fusc(n), fusc(2n+1)=fusc(n)+fusc(n+1)`.
pub fn fusc(mut n: u64) -> u64 {
    let (mut a, mut b) = (1u64, 0u64);
    while n > 0 {
        if n & 1 == 1 {
            b += a;
        } else {
            a += b;
        }
        n >>= 1;
    }
    b
}

/// The `i`-th rational of `(0,1)` in Calkin–Wilf order: 1/2, 1/3, 2/3, 1/4, 3/5, …
///
/// These are the left children in the Calkin–Wilf tree, `fusc(2t)/fusc(2t+1)` for `t = i+1`.
pub fn unit_rational(i: u64) -> Rat {
    let t = 2 * (i + 1);
    Rat::new(fusc(t), fusc(t + 1))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Flavor {
    /// `a_k = 2^{-k}`.
    #[default]
    Dyadic,
    /// `a_k` = the `k`-th rational of `(0,1)` in Calkin–Wilf order.
    RationalDense,
}

impl Flavor {
    pub fn coefficient(&self, k: u64) -> Rat {
        match self {
            Flavor::Dyadic => Rat::int(2).pow(-(k as i32)),
            Flavor::RationalDense => unit_rational(k),
        }
    }
}

fn check_unit(q: &Rat) -> Result<()> {
    if !q.is_positive() || q >= &Rat::one() {
        return Err(Error::Range(format!("q = {q} is not in (0,1)")));
    }
    Ok(())
}

/// Descriptor of a concrete sequence `ω → ℚ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Generator {
    Constant {
        value: Rat,
    },
    /// `f_q`: the value `q^j` on atom `j`.
    Fq {
        q: Rat,
    },
    /// `Σ dₙ f_{qₙ}`: the value `h_j = Σ dₙ qₙ^j` on atom `j`.
    Combo {
        d: Vec<Rat>,
        q: Vec<Rat>,
    },
    /// `q^j` times the `i`-th rational of `(0,1)` at the `i`-th index of atom `j`.
    Rich {
        q: Rat,
    },
    /// `alpha_n · a_k` on block `(n, k)` for `k ≤ k_max`, zero elsewhere.
    Spaceable {
        alpha: Vec<Rat>,
        n_max: u64,
        k_max: u64,
        flavor: Flavor,
    },
}

impl Generator {
    pub fn validate(&self) -> Result<()> {
        match self {
            Generator::Constant { .. } => Ok(()),
            Generator::Fq { q } | Generator::Rich { q } => check_unit(q),
            Generator::Combo { d, q } => check_combo(d, q),
            Generator::Spaceable { alpha, n_max, .. } => {
                if alpha.len() as u64 > *n_max {
                    return Err(Error::Shape(format!(
                        "{} coefficients for n_max = {n_max}",
                        alpha.len()
                    )));
                }
                Ok(())
            }
        }
    }
}

fn check_combo(d: &[Rat], q: &[Rat]) -> Result<()> {
    if d.len() != q.len() {
        return Err(Error::Shape(format!("{} weights for {} ratios", d.len(), q.len())));
    }
    if d.is_empty() {
        return Err(Error::Empty("no terms".into()));
    }
    if d.iter().any(Rat::is_zero) {
        return Err(Error::Range("zero weight".into()));
    }
    for x in q {
        check_unit(x)?;
    }
    if q.iter().collect::<BTreeSet<_>>().len() != q.len() {
        return Err(Error::Degenerate("ratios are not distinct".into()));
    }
    Ok(())
}

/// `h_j = Σ dₙ qₙ^j`.
pub fn h_value(d: &[Rat], q: &[Rat], j: u32) -> Rat {
    d.iter().zip(q).map(|(dn, qn)| dn * qn.pow(j as i32)).sum()
}

/// A generator bound to a realization, with per-atom values memoized.
#[derive(Clone, Debug)]
pub struct PrefixSequence {
    generator: Generator,
    realization: AtomRealization,
    atom_values: BTreeMap<u64, Rat>,
}

impl PrefixSequence {
    pub fn new(generator: Generator, realization: AtomRealization) -> Result<PrefixSequence> {
        generator.validate()?;
        Ok(PrefixSequence {
            generator,
            realization,
            atom_values: BTreeMap::new(),
        })
    }

    pub fn generator(&self) -> &Generator {
        &self.generator
    }

    pub fn realization(&self) -> AtomRealization {
        self.realization
    }

    fn per_atom(&mut self, j: u64) -> Rat {
        let g = &self.generator;
        self.atom_values
            .entry(j)
            .or_insert_with(|| match g {
                Generator::Fq { q } | Generator::Rich { q } => q.pow(j as i32),
                Generator::Combo { d, q } => h_value(d, q, j as u32),
                Generator::Constant { value } => value.clone(),
                Generator::Spaceable { .. } => Rat::zero(),
            })
            .clone()
    }

    /// Exact value at index `m`.
    pub fn value(&mut self, m: u64) -> Rat {
        match &self.generator {
            Generator::Rich { .. } => {
                let i = self.realization.position(m);
                let j = self.realization.atom(m);
                self.per_atom(j) * unit_rational(i)
            }
            Generator::Spaceable {
                alpha,
                k_max,
                flavor,
                ..
            } => {
                let (n, k) = self.realization.block(m);
                match alpha.get(n as usize) {
                    Some(a) if k <= *k_max => a * flavor.coefficient(k),
                    _ => Rat::zero(),
                }
            }
            _ => {
                let j = self.realization.atom(m);
                self.per_atom(j)
            }
        }
    }

    pub fn prefix(&mut self, len: u64) -> Vec<Rat> {
        (0..len).map(|m| self.value(m)).collect()
    }

    pub fn prefix_f64(&mut self, len: u64) -> Vec<f64> {
        (0..len).map(|m| self.value(m).to_f64()).collect()
    }
}

pub fn gen_fq(q: Rat, realization: AtomRealization) -> Result<PrefixSequence> {
    PrefixSequence::new(Generator::Fq { q }, realization)
}

pub fn gen_combo(d: Vec<Rat>, q: Vec<Rat>, realization: AtomRealization) -> Result<PrefixSequence> {
    PrefixSequence::new(Generator::Combo { d, q }, realization)
}

pub fn gen_rich(q: Rat, realization: AtomRealization) -> Result<PrefixSequence> {
    PrefixSequence::new(Generator::Rich { q }, realization)
}

pub fn gen_spaceable(
    alpha: Vec<Rat>,
    n_max: u64,
    k_max: u64,
    flavor: Flavor,
    realization: AtomRealization,
) -> Result<PrefixSequence> {
    PrefixSequence::new(
        Generator::Spaceable {
            alpha,
            n_max,
            k_max,
            flavor,
        },
        realization,
    )
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HReport {
    pub values: Vec<Rat>,
    pub distinct: usize,
    /// Values taken more than once, with the indices `j` where they occur.
    pub repeats: Vec<(Rat, Vec<usize>)>,
}

pub fn h_sequence(d: &[Rat], q: &[Rat], count: usize) -> Result<HReport> {
    check_combo(d, q)?;
    let values: Vec<Rat> = (0..count as u32).map(|j| h_value(d, q, j)).collect();
    let mut at: BTreeMap<&Rat, Vec<usize>> = BTreeMap::new();
    for (j, v) in values.iter().enumerate() {
        at.entry(v).or_default().push(j);
    }
    let distinct = at.len();
    let repeats = at
        .into_iter()
        .filter(|(_, js)| js.len() > 1)
        .map(|(v, js)| (v.clone(), js))
        .collect();
    Ok(HReport {
        values,
        distinct,
        repeats,
    })
}
