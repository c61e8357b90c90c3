//! Self-contained, re-verifiable certificates.
//!
//! A certificate embeds its inputs by value. Verification rebuilds the
//! certificate from `claim`, `params` and `inputs` alone, compares it with the
//! stored one, and independently re-evaluates every stored witness.

use std::collections::BTreeSet;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::constructors::{
    independent_family, nonconvergent_span, spaceable_rows, Mode,
    PolygonSpace, Split,
};
use crate::engine::{
    merge_columns, multiplicity, profile, profile_with_cap, refute_interval, MultiplicityProfile,
    Refutation, ValueMatrix, DEFAULT_CAP,
};
use crate::error::{Error, Result};
use crate::exact::Rat;
use crate::geometry::{escape, Escape};
use crate::lab::Flavor;
use crate::sequence::{combine, InfinitudeRelation, StepSequence};
use crate::TOOL_VERSION;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Claim {
    IntervalProfile,
    OddProfile,
    PolygonProfile,
    IndependentFamily,
    SpaceableRows,
    Profile,
    RefuteInterval,
    Escape,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Certificate {
    pub claim: Claim,
    pub params: Value,
    pub inputs: Value,
    pub witnesses: Value,
    pub verification: Value,
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    pub tool_version: String,
}

impl Certificate {
    fn exact(claim: Claim, params: Value, inputs: Value, witnesses: Value, verification: Value) -> Certificate {
        Certificate {
            claim,
            params,
            inputs,
            witnesses,
            verification,
            mode: Mode::Exact,
            tolerance: None,
            tool_version: TOOL_VERSION.to_string(),
        }
    }

    /// The verification transcript's verdict on the claim.
    pub fn holds(&self) -> bool {
        self.verification.get("holds").and_then(Value::as_bool) == Some(true)
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn field<T: DeserializeOwned>(v: &Value, key: &str) -> Result<T> {
    let x = v
        .get(key)
        .ok_or_else(|| Error::Parse(format!("missing field {key:?}")))?;
    serde_json::from_value(x.clone()).map_err(|e| Error::Parse(format!("field {key:?}: {e}")))
}

pub fn interval_certificate(n: usize, d: usize, matrix: &ValueMatrix) -> Result<Certificate> {
    let p = profile(matrix)?;
    let allowed: BTreeSet<usize> = (n..=n + d).collect();
    let holds = matrix.rows() == d + 1
        && p.is_within(&allowed)
        && p.achieved.contains(&n)
        && p.achieved.contains(&(n + d));
    Ok(Certificate::exact(
        Claim::IntervalProfile,
        json!({ "n": n, "d": d }),
        json!({ "matrix": matrix }),
        to_value(&p.witnesses),
        json!({ "profile": p.achieved, "allowed": allowed, "holds": holds }),
    ))
}

/// Directions `{-1,0,1}^k \ {0}`, in lexicographic order.
fn sign_directions(k: usize) -> Vec<Vec<Rat>> {
    let mut out: Vec<Vec<Rat>> = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|v| {
                [-1, 0, 1].into_iter().map(move |e| {
                    let mut w = v.clone();
                    w.push(Rat::int(e));
                    w
                })
            })
            .collect();
    }
    out.retain(|v| v.iter().any(|x| !x.is_zero()));
    out
}

/// Value set of `αᵀM` is symmetric under negation and contains 0.
pub fn symmetric_with_zero(m: &ValueMatrix, alpha: &[Rat]) -> Result<bool> {
    let vals: BTreeSet<Rat> = m.combine_values(alpha)?.into_iter().collect();
    Ok(vals.contains(&Rat::zero()) && vals.iter().all(|v| vals.contains(&-v)))
}

pub fn odd_certificate(k: usize, matrix: &ValueMatrix) -> Result<Certificate> {
    // exhaustive profile when small enough, otherwise every sign direction
    let (observed, exhaustive) = if matrix.cols() <= DEFAULT_CAP {
        (profile(matrix)?, true)
    } else {
        let mut p = MultiplicityProfile::default();
        for alpha in sign_directions(matrix.rows()) {
            let mu = multiplicity(matrix, &alpha)?;
            if p.achieved.insert(mu) {
                p.witnesses.insert(mu, alpha);
            }
        }
        (p, false)
    };
    let mut symmetric = true;
    for alpha in observed.witnesses.values().cloned().chain(sign_directions(matrix.rows())) {
        symmetric &= symmetric_with_zero(matrix, &alpha)?;
    }
    let all_odd = observed.achieved.iter().all(|m| m % 2 == 1);
    let min3 = observed.min().is_some_and(|m| m >= 3);
    Ok(Certificate::exact(
        Claim::OddProfile,
        json!({ "k": k }),
        json!({ "matrix": matrix }),
        to_value(&observed.witnesses),
        json!({
            "profile": observed.achieved,
            "exhaustive": exhaustive,
            "allOdd": all_odd,
            "minAtLeastThree": min3,
            "symmetricWithZero": symmetric,
            "holds": all_odd && min3 && symmetric && matrix.rows() == k,
        }),
    ))
}

pub fn polygon_certificate(n: usize, space: &PolygonSpace) -> Result<Certificate> {
    let counts = space.profile_counts()?;
    let expected: BTreeSet<usize> = [n, n + 1, 2 * n].into();
    let (witnesses, tolerance) = match space {
        PolygonSpace::Exact { matrix } => (to_value(&profile(matrix)?.witnesses), None),
        PolygonSpace::Approximate { tolerance, .. } => (json!({}), Some(*tolerance)),
    };
    Ok(Certificate {
        claim: Claim::PolygonProfile,
        params: json!({ "n": n }),
        inputs: json!({ "polygon": space }),
        witnesses,
        verification: json!({ "profile": counts, "expected": expected, "holds": counts == expected }),
        mode: space.mode(),
        tolerance,
        tool_version: TOOL_VERSION.to_string(),
    })
}

pub fn independent_certificate(k: usize, split: Split) -> Result<Certificate> {
    let fam = independent_family(k, split)?;
    let patterns = fam.nonempty_patterns();
    let independent = fam.is_independent();
    let (span_profile, witnesses) = if split == Split::Two && fam.atoms.len() <= DEFAULT_CAP {
        let p = profile(&nonconvergent_span(k)?)?;
        (Some(p.achieved), to_value(&p.witnesses))
    } else {
        (None, json!({}))
    };
    let nonconvergent = span_profile
        .as_ref()
        .map(|s| s.first().is_some_and(|&m| m >= 2));
    Ok(Certificate::exact(
        Claim::IndependentFamily,
        json!({ "k": k, "split": split }),
        json!({ "atoms": fam.atoms }),
        witnesses,
        json!({
            "nonemptyPatterns": patterns,
            "independent": independent,
            "spanProfile": span_profile,
            "holds": independent && nonconvergent != Some(false),
        }),
    ))
}

pub fn spaceable_certificate(n_max: usize, k_max: usize, flavor: Flavor) -> Result<Certificate> {
    let rows = spaceable_rows(n_max, k_max, flavor)?;
    let disjoint = rows.supports_disjoint();
    let unit = rows.row_sup();
    let mut isometric = true;
    for alpha in sign_directions(n_max) {
        isometric &= rows.combination(&alpha)?.sup_value() == unit;
    }
    Ok(Certificate::exact(
        Claim::SpaceableRows,
        json!({ "nMax": n_max, "kMax": k_max, "flavor": flavor }),
        json!({ "matrix": rows.matrix, "sequences": rows.sequences }),
        json!({}),
        json!({
            "coefficients": rows.coefficients,
            "disjoint": disjoint,
            "rowSup": unit,
            "signCombinations": 3usize.pow(n_max as u32) - 1,
            "isometric": isometric,
            "holds": disjoint && isometric,
        }),
    ))
}

pub fn profile_certificate(matrix: &ValueMatrix, cap: usize) -> Result<Certificate> {
    let (merged, groups) = merge_columns(matrix);
    let p = profile_with_cap(&merged, cap)?;
    let merged_note = (merged.cols() != matrix.cols()).then_some(groups);
    Ok(Certificate::exact(
        Claim::Profile,
        json!({ "cap": cap }),
        json!({ "matrix": matrix }),
        to_value(&p.witnesses),
        json!({ "mergedColumns": merged_note, "profile": p.achieved, "holds": true }),
    ))
}

pub fn refute_certificate(matrix: &ValueMatrix, n: usize, d: usize) -> Result<Certificate> {
    let r = refute_interval(matrix, n, d)?;
    let violates = r.multiplicity < n || r.multiplicity > n + d;
    Ok(Certificate::exact(
        Claim::RefuteInterval,
        json!({ "n": n, "d": d }),
        json!({ "matrix": matrix }),
        to_value(&r),
        json!({ "multiplicity": r.multiplicity, "violates": violates, "holds": violates }),
    ))
}

pub fn escape_certificate(
    x: &StepSequence,
    y: &StepSequence,
    rel: &InfinitudeRelation,
    forbidden: &BTreeSet<usize>,
) -> Result<Certificate> {
    let outcome = escape(x, y, rel, forbidden)?;
    let verification = match &outcome {
        Escape::Found(w) => {
            let z = combine(
                &[w.alpha.clone(), w.beta.clone()],
                &[x.clone(), y.clone()],
                &[Some(rel.clone())],
            )?;
            let ok = z.len() == w.class_count && !forbidden.contains(&z.len());
            json!({ "found": true, "recomputed": z.len(), "holds": ok })
        }
        Escape::NotFound => json!({ "found": false, "holds": false }),
    };
    Ok(Certificate::exact(
        Claim::Escape,
        json!({ "forbidden": forbidden }),
        json!({ "x": x, "y": y, "relation": rel }),
        to_value(&outcome),
        verification,
    ))
}

/// Recomputes a certificate from its claim, params and inputs.
pub fn rebuild(cert: &Certificate) -> Result<Certificate> {
    let p = &cert.params;
    let i = &cert.inputs;
    match cert.claim {
        Claim::IntervalProfile => interval_certificate(field(p, "n")?, field(p, "d")?, &field(i, "matrix")?),
        Claim::OddProfile => odd_certificate(field(p, "k")?, &field(i, "matrix")?),
        Claim::PolygonProfile => polygon_certificate(field(p, "n")?, &field(i, "polygon")?),
        Claim::IndependentFamily => independent_certificate(field(p, "k")?, field(p, "split")?),
        Claim::SpaceableRows => spaceable_certificate(field(p, "nMax")?, field(p, "kMax")?, field(p, "flavor")?),
        Claim::Profile => profile_certificate(&field(i, "matrix")?, field(p, "cap")?),
        Claim::RefuteInterval => refute_certificate(&field(i, "matrix")?, field(p, "n")?, field(p, "d")?),
        Claim::Escape => escape_certificate(
            &field(i, "x")?,
            &field(i, "y")?,
            &field(i, "relation")?,
            &field(p, "forbidden")?,
        ),
    }
}

fn check_profile_witnesses(matrix: &ValueMatrix, witnesses: &Value) -> Result<Vec<String>> {
    let map: std::collections::BTreeMap<usize, Vec<Rat>> = serde_json::from_value(witnesses.clone())
        .map_err(|e| Error::Parse(format!("witnesses: {e}")))?;
    let mut bad = Vec::new();
    for (k, alpha) in map {
        match multiplicity(matrix, &alpha) {
            Ok(mu) if mu == k => {}
            Ok(mu) => bad.push(format!("/witnesses/{k}: multiplicity is {mu}, not {k}")),
            Err(e) => bad.push(format!("/witnesses/{k}: {e}")),
        }
    }
    Ok(bad)
}

/// Re-evaluates the stored witnesses against the stored inputs.
pub fn check_witnesses(cert: &Certificate) -> Result<Vec<String>> {
    let i = &cert.inputs;
    match cert.claim {
        Claim::IntervalProfile | Claim::OddProfile => {
            check_profile_witnesses(&field(i, "matrix")?, &cert.witnesses)
        }
        Claim::Profile => {
            let (merged, _) = merge_columns(&field(i, "matrix")?);
            check_profile_witnesses(&merged, &cert.witnesses)
        }
        Claim::IndependentFamily => {
            let k: usize = field(&cert.params, "k")?;
            let split: Split = field(&cert.params, "split")?;
            if split == Split::Two && 1usize << k <= DEFAULT_CAP {
                check_profile_witnesses(&nonconvergent_span(k)?, &cert.witnesses)
            } else {
                Ok(Vec::new())
            }
        }
        Claim::PolygonProfile => match field::<PolygonSpace>(i, "polygon")? {
            PolygonSpace::Exact { matrix } => check_profile_witnesses(&matrix, &cert.witnesses),
            PolygonSpace::Approximate { .. } => Ok(Vec::new()),
        },
        Claim::SpaceableRows => Ok(Vec::new()),
        Claim::RefuteInterval => {
            let m: ValueMatrix = field(i, "matrix")?;
            let r: Refutation = serde_json::from_value(cert.witnesses.clone())
                .map_err(|e| Error::Parse(format!("witnesses: {e}")))?;
            let mu = multiplicity(&m, &r.alpha)?;
            Ok(if mu == r.multiplicity {
                Vec::new()
            } else {
                vec![format!("/witnesses/alpha: multiplicity is {mu}, not {}", r.multiplicity)]
            })
        }
        Claim::Escape => {
            let outcome: Escape = serde_json::from_value(cert.witnesses.clone())
                .map_err(|e| Error::Parse(format!("witnesses: {e}")))?;
            let Escape::Found(w) = outcome else {
                return Ok(Vec::new());
            };
            let x: StepSequence = field(i, "x")?;
            let y: StepSequence = field(i, "y")?;
            let rel: InfinitudeRelation = field(i, "relation")?;
            let z = combine(&[w.alpha, w.beta], &[x, y], &[Some(rel)])?;
            Ok(if z.len() == w.class_count {
                Vec::new()
            } else {
                vec![format!("/witnesses: combination has {} accumulation points, not {}", z.len(), w.class_count)]
            })
        }
    }
}

/// JSON-pointer path of the first place where `a` and `b` differ.
pub fn first_difference(a: &Value, b: &Value) -> Option<String> {
    fn walk(a: &Value, b: &Value, path: &mut String) -> bool {
        match (a, b) {
            (Value::Object(x), Value::Object(y)) => {
                let keys: BTreeSet<&String> = x.keys().chain(y.keys()).collect();
                for k in keys {
                    let len = path.len();
                    path.push('/');
                    path.push_str(k);
                    match (x.get(k), y.get(k)) {
                        (Some(u), Some(v)) => {
                            if walk(u, v, path) {
                                return true;
                            }
                        }
                        _ => return true,
                    }
                    path.truncate(len);
                }
                false
            }
            (Value::Array(x), Value::Array(y)) => {
                for (idx, (u, v)) in x.iter().zip(y).enumerate() {
                    let len = path.len();
                    path.push_str(&format!("/{idx}"));
                    if walk(u, v, path) {
                        return true;
                    }
                    path.truncate(len);
                }
                if x.len() != y.len() {
                    path.push_str(&format!("/{}", x.len().min(y.len())));
                    return true;
                }
                false
            }
            _ => a != b,
        }
    }
    let mut path = String::new();
    walk(a, b, &mut path).then(|| if path.is_empty() { "/".into() } else { path })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct VerifyReport {
    pub reproduced: bool,
    pub mismatch: Option<String>,
    pub witness_errors: Vec<String>,
    pub holds: bool,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.reproduced && self.witness_errors.is_empty()
    }
}

pub fn verify(cert: &Certificate) -> Result<VerifyReport> {
    let witness_errors = check_witnesses(cert)?;
    let fresh = rebuild(cert)?;
    let mismatch = first_difference(&to_value(cert), &to_value(&fresh));
    Ok(VerifyReport {
        reproduced: mismatch.is_none(),
        mismatch,
        witness_errors,
        holds: fresh.holds(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::interval_space;
    use crate::constructors::{odd_space, polygon_space};

    #[test]
    fn interval_round_trip() {
        let m = interval_space(2, 1).unwrap();
        let c = interval_certificate(2, 1, &m).unwrap();
        assert!(c.holds());
        let text = serde_json::to_string(&c).unwrap();
        let back: Certificate = serde_json::from_str(&text).unwrap();
        let r = verify(&back).unwrap();
        assert!(r.ok(), "{r:?}");
    }

    #[test]
    fn tampered_witness_is_located() {
        let m = interval_space(2, 1).unwrap();
        let mut c = interval_certificate(2, 1, &m).unwrap();
        assert_eq!(c.witnesses["2"], json!(["1", "0"]));
        c.witnesses["2"] = json!(["1", "-1"]);
        let r = verify(&c).unwrap();
        assert!(!r.ok());
        assert_eq!(r.mismatch.as_deref(), Some("/witnesses/2/1"));
        assert_eq!(r.witness_errors.len(), 1);
    }

    #[test]
    fn difference_paths() {
        assert_eq!(first_difference(&json!({"a": [1, 2]}), &json!({"a": [1, 2]})), None);
        assert_eq!(first_difference(&json!({"a": [1, 2]}), &json!({"a": [1, 3]})).as_deref(), Some("/a/1"));
        assert_eq!(first_difference(&json!({"a": 1}), &json!({"b": 1})).as_deref(), Some("/a"));
        assert_eq!(first_difference(&json!([1]), &json!([1, 2])).as_deref(), Some("/1"));
        assert_eq!(first_difference(&json!(1), &json!(2)).as_deref(), Some("/"));
    }

    #[test]
    fn every_claim_verifies() {
        let certs = vec![
            odd_certificate(2, &odd_space(2).unwrap()).unwrap(),
            odd_certificate(3, &odd_space(3).unwrap()).unwrap(),
            polygon_certificate(3, &polygon_space(3).unwrap()).unwrap(),
            polygon_certificate(5, &polygon_space(5).unwrap()).unwrap(),
            independent_certificate(3, Split::Two).unwrap(),
            independent_certificate(2, Split::Three).unwrap(),
            spaceable_certificate(2, 3, Flavor::Dyadic).unwrap(),
            profile_certificate(&ValueMatrix::from_ints(&[&[1, 2, 1]]).unwrap(), DEFAULT_CAP).unwrap(),
            refute_certificate(&ValueMatrix::from_ints(&[&[0, 1], &[1, 0]]).unwrap(), 2, 0).unwrap(),
        ];
        for c in certs {
            assert!(c.holds(), "{:?}", c.claim);
            let text = serde_json::to_string(&c).unwrap();
            let back: Certificate = serde_json::from_str(&text).unwrap();
            let r = verify(&back).unwrap();
            assert!(r.ok(), "{:?} {r:?}", c.claim);
        }
    }

    #[test]
    fn approximate_polygon_records_tolerance() {
        let c = polygon_certificate(7, &polygon_space(7).unwrap()).unwrap();
        assert_eq!(c.mode, Mode::Approximate);
        assert_eq!(c.tolerance, Some(1e-9));
        assert_eq!(c.verification["profile"], json!([7, 8, 14]));
    }
}
