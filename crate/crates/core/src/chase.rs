//! Dimension chasing in finite exact sequences of vector spaces.
//!
//! The only inference rule is the alternating-sum identity of an exact
//! sequence, applied to every segment delimited by zero terms. [`solve`] uses it
//! one segment at a time; [`chain`] additionally combines the identities of
//! several sequences that share labels by exact elimination, which is what
//! "combining these exact sequences" amounts to.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::ChaseError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Term {
    Known { dim: u64, label: String },
    Unknown { label: String },
}

impl Term {
    pub fn known(dim: u64, label: impl Into<String>) -> Self {
        Term::Known {
            dim,
            label: label.into(),
        }
    }

    pub fn unknown(label: impl Into<String>) -> Self {
        Term::Unknown {
            label: label.into(),
        }
    }

    /// An unlabelled zero, used to cut a sequence.
    pub fn zero() -> Self {
        Term::known(0, "")
    }

    /// Known when `dim` is `Some`, otherwise unknown.
    pub fn maybe(dim: Option<u64>, label: impl Into<String>) -> Self {
        match dim {
            Some(d) => Term::known(d, label),
            None => Term::unknown(label),
        }
    }

    pub fn label(&self) -> &str {
        match self {
            Term::Known { label, .. } | Term::Unknown { label } => label,
        }
    }
}

/// An exact sequence `0 → V_1 → … → V_k → 0`; the flanking zeros are implicit.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactSequence {
    pub terms: Vec<Term>,
}

impl ExactSequence {
    pub fn new(terms: Vec<Term>) -> Self {
        Self { terms }
    }

    /// `0 → a → b → 0`: records an isomorphism between two labelled spaces.
    pub fn isomorphism(a: impl Into<String>, b: impl Into<String>) -> Self {
        Self::new(vec![Term::unknown(a), Term::unknown(b)])
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.terms.iter().map(Term::label).filter(|l| !l.is_empty())
    }
}

/// Outcome of a chase: every forced label with its dimension, plus the labels
/// left undetermined.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Solution {
    pub values: BTreeMap<String, u64>,
    pub unresolved: BTreeSet<String>,
}

impl Solution {
    pub fn get(&self, label: &str) -> Result<u64, ChaseError> {
        self.values
            .get(label)
            .copied()
            .ok_or_else(|| ChaseError::Unresolvable {
                label: label.to_string(),
            })
    }
}

/// Resolves the unknowns of a single sequence that sit alone in their segment.
///
/// Known labelled terms count as given; returned values only cover labels that
/// were unknown.
pub fn solve(seq: &ExactSequence) -> Result<Solution, ChaseError> {
    run(std::slice::from_ref(seq), false)
}

/// Solves a family of sequences jointly, propagating labels across them until
/// nothing new is forced. `shared_labels` must each occur in at least two of
/// the sequences.
pub fn chain(seqs: &[ExactSequence], shared_labels: &[&str]) -> Result<Solution, ChaseError> {
    for label in shared_labels {
        let count = seqs
            .iter()
            .filter(|s| s.labels().any(|l| l == *label))
            .count();
        if count < 2 {
            return Err(ChaseError::UnsharedLabel {
                label: label.to_string(),
            });
        }
    }
    run(seqs, true)
}

/// One linear identity `Σ coeff·x = rhs` over the unknown labels.
struct Equation {
    coeffs: BTreeMap<String, i64>,
    rhs: BigInt,
}

fn run(seqs: &[ExactSequence], eliminate: bool) -> Result<Solution, ChaseError> {
    let mut given: BTreeMap<String, u64> = BTreeMap::new();
    let mut unknown: BTreeSet<String> = BTreeSet::new();
    for term in seqs.iter().flat_map(|s| s.terms.iter()) {
        match term {
            Term::Known { dim, label } if !label.is_empty() => {
                if let Some(prev) = given.insert(label.clone(), *dim) {
                    if prev != *dim {
                        return Err(ChaseError::Inconsistent {
                            detail: format!("{label} given as both {prev} and {dim}"),
                        });
                    }
                }
            }
            Term::Known { .. } => {}
            Term::Unknown { label } => {
                unknown.insert(label.clone());
            }
        }
    }
    let mut values = given.clone();

    loop {
        let mut equations = Vec::new();
        let mut progress = false;
        for seq in seqs {
            let eqs: Vec<_> = segment_equations(seq, &values).collect();
            for eq in eqs {
                let eq = eq?;
                match eq.coeffs.len() {
                    0 if !eq.rhs.is_zero() => {
                        return Err(ChaseError::Inconsistent {
                            detail: format!("alternating sum is {} instead of 0", -eq.rhs),
                        });
                    }
                    0 => {}
                    1 => {
                        let (label, c) = eq.coeffs.into_iter().next().unwrap();
                        let v = BigRational::new(eq.rhs, BigInt::from(c));
                        values.insert(label.clone(), to_dimension(&label, &v)?);
                        progress = true;
                    }
                    _ => equations.push(eq),
                }
            }
        }
        if progress {
            continue;
        }
        if eliminate && !equations.is_empty() {
            let forced = eliminate_forced(&equations)?;
            if !forced.is_empty() {
                for (label, v) in forced {
                    values.insert(label.clone(), to_dimension(&label, &v)?);
                }
                continue;
            }
        }
        break;
    }

    let unresolved = unknown
        .iter()
        .filter(|l| !values.contains_key(*l))
        .cloned()
        .collect();
    values.retain(|l, _| unknown.contains(l));
    Ok(Solution { values, unresolved })
}

/// Value of `label`, whether given in `seqs` or resolved in `sol`.
pub fn value_of(seqs: &[ExactSequence], sol: &Solution, label: &str) -> Option<u64> {
    sol.values.get(label).copied().or_else(|| {
        seqs.iter().flat_map(|s| &s.terms).find_map(|t| match t {
            Term::Known { dim, label: l } if l == label => Some(*dim),
            _ => None,
        })
    })
}

fn to_dimension(label: &str, v: &BigRational) -> Result<u64, ChaseError> {
    if !v.is_integer() {
        return Err(ChaseError::Inconsistent {
            detail: format!("{label} forced to the non-integer {v}"),
        });
    }
    if v.is_negative() {
        return Err(ChaseError::NegativeDimension {
            label: label.to_string(),
            value: v.to_string(),
        });
    }
    v.to_integer()
        .to_u64()
        .ok_or_else(|| ChaseError::Inconsistent {
            detail: format!("{label} = {v} does not fit a dimension"),
        })
}

/// Splits at zero terms (after substituting what is known) and emits the
/// alternating-sum identity of each segment.
fn segment_equations<'a>(
    seq: &'a ExactSequence,
    values: &'a BTreeMap<String, u64>,
) -> impl Iterator<Item = Result<Equation, ChaseError>> + 'a {
    let resolved: Vec<Result<u64, &str>> = seq
        .terms
        .iter()
        .map(|t| match t {
            Term::Known { dim, .. } => Ok(*dim),
            Term::Unknown { label } => values.get(label).copied().ok_or(label.as_str()),
        })
        .collect();
    let mut segments: Vec<Vec<Result<u64, &str>>> = vec![Vec::new()];
    for r in resolved {
        if r == Ok(0) {
            segments.push(Vec::new());
        } else {
            segments.last_mut().unwrap().push(r);
        }
    }
    segments
        .into_iter()
        .filter(|s| !s.is_empty())
        .map(|segment| {
            let mut coeffs: BTreeMap<String, i64> = BTreeMap::new();
            let mut constant = BigInt::zero();
            for (i, term) in segment.into_iter().enumerate() {
                let sign: i64 = if i % 2 == 0 { 1 } else { -1 };
                match term {
                    Ok(d) => constant += BigInt::from(d) * sign,
                    Err(label) => *coeffs.entry(label.to_string()).or_default() += sign,
                }
            }
            coeffs.retain(|_, c| *c != 0);
            Ok(Equation {
                coeffs,
                rhs: -constant,
            })
        })
}

/// Row-reduces the system and returns every label pinned to a single value.
fn eliminate_forced(equations: &[Equation]) -> Result<Vec<(String, BigRational)>, ChaseError> {
    let labels: Vec<&String> = equations
        .iter()
        .flat_map(|e| e.coeffs.keys())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let index: BTreeMap<&String, usize> = labels.iter().enumerate().map(|(i, l)| (*l, i)).collect();
    let width = labels.len();
    let mut rows: Vec<Vec<BigRational>> = equations
        .iter()
        .map(|e| {
            let mut row = vec![BigRational::zero(); width + 1];
            for (l, c) in &e.coeffs {
                row[index[l]] = BigRational::from_integer(BigInt::from(*c));
            }
            row[width] = BigRational::from_integer(e.rhs.clone());
            row
        })
        .collect();

    let mut pivot_row = 0;
    for col in 0..width {
        let Some(found) = (pivot_row..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(pivot_row, found);
        let inv = BigRational::one() / &rows[pivot_row][col];
        for x in rows[pivot_row].iter_mut() {
            *x *= &inv;
        }
        let pivot = rows[pivot_row].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != pivot_row && !row[col].is_zero() {
                let factor = row[col].clone();
                for (x, p) in row.iter_mut().zip(&pivot) {
                    *x -= &factor * p;
                }
            }
        }
        pivot_row += 1;
    }

    let mut forced = Vec::new();
    for row in &rows {
        let nonzero: Vec<usize> = (0..width).filter(|&c| !row[c].is_zero()).collect();
        match nonzero.as_slice() {
            [] if !row[width].is_zero() => {
                return Err(ChaseError::Inconsistent {
                    detail: "combined alternating sums contradict each other".to_string(),
                });
            }
            [c] => forced.push((labels[*c].clone(), row[width].clone() / &row[*c])),
            _ => {}
        }
    }
    Ok(forced)
}

/// He's exact sequence relating Hom/Ext of pairs `Λ' = (Γ', F')`,
/// `Λ'' = (Γ'', F'')` to Hom/Ext of the underlying sheaves:
///
/// `0 → Hom(Λ',Λ'') → Hom(F',F'') → Hom(Γ', H⁰(F'')/Γ'') → Ext¹(Λ',Λ'') → Ext¹(F',F'')
///  → Hom(Γ', H¹(F'')) → Ext²(Λ',Λ'') → Ext²(F',F'') → Hom(Γ', H²(F'')) → 0`
#[derive(Clone, Debug)]
pub struct PairSequenceTemplate<'a> {
    /// Namespace of the pair labels, e.g. `L1|L2`.
    pub pair_ns: &'a str,
    /// Namespace of the sheaf labels, shared with the resolution chases.
    pub sheaf_ns: &'a str,
    pub source_gamma: u64,
    pub target_gamma: u64,
    /// `h⁰, h¹, h²` of `F''`.
    pub target_cohomology: [u64; 3],
    pub hom_pairs: Option<u64>,
    pub ext1_pairs: Option<u64>,
}

impl PairSequenceTemplate<'_> {
    pub fn instantiate(&self) -> ExactSequence {
        let [h0, h1, h2] = self.target_cohomology;
        let g = self.source_gamma;
        let p = self.pair_ns;
        let s = self.sheaf_ns;
        ExactSequence::new(vec![
            Term::maybe(self.hom_pairs, pair_label(p, 0)),
            Term::unknown(sheaf_label(s, 0)),
            Term::known(
                g * h0.saturating_sub(self.target_gamma),
                format!("{p}/Hom(G',H0''/G'')"),
            ),
            Term::maybe(self.ext1_pairs, pair_label(p, 1)),
            Term::unknown(sheaf_label(s, 1)),
            Term::known(g * h1, format!("{p}/Hom(G',H1'')")),
            Term::unknown(pair_label(p, 2)),
            Term::unknown(sheaf_label(s, 2)),
            Term::known(g * h2, format!("{p}/Hom(G',H2'')")),
        ])
    }
}

/// Label of `Ext^i` between two pairs in namespace `ns`.
pub fn pair_label(ns: &str, degree: u8) -> String {
    match degree {
        0 => format!("{ns}/Hom"),
        i => format!("{ns}/Ext{i}pairs"),
    }
}

/// Label of `Ext^i` between two sheaves in namespace `ns`.
pub fn sheaf_label(ns: &str, degree: u8) -> String {
    match degree {
        0 => format!("{ns}/Hom"),
        i => format!("{ns}/Ext{i}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(d: u64) -> Term {
        Term::known(d, "")
    }

    #[test]
    fn short_exact_sequence() {
        let seq = ExactSequence::new(vec![k(0), k(4), Term::unknown("x"), k(7), k(0)]);
        assert_eq!(solve(&seq).unwrap().get("x").unwrap(), 11);
    }

    #[test]
    fn hom_killed_by_zero() {
        let seq = ExactSequence::new(vec![k(0), k(2), k(5), Term::unknown("Ext1"), k(0)]);
        assert_eq!(solve(&seq).unwrap().get("Ext1").unwrap(), 3);
    }

    #[test]
    fn self_ext_of_e3() {
        let seq = ExactSequence::new(vec![
            k(0),
            k(1),
            k(8),
            k(19),
            Term::unknown("e"),
            k(1),
            k(0),
        ]);
        assert_eq!(solve(&seq).unwrap().get("e").unwrap(), 13);
    }

    #[test]
    fn fully_known_sequences_are_validated() {
        let ok = ExactSequence::new(vec![k(1), k(3), k(2)]);
        assert!(solve(&ok).unwrap().values.is_empty());
        let bad = ExactSequence::new(vec![k(1), k(3), k(1)]);
        assert!(matches!(solve(&bad), Err(ChaseError::Inconsistent { .. })));
    }

    #[test]
    fn negative_dimension_is_reported() {
        let seq = ExactSequence::new(vec![k(5), k(1), Term::unknown("x")]);
        assert!(matches!(
            solve(&seq),
            Err(ChaseError::NegativeDimension { .. })
        ));
    }

    #[test]
    fn two_unknowns_in_a_segment_stay_open() {
        let seq = ExactSequence::new(vec![Term::unknown("a"), k(2), Term::unknown("b")]);
        let sol = solve(&seq).unwrap();
        assert!(sol.values.is_empty());
        assert!(matches!(sol.get("a"), Err(ChaseError::Unresolvable { .. })));
        assert_eq!(sol.unresolved.len(), 2);
    }

    #[test]
    fn resolved_zero_splits_again() {
        // a is alone before a known zero, so a = 0; then b sits alone in [b, 3].
        let seq = ExactSequence::new(vec![Term::unknown("a"), k(0), Term::unknown("b"), k(3)]);
        let sol = solve(&seq).unwrap();
        assert_eq!(sol.get("a").unwrap(), 0);
        assert_eq!(sol.get("b").unwrap(), 3);
    }

    #[test]
    fn chain_propagates_and_checks_consistency() {
        let s1 = ExactSequence::new(vec![k(2), Term::unknown("x"), k(1)]);
        let s2 = ExactSequence::new(vec![Term::unknown("x"), Term::unknown("y")]);
        let sol = chain(&[s1.clone(), s2], &["x"]).unwrap();
        assert_eq!(sol.get("x").unwrap(), 3);
        assert_eq!(sol.get("y").unwrap(), 3);

        let s3 = ExactSequence::new(vec![Term::known(4, "x")]);
        assert!(matches!(
            chain(&[s1, s3], &["x"]),
            Err(ChaseError::Inconsistent { .. })
        ));
    }

    #[test]
    fn chain_combines_two_sequences_linearly() {
        // He's sequence and the resolution sequence for (Λ1, Λ2): neither alone pins Ext1(Λ1,Λ2).
        let he = ExactSequence::new(vec![
            k(0),
            Term::unknown("hom"),
            k(2),
            Term::unknown("X"),
            Term::unknown("ext"),
            k(0),
        ]);
        let res = ExactSequence::new(vec![
            Term::unknown("hom"),
            k(2),
            k(5),
            Term::unknown("ext"),
            k(0),
        ]);
        assert!(solve(&he).unwrap().values.is_empty());
        let sol = chain(&[he, res], &["hom", "ext"]).unwrap();
        assert_eq!(sol.get("X").unwrap(), 5);
        assert!(sol.unresolved.contains("hom"));
    }

    #[test]
    fn unshared_label_is_rejected() {
        let s = ExactSequence::new(vec![Term::unknown("x")]);
        assert!(matches!(
            chain(&[s], &["x"]),
            Err(ChaseError::UnsharedLabel { .. })
        ));
    }

    #[test]
    fn template_has_nine_slots() {
        let t = PairSequenceTemplate {
            pair_ns: "L1|L2",
            sheaf_ns: "E1|OL01",
            source_gamma: 1,
            target_gamma: 0,
            target_cohomology: [2, 0, 0],
            hom_pairs: Some(0),
            ext1_pairs: None,
        };
        let seq = t.instantiate();
        assert_eq!(seq.terms.len(), 9);
        assert_eq!(seq.terms[2], Term::known(2, "L1|L2/Hom(G',H0''/G'')"));
        assert_eq!(seq.terms[3], Term::unknown("L1|L2/Ext1pairs"));
    }

    #[test]
    fn sequences_serialize() {
        let seq = ExactSequence::new(vec![Term::known(2, "a"), Term::unknown("b")]);
        let json = serde_json::to_string(&seq).unwrap();
        assert_eq!(
            json,
            r#"{"terms":[{"known":{"dim":2,"label":"a"}},{"unknown":{"label":"b"}}]}"#
        );
    }
}
