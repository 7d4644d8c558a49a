//! Cohomology dimensions of line bundles, line sheaves on rulings and
//! torsion sheaves presented by line-bundle resolutions on `P¹ × P¹`.
//!
//! Resolution models are handled only through the long exact sequence of the
//! twisted resolution; ranks of the maps are never guessed. When the sequence
//! does not force a dimension the caller gets [`CohomError::AmbiguousRank`] and
//! may supply the value through [`CohomologyHints`].

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::chase::{self, ExactSequence, Term};
use crate::error::CohomError;

/// Bidegree of the canonical sheaf `ω = O(-2,-2)`.
pub const CANONICAL: (i64, i64) = (-2, -2);

/// `rm + sn + t`.
/// Bidegrees of the line bundles in a direct sum.
pub type Summands = Vec<(i64, i64)>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LinearHilbertPolynomial {
    pub r: i64,
    pub s: i64,
    pub t: i64,
}

impl LinearHilbertPolynomial {
    pub const fn new(r: i64, s: i64, t: i64) -> Self {
        Self { r, s, t }
    }

    pub fn eval(&self, m: i64, n: i64) -> i64 {
        self.r * m + self.s * n + self.t
    }

    pub fn degree(&self) -> i64 {
        self.r + self.s
    }

    /// `t / (r + s)`, undefined when `r + s = 0`.
    pub fn slope(&self) -> Option<BigRational> {
        (self.degree() != 0)
            .then(|| BigRational::new(BigInt::from(self.t), BigInt::from(self.degree())))
    }

    /// Exchanges the two factors of `P¹ × P¹`.
    pub fn swap(&self) -> Self {
        Self::new(self.s, self.r, self.t)
    }

    /// Hilbert polynomial after tensoring with `O(a,b)`.
    pub fn twist(&self, a: i64, b: i64) -> Self {
        Self::new(self.r, self.s, self.eval(a, b))
    }

    /// The lower bound `t ≥ r + s - rs` on subsheaf classes.
    pub fn satisfies_subclass_bound(&self) -> bool {
        self.t >= self.r + self.s - self.r * self.s
    }
}

impl std::ops::Add for LinearHilbertPolynomial {
    type Output = Self;

    fn add(self, o: Self) -> Self {
        Self::new(self.r + o.r, self.s + o.s, self.t + o.t)
    }
}

impl std::ops::Sub for LinearHilbertPolynomial {
    type Output = Self;

    fn sub(self, o: Self) -> Self {
        Self::new(self.r - o.r, self.s - o.s, self.t - o.t)
    }
}

impl fmt::Display for LinearHilbertPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for (c, v) in [(self.r, "m"), (self.s, "n")] {
            match c {
                0 => {}
                1 => parts.push(v.to_string()),
                _ => parts.push(format!("{c}{v}")),
            }
        }
        let mut out = parts.join(" + ");
        if out.is_empty() {
            out = self.t.to_string();
        } else if self.t > 0 {
            out.push_str(&format!(" + {}", self.t));
        } else if self.t < 0 {
            out.push_str(&format!(" - {}", -self.t));
        }
        f.write_str(&out)
    }
}

/// Which ruling a line `L` belongs to: `First` for bidegree `(1,0)`, `Second`
/// for `(0,1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ruling {
    First,
    Second,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SheafModel {
    /// `O(a,b)`.
    LineBundle { a: i64, b: i64 },
    /// `O_L(a,b)` for a line `L` of the given ruling.
    LineSheaf { ruling: Ruling, a: i64, b: i64 },
    /// Cokernel of an injective map `⊕ O(source) → ⊕ O(target)`.
    Resolution {
        source: Vec<(i64, i64)>,
        target: Vec<(i64, i64)>,
    },
}

impl SheafModel {
    pub fn line_sheaf(ruling: Ruling, a: i64, b: i64) -> Self {
        SheafModel::LineSheaf { ruling, a, b }
    }

    pub fn resolution(source: &[(i64, i64)], target: &[(i64, i64)]) -> Self {
        SheafModel::Resolution {
            source: source.to_vec(),
            target: target.to_vec(),
        }
    }

    /// Tensor product with `O(a,b)`.
    pub fn twist(&self, a: i64, b: i64) -> Self {
        let shift = |v: &[(i64, i64)]| v.iter().map(|(x, y)| (x + a, y + b)).collect();
        match self {
            SheafModel::LineBundle { a: x, b: y } => SheafModel::LineBundle { a: x + a, b: y + b },
            SheafModel::LineSheaf { ruling, a: x, b: y } => SheafModel::LineSheaf {
                ruling: *ruling,
                a: x + a,
                b: y + b,
            },
            SheafModel::Resolution { source, target } => SheafModel::Resolution {
                source: shift(source),
                target: shift(target),
            },
        }
    }

    pub fn twist_by_canonical(&self) -> Self {
        self.twist(CANONICAL.0, CANONICAL.1)
    }

    /// Pullback along the involution exchanging the two factors.
    pub fn swap(&self) -> Self {
        let flip = |v: &[(i64, i64)]| v.iter().map(|(x, y)| (*y, *x)).collect();
        match self {
            SheafModel::LineBundle { a, b } => SheafModel::LineBundle { a: *b, b: *a },
            SheafModel::LineSheaf { ruling, a, b } => SheafModel::LineSheaf {
                ruling: match ruling {
                    Ruling::First => Ruling::Second,
                    Ruling::Second => Ruling::First,
                },
                a: *b,
                b: *a,
            },
            SheafModel::Resolution { source, target } => SheafModel::Resolution {
                source: flip(source),
                target: flip(target),
            },
        }
    }

    /// Two-term locally free resolution `(source, target)`.
    pub fn presentation(&self) -> (Summands, Summands) {
        match self {
            SheafModel::LineBundle { a, b } => (Vec::new(), vec![(*a, *b)]),
            SheafModel::LineSheaf {
                ruling: Ruling::First,
                a,
                b,
            } => (vec![(a - 1, *b)], vec![(*a, *b)]),
            SheafModel::LineSheaf {
                ruling: Ruling::Second,
                a,
                b,
            } => (vec![(*a, b - 1)], vec![(*a, *b)]),
            SheafModel::Resolution { source, target } => (source.clone(), target.clone()),
        }
    }

    /// Checks the structural invariants of a curve-supported model.
    pub fn validate(&self) -> Result<(), CohomError> {
        if let SheafModel::Resolution { source, target } = self {
            if source.len() != target.len() || source.is_empty() {
                return Err(CohomError::BadResolution {
                    model: self.to_string(),
                    detail: format!(
                        "{} source and {} target summands",
                        source.len(),
                        target.len()
                    ),
                });
            }
            let p = hilbert_polynomial(self)?;
            if p.r < 0 || p.s < 0 {
                return Err(CohomError::BadResolution {
                    model: self.to_string(),
                    detail: format!("negative curve class in {p}"),
                });
            }
        }
        Ok(())
    }
}

fn fmt_bundles(v: &[(i64, i64)]) -> String {
    v.iter()
        .map(|(a, b)| format!("O({a},{b})"))
        .collect::<Vec<_>>()
        .join("+")
}

impl fmt::Display for SheafModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SheafModel::LineBundle { a, b } => write!(f, "O({a},{b})"),
            SheafModel::LineSheaf {
                ruling: Ruling::First,
                a,
                b,
            } => write!(f, "O_L({a},{b})"),
            SheafModel::LineSheaf {
                ruling: Ruling::Second,
                a,
                b,
            } => write!(f, "O_L'({a},{b})"),
            SheafModel::Resolution { source, target } => {
                write!(
                    f,
                    "coker[{} -> {}]",
                    fmt_bundles(source),
                    fmt_bundles(target)
                )
            }
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CohomologyProfile {
    pub h0: u64,
    pub h1: u64,
    pub h2: u64,
}

impl CohomologyProfile {
    pub const fn new(h0: u64, h1: u64, h2: u64) -> Self {
        Self { h0, h1, h2 }
    }

    pub fn euler(&self) -> i64 {
        self.h0 as i64 - self.h1 as i64 + self.h2 as i64
    }

    pub fn as_array(&self) -> [u64; 3] {
        [self.h0, self.h1, self.h2]
    }
}

impl std::ops::Add for CohomologyProfile {
    type Output = Self;

    fn add(self, o: Self) -> Self {
        Self::new(self.h0 + o.h0, self.h1 + o.h1, self.h2 + o.h2)
    }
}

impl std::iter::Sum for CohomologyProfile {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::default(), |a, b| a + b)
    }
}

/// A partially known profile, used for externally asserted dimensions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialProfile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h0: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h1: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h2: Option<u64>,
}

impl PartialProfile {
    pub fn as_array(&self) -> [Option<u64>; 3] {
        [self.h0, self.h1, self.h2]
    }
}

/// Externally supplied cohomology dimensions keyed by the already-twisted model.
#[derive(Clone, Debug, Default)]
pub struct CohomologyHints {
    hints: BTreeMap<SheafModel, PartialProfile>,
}

impl CohomologyHints {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, model: SheafModel, profile: PartialProfile) {
        self.hints.insert(model, profile);
    }

    pub fn get(&self, model: &SheafModel) -> Option<&PartialProfile> {
        self.hints.get(model)
    }
}

fn pos(x: i64) -> u64 {
    x.max(0) as u64
}

/// Künneth: `H^*(O(a,b)) = H^*(P¹, O(a)) ⊗ H^*(P¹, O(b))`.
pub fn line_bundle_cohomology(a: i64, b: i64) -> CohomologyProfile {
    CohomologyProfile::new(
        pos(a + 1) * pos(b + 1),
        pos(a + 1) * pos(-b - 1) + pos(-a - 1) * pos(b + 1),
        pos(-a - 1) * pos(-b - 1),
    )
}

/// `χ(O(a,b)) = (a+1)(b+1)`.
pub fn line_bundle_euler(a: i64, b: i64) -> i64 {
    (a + 1) * (b + 1)
}

/// Euler characteristic of a model twisted by `(m, n)`, from its presentation.
pub fn euler_characteristic(model: &SheafModel, m: i64, n: i64) -> i64 {
    let (source, target) = model.presentation();
    let chi =
        |v: &[(i64, i64)]| -> i64 { v.iter().map(|(a, b)| line_bundle_euler(a + m, b + n)).sum() };
    chi(&target) - chi(&source)
}

/// Linear Hilbert polynomial of a curve-supported model.
pub fn hilbert_polynomial(model: &SheafModel) -> Result<LinearHilbertPolynomial, CohomError> {
    let (source, target) = model.presentation();
    // χ(O(a+m, b+n)) = mn + (b+1)m + (a+1)n + (a+1)(b+1)
    if source.len() != target.len() {
        return Err(CohomError::NotOneDimensional {
            model: model.to_string(),
        });
    }
    let sum = |v: &[(i64, i64)], f: &dyn Fn(i64, i64) -> i64| -> i64 {
        v.iter().map(|(a, b)| f(*a, *b)).sum()
    };
    let r = sum(&target, &|_, b| b + 1) - sum(&source, &|_, b| b + 1);
    let s = sum(&target, &|a, _| a + 1) - sum(&source, &|a, _| a + 1);
    let t = euler_characteristic(model, 0, 0);
    if r == 0 && s == 0 {
        return Err(CohomError::NotOneDimensional {
            model: model.to_string(),
        });
    }
    Ok(LinearHilbertPolynomial::new(r, s, t))
}

/// Slope `t/(r+s)` of a curve-supported model.
pub fn slope(model: &SheafModel) -> Option<BigRational> {
    hilbert_polynomial(model).ok().and_then(|p| p.slope())
}

pub fn sheaf_cohomology(
    model: &SheafModel,
    twist: (i64, i64),
) -> Result<CohomologyProfile, CohomError> {
    sheaf_cohomology_with_hints(model, twist, &CohomologyHints::default())
}

/// Cohomology of `model ⊗ O(twist)`.
pub fn sheaf_cohomology_with_hints(
    model: &SheafModel,
    twist: (i64, i64),
    hints: &CohomologyHints,
) -> Result<CohomologyProfile, CohomError> {
    let twisted = model.twist(twist.0, twist.1);
    match &twisted {
        SheafModel::LineBundle { a, b } => Ok(line_bundle_cohomology(*a, *b)),
        SheafModel::LineSheaf { ruling, a, b } => {
            let d = match ruling {
                Ruling::First => *b,
                Ruling::Second => *a,
            };
            Ok(CohomologyProfile::new(pos(d + 1), pos(-d - 1), 0))
        }
        SheafModel::Resolution { .. } => {
            let (seq, labels) = cohomology_sequence(&twisted, hints.get(&twisted));
            let sol = chase::solve(&seq)?;
            let get = |l: &String, i: usize| -> Result<u64, CohomError> {
                match hints.get(&twisted).and_then(|h| h.as_array()[i]) {
                    Some(v) => Ok(v),
                    None => chase::value_of(std::slice::from_ref(&seq), &sol, l).ok_or_else(|| {
                        CohomError::AmbiguousRank {
                            model: model.to_string(),
                            a: twist.0,
                            b: twist.1,
                        }
                    }),
                }
            };
            let profile = CohomologyProfile::new(
                get(&labels[0], 0)?,
                get(&labels[1], 1)?,
                get(&labels[2], 2)?,
            );
            if profile.euler() != euler_characteristic(&twisted, 0, 0) {
                return Err(CohomError::EulerMismatch {
                    model: model.to_string(),
                    a: twist.0,
                    b: twist.1,
                });
            }
            Ok(profile)
        }
    }
}

/// `0 → H⁰(S) → H⁰(T) → H⁰(F) → H¹(S) → … → H²(F) → 0` for `F = coker(S → T)`.
pub fn cohomology_sequence(
    model: &SheafModel,
    hint: Option<&PartialProfile>,
) -> (ExactSequence, [String; 3]) {
    let (source, target) = model.presentation();
    let sum = |v: &[(i64, i64)]| -> CohomologyProfile {
        v.iter().map(|(a, b)| line_bundle_cohomology(*a, *b)).sum()
    };
    let (hs, ht) = (sum(&source).as_array(), sum(&target).as_array());
    let name = model.to_string();
    let labels = [0, 1, 2].map(|i| format!("h{i}({name})"));
    let given = hint.map(|h| h.as_array()).unwrap_or_default();
    let mut terms = Vec::with_capacity(9);
    for i in 0..3 {
        terms.push(Term::known(hs[i], ""));
        terms.push(Term::known(ht[i], ""));
        terms.push(Term::maybe(given[i], labels[i].clone()));
    }
    // a balanced resolution has curve support, so H² of the cokernel vanishes
    if source.len() == target.len() && given[2].is_none() {
        terms[8] = Term::known(0, labels[2].clone());
    }
    (ExactSequence::new(terms), labels)
}

/// A model together with the stability assertion recorded for it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Sheaf {
    pub model: SheafModel,
    pub stable: bool,
}

impl Sheaf {
    pub fn new(model: SheafModel, stable: bool) -> Self {
        Self { model, stable }
    }

    pub fn twist(&self, a: i64, b: i64) -> Self {
        Self::new(self.model.twist(a, b), self.stable)
    }

    pub fn swap(&self) -> Self {
        Self::new(self.model.swap(), self.stable)
    }
}

/// `Hom(from, to) = 0` for stable sheaves with `p(from) > p(to)`.
pub fn hom_vanishes_by_slope(from: &Sheaf, to: &Sheaf) -> bool {
    if !(from.stable && to.stable) {
        return false;
    }
    match (slope(&from.model), slope(&to.model)) {
        (Some(p), Some(q)) => p > q,
        _ => false,
    }
}

/// Namespace used for the Hom/Ext labels of a pair of sheaves.
pub fn ext_namespace(from: &SheafModel, to: &SheafModel) -> String {
    format!("{from}|{to}")
}

/// The long exact sequence of `Hom(-, to)` applied to the resolution of `from`:
///
/// `0 → Hom(F,G) → ⊕_T H⁰(G(-t)) → ⊕_S H⁰(G(-s)) → Ext¹(F,G) → ⊕_T H¹ → ⊕_S H¹ → Ext²(F,G) → ⊕_T H² → ⊕_S H² → 0`
///
/// Axioms recorded for stable sheaves fill the Hom and Ext² slots when they apply:
/// slope vanishing, simplicity, and the Serre-dual slope vanishing of Ext².
pub fn ext_sequence(
    from: &Sheaf,
    to: &Sheaf,
    hints: &CohomologyHints,
) -> Result<ExactSequence, CohomError> {
    let (source, target) = from.model.presentation();
    let sum = |v: &[(i64, i64)]| -> Result<CohomologyProfile, CohomError> {
        v.iter()
            .map(|(a, b)| sheaf_cohomology_with_hints(&to.model, (-a, -b), hints))
            .sum::<Result<CohomologyProfile, _>>()
    };
    let (ht, hs) = (sum(&target)?.as_array(), sum(&source)?.as_array());
    let ns = ext_namespace(&from.model, &to.model);

    let hom = if hom_vanishes_by_slope(from, to) {
        Some(0)
    } else if from == to && from.stable {
        Some(1)
    } else {
        None
    };
    let ext2 = hom_vanishes_by_slope(to, &from.twist(CANONICAL.0, CANONICAL.1)).then_some(0);

    let mut terms = Vec::with_capacity(9);
    for (i, given) in [hom, None, ext2].into_iter().enumerate() {
        terms.push(Term::maybe(given, chase::sheaf_label(&ns, i as u8)));
        terms.push(Term::known(ht[i], format!("{ns}/H{i}[target]")));
        terms.push(Term::known(hs[i], format!("{ns}/H{i}[source]")));
    }
    Ok(ExactSequence::new(terms))
}

/// All sequences constraining `Ext^*(from, to)`: the direct resolution chase,
/// the Serre-dual chase for `Ext^{2-*}(to, from ⊗ ω)` and the duality links.
/// A route whose inputs are themselves ambiguous is dropped.
pub fn ext_sequences(
    from: &Sheaf,
    to: &Sheaf,
    hints: &CohomologyHints,
) -> Result<Vec<ExactSequence>, CohomError> {
    let dual_to = from.twist(CANONICAL.0, CANONICAL.1);
    let direct = ext_sequence(from, to, hints);
    let dual = ext_sequence(to, &dual_to, hints);
    let mut out = Vec::new();
    let first_err = match (direct, dual) {
        (Err(e), Err(_)) => return Err(e),
        (d, s) => {
            let mut first_err = None;
            for r in [d, s] {
                match r {
                    Ok(seq) => out.push(seq),
                    Err(e) => first_err = first_err.or(Some(e)),
                }
            }
            first_err
        }
    };
    if let Some(CohomError::AmbiguousRank { .. }) | None = first_err {
        let ns = ext_namespace(&from.model, &to.model);
        let dual_ns = ext_namespace(&to.model, &dual_to.model);
        for i in 0..3u8 {
            out.push(ExactSequence::isomorphism(
                chase::sheaf_label(&ns, i),
                chase::sheaf_label(&dual_ns, 2 - i),
            ));
        }
        Ok(out)
    } else {
        Err(first_err.unwrap())
    }
}

/// Dimensions of `Hom`, `Ext¹`, `Ext²` between two sheaves, where forced.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtProfile {
    pub hom: Option<u64>,
    pub ext1: Option<u64>,
    pub ext2: Option<u64>,
}

pub fn ext_dimensions(
    from: &Sheaf,
    to: &Sheaf,
    hints: &CohomologyHints,
) -> Result<ExtProfile, CohomError> {
    let seqs = ext_sequences(from, to, hints)?;
    let sol = chase::chain(&seqs, &[])?;
    let ns = ext_namespace(&from.model, &to.model);
    let get = |i: u8| chase::value_of(&seqs, &sol, &chase::sheaf_label(&ns, i));
    Ok(ExtProfile {
        hom: get(0),
        ext1: get(1),
        ext2: get(2),
    })
}

/// `dim Hom(from, to)`, where `to` is the Serre-dual target (typically
/// `G ⊗ ω`, so that the result is `dim Ext²(G, from)`).
pub fn serre_dual_hom_dimension(
    from: &Sheaf,
    to: &Sheaf,
    hints: &CohomologyHints,
) -> Result<u64, CohomError> {
    if hom_vanishes_by_slope(from, to) {
        return Ok(0);
    }
    ext_dimensions(from, to, hints)?
        .hom
        .ok_or_else(|| CohomError::Undecidable {
            from: from.model.to_string(),
            to: to.model.to_string(),
        })
}
