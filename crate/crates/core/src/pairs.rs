//! Walls for α-semi-stable pairs, the Ext groups of their Jordan–Hölder
//! factors and the Poincaré polynomial change across a wall.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::chase::{self, ExactSequence, PairSequenceTemplate};
use crate::cohom::{self, LinearHilbertPolynomial};
use crate::error::{ChaseError, PairsError};
use crate::poly::{q_int, PoincarePolynomial};
use crate::registry::{PairClass, Registry};

/// `(γ·α + t)/(r + s)`.
pub fn alpha_slope(
    p: LinearHilbertPolynomial,
    gamma_dim: u32,
    alpha: &BigRational,
) -> Result<BigRational, PairsError> {
    if p.degree() == 0 {
        return Err(PairsError::ZeroRank(p.to_string()));
    }
    let num = alpha * BigInt::from(gamma_dim) + BigRational::from_integer(p.t.into());
    Ok(num / BigRational::from_integer(p.degree().into()))
}

/// The default lower bound `t' ≥ r' + s' - r's'` on sub-pair classes.
pub fn default_t_bound(r: i64, s: i64) -> i64 {
    r + s - r * s
}

/// A split of the total class into a sub-pair carrying `Γ` and a quotient with `Γ = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub sub: LinearHilbertPolynomial,
    pub quot: LinearHilbertPolynomial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Wall {
    #[serde(with = "rational")]
    pub alpha: BigRational,
    pub total: LinearHilbertPolynomial,
    pub decompositions: Vec<Decomposition>,
}

mod rational {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub fn find_walls(total: LinearHilbertPolynomial) -> Result<Vec<Wall>, PairsError> {
    find_walls_with(total, default_t_bound)
}

/// Walls for `total`, with `t_bound(r', s')` the smallest admissible `t'`.
pub fn find_walls_with(
    total: LinearHilbertPolynomial,
    t_bound: impl Fn(i64, i64) -> i64,
) -> Result<Vec<Wall>, PairsError> {
    let big_k = total.degree();
    if big_k <= 0 {
        return Err(PairsError::ZeroRank(total.to_string()));
    }
    // (α + t')/k = (α + t)/K  ⇔  α = (k t - K t')/(K - k)
    let solve = |k: i64, t_sub: i64| {
        BigRational::new(
            BigInt::from(k * total.t - big_k * t_sub),
            BigInt::from(big_k - k),
        )
    };
    let mut walls: BTreeMap<BigRational, Vec<Decomposition>> = BTreeMap::new();
    for r in 0..=total.r {
        for s in 0..=total.s {
            if (r, s) == (0, 0) || (r, s) == (total.r, total.s) {
                continue;
            }
            let k = r + s;
            let mut t = t_bound(r, s);
            let mut alpha = solve(k, t);
            while alpha.is_positive() {
                let sub = LinearHilbertPolynomial::new(r, s, t);
                let quot = total - sub;
                if alpha_slope(sub, 1, &alpha)? != alpha_slope(total, 1, &alpha)?
                    || alpha_slope(quot, 0, &alpha)? != alpha_slope(total, 1, &alpha)?
                {
                    return Err(PairsError::WallInvariant(format!(
                        "slopes of {sub} and {total} differ at α = {alpha}"
                    )));
                }
                walls
                    .entry(alpha.clone())
                    .or_default()
                    .push(Decomposition { sub, quot });
                let next = solve(k, t + 1);
                if &alpha - &next != BigRational::new(big_k.into(), (big_k - k).into()) {
                    return Err(PairsError::WallInvariant(format!(
                        "α is not strictly decreasing in t' for ({r},{s})"
                    )));
                }
                t += 1;
                alpha = next;
            }
        }
    }
    Ok(walls
        .into_iter()
        .map(|(alpha, mut decompositions)| {
            decompositions.sort_by_key(|d| std::cmp::Reverse(d.sub));
            Wall {
                alpha,
                total,
                decompositions,
            }
        })
        .collect())
}

/// `Hom`, `Ext¹`, `Ext²` of two pairs, where forced.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairExt {
    pub hom: Option<u64>,
    pub ext1: Option<u64>,
    pub ext2: Option<u64>,
}

/// Sequences constraining `Ext^*(Λ', Λ'')`: the pair sequence relating pair
/// and sheaf Ext groups, chained with the sheaf chases.
pub fn pair_ext_sequences(
    source: &PairClass,
    target: &PairClass,
    registry: &Registry,
) -> Result<Vec<ExactSequence>, PairsError> {
    let same = source == target;
    let pair_ns = format!("{}|{}", source.name, target.name);
    let sheaf_ns = cohom::ext_namespace(&source.sheaf.model, &target.sheaf.model);
    let target_h =
        cohom::sheaf_cohomology_with_hints(&target.sheaf.model, (0, 0), registry.hints())?;
    let template = PairSequenceTemplate {
        pair_ns: &pair_ns,
        sheaf_ns: &sheaf_ns,
        source_gamma: source.gamma_dim.into(),
        target_gamma: target.gamma_dim.into(),
        target_cohomology: target_h.as_array(),
        // stable pairs are simple; distinct factors of a wall admit no maps
        hom_pairs: Some(u64::from(same)),
        ext1_pairs: if same { source.tangent_ext1 } else { None },
    };
    let mut seqs = vec![template.instantiate()];
    seqs.extend(cohom::ext_sequences(
        &source.sheaf,
        &target.sheaf,
        registry.hints(),
    )?);
    Ok(seqs)
}

pub fn pair_ext(
    source: &PairClass,
    target: &PairClass,
    registry: &Registry,
) -> Result<PairExt, PairsError> {
    let seqs = pair_ext_sequences(source, target, registry)?;
    let sol = chase::chain(&seqs, &[])?;
    let ns = format!("{}|{}", source.name, target.name);
    let get = |i: u8| chase::value_of(&seqs, &sol, &chase::pair_label(&ns, i));
    Ok(PairExt {
        hom: get(0),
        ext1: get(1),
        ext2: get(2),
    })
}

/// Projective fibers of the flipping loci over one component of a wall,
/// recorded as `dim Ext¹`: `plus` for α above the wall, `minus` below.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WallComponent {
    pub decomposition: Decomposition,
    pub sub_class: String,
    pub quot_class: String,
    pub fiber_plus: u64,
    pub fiber_minus: u64,
    pub base: PoincarePolynomial,
}

pub fn resolve_classes(
    decomposition: &Decomposition,
    registry: &Registry,
) -> Result<(PairClass, PairClass), PairsError> {
    Ok((
        registry.lookup(decomposition.sub, 1)?,
        registry.lookup(decomposition.quot, 0)?,
    ))
}

/// `(dim Ext¹(Λ_sub, Λ_quot), dim Ext¹(Λ_quot, Λ_sub))`.
pub fn fiber_dimensions(
    decomposition: &Decomposition,
    registry: &Registry,
) -> Result<(u64, u64), PairsError> {
    let (sub, quot) = resolve_classes(decomposition, registry)?;
    let ext1 = |a: &PairClass, b: &PairClass| -> Result<u64, PairsError> {
        let ns = format!("{}|{}", a.name, b.name);
        pair_ext(a, b, registry)?
            .ext1
            .filter(|d| *d > 0)
            .ok_or_else(|| {
                ChaseError::Unresolvable {
                    label: chase::pair_label(&ns, 1),
                }
                .into()
            })
    };
    Ok((ext1(&sub, &quot)?, ext1(&quot, &sub)?))
}

/// Checks `Ext²(Λ_i, Λ_j) = 0` for both factors, which makes the moduli
/// on either side of the wall smooth along the flipping locus.
pub fn check_smooth(decomposition: &Decomposition, registry: &Registry) -> Result<(), PairsError> {
    let (sub, quot) = resolve_classes(decomposition, registry)?;
    for (a, b) in [(&sub, &quot), (&quot, &sub), (&sub, &sub), (&quot, &quot)] {
        let pair = format!("({}, {})", a.name, b.name);
        match pair_ext(a, b, registry)?.ext2 {
            Some(0) => {}
            Some(dim) => return Err(PairsError::NotSmooth { pair, dim }),
            None => {
                return Err(ChaseError::Unresolvable {
                    label: chase::pair_label(&format!("{}|{}", a.name, b.name), 2),
                }
                .into())
            }
        }
    }
    Ok(())
}

/// Fibers, smoothness and base polynomial for every component of a wall.
pub fn analyze_wall(wall: &Wall, registry: &Registry) -> Result<Vec<WallComponent>, PairsError> {
    wall.decompositions
        .iter()
        .map(|d| {
            let (sub, quot) = resolve_classes(d, registry)?;
            let (fiber_plus, fiber_minus) = fiber_dimensions(d, registry)?;
            check_smooth(d, registry)?;
            Ok(WallComponent {
                decomposition: *d,
                sub_class: sub.name.clone(),
                quot_class: quot.name.clone(),
                fiber_plus,
                fiber_minus,
                base: sub.base_poincare() * quot.base_poincare(),
            })
        })
        .collect()
}

/// `p + (P(ℙ^{minus-1}) - P(ℙ^{plus-1}))·base` for one component.
pub fn cross_component(p_before: &PoincarePolynomial, c: &WallComponent) -> PoincarePolynomial {
    let q = |d: u64| q_int(u32::try_from(d).expect("fiber dimension fits u32")).expect("d > 0");
    p_before + &((q(c.fiber_minus) - q(c.fiber_plus)) * &c.base)
}

/// Crossing a wall from above, one term per component.
pub fn cross_wall(
    p_before: &PoincarePolynomial,
    components: &[WallComponent],
) -> PoincarePolynomial {
    components
        .iter()
        .fold(p_before.clone(), |p, c| cross_component(&p, c))
}
