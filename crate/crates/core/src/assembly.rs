//! The ledger from the flag Hilbert scheme through every wall down to the
//! moduli of sheaves.

use serde::{Deserialize, Serialize};

use crate::cohom::{self, LinearHilbertPolynomial};
use crate::error::{Error, Result};
use crate::golden::Golden;
use crate::hilb::flag_hilbert_poincare;
use crate::pairs::{self, find_walls, WallComponent};
use crate::poly::{q_int, PoincarePolynomial};
use crate::registry::Registry;

pub const TARGET: LinearHilbertPolynomial = LinearHilbertPolynomial::new(3, 3, 1);
pub const COMPANION: LinearHilbertPolynomial = LinearHilbertPolynomial::new(3, 3, -1);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerStep {
    pub description: String,
    pub polynomial: PoincarePolynomial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ledger {
    pub steps: Vec<LedgerStep>,
    #[serde(rename = "final")]
    pub final_polynomial: PoincarePolynomial,
    pub euler: i64,
}

impl Ledger {
    fn new(steps: Vec<LedgerStep>) -> Self {
        let final_polynomial = steps.last().expect("ledger has steps").polynomial.clone();
        let euler = i64::try_from(final_polynomial.eval_at_one()).expect("Euler number fits i64");
        Ledger {
            steps,
            final_polynomial,
            euler,
        }
    }
}

/// Data of the flag Hilbert scheme that the largest chamber is isomorphic to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FlagData {
    /// Curve bidegree `(a, b)`.
    pub bidegree: (u32, u32),
    /// Length of the subschemes.
    pub length: usize,
    /// Dimension of the projective fiber over `Hilb^length`.
    pub fiber: u32,
}

impl FlagData {
    /// Pairs `(O_C → F)` with `χ(F) = t` correspond to length `t - χ(O_C)`
    /// subschemes of a curve `C` of bidegree `(s, r)`.
    pub fn of(total: LinearHilbertPolynomial) -> Result<Self> {
        let (a, b) = (total.s, total.r);
        if a < 0 || b < 0 {
            return Err(Error::Ledger(format!("{total} is not a curve class")));
        }
        let chi_curve = 1 - (a - 1) * (b - 1);
        let length = total.t - chi_curve;
        let fiber = (a + 1) * (b + 1) - length - 1;
        if length < 0 || fiber < 0 {
            return Err(Error::Ledger(format!(
                "{total} gives length {length} and fiber dimension {fiber}"
            )));
        }
        Ok(FlagData {
            bidegree: (a as u32, b as u32),
            length: length as usize,
            fiber: fiber as u32,
        })
    }

    pub fn dimension(&self) -> u32 {
        2 * self.length as u32 + self.fiber
    }
}

fn chamber_name(alphas: &[String], i: usize) -> String {
    // chamber below the i-th wall from the top
    match alphas.get(i + 1) {
        Some(next) => format!("M^{}- = M^{}+", alphas[i], next),
        None => "M^0+".to_string(),
    }
}

fn describe_component(alpha: &str, c: &WallComponent, index: usize, count: usize) -> String {
    format!(
        "cross alpha = {alpha}, component {}/{count}: {} x {} ({} | {}), fiber P^{} replaced by P^{}",
        index + 1,
        c.sub_class,
        c.quot_class,
        c.decomposition.sub,
        c.decomposition.quot,
        c.fiber_plus - 1,
        c.fiber_minus - 1,
    )
}

/// `P(M^{0+}(total))` from `P(M^∞(total))` by crossing every wall from the top.
pub fn compute_m0plus(total: LinearHilbertPolynomial, registry: &Registry) -> Result<Ledger> {
    let flag = FlagData::of(total)?;
    let start = flag_hilbert_poincare(flag.length, flag.bidegree)?;
    let mut steps = vec![LedgerStep {
        description: format!(
            "M^inf({total}): P^{}-bundle over Hilb^{} of P1 x P1",
            flag.fiber, flag.length
        ),
        polynomial: start,
    }];
    let mut walls = find_walls(total)?;
    walls.reverse();
    let alphas: Vec<String> = walls.iter().map(|w| w.alpha.to_string()).collect();
    for (i, wall) in walls.iter().enumerate() {
        let components = pairs::analyze_wall(wall, registry)?;
        let count = components.len();
        for (j, c) in components.iter().enumerate() {
            let before = &steps.last().expect("nonempty").polynomial;
            let mut description = describe_component(&alphas[i], c, j, count);
            if j + 1 == count {
                description.push_str(&format!("; now at {}", chamber_name(&alphas, i)));
            }
            steps.push(LedgerStep {
                description,
                polynomial: pairs::cross_component(before, c),
            });
        }
    }
    let ledger = Ledger::new(steps);
    check_shape(
        &format!("M^0+({total})"),
        &ledger.final_polynomial,
        flag.dimension(),
    )?;
    Ok(ledger)
}

fn check_shape(what: &str, p: &PoincarePolynomial, dim: u32) -> Result<()> {
    if p.degree() != Some(dim) || !p.is_palindromic(dim) || !p.has_nonnegative_coeffs() {
        return Err(Error::Ledger(format!(
            "{what} is not a palindromic polynomial of degree {dim} with nonnegative coefficients: {p}"
        )));
    }
    Ok(())
}

pub fn compute_m0plus_plus(registry: &Registry) -> Result<Ledger> {
    compute_m0plus(TARGET, registry)
}

pub fn compute_m0plus_minus(registry: &Registry) -> Result<Ledger> {
    compute_m0plus(COMPANION, registry)
}

/// `P(M) = P(M^{0+}(3m+3n+1)) - ξ·P(M^{0+}(3m+3n-1))`, checked against `golden`.
pub fn compute_theorem(registry: &Registry, golden: &Golden) -> Result<Ledger> {
    let plus = compute_m0plus_plus(registry)?;
    let minus = compute_m0plus_minus(registry)?;
    golden.check_summary("M^0+(3m + 3n + 1)", &golden.m0plus, &plus.final_polynomial)?;
    golden.check_summary(
        "M^0+(3m + 3n - 1)",
        &golden.m0minus,
        &minus.final_polynomial,
    )?;
    let p = &plus.final_polynomial - &minus.final_polynomial.shift(1);
    let mut steps: Vec<LedgerStep> = Vec::new();
    for (name, ledger) in [(TARGET, plus), (COMPANION, minus)] {
        steps.extend(ledger.steps.into_iter().map(|s| LedgerStep {
            description: format!("[{name}] {}", s.description),
            polynomial: s.polynomial,
        }));
    }
    steps.push(LedgerStep {
        description: format!("P(M({TARGET})) = P(M^0+({TARGET})) - xi P(M^0+({COMPANION}))"),
        polynomial: p,
    });
    let ledger = Ledger::new(steps);
    let dim = cohom_dimension(TARGET);
    check_shape(&format!("M({TARGET})"), &ledger.final_polynomial, dim)?;
    golden.check_theorem(&ledger.final_polynomial)?;
    Ok(ledger)
}

/// `dim M(rm + sn + t) = 2rs + 1` on `P¹ × P¹`.
pub fn cohom_dimension(total: LinearHilbertPolynomial) -> u32 {
    (2 * total.r * total.s + 1) as u32
}

/// The closed form assembled from `q`-integers and the reference Hilbert
/// scheme polynomials.
pub fn closed_form(golden: &Golden) -> Option<PoincarePolynomial> {
    let q = |n| q_int(n).expect("n > 0");
    let h = |n| {
        golden
            .hilb_for(n)
            .map(|g| PoincarePolynomial::from_coeffs(g.coeffs.iter().copied()))
    };
    let (h4, h2) = (h(4)?, h(2)?);
    let x = |k| PoincarePolynomial::monomial(k, 1);
    let one_plus_x = q(2);
    let two = PoincarePolynomial::from_coeffs([2]);
    Some(
        q(12) * &h4
            - two.clone() * (x(3) + x(4)) * q(12) * one_plus_x.clone()
            - two * x(3) * q(11) * one_plus_x.pow(3)
            - x(4) * q(9) * q(4)
            - x(1) * q(14) * h2,
    )
}

pub fn closed_form_check(registry: &Registry, golden: &Golden) -> Result<bool> {
    let ledger = compute_theorem(registry, golden)?;
    Ok(closed_form(golden).is_some_and(|c| c == ledger.final_polynomial))
}

/// One row of the Ext table: a wall component and its two fibers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtRow {
    pub total: LinearHilbertPolynomial,
    pub alpha: String,
    pub sub_class: String,
    pub quot_class: String,
    /// `dim Ext¹(Λ_sub, Λ_quot)`, fiber above the wall.
    pub ext1_sub_quot: u64,
    /// `dim Ext¹(Λ_quot, Λ_sub)`, fiber below the wall.
    pub ext1_quot_sub: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelfExt {
    pub model: String,
    pub hom: Option<u64>,
    pub ext1: Option<u64>,
    pub ext2: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtTable {
    pub rows: Vec<ExtRow>,
    pub self_ext: Vec<SelfExt>,
}

impl ExtTable {
    /// Projective fiber dimensions for `total`, in table order.
    pub fn projective_dims(&self, total: LinearHilbertPolynomial) -> Vec<u64> {
        self.rows
            .iter()
            .filter(|r| r.total == total)
            .flat_map(|r| [r.ext1_sub_quot - 1, r.ext1_quot_sub - 1])
            .collect()
    }
}

/// Fibers of every wall component of both moduli problems, largest wall first,
/// and the self-extensions of the sheaves carrying a section.
pub fn ext_table(registry: &Registry) -> Result<ExtTable> {
    let mut rows = Vec::new();
    for total in [TARGET, COMPANION] {
        let mut walls = find_walls(total)?;
        walls.reverse();
        for w in &walls {
            for c in pairs::analyze_wall(w, registry)? {
                rows.push(ExtRow {
                    total,
                    alpha: w.alpha.to_string(),
                    sub_class: c.sub_class,
                    quot_class: c.quot_class,
                    ext1_sub_quot: c.fiber_plus,
                    ext1_quot_sub: c.fiber_minus,
                });
            }
        }
    }
    let mut self_ext = Vec::new();
    for class in registry.classes().iter().filter(|c| c.gamma_dim > 0) {
        let p = cohom::ext_dimensions(&class.sheaf, &class.sheaf, registry.hints())?;
        self_ext.push(SelfExt {
            model: registry_model_name(registry, &class.sheaf.model),
            hom: p.hom,
            ext1: p.ext1,
            ext2: p.ext2,
        });
    }
    Ok(ExtTable { rows, self_ext })
}

fn registry_model_name(registry: &Registry, model: &cohom::SheafModel) -> String {
    registry
        .file()
        .models
        .iter()
        .find(|(_, e)| &e.model == model)
        .map(|(n, _)| n.clone())
        .unwrap_or_else(|| model.to_string())
}

pub fn check_ext_table(table: &ExtTable, golden: &Golden) -> Result<()> {
    for total in [TARGET, COMPANION] {
        golden.check_fibers(total, &table.projective_dims(total))?;
    }
    for s in &table.self_ext {
        let ext1 = s
            .ext1
            .ok_or_else(|| Error::Ledger(format!("Ext^1({0}, {0}) is not forced", s.model)))?;
        golden.check_self_ext(&s.model, ext1)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (Registry, Golden) {
        (Registry::embedded().unwrap(), Golden::embedded())
    }

    #[test]
    fn flag_data() {
        let f = FlagData::of(TARGET).unwrap();
        assert_eq!(
            (f.bidegree, f.length, f.fiber, f.dimension()),
            ((3, 3), 4, 11, 19)
        );
        let f = FlagData::of(COMPANION).unwrap();
        assert_eq!((f.length, f.fiber, f.dimension()), (2, 13, 17));
        assert!(FlagData::of(LinearHilbertPolynomial::new(3, 3, -4)).is_err());
    }

    #[test]
    fn m0plus_ledgers() {
        let (r, _) = setup();
        let plus = compute_m0plus_plus(&r).unwrap();
        assert_eq!(plus.steps.len(), 6);
        assert_eq!(plus.euler, 952);
        assert_eq!(plus.final_polynomial.degree(), Some(19));
        assert!(plus.steps[5].description.ends_with("now at M^0+"));
        assert!(plus.steps[2].description.contains("M^11- = M^5+"));
        let minus = compute_m0plus_minus(&r).unwrap();
        assert_eq!(minus.steps.len(), 3);
        assert_eq!(minus.steps[0].polynomial, minus.final_polynomial);
        assert_eq!(minus.euler, 196);
        assert_eq!(minus.final_polynomial.degree(), Some(17));
    }

    #[test]
    fn theorem_and_closed_form() {
        let (r, g) = setup();
        let t = compute_theorem(&r, &g).unwrap();
        assert_eq!(t.euler, 756);
        assert_eq!(t.final_polynomial, g.theorem_polynomial());
        assert!(closed_form_check(&r, &g).unwrap());
    }

    #[test]
    fn golden_regression_is_detected() {
        let (r, mut g) = setup();
        g.theorem.coeffs[9] += 1;
        assert_eq!(compute_theorem(&r, &g).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn ext_table_matches() {
        let (r, g) = setup();
        let t = ext_table(&r).unwrap();
        assert_eq!(
            t.projective_dims(TARGET),
            vec![4, 2, 4, 2, 3, 2, 3, 2, 4, 3]
        );
        assert_eq!(t.projective_dims(COMPANION), vec![2, 2, 2, 2]);
        check_ext_table(&t, &g).unwrap();
        assert_eq!(t.rows[1].sub_class, "L1'");
    }

    #[test]
    fn ledgers_replay_identically() {
        let (r, g) = setup();
        let a = serde_json::to_string(&compute_theorem(&r, &g).unwrap()).unwrap();
        let b = serde_json::to_string(&compute_theorem(&r, &g).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}
