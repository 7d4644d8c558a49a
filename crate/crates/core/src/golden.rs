//! Reference values that computed results are compared against.

use std::collections::BTreeMap;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::cohom::LinearHilbertPolynomial;
use crate::error::{Error, Result};
use crate::pairs::Wall;
use crate::poly::PoincarePolynomial;

pub const GOLDEN_ENV: &str = "WALLCROSS_GOLDEN";

const EMBEDDED: &str = include_str!("../data/golden.json");

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GoldenWall {
    pub alpha: (i64, i64),
    pub subs: Vec<(i64, i64, i64)>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GoldenWalls {
    pub hilbert: (i64, i64, i64),
    pub walls: Vec<GoldenWall>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GoldenFibers {
    pub hilbert: (i64, i64, i64),
    pub projective_dims: Vec<u64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GoldenSelfExt {
    pub model: String,
    pub ext1: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GoldenHilb {
    pub n: usize,
    pub coeffs: Vec<i64>,
    pub euler: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GoldenSummary {
    pub euler: i64,
    pub degree: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GoldenPolynomial {
    pub coeffs: Vec<i64>,
    pub euler: i64,
    pub degree: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Golden {
    pub version: u32,
    #[serde(default)]
    pub notes: BTreeMap<String, String>,
    pub walls: Vec<GoldenWalls>,
    pub fibers: Vec<GoldenFibers>,
    pub self_ext: Vec<GoldenSelfExt>,
    pub hilb: Vec<GoldenHilb>,
    pub m0plus: GoldenSummary,
    pub m0minus: GoldenSummary,
    pub theorem: GoldenPolynomial,
}

fn hp((r, s, t): (i64, i64, i64)) -> LinearHilbertPolynomial {
    LinearHilbertPolynomial::new(r, s, t)
}

fn mismatch(what: impl std::fmt::Display) -> Error {
    Error::GoldenMismatch(what.to_string())
}

fn expect_eq<T: PartialEq + std::fmt::Debug>(what: &str, computed: T, golden: T) -> Result<()> {
    if computed == golden {
        Ok(())
    } else {
        Err(mismatch(format!(
            "{what}: computed {computed:?}, golden {golden:?}"
        )))
    }
}

impl Golden {
    pub fn embedded() -> Self {
        serde_json::from_str(EMBEDDED).expect("embedded golden file parses")
    }

    /// Explicit path, then `WALLCROSS_GOLDEN`, then the embedded copy.
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let path = match path {
            Some(p) => Some(p.to_path_buf()),
            None => std::env::var_os(GOLDEN_ENV)
                .filter(|p| !p.is_empty())
                .map(Into::into),
        };
        match path {
            None => Ok(Self::embedded()),
            Some(p) => {
                let text = std::fs::read_to_string(&p)
                    .map_err(|e| mismatch(format!("cannot read {}: {e}", p.display())))?;
                serde_json::from_str(&text)
                    .map_err(|e| mismatch(format!("cannot parse {}: {e}", p.display())))
            }
        }
    }

    pub fn walls_for(&self, total: LinearHilbertPolynomial) -> Option<&GoldenWalls> {
        self.walls.iter().find(|w| hp(w.hilbert) == total)
    }

    pub fn fibers_for(&self, total: LinearHilbertPolynomial) -> Option<&GoldenFibers> {
        self.fibers.iter().find(|w| hp(w.hilbert) == total)
    }

    pub fn hilb_for(&self, n: usize) -> Option<&GoldenHilb> {
        self.hilb.iter().find(|h| h.n == n)
    }

    /// Compares computed walls with the reference entry for `total`, if any.
    pub fn check_walls(&self, total: LinearHilbertPolynomial, walls: &[Wall]) -> Result<()> {
        let Some(g) = self.walls_for(total) else {
            return Ok(());
        };
        let mut expected = Vec::with_capacity(g.walls.len());
        for w in &g.walls {
            if w.alpha.1 == 0 {
                return Err(mismatch(format!("wall of {total} has zero denominator")));
            }
            let alpha = BigRational::new(BigInt::from(w.alpha.0), BigInt::from(w.alpha.1));
            expected.push((alpha, w.subs.iter().copied().map(hp).collect::<Vec<_>>()));
        }
        let computed: Vec<_> = walls
            .iter()
            .map(|w| {
                (
                    w.alpha.clone(),
                    w.decompositions.iter().map(|d| d.sub).collect::<Vec<_>>(),
                )
            })
            .collect();
        if computed != expected {
            let show = |v: &[(BigRational, Vec<LinearHilbertPolynomial>)]| {
                v.iter()
                    .map(|(a, subs)| {
                        let s: Vec<_> = subs
                            .iter()
                            .map(|p| format!("({},{},{})", p.r, p.s, p.t))
                            .collect();
                        format!("{a}: {}", s.join(" "))
                    })
                    .collect::<Vec<_>>()
                    .join("; ")
            };
            return Err(mismatch(format!(
                "walls of {total}: computed [{}], golden [{}]",
                show(&computed),
                show(&expected)
            )));
        }
        Ok(())
    }

    pub fn check_fibers(
        &self,
        total: LinearHilbertPolynomial,
        projective_dims: &[u64],
    ) -> Result<()> {
        match self.fibers_for(total) {
            Some(g) => expect_eq(
                &format!("flipping fibers of {total}"),
                projective_dims,
                g.projective_dims.as_slice(),
            ),
            None => Err(mismatch(format!("no reference fibers for {total}"))),
        }
    }

    pub fn check_self_ext(&self, model: &str, ext1: u64) -> Result<()> {
        match self.self_ext.iter().find(|e| e.model == model) {
            Some(g) => expect_eq(&format!("Ext^1({model}, {model})"), ext1, g.ext1),
            None => Err(mismatch(format!("no reference Ext^1 for {model}"))),
        }
    }

    pub fn check_hilb(&self, n: usize, p: &PoincarePolynomial) -> Result<()> {
        let Some(g) = self.hilb_for(n) else {
            return Ok(());
        };
        expect_eq(
            &format!("Hilb^{n} polynomial"),
            p,
            &PoincarePolynomial::from_coeffs(g.coeffs.iter().copied()),
        )?;
        expect_eq(
            &format!("Hilb^{n} Euler number"),
            p.eval_at_one(),
            BigInt::from(g.euler),
        )
    }

    pub fn check_summary(
        &self,
        what: &str,
        g: &GoldenSummary,
        p: &PoincarePolynomial,
    ) -> Result<()> {
        expect_eq(
            &format!("{what} Euler characteristic"),
            p.eval_at_one(),
            BigInt::from(g.euler),
        )?;
        expect_eq(&format!("{what} degree"), p.degree(), Some(g.degree))
    }

    pub fn theorem_polynomial(&self) -> PoincarePolynomial {
        PoincarePolynomial::from_coeffs(self.theorem.coeffs.iter().copied())
    }

    pub fn check_theorem(&self, p: &PoincarePolynomial) -> Result<()> {
        expect_eq("Poincare polynomial of M", p, &self.theorem_polynomial())?;
        expect_eq(
            "Euler characteristic of M",
            p.eval_at_one(),
            BigInt::from(self.theorem.euler),
        )?;
        expect_eq("dimension of M", p.degree(), Some(self.theorem.degree))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pairs::find_walls;

    #[test]
    fn embedded_golden_matches_walls() {
        let g = Golden::embedded();
        let total = LinearHilbertPolynomial::new(3, 3, 1);
        g.check_walls(total, &find_walls(total).unwrap()).unwrap();
        let other = LinearHilbertPolynomial::new(3, 3, -1);
        assert!(g.check_walls(total, &find_walls(other).unwrap()).is_err());
    }

    #[test]
    fn golden_sums_are_consistent() {
        let g = Golden::embedded();
        assert_eq!(g.theorem.coeffs.iter().sum::<i64>(), g.theorem.euler);
        assert_eq!(g.theorem.coeffs.len() as u32, g.theorem.degree + 1);
        for h in &g.hilb {
            assert_eq!(h.coeffs.iter().sum::<i64>(), h.euler);
        }
        assert_eq!(g.m0plus.euler - g.m0minus.euler, g.theorem.euler);
    }

    #[test]
    fn zero_denominator_is_a_mismatch() {
        let mut g = Golden::embedded();
        g.walls[0].walls[0].alpha.1 = 0;
        let total = LinearHilbertPolynomial::new(3, 3, 1);
        let e = g
            .check_walls(total, &find_walls(total).unwrap())
            .unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }
}
