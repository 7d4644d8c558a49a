//! Hilbert schemes of points on a surface without odd cohomology.

mod vanishing;

pub use vanishing::{
    random_configuration, run_trials, verify_vanishing, Family, MarkedPoint, PointConfiguration,
    TrialReport, VanishingReport,
};

use serde::{Deserialize, Serialize};

use crate::error::HilbError;
use crate::poly::{q_int, PoincarePolynomial};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceBetti {
    pub b0: u32,
    pub b1: u32,
    pub b2: u32,
    pub b3: u32,
    pub b4: u32,
}

impl SurfaceBetti {
    pub const P1_X_P1: SurfaceBetti = SurfaceBetti {
        b0: 1,
        b1: 0,
        b2: 2,
        b3: 0,
        b4: 1,
    };

    pub fn poincare(&self) -> Result<PoincarePolynomial, HilbError> {
        self.check()?;
        Ok(PoincarePolynomial::from_coeffs([self.b0, self.b2, self.b4]))
    }

    fn check(&self) -> Result<(), HilbError> {
        if self.b1 != 0 || self.b3 != 0 {
            return Err(HilbError::OddCohomology);
        }
        if self.b0 != self.b4 {
            return Err(HilbError::MalformedConfiguration(
                "b0 and b4 differ on a surface".into(),
            ));
        }
        Ok(())
    }
}

/// Power series in `q` truncated above `q^n`, with polynomial coefficients.
type Series = Vec<PoincarePolynomial>;

fn series_mul(a: &Series, b: &Series, n: usize) -> Series {
    let mut out = vec![PoincarePolynomial::zero(); n + 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n + 1 - i) {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    out
}

/// `(1 - ξ^e q^k)^{-1} = Σ_j ξ^{ej} q^{kj}`.
fn geometric(e: u32, k: usize, n: usize) -> Series {
    let mut out = vec![PoincarePolynomial::zero(); n + 1];
    for j in 0..=n / k {
        out[k * j] = PoincarePolynomial::monomial(e * j as u32, 1);
    }
    out
}

/// Coefficient of `q^n` in `∏_k (1-ξ^{k-1}q^k)^{-b0} (1-ξ^k q^k)^{-b2} (1-ξ^{k+1}q^k)^{-b4}`.
pub fn goettsche_poincare(betti: SurfaceBetti, n: usize) -> Result<PoincarePolynomial, HilbError> {
    betti.check()?;
    let mut acc: Series = vec![PoincarePolynomial::zero(); n + 1];
    acc[0] = PoincarePolynomial::one();
    for k in 1..=n {
        let kk = k as u32;
        for (e, mult) in [(kk - 1, betti.b0), (kk, betti.b2), (kk + 1, betti.b4)] {
            let g = geometric(e, k, n);
            for _ in 0..mult {
                acc = series_mul(&acc, &g, n);
            }
        }
    }
    Ok(acc.swap_remove(n))
}

/// Poincaré polynomial of the flag Hilbert scheme of length-`n` subschemes on
/// curves of bidegree `(a, b)`, a `ℙ^{(a+1)(b+1)-n-1}`-bundle over `Hilb^n`.
pub fn flag_hilbert_poincare(
    n: usize,
    bidegree: (u32, u32),
) -> Result<PoincarePolynomial, HilbError> {
    let sections = i64::from(bidegree.0 + 1) * i64::from(bidegree.1 + 1);
    let fiber = sections - n as i64 - 1;
    if fiber < 0 {
        return Err(HilbError::NegativeFiber(fiber));
    }
    let q = q_int(fiber as u32 + 1).expect("fiber + 1 > 0");
    Ok(q * goettsche_poincare(SurfaceBetti::P1_X_P1, n)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(n: usize) -> PoincarePolynomial {
        goettsche_poincare(SurfaceBetti::P1_X_P1, n).unwrap()
    }

    #[test]
    fn small_hilbert_schemes() {
        assert_eq!(h(0), PoincarePolynomial::one());
        assert_eq!(h(1), PoincarePolynomial::from_coeffs([1, 2, 1]));
        assert_eq!(h(2), PoincarePolynomial::from_coeffs([1, 3, 6, 3, 1]));
        assert_eq!(
            h(4),
            PoincarePolynomial::from_coeffs([1, 3, 10, 22, 33, 22, 10, 3, 1])
        );
        assert_eq!(h(4).eval_at_one(), 105.into());
    }

    #[test]
    fn palindromic() {
        for n in 0..7u32 {
            let p = h(n as usize);
            assert!(p.is_palindromic(2 * n));
            assert_eq!(p.degree(), Some(2 * n));
        }
    }

    #[test]
    fn projective_plane_points() {
        let p2 = SurfaceBetti {
            b0: 1,
            b1: 0,
            b2: 1,
            b3: 0,
            b4: 1,
        };
        // Hilb²(ℙ²): 1 + 2ξ + 3ξ² + 2ξ³ + ξ⁴
        assert_eq!(
            goettsche_poincare(p2, 2).unwrap(),
            PoincarePolynomial::from_coeffs([1, 2, 3, 2, 1])
        );
    }

    #[test]
    fn odd_cohomology_is_rejected() {
        let torus = SurfaceBetti {
            b0: 1,
            b1: 2,
            b2: 1,
            b3: 2,
            b4: 1,
        };
        assert_eq!(goettsche_poincare(torus, 2), Err(HilbError::OddCohomology));
    }

    #[test]
    fn flag_hilbert() {
        let f = flag_hilbert_poincare(4, (3, 3)).unwrap();
        assert_eq!(f, q_int(12).unwrap() * h(4));
        assert_eq!(f.eval_at_one(), 1260.into());
        assert_eq!(flag_hilbert_poincare(2, (3, 3)).unwrap().degree(), Some(17));
        assert_eq!(
            flag_hilbert_poincare(1, (0, 0)),
            Err(HilbError::NegativeFiber(-1))
        );
    }
}
