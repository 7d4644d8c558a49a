//! Exact check of `H¹(I_Z(a,b)) = 0` for reduced and curvilinear `Z`.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::HilbError;
use crate::linalg;

/// A point `([x:y], [z:w])`, doubled along `tangent` when present. The tangent
/// is given in the affine coordinates of the normalized chart.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkedPoint {
    pub first: [BigRational; 2],
    pub second: [BigRational; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tangent: Option<[BigRational; 2]>,
}

impl MarkedPoint {
    pub fn reduced(first: [i64; 2], second: [i64; 2]) -> Self {
        Self {
            first: first.map(int),
            second: second.map(int),
            tangent: None,
        }
    }

    pub fn doubled(first: [i64; 2], second: [i64; 2], tangent: [i64; 2]) -> Self {
        Self {
            tangent: Some(tangent.map(int)),
            ..Self::reduced(first, second)
        }
    }

    pub fn length(&self) -> usize {
        1 + usize::from(self.tangent.is_some())
    }
}

fn int(x: i64) -> BigRational {
    BigRational::from_integer(x.into())
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointConfiguration {
    pub points: Vec<MarkedPoint>,
}

/// A point of `ℙ¹` scaled so its first nonzero coordinate is 1, with the index
/// of the other coordinate, which serves as the local parameter.
#[derive(Clone, PartialEq, Eq)]
struct Chart {
    coords: [BigRational; 2],
    local: usize,
}

fn normalize(p: &[BigRational; 2]) -> Option<Chart> {
    if !p[0].is_zero() {
        Some(Chart {
            coords: [BigRational::one(), &p[1] / &p[0]],
            local: 1,
        })
    } else if !p[1].is_zero() {
        Some(Chart {
            coords: [BigRational::zero(), BigRational::one()],
            local: 0,
        })
    } else {
        None
    }
}

impl PointConfiguration {
    pub fn length(&self) -> usize {
        self.points.iter().map(MarkedPoint::length).sum()
    }

    fn charts(&self) -> Result<Vec<(Chart, Chart)>, HilbError> {
        let mut out: Vec<(Chart, Chart)> = Vec::with_capacity(self.points.len());
        for (i, p) in self.points.iter().enumerate() {
            let (Some(a), Some(b)) = (normalize(&p.first), normalize(&p.second)) else {
                return Err(HilbError::MalformedConfiguration(format!(
                    "point {i} has a zero coordinate pair"
                )));
            };
            if let Some(t) = &p.tangent {
                if t.iter().all(Zero::is_zero) {
                    return Err(HilbError::MalformedConfiguration(format!(
                        "point {i} has a zero tangent"
                    )));
                }
            }
            if out.iter().any(|q| q.0 == a && q.1 == b) {
                return Err(HilbError::MalformedConfiguration(format!(
                    "point {i} repeats an earlier support point"
                )));
            }
            out.push((a, b));
        }
        if out.is_empty() {
            return Err(HilbError::MalformedConfiguration(
                "empty configuration".into(),
            ));
        }
        Ok(out)
    }
}

/// `value + ε·slope` with `ε² = 0`.
#[derive(Clone)]
struct Dual {
    value: BigRational,
    slope: BigRational,
}

impl Dual {
    fn pow(&self, n: u32) -> Dual {
        // (v + εs)^n = v^n + ε n v^{n-1} s
        if n == 0 {
            return Dual {
                value: BigRational::one(),
                slope: BigRational::zero(),
            };
        }
        let vn1 = num_traits::pow(self.value.clone(), (n - 1) as usize);
        Dual {
            value: &vn1 * &self.value,
            slope: vn1 * &self.slope * BigRational::from_integer(n.into()),
        }
    }

    fn mul(&self, o: &Dual) -> Dual {
        Dual {
            value: &self.value * &o.value,
            slope: &self.value * &o.slope + &self.slope * &o.value,
        }
    }
}

fn dual_coords(c: &Chart, dir: &BigRational) -> [Dual; 2] {
    [0, 1].map(|i| Dual {
        value: c.coords[i].clone(),
        slope: if i == c.local {
            dir.clone()
        } else {
            BigRational::zero()
        },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VanishingReport {
    pub length: usize,
    pub rank: usize,
    pub h0: i64,
    pub h1: i64,
}

/// Ranks the evaluation map `H⁰(O(a,b)) → O_Z` on the monomials
/// `x^i y^{a-i} z^j w^{b-j}`; `h¹(I_Z(a,b))` is the failure of surjectivity.
pub fn verify_vanishing(
    config: &PointConfiguration,
    bidegree: (u32, u32),
) -> Result<VanishingReport, HilbError> {
    let charts = config.charts()?;
    let (a, b) = bidegree;
    let mut rows: Vec<Vec<BigRational>> = Vec::with_capacity(config.length());
    for (p, (c1, c2)) in config.points.iter().zip(&charts) {
        let zero = BigRational::zero();
        let (t1, t2) = match &p.tangent {
            Some([u, v]) => (u.clone(), v.clone()),
            None => (zero.clone(), zero),
        };
        let [x, y] = dual_coords(c1, &t1);
        let [z, w] = dual_coords(c2, &t2);
        let mut values = Vec::new();
        let mut slopes = Vec::new();
        for i in 0..=a {
            let f = x.pow(i).mul(&y.pow(a - i));
            for j in 0..=b {
                let m = f.mul(&z.pow(j).mul(&w.pow(b - j)));
                values.push(m.value);
                slopes.push(m.slope);
            }
        }
        rows.push(values);
        if p.tangent.is_some() {
            rows.push(slopes);
        }
    }
    let rank = linalg::rational_rank(&rows);
    let sections = i64::from(a + 1) * i64::from(b + 1);
    let length = config.length();
    let h0 = sections - rank as i64;
    let chi = sections - length as i64;
    Ok(VanishingReport {
        length,
        rank,
        h0,
        h1: h0 - chi,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// Distinct reduced points.
    Generic,
    /// Reduced points on one line of either ruling.
    Collinear,
    /// Curvilinear double points, plus a reduced point when the length is odd.
    Curvilinear,
}

const BOX: i64 = 6;

fn random_p1<R: Rng>(rng: &mut R) -> [i64; 2] {
    loop {
        let p = [rng.random_range(-BOX..=BOX), rng.random_range(-BOX..=BOX)];
        if p != [0, 0] {
            return p;
        }
    }
}

fn same_point(p: [i64; 2], q: [i64; 2]) -> bool {
    p[0] * q[1] == p[1] * q[0]
}

/// A random configuration of the given family and total length.
pub fn random_configuration<R: Rng>(
    rng: &mut R,
    family: Family,
    length: usize,
) -> PointConfiguration {
    let mut supports: Vec<([i64; 2], [i64; 2])> = Vec::new();
    let count = match family {
        Family::Curvilinear => length.div_ceil(2),
        _ => length,
    };
    let fixed = random_p1(rng);
    let first_ruling = rng.random_bool(0.5);
    while supports.len() < count {
        let (p, q) = match family {
            Family::Collinear if first_ruling => (fixed, random_p1(rng)),
            Family::Collinear => (random_p1(rng), fixed),
            _ => (random_p1(rng), random_p1(rng)),
        };
        if !supports
            .iter()
            .any(|(a, b)| same_point(*a, p) && same_point(*b, q))
        {
            supports.push((p, q));
        }
    }
    let points = supports
        .into_iter()
        .enumerate()
        .map(|(i, (p, q))| {
            if family == Family::Curvilinear && 2 * i + 1 < length {
                MarkedPoint::doubled(p, q, random_p1(rng))
            } else {
                MarkedPoint::reduced(p, q)
            }
        })
        .collect();
    PointConfiguration { points }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialReport {
    pub trials: u64,
    pub failures: u64,
    pub examples_of_failure: Vec<PointConfiguration>,
    pub seed: u64,
    pub bidegree: (u32, u32),
    pub length: usize,
    pub expected_h1: i64,
    pub families: BTreeMap<Family, u64>,
    pub h0_counts: BTreeMap<i64, u64>,
    pub h1_counts: BTreeMap<i64, u64>,
}

const MAX_EXAMPLES: usize = 10;

/// Family used for trial `i` when none is forced: two in ten collinear, two
/// in ten curvilinear, the rest generic.
pub fn mixed_family(i: u64) -> Family {
    match i % 10 {
        0 | 1 => Family::Collinear,
        2 | 3 => Family::Curvilinear,
        _ => Family::Generic,
    }
}

/// Runs `trials` independent checks, counting those whose `h¹` differs from
/// `expected_h1`. Trial `i` draws from stream `i` of the seeded generator, so
/// results do not depend on evaluation order.
pub fn run_trials(
    trials: u64,
    seed: u64,
    family: Option<Family>,
    bidegree: (u32, u32),
    length: usize,
    expected_h1: i64,
) -> Result<TrialReport, HilbError> {
    if length == 0 {
        return Err(HilbError::MalformedConfiguration(
            "length must be positive".into(),
        ));
    }
    let mut report = TrialReport {
        trials,
        failures: 0,
        examples_of_failure: Vec::new(),
        seed,
        bidegree,
        length,
        expected_h1,
        families: BTreeMap::new(),
        h0_counts: BTreeMap::new(),
        h1_counts: BTreeMap::new(),
    };
    for i in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i);
        let fam = family.unwrap_or_else(|| mixed_family(i));
        let config = random_configuration(&mut rng, fam, length);
        let r = verify_vanishing(&config, bidegree)?;
        *report.families.entry(fam).or_default() += 1;
        *report.h0_counts.entry(r.h0).or_default() += 1;
        *report.h1_counts.entry(r.h1).or_default() += 1;
        if r.h1 != expected_h1 {
            report.failures += 1;
            if report.examples_of_failure.len() < MAX_EXAMPLES {
                report.examples_of_failure.push(config);
            }
        }
    }
    Ok(report)
}
