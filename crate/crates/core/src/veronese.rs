//! Composite Veronese maps, the linear relations cutting out the span of
//! their images, sampled secant dimensions, and independence of powers of
//! forms.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::domain::{primitive_integer_vector, Domain, Rationals};
use crate::engine::generic_rank;
use crate::error::{Error, Result};
use crate::forms::{binomial, form_dim, Form};
use crate::matrix::Matrix;
use crate::network::{gauge_fix, Architecture};
use crate::poly::{monomials_of_degree, Monomial, SparsePoly};
use crate::seeding::{rng_for, Stream};

/// Default cap on the number of coordinates of any stage.
pub const DEFAULT_AMBIENT_CAP: u128 = 100_000;

/// Extra evaluation rows beyond the ambient coordinate count.
pub const DEFAULT_OVERSAMPLE_MARGIN: usize = 10;

/// Fresh points every returned relation is checked against.
pub const RELATION_VERIFY_POINTS: usize = 50;

/// `nu_{e_m} o ... o nu_{e_1}` on `P^{nvars-1}`. Stage `t` maps the
/// coordinates of stage `t-1` to all monomials of degree `e_t` in them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositeVeronese {
    nvars: usize,
    degrees: Vec<u32>,
    stages: Vec<Vec<Monomial>>,
}

pub fn composite_veronese(nvars: usize, degrees: &[u32]) -> Result<CompositeVeronese> {
    CompositeVeronese::with_cap(nvars, degrees, DEFAULT_AMBIENT_CAP)
}

impl CompositeVeronese {
    pub fn with_cap(nvars: usize, degrees: &[u32], cap: u128) -> Result<Self> {
        if nvars < 2 {
            return Err(Error::Invalid(format!("composite Veronese needs at least 2 variables, got {nvars}")));
        }
        if degrees.is_empty() {
            return Err(Error::Invalid("composite Veronese needs at least one degree".into()));
        }
        let mut stages = Vec::with_capacity(degrees.len());
        let mut width = nvars;
        for (t, &e) in degrees.iter().enumerate() {
            if e < 2 {
                return Err(Error::DegreeBelowTwo { index: t + 1, degree: e });
            }
            let coords = binomial(width as u64 - 1 + e as u64, width as u64 - 1);
            if coords > cap {
                return Err(Error::AmbientTooLarge { coords, cap });
            }
            let monos = monomials_of_degree(width, e);
            width = monos.len();
            stages.push(monos);
        }
        Ok(CompositeVeronese { nvars, degrees: degrees.to_vec(), stages })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    /// Coordinate count of the final stage.
    pub fn ambient_coords(&self) -> usize {
        self.stages.last().map_or(self.nvars, Vec::len)
    }

    /// Coordinate count of the stage feeding the last one.
    pub fn source_coords(&self) -> usize {
        self.stages.len().checked_sub(2).map_or(self.nvars, |t| self.stages[t].len())
    }

    /// Monomials of the last stage in the previous stage's coordinates.
    pub fn final_monomials(&self) -> &[Monomial] {
        self.stages.last().expect("at least one stage")
    }

    pub fn stage_monomials(&self, stage: usize) -> &[Monomial] {
        &self.stages[stage]
    }

    pub fn eval<D: Domain>(&self, domain: &D, point: &[D::Elem]) -> Vec<D::Elem> {
        assert_eq!(point.len(), self.nvars, "point arity");
        let mut v = point.to_vec();
        for monos in &self.stages {
            v = monos.iter().map(|m| eval_monomial(domain, m, &v)).collect();
        }
        v
    }

    /// The coordinates of the composite map as forms of degree `prod e_t` in
    /// the source variables.
    pub fn coordinates<D: Domain>(&self, domain: &D) -> Vec<SparsePoly<D>> {
        let mut v: Vec<SparsePoly<D>> = (0..self.nvars).map(|i| SparsePoly::var(domain, self.nvars, i)).collect();
        for monos in &self.stages {
            v = monos
                .iter()
                .map(|m| {
                    m.exponents()
                        .iter()
                        .zip(&v)
                        .filter(|(e, _)| **e > 0)
                        .fold(SparsePoly::one(domain, self.nvars), |acc, (e, p)| &acc * &p.pow(*e))
                })
                .collect();
        }
        v
    }

    /// A linear form in the final coordinates, rendered as the polynomial it
    /// pulls back to on the previous stage (`z0..`).
    pub fn display_relation(&self, relation: &[BigInt]) -> String {
        let q = Rationals;
        let width = self.source_coords();
        let poly = SparsePoly::from_terms(
            &q,
            width,
            self.final_monomials().iter().zip(relation).map(|(m, c)| (m.clone(), BigRational::from_integer(c.clone()))),
        );
        let names: Vec<String> = (0..width).map(|i| format!("z{i}")).collect();
        poly.display(&names)
    }
}

fn eval_monomial<D: Domain>(domain: &D, m: &Monomial, v: &[D::Elem]) -> D::Elem {
    m.exponents()
        .iter()
        .zip(v)
        .filter(|(e, _)| **e > 0)
        .fold(domain.one(), |acc, (e, x)| domain.mul(&acc, &domain.pow(x, *e as u64)))
}

/// Basis of the linear forms vanishing on the image of `cv`, as primitive
/// integer vectors indexed by the final coordinates, in reduced echelon
/// order. The basis is canonical, so it does not depend on `seed` once the
/// evaluation rows span the image.
pub fn image_linear_relations(cv: &CompositeVeronese, oversample: usize, seed: u64) -> Result<Vec<Vec<BigInt>>> {
    let ambient = cv.ambient_coords();
    if oversample < ambient + 1 {
        return Err(Error::Invalid(format!("oversample {oversample} below ambient + 1 = {}", ambient + 1)));
    }
    let q = Rationals;
    let mut rows = oversample;
    for attempt in 0..4u64 {
        let mut rng = rng_for(seed, Stream::Relations, attempt);
        let evals: Vec<Vec<BigRational>> = (0..rows)
            .map(|_| {
                let p: Vec<BigRational> = (0..cv.nvars()).map(|_| q.sample(&mut rng)).collect();
                cv.eval(&q, &p)
            })
            .collect();
        let kernel = Matrix::<Rationals>::from_rows(evals).kernel(&q);
        if relations_vanish(cv, &kernel, seed, attempt) {
            return Ok(kernel.iter().map(|k| primitive_integer_vector(k)).collect());
        }
        rows *= 2;
    }
    Err(Error::SamplingExhausted { failures: 4 })
}

fn relations_vanish(cv: &CompositeVeronese, kernel: &[Vec<BigRational>], seed: u64, attempt: u64) -> bool {
    let q = Rationals;
    let mut rng = rng_for(seed, Stream::Verify, attempt);
    (0..RELATION_VERIFY_POINTS).all(|_| {
        let p: Vec<BigRational> = (0..cv.nvars()).map(|_| q.sample(&mut rng)).collect();
        let z = cv.eval(&q, &p);
        kernel.iter().all(|k| {
            let s = k.iter().zip(&z).fold(q.zero(), |acc, (a, b)| q.add(&acc, &q.mul(a, b)));
            q.is_zero(&s)
        })
    })
}

/// `(nvars, deg, s)` rows of the defective secant table with ambient at most
/// 70 coordinates.
pub const AH_DEFECTIVE_ROWS: [(usize, u32, usize); 5] = [(3, 2, 2), (4, 2, 2), (4, 2, 3), (3, 4, 5), (5, 3, 8)];
/// The quartic row in four variables; larger Jacobians, kept apart.
pub const AH_SLOW_ROW: (usize, u32, usize) = (4, 4, 9);
/// Non-exceptional neighbours of the defective rows.
pub const AH_NEIGHBOUR_ROWS: [(usize, u32, usize); 10] =
    [(3, 4, 4), (3, 4, 6), (5, 3, 7), (5, 3, 9), (3, 3, 3), (4, 3, 4), (3, 2, 3), (4, 2, 4), (2, 4, 2), (4, 4, 8)];

/// Sampled secant dimension against the expected one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SecantClassification {
    pub nvars: usize,
    pub degree: u32,
    pub secant_order: usize,
    pub dim: usize,
    pub expected: u128,
    pub defective: bool,
}

/// Projective dimension of `Sec_s` of the degree-`deg` Veronese of
/// `P^{nvars-1}`, read off as the gauged generic rank of `(nvars, s, 1),(deg)`.
pub fn empirical_secant_dim(nvars: usize, deg: u32, s: usize, tries: usize, seed: u64) -> Result<usize> {
    let arch = Architecture::new(vec![nvars, s, 1], vec![deg])?;
    let field = crate::engine::prime_for_seed(seed);
    Ok(generic_rank(&gauge_fix(&arch), tries, seed, &field)?.rank)
}

/// `min(s * nvars, binom(nvars - 1 + deg, nvars - 1)) - 1`.
pub fn expected_secant_dim(nvars: usize, deg: u32, s: usize) -> u128 {
    ((s * nvars) as u128).min(binomial(nvars as u64 - 1 + deg as u64, nvars as u64 - 1)) - 1
}

pub fn classify_secant(nvars: usize, deg: u32, s: usize, tries: usize, seed: u64) -> Result<SecantClassification> {
    let dim = empirical_secant_dim(nvars, deg, s, tries, seed)?;
    let expected = expected_secant_dim(nvars, deg, s);
    Ok(SecantClassification { nvars, degree: deg, secant_order: s, dim, expected, defective: (dim as u128) < expected })
}

/// Forms `p_1..p_k` of a common degree in `nvars` variables, raised to `r`.
#[derive(Clone, Debug)]
pub struct PowerInstance<D: Domain> {
    pub forms: Vec<Form<D>>,
    pub exponent: u32,
}

impl<D: Domain> PowerInstance<D> {
    /// Checks that the forms share shape and that no two are proportional.
    pub fn new(domain: &D, forms: Vec<Form<D>>, exponent: u32) -> Result<Self> {
        if let Some(f) = forms.first() {
            if forms.iter().any(|g| g.nvars() != f.nvars() || g.degree() != f.degree()) {
                return Err(Error::Invalid("forms must share variable count and degree".into()));
            }
        }
        for i in 0..forms.len() {
            for j in i + 1..forms.len() {
                if proportional(domain, forms[i].coeffs(), forms[j].coeffs()) {
                    return Err(Error::ProportionalPair { first: i, second: j });
                }
            }
        }
        Ok(PowerInstance { forms, exponent })
    }

    pub fn with_exponent(&self, exponent: u32) -> Self {
        PowerInstance { forms: self.forms.clone(), exponent }
    }
}

/// True when every 2x2 minor of the pair vanishes (zero vectors included).
fn proportional<D: Domain>(domain: &D, a: &[D::Elem], b: &[D::Elem]) -> bool {
    let Some(p) = (0..a.len()).find(|&i| !domain.is_zero(&a[i]) || !domain.is_zero(&b[i])) else {
        return true;
    };
    (p + 1..a.len()).all(|i| domain.is_zero(&domain.sub(&domain.mul(&a[p], &b[i]), &domain.mul(&a[i], &b[p]))))
}

/// Rank of the `k x binom(d - 1 + r s, d - 1)` matrix of `p_i^r`; the powers
/// are independent when it equals `k`.
pub fn power_independence<D: Domain>(domain: &D, inst: &PowerInstance<D>) -> (bool, usize) {
    let rows: Vec<Vec<D::Elem>> = inst.forms.iter().map(|f| f.pow(domain, inst.exponent).into_coeffs()).collect();
    if rows.is_empty() {
        return (true, 0);
    }
    let rank = Matrix::<D>::from_rows(rows).rank(domain);
    (rank == inst.forms.len(), rank)
}

/// Draws `k` pairwise non-proportional forms of degree `s` in `d` variables.
pub fn random_instance<D: Domain, R: rand::Rng + ?Sized>(
    domain: &D,
    d: usize,
    k: usize,
    s: u32,
    rng: &mut R,
) -> PowerInstance<D> {
    let len = form_dim(d, s);
    loop {
        let forms: Vec<Form<D>> =
            (0..k).map(|_| Form::from_coeffs(d, s, (0..len).map(|_| domain.sample(rng)).collect())).collect();
        if let Ok(inst) = PowerInstance::new(domain, forms, 1) {
            return inst;
        }
    }
}

/// Outcome of [`power_threshold_scan`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerScanReport {
    pub nvars: usize,
    pub forms: usize,
    pub degree: u32,
    pub trials: usize,
    /// Instances independent at `r = k - 1`.
    pub independent_at_bound: usize,
    /// Smallest independent exponent per instance, searched up to `k`.
    pub minimal_r: Vec<Option<u32>>,
    /// Whether independence, once reached, persisted through `r = k` on every
    /// instance.
    pub monotone: bool,
}

impl PowerScanReport {
    pub fn all_independent(&self) -> bool {
        self.independent_at_bound == self.trials
    }
}

/// Random instances over the rationals: independence at `r = k - 1` and the
/// minimal independent exponent by linear search from `r = 1`.
pub fn power_threshold_scan(d: usize, k: usize, s: u32, trials: usize, seed: u64) -> PowerScanReport {
    assert!(trials >= 1 && k >= 1 && d >= 1 && s >= 1);
    let q = Rationals;
    let bound = (k as u32).saturating_sub(1).max(1);
    let top = bound + 1;
    let mut independent_at_bound = 0;
    let mut minimal_r = Vec::with_capacity(trials);
    let mut monotone = true;
    for t in 0..trials {
        let mut rng = rng_for(seed, Stream::Instance, t as u64);
        let inst = random_instance(&q, d, k, s, &mut rng);
        let flags: Vec<bool> = (1..=top).map(|r| power_independence(&q, &inst.with_exponent(r)).0).collect();
        if flags[bound as usize - 1] {
            independent_at_bound += 1;
        }
        let first = flags.iter().position(|&f| f);
        if let Some(i) = first {
            monotone &= flags[i..].iter().all(|&f| f);
        }
        minimal_r.push(first.map(|i| i as u32 + 1));
    }
    PowerScanReport { nvars: d, forms: k, degree: s, trials, independent_at_bound, minimal_r, monotone }
}
