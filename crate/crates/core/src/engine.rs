//! Jacobian rank sampling for the gauged coefficient map.
//!
//! The Jacobian is never formed symbolically. At a sample point the forward
//! pass is evaluated once to dense forms; then each free weight gets its own
//! forward-mode pass that pushes a tangent through the layer recursion
//! `(F, T) -> (F^d, d F^{d-1} T)`. Output tangents are turned into
//! derivatives of the affine coordinates `y_i / y_pivot` by the quotient rule.

use num_rational::BigRational;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::domain::{CoefficientDomain, Domain, DomainDescriptor, PrimeField, Rationals};
use crate::error::{Error, Result};
use crate::forms::Form;
use crate::matrix::Matrix;
use crate::network::{forward_numeric, gauge_fix, linear_combinations, Architecture, GaugedMap};
use crate::seeding::{rng_for, Stream};
use crate::theory::{applicable_expected_dim, expected_dim_general, expected_dim_single_output};

/// Default number of random trials.
pub const DEFAULT_TRIES: usize = 10;

/// Consecutive pivot failures allowed per requested trial.
const RESAMPLE_FACTOR: usize = 100;

/// Jacobian of the affine parameterization at one point. Rows run over the
/// non-pivot coefficients of each output in turn, columns over free weights.
#[derive(Clone, Debug)]
pub struct JacobianSample<D: Domain> {
    pub point: Vec<D::Elem>,
    pub matrix: Matrix<D>,
    pub rank: usize,
    pub pivots: Vec<usize>,
    pub domain: DomainDescriptor,
}

/// Evaluates the primal forward pass and caches what the tangent passes need.
struct Primal<D: Domain> {
    /// `layers[k-1][u] = F_{k,u}`.
    layers: Vec<Vec<Form<D>>>,
    /// `slopes[k-1][u] = d_k * F_{k,u}^{d_k - 1}` for hidden layers.
    slopes: Vec<Vec<Form<D>>>,
    /// `activated[k-1][u] = F_{k,u}^{d_k}` for hidden layers.
    activated: Vec<Vec<Form<D>>>,
}

impl<D: Domain> Primal<D> {
    fn new(arch: &Architecture, weights: &crate::network::WeightAssignment<D::Elem>, domain: &D) -> Self {
        let layers = forward_numeric(arch, weights, domain);
        let mut slopes = Vec::new();
        let mut activated = Vec::new();
        for k in 1..arch.depth() {
            let d = arch.degree(k);
            let dk = domain.from_i64(d as i64);
            let pw: Vec<Form<D>> = layers[k - 1].iter().map(|f| f.pow(domain, d - 1)).collect();
            activated.push(pw.iter().zip(&layers[k - 1]).map(|(p, f)| p.mul(domain, f)).collect());
            slopes.push(pw.iter().map(|p| p.scale(domain, &dk)).collect());
        }
        Primal { layers, slopes, activated }
    }
}

/// Jacobian of the gauged map at `point`, computed by forward-mode passes.
pub fn jacobian_at<D: Domain>(gmap: &GaugedMap, point: &[D::Elem], domain: &D) -> Result<JacobianSample<D>> {
    let arch = gmap.arch();
    let weights = gmap.expand_point(domain, point)?;
    let primal = Primal::new(arch, &weights, domain);
    let outputs = &primal.layers[arch.depth() - 1];

    // Pivot values first, so a vanishing pivot is reported before any work.
    let mut pivot_inv = Vec::with_capacity(outputs.len());
    for (l, f) in outputs.iter().enumerate() {
        let yp = &f.coeffs()[gmap.pivots()[l]];
        pivot_inv.push(domain.inv(yp).ok_or(Error::PivotVanishes { output: l })?);
    }

    let n0 = arch.inputs();
    let coeffs = arch.coefficients_per_output() as usize;
    let rows = arch.outputs() * (coeffs - 1);
    let mut columns = Vec::with_capacity(gmap.free_count());
    for w in gmap.free_weights() {
        // Seed: only neuron `row` of layer `w.layer` moves.
        let seed =
            if w.layer == 1 { Form::var(domain, n0, w.col) } else { primal.activated[w.layer - 2][w.col].clone() };
        let mut tangents: Vec<Option<Form<D>>> = vec![None; arch.width(w.layer)];
        tangents[w.row] = Some(seed);
        for t in w.layer + 1..=arch.depth() {
            tangents = propagate(domain, &weights, &primal, t, &tangents);
        }
        let mut col = Vec::with_capacity(rows);
        for (l, f) in outputs.iter().enumerate() {
            let p = gmap.pivots()[l];
            let inv = &pivot_inv[l];
            let y = f.coeffs();
            match &tangents[l] {
                None => col.extend((0..coeffs).filter(|&i| i != p).map(|_| domain.zero())),
                Some(dy) => {
                    let dy = dy.coeffs();
                    // d(y_i / y_p) = dy_i / y_p - y_i dy_p / y_p^2
                    let ratio = domain.mul(&dy[p], &domain.mul(inv, inv));
                    for i in (0..coeffs).filter(|&i| i != p) {
                        let a = domain.mul(&dy[i], inv);
                        let b = domain.mul(&y[i], &ratio);
                        col.push(domain.sub(&a, &b));
                    }
                }
            }
        }
        columns.push(col);
    }
    let matrix = Matrix::from_columns(domain, rows, &columns);
    let rank = matrix.rank(domain);
    Ok(JacobianSample {
        point: point.to_vec(),
        matrix,
        rank,
        pivots: gmap.pivots().to_vec(),
        domain: domain.descriptor(),
    })
}

/// Tangents of layer `t` from tangents of layer `t - 1`.
fn propagate<D: Domain>(
    domain: &D,
    weights: &crate::network::WeightAssignment<D::Elem>,
    primal: &Primal<D>,
    t: usize,
    prev: &[Option<Form<D>>],
) -> Vec<Option<Form<D>>> {
    let active: Vec<usize> = (0..prev.len()).filter(|&u| prev[u].is_some()).collect();
    let pushed: Vec<Form<D>> =
        active.iter().map(|&u| primal.slopes[t - 2][u].mul(domain, prev[u].as_ref().unwrap())).collect();
    let matrix: Vec<Vec<D::Elem>> =
        weights.layer(t).iter().map(|row| active.iter().map(|&u| row[u].clone()).collect()).collect();
    linear_combinations(domain, &matrix, &pushed).into_iter().map(Some).collect()
}

/// Draws a point of the free-weight space.
pub fn sample_point<D: Domain, R: Rng + ?Sized>(gmap: &GaugedMap, domain: &D, rng: &mut R) -> Vec<D::Elem> {
    (0..gmap.free_count()).map(|_| domain.sample(rng)).collect()
}

/// The prime field a seed selects when no modulus is given.
pub fn prime_for_seed(seed: u64) -> PrimeField {
    PrimeField::random(&mut rng_for(seed, Stream::Prime, 0))
}

/// Outcome of repeated sampling: the maximal rank and the first sample that
/// achieved it.
#[derive(Clone, Debug)]
pub struct RankEstimate<D: Domain> {
    pub rank: usize,
    pub witness: JacobianSample<D>,
    pub witness_trial: usize,
    /// Trials actually evaluated; sampling stops early once the rank reaches
    /// `min(rows, cols)`, which no further trial can exceed.
    pub trials_run: usize,
    pub pivot_failures: usize,
}

/// Maximal Jacobian rank over `tries` independent random points. A point
/// whose pivot vanishes is redrawn without consuming a trial.
pub fn generic_rank<D: Domain>(gmap: &GaugedMap, tries: usize, seed: u64, domain: &D) -> Result<RankEstimate<D>> {
    assert!(tries >= 1, "tries must be positive");
    let bound = gmap.free_count().min(gmap.target_dim());
    let mut best: Option<(usize, JacobianSample<D>)> = None;
    let mut consecutive = 0usize;
    let mut failures = 0usize;
    let mut trials_run = 0;
    for trial in 0..tries {
        let mut rng = rng_for(seed, Stream::Trial, trial as u64);
        let sample = loop {
            let point = sample_point(gmap, domain, &mut rng);
            match jacobian_at(gmap, &point, domain) {
                Ok(s) => {
                    consecutive = 0;
                    break s;
                }
                Err(Error::PivotVanishes { .. }) => {
                    consecutive += 1;
                    failures += 1;
                    if consecutive >= RESAMPLE_FACTOR * tries {
                        return Err(Error::SamplingExhausted { failures: consecutive });
                    }
                }
                Err(e) => return Err(e),
            }
        };
        trials_run += 1;
        if best.as_ref().is_none_or(|(_, b)| sample.rank > b.rank) {
            best = Some((trial, sample));
        }
        if best.as_ref().unwrap().1.rank >= bound {
            break;
        }
    }
    let (witness_trial, witness) = best.expect("at least one trial");
    Ok(RankEstimate { rank: witness.rank, witness, witness_trial, trials_run, pivot_failures: failures })
}

/// Dimension statistics of a neurovariety.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimReport {
    pub arch: Architecture,
    pub expdim_general: u128,
    pub expdim_refined: Option<u128>,
    pub dim_actual: usize,
    pub fiber_dim: usize,
    pub defective: bool,
    pub trials: usize,
    pub trials_run: usize,
    pub seed: u64,
    pub domain: DomainDescriptor,
    pub pivots: Vec<usize>,
    pub witness: Vec<String>,
    pub witness_trial: usize,
}

impl DimReport {
    /// The expected dimension defectiveness is judged against.
    pub fn expdim(&self) -> u128 {
        self.expdim_refined.unwrap_or(self.expdim_general)
    }
}

pub fn neurovariety_stats<D: Domain>(arch: &Architecture, tries: usize, seed: u64, domain: &D) -> Result<DimReport> {
    let gmap = gauge_fix(arch);
    let est = generic_rank(&gmap, tries, seed, domain)?;
    Ok(DimReport {
        arch: arch.clone(),
        expdim_general: expected_dim_general(arch),
        expdim_refined: expected_dim_single_output(arch).ok(),
        dim_actual: est.rank,
        fiber_dim: gmap.free_count() - est.rank,
        defective: (est.rank as u128) < applicable_expected_dim(arch),
        trials: tries,
        trials_run: est.trials_run,
        seed,
        domain: domain.descriptor(),
        pivots: gmap.pivots().to_vec(),
        witness: est.witness.point.iter().map(|v| domain.format(v)).collect(),
        witness_trial: est.witness_trial,
    })
}

/// [`neurovariety_stats`] on a runtime-selected domain.
pub fn neurovariety_stats_in(
    arch: &Architecture,
    tries: usize,
    seed: u64,
    domain: &CoefficientDomain,
) -> Result<DimReport> {
    crate::with_domain!(domain, |d| neurovariety_stats(arch, tries, seed, d))
}

/// Re-evaluates the Jacobian over the rationals at the integer lift of a
/// prime-field point. The rational rank is at least the prime-field rank, so
/// a match certifies the lower bound over the rationals.
pub fn confirm_rational(gmap: &GaugedMap, field: &PrimeField, point: &[u64]) -> Result<usize> {
    let q = Rationals;
    let lifted: Vec<BigRational> =
        point.iter().map(|&v| BigRational::from_integer(field.lift_signed(v).into())).collect();
    Ok(jacobian_at(gmap, &lifted, &q)?.rank)
}

/// Column-block ranks of the Jacobian grouped by the layer owning each weight.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockRankReport {
    /// `layer_ranks[j-1]`: rank of the columns of layer `j`.
    pub layer_ranks: Vec<usize>,
    /// `neuron_ranks[j-1][u]`: rank of the columns of row `u` of `W_j`, for
    /// the normal levels `j <= L-2`.
    pub neuron_ranks: Vec<Vec<usize>>,
    /// Combined rank of layers `1..=L-2`.
    pub normal_rank: usize,
    /// Combined rank of layers `L-1` and `L`.
    pub last_rank: usize,
    pub total: usize,
}

pub fn block_ranks<D: Domain>(gmap: &GaugedMap, point: &[D::Elem], domain: &D) -> Result<BlockRankReport> {
    let sample = jacobian_at(gmap, point, domain)?;
    Ok(block_ranks_of(gmap, &sample.matrix, domain))
}

pub fn block_ranks_of<D: Domain>(gmap: &GaugedMap, jac: &Matrix<D>, domain: &D) -> BlockRankReport {
    let arch = gmap.arch();
    let l = arch.depth();
    let free = gmap.free_weights();
    let cols_where = |pred: &dyn Fn(usize, usize) -> bool| -> Vec<usize> {
        (0..free.len()).filter(|&c| pred(free[c].layer, free[c].row)).collect()
    };
    let rank_of = |cols: Vec<usize>| if cols.is_empty() { 0 } else { jac.select_columns(&cols).rank(domain) };
    let layer_ranks = (1..=l).map(|j| rank_of(cols_where(&|layer, _| layer == j))).collect();
    let neuron_ranks = (1..l.saturating_sub(1))
        .map(|j| (0..arch.width(j)).map(|u| rank_of(cols_where(&|layer, row| layer == j && row == u))).collect())
        .collect();
    let normal_rank = rank_of(cols_where(&|layer, _| layer + 2 <= l));
    let last_rank = rank_of(cols_where(&|layer, _| layer + 2 > l));
    BlockRankReport { layer_ranks, neuron_ranks, normal_rank, last_rank, total: jac.rank(domain) }
}
