//! Polynomial network architectures, their symbolic forward pass and the
//! coefficient map from weights to output forms.
//!
//! Layer `k` computes `F_{k,j} = sum_i W_k[j][i] * F_{k-1,i}^{d_{k-1}}` with
//! `F_{0,i} = x_i` and no activation before the first layer. All polynomials
//! live in one ring whose variables are the inputs `x0..` followed by every
//! weight `w{layer}_{row}_{col}` (layer 1-based, row/col 0-based).

use std::cmp::Ordering;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::domain::{Domain, Rationals};
use crate::error::{Error, Result};
use crate::forms::{binomial, Form};
use crate::poly::{monomials_of_degree, SparsePoly};

/// Widths `n_0..n_L` and activation degrees `d_1..d_{L-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Architecture {
    widths: Vec<usize>,
    degrees: Vec<u32>,
}

impl Architecture {
    pub fn new(widths: Vec<usize>, degrees: Vec<u32>) -> Result<Self> {
        Architecture { widths, degrees }.validate()
    }

    /// Returns the architecture iff widths are positive, degrees are at
    /// least two and there is one degree per hidden layer.
    pub fn validate(self) -> Result<Self> {
        if self.widths.len() < 2 {
            return Err(Error::LengthMismatch { widths: self.widths.len(), expected: 0, got: self.degrees.len() });
        }
        if let Some(index) = self.widths.iter().position(|&w| w == 0) {
            return Err(Error::WidthZero { index });
        }
        let expected = self.widths.len() - 2;
        if self.degrees.len() != expected {
            return Err(Error::LengthMismatch { widths: self.widths.len(), expected, got: self.degrees.len() });
        }
        if let Some(pos) = self.degrees.iter().position(|&d| d < 2) {
            return Err(Error::DegreeBelowTwo { index: pos + 1, degree: self.degrees[pos] });
        }
        Ok(self)
    }

    pub fn widths(&self) -> &[usize] {
        &self.widths
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    /// Number of layers `L`.
    pub fn depth(&self) -> usize {
        self.widths.len() - 1
    }

    pub fn width(&self, i: usize) -> usize {
        self.widths[i]
    }

    /// Activation degree `d_i`, 1-based.
    pub fn degree(&self, i: usize) -> u32 {
        self.degrees[i - 1]
    }

    pub fn inputs(&self) -> usize {
        self.widths[0]
    }

    pub fn outputs(&self) -> usize {
        *self.widths.last().unwrap()
    }

    /// Output degree `D = prod d_i`.
    pub fn total_degree(&self) -> u32 {
        self.degrees.iter().product()
    }

    /// Degree in `x` of the layer-`k` polynomials: `prod_{t<k} d_t`.
    pub fn layer_degree(&self, k: usize) -> u32 {
        self.degrees[..k.saturating_sub(1)].iter().product()
    }

    pub fn weight_count(&self) -> usize {
        (1..=self.depth()).map(|i| self.widths[i] * self.widths[i - 1]).sum()
    }

    /// `sum_i n_i (n_{i-1} - 1)`: parameters left after the standard gauge.
    pub fn free_weight_count(&self) -> usize {
        (1..=self.depth()).map(|i| self.widths[i] * (self.widths[i - 1] - 1)).sum()
    }

    /// `binom(n_0 - 1 + D, n_0 - 1)`: coefficients of one output form.
    pub fn coefficients_per_output(&self) -> u128 {
        binomial(self.inputs() as u64 - 1 + self.total_degree() as u64, self.inputs() as u64 - 1)
    }

    /// `n_L * (binom(n_0 - 1 + D, n_0 - 1) - 1)`.
    pub fn affine_target_dim(&self) -> u128 {
        self.outputs() as u128 * (self.coefficients_per_output() - 1)
    }

    /// The same architecture with the output width replaced.
    pub fn with_outputs(&self, outputs: usize) -> Architecture {
        let mut widths = self.widths.clone();
        *widths.last_mut().unwrap() = outputs;
        Architecture { widths, degrees: self.degrees.clone() }
    }

    fn sort_key(&self) -> (usize, &[usize], &[u32]) {
        (self.depth(), &self.widths, &self.degrees)
    }
}

impl Ord for Architecture {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for Architecture {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Architecture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w: Vec<String> = self.widths.iter().map(ToString::to_string).collect();
        let d: Vec<String> = self.degrees.iter().map(ToString::to_string).collect();
        write!(f, "({}),({})", w.join(","), d.join(","))
    }
}

/// A weight entry `W_layer[row][col]`; `layer` is 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WeightId {
    pub layer: usize,
    pub row: usize,
    pub col: usize,
}

impl WeightId {
    pub fn name(&self) -> String {
        format!("w{}_{}_{}", self.layer, self.row, self.col)
    }
}

/// Variable layout of the network ring: inputs first, then all weights in
/// (layer, row, col) order.
#[derive(Clone, Debug)]
pub struct NetworkRing {
    arch: Architecture,
    offsets: Vec<usize>,
}

impl NetworkRing {
    pub fn new(arch: &Architecture) -> Self {
        let mut offsets = vec![arch.inputs()];
        for i in 1..=arch.depth() {
            let last = *offsets.last().unwrap();
            offsets.push(last + arch.width(i) * arch.width(i - 1));
        }
        NetworkRing { arch: arch.clone(), offsets }
    }

    pub fn nvars(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    pub fn input_var(&self, i: usize) -> usize {
        i
    }

    pub fn weight_var(&self, w: WeightId) -> usize {
        self.offsets[w.layer - 1] + w.row * self.arch.width(w.layer - 1) + w.col
    }

    /// Variable indices of all entries of `W_layer`.
    pub fn layer_vars(&self, layer: usize) -> Vec<usize> {
        (self.offsets[layer - 1]..self.offsets[layer]).collect()
    }

    pub fn names(&self) -> Vec<String> {
        let mut names: Vec<String> = (0..self.arch.inputs()).map(|i| format!("x{i}")).collect();
        for w in all_weights(&self.arch) {
            names.push(w.name());
        }
        names
    }
}

/// Every weight of the architecture in ring order.
pub fn all_weights(arch: &Architecture) -> Vec<WeightId> {
    let mut out = Vec::with_capacity(arch.weight_count());
    for layer in 1..=arch.depth() {
        for row in 0..arch.width(layer) {
            for col in 0..arch.width(layer - 1) {
                out.push(WeightId { layer, row, col });
            }
        }
    }
    out
}

/// Marks weights fixed to the constant 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugeMask {
    fixed: Vec<Vec<Vec<bool>>>,
}

impl GaugeMask {
    /// Last column of every weight matrix fixed to 1.
    pub fn standard(arch: &Architecture) -> Self {
        let fixed = (1..=arch.depth())
            .map(|l| {
                let cols = arch.width(l - 1);
                (0..arch.width(l)).map(|_| (0..cols).map(|c| c + 1 == cols).collect()).collect()
            })
            .collect();
        GaugeMask { fixed }
    }

    /// Mask fixing exactly the listed entries. Each row must fix one entry.
    pub fn from_fixed(arch: &Architecture, entries: &[WeightId]) -> Result<Self> {
        let mut fixed: Vec<Vec<Vec<bool>>> =
            (1..=arch.depth()).map(|l| vec![vec![false; arch.width(l - 1)]; arch.width(l)]).collect();
        for w in entries {
            if w.layer == 0
                || w.layer > arch.depth()
                || w.row >= arch.width(w.layer)
                || w.col >= arch.width(w.layer - 1)
            {
                return Err(Error::Invalid(format!("gauge entry {} out of range", w.name())));
            }
            fixed[w.layer - 1][w.row][w.col] = true;
        }
        for (l, rows) in fixed.iter().enumerate() {
            for (r, row) in rows.iter().enumerate() {
                let n = row.iter().filter(|&&b| b).count();
                if n != 1 {
                    return Err(Error::InvalidGauge { layer: l + 1, row: r, fixed: n });
                }
            }
        }
        Ok(GaugeMask { fixed })
    }

    pub fn is_fixed(&self, w: WeightId) -> bool {
        self.fixed[w.layer - 1][w.row][w.col]
    }
}

/// Per-layer weight matrices with entries drawn from some carrier type
/// (symbolic polynomials or field elements).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightAssignment<T> {
    layers: Vec<Vec<Vec<T>>>,
}

impl<T: Clone> WeightAssignment<T> {
    /// Checks that `W_i` has shape `n_i x n_{i-1}`.
    pub fn new(arch: &Architecture, layers: Vec<Vec<Vec<T>>>) -> Result<Self> {
        if layers.len() != arch.depth() {
            return Err(Error::Invalid(format!("{} weight matrices for {} layers", layers.len(), arch.depth())));
        }
        for (i, m) in layers.iter().enumerate() {
            let (rows, cols) = (arch.width(i + 1), arch.width(i));
            let got_cols = m.first().map_or(0, Vec::len);
            if m.len() != rows || m.iter().any(|r| r.len() != cols) {
                return Err(Error::ShapeMismatch { layer: i + 1, rows, cols, got_rows: m.len(), got_cols });
            }
        }
        Ok(WeightAssignment { layers })
    }

    pub fn get(&self, w: WeightId) -> &T {
        &self.layers[w.layer - 1][w.row][w.col]
    }

    pub fn layer(&self, layer: usize) -> &[Vec<T>] {
        &self.layers[layer - 1]
    }

    pub fn map<U: Clone>(&self, f: impl Fn(WeightId, &T) -> U) -> WeightAssignment<U> {
        let layers = self
            .layers
            .iter()
            .enumerate()
            .map(|(l, m)| {
                m.iter()
                    .enumerate()
                    .map(|(row, r)| {
                        r.iter().enumerate().map(|(col, v)| f(WeightId { layer: l + 1, row, col }, v)).collect()
                    })
                    .collect()
            })
            .collect();
        WeightAssignment { layers }
    }
}

impl<D: Domain> WeightAssignment<SparsePoly<D>> {
    /// Every weight is its own ring variable.
    pub fn symbolic(arch: &Architecture, domain: &D) -> Self {
        Self::gauged_symbolic(arch, domain, None)
    }

    /// Weights are ring variables except gauged entries, which are 1.
    pub fn gauged_symbolic(arch: &Architecture, domain: &D, mask: Option<&GaugeMask>) -> Self {
        let ring = NetworkRing::new(arch);
        let n = ring.nvars();
        let layers = (1..=arch.depth())
            .map(|layer| {
                (0..arch.width(layer))
                    .map(|row| {
                        (0..arch.width(layer - 1))
                            .map(|col| {
                                let w = WeightId { layer, row, col };
                                if mask.is_some_and(|m| m.is_fixed(w)) {
                                    SparsePoly::one(domain, n)
                                } else {
                                    SparsePoly::var(domain, n, ring.weight_var(w))
                                }
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        WeightAssignment { layers }
    }
}

/// `F_{k,j}` for every layer `k = 1..L`; `layers[k-1]` holds layer `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayerPolynomials<D: Domain> {
    pub layers: Vec<Vec<SparsePoly<D>>>,
}

impl<D: Domain> LayerPolynomials<D> {
    pub fn outputs(&self) -> &[SparsePoly<D>] {
        self.layers.last().unwrap()
    }
}

/// Symbolic forward pass. Weight entries are polynomials in the network ring.
pub fn forward_layers<D: Domain>(
    arch: &Architecture,
    weights: &WeightAssignment<SparsePoly<D>>,
    domain: &D,
) -> Result<LayerPolynomials<D>> {
    WeightAssignment::new(arch, weights.layers.clone())?;
    let ring = NetworkRing::new(arch);
    let n = ring.nvars();
    let mut prev: Vec<SparsePoly<D>> =
        (0..arch.inputs()).map(|i| SparsePoly::var(domain, n, ring.input_var(i))).collect();
    let mut layers = Vec::with_capacity(arch.depth());
    for k in 1..=arch.depth() {
        let activated: Vec<SparsePoly<D>> =
            if k == 1 { prev.clone() } else { prev.iter().map(|p| p.pow(arch.degree(k - 1))).collect() };
        let current: Vec<SparsePoly<D>> = weights
            .layer(k)
            .iter()
            .map(|row| row.iter().zip(&activated).fold(SparsePoly::zero(domain, n), |acc, (w, a)| &acc + &(w * a)))
            .collect();
        layers.push(current.clone());
        prev = current;
    }
    Ok(LayerPolynomials { layers })
}

/// For each output, its coefficients in the degree-`D` monomial basis of the
/// inputs, as polynomials in the weight variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientMap<D: Domain> {
    pub arch: Architecture,
    pub outputs: Vec<Vec<SparsePoly<D>>>,
}

impl<D: Domain> CoefficientMap<D> {
    pub fn names(&self) -> Vec<String> {
        NetworkRing::new(&self.arch).names()
    }
}

/// Coefficient map of the architecture with fully symbolic weights.
pub fn coefficient_map<D: Domain>(arch: &Architecture, domain: &D) -> CoefficientMap<D> {
    coefficient_map_with(arch, &WeightAssignment::symbolic(arch, domain), domain)
        .expect("symbolic weights are well shaped")
}

/// Coefficient map for a given (possibly partially constant) weight assignment.
pub fn coefficient_map_with<D: Domain>(
    arch: &Architecture,
    weights: &WeightAssignment<SparsePoly<D>>,
    domain: &D,
) -> Result<CoefficientMap<D>> {
    let layers = forward_layers(arch, weights, domain)?;
    let n0 = arch.inputs();
    let nvars = NetworkRing::new(arch).nvars();
    let basis = monomials_of_degree(n0, arch.total_degree());
    let outputs = layers
        .outputs()
        .iter()
        .map(|f| {
            let mut by_mono = f.coefficients_in_leading(n0);
            basis.iter().map(|m| by_mono.remove(m).unwrap_or_else(|| SparsePoly::zero(domain, nvars))).collect()
        })
        .collect();
    Ok(CoefficientMap { arch: arch.clone(), outputs })
}

/// The affine parameterization: gauged weights fixed to 1, each output
/// dehomogenized by its pivot coefficient (the coefficient of `x0^D`).
#[derive(Debug)]
pub struct GaugedMap {
    arch: Architecture,
    mask: GaugeMask,
    free: Vec<WeightId>,
    pivots: Vec<usize>,
    symbolic: OnceLock<CoefficientMap<Rationals>>,
}

impl Clone for GaugedMap {
    fn clone(&self) -> Self {
        GaugedMap {
            arch: self.arch.clone(),
            mask: self.mask.clone(),
            free: self.free.clone(),
            pivots: self.pivots.clone(),
            symbolic: OnceLock::new(),
        }
    }
}

/// Standard gauge: last column of every `W_i` fixed to 1.
pub fn gauge_fix(arch: &Architecture) -> GaugedMap {
    GaugedMap::new(arch, GaugeMask::standard(arch))
}

impl GaugedMap {
    pub fn new(arch: &Architecture, mask: GaugeMask) -> Self {
        let free = all_weights(arch).into_iter().filter(|w| !mask.is_fixed(*w)).collect();
        GaugedMap { arch: arch.clone(), mask, free, pivots: vec![0; arch.outputs()], symbolic: OnceLock::new() }
    }

    pub fn arch(&self) -> &Architecture {
        &self.arch
    }

    pub fn mask(&self) -> &GaugeMask {
        &self.mask
    }

    /// Free weights in (layer, row, col) order; these index Jacobian columns.
    pub fn free_weights(&self) -> &[WeightId] {
        &self.free
    }

    pub fn free_count(&self) -> usize {
        self.free.len()
    }

    /// Pivot coefficient index per output.
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coordinates of the affine target: `n_L * (coefficients - 1)`.
    pub fn target_dim(&self) -> usize {
        self.arch.affine_target_dim() as usize
    }

    /// Full weight matrices at a point of the free-weight space.
    pub fn expand_point<D: Domain>(&self, domain: &D, point: &[D::Elem]) -> Result<WeightAssignment<D::Elem>> {
        if point.len() != self.free.len() {
            return Err(Error::PointArity { expected: self.free.len(), got: point.len() });
        }
        let mut it = point.iter();
        let layers = (1..=self.arch.depth())
            .map(|layer| {
                (0..self.arch.width(layer))
                    .map(|row| {
                        (0..self.arch.width(layer - 1))
                            .map(|col| {
                                if self.mask.is_fixed(WeightId { layer, row, col }) {
                                    domain.one()
                                } else {
                                    it.next().unwrap().clone()
                                }
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        WeightAssignment::new(&self.arch, layers)
    }

    /// Symbolic coefficient map with the gauge substituted; built on first use.
    pub fn symbolic(&self) -> &CoefficientMap<Rationals> {
        self.symbolic.get_or_init(|| {
            let q = Rationals;
            let w = WeightAssignment::gauged_symbolic(&self.arch, &q, Some(&self.mask));
            coefficient_map_with(&self.arch, &w, &q).expect("gauged weights are well shaped")
        })
    }

    /// The affine coordinate `(numerator, denominator)` for output `output`
    /// and coefficient `index` (which must differ from the pivot).
    pub fn affine_coordinate(&self, output: usize, index: usize) -> (SparsePoly<Rationals>, SparsePoly<Rationals>) {
        let map = self.symbolic();
        (map.outputs[output][index].clone(), map.outputs[output][self.pivots[output]].clone())
    }

    /// Ring variable index of each free weight, in column order.
    pub fn free_vars(&self) -> Vec<usize> {
        let ring = NetworkRing::new(&self.arch);
        self.free.iter().map(|w| ring.weight_var(*w)).collect()
    }
}

/// Numeric forward pass: every `F_{k,j}` as a dense form at concrete weights.
pub fn forward_numeric<D: Domain>(
    arch: &Architecture,
    weights: &WeightAssignment<D::Elem>,
    domain: &D,
) -> Vec<Vec<Form<D>>> {
    let n0 = arch.inputs();
    let mut prev: Vec<Form<D>> = (0..n0).map(|i| Form::var(domain, n0, i)).collect();
    let mut layers = Vec::with_capacity(arch.depth());
    for k in 1..=arch.depth() {
        let activated: Vec<Form<D>> =
            if k == 1 { prev.clone() } else { prev.iter().map(|f| f.pow(domain, arch.degree(k - 1))).collect() };
        let current = linear_combinations(domain, weights.layer(k), &activated);
        layers.push(current.clone());
        prev = current;
    }
    layers
}

pub(crate) fn linear_combinations<D: Domain>(domain: &D, matrix: &[Vec<D::Elem>], inputs: &[Form<D>]) -> Vec<Form<D>> {
    matrix
        .iter()
        .map(|row| {
            let mut acc = Form::zero(domain, inputs[0].nvars(), inputs[0].degree());
            for (w, f) in row.iter().zip(inputs) {
                acc.add_scaled(domain, w, f);
            }
            acc
        })
        .collect()
}
