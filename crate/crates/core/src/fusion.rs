//! PCA fusion of router features into cache weights, and the allocation of
//! an integer chunk budget by those weights.
//!
//! The pipeline is: normalize each feature column, form the centered
//! covariance matrix, take its dominant eigenvector by power iteration,
//! rescale that eigenvector into convex coefficients, project every router's
//! normalized row onto it, floor the projections at a small positive value
//! and normalize them to weights. Uniform and degree baselines produce the
//! same [`WeightVector`] type.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::metrics::RouterFeatureRecord;
use crate::numeric;
use crate::topology::{CentralityVector, NodeId};

/// Lower bound applied to fused values before they become weights.
pub const FUSED_FLOOR: f64 = 0.01;

pub const POWER_ITERATION_TOLERANCE: f64 = 1e-10;
pub const POWER_ITERATION_MAX_ITERS: usize = 10_000;

// a covariance whose largest entry is below this is treated as zero
const DEGENERATE_SCALE: f64 = 1e-14;

pub type Matrix3 = [[f64; 3]; 3];

#[derive(Debug, Clone, PartialEq)]
pub enum FusionError {
    TooFewRouters(usize),
    NonSymmetric,
    NoConvergence { iterations: usize, residual: f64 },
    Degenerate,
    InsufficientBudget { total: usize, routers: usize },
    InvalidWeights,
    LengthMismatch { expected: usize, found: usize },
}

impl fmt::Display for FusionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FusionError::TooFewRouters(n) => write!(f, "need at least 2 routers to normalize, got {n}"),
            FusionError::NonSymmetric => f.write_str("covariance matrix is not symmetric"),
            FusionError::NoConvergence { iterations, residual } => {
                write!(f, "power iteration did not converge in {iterations} steps (residual {residual:e})")
            }
            FusionError::Degenerate => f.write_str("principal components are degenerate"),
            FusionError::InsufficientBudget { total, routers } => {
                write!(f, "cache budget {total} is smaller than the router count {routers}")
            }
            FusionError::InvalidWeights => f.write_str("weights must be finite, non-negative and not all zero"),
            FusionError::LengthMismatch { expected, found } => {
                write!(f, "expected {expected} values, found {found}")
            }
        }
    }
}

impl core::error::Error for FusionError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NormalizationMode {
    /// Per-column `(x - min) / (max - min)`.
    #[default]
    MinMax,
    /// Per-column `(x - mean) / std`, population standard deviation.
    ZScore,
}

impl NormalizationMode {
    pub fn as_str(self) -> &'static str {
        match self {
            NormalizationMode::MinMax => "minmax",
            NormalizationMode::ZScore => "zscore",
        }
    }
}

impl core::str::FromStr for NormalizationMode {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "minmax" => Ok(NormalizationMode::MinMax),
            "zscore" => Ok(NormalizationMode::ZScore),
            _ => Err(()),
        }
    }
}

/// `I x 3` table of `(bc, estimated PI, estimated HI)`, one row per router.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    pub routers: Vec<NodeId>,
    pub rows: Vec<[f64; 3]>,
}

impl FeatureMatrix {
    pub fn new(routers: Vec<NodeId>, rows: Vec<[f64; 3]>) -> Self {
        assert_eq!(routers.len(), rows.len());
        Self { routers, rows }
    }

    pub fn from_records(records: &[RouterFeatureRecord]) -> Self {
        Self {
            routers: records.iter().map(|r| r.router).collect(),
            rows: records.iter().map(RouterFeatureRecord::as_row).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[j]).collect()
    }

    fn with_column(&mut self, j: usize, values: &[f64]) {
        for (row, &v) in self.rows.iter_mut().zip(values) {
            row[j] = v;
        }
    }

    /// Per-column normalization. Constant columns become all zeros.
    pub fn normalize(&self, mode: NormalizationMode) -> Result<FeatureMatrix, FusionError> {
        if self.len() < 2 {
            return Err(FusionError::TooFewRouters(self.len()));
        }
        let mut out = self.clone();
        for j in 0..3 {
            let col = self.column(j);
            out.with_column(j, &normalize_column(&col, mode));
        }
        Ok(out)
    }
}

fn is_constant(col: &[f64]) -> bool {
    let (lo, hi) = min_max(col);
    let scale = lo.abs().max(hi.abs()).max(1.0);
    hi - lo <= 1e-12 * scale
}

fn min_max(col: &[f64]) -> (f64, f64) {
    col.iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)))
}

fn normalize_column(col: &[f64], mode: NormalizationMode) -> Vec<f64> {
    if is_constant(col) {
        return vec![0.0; col.len()];
    }
    match mode {
        NormalizationMode::MinMax => {
            let (lo, hi) = min_max(col);
            let span = hi - lo;
            col.iter()
                .map(|&x| {
                    if x == lo {
                        0.0
                    } else if x == hi {
                        1.0
                    } else {
                        (x - lo) / span
                    }
                })
                .collect()
        }
        NormalizationMode::ZScore => {
            let mean = numeric::mean(col);
            let var = numeric::sum(col.iter().map(|&x| (x - mean) * (x - mean))) / col.len() as f64;
            let std = libm::sqrt(var);
            col.iter().map(|&x| (x - mean) / std).collect()
        }
    }
}

/// Centered covariance with the population divisor `1 / I`.
pub fn covariance(features: &FeatureMatrix) -> Matrix3 {
    let n = features.len().max(1) as f64;
    let means: Vec<f64> = (0..3).map(|j| numeric::mean(&features.column(j))).collect();
    let mut cov = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in i..3 {
            let s = numeric::sum(
                features
                    .rows
                    .iter()
                    .map(|r| (r[i] - means[i]) * (r[j] - means[j])),
            );
            cov[i][j] = s / n;
            cov[j][i] = cov[i][j];
        }
    }
    cov
}

/// Dominant eigenpair rescaled into convex mixing coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrincipalComponents {
    /// Non-negative, sums to 1.
    pub pc: [f64; 3],
    pub eigenvalue: f64,
    /// Unit eigenvector with the sign fixed, before rescaling.
    pub eigenvector: [f64; 3],
    /// `max |Cov v - lambda v|` for `eigenvector`.
    pub residual: f64,
    pub iterations: usize,
    /// Set when the covariance is numerically zero; `pc` is then uniform.
    pub degenerate: bool,
}

fn mat_vec(m: &Matrix3, v: &[f64; 3]) -> [f64; 3] {
    let mut out = [0.0; 3];
    for (i, row) in m.iter().enumerate() {
        out[i] = row[0] * v[0] + row[1] * v[1] + row[2] * v[2];
    }
    out
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm(v: &[f64; 3]) -> f64 {
    libm::sqrt(dot(v, v))
}

fn scaled(v: &[f64; 3], k: f64) -> [f64; 3] {
    [v[0] * k, v[1] * k, v[2] * k]
}

fn residual(m: &Matrix3, v: &[f64; 3], lambda: f64) -> f64 {
    let mv = mat_vec(m, v);
    (0..3).map(|i| (mv[i] - lambda * v[i]).abs()).fold(0.0, f64::max)
}

struct Eigenpair {
    vector: [f64; 3],
    value: f64,
    residual: f64,
    iterations: usize,
}

fn power_iterate(m: &Matrix3, start: [f64; 3], tol: f64) -> Result<Eigenpair, FusionError> {
    let mut v = scaled(&start, 1.0 / norm(&start));
    let mut last_residual = f64::INFINITY;
    for it in 1..=POWER_ITERATION_MAX_ITERS {
        let mv = mat_vec(m, &v);
        let len = norm(&mv);
        if len == 0.0 {
            // start vector lies in the null space
            return Ok(Eigenpair {
                vector: v,
                value: 0.0,
                residual: 0.0,
                iterations: it,
            });
        }
        v = scaled(&mv, 1.0 / len);
        let lambda = dot(&v, &mat_vec(m, &v));
        last_residual = residual(m, &v, lambda);
        if last_residual <= tol {
            return Ok(Eigenpair {
                vector: v,
                value: lambda,
                residual: last_residual,
                iterations: it,
            });
        }
    }
    Err(FusionError::NoConvergence {
        iterations: POWER_ITERATION_MAX_ITERS,
        residual: last_residual,
    })
}

/// Dominant eigenvector of a symmetric PSD 3x3 matrix by power iteration
/// from `(1,1,1)/sqrt(3)`.
///
/// The sign is chosen so the components sum positive (largest component
/// positive when the sum vanishes). The convex coefficients are the
/// eigenvector divided by its component sum, with negative entries clamped
/// to zero and the rest renormalized.
pub fn first_eigenvector(cov: &Matrix3) -> Result<PrincipalComponents, FusionError> {
    let scale = cov.iter().flatten().fold(0.0f64, |a, &x| a.max(x.abs()));
    for i in 0..3 {
        for j in 0..i {
            if (cov[i][j] - cov[j][i]).abs() > 1e-12 * scale.max(1.0) {
                return Err(FusionError::NonSymmetric);
            }
        }
    }
    if scale <= DEGENERATE_SCALE {
        return Ok(PrincipalComponents {
            pc: [1.0 / 3.0; 3],
            eigenvalue: 0.0,
            eigenvector: [0.0; 3],
            residual: 0.0,
            iterations: 0,
            degenerate: true,
        });
    }

    let tol = POWER_ITERATION_TOLERANCE * scale.max(1.0);
    let s = 1.0 / libm::sqrt(3.0);
    let mut best = power_iterate(cov, [s, s, s], tol)?;

    // the Rayleigh quotient of e_i is cov[i][i]; a dominant eigenvalue can't
    // be below it, so a smaller result means the start vector missed the
    // dominant direction
    let (imax, dmax) = (0..3)
        .map(|i| (i, cov[i][i]))
        .fold((0, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
    if best.value < dmax - tol {
        let mut e = [0.0; 3];
        e[imax] = 1.0;
        let retry = power_iterate(cov, e, tol)?;
        if retry.value > best.value {
            best = retry;
        }
    }

    // components within the tolerance of zero are zero if that is at least
    // as good an eigenvector
    let mut snapped = best.vector;
    for x in snapped.iter_mut() {
        if x.abs() < 1e-9 {
            *x = 0.0;
        }
    }
    let len = norm(&snapped);
    if snapped != best.vector && len > 0.0 {
        let snapped = scaled(&snapped, 1.0 / len);
        let value = dot(&snapped, &mat_vec(cov, &snapped));
        let r = residual(cov, &snapped, value);
        if r <= best.residual.max(tol) {
            best.vector = snapped;
            best.value = value;
            best.residual = r;
        }
    }

    let mut v = best.vector;
    let sum = v[0] + v[1] + v[2];
    let flip = if sum.abs() > 1e-12 {
        sum < 0.0
    } else {
        let big = (0..3).fold(0, |a, i| if v[i].abs() > v[a].abs() { i } else { a });
        v[big] < 0.0
    };
    if flip {
        v = scaled(&v, -1.0);
    }
    let positive: f64 = v.iter().map(|&x| x.max(0.0)).sum();
    let pc = [
        v[0].max(0.0) / positive,
        v[1].max(0.0) / positive,
        v[2].max(0.0) / positive,
    ];

    Ok(PrincipalComponents {
        pc,
        eigenvalue: best.value,
        eigenvector: v,
        residual: best.residual,
        iterations: best.iterations,
        degenerate: false,
    })
}

/// Projection of each normalized row onto the convex coefficients.
pub fn fuse(features: &FeatureMatrix, pcs: &PrincipalComponents) -> Result<Vec<f64>, FusionError> {
    if pcs.degenerate {
        return Err(FusionError::Degenerate);
    }
    Ok(features.rows.iter().map(|r| dot(r, &pcs.pc)).collect())
}

/// Router weights summing to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    pub routers: Vec<NodeId>,
    pub values: Vec<f64>,
}

impl WeightVector {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, router: NodeId) -> Option<f64> {
        self.routers
            .iter()
            .position(|&r| r == router)
            .map(|i| self.values[i])
    }

    fn normalized(routers: Vec<NodeId>, raw: Vec<f64>) -> Result<Self, FusionError> {
        if raw.len() != routers.len() {
            return Err(FusionError::LengthMismatch {
                expected: routers.len(),
                found: raw.len(),
            });
        }
        if raw.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(FusionError::InvalidWeights);
        }
        let total = numeric::sum(raw.iter().copied());
        if !(total > 0.0) {
            return Err(FusionError::InvalidWeights);
        }
        Ok(Self {
            routers,
            values: raw.into_iter().map(|x| x / total).collect(),
        })
    }
}

/// Floors every fused value at `floor` and normalizes to sum 1.
pub fn weights(routers: &[NodeId], fused: &[f64], floor: f64) -> Result<WeightVector, FusionError> {
    let floored = fused.iter().map(|&f| f.max(floor)).collect();
    WeightVector::normalized(routers.to_vec(), floored)
}

pub fn uniform_weights(routers: &[NodeId]) -> WeightVector {
    let n = routers.len().max(1) as f64;
    WeightVector {
        routers: routers.to_vec(),
        values: vec![1.0 / n; routers.len()],
    }
}

/// Weights proportional to each router's degree.
pub fn degree_weights(routers: &[NodeId], degree: &CentralityVector) -> Result<WeightVector, FusionError> {
    WeightVector::normalized(routers.to_vec(), degree.select(routers))
}

/// Why the proposed pipeline fell back to uniform weights.
#[derive(Debug, Clone, PartialEq)]
pub enum Fallback {
    DegenerateCovariance,
    NoConvergence,
}

/// Every intermediate of one pass through the fusion pipeline.
#[derive(Debug, Clone)]
pub struct FusionOutcome {
    pub normalized: FeatureMatrix,
    pub covariance: Matrix3,
    pub components: PrincipalComponents,
    pub fused: Vec<f64>,
    pub weights: WeightVector,
    pub fallback: Option<Fallback>,
}

/// Normalize, fuse and weight. A zero covariance or a non-converging power
/// iteration yields uniform weights with the reason recorded.
pub fn proposed_weights(features: &FeatureMatrix, mode: NormalizationMode) -> Result<FusionOutcome, FusionError> {
    let normalized = features.normalize(mode)?;
    let cov = covariance(&normalized);
    let (components, fallback) = match first_eigenvector(&cov) {
        Ok(pc) if pc.degenerate => (pc, Some(Fallback::DegenerateCovariance)),
        Ok(pc) => (pc, None),
        Err(FusionError::NoConvergence { iterations, residual }) => (
            PrincipalComponents {
                pc: [1.0 / 3.0; 3],
                eigenvalue: f64::NAN,
                eigenvector: [0.0; 3],
                residual,
                iterations,
                degenerate: true,
            },
            Some(Fallback::NoConvergence),
        ),
        Err(e) => return Err(e),
    };
    if fallback.is_some() {
        return Ok(FusionOutcome {
            weights: uniform_weights(&normalized.routers),
            fused: vec![0.0; normalized.len()],
            normalized,
            covariance: cov,
            components,
            fallback,
        });
    }
    let fused = fuse(&normalized, &components)?;
    let weights = weights(&normalized.routers, &fused, FUSED_FLOOR)?;
    Ok(FusionOutcome {
        normalized,
        covariance: cov,
        components,
        fused,
        weights,
        fallback,
    })
}

/// Integer chunk capacities per router summing exactly to `total`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AllocationPlan {
    pub routers: Vec<NodeId>,
    pub capacities: Vec<usize>,
    pub total: usize,
}

impl AllocationPlan {
    pub fn capacity(&self, router: NodeId) -> Option<usize> {
        self.routers
            .iter()
            .position(|&r| r == router)
            .map(|i| self.capacities[i])
    }
}

/// Splits `total` chunks by weight.
///
/// Every router first gets one chunk; the remaining `total - n` chunks are
/// divided by largest remainder (ties to the larger weight, then the lower
/// index). The result sums to `total` and never ranks a lighter router
/// above a heavier one.
pub fn allocate(w: &WeightVector, total: usize) -> Result<AllocationPlan, FusionError> {
    let n = w.len();
    if n == 0 || total < n {
        return Err(FusionError::InsufficientBudget { total, routers: n });
    }
    let weight_sum = numeric::sum(w.values.iter().copied());
    if w.values.iter().any(|x| !x.is_finite() || *x < 0.0) || !(weight_sum > 0.0) {
        return Err(FusionError::InvalidWeights);
    }
    let spare = (total - n) as f64;
    let quotas: Vec<f64> = w.values.iter().map(|&x| spare * x / weight_sum).collect();
    let mut capacities: Vec<usize> = quotas.iter().map(|&q| 1 + libm::floor(q) as usize).collect();
    let assigned: usize = capacities.iter().sum();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        let ra = quotas[a] - libm::floor(quotas[a]);
        let rb = quotas[b] - libm::floor(quotas[b]);
        rb.total_cmp(&ra)
            .then_with(|| w.values[b].total_cmp(&w.values[a]))
            .then_with(|| a.cmp(&b))
    });
    let mut left = total.saturating_sub(assigned);
    for &i in order.iter().cycle() {
        if left == 0 {
            break;
        }
        capacities[i] += 1;
        left -= 1;
    }
    // floor rounding can only undershoot, so the cycle above never has to give chunks back
    debug_assert_eq!(capacities.iter().sum::<usize>(), total);

    Ok(AllocationPlan {
        routers: w.routers.clone(),
        capacities,
        total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(n: usize) -> Vec<NodeId> {
        (0..n).map(NodeId).collect()
    }

    fn single_column(values: &[f64]) -> FeatureMatrix {
        FeatureMatrix::new(ids(values.len()), values.iter().map(|&v| [v, 0.0, 0.0]).collect())
    }

    fn wv(values: &[f64]) -> WeightVector {
        WeightVector {
            routers: ids(values.len()),
            values: values.to_vec(),
        }
    }

    #[test]
    fn minmax_is_affine() {
        let m = single_column(&[2.0, 4.0, 6.0]).normalize(NormalizationMode::MinMax).unwrap();
        assert_eq!(m.column(0), vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn zscore_uses_population_std() {
        let m = single_column(&[2.0, 4.0, 6.0]).normalize(NormalizationMode::ZScore).unwrap();
        let c = m.column(0);
        let k = 2.0 / libm::sqrt(8.0 / 3.0);
        assert!((c[0] + k).abs() < 1e-12 && c[1].abs() < 1e-12 && (c[2] - k).abs() < 1e-12);
        assert!((k - 1.224744871).abs() < 1e-9);
    }

    #[test]
    fn constant_columns_become_zero() {
        for mode in [NormalizationMode::MinMax, NormalizationMode::ZScore] {
            let m = single_column(&[5.0, 5.0, 5.0]).normalize(mode).unwrap();
            assert_eq!(m.column(0), vec![0.0; 3]);
        }
        assert_eq!(
            single_column(&[1.0]).normalize(NormalizationMode::MinMax),
            Err(FusionError::TooFewRouters(1))
        );
    }

    #[test]
    fn covariance_of_two_point_cloud() {
        let m = FeatureMatrix::new(ids(2), vec![[0.0; 3], [1.0; 3]]);
        let cov = covariance(&m.normalize(NormalizationMode::MinMax).unwrap());
        assert!(cov.iter().flatten().all(|&c| (c - 0.25).abs() < 1e-15));
    }

    #[test]
    fn zscore_covariance_has_unit_diagonal() {
        let m = FeatureMatrix::new(
            ids(4),
            vec![[1.0, 3.0, 0.0], [2.0, 1.0, 5.0], [4.0, 0.0, 1.0], [0.5, 2.0, 2.0]],
        );
        let cov = covariance(&m.normalize(NormalizationMode::ZScore).unwrap());
        for i in 0..3 {
            assert!((cov[i][i] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn correlated_columns_have_unit_correlation() {
        let m = FeatureMatrix::new(ids(3), vec![[1.0, 2.0, 0.0], [2.0, 4.0, 1.0], [4.0, 8.0, 0.0]]);
        let cov = covariance(&m);
        let corr = cov[0][1] / libm::sqrt(cov[0][0] * cov[1][1]);
        assert!((corr - 1.0).abs() < 1e-12);
    }

    #[test]
    fn diagonal_matrix_gives_axis() {
        let pc = first_eigenvector(&[[4.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]).unwrap();
        assert_eq!(pc.pc, [1.0, 0.0, 0.0]);
        assert!((pc.eigenvalue - 4.0).abs() < 1e-12);
    }

    #[test]
    fn rank_one_matrix() {
        let pc = first_eigenvector(&[[0.25; 3]; 3]).unwrap();
        for c in pc.pc {
            assert!((c - 1.0 / 3.0).abs() < 1e-12);
        }
        assert!((pc.eigenvalue - 0.75).abs() < 1e-12);
    }

    #[test]
    fn zero_matrix_is_degenerate() {
        let pc = first_eigenvector(&[[0.0; 3]; 3]).unwrap();
        assert!(pc.degenerate);
        assert_eq!(fuse(&single_column(&[1.0, 2.0]), &pc), Err(FusionError::Degenerate));
    }

    #[test]
    fn rejects_asymmetric_input() {
        let m = [[1.0, 0.5, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        assert_eq!(first_eigenvector(&m), Err(FusionError::NonSymmetric));
    }

    #[test]
    fn start_vector_orthogonal_to_dominant_direction() {
        // dominant eigenvector (1,-1,0)/sqrt2 is orthogonal to (1,1,1)
        let m = [[2.0, -1.0, 0.0], [-1.0, 2.0, 0.0], [0.0, 0.0, 0.5]];
        let pc = first_eigenvector(&m).unwrap();
        assert!((pc.eigenvalue - 3.0).abs() < 1e-9);
        assert!(pc.pc.iter().all(|&c| c >= 0.0));
        assert!((pc.pc.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn negative_loadings_are_clamped() {
        // dominant direction (2, 2, -1)/3 has a negative loading
        let v = [2.0 / 3.0, 2.0 / 3.0, -1.0 / 3.0];
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = 5.0 * v[i] * v[j] + if i == j { 0.1 } else { 0.0 };
            }
        }
        let pc = first_eigenvector(&m).unwrap();
        assert!((pc.pc[0] - 0.5).abs() < 1e-9 && (pc.pc[1] - 0.5).abs() < 1e-9);
        assert_eq!(pc.pc[2], 0.0);
    }

    #[test]
    fn fuse_examples() {
        let axis = PrincipalComponents {
            pc: [1.0, 0.0, 0.0],
            eigenvalue: 1.0,
            eigenvector: [1.0, 0.0, 0.0],
            residual: 0.0,
            iterations: 1,
            degenerate: false,
        };
        let m = FeatureMatrix::new(ids(2), vec![[0.3, 0.9, 0.1], [0.7, 0.2, 0.4]]);
        assert_eq!(fuse(&m, &axis).unwrap(), vec![0.3, 0.7]);

        let third = PrincipalComponents {
            pc: [1.0 / 3.0; 3],
            ..axis
        };
        let m = FeatureMatrix::new(ids(1), vec![[0.6; 3]]);
        assert!((fuse(&m, &third).unwrap()[0] - 0.6).abs() < 1e-15);

        let row = [0.62963791, 0.57540494, 0.56401801];
        let m = FeatureMatrix::new(ids(1), vec![row]);
        assert!((fuse(&m, &third).unwrap()[0] - 0.58968695).abs() < 5e-9);
    }

    #[test]
    fn weight_examples() {
        let w = weights(&ids(4), &[1.0; 4], FUSED_FLOOR).unwrap();
        assert_eq!(w.values, vec![0.25; 4]);
        let w = weights(&ids(2), &[1.0, 3.0], FUSED_FLOOR).unwrap();
        assert_eq!(w.values, vec![0.25, 0.75]);
        let w = weights(&ids(2), &[0.0, 1.0], FUSED_FLOOR).unwrap();
        assert!((w.values[0] - 0.01 / 1.01).abs() < 1e-15);
        assert!((w.values[1] - 1.0 / 1.01).abs() < 1e-15);
    }

    #[test]
    fn allocation_examples() {
        assert_eq!(allocate(&wv(&[0.5, 0.5]), 10).unwrap().capacities, vec![5, 5]);
        assert_eq!(allocate(&wv(&[0.62, 0.38]), 10).unwrap().capacities, vec![6, 4]);
        assert_eq!(allocate(&wv(&[0.999, 0.001]), 10).unwrap().capacities, vec![9, 1]);
        assert_eq!(
            allocate(&wv(&[0.5, 0.5]), 1),
            Err(FusionError::InsufficientBudget { total: 1, routers: 2 })
        );
    }

    #[test]
    fn uniform_eleven_routers() {
        let w = uniform_weights(&ids(11));
        assert!(w.values.iter().all(|&x| (x - 1.0 / 11.0).abs() < 1e-15));
        assert!(allocate(&w, 1100).unwrap().capacities.iter().all(|&c| c == 100));
        assert_eq!(uniform_weights(&ids(1)).values, vec![1.0]);
    }

    #[test]
    fn degree_baseline() {
        let deg = CentralityVector::from_values(vec![1.0, 1.0, 2.0]);
        assert_eq!(degree_weights(&ids(3), &deg).unwrap().values, vec![0.25, 0.25, 0.5]);
    }

    #[test]
    fn constant_features_fall_back_to_uniform() {
        let m = FeatureMatrix::new(ids(3), vec![[1.0, 2.0, 3.0]; 3]);
        let out = proposed_weights(&m, NormalizationMode::MinMax).unwrap();
        assert_eq!(out.fallback, Some(Fallback::DegenerateCovariance));
        assert_eq!(out.weights, uniform_weights(&ids(3)));
    }

    #[test]
    fn bc_only_when_traffic_columns_are_flat() {
        let m = FeatureMatrix::new(ids(3), vec![[0.0, 0.0, 0.0], [2.0, 0.0, 0.0], [4.0, 0.0, 0.0]]);
        let out = proposed_weights(&m, NormalizationMode::MinMax).unwrap();
        assert_eq!(out.components.pc, [1.0, 0.0, 0.0]);
        assert_eq!(out.fused, vec![0.0, 0.5, 1.0]);
    }
}
