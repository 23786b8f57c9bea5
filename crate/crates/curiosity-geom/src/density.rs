//! Non-parametric occupancy estimation for sampled continuous states.
//!
//! The k-nearest-neighbor estimate at a query point is
//! `k / (N * V_D(r_k))` with `r_k` the distance to the k-th nearest sample
//! and `V_D` the Euclidean ball volume. Information values computed from
//! the estimate extend the discrete rewards to continuous spaces; the
//! consistency report measures how the log-density error shrinks with the
//! sample count on synthetic generators.

use rand::Rng;
use serde::Serialize;
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::rewards::alpha_information_value;
use crate::rng::{sample_standard_normal, stream_rng};

/// An immutable batch of sample points in D-dimensional Euclidean space.
#[derive(Debug, Clone)]
pub struct SampleSet {
    points: Vec<Vec<f64>>,
    dim: usize,
}

impl SampleSet {
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidArgument(
                "sample set needs at least two points".into(),
            ));
        }
        let dim = points[0].len();
        if dim == 0 {
            return Err(Error::InvalidArgument("points must have a dimension".into()));
        }
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::InvalidArgument(format!(
                    "point {i} has dimension {}, expected {dim}",
                    p.len()
                )));
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "point {i} has a non-finite coordinate"
                )));
            }
        }
        Ok(Self { points, dim })
    }

    /// Parse one point per line, comma-separated coordinates.
    pub fn from_csv(text: &str, path: &str) -> Result<Self> {
        let mut points = Vec::new();
        for (line_no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let coords: std::result::Result<Vec<f64>, _> =
                line.split(',').map(|c| c.trim().parse::<f64>()).collect();
            match coords {
                Ok(c) => points.push(c),
                Err(e) => {
                    return Err(Error::Parse {
                        path: path.to_string(),
                        message: format!("line {}: {e}", line_no + 1),
                    })
                }
            }
        }
        Self::new(points)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }
}

/// Volume of the D-dimensional Euclidean ball of radius `r`.
pub fn ball_volume(dim: usize, radius: f64) -> f64 {
    let d = dim as f64;
    std::f64::consts::PI.powf(d / 2.0) / gamma(d / 2.0 + 1.0) * radius.powf(d)
}

/// A k-nearest-neighbor density estimate.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct KnnDensity {
    pub value: f64,
    pub kth_radius: f64,
    /// Set when duplicate points collapse the k-th radius to zero, making
    /// the estimate infinite.
    pub degenerate: bool,
}

/// Estimate the density at `query` from the k-th nearest sample distance
/// (closed-ball convention: ties at the k-th radius are included by
/// construction).
pub fn knn_density(samples: &SampleSet, query: &[f64], k: usize) -> Result<KnnDensity> {
    if query.len() != samples.dim() {
        return Err(Error::DimensionMismatch {
            left: query.len(),
            right: samples.dim(),
        });
    }
    if k == 0 || k >= samples.len() {
        return Err(Error::InvalidArgument(format!(
            "k must satisfy 1 <= k < {}, got {k}",
            samples.len()
        )));
    }
    let mut sq_dists: Vec<f64> = samples
        .points()
        .iter()
        .map(|p| {
            p.iter()
                .zip(query)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
        })
        .collect();
    let (_, kth, _) = sq_dists.select_nth_unstable_by(k - 1, f64::total_cmp);
    let radius = kth.sqrt();
    if radius == 0.0 {
        return Ok(KnnDensity {
            value: f64::INFINITY,
            kth_radius: 0.0,
            degenerate: true,
        });
    }
    let n = samples.len() as f64;
    Ok(KnnDensity {
        value: k as f64 / (n * ball_volume(samples.dim(), radius)),
        kth_radius: radius,
        degenerate: false,
    })
}

/// Information of the query state under the estimated occupancy:
/// `I_alpha(query; p_hat)`.
pub fn estimated_information(
    samples: &SampleSet,
    query: &[f64],
    k: usize,
    alpha: f64,
) -> Result<f64> {
    let density = knn_density(samples, query, k)?;
    if density.degenerate {
        return alpha_information_value(f64::INFINITY, alpha);
    }
    alpha_information_value(density.value, alpha)
}

/// Rule for choosing the neighbor count from the sample size.
#[derive(Debug, Clone, Copy, Serialize)]
pub enum KRule {
    /// `k = ceil(sqrt(N))`: the standard bias/variance compromise.
    SqrtN,
    Fixed(usize),
}

impl KRule {
    pub fn k_for(&self, n: usize) -> usize {
        match self {
            KRule::SqrtN => (n as f64).sqrt().ceil() as usize,
            KRule::Fixed(k) => *k,
        }
    }
}

/// Synthetic data generators with known densities.
#[derive(Debug, Clone, Copy, Serialize)]
pub enum SyntheticGenerator {
    /// Uniform on the unit box `[0,1]^dim`; density 1 inside.
    UniformBox { dim: usize },
    /// Standard normal in `dim` dimensions.
    Gaussian { dim: usize },
}

impl SyntheticGenerator {
    pub fn dim(&self) -> usize {
        match self {
            SyntheticGenerator::UniformBox { dim } | SyntheticGenerator::Gaussian { dim } => *dim,
        }
    }

    fn sample(&self, rng: &mut impl Rng) -> Vec<f64> {
        match self {
            SyntheticGenerator::UniformBox { dim } => {
                (0..*dim).map(|_| rng.random::<f64>()).collect()
            }
            SyntheticGenerator::Gaussian { dim } => {
                (0..*dim).map(|_| sample_standard_normal(rng)).collect()
            }
        }
    }

    /// Query points drawn from the well-covered interior of the support.
    fn sample_query(&self, rng: &mut impl Rng) -> Vec<f64> {
        match self {
            SyntheticGenerator::UniformBox { dim } => (0..*dim)
                .map(|_| 0.3 + 0.4 * rng.random::<f64>())
                .collect(),
            SyntheticGenerator::Gaussian { dim } => (0..*dim)
                .map(|_| 0.5 * sample_standard_normal(rng))
                .collect(),
        }
    }

    pub fn true_density(&self, x: &[f64]) -> f64 {
        match self {
            SyntheticGenerator::UniformBox { .. } => {
                if x.iter().all(|&c| (0.0..=1.0).contains(&c)) {
                    1.0
                } else {
                    0.0
                }
            }
            SyntheticGenerator::Gaussian { dim } => {
                let sq: f64 = x.iter().map(|c| c * c).sum();
                (std::f64::consts::TAU).powf(-(*dim as f64) / 2.0) * (-sq / 2.0).exp()
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            SyntheticGenerator::UniformBox { dim } => format!("uniform-box-{dim}d"),
            SyntheticGenerator::Gaussian { dim } => format!("gaussian-{dim}d"),
        }
    }
}

/// One row of the consistency report.
#[derive(Debug, Clone, Serialize)]
pub struct ConsistencyEntry {
    pub n: usize,
    pub k: usize,
    pub mean_abs_log_error: f64,
}

/// Estimator consistency over growing sample counts.
#[derive(Debug, Clone, Serialize)]
pub struct ConsistencyReport {
    pub generator: String,
    pub dim: usize,
    pub queries: usize,
    pub seed: u64,
    pub entries: Vec<ConsistencyEntry>,
    /// Errors decrease with N, allowing at most one inversion from noise.
    pub decreasing: bool,
}

/// Measure mean absolute log-density error for each sample count.
pub fn estimator_consistency_report(
    generator: SyntheticGenerator,
    sample_counts: &[usize],
    k_rule: KRule,
    seed: u64,
) -> Result<ConsistencyReport> {
    let queries = 256;
    let mut entries = Vec::with_capacity(sample_counts.len());
    for (i, &n) in sample_counts.iter().enumerate() {
        let mut rng = stream_rng(seed, i as u64);
        let samples =
            SampleSet::new((0..n).map(|_| generator.sample(&mut rng)).collect())?;
        let k = k_rule.k_for(n);
        let mut total = 0.0;
        let mut query_rng = stream_rng(seed, 1000 + i as u64);
        for _ in 0..queries {
            let q = generator.sample_query(&mut query_rng);
            let est = knn_density(&samples, &q, k)?;
            let truth = generator.true_density(&q);
            total += (est.value.ln() - truth.ln()).abs();
        }
        entries.push(ConsistencyEntry {
            n,
            k,
            mean_abs_log_error: total / queries as f64,
        });
    }
    let inversions = entries
        .windows(2)
        .filter(|w| w[1].mean_abs_log_error > w[0].mean_abs_log_error)
        .count();
    Ok(ConsistencyReport {
        generator: generator.label(),
        dim: generator.dim(),
        queries,
        seed,
        entries,
        decreasing: inversions <= 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;
    use rand::Rng;

    fn grid_1d(n: usize) -> SampleSet {
        SampleSet::new((0..n).map(|i| vec![i as f64 / (n - 1) as f64]).collect()).unwrap()
    }

    #[test]
    fn ball_volumes() {
        assert!((ball_volume(1, 2.0) - 4.0).abs() < 1e-12);
        assert!((ball_volume(2, 1.0) - std::f64::consts::PI).abs() < 1e-12);
        assert!((ball_volume(3, 1.0) - 4.0 / 3.0 * std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn uniform_grid_interior_estimate_is_near_one() {
        let n = 10_000;
        let samples = grid_1d(n);
        let k = KRule::SqrtN.k_for(n);
        let est = knn_density(&samples, &[0.5], k).unwrap();
        assert!(
            (est.value - 1.0).abs() < 0.25,
            "estimate {} should be within 25% of 1",
            est.value
        );
    }

    #[test]
    fn coordinate_scaling_law() {
        // Doubling all coordinates divides the estimate by 2^D.
        let base = SampleSet::new(
            (0..50)
                .map(|i| vec![(i % 10) as f64 * 0.1, (i / 10) as f64 * 0.2])
                .collect(),
        )
        .unwrap();
        let doubled = SampleSet::new(
            base.points()
                .iter()
                .map(|p| p.iter().map(|x| 2.0 * x).collect())
                .collect(),
        )
        .unwrap();
        let q = [0.45, 0.55];
        let q2 = [0.9, 1.1];
        let a = knn_density(&base, &q, 7).unwrap();
        let b = knn_density(&doubled, &q2, 7).unwrap();
        assert!((a.value / b.value - 4.0).abs() < 1e-9);
    }

    #[test]
    fn translation_invariance() {
        let base = grid_1d(100);
        let shifted = SampleSet::new(
            base.points()
                .iter()
                .map(|p| vec![p[0] + 17.25])
                .collect(),
        )
        .unwrap();
        let a = knn_density(&base, &[0.37], 10).unwrap();
        let b = knn_density(&shifted, &[17.62], 10).unwrap();
        assert!((a.value - b.value).abs() < 1e-9);
    }

    #[test]
    fn density_is_monotone_in_distance() {
        // k = N - 1 compares a far query against the cluster center.
        let cluster = SampleSet::new((0..20).map(|i| vec![i as f64 * 0.01]).collect()).unwrap();
        let near = knn_density(&cluster, &[0.1], 19).unwrap();
        let far = knn_density(&cluster, &[5.0], 19).unwrap();
        assert!(far.value < near.value);
    }

    #[test]
    fn duplicates_are_flagged() {
        let samples = SampleSet::new(vec![vec![1.0], vec![1.0], vec![2.0]]).unwrap();
        let est = knn_density(&samples, &[1.0], 2).unwrap();
        assert!(est.degenerate);
        assert_eq!(est.value, f64::INFINITY);
    }

    #[test]
    fn positivity_for_distinct_points() {
        let samples = grid_1d(50);
        for i in 0..10 {
            let est = knn_density(&samples, &[0.05 + i as f64 * 0.09], 7).unwrap();
            assert!(est.value > 0.0);
        }
    }

    #[test]
    fn information_grows_away_from_the_data() {
        let samples = grid_1d(200);
        let center = estimated_information(&samples, &[0.5], 14, 0.0).unwrap();
        let outside = estimated_information(&samples, &[3.0], 14, 0.0).unwrap();
        assert!(outside > center);
        // The flat-order branch is the log of the reciprocal density.
        let d = knn_density(&samples, &[0.5], 14).unwrap();
        let info = estimated_information(&samples, &[0.5], 14, -1.0).unwrap();
        assert!((info + d.value.ln()).abs() < 1e-12);
    }

    #[test]
    fn smoothing_reduces_variance_with_larger_k() {
        // Repeated draws of uniform data: the spread of the estimate at a
        // fixed query shrinks as k grows.
        let spread = |k: usize| {
            let estimates: Vec<f64> = (0..24)
                .map(|rep| {
                    let mut rng = stream_rng(500 + rep, 0);
                    let samples = SampleSet::new(
                        (0..2000)
                            .map(|_| vec![rng.random::<f64>()])
                            .collect::<Vec<_>>(),
                    )
                    .unwrap();
                    knn_density(&samples, &[0.5], k).unwrap().value
                })
                .collect();
            let mean = estimates.iter().sum::<f64>() / estimates.len() as f64;
            estimates.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / estimates.len() as f64
        };
        assert!(spread(45) < spread(4));
    }

    #[test]
    fn consistency_report_is_deterministic_and_decreasing() {
        let report = estimator_consistency_report(
            SyntheticGenerator::UniformBox { dim: 1 },
            &[100, 1000, 10_000],
            KRule::SqrtN,
            7,
        )
        .unwrap();
        assert!(report.decreasing, "errors: {:?}", report.entries);
        let again = estimator_consistency_report(
            SyntheticGenerator::UniformBox { dim: 1 },
            &[100, 1000, 10_000],
            KRule::SqrtN,
            7,
        )
        .unwrap();
        assert_eq!(
            serde_json::to_string(&report).unwrap(),
            serde_json::to_string(&again).unwrap()
        );
    }

    #[test]
    fn gaussian_consistency() {
        let report = estimator_consistency_report(
            SyntheticGenerator::Gaussian { dim: 2 },
            &[100, 1000, 10_000],
            KRule::SqrtN,
            11,
        )
        .unwrap();
        assert!(report.decreasing, "errors: {:?}", report.entries);
    }

    #[test]
    fn mean_surprisal_on_a_uniform_box_approaches_log_area() {
        // Unit-area 2-D box: the true density is 1, so the empirical mean
        // of the estimated flat-order information tends to log(area) = 0.
        let mean_info = |n: usize| {
            let mut rng = stream_rng(77, 0);
            let samples = SampleSet::new(
                (0..n)
                    .map(|_| vec![rng.random::<f64>(), rng.random::<f64>()])
                    .collect::<Vec<_>>(),
            )
            .unwrap();
            let k = (n as f64).sqrt().ceil() as usize;
            let mut total = 0.0;
            let mut qrng = stream_rng(78, 0);
            for _ in 0..200 {
                let q = [
                    0.3 + 0.4 * qrng.random::<f64>(),
                    0.3 + 0.4 * qrng.random::<f64>(),
                ];
                total += estimated_information(&samples, &q, k, -1.0).unwrap();
            }
            (total / 200.0f64).abs()
        };
        assert!(mean_info(20_000) < mean_info(200));
        assert!(mean_info(20_000) < 0.1);
    }

    #[test]
    fn csv_parsing() {
        let samples = SampleSet::from_csv("0.0, 1.0\n0.5, 0.25\n\n1.0, 0.0\n", "inline").unwrap();
        assert_eq!(samples.len(), 3);
        assert_eq!(samples.dim(), 2);
        assert!(SampleSet::from_csv("1.0\nnope\n", "inline").is_err());
    }
}
