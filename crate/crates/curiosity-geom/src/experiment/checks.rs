//! The verification suite: every structural claim the library is built on,
//! phrased as a named check with a residual and a pinned tolerance.
//!
//! Checks are deterministic given the seed, independent of each other, and
//! safe to run in parallel. The same functions back the `verify` CLI mode
//! and the acceptance test target.

use rayon::prelude::*;
use serde::Serialize;

use crate::dpi::run_dpi_battery;
use crate::experiment::config::Tolerances;
use crate::geometry::{
    alpha_divergence, geodetic_alignment, kl_divergence, renyi_divergence, GeneratorF,
    GeodesicSpec,
};
use crate::mdp::{
    augmented_stationary, occupancy, occupancy_return, random_augmented_init, rollout_return,
    FiniteMdp, Policy,
};
use crate::numeric::{l1_distance, max_abs};
use crate::optima::{
    beta_sweep, closed_form_optimum, numerical_optimum, objective, projection_orthogonality,
    OptimaProblem,
};
use crate::policy::{
    geodesic_concavity_check, natural_step, occupancy_objective, pullback_metric,
    OptimizerState, SoftmaxPolicy,
};
use crate::rewards::{alpha_information, count_bonus_identity, shannon_entropy, RewardSpec};
use crate::rng::{sample_interior_simplex, stream_rng};
use crate::simplex::Distribution;

/// Outcome of one named check.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    /// What property the check verifies, in one sentence.
    pub claim: String,
    /// Worst observed value of the check's residual statistic.
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Supporting numbers (counts, per-case extremes).
    pub detail: String,
}

impl CheckResult {
    fn new(name: &str, claim: &str, residual: f64, tolerance: f64, detail: String) -> Self {
        Self {
            name: name.into(),
            claim: claim.into(),
            residual,
            tolerance,
            pass: residual <= tolerance,
            detail,
        }
    }
}

fn random_mdp_suite(seed: u64, count: usize) -> Vec<(FiniteMdp, Policy)> {
    (0..count)
        .map(|i| {
            let mut rng = stream_rng(seed, 7000 + i as u64);
            let d = 2 + (i % 5);
            let m = 1 + (i % 3);
            let n = (i % 9) as u32;
            let mdp = FiniteMdp::random(&mut rng, d, m, n);
            let policy = Policy::random(&mut rng, d, m);
            (mdp, policy)
        })
        .collect()
}

/// Divergence limit branches: the generic order formula approaches both
/// Kullback-Leibler orientations near the flat orders.
pub fn check_geometry_limit_kl(seed: u64) -> CheckResult {
    let mut worst = 0.0f64;
    for trial in 0..50 {
        let mut rng = stream_rng(seed, 100 + trial);
        let d = 3 + (trial as usize % 6);
        let p = sample_interior_simplex(&mut rng, d, 0.02);
        let q = sample_interior_simplex(&mut rng, d, 0.02);
        let kl_pq = kl_divergence(&p, &q).unwrap();
        let kl_qp = kl_divergence(&q, &p).unwrap();
        worst = worst
            .max((alpha_divergence(&p, &q, -1.0 + 1e-5).unwrap() - kl_pq).abs())
            .max((alpha_divergence(&p, &q, 1.0 - 1e-5).unwrap() - kl_qp).abs());
    }
    CheckResult::new(
        "geometry_limit_kl",
        "alpha-divergence approaches the KL orientations near orders -1 and +1",
        worst,
        1e-4,
        "50 random interior pairs, both limit sides".into(),
    )
}

/// Renyi divergences are monotone transforms of alpha-divergences.
pub fn check_geometry_monotone_relation(seed: u64) -> CheckResult {
    let mut worst = 0.0f64;
    for trial in 0..50 {
        let mut rng = stream_rng(seed, 200 + trial);
        let d = 3 + (trial as usize % 6);
        let p = sample_interior_simplex(&mut rng, d, 0.02);
        let q = sample_interior_simplex(&mut rng, d, 0.02);
        for lambda in [0.3, 0.5, 2.0] {
            let alpha = 2.0 * lambda - 1.0;
            let renyi = renyi_divergence(&p, &q, lambda).unwrap();
            let related = (1.0
                + lambda * (lambda - 1.0) * alpha_divergence(&q, &p, alpha).unwrap())
            .ln()
                / (lambda - 1.0);
            worst = worst.max((renyi - related).abs());
        }
    }
    CheckResult::new(
        "geometry_monotone_relation",
        "Renyi divergence equals the log transform of the matching alpha-divergence",
        worst,
        1e-10,
        "lambda in {0.3, 0.5, 2}, 50 random pairs".into(),
    )
}

/// Raw geodesics are affine in their power coordinates and hit both
/// endpoints exactly.
pub fn check_geodesic_affine(seed: u64) -> CheckResult {
    let mut worst = 0.0f64;
    for trial in 0..40 {
        let mut rng = stream_rng(seed, 300 + trial);
        let d = 3 + (trial as usize % 4);
        let p = sample_interior_simplex(&mut rng, d, 0.02);
        let q = sample_interior_simplex(&mut rng, d, 0.02);
        for order in [-2.0, -1.0, -0.5, 0.0, 0.5, 2.0] {
            let g = GeodesicSpec::new(p.clone(), q.clone(), order, false).unwrap();
            worst = worst
                .max(l1_distance(&g.eval(0.0).unwrap(), &p) / 1e-2)
                .max(l1_distance(&g.eval(1.0).unwrap(), &q) / 1e-2);
            let e = (1.0 - order) / 2.0;
            let grid = crate::numeric::unit_grid(9);
            let coords: Vec<Vec<f64>> = grid
                .iter()
                .map(|&t| g.eval(t).unwrap().iter().map(|w| w.powf(e)).collect())
                .collect();
            for i in 1..8 {
                for (s, mid) in coords[i].iter().enumerate() {
                    let dd = coords[i - 1][s] - 2.0 * mid + coords[i + 1][s];
                    worst = worst.max((dd / mid.abs().max(1e-12)).abs());
                }
            }
        }
    }
    CheckResult::new(
        "geometry_geodesic_affine",
        "power coordinates of raw geodesics are affine in the curve parameter",
        worst,
        1e-8,
        "9-point grids, orders in [-2, 2], endpoint residuals folded in at 1e-10 scale".into(),
    )
}

/// The built-in generator family aligns its divergence gradients with its
/// own geodesics; Renyi-power generators align at the shifted order.
pub fn check_alignment_family(seed: u64) -> CheckResult {
    let mut min_cos = 1.0f64;
    for (i, &d) in [3usize, 5, 8].iter().enumerate() {
        for trial in 0..100u64 {
            let mut rng = stream_rng(seed, 400 + i as u64 * 100 + trial);
            let p = sample_interior_simplex(&mut rng, d, 0.02);
            let q = sample_interior_simplex(&mut rng, d, 0.02);
            for alpha in [-1.0, -0.5, 0.0, 0.5, 1.0] {
                let cos = geodetic_alignment(&p, &q, &GeneratorF::alpha(alpha), alpha).unwrap();
                min_cos = min_cos.min(cos.abs());
            }
            for lambda in [0.3, 0.5, 2.0] {
                let f = GeneratorF::renyi_power(lambda).unwrap();
                let cos = geodetic_alignment(&p, &q, &f, 2.0 * lambda - 1.0).unwrap();
                min_cos = min_cos.min(cos.abs());
            }
        }
    }
    CheckResult::new(
        "geometry_alignment_family",
        "alpha and Renyi-power generators are geodetic at their own orders",
        1.0 - min_cos,
        1e-8,
        "100 pairs per dimension in {3, 5, 8}; residual is 1 - min |cos|".into(),
    )
}

/// A convex generator outside the family misaligns somewhere.
pub fn check_alignment_witness(seed: u64) -> CheckResult {
    let f = GeneratorF::custom(
        |x| (x - 1.0).exp() - x,
        |x| (x - 1.0).exp() - 1.0,
        1.0,
        "exp-affine",
    );
    let mut min_cos = 1.0f64;
    for trial in 0..100 {
        let mut rng = stream_rng(seed, 500 + trial);
        let p = sample_interior_simplex(&mut rng, 4, 0.02);
        let q = sample_interior_simplex(&mut rng, 4, 0.02);
        for alpha in [-1.0, 0.0, 0.5] {
            let cos = geodetic_alignment(&p, &q, &f, alpha).unwrap();
            min_cos = min_cos.min(cos.abs());
        }
    }
    CheckResult::new(
        "geometry_alignment_witness",
        "a generator outside the family shows clear misalignment on some pair",
        min_cos,
        1.0 - 1e-3,
        "minimum |cos| over 100 pairs and three orders must drop below the bar".into(),
    )
}

fn entropy_residuals(seed: u64) -> (f64, f64) {
    let mut worst_exact = 0.0f64;
    let mut worst_limit = 0.0f64;
    for trial in 0..50 {
        let mut rng = stream_rng(seed, 600 + trial);
        let d = 2 + (trial as usize % 7);
        let p = Distribution::new(sample_interior_simplex(&mut rng, d, 0.01)).unwrap();
        let entropy = shannon_entropy(&p);
        let exact: f64 = (0..d)
            .map(|s| p[s] * alpha_information(&p, s, -1.0).unwrap())
            .sum();
        let near: f64 = (0..d)
            .map(|s| p[s] * alpha_information(&p, s, -1.0 + 1e-5).unwrap())
            .sum();
        worst_exact = worst_exact.max((exact - entropy).abs());
        worst_limit = worst_limit.max((near - entropy).abs());
    }
    (worst_exact, worst_limit)
}

/// Average surprisal is Shannon entropy, exactly at the flat order.
pub fn check_entropy_identity(seed: u64) -> CheckResult {
    let (worst_exact, _) = entropy_residuals(seed);
    CheckResult::new(
        "entropy_identity",
        "occupancy-weighted flat-order information is Shannon entropy",
        worst_exact,
        1e-12,
        "50 random interior occupancies".into(),
    )
}

/// The entropy identity survives the order limit.
pub fn check_entropy_limit(seed: u64) -> CheckResult {
    let (_, worst_limit) = entropy_residuals(seed);
    CheckResult::new(
        "entropy_identity_limit",
        "average information just above the flat order stays near the entropy",
        worst_limit,
        1e-4,
        "order -1 + 1e-5 against the exact entropy".into(),
    )
}

/// The zero-order information equals the visit-count bonus formula.
pub fn check_count_identity(seed: u64) -> CheckResult {
    let mut worst = 0.0f64;
    for trial in 0..50 {
        let mut rng = stream_rng(seed, 700 + trial);
        let d = 2 + (trial as usize % 8);
        let w = sample_interior_simplex(&mut rng, d, 0.1);
        let mut counts: Vec<u64> = w.iter().map(|&x| 1 + (x * 120.0) as u64).collect();
        let mut total: u64 = counts.iter().sum();
        while total < 128 {
            counts[(total as usize) % d] += 1;
            total += 1;
        }
        let (via_info, via_counts) = count_bonus_identity(&counts, total).unwrap();
        for (a, b) in via_info.iter().zip(&via_counts) {
            worst = worst.max((a - b).abs());
        }
    }
    CheckResult::new(
        "count_identity",
        "zero-order information from the occupancy equals the count-bonus formula",
        worst,
        1e-12,
        "50 random count vectors".into(),
    )
}

fn occupancy_residuals(seed: u64) -> (f64, f64, f64) {
    let suite = random_mdp_suite(seed, 20);
    let mut worst_marginal = 0.0f64;
    let mut worst_invariance = 0.0f64;
    let mut worst_uniqueness = 0.0f64;
    for (i, (mdp, policy)) in suite.iter().enumerate() {
        let exact = occupancy(mdp, policy).unwrap();
        let st = augmented_stationary(mdp, policy, None).unwrap();
        worst_marginal =
            worst_marginal.max(l1_distance(st.state_marginal.weights(), exact.dist.weights()));
        worst_invariance = worst_invariance.max(st.invariance_residual);
        let mut rng = stream_rng(seed, 800 + i as u64);
        for _ in 0..10 {
            let init = random_augmented_init(&mut rng, mdp);
            let other = augmented_stationary(mdp, policy, Some(init)).unwrap();
            worst_uniqueness =
                worst_uniqueness.max(l1_distance(other.joint.weights(), st.joint.weights()));
        }
    }
    (worst_marginal, worst_invariance, worst_uniqueness)
}

/// The augmented counter chain reproduces the kernel-power occupancy.
pub fn check_occupancy_marginal(seed: u64) -> CheckResult {
    let (worst_marginal, _, _) = occupancy_residuals(seed);
    CheckResult::new(
        "occupancy_marginal",
        "augmented-chain stationary marginal equals the kernel-power occupancy",
        worst_marginal,
        1e-10,
        "20 random MDPs (d <= 6, m <= 3, n <= 8)".into(),
    )
}

/// The stationary distribution is invariant under one exact kernel step.
pub fn check_occupancy_invariance(seed: u64) -> CheckResult {
    let (_, worst_invariance, _) = occupancy_residuals(seed);
    CheckResult::new(
        "occupancy_invariance",
        "the augmented stationary point is fixed by the chain kernel",
        worst_invariance,
        1e-12,
        "L1 residual of one exact kernel application".into(),
    )
}

/// Power iteration lands on the same point from random starts.
pub fn check_occupancy_uniqueness(seed: u64) -> CheckResult {
    let (_, _, worst_uniqueness) = occupancy_residuals(seed);
    CheckResult::new(
        "occupancy_uniqueness",
        "power iteration from random starts converges to one stationary point",
        worst_uniqueness,
        1e-8,
        "10 random initializations per MDP".into(),
    )
}

/// Occupancy returns match Monte Carlo rollouts within three standard errors.
pub fn check_return_consistency(seed: u64, episodes: u64) -> CheckResult {
    let suite = random_mdp_suite(seed, 20);
    let results: Vec<f64> = suite
        .par_iter()
        .enumerate()
        .map(|(i, (mdp, policy))| {
            let exact = occupancy_return(&occupancy(mdp, policy).unwrap(), mdp.reward()).unwrap();
            let (mean, stderr) = rollout_return(mdp, policy, episodes, seed ^ i as u64).unwrap();
            (exact - mean).abs() / (3.0 * stderr + 1e-12)
        })
        .collect();
    let worst = results.iter().cloned().fold(0.0f64, f64::max);
    CheckResult::new(
        "return_consistency",
        "the occupancy form of the episode return matches Monte Carlo rollouts",
        worst,
        1.0,
        format!(
            "20 random MDPs at {episodes} episodes; residual is |diff| / (3 stderr); \
             a 3-sigma bound over 20 trials exceeds 1 on roughly 5% of seeds by chance"
        ),
    )
}

/// The aggregation battery: concave information returns satisfy the
/// data-processing inequality with equality exactly at sufficiency, and a
/// convex generator breaks it.
pub fn check_dpi_battery(seed: u64, trials: usize) -> CheckResult {
    let report = run_dpi_battery(trials, seed);
    let mut residual = (-report.min_gap).max(0.0);
    if !report.equality_consistent || report.counterexample.is_none() {
        residual = f64::INFINITY;
    }
    CheckResult::new(
        "dpi_battery",
        "aggregated information returns dominate fine-grained ones exactly up to sufficiency",
        residual,
        1e-12,
        format!(
            "{} trials; min gap {:.3e}; equality consistent: {}; convex witness gap: {}",
            report.trials,
            report.min_gap,
            report.equality_consistent,
            report
                .counterexample
                .map(|c| format!("{:.3e}", c.gap))
                .unwrap_or_else(|| "none".into()),
        ),
    )
}

fn oracle_grid(seed: u64) -> Vec<(Vec<f64>, f64, f64)> {
    let mut cells = Vec::new();
    for reward_idx in 0..10u64 {
        let mut rng = stream_rng(seed, 900 + reward_idx);
        let d = 3 + (reward_idx as usize % 6);
        let reward: Vec<f64> = (0..d)
            .map(|_| {
                use rand::Rng;
                rng.random::<f64>() * 2.0 - 0.5
            })
            .collect();
        for alpha in [-1.0, -0.5, 0.0, 0.5] {
            for beta in [0.1, 1.0, 10.0] {
                cells.push((reward.clone(), alpha, beta));
            }
        }
    }
    cells
}

/// Closed-form optima agree with the mirror-ascent oracle across the grid.
pub fn check_optima_equivalence(seed: u64, tolerance: f64) -> CheckResult {
    let cells = oracle_grid(seed);
    let results: Vec<f64> = cells
        .par_iter()
        .map(|(reward, alpha, beta)| {
            let prob = OptimaProblem::new(reward.clone(), *alpha, *beta, 0).unwrap();
            let closed = closed_form_optimum(&prob).unwrap();
            let numerical = numerical_optimum(&prob, 1e-10).unwrap();
            closed.l1_distance(&numerical)
        })
        .collect();
    let worst = results.iter().cloned().fold(0.0f64, f64::max);
    CheckResult::new(
        "optima_equivalence",
        "multiplier closed form matches brute-force ascent on the order/weight grid",
        worst,
        tolerance,
        format!("{} grid cells (10 rewards x 4 orders x 3 weights)", cells.len()),
    )
}

/// The flat-order closed form is the analytic Gibbs point.
pub fn check_optima_gibbs(seed: u64) -> CheckResult {
    let mut worst = 0.0f64;
    for trial in 0..20 {
        let mut rng = stream_rng(seed, 1000 + trial);
        let d = 3 + (trial as usize % 5);
        let reward: Vec<f64> = (0..d)
            .map(|_| {
                use rand::Rng;
                rng.random::<f64>() * 3.0 - 1.0
            })
            .collect();
        for beta in [0.1, 1.0, 10.0] {
            let prob = OptimaProblem::new(reward.clone(), -1.0, beta, 0).unwrap();
            let closed = closed_form_optimum(&prob).unwrap();
            let gibbs = Distribution::normalized(
                reward.iter().map(|r| (r / beta).exp()).collect::<Vec<_>>(),
            )
            .unwrap();
            worst = worst.max(closed.l1_distance(&gibbs));
        }
    }
    CheckResult::new(
        "optima_gibbs",
        "the flat-order optimum is the exponential-weights point",
        worst,
        1e-8,
        "20 random rewards x 3 weights".into(),
    )
}

/// Projection orthogonality at every grid optimum.
pub fn check_projection_orthogonality(seed: u64) -> CheckResult {
    let cells = oracle_grid(seed);
    let results: Vec<f64> = cells
        .par_iter()
        .map(|(reward, alpha, beta)| {
            let prob = OptimaProblem::new(reward.clone(), *alpha, *beta, 0).unwrap();
            projection_orthogonality(&prob).unwrap()
        })
        .collect();
    let worst = results.iter().cloned().fold(0.0f64, f64::max);
    CheckResult::new(
        "projection_orthogonality",
        "the projection geodesic meets the isoreturn tangent space orthogonally",
        worst,
        1e-6,
        format!("{} grid optima", cells.len()),
    )
}

/// The beta-sweep stays on its order-(alpha+2) geodesic.
pub fn check_beta_geodesic(seed: u64, tolerance: f64) -> CheckResult {
    let betas = [0.1, 0.3, 1.0, 3.0, 10.0];
    let mut worst = 0.0f64;
    let mut rng = stream_rng(seed, 1100);
    for alpha in [-1.0, -0.5, 0.0, 0.5] {
        for d in [3usize, 6] {
            let reward: Vec<f64> = sample_interior_simplex(&mut rng, d, 0.0)
                .iter()
                .map(|w| 3.0 * w)
                .collect();
            let base = OptimaProblem::new(reward, alpha, 1.0, 0).unwrap();
            let report = beta_sweep(&base, &betas).unwrap();
            worst = worst.max(report.max_residual);
        }
    }
    CheckResult::new(
        "beta_geodesic",
        "the trade-off path of optima lies on one geodesic toward uniform",
        worst,
        tolerance,
        "orders {-1, -0.5, 0, 0.5}, dimensions {3, 6}, five weights each".into(),
    )
}

/// Concavity of the objective along flat-order geodesics at any weight.
pub fn check_concavity_flat(seed: u64) -> CheckResult {
    let mut worst = f64::NEG_INFINITY;
    let mut rng = stream_rng(seed, 1200);
    for d in [4usize, 5] {
        let reward: Vec<f64> = sample_interior_simplex(&mut rng, d, 0.0)
            .iter()
            .map(|w| 2.0 * w - 0.4)
            .collect();
        for beta in [0.0, 0.5, 10.0, 1e4] {
            worst = worst.max(
                geodesic_concavity_check(&reward, -1.0, beta, 50, 17, seed ^ 0xf1a7).unwrap(),
            );
        }
    }
    CheckResult::new(
        "concavity_flat",
        "the objective is concave along mixture geodesics at every weight",
        worst.max(0.0),
        1e-9,
        "second differences over 50 geodesics x 17 grid points per weight".into(),
    )
}

/// Concavity at interior orders once the information term dominates.
pub fn check_concavity_dominated(seed: u64) -> CheckResult {
    let mut worst = f64::NEG_INFINITY;
    let mut rng = stream_rng(seed, 1300);
    for d in [4usize, 5] {
        let reward: Vec<f64> = sample_interior_simplex(&mut rng, d, 0.0)
            .iter()
            .map(|w| 2.0 * w - 0.4)
            .collect();
        let beta = 1e3 * max_abs(&reward);
        for alpha in [-0.5, 0.0, 0.5] {
            worst = worst.max(
                geodesic_concavity_check(&reward, alpha, beta, 50, 17, seed ^ 0xd011).unwrap(),
            );
        }
    }
    CheckResult::new(
        "concavity_dominated",
        "interior orders are concave along their geodesics under dominant information weight",
        worst.max(0.0),
        1e-9,
        "orders {-0.5, 0, 0.5} at weight 1e3 max|r|".into(),
    )
}

/// The analytic occupancy Jacobian agrees with central finite differences.
pub fn check_jacobian_fd(seed: u64, tolerance: f64) -> CheckResult {
    let results: Vec<f64> = (0..20u64)
        .into_par_iter()
        .map(|trial| {
            let mut rng = stream_rng(seed, 1400 + trial);
            let d = 3 + (trial as usize % 3);
            let m = 2 + (trial as usize % 2);
            let n = 1 + (trial as u32 % 6);
            let mdp = FiniteMdp::random(&mut rng, d, m, n);
            let logits: Vec<Vec<f64>> = (0..d)
                .map(|_| {
                    (0..m)
                        .map(|_| {
                            use rand::Rng;
                            rng.random::<f64>() * 2.0 - 1.0
                        })
                        .collect()
                })
                .collect();
            let policy = SoftmaxPolicy::new(logits).unwrap();
            let analytic = crate::policy::occupancy_jacobian(&mdp, &policy).unwrap();
            let fd = crate::policy::occupancy_jacobian_fd(&mdp, &policy, 1e-6).unwrap();
            (&analytic - &fd).amax() / analytic.amax().max(1e-8)
        })
        .collect();
    let worst = results.iter().cloned().fold(0.0f64, f64::max);
    CheckResult::new(
        "jacobian_fd",
        "the analytic occupancy Jacobian matches central finite differences",
        worst,
        tolerance,
        "20 random MDPs, step 1e-6, relative to the largest entry".into(),
    )
}

/// Natural occupancy ascent on the teleport benchmark reaches the
/// full-simplex oracle objective.
pub fn check_natural_ascent(_seed: u64) -> CheckResult {
    let (mdp, spec, prob) = teleport_benchmark();
    let oracle_point = closed_form_optimum(&prob).unwrap();
    let oracle = objective(&oracle_point, &prob).unwrap();

    let mut state = OptimizerState::start(SoftmaxPolicy::zeros(6, 6));
    let mut iterations_used = 2000;
    for i in 0..2000 {
        let metric = pullback_metric(&mdp, &state.policy, spec.generator()).unwrap();
        let damping = crate::policy::default_damping(&metric);
        state = natural_step(&mdp, &state, &spec, 1.0, damping).unwrap();
        if oracle - state.objective <= 1e-4 || state.converged {
            iterations_used = i + 1;
            break;
        }
    }
    let gap = oracle - occupancy_objective(&mdp, &state.policy, &spec).unwrap();
    CheckResult::new(
        "natural_ascent",
        "natural occupancy ascent reaches the oracle objective on the teleport benchmark",
        gap,
        1e-4,
        format!("teleport d=6 n=8, {iterations_used} iterations (cap 2000)"),
    )
}

/// Shared teleport benchmark: d = 6, n = 8, fixed reward, flat order,
/// unit weight. The simplex oracle is achievable here, so the full-simplex
/// optimum objective is the right target.
pub fn teleport_benchmark() -> (FiniteMdp, RewardSpec, OptimaProblem) {
    let reward = vec![1.0, 0.7, 0.2, 0.0, 0.5, 0.9];
    let mdp = FiniteMdp::teleport(6, 8, reward.clone()).unwrap();
    let spec = RewardSpec::new(
        reward.clone(),
        1.0,
        GeneratorF::alpha_information(-1.0).unwrap(),
        false,
    )
    .unwrap();
    let prob = OptimaProblem::new(reward, -1.0, 1.0, 8).unwrap();
    (mdp, spec, prob)
}

/// kNN density estimates converge on synthetic generators.
pub fn check_knn_consistency(seed: u64) -> CheckResult {
    let uniform = crate::density::estimator_consistency_report(
        crate::density::SyntheticGenerator::UniformBox { dim: 1 },
        &[100, 1000, 10_000],
        crate::density::KRule::SqrtN,
        seed,
    )
    .unwrap();
    let gaussian = crate::density::estimator_consistency_report(
        crate::density::SyntheticGenerator::Gaussian { dim: 2 },
        &[100, 1000, 10_000],
        crate::density::KRule::SqrtN,
        seed ^ 1,
    )
    .unwrap();

    // Interior accuracy at the largest sample count: within 25% of truth.
    let n = 10_000;
    let mut rng = stream_rng(seed, 1500);
    let samples = crate::density::SampleSet::new(
        (0..n)
            .map(|_| {
                use rand::Rng;
                vec![rng.random::<f64>()]
            })
            .collect(),
    )
    .unwrap();
    let k = crate::density::KRule::SqrtN.k_for(n);
    let mut worst_interior = 0.0f64;
    for i in 0..16 {
        let q = [0.3 + 0.4 * (i as f64 / 15.0)];
        let est = crate::density::knn_density(&samples, &q, k).unwrap();
        worst_interior = worst_interior.max((est.value - 1.0).abs());
    }
    let residual = if uniform.decreasing && gaussian.decreasing {
        worst_interior
    } else {
        f64::INFINITY
    };
    CheckResult::new(
        "knn_consistency",
        "kNN log-density errors shrink with sample count and interior estimates are accurate",
        residual,
        0.25,
        format!(
            "uniform errors {:?}; gaussian errors {:?}",
            uniform
                .entries
                .iter()
                .map(|e| format!("{:.3}", e.mean_abs_log_error))
                .collect::<Vec<_>>(),
            gaussian
                .entries
                .iter()
                .map(|e| format!("{:.3}", e.mean_abs_log_error))
                .collect::<Vec<_>>(),
        ),
    )
}

/// Run one check, recording a panic as a failed result so the suite can
/// continue past a raising check.
fn guarded(name: &str, check: impl FnOnce() -> CheckResult) -> CheckResult {
    match std::panic::catch_unwind(std::panic::AssertUnwindSafe(check)) {
        Ok(result) => result,
        Err(panic) => {
            let message = panic
                .downcast_ref::<String>()
                .map(String::as_str)
                .or_else(|| panic.downcast_ref::<&str>().copied())
                .unwrap_or("check raised");
            CheckResult {
                name: name.into(),
                claim: "check raised instead of reporting a residual".into(),
                residual: f64::INFINITY,
                tolerance: 0.0,
                pass: false,
                detail: message.into(),
            }
        }
    }
}

/// Run every check, sorted by name. A raising check is recorded as failed
/// and the rest of the suite still runs.
pub fn verify_suite(
    seed: u64,
    tolerances: &Tolerances,
    episodes: u64,
    trials: usize,
) -> Vec<CheckResult> {
    let optimum_tol = tolerances.optimum;
    let geodesic_tol = tolerances.geodesic;
    let gradient_tol = tolerances.gradient;
    type BoxedCheck = Box<dyn FnOnce() -> CheckResult>;
    let suite: Vec<(&str, BoxedCheck)> = vec![
        ("geometry_limit_kl", Box::new(move || check_geometry_limit_kl(seed))),
        (
            "geometry_monotone_relation",
            Box::new(move || check_geometry_monotone_relation(seed)),
        ),
        ("geometry_geodesic_affine", Box::new(move || check_geodesic_affine(seed))),
        ("geometry_alignment_family", Box::new(move || check_alignment_family(seed))),
        ("geometry_alignment_witness", Box::new(move || check_alignment_witness(seed))),
        ("entropy_identity", Box::new(move || check_entropy_identity(seed))),
        ("entropy_identity_limit", Box::new(move || check_entropy_limit(seed))),
        ("count_identity", Box::new(move || check_count_identity(seed))),
        ("occupancy_marginal", Box::new(move || check_occupancy_marginal(seed))),
        (
            "occupancy_invariance",
            Box::new(move || check_occupancy_invariance(seed)),
        ),
        (
            "occupancy_uniqueness",
            Box::new(move || check_occupancy_uniqueness(seed)),
        ),
        ("return_consistency", Box::new(move || check_return_consistency(seed, episodes))),
        ("dpi_battery", Box::new(move || check_dpi_battery(seed, trials))),
        (
            "optima_equivalence",
            Box::new(move || check_optima_equivalence(seed, optimum_tol)),
        ),
        ("optima_gibbs", Box::new(move || check_optima_gibbs(seed))),
        (
            "projection_orthogonality",
            Box::new(move || check_projection_orthogonality(seed)),
        ),
        ("beta_geodesic", Box::new(move || check_beta_geodesic(seed, geodesic_tol))),
        ("concavity_flat", Box::new(move || check_concavity_flat(seed))),
        ("concavity_dominated", Box::new(move || check_concavity_dominated(seed))),
        ("jacobian_fd", Box::new(move || check_jacobian_fd(seed, gradient_tol))),
        ("natural_ascent", Box::new(move || check_natural_ascent(seed))),
        ("knn_consistency", Box::new(move || check_knn_consistency(seed))),
    ];
    let mut results: Vec<CheckResult> = suite
        .into_iter()
        .map(|(name, check)| guarded(name, check))
        .collect();
    results.sort_by(|a, b| a.name.cmp(&b.name));
    results
}
