//! Small numeric helpers shared across modules: root bracketing and
//! bisection, golden-section search, and a few vector utilities.

/// L1 distance between two equal-length slices.
pub fn l1_distance(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

/// Maximum absolute entry.
pub fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Sample mean and standard error (ddof = 1). Requires at least two samples.
pub fn mean_and_stderr(samples: &[f64]) -> (f64, f64) {
    let n = samples.len();
    assert!(n >= 2, "standard error needs at least two samples");
    let mean = samples.iter().sum::<f64>() / n as f64;
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n as f64 - 1.0);
    (mean, (var / n as f64).sqrt())
}

/// Bisection on a monotone (or at least sign-changing) function.
///
/// `f(lo)` and `f(hi)` must have opposite signs. Runs until the bracket is
/// tighter than `tol` in relative terms or 200 iterations elapsed.
pub fn bisect(mut lo: f64, mut hi: f64, tol: f64, f: impl Fn(f64) -> f64) -> f64 {
    let mut flo = f(lo);
    debug_assert!(flo * f(hi) <= 0.0, "bisection bracket does not change sign");
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (hi - lo).abs() <= tol * (1.0 + mid.abs()) {
            return mid;
        }
        let fmid = f(mid);
        if fmid == 0.0 {
            return mid;
        }
        if (fmid > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Golden-section minimization of a unimodal function on `[lo, hi]`.
pub fn golden_section(mut lo: f64, mut hi: f64, tol: f64, f: impl Fn(f64) -> f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while (hi - lo).abs() > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    0.5 * (lo + hi)
}

/// Minimize a scalar function on `[0, 1]` by a coarse scan followed by
/// golden-section refinement around the best cell. Robust for curves whose
/// distance-to-target profile is only piecewise unimodal.
pub fn grid_then_golden(grid: usize, tol: f64, f: impl Fn(f64) -> f64) -> (f64, f64) {
    debug_assert!(grid >= 3);
    let mut best_i = 0;
    let mut best_v = f64::INFINITY;
    for i in 0..=grid {
        let t = i as f64 / grid as f64;
        let v = f(t);
        if v < best_v {
            best_v = v;
            best_i = i;
        }
    }
    let lo = if best_i == 0 { 0.0 } else { (best_i - 1) as f64 / grid as f64 };
    let hi = if best_i == grid { 1.0 } else { (best_i + 1) as f64 / grid as f64 };
    let t = golden_section(lo, hi, tol, &f);
    let v = f(t).min(best_v);
    (t, v)
}

/// Evenly spaced points on `[0, 1]` inclusive.
pub fn unit_grid(points: usize) -> Vec<f64> {
    assert!(points >= 2);
    (0..points)
        .map(|i| i as f64 / (points - 1) as f64)
        .collect()
}

/// Largest second difference `f[i-1] - 2 f[i] + f[i+1]` over the interior.
/// Positive values witness local convexity of the sampled function.
pub fn max_second_difference(values: &[f64]) -> f64 {
    let mut worst = f64::NEG_INFINITY;
    for i in 1..values.len().saturating_sub(1) {
        worst = worst.max(values[i - 1] - 2.0 * values[i] + values[i + 1]);
    }
    worst
}

/// Round-trip-safe float formatting (17 significant digits) for CSV output.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}
