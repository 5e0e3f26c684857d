//! Quadrature on (0, ∞) and its subintervals, logarithmic grids, and
//! supremum estimation with asymptotic-slope diagnostics.
//!
//! All integrals are computed after the substitution `x = e^t`, which turns
//! endpoint power singularities into exponential decay and maps (0, ∞) onto
//! the whole line. Semi-infinite ends are handled by truncation doubling
//! with tail monitoring; a partial integral that keeps growing by a factor
//! ≥ 1.5 under four successive doublings is declared divergent.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum NumericsError {
    #[error("quadrature did not reach the requested tolerance (value ≈ {value:e}, error ≈ {error:e})")]
    NonConvergent { value: f64, error: f64 },
    #[error("integral diverges under truncation doubling")]
    DivergentIntegral,
}

/// A subinterval of (0, ∞). `hi` may be `f64::INFINITY`; `lo` may be 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    /// Panics if `lo < 0`, `lo >= hi`, or either bound is NaN.
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo >= 0.0 && lo < hi, "invalid interval ({lo}, {hi})");
        Interval { lo, hi }
    }

    pub fn from_zero(hi: f64) -> Self {
        Self::new(0.0, hi)
    }

    pub fn to_infinity(lo: f64) -> Self {
        Self::new(lo, f64::INFINITY)
    }

    pub fn full() -> Self {
        Self::new(0.0, f64::INFINITY)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn contains(&self, x: f64) -> bool {
        x > self.lo && x < self.hi
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        self.lo >= other.lo && self.hi <= other.hi
    }
}

#[derive(Clone, Copy, Debug)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub converged: bool,
}

// Gauss-Kronrod 7-15 nodes and weights on [-1, 1].
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_3,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_94,
    0.417_959_183_673_469_4,
];

/// One Gauss-Kronrod panel: returns (k15 value, |k15 - g7| error estimate).
fn gk15<F: Fn(f64) -> f64>(g: &F, a: f64, b: f64) -> (f64, f64) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let f_mid = g(mid);
    let mut kronrod = WGK[7] * f_mid;
    let mut gauss = WG[3] * f_mid;
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = g(mid - dx) + g(mid + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, (kronrod - gauss).abs() * half.abs())
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

/// Globally adaptive bisection over a finite interval in t-space.
fn adapt<F: Fn(f64) -> f64>(
    g: &F,
    a: f64,
    b: f64,
    rel_tol: f64,
    max_panels: usize,
) -> Result<(f64, f64), NumericsError> {
    let (v, e) = gk15(g, a, b);
    let mut panels = vec![Panel {
        a,
        b,
        value: v,
        error: e,
    }];
    loop {
        let total: f64 = panels.iter().map(|p| p.value).sum();
        let err: f64 = panels.iter().map(|p| p.error).sum();
        if !total.is_finite() {
            return Err(NumericsError::DivergentIntegral);
        }
        if err <= rel_tol * total.abs().max(f64::MIN_POSITIVE) || err < 1e-300 {
            return Ok((total, err));
        }
        if panels.len() >= max_panels {
            return Err(NumericsError::NonConvergent {
                value: total,
                error: err,
            });
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .unwrap();
        let Panel { a, b, .. } = panels.swap_remove(worst);
        let m = 0.5 * (a + b);
        for (lo, hi) in [(a, m), (m, b)] {
            let (v, e) = gk15(g, lo, hi);
            panels.push(Panel {
                a: lo,
                b: hi,
                value: v,
                error: e,
            });
        }
    }
}

// t beyond ±LOG_CAP corresponds to x outside f64's useful dynamic range.
const LOG_CAP: f64 = 700.0;
const INITIAL_HALF_WIDTH: f64 = 16.0;
const MAX_PANELS: usize = 4000;

/// Integrate `f` over `iv` with target relative tolerance `rel_tol`.
///
/// `f` may blow up like x^a (a > -1) at a zero left endpoint and must decay
/// faster than 1/x at an infinite right endpoint.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    iv: Interval,
    rel_tol: f64,
) -> Result<QuadResult, NumericsError> {
    let g = |t: f64| {
        let x = t.exp();
        let y = f(x) * x;
        if y.is_finite() {
            y
        } else {
            0.0
        }
    };
    let open_left = iv.lo == 0.0;
    let open_right = iv.hi.is_infinite();
    let t_lo = if open_left { f64::NEG_INFINITY } else { iv.lo.ln() };
    let t_hi = if open_right { f64::INFINITY } else { iv.hi.ln() };

    let mut a = if open_left {
        (-INITIAL_HALF_WIDTH).min(if t_hi.is_finite() { t_hi - 1.0 } else { 0.0 })
    } else {
        t_lo
    };
    let mut b = if open_right {
        INITIAL_HALF_WIDTH.max(if t_lo.is_finite() { t_lo + 1.0 } else { 0.0 })
    } else {
        t_hi
    };

    let (mut total, mut err) = adapt(&g, a, b, rel_tol, MAX_PANELS)?;

    let mut ext = INITIAL_HALF_WIDTH;
    let mut growth_streak = 0u32;
    let mut small_streak = 0u32;
    let mut prev_total = total;
    let mut left_done = !open_left;
    let mut right_done = !open_right;
    let mut tail_bound = 0.0;

    while !(left_done && right_done) {
        let mut inc = 0.0;
        if !left_done {
            let new_a = (a - ext).max(-LOG_CAP);
            let (v, e) = adapt(&g, new_a, a, rel_tol, MAX_PANELS)?;
            inc += v;
            err += e;
            a = new_a;
            if a <= -LOG_CAP {
                left_done = true;
            }
        }
        if !right_done {
            let new_b = (b + ext).min(LOG_CAP);
            let (v, e) = adapt(&g, b, new_b, rel_tol, MAX_PANELS)?;
            inc += v;
            err += e;
            b = new_b;
            if b >= LOG_CAP {
                right_done = true;
            }
        }
        total += inc;
        // Magnitudes near f64 overflow mean the integrand overflowed inside
        // a window (where the log substitution clamps it to zero), so the
        // computed value is a meaningless truncation of a divergent tail.
        if !total.is_finite() || total.abs() >= 1e250 {
            return Err(NumericsError::DivergentIntegral);
        }
        if prev_total.abs() > 0.0 && total.abs() >= 1.5 * prev_total.abs() {
            growth_streak += 1;
            if growth_streak >= 4 {
                return Err(NumericsError::DivergentIntegral);
            }
        } else {
            growth_streak = 0;
        }
        tail_bound = inc.abs();
        // A zero window total must not end the sweep: the support may lie
        // entirely beyond the windows visited so far. Demand two
        // consecutive negligible extensions of a nonzero total.
        if total.abs() > 0.0 && tail_bound <= rel_tol * total.abs() {
            small_streak += 1;
            if small_streak >= 2 {
                break;
            }
        } else {
            small_streak = 0;
        }
        prev_total = total;
        ext *= 2.0;
    }

    let error_estimate = err + tail_bound;
    let converged = error_estimate <= 10.0 * rel_tol * total.abs().max(f64::MIN_POSITIVE)
        || error_estimate < 1e-300;
    if !converged {
        return Err(NumericsError::NonConvergent {
            value: total,
            error: error_estimate,
        });
    }
    Ok(QuadResult {
        value: total,
        error_estimate,
        converged,
    })
}

/// Geometrically spaced grid with `per_decade` points per factor of 10,
/// endpoints included.
pub fn log_grid(lo: f64, hi: f64, per_decade: u32) -> Vec<f64> {
    assert!(lo > 0.0 && lo < hi && per_decade > 0);
    let decades = (hi / lo).log10();
    let n = (decades * per_decade as f64).round().max(1.0) as usize;
    let mut grid = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let x = if i == n {
            hi
        } else {
            lo * 10f64.powf(i as f64 / per_decade as f64)
        };
        grid.push(x);
    }
    grid
}

/// Result of scanning a functional over a positive grid.
#[derive(Clone, Debug)]
pub struct SupScan {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub sup_estimate: f64,
    pub argmax: f64,
    pub left_slope: f64,
    pub right_slope: f64,
}

/// Least-squares slope of log y against log x; nonpositive or nonfinite
/// samples are dropped.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0 && y.is_finite())
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return 0.0;
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-300 {
        0.0
    } else {
        (n * sxy - sx * sy) / denom
    }
}

/// Evaluate `f_sup` on `grid` and report the max, its location, and the
/// log-log slopes over the outermost decade on each side.
pub fn sup_scan<F: Fn(f64) -> f64>(f_sup: F, grid: &[f64]) -> SupScan {
    assert!(!grid.is_empty());
    let values: Vec<f64> = grid.iter().map(|&r| f_sup(r)).collect();
    let (mut sup, mut argmax) = (f64::NEG_INFINITY, grid[0]);
    for (&r, &v) in grid.iter().zip(values.iter()) {
        if v > sup {
            sup = v;
            argmax = r;
        }
    }
    let lo = grid[0];
    let hi = grid[grid.len() - 1];
    let left: Vec<(f64, f64)> = grid
        .iter()
        .zip(values.iter())
        .filter(|(&r, _)| r <= lo * 10.0 * (1.0 + 1e-12))
        .map(|(&r, &v)| (r, v))
        .collect();
    let right: Vec<(f64, f64)> = grid
        .iter()
        .zip(values.iter())
        .filter(|(&r, _)| r >= hi / 10.0 * (1.0 - 1e-12))
        .map(|(&r, &v)| (r, v))
        .collect();
    SupScan {
        left_slope: loglog_slope(&left),
        right_slope: loglog_slope(&right),
        grid: grid.to_vec(),
        values,
        sup_estimate: sup,
        argmax,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn integrate_linear_on_unit_interval() {
        let q = integrate(|x| x, Interval::new(0.0, 1.0), 1e-10).unwrap();
        assert_relative_eq!(q.value, 0.5, max_relative = 1e-10);
        assert!(q.converged);
    }

    #[test]
    fn integrate_inverse_square_tail() {
        let q = integrate(|x| x.powi(-2), Interval::to_infinity(1.0), 1e-10).unwrap();
        assert_relative_eq!(q.value, 1.0, max_relative = 1e-9);
    }

    #[test]
    fn integrate_harmonic_tail_diverges() {
        let err = integrate(|x| 1.0 / x, Interval::to_infinity(1.0), 1e-10).unwrap_err();
        assert!(matches!(err, NumericsError::DivergentIntegral));
    }

    #[test]
    fn integrate_power_singularity_at_origin() {
        // ∫_0^1 x^{-1/2} dx = 2
        let q = integrate(|x| x.powf(-0.5), Interval::from_zero(1.0), 1e-10).unwrap();
        assert_relative_eq!(q.value, 2.0, max_relative = 1e-9);
    }

    #[test]
    fn integrate_origin_divergence() {
        let err = integrate(|x| 1.0 / x, Interval::from_zero(1.0), 1e-10).unwrap_err();
        assert!(matches!(err, NumericsError::DivergentIntegral));
    }

    #[test]
    fn integrate_gaussian_like_full_line() {
        // ∫_0^∞ e^{-x} dx = 1
        let q = integrate(|x| (-x).exp(), Interval::full(), 1e-10).unwrap();
        assert_relative_eq!(q.value, 1.0, max_relative = 1e-9);
    }

    #[test]
    fn log_grid_examples() {
        assert_eq!(log_grid(1.0, 100.0, 1), vec![1.0, 10.0, 100.0]);
        let g = log_grid(1.0, 10.0, 2);
        assert_eq!(g.len(), 3);
        assert_relative_eq!(g[1], 10f64.sqrt(), max_relative = 1e-14);
        let g = log_grid(0.1, 10.0, 1);
        assert_eq!(g.len(), 3);
        assert_relative_eq!(g[1], 1.0, max_relative = 1e-12);
        assert_eq!(g[2], 10.0);
    }

    #[test]
    fn sup_scan_constant() {
        let grid = log_grid(0.01, 100.0, 8);
        let s = sup_scan(|_| 1.0, &grid);
        assert_eq!(s.sup_estimate, 1.0);
        assert!(s.left_slope.abs() < 1e-12 && s.right_slope.abs() < 1e-12);
    }

    #[test]
    fn sup_scan_power() {
        let s = sup_scan(|r| r.powf(0.5), &[1.0, 10.0, 100.0]);
        assert_relative_eq!(s.sup_estimate, 10.0, max_relative = 1e-12);
        assert_eq!(s.argmax, 100.0);
        assert_relative_eq!(s.right_slope, 0.5, max_relative = 1e-10);
    }

    #[test]
    fn sup_scan_propagates_infinity() {
        let s = sup_scan(
            |r| if r == 1.0 { f64::INFINITY } else { 1.0 },
            &[0.5, 1.0, 2.0],
        );
        assert!(s.sup_estimate.is_infinite());
        assert_eq!(s.argmax, 1.0);
    }
}
