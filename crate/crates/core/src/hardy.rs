//! Hardy-type supremum conditions for splitting kernels and the combined
//! boundedness verdict.
//!
//! Condition 1 is sup_{r>0} ‖w₁u‖_{L_q(φ^{-1}(r,∞))}·‖s₁v^{-1}‖_{L_{p'}(0,r)};
//! condition 2 mirrors it with the regions swapped. Both conditions finite
//! gives sufficiency; an infinite condition on a region carrying a lower
//! envelope estimate gives necessity of failure.
//!
//! Symbolic endpoint classification runs before any quadrature: an infinite
//! factor norm is invisible to truncated quadrature, so the power-log
//! integrability tests act as exact preconditions rather than numerical
//! guesses.

use thiserror::Error;

use crate::kernels::{Envelope, KernelFunction, PhiMap, SplittingKernelSpec};
use crate::numerics::{log_grid, sup_scan, Interval};
use crate::spaces::{
    growth_r_to_inf, growth_zero_to_r, plw_norm, Exponent, NormGrowth, PowerLogWeight,
};

#[derive(Debug, Error)]
pub enum HardyError {
    #[error("the sufficiency framework requires p ≤ q, got p = {p}, q = {q}")]
    ExponentOrderViolation { p: Exponent, q: Exponent },
}

/// Slope magnitude below which a scanned functional counts as flat.
pub const FLAT_SLOPE: f64 = 0.02;
/// Slope magnitude above which outward growth counts as divergence;
/// between the two thresholds the verdict is inconclusive.
pub const GROWTH_SLOPE: f64 = 0.04;

/// Tolerance for treating a symbolic growth exponent as exactly zero,
/// absorbing round-off in exponent arithmetic such as β − 1/q + 1/p′.
pub const EXP_TOL: f64 = 1e-12;

pub const DEFAULT_GRID_LO: f64 = 1e-6;
pub const DEFAULT_GRID_HI: f64 = 1e6;
pub const DEFAULT_PER_DECADE: u32 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Finite,
    Infinite,
    Inconclusive,
}

/// Outcome of evaluating one Hardy-type condition.
#[derive(Clone, Copy, Debug)]
pub struct ConditionVerdict {
    pub verdict: Verdict,
    pub sup_estimate: f64,
    pub argmax_r: f64,
    pub left_slope: f64,
    pub right_slope: f64,
    /// Exact power of r in the scanned product when every factor is a pure
    /// power; the condition is finite iff this exponent is zero.
    pub symbolic_exponent: Option<f64>,
}

impl ConditionVerdict {
    fn vacuous() -> Self {
        ConditionVerdict {
            verdict: Verdict::Finite,
            sup_estimate: 0.0,
            argmax_r: 1.0,
            left_slope: 0.0,
            right_slope: 0.0,
            symbolic_exponent: Some(0.0),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.verdict == Verdict::Finite
    }
}

/// The data of a weighted norm inequality ‖Tf‖_{L_q^u} ≤ C‖f‖_{L_p^v}.
#[derive(Clone, Debug)]
pub struct InequalityInstance {
    pub spec: SplittingKernelSpec,
    pub kernel: Option<KernelFunction>,
    pub u: PowerLogWeight,
    pub v: PowerLogWeight,
    pub p: Exponent,
    pub q: Exponent,
}

/// Supremum-scan grid parameters.
#[derive(Clone, Copy, Debug)]
pub struct ScanGrid {
    pub lo: f64,
    pub hi: f64,
    pub per_decade: u32,
}

impl Default for ScanGrid {
    fn default() -> Self {
        ScanGrid {
            lo: DEFAULT_GRID_LO,
            hi: DEFAULT_GRID_HI,
            per_decade: DEFAULT_PER_DECADE,
        }
    }
}

impl ScanGrid {
    pub fn points(&self) -> Vec<f64> {
        log_grid(self.lo, self.hi, self.per_decade)
    }
}

/// φ^{-1}(iv) for a power map φ: endpoints map through φ^{-1} and swap when
/// φ is decreasing.
pub fn phi_preimage(phi: &PhiMap, iv: Interval) -> Interval {
    let a = phi.inverse_value(iv.lo());
    let b = phi.inverse_value(iv.hi());
    if phi.is_increasing() {
        Interval::new(a, b)
    } else {
        Interval::new(b, a)
    }
}

/// Which half of the split the condition addresses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Region {
    One,
    Two,
}

struct ConditionData {
    /// y-side factor w_j·u with exponent q; its region is a function of r.
    y_weight: PowerLogWeight,
    /// x-side factor s_j·v^{-1} with exponent p′.
    x_weight: PowerLogWeight,
}

fn condition_data(inst: &InequalityInstance, region: Region) -> Option<ConditionData> {
    let (s_env, w_env) = match region {
        Region::One => (&inst.spec.s1, &inst.spec.w1),
        Region::Two => (&inst.spec.s2, &inst.spec.w2),
    };
    match (s_env, w_env) {
        (Envelope::Weight(s), Envelope::Weight(w)) => Some(ConditionData {
            y_weight: w.mul(&inst.u),
            x_weight: s.mul(&inst.v.inverse()),
        }),
        _ => None,
    }
}

/// The y-side interval of condition `region` at parameter r.
fn y_interval(phi: &PhiMap, region: Region, r: f64) -> Interval {
    let iv = match region {
        Region::One => Interval::to_infinity(r),
        Region::Two => Interval::from_zero(r),
    };
    phi_preimage(phi, iv)
}

fn evaluate_condition(inst: &InequalityInstance, region: Region, grid: &ScanGrid) -> ConditionVerdict {
    let Some(data) = condition_data(inst, region) else {
        return ConditionVerdict::vacuous();
    };
    let q = inst.q;
    let pp = inst.p.conjugate();
    let phi = &inst.spec.phi;

    // Symbolic growth of each factor as a power of r.
    let m_inv = 1.0 / phi.m();
    let y_growth_in_rho = match (region, phi.is_increasing()) {
        // Increasing φ: region one is (φ^{-1}(r), ∞), region two (0, φ^{-1}(r)).
        (Region::One, true) => growth_r_to_inf(&data.y_weight, q),
        (Region::Two, true) => growth_zero_to_r(&data.y_weight, q),
        // Decreasing φ: the preimages swap ends.
        (Region::One, false) => growth_zero_to_r(&data.y_weight, q),
        (Region::Two, false) => growth_r_to_inf(&data.y_weight, q),
    };
    let y_growth = y_growth_in_rho.compose_power(m_inv);
    let x_growth = match region {
        Region::One => growth_zero_to_r(&data.x_weight, pp),
        Region::Two => growth_r_to_inf(&data.x_weight, pp),
    };
    let total = y_growth.mul(&x_growth);

    if !total.finite {
        return ConditionVerdict {
            verdict: Verdict::Infinite,
            sup_estimate: f64::INFINITY,
            argmax_r: 1.0,
            left_slope: total.exp_zero,
            right_slope: total.exp_inf,
            symbolic_exponent: symbolic_exponent(&total),
        };
    }

    // Numeric supremum scan (factor norms are finite for every r).
    let points = grid.points();
    let scan = sup_scan(
        |r| {
            let ny = plw_norm(&data.y_weight, q, y_interval(phi, region, r));
            let nx = match region {
                Region::One => plw_norm(&data.x_weight, pp, Interval::from_zero(r)),
                Region::Two => plw_norm(&data.x_weight, pp, Interval::to_infinity(r)),
            };
            ny * nx
        },
        &points,
    );

    let verdict = if total.boundary {
        classify_by_slopes(scan.left_slope, scan.right_slope)
    } else if total.exp_zero >= -EXP_TOL && total.exp_inf <= EXP_TOL {
        Verdict::Finite
    } else {
        Verdict::Infinite
    };
    ConditionVerdict {
        verdict,
        sup_estimate: if verdict == Verdict::Infinite {
            f64::INFINITY
        } else {
            scan.sup_estimate
        },
        argmax_r: scan.argmax,
        left_slope: scan.left_slope,
        right_slope: scan.right_slope,
        symbolic_exponent: symbolic_exponent(&total),
    }
}

fn symbolic_exponent(total: &NormGrowth) -> Option<f64> {
    (total.pure_power && (total.exp_zero - total.exp_inf).abs() < 1e-12).then_some(total.exp_inf)
}

/// Slope policy for the numeric fallback: growth toward either end beyond
/// the divergence threshold is infinite, flat is finite, and the band in
/// between is reported honestly as inconclusive.
fn classify_by_slopes(left: f64, right: f64) -> Verdict {
    let outward = (-left).max(right).max(0.0);
    if outward > GROWTH_SLOPE {
        Verdict::Infinite
    } else if outward > FLAT_SLOPE {
        Verdict::Inconclusive
    } else {
        Verdict::Finite
    }
}

/// Evaluate sup_{r>0} ‖w₁u‖_{L_q(φ^{-1}(r,∞))}·‖s₁v^{-1}‖_{L_{p'}(0,r)}.
pub fn condition_one(inst: &InequalityInstance) -> ConditionVerdict {
    evaluate_condition(inst, Region::One, &ScanGrid::default())
}

/// Evaluate sup_{r>0} ‖w₂u‖_{L_q(φ^{-1}(0,r))}·‖s₂v^{-1}‖_{L_{p'}(r,∞)}.
pub fn condition_two(inst: &InequalityInstance) -> ConditionVerdict {
    evaluate_condition(inst, Region::Two, &ScanGrid::default())
}

/// As [`condition_one`]/[`condition_two`] with an explicit scan grid.
pub fn conditions_on_grid(
    inst: &InequalityInstance,
    grid: &ScanGrid,
) -> (ConditionVerdict, ConditionVerdict) {
    (
        evaluate_condition(inst, Region::One, grid),
        evaluate_condition(inst, Region::Two, grid),
    )
}

/// Four-valued boundedness answer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundednessVerdict {
    Bounded,
    Unbounded,
    SufficientOnlyUnknown,
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct BoundednessReport {
    pub verdict: BoundednessVerdict,
    pub condition1: ConditionVerdict,
    pub condition2: ConditionVerdict,
}

/// Combine both conditions: finiteness of both is sufficient for
/// boundedness; an infinite condition over a region with a certified lower
/// envelope witnesses unboundedness; an infinite condition without one
/// leaves the question open.
pub fn check_boundedness(inst: &InequalityInstance) -> Result<BoundednessReport, HardyError> {
    check_boundedness_on_grid(inst, &ScanGrid::default())
}

pub fn check_boundedness_on_grid(
    inst: &InequalityInstance,
    grid: &ScanGrid,
) -> Result<BoundednessReport, HardyError> {
    if inst.p.value() > inst.q.value() {
        return Err(HardyError::ExponentOrderViolation {
            p: inst.p,
            q: inst.q,
        });
    }
    let (c1, c2) = conditions_on_grid(inst, grid);
    let verdict = if (c1.verdict == Verdict::Infinite && inst.spec.lower1)
        || (c2.verdict == Verdict::Infinite && inst.spec.lower2)
    {
        BoundednessVerdict::Unbounded
    } else if c1.verdict == Verdict::Inconclusive || c2.verdict == Verdict::Inconclusive {
        BoundednessVerdict::Inconclusive
    } else if c1.is_finite() && c2.is_finite() {
        BoundednessVerdict::Bounded
    } else {
        BoundednessVerdict::SufficientOnlyUnknown
    };
    Ok(BoundednessReport {
        verdict,
        condition1: c1,
        condition2: c2,
    })
}
