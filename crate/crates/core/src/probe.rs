//! Empirical boundedness probing: apply the transform by quadrature and
//! scan operator ratios over the extremal families from the necessity
//! argument.
//!
//! The probe never decides boundedness on its own; it produces ratio
//! evidence (`verdict_hint`) meant to corroborate or challenge the
//! symbolic verdicts. Growth and flatness thresholds mirror the slope
//! policy of the condition scanner, with an inconclusive band between.

use thiserror::Error;

use crate::hardy::{InequalityInstance, Region};
use crate::kernels::{Envelope, KernelFunction, KernelId};
use crate::numerics::{integrate, log_grid, loglog_slope, Interval, NumericsError};
use crate::spaces::{growth_r_to_inf, growth_zero_to_r, plw_norm, Exponent, PowerLogWeight};

#[derive(Debug, Error)]
pub enum ProbeError {
    #[error("probing requires a concrete kernel function")]
    MissingKernel,
    #[error("extremal family norm diverges on region {0:?} (side condition fails)")]
    SideConditionViolated(Region),
    #[error("region {0:?} carries no envelope; nothing to probe")]
    EmptyRegion(Region),
    #[error("sharp-constant probe is calibrated for p = q = 2 only")]
    UnsupportedProbe,
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Relative tolerance for each Tf(y) evaluation.
const INNER_REL_TOL: f64 = 1e-7;
/// Relative tolerance for the outer y-norm quadrature.
const OUTER_REL_TOL: f64 = 1e-5;

pub const PROBE_GROWTH_SLOPE: f64 = 0.05;
pub const PROBE_FLAT_SLOPE: f64 = 0.02;

/// Tf(y) = ∫₀^∞ f(x)K(x,y) dx by adaptive quadrature with truncation
/// doubling.
pub fn apply_transform<F: Fn(f64) -> f64>(
    kernel: &KernelFunction,
    f: F,
    y: f64,
    rel_tol: f64,
) -> Result<f64, NumericsError> {
    integrate(|x| f(x) * kernel.eval(x, y), Interval::full(), rel_tol).map(|r| r.value)
}

/// Best-effort value of a quadrature result: divergence maps to ∞,
/// non-convergence to the partial value.
fn quad_value(r: Result<crate::numerics::QuadResult, NumericsError>) -> f64 {
    match r {
        Ok(q) => q.value,
        Err(NumericsError::DivergentIntegral) => f64::INFINITY,
        Err(NumericsError::NonConvergent { value, .. }) => value,
    }
}

/// ‖T(w·χ_support)‖_{L_q^u}: the y-integral runs on a window doubled
/// outward (inside `integrate`) until the boundary shells' contribution
/// drops below the relative tolerance of the running q-norm content.
fn transform_norm(
    kernel: &KernelFunction,
    w: &PowerLogWeight,
    support: Interval,
    u: &PowerLogWeight,
    q: Exponent,
) -> f64 {
    let tf = |y: f64| {
        quad_value(integrate(
            |x| w.eval(x) * kernel.eval(x, y),
            support,
            INNER_REL_TOL,
        ))
        .abs()
    };
    if q.is_infinite() {
        return log_grid(1e-6, 1e6, 8)
            .into_iter()
            .map(|y| tf(y) * u.eval(y))
            .fold(0.0f64, f64::max);
    }
    let qv = q.value();
    let h = |y: f64| (tf(y) * u.eval(y)).powf(qv);
    let total = quad_value(integrate(h, Interval::full(), OUTER_REL_TOL));
    total.max(0.0).powf(1.0 / qv)
}

/// The test-function family of the necessity argument on one region:
/// f_r = s^{p′−1} v^{−p′} on the region interval for 1 < p < ∞,
/// v^{−1} for p = ∞, and a v^{−1}-profile concentrated near the
/// maximizer of s·v^{−1} for p = 1.
#[derive(Clone, Debug)]
pub struct ExtremalFamily {
    pub region: Region,
    p: Exponent,
    v: PowerLogWeight,
    s: PowerLogWeight,
    profile: PowerLogWeight,
}

impl ExtremalFamily {
    pub fn new(inst: &InequalityInstance, region: Region) -> Result<Self, ProbeError> {
        let s_env = match region {
            Region::One => &inst.spec.s1,
            Region::Two => &inst.spec.s2,
        };
        let Envelope::Weight(s) = s_env else {
            return Err(ProbeError::EmptyRegion(region));
        };
        let pp = inst.p.conjugate();
        let side = inst.v.inverse().mul(s);
        let side_ok = match region {
            Region::One => growth_zero_to_r(&side, pp).finite,
            Region::Two => growth_r_to_inf(&side, pp).finite,
        };
        if !side_ok {
            return Err(ProbeError::SideConditionViolated(region));
        }
        let profile = if inst.p.is_infinite() || inst.p.value() == 1.0 {
            inst.v.inverse()
        } else {
            s.powf(pp.value() - 1.0).mul(&inst.v.powf(-pp.value()))
        };
        Ok(ExtremalFamily {
            region,
            p: inst.p,
            v: inst.v.clone(),
            s: *s,
            profile,
        })
    }

    /// The family member at parameter r, as a weight restricted to an
    /// interval.
    pub fn member(&self, r: f64) -> (PowerLogWeight, Interval) {
        let iv = match self.region {
            Region::One => Interval::from_zero(r),
            Region::Two => Interval::to_infinity(r),
        };
        if self.p.value() == 1.0 && !self.p.is_infinite() {
            // Concentrate on a 5% window around the maximizer of s·v^{-1}.
            let sv = self.s.mul(&self.v.inverse());
            let samples = match self.region {
                Region::One => log_grid(r * 1e-9, r, 16),
                Region::Two => log_grid(r, r * 1e9, 16),
            };
            let mut best = samples[0];
            let mut best_v = f64::NEG_INFINITY;
            for x in samples {
                let val = sv.eval(x);
                if val > best_v {
                    best_v = val;
                    best = x;
                }
            }
            let (lo, hi) = match self.region {
                Region::One => ((best * 0.95).min(r * 0.95), (best * 1.05).min(r)),
                Region::Two => ((best * 0.95).max(r), best * 1.05),
            };
            (self.profile, Interval::new(lo, hi))
        } else {
            (self.profile, iv)
        }
    }

    /// ‖f_r‖_{L_p^v}, in closed form on the power-log member.
    pub fn member_norm(&self, r: f64) -> f64 {
        let (w, iv) = self.member(r);
        plw_norm(&w.mul(&self.v), self.p, iv)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerdictHint {
    BoundedConsistent,
    GrowthDetected,
    Inconclusive,
}

/// Ratio evidence over a parameter grid.
#[derive(Clone, Debug)]
pub struct ProbeReport {
    pub r_grid: Vec<f64>,
    pub ratios: Vec<f64>,
    pub max_ratio: f64,
    /// Outward log-log slope of the ratios: the larger of the growth rate
    /// toward r → ∞ and toward r → 0, over the outermost decade each.
    pub growth_slope: f64,
    pub left_slope: f64,
    pub right_slope: f64,
    pub verdict_hint: VerdictHint,
}

/// Scan ‖Tf_r‖_{L_q^u} / ‖f_r‖_{L_p^v} over `r_grid` for the extremal
/// family of `region`.
pub fn extremal_ratio_scan(
    inst: &InequalityInstance,
    region: Region,
    r_grid: &[f64],
) -> Result<ProbeReport, ProbeError> {
    let kernel = inst.kernel.as_ref().ok_or(ProbeError::MissingKernel)?;
    let family = ExtremalFamily::new(inst, region)?;
    let ratios: Vec<f64> = r_grid
        .iter()
        .map(|&r| {
            let (w, iv) = family.member(r);
            let denom = plw_norm(&w.mul(&inst.v), inst.p, iv);
            transform_norm(kernel, &w, iv, &inst.u, inst.q) / denom
        })
        .collect();
    let max_ratio = ratios.iter().cloned().fold(0.0f64, f64::max);
    let lo = r_grid[0];
    let hi = r_grid[r_grid.len() - 1];
    let paired: Vec<(f64, f64)> = r_grid.iter().cloned().zip(ratios.iter().cloned()).collect();
    let left: Vec<_> = paired
        .iter()
        .cloned()
        .filter(|(r, _)| *r <= lo * 10.0 * (1.0 + 1e-12))
        .collect();
    let right: Vec<_> = paired
        .iter()
        .cloned()
        .filter(|(r, _)| *r >= hi / 10.0 * (1.0 - 1e-12))
        .collect();
    let left_slope = loglog_slope(&left);
    let right_slope = loglog_slope(&right);
    let growth_slope = right_slope.max(-left_slope);
    let verdict_hint = if !max_ratio.is_finite() || growth_slope > PROBE_GROWTH_SLOPE {
        VerdictHint::GrowthDetected
    } else if growth_slope <= PROBE_FLAT_SLOPE {
        VerdictHint::BoundedConsistent
    } else {
        VerdictHint::Inconclusive
    };
    Ok(ProbeReport {
        r_grid: r_grid.to_vec(),
        ratios,
        max_ratio,
        growth_slope,
        left_slope,
        right_slope,
        verdict_hint,
    })
}

/// Best operator-norm lower bound found by maximizing the ratio over the
/// near-extremal family x^{-1/2±ε}·χ_{(a,b)}, ε ∈ {0.1, 0.03, 0.01, 0.005}.
/// Calibrated for p = q = 2 and the three classical instances: Hardy with
/// u = x^{-1}, Stieltjes with λ = 1, and the Laplace transform.
pub fn sharp_constant_probe(id: KernelId, p: Exponent, q: Exponent) -> Result<f64, ProbeError> {
    if p.value() != 2.0 || q.value() != 2.0 || p.is_infinite() || q.is_infinite() {
        return Err(ProbeError::UnsupportedProbe);
    }
    let (u, intervals): (PowerLogWeight, Vec<Interval>) = match id {
        KernelId::Hardy => (
            PowerLogWeight::power(1.0, -1.0),
            vec![Interval::from_zero(1.0), Interval::new(1e-3, 1e3)],
        ),
        KernelId::Stieltjes { .. } | KernelId::Laplace { .. } => (
            PowerLogWeight::one(),
            vec![
                Interval::new(1e-3, 1e3),
                Interval::new(1e-4, 1e4),
                Interval::new(1e-6, 1e6),
            ],
        ),
        _ => return Err(ProbeError::UnsupportedProbe),
    };
    let (_, kernel) = crate::kernels::catalog(id).map_err(|_| ProbeError::UnsupportedProbe)?;
    let mut best = 0.0f64;
    for eps in [0.1, 0.03, 0.01, 0.005] {
        for sign in [1.0, -1.0] {
            let w = PowerLogWeight::power(1.0, -0.5 + sign * eps);
            for &iv in &intervals {
                let denom = plw_norm(&w, p, iv);
                if !denom.is_finite() || denom == 0.0 {
                    continue;
                }
                let numer = transform_norm(&kernel, &w, iv, &u, q);
                if numer.is_finite() {
                    best = best.max(numer / denom);
                }
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::catalog;
    use approx::assert_relative_eq;

    fn instance(id: KernelId, beta: f64, gamma: f64, p: f64, q: f64) -> InequalityInstance {
        let (spec, kernel) = catalog(id).unwrap();
        InequalityInstance {
            spec,
            kernel: Some(kernel),
            u: PowerLogWeight::power(1.0, -beta),
            v: PowerLogWeight::power(1.0, gamma),
            p: Exponent::new(p).unwrap(),
            q: Exponent::new(q).unwrap(),
        }
    }

    #[test]
    fn transform_examples() {
        let (_, laplace) = catalog(KernelId::Laplace { n: 1 }).unwrap();
        let v = apply_transform(&laplace, |_| 1.0, 1.0, 1e-9).unwrap();
        assert_relative_eq!(v, 1.0, max_relative = 1e-8);

        let (_, stieltjes) = catalog(KernelId::Stieltjes { lambda: 1.0 }).unwrap();
        let ind = |x: f64| if x < 1.0 { 1.0 } else { 0.0 };
        let v = apply_transform(&stieltjes, ind, 1.0, 1e-9).unwrap();
        assert_relative_eq!(v, 2f64.ln(), max_relative = 1e-6);

        let (_, hardy) = catalog(KernelId::Hardy).unwrap();
        let v = apply_transform(&hardy, ind, 2.0, 1e-9).unwrap();
        assert_relative_eq!(v, 1.0, max_relative = 1e-6);
    }

    #[test]
    fn transform_linear_in_f() {
        let (_, laplace) = catalog(KernelId::Laplace { n: 1 }).unwrap();
        let f = |x: f64| if x < 2.0 { x } else { 0.0 };
        let a = apply_transform(&laplace, f, 1.5, 1e-9).unwrap();
        let b = apply_transform(&laplace, |x| 3.0 * f(x), 1.5, 1e-9).unwrap();
        assert_relative_eq!(b, 3.0 * a, max_relative = 1e-7);
    }

    #[test]
    fn laplace_bounded_instance_is_flat() {
        let inst = instance(KernelId::Laplace { n: 1 }, 0.0, 0.0, 2.0, 2.0);
        let grid = log_grid(1e-2, 1e2, 2);
        let report = extremal_ratio_scan(&inst, Region::One, &grid).unwrap();
        assert_eq!(report.verdict_hint, VerdictHint::BoundedConsistent);
        assert!(
            report.max_ratio <= std::f64::consts::PI.sqrt() * 1.02,
            "max ratio {}",
            report.max_ratio
        );
    }

    #[test]
    fn stieltjes_unbounded_instance_grows() {
        // β = 0.2, γ = −0.6 breaks the scaling linkage: the condition
        // product grows like r^{0.4}, and so does the ratio.
        let inst = instance(KernelId::Stieltjes { lambda: 1.0 }, 0.2, -0.6, 2.0, 2.0);
        let grid = log_grid(1e-1, 1e3, 2);
        let report = extremal_ratio_scan(&inst, Region::One, &grid).unwrap();
        assert_eq!(report.verdict_hint, VerdictHint::GrowthDetected);
        assert!(report.growth_slope >= 0.05, "slope {}", report.growth_slope);
    }

    #[test]
    fn side_condition_violation_detected() {
        // Struve α=1, β=γ=1/2: ∫_r^∞ (s2 v^{-1})^{p'} diverges.
        let inst = instance(KernelId::Struve { alpha: 1.0 }, 0.5, 0.5, 2.0, 2.0);
        assert!(matches!(
            ExtremalFamily::new(&inst, Region::Two),
            Err(ProbeError::SideConditionViolated(Region::Two))
        ));
    }

    #[test]
    fn hardy_sharp_constant() {
        let best = sharp_constant_probe(KernelId::Hardy, Exponent::two(), Exponent::two()).unwrap();
        assert!(best >= 1.9, "best {best}");
        assert!(best <= 2.0 + 1e-3, "best {best}");
    }

    #[test]
    fn missing_kernel_rejected() {
        let mut inst = instance(KernelId::Hardy, 1.0, 0.0, 2.0, 2.0);
        inst.kernel = None;
        assert!(matches!(
            extremal_ratio_scan(&inst, Region::One, &[1.0, 2.0]),
            Err(ProbeError::MissingKernel)
        ));
    }
}
