//! Gluing of split Hardy-type conditions into a single joint functional,
//! for both monotonicity directions of ψ, plus the fused rational-kernel
//! form of the Struve condition.
//!
//! Hypothesis checks (the ≍ relations and the monotonicity of s₂/s₁) are
//! exact exponent comparisons on power-log data, which makes them
//! decidable rather than numerically fitted.

use thiserror::Error;

use crate::hardy::{Verdict, EXP_TOL, FLAT_SLOPE, GROWTH_SLOPE};
use crate::kernels::PhiMap;
use crate::numerics::{integrate, sup_scan, Interval, NumericsError};
use crate::spaces::{
    growth_r_to_inf, growth_zero_to_r, plw_norm, Exponent, NormGrowth, PowerLogWeight,
};

#[derive(Debug, Error)]
pub enum GluingError {
    #[error("gluing hypothesis violated: {0}")]
    HypothesisViolated(&'static str),
    #[error("the gluing lemma is stated for finite exponents only")]
    ExponentOutOfScope,
    #[error("joint and split conditions disagree near t = {t:e}")]
    EquivalenceViolated { t: f64 },
}

/// Which lemma a [`GluingInstance`] instantiates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Increasing,
    Decreasing,
}

/// Data of a gluing-lemma instance: the split conditions pair the f-side
/// integrals (exponent q) against the g-side integrals (exponent p), with
/// the f-side intervals driven by ψ(t).
#[derive(Clone, Debug)]
pub struct GluingInstance {
    pub f: PowerLogWeight,
    pub g: PowerLogWeight,
    pub s1: PowerLogWeight,
    pub s2: PowerLogWeight,
    pub w1: PowerLogWeight,
    pub w2: PowerLogWeight,
    pub psi: PhiMap,
    pub p: Exponent,
    pub q: Exponent,
    pub direction: Direction,
}

const EXPONENT_MATCH_TOL: f64 = 1e-9;

/// Endpoint exponents (t → 0, t → ∞) of t ↦ w(ψ(t)).
fn composed_exponents(w: &PowerLogWeight, psi: &PhiMap) -> (f64, f64) {
    let m = psi.m();
    if psi.is_increasing() {
        (w.exponent_at_origin() * m, w.exponent_at_infinity() * m)
    } else {
        (w.exponent_at_infinity() * m, w.exponent_at_origin() * m)
    }
}

fn exponents_match(lhs: (f64, f64), rhs: (f64, f64)) -> bool {
    (lhs.0 - rhs.0).abs() < EXPONENT_MATCH_TOL && (lhs.1 - rhs.1).abs() < EXPONENT_MATCH_TOL
}

impl GluingInstance {
    /// Builds an instance, verifying the lemma hypotheses exactly on the
    /// power-log data.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        f: PowerLogWeight,
        g: PowerLogWeight,
        s1: PowerLogWeight,
        s2: PowerLogWeight,
        w1: PowerLogWeight,
        w2: PowerLogWeight,
        psi: PhiMap,
        p: Exponent,
        q: Exponent,
    ) -> Result<Self, GluingError> {
        if p.is_infinite() || q.is_infinite() {
            return Err(GluingError::ExponentOutOfScope);
        }
        if !s2.mul(&s1.inverse()).is_nonincreasing() {
            return Err(GluingError::HypothesisViolated("s2/s1 must be nonincreasing"));
        }
        let direction = if psi.is_increasing() {
            Direction::Increasing
        } else {
            Direction::Decreasing
        };
        match direction {
            Direction::Increasing => {
                if !exponents_match(
                    composed_exponents(&w1, &psi),
                    (s2.exponent_at_origin(), s2.exponent_at_infinity()),
                ) {
                    return Err(GluingError::HypothesisViolated("w1∘ψ ≍ s2 fails"));
                }
                if !exponents_match(
                    composed_exponents(&w2, &psi),
                    (s1.exponent_at_origin(), s1.exponent_at_infinity()),
                ) {
                    return Err(GluingError::HypothesisViolated("w2∘ψ ≍ s1 fails"));
                }
            }
            Direction::Decreasing => {
                if !exponents_match(
                    composed_exponents(&w1, &psi),
                    (-s1.exponent_at_origin(), -s1.exponent_at_infinity()),
                ) {
                    return Err(GluingError::HypothesisViolated("w1∘ψ ≍ 1/s1 fails"));
                }
                if !exponents_match(
                    composed_exponents(&w2, &psi),
                    (-s2.exponent_at_origin(), -s2.exponent_at_infinity()),
                ) {
                    return Err(GluingError::HypothesisViolated("w2∘ψ ≍ 1/s2 fails"));
                }
            }
        }
        Ok(GluingInstance {
            f,
            g,
            s1,
            s2,
            w1,
            w2,
            psi,
            p,
            q,
            direction,
        })
    }

    fn w1f(&self) -> PowerLogWeight {
        self.w1.mul(&self.f)
    }

    fn w2f(&self) -> PowerLogWeight {
        self.w2.mul(&self.f)
    }

    fn s1g(&self) -> PowerLogWeight {
        self.s1.mul(&self.g)
    }

    fn s2g(&self) -> PowerLogWeight {
        self.s2.mul(&self.g)
    }

    /// First split condition at parameter t.
    pub fn split_one(&self, t: f64) -> f64 {
        let psi_t = self.psi.eval(t);
        let f_part = match self.direction {
            Direction::Increasing => {
                plw_norm(&self.w1f(), self.q, Interval::to_infinity(psi_t))
            }
            Direction::Decreasing => plw_norm(&self.w1f(), self.q, Interval::from_zero(psi_t)),
        };
        f_part * plw_norm(&self.s1g(), self.p, Interval::from_zero(t))
    }

    /// Second split condition at parameter t.
    pub fn split_two(&self, t: f64) -> f64 {
        let psi_t = self.psi.eval(t);
        let f_part = match self.direction {
            Direction::Increasing => plw_norm(&self.w2f(), self.q, Interval::from_zero(psi_t)),
            Direction::Decreasing => {
                plw_norm(&self.w2f(), self.q, Interval::to_infinity(psi_t))
            }
        };
        f_part * plw_norm(&self.s2g(), self.p, Interval::to_infinity(t))
    }
}

/// The fused supremum expression of the applicable gluing lemma.
pub struct JointFunctional {
    inst: GluingInstance,
    pub description: &'static str,
}

fn norm_pow(w: &PowerLogWeight, e: Exponent, iv: Interval) -> f64 {
    plw_norm(w, e, iv).powf(e.value())
}

impl JointFunctional {
    pub fn eval(&self, t: f64) -> f64 {
        let inst = &self.inst;
        let qv = inst.q.value();
        let pv = inst.p.value();
        let psi_t = inst.psi.eval(t);
        let near_zero = norm_pow(&inst.w2f(), inst.q, Interval::from_zero(psi_t));
        let near_inf = norm_pow(&inst.w1f(), inst.q, Interval::to_infinity(psi_t));
        let f_content = match inst.direction {
            Direction::Increasing => {
                inst.w1.eval(psi_t).powf(qv) * near_zero + inst.w2.eval(psi_t).powf(qv) * near_inf
            }
            Direction::Decreasing => {
                let near_zero_w1 = norm_pow(&inst.w1f(), inst.q, Interval::from_zero(psi_t));
                let near_inf_w2 = norm_pow(&inst.w2f(), inst.q, Interval::to_infinity(psi_t));
                inst.w1.eval(psi_t).powf(-qv) * near_zero_w1
                    + inst.w2.eval(psi_t).powf(-qv) * near_inf_w2
            }
        };
        let g_content = inst.s1.eval(t).powf(-pv)
            * norm_pow(&inst.s1g(), inst.p, Interval::from_zero(t))
            + inst.s2.eval(t).powf(-pv) * norm_pow(&inst.s2g(), inst.p, Interval::to_infinity(t));
        f_content.powf(1.0 / qv) * g_content.powf(1.0 / pv)
    }
}

/// Build the joint functional for a hypothesis-checked instance.
pub fn glue(inst: &GluingInstance) -> JointFunctional {
    JointFunctional {
        description: match inst.direction {
            Direction::Increasing => "joint form, increasing psi",
            Direction::Decreasing => "dual joint form, decreasing psi",
        },
        inst: inst.clone(),
    }
}

/// Symbolic growth of t ↦ w(ψ(t))^e.
fn value_growth(w: &PowerLogWeight, psi: &PhiMap, e: f64) -> NormGrowth {
    let (z, i) = composed_exponents(w, psi);
    NormGrowth {
        finite: true,
        exp_zero: z * e,
        exp_inf: i * e,
        pure_power: w.is_pure_power(),
        boundary: false,
    }
}

/// Growth of the q-th power of a norm over (0, ψ(t)) or (ψ(t), ∞).
fn integral_growth(w: &PowerLogWeight, e: Exponent, psi: &PhiMap, near_zero: bool) -> NormGrowth {
    let base = if near_zero {
        growth_zero_to_r(w, e)
    } else {
        growth_r_to_inf(w, e)
    };
    let scaled = NormGrowth {
        exp_zero: base.exp_zero * e.value(),
        exp_inf: base.exp_inf * e.value(),
        ..base
    };
    scaled.compose_power(psi.m())
}

/// Envelope (max) of two summed nonnegative terms.
fn sum_growth(a: &NormGrowth, b: &NormGrowth) -> NormGrowth {
    NormGrowth {
        finite: a.finite && b.finite,
        exp_zero: a.exp_zero.max(b.exp_zero),
        exp_inf: a.exp_inf.max(b.exp_inf),
        pure_power: a.pure_power && b.pure_power,
        boundary: a.boundary || b.boundary,
    }
}

fn root(g: &NormGrowth, e: Exponent) -> NormGrowth {
    NormGrowth {
        exp_zero: g.exp_zero / e.value(),
        exp_inf: g.exp_inf / e.value(),
        ..*g
    }
}

fn classify(total: &NormGrowth) -> Verdict {
    if !total.finite || total.exp_zero < -EXP_TOL || total.exp_inf > EXP_TOL {
        Verdict::Infinite
    } else {
        Verdict::Finite
    }
}

fn split_growth(inst: &GluingInstance, which: u8) -> NormGrowth {
    let id = PhiMap::identity();
    match (which, inst.direction) {
        (1, Direction::Increasing) => integral_growth(&inst.w1f(), inst.q, &inst.psi, false),
        (1, Direction::Decreasing) => integral_growth(&inst.w1f(), inst.q, &inst.psi, true),
        (2, Direction::Increasing) => integral_growth(&inst.w2f(), inst.q, &inst.psi, true),
        _ => integral_growth(&inst.w2f(), inst.q, &inst.psi, false),
    }
    .mul(&match which {
        1 => integral_growth(&inst.s1g(), inst.p, &id, true),
        _ => integral_growth(&inst.s2g(), inst.p, &id, false),
    })
    .mul(&NormGrowth::constant())
}

fn joint_growth(inst: &GluingInstance) -> NormGrowth {
    let f_terms = match inst.direction {
        Direction::Increasing => sum_growth(
            &value_growth(&inst.w1, &inst.psi, inst.q.value())
                .mul(&integral_growth(&inst.w2f(), inst.q, &inst.psi, true)),
            &value_growth(&inst.w2, &inst.psi, inst.q.value())
                .mul(&integral_growth(&inst.w1f(), inst.q, &inst.psi, false)),
        ),
        Direction::Decreasing => sum_growth(
            &value_growth(&inst.w1, &inst.psi, -inst.q.value())
                .mul(&integral_growth(&inst.w1f(), inst.q, &inst.psi, true)),
            &value_growth(&inst.w2, &inst.psi, -inst.q.value())
                .mul(&integral_growth(&inst.w2f(), inst.q, &inst.psi, false)),
        ),
    };
    let id = PhiMap::identity();
    let g_terms = sum_growth(
        &value_growth(&inst.s1, &id, -inst.p.value())
            .mul(&integral_growth(&inst.s1g(), inst.p, &id, true)),
        &value_growth(&inst.s2, &id, -inst.p.value())
            .mul(&integral_growth(&inst.s2g(), inst.p, &id, false)),
    );
    root(&f_terms, inst.q).mul(&root(&g_terms, inst.p))
}

/// Outcome of comparing split and joint conditions.
#[derive(Clone, Debug)]
pub struct EquivalenceReport {
    pub split1_verdict: Verdict,
    pub split2_verdict: Verdict,
    pub joint_verdict: Verdict,
    pub split1_sup: f64,
    pub split2_sup: f64,
    pub joint_sup: f64,
    /// sup joint / max split product, when everything is finite.
    pub max_ratio: Option<f64>,
}

/// Evaluate both split conditions and the joint one over `grid`, classify
/// symbolically, and assert the lemma's verdict equivalence.
pub fn verify_equivalence(
    inst: &GluingInstance,
    grid: &[f64],
) -> Result<EquivalenceReport, GluingError> {
    let split1_verdict = classify(&split_growth(inst, 1));
    let split2_verdict = classify(&split_growth(inst, 2));
    let joint_verdict = classify(&joint_growth(inst));

    let joint = glue(inst);
    let s1_scan = sup_scan(|t| inst.split_one(t), grid);
    let s2_scan = sup_scan(|t| inst.split_two(t), grid);
    let j_scan = sup_scan(|t| joint.eval(t), grid);

    let both_finite = split1_verdict == Verdict::Finite && split2_verdict == Verdict::Finite;
    if (joint_verdict == Verdict::Finite) != both_finite {
        return Err(GluingError::EquivalenceViolated { t: j_scan.argmax });
    }
    let max_ratio = (both_finite && joint_verdict == Verdict::Finite).then(|| {
        j_scan.sup_estimate / s1_scan.sup_estimate.max(s2_scan.sup_estimate)
    });
    Ok(EquivalenceReport {
        split1_verdict,
        split2_verdict,
        joint_verdict,
        split1_sup: s1_scan.sup_estimate,
        split2_sup: s2_scan.sup_estimate,
        joint_sup: j_scan.sup_estimate,
        max_ratio,
    })
}

/// The fused rational-kernel Struve condition for α > 1/2 and finite
/// 1 < p ≤ q < ∞:
/// sup_t (∫ (x^{α+3/2}/(t^{-2}+x²))^q u^q)^{1/q}
///       (∫ (x^{α+3/2}/(t²+x²))^{p′} v^{-p′})^{1/p′}.
pub struct FusedStruveReport {
    pub verdict: Verdict,
    pub sup_estimate: f64,
    pub left_slope: f64,
    pub right_slope: f64,
}

pub fn struve_fused_condition(
    alpha: f64,
    u: &PowerLogWeight,
    v: &PowerLogWeight,
    p: Exponent,
    q: Exponent,
    grid: &[f64],
) -> Result<FusedStruveReport, GluingError> {
    if p.is_infinite() || q.is_infinite() || p.value() <= 1.0 {
        return Err(GluingError::ExponentOutOfScope);
    }
    let pp = p.conjugate();
    // Endpoint convergence is t-independent: near 0 the integrand behaves
    // like x^{(α+3/2)}·weight, near ∞ like x^{(α-1/2)}·weight.
    let conv = |w: &PowerLogWeight, e: Exponent| {
        (alpha + 1.5 + w.exponent_at_origin()) * e.value() > -1.0
            && (alpha - 0.5 + w.exponent_at_infinity()) * e.value() < -1.0
    };
    let vinv = v.inverse();
    if !conv(u, q) || !conv(&vinv, pp) {
        return Ok(FusedStruveReport {
            verdict: Verdict::Infinite,
            sup_estimate: f64::INFINITY,
            left_slope: 0.0,
            right_slope: 0.0,
        });
    }
    let rel_tol = 1e-8;
    let factor = |t_pow: f64, w: &PowerLogWeight, e: Exponent| -> f64 {
        let r = integrate(
            |x| {
                (x.powf(alpha + 1.5) / (t_pow + x * x) * w.eval(x)).powf(e.value())
            },
            Interval::full(),
            rel_tol,
        );
        match r {
            Ok(qr) => qr.value.max(0.0).powf(e.recip()),
            Err(NumericsError::DivergentIntegral) => f64::INFINITY,
            Err(NumericsError::NonConvergent { value, .. }) => value.max(0.0).powf(e.recip()),
        }
    };
    let scan = sup_scan(
        |t| factor(t.powi(-2), u, q) * factor(t.powi(2), &vinv, pp),
        grid,
    );
    let outward = (-scan.left_slope).max(scan.right_slope).max(0.0);
    let verdict = if scan.sup_estimate.is_infinite() || outward > GROWTH_SLOPE {
        Verdict::Infinite
    } else if outward > FLAT_SLOPE {
        Verdict::Inconclusive
    } else {
        Verdict::Finite
    };
    Ok(FusedStruveReport {
        verdict,
        sup_estimate: scan.sup_estimate,
        left_slope: scan.left_slope,
        right_slope: scan.right_slope,
    })
}
