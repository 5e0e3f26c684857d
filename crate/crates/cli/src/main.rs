//! Command-line front end: check/probe/glue/struve-eval/table over the
//! splitkern library, emitting deterministic text or structured reports.
//!
//! Exit codes: 0 decided, 2 invalid configuration (diagnostic names the
//! violated precondition), 3 inconclusive.

mod report;

use std::path::PathBuf;
use std::process::exit;

use clap::{Args, Parser, Subcommand};

use splitkern::analyzer::{
    laplace_power_verdict, sine_power_verdict, stieltjes_power_verdict, struve_power_verdict,
    PowerInstance, PowerVerdict,
};
use splitkern::gluing::{verify_equivalence, GluingInstance};
use splitkern::hardy::{
    check_boundedness_on_grid, BoundednessVerdict, InequalityInstance, Region, ScanGrid, Verdict,
};
use splitkern::kernels::{catalog, KernelId, PhiMap};
use splitkern::numerics::log_grid;
use splitkern::probe::{extremal_ratio_scan, VerdictHint};
use splitkern::spaces::{Exponent, PowerLogWeight};
use splitkern::specialfn::{struve, StruveOrder};

use report::Report;

#[derive(Parser)]
#[command(name = "splitkern", version, about = "Boundedness of splitting-kernel integral transforms between weighted Lebesgue spaces")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct OutputArgs {
    /// Report format.
    #[arg(long, default_value = "text", value_parser = ["text", "structured"])]
    format: String,
    /// Write the report to this path instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct InstanceArgs {
    /// Kernel, as name or name:key=val (e.g. laplace:n=1, struve:alpha=1).
    #[arg(long)]
    kernel: String,
    /// Source Lebesgue index p ∈ [1, ∞]; "inf" accepted.
    #[arg(long)]
    p: String,
    /// Target Lebesgue index q ∈ [1, ∞]; "inf" accepted.
    #[arg(long)]
    q: String,
    /// Target-side weight u, syntax "c*x^a*(1+x)^b".
    #[arg(long)]
    u: String,
    /// Source-side weight v, same syntax.
    #[arg(long)]
    v: String,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide boundedness via the two Hardy-type conditions, with the
    /// closed-form power-weight verdict side by side where one exists.
    Check {
        #[command(flatten)]
        inst: InstanceArgs,
        /// Supremum scan grid as lo,hi,perDecade.
        #[arg(long)]
        grid: Option<String>,
        /// Quadrature tolerance echoed into the report for reproduction.
        #[arg(long, default_value_t = 1e-8)]
        rel_tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Scan empirical operator ratios for the extremal family of a region.
    Probe {
        #[command(flatten)]
        inst: InstanceArgs,
        /// Kernel region probed (1 or 2).
        #[arg(long, default_value_t = 1)]
        region: u8,
        /// Family parameter grid as lo,hi,perDecade.
        #[arg(long, default_value = "1e-1,1e2,2")]
        grid: String,
        /// Quadrature tolerance echoed into the report for reproduction.
        #[arg(long, default_value_t = 1e-8)]
        rel_tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Verify the split/joint gluing equivalence on one instance.
    Glue {
        /// f-side weight (syntax "c*x^a*(1+x)^b").
        #[arg(long)]
        f: String,
        /// g-side weight.
        #[arg(long)]
        g: String,
        #[arg(long)]
        s1: String,
        #[arg(long)]
        s2: String,
        #[arg(long)]
        w1: String,
        #[arg(long)]
        w2: String,
        /// Gluing map ψ(t) = κ·t^m as kappa,m.
        #[arg(long)]
        psi: String,
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
        /// Evaluation grid as lo,hi,perDecade.
        #[arg(long, default_value = "1e-4,1e4,4")]
        grid: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Evaluate the Struve function 𝐇_α at one or more points.
    StruveEval {
        /// Order α > −1/2.
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        /// Comma-separated positive evaluation points.
        #[arg(long)]
        x: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Sweep β with γ linked by scaling and compare numeric vs closed-form
    /// verdicts.
    Table {
        /// Kernel: sine, stieltjes:lambda=…, struve:alpha=…, laplace:n=….
        #[arg(long)]
        kernel: String,
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
        /// β sweep as lo,hi,step.
        #[arg(long, default_value = "-1,1,0.25", allow_hyphen_values = true)]
        beta: String,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn fail(msg: &str) -> ! {
    eprintln!("config error: {msg}");
    exit(2)
}

fn parse_exponent(s: &str, flag: &str) -> Exponent {
    s.parse()
        .unwrap_or_else(|e| fail(&format!("{flag} must be a Lebesgue index in [1, inf]: {e}")))
}

fn parse_weight(s: &str, flag: &str) -> PowerLogWeight {
    s.parse()
        .unwrap_or_else(|e| fail(&format!("{flag} must be a power-log weight: {e}")))
}

fn parse_triple(s: &str, flag: &str) -> (f64, f64, f64) {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        fail(&format!("{flag} must have the form a,b,c"));
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| {
            p.trim()
                .parse()
                .unwrap_or_else(|_| fail(&format!("{flag}: bad number {p:?}")))
        })
        .collect();
    (nums[0], nums[1], nums[2])
}

fn parse_scan_grid(s: &str) -> ScanGrid {
    let (lo, hi, per) = parse_triple(s, "--grid");
    if !(lo > 0.0 && lo < hi) || per < 1.0 {
        fail("--grid requires 0 < lo < hi and perDecade ≥ 1");
    }
    ScanGrid {
        lo,
        hi,
        per_decade: per as u32,
    }
}

fn parse_log_grid(s: &str) -> Vec<f64> {
    let g = parse_scan_grid(s);
    log_grid(g.lo, g.hi, g.per_decade)
}

fn instance(args: &InstanceArgs) -> (KernelId, InequalityInstance) {
    let id: KernelId = args
        .kernel
        .parse()
        .unwrap_or_else(|e| fail(&format!("--kernel: {e}")))
    ;
    let (spec, kernel) = catalog(id).unwrap_or_else(|e| fail(&format!("--kernel: {e}")));
    (
        id,
        InequalityInstance {
            spec,
            kernel: Some(kernel),
            u: parse_weight(&args.u, "--u"),
            v: parse_weight(&args.v, "--v"),
            p: parse_exponent(&args.p, "--p"),
            q: parse_exponent(&args.q, "--q"),
        },
    )
}

fn verdict_str(v: BoundednessVerdict) -> &'static str {
    match v {
        BoundednessVerdict::Bounded => "bounded",
        BoundednessVerdict::Unbounded => "unbounded",
        BoundednessVerdict::SufficientOnlyUnknown => "sufficient-only-unknown",
        BoundednessVerdict::Inconclusive => "inconclusive",
    }
}

fn condition_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Finite => "finite",
        Verdict::Infinite => "infinite",
        Verdict::Inconclusive => "inconclusive",
    }
}

fn power_str(v: PowerVerdict) -> &'static str {
    match v {
        PowerVerdict::Bounded => "bounded",
        PowerVerdict::Unbounded => "unbounded",
        PowerVerdict::SufficientOnly => "sufficient-only",
        PowerVerdict::Unknown => "unknown",
    }
}

/// β, γ of the pure-power weights u = x^{−β}, v = x^{γ}, when applicable.
fn power_exponents(inst: &InequalityInstance) -> Option<(f64, f64)> {
    // +0.0 normalizes the negative zero arising from β = −0.
    (inst.u.is_pure_power() && inst.v.is_pure_power())
        .then(|| (-inst.u.exponent_at_origin() + 0.0, inst.v.exponent_at_origin()))
}

/// Append the applicable closed-form power-weight verdict; returns the
/// decisive closed-form verdict when one exists.
fn append_closed_form(rep: &mut Report, id: KernelId, inst: &InequalityInstance) {
    let Some((beta, gamma)) = power_exponents(inst) else {
        rep.text("closed_form", "not-applicable (weights are not pure powers)");
        return;
    };
    let Ok(pw) = PowerInstance::new(inst.p, inst.q, beta, gamma) else {
        rep.text("closed_form", "not-applicable (requires p ≤ q)");
        return;
    };
    rep.num("closed_form.beta", beta);
    rep.num("closed_form.gamma", gamma);
    match id {
        KernelId::Laplace { .. } => {
            rep.text("closed_form.verdict", power_str(laplace_power_verdict(&pw)));
        }
        KernelId::Struve { alpha } => {
            rep.text("closed_form.verdict", power_str(struve_power_verdict(alpha, &pw)));
        }
        KernelId::Stieltjes { lambda } => match stieltjes_power_verdict(lambda, &pw) {
            Ok(v) => rep.text("closed_form.verdict", power_str(v)),
            Err(e) => rep.text("closed_form", &format!("not-applicable ({e})")),
        },
        KernelId::Sine => {
            let v = sine_power_verdict(&pw);
            rep.text(
                "closed_form.sharp_verdict",
                power_str(v.sharp),
            );
            rep.text(
                "closed_form.envelope_sufficient",
                if v.envelope_sufficient { "yes" } else { "no" },
            );
        }
        _ => rep.text("closed_form", "not-applicable (no closed form for this kernel)"),
    }
}

fn emit(rep: &Report, output: &OutputArgs) {
    let body = if output.format == "structured" {
        let body = rep.render_structured();
        Report::parse(&body).expect("structured report must re-parse");
        body
    } else {
        rep.render_text()
    };
    match &output.out {
        Some(path) => std::fs::write(path, body)
            .unwrap_or_else(|e| fail(&format!("--out {}: {e}", path.display()))),
        None => print!("{body}"),
    }
}

fn run_check(
    inst_args: &InstanceArgs,
    grid: Option<&str>,
    rel_tol: f64,
    output: &OutputArgs,
) -> i32 {
    if rel_tol <= 0.0 {
        fail("--rel-tol must be positive");
    }
    let (id, inst) = instance(inst_args);
    let scan_grid = grid.map(parse_scan_grid).unwrap_or_default();
    let result = check_boundedness_on_grid(&inst, &scan_grid)
        .unwrap_or_else(|e| fail(&format!("check precondition: {e}")));
    let mut rep = Report::new("check");
    rep.text("kernel", &id.to_string());
    rep.text("p", &inst.p.to_string());
    rep.text("q", &inst.q.to_string());
    rep.text("u", &inst_args.u);
    rep.text("v", &inst_args.v);
    rep.num("grid.lo", scan_grid.lo);
    rep.num("grid.hi", scan_grid.hi);
    rep.num("grid.per_decade", scan_grid.per_decade as f64);
    rep.num("rel_tol", rel_tol);
    for (name, c) in [("condition1", &result.condition1), ("condition2", &result.condition2)] {
        rep.text(&format!("{name}.verdict"), condition_str(c.verdict));
        rep.num(&format!("{name}.sup_estimate"), c.sup_estimate);
        rep.num(&format!("{name}.argmax_r"), c.argmax_r);
        rep.num(&format!("{name}.left_slope"), c.left_slope);
        rep.num(&format!("{name}.right_slope"), c.right_slope);
        if let Some(e) = c.symbolic_exponent {
            rep.num(&format!("{name}.symbolic_exponent"), e);
        }
    }
    rep.text("verdict", verdict_str(result.verdict));
    append_closed_form(&mut rep, id, &inst);
    if result.verdict == BoundednessVerdict::SufficientOnlyUnknown {
        if let Some(report::Value::Text(s)) = rep.get("closed_form.sharp_verdict") {
            if s == "bounded" {
                rep.text(
                    "note",
                    "the sharp closed-form verdict is bounded; the generic two-condition test is sufficient-only here",
                );
            }
        }
    }
    emit(&rep, output);
    match result.verdict {
        BoundednessVerdict::Bounded | BoundednessVerdict::Unbounded => 0,
        _ => 3,
    }
}

fn run_probe(
    inst_args: &InstanceArgs,
    region: u8,
    grid: &str,
    rel_tol: f64,
    output: &OutputArgs,
) -> i32 {
    if rel_tol <= 0.0 {
        fail("--rel-tol must be positive");
    }
    let region = match region {
        1 => Region::One,
        2 => Region::Two,
        _ => fail("--region must be 1 or 2"),
    };
    let (id, inst) = instance(inst_args);
    let r_grid = parse_log_grid(grid);
    let probe = extremal_ratio_scan(&inst, region, &r_grid)
        .unwrap_or_else(|e| fail(&format!("probe precondition: {e}")));
    let mut rep = Report::new("probe");
    rep.text("kernel", &id.to_string());
    rep.text("p", &inst.p.to_string());
    rep.text("q", &inst.q.to_string());
    rep.text("u", &inst_args.u);
    rep.text("v", &inst_args.v);
    rep.num("region", f64::from(region == Region::Two) + 1.0);
    rep.list("r_grid", &probe.r_grid);
    rep.list("ratios", &probe.ratios);
    rep.num("max_ratio", probe.max_ratio);
    rep.num("growth_slope", probe.growth_slope);
    rep.num("left_slope", probe.left_slope);
    rep.num("right_slope", probe.right_slope);
    let hint = match probe.verdict_hint {
        VerdictHint::BoundedConsistent => "bounded-consistent",
        VerdictHint::GrowthDetected => "growth-detected",
        VerdictHint::Inconclusive => "inconclusive",
    };
    rep.text("verdict_hint", hint);
    emit(&rep, output);
    if probe.verdict_hint == VerdictHint::Inconclusive {
        3
    } else {
        0
    }
}

#[allow(clippy::too_many_arguments)]
fn run_glue(
    f: &str,
    g: &str,
    s1: &str,
    s2: &str,
    w1: &str,
    w2: &str,
    psi: &str,
    p: &str,
    q: &str,
    grid: &str,
    output: &OutputArgs,
) -> i32 {
    let parts: Vec<&str> = psi.split(',').collect();
    if parts.len() != 2 {
        fail("--psi must have the form kappa,m");
    }
    let kappa: f64 = parts[0]
        .trim()
        .parse()
        .unwrap_or_else(|_| fail("--psi: bad kappa"));
    let m: f64 = parts[1]
        .trim()
        .parse()
        .unwrap_or_else(|_| fail("--psi: bad m"));
    if kappa <= 0.0 || m == 0.0 {
        fail("--psi requires kappa > 0 and m ≠ 0");
    }
    let inst = GluingInstance::new(
        parse_weight(f, "--f"),
        parse_weight(g, "--g"),
        parse_weight(s1, "--s1"),
        parse_weight(s2, "--s2"),
        parse_weight(w1, "--w1"),
        parse_weight(w2, "--w2"),
        PhiMap::new(kappa, m),
        parse_exponent(p, "--p"),
        parse_exponent(q, "--q"),
    )
    .unwrap_or_else(|e| fail(&format!("gluing hypothesis: {e}")));
    let grid_pts = parse_log_grid(grid);
    let mut rep = Report::new("glue");
    rep.text("psi", psi);
    rep.text("p", p);
    rep.text("q", q);
    match verify_equivalence(&inst, &grid_pts) {
        Ok(eq) => {
            rep.text("split1.verdict", condition_str(eq.split1_verdict));
            rep.text("split2.verdict", condition_str(eq.split2_verdict));
            rep.text("joint.verdict", condition_str(eq.joint_verdict));
            rep.num("split1.sup", eq.split1_sup);
            rep.num("split2.sup", eq.split2_sup);
            rep.num("joint.sup", eq.joint_sup);
            if let Some(r) = eq.max_ratio {
                rep.num("max_ratio", r);
            }
            rep.text("equivalence", "holds");
            emit(&rep, output);
            0
        }
        Err(e) => {
            rep.text("equivalence", &format!("violated: {e}"));
            emit(&rep, output);
            1
        }
    }
}

fn run_struve_eval(alpha: f64, xs: &str, output: &OutputArgs) -> i32 {
    let order = StruveOrder::new(alpha)
        .unwrap_or_else(|e| fail(&format!("--alpha precondition: {e}")));
    let points: Vec<f64> = xs
        .split(',')
        .map(|s| {
            let x: f64 = s
                .trim()
                .parse()
                .unwrap_or_else(|_| fail(&format!("--x: bad number {s:?}")));
            if x <= 0.0 {
                fail("--x requires positive points");
            }
            x
        })
        .collect();
    let values: Vec<f64> = points.iter().map(|&x| struve(order, x)).collect();
    let mut rep = Report::new("struve-eval");
    rep.num("alpha", alpha);
    rep.list("x", &points);
    rep.list("values", &values);
    emit(&rep, output);
    0
}

fn run_table(kernel: &str, p: &str, q: &str, beta: &str, output: &OutputArgs) -> i32 {
    let id: KernelId = kernel
        .parse()
        .unwrap_or_else(|e| fail(&format!("--kernel: {e}")));
    if !matches!(
        id,
        KernelId::Sine | KernelId::Stieltjes { .. } | KernelId::Struve { .. } | KernelId::Laplace { .. }
    ) {
        fail("table requires a kernel with a closed-form verdict: sine, stieltjes, struve, or laplace");
    }
    let p = parse_exponent(p, "--p");
    let q = parse_exponent(q, "--q");
    let (lo, hi, step) = parse_triple(beta, "--beta");
    if step <= 0.0 || hi < lo {
        fail("--beta requires lo ≤ hi and step > 0");
    }
    let (spec, kfn) = catalog(id).unwrap_or_else(|e| fail(&format!("--kernel: {e}")));
    let mut rep = Report::new("table");
    rep.text("kernel", &id.to_string());
    rep.text("p", &p.to_string());
    rep.text("q", &q.to_string());
    let mut betas = Vec::new();
    let mut mismatches = 0usize;
    let mut row = 0usize;
    let mut b = lo;
    while b <= hi + 1e-12 {
        let gamma = b - q.recip() + p.conjugate().recip();
        let inst = InequalityInstance {
            spec: spec.clone(),
            kernel: Some(kfn.clone()),
            u: PowerLogWeight::power(1.0, -b),
            v: PowerLogWeight::power(1.0, gamma),
            p,
            q,
        };
        let numeric = check_boundedness_on_grid(&inst, &ScanGrid::default())
            .unwrap_or_else(|e| fail(&format!("check precondition: {e}")));
        let pw = PowerInstance::new(p, q, b, gamma)
            .unwrap_or_else(|e| fail(&format!("table precondition: {e}")));
        let closed: String = match id {
            KernelId::Laplace { .. } => power_str(laplace_power_verdict(&pw)).to_string(),
            KernelId::Struve { alpha } => power_str(struve_power_verdict(alpha, &pw)).to_string(),
            KernelId::Stieltjes { lambda } => match stieltjes_power_verdict(lambda, &pw) {
                Ok(v) => power_str(v).to_string(),
                Err(e) => fail(&format!("table precondition: {e}")),
            },
            KernelId::Sine => {
                let v = sine_power_verdict(&pw);
                format!(
                    "sharp={} envelope-sufficient={}",
                    power_str(v.sharp),
                    if v.envelope_sufficient { "yes" } else { "no" }
                )
            }
            _ => unreachable!(),
        };
        let numeric_s = verdict_str(numeric.verdict);
        // A mismatch is a contradiction between decisive verdicts; an
        // envelope test left undecided (sufficient-only/inconclusive)
        // contradicts nothing.
        let mismatch = (closed == "bounded" && numeric.verdict == BoundednessVerdict::Unbounded)
            || (closed == "unbounded" && numeric.verdict == BoundednessVerdict::Bounded);
        if mismatch {
            mismatches += 1;
        }
        rep.text(
            &format!("row{row}"),
            &format!("beta={b} gamma={gamma} numeric={numeric_s} closed-form={closed}"),
        );
        betas.push(b);
        row += 1;
        b += step;
    }
    rep.list("betas", &betas);
    rep.num("rows", row as f64);
    rep.num("mismatches", mismatches as f64);
    emit(&rep, output);
    0
}

fn main() {
    let cli = Cli::parse();
    let code = match &cli.command {
        Cmd::Check {
            inst,
            grid,
            rel_tol,
            output,
        } => run_check(inst, grid.as_deref(), *rel_tol, output),
        Cmd::Probe {
            inst,
            region,
            grid,
            rel_tol,
            output,
        } => run_probe(inst, *region, grid, *rel_tol, output),
        Cmd::Glue {
            f,
            g,
            s1,
            s2,
            w1,
            w2,
            psi,
            p,
            q,
            grid,
            output,
        } => run_glue(f, g, s1, s2, w1, w2, psi, p, q, grid, output),
        Cmd::StruveEval { alpha, x, output } => run_struve_eval(*alpha, x, output),
        Cmd::Table {
            kernel,
            p,
            q,
            beta,
            output,
        } => run_table(kernel, p, q, beta, output),
    };
    exit(code);
}
