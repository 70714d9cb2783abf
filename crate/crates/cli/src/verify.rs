//! Verification suites behind `verify`.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use smooth_transitions::flat_ends::{
    change_of_interval, fd_flatness, jet_flatness, monotonicity_check, product, symmetry_check,
    FlatnessReport,
};
use smooth_transitions::numerics::{binomial_identity_check, FdContext};
use smooth_transitions::step_functions::{
    beta_step_lr, ode_constant, ode_residual, olofsen_check, rational_step_lr, trig_step,
};
use smooth_transitions::transitions::seam_report;
use smooth_transitions::{
    hermite_interpolant, hermite_oracle, transition_from_blends, transition_from_single,
    transition_hermite, BlendOperator, Direction, EndpointJet, HermiteSpec, Interval, SmoothFn64,
    SmoothFunction, StepOrders, Transition64,
};

use crate::family::{Family, StepSpec};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Flatness,
    Symmetry,
    Closure,
    HermiteOracle,
    TrigOde,
    Binomial,
    Seams,
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Suite::Flatness => "flatness",
            Suite::Symmetry => "symmetry",
            Suite::Closure => "closure",
            Suite::HermiteOracle => "hermite-oracle",
            Suite::TrigOde => "trig-ode",
            Suite::Binomial => "binomial",
            Suite::Seams => "seams",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone)]
pub struct Options {
    pub family: Option<Family>,
    pub max_order: u32,
    pub max_m: Option<u32>,
    pub m: Option<u32>,
    /// A single `(ℓ, r)` member for beta/rational in `symmetry`.
    pub orders: Option<(u32, u32)>,
    pub seed: u64,
    pub cases: usize,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            family: None,
            max_order: 4,
            max_m: None,
            m: None,
            orders: None,
            seed: 7,
            cases: 3,
        }
    }
}

impl Options {
    /// `--m` alone, else `0..=--max-m` (with a per-suite default).
    fn ms(&self, default_max: u32) -> Vec<u32> {
        match self.m {
            Some(m) => vec![m],
            None => (0..=self.max_m.unwrap_or(default_max)).collect(),
        }
    }
}

/// One line of a report: a measured quantity against its bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    fn below(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            value,
            tolerance,
            passed: value <= tolerance,
        }
    }

    fn exact(name: impl Into<String>, ok: bool) -> Self {
        Self {
            name: name.into(),
            value: if ok { 0.0 } else { 1.0 },
            tolerance: 0.0,
            passed: ok,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub suite: Suite,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl Report {
    fn new(suite: Suite, checks: Vec<Check>) -> Self {
        Self {
            suite,
            passed: checks.iter().all(|c| c.passed),
            checks,
        }
    }

    pub fn table(&self) -> String {
        let w = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(5).max(5);
        let mut s = format!("{:<w$}  {:>12}  {:>12}  result\n", "check", "value", "tolerance");
        for c in &self.checks {
            s += &format!(
                "{:<w$}  {:>12.3e}  {:>12.3e}  {}\n",
                c.name,
                c.value,
                c.tolerance,
                if c.passed { "pass" } else { "FAIL" }
            );
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        s += &format!("{}: {} checks, {} failed\n", self.suite, self.checks.len(), failed);
        s
    }
}

pub fn run(suite: Suite, opts: &Options) -> Result<Report, CliError> {
    let checks = match suite {
        Suite::Flatness => flatness(opts)?,
        Suite::Symmetry => symmetry(opts)?,
        Suite::Closure => closure(opts)?,
        Suite::HermiteOracle => hermite(opts)?,
        Suite::TrigOde => trig_ode(opts)?,
        Suite::Binomial => binomial(opts)?,
        Suite::Seams => seams(opts)?,
    };
    Ok(Report::new(suite, checks))
}

/// Worst `defect / tolerance` over both ends.
fn worst_ratio(r: &FlatnessReport<f64>) -> f64 {
    let side = |v: &[f64]| v.iter().zip(&r.tolerance).fold(0.0f64, |m, (d, t)| m.max(d.abs() / t));
    side(&r.left).max(side(&r.right))
}

fn flatness_checks(name: &str, f: &SmoothFn64, l: usize, r: usize, ctx: FdContext) -> Result<Vec<Check>, CliError> {
    let jet = jet_flatness(f, l, r, 1e-8)?;
    let fd_l = l.min(4);
    let fd_r = r.min(4);
    let mut out = vec![Check::below(format!("{name} jet ({l},{r})"), jet.max_defect(), 1e-8)];
    if fd_l.max(fd_r) > 0 {
        let fd = fd_flatness(f, fd_l, fd_r, ctx)?;
        out.push(Check::below(format!("{name} fd ({fd_l},{fd_r}) / tol"), worst_ratio(&fd), 1.0));
    }
    Ok(out)
}

fn families(opts: &Options) -> Vec<Family> {
    match opts.family {
        Some(f) => vec![f],
        None => vec![Family::Beta, Family::Rational, Family::Trig, Family::Expo, Family::Fabius],
    }
}

fn flatness(opts: &Options) -> Result<Vec<Check>, CliError> {
    let n = opts.max_order;
    let mut out = Vec::new();
    for fam in families(opts) {
        match fam {
            Family::Beta | Family::Rational => {
                for l in 0..=n {
                    for r in 0..=n {
                        let mut s = StepSpec::new(fam);
                        s.orders = (l, r);
                        let f = s.build()?;
                        out.extend(flatness_checks(f.label(), &f, l as usize, r as usize, FdContext::OneSided)?);
                    }
                }
            }
            Family::Trig => {
                for m in opts.ms(3) {
                    let f = trig_step(m)?;
                    let o = 2 * m as usize + 1;
                    out.extend(flatness_checks(f.label(), &f, o, o, FdContext::OneSided)?);
                }
            }
            Family::Expo => {
                let f = StepSpec::new(fam).build()?;
                let k = n as usize;
                out.extend(flatness_checks(f.label(), &f, k, k, FdContext::ExpoRational)?);
            }
            Family::Fabius => {
                let f = StepSpec::new(fam).build()?;
                let k = n as usize;
                let jet = jet_flatness(&f, k, k, 1e-8)?;
                out.push(Check::below(format!("fabius jet ({k},{k})"), jet.max_defect(), 1e-8));
                let fd = fd_flatness(&f, k.min(2), k.min(2), FdContext::ExpoRational)?;
                out.push(Check::below(format!("fabius fd ({0},{0}) / tol", k.min(2)), worst_ratio(&fd), 1.0));
            }
        }
    }
    Ok(out)
}

fn symmetry(opts: &Options) -> Result<Vec<Check>, CliError> {
    let mut out = Vec::new();
    for fam in families(opts) {
        let (fns, tol): (Vec<SmoothFn64>, f64) = match fam {
            Family::Beta | Family::Rational => {
                let pairs: Vec<(u32, u32)> = match opts.orders {
                    Some(o) => vec![o],
                    None => (0..=opts.max_order).map(|k| (k, k)).collect(),
                };
                let build = |(l, r): (u32, u32)| {
                    if fam == Family::Beta {
                        beta_step_lr(l, r)
                    } else {
                        rational_step_lr(l, r)
                    }
                };
                (pairs.into_iter().map(build).collect(), 1e-12)
            }
            Family::Trig => (opts.ms(5).into_iter().map(trig_step).collect::<Result<_, _>>()?, 1e-12),
            Family::Expo => (vec![StepSpec::new(fam).build()?], 1e-12),
            Family::Fabius => (vec![StepSpec::new(fam).build()?], 1e-8),
        };
        for f in fns {
            let rep = symmetry_check(&f, 1001)?;
            out.push(Check::below(format!("{} symmetry", f.label()), rep.max_defect, tol));
        }
    }
    Ok(out)
}

fn closure(opts: &Options) -> Result<Vec<Check>, CliError> {
    let n = opts.max_order.min(3);
    let mut out = Vec::new();
    let mut members: Vec<(SmoothFn64, bool)> = Vec::new();
    for l in 0..=n {
        for r in 0..=n {
            members.push((beta_step_lr(l, r), l == r));
            members.push((rational_step_lr(l, r), l == r));
        }
    }
    for m in 0..=1 {
        members.push((trig_step(m)?, true));
    }
    // all pairs of a thinned set keep the suite fast
    let picks: Vec<&(SmoothFn64, bool)> = members.iter().step_by(3).collect();
    for (h, hs) in &picks {
        for (f, fs) in &picks {
            let want = h.flat_orders().min(f.flat_orders());
            let (l, r) = (want.left.capped(8) as usize, want.right.capped(8) as usize);
            let name = format!("{}*{}", h.label(), f.label());
            let p = product(h, f)?;
            out.extend(step_checks(&name, &p, l, r)?);
            let c = change_of_interval(h, f)?;
            let name = format!("{}o{}", h.label(), f.label());
            out.extend(step_checks(&name, &c, l, r)?);
            if *hs && *fs {
                let d = symmetry_check(&c, 1001)?.max_defect;
                out.push(Check::below(format!("{name} symmetry"), d, 1e-10));
            }
        }
    }
    Ok(out)
}

fn step_checks(name: &str, f: &SmoothFn64, l: usize, r: usize) -> Result<Vec<Check>, CliError> {
    let ends = f.value(0.0).abs().max((f.value(1.0) - 1.0).abs());
    let mono = monotonicity_check(f, 10_000);
    let flat = jet_flatness(f, l, r, 1e-8)?;
    Ok(vec![
        Check::below(format!("{name} endpoints"), ends, 1e-12),
        Check::below(format!("{name} monotone violations"), mono.violations.len() as f64, 0.0),
        Check::below(format!("{name} jet ({l},{r})"), flat.max_defect(), 1e-8),
    ])
}

fn hermite(opts: &Options) -> Result<Vec<Check>, CliError> {
    let n = opts.max_order.min(5) as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut out = Vec::new();
    for l in 0..=n {
        for r in 0..=n {
            let mut worst_inner = 0.0f64;
            let mut worst_ends = 0.0f64;
            for _ in 0..opts.cases {
                let a = rng.gen_range(-3.0..3.0);
                let len = rng.gen_range(0.5..3.0);
                let fa: Vec<f64> = (0..=l).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let gb: Vec<f64> = (0..=r).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let spec = HermiteSpec::new(EndpointJet::new(a, fa.clone()), EndpointJet::new(a + len, gb.clone()))?;
                let h = hermite_interpolant(&spec);
                let o = hermite_oracle(&spec)?;
                for i in 1..=20 {
                    let x = a + len * i as f64 / 21.0;
                    worst_inner = worst_inner.max((h.value(x) - o.value(x)).abs());
                }
                let dl = h.derivatives(a, l)?;
                let dr = h.derivatives(a + len, r)?;
                for (got, want) in dl.iter().zip(&fa).chain(dr.iter().zip(&gb)) {
                    worst_ends = worst_ends.max((got - want).abs());
                }
            }
            out.push(Check::below(format!("H_{{{l},{r}}} vs oracle"), worst_inner, 1e-8));
            out.push(Check::below(format!("H_{{{l},{r}}} endpoint jets"), worst_ends, 1e-9));
        }
    }
    Ok(out)
}

fn trig_ode(opts: &Options) -> Result<Vec<Check>, CliError> {
    let xs: Vec<f64> = (1..100).map(|i| i as f64 / 100.0).collect();
    opts.ms(3)
        .into_iter()
        .map(|m| {
            let res = ode_residual::<f64>(m, &xs)? / ode_constant::<f64>(m);
            Ok(Check::below(format!("T_{m} ODE residual / c_m"), res, 1e-6))
        })
        .collect()
}

fn binomial(opts: &Options) -> Result<Vec<Check>, CliError> {
    let mut out = Vec::new();
    for m in opts.ms(10) {
        out.push(Check::exact(format!("m={m} binomial sums"), binomial_identity_check(m).passed()));
        out.push(Check::exact(format!("m={m} alpha system"), olofsen_check(m)?.passed()));
    }
    Ok(out)
}

/// The transition battery: every constructor at every order `≤ min(max_order, 4)`.
pub fn seam_battery(max_order: u32) -> Result<Vec<(String, Transition64)>, CliError> {
    let outer = Interval::new(-1.0, 2.0)?;
    let inner = Interval::new(0.0, 1.0)?;
    let branches = [
        (
            "sin/exp",
            SmoothFunction::sine(outer, 1.0, 2.0, 0.5),
            SmoothFunction::exponential(outer, 0.5, 0.7),
        ),
        (
            "poly/cos",
            SmoothFunction::polynomial(outer, vec![1.0, -2.0, 0.5, 0.25]),
            SmoothFunction::cosine(outer, 2.0, 3.0, 0.0),
        ),
    ];
    let mut out = Vec::new();
    for k in 1..=max_order.min(4) {
        let orders = StepOrders::finite(k, k);
        for (name, f, g) in &branches {
            out.push((format!("hermite k={k} {name}"), transition_hermite(f, g, orders, inner)?));
            let left = BlendOperator::from_step(Direction::Leftward, &beta_step_lr(k, k), inner)?;
            out.push((format!("single B k={k} {name}"), transition_from_single(&left, f, g)?));
            let left = BlendOperator::from_step(Direction::Leftward, &rational_step_lr(k, k), inner)?;
            let right = BlendOperator::from_step(Direction::Rightward, &trig_step(k.div_ceil(2))?, inner)?
                .with_orders(orders)?;
            out.push((format!("blends R/T k={k} {name}"), transition_from_blends(&left, &right, f, g)?));
        }
    }
    Ok(out)
}

fn seams(opts: &Options) -> Result<Vec<Check>, CliError> {
    let mut out = Vec::new();
    for (name, t) in seam_battery(opts.max_order)? {
        let k = t.orders().left.capped(4) as usize;
        let rep = seam_report(&t, k)?;
        out.push(Check::below(format!("{name} jet mismatch"), rep.max_jet_mismatch(), 1e-7));
        let fd = rep
            .rows
            .iter()
            .fold(0.0f64, |m, r| m.max(r.fd_mismatch / r.fd_tolerance));
        out.push(Check::below(format!("{name} fd mismatch / tol"), fd, 1.0));
        let exact = outer_points(&t).into_iter().all(|x| {
            let branch = if x < t.inner().a() { t.left_branch() } else { t.right_branch() };
            t.value(x) == branch.value(x)
        });
        out.push(Check::exact(format!("{name} branches exact"), exact));
    }
    Ok(out)
}

/// Grid points strictly outside the inner interval.
fn outer_points(t: &Transition64) -> Vec<f64> {
    t.outer()
        .grid(301)
        .into_iter()
        .filter(|&x| x < t.inner().a() || x > t.inner().b())
        .collect()
}
