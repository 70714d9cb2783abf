//! JSON descriptors for transitions and single blends. See
//! `docs/descriptor.md` for the schema.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use smooth_transitions::numerics::{sampled_function, UniformSamples};
use smooth_transitions::operators::{apply, complement};
use smooth_transitions::{
    transition_from_blends, transition_from_single, transition_hermite, BlendOperator, Direction,
    Error, Interval, SmoothFn64, SmoothFunction, StepOrders, Transition64,
};

use crate::family::StepSpec;
use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Descriptor {
    Transition(TransitionDescriptor),
    Blend(BlendDescriptor),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionDescriptor {
    /// `[a, b]`; defaults to the hull of the branch domains.
    #[serde(default)]
    pub outer: Option<(f64, f64)>,
    /// `[a₀, b₀]`
    pub inner: (f64, f64),
    pub orders: (u32, u32),
    pub operator: OperatorSpec,
    /// `blends` (𝓑_R f + 𝓑_L g from two independent operators) or `single`
    /// (one leftward operator and its complement). Ignored for `hermite`.
    #[serde(default)]
    pub assembly: Assembly,
    pub left: BranchSpec,
    pub right: BranchSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Assembly {
    #[default]
    Single,
    Blends,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlendDescriptor {
    pub interval: (f64, f64),
    pub direction: DirectionSpec,
    /// Required for `hermite`; defaults to the carrier's orders otherwise.
    #[serde(default)]
    pub orders: Option<(u32, u32)>,
    pub operator: OperatorSpec,
    /// Apply `I − 𝓑` instead of `𝓑`.
    #[serde(default)]
    pub complement: bool,
    pub function: BranchSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DirectionSpec {
    Leftward,
    Rightward,
}

impl From<DirectionSpec> for Direction {
    fn from(d: DirectionSpec) -> Self {
        match d {
            DirectionSpec::Leftward => Direction::Leftward,
            DirectionSpec::Rightward => Direction::Rightward,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum OperatorSpec {
    Hermite,
    Multiplicative { carrier: StepSpec },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum BranchSpec {
    Constant {
        value: f64,
        #[serde(default)]
        domain: Option<(f64, f64)>,
    },
    /// Coefficients in increasing degree.
    Polynomial {
        coeffs: Vec<f64>,
        #[serde(default)]
        domain: Option<(f64, f64)>,
    },
    Sin {
        #[serde(default = "one")]
        amplitude: f64,
        frequency: f64,
        #[serde(default)]
        phase: f64,
        #[serde(default)]
        domain: Option<(f64, f64)>,
    },
    Cos {
        #[serde(default = "one")]
        amplitude: f64,
        frequency: f64,
        #[serde(default)]
        phase: f64,
        #[serde(default)]
        domain: Option<(f64, f64)>,
    },
    Exp {
        #[serde(default = "one")]
        amplitude: f64,
        rate: f64,
        #[serde(default)]
        domain: Option<(f64, f64)>,
    },
    /// `2 + (5 − x) cos²(3π(5 − x))`
    BlendDemo {
        #[serde(default)]
        domain: Option<(f64, f64)>,
    },
    /// One column (values on a uniform grid over `domain`) or two columns
    /// (`x, y` on a uniform grid); optional header row. Relative paths
    /// resolve against the descriptor's directory.
    Sampled {
        path: PathBuf,
        #[serde(default)]
        domain: Option<(f64, f64)>,
        #[serde(default = "default_sampled_order")]
        max_order: usize,
    },
}

fn one() -> f64 {
    1.0
}

fn default_sampled_order() -> usize {
    4
}

fn interval(p: (f64, f64)) -> Result<Interval<f64>, CliError> {
    Ok(Interval::new(p.0, p.1)?)
}

impl BranchSpec {
    fn declared_domain(&self) -> Option<(f64, f64)> {
        match self {
            BranchSpec::Constant { domain, .. }
            | BranchSpec::Polynomial { domain, .. }
            | BranchSpec::Sin { domain, .. }
            | BranchSpec::Cos { domain, .. }
            | BranchSpec::Exp { domain, .. }
            | BranchSpec::BlendDemo { domain }
            | BranchSpec::Sampled { domain, .. } => *domain,
        }
    }

    /// The domain the branch brings itself: declared, or a sample file's extent.
    fn intrinsic_domain(&self, base: &Path) -> Result<Option<Interval<f64>>, CliError> {
        if let Some(d) = self.declared_domain() {
            return Ok(Some(interval(d)?));
        }
        match self {
            BranchSpec::Sampled { path, .. } => {
                let path = if path.is_relative() { base.join(path) } else { path.clone() };
                Ok(Some(read_samples(&path, None)?.domain()))
            }
            _ => Ok(None),
        }
    }

    /// Builds the branch; catalog functions without a `domain` live on
    /// `fallback`.
    pub fn build(&self, fallback: Interval<f64>, base: &Path) -> Result<SmoothFn64, CliError> {
        let d = match self.declared_domain() {
            Some(p) => interval(p)?,
            None => fallback,
        };
        Ok(match self {
            BranchSpec::Constant { value, .. } => SmoothFunction::constant(d, *value),
            BranchSpec::Polynomial { coeffs, .. } => SmoothFunction::polynomial(d, coeffs.clone()),
            BranchSpec::Sin { amplitude, frequency, phase, .. } => {
                SmoothFunction::sine(d, *amplitude, *frequency, *phase)
            }
            BranchSpec::Cos { amplitude, frequency, phase, .. } => {
                SmoothFunction::cosine(d, *amplitude, *frequency, *phase)
            }
            BranchSpec::Exp { amplitude, rate, .. } => SmoothFunction::exponential(d, *amplitude, *rate),
            BranchSpec::BlendDemo { .. } => SmoothFunction::blend_demo(d),
            BranchSpec::Sampled { path, domain, max_order } => {
                let path = if path.is_relative() { base.join(path) } else { path.clone() };
                let samples = read_samples(&path, *domain)?;
                let label = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
                sampled_function(samples, *max_order, label)?
            }
        })
    }
}

/// Reads a one- or two-column sample file.
pub fn read_samples(path: &Path, domain: Option<(f64, f64)>) -> Result<UniformSamples<f64>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        let parsed: Result<Vec<f64>, _> = rec.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(v) => rows.push(v),
            Err(_) if i == 0 => continue, // header row
            Err(e) => return Err(CliError::Usage(format!("{}: row {}: {e}", path.display(), i + 1))),
        }
    }
    let width = rows.first().map(Vec::len).unwrap_or(0);
    if rows.iter().any(|r| r.len() != width) || !(width == 1 || width == 2) {
        return Err(CliError::Usage(format!(
            "{}: expected one or two columns on every row",
            path.display()
        )));
    }
    if width == 1 {
        let d = domain.ok_or_else(|| {
            CliError::Usage(format!("{}: single-column samples need a `domain`", path.display()))
        })?;
        Ok(UniformSamples::new(interval(d)?, rows.into_iter().map(|r| r[0]).collect())?)
    } else {
        let xs: Vec<f64> = rows.iter().map(|r| r[0]).collect();
        let ys: Vec<f64> = rows.iter().map(|r| r[1]).collect();
        Ok(UniformSamples::from_pairs(&xs, &ys)?)
    }
}

fn build_operator(
    spec: &OperatorSpec,
    direction: Direction,
    orders: Option<(u32, u32)>,
    on: Interval<f64>,
) -> Result<BlendOperator<f64>, CliError> {
    match spec {
        OperatorSpec::Hermite => {
            let (l, r) = orders.ok_or_else(|| CliError::Usage("hermite operators need `orders`".into()))?;
            Ok(BlendOperator::hermite(direction, StepOrders::finite(l, r), on)?)
        }
        OperatorSpec::Multiplicative { carrier } => {
            let op = BlendOperator::from_step(direction, &carrier.build()?, on)?;
            match orders {
                Some((l, r)) => Ok(op.with_orders(StepOrders::finite(l, r))?),
                None => Ok(op),
            }
        }
    }
}

/// What a descriptor evaluates to.
pub enum Built {
    Transition(Transition64),
    Blend(SmoothFn64),
}

impl Built {
    pub fn domain(&self) -> Interval<f64> {
        match self {
            Built::Transition(t) => t.outer(),
            Built::Blend(f) => f.domain(),
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        match self {
            Built::Transition(t) => t.value(x),
            Built::Blend(f) => f.value(x),
        }
    }

    pub fn derivatives(&self, x: f64, k: usize) -> Result<Vec<f64>, Error> {
        match self {
            Built::Transition(t) => Ok(t.jet(x, k)?.derivatives()),
            Built::Blend(f) => f.derivatives(x, k),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Built::Transition(t) => format!("transition ({})", t.provenance()),
            Built::Blend(f) => f.label().to_string(),
        }
    }
}

impl Descriptor {
    pub fn from_path(path: &Path) -> Result<(Self, PathBuf), CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let d: Descriptor = serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok((d, base))
    }

    pub fn build(&self, base: &Path) -> Result<Built, CliError> {
        match self {
            Descriptor::Transition(t) => Ok(Built::Transition(t.build(base)?)),
            Descriptor::Blend(b) => Ok(Built::Blend(b.build(base)?)),
        }
    }
}

impl TransitionDescriptor {
    pub fn build(&self, base: &Path) -> Result<Transition64, CliError> {
        let inner = interval(self.inner)?;
        let outer = match self.outer {
            Some(p) => interval(p)?,
            None => {
                let lo = self.left.intrinsic_domain(base)?.map(|d| d.a());
                let hi = self.right.intrinsic_domain(base)?.map(|d| d.b());
                match (lo, hi) {
                    (Some(a), Some(b)) => interval((a, b))?,
                    _ => return Err(CliError::Usage("transition needs `outer` or branch domains".into())),
                }
            }
        };
        if !(outer.a() < inner.a() && inner.b() < outer.b()) {
            return Err(CliError::Usage(format!(
                "intervals must satisfy a < a₀ < b₀ < b, got outer {outer} and inner {inner}"
            )));
        }
        let f = self.left.build(Interval::new(outer.a(), inner.b())?, base)?;
        let g = self.right.build(Interval::new(inner.a(), outer.b())?, base)?;
        let (l, r) = self.orders;
        match &self.operator {
            OperatorSpec::Hermite => Ok(transition_hermite(&f, &g, StepOrders::finite(l, r), inner)?),
            spec => {
                let left = build_operator(spec, Direction::Leftward, Some(self.orders), inner)?;
                match self.assembly {
                    Assembly::Single => Ok(transition_from_single(&left, &f, &g)?),
                    Assembly::Blends => {
                        let right = build_operator(spec, Direction::Rightward, Some(self.orders), inner)?;
                        Ok(transition_from_blends(&left, &right, &f, &g)?)
                    }
                }
            }
        }
    }
}

impl BlendDescriptor {
    pub fn operator(&self) -> Result<BlendOperator<f64>, CliError> {
        let op = build_operator(&self.operator, self.direction.into(), self.orders, interval(self.interval)?)?;
        Ok(if self.complement { complement(&op) } else { op })
    }

    pub fn build(&self, base: &Path) -> Result<SmoothFn64, CliError> {
        let op = self.operator()?;
        let f = self.function.build(op.interval(), base)?;
        Ok(apply(&op, &f)?)
    }
}
