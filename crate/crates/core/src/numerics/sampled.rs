//! Adapters from uniformly sampled data to endpoint jets and smooth handles.
//!
//! Derivatives at a point come from the local interpolating polynomial on
//! the nearest `2k + 2` nodes (Fornberg weights at that point).

use crate::error::{Error, Result};
use crate::function::{Interval, SmoothFunction, StepOrders};
use crate::hermite::EndpointJet;
use crate::jets::Jet;
use crate::numerics::finite_diff::fornberg_weights;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endpoint {
    Left,
    Right,
}

/// Values on a uniform grid covering `domain`, first and last samples at the
/// ends.
#[derive(Debug, Clone, PartialEq)]
pub struct UniformSamples<T> {
    domain: Interval<T>,
    values: Vec<T>,
}

impl<T: Scalar> UniformSamples<T> {
    pub fn new(domain: Interval<T>, values: Vec<T>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InsufficientSamples {
                needed: 2,
                got: values.len(),
            });
        }
        if let Some((i, _)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            let x = domain.from_unit(T::from_usize_lossy(i) / T::from_usize_lossy(values.len() - 1));
            return Err(Error::NonFinite(x.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(Self { domain, values })
    }

    /// From `(x, y)` pairs; the abscissae must be increasing and uniformly
    /// spaced to a relative tolerance of `1e-9`.
    pub fn from_pairs(xs: &[T], ys: &[T]) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::InvalidArgument(format!(
                "{} abscissae but {} values",
                xs.len(),
                ys.len()
            )));
        }
        if xs.len() < 2 {
            return Err(Error::InsufficientSamples {
                needed: 2,
                got: xs.len(),
            });
        }
        let domain = Interval::new(xs[0], xs[xs.len() - 1])?;
        let h = domain.length() / T::from_usize_lossy(xs.len() - 1);
        for (i, &x) in xs.iter().enumerate() {
            let expect = domain.a() + T::from_usize_lossy(i) * h;
            if (x - expect).abs() > T::lit(1e-9) * (h + x.abs()) {
                return Err(Error::InvalidArgument(format!(
                    "samples are not uniformly spaced near index {i}"
                )));
            }
        }
        Self::new(domain, ys.to_vec())
    }

    pub fn domain(&self) -> Interval<T> {
        self.domain
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn spacing(&self) -> T {
        self.domain.length() / T::from_usize_lossy(self.values.len() - 1)
    }

    pub fn node(&self, i: usize) -> T {
        if i + 1 == self.values.len() {
            self.domain.b()
        } else {
            self.domain.a() + T::from_usize_lossy(i) * self.spacing()
        }
    }

    /// Number of nodes used for a derivative of order `k`.
    pub fn stencil_len(order: usize) -> usize {
        2 * order + 2
    }

    /// Raw derivative estimates at `x` up to `order`.
    pub fn derivatives_at(&self, x: T, order: usize) -> Result<Vec<T>> {
        let need = Self::stencil_len(order).max(2);
        let n = self.values.len();
        if n < need {
            return Err(Error::InsufficientSamples { needed: need, got: n });
        }
        let h = self.spacing();
        let pos = ((x - self.domain.a()) / h).to_f64().unwrap_or(0.0);
        let centre = pos.round().clamp(0.0, (n - 1) as f64) as usize;
        let start = centre.saturating_sub(need / 2).min(n - need);
        // Work in units of h around the first node to keep weights well scaled.
        let z = (x - self.node(start)) / h;
        let nodes: Vec<T> = (0..need).map(|i| T::from_usize_lossy(i)).collect();
        let w = fornberg_weights(z, &nodes, order);
        let mut hk = T::one();
        Ok((0..=order)
            .map(|k| {
                let s: T = (0..need).map(|i| w[k][i] * self.values[start + i]).sum();
                let d = s / hk;
                hk *= h;
                d
            })
            .collect())
    }
}

/// One-sided derivative estimate at an end of the sampled interval,
/// packaged for the Hermite and blending code.
pub fn sampled_to_jet<T: Scalar>(
    samples: &UniformSamples<T>,
    endpoint: Endpoint,
    order: usize,
) -> Result<EndpointJet<T>> {
    let x = match endpoint {
        Endpoint::Left => samples.domain().a(),
        Endpoint::Right => samples.domain().b(),
    };
    let d = samples.derivatives_at(x, order)?;
    Ok(EndpointJet::new(x, d))
}

/// Smooth handle over sampled data with jets up to `max_order`.
pub fn sampled_function<T: Scalar>(
    samples: UniformSamples<T>,
    max_order: usize,
    label: impl Into<String>,
) -> Result<SmoothFunction<T>> {
    let need = UniformSamples::<T>::stencil_len(max_order);
    if samples.len() < need {
        return Err(Error::InsufficientSamples {
            needed: need,
            got: samples.len(),
        });
    }
    let domain = samples.domain();
    Ok(SmoothFunction::new(domain, StepOrders::NONE, label, move |x, k| {
        // The full-order stencil keeps values and low derivatives as
        // accurate as the highest one.
        let d = samples
            .derivatives_at(x, max_order.max(k))
            .expect("order capped at construction");
        Jet::from_derivatives(x, &d[..=k])
    })
    .with_max_order(max_order))
}
