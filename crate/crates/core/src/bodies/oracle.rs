use std::fmt;
use std::sync::Arc;

use super::Vector;
use crate::numeric::minimize_on_sphere;

pub type ScalarFn = Arc<dyn Fn(&Vector) -> f64 + Send + Sync>;
pub type VectorFn = Arc<dyn Fn(&Vector) -> Vector + Send + Sync>;

/// A body known through its support function, with optional closed-form
/// gauge and gauge gradient.
///
/// Without a gauge, `g(x) = sup_u <x,u> / h(u)` is evaluated numerically over
/// unit directions.
#[derive(Clone)]
pub struct SupportOracle {
    pub dim: usize,
    pub label: String,
    support: ScalarFn,
    gauge: Option<ScalarFn>,
    gauge_gradient: Option<VectorFn>,
}

impl fmt::Debug for SupportOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SupportOracle")
            .field("dim", &self.dim)
            .field("label", &self.label)
            .field("gauge", &self.gauge.is_some())
            .field("gauge_gradient", &self.gauge_gradient.is_some())
            .finish()
    }
}

impl SupportOracle {
    pub fn new(dim: usize, label: impl Into<String>, support: ScalarFn) -> Self {
        Self { dim, label: label.into(), support, gauge: None, gauge_gradient: None }
    }

    pub fn with_gauge(mut self, gauge: ScalarFn) -> Self {
        self.gauge = Some(gauge);
        self
    }

    pub fn with_gauge_gradient(mut self, grad: VectorFn) -> Self {
        self.gauge_gradient = Some(grad);
        self
    }

    pub fn support(&self, u: &Vector) -> f64 {
        (self.support)(u)
    }

    pub fn has_closed_gauge(&self) -> bool {
        self.gauge.is_some()
    }

    pub fn gauge(&self, x: &Vector) -> f64 {
        if let Some(g) = &self.gauge {
            return g(x);
        }
        let norm = x.norm();
        if norm == 0.0 {
            return 0.0;
        }
        let (v, _) = minimize_on_sphere(self.dim, |u| -x.dot(u) / (self.support)(u));
        (-v).max(0.0)
    }

    pub fn gauge_gradient(&self) -> Option<&VectorFn> {
        self.gauge_gradient.as_ref()
    }

    pub(crate) fn support_fn(&self) -> ScalarFn {
        self.support.clone()
    }
}
