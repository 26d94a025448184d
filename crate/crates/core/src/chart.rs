//! Parametrized immersions `f: U ⊂ R^n -> E^m_s` and curves in their
//! parameter domains.
//!
//! A chart bundles the ambient signature, the declared index of the induced
//! metric, a rectangular parameter domain and an evaluator. Evaluators may
//! supply closed-form partial derivatives; when they do, every engine uses
//! them verbatim, otherwise finite differences take over (see
//! [`crate::jets`]). Evaluators must be reentrant — charts are immutable
//! and shared freely across threads.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use nalgebra::DVector;

use crate::error::GeoError;
use crate::linalg::MetricSignature;
use crate::Result;

#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use num_traits::Float;

/// Evaluation contract of an immersion.
pub trait ChartEvaluator: Send + Sync {
    fn param_dim(&self) -> usize;
    fn ambient_dim(&self) -> usize;
    /// Position `f(u)`.
    fn eval(&self, u: &[f64]) -> DVector<f64>;
    /// Closed-form partial derivative `∂^alpha f`, when available.
    /// `alpha` has one entry per parameter axis; `alpha = 0` is the position.
    fn partial(&self, u: &[f64], alpha: &[usize]) -> Option<DVector<f64>> {
        let _ = (u, alpha);
        None
    }
}

/// A parametrized immersion into a pseudo-Euclidean ambient space.
pub struct ImmersionChart {
    signature: MetricSignature,
    index: usize,
    domain: Vec<(f64, f64)>,
    evaluator: Box<dyn ChartEvaluator>,
}

impl ImmersionChart {
    /// Builds a chart; the domain box must have one interval per parameter
    /// axis and the declared submanifold index must not exceed the ambient
    /// index.
    pub fn new(
        signature: MetricSignature,
        index: usize,
        domain: Vec<(f64, f64)>,
        evaluator: Box<dyn ChartEvaluator>,
    ) -> Result<Self> {
        if domain.len() != evaluator.param_dim() {
            return Err(GeoError::Dimension {
                expected: evaluator.param_dim(),
                got: domain.len(),
            });
        }
        if evaluator.ambient_dim() != signature.dim() {
            return Err(GeoError::Dimension {
                expected: signature.dim(),
                got: evaluator.ambient_dim(),
            });
        }
        if index > signature.index() {
            return Err(GeoError::InvalidGeometry {
                reason: String::from("submanifold index exceeds ambient index"),
            });
        }
        Ok(Self {
            signature,
            index,
            domain,
            evaluator,
        })
    }

    pub fn signature(&self) -> &MetricSignature {
        &self.signature
    }

    /// Index `r` of the induced metric.
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn param_dim(&self) -> usize {
        self.evaluator.param_dim()
    }

    pub fn ambient_dim(&self) -> usize {
        self.signature.dim()
    }

    pub fn domain(&self) -> &[(f64, f64)] {
        &self.domain
    }

    /// True when `u` lies inside the domain box, inset by `margin` on every
    /// side.
    pub fn contains(&self, u: &[f64], margin: f64) -> bool {
        u.len() == self.domain.len()
            && u.iter()
                .zip(self.domain.iter())
                .all(|(&x, &(lo, hi))| x >= lo + margin && x <= hi - margin)
    }

    /// Center of the domain box.
    pub fn domain_center(&self) -> Vec<f64> {
        self.domain.iter().map(|&(lo, hi)| 0.5 * (lo + hi)).collect()
    }

    pub fn eval(&self, u: &[f64]) -> DVector<f64> {
        self.evaluator.eval(u)
    }

    pub fn analytic_partial(&self, u: &[f64], alpha: &[usize]) -> Option<DVector<f64>> {
        self.evaluator.partial(u, alpha)
    }
}

impl core::fmt::Debug for ImmersionChart {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("ImmersionChart")
            .field("signature", &self.signature)
            .field("index", &self.index)
            .field("domain", &self.domain)
            .finish()
    }
}

/// One separable factor of a product term, as a function of a single
/// parameter axis. Derivatives of every variant are closed-form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Factor {
    /// Constant 1.
    One,
    /// `cos(omega x + phase)`.
    Cos { omega: f64, phase: f64 },
    /// `cosh(omega x)`.
    Cosh { omega: f64 },
    /// `sinh(omega x)`.
    Sinh { omega: f64 },
    /// `x^exponent`.
    Power { exponent: u32 },
}

impl Factor {
    pub fn cos(omega: f64) -> Self {
        Factor::Cos { omega, phase: 0.0 }
    }

    pub fn sin(omega: f64) -> Self {
        Factor::Cos {
            omega,
            phase: -core::f64::consts::FRAC_PI_2,
        }
    }

    pub fn cosh(omega: f64) -> Self {
        Factor::Cosh { omega }
    }

    pub fn sinh(omega: f64) -> Self {
        Factor::Sinh { omega }
    }

    pub fn power(exponent: u32) -> Self {
        Factor::Power { exponent }
    }

    /// `d^order/dx^order` of the factor at `x`.
    pub fn derivative(&self, x: f64, order: usize) -> f64 {
        match *self {
            Factor::One => {
                if order == 0 {
                    1.0
                } else {
                    0.0
                }
            }
            Factor::Cos { omega, phase } => {
                let shift = order as f64 * core::f64::consts::FRAC_PI_2;
                omega.powi(order as i32) * (omega * x + phase + shift).cos()
            }
            Factor::Cosh { omega } => {
                let base = omega * x;
                let v = if order % 2 == 0 { base.cosh() } else { base.sinh() };
                omega.powi(order as i32) * v
            }
            Factor::Sinh { omega } => {
                let base = omega * x;
                let v = if order % 2 == 0 { base.sinh() } else { base.cosh() };
                omega.powi(order as i32) * v
            }
            Factor::Power { exponent } => {
                let p = exponent as usize;
                if order > p {
                    return 0.0;
                }
                let mut c = 1.0;
                for j in 0..order {
                    c *= (p - j) as f64;
                }
                c * x.powi((p - order) as i32)
            }
        }
    }
}

/// `coeff * prod_k factor_k(u_k)` — one term of a product-chart component.
#[derive(Debug, Clone)]
pub struct Term {
    pub coeff: f64,
    pub factors: Vec<Factor>,
}

impl Term {
    pub fn new(coeff: f64, factors: Vec<Factor>) -> Self {
        Self { coeff, factors }
    }

    fn partial(&self, u: &[f64], alpha: &[usize]) -> f64 {
        let mut acc = self.coeff;
        for (k, factor) in self.factors.iter().enumerate() {
            acc *= factor.derivative(u[k], alpha[k]);
            if acc == 0.0 {
                return 0.0;
            }
        }
        acc
    }
}

/// Immersion whose components are sums of separable closed-form terms, plus
/// a constant offset. All partial derivatives are exact; this is the
/// evaluator behind every catalog geometry.
#[derive(Debug, Clone)]
pub struct ProductChart {
    param_dim: usize,
    components: Vec<Vec<Term>>,
    offset: DVector<f64>,
}

impl ProductChart {
    /// `components[i]` lists the terms of ambient coordinate `i`; `offset`
    /// is added to the position only.
    pub fn new(param_dim: usize, components: Vec<Vec<Term>>, offset: DVector<f64>) -> Self {
        assert_eq!(components.len(), offset.len());
        for terms in &components {
            for term in terms {
                assert_eq!(term.factors.len(), param_dim);
            }
        }
        Self {
            param_dim,
            components,
            offset,
        }
    }
}

impl ChartEvaluator for ProductChart {
    fn param_dim(&self) -> usize {
        self.param_dim
    }

    fn ambient_dim(&self) -> usize {
        self.components.len()
    }

    fn eval(&self, u: &[f64]) -> DVector<f64> {
        let zero = alloc::vec![0usize; self.param_dim];
        self.partial(u, &zero).expect("product charts are closed form")
    }

    fn partial(&self, u: &[f64], alpha: &[usize]) -> Option<DVector<f64>> {
        debug_assert_eq!(u.len(), self.param_dim);
        debug_assert_eq!(alpha.len(), self.param_dim);
        let mut out = if alpha.iter().all(|&a| a == 0) {
            self.offset.clone()
        } else {
            DVector::zeros(self.components.len())
        };
        for (i, terms) in self.components.iter().enumerate() {
            for term in terms {
                out[i] += term.partial(u, alpha);
            }
        }
        Some(out)
    }
}

/// A curve `t -> u(t)` in the parameter domain of a chart.
pub trait ParamCurve: Send + Sync {
    fn param_dim(&self) -> usize;
    fn point(&self, t: f64) -> DVector<f64>;
    /// Closed-form derivative `d^order u / dt^order`, when available.
    fn derivative(&self, t: f64, order: usize) -> Option<DVector<f64>> {
        let _ = (t, order);
        None
    }
    fn domain(&self) -> (f64, f64) {
        (f64::NEG_INFINITY, f64::INFINITY)
    }
}

/// Parameter curve given by a closed-form derivative rule
/// (`order` 0 is the position).
pub struct ClosedFormParamCurve {
    param_dim: usize,
    rule: Box<dyn Fn(f64, usize) -> DVector<f64> + Send + Sync>,
    domain: (f64, f64),
}

impl ClosedFormParamCurve {
    pub fn new(
        param_dim: usize,
        rule: Box<dyn Fn(f64, usize) -> DVector<f64> + Send + Sync>,
    ) -> Self {
        Self {
            param_dim,
            rule,
            domain: (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    pub fn with_domain(mut self, lo: f64, hi: f64) -> Self {
        self.domain = (lo, hi);
        self
    }
}

impl ParamCurve for ClosedFormParamCurve {
    fn param_dim(&self) -> usize {
        self.param_dim
    }

    fn point(&self, t: f64) -> DVector<f64> {
        (self.rule)(t, 0)
    }

    fn derivative(&self, t: f64, order: usize) -> Option<DVector<f64>> {
        Some((self.rule)(t, order))
    }

    fn domain(&self) -> (f64, f64) {
        self.domain
    }
}
