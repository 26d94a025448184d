//! High-order derivative oracle for curves and immersions.
//!
//! Closed-form derivatives are used verbatim whenever the curve or chart
//! supplies them. The fallback is central finite differences of fourth-order
//! accuracy combined with one upward Richardson step: the base formula is
//! evaluated at `h` and `2h` and extrapolated, which cancels the leading
//! truncation term while keeping the rounding amplification of the smallest
//! step. Accuracy estimates come from the extrapolation residual.
//!
//! Base steps follow `h_k = eps^(1/(k+4)) * scale`, the cancellation/
//! truncation optimum of a fourth-order formula for the k-th derivative.

use alloc::vec::Vec;
use nalgebra::DVector;

use crate::chart::ImmersionChart;
use crate::error::GeoError;
use crate::Result;

#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use num_traits::Float;

/// Highest curve derivative the jet engine produces.
pub const MAX_CURVE_ORDER: usize = 5;
/// Highest total order of immersion partials.
pub const MAX_IMMERSION_ORDER: usize = 4;

/// A curve `t -> gamma(t)` in a pseudo-Euclidean ambient space.
pub trait Curve: Send + Sync {
    fn ambient_dim(&self) -> usize;
    fn point(&self, t: f64) -> DVector<f64>;
    /// Closed-form derivative of the given order, when available. Orders for
    /// which `None` is returned are differentiated numerically.
    fn derivative(&self, t: f64, order: usize) -> Option<DVector<f64>> {
        let _ = (t, order);
        None
    }
    fn domain(&self) -> (f64, f64) {
        (f64::NEG_INFINITY, f64::INFINITY)
    }
}

/// Curve given by a closed-form derivative rule (`order` 0 is the position).
pub struct ClosedFormCurve {
    ambient_dim: usize,
    rule: alloc::boxed::Box<dyn Fn(f64, usize) -> DVector<f64> + Send + Sync>,
    domain: (f64, f64),
}

impl ClosedFormCurve {
    pub fn new(
        ambient_dim: usize,
        rule: alloc::boxed::Box<dyn Fn(f64, usize) -> DVector<f64> + Send + Sync>,
    ) -> Self {
        Self {
            ambient_dim,
            rule,
            domain: (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    pub fn with_domain(mut self, lo: f64, hi: f64) -> Self {
        self.domain = (lo, hi);
        self
    }
}

impl Curve for ClosedFormCurve {
    fn ambient_dim(&self) -> usize {
        self.ambient_dim
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

/// Sampled derivatives of a curve at one parameter value.
#[derive(Debug, Clone)]
pub struct CurveJet {
    pub t: f64,
    pub position: DVector<f64>,
    /// `derivatives[k - 1]` is the k-th derivative.
    pub derivatives: Vec<DVector<f64>>,
    /// Absolute accuracy estimate per order, nondecreasing in the order.
    pub accuracy: Vec<f64>,
}

impl CurveJet {
    /// k-th derivative, `1 <= k <= order`.
    pub fn derivative(&self, k: usize) -> &DVector<f64> {
        &self.derivatives[k - 1]
    }

    pub fn order(&self) -> usize {
        self.derivatives.len()
    }

    /// Causal character of the k-th derivative under `sig`.
    pub fn causal_character(
        &self,
        k: usize,
        sig: &crate::linalg::MetricSignature,
        tol_null: f64,
    ) -> crate::linalg::CausalCharacter {
        crate::linalg::causal_character(self.derivative(k), sig, tol_null)
    }
}

/// Central difference stencil: offsets (in units of `h`), numerator
/// coefficients, denominator factor and accuracy order of the base formula.
struct Stencil {
    offsets: &'static [f64],
    coeffs: &'static [f64],
    denom: f64,
    accuracy_order: i32,
}

fn stencil(order: usize) -> Stencil {
    match order {
        1 => Stencil {
            offsets: &[-2.0, -1.0, 1.0, 2.0],
            coeffs: &[1.0, -8.0, 8.0, -1.0],
            denom: 12.0,
            accuracy_order: 4,
        },
        2 => Stencil {
            offsets: &[-2.0, -1.0, 0.0, 1.0, 2.0],
            coeffs: &[-1.0, 16.0, -30.0, 16.0, -1.0],
            denom: 12.0,
            accuracy_order: 4,
        },
        3 => Stencil {
            offsets: &[-3.0, -2.0, -1.0, 1.0, 2.0, 3.0],
            coeffs: &[1.0, -8.0, 13.0, -13.0, 8.0, -1.0],
            denom: 8.0,
            accuracy_order: 4,
        },
        4 => Stencil {
            offsets: &[-3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0],
            coeffs: &[-1.0, 12.0, -39.0, 56.0, -39.0, 12.0, -1.0],
            denom: 6.0,
            accuracy_order: 4,
        },
        5 => Stencil {
            offsets: &[-3.0, -2.0, -1.0, 1.0, 2.0, 3.0],
            coeffs: &[-1.0, 4.0, -5.0, 5.0, -4.0, 1.0],
            denom: 2.0,
            accuracy_order: 2,
        },
        _ => panic!("derivative order {order} out of range"),
    }
}

/// Base step for the k-th derivative at scale `scale`.
pub fn fd_step(order: usize, scale: f64) -> f64 {
    f64::EPSILON.powf(1.0 / (order as f64 + 4.0)) * scale.max(1.0)
}

fn apply_stencil<F>(f: &F, t: f64, h: f64, order: usize) -> (DVector<f64>, f64)
where
    F: Fn(f64) -> DVector<f64>,
{
    let st = stencil(order);
    let mut acc: Option<DVector<f64>> = None;
    let mut sample_scale = 0.0f64;
    for (&o, &c) in st.offsets.iter().zip(st.coeffs.iter()) {
        let sample = f(t + o * h);
        sample_scale = sample_scale.max(sample.amax());
        let weighted = sample * c;
        acc = Some(match acc {
            None => weighted,
            Some(a) => a + weighted,
        });
    }
    let value = acc.expect("stencil is nonempty") / (st.denom * h.powi(order as i32));
    (value, sample_scale)
}

/// Finite-difference derivative of a vector function of one variable, with
/// one upward Richardson extrapolation step. Returns the value and an
/// accuracy estimate combining the extrapolation residual (truncation) with
/// the cancellation floor `sum|c| * eps * |f| / h^k` (rounding).
pub fn fd_derivative<F>(f: &F, t: f64, order: usize, scale: f64) -> (DVector<f64>, f64)
where
    F: Fn(f64) -> DVector<f64>,
{
    let mut h = fd_step(order, scale);
    // Keep the step exactly representable around t.
    h = (t + h) - t;
    let st = stencil(order);
    let (fine, sample_scale) = apply_stencil(f, t, h, order);
    let (coarse, _) = apply_stencil(f, t, 2.0 * h, order);
    let weight = (2.0f64).powi(st.accuracy_order);
    let merged = (&fine * weight - &coarse) / (weight - 1.0);
    let truncation = (&merged - &fine).amax();
    let coeff_sum: f64 = st.coeffs.iter().map(|c| c.abs()).sum::<f64>() / st.denom;
    let rounding =
        coeff_sum * f64::EPSILON * sample_scale.max(1.0) / h.powi(order as i32);
    (merged, truncation.max(rounding))
}

/// Reach of the widest stencil evaluation for the given order, at scale 1.
fn stencil_reach(order: usize, scale: f64) -> f64 {
    let st = stencil(order);
    let max_offset = st
        .offsets
        .iter()
        .fold(0.0f64, |m, &o| m.max(o.abs()));
    2.0 * fd_step(order, scale) * max_offset
}

/// Derivatives of `curve` at `t` up to `order` (at most 5).
///
/// Closed-form derivatives are taken when the curve provides them;
/// remaining orders fall back to finite differences. `EvaluationDomain` is
/// returned when the stencil would leave the curve's domain.
pub fn curve_jet(curve: &dyn Curve, t: f64, order: usize) -> Result<CurveJet> {
    assert!(
        (1..=MAX_CURVE_ORDER).contains(&order),
        "curve jets support orders 1..=5"
    );
    let (lo, hi) = curve.domain();
    let mut derivatives = Vec::with_capacity(order);
    let mut accuracy = Vec::with_capacity(order);
    let eval = |x: f64| curve.point(x);
    for k in 1..=order {
        let (value, est) = match curve.derivative(t, k) {
            Some(d) => {
                let est = f64::EPSILON * (1.0 + d.amax());
                (d, est)
            }
            None => {
                let reach = stencil_reach(k, t.abs());
                if t - reach < lo || t + reach > hi {
                    return Err(GeoError::EvaluationDomain { value: t, order: k });
                }
                fd_derivative(&eval, t, k, t.abs())
            }
        };
        let est = accuracy.last().map_or(est, |&prev: &f64| est.max(prev));
        derivatives.push(value);
        accuracy.push(est);
    }
    Ok(CurveJet {
        t,
        position: curve.point(t),
        derivatives,
        accuracy,
    })
}

/// All multi-indices over `n` axes with total order at most `max_total`,
/// in graded lexicographic order.
pub fn multi_indices(n: usize, max_total: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for total in 0..=max_total {
        let mut current = alloc::vec![0usize; n];
        fill(&mut out, &mut current, 0, total);
    }
    return out;

    fn fill(out: &mut Vec<Vec<usize>>, current: &mut Vec<usize>, axis: usize, remaining: usize) {
        if axis + 1 == current.len() {
            current[axis] = remaining;
            out.push(current.clone());
            current[axis] = 0;
            return;
        }
        for take in (0..=remaining).rev() {
            current[axis] = take;
            fill(out, current, axis + 1, remaining - take);
        }
        current[axis] = 0;
    }
}

/// Table of partial derivatives `∂^alpha f` for `|alpha| <= order`.
#[derive(Debug, Clone)]
pub struct ImmersionJet {
    pub u: Vec<f64>,
    pub order: usize,
    alphas: Vec<Vec<usize>>,
    entries: Vec<DVector<f64>>,
    /// Accuracy estimate per total order `0..=order`.
    pub accuracy: Vec<f64>,
}

impl ImmersionJet {
    /// Position `f(u)`.
    pub fn position(&self) -> &DVector<f64> {
        &self.entries[0]
    }

    /// Partial derivative for a multi-index; panics when it is not in the
    /// table.
    pub fn partial(&self, alpha: &[usize]) -> &DVector<f64> {
        let idx = self
            .alphas
            .iter()
            .position(|a| a == alpha)
            .expect("multi-index within jet order");
        &self.entries[idx]
    }

    /// First partials `∂_i f` in axis order.
    pub fn first_partials(&self) -> Vec<DVector<f64>> {
        let n = self.u.len();
        (0..n)
            .map(|i| {
                let mut alpha = alloc::vec![0usize; n];
                alpha[i] = 1;
                self.partial(&alpha).clone()
            })
            .collect()
    }

    /// Contraction `D^k f (v_1, ..., v_k)` of the symmetric k-th derivative
    /// against parameter-space vectors.
    pub fn contract(&self, vectors: &[&DVector<f64>]) -> DVector<f64> {
        let n = self.u.len();
        let k = vectors.len();
        assert!(k <= self.order, "contraction order exceeds jet order");
        let m = self.entries[0].len();
        let mut acc = DVector::zeros(m);
        let mut tuple = alloc::vec![0usize; k];
        loop {
            let mut alpha = alloc::vec![0usize; n];
            let mut weight = 1.0;
            for (slot, &axis) in tuple.iter().enumerate() {
                alpha[axis] += 1;
                weight *= vectors[slot][axis];
            }
            if weight != 0.0 {
                acc += self.partial(&alpha) * weight;
            }
            // Advance the index tuple.
            let mut slot = k;
            loop {
                if slot == 0 {
                    return acc;
                }
                slot -= 1;
                tuple[slot] += 1;
                if tuple[slot] < n {
                    break;
                }
                tuple[slot] = 0;
            }
        }
    }
}

fn fd_partial(
    chart: &ImmersionChart,
    u: &[f64],
    alpha: &[usize],
    h: f64,
) -> DVector<f64> {
    match alpha.iter().position(|&a| a > 0) {
        None => chart.eval(u),
        Some(axis) => {
            let order = alpha[axis];
            let mut rest = alpha.to_vec();
            rest[axis] = 0;
            let st = stencil(order);
            let mut acc: Option<DVector<f64>> = None;
            let mut shifted = u.to_vec();
            for (&o, &c) in st.offsets.iter().zip(st.coeffs.iter()) {
                shifted[axis] = u[axis] + o * h;
                let sample = fd_partial(chart, &shifted, &rest, h) * c;
                acc = Some(match acc {
                    None => sample,
                    Some(a) => a + sample,
                });
            }
            acc.expect("stencil is nonempty") / (st.denom * h.powi(order as i32))
        }
    }
}

/// All partial derivatives of the chart at `u` up to total order `order`
/// (at most 4). Closed-form partials are used when the chart provides them;
/// otherwise tensor-product central differences with upward Richardson
/// extrapolation.
pub fn immersion_jet(chart: &ImmersionChart, u: &[f64], order: usize) -> Result<ImmersionJet> {
    assert!(
        order <= MAX_IMMERSION_ORDER,
        "immersion jets support total orders 0..=4"
    );
    let n = chart.param_dim();
    if u.len() != n {
        return Err(GeoError::Dimension {
            expected: n,
            got: u.len(),
        });
    }
    if !chart.contains(u, 0.0) {
        return Err(GeoError::EvaluationDomain {
            value: u.first().copied().unwrap_or(0.0),
            order,
        });
    }
    let scale = u.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    let alphas = multi_indices(n, order);
    let mut entries: Vec<DVector<f64>> = Vec::with_capacity(alphas.len());
    let mut accuracy = alloc::vec![f64::EPSILON; order + 1];
    for alpha in &alphas {
        let total: usize = alpha.iter().sum();
        let value = match chart.analytic_partial(u, alpha) {
            Some(v) => v,
            None => {
                let h = fd_step(total.max(1), scale);
                let reach = 2.0 * h * 3.0;
                if !chart.contains(u, reach) {
                    return Err(GeoError::EvaluationDomain {
                        value: u[0],
                        order: total,
                    });
                }
                if total == 0 {
                    chart.eval(u)
                } else {
                    let fine = fd_partial(chart, u, alpha, h);
                    let coarse = fd_partial(chart, u, alpha, 2.0 * h);
                    let merged = (&fine * 16.0 - &coarse) / 15.0;
                    let scale = merged.amax().max(entries[0].amax()).max(1.0);
                    let rounding =
                        30.0 * f64::EPSILON * scale / h.powi(total as i32);
                    let est = (&merged - &fine).amax().max(rounding);
                    if est > accuracy[total] {
                        accuracy[total] = est;
                    }
                    merged
                }
            }
        };
        entries.push(value);
    }
    // Reliability degrades with the order: make the estimates monotone.
    for k in 1..=order {
        if accuracy[k] < accuracy[k - 1] {
            accuracy[k] = accuracy[k - 1];
        }
    }
    Ok(ImmersionJet {
        u: u.to_vec(),
        order,
        alphas,
        entries,
        accuracy,
    })
}

/// Derivatives of `s -> f(u + s X)` at `s = 0`, contracted from the jet
/// table.
pub fn directional_jets(
    chart: &ImmersionChart,
    u: &[f64],
    direction: &DVector<f64>,
    order: usize,
) -> Result<Vec<DVector<f64>>> {
    let jet = immersion_jet(chart, u, order)?;
    let mut out = Vec::with_capacity(order);
    for k in 1..=order {
        let vectors: Vec<&DVector<f64>> = (0..k).map(|_| direction).collect();
        out.push(jet.contract(&vectors));
    }
    Ok(out)
}

/// Derivatives of the composite `t -> f(u(t))` up to order 4, from the
/// chart jet at `u(t)` and the curve derivatives `du[k] = d^{k+1} u/dt^{k+1}`.
pub fn compose_derivatives(jet: &ImmersionJet, du: &[DVector<f64>], order: usize) -> Vec<DVector<f64>> {
    assert!(order >= 1 && order <= 4 && du.len() >= order);
    assert!(jet.order >= order);
    let d1 = &du[0];
    let mut out = Vec::with_capacity(order);
    out.push(jet.contract(&[d1]));
    if order >= 2 {
        let d2 = &du[1];
        out.push(jet.contract(&[d1, d1]) + jet.contract(&[d2]));
    }
    if order >= 3 {
        let d2 = &du[1];
        let d3 = &du[2];
        out.push(
            jet.contract(&[d1, d1, d1]) + jet.contract(&[d2, d1]) * 3.0 + jet.contract(&[d3]),
        );
    }
    if order >= 4 {
        let d2 = &du[1];
        let d3 = &du[2];
        let d4 = &du[3];
        out.push(
            jet.contract(&[d1, d1, d1, d1])
                + jet.contract(&[d2, d1, d1]) * 6.0
                + jet.contract(&[d2, d2]) * 3.0
                + jet.contract(&[d3, d1]) * 4.0
                + jet.contract(&[d4]),
        );
    }
    out
}
