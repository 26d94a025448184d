//! Frenet apparatus, osculating order, curvature functions and helix
//! classification for non-null curves under an indefinite metric.
//!
//! The frame recursion implemented here is
//!
//! ```text
//! V_1' =  eps_2 k_1 V_2
//! V_i' = -eps_{i-1} k_{i-1} V_{i-1} + eps_{i+1} k_i V_{i+1}
//! V_d' = -eps_{d-1} k_{d-1} V_{d-1}
//! ```
//!
//! with `eps_i = <V_i, V_i> = ±1` and the conventions `k_0 = k_d = 0`.
//! Curvature functions are taken positive; the sign freedom is pushed into
//! the orientation of the next frame vector.

use alloc::string::String;
use alloc::vec::Vec;
use nalgebra::DVector;

use crate::chart::{ImmersionChart, ParamCurve};
use crate::error::GeoError;
use crate::jets::{self, compose_derivatives, curve_jet, Curve, CurveJet};
use crate::linalg::MetricSignature;
use crate::ode::{self, OdeField, OdeOptions, OdeSolution};
use crate::tolerances::Tolerances;
use crate::Result;

#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use num_traits::Float;

impl<'a, T: Curve + ?Sized> Curve for &'a T {
    fn ambient_dim(&self) -> usize {
        (**self).ambient_dim()
    }
    fn point(&self, t: f64) -> DVector<f64> {
        (**self).point(t)
    }
    fn derivative(&self, t: f64, order: usize) -> Option<DVector<f64>> {
        (**self).derivative(t, order)
    }
    fn domain(&self) -> (f64, f64) {
        (**self).domain()
    }
}

impl<T: Curve + ?Sized> Curve for alloc::boxed::Box<T> {
    fn ambient_dim(&self) -> usize {
        (**self).ambient_dim()
    }
    fn point(&self, t: f64) -> DVector<f64> {
        (**self).point(t)
    }
    fn derivative(&self, t: f64, order: usize) -> Option<DVector<f64>> {
        (**self).derivative(t, order)
    }
    fn domain(&self) -> (f64, f64) {
        (**self).domain()
    }
}

/// Image of a parameter-space curve under an immersion, with closed-form
/// derivatives whenever both the path and the chart provide them.
pub struct AmbientCurve<'a> {
    pub chart: &'a ImmersionChart,
    pub path: &'a dyn ParamCurve,
}

impl<'a> Curve for AmbientCurve<'a> {
    fn ambient_dim(&self) -> usize {
        self.chart.ambient_dim()
    }

    fn point(&self, t: f64) -> DVector<f64> {
        let u = self.path.point(t);
        self.chart.eval(u.as_slice())
    }

    fn derivative(&self, t: f64, order: usize) -> Option<DVector<f64>> {
        if order == 0 {
            return Some(self.point(t));
        }
        if order > jets::MAX_IMMERSION_ORDER {
            return None;
        }
        let u = self.path.point(t);
        let mut du = Vec::with_capacity(order);
        for k in 1..=order {
            du.push(self.path.derivative(t, k)?);
        }
        let jet = jets::immersion_jet(self.chart, u.as_slice(), order).ok()?;
        Some(compose_derivatives(&jet, &du, order).pop().expect("order >= 1"))
    }

    fn domain(&self) -> (f64, f64) {
        self.path.domain()
    }
}

/// Speed field `dt/ds = 1 / |<gamma'(t), gamma'(t)>|^(1/2)`, used to invert
/// the arclength map. Fails with `NullSegment` when the tangent degenerates.
struct InverseSpeed<'a, C: Curve> {
    curve: &'a C,
    sig: MetricSignature,
    tol_null: f64,
}

impl<'a, C: Curve> InverseSpeed<'a, C> {
    fn speed(&self, t: f64) -> Result<f64> {
        let d1 = match self.curve.derivative(t, 1) {
            Some(d) => d,
            None => curve_jet(self.curve, t, 1)?.derivatives.remove(0),
        };
        let sq = self.sig.norm_sq(&d1);
        let euclid = d1.norm_squared();
        if euclid == 0.0 || sq.abs() <= self.tol_null * euclid {
            return Err(GeoError::NullSegment { t });
        }
        Ok(sq.abs().sqrt())
    }
}

impl<'a, C: Curve> OdeField for InverseSpeed<'a, C> {
    fn dim(&self) -> usize {
        1
    }
    fn eval(&self, _s: f64, y: &DVector<f64>) -> Result<DVector<f64>> {
        Ok(DVector::from_element(1, 1.0 / self.speed(y[0])?))
    }
}

/// A curve reparametrized to unit pseudo-speed: `|<eta'(s), eta'(s)>| = 1`.
///
/// Derivatives are assembled from base-curve jets through the inverse
/// function rule and Faà di Bruno composition, so closed-form bases yield
/// closed-form-quality jets of the reparametrized curve.
pub struct UnitSpeedCurve<C: Curve> {
    base: C,
    sig: MetricSignature,
    causal_sign: f64,
    forward: OdeSolution,
    backward: OdeSolution,
    s_range: (f64, f64),
}

impl<C: Curve> UnitSpeedCurve<C> {
    pub fn causal_sign(&self) -> f64 {
        self.causal_sign
    }

    pub fn signature(&self) -> &MetricSignature {
        &self.sig
    }

    pub fn base(&self) -> &C {
        &self.base
    }

    /// Base parameter corresponding to arclength `s`.
    pub fn t_of_s(&self, s: f64) -> Result<f64> {
        let field = InverseSpeed {
            curve: &self.base,
            sig: self.sig,
            tol_null: 1e-10,
        };
        let sol = if s >= 0.0 { &self.forward } else { &self.backward };
        Ok(sol.eval(&field, s)?[0])
    }

    fn jet_data(&self, s: f64, order: usize) -> Result<(CurveJet, Vec<f64>)> {
        let t = self.t_of_s(s)?;
        let jet = curve_jet(&self.base, t, order)?;
        // sigma^{(j)} by Leibniz on <gamma', gamma'>.
        let mut sigma = alloc::vec![0.0; order];
        for j in 0..order {
            let mut acc = 0.0;
            for i in 0..=j {
                let binom = binomial(j, i);
                // Guard: only derivatives up to `order` exist; the Leibniz
                // sum for sigma^{(j)}, j <= order - 1, needs at most that.
                acc += binom * self.sig.dot(jet.derivative(1 + i), jet.derivative(1 + j - i));
            }
            sigma[j] = acc;
        }
        Ok((jet, sigma))
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

impl<C: Curve> Curve for UnitSpeedCurve<C> {
    fn ambient_dim(&self) -> usize {
        self.base.ambient_dim()
    }

    fn point(&self, s: f64) -> DVector<f64> {
        let t = self.t_of_s(s).expect("arclength table covers the domain");
        self.base.point(t)
    }

    fn derivative(&self, s: f64, order: usize) -> Option<DVector<f64>> {
        if order == 0 {
            return Some(self.point(s));
        }
        if order > jets::MAX_CURVE_ORDER {
            return None;
        }
        let (jet, sigma) = self.jet_data(s, order).ok()?;
        let eps = self.causal_sign;
        // v and its t-derivatives from v^2 = eps * sigma.
        let v = (eps * sigma[0]).sqrt();
        let mut dv = alloc::vec![0.0; order];
        dv[0] = v;
        if order >= 2 {
            dv[1] = eps * sigma[1] / (2.0 * v);
        }
        if order >= 3 {
            dv[2] = (eps * sigma[2] - 2.0 * dv[1] * dv[1]) / (2.0 * v);
        }
        if order >= 4 {
            dv[3] = (eps * sigma[3] - 6.0 * dv[1] * dv[2]) / (2.0 * v);
        }
        if order >= 5 {
            dv[4] = (eps * sigma[4] - 6.0 * dv[2] * dv[2] - 8.0 * dv[1] * dv[3]) / (2.0 * v);
        }
        // Inverse-function derivatives of t(s).
        let mut dt = alloc::vec![0.0; order];
        dt[0] = 1.0 / v;
        if order >= 2 {
            dt[1] = -dv[1] / v.powi(3);
        }
        if order >= 3 {
            dt[2] = (3.0 * dv[1] * dv[1] - v * dv[2]) / v.powi(5);
        }
        if order >= 4 {
            dt[3] = (10.0 * v * dv[1] * dv[2] - v * v * dv[3] - 15.0 * dv[1].powi(3)) / v.powi(7);
        }
        if order >= 5 {
            dt[4] = (105.0 * dv[1].powi(4) - 105.0 * v * dv[1] * dv[1] * dv[2]
                + 10.0 * v * v * dv[2] * dv[2]
                + 15.0 * v * v * dv[1] * dv[3]
                - v.powi(3) * dv[4])
                / v.powi(9);
        }
        // Faà di Bruno composition eta(s) = gamma(t(s)).
        let g = |k: usize| jet.derivative(k);
        let out = match order {
            1 => g(1) * dt[0],
            2 => g(2) * (dt[0] * dt[0]) + g(1) * dt[1],
            3 => g(3) * dt[0].powi(3) + g(2) * (3.0 * dt[0] * dt[1]) + g(1) * dt[2],
            4 => {
                g(4) * dt[0].powi(4)
                    + g(3) * (6.0 * dt[0] * dt[0] * dt[1])
                    + g(2) * (3.0 * dt[1] * dt[1] + 4.0 * dt[0] * dt[2])
                    + g(1) * dt[3]
            }
            5 => {
                g(5) * dt[0].powi(5)
                    + g(4) * (10.0 * dt[0].powi(3) * dt[1])
                    + g(3) * (15.0 * dt[0] * dt[1] * dt[1] + 10.0 * dt[0] * dt[0] * dt[2])
                    + g(2) * (10.0 * dt[1] * dt[2] + 5.0 * dt[0] * dt[3])
                    + g(1) * dt[4]
            }
            _ => unreachable!(),
        };
        Some(out)
    }

    fn domain(&self) -> (f64, f64) {
        self.s_range
    }
}

/// Reparametrizes `curve` by pseudo-arclength around `t0`, covering
/// `s` in `[-span/2 - margin, span/2 + margin]` with `eta(0) = gamma(t0)`.
///
/// The tangent must keep a fixed non-null causal character on the span;
/// a degenerate tangent surfaces as `NullSegment`.
pub fn arclength_reparametrize<C: Curve>(
    curve: C,
    t0: f64,
    span: f64,
    sig: MetricSignature,
) -> Result<UnitSpeedCurve<C>> {
    let tol_null = 1e-10;
    let margin = 0.05 * span + 0.25;
    let half = span / 2.0 + margin;
    let causal_sign = {
        let field = InverseSpeed {
            curve: &curve,
            sig,
            tol_null,
        };
        field.speed(t0)?; // fail early on a null start
        let d1 = match curve.derivative(t0, 1) {
            Some(d) => d,
            None => curve_jet(&curve, t0, 1)?.derivatives.remove(0),
        };
        if sig.norm_sq(&d1) > 0.0 {
            1.0
        } else {
            -1.0
        }
    };
    let opts = OdeOptions::default();
    let start = DVector::from_element(1, t0);
    let (forward, backward) = {
        let field = InverseSpeed {
            curve: &curve,
            sig,
            tol_null,
        };
        (
            ode::integrate(&field, 0.0, &start, half, &opts)?,
            ode::integrate(&field, 0.0, &start, -half, &opts)?,
        )
    };
    Ok(UnitSpeedCurve {
        base: curve,
        sig,
        causal_sign,
        forward,
        backward,
        s_range: (-half, half),
    })
}

/// Frenet data of a non-null curve at one arclength value.
#[derive(Debug, Clone)]
pub struct FrenetApparatus {
    pub s: f64,
    /// Osculating order `d`.
    pub order: usize,
    /// Frame vectors `V_1 .. V_d`.
    pub frame: Vec<DVector<f64>>,
    /// Signs `eps_i = <V_i, V_i>`.
    pub signs: Vec<f64>,
    /// Curvature functions `k_1 .. k_{d-1}`, positive by construction.
    pub curvatures: Vec<f64>,
    /// Arclength derivatives `V_i'` of the frame vectors.
    pub frame_derivatives: Vec<DVector<f64>>,
    /// Residuals of the frame recursion, one per frame vector.
    pub recursion_residuals: Vec<f64>,
}

/// Gram-Schmidt frame of the first `count` derivatives, with dependence and
/// null checks driven by the jet accuracy estimates. Returns the frame and
/// the detected order (the count actually achieved when `strict` is false).
fn derivative_frame(
    jet: &CurveJet,
    sig: &MetricSignature,
    count: usize,
    tols: &Tolerances,
    strict: bool,
) -> Result<(Vec<DVector<f64>>, Vec<f64>)> {
    let mut frame: Vec<DVector<f64>> = Vec::new();
    let mut signs: Vec<f64> = Vec::new();
    for k in 1..=count {
        let v = jet.derivative(k);
        let mut w = v.clone();
        for (u, &sgn) in frame.iter().zip(signs.iter()) {
            let alpha = sgn * sig.dot(&w, u);
            w -= u * alpha;
        }
        let noise = 10.0 * jet.accuracy[k - 1];
        let threshold = (tols.rank * v.norm()).max(noise);
        if w.norm() <= threshold {
            if strict {
                return Err(GeoError::RankDeficient { index: k - 1 });
            }
            return Ok((frame, signs));
        }
        let self_ip = sig.norm_sq(&w);
        let normalized = self_ip / w.norm_squared();
        if normalized.abs() <= tols.null {
            return Err(GeoError::NullIntermediate {
                index: k - 1,
                value: normalized,
            });
        }
        let scale = 1.0 / self_ip.abs().sqrt();
        frame.push(&w * scale);
        signs.push(if self_ip > 0.0 { 1.0 } else { -1.0 });
    }
    Ok((frame, signs))
}

/// Computes the Frenet apparatus of a unit-speed curve at arclength `s`.
///
/// The osculating order is the largest `d <= max_order` for which the
/// derivatives `gamma', ..., gamma^(d)` stay numerically independent and all
/// curvature functions clear `tols.curvature`; curvatures inside the dead
/// band `[curvature/10, curvature]` raise `OrderAmbiguous`.
pub fn frenet_apparatus(
    curve: &dyn Curve,
    sig: &MetricSignature,
    s: f64,
    max_order: usize,
    tols: &Tolerances,
) -> Result<FrenetApparatus> {
    let max_order = max_order.min(sig.dim()).min(jets::MAX_CURVE_ORDER - 1);
    let jet = curve_jet(curve, s, (max_order + 1).min(jets::MAX_CURVE_ORDER))?;
    let speed = sig.norm_sq(jet.derivative(1)).abs();
    if (speed - 1.0).abs() > 1e-6 {
        return Err(GeoError::InvalidGeometry {
            reason: String::from("frenet apparatus requires a unit-speed curve"),
        });
    }
    let (frame, signs) = derivative_frame(&jet, sig, max_order, tols, false)?;
    let d = frame.len();
    debug_assert!(d >= 1);

    // Frame derivatives by a fourth-order stencil over the aligned frame
    // construction at neighboring arclengths.
    let h = jets::fd_step(1, s.abs());
    let offsets = [-2.0, -1.0, 1.0, 2.0];
    let weights = [1.0, -8.0, 8.0, -1.0];
    let mut derivs: Vec<DVector<f64>> = alloc::vec![DVector::zeros(jet.position.len()); d];
    for (&o, &c) in offsets.iter().zip(weights.iter()) {
        let jet_o = curve_jet(curve, s + o * h, d)?;
        let (mut frame_o, _) = derivative_frame(&jet_o, sig, d, tols, true)?;
        for i in 0..d {
            // Continuity of orientation with the center frame.
            if frame_o[i].dot(&frame[i]) < 0.0 {
                frame_o[i] = -&frame_o[i];
            }
            derivs[i] += &frame_o[i] * c;
        }
    }
    for v in derivs.iter_mut() {
        *v /= 12.0 * h;
    }

    // Curvatures with positive orientation: flip V_{i+1} (and its
    // derivative) when the extracted curvature is negative.
    let mut frame = frame;
    let mut curvatures = Vec::with_capacity(d.saturating_sub(1));
    for i in 0..d.saturating_sub(1) {
        let mut k = sig.dot(&derivs[i], &frame[i + 1]);
        if k < 0.0 {
            frame[i + 1] = -&frame[i + 1];
            derivs[i + 1] = -&derivs[i + 1];
            k = -k;
        }
        curvatures.push(k);
    }

    // Dead-band handling for the osculating order.
    if let Some(pos) = curvatures.iter().position(|&k| k <= tols.curvature) {
        let k = curvatures[pos];
        if k > tols.curvature / 10.0 {
            return Err(GeoError::OrderAmbiguous { value: k });
        }
        frame.truncate(pos + 1);
        derivs.truncate(pos + 1);
        curvatures.truncate(pos);
    }
    let d = frame.len();
    let signs: Vec<f64> = signs[..d].to_vec();

    // Residuals of the frame recursion with k_0 = k_d = 0.
    let mut residuals = Vec::with_capacity(d);
    for i in 0..d {
        let mut expect = DVector::zeros(jet.position.len());
        if i > 0 {
            expect -= &frame[i - 1] * (signs[i - 1] * curvatures[i - 1]);
        }
        if i + 1 < d {
            expect += &frame[i + 1] * (signs[i + 1] * curvatures[i]);
        }
        residuals.push((&derivs[i] - expect).norm());
    }

    Ok(FrenetApparatus {
        s,
        order: d,
        frame,
        signs,
        curvatures,
        frame_derivatives: derivs,
        recursion_residuals: residuals,
    })
}

/// Helix classification of a unit-speed curve over a sampled span.
#[derive(Debug, Clone)]
pub struct WCurveVerdict {
    pub is_w_curve: bool,
    pub rank: usize,
    pub curvature_means: Vec<f64>,
    pub curvature_deviations: Vec<f64>,
    /// Max residual of `gamma''' + eps_1 eps_2 k_1^2 gamma'` for rank-2
    /// curves.
    pub third_derivative_residual: Option<f64>,
    /// Max residual of `gamma'''' + eps_2 (eps_1 k_1^2 + eps_3 k_2^2)
    /// gamma''` for rank-3 curves.
    pub fourth_derivative_residual: Option<f64>,
}

/// Classifies a unit-speed curve as a helix (W-curve) by testing curvature
/// constancy over `samples` arclengths spread across `span`.
pub fn classify_w_curve(
    curve: &dyn Curve,
    sig: &MetricSignature,
    samples: usize,
    span: f64,
    tols: &Tolerances,
) -> Result<WCurveVerdict> {
    assert!(samples >= 2, "classification needs at least two samples");
    let mut apparatuses = Vec::with_capacity(samples);
    let mut orders = Vec::with_capacity(samples);
    for j in 0..samples {
        let s = -span / 2.0 + span * j as f64 / (samples - 1) as f64;
        let ap = frenet_apparatus(curve, sig, s, 4, tols)?;
        orders.push(ap.order);
        apparatuses.push(ap);
    }
    let d = orders[0];
    if orders.iter().any(|&o| o != d) {
        return Err(GeoError::InconsistentOrder { observed: orders });
    }
    let n_curv = d.saturating_sub(1);
    let mut means = alloc::vec![0.0; n_curv];
    for ap in &apparatuses {
        for i in 0..n_curv {
            means[i] += ap.curvatures[i];
        }
    }
    for m in means.iter_mut() {
        *m /= samples as f64;
    }
    let mut deviations = alloc::vec![0.0f64; n_curv];
    for ap in &apparatuses {
        for i in 0..n_curv {
            deviations[i] = deviations[i].max((ap.curvatures[i] - means[i]).abs());
        }
    }
    let is_w = (0..n_curv).all(|i| deviations[i] <= tols.constancy * (1.0 + means[i]));

    let mut third = None;
    let mut fourth = None;
    if d == 2 {
        let mut worst = 0.0f64;
        for ap in &apparatuses {
            let jet = curve_jet(curve, ap.s, 3)?;
            let coef = ap.signs[0] * ap.signs[1] * ap.curvatures[0] * ap.curvatures[0];
            let resid = (jet.derivative(3) + jet.derivative(1) * coef).norm();
            worst = worst.max(resid);
        }
        third = Some(worst);
    }
    if d == 3 {
        let mut worst = 0.0f64;
        for ap in &apparatuses {
            let jet = curve_jet(curve, ap.s, 4)?;
            let coef = ap.signs[1]
                * (ap.signs[0] * ap.curvatures[0] * ap.curvatures[0]
                    + ap.signs[2] * ap.curvatures[1] * ap.curvatures[1]);
            let resid = (jet.derivative(4) + jet.derivative(2) * coef).norm();
            worst = worst.max(resid);
        }
        fourth = Some(worst);
    }

    Ok(WCurveVerdict {
        is_w_curve: is_w,
        rank: d,
        curvature_means: means,
        curvature_deviations: deviations,
        third_derivative_residual: third,
        fourth_derivative_residual: fourth,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jets::ClosedFormCurve;
    use alloc::boxed::Box;
    use approx::assert_abs_diff_eq;
    use nalgebra::dvector;

    fn unit_circle() -> ClosedFormCurve {
        ClosedFormCurve::new(
            2,
            Box::new(|t: f64, k: usize| {
                let phase = k as f64 * core::f64::consts::FRAC_PI_2;
                dvector![(t + phase).cos(), (t + phase).sin()]
            }),
        )
    }

    fn e21_hyperbola() -> ClosedFormCurve {
        ClosedFormCurve::new(
            2,
            Box::new(|t: f64, k: usize| {
                if k % 2 == 0 {
                    dvector![t.cosh(), t.sinh()]
                } else {
                    dvector![t.sinh(), t.cosh()]
                }
            }),
        )
    }

    /// Unit-speed Euclidean helix with radius `a` and pitch `b`.
    fn helix(a: f64, b: f64) -> ClosedFormCurve {
        let omega = 1.0 / (a * a + b * b).sqrt();
        ClosedFormCurve::new(
            3,
            Box::new(move |s: f64, k: usize| {
                let phase = k as f64 * core::f64::consts::FRAC_PI_2;
                let w = omega;
                let c = a * w.powi(k as i32) * (w * s + phase).cos();
                let si = a * w.powi(k as i32) * (w * s + phase).sin();
                let z = match k {
                    0 => b * w * s,
                    1 => b * w,
                    _ => 0.0,
                };
                dvector![c, si, z]
            }),
        )
    }

    /// Unit-speed spacelike helix in E^3_1 around the timelike axis.
    fn lorentz_helix(a: f64, b: f64) -> ClosedFormCurve {
        let omega = 1.0 / (a * a - b * b).sqrt();
        ClosedFormCurve::new(
            3,
            Box::new(move |s: f64, k: usize| {
                let phase = k as f64 * core::f64::consts::FRAC_PI_2;
                let w = omega;
                let t_axis = match k {
                    0 => b * w * s,
                    1 => b * w,
                    _ => 0.0,
                };
                dvector![
                    t_axis,
                    a * w.powi(k as i32) * (w * s + phase).cos(),
                    a * w.powi(k as i32) * (w * s + phase).sin()
                ]
            }),
        )
    }

    #[test]
    fn straight_line_has_order_one() {
        let line = ClosedFormCurve::new(
            2,
            Box::new(|t: f64, k: usize| match k {
                0 => dvector![t, 0.0],
                1 => dvector![1.0, 0.0],
                _ => dvector![0.0, 0.0],
            }),
        );
        let sig = MetricSignature::euclidean(2);
        let ap = frenet_apparatus(&line, &sig, 0.3, 4, &Tolerances::default()).unwrap();
        assert_eq!(ap.order, 1);
        assert!(ap.curvatures.is_empty());
    }

    #[test]
    fn circle_frenet_data() {
        let sig = MetricSignature::euclidean(2);
        let ap = frenet_apparatus(&unit_circle(), &sig, 0.4, 4, &Tolerances::default()).unwrap();
        assert_eq!(ap.order, 2);
        assert_abs_diff_eq!(ap.curvatures[0], 1.0, epsilon = 1e-9);
        assert_eq!(ap.signs, alloc::vec![1.0, 1.0]);
        for r in &ap.recursion_residuals {
            assert!(*r < 1e-8, "residual {r:.3e}");
        }
    }

    #[test]
    fn hyperbola_frenet_data_has_timelike_normal() {
        let sig = MetricSignature::lorentzian(2);
        let ap =
            frenet_apparatus(&e21_hyperbola(), &sig, 0.2, 4, &Tolerances::default()).unwrap();
        assert_eq!(ap.order, 2);
        assert_abs_diff_eq!(ap.curvatures[0], 1.0, epsilon = 1e-9);
        assert_eq!(ap.signs, alloc::vec![1.0, -1.0]);
        for r in &ap.recursion_residuals {
            assert!(*r < 1e-8, "residual {r:.3e}");
        }
    }

    #[test]
    fn helix_frenet_matches_classical_formulas() {
        // k_1 = a / (a^2 + b^2), k_2 = b / (a^2 + b^2).
        let (a, b) = (1.0, 0.5);
        let sig = MetricSignature::euclidean(3);
        let ap = frenet_apparatus(&helix(a, b), &sig, 0.7, 4, &Tolerances::default()).unwrap();
        assert_eq!(ap.order, 3);
        let denom = a * a + b * b;
        assert_abs_diff_eq!(ap.curvatures[0], a / denom, epsilon = 1e-8);
        assert_abs_diff_eq!(ap.curvatures[1], b / denom, epsilon = 1e-8);
        for r in &ap.recursion_residuals {
            assert!(*r < 1e-7, "residual {r:.3e}");
        }
    }

    #[test]
    fn lorentz_helix_frenet_signs() {
        let sig = MetricSignature::lorentzian(3);
        let ap = frenet_apparatus(&lorentz_helix(1.2, 0.5), &sig, 0.3, 4, &Tolerances::default())
            .unwrap();
        assert_eq!(ap.order, 3);
        assert_eq!(ap.signs, alloc::vec![1.0, 1.0, -1.0]);
        assert!(ap.curvatures.iter().all(|&k| k > 0.0));
        for r in &ap.recursion_residuals {
            assert!(*r < 1e-7, "residual {r:.3e}");
        }
    }

    #[test]
    fn circle_is_rank2_w_curve() {
        let sig = MetricSignature::euclidean(2);
        let verdict =
            classify_w_curve(&unit_circle(), &sig, 9, 2.0, &Tolerances::default()).unwrap();
        assert!(verdict.is_w_curve);
        assert_eq!(verdict.rank, 2);
        assert!(verdict.third_derivative_residual.unwrap() < 1e-8);
    }

    #[test]
    fn hyperbola_third_derivative_identity_has_flipped_sign() {
        // eps_2 = -1 makes gamma''' = +k_1^2 gamma'.
        let sig = MetricSignature::lorentzian(2);
        let verdict =
            classify_w_curve(&e21_hyperbola(), &sig, 9, 1.0, &Tolerances::default()).unwrap();
        assert!(verdict.is_w_curve);
        assert_eq!(verdict.rank, 2);
        assert!(verdict.third_derivative_residual.unwrap() < 1e-8);
    }

    #[test]
    fn helices_are_rank3_w_curves() {
        let sig3 = MetricSignature::euclidean(3);
        let v = classify_w_curve(&helix(1.0, 0.5), &sig3, 9, 2.0, &Tolerances::default()).unwrap();
        assert!(v.is_w_curve);
        assert_eq!(v.rank, 3);
        assert!(v.fourth_derivative_residual.unwrap() < 1e-6);

        let sigl = MetricSignature::lorentzian(3);
        let v = classify_w_curve(
            &lorentz_helix(1.2, 0.5),
            &sigl,
            9,
            2.0,
            &Tolerances::default(),
        )
        .unwrap();
        assert!(v.is_w_curve);
        assert_eq!(v.rank, 3);
        assert!(v.fourth_derivative_residual.unwrap() < 1e-6);
    }

    #[test]
    fn reparametrized_ellipse_is_not_a_w_curve() {
        let ellipse = ClosedFormCurve::new(
            2,
            Box::new(|t: f64, k: usize| {
                let phase = k as f64 * core::f64::consts::FRAC_PI_2;
                dvector![2.0 * (t + phase).cos(), (t + phase).sin()]
            }),
        );
        let sig = MetricSignature::euclidean(2);
        let unit = arclength_reparametrize(ellipse, 0.3, 2.0, sig).unwrap();
        let verdict = classify_w_curve(&unit, &sig, 9, 2.0, &Tolerances::default()).unwrap();
        assert!(!verdict.is_w_curve);
        assert_eq!(verdict.rank, 2);

        // Independent oracle: plane-curve curvature of the ellipse.
        let t0 = unit.t_of_s(0.5).unwrap();
        let (x1, y1) = (-2.0 * t0.sin(), t0.cos());
        let (x2, y2) = (-2.0 * t0.cos(), -t0.sin());
        let expected = (x1 * y2 - y1 * x2).abs() / (x1 * x1 + y1 * y1).powf(1.5);
        let ap = frenet_apparatus(&unit, &sig, 0.5, 3, &Tolerances::default()).unwrap();
        assert_abs_diff_eq!(ap.curvatures[0], expected, epsilon = 1e-8);
    }

    #[test]
    fn arclength_reparametrization_examples() {
        let sig2 = MetricSignature::euclidean(2);
        // gamma(t) = (2t, 0): eta(s) = (s, 0) up to the base point.
        let line = ClosedFormCurve::new(
            2,
            Box::new(|t: f64, k: usize| match k {
                0 => dvector![2.0 * t, 0.0],
                1 => dvector![2.0, 0.0],
                _ => dvector![0.0, 0.0],
            }),
        );
        let unit = arclength_reparametrize(line, 0.0, 2.0, sig2).unwrap();
        let p = unit.point(0.8);
        assert_abs_diff_eq!(p[0], 0.8, epsilon = 1e-10);
        assert_abs_diff_eq!(sig2.norm_sq(&unit.derivative(0.8, 1).unwrap()), 1.0, epsilon = 1e-12);

        // Speed-3 circle: period becomes tau.
        let fast_circle = ClosedFormCurve::new(
            2,
            Box::new(|t: f64, k: usize| {
                let w = 3.0f64;
                let phase = k as f64 * core::f64::consts::FRAC_PI_2;
                dvector![
                    w.powi(k as i32) * (w * t + phase).cos(),
                    w.powi(k as i32) * (w * t + phase).sin()
                ]
            }),
        );
        let unit = arclength_reparametrize(fast_circle, 0.0, 2.2 * core::f64::consts::TAU, sig2)
            .unwrap();
        let p0 = unit.point(0.0);
        let p1 = unit.point(core::f64::consts::TAU);
        assert_abs_diff_eq!((p0 - p1).norm(), 0.0, epsilon = 1e-9);

        // The E^2_1 hyperbola is already unit speed.
        let sig21 = MetricSignature::lorentzian(2);
        let unit = arclength_reparametrize(e21_hyperbola(), 0.0, 1.5, sig21).unwrap();
        assert_abs_diff_eq!(unit.t_of_s(0.6).unwrap(), 0.6, epsilon = 1e-10);
        assert_eq!(unit.causal_sign(), 1.0);
    }

    #[test]
    fn unit_speed_jets_match_closed_form() {
        // Reparametrize the speed-2 circle and compare all derivative orders
        // against the closed-form unit circle.
        let sig = MetricSignature::euclidean(2);
        let fast = ClosedFormCurve::new(
            2,
            Box::new(|t: f64, k: usize| {
                let w = 2.0f64;
                let phase = k as f64 * core::f64::consts::FRAC_PI_2;
                dvector![
                    w.powi(k as i32) * (w * t + phase).cos(),
                    w.powi(k as i32) * (w * t + phase).sin()
                ]
            }),
        );
        let unit = arclength_reparametrize(fast, 0.0, 2.0, sig).unwrap();
        let slow = unit_circle();
        for &s in &[-0.7, 0.0, 0.9] {
            for k in 1..=5 {
                let ours = unit.derivative(s, k).unwrap();
                let reference = slow.derivative(s, k).unwrap();
                assert_abs_diff_eq!((ours - reference).amax(), 0.0, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn null_tangent_is_rejected() {
        let sig = MetricSignature::lorentzian(2);
        let null_line = ClosedFormCurve::new(
            2,
            Box::new(|t: f64, k: usize| match k {
                0 => dvector![t, t],
                1 => dvector![1.0, 1.0],
                _ => dvector![0.0, 0.0],
            }),
        );
        let err = match arclength_reparametrize(null_line, 0.0, 1.0, sig) {
            Err(e) => e,
            Ok(_) => panic!("null tangent must be rejected"),
        };
        assert!(matches!(err, GeoError::NullSegment { .. }));
    }

    #[test]
    fn affine_reparametrization_leaves_invariants_unchanged() {
        // Pre-compose the ellipse with t -> 0.7 t - 0.3 and compare the
        // apparatus at matched points.
        let sig = MetricSignature::euclidean(2);
        let plain = ClosedFormCurve::new(
            2,
            Box::new(|t: f64, k: usize| {
                let phase = k as f64 * core::f64::consts::FRAC_PI_2;
                dvector![2.0 * (t + phase).cos(), (t + phase).sin()]
            }),
        );
        let squeezed = ClosedFormCurve::new(
            2,
            Box::new(|t: f64, k: usize| {
                let a = 0.7f64;
                let arg = a * t - 0.3;
                let phase = k as f64 * core::f64::consts::FRAC_PI_2;
                dvector![
                    2.0 * a.powi(k as i32) * (arg + phase).cos(),
                    a.powi(k as i32) * (arg + phase).sin()
                ]
            }),
        );
        // Matched base points: t = 0.3 on plain corresponds to
        // t' = (0.3 + 0.3)/0.7 on squeezed.
        let u1 = arclength_reparametrize(plain, 0.3, 1.0, sig).unwrap();
        let u2 = arclength_reparametrize(squeezed, 0.6 / 0.7, 1.0, sig).unwrap();
        for &s in &[-0.3, 0.0, 0.4] {
            let a1 = frenet_apparatus(&u1, &sig, s, 3, &Tolerances::default()).unwrap();
            let a2 = frenet_apparatus(&u2, &sig, s, 3, &Tolerances::default()).unwrap();
            assert_eq!(a1.order, a2.order);
            assert_abs_diff_eq!(a1.curvatures[0], a2.curvatures[0], epsilon = 1e-8);
        }
    }

    #[test]
    fn inflection_produces_inconsistent_order() {
        // Arclength-parametrized cubic-like arc: curvature vanishes at the
        // inflection, so the osculating order differs across samples.
        let cubic = ClosedFormCurve::new(
            2,
            Box::new(|t: f64, k: usize| match k {
                0 => dvector![t, t * t * t / 3.0],
                1 => dvector![1.0, t * t],
                2 => dvector![0.0, 2.0 * t],
                _ => dvector![0.0, if k == 3 { 2.0 } else { 0.0 }],
            }),
        );
        let sig = MetricSignature::euclidean(2);
        let unit = arclength_reparametrize(cubic, 0.0, 1.0, sig).unwrap();
        let err = classify_w_curve(&unit, &sig, 5, 1.0, &Tolerances::default()).unwrap_err();
        assert!(matches!(err, GeoError::InconsistentOrder { .. }), "{err:?}");
    }

    #[test]
    fn dead_band_curvature_is_ambiguous() {
        // A circle of radius 2e6 has curvature 5e-7, inside the dead band
        // [1e-7, 1e-6].
        let big_circle = ClosedFormCurve::new(
            2,
            Box::new(|s: f64, k: usize| {
                let radius = 2.0e6_f64;
                let w = 1.0 / radius;
                let phase = k as f64 * core::f64::consts::FRAC_PI_2;
                dvector![
                    radius * w.powi(k as i32) * (w * s + phase).cos(),
                    radius * w.powi(k as i32) * (w * s + phase).sin()
                ]
            }),
        );
        let sig = MetricSignature::euclidean(2);
        let err = frenet_apparatus(&big_circle, &sig, 0.0, 3, &Tolerances::default()).unwrap_err();
        assert!(matches!(err, GeoError::OrderAmbiguous { .. }), "{err:?}");
    }

    #[test]
    fn null_acceleration_surfaces_as_null_intermediate() {
        // gamma(s) = (s^2/2, s, s^2/2) in E^3_1 is unit spacelike with a
        // null second derivative (1, 0, 1): the frame construction cannot
        // continue past it.
        let curve = ClosedFormCurve::new(
            3,
            Box::new(|s: f64, k: usize| match k {
                0 => dvector![0.5 * s * s, s, 0.5 * s * s],
                1 => dvector![s, 1.0, s],
                2 => dvector![1.0, 0.0, 1.0],
                _ => dvector![0.0, 0.0, 0.0],
            }),
        );
        let sig = MetricSignature::lorentzian(3);
        let err = frenet_apparatus(&curve, &sig, 0.3, 3, &Tolerances::default()).unwrap_err();
        assert!(matches!(err, GeoError::NullIntermediate { .. }), "{err:?}");
    }
}
