//! Adaptive Runge-Kutta integration with dense node storage.
//!
//! The integrator is a Dormand-Prince 5(4) pair with standard PI-free step
//! control. Accepted nodes are stored; between nodes the solution is
//! re-evaluated by re-integrating from the bracketing node with a fixed
//! number of classical RK4 substeps, which keeps the evaluation
//! deterministic and smooth in `t` to machine level — a requirement for the
//! finite-difference jets taken on top of integrated curves.
//!
//! Systems may carry an algebraic constraint; [`OdeField::project`] is
//! applied after every accepted step and after re-evaluation, so drift
//! transverse to the constraint manifold stays at the projection tolerance.

use alloc::vec::Vec;
use nalgebra::DVector;

use crate::error::GeoError;
use crate::Result;

#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use num_traits::Float;

/// Right-hand side of a first-order system, with an optional projection
/// onto a constraint manifold.
pub trait OdeField: Sync {
    fn dim(&self) -> usize;
    fn eval(&self, t: f64, y: &DVector<f64>) -> Result<DVector<f64>>;
    /// Projects `y` back onto the constraint manifold (no-op by default).
    fn project(&self, y: &mut DVector<f64>) -> Result<()> {
        let _ = y;
        Ok(())
    }
}

/// Integration controls.
#[derive(Debug, Clone)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub h_initial: f64,
    pub h_max: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-12,
            atol: 1e-13,
            h_initial: 1e-3,
            h_max: 0.05,
            max_steps: 1_000_000,
        }
    }
}

/// Accepted integration nodes, monotone in `t` (increasing or decreasing).
#[derive(Debug, Clone)]
pub struct OdeSolution {
    pub nodes: Vec<(f64, DVector<f64>)>,
}

impl OdeSolution {
    pub fn t_start(&self) -> f64 {
        self.nodes.first().expect("solution has nodes").0
    }

    pub fn t_end(&self) -> f64 {
        self.nodes.last().expect("solution has nodes").0
    }

    fn forward(&self) -> bool {
        self.t_end() >= self.t_start()
    }

    /// True when `t` lies inside the integrated range.
    pub fn covers(&self, t: f64) -> bool {
        let (a, b) = (self.t_start(), self.t_end());
        if self.forward() {
            (a..=b).contains(&t)
        } else {
            (b..=a).contains(&t)
        }
    }

    /// Index of the node from which `t` is reachable without leaving the
    /// integrated range.
    fn bracket(&self, t: f64) -> usize {
        let fwd = self.forward();
        let mut best = 0;
        for (i, &(ti, _)) in self.nodes.iter().enumerate() {
            let before = if fwd { ti <= t } else { ti >= t };
            if before {
                best = i;
            } else {
                break;
            }
        }
        best
    }

    /// State at `t` by fixed-substep RK4 re-integration from the bracketing
    /// node, followed by one projection. Smooth in `t` and deterministic.
    pub fn eval(&self, field: &dyn OdeField, t: f64) -> Result<DVector<f64>> {
        const SUBSTEPS: usize = 16;
        let idx = self.bracket(t);
        let (t0, ref y0) = self.nodes[idx];
        let mut y = y0.clone();
        let span = t - t0;
        if span != 0.0 {
            let h = span / SUBSTEPS as f64;
            let mut ti = t0;
            for _ in 0..SUBSTEPS {
                y = rk4_step(field, ti, &y, h)?;
                ti += h;
            }
        }
        field.project(&mut y)?;
        Ok(y)
    }
}

fn rk4_step(field: &dyn OdeField, t: f64, y: &DVector<f64>, h: f64) -> Result<DVector<f64>> {
    let k1 = field.eval(t, y)?;
    let k2 = field.eval(t + 0.5 * h, &(y + &k1 * (0.5 * h)))?;
    let k3 = field.eval(t + 0.5 * h, &(y + &k2 * (0.5 * h)))?;
    let k4 = field.eval(t + h, &(y + &k3 * h))?;
    Ok(y + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0))
}

// Dormand-Prince 5(4) coefficients.
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

struct DpStep {
    y5: DVector<f64>,
    error_norm: f64,
}

fn dp_step(field: &dyn OdeField, t: f64, y: &DVector<f64>, h: f64, opts: &OdeOptions) -> Result<DpStep> {
    let mut k: Vec<DVector<f64>> = Vec::with_capacity(7);
    k.push(field.eval(t, y)?);
    for stage in 0..6 {
        let mut arg = y.clone();
        for (j, kj) in k.iter().enumerate() {
            let a = A[stage][j];
            if a != 0.0 {
                arg += kj * (a * h);
            }
        }
        k.push(field.eval(t + C[stage] * h, &arg)?);
    }
    let mut y5 = y.clone();
    let mut y4 = y.clone();
    for (j, kj) in k.iter().enumerate() {
        if B5[j] != 0.0 {
            y5 += kj * (B5[j] * h);
        }
        if B4[j] != 0.0 {
            y4 += kj * (B4[j] * h);
        }
    }
    let mut err_sq = 0.0;
    for i in 0..y.len() {
        let scale = opts.atol + opts.rtol * y[i].abs().max(y5[i].abs());
        let e = (y5[i] - y4[i]) / scale;
        err_sq += e * e;
    }
    let error_norm = (err_sq / y.len() as f64).sqrt();
    Ok(DpStep { y5, error_norm })
}

/// Integrates `field` from `(t0, y0)` to `t_end` (either direction),
/// storing every accepted node.
pub fn integrate(
    field: &dyn OdeField,
    t0: f64,
    y0: &DVector<f64>,
    t_end: f64,
    opts: &OdeOptions,
) -> Result<OdeSolution> {
    let direction = if t_end >= t0 { 1.0 } else { -1.0 };
    let mut t = t0;
    let mut y = y0.clone();
    field.project(&mut y)?;
    let mut nodes = alloc::vec![(t, y.clone())];
    let mut h = opts.h_initial.min(opts.h_max).min((t_end - t0).abs()) * direction;
    if h == 0.0 {
        return Ok(OdeSolution { nodes });
    }
    for _ in 0..opts.max_steps {
        if (t_end - t) * direction <= 0.0 {
            return Ok(OdeSolution { nodes });
        }
        if (t + h - t_end) * direction > 0.0 {
            h = t_end - t;
        }
        let step = dp_step(field, t, &y, h, opts)?;
        if step.error_norm <= 1.0 {
            t += h;
            y = step.y5;
            field.project(&mut y)?;
            nodes.push((t, y.clone()));
        }
        let factor = if step.error_norm == 0.0 {
            5.0
        } else {
            (0.9 * step.error_norm.powf(-0.2)).clamp(0.2, 5.0)
        };
        h = (h * factor).clamp(-opts.h_max, opts.h_max);
        if h.abs() < 1e-14 * (1.0 + t.abs()) {
            return Err(GeoError::SolverFailure {
                reason: alloc::format!("step size collapsed at t = {t}"),
            });
        }
    }
    Err(GeoError::SolverFailure {
        reason: alloc::format!("step budget exhausted at t = {t}"),
    })
}

/// Seven-point Gauss-Legendre quadrature of a scalar function over `[a, b]`.
pub fn gauss7<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    const X: [f64; 7] = [
        -0.949_107_912_342_758_5,
        -0.741_531_185_599_394_5,
        -0.405_845_151_377_397_2,
        0.0,
        0.405_845_151_377_397_2,
        0.741_531_185_599_394_5,
        0.949_107_912_342_758_5,
    ];
    const W: [f64; 7] = [
        0.129_484_966_168_869_7,
        0.279_705_391_489_276_7,
        0.381_830_050_505_118_9,
        0.417_959_183_673_469_4,
        0.381_830_050_505_118_9,
        0.279_705_391_489_276_7,
        0.129_484_966_168_869_7,
    ];
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = 0.0;
    for (&x, &w) in X.iter().zip(W.iter()) {
        acc += w * f(mid + half * x);
    }
    acc * half
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use nalgebra::dvector;

    struct Rotation;

    impl OdeField for Rotation {
        fn dim(&self) -> usize {
            2
        }
        fn eval(&self, _t: f64, y: &DVector<f64>) -> Result<DVector<f64>> {
            Ok(dvector![-y[1], y[0]])
        }
    }

    #[test]
    fn rotation_is_integrated_to_high_accuracy() {
        let sol = integrate(
            &Rotation,
            0.0,
            &dvector![1.0, 0.0],
            core::f64::consts::TAU,
            &OdeOptions::default(),
        )
        .unwrap();
        let y = sol.nodes.last().unwrap().1.clone();
        assert_abs_diff_eq!(y[0], 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(y[1], 0.0, epsilon = 1e-10);
    }

    #[test]
    fn dense_evaluation_matches_closed_form() {
        let sol = integrate(
            &Rotation,
            0.0,
            &dvector![1.0, 0.0],
            3.0,
            &OdeOptions::default(),
        )
        .unwrap();
        for &t in &[0.1, 0.77, 1.3, 2.9] {
            let y = sol.eval(&Rotation, t).unwrap();
            assert_abs_diff_eq!(y[0], t.cos(), epsilon = 1e-10);
            assert_abs_diff_eq!(y[1], t.sin(), epsilon = 1e-10);
        }
    }

    #[test]
    fn backward_integration_works() {
        let sol = integrate(
            &Rotation,
            0.0,
            &dvector![1.0, 0.0],
            -1.2,
            &OdeOptions::default(),
        )
        .unwrap();
        let y = sol.eval(&Rotation, -0.5).unwrap();
        assert_abs_diff_eq!(y[0], 0.5_f64.cos(), epsilon = 1e-10);
        assert_abs_diff_eq!(y[1], -(0.5_f64.sin()), epsilon = 1e-10);
    }

    #[test]
    fn dense_evaluation_is_smooth_in_t() {
        // Finite differences across node boundaries must not see kinks.
        let sol = integrate(
            &Rotation,
            0.0,
            &dvector![1.0, 0.0],
            2.0,
            &OdeOptions::default(),
        )
        .unwrap();
        let mid = sol.nodes[sol.nodes.len() / 2].0;
        let f = |t: f64| sol.eval(&Rotation, t).unwrap();
        let (d2, est) = crate::jets::fd_derivative(&f, mid, 2, 1.0);
        assert!(est < 1e-7);
        assert_abs_diff_eq!(d2[0], -mid.cos(), epsilon = 1e-7);
    }

    #[test]
    fn gauss7_is_nearly_exact_for_smooth_integrands() {
        let val = gauss7(&|x: f64| x.exp(), 0.0, 0.3);
        assert_abs_diff_eq!(val, 0.3_f64.exp() - 1.0, epsilon = 1e-15);
    }
}
