//! Adaptive Dormand–Prince 5(4) integration of `y' = f(t, y)` on `ℝᵈ`.

use crate::error::{Error, Result};
use crate::linalg::RVector;

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// fifth-order weights equal the last row of A (FSAL)
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-10,
            max_steps: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Stats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

/// Integrates from `t0` to `t1` (either direction) and returns `y(t1)`.
pub fn integrate<F>(f: F, t0: f64, y0: &RVector, t1: f64, tol: Tolerances) -> Result<(RVector, Stats)>
where
    F: Fn(f64, &RVector) -> RVector,
{
    let mut stats = Stats::default();
    let span = t1 - t0;
    if span == 0.0 {
        return Ok((y0.clone(), stats));
    }
    if !span.is_finite() {
        return Err(Error::Numeric(format!("non-finite integration interval [{t0}, {t1}]")));
    }
    let dir = span.signum();
    let mut t = t0;
    let mut y = y0.clone();
    let mut k1 = f(t, &y);
    stats.evaluations += 1;

    let scale = |y: &RVector| -> f64 { tol.atol + tol.rtol * y.amax() };
    // initial step from the size of the derivative
    let d0 = y.amax() / scale(&y);
    let d1 = k1.amax() / scale(&y);
    let mut h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    h = h.min(span.abs());

    let mut k = vec![RVector::zeros(y.len()); 7];
    while (t1 - t) * dir > 0.0 {
        if stats.accepted + stats.rejected >= tol.max_steps {
            return Err(Error::Numeric(format!(
                "integrator exceeded {} steps at t = {t} (h = {h:e})",
                tol.max_steps
            )));
        }
        let remaining = (t1 - t).abs();
        let last = h >= remaining;
        if last {
            h = remaining;
        }
        if h < 1e-14 * t.abs().max(1.0) {
            return Err(Error::Numeric(format!("step size underflow at t = {t} (h = {h:e})")));
        }
        let hs = h * dir;

        k[0] = k1.clone();
        for s in 1..7 {
            let mut ys = y.clone();
            for (j, kj) in k.iter().enumerate().take(s) {
                let a = A[s][j];
                if a != 0.0 {
                    ys.axpy(hs * a, kj, 1.0);
                }
            }
            k[s] = f(t + C[s] * hs, &ys);
            stats.evaluations += 1;
        }
        let mut y5 = y.clone();
        let mut err = RVector::zeros(y.len());
        for s in 0..7 {
            if B5[s] != 0.0 {
                y5.axpy(hs * B5[s], &k[s], 1.0);
            }
            err.axpy(hs * (B5[s] - B4[s]), &k[s], 1.0);
        }
        let sc = tol.atol + tol.rtol * y.amax().max(y5.amax());
        let err_norm = (err.iter().map(|e| (e / sc).powi(2)).sum::<f64>() / y.len().max(1) as f64).sqrt();
        if !err_norm.is_finite() {
            return Err(Error::Numeric(format!("non-finite error estimate at t = {t}")));
        }

        if err_norm <= 1.0 {
            t = if last { t1 } else { t + hs };
            y = y5;
            k1 = k[6].clone();
            stats.accepted += 1;
        } else {
            stats.rejected += 1;
        }
        let factor = if err_norm == 0.0 {
            5.0
        } else {
            (0.9 * err_norm.powf(-0.2)).clamp(0.2, 5.0)
        };
        h *= if err_norm <= 1.0 { factor } else { factor.min(1.0) };
    }
    Ok((y, stats))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let (y, st) = integrate(|_, y| -y, 0.0, &RVector::from_vec(vec![1.0]), 2.0, Tolerances::default()).unwrap();
        assert!((y[0] - (-2.0f64).exp()).abs() < 1e-9);
        assert!(st.accepted > 0);
    }

    #[test]
    fn harmonic_oscillator_full_period() {
        let f = |_: f64, y: &RVector| RVector::from_vec(vec![y[1], -y[0]]);
        let tol = Tolerances {
            rtol: 1e-12,
            atol: 1e-12,
            ..Default::default()
        };
        let (y, _) = integrate(f, 0.0, &RVector::from_vec(vec![1.0, 0.0]), 2.0 * std::f64::consts::PI, tol).unwrap();
        assert!((y[0] - 1.0).abs() < 1e-9);
        assert!(y[1].abs() < 1e-9);
    }

    #[test]
    fn zero_interval_returns_initial_value() {
        let y0 = RVector::from_vec(vec![3.0, 4.0]);
        let (y, st) = integrate(|_, y| y.clone(), 1.0, &y0, 1.0, Tolerances::default()).unwrap();
        assert_eq!(y, y0);
        assert_eq!(st.accepted, 0);
    }

    #[test]
    fn backward_integration() {
        let (y, _) = integrate(|_, y| y.clone(), 1.0, &RVector::from_vec(vec![1.0]), 0.0, Tolerances::default()).unwrap();
        assert!((y[0] - (-1.0f64).exp()).abs() < 1e-9);
    }

    #[test]
    fn time_dependent_rhs_is_fifth_order() {
        // y' = 5 t⁴ is integrated exactly by a fifth-order method
        let (y, _) = integrate(
            |t, _| RVector::from_vec(vec![5.0 * t.powi(4)]),
            0.0,
            &RVector::from_vec(vec![0.0]),
            1.0,
            Tolerances::default(),
        )
        .unwrap();
        assert!((y[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn step_budget_is_enforced() {
        let tol = Tolerances {
            max_steps: 3,
            ..Default::default()
        };
        let r = integrate(|_, y| y * 50.0, 0.0, &RVector::from_vec(vec![1.0]), 10.0, tol);
        assert!(matches!(r, Err(Error::Numeric(_))));
    }
}
