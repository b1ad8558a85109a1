use num_complex::Complex64;

use super::ComplexMatrix;

/// One classical fourth-order Runge–Kutta step of `y' = f(t, y)`.
pub fn rk4_step<F>(f: F, y: &ComplexMatrix, t: f64, dt: f64) -> ComplexMatrix
where
    F: Fn(f64, &ComplexMatrix) -> ComplexMatrix,
{
    debug_assert!(dt > 0.0);
    let half = dt / 2.0;
    let c = |x: f64| Complex64::new(x, 0.0);

    let k1 = f(t, y);
    let mut y2 = y.clone();
    y2.axpy(c(half), &k1).expect("rk4 stage shape");
    let k2 = f(t + half, &y2);
    let mut y3 = y.clone();
    y3.axpy(c(half), &k2).expect("rk4 stage shape");
    let k3 = f(t + half, &y3);
    let mut y4 = y.clone();
    y4.axpy(c(dt), &k3).expect("rk4 stage shape");
    let k4 = f(t + dt, &y4);

    let mut out = y.clone();
    let sixth = dt / 6.0;
    for (((o, a), (b, cc)), d) in out
        .as_mut_slice()
        .iter_mut()
        .zip(k1.as_slice())
        .zip(k2.as_slice().iter().zip(k3.as_slice()))
        .zip(k4.as_slice())
    {
        *o += (a + (b + cc) * 2.0 + d) * sixth;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::expm;

    #[test]
    fn zero_derivative_keeps_state() {
        let y = ComplexMatrix::identity(3);
        let out = rk4_step(|_, y| ComplexMatrix::zeros(y.rows(), y.cols()), &y, 0.0, 0.1);
        assert_eq!(out, y);
    }

    #[test]
    fn scalar_exponential_growth() {
        let y = ComplexMatrix::identity(1);
        let out = rk4_step(|_, y| y.clone(), &y, 0.0, 0.1);
        assert!((out[(0, 0)].re - 0.1f64.exp()).abs() < 1e-7);
    }

    #[test]
    fn linear_system_local_error_is_fifth_order() {
        let a = ComplexMatrix::from_real_rows(&[
            vec![-0.5, 1.0, 0.0],
            vec![-1.0, -0.2, 0.3],
            vec![0.0, 0.4, -1.0],
        ])
        .unwrap();
        let y0 = ComplexMatrix::from_real_rows(&[vec![1.0], vec![0.5], vec![-0.25]]).unwrap();
        let local_error = |dt: f64| {
            let got = rk4_step(|_, y| &a * y, &y0, 0.0, dt);
            let exact = &expm(&a.scale_real(dt)).unwrap() * &y0;
            (&got - &exact).max_abs()
        };
        let e1 = local_error(0.1);
        let e2 = local_error(0.05);
        // Halving dt divides the local error by ~2^5.
        assert!(e1 / e2 > 25.0, "ratio {}", e1 / e2);
        assert!(e1 < 1e-6);
    }

    #[test]
    fn long_integration_matches_exponential() {
        // ‖L‖ ≈ 10, dt = 0.01, T = 1.
        let l = ComplexMatrix::from_real_rows(&[vec![-4.0, 3.0], vec![-3.0, -6.0]]).unwrap();
        let y0 = ComplexMatrix::from_real_rows(&[vec![1.0], vec![1.0]]).unwrap();
        let mut y = y0.clone();
        let dt = 0.01;
        for k in 0..100 {
            y = rk4_step(|_, y| &l * y, &y, k as f64 * dt, dt);
        }
        let exact = &expm(&l).unwrap() * &y0;
        assert!((&y - &exact).max_abs() < 1e-6);
    }
}
