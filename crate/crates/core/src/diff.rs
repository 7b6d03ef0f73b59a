//! Central-difference differentiation with one level of Richardson
//! extrapolation.
//!
//! Material dispersion is smooth on the scale of the optical frequency
//! itself, so relative steps are used. The default steps grow with the
//! derivative order to keep round-off in check; the first-order step is
//! 1e-6 relative.

/// Default relative steps per derivative order (index = order - 1).
pub const DEFAULT_REL_STEPS: [f64; 4] = [1e-6, 3e-5, 5e-4, 4e-3];

fn stencil(f: &dyn Fn(f64) -> f64, x: f64, h: f64, order: usize) -> f64 {
    match order {
        1 => (f(x + h) - f(x - h)) / (2.0 * h),
        2 => (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h),
        3 => (f(x + 2.0 * h) - 2.0 * f(x + h) + 2.0 * f(x - h) - f(x - 2.0 * h)) / (2.0 * h * h * h),
        4 => {
            (f(x + 2.0 * h) - 4.0 * f(x + h) + 6.0 * f(x) - 4.0 * f(x - h) + f(x - 2.0 * h))
                / (h * h * h * h)
        }
        _ => panic!("derivative order {order} not supported"),
    }
}

/// j-th derivative of `f` at `x` using the given relative step.
///
/// All stencils have O(h^2) truncation error; one Richardson step with
/// h and h/2 removes it.
pub fn derivative_with_step(f: impl Fn(f64) -> f64, x: f64, order: usize, rel_step: f64) -> f64 {
    let h = x.abs().max(1.0) * rel_step;
    let coarse = stencil(&f, x, h, order);
    let fine = stencil(&f, x, h / 2.0, order);
    (4.0 * fine - coarse) / 3.0
}

/// j-th derivative of `f` at `x` with the default step for that order.
pub fn derivative(f: impl Fn(f64) -> f64, x: f64, order: usize) -> f64 {
    derivative_with_step(f, x, order, DEFAULT_REL_STEPS[order - 1])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_derivatives_are_exact() {
        // f(x) = x^4 on a scale comparable to optical frequencies.
        let f = |x: f64| (x / 1e15).powi(4);
        let x = 2.2e15;
        let s = 1e15;
        let expect = [
            4.0 * (x / s).powi(3) / s,
            12.0 * (x / s).powi(2) / (s * s),
            24.0 * (x / s) / (s * s * s),
            24.0 / (s * s * s * s),
        ];
        for j in 1..=4 {
            let got = derivative(f, x, j);
            let rel = (got - expect[j - 1]).abs() / expect[j - 1].abs();
            assert!(rel < 1e-7, "order {j}: rel err {rel:.3e}");
        }
    }

    #[test]
    fn rational_function_matches_analytic() {
        // f(x) = 1/(1 + (x/s)^2), derivatives known in closed form at u = 1.
        let s = 1e15;
        let f = |x: f64| 1.0 / (1.0 + (x / s).powi(2));
        let x = s; // u = 1
        // d/du of 1/(1+u^2) at u=1: -2u/(1+u^2)^2 = -0.5
        // d2: (6u^2-2)/(1+u^2)^3 = 0.5
        // d3: -24u(u^2-1)/(1+u^2)^4 = 0
        // d4: 24(5u^4-10u^2+1)/(1+u^2)^5 = 24*(-4)/32 = -3
        let expect = [-0.5 / s, 0.5 / (s * s), 0.0, -3.0 / (s * s * s * s)];
        for j in 1..=4 {
            let got = derivative(f, x, j);
            let scale = expect[j - 1].abs().max(1.0 / s.powi(j as i32));
            let rel = (got - expect[j - 1]).abs() / scale;
            assert!(rel < 1e-6, "order {j}: rel err {rel:.3e}");
        }
    }
}
