//! Fourth-order finite-difference stencils.

/// Default step for the residual checks.
pub const DEFAULT_STEP: f64 = 1e-4;

/// Derivative order supported by the stencils.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    First,
    Second,
}

/// Fourth-order central difference of `f` at `x` with step `h`.
pub fn central_diff<F: Fn(f64) -> f64>(f: F, x: f64, h: f64, order: Order) -> f64 {
    let fm2 = f(x - 2.0 * h);
    let fm1 = f(x - h);
    let fp1 = f(x + h);
    let fp2 = f(x + 2.0 * h);
    match order {
        Order::First => (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h),
        Order::Second => {
            let f0 = f(x);
            (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h)
        }
    }
}

/// Fourth-order one-sided difference using points x, x+h, x+2h, ...
///
/// A negative `h` gives the backward stencil.
pub fn one_sided_diff<F: Fn(f64) -> f64>(f: F, x: f64, h: f64, order: Order) -> f64 {
    match order {
        Order::First => {
            let w = [-25.0, 48.0, -36.0, 16.0, -3.0];
            let s: f64 = w
                .iter()
                .enumerate()
                .map(|(i, c)| c * f(x + i as f64 * h))
                .sum();
            s / (12.0 * h)
        }
        Order::Second => {
            let w = [45.0, -154.0, 214.0, -156.0, 61.0, -10.0];
            let s: f64 = w
                .iter()
                .enumerate()
                .map(|(i, c)| c * f(x + i as f64 * h))
                .sum();
            s / (12.0 * h * h)
        }
    }
}

/// Central stencil when [x - 2h, x + 2h] fits inside [lo, hi], otherwise the
/// one-sided stencil pointing into the window.
pub fn windowed_diff<F: Fn(f64) -> f64>(f: F, x: f64, h: f64, order: Order, lo: f64, hi: f64) -> f64 {
    let reach = match order {
        Order::First => 4.0 * h,
        Order::Second => 5.0 * h,
    };
    if x - 2.0 * h >= lo && x + 2.0 * h <= hi {
        central_diff(f, x, h, order)
    } else if x + reach <= hi {
        one_sided_diff(f, x, h, order)
    } else {
        one_sided_diff(f, x, -h, order)
    }
}
