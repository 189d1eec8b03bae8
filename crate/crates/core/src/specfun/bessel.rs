use crate::error::{domain, Result};
use crate::specfun::gamma::ln_factorial;

const SERIES_LIMIT: f64 = 20.0;

/// `e^{-x} I_0(x)`.
pub fn bessel_i0_scaled(x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(domain("x", x, "x >= 0"));
    }
    if x <= SERIES_LIMIT {
        // Σ (x²/4)^k / (k!)²
        let q = 0.25 * x * x;
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k = 1.0;
        while term > f64::EPSILON * sum {
            term *= q / (k * k);
            sum += term;
            k += 1.0;
        }
        Ok(sum * (-x).exp())
    } else {
        // Hankel asymptotic expansion; terms decrease well past k = 20 here.
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..60 {
            let odd = (2 * k - 1) as f64;
            let next = term * odd * odd / (8.0 * k as f64 * x);
            if next.abs() >= term.abs() {
                break;
            }
            term = next;
            sum += term;
            if term < f64::EPSILON * sum {
                break;
            }
        }
        Ok(sum / (2.0 * std::f64::consts::PI * x).sqrt())
    }
}

/// Modified Bessel function of the first kind, order zero.
pub fn bessel_i0(x: f64) -> Result<f64> {
    Ok(bessel_i0_scaled(x)? * x.exp())
}

/// First-order Marcum Q function `Q_1(a, b)`.
///
/// Evaluated as the Poisson mixture
/// `Σ_n e^{-a²/2} (a²/2)^n / n! · Q(n+1, b²/2)`, all terms nonnegative.
pub fn marcum_q1(a: f64, b: f64) -> Result<f64> {
    if !(a >= 0.0) {
        return Err(domain("a", a, "a >= 0"));
    }
    if !(b >= 0.0) {
        return Err(domain("b", b, "b >= 0"));
    }
    if b == 0.0 {
        return Ok(1.0);
    }
    let mean = 0.5 * a * a;
    let x = 0.5 * b * b;
    if mean == 0.0 {
        return Ok((-x).exp());
    }
    let (ln_mean, ln_x) = (mean.ln(), x.ln());
    let mut survival = 0.0; // Q(n+1, x)
    let mut mass = 0.0;
    let mut total = 0.0;
    let limit = (mean + 12.0 * mean.sqrt() + 40.0) as usize;
    for n in 0..=limit {
        survival += (-x + n as f64 * ln_x - ln_factorial(n)).exp();
        let weight = (-mean + n as f64 * ln_mean - ln_factorial(n)).exp();
        total += weight * survival.min(1.0);
        mass += weight;
        if n as f64 > mean && 1.0 - mass < 1e-17 {
            break;
        }
    }
    Ok(total.clamp(0.0, 1.0))
}
