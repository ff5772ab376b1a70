//! Adaptive Gauss–Kronrod quadrature on finite intervals.
//!
//! A 15-point Kronrod rule with its embedded 7-point Gauss rule supplies a
//! per-interval error estimate; intervals are bisected worst-first until the
//! summed estimate falls below the requested absolute tolerance.

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

// Kronrod 15-point nodes on the positive half of [-1, 1] (symmetric rule).
const XGK: [f64; 8] = [
    0.9914553711208126,
    0.9491079123427585,
    0.8648644233597691,
    0.7415311855993944,
    0.5860872354676911,
    0.4058451513773972,
    0.2077849550078985,
    0.0,
];

const WGK: [f64; 8] = [
    0.0229353220105292,
    0.0630920926299785,
    0.1047900103222502,
    0.1406532597155259,
    0.1690047266392679,
    0.1903505780647854,
    0.2044329400752989,
    0.2094821410847278,
];

// Embedded 7-point Gauss weights (applied at XGK[1], XGK[3], XGK[5] and the center).
const WG: [f64; 4] = [
    0.1294849661688697,
    0.2797053914892767,
    0.3818300505051189,
    0.4179591836734694,
];

fn gk15(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> (f64, f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    let mut resabs = WGK[7] * fc.abs();
    for j in 0..7 {
        let x = half * XGK[j];
        let (fl, fr) = (f(center - x), f(center + x));
        kronrod += WGK[j] * (fl + fr);
        resabs += WGK[j] * (fl.abs() + fr.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (fl + fr);
        }
    }
    let integral = kronrod * half;
    let err = ((kronrod - gauss) * half).abs();
    (integral, err, resabs * half.abs())
}

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`.
///
/// A piece whose error estimate sits at the f64 roundoff floor
/// (`50 ε ∫|f|`) is not refined further; splitting beyond that point only
/// inflates the summed estimate. Errors if the tolerance is still not met
/// after `max_intervals` subdivisions among refinable pieces.
pub fn integrate(
    mut f: impl FnMut(f64) -> f64,
    a: f64,
    b: f64,
    tol: f64,
    max_intervals: usize,
) -> Result<f64> {
    struct Piece {
        a: f64,
        b: f64,
        value: f64,
        err: f64,
        at_floor: bool,
    }
    fn make(pa: f64, pb: f64, f: &mut impl FnMut(f64) -> f64) -> Piece {
        let (value, err, resabs) = gk15(f, pa, pb);
        Piece {
            a: pa,
            b: pb,
            value,
            err,
            at_floor: err <= 50.0 * f64::EPSILON * resabs,
        }
    }
    let mut pieces = alloc::vec![make(a, b, &mut f)];
    loop {
        let total_err: f64 = pieces.iter().map(|p| p.err).sum();
        if total_err <= tol {
            return Ok(pieces.iter().map(|p| p.value).sum());
        }
        // refine the worst piece that still has headroom
        let worst = pieces
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.at_floor)
            .max_by(|(_, x), (_, y)| x.err.partial_cmp(&y.err).unwrap())
            .map(|(i, _)| i);
        let Some(worst) = worst else {
            // every piece is at its roundoff floor; this is as good as f64 gets
            return Ok(pieces.iter().map(|p| p.value).sum());
        };
        if pieces.len() >= max_intervals {
            return Err(Error::QuadratureTail {
                cutoff: b,
                tail: total_err,
            });
        }
        let Piece { a: pa, b: pb, .. } = pieces.swap_remove(worst);
        let mid = 0.5 * (pa + pb);
        let left = make(pa, mid, &mut f);
        let right = make(mid, pb, &mut f);
        pieces.push(left);
        pieces.push(right);
    }
}

/// Locates a cutoff `R` beyond which `f` is negligible relative to its peak,
/// scanning outward in unit steps from `start`. Errors when no such cutoff
/// exists below `max_r`.
pub fn decay_cutoff(
    mut f: impl FnMut(f64) -> f64,
    start: f64,
    max_r: f64,
    rel_floor: f64,
) -> Result<f64> {
    let mut peak = 0.0f64;
    let mut r = start.max(1.0);
    loop {
        let v = f(r).abs();
        peak = peak.max(v);
        if peak > 0.0 && v <= rel_floor * peak {
            // demand two consecutive quiet points
            let v2 = f(r + 1.0).abs();
            if v2 <= rel_floor * peak {
                return Ok(r + 1.0);
            }
        }
        r += 1.0;
        if r > max_r {
            return Err(Error::QuadratureTail {
                cutoff: max_r,
                tail: f(max_r).abs(),
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use core::f64::consts::PI;

    #[test]
    fn exact_on_polynomials() {
        // GK15 is exact for polynomials of degree <= 22; x^13 over one panel
        let v = integrate(|x| x.powi(13), 0.0, 2.0, 1e-12, 100).unwrap();
        assert_relative_eq!(v, 2.0f64.powi(14) / 14.0, max_relative = 1e-14);
    }

    #[test]
    fn gaussian_integral() {
        let v = integrate(|x| (-x * x).exp(), 0.0, 8.0, 1e-12, 400).unwrap();
        assert_relative_eq!(v, PI.sqrt() / 2.0, max_relative = 1e-12);
    }

    #[test]
    fn gaussian_moments() {
        // ∫_0^∞ x^{2n+1} e^{-x²} dx = n!/2
        let mut fact = 1.0;
        for n in 0..=8 {
            if n > 0 {
                fact *= n as f64;
            }
            let v = integrate(
                |x: f64| x.powi(2 * n + 1) * (-x * x).exp(),
                0.0,
                12.0,
                1e-11,
                800,
            )
            .unwrap();
            assert_relative_eq!(v, fact / 2.0, max_relative = 1e-9);
        }
    }

    #[test]
    fn oscillatory_integrand() {
        let v = integrate(|x: f64| (10.0 * x).sin(), 0.0, PI, 1e-12, 400).unwrap();
        assert_relative_eq!(v, (1.0 - (10.0 * PI).cos()) / 10.0, epsilon = 1e-11);
    }

    #[test]
    fn budget_exhaustion_reported() {
        let err = integrate(|x: f64| (1e6 * x).sin().abs(), 0.0, 1.0, 1e-14, 8).unwrap_err();
        assert!(matches!(err, Error::QuadratureTail { .. }));
    }

    #[test]
    fn cutoff_finder() {
        let r = decay_cutoff(|x| (-x * x).exp(), 1.0, 50.0, 1e-16).unwrap();
        assert!((6.0..=10.0).contains(&r), "cutoff {r}");
        assert!(decay_cutoff(|_| 1.0, 1.0, 30.0, 1e-16).is_err());
    }
}
