//! Globally adaptive Gauss–Kronrod (7/15) quadrature.
//!
//! Panels are bisected largest-error-first until the summed error estimate
//! meets `max(abs_tol, rel_tol·|I|)`. Callers pass breakpoints so that narrow
//! features (packet arrival windows) start on their own panels.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Real};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5) and the centre.
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Stopping rules for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptions<T> {
    pub rel_tol: T,
    pub abs_tol: T,
    pub max_panels: usize,
}

impl<T: Real> Default for QuadratureOptions<T> {
    /// `rel_tol = 1e-9`, loosened to `100 ε` for scalars too coarse to reach it.
    fn default() -> Self {
        Self {
            rel_tol: lit::<T>(1.0e-9).max(lit::<T>(100.0) * T::epsilon()),
            abs_tol: T::zero(),
            max_panels: 1 << 20,
        }
    }
}

/// Integral estimate with its error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<T> {
    pub value: T,
    pub error: T,
    pub panels: usize,
}

struct Panel<T> {
    lo: T,
    hi: T,
    value: T,
    error: T,
}

impl<T: Real> PartialEq for Panel<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<T: Real> Eq for Panel<T> {}

impl<T: Real> PartialOrd for Panel<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Real> Ord for Panel<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        // Ties broken by position so the refinement order is deterministic.
        to_f64(self.error)
            .total_cmp(&to_f64(other.error))
            .then_with(|| to_f64(other.lo).total_cmp(&to_f64(self.lo)))
    }
}

fn kronrod<T: Real, F: Fn(T) -> T>(f: &F, lo: T, hi: T) -> Panel<T> {
    let centre = (lo + hi) / lit(2.0);
    let half = (hi - lo) / lit(2.0);
    let fc = f(centre);
    let mut kron = fc * lit(WGK[7]);
    let mut gauss = fc * lit(WG[3]);
    for (j, (&x, &w)) in XGK[..7].iter().zip(&WGK[..7]).enumerate() {
        let dx = half * lit(x);
        let pair = f(centre - dx) + f(centre + dx);
        kron = kron + pair * lit(w);
        if j % 2 == 1 {
            gauss = gauss + pair * lit(WG[j / 2]);
        }
    }
    Panel {
        lo,
        hi,
        value: kron * half,
        error: ((kron - gauss) * half).abs(),
    }
}

/// Integrates `f` over `[breakpoints[0], breakpoints[last]]`.
///
/// Breakpoints must be finite and non-decreasing; zero-width pieces are
/// skipped.
pub fn integrate<T, F>(f: F, breakpoints: &[T], options: &QuadratureOptions<T>) -> Result<Estimate<T>>
where
    T: Real,
    F: Fn(T) -> T,
{
    if breakpoints.len() < 2 {
        return Err(Error::domain("breakpoints", "need at least two"));
    }
    if breakpoints.iter().any(|b| !b.is_finite()) || breakpoints.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::domain("breakpoints", "must be finite and non-decreasing"));
    }

    let mut heap = BinaryHeap::new();
    for w in breakpoints.windows(2) {
        if w[1] > w[0] {
            heap.push(kronrod(&f, w[0], w[1]));
        }
    }
    if heap.is_empty() {
        return Ok(Estimate {
            value: T::zero(),
            error: T::zero(),
            panels: 0,
        });
    }

    let totals = |heap: &BinaryHeap<Panel<T>>| {
        heap.iter()
            .fold((T::zero(), T::zero()), |(v, e), p| (v + p.value, e + p.error))
    };
    let (mut value, mut error) = totals(&heap);
    let target = |v: T| options.abs_tol.max(options.rel_tol * v.abs());
    let mut since_resum = 0usize;

    while error > target(value) {
        if heap.len() >= options.max_panels {
            break;
        }
        let worst = heap.pop().expect("heap is non-empty");
        let mid = (worst.lo + worst.hi) / lit(2.0);
        if !(mid > worst.lo && mid < worst.hi) {
            // Panel cannot be split further in this precision.
            heap.push(worst);
            break;
        }
        let left = kronrod(&f, worst.lo, mid);
        let right = kronrod(&f, mid, worst.hi);
        value = value - worst.value + left.value + right.value;
        error = error - worst.error + left.error + right.error;
        heap.push(left);
        heap.push(right);

        since_resum += 1;
        if since_resum == 64 {
            // Incremental updates drift; resum from the panels.
            (value, error) = totals(&heap);
            since_resum = 0;
        }
    }

    let (value, error) = totals(&heap);
    let panels = heap.len();
    if error > target(value) {
        return Err(Error::NonConvergent {
            achieved: to_f64(error),
            target: to_f64(target(value)),
            panels,
        });
    }
    Ok(Estimate {
        value,
        error,
        panels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_are_exact_on_one_panel() {
        let est = integrate(|x: f64| x.powi(5) - 3.0 * x * x + 1.0, &[-1.0, 2.0], &Default::default()).unwrap();
        // ∫ x⁵ - 3x² + 1 over [-1, 2] = 63/6 - 9 + 3
        assert!((est.value - (63.0 / 6.0 - 9.0 + 3.0)).abs() < 1e-13);
        assert_eq!(est.panels, 1);
    }

    #[test]
    fn gaussian_times_exponential() {
        // ∫ exp(-(x-3)²/2 - 0.2 x) dx over ℝ = √(2π) exp(-0.6 + 0.02)
        let f = |x: f64| (-(x - 3.0).powi(2) / 2.0 - 0.2 * x).exp();
        let est = integrate(f, &[-20.0, 3.0, 30.0], &Default::default()).unwrap();
        let exact = (2.0 * std::f64::consts::PI).sqrt() * (-0.6_f64 + 0.02).exp();
        assert!((est.value - exact).abs() / exact < 1e-12, "{} vs {}", est.value, exact);
        assert!(est.error <= 1e-9 * exact);
    }

    #[test]
    fn narrow_peak_found_from_breakpoint() {
        let w = 1e-6;
        let f = |x: f64| (-(x - 0.5).powi(2) / (2.0 * w * w)).exp();
        let est = integrate(f, &[0.0, 0.5 - 12.0 * w, 0.5 + 12.0 * w, 1.0], &Default::default()).unwrap();
        let exact = w * (2.0 * std::f64::consts::PI).sqrt();
        assert!((est.value - exact).abs() / exact < 1e-10);
    }

    #[test]
    fn zero_integrand_converges_immediately() {
        let est = integrate(|_x: f64| 0.0, &[0.0, 1.0], &Default::default()).unwrap();
        assert_eq!(est.value, 0.0);
        assert_eq!(est.panels, 1);
    }

    #[test]
    fn reports_nonconvergence() {
        let opts = QuadratureOptions {
            rel_tol: 1e-14,
            abs_tol: 0.0,
            max_panels: 4,
        };
        let err = integrate(|x: f64| x.abs().sqrt() * (50.0 * x).cos(), &[-1.0, 1.0], &opts).unwrap_err();
        match err {
            Error::NonConvergent { achieved, panels, .. } => {
                assert!(achieved > 0.0);
                assert_eq!(panels, 4);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_breakpoints() {
        assert!(integrate(|x: f64| x, &[1.0], &Default::default()).is_err());
        assert!(integrate(|x: f64| x, &[1.0, 0.0], &Default::default()).is_err());
    }

    #[test]
    fn works_in_f32() {
        let est = integrate(|x: f32| x.cos(), &[0.0, std::f32::consts::FRAC_PI_2], &QuadratureOptions {
            rel_tol: 1e-5,
            ..Default::default()
        })
        .unwrap();
        assert!((est.value - 1.0).abs() < 1e-5);
    }
}
