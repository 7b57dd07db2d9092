//! Visibility, predictability and the relation `P² + V² ≤ 1`.

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

/// Default tolerance on `|P² + V² - 1|` for calling a pair coherent.
pub const DEFAULT_DUALITY_TOLERANCE: f64 = 1.0e-9;

/// Contrast `(I_max - I_min)/(I_max + I_min)` of adjoining extrema.
pub fn visibility_from_extrema<T: Real>(i_max: T, i_min: T) -> Result<T> {
    if !(i_max.is_finite() && i_min.is_finite()) {
        return Err(Error::domain("intensity", "extrema must be finite"));
    }
    if i_min < T::zero() {
        return Err(Error::domain("i_min", format!("must be >= 0, got {i_min}")));
    }
    if i_min > i_max {
        return Err(Error::domain("i_min", format!("exceeds i_max ({i_min} > {i_max})")));
    }
    if i_max == T::zero() {
        return Err(Error::domain("i_max", "both extrema are zero"));
    }
    Ok((i_max - i_min) / (i_max + i_min))
}

/// `|P1 - P2|/(P1 + P2)`. The probabilities need not sum to one.
pub fn predictability_from_probs<T: Real>(p1: T, p2: T) -> Result<T> {
    for (field, p) in [("p1", p1), ("p2", p2)] {
        if !(p.is_finite() && p >= T::zero()) {
            return Err(Error::domain(field, format!("must be finite and >= 0, got {p}")));
        }
    }
    if p1 + p2 == T::zero() {
        return Err(Error::domain("p1", "no particle reaches the detector (p1 + p2 = 0)"));
    }
    Ok(((p1 - p2) / (p1 + p2)).abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DualityStatus {
    /// `|residual| ≤ tol`: equality, as for a pure state.
    Coherent,
    /// `residual < -tol`: strict inequality.
    Partial,
    /// `residual > tol`: impossible physically, so a computational error.
    Violation,
}

impl DualityStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            DualityStatus::Coherent => "coherent",
            DualityStatus::Partial => "partial",
            DualityStatus::Violation => "violation",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualityResult<T> {
    pub visibility: T,
    pub predictability: T,
    /// `V² + P² - 1`, signed.
    pub residual: T,
    pub status: DualityStatus,
}

pub fn duality_check<T: Real>(visibility: T, predictability: T) -> Result<DualityResult<T>> {
    duality_check_with(visibility, predictability, lit(DEFAULT_DUALITY_TOLERANCE))
}

pub fn duality_check_with<T: Real>(visibility: T, predictability: T, tolerance: T) -> Result<DualityResult<T>> {
    for (field, x) in [("visibility", visibility), ("predictability", predictability)] {
        if !(x >= T::zero() && x <= T::one()) {
            return Err(Error::domain(field, format!("must lie in [0, 1], got {x}")));
        }
    }
    let residual = visibility * visibility + predictability * predictability - T::one();
    let status = if residual.abs() <= tolerance {
        DualityStatus::Coherent
    } else if residual < T::zero() {
        DualityStatus::Partial
    } else {
        DualityStatus::Violation
    };
    Ok(DualityResult {
        visibility,
        predictability,
        residual,
        status,
    })
}

/// How extrema of a sampled pattern are combined into visibilities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExtractionRule {
    /// Each interior maximum with the nearest minimum further from the
    /// pattern centre `x = 0`. Biased by the envelope change over half a
    /// fringe.
    AdjacentPair,
    /// At each minimum, the upper envelope interpolated through the three
    /// nearest maxima. Second order in the envelope variation.
    #[default]
    EnvelopeAtMinima,
}

/// A visibility read off a sampled pattern.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtractedVisibility<T> {
    /// Where the visibility applies: the maximum for
    /// [`ExtractionRule::AdjacentPair`], the minimum otherwise.
    pub position: T,
    pub i_max: T,
    pub i_min: T,
    pub visibility: T,
}

#[derive(Debug, Clone, Copy)]
struct Extremum<T> {
    x: T,
    y: T,
}

/// Vertex of the parabola through three points, clamped to their span.
fn refine<T: Real>(p: [(T, T); 3]) -> Extremum<T> {
    let [(x0, y0), (x1, y1), (x2, y2)] = p;
    let f01 = (y1 - y0) / (x1 - x0);
    let f12 = (y2 - y1) / (x2 - x1);
    let a = (f12 - f01) / (x2 - x0);
    if a == T::zero() {
        return Extremum { x: x1, y: y1 };
    }
    let x = ((x0 + x1) / lit(2.0) - f01 / (lit::<T>(2.0) * a)).max(x0).min(x2);
    let y = y0 + f01 * (x - x0) + a * (x - x0) * (x - x1);
    Extremum { x, y }
}

fn quadratic_through<T: Real>(pts: &[Extremum<T>], x: T) -> T {
    let mut acc = T::zero();
    for (i, pi) in pts.iter().enumerate() {
        let mut w = T::one();
        for (j, pj) in pts.iter().enumerate() {
            if i != j {
                w = w * (x - pj.x) / (pi.x - pj.x);
            }
        }
        acc = acc + w * pi.y;
    }
    acc
}

/// Locates interior extrema of `(x, I)` samples (sorted by `x`) and turns
/// them into visibilities.
pub fn extract_fringe_visibility<T: Real>(
    samples: &[(T, T)],
    rule: ExtractionRule,
) -> Result<Vec<ExtractedVisibility<T>>> {
    if samples.len() < 3 {
        return Err(Error::Data("need at least 3 samples to find extrema".into()));
    }
    if samples.iter().any(|(x, y)| !(x.is_finite() && y.is_finite())) {
        return Err(Error::Data("samples must be finite".into()));
    }
    if samples.windows(2).any(|w| w[1].0 <= w[0].0) {
        return Err(Error::Data("sample positions must be strictly increasing".into()));
    }

    let mut maxima = Vec::new();
    let mut minima = Vec::new();
    for w in samples.windows(3) {
        let (l, c, r) = (w[0].1, w[1].1, w[2].1);
        if c >= l && c > r {
            maxima.push(refine([w[0], w[1], w[2]]));
        } else if c <= l && c < r {
            minima.push(refine([w[0], w[1], w[2]]));
        }
    }

    let mut out = Vec::new();
    match rule {
        ExtractionRule::AdjacentPair => {
            for m in &maxima {
                let outward = minima
                    .iter()
                    .filter(|n| if m.x >= T::zero() { n.x > m.x } else { n.x < m.x })
                    .min_by(|a, b| (a.x - m.x).abs().partial_cmp(&(b.x - m.x).abs()).expect("finite"));
                if let Some(n) = outward {
                    let (hi, lo) = (m.y, n.y.max(T::zero()));
                    if hi > lo {
                        out.push(ExtractedVisibility {
                            position: m.x,
                            i_max: hi,
                            i_min: lo,
                            visibility: visibility_from_extrema(hi, lo)?,
                        });
                    }
                }
            }
        }
        ExtractionRule::EnvelopeAtMinima => {
            if maxima.len() < 3 {
                return Ok(out);
            }
            for n in &minima {
                // only minima bracketed by maxima
                let left = maxima.iter().any(|m| m.x < n.x);
                let right = maxima.iter().any(|m| m.x > n.x);
                if !(left && right) {
                    continue;
                }
                let mut near: Vec<Extremum<T>> = maxima.clone();
                near.sort_by(|a, b| (a.x - n.x).abs().partial_cmp(&(b.x - n.x).abs()).expect("finite"));
                near.truncate(3);
                let upper = quadratic_through(&near, n.x);
                let lo = n.y.max(T::zero());
                if upper > lo {
                    out.push(ExtractedVisibility {
                        position: n.x,
                        i_max: upper,
                        i_min: lo,
                        visibility: visibility_from_extrema(upper, lo)?,
                    });
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn extrema_examples() {
        assert_eq!(visibility_from_extrema(1.0, 0.0).unwrap(), 1.0);
        assert_eq!(visibility_from_extrema(1.0, 1.0).unwrap(), 0.0);
        let v = visibility_from_extrema::<f64>(0.943_409_441_985_037, 0.056_590_558_014_963).unwrap();
        assert!((v - 0.886_818_883_970_074).abs() < 1e-14);
        assert!(visibility_from_extrema(0.2, 0.3).is_err());
        assert!(visibility_from_extrema(0.0, 0.0).is_err());
        assert!(visibility_from_extrema(1.0, -0.1).is_err());
    }

    #[test]
    fn predictability_examples() {
        assert_eq!(predictability_from_probs(0.5, 0.5).unwrap(), 0.0);
        assert_eq!(predictability_from_probs(0.3, 0.0).unwrap(), 1.0);
        let p = predictability_from_probs((-2.0_f64).exp(), (-1.0_f64).exp()).unwrap();
        assert!((p - 0.462_117_157_260_009_76).abs() < 1e-15);
        assert!(predictability_from_probs(0.0, 0.0).is_err());
        assert!(predictability_from_probs(-0.1, 0.5).is_err());
    }

    #[test]
    fn check_examples() {
        let r = duality_check(1.0, 0.0).unwrap();
        assert_eq!(r.residual, 0.0);
        assert_eq!(r.status, DualityStatus::Coherent);

        for x in [0.1_f64, 0.5, 2.0] {
            let r = duality_check(1.0 / x.cosh(), x.tanh()).unwrap();
            assert!(r.residual.abs() < 1e-12);
            assert_eq!(r.status, DualityStatus::Coherent);
        }

        let r = duality_check(0.9_f64, 0.9).unwrap();
        assert!((r.residual - 0.62).abs() < 1e-15);
        assert_eq!(r.status, DualityStatus::Violation);

        assert_eq!(duality_check(0.5, 0.5).unwrap().status, DualityStatus::Partial);
        assert!(duality_check(1.1, 0.0).is_err());
        assert!(duality_check(0.5, f64::NAN).is_err());
    }

    #[test]
    fn adjacent_pairs_on_a_constant_envelope() {
        let xs: Vec<(f64, f64)> = (0..=4000)
            .map(|j| {
                let x = -20.0 + 40.0 * j as f64 / 4000.0;
                (x, 1.0 + 0.6 * x.cos())
            })
            .collect();
        for rule in [ExtractionRule::AdjacentPair, ExtractionRule::EnvelopeAtMinima] {
            let vs = extract_fringe_visibility(&xs, rule).unwrap();
            assert!(vs.len() >= 5, "{rule:?}");
            for v in vs {
                assert!((v.visibility - 0.6).abs() < 1e-6, "{rule:?} {v:?}");
            }
        }
    }

    #[test]
    fn envelope_rule_tracks_a_varying_envelope() {
        // I = 1 + e(x) cos(x) with e = sech(x/20)
        let env = |x: f64| 1.0 / (x / 20.0).cosh();
        let xs: Vec<(f64, f64)> = (0..=6400)
            .map(|j| {
                let x = -40.0 + 80.0 * j as f64 / 6400.0;
                (x, 0.5 * (1.0 + env(x) * x.cos()))
            })
            .collect();
        let vs = extract_fringe_visibility(&xs, ExtractionRule::EnvelopeAtMinima).unwrap();
        assert!(vs.len() >= 10);
        let worst = vs.iter().map(|v| (v.visibility - env(v.position)).abs()).fold(0.0, f64::max);
        assert!(worst < 1e-3, "{worst}");
        let paired = extract_fringe_visibility(&xs, ExtractionRule::AdjacentPair).unwrap();
        let worst_pair = paired.iter().map(|v| (v.visibility - env(v.position)).abs()).fold(0.0, f64::max);
        assert!(worst_pair > worst);
    }

    #[test]
    fn extraction_rejects_bad_samples() {
        assert!(extract_fringe_visibility(&[(0.0, 1.0), (1.0, 2.0)], ExtractionRule::AdjacentPair).is_err());
        assert!(
            extract_fringe_visibility(&[(0.0, 1.0), (0.0, 2.0), (1.0, 0.0)], ExtractionRule::AdjacentPair).is_err()
        );
    }

    proptest! {
        #[test]
        fn visibility_is_scale_invariant(hi in 1e-3_f64..10.0, frac in 0.0_f64..1.0, scale in 1e-6_f64..1e6) {
            let lo = hi * frac;
            let a = visibility_from_extrema(hi, lo).unwrap();
            let b = visibility_from_extrema(hi * scale, lo * scale).unwrap();
            prop_assert!((a - b).abs() <= 1e-14);
        }

        #[test]
        fn predictability_is_scale_invariant(p1 in 0.0_f64..1.0, p2 in 1e-6_f64..1.0, scale in 1e-6_f64..1e6) {
            let a = predictability_from_probs(p1, p2).unwrap();
            let b = predictability_from_probs(p1 * scale, p2 * scale).unwrap();
            prop_assert!((a - b).abs() <= 1e-14);
        }

        #[test]
        fn hyperbolic_pairs_are_coherent(x in -10.0_f64..10.0) {
            let r = duality_check(1.0 / x.cosh(), x.abs().tanh()).unwrap();
            prop_assert!(r.residual.abs() <= 1e-12);
        }
    }
}
