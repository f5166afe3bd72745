//! The `m_k` calculus: the distance-modifying function of a constant
//! curvature bound and the unified law of cosines built on it.
//!
//! `m_k` is the solution of `y'' + k y = 1` with `y(0) = y'(0) = 0`:
//!
//! ```text
//!          (1 - cos(sqrt(k) t)) / k      k > 0
//! m_k(t) = t^2 / 2                       k = 0
//!          (cosh(sqrt(|k|) t) - 1) / |k| k < 0
//! ```
//!
//! It satisfies `m'' + k m = 1` and `(m')^2 = m (1 + m'')` identically, and
//! turns the spherical/euclidean/hyperbolic laws of cosines into the single
//! formula
//!
//! ```text
//! m(c) = m(a) + m(b) - k m(a) m(b) - m'(a) m'(b) cos(alpha)
//! ```
//!
//! for a hinge with sides `a`, `b` and enclosed angle `alpha`. The collinear
//! case `alpha = pi` gives the addition rule
//! `m(a+b) = m(a) + m(b) - k m(a) m(b) + m'(a) m'(b)`; with the sign of the
//! last term flipped (`alpha = 0`) the same expression yields `m(|a-b|)`.

use crate::error::{Error, Result};

/// When `|k| t^2` falls below this, the closed-form branches of `m_k` lose
/// digits to cancellation and the truncated power series is used instead.
pub const SERIES_THRESHOLD: f64 = 1e-8;

/// Rounding slack accepted when clamping a cosine into `[-1, 1]` or an
/// `m(c)` value into its invertible range. Larger excursions are treated as
/// logic errors, not rounding.
pub const COS_CLAMP_TOL: f64 = 1e-9;

/// A lower sectional curvature bound with stable `m_k` evaluation across
/// `k = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Curvature {
    k: f64,
}

impl Curvature {
    pub fn new(k: f64) -> Result<Self> {
        if !k.is_finite() {
            return Err(Error::invalid_argument(format!(
                "curvature must be finite, got {k}"
            )));
        }
        Ok(Curvature { k })
    }

    #[inline]
    pub fn k(self) -> f64 {
        self.k
    }

    /// Diameter of the space form `S^n_k`: `pi / sqrt(k)` for `k > 0`,
    /// infinite otherwise.
    pub fn space_form_diameter(self) -> f64 {
        if self.k > 0.0 {
            std::f64::consts::PI / self.k.sqrt()
        } else {
            f64::INFINITY
        }
    }

    /// `(m_k(t), m_k'(t), m_k''(t))`.
    ///
    /// Falls back to the power series truncated after the `t^8` term when
    /// `|k| t^2 < 1e-8`, which keeps all three values continuous in `k`
    /// across zero.
    pub fn mk_family(self, t: f64) -> Result<(f64, f64, f64)> {
        if !t.is_finite() {
            return Err(Error::invalid_argument(format!(
                "mk_family requires finite t, got {t}"
            )));
        }
        Ok(mk3(self.k, t))
    }

    #[inline]
    pub fn m(self, t: f64) -> f64 {
        mk3(self.k, t).0
    }

    #[inline]
    pub fn m1(self, t: f64) -> f64 {
        mk3(self.k, t).1
    }

    #[inline]
    pub fn m2(self, t: f64) -> f64 {
        mk3(self.k, t).2
    }

    /// Inverse of `m_k` on the monotone branch `[0, diam S^n_k]`.
    ///
    /// For `k > 0` the input must lie in `[0, 2/k]` up to the clamping
    /// tolerance; excursions beyond it are a numerical-domain error.
    pub fn inv_m(self, mc: f64) -> Result<f64> {
        let k = self.k;
        if !mc.is_finite() {
            return Err(Error::numerical_domain(format!("inv_m of {mc}")));
        }
        if k > 0.0 {
            // cos(sqrt(k) c) = 1 - k m(c), so k m(c) must be in [0, 2].
            let x = 1.0 - k * mc;
            if x < -1.0 - COS_CLAMP_TOL || x > 1.0 + COS_CLAMP_TOL {
                return Err(Error::numerical_domain(format!(
                    "m(c) = {mc} outside [0, 2/k] for k = {k}"
                )));
            }
            Ok(x.clamp(-1.0, 1.0).acos() / k.sqrt())
        } else {
            if mc < -COS_CLAMP_TOL {
                return Err(Error::numerical_domain(format!(
                    "m(c) = {mc} negative for k = {k}"
                )));
            }
            let mc = mc.max(0.0);
            if k == 0.0 {
                Ok((2.0 * mc).sqrt())
            } else {
                let x = 1.0 + (-k) * mc;
                Ok(x.max(1.0).acosh() / (-k).sqrt())
            }
        }
    }
}

/// Branch/series evaluation of `(m, m', m'')` for curvature `k` at `t`.
///
/// `m` is even and `m'` odd, so negative arguments (which arise as `r - h`
/// with `h > r`) need no special handling.
#[inline]
pub fn mk3(k: f64, t: f64) -> (f64, f64, f64) {
    let kt2 = (k * t * t).abs();
    if kt2 < SERIES_THRESHOLD {
        // m   = t^2/2 - k t^4/4! + k^2 t^6/6! - k^3 t^8/8!
        // m'  = t - k t^3/3! + k^2 t^5/5! - k^3 t^7/7!
        // m'' = 1 - k t^2/2! + k^2 t^4/4! - k^3 t^6/6!
        let t2 = t * t;
        let kt = k * t2;
        let m = t2 * (0.5 + kt * (-1.0 / 24.0 + kt * (1.0 / 720.0 - kt / 40320.0)));
        let m1 = t * (1.0 + kt * (-1.0 / 6.0 + kt * (1.0 / 120.0 - kt / 5040.0)));
        let m2 = 1.0 + kt * (-0.5 + kt * (1.0 / 24.0 - kt / 720.0));
        (m, m1, m2)
    } else if k > 0.0 {
        let s = k.sqrt();
        let (sin, cos) = (s * t).sin_cos();
        ((1.0 - cos) / k, sin / s, cos)
    } else {
        let s = (-k).sqrt();
        let (sinh, cosh) = ((s * t).sinh(), (s * t).cosh());
        ((cosh - 1.0) / (-k), sinh / s, cosh)
    }
}

/// A geodesic hinge: two side lengths and the enclosed angle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Hinge {
    pub side_a: f64,
    pub side_b: f64,
    pub angle: f64,
}

impl Hinge {
    pub fn new(side_a: f64, side_b: f64, angle: f64) -> Result<Self> {
        if !(side_a.is_finite() && side_b.is_finite() && angle.is_finite()) {
            return Err(Error::invalid_argument("hinge fields must be finite".into()));
        }
        if side_a < 0.0 || side_b < 0.0 {
            return Err(Error::invalid_argument(format!(
                "hinge sides must be nonnegative, got {side_a}, {side_b}"
            )));
        }
        if !(0.0..=std::f64::consts::PI).contains(&angle) {
            return Err(Error::invalid_argument(format!(
                "hinge angle must lie in [0, pi], got {angle}"
            )));
        }
        Ok(Hinge {
            side_a,
            side_b,
            angle,
        })
    }
}

/// Third side of a hinge via the unified law of cosines, inverted through
/// the monotone branch of `m_k`.
pub fn side_from_hinge(k: Curvature, hinge: &Hinge) -> Result<f64> {
    let diam = k.space_form_diameter();
    if hinge.side_a > diam || hinge.side_b > diam {
        return Err(Error::invalid_argument(format!(
            "hinge sides {}, {} exceed the space-form diameter {diam}",
            hinge.side_a, hinge.side_b
        )));
    }
    let (ma, m1a, _) = mk3(k.k(), hinge.side_a);
    let (mb, m1b, _) = mk3(k.k(), hinge.side_b);
    let mc = ma + mb - k.k() * ma * mb - m1a * m1b * hinge.angle.cos();
    let c = k.inv_m(mc)?;
    // The exact result lies in [|a-b|, min(a+b, diam)]; inversion noise may
    // leave it a few ulps outside.
    let lo = (hinge.side_a - hinge.side_b).abs();
    let hi = (hinge.side_a + hinge.side_b).min(diam);
    Ok(c.clamp(lo.min(hi), hi))
}

/// Comparison angle at the corner between sides `a` and `b` of a geodesic
/// triangle with opposite side `c`, from the law of cosines solved for
/// `cos(alpha)`.
pub fn comparison_angle(k: Curvature, a: f64, b: f64, c: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite() && c.is_finite()) || a <= 0.0 || b <= 0.0 || c < 0.0 {
        return Err(Error::invalid_argument(format!(
            "comparison_angle requires a, b > 0 and c >= 0, got ({a}, {b}, {c})"
        )));
    }
    let tol = COS_CLAMP_TOL * (1.0 + a + b + c);
    if c > a + b + tol || c < (a - b).abs() - tol {
        return Err(Error::InvalidTriangle(format!(
            "sides ({a}, {b}, {c}) violate the triangle inequality"
        )));
    }
    let diam = k.space_form_diameter();
    if a > diam + tol || b > diam + tol || c > diam + tol {
        return Err(Error::invalid_argument(format!(
            "sides ({a}, {b}, {c}) exceed the space-form diameter {diam}"
        )));
    }
    let kk = k.k();
    let (ma, m1a, _) = mk3(kk, a);
    let (mb, m1b, _) = mk3(kk, b);
    let mc = mk3(kk, c).0;
    let den = m1a * m1b;
    if den.abs() < 1e-300 {
        return Err(Error::numerical_domain(format!(
            "degenerate hinge: m'({a}) m'({b}) = 0, angle undetermined"
        )));
    }
    let cos_alpha = (ma + mb - kk * ma * mb - mc) / den;
    if cos_alpha < -1.0 - COS_CLAMP_TOL || cos_alpha > 1.0 + COS_CLAMP_TOL {
        return Err(Error::numerical_domain(format!(
            "cos(angle) = {cos_alpha} for sides ({a}, {b}, {c})"
        )));
    }
    Ok(cos_alpha.clamp(-1.0, 1.0).acos())
}
