//! The lens region `L^n_k(h, r)`: the intersection of two radius-`r` disks
//! in `S^n_k` whose centers sit `2(r-h)` apart.
//!
//! Provides membership and boundary classification, the volume by polar
//! quadrature about one center and by Monte Carlo, the dihedral angle along
//! the edge where the two boundary spheres meet, the integer multiplicity
//! constant derived from it, and Monte Carlo estimates for intersections of
//! whole families of disks centered on a sphere whose directions form a
//! `pi/2`-net.

use crate::ball::{ball_volume, sample_uniform_ball, unit_sphere_area};
use crate::curvature::{comparison_angle, mk3, Curvature};
use crate::error::{Error, Result};
use crate::model::{
    distance, distance_unchecked, geodesic_eval, initial_direction, random_tangent,
    tangent_basis, ModelPoint,
};
use crate::quad;
use rand::Rng;

/// Geometry of a lens region, with the ambient configuration realized
/// explicitly: centers `a1`, `a2`, midpoint `p` of the axis, and the two
/// axis poles `q1`, `q2`.
#[derive(Clone, Debug)]
pub struct LensParams {
    pub n: usize,
    pub k: Curvature,
    pub h: f64,
    pub r: f64,
    pub a1: ModelPoint,
    pub a2: ModelPoint,
    pub p: ModelPoint,
    pub q1: ModelPoint,
    pub q2: ModelPoint,
}

impl LensParams {
    pub fn new(n: usize, k: Curvature, h: f64, r: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid_argument(format!("need n >= 2, got {n}")));
        }
        let half_diam = 0.5 * k.space_form_diameter();
        if !(h > 0.0 && h <= r && r <= half_diam + 1e-12) {
            return Err(Error::invalid_argument(format!(
                "need 0 < h <= r <= diam/2 = {half_diam}, got h = {h}, r = {r}"
            )));
        }
        let p = ModelPoint::base(k, n);
        let basis = tangent_basis(k, &p);
        let axis = &basis[0];
        let neg_axis: Vec<f64> = axis.iter().map(|c| -c).collect();
        let a1 = geodesic_eval(k, &p, axis, r - h)?;
        let a2 = geodesic_eval(k, &p, &neg_axis, r - h)?;
        let q1 = geodesic_eval(k, &p, &neg_axis, h)?;
        let q2 = geodesic_eval(k, &p, axis, h)?;
        let lens = LensParams {
            n,
            k,
            h,
            r,
            a1,
            a2,
            p,
            q1,
            q2,
        };
        lens.check_configuration()?;
        Ok(lens)
    }

    /// Center separation `2(r - h)`.
    pub fn center_separation(&self) -> f64 {
        2.0 * (self.r - self.h)
    }

    fn check_configuration(&self) -> Result<()> {
        let k = self.k;
        let checks = [
            (distance(k, &self.a1, &self.a2)?, self.center_separation()),
            (distance(k, &self.p, &self.q1)?, self.h),
            (distance(k, &self.p, &self.q2)?, self.h),
            (distance(k, &self.a1, &self.q1)?, self.r),
            (distance(k, &self.a2, &self.q2)?, self.r),
        ];
        for (got, want) in checks {
            if (got - want).abs() > 1e-12 * (1.0 + want) {
                return Err(Error::numerical_domain(format!(
                    "lens configuration drift: {got} vs {want}"
                )));
            }
        }
        Ok(())
    }

    fn check_point(&self, x: &ModelPoint) -> Result<()> {
        if x.dim() != self.n {
            return Err(Error::invalid_argument(format!(
                "point dimension {} does not match lens dimension {}",
                x.dim(),
                self.n
            )));
        }
        x.check_constraint(self.k)
    }
}

/// Which part of the lens a point belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stratum {
    Interior,
    /// Boundary face on the sphere around the first center.
    D1,
    /// Boundary face on the sphere around the second center.
    D2,
    /// The edge where both faces meet.
    S0,
    Outside,
}

/// Membership: within distance `r` of both centers.
pub fn lens_contains(lens: &LensParams, x: &ModelPoint) -> Result<bool> {
    lens.check_point(x)?;
    Ok(distance(lens.k, x, &lens.a1)? <= lens.r && distance(lens.k, x, &lens.a2)? <= lens.r)
}

/// Boundary classification by which distance constraints are active within
/// `tol`.
pub fn boundary_stratum(lens: &LensParams, x: &ModelPoint, tol: f64) -> Result<Stratum> {
    lens.check_point(x)?;
    let d1 = distance(lens.k, x, &lens.a1)?;
    let d2 = distance(lens.k, x, &lens.a2)?;
    if d1 > lens.r + tol || d2 > lens.r + tol {
        return Ok(Stratum::Outside);
    }
    let on1 = (d1 - lens.r).abs() <= tol;
    let on2 = (d2 - lens.r).abs() <= tol;
    Ok(match (on1, on2) {
        (true, true) => Stratum::S0,
        (true, false) => Stratum::D1,
        (false, true) => Stratum::D2,
        (false, false) => Stratum::Interior,
    })
}

/// Cosine of the polar cap angle at radius `t` about the first center:
/// a point at distance `t` from `a1` lies within `r` of `a2` exactly when
/// its polar angle toward `a2` is at most `phi*(t)`, and
/// `cos phi*(t) = (m(t) + m(D) - k m(t) m(D) - m(r)) / (m'(t) m'(D))`
/// with `D` the center separation. Clamped into `[-1, 1]`; degenerate
/// arguments (`t = 0` or `D = 0`) return `1`.
pub fn cap_cos_angle(lens: &LensParams, t: f64) -> Result<f64> {
    if !(0.0..=lens.r + 1e-12).contains(&t) {
        return Err(Error::invalid_argument(format!(
            "t = {t} outside [0, r = {}]",
            lens.r
        )));
    }
    let d = lens.center_separation();
    if t == 0.0 || d == 0.0 {
        return Ok(1.0);
    }
    let kk = lens.k.k();
    let (mt, m1t, _) = mk3(kk, t);
    let (md, m1d, _) = mk3(kk, d);
    let mr = mk3(kk, lens.r).0;
    let raw = (mt + md - kk * mt * md - mr) / (m1t * m1d);
    Ok(raw.clamp(-1.0, 1.0))
}

/// `W_d(phi) = integral_0^phi sin^d(psi) dpsi` by the standard reduction
/// recurrence (exact, no inner quadrature).
pub fn sin_power_integral(d: usize, phi: f64) -> f64 {
    match d {
        0 => phi,
        1 => 1.0 - phi.cos(),
        _ => {
            let (s, c) = phi.sin_cos();
            (-c * s.powi(d as i32 - 1) + (d as f64 - 1.0) * sin_power_integral(d - 2, phi))
                / d as f64
        }
    }
}

/// Lens volume by polar quadrature about the first center:
/// `vol(S^(n-2)) * integral_0^r m'(t)^(n-1) W_{n-2}(phi*(t)) dt`.
///
/// Polar coordinates about `a1` cover the lens, so this equals the volume of
/// the intersection exactly. The integrand has a kink where `phi*`
/// saturates; the integral is split there.
pub fn lens_volume_quadrature(lens: &LensParams, rel_tol: f64) -> Result<f64> {
    let d = lens.center_separation();
    if d == 0.0 {
        return ball_volume(lens.k, lens.n, lens.r);
    }
    let kk = lens.k.k();
    let n = lens.n;
    let integrand = |t: f64| {
        if t <= 0.0 {
            return 0.0;
        }
        let cosphi = cap_cos_angle(lens, t).expect("t within [0, r]");
        let phi = cosphi.acos();
        mk3(kk, t).1.powi(n as i32 - 1) * sin_power_integral(n - 2, phi)
    };
    // phi* saturates (at pi when D < r, at 0 when D > r) below t0 = |r - D|.
    let t0 = (lens.r - d).abs().min(lens.r);
    let abs_tol = quad::DEFAULT_ABS_TOL;
    let mut total = 0.0;
    if t0 > 0.0 {
        total += quad::integrate(&integrand, 0.0, t0, abs_tol, rel_tol)?.value;
    }
    if lens.r > t0 {
        total += quad::integrate(&integrand, t0, lens.r, abs_tol, rel_tol)?.value;
    }
    Ok(unit_sphere_area(n - 2) * total)
}

/// Monte Carlo lens volume: the ball volume around the first center scaled
/// by the acceptance fraction of uniform ball samples landing within `r` of
/// the second center. Returns the estimate and its binomial standard error.
pub fn lens_volume_mc(lens: &LensParams, n_samples: usize, seed: u64) -> Result<(f64, f64)> {
    if n_samples < 1000 {
        return Err(Error::invalid_argument(format!(
            "need at least 1000 samples, got {n_samples}"
        )));
    }
    let vol_ball = ball_volume(lens.k, lens.n, lens.r)?;
    let pts = sample_uniform_ball(lens.k, lens.n, &lens.a1, lens.r, n_samples, seed)?;
    let kk = lens.k.k();
    let a2 = lens.a2.coords();
    let accepted = pts
        .iter()
        .filter(|pt| distance_unchecked(kk, pt.coords(), a2) <= lens.r)
        .count();
    let frac = accepted as f64 / n_samples as f64;
    let stderr = vol_ball * (frac * (1.0 - frac) / n_samples as f64).sqrt();
    Ok((vol_ball * frac, stderr))
}

/// Interior wedge angle of the lens along the edge where the two boundary
/// spheres meet: `pi` minus the comparison angle of the isoceles triangle
/// with legs `r`, `r` and base `2(r-h)`. By convention `pi` when `h = r`
/// (smooth boundary, no edge).
pub fn dihedral_angle(lens: &LensParams) -> Result<f64> {
    if lens.center_separation() == 0.0 {
        return Ok(std::f64::consts::PI);
    }
    let gamma = comparison_angle(lens.k, lens.r, lens.r, lens.center_separation())?;
    Ok(std::f64::consts::PI - gamma)
}

/// The multiplicity constant: the smallest integer strictly larger than the
/// tangent-cone density ratio `2 pi / alpha` at an edge point, where `alpha`
/// is the dihedral angle. Returns `2` when `h = r` (smooth boundary).
pub fn c_constant(lens: &LensParams) -> Result<u64> {
    if lens.center_separation() == 0.0 {
        return Ok(2);
    }
    let alpha = dihedral_angle(lens)?;
    let ratio = 2.0 * std::f64::consts::PI / alpha;
    // Snap near-integers before taking the strict ceiling so that exact
    // ratios (the lune family) are not lost to rounding.
    let rounded = ratio.round();
    if (ratio - rounded).abs() < 1e-9 {
        Ok(rounded as u64 + 1)
    } else {
        Ok(ratio.ceil() as u64)
    }
}

/// A point on the edge `S_0` of the lens (equidistant from both centers at
/// distance exactly `r`), used by density probes.
pub fn edge_point(lens: &LensParams) -> Result<ModelPoint> {
    if lens.h >= lens.r {
        return Err(Error::invalid_argument(
            "the edge is the whole boundary sphere when h = r".into(),
        ));
    }
    let kk = lens.k.k();
    // Hinge at the axis midpoint: legs r - h (to a center) and s (orthogonal
    // to the axis), hypotenuse r. Solve m(s) from the right-angle law of
    // cosines: m(r) = m(r-h) + m(s) m''(r-h).
    let (m_rh, _, m2_rh) = mk3(kk, lens.r - lens.h);
    let m_s = (mk3(kk, lens.r).0 - m_rh) / m2_rh;
    let s = lens.k.inv_m(m_s)?;
    let basis = tangent_basis(lens.k, &lens.p);
    let q = geodesic_eval(lens.k, &lens.p, &basis[1], s)?;
    // Confirm the construction before handing the point out.
    for center in [&lens.a1, &lens.a2] {
        let d = distance(lens.k, &q, center)?;
        if (d - lens.r).abs() > 1e-9 * (1.0 + lens.r) {
            return Err(Error::numerical_domain(format!(
                "edge point drifted: distance {d} vs r = {}",
                lens.r
            )));
        }
    }
    Ok(q)
}

/// Monte Carlo estimate of the local density ratio
/// `vol B(q, rho) / vol(B(q, rho) ∩ L)` at an edge point. Test oracle for
/// [`c_constant`].
pub fn edge_density_probe(
    lens: &LensParams,
    rho: f64,
    n_samples: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    let q = edge_point(lens)?;
    let pts = sample_uniform_ball(lens.k, lens.n, &q, rho, n_samples, seed)?;
    let kk = lens.k.k();
    let inside = pts
        .iter()
        .filter(|pt| {
            distance_unchecked(kk, pt.coords(), lens.a1.coords()) <= lens.r
                && distance_unchecked(kk, pt.coords(), lens.a2.coords()) <= lens.r
        })
        .count();
    if inside == 0 {
        return Err(Error::numerical_domain(
            "density probe found no interior samples".into(),
        ));
    }
    let f = inside as f64 / n_samples as f64;
    let sigma_f = (f * (1.0 - f) / n_samples as f64).sqrt();
    // ratio = 1/f; first-order error propagation.
    Ok((1.0 / f, sigma_f / (f * f)))
}

/// A family of disk centers on the metric sphere `S(base, radius)` whose
/// directions at `base` form a `pi/2`-net.
#[derive(Clone, Debug)]
pub struct NetSpec {
    pub base: ModelPoint,
    pub radius: f64,
    pub points: Vec<ModelPoint>,
    k: Curvature,
}

impl NetSpec {
    /// Validate distances and certify the net property by rejection
    /// sampling of directions (`n_probe` seeded directions, none farther
    /// than `pi/2 + tol` from every net direction).
    pub fn new(
        k: Curvature,
        base: ModelPoint,
        radius: f64,
        points: Vec<ModelPoint>,
        n_probe: usize,
        tol: f64,
        seed: u64,
    ) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::invalid_argument("empty net".into()));
        }
        if !(radius > 0.0) || radius > 0.5 * k.space_form_diameter() + 1e-12 {
            return Err(Error::invalid_argument(format!(
                "net radius {radius} outside (0, diam/2]"
            )));
        }
        base.check_constraint(k)?;
        for pt in &points {
            let d = distance(k, &base, pt)?;
            if (d - radius).abs() > 1e-12 * (1.0 + radius) {
                return Err(Error::invalid_argument(format!(
                    "net point at distance {d}, expected {radius}"
                )));
            }
        }
        let spec = NetSpec {
            base,
            radius,
            points,
            k,
        };
        spec.certify(n_probe, tol, seed)?;
        Ok(spec)
    }

    fn directions(&self) -> Result<Vec<Vec<f64>>> {
        self.points
            .iter()
            .map(|pt| initial_direction(self.k, &self.base, pt))
            .collect()
    }

    fn certify(&self, n_probe: usize, tol: f64, seed: u64) -> Result<()> {
        let dirs = self.directions()?;
        let basis = tangent_basis(self.k, &self.base);
        let mut rng = crate::rng::shard_rng(seed, 1);
        let kk = self.k.k();
        let cos_bound = (std::f64::consts::FRAC_PI_2 + tol).cos();
        for _ in 0..n_probe {
            let v = random_tangent(self.k, &self.base, &basis, &mut rng);
            let covered = dirs.iter().any(|d| {
                let mut dot = 0.0;
                for i in 0..v.len() {
                    dot += d[i] * v[i];
                }
                if kk < 0.0 {
                    dot -= 2.0 * d[0] * v[0];
                }
                dot >= cos_bound
            });
            if !covered {
                return Err(Error::invalid_argument(
                    "directions do not form a pi/2-net".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Monte Carlo volume of the intersection of all disks `D(c, r)` for `c` in
/// the net, sampling uniformly in `D(base, r)` (which contains the
/// intersection when the directions form a `pi/2`-net).
pub fn net_intersection_volume_mc(
    net: &NetSpec,
    r: f64,
    n_samples: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    if net.points.is_empty() {
        return Err(Error::invalid_argument("empty net".into()));
    }
    if !(r > 0.0) || r > 0.5 * net.k.space_form_diameter() + 1e-12 {
        return Err(Error::invalid_argument(format!(
            "r = {r} outside (0, diam/2]"
        )));
    }
    let vol_ball = ball_volume(net.k, net.base.dim(), r)?;
    let pts = sample_uniform_ball(net.k, net.base.dim(), &net.base, r, n_samples, seed)?;
    let kk = net.k.k();
    let accepted = pts
        .iter()
        .filter(|pt| {
            net.points
                .iter()
                .all(|c| distance_unchecked(kk, pt.coords(), c.coords()) <= r)
        })
        .count();
    let f = accepted as f64 / n_samples as f64;
    let stderr = vol_ball * (f * (1.0 - f) / n_samples as f64).sqrt();
    Ok((vol_ball * f, stderr))
}

/// An antipodal pair on `S(base, radius)` plus `extra` additional net points
/// sampled at directions well separated from the existing ones. Any superset
/// of an antipodal pair is still a `pi/2`-net.
pub fn random_net(
    k: Curvature,
    n: usize,
    radius: f64,
    extra: usize,
    n_probe: usize,
    tol: f64,
    seed: u64,
) -> Result<NetSpec> {
    let base = ModelPoint::base(k, n);
    let basis = tangent_basis(k, &base);
    let mut rng = crate::rng::shard_rng(seed, 0);
    let v = random_tangent(k, &base, &basis, &mut rng);
    let neg: Vec<f64> = v.iter().map(|c| -c).collect();
    let mut dirs = vec![v, neg];
    // Extras keep an angular gap from the existing directions so that each
    // one cuts a volume visible to the Monte Carlo estimates.
    let min_gap = 0.2;
    while dirs.len() < extra + 2 {
        let cand = random_tangent(k, &base, &basis, &mut rng);
        let kk = k.k();
        let ok = dirs.iter().all(|d| {
            let mut dot = 0.0;
            for i in 0..cand.len() {
                dot += d[i] * cand[i];
            }
            if kk < 0.0 {
                dot -= 2.0 * d[0] * cand[0];
            }
            dot.clamp(-1.0, 1.0).acos() > min_gap
        });
        if ok {
            dirs.push(cand);
        }
    }
    let points = dirs
        .iter()
        .map(|d| geodesic_eval(k, &base, d, radius))
        .collect::<Result<Vec<_>>>()?;
    NetSpec::new(k, base, radius, points, n_probe, tol, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn k(v: f64) -> Curvature {
        Curvature::new(v).unwrap()
    }

    #[test]
    fn configuration_distances() {
        let lens = LensParams::new(3, k(1.0), PI / 4.0, PI / 2.0).unwrap();
        assert_relative_eq!(
            distance(k(1.0), &lens.a1, &lens.a2).unwrap(),
            PI / 2.0,
            max_relative = 1e-12
        );
        assert!(lens_contains(&lens, &lens.p).unwrap());
        assert!(lens_contains(&lens, &lens.q1).unwrap());
    }

    #[test]
    fn stratum_classification() {
        let lens = LensParams::new(3, k(1.0), PI / 4.0, PI / 2.0).unwrap();
        assert_eq!(
            boundary_stratum(&lens, &lens.p, 1e-9).unwrap(),
            Stratum::Interior
        );
        // q1 sits on the sphere around a1 only.
        assert_eq!(boundary_stratum(&lens, &lens.q1, 1e-9).unwrap(), Stratum::D1);
        assert_eq!(boundary_stratum(&lens, &lens.q2, 1e-9).unwrap(), Stratum::D2);
        let edge = edge_point(&lens).unwrap();
        assert_eq!(boundary_stratum(&lens, &edge, 1e-9).unwrap(), Stratum::S0);
        // Beyond the far pole: outside.
        let basis = tangent_basis(k(1.0), &lens.p);
        let outside = geodesic_eval(k(1.0), &lens.p, &basis[0], lens.h + 0.2).unwrap();
        assert_eq!(
            boundary_stratum(&lens, &outside, 1e-9).unwrap(),
            Stratum::Outside
        );
        assert!(!lens_contains(&lens, &outside).unwrap());
    }

    #[test]
    fn cap_angle_examples() {
        // Spherical case with r = pi/2, h = pi/4, t = pi/2: cos phi* = 0.
        let lens = LensParams::new(3, k(1.0), PI / 4.0, PI / 2.0).unwrap();
        assert_relative_eq!(
            cap_cos_angle(&lens, PI / 2.0).unwrap(),
            0.0,
            epsilon = 1e-12
        );
        // Coincident disks: degenerate 1.
        let ball = LensParams::new(3, k(1.0), PI / 2.0, PI / 2.0).unwrap();
        assert_eq!(cap_cos_angle(&ball, 0.7).unwrap(), 1.0);
        // At t = r with D > 0 the cap is strictly narrower than pi/2 ...
        let t_at_r = cap_cos_angle(&lens, lens.r).unwrap();
        assert!(t_at_r > 0.0);
        // ... and phi* is nonincreasing in t past the saturation point.
        let mut prev = f64::INFINITY;
        for j in 1..=40 {
            let t = lens.r * j as f64 / 40.0;
            let phi = cap_cos_angle(&lens, t).unwrap().acos();
            if j > 1 {
                assert!(phi <= prev + 1e-12);
            }
            prev = phi;
        }
    }

    #[test]
    fn sin_power_integral_matches_quadrature() {
        for d in 0..5 {
            for &phi in &[0.3, 1.0, PI / 2.0, 2.4, PI] {
                let exact = sin_power_integral(d, phi);
                let quad = quad::integrate_default(|x| x.sin().powi(d as i32), 0.0, phi)
                    .unwrap()
                    .value;
                assert_relative_eq!(exact, quad, epsilon = 1e-10, max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn coincident_disks_volume_is_ball() {
        let lens = LensParams::new(3, k(1.0), 1.0, 1.0).unwrap();
        assert_relative_eq!(
            lens_volume_quadrature(&lens, 1e-10).unwrap(),
            ball_volume(k(1.0), 3, 1.0).unwrap(),
            max_relative = 1e-10
        );
    }

    #[test]
    fn flat_unit_disk() {
        let lens = LensParams::new(2, k(0.0), 1.0, 1.0).unwrap();
        assert_relative_eq!(
            lens_volume_quadrature(&lens, 1e-10).unwrap(),
            PI,
            max_relative = 1e-10
        );
    }

    #[test]
    fn lune_volumes() {
        // For r = pi/2 on the 3-sphere the lens is a wedge between two
        // great hyperplanes with dihedral angle 2h: volume (2h/2pi) vol S^3.
        for m in 2..=6u32 {
            let h = PI / m as f64;
            let lens = LensParams::new(3, k(1.0), h, PI / 2.0).unwrap();
            let vol = lens_volume_quadrature(&lens, 1e-10).unwrap();
            assert_relative_eq!(
                vol,
                2.0 * PI * PI / m as f64,
                max_relative = 1e-8
            );
        }
    }

    #[test]
    fn quadrature_vs_mc_small() {
        let lens = LensParams::new(2, k(-1.0), 0.6, 1.1).unwrap();
        let vq = lens_volume_quadrature(&lens, 1e-10).unwrap();
        let (vmc, se) = lens_volume_mc(&lens, 200_000, 17).unwrap();
        assert!(
            (vq - vmc).abs() <= 3.0 * se,
            "quad {vq} vs mc {vmc} +- {se}"
        );
    }

    #[test]
    fn mc_coincident_is_exact() {
        let lens = LensParams::new(2, k(0.0), 1.0, 1.0).unwrap();
        let (v, se) = lens_volume_mc(&lens, 1000, 3).unwrap();
        assert_relative_eq!(v, PI, max_relative = 1e-12);
        assert_eq!(se, 0.0);
    }

    #[test]
    fn volume_monotone_in_h() {
        let mut prev = 0.0;
        for j in 1..=8 {
            let h = 0.1 * j as f64;
            let lens = LensParams::new(3, k(1.0), h, 1.0).unwrap();
            let v = lens_volume_quadrature(&lens, 1e-9).unwrap();
            assert!(v > prev, "h = {h}: {v} <= {prev}");
            prev = v;
        }
    }

    #[test]
    fn swap_symmetry_via_mc_about_either_center() {
        // The quadrature is written about a1; swapping centers is the same
        // lens, so an MC run about a2 must agree.
        let lens = LensParams::new(3, k(1.0), 0.5, 1.2).unwrap();
        let vq = lens_volume_quadrature(&lens, 1e-10).unwrap();
        let swapped = LensParams {
            a1: lens.a2.clone(),
            a2: lens.a1.clone(),
            ..lens.clone()
        };
        let vq_swapped = lens_volume_quadrature(&swapped, 1e-10).unwrap();
        assert_relative_eq!(vq, vq_swapped, max_relative = 1e-9);
    }

    #[test]
    fn dihedral_and_multiplicity() {
        // Lune: alpha = 2h, density ratio m, constant m + 1.
        for m in 2..=6u64 {
            let h = PI / m as f64;
            let lens = LensParams::new(3, k(1.0), h, PI / 2.0).unwrap();
            assert_relative_eq!(
                dihedral_angle(&lens).unwrap(),
                2.0 * h,
                max_relative = 1e-12
            );
            assert_eq!(c_constant(&lens).unwrap(), m + 1);
        }
        let ball = LensParams::new(3, k(1.0), 1.0, 1.0).unwrap();
        assert_relative_eq!(dihedral_angle(&ball).unwrap(), PI);
        assert_eq!(c_constant(&ball).unwrap(), 2);
        // Angle increases with h; the constant is nonincreasing.
        let mut prev_alpha = 0.0;
        let mut prev_c = u64::MAX;
        for j in 1..=9 {
            let h = 0.15 * j as f64;
            let lens = LensParams::new(3, k(1.0), h, 1.4).unwrap();
            let alpha = dihedral_angle(&lens).unwrap();
            let c = c_constant(&lens).unwrap();
            assert!(alpha > prev_alpha);
            assert!(c <= prev_c);
            prev_alpha = alpha;
            prev_c = c;
        }
    }

    #[test]
    fn antipodal_net_matches_lens() {
        // Two antipodal net points at radius R give exactly the lens with
        // h = r - R.
        let kv = k(1.0);
        let r = 1.3;
        let big_r = 0.4;
        let net = random_net(kv, 3, big_r, 0, 20_000, 1e-6, 5).unwrap();
        let (v, se) = net_intersection_volume_mc(&net, r, 400_000, 6).unwrap();
        let lens = LensParams::new(3, kv, r - big_r, r).unwrap();
        let vq = lens_volume_quadrature(&lens, 1e-10).unwrap();
        assert!((v - vq).abs() <= 3.0 * se, "net {v} +- {se} vs lens {vq}");
    }

    #[test]
    fn third_point_cuts_volume() {
        let kv = k(1.0);
        let r = 1.3;
        let big_r = 0.4;
        let pair = random_net(kv, 3, big_r, 0, 20_000, 1e-6, 8).unwrap();
        let triple = random_net(kv, 3, big_r, 1, 20_000, 1e-6, 8).unwrap();
        let (v2, se2) = net_intersection_volume_mc(&pair, r, 400_000, 9).unwrap();
        let (v3, se3) = net_intersection_volume_mc(&triple, r, 400_000, 9).unwrap();
        assert!(
            v3 < v2 - 3.0 * (se2 + se3),
            "triple {v3} not below pair {v2}"
        );
    }

    #[test]
    fn non_net_rejected() {
        // A single point is never a pi/2-net.
        let kv = k(1.0);
        let base = ModelPoint::base(kv, 3);
        let basis = tangent_basis(kv, &base);
        let pt = geodesic_eval(kv, &base, &basis[0], 0.5).unwrap();
        assert!(NetSpec::new(kv, base, 0.5, vec![pt], 5_000, 1e-6, 1).is_err());
    }

    #[test]
    fn edge_density_probe_matches_wedge() {
        let m = 4u64;
        let lens = LensParams::new(3, k(1.0), PI / m as f64, PI / 2.0).unwrap();
        let (ratio, sigma) = edge_density_probe(&lens, 0.1, 200_000, 11).unwrap();
        assert!(
            (ratio - m as f64).abs() <= 3.0 * sigma,
            "ratio {ratio} vs {m} +- {sigma}"
        );
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(LensParams::new(3, k(1.0), 0.0, 1.0).is_err());
        assert!(LensParams::new(3, k(1.0), 1.2, 1.0).is_err());
        assert!(LensParams::new(3, k(1.0), 1.0, 2.0).is_err()); // r > diam/2
        assert!(LensParams::new(1, k(1.0), 0.3, 1.0).is_err());
    }
}
