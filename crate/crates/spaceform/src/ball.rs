//! Volumes of metric balls in `S^n_k` and uniform sampling inside them.

use crate::curvature::{mk3, Curvature};
use crate::error::{Error, Result};
use crate::model::{geodesic_eval_unchecked, random_tangent, tangent_basis, ModelPoint};
use crate::quad;
use rand::Rng;

/// Surface area of the unit `d`-sphere `S^d` in `R^(d+1)`:
/// `2 pi^((d+1)/2) / Gamma((d+1)/2)`, computed with exact half-integer
/// gamma values.
pub fn unit_sphere_area(d: usize) -> f64 {
    let x2 = d + 1; // gamma argument doubled: Gamma(x2 / 2)
    2.0 * std::f64::consts::PI.powf(x2 as f64 / 2.0) / gamma_half(x2)
}

/// `Gamma(n/2)` for positive integer `n`, exactly via the recurrence.
fn gamma_half(n: usize) -> f64 {
    match n {
        0 => f64::INFINITY,
        1 => std::f64::consts::PI.sqrt(),
        2 => 1.0,
        _ => (n as f64 / 2.0 - 1.0) * gamma_half(n - 2),
    }
}

/// Riemannian volume of the ball `D^n_k(r)`:
/// `vol(S^(n-1)) * integral_0^r m_k'(t)^(n-1) dt` by adaptive quadrature.
pub fn ball_volume(k: Curvature, n: usize, r: f64) -> Result<f64> {
    ball_volume_tol(k, n, r, quad::DEFAULT_ABS_TOL, quad::DEFAULT_REL_TOL)
}

pub fn ball_volume_tol(k: Curvature, n: usize, r: f64, abs_tol: f64, rel_tol: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::invalid_argument(format!("need n >= 2, got {n}")));
    }
    if !(r > 0.0) || r > k.space_form_diameter() + 1e-12 {
        return Err(Error::invalid_argument(format!(
            "radius {r} outside (0, diam] for k = {}",
            k.k()
        )));
    }
    let kk = k.k();
    let q = quad::integrate(
        |t| mk3(kk, t).1.powi(n as i32 - 1),
        0.0,
        r.min(k.space_form_diameter()),
        abs_tol,
        rel_tol,
    )?;
    Ok(unit_sphere_area(n - 1) * q.value)
}

/// Closed-form volume of the full space form `S^n_k` (`k > 0`).
pub fn sphere_volume(k: Curvature, n: usize) -> Result<f64> {
    if k.k() <= 0.0 {
        return Err(Error::invalid_argument(
            "sphere_volume requires k > 0".into(),
        ));
    }
    Ok(unit_sphere_area(n) / k.k().powf(n as f64 / 2.0))
}

/// Inverse-CDF sampler for the radial density `m_k'(t)^(n-1)` on `[0, r]`.
///
/// The cumulative integral is tabulated once on a fine grid; individual
/// draws binary-search the table and polish with Newton steps against the
/// exact density.
pub struct RadialSampler {
    k: f64,
    n: usize,
    r: f64,
    grid: Vec<f64>,
    cdf: Vec<f64>,
    total: f64,
}

const RADIAL_CELLS: usize = 2048;

impl RadialSampler {
    pub fn new(k: Curvature, n: usize, r: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid_argument(format!("need n >= 2, got {n}")));
        }
        if !(r > 0.0) || r > k.space_form_diameter() + 1e-12 {
            return Err(Error::invalid_argument(format!(
                "radius {r} outside (0, diam] for k = {}",
                k.k()
            )));
        }
        let kk = k.k();
        let p = n as i32 - 1;
        let mut grid = Vec::with_capacity(RADIAL_CELLS + 1);
        let mut cdf = Vec::with_capacity(RADIAL_CELLS + 1);
        grid.push(0.0);
        cdf.push(0.0);
        let mut acc = 0.0;
        for i in 1..=RADIAL_CELLS {
            let a = r * (i - 1) as f64 / RADIAL_CELLS as f64;
            let b = r * i as f64 / RADIAL_CELLS as f64;
            // Gauss-Kronrod on each cell keeps the table error far below the
            // Newton polish tolerance.
            let cell = quad::integrate(|t| mk3(kk, t).1.powi(p), a, b, 1e-14, 1e-12)?;
            acc += cell.value;
            grid.push(b);
            cdf.push(acc);
        }
        let total = acc;
        for c in &mut cdf {
            *c /= total;
        }
        Ok(RadialSampler {
            k: kk,
            n,
            r,
            grid,
            cdf,
            total,
        })
    }

    /// Quantile of the radial distribution at `u` in `[0, 1]`.
    pub fn quantile(&self, u: f64) -> f64 {
        let u = u.clamp(0.0, 1.0);
        let idx = match self
            .cdf
            .binary_search_by(|c| c.partial_cmp(&u).expect("cdf is finite"))
        {
            Ok(i) => i,
            Err(i) => i.saturating_sub(1),
        };
        if idx >= RADIAL_CELLS {
            return self.r;
        }
        let (c0, c1) = (self.cdf[idx], self.cdf[idx + 1]);
        let (t0, t1) = (self.grid[idx], self.grid[idx + 1]);
        let mut t = if c1 > c0 {
            t0 + (t1 - t0) * (u - c0) / (c1 - c0)
        } else {
            0.5 * (t0 + t1)
        };
        // Newton against the exact density; the CDF within the cell is
        // approximated by c0 plus the local quadrature, which the polish
        // replaces with two corrector steps.
        let p = self.n as i32 - 1;
        for _ in 0..3 {
            let cdf_t = c0
                + quad::integrate(|s| mk3(self.k, s).1.powi(p), t0, t, 1e-14, 1e-12)
                    .map(|q| q.value / self.total_unnormalized())
                    .unwrap_or(0.0);
            let pdf = mk3(self.k, t).1.powi(p) / self.total_unnormalized();
            if pdf <= 0.0 {
                break;
            }
            let step = (cdf_t - u) / pdf;
            t = (t - step).clamp(t0, t1);
        }
        t
    }

    fn total_unnormalized(&self) -> f64 {
        self.total
    }
}

/// `N` i.i.d. points uniform with respect to riemannian volume in the ball
/// `D^n_k(center, r)`, deterministic given the seed.
pub fn sample_uniform_ball(
    k: Curvature,
    n: usize,
    center: &ModelPoint,
    r: f64,
    count: usize,
    seed: u64,
) -> Result<Vec<ModelPoint>> {
    if count == 0 {
        return Err(Error::invalid_argument("need at least one sample".into()));
    }
    center.check_constraint(k)?;
    if center.dim() != n {
        return Err(Error::invalid_argument(format!(
            "center has dimension {}, expected {n}",
            center.dim()
        )));
    }
    let sampler = RadialSampler::new(k, n, r)?;
    let basis = tangent_basis(k, center);
    let mut rng = crate::rng::shard_rng(seed, 0);
    let kk = k.k();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let u: f64 = rng.gen();
        let t = sampler.quantile(u);
        let dir = random_tangent(k, center, &basis, &mut rng);
        out.push(geodesic_eval_unchecked(kk, center, &dir, t));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::distance;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn k(v: f64) -> Curvature {
        Curvature::new(v).unwrap()
    }

    #[test]
    fn unit_sphere_areas() {
        assert_relative_eq!(unit_sphere_area(1), 2.0 * PI, max_relative = 1e-14);
        assert_relative_eq!(unit_sphere_area(2), 4.0 * PI, max_relative = 1e-14);
        assert_relative_eq!(unit_sphere_area(3), 2.0 * PI * PI, max_relative = 1e-14);
    }

    #[test]
    fn full_sphere_volumes() {
        // Quadrature against the closed form for n = 2, 3, 4.
        for n in 2..=4 {
            let kv = k(1.0);
            let by_quad = ball_volume(kv, n, PI).unwrap();
            let closed = sphere_volume(kv, n).unwrap();
            assert_relative_eq!(by_quad, closed, max_relative = 1e-8);
        }
        assert_relative_eq!(
            ball_volume(k(1.0), 3, PI).unwrap(),
            2.0 * PI * PI,
            max_relative = 1e-10
        );
        assert_relative_eq!(
            ball_volume(k(1.0), 3, PI / 2.0).unwrap(),
            PI * PI,
            max_relative = 1e-10
        );
    }

    #[test]
    fn flat_disk_area() {
        assert_relative_eq!(ball_volume(k(0.0), 2, 1.0).unwrap(), PI, max_relative = 1e-12);
    }

    #[test]
    fn out_of_range_radius_rejected() {
        assert!(ball_volume(k(1.0), 3, 4.0).is_err());
        assert!(ball_volume(k(0.0), 3, 0.0).is_err());
    }

    #[test]
    fn sampling_is_deterministic() {
        let kv = k(1.0);
        let c = ModelPoint::base(kv, 2);
        let a = sample_uniform_ball(kv, 2, &c, 1.0, 1, 42).unwrap();
        let b = sample_uniform_ball(kv, 2, &c, 1.0, 1, 42).unwrap();
        assert_eq!(a[0].coords(), b[0].coords());
        let c2 = sample_uniform_ball(kv, 2, &c, 1.0, 1, 43).unwrap();
        assert_ne!(a[0].coords(), c2[0].coords());
    }

    #[test]
    fn flat_disk_mean_distance() {
        // E[t] under density 2t on [0,1] is 2/3.
        let kv = k(0.0);
        let c = ModelPoint::base(kv, 2);
        let n = 200_000;
        let pts = sample_uniform_ball(kv, 2, &c, 1.0, n, 7).unwrap();
        let mean: f64 = pts
            .iter()
            .map(|p| distance(kv, &c, p).unwrap())
            .sum::<f64>()
            / n as f64;
        // var = 1/2 - 4/9 = 1/18
        let sigma = (1.0f64 / 18.0).sqrt() / (n as f64).sqrt();
        assert!(
            (mean - 2.0 / 3.0).abs() <= 3.0 * sigma,
            "mean {mean} vs 2/3 +- {sigma}"
        );
    }

    #[test]
    fn flat_disk_half_radius_fraction() {
        let kv = k(0.0);
        let c = ModelPoint::base(kv, 2);
        let n = 200_000;
        let pts = sample_uniform_ball(kv, 2, &c, 1.0, n, 9).unwrap();
        let inside = pts
            .iter()
            .filter(|p| distance(kv, &c, p).unwrap() <= 0.5)
            .count();
        let frac = inside as f64 / n as f64;
        let sigma = (0.25f64 * 0.75 / n as f64).sqrt();
        assert!(
            (frac - 0.25).abs() <= 3.0 * sigma,
            "fraction {frac} vs 0.25 +- {sigma}"
        );
    }

    #[test]
    fn samples_stay_in_ball() {
        for kk in [1.0, 0.0, -1.0] {
            let kv = k(kk);
            let c = ModelPoint::base(kv, 3);
            let r = if kk > 0.0 { 1.2 } else { 1.5 };
            for p in sample_uniform_ball(kv, 3, &c, r, 500, 3).unwrap() {
                assert!(distance(kv, &c, &p).unwrap() <= r + 1e-9);
                assert!(p.check_constraint(kv).is_ok());
            }
        }
    }
}
