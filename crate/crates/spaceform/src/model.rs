//! Points, geodesics, and angles of the space form `S^n_k` in ambient
//! coordinates.
//!
//! A point carries `n + 1` coordinates. Coordinate 0 is the distinguished
//! slot: for `k > 0` the point lies on the sphere of radius `1/sqrt(k)` in
//! euclidean `(n+1)`-space; for `k < 0` on the upper hyperboloid
//! `<x, x>_L = -1/|k|` in Minkowski space with coordinate 0 time-like; for
//! `k = 0` coordinate 0 is identically zero and the rest are cartesian.
//! Ambient realization keeps distances and geodesics exact, with no chart
//! singularities.

use crate::curvature::{mk3, Curvature};
use crate::error::{Error, Result};
use rand::Rng;
use rand_distr::StandardNormal;

/// Relative tolerance for membership in the model quadric.
pub const MODEL_CONSTRAINT_TOL: f64 = 1e-12;
/// Tolerance accepted when validating tangency/unit length of directions.
pub const DIRECTION_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct ModelPoint {
    coords: Vec<f64>,
    dim: usize,
}

/// Ambient bilinear form of the model: euclidean for `k >= 0`, Minkowski
/// (coordinate 0 negative) for `k < 0`.
#[inline]
pub fn model_form(k: f64, x: &[f64], y: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 1..x.len() {
        s += x[i] * y[i];
    }
    if k < 0.0 {
        s - x[0] * y[0]
    } else {
        s + x[0] * y[0]
    }
}

impl ModelPoint {
    /// Wrap ambient coordinates, checking the quadric constraint for the
    /// given curvature.
    pub fn from_coords(k: Curvature, coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 3 {
            return Err(Error::InvalidPoint(format!(
                "need at least 3 ambient coordinates (dim >= 2), got {}",
                coords.len()
            )));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidPoint("non-finite coordinate".into()));
        }
        let dim = coords.len() - 1;
        let p = ModelPoint { coords, dim };
        p.check_constraint(k)?;
        Ok(p)
    }

    /// The base point `R e_0` (origin for `k = 0`).
    pub fn base(k: Curvature, dim: usize) -> Self {
        let mut coords = vec![0.0; dim + 1];
        if k.k() != 0.0 {
            coords[0] = 1.0 / k.k().abs().sqrt();
        }
        ModelPoint { coords, dim }
    }

    #[inline]
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn check_constraint(&self, k: Curvature) -> Result<()> {
        let kk = k.k();
        let q = model_form(kk, &self.coords, &self.coords);
        if kk > 0.0 {
            let target = 1.0 / kk;
            if (q - target).abs() > MODEL_CONSTRAINT_TOL * target.max(1.0) {
                return Err(Error::InvalidPoint(format!(
                    "|x|^2 = {q}, expected {target} on the sphere"
                )));
            }
        } else if kk < 0.0 {
            let target = 1.0 / kk; // negative
            if (q - target).abs() > MODEL_CONSTRAINT_TOL * target.abs().max(1.0) {
                return Err(Error::InvalidPoint(format!(
                    "<x,x>_L = {q}, expected {target} on the hyperboloid"
                )));
            }
            if self.coords[0] <= 0.0 {
                return Err(Error::InvalidPoint(
                    "time-like coordinate must be positive".into(),
                ));
            }
        } else if self.coords[0].abs() > MODEL_CONSTRAINT_TOL {
            return Err(Error::InvalidPoint(format!(
                "padding coordinate must vanish for k = 0, got {}",
                self.coords[0]
            )));
        }
        Ok(())
    }

    /// Pull the point back onto the quadric (used after long chains of
    /// arithmetic to stop drift from accumulating).
    pub fn renormalize(&mut self, k: Curvature) {
        let kk = k.k();
        if kk > 0.0 {
            let n = model_form(kk, &self.coords, &self.coords).sqrt();
            let r = 1.0 / kk.sqrt();
            for c in &mut self.coords {
                *c *= r / n;
            }
        } else if kk < 0.0 {
            let mut s = 0.0;
            for c in &self.coords[1..] {
                s += c * c;
            }
            self.coords[0] = (s + 1.0 / (-kk)).sqrt();
        } else {
            self.coords[0] = 0.0;
        }
    }
}

fn check_pair(k: Curvature, p: &ModelPoint, q: &ModelPoint) -> Result<()> {
    if p.dim != q.dim {
        return Err(Error::InvalidPoint(format!(
            "dimension mismatch: {} vs {}",
            p.dim, q.dim
        )));
    }
    p.check_constraint(k)?;
    q.check_constraint(k)
}

/// Geodesic distance between two model points.
pub fn distance(k: Curvature, p: &ModelPoint, q: &ModelPoint) -> Result<f64> {
    check_pair(k, p, q)?;
    Ok(distance_unchecked(k.k(), p.coords(), q.coords()))
}

/// Distance from raw coordinates, assuming both satisfy the constraint.
#[inline]
pub fn distance_unchecked(k: f64, p: &[f64], q: &[f64]) -> f64 {
    if k > 0.0 {
        let c = (k * dot(p, q)).clamp(-1.0, 1.0);
        c.acos() / k.sqrt()
    } else if k < 0.0 {
        let c = ((-k) * -model_form(k, p, q)).max(1.0);
        c.acosh() / (-k).sqrt()
    } else {
        let mut s = 0.0;
        for i in 0..p.len() {
            let d = p[i] - q[i];
            s += d * d;
        }
        s.sqrt()
    }
}

#[inline]
fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// Validate that `dir` is a unit tangent vector at `p`.
pub fn check_direction(k: Curvature, p: &ModelPoint, dir: &[f64]) -> Result<()> {
    if dir.len() != p.coords.len() {
        return Err(Error::InvalidDirection(format!(
            "direction has {} components, expected {}",
            dir.len(),
            p.coords.len()
        )));
    }
    let kk = k.k();
    let norm2 = model_form(kk, dir, dir);
    if (norm2 - 1.0).abs() > DIRECTION_TOL {
        return Err(Error::InvalidDirection(format!(
            "direction norm^2 = {norm2}, expected 1"
        )));
    }
    let tang = if kk == 0.0 {
        dir[0]
    } else {
        model_form(kk, p.coords(), dir) * kk.abs().sqrt()
    };
    if tang.abs() > DIRECTION_TOL {
        return Err(Error::InvalidDirection(format!(
            "direction not tangent: <p, v> scaled = {tang}"
        )));
    }
    Ok(())
}

/// Point at arc length `t` along the geodesic from `p` with initial unit
/// tangent `dir`.
pub fn geodesic_eval(k: Curvature, p: &ModelPoint, dir: &[f64], t: f64) -> Result<ModelPoint> {
    p.check_constraint(k)?;
    check_direction(k, p, dir)?;
    Ok(geodesic_eval_unchecked(k.k(), p, dir, t))
}

pub(crate) fn geodesic_eval_unchecked(kk: f64, p: &ModelPoint, dir: &[f64], t: f64) -> ModelPoint {
    let n = p.coords.len();
    let mut coords = vec![0.0; n];
    if kk == 0.0 {
        for i in 0..n {
            coords[i] = p.coords[i] + t * dir[i];
        }
        coords[0] = 0.0;
    } else {
        // cos/cosh and sin/sinh coefficients are m'' and m' of the arc.
        let (_, m1, m2) = mk3(kk, t);
        for i in 0..n {
            coords[i] = m2 * p.coords[i] + m1 * dir[i];
        }
    }
    let mut out = ModelPoint {
        coords,
        dim: p.dim,
    };
    out.renormalize(Curvature::new(kk).expect("finite k"));
    out
}

/// Initial unit tangent at `p` of the segment from `p` to `q`.
///
/// Undefined when the points coincide or (for `k > 0`) are antipodal.
pub fn initial_direction(k: Curvature, p: &ModelPoint, q: &ModelPoint) -> Result<Vec<f64>> {
    check_pair(k, p, q)?;
    let kk = k.k();
    let d = distance_unchecked(kk, p.coords(), q.coords());
    if d < 1e-14 {
        return Err(Error::invalid_argument(
            "initial_direction of coincident points".into(),
        ));
    }
    if kk > 0.0 && d > k.space_form_diameter() - 1e-9 {
        return Err(Error::numerical_domain(
            "initial_direction of antipodal points is not unique".into(),
        ));
    }
    let (_, m1, m2) = mk3(kk, d);
    let n = p.coords.len();
    let mut v = vec![0.0; n];
    for i in 0..n {
        v[i] = (q.coords[i] - m2 * p.coords[i]) / m1;
    }
    if kk == 0.0 {
        v[0] = 0.0;
    }
    // Clean up rounding: project onto the tangent space and renormalize.
    project_tangent(kk, p.coords(), &mut v);
    let norm = model_form(kk, &v, &v).sqrt();
    for c in &mut v {
        *c /= norm;
    }
    Ok(v)
}

/// Remove the component of `v` along `p` with respect to the model form.
fn project_tangent(kk: f64, p: &[f64], v: &mut [f64]) {
    if kk == 0.0 {
        v[0] = 0.0;
        return;
    }
    let pp = model_form(kk, p, p); // 1/k (negative for k < 0)
    let pv = model_form(kk, p, v);
    let c = pv / pp;
    for i in 0..v.len() {
        v[i] -= c * p[i];
    }
}

/// Angle at `p` between two tangent vectors, using the induced (positive
/// definite) metric on the tangent space.
pub fn tangent_angle(k: Curvature, u: &[f64], v: &[f64]) -> f64 {
    let kk = k.k();
    let uu = model_form(kk, u, u).sqrt();
    let vv = model_form(kk, v, v).sqrt();
    let c = (model_form(kk, u, v) / (uu * vv)).clamp(-1.0, 1.0);
    c.acos()
}

/// Model-form-orthonormal basis of the tangent space at `p`.
pub fn tangent_basis(k: Curvature, p: &ModelPoint) -> Vec<Vec<f64>> {
    let kk = k.k();
    let n = p.coords.len();
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(p.dim);
    for i in 0..n {
        if kk == 0.0 && i == 0 {
            continue;
        }
        let mut v = vec![0.0; n];
        v[i] = 1.0;
        project_tangent(kk, p.coords(), &mut v);
        for b in &basis {
            let c = model_form(kk, &v, b);
            for j in 0..n {
                v[j] -= c * b[j];
            }
        }
        let norm2 = model_form(kk, &v, &v);
        if norm2 > 1e-20 {
            let norm = norm2.sqrt();
            for c in &mut v {
                *c /= norm;
            }
            basis.push(v);
            if basis.len() == p.dim {
                break;
            }
        }
    }
    debug_assert_eq!(basis.len(), p.dim);
    basis
}

/// A uniformly random unit tangent vector at `p`, from gaussian coefficients
/// on an orthonormal tangent basis.
pub fn random_tangent<R: Rng>(k: Curvature, p: &ModelPoint, basis: &[Vec<f64>], rng: &mut R) -> Vec<f64> {
    let n = p.coords.len();
    loop {
        let mut v = vec![0.0; n];
        let mut norm2 = 0.0;
        for b in basis {
            let g: f64 = rng.sample(StandardNormal);
            norm2 += g * g;
            for j in 0..n {
                v[j] += g * b[j];
            }
        }
        if norm2 > 1e-12 {
            let norm = norm2.sqrt();
            for c in &mut v {
                *c /= norm;
            }
            return v;
        }
    }
}

/// Ambient reflection over the totally geodesic hyperplane through `base`
/// with unit normal `normal` (tangent at `base`).
pub fn reflect(
    k: Curvature,
    point: &ModelPoint,
    normal: &[f64],
    base: &ModelPoint,
) -> Result<ModelPoint> {
    base.check_constraint(k)?;
    point.check_constraint(k)?;
    check_direction(k, base, normal)?;
    let kk = k.k();
    let n = point.coords.len();
    let mut coords = point.coords.clone();
    if kk == 0.0 {
        // Affine hyperplane through `base`.
        let mut s = 0.0;
        for i in 0..n {
            s += (point.coords[i] - base.coords[i]) * normal[i];
        }
        for i in 0..n {
            coords[i] -= 2.0 * s * normal[i];
        }
        coords[0] = 0.0;
    } else {
        // Linear hyperplane containing `base` (since <base, normal> = 0).
        let s = model_form(kk, &point.coords, normal);
        for i in 0..n {
            coords[i] -= 2.0 * s * normal[i];
        }
    }
    let mut out = ModelPoint { coords, dim: point.dim };
    out.renormalize(k);
    Ok(out)
}
