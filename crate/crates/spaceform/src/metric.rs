//! Finite metric spaces: the discrete stand-in for a sampled manifold.

use crate::error::{Error, Result};
use crate::rng::shard_rng;
use rand::Rng;

/// How strictly [`FiniteMetricSpace::new`] validates the matrix.
///
/// Graph-built quotient approximations carry identification edges of length
/// zero, so exact duplicates of a point are legal there; generator outputs
/// from genuine point samples are validated strictly.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Validation {
    /// Symmetric, zero diagonal, strictly positive off-diagonal.
    Strict,
    /// Symmetric, zero diagonal, nonnegative off-diagonal.
    AllowZeroDistances,
}

/// `N` points with a symmetric distance matrix, optional ambient labels and
/// claimed geometry metadata.
#[derive(Clone, Debug)]
pub struct FiniteMetricSpace {
    n_points: usize,
    dist: Vec<f64>,
    pub labels: Option<Vec<Vec<f64>>>,
    pub claimed_curvature: Option<f64>,
    pub claimed_radius: Option<f64>,
}

impl FiniteMetricSpace {
    pub fn new(n_points: usize, dist: Vec<f64>, validation: Validation) -> Result<Self> {
        if dist.len() != n_points * n_points {
            return Err(Error::invalid_argument(format!(
                "distance matrix has {} entries, expected {}",
                dist.len(),
                n_points * n_points
            )));
        }
        for i in 0..n_points {
            if dist[i * n_points + i] != 0.0 {
                return Err(Error::invalid_argument(format!(
                    "nonzero diagonal at {i}: {}",
                    dist[i * n_points + i]
                )));
            }
            for j in (i + 1)..n_points {
                let d = dist[i * n_points + j];
                let dt = dist[j * n_points + i];
                if !d.is_finite() || d < 0.0 {
                    return Err(Error::invalid_argument(format!(
                        "invalid distance at ({i}, {j}): {d}"
                    )));
                }
                if d != dt {
                    return Err(Error::invalid_argument(format!(
                        "asymmetric matrix at ({i}, {j}): {d} vs {dt}"
                    )));
                }
                if validation == Validation::Strict && d == 0.0 {
                    return Err(Error::invalid_argument(format!(
                        "zero off-diagonal distance at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(FiniteMetricSpace {
            n_points,
            dist,
            labels: None,
            claimed_curvature: None,
            claimed_radius: None,
        })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n_points
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n_points == 0
    }

    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n_points + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.dist[i * self.n_points..(i + 1) * self.n_points]
    }

    pub fn matrix(&self) -> &[f64] {
        &self.dist
    }

    /// Largest pairwise distance.
    pub fn diameter(&self) -> f64 {
        self.dist.iter().copied().fold(0.0, f64::max)
    }

    /// Mesh estimate: the largest nearest-neighbor distance, a proxy for the
    /// covering radius of the sample. Reported alongside every discrete
    /// invariant since their accuracy degrades with it.
    pub fn mesh_estimate(&self) -> f64 {
        let n = self.n_points;
        let mut mesh = 0.0f64;
        for i in 0..n {
            let mut nearest = f64::INFINITY;
            for j in 0..n {
                if j != i {
                    nearest = nearest.min(self.dist(i, j));
                }
            }
            if nearest.is_finite() {
                mesh = mesh.max(nearest);
            }
        }
        mesh
    }

    /// Check the triangle inequality on `samples` random triples (or all
    /// triples when `exhaustive`), within additive slack `tol`.
    pub fn check_triangle_inequality(
        &self,
        samples: usize,
        seed: u64,
        exhaustive: bool,
        tol: f64,
    ) -> Result<()> {
        let n = self.n_points;
        if n < 3 {
            return Ok(());
        }
        let mut check = |a: usize, b: usize, c: usize| -> Result<()> {
            let ab = self.dist(a, b);
            let bc = self.dist(b, c);
            let ac = self.dist(a, c);
            if ac > ab + bc + tol {
                return Err(Error::invalid_argument(format!(
                    "triangle inequality fails on ({a}, {b}, {c}): {ac} > {ab} + {bc}"
                )));
            }
            Ok(())
        };
        if exhaustive {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        check(a, b, c)?;
                    }
                }
            }
        } else {
            let mut rng = shard_rng(seed, 0);
            for _ in 0..samples {
                let a = rng.gen_range(0..n);
                let b = rng.gen_range(0..n);
                let c = rng.gen_range(0..n);
                check(a, b, c)?;
            }
        }
        Ok(())
    }

    /// Relabel points by a permutation (used by invariance tests).
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.n_points;
        if perm.len() != n {
            return Err(Error::invalid_argument("permutation length mismatch".into()));
        }
        let mut dist = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                dist[i * n + j] = self.dist(perm[i], perm[j]);
            }
        }
        let mut out = FiniteMetricSpace::new(n, dist, Validation::AllowZeroDistances)?;
        out.labels = self
            .labels
            .as_ref()
            .map(|l| perm.iter().map(|&p| l[p].clone()).collect());
        out.claimed_curvature = self.claimed_curvature;
        out.claimed_radius = self.claimed_radius;
        Ok(out)
    }

    /// Rescale all distances by `s` (claimed curvature scales by `1/s^2`).
    pub fn scaled(&self, s: f64) -> Self {
        let mut out = self.clone();
        for d in &mut out.dist {
            *d *= s;
        }
        out.claimed_curvature = self.claimed_curvature.map(|k| k / (s * s));
        out.claimed_radius = self.claimed_radius.map(|r| r * s);
        out.labels = None;
        out
    }
}
