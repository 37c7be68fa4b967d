//! Smooth bounded convex domains encoded by trigonometric support functions.
//!
//! A domain is `center + { r e^{i theta} : 0 <= r < ... }` described by its
//! support function `h(theta)` (a finite cosine/sine series). The boundary
//! point in normal direction `e^{i theta}` is
//! `sigma(theta) = center + h e^{i theta} + h' i e^{i theta}`, the outward
//! normal is `e^{i theta}`, and `h + h''` is the radius of curvature, which
//! converts arclength integrals to equispaced-theta trapezoid sums exactly:
//! `ds = (h + h'') d theta`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};

/// Grid size used for convexity validation and containment tests.
const VALIDATION_GRID: usize = 4096;
/// Fixed grid for the half-plane containment test.
const CONTAINS_GRID: usize = 1024;
/// Target max pointwise error of Fourier-projected support functions.
const PROJECTION_TOL: f64 = 1e-10;

/// Smooth bounded convex domain given by a support function Fourier series.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "DomainJson", try_from = "DomainJson")]
pub struct SupportDomain {
    center: Complex64,
    /// `cos[k]` multiplies `cos(k theta)`; `cos[0]` is the constant term.
    cos: Vec<f64>,
    /// `sin[k]` multiplies `sin(k theta)`; index 0 is unused and kept zero.
    sin: Vec<f64>,
}

/// Serialized form: `{"center":[re,im],"cos":[...],"sin":[...]}`.
#[derive(Serialize, Deserialize)]
struct DomainJson {
    center: [f64; 2],
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl From<SupportDomain> for DomainJson {
    fn from(d: SupportDomain) -> Self {
        DomainJson {
            center: [d.center.re, d.center.im],
            cos: d.cos,
            sin: d.sin,
        }
    }
}

impl TryFrom<DomainJson> for SupportDomain {
    type Error = Error;
    fn try_from(j: DomainJson) -> Result<Self> {
        SupportDomain::new(Complex64::new(j.center[0], j.center[1]), j.cos, j.sin)
    }
}

/// Quadrature node on the boundary of a [`SupportDomain`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryNode {
    /// Normal angle in `[0, 2 pi)`.
    pub theta: f64,
    /// Point on the boundary.
    pub sigma: Complex64,
    /// Unit outward normal `e^{i theta}`.
    pub nu: Complex64,
    /// Arclength quadrature weight `(h + h'') * 2 pi / N`.
    pub weight: f64,
    /// Boundary curvature `1 / (h + h'')`.
    pub curvature: f64,
}

impl SupportDomain {
    /// Builds a domain from raw Fourier coefficients, validating strict
    /// convexity and positivity of `h` on a fine grid.
    pub fn new(center: Complex64, cos: Vec<f64>, mut sin: Vec<f64>) -> Result<Self> {
        sin.resize(cos.len().max(sin.len()), 0.0);
        if !sin.is_empty() {
            sin[0] = 0.0;
        }
        let d = SupportDomain { center, cos, sin };
        let mut min_h = f64::INFINITY;
        let mut min_roc = f64::INFINITY;
        for k in 0..VALIDATION_GRID {
            let t = TAU * k as f64 / VALIDATION_GRID as f64;
            min_h = min_h.min(d.h(t));
            min_roc = min_roc.min(d.radius_of_curvature(t));
        }
        if min_roc <= 0.0 {
            return Err(Error::NotConvex(min_roc));
        }
        if min_h <= 0.0 {
            return Err(Error::NotConvex(min_h));
        }
        Ok(d)
    }

    /// Disk of the given radius: constant support function.
    pub fn disk(center: Complex64, radius: f64) -> Result<Self> {
        if radius <= 0.0 || !radius.is_finite() {
            return Err(Error::NonPositiveRadius(radius));
        }
        Self::new(center, vec![radius], vec![])
    }

    /// Rotated ellipse with semi-axes `a`, `b`. The exact support function
    /// `sqrt(a^2 cos^2(t - rot) + b^2 sin^2(t - rot))` is Fourier-projected,
    /// doubling the degree until the max pointwise error is below 1e-10.
    pub fn ellipse(center: Complex64, a: f64, b: f64, rotation: f64) -> Result<Self> {
        if a <= 0.0 || b <= 0.0 || !a.is_finite() || !b.is_finite() {
            return Err(Error::NonPositiveAxis(a, b));
        }
        let exact = |t: f64| {
            let (s, c) = (t - rotation).sin_cos();
            (a * a * c * c + b * b * s * s).sqrt()
        };
        let mut degree = 32usize;
        loop {
            let (cos, sin) = project_support(&exact, degree);
            let trial = SupportDomain {
                center,
                cos,
                sin,
            };
            let mut err = 0.0f64;
            for k in 0..VALIDATION_GRID {
                let t = TAU * k as f64 / VALIDATION_GRID as f64;
                err = err.max((trial.h(t) - exact(t)).abs());
            }
            if err <= PROJECTION_TOL {
                return Self::new(center, trial.cos, trial.sin);
            }
            degree *= 2;
            if degree > 2048 {
                return Err(Error::ProjectionTolerance {
                    error: err,
                    tol: PROJECTION_TOL,
                    degree,
                });
            }
        }
    }

    pub fn center(&self) -> Complex64 {
        self.center
    }

    pub fn cos_coeffs(&self) -> &[f64] {
        &self.cos
    }

    pub fn sin_coeffs(&self) -> &[f64] {
        &self.sin
    }

    /// Support function about the center.
    pub fn h(&self, theta: f64) -> f64 {
        let mut v = 0.0;
        for (k, &c) in self.cos.iter().enumerate() {
            v += c * (k as f64 * theta).cos();
        }
        for (k, &s) in self.sin.iter().enumerate().skip(1) {
            v += s * (k as f64 * theta).sin();
        }
        v
    }

    pub fn dh(&self, theta: f64) -> f64 {
        let mut v = 0.0;
        for (k, &c) in self.cos.iter().enumerate().skip(1) {
            v -= c * k as f64 * (k as f64 * theta).sin();
        }
        for (k, &s) in self.sin.iter().enumerate().skip(1) {
            v += s * k as f64 * (k as f64 * theta).cos();
        }
        v
    }

    pub fn ddh(&self, theta: f64) -> f64 {
        let mut v = 0.0;
        for (k, &c) in self.cos.iter().enumerate().skip(1) {
            v -= c * (k * k) as f64 * (k as f64 * theta).cos();
        }
        for (k, &s) in self.sin.iter().enumerate().skip(1) {
            v -= s * (k * k) as f64 * (k as f64 * theta).sin();
        }
        v
    }

    /// Radius of curvature `h + h''` at normal angle `theta`.
    pub fn radius_of_curvature(&self, theta: f64) -> f64 {
        self.h(theta) + self.ddh(theta)
    }

    /// Boundary point with outward normal `e^{i theta}`.
    pub fn boundary_point(&self, theta: f64) -> Complex64 {
        let e = Complex64::from_polar(1.0, theta);
        self.center + e * Complex64::new(self.h(theta), self.dh(theta))
    }

    pub fn normal(&self, theta: f64) -> Complex64 {
        Complex64::from_polar(1.0, theta)
    }

    /// Perimeter; only the constant Fourier mode survives the integral of
    /// `h + h''`.
    pub fn perimeter(&self) -> f64 {
        TAU * self.cos[0]
    }

    /// Width-based diameter estimate, max of `h(t) + h(t + pi)`.
    pub fn diameter(&self) -> f64 {
        let mut d = 0.0f64;
        for k in 0..VALIDATION_GRID {
            let t = TAU * k as f64 / VALIDATION_GRID as f64;
            d = d.max(self.h(t) + self.h(t + PI));
        }
        d
    }

    /// Signed gap between `z` and the tangent line at normal angle `theta`;
    /// positive inside the tangent half-plane.
    pub fn tangent_gap(&self, theta: f64, z: Complex64) -> f64 {
        self.h(theta) - ((z - self.center) * Complex64::from_polar(1.0, -theta)).re
    }

    /// Minimum tangent gap over the fixed containment grid. For interior
    /// points this is the distance to the boundary.
    pub fn boundary_gap(&self, z: Complex64) -> f64 {
        let mut g = f64::INFINITY;
        for k in 0..CONTAINS_GRID {
            let t = TAU * k as f64 / CONTAINS_GRID as f64;
            g = g.min(self.tangent_gap(t, z));
        }
        g
    }

    /// Strict half-plane membership test on a fixed grid; points within
    /// `1e-12 * diameter` of the boundary are classified outside.
    pub fn contains(&self, z: Complex64) -> bool {
        self.boundary_gap(z) > 1e-12 * self.diameter()
    }

    /// Equispaced-theta boundary quadrature nodes.
    pub fn boundary_nodes(&self, n: usize) -> Result<Vec<BoundaryNode>> {
        if n < 16 || n % 2 != 0 {
            return Err(Error::BadNodeCount(n));
        }
        let mut nodes = Vec::with_capacity(n);
        for k in 0..n {
            let theta = TAU * k as f64 / n as f64;
            let roc = self.radius_of_curvature(theta);
            if roc <= 0.0 {
                return Err(Error::NotConvex(roc));
            }
            nodes.push(BoundaryNode {
                theta,
                sigma: self.boundary_point(theta),
                nu: self.normal(theta),
                weight: roc * TAU / n as f64,
                curvature: 1.0 / roc,
            });
        }
        Ok(nodes)
    }
}

/// Projects a `2 pi`-periodic function onto a trigonometric polynomial of
/// the given degree via trapezoid-rule Fourier coefficients.
pub fn project_support<F: Fn(f64) -> f64>(f: &F, degree: usize) -> (Vec<f64>, Vec<f64>) {
    let m = (4 * (degree + 1)).max(256);
    let samples: Vec<(f64, f64)> = (0..m)
        .map(|j| {
            let t = TAU * j as f64 / m as f64;
            (t, f(t))
        })
        .collect();
    let mut cos = vec![0.0; degree + 1];
    let mut sin = vec![0.0; degree + 1];
    for (t, v) in &samples {
        cos[0] += v / m as f64;
        for k in 1..=degree {
            cos[k] += 2.0 * v * (k as f64 * t).cos() / m as f64;
            sin[k] += 2.0 * v * (k as f64 * t).sin() / m as f64;
        }
    }
    (cos, sin)
}

/// Double-layer potential kernel `mu(sigma, z) = (1/pi) Re(nu / (sigma - z))`.
pub fn mu_kernel(sigma: Complex64, nu: Complex64, z: Complex64) -> Result<f64> {
    let d = sigma - z;
    let scale = sigma.norm().max(z.norm()).max(1.0);
    if d.norm() < 1e-14 * scale {
        return Err(Error::SingularKernel(d.norm()));
    }
    Ok((nu / d).re / PI)
}

/// Coincidence limit of the kernel along the boundary: `curvature / (2 pi)`.
pub fn mu_diagonal(node: &BoundaryNode) -> f64 {
    node.curvature / TAU
}
