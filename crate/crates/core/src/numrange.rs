//! Numerical range W(A) by Hermitian-part eigensweep, the numerical
//! radius, smooth enclosing domains, and the resolvent positivity test.

use nalgebra::SymmetricEigen;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::geometry::{project_support, BoundaryNode, SupportDomain};
use crate::CMat;

/// Serialized matrix form: `{"dim":n,"re":[[...]],"im":[[...]]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixJson {
    pub fn from_matrix(a: &CMat) -> Self {
        let n = a.nrows();
        let row = |f: fn(&Complex64) -> f64| -> Vec<Vec<f64>> {
            (0..n)
                .map(|i| (0..n).map(|j| f(&a[(i, j)])).collect())
                .collect()
        };
        MatrixJson {
            dim: n,
            re: row(|c| c.re),
            im: row(|c| c.im),
        }
    }

    pub fn to_matrix(&self) -> Result<CMat> {
        let n = self.dim;
        if n == 0 || self.re.len() != n || self.im.len() != n {
            return Err(Error::BadConfig("matrix dim mismatch".into()));
        }
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            if self.re[i].len() != n || self.im[i].len() != n {
                return Err(Error::BadConfig("matrix row length mismatch".into()));
            }
            for j in 0..n {
                let v = Complex64::new(self.re[i][j], self.im[i][j]);
                if !v.re.is_finite() || !v.im.is_finite() {
                    return Err(Error::BadConfig("non-finite matrix entry".into()));
                }
                m[(i, j)] = v;
            }
        }
        Ok(m)
    }
}

/// Boundary data of W(A) from an equispaced angle sweep.
#[derive(Clone, Debug)]
pub struct NumrangeBoundary {
    pub angles: Vec<f64>,
    pub supports: Vec<f64>,
    pub points: Vec<Complex64>,
}

fn hermitian_part(a: &CMat, theta: f64) -> CMat {
    let e = Complex64::from_polar(1.0, -theta);
    (a * e + a.adjoint() * e.conj()) * Complex64::new(0.5, 0.0)
}

/// Largest eigenvalue of the rotated Hermitian part together with the
/// boundary point `<Av, v>` attained by its eigenvector.
pub fn numrange_support(a: &CMat, theta: f64) -> Result<(f64, Complex64)> {
    let h = hermitian_part(a, theta);
    let eig = SymmetricEigen::try_new(h, f64::EPSILON, 0).ok_or(Error::EigenFailure)?;
    let (idx, &support) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.partial_cmp(y.1).unwrap())
        .ok_or(Error::EigenFailure)?;
    let v = eig.eigenvectors.column(idx);
    let point = (v.adjoint() * a * v)[(0, 0)];
    Ok((support, point))
}

/// Sweeps `m` equispaced angles; the points trace the boundary of W(A)
/// counterclockwise.
pub fn numrange_boundary(a: &CMat, m: usize) -> Result<NumrangeBoundary> {
    if m < 8 {
        return Err(Error::BadConfig(format!("angle count {m} below 8")));
    }
    let mut out = NumrangeBoundary {
        angles: Vec::with_capacity(m),
        supports: Vec::with_capacity(m),
        points: Vec::with_capacity(m),
    };
    for k in 0..m {
        let theta = TAU * k as f64 / m as f64;
        let (s, p) = numrange_support(a, theta)?;
        out.angles.push(theta);
        out.supports.push(s);
        out.points.push(p);
    }
    Ok(out)
}

/// Golden-section maximization on `[lo, hi]`.
pub(crate) fn golden_max<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > 1e-11 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
    }
    let mid = 0.5 * (lo + hi);
    (mid, f(mid))
}

/// Maximizes a periodic objective by a coarse sweep followed by
/// golden-section refinement around the three best local maxima.
pub(crate) fn sweep_refine_max<F: FnMut(f64) -> f64>(mut f: F, m: usize) -> f64 {
    let vals: Vec<f64> = (0..m).map(|k| f(TAU * k as f64 / m as f64)).collect();
    let mut locals: Vec<(usize, f64)> = (0..m)
        .filter(|&k| {
            let prev = vals[(k + m - 1) % m];
            let next = vals[(k + 1) % m];
            vals[k] >= prev && vals[k] >= next
        })
        .map(|k| (k, vals[k]))
        .collect();
    locals.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
    let step = TAU / m as f64;
    let mut best = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    for &(k, _) in locals.iter().take(3) {
        let center = TAU * k as f64 / m as f64;
        let (_, v) = golden_max(&mut f, center - step, center + step);
        best = best.max(v);
    }
    best
}

/// Numerical radius `w(A) = sup |z|, z in W(A)`.
pub fn numerical_radius(a: &CMat) -> Result<f64> {
    let mut failed = false;
    let radius = sweep_refine_max(
        |theta| match numrange_support(a, theta) {
            Ok((_, p)) => p.norm(),
            Err(_) => {
                failed = true;
                0.0
            }
        },
        512,
    );
    if failed {
        return Err(Error::EigenFailure);
    }
    Ok(radius)
}

/// Spectral norm, the largest singular value.
pub fn spectral_norm(a: &CMat) -> f64 {
    a.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .cloned()
        .fold(0.0, f64::max)
}

/// Smallest singular value.
pub fn min_singular_value(a: &CMat) -> f64 {
    a.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min)
}

const ENCLOSE_SWEEP: usize = 512;

/// Smooth convex domain containing W(A) with margin `delta`: the support
/// function of W(A) about its centroid, Fejer-smoothed to a finite Fourier
/// degree, with the constant mode lifted by the smoothing defect plus
/// `delta` so containment is guaranteed.
pub fn enclosing_domain(a: &CMat, delta: f64) -> Result<SupportDomain> {
    if delta <= 0.0 || !delta.is_finite() {
        return Err(Error::BadConfig(format!("delta must be positive, got {delta}")));
    }
    let bd = numrange_boundary(a, ENCLOSE_SWEEP)?;
    let centroid = bd.points.iter().sum::<Complex64>() / ENCLOSE_SWEEP as f64;
    // support of W(A) - centroid at the sweep angles
    let centered: Vec<f64> = (0..ENCLOSE_SWEEP)
        .map(|k| bd.supports[k] - (centroid * Complex64::from_polar(1.0, -bd.angles[k])).re)
        .collect();
    let r_max = bd
        .points
        .iter()
        .map(|p| (p - centroid).norm())
        .fold(0.0, f64::max);
    let half = ENCLOSE_SWEEP / 2;
    let min_width = (0..half)
        .map(|k| centered[k] + centered[k + half])
        .fold(f64::INFINITY, f64::min);
    if min_width < 1e-9 + 1e-6 * r_max {
        // Degenerate numerical range (a point or a segment): fall back to
        // the smallest disk about the centroid plus the margin.
        return SupportDomain::disk(centroid, r_max + delta);
    }

    let interp = |theta: f64| -> f64 {
        // piecewise-linear interpolation of the sampled support function
        let t = theta.rem_euclid(TAU) / TAU * ENCLOSE_SWEEP as f64;
        let k = (t.floor() as usize) % ENCLOSE_SWEEP;
        let frac = t - t.floor();
        centered[k] * (1.0 - frac) + centered[(k + 1) % ENCLOSE_SWEEP] * frac
    };

    let mut degree = 32usize;
    loop {
        let (mut cos, mut sin) = project_support(&interp, degree);
        // Fejer damping keeps h + h'' nonnegative for support-function data.
        for k in 1..=degree {
            let damp = 1.0 - k as f64 / (degree + 1) as f64;
            cos[k] *= damp;
            sin[k] *= damp;
        }
        let trial = SupportDomain::new(centroid, cos.clone(), sin.clone());
        let defect = match &trial {
            Ok(t) => (0..ENCLOSE_SWEEP)
                .map(|k| centered[k] - t.h(bd.angles[k]))
                .fold(0.0f64, f64::max),
            Err(_) => 0.0,
        };
        cos[0] += defect.max(0.0) + delta;
        if let Ok(domain) = SupportDomain::new(centroid, cos, sin) {
            if contains_numrange(&domain, a, 0.0)? {
                return Ok(domain);
            }
        }
        degree *= 2;
        if degree > 256 {
            return Err(Error::SmoothingMargin(degree));
        }
    }
}

/// Minimum over boundary nodes of the smallest eigenvalue of
/// `nu (conj(sigma) I - A*) + conj(nu) (sigma I - A)`, which is twice the
/// gap between the tangent line and W(A). Positive iff W(A) is strictly
/// inside the domain.
pub fn enclosure_margin(nodes: &[BoundaryNode], a: &CMat) -> Result<f64> {
    let n = a.nrows();
    let id = CMat::identity(n, n);
    let mut margin = f64::INFINITY;
    for node in nodes {
        let m = (&id * node.sigma - a) * node.nu.conj();
        let herm = &m + m.adjoint();
        let eig = SymmetricEigen::try_new(herm, f64::EPSILON, 0).ok_or(Error::EigenFailure)?;
        let min = eig
            .eigenvalues
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        margin = margin.min(min);
    }
    Ok(margin)
}

const CONTAINS_NODES: usize = 1024;

/// True iff the eigenvalue enclosure margin exceeds `margin` at every node
/// of a fixed fine boundary grid.
pub fn contains_numrange(domain: &SupportDomain, a: &CMat, margin: f64) -> Result<bool> {
    let nodes = domain.boundary_nodes(CONTAINS_NODES)?;
    Ok(enclosure_margin(&nodes, a)? > margin)
}
