//! Scalar and operator Cauchy transforms, the double-layer jump formula
//! for `g = C(conj f, .)`, the contour functional calculus `f(A)`, the
//! operator kernel `mu(sigma, A)`, and the balance operator `S(phi, A)`.
//!
//! All contour quadratures convert `d sigma = i nu ds` so that a transform
//! `(1/2 pi i) integral phi (sigma - z)^{-1} d sigma` becomes the plain
//! arclength sum `(1/2 pi) sum phi_k nu_k w_k (sigma_k - z)^{-1}`.

use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::geometry::{mu_diagonal, mu_kernel, BoundaryNode, SupportDomain};
use crate::holofun::{boundary_trace, conj_trace, BoundarySamples, RationalFun};
use crate::numrange::enclosure_margin;
use crate::CMat;

/// Per-node resolvents `(sigma_k I - A)^{-1}` shared across transforms of
/// the same `(A, domain, N)` triple.
pub struct OperatorKernelCache {
    nodes: Vec<BoundaryNode>,
    resolvents: Vec<CMat>,
    margin: f64,
    dim: usize,
}

impl OperatorKernelCache {
    /// Factors all node resolvents; errors if the numerical range is not
    /// strictly enclosed or a resolvent residual exceeds 1e-10.
    pub fn build(a: &CMat, domain: &SupportDomain, n: usize) -> Result<Self> {
        let nodes = domain.boundary_nodes(n)?;
        let margin = enclosure_margin(&nodes, a)?;
        if margin <= 0.0 {
            return Err(Error::NotEnclosed(margin));
        }
        let dim = a.nrows();
        let id = CMat::identity(dim, dim);
        let mut resolvents = Vec::with_capacity(nodes.len());
        for node in &nodes {
            let m = &id * node.sigma - a;
            let r = m
                .clone()
                .lu()
                .try_inverse()
                .ok_or(Error::NotEnclosed(margin))?;
            let residual = (&m * &r - &id).norm();
            if residual > 1e-10 {
                return Err(Error::ResolventResidual(residual));
            }
            resolvents.push(r);
        }
        Ok(OperatorKernelCache {
            nodes,
            resolvents,
            margin,
            dim,
        })
    }

    pub fn nodes(&self) -> &[BoundaryNode] {
        &self.nodes
    }

    /// Eigenvalue enclosure margin, reported for error attribution.
    pub fn margin(&self) -> f64 {
        self.margin
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn resolvent(&self, k: usize) -> &CMat {
        &self.resolvents[k]
    }
}

/// Scalar Cauchy transform value with an accuracy flag.
#[derive(Clone, Copy, Debug)]
pub struct CauchyEval {
    pub value: Complex64,
    /// False when `z` is within five mesh widths of the boundary, where
    /// the trapezoid rule loses its spectral accuracy.
    pub full_accuracy: bool,
}

/// `C(phi, z) = (1/2 pi i) integral phi(sigma) / (sigma - z) d sigma` by
/// the trapezoid rule; `z` must lie inside the domain.
pub fn cauchy_scalar(
    domain: &SupportDomain,
    nodes: &[BoundaryNode],
    phi: &BoundarySamples,
    z: Complex64,
) -> Result<CauchyEval> {
    phi.check_len(nodes)?;
    if !domain.contains(z) {
        return Err(Error::OutsideDomain);
    }
    let mesh = domain.perimeter() / nodes.len() as f64;
    let gap = domain.boundary_gap(z);
    let mut sum = Complex64::new(0.0, 0.0);
    for (node, v) in nodes.iter().zip(&phi.values) {
        sum += v * node.nu / (node.sigma - z) * node.weight;
    }
    Ok(CauchyEval {
        value: sum / TAU,
        full_accuracy: gap >= 5.0 * mesh,
    })
}

/// Boundary values of `g = C(conj f, .)` by the double-layer jump formula:
/// `g(sigma_j) = sum_k conj(f(sigma_k)) mu(sigma_k, sigma_j) w_k`, with the
/// diagonal term replaced by the coincidence limit `curvature / 2 pi`.
pub fn conjugate_transform_boundary(
    f: &RationalFun,
    domain: &SupportDomain,
    n: usize,
) -> Result<BoundarySamples> {
    let nodes = domain.boundary_nodes(n)?;
    let fbar = conj_trace(f, &nodes)?;
    let mut values = Vec::with_capacity(n);
    for (j, nj) in nodes.iter().enumerate() {
        let mut g = fbar.values[j] * mu_diagonal(nj) * nj.weight;
        for (k, nk) in nodes.iter().enumerate() {
            if k != j {
                g += fbar.values[k] * mu_kernel(nk.sigma, nk.nu, nj.sigma)? * nk.weight;
            }
        }
        values.push(g);
    }
    Ok(BoundarySamples { values })
}

/// Operator Cauchy transform `C(phi, A)` over a prebuilt kernel cache.
pub fn cauchy_matrix(phi: &BoundarySamples, cache: &OperatorKernelCache) -> Result<CMat> {
    phi.check_len(&cache.nodes)?;
    let mut sum = CMat::zeros(cache.dim, cache.dim);
    for (k, node) in cache.nodes.iter().enumerate() {
        sum += cache.resolvent(k) * (phi.values[k] * node.nu * node.weight);
    }
    Ok(sum / Complex64::new(TAU, 0.0))
}

/// Contour functional calculus `f(A)` for `f` holomorphic on the closed
/// domain enclosing W(A).
pub fn fun_calculus(f: &RationalFun, a: &CMat, domain: &SupportDomain, n: usize) -> Result<CMat> {
    f.check_poles_clear(domain, 1e-9)?;
    let cache = OperatorKernelCache::build(a, domain, n)?;
    fun_calculus_cached(f, &cache)
}

/// Same as [`fun_calculus`] but reusing a kernel cache.
pub fn fun_calculus_cached(f: &RationalFun, cache: &OperatorKernelCache) -> Result<CMat> {
    let trace = boundary_trace(f, cache.nodes())?;
    cauchy_matrix(&trace, cache)
}

/// Hermitian operator kernel
/// `mu(sigma, A) = (1/2 pi)(nu (sigma - A)^{-1} + conj(nu) (conj(sigma) - A*)^{-1})`.
pub fn mu_matrix(node: &BoundaryNode, a: &CMat) -> Result<CMat> {
    let n = a.nrows();
    let id = CMat::identity(n, n);
    let m = &id * node.sigma - a;
    let r = m.lu().try_inverse().ok_or(Error::EigenFailure)?;
    let term = &r * node.nu;
    Ok((&term + term.adjoint()) / Complex64::new(TAU, 0.0))
}

/// Balance operator `S(phi, A) = C(phi, A) + C(conj phi, A)^*`.
pub fn balance_operator(phi: &BoundarySamples, cache: &OperatorKernelCache) -> Result<CMat> {
    let c1 = cauchy_matrix(phi, cache)?;
    let c2 = cauchy_matrix(&phi.conj(), cache)?;
    Ok(c1 + c2.adjoint())
}

/// Second route to the balance operator,
/// `S(phi, A) = integral phi(sigma) mu(sigma, A) ds`, used as an
/// independent cross-check of [`balance_operator`].
pub fn balance_operator_mu(phi: &BoundarySamples, a: &CMat, cache: &OperatorKernelCache) -> Result<CMat> {
    phi.check_len(cache.nodes())?;
    let n = a.nrows();
    let mut sum = CMat::zeros(n, n);
    for (k, node) in cache.nodes().iter().enumerate() {
        sum += mu_matrix(node, a)? * (phi.values[k] * node.weight);
    }
    Ok(sum)
}
