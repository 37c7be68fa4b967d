//! Rational test functions with poles outside the closed domain, their
//! boundary traces, sup-norms and sector membership.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::geometry::{BoundaryNode, SupportDomain};
use crate::numrange::sweep_refine_max;

/// Horner evaluation of an ascending coefficient list.
pub fn poly_eval(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// Coefficient convolution.
pub fn poly_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Durand-Kerner root finding for modest degrees.
pub fn poly_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut c: Vec<Complex64> = coeffs.to_vec();
    while let Some(last) = c.last() {
        if last.norm() < 1e-300 && c.len() > 1 {
            c.pop();
        } else {
            break;
        }
    }
    let deg = c.len().saturating_sub(1);
    if deg == 0 {
        return Vec::new();
    }
    let lead = c[deg];
    let monic: Vec<Complex64> = c.iter().map(|x| x / lead).collect();
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..deg).map(|k| seed.powu(k as u32 + 1)).collect();
    for _ in 0..500 {
        let mut shift = 0.0f64;
        let snapshot = roots.clone();
        for k in 0..deg {
            let mut denom = Complex64::new(1.0, 0.0);
            for (j, &r) in snapshot.iter().enumerate() {
                if j != k {
                    denom *= snapshot[k] - r;
                }
            }
            if denom.norm() < 1e-300 {
                continue;
            }
            let delta = poly_eval(&monic, snapshot[k]) / denom;
            roots[k] = snapshot[k] - delta;
            shift = shift.max(delta.norm());
        }
        if shift < 1e-14 {
            break;
        }
    }
    roots
}

/// Rational function `numer / denom` in ascending coefficients; the
/// denominator is kept monic, and `denom == [1]` encodes a polynomial.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(into = "RationalJson", try_from = "RationalJson")]
pub struct RationalFun {
    numer: Vec<Complex64>,
    denom: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct RationalJson {
    numer: Vec<[f64; 2]>,
    denom: Vec<[f64; 2]>,
}

impl From<RationalFun> for RationalJson {
    fn from(f: RationalFun) -> Self {
        let conv = |v: &[Complex64]| v.iter().map(|c| [c.re, c.im]).collect();
        RationalJson {
            numer: conv(&f.numer),
            denom: conv(&f.denom),
        }
    }
}

impl TryFrom<RationalJson> for RationalFun {
    type Error = Error;
    fn try_from(j: RationalJson) -> Result<Self> {
        let conv = |v: &[[f64; 2]]| v.iter().map(|c| Complex64::new(c[0], c[1])).collect();
        RationalFun::rational(conv(&j.numer), conv(&j.denom))
    }
}

impl RationalFun {
    pub fn polynomial(coeffs: Vec<Complex64>) -> Self {
        let numer = if coeffs.is_empty() {
            vec![Complex64::new(0.0, 0.0)]
        } else {
            coeffs
        };
        RationalFun {
            numer,
            denom: vec![Complex64::new(1.0, 0.0)],
        }
    }

    /// Normalizes the denominator to leading coefficient one.
    pub fn rational(numer: Vec<Complex64>, denom: Vec<Complex64>) -> Result<Self> {
        let lead = denom
            .iter()
            .rev()
            .find(|c| c.norm() > 1e-300)
            .copied()
            .ok_or_else(|| Error::BadConfig("zero denominator".into()))?;
        let mut denom: Vec<Complex64> = denom.iter().map(|c| c / lead).collect();
        while denom.len() > 1 && denom.last().unwrap().norm() < 1e-300 {
            denom.pop();
        }
        let numer: Vec<Complex64> = numer.iter().map(|c| c / lead).collect();
        Ok(RationalFun { numer, denom })
    }

    /// `1 / (z - pole)` and friends via explicit pole placement:
    /// denominator `prod (z - p_k)`.
    pub fn with_poles(numer: Vec<Complex64>, poles: &[Complex64]) -> Self {
        let mut denom = vec![Complex64::new(1.0, 0.0)];
        for &p in poles {
            denom = poly_mul(&denom, &[-p, Complex64::new(1.0, 0.0)]);
        }
        RationalFun { numer, denom }
    }

    pub fn identity() -> Self {
        Self::polynomial(vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)])
    }

    pub fn constant(c: Complex64) -> Self {
        Self::polynomial(vec![c])
    }

    pub fn numer(&self) -> &[Complex64] {
        &self.numer
    }

    pub fn denom(&self) -> &[Complex64] {
        &self.denom
    }

    pub fn is_polynomial(&self) -> bool {
        self.denom.len() == 1
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let d = poly_eval(&self.denom, z);
        if d.norm() < 1e-300 {
            return Err(Error::PoleHit);
        }
        Ok(poly_eval(&self.numer, z) / d)
    }

    pub fn poles(&self) -> Vec<Complex64> {
        poly_roots(&self.denom)
    }

    /// Errors unless every denominator root is farther than `clearance`
    /// from the closed domain.
    pub fn check_poles_clear(&self, domain: &SupportDomain, clearance: f64) -> Result<()> {
        for p in self.poles() {
            // for points outside a convex domain, -boundary_gap is the
            // distance to the closest supporting half-plane
            let gap = domain.boundary_gap(p);
            if gap > -clearance {
                return Err(Error::PoleNearDomain(-gap));
            }
        }
        Ok(())
    }

    pub fn scale(&self, c: Complex64) -> Self {
        RationalFun {
            numer: self.numer.iter().map(|x| x * c).collect(),
            denom: self.denom.clone(),
        }
    }

    /// Product by exact coefficient convolution.
    pub fn mul(&self, other: &Self) -> Self {
        RationalFun {
            numer: poly_mul(&self.numer, &other.numer),
            denom: poly_mul(&self.denom, &other.denom),
        }
    }

    /// `z -> f(z - c)`, used for translation covariance checks.
    pub fn translate_arg(&self, c: Complex64) -> Self {
        let shift = |p: &[Complex64]| -> Vec<Complex64> {
            let mut out = vec![Complex64::new(0.0, 0.0); p.len()];
            let mut power = vec![Complex64::new(1.0, 0.0)]; // (z - c)^j
            for (j, &pj) in p.iter().enumerate() {
                for (i, &w) in power.iter().enumerate() {
                    out[i] += pj * w;
                }
                if j + 1 < p.len() {
                    power = poly_mul(&power, &[-c, Complex64::new(1.0, 0.0)]);
                }
            }
            out
        };
        RationalFun {
            numer: shift(&self.numer),
            denom: shift(&self.denom),
        }
    }
}

/// Values of a scalar function at a boundary node list.
#[derive(Clone, Debug)]
pub struct BoundarySamples {
    pub values: Vec<Complex64>,
}

impl BoundarySamples {
    pub fn from_fn<F: FnMut(&BoundaryNode) -> Complex64>(
        nodes: &[BoundaryNode],
        mut f: F,
    ) -> Self {
        BoundarySamples {
            values: nodes.iter().map(|n| f(n)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn conj(&self) -> Self {
        BoundarySamples {
            values: self.values.iter().map(|v| v.conj()).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn check_len(&self, nodes: &[BoundaryNode]) -> Result<()> {
        if self.values.len() != nodes.len() {
            return Err(Error::LengthMismatch(self.values.len(), nodes.len()));
        }
        Ok(())
    }
}

/// Pointwise boundary evaluation of `f`.
pub fn boundary_trace(f: &RationalFun, nodes: &[BoundaryNode]) -> Result<BoundarySamples> {
    let mut values = Vec::with_capacity(nodes.len());
    for n in nodes {
        values.push(f.eval(n.sigma)?);
    }
    Ok(BoundarySamples { values })
}

/// Conjugated boundary evaluation of `f`.
pub fn conj_trace(f: &RationalFun, nodes: &[BoundaryNode]) -> Result<BoundarySamples> {
    Ok(boundary_trace(f, nodes)?.conj())
}

const SUP_NORM_SWEEP: usize = 1024;

/// Maximum modulus over the closed domain, attained on the boundary;
/// boundary sweep plus golden-section refinement.
pub fn sup_norm(f: &RationalFun, domain: &SupportDomain) -> Result<f64> {
    f.check_poles_clear(domain, 1e-9)?;
    let mut failed = false;
    let v = sweep_refine_max(
        |theta| match f.eval(domain.boundary_point(theta)) {
            Ok(v) => v.norm(),
            Err(_) => {
                failed = true;
                0.0
            }
        },
        SUP_NORM_SWEEP,
    );
    if failed {
        return Err(Error::PoleHit);
    }
    Ok(v)
}

/// True iff `f` maps the domain into the sector `|arg| <= half_angle`
/// (up to 1e-12), tested on boundary nodes and an interior grid.
pub fn in_sector(f: &RationalFun, domain: &SupportDomain, half_angle: f64) -> Result<bool> {
    let ok = |v: Complex64| v.norm() == 0.0 || v.arg().abs() <= half_angle + 1e-12;
    for k in 0..SUP_NORM_SWEEP {
        let theta = TAU * k as f64 / SUP_NORM_SWEEP as f64;
        if !ok(f.eval(domain.boundary_point(theta))?) {
            return Ok(false);
        }
    }
    // ~1000 interior samples on a radial grid
    for i in 1..=25 {
        let t = i as f64 / 26.0;
        for j in 0..40 {
            let theta = TAU * j as f64 / 40.0;
            let z = domain.center() + (domain.boundary_point(theta) - domain.center()) * t;
            if !ok(f.eval(z)?) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn zero() -> Complex64 {
        c(0.0, 0.0)
    }

    #[test]
    fn eval_examples() {
        let sq = RationalFun::polynomial(vec![zero(), zero(), c(1.0, 0.0)]);
        assert!((sq.eval(c(1.0, 1.0)).unwrap() - c(0.0, 2.0)).norm() < 1e-15);

        let inv = RationalFun::with_poles(vec![c(1.0, 0.0)], &[c(3.0, 0.0)]);
        assert!((inv.eval(zero()).unwrap() - c(-1.0 / 3.0, 0.0)).norm() < 1e-15);

        let f = RationalFun::rational(
            vec![c(1.0, 0.0), zero(), c(1.0, 0.0)],
            vec![c(-3.0, 0.0), c(1.0, 0.0)],
        )
        .unwrap();
        assert!(f.eval(c(0.0, 1.0)).unwrap().norm() < 1e-15);
    }

    #[test]
    fn pole_hit_is_an_error() {
        let inv = RationalFun::with_poles(vec![c(1.0, 0.0)], &[c(3.0, 0.0)]);
        assert!(inv.eval(c(3.0, 0.0)).is_err());
    }

    #[test]
    fn roots_of_constructed_denominator() {
        let poles = [c(3.0, 0.0), c(-1.0, 2.0), c(0.5, -4.0)];
        let f = RationalFun::with_poles(vec![c(1.0, 0.0)], &poles);
        let roots = f.poles();
        for p in &poles {
            let d = roots.iter().map(|r| (r - p).norm()).fold(f64::INFINITY, f64::min);
            assert!(d < 1e-10, "pole {p} missing, dist {d}");
        }
    }

    #[test]
    fn sup_norm_examples() {
        let disk = SupportDomain::disk(zero(), 1.0).unwrap();
        let id = RationalFun::identity();
        assert!((sup_norm(&id, &disk).unwrap() - 1.0).abs() < 1e-10);

        let half = SupportDomain::disk(zero(), 0.5).unwrap();
        let sq = RationalFun::polynomial(vec![zero(), zero(), c(1.0, 0.0)]);
        assert!((sup_norm(&sq, &half).unwrap() - 0.25).abs() < 1e-10);

        let inv = RationalFun::with_poles(vec![c(1.0, 0.0)], &[c(3.0, 0.0)]);
        assert!((sup_norm(&inv, &disk).unwrap() - 0.5).abs() < 1e-10);
    }

    #[test]
    fn sup_norm_rejects_interior_pole() {
        let disk = SupportDomain::disk(zero(), 1.0).unwrap();
        let f = RationalFun::with_poles(vec![c(1.0, 0.0)], &[c(0.2, 0.0)]);
        assert!(sup_norm(&f, &disk).is_err());
    }

    #[test]
    fn traces_on_the_unit_circle() {
        let disk = SupportDomain::disk(zero(), 1.0).unwrap();
        let nodes = disk.boundary_nodes(32).unwrap();
        let id = RationalFun::identity();
        let tr = boundary_trace(&id, &nodes).unwrap();
        let ct = conj_trace(&id, &nodes).unwrap();
        for (n, (a, b)) in nodes.iter().zip(tr.values.iter().zip(&ct.values)) {
            assert!((a - n.sigma).norm() < 1e-14);
            assert!((b - n.sigma.conj()).norm() < 1e-14);
            // on the unit circle conj(sigma) = 1/sigma
            assert!((b - 1.0 / n.sigma).norm() < 1e-13);
        }
        let k = RationalFun::constant(c(2.0, -1.0));
        let tk = boundary_trace(&k, &nodes).unwrap();
        let ck = conj_trace(&k, &nodes).unwrap();
        assert!(tk.values.iter().all(|v| (v - c(2.0, -1.0)).norm() < 1e-15));
        assert!(ck.values.iter().all(|v| (v - c(2.0, 1.0)).norm() < 1e-15));

        let g = RationalFun::polynomial(vec![c(1.0, 0.0), c(1.0, 0.0)]);
        assert!((g.eval(c(0.0, 1.0)).unwrap() - c(1.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn sector_membership() {
        let disk = SupportDomain::disk(zero(), 1.0).unwrap();
        let shifted = RationalFun::polynomial(vec![c(2.0, 0.0), c(1.0, 0.0)]);
        assert!(in_sector(&shifted, &disk, std::f64::consts::FRAC_PI_4).unwrap());
        // oracle: min over the circle of arg(2 + e^{it}) stays below pi/4
        let worst = (0..1000)
            .map(|k| {
                let t = TAU * k as f64 / 1000.0;
                (c(2.0, 0.0) + Complex64::from_polar(1.0, t)).arg().abs()
            })
            .fold(0.0, f64::max);
        assert!(worst <= std::f64::consts::FRAC_PI_4);

        assert!(!in_sector(&RationalFun::identity(), &disk, std::f64::consts::FRAC_PI_4).unwrap());
        assert!(in_sector(&RationalFun::constant(c(1.0, 0.0)), &disk, 0.1).unwrap());
    }

    #[test]
    fn sup_norm_monotone_under_inclusion() {
        let small = SupportDomain::disk(c(0.1, 0.0), 0.7).unwrap();
        let big = SupportDomain::disk(zero(), 1.0).unwrap();
        let f = RationalFun::polynomial(vec![c(0.3, 0.2), c(1.0, -0.5), c(0.0, 0.7)]);
        assert!(sup_norm(&f, &small).unwrap() <= sup_norm(&f, &big).unwrap() + 1e-10);
    }

    #[test]
    fn sup_norm_submultiplicative() {
        let disk = SupportDomain::disk(zero(), 1.0).unwrap();
        let f = RationalFun::polynomial(vec![c(0.3, 0.2), c(1.0, -0.5)]);
        let g = RationalFun::polynomial(vec![c(-0.1, 0.9), c(0.2, 0.0), c(0.5, 0.5)]);
        let fg = f.mul(&g);
        let nf = sup_norm(&f, &disk).unwrap();
        let ng = sup_norm(&g, &disk).unwrap();
        let nfg = sup_norm(&fg, &disk).unwrap();
        assert!(nfg <= nf * ng + 1e-9);
    }

    #[test]
    fn interior_values_bounded_by_sup_norm() {
        let e = SupportDomain::ellipse(c(0.2, -0.1), 1.5, 0.8, 0.3).unwrap();
        let f = RationalFun::polynomial(vec![c(0.3, 0.2), c(1.0, -0.5), c(0.1, 0.4)]);
        let bound = sup_norm(&f, &e).unwrap();
        for i in 1..=20 {
            let t = i as f64 / 21.0;
            for j in 0..50 {
                let theta = TAU * j as f64 / 50.0;
                let z = e.center() + (e.boundary_point(theta) - e.center()) * t;
                assert!(f.eval(z).unwrap().norm() <= bound + 1e-9);
            }
        }
    }

    #[test]
    fn translate_arg_is_consistent() {
        let f = RationalFun::polynomial(vec![c(1.0, 0.0), c(0.0, 2.0), c(-0.5, 0.3)]);
        let shift = c(0.7, -0.4);
        let g = f.translate_arg(shift);
        for z in [c(0.0, 0.0), c(1.0, 1.0), c(-0.3, 2.0)] {
            let a = g.eval(z).unwrap();
            let b = f.eval(z - shift).unwrap();
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn json_round_trip() {
        let f = RationalFun::with_poles(vec![c(1.0, 2.0), c(0.0, -1.0)], &[c(3.0, 0.5)]);
        let s = serde_json::to_string(&f).unwrap();
        assert!(s.contains("\"numer\""));
        let back: RationalFun = serde_json::from_str(&s).unwrap();
        for z in [c(0.0, 0.0), c(1.0, -1.0)] {
            assert!((f.eval(z).unwrap() - back.eval(z).unwrap()).norm() < 1e-14);
        }
    }
}
