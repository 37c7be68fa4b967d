//! Randomized property campaigns for the double-layer averaging lemma, the
//! balance-operator norm bound, the (1 + sqrt 2) spectral-set theorem with
//! its factorization identity, the sqrt-2 radius corollary, the sector
//! bound, and the disk case with f(0) = 0.
//!
//! A campaign can only falsify the bounds or lower-bound the extremal
//! constant; every violation it ever reports is either a major finding or,
//! far more likely, a bug.

use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_4, FRAC_PI_8, SQRT_2};

use crate::cauchy::{
    balance_operator, cauchy_matrix, conjugate_transform_boundary, fun_calculus_cached,
    OperatorKernelCache,
};
use crate::error::{Error, Result};
use crate::geometry::SupportDomain;
use crate::holofun::{boundary_trace, conj_trace, in_sector, sup_norm, BoundarySamples, RationalFun};
use crate::hull::distance_to_hull;
use crate::numrange::{
    enclosing_domain, min_singular_value, numerical_radius, spectral_norm, MatrixJson,
};
use crate::CMat;

/// Random-trial generation parameters and tolerance budget.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Ensemble {
    pub dim_min: usize,
    pub dim_max: usize,
    pub max_degree: usize,
    /// Enclosing-domain margin for `W(A) + delta` domains.
    pub delta: f64,
    /// Boundary quadrature nodes per trial.
    pub quad_nodes: usize,
    /// Slack tolerance for the lemma norm bounds.
    pub tol_lemma: f64,
    /// Distance tolerance for convex-hull membership.
    pub tol_hull: f64,
    /// Slack tolerance for the theorem, radius, sector and disk bounds.
    pub tol_assert: f64,
    /// Tolerance for exact operator representations (factorization
    /// residual, S(f,A) = f(A) on the disk).
    pub tol_repr: f64,
}

impl Default for Ensemble {
    fn default() -> Self {
        Ensemble {
            dim_min: 2,
            dim_max: 6,
            max_degree: 8,
            delta: 0.1,
            quad_nodes: 512,
            tol_lemma: 1e-7,
            tol_hull: 1e-6,
            tol_assert: 1e-6,
            tol_repr: 1e-7,
        }
    }
}

/// The six campaign kinds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CheckKind {
    Lemma1,
    Lemma2,
    Theorem,
    Radius,
    Sector,
    BergerStampfli,
}

impl CheckKind {
    pub const ALL: [CheckKind; 6] = [
        CheckKind::Lemma1,
        CheckKind::Lemma2,
        CheckKind::Theorem,
        CheckKind::Radius,
        CheckKind::Sector,
        CheckKind::BergerStampfli,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Lemma1 => "lemma1",
            CheckKind::Lemma2 => "lemma2",
            CheckKind::Theorem => "theorem",
            CheckKind::Radius => "radius",
            CheckKind::Sector => "sector",
            CheckKind::BergerStampfli => "bs",
        }
    }

    pub fn parse(s: &str) -> Option<CheckKind> {
        Self::ALL.iter().copied().find(|k| k.name() == s)
    }
}

/// Trigonometric polynomial in the boundary angle, the continuous test
/// density phi of the balance operator.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TrigPoly {
    pub cos: Vec<[f64; 2]>,
    pub sin: Vec<[f64; 2]>,
}

impl TrigPoly {
    pub fn eval(&self, theta: f64) -> Complex64 {
        let mut v = Complex64::new(0.0, 0.0);
        for (k, c) in self.cos.iter().enumerate() {
            v += Complex64::new(c[0], c[1]) * (k as f64 * theta).cos();
        }
        for (k, s) in self.sin.iter().enumerate().skip(1) {
            v += Complex64::new(s[0], s[1]) * (k as f64 * theta).sin();
        }
        v
    }
}

/// Everything needed to re-run the most adverse trial of a campaign.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WorstCase {
    pub trial_seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix: Option<MatrixJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub function: Option<RationalFun>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi: Option<TrigPoly>,
    pub domain: SupportDomain,
}

/// Aggregated campaign outcome; `worst_margin` is the most adverse signed
/// slack observed and must reproduce from `worst_case`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckReport {
    pub check_name: String,
    pub trials: u64,
    pub violations: u64,
    /// Trials whose construction failed its own precondition (sector
    /// membership); counted separately, never as violations.
    pub excluded: u64,
    pub worst_margin: f64,
    /// Campaign-wide maximum observed ratio ||f(A)|| / ||f||_inf, recorded
    /// for the theorem-style checks only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst_case: Option<WorstCase>,
}

struct TrialOutcome {
    slack: f64,
    violation: bool,
    excluded: bool,
    ratio: Option<f64>,
    worst: WorstCase,
}

fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn unit_disc_sample(rng: &mut ChaCha8Rng) -> Complex64 {
    loop {
        let z = Complex64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0);
        if z.norm_sqr() <= 1.0 {
            return z;
        }
    }
}

/// Complex Ginibre draw normalized to numerical radius one.
fn ginibre_w1(rng: &mut ChaCha8Rng, dim: usize) -> Result<CMat> {
    use rand_distr::StandardNormal;
    loop {
        let mut a = CMat::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                a[(i, j)] = Complex64::new(re, im) / (dim as f64).sqrt();
            }
        }
        let w = numerical_radius(&a)?;
        if w > 1e-8 {
            return Ok(a / Complex64::new(w, 0.0));
        }
    }
}

fn random_ellipse(rng: &mut ChaCha8Rng) -> Result<SupportDomain> {
    let center = Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
    let a = 0.5 + 1.5 * rng.gen::<f64>();
    let b = 0.5 + 1.5 * rng.gen::<f64>();
    let rot = std::f64::consts::TAU * rng.gen::<f64>();
    SupportDomain::ellipse(center, a, b, rot)
}

/// Coefficients uniform in the unit polydisc, then sup-normalized on the
/// domain when `normalize` is set.
fn random_poly(
    rng: &mut ChaCha8Rng,
    max_degree: usize,
    domain: &SupportDomain,
    normalize: bool,
) -> Result<RationalFun> {
    loop {
        let deg = rng.gen_range(1..=max_degree);
        let coeffs: Vec<Complex64> = (0..=deg).map(|_| unit_disc_sample(rng)).collect();
        let f = RationalFun::polynomial(coeffs);
        let sup = sup_norm(&f, domain)?;
        if sup < 1e-10 {
            continue;
        }
        if normalize {
            return Ok(f.scale(Complex64::new(1.0 / sup, 0.0)));
        }
        return Ok(f);
    }
}

fn random_trig(rng: &mut ChaCha8Rng, degree: usize) -> TrigPoly {
    TrigPoly {
        cos: (0..=degree)
            .map(|_| {
                let z = unit_disc_sample(rng);
                [z.re, z.im]
            })
            .collect(),
        sin: (0..=degree)
            .map(|_| {
                let z = unit_disc_sample(rng);
                [z.re, z.im]
            })
            .collect(),
    }
}

fn run_campaign<F>(kind: CheckKind, trials: u64, per_trial: F) -> Result<CheckReport>
where
    F: Fn(u64) -> Result<TrialOutcome> + Sync,
{
    let outcomes: Vec<Result<TrialOutcome>> =
        (0..trials).into_par_iter().map(|i| per_trial(i)).collect();
    let mut report = CheckReport {
        check_name: kind.name().to_string(),
        trials,
        violations: 0,
        excluded: 0,
        worst_margin: f64::INFINITY,
        max_ratio: None,
        worst_case: None,
    };
    for outcome in outcomes {
        let o = outcome?;
        if o.excluded {
            report.excluded += 1;
            continue;
        }
        if o.violation {
            report.violations += 1;
        }
        if let Some(r) = o.ratio {
            report.max_ratio = Some(report.max_ratio.unwrap_or(f64::NEG_INFINITY).max(r));
        }
        if o.slack < report.worst_margin {
            report.worst_margin = o.slack;
            report.worst_case = Some(o.worst);
        }
    }
    Ok(report)
}

// ---- slack evaluators; each is reused verbatim by `reevaluate` ----------

fn lemma1_slack(domain: &SupportDomain, f: &RationalFun, n: usize, ens: &Ensemble) -> Result<f64> {
    let g = conjugate_transform_boundary(f, domain, n)?;
    let fsup = sup_norm(f, domain)?;
    let norm_slack = fsup - g.max_abs();
    let nodes = domain.boundary_nodes(n)?;
    let fbar = conj_trace(f, &nodes)?;
    let hull_excess = g
        .values
        .iter()
        .map(|v| distance_to_hull(*v, &fbar.values))
        .fold(0.0f64, f64::max);
    // hull membership slack, signed: positive when within tolerance scale
    let hull_slack = ens.tol_hull - hull_excess;
    Ok(norm_slack.min(hull_slack))
}

fn lemma2_slack(
    domain: &SupportDomain,
    a: &CMat,
    phi: &TrigPoly,
    n: usize,
) -> Result<f64> {
    let cache = OperatorKernelCache::build(a, domain, n)?;
    let samples = BoundarySamples::from_fn(cache.nodes(), |node| phi.eval(node.theta));
    let s = balance_operator(&samples, &cache)?;
    Ok(2.0 * samples.max_abs() - spectral_norm(&s))
}

struct TheoremOutcome {
    slack: f64,
    lambda: f64,
}

fn theorem_slack(
    domain: &SupportDomain,
    a: &CMat,
    f: &RationalFun,
    n: usize,
    ens: &Ensemble,
) -> Result<TheoremOutcome> {
    let cache = OperatorKernelCache::build(a, domain, n)?;
    let fa = fun_calculus_cached(f, &cache)?;
    let lambda = spectral_norm(&fa);

    // (a) the spectral-set bound itself
    let slack_a = (1.0 + SQRT_2) * sup_norm(f, domain)? - lambda;

    // (b) factorization identity; algebraic in lambda, so for lambda <= 1
    // it is still exercised at an artificial lambda of 1.5
    let lam = if lambda > 1.0 { lambda } else { 1.5 };
    let lam2 = lam * lam;
    let g = conjugate_transform_boundary(f, domain, n)?;
    let ftrace = boundary_trace(f, cache.nodes())?;
    let ga = cauchy_matrix(&conj_trace(f, cache.nodes())?, &cache)?;
    let s = &fa + ga.adjoint();
    let fg = BoundarySamples {
        values: ftrace
            .values
            .iter()
            .zip(&g.values)
            .map(|(x, y)| x * y)
            .collect(),
    };
    let h = BoundarySamples {
        values: fg
            .values
            .iter()
            .zip(&ftrace.values)
            .map(|(p, fv)| fv / (p + lam2))
            .collect(),
    };
    let fga = cauchy_matrix(&fg, &cache)?;
    let ha = cauchy_matrix(&h, &cache)?;
    let dim = cache.dim();
    let id = CMat::identity(dim, dim);
    let lhs = &id * Complex64::new(lam2, 0.0) - fa.adjoint() * &fa;
    let rhs = (&id - s.adjoint() * ha) * (&id * Complex64::new(lam2, 0.0) + &fga);
    let residual = (lhs - rhs).norm();
    let slack_b = ens.tol_repr * lam2 - residual;

    // (c) singularity of the defect at the true lambda
    let defect = &id * Complex64::new(lambda * lambda, 0.0) - fa.adjoint() * &fa;
    let slack_c = ens.tol_assert - min_singular_value(&defect);

    Ok(TheoremOutcome {
        slack: slack_a.min(slack_b).min(slack_c),
        lambda,
    })
}

fn radius_slack(domain: &SupportDomain, a: &CMat, f: &RationalFun, n: usize) -> Result<f64> {
    let cache = OperatorKernelCache::build(a, domain, n)?;
    let fa = fun_calculus_cached(f, &cache)?;
    Ok(SQRT_2 * sup_norm(f, domain)? - numerical_radius(&fa)?)
}

fn norm_bound_slack(domain: &SupportDomain, a: &CMat, f: &RationalFun, n: usize) -> Result<f64> {
    let cache = OperatorKernelCache::build(a, domain, n)?;
    let fa = fun_calculus_cached(f, &cache)?;
    Ok(2.0 * sup_norm(f, domain)? - spectral_norm(&fa))
}

fn disk_representation_gap(a: &CMat, f: &RationalFun, n: usize) -> Result<f64> {
    let disk = SupportDomain::disk(Complex64::new(0.0, 0.0), 1.0)?;
    let cache = OperatorKernelCache::build(a, &disk, n)?;
    let fa = fun_calculus_cached(f, &cache)?;
    let s = balance_operator(&boundary_trace(f, cache.nodes())?, &cache)?;
    Ok((s - fa).norm())
}

// ---- campaigns -----------------------------------------------------------

pub fn check_lemma1(ensemble: &Ensemble, trials: u64, seed: u64) -> Result<CheckReport> {
    run_campaign(CheckKind::Lemma1, trials, |i| {
        let mut rng = trial_rng(seed, i);
        let domain = random_ellipse(&mut rng)?;
        let f = random_poly(&mut rng, ensemble.max_degree, &domain, false)?;
        let slack = lemma1_slack(&domain, &f, ensemble.quad_nodes, ensemble)?;
        Ok(TrialOutcome {
            slack,
            violation: slack < -ensemble.tol_lemma,
            excluded: false,
            ratio: None,
            worst: WorstCase {
                trial_seed: i,
                matrix: None,
                function: Some(f),
                phi: None,
                domain,
            },
        })
    })
}

pub fn check_lemma2(ensemble: &Ensemble, trials: u64, seed: u64) -> Result<CheckReport> {
    run_campaign(CheckKind::Lemma2, trials, |i| {
        let mut rng = trial_rng(seed, i);
        let dim = rng.gen_range(ensemble.dim_min..=ensemble.dim_max);
        let a = ginibre_w1(&mut rng, dim)?;
        let domain = enclosing_domain(&a, ensemble.delta)?;
        let phi = random_trig(&mut rng, 6);
        let slack = lemma2_slack(&domain, &a, &phi, ensemble.quad_nodes)?;
        Ok(TrialOutcome {
            slack,
            violation: slack < -ensemble.tol_lemma,
            excluded: false,
            ratio: None,
            worst: WorstCase {
                trial_seed: i,
                matrix: Some(MatrixJson::from_matrix(&a)),
                function: None,
                phi: Some(phi),
                domain,
            },
        })
    })
}

pub fn check_theorem(ensemble: &Ensemble, trials: u64, seed: u64) -> Result<CheckReport> {
    run_campaign(CheckKind::Theorem, trials, |i| {
        let mut rng = trial_rng(seed, i);
        let dim = rng.gen_range(ensemble.dim_min..=ensemble.dim_max);
        let a = ginibre_w1(&mut rng, dim)?;
        let domain = enclosing_domain(&a, ensemble.delta)?;
        let f = random_poly(&mut rng, ensemble.max_degree, &domain, true)?;
        let out = theorem_slack(&domain, &a, &f, ensemble.quad_nodes, ensemble)?;
        Ok(TrialOutcome {
            slack: out.slack,
            violation: out.slack < -ensemble.tol_assert,
            excluded: false,
            ratio: Some(out.lambda),
            worst: WorstCase {
                trial_seed: i,
                matrix: Some(MatrixJson::from_matrix(&a)),
                function: Some(f),
                phi: None,
                domain,
            },
        })
    })
}

pub fn check_radius(ensemble: &Ensemble, trials: u64, seed: u64) -> Result<CheckReport> {
    run_campaign(CheckKind::Radius, trials, |i| {
        let mut rng = trial_rng(seed, i);
        let dim = rng.gen_range(ensemble.dim_min..=ensemble.dim_max);
        let a = ginibre_w1(&mut rng, dim)?;
        let domain = enclosing_domain(&a, ensemble.delta)?;
        let f = random_poly(&mut rng, ensemble.max_degree, &domain, true)?;
        let slack = radius_slack(&domain, &a, &f, ensemble.quad_nodes)?;
        Ok(TrialOutcome {
            slack,
            violation: slack < -ensemble.tol_assert,
            excluded: false,
            ratio: None,
            worst: WorstCase {
                trial_seed: i,
                matrix: Some(MatrixJson::from_matrix(&a)),
                function: Some(f),
                phi: None,
                domain,
            },
        })
    })
}

/// Builds a sector-valued trial function `(1 + t sin(pi/8) p)^2` with `p`
/// sup-normalized, then rescales to unit sup-norm; squaring doubles the
/// argument so the values stay in the quarter-plane sector.
fn sector_function(
    rng: &mut ChaCha8Rng,
    max_degree: usize,
    domain: &SupportDomain,
) -> Result<RationalFun> {
    let p = random_poly(rng, max_degree / 2 + 1, domain, true)?;
    let t: f64 = rng.gen::<f64>();
    let scaled = p.scale(Complex64::new(t * FRAC_PI_8.sin(), 0.0));
    let mut shifted = scaled.numer().to_vec();
    shifted[0] += Complex64::new(1.0, 0.0);
    let q = RationalFun::polynomial(shifted);
    let f = q.mul(&q);
    let sup = sup_norm(&f, domain)?;
    Ok(f.scale(Complex64::new(1.0 / sup, 0.0)))
}

pub fn check_sector(ensemble: &Ensemble, trials: u64, seed: u64) -> Result<CheckReport> {
    run_campaign(CheckKind::Sector, trials, |i| {
        let mut rng = trial_rng(seed, i);
        let dim = rng.gen_range(ensemble.dim_min..=ensemble.dim_max);
        let a = ginibre_w1(&mut rng, dim)?;
        let domain = enclosing_domain(&a, ensemble.delta)?;
        let f = sector_function(&mut rng, ensemble.max_degree, &domain)?;
        if !in_sector(&f, &domain, FRAC_PI_4)? {
            return Ok(TrialOutcome {
                slack: f64::INFINITY,
                violation: false,
                excluded: true,
                ratio: None,
                worst: WorstCase {
                    trial_seed: i,
                    matrix: None,
                    function: None,
                    phi: None,
                    domain,
                },
            });
        }
        let slack = norm_bound_slack(&domain, &a, &f, ensemble.quad_nodes)?;
        Ok(TrialOutcome {
            slack,
            violation: slack < -ensemble.tol_assert,
            excluded: false,
            ratio: None,
            worst: WorstCase {
                trial_seed: i,
                matrix: Some(MatrixJson::from_matrix(&a)),
                function: Some(f),
                phi: None,
                domain,
            },
        })
    })
}

pub fn check_berger_stampfli(ensemble: &Ensemble, trials: u64, seed: u64) -> Result<CheckReport> {
    let disk = SupportDomain::disk(Complex64::new(0.0, 0.0), 1.0)?;
    run_campaign(CheckKind::BergerStampfli, trials, |i| {
        let mut rng = trial_rng(seed, i);
        let dim = rng.gen_range(ensemble.dim_min..=ensemble.dim_max);
        // numerical radius 0.9 puts the closed numerical range strictly
        // inside the unit disk
        let a = ginibre_w1(&mut rng, dim)? * Complex64::new(0.9, 0.0);
        let f = loop {
            let deg = rng.gen_range(1..=ensemble.max_degree);
            let mut coeffs: Vec<Complex64> = (0..=deg).map(|_| unit_disc_sample(&mut rng)).collect();
            coeffs[0] = Complex64::new(0.0, 0.0);
            let f = RationalFun::polynomial(coeffs);
            let sup = sup_norm(&f, &disk)?;
            if sup > 1e-10 {
                break f.scale(Complex64::new(1.0 / sup, 0.0));
            }
        };
        let norm_slack = norm_bound_slack(&disk, &a, &f, ensemble.quad_nodes)?;
        let gap = disk_representation_gap(&a, &f, ensemble.quad_nodes)?;
        let repr_slack = 1e-9 - gap;
        let slack = norm_slack.min(repr_slack);
        Ok(TrialOutcome {
            slack,
            violation: norm_slack < -ensemble.tol_assert || gap > 1e-9,
            excluded: false,
            ratio: None,
            worst: WorstCase {
                trial_seed: i,
                matrix: Some(MatrixJson::from_matrix(&a)),
                function: Some(f),
                phi: None,
                domain: disk.clone(),
            },
        })
    })
}

/// Runs the named campaign.
pub fn run_check(kind: CheckKind, ensemble: &Ensemble, trials: u64, seed: u64) -> Result<CheckReport> {
    if trials == 0 {
        return Err(Error::BadConfig("empty campaign rejected".into()));
    }
    match kind {
        CheckKind::Lemma1 => check_lemma1(ensemble, trials, seed),
        CheckKind::Lemma2 => check_lemma2(ensemble, trials, seed),
        CheckKind::Theorem => check_theorem(ensemble, trials, seed),
        CheckKind::Radius => check_radius(ensemble, trials, seed),
        CheckKind::Sector => check_sector(ensemble, trials, seed),
        CheckKind::BergerStampfli => check_berger_stampfli(ensemble, trials, seed),
    }
}

/// Recomputes the slack of a recorded worst case; used to confirm that
/// reports are reproducible bit-for-bit from their serialized inputs.
pub fn reevaluate(kind: CheckKind, worst: &WorstCase, ensemble: &Ensemble) -> Result<f64> {
    let n = ensemble.quad_nodes;
    match kind {
        CheckKind::Lemma1 => {
            let f = worst.function.as_ref().ok_or(Error::BadConfig("missing f".into()))?;
            lemma1_slack(&worst.domain, f, n, ensemble)
        }
        CheckKind::Lemma2 => {
            let a = worst
                .matrix
                .as_ref()
                .ok_or(Error::BadConfig("missing matrix".into()))?
                .to_matrix()?;
            let phi = worst.phi.as_ref().ok_or(Error::BadConfig("missing phi".into()))?;
            lemma2_slack(&worst.domain, &a, phi, n)
        }
        CheckKind::Theorem => {
            let a = worst
                .matrix
                .as_ref()
                .ok_or(Error::BadConfig("missing matrix".into()))?
                .to_matrix()?;
            let f = worst.function.as_ref().ok_or(Error::BadConfig("missing f".into()))?;
            Ok(theorem_slack(&worst.domain, &a, f, n, ensemble)?.slack)
        }
        CheckKind::Radius => {
            let a = worst
                .matrix
                .as_ref()
                .ok_or(Error::BadConfig("missing matrix".into()))?
                .to_matrix()?;
            let f = worst.function.as_ref().ok_or(Error::BadConfig("missing f".into()))?;
            radius_slack(&worst.domain, &a, f, n)
        }
        CheckKind::Sector => {
            let a = worst
                .matrix
                .as_ref()
                .ok_or(Error::BadConfig("missing matrix".into()))?
                .to_matrix()?;
            let f = worst.function.as_ref().ok_or(Error::BadConfig("missing f".into()))?;
            norm_bound_slack(&worst.domain, &a, f, n)
        }
        CheckKind::BergerStampfli => {
            let a = worst
                .matrix
                .as_ref()
                .ok_or(Error::BadConfig("missing matrix".into()))?
                .to_matrix()?;
            let f = worst.function.as_ref().ok_or(Error::BadConfig("missing f".into()))?;
            let norm_slack = norm_bound_slack(&worst.domain, &a, f, n)?;
            let gap = disk_representation_gap(&a, f, n)?;
            Ok(norm_slack.min(1e-9 - gap))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> Ensemble {
        Ensemble {
            dim_max: 4,
            max_degree: 5,
            quad_nodes: 256,
            ..Ensemble::default()
        }
    }

    #[test]
    fn lemma1_disk_identity_slack_is_one() {
        let disk = SupportDomain::disk(Complex64::new(0.0, 0.0), 1.0).unwrap();
        let f = RationalFun::identity();
        // g vanishes, so the norm slack is exactly ||f||_inf = 1
        let ens = Ensemble::default();
        let slack = lemma1_slack(&disk, &f, 256, &ens).unwrap();
        assert!((slack - ens.tol_hull).abs() < 1e-9 || (slack - 1.0).abs() < 1e-9);
    }

    #[test]
    fn lemma1_constant_is_equality_case() {
        let disk = SupportDomain::disk(Complex64::new(0.0, 0.0), 1.0).unwrap();
        let f = RationalFun::constant(Complex64::new(0.3, -0.8));
        let ens = Ensemble::default();
        let slack = lemma1_slack(&disk, &f, 256, &ens).unwrap();
        assert!(slack >= -1e-10);
        assert!(slack < 1e-5, "slack {slack} should be ~0 for a constant");
    }

    #[test]
    fn lemma1_campaign_clean() {
        let r = check_lemma1(&small(), 30, 7).unwrap();
        assert_eq!(r.violations, 0);
        assert!(r.worst_margin > -1e-7);
    }

    #[test]
    fn lemma2_campaign_clean() {
        let r = check_lemma2(&small(), 20, 11).unwrap();
        assert_eq!(r.violations, 0);
    }

    #[test]
    fn theorem_campaign_clean_and_ratio_bracketed() {
        let r = check_theorem(&small(), 20, 13).unwrap();
        assert_eq!(r.violations, 0);
        let maxr = r.max_ratio.unwrap();
        assert!(maxr <= 1.0 + SQRT_2 + 1e-6);
        // quadratic inequality for the campaign-wide max ratio
        assert!(maxr * maxr <= 2.0 * maxr + 1.0 + 1e-6);
    }

    #[test]
    fn theorem_constant_function_has_unit_ratio() {
        let a = CMat::from_row_slice(
            2,
            2,
            &[
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
            ],
        );
        let domain = enclosing_domain(&a, 0.1).unwrap();
        let f = RationalFun::constant(Complex64::new(0.7, -0.2));
        let out = theorem_slack(&domain, &a, &f, 256, &Ensemble::default()).unwrap();
        let sup = sup_norm(&f, &domain).unwrap();
        assert!((out.lambda - sup).abs() < 1e-9);
        assert!(out.slack > 0.0);
    }

    #[test]
    fn nilpotent_ratio_tends_to_two() {
        // ||A|| = 2 for the nilpotent with superdiagonal 2, while the sup
        // of z over disk(0, 1 + delta) is 1 + delta
        let a = CMat::from_row_slice(
            2,
            2,
            &[
                Complex64::new(0.0, 0.0),
                Complex64::new(2.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
            ],
        );
        for delta in [0.1, 0.01] {
            let domain = SupportDomain::disk(Complex64::new(0.0, 0.0), 1.0 + delta).unwrap();
            let out = theorem_slack(&domain, &a, &RationalFun::identity(), 512, &Ensemble::default())
                .unwrap();
            let ratio = out.lambda / (1.0 + delta);
            assert!((out.lambda - 2.0).abs() < 1e-8);
            assert!(ratio <= 1.0 + SQRT_2);
            assert!(out.slack > -1e-6, "slack {}", out.slack);
        }
    }

    #[test]
    fn radius_campaign_clean() {
        let r = check_radius(&small(), 20, 17).unwrap();
        assert_eq!(r.violations, 0);
    }

    #[test]
    fn radius_nilpotent_example() {
        let a = CMat::from_row_slice(
            2,
            2,
            &[
                Complex64::new(0.0, 0.0),
                Complex64::new(2.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
            ],
        );
        let domain = enclosing_domain(&a, 0.01).unwrap();
        let slack = radius_slack(&domain, &a, &RationalFun::identity(), 512).unwrap();
        // w(A) = 1, sup over the slightly enlarged disk is near 1
        assert!(slack > SQRT_2 - 1.0 - 0.1);
    }

    #[test]
    fn sector_campaign_clean() {
        let r = check_sector(&small(), 20, 19).unwrap();
        assert_eq!(r.violations, 0);
        assert!(r.excluded < 20);
    }

    #[test]
    fn sector_example_shifted_identity() {
        // f = 2 + z on the unit-disk setup: ||2I + A|| vs 2 * sup|f| = 6
        let disk = SupportDomain::disk(Complex64::new(0.0, 0.0), 1.0).unwrap();
        let a = CMat::from_row_slice(
            2,
            2,
            &[
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
            ],
        );
        let f = RationalFun::polynomial(vec![Complex64::new(2.0, 0.0), Complex64::new(1.0, 0.0)]);
        assert!(in_sector(&f, &disk, FRAC_PI_4).unwrap());
        let slack = norm_bound_slack(&disk, &a, &f, 256).unwrap();
        let norm = 6.0 - slack;
        assert!((norm - 2.5615528128).abs() < 1e-6, "norm {norm}");
    }

    #[test]
    fn berger_stampfli_campaign_clean() {
        let r = check_berger_stampfli(&small(), 20, 23).unwrap();
        assert_eq!(r.violations, 0);
    }

    #[test]
    fn berger_stampfli_nilpotent_examples() {
        let disk = SupportDomain::disk(Complex64::new(0.0, 0.0), 1.0).unwrap();
        let a = CMat::from_row_slice(
            2,
            2,
            &[
                Complex64::new(0.0, 0.0),
                Complex64::new(1.8, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
            ],
        );
        // W(A) is the closed 0.9-disk, inside the unit disk; ||A|| = 1.8 <= 2
        let slack = norm_bound_slack(&disk, &a, &RationalFun::identity(), 512).unwrap();
        assert!((slack - 0.2).abs() < 1e-8);
        let sq = RationalFun::polynomial(vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        ]);
        let cache = OperatorKernelCache::build(&a, &disk, 512).unwrap();
        let fa = fun_calculus_cached(&sq, &cache).unwrap();
        assert!(fa.norm() < 1e-10);
    }

    #[test]
    fn worst_case_reproduces_worst_margin() {
        let ens = small();
        for kind in [CheckKind::Lemma1, CheckKind::Lemma2, CheckKind::Theorem] {
            let r = run_check(kind, &ens, 10, 31).unwrap();
            let wc = r.worst_case.as_ref().unwrap();
            let again = reevaluate(kind, wc, &ens).unwrap();
            assert!(
                (again - r.worst_margin).abs() < 1e-12,
                "{}: {} vs {}",
                kind.name(),
                again,
                r.worst_margin
            );
        }
    }

    #[test]
    fn determinism_across_runs() {
        let ens = small();
        let a = check_theorem(&ens, 8, 5).unwrap();
        let b = check_theorem(&ens, 8, 5).unwrap();
        assert_eq!(a.worst_margin, b.worst_margin);
        assert_eq!(a.max_ratio, b.max_ratio);
    }

    #[test]
    fn zero_trials_rejected() {
        assert!(run_check(CheckKind::Theorem, &small(), 0, 1).is_err());
    }

    #[test]
    fn report_serializes() {
        let r = check_lemma1(&small(), 5, 3).unwrap();
        let s = serde_json::to_string_pretty(&r).unwrap();
        let back: CheckReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back.trials, 5);
    }

    #[test]
    fn monotonicity_of_ratio_in_delta() {
        // shrinking delta cannot decrease the measured ratio
        let mut rng = trial_rng(77, 0);
        let a = ginibre_w1(&mut rng, 3).unwrap();
        let f = RationalFun::polynomial(vec![
            Complex64::new(0.2, 0.1),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.5),
        ]);
        let ratio_at = |delta: f64| {
            let domain = enclosing_domain(&a, delta).unwrap();
            let cache = OperatorKernelCache::build(&a, &domain, 512).unwrap();
            let fa = fun_calculus_cached(&f, &cache).unwrap();
            spectral_norm(&fa) / sup_norm(&f, &domain).unwrap()
        };
        assert!(ratio_at(0.02) >= ratio_at(0.2) - 1e-8);
    }
}
