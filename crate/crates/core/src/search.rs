//! Derivative-free maximization of the ratio `||f(A)|| / sup_{W(A)} |f|`
//! over matrix entries and polynomial coefficients: Nelder-Mead with
//! random restarts, one restart seeded at the known nilpotent extremal
//! where the ratio reaches 2.

use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cauchy::fun_calculus;
use crate::error::{Error, Result};
use crate::holofun::RationalFun;
use crate::numrange::{
    enclosing_domain, numrange_support, spectral_norm, sweep_refine_max, MatrixJson,
};
use crate::CMat;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SearchConfig {
    pub dim: usize,
    pub degree: usize,
    pub restarts: usize,
    pub iterations: usize,
    pub delta: f64,
    pub seed: u64,
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if !(1..=8).contains(&self.dim) {
            return Err(Error::BadConfig(format!("dim {} outside 1..=8", self.dim)));
        }
        if !(1..=12).contains(&self.degree) {
            return Err(Error::BadConfig(format!(
                "degree {} outside 1..=12",
                self.degree
            )));
        }
        if self.restarts == 0 || self.iterations == 0 {
            return Err(Error::BadConfig("restarts and iterations must be positive".into()));
        }
        if !(1e-4..=1e-1).contains(&self.delta) {
            return Err(Error::BadConfig(format!(
                "delta {} outside [1e-4, 1e-1]",
                self.delta
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SearchResult {
    pub best_ratio: f64,
    pub best_matrix: MatrixJson,
    pub best_function: RationalFun,
    /// Cumulative evaluation index paired with the running best ratio;
    /// nondecreasing by construction.
    pub history: Vec<(u64, f64)>,
    pub config: SearchConfig,
}

const RATIO_NODES: usize = 512;
const SUP_SWEEP: usize = 512;

/// `||f(A)|| / sup_{boundary of W(A)} |f|`. The contour for `f(A)` uses the
/// smooth delta-enlarged domain; the sup in the denominator is taken over
/// the numerical-range boundary itself so the reported value matches the
/// spectral-set statement.
pub fn ratio(f: &RationalFun, a: &CMat, delta: f64) -> Result<f64> {
    let domain = enclosing_domain(a, delta)?;
    f.check_poles_clear(&domain, 1e-9)?;
    let fa = fun_calculus(f, a, &domain, RATIO_NODES)?;
    let numerator = spectral_norm(&fa);
    let mut failure = None;
    let denominator = sweep_refine_max(
        |theta| match numrange_support(a, theta).and_then(|(_, p)| f.eval(p)) {
            Ok(v) => v.norm(),
            Err(e) => {
                failure = Some(e);
                0.0
            }
        },
        SUP_SWEEP,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    if denominator <= 1e-300 {
        return Err(Error::BadConfig("zero sup norm on the numerical range".into()));
    }
    Ok(numerator / denominator)
}

fn param_len(dim: usize, degree: usize) -> usize {
    2 * dim * dim + 2 * (degree + 1)
}

fn decode(params: &[f64], dim: usize, degree: usize) -> (CMat, RationalFun) {
    let mut a = CMat::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            let k = 2 * (i * dim + j);
            a[(i, j)] = Complex64::new(params[k], params[k + 1]);
        }
    }
    let base = 2 * dim * dim;
    let coeffs: Vec<Complex64> = (0..=degree)
        .map(|k| Complex64::new(params[base + 2 * k], params[base + 2 * k + 1]))
        .collect();
    (a, RationalFun::polynomial(coeffs))
}

fn encode(a: &CMat, f: &RationalFun, degree: usize) -> Vec<f64> {
    let dim = a.nrows();
    let mut params = vec![0.0; param_len(dim, degree)];
    for i in 0..dim {
        for j in 0..dim {
            let k = 2 * (i * dim + j);
            params[k] = a[(i, j)].re;
            params[k + 1] = a[(i, j)].im;
        }
    }
    let base = 2 * dim * dim;
    for (k, c) in f.numer().iter().take(degree + 1).enumerate() {
        params[base + 2 * k] = c.re;
        params[base + 2 * k + 1] = c.im;
    }
    params
}

/// Ratio as optimization objective; precondition failures score zero.
fn objective(params: &[f64], dim: usize, degree: usize, delta: f64) -> f64 {
    let (a, f) = decode(params, dim, degree);
    ratio(&f, &a, delta).unwrap_or(0.0)
}

struct RestartOutcome {
    best_value: f64,
    best_params: Vec<f64>,
    evals: u64,
    history: Vec<(u64, f64)>,
}

/// One sequential Nelder-Mead run from an initial point.
fn nelder_mead(
    start: Vec<f64>,
    dim: usize,
    degree: usize,
    delta: f64,
    iterations: usize,
) -> RestartOutcome {
    let n = start.len();
    let mut evals = 0u64;
    let mut history: Vec<(u64, f64)> = Vec::new();
    let mut best_value = f64::NEG_INFINITY;
    let mut best_params = start.clone();

    let eval = |x: &[f64], best_value: &mut f64, best_params: &mut Vec<f64>,
                    history: &mut Vec<(u64, f64)>, evals: &mut u64| -> f64 {
        *evals += 1;
        let v = objective(x, dim, degree, delta);
        if v > *best_value {
            *best_value = v;
            *best_params = x.to_vec();
            history.push((*evals, v));
        }
        // minimize the negative
        -v
    };

    // simplex around the start point
    let mut simplex: Vec<Vec<f64>> = vec![start.clone()];
    for i in 0..n {
        let mut p = start.clone();
        p[i] += 0.25 * (1.0 + p[i].abs());
        simplex.push(p);
    }
    let mut values: Vec<f64> = simplex
        .iter()
        .map(|p| eval(p, &mut best_value, &mut best_params, &mut history, &mut evals))
        .collect();

    for _ in 0..iterations {
        // order ascending (best first for the minimized objective)
        let mut idx: Vec<usize> = (0..simplex.len()).collect();
        idx.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
        let ordered: Vec<Vec<f64>> = idx.iter().map(|&i| simplex[i].clone()).collect();
        let ordered_vals: Vec<f64> = idx.iter().map(|&i| values[i]).collect();
        simplex = ordered;
        values = ordered_vals;

        if (values[n] - values[0]).abs() < 1e-12 {
            break;
        }

        let centroid: Vec<f64> = (0..n)
            .map(|j| simplex[..n].iter().map(|p| p[j]).sum::<f64>() / n as f64)
            .collect();
        let worst = simplex[n].clone();
        let reflect: Vec<f64> = (0..n).map(|j| centroid[j] + (centroid[j] - worst[j])).collect();
        let fr = eval(&reflect, &mut best_value, &mut best_params, &mut history, &mut evals);

        if fr < values[0] {
            let expand: Vec<f64> = (0..n)
                .map(|j| centroid[j] + 2.0 * (centroid[j] - worst[j]))
                .collect();
            let fe = eval(&expand, &mut best_value, &mut best_params, &mut history, &mut evals);
            if fe < fr {
                simplex[n] = expand;
                values[n] = fe;
            } else {
                simplex[n] = reflect;
                values[n] = fr;
            }
        } else if fr < values[n - 1] {
            simplex[n] = reflect;
            values[n] = fr;
        } else {
            let contract: Vec<f64> = (0..n)
                .map(|j| centroid[j] + 0.5 * (worst[j] - centroid[j]))
                .collect();
            let fc = eval(&contract, &mut best_value, &mut best_params, &mut history, &mut evals);
            if fc < values[n] {
                simplex[n] = contract;
                values[n] = fc;
            } else {
                // shrink toward the best vertex
                for k in 1..=n {
                    let best = simplex[0].clone();
                    for j in 0..n {
                        simplex[k][j] = best[j] + 0.5 * (simplex[k][j] - best[j]);
                    }
                    let v = eval(
                        &simplex[k].clone(),
                        &mut best_value,
                        &mut best_params,
                        &mut history,
                        &mut evals,
                    );
                    values[k] = v;
                }
            }
        }
    }

    RestartOutcome {
        best_value,
        best_params,
        evals,
        history,
    }
}

/// The known extremal for degree-1 functions: a nilpotent Jordan cell with
/// superdiagonal 2 and f(z) = z, where the ratio equals 2.
fn nilpotent_start(dim: usize, degree: usize) -> Vec<f64> {
    let mut a = CMat::zeros(dim, dim);
    if dim >= 2 {
        a[(0, 1)] = Complex64::new(2.0, 0.0);
    }
    let f = RationalFun::identity();
    encode(&a, &f, degree)
}

fn random_start(rng: &mut ChaCha8Rng, dim: usize, degree: usize) -> Vec<f64> {
    (0..param_len(dim, degree))
        .map(|_| rng.gen::<f64>() * 2.0 - 1.0)
        .collect()
}

/// Runs the restart schedule; deterministic given the seed, with the merge
/// taking the maximum ratio and the lowest restart index on ties.
pub fn optimize(config: &SearchConfig) -> Result<SearchResult> {
    config.validate()?;
    let starts: Vec<Vec<f64>> = (0..config.restarts)
        .map(|r| {
            if r == 0 {
                nilpotent_start(config.dim, config.degree)
            } else {
                let mut rng =
                    ChaCha8Rng::seed_from_u64(config.seed ^ (r as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
                random_start(&mut rng, config.dim, config.degree)
            }
        })
        .collect();

    let outcomes: Vec<RestartOutcome> = starts
        .into_par_iter()
        .map(|s| nelder_mead(s, config.dim, config.degree, config.delta, config.iterations))
        .collect();

    let mut best: Option<&RestartOutcome> = None;
    for o in &outcomes {
        let better = match best {
            None => true,
            Some(b) => o.best_value > b.best_value,
        };
        if better {
            best = Some(o);
        }
    }
    let best = best.ok_or(Error::SearchDegenerate)?;
    if !best.best_value.is_finite() || best.best_value <= 0.0 {
        return Err(Error::SearchDegenerate);
    }

    // merged history: restart order, re-indexed cumulatively, keeping only
    // improvements so the recorded best is nondecreasing
    let mut history: Vec<(u64, f64)> = Vec::new();
    let mut offset = 0u64;
    let mut running = f64::NEG_INFINITY;
    for o in &outcomes {
        for &(i, v) in &o.history {
            if v > running {
                running = v;
                history.push((offset + i, v));
            }
        }
        offset += o.evals;
    }

    let (a, f) = decode(&best.best_params, config.dim, config.degree);
    Ok(SearchResult {
        best_ratio: best.best_value,
        best_matrix: MatrixJson::from_matrix(&a),
        best_function: f,
        history,
        config: config.clone(),
    })
}
