//! Nelder–Mead simplex minimization for the small likelihood problems in
//! [`crate::distfit`].

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct NelderMeadOptions {
    /// Stop once every vertex lies within this distance (max-norm) of the best one.
    pub diameter_tol: f64,
    pub max_evaluations: usize,
    pub reflection: f64,
    pub expansion: f64,
    pub contraction: f64,
    pub shrink: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        NelderMeadOptions {
            diameter_tol: 1e-9,
            max_evaluations: 10_000,
            reflection: 1.0,
            expansion: 2.0,
            contraction: 0.5,
            shrink: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub point: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub diameter: f64,
}

/// Minimizes `f` from `start`, building the initial simplex by displacing one
/// coordinate at a time by `step`. Non-finite objective values are treated as
/// +∞, so constraints can be expressed by returning `f64::INFINITY`.
pub fn nelder_mead<F>(
    f: F,
    start: &[f64],
    step: &[f64],
    opts: &NelderMeadOptions,
) -> Result<Minimum>
where
    F: Fn(&[f64]) -> f64,
{
    let dim = start.len();
    assert!(dim > 0 && step.len() == dim);

    let evaluations = std::cell::Cell::new(0usize);
    let eval = |x: &[f64]| {
        evaluations.set(evaluations.get() + 1);
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    simplex.push((start.to_vec(), eval(start)));
    for i in 0..dim {
        let mut x = start.to_vec();
        x[i] += step[i];
        let v = eval(&x);
        simplex.push((x, v));
    }

    loop {
        // Stable sort keeps the iteration deterministic on ties.
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let diameter = simplex_diameter(&simplex);

        if diameter < opts.diameter_tol && simplex[0].1.is_finite() {
            let (point, value) = simplex.swap_remove(0);
            return Ok(Minimum {
                point,
                value,
                evaluations: evaluations.get(),
                diameter,
            });
        }
        let evaluations = evaluations.get();
        if evaluations >= opts.max_evaluations {
            return Err(Error::NonConvergence {
                what: "Nelder-Mead".into(),
                best_point: simplex[0].0.clone(),
                best_value: simplex[0].1,
                evaluations,
                diameter,
            });
        }

        let centroid: Vec<f64> = (0..dim)
            .map(|j| simplex[..dim].iter().map(|v| v.0[j]).sum::<f64>() / dim as f64)
            .collect();
        let worst = simplex[dim].clone();
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&worst.0)
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        let reflected = along(opts.reflection);
        let fr = eval(&reflected);

        if fr < simplex[0].1 {
            let expanded = along(opts.reflection * opts.expansion);
            let fe = eval(&expanded);
            simplex[dim] = if fe < fr {
                (expanded, fe)
            } else {
                (reflected, fr)
            };
            continue;
        }
        if fr < simplex[dim - 1].1 {
            simplex[dim] = (reflected, fr);
            continue;
        }

        let (candidate, fc) = if fr < worst.1 {
            let outside = along(opts.reflection * opts.contraction);
            let fo = eval(&outside);
            (outside, fo)
        } else {
            let inside = along(-opts.contraction);
            let fi = eval(&inside);
            (inside, fi)
        };
        if fc < worst.1.min(fr) {
            simplex[dim] = (candidate, fc);
            continue;
        }

        let best = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            let x: Vec<f64> = best
                .iter()
                .zip(&vertex.0)
                .map(|(b, v)| b + opts.shrink * (v - b))
                .collect();
            let v = eval(&x);
            *vertex = (x, v);
        }
    }
}

/// Runs [`nelder_mead`] from `start` and from two deterministic jittered
/// copies of it; the lowest objective wins. Fails only if every start fails,
/// in which case the error of the best failed attempt is returned.
pub fn nelder_mead_restarts<F>(
    f: F,
    start: &[f64],
    step: &[f64],
    opts: &NelderMeadOptions,
) -> Result<Minimum>
where
    F: Fn(&[f64]) -> f64,
{
    let jitters: [f64; 3] = [0.0, 0.5, -0.5];
    let mut best: Option<Minimum> = None;
    let mut last_err: Option<Error> = None;
    let mut total = 0usize;

    for (k, &jit) in jitters.iter().enumerate() {
        let x0: Vec<f64> = start
            .iter()
            .zip(step)
            .enumerate()
            .map(|(i, (x, s))| {
                // alternate signs across coordinates so restarts leave the start's axis
                let sign = if (i + k) % 2 == 0 { 1.0 } else { -1.0 };
                x + sign * jit * s
            })
            .collect();
        match nelder_mead(&f, &x0, step, opts) {
            Ok(m) => {
                total += m.evaluations;
                if best.as_ref().is_none_or(|b| m.value < b.value) {
                    best = Some(m);
                }
            }
            Err(e) => {
                if let Error::NonConvergence { evaluations, .. } = &e {
                    total += evaluations;
                }
                last_err = Some(e);
            }
        }
    }

    match best {
        Some(mut m) => {
            m.evaluations = total;
            Ok(m)
        }
        None => Err(last_err.expect("at least one attempt")),
    }
}

fn simplex_diameter(simplex: &[(Vec<f64>, f64)]) -> f64 {
    let best = &simplex[0].0;
    simplex[1..]
        .iter()
        .flat_map(|v| v.0.iter().zip(best).map(|(a, b)| (a - b).abs()))
        .fold(0.0, f64::max)
}
