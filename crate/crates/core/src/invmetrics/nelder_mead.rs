//! Derivative-free Nelder–Mead simplex search with stagnation restarts.

#[derive(Debug, Clone, Copy)]
pub struct NelderMeadOptions {
    pub max_evals: usize,
    /// Relative improvement below which a converged simplex counts as
    /// stagnant and the search restarts (or stops).
    pub stagnation: f64,
    pub reflection: f64,
    pub expansion: f64,
    pub contraction: f64,
    pub shrink: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        NelderMeadOptions {
            max_evals: 500,
            stagnation: 1e-8,
            reflection: 1.0,
            expansion: 2.0,
            contraction: 0.5,
            shrink: 0.5,
        }
    }
}

#[derive(Debug, Clone)]
pub struct NelderMeadResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
    pub restarts: usize,
}

fn relative_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / (a.abs().max(b.abs()).max(1e-300))
}

/// Minimizes `f` from `x0` with per-coordinate initial steps `step`.
///
/// Non-finite objective values are treated as `+∞`. When the simplex
/// collapses (relative spread below `stagnation`) the search restarts
/// around the best vertex with the original steps; it stops when a restart
/// brings less than `stagnation` relative improvement or the evaluation
/// budget runs out.
pub fn minimize<F>(mut f: F, x0: &[f64], step: &[f64], opts: &NelderMeadOptions) -> NelderMeadResult
where
    F: FnMut(&[f64]) -> f64,
{
    let dim = x0.len();
    let mut evals = 0;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut best_x = x0.to_vec();
    let mut best_v = eval(x0, &mut evals);
    let mut restarts = 0;

    'outer: loop {
        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
        simplex.push((best_x.clone(), best_v));
        for i in 0..dim {
            if evals >= opts.max_evals {
                break 'outer;
            }
            let mut x = best_x.clone();
            x[i] += step[i];
            let v = eval(&x, &mut evals);
            simplex.push((x, v));
        }
        let start_v = best_v;

        loop {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            if simplex[0].1 < best_v {
                best_v = simplex[0].1;
                best_x = simplex[0].0.clone();
            }
            let spread = relative_gap(simplex[dim].1, simplex[0].1);
            if evals >= opts.max_evals {
                break 'outer;
            }
            if spread <= opts.stagnation && simplex[dim].1.is_finite() {
                break;
            }

            let centroid: Vec<f64> = (0..dim)
                .map(|i| simplex[..dim].iter().map(|(x, _)| x[i]).sum::<f64>() / dim as f64)
                .collect();
            let along = |t: f64, worst: &[f64]| -> Vec<f64> {
                centroid.iter().zip(worst).map(|(c, w)| c + t * (c - w)).collect()
            };
            let worst = simplex[dim].0.clone();

            let xr = along(opts.reflection, &worst);
            let vr = eval(&xr, &mut evals);
            if vr < simplex[0].1 {
                let xe = along(opts.expansion, &worst);
                let ve = eval(&xe, &mut evals);
                simplex[dim] = if ve < vr { (xe, ve) } else { (xr, vr) };
            } else if vr < simplex[dim - 1].1 {
                simplex[dim] = (xr, vr);
            } else {
                let (xc, vc) = if vr < simplex[dim].1 {
                    let xc = along(opts.reflection * opts.contraction, &worst);
                    let vc = eval(&xc, &mut evals);
                    (xc, vc)
                } else {
                    let xc = along(-opts.contraction, &worst);
                    let vc = eval(&xc, &mut evals);
                    (xc, vc)
                };
                if vc < simplex[dim].1.min(vr) {
                    simplex[dim] = (xc, vc);
                } else {
                    let anchor = simplex[0].0.clone();
                    for vertex in simplex.iter_mut().skip(1) {
                        let x: Vec<f64> = anchor
                            .iter()
                            .zip(&vertex.0)
                            .map(|(a, v)| a + opts.shrink * (v - a))
                            .collect();
                        let v = eval(&x, &mut evals);
                        *vertex = (x, v);
                    }
                }
            }
        }

        if relative_gap(start_v, best_v) < opts.stagnation && restarts > 0 {
            break;
        }
        restarts += 1;
    }

    NelderMeadResult {
        x: best_x,
        value: best_v,
        evals,
        restarts,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rosenbrock() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let opts = NelderMeadOptions {
            max_evals: 5000,
            ..Default::default()
        };
        let r = minimize(f, &[-1.2, 1.0], &[0.5, 0.5], &opts);
        assert!((r.x[0] - 1.0).abs() < 1e-3 && (r.x[1] - 1.0).abs() < 1e-3, "{r:?}");
        assert!(r.evals <= 5000 + 3);
    }

    #[test]
    fn infinite_region_is_avoided() {
        // objective undefined left of x = 1, minimum at x = 1
        let f = |x: &[f64]| if x[0] < 1.0 { f64::NAN } else { x[0] };
        let r = minimize(f, &[3.0], &[0.5], &NelderMeadOptions::default());
        assert!(r.value >= 1.0 && r.value < 1.0 + 1e-6, "{r:?}");
    }

    #[test]
    fn budget_is_respected() {
        let f = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>();
        let opts = NelderMeadOptions {
            max_evals: 50,
            ..Default::default()
        };
        let r = minimize(f, &[1.0; 5], &[0.1; 5], &opts);
        assert!(r.evals <= 50 + 6);
    }
}
