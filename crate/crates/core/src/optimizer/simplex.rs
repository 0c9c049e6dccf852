//! Nelder–Mead downhill simplex.

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimplexOptions {
    pub max_iterations: usize,
    /// Stop when max f − min f over the simplex falls below this.
    pub function_tolerance: f64,
    /// Edge length of the initial right-angled simplex.
    pub initial_step: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimplexOutcome {
    pub x: Vec<f64>,
    pub f: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

/// Minimizes `f` from `x0`.
pub fn nelder_mead<F>(mut f: F, x0: &[f64], opts: &SimplexOptions) -> SimplexOutcome
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    let mut evaluations = 0usize;
    let mut eval = |x: &[f64]| {
        evaluations += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut points: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    points.push(x0.to_vec());
    for i in 0..n {
        let mut p = x0.to_vec();
        p[i] += opts.initial_step;
        points.push(p);
    }
    let mut values: Vec<f64> = points.iter().map(|p| eval(p)).collect();
    let mut order: Vec<usize> = (0..=n).collect();

    let mut centroid = vec![0.0; n];
    let mut trial = vec![0.0; n];
    let mut trial2 = vec![0.0; n];
    let mut iterations = 0;
    let mut converged = false;

    while iterations < opts.max_iterations {
        // Stable sort keeps ties in index order, so runs are deterministic.
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let best = order[0];
        let worst = order[n];
        let second_worst = order[n - 1];
        if values[worst] - values[best] <= opts.function_tolerance {
            converged = true;
            break;
        }
        iterations += 1;

        centroid.iter_mut().for_each(|c| *c = 0.0);
        for &idx in &order[..n] {
            for (c, x) in centroid.iter_mut().zip(&points[idx]) {
                *c += x;
            }
        }
        centroid.iter_mut().for_each(|c| *c /= n as f64);

        let along = |out: &mut [f64], coeff: f64, from: &[f64], centroid: &[f64]| {
            for ((o, c), w) in out.iter_mut().zip(centroid).zip(from) {
                *o = c + coeff * (c - w);
            }
        };

        along(&mut trial, REFLECT, &points[worst], &centroid);
        let f_reflect = eval(&trial);

        if f_reflect < values[best] {
            along(&mut trial2, EXPAND, &points[worst], &centroid);
            let f_expand = eval(&trial2);
            if f_expand < f_reflect {
                points[worst].copy_from_slice(&trial2);
                values[worst] = f_expand;
            } else {
                points[worst].copy_from_slice(&trial);
                values[worst] = f_reflect;
            }
            continue;
        }
        if f_reflect < values[second_worst] {
            points[worst].copy_from_slice(&trial);
            values[worst] = f_reflect;
            continue;
        }

        // Contraction, outside or inside depending on the reflected value.
        let (coeff, reference) = if f_reflect < values[worst] {
            (CONTRACT * REFLECT, f_reflect)
        } else {
            (-CONTRACT, values[worst])
        };
        along(&mut trial2, coeff, &points[worst], &centroid);
        let f_contract = eval(&trial2);
        if f_contract < reference {
            points[worst].copy_from_slice(&trial2);
            values[worst] = f_contract;
            continue;
        }

        let anchor = points[best].clone();
        for &idx in &order[1..] {
            for (x, a) in points[idx].iter_mut().zip(&anchor) {
                *x = a + SHRINK * (*x - a);
            }
            values[idx] = eval(&points[idx]);
        }
    }

    let best = (0..=n).min_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b))).unwrap_or(0);
    SimplexOutcome {
        x: points[best].clone(),
        f: values[best],
        iterations,
        evaluations,
        converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> SimplexOptions {
        SimplexOptions { max_iterations: 20_000, function_tolerance: 1e-14, initial_step: 0.5 }
    }

    #[test]
    fn minimizes_rosenbrock() {
        let rosen = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let out = nelder_mead(rosen, &[-1.2, 1.0], &opts());
        assert!(out.converged);
        assert!((out.x[0] - 1.0).abs() < 1e-4 && (out.x[1] - 1.0).abs() < 1e-4, "{out:?}");
    }

    #[test]
    fn minimizes_shifted_quadratic_in_8d() {
        let q = |x: &[f64]| x.iter().enumerate().map(|(i, v)| (v - i as f64).powi(2) * (1.0 + i as f64)).sum::<f64>();
        let out = nelder_mead(q, &[0.0; 8], &opts());
        assert!(out.f < 1e-10, "{out:?}");
    }

    #[test]
    fn reports_non_convergence() {
        let q = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>();
        let out = nelder_mead(q, &[5.0; 4], &SimplexOptions { max_iterations: 3, ..opts() });
        assert!(!out.converged);
        assert_eq!(out.iterations, 3);
    }

    #[test]
    fn nan_is_treated_as_infinite() {
        let f = |x: &[f64]| if x[0] < 0.0 { f64::NAN } else { (x[0] - 1.0).powi(2) };
        let out = nelder_mead(f, &[0.5], &opts());
        assert!((out.x[0] - 1.0).abs() < 1e-5);
    }
}
