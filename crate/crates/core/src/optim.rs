//! Small unconstrained minimizers for non-smooth objectives.
//!
//! Both methods are monotone: the returned point is the best one evaluated,
//! and it is never worse than the starting point.

/// Outcome of a minimization.
#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    fn met(&self, spread: f64, scale: f64) -> bool {
        spread <= self.abs + self.rel * scale.abs()
    }
}

fn finite_or_inf(v: f64) -> f64 {
    if v.is_nan() {
        f64::INFINITY
    } else {
        v
    }
}

/// Nelder-Mead simplex search with dimension-adaptive coefficients
/// (Gao and Han), which behave far better than the classic ones above a
/// handful of parameters.
///
/// The initial simplex is `x0` plus `x0 + steps[i] * e_i` for each
/// coordinate. Stops when the spread of objective values across the simplex
/// falls within `tol` or after `max_iters` iterations.
pub fn nelder_mead<F>(
    mut f: F,
    x0: &[f64],
    steps: &[f64],
    tol: &Tolerance,
    max_iters: usize,
) -> Minimum
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    assert_eq!(steps.len(), n, "one step per coordinate");
    let mut evaluations = 0;
    let mut eval = |x: &[f64]| {
        evaluations += 1;
        finite_or_inf(f(x))
    };
    if n == 0 {
        let value = eval(x0);
        return Minimum {
            x: Vec::new(),
            value,
            iterations: 0,
            evaluations: 1,
            converged: true,
        };
    }

    let nf = n as f64;
    let reflect = 1.0;
    let expand = 1.0 + 2.0 / nf;
    let contract = 0.75 - 1.0 / (2.0 * nf);
    let shrink = 1.0 - 1.0 / nf;

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for (i, &s) in steps.iter().enumerate() {
        let mut v = x0.to_vec();
        v[i] += s;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| eval(v)).collect();

    let mut iterations = 0;
    let mut converged = false;
    let mut order: Vec<usize> = (0..=n).collect();
    let mut centroid = vec![0.0; n];
    let point = |c: &[f64], w: &[f64], t: f64| -> Vec<f64> {
        c.iter().zip(w).map(|(ci, wi)| ci + t * (wi - ci)).collect()
    };

    while iterations < max_iters {
        // Stable sort keeps the incumbent best in front on ties.
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let best = order[0];
        let worst = order[n];
        let second = order[n - 1];
        if tol.met(values[worst] - values[best], values[best]) {
            converged = true;
            break;
        }
        iterations += 1;

        centroid.iter_mut().for_each(|c| *c = 0.0);
        for &i in &order[..n] {
            for (c, v) in centroid.iter_mut().zip(&simplex[i]) {
                *c += v / nf;
            }
        }

        let xr = point(&centroid, &simplex[worst], -reflect);
        let fr = eval(&xr);
        if fr < values[best] {
            let xe = point(&centroid, &simplex[worst], -reflect * expand);
            let fe = eval(&xe);
            if fe < fr {
                simplex[worst] = xe;
                values[worst] = fe;
            } else {
                simplex[worst] = xr;
                values[worst] = fr;
            }
            continue;
        }
        if fr < values[second] {
            simplex[worst] = xr;
            values[worst] = fr;
            continue;
        }
        let (xc, fc) = if fr < values[worst] {
            let xc = point(&centroid, &simplex[worst], -reflect * contract);
            let fc = eval(&xc);
            (xc, fc)
        } else {
            let xc = point(&centroid, &simplex[worst], contract);
            let fc = eval(&xc);
            (xc, fc)
        };
        if fc < values[worst].min(fr) {
            simplex[worst] = xc;
            values[worst] = fc;
            continue;
        }
        let anchor = simplex[best].clone();
        for &i in &order[1..] {
            simplex[i] = point(&anchor, &simplex[i], shrink);
            values[i] = eval(&simplex[i]);
        }
    }

    let best = (0..=n)
        .min_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)))
        .expect("non-empty simplex");
    Minimum {
        x: simplex.swap_remove(best),
        value: values[best],
        iterations,
        evaluations,
        converged,
    }
}

/// Steepest descent on central-difference gradients with Armijo
/// backtracking. A step is accepted only if it lowers the objective.
pub fn gradient_descent<F>(
    mut f: F,
    x0: &[f64],
    initial_step: f64,
    tol: &Tolerance,
    max_iters: usize,
) -> Minimum
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    let mut evaluations = 0;
    let mut eval = |x: &[f64]| {
        evaluations += 1;
        finite_or_inf(f(x))
    };
    let mut x = x0.to_vec();
    let mut fx = eval(&x);
    let mut step = initial_step;
    let mut iterations = 0;
    let mut converged = false;
    let mut grad = vec![0.0; n];
    let mut probe = x.clone();

    while iterations < max_iters {
        iterations += 1;
        for i in 0..n {
            let h = 1e-6 * x[i].abs().max(1.0);
            probe[i] = x[i] + h;
            let up = eval(&probe);
            probe[i] = x[i] - h;
            let down = eval(&probe);
            probe[i] = x[i];
            grad[i] = if up.is_finite() && down.is_finite() {
                (up - down) / (2.0 * h)
            } else {
                0.0
            };
        }
        let g2: f64 = grad.iter().map(|g| g * g).sum();
        if g2 == 0.0 {
            converged = true;
            break;
        }

        let mut accepted = None;
        let mut t = step;
        for _ in 0..60 {
            let cand: Vec<f64> = x.iter().zip(&grad).map(|(xi, gi)| xi - t * gi).collect();
            let fc = eval(&cand);
            if fc <= fx - 1e-4 * t * g2 {
                accepted = Some((cand, fc));
                break;
            }
            t *= 0.5;
        }
        match accepted {
            Some((cand, fc)) => {
                let improvement = fx - fc;
                x = cand;
                probe.copy_from_slice(&x);
                fx = fc;
                step = 2.0 * t;
                if tol.met(improvement, fx) {
                    converged = true;
                    break;
                }
            }
            None => {
                // No descent along the numeric gradient: a kink or a minimum.
                converged = true;
                break;
            }
        }
    }

    Minimum {
        x,
        value: fx,
        iterations,
        evaluations,
        converged,
    }
}
