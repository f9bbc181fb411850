//! Derivative-free simplex descent with dimension-adaptive coefficients
//! (reflection 1, expansion 1 + 2/n, contraction 0.75 − 1/(2n),
//! shrink 1 − 1/n).

#[derive(Clone, Copy, Debug)]
pub struct Options {
    /// Edge length of the initial axis-aligned simplex.
    pub initial_step: f64,
    /// Stop once every vertex is within this inf-norm distance of the best.
    pub xtol: f64,
    pub max_evals: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            initial_step: 0.6,
            xtol: 1e-9,
            max_evals: 20_000,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
    pub converged: bool,
}

fn diameter(simplex: &[Vec<f64>], best: usize) -> f64 {
    let b = &simplex[best];
    simplex
        .iter()
        .flat_map(|p| p.iter().zip(b).map(|(x, y)| (x - y).abs()))
        .fold(0.0, f64::max)
}

pub fn minimize<F: FnMut(&[f64]) -> f64>(mut f: F, x0: &[f64], opts: &Options) -> Minimum {
    let n = x0.len();
    if n == 0 {
        return Minimum {
            x: Vec::new(),
            value: f(x0),
            evals: 1,
            converged: true,
        };
    }
    let nf = n as f64;
    let (rho, chi, psi, sigma) = (1.0, 1.0 + 2.0 / nf, 0.75 - 0.5 / nf, 1.0 - 1.0 / nf);

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut p = x0.to_vec();
        p[i] += opts.initial_step;
        simplex.push(p);
    }
    let mut values: Vec<f64> = simplex.iter().map(|p| f(p)).collect();
    let mut evals = n + 1;
    let mut order: Vec<usize> = (0..=n).collect();
    let mut centroid = vec![0.0; n];
    let mut trial = vec![0.0; n];
    let mut trial2 = vec![0.0; n];
    let mut converged = false;

    loop {
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let (best, worst, second_worst) = (order[0], order[n], order[n - 1]);
        if diameter(&simplex, best) < opts.xtol {
            converged = true;
            break;
        }
        if evals >= opts.max_evals {
            break;
        }

        centroid.iter_mut().for_each(|c| *c = 0.0);
        for &i in &order[..n] {
            for (c, x) in centroid.iter_mut().zip(&simplex[i]) {
                *c += x / nf;
            }
        }
        let along = |t: f64, out: &mut Vec<f64>, worst_pt: &[f64]| {
            for ((o, c), w) in out.iter_mut().zip(&centroid).zip(worst_pt) {
                *o = c + t * (c - w);
            }
        };

        along(rho, &mut trial, &simplex[worst]);
        let f_r = f(&trial);
        evals += 1;

        if f_r < values[best] {
            along(rho * chi, &mut trial2, &simplex[worst]);
            let f_e = f(&trial2);
            evals += 1;
            if f_e < f_r {
                simplex[worst].copy_from_slice(&trial2);
                values[worst] = f_e;
            } else {
                simplex[worst].copy_from_slice(&trial);
                values[worst] = f_r;
            }
            continue;
        }
        if f_r < values[second_worst] {
            simplex[worst].copy_from_slice(&trial);
            values[worst] = f_r;
            continue;
        }

        // contraction, outside or inside
        let (t, reference) = if f_r < values[worst] {
            (rho * psi, f_r)
        } else {
            (-psi, values[worst])
        };
        along(t, &mut trial2, &simplex[worst]);
        let f_c = f(&trial2);
        evals += 1;
        if f_c <= reference {
            simplex[worst].copy_from_slice(&trial2);
            values[worst] = f_c;
            continue;
        }

        let anchor = simplex[best].clone();
        for &i in &order[1..] {
            for (x, a) in simplex[i].iter_mut().zip(&anchor) {
                *x = a + sigma * (*x - a);
            }
            values[i] = f(&simplex[i]);
            evals += 1;
        }
    }

    let best = order[0];
    Minimum {
        x: simplex[best].clone(),
        value: values[best],
        evals,
        converged,
    }
}
