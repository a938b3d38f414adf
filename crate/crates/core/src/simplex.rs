//! Nelder–Mead minimization on the unit box.
//!
//! Coordinates are expected to be normalized so that the feasible region is
//! `[0, 1]^n`. Points outside are clamped before evaluation and charged a
//! quadratic penalty on the distance moved, so the simplex is pushed back
//! inside without the objective ever seeing an infeasible point.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Options {
    pub max_evaluations: usize,
    /// Convergence threshold on the largest vertex distance from the best.
    pub diameter_tol: f64,
    pub penalty_weight: f64,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            max_evaluations: 2000,
            diameter_tol: 1e-6,
            penalty_weight: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    /// Best clamped point found.
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub converged: bool,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

fn clamp_unit(x: &[f64]) -> (Vec<f64>, f64) {
    let mut moved = 0.0;
    let c = x
        .iter()
        .map(|&v| {
            let c = v.clamp(0.0, 1.0);
            moved += (v - c) * (v - c);
            c
        })
        .collect();
    (c, moved)
}

struct Counted<F> {
    f: F,
    evaluations: usize,
    penalty_weight: f64,
}

impl<F: FnMut(&[f64]) -> f64> Counted<F> {
    fn eval(&mut self, x: &[f64]) -> f64 {
        self.evaluations += 1;
        let (c, moved) = clamp_unit(x);
        let v = (self.f)(&c);
        let v = if v.is_nan() { f64::INFINITY } else { v };
        v + self.penalty_weight * moved
    }
}

fn diameter(simplex: &[Vec<f64>]) -> f64 {
    let best = &simplex[0];
    simplex[1..]
        .iter()
        .map(|v| {
            v.iter()
                .zip(best)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max)
}

fn lerp(from: &[f64], to: &[f64], t: f64) -> Vec<f64> {
    from.iter().zip(to).map(|(a, b)| a + t * (b - a)).collect()
}

pub fn minimize<F>(f: F, start: &[f64], opts: &Options) -> Outcome
where
    F: FnMut(&[f64]) -> f64,
{
    let n = start.len();
    let mut obj = Counted {
        f,
        evaluations: 0,
        penalty_weight: opts.penalty_weight,
    };
    let (x0, _) = clamp_unit(start);

    let mut simplex = vec![x0.clone()];
    for i in 0..n {
        let mut v = x0.clone();
        v[i] = if v[i] != 0.0 { v[i] * 1.05 } else { 0.00025 };
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| obj.eval(v)).collect();
    let mut converged = false;

    loop {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        if diameter(&simplex) < opts.diameter_tol {
            converged = true;
            break;
        }
        // A shrink costs n evaluations on top of reflection and contraction.
        if obj.evaluations + n + 2 > opts.max_evaluations {
            break;
        }

        let mut centroid = vec![0.0; n];
        for v in &simplex[..n] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / n as f64;
            }
        }
        let worst = simplex[n].clone();
        let reflected = lerp(&centroid, &worst, -REFLECT);
        let fr = obj.eval(&reflected);

        if fr < values[0] {
            let expanded = lerp(&centroid, &worst, -REFLECT * EXPAND);
            let fe = obj.eval(&expanded);
            if fe < fr {
                simplex[n] = expanded;
                values[n] = fe;
            } else {
                simplex[n] = reflected;
                values[n] = fr;
            }
            continue;
        }
        if fr < values[n - 1] {
            simplex[n] = reflected;
            values[n] = fr;
            continue;
        }
        let (candidate, fc) = if fr < values[n] {
            let c = lerp(&centroid, &reflected, CONTRACT);
            let fc = obj.eval(&c);
            (c, fc)
        } else {
            let c = lerp(&centroid, &worst, CONTRACT);
            let fc = obj.eval(&c);
            (c, fc)
        };
        if fc < values[n].min(fr) {
            simplex[n] = candidate;
            values[n] = fc;
            continue;
        }
        let best = simplex[0].clone();
        for i in 1..=n {
            simplex[i] = lerp(&best, &simplex[i], SHRINK);
            values[i] = obj.eval(&simplex[i]);
        }
    }

    let (x, _) = clamp_unit(&simplex[0]);
    Outcome {
        x,
        value: values[0],
        evaluations: obj.evaluations,
        converged,
    }
}
