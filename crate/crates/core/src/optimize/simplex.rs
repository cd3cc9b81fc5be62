//! Box-constrained Nelder–Mead minimizer.

/// Stopping rules for [`NelderMead`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexOptions {
    /// stop once every vertex lies within this ∞-norm distance of the best
    pub diameter_tol: f64,
    pub max_iterations: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            diameter_tol: 1e-9,
            max_iterations: 2000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexResult {
    pub x: Vec<f64>,
    pub f: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub diameter: f64,
    pub converged: bool,
}

/// Derivative-free simplex search on `[lower, upper]^n`; trial points are
/// clamped into the box.
#[derive(Debug, Clone)]
pub struct NelderMead {
    pub lower: f64,
    pub upper: f64,
    pub options: SimplexOptions,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

impl NelderMead {
    pub fn new(lower: f64, upper: f64, options: SimplexOptions) -> Self {
        Self {
            lower,
            upper,
            options,
        }
    }

    fn clamp(&self, x: &mut [f64]) {
        x.iter_mut()
            .for_each(|v| *v = v.clamp(self.lower, self.upper));
    }

    /// Minimizes `f` starting from the `n + 1` given vertices.
    pub fn minimize<F>(&self, f: F, initial: Vec<Vec<f64>>) -> SimplexResult
    where
        F: Fn(&[f64]) -> f64,
    {
        let n = initial.len() - 1;
        assert!(
            initial.iter().all(|v| v.len() == n),
            "need n + 1 vertices of length n"
        );
        let mut evaluations = 0;
        let mut eval = |x: &[f64]| {
            evaluations += 1;
            f(x)
        };

        let mut simplex: Vec<(Vec<f64>, f64)> = initial
            .into_iter()
            .map(|mut v| {
                self.clamp(&mut v);
                let fv = eval(&v);
                (v, fv)
            })
            .collect();

        let mut iterations = 0;
        let mut diameter;
        loop {
            // stable sort keeps earlier vertices first among ties
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            diameter = simplex[1..]
                .iter()
                .flat_map(|(v, _)| v.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()))
                .fold(0.0, f64::max);
            if diameter <= self.options.diameter_tol || iterations >= self.options.max_iterations {
                break;
            }
            iterations += 1;

            let mut centroid = vec![0.0; n];
            for (v, _) in &simplex[..n] {
                for (c, x) in centroid.iter_mut().zip(v) {
                    *c += x / n as f64;
                }
            }
            let worst = simplex[n].clone();
            let along = |t: f64| -> Vec<f64> {
                centroid
                    .iter()
                    .zip(&worst.0)
                    .map(|(c, w)| c + t * (c - w))
                    .collect()
            };

            let mut xr = along(REFLECT);
            self.clamp(&mut xr);
            let fr = eval(&xr);
            if fr < simplex[0].1 {
                let mut xe = along(REFLECT * EXPAND);
                self.clamp(&mut xe);
                let fe = eval(&xe);
                simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
                continue;
            }
            if fr < simplex[n - 1].1 {
                simplex[n] = (xr, fr);
                continue;
            }
            let (mut xc, outside) = if fr < worst.1 {
                (along(REFLECT * CONTRACT), true)
            } else {
                (along(-CONTRACT), false)
            };
            self.clamp(&mut xc);
            let fc = eval(&xc);
            let accept = if outside { fc <= fr } else { fc < worst.1 };
            if accept {
                simplex[n] = (xc, fc);
                continue;
            }
            let best = simplex[0].0.clone();
            for (v, fv) in simplex.iter_mut().skip(1) {
                for (x, b) in v.iter_mut().zip(&best) {
                    *x = b + SHRINK * (*x - b);
                }
                *fv = eval(v);
            }
        }

        let (x, f) = simplex.swap_remove(0);
        SimplexResult {
            x,
            f,
            iterations,
            evaluations,
            converged: diameter <= self.options.diameter_tol,
            diameter,
        }
    }
}
