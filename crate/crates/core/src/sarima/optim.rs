use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub(crate) struct BfgsOptions {
    pub max_iterations: usize,
    pub gradient_tolerance: f64,
    pub fd_step: f64,
}

impl Default for BfgsOptions {
    fn default() -> Self {
        BfgsOptions {
            max_iterations: 500,
            gradient_tolerance: 1e-8,
            fd_step: 1e-6,
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Minimum {
    pub x: Vec<f64>,
    pub iterations: usize,
}

fn gradient(f: &impl Fn(&[f64]) -> f64, x: &[f64], h: f64) -> Vec<f64> {
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|i| {
            probe[i] = x[i] + h;
            let up = f(&probe);
            probe[i] = x[i] - h;
            let down = f(&probe);
            probe[i] = x[i];
            (up - down) / (2.0 * h)
        })
        .collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn identity(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect()
}

/// Quasi-Newton minimization with central-difference gradients and an
/// Armijo backtracking line search.
///
/// Converges when the largest gradient component falls below the tolerance
/// or when no step along the search direction lowers the objective any
/// further. Reaching the iteration cap is an error.
pub(crate) fn bfgs(f: impl Fn(&[f64]) -> f64, x0: Vec<f64>, opts: BfgsOptions) -> Result<Minimum> {
    let n = x0.len();
    let mut x = x0;
    let mut fx = f(&x);
    if !fx.is_finite() {
        return Err(Error::NonFinite("objective at the starting point".into()));
    }
    if n == 0 {
        return Ok(Minimum {
            x,
            iterations: 0,
        });
    }
    let mut g = gradient(&f, &x, opts.fd_step);
    let mut hinv = identity(n);

    for iter in 0..opts.max_iterations {
        if g.iter().all(|v| v.abs() < opts.gradient_tolerance) {
            return Ok(Minimum {
                x,
                iterations: iter,
            });
        }
        let mut dir: Vec<f64> = hinv.iter().map(|row| -dot(row, &g)).collect();
        let mut slope = dot(&g, &dir);
        if !(slope < 0.0) {
            hinv = identity(n);
            dir = g.iter().map(|v| -v).collect();
            slope = dot(&g, &dir);
        }
        // keep trial points within a sane distance of the current iterate
        let longest = dir.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let mut alpha = if longest > 5.0 { 5.0 / longest } else { 1.0 };

        let mut accepted = None;
        for _ in 0..50 {
            let trial: Vec<f64> = x.iter().zip(&dir).map(|(a, d)| a + alpha * d).collect();
            let ft = f(&trial);
            if ft.is_finite() && ft <= fx + 1e-4 * alpha * slope {
                accepted = Some((trial, ft));
                break;
            }
            alpha *= 0.5;
        }
        let Some((x_new, f_new)) = accepted else {
            return Ok(Minimum {
                x,
                iterations: iter,
            });
        };
        let g_new = gradient(&f, &x_new, opts.fd_step);
        let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-12 * dot(&s, &s).sqrt() * dot(&y, &y).sqrt() {
            let hy: Vec<f64> = hinv.iter().map(|row| dot(row, &y)).collect();
            let yhy = dot(&y, &hy);
            let rho = 1.0 / sy;
            for i in 0..n {
                for j in 0..n {
                    hinv[i][j] += (1.0 + rho * yhy) * rho * s[i] * s[j] - rho * (hy[i] * s[j] + s[i] * hy[j]);
                }
            }
        }
        let stalled = (fx - f_new).abs() <= 1e-15 * fx.abs().max(1.0);
        x = x_new;
        fx = f_new;
        g = g_new;
        if stalled && g.iter().all(|v| v.abs() < 1e-5) {
            return Ok(Minimum {
                x,
                iterations: iter + 1,
            });
        }
    }
    Err(Error::NoConvergence {
        iterations: opts.max_iterations,
    })
}
