//! Derivative-free direct search on the unit cube.
//!
//! A Nelder-Mead simplex with every candidate projected back into [0, 1]^d,
//! plus a seeded low-discrepancy generator for restart points. The objective
//! may return `f64::INFINITY` for infeasible candidates; such points are
//! simply never accepted.

/// Options for one Nelder-Mead run.
#[derive(Debug, Clone, Copy)]
pub struct NelderMeadOptions {
    pub max_iterations: usize,
    /// Stop when the objective spread across the simplex drops below this.
    pub objective_tolerance: f64,
    /// Initial simplex edge length in normalized coordinates.
    pub initial_step: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            max_iterations: 5000,
            objective_tolerance: 1e-10,
            initial_step: 0.15,
        }
    }
}

/// Outcome of one Nelder-Mead run.
#[derive(Debug, Clone)]
pub struct NelderMeadResult {
    pub x: Vec<f64>,
    pub objective: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
}

fn clamp_unit(x: &mut [f64]) {
    for v in x.iter_mut() {
        *v = v.clamp(0.0, 1.0);
    }
}

/// Minimizes `f` over the unit cube starting from `x0` (clamped into the
/// cube). Deterministic: no internal randomness.
pub fn minimize_unit_box<F>(f: &F, x0: &[f64], opts: &NelderMeadOptions) -> NelderMeadResult
where
    F: Fn(&[f64]) -> f64,
{
    let dim = x0.len();
    let mut evaluations = 0;
    let mut eval = |x: &[f64]| {
        evaluations += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut start = x0.to_vec();
    clamp_unit(&mut start);
    if dim == 0 {
        let objective = eval(&start);
        return NelderMeadResult {
            x: start,
            objective,
            iterations: 0,
            evaluations,
            converged: true,
        };
    }

    // Initial simplex: x0 plus one step along each axis, reflected back
    // inside the cube when the step would leave it.
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    let f0 = eval(&start);
    simplex.push((start.clone(), f0));
    for i in 0..dim {
        let mut p = start.clone();
        let step = if p[i] + opts.initial_step <= 1.0 {
            opts.initial_step
        } else {
            -opts.initial_step
        };
        p[i] = (p[i] + step).clamp(0.0, 1.0);
        let fp = eval(&p);
        simplex.push((p, fp));
    }

    const ALPHA: f64 = 1.0; // reflection
    const GAMMA: f64 = 2.0; // expansion
    const RHO: f64 = 0.5; // contraction
    const SIGMA: f64 = 0.5; // shrink

    let mut iterations = 0;
    let mut converged = false;
    while iterations < opts.max_iterations {
        iterations += 1;
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let spread = simplex[dim].1 - simplex[0].1;
        if spread <= opts.objective_tolerance {
            converged = true;
            break;
        }

        // Centroid of all but the worst vertex.
        let mut centroid = vec![0.0; dim];
        for (p, _) in &simplex[..dim] {
            for (c, v) in centroid.iter_mut().zip(p) {
                *c += v;
            }
        }
        for c in centroid.iter_mut() {
            *c /= dim as f64;
        }

        let worst = simplex[dim].clone();
        let mut reflected: Vec<f64> = centroid
            .iter()
            .zip(&worst.0)
            .map(|(c, w)| c + ALPHA * (c - w))
            .collect();
        clamp_unit(&mut reflected);
        let f_reflected = eval(&reflected);

        if f_reflected < simplex[0].1 {
            // Try expanding further along the same direction.
            let mut expanded: Vec<f64> = centroid
                .iter()
                .zip(&worst.0)
                .map(|(c, w)| c + GAMMA * (c - w))
                .collect();
            clamp_unit(&mut expanded);
            let f_expanded = eval(&expanded);
            simplex[dim] = if f_expanded < f_reflected {
                (expanded, f_expanded)
            } else {
                (reflected, f_reflected)
            };
            continue;
        }
        if f_reflected < simplex[dim - 1].1 {
            simplex[dim] = (reflected, f_reflected);
            continue;
        }

        // Contract toward the centroid, inside or outside.
        let (base, f_base) = if f_reflected < worst.1 {
            (&reflected, f_reflected)
        } else {
            (&worst.0, worst.1)
        };
        let mut contracted: Vec<f64> = centroid
            .iter()
            .zip(base)
            .map(|(c, b)| c + RHO * (b - c))
            .collect();
        clamp_unit(&mut contracted);
        let f_contracted = eval(&contracted);
        if f_contracted < f_base {
            simplex[dim] = (contracted, f_contracted);
            continue;
        }

        // Shrink toward the best vertex.
        let best = simplex[0].0.clone();
        for entry in simplex.iter_mut().skip(1) {
            for (v, b) in entry.0.iter_mut().zip(&best) {
                *v = b + SIGMA * (*v - b);
            }
            clamp_unit(&mut entry.0);
            entry.1 = eval(&entry.0);
        }
    }

    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, objective) = simplex.swap_remove(0);
    NelderMeadResult { x, objective, iterations, evaluations, converged }
}

// ---------------------------------------------------------------------------
// Low-discrepancy restart points
// ---------------------------------------------------------------------------

/// SplitMix64 step, used to derive deterministic per-dimension offsets from
/// a seed.
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn unit_from_bits(bits: u64) -> f64 {
    (bits >> 11) as f64 / (1u64 << 53) as f64
}

/// Additive-recurrence low-discrepancy sequence over the unit cube
/// (generalized golden ratio), shifted by a seed-derived offset.
#[derive(Debug, Clone)]
pub struct RestartPoints {
    offsets: Vec<f64>,
    increments: Vec<f64>,
}

impl RestartPoints {
    pub fn new(dim: usize, seed: u64) -> Self {
        // Unique positive root of x^(d+1) = x + 1, by fixed-point iteration.
        let mut phi = 2.0f64;
        for _ in 0..64 {
            phi = (1.0 + phi).powf(1.0 / (dim as f64 + 1.0));
        }
        let mut state = seed ^ 0x5851_f42d_4c95_7f2d;
        let offsets = (0..dim).map(|_| unit_from_bits(splitmix64(&mut state))).collect();
        let increments = (1..=dim).map(|j| (1.0 / phi.powi(j as i32)).fract()).collect();
        Self { offsets, increments }
    }

    /// The `index`-th point of the shifted sequence.
    pub fn point(&self, index: usize) -> Vec<f64> {
        self.offsets
            .iter()
            .zip(&self.increments)
            .map(|(o, inc)| (o + inc * index as f64).fract())
            .collect()
    }
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
