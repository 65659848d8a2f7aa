//! Single-flip Metropolis simulated annealing for QUBO models.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::graph::QuboModel;
use crate::error::{Error, Result};

pub const DEFAULT_SWEEPS: usize = 200;
pub const DEFAULT_RESTARTS: usize = 5;
pub const DEFAULT_T_FINAL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnealSchedule {
    /// Sweeps per restart; one sweep attempts a flip of every variable.
    pub sweeps: usize,
    pub restarts: usize,
    pub t_initial: f64,
    pub t_final: f64,
    pub seed: u64,
}

impl AnnealSchedule {
    /// Default schedule scaled to the model: `t_initial = 4 max|w|`.
    pub fn for_model(q: &QuboModel, seed: u64) -> Self {
        // Quadratic terms are 2w for a max-cut model.
        let max_w = q.max_abs_quadratic() / 2.0;
        let t_initial = if max_w > 0.0 {
            (4.0 * max_w).max(2.0 * DEFAULT_T_FINAL)
        } else {
            1.0
        };
        Self {
            sweeps: DEFAULT_SWEEPS,
            restarts: DEFAULT_RESTARTS,
            t_initial,
            t_final: DEFAULT_T_FINAL,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.sweeps == 0 || self.restarts == 0 {
            return Err(Error::InvalidConfig(
                "sweeps and restarts must be >= 1".into(),
            ));
        }
        if !(self.t_final > 0.0 && self.t_initial > self.t_final && self.t_initial.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "need t_initial > t_final > 0, got {} and {}",
                self.t_initial, self.t_final
            )));
        }
        Ok(())
    }

    /// Temperature of sweep `s` under geometric cooling.
    pub fn temperature(&self, s: usize) -> f64 {
        if self.sweeps == 1 {
            return self.t_final;
        }
        let frac = s as f64 / (self.sweeps - 1) as f64;
        self.t_initial * (self.t_final / self.t_initial).powf(frac)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleResult {
    pub assignment: Vec<bool>,
    /// Exact energy of `assignment`.
    pub energy: f64,
    pub restarts_run: usize,
}

struct Adjacency {
    offsets: Vec<usize>,
    targets: Vec<(usize, f64)>,
}

impl Adjacency {
    fn new(q: &QuboModel) -> Self {
        let n = q.n_vars();
        let mut degree = vec![0usize; n + 1];
        for &(i, j) in q.quadratic().keys() {
            degree[i + 1] += 1;
            degree[j + 1] += 1;
        }
        for k in 0..n {
            degree[k + 1] += degree[k];
        }
        let mut fill = degree.clone();
        let mut targets = vec![(0, 0.0); degree[n]];
        for (&(i, j), &v) in q.quadratic() {
            targets[fill[i]] = (j, v);
            fill[i] += 1;
            targets[fill[j]] = (i, v);
            fill[j] += 1;
        }
        Self {
            offsets: degree,
            targets,
        }
    }

    fn neighbors(&self, i: usize) -> &[(usize, f64)] {
        &self.targets[self.offsets[i]..self.offsets[i + 1]]
    }
}

/// Best state found by one restart, with its incrementally tracked energy.
fn run_restart(q: &QuboModel, adj: &Adjacency, s: &AnnealSchedule, restart: usize) -> Vec<bool> {
    let n = q.n_vars();
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    rng.set_stream(restart as u64);

    let mut x: Vec<bool> = (0..n).map(|_| rng.random_bool(0.5)).collect();
    // field[i] = linear_i + Σ_j q_ij x_j; flipping i changes E by ±field[i].
    let mut field = q.linear().to_vec();
    for (&(i, j), &v) in q.quadratic() {
        if x[j] {
            field[i] += v;
        }
        if x[i] {
            field[j] += v;
        }
    }
    let mut energy = q.energy(&x);
    let mut best = x.clone();
    let mut best_energy = energy;

    for sweep in 0..s.sweeps {
        let temp = s.temperature(sweep);
        for i in 0..n {
            let delta = if x[i] { -field[i] } else { field[i] };
            let accept = delta <= 0.0 || rng.random::<f64>() < (-delta / temp).exp();
            if !accept {
                continue;
            }
            let sign = if x[i] { -1.0 } else { 1.0 };
            x[i] = !x[i];
            energy += delta;
            for &(j, v) in adj.neighbors(i) {
                field[j] += sign * v;
            }
            if energy < best_energy {
                best_energy = energy;
                best.copy_from_slice(&x);
            }
        }
    }
    best
}

/// Anneals `q`, returning the lowest-energy state over all restarts.
///
/// The all-zeros state (energy 0) is always a candidate. Restarts use
/// independent ChaCha streams of `s.seed`, and energy ties keep the earlier
/// candidate, so the result is deterministic.
pub fn anneal(q: &QuboModel, s: &AnnealSchedule) -> Result<SampleResult> {
    s.validate()?;
    let n = q.n_vars();
    let mut best = SampleResult {
        assignment: vec![false; n],
        energy: q.energy(&vec![false; n]),
        restarts_run: s.restarts,
    };
    if n == 0 {
        return Ok(best);
    }
    let adj = Adjacency::new(q);
    for r in 0..s.restarts {
        let x = run_restart(q, &adj, s, r);
        let e = q.energy(&x);
        if e < best.energy {
            best.assignment = x;
            best.energy = e;
        }
    }
    Ok(best)
}
