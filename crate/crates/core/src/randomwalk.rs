// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! The weighted random walk `P(x, y) = C(x, y) / C(x)` and Monte Carlo
//! checks of its links to the electrical quantities:
//!
//! * escape probability `P_a(τ_b < τ_a⁺) = C_eff(a, b) / C(a)`,
//! * Green's function `G_b(a, a) = C(a) · R_eff(a, b)`, the expected number
//!   of visits to `a` before hitting `b`, counting time zero,
//! * hitting probabilities as harmonic extensions.
//!
//! Trial `k` draws from its own ChaCha8 stream `(seed, k)`, so estimates do
//! not depend on how trials are scheduled across threads.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::electrical::effective_resistance;
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::variational::{harmonic_extension, BoundaryProblem};

#[derive(Clone, Debug)]
pub struct TransitionStructure {
    neighbors: Vec<Vec<Vertex>>,
    cumulative: Vec<Vec<f64>>,
    local: Vec<f64>,
}

impl TransitionStructure {
    pub fn new(g: &Graph) -> Self {
        let mut neighbors = Vec::with_capacity(g.n());
        let mut cumulative = Vec::with_capacity(g.n());
        let mut local = Vec::with_capacity(g.n());
        for x in g.vertices() {
            let mut acc = 0.0;
            let mut cum = Vec::with_capacity(g.neighbor_count(x));
            let mut nbrs = Vec::with_capacity(g.neighbor_count(x));
            for &(y, e) in g.neighbors(x) {
                acc += g.weight(e);
                cum.push(acc);
                nbrs.push(y);
            }
            neighbors.push(nbrs);
            cumulative.push(cum);
            local.push(acc);
        }
        TransitionStructure { neighbors, cumulative, local }
    }

    pub fn n(&self) -> usize {
        self.local.len()
    }

    /// Local conductance `C(x)`.
    pub fn local_conductance(&self, x: Vertex) -> f64 {
        self.local[x]
    }

    pub fn probability(&self, x: Vertex, y: Vertex) -> f64 {
        match self.neighbors[x].binary_search(&y) {
            Ok(i) => {
                let prev = if i == 0 { 0.0 } else { self.cumulative[x][i - 1] };
                (self.cumulative[x][i] - prev) / self.local[x]
            }
            Err(_) => 0.0,
        }
    }

    /// Dense row-stochastic matrix.
    pub fn matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n(), self.n(), |x, y| self.probability(x, y))
    }

    /// `D^{1/2} P D^{-1/2}`, symmetric for a reversible walk.
    pub fn symmetrized(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n(), self.n(), |x, y| {
            (self.local[x] / self.local[y]).sqrt() * self.probability(x, y)
        })
    }

    /// Next vertex from `x` given a uniform draw `u` in `[0, 1)`, by inverse
    /// CDF over the cumulative conductances.
    pub fn step(&self, x: Vertex, u: f64) -> Vertex {
        let cum = &self.cumulative[x];
        let target = u * self.local[x];
        let i = cum.partition_point(|&c| c <= target).min(cum.len() - 1);
        self.neighbors[x][i]
    }
}

pub fn transition(g: &Graph) -> TransitionStructure {
    TransitionStructure::new(g)
}

/// `π(x) = C(x) / Σ_z C(z)`.
pub fn stationary(g: &Graph) -> Vec<f64> {
    let degrees: Vec<f64> = g.vertices().map(|x| g.degree(x)).collect();
    let z: f64 = degrees.iter().sum();
    degrees.into_iter().map(|d| d / z).collect()
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct WalkConfig {
    pub seed: u64,
    pub trials: u64,
    /// Per-trial step cap; `None` means `100 · N²`.
    pub max_steps: Option<u64>,
}

impl WalkConfig {
    pub fn new(seed: u64, trials: u64) -> Self {
        WalkConfig { seed, trials, max_steps: None }
    }

    fn step_cap(&self, n: usize) -> u64 {
        self.max_steps.unwrap_or(100 * (n as u64) * (n as u64))
    }

    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::WalkConfig("trials must be at least 1".into()));
        }
        if self.max_steps == Some(0) {
            return Err(Error::WalkConfig("max_steps must be at least 1".into()));
        }
        Ok(())
    }
}

/// Sample mean with its standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    /// Trials that finished within the step cap.
    pub completed: u64,
    pub aborted: u64,
}

impl Estimate {
    /// `(mean - exact) / stderr`; zero when both the error and the spread
    /// vanish.
    pub fn z_score(&self, exact: f64) -> f64 {
        let diff = self.mean - exact;
        if self.stderr > 0.0 {
            diff / self.stderr
        } else if diff.abs() <= 1e-12 * exact.abs().max(1.0) {
            0.0
        } else {
            diff.signum() * f64::INFINITY
        }
    }
}

#[derive(Clone, Copy, Default)]
struct Tally {
    count: u64,
    sum: u64,
    sum_sq: u128,
    aborted: u64,
}

impl Tally {
    fn merge(self, o: Tally) -> Tally {
        Tally {
            count: self.count + o.count,
            sum: self.sum + o.sum,
            sum_sq: self.sum_sq + o.sum_sq,
            aborted: self.aborted + o.aborted,
        }
    }
}

/// Runs `trial` for every trial index and aggregates the integer outcomes.
/// `trial` returns `None` when it hit the step cap.
fn run_trials<F>(cfg: &WalkConfig, trial: F) -> Result<Estimate>
where
    F: Fn(&mut ChaCha8Rng) -> Option<u64> + Sync,
{
    cfg.validate()?;
    let tally = (0..cfg.trials)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(k);
            match trial(&mut rng) {
                Some(x) => Tally { count: 1, sum: x, sum_sq: u128::from(x) * u128::from(x), aborted: 0 },
                None => Tally { aborted: 1, ..Tally::default() },
            }
        })
        .reduce(Tally::default, Tally::merge);
    if tally.aborted * 100 > cfg.trials {
        return Err(Error::TooManyAborts { aborted: tally.aborted, trials: cfg.trials });
    }
    let n = tally.count as f64;
    let mean = tally.sum as f64 / n;
    let var = if tally.count > 1 {
        ((tally.sum_sq as f64 - n * mean * mean) / (n - 1.0)).max(0.0)
    } else {
        0.0
    };
    Ok(Estimate { mean, stderr: (var / n).sqrt(), completed: tally.count, aborted: tally.aborted })
}

/// Monte Carlo estimate of `P_a(τ_b < τ_a⁺)`: starting at `a`, the walk
/// reaches `b` before coming back to `a`.
pub fn escape_probability_mc(g: &Graph, a: Vertex, b: Vertex, cfg: &WalkConfig) -> Result<Estimate> {
    g.check_pair(a, b)?;
    let walk = TransitionStructure::new(g);
    let cap = cfg.step_cap(g.n());
    run_trials(cfg, |rng| {
        let mut x = a;
        for _ in 0..cap {
            x = walk.step(x, rng.gen());
            if x == b {
                return Some(1);
            }
            if x == a {
                return Some(0);
            }
        }
        None
    })
}

/// Monte Carlo estimate of `G_b(a, a)`.
pub fn green_function_mc(g: &Graph, a: Vertex, b: Vertex, cfg: &WalkConfig) -> Result<Estimate> {
    g.check_pair(a, b)?;
    let walk = TransitionStructure::new(g);
    let cap = cfg.step_cap(g.n());
    run_trials(cfg, |rng| {
        let mut x = a;
        let mut visits = 1;
        for _ in 0..cap {
            x = walk.step(x, rng.gen());
            if x == b {
                return Some(visits);
            }
            if x == a {
                visits += 1;
            }
        }
        None
    })
}

/// `C_eff(a, b) / C(a)`.
pub fn escape_probability_exact(g: &Graph, a: Vertex, b: Vertex) -> Result<f64> {
    g.check_pair(a, b)?;
    Ok(1.0 / (effective_resistance(g, a, b)? * g.degree(a)))
}

/// `C(a) · R_eff(a, b)`.
pub fn green_function_exact(g: &Graph, a: Vertex, b: Vertex) -> Result<f64> {
    g.check_pair(a, b)?;
    Ok(g.degree(a) * effective_resistance(g, a, b)?)
}

fn hitting_problem(g: &Graph, boundary: &[Vertex], target: &[Vertex]) -> Result<BoundaryProblem> {
    for t in target {
        if !boundary.contains(t) {
            return Err(Error::WalkConfig(format!("target vertex {t} is not on the boundary")));
        }
    }
    let values: Vec<(Vertex, f64)> = boundary
        .iter()
        .map(|&x| (x, f64::from(u8::from(target.contains(&x)))))
        .collect();
    BoundaryProblem::new(g, &values)
}

/// Probability that the walk from `x` first meets `boundary` inside `target`.
pub fn hitting_probability(g: &Graph, boundary: &[Vertex], target: &[Vertex], x: Vertex) -> Result<f64> {
    g.check_vertex(x)?;
    let problem = hitting_problem(g, boundary, target)?;
    Ok(harmonic_extension(g, &problem)?[x])
}

pub fn hitting_probability_mc(
    g: &Graph,
    boundary: &[Vertex],
    target: &[Vertex],
    x: Vertex,
    cfg: &WalkConfig,
) -> Result<Estimate> {
    g.check_vertex(x)?;
    let problem = hitting_problem(g, boundary, target)?;
    let walk = TransitionStructure::new(g);
    let cap = cfg.step_cap(g.n());
    run_trials(cfg, |rng| {
        let mut y = x;
        if let Some(h) = problem.value(y) {
            return Some(h as u64);
        }
        for _ in 0..cap {
            y = walk.step(y, rng.gen());
            if let Some(h) = problem.value(y) {
                return Some(h as u64);
            }
        }
        None
    })
}
