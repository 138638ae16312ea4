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

//! Named identity and inequality checks run over a batch of graphs.
//!
//! Each suite records the largest violation it saw and the pair that caused
//! it. A suite passes when that violation is within its tolerance.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::electrical::{effective_resistance_grounded, energy, SpectralLaplacian};
use crate::epidemic::epidemic_matrix;
use crate::error::Result;
use crate::graph::{matrix_power_distances, Graph};
use crate::variational::{capacity, modulus, modulus_bruteforce};

#[derive(Clone, Debug, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub statement: &'static str,
    pub checks: usize,
    pub max_violation: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Where the largest violation occurred (graph index, 1-based pair).
    pub worst: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub graphs: usize,
    pub passed: bool,
    pub suites: Vec<SuiteResult>,
    /// Largest discrepancy `R_eff · Epidemic / d²` seen, on unit weights.
    pub max_discrepancy: Option<Extreme>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Extreme {
    pub value: f64,
    pub graph: usize,
    pub pair: (usize, usize),
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    /// Graphs up to this size also run the brute-force modulus oracle.
    pub bruteforce_max_n: usize,
    /// Single-edge weight decreases tried per graph.
    pub rayleigh_trials: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { bruteforce_max_n: 8, rayleigh_trials: 10, seed: 7 }
    }
}

struct Suite {
    result: SuiteResult,
}

impl Suite {
    fn new(name: &'static str, statement: &'static str, tolerance: f64) -> Self {
        Suite {
            result: SuiteResult {
                name,
                statement,
                checks: 0,
                max_violation: 0.0,
                tolerance,
                passed: true,
                worst: None,
            },
        }
    }

    /// Records one check whose violation is `amount` (nonpositive is fine).
    fn record(&mut self, amount: f64, at: impl FnOnce() -> String) {
        self.result.checks += 1;
        let amount = if amount.is_nan() { f64::INFINITY } else { amount };
        if amount > self.result.max_violation {
            self.result.max_violation = amount;
            self.result.worst = Some(at());
        }
    }

    fn finish(mut self) -> SuiteResult {
        self.result.passed = self.result.max_violation <= self.result.tolerance;
        self.result
    }
}

fn rel(x: f64, y: f64) -> f64 {
    (x - y).abs() / y.abs().max(f64::MIN_POSITIVE)
}

fn at(graph: usize, a: usize, b: usize, what: String) -> String {
    format!("graph {graph}, pair ({}, {}): {what}", a + 1, b + 1)
}

pub fn verify_graphs(graphs: &[Graph], opts: &VerifyOptions) -> Result<Report> {
    let mut modcap = Suite::new("modulus_capacity_conductance", "Mod = Cap = 1/R_eff (relative)", 1e-8);
    let mut brute = Suite::new("modulus_bruteforce", "path-enumeration modulus = Cap (absolute)", 1e-5);
    let mut resist3 = Suite::new(
        "resistance_three_ways",
        "Green operator, grounded solve and Energy(unit current) agree (relative)",
        1e-8,
    );
    let mut upper = Suite::new("epidemic_upper_bound", "d² · Mod <= Epidemic on unit weights", 1e-9);
    let mut delta = Suite::new("discrepancy_at_least_one", "R_eff · Epidemic / d² >= 1 on unit weights", 1e-9);
    let mut triangle = Suite::new("resistance_triangle", "R_eff(x,z) <= R_eff(x,y) + R_eff(y,z)", 1e-8);
    let mut below = Suite::new("resistance_below_distance", "R_eff <= d_G on unit weights", 1e-9);
    let mut tree = Suite::new("tree_equality", "R_eff = d_G on trees with unit weights", 1e-9);
    let mut rayleigh = Suite::new(
        "rayleigh_monotonicity",
        "lowering one edge weight never lowers any R_eff",
        1e-9,
    );
    let mut powers = Suite::new("matrix_power_distances", "matrix-power distances = BFS distances", 0.0);
    let mut max_discrepancy: Option<Extreme> = None;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);

    for (gi, g) in graphs.iter().enumerate() {
        let n = g.n();
        let spectral = SpectralLaplacian::new(g)?;
        let r = spectral.resistance_matrix();
        let dist = g.all_distances();

        for a in 0..n {
            for b in a + 1..n {
                let reff = r.get(a, b);
                let cap = capacity(g, a, b)?;
                let md = modulus(g, a, b)?;
                modcap.record(rel(md, cap).max(rel(cap, 1.0 / reff)), || {
                    at(gi, a, b, format!("Mod={md}, Cap={cap}, 1/R_eff={}", 1.0 / reff))
                });
                if n <= opts.bruteforce_max_n {
                    let bf = modulus_bruteforce(g, a, b)?;
                    brute.record((bf.value - cap).abs(), || {
                        at(gi, a, b, format!("brute force {}, Cap={cap}", bf.value))
                    });
                }
                let grounded = effective_resistance_grounded(g, a, b)?;
                let flow_energy = energy(g, &spectral.unit_current_flow(g, a, b)?.current);
                resist3.record(rel(grounded, reff).max(rel(flow_energy, reff)), || {
                    at(gi, a, b, format!("Green {reff}, grounded {grounded}, energy {flow_energy}"))
                });
            }
        }

        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let gap = r.get(x, z) - r.get(x, y) - r.get(y, z);
                    triangle.record(gap, || format!("graph {gi}, triple ({}, {}, {}): excess {gap}", x + 1, y + 1, z + 1));
                }
            }
        }

        let unit = g.unweighted();
        let unit_r = SpectralLaplacian::new(&unit)?.resistance_matrix();
        let epi = epidemic_matrix(&unit);
        for a in 0..n {
            for b in a + 1..n {
                let d = dist[a][b] as f64;
                let ru = unit_r.get(a, b);
                below.record(ru - d, || at(gi, a, b, format!("R_eff={ru}, d={d}")));
                if g.is_tree() {
                    tree.record((ru - d).abs(), || at(gi, a, b, format!("R_eff={ru}, d={d}")));
                }
                let e = epi.get(a, b);
                let md = modulus(&unit, a, b)?;
                upper.record(d * d * md - e, || at(gi, a, b, format!("d²·Mod={}, Epidemic={e}", d * d * md)));
                let disc = ru * e / (d * d);
                delta.record(1.0 - disc, || at(gi, a, b, format!("δ={disc}")));
                if max_discrepancy.as_ref().is_none_or(|m| disc > m.value) {
                    max_discrepancy = Some(Extreme { value: disc, graph: gi, pair: (a + 1, b + 1) });
                }
            }
        }

        for _ in 0..opts.rayleigh_trials {
            let e = rng.gen_range(0..g.m());
            let factor = rng.gen_range(0.1..0.9);
            let lowered = g.with_edge_weight(e, g.weight(e) * factor)?;
            let r2 = SpectralLaplacian::new(&lowered)?.resistance_matrix();
            for a in 0..n {
                for b in a + 1..n {
                    let drop = r.get(a, b) - r2.get(a, b);
                    rayleigh.record(drop, || {
                        at(gi, a, b, format!("edge {} scaled by {factor}: {} -> {}", e + 1, r.get(a, b), r2.get(a, b)))
                    });
                }
            }
        }

        let mp = matrix_power_distances(g);
        for a in 0..n {
            for b in 0..n {
                let diff = (mp.get(a, b) - dist[a][b] as f64).abs();
                powers.record(diff, || at(gi, a, b, format!("matrix power {}, BFS {}", mp.get(a, b), dist[a][b])));
            }
        }
    }

    let suites: Vec<SuiteResult> = [modcap, brute, resist3, upper, delta, triangle, below, tree, rayleigh, powers]
        .into_iter()
        .map(Suite::finish)
        .collect();
    Ok(Report {
        graphs: graphs.len(),
        passed: suites.iter().all(|s| s.passed),
        suites,
        max_discrepancy,
    })
}
