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

//! Graph families with closed-form quantities, seeded random corpora and
//! the named built-in datasets.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::karate;

/// Path `0 ~ 1 ~ ... ~ n-1`.
pub fn path(n: usize) -> Result<Graph> {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::new(n, &edges)
}

/// Cycle on `n >= 3` vertices.
pub fn cycle(n: usize) -> Result<Graph> {
    let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    edges.push((n - 1, 0));
    Graph::new(n, &edges)
}

/// Star on `n` vertices: hub `0` and leaves `1..n`.
pub fn star(n: usize) -> Result<Graph> {
    let edges: Vec<_> = (1..n).map(|i| (0, i)).collect();
    Graph::new(n, &edges)
}

pub fn complete(n: usize) -> Result<Graph> {
    let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            edges.push((i, j));
        }
    }
    Graph::new(n, &edges)
}

/// `K_n` on `0..n` plus a pendant vertex `n` hanging off vertex `0`.
pub fn complete_pendant(n: usize) -> Result<Graph> {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            edges.push((i, j));
        }
    }
    edges.push((0, n));
    Graph::new(n + 1, &edges)
}

/// Vertices of interest in [`triangle_failure`].
pub const TRIANGLE_FAILURE_POINTS: [Vertex; 3] = [0, 1, 2];

/// Path `x1 ~ x2 ~ x3 ~ h` with `leaves` extra vertices attached to `h`.
///
/// Here `Epidemic(x1,x2) = 3` and `Epidemic(x2,x3) = 4` while
/// `Epidemic(x1,x3) = leaves + 5`, so the triangle inequality fails by
/// `leaves - 2`. The three points are [`TRIANGLE_FAILURE_POINTS`].
pub fn triangle_failure(leaves: usize) -> Result<Graph> {
    let mut edges = vec![(0, 1), (1, 2), (2, 3)];
    edges.extend((0..leaves).map(|i| (3, 4 + i)));
    Graph::new(4 + leaves, &edges)
}

/// Erdős–Rényi `G(n, p)` conditioned on connectivity (by rejection). With
/// `weights = Some((lo, hi))` each edge weight is uniform on `[lo, hi]`.
pub fn random_connected<R: Rng>(
    rng: &mut R,
    n: usize,
    p: f64,
    weights: Option<(f64, f64)>,
) -> Graph {
    loop {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.gen_bool(p) {
                    let w = match weights {
                        Some((lo, hi)) => rng.gen_range(lo..=hi),
                        None => 1.0,
                    };
                    edges.push((i, j, w));
                }
            }
        }
        if let Ok(g) = Graph::with_weights(n, &edges) {
            return g;
        }
    }
}

/// Uniformly relabeled random recursive tree.
pub fn random_tree<R: Rng>(rng: &mut R, n: usize) -> Graph {
    let mut labels: Vec<Vertex> = (0..n).collect();
    labels.shuffle(rng);
    let edges: Vec<_> = (1..n)
        .map(|i| (labels[rng.gen_range(0..i)], labels[i]))
        .collect();
    Graph::new(n, &edges).expect("a recursive tree is simple and connected")
}

/// Parameters of a seeded random test corpus.
#[derive(Clone, Copy, Debug)]
pub struct Corpus {
    pub seed: u64,
    pub count: usize,
    pub min_n: usize,
    pub max_n: usize,
    pub edge_probability: f64,
    pub weights: Option<(f64, f64)>,
}

impl Default for Corpus {
    fn default() -> Self {
        Corpus {
            seed: 2024,
            count: 50,
            min_n: 4,
            max_n: 12,
            edge_probability: 0.4,
            weights: Some((0.5, 2.0)),
        }
    }
}

impl Corpus {
    pub fn graphs(&self) -> Vec<Graph> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        (0..self.count)
            .map(|_| {
                let n = rng.gen_range(self.min_n..=self.max_n);
                random_connected(&mut rng, n, self.edge_probability, self.weights)
            })
            .collect()
    }

    pub fn trees(&self) -> Vec<Graph> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ 0x7EE5);
        (0..self.count)
            .map(|_| {
                let n = rng.gen_range(self.min_n..=self.max_n);
                random_tree(&mut rng, n)
            })
            .collect()
    }
}

/// Built-in datasets: `karate`, `path:N`, `cycle:N`, `star:N`,
/// `complete:N`, `complete-pendant:N`, `triangle-failure:N`.
pub fn named(name: &str) -> Result<Graph> {
    let bad = || Error::Parse {
        line: 0,
        message: format!("unknown dataset `{name}`"),
    };
    if name == "karate" {
        return Ok(karate::graph());
    }
    let (family, size) = name.split_once(':').ok_or_else(bad)?;
    let n: usize = size.parse().map_err(|_| bad())?;
    match family {
        "path" if n >= 2 => path(n),
        "cycle" if n >= 3 => cycle(n),
        "star" if n >= 2 => star(n),
        "complete" if n >= 2 => complete(n),
        "complete-pendant" if n >= 2 => complete_pendant(n),
        "triangle-failure" => triangle_failure(n),
        _ => Err(bad()),
    }
}
