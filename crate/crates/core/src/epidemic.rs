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

//! The epidemic quasimetric.
//!
//! For `a`, `b` at hop distance `d`, let `Ω(x, d)` be the subgraph induced
//! by the radius-`d` ball around `x`. Then
//! `Epidemic(a, b) = |Ω(a, d)| + |Ω(b, d)|`, counting edges. It is symmetric
//! and vanishes only on the diagonal, but it is not a metric.

use rayon::prelude::*;
use serde::Serialize;

use crate::electrical::SpectralLaplacian;
use crate::error::Result;
use crate::graph::{Graph, Subgraph, Vertex};
use crate::pairs::PairMatrix;
use crate::variational::EdgeDensity;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EpidemicResult {
    pub a: Vertex,
    pub b: Vertex,
    pub distance: usize,
    /// `|Ω(a, d)|`
    pub volume_a: usize,
    /// `|Ω(b, d)|`
    pub volume_b: usize,
    /// Edges in `Ω(a, d) ∪ Ω(b, d)`; the support of [`epidemic_density`].
    pub union_volume: usize,
    pub value: usize,
}

/// `Ω(x, r)`: the subgraph induced by the ball of radius `r` around `x`.
pub fn omega(g: &Graph, x: Vertex, r: usize) -> Subgraph<'_> {
    g.induced(&g.ball(x, r))
}

pub fn epidemic(g: &Graph, a: Vertex, b: Vertex) -> Result<EpidemicResult> {
    g.check_vertex(a)?;
    g.check_vertex(b)?;
    let distance = g.bfs_distances(a)[b];
    let omega_a = omega(g, a, distance);
    let omega_b = omega(g, b, distance);
    let union_volume = (0..g.m())
        .filter(|e| omega_a.edges().binary_search(e).is_ok() || omega_b.edges().binary_search(e).is_ok())
        .count();
    Ok(EpidemicResult {
        a,
        b,
        distance,
        volume_a: omega_a.volume(),
        volume_b: omega_b.volume(),
        union_volume,
        value: omega_a.volume() + omega_b.volume(),
    })
}

/// `|Ω(x, r)|` for every radius `r` up to the eccentricity of `x`.
///
/// An edge `{u, v}` lies in `Ω(x, r)` exactly when both endpoints are
/// within `r`, so bucketing edges by `max(d(x,u), d(x,v))` and taking prefix
/// sums gives the whole profile from one BFS.
fn volume_profile(g: &Graph, dist: &[usize]) -> Vec<usize> {
    let ecc = dist.iter().copied().max().unwrap_or(0);
    let mut profile = vec![0usize; ecc + 1];
    for &(u, v) in g.edges() {
        profile[dist[u].max(dist[v])] += 1;
    }
    for r in 1..profile.len() {
        profile[r] += profile[r - 1];
    }
    profile
}

/// All-pairs epidemic values as a symmetric table with zero diagonal.
pub fn epidemic_matrix(g: &Graph) -> PairMatrix {
    let dist = g.all_distances();
    let profiles: Vec<Vec<usize>> = dist.par_iter().map(|row| volume_profile(g, row)).collect();
    let vol = |x: usize, r: usize| profiles[x][r.min(profiles[x].len() - 1)];
    PairMatrix::symmetric_from_fn(g.n(), |a, b| {
        let d = dist[a][b];
        (vol(a, d) + vol(b, d)) as f64
    })
}

/// The density `1/d` on `Ω(a, d) ∪ Ω(b, d)` and zero elsewhere. It is
/// admissible for the curves joining `a` and `b`, so its energy bounds the
/// modulus from above.
pub fn epidemic_density(g: &Graph, a: Vertex, b: Vertex) -> Result<EdgeDensity> {
    g.check_pair(a, b)?;
    let dist_a = g.bfs_distances(a);
    let dist_b = g.bfs_distances(b);
    let d = dist_a[b];
    let level = 1.0 / d as f64;
    let values = g
        .edges()
        .iter()
        .map(|&(u, v)| {
            let in_a = dist_a[u] <= d && dist_a[v] <= d;
            let in_b = dist_b[u] <= d && dist_b[v] <= d;
            if in_a || in_b {
                level
            } else {
                0.0
            }
        })
        .collect();
    EdgeDensity::new(values)
}

/// `δ(a, b) = R_eff(a, b) · Epidemic(a, b) / d(a, b)²`, at least one on
/// every graph.
pub fn discrepancy(g: &Graph, a: Vertex, b: Vertex) -> Result<f64> {
    g.check_pair(a, b)?;
    let spectral = SpectralLaplacian::new(g)?;
    let epi = epidemic(g, a, b)?;
    let d = epi.distance as f64;
    Ok(spectral.effective_resistance(a, b) * epi.value as f64 / (d * d))
}

pub fn discrepancy_matrix(g: &Graph) -> Result<PairMatrix> {
    let resistance = SpectralLaplacian::new(g)?.resistance_matrix();
    let epi = epidemic_matrix(g);
    let dist = g.distance_matrix();
    Ok(PairMatrix::symmetric_from_fn(g.n(), |a, b| {
        let d = dist.get(a, b);
        resistance.get(a, b) * epi.get(a, b) / (d * d)
    }))
}
