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

//! Simple connected weighted graphs, hop distances, balls and induced
//! subgraphs.
//!
//! Vertices are `0..n` internally. Text formats use the 1-based labels
//! `1..=n` and are translated at the boundary.

use std::collections::{HashSet, VecDeque};
use std::path::Path;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::pairs::PairMatrix;

pub type Vertex = usize;
pub type EdgeId = usize;

/// An immutable, simple, connected graph with strictly positive edge
/// weights (conductances).
///
/// Every edge is stored once as `(tail, head)` with `tail < head`; this is
/// also the orientation used by the incidence matrix.
#[derive(Clone, Debug)]
pub struct Graph {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
    weights: Vec<f64>,
    adj: Vec<Vec<(Vertex, EdgeId)>>,
}

impl Graph {
    /// Unit-weight graph on `n` vertices.
    pub fn new(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self> {
        let weighted: Vec<_> = edges.iter().map(|&(u, v)| (u, v, 1.0)).collect();
        Self::with_weights(n, &weighted)
    }

    pub fn with_weights(n: usize, edges: &[(Vertex, Vertex, f64)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::Empty);
        }
        let mut seen = HashSet::with_capacity(edges.len());
        let mut stored = Vec::with_capacity(edges.len());
        let mut weights = Vec::with_capacity(edges.len());
        for (pos, &(u, v, w)) in edges.iter().enumerate() {
            let line = pos + 1;
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop { line, vertex: u });
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::NonPositiveWeight { line, weight: w });
            }
            let key = (u.min(v), u.max(v));
            if !seen.insert(key) {
                return Err(Error::DuplicateEdge { line, u: key.0, v: key.1 });
            }
            stored.push(key);
            weights.push(w);
        }
        let mut adj = vec![Vec::new(); n];
        for (e, &(u, v)) in stored.iter().enumerate() {
            adj[u].push((v, e));
            adj[v].push((u, e));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let g = Graph { n, edges: stored, weights, adj };
        let dist = g.bfs_raw(0);
        if let Some(unreached) = dist.iter().position(|d| d.is_none()) {
            return Err(Error::Disconnected { reached: 0, unreached });
        }
        Ok(g)
    }

    /// Parses the line-oriented edge list `u v [w]` with 1-based labels.
    /// Blank lines and lines starting with `#` are skipped.
    pub fn from_edge_list(text: &str) -> Result<Self> {
        let mut raw = Vec::new();
        let mut lines = Vec::new();
        let mut n = 0;
        for (idx, line) in text.lines().enumerate() {
            let lineno = idx + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let tokens: Vec<&str> = trimmed.split_whitespace().collect();
            if tokens.len() != 2 && tokens.len() != 3 {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!("expected `u v [w]`, found {} tokens", tokens.len()),
                });
            }
            let label = |tok: &str| -> Result<usize> {
                match tok.parse::<usize>() {
                    Ok(l) if l >= 1 => Ok(l),
                    _ => Err(Error::Parse {
                        line: lineno,
                        message: format!("`{tok}` is not a vertex label (integers from 1)"),
                    }),
                }
            };
            let u = label(tokens[0])?;
            let v = label(tokens[1])?;
            let w = match tokens.get(2) {
                Some(tok) => tok.parse::<f64>().map_err(|_| Error::Parse {
                    line: lineno,
                    message: format!("`{tok}` is not a number"),
                })?,
                None => 1.0,
            };
            n = n.max(u).max(v);
            raw.push((u - 1, v - 1, w));
            lines.push(lineno);
        }
        if raw.is_empty() {
            return Err(Error::Empty);
        }
        Self::with_weights(n, &raw).map_err(|e| relabel_error(e, &lines))
    }

    /// Parses a dense symmetric adjacency table in CSV form. Entry `(i, j)`
    /// is the weight of edge `{i, j}`, zero meaning no edge.
    pub fn from_adjacency_csv(text: &str) -> Result<Self> {
        let mut rows: Vec<(usize, Vec<f64>)> = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let row = trimmed
                .split(',')
                .map(|tok| {
                    tok.trim().parse::<f64>().map_err(|_| Error::Parse {
                        line: idx + 1,
                        message: format!("`{}` is not a number", tok.trim()),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push((idx + 1, row));
        }
        let n = rows.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        let mut edges = Vec::new();
        let mut lines = Vec::new();
        for (i, (line, row)) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Parse {
                    line: *line,
                    message: format!("expected {n} columns, found {}", row.len()),
                });
            }
            if row[i] != 0.0 {
                return Err(Error::SelfLoop { line: *line, vertex: i + 1 });
            }
            for (j, &w) in row.iter().enumerate() {
                if w != rows[j].1.get(i).copied().unwrap_or(f64::NAN) {
                    return Err(Error::Parse {
                        line: *line,
                        message: format!("table is not symmetric at ({}, {})", i + 1, j + 1),
                    });
                }
                if j > i && w != 0.0 {
                    edges.push((i, j, w));
                    lines.push(*line);
                }
            }
        }
        Self::with_weights(n, &edges).map_err(|e| relabel_error(e, &lines))
    }

    /// Parses either text format: CSV when the first data line has a comma,
    /// edge list otherwise.
    pub fn parse(text: &str) -> Result<Self> {
        let first = text
            .lines()
            .map(str::trim)
            .find(|l| !l.is_empty() && !l.starts_with('#'));
        match first {
            Some(line) if line.contains(',') => Self::from_adjacency_csv(text),
            _ => Self::from_edge_list(text),
        }
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Serializes to the edge-list format with 1-based labels.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            let w = self.weights[e];
            if w == 1.0 {
                out.push_str(&format!("{} {}\n", u + 1, v + 1));
            } else {
                out.push_str(&format!("{} {} {}\n", u + 1, v + 1, w));
            }
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of edges.
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.n
    }

    /// Edges as `(tail, head)` with `tail < head`, indexed by [`EdgeId`].
    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> (Vertex, Vertex) {
        self.edges[e]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, e: EdgeId) -> f64 {
        self.weights[e]
    }

    /// Resistance of an edge, the reciprocal of its weight.
    pub fn resistance(&self, e: EdgeId) -> f64 {
        1.0 / self.weights[e]
    }

    pub fn is_unweighted(&self) -> bool {
        self.weights.iter().all(|&w| w == 1.0)
    }

    /// Neighbors of `x` with the connecting edge, sorted by neighbor.
    pub fn neighbors(&self, x: Vertex) -> &[(Vertex, EdgeId)] {
        &self.adj[x]
    }

    pub fn edge_between(&self, x: Vertex, y: Vertex) -> Option<EdgeId> {
        self.adj[x]
            .binary_search_by_key(&y, |&(nb, _)| nb)
            .ok()
            .map(|i| self.adj[x][i].1)
    }

    /// Weighted degree: the sum of the weights of the edges at `x`.
    pub fn degree(&self, x: Vertex) -> f64 {
        self.adj[x].iter().map(|&(_, e)| self.weights[e]).sum()
    }

    /// Number of neighbors, ignoring weights.
    pub fn neighbor_count(&self, x: Vertex) -> usize {
        self.adj[x].len()
    }

    pub fn is_tree(&self) -> bool {
        self.m() + 1 == self.n
    }

    /// Same edges, all weights reset to one.
    pub fn unweighted(&self) -> Graph {
        Graph {
            weights: vec![1.0; self.m()],
            ..self.clone()
        }
    }

    /// Copy of the graph with the weight of one edge replaced.
    pub fn with_edge_weight(&self, e: EdgeId, weight: f64) -> Result<Graph> {
        if !(weight.is_finite() && weight > 0.0) {
            return Err(Error::NonPositiveWeight { line: e + 1, weight });
        }
        let mut g = self.clone();
        g.weights[e] = weight;
        Ok(g)
    }

    /// Dense 0/1 adjacency table, row-major.
    pub fn adjacency_01(&self) -> Vec<u8> {
        let mut a = vec![0u8; self.n * self.n];
        for &(u, v) in &self.edges {
            a[u * self.n + v] = 1;
            a[v * self.n + u] = 1;
        }
        a
    }

    pub(crate) fn check_vertex(&self, x: Vertex) -> Result<()> {
        if x < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: x, n: self.n })
        }
    }

    pub(crate) fn check_pair(&self, a: Vertex, b: Vertex) -> Result<()> {
        self.check_vertex(a)?;
        self.check_vertex(b)?;
        if a == b {
            return Err(Error::SameVertex(a));
        }
        Ok(())
    }

    fn bfs_raw(&self, x: Vertex) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        let mut queue = VecDeque::new();
        dist[x] = Some(0);
        queue.push_back(x);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap_or_default();
            for &(v, _) in &self.adj[u] {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Hop distances from `x` to every vertex. Weights are ignored.
    pub fn bfs_distances(&self, x: Vertex) -> Vec<usize> {
        self.bfs_raw(x).into_iter().map(|d| d.unwrap_or(usize::MAX)).collect()
    }

    /// All-pairs hop distances, one BFS per row.
    pub fn all_distances(&self) -> Vec<Vec<usize>> {
        (0..self.n).into_par_iter().map(|x| self.bfs_distances(x)).collect()
    }

    pub fn distance_matrix(&self) -> PairMatrix {
        let rows = self.all_distances();
        PairMatrix::from_fn(self.n, |i, j| rows[i][j] as f64)
    }

    pub fn diameter(&self) -> usize {
        self.all_distances()
            .into_iter()
            .flat_map(|row| row.into_iter())
            .max()
            .unwrap_or(0)
    }

    /// Vertices within hop distance `r` of `x`, in increasing order.
    pub fn ball(&self, x: Vertex, r: usize) -> Vec<Vertex> {
        self.bfs_distances(x)
            .into_iter()
            .enumerate()
            .filter_map(|(y, d)| (d <= r).then_some(y))
            .collect()
    }

    /// Subgraph induced by `vertices`.
    pub fn induced(&self, vertices: &[Vertex]) -> Subgraph<'_> {
        Subgraph::induced(self, vertices)
    }
}

fn relabel_error(err: Error, lines: &[usize]) -> Error {
    let line_of = |pos: usize| lines.get(pos.wrapping_sub(1)).copied().unwrap_or(pos);
    match err {
        Error::SelfLoop { line, vertex } => Error::SelfLoop { line: line_of(line), vertex: vertex + 1 },
        Error::DuplicateEdge { line, u, v } => Error::DuplicateEdge { line: line_of(line), u: u + 1, v: v + 1 },
        Error::NonPositiveWeight { line, weight } => {
            Error::NonPositiveWeight { line: line_of(line), weight }
        }
        Error::Disconnected { reached, unreached } => Error::Disconnected {
            reached: reached + 1,
            unreached: unreached + 1,
        },
        other => other,
    }
}

/// A subgraph given by a vertex set and an edge set of its parent.
///
/// [`Subgraph::induced`] builds the subgraph induced by a vertex set; curves
/// (arbitrary connected edge sets) come from [`Subgraph::from_edges`].
#[derive(Clone, Debug)]
pub struct Subgraph<'g> {
    parent: &'g Graph,
    vertices: Vec<Vertex>,
    member: Vec<bool>,
    edges: Vec<EdgeId>,
}

impl<'g> Subgraph<'g> {
    pub fn induced(parent: &'g Graph, vertices: &[Vertex]) -> Self {
        let mut member = vec![false; parent.n()];
        for &v in vertices {
            member[v] = true;
        }
        let edges = parent
            .edges()
            .iter()
            .enumerate()
            .filter_map(|(e, &(u, v))| (member[u] && member[v]).then_some(e))
            .collect();
        Subgraph {
            parent,
            vertices: (0..parent.n()).filter(|&v| member[v]).collect(),
            member,
            edges,
        }
    }

    /// Subgraph spanned by an edge set: its vertices are the endpoints.
    /// With no edges, `anchor` gives the single vertex of a constant curve.
    pub fn from_edges(parent: &'g Graph, edges: &[EdgeId], anchor: Vertex) -> Self {
        let mut member = vec![false; parent.n()];
        member[anchor] = true;
        let mut es: Vec<EdgeId> = edges.to_vec();
        es.sort_unstable();
        es.dedup();
        for &e in &es {
            let (u, v) = parent.edge(e);
            member[u] = true;
            member[v] = true;
        }
        Subgraph {
            parent,
            vertices: (0..parent.n()).filter(|&v| member[v]).collect(),
            member,
            edges: es,
        }
    }

    /// Subgraph traced by a vertex walk `x0 ~ x1 ~ ... ~ xk`.
    pub fn from_walk(parent: &'g Graph, walk: &[Vertex]) -> Result<Self> {
        let first = *walk.first().ok_or(Error::Empty)?;
        let mut edges = Vec::with_capacity(walk.len());
        for pair in walk.windows(2) {
            let e = parent.edge_between(pair[0], pair[1]).ok_or_else(|| Error::Parse {
                line: 0,
                message: format!("{} and {} are not adjacent", pair[0], pair[1]),
            })?;
            edges.push(e);
        }
        Ok(Self::from_edges(parent, &edges, first))
    }

    pub fn parent(&self) -> &'g Graph {
        self.parent
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.member[v]
    }

    /// Number of edges.
    pub fn volume(&self) -> usize {
        self.edges.len()
    }

    /// Number of subgraph edges at `x`.
    pub fn local_degree(&self, x: Vertex) -> usize {
        self.edges
            .iter()
            .filter(|&&e| {
                let (u, v) = self.parent.edge(e);
                u == x || v == x
            })
            .count()
    }

    /// Sum of local degrees; twice the volume.
    pub fn degree_sum(&self) -> usize {
        self.vertices.iter().map(|&x| self.local_degree(x)).sum()
    }

    /// True when the edge set is exactly the edges induced by the vertex set.
    pub fn is_induced(&self) -> bool {
        let full = Subgraph::induced(self.parent, &self.vertices);
        full.edges == self.edges
    }

    pub fn is_connected(&self) -> bool {
        let Some(&start) = self.vertices.first() else {
            return true;
        };
        let mut in_edges = vec![false; self.parent.m()];
        for &e in &self.edges {
            in_edges[e] = true;
        }
        let mut seen = vec![false; self.parent.n()];
        let mut stack = vec![start];
        seen[start] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &(v, e) in self.parent.neighbors(u) {
                if in_edges[e] && !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == self.vertices.len()
    }

    /// Adjacency table of the subgraph in the parent's N×N indexing.
    pub fn adjacency_01(&self) -> Vec<u8> {
        let n = self.parent.n();
        let mut a = vec![0u8; n * n];
        for &e in &self.edges {
            let (u, v) = self.parent.edge(e);
            a[u * n + v] = 1;
            a[v * n + u] = 1;
        }
        a
    }
}

/// Hop distances by repeated boolean matrix powers.
///
/// With `B = K + I`, row `x` of the 0/1 pattern of `B^k` marks the ball of
/// radius `k` around `x`. Flipping those patterns and summing over
/// `k = 0..=N` counts, for each pair, the radii at which `y` is still
/// outside the ball, which is the distance. `O(N^4)`; used as an oracle for
/// [`Graph::bfs_distances`].
pub fn matrix_power_distances(g: &Graph) -> PairMatrix {
    let n = g.n();
    let k = g.adjacency_01();
    let mut b = k.clone();
    for i in 0..n {
        b[i * n + i] = 1;
    }
    let mut power: Vec<u8> = (0..n * n).map(|idx| u8::from(idx / n == idx % n)).collect();
    let mut total = vec![0u32; n * n];
    for step in 0..=n {
        if step > 0 {
            let mut next = vec![0u8; n * n];
            for i in 0..n {
                for l in 0..n {
                    if power[i * n + l] == 0 {
                        continue;
                    }
                    for j in 0..n {
                        if b[l * n + j] != 0 {
                            next[i * n + j] = 1;
                        }
                    }
                }
            }
            power = next;
        }
        for (t, &p) in total.iter_mut().zip(&power) {
            *t += u32::from(1 - p);
        }
    }
    PairMatrix::from_fn(n, |i, j| f64::from(total[i * n + j]))
}
