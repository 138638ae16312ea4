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

//! Electrical networks on a graph: Laplacian, incidence matrix, Green
//! operator, effective resistance, unit current flows and energy.
//!
//! Edge weights are conductances, so an edge of weight `w` has resistance
//! `1/w`. Sign conventions: an edge `e = (tail, head)` carries a signed flow
//! `j(e)`, positive when it runs from tail to head, and the divergence at
//! `x` is the net flow leaving `x`. With `η_ab = e_b - e_a` the potential
//! `v = 𝒢 η_ab` gives `i = W B v`, a flow with divergence `+1` at `a`,
//! `-1` at `b`, and `v(b) - v(a) = R_eff(a, b)`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, Vertex};
use crate::pairs::PairMatrix;

/// Relative eigenvalue threshold below which an eigenvalue counts as kernel.
pub const KERNEL_THRESHOLD: f64 = 1e-10;

/// `L = D - A` with weighted degrees on the diagonal.
pub fn laplacian(g: &Graph) -> DMatrix<f64> {
    let n = g.n();
    let mut l = DMatrix::zeros(n, n);
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let w = g.weight(e);
        l[(u, v)] -= w;
        l[(v, u)] -= w;
        l[(u, u)] += w;
        l[(v, v)] += w;
    }
    l
}

/// A head/tail assignment for every edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orientation {
    arcs: Vec<(Vertex, Vertex)>,
}

impl Orientation {
    /// Tail is the smaller vertex id.
    pub fn canonical(g: &Graph) -> Self {
        Orientation { arcs: g.edges().to_vec() }
    }

    /// `(tail, head)` of edge `e`.
    pub fn arc(&self, e: EdgeId) -> (Vertex, Vertex) {
        self.arcs[e]
    }

    pub fn flipped(&self, e: EdgeId) -> Self {
        let mut arcs = self.arcs.clone();
        let (t, h) = arcs[e];
        arcs[e] = (h, t);
        Orientation { arcs }
    }
}

/// The `M × N` incidence matrix: `+1` at the head, `-1` at the tail.
pub fn incidence(g: &Graph, orientation: &Orientation) -> DMatrix<f64> {
    let mut b = DMatrix::zeros(g.m(), g.n());
    for e in 0..g.m() {
        let (tail, head) = orientation.arc(e);
        b[(e, head)] = 1.0;
        b[(e, tail)] = -1.0;
    }
    b
}

/// `Σ R(e) j(e)²`.
pub fn energy(g: &Graph, flow: &[f64]) -> f64 {
    flow.iter()
        .enumerate()
        .map(|(e, j)| g.resistance(e) * j * j)
        .sum()
}

/// Net flow leaving `x` under the canonical orientation.
pub fn divergence(g: &Graph, flow: &[f64], x: Vertex) -> f64 {
    g.neighbors(x)
        .iter()
        .map(|&(y, e)| if x < y { flow[e] } else { -flow[e] })
        .sum()
}

/// Eigendecomposition of the Laplacian and its Green operator.
#[derive(Clone, Debug)]
pub struct SpectralLaplacian {
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<f64>,
    green: DMatrix<f64>,
    kernel_dim: usize,
}

impl SpectralLaplacian {
    pub fn new(g: &Graph) -> Result<Self> {
        let l = laplacian(g);
        let n = g.n();
        let eig = SymmetricEigen::try_new(l, f64::EPSILON, 10_000).ok_or(Error::Eigensolver)?;
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        let eigenvalues = DVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
        let mut eigenvectors = DMatrix::zeros(n, n);
        for (dst, &src) in order.iter().enumerate() {
            eigenvectors.set_column(dst, &eig.eigenvectors.column(src));
        }
        let largest = eigenvalues.iter().copied().fold(0.0, f64::max);
        let cutoff = KERNEL_THRESHOLD * largest;
        let mut green = DMatrix::zeros(n, n);
        let mut kernel_dim = 0;
        for k in 0..n {
            let lambda = eigenvalues[k];
            if lambda <= cutoff {
                kernel_dim += 1;
                continue;
            }
            let u = eigenvectors.column(k);
            green += (u * u.transpose()) / lambda;
        }
        Ok(SpectralLaplacian { eigenvalues, eigenvectors, green, kernel_dim })
    }

    /// Eigenvalues in increasing order.
    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    /// Orthonormal eigenvectors as columns, matching [`Self::eigenvalues`].
    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.eigenvectors
    }

    /// The pseudoinverse `𝒢 = Σ_{λ>0} u uᵀ / λ`.
    pub fn green(&self) -> &DMatrix<f64> {
        &self.green
    }

    pub fn kernel_dim(&self) -> usize {
        self.kernel_dim
    }

    /// `η_abᵀ 𝒢 η_ab`; zero when `a == b`.
    pub fn effective_resistance(&self, a: Vertex, b: Vertex) -> f64 {
        let g = &self.green;
        g[(a, a)] + g[(b, b)] - 2.0 * g[(a, b)]
    }

    pub fn resistance_matrix(&self) -> PairMatrix {
        PairMatrix::symmetric_from_fn(self.green.nrows(), |a, b| self.effective_resistance(a, b))
    }

    /// Potential `𝒢 η_ab`, normalized to sum to zero.
    pub fn potential(&self, a: Vertex, b: Vertex) -> Vec<f64> {
        (0..self.green.nrows())
            .map(|x| self.green[(x, b)] - self.green[(x, a)])
            .collect()
    }

    pub fn unit_current_flow(&self, g: &Graph, a: Vertex, b: Vertex) -> Result<CurrentSolution> {
        g.check_pair(a, b)?;
        let potential = self.potential(a, b);
        Ok(CurrentSolution::from_potential(g, a, b, potential))
    }
}

/// A unit current flow from `a` to `b` with its potential.
#[derive(Clone, Debug, Serialize)]
pub struct CurrentSolution {
    pub a: Vertex,
    pub b: Vertex,
    pub potential: Vec<f64>,
    /// Signed current per edge under the canonical orientation.
    pub current: Vec<f64>,
    pub strength: f64,
}

impl CurrentSolution {
    fn from_potential(g: &Graph, a: Vertex, b: Vertex, potential: Vec<f64>) -> Self {
        let current: Vec<f64> = g
            .edges()
            .iter()
            .enumerate()
            .map(|(e, &(tail, head))| g.weight(e) * (potential[head] - potential[tail]))
            .collect();
        let strength = divergence(g, &current, a);
        CurrentSolution { a, b, potential, current, strength }
    }

    /// `v(b) - v(a)`.
    pub fn voltage_drop(&self) -> f64 {
        self.potential[self.b] - self.potential[self.a]
    }
}

pub fn spectral(g: &Graph) -> Result<SpectralLaplacian> {
    SpectralLaplacian::new(g)
}

/// Effective resistance through the Green operator. For many pairs build a
/// [`SpectralLaplacian`] once instead.
pub fn effective_resistance(g: &Graph, a: Vertex, b: Vertex) -> Result<f64> {
    g.check_vertex(a)?;
    g.check_vertex(b)?;
    if a == b {
        return Ok(0.0);
    }
    Ok(SpectralLaplacian::new(g)?.effective_resistance(a, b))
}

pub fn effective_conductance(g: &Graph, a: Vertex, b: Vertex) -> Result<f64> {
    g.check_pair(a, b)?;
    Ok(1.0 / effective_resistance(g, a, b)?)
}

/// Potential of the unit current from `a` to `b` grounded at `a`
/// (`v(a) = 0`), from the reduced Laplacian with row and column `a`
/// removed. That block is positive definite on a connected graph.
pub fn grounded_potential(g: &Graph, a: Vertex, b: Vertex) -> Result<Vec<f64>> {
    g.check_pair(a, b)?;
    let n = g.n();
    let keep: Vec<Vertex> = (0..n).filter(|&x| x != a).collect();
    let l = laplacian(g);
    let reduced = DMatrix::from_fn(n - 1, n - 1, |i, j| l[(keep[i], keep[j])]);
    let rhs = DVector::from_iterator(n - 1, keep.iter().map(|&x| f64::from(u8::from(x == b))));
    let chol = reduced.cholesky().ok_or(Error::Eigensolver)?;
    let sol = chol.solve(&rhs);
    let mut v = vec![0.0; n];
    for (i, &x) in keep.iter().enumerate() {
        v[x] = sol[i];
    }
    Ok(v)
}

/// Effective resistance by a grounded linear solve.
pub fn effective_resistance_grounded(g: &Graph, a: Vertex, b: Vertex) -> Result<f64> {
    if a == b {
        g.check_vertex(a)?;
        return Ok(0.0);
    }
    let v = grounded_potential(g, a, b)?;
    Ok(v[b] - v[a])
}

pub fn unit_current_flow(g: &Graph, a: Vertex, b: Vertex) -> Result<CurrentSolution> {
    SpectralLaplacian::new(g)?.unit_current_flow(g, a, b)
}

pub fn resistance_matrix(g: &Graph) -> Result<PairMatrix> {
    Ok(SpectralLaplacian::new(g)?.resistance_matrix())
}
