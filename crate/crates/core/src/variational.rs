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

//! Dirichlet problems, capacity and the modulus of the curve family
//! `Γ(a, b)` of connected subgraphs containing both `a` and `b`.
//!
//! Energies are weighted: `E(ρ) = Σ w(e) ρ(e)²`, which is the plain sum of
//! squares on unit-weight graphs.
//!
//! Every curve in `Γ(a, b)` contains a simple `a`-`b` path and ρ-length only
//! grows when edges are added, so admissibility and the modulus are decided
//! by the finitely many simple paths.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::electrical::SpectralLaplacian;
use crate::epidemic::{epidemic, epidemic_density};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, Subgraph, Vertex};

/// A nonnegative value on every edge.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EdgeDensity(Vec<f64>);

impl EdgeDensity {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(pos) = values.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::InvalidDensity { edge: pos, value: values[pos] });
        }
        Ok(EdgeDensity(values))
    }

    pub fn constant(g: &Graph, value: f64) -> Self {
        EdgeDensity(vec![value.max(0.0); g.m()])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn get(&self, e: EdgeId) -> f64 {
        self.0[e]
    }

    /// `Σ w(e) ρ(e)²`.
    pub fn energy(&self, g: &Graph) -> f64 {
        self.0.iter().zip(g.weights()).map(|(r, w)| w * r * r).sum()
    }

    pub fn scaled(&self, t: f64) -> Self {
        EdgeDensity(self.0.iter().map(|r| r * t.abs()).collect())
    }
}

/// Gradient `ρ_u(e) = |u(x) - u(y)|` of a vertex function.
pub fn gradient(g: &Graph, u: &[f64]) -> EdgeDensity {
    EdgeDensity(g.edges().iter().map(|&(x, y)| (u[x] - u[y]).abs()).collect())
}

/// Boundary values for a Dirichlet problem.
#[derive(Clone, Debug)]
pub struct BoundaryProblem {
    values: Vec<Option<f64>>,
}

impl BoundaryProblem {
    pub fn new(g: &Graph, boundary: &[(Vertex, f64)]) -> Result<Self> {
        if boundary.is_empty() {
            return Err(Error::EmptyBoundary);
        }
        let mut values = vec![None; g.n()];
        for &(x, h) in boundary {
            g.check_vertex(x)?;
            values[x] = Some(h);
        }
        Ok(BoundaryProblem { values })
    }

    pub fn value(&self, x: Vertex) -> Option<f64> {
        self.values[x]
    }

    pub fn interior(&self) -> Vec<Vertex> {
        (0..self.values.len()).filter(|&x| self.values[x].is_none()).collect()
    }

    /// `(min, max)` of the boundary values.
    pub fn range(&self) -> (f64, f64) {
        self.values
            .iter()
            .flatten()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
    }
}

/// The unique function equal to the boundary data on `B` and harmonic
/// (conductance-weighted mean of its neighbors) on `V \ B`.
pub fn harmonic_extension(g: &Graph, problem: &BoundaryProblem) -> Result<Vec<f64>> {
    if problem.values.len() != g.n() {
        return Err(Error::VertexOutOfRange { vertex: problem.values.len(), n: g.n() });
    }
    let interior = problem.interior();
    let mut h: Vec<f64> = problem.values.iter().map(|v| v.unwrap_or(0.0)).collect();
    if interior.is_empty() {
        return Ok(h);
    }
    if interior.len() == g.n() {
        return Err(Error::EmptyBoundary);
    }
    let mut index = vec![usize::MAX; g.n()];
    for (i, &x) in interior.iter().enumerate() {
        index[x] = i;
    }
    let k = interior.len();
    let mut a = DMatrix::zeros(k, k);
    let mut rhs = DVector::zeros(k);
    for (i, &x) in interior.iter().enumerate() {
        for &(y, e) in g.neighbors(x) {
            let w = g.weight(e);
            a[(i, i)] += w;
            match problem.value(y) {
                Some(hy) => rhs[i] += w * hy,
                None => a[(i, index[y])] -= w,
            }
        }
    }
    let sol = a.cholesky().ok_or(Error::Eigensolver)?.solve(&rhs);
    for (i, &x) in interior.iter().enumerate() {
        h[x] = sol[i];
    }
    Ok(h)
}

/// Largest `|h(x) - mean_C(h, neighbors of x)|` over the given vertices.
pub fn harmonic_residual(g: &Graph, h: &[f64], vertices: &[Vertex]) -> f64 {
    vertices
        .iter()
        .map(|&x| {
            let c: f64 = g.degree(x);
            let mean: f64 = g.neighbors(x).iter().map(|&(y, e)| g.weight(e) * h[y]).sum::<f64>() / c;
            (h[x] - mean).abs()
        })
        .fold(0.0, f64::max)
}

/// `U = 0` at `a`, `1` at `b`, harmonic elsewhere, obtained by rescaling the
/// potential of the unit current.
pub fn capacitary_function(g: &Graph, a: Vertex, b: Vertex) -> Result<Vec<f64>> {
    g.check_pair(a, b)?;
    let spectral = SpectralLaplacian::new(g)?;
    let v = spectral.potential(a, b);
    let drop = v[b] - v[a];
    let mut u: Vec<f64> = v.iter().map(|x| (x - v[a]) / drop).collect();
    u[a] = 0.0;
    u[b] = 1.0;
    Ok(u)
}

/// Minimum gradient energy over vertex functions with `u(a) = 0`,
/// `u(b) = 1`, attained by the harmonic extension of those two values.
pub fn capacity(g: &Graph, a: Vertex, b: Vertex) -> Result<f64> {
    g.check_pair(a, b)?;
    let problem = BoundaryProblem::new(g, &[(a, 0.0), (b, 1.0)])?;
    let u = harmonic_extension(g, &problem)?;
    Ok(gradient(g, &u).energy(g))
}

/// `Mod(Γ(a, b))`. Modulus and capacity coincide, so this is computed as the
/// capacity; [`modulus_bruteforce`] evaluates the definition directly.
pub fn modulus(g: &Graph, a: Vertex, b: Vertex) -> Result<f64> {
    capacity(g, a, b)
}

pub fn rho_length(density: &EdgeDensity, curve: &Subgraph<'_>) -> f64 {
    curve.edges().iter().map(|&e| density.get(e)).sum()
}

/// Default cap on enumerated simple paths.
pub const PATH_BUDGET: usize = 2_000_000;

/// Largest graph accepted by [`is_admissible`].
pub const ADMISSIBILITY_MAX_N: usize = 14;

/// Largest graph accepted by [`modulus_bruteforce`].
pub const BRUTEFORCE_MAX_N: usize = 10;

/// All simple `a`-`b` paths as edge lists, in DFS order.
pub fn simple_paths(g: &Graph, a: Vertex, b: Vertex, budget: usize) -> Result<Vec<Vec<EdgeId>>> {
    g.check_pair(a, b)?;
    let mut paths = Vec::new();
    let mut on_path = vec![false; g.n()];
    let mut edges = Vec::new();
    on_path[a] = true;
    let mut stack: Vec<(Vertex, usize)> = vec![(a, 0)];
    while let Some(top) = stack.last_mut() {
        let (x, next) = *top;
        let nbrs = g.neighbors(x);
        if next == nbrs.len() {
            stack.pop();
            on_path[x] = false;
            edges.pop();
            continue;
        }
        top.1 += 1;
        let (y, e) = nbrs[next];
        if on_path[y] {
            continue;
        }
        if y == b {
            if paths.len() == budget {
                return Err(Error::PathBudgetExceeded { limit: budget });
            }
            let mut p = edges.clone();
            p.push(e);
            paths.push(p);
            continue;
        }
        on_path[y] = true;
        edges.push(e);
        stack.push((y, 0));
    }
    Ok(paths)
}

#[derive(Clone, Debug, Serialize)]
pub struct Admissibility {
    pub admissible: bool,
    /// Smallest ρ-length over simple `a`-`b` paths.
    pub shortest: f64,
    /// A path with ρ-length below one, when there is one.
    pub witness: Option<Vec<EdgeId>>,
}

/// Checks `ρ-length(γ) >= 1` for every curve joining `a` and `b`.
pub fn is_admissible(g: &Graph, density: &EdgeDensity, a: Vertex, b: Vertex) -> Result<Admissibility> {
    if g.n() > ADMISSIBILITY_MAX_N {
        return Err(Error::TooLarge { n: g.n(), max: ADMISSIBILITY_MAX_N });
    }
    let paths = simple_paths(g, a, b, PATH_BUDGET)?;
    let mut shortest = f64::INFINITY;
    let mut witness = None;
    for p in paths {
        let len: f64 = p.iter().map(|&e| density.get(e)).sum();
        if len < shortest {
            shortest = len;
            if len < 1.0 - 1e-12 {
                witness = Some(p);
            }
        }
    }
    Ok(Admissibility { admissible: witness.is_none(), shortest, witness })
}

#[derive(PartialEq)]
struct Frontier(f64, Vertex);

impl Eq for Frontier {}

impl Ord for Frontier {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `u(x) = min ρ-length` over curves from `a` to `x` (Dijkstra).
pub fn rho_distances(g: &Graph, density: &EdgeDensity, a: Vertex) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; g.n()];
    let mut heap = BinaryHeap::new();
    dist[a] = 0.0;
    heap.push(Frontier(0.0, a));
    while let Some(Frontier(d, x)) = heap.pop() {
        if d > dist[x] {
            continue;
        }
        for &(y, e) in g.neighbors(x) {
            let nd = d + density.get(e);
            if nd < dist[y] {
                dist[y] = nd;
                heap.push(Frontier(nd, y));
            }
        }
    }
    dist
}

/// Result of [`modulus_bruteforce`].
#[derive(Clone, Debug, Serialize)]
pub struct BruteForceModulus {
    /// Energy of `density`, an admissible density; an upper bound on the
    /// modulus.
    pub value: f64,
    /// Dual objective at termination; a lower bound on the modulus.
    pub lower_bound: f64,
    pub density: EdgeDensity,
    pub paths: usize,
    pub sweeps: usize,
}

/// Duality gap at which [`modulus_bruteforce`] stops.
pub const BRUTEFORCE_TOLERANCE: f64 = 1e-7;

const MAX_SWEEPS: usize = 1_000_000;

/// Minimizes `Σ w ρ²` over `ρ >= 0` with `Σ_{e∈π} ρ(e) >= 1` for every simple
/// `a`-`b` path `π`, straight from the path list.
///
/// Solved in the dual: with one multiplier `λ_π >= 0` per path,
/// `ρ(e) = Σ_{π∋e} λ_π / (2 w(e))` and the dual objective is
/// `Σ λ_π - Σ w ρ²`. Cyclic exact coordinate ascent on the multipliers,
/// each clamped at zero, converges to the optimum. After every sweep the
/// current `ρ` is divided by its shortest path length, which makes it
/// admissible, and the loop stops once that primal value is within
/// [`BRUTEFORCE_TOLERANCE`] of the dual value.
pub fn modulus_bruteforce(g: &Graph, a: Vertex, b: Vertex) -> Result<BruteForceModulus> {
    if g.n() > BRUTEFORCE_MAX_N {
        return Err(Error::TooLarge { n: g.n(), max: BRUTEFORCE_MAX_N });
    }
    let paths = simple_paths(g, a, b, PATH_BUDGET)?;
    let inv_w: Vec<f64> = g.weights().iter().map(|w| 0.5 / w).collect();
    let curvature: Vec<f64> = paths.iter().map(|p| p.iter().map(|&e| inv_w[e]).sum()).collect();
    let mut lambda = vec![0.0; paths.len()];
    let mut rho = vec![0.0; g.m()];
    let mut gap = f64::INFINITY;
    for sweep in 1..=MAX_SWEEPS {
        for (k, p) in paths.iter().enumerate() {
            let len: f64 = p.iter().map(|&e| rho[e]).sum();
            let step = ((1.0 - len) / curvature[k]).max(-lambda[k]);
            if step != 0.0 {
                lambda[k] += step;
                for &e in p {
                    rho[e] += step * inv_w[e];
                }
            }
        }
        let energy: f64 = rho.iter().zip(g.weights()).map(|(r, w)| w * r * r).sum();
        let dual = lambda.iter().sum::<f64>() - energy;
        let shortest = paths
            .iter()
            .map(|p| p.iter().map(|&e| rho[e]).sum::<f64>())
            .fold(f64::INFINITY, f64::min);
        if shortest > 0.0 {
            let primal = energy / (shortest * shortest);
            gap = primal - dual;
            if gap <= BRUTEFORCE_TOLERANCE * primal.max(1.0) {
                let density = EdgeDensity(rho.iter().map(|r| r.max(0.0) / shortest).collect());
                return Ok(BruteForceModulus {
                    value: primal,
                    lower_bound: dual,
                    density,
                    paths: paths.len(),
                    sweeps: sweep,
                });
            }
        }
    }
    Err(Error::NotConverged { iterations: MAX_SWEEPS, gap })
}

/// Comparison of `d² · Mod(a, b)` with the epidemic quasimetric.
#[derive(Clone, Debug, Serialize)]
pub struct ModulusBound {
    pub distance: usize,
    pub modulus: f64,
    /// `d² · Mod(a, b)`
    pub bound: f64,
    pub epidemic: usize,
    /// `|Ω(a, d) ∪ Ω(b, d)|`
    pub union_volume: usize,
    /// Energy of the epidemic density, `|Ω ∪| / d²` on unit weights.
    pub density_energy: f64,
    /// `d² · Mod <= Epidemic`
    pub holds: bool,
    /// `Mod <= E(epidemic density)`
    pub sharper_holds: bool,
    /// `Epidemic - d² · Mod`
    pub slack: f64,
}

pub fn epidemic_modulus_bound(g: &Graph, a: Vertex, b: Vertex) -> Result<ModulusBound> {
    g.check_pair(a, b)?;
    let epi = epidemic(g, a, b)?;
    let modulus = modulus(g, a, b)?;
    let d = epi.distance as f64;
    let bound = d * d * modulus;
    let density_energy = epidemic_density(g, a, b)?.energy(g);
    let tol = 1e-9 * bound.max(1.0);
    Ok(ModulusBound {
        distance: epi.distance,
        modulus,
        bound,
        epidemic: epi.value,
        union_volume: epi.union_volume,
        density_energy,
        holds: bound <= epi.value as f64 + tol,
        sharper_holds: modulus <= density_energy + tol,
        slack: epi.value as f64 - bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete, cycle, path};

    #[test]
    fn gamblers_ruin() {
        let g = path(6).unwrap();
        let bp = BoundaryProblem::new(&g, &[(0, 0.0), (5, 1.0)]).unwrap();
        let h = harmonic_extension(&g, &bp).unwrap();
        for (x, hx) in h.iter().enumerate() {
            assert!((hx - x as f64 / 5.0).abs() < 1e-12);
        }
        assert!((h[3] - 0.6).abs() < 1e-10);
        assert!(harmonic_residual(&g, &h, &bp.interior()) < 1e-10);
    }

    #[test]
    fn constants_and_degenerate_boundaries() {
        let g = complete(4).unwrap();
        let bp = BoundaryProblem::new(&g, &[(1, 2.5)]).unwrap();
        assert!(harmonic_extension(&g, &bp).unwrap().iter().all(|&h| (h - 2.5).abs() < 1e-12));
        assert!(matches!(BoundaryProblem::new(&g, &[]), Err(Error::EmptyBoundary)));
        let all: Vec<_> = (0..4).map(|x| (x, x as f64)).collect();
        let bp = BoundaryProblem::new(&g, &all).unwrap();
        assert_eq!(harmonic_extension(&g, &bp).unwrap(), vec![0.0, 1.0, 2.0, 3.0]);
    }

    #[test]
    fn triangle_capacity() {
        let g = complete(3).unwrap();
        let bp = BoundaryProblem::new(&g, &[(0, 0.0), (1, 1.0)]).unwrap();
        assert!((harmonic_extension(&g, &bp).unwrap()[2] - 0.5).abs() < 1e-12);
        assert!((capacity(&g, 0, 1).unwrap() - 1.5).abs() < 1e-12);
        let u = capacitary_function(&g, 0, 1).unwrap();
        assert!((u[2] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn path_capacity() {
        for n in [2, 4, 9] {
            let g = path(n).unwrap();
            assert!((capacity(&g, 0, n - 1).unwrap() - 1.0 / (n - 1) as f64).abs() < 1e-12);
        }
        let u = capacitary_function(&path(3).unwrap(), 0, 2).unwrap();
        assert!((u[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn rho_length_of_curves() {
        let g = path(4).unwrap();
        let geodesic = Subgraph::from_walk(&g, &[0, 1, 2, 3]).unwrap();
        assert_eq!(rho_length(&EdgeDensity::constant(&g, 1.0), &geodesic), 3.0);
        assert_eq!(rho_length(&EdgeDensity::constant(&g, 0.0), &geodesic), 0.0);
        let constant_curve = Subgraph::from_edges(&g, &[], 2);
        assert_eq!(rho_length(&EdgeDensity::constant(&g, 1.0), &constant_curve), 0.0);
        let p3 = path(3).unwrap();
        let rho = epidemic_density(&p3, 0, 2).unwrap();
        assert_eq!(rho_length(&rho, &Subgraph::from_walk(&p3, &[0, 1, 2]).unwrap()), 1.0);
    }

    #[test]
    fn admissibility_witness() {
        let g = cycle(5).unwrap();
        assert!(is_admissible(&g, &EdgeDensity::constant(&g, 1.0), 0, 2).unwrap().admissible);
        let zero = is_admissible(&g, &EdgeDensity::constant(&g, 0.0), 0, 2).unwrap();
        assert!(!zero.admissible);
        assert_eq!(zero.shortest, 0.0);
        assert!(zero.witness.is_some());
        let big = complete(15).unwrap();
        assert!(matches!(
            is_admissible(&big, &EdgeDensity::constant(&big, 1.0), 0, 1),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn path_budget_is_enforced() {
        let g = complete(8).unwrap();
        assert_eq!(simple_paths(&g, 0, 1, PATH_BUDGET).unwrap().len(), 1957);
        assert!(matches!(simple_paths(&g, 0, 1, 100), Err(Error::PathBudgetExceeded { limit: 100 })));
    }

    #[test]
    fn bruteforce_hand_solved() {
        let p3 = path(3).unwrap();
        let r = modulus_bruteforce(&p3, 0, 2).unwrap();
        assert!((r.value - 0.5).abs() < 1e-7);
        for &v in r.density.values() {
            assert!((v - 0.5).abs() < 1e-6);
        }
        let k3 = complete(3).unwrap();
        assert!((modulus_bruteforce(&k3, 0, 1).unwrap().value - 1.5).abs() < 1e-6);
        let c4 = cycle(4).unwrap();
        assert!((modulus_bruteforce(&c4, 0, 2).unwrap().value - 1.0).abs() < 1e-6);
    }

    #[test]
    fn bruteforce_brackets_the_optimum() {
        let g = complete(6).unwrap();
        let r = modulus_bruteforce(&g, 0, 1).unwrap();
        assert!(r.lower_bound <= 3.0 + 1e-9 && 3.0 <= r.value + 1e-9);
        assert!(is_admissible(&g, &r.density, 0, 1).unwrap().shortest >= 1.0 - 1e-12);
    }

    #[test]
    fn bound_on_complete_graph() {
        let g = complete(5).unwrap();
        let b = epidemic_modulus_bound(&g, 0, 3).unwrap();
        assert!((b.bound - 2.5).abs() < 1e-9);
        assert_eq!(b.epidemic, 20);
        assert!(b.holds && b.sharper_holds);
    }
}
