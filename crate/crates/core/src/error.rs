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

use thiserror::Error;

/// Everything that can go wrong in this crate.
///
/// Construction errors carry a `line` that is the 1-based line number of
/// text input, or the 1-based position in the edge slice when the graph was
/// built programmatically.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("input contains no edges")]
    Empty,

    #[error("line {line}: self-loop at vertex {vertex}")]
    SelfLoop { line: usize, vertex: usize },

    #[error("line {line}: duplicate edge {{{u}, {v}}}")]
    DuplicateEdge { line: usize, u: usize, v: usize },

    #[error("line {line}: edge weight {weight} is not strictly positive")]
    NonPositiveWeight { line: usize, weight: f64 },

    #[error("graph is disconnected: vertex {unreached} is not reachable from vertex {reached}")]
    Disconnected { reached: usize, unreached: usize },

    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("operation needs two distinct vertices, got {0} twice")]
    SameVertex(usize),

    #[error("density on edge {edge} is {value}; densities must be finite and nonnegative")]
    InvalidDensity { edge: usize, value: f64 },

    #[error("boundary set is empty")]
    EmptyBoundary,

    #[error("path enumeration exceeded its budget of {limit} paths")]
    PathBudgetExceeded { limit: usize },

    #[error("graph has {n} vertices, this routine accepts at most {max}")]
    TooLarge { n: usize, max: usize },

    #[error("solver did not converge after {iterations} iterations (gap {gap:e})")]
    NotConverged { iterations: usize, gap: f64 },

    #[error("symmetric eigensolver did not converge")]
    Eigensolver,

    #[error("{aborted} of {trials} random-walk trials hit the step cap; raise max_steps")]
    TooManyAborts { aborted: u64, trials: u64 },

    #[error("invalid walk configuration: {0}")]
    WalkConfig(String),

    #[error("dissimilarity entry ({i}, {j}) = {value} is invalid")]
    InvalidDissimilarity { i: usize, j: usize, value: f64 },

    #[error("cluster count {k} outside 1..={n}")]
    ClusterCount { k: usize, n: usize },

    #[error("partitions are not comparable: {0}")]
    PartitionMismatch(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
