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

//! Distances and potential theory on finite graphs.
//!
//! The crate computes, for a simple connected weighted graph:
//!
//! * hop distances, metric balls and the volumes of induced subgraphs
//!   ([`graph`]),
//! * the epidemic quasimetric `Epidemic(a, b) = |Ω(a, d)| + |Ω(b, d)|`
//!   ([`epidemic`]),
//! * the Laplacian, its Green operator, effective resistance and unit
//!   current flows ([`electrical`]),
//! * harmonic extensions, capacity and the modulus of the curves joining
//!   two vertices ([`variational`]),
//! * the weighted random walk and Monte Carlo checks of its electrical
//!   identities ([`randomwalk`]),
//! * average-linkage clustering on any dissimilarity table
//!   ([`clustering`]).
//!
//! ```
//! use epidemetric::{electrical, epidemic, generators, variational};
//!
//! let g = generators::complete(5).unwrap();
//! assert_eq!(epidemic::epidemic(&g, 0, 1).unwrap().value, 20);
//! let r = electrical::effective_resistance(&g, 0, 1).unwrap();
//! assert!((r - 0.4).abs() < 1e-12);
//! let m = variational::modulus(&g, 0, 1).unwrap();
//! assert!((m * r - 1.0).abs() < 1e-12);
//! ```
//!
//! The guide in `book/` walks through each module; its code listings are
//! compiled and run as doctests of this crate.

pub mod clustering;
pub mod electrical;
pub mod epidemic;
pub mod error;
pub mod generators;
pub mod graph;
pub mod karate;
pub mod pairs;
pub mod randomwalk;
pub mod variational;
pub mod verify;

pub use crate::error::{Error, Result};
pub use crate::graph::{matrix_power_distances, EdgeId, Graph, Subgraph, Vertex};
pub use crate::pairs::PairMatrix;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/graphs.md")]
    mod graphs {}
    #[doc = include_str!("../../../book/src/epidemic.md")]
    mod epidemic {}
    #[doc = include_str!("../../../book/src/electrical.md")]
    mod electrical {}
    #[doc = include_str!("../../../book/src/variational.md")]
    mod variational {}
    #[doc = include_str!("../../../book/src/random-walks.md")]
    mod random_walks {}
    #[doc = include_str!("../../../book/src/clustering.md")]
    mod clustering {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
