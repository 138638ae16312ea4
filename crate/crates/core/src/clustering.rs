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

//! Average-linkage agglomerative clustering (AGNES / UPGMA).
//!
//! Cluster ids follow the usual convention: leaves are `0..n`, and the
//! `k`-th merge creates cluster `n + k`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pairs::{format_value, PairMatrix};

pub use crate::karate::{factions as karate_factions, graph as karate_graph};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Merge {
    /// The smaller of the two merged ids.
    pub left: usize,
    pub right: usize,
    pub height: f64,
    pub id: usize,
    pub size: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Dendrogram {
    pub n: usize,
    pub merges: Vec<Merge>,
}

/// Clusters `d` bottom-up, always joining the pair of clusters with the
/// smallest mean pairwise dissimilarity. Ties go to the lexicographically
/// smallest `(left id, right id)`.
///
/// Linkage values are kept as sums over member pairs and divided only for
/// comparison, so integer-valued inputs give exactly reproducible merges.
pub fn agnes(d: &PairMatrix) -> Result<Dendrogram> {
    let n = d.n();
    for i in 0..n {
        for j in 0..n {
            let v = d.get(i, j);
            if !v.is_finite() || v < 0.0 || v != d.get(j, i) || (i == j && v != 0.0) {
                return Err(Error::InvalidDissimilarity { i, j, value: v });
            }
        }
    }
    // active clusters by id; `sums` is indexed by slot
    let mut ids: Vec<usize> = (0..n).collect();
    let mut sizes: Vec<usize> = vec![1; n];
    let mut sums: Vec<Vec<f64>> = (0..n).map(|i| d.row(i).to_vec()).collect();
    let mut merges = Vec::with_capacity(n.saturating_sub(1));
    while ids.len() > 1 {
        let mut best: Option<(f64, (usize, usize), usize, usize)> = None;
        for p in 0..ids.len() {
            for q in p + 1..ids.len() {
                let avg = sums[p][q] / (sizes[p] * sizes[q]) as f64;
                let key = (ids[p].min(ids[q]), ids[p].max(ids[q]));
                let better = match best {
                    None => true,
                    Some((h, k, _, _)) => avg < h || (avg == h && key < k),
                };
                if better {
                    best = Some((avg, key, p, q));
                }
            }
        }
        let (height, (left, right), p, q) = best.expect("at least two clusters");
        let id = n + merges.len();
        let size = sizes[p] + sizes[q];
        merges.push(Merge { left, right, height, id, size });
        // fold q into p, then drop q
        for r in 0..ids.len() {
            let combined = sums[p][r] + sums[q][r];
            sums[p][r] = combined;
            sums[r][p] = combined;
        }
        sums[p][p] = 0.0;
        ids[p] = id;
        sizes[p] = size;
        ids.remove(q);
        sizes.remove(q);
        sums.remove(q);
        for row in &mut sums {
            row.remove(q);
        }
    }
    Ok(Dendrogram { n, merges })
}

/// Cluster label per vertex, `0..k`, numbered by smallest member.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Partition {
    labels: Vec<usize>,
    k: usize,
}

impl Partition {
    /// Labels must be exactly `0..k` for some `k`, each used at least once.
    pub fn new(labels: Vec<usize>) -> Result<Self> {
        let k = labels.iter().max().map_or(0, |m| m + 1);
        let mut used = vec![false; k];
        for &l in &labels {
            used[l] = true;
        }
        if used.iter().any(|u| !u) {
            return Err(Error::PartitionMismatch(format!("labels 0..{k} are not all used")));
        }
        Ok(Partition { labels, k })
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.k];
        for (v, &l) in self.labels.iter().enumerate() {
            out[l].push(v);
        }
        out
    }

    /// True when every cluster of `self` sits inside a cluster of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        self.clusters().iter().all(|c| c.iter().all(|&v| coarser.labels[v] == coarser.labels[c[0]]))
    }

    /// `vertex,label` lines with 1-based vertices.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("vertex,label\n");
        for (v, l) in self.labels.iter().enumerate() {
            let _ = writeln!(out, "{},{}", v + 1, l);
        }
        out
    }
}

/// Undoes the last `k - 1` merges.
pub fn cut(dend: &Dendrogram, k: usize) -> Result<Partition> {
    let n = dend.n;
    if k == 0 || k > n {
        return Err(Error::ClusterCount { k, n });
    }
    let total = n + dend.merges.len();
    let mut parent: Vec<usize> = (0..total).collect();
    for m in &dend.merges[..n - k] {
        parent[m.left] = m.id;
        parent[m.right] = m.id;
    }
    let root = |mut x: usize| {
        while parent[x] != x {
            x = parent[x];
        }
        x
    };
    let mut label_of_root = std::collections::HashMap::new();
    let labels = (0..n)
        .map(|v| {
            let next = label_of_root.len();
            *label_of_root.entry(root(v)).or_insert(next)
        })
        .collect();
    Partition::new(labels)
}

/// Fewest disagreements between two 2-way partitions over both ways of
/// matching their labels.
pub fn mislabel_count(p: &Partition, reference: &Partition) -> Result<usize> {
    if p.k() != 2 || reference.k() != 2 {
        return Err(Error::PartitionMismatch(format!(
            "need two clusters on each side, got {} and {}",
            p.k(),
            reference.k()
        )));
    }
    if p.labels.len() != reference.labels.len() {
        return Err(Error::PartitionMismatch("different vertex counts".into()));
    }
    let differ = p.labels.iter().zip(&reference.labels).filter(|(a, b)| a != b).count();
    Ok(differ.min(p.labels.len() - differ))
}

/// Vertices (0-based) on the wrong side of `reference` under the better
/// label matching.
pub fn mislabeled_vertices(p: &Partition, reference: &Partition) -> Result<Vec<usize>> {
    let count = mislabel_count(p, reference)?;
    let differ: Vec<usize> = (0..p.labels.len()).filter(|&v| p.labels[v] != reference.labels[v]).collect();
    if differ.len() == count {
        Ok(differ)
    } else {
        Ok((0..p.labels.len()).filter(|v| !differ.contains(v)).collect())
    }
}

impl Dendrogram {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("dendrogram serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), message: e.to_string() })
    }

    /// Newick string with 1-based leaf names; a branch is as long as the
    /// height difference between its ends.
    pub fn to_newick(&self, digits: usize) -> String {
        let mut out = String::new();
        match self.merges.last() {
            None => out.push_str("(1)"),
            Some(root) => self.write_newick(&mut out, root.id, root.height, digits),
        }
        out.push(';');
        out
    }

    fn height(&self, id: usize) -> f64 {
        if id < self.n {
            0.0
        } else {
            self.merges[id - self.n].height
        }
    }

    fn write_newick(&self, out: &mut String, id: usize, parent_height: f64, digits: usize) {
        if id < self.n {
            let _ = write!(out, "{}", id + 1);
        } else {
            let m = self.merges[id - self.n];
            out.push('(');
            self.write_newick(out, m.left, m.height, digits);
            out.push(',');
            self.write_newick(out, m.right, m.height, digits);
            out.push(')');
        }
        if id + 1 != self.n + self.merges.len() {
            let _ = write!(out, ":{}", format_value(parent_height - self.height(id), digits));
        }
    }
}
