//! Chordality of the 1-skeleton.
//!
//! Recognition uses maximum cardinality search followed by a perfect
//! elimination ordering check. A separate search extracts an induced cycle
//! of length at least four when the graph is not chordal.

use std::collections::VecDeque;

use serde::Serialize;

use crate::complex::{SimplicialComplex, VertexId};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChordalityReport {
    pub chordal: bool,
    /// An induced cycle of length >= 4, listed along the cycle.
    pub induced_cycle: Option<Vec<VertexId>>,
}

/// Adjacency matrix of the 1-skeleton over ground indices.
struct Graph {
    labels: Vec<VertexId>,
    adj: Vec<Vec<bool>>,
}

impl Graph {
    fn of(k: &SimplicialComplex) -> Self {
        let labels = k.ground().to_vec();
        let n = labels.len();
        let mut adj = vec![vec![false; n]; n];
        for (u, v) in k.edges() {
            let a = labels.binary_search(&u).unwrap();
            let b = labels.binary_search(&v).unwrap();
            adj[a][b] = true;
            adj[b][a] = true;
        }
        Graph { labels, adj }
    }

    fn n(&self) -> usize {
        self.labels.len()
    }

    fn neighbours(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().enumerate().filter(|(_, &e)| e).map(|(w, _)| w)
    }

    /// Maximum cardinality search; returns vertices in visiting order.
    fn mcs_order(&self) -> Vec<usize> {
        let n = self.n();
        let mut weight = vec![0usize; n];
        let mut visited = vec![false; n];
        let mut order = Vec::with_capacity(n);
        for _ in 0..n {
            let v = (0..n).filter(|&v| !visited[v]).max_by_key(|&v| (weight[v], std::cmp::Reverse(v))).unwrap();
            visited[v] = true;
            order.push(v);
            for w in self.neighbours(v) {
                if !visited[w] {
                    weight[w] += 1;
                }
            }
        }
        order
    }

    /// The reverse of an MCS order is a perfect elimination ordering iff
    /// the graph is chordal.
    fn is_chordal(&self) -> bool {
        let order = self.mcs_order();
        let mut position = vec![0usize; self.n()];
        for (i, &v) in order.iter().enumerate() {
            position[v] = i;
        }
        for (i, &v) in order.iter().enumerate() {
            // Earlier neighbours of v must form a clique; it suffices that
            // they are all adjacent to the latest of them.
            let earlier: Vec<usize> = self.neighbours(v).filter(|&w| position[w] < i).collect();
            if let Some(&parent) = earlier.iter().max_by_key(|&&w| position[w]) {
                if earlier.iter().any(|&w| w != parent && !self.adj[w][parent]) {
                    return false;
                }
            }
        }
        true
    }

    /// For each vertex v and non-adjacent neighbours a < b, a shortest a–b
    /// path avoiding the rest of N[v] closes an induced cycle through v.
    fn induced_cycle(&self) -> Option<Vec<usize>> {
        let n = self.n();
        for v in 0..n {
            let nbrs: Vec<usize> = self.neighbours(v).collect();
            for (x, &a) in nbrs.iter().enumerate() {
                for &b in &nbrs[x + 1..] {
                    if self.adj[a][b] {
                        continue;
                    }
                    let mut blocked = vec![false; n];
                    blocked[v] = true;
                    for &w in &nbrs {
                        if w != a && w != b {
                            blocked[w] = true;
                        }
                    }
                    if let Some(path) = self.shortest_path(a, b, &blocked) {
                        let mut cycle = vec![v];
                        cycle.extend(path);
                        return Some(cycle);
                    }
                }
            }
        }
        None
    }

    fn shortest_path(&self, from: usize, to: usize, blocked: &[bool]) -> Option<Vec<usize>> {
        let n = self.n();
        let mut prev = vec![usize::MAX; n];
        let mut queue = VecDeque::from([from]);
        prev[from] = from;
        while let Some(u) = queue.pop_front() {
            if u == to {
                let mut path = vec![to];
                let mut cur = to;
                while cur != from {
                    cur = prev[cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            for w in self.neighbours(u) {
                if !blocked[w] && prev[w] == usize::MAX {
                    prev[w] = u;
                    queue.push_back(w);
                }
            }
        }
        None
    }
}

/// Decides whether the graph of 0- and 1-faces is chordal; on failure
/// returns one induced cycle of length >= 4.
pub fn one_skeleton_chordal(k: &SimplicialComplex) -> ChordalityReport {
    let g = Graph::of(k);
    if g.is_chordal() {
        return ChordalityReport { chordal: true, induced_cycle: None };
    }
    let cycle = g.induced_cycle().expect("non-chordal graphs contain an induced cycle of length >= 4");
    ChordalityReport { chordal: false, induced_cycle: Some(cycle.into_iter().map(|i| g.labels[i]).collect()) }
}

/// Brute-force induced-cycle search, exposed for cross-checking the PEO test.
pub fn find_induced_cycle(k: &SimplicialComplex) -> Option<Vec<VertexId>> {
    let g = Graph::of(k);
    g.induced_cycle().map(|c| c.into_iter().map(|i| g.labels[i]).collect())
}
