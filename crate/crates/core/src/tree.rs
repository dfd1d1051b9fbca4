//! Explicit unlabeled trees.
//!
//! A [`Tree`] is stored as sorted adjacency lists over dense vertex ids
//! `0..n`. Besides construction and parsing, this module provides the
//! centroid-rooted canonical level sequence used for isomorphism dedup, the
//! components left behind by deleting a vertex, and the per-HDV degree data
//! that the k-NIM conditions are phrased in.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

/// Largest tree accepted by single-tree operations.
pub const MAX_TREE_VERTICES: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("malformed input on line {line}: {reason}")]
    MalformedInput { line: usize, reason: String },
    #[error("vertex {vertex} is out of range for a tree on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("not a tree: {0}")]
    NotATree(String),
    #[error("{what} = {value} exceeds the limit of {limit}")]
    SizeLimitExceeded {
        what: &'static str,
        value: usize,
        limit: usize,
    },
}

/// An unlabeled tree on `1..=64` vertices with normalized adjacency.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tree {
    adj: Vec<Vec<usize>>,
}

impl Tree {
    /// Builds a tree from an edge list, validating that the edges form a
    /// spanning tree on `n` vertices.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Tree, TreeError> {
        if n == 0 {
            return Err(TreeError::NotATree("a tree needs at least one vertex".into()));
        }
        if n > MAX_TREE_VERTICES {
            return Err(TreeError::SizeLimitExceeded {
                what: "vertex count",
                value: n,
                limit: MAX_TREE_VERTICES,
            });
        }
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(TreeError::VertexOutOfRange { vertex: w, n });
                }
            }
        }
        if edges.len() != n - 1 {
            return Err(TreeError::NotATree(format!(
                "expected {} edges for {} vertices, found {}",
                n - 1,
                n,
                edges.len()
            )));
        }
        let mut adj = vec![Vec::new(); n];
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &(u, v) in edges {
            if u == v {
                return Err(TreeError::NotATree(format!("self-loop at vertex {u}")));
            }
            if adj[u].contains(&v) {
                return Err(TreeError::NotATree(format!("parallel edge {u}-{v}")));
            }
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            if ru == rv {
                return Err(TreeError::NotATree(format!("edge {u}-{v} closes a cycle")));
            }
            parent[ru] = rv;
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Tree { adj })
    }

    /// Builds a tree from a level sequence: `levels[0] == 0` is the root and
    /// every later entry is at most one deeper than its predecessor.
    pub fn from_level_sequence(levels: &[usize]) -> Result<Tree, TreeError> {
        if levels.first() != Some(&0) {
            return Err(TreeError::NotATree(
                "level sequence must start at the root".into(),
            ));
        }
        let mut stack: Vec<usize> = vec![0];
        let mut edges = Vec::with_capacity(levels.len().saturating_sub(1));
        for (v, &level) in levels.iter().enumerate().skip(1) {
            if level == 0 || level > stack.len() {
                return Err(TreeError::NotATree(format!(
                    "invalid level {level} at position {v}"
                )));
            }
            stack.truncate(level);
            edges.push((stack[level - 1], v));
            stack.push(v);
        }
        Tree::from_edges(levels.len(), &edges)
    }

    /// Path `P_n`: `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Result<Tree, TreeError> {
        let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        Tree::from_edges(n, &edges)
    }

    /// Star `S_n` on `n` vertices with center `0`.
    pub fn star(n: usize) -> Result<Tree, TreeError> {
        let edges: Vec<_> = (1..n).map(|v| (0, v)).collect();
        Tree::from_edges(n, &edges)
    }

    /// Spider (generalized star) with center `0` and the given leg lengths.
    pub fn spider(legs: &[usize]) -> Result<Tree, TreeError> {
        let mut edges = Vec::new();
        let mut next = 1;
        for &len in legs {
            let mut prev = 0;
            for _ in 0..len {
                edges.push((prev, next));
                prev = next;
                next += 1;
            }
        }
        Tree::from_edges(next, &edges)
    }

    /// Decodes a Prüfer sequence over `0..seq.len() + 2`.
    pub fn from_prufer(seq: &[usize]) -> Result<Tree, TreeError> {
        let n = seq.len() + 2;
        if n > MAX_TREE_VERTICES {
            return Err(TreeError::SizeLimitExceeded {
                what: "tree size",
                value: n,
                limit: MAX_TREE_VERTICES,
            });
        }
        let mut degree = vec![1usize; n];
        for &v in seq {
            if v >= n {
                return Err(TreeError::VertexOutOfRange { vertex: v, n });
            }
            degree[v] += 1;
        }
        let mut leaves: std::collections::BTreeSet<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
        let mut edges = Vec::with_capacity(n - 1);
        for &v in seq {
            let leaf = leaves.pop_first().expect("a Prüfer step always has a leaf");
            edges.push((leaf, v));
            degree[v] -= 1;
            if degree[v] == 1 {
                leaves.insert(v);
            }
        }
        let rest: Vec<usize> = leaves.into_iter().collect();
        edges.push((rest[0], rest[1]));
        Tree::from_edges(n, &edges)
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.n() - 1);
        for (u, list) in self.adj.iter().enumerate() {
            out.extend(list.iter().filter(|&&v| u < v).map(|&v| (u, v)));
        }
        out
    }

    pub fn is_path(&self) -> bool {
        self.max_degree() <= 2
    }

    /// Whether deleting every leaf leaves a path (or nothing).
    pub fn is_caterpillar(&self) -> bool {
        let inner: Vec<usize> = (0..self.n()).filter(|&v| self.degree(v) > 1).collect();
        inner
            .iter()
            .all(|&v| self.adj[v].iter().filter(|&&w| self.degree(w) > 1).count() <= 2)
    }

    pub fn is_hdv(&self, v: usize) -> bool {
        self.degree(v) >= 3
    }

    pub fn check_vertex(&self, v: usize) -> Result<(), TreeError> {
        if v < self.n() {
            Ok(())
        } else {
            Err(TreeError::VertexOutOfRange {
                vertex: v,
                n: self.n(),
            })
        }
    }

    /// BFS distances from `source`.
    pub fn distances_from(&self, source: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n()];
        dist[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(v) = queue.pop_front() {
            for &w in &self.adj[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// The unique path from `a` to `b`, inclusive of both ends.
    pub fn path_between(&self, a: usize, b: usize) -> Vec<usize> {
        let mut parent = vec![usize::MAX; self.n()];
        parent[a] = a;
        let mut queue = VecDeque::from([a]);
        while let Some(v) = queue.pop_front() {
            if v == b {
                break;
            }
            for &w in &self.adj[v] {
                if parent[w] == usize::MAX {
                    parent[w] = v;
                    queue.push_back(w);
                }
            }
        }
        let mut path = vec![b];
        let mut v = b;
        while v != a {
            v = parent[v];
            path.push(v);
        }
        path.reverse();
        path
    }

    /// Components of `T - v`, one per neighbor of `v`.
    pub fn delete_vertex(&self, v: usize) -> Result<VertexCut, TreeError> {
        self.check_vertex(v)?;
        let mut components = Vec::with_capacity(self.degree(v));
        for &start in &self.adj[v] {
            let mut comp = vec![start];
            let mut stack = vec![(start, v)];
            while let Some((x, from)) = stack.pop() {
                for &y in &self.adj[x] {
                    if y != from {
                        comp.push(y);
                        stack.push((y, x));
                    }
                }
            }
            comp.sort_unstable();
            components.push(comp);
        }
        Ok(VertexCut {
            vertex: v,
            components,
        })
    }

    /// One entry per high degree vertex (degree at least 3), in vertex order.
    pub fn hdv_profile(&self) -> Vec<HdvInfo> {
        (0..self.n())
            .filter(|&v| self.is_hdv(v))
            .map(|v| {
                let degree = self.degree(v);
                let hdv_degree = self.adj[v].iter().filter(|&&w| self.is_hdv(w)).count();
                let cut = self.delete_vertex(v).expect("vertex in range");
                HdvInfo {
                    vertex: v,
                    degree,
                    hdv_degree,
                    delta: degree - hdv_degree,
                    nonsingleton_components: cut.nonsingleton_count(),
                }
            })
            .collect()
    }

    /// Serializes as the edge-list text format accepted by [`parse_edge_list`].
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{}\n", self.n());
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    /// Centroid vertices: one, or two adjacent ones.
    pub fn centroids(&self) -> Vec<usize> {
        let n = self.n();
        let order = self.dfs_order(0);
        let mut parent = vec![usize::MAX; n];
        for &v in &order {
            for &w in &self.adj[v] {
                if w != parent[v] {
                    parent[w] = v;
                }
            }
        }
        let mut size = vec![1usize; n];
        for &v in order.iter().rev() {
            if parent[v] != usize::MAX {
                size[parent[v]] += size[v];
            }
        }
        let mut out = Vec::new();
        for v in 0..n {
            let mut largest = n - size[v];
            for &w in &self.adj[v] {
                if w != parent[v] {
                    largest = largest.max(size[w]);
                }
            }
            if 2 * largest <= n {
                out.push(v);
            }
        }
        out
    }

    /// Preorder of an iterative DFS from `root`.
    fn dfs_order(&self, root: usize) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.n());
        let mut seen = vec![false; self.n()];
        let mut stack = vec![root];
        seen[root] = true;
        while let Some(v) = stack.pop() {
            order.push(v);
            for &w in self.adj[v].iter().rev() {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        order
    }

    /// Lexicographically largest level sequence of the tree rooted at `root`
    /// (children ordered by decreasing subsequence).
    pub fn rooted_level_sequence(&self, root: usize) -> Vec<u8> {
        fn build(t: &Tree, v: usize, parent: usize, depth: u8) -> Vec<u8> {
            let mut children: Vec<Vec<u8>> = t.adj[v]
                .iter()
                .filter(|&&w| w != parent)
                .map(|&w| build(t, w, v, depth + 1))
                .collect();
            children.sort_unstable_by(|a, b| b.cmp(a));
            let mut seq = Vec::with_capacity(1 + children.iter().map(Vec::len).sum::<usize>());
            seq.push(depth);
            for c in children {
                seq.extend(c);
            }
            seq
        }
        build(self, root, usize::MAX, 0)
    }

    /// Canonical code: the largest centroid-rooted canonical level sequence.
    pub fn canonical_code(&self) -> CanonicalCode {
        let levels = self
            .centroids()
            .into_iter()
            .map(|c| self.rooted_level_sequence(c))
            .max()
            .expect("every tree has a centroid");
        CanonicalCode { levels }
    }

    pub fn is_isomorphic(&self, other: &Tree) -> bool {
        self.n() == other.n() && self.canonical_code() == other.canonical_code()
    }
}

/// Parses the edge-list text format: the first non-comment line holds `n`,
/// each following non-empty line holds one edge `u v`. Lines starting with
/// `#` are ignored.
pub fn parse_edge_list(text: &str) -> Result<Tree, TreeError> {
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let parse = |tok: &str| {
            tok.parse::<usize>().map_err(|_| TreeError::MalformedInput {
                line: line_no,
                reason: format!("`{tok}` is not a vertex id"),
            })
        };
        match n {
            None => {
                if tokens.len() != 1 {
                    return Err(TreeError::MalformedInput {
                        line: line_no,
                        reason: "expected the vertex count alone on the first line".into(),
                    });
                }
                n = Some(parse(tokens[0])?);
            }
            Some(count) => {
                if tokens.len() != 2 {
                    return Err(TreeError::MalformedInput {
                        line: line_no,
                        reason: format!("expected two vertex ids, found {}", tokens.len()),
                    });
                }
                let (u, v) = (parse(tokens[0])?, parse(tokens[1])?);
                for w in [u, v] {
                    if w >= count {
                        return Err(TreeError::VertexOutOfRange { vertex: w, n: count });
                    }
                }
                edges.push((u, v));
            }
        }
    }
    let n = n.ok_or(TreeError::MalformedInput {
        line: 0,
        reason: "missing vertex count".into(),
    })?;
    Tree::from_edges(n, &edges)
}

/// Components of `T - v`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexCut {
    pub vertex: usize,
    pub components: Vec<Vec<usize>>,
}

impl VertexCut {
    /// Component sizes, largest first.
    pub fn component_sizes(&self) -> Vec<usize> {
        let mut sizes: Vec<usize> = self.components.iter().map(Vec::len).collect();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        sizes
    }

    pub fn nonsingleton_count(&self) -> usize {
        self.components.iter().filter(|c| c.len() > 1).count()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HdvInfo {
    pub vertex: usize,
    pub degree: usize,
    /// Number of neighbors that are themselves HDVs.
    pub hdv_degree: usize,
    /// `degree - hdv_degree`.
    pub delta: usize,
    pub nonsingleton_components: usize,
}

/// Centroid-rooted canonical level sequence; equal codes mean isomorphic
/// trees.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalCode {
    levels: Vec<u8>,
}

impl CanonicalCode {
    pub fn levels(&self) -> &[u8] {
        &self.levels
    }

    pub fn n(&self) -> usize {
        self.levels.len()
    }

    pub fn to_tree(&self) -> Tree {
        let levels: Vec<usize> = self.levels.iter().map(|&l| l as usize).collect();
        Tree::from_level_sequence(&levels).expect("canonical codes are valid level sequences")
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.levels.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for CanonicalCode {
    type Err = TreeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let levels = s
            .split(',')
            .map(|tok| {
                tok.trim().parse::<u8>().map_err(|_| TreeError::MalformedInput {
                    line: 1,
                    reason: format!("`{tok}` is not a level"),
                })
            })
            .collect::<Result<Vec<u8>, _>>()?;
        let as_usize: Vec<usize> = levels.iter().map(|&l| l as usize).collect();
        let tree = Tree::from_level_sequence(&as_usize)?;
        let code = tree.canonical_code();
        if code.levels != levels {
            return Err(TreeError::MalformedInput {
                line: 1,
                reason: "level sequence is not in canonical form".into(),
            });
        }
        Ok(code)
    }
}
