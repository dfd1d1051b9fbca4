//! Skeleton signatures of NIM trees.
//!
//! A NIM tree that is not a path is a caterpillar whose HDVs all lie on one
//! spine. Reading the spine from one extreme HDV to the other gives maximal
//! runs of adjacent HDVs separated by bridges (stretches of degree-2
//! vertices, measured in edges between the flanking HDVs). Together with the
//! pendant count of every HDV and the lengths of the two end tails this
//! determines the tree up to isomorphism.
//!
//! Contracting every bridge to a single bridge point, every tail to a leaf,
//! and trimming each HDV to the least degree a NIM tree allows yields the
//! skeleton (molecule) of the tree; see [`SkeletonSignature::skeleton`].

use serde::Serialize;

use crate::classify::{classify_k_nim, ClassifyError};
use crate::tree::Tree;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpineBlock {
    /// Adjacent HDVs; `pendants[i]` counts leaves hanging from the `i`-th.
    Run { pendants: Vec<usize> },
    /// Distance in edges between the HDVs on either side (at least 2; a
    /// length-2 bridge is a single bridge point).
    Bridge { length: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SkeletonSignature {
    pub is_path: bool,
    pub vertices: usize,
    /// Length of the path hanging beyond the first HDV, or 0 when every
    /// non-spine neighbor of that HDV is a leaf.
    pub head_tail: usize,
    pub blocks: Vec<SpineBlock>,
    pub end_tail: usize,
}

/// Counts carried by a skeleton: vertices, variable HDVs (degree at least 4)
/// and bridge points (one more than the number of HDV runs).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SkeletonMarks {
    pub vertices: usize,
    pub variable_hdvs: usize,
    pub bridge_points: usize,
}

impl SkeletonSignature {
    fn path(n: usize) -> Self {
        SkeletonSignature {
            is_path: true,
            vertices: n,
            head_tail: 0,
            blocks: Vec::new(),
            end_tail: 0,
        }
    }

    fn reversed(&self) -> Self {
        let blocks = self
            .blocks
            .iter()
            .rev()
            .map(|b| match b {
                SpineBlock::Run { pendants } => SpineBlock::Run {
                    pendants: pendants.iter().rev().copied().collect(),
                },
                bridge => bridge.clone(),
            })
            .collect();
        SkeletonSignature {
            is_path: self.is_path,
            vertices: self.vertices,
            head_tail: self.end_tail,
            blocks,
            end_tail: self.head_tail,
        }
    }

    fn canonical(self) -> Self {
        let rev = self.reversed();
        self.min(rev)
    }

    /// Whether reading the spine backwards gives the same signature.
    pub fn is_symmetric(&self) -> bool {
        *self == self.reversed()
    }

    /// Degree of every HDV in spine order.
    pub fn hdv_degrees(&self) -> Vec<usize> {
        let mut degrees = Vec::new();
        let runs: Vec<&Vec<usize>> = self
            .blocks
            .iter()
            .filter_map(|b| match b {
                SpineBlock::Run { pendants } => Some(pendants),
                SpineBlock::Bridge { .. } => None,
            })
            .collect();
        let total: usize = runs.iter().map(|r| r.len()).sum();
        let mut index = 0;
        for pendants in runs {
            for &p in pendants {
                // Spine neighbors: previous and next vertex on the spine,
                // plus a tail at either extreme.
                let mut spine = 0;
                if index > 0 {
                    spine += 1;
                }
                if index + 1 < total {
                    spine += 1;
                }
                if index == 0 && self.head_tail > 0 {
                    spine += 1;
                }
                if index + 1 == total && self.end_tail > 0 {
                    spine += 1;
                }
                degrees.push(p + spine);
                index += 1;
            }
        }
        degrees
    }

    pub fn marks(&self) -> SkeletonMarks {
        let runs = self
            .blocks
            .iter()
            .filter(|b| matches!(b, SpineBlock::Run { .. }))
            .count();
        SkeletonMarks {
            vertices: self.vertices,
            variable_hdvs: self.hdv_degrees().iter().filter(|&&d| d >= 4).count(),
            bridge_points: if self.is_path { 0 } else { runs + 1 },
        }
    }

    /// The skeleton: bridges contracted to bridge points, tails to leaves,
    /// and every HDV trimmed to the least degree it can have (3 or 4 for a
    /// lone HDV depending on whether it is variable, 4 at the ends of a
    /// longer run and 5 inside it).
    pub fn skeleton(&self) -> SkeletonSignature {
        if self.is_path {
            return self.clone();
        }
        let degrees = self.hdv_degrees();
        let total = degrees.len();
        let mut index = 0;
        let mut blocks = Vec::with_capacity(self.blocks.len());
        for block in &self.blocks {
            match block {
                SpineBlock::Bridge { .. } => blocks.push(SpineBlock::Bridge { length: 2 }),
                SpineBlock::Run { pendants } => {
                    let len = pendants.len();
                    let mut trimmed = Vec::with_capacity(len);
                    for pos in 0..len {
                        let min_degree = if len == 1 {
                            if degrees[index] >= 4 {
                                4
                            } else {
                                3
                            }
                        } else if pos == 0 || pos + 1 == len {
                            4
                        } else {
                            5
                        };
                        let core = usize::from(index > 0) + usize::from(index + 1 < total);
                        trimmed.push(min_degree - core);
                        index += 1;
                    }
                    blocks.push(SpineBlock::Run { pendants: trimmed });
                }
            }
        }
        let mut sig = SkeletonSignature {
            is_path: false,
            vertices: 0,
            head_tail: 0,
            blocks,
            end_tail: 0,
        };
        sig.vertices = sig.count_vertices();
        sig.canonical()
    }

    fn count_vertices(&self) -> usize {
        if self.is_path {
            return self.vertices;
        }
        let mut n = 0;
        for block in &self.blocks {
            match block {
                SpineBlock::Run { pendants } => n += pendants.len() + pendants.iter().sum::<usize>(),
                SpineBlock::Bridge { length } => n += length - 1,
            }
        }
        n + self.head_tail + self.end_tail
    }

    /// A tree with this signature. Vertex ids follow the spine.
    pub fn to_tree(&self) -> Tree {
        if self.is_path {
            return Tree::path(self.vertices).expect("signature sizes are valid");
        }
        let mut b = Builder::default();
        let mut prev_hdv: Option<usize> = None;
        let mut bridge = 1;
        for block in &self.blocks {
            match block {
                SpineBlock::Bridge { length } => bridge = *length,
                SpineBlock::Run { pendants } => {
                    for &p in pendants {
                        let v = match prev_hdv {
                            None => {
                                let v = b.vertex();
                                b.hang_path(v, self.head_tail);
                                v
                            }
                            Some(u) => {
                                let end = b.hang_path(u, bridge);
                                bridge = 1;
                                end
                            }
                        };
                        for _ in 0..p {
                            b.hang_path(v, 1);
                        }
                        prev_hdv = Some(v);
                    }
                }
            }
        }
        b.hang_path(prev_hdv.expect("non-path signatures have a run"), self.end_tail);
        Tree::from_edges(b.n, &b.edges).expect("signatures describe trees")
    }
}

#[derive(Default)]
struct Builder {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Builder {
    fn vertex(&mut self) -> usize {
        self.n += 1;
        self.n - 1
    }

    /// Appends a path of `len` new vertices below `from`; returns its far end.
    fn hang_path(&mut self, from: usize, len: usize) -> usize {
        let mut prev = from;
        for _ in 0..len {
            let v = self.vertex();
            self.edges.push((prev, v));
            prev = v;
        }
        prev
    }
}

/// Signature of a NIM tree.
pub fn skeleton_signature(t: &Tree) -> Result<SkeletonSignature, ClassifyError> {
    if !classify_k_nim(t, 1)?.is_k_nim() {
        return Err(ClassifyError::NotNimTree);
    }
    if t.is_path() {
        return Ok(SkeletonSignature::path(t.n()));
    }
    let hdvs: Vec<usize> = (0..t.n()).filter(|&v| t.is_hdv(v)).collect();
    let farthest = |from: usize| {
        let d = t.distances_from(from);
        *hdvs
            .iter()
            .max_by_key(|&&v| (d[v], std::cmp::Reverse(v)))
            .expect("a non-path tree has an HDV")
    };
    let a = farthest(hdvs[0]);
    let b = farthest(a);
    let spine = t.path_between(a, b);
    let on_spine = {
        let mut mask = vec![false; t.n()];
        for &v in &spine {
            mask[v] = true;
        }
        mask
    };
    // Length of the path hanging from `hdv` through `first`.
    let branch_len = |hdv: usize, first: usize| {
        let (mut prev, mut cur, mut len) = (hdv, first, 1);
        while let Some(&next) = t.neighbors(cur).iter().find(|&&w| w != prev) {
            prev = cur;
            cur = next;
            len += 1;
        }
        len
    };
    let mut tails = [0usize; 2];
    let mut blocks = Vec::new();
    let mut run: Vec<usize> = Vec::new();
    let mut last_hdv_pos: Option<usize> = None;
    for (pos, &v) in spine.iter().enumerate() {
        if !t.is_hdv(v) {
            continue;
        }
        if let Some(last) = last_hdv_pos {
            if pos - last > 1 {
                blocks.push(SpineBlock::Run {
                    pendants: std::mem::take(&mut run),
                });
                blocks.push(SpineBlock::Bridge { length: pos - last });
            }
        }
        let mut pendants = 0;
        for &w in t.neighbors(v) {
            if on_spine[w] {
                continue;
            }
            if t.degree(w) == 1 {
                pendants += 1;
            } else {
                let len = branch_len(v, w);
                // Only the extreme HDVs carry long branches in a NIM tree.
                let slot = if pos == 0 && tails[0] == 0 { 0 } else { 1 };
                tails[slot] = len;
            }
        }
        run.push(pendants);
        last_hdv_pos = Some(pos);
    }
    blocks.push(SpineBlock::Run { pendants: run });
    let sig = SkeletonSignature {
        is_path: false,
        vertices: t.n(),
        head_tail: tails[0],
        blocks,
        end_tail: tails[1],
    };
    Ok(sig.canonical())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(p: &[usize]) -> SpineBlock {
        SpineBlock::Run { pendants: p.to_vec() }
    }

    #[test]
    fn path_signature() {
        let sig = skeleton_signature(&Tree::path(8).unwrap()).unwrap();
        assert!(sig.is_path);
        assert_eq!(sig.vertices, 8);
        assert_eq!(sig.to_tree().n(), 8);
    }

    #[test]
    fn broom_signature() {
        let broom = Tree::spider(&[2, 1, 1, 1]).unwrap();
        let sig = skeleton_signature(&broom).unwrap();
        assert_eq!(sig.blocks, vec![run(&[3])]);
        assert_eq!((sig.head_tail, sig.end_tail), (0, 2));
        assert_eq!(sig.hdv_degrees(), vec![4]);
        assert_eq!(
            sig.marks(),
            SkeletonMarks {
                vertices: 6,
                variable_hdvs: 1,
                bridge_points: 2
            }
        );
        // Skeleton: the star S5.
        let skel = sig.skeleton();
        assert_eq!(skel.blocks, vec![run(&[4])]);
        assert!(skel.to_tree().is_isomorphic(&Tree::star(5).unwrap()));
    }

    #[test]
    fn double_broom_signature() {
        let mut edges = vec![(0, 1), (1, 2)];
        for leaf in 3..6 {
            edges.push((0, leaf));
        }
        for leaf in 6..9 {
            edges.push((2, leaf));
        }
        let t = Tree::from_edges(9, &edges).unwrap();
        let sig = skeleton_signature(&t).unwrap();
        assert_eq!(
            sig.blocks,
            vec![run(&[3]), SpineBlock::Bridge { length: 2 }, run(&[3])]
        );
        assert!(sig.is_symmetric());
        assert_eq!(sig.marks().bridge_points, 3);
        assert_eq!(sig.skeleton().vertices, 9);
    }

    #[test]
    fn rejects_non_nim_trees() {
        let double_star = Tree::from_edges(6, &[(0, 1), (0, 2), (0, 3), (1, 4), (1, 5)]).unwrap();
        assert_eq!(skeleton_signature(&double_star), Err(ClassifyError::NotNimTree));
    }

    #[test]
    fn round_trips_and_orientation_invariance() {
        for n in 1..=13 {
            for t in crate::enumerate::enumerate_free_trees(n).unwrap() {
                let Ok(sig) = skeleton_signature(&t) else { continue };
                let rebuilt = sig.to_tree();
                assert!(rebuilt.is_isomorphic(&t), "{sig:?}");
                assert_eq!(skeleton_signature(&rebuilt).unwrap(), sig);
                assert_eq!(sig.vertices, n);
                let skel = sig.skeleton();
                assert_eq!(skeleton_signature(&skel.to_tree()).unwrap(), skel);
                assert_eq!(skel.marks().variable_hdvs, sig.marks().variable_hdvs);
                assert_eq!(skel.marks().bridge_points, sig.marks().bridge_points);
            }
        }
    }
}
