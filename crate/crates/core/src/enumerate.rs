//! Streaming enumeration of unlabeled free trees.
//!
//! Rooted trees are generated as canonical level sequences in decreasing
//! lexicographic order (Beyer–Hedetniemi successor rule). A rooted sequence
//! is emitted only when its root is a centroid and, for bicentroidal trees,
//! when it is the larger of the two centroid rootings, so each isomorphism
//! class appears exactly once and nothing needs to be remembered between
//! items.

use crate::tree::{Tree, TreeError};

/// Largest vertex count accepted by [`enumerate_free_trees`].
pub const MAX_ENUMERATION_VERTICES: usize = 20;

/// Iterator over one representative per isomorphism class of trees on `n`
/// vertices.
pub fn enumerate_free_trees(n: usize) -> Result<FreeTrees, TreeError> {
    if n == 0 {
        return Err(TreeError::NotATree("a tree needs at least one vertex".into()));
    }
    if n > MAX_ENUMERATION_VERTICES {
        return Err(TreeError::SizeLimitExceeded {
            what: "enumeration size",
            value: n,
            limit: MAX_ENUMERATION_VERTICES,
        });
    }
    Ok(FreeTrees {
        n,
        levels: (0..n).collect(),
        exhausted: false,
    })
}

#[derive(Clone, Debug)]
pub struct FreeTrees {
    n: usize,
    levels: Vec<usize>,
    exhausted: bool,
}

impl FreeTrees {
    /// Advances `levels` to the next canonical rooted level sequence.
    fn advance(&mut self) {
        // p: last position not attached directly to the root.
        let Some(p) = (1..self.n).rev().find(|&i| self.levels[i] > 1) else {
            self.exhausted = true;
            return;
        };
        let q = (0..p)
            .rev()
            .find(|&i| self.levels[i] == self.levels[p] - 1)
            .expect("a deeper vertex always has an ancestor");
        let period = p - q;
        for i in p..self.n {
            self.levels[i] = self.levels[i - period];
        }
    }

    /// Whether the current rooted sequence is the canonical centroid rooting
    /// of its free tree.
    fn is_free_canonical(&self) -> Option<Tree> {
        let n = self.n;
        let mut largest = 0;
        let mut largest_at = 0;
        let mut start = 1;
        while start < n {
            let end = (start + 1..n).find(|&i| self.levels[i] == 1).unwrap_or(n);
            if end - start > largest {
                largest = end - start;
                largest_at = start;
            }
            start = end;
        }
        if 2 * largest > n {
            return None;
        }
        let tree = Tree::from_level_sequence(&self.levels).expect("generated sequences are valid");
        if 2 * largest == n {
            // Bicentroidal: the other centroid is the root of the big branch.
            let other = tree.rooted_level_sequence(largest_at);
            let own: Vec<u8> = self.levels.iter().map(|&l| l as u8).collect();
            if other > own {
                return None;
            }
        }
        Some(tree)
    }
}

impl Iterator for FreeTrees {
    type Item = Tree;

    fn next(&mut self) -> Option<Tree> {
        while !self.exhausted {
            let candidate = self.is_free_canonical();
            self.advance();
            if candidate.is_some() {
                return candidate;
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn small_counts() {
        let counts: Vec<usize> = (1..=10)
            .map(|n| enumerate_free_trees(n).unwrap().count())
            .collect();
        assert_eq!(counts, vec![1, 1, 1, 2, 3, 6, 11, 23, 47, 106]);
    }

    #[test]
    fn emitted_trees_carry_their_canonical_code() {
        for n in 1..=11 {
            let mut seen = HashSet::new();
            for t in enumerate_free_trees(n).unwrap() {
                assert_eq!(t.n(), n);
                // Vertex ids follow the emitted level sequence, rooted at 0.
                let code = t.canonical_code();
                assert_eq!(code.levels(), t.rooted_level_sequence(0).as_slice());
                assert!(seen.insert(code));
            }
        }
    }

    #[test]
    fn size_limits() {
        assert!(matches!(
            enumerate_free_trees(21),
            Err(TreeError::SizeLimitExceeded { .. })
        ));
        assert!(enumerate_free_trees(0).is_err());
    }
}
