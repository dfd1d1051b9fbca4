//! Path cover number, residual path maximization and maximum multiplicity.
//!
//! For a tree `T`, the largest multiplicity `M(T)` an eigenvalue can reach
//! over the symmetric matrices with graph `T` equals the path cover number
//! `P(T)`, which also equals `Δ(T)`, the maximum of `p - q` over vertex sets
//! `Q` of size `q` whose removal leaves a forest of `p` paths. `P(T)` is
//! computed by a linear-time greedy; `Δ(T)` by exhaustive subset search on
//! small trees, which serves as the oracle for the greedy.

use serde::Serialize;

use crate::tree::{HdvInfo, Tree, TreeError};

/// Largest tree accepted by [`delta_brute_force`].
pub const MAX_BRUTE_FORCE_VERTICES: usize = 16;

/// A minimum cover of the vertices by vertex-disjoint paths, each path listed
/// end to end. Paths are ordered by their smallest vertex.
pub fn path_cover(t: &Tree) -> Vec<Vec<usize>> {
    let n = t.n();
    // Root at 0; children are processed before parents.
    let mut order = Vec::with_capacity(n);
    let mut parent = vec![usize::MAX; n];
    let mut stack = vec![0];
    parent[0] = 0;
    while let Some(v) = stack.pop() {
        order.push(v);
        for &w in t.neighbors(v) {
            if parent[w] == usize::MAX {
                parent[w] = v;
                stack.push(w);
            }
        }
    }
    // linked[v]: chosen edges from v down to its children (0, 1 or 2).
    let mut linked = vec![0u8; n];
    let mut chosen: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &v in order.iter().rev() {
        for &c in t.neighbors(v) {
            if c == parent[v] || parent[c] != v || linked[v] == 2 {
                continue;
            }
            // A child can still extend upward when its own path ends at it.
            if linked[c] < 2 {
                linked[v] += 1;
                chosen[v].push(c);
                chosen[c].push(v);
            }
        }
    }
    let mut seen = vec![false; n];
    let mut paths = Vec::new();
    for start in 0..n {
        if seen[start] || chosen[start].len() == 2 {
            continue;
        }
        let mut path = vec![start];
        seen[start] = true;
        let mut prev = usize::MAX;
        let mut cur = start;
        while let Some(&next) = chosen[cur].iter().find(|&&w| w != prev) {
            path.push(next);
            seen[next] = true;
            prev = cur;
            cur = next;
        }
        paths.push(path);
    }
    paths.sort_by_key(|p| *p.iter().min().expect("paths are non-empty"));
    paths
}

/// `P(T)`: the minimum number of vertex-disjoint paths covering `T`.
pub fn path_cover_number(t: &Tree) -> usize {
    path_cover(t).len()
}

/// `M(T)`, the maximum eigenvalue multiplicity over matrices with graph `T`.
/// It coincides with [`path_cover_number`].
pub fn max_multiplicity(t: &Tree) -> usize {
    path_cover_number(t)
}

/// `p - q` for the vertex set `q_set`, or `None` when `T - Q` is not a
/// disjoint union of paths.
pub fn residual_path_value(t: &Tree, q_set: &[usize]) -> Result<Option<i64>, TreeError> {
    let mut mask = 0u64;
    for &v in q_set {
        t.check_vertex(v)?;
        mask |= 1 << v;
    }
    let nbrs = neighbor_masks(t);
    Ok(residual_value_mask(&nbrs, t.n(), mask))
}

fn neighbor_masks(t: &Tree) -> Vec<u64> {
    (0..t.n())
        .map(|v| t.neighbors(v).iter().fold(0u64, |m, &w| m | (1 << w)))
        .collect()
}

fn residual_value_mask(nbrs: &[u64], n: usize, q: u64) -> Option<i64> {
    let mut vertices = 0i64;
    let mut degree_sum = 0i64;
    for (v, &nb) in nbrs.iter().enumerate().take(n) {
        if q & (1 << v) != 0 {
            continue;
        }
        let d = (nb & !q).count_ones();
        if d > 2 {
            return None;
        }
        vertices += 1;
        degree_sum += d as i64;
    }
    // A forest has |V| - |E| components.
    let paths = vertices - degree_sum / 2;
    Some(paths - q.count_ones() as i64)
}

/// Exhaustively maximizes `p - q` over all vertex subsets `Q`, visiting
/// subsets by increasing size and lexicographically within a size; the first
/// maximizer found is returned.
pub fn delta_brute_force(t: &Tree) -> Result<(usize, Vec<usize>), TreeError> {
    let n = t.n();
    if n > MAX_BRUTE_FORCE_VERTICES {
        return Err(TreeError::SizeLimitExceeded {
            what: "brute-force size",
            value: n,
            limit: MAX_BRUTE_FORCE_VERTICES,
        });
    }
    let nbrs = neighbor_masks(t);
    let mut best: Option<(i64, Vec<usize>)> = None;
    for size in 0..=n {
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            let mask = combo.iter().fold(0u64, |m, &v| m | (1 << v));
            if let Some(value) = residual_value_mask(&nbrs, n, mask) {
                if best.as_ref().is_none_or(|(b, _)| value > *b) {
                    best = Some((value, combo.clone()));
                }
            }
            if !next_combination(&mut combo, n) {
                break;
            }
        }
    }
    let (value, set) = best.expect("deleting every vertex is always admissible");
    Ok((value.max(0) as usize, set))
}

/// Next `k`-subset of `0..n` in lexicographic order.
fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    let Some(i) = (0..k).rev().find(|&i| combo[i] < n - k + i) else {
        return false;
    };
    combo[i] += 1;
    for j in i + 1..k {
        combo[j] = combo[j - 1] + 1;
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultiplicityProfile {
    pub n: usize,
    pub path_cover: usize,
    pub max_multiplicity: usize,
    /// `Δ(T)`; only present when the tree is small enough for brute force.
    pub delta_max: Option<usize>,
    pub rpm_set: Option<Vec<usize>>,
    pub hdvs: Vec<HdvInfo>,
}

/// Full multiplicity data for `t`. The brute-force fields are filled for
/// trees with at most [`MAX_BRUTE_FORCE_VERTICES`] vertices.
pub fn multiplicity_profile(t: &Tree) -> MultiplicityProfile {
    let path_cover = path_cover_number(t);
    let (delta_max, rpm_set) = match delta_brute_force(t) {
        Ok((d, q)) => (Some(d), Some(q)),
        Err(_) => (None, None),
    };
    MultiplicityProfile {
        n: t.n(),
        path_cover,
        max_multiplicity: path_cover,
        delta_max,
        rpm_set,
        hdvs: t.hdv_profile(),
    }
}
