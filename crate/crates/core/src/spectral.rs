//! Dense symmetric eigenvalues and a matrix realizing the maximum
//! multiplicity of a tree.
//!
//! The witness for `T` starts from a residual path maximizing set `Q`: every
//! path of `T - Q` with `m` vertices gets the tridiagonal block with unit
//! off-diagonal and diagonal `-2cos(π/(m+1))`, which has `0` as its largest
//! eigenvalue; edges at `Q` get weight 1 and `Q` gets diagonal 0. Then `0`
//! has multiplicity at least `p - |Q| = M(T)` and, `M(T)` being maximal,
//! exactly `M(T)`.

use serde::Serialize;
use thiserror::Error;

use crate::multiplicity::{delta_brute_force, max_multiplicity};
use crate::tree::{Tree, TreeError};

/// Sweep budget of the cyclic Jacobi method.
pub const MAX_SWEEPS: usize = 50;
/// Largest matrix accepted by [`jacobi_eigenvalues`].
pub const MAX_DIMENSION: usize = 64;
/// Largest tree accepted by [`witness_matrix`].
pub const MAX_WITNESS_VERTICES: usize = 14;
/// Relative off-diagonal norm at which the Jacobi iteration stops.
pub const JACOBI_TOLERANCE: f64 = 1e-12;
/// Relative width of an eigenvalue cluster.
pub const CLUSTER_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("Jacobi iteration did not converge in {sweeps} sweeps")]
    NonConvergence { sweeps: usize },
    #[error("eigenvalue 0 has multiplicity {achieved}, expected {expected}")]
    MultiplicityShortfall { expected: usize, achieved: usize },
    #[error("{what} {value} exceeds the limit {limit}")]
    SizeLimitExceeded {
        what: &'static str,
        value: usize,
        limit: usize,
    },
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// Dense real symmetric matrix; both triangles are stored and kept equal.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        SymMatrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    /// Matrix with the given diagonal and edge weights on the tree's edges.
    pub fn from_tree(t: &Tree, diag: &[f64], weight: impl Fn(usize, usize) -> f64) -> Self {
        let mut m = Self::from_diagonal(diag);
        for (a, b) in t.edges() {
            m.set(a, b, weight(a, b));
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// Sets entries `(i, j)` and `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
        self.data[j * self.n + i] = v;
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    fn off_diagonal_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    s += self.get(i, j).powi(2);
                }
            }
        }
        s.sqrt()
    }

    /// The principal submatrix without row and column `v`.
    pub fn delete(&self, v: usize) -> Self {
        let keep: Vec<usize> = (0..self.n).filter(|&i| i != v).collect();
        let mut m = Self::zeros(keep.len());
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                m.data[a * m.n + b] = self.get(i, j);
            }
        }
        m
    }

    /// Whether the off-diagonal nonzero pattern is exactly the edge set.
    pub fn has_pattern_of(&self, t: &Tree) -> bool {
        if t.n() != self.n {
            return false;
        }
        (0..self.n)
            .all(|i| (0..self.n).all(|j| i == j || (self.get(i, j) != 0.0) == t.neighbors(i).contains(&j)))
    }
}

/// Eigenvalues in ascending order by cyclic Jacobi rotations.
pub fn jacobi_eigenvalues(m: &SymMatrix) -> Result<Vec<f64>, SpectralError> {
    let n = m.n;
    if n > MAX_DIMENSION {
        return Err(SpectralError::SizeLimitExceeded {
            what: "matrix dimension",
            value: n,
            limit: MAX_DIMENSION,
        });
    }
    let mut a = m.clone();
    let threshold = JACOBI_TOLERANCE * m.frobenius_norm();
    let mut converged = false;
    for _ in 0..=MAX_SWEEPS {
        if a.off_diagonal_norm() <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let theta = (a.get(q, q) - a.get(p, p)) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                rotate(&mut a, p, q, c, s);
            }
        }
    }
    if !converged {
        return Err(SpectralError::NonConvergence { sweeps: MAX_SWEEPS });
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a.get(i, i)).collect();
    eig.sort_by(f64::total_cmp);
    Ok(eig)
}

/// Applies `Jᵀ A J` for the rotation in the `(p, q)` plane that zeroes
/// `a[p][q]`.
fn rotate(a: &mut SymMatrix, p: usize, q: usize, c: f64, s: f64) {
    let n = a.n;
    let app = a.get(p, p);
    let aqq = a.get(q, q);
    let apq = a.get(p, q);
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = a.get(k, p);
        let akq = a.get(k, q);
        a.set(k, p, c * akp - s * akq);
        a.set(k, q, s * akp + c * akq);
    }
    a.set(p, p, c * c * app - 2.0 * s * c * apq + s * s * aqq);
    a.set(q, q, s * s * app + 2.0 * s * c * apq + c * c * aqq);
    a.set(p, q, 0.0);
}

/// Groups sorted eigenvalues whose neighbors are closer than `tol`; returns
/// `(mean, size)` per cluster.
pub fn clusters(sorted: &[f64], tol: f64) -> Vec<(f64, usize)> {
    let mut out: Vec<(f64, usize)> = Vec::new();
    let mut start = 0;
    for i in 1..=sorted.len() {
        if i == sorted.len() || sorted[i] - sorted[i - 1] >= tol {
            if i > start {
                let mean = sorted[start..i].iter().sum::<f64>() / (i - start) as f64;
                out.push((mean, i - start));
            }
            start = i;
        }
    }
    out
}

/// Cluster width for `m`: `1e-6 · max(1, ‖m‖)`.
pub fn cluster_tolerance(m: &SymMatrix) -> f64 {
    CLUSTER_TOLERANCE * m.frobenius_norm().max(1.0)
}

fn multiplicity_near(eigs: &[f64], target: f64, tol: f64) -> usize {
    eigs.iter().filter(|&&x| (x - target).abs() < tol).count()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralWitness {
    #[serde(skip)]
    pub tree: Tree,
    #[serde(skip)]
    pub matrix: SymMatrix,
    /// `M(T)`.
    pub m: usize,
    pub target: f64,
    /// Number of eigenvalues within `tolerance` of the target.
    pub achieved: usize,
    pub tolerance: f64,
    pub eigenvalues: Vec<f64>,
    /// Distance from the target to the nearest other eigenvalue, if any.
    pub gap: Option<f64>,
}

/// A matrix in `S(T)` with eigenvalue 0 of multiplicity `M(T)`.
pub fn witness_matrix(t: &Tree) -> Result<SpectralWitness, SpectralError> {
    let n = t.n();
    if n > MAX_WITNESS_VERTICES {
        return Err(SpectralError::SizeLimitExceeded {
            what: "witness size",
            value: n,
            limit: MAX_WITNESS_VERTICES,
        });
    }
    let (_, q) = delta_brute_force(t)?;
    let mut in_q = vec![false; n];
    for &v in &q {
        in_q[v] = true;
    }
    let mut diag = vec![0.0; n];
    let mut seen = in_q.clone();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        // Collect the path component of T - Q containing `start`.
        let mut comp = vec![start];
        seen[start] = true;
        let mut idx = 0;
        while idx < comp.len() {
            let v = comp[idx];
            for &w in t.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                }
            }
            idx += 1;
        }
        let d = -2.0 * (std::f64::consts::PI / (comp.len() + 1) as f64).cos();
        for v in comp {
            diag[v] = d;
        }
    }
    let matrix = SymMatrix::from_tree(t, &diag, |_, _| 1.0);
    let eigenvalues = jacobi_eigenvalues(&matrix)?;
    let tolerance = cluster_tolerance(&matrix);
    let achieved = multiplicity_near(&eigenvalues, 0.0, tolerance);
    let m = max_multiplicity(t);
    if achieved != m {
        return Err(SpectralError::MultiplicityShortfall {
            expected: m,
            achieved,
        });
    }
    let gap = eigenvalues
        .iter()
        .map(|x| x.abs())
        .filter(|&x| x >= tolerance)
        .min_by(f64::total_cmp);
    Ok(SpectralWitness {
        tree: t.clone(),
        matrix,
        m,
        target: 0.0,
        achieved,
        tolerance,
        eigenvalues,
        gap,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClusterCheck {
    pub value: f64,
    pub multiplicity: usize,
    pub multiplicity_after_deletion: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InterlacingReport {
    pub vertex: usize,
    pub tolerance: f64,
    pub clusters: Vec<ClusterCheck>,
    /// Clusters whose multiplicity changed by more than one.
    pub violations: Vec<ClusterCheck>,
}

impl InterlacingReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Compares every eigenvalue multiplicity of `m` with that of `m` without
/// row and column `v`; interlacing allows a change of at most one.
pub fn interlacing_check(m: &SymMatrix, v: usize) -> Result<InterlacingReport, SpectralError> {
    if v >= m.n() {
        return Err(TreeError::VertexOutOfRange { vertex: v, n: m.n() }.into());
    }
    let tolerance = cluster_tolerance(m);
    let full = jacobi_eigenvalues(m)?;
    let reduced = jacobi_eigenvalues(&m.delete(v))?;
    let clusters: Vec<ClusterCheck> = clusters(&full, tolerance)
        .into_iter()
        .map(|(value, multiplicity)| ClusterCheck {
            value,
            multiplicity,
            multiplicity_after_deletion: multiplicity_near(&reduced, value, tolerance),
        })
        .collect();
    let violations = clusters
        .iter()
        .filter(|c| c.multiplicity.abs_diff(c.multiplicity_after_deletion) > 1)
        .cloned()
        .collect();
    Ok(InterlacingReport {
        vertex: v,
        tolerance,
        clusters,
        violations,
    })
}
