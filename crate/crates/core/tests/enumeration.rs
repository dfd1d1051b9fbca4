use std::collections::HashSet;

use nimtree::enumerate::enumerate_free_trees;
use nimtree::Tree;
use proptest::prelude::*;

/// Unlabeled free tree counts via rooted-tree counts and Otter's dissimilarity
/// formula.
fn otter_counts(max_n: usize) -> Vec<u64> {
    let mut rooted = vec![0u64; max_n + 1];
    rooted[1] = 1;
    for n in 2..=max_n {
        let mut sum = 0u64;
        for k in 1..n {
            let d: u64 = (1..=k).filter(|d| k % d == 0).map(|d| d as u64 * rooted[d]).sum();
            sum += d * rooted[n - k];
        }
        rooted[n] = sum / (n as u64 - 1);
    }
    let mut free = vec![0u64; max_n + 1];
    for n in 1..=max_n {
        let pairs: u64 = (1..n).map(|i| rooted[i] * rooted[n - i]).sum();
        let mut f = rooted[n] * 2 - pairs;
        if n % 2 == 0 {
            f += rooted[n / 2];
        }
        free[n] = f / 2;
    }
    free
}

#[test]
fn counts_match_otter() {
    let expected = otter_counts(15);
    assert_eq!(&expected[1..=10], &[1, 1, 1, 2, 3, 6, 11, 23, 47, 106]);
    for (n, &count) in expected.iter().enumerate().skip(1) {
        let got = enumerate_free_trees(n).unwrap().count() as u64;
        assert_eq!(got, count, "n = {n}");
    }
}

#[test]
fn trees_are_pairwise_non_isomorphic() {
    for n in 1..=12 {
        let codes: HashSet<_> = enumerate_free_trees(n)
            .unwrap()
            .map(|t| t.canonical_code())
            .collect();
        assert_eq!(codes.len() as u64, otter_counts(n)[n]);
    }
}

#[test]
fn every_prufer_tree_is_enumerated() {
    let n = 7;
    let listed: HashSet<_> = enumerate_free_trees(n)
        .unwrap()
        .map(|t| t.canonical_code())
        .collect();
    let mut seen = HashSet::new();
    let total = n.pow(n as u32 - 2);
    for mut x in 0..total {
        let seq: Vec<usize> = (0..n - 2)
            .map(|_| {
                let d = x % n;
                x /= n;
                d
            })
            .collect();
        seen.insert(Tree::from_prufer(&seq).unwrap().canonical_code());
    }
    assert_eq!(seen, listed);
}

#[test]
fn zero_vertices_rejected() {
    assert!(enumerate_free_trees(0).is_err());
}

fn prufer_tree() -> impl Strategy<Value = Tree> {
    (3usize..16).prop_flat_map(|n| {
        prop::collection::vec(0..n, n - 2).prop_map(|seq| Tree::from_prufer(&seq).unwrap())
    })
}

proptest! {
    #[test]
    fn canonical_code_ignores_labels(t in prufer_tree(), seed in any::<u64>()) {
        let n = t.n();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let edges: Vec<_> = t.edges().into_iter().map(|(a, b)| (perm[a], perm[b])).collect();
        let relabeled = Tree::from_edges(n, &edges).unwrap();
        prop_assert_eq!(relabeled.canonical_code(), t.canonical_code());
        prop_assert!(relabeled.is_isomorphic(&t));
        prop_assert_eq!(t.canonical_code().to_tree().canonical_code(), t.canonical_code());
    }
}
