//! Ground-truth generators. Every generator orients its skeleton along a
//! perfect elimination ordering, so none of the produced DAGs has an
//! immorality.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Ordering, Skeleton};
use crate::meek::{orient_from_ordering, Dag};

/// A hidden DAG with the ordering used to orient it.
#[derive(Clone, Debug)]
pub struct Instance {
    pub dag: Dag,
    pub order: Ordering,
}

impl Instance {
    pub fn skeleton(&self) -> &Arc<Skeleton> {
        self.dag.skeleton_arc()
    }

    fn from_edges(n: usize, edges: Vec<(usize, usize)>, order: Ordering) -> Self {
        let g = Arc::new(Skeleton::new(n, edges).expect("generator emits valid edges"));
        Instance {
            dag: orient_from_ordering(g, &order),
            order,
        }
    }
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_order(n: usize, rng: &mut impl Rng) -> Ordering {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    Ordering::from_perm(perm).expect("shuffle of 0..n")
}

/// Random chordal DAG. Vertices are visited from the last position of a
/// random ordering to the first; the vertex at 1-based position `p` links to
/// each earlier vertex with probability `min(1, density / (p - 1))`, then its
/// earlier neighborhood is completed into a clique. The ordering is then a
/// PEO and each edge points from the earlier endpoint to the later one.
#[allow(clippy::needless_range_loop)]
pub fn random_chordal(n: usize, density: f64, seed: u64) -> Instance {
    assert!(n >= 1, "need at least one vertex");
    let mut rng = rng_from_seed(seed);
    let order = random_order(n, &mut rng);
    // adjacency in position space
    let mut adj = vec![vec![false; n]; n];
    let mut earlier = Vec::new();
    for p in (1..n).rev() {
        let prob = (density / p as f64).min(1.0);
        for q in 0..p {
            // adj[q][p] is written alongside, so no row iterator here
            if !adj[p][q] && prob > 0.0 && rng.gen_bool(prob) {
                adj[p][q] = true;
                adj[q][p] = true;
            }
        }
        earlier.clear();
        earlier.extend((0..p).filter(|&q| adj[p][q]));
        for (i, &x) in earlier.iter().enumerate() {
            for &y in &earlier[i + 1..] {
                adj[x][y] = true;
                adj[y][x] = true;
            }
        }
    }
    let mut edges = Vec::new();
    for (p, row) in adj.iter().enumerate() {
        for (q, _) in row[..p].iter().enumerate().filter(|(_, &e)| e) {
            edges.push((order.vertex_at(q), order.vertex_at(p)));
        }
    }
    Instance::from_edges(n, edges, order)
}

/// The complete DAG oriented by `sigma`.
pub fn complete_dag(n: usize, sigma: &Ordering) -> Dag {
    orient_from_ordering(Arc::new(Skeleton::complete(n)), sigma)
}

/// Complete DAG under a random ordering.
pub fn random_complete(n: usize, seed: u64) -> Instance {
    let order = random_order(n, &mut rng_from_seed(seed));
    Instance {
        dag: complete_dag(n, &order),
        order,
    }
}

/// Split graph: a clique on `0..chi` and `alpha` further vertices, each
/// adjacent to a uniform random subset of the clique of size `1..chi`. The
/// clique comes first in the orienting ordering.
pub fn split_graph_instance(chi: usize, alpha: usize, seed: u64) -> Instance {
    assert!(chi >= 2, "clique needs at least two vertices");
    let mut rng = rng_from_seed(seed);
    let n = chi + alpha;
    let clique: Vec<usize> = (0..chi).collect();
    let mut edges: Vec<(usize, usize)> = (0..chi)
        .flat_map(|u| (u + 1..chi).map(move |v| (u, v)))
        .collect();
    for v in chi..n {
        let size = rng.gen_range(1..chi);
        for &u in clique.choose_multiple(&mut rng, size) {
            edges.push((u, v));
        }
    }
    let mut perm = clique.clone();
    perm.shuffle(&mut rng);
    let mut rest: Vec<usize> = (chi..n).collect();
    rest.shuffle(&mut rng);
    perm.extend(rest);
    Instance::from_edges(n, edges, Ordering::from_perm(perm).expect("permutation"))
}

/// A line `0 -> 1 -> .. -> 2 alpha - 1` with a clique `C_p` of size `chi`
/// through line vertices `2p, 2p+1` (0-based) for each `p < alpha`. Inside
/// `C_p` the first line vertex points to everything; the rest of `C_p` is
/// ordered at random.
pub fn line_of_cliques(alpha: usize, chi: usize, seed: u64) -> Instance {
    assert!(alpha >= 1 && chi >= 2, "need alpha >= 1 and chi >= 2");
    let mut rng = rng_from_seed(seed);
    let n = alpha * chi;
    let mut next = 2 * alpha;
    let mut edges = Vec::new();
    let mut perm = Vec::with_capacity(n);
    for p in 0..alpha {
        let head = 2 * p;
        let mut members = vec![head + 1];
        members.extend(next..next + chi - 2);
        next += chi - 2;
        members.shuffle(&mut rng);
        let mut clique = vec![head];
        clique.extend(members);
        for (i, &u) in clique.iter().enumerate() {
            for &v in &clique[i + 1..] {
                edges.push((u, v));
            }
        }
        if p + 1 < alpha {
            edges.push((head + 1, head + 2));
        }
        perm.extend(clique);
    }
    Instance::from_edges(n, edges, Ordering::from_perm(perm).expect("permutation"))
}

/// Uniform random labelled tree (Prüfer decoding) oriented away from a random
/// root.
pub fn random_tree(n: usize, seed: u64) -> Instance {
    assert!(n >= 1, "need at least one vertex");
    let mut rng = rng_from_seed(seed);
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    if n == 2 {
        edges.push((0, 1));
    } else if n > 2 {
        let code: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
        let mut degree = vec![1usize; n];
        for &x in &code {
            degree[x] += 1;
        }
        let mut leaves: std::collections::BTreeSet<usize> =
            (0..n).filter(|&v| degree[v] == 1).collect();
        for &x in &code {
            let leaf = leaves.pop_first().expect("a leaf always exists");
            edges.push((leaf, x));
            degree[x] -= 1;
            if degree[x] == 1 {
                leaves.insert(x);
            }
        }
        let rest: Vec<usize> = leaves.into_iter().collect();
        edges.push((rest[0], rest[1]));
    }
    let g = Skeleton::new(n, edges.iter().copied()).expect("tree edges are valid");
    let root = rng.gen_range(0..n);
    // BFS order from the root: each vertex's only earlier neighbor is its parent
    let mut seen = vec![false; n];
    seen[root] = true;
    let mut perm = vec![root];
    let mut i = 0;
    while i < perm.len() {
        let v = perm[i];
        i += 1;
        for &w in g.neighbors(v) {
            if !seen[w] {
                seen[w] = true;
                perm.push(w);
            }
        }
    }
    Instance::from_edges(n, edges, Ordering::from_perm(perm).expect("BFS covers a tree"))
}

/// Path `0 -> 1 -> .. -> n-1`.
pub fn directed_path(n: usize) -> Instance {
    Instance::from_edges(n, (1..n).map(|v| (v - 1, v)).collect(), Ordering::identity(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{graph_stats, is_chordal, mcs_peo, verify_peo};
    use crate::meek::find_immoralities;

    #[test]
    fn density_limits() {
        let full = random_chordal(12, 1e9, 1);
        assert_eq!(full.dag.skeleton().num_edges(), 66);
        let none = random_chordal(12, 0.0, 1);
        assert_eq!(none.dag.skeleton().num_edges(), 0);
    }

    #[test]
    fn random_chordal_outputs_are_valid() {
        for seed in 0..1000u64 {
            let n = 1 + (seed as usize % 40);
            let density = 0.2 + (seed % 7) as f64 * 0.6;
            let inst = random_chordal(n, density, seed);
            let g = inst.dag.skeleton();
            assert!(verify_peo(g, &inst.order).is_ok());
            assert!(mcs_peo(g).is_ok());
            assert!(find_immoralities(&inst.dag).is_empty());
        }
    }

    #[test]
    fn complete_dag_small() {
        let d = complete_dag(3, &Ordering::identity(3));
        assert_eq!(d.arcs(), vec![(0, 1), (0, 2), (1, 2)]);
        assert!(complete_dag(1, &Ordering::identity(1)).arcs().is_empty());
        let r = random_complete(9, 4);
        assert!(find_immoralities(&r.dag).is_empty());
    }

    #[test]
    fn split_graphs() {
        let k3 = split_graph_instance(3, 0, 0);
        assert_eq!(*k3.dag.skeleton(), Skeleton::complete(3));
        for seed in 0..100 {
            let chi = 2 + seed as usize % 8;
            let inst = split_graph_instance(chi, 1 + seed as usize % 10, seed);
            assert!(is_chordal(inst.dag.skeleton()));
            assert_eq!(graph_stats(inst.dag.skeleton()).unwrap().chi, chi);
            assert!(find_immoralities(&inst.dag).is_empty());
        }
    }

    #[test]
    fn line_of_cliques_family() {
        let tiny = line_of_cliques(1, 2, 0);
        assert_eq!(tiny.dag.arcs(), vec![(0, 1)]);
        for seed in 0..100 {
            let alpha = 1 + seed as usize % 6;
            let chi = 2 + seed as usize % 7;
            let inst = line_of_cliques(alpha, chi, seed);
            let g = inst.dag.skeleton();
            assert!(is_chordal(g));
            let stats = graph_stats(g).unwrap();
            assert_eq!(stats.chi, chi);
            assert_eq!(stats.alpha, alpha);
            assert!(find_immoralities(&inst.dag).is_empty());
            for p in 0..2 * alpha - 1 {
                assert!(inst.dag.has_arc(p, p + 1));
            }
        }
    }

    #[test]
    fn trees() {
        for seed in 0..200 {
            let n = 1 + seed as usize * 3;
            let inst = random_tree(n, seed);
            assert!(inst.dag.skeleton().is_tree());
            assert!(find_immoralities(&inst.dag).is_empty());
            assert!(inst.dag.parents(inst.order.vertex_at(0)).next().is_none());
        }
    }
}
