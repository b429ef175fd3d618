//! Undirected skeletons and the chordal-graph toolkit used by every strategy:
//! maximum cardinality search, PEO verification, optimal coloring, maximum
//! clique / independent set, and the forests induced by two color classes.

use std::collections::BTreeSet;
use std::fmt;
use std::fmt::Write as _;

use thiserror::Error;

/// Index of an edge in [`Skeleton::edges`].
pub type EdgeId = usize;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("not a permutation of 0..{0}")]
    NotAPermutation(usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// The vertex `vertex` has an earlier neighborhood that is not a clique.
#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("graph is not chordal: earlier neighborhood of vertex {vertex} is not a clique")]
pub struct NotChordal {
    pub vertex: usize,
}

/// Square bit matrix; row `u` is a bitset over `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    words: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64);
        BitMatrix {
            words,
            bits: vec![0; words * n],
        }
    }

    pub fn set(&mut self, u: usize, v: usize) {
        self.bits[u * self.words + v / 64] |= 1 << (v % 64);
    }

    pub fn clear(&mut self, u: usize, v: usize) {
        self.bits[u * self.words + v / 64] &= !(1 << (v % 64));
    }

    pub fn get(&self, u: usize, v: usize) -> bool {
        self.bits[u * self.words + v / 64] & (1 << (v % 64)) != 0
    }

    pub fn row(&self, u: usize) -> &[u64] {
        &self.bits[u * self.words..(u + 1) * self.words]
    }
}

/// Indices of set bits in a bitset given word by word.
pub fn ones(words: impl IntoIterator<Item = u64>) -> impl Iterator<Item = usize> {
    words.into_iter().enumerate().flat_map(|(i, mut w)| {
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let b = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(i * 64 + b)
        })
    })
}

/// Simple undirected graph on vertices `0..n` with sorted neighbor lists.
#[derive(Clone, PartialEq, Eq)]
pub struct Skeleton {
    n: usize,
    adj: Vec<Vec<usize>>,
    // edge id of adj[u][i]
    adj_edge: Vec<Vec<EdgeId>>,
    edges: Vec<(usize, usize)>,
    matrix: BitMatrix,
}

impl fmt::Debug for Skeleton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Skeleton")
            .field("n", &self.n)
            .field("edges", &self.edges)
            .finish()
    }
}

impl Skeleton {
    /// Builds a skeleton from an edge list. Duplicate edges (in either
    /// direction) are merged.
    pub fn new<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            set.insert((u.min(v), u.max(v)));
        }
        let edges: Vec<(usize, usize)> = set.into_iter().collect();
        let mut adj = vec![Vec::new(); n];
        let mut adj_edge = vec![Vec::new(); n];
        let mut matrix = BitMatrix::new(n);
        for (id, &(u, v)) in edges.iter().enumerate() {
            adj[u].push((v, id));
            adj[v].push((u, id));
            matrix.set(u, v);
            matrix.set(v, u);
        }
        let mut a = Vec::with_capacity(n);
        for list in adj.iter_mut() {
            list.sort_unstable();
            a.push(list.iter().map(|&(w, _)| w).collect());
        }
        for (v, list) in adj.into_iter().enumerate() {
            adj_edge[v] = list.into_iter().map(|(_, id)| id).collect();
        }
        Ok(Skeleton {
            n,
            adj: a,
            adj_edge,
            edges,
            matrix,
        })
    }

    pub fn empty(n: usize) -> Self {
        Skeleton::new(n, std::iter::empty()).expect("edgeless graph is valid")
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Skeleton::new(n, edges).expect("complete graph is valid")
    }

    pub fn path(n: usize) -> Self {
        Skeleton::new(n, (1..n).map(|v| (v - 1, v))).expect("path is valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u < v`, sorted; the position is the [`EdgeId`].
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> (usize, usize) {
        self.edges[id]
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    /// Neighbors of `v` paired with the id of the connecting edge.
    pub fn incident(&self, v: usize) -> impl Iterator<Item = (usize, EdgeId)> + '_ {
        self.adj[v].iter().copied().zip(self.adj_edge[v].iter().copied())
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.matrix.get(u, v)
    }

    /// Neighborhood of `u` as a bitset.
    pub fn adjacency_row(&self, u: usize) -> &[u64] {
        self.matrix.row(u)
    }

    pub fn edge_id(&self, u: usize, v: usize) -> Option<EdgeId> {
        if !self.has_edge(u, v) {
            return None;
        }
        let i = self.adj[u].binary_search(&v).ok()?;
        Some(self.adj_edge[u][i])
    }

    /// Whether every pair in `vertices` is adjacent.
    pub fn is_clique(&self, vertices: &[usize]) -> bool {
        vertices
            .iter()
            .enumerate()
            .all(|(i, &u)| vertices[i + 1..].iter().all(|&v| self.has_edge(u, v)))
    }

    /// Subgraph induced by `vertices`, relabelled to `0..vertices.len()` in
    /// the given order.
    pub fn induced(&self, vertices: &[usize]) -> Subgraph {
        let mut local = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let mut edges = Vec::new();
        for (i, &v) in vertices.iter().enumerate() {
            for &w in &self.adj[v] {
                let j = local[w];
                if j != usize::MAX && i < j {
                    edges.push((i, j));
                }
            }
        }
        Subgraph {
            vertices: vertices.to_vec(),
            skeleton: Skeleton::new(vertices.len(), edges).expect("induced subgraph is valid"),
        }
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                let v = comp[i];
                i += 1;
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_tree(&self) -> bool {
        self.n > 0 && self.num_edges() + 1 == self.n && self.components().len() == 1
    }

    /// Parses the edge-list file format: a header line `n m` followed by `m`
    /// lines `u v`. Blank lines are ignored.
    pub fn parse_edge_list(text: &str) -> Result<Self, GraphError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines.next().ok_or(GraphError::Parse {
            line: 1,
            msg: "missing header".into(),
        })?;
        let [n, m] = parse_pair(hline, header)?;
        let mut edges = Vec::with_capacity(m);
        for (line, l) in lines {
            edges.push(parse_pair(line, l).map(|[u, v]| (u, v))?);
        }
        if edges.len() != m {
            return Err(GraphError::Parse {
                line: hline,
                msg: format!("header declares {m} edges, found {}", edges.len()),
            });
        }
        Skeleton::new(n, edges)
    }

    pub fn to_edge_list(&self) -> String {
        let mut s = format!("{} {}\n", self.n, self.num_edges());
        for &(u, v) in &self.edges {
            writeln!(s, "{u} {v}").unwrap();
        }
        s
    }
}

pub(crate) fn parse_pair(line: usize, text: &str) -> Result<[usize; 2], GraphError> {
    let parts: Vec<&str> = text.split_whitespace().collect();
    if parts.len() != 2 {
        return Err(GraphError::Parse {
            line,
            msg: format!("expected two integers, got {text:?}"),
        });
    }
    let mut out = [0; 2];
    for (slot, p) in out.iter_mut().zip(parts) {
        *slot = p.parse().map_err(|_| GraphError::Parse {
            line,
            msg: format!("invalid integer {p:?}"),
        })?;
    }
    Ok(out)
}

/// An induced subgraph together with the original id of each local vertex.
#[derive(Clone, Debug)]
pub struct Subgraph {
    pub vertices: Vec<usize>,
    pub skeleton: Skeleton,
}

/// A vertex ordering: `perm[i]` is the vertex at position `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ordering {
    perm: Vec<usize>,
    pos: Vec<usize>,
}

impl Ordering {
    pub fn from_perm(perm: Vec<usize>) -> Result<Self, GraphError> {
        let n = perm.len();
        let mut pos = vec![usize::MAX; n];
        for (i, &v) in perm.iter().enumerate() {
            if v >= n || pos[v] != usize::MAX {
                return Err(GraphError::NotAPermutation(n));
            }
            pos[v] = i;
        }
        Ok(Ordering { perm, pos })
    }

    pub fn identity(n: usize) -> Self {
        Ordering {
            perm: (0..n).collect(),
            pos: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn vertex_at(&self, i: usize) -> usize {
        self.perm[i]
    }

    pub fn position(&self, v: usize) -> usize {
        self.pos[v]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.perm
    }

    pub fn reversed(&self) -> Ordering {
        let mut perm = self.perm.clone();
        perm.reverse();
        Ordering::from_perm(perm).expect("reversal of a permutation")
    }

    /// Neighbors of `v` placed before it.
    pub fn earlier_neighbors(&self, g: &Skeleton, v: usize) -> Vec<usize> {
        let p = self.pos[v];
        g.neighbors(v)
            .iter()
            .copied()
            .filter(|&w| self.pos[w] < p)
            .collect()
    }
}

/// Maximum cardinality search. The visit order has the property that each
/// vertex's earlier neighbors form a clique exactly when `g` is chordal, so
/// the result is verified and returned as a PEO or a non-chordal witness.
/// Ties are broken by lowest vertex id.
pub fn mcs_peo(g: &Skeleton) -> Result<Ordering, NotChordal> {
    let n = g.n();
    let mut weight = vec![0usize; n];
    let mut visited = vec![false; n];
    // buckets[w] holds unvisited vertices of weight w
    let mut buckets: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n.max(1)];
    buckets[0].extend(0..n);
    let mut top = 0;
    let mut perm = Vec::with_capacity(n);
    for _ in 0..n {
        while buckets[top].is_empty() {
            top -= 1;
        }
        let v = buckets[top].pop_first().expect("nonempty bucket");
        visited[v] = true;
        perm.push(v);
        for &w in g.neighbors(v) {
            if !visited[w] {
                buckets[weight[w]].remove(&w);
                weight[w] += 1;
                buckets[weight[w]].insert(w);
                top = top.max(weight[w]);
            }
        }
    }
    let order = Ordering::from_perm(perm).expect("MCS visits every vertex once");
    verify_peo(g, &order)?;
    Ok(order)
}

pub fn is_chordal(g: &Skeleton) -> bool {
    mcs_peo(g).is_ok()
}

/// Checks that every vertex's earlier neighborhood is a clique, using the
/// parent-containment test: with `p` the latest earlier neighbor of `v`, the
/// other earlier neighbors of `v` must all be adjacent to `p`. Applied to
/// every vertex this is equivalent to the direct clique check.
pub fn verify_peo(g: &Skeleton, order: &Ordering) -> Result<(), NotChordal> {
    for v in order.as_slice().iter().copied() {
        let earlier = order.earlier_neighbors(g, v);
        let Some(&p) = earlier.iter().max_by_key(|&&w| order.position(w)) else {
            continue;
        };
        if earlier.iter().any(|&w| w != p && !g.has_edge(w, p)) {
            return Err(NotChordal { vertex: v });
        }
    }
    Ok(())
}

/// A proper vertex coloring with colors `0..num_colors`, all used.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    color: Vec<usize>,
    classes: Vec<Vec<usize>>,
}

impl Coloring {
    pub fn color(&self, v: usize) -> usize {
        self.color[v]
    }

    pub fn colors(&self) -> &[usize] {
        &self.color
    }

    pub fn num_colors(&self) -> usize {
        self.classes.len()
    }

    /// Vertices of color `c`, ascending.
    pub fn class(&self, c: usize) -> &[usize] {
        &self.classes[c]
    }

    pub fn is_proper(&self, g: &Skeleton) -> bool {
        g.edges().iter().all(|&(u, v)| self.color[u] != self.color[v])
    }
}

/// First-fit coloring along a PEO. Earlier neighbors form a clique, so at
/// most clique-number colors are used, which is optimal.
pub fn greedy_color(g: &Skeleton, peo: &Ordering) -> Coloring {
    let n = g.n();
    let mut color = vec![usize::MAX; n];
    let mut used = Vec::new();
    let mut num_colors = 0;
    for &v in peo.as_slice() {
        used.clear();
        used.extend(
            g.neighbors(v)
                .iter()
                .map(|&w| color[w])
                .filter(|&c| c != usize::MAX),
        );
        used.sort_unstable();
        let mut c = 0;
        for &u in &used {
            if u == c {
                c += 1;
            } else if u > c {
                break;
            }
        }
        color[v] = c;
        num_colors = num_colors.max(c + 1);
    }
    let mut classes = vec![Vec::new(); num_colors];
    for (v, &c) in color.iter().enumerate() {
        classes[c].push(v);
    }
    Coloring { color, classes }
}

/// A maximum clique: the largest `{v} ∪ earlier(v)` over the PEO.
pub fn max_clique(g: &Skeleton, peo: &Ordering) -> Vec<usize> {
    let mut best: Vec<usize> = Vec::new();
    for &v in peo.as_slice() {
        let earlier = peo.earlier_neighbors(g, v);
        if earlier.len() + 1 > best.len() {
            best = earlier;
            best.push(v);
        }
    }
    best.sort_unstable();
    best
}

/// A maximum independent set: scan the PEO from the back (each vertex is
/// simplicial in what remains) and take every vertex with no chosen
/// neighbor.
pub fn max_independent_set(g: &Skeleton, peo: &Ordering) -> Vec<usize> {
    let mut blocked = vec![false; g.n()];
    let mut out = Vec::new();
    for &v in peo.as_slice().iter().rev() {
        if blocked[v] {
            continue;
        }
        out.push(v);
        for &w in g.neighbors(v) {
            blocked[w] = true;
        }
    }
    out.sort_unstable();
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GraphStats {
    pub chi: usize,
    pub alpha: usize,
}

pub fn graph_stats(g: &Skeleton) -> Result<GraphStats, NotChordal> {
    let peo = mcs_peo(g)?;
    Ok(GraphStats {
        chi: max_clique(g, &peo).len().max(1),
        alpha: max_independent_set(g, &peo).len().max(1),
    })
}

/// The subgraph induced by two color classes, which for a chordal graph is a
/// forest. Each tree is rooted at its smallest member so that the pieces left
/// after deleting a vertex can be read off from subtree sizes.
#[derive(Clone, Debug)]
pub struct Forest {
    classes: (usize, usize),
    vertices: Vec<usize>,
    adj: Vec<Vec<usize>>,
    num_edges: usize,
    component: Vec<usize>,
    component_sizes: Vec<usize>,
    parent: Vec<Option<usize>>,
    subtree: Vec<usize>,
    acyclic: bool,
}

impl Forest {
    /// `vertices` must be sorted; `edges` are pairs of global ids.
    pub fn from_edges(
        classes: (usize, usize),
        vertices: Vec<usize>,
        edges: &[(usize, usize)],
    ) -> Self {
        let m = vertices.len();
        let local = |v: usize| vertices.binary_search(&v).expect("edge endpoint in forest");
        let mut adj = vec![Vec::new(); m];
        for &(u, v) in edges {
            let (a, b) = (local(u), local(v));
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in adj.iter_mut() {
            list.sort_unstable();
        }
        let mut component = vec![usize::MAX; m];
        let mut component_sizes = Vec::new();
        let mut parent = vec![None; m];
        let mut subtree = vec![1usize; m];
        let mut acyclic = true;
        let mut order = Vec::with_capacity(m);
        for root in 0..m {
            if component[root] != usize::MAX {
                continue;
            }
            let id = component_sizes.len();
            let start = order.len();
            component[root] = id;
            order.push(root);
            let mut i = start;
            while i < order.len() {
                let v = order[i];
                i += 1;
                for &w in &adj[v] {
                    if component[w] == usize::MAX {
                        component[w] = id;
                        parent[w] = Some(v);
                        order.push(w);
                    } else if parent[v] != Some(w) {
                        // a non-tree edge seen from both ends
                        acyclic = false;
                    }
                }
            }
            component_sizes.push(order.len() - start);
        }
        for &v in order.iter().rev() {
            if let Some(p) = parent[v] {
                subtree[p] += subtree[v];
            }
        }
        Forest {
            classes,
            vertices,
            adj,
            num_edges: edges.len(),
            component,
            component_sizes,
            parent,
            subtree,
            acyclic,
        }
    }

    pub fn classes(&self) -> (usize, usize) {
        self.classes
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    pub fn num_components(&self) -> usize {
        self.component_sizes.len()
    }

    pub fn is_acyclic(&self) -> bool {
        self.acyclic && self.num_edges + self.num_components() == self.vertices.len()
    }

    fn local(&self, v: usize) -> Option<usize> {
        self.vertices.binary_search(&v).ok()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.local(v).is_some()
    }

    /// Component label of `v`, if present.
    pub fn component_of(&self, v: usize) -> Option<usize> {
        self.local(v).map(|i| self.component[i])
    }

    /// Number of vertices in the tree containing `v` (0 if absent).
    pub fn tree_size(&self, v: usize) -> usize {
        self.local(v)
            .map_or(0, |i| self.component_sizes[self.component[i]])
    }

    pub fn degree(&self, v: usize) -> usize {
        self.local(v).map_or(0, |i| self.adj[i].len())
    }

    /// Sizes of the trees left when `v` is removed from its tree, in the
    /// order of `v`'s neighbors.
    pub fn split_sizes(&self, v: usize) -> Vec<usize> {
        let Some(i) = self.local(v) else {
            return Vec::new();
        };
        let total = self.component_sizes[self.component[i]];
        self.adj[i]
            .iter()
            .map(|&w| {
                if self.parent[i] == Some(w) {
                    total - self.subtree[i]
                } else {
                    self.subtree[w]
                }
            })
            .collect()
    }

    /// The trees `T_1 .. T_d(v)` of `T(v) - v`, as sorted global vertex
    /// sets in the order of `v`'s neighbors.
    pub fn subtree_split(&self, v: usize) -> Vec<Vec<usize>> {
        let Some(i) = self.local(v) else {
            return Vec::new();
        };
        self.adj[i]
            .iter()
            .map(|&start| {
                let mut seen = vec![start];
                let mut k = 0;
                while k < seen.len() {
                    let x = seen[k];
                    k += 1;
                    for &y in &self.adj[x] {
                        if y != i && !seen.contains(&y) {
                            seen.push(y);
                        }
                    }
                }
                let mut set: Vec<usize> = seen.into_iter().map(|x| self.vertices[x]).collect();
                set.sort_unstable();
                set
            })
            .collect()
    }
}

/// Forest induced by color classes `c` and `c2` of `col` in `g`.
pub fn two_color_forest(g: &Skeleton, col: &Coloring, c: usize, c2: usize) -> Forest {
    let mut vertices: Vec<usize> = col.class(c).iter().chain(col.class(c2)).copied().collect();
    vertices.sort_unstable();
    let mut edges = Vec::new();
    for &v in col.class(c) {
        for &w in g.neighbors(v) {
            if col.color(w) == c2 {
                edges.push((v, w));
            }
        }
    }
    Forest::from_edges((c, c2), vertices, &edges)
}

/// Components of `T(v) - v` in forest `f`.
pub fn subtree_split(f: &Forest, v: usize) -> Vec<Vec<usize>> {
    f.subtree_split(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Skeleton {
        Skeleton::new(n, (0..n).map(|v| (v, (v + 1) % n))).unwrap()
    }

    fn star(leaves: usize) -> Skeleton {
        Skeleton::new(leaves + 1, (1..=leaves).map(|v| (0, v))).unwrap()
    }

    /// Direct definition: the earlier neighborhood of every vertex is a clique.
    fn is_peo_direct(g: &Skeleton, order: &Ordering) -> bool {
        order
            .as_slice()
            .iter()
            .all(|&v| g.is_clique(&order.earlier_neighbors(g, v)))
    }

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == used.len() {
                out.push(cur.clone());
                return;
            }
            for v in 0..used.len() {
                if !used[v] {
                    used[v] = true;
                    cur.push(v);
                    rec(cur, used, out);
                    cur.pop();
                    used[v] = false;
                }
            }
        }
        let mut out = Vec::new();
        rec(&mut Vec::new(), &mut vec![false; n], &mut out);
        out
    }

    #[test]
    fn rejects_bad_edges() {
        assert_eq!(Skeleton::new(3, [(1, 1)]), Err(GraphError::SelfLoop(1)));
        assert_eq!(
            Skeleton::new(3, [(0, 3)]),
            Err(GraphError::VertexOutOfRange { vertex: 3, n: 3 })
        );
        let g = Skeleton::new(3, [(0, 1), (1, 0), (2, 1)]).unwrap();
        assert_eq!(g.num_edges(), 2);
        assert_eq!(g.neighbors(1), &[0, 2]);
        assert_eq!(g.edge_id(2, 1), Some(1));
        assert_eq!(g.edge_id(0, 2), None);
    }

    #[test]
    fn triangle_every_permutation_is_peo() {
        let g = Skeleton::complete(3);
        for p in permutations(3) {
            let o = Ordering::from_perm(p).unwrap();
            assert!(verify_peo(&g, &o).is_ok());
        }
        assert!(mcs_peo(&g).is_ok());
    }

    #[test]
    fn four_cycle_is_not_chordal() {
        let err = mcs_peo(&cycle(4)).unwrap_err();
        assert!(err.vertex < 4);
        assert!(!is_chordal(&cycle(5)));
        assert!(is_chordal(&cycle(3)));
    }

    #[test]
    fn path_orderings_against_brute_force() {
        let g = Skeleton::path(4);
        // (0,3,1,2) leaves vertex 2 with earlier neighbors {1,3}, which are
        // not adjacent; its reverse eliminates simplicial vertices first.
        let o = Ordering::from_perm(vec![0, 3, 1, 2]).unwrap();
        assert!(!is_peo_direct(&g, &o));
        assert!(verify_peo(&g, &o).is_err());
        let r = o.reversed();
        assert!(is_peo_direct(&g, &r));
        assert!(verify_peo(&g, &r).is_ok());
        for p in permutations(4) {
            let o = Ordering::from_perm(p).unwrap();
            assert_eq!(verify_peo(&g, &o).is_ok(), is_peo_direct(&g, &o));
        }
    }

    #[test]
    fn mcs_matches_exhaustive_peo_search_small_graphs() {
        // every graph on 5 vertices, plus a sample on 6
        let pairs: Vec<(usize, usize)> =
            (0..5).flat_map(|u| (u + 1..5).map(move |v| (u, v))).collect();
        let perms = permutations(5);
        for mask in 0u32..(1 << pairs.len()) {
            let edges = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &e)| e);
            let g = Skeleton::new(5, edges).unwrap();
            let any = perms
                .iter()
                .any(|p| is_peo_direct(&g, &Ordering::from_perm(p.clone()).unwrap()));
            assert_eq!(mcs_peo(&g).is_ok(), any, "{g:?}");
        }
    }

    #[test]
    fn coloring_small_cases() {
        let k4 = Skeleton::complete(4);
        let peo = mcs_peo(&k4).unwrap();
        let col = greedy_color(&k4, &peo);
        assert_eq!(col.num_colors(), 4);
        assert!(col.is_proper(&k4));

        let e5 = Skeleton::empty(5);
        let col = greedy_color(&e5, &mcs_peo(&e5).unwrap());
        assert_eq!(col.num_colors(), 1);
        assert_eq!(col.class(0), &[0, 1, 2, 3, 4]);
    }

    #[test]
    fn cliques_and_independent_sets() {
        let k5 = Skeleton::complete(5);
        let peo = mcs_peo(&k5).unwrap();
        assert_eq!(max_clique(&k5, &peo), vec![0, 1, 2, 3, 4]);
        assert_eq!(max_independent_set(&k5, &peo).len(), 1);

        let s = star(4);
        let peo = mcs_peo(&s).unwrap();
        let c = max_clique(&s, &peo);
        assert_eq!(c.len(), 2);
        assert!(s.has_edge(c[0], c[1]));
        assert_eq!(max_independent_set(&s, &peo), vec![1, 2, 3, 4]);

        let e5 = Skeleton::empty(5);
        let peo = mcs_peo(&e5).unwrap();
        assert_eq!(max_independent_set(&e5, &peo).len(), 5);
        assert_eq!(graph_stats(&e5).unwrap(), GraphStats { chi: 1, alpha: 5 });
    }

    #[test]
    fn two_color_forest_small_cases() {
        let k3 = Skeleton::complete(3);
        let col = greedy_color(&k3, &mcs_peo(&k3).unwrap());
        let f = two_color_forest(&k3, &col, 0, 1);
        assert_eq!(f.num_edges(), 1);
        assert_eq!(f.vertices().len(), 2);
        assert!(f.is_acyclic());

        let p5 = Skeleton::path(5);
        let col = greedy_color(&p5, &mcs_peo(&p5).unwrap());
        assert_eq!(col.num_colors(), 2);
        let f = two_color_forest(&p5, &col, 0, 1);
        assert_eq!(f.num_components(), 1);
        assert_eq!(f.tree_size(0), 5);
        assert!(f.is_acyclic());
    }

    #[test]
    fn subtree_split_small_cases() {
        let s = star(4);
        let col = greedy_color(&s, &mcs_peo(&s).unwrap());
        let f = two_color_forest(&s, &col, 0, 1);
        assert_eq!(f.subtree_split(0), vec![vec![1], vec![2], vec![3], vec![4]]);
        assert_eq!(f.subtree_split(3), vec![vec![0, 1, 2, 4]]);

        let p5 = Skeleton::path(5);
        let col = greedy_color(&p5, &mcs_peo(&p5).unwrap());
        let f = two_color_forest(&p5, &col, 0, 1);
        assert_eq!(f.subtree_split(2), vec![vec![0, 1], vec![3, 4]]);
        assert_eq!(f.split_sizes(2), vec![2, 2]);
        assert_eq!(f.subtree_split(4), vec![vec![0, 1, 2, 3]]);
        assert_eq!(f.split_sizes(4), vec![4]);
    }

    #[test]
    fn edge_list_round_trip_and_errors() {
        let g = Skeleton::new(4, [(0, 1), (1, 2), (2, 3), (1, 3)]).unwrap();
        let text = g.to_edge_list();
        assert!(text.starts_with("4 4\n"));
        assert_eq!(Skeleton::parse_edge_list(&text).unwrap(), g);
        assert!(matches!(
            Skeleton::parse_edge_list("3 2\n0 1\n"),
            Err(GraphError::Parse { .. })
        ));
        assert!(matches!(
            Skeleton::parse_edge_list("3 1\n0 x\n"),
            Err(GraphError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn ordering_rejects_non_permutation() {
        assert!(Ordering::from_perm(vec![0, 0, 1]).is_err());
        assert!(Ordering::from_perm(vec![0, 3, 1]).is_err());
        let o = Ordering::from_perm(vec![2, 0, 1]).unwrap();
        assert_eq!(o.position(2), 0);
        assert_eq!(o.vertex_at(2), 1);
    }
}
