//! Partially directed graphs, the orientation rules R0–R4, and a brute-force
//! closure oracle that enumerates consistent extensions directly.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::graph::{ones, BitMatrix, EdgeId, Ordering, Skeleton, Subgraph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MeekError {
    #[error("edge {0}-{1} is not in the skeleton")]
    MissingEdge(usize, usize),
    #[error("conflicting orientation: {from}->{to} requested but {to}->{from} is known")]
    Conflict { from: usize, to: usize },
    #[error("directed part contains a cycle")]
    Cyclic,
    #[error("orientation leaves edge {0}-{1} undirected")]
    Incomplete(usize, usize),
    #[error("brute-force closure is limited to {max} vertices, got {n}")]
    TooLarge { n: usize, max: usize },
    #[error("no acyclic immorality-free extension is consistent with the known edges")]
    NoExtension,
}

/// State of a skeleton edge `(lo, hi)` with `lo < hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mark {
    Undirected,
    /// `lo -> hi`
    Forward,
    /// `hi -> lo`
    Backward,
}

/// The rule that produced an orientation. `R0` is an intervention response.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    R0,
    R1,
    R2,
    R3,
    R4,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rule::R0 => "R0",
            Rule::R1 => "R1",
            Rule::R2 => "R2",
            Rule::R3 => "R3",
            Rule::R4 => "R4",
        };
        f.write_str(s)
    }
}

/// One line of the orientation trace.
///
/// Formats as `R0 u->v | I=<t>` for intervention responses and `R1 u->v`
/// (through `R4`) for rule conclusions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TraceEvent {
    pub rule: Rule,
    pub from: usize,
    pub to: usize,
    /// 1-based intervention index, set for R0 events.
    pub intervention: Option<usize>,
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}->{}", self.rule, self.from, self.to)?;
        if let Some(t) = self.intervention {
            write!(f, " | I={t}")?;
        }
        Ok(())
    }
}

/// A mixed graph over a fixed skeleton: each edge is undirected or directed.
#[derive(Clone, PartialEq, Eq)]
pub struct Pdag {
    skeleton: Arc<Skeleton>,
    marks: Vec<Mark>,
    undirected: usize,
    // row u: children of u
    out: BitMatrix,
    // row v: parents of v
    inc: BitMatrix,
}

impl fmt::Debug for Pdag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Pdag")
            .field("n", &self.n())
            .field("directed", &self.directed_edges())
            .field("undirected", &self.undirected_edges())
            .finish()
    }
}

impl Pdag {
    /// All edges undirected.
    pub fn new(skeleton: Arc<Skeleton>) -> Self {
        let m = skeleton.num_edges();
        let n = skeleton.n();
        Pdag {
            out: BitMatrix::new(n),
            inc: BitMatrix::new(n),
            skeleton,
            marks: vec![Mark::Undirected; m],
            undirected: m,
        }
    }

    /// Builds a Pdag with the given directed edges (checked for acyclicity).
    pub fn with_directed(
        skeleton: Arc<Skeleton>,
        edges: &[(usize, usize)],
    ) -> Result<Self, MeekError> {
        let mut p = Pdag::new(skeleton);
        p.merge_orientations(edges)?;
        if !p.is_acyclic() {
            return Err(MeekError::Cyclic);
        }
        Ok(p)
    }

    pub fn skeleton(&self) -> &Skeleton {
        &self.skeleton
    }

    pub fn skeleton_arc(&self) -> &Arc<Skeleton> {
        &self.skeleton
    }

    pub fn n(&self) -> usize {
        self.skeleton.n()
    }

    pub fn mark(&self, id: EdgeId) -> Mark {
        self.marks[id]
    }

    /// Direction of edge `id` as `(tail, head)`, if directed.
    pub fn direction(&self, id: EdgeId) -> Option<(usize, usize)> {
        let (u, v) = self.skeleton.edge(id);
        match self.marks[id] {
            Mark::Undirected => None,
            Mark::Forward => Some((u, v)),
            Mark::Backward => Some((v, u)),
        }
    }

    fn points(&self, id: EdgeId, from: usize) -> bool {
        let (u, _) = self.skeleton.edge(id);
        match self.marks[id] {
            Mark::Undirected => false,
            Mark::Forward => from == u,
            Mark::Backward => from != u,
        }
    }

    /// `u -> v` is known.
    pub fn is_directed(&self, u: usize, v: usize) -> bool {
        u < self.n() && v < self.n() && self.out.get(u, v)
    }

    /// `u - v` is an edge with unknown direction.
    pub fn is_undirected(&self, u: usize, v: usize) -> bool {
        self.skeleton
            .edge_id(u, v)
            .is_some_and(|id| self.marks[id] == Mark::Undirected)
    }

    pub fn parents(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.skeleton
            .incident(v)
            .filter(move |&(w, id)| self.points(id, w))
            .map(|(w, _)| w)
    }

    pub fn children(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.skeleton
            .incident(v)
            .filter(move |&(_, id)| self.points(id, v))
            .map(|(w, _)| w)
    }

    pub fn undirected_neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.skeleton
            .incident(v)
            .filter(move |&(_, id)| self.marks[id] == Mark::Undirected)
            .map(|(w, _)| w)
    }

    pub fn undirected_count(&self) -> usize {
        self.undirected
    }

    pub fn is_fully_directed(&self) -> bool {
        self.undirected == 0
    }

    pub fn directed_edges(&self) -> Vec<(usize, usize)> {
        (0..self.marks.len()).filter_map(|id| self.direction(id)).collect()
    }

    pub fn undirected_edges(&self) -> Vec<(usize, usize)> {
        (0..self.marks.len())
            .filter(|&id| self.marks[id] == Mark::Undirected)
            .map(|id| self.skeleton.edge(id))
            .collect()
    }

    /// Skeleton of the undirected part, on all `n` vertices.
    pub fn undirected_skeleton(&self) -> Skeleton {
        Skeleton::new(self.n(), self.undirected_edges()).expect("subset of a valid skeleton")
    }

    /// Orients `u -> v`. Returns whether the edge was previously undirected.
    fn orient(&mut self, u: usize, v: usize) -> Result<bool, MeekError> {
        let id = self
            .skeleton
            .edge_id(u, v)
            .ok_or(MeekError::MissingEdge(u, v))?;
        let want = if u < v { Mark::Forward } else { Mark::Backward };
        match self.marks[id] {
            Mark::Undirected => {
                self.marks[id] = want;
                self.undirected -= 1;
                self.out.set(u, v);
                self.inc.set(v, u);
                Ok(true)
            }
            m if m == want => Ok(false),
            _ => Err(MeekError::Conflict { from: u, to: v }),
        }
    }

    /// Applies directed edges, returning those that were new. Edges already
    /// known in the same direction are accepted silently; an opposite
    /// direction is a conflict and leaves `self` unchanged.
    pub fn merge_orientations(
        &mut self,
        edges: &[(usize, usize)],
    ) -> Result<Vec<(usize, usize)>, MeekError> {
        for &(u, v) in edges {
            let id = self
                .skeleton
                .edge_id(u, v)
                .ok_or(MeekError::MissingEdge(u, v))?;
            if self.marks[id] != Mark::Undirected && !self.points(id, u) {
                return Err(MeekError::Conflict { from: u, to: v });
            }
        }
        let mut fresh = Vec::new();
        for &(u, v) in edges {
            if self.orient(u, v)? {
                fresh.push((u, v));
            }
        }
        Ok(fresh)
    }

    /// Whether the directed part is acyclic (Kahn's algorithm).
    pub fn is_acyclic(&self) -> bool {
        let n = self.n();
        let mut indeg = vec![0usize; n];
        for id in 0..self.marks.len() {
            if let Some((_, h)) = self.direction(id) {
                indeg[h] += 1;
            }
        }
        let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for w in self.children(v) {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    stack.push(w);
                }
            }
        }
        seen == n
    }

    /// Runs R1–R4 to a fixpoint over the whole graph.
    pub fn meek_closure(&mut self) -> Vec<TraceEvent> {
        let seeds = self.directed_edges();
        self.close_from(&seeds)
    }

    /// Runs R1–R4 to a fixpoint, assuming the state before `seeds` were
    /// oriented was already closed. Only undirected edges near a fresh
    /// orientation can newly satisfy a rule premise, so those are the ones
    /// queued. The queue is first-in first-out, seeded in edge-id order.
    pub fn close_from(&mut self, seeds: &[(usize, usize)]) -> Vec<TraceEvent> {
        let mut queue = Worklist::new(self.marks.len());
        let mut touched = vec![false; self.n()];
        for &(u, v) in seeds {
            touched[u] = true;
            touched[v] = true;
        }
        let mut first: Vec<EdgeId> = (0..self.n())
            .filter(|&x| touched[x])
            .flat_map(|x| self.skeleton.incident(x).map(|(_, id)| id))
            .filter(|&id| self.marks[id] == Mark::Undirected)
            .collect();
        first.sort_unstable();
        for id in first {
            queue.push(id);
        }
        for &(u, v) in seeds {
            self.enqueue_r4(u, v, &mut queue);
        }
        let mut events = Vec::new();
        while let Some(id) = queue.pop() {
            if self.marks[id] != Mark::Undirected {
                continue;
            }
            let (x, y) = self.skeleton.edge(id);
            let found = self
                .rule_for(x, y)
                .map(|r| (r, x, y))
                .or_else(|| self.rule_for(y, x).map(|r| (r, y, x)));
            if let Some((rule, a, b)) = found {
                self.orient(a, b).expect("rule target is undirected");
                events.push(TraceEvent {
                    rule,
                    from: a,
                    to: b,
                    intervention: None,
                });
                for z in [a, b] {
                    for (_, e) in self.skeleton.incident(z) {
                        if self.marks[e] == Mark::Undirected {
                            queue.push(e);
                        }
                    }
                }
                self.enqueue_r4(a, b, &mut queue);
            }
        }
        events
    }

    /// Undirected neighbors of `v` as a bitset.
    fn undirected_row(&self, v: usize) -> impl Iterator<Item = u64> + '_ {
        let adj = self.skeleton.adjacency_row(v);
        let (o, i) = (self.out.row(v), self.inc.row(v));
        (0..adj.len()).map(move |w| adj[w] & !o[w] & !i[w])
    }

    /// Queues the undirected edges that `u -> v` can complete an R4 premise
    /// for, beyond those incident to `u` or `v`.
    fn enqueue_r4(&self, u: usize, v: usize, queue: &mut Worklist) {
        let g = &*self.skeleton;
        // R4 with u -> v as the d -> b premise: targets a - c where v -> c,
        // a - v, a - u and u, c non-adjacent.
        let common: Vec<u64> = self
            .undirected_row(u)
            .zip(self.undirected_row(v))
            .map(|(x, y)| x & y)
            .collect();
        if common.iter().all(|&w| w == 0) {
            return;
        }
        let adj_u = g.adjacency_row(u);
        let far = self.out.row(v).iter().zip(adj_u).map(|(c, a)| c & !a);
        for c in ones(far.collect::<Vec<_>>()) {
            if c == u {
                continue;
            }
            let targets = self.undirected_row(c).zip(&common).map(|(x, y)| x & y);
            for a in ones(targets.collect::<Vec<_>>()) {
                queue.push(g.edge_id(a, c).expect("undirected neighbors are adjacent"));
            }
        }
    }

    /// The first rule (in R1..R4 order) that orients the undirected edge
    /// `a - b` as `a -> b`.
    fn rule_for(&self, a: usize, b: usize) -> Option<Rule> {
        let g = &*self.skeleton;
        let adj_b = g.adjacency_row(b);
        let pa_b = self.inc.row(b);
        // R1: c -> a, c and b non-adjacent (b itself is not a parent of a)
        let pa_a = self.inc.row(a);
        if (0..adj_b.len()).any(|w| pa_a[w] & !adj_b[w] != 0) {
            return Some(Rule::R1);
        }
        // R2: a -> c -> b
        let ch_a = self.out.row(a);
        if (0..adj_b.len()).any(|w| ch_a[w] & pa_b[w] != 0) {
            return Some(Rule::R2);
        }
        // R3: a - c, a - d, c -> b, d -> b, c and d non-adjacent
        let un_a: Vec<u64> = self.undirected_row(a).collect();
        let mids: Vec<u64> = un_a.iter().zip(pa_b).map(|(x, y)| x & y).collect();
        for c in ones(mids.iter().copied()) {
            let adj_c = g.adjacency_row(c);
            let lone = mids
                .iter()
                .zip(adj_c)
                .enumerate()
                .any(|(w, (m, ac))| m & !ac & !own_bit(c, w) != 0);
            if lone {
                return Some(Rule::R3);
            }
        }
        // R4: a - x, x -> b, a - d, d -> x, d and b non-adjacent
        for x in ones(mids.iter().copied()) {
            let pa_x = self.inc.row(x);
            if (0..adj_b.len()).any(|w| un_a[w] & pa_x[w] & !adj_b[w] != 0) {
                return Some(Rule::R4);
            }
        }
        None
    }
}

/// FIFO of edge ids; an id is held at most once at a time.
struct Worklist {
    items: std::collections::VecDeque<EdgeId>,
    queued: Vec<bool>,
}

impl Worklist {
    fn new(m: usize) -> Self {
        Worklist {
            items: Default::default(),
            queued: vec![false; m],
        }
    }

    fn push(&mut self, id: EdgeId) {
        if !self.queued[id] {
            self.queued[id] = true;
            self.items.push_back(id);
        }
    }

    fn pop(&mut self) -> Option<EdgeId> {
        let id = self.items.pop_front()?;
        self.queued[id] = false;
        Some(id)
    }
}

/// The bit of `v` if it falls in word `w`.
fn own_bit(v: usize, w: usize) -> u64 {
    if v / 64 == w {
        1 << (v % 64)
    } else {
        0
    }
}

/// Closure of a copy of `p`.
pub fn meek_closure(p: &Pdag) -> Pdag {
    let mut q = p.clone();
    q.meek_closure();
    q
}

/// A full orientation of a skeleton.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dag {
    pdag: Pdag,
}

impl Dag {
    /// Validates that `edges` orient every skeleton edge acyclically.
    pub fn from_edges(skeleton: Arc<Skeleton>, edges: &[(usize, usize)]) -> Result<Self, MeekError> {
        let pdag = Pdag::with_directed(skeleton, edges)?;
        if let Some(&(u, v)) = pdag.undirected_edges().first() {
            return Err(MeekError::Incomplete(u, v));
        }
        Ok(Dag { pdag })
    }

    pub fn skeleton(&self) -> &Skeleton {
        self.pdag.skeleton()
    }

    pub fn skeleton_arc(&self) -> &Arc<Skeleton> {
        self.pdag.skeleton_arc()
    }

    pub fn n(&self) -> usize {
        self.pdag.n()
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.pdag.is_directed(u, v)
    }

    pub fn direction(&self, id: EdgeId) -> (usize, usize) {
        self.pdag.direction(id).expect("every dag edge is directed")
    }

    pub fn parents(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.pdag.parents(v)
    }

    pub fn children(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.pdag.children(v)
    }

    pub fn arcs(&self) -> Vec<(usize, usize)> {
        self.pdag.directed_edges()
    }

    pub fn as_pdag(&self) -> &Pdag {
        &self.pdag
    }

    /// Parses the sidecar orientation format (`u v` per arc) against a skeleton.
    pub fn parse_arcs(skeleton: Arc<Skeleton>, text: &str) -> Result<Self, crate::Error> {
        let mut arcs = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let [u, v] = crate::graph::parse_pair(i + 1, line)?;
            arcs.push((u, v));
        }
        Ok(Dag::from_edges(skeleton, &arcs)?)
    }

    pub fn to_arc_list(&self) -> String {
        self.arcs().iter().map(|(u, v)| format!("{u} {v}\n")).collect()
    }
}

/// Orients every edge from the earlier to the later endpoint under `sigma`.
pub fn orient_from_ordering(g: Arc<Skeleton>, sigma: &Ordering) -> Dag {
    let arcs: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .map(|&(u, v)| {
            if sigma.position(u) < sigma.position(v) {
                (u, v)
            } else {
                (v, u)
            }
        })
        .collect();
    Dag::from_edges(g, &arcs).expect("an ordering induces an acyclic orientation")
}

/// All induced `x -> z <- y` with `x`, `y` non-adjacent, reported with `x < y`.
pub fn find_immoralities(d: &Dag) -> Vec<(usize, usize, usize)> {
    let g = d.skeleton();
    let mut out = Vec::new();
    for z in 0..d.n() {
        let pa: Vec<usize> = d.parents(z).collect();
        for (i, &x) in pa.iter().enumerate() {
            for &y in &pa[i + 1..] {
                if !g.has_edge(x, y) {
                    out.push((x.min(y), z, x.max(y)));
                }
            }
        }
    }
    out.sort_unstable();
    out
}

/// Largest graph accepted by [`brute_force_closure`].
pub const BRUTE_FORCE_MAX_N: usize = 10;

/// Graph union of every acyclic, immorality-free orientation of `p`'s
/// skeleton that agrees with `p`'s directed edges.
///
/// Such orientations are exactly the topological orders in which each vertex's
/// already-placed neighbors form a clique and each known arc `u -> v` has `u`
/// placed first, so the search walks those orders with pruning.
pub fn brute_force_closure(p: &Pdag) -> Result<Pdag, MeekError> {
    let n = p.n();
    if n > BRUTE_FORCE_MAX_N {
        return Err(MeekError::TooLarge {
            n,
            max: BRUTE_FORCE_MAX_N,
        });
    }
    let g = p.skeleton();
    let m = g.num_edges();
    let mut seen_fwd = vec![false; m];
    let mut seen_bwd = vec![false; m];
    let mut placed = vec![false; n];
    let mut pos = vec![0usize; n];
    let mut count = 0usize;

    #[allow(clippy::too_many_arguments)]
    fn rec(
        p: &Pdag,
        depth: usize,
        placed: &mut [bool],
        pos: &mut [usize],
        seen_fwd: &mut [bool],
        seen_bwd: &mut [bool],
        count: &mut usize,
    ) {
        let g = p.skeleton();
        let n = g.n();
        if depth == n {
            *count += 1;
            for (id, &(u, v)) in g.edges().iter().enumerate() {
                if pos[u] < pos[v] {
                    seen_fwd[id] = true;
                } else {
                    seen_bwd[id] = true;
                }
            }
            return;
        }
        for v in 0..n {
            if placed[v] || p.parents(v).any(|w| !placed[w]) {
                continue;
            }
            let before: Vec<usize> = g.neighbors(v).iter().copied().filter(|&w| placed[w]).collect();
            if !g.is_clique(&before) || before.iter().any(|&w| p.is_directed(v, w)) {
                continue;
            }
            placed[v] = true;
            pos[v] = depth;
            rec(p, depth + 1, placed, pos, seen_fwd, seen_bwd, count);
            placed[v] = false;
        }
    }

    rec(
        p,
        0,
        &mut placed,
        &mut pos,
        &mut seen_fwd,
        &mut seen_bwd,
        &mut count,
    );
    if count == 0 {
        return Err(MeekError::NoExtension);
    }
    let mut out = Pdag::new(p.skeleton_arc().clone());
    for (id, &(u, v)) in g.edges().iter().enumerate() {
        match (seen_fwd[id], seen_bwd[id]) {
            (true, false) => {
                out.orient(u, v)?;
            }
            (false, true) => {
                out.orient(v, u)?;
            }
            _ => {}
        }
    }
    Ok(out)
}

/// Connected components of the undirected part, each as an induced subgraph
/// of undirected edges. Vertices with no undirected edge are omitted.
pub fn chain_components(p: &Pdag) -> Vec<Subgraph> {
    let und = p.undirected_skeleton();
    und.components()
        .into_iter()
        .filter(|c| c.len() > 1)
        .map(|c| und.induced(&c))
        .collect()
}
