//! Intervention-design strategies. Each consumes a skeleton and a
//! [`Responder`] and returns the learned orientation with its transcript.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::Rng;
use thiserror::Error;

use crate::graph::{greedy_color, mcs_peo, Coloring, Forest, NotChordal, Skeleton};
use crate::instances::rng_from_seed;
use crate::meek::{chain_components, MeekError, Pdag, Rule, TraceEvent};
use crate::oracle::{OracleError, Responder, Transcript};
use crate::sepsys::{build_separating_system, separating_system_with_cap, SepsysError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StrategyError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Meek(#[from] MeekError),
    #[error(transparent)]
    Sepsys(#[from] SepsysError),
    #[error(transparent)]
    NotChordal(#[from] NotChordal),
    #[error("skeleton has {skeleton} vertices but responder has {responder}")]
    SizeMismatch { skeleton: usize, responder: usize },
    #[error("strategy needs {0}")]
    Precondition(&'static str),
    #[error("no progress in a full pass with {0} undirected edges left")]
    Stalled(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Strategy {
    Naive,
    Hybrid,
    Tree,
    RandBlock,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [
        Strategy::Naive,
        Strategy::Hybrid,
        Strategy::Tree,
        Strategy::RandBlock,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Naive => "naive",
            Strategy::Hybrid => "hybrid",
            Strategy::Tree => "tree",
            Strategy::RandBlock => "randblock",
        }
    }

    /// Runs this strategy; `seed` only affects `randblock`.
    pub fn run(
        self,
        g: Arc<Skeleton>,
        k: usize,
        oracle: &mut dyn Responder,
        seed: u64,
    ) -> Result<StrategyResult, StrategyError> {
        match self {
            Strategy::Naive => naive_nonadaptive(g, k, oracle),
            Strategy::Hybrid => hybrid_adaptive(g, k, oracle),
            Strategy::Tree => tree_adaptive(g, oracle),
            Strategy::RandBlock => randomized_block(g, k, oracle, seed),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Strategy::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown strategy {s:?} (expected naive, hybrid, tree or randblock)"))
    }
}

#[derive(Clone, Debug)]
pub struct StrategyResult {
    pub final_pdag: Pdag,
    pub transcript: Transcript,
    pub interventions_used: usize,
    pub trace: Vec<TraceEvent>,
}

/// Learner state shared by all strategies: the current mixed graph, the
/// responder, and the record of what was asked.
pub struct Learner<'a> {
    pdag: Pdag,
    oracle: &'a mut dyn Responder,
    transcript: Transcript,
    trace: Vec<TraceEvent>,
}

impl<'a> Learner<'a> {
    pub fn new(g: Arc<Skeleton>, oracle: &'a mut dyn Responder) -> Result<Self, StrategyError> {
        if g.n() != oracle.n() {
            return Err(StrategyError::SizeMismatch {
                skeleton: g.n(),
                responder: oracle.n(),
            });
        }
        Ok(Learner {
            pdag: Pdag::new(g),
            oracle,
            transcript: Transcript::default(),
            trace: Vec::new(),
        })
    }

    pub fn pdag(&self) -> &Pdag {
        &self.pdag
    }

    pub fn k_cap(&self) -> usize {
        self.oracle.k_cap()
    }

    pub fn is_done(&self) -> bool {
        self.pdag.is_fully_directed()
    }

    /// Intervenes on `set`, applies R0 and closes under R1–R4. Returns the
    /// number of newly oriented edges.
    pub fn intervene(&mut self, mut set: Vec<usize>) -> Result<usize, StrategyError> {
        set.sort_unstable();
        set.dedup();
        let response = self.oracle.respond(&set)?;
        let t = self.transcript.len() + 1;
        let fresh = self.pdag.merge_orientations(&response)?;
        self.trace.extend(fresh.iter().map(|&(u, v)| TraceEvent {
            rule: Rule::R0,
            from: u,
            to: v,
            intervention: Some(t),
        }));
        let inferred = self.pdag.close_from(&fresh);
        let learned = fresh.len() + inferred.len();
        self.trace.extend(inferred);
        self.transcript.push(set, response);
        if !self.pdag.is_acyclic() {
            return Err(MeekError::Cyclic.into());
        }
        Ok(learned)
    }

    pub fn finish(self) -> StrategyResult {
        StrategyResult {
            interventions_used: self.transcript.len(),
            final_pdag: self.pdag,
            transcript: self.transcript,
            trace: self.trace,
        }
    }
}

/// Intervenes with the sets of the `(n, k)` separating system in order,
/// stopping once everything is oriented.
pub fn naive_nonadaptive(
    g: Arc<Skeleton>,
    k: usize,
    oracle: &mut dyn Responder,
) -> Result<StrategyResult, StrategyError> {
    let system = build_separating_system(g.n(), k)?;
    let mut learner = Learner::new(g, oracle)?;
    for set in system.sets {
        if learner.is_done() {
            break;
        }
        learner.intervene(set)?;
    }
    Ok(learner.finish())
}

/// Number of edge directions guaranteed by intervening on `v` in each forest:
/// for every forest, the tree through `v` minus its largest piece after
/// removing `v`. Isolated vertices contribute nothing.
pub fn score_from_forests<'f>(v: usize, forests: impl IntoIterator<Item = &'f Forest>) -> usize {
    forests
        .into_iter()
        .map(|f| {
            let largest = f.split_sizes(v).into_iter().max().unwrap_or(0);
            if largest == 0 {
                0
            } else {
                f.tree_size(v) - largest
            }
        })
        .sum()
}

/// `P(v, c)` against every color `c'` outside `chosen`, computed on the
/// current graph `g` with coloring `col` (`v` must have a color in `chosen`).
pub fn score(v: usize, chosen: &[usize], col: &Coloring, g: &Skeleton) -> usize {
    let c = col.color(v);
    let forests: Vec<Forest> = (0..col.num_colors())
        .filter(|x| !chosen.contains(x))
        .map(|c2| crate::graph::two_color_forest(g, col, c, c2))
        .collect();
    score_from_forests(v, &forests)
}

/// Scores of every vertex of color `c` against all colors outside `chosen`,
/// building each forest once from the edges leaving class `c`.
fn class_scores(c: usize, chosen: &[bool], col: &Coloring, g: &Skeleton) -> Vec<(usize, usize)> {
    let members = col.class(c);
    let mut by_color: Vec<Vec<(usize, usize)>> = vec![Vec::new(); col.num_colors()];
    for &v in members {
        for &w in g.neighbors(v) {
            let c2 = col.color(w);
            if !chosen[c2] {
                by_color[c2].push((v, w));
            }
        }
    }
    let mut totals = vec![0usize; members.len()];
    for (c2, edges) in by_color.into_iter().enumerate() {
        if edges.is_empty() {
            continue;
        }
        let mut verts: Vec<usize> = edges.iter().flat_map(|&(u, w)| [u, w]).collect();
        verts.sort_unstable();
        verts.dedup();
        let f = Forest::from_edges((c, c2), verts, &edges);
        for (i, &v) in members.iter().enumerate() {
            if f.contains(v) {
                totals[i] += score_from_forests(v, [&f]);
            }
        }
    }
    members.iter().copied().zip(totals).collect()
}

/// Hybrid adaptive strategy: repeatedly color what is still undirected, walk
/// a separating system over the colors, and from each chosen color class
/// intervene on the vertices whose forest scores guarantee the most learned
/// edges.
pub fn hybrid_adaptive(
    g: Arc<Skeleton>,
    k: usize,
    oracle: &mut dyn Responder,
) -> Result<StrategyResult, StrategyError> {
    if k == 0 {
        return Err(StrategyError::Precondition("k >= 1"));
    }
    let mut learner = Learner::new(g, oracle)?;
    while !learner.is_done() {
        let before = learner.pdag().undirected_count();
        let current = learner.pdag().undirected_skeleton();
        let col = greedy_color(&current, &mcs_peo(&current)?);
        let chi = col.num_colors();
        let cap = k.min(chi.div_ceil(2));
        let system = separating_system_with_cap(chi, cap);
        for colors in &system.sets {
            if learner.is_done() {
                break;
            }
            let mut chosen = vec![false; chi];
            for &c in colors {
                chosen[c] = true;
            }
            let current = learner.pdag().undirected_skeleton();
            let per_class = if 2 * k <= chi {
                1
            } else {
                (k / colors.len()).max(1)
            };
            let mut set = Vec::new();
            for &c in colors {
                let mut scored: Vec<(usize, usize)> = class_scores(c, &chosen, &col, &current)
                    .into_iter()
                    .filter(|&(_, s)| s > 0)
                    .collect();
                // highest score first, lowest id on ties
                scored.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
                set.extend(scored.into_iter().take(per_class).map(|(v, _)| v));
            }
            set.truncate(k);
            if set.is_empty() {
                continue;
            }
            learner.intervene(set)?;
        }
        let after = learner.pdag().undirected_count();
        if after >= before {
            return Err(StrategyError::Stalled(after));
        }
    }
    Ok(learner.finish())
}

/// Vertex minimizing the largest component left by its removal, lowest id
/// on ties. That component has at most `n / 2` vertices.
pub fn centroid(g: &Skeleton) -> Result<usize, StrategyError> {
    if !g.is_tree() {
        return Err(StrategyError::Precondition("a tree"));
    }
    let n = g.n();
    let mut parent = vec![usize::MAX; n];
    let mut order = vec![0];
    let mut i = 0;
    while i < order.len() {
        let v = order[i];
        i += 1;
        for &w in g.neighbors(v) {
            if w != parent[v] {
                parent[w] = v;
                order.push(w);
            }
        }
    }
    let mut sub = vec![1usize; n];
    for &v in order.iter().rev().take(n - 1) {
        sub[parent[v]] += sub[v];
    }
    let heaviest = |v: usize| {
        g.neighbors(v)
            .iter()
            .map(|&w| if w == parent[v] { n - sub[v] } else { sub[w] })
            .max()
            .unwrap_or(0)
    };
    Ok((0..n).min_by_key(|&v| (heaviest(v), v)).expect("nonempty tree"))
}

/// Single-vertex interventions on a tree: intervene on the centroid of the
/// still-undirected subtree; everything outside the piece containing the
/// centroid's parent then follows by R1.
pub fn tree_adaptive(
    g: Arc<Skeleton>,
    oracle: &mut dyn Responder,
) -> Result<StrategyResult, StrategyError> {
    if g.n() > 0 && !g.is_tree() {
        return Err(StrategyError::Precondition("a tree"));
    }
    let mut learner = Learner::new(g, oracle)?;
    while let Some(part) = chain_components(learner.pdag()).into_iter().next() {
        let a = part.vertices[centroid(&part.skeleton)?];
        learner.intervene(vec![a])?;
    }
    Ok(learner.finish())
}

/// Randomized strategy for complete skeletons: intervene on each block of a
/// random partition into groups of `k`, then learn each block's internal
/// clique by intervening on random halves of its unresolved vertices.
pub fn randomized_block(
    g: Arc<Skeleton>,
    k: usize,
    oracle: &mut dyn Responder,
    seed: u64,
) -> Result<StrategyResult, StrategyError> {
    let n = g.n();
    if g.num_edges() != n * n.saturating_sub(1) / 2 {
        return Err(StrategyError::Precondition("a complete skeleton"));
    }
    if k == 0 || 2 * k >= n {
        return Err(StrategyError::Precondition("1 <= k < n/2"));
    }
    let mut rng = rng_from_seed(seed);
    let mut perm: Vec<usize> = (0..n).collect();
    rand::seq::SliceRandom::shuffle(perm.as_mut_slice(), &mut rng);
    let blocks: Vec<Vec<usize>> = perm.chunks(k).map(<[usize]>::to_vec).collect();
    let mut learner = Learner::new(g, oracle)?;
    for block in &blocks {
        learner.intervene(block.clone())?;
    }
    for block in &blocks {
        loop {
            let open: Vec<usize> = block
                .iter()
                .copied()
                .filter(|&v| learner.pdag().undirected_neighbors(v).next().is_some())
                .collect();
            if open.is_empty() {
                break;
            }
            let set: Vec<usize> = open.into_iter().filter(|_| rng.gen_bool(0.5)).collect();
            if !set.is_empty() {
                learner.intervene(set)?;
            }
        }
    }
    Ok(learner.finish())
}
