//! Intervention responders. A strategy only ever sees the [`Responder`]
//! trait: it submits a vertex set and receives the orientation of every
//! skeleton edge crossing the cut.

use std::fmt;
use std::fmt::Write as _;
use std::sync::Arc;

use thiserror::Error;

use crate::graph::{Ordering, Skeleton};
use crate::meek::{Dag, MeekError, Pdag};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("intervention of size {size} exceeds cap {cap}")]
    TooLarge { size: usize, cap: usize },
    #[error("intervention names vertex {vertex}, graph has {n} vertices")]
    UnknownVertex { vertex: usize, n: usize },
}

/// Answers interventions with the R0 information and meters usage.
pub trait Responder {
    fn n(&self) -> usize;
    fn k_cap(&self) -> usize;
    /// Orientations of all skeleton edges with exactly one endpoint in
    /// `intervention`, sorted. Duplicate ids count once.
    fn respond(&mut self, intervention: &[usize]) -> Result<Vec<(usize, usize)>, OracleError>;
    fn experiments(&self) -> usize;
    fn node_accesses(&self) -> usize;
}

fn normalize(
    n: usize,
    cap: usize,
    intervention: &[usize],
) -> Result<(Vec<usize>, Vec<bool>), OracleError> {
    let mut set = intervention.to_vec();
    set.sort_unstable();
    set.dedup();
    if let Some(&v) = set.iter().find(|&&v| v >= n) {
        return Err(OracleError::UnknownVertex { vertex: v, n });
    }
    if set.len() > cap {
        return Err(OracleError::TooLarge {
            size: set.len(),
            cap,
        });
    }
    let mut inside = vec![false; n];
    for &v in &set {
        inside[v] = true;
    }
    Ok((set, inside))
}

/// Holds the hidden DAG.
#[derive(Clone, Debug)]
pub struct GroundTruth {
    dag: Dag,
    k_cap: usize,
    experiments: usize,
    node_accesses: usize,
}

impl GroundTruth {
    pub fn new(dag: Dag, k_cap: usize) -> Self {
        GroundTruth {
            dag,
            k_cap,
            experiments: 0,
            node_accesses: 0,
        }
    }

    /// The hidden DAG, for verification after a run. Not reachable through
    /// [`Responder`].
    pub fn dag(&self) -> &Dag {
        &self.dag
    }
}

impl Responder for GroundTruth {
    fn n(&self) -> usize {
        self.dag.n()
    }

    fn k_cap(&self) -> usize {
        self.k_cap
    }

    fn respond(&mut self, intervention: &[usize]) -> Result<Vec<(usize, usize)>, OracleError> {
        let (set, inside) = normalize(self.dag.n(), self.k_cap, intervention)?;
        self.experiments += 1;
        self.node_accesses += set.len();
        let g = self.dag.skeleton();
        let mut cut = Vec::new();
        for &v in &set {
            for (w, id) in g.incident(v) {
                if !inside[w] {
                    cut.push(self.dag.direction(id));
                }
            }
        }
        cut.sort_unstable();
        Ok(cut)
    }

    fn experiments(&self) -> usize {
        self.experiments
    }

    fn node_accesses(&self) -> usize {
        self.node_accesses
    }
}

/// Worst-case responder for a complete skeleton. It keeps an ordered
/// partition of the vertices; each intervention splits every block into its
/// intervened part followed by the rest, and cut edges are answered by block
/// order. Vertices sharing a block have never been separated, and no known
/// directed path runs between them, so their edge stays unknown. A learner
/// that finishes has therefore used a separating system.
#[derive(Clone, Debug)]
pub struct AdversarialClique {
    n: usize,
    k_cap: usize,
    blocks: Vec<Vec<usize>>,
    // index into `blocks` for each vertex
    block_of: Vec<usize>,
    experiments: usize,
    node_accesses: usize,
}

impl AdversarialClique {
    pub fn new(n: usize, k_cap: usize) -> Self {
        AdversarialClique {
            n,
            k_cap,
            blocks: if n > 0 { vec![(0..n).collect()] } else { vec![] },
            block_of: vec![0; n],
            experiments: 0,
            node_accesses: 0,
        }
    }

    /// Whether every block is a singleton.
    pub fn is_resolved(&self) -> bool {
        self.blocks.len() == self.n
    }

    /// A DAG consistent with every answer given: blocks in order, each
    /// block by ascending id.
    pub fn realized_dag(&self) -> Dag {
        let perm: Vec<usize> = self.blocks.iter().flatten().copied().collect();
        let sigma = Ordering::from_perm(perm).expect("blocks partition the vertices");
        crate::instances::complete_dag(self.n, &sigma)
    }
}

impl Responder for AdversarialClique {
    fn n(&self) -> usize {
        self.n
    }

    fn k_cap(&self) -> usize {
        self.k_cap
    }

    fn respond(&mut self, intervention: &[usize]) -> Result<Vec<(usize, usize)>, OracleError> {
        let (set, inside) = normalize(self.n, self.k_cap, intervention)?;
        self.experiments += 1;
        self.node_accesses += set.len();
        let mut blocks = Vec::with_capacity(self.blocks.len() * 2);
        for block in self.blocks.drain(..) {
            let (a, b): (Vec<usize>, Vec<usize>) = block.iter().partition(|&&v| inside[v]);
            blocks.extend([a, b].into_iter().filter(|x| !x.is_empty()));
        }
        self.blocks = blocks;
        for (i, block) in self.blocks.iter().enumerate() {
            for &v in block {
                self.block_of[v] = i;
            }
        }
        let mut cut = Vec::new();
        for &v in &set {
            for w in (0..self.n).filter(|&w| !inside[w]) {
                if self.block_of[v] < self.block_of[w] {
                    cut.push((v, w));
                } else {
                    cut.push((w, v));
                }
            }
        }
        cut.sort_unstable();
        Ok(cut)
    }

    fn experiments(&self) -> usize {
        self.experiments
    }

    fn node_accesses(&self) -> usize {
        self.node_accesses
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranscriptEntry {
    pub intervention: Vec<usize>,
    pub response: Vec<(usize, usize)>,
}

/// Ordered interventions with the responses they received.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Transcript {
    pub entries: Vec<TranscriptEntry>,
    pub experiments: usize,
    pub node_accesses: usize,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TranscriptError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Replay(#[from] MeekError),
}

impl Transcript {
    pub fn push(&mut self, intervention: Vec<usize>, response: Vec<(usize, usize)>) {
        self.experiments += 1;
        self.node_accesses += intervention.len();
        self.entries.push(TranscriptEntry {
            intervention,
            response,
        });
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn interventions(&self) -> impl Iterator<Item = &[usize]> {
        self.entries.iter().map(|e| e.intervention.as_slice())
    }

    /// Reapplies every response plus closure to a fresh all-undirected state.
    pub fn replay(&self, skeleton: Arc<Skeleton>) -> Result<Pdag, MeekError> {
        let mut p = Pdag::new(skeleton);
        for e in &self.entries {
            let fresh = p.merge_orientations(&e.response)?;
            p.close_from(&fresh);
        }
        Ok(p)
    }

    /// Parses the line format written by `Display`. Counters are recomputed.
    pub fn parse(text: &str) -> Result<Self, TranscriptError> {
        let mut t = Transcript::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let l = raw.trim();
            if l.is_empty() || l.starts_with('#') {
                continue;
            }
            let err = |msg: &str| TranscriptError::Parse {
                line,
                msg: msg.to_string(),
            };
            let rest = l.strip_prefix("I ").ok_or_else(|| err("expected 'I <t>:'"))?;
            let (_, rest) = rest.split_once(':').ok_or_else(|| err("missing ':'"))?;
            let (set, resp) = rest.split_once("->").ok_or_else(|| err("missing '->'"))?;
            let set = set.trim();
            let inner = set
                .strip_prefix('{')
                .and_then(|s| s.strip_suffix('}'))
                .ok_or_else(|| err("intervention must be braced"))?;
            let ids = inner
                .split_whitespace()
                .map(|x| x.parse::<usize>().map_err(|_| err("bad vertex id")))
                .collect::<Result<Vec<_>, _>>()?;
            let mut edges = Vec::new();
            for part in resp.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let (u, v) = part.split_once('>').ok_or_else(|| err("edge must be u>v"))?;
                let u = u.trim().parse().map_err(|_| err("bad edge tail"))?;
                let v = v.trim().parse().map_err(|_| err("bad edge head"))?;
                edges.push((u, v));
            }
            t.push(ids, edges);
        }
        Ok(t)
    }
}

impl fmt::Display for Transcript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (t, e) in self.entries.iter().enumerate() {
            let mut line = String::new();
            let ids: Vec<String> = e.intervention.iter().map(|v| v.to_string()).collect();
            write!(line, "I {}: {{{}}} ->", t + 1, ids.join(" ")).unwrap();
            let edges: Vec<String> = e.response.iter().map(|(u, v)| format!("{u}>{v}")).collect();
            if !edges.is_empty() {
                write!(line, " {}", edges.join(", ")).unwrap();
            }
            writeln!(f, "{line}")?;
        }
        writeln!(
            f,
            "# experiments={} node_accesses={}",
            self.experiments, self.node_accesses
        )
    }
}
