//! Separating systems: the digit labeling with balanced letter frequencies,
//! the construction built from it, an exhaustive verifier, and the size
//! bounds used as reference curves.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SepsysError {
    #[error("separating system needs 1 <= k < n/2, got n={n}, k={k}")]
    InvalidCap { n: usize, k: usize },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundError {
    #[error("bound undefined for n={n}, k={k}: {reason}")]
    Domain {
        n: usize,
        k: usize,
        reason: &'static str,
    },
}

/// Smallest `l` with `base^l >= n` (0 for `n <= 1`).
pub fn ceil_log(base: usize, n: usize) -> usize {
    assert!(base >= 2, "logarithm base must be at least 2");
    let mut l = 0;
    let mut p = 1usize;
    while p < n {
        p = p.saturating_mul(base);
        l += 1;
    }
    l
}

/// Labels of `n` elements over letters `0..=a`: `row(d)` is digit `d`
/// (least significant first) across all elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelMatrix {
    n: usize,
    a: usize,
    rows: Vec<Vec<usize>>,
}

impl LabelMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alphabet(&self) -> usize {
        self.a
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn row(&self, digit: usize) -> &[usize] {
        &self.rows[digit]
    }

    /// Label of element `j`, least significant digit first.
    pub fn label(&self, j: usize) -> Vec<usize> {
        self.rows.iter().map(|r| r[j]).collect()
    }

    /// Most frequent letter count in any single digit.
    pub fn max_letter_frequency(&self) -> usize {
        self.rows
            .iter()
            .map(|r| {
                let mut counts = vec![0usize; self.a + 1];
                for &x in r {
                    counts[x] += 1;
                }
                counts.into_iter().max().unwrap_or(0)
            })
            .max()
            .unwrap_or(0)
    }
}

/// Digit-by-digit labeling of `0..n` with `ceil(log_a n)` digits.
///
/// For digit `d` (1-based) write `n = p_d a^d + r_d` and
/// `n = p_{d-1} a^{d-1} + r_{d-1}`:
/// 1. cycle through `0..a`, each letter repeated `a^{d-1}` times, for the
///    first `p_d a^d` positions;
/// 2. fill the remaining `r_d` positions with `0, 1, ..`, each repeated
///    `ceil(r_d / a)` times;
/// 3. add one to every letter after position `a^{d-1} p_{d-1}`.
pub fn label_elements(n: usize, a: usize) -> LabelMatrix {
    assert!(n >= 1 && a >= 2, "labeling needs n >= 1 and a >= 2");
    let ell = ceil_log(a, n);
    let mut rows = Vec::with_capacity(ell);
    let mut block = 1usize; // a^{d-1}
    for _ in 0..ell {
        let full = block * a; // a^d; bounded by a * n since a^{d-1} < n
        let p_d = n / full;
        let r_d = n % full;
        let boundary = block * (n / block);
        let mut row = Vec::with_capacity(n);
        for pos in 0..p_d * full {
            row.push((pos / block) % a);
        }
        if r_d > 0 {
            let run = r_d.div_ceil(a);
            for pos in 0..r_d {
                row.push(pos / run);
            }
        }
        for x in row.iter_mut().skip(boundary) {
            *x += 1;
        }
        rows.push(row);
        block = full;
    }
    LabelMatrix { n, a, rows }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparatingSystem {
    pub ground_n: usize,
    pub k: usize,
    pub sets: Vec<Vec<usize>>,
}

impl SeparatingSystem {
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// One set per line, space-separated element ids.
    pub fn to_lines(&self) -> String {
        let mut s = String::new();
        for set in &self.sets {
            let ids: Vec<String> = set.iter().map(|x| x.to_string()).collect();
            writeln!(s, "{}", ids.join(" ")).unwrap();
        }
        s
    }
}

/// Construction over an arbitrary cap `k >= 1`: alphabet size
/// `a = max(2, ceil(n/k))`, and one set per (digit, nonzero letter) holding
/// the elements with that letter. Every letter appears at most
/// `ceil(n/a) <= k` times per digit, so sets respect the cap.
pub fn separating_system_with_cap(n: usize, k: usize) -> SeparatingSystem {
    assert!(k >= 1, "cap must be positive");
    if n <= 1 {
        return SeparatingSystem {
            ground_n: n,
            k,
            sets: Vec::new(),
        };
    }
    let a = n.div_ceil(k).max(2);
    let labels = label_elements(n, a);
    let mut sets = Vec::new();
    for d in 0..labels.len() {
        let row = labels.row(d);
        let mut by_letter = vec![Vec::new(); a + 1];
        for (j, &x) in row.iter().enumerate() {
            by_letter[x].push(j);
        }
        sets.extend(by_letter.into_iter().skip(1).filter(|s| !s.is_empty()));
    }
    SeparatingSystem {
        ground_n: n,
        k,
        sets,
    }
}

/// The `(n, k)` separating system from the labeling with `a = ceil(n/k)`.
/// Requires `1 <= k < n/2`; `n = 1` yields the empty system.
pub fn build_separating_system(n: usize, k: usize) -> Result<SeparatingSystem, SepsysError> {
    if n <= 1 && k >= 1 {
        return Ok(separating_system_with_cap(n, k));
    }
    if k == 0 || 2 * k >= n {
        return Err(SepsysError::InvalidCap { n, k });
    }
    Ok(separating_system_with_cap(n, k))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeparationFailure {
    Unseparated(usize, usize),
    Oversized { set: usize, size: usize },
    OutOfRange { set: usize, element: usize },
}

/// Exhaustive check: sizes within the cap, and every pair split by some
/// set. Elements with identical membership signatures are exactly the
/// unseparated pairs; the first element to repeat an earlier signature is
/// reported with that earlier element.
pub fn verify_separating(s: &SeparatingSystem) -> Result<(), SeparationFailure> {
    let words = s.sets.len().div_ceil(64);
    let mut sig = vec![vec![0u64; words]; s.ground_n];
    for (i, set) in s.sets.iter().enumerate() {
        if set.len() > s.k {
            return Err(SeparationFailure::Oversized {
                set: i,
                size: set.len(),
            });
        }
        for &e in set {
            if e >= s.ground_n {
                return Err(SeparationFailure::OutOfRange { set: i, element: e });
            }
            sig[e][i / 64] |= 1 << (i % 64);
        }
    }
    let mut first: HashMap<&[u64], usize> = HashMap::new();
    for (j, word) in sig.iter().enumerate() {
        if let Some(&i) = first.get(word.as_slice()) {
            return Err(SeparationFailure::Unseparated(i, j));
        }
        first.insert(word, j);
    }
    Ok(())
}

/// `(n/k) log_{ne/k} n`, the lower bound for any `(n, k)` separating system.
pub fn katona_lower_bound(n: usize, k: usize) -> Result<f64, BoundError> {
    entropic_bound(n, k)
}

/// The same bound on the largest clique: `(chi/k) log_{chi e/k} chi`.
pub fn chromatic_lower_bound(chi: usize, k: usize) -> Result<f64, BoundError> {
    entropic_bound(chi, k)
}

fn entropic_bound(n: usize, k: usize) -> Result<f64, BoundError> {
    if k == 0 {
        return Err(BoundError::Domain {
            n,
            k,
            reason: "k must be positive",
        });
    }
    if n <= 1 {
        return Ok(0.0);
    }
    if 2 * k >= n {
        return Err(BoundError::Domain {
            n,
            k,
            reason: "requires k < n/2",
        });
    }
    let (nf, kf) = (n as f64, k as f64);
    let base = nf * std::f64::consts::E / kf;
    if base <= 1.0 {
        return Err(BoundError::Domain {
            n,
            k,
            reason: "log base ne/k must exceed 1",
        });
    }
    Ok(nf / kf * nf.ln() / base.ln())
}

/// `n / (2k)`: interventions needed by any algorithm, randomized included.
pub fn info_lower_bound(n: usize, k: usize) -> f64 {
    assert!(k >= 1, "k must be positive");
    n as f64 / (2.0 * k as f64)
}

/// Size guarantee of [`build_separating_system`]:
/// `ceil(n/k) * ceil(log_{ceil(n/k)} n)`.
pub fn construction_size_bound(n: usize, k: usize) -> usize {
    let a = n.div_ceil(k).max(2);
    a * ceil_log(a, n)
}

/// Best known achievable size `(ceil(n/k) - 1) * ceil(log_{ceil(n/k)} n)`,
/// used only as a reference curve.
pub fn best_known_upper_bound(n: usize, k: usize) -> Result<usize, BoundError> {
    if k == 0 || 2 * k >= n {
        return Err(BoundError::Domain {
            n,
            k,
            reason: "requires 1 <= k < n/2",
        });
    }
    let a = n.div_ceil(k);
    Ok((a - 1) * ceil_log(a, n))
}
