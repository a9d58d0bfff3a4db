//! Subspace collections and their correlation coefficients.
//!
//! For s-dimensional subspaces the pair coefficient is
//! `r_ij = dim(B_i ∩ B_j) / s` and a collection's coefficient `r_S` sums
//! `r_ij` over all ordered pairs, diagonal included. Everything is held as the
//! integer numerator `Σ dim(B_i ∩ B_j)` so comparisons are exact; the real
//! value is produced only at the API surface.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, mismatch, Error, Result};
use crate::subspace::{enumerate_subspaces, gaussian_binomial, intersect_dim, Subspace};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubspaceCollection {
    m: usize,
    s: usize,
    members: Vec<Subspace>,
    dim_sum: u64,
}

impl SubspaceCollection {
    /// Validates and wraps an ordered list of distinct s-dimensional subspaces
    /// (s ≥ 1) of a common F₂^m.
    pub fn new(members: Vec<Subspace>) -> Result<Self> {
        let first = members
            .first()
            .ok_or_else(|| invalid("a collection needs at least one subspace"))?;
        let (m, s) = (first.ambient_dim(), first.dim());
        if s == 0 {
            return Err(invalid("collection subspaces must have dimension >= 1"));
        }
        for b in &members {
            if b.ambient_dim() != m || b.dim() != s {
                return Err(mismatch(format!(
                    "collection mixes {s}-dim subspaces of F2^{m} with a {}-dim subspace of F2^{}",
                    b.dim(),
                    b.ambient_dim()
                )));
            }
        }
        let mut seen = HashSet::with_capacity(members.len());
        if !members.iter().all(|b| seen.insert(b)) {
            return Err(invalid("collection members must be distinct"));
        }
        let dim_sum = dim_sum(&members)?;
        Ok(Self {
            m,
            s,
            members,
            dim_sum,
        })
    }

    /// All s-dimensional subspaces in enumeration order.
    pub fn full(m: usize, s: usize) -> Result<Self> {
        Self::new(enumerate_subspaces(m, s)?)
    }

    pub fn ambient_dim(&self) -> usize {
        self.m
    }

    pub fn subspace_dim(&self) -> usize {
        self.s
    }

    pub fn members(&self) -> &[Subspace] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Exact `s · r_S`, i.e. `Σ_i Σ_j dim(B_i ∩ B_j)`.
    pub fn r_s_numerator(&self) -> u64 {
        self.dim_sum
    }

    pub fn r_s(&self) -> f64 {
        self.dim_sum as f64 / self.s as f64
    }

    /// True when every pair of members meets only in the zero vector.
    pub fn is_partial_spread(&self) -> bool {
        self.dim_sum == (self.len() * self.s) as u64
    }

    /// Text form: one subspace per line as comma-separated binary basis
    /// vectors, followed by a `# r_S = <value>` footer.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for b in &self.members {
            out.push_str(&format_subspace(b));
            out.push('\n');
        }
        out.push_str(&format!("# r_S = {}\n", self.r_s()));
        out
    }

    /// Parses the text form. Comment lines start with `#`; a `# r_S = …`
    /// comment, when present, must match the recomputed value.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut members = Vec::new();
        let mut declared = None;
        let mut width = None;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let lineno = i + 1;
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                if let Some(value) = comment.trim().strip_prefix("r_S") {
                    let value = value.trim().trim_start_matches('=').trim();
                    let v: f64 = value.parse().map_err(|_| Error::Parse {
                        line: lineno,
                        msg: format!("bad r_S value {value:?}"),
                    })?;
                    declared = Some((lineno, v));
                }
                continue;
            }
            let b = parse_subspace(line).map_err(|e| Error::Parse {
                line: lineno,
                msg: e.to_string(),
            })?;
            match width {
                None => width = Some(b.ambient_dim()),
                Some(w) if w != b.ambient_dim() => {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: format!("vector width {} differs from {w}", b.ambient_dim()),
                    })
                }
                _ => {}
            }
            members.push(b);
        }
        let collection = Self::new(members)?;
        if let Some((line, v)) = declared {
            if (v - collection.r_s()).abs() > 1e-9 {
                return Err(Error::Parse {
                    line,
                    msg: format!(
                        "declared r_S = {v} but the collection has r_S = {}",
                        collection.r_s()
                    ),
                });
            }
        }
        Ok(collection)
    }
}

fn dim_sum(members: &[Subspace]) -> Result<u64> {
    let mut total = 0u64;
    for (i, a) in members.iter().enumerate() {
        total += a.dim() as u64;
        for b in &members[i + 1..] {
            total += 2 * intersect_dim(a, b)? as u64;
        }
    }
    Ok(total)
}

/// Basis vectors as fixed-width binary strings joined by commas.
pub fn format_subspace(b: &Subspace) -> String {
    let m = b.ambient_dim();
    b.basis()
        .iter()
        .map(|&v| format!("{v:0m$b}"))
        .collect::<Vec<_>>()
        .join(",")
}

/// Inverse of [`format_subspace`]; the basis need not be canonical. The
/// ambient dimension is the string width.
pub fn parse_subspace(line: &str) -> Result<Subspace> {
    let mut width = None;
    let mut vectors = Vec::new();
    for field in line.split(',') {
        let field = field.trim();
        if field.is_empty() || !field.bytes().all(|c| c == b'0' || c == b'1') {
            return Err(invalid(format!("{field:?} is not a binary vector")));
        }
        match width {
            None => width = Some(field.len()),
            Some(w) if w != field.len() => {
                return Err(invalid("basis vectors have different widths"))
            }
            _ => {}
        }
        if field.len() > crate::subspace::MAX_M {
            return Err(invalid(format!(
                "vector {field:?} is wider than the supported m"
            )));
        }
        vectors.push(u32::from_str_radix(field, 2).expect("checked binary digits"));
    }
    let m = width.ok_or_else(|| invalid("empty subspace line"))?;
    let b = Subspace::span(&vectors, m)?;
    if b.dim() != vectors.len() {
        return Err(invalid("basis vectors are linearly dependent"));
    }
    Ok(b)
}

/// `r_ij = dim(a ∩ b) / s`.
pub fn pair_correlation(a: &Subspace, b: &Subspace) -> Result<f64> {
    if a.ambient_dim() != b.ambient_dim() || a.dim() != b.dim() {
        return Err(mismatch(
            "pair correlation needs subspaces of equal dimension in the same space",
        ));
    }
    if a.dim() == 0 {
        return Err(invalid("pair correlation is undefined for s = 0"));
    }
    Ok(intersect_dim(a, b)? as f64 / a.dim() as f64)
}

/// `r_S` of an arbitrary uniform-dimension list.
pub fn collection_correlation(members: &[Subspace]) -> Result<f64> {
    Ok(SubspaceCollection::new(members.to_vec())?.r_s())
}

/// How [`build_collection`] picks members.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// Start from the first enumerated subspace, then repeatedly add the
    /// candidate with the smallest intersection sum against the members so
    /// far (lowest enumeration index on ties).
    GreedyMinRs,
    /// Uniform sample without replacement, listed in enumeration order.
    Random,
    /// Backtracking search for a partial spread (pairwise trivial
    /// intersections) as large as the request, topped up greedily.
    SpreadFirst,
    /// Local search for a collection whose r_S equals the given value.
    TargetRs(f64),
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::GreedyMinRs => f.write_str("greedy_min_rs"),
            Strategy::Random => f.write_str("random"),
            Strategy::SpreadFirst => f.write_str("spread_first"),
            Strategy::TargetRs(v) => write!(f, "target_rs:{v}"),
        }
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "greedy_min_rs" | "greedy" => Ok(Strategy::GreedyMinRs),
            "random" => Ok(Strategy::Random),
            "spread_first" | "spread" => Ok(Strategy::SpreadFirst),
            other => match other.strip_prefix("target_rs:") {
                Some(v) => v
                    .parse()
                    .map(Strategy::TargetRs)
                    .map_err(|_| invalid(format!("bad target r_S {v:?}"))),
                None => Err(invalid(format!("unknown strategy {other:?}"))),
            },
        }
    }
}

/// Node budget for the partial spread search.
const SPREAD_SEARCH_BUDGET: u64 = 2_000_000;
/// Proposal budget for the target-r_S local search.
const TARGET_SEARCH_STEPS: u64 = 2_000_000;

/// Builds a collection of `size` distinct s-dimensional subspaces of F₂^m.
/// Asking for every subspace returns the full enumeration whatever the
/// strategy.
pub fn build_collection(
    m: usize,
    s: usize,
    size: usize,
    strategy: Strategy,
    seed: u64,
) -> Result<SubspaceCollection> {
    if s == 0 {
        return Err(invalid("collections need s >= 1"));
    }
    let total = gaussian_binomial(m, s)?;
    if size == 0 || size as u128 > total {
        return Err(invalid(format!(
            "collection size {size} outside 1..={total} for s = {s}, m = {m}"
        )));
    }
    let candidates = enumerate_subspaces(m, s)?;
    if size == candidates.len() {
        return SubspaceCollection::new(candidates);
    }
    let picked = match strategy {
        Strategy::GreedyMinRs => greedy(&candidates, vec![0], size)?,
        Strategy::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut picked = index::sample(&mut rng, candidates.len(), size).into_vec();
            picked.sort_unstable();
            picked
        }
        Strategy::SpreadFirst => {
            let spread = partial_spread(&candidates, size, m, s)?;
            greedy(&candidates, spread, size)?
        }
        Strategy::TargetRs(target) => target_search(&candidates, size, s, target, seed)?,
    };
    SubspaceCollection::new(picked.into_iter().map(|i| candidates[i].clone()).collect())
}

/// Extends `start` greedily to `size` members.
fn greedy(candidates: &[Subspace], start: Vec<usize>, size: usize) -> Result<Vec<usize>> {
    let mut cost = vec![0u64; candidates.len()];
    let mut taken = vec![false; candidates.len()];
    let mut picked = Vec::with_capacity(size);
    let mut queue = start.into_iter();
    while picked.len() < size {
        let idx = match queue.next() {
            Some(i) => i,
            None => (0..candidates.len())
                .filter(|&i| !taken[i])
                .min_by_key(|&i| (cost[i], i))
                .expect("size never exceeds the candidate count"),
        };
        taken[idx] = true;
        picked.push(idx);
        for (c, slot) in candidates.iter().zip(cost.iter_mut()) {
            *slot += intersect_dim(c, &candidates[idx])? as u64;
        }
    }
    Ok(picked)
}

/// Depth-first search over enumeration indices for `min(size, bound)`
/// pairwise-disjoint subspaces; returns the largest set found within the node
/// budget.
fn partial_spread(candidates: &[Subspace], size: usize, m: usize, s: usize) -> Result<Vec<usize>> {
    let bound = ((1usize << m) - 1) / ((1usize << s) - 1);
    let target = size.min(bound);
    let mut disjoint = Vec::with_capacity(candidates.len());
    for a in candidates {
        let row: Vec<usize> = candidates
            .iter()
            .enumerate()
            .filter(|(_, b)| intersect_dim(a, b).map(|d| d == 0).unwrap_or(false))
            .map(|(j, _)| j)
            .collect();
        disjoint.push(row);
    }

    struct Search<'a> {
        disjoint: &'a [Vec<usize>],
        target: usize,
        nodes: u64,
        best: Vec<usize>,
        chosen: Vec<usize>,
    }

    impl Search<'_> {
        // `open` holds candidates disjoint from everything chosen, ascending.
        fn run(&mut self, open: &[usize]) -> bool {
            if self.chosen.len() > self.best.len() {
                self.best = self.chosen.clone();
            }
            if self.chosen.len() == self.target {
                return true;
            }
            for (i, &c) in open.iter().enumerate() {
                if self.nodes >= SPREAD_SEARCH_BUDGET
                    || self.chosen.len() + open.len() - i < self.target
                {
                    return false;
                }
                self.nodes += 1;
                let row = &self.disjoint[c];
                let next: Vec<usize> = open[i + 1..]
                    .iter()
                    .copied()
                    .filter(|x| row.binary_search(x).is_ok())
                    .collect();
                self.chosen.push(c);
                if self.run(&next) {
                    return true;
                }
                self.chosen.pop();
            }
            false
        }
    }

    let mut search = Search {
        disjoint: &disjoint,
        target,
        nodes: 0,
        best: Vec::new(),
        chosen: Vec::new(),
    };
    let all: Vec<usize> = (0..candidates.len()).collect();
    search.run(&all);
    Ok(search.best)
}

/// Swap-move local search towards `s · target` intersection-dimension sum.
fn target_search(
    candidates: &[Subspace],
    size: usize,
    s: usize,
    target: f64,
    seed: u64,
) -> Result<Vec<usize>> {
    let scaled = target * s as f64;
    let goal = scaled.round();
    if (scaled - goal).abs() > 1e-9 || goal < 0.0 {
        return Err(invalid(format!(
            "r_S = {target} is not a multiple of 1/{s}"
        )));
    }
    let goal = goal as i64;
    let (lo, hi) = ((size * s) as i64, (size * size * s) as i64);
    if goal < lo || goal > hi {
        return Err(invalid(format!(
            "r_S = {target} is outside [{}, {}] for {size} members",
            lo / s as i64,
            hi / s as i64
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = index::sample(&mut rng, candidates.len(), size).into_vec();
    let mut in_set = vec![false; candidates.len()];
    for &i in &picked {
        in_set[i] = true;
    }
    let dims = |c: usize, picked: &[usize], skip: usize| -> Result<i64> {
        let mut total = 0;
        for (p, &j) in picked.iter().enumerate() {
            if p != skip {
                total += intersect_dim(&candidates[c], &candidates[j])? as i64;
            }
        }
        Ok(total)
    };
    let mut current = dim_sum(
        &picked
            .iter()
            .map(|&i| candidates[i].clone())
            .collect::<Vec<_>>(),
    )? as i64;
    let mut steps = 0;
    while current != goal && steps < TARGET_SEARCH_STEPS {
        steps += 1;
        let slot = rng.random_range(0..size);
        let incoming = rng.random_range(0..candidates.len());
        if in_set[incoming] {
            continue;
        }
        let outgoing = picked[slot];
        let delta = 2 * (dims(incoming, &picked, slot)? - dims(outgoing, &picked, slot)?);
        if (current + delta - goal).abs() <= (current - goal).abs() {
            in_set[outgoing] = false;
            in_set[incoming] = true;
            picked[slot] = incoming;
            current += delta;
        }
    }
    if current != goal {
        return Err(invalid(format!(
            "no collection with r_S = {target} found within the search budget"
        )));
    }
    picked.sort_unstable();
    Ok(picked)
}
