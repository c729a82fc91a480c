//! Closed paths and prime cycles of the modified fundamental graph.
//!
//! A cycle is stored by its canonical edge sequence: the lexicographically
//! smallest rotation of the oriented-edge ids. Prime cycles are exactly the
//! closed paths whose id sequence is a Lyndon word, so they are enumerated
//! directly with the Fredricksen–Kessler–Maiorana extension rule instead of
//! enumerating every rooted path and deduplicating.

use std::collections::VecDeque;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::ModifiedGraph;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClosedPath {
    pub start: usize,
    pub edges: Vec<usize>,
}

impl ClosedPath {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Checks that consecutive edges chain and the path returns to `start`.
    pub fn is_valid(&self, g: &ModifiedGraph<'_>) -> bool {
        let mut at = self.start;
        for &e in &self.edges {
            if e >= g.edge_count() || g.tail(e) != at {
                return false;
            }
            at = g.head(e);
        }
        !self.edges.is_empty() && at == self.start
    }

    pub fn index(&self, g: &ModifiedGraph<'_>) -> Vec<i64> {
        sum_index(g, &self.edges)
    }

    /// Exponent of `q_v` = number of traversals of the added loop `e_v`.
    pub fn weight(&self, g: &ModifiedGraph<'_>) -> Vec<u32> {
        weight_of(g, &self.edges)
    }
}

/// An equivalence class of closed paths under rotation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Cycle {
    /// Rotation-minimal edge-id sequence.
    pub edges: Vec<usize>,
    pub index: Vec<i64>,
    /// Exponent of `q_v` in the weight monomial, per vertex.
    pub weight: Vec<u32>,
}

impl Cycle {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn has_added_loop(&self) -> bool {
        self.weight.iter().any(|&e| e > 0)
    }

    /// Vertices passed by, starting at the tail of the first canonical edge.
    pub fn vertices(&self, g: &ModifiedGraph<'_>) -> Vec<usize> {
        self.edges.iter().map(|&e| g.tail(e)).collect()
    }

    /// The reverse cycle `[ē_n, ..., ē_1]`.
    pub fn reverse(&self, g: &ModifiedGraph<'_>) -> Cycle {
        let edges: Vec<usize> = self.edges.iter().rev().map(|&e| g.reverse(e)).collect();
        Cycle {
            edges: minimal_rotation(&edges),
            index: self.index.iter().map(|x| -x).collect(),
            weight: self.weight.clone(),
        }
    }

    /// Weight monomial such as `q0^1*q2^2`, or `1` for base cycles.
    pub fn weight_string(&self) -> String {
        let parts: Vec<String> = self
            .weight
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(v, e)| format!("q{}^{}", v, e))
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }

    pub fn prime_decompose(&self) -> PrimeDecomposition {
        let n = self.edges.len();
        let period = smallest_period(&self.edges);
        let r = n / period;
        PrimeDecomposition {
            root: Cycle {
                edges: self.edges[..period].to_vec(),
                index: self.index.iter().map(|x| x / r as i64).collect(),
                weight: self.weight.iter().map(|x| x / r as u32).collect(),
            },
            multiplicity: r,
        }
    }

    pub fn is_prime(&self) -> bool {
        smallest_period(&self.edges) == self.edges.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeDecomposition {
    pub root: Cycle,
    pub multiplicity: usize,
}

impl PrimeDecomposition {
    /// Repeats the root `multiplicity` times.
    pub fn expand(&self) -> Cycle {
        let r = self.multiplicity;
        Cycle {
            edges: self.root.edges.repeat(r),
            index: self.root.index.iter().map(|x| x * r as i64).collect(),
            weight: self.root.weight.iter().map(|x| x * r as u32).collect(),
        }
    }
}

/// Smallest `p` dividing `seq.len()` with `seq` invariant under rotation by `p`.
fn smallest_period(seq: &[usize]) -> usize {
    let n = seq.len();
    (1..=n)
        .filter(|p| n.is_multiple_of(*p))
        .find(|&p| (0..n).all(|i| seq[i] == seq[(i + p) % n]))
        .unwrap_or(n)
}

pub fn minimal_rotation(seq: &[usize]) -> Vec<usize> {
    let n = seq.len();
    let best = (0..n)
        .min_by(|&a, &b| {
            (0..n)
                .map(|i| seq[(a + i) % n])
                .cmp((0..n).map(|i| seq[(b + i) % n]))
        })
        .unwrap_or(0);
    (0..n).map(|i| seq[(best + i) % n]).collect()
}

pub(crate) fn sum_index(g: &ModifiedGraph<'_>, edges: &[usize]) -> Vec<i64> {
    let mut index = vec![0i64; g.dim()];
    for &e in edges {
        for (acc, x) in index.iter_mut().zip(g.index(e)) {
            *acc += x;
        }
    }
    index
}

pub(crate) fn weight_of(g: &ModifiedGraph<'_>, edges: &[usize]) -> Vec<u32> {
    let mut weight = vec![0u32; g.vertex_count()];
    for &e in edges {
        if let Some(v) = g.added_loop_vertex(e) {
            weight[v] += 1;
        }
    }
    weight
}

/// Canonical cycle of a closed path.
pub fn canonicalize(g: &ModifiedGraph<'_>, path: &ClosedPath) -> Cycle {
    Cycle {
        edges: minimal_rotation(&path.edges),
        index: path.index(g),
        weight: path.weight(g),
    }
}

pub fn prime_decompose(cycle: &Cycle) -> PrimeDecomposition {
    cycle.prime_decompose()
}

pub(crate) fn check_cap(requested: usize, cap: usize) -> Result<()> {
    if requested > cap {
        return Err(Error::CapExceeded { requested, cap });
    }
    Ok(())
}

/// `dist[target][u]`: fewest steps from `u` to `target`.
fn distances_to(g: &ModifiedGraph<'_>) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let mut incoming = vec![Vec::new(); n];
    for u in 0..n {
        for &e in g.out_edges(u) {
            incoming[g.head(e)].push(u);
        }
    }
    (0..n)
        .map(|target| {
            let mut dist = vec![usize::MAX; n];
            dist[target] = 0;
            let mut queue = VecDeque::from([target]);
            while let Some(v) = queue.pop_front() {
                for &u in &incoming[v] {
                    if dist[u] == usize::MAX {
                        dist[u] = dist[v] + 1;
                        queue.push_back(u);
                    }
                }
            }
            dist
        })
        .collect()
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PathFilter {
    /// Keep only paths with this index.
    pub index: Option<Vec<i64>>,
    /// Keep only paths traversing at least one added loop.
    pub require_added_loop: bool,
}

impl PathFilter {
    pub fn with_added_loop() -> Self {
        PathFilter {
            index: None,
            require_added_loop: true,
        }
    }

    pub fn index(mut self, index: Vec<i64>) -> Self {
        self.index = Some(index);
        self
    }
}

/// All rooted closed paths of length exactly `n`, ordered by start vertex and
/// then lexicographically by edge ids.
pub fn enumerate_closed_paths(
    g: &ModifiedGraph<'_>,
    n: usize,
    filter: &PathFilter,
    cap: usize,
) -> Result<Vec<ClosedPath>> {
    check_cap(n, cap)?;
    if n == 0 {
        return Err(Error::InvalidArgument(
            "path length must be at least 1".into(),
        ));
    }
    if let Some(m) = &filter.index {
        if m.len() != g.dim() {
            return Err(Error::InvalidArgument(format!(
                "index {:?} has {} components, graph dimension is {}",
                m,
                m.len(),
                g.dim()
            )));
        }
    }
    let dist = distances_to(g);
    let reach = g.base().max_abs_index();
    let per_start: Vec<Vec<ClosedPath>> = (0..g.vertex_count())
        .into_par_iter()
        .map(|start| {
            let mut walker = PathWalker {
                g,
                n,
                filter,
                dist: &dist[start],
                reach: &reach,
                start,
                stack: Vec::with_capacity(n),
                index: vec![0; g.dim()],
                loops: 0,
                out: Vec::new(),
            };
            walker.extend(start);
            walker.out
        })
        .collect();
    Ok(per_start.into_iter().flatten().collect())
}

struct PathWalker<'a, 'g> {
    g: &'a ModifiedGraph<'g>,
    n: usize,
    filter: &'a PathFilter,
    dist: &'a [usize],
    reach: &'a [i64],
    start: usize,
    stack: Vec<usize>,
    index: Vec<i64>,
    loops: usize,
    out: Vec<ClosedPath>,
}

impl PathWalker<'_, '_> {
    fn extend(&mut self, at: usize) {
        let placed = self.stack.len();
        if placed == self.n {
            if at == self.start
                && (!self.filter.require_added_loop || self.loops > 0)
                && self.filter.index.as_ref().is_none_or(|m| *m == self.index)
            {
                self.out.push(ClosedPath {
                    start: self.start,
                    edges: self.stack.clone(),
                });
            }
            return;
        }
        let remaining = self.n - placed - 1;
        for &e in self.g.out_edges(at) {
            let head = self.g.head(e);
            if self.dist[head] > remaining {
                continue;
            }
            let is_loop = self.g.added_loop_vertex(e).is_some();
            if remaining == 0 && self.filter.require_added_loop && self.loops == 0 && !is_loop {
                continue;
            }
            for (acc, x) in self.index.iter_mut().zip(self.g.index(e)) {
                *acc += x;
            }
            let feasible = match &self.filter.index {
                Some(m) => m
                    .iter()
                    .zip(&self.index)
                    .zip(self.reach)
                    .all(|((target, got), r)| (target - got).abs() <= remaining as i64 * r),
                None => true,
            };
            if feasible {
                self.stack.push(e);
                self.loops += is_loop as usize;
                self.extend(head);
                self.loops -= is_loop as usize;
                self.stack.pop();
            }
            for (acc, x) in self.index.iter_mut().zip(self.g.index(e)) {
                *acc -= x;
            }
        }
    }
}

/// Which prime cycles to enumerate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CycleSet {
    /// Prime cycles of the modified graph using at least one added loop.
    WithAddedLoop,
    /// Prime cycles of the base fundamental graph.
    Base,
}

/// Folds over the canonical edge sequence of every prime cycle of length
/// `1..=max_len` in `set`. Work is split by the first (smallest) edge id;
/// partial accumulators are merged in ascending order of that id.
pub(crate) fn fold_prime_cycles<A, I, V, M>(
    g: &ModifiedGraph<'_>,
    max_len: usize,
    set: CycleSet,
    init: I,
    visit: V,
    merge: M,
) -> A
where
    A: Send,
    I: Fn() -> A + Sync,
    V: Fn(&mut A, &[usize]) + Sync,
    M: Fn(A, A) -> A,
{
    let dist = distances_to(g);
    let first_ids: Vec<usize> = match set {
        CycleSet::WithAddedLoop => (0..g.edge_count()).collect(),
        CycleSet::Base => (0..g.base().edges().len()).collect(),
    };
    let parts: Vec<A> = first_ids
        .into_par_iter()
        .map(|first| {
            let mut acc = init();
            let start = g.tail(first);
            let mut walker = LyndonWalker {
                g,
                set,
                max_len,
                dist: &dist[start],
                start,
                seq: vec![first],
                loops: g.added_loop_vertex(first).is_some() as usize,
                acc: &mut acc,
                visit: &visit,
            };
            walker.extend(g.head(first), 1);
            acc
        })
        .collect();
    let mut iter = parts.into_iter();
    let first = iter.next().unwrap_or_else(&init);
    iter.fold(first, merge)
}

struct LyndonWalker<'a, 'g, A, V> {
    g: &'a ModifiedGraph<'g>,
    set: CycleSet,
    max_len: usize,
    dist: &'a [usize],
    start: usize,
    seq: Vec<usize>,
    loops: usize,
    acc: &'a mut A,
    visit: &'a V,
}

impl<A, V: Fn(&mut A, &[usize])> LyndonWalker<'_, '_, A, V> {
    /// `period` is the length of the longest Lyndon prefix's period.
    fn extend(&mut self, at: usize, period: usize) {
        let t = self.seq.len();
        if at == self.start && period == t {
            let keep = match self.set {
                CycleSet::WithAddedLoop => self.loops > 0,
                CycleSet::Base => true,
            };
            if keep {
                (self.visit)(self.acc, &self.seq);
            }
        }
        if t == self.max_len {
            return;
        }
        let lower = self.seq[t - period];
        let remaining = self.max_len - t - 1;
        let base_edges = self.g.base().edges().len();
        for &e in self.g.out_edges(at) {
            if e < lower {
                continue;
            }
            if self.set == CycleSet::Base && e >= base_edges {
                continue;
            }
            let head = self.g.head(e);
            if self.dist[head] > remaining {
                continue;
            }
            let next_period = if e == lower { period } else { t + 1 };
            let is_loop = self.g.added_loop_vertex(e).is_some() as usize;
            self.seq.push(e);
            self.loops += is_loop;
            self.extend(head, next_period);
            self.loops -= is_loop;
            self.seq.pop();
        }
    }
}

/// All prime cycles of length at most `max_len` in `set`, sorted by
/// (length, canonical edge sequence).
pub fn enumerate_prime_cycles(
    g: &ModifiedGraph<'_>,
    max_len: usize,
    set: CycleSet,
    cap: usize,
) -> Result<Vec<Cycle>> {
    check_cap(max_len, cap)?;
    let mut cycles = fold_prime_cycles(
        g,
        max_len,
        set,
        Vec::new,
        |acc: &mut Vec<Cycle>, seq| {
            acc.push(Cycle {
                edges: seq.to_vec(),
                index: sum_index(g, seq),
                weight: weight_of(g, seq),
            })
        },
        |mut a, b| {
            a.extend(b);
            a
        },
    );
    cycles.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.edges.cmp(&b.edges)));
    Ok(cycles)
}

/// One line per cycle: edge ids, length, index, weight monomial.
pub fn format_cycle_line(c: &Cycle) -> String {
    let mut line = String::from("[");
    for (i, e) in c.edges.iter().enumerate() {
        if i > 0 {
            line.push(',');
        }
        let _ = write!(line, "{}", e);
    }
    let _ = write!(line, "] len={} index=(", c.len());
    for (i, x) in c.index.iter().enumerate() {
        if i > 0 {
            line.push(',');
        }
        let _ = write!(line, "{}", x);
    }
    let _ = write!(line, ") weight={}", c.weight_string());
    line
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;
    use std::collections::HashSet;

    #[test]
    fn minimal_rotation_examples() {
        assert_eq!(minimal_rotation(&[3, 1, 2]), vec![1, 2, 3]);
        assert_eq!(minimal_rotation(&[2, 1, 2, 1]), vec![1, 2, 1, 2]);
        assert_eq!(minimal_rotation(&[7]), vec![7]);
    }

    #[test]
    fn prime_decomposition_examples() {
        let c = Cycle {
            edges: vec![1, 2, 1, 2],
            index: vec![2],
            weight: vec![2, 0],
        };
        let d = c.prime_decompose();
        assert_eq!(d.root.edges, vec![1, 2]);
        assert_eq!(d.multiplicity, 2);
        assert_eq!(d.root.index, vec![1]);
        assert_eq!(d.expand(), c);
    }

    #[test]
    fn repeated_added_loop_decomposes() {
        let g = builtins::pendant();
        let m = g.modified();
        let e = m.added_loop(1);
        let path = ClosedPath {
            start: 1,
            edges: vec![e; 4],
        };
        let d = canonicalize(&m, &path).prime_decompose();
        assert_eq!(d.multiplicity, 4);
        assert_eq!(d.root.edges, vec![e]);
        assert_eq!(d.root.weight, vec![0, 1]);
    }

    #[test]
    fn pendant_length_one_paths() {
        let g = builtins::pendant();
        let m = g.modified();
        let paths = enumerate_closed_paths(&m, 1, &PathFilter::default(), 12).unwrap();
        let ids: Vec<Vec<usize>> = paths.iter().map(|p| p.edges.clone()).collect();
        // loop+ (2), loop- (3), e_v0 (4), e_v1 (5)
        assert_eq!(ids, vec![vec![2], vec![3], vec![4], vec![5]]);
    }

    #[test]
    fn length_one_with_added_loop_is_one_per_vertex() {
        for g in [
            builtins::pendant(),
            builtins::kagome(),
            builtins::cycle(4).unwrap(),
        ] {
            let m = g.modified();
            let paths = enumerate_closed_paths(&m, 1, &PathFilter::with_added_loop(), 12).unwrap();
            assert_eq!(paths.len(), g.vertex_count());
        }
    }

    #[test]
    fn kagome_has_no_short_index_paths_with_loops() {
        let g = builtins::kagome();
        let m = g.modified();
        let f = PathFilter::with_added_loop().index(vec![1, 0]);
        assert!(enumerate_closed_paths(&m, 2, &f, 12).unwrap().is_empty());
        assert!(!enumerate_closed_paths(&m, 3, &f, 12).unwrap().is_empty());
    }

    #[test]
    fn cap_is_enforced() {
        let g = builtins::pendant();
        let m = g.modified();
        assert!(matches!(
            enumerate_closed_paths(&m, 13, &PathFilter::default(), 12),
            Err(Error::CapExceeded {
                requested: 13,
                cap: 12
            })
        ));
        assert!(enumerate_prime_cycles(&m, 5, CycleSet::Base, 4).is_err());
    }

    #[test]
    fn kagome_length_two_base_cycles() {
        let g = builtins::kagome();
        let m = g.modified();
        let cycles = enumerate_prime_cycles(&m, 2, CycleSet::Base, 12).unwrap();
        let with: Vec<&Cycle> = cycles
            .iter()
            .filter(|c| c.len() == 2 && c.index == vec![1, 0])
            .collect();
        assert_eq!(with.len(), 1);
        // e1 = edge 0 (v1 -> v2), e2 = edge 2 (v2 -> v1, index (1,0))
        assert_eq!(with[0].edges, vec![0, 2]);
        let rev = with[0].reverse(&m);
        assert_eq!(rev.index, vec![-1, 0]);
        assert!(cycles.contains(&rev));
    }

    #[test]
    fn ring_has_only_the_winding_cycles_with_nonzero_index() {
        let nu = 5;
        let g = builtins::cycle(nu).unwrap();
        let m = g.modified();
        let base = enumerate_prime_cycles(&m, nu, CycleSet::Base, 12).unwrap();
        let winding: Vec<_> = base.iter().filter(|c| c.index != vec![0]).collect();
        assert_eq!(winding.len(), 2);
        assert!(winding
            .iter()
            .all(|c| c.len() == nu && c.index[0].abs() == 1));
        let looped = enumerate_prime_cycles(&m, nu, CycleSet::WithAddedLoop, 12).unwrap();
        assert!(looped.iter().all(|c| c.index == vec![0]));
    }

    #[test]
    fn pendant_length_two_index_one() {
        let g = builtins::pendant();
        let m = g.modified();
        let found: Vec<Cycle> = enumerate_prime_cycles(&m, 2, CycleSet::WithAddedLoop, 12)
            .unwrap()
            .into_iter()
            .filter(|c| c.len() == 2 && c.index == vec![1])
            .collect();
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].edges, vec![2, 4]);
        assert_eq!(found[0].weight_string(), "q0^1");
    }

    /// Brute-force: canonicalize every rooted closed path, keep the prime ones.
    fn brute_prime_cycles(m: &ModifiedGraph<'_>, max_len: usize, set: CycleSet) -> HashSet<Cycle> {
        let mut out = HashSet::new();
        for n in 1..=max_len {
            for p in enumerate_closed_paths(m, n, &PathFilter::default(), 12).unwrap() {
                let c = canonicalize(m, &p);
                let keep = match set {
                    CycleSet::Base => !c.has_added_loop(),
                    CycleSet::WithAddedLoop => c.has_added_loop(),
                };
                if keep && c.is_prime() {
                    out.insert(c);
                }
            }
        }
        out
    }

    #[test]
    fn lyndon_enumeration_matches_brute_force() {
        for g in [
            builtins::pendant(),
            builtins::kagome(),
            builtins::zd(&[2, 2]).unwrap(),
        ] {
            let m = g.modified();
            for set in [CycleSet::Base, CycleSet::WithAddedLoop] {
                let fast = enumerate_prime_cycles(&m, 5, set, 12).unwrap();
                let fast_set: HashSet<Cycle> = fast.iter().cloned().collect();
                assert_eq!(fast.len(), fast_set.len(), "duplicates");
                assert_eq!(fast_set, brute_prime_cycles(&m, 5, set));
            }
        }
    }

    #[test]
    fn rooted_path_count_matches_cycle_lengths() {
        let g = builtins::kagome();
        let m = g.modified();
        let cycles = enumerate_prime_cycles(&m, 4, CycleSet::WithAddedLoop, 12).unwrap();
        for n in 1..=4 {
            let paths = enumerate_closed_paths(&m, n, &PathFilter::with_added_loop(), 12).unwrap();
            let expected: usize = cycles
                .iter()
                .filter(|c| n % c.len() == 0)
                .map(|c| c.len())
                .sum();
            assert_eq!(paths.len(), expected, "n = {n}");
        }
    }

    #[test]
    fn paths_are_valid_and_sorted() {
        let g = builtins::kagome();
        let m = g.modified();
        let paths = enumerate_closed_paths(&m, 3, &PathFilter::default(), 12).unwrap();
        assert!(paths.iter().all(|p| p.is_valid(&m)));
        let keys: Vec<(usize, Vec<usize>)> =
            paths.iter().map(|p| (p.start, p.edges.clone())).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn cycle_line_format() {
        let c = Cycle {
            edges: vec![2, 4],
            index: vec![1],
            weight: vec![1, 0],
        };
        assert_eq!(format_cycle_line(&c), "[2,4] len=2 index=(1) weight=q0^1");
    }
}
