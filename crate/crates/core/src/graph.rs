//! Fundamental graphs with indexed edges, the graph file format and the
//! modified fundamental graph.
//!
//! Oriented edges are numbered from parse order: the `i`-th `edge` line
//! produces edge `2i` (as declared) and its reverse `2i + 1`, whose index is
//! negated. In the modified graph the added loop at vertex `v` has id
//! `2P + v`, where `P` is the number of declared edges.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::potential::{parse_rational, CRational, Potential};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrientedEdge {
    pub id: usize,
    /// Id of the unoriented edge; `id / 2`.
    pub pair: usize,
    pub tail: usize,
    pub head: usize,
    pub index: Vec<i64>,
}

impl OrientedEdge {
    pub fn reverse_id(&self) -> usize {
        self.id ^ 1
    }

    pub fn is_loop(&self) -> bool {
        self.tail == self.head
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FundamentalGraph {
    dim: usize,
    names: Vec<Option<String>>,
    edges: Vec<OrientedEdge>,
    out: Vec<Vec<usize>>,
}

/// One declared (unoriented) edge, read in the `tail -> head` orientation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeDecl {
    pub tail: usize,
    pub head: usize,
    pub index: Vec<i64>,
}

impl EdgeDecl {
    pub fn new(tail: usize, head: usize, index: Vec<i64>) -> Self {
        EdgeDecl { tail, head, index }
    }
}

impl FundamentalGraph {
    /// Builds and validates a graph from declared edges.
    pub fn new(dim: usize, vertex_count: usize, edges: Vec<EdgeDecl>) -> Result<Self> {
        let lines = vec![0; edges.len()];
        Self::build(dim, vec![None; vertex_count], edges, &lines)
    }

    fn build(
        dim: usize,
        names: Vec<Option<String>>,
        decls: Vec<EdgeDecl>,
        lines: &[usize],
    ) -> Result<Self> {
        let vertex_count = names.len();
        if dim == 0 {
            return Err(Error::InvalidGraph("dimension must be at least 1".into()));
        }
        if vertex_count == 0 {
            return Err(Error::InvalidGraph(
                "graph must have at least one vertex".into(),
            ));
        }
        let mut edges = Vec::with_capacity(2 * decls.len());
        for (pair, (decl, &line)) in decls.into_iter().zip(lines).enumerate() {
            for &v in &[decl.tail, decl.head] {
                if v >= vertex_count {
                    return Err(Error::VertexOutOfRange {
                        vertex: v,
                        count: vertex_count,
                    });
                }
            }
            if decl.index.len() != dim {
                return Err(Error::IndexArity {
                    line,
                    expected: dim,
                    found: decl.index.len(),
                });
            }
            if decl.tail == decl.head && decl.index.iter().all(|&x| x == 0) {
                return Err(Error::ZeroIndexLoop {
                    line,
                    vertex: decl.tail,
                });
            }
            let reversed: Vec<i64> = decl.index.iter().map(|x| -x).collect();
            edges.push(OrientedEdge {
                id: 2 * pair,
                pair,
                tail: decl.tail,
                head: decl.head,
                index: decl.index,
            });
            edges.push(OrientedEdge {
                id: 2 * pair + 1,
                pair,
                tail: decl.head,
                head: decl.tail,
                index: reversed,
            });
        }
        let mut out = vec![Vec::new(); vertex_count];
        for e in &edges {
            out[e.tail].push(e.id);
        }
        let graph = FundamentalGraph {
            dim,
            names,
            edges,
            out,
        };
        graph.check_connected()?;
        Ok(graph)
    }

    fn check_connected(&self) -> Result<()> {
        let order = self.bfs_tree();
        if let Some(v) = order.iter().position(|parent| parent.is_none()) {
            return Err(Error::Disconnected(v));
        }
        Ok(())
    }

    /// BFS from vertex 0; entry `v` holds the tree edge entering `v`
    /// (`Some(None)` for the root, `None` if unreachable).
    fn bfs_tree(&self) -> Vec<Option<Option<usize>>> {
        let mut parent = vec![None; self.vertex_count()];
        parent[0] = Some(None);
        let mut queue = VecDeque::from([0usize]);
        while let Some(u) = queue.pop_front() {
            for &id in &self.out[u] {
                let v = self.edges[id].head;
                if parent[v].is_none() {
                    parent[v] = Some(Some(id));
                    queue.push_back(v);
                }
            }
        }
        parent
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(parse_graph_with_potential(text)?.0)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, vertex: usize) -> Option<&str> {
        self.names[vertex].as_deref()
    }

    pub fn set_name(&mut self, vertex: usize, name: impl Into<String>) {
        self.names[vertex] = Some(name.into());
    }

    pub fn edges(&self) -> &[OrientedEdge] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> &OrientedEdge {
        &self.edges[id]
    }

    /// Number of declared (unoriented) edges.
    pub fn pair_count(&self) -> usize {
        self.edges.len() / 2
    }

    pub fn out_edges(&self, vertex: usize) -> &[usize] {
        &self.out[vertex]
    }

    /// Number of oriented edges leaving `vertex`; a loop pair counts twice.
    pub fn degree(&self, vertex: usize) -> usize {
        self.out[vertex].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.vertex_count()).map(|v| self.degree(v)).collect()
    }

    pub fn has_loops(&self) -> bool {
        self.edges.iter().any(OrientedEdge::is_loop)
    }

    /// True if two declared edges join the same (unordered) pair of vertices.
    pub fn has_multiple_edges(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.edges
            .iter()
            .step_by(2)
            .any(|e| !seen.insert((e.tail.min(e.head), e.tail.max(e.head))))
    }

    /// True if the periodic graph itself has parallel edges: two oriented
    /// edges with the same tail, head and index.
    pub fn lift_has_multiple_edges(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.edges
            .iter()
            .any(|e| !seen.insert((e.tail, e.head, e.index.clone())))
    }

    /// `max_e |tau_j(e)|` for every axis `j`.
    pub fn max_abs_index(&self) -> Vec<i64> {
        let mut best = vec![0i64; self.dim];
        for e in &self.edges {
            for (b, x) in best.iter_mut().zip(&e.index) {
                *b = (*b).max(x.abs());
            }
        }
        best
    }

    /// Largest Euclidean norm of an edge index.
    pub fn max_index_norm(&self) -> f64 {
        self.edges
            .iter()
            .map(|e| e.index.iter().map(|&x| (x * x) as f64).sum::<f64>().sqrt())
            .fold(0.0, f64::max)
    }

    pub fn modified(&self) -> ModifiedGraph<'_> {
        ModifiedGraph::new(self)
    }

    /// Serializes to the graph file format; `parse` inverts this exactly.
    pub fn to_file_string(&self, potential: Option<&Potential>) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "dim {}", self.dim);
        let _ = writeln!(out, "vertices {}", self.vertex_count());
        for (v, name) in self.names.iter().enumerate() {
            if let Some(name) = name {
                let _ = writeln!(out, "name {} {}", v, name);
            }
        }
        for e in self.edges.iter().step_by(2) {
            let _ = write!(out, "edge {} {}", e.tail, e.head);
            for x in &e.index {
                let _ = write!(out, " {}", x);
            }
            out.push('\n');
        }
        if let Some(q) = potential {
            out.push_str(&q.potential_lines());
        }
        out
    }

    /// Subgroup of `Z^d` generated by the indices of fundamental cycles.
    pub fn validate_full_rank(&self) -> RankDiagnostic {
        let parent = self.bfs_tree();
        // Tree potential: position of each vertex's lift relative to the root's.
        let mut position = vec![vec![0i64; self.dim]; self.vertex_count()];
        let mut order: Vec<usize> = vec![0];
        let mut done = vec![false; self.vertex_count()];
        done[0] = true;
        let mut i = 0;
        while i < order.len() {
            let u = order[i];
            i += 1;
            for &id in &self.out[u] {
                let e = &self.edges[id];
                if !done[e.head] && parent[e.head] == Some(Some(id)) {
                    done[e.head] = true;
                    position[e.head] = position[u]
                        .iter()
                        .zip(&e.index)
                        .map(|(a, b)| a + b)
                        .collect();
                    order.push(e.head);
                }
            }
        }
        let tree_pairs: Vec<usize> = parent
            .iter()
            .filter_map(|p| p.flatten().map(|id| id / 2))
            .collect();
        let generators: Vec<Vec<i64>> = self
            .edges
            .iter()
            .step_by(2)
            .filter(|e| !tree_pairs.contains(&e.pair))
            .map(|e| {
                (0..self.dim)
                    .map(|j| position[e.tail][j] + e.index[j] - position[e.head][j])
                    .collect::<Vec<i64>>()
            })
            .filter(|g| g.iter().any(|&x| x != 0))
            .collect();
        RankDiagnostic::from_generators(self.dim, generators)
    }
}

/// The subgroup of `Z^d` spanned by cycle indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankDiagnostic {
    pub dim: usize,
    pub generators: Vec<Vec<i64>>,
    /// Row-echelon basis of the generated lattice.
    pub basis: Vec<Vec<i64>>,
    pub rank: usize,
    /// `[Z^d : L]` when the lattice has full rank.
    pub lattice_index: Option<u64>,
}

impl RankDiagnostic {
    fn from_generators(dim: usize, generators: Vec<Vec<i64>>) -> Self {
        let basis = hermite_basis(dim, &generators);
        let rank = basis.len();
        let lattice_index = (rank == dim).then(|| {
            basis
                .iter()
                .enumerate()
                .map(|(j, row)| row[j].unsigned_abs())
                .product()
        });
        RankDiagnostic {
            dim,
            generators,
            basis,
            rank,
            lattice_index,
        }
    }

    pub fn is_full(&self) -> bool {
        self.lattice_index == Some(1)
    }

    pub fn warning(&self) -> Option<String> {
        if self.is_full() {
            return None;
        }
        Some(match self.lattice_index {
            Some(idx) => format!(
                "cycle indices generate a sublattice of index {} in Z^{}; the periodic graph is disconnected",
                idx, self.dim
            ),
            None => format!(
                "cycle indices span rank {} < {}; the periodic graph is disconnected",
                self.rank, self.dim
            ),
        })
    }
}

/// Integer row reduction to echelon form; pivots are positive and the pivot
/// of row `r` sits in the first nonzero column of that row.
fn hermite_basis(dim: usize, generators: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut rows: Vec<Vec<i64>> = generators.to_vec();
    let mut basis = Vec::new();
    for col in 0..dim {
        loop {
            let mut live: Vec<usize> = (0..rows.len()).filter(|&r| rows[r][col] != 0).collect();
            if live.len() <= 1 {
                break;
            }
            live.sort_by_key(|&r| rows[r][col].abs());
            let pivot = live[0];
            for &r in &live[1..] {
                let q = rows[r][col] / rows[pivot][col];
                let p = rows[pivot].clone();
                for (x, y) in rows[r].iter_mut().zip(&p) {
                    *x -= q * y;
                }
            }
        }
        if let Some(r) = (0..rows.len()).find(|&r| rows[r][col] != 0) {
            let mut row = rows.swap_remove(r);
            if row[col] < 0 {
                row.iter_mut().for_each(|x| *x = -*x);
            }
            basis.push(row);
        }
    }
    basis
}

/// Contents of a graph or potential file.
#[derive(Debug, Default)]
pub(crate) struct Document {
    pub dim: Option<usize>,
    pub vertices: Option<usize>,
    pub names: Vec<Option<String>>,
    pub edges: Vec<EdgeDecl>,
    pub edge_lines: Vec<usize>,
    pub potential: Option<Potential>,
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let body = match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    };
    let mut tokens = Vec::new();
    let mut start = None;
    for (i, ch) in body.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                tokens.push(Token {
                    text: &body[s..i],
                    column: body[..s].chars().count() + 1,
                });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        tokens.push(Token {
            text: &body[s..],
            column: body[..s].chars().count() + 1,
        });
    }
    tokens
}

fn parse_usize(tok: &Token<'_>, line: usize, what: &str) -> Result<usize> {
    tok.text.parse().map_err(|_| {
        Error::syntax(
            line,
            tok.column,
            format!("expected {}, found `{}`", what, tok.text),
        )
    })
}

/// Parses the line-oriented format. With `graph_mode` the `dim` line is
/// mandatory and must come first.
pub(crate) fn parse_document(text: &str, graph_mode: bool) -> Result<Document> {
    let mut doc = Document::default();
    let mut potential: BTreeMap<usize, CRational> = BTreeMap::new();
    let mut first = true;
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last_line = line;
        let tokens = tokenize(raw);
        let Some(head) = tokens.first() else { continue };
        let args = &tokens[1..];
        let need_vertices = |doc: &Document| {
            doc.vertices.ok_or_else(|| {
                Error::syntax(
                    line,
                    head.column,
                    format!("`{}` before `vertices`", head.text),
                )
            })
        };
        let arity = |n: usize| -> Result<()> {
            if args.len() != n {
                let column = args.get(n).map_or(raw.chars().count() + 1, |t| t.column);
                return Err(Error::syntax(
                    line,
                    column,
                    format!(
                        "`{}` takes {} argument(s), found {}",
                        head.text,
                        n,
                        args.len()
                    ),
                ));
            }
            Ok(())
        };
        if graph_mode && first && head.text != "dim" {
            return Err(Error::syntax(
                line,
                head.column,
                "first directive must be `dim`",
            ));
        }
        first = false;
        match head.text {
            "dim" => {
                if doc.dim.is_some() {
                    return Err(Error::Duplicate {
                        line,
                        directive: "dim".into(),
                    });
                }
                arity(1)?;
                let d = parse_usize(&args[0], line, "a dimension")?;
                if d == 0 {
                    return Err(Error::syntax(
                        line,
                        args[0].column,
                        "dimension must be at least 1",
                    ));
                }
                doc.dim = Some(d);
            }
            "vertices" => {
                if doc.vertices.is_some() {
                    return Err(Error::Duplicate {
                        line,
                        directive: "vertices".into(),
                    });
                }
                arity(1)?;
                let n = parse_usize(&args[0], line, "a vertex count")?;
                if n == 0 {
                    return Err(Error::syntax(
                        line,
                        args[0].column,
                        "vertex count must be at least 1",
                    ));
                }
                doc.vertices = Some(n);
                doc.names = vec![None; n];
            }
            "name" => {
                let count = need_vertices(&doc)?;
                arity(2)?;
                let v = parse_vertex(&args[0], line, count)?;
                if doc.names[v].is_some() {
                    return Err(Error::Duplicate {
                        line,
                        directive: format!("name {}", v),
                    });
                }
                doc.names[v] = Some(args[1].text.to_string());
            }
            "edge" => {
                let count = need_vertices(&doc)?;
                let dim = doc
                    .dim
                    .ok_or_else(|| Error::syntax(line, head.column, "`edge` before `dim`"))?;
                if args.len() < 2 {
                    return Err(Error::syntax(
                        line,
                        head.column,
                        "`edge` needs two vertices and an index",
                    ));
                }
                let tail = parse_vertex(&args[0], line, count)?;
                let head_v = parse_vertex(&args[1], line, count)?;
                let index = args[2..]
                    .iter()
                    .map(|t| {
                        t.text.parse::<i64>().map_err(|_| {
                            Error::syntax(
                                line,
                                t.column,
                                format!("expected integer, found `{}`", t.text),
                            )
                        })
                    })
                    .collect::<Result<Vec<i64>>>()?;
                if index.len() != dim {
                    return Err(Error::IndexArity {
                        line,
                        expected: dim,
                        found: index.len(),
                    });
                }
                if tail == head_v && index.iter().all(|&x| x == 0) {
                    return Err(Error::ZeroIndexLoop { line, vertex: tail });
                }
                doc.edges.push(EdgeDecl::new(tail, head_v, index));
                doc.edge_lines.push(line);
            }
            "potential" => {
                let count = need_vertices(&doc)?;
                if args.len() != 2 && args.len() != 3 {
                    return Err(Error::syntax(
                        line,
                        head.column,
                        "`potential` takes a vertex, RE and optional IM",
                    ));
                }
                let v = parse_vertex(&args[0], line, count)?;
                let mut parts = args[1..].iter().map(|t| {
                    parse_rational(t.text).ok_or_else(|| {
                        Error::syntax(
                            line,
                            t.column,
                            format!("expected rational, found `{}`", t.text),
                        )
                    })
                });
                let re = parts.next().unwrap()?;
                let im = parts.next().transpose()?.unwrap_or_default();
                if potential.insert(v, CRational::new(re, im)).is_some() {
                    return Err(Error::Duplicate {
                        line,
                        directive: format!("potential {}", v),
                    });
                }
            }
            other => {
                return Err(Error::syntax(
                    line,
                    head.column,
                    format!("unknown directive `{}`", other),
                ));
            }
        }
    }
    if graph_mode {
        if doc.dim.is_none() {
            return Err(Error::syntax(last_line.max(1), 1, "missing `dim` line"));
        }
        if doc.vertices.is_none() {
            return Err(Error::syntax(
                last_line.max(1),
                1,
                "missing `vertices` line",
            ));
        }
    }
    if let Some(count) = doc.vertices {
        if !potential.is_empty() {
            let mut q = Potential::zero(count);
            for (v, value) in potential {
                q.set(v, value);
            }
            doc.potential = Some(q);
        }
    }
    Ok(doc)
}

fn parse_vertex(tok: &Token<'_>, line: usize, count: usize) -> Result<usize> {
    let v = parse_usize(tok, line, "a vertex id")?;
    if v >= count {
        return Err(Error::syntax(
            line,
            tok.column,
            format!("vertex {} out of range (graph has {} vertices)", v, count),
        ));
    }
    Ok(v)
}

/// Parses a graph file, returning the graph and its potential if any
/// `potential` lines are present.
pub fn parse_graph_with_potential(text: &str) -> Result<(FundamentalGraph, Option<Potential>)> {
    let doc = parse_document(text, true)?;
    let dim = doc.dim.expect("checked in graph mode");
    let graph = FundamentalGraph::build(dim, doc.names, doc.edges, &doc.edge_lines)?;
    Ok((graph, doc.potential))
}

/// The fundamental graph with one zero-index loop `e_v` added at every vertex.
#[derive(Clone, Debug)]
pub struct ModifiedGraph<'g> {
    base: &'g FundamentalGraph,
    out: Vec<Vec<usize>>,
    zero: Vec<i64>,
}

impl<'g> ModifiedGraph<'g> {
    pub fn new(base: &'g FundamentalGraph) -> Self {
        let first_loop = base.edges.len();
        let out = (0..base.vertex_count())
            .map(|v| {
                let mut ids = base.out[v].clone();
                ids.push(first_loop + v);
                ids.sort_unstable();
                ids
            })
            .collect();
        ModifiedGraph {
            base,
            out,
            zero: vec![0; base.dim],
        }
    }

    pub fn base(&self) -> &'g FundamentalGraph {
        self.base
    }

    pub fn vertex_count(&self) -> usize {
        self.base.vertex_count()
    }

    pub fn dim(&self) -> usize {
        self.base.dim
    }

    /// Base oriented edges plus added loops.
    pub fn edge_count(&self) -> usize {
        self.base.edges.len() + self.vertex_count()
    }

    pub fn added_loop_count(&self) -> usize {
        self.vertex_count()
    }

    pub fn added_loop(&self, vertex: usize) -> usize {
        self.base.edges.len() + vertex
    }

    /// The vertex whose added loop is `id`, if `id` is an added loop.
    pub fn added_loop_vertex(&self, id: usize) -> Option<usize> {
        id.checked_sub(self.base.edges.len())
    }

    pub fn tail(&self, id: usize) -> usize {
        self.added_loop_vertex(id)
            .unwrap_or_else(|| self.base.edges[id].tail)
    }

    pub fn head(&self, id: usize) -> usize {
        self.added_loop_vertex(id)
            .unwrap_or_else(|| self.base.edges[id].head)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn index(&self, id: usize) -> &[i64] {
        match self.added_loop_vertex(id) {
            Some(_) => &self.zero,
            None => &self.base.edges[id].index,
        }
    }

    /// Reverse of an edge; added loops are their own reverse.
    pub fn reverse(&self, id: usize) -> usize {
        match self.added_loop_vertex(id) {
            Some(_) => id,
            None => id ^ 1,
        }
    }

    /// Outgoing edge ids in ascending order, added loop included.
    pub fn out_edges(&self, vertex: usize) -> &[usize] {
        &self.out[vertex]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const PENDANT: &str = "dim 1\nvertices 2\nedge 0 1 0\nedge 0 0 1\n";

    #[test]
    fn pendant_oriented_edges() {
        let g = FundamentalGraph::parse(PENDANT).unwrap();
        let triples: Vec<_> = g
            .edges()
            .iter()
            .map(|e| (e.tail, e.head, e.index[0]))
            .collect();
        assert_eq!(triples, vec![(0, 1, 0), (1, 0, 0), (0, 0, 1), (0, 0, -1)]);
        assert_eq!(g.degrees(), vec![3, 1]);
        assert!(g.has_loops());
    }

    #[test]
    fn reversal_is_an_involution() {
        let g = FundamentalGraph::parse(PENDANT).unwrap();
        for e in g.edges() {
            let r = g.edge(e.reverse_id());
            assert_eq!(r.reverse_id(), e.id);
            assert_eq!((r.tail, r.head), (e.head, e.tail));
            assert_eq!(r.index, e.index.iter().map(|x| -x).collect::<Vec<_>>());
        }
    }

    #[test]
    fn rejects_zero_index_loop() {
        let err = FundamentalGraph::parse("dim 1\nvertices 1\nedge 0 0 0\n").unwrap_err();
        assert!(matches!(err, Error::ZeroIndexLoop { line: 3, vertex: 0 }));
    }

    #[test]
    fn rejects_wrong_arity() {
        let err = FundamentalGraph::parse("dim 2\nvertices 2\nedge 0 1 0\n").unwrap_err();
        assert!(matches!(
            err,
            Error::IndexArity {
                line: 3,
                expected: 2,
                found: 1
            }
        ));
    }

    #[test]
    fn rejects_disconnected() {
        let err = FundamentalGraph::parse("dim 1\nvertices 3\nedge 0 1 1\n").unwrap_err();
        assert!(matches!(err, Error::Disconnected(2)));
    }

    #[test]
    fn rejects_duplicate_vertices() {
        let err = FundamentalGraph::parse("dim 1\nvertices 2\nvertices 2\n").unwrap_err();
        assert!(matches!(err, Error::Duplicate { line: 3, .. }));
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = FundamentalGraph::parse("dim 1\nvertices 2\nedge 0 x 1\n").unwrap_err();
        assert!(
            matches!(
                err,
                Error::Syntax {
                    line: 3,
                    column: 8,
                    ..
                }
            ),
            "{err}"
        );
        let err = FundamentalGraph::parse("# header\n\nvertices 2\n").unwrap_err();
        assert!(
            matches!(
                err,
                Error::Syntax {
                    line: 3,
                    column: 1,
                    ..
                }
            ),
            "{err}"
        );
        let err = FundamentalGraph::parse("dim 1\nvertices 2\nbogus 1\n").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 3, .. }));
    }

    #[test]
    fn comments_and_potential_lines() {
        let text = "# pendant\ndim 1 # one axis\n\nvertices 2\nedge 0 1 0\nedge 0 0 1\npotential 0 -2\npotential 1 2 1/3\n";
        let (g, q) = parse_graph_with_potential(text).unwrap();
        assert_eq!(g.vertex_count(), 2);
        let q = q.unwrap();
        assert_eq!(q.to_string(), "(-2, 2+1/3i)");
        let again = parse_graph_with_potential(&g.to_file_string(Some(&q))).unwrap();
        assert_eq!(again.0, g);
        assert_eq!(again.1.unwrap(), q);
    }

    #[test]
    fn modified_graph_loops() {
        let g = FundamentalGraph::parse("dim 1\nvertices 1\nedge 0 0 1\n").unwrap();
        let m = g.modified();
        assert_eq!(m.edge_count(), 3);
        assert_eq!(m.out_edges(0), &[0, 1, 2]);
        assert_eq!(m.added_loop_vertex(2), Some(0));
        assert_eq!(m.index(2), &[0]);
        assert_eq!(m.reverse(2), 2);
        assert_eq!(m.reverse(0), 1);
    }

    #[test]
    fn full_rank_diagnostics() {
        let ring =
            FundamentalGraph::parse("dim 1\nvertices 3\nedge 0 1 0\nedge 1 2 0\nedge 2 0 1\n")
                .unwrap();
        let diag = ring.validate_full_rank();
        assert!(diag.is_full());
        assert!(diag.warning().is_none());

        let double = FundamentalGraph::parse("dim 1\nvertices 1\nedge 0 0 2\n").unwrap();
        let diag = double.validate_full_rank();
        assert_eq!(diag.lattice_index, Some(2));
        assert!(!diag.is_full());
        assert!(diag.warning().unwrap().contains("index 2"));

        let flat = FundamentalGraph::parse("dim 2\nvertices 1\nedge 0 0 1 0\n").unwrap();
        let diag = flat.validate_full_rank();
        assert_eq!(diag.rank, 1);
        assert!(diag.warning().is_some());
    }

    #[test]
    fn hermite_basis_combines_generators() {
        let basis = hermite_basis(2, &[vec![2, 0], vec![3, 0], vec![0, 4], vec![1, 6]]);
        assert_eq!(basis.len(), 2);
        let index: i64 = basis.iter().enumerate().map(|(j, r)| r[j].abs()).product();
        assert_eq!(index, 2);
    }
}
