//! Frame graphs: which inner products vanish, spanning forests, fundamental
//! cycles, triangle bases of the cycle space and a chordality test.
//!
//! Ties are always broken by lowest vertex index, so forests and bases are
//! reproducible.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::frame::{GramMatrix, Tolerance};

const WORD: usize = 64;

fn words_for(n: usize) -> usize {
    n.div_ceil(WORD).max(1)
}

/// Undirected simple graph on `0..n`, stored as one adjacency bitset per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameGraph {
    n: usize,
    words: usize,
    adj: Vec<u64>,
}

impl FrameGraph {
    pub fn empty(n: usize) -> Self {
        let words = words_for(n);
        FrameGraph {
            n,
            words,
            adj: vec![0; n * words],
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = FrameGraph::empty(n);
        for &(j, k) in edges {
            g.add_edge(j, k)?;
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = FrameGraph::empty(n);
        for j in 0..n {
            for k in j + 1..n {
                g.insert(j, k);
            }
        }
        g
    }

    pub fn add_edge(&mut self, j: usize, k: usize) -> Result<()> {
        for v in [j, k] {
            if v >= self.n {
                return Err(Error::IndexOutOfRange {
                    index: v,
                    n: self.n,
                });
            }
        }
        if j == k {
            return Err(Error::InvalidInput("frame graphs have no self-loops"));
        }
        self.insert(j, k);
        Ok(())
    }

    fn insert(&mut self, j: usize, k: usize) {
        self.adj[j * self.words + k / WORD] |= 1 << (k % WORD);
        self.adj[k * self.words + j / WORD] |= 1 << (j % WORD);
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, j: usize, k: usize) -> bool {
        j < self.n && k < self.n && self.adj[j * self.words + k / WORD] >> (k % WORD) & 1 == 1
    }

    pub(crate) fn row(&self, j: usize) -> &[u64] {
        &self.adj[j * self.words..(j + 1) * self.words]
    }

    /// Neighbors of `j` in increasing order.
    pub fn neighbors(&self, j: usize) -> impl Iterator<Item = usize> + '_ {
        bits(self.row(j))
    }

    pub fn degree(&self, j: usize) -> usize {
        self.row(j).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Edges `(j, k)` with `j < k`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|j| {
                self.neighbors(j)
                    .filter(move |&k| k > j)
                    .map(move |k| (j, k))
            })
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|j| self.degree(j)).sum::<usize>() / 2
    }

    pub fn component_count(&self) -> usize {
        spanning_forest(self).roots.len()
    }

    /// Dimension of the cycle space: `|E| - n + #components`.
    pub fn cyclomatic_number(&self) -> usize {
        self.edge_count() + self.component_count() - self.n
    }
}

pub(crate) fn bits(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(w, &word)| {
        let mut rest = word;
        core::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let b = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(w * WORD + b)
        })
    })
}

/// Frame graph of a Gramian: `{j, k}` is an edge iff `|g[j][k]| > abs_zero`.
pub fn build_frame_graph(g: &GramMatrix, tol: &Tolerance) -> FrameGraph {
    let mut graph = FrameGraph::empty(g.n());
    for j in 0..g.n() {
        for k in j + 1..g.n() {
            if !tol.is_zero(g.modulus(j, k)) {
                graph.insert(j, k);
            }
        }
    }
    graph
}

/// A rooted spanning tree for every connected component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanningForest {
    /// Parent of each vertex; roots are their own parent.
    pub parent: Vec<usize>,
    pub roots: Vec<usize>,
    /// Tree edges as `(min, max)` pairs, in discovery order.
    pub tree_edges: Vec<(usize, usize)>,
    /// Vertices in the order they were reached; parents precede children.
    pub order: Vec<usize>,
    pub depth: Vec<usize>,
}

impl SpanningForest {
    fn bfs(n: usize, mut neighbors: impl FnMut(usize) -> Vec<usize>) -> Self {
        let mut parent = vec![usize::MAX; n];
        let mut depth = vec![0; n];
        let mut roots = Vec::new();
        let mut tree_edges = Vec::new();
        let mut order = Vec::with_capacity(n);
        for root in 0..n {
            if parent[root] != usize::MAX {
                continue;
            }
            parent[root] = root;
            roots.push(root);
            let start = order.len();
            order.push(root);
            let mut head = start;
            while head < order.len() {
                let v = order[head];
                head += 1;
                for u in neighbors(v) {
                    if parent[u] == usize::MAX {
                        parent[u] = v;
                        depth[u] = depth[v] + 1;
                        tree_edges.push((v.min(u), v.max(u)));
                        order.push(u);
                    }
                }
            }
        }
        SpanningForest {
            parent,
            roots,
            tree_edges,
            order,
            depth,
        }
    }

    /// Builds a forest from an explicit edge set, which must be an acyclic
    /// subset of `graph`'s edges spanning every component. Each tree is rooted
    /// at its lowest vertex.
    pub fn from_tree_edges(graph: &FrameGraph, edges: &[(usize, usize)]) -> Result<Self> {
        let n = graph.n();
        let mut tree = FrameGraph::empty(n);
        for &(j, k) in edges {
            if !graph.has_edge(j, k) {
                return Err(Error::InvalidInput(
                    "tree edge is not an edge of the frame graph",
                ));
            }
            if tree.has_edge(j, k) {
                return Err(Error::InvalidInput("repeated tree edge"));
            }
            tree.insert(j, k);
        }
        let forest = spanning_forest(&tree);
        if forest.tree_edges.len() != edges.len() {
            return Err(Error::InvalidInput("tree edges contain a cycle"));
        }
        if forest.roots.len() != graph.component_count() {
            return Err(Error::InvalidInput(
                "tree edges do not span the frame graph",
            ));
        }
        Ok(forest)
    }

    pub fn n(&self) -> usize {
        self.parent.len()
    }

    pub fn is_tree_edge(&self, j: usize, k: usize) -> bool {
        (self.parent[j] == k && j != k) || (self.parent[k] == j && j != k)
    }

    /// Vertices on the tree path from `a` to `b`, or `None` if they lie in
    /// different trees.
    pub fn path(&self, a: usize, b: usize) -> Option<Vec<usize>> {
        let (mut x, mut y) = (a, b);
        let mut front = vec![x];
        let mut back = vec![y];
        while self.depth[x] > self.depth[y] {
            x = self.parent[x];
            front.push(x);
        }
        while self.depth[y] > self.depth[x] {
            y = self.parent[y];
            back.push(y);
        }
        while x != y {
            if self.parent[x] == x {
                return None;
            }
            x = self.parent[x];
            y = self.parent[y];
            front.push(x);
            back.push(y);
        }
        back.pop();
        front.extend(back.into_iter().rev());
        Some(front)
    }
}

/// Breadth-first forest: each component is rooted at its lowest vertex and
/// neighbors are visited in increasing order.
pub fn spanning_forest(graph: &FrameGraph) -> SpanningForest {
    SpanningForest::bfs(graph.n(), |v| graph.neighbors(v).collect())
}

/// A simple closed walk `(j_1, ..., j_m)`, `m >= 3`, returning from `j_m` to `j_1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cycle {
    vertices: Vec<usize>,
}

impl Cycle {
    /// Validates that the vertices are distinct and consecutive ones
    /// (cyclically) are adjacent in `graph`.
    pub fn new(graph: &FrameGraph, vertices: Vec<usize>) -> Result<Self> {
        let m = vertices.len();
        if m < 3 {
            return Err(Error::InvalidInput("a cycle needs at least three vertices"));
        }
        for (i, &v) in vertices.iter().enumerate() {
            if v >= graph.n() {
                return Err(Error::IndexOutOfRange {
                    index: v,
                    n: graph.n(),
                });
            }
            if vertices[..i].contains(&v) {
                return Err(Error::InvalidInput("cycle repeats a vertex"));
            }
            if !graph.has_edge(v, vertices[(i + 1) % m]) {
                return Err(Error::NotInSpan);
            }
        }
        Ok(Cycle { vertices })
    }

    pub(crate) fn from_vertices_unchecked(vertices: Vec<usize>) -> Self {
        Cycle { vertices }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Rotates the lowest vertex to the front and orients the cycle so that
    /// its second vertex is smaller than its last.
    pub fn canonical(&self) -> Cycle {
        let m = self.vertices.len();
        let start = (0..m).min_by_key(|&i| self.vertices[i]).unwrap_or(0);
        let mut v: Vec<usize> = (0..m).map(|i| self.vertices[(start + i) % m]).collect();
        if m > 2 && v[1] > v[m - 1] {
            v[1..].reverse();
        }
        Cycle { vertices: v }
    }

    /// Consecutive vertex pairs, including the closing one.
    pub fn steps(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let m = self.vertices.len();
        (0..m).map(move |i| (self.vertices[i], self.vertices[(i + 1) % m]))
    }
}

/// A basis of the cycle space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleBasis {
    pub cycles: Vec<Cycle>,
    /// For fundamental bases, the non-tree edge that closes each cycle.
    pub chords: Vec<Option<(usize, usize)>>,
}

impl CycleBasis {
    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }
}

/// One cycle per non-tree edge `{a, b}` (lexicographic order): the tree path
/// from `a` to `b` closed by the chord, in canonical orientation.
///
/// Panics if `forest` does not span `graph`.
pub fn fundamental_cycles(graph: &FrameGraph, forest: &SpanningForest) -> CycleBasis {
    let mut cycles = Vec::new();
    let mut chords = Vec::new();
    for (a, b) in graph.edges() {
        if forest.is_tree_edge(a, b) {
            continue;
        }
        let path = forest
            .path(a, b)
            .expect("spanning forest does not cover the frame graph");
        cycles.push(Cycle::from_vertices_unchecked(path).canonical());
        chords.push(Some((a, b)));
    }
    CycleBasis { cycles, chords }
}

/// Coordinates of cycles relative to a fixed spanning forest: one coordinate
/// per non-tree edge. A cycle-space element is determined by these.
pub(crate) struct ChordIndex {
    n: usize,
    index: Vec<usize>,
    pub(crate) count: usize,
}

impl ChordIndex {
    pub(crate) fn new(graph: &FrameGraph, forest: &SpanningForest) -> Self {
        let n = graph.n();
        let mut index = vec![usize::MAX; n * n];
        let mut count = 0;
        for (a, b) in graph.edges() {
            if !forest.is_tree_edge(a, b) {
                index[a * n + b] = count;
                index[b * n + a] = count;
                count += 1;
            }
        }
        ChordIndex { n, index, count }
    }

    pub(crate) fn get(&self, a: usize, b: usize) -> Option<usize> {
        let i = self.index[a * self.n + b];
        (i != usize::MAX).then_some(i)
    }

    /// Signed chord coordinates of a closed walk; `+1` for traversal from the
    /// lower to the higher endpoint.
    pub(crate) fn signed(&self, cycle: &Cycle) -> Vec<i64> {
        let mut x = vec![0; self.count];
        for (a, b) in cycle.steps() {
            if let Some(i) = self.get(a, b) {
                x[i] += if a < b { 1 } else { -1 };
            }
        }
        x
    }

    pub(crate) fn parity(&self, cycle: &Cycle) -> Vec<u64> {
        let mut x = vec![0u64; words_for(self.count)];
        for (a, b) in cycle.steps() {
            if let Some(i) = self.get(a, b) {
                x[i / WORD] ^= 1 << (i % WORD);
            }
        }
        x
    }
}

/// Incrementally built GF(2) row echelon form.
pub(crate) struct Gf2Echelon {
    rows: Vec<(usize, Vec<u64>)>,
}

impl Gf2Echelon {
    pub(crate) fn new() -> Self {
        Gf2Echelon { rows: Vec::new() }
    }

    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }

    pub(crate) fn reduce(&self, mut v: Vec<u64>) -> Vec<u64> {
        for (pivot, row) in &self.rows {
            if v[pivot / WORD] >> (pivot % WORD) & 1 == 1 {
                v.iter_mut().zip(row).for_each(|(a, b)| *a ^= b);
            }
        }
        v
    }

    /// Adds `v` if it is independent of the rows so far.
    pub(crate) fn insert(&mut self, v: Vec<u64>) -> bool {
        let v = self.reduce(v);
        let pivot = bits(&v).next();
        match pivot {
            Some(pivot) => {
                self.rows.push((pivot, v));
                true
            }
            None => false,
        }
    }
}

/// A basis of 3-cycles for the cycle space, if the triangles span it.
///
/// Triangles `a < b < c` are scanned in lexicographic order and kept when
/// independent over GF(2) in the chord coordinates of the canonical forest.
pub fn triangle_basis(graph: &FrameGraph) -> Option<CycleBasis> {
    let forest = spanning_forest(graph);
    let chords = ChordIndex::new(graph, &forest);
    let mut echelon = Gf2Echelon::new();
    let mut cycles = Vec::new();
    let mut common = vec![0u64; graph.words];
    'scan: for a in 0..graph.n() {
        if echelon.rank() == chords.count {
            break 'scan;
        }
        for b in graph.neighbors(a).filter(|&b| b > a) {
            common
                .iter_mut()
                .zip(graph.row(a).iter().zip(graph.row(b)))
                .for_each(|(c, (x, y))| *c = x & y);
            for c in bits(&common).filter(|&c| c > b) {
                let tri = Cycle::from_vertices_unchecked(vec![a, b, c]);
                if echelon.insert(chords.parity(&tri)) {
                    cycles.push(tri);
                    if echelon.rank() == chords.count {
                        break 'scan;
                    }
                }
            }
        }
    }
    (echelon.rank() == chords.count).then(|| CycleBasis {
        chords: vec![None; cycles.len()],
        cycles,
    })
}

/// Chordality via maximum cardinality search: the reverse visiting order is
/// a perfect elimination ordering iff the graph is chordal.
pub fn is_chordal(graph: &FrameGraph) -> bool {
    let n = graph.n();
    let mut weight = vec![0usize; n];
    let mut pos = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    for step in 0..n {
        let v = (0..n)
            .filter(|&v| pos[v] == usize::MAX)
            .max_by(|&a, &b| weight[a].cmp(&weight[b]).then(b.cmp(&a)))
            .expect("unnumbered vertex remains");
        pos[v] = step;
        order.push(v);
        for u in graph.neighbors(v) {
            if pos[u] == usize::MAX {
                weight[u] += 1;
            }
        }
    }
    let mut before = vec![0u64; graph.words];
    for &v in &order {
        let earlier: Vec<u64> = graph
            .row(v)
            .iter()
            .zip(&before)
            .map(|(a, b)| a & b)
            .collect();
        if let Some(p) = bits(&earlier).max_by_key(|&u| pos[u]) {
            let ok = bits(&earlier).all(|u| u == p || graph.has_edge(u, p));
            if !ok {
                return false;
            }
        }
        before[v / WORD] |= 1 << (v % WORD);
    }
    true
}
