//! Canonical labeling by individualization and refinement.
//!
//! The search tree is the usual one: refine the unit partition to an
//! equitable partition, then repeatedly individualize a vertex of the first
//! smallest non-singleton cell and refine again until the partition is
//! discrete. Each leaf yields a relabeled adjacency matrix; the canonical form
//! is the leaf maximizing (refinement trace, relabeled matrix). Automorphisms
//! are discovered whenever two leaves give the same matrix and are used to
//! skip equivalent subtrees, so the result is exact, not a heuristic.

use std::cmp::Ordering;

use super::Graph;

/// Complete isomorphism invariant of a graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CanonicalCertificate {
    encoding: Vec<u8>,
    order: Vec<usize>,
}

impl CanonicalCertificate {
    /// Vertex count (4 bytes little endian) followed by the upper triangle of
    /// the relabeled adjacency matrix, row by row, packed LSB first.
    pub fn encoding(&self) -> &[u8] {
        &self.encoding
    }

    /// `order()[i]` is the original vertex placed at canonical position `i`.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn vertex_count(&self) -> usize {
        self.order.len()
    }

    /// Same canonical graph, regardless of which labeling produced it.
    pub fn same_graph(&self, other: &CanonicalCertificate) -> bool {
        self.encoding == other.encoding
    }
}

/// Statistics from one canonical labeling run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: usize,
    pub leaves: usize,
    pub generators: usize,
}

pub fn canonical_certificate(g: &Graph) -> CanonicalCertificate {
    canonical_form(g).0
}

pub fn canonical_form(g: &Graph) -> (CanonicalCertificate, SearchStats) {
    let n = g.vertex_count();
    let adj: Vec<Vec<u32>> = (0..n).map(|v| g.neighbors(v).into_iter().map(|u| u as u32).collect()).collect();
    let mut search = Search {
        graph: g,
        adj: &adj,
        first: None,
        best: None,
        generators: Vec::new(),
        path: Vec::new(),
        trace: Vec::new(),
        stats: SearchStats::default(),
        scratch: Scratch::new(n),
    };
    let mut root = Partition::unit(n);
    if n > 0 {
        let h = root.refine(&adj, &[0], &mut search.scratch);
        search.trace.push(h);
        search.visit(root);
    }
    search.stats.generators = search.generators.len();
    let best = search.best.take();
    let order: Vec<usize> = best.map_or_else(Vec::new, |b| b.lab.iter().map(|&v| v as usize).collect());
    let encoding = encode(g, &order);
    (CanonicalCertificate { encoding, order }, search.stats)
}

/// Encoding of `g` relabeled so that position `i` holds vertex `order[i]`.
pub(crate) fn encode(g: &Graph, order: &[usize]) -> Vec<u8> {
    let n = order.len();
    let bits = n * n.saturating_sub(1) / 2;
    let mut out = Vec::with_capacity(4 + bits.div_ceil(8));
    out.extend_from_slice(&(n as u32).to_le_bytes());
    let mut byte = 0u8;
    let mut k = 0usize;
    for i in 0..n {
        for j in i + 1..n {
            if g.adjacent(order[i], order[j]) {
                byte |= 1 << (k % 8);
            }
            k += 1;
            if k % 8 == 0 {
                out.push(byte);
                byte = 0;
            }
        }
    }
    if k % 8 != 0 {
        out.push(byte);
    }
    out
}

#[derive(Clone)]
struct Partition {
    /// position -> vertex
    lab: Vec<u32>,
    /// vertex -> position
    pos: Vec<u32>,
    /// vertex -> start position of its cell
    cell_of: Vec<u32>,
    /// start position -> cell length (meaningful at cell starts only)
    cell_len: Vec<u32>,
    cells: usize,
}

struct Scratch {
    count: Vec<u32>,
    touched: Vec<u32>,
    marked: Vec<bool>,
    in_queue: Vec<bool>,
}

impl Scratch {
    fn new(n: usize) -> Self {
        Scratch { count: vec![0; n], touched: Vec::new(), marked: vec![false; n], in_queue: vec![false; n] }
    }
}

#[inline]
fn mix(h: u64, x: u64) -> u64 {
    (h.rotate_left(7) ^ x).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

impl Partition {
    fn unit(n: usize) -> Self {
        let mut cell_len = vec![0; n];
        if n > 0 {
            cell_len[0] = n as u32;
        }
        Partition {
            lab: (0..n as u32).collect(),
            pos: (0..n as u32).collect(),
            cell_of: vec![0; n],
            cell_len,
            cells: usize::from(n > 0),
        }
    }

    fn is_discrete(&self) -> bool {
        self.cells == self.lab.len()
    }

    /// First cell of minimum size among the non-singleton cells.
    fn target_cell(&self) -> usize {
        let n = self.lab.len();
        let mut best = (u32::MAX, 0usize);
        let mut s = 0;
        while s < n {
            let len = self.cell_len[s];
            if len > 1 && len < best.0 {
                best = (len, s);
            }
            s += len as usize;
        }
        best.1
    }

    fn cell_members(&self, start: usize) -> &[u32] {
        &self.lab[start..start + self.cell_len[start] as usize]
    }

    fn individualize(&mut self, v: u32, adj: &[Vec<u32>], scratch: &mut Scratch) -> u64 {
        let c = self.cell_of[v as usize] as usize;
        let len = self.cell_len[c] as usize;
        debug_assert!(len > 1, "individualizing a singleton cell");
        let p = self.pos[v as usize] as usize;
        let other = self.lab[c];
        self.lab.swap(c, p);
        self.pos[other as usize] = p as u32;
        self.pos[v as usize] = c as u32;
        self.cell_len[c] = 1;
        self.cell_len[c + 1] = (len - 1) as u32;
        for i in c + 1..c + len {
            self.cell_of[self.lab[i] as usize] = (c + 1) as u32;
        }
        self.cells += 1;
        mix(c as u64, len as u64) ^ self.refine(adj, &[c as u32], scratch)
    }

    /// Refines to the coarsest equitable partition below the current one,
    /// starting from the given splitter cells. Returns a trace hash that is
    /// invariant under relabeling of the graph.
    fn refine(&mut self, adj: &[Vec<u32>], splitters: &[u32], scratch: &mut Scratch) -> u64 {
        let mut trace = 0x5151_5151u64;
        let mut queue: std::collections::VecDeque<u32> = splitters.iter().copied().collect();
        for &s in splitters {
            scratch.in_queue[s as usize] = true;
        }
        let mut cells_to_split: Vec<u32> = Vec::new();
        let mut frag: Vec<(u32, u32)> = Vec::new();
        while let Some(ws) = queue.pop_front() {
            let ws = ws as usize;
            scratch.in_queue[ws] = false;
            if self.is_discrete() {
                continue;
            }
            let wlen = self.cell_len[ws] as usize;
            for i in ws..ws + wlen {
                let w = self.lab[i] as usize;
                for &u in &adj[w] {
                    if scratch.count[u as usize] == 0 {
                        scratch.touched.push(u);
                    }
                    scratch.count[u as usize] += 1;
                }
            }
            for &u in &scratch.touched {
                let c = self.cell_of[u as usize];
                if !scratch.marked[c as usize] {
                    scratch.marked[c as usize] = true;
                    cells_to_split.push(c);
                }
            }
            cells_to_split.sort_unstable();
            trace = mix(trace, ws as u64);
            for &c in &cells_to_split {
                let c = c as usize;
                scratch.marked[c] = false;
                let len = self.cell_len[c] as usize;
                if len == 1 {
                    trace = mix(trace, scratch.count[self.lab[c] as usize] as u64);
                    continue;
                }
                frag.clear();
                frag.extend(self.lab[c..c + len].iter().map(|&v| (scratch.count[v as usize], v)));
                frag.sort_unstable_by_key(|&(k, _)| k);
                if frag[0].0 == frag[len - 1].0 {
                    trace = mix(trace, frag[0].0 as u64);
                    continue;
                }
                for (i, &(_, v)) in frag.iter().enumerate() {
                    self.lab[c + i] = v;
                    self.pos[v as usize] = (c + i) as u32;
                }
                // cut into fragments of equal count
                let mut starts = vec![c];
                for i in 1..len {
                    if frag[i].0 != frag[i - 1].0 {
                        starts.push(c + i);
                    }
                }
                starts.push(c + len);
                let was_queued = scratch.in_queue[c];
                let mut largest = 0;
                for f in 0..starts.len() - 1 {
                    let (s, e) = (starts[f], starts[f + 1]);
                    self.cell_len[s] = (e - s) as u32;
                    for i in s..e {
                        self.cell_of[self.lab[i] as usize] = s as u32;
                    }
                    trace = mix(trace, mix(frag[s - c].0 as u64, (e - s) as u64));
                    if e - s > starts[largest + 1] - starts[largest] {
                        largest = f;
                    }
                }
                self.cells += starts.len() - 2;
                for f in 0..starts.len() - 1 {
                    let s = starts[f];
                    if scratch.in_queue[s] {
                        continue;
                    }
                    if !was_queued && f == largest {
                        continue;
                    }
                    scratch.in_queue[s] = true;
                    queue.push_back(s as u32);
                }
            }
            cells_to_split.clear();
            for &u in &scratch.touched {
                scratch.count[u as usize] = 0;
            }
            scratch.touched.clear();
        }
        trace
    }
}

struct Leaf {
    lab: Vec<u32>,
    path: Vec<u32>,
    trace: Vec<u64>,
    graph: Vec<u64>,
}

struct Search<'a> {
    graph: &'a Graph,
    adj: &'a [Vec<u32>],
    first: Option<Leaf>,
    best: Option<Leaf>,
    generators: Vec<Vec<u32>>,
    path: Vec<u32>,
    trace: Vec<u64>,
    stats: SearchStats,
    scratch: Scratch,
}

fn common_prefix(a: &[u32], b: &[u32]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

struct Orbits {
    parent: Vec<u32>,
}

impl Orbits {
    fn new(n: usize) -> Self {
        Orbits { parent: (0..n as u32).collect() }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb) as usize] = ra.min(rb);
        }
    }
}

impl Search<'_> {
    fn relabeled_bits(&self, lab: &[u32]) -> Vec<u64> {
        let n = lab.len();
        let words = n.div_ceil(64);
        let mut bits = vec![0u64; n * words];
        for i in 0..n {
            for j in 0..n {
                if i != j && self.graph.adjacent(lab[i] as usize, lab[j] as usize) {
                    bits[i * words + j / 64] |= 1 << (j % 64);
                }
            }
        }
        bits
    }

    fn orbits_fixing_path(&self) -> Orbits {
        let mut orbits = Orbits::new(self.graph.vertex_count());
        for gen in &self.generators {
            if self.path.iter().all(|&v| gen[v as usize] == v) {
                for (v, &w) in gen.iter().enumerate() {
                    orbits.union(v as u32, w);
                }
            }
        }
        orbits
    }

    /// True when every leaf below the current node loses to the best leaf.
    fn worse_than_best(&self) -> bool {
        match &self.best {
            Some(best) => {
                for (cur, b) in self.trace.iter().zip(&best.trace) {
                    match cur.cmp(b) {
                        Ordering::Less => return true,
                        Ordering::Greater => return false,
                        Ordering::Equal => {}
                    }
                }
                false
            }
            None => false,
        }
    }

    /// Returns the depth to resume at when an automorphism makes the rest of
    /// the current subtree redundant.
    fn visit(&mut self, part: Partition) -> Option<usize> {
        self.stats.nodes += 1;
        if part.is_discrete() {
            return self.leaf(part);
        }
        let depth = self.path.len();
        let start = part.target_cell();
        let mut candidates: Vec<u32> = part.cell_members(start).to_vec();
        candidates.sort_unstable();
        let mut explored: Vec<u32> = Vec::new();
        let mut known_generators = usize::MAX;
        let mut orbits = Orbits::new(0);
        for v in candidates {
            if !explored.is_empty() {
                if known_generators != self.generators.len() {
                    orbits = self.orbits_fixing_path();
                    known_generators = self.generators.len();
                }
                let rv = orbits.find(v);
                if explored.iter().any(|&w| orbits.find(w) == rv) {
                    continue;
                }
            }
            explored.push(v);
            let mut child = part.clone();
            let h = child.individualize(v, self.adj, &mut self.scratch);
            self.path.push(v);
            self.trace.push(h);
            let jump = if self.worse_than_best() { None } else { self.visit(child) };
            self.path.pop();
            self.trace.pop();
            if let Some(target) = jump {
                if target < depth {
                    return Some(target);
                }
            }
        }
        None
    }

    fn leaf(&mut self, part: Partition) -> Option<usize> {
        self.stats.leaves += 1;
        let graph = self.relabeled_bits(&part.lab);
        let leaf = Leaf { lab: part.lab, path: self.path.clone(), trace: self.trace.clone(), graph };
        let Some(first) = &self.first else {
            self.best = Some(Leaf { lab: leaf.lab.clone(), path: leaf.path.clone(), trace: leaf.trace.clone(), graph: leaf.graph.clone() });
            self.first = Some(leaf);
            return None;
        };
        if first.graph == leaf.graph {
            let gen = automorphism(&first.lab, &leaf.lab);
            let back = common_prefix(&first.path, &leaf.path);
            self.generators.push(gen);
            return Some(back);
        }
        let best = self.best.as_ref().expect("best leaf set with first");
        match (&leaf.trace, &leaf.graph).cmp(&(&best.trace, &best.graph)) {
            Ordering::Equal => {
                let gen = automorphism(&best.lab, &leaf.lab);
                let back = common_prefix(&best.path, &leaf.path);
                self.generators.push(gen);
                Some(back)
            }
            Ordering::Greater => {
                self.best = Some(leaf);
                None
            }
            Ordering::Less => None,
        }
    }
}

/// The vertex map sending `from[i]` to `to[i]`.
fn automorphism(from: &[u32], to: &[u32]) -> Vec<u32> {
    let mut gen = vec![0u32; from.len()];
    for (&a, &b) in from.iter().zip(to) {
        gen[a as usize] = b;
    }
    gen
}
