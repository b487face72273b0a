//! Graph representation, topology generators and structural queries.
//!
//! Graphs are connected, unweighted and undirected, with dense vertex ids
//! `0..n-1` and sorted adjacency lists, so iteration order is deterministic
//! everywhere. Grid graphs carry their lattice metadata; vertex `(r, c)` of
//! an `rows x cols` grid has id `r * cols + c`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vertex = usize;

/// Lattice neighborhood: `Four` connects horizontal/vertical neighbors,
/// `Eight` additionally the four diagonals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GridKind {
    Four,
    Eight,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridMeta {
    pub rows: usize,
    pub cols: usize,
    pub kind: GridKind,
}

impl GridMeta {
    pub fn id(&self, r: usize, c: usize) -> Vertex {
        r * self.cols + c
    }

    pub fn coords(&self, v: Vertex) -> (usize, usize) {
        (v / self.cols, v % self.cols)
    }
}

/// Position of a grid vertex within the lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum VertexClass {
    Corner,
    Border,
    Middle,
}

/// A connected undirected graph with sorted adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<Vertex>>,
    meta: Option<GridMeta>,
}

impl Graph {
    /// Validates symmetry, range, simplicity and connectivity.
    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)], meta: Option<GridMeta>) -> Result<Graph> {
        if n == 0 {
            return Err(Error::InvalidParameter("graph must have at least one vertex".into()));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidParameter(format!(
                    "edge ({u}, {v}) out of range for n = {n}"
                )));
            }
            if u == v {
                return Err(Error::InvalidParameter(format!("self-loop at vertex {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidParameter("duplicate edge".into()));
            }
        }
        let g = Graph { n, adj, meta };
        if !g.is_connected() {
            return Err(Error::Disconnected);
        }
        if let Some(m) = &g.meta {
            if m.rows * m.cols != n {
                return Err(Error::InvalidParameter("grid metadata does not match vertex count".into()));
            }
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Edge count.
    pub fn m(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as sorted `(u, v)` pairs with `u < v`.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::with_capacity(self.m());
        for u in 0..self.n {
            for &v in &self.adj[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn grid_meta(&self) -> Option<&GridMeta> {
        self.meta.as_ref()
    }

    pub fn is_tree(&self) -> bool {
        self.m() == self.n - 1
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &v in &self.adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == self.n
    }
}

/// Maximum minus minimum degree; the graph is `alpha`-almost regular for
/// this value of `alpha`.
pub fn regularity_gap(g: &Graph) -> usize {
    g.max_degree() - g.min_degree()
}

/// Classifies a grid vertex as corner, border or middle.
pub fn vertex_class(g: &Graph, v: Vertex) -> Result<VertexClass> {
    let meta = g.grid_meta().ok_or(Error::MissingGridMeta)?;
    let (r, c) = meta.coords(v);
    let r_edge = r == 0 || r + 1 == meta.rows;
    let c_edge = c == 0 || c + 1 == meta.cols;
    Ok(match (r_edge, c_edge) {
        (true, true) => VertexClass::Corner,
        (false, false) => VertexClass::Middle,
        _ => VertexClass::Border,
    })
}

pub fn make_path(n: usize) -> Result<Graph> {
    if n < 1 {
        return Err(Error::InvalidParameter("path needs n >= 1".into()));
    }
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::from_edges(n, &edges, None)
}

pub fn make_cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidParameter("cycle needs n >= 3".into()));
    }
    let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    edges.push((0, n - 1));
    Graph::from_edges(n, &edges, None)
}

pub fn make_grid(rows: usize, cols: usize, kind: GridKind) -> Result<Graph> {
    if rows < 1 || cols < 1 || rows * cols < 2 {
        return Err(Error::InvalidParameter("grid needs rows, cols >= 1 and at least two vertices".into()));
    }
    let meta = GridMeta { rows, cols, kind };
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let v = meta.id(r, c);
            if c + 1 < cols {
                edges.push((v, meta.id(r, c + 1)));
            }
            if r + 1 < rows {
                edges.push((v, meta.id(r + 1, c)));
                if kind == GridKind::Eight {
                    if c + 1 < cols {
                        edges.push((v, meta.id(r + 1, c + 1)));
                    }
                    if c > 0 {
                        edges.push((v, meta.id(r + 1, c - 1)));
                    }
                }
            }
        }
    }
    Graph::from_edges(rows * cols, &edges, Some(meta))
}

/// Ring of `q` near-cliques: each gadget is `K_{delta+1}` minus the edge
/// between its first and last vertex, and consecutive gadgets are chained by
/// an edge between those endpoints (wrapping around). The result is
/// connected and `delta`-regular.
pub fn make_regular_gadget(delta: usize, q: usize) -> Result<Graph> {
    if delta < 3 || q < 2 {
        return Err(Error::InvalidParameter("regular gadget needs delta >= 3 and q >= 2".into()));
    }
    let per = delta + 1;
    let n = q * per;
    let mut edges = Vec::new();
    for i in 0..q {
        let base = i * per;
        for a in 0..per {
            for b in (a + 1)..per {
                if a == 0 && b == delta {
                    continue; // the removed clique edge
                }
                edges.push((base + a, base + b));
            }
        }
        let next = (i + 1) % q;
        edges.push((base + delta, next * per));
    }
    Graph::from_edges(n, &edges, None)
}

/// Cycle of length `o` with `delta - 2` degree-1 vertices appended to each
/// cycle vertex, so cycle vertices have degree `delta`.
pub fn make_cycle_with_pendants(o: usize, delta: usize) -> Result<Graph> {
    if o < 3 || delta < 3 {
        return Err(Error::InvalidParameter("pendant cycle needs o >= 3 and delta >= 3".into()));
    }
    let pendants = delta - 2;
    let n = o * (delta - 1);
    let mut edges: Vec<_> = (0..o).map(|i| (i, (i + 1) % o)).collect();
    for i in 0..o {
        for p in 0..pendants {
            edges.push((i, o + i * pendants + p));
        }
    }
    Graph::from_edges(n, &edges, None)
}

/// Two star centers joined through one shared leaf: centers `0` and `2`,
/// shared vertex `1`, then `leaves_per_star - 1` private leaves on each
/// center. `n = 2 * leaves_per_star + 1`.
pub fn make_double_star(leaves_per_star: usize) -> Result<Graph> {
    if leaves_per_star < 2 {
        return Err(Error::InvalidParameter("double star needs at least 2 leaves per star".into()));
    }
    let private = leaves_per_star - 1;
    let n = 2 * leaves_per_star + 1;
    let mut edges = vec![(0, 1), (1, 2)];
    for p in 0..private {
        edges.push((0, 3 + p));
        edges.push((2, 3 + private + p));
    }
    Graph::from_edges(n, &edges, None)
}

/// Parses the edge-list format: header `n m`, an optional grid comment
/// `# grid <rows> <cols> <4|8>`, then `m` lines `u v` with `u < v`.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::Parse { line: 1, msg: "empty document".into() })?;
    let mut parts = header.split_whitespace();
    let n: usize = parts
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::Parse { line: 1, msg: "expected vertex count".into() })?;
    let m: usize = parts
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::Parse { line: 1, msg: "expected edge count".into() })?;

    let mut meta = None;
    let mut edges = Vec::with_capacity(m);
    for (idx, raw) in lines {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let toks: Vec<_> = rest.split_whitespace().collect();
            if toks.len() == 4 && toks[0] == "grid" {
                let rows: usize = toks[1].parse().map_err(|_| Error::Parse {
                    line: line_no,
                    msg: "bad grid rows".into(),
                })?;
                let cols: usize = toks[2].parse().map_err(|_| Error::Parse {
                    line: line_no,
                    msg: "bad grid cols".into(),
                })?;
                let kind = match toks[3] {
                    "4" => GridKind::Four,
                    "8" => GridKind::Eight,
                    _ => {
                        return Err(Error::Parse { line: line_no, msg: "grid kind must be 4 or 8".into() })
                    }
                };
                meta = Some(GridMeta { rows, cols, kind });
            }
            continue;
        }
        let mut it = line.split_whitespace();
        let u: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse { line: line_no, msg: "expected edge endpoint".into() })?;
        let v: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse { line: line_no, msg: "expected edge endpoint".into() })?;
        if it.next().is_some() {
            return Err(Error::Parse { line: line_no, msg: "trailing tokens on edge line".into() });
        }
        if u >= v {
            return Err(Error::Parse { line: line_no, msg: format!("edges must satisfy u < v, got {u} {v}") });
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(Error::Parse {
            line: 1,
            msg: format!("header promises {m} edges, found {}", edges.len()),
        });
    }
    Graph::from_edges(n, &edges, meta).map_err(|e| match e {
        Error::InvalidParameter(msg) => Error::Parse { line: 1, msg },
        Error::Disconnected => Error::Parse { line: 1, msg: "graph is not connected".into() },
        other => other,
    })
}

/// Canonical edge-list document; `parse_graph` inverts it exactly.
pub fn serialize_graph(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.m());
    if let Some(meta) = g.grid_meta() {
        let kind = match meta.kind {
            GridKind::Four => 4,
            GridKind::Eight => 8,
        };
        out.push_str(&format!("# grid {} {} {}\n", meta.rows, meta.cols, kind));
    }
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}
