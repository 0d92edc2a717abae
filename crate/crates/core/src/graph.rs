//! Immutable undirected simple graphs in compressed adjacency form, plus the
//! BFS machinery (components, canonical geodesics, distance matrices) every
//! other module builds on.

use std::collections::VecDeque;
use std::io::{BufRead, Write};

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Undirected simple graph on vertices `0..n`.
///
/// Neighbor lists are sorted ascending, so two graphs with the same edge set
/// compare (and hash) equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
    edge_count: usize,
}

impl Graph {
    /// Builds the canonical graph from an edge list.
    ///
    /// Pairs may come in either orientation, but each undirected edge must
    /// appear once; duplicates and self-loops are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut canon = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::OutOfRangeVertex { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            canon.push((u.min(v), u.max(v)));
        }
        canon.sort_unstable();
        if let Some(w) = canon.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEdge(w[0].0, w[0].1));
        }

        let mut degree = vec![0usize; n];
        for &(u, v) in &canon {
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut neighbors = vec![0usize; 2 * canon.len()];
        // Pairs are sorted by (min, max); filling u<-v first and v<-u second
        // keeps every list ascending without a second sort.
        for &(u, v) in &canon {
            neighbors[fill[v]] = u;
            fill[v] += 1;
        }
        for &(u, v) in &canon {
            neighbors[fill[u]] = v;
            fill[u] += 1;
        }
        let g = Graph {
            offsets,
            neighbors,
            edge_count: canon.len(),
        };
        debug_assert!(g.validate().is_ok());
        Ok(g)
    }

    /// Graph with `n` vertices and no edges.
    pub fn empty(n: usize) -> Self {
        Graph {
            offsets: vec![0; n + 1],
            neighbors: Vec::new(),
            edge_count: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.n() == 0
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n()).map(|v| self.degree(v)).collect()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && v < self.n() && self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    /// Sum of degrees over `set`.
    pub fn volume(&self, set: &[usize]) -> usize {
        set.iter().map(|&v| self.degree(v)).sum()
    }

    pub fn total_volume(&self) -> usize {
        2 * self.edge_count
    }

    pub fn is_connected(&self) -> bool {
        self.n() > 0 && components(self).sizes.len() == 1
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            Err(Error::OutOfRangeVertex { vertex: v, n: self.n() })
        }
    }

    /// Re-checks the canonical-form invariants: sorted, loop-free,
    /// duplicate-free, symmetric adjacency with consistent edge count.
    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        let mut degree_sum = 0;
        for u in 0..n {
            let nb = self.neighbors(u);
            degree_sum += nb.len();
            for (i, &v) in nb.iter().enumerate() {
                if v >= n {
                    return Err(Error::OutOfRangeVertex { vertex: v, n });
                }
                if v == u {
                    return Err(Error::SelfLoop(u));
                }
                if i > 0 && nb[i - 1] >= v {
                    return Err(Error::DuplicateEdge(u, v));
                }
                if self.neighbors(v).binary_search(&u).is_err() {
                    return Err(Error::InvalidParams(format!(
                        "asymmetric adjacency: {u} lists {v} but not the reverse"
                    )));
                }
            }
        }
        if degree_sum != 2 * self.edge_count {
            return Err(Error::InvalidParams("degree sum != 2 * edge_count".into()));
        }
        Ok(())
    }
}

/// Connected-component labeling. Components are numbered in order of their
/// smallest vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentLabeling {
    pub label: Vec<usize>,
    pub sizes: Vec<usize>,
    /// A largest component; ties go to the smallest id.
    pub giant_id: usize,
}

impl ComponentLabeling {
    pub fn count(&self) -> usize {
        self.sizes.len()
    }

    pub fn members(&self, id: usize) -> Vec<usize> {
        (0..self.label.len()).filter(|&v| self.label[v] == id).collect()
    }

    pub fn giant_size(&self) -> usize {
        self.sizes.get(self.giant_id).copied().unwrap_or(0)
    }

    pub fn giant_vertices(&self) -> Vec<usize> {
        if self.sizes.is_empty() {
            Vec::new()
        } else {
            self.members(self.giant_id)
        }
    }
}

pub fn components(g: &Graph) -> ComponentLabeling {
    let n = g.n();
    let mut label = vec![usize::MAX; n];
    let mut sizes = Vec::new();
    let mut queue = VecDeque::new();
    for s in 0..n {
        if label[s] != usize::MAX {
            continue;
        }
        let id = sizes.len();
        label[s] = id;
        queue.push_back(s);
        let mut size = 0;
        while let Some(u) = queue.pop_front() {
            size += 1;
            for &v in g.neighbors(u) {
                if label[v] == usize::MAX {
                    label[v] = id;
                    queue.push_back(v);
                }
            }
        }
        sizes.push(size);
    }
    let mut giant_id = 0;
    for (id, &s) in sizes.iter().enumerate() {
        if s > sizes[giant_id] {
            giant_id = id;
        }
    }
    ComponentLabeling {
        label,
        sizes,
        giant_id,
    }
}

/// A relabeled vertex-induced subgraph together with both directions of the
/// vertex map. New labels follow increasing old labels.
#[derive(Debug, Clone)]
pub struct Subgraph {
    pub graph: Graph,
    pub old_to_new: Vec<Option<usize>>,
    pub new_to_old: Vec<usize>,
}

pub fn induced_subgraph(g: &Graph, vertices: &[usize]) -> Result<Subgraph> {
    let mut keep: Vec<usize> = vertices.to_vec();
    for &v in &keep {
        g.check_vertex(v)?;
    }
    keep.sort_unstable();
    keep.dedup();
    let mut old_to_new = vec![None; g.n()];
    for (new, &old) in keep.iter().enumerate() {
        old_to_new[old] = Some(new);
    }
    let mut edges = Vec::new();
    for (new_u, &old_u) in keep.iter().enumerate() {
        for &old_v in g.neighbors(old_u) {
            if let Some(new_v) = old_to_new[old_v] {
                if new_u < new_v {
                    edges.push((new_u, new_v));
                }
            }
        }
    }
    Ok(Subgraph {
        graph: Graph::from_edges(keep.len(), &edges)?,
        old_to_new,
        new_to_old: keep,
    })
}

/// The largest connected component as a standalone graph.
pub fn giant_component(g: &Graph) -> Subgraph {
    let labels = components(g);
    induced_subgraph(g, &labels.giant_vertices()).expect("component vertices are in range")
}

/// Single-source BFS with canonical parents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BfsResult {
    pub source: usize,
    /// Hop distance, `None` when unreachable.
    pub dist: Vec<Option<u32>>,
    /// Smallest-index neighbor one level closer to the source.
    pub parent: Vec<Option<usize>>,
}

impl BfsResult {
    pub fn distance(&self, v: usize) -> Option<u32> {
        self.dist[v]
    }

    /// Walks the parent chain from `target` back to the source and returns
    /// the path source -> target.
    pub fn path_to(&self, target: usize) -> Option<Vec<usize>> {
        self.dist[target]?;
        let mut path = vec![target];
        let mut v = target;
        while let Some(p) = self.parent[v] {
            path.push(p);
            v = p;
        }
        path.reverse();
        Some(path)
    }
}

pub fn bfs(g: &Graph, source: usize) -> Result<BfsResult> {
    g.check_vertex(source)?;
    let dist = bfs_levels(g, &[source], None);
    let parent = (0..g.n())
        .map(|v| canonical_parent(g, &dist, v))
        .collect();
    Ok(BfsResult {
        source,
        dist,
        parent,
    })
}

fn canonical_parent(g: &Graph, dist: &[Option<u32>], v: usize) -> Option<usize> {
    let dv = dist[v]?;
    if dv == 0 {
        return None;
    }
    g.neighbors(v)
        .iter()
        .copied()
        .find(|&u| dist[u] == Some(dv - 1))
}

/// Level-synchronous BFS from a set of sources. With `stop_at`, the search
/// halts as soon as that vertex is labeled: every vertex closer to the
/// sources than it already carries its final distance at that point.
fn bfs_levels(g: &Graph, sources: &[usize], stop_at: Option<usize>) -> Vec<Option<u32>> {
    let mut dist = vec![None; g.n()];
    let mut queue = VecDeque::with_capacity(g.n());
    for &s in sources {
        if dist[s].is_none() {
            dist[s] = Some(0);
            queue.push_back(s);
        }
    }
    if stop_at.is_some_and(|t| dist[t].is_some()) {
        return dist;
    }
    while let Some(u) = queue.pop_front() {
        let du = dist[u].unwrap();
        for &v in g.neighbors(u) {
            if dist[v].is_none() {
                dist[v] = Some(du + 1);
                if Some(v) == stop_at {
                    return dist;
                }
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Hop distance from the nearest vertex of `sources` to every vertex.
pub fn multi_source_distances(g: &Graph, sources: &[usize]) -> Result<Vec<Option<u32>>> {
    for &s in sources {
        g.check_vertex(s)?;
    }
    Ok(bfs_levels(g, sources, None))
}

/// Canonical shortest path from `a` to `b`: the lowest-index-parent chain of
/// a BFS rooted at `a`.
pub fn geodesic(g: &Graph, a: usize, b: usize) -> Result<Vec<usize>> {
    g.check_vertex(a)?;
    g.check_vertex(b)?;
    let dist = bfs_levels(g, &[a], Some(b));
    let Some(len) = dist[b] else {
        return Err(Error::Unreachable(a, b));
    };
    let mut path = Vec::with_capacity(len as usize + 1);
    let mut v = b;
    path.push(v);
    while v != a {
        v = canonical_parent(g, &dist, v).expect("BFS levels below the target are complete");
        path.push(v);
    }
    path.reverse();
    Ok(path)
}

/// All-pairs hop distances of a connected graph, one BFS per row.
#[derive(Debug, Clone)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<u16>,
}

impl DistanceMatrix {
    pub fn new(g: &Graph) -> Result<Self> {
        let n = g.n();
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let rows: Vec<Vec<u16>> = (0..n)
            .into_par_iter()
            .map(|s| {
                bfs_levels(g, &[s], None)
                    .into_iter()
                    .map(|d| match d {
                        Some(d) if d < u16::MAX as u32 => Ok(d as u16),
                        Some(_) => Err(Error::InvalidParams("diameter exceeds u16 range".into())),
                        None => Err(Error::Disconnected),
                    })
                    .collect::<Result<Vec<u16>>>()
            })
            .collect::<Result<_>>()?;
        Ok(DistanceMatrix {
            n,
            data: rows.concat(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, u: usize, v: usize) -> u32 {
        self.data[u * self.n + v] as u32
    }

    pub fn row(&self, u: usize) -> &[u16] {
        &self.data[u * self.n..(u + 1) * self.n]
    }

    pub fn diameter(&self) -> u32 {
        self.data.iter().copied().max().unwrap_or(0) as u32
    }

    /// Same canonical geodesic as [`geodesic`], read off the matrix.
    pub fn geodesic(&self, g: &Graph, a: usize, b: usize) -> Vec<usize> {
        let row_a = self.row(a);
        let mut path = Vec::with_capacity(row_a[b] as usize + 1);
        let mut v = b;
        path.push(v);
        while v != a {
            let want = row_a[v] - 1;
            v = g
                .neighbors(v)
                .iter()
                .copied()
                .find(|&u| row_a[u] == want)
                .expect("a neighbor one step closer exists on a connected graph");
            path.push(v);
        }
        path.reverse();
        path
    }
}

/// Writes the `# n=<count>` header and one `u v` line per edge.
pub fn write_edge_list<W: Write>(g: &Graph, mut out: W) -> std::io::Result<()> {
    writeln!(out, "# n={}", g.n())?;
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}")?;
    }
    Ok(())
}

pub fn read_edge_list<R: BufRead>(input: R) -> Result<Graph> {
    let mut n = None;
    let mut edges = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|e| Error::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(count) = comment.trim().strip_prefix("n=") {
                let count = count.trim().parse().map_err(|_| Error::Parse {
                    line: line_no,
                    message: format!("bad vertex count {count:?}"),
                })?;
                n = Some(count);
            }
            continue;
        }
        let mut parts = line.split_whitespace();
        let mut next = || -> Result<usize> {
            let tok = parts.next().ok_or(Error::Parse {
                line: line_no,
                message: "expected two vertices".into(),
            })?;
            tok.parse().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("bad vertex {tok:?}"),
            })
        };
        let u = next()?;
        let v = next()?;
        if parts.next().is_some() {
            return Err(Error::Parse {
                line: line_no,
                message: "trailing tokens".into(),
            });
        }
        edges.push((u, v));
    }
    let n = n.ok_or(Error::Parse {
        line: 0,
        message: "missing '# n=<count>' header".into(),
    })?;
    Graph::from_edges(n, &edges)
}
