//! Weighted undirected simple graphs and their Laplacians.
//!
//! Vertices are 0-based inside the library. Edge-list files use 1-based
//! vertex ids, which is the convention of most published graph datasets.

use std::collections::{BTreeMap, VecDeque};
use std::fs;
use std::path::Path;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which Laplacian the spectral basis is built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LaplacianKind {
    /// `L = D - W`.
    Unnormalized,
    /// `L = I - D^{-1/2} W D^{-1/2}`, spectrum in `[0, 2]`.
    #[serde(alias = "normalized")]
    SymmetricNormalized,
}

impl std::fmt::Display for LaplacianKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LaplacianKind::Unnormalized => f.write_str("unnormalized"),
            LaplacianKind::SymmetricNormalized => f.write_str("symmetric-normalized"),
        }
    }
}

/// A connected, weighted, undirected simple graph.
///
/// The weight matrix is stored as sorted adjacency lists; every edge appears
/// in both endpoint lists with the same weight.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    adjacency: Vec<Vec<(usize, f64)>>,
    coordinates: Option<Vec<[f64; 2]>>,
}

/// Options for [`load_graph`].
#[derive(Debug, Clone, Default)]
pub struct LoadOptions {
    /// Optional sidecar file with lines `i x y` (1-based vertex ids).
    pub coordinates: Option<std::path::PathBuf>,
    /// Keep only the largest connected component instead of failing.
    pub largest_component: bool,
}

impl Graph {
    /// Builds a graph from 0-based `(i, j, w)` triples. Each undirected edge
    /// may be listed once or in both orientations with the same weight.
    /// Zero-weight entries are accepted and do not create an edge.
    pub fn from_edges(num_vertices: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let graph = assemble(num_vertices, edges)?;
        let components = graph.components();
        let count = components.iter().copied().max().map_or(0, |c| c + 1);
        if count > 1 {
            return Err(Error::Disconnected { components: count });
        }
        Ok(graph)
    }

    pub fn num_vertices(&self) -> usize {
        self.adjacency.len()
    }

    pub fn num_edges(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Neighbours of `v` with edge weights, sorted by neighbour index.
    pub fn neighbors(&self, v: usize) -> &[(usize, f64)] {
        &self.adjacency[v]
    }

    /// Weight `W[i][j]`, zero when the vertices are not adjacent.
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.adjacency[i]
            .binary_search_by_key(&j, |&(k, _)| k)
            .map_or(0.0, |pos| self.adjacency[i][pos].1)
    }

    pub fn degrees(&self) -> Vec<f64> {
        self.adjacency
            .iter()
            .map(|row| row.iter().map(|&(_, w)| w).sum())
            .collect()
    }

    pub fn coordinates(&self) -> Option<&[[f64; 2]]> {
        self.coordinates.as_deref()
    }

    pub fn with_coordinates(mut self, coordinates: Vec<[f64; 2]>) -> Result<Self> {
        if coordinates.len() != self.num_vertices() {
            return Err(Error::DimensionMismatch {
                expected: self.num_vertices(),
                actual: coordinates.len(),
            });
        }
        self.coordinates = Some(coordinates);
        Ok(self)
    }

    /// Dense weight matrix `W`.
    pub fn weight_matrix(&self) -> DMatrix<f64> {
        let n = self.num_vertices();
        let mut w = DMatrix::zeros(n, n);
        for (i, row) in self.adjacency.iter().enumerate() {
            for &(j, weight) in row {
                w[(i, j)] = weight;
            }
        }
        w
    }

    /// Dense Laplacian of the requested kind, exactly symmetric.
    pub fn laplacian(&self, kind: LaplacianKind) -> Result<DMatrix<f64>> {
        let n = self.num_vertices();
        let degrees = self.degrees();
        let mut l = DMatrix::zeros(n, n);
        match kind {
            LaplacianKind::Unnormalized => {
                for (i, row) in self.adjacency.iter().enumerate() {
                    l[(i, i)] = degrees[i];
                    for &(j, w) in row {
                        l[(i, j)] = -w;
                    }
                }
            }
            LaplacianKind::SymmetricNormalized => {
                if let Some(v) = degrees.iter().position(|&d| d <= 0.0) {
                    return Err(Error::ZeroDegree(v));
                }
                let inv_sqrt: Vec<f64> = degrees.iter().map(|d| 1.0 / d.sqrt()).collect();
                for (i, row) in self.adjacency.iter().enumerate() {
                    l[(i, i)] = 1.0;
                    for &(j, w) in row {
                        l[(i, j)] = -w * inv_sqrt[i] * inv_sqrt[j];
                    }
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let avg = 0.5 * (l[(i, j)] + l[(j, i)]);
                l[(i, j)] = avg;
                l[(j, i)] = avg;
            }
        }
        Ok(l)
    }

    /// Component label per vertex; labels are assigned in order of the
    /// lowest vertex of each component.
    pub fn components(&self) -> Vec<usize> {
        let n = self.num_vertices();
        let mut label = vec![usize::MAX; n];
        let mut next = 0;
        let mut queue = VecDeque::new();
        for start in 0..n {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = next;
            queue.push_back(start);
            while let Some(v) = queue.pop_front() {
                for &(u, _) in &self.adjacency[v] {
                    if label[u] == usize::MAX {
                        label[u] = next;
                        queue.push_back(u);
                    }
                }
            }
            next += 1;
        }
        label
    }

    /// The largest connected component (lowest-labelled on ties), with the
    /// original index of every retained vertex.
    pub fn largest_component(&self) -> (Graph, Vec<usize>) {
        let labels = self.components();
        let count = labels.iter().copied().max().map_or(0, |c| c + 1);
        let mut sizes = vec![0usize; count];
        for &c in &labels {
            sizes[c] += 1;
        }
        let best = (0..count).fold(0, |best, c| if sizes[c] > sizes[best] { c } else { best });
        let kept: Vec<usize> = (0..labels.len()).filter(|&v| labels[v] == best).collect();
        let mut new_index = vec![usize::MAX; labels.len()];
        for (new, &old) in kept.iter().enumerate() {
            new_index[old] = new;
        }
        let adjacency = kept
            .iter()
            .map(|&old| {
                self.adjacency[old]
                    .iter()
                    .map(|&(u, w)| (new_index[u], w))
                    .collect()
            })
            .collect();
        let coordinates = self
            .coordinates
            .as_ref()
            .map(|c| kept.iter().map(|&old| c[old]).collect());
        (
            Graph {
                adjacency,
                coordinates,
            },
            kept,
        )
    }
}

fn assemble(num_vertices: usize, edges: &[(usize, usize, f64)]) -> Result<Graph> {
    if num_vertices == 0 {
        return Err(Error::InvalidSize(0));
    }
    let mut weights: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for &(i, j, w) in edges {
        for v in [i, j] {
            if v >= num_vertices {
                return Err(Error::VertexOutOfRange {
                    vertex: v,
                    len: num_vertices,
                });
            }
        }
        if i == j {
            return Err(Error::SelfLoop(i));
        }
        if !w.is_finite() || w < 0.0 {
            return Err(Error::NegativeWeight(i, j, w));
        }
        let key = (i.min(j), i.max(j));
        match weights.get(&key) {
            Some(&prev) if prev != w => {
                return Err(Error::DuplicateEdgeConflict(key.0, key.1, prev, w));
            }
            _ => {
                weights.insert(key, w);
            }
        }
    }
    let mut adjacency = vec![Vec::new(); num_vertices];
    for (&(i, j), &w) in &weights {
        if w > 0.0 {
            adjacency[i].push((j, w));
            adjacency[j].push((i, w));
        }
    }
    for row in &mut adjacency {
        row.sort_by_key(|&(k, _)| k);
    }
    Ok(Graph {
        adjacency,
        coordinates: None,
    })
}

/// Unit-weight path `0 - 1 - ... - (n-1)`.
pub fn path_graph(n: usize) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InvalidSize(n));
    }
    let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1, 1.0)).collect();
    Graph::from_edges(n, &edges)
}

/// Unit-weight star with vertex 0 at the centre. Its unnormalized Laplacian
/// has eigenvalue 1 with multiplicity `n - 2`.
pub fn star_graph(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidSize(n));
    }
    let edges: Vec<_> = (1..n).map(|i| (0, i, 1.0)).collect();
    Graph::from_edges(n, &edges)
}

/// Seeded random connected graph with irregular degrees and weights.
///
/// A random recursive tree guarantees connectivity; `extra_edges` further
/// distinct edges are then sampled uniformly. Weights are uniform in
/// `[0.5, 1.5)`.
pub fn random_connected_graph(n: usize, extra_edges: usize, seed: u64) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InvalidSize(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut weights: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for v in 1..n {
        let u = rng.random_range(0..v);
        weights.insert((u, v), rng.random_range(0.5..1.5));
    }
    let max_edges = n * (n - 1) / 2;
    let target = (weights.len() + extra_edges).min(max_edges);
    while weights.len() < target {
        let a = rng.random_range(0..n);
        let b = rng.random_range(0..n);
        if a == b {
            continue;
        }
        let key = (a.min(b), a.max(b));
        weights
            .entry(key)
            .or_insert_with(|| rng.random_range(0.5..1.5));
    }
    let edges: Vec<_> = weights.into_iter().map(|((i, j), w)| (i, j, w)).collect();
    Graph::from_edges(n, &edges)
}

/// Loads a whitespace-separated edge list.
///
/// Lines are `i j [w]` with 1-based vertex ids and weight defaulting to 1.
/// An optional first data line holding a single integer fixes the vertex
/// count; otherwise it is the largest id seen. Blank lines and lines starting
/// with `#` or `%` are skipped.
pub fn load_graph(path: &Path, options: &LoadOptions) -> Result<Graph> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let parse_err = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };

    let mut declared: Option<usize> = None;
    let mut max_id = 0usize;
    let mut edges = Vec::new();
    let mut seen_data = false;
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('%') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if !seen_data && fields.len() == 1 {
            let n = fields[0]
                .parse::<usize>()
                .map_err(|e| parse_err(lineno, format!("bad vertex count: {e}")))?;
            declared = Some(n);
            seen_data = true;
            continue;
        }
        seen_data = true;
        if !(2..=3).contains(&fields.len()) {
            return Err(parse_err(
                lineno,
                format!("expected `i j [w]`, found {} fields", fields.len()),
            ));
        }
        let mut id = |s: &str| -> Result<usize> {
            let v = s
                .parse::<usize>()
                .map_err(|e| parse_err(lineno, format!("bad vertex id `{s}`: {e}")))?;
            if v == 0 {
                return Err(parse_err(lineno, "vertex ids are 1-based".into()));
            }
            max_id = max_id.max(v);
            Ok(v - 1)
        };
        let i = id(fields[0])?;
        let j = id(fields[1])?;
        let w = match fields.get(2) {
            Some(s) => s
                .parse::<f64>()
                .map_err(|e| parse_err(lineno, format!("bad weight `{s}`: {e}")))?,
            None => 1.0,
        };
        edges.push((i, j, w));
    }

    let n = match declared {
        Some(n) if n < max_id => {
            return Err(parse_err(
                1,
                format!("declared {n} vertices but edge list references vertex {max_id}"),
            ))
        }
        Some(n) => n,
        None => max_id,
    };
    let mut graph = assemble(n, &edges)?;
    if let Some(coord_path) = &options.coordinates {
        let coords = load_coordinates(coord_path, n)?;
        graph.coordinates = Some(coords);
    }

    let labels = graph.components();
    let count = labels.iter().copied().max().map_or(0, |c| c + 1);
    if count > 1 {
        if !options.largest_component {
            return Err(Error::Disconnected { components: count });
        }
        let (largest, kept) = graph.largest_component();
        log::info!(
            "kept largest component: {} of {} vertices",
            kept.len(),
            labels.len()
        );
        graph = largest;
    }
    if graph.num_vertices() < 2 {
        return Err(Error::InvalidSize(graph.num_vertices()));
    }
    Ok(graph)
}

fn load_coordinates(path: &Path, n: usize) -> Result<Vec<[f64; 2]>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut coords = vec![[f64::NAN; 2]; n];
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('%') {
            continue;
        }
        let err = |message: String| Error::Parse {
            path: path.to_path_buf(),
            line: idx + 1,
            message,
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(err("expected `i x y`".into()));
        }
        let v: usize = fields[0]
            .parse()
            .map_err(|e| err(format!("bad vertex id: {e}")))?;
        if v == 0 || v > n {
            return Err(err(format!("vertex {v} out of range 1..={n}")));
        }
        let x: f64 = fields[1].parse().map_err(|e| err(format!("bad x: {e}")))?;
        let y: f64 = fields[2].parse().map_err(|e| err(format!("bad y: {e}")))?;
        coords[v - 1] = [x, y];
    }
    Ok(coords)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn single_edge() {
        let g = Graph::from_edges(2, &[(0, 1, 1.0)]).unwrap();
        assert_eq!(
            g.weight_matrix(),
            DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0])
        );
        assert_eq!(g.degrees(), vec![1.0, 1.0]);
    }

    #[test]
    fn isolated_vertex_is_disconnected() {
        let err = Graph::from_edges(3, &[(0, 1, 1.0)]).unwrap_err();
        assert!(matches!(err, Error::Disconnected { components: 2 }));
    }

    #[test]
    fn weighted_degrees() {
        let g = Graph::from_edges(3, &[(0, 1, 2.0), (1, 2, 3.0)]).unwrap();
        assert_eq!(g.degrees(), vec![2.0, 5.0, 3.0]);
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(
            Graph::from_edges(2, &[(0, 1, -1.0)]),
            Err(Error::NegativeWeight(0, 1, _))
        ));
        assert!(matches!(
            Graph::from_edges(2, &[(1, 1, 1.0)]),
            Err(Error::SelfLoop(1))
        ));
        assert!(matches!(
            Graph::from_edges(2, &[(0, 1, 1.0), (1, 0, 2.0)]),
            Err(Error::DuplicateEdgeConflict(0, 1, _, _))
        ));
        // Repeating an edge with the same weight is fine.
        assert!(Graph::from_edges(2, &[(0, 1, 1.0), (1, 0, 1.0)]).is_ok());
        assert!(matches!(path_graph(1), Err(Error::InvalidSize(1))));
    }

    #[test]
    fn path_degrees() {
        let g = path_graph(50).unwrap();
        assert_eq!(g.num_edges(), 49);
        let d = g.degrees();
        assert_eq!(d[0], 1.0);
        assert_eq!(d[49], 1.0);
        assert!(d[1..49].iter().all(|&x| x == 2.0));
    }

    #[test]
    fn laplacians_of_small_paths() {
        let g2 = path_graph(2).unwrap();
        let expected = DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 1.0]);
        assert_eq!(g2.laplacian(LaplacianKind::Unnormalized).unwrap(), expected);
        assert_eq!(
            g2.laplacian(LaplacianKind::SymmetricNormalized).unwrap(),
            expected
        );

        let g3 = path_graph(3).unwrap();
        let l = g3.laplacian(LaplacianKind::Unnormalized).unwrap();
        let expected =
            DMatrix::from_row_slice(3, 3, &[1.0, -1.0, 0.0, -1.0, 2.0, -1.0, 0.0, -1.0, 1.0]);
        assert_eq!(l, expected);
    }

    #[test]
    fn laplacian_action_matches_edge_differences() {
        // (Lf)(i) = sum_{j~i} W_ij (f(i) - f(j))
        let g = random_connected_graph(12, 10, 3).unwrap();
        let l = g.laplacian(LaplacianKind::Unnormalized).unwrap();
        let f: Vec<f64> = (0..12).map(|i| ((i * 7) % 5) as f64 - 1.5).collect();
        for i in 0..12 {
            let via_matrix: f64 = (0..12).map(|j| l[(i, j)] * f[j]).sum();
            let via_edges: f64 = g.neighbors(i).iter().map(|&(j, w)| w * (f[i] - f[j])).sum();
            assert!((via_matrix - via_edges).abs() < 1e-12);
        }
    }

    #[test]
    fn largest_component_extraction() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.edges");
        let mut file = fs::File::create(&path).unwrap();
        writeln!(file, "6\n1 2\n2 3 2.5\n4 5").unwrap();
        drop(file);
        let err = load_graph(&path, &LoadOptions::default()).unwrap_err();
        assert!(matches!(err, Error::Disconnected { components: 3 }));
        let g = load_graph(
            &path,
            &LoadOptions {
                largest_component: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(g.num_vertices(), 3);
        assert_eq!(g.weight(1, 2), 2.5);
    }

    #[test]
    fn load_simple_and_self_loop() {
        let dir = tempfile::tempdir().unwrap();
        let ok = dir.path().join("ok.edges");
        fs::write(&ok, "2\n1 2 1").unwrap();
        let g = load_graph(&ok, &LoadOptions::default()).unwrap();
        assert_eq!(g.num_vertices(), 2);
        assert_eq!(g.weight(0, 1), 1.0);

        let looped = dir.path().join("loop.edges");
        fs::write(&looped, "1 1 1").unwrap();
        assert!(matches!(
            load_graph(&looped, &LoadOptions::default()),
            Err(Error::SelfLoop(0))
        ));

        let bad = dir.path().join("bad.edges");
        fs::write(&bad, "1 2\n2 x\n").unwrap();
        match load_graph(&bad, &LoadOptions::default()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn coordinates_sidecar() {
        let dir = tempfile::tempdir().unwrap();
        let edges = dir.path().join("g.edges");
        let coords = dir.path().join("g.xy");
        fs::write(&edges, "1 2\n2 3\n").unwrap();
        fs::write(&coords, "1 0.0 0.0\n2 1.0 0.5\n3 2.0 1.0\n").unwrap();
        let g = load_graph(
            &edges,
            &LoadOptions {
                coordinates: Some(coords),
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(g.coordinates().unwrap()[1], [1.0, 0.5]);
    }

    #[test]
    fn random_graph_is_seeded() {
        let a = random_connected_graph(40, 30, 7).unwrap();
        let b = random_connected_graph(40, 30, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.num_edges(), 39 + 30);
    }
}
