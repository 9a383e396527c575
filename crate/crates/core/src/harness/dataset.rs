//! Multi-graph benchmark bundles (`DS_A.txt`, `DS_graph_indicator.txt`,
//! `DS_graph_labels.txt`) and single edge-list files.

use std::collections::HashMap;
use std::io::BufRead;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::graph::{preprocess, read_edge_list, EdgeStream};
use crate::harness::derive_seed;

#[derive(Debug, Clone, Default)]
pub struct Dataset {
    pub name: String,
    pub graphs: Vec<EdgeStream>,
    pub labels: Vec<i64>,
}

impl Dataset {
    pub fn new(name: impl Into<String>, graphs: Vec<EdgeStream>, labels: Vec<i64>) -> Result<Self> {
        if graphs.len() != labels.len() {
            return Err(Error::Dataset(format!(
                "{} graphs but {} labels",
                graphs.len(),
                labels.len()
            )));
        }
        Ok(Dataset {
            name: name.into(),
            graphs,
            labels,
        })
    }

    /// Builds a dataset from raw edge lists, preprocessing each graph with a
    /// seed derived from `seed` and its index.
    pub fn from_raw(
        name: impl Into<String>,
        raw: &[Vec<(u64, u64)>],
        labels: Vec<i64>,
        seed: u64,
    ) -> Result<Self> {
        let graphs = raw
            .iter()
            .enumerate()
            .map(|(i, edges)| preprocess(edges, derive_seed(seed, i as u64)))
            .collect();
        Dataset::new(name, graphs, labels)
    }

    /// One graph read from the edge-list text format, labelled 0.
    pub fn from_edge_list(path: &Path, seed: u64) -> Result<Self> {
        let raw = read_edge_list(path)?;
        let name = path
            .file_stem()
            .map_or_else(|| "graph".to_string(), |s| s.to_string_lossy().into_owned());
        Dataset::from_raw(name, &[raw], vec![0], seed)
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }
}

fn find_with_suffix(dir: &Path, suffix: &str) -> Result<(String, PathBuf)> {
    let entries = std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut hits = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|e| Error::io(dir, e))?;
        let name = entry.file_name().to_string_lossy().into_owned();
        if let Some(prefix) = name.strip_suffix(suffix) {
            hits.push((prefix.to_string(), entry.path()));
        }
    }
    hits.sort();
    match hits.len() {
        0 => Err(Error::Dataset(format!(
            "no *{suffix} file in {}",
            dir.display()
        ))),
        1 => Ok(hits.pop().unwrap()),
        _ => Err(Error::Dataset(format!(
            "several *{suffix} files in {}",
            dir.display()
        ))),
    }
}

fn read_column<T: std::str::FromStr>(path: &Path) -> Result<Vec<T>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (i, line) in std::io::BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        out.push(
            t.parse::<T>()
                .map_err(|_| Error::parse(path, i as u64 + 1, format!("invalid value {t:?}")))?,
        );
    }
    Ok(out)
}

/// Loads a benchmark bundle. Vertex and graph ids in the files are 1-based;
/// each graph is relabeled to local 0-based ids and preprocessed with a
/// seed derived from `seed` and its index. A graph's vertex count is the
/// number of indicator rows naming it.
pub fn load_benchmark_dataset(dir: &Path, seed: u64) -> Result<Dataset> {
    let (name, a_path) = find_with_suffix(dir, "_A.txt")?;
    let ind_path = dir.join(format!("{name}_graph_indicator.txt"));
    let lab_path = dir.join(format!("{name}_graph_labels.txt"));
    for p in [&ind_path, &lab_path] {
        if !p.exists() {
            return Err(Error::Dataset(format!("missing {}", p.display())));
        }
    }

    let indicator: Vec<u64> = read_column(&ind_path)?;
    let labels: Vec<i64> = read_column(&lab_path)?;
    let n_graphs = indicator.iter().copied().max().unwrap_or(0) as usize;
    if indicator.contains(&0) {
        return Err(Error::Dataset("graph indicator ids must be 1-based".into()));
    }
    if labels.len() != n_graphs {
        return Err(Error::Dataset(format!(
            "{} lists {} labels but the indicator names {} graphs",
            lab_path.display(),
            labels.len(),
            n_graphs
        )));
    }

    let file = std::fs::File::open(&a_path).map_err(|e| Error::io(&a_path, e))?;
    let mut raw: Vec<Vec<(u64, u64)>> = vec![Vec::new(); n_graphs];
    // Local ids by first appearance of the global id within its graph.
    let mut local: Vec<HashMap<u64, u64>> = vec![HashMap::new(); n_graphs];
    for (i, line) in std::io::BufReader::new(file).lines().enumerate() {
        let lineno = i as u64 + 1;
        let line = line.map_err(|e| Error::io(&a_path, e))?;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        let mut parts = t.split(',').map(str::trim);
        let mut endpoint = || -> Result<u64> {
            let tok = parts
                .next()
                .ok_or_else(|| Error::parse(&a_path, lineno, "expected `u, v`"))?;
            tok.parse::<u64>()
                .ok()
                .filter(|&x| x >= 1 && x as usize <= indicator.len())
                .ok_or_else(|| Error::parse(&a_path, lineno, format!("invalid vertex {tok:?}")))
        };
        let (a, b) = (endpoint()?, endpoint()?);
        let (ga, gb) = (indicator[a as usize - 1], indicator[b as usize - 1]);
        if ga != gb {
            return Err(Error::parse(
                &a_path,
                lineno,
                format!("edge ({a}, {b}) crosses graphs {ga} and {gb}"),
            ));
        }
        let g = ga as usize - 1;
        let map = &mut local[g];
        let mut id = |x: u64| {
            let next = map.len() as u64;
            *map.entry(x).or_insert(next)
        };
        let (la, lb) = (id(a), id(b));
        raw[g].push((la, lb));
    }

    // Isolated vertices are declared by the indicator only.
    let mut sizes = vec![0usize; n_graphs];
    for &g in &indicator {
        sizes[g as usize - 1] += 1;
    }
    let graphs = raw
        .iter()
        .zip(sizes)
        .enumerate()
        .map(|(i, (edges, n))| preprocess(edges, derive_seed(seed, i as u64)).with_n_hint(n))
        .collect();
    Dataset::new(name, graphs, labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_bundle(dir: &Path, a: &str, ind: &str, labels: &str) {
        std::fs::write(dir.join("DS_A.txt"), a).unwrap();
        std::fs::write(dir.join("DS_graph_indicator.txt"), ind).unwrap();
        std::fs::write(dir.join("DS_graph_labels.txt"), labels).unwrap();
    }

    const TWO_TRIANGLES: &str = "1, 2\n2, 1\n2, 3\n3, 1\n4, 5\n5, 6\n6, 4\n";

    #[test]
    fn indicator_declares_isolated_vertices() {
        let dir = tempfile::tempdir().unwrap();
        write_bundle(dir.path(), TWO_TRIANGLES, "1\n1\n1\n2\n2\n2\n2\n", "0\n1\n");
        let ds = load_benchmark_dataset(dir.path(), 0).unwrap();
        assert_eq!(ds.graphs[0].vertex_count(), 3);
        assert_eq!(ds.graphs[1].vertex_count(), 4);
    }

    #[test]
    fn loads_two_triangles() {
        let dir = tempfile::tempdir().unwrap();
        write_bundle(dir.path(), TWO_TRIANGLES, "1\n1\n1\n2\n2\n2\n", "0\n1\n");
        let ds = load_benchmark_dataset(dir.path(), 3).unwrap();
        assert_eq!(ds.name, "DS");
        assert_eq!(ds.len(), 2);
        assert_eq!(ds.labels, vec![0, 1]);
        for g in &ds.graphs {
            assert_eq!(g.len(), 3);
            assert_eq!(g.vertex_count(), 3);
            assert_eq!(g.max_label(), Some(2));
        }
    }

    #[test]
    fn label_count_mismatch() {
        let dir = tempfile::tempdir().unwrap();
        write_bundle(dir.path(), TWO_TRIANGLES, "1\n1\n1\n2\n2\n2\n", "0\n");
        let err = load_benchmark_dataset(dir.path(), 0).unwrap_err();
        assert!(matches!(err, Error::Dataset(_)), "{err}");
    }

    #[test]
    fn crossing_edge_rejected() {
        let dir = tempfile::tempdir().unwrap();
        write_bundle(dir.path(), "1, 4\n", "1\n1\n1\n2\n2\n2\n", "0\n1\n");
        let err = load_benchmark_dataset(dir.path(), 0).unwrap_err();
        assert!(err.to_string().contains("crosses"), "{err}");
    }

    #[test]
    fn missing_files() {
        let dir = tempfile::tempdir().unwrap();
        assert!(load_benchmark_dataset(dir.path(), 0).is_err());
        std::fs::write(dir.path().join("DS_A.txt"), "1, 2\n").unwrap();
        assert!(load_benchmark_dataset(dir.path(), 0).is_err());
    }
}
