//! On-disk cache of relation graphs and their spectra.
//!
//! Files live at `{dir}/q{q}_d{d}_rel{i}.graph` and `.spectrum`. A record is
//! reused only when its header matches the requested field (p, e, modulus,
//! ν), d and relation; anything else is rebuilt and overwritten.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use efsphere::geometry::OmegaSet;
use efsphere::records::{GraphRecord, SpectrumRecord};
use efsphere::scheme::{graph_build, RelationIndex, RelationTable};
use efsphere::spectra::{graph_spectrum, SolverChoice, Spectrum};
use efsphere::{FieldHeader, FieldSpec, GraphHeader, SchemeGraph};
use log::{debug, warn};
use serde::de::DeserializeOwned;
use serde::Serialize;

#[derive(Clone, Debug)]
pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    pub fn new(dir: Option<PathBuf>) -> Self {
        Cache { dir }
    }

    pub fn disabled() -> Self {
        Cache { dir: None }
    }

    fn path(&self, q: u32, d: usize, i: usize, ext: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|dir| dir.join(format!("q{q}_d{d}_rel{i}.{ext}")))
    }

    pub fn graph_path(&self, q: u32, d: usize, i: usize) -> Option<PathBuf> {
        self.path(q, d, i, "graph")
    }

    pub fn spectrum_path(&self, q: u32, d: usize, i: usize) -> Option<PathBuf> {
        self.path(q, d, i, "spectrum")
    }

    /// Cached graph for (field, d, i), or `None` when absent, corrupt or
    /// built for a different field presentation.
    pub fn load_graph(&self, field: &FieldHeader, d: usize, i: usize) -> Option<SchemeGraph> {
        let path = self.graph_path(field.q, d, i)?;
        let rec: GraphRecord = read_record(&path)?;
        if !rec.header.same_key(field, d, i) {
            warn!(
                "{}: header does not match the requested graph, rebuilding",
                path.display()
            );
            return None;
        }
        match rec.into_graph() {
            Ok(g) => Some(g),
            Err(e) => {
                warn!("{}: {e}, rebuilding", path.display());
                None
            }
        }
    }

    pub fn store_graph(&self, graph: &SchemeGraph) {
        let h = &graph.header;
        if let Some(path) = self.graph_path(h.q, h.d, h.i) {
            write_record(&path, &GraphRecord::from_graph(graph));
        }
    }

    /// Cached spectrum whose header equals `header` exactly.
    pub fn load_spectrum(&self, header: &GraphHeader) -> Option<Spectrum<f64>> {
        let path = self.spectrum_path(header.q, header.d, header.i)?;
        let rec: SpectrumRecord = read_record(&path)?;
        if rec.header != *header {
            warn!(
                "{}: header does not match the requested graph, recomputing",
                path.display()
            );
            return None;
        }
        match rec.spectrum() {
            Ok(s) => Some(s),
            Err(e) => {
                warn!("{}: {e}, recomputing", path.display());
                None
            }
        }
    }

    pub fn store_spectrum(&self, header: &GraphHeader, spectrum: &Spectrum<f64>) {
        if let Some(path) = self.spectrum_path(header.q, header.d, header.i) {
            write_record(&path, &SpectrumRecord::new(header, spectrum));
        }
    }

    /// Graph (Ω, R_i), from the cache or built from `omega`.
    pub fn graph(&self, field: &FieldSpec, omega: &OmegaSet, i: usize) -> efsphere::Result<SchemeGraph> {
        let rel = RelationIndex::new(i, field.q())?;
        if let Some(g) = self.load_graph(&field.header(), omega.d, i) {
            return Ok(g);
        }
        let g = graph_build(field, omega, rel)?;
        self.store_graph(&g);
        Ok(g)
    }

    /// All relation graphs in relation order. A single miss rebuilds the
    /// whole relation table, which is cheaper than per-relation builds.
    pub fn graphs(&self, field: &FieldSpec, omega: &OmegaSet) -> Vec<SchemeGraph> {
        let header = field.header();
        let relations = efsphere::scheme::relation_count(field.q());
        let cached: Vec<_> = (1..=relations).map(|i| self.load_graph(&header, omega.d, i)).collect();
        if cached.iter().all(Option::is_some) {
            return cached.into_iter().flatten().collect();
        }
        let built = RelationTable::build(field, omega).graphs(field, omega.d);
        for (g, c) in built.iter().zip(&cached) {
            if c.is_none() {
                self.store_graph(g);
            }
        }
        built
    }

    pub fn spectrum(&self, graph: &SchemeGraph) -> efsphere::Result<Spectrum<f64>> {
        if let Some(s) = self.load_spectrum(&graph.header) {
            return Ok(s);
        }
        let s = graph_spectrum::<f64>(graph, SolverChoice::Auto)?;
        self.store_spectrum(&graph.header, &s);
        Ok(s)
    }

    pub fn spectra(&self, graphs: &[SchemeGraph]) -> efsphere::Result<Vec<Spectrum<f64>>> {
        graphs.iter().map(|g| self.spectrum(g)).collect()
    }
}

fn read_record<T: DeserializeOwned>(path: &Path) -> Option<T> {
    let bytes = match fs::read(path) {
        Ok(b) => b,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            debug!("{}: not cached", path.display());
            return None;
        }
        Err(e) => {
            warn!("{}: {e}, rebuilding", path.display());
            return None;
        }
    };
    match serde_json::from_slice(&bytes) {
        Ok(r) => Some(r),
        Err(e) => {
            warn!("{}: corrupt cache file ({e}), rebuilding", path.display());
            None
        }
    }
}

/// Writes through a temporary file so a crash never leaves a truncated
/// record behind. Failures only cost a future rebuild, so they are logged.
fn write_record<T: Serialize>(path: &Path, record: &T) {
    let result = (|| -> std::io::Result<()> {
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        let tmp = path.with_extension("tmp");
        let mut f = fs::File::create(&tmp)?;
        serde_json::to_writer(&mut f, record)?;
        f.write_all(b"\n")?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    match result {
        Ok(()) => debug!("cached {}", path.display()),
        Err(e) => warn!("could not write cache file {}: {e}", path.display()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use efsphere::geometry::omega_build;

    fn setup() -> (tempfile::TempDir, Cache, FieldSpec, OmegaSet) {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(Some(dir.path().join("nested").join("cache")));
        let field = FieldSpec::with_order(5).unwrap();
        let omega = omega_build(&field, 3).unwrap();
        (dir, cache, field, omega)
    }

    #[test]
    fn store_then_load_round_trips() {
        let (_dir, cache, field, omega) = setup();
        let g = cache.graph(&field, &omega, 2).unwrap();
        assert!(cache.graph_path(5, 3, 2).unwrap().exists());
        assert_eq!(cache.load_graph(&field.header(), 3, 2).unwrap(), g);

        let s = cache.spectrum(&g).unwrap();
        let back = cache.load_spectrum(&g.header).unwrap();
        assert_eq!(back.eigenvalues, s.eigenvalues);
        assert_eq!(back.residual, s.residual);
    }

    #[test]
    fn mismatched_generator_is_not_reused() {
        let (_dir, cache, field, omega) = setup();
        let g = cache.graph(&field, &omega, 1).unwrap();
        let mut other = field.header();
        other.nu = vec![3];
        assert!(cache.load_graph(&other, 3, 1).is_none());

        let mut rec = GraphRecord::from_graph(&g);
        rec.header.nu = vec![3];
        write_record(&cache.graph_path(5, 3, 1).unwrap(), &rec);
        assert!(cache.load_graph(&field.header(), 3, 1).is_none());
        assert_eq!(cache.graph(&field, &omega, 1).unwrap(), g);
    }

    #[test]
    fn corrupt_file_is_rebuilt() {
        let (_dir, cache, field, omega) = setup();
        let g = cache.graph(&field, &omega, 3).unwrap();
        let path = cache.graph_path(5, 3, 3).unwrap();
        fs::write(&path, b"{\"header\": tru").unwrap();
        assert!(cache.load_graph(&field.header(), 3, 3).is_none());
        assert_eq!(cache.graph(&field, &omega, 3).unwrap(), g);
        assert!(cache.load_graph(&field.header(), 3, 3).is_some());
    }

    #[test]
    fn batch_and_single_builds_agree() {
        let (_dir, cache, field, omega) = setup();
        let all = cache.graphs(&field, &omega);
        let fresh = Cache::disabled();
        for (i, g) in all.iter().enumerate() {
            assert_eq!(&fresh.graph(&field, &omega, i + 1).unwrap(), g);
        }
        assert_eq!(cache.graphs(&field, &omega), all);
    }
}
