//! Writes a strategy as a directory of complex matrix files.

use std::fs;
use std::io;
use std::path::Path;

use rocn_core::clifford::format_complex_matrix;
use rocn_core::numerics::DenseMatrix;
use rocn_core::Strategy;
use serde::Serialize;

use crate::output::{hex_digest, InputInfo, VERSION};

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct FileEntry {
    name: String,
    sha256: String,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    kind: &'a str,
    input: &'a InputInfo,
    local_dimension: usize,
    state: FileEntry,
    alice: Vec<FileEntry>,
    bob: Vec<FileEntry>,
}

fn write_matrix(dir: &Path, name: String, m: &DenseMatrix) -> io::Result<FileEntry> {
    let text = format_complex_matrix(m);
    fs::write(dir.join(&name), &text)?;
    Ok(FileEntry { name, sha256: hex_digest(text.as_bytes()) })
}

/// Writes `state.txt` (a `d^2 x 1` column), `alice_<i>.txt`, `bob_<j>.txt`
/// and `manifest.json`.
pub fn write_strategy(dir: &Path, kind: &str, input: &InputInfo, s: &Strategy) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    let psi = DenseMatrix::from_vec(s.state().len(), 1, s.state().to_vec())
        .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e.to_string()))?;
    let state = write_matrix(dir, "state.txt".into(), &psi)?;
    let alice = s
        .alice()
        .iter()
        .enumerate()
        .map(|(i, a)| write_matrix(dir, format!("alice_{i}.txt"), a))
        .collect::<io::Result<_>>()?;
    let bob = s
        .bob()
        .iter()
        .enumerate()
        .map(|(j, b)| write_matrix(dir, format!("bob_{j}.txt"), b))
        .collect::<io::Result<_>>()?;
    let manifest = Manifest {
        tool: crate::output::TOOL,
        version: VERSION,
        kind,
        input,
        local_dimension: s.d(),
        state,
        alice,
        bob,
    };
    let mut text = serde_json::to_string_pretty(&manifest).expect("serializable manifest");
    text.push('\n');
    fs::write(dir.join("manifest.json"), text)
}
