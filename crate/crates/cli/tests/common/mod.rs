#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

use ida_core::codegen::check_validity;
use ida_core::{FieldWidth, GfMatrix};
use rand::Rng;

pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn ida<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    let out = Command::new(env!("CARGO_BIN_EXE_ida")).args(args).output().expect("spawn ida");
    Output {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("fixtures")
}

pub fn piece_paths(dir: &Path, stem: &str, indices: &[usize]) -> Vec<PathBuf> {
    indices.iter().map(|j| dir.join(format!("{stem}.p{j}.ida"))).collect()
}

pub fn random_matrix(rng: &mut impl Rng, width: FieldWidth, rows: usize, cols: usize) -> GfMatrix {
    let data = (0..rows * cols).map(|_| rng.gen_range(0..width.order()) as u16).collect();
    GfMatrix::from_vec(width, rows, cols, data).unwrap()
}

pub fn random_valid(rng: &mut impl Rng, width: FieldWidth, m: usize, n: usize) -> GfMatrix {
    loop {
        let g = random_matrix(rng, width, m, n);
        if check_validity(&g).unwrap().is_valid() {
            return g;
        }
    }
}

/// Valid generator whose block at (rows, cols) has column rank m' + n' - m.
pub fn plant_weak(
    rng: &mut impl Rng,
    width: FieldWidth,
    m: usize,
    n: usize,
    rows: &[usize],
    cols: &[usize],
) -> GfMatrix {
    let r = rows.len() + cols.len() - m;
    loop {
        let left = random_matrix(rng, width, rows.len(), r);
        let right = random_matrix(rng, width, r, cols.len());
        let block = left.matmul(&right).unwrap();
        let mut g = random_matrix(rng, width, m, n);
        for (bi, &i) in rows.iter().enumerate() {
            for (bj, &j) in cols.iter().enumerate() {
                g.set(i, j, block.get(bi, bj));
            }
        }
        if check_validity(&g).unwrap().is_valid() {
            return g;
        }
    }
}

/// Deterministic 4 KiB-style test content with readable regions.
pub fn sample_text(len: usize) -> Vec<u8> {
    let line = b"The quick brown fox jumps over the lazy dog. 0123456789\n";
    line.iter().cycle().take(len).copied().collect()
}

pub fn hex_list(values: &[u16]) -> String {
    values.iter().map(|v| format!("{v:x}")).collect::<Vec<_>>().join(",")
}
