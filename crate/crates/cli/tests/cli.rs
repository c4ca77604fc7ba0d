mod common;

use std::fs;

use common::{ida, piece_paths, sample_text};
use ida_core::subsets::combinations;
use tempfile::TempDir;

fn disperse(dir: &TempDir, data: &[u8], extra: &[&str]) -> common::Output {
    let input = dir.path().join("data.bin");
    fs::write(&input, data).unwrap();
    let mut args = vec!["disperse".to_string()];
    args.extend(extra.iter().map(|s| s.to_string()));
    args.extend(["--in".into(), input.display().to_string()]);
    args.extend(["--out".into(), dir.path().join("pieces").display().to_string()]);
    ida(args)
}

fn reconstruct_from(dir: &TempDir, indices: &[usize]) -> (common::Output, Vec<u8>) {
    let out = dir.path().join("restored.bin");
    let _ = fs::remove_file(&out);
    let mut args = vec!["reconstruct".into(), "--out".into(), out.display().to_string()];
    for p in piece_paths(&dir.path().join("pieces"), "data", indices) {
        args.push(p.display().to_string());
    }
    let res = ida(args);
    let data = fs::read(&out).unwrap_or_default();
    (res, data)
}

#[test]
fn disperse_writes_n_piece_files() {
    let dir = TempDir::new().unwrap();
    let res = disperse(&dir, &sample_text(1024), &["--m", "3", "--n", "5"]);
    assert_eq!(res.code, 0, "{}", res.stderr);
    assert!(res.stdout.contains("342 symbols"), "{}", res.stdout);
    assert!(res.stdout.contains("overhead ratio"));
    for p in piece_paths(&dir.path().join("pieces"), "data", &[0, 1, 2, 3, 4]) {
        let piece = ida_core::Piece::from_bytes(&fs::read(&p).unwrap()).unwrap();
        assert_eq!(piece.payload.len(), 342);
    }
}

#[test]
fn any_m_pieces_reconstruct() {
    let dir = TempDir::new().unwrap();
    let data = sample_text(1000);
    assert_eq!(disperse(&dir, &data, &["--m", "3", "--n", "5", "--field", "16"]).code, 0);
    for subset in combinations(5, 3) {
        let (res, restored) = reconstruct_from(&dir, &subset);
        assert_eq!(res.code, 0, "{}", res.stderr);
        assert_eq!(restored, data);
    }
}

#[test]
fn explicit_identity_column_is_rejected() {
    let dir = TempDir::new().unwrap();
    let res = disperse(&dir, b"abc", &["--m", "2", "--n", "3", "--code", "explicit", "--points", "1,1,1,0,2,1"]);
    assert_eq!(res.code, 2);
    assert!(res.stderr.contains("identity column"), "{}", res.stderr);
}

#[test]
fn vandermonde_dispersal_is_refused() {
    let dir = TempDir::new().unwrap();
    let res = disperse(&dir, b"abc", &["--m", "2", "--n", "3", "--code", "vandermonde"]);
    assert_eq!(res.code, 2, "{}", res.stdout);
}

#[test]
fn too_few_pieces_exit_2() {
    let dir = TempDir::new().unwrap();
    assert_eq!(disperse(&dir, &sample_text(300), &["--m", "3", "--n", "5"]).code, 0);
    let (res, _) = reconstruct_from(&dir, &[0, 4]);
    assert_eq!(res.code, 2);
    assert!(res.stderr.contains("insufficient pieces (have 2, need 3)"), "{}", res.stderr);
}

#[test]
fn corrupted_payload_exit_3() {
    let dir = TempDir::new().unwrap();
    assert_eq!(disperse(&dir, &sample_text(300), &["--m", "3", "--n", "5"]).code, 0);
    let path = &piece_paths(&dir.path().join("pieces"), "data", &[1])[0];
    let mut bytes = fs::read(path).unwrap();
    let mid = bytes.len() - 20;
    bytes[mid] ^= 0x40;
    fs::write(path, bytes).unwrap();
    let (res, _) = reconstruct_from(&dir, &[0, 1, 2]);
    assert_eq!(res.code, 3);
    assert!(res.stderr.contains("checksum mismatch in piece 1"), "{}", res.stderr);
}

#[test]
fn truncated_piece_exit_3() {
    let dir = TempDir::new().unwrap();
    assert_eq!(disperse(&dir, &sample_text(300), &["--m", "3", "--n", "5"]).code, 0);
    let path = &piece_paths(&dir.path().join("pieces"), "data", &[2])[0];
    let bytes = fs::read(path).unwrap();
    fs::write(path, &bytes[..bytes.len() / 2]).unwrap();
    let (res, _) = reconstruct_from(&dir, &[0, 1, 2]);
    assert_eq!(res.code, 3, "{}", res.stderr);
}

#[test]
fn mixed_dispersals_exit_2() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    assert_eq!(disperse(&a, &sample_text(300), &["--m", "2", "--n", "3"]).code, 0);
    assert_eq!(disperse(&b, &sample_text(301), &["--m", "2", "--n", "3"]).code, 0);
    let out = a.path().join("restored.bin");
    let res = ida([
        "reconstruct".to_string(),
        "--out".into(),
        out.display().to_string(),
        piece_paths(&a.path().join("pieces"), "data", &[0])[0].display().to_string(),
        piece_paths(&b.path().join("pieces"), "data", &[1])[0].display().to_string(),
    ]);
    assert_eq!(res.code, 2);
    assert!(res.stderr.contains("original_length"), "{}", res.stderr);
}

#[test]
fn analyze_cauchy_is_certified() {
    let res = ida(["analyze", "--spec", "cauchy:8:3:5:"]);
    assert_eq!(res.code, 0, "{}", res.stderr);
    let v: serde_json::Value = serde_json::from_str(&res.stdout).unwrap();
    assert_eq!(v["verdict"], "strong_certified");
    assert_eq!(v["certificate_scope"]["square_certificate"], "passed");
}

#[test]
fn analyze_weak_matrix_exit_1() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("g.txt");
    fs::write(&path, "8 2 3\n01 01 02\n01 02 00\n").unwrap();
    let res = ida(["analyze", "--matrix", path.to_str().unwrap()]);
    assert_eq!(res.code, 1, "{}", res.stderr);
    let v: serde_json::Value = serde_json::from_str(&res.stdout).unwrap();
    assert_eq!(v["verdict"], "weak");
    assert_eq!(v["witness"]["cols"], serde_json::json!([2]));
    assert_eq!(v["witness"]["recoverable_segments"], serde_json::json!([0]));

    let text = ida(["analyze", "--matrix", path.to_str().unwrap(), "--format", "text"]);
    assert_eq!(text.code, 1);
    assert!(text.stdout.contains("weak"), "{}", text.stdout);
    assert!(text.stdout.contains("[00]"), "{}", text.stdout);
}

#[test]
fn analyze_invalid_matrix_exit_2() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("g.txt");
    fs::write(&path, "8 2 3\n01 00 02\n00 01 00\n").unwrap();
    let res = ida(["analyze", "--matrix", path.to_str().unwrap()]);
    assert_eq!(res.code, 2);
    assert!(res.stderr.contains("condition 1"), "{}", res.stderr);
}

#[test]
fn analyze_requires_one_source() {
    assert_eq!(ida(["analyze"]).code, 2);
    assert_eq!(ida(["analyze", "--spec", "cauchy:8:3:5:", "--matrix", "x"]).code, 2);
}

#[test]
fn attack_on_strong_dispersal_recovers_nothing() {
    let dir = TempDir::new().unwrap();
    assert_eq!(disperse(&dir, &sample_text(500), &["--m", "3", "--n", "5"]).code, 0);
    let mut args = vec!["attack".to_string(), "--out".into(), dir.path().join("leak").display().to_string()];
    args.push(piece_paths(&dir.path().join("pieces"), "data", &[3])[0].display().to_string());
    let res = ida(args);
    assert_eq!(res.code, 0, "{}", res.stderr);
    assert!(res.stdout.contains("no segments recoverable"), "{}", res.stdout);
    assert!(!dir.path().join("leak").exists());
}

#[test]
fn attack_on_weak_dispersal_leaks_segment() {
    let dir = TempDir::new().unwrap();
    let data = sample_text(101);
    let res = disperse(&dir, &data, &["--m", "2", "--n", "3", "--code", "explicit", "--points", "1,1,2,1,2,0"]);
    assert_eq!(res.code, 0, "{}", res.stderr);
    let leak = dir.path().join("leak");
    let args = vec![
        "attack".to_string(),
        "--out".into(),
        leak.display().to_string(),
        piece_paths(&dir.path().join("pieces"), "data", &[2])[0].display().to_string(),
    ];
    let res = ida(args);
    assert_eq!(res.code, 0, "{}", res.stderr);
    assert!(res.stdout.contains("segment 0: file bytes [0, 51)"), "{}", res.stdout);
    assert_eq!(fs::read(leak.join("segment0.bin")).unwrap(), &data[..51]);
}

#[test]
fn attack_with_m_pieces_exit_2() {
    let dir = TempDir::new().unwrap();
    assert_eq!(disperse(&dir, &sample_text(50), &["--m", "2", "--n", "3"]).code, 0);
    let mut args = vec!["attack".to_string(), "--out".into(), dir.path().join("leak").display().to_string()];
    for p in piece_paths(&dir.path().join("pieces"), "data", &[0, 2]) {
        args.push(p.display().to_string());
    }
    let res = ida(args);
    assert_eq!(res.code, 2);
    assert!(res.stderr.contains("full reconstruction"), "{}", res.stderr);
}

#[test]
fn in_process_run_matches_binary() {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = ida_cli::run(["ida", "analyze", "--spec", "cauchy:8:3:5:"], &mut out, &mut err);
    assert_eq!(code, 0);
    assert_eq!(String::from_utf8(out).unwrap(), ida(["analyze", "--spec", "cauchy:8:3:5:"]).stdout);
}

#[test]
fn unknown_subcommand_exit_2() {
    assert_eq!(ida(["frobnicate"]).code, 2);
    assert_eq!(ida(["--help"]).code, 0);
}
