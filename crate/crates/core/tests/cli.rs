use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lassotree"))
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn classify_star_with_all_cords_is_strong() {
    let dir = TempDir::new().unwrap();
    let tree = write(&dir, "t.nwk", "(a,b,c,d);\n");
    let cords = write(&dir, "l.txt", "a b\na c\na d\nb c\nb d\nc d\n");
    let out = run(&["classify", "--tree", path(&tree), "--cords", path(&cords), "--format", "jsonl", "--oracle"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    for flag in ["equidistant", "weak", "topological", "strong"] {
        assert_eq!(v[flag], true, "{flag}");
    }
    assert_eq!(v["agree"], true);
}

#[test]
fn classify_text_names_failing_vertices() {
    let dir = TempDir::new().unwrap();
    let tree = write(&dir, "t.nwk", "((a,b,c),d);");
    let cords = write(&dir, "l.txt", "# path over the pseudo-cherry\na b\nb c\na d\n");
    let out = run(&["classify", "--tree", path(&tree), "--cords", path(&cords)]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("weak:"), "{text}");
    assert!(text.contains("topological: no"), "{text}");
    assert!(text.contains("{a,b,c}"), "{text}");
}

#[test]
fn build_equidistant_on_binary_tree_gives_one_cord_per_interior_vertex() {
    let dir = TempDir::new().unwrap();
    let tree = write(&dir, "t.nwk", "((a,b),(c,d));");
    let out = run(&["build", "--tree", path(&tree), "--kind", "equidistant"]);
    assert_eq!(out.status.code(), Some(0));
    let lines: Vec<String> = stdout(&out).lines().map(str::to_string).collect();
    assert_eq!(lines.len(), 3, "{lines:?}");
    let cords = write(&dir, "l.txt", &stdout(&out));
    let check = run(&["classify", "--tree", path(&tree), "--cords", path(&cords), "--oracle"]);
    assert_eq!(check.status.code(), Some(0));
    assert!(stdout(&check).contains("equidistant: yes"), "{}", stdout(&check));
}

#[test]
fn build_bipartition_from_file() {
    let dir = TempDir::new().unwrap();
    let tree = write(&dir, "t.nwk", "((a,b),(c,d));");
    let side = write(&dir, "a.txt", "a c # one label from each cherry\n");
    let out = run(&["build", "--tree", path(&tree), "--kind", "bipartition", "--partition", path(&side)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout(&out), "a b\na d\nb c\nc d\n");
}

#[test]
fn enumerate_counts() {
    let out = run(&["enumerate", "--leaves", "a,b,c,d,e", "--count-only"]);
    assert_eq!(stdout(&out).trim(), "236");
    let out = run(&["enumerate", "--leaves", "a,b,c,d", "--binary", "--count-only"]);
    assert_eq!(stdout(&out).trim(), "15");
    let out = run(&["enumerate", "--leaves", "a,b,c"]);
    assert_eq!(stdout(&out).lines().count(), 4);
}

#[test]
fn witness_prints_two_isometric_trees_or_none() {
    let dir = TempDir::new().unwrap();
    let tree = write(&dir, "t.nwk", "((a,b),c);");
    let cords = write(&dir, "l.txt", "a b\n");
    let out = run(&["witness", "--tree", path(&tree), "--cords", path(&cords), "--kind", "topological"]);
    assert_eq!(out.status.code(), Some(0));
    let lines: Vec<&str> = std::str::from_utf8(&out.stdout).unwrap().lines().collect();
    assert_eq!(lines.len(), 2, "{lines:?}");
    assert!(lines.iter().all(|l| l.ends_with(';') && l.contains(':')));

    let full = write(&dir, "full.txt", "a b\na c\nb c\n");
    let out = run(&["witness", "--tree", path(&tree), "--cords", path(&full), "--kind", "topological"]);
    assert_eq!(stdout(&out).trim(), "none");
}

#[test]
fn distances_from_weighted_tree() {
    let dir = TempDir::new().unwrap();
    let tree = write(&dir, "t.nwk", "((a:1,b:1):2,c:3);");
    let cords = write(&dir, "l.txt", "a b\na c\n");
    let out = run(&["distances", "--tree", path(&tree), "--cords", path(&cords)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "a b 2\na c 6\n");
}

#[test]
fn graph_emits_dot() {
    let dir = TempDir::new().unwrap();
    let tree = write(&dir, "t.nwk", "((a,b),c);");
    let cords = write(&dir, "l.txt", "a b\n");
    let out = run(&["graph", "--tree", path(&tree), "--cords", path(&cords)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("graph"), "{}", stdout(&out));
}

#[test]
fn sample_is_seeded() {
    let a = run(&["sample", "--leaves", "a,b,c,d,e", "--count", "4", "--seed", "9"]);
    let b = run(&["sample", "--leaves", "a,b,c,d,e", "--count", "4", "--seed", "9"]);
    assert_eq!(stdout(&a), stdout(&b));
    assert_eq!(stdout(&a).lines().count(), 4);
}

#[test]
fn bad_input_exits_with_code_two() {
    let dir = TempDir::new().unwrap();
    let tree = write(&dir, "t.nwk", "((a,b),c");
    let cords = write(&dir, "l.txt", "a b\n");
    let out = run(&["classify", "--tree", path(&tree), "--cords", path(&cords)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));

    let good = write(&dir, "good.nwk", "((a,b),c);");
    let unknown = write(&dir, "u.txt", "a z\n");
    let out = run(&["classify", "--tree", path(&good), "--cords", path(&unknown)]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["distances", "--tree", path(&good), "--cords", path(&cords)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn tree_from_stdin() {
    use std::io::Write;
    let dir = TempDir::new().unwrap();
    let cords = write(&dir, "l.txt", "a b\na c\nb c\n");
    let mut child = bin()
        .args(["classify", "--tree", "-", "--cords", path(&cords), "--format", "jsonl"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"(a,b,c);").unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["strong"], true);
}
