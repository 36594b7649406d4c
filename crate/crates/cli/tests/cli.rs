use std::path::PathBuf;
use std::process::{Command, Output};

fn idpath(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_idpath")).args(args).env_remove("IDPATH_COLOR").output().unwrap()
}

fn corpus(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "corpus", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn valid_postulates_exit_zero() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(&dir, "ok.idp", "postulate A : Type\npostulate a : A\n");
    let o = idpath(&["check", &f]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("2 directive(s), 0 rejected\n"));
}

#[test]
fn mismatched_refl_exits_one_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(&dir, "bad.idp", "postulate A : Type\npostulate a : A\npostulate b : A\ncheck |- refl A a : Id A a b\n");
    let o = idpath(&["check", &f]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("4:1: reject"), "{out}");
    assert!(out.contains("expected Id A a b, found Id A a a"), "{out}");
}

#[test]
fn parse_and_io_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(&dir, "junk.idp", "postulate A : Type\ncheck |- refl (\n");
    assert_eq!(idpath(&["check", &f]).status.code(), Some(2));
    assert_eq!(idpath(&["check", "/nonexistent/file.idp"]).status.code(), Some(2));
    assert_eq!(idpath(&["derive", "nonsense", "--type", "A"]).status.code(), Some(2));
    assert_eq!(idpath(&["explain", "nonsense"]).status.code(), Some(2));
}

#[test]
fn records_are_line_delimited_json() {
    let o = idpath(&["check", &corpus("mutants/01_wrong_endpoint.idp"), "--format", "records"]);
    assert_eq!(o.status.code(), Some(1));
    let recs: Vec<serde_json::Value> =
        stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let bad: Vec<_> = recs.iter().filter(|r| r["verdict"] == "reject").collect();
    assert_eq!(bad.len(), 1);
    assert_eq!(bad[0]["rule"], "conversion");
    assert_eq!(bad[0]["position"], "root");
    assert!(recs.iter().all(|r| r.get("line").is_some() && r.get("directive").is_some()));
}

#[test]
fn reports_are_deterministic() {
    let a = idpath(&["check", &corpus("table1.idp"), "--format", "records"]);
    let b = idpath(&["check", &corpus("table1.idp"), "--format", "records"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn strong_sums_flag_enables_sums() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(&dir, "s.idp", "postulate A : Type\ncheck (x : A) |- pair x * : Sig (y : A) Unit\n");
    assert_eq!(idpath(&["check", &f]).status.code(), Some(1));
    assert_eq!(idpath(&["check", &f, "--strong-sums"]).status.code(), Some(0));
}

#[test]
fn derive_py_at_rank_two() {
    let o = idpath(&["derive", "py", "--context", "(x:A)(b:B x)"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.matches("-- confirmed:").count(), 3, "{out}");
}

#[test]
fn derive_groupoid_confirms_five_homotopies() {
    let o = idpath(&["derive", "groupoid", "--type", "A"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).matches("-- confirmed:").count(), 5);
}

#[test]
fn emitted_files_recheck() {
    let dir = tempfile::tempdir().unwrap();
    for (kind, flag, arg) in [
        ("sym", "--type", "A"),
        ("trans", "--type", "A"),
        ("pathobj", "--context", "(x : A)(b : B x)"),
        ("transport", "--context", "(x : A)(b : B x)"),
        ("fill", "--type", "A"),
    ] {
        let f = dir.path().join(format!("{kind}.idp")).to_string_lossy().into_owned();
        let o = idpath(&["derive", kind, flag, arg, "--emit", &f]);
        assert_eq!(o.status.code(), Some(0), "{kind}: {}", String::from_utf8_lossy(&o.stderr));
        let c = idpath(&["check", &f]);
        assert_eq!(c.status.code(), Some(0), "{kind}: {}", stdout(&c));
    }
}

#[test]
fn derive_with_signature_file() {
    let dir = tempfile::tempdir().unwrap();
    let sig = write(&dir, "sig.idp", "postulate A : Type\npostulate B (x : A) : Type\n");
    let o = idpath(&["derive", "transport", "--fibration", "(x : A) | (b : B x)", "--sig", &sig]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn explain_names_the_mechanism() {
    for (kind, phrase) in [("py", "rank induction"), ("sym", "J with trivial Δ"), ("transport", "Δ-parameter")] {
        let o = idpath(&["explain", kind]);
        assert_eq!(o.status.code(), Some(0));
        assert!(stdout(&o).contains(phrase), "{kind}");
    }
}
