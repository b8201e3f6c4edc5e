use std::path::PathBuf;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name).display().to_string()
}

fn scratch(name: &str, text: &str) -> String {
    let p = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

/// Runs `qform` in-process and returns (exit code, stdout, stderr).
fn qform(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("qform".to_string()).chain(args.iter().map(|s| s.to_string()));
    let code = qform_cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn mult_of_cusp() {
    let (code, out, err) = qform(&["mult", &data("cusp.rg1")]);
    assert_eq!((code, err.as_str()), (0, ""));
    assert_eq!(out, "mult v1 2\nmult v2 3\nmult v3 6\n");
}

#[test]
fn gram_of_double_cusp() {
    let (code, out, _) = qform(&["gram", &data("acampo1.rg1"), "--basis", &data("acampo1.chain1")]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().next(), Some("2 -1 0 0 0 1"));
    assert_eq!(out.lines().count(), 6);
}

#[test]
fn absolute_block() {
    let (code, out, _) = qform(&["gram", &data("sss_left.rg1"), "--basis", &data("sss_left.chain1"), "--absolute"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 5);
    assert_eq!(out.lines().nth(4), Some("0 0 -14 0 28"));
}

#[test]
fn broken_file_is_rejected_with_line() {
    let (code, out, err) = qform(&["validate", &data("broken.rg1")]);
    assert_eq!(code, 1);
    assert!(out.is_empty());
    assert!(err.contains("broken.rg1:6:"), "{err}");
}

#[test]
fn disconnected_file_is_rejected() {
    let f = scratch("two.rg1", "format rg1\nvertex a genus=0 euler=-1\nvertex b genus=0 euler=-1\narrow x a\n");
    let (code, _, err) = qform(&["invariants", &f]);
    assert_eq!(code, 1);
    assert!(err.contains("qform:"), "{err}");
}

#[test]
fn non_integral_multiplicities_exit_two() {
    let f = scratch("half.rg1", "format rg1\nvertex a genus=0 euler=-2\narrow x a\n");
    let (code, _, err) = qform(&["mult", &f]);
    assert_eq!(code, 2, "{err}");
}

#[test]
fn unknown_chain_id_points_at_column() {
    let f = scratch("bad.chain1", "format chain1\nchain s = a~b.0 - nowhere\n");
    let (code, _, err) = qform(&["gram", &data("acampo1.rg1"), "--basis", &f]);
    assert_eq!(code, 1);
    assert!(err.contains("bad.chain1:2:19"), "{err}");
}

#[test]
fn compare_with_itself() {
    for (g, b) in [("acampo2.rg1", "acampo2.chain1"), ("superisolated.nt1", "superisolated_nt.chain1")] {
        let (code, out, _) = qform(&["compare", &data(g), &data(g), "--basis", &data(b), "--basis", &data(b)]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().last(), Some("not_distinguished"));
        assert!(out.lines().all(|l| !l.ends_with("differs")));
    }
    for g in ["cusp.rg1", "decomp.rg1", "dbm_3_13.nt1"] {
        let (code, out, _) = qform(&["compare", &data(g), &data(g)]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().last(), Some("not_distinguished"));
    }
}

#[test]
fn compare_sss_pair() {
    let (code, out, _) = qform(&[
        "compare",
        &data("sss_left.rg1"),
        &data("sss_right.rg1"),
        "--basis",
        &data("sss_left.chain1"),
        "--basis",
        &data("sss_right.chain1"),
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("det_mod_squares 37 10 differs"), "{out}");
    assert!(out.contains("absolute_det_mod_squares 10101 2730 differs"), "{out}");
}

#[test]
fn output_is_deterministic() {
    let files: Vec<String> = ["acampo1.rg1", "acampo2.rg1", "decomp.rg1", "sss_left.rg1", "dbm_5_11.rg1"].iter().map(|f| data(f)).collect();
    for cmd in ["mult", "screw", "ssred", "charpoly", "invariants", "gram"] {
        let mut args = vec![cmd];
        args.extend(files.iter().map(String::as_str));
        let first = qform(&args);
        for _ in 0..3 {
            assert_eq!(qform(&args), first, "{cmd}");
        }
        assert_eq!(first.0, 0, "{cmd}: {}", first.2);
    }
}

#[test]
fn batch_keeps_input_order() {
    let (code, out, _) = qform(&["mult", &data("decomp.rg1"), &data("cusp.rg1")]);
    assert_eq!(code, 0);
    let headers: Vec<&str> = out.lines().filter(|l| l.starts_with("== ")).collect();
    assert_eq!(headers.len(), 2);
    assert!(headers[0].ends_with("decomp.rg1") && headers[1].ends_with("cusp.rg1"));
}

#[test]
fn json_report() {
    let (code, out, _) = qform(&["invariants", &data("acampo2.rg1")]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["screws"]["e"], 420);
    assert_eq!(v["screws"]["bamboos"].as_array().unwrap().len(), 5);
    assert_eq!(v["ntgraph"]["pieces"].as_array().unwrap().len(), 6);
    assert_eq!(v["form"]["rank"], 4);

    let (code, out, _) = qform(&["--format", "json", "gram", &data("sss_left.rg1"), "--basis", &data("sss_left.chain1")]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["det"], "73631181074944566528");
}

#[test]
fn ssred_writes_dot() {
    let dot = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("acampo1.dot");
    let (code, out, _) = qform(&["ssred", &data("acampo1.rg1"), "--dot", &dot.display().to_string()]);
    assert_eq!(code, 0);
    assert!(out.starts_with("format nt1\n"));
    let text = std::fs::read_to_string(dot).unwrap();
    assert!(text.starts_with("graph nielsen_thurston"));
    assert_eq!(text.matches("[id=\"a~b.").count(), 6);
}

#[test]
fn out_flag_writes_file() {
    let target = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("mult.txt");
    let (code, out, _) = qform(&["mult", &data("cusp.rg1"), "--out", &target.display().to_string()]);
    assert_eq!((code, out.as_str()), (0, ""));
    assert_eq!(std::fs::read_to_string(target).unwrap(), "mult v1 2\nmult v2 3\nmult v3 6\n");
}

#[test]
fn charpoly_expanded() {
    let (code, out, _) = qform(&["charpoly", &data("decomp.rg1"), "--expanded"]);
    assert_eq!(code, 0);
    assert!(out.contains("milnor 27\n"));
    assert!(out.contains("delta2_expanded t^2 + 2t + 1\n"), "{out}");
    assert!(out.contains("jordan_blocks 2\n"));
}
