use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn braid(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_braid"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn braid");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn scratch(name: &str, src: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("braid-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    fs::write(&p, src).unwrap();
    p
}

const POINT: &str = r#"
let meth pointinit(args) = x := hd(args); y := nth(args, 1); send(next, "init", drop(args, 2))
let point = send(object, "subclass", ({}, ["x", "y"], "init" |-> pointinit));;
let p = send(point, "new", [10, 100]);;
getallenv(p) @ "x";;
getallenv(p) @ "y"
"#;

#[test]
fn runs_the_point_program() {
    let f = scratch("point.gb", POINT);
    let o = braid(&["run", "--braid", "as", f.to_str().unwrap()], "");
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o), "10\n100\n");
}

#[test]
fn empty_program_prints_nothing() {
    let o = braid(&["run", "-"], "");
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "");
    assert_eq!(stderr(&o), "");
}

#[test]
fn desugar_prints_the_kernel_form() {
    let o = braid(&["desugar", "-"], "let meth m(p) = p + x\n");
    assert!(o.status.success(), "{}", stderr(&o));
    let golden = fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../core/tests/golden/desugar/meth.kernel"
    ))
    .unwrap();
    assert_eq!(stdout(&o).trim_end(), golden.trim_end());
}

#[test]
fn exit_codes() {
    let o = braid(&["run", "-"], "1 +");
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("parse error"), "{}", stderr(&o));

    let o = braid(&["run", "-"], "1;; error(\"boom\");; 3");
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "1\n");
    assert_eq!(stderr(&o).trim_end(), "runtime error: boom");

    let o = braid(&["run", "--braid", "asmi", "-"], "send(send(class, \"new\", [[object], [], {}]), \"zz\", 1)");
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("not understood"));

    let o = braid(&["run", "/definitely/not/here.gb"], "");
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("/definitely/not/here.gb"));

    let o = braid(&["run", "--braid", "smalltalk", "-"], "");
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn trace_lines_precede_the_value() {
    let src = "let k = send(class, \"new\", [[object], [], \"m\" |-> (meth u . 7)]);;\n\
               let o = send(k, \"new\", []);;\n\
               send(o, \"m\", ())";
    let o = braid(&["run", "--braid", "asmirs", "--trace-send", "-"], src);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.last(), Some(&"7"));
    assert!(lines[..lines.len() - 1].iter().all(|l| l.starts_with("#send recv=")));
    assert!(lines.iter().any(|l| l.contains("sel=m via=classsend")));

    let o = braid(&["run", "--braid", "asmirs", "-"], src);
    assert_eq!(stdout(&o), "7\n");
}

#[test]
fn depth_limit_is_configurable() {
    let src = "let f n = if n = 0 then 0 else 1 + f(n - 1);; f(50)";
    assert_eq!(stdout(&braid(&["run", "-"], src)), "50\n");
    let o = braid(&["run", "--depth", "20", "-"], src);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("depth"));
}

#[test]
fn repl_commands() {
    let o = braid(&["repl", "--braid", "asmi"], ":env\n:kernel \\x.x\n1 +\n2\nfoo(\n:quit\n3\n");
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("asc asm asnew class classinit classnew cm objdnu object objgc objinit om"), "{out}");
    assert!(out.contains("\\x.x"), "{out}");
    assert!(out.contains("3\n"), "{out}");
    // `:quit` continues the unfinished `foo(`, so it is a parse error and
    // the session goes on to print 3.
    assert!(stderr(&o).contains("parse error"), "{}", stderr(&o));
    let o = braid(&["repl"], "nope\n:q\n");
    assert!(stderr(&o).contains("runtime error"), "{}", stderr(&o));
    assert!(o.status.success());
}
