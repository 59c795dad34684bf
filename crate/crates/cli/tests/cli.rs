use std::io::Write;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_varcalc")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["--corpus", "kdv1", "check", "--trials", "2"]).status.code(), Some(0));
    assert_eq!(run(&["--corpus", "kdv2", "check", "--trials", "2"]).status.code(), Some(2));
    let bad = run(&["canon", "int u +"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("error:"));
    assert_eq!(run(&["--corpus", "nope", "check"]).status.code(), Some(1));
}

#[test]
fn check_json_is_stable_and_complete() {
    let args = ["--corpus", "kdv2", "--format", "json", "check", "--trials", "3", "--seed", "5"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(stdout(&a), stdout(&b));
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["structure"], "kdv2");
    assert_eq!(v["hamiltonian"], false);
    assert_eq!(v["obstruction"], "int 1/3*theta*xi∧xi_x∧xi_xxx");
    assert_eq!(v["standard_quotient"]["hamiltonian"], true);
    assert_eq!(v["jacobi"]["agreed"], 3);
    assert!(v.get("timing_ms").is_none());
}

#[test]
fn sequential_and_parallel_agree() {
    let par = run(&["--format", "json", "corpus", "run", "kdv1", "canonical2"]);
    let seq = run(&["--format", "json", "--sequential", "corpus", "run", "kdv1", "canonical2"]);
    assert_eq!(par.status.code(), Some(0));
    assert_eq!(stdout(&par), stdout(&seq));
}

#[test]
fn calculus_subcommands() {
    assert!(stdout(&run(&["adjoint", "theta*D"])).starts_with("-theta*D - theta_x\n"));
    assert!(stdout(&run(&["antisym", "theta*D"])).starts_with("theta*D + 1/2*theta_x"));
    assert!(stdout(&run(&["canon", "int theta_x*u + theta*u_x"])).starts_with("int 0"));
    let b = stdout(&run(&["--operator", "theta*D", "--antisymmetrize", "bracket", "int u", "int u^2/2"]));
    assert!(b.contains("canonical: int 1/2*theta*u_x"), "{b}");
    assert!(b.contains("frechet path agrees: yes"));
}

#[test]
fn named_jacobi_triple() {
    let o = run(&["--corpus", "kdv2", "--format", "json", "jacobi", "F", "G", "H"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["agrees"], true);
    assert_eq!(v["residual_zero"], false);
}

#[test]
fn corpus_list_names_every_entry() {
    let text = stdout(&run(&["corpus", "list"]));
    for name in ["kdv1", "kdv2", "kdv2c", "fluid2d", "canonical2"] {
        assert!(text.contains(&format!("{name}:")), "{name}");
    }
}

#[test]
fn problem_files() {
    let dir = std::env::temp_dir().join(format!("varcalc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("p.toml");
    let mut f = std::fs::File::create(&path).unwrap();
    writeln!(f, "name = \"const\"\n[fields]\ndimension = 1\nnames = [\"v\"]\n[operator]\nexpr = \"theta*D3\"\nantisymmetrize = true").unwrap();
    let o = run(&["--problem", path.to_str().unwrap(), "check", "--trials", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("hamiltonian: yes"));
    std::fs::write(&path, "[fields]\ndimension = 1\n").unwrap();
    assert_eq!(run(&["--problem", path.to_str().unwrap(), "check"]).status.code(), Some(1));
    std::fs::remove_dir_all(&dir).unwrap();
}
