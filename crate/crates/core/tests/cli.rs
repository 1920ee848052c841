use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_airy-hodge"));
    c.env_remove("AIRY_HODGE_CACHE");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn dims_golden() {
    let o = run(&["dims", "--n", "2", "--k", "5", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "{\"all\":3,\"mid\":3}\n");
    let o = run(&["dims", "--n", "3", "--k", "3", "--format", "json", "--brute-force"]);
    assert_eq!(stdout(&o), "{\"all\":2,\"mid\":1,\"bruteforce\":2}\n");
}

#[test]
fn hodge_golden() {
    let o = run(&["hodge", "--k", "6", "--format", "text"]);
    assert_eq!(
        stdout(&o),
        "k = 6, Ai, weight 7\n     p      q   h\n   8/3   13/3   1\n  13/3    8/3   1\nspectrum: t^{8/3} + t^{13/3}\n"
    );
    let o = run(&["hodge", "--k", "6", "--format", "json"]);
    assert_eq!(
        stdout(&o),
        "{\"k\":6,\"family\":\"Ai\",\"weight\":7,\"entries\":[{\"p\":\"8/3\",\"q\":\"13/3\",\"h\":1},{\"p\":\"13/3\",\"q\":\"8/3\",\"h\":1}]}\n"
    );
    let o = run(&["hodge", "--k", "4", "--mid", "--format", "json"]);
    assert_eq!(stdout(&o), "{\"k\":4,\"family\":\"Ai-mid\",\"weight\":5,\"entries\":[]}\n");
    let o = run(&["hodge", "--k", "3..5", "--parity", "odd", "--format", "csv"]);
    assert_eq!(
        stdout(&o),
        "k,family,p,q,h\n3,Ai,5/3,7/3,1\n3,Ai,7/3,5/3,1\n5,Ai,7/3,11/3,1\n5,Ai,3,3,1\n5,Ai,11/3,7/3,1\n"
    );
}

#[test]
fn latex_table() {
    let o = run(&["hodge", "--k", "4", "--format", "latex"]);
    assert_eq!(
        stdout(&o),
        "% k = 4, Ai\n\\begin{tabular}{ccc}\n$p$ & $q$ & $h^{p,q}$ \\\\\n\\hline\n$3$ & $3$ & 1 \\\\\n\\end{tabular}\n"
    );
}

#[test]
fn gamma_json() {
    let o = run(&["gamma", "--k", "4", "--series-terms", "3", "--format", "json"]);
    assert_eq!(stdout(&o), "{\"k\":4,\"offset\":\"1\",\"values\":[\"1\",\"5/16\",\"295/256\"]}\n");
}

#[test]
fn basis_json_carries_levels_and_classes() {
    let o = run(&["basis", "--k", "3", "--format", "json"]);
    assert_eq!(
        stdout(&o),
        "{\"k\":3,\"space\":\"a1\",\"rho\":\"0\",\"names\":[\"omega_1\",\"omega_2\"],\"levels\":[\"7/3\",\"5/3\"],\"classes\":[{\"u0\":[\"1\"]},{\"u0\":[\"0\",\"1\"]}]}\n"
    );
    let o = run(&["basis", "--k", "2", "--space", "gm", "--rho", "1/2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("\"names\":[\"eta^-_0\",\"eta^-_1\",\"eta^-_2\"]"));
}

#[test]
fn verify_range_passes() {
    let o = run(&["verify", "--k", "2..20", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["failures"], 0);
    let ks: Vec<u64> = v["results"].as_array().unwrap().iter().map(|r| r["k"].as_u64().unwrap()).collect();
    assert_eq!(ks, (2..=20).collect::<Vec<_>>());
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["verify", "--k", "2..30", "--format", "json"][..],
        &["decomp", "--n", "3", "--k", "5", "--format", "json"][..],
        &["tilde", "--k", "4..12", "--parity", "even", "--format", "csv"][..],
    ] {
        let a = run(args);
        let b = run(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn cache_hit_matches_cold_run() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    for format in ["json", "text", "csv"] {
        let args = ["basis", "--k", "8", "--space", "mid", "--format", format, "--cache-dir", d];
        let cold = run(&args);
        let warm = run(&args);
        let uncached = run(&args[..args.len() - 2]);
        assert_eq!(cold.stdout, warm.stdout);
        assert_eq!(cold.stdout, uncached.stdout);
    }
    assert!(std::fs::read_dir(dir.path()).unwrap().count() > 0);
}

#[test]
fn cache_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin()
        .args(["gamma", "--k", "8", "--format", "json"])
        .env("AIRY_HODGE_CACHE", dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let files: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(files.len(), 1);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["dims", "--k", "1..x"]).status.code(), Some(64));
    assert_eq!(run(&["nonsense"]).status.code(), Some(64));
    assert_eq!(run(&["dims", "--k", "4", "--enumeration-cap", "0"]).status.code(), Some(64));
    assert_eq!(run(&["tilde", "--k", "2"]).status.code(), Some(1));
    assert_eq!(run(&["dims", "--n", "1", "--k", "2"]).status.code(), Some(1));
    assert_eq!(run(&["dims", "--n", "4", "--k", "12", "--enumeration-cap", "10"]).status.code(), Some(1));
    assert_eq!(
        run(&["dims", "--k", "6", "--brute-force", "--truncation-ceiling", "8"]).status.code(),
        Some(3)
    );
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}
