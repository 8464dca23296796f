//! End-to-end CLI tests driving the real binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_tenper")
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(bin())
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn tmpdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("tenper-cli-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

const I3: &str = "ht1\norder 3\ndims 3 3 3\n1 0 0 0 0 0 0 0 0\n0 0 0 0 1 0 0 0 0\n0 0 0 0 0 0 0 0 1\n";
const J3: &str = "ht1\norder 3\ndims 3 3 3\n1 1 1 1 1 1 1 1 1\n1 1 1 1 1 1 1 1 1\n1 1 1 1 1 1 1 1 1\n";

#[test]
fn per_subcommand_paper_values() {
    let dir = tmpdir("per");
    let i3 = write(&dir, "I3.ht", I3);
    let out = run_in(&dir, &["per", i3.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "1\n");

    let out = run_in(&dir, &["per", i3.to_str().unwrap(), "--k", "2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "0\n");

    let j3 = write(&dir, "J3.ht", J3);
    assert_eq!(stdout(&run_in(&dir, &["per", j3.to_str().unwrap()])), "36\n");
    assert_eq!(
        stdout(&run_in(&dir, &["per", j3.to_str().unwrap(), "--k", "2"])),
        "12\n"
    );
}

#[test]
fn malformed_file_exits_one_with_diagnostic() {
    let dir = tmpdir("bad");
    let bad = write(&dir, "bad.ht", "ht1\norder 2\ndims 2 2\n1 2 3\n");
    let out = run_in(&dir, &["per", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line"), "missing position in: {err}");

    let out = run_in(&dir, &["per", dir.join("absent.ht").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));

    let out = run_in(&dir, &["per", "--bogus-flag"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn vertices_line_matches_paper_phrase() {
    let dir = tmpdir("vertices");
    let out = run_in(&dir, &["vertices", "--kind", "plane", "--n", "2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "6 vertices (4 zero-one, 2 half-valued)\n");

    let out = run_in(
        &dir,
        &["vertices", "--kind", "line", "--n", "3", "--out", dir.to_str().unwrap()],
    );
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("66 vertices (12 zero-one, 54 half-valued)\n"));
    let archive = std::fs::read_to_string(dir.join("vertices-line-n3.htv")).unwrap();
    let set = tenper::ht::parse_vertexset(&archive).unwrap();
    assert_eq!(set.len(), 66);
}

#[test]
fn check_extreme_hull_flow_on_builtin_d() {
    let dir = tmpdir("flow");
    let out = run_in(
        &dir,
        &["builtin", "--name", "D", "--out", dir.join("D.ht").to_str().unwrap()],
    );
    assert!(out.status.success());

    let d = dir.join("D.ht");
    let out = run_in(&dir, &["check", d.to_str().unwrap(), "--stochastic", "line"]);
    assert_eq!(stdout(&out), "k: 1\nstochastic: true\n");
    let out = run_in(&dir, &["check", d.to_str().unwrap(), "--stochastic", "plane"]);
    assert_eq!(stdout(&out), "k: 2\nstochastic: false\n");

    let out = run_in(
        &dir,
        &["extreme", d.to_str().unwrap(), "--kind", "line", "--n", "3"],
    );
    assert_eq!(stdout(&out), "member: true\nextreme: true\n");

    // D against the 12 line-permutation tensors via the vertex archive trick:
    // export vertices of the line polytope for n = 3 and keep the (0,1) ones
    let gen_dir = dir.join("gens");
    std::fs::create_dir_all(&gen_dir).unwrap();
    let latin = tenper::polytope::line_permutation_tensors(3).unwrap();
    let archive = tenper::ht::vertexset_to_text(&latin);
    std::fs::write(gen_dir.join("latin.htv"), archive).unwrap();
    let out = run_in(
        &dir,
        &["hull", d.to_str().unwrap(), "--generators", gen_dir.to_str().unwrap()],
    );
    assert_eq!(stdout(&out), "generators: 12\nin-hull: no\n");

    // the uniform Latin mixture is inside, with weights printed
    let mut mix = tenper::Tensor::zeros(vec![3, 3, 3]).unwrap();
    let w = tenper::Rational::new(1.into(), 12.into());
    for g in &latin {
        mix = mix.add(&g.scale(&w)).unwrap();
    }
    let mix_path = write(&dir, "mix.ht", &tenper::ht::to_text(&mix));
    let out = run_in(
        &dir,
        &["hull", mix_path.to_str().unwrap(), "--generators", gen_dir.to_str().unwrap()],
    );
    let text = stdout(&out);
    assert!(text.contains("in-hull: yes"), "{text}");
}

#[test]
fn latin_and_patterns_counts() {
    let dir = tmpdir("latin");
    assert_eq!(stdout(&run_in(&dir, &["latin", "--n", "3", "--count-only"])), "12\n");
    let squares = stdout(&run_in(&dir, &["latin", "--n", "2"]));
    assert_eq!(squares, "1 2\n2 1\n\n2 1\n1 2\n");
    assert_eq!(
        stdout(&run_in(
            &dir,
            &["patterns", "--d", "4", "--n", "2", "--k", "2", "--count-only"]
        )),
        "0\n"
    );
    assert_eq!(
        stdout(&run_in(
            &dir,
            &["patterns", "--d", "3", "--n", "2", "--k", "1", "--count-only"]
        )),
        "4\n"
    );
    // a guard stop exits 2
    let out = run_in(&dir, &["latin", "--n", "6", "--count-only"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bounds_report_shape() {
    let dir = tmpdir("bounds");
    let j3 = write(&dir, "J3.ht", J3);
    let out = run_in(&dir, &["bounds", j3.to_str().unwrap(), "--which", "mb1"]);
    let text = stdout(&out);
    assert!(text.contains("check: mb1"));
    assert!(text.contains("per: 36"));
    assert!(text.contains("hyperplane-sums: 9 9 9"));
    assert!(text.contains("status: holds"));

    let out = run_in(&dir, &["bounds", j3.to_str().unwrap()]);
    let text = stdout(&out);
    for tag in ["check: prop1", "check: prop2", "check: mb1", "check: mb2"] {
        assert!(text.contains(tag), "missing {tag} in\n{text}");
    }

    // non-(0,1) input with a specific bound requested is a domain error
    let half = write(
        &dir,
        "half.ht",
        "ht1\norder 3\ndims 2 2 2\n1/2 1/2 1/2 1/2 1/2 1/2 1/2 1/2\n",
    );
    let out = run_in(&dir, &["bounds", half.to_str().unwrap(), "--which", "prop2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn gtf_det_kgtf_values() {
    let dir = tmpdir("gtf");
    let m = write(&dir, "m.ht", "ht1\norder 2\ndims 2 2\n1 2\n3 4\n");
    assert_eq!(stdout(&run_in(&dir, &["det", m.to_str().unwrap()])), "-2\n");
    assert_eq!(
        stdout(&run_in(&dir, &["gtf", m.to_str().unwrap(), "--chars", "trivial"])),
        "10\n"
    );
    assert_eq!(
        stdout(&run_in(&dir, &["gtf", m.to_str().unwrap(), "--chars", "sign"])),
        "-2\n"
    );
    assert_eq!(
        stdout(&run_in(
            &dir,
            &["gtf", m.to_str().unwrap(), "--chars", "trivial-group,sign"]
        )),
        "-2\n"
    );
    let table = write(&dir, "sign2.tbl", "1 2: 1\n2 1: -1\n");
    assert_eq!(
        stdout(&run_in(
            &dir,
            &["gtf", m.to_str().unwrap(), "--chars", table.to_str().unwrap()]
        )),
        "-2\n"
    );

    let j3 = write(&dir, "J3.ht", J3);
    assert_eq!(
        stdout(&run_in(
            &dir,
            &["gtf", j3.to_str().unwrap(), "--chars", "trivial", "--mode", "2per"]
        )),
        "12\n"
    );
    assert_eq!(
        stdout(&run_in(
            &dir,
            &["kgtf", j3.to_str().unwrap(), "--k", "2", "--weight", "one"]
        )),
        "12\n"
    );
}

#[test]
fn probe_deterministic_and_decimal_mode() {
    let dir = tmpdir("probe");
    let args = [
        "probe", "--conjecture", "5", "--n", "3", "--d", "3", "--samples", "6", "--seed", "11",
    ];
    let a = stdout(&run_in(&dir, &args));
    let b = stdout(&run_in(&dir, &args));
    assert_eq!(a, b, "identical argv and seed must give identical stdout");
    assert!(a.contains("rng: chacha20 seed=11"));
    assert!(a.contains("consistent-with-conjecture: true"));

    let j3 = write(&dir, "J3.ht", J3);
    let out = run_in(&dir, &["per", j3.to_str().unwrap(), "--decimal", "3"]);
    assert_eq!(stdout(&out), "precision: decimal, 3 digits\n36.000\n");

    // workers=1 reproduces the parallel result
    let one = stdout(&run_in(&dir, &["per", j3.to_str().unwrap(), "--workers", "1"]));
    let many = stdout(&run_in(&dir, &["per", j3.to_str().unwrap()]));
    assert_eq!(one, many);
}
