use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn curvedflow() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_curvedflow"));
    cmd.env_remove("CURVEDFLOW_OUT");
    cmd
}

fn write_config(dir: &TempDir, text: &str) -> PathBuf {
    let path = dir.path().join("run.toml");
    fs::write(&path, text).unwrap();
    path
}

fn run(config: &Path, out: &Path) -> Output {
    curvedflow().args(["run", "--config"]).arg(config).arg("--out").arg(out).output().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn summary(out: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(out.join("summary.json")).unwrap()).unwrap()
}

fn header(path: &Path) -> String {
    fs::read_to_string(path).unwrap().lines().next().unwrap().to_string()
}

const RIEMANNIAN: &str = "solver = \"riemannian\"\n[numerics]\nt_end = 0.1\nsnapshot_every = 5\n";

#[test]
fn validate_fills_defaults() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "solver = \"riemannian\"\n");
    let o = curvedflow().args(["validate", "--config"]).arg(&cfg).output().unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("cfl = 0.45"), "{text}");
    assert!(text.contains("numerical_flux = \"rusanov\""), "{text}");
    assert!(text.contains("[riemannian"), "{text}");
}

#[test]
fn invalid_sound_speed_is_a_validation_error() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "solver = \"gowdy\"\n[gowdy]\nc_s = 1.2\n");
    let o = run(&cfg, &dir.path().join("out"));
    assert_eq!(o.status.code(), Some(5));
    assert!(stderr(&o).contains("0<c_s<1"), "{}", stderr(&o));
}

#[test]
fn empty_file_is_a_parse_error() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "");
    assert_eq!(run(&cfg, &dir.path().join("out")).status.code(), Some(2));
}

#[test]
fn missing_file_is_unreadable() {
    let dir = TempDir::new().unwrap();
    let o = run(&dir.path().join("nope.toml"), &dir.path().join("out"));
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn unknown_flux_family_lists_the_known_ones() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "solver = \"riemannian\"\n[riemannian.flux]\nfamily = \"nonsense\"\n");
    let o = run(&cfg, &dir.path().join("out"));
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("burgers_1d") && err.contains("stream_2d"), "{err}");
}

#[test]
fn zero_end_time_records_only_the_initial_state() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "solver = \"riemannian\"\n[numerics]\nt_end = 0.0\n");
    let out = dir.path().join("out");
    let o = run(&cfg, &out);
    assert!(o.status.success(), "{}", stderr(&o));
    let norms = fs::read_to_string(out.join("norms.csv")).unwrap();
    assert_eq!(norms.lines().count(), 2);
    let s = summary(&out);
    assert_eq!(s["steps"], 0);
    assert_eq!(s["initial"], s["final"]);
}

#[test]
fn blowup_is_a_successful_run() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "solver = \"gowdy\"\n[numerics]\nt_end = 1.0\n[gowdy]\nn_cells = 64\n[gowdy.initial]\nfamily = \"colliding\"\nspeed = 0.999999\n",
    );
    let out = dir.path().join("out");
    let o = run(&cfg, &out);
    assert!(o.status.success(), "{}", stderr(&o));
    let s = summary(&out);
    assert_eq!(s["status"], "ok");
    assert_eq!(s["verdict"], "matter_blowup");
}

#[test]
fn overflow_is_a_numerical_failure() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "solver = \"riemannian\"\n[riemannian.initial]\nfamily = \"box\"\ninside = 1e200\n",
    );
    let out = dir.path().join("out");
    let o = run(&cfg, &out);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    let s = summary(&out);
    assert_eq!(s["status"], "failed");
    assert!(s["error"].is_string());
}

#[test]
fn csv_headers_match_the_schemas() {
    let schemas = String::from_utf8(curvedflow().arg("schemas").output().unwrap().stdout).unwrap();
    let mut lines = schemas.lines();
    let mut expected = vec![];
    while let (Some(file), Some(head), Some(_)) = (lines.next(), lines.next(), lines.next()) {
        expected.push((file.to_string(), head.trim().to_string()));
    }
    assert_eq!(expected.len(), 8);
    let matches = |pattern: &str, name: &str| match pattern.split_once('<') {
        Some((stem, _)) => name.starts_with(stem) && name[stem.len()..].starts_with(|c: char| c.is_ascii_digit()),
        None => pattern == name,
    };

    let dir = TempDir::new().unwrap();
    let configs = [
        RIEMANNIAN.to_string(),
        "solver = \"riemannian\"\n[numerics]\nt_end = 0.05\n[riemannian.mesh]\nkind = \"torus\"\nnx = 16\nny = 16\n[riemannian.flux]\nfamily = \"stream_2d\"\n".into(),
        "solver = \"lorentzian\"\n[numerics]\nt_end = 0.1\n[lorentzian.companion]\nfamily = \"constant\"\nvalue = 0.2\n".into(),
        "solver = \"gowdy\"\n[numerics]\nt_end = 0.1\n[gowdy]\nn_cells = 32\n".into(),
    ];
    let mut seen = std::collections::HashSet::new();
    for (k, text) in configs.iter().enumerate() {
        let out = dir.path().join(format!("out{k}"));
        let o = run(&write_config(&dir, text), &out);
        assert!(o.status.success(), "{}", stderr(&o));
        for entry in fs::read_dir(&out).unwrap() {
            let path = entry.unwrap().path();
            let name = path.file_name().unwrap().to_string_lossy().into_owned();
            if !name.ends_with(".csv") {
                continue;
            }
            let head = header(&path);
            let schema = expected.iter().position(|(f, h)| matches(f, &name) && *h == head);
            seen.insert(schema.unwrap_or_else(|| panic!("{name} with header {head} matches no schema")));
        }
    }
    assert_eq!(seen.len(), 8, "{seen:?}");
}

#[test]
fn output_directory_precedence() {
    let dir = TempDir::new().unwrap();
    let from_config = dir.path().join("cfg_out");
    let cfg = write_config(&dir, &format!("solver = \"riemannian\"\nout_dir = {:?}\n[numerics]\nt_end = 0.01\n", from_config));
    let from_env = dir.path().join("env_out");
    let from_flag = dir.path().join("flag_out");

    let o = curvedflow().args(["run", "--config"]).arg(&cfg).output().unwrap();
    assert!(o.status.success());
    assert!(from_config.join("summary.json").exists());

    let o = curvedflow().env("CURVEDFLOW_OUT", &from_env).args(["run", "--config"]).arg(&cfg).output().unwrap();
    assert!(o.status.success());
    assert!(from_env.join("summary.json").exists());

    let o = curvedflow()
        .env("CURVEDFLOW_OUT", &from_env)
        .args(["run", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&from_flag)
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(from_flag.join("summary.json").exists());
}

#[test]
fn repeated_runs_are_bit_identical() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, RIEMANNIAN);
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert!(run(&cfg, &a).status.success());
    assert!(run(&cfg, &b).status.success());
    for entry in fs::read_dir(&a).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "csv") {
            assert_eq!(fs::read(&path).unwrap(), fs::read(b.join(path.file_name().unwrap())).unwrap());
        }
    }
    let (mut sa, mut sb) = (summary(&a), summary(&b));
    for s in [&mut sa, &mut sb] {
        s.as_object_mut().unwrap().remove("wall_time_s").unwrap();
    }
    assert_eq!(sa, sb);
}

#[test]
fn sample_configs_validate() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    for entry in fs::read_dir(root).unwrap() {
        let path = entry.unwrap().path();
        let o = curvedflow().args(["validate", "--config"]).arg(&path).output().unwrap();
        assert!(o.status.success(), "{}: {}", path.display(), stderr(&o));
    }
}
