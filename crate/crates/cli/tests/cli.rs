use std::path::PathBuf;
use std::process::{Command, Output};

fn eaqldpc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eaqldpc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("eaqldpc-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

#[test]
fn build_projective_space() {
    let o = eaqldpc(&["design", "build", "--pg", "3", "2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("15 35\n"));
    let blocks = text.lines().skip(1).filter(|l| !l.starts_with('#')).count();
    assert_eq!(blocks, 35);
}

#[test]
fn build_triple_system() {
    let o = eaqldpc(&["design", "build", "--sts", "9"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("9 12\n"));
}

#[test]
fn develop_fano_and_reject_bad_bases() {
    let o = eaqldpc(&["design", "develop", "--v", "7", "--bases", "0,1,3"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("7 7\n"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("every pair covered once"));

    let bad = eaqldpc(&["design", "develop", "--v", "8", "--bases", "0,1,3"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("not integral"));
}

#[test]
fn design_file_round_trip_is_byte_identical() {
    let dir = scratch_dir("roundtrip");
    let first = eaqldpc(&["--out", dir.to_str().unwrap(), "design", "build", "--ag", "2", "3"]);
    assert!(first.status.success());
    let file = dir.join("design.txt");
    let original = std::fs::read_to_string(&file).unwrap();
    let again = eaqldpc(&["design", "build", "--design", file.to_str().unwrap()]);
    assert!(again.status.success());
    assert_eq!(stdout(&again), original);
    let verify = eaqldpc(&["design", "verify", file.to_str().unwrap()]);
    assert!(verify.status.success());
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn params_of_projective_three_space() {
    let o = eaqldpc(&["code", "params", "--pg", "3", "2", "--type", "II"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let row = text.lines().nth(1).unwrap();
    assert_eq!(row, "PG,II,3,2,35,14,exact,4,4,1,11,6,0.4000,0.3714");
}

#[test]
fn params_of_affine_plane_type_one() {
    let o = eaqldpc(&["code", "params", "--ag", "2", "16", "--type", "I", "--no-distance"]);
    assert!(o.status.success());
    let row = stdout(&o).lines().nth(1).unwrap().to_string();
    let cols: Vec<&str> = row.split(',').collect();
    assert_eq!(&cols[..6], ["AG", "I", "2", "16", "256", "110"]);
    assert_eq!(cols[9], "16");
}

#[test]
fn distance_report_names_its_evidence() {
    let o = eaqldpc(&["code", "distance", "--pg", "2", "4"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("[[21,2,6;1]]"));
    assert!(text.contains("certification: enumerated"));
}

#[test]
fn alist_export_of_fano() {
    let o = eaqldpc(&["code", "export-alist", "--sts", "7"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("7 7"));
    assert_eq!(lines.next(), Some("3 3"));
    let h = eaqldpc::io::read_alist(&text).unwrap();
    let fano = eaqldpc::designs::build_sts(7).unwrap();
    assert_eq!(h, fano.point_by_block());
}

#[test]
fn sim_at_zero_noise_has_no_errors() {
    let o = eaqldpc(&["sim", "--fm", "0", "--trials", "50"]);
    assert!(o.status.success());
    let last = stdout(&o).lines().last().unwrap().to_string();
    assert!(last.starts_with("0,50,0,0.000000e0,0.000000e0,"));
}

#[test]
fn sim_regression_baseline_and_thread_independence() {
    let args = ["sim", "--pg", "3", "2", "--type", "II", "--fm", "0.03", "--trials", "10000"];
    let one = eaqldpc(&[&["--threads", "1"], &args[..]].concat());
    let three = eaqldpc(&[&["--threads", "3"], &args[..]].concat());
    assert!(one.status.success());
    assert_eq!(stdout(&one), stdout(&three));
    let row = stdout(&one).lines().last().unwrap().to_string();
    assert!(row.starts_with("0.03,10000,1583,"), "{row}");
}

#[test]
fn manifest_digests_match_outputs() {
    let dir = scratch_dir("manifest");
    let o = eaqldpc(&["--out", dir.to_str().unwrap(), "--seed", "7", "sim", "--fm", "0.01", "--trials", "200"]);
    assert!(o.status.success());
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["seed"], 7);
    assert_eq!(manifest["config"]["trials"], 200);
    let outputs = manifest["outputs"].as_array().unwrap();
    assert_eq!(outputs.len(), 1);
    let file = outputs[0]["file"].as_str().unwrap();
    let bytes = std::fs::read(dir.join(file)).unwrap();
    let digest: String = sha2_hex(&bytes);
    assert_eq!(outputs[0]["sha256"], digest.as_str());
    std::fs::remove_dir_all(dir).unwrap();
}

fn sha2_hex(bytes: &[u8]) -> String {
    use sha2::Digest;
    sha2::Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

#[test]
fn table_exit_codes() {
    let ok = eaqldpc(&["tables", "XIII"]);
    assert!(ok.status.success());
    assert_eq!(stdout(&ok).lines().filter(|l| l.ends_with(",ok,")).count(), 4);

    let errata = eaqldpc(&["tables", "IV", "--no-distance"]);
    assert_eq!(errata.status.code(), Some(1));
    let accepted = eaqldpc(&["tables", "IV", "--no-distance", "--accept-errata"]);
    assert!(accepted.status.success());

    let xi = eaqldpc(&["tables", "11"]);
    assert!(xi.status.success());
    assert!(stdout(&xi).contains("0.7547"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(eaqldpc(&["tables", "XIV"]).status.code(), Some(2));
    assert_eq!(eaqldpc(&["sim"]).status.code(), Some(2));
    assert_eq!(eaqldpc(&["code", "params", "--pg", "2", "6"]).status.code(), Some(2));
    assert_eq!(eaqldpc(&["sim", "--fm", "2", "--trials", "1"]).status.code(), Some(2));
}
