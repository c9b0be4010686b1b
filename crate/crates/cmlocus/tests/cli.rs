use std::process::Command;

fn cmlocus(args: &[&str]) -> (String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_cmlocus")).args(args).env_remove("CMLOCUS_OUT_DIR").output().unwrap();
    (String::from_utf8(out.stdout).unwrap(), out.status.code().unwrap())
}

fn json(args: &[&str]) -> serde_json::Value {
    let (out, code) = cmlocus(args);
    assert_eq!(code, 0, "{args:?}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn inventory_totals() {
    let v = json(&["inventory", "--case", "unr", "--p", "3", "--c0", "1"]);
    assert_eq!(v["footers"]["unr p=3 c0=1"]["total"], 5);
    assert_eq!(v["config"]["schema"], "cmlocus-report/1");
    let v = json(&["inventory", "--case", "ram", "--p", "3", "--c0", "1"]);
    assert_eq!(v["footers"]["ram p=3 c0=1"]["total"], 12);
    assert_eq!(v["errata"].as_array().unwrap().len(), 1);
    let v = json(&["inventory", "--case", "unr", "--p", "3", "--c0", "0"]);
    assert_eq!(v["footers"]["unr p=3 c0=0"]["total"], 0);
    assert!(v["rows"].as_array().unwrap().iter().all(|r| r["kind"] != "vertical"));
}

#[test]
fn recursion_dump_and_verdicts() {
    for case in ["unr", "ram"] {
        json(&["recursion", "--case", case, "--p", "3", "--k", "2"]);
    }
    let v = json(&["recursion", "--case", "unr", "--p", "3", "--k", "1", "--dump"]);
    let beta = v["footers"]["unr p=3 k=1"]["beta"].as_str().unwrap();
    assert!(beta.starts_with("-6*w*x2"), "{beta}");
}

#[test]
fn multiplicity_rows() {
    let (out, code) = cmlocus(&["multiplicity", "--p", "3,5", "--c0", "1", "--format", "tsv"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 5);
    assert!(lines[1..].iter().all(|l| l.ends_with("PASS")));
    let (_, code) = cmlocus(&["multiplicity", "--p", "3", "--c0", "2", "--x1-window", "3"]);
    assert_eq!(code, 3);
}

#[test]
fn lattice_suites() {
    let v = json(&["lattice", "--p", "3", "--sublattices", "4"]);
    assert_eq!(v["footers"]["p=3"]["parities"], "psi,psibar,psi,psibar,psi");
    let v = json(&["lattice", "--p", "3", "--superlattices", "1"]);
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
    let v = json(&["lattice", "--p", "3", "--appendix"]);
    assert_eq!(v["footers"]["p=3"]["hodge_lift_count"], 1);
}

#[test]
fn exit_codes_and_determinism() {
    assert_eq!(cmlocus(&["inventory", "--p", "9"]).1, 2);
    assert_eq!(cmlocus(&["inventory", "--format", "xml"]).1, 2);
    assert_eq!(cmlocus(&["--help"]).1, 0);
    let a = cmlocus(&["inventory", "--p", "3..7", "--c0", "0..4", "--format", "tsv"]);
    let b = cmlocus(&["inventory", "--p", "3..7", "--c0", "0..4", "--format", "tsv"]);
    assert_eq!(a, b);
    assert_eq!(cmlocus(&["selfcheck"]).1, 0);
}

#[test]
fn config_file_and_output_directory() {
    let dir = std::env::temp_dir().join(format!("cmlocus-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("job.conf");
    std::fs::write(&cfg, "# sweep\ncase = ram\np = 5\nc0 = 1\nformat = tsv\n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_cmlocus"))
        .args(["inventory", "--save", "--config", cfg.to_str().unwrap()])
        .env("CMLOCUS_OUT_DIR", &dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let saved = std::fs::read_to_string(dir.join("inventory.tsv")).unwrap();
    assert_eq!(saved, String::from_utf8(out.stdout).unwrap());
    assert!(saved.lines().skip(1).all(|l| l.starts_with("ram\t5\t1\t")));
    std::fs::write(&cfg, "colour = blue\n").unwrap();
    assert_eq!(cmlocus(&["inventory", "--config", cfg.to_str().unwrap()]).1, 2);
    std::fs::remove_dir_all(&dir).unwrap();
}
