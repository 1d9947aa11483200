use std::path::PathBuf;
use std::process::{Command, Output};

fn ncphase(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncphase"))
        .args(args)
        .env_remove("NCPHASE_JOBS")
        .output()
        .expect("binary runs")
}

fn temp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ncphase-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Data rows of a CSV table as numbers (non-numeric cells become NaN).
fn rows(csv: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = csv.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().unwrap().split(',').map(str::to_owned).collect();
    let data = lines
        .map(|l| l.split(',').map(|c| c.parse().unwrap_or(f64::NAN)).collect())
        .collect();
    (header, data)
}

#[test]
fn trajectory_returns_after_half_period() {
    let out = stdout(&ncphase(&["trajectory", "--gamma", "1", "--ic", "0.5,0.5,0.5,0.5", "--t-max", "3.1416"]));
    let (header, data) = rows(&out);
    assert_eq!(header, ["t", "Q1", "Q2", "Pi1", "Pi2", "Omega"]);
    assert_eq!(data.len(), 65);
    for (a, b) in data[0][1..5].iter().zip(&data[64][1..5]) {
        assert!((a - b).abs() < 1e-4);
    }
    assert!(out.contains("# gamma="));
}

#[test]
fn output_is_reproducible() {
    let args = ["sweep", "--models", "rotor3d-nc", "--sigma", "0.5:5:7log", "--lambda", "0.1,1", "--jobs", "3"];
    let a = stdout(&ncphase(&args));
    let b = stdout(&ncphase(&args));
    assert_eq!(a, b);
    let (header, data) = rows(&a);
    assert_eq!(header[..3], ["sigma", "lambda", "model"]);
    assert_eq!(data.len(), 14);
    assert!(data[..7].iter().all(|r| r[1] == 0.1));
    assert!(data.windows(2).take(6).all(|w| w[1][0] > w[0][0]));
}

#[test]
fn file_output_and_json() {
    let path = temp("thermo.json");
    let p = path.to_str().unwrap();
    let o = ncphase(&["thermo", "--model", "rotor2d-nc", "--sigma", "50", "--format", "json", "-o", p]);
    assert!(o.status.success() && o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let row = &v["rows"][0];
    assert_eq!(row["model"], "rotor2d-nc");
    assert!((row["S"].as_f64().unwrap() - 2f64.ln()).abs() < 1e-12);
    assert!(v["meta"].is_object());
}

#[test]
fn config_file_and_flag_precedence() {
    let path = temp("run.conf");
    std::fs::write(&path, "# settings\ngamma = 2\nmax-terms = 500000\n").unwrap();
    let p = path.to_str().unwrap();
    let t = |extra: &[&str]| {
        let mut args = vec!["trajectory", "--config", p, "--steps", "2"];
        args.extend_from_slice(extra);
        let (_, data) = rows(&stdout(&ncphase(&args)));
        data[2][0]
    };
    // default end time is pi/gamma
    assert!((t(&[]) - std::f64::consts::PI / 2.0).abs() < 1e-15);
    assert!((t(&["--gamma", "1"]) - std::f64::consts::PI).abs() < 1e-15);

    std::fs::write(&path, "gama = 2\n").unwrap();
    assert_eq!(ncphase(&["trajectory", "--config", p]).status.code(), Some(2));
}

#[test]
fn exit_codes() {
    assert_eq!(ncphase(&["thermo", "--model", "rotor4d", "--sigma", "1"]).status.code(), Some(2));
    assert_eq!(ncphase(&["thermo", "--model", "free2d-nc", "--sigma", "-1"]).status.code(), Some(2));
    assert_eq!(ncphase(&["trajectory", "--theta", "2", "--eta", "1"]).status.code(), Some(2));
    assert_eq!(ncphase(&["wigner-map", "--axis", "3"]).status.code(), Some(2));
    assert_eq!(ncphase(&["trajectory", "--ic", "1,2,3"]).status.code(), Some(2));
    assert_eq!(
        ncphase(&["thermo", "--model", "free2d-nc", "--sigma", "0.01", "--max-terms", "10"]).status.code(),
        Some(3)
    );
    assert_eq!(ncphase(&["--help"]).status.code(), Some(0));
}

#[test]
fn entropy_peaks_at_quarter_period() {
    let out = stdout(&ncphase(&["entropy", "--gamma", "1", "--t-max", "3.14159265358979", "--steps", "12"]));
    let (header, data) = rows(&out);
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    let (gt, i12, i12_cf) = (col("gamma_t"), col("I12"), col("I12_cf"));
    let peak = data.iter().max_by(|a, b| a[i12].total_cmp(&b[i12])).unwrap();
    assert!((peak[gt] - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    assert!((peak[i12] - 1.0).abs() < 1e-4);
    for r in &data {
        assert!((r[i12] - r[i12_cf]).abs() < 1e-4);
    }
}

#[test]
fn marginal_and_wigner_map_tables() {
    let (header, data) = rows(&stdout(&ncphase(&["marginal", "--gamma", "0.5", "--n", "0", "--pi1", "-6:6:13lin"])));
    assert_eq!(header, ["Pi1", "density"]);
    assert_eq!(data.len(), 13);
    assert!((data[0][1] - data[12][1]).abs() < 1e-9);

    let (header, data) = rows(&stdout(&ncphase(&[
        "wigner-map", "--gamma-t", "0.7853981633974483", "--q", "-1:1:3lin", "--pi", "0,1",
    ])));
    assert_eq!(header, ["Q", "Pi", "value"]);
    assert_eq!(data.len(), 6);
    assert!(data.iter().all(|r| r[2] > 0.0));
}

#[test]
fn selftest_passes() {
    let o = ncphase(&["selftest"]);
    let text = stdout(&o);
    assert!(!text.contains("FAIL"));
}
