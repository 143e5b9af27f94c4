use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn resent(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_resent"))
        .args(args)
        .env_remove("RESENT_OUT")
        .env_remove("RESENT_THREADS")
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn first_line(path: &Path) -> String {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .next()
        .unwrap()
        .to_string()
}

fn json(bytes: &[u8]) -> serde_json::Value {
    serde_json::from_slice(bytes).unwrap()
}

fn fourier_csv(y: impl Fn(usize) -> f64, n: usize) -> String {
    let mut s = String::from("x,y\n");
    for i in 0..n {
        s += &format!("{:?},{:?}\n", -0.5 + i as f64 / n as f64, y(i));
    }
    s
}

#[test]
fn loss_eval_examples() {
    let dir = TempDir::new().unwrap();
    let imp = write(dir.path(), "imp.csv", "1\n0\n0\n0\n");
    let out = resent(&["loss-eval", "--residuals", &imp]);
    assert!(out.status.success());
    let v = json(&out.stdout);
    assert_eq!(v["mse"], 0.25);
    assert_eq!(v["mlp"], 0.0);
    assert_eq!(v["total"], 0.25);
    assert_eq!(v["n"], 4);

    let ramp = write(dir.path(), "ramp.csv", "residual\n1\n2\n3\n4\n");
    let v = json(&resent(&["loss-eval", "--residuals", &ramp, "--eta", "0"]).stdout);
    assert_eq!(v["total"], 7.5);
    assert_eq!(v["mse"], 7.5);
    let v = json(&resent(&["loss-eval", "--residuals", &ramp, "--eta", "1"]).stdout);
    let total = v["total"].as_f64().unwrap();
    assert!((total - 13.977078555339313).abs() < 1e-12, "{total}");
}

#[test]
fn loss_eval_failures_have_distinct_codes() {
    let dir = TempDir::new().unwrap();
    let short = write(dir.path(), "short.csv", "r\n1.5\n");
    let zero = write(dir.path(), "zero.csv", "0\n0\n0\n");
    let bad = write(dir.path(), "bad.csv", "1\n2\nx\n");
    assert_eq!(
        resent(&["loss-eval", "--residuals", &short]).status.code(),
        Some(3)
    );
    assert_eq!(
        resent(&["loss-eval", "--residuals", &zero]).status.code(),
        Some(4)
    );
    let out = resent(&["loss-eval", "--residuals", &bad]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
    assert_eq!(
        resent(&["loss-eval", "--residuals", &short, "--eta", "-1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(resent(&["simulate"]).status.code(), Some(2));
    assert_eq!(
        resent(&["simulate", "--family", "bogus"]).status.code(),
        Some(2)
    );
    let dir = TempDir::new().unwrap();
    let out = dir.path().to_str().unwrap();
    let code = |args: &[&str]| resent(args).status.code();
    assert_eq!(
        code(&["simulate", "--family", "fourier", "--out", out]),
        Some(2)
    );
    assert_eq!(
        code(&["simulate", "--family", "fourier", "--orders", "51", "--out", out]),
        Some(2)
    );
    assert_eq!(
        code(&[
            "simulate",
            "--family",
            "none",
            "--realizations",
            "5",
            "--full-scale",
            "--out",
            out
        ]),
        Some(2)
    );
    assert!(fs::read_dir(dir.path()).unwrap().next().is_none());
}

#[test]
fn help_documents_exit_codes() {
    let out = resent(&["--help"]);
    let text = String::from_utf8_lossy(&out.stdout);
    for line in ["0  success", "2  usage", "3  data", "4  numerical"] {
        assert!(text.contains(line), "missing '{line}'");
    }
}

#[test]
fn simulate_golden_headers_and_shape() {
    let dir = TempDir::new().unwrap();
    let out = resent(&[
        "simulate",
        "--family",
        "fourier",
        "--n",
        "8",
        "--orders",
        "1,3",
        "--realizations",
        "50",
        "--seed",
        "7",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let p = dir.path();
    assert_eq!(
        first_line(&p.join("mean_autocorr.csv")),
        "order,lag_0,lag_1,lag_2,lag_3,lag_4,lag_5,lag_6,lag_7"
    );
    assert_eq!(
        first_line(&p.join("mean_signature.csv")),
        "order,k_0,k_1,k_2,k_3,k_4,k_5,k_6,k_7"
    );
    assert_eq!(
        first_line(&p.join("mean_corr_power.csv")),
        "order,k_0,k_1,k_2,k_3,k_4,k_5,k_6,k_7"
    );
    assert_eq!(
        first_line(&p.join("mlp_percentiles.csv")),
        "order,p05,p50,p95"
    );

    let autocorr = fs::read_to_string(p.join("mean_autocorr.csv")).unwrap();
    let rows: Vec<&str> = autocorr.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[0].starts_with("1,1.0,"));
    assert!(rows[1].starts_with("3,1.0,"));
    // Every float field round-trips.
    for row in &rows {
        for f in row.split(',').skip(1) {
            let v: f64 = f.parse().unwrap();
            assert_eq!(format!("{v:?}"), f);
        }
    }

    let m = json(&fs::read(p.join("manifest.json")).unwrap());
    assert_eq!(m["command"], "simulate");
    assert_eq!(m["config"]["orders"], serde_json::json!([1, 3]));
    assert_eq!(m["failures"]["1"], 0);
    assert_eq!(m["config_hash"].as_str().unwrap().len(), 64);
    assert!(m.get("wall_time_seconds").is_none());
    assert_eq!(m["outputs"].as_array().unwrap().len(), 5);
}

#[test]
fn wall_time_is_opt_in() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().to_str().unwrap();
    let args = [
        "simulate",
        "--family",
        "none",
        "--n",
        "16",
        "--realizations",
        "10",
        "--out",
        out,
    ];
    assert!(resent(&[&args[..], &["--record-wall-time"]].concat())
        .status
        .success());
    let m = json(&fs::read(dir.path().join("manifest.json")).unwrap());
    assert!(m["wall_time_seconds"].as_f64().unwrap() >= 0.0);
}

#[test]
fn simulate_is_deterministic_across_runs_and_threads() {
    let dir = TempDir::new().unwrap();
    let run = |name: &str, threads: &str| {
        let out = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_resent"))
            .args([
                "simulate",
                "--family",
                "chebyshev",
                "--orders",
                "2,9",
                "--n",
                "40",
            ])
            .args(["--realizations", "600", "--seed", "5"])
            .env("RESENT_OUT", &out)
            .env("RESENT_THREADS", threads)
            .status()
            .unwrap();
        assert!(status.success());
        out
    };
    let a = run("a", "1");
    let b = run("b", "3");
    let c = run("c", "3");
    for name in [
        "mean_autocorr.csv",
        "mean_signature.csv",
        "mean_corr_power.csv",
        "mlp_percentiles.csv",
        "manifest.json",
    ] {
        let x = fs::read(a.join(name)).unwrap();
        assert_eq!(x, fs::read(b.join(name)).unwrap(), "{name}");
        assert_eq!(x, fs::read(c.join(name)).unwrap(), "{name}");
    }
}

#[test]
fn failed_write_removes_partial_outputs() {
    let dir = TempDir::new().unwrap();
    // A directory where a later output file should go makes that write fail.
    fs::create_dir(dir.path().join("mlp_percentiles.csv")).unwrap();
    let out = resent(&[
        "simulate",
        "--family",
        "none",
        "--n",
        "16",
        "--realizations",
        "10",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    let left: Vec<_> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    assert_eq!(left, vec![std::ffi::OsString::from("mlp_percentiles.csv")]);
}

#[test]
fn fit_constant_data_is_exact() {
    let dir = TempDir::new().unwrap();
    let data = write(dir.path(), "c.csv", &fourier_csv(|_| 5.0, 100));
    let out_dir = dir.path().join("out");
    let out = resent(&[
        "fit",
        "--data",
        &data,
        "--family",
        "fourier",
        "--order",
        "1",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = json(&fs::read(out_dir.join("fit.json")).unwrap());
    let a0 = v["ols"]["coefficients"][0].as_f64().unwrap();
    assert!((a0 - 10.0).abs() < 1e-12, "{a0}");
    assert_eq!(v["optimized"]["loss"]["total"], 0.0);
    assert_eq!(v["ols"]["loss"]["mse"], 0.0);
    assert_eq!(v["grid"], "fourier");
    assert_eq!(
        fs::read_to_string(out_dir.join("residual_spectrum.csv")).unwrap(),
        "lag,rho_rr,k,rho_tilde_rr\n"
    );
}

fn noise(n: usize) -> Vec<f64> {
    use rand::SeedableRng;
    use rand_distr::{Distribution, StandardNormal};
    let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(41);
    (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
}

#[test]
fn fit_white_noise_improves_on_least_squares() {
    let dir = TempDir::new().unwrap();
    let y = noise(100);
    let data = write(dir.path(), "w.csv", &fourier_csv(|i| y[i], 100));
    let out_dir = dir.path().join("out");
    let out = resent(&[
        "fit",
        "--data",
        &data,
        "--family",
        "fourier",
        "--order",
        "41",
        "--eta",
        "1",
        "--max-iters",
        "4000",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = json(&fs::read(out_dir.join("fit.json")).unwrap());
    let ols = v["ols"]["loss"]["total"].as_f64().unwrap();
    let opt = v["optimized"]["loss"]["total"].as_f64().unwrap();
    assert!(opt <= ols, "{opt} > {ols}");

    let spectrum = fs::read_to_string(out_dir.join("residual_spectrum.csv")).unwrap();
    let lines: Vec<&str> = spectrum.lines().collect();
    assert_eq!(lines[0], "lag,rho_rr,k,rho_tilde_rr");
    assert_eq!(lines.len(), 101);
    assert!(lines[1].starts_with("0,1.0,0,"));
}

#[test]
fn fit_eta_zero_keeps_least_squares() {
    let dir = TempDir::new().unwrap();
    let y = noise(60);
    let mut csv = String::from("x,y\n");
    for (i, v) in y.iter().enumerate() {
        csv += &format!("{},{v}\n", i as f64 * 0.1);
    }
    let data = write(dir.path(), "d.csv", &csv);
    let out_dir = dir.path().join("out");
    let out = resent(&[
        "fit",
        "--data",
        &data,
        "--family",
        "chebyshev",
        "--order",
        "5",
        "--eta",
        "0",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = json(&fs::read(out_dir.join("fit.json")).unwrap());
    assert_eq!(v["grid"], "custom");
    assert!(v["max_coefficient_diff"].as_f64().unwrap() < 1e-8);
}

#[test]
fn fit_rejects_bad_data() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("out");
    let out = out.to_str().unwrap();
    let malformed = write(dir.path(), "m.csv", "x,y\n0,1\n0.5,2\n0.7,oops\n");
    let r = resent(&[
        "fit",
        "--data",
        &malformed,
        "--family",
        "chebyshev",
        "--order",
        "1",
        "--out",
        out,
    ]);
    assert_eq!(r.status.code(), Some(3));
    assert!(
        String::from_utf8_lossy(&r.stderr).contains("line 4"),
        "{}",
        String::from_utf8_lossy(&r.stderr)
    );

    let unordered = write(dir.path(), "u.csv", "x,y\n0,1\n0.5,2\n0.4,3\n");
    let r = resent(&[
        "fit",
        "--data",
        &unordered,
        "--family",
        "chebyshev",
        "--order",
        "1",
        "--out",
        out,
    ]);
    assert_eq!(r.status.code(), Some(3));

    let missing = write(dir.path(), "n.csv", "a,b\n0,1\n1,2\n");
    let r = resent(&[
        "fit",
        "--data",
        &missing,
        "--family",
        "chebyshev",
        "--order",
        "1",
        "--out",
        out,
    ]);
    assert_eq!(r.status.code(), Some(3));

    let ragged = write(dir.path(), "r.csv", "x,y\n0,1\n0.5\n");
    let r = resent(&[
        "fit",
        "--data",
        &ragged,
        "--family",
        "chebyshev",
        "--order",
        "1",
        "--out",
        out,
    ]);
    assert_eq!(r.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&r.stderr).contains("line 3"));
    assert!(!Path::new(out).exists());
}

#[test]
fn landscape_csv() {
    let dir = TempDir::new().unwrap();
    let y = noise(50);
    let data = write(dir.path(), "w.csv", &fourier_csv(|i| y[i], 50));
    let out = resent(&[
        "landscape",
        "--data",
        &data,
        "--family",
        "fourier",
        "--order",
        "3",
        "--axis",
        "1",
        "--lo",
        "-1",
        "--hi",
        "1",
        "--steps",
        "5",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = fs::read_to_string(dir.path().join("landscape.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "value,mse,mlp,total");
    assert_eq!(lines.len(), 6);
    assert!(lines[1].starts_with("-1.0,"));
    assert!(lines[5].starts_with("1.0,"));
}

#[test]
fn outlier_demo_report() {
    let dir = TempDir::new().unwrap();
    let out = resent(&[
        "outlier-demo",
        "--etas",
        "0,0.5",
        "--max-iters",
        "2000",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = json(&fs::read(dir.path().join("outlier_report.json")).unwrap());
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
    assert_eq!(v["outlier_indices"].as_array().unwrap().len(), 5);
    assert_eq!(v["rows"][0]["coefficients"].as_array().unwrap().len(), 7);
}
