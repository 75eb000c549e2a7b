use std::path::{Path, PathBuf};
use std::process::Command;

use qbm_cli::{execute, Cell, Command as Run, Format, RunConfig, Table};

fn configs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn shipped(name: &str) -> RunConfig {
    RunConfig::load(&configs_dir().join(name)).unwrap()
}

fn qbm(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_qbm"))
        .args(args)
        .env_remove(qbm_cli::SERIES_TERMS_ENV)
        .output()
        .unwrap()
}

fn write_config(dir: &tempfile::TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn column(t: &Table, name: &str) -> Vec<Option<f64>> {
    let c = t.column(name).unwrap_or_else(|| panic!("no column {name}"));
    t.rows.iter().map(|r| r[c].as_f64()).collect()
}

const SMALL: &str = r#"
observable = "position"
[oscillator]
temperature = 0.1
[bath]
kind = "ohmic"
[sweep]
gammas = [0.0, 0.5]
rates = [4.0]
elapsed = { start = 0.0, stop = 6.0, points = 13 }
outcomes = { start = -4.0, stop = 4.0, points = 9 }
"#;

#[test]
fn shipped_configs_round_trip() {
    for entry in std::fs::read_dir(configs_dir()).unwrap() {
        let path = entry.unwrap().path();
        let cfg = RunConfig::load(&path).unwrap();
        let again = RunConfig::from_toml(&cfg.to_toml()).unwrap();
        assert_eq!(cfg, again, "{}", path.display());
    }
}

#[test]
fn shipped_configs_cover_every_panel() {
    for name in ["fig2-surface.toml", "fig3-surface.toml"] {
        let cfg = shipped(name);
        assert_eq!(cfg.sweep.gammas.len(), 3);
        assert_eq!(cfg.rate_axis().len(), 3);
        assert_eq!(cfg.protocol.slit_width, 0.5);
        assert_eq!(cfg.oscillator.temperature, 0.1);
    }
    assert_eq!(shipped("fig2-surface.toml").protocol.first_outcome, 0.0);
    assert_eq!(shipped("fig3-surface.toml").protocol.first_outcome, -5.0);
    for name in ["fig4-variance.toml", "fig5-momentum-variance.toml"] {
        let cfg = shipped(name);
        assert_eq!(cfg.sweep.gammas.len(), 3);
        assert_eq!(cfg.sweep.rates.len(), 4);
        assert!(!cfg.sweep.unmonitored);
    }
    assert_eq!(shipped("fig4-variance.toml").bath.compare_cutoff, Some(100.0));
    assert_eq!(shipped("fig5-momentum-variance.toml").bath.cutoff, Some(100.0));
}

#[test]
fn default_grids() {
    let cfg = RunConfig::from_toml(
        "observable = \"position\"\n[bath]\nkind = \"ohmic\"\n[sweep]\ngammas = [0.2]\nunmonitored = true\n",
    )
    .unwrap();
    let t = cfg.sweep.elapsed.values();
    assert_eq!(t.len(), 600);
    assert_eq!(t[599], 24.0 * std::f64::consts::PI);
    let x = cfg.sweep.outcomes.values();
    assert_eq!((x.len(), x[0], x[399]), (400, -8.0, 8.0));
}

#[test]
fn validation_errors() {
    let bad = [
        SMALL.replace("temperature = 0.1", "temperature = 0.1\ncolour = 3"),
        SMALL.replace("points = 13", "points = 0"),
        SMALL.replace("rates = [4.0]", "rates = [0.0, 4.0]"),
        SMALL.replace("rates = [4.0]", "rates = [4.0, 2.0]"),
        SMALL.replace("kind = \"ohmic\"", "kind = \"drude\""),
        SMALL.replace("kind = \"ohmic\"", "kind = \"ohmic\"\ncutoff = 50.0"),
        SMALL.replace("[sweep]", "[protocol]\nslit_width = 0.0\n[sweep]"),
    ];
    for text in &bad {
        assert!(RunConfig::from_toml(text).is_err(), "accepted:\n{text}");
    }
    RunConfig::from_toml(SMALL).unwrap();
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.csv");
    let out = out.to_str().unwrap();

    let unknown = write_config(&dir, "unknown.toml", &SMALL.replace("[bath]", "[bath]\nextra = 1"));
    let r = qbm(&["variance", "--config", unknown.to_str().unwrap(), "--out", out]);
    assert_eq!(r.status.code(), Some(2));

    let overdamped = write_config(&dir, "over.toml", &SMALL.replace("[0.0, 0.5]", "[0.0, 2.5]"));
    let r = qbm(&["variance", "--config", overdamped.to_str().unwrap(), "--out", out]);
    assert_eq!(r.status.code(), Some(3));

    let momentum = write_config(&dir, "mom.toml", &SMALL.replace("\"position\"", "\"momentum\""));
    let r = qbm(&["variance", "--config", momentum.to_str().unwrap(), "--out", out]);
    assert_eq!(r.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&r.stderr).contains("Drude"));

    let good = write_config(&dir, "good.toml", SMALL);
    let r = qbm(&["surface", "--config", good.to_str().unwrap(), "--out", out, "--threads", "2"]);
    assert_eq!(r.status.code(), Some(0), "{}", String::from_utf8_lossy(&r.stderr));
    let text = std::fs::read_to_string(out).unwrap();
    assert_eq!(text.lines().count(), 1 + 2 * 13 * 9);
}

#[test]
fn output_is_independent_of_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, "c.toml", SMALL);
    let mut outputs = Vec::new();
    for threads in ["1", "3", "0"] {
        let out = dir.path().join(format!("{threads}.json"));
        let r = qbm(&[
            "variance", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(),
            "--format", "json", "--threads", threads,
        ]);
        assert!(r.status.success());
        outputs.push(std::fs::read(out).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[0], outputs[2]);
    let parsed: serde_json::Value = serde_json::from_slice(&outputs[0]).unwrap();
    assert_eq!(parsed["rows"].as_array().unwrap().len(), 2 * 13);
    // γ = 0 has no asymptotic value
    assert!(parsed["rows"][5][6].is_null());
}

#[test]
fn series_override_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, "c.toml", SMALL);
    let run = |terms: Option<&str>| {
        let out = dir.path().join("o.csv");
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_qbm"));
        cmd.args(["correlators", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
        match terms {
            Some(t) => cmd.env(qbm_cli::SERIES_TERMS_ENV, t),
            None => cmd.env_remove(qbm_cli::SERIES_TERMS_ENV),
        };
        let status = cmd.status().unwrap();
        (status.code(), std::fs::read(&out).ok())
    };
    let (code, default) = run(None);
    assert_eq!(code, Some(0));
    let (_, two_thousand) = run(Some("2000"));
    let (_, short) = run(Some("3"));
    assert_eq!(default, two_thousand);
    assert_ne!(default, short);
    assert_eq!(run(Some("many")).0, Some(2));
}

#[test]
fn refocusing_without_friction_or_monitoring() {
    let mut cfg = RunConfig::from_toml(SMALL).unwrap();
    cfg.sweep.gammas = vec![0.0];
    cfg.sweep.rates.clear();
    cfg.sweep.unmonitored = true;
    let pi = std::f64::consts::PI;
    cfg.sweep.elapsed = qbm_cli::config::Grid::Values(vec![0.4, 0.4 + pi, 0.4 + 3.0 * pi, 1.0]);
    let t = execute(Run::Variance, &cfg).unwrap();
    let v = column(&t, "variance[sigma_gs^2]");
    let v: Vec<f64> = v.into_iter().map(Option::unwrap).collect();
    assert!((v[0] - v[1]).abs() < 1e-12 && (v[0] - v[2]).abs() < 1e-12);
    assert!((v[0] - v[3]).abs() > 1e-3);
}

#[test]
fn ridge_follows_mean_for_every_rate() {
    let mut cfg = shipped("fig3-surface.toml");
    cfg.sweep.gammas = vec![0.2];
    cfg.sweep.elapsed = qbm_cli::config::Grid::Values(vec![0.0, 2.0, 5.5]);
    cfg.sweep.outcomes = qbm_cli::config::Grid::Linear(qbm_cli::config::LinearGrid {
        start: -8.0,
        stop: 8.0,
        points: 1601,
    });
    let table = execute(Run::Surface, &cfg).unwrap();
    let set = qbm_core::CorrelatorSet::position(cfg.oscillator, cfg.bath_at(0.2), cfg.series_control(150).unwrap())
        .unwrap();
    use qbm_core::Kernel;
    let sigma_gs = cfg.oscillator.ground_state_width();
    let zeta0 = set.variance() + (0.5 * sigma_gs).powi(2);
    for (i, &t) in [0.0, 2.0, 5.5].iter().enumerate() {
        let mean = -5.0 * sigma_gs * set.symmetric(t) / zeta0 / sigma_gs;
        for r in 0..3 {
            let start = ((r * 3) + i) * 1601;
            let block = &table.rows[start..start + 1601];
            let peak = block
                .iter()
                .max_by(|a, b| a[5].as_f64().partial_cmp(&b[5].as_f64()).unwrap())
                .unwrap();
            assert_eq!(peak[2], Cell::Float(t));
            assert!((peak[4].as_f64().unwrap() - mean).abs() <= 0.01, "t={t} rate {r}");
        }
    }
}

#[test]
fn variance_curves_follow_limits() {
    let mut cfg = shipped("fig4-variance.toml");
    cfg.sweep.rates = vec![8.0, 16.0];
    let t = execute(Run::Variance, &cfg).unwrap();
    let gamma = column(&t, "gamma[omega0]");
    let mu = column(&t, "mu[omega0/2pi]");
    let var = column(&t, "variance[sigma_gs^2]");
    let asym = column(&t, "variance_asymptotic[sigma_gs^2]");
    let drude = column(&t, "variance_drude[sigma_gs^2]");
    let at = |g: f64, m: f64| -> Vec<usize> {
        (0..t.rows.len()).filter(|&i| gamma[i] == Some(g) && mu[i] == Some(m)).collect()
    };
    // frictionless: late slope proportional to the rate
    let slope = |m: f64| {
        let idx = at(0.0, m);
        let (a, b) = (idx[idx.len() - 201], idx[idx.len() - 1]);
        (var[b].unwrap() - var[a].unwrap()) / 25.0
    };
    assert!((slope(16.0) / slope(8.0) - 2.0).abs() < 0.05);
    // strong friction saturates
    for m in [8.0, 16.0] {
        let last = *at(1.0, m).last().unwrap();
        assert!((var[last].unwrap() / asym[last].unwrap() - 1.0).abs() < 0.03);
    }
    // Drude comparison at ω_D = 100
    for i in 0..t.rows.len() {
        let (v, d) = (var[i].unwrap(), drude[i].unwrap());
        assert!((v - d).abs() < 1e-2 * v);
    }
}

#[test]
fn correlator_dump_round_trips() {
    let cfg = shipped("correlators.toml");
    let table = execute(Run::Correlators, &cfg).unwrap();
    assert_eq!(table.rows[0][3], Cell::Float(0.0));
    assert_eq!(table.columns.len(), 6);
    let bytes = table.to_bytes(Format::Csv).unwrap();
    let back = Table::read_csv(&bytes).unwrap();
    assert_eq!(back.to_bytes(Format::Csv).unwrap(), bytes);
}

#[test]
fn drude_comparison_converges_with_cutoff() {
    let mut cfg = RunConfig::from_toml(SMALL).unwrap();
    cfg.sweep.gammas = vec![0.5];
    cfg.sweep.elapsed = qbm_cli::config::Grid::Values((0..=40).map(|i| 0.5 * i as f64).collect());
    let mut last = f64::INFINITY;
    for cutoff in [25.0, 50.0, 100.0] {
        cfg.bath.compare_cutoff = Some(cutoff);
        let t = execute(Run::Correlators, &cfg).unwrap();
        let s = column(&t, "S[sigma_gs^2]");
        let d = column(&t, "S_drude[sigma_gs^2]");
        let gap = s.iter().zip(&d).map(|(a, b)| (a.unwrap() - b.unwrap()).abs()).fold(0.0, f64::max);
        assert!(gap < last);
        last = gap;
    }
}
