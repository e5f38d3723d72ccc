//! `riesz`: basis dumps, verification suites, Fourier expansion and
//! image-ball probes for reduced-quaternion monogenic polynomials.
//!
//! Exit codes: 0 when every assertable check passes, 1 when one fails,
//! 2 on invalid input or I/O failure.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use riesz_core::basis::{default_table, BasisIndex};
use riesz_core::bloch::{probe_image_ball, ProbeSettings, ProbeStatus};
use riesz_core::fourier::{coefficients_json, expand, FunctionInput};
use riesz_core::report::{bloch_run, constants, verify_all, CheckResult, RunConfig, RunReport};
use riesz_core::scalar::{parse_rational, Rational};
use riesz_core::{Error, Result};
use serde_json::json;

#[derive(Parser)]
#[command(name = "riesz", version, about = "Monogenic polynomial toolkit on balls in R^3")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write one JSON file per basis element of degree at most N.
    Basis {
        #[arg(long, default_value_t = 6)]
        degree_max: u32,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the basis, growth, series and constant suites.
    Verify(RunArgs),
    /// Exact constants plus image-ball probes.
    Bloch {
        #[command(flatten)]
        run: RunArgs,
        /// Probe this function instead of random ones.
        #[arg(long = "fn")]
        function: Option<PathBuf>,
    },
    /// Fourier coefficients of a function.
    Expand {
        #[arg(long = "fn")]
        function: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Image-ball probe of a function on the unit ball.
    Probe {
        #[arg(long = "fn")]
        function: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, default_value_t = 6)]
    degree_max: u32,
    #[arg(long, default_value = "1", value_parser = parse_radius)]
    radius: Rational,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_radius(s: &str) -> std::result::Result<Rational, String> {
    parse_rational(s).ok_or_else(|| format!("cannot read {s:?} as a rational number"))
}

impl RunArgs {
    fn config(&self) -> RunConfig {
        RunConfig {
            degree_max: self.degree_max,
            radius: self.radius.clone(),
            seed: self.seed,
            ..RunConfig::default()
        }
    }
}

fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(Error::from),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_function(path: &Path) -> Result<FunctionInput> {
    FunctionInput::from_json_str(&fs::read_to_string(path)?)
}

fn emit_report(report: &RunReport, out: Option<&Path>) -> Result<bool> {
    write_output(out, &report.to_json_string()?)?;
    for c in &report.checks {
        eprintln!("{} {}", if c.pass { "ok  " } else { "FAIL" }, c.check);
    }
    Ok(report.pass)
}

fn cmd_basis(degree_max: u32, out: &Path) -> Result<bool> {
    if degree_max > default_table().max_degree() {
        return Err(Error::InvalidInput(format!(
            "degree_max {degree_max} exceeds the supported cap {}",
            default_table().max_degree()
        )));
    }
    fs::create_dir_all(out)?;
    for idx in BasisIndex::up_to_degree(degree_max) {
        let e = default_table().get(&idx)?;
        let name = format!("{}_{}_{}.json", idx.n(), idx.family(), idx.m());
        let text = serde_json::to_string_pretty(&e.to_json())? + "\n";
        fs::write(out.join(name), text)?;
    }
    Ok(true)
}

fn cmd_expand(function: &Path, out: Option<&Path>) -> Result<bool> {
    let table = default_table();
    let (f, r) = load_function(function)?.load(table)?;
    let c = expand(&f, &r, table)?;
    let body = json!({
        "radius": riesz_core::json::RationalJson::from(&r),
        "degree_max": c.degree_max,
        "coefficients": coefficients_json(&c),
    });
    write_output(out, &(serde_json::to_string_pretty(&body)? + "\n"))?;
    Ok(true)
}

fn probe_check(function: &Path) -> Result<CheckResult> {
    let table = default_table();
    let (f, _) = load_function(function)?.load(table)?;
    let p = probe_image_ball(&f.to_f64(), table, &ProbeSettings::default())?;
    Ok(CheckResult {
        check: "image_ball_probe".into(),
        params: json!({"function": function.display().to_string(), "radius": 1}),
        records: vec![json!({"probe": p})],
        pass: p.pass,
        worst_slack: (p.status == ProbeStatus::Checked).then_some(p.slack),
    })
}

fn run(cli: Cli) -> Result<bool> {
    let table = default_table();
    match cli.command {
        Command::Basis { degree_max, out } => cmd_basis(degree_max, &out),
        Command::Verify(args) => {
            let start = Instant::now();
            let report = verify_all(&args.config(), table)?;
            eprintln!("elapsed {:.1}s", start.elapsed().as_secs_f64());
            emit_report(&report, args.out.as_deref())
        }
        Command::Bloch { run, function } => {
            let cfg = run.config();
            let report = match function {
                None => bloch_run(&cfg, table)?,
                Some(path) => {
                    let (check, rep) = constants(&cfg)?;
                    RunReport::new("bloch", &cfg, vec![check, probe_check(&path)?], Some(rep))
                }
            };
            emit_report(&report, run.out.as_deref())
        }
        Command::Expand { function, out } => cmd_expand(&function, out.as_deref()),
        Command::Probe { function, out } => {
            let check = probe_check(&function)?;
            let pass = check.pass;
            write_output(out.as_deref(), &(serde_json::to_string_pretty(&check)? + "\n"))?;
            Ok(pass)
        }
    }
}

fn exit_code(result: Result<bool>) -> u8 {
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn main() -> ExitCode {
    ExitCode::from(exit_code(run(Cli::parse())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exec(args: &[&str]) -> Result<bool> {
        let argv = std::iter::once("riesz").chain(args.iter().copied());
        run(Cli::try_parse_from(argv).expect("arguments parse"))
    }

    fn read_json(p: &Path) -> serde_json::Value {
        serde_json::from_slice(&fs::read(p).unwrap()).unwrap()
    }

    #[test]
    fn basis_counts() {
        let dir = tempfile::tempdir().unwrap();
        for (n, expected) in [("0", 3), ("1", 8), ("2", 15)] {
            let out = dir.path().join(n);
            assert!(exec(&["basis", "--degree-max", n, "--out", out.to_str().unwrap()]).unwrap());
            assert_eq!(fs::read_dir(&out).unwrap().count(), expected);
        }
        let v = read_json(&dir.path().join("1").join("1_X_0.json"));
        assert_eq!(v["norm_sq_pi_rational"]["num"], 2);
        assert_eq!(v["norm_sq_pi_rational"]["den"], 5);
        assert_eq!(v["radius_power"], 5);
    }

    #[test]
    fn invalid_output_path_exits_2() {
        assert_eq!(exit_code(exec(&["basis", "--degree-max", "1", "--out", "/dev/null/x"])), 2);
        assert_eq!(exit_code(exec(&["verify", "--degree-max", "0", "--out", "/dev/null/x.json"])), 2);
        assert_eq!(exit_code(exec(&["expand", "--fn", "/nonexistent/f.json"])), 2);
    }

    #[test]
    fn bad_arguments_are_rejected() {
        assert!(Cli::try_parse_from(["riesz", "verify", "--radius", "abc"]).is_err());
        assert!(Cli::try_parse_from(["riesz", "nonsense"]).is_err());
        assert_eq!(exit_code(exec(&["verify", "--radius", "0"])), 2);
    }

    #[test]
    fn verify_small_run_is_deterministic() {
        let dir = tempfile::tempdir().unwrap();
        let a = dir.path().join("a.json");
        let b = dir.path().join("b.json");
        for p in [&a, &b] {
            let args = ["verify", "--degree-max", "0", "--seed", "7", "--out", p.to_str().unwrap()];
            assert_eq!(exit_code(exec(&args)), 0);
        }
        assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
        let v = read_json(&a);
        assert_eq!(v["pass"], true);
        assert_eq!(v["config"]["seed"], 7);
        assert!(v["timing"].is_null());
        for c in v["checks"].as_array().unwrap() {
            for key in ["check", "params", "records", "pass", "worst_slack"] {
                assert!(c.get(key).is_some(), "{key} missing");
            }
        }
    }

    #[test]
    fn expand_function_spec() {
        let dir = tempfile::tempdir().unwrap();
        let spec = dir.path().join("f.json");
        let out = dir.path().join("c.json");
        fs::write(
            &spec,
            r#"{"radius": 1, "terms": [{"n": 1, "family": "X", "m": 0, "coeff": 2},
                                       {"n": 1, "family": "X", "m": 2, "coeff": 3}]}"#,
        )
        .unwrap();
        assert!(exec(&["expand", "--fn", spec.to_str().unwrap(), "--out", out.to_str().unwrap()]).unwrap());
        let v = read_json(&out);
        let coeffs = v["coefficients"].as_array().unwrap();
        assert_eq!(coeffs.len(), 2);
        let den: Vec<f64> = coeffs.iter().map(|c| c["coeff_denormalized"].as_f64().unwrap()).collect();
        assert!((den[0] - 2.0).abs() < 1e-14 && (den[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn corrupted_spec_names_term() {
        let dir = tempfile::tempdir().unwrap();
        let spec = dir.path().join("bad.json");
        fs::write(
            &spec,
            r#"{"radius": 1, "terms": [{"n": 1, "family": "X", "m": 0, "coeff": 1},
                                       {"n": 1, "family": "X", "m": 3, "coeff": 1}]}"#,
        )
        .unwrap();
        let err = exec(&["expand", "--fn", spec.to_str().unwrap()]).unwrap_err().to_string();
        assert!(err.contains("term 1"), "{err}");
    }

    #[test]
    fn probes() {
        let dir = tempfile::tempdir().unwrap();
        let spec = dir.path().join("f.json");
        let out = dir.path().join("p.json");
        fs::write(&spec, r#"{"radius": 1, "terms": [{"n": 1, "family": "X", "m": 0, "coeff": 1}]}"#).unwrap();
        assert!(exec(&["probe", "--fn", spec.to_str().unwrap(), "--out", out.to_str().unwrap()]).unwrap());
        let v = read_json(&out);
        assert_eq!(v["records"][0]["probe"]["status"], "checked");

        // x0 + x2 j has a planar image
        let flat = dir.path().join("flat.json");
        fs::write(
            &flat,
            r#"[{"component": 0, "terms": [{"e": [1,0,0], "num": 1, "den": 1}]},
                {"component": 2, "terms": [{"e": [0,0,1], "num": 1, "den": 1}]}]"#,
        )
        .unwrap();
        let args = ["bloch", "--fn", flat.to_str().unwrap(), "--out", out.to_str().unwrap()];
        assert_eq!(exit_code(exec(&args)), 1);
        let v = read_json(&out);
        assert_eq!(v["checks"][0]["pass"], true);
        assert_eq!(v["checks"][1]["pass"], false);
        assert!(v["bloch_constants"]["bloch_radius_constant"]["decimal"]
            .as_str()
            .unwrap()
            .starts_with("0.0057074"));
    }
}
