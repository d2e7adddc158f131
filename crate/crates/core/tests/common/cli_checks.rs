//! CLI contract checks shared by the golden-file tests and the acceptance gate.

use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

use matpoly::cli::document::{from_json, to_json, EquationDocument};
use matpoly::instances::symbolic_det_oracle;

pub type Check = fn() -> Result<(), String>;

pub const ALL: &[(&str, Check)] = &[
    ("solve_scalar_quadratic", solve_scalar_quadratic),
    ("solve_identically_singular", solve_identically_singular),
    ("solve_malformed_names_field", solve_malformed_names_field),
    ("solve_insufficient_roots", solve_insufficient_roots),
    ("solve_rejects_sandwich", solve_rejects_sandwich),
    ("detpoly_identity_roots", detpoly_identity_roots),
    ("detpoly_circle_slice", detpoly_circle_slice),
    (
        "detpoly_integer_matches_oracle",
        detpoly_integer_matches_oracle,
    ),
    ("detpoly_wrong_fix_count", detpoly_wrong_fix_count),
    ("sample_circle", sample_circle),
    ("sample_constant_nonsingular", sample_constant_nonsingular),
    ("sample_planted_grid_point", sample_planted_grid_point),
    ("verify_nonsolution", verify_nonsolution),
    ("verify_dimension_mismatch", verify_dimension_mismatch),
    ("plant_solve_verify", plant_solve_verify),
    (
        "plant_univariate_recovers_truth",
        plant_univariate_recovers_truth,
    ),
    ("plant_sandwich_verify", plant_sandwich_verify),
    ("plant_scalar_pair", plant_scalar_pair),
    ("plant_invalid_flags", plant_invalid_flags),
    ("usage_errors", usage_errors),
    ("equation_round_trip", equation_round_trip),
];

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

fn g(name: &str) -> String {
    golden(name).to_string_lossy().into_owned()
}

fn matpoly(args: &[&str]) -> Result<Run, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_matpoly"))
        .args(args)
        .output()
        .map_err(|e| format!("cannot run matpoly: {e}"))?;
    Ok(Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    })
}

fn expect_code(run: &Run, code: i32, what: &str) -> Result<(), String> {
    if run.code == code {
        Ok(())
    } else {
        Err(format!(
            "{what}: exit {} instead of {code}\nstdout: {}\nstderr: {}",
            run.code, run.stdout, run.stderr
        ))
    }
}

fn parse(text: &str) -> Result<Value, String> {
    serde_json::from_str(text).map_err(|e| format!("output is not JSON: {e}"))
}

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn tempdir() -> Result<tempfile::TempDir, String> {
    tempfile::tempdir().map_err(|e| e.to_string())
}

/// Structural comparison with a numeric tolerance.
fn close(actual: &Value, expected: &Value, tol: f64, at: &str) -> Result<(), String> {
    match (actual, expected) {
        (Value::Number(a), Value::Number(e)) => {
            let (a, e) = (
                a.as_f64().unwrap_or(f64::NAN),
                e.as_f64().unwrap_or(f64::NAN),
            );
            if (a - e).abs() <= tol * (1.0 + e.abs()) {
                Ok(())
            } else {
                Err(format!("{at}: {a} vs expected {e}"))
            }
        }
        (Value::Array(a), Value::Array(e)) => {
            if a.len() != e.len() {
                return Err(format!("{at}: length {} vs expected {}", a.len(), e.len()));
            }
            for (i, (x, y)) in a.iter().zip(e).enumerate() {
                close(x, y, tol, &format!("{at}[{i}]"))?;
            }
            Ok(())
        }
        (Value::Object(a), Value::Object(e)) => {
            for (k, y) in e {
                let x = a.get(k).ok_or_else(|| format!("{at}.{k}: missing"))?;
                close(x, y, tol, &format!("{at}.{k}"))?;
            }
            Ok(())
        }
        (a, e) if a == e => Ok(()),
        (a, e) => Err(format!("{at}: {a} vs expected {e}")),
    }
}

fn solve_scalar_quadratic() -> Result<(), String> {
    let run = matpoly(&["solve", &g("quadratic.json")])?;
    expect_code(&run, 0, "solve quadratic")?;
    let actual = parse(&run.stdout)?;
    let expected = parse(&read(&golden("solve_quadratic.expected.json"))?)?;
    let (fa, fe) = (&actual["families"], &expected["families"]);
    let count = fe.as_array().map_or(0, Vec::len);
    if fa.as_array().map_or(0, Vec::len) != count {
        return Err(format!("expected {count} families, got {fa}"));
    }
    for k in 0..count {
        close(
            &fa[k]["eigenvalues"],
            &fe[k]["eigenvalues"],
            1e-12,
            "eigenvalues",
        )?;
        close(&fa[k]["unknowns"], &fe[k]["unknowns"], 1e-12, "unknowns")?;
        let r = fa[k]["residual"].as_f64().unwrap_or(1.0);
        if r > 1e-12 {
            return Err(format!("family {k} residual {r}"));
        }
    }
    Ok(())
}

fn solve_identically_singular() -> Result<(), String> {
    let run = matpoly(&["solve", &g("singular.json")])?;
    expect_code(&run, 1, "solve singular")?;
    if run.stderr.contains("identically singular") {
        Ok(())
    } else {
        Err(format!("stderr lacks the reason: {}", run.stderr))
    }
}

fn solve_malformed_names_field() -> Result<(), String> {
    let run = matpoly(&["solve", &g("malformed.json")])?;
    expect_code(&run, 1, "solve malformed")?;
    if run.stderr.contains("terms[0].coefficient[0][0][1]") {
        Ok(())
    } else {
        Err(format!("stderr lacks the field path: {}", run.stderr))
    }
}

fn solve_insufficient_roots() -> Result<(), String> {
    let dir = tempdir()?;
    let out = dir.path().join("sol.json");
    let run = matpoly(&[
        "solve",
        &g("insufficient.json"),
        "-o",
        &out.to_string_lossy(),
    ])?;
    expect_code(&run, 2, "solve with too few roots")?;
    let doc = parse(&read(&out)?)?;
    let failure = doc["diagnostics"][0]["failure"].as_str().unwrap_or("");
    if doc["families"].as_array().is_some_and(Vec::is_empty)
        && failure.starts_with("InsufficientRoots")
    {
        Ok(())
    } else {
        Err(format!("unexpected document {doc}"))
    }
}

fn solve_rejects_sandwich() -> Result<(), String> {
    let dir = tempdir()?;
    let eq = dir.path().join("eq.json");
    let eq = eq.to_string_lossy();
    let run = matpoly(&[
        "plant",
        "--dimension",
        "2",
        "--arity",
        "2",
        "--degree",
        "2",
        "--orientation",
        "sandwich",
        "--seed",
        "1",
        "-o",
        &eq,
    ])?;
    expect_code(&run, 0, "plant sandwich")?;
    expect_code(
        &matpoly(&["solve", &eq, "--seed", "1"])?,
        1,
        "solve sandwich",
    )
}

fn detpoly_identity_roots() -> Result<(), String> {
    let run = matpoly(&["detpoly", &g("identity_roots.json")])?;
    expect_code(&run, 0, "detpoly")?;
    let expected = parse(&read(&golden("detpoly_identity.expected.json"))?)?;
    close(&parse(&run.stdout)?, &expected, 1e-10, "detpoly")
}

fn detpoly_circle_slice() -> Result<(), String> {
    let run = matpoly(&["detpoly", &g("circle.json"), "--pivot", "1", "--fix", "1"])?;
    expect_code(&run, 0, "detpoly circle")?;
    let expected = parse(&read(&golden("detpoly_circle.expected.json"))?)?;
    close(&parse(&run.stdout)?, &expected, 1e-12, "detpoly")
}

fn detpoly_integer_matches_oracle() -> Result<(), String> {
    let path = golden("integer_cubic.json");
    let doc: EquationDocument = from_json(&read(&path)?)?;
    let exact = symbolic_det_oracle(doc.to_equation()?.poly()).map_err(|e| e.to_string())?;
    let run = matpoly(&["detpoly", &path.to_string_lossy()])?;
    expect_code(&run, 0, "detpoly integer")?;
    let out = parse(&run.stdout)?;
    let got = out["coefficients"].as_array().ok_or("no coefficients")?;
    let scale = exact.max_coefficient();
    for (k, want) in exact.coefficients().iter().enumerate() {
        let re = got.get(k).and_then(|c| c[0].as_f64()).unwrap_or(0.0);
        let im = got.get(k).and_then(|c| c[1].as_f64()).unwrap_or(0.0);
        if (re - want.re).hypot(im - want.im) > 1e-9 * scale {
            return Err(format!("coefficient {k}: [{re}, {im}] vs exact {want}"));
        }
    }
    if got.len() > exact.coefficients().len() {
        return Err("extra coefficients".into());
    }
    Ok(())
}

fn detpoly_wrong_fix_count() -> Result<(), String> {
    let run = matpoly(&["detpoly", &g("circle.json"), "--fix", "1,2"])?;
    expect_code(&run, 1, "too many fixed values")?;
    let run = matpoly(&["detpoly", &g("circle.json")])?;
    expect_code(&run, 1, "missing fixed values")
}

fn sample_circle() -> Result<(), String> {
    let run = matpoly(&[
        "sample-variety",
        &g("circle.json"),
        "--count",
        "4",
        "--seed",
        "2",
    ])?;
    expect_code(&run, 0, "sample circle")?;
    let doc = parse(&run.stdout)?;
    let points = doc["points"].as_array().ok_or("no points")?;
    if points.len() != 4 {
        return Err(format!("{} points", points.len()));
    }
    for p in points {
        let v = |s: usize, c: usize| p["values"][s][c].as_f64().unwrap_or(f64::NAN);
        let (a, m) = (
            num_complex::Complex::new(v(0, 0), v(0, 1)),
            num_complex::Complex::new(v(1, 0), v(1, 1)),
        );
        let gap = (a * a + m * m - 2.0).norm();
        if gap > 1e-10 {
            return Err(format!("point off the circle by {gap:e}"));
        }
    }
    Ok(())
}

fn sample_constant_nonsingular() -> Result<(), String> {
    let run = matpoly(&[
        "sample-variety",
        &g("constant_nonsingular.json"),
        "--count",
        "3",
        "--seed",
        "1",
    ])?;
    expect_code(&run, 2, "empty variety")
}

fn sample_planted_grid_point() -> Result<(), String> {
    let dir = tempdir()?;
    let eq = dir.path().join("eq.json");
    let eq = eq.to_string_lossy();
    let run = matpoly(&[
        "plant",
        "--dimension",
        "2",
        "--arity",
        "2",
        "--degree",
        "2",
        "--orientation",
        "right",
        "--seed",
        "11",
        "--eigenvalues",
        "1,2;3,4",
        "-o",
        &eq,
    ])?;
    expect_code(&run, 0, "plant")?;
    let run = matpoly(&[
        "sample-variety",
        &eq,
        "--count",
        "8",
        "--seed",
        "0",
        "--strategy",
        "grid",
    ])?;
    expect_code(&run, 0, "sample grid")?;
    let doc = parse(&run.stdout)?;
    let hit = doc["points"]
        .as_array()
        .ok_or("no points")?
        .iter()
        .any(|p| {
            let v = |s: usize, c: usize| p["values"][s][c].as_f64().unwrap_or(f64::NAN);
            (v(0, 0) - 1.0).abs() < 1e-9
                && v(0, 1).abs() < 1e-9
                && (v(1, 0) - 3.0).abs() < 1e-9
                && v(1, 1).abs() < 1e-9
        });
    if hit {
        Ok(())
    } else {
        Err("point (1, 3) missing from the grid sample".into())
    }
}

fn verify_nonsolution() -> Result<(), String> {
    let run = matpoly(&["verify", &g("identity_roots.json"), &g("two_identity.json")])?;
    expect_code(&run, 3, "verify 2I")?;
    if run.stdout.contains("residual") {
        Ok(())
    } else {
        Err("residual not printed".into())
    }
}

fn verify_dimension_mismatch() -> Result<(), String> {
    let run = matpoly(&[
        "verify",
        &g("identity_roots.json"),
        &g("wrong_dimension.json"),
    ])?;
    expect_code(&run, 1, "verify mismatched dimension")
}

fn plant_solve_verify() -> Result<(), String> {
    let dir = tempdir()?;
    let cases = [
        ("1", "1", "2", "left"),
        ("2", "1", "2", "right"),
        ("3", "1", "3", "left"),
        ("2", "2", "2", "right"),
        ("2", "2", "1", "left"),
        ("3", "2", "2", "left"),
        ("2", "3", "2", "right"),
        ("4", "2", "3", "right"),
    ];
    for (i, (n, m, d, o)) in cases.iter().enumerate() {
        let eq = dir.path().join(format!("eq{i}.json"));
        let truth = dir.path().join(format!("truth{i}.json"));
        let sol = dir.path().join(format!("sol{i}.json"));
        let (eq, truth, sol) = (
            eq.to_string_lossy(),
            truth.to_string_lossy(),
            sol.to_string_lossy(),
        );
        let seed = (20 + i).to_string();
        let plant = matpoly(&[
            "plant",
            "--dimension",
            n,
            "--arity",
            m,
            "--degree",
            d,
            "--orientation",
            o,
            "--seed",
            &seed,
            "-o",
            &eq,
            "--truth",
            &truth,
        ])?;
        expect_code(&plant, 0, &format!("plant case {i}"))?;
        expect_code(
            &matpoly(&["verify", &eq, &truth])?,
            0,
            &format!("verify truth case {i}"),
        )?;
        let solve = matpoly(&["--threads", "2", "solve", &eq, "--seed", &seed, "-o", &sol])?;
        expect_code(&solve, 0, &format!("solve case {i}"))?;
        expect_code(
            &matpoly(&["verify", &eq, &sol])?,
            0,
            &format!("verify solution case {i}"),
        )?;
    }
    Ok(())
}

fn matrices(doc: &Value) -> Vec<num_complex::Complex<f64>> {
    doc.as_array()
        .into_iter()
        .flatten()
        .flat_map(|row| row.as_array().cloned().unwrap_or_default())
        .map(|z| {
            num_complex::Complex::new(
                z[0].as_f64().unwrap_or(f64::NAN),
                z[1].as_f64().unwrap_or(f64::NAN),
            )
        })
        .collect()
}

fn plant_univariate_recovers_truth() -> Result<(), String> {
    let dir = tempdir()?;
    let eq = dir.path().join("eq.json");
    let truth = dir.path().join("truth.json");
    let (eq_s, truth_s) = (eq.to_string_lossy(), truth.to_string_lossy());
    let plant = matpoly(&[
        "plant",
        "--dimension",
        "3",
        "--arity",
        "1",
        "--degree",
        "2",
        "--orientation",
        "left",
        "--seed",
        "7",
        "-o",
        &eq_s,
        "--truth",
        &truth_s,
    ])?;
    expect_code(&plant, 0, "plant")?;
    let run = matpoly(&["solve", &eq_s])?;
    expect_code(&run, 0, "solve")?;
    let want = matrices(&parse(&read(&truth)?)?["families"][0]["unknowns"][0]);
    let norm: f64 = want.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let doc = parse(&run.stdout)?;
    let found = doc["families"]
        .as_array()
        .ok_or("no families")?
        .iter()
        .any(|f| {
            let got = matrices(&f["unknowns"][0]);
            let gap: f64 = got
                .iter()
                .zip(&want)
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            gap <= 1e-6 * norm
        });
    if found {
        Ok(())
    } else {
        Err("no family reproduces the planted unknown".into())
    }
}

fn plant_sandwich_verify() -> Result<(), String> {
    let dir = tempdir()?;
    let eq = dir.path().join("eq.json");
    let truth = dir.path().join("truth.json");
    let (eq, truth) = (eq.to_string_lossy(), truth.to_string_lossy());
    let plant = matpoly(&[
        "plant",
        "--dimension",
        "2",
        "--arity",
        "2",
        "--degree",
        "2",
        "--orientation",
        "sandwich",
        "--seed",
        "3",
        "-o",
        &eq,
        "--truth",
        &truth,
    ])?;
    expect_code(&plant, 0, "plant sandwich")?;
    let doc = parse(&read(Path::new(&*eq))?)?;
    for slot in ["A", "B", "C", "D", "E", "F"] {
        if doc["sandwich_slots"][slot].is_null() {
            return Err(format!("slot {slot} missing"));
        }
    }
    let run = matpoly(&["verify", &eq, &truth])?;
    expect_code(&run, 0, "verify sandwich")?;
    let pairs: Vec<&str> = run
        .stdout
        .lines()
        .filter(|l| l.trim_start().starts_with("pair"))
        .collect();
    if pairs.len() != 2 {
        return Err(format!("expected 2 probe lines:\n{}", run.stdout));
    }
    for line in pairs {
        let rel: f64 = line
            .split("relative ")
            .nth(1)
            .and_then(|s| s.split_whitespace().next())
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| format!("cannot read probe line {line}"))?;
        if rel > 1e-9 {
            return Err(format!("scalar identity {rel:e} in {line}"));
        }
    }
    Ok(())
}

fn plant_scalar_pair() -> Result<(), String> {
    let dir = tempdir()?;
    let eq = dir.path().join("eq.json");
    let truth = dir.path().join("truth.json");
    let plant = matpoly(&[
        "plant",
        "--dimension",
        "1",
        "--arity",
        "1",
        "--degree",
        "2",
        "--orientation",
        "left",
        "--seed",
        "0",
        "-o",
        &eq.to_string_lossy(),
        "--truth",
        &truth.to_string_lossy(),
    ])?;
    expect_code(&plant, 0, "plant scalar")?;
    let doc = parse(&read(&eq)?)?;
    let x = matrices(&parse(&read(&truth)?)?["families"][0]["unknowns"][0])[0];
    let mut value = num_complex::Complex::new(0.0, 0.0);
    let mut size = 0.0;
    for term in doc["terms"].as_array().ok_or("no terms")? {
        let k = term["exponents"][0].as_u64().ok_or("bad exponent")? as i32;
        let c = matrices(&term["coefficient"])[0];
        value += c * x.powi(k);
        size += c.norm() * x.norm().powi(k);
    }
    if value.norm() <= 1e-12 * size {
        Ok(())
    } else {
        Err(format!("planted root leaves {value}"))
    }
}

fn plant_invalid_flags() -> Result<(), String> {
    let run = matpoly(&[
        "plant",
        "--dimension",
        "2",
        "--arity",
        "3",
        "--degree",
        "2",
        "--orientation",
        "sandwich",
        "--seed",
        "1",
    ])?;
    expect_code(&run, 1, "sandwich with three unknowns")?;
    let run = matpoly(&[
        "plant",
        "--dimension",
        "0",
        "--arity",
        "1",
        "--degree",
        "2",
        "--orientation",
        "left",
        "--seed",
        "1",
    ])?;
    expect_code(&run, 1, "zero dimension")?;
    let run = matpoly(&[
        "plant",
        "--dimension",
        "2",
        "--arity",
        "1",
        "--degree",
        "2",
        "--orientation",
        "diagonal",
        "--seed",
        "1",
    ])?;
    expect_code(&run, 1, "unknown orientation")
}

fn usage_errors() -> Result<(), String> {
    expect_code(&matpoly(&["frobnicate"])?, 1, "unknown subcommand")?;
    expect_code(
        &matpoly(&["sample-variety", &g("circle.json"), "--count", "4"])?,
        1,
        "sample without seed",
    )?;
    expect_code(
        &matpoly(&["solve", &g("circle.json")])?,
        1,
        "multivariate solve without seed",
    )?;
    expect_code(
        &matpoly(&["solve", "/nonexistent/eq.json"])?,
        1,
        "missing file",
    )?;
    expect_code(&matpoly(&["--help"])?, 0, "help")
}

fn equation_round_trip() -> Result<(), String> {
    let dir = tempdir()?;
    let eq = dir.path().join("eq.json");
    let run = matpoly(&[
        "plant",
        "--dimension",
        "2",
        "--arity",
        "2",
        "--degree",
        "2",
        "--orientation",
        "left",
        "--seed",
        "5",
        "-o",
        &eq.to_string_lossy(),
    ])?;
    expect_code(&run, 0, "plant")?;
    let text = read(&eq)?;
    let doc: EquationDocument = from_json(&text)?;
    let again = to_json(&doc);
    if again != text {
        return Err("serialization is not stable".into());
    }
    let back: EquationDocument = from_json(&again)?;
    if back == doc {
        Ok(())
    } else {
        Err("document changed after a round trip".into())
    }
}
