use std::fs;
use std::path::Path;

use super::document::{
    complex_doc, from_json, matrix_doc, to_json, DetPolyDocument, EquationDocument, FamilyDocument,
    PointDocument, RootDocument, SolutionDocument, VarietyDocument,
};
use super::{CliError, DetpolyArgs, PlantArgs, SampleArgs, SolveArgs, VerifyArgs};
use crate::error::Error;
use crate::instances::Planter;
use crate::numeric::{condition, inverse, C64};
use crate::polymatrix::{self, det_poly_univariate, poly_roots};
use crate::solver::{
    commutation_check, sandwich_probe, solve as run_solver, verify_residual, Diagnostic, Failure,
    Orientation, Solutions, SolverConfig, StructuredEquation,
};

type CmdResult = Result<(), CliError>;

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

fn load_equation(path: &Path) -> Result<StructuredEquation, CliError> {
    let doc: EquationDocument =
        from_json(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    doc.to_equation()
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn emit(text: &str, output: Option<&Path>) -> CmdResult {
    match output {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_complex_list(text: &str, flag: &str) -> Result<Vec<C64>, CliError> {
    text.split(',')
        .map(|s| {
            s.trim().parse::<C64>().map_err(|_| {
                CliError::Input(format!(
                    "{flag}: cannot parse '{}' as a complex number",
                    s.trim()
                ))
            })
        })
        .collect()
}

fn fmt_c(z: C64) -> String {
    format!("{:.6e}{:+.6e}i", z.re, z.im)
}

pub fn solve(args: &SolveArgs) -> CmdResult {
    let eq = load_equation(&args.input)?;
    if eq.orientation() == Orientation::SandwichBivariate {
        return Err(CliError::Input(
            "sandwich equations have no constructive solver; check candidates with verify".into(),
        ));
    }
    if eq.arity() >= 2 && args.seed.is_none() {
        return Err(CliError::Input(
            "--seed is required for equations with two or more unknowns".into(),
        ));
    }
    let cfg = SolverConfig {
        tol_rank: args.tol_rank,
        tol_residual: args.tol_residual,
        max_classes: args.max_classes,
        sample_count: args.samples,
        seed: args.seed.unwrap_or(0),
        strategy: args.strategy,
        ..SolverConfig::default()
    };
    let solutions = match run_solver(&eq, &cfg) {
        Ok(s) => s,
        Err(Error::InsufficientRoots { needed, available }) => Solutions {
            families: Vec::new(),
            diagnostics: vec![Diagnostic {
                label: "eigenvalue pool".into(),
                failure: Failure::InsufficientRoots { available, needed },
            }],
        },
        Err(e) => return Err(e.into()),
    };
    emit(
        &to_json(&SolutionDocument::from_solutions(&solutions)),
        args.output.as_deref(),
    )?;
    match solutions.first() {
        Ok(_) => Ok(()),
        Err(e) => Err(CliError::NoResult(format!(
            "no solution family found ({e}); diagnostics were written"
        ))),
    }
}

pub fn verify(args: &VerifyArgs) -> CmdResult {
    let eq = load_equation(&args.equation)?;
    let doc: SolutionDocument = from_json(&read(&args.solutions)?)
        .map_err(|e| CliError::Input(format!("{}: {e}", args.solutions.display())))?;
    if doc.families.is_empty() {
        return Err(CliError::NoResult(
            "solution document has no families".into(),
        ));
    }
    let mut failed = 0;
    for (i, family) in doc.families.iter().enumerate() {
        let unknowns = family
            .unknowns(eq.dim(), eq.arity(), &format!("families[{i}]"))
            .map_err(|e| CliError::Input(format!("{}: {e}", args.solutions.display())))?;
        let residual = verify_residual(&eq, &unknowns)?;
        let ok = residual <= args.tol;
        if !ok {
            failed += 1;
        }
        let mut line = format!(
            "family {i}: residual {residual:.3e} (recorded {:.3e})",
            family.residual
        );
        if eq.arity() >= 2 {
            line += &format!(" commutation {:.3e}", commutation_check(&unknowns));
        }
        line += if ok { " PASS" } else { " FAIL" };
        println!("{line}");
        if eq.orientation() == Orientation::SandwichBivariate {
            match sandwich_probe(&eq, &unknowns[0], &unknowns[1]) {
                Ok(report) => {
                    for (k, e) in report.entries.iter().enumerate() {
                        println!(
                            "  pair {k}: alpha {} mu {} scalar identity {:.3e} relative {:.3e} |det P| {:.3e}",
                            fmt_c(e.alpha),
                            fmt_c(e.mu),
                            e.scalar_identity.norm(),
                            e.relative_identity,
                            e.det_abs
                        );
                    }
                }
                Err(e) => println!("  probe unavailable: {e}"),
            }
        }
    }
    if failed > 0 {
        return Err(CliError::Verification(format!(
            "{failed} of {} families exceed residual tolerance {:e}",
            doc.families.len(),
            args.tol
        )));
    }
    Ok(())
}

pub fn detpoly(args: &DetpolyArgs) -> CmdResult {
    let eq = load_equation(&args.input)?;
    let m = eq.arity();
    if args.pivot >= m {
        return Err(CliError::Input(format!(
            "--pivot {} out of range for {m} unknowns",
            args.pivot
        )));
    }
    let fixed = match &args.fix {
        Some(text) if !text.trim().is_empty() => parse_complex_list(text, "--fix")?,
        _ => Vec::new(),
    };
    if fixed.len() + 1 != m {
        return Err(CliError::Input(format!(
            "--fix: expected {} values, got {}",
            m - 1,
            fixed.len()
        )));
    }
    let slice = if m == 1 {
        eq.poly().clone()
    } else {
        eq.poly().fix_all_but(args.pivot, &fixed)?
    };
    let det = det_poly_univariate(&slice)?;
    let roots = match poly_roots(&det) {
        Ok(r) => r,
        Err(Error::DegreeZero) => Vec::new(),
        Err(e) => return Err(e.into()),
    };
    let doc = DetPolyDocument {
        coefficients: det.coefficients().iter().map(|z| complex_doc(*z)).collect(),
        roots: roots
            .iter()
            .map(|r| RootDocument {
                value: complex_doc(r.value),
                multiplicity: r.multiplicity,
            })
            .collect(),
    };
    emit(&to_json(&doc), None)
}

pub fn sample_variety(args: &SampleArgs) -> CmdResult {
    let eq = load_equation(&args.input)?;
    if eq.arity() < 2 {
        return Err(CliError::Input(
            "sample-variety needs an equation with two or more unknowns".into(),
        ));
    }
    let side = match (args.side, eq.orientation().null_side()) {
        (Some(s), _) | (None, Some(s)) => s,
        (None, None) => {
            return Err(CliError::Input(
                "--side is required for sandwich equations".into(),
            ))
        }
    };
    let points = polymatrix::sample_variety(eq.poly(), side, args.count, args.seed, args.strategy)?;
    let doc = VarietyDocument {
        points: points.iter().map(PointDocument::from_point).collect(),
    };
    emit(&to_json(&doc), args.output.as_deref())
}

pub fn plant(args: &PlantArgs) -> CmdResult {
    let mut planter = Planter::new(
        args.dimension,
        args.arity,
        args.degree,
        args.orientation,
        args.seed,
    );
    if let Some(text) = &args.eigenvalues {
        let lists = text
            .split(';')
            .map(|part| parse_complex_list(part, "--eigenvalues"))
            .collect::<Result<Vec<_>, _>>()?;
        planter = planter.with_eigenvalues(lists);
    }
    let inst = planter.plant()?;
    let eq = &inst.equation;
    emit(
        &to_json(&EquationDocument::from_equation(eq)),
        args.output.as_deref(),
    )?;
    if let Some(path) = &args.truth {
        let t = &inst.truth_transform;
        let transform = if eq.orientation() == Orientation::UnknownsLeft {
            inverse(t)?.0
        } else {
            t.clone()
        };
        let family = FamilyDocument {
            eigenvalues: inst
                .truth_eigenvalues
                .iter()
                .map(|f| f.iter().map(|z| complex_doc(*z)).collect())
                .collect(),
            transform: matrix_doc(&transform),
            unknowns: inst.truth_unknowns.iter().map(matrix_doc).collect(),
            residual: verify_residual(eq, &inst.truth_unknowns)?,
            transform_condition: condition(t),
        };
        let doc = SolutionDocument {
            families: vec![family],
            diagnostics: Vec::new(),
        };
        emit(&to_json(&doc), Some(path))?;
    }
    Ok(())
}
