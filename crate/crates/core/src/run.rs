//! Command drivers: each takes an assembled problem and produces the report
//! document both the CLI and the C interface emit.
//!
//! Binding checks decide the exit verdict; advisory checks record hypothesis
//! tests, warnings, and residuals whose premises do not hold for the input.

use nalgebra::DVector;

use crate::contact::{
    center_constraint_grids, classify, cosymplectic_bracket_grids, validate_almost_contact,
    StructureClass,
};
use crate::document::{DocumentError, Problem, ReportDocument, Section, Value};
use crate::lie::{Nilpotency, NonsingularVerdict};
use crate::report::{CheckReport, DEFAULT_TOLERANCE};
use crate::subalgebra::{SlantVerdict, Subalgebra};

#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    pub tolerance: f64,
    pub samples: u32,
    pub seed: u64,
    pub normalize: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            tolerance: DEFAULT_TOLERANCE,
            samples: 64,
            seed: 0,
            normalize: true,
        }
    }
}

fn prepare(problem: &Problem, opts: &RunOptions) -> Problem {
    if opts.normalize {
        problem.normalized()
    } else {
        problem.clone()
    }
}

fn algebra_section(problem: &Problem, tol: f64) -> Section {
    let mut section = Section::new("algebra");
    let algebra = problem.metric.algebra();
    section.fact("dim", Value::Int(algebra.dim() as i64));
    section.fact("labels", Value::Text(algebra.labels().join(" ")));
    let mut checks = CheckReport::new(tol);
    checks.push("jacobi", algebra.jacobi_residual());
    section.checks = checks.checks;
    section
}

fn structure_sections(problem: &Problem, tol: f64) -> Vec<Section> {
    let mut sections = Vec::new();
    for (name, s) in &problem.structures {
        let mut section = Section::new(format!("structure:{name}"));
        match validate_almost_contact(&problem.metric, s, tol) {
            Ok(report) => {
                section.notes = report.notes.clone();
                section.checks = report.checks;
            }
            Err(e) => section.notes.push(e.to_string()),
        }
        sections.push(section);
    }
    sections
}

/// Axioms and the Jacobi identity; exit 0 iff everything binding passes.
pub fn run_validate(problem: &Problem, opts: &RunOptions) -> ReportDocument {
    let p = prepare(problem, opts);
    let mut report = ReportDocument::new("validate", &p, opts.tolerance);
    report.sections.push(algebra_section(&p, opts.tolerance));
    report
        .sections
        .extend(structure_sections(&p, opts.tolerance));
    if p.structures.is_empty() {
        report.sections[0]
            .notes
            .push("no structures supplied; only algebra-level checks ran".to_string());
    }
    report
}

/// Nilpotency series, center, 2-step flag, nonsingularity verdict.
pub fn run_classify(problem: &Problem, opts: &RunOptions) -> ReportDocument {
    let p = prepare(problem, opts);
    let mut report = ReportDocument::new("classify", &p, opts.tolerance);
    report.samples = Some(opts.samples);
    report.seed = Some(opts.seed);

    let mut section = algebra_section(&p, opts.tolerance);
    let algebra = p.metric.algebra();
    let series = algebra.lower_central_series();
    section.fact(
        "lower_central_series_dims",
        Value::IntList(series.iter().map(|s| s.dim() as i64).collect()),
    );
    match algebra.nilpotency_class() {
        Nilpotency::Class(k) => section.fact("nilpotency_class", Value::Int(k as i64)),
        Nilpotency::NotNilpotent => {
            section.fact("nilpotency_class", Value::Text("not_nilpotent".into()))
        }
    }
    let two_step = algebra.is_two_step();
    section.fact("two_step", Value::Bool(two_step));

    let center = algebra.center();
    section.fact("center_dim", Value::Int(center.dim() as i64));
    section.fact(
        "center_basis",
        Value::Table(
            (0..center.dim())
                .map(|c| center.basis().column(c).iter().copied().collect())
                .collect(),
        ),
    );

    if two_step {
        match algebra.is_nonsingular(&p.metric, opts.samples, opts.seed) {
            Ok(NonsingularVerdict::Nonsingular) => {
                section.fact("nonsingular", Value::Text("nonsingular".into()))
            }
            Ok(NonsingularVerdict::ProbablyNonsingular) => {
                section.fact("nonsingular", Value::Text("probably_nonsingular".into()))
            }
            Ok(NonsingularVerdict::SingularWitness(x)) => {
                section.fact("nonsingular", Value::Text("singular".into()));
                section.fact(
                    "singular_witness",
                    Value::RealList(x.iter().copied().collect()),
                );
            }
            Err(e) => section.notes.push(e.to_string()),
        }
    } else {
        section.fact("nonsingular", Value::Text("not_applicable".into()));
        section
            .notes
            .push("nonsingularity is defined for 2-step algebras only".to_string());
    }
    report.sections.push(section);
    report
}

/// Structure classification plus the bracket-level consequence grids.
pub fn run_contact(problem: &Problem, opts: &RunOptions) -> ReportDocument {
    let p = prepare(problem, opts);
    let mut report = ReportDocument::new("contact", &p, opts.tolerance);
    report.sections.push(algebra_section(&p, opts.tolerance));

    if p.structures.is_empty() {
        let mut section = Section::new("contact");
        section.fact("verdict", Value::Text("no_structure".into()));
        section
            .notes
            .push("no almost contact structure supplied; contact checks skipped".to_string());
        report.sections.push(section);
        return report;
    }

    let two_step = p.metric.algebra().is_two_step();
    for (name, s) in &p.structures {
        let mut section = Section::new(format!("structure:{name}"));
        let validation = match validate_almost_contact(&p.metric, s, opts.tolerance) {
            Ok(v) => v,
            Err(e) => {
                section.notes.push(e.to_string());
                report.sections.push(section);
                continue;
            }
        };
        let valid = validation.all_pass();
        section.notes.extend(validation.notes.clone());
        section.checks.extend(validation.checks.clone());

        let verdict = if valid {
            match classify(&p.metric, s, opts.tolerance) {
                Ok(c) => {
                    section.fact("verdict", Value::Text(c.class.to_string()));
                    section.fact(
                        "cosymplectic_residual",
                        Value::Real(c.cosymplectic_residual),
                    );
                    section.fact("sasakian_residual", Value::Real(c.sasakian_residual));
                    section.notes.extend(c.report.notes.clone());
                    section.checks.extend(c.report.checks);
                    Some(c.class)
                }
                Err(e) => {
                    section.notes.push(e.to_string());
                    None
                }
            }
        } else {
            section.fact("verdict", Value::Text("invalid_structure".into()));
            section
                .notes
                .push("axioms fail; classification skipped".to_string());
            None
        };

        // Bracket consequences of the cosymplectic condition: binding only
        // when the verdict actually is cosymplectic.
        if let Ok(mut grids) = cosymplectic_bracket_grids(&p.metric, s, opts.tolerance) {
            let binding = verdict == Some(StructureClass::Cosymplectic);
            if !binding {
                for c in &mut grids.checks {
                    c.advisory = true;
                }
                grids
                    .notes
                    .push("structure is not cosymplectic; grids are diagnostics".to_string());
            }
            section.checks.extend(grids.checks);
            section.notes.extend(grids.notes);
        }

        // Center constraints: the 2-step hypothesis gates whether the
        // skew-ad-implied checks can bind at all.
        if let Ok(mut grids) = center_constraint_grids(&p.metric, s, opts.tolerance) {
            if !two_step {
                for c in &mut grids.checks {
                    c.advisory = true;
                }
                grids
                    .notes
                    .push("algebra is not 2-step; center constraints are diagnostics".to_string());
            }
            section.checks.extend(grids.checks);
            section.notes.extend(grids.notes);
        }
        report.sections.push(section);
    }
    report
}

/// The full connection table with its torsion/compatibility residuals and
/// the 2-step half-bracket identity.
pub fn run_connection(problem: &Problem, opts: &RunOptions) -> ReportDocument {
    let p = prepare(problem, opts);
    let mut report = ReportDocument::new("connection", &p, opts.tolerance);
    report.sections.push(algebra_section(&p, opts.tolerance));

    let mut section = Section::new("connection");
    let table = p.metric.levi_civita();
    let n = p.metric.dim();
    for i in 0..n {
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|j| (0..n).map(|k| table.coefficient(i, j, k)).collect())
            .collect();
        section.fact(
            format!("gamma[{}]", p.metric.algebra().label(i)),
            Value::Table(rows),
        );
    }
    let mut checks = CheckReport::new(opts.tolerance);
    checks.push("torsion", table.torsion_residual(p.metric.algebra()));
    checks.push(
        "metric_compatibility",
        table.compatibility_residual(&p.metric),
    );
    let two_step = p.metric.algebra().is_two_step();
    section.fact("two_step", Value::Bool(two_step));
    let (half, witness) = p.metric.half_bracket_residual();
    checks.push_item("half_bracket", half, witness, !two_step);
    if !two_step {
        section.notes.push(
            "algebra is not 2-step; the half-bracket identity is reported as a diagnostic"
                .to_string(),
        );
    }
    section.checks = checks.checks;
    report.sections.push(section);
    report
}

/// Subalgebra geometry: closure, Gauss/Weingarten duality, the φ-splitting
/// operators, Q spectrum, and slant verdicts.
pub fn run_subalgebra(
    problem: &Problem,
    name_filter: Option<&str>,
    opts: &RunOptions,
) -> Result<ReportDocument, DocumentError> {
    let p = prepare(problem, opts);
    let mut report = ReportDocument::new("subalg", &p, opts.tolerance);
    report.samples = Some(opts.samples);
    report.seed = Some(opts.seed);
    report.sections.push(algebra_section(&p, opts.tolerance));

    let selected: Vec<&(String, nalgebra::DMatrix<f64>)> = match name_filter {
        Some(name) => {
            let found: Vec<_> = p
                .subalgebras
                .iter()
                .filter(|(sname, _)| sname == name)
                .collect();
            if found.is_empty() {
                return Err(DocumentError::Schema(format!(
                    "no subalgebra named {name:?} in the input"
                )));
            }
            found
        }
        None => p.subalgebras.iter().collect(),
    };
    if selected.is_empty() {
        report.sections[0]
            .notes
            .push("no subalgebras supplied".to_string());
    }

    let structure = p.structures.first().map(|(_, s)| s);
    for (name, raw) in selected {
        let mut section = Section::new(format!("subalgebra:{name}"));
        let sub = match Subalgebra::spanning(&p.metric, structure, raw) {
            Ok(sub) => sub,
            Err(e) => {
                section.notes.push(e.to_string());
                report.sections.push(section);
                continue;
            }
        };
        section.fact("dim", Value::Int(sub.dim() as i64));
        section.fact("codim", Value::Int(sub.codim() as i64));
        section.fact("closed", Value::Bool(sub.is_closed(opts.tolerance)));

        let mut checks = CheckReport::new(opts.tolerance);
        let witness = sub
            .closure_witness()
            .map(|(i, j)| format!("column pair ({i},{j})"));
        checks.push_advisory("closure", sub.closure_residual(), witness);
        if !sub.is_closed(opts.tolerance) {
            section
                .notes
                .push("subspace is not closed under the bracket".to_string());
        }

        checks.push("duality", sub.duality_residual());

        // Second fundamental form on basis pairs.
        for a in 0..sub.dim() {
            for b in a..sub.dim() {
                let x: DVector<f64> = sub.basis().column(a).into_owned();
                let y: DVector<f64> = sub.basis().column(b).into_owned();
                if let Ok((_, h)) = sub.gauss_decompose(&x, &y, 1e-6) {
                    section.fact(
                        format!("second_form[{a},{b}]"),
                        Value::RealList(h.iter().copied().collect()),
                    );
                }
            }
        }

        if let Some(structure) = structure {
            let xi = &structure.xi;
            let (xi_t, xi_n) = sub.project(xi).expect("dimensions match");
            section.fact("xi_tangent_norm", Value::Real(p.metric.norm(&xi_t)));
            section.fact("xi_normal_norm", Value::Real(p.metric.norm(&xi_n)));

            let psi = sub.psi_matrix().expect("structure present");
            checks.push(
                "psi_skewness",
                crate::linalg::inf_norm_mat(&(&psi + psi.transpose())),
            );
            match sub.q_operator() {
                Ok(spec) => {
                    section.fact("q_eigenvalues", Value::RealList(spec.eigenvalues.clone()));
                    let q_checks = sub.q_report(opts.tolerance).expect("structure present");
                    checks.checks.extend(q_checks.checks);
                }
                Err(e) => section.notes.push(e.to_string()),
            }
            match sub.is_slant(opts.samples, opts.seed, opts.tolerance) {
                Ok(SlantVerdict::Slant(theta)) => {
                    section.fact("slant", Value::Text("slant".into()));
                    section.fact("slant_angle", Value::Real(theta));
                }
                Ok(SlantVerdict::NotSlant { first, second }) => {
                    section.fact("slant", Value::Text("not_slant".into()));
                    section.fact(
                        "not_slant_witness_a",
                        Value::RealList(first.iter().copied().collect()),
                    );
                    section.fact(
                        "not_slant_witness_b",
                        Value::RealList(second.iter().copied().collect()),
                    );
                }
                Ok(SlantVerdict::DegenerateAllUndefined) => {
                    section.fact("slant", Value::Text("degenerate_all_undefined".into()));
                }
                Err(e) => section.notes.push(e.to_string()),
            }
        } else {
            section
                .notes
                .push("no structure supplied; phi-splitting checks skipped".to_string());
        }

        section.checks = checks.checks;
        report.sections.push(section);
    }
    Ok(report)
}
