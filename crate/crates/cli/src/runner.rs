//! Task execution and report assembly. Each task produces one JSON object
//! with lexicographically ordered keys (the serde_json map is a BTreeMap),
//! so reports are byte-identical across runs and worker counts.

use std::sync::Arc;

use serde_json::{json, Value};

use cocycle_core::h2::AbelianH2Class;
use cocycle_core::obstruction::{LiftGranularity, ObstructionReport};
use cocycle_core::{
    abelian_cohomology, canonical_form, check_exactness, check_square, delta, find_lifts,
    gerbe_class, h1_classes, nonabelian_h2_classes, nu, obstruction_report, pushforward,
    solve_coboundary_realization, AbelianCoeff, AbelianH2Context, Budget, Error, ExtensionData,
    Nerve, OneCochain, TwoCochain,
};

use crate::config::{
    CoeffSpec, ComplexRef, Diagnostic, ExpectValue, GranularitySpec, Sel1, Sel2, TaskDef, TaskSpec,
};
use crate::resolve::ResolvedConfig;

/// Options shared by every task in a run.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub seed_complex: Option<String>,
    /// Overrides the config's lift granularity default.
    pub granularity: Option<GranularitySpec>,
}

/// One executed task: the emitted report and its verdict.
pub struct TaskOutcome {
    pub report: Value,
    pub ok: bool,
    pub resource_error: bool,
}

/// Exit codes: 0 success, 2 config error, 3 resource budget, 4 verdict
/// failure.
pub fn exit_code(outcomes: &[TaskOutcome]) -> i32 {
    if outcomes.iter().any(|o| o.resource_error) {
        3
    } else if outcomes.iter().any(|o| !o.ok) {
        4
    } else {
        0
    }
}

pub fn run_tasks(
    resolved: &ResolvedConfig,
    tasks: &[TaskDef],
    options: &RunOptions,
) -> Vec<TaskOutcome> {
    tasks
        .iter()
        .map(|task| run_one(resolved, task, options))
        .collect()
}

fn run_one(resolved: &ResolvedConfig, task: &TaskDef, options: &RunOptions) -> TaskOutcome {
    match execute(resolved, &task.spec, options) {
        Ok((result, verdict_ok)) => {
            let expects_ok = check_expects(&result, &task.expects);
            let ok = verdict_ok && expects_ok;
            let report = json!({
                "task": task.spec.name(),
                "args": crate::report::task_args_json(&task.spec),
                "result": result,
                "ok": ok,
            });
            TaskOutcome {
                report,
                ok,
                resource_error: false,
            }
        }
        Err(err) => {
            let resource = matches!(err, RunError::Core(Error::Resource { .. }));
            let report = json!({
                "task": task.spec.name(),
                "args": crate::report::task_args_json(&task.spec),
                "error": err.to_string(),
                "ok": false,
            });
            TaskOutcome {
                report,
                ok: false,
                resource_error: resource,
            }
        }
    }
}

#[derive(Debug)]
pub enum RunError {
    Core(Error),
    Config(Diagnostic),
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Core(e) => write!(f, "{e}"),
            RunError::Config(d) => write!(f, "{d}"),
        }
    }
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        RunError::Core(e)
    }
}

impl From<Diagnostic> for RunError {
    fn from(d: Diagnostic) -> Self {
        RunError::Config(d)
    }
}

fn check_expects(result: &Value, expects: &[(String, ExpectValue)]) -> bool {
    expects.iter().all(|(field, want)| {
        let got = result.get(field);
        match (got, want) {
            (Some(Value::Number(n)), ExpectValue::Int(w)) => n.as_u64() == Some(*w),
            (Some(Value::Bool(b)), ExpectValue::Bool(w)) => b == w,
            (Some(Value::String(s)), ExpectValue::Str(w)) => s == w,
            _ => false,
        }
    })
}

fn resolve_complex(
    resolved: &ResolvedConfig,
    r: &ComplexRef,
    options: &RunOptions,
) -> Result<Arc<Nerve>, Diagnostic> {
    resolved.complex(r, options.seed_complex.as_deref())
}

/// Select the input 1-cochain over Q for obstruction-side tasks.
fn select_cochain(
    resolved: &ResolvedConfig,
    sel: &Sel1,
    nerve: &Arc<Nerve>,
    ext: &ExtensionData,
    budget: &Budget,
) -> Result<OneCochain, RunError> {
    match sel {
        Sel1::Trivial => Ok(OneCochain::trivial(nerve, ext.q())),
        Sel1::Generator => {
            let classes = h1_classes(nerve, ext.q(), budget)?;
            if classes.len() != 2 {
                return Err(RunError::Config(Diagnostic::new(
                    "E-TASK",
                    format!(
                        "`generator` needs exactly two classes, found {}; use `class <k>`",
                        classes.len()
                    ),
                    (0, 0),
                )));
            }
            Ok(classes.reps()[1].clone())
        }
        Sel1::Class(k) => {
            let classes = h1_classes(nerve, ext.q(), budget)?;
            if *k >= classes.len() {
                return Err(RunError::Config(Diagnostic::new(
                    "E-TASK",
                    format!("class index {k} out of range ({} classes)", classes.len()),
                    (0, 0),
                )));
            }
            Ok(classes.reps()[*k].clone())
        }
        Sel1::Named(name) => Ok(resolved.cochain(name)?),
    }
}

/// Select the input 2-cocycle over G' for realization tasks.
fn select_cochain2(
    resolved: &ResolvedConfig,
    sel: &Sel2,
    nerve: &Arc<Nerve>,
    ext: &ExtensionData,
) -> Result<TwoCochain, RunError> {
    match sel {
        Sel2::Trivial => Ok(TwoCochain::trivial(nerve, ext.g_prime())),
        Sel2::Generator => {
            let ctx = AbelianH2Context::new(nerve, ext.g_prime())?;
            let order = ext.g_prime().order() as u16;
            let t = nerve.triangles().len();
            let mut values = vec![0u16; t];
            loop {
                let z = TwoCochain::from_values(nerve, ext.g_prime(), values.clone())?;
                if ctx.is_cocycle(&z)? && !ctx.class_of(&z)?.is_trivial() {
                    return Ok(z);
                }
                // Odometer, least significant last.
                let mut pos = t;
                loop {
                    if pos == 0 {
                        return Err(RunError::Config(Diagnostic::new(
                            "E-TASK",
                            "no nontrivial class exists in H2(X, G')",
                            (0, 0),
                        )));
                    }
                    pos -= 1;
                    values[pos] += 1;
                    if values[pos] < order {
                        break;
                    }
                    values[pos] = 0;
                }
            }
        }
        Sel2::Named(name) => Ok(resolved.cochain2(name)?),
    }
}

fn execute(
    resolved: &ResolvedConfig,
    spec: &TaskSpec,
    options: &RunOptions,
) -> Result<(Value, bool), RunError> {
    let budget = resolved.budget;
    match spec {
        TaskSpec::H1 { complex, group } => {
            let nerve = resolve_complex(resolved, complex, options)?;
            let g = resolved.group(group)?;
            let classes = h1_classes(&nerve, &g, &budget)?;
            Ok((crate::report::h1_classes_json(&classes), true))
        }
        TaskSpec::Abelian {
            complex,
            coeff,
            degree,
        } => {
            let nerve = resolve_complex(resolved, complex, options)?;
            let (coeff_core, coeff_name) = match coeff {
                CoeffSpec::Int => (AbelianCoeff::Int, "Z".to_string()),
                CoeffSpec::Mod(m) => (AbelianCoeff::Mod(*m), format!("Z_{m}")),
            };
            let h = abelian_cohomology(&nerve, coeff_core, *degree)?;
            let result = json!({
                "coefficients": coeff_name,
                "count": h.count,
                "degree": degree,
                "invariant_factors": h.invariant_factors,
            });
            Ok((result, true))
        }
        TaskSpec::H2nab { complex, ext } => {
            let nerve = resolve_complex(resolved, complex, options)?;
            let ext = resolved.extension(ext)?;
            let classes = nonabelian_h2_classes(&nerve, ext.xm(), &budget)?;
            Ok((crate::report::pair_classes_json(&classes), true))
        }
        TaskSpec::Nu { complex, ext, sel } => {
            let nerve = resolve_complex(resolved, complex, options)?;
            let ext = resolved.extension(ext)?;
            let q = select_cochain(resolved, sel, &nerve, &ext, &budget)?;
            let pair = nu(&q, &ext)?;
            let p_of_u = pushforward(ext.p(), pair.u())?;
            let result = json!({
                "input": crate::report::cochain_json(&q),
                "p_of_u_matches_input": p_of_u.values() == q.values(),
                "pair": crate::report::pair_json(&pair),
                "valid": cocycle_core::is_cocycle_pair(&pair),
            });
            let ok = cocycle_core::is_cocycle_pair(&pair);
            Ok((result, ok))
        }
        TaskSpec::Delta { complex, ext, sel } => {
            let nerve = resolve_complex(resolved, complex, options)?;
            let ext = resolved.extension(ext)?;
            let ctx = AbelianH2Context::new(&nerve, ext.g_prime())?;
            let q = select_cochain(resolved, sel, &nerve, &ext, &budget)?;
            let (class, _) = delta(&q, &ext, &ctx)?;
            let result = json!({
                "delta": delta_json(&class, &ctx),
                "input_class": crate::report::cochain_json(&canonical_form(&q)?),
                "trivial": class.is_trivial(),
            });
            Ok((result, true))
        }
        TaskSpec::Lift {
            complex,
            ext,
            sel,
            granularity,
        } => {
            let nerve = resolve_complex(resolved, complex, options)?;
            let ext = resolved.extension(ext)?;
            let q = select_cochain(resolved, sel, &nerve, &ext, &budget)?;
            let gran = match granularity.or(options.granularity) {
                Some(GranularitySpec::Cocycle) => LiftGranularity::Cocycle,
                _ => LiftGranularity::Class,
            };
            let lifts = find_lifts(&q, &ext, &budget, gran)?;
            let mut result = json!({
                "count": lifts.classes.len(),
                "classes": lifts.classes.iter().map(crate::report::cochain_json).collect::<Vec<_>>(),
                "granularity": if gran == LiftGranularity::Cocycle { "cocycle" } else { "class" },
                "input_class": crate::report::cochain_json(&canonical_form(&q)?),
                "stats": crate::report::stats_json(lifts.stats),
            });
            if let Some(raw) = &lifts.cocycles {
                result["cocycle_count"] = json!(raw.len());
            }
            Ok((result, true))
        }
        TaskSpec::Exactness { complex, ext } => {
            let nerve = resolve_complex(resolved, complex, options)?;
            let ext = resolved.extension(ext)?;
            let report = check_exactness(&nerve, &ext, &budget)?;
            let ok = report.passed();
            let result = json!({
                "central": report.central,
                "exact": report.c_exact,
                "im_p_star": report.im_p_star,
                "ker_delta": report.ker_delta,
                "ok": ok,
                "p_after_i_trivial": report.a_p_after_i_trivial,
                "q_class_count": report.q_class_count,
                "rows": report.rows.iter().map(|r| json!({
                    "delta_trivial": r.delta_trivial,
                    "lift_class_count": r.lift_class_count,
                    "q_class": r.q_class,
                })).collect::<Vec<_>>(),
                "stats": crate::report::stats_json(report.stats),
                "weak_inclusion": report.b_weak_inclusion,
            });
            Ok((result, ok))
        }
        TaskSpec::Square {
            complex,
            ext,
            all_cocycles,
        } => {
            let nerve = resolve_complex(resolved, complex, options)?;
            let ext = resolved.extension(ext)?;
            let report = check_square(&nerve, &ext, &budget, *all_cocycles)?;
            let ok = report.passed();
            let result = json!({
                "checked": report.checked,
                "exhaustive": report.exhaustive,
                "failures": report.failures.len(),
                "ok": ok,
            });
            Ok((result, ok))
        }
        TaskSpec::Gerbe { complex, ext, sel } => {
            let nerve = resolve_complex(resolved, complex, options)?;
            let ext = resolved.extension(ext)?;
            let q = select_cochain(resolved, sel, &nerve, &ext, &budget)?;
            let report = gerbe_class(&q, &ext, &budget)?;
            let ok = report.agreement;
            let result = json!({
                "agreement": report.agreement,
                "collapsed": report.collapsed,
                "lift_classes": report.lift_class_count,
                "pair": crate::report::pair_json(&report.pair),
                "witness": report.witness.as_ref().map(crate::report::cochain_json),
            });
            Ok((result, ok))
        }
        TaskSpec::GaugeClasses { complex, ext, sel } => {
            let nerve = resolve_complex(resolved, complex, options)?;
            let ext = resolved.extension(ext)?;
            let q = select_cochain(resolved, sel, &nerve, &ext, &budget)?;
            let report = obstruction_report(&q, &ext, &budget)?;
            let ok = report.weak_inclusion_ok && report.gerbe_agreement;
            Ok((obstruction_json(&report), ok))
        }
        TaskSpec::Realize { complex, ext, sel } => {
            let nerve = resolve_complex(resolved, complex, options)?;
            let ext = resolved.extension(ext)?;
            let z = select_cochain2(resolved, sel, &nerve, &ext)?;
            let witness = solve_coboundary_realization(&z, &ext, &budget)?;
            let result = json!({
                "found": witness.is_some(),
                "input": crate::report::cochain2_json(&z),
                "witness": witness.as_ref().map(crate::report::cochain_json),
            });
            Ok((result, true))
        }
    }
}

fn delta_json(class: &AbelianH2Class, ctx: &AbelianH2Context) -> Value {
    json!({
        "coords": class.coords(),
        "h2_invariant_factors": ctx.structure().invariant_factors,
        "trivial": class.is_trivial(),
    })
}

fn obstruction_json(report: &ObstructionReport) -> Value {
    json!({
        "delta": {
            "coords": report.delta.coords(),
            "h2_invariant_factors": report.h2_structure,
            "trivial": report.delta.is_trivial(),
        },
        "exactness": {
            "delta_trivial": report.delta.is_trivial(),
            "gerbe_agreement": report.gerbe_agreement,
            "lifts_nonempty": !report.lifts.is_empty(),
            "weak_inclusion": report.weak_inclusion_ok,
        },
        "flags": {
            "collapsed": report.collapsed,
            "duality_breaking": report.duality_breaking,
            "gauge_breaking": report.gauge_breaking,
        },
        "gauge_classes": report.gauge_classes.iter().map(|(rep, members)| json!({
            "lifts": members,
            "representative": crate::report::cochain_json(rep),
        })).collect::<Vec<_>>(),
        "input_class": crate::report::cochain_json(&report.input_class),
        "input_class_index": report.input_class_index,
        "lifts": report.lifts.iter().map(crate::report::cochain_json).collect::<Vec<_>>(),
        "stats": crate::report::stats_json(report.stats),
    })
}
