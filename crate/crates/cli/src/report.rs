//! JSON encodings of engine values (stable field names, element names
//! rather than indices) and the human-readable table rendering.

use serde_json::{json, Map, Value};

use cocycle_core::{ClassSet, CocyclePair, OneCochain, SearchStats, TwoCochain};

use crate::config::{CoeffSpec, ComplexRef, ExtRef, GroupRef, Sel1, Sel2, TaskSpec};

/// Edge-keyed object `{"(i,j)": "element-name", ...}`.
pub fn cochain_json(c: &OneCochain) -> Value {
    let mut map = Map::new();
    for (e, &(i, j)) in c.nerve().edges().iter().enumerate() {
        map.insert(
            format!("({i},{j})"),
            Value::String(c.group().name(c.value(e)).to_string()),
        );
    }
    Value::Object(map)
}

/// Triangle-keyed object `{"(i,j,k)": "element-name", ...}`.
pub fn cochain2_json(c: &TwoCochain) -> Value {
    let mut map = Map::new();
    for (t, &(i, j, k)) in c.nerve().triangles().iter().enumerate() {
        map.insert(
            format!("({i},{j},{k})"),
            Value::String(c.group().name(c.value(t)).to_string()),
        );
    }
    Value::Object(map)
}

pub fn pair_json(pair: &CocyclePair) -> Value {
    json!({
        "g": cochain2_json(pair.g()),
        "u": cochain_json(pair.u()),
    })
}

pub fn stats_json(stats: SearchStats) -> Value {
    json!({
        "nodes": stats.nodes,
        "solutions": stats.solutions,
    })
}

pub fn h1_classes_json(classes: &ClassSet<OneCochain>) -> Value {
    json!({
        "classes": classes.reps().iter().zip(classes.sizes()).map(|(rep, &size)| json!({
            "invariants": { "trivial": rep.is_trivial() },
            "representative": cochain_json(rep),
            "size": size,
        })).collect::<Vec<_>>(),
        "count": classes.len(),
        "distinguished": classes.distinguished(),
        "stats": stats_json(classes.stats()),
        "total_cocycles": classes.total(),
    })
}

pub fn pair_classes_json(classes: &ClassSet<CocyclePair>) -> Value {
    json!({
        "classes": classes.reps().iter().zip(classes.sizes()).map(|(rep, &size)| json!({
            "invariants": { "trivial": rep.is_trivial() },
            "representative": pair_json(rep),
            "size": size,
        })).collect::<Vec<_>>(),
        "count": classes.len(),
        "distinguished": classes.distinguished(),
        "scope": "cover-relative",
        "stats": stats_json(classes.stats()),
        "total_cocycle_pairs": classes.total(),
    })
}

fn group_ref_str(g: &GroupRef) -> String {
    match g {
        GroupRef::Name(n) => n.clone(),
        GroupRef::Center(n) => format!("center({n})"),
    }
}

fn complex_ref_json(c: &ComplexRef) -> Value {
    match c {
        ComplexRef::Named(n) => json!(n),
        ComplexRef::Default => json!("(seed)"),
    }
}

fn ext_ref_json(e: &ExtRef) -> Value {
    match e {
        ExtRef::Named(n) => json!(n),
        ExtRef::Inline { g, n } => json!(format!("{}->{n}", group_ref_str(g))),
    }
}

fn sel1_json(s: &Sel1) -> Value {
    match s {
        Sel1::Trivial => json!("trivial"),
        Sel1::Generator => json!("generator"),
        Sel1::Class(k) => json!(format!("class {k}")),
        Sel1::Named(n) => json!(n),
    }
}

pub fn task_args_json(spec: &TaskSpec) -> Value {
    match spec {
        TaskSpec::H1 { complex, group } => json!({
            "complex": complex_ref_json(complex),
            "group": group,
        }),
        TaskSpec::Abelian {
            complex,
            coeff,
            degree,
        } => json!({
            "coefficients": match coeff {
                CoeffSpec::Int => "Z".to_string(),
                CoeffSpec::Mod(m) => format!("Z_{m}"),
            },
            "complex": complex_ref_json(complex),
            "degree": degree,
        }),
        TaskSpec::H2nab { complex, ext } => json!({
            "complex": complex_ref_json(complex),
            "extension": ext_ref_json(ext),
        }),
        TaskSpec::Nu { complex, ext, sel }
        | TaskSpec::Delta { complex, ext, sel }
        | TaskSpec::Gerbe { complex, ext, sel }
        | TaskSpec::GaugeClasses { complex, ext, sel } => json!({
            "cochain": sel1_json(sel),
            "complex": complex_ref_json(complex),
            "extension": ext_ref_json(ext),
        }),
        TaskSpec::Lift {
            complex,
            ext,
            sel,
            granularity,
        } => json!({
            "cochain": sel1_json(sel),
            "complex": complex_ref_json(complex),
            "extension": ext_ref_json(ext),
            "granularity": granularity.map(|g| match g {
                crate::config::GranularitySpec::Class => "class",
                crate::config::GranularitySpec::Cocycle => "cocycle",
            }),
        }),
        TaskSpec::Exactness { complex, ext } => json!({
            "complex": complex_ref_json(complex),
            "extension": ext_ref_json(ext),
        }),
        TaskSpec::Square {
            complex,
            ext,
            all_cocycles,
        } => json!({
            "all_cocycles": all_cocycles,
            "complex": complex_ref_json(complex),
            "extension": ext_ref_json(ext),
        }),
        TaskSpec::Realize { complex, ext, sel } => json!({
            "cochain2": match sel {
                Sel2::Trivial => "trivial".to_string(),
                Sel2::Generator => "generator".to_string(),
                Sel2::Named(n) => n.clone(),
            },
            "complex": complex_ref_json(complex),
            "extension": ext_ref_json(ext),
        }),
    }
}

/// Human-readable rendering of a task report.
pub fn render_table(report: &Value) -> String {
    let mut out = String::new();
    let task = report["task"].as_str().unwrap_or("?");
    let ok = report["ok"].as_bool().unwrap_or(false);
    out.push_str(&format!(
        "== {task} {}\n",
        if ok { "[ok]" } else { "[FAILED]" }
    ));
    if let Some(args) = report.get("args").and_then(Value::as_object) {
        for (k, v) in args {
            out.push_str(&format!("   {k}: {}\n", render_value(v)));
        }
    }
    if let Some(err) = report.get("error") {
        out.push_str(&format!("   error: {}\n", render_value(err)));
        return out;
    }
    if let Some(result) = report.get("result").and_then(Value::as_object) {
        for (k, v) in result {
            match v {
                Value::Array(items) if k == "classes" || k == "rows" || k == "lifts" => {
                    out.push_str(&format!("   {k} ({}):\n", items.len()));
                    for (i, item) in items.iter().enumerate() {
                        out.push_str(&format!("     [{i}] {}\n", render_value(item)));
                    }
                }
                _ => out.push_str(&format!("   {k}: {}\n", render_value(v))),
            }
        }
    }
    out
}

fn render_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
