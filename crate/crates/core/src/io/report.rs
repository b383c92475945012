//! Human-readable and JSON-lines renderings of lasso reports.

use serde_json::{json, Value};

use crate::cords::CordSet;
use crate::io::newick::print_heights;
use crate::lasso::{LassoKind, LassoReport};
use crate::oracle::{OracleReport, Witness};
use crate::tree::{VertexId, XTree};

/// Version of the JSON-lines schema.
pub const REPORT_VERSION: u32 = 1;

fn cluster_names(tree: &XTree, vertices: &[VertexId]) -> Vec<Vec<String>> {
    vertices.iter().map(|&v| tree.cluster(v).iter().map(|&i| tree.labels()[i].to_string()).collect()).collect()
}

pub fn witness_json(w: &Witness) -> Value {
    json!({
        "kind": w.kind,
        "tree": print_heights(&w.heights_tree),
        "rival": print_heights(&w.heights_rival),
    })
}

/// One JSON object; failing vertices are named by the leaves below them.
pub fn report_json(tree: &XTree, cords: &CordSet, report: &LassoReport, oracle: Option<&OracleReport>) -> Value {
    let mut v = json!({
        "v": REPORT_VERSION,
        "tree": tree.to_string(),
        "cords": cords.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "equidistant": report.equidistant,
        "weak": report.weak,
        "topological": report.topological,
        "strong": report.strong,
        "failing": {
            "equidistant": cluster_names(tree, &report.failing.equidistant),
            "weak": cluster_names(tree, &report.failing.weak),
            "topological": cluster_names(tree, &report.failing.topological),
        },
    });
    if let Some(o) = oracle {
        let verdict = |kind: LassoKind| {
            let verdict = o.get(kind);
            json!({
                "holds": verdict.holds,
                "exhaustive": verdict.exhaustive,
                "witness": verdict.witness.as_ref().map(witness_json),
            })
        };
        v["oracle"] = json!({
            "equidistant": verdict(LassoKind::Equidistant),
            "weak": verdict(LassoKind::Weak),
            "topological": verdict(LassoKind::Topological),
            "strong": o.strong,
        });
        v["agree"] = json!(agrees(report, o));
    }
    v
}

/// Whether the characterization-based and definition-level verdicts match.
pub fn agrees(report: &LassoReport, oracle: &OracleReport) -> bool {
    LassoKind::ALL.iter().all(|&k| report.get(k) == oracle.get(k).holds) && report.strong == oracle.strong
}

pub fn report_text(tree: &XTree, cords: &CordSet, report: &LassoReport, oracle: Option<&OracleReport>) -> String {
    let yes_no = |b: bool| if b { "yes" } else { "no" };
    let mut out = format!("tree:        {tree}\ncords:       {cords}\n");
    for (name, flag, failing) in [
        ("equidistant", report.equidistant, &report.failing.equidistant),
        ("weak", report.weak, &report.failing.weak),
        ("topological", report.topological, &report.failing.topological),
    ] {
        out.push_str(&format!("{:<12} {}", format!("{name}:"), yes_no(flag)));
        if !failing.is_empty() {
            let names: Vec<String> = cluster_names(tree, failing).iter().map(|c| format!("{{{}}}", c.join(","))).collect();
            out.push_str(&format!("  (failing at {})", names.join(" ")));
        }
        out.push('\n');
    }
    out.push_str(&format!("{:<12} {}\n", "strong:", yes_no(report.strong)));
    if let Some(o) = oracle {
        out.push_str(&format!(
            "oracle:      equidistant={} weak={} topological={}{}\n",
            yes_no(o.equidistant.holds),
            yes_no(o.weak.holds),
            yes_no(o.topological.holds),
            if o.weak.exhaustive { "" } else { " (sampled, not exhaustive)" }
        ));
        out.push_str(&format!("agreement:   {}\n", yes_no(agrees(report, o))));
    }
    out
}
