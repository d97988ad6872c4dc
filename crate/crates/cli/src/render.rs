//! Human-readable tables. Values are shown with four fractional digits.

use std::fmt::Write;

use tropical_ahp::document::{
    CriteriaDoc, ResultDocument, SeminormDoc, SolveDocument, WeightsDocument, WitnessDoc,
};

fn vector(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.4}")).collect();
    format!("({})", parts.join(", "))
}

fn matrix(out: &mut String, rows: &[Vec<f64>]) {
    for r in rows {
        let cells: Vec<String> = r.iter().map(|x| format!("{x:>10.4}")).collect();
        let _ = writeln!(out, "  {}", cells.join(" "));
    }
}

fn criteria(out: &mut String, c: &CriteriaDoc) {
    let _ = writeln!(out, "Criteria weights ({})", c.source);
    if let Some(l) = c.optimum {
        let _ = writeln!(out, "  lambda = {l:.4}");
    }
    let width = c.labels.iter().map(String::len).max().unwrap_or(0);
    for (name, w) in c.labels.iter().zip(&c.weights) {
        let _ = writeln!(out, "  {name:<width$}  {w:.4}");
    }
    if let Some(g) = &c.generators {
        if g.first().map_or(0, Vec::len) > 1 {
            let _ = writeln!(out, "  generators:");
            matrix(out, g);
        }
    }
}

fn seminorm(out: &mut String, title: &str, s: &SeminormDoc) {
    let _ = writeln!(out, "{title}  (delta = {:.4})", s.value);
    for r in &s.representatives {
        let witness = match &r.witness {
            WitnessDoc::MaxPair { column, row } => format!("k={column}, l={row}"),
            WitnessDoc::RowSelection(sel) => {
                let s: Vec<String> = sel.iter().map(usize::to_string).collect();
                format!("rows -> columns {}", s.join(","))
            }
        };
        let _ = writeln!(out, "  {}   {}   [{witness}]", vector(&r.scores), r.ranking);
    }
}

pub fn result_table(doc: &ResultDocument) -> String {
    let mut out = String::new();
    criteria(&mut out, &doc.criteria);
    out.push('\n');

    let _ = writeln!(out, "Alternatives");
    if let Some(alts) = doc.problem.get("alternatives").and_then(|v| v.as_array()) {
        for (i, a) in alts.iter().enumerate() {
            let _ = writeln!(out, "  ({}) {}", i + 1, a.as_str().unwrap_or_default());
        }
    }
    let _ = writeln!(out, "  mu = {:.4}", doc.optimum);
    let _ = writeln!(out, "  generators:");
    matrix(&mut out, &doc.generators);
    out.push('\n');

    seminorm(&mut out, "Most differentiating", &doc.most_differentiating);
    seminorm(&mut out, "Least differentiating", &doc.least_differentiating);
    out.push('\n');

    let _ = writeln!(out, "Combined order: {}", doc.combined_order);
    if !doc.incomparable_pairs.is_empty() {
        let pairs: Vec<String> = doc
            .incomparable_pairs
            .iter()
            .map(|(i, j)| format!("({i}) || ({j})"))
            .collect();
        let _ = writeln!(out, "Incomparable: {}", pairs.join(", "));
    }
    out
}

pub fn weights_table(doc: &WeightsDocument) -> String {
    let mut out = String::new();
    criteria(&mut out, &doc.criteria);
    out
}

pub fn solve_table(doc: &SolveDocument) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "lambda = {:.4}", doc.optimum);
    let _ = writeln!(
        out,
        "generators ({}{}):",
        doc.generators.first().map_or(0, Vec::len),
        if doc.unique { ", unique up to scaling" } else { "" }
    );
    matrix(&mut out, &doc.generators);
    out
}
