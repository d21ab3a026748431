use expochar::characterization::CharacterizationReport;
use expochar::efficiency::curve_to_csv;
use expochar::null::{StatKind, TestReport};
use serde::Serialize;

use crate::args::Format;

pub fn json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn stat_row(r: &TestReport, kind: StatKind) -> (f64, f64, Option<f64>) {
    match kind {
        StatKind::I => (r.i_value, r.p_i, Some(r.p_i_asymptotic)),
        StatKind::K => (r.k_value, r.p_k, None),
    }
}

fn rejects(r: &TestReport, kind: StatKind, alpha: f64) -> bool {
    r.decisions
        .iter()
        .find(|d| d.alpha == alpha)
        .is_some_and(|d| match kind {
            StatKind::I => d.reject_i,
            StatKind::K => d.reject_k,
        })
}

pub fn test_csv(r: &TestReport, kinds: &[StatKind]) -> String {
    let mut out =
        String::from("statistic,value,p_value,p_asymptotic,alpha,reject,n,reps,seed,convention\n");
    for &kind in kinds {
        let (v, p, pa) = stat_row(r, kind);
        for d in &r.decisions {
            out.push_str(&format!(
                "{kind},{v},{p},{},{},{},{},{},{},{}\n",
                pa.map(|x| x.to_string()).unwrap_or_default(),
                d.alpha,
                rejects(r, kind, d.alpha),
                r.n,
                r.reps,
                r.seed,
                r.convention
            ));
        }
    }
    out
}

pub fn test_md(r: &TestReport, kinds: &[StatKind]) -> String {
    let mut out = format!(
        "n = {}, {} null replications, seed {}, {} indicators\n\n| statistic | value | p-value |",
        r.n, r.reps, r.seed, r.convention
    );
    for d in &r.decisions {
        out.push_str(&format!(" reject at {} |", d.alpha));
    }
    out.push_str("\n|---|---|---|");
    out.push_str(&"---|".repeat(r.decisions.len()));
    out.push('\n');
    for &kind in kinds {
        let (v, p, _) = stat_row(r, kind);
        out.push_str(&format!("| {kind} | {v:.4} | {p:.4} |"));
        for d in &r.decisions {
            out.push_str(if rejects(r, kind, d.alpha) {
                " yes |"
            } else {
                " no |"
            });
        }
        out.push('\n');
    }
    if kinds.contains(&StatKind::I) {
        out.push_str(&format!(
            "\nNormal approximation for I (ignores the finite-n bias of the V-statistic): p = {:.4}\n",
            r.p_i_asymptotic
        ));
    }
    out
}

pub fn curve(format: Format, header: (&str, &str), points: &[(f64, f64)]) -> String {
    match format {
        Format::Csv => curve_to_csv(header, points),
        Format::Json => {
            let rows: Vec<serde_json::Value> = points
                .iter()
                .map(|(x, y)| serde_json::json!({ header.0: x, header.1: y }))
                .collect();
            json(&rows)
        }
        Format::Md => {
            let mut out = format!("| {} | {} |\n|---|---|\n", header.0, header.1);
            for (x, y) in points {
                out.push_str(&format!("| {x:.4} | {y:.6} |\n"));
            }
            out
        }
    }
}

pub fn demo_csv(reports: &[CharacterizationReport]) -> String {
    let mut out = String::from("family,theta,quadruples,seed,distance\n");
    for r in reports {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.family, r.theta, r.quadruples, r.seed, r.distance
        ));
    }
    out
}

pub fn demo_md(reports: &[CharacterizationReport]) -> String {
    let mut out = String::from(
        "Kolmogorov distance between the laws of X0 + med(X1,X2,X3) and max(X1,X2,X3)\n\n| family | theta | quadruples | distance |\n|---|---|---|---|\n",
    );
    for r in reports {
        out.push_str(&format!(
            "| {} | {} | {} | {:.4} |\n",
            r.family, r.theta, r.quadruples, r.distance
        ));
    }
    out
}
