//! Text rendering of command output.

use std::fmt::Write as _;

use serde_json::{json, Value};
use whitehead_lab::additive::{ConditionReport, PhiTupleJson};
use whitehead_lab::group::{SubgroupLattice, CATALOG_NAMES, DEFAULT_SUITE};
use whitehead_lab::k1::PsiTupleJson;
use whitehead_lab::padic::HowellBasis;
use whitehead_lab::ring::ElementJson;

pub fn list() -> String {
    let mut s = String::from("catalog:\n");
    for n in CATALOG_NAMES {
        let _ = writeln!(s, "  {n}");
    }
    s.push_str("aliases: C<n>, V4, D4, Q8, Heis27, AxB\ndefault suite:\n");
    for (n, p) in DEFAULT_SUITE {
        let _ = writeln!(s, "  {n} (p = {p})");
    }
    s
}

pub fn group_info(lat: &SubgroupLattice) -> Value {
    let subgroups: Vec<Value> = lat
        .info
        .iter()
        .enumerate()
        .map(|(i, h)| {
            json!({
                "index": i,
                "order": h.order(),
                "cyclic": h.is_cyclic(),
                "generators": h.subgroup.generators(),
                "abelianization_order": h.hab.order(),
                "weyl_order": h.weyl_reps.len(),
            })
        })
        .collect();
    json!({
        "schema": whitehead_lab::SCHEMA,
        "group": lat.group.to_info(),
        "classes": {
            "representatives": lat.classes.representatives,
            "sizes": lat.classes.sizes,
        },
        "subgroups": subgroups,
    })
}

pub fn group_info_text(lat: &SubgroupLattice) -> String {
    let g = &lat.group;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "order {} (p = {}), {}, {} classes, {} subgroups, table {}",
        g.order(),
        g.p(),
        if g.is_abelian() { "abelian" } else { "non-abelian" },
        lat.classes.len(),
        lat.len(),
        g.table_hash()
    );
    for (i, h) in lat.info.iter().enumerate() {
        let _ = writeln!(
            s,
            "  #{i:<3} order {:<4} {:<10} |H^ab| = {:<4} |W| = {}",
            h.order(),
            if h.is_cyclic() { "cyclic" } else { "non-cyclic" },
            h.hab.order(),
            h.weyl_reps.len()
        );
    }
    s
}

pub fn element(e: &ElementJson) -> String {
    let mut s = String::new();
    let _ = write!(s, "mod p^{} (p = {})", e.precision, e.p);
    if e.shift > 0 {
        let _ = write!(s, ", over p^{}", e.shift);
    }
    s.push('\n');
    if e.coeffs.is_empty() {
        s.push_str("  0\n");
    }
    for label in &e.basis.labels {
        if let Some(c) = e.coeffs.get(label) {
            let _ = writeln!(s, "  {label:<8} {c}");
        }
    }
    s
}

fn entries<'a>(items: impl Iterator<Item = (usize, &'a ElementJson)>) -> String {
    let mut s = String::new();
    for (h, e) in items {
        let _ = write!(s, "#{h}: {}", element(e));
    }
    s
}

pub fn phi_tuple(j: &PhiTupleJson) -> String {
    entries(j.entries.iter().map(|e| (e.subgroup, &e.elt)))
}

pub fn psi_tuple(j: &PsiTupleJson) -> String {
    entries(j.entries.iter().map(|e| (e.subgroup, &e.elt)))
}

pub fn conditions(r: &ConditionReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{} at p^{}: {}", r.system, r.precision, if r.passed { "PASS" } else { "FAIL" });
    for c in &r.conditions {
        let _ = writeln!(s, "  {:<4} {} ({} checked)", c.name, if c.passed { "ok" } else { "violated" }, c.checked);
        for w in &c.witnesses {
            let _ = write!(s, "       subgroups {:?}", w.subgroups);
            if let Some(g) = w.element {
                let _ = write!(s, " element g{g}");
            }
            if let Some(r) = w.residual {
                let _ = write!(s, " residual {r}");
            }
            s.push('\n');
        }
    }
    s
}

pub fn howell(b: &HowellBasis) -> String {
    let j = b.to_json();
    let mut s = String::new();
    let _ = writeln!(s, "{} rows, {} columns, mod {}^{}, log size {}", j.rows.len(), j.ncols, j.p, j.precision, b.log_size());
    for r in &j.rows {
        let _ = writeln!(s, "  [{}]", r.join(", "));
    }
    s
}

pub fn residuals(rows: &[Vec<i64>], n_check: u32) -> String {
    let mut s = String::new();
    for (i, r) in rows.iter().enumerate() {
        let min = r.iter().copied().min().unwrap_or(i64::MAX);
        let verdict = if min >= n_check as i64 { "PASS" } else { "FAIL" };
        let _ = writeln!(s, "unit {i}: {verdict} min residual {min} over {} subgroups", r.len());
    }
    s
}
