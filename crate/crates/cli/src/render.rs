//! Plain-text renderings of the reports.

use std::collections::BTreeMap;
use std::fmt::Write;

use decalage_core::spectral::SSPage;

use crate::{LemmaEntry, ValidateEntry};

pub(crate) fn validate(entries: &[ValidateEntry]) -> String {
    let mut out = String::new();
    for e in entries {
        match &e.error {
            None => writeln!(out, "{}: valid {}", e.id, e.kind),
            Some(err) => writeln!(out, "{}: INVALID {}: {err}", e.id, e.kind),
        }
        .unwrap();
    }
    out
}

pub(crate) fn lemmas(entries: &[LemmaEntry], first_failure: Option<&str>) -> String {
    let mut out = String::new();
    for e in entries {
        let total: usize = e.targets.iter().map(|t| t.checks.checks.len()).sum();
        let failed: usize = e.targets.iter().map(|t| t.checks.failures().count()).sum();
        let status = if e.passed { "pass" } else { "FAIL" };
        writeln!(out, "{}: {status} ({} targets, {total} checks, {failed} failed)", e.id, e.targets.len()).unwrap();
    }
    if let Some(f) = first_failure {
        writeln!(out, "first failure: {f}").unwrap();
    }
    out
}

pub(crate) fn theorem_summary<T>(entries: &[T], id: impl Fn(&T) -> &str, line: impl Fn(&T) -> String) -> String {
    let mut out = String::new();
    for e in entries {
        writeln!(out, "{}: {}", id(e), line(e)).unwrap();
    }
    out
}

/// One grid per page over the nonzero entries: rows `q` descending, columns `p`.
pub(crate) fn pages(pages: &[SSPage], degenerates: bool) -> String {
    let mut out = String::new();
    for page in pages {
        writeln!(out, "E_{}:", page.r).unwrap();
        let dims: BTreeMap<(i64, i64), usize> = page
            .entries
            .iter()
            .filter(|e| e.dim > 0)
            .map(|e| ((e.p, e.q), e.dim))
            .collect();
        if dims.is_empty() {
            writeln!(out, "  zero").unwrap();
            continue;
        }
        let (p_lo, p_hi) = (dims.keys().map(|k| k.0).min().unwrap(), dims.keys().map(|k| k.0).max().unwrap());
        let (q_lo, q_hi) = (dims.keys().map(|k| k.1).min().unwrap(), dims.keys().map(|k| k.1).max().unwrap());
        write!(out, "  q\\p").unwrap();
        for p in p_lo..=p_hi {
            write!(out, "{p:>4}").unwrap();
        }
        out.push('\n');
        for q in (q_lo..=q_hi).rev() {
            write!(out, "  {q:>3}").unwrap();
            for p in p_lo..=p_hi {
                match dims.get(&(p, q)) {
                    Some(d) => write!(out, "{d:>4}"),
                    None => write!(out, "{:>4}", "."),
                }
                .unwrap();
            }
            out.push('\n');
        }
        for d in page.differentials.iter().filter(|d| !d.zero) {
            writeln!(out, "  d_{} ({},{}) -> ({},{}) nonzero", page.r, d.from[0], d.from[1], d.to[0], d.to[1]).unwrap();
        }
    }
    writeln!(out, "degenerates: {}", if degenerates { "yes" } else { "no" }).unwrap();
    out
}

pub(crate) fn groups<'a>(groups: impl Iterator<Item = (i64, &'a str)>) -> String {
    let mut out = String::new();
    for (i, m) in groups {
        writeln!(out, "H^{i} = {m}").unwrap();
    }
    out
}
