//! JSON assembly helpers. All fractions are rendered as exact `p/q`
//! strings, and serde_json's sorted maps keep the output deterministic.

use std::fs;
use std::path::Path;

use lpbound::instances::Instance;
use lpbound::lp::FeasReport;
use lpbound::model::Distribution;
use lpbound::rat::{fmt_rat, Rat};
use lpbound::{Error, Result};
use serde_json::{json, Value};

pub fn rat_json(value: &Rat) -> Value {
    Value::String(fmt_rat(value))
}

/// Echo of the parsed instance: shape, alphabet and definedness counts.
pub fn instance_json(instance: &Instance) -> Value {
    match instance {
        Instance::Comm(f) => {
            let defined = f.defined_cells().count();
            json!({
                "flavor": "comm",
                "rows": f.nrows(),
                "cols": f.ncols(),
                "alphabet": f.alphabet(),
                "relation": f.is_relation(),
                "defined_cells": defined,
            })
        }
        Instance::Query(q) => json!({
            "flavor": "query",
            "n": q.n(),
            "m": q.m(),
            "relation": q.is_relation(),
            "defined_inputs": q.defined_inputs().count(),
        }),
    }
}

pub fn feas_json(report: &FeasReport) -> Value {
    let violations: Vec<Value> = report
        .violations
        .iter()
        .map(|v| {
            json!({
                "name": v.name,
                "amount": fmt_rat(&v.amount),
                "detail": v.detail,
            })
        })
        .collect();
    json!({
        "feasible": report.feasible(),
        "objective": fmt_rat(&report.objective),
        "violations": violations,
    })
}

/// Support entries as `[index, "p/q"]` pairs in ascending index order.
pub fn distribution_json(lambda: &Distribution) -> Value {
    let entries: Vec<Value> = lambda
        .entries()
        .map(|(index, mass)| json!([index, fmt_rat(mass)]))
        .collect();
    Value::Array(entries)
}

/// Writes pretty JSON to the file, or to stdout when no path is given.
pub fn emit(out: Option<&Path>, value: &Value) -> Result<()> {
    let text = format!("{:#}\n", value);
    emit_text(out, &text)
}

pub fn emit_text(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Error::Input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
