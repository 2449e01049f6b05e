//! Report envelopes and their JSON, CSV and plain text renderings.
//!
//! JSON goes through [`serde_json::Value`] with sorted keys and integer
//! numbers only, so parsing and re-serializing the output reproduces it byte
//! for byte. Rationals are `{"den": d, "num": p}` with `d > 0`.

use std::collections::BTreeSet;
use std::str::FromStr;

use serde_json::{json, Map, Number, Value};
use thiserror::Error;

use crate::filtrations::{jordan_blocks, FiltrationContext};
use crate::frobenius::{initial_data, pairing_matrix, FrobeniusInitialData};
use crate::matrix::Matrix;
use crate::reflexive::ReflexiveRecord;
use crate::spectrum::{multiplicities, spectrum_direct, step_sequence};
use crate::verify::Summary;
use crate::weights::WeightSystem;
use crate::Rational;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    Json,
    Csv,
    #[default]
    Table,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "table" => Ok(Format::Table),
            other => Err(format!("unknown format '{other}', expected json, csv or table")),
        }
    }
}

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("csv output failed: {0}")]
    Csv(#[from] csv::Error),
    #[error("json output failed: {0}")]
    Json(#[from] serde_json::Error),
}

/// Rows behind the CSV and text renderings.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Printed under the text table only.
    pub notes: Vec<String>,
    /// Rows joined by single spaces with `|` before the last column.
    pub bar_before_last: bool,
}

impl Table {
    fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|s| s.to_string()).collect(), ..Table::default() }
    }

    fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String, ReportError> {
        let mut wtr = csv::Writer::from_writer(Vec::new());
        wtr.write_record(&self.header)?;
        for row in &self.rows {
            wtr.write_record(row)?;
        }
        let bytes = wtr.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv of utf-8 cells"))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if self.bar_before_last {
            for row in std::iter::once(&self.header).chain(&self.rows) {
                out.push_str(&with_bar(row));
                out.push('\n');
            }
        } else {
            let cols = self.header.len();
            let mut width = vec![0; cols];
            for row in std::iter::once(&self.header).chain(&self.rows) {
                for (c, cell) in row.iter().enumerate() {
                    width[c] = width[c].max(cell.chars().count());
                }
            }
            for row in std::iter::once(&self.header).chain(&self.rows) {
                let cells: Vec<String> =
                    row.iter().enumerate().map(|(c, cell)| format!("{cell:>w$}", w = width[c])).collect();
                out.push_str(cells.join("  ").trim_end());
                out.push('\n');
            }
        }
        for note in &self.notes {
            out.push_str(note);
            out.push('\n');
        }
        out
    }
}

fn with_bar(row: &[String]) -> String {
    match row.split_last() {
        Some((last, init)) if !init.is_empty() => format!("{} | {last}", init.join(" ")),
        _ => row.join(" "),
    }
}

/// One command's output: what was asked, what came back, and anything odd.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    /// Payload key, e.g. `"spectrum"`.
    pub kind: &'static str,
    pub input: Value,
    pub payload: Value,
    pub warnings: Vec<String>,
    pub table: Table,
}

impl Report {
    pub fn envelope(&self) -> Value {
        let mut payload = Map::new();
        payload.insert(self.kind.to_string(), self.payload.clone());
        json!({
            "tool_version": TOOL_VERSION,
            "input": self.input,
            "payload": payload,
            "warnings": self.warnings,
        })
    }

    pub fn to_json(&self) -> Result<String, ReportError> {
        let mut s = serde_json::to_string_pretty(&self.envelope())?;
        s.push('\n');
        Ok(s)
    }

    pub fn render(&self, format: Format) -> Result<String, ReportError> {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.table.to_csv(),
            Format::Table => {
                let mut out = self.table.to_text();
                for w in &self.warnings {
                    out.push_str(&format!("warning: {w}\n"));
                }
                Ok(out)
            }
        }
    }
}

fn big_number(text: String) -> Value {
    Value::Number(Number::from_str(&text).expect("integer literal"))
}

pub fn rational_json(r: &Rational) -> Value {
    json!({ "num": big_number(r.numer().to_string()), "den": big_number(r.denom().to_string()) })
}

fn rationals_json(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rational_json).collect())
}

fn matrix_json(m: &Matrix) -> Value {
    Value::Array((0..m.rows()).map(|r| rationals_json(m.row(r))).collect())
}

fn set_json(s: &BTreeSet<usize>) -> Value {
    json!(s.iter().collect::<Vec<_>>())
}

fn set_text(s: &BTreeSet<usize>) -> String {
    let items: Vec<String> = s.iter().map(|k| k.to_string()).collect();
    format!("{{{}}}", items.join(" "))
}

fn tuple_text(v: &[u64]) -> String {
    let items: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", items.join(","))
}

/// `{"weights": [...], "mu": m, "n": n}`, weights in the caller's order.
pub fn weights_input(w: &WeightSystem) -> Value {
    json!({ "weights": w.weights_in_input_order(), "sorted_weights": w.weights(), "mu": w.mu(), "n": w.n() })
}

pub fn spectrum_report(w: &WeightSystem) -> Report {
    let spec = spectrum_direct(w);
    let steps = step_sequence(w);
    let mut table = Table::new(&["k", "a(k)", "i(k)", "s", "sigma", "alpha"]);
    let mut step_json = Vec::with_capacity(spec.len());
    for k in 0..spec.len() {
        table.push(vec![
            k.to_string(),
            tuple_text(steps.a(k)),
            steps.i(k).to_string(),
            spec.s()[k].to_string(),
            spec.sigma()[k].to_string(),
            spec.alpha()[k].to_string(),
        ]);
        step_json.push(json!({ "k": k, "exponents": steps.a(k), "direction": steps.i(k) }));
    }
    let roots: Vec<Value> = multiplicities(spec.sigma())
        .iter()
        .map(|(r, m)| json!({ "root": rational_json(&-r), "multiplicity": m }))
        .collect();
    table.notes.push(format!("mu = {}, n = {}, integral = {}", spec.mu(), spec.n(), spec.is_integral()));
    let payload = json!({
        "s": rationals_json(spec.s()),
        "sigma": rationals_json(spec.sigma()),
        "alpha": rationals_json(spec.alpha()),
        "steps": step_json,
        "spectral_polynomial_roots": roots,
        "classes": rationals_json(&spec.classes()),
        "integral": spec.is_integral(),
    });
    Report { kind: "spectrum", input: weights_input(w), payload, warnings: w.warnings(), table }
}

pub fn frobenius_report(w: &WeightSystem) -> Report {
    let data: FrobeniusInitialData = initial_data(w);
    let pairing = pairing_matrix(w);
    let mu = data.mu();
    let check = data.check();
    let pairing_is_metric = pairing.equals_permutation(data.partner());
    let mut table = Table::new(&["k", "A0 column", "A_inf", "g partner", "pairing class"]);
    for k in 0..mu {
        table.push(vec![
            k.to_string(),
            format!("{} at row {}", mu, (k + 1) % mu),
            data.ainf_diagonal()[k].to_string(),
            data.partner()[k].to_string(),
            pairing.get(k, data.partner()[k]).to_string(),
        ]);
    }
    table.notes.push(format!("unit e = omega_{}", data.unit()));
    table.notes.push(format!("identities hold: {}, pairing equals metric: {}", check.is_ok(), pairing_is_metric));
    let payload = json!({
        "unit": data.unit(),
        "a0": matrix_json(&data.a0()),
        "ainf_diagonal": rationals_json(data.ainf_diagonal()),
        "metric": matrix_json(&data.g()),
        "metric_partner": data.partner(),
        "pairing": matrix_json(&pairing.matrix()),
        "pairing_equals_metric": pairing_is_metric,
        "identity_failure": check.err().map(|e| e.to_string()),
    });
    Report { kind: "frobenius", input: weights_input(w), payload, warnings: w.warnings(), table }
}

pub fn jordan_report(w: &WeightSystem) -> Report {
    let jordan = jordan_blocks(w);
    let mut table = Table::new(&["alpha", "start", "size", "s"]);
    let mut classes = Vec::new();
    for (alpha, blocks) in jordan.classes() {
        let mut bj = Vec::new();
        for b in &blocks {
            table.push(vec![alpha.to_string(), b.start.to_string(), b.size.to_string(), b.value.to_string()]);
            bj.push(json!({ "start": b.start, "size": b.size, "value": rational_json(&b.value) }));
        }
        classes.push(json!({ "alpha": rational_json(&alpha), "blocks": bj }));
    }
    let histogram: Vec<Value> =
        jordan.size_histogram().iter().map(|(size, count)| json!({ "size": size, "count": count })).collect();
    let hist_text: Vec<String> = jordan.size_histogram().iter().rev().map(|(s, c)| format!("{c}x{s}")).collect();
    table.notes.push(format!("block sizes: {}", hist_text.join(" ")));
    let payload = json!({
        "classes": classes,
        "weights": jordan.weights(),
        "largest_block": jordan.largest_block(),
        "size_histogram": histogram,
    });
    Report { kind: "jordan", input: weights_input(w), payload, warnings: w.warnings(), table }
}

pub fn filtrations_report(w: &WeightSystem) -> Report {
    let ctx = FiltrationContext::new(w);
    let report = ctx.report();
    let n = report.n as i64;
    let saito_ok = (0..=n + 1).all(|p| ctx.saito_identity(p));
    let orth: Vec<Value> = ctx
        .orthogonality_failures()
        .iter()
        .map(|(alpha, p)| json!({ "alpha": rational_json(alpha), "p": p }))
        .collect();
    let mut table = Table::new(&["k", "sigma", "nu", "max p with k in H^p", "conjugate", "primitive"]);
    let spec = ctx.spectrum();
    for k in 0..report.mu {
        let top = (0..=report.n).rev().find(|&p| report.hp[p].contains(&k)).unwrap_or(0);
        table.push(vec![
            k.to_string(),
            spec.sigma()[k].to_string(),
            ctx.jordan().weight(k).to_string(),
            top.to_string(),
            report.conj[k].to_string(),
            report.primitive.contains(&k).to_string(),
        ]);
    }
    for (m, set) in &report.m {
        table.notes.push(format!("M({m}) = {}", set_text(set)));
    }
    table.notes.push(format!("Saito identity holds for every p: {saito_ok}"));
    let graded = |map: &std::collections::BTreeMap<i64, BTreeSet<usize>>, key: &str| -> Value {
        Value::Array(map.iter().map(|(m, s)| json!({ key: m, "indices": set_json(s) })).collect())
    };
    let payload = json!({
        "hodge": report.hp.iter().map(set_json).collect::<Vec<_>>(),
        "opposite": report.gp.iter().map(set_json).collect::<Vec<_>>(),
        "monodromy": graded(&report.m, "m"),
        "weight": graded(&report.w, "m"),
        "primitive": set_json(&report.primitive),
        "conjugate": report.conj,
        "saito_identity": saito_ok,
        "orthogonality_failures": orth,
    });
    Report { kind: "filtrations", input: weights_input(w), payload, warnings: w.warnings(), table }
}

pub fn reflexive_report(n: usize, records: &[ReflexiveRecord]) -> Report {
    let mut header: Vec<String> = (0..=n).map(|i| format!("w{i}")).collect();
    header.push("mu".into());
    let mut table = Table { header, bar_before_last: true, ..Table::default() };
    let mut systems = Vec::with_capacity(records.len());
    for r in records {
        let mut row: Vec<String> = r.weights.weights().iter().map(|x| x.to_string()).collect();
        row.push(r.mu.to_string());
        table.push(row);
        systems.push(json!({ "weights": r.weights.weights(), "mu": r.mu, "q": r.q }));
    }
    let payload = json!({ "count": records.len(), "systems": systems });
    Report { kind: "reflexive", input: json!({ "dimension": n }), payload, warnings: Vec::new(), table }
}

pub fn verify_report(input: Value, summary: &Summary) -> Report {
    let checks: Vec<&str> = summary.checks.iter().map(|c| c.name()).collect();
    let failures: Vec<Value> = summary
        .failures
        .iter()
        .map(|f| json!({ "mu": f.mu, "weights": f.weights, "check": f.check.name(), "detail": f.detail }))
        .collect();
    let mut table = Table::new(&["check", "failures"]);
    for c in &summary.checks {
        table.push(vec![c.name().to_string(), summary.failures_for(*c).count().to_string()]);
    }
    table.notes.push(format!(
        "{} systems, {}",
        summary.systems,
        if summary.passed() { "all passed" } else { "FAILED" }
    ));
    let payload = json!({
        "systems": summary.systems,
        "checks": checks,
        "passed": summary.passed(),
        "failures": failures,
    });
    Report { kind: "verify", input, payload, warnings: Vec::new(), table }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reflexive::enumerate_reflexive;

    fn ws(v: &[i64]) -> WeightSystem {
        WeightSystem::new(v).unwrap()
    }

    #[test]
    fn rationals_are_objects() {
        assert_eq!(rational_json(&Rational::new(-3, 6)), json!({"num": -1, "den": 2}));
        assert_eq!(serde_json::to_string(&rational_json(&Rational::from(4))).unwrap(), r#"{"den":1,"num":4}"#);
    }

    #[test]
    fn spectrum_sigma_for_all_ones() {
        let v = spectrum_report(&ws(&[1, 1, 1])).envelope();
        let sigma = &v["payload"]["spectrum"]["sigma"];
        assert_eq!(sigma, &json!([{"num":0,"den":1},{"num":1,"den":1},{"num":2,"den":1}]));
        assert_eq!(v["input"]["mu"], json!(3));
    }

    fn integers_only(v: &Value) -> bool {
        match v {
            Value::Number(n) => !n.to_string().contains(['.', 'e', 'E']),
            Value::Array(a) => a.iter().all(integers_only),
            Value::Object(m) => m.values().all(integers_only),
            _ => true,
        }
    }

    #[test]
    fn json_round_trips() {
        for r in [
            spectrum_report(&ws(&[3, 1, 2])),
            frobenius_report(&ws(&[1, 2, 3])),
            jordan_report(&ws(&[1, 2, 12, 15, 30])),
            filtrations_report(&ws(&[1, 1, 4, 6])),
        ] {
            let text = r.to_json().unwrap();
            let parsed: Value = serde_json::from_str(&text).unwrap();
            let mut again = serde_json::to_string_pretty(&parsed).unwrap();
            again.push('\n');
            assert_eq!(text, again);
            assert!(integers_only(&parsed));
        }
    }

    #[test]
    fn reflexive_rendering() {
        let records = enumerate_reflexive(3).unwrap();
        let r = reflexive_report(3, &records);
        let text = r.render(Format::Table).unwrap();
        assert!(text.lines().any(|l| l == "1 6 14 21 | 42"));
        assert_eq!(text.lines().next(), Some("w0 w1 w2 w3 | mu"));
        let csv = r.render(Format::Csv).unwrap();
        assert_eq!(csv.lines().next(), Some("w0,w1,w2,w3,mu"));
        assert_eq!(reflexive_report(2, &enumerate_reflexive(2).unwrap()).table.rows.len(), 3);
    }

    #[test]
    fn aligned_table() {
        let t = spectrum_report(&ws(&[1, 1, 2])).render(Format::Table).unwrap();
        let lines: Vec<&str> = t.lines().take(5).collect();
        let widths: BTreeSet<usize> = lines.iter().map(|l| l.len()).collect();
        assert_eq!(widths.len(), 1, "{t}");
        let csv = spectrum_report(&ws(&[1, 1, 2])).render(Format::Csv).unwrap();
        assert!(csv.contains("\"(1,1,0)\""), "{csv}");
    }
}
