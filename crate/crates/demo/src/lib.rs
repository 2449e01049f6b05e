//! Browser bindings. Every function takes plain strings or numbers and
//! returns the same JSON envelope the command-line tool prints, or
//! `{"error": "..."}`.

use serde_json::json;
use spectral_weights::reflexive::enumerate_reflexive;
use spectral_weights::report::{self, Report};
use spectral_weights::WeightSystem;
use wasm_bindgen::prelude::*;

fn parse_weights(text: &str) -> Result<WeightSystem, String> {
    let raw = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<i64>().map_err(|_| format!("'{s}' is not an integer")))
        .collect::<Result<Vec<_>, _>>()?;
    WeightSystem::normalized(&raw).map_err(|e| e.to_string())
}

fn respond(result: Result<Report, String>) -> String {
    match result {
        Ok(r) => r.to_json().unwrap_or_else(|e| error_json(&e.to_string())),
        Err(e) => error_json(&e),
    }
}

fn error_json(message: &str) -> String {
    json!({ "error": message }).to_string()
}

/// Weight systems above this size would stall the page.
const MAX_MU: u64 = 2000;

fn bounded(text: &str) -> Result<WeightSystem, String> {
    let w = parse_weights(text)?;
    if w.mu() > MAX_MU {
        return Err(format!("mu = {} is above the demo limit {MAX_MU}", w.mu()));
    }
    Ok(w)
}

/// Spectrum and step sequence of a comma or space separated weight list.
#[wasm_bindgen]
pub fn spectrum(weights: &str) -> String {
    respond(bounded(weights).map(|w| report::spectrum_report(&w)))
}

/// Jordan blocks of the monodromy logarithm.
#[wasm_bindgen]
pub fn jordan(weights: &str) -> String {
    respond(bounded(weights).map(|w| report::jordan_report(&w)))
}

/// Reflexive weight systems of dimension `n` (1 to 4 in the browser).
#[wasm_bindgen]
pub fn reflexive(n: u32) -> String {
    if n > 4 {
        return error_json("the browser demo stops at n = 4");
    }
    let n = n as usize;
    respond(enumerate_reflexive(n).map(|records| report::reflexive_report(n, &records)).map_err(|e| e.to_string()))
}
