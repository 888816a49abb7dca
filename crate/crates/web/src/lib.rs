//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Each operation takes and returns JSON text. The plain functions in
//! [`ops`] are what the bindings call; they are usable (and tested)
//! natively.

use wasm_bindgen::prelude::*;

pub mod ops;

fn js(r: Result<String, String>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

/// Commutator `f g f⁻¹ g⁻¹` of two jets given as JSON documents.
#[wasm_bindgen]
pub fn jet_commutator(f: &str, g: &str) -> Result<String, JsValue> {
    js(ops::jet_commutator(f, g))
}

/// The four α-words of depth `k`.
#[wasm_bindgen]
pub fn alpha_words(k: usize) -> Result<String, JsValue> {
    js(ops::alpha_words(k))
}

/// Stable-manifold hunt for `diag(1/2, 2)` and a rotation by
/// `angle_degrees`.
#[wasm_bindgen]
pub fn stable_hunt(angle_degrees: f64, max_power: usize, seeds: usize) -> Result<String, JsValue> {
    js(ops::stable_hunt(angle_degrees, max_power, seeds))
}
