//! WebAssembly bindings behind `www/index.html`.
//!
//! Each export takes plain strings and returns a JSON string, so the page
//! needs no bindings beyond `wasm-bindgen`. The `*_json` functions hold the
//! logic and run natively in tests.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use skeinlab::skein;
use skeinlab::{LinkClass, ManifoldModel, ModuleTag, MoveTrace};

/// Largest plotting window, in exponent units from the origin.
pub const MAX_RADIUS: i64 = 40;

/// `S2xS1`, `lens:5,1`, `handlebody:2`, ... or a manifold document.
pub fn load_model(spec: &str) -> skeinlab::Result<ManifoldModel> {
    let spec = spec.trim();
    if spec.starts_with('{') {
        return ManifoldModel::from_json(spec);
    }
    let (name, params) = spec.split_once(':').unwrap_or((spec, ""));
    let params = params
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<i64>()
                .map_err(|_| skeinlab::Error::InvalidParams {
                    name: name.to_string(),
                    msg: format!("`{s}` is not an integer"),
                })
        })
        .collect::<skeinlab::Result<Vec<_>>>()?;
    ManifoldModel::builtin(name, &params)
}

/// Indices and the four summands of one link class.
pub fn index_json(manifold: &str, alpha: &str) -> skeinlab::Result<Value> {
    let m = load_model(manifold)?;
    let a = LinkClass::parse(alpha, &m)?;
    let ix = skein::indices(&m, &a)?;
    let mut summands = serde_json::Map::new();
    for tag in ModuleTag::ALL {
        let s = skein::summand(&m, &a, tag)?;
        summands.insert(
            tag.to_string(),
            json!({ "text": s.to_string(), "free": s.is_free() }),
        );
    }
    Ok(json!({
        "manifold": m.name,
        "alpha": a.to_string(),
        "eps_prime": ix.eps_prime,
        "eps": ix.eps,
        "mu": ix.mu,
        "eps2": ix.eps2,
        "summands": summands,
    }))
}

/// Evaluates a trace document and reduces it in `module`.
pub fn reduce_json(manifold: &str, trace: &str, module: &str) -> skeinlab::Result<Value> {
    let m = load_model(manifold)?;
    let tr = MoveTrace::from_json(trace, &m)?;
    let tag: ModuleTag = module.parse()?;
    let (raw, _) = skein::trace_evaluate(&m, &tr)?;
    let doubled = skein::gamma_prime(&m, &tr.alpha())?.scaled(2);
    let elem = skein::trace_evaluate_in(&m, &tr, tag)?;
    Ok(json!({
        "alpha": tr.alpha().to_string(),
        "raw": raw.as_array(),
        "reduced": doubled.reduce(raw.as_array()),
        "module": tag.to_string(),
        "element": elem.to_string(),
    }))
}

/// Points of the doubled exponent lattice of `alpha` inside the square of
/// half-width `radius`, together with the coset of `(x, y)` and its
/// canonical representative.
pub fn lattice_json(
    manifold: &str,
    alpha: &str,
    x: i64,
    y: i64,
    radius: i64,
) -> skeinlab::Result<Value> {
    let m = load_model(manifold)?;
    let a = LinkClass::parse(alpha, &m)?;
    let lat = skein::gamma_prime(&m, &a)?.scaled(2);
    let r = radius.clamp(1, MAX_RADIUS);
    let rep = lat.reduce([x, y]);
    let mut lattice = Vec::new();
    let mut coset = Vec::new();
    for px in -r..=r {
        for py in -r..=r {
            if lat.contains([px, py]) {
                lattice.push([px, py]);
            }
            if lat.contains([px - x, py - y]) {
                coset.push([px, py]);
            }
        }
    }
    Ok(json!({
        "alpha": a.to_string(),
        "canon": lat.canon(),
        "basis": lat.basis(),
        "radius": r,
        "query": [x, y],
        "representative": rep,
        "lattice": lattice,
        "coset": coset,
    }))
}

fn to_js(v: skeinlab::Result<Value>) -> Result<String, JsValue> {
    v.map(|v| v.to_string())
        .map_err(|e| JsValue::from_str(&format!("{}: {e}", e.category())))
}

#[wasm_bindgen]
pub fn index(manifold: &str, alpha: &str) -> Result<String, JsValue> {
    to_js(index_json(manifold, alpha))
}

#[wasm_bindgen]
pub fn reduce(manifold: &str, trace: &str, module: &str) -> Result<String, JsValue> {
    to_js(reduce_json(manifold, trace, module))
}

#[wasm_bindgen]
pub fn lattice(
    manifold: &str,
    alpha: &str,
    x: i32,
    y: i32,
    radius: i32,
) -> Result<String, JsValue> {
    to_js(lattice_json(
        manifold,
        alpha,
        x.into(),
        y.into(),
        radius.into(),
    ))
}
