//! Browser bindings. Every export takes and returns JSON strings; the
//! `*_json` functions hold the logic so they can be tested natively.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use primnorm::bench::{case_group, run_case_detailed, Family, TopGroup};
use primnorm::io::{group_to_json, parse_group};
use primnorm::reduction::normalizer_pa;
use primnorm::structure::classify_pa;
use primnorm::wreath::{wreath, WreathAction};
use primnorm::Error;

type Out = Result<String, String>;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn layout(d: &primnorm::structure::ProductDecomposition) -> Value {
    json!({
        "ell": d.ell,
        "m": d.m,
        "relabeling": d.relabeling.one_based(),
    })
}

pub fn classify_json(group: &str, seed: u64) -> Out {
    let g = parse_group(group).map_err(err)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let out = match classify_pa(&g, &mut rng) {
        Ok(d) => {
            let mut v = layout(&d);
            v["type"] = json!("PA");
            v["socle_order"] = json!(d.socle.socle.order().to_string());
            v
        }
        Err(Error::NotPa(reason)) => json!({ "type": "not-PA", "reason": reason }),
        Err(e) => return Err(err(e)),
    };
    Ok(out.to_string())
}

pub fn normalizer_json(group: &str, seed: u64) -> Out {
    let g = parse_group(group).map_err(err)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let res = normalizer_pa(&g, &mut rng).map_err(err)?;
    let mut out = group_to_json(&res.normalizer);
    out["order"] = json!(res.normalizer.order().to_string());
    out["report"] = serde_json::to_value(&res.report).map_err(err)?;
    out["layout"] = layout(&res.decomposition);
    Ok(out.to_string())
}

pub fn make_wreath_json(base: &str, top: &str, action: &str) -> Out {
    let h = parse_group(base).map_err(err)?;
    let k = parse_group(top).map_err(err)?;
    let action = match action {
        "product" => WreathAction::Product,
        "imprimitive" => WreathAction::Imprimitive,
        other => return Err(format!("unknown action {other:?}")),
    };
    let w = wreath(&h, &k, action).map_err(err)?;
    Ok(group_to_json(&w).to_string())
}

/// A product-action wreath behind a seeded random relabelling.
pub fn hidden_wreath_json(family: &str, ell: usize, top: &str, seed: u64) -> Out {
    let family: Family = family.parse().map_err(err)?;
    let top: TopGroup = top.parse().map_err(err)?;
    let g = case_group(family, ell, top, seed).map_err(err)?;
    Ok(group_to_json(&g).to_string())
}

/// One benchmark case: the hidden input group, its layout and the timings.
pub fn bench_case_json(family: &str, ell: usize, top: &str, seed: u64) -> Out {
    let family: Family = family.parse().map_err(err)?;
    let top: TopGroup = top.parse().map_err(err)?;
    let (case, group, res) = run_case_detailed(family, ell, top, seed).map_err(err)?;
    Ok(json!({
        "case": case,
        "group": group_to_json(&group),
        "layout": layout(&res.decomposition),
        "report": res.report,
    })
    .to_string())
}

#[wasm_bindgen]
pub fn classify(group: &str, seed: u64) -> Result<String, JsError> {
    classify_json(group, seed).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn normalizer(group: &str, seed: u64) -> Result<String, JsError> {
    normalizer_json(group, seed).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = makeWreath)]
pub fn make_wreath(base: &str, top: &str, action: &str) -> Result<String, JsError> {
    make_wreath_json(base, top, action).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = hiddenWreath)]
pub fn hidden_wreath(family: &str, ell: usize, top: &str, seed: u64) -> Result<String, JsError> {
    hidden_wreath_json(family, ell, top, seed).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = benchCase)]
pub fn bench_case(family: &str, ell: usize, top: &str, seed: u64) -> Result<String, JsError> {
    bench_case_json(family, ell, top, seed).map_err(|e| JsError::new(&e))
}
