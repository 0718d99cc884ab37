//! WebAssembly bindings behind `www/index.html`.
//!
//! Every export takes plain strings or integers and returns a JSON string,
//! so the page needs no generated type glue beyond `JSON.parse`. Errors come
//! back as message strings and surface as thrown exceptions in JavaScript.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;
use wpvol::engine::v_cusp;
use wpvol::hyperelliptic::hyperelliptic_table;
use wpvol::scalars::{format_rational, parse_rational, to_wp_volume, PiGraded};
use wpvol::{ConeRule, Engine, EngineConfig, MarkingProfile, PsiMode, Reduction};

/// Largest n accepted by [`cusp_table`]; larger tables stall the page.
pub const MAX_CUSP_N: usize = 40;
/// Largest genus accepted by [`hyperelliptic`].
pub const MAX_GENUS: usize = 12;
/// Most cone points accepted by [`conical_volume`].
pub const MAX_CONES: usize = 16;

const DIGITS: usize = 12;

fn vol_json(vol: &PiGraded) -> Value {
    json!({
        "vol_coeff": format_rational(&vol.coeff),
        "pi_exp": vol.pi_exp,
        "decimal": vol.to_decimal(DIGITS),
    })
}

fn merge(mut a: Value, b: Value) -> Value {
    if let (Value::Object(a), Value::Object(b)) = (&mut a, b) {
        a.extend(b);
    }
    a
}

/// Volume of the sphere with cone angles `t·π`, given as a comma list such
/// as `"1/2, 1, 3/2, 1"`. `merged` selects the merged-node cone rule.
#[wasm_bindgen]
pub fn conical_volume(t: &str, merged: bool) -> Result<String, String> {
    let t = t
        .split(',')
        .map(|tok| parse_rational(tok.trim()).map_err(|e| e.to_string()))
        .collect::<Result<Vec<_>, _>>()?;
    if t.len() > MAX_CONES {
        return Err(format!("at most {MAX_CONES} cone points in the demo"));
    }
    let p = MarkingProfile::conical(&t).map_err(|e| e.to_string())?;
    let rule = if merged { ConeRule::MergedNode } else { ConeRule::Cusp };
    let cfg = EngineConfig::new(PsiMode::AveragedUnordered, Reduction::SymmetryReduced).with_cone_rule(rule);
    let v = Engine::new(cfg).volume(&p).map_err(|e| e.to_string())?;
    let vol = to_wp_volume(&v, p.len()).map_err(|e| e.to_string())?;
    let head = json!({
        "t": t.iter().map(format_rational).collect::<Vec<_>>(),
        "admissible": p.is_admissible().map_err(|e| e.to_string())?,
        "V": format_rational(&v),
    });
    Ok(merge(head, vol_json(&vol)).to_string())
}

/// Cusped volumes for `n = 3..=max_n`.
#[wasm_bindgen]
pub fn cusp_table(max_n: usize) -> Result<String, String> {
    if !(3..=MAX_CUSP_N).contains(&max_n) {
        return Err(format!("max_n must lie in 3..={MAX_CUSP_N}"));
    }
    let rows = (3..=max_n)
        .map(|n| {
            let v = v_cusp(n).map_err(|e| e.to_string())?;
            let vol = to_wp_volume(&v, n).map_err(|e| e.to_string())?;
            Ok(merge(json!({"n": n, "V": format_rational(&v)}), vol_json(&vol)))
        })
        .collect::<Result<Vec<_>, String>>()?;
    Ok(Value::Array(rows).to_string())
}

/// Hyperelliptic locus volumes for `g = 2..=g_max` and the consecutive ratios.
#[wasm_bindgen]
pub fn hyperelliptic(g_max: usize) -> Result<String, String> {
    if !(2..=MAX_GENUS).contains(&g_max) {
        return Err(format!("g_max must lie in 2..={MAX_GENUS}"));
    }
    let table = hyperelliptic_table(g_max).map_err(|e| e.to_string())?;
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|r| merge(json!({"g": r.g, "n": r.n, "v_norm": format_rational(&r.v_norm)}), vol_json(&r.vol)))
        .collect();
    let ratios: Vec<Value> = table
        .ratios
        .iter()
        .map(|r| json!({"g": r.g, "ratio_coeff": format_rational(&r.coeff), "ratio_pi_exp": r.pi_exp}))
        .collect();
    Ok(json!({"rows": rows, "ratios": ratios}).to_string())
}
