//! Browser bindings for the `twinroot` demo page.
//!
//! Every export takes plain strings and numbers and returns a JSON string. The
//! `*_json` functions hold the logic and are usable from native Rust.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use twinroot::chevalley::SplitGroup;
use twinroot::field::Field;
use twinroot::gcm::GeneralizedCartanMatrix;
use twinroot::roots::{RootSystem, RootVector};
use twinroot::trd::{building_ball, BallConfig, GroupOracle, Sign, SplitOracle, Su3Oracle};
use twinroot::weyl::WeylGroup;

/// Largest ball radius the page may ask for.
pub const MAX_RADIUS: usize = 6;

fn msg(e: twinroot::Error) -> String {
    e.to_string()
}

fn parse_gcm(text: &str) -> Result<GeneralizedCartanMatrix, String> {
    let v: Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
    // accept a bare matrix as well as {"n":..,"a":..}
    let v = match v {
        Value::Array(rows) => json!({"n": rows.len(), "a": rows}),
        other => other,
    };
    serde_json::from_value(v).map_err(|e| e.to_string())
}

fn parse_root(s: &str, n: usize) -> Result<RootVector, String> {
    let v: Vec<i64> = s
        .split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|_| format!("{:?} is not an integer", x.trim())))
        .collect::<Result<_, _>>()?;
    match v.as_slice() {
        [i] if n != 1 => {
            let i = usize::try_from(*i).map_err(|_| format!("negative index {i}"))?;
            if i >= n {
                return Err(format!("simple root index {i} out of range for rank {n}"));
            }
            Ok(RootVector::simple(n, i))
        }
        _ if v.len() == n => Ok(RootVector(v)),
        _ => Err(format!("root has {} coordinates, expected {n}", v.len())),
    }
}

fn check_radius(radius: usize) -> Result<(), String> {
    if radius > MAX_RADIUS {
        return Err(format!("radius {radius} exceeds the demo limit {MAX_RADIUS}"));
    }
    Ok(())
}

/// Weyl group elements of length at most `radius`, as `[{"word":[..],"length":n}]`.
pub fn weyl_ball_json(gcm: &str, radius: usize) -> Result<String, String> {
    check_radius(radius)?;
    let a = parse_gcm(gcm)?;
    let ball = WeylGroup::new(&a).enumerate_ball(radius).map_err(msg)?;
    let rows: Vec<Value> = ball.iter().map(|w| json!({"word": w.word(), "length": w.length()})).collect();
    Ok(Value::Array(rows).to_string())
}

/// Roots of the closed interval `[alpha, beta]`. A root is either a simple root
/// index or a comma separated coordinate vector.
pub fn root_interval_json(gcm: &str, alpha: &str, beta: &str) -> Result<String, String> {
    let a = parse_gcm(gcm)?;
    let rs = RootSystem::new(&a);
    let (alpha, beta) = (parse_root(alpha, a.rank())?, parse_root(beta, a.rank())?);
    let prenilpotent = rs.is_prenilpotent_pair(&alpha, &beta).map_err(msg)?;
    let members = if prenilpotent {
        let iv = rs.closed_interval(&alpha, &beta).map_err(msg)?;
        serde_json::to_value(&iv.members).map_err(|e| e.to_string())?
    } else {
        Value::Null
    };
    Ok(json!({"prenilpotent": prenilpotent, "members": members}).to_string())
}

/// Both halves of the twin tree ball for `group` in `sl2`, `sl3`, `su3`.
pub fn twin_tree_json(group: &str, q: u32, radius: usize) -> Result<String, String> {
    check_radius(radius)?;
    let split = |n| -> Result<Box<dyn GroupOracle>, twinroot::Error> {
        Ok(Box::new(SplitOracle::new(SplitGroup::loop_group(n, Field::with_order(q)?)?)?))
    };
    let o = match group {
        "sl2" => split(2).map_err(msg)?,
        "sl3" => split(3).map_err(msg)?,
        "su3" => Box::new(Su3Oracle::new(q).map_err(msg)?),
        other => return Err(format!("unknown group {other:?}")),
    };
    let cfg = BallConfig { radius, ..BallConfig::default() };
    let plus = building_ball(o.as_ref(), Sign::Plus, &cfg).map_err(msg)?;
    let minus = building_ball(o.as_ref(), Sign::Minus, &cfg).map_err(msg)?;
    Ok(json!({"plus": plus.to_json(), "minus": minus.to_json()}).to_string())
}

#[wasm_bindgen]
pub fn weyl_ball(gcm: &str, radius: usize) -> Result<String, JsError> {
    weyl_ball_json(gcm, radius).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn root_interval(gcm: &str, alpha: &str, beta: &str) -> Result<String, JsError> {
    root_interval_json(gcm, alpha, beta).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn twin_tree(group: &str, q: u32, radius: usize) -> Result<String, JsError> {
    twin_tree_json(group, q, radius).map_err(|e| JsError::new(&e))
}
