//! Conversion of library values into report JSON. Field elements are exact
//! strings or coefficient arrays; subgroups are sorted class lists.

use serde_json::{json, Value};

use quadlat::ff::FiniteField;
use quadlat::localfield::RatFunc;
use quadlat::quadspace::SpaceInvariants;
use quadlat::{Elem, Field, JordanSplitting, Mat, Scalar, SquareClassSubgroup};

use crate::error::{CliError, Context};

pub fn elem(field: &Field, e: &Elem) -> Value {
    match e {
        Elem::Base(Scalar::Rat(r)) => Value::String(r.to_string()),
        Elem::Base(Scalar::Fun(r)) => ratfunc(field.base_field().constants().expect("function field"), r),
        Elem::Ext(coeffs) => Value::Array(coeffs.iter().map(|c| elem(field, c)).collect()),
    }
}

pub fn ratfunc(fq: &FiniteField, r: &RatFunc) -> Value {
    let idx = |p: &[quadlat::ff::Residue]| p.iter().map(|c| fq.index_of(c)).collect::<Vec<_>>();
    if r.den().len() == 1 {
        json!(idx(r.num()))
    } else {
        json!({ "num": idx(r.num()), "den": idx(r.den()) })
    }
}

pub fn matrix(field: &Field, m: &Mat) -> Value {
    Value::Array(m.to_rows().iter().map(|row| Value::Array(row.iter().map(|e| elem(field, e)).collect())).collect())
}

pub fn subgroup(g: SquareClassSubgroup) -> Value {
    json!(g.symbols())
}

pub fn invariants(inv: &SpaceInvariants) -> Value {
    json!([inv.dim, inv.det_class.symbol(), inv.hasse])
}

/// `[scale_exp, rank, det_class, hasse]` per component.
pub fn jordan(j: &JordanSplitting) -> Result<Value, CliError> {
    let rows = j
        .components
        .iter()
        .map(|c| {
            let inv = c.block.space().invariants().context("gram")?;
            Ok(json!([c.scale, c.block.rank(), inv.det_class.symbol(), inv.hasse]))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(Value::Array(rows))
}

/// Render a report as indented `key: value` lines.
pub fn text(v: &Value) -> String {
    let mut out = String::new();
    write_text(&mut out, "", v);
    out
}

fn write_text(out: &mut String, path: &str, v: &Value) {
    match v {
        Value::Object(map) if !map.is_empty() && path != "input_echo" => {
            for (k, x) in map {
                let p = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
                write_text(out, &p, x);
            }
        }
        _ => {
            out.push_str(path);
            out.push_str(": ");
            out.push_str(&v.to_string());
            out.push('\n');
        }
    }
}
