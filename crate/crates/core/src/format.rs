//! Text and JSON forms of class vectors and sheaf objects.
//!
//! Class vectors print as `*=m; [i,j]=x; d=r` listing nonzero entries in
//! canonical vertex order; the zero vector prints as `0`.

use crate::error::{Error, Result};
use crate::lattice::{ClassVector, RootLattice, SheafObject};
use crate::weight::Vertex;

pub fn class_to_text(v: &ClassVector) -> String {
    let mut parts = Vec::new();
    if v.star != 0 {
        parts.push(format!("*={}", v.star));
    }
    for (i, arm) in v.branch.iter().enumerate() {
        for (j, &x) in arm.iter().enumerate() {
            if x != 0 {
                parts.push(format!("[{},{}]={x}", i + 1, j + 1));
            }
        }
    }
    if v.delta != 0 {
        parts.push(format!("d={}", v.delta));
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join("; ")
    }
}

pub fn class_to_json(v: &ClassVector) -> String {
    serde_json::to_string(v).expect("class vectors always serialize")
}

/// Parses the text form, or the JSON form when the input starts with `{`.
pub fn parse_class(lattice: &RootLattice, text: &str) -> Result<ClassVector> {
    let text = text.trim();
    if text.starts_with('{') {
        let v: ClassVector =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("vector: {e}")))?;
        lattice.check_shape(&v)?;
        return Ok(v);
    }
    let mut out = lattice.zero();
    if text == "0" {
        return Ok(out);
    }
    let mut seen_star = false;
    let mut seen_delta = false;
    let mut seen = std::collections::HashSet::new();
    for entry in text.split(';') {
        let entry = entry.trim();
        if entry.is_empty() {
            continue;
        }
        let (key, value) = entry
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("vector entry `{entry}` has no `=`")))?;
        let value: i64 = value
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad coefficient in `{entry}`")))?;
        match key.trim() {
            "*" => {
                if std::mem::replace(&mut seen_star, true) {
                    return Err(Error::Parse("`*` given twice".into()));
                }
                out.star = value;
            }
            "d" => {
                if std::mem::replace(&mut seen_delta, true) {
                    return Err(Error::Parse("`d` given twice".into()));
                }
                out.delta = value;
            }
            other => {
                let vertex = Vertex::parse(other)?;
                let Vertex::Arm { branch, depth } = vertex else {
                    unreachable!()
                };
                if lattice.graph().index_of(vertex).is_none() {
                    return Err(Error::ShapeMismatch(format!(
                        "vertex {vertex} does not exist for weights {}",
                        lattice.weights()
                    )));
                }
                if !seen.insert(vertex) {
                    return Err(Error::Parse(format!("{vertex} given twice")));
                }
                out.branch[branch - 1][depth - 1] = value;
            }
        }
    }
    Ok(out)
}

/// Parses `S[i,j]^r`, `Sgen^r` or `O(k=..;a=..)`. A missing exponent means 1
/// and a missing `a` means all zeros.
pub fn parse_object(text: &str) -> Result<SheafObject> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Parse(format!("unknown object syntax `{}`", text.trim()));
    let split_power = |s: &str| -> Result<(String, i64)> {
        match s.split_once('^') {
            Some((base, exp)) => Ok((base.to_string(), exp.parse().map_err(|_| bad())?)),
            None => Ok((s.to_string(), 1)),
        }
    };
    if let Some(rest) = t.strip_prefix("Sgen") {
        let (base, length) = split_power(rest)?;
        if !base.is_empty() {
            return Err(bad());
        }
        return Ok(SheafObject::Generic { length });
    }
    if let Some(rest) = t.strip_prefix("S[") {
        let (base, length) = split_power(rest)?;
        let inner = base.strip_suffix(']').ok_or_else(bad)?;
        let (i, j) = inner.split_once(',').ok_or_else(bad)?;
        return Ok(SheafObject::Tube {
            branch: i.parse().map_err(|_| bad())?,
            top: j.parse().map_err(|_| bad())?,
            length,
        });
    }
    if let Some(rest) = t.strip_prefix("O(") {
        let inner = rest.strip_suffix(')').ok_or_else(bad)?;
        let mut k = 0;
        let mut raw = None;
        for field in inner.split(';').filter(|f| !f.is_empty()) {
            let (key, value) = field.split_once('=').ok_or_else(bad)?;
            match key {
                "k" => k = value.parse().map_err(|_| bad())?,
                "a" => {
                    let coords = if value.is_empty() {
                        Vec::new()
                    } else {
                        value
                            .split(',')
                            .map(|x| x.parse::<i64>().map_err(|_| bad()))
                            .collect::<Result<Vec<_>>>()?
                    };
                    raw = Some(coords);
                }
                _ => return Err(bad()),
            }
        }
        return Ok(SheafObject::Line {
            k,
            raw: raw.unwrap_or_default(),
        });
    }
    Err(bad())
}
