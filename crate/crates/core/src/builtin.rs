//! Builtin representation names.
//!
//! ```text
//! rep    := "su2:spin=" SPIN
//!         | "torus:dim=" N ",weights=" JSON-ARRAY-OF-ARRAYS
//!         | "sum(" rep "," rep ")"
//!         | "tensor(" rep "," rep ")"
//! SPIN   := decimal (e.g. 1.5) or fraction (e.g. 3/2)
//! ```

use crate::error::{Error, Result};
use crate::rep::{direct_sum, su2_spin, tensor, torus, UnitaryRep};

pub fn parse_rep(name: &str) -> Result<UnitaryRep> {
    let s = name.trim();
    if let Some(inner) = strip_call(s, "sum")? {
        let (a, b) = split_operands(inner)?;
        return direct_sum(&parse_rep(a)?, &parse_rep(b)?);
    }
    if let Some(inner) = strip_call(s, "tensor")? {
        let (a, b) = split_operands(inner)?;
        return tensor(&parse_rep(a)?, &parse_rep(b)?);
    }
    if let Some(rest) = s.strip_prefix("su2:") {
        let value = rest
            .trim()
            .strip_prefix("spin=")
            .ok_or_else(|| Error::Parse(format!("expected su2:spin=<j>, got {s:?}")))?;
        return su2_spin(parse_spin(value)?).map_err(|e| Error::Parse(e.to_string()));
    }
    if let Some(rest) = s.strip_prefix("torus:") {
        let (dim_part, weights_part) = split_top_level(rest)?;
        let dim: usize = dim_part
            .trim()
            .strip_prefix("dim=")
            .and_then(|d| d.trim().parse().ok())
            .ok_or_else(|| Error::Parse(format!("expected dim=<n> in {s:?}")))?;
        let weights_json = weights_part
            .trim()
            .strip_prefix("weights=")
            .ok_or_else(|| Error::Parse(format!("expected weights=[[...]] in {s:?}")))?;
        let weights: Vec<Vec<f64>> = serde_json::from_str(weights_json)
            .map_err(|e| Error::Parse(format!("bad torus weights {weights_json:?}: {e}")))?;
        return torus(dim, &weights).map_err(|e| Error::Parse(e.to_string()));
    }
    Err(Error::Parse(format!("unknown representation {s:?}")))
}

/// Accepts `1.5`, `3/2`, `2`.
pub fn parse_spin(text: &str) -> Result<f64> {
    let t = text.trim();
    let bad = || Error::Parse(format!("bad spin value {t:?}"));
    if let Some((num, den)) = t.split_once('/') {
        let n: f64 = num.trim().parse().map_err(|_| bad())?;
        let d: f64 = den.trim().parse().map_err(|_| bad())?;
        if d == 0.0 {
            return Err(bad());
        }
        Ok(n / d)
    } else {
        t.parse().map_err(|_| bad())
    }
}

fn strip_call<'a>(s: &'a str, name: &str) -> Result<Option<&'a str>> {
    let Some(rest) = s.strip_prefix(name) else {
        return Ok(None);
    };
    let Some(rest) = rest.trim_start().strip_prefix('(') else {
        return Ok(None);
    };
    rest.strip_suffix(')')
        .map(Some)
        .ok_or_else(|| Error::Parse(format!("unbalanced parentheses in {s:?}")))
}

const REP_PREFIXES: [&str; 4] = ["su2:", "torus:", "sum", "tensor"];

/// Splits combinator arguments at the top-level comma that starts a new
/// representation name (torus descriptions contain commas of their own).
fn split_operands(s: &str) -> Result<(&str, &str)> {
    let mut depth = 0i32;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => {
                let rest = s[i + 1..].trim_start();
                if REP_PREFIXES.iter().any(|p| rest.starts_with(p)) {
                    return Ok((&s[..i], &s[i + 1..]));
                }
            }
            _ => {}
        }
        if depth < 0 {
            return Err(Error::Parse(format!("unbalanced brackets in {s:?}")));
        }
    }
    Err(Error::Parse(format!("expected two representations separated by a comma in {s:?}")))
}

/// Splits at the first comma outside parentheses and brackets.
fn split_top_level(s: &str) -> Result<(&str, &str)> {
    let mut depth = 0i32;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => return Ok((&s[..i], &s[i + 1..])),
            _ => {}
        }
        if depth < 0 {
            return Err(Error::Parse(format!("unbalanced brackets in {s:?}")));
        }
    }
    Err(Error::Parse(format!("expected two comma-separated parts in {s:?}")))
}
