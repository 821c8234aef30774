//! Argument value parsers.

use shiftker_core::{ComplexValue, ParamValue};

/// Parses `a`, `a+bi`, `a-bi`, `bi`, `i` and `-i`.
pub fn complex(text: &str) -> Result<ComplexValue, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err("empty complex number".into());
    }
    let bad = || format!("cannot parse '{text}' as a complex number (expected a, a+bi or a-bi)");
    let Some(body) = s.strip_suffix('i') else {
        return match s.parse::<f64>() {
            Ok(re) if re.is_finite() => Ok(ComplexValue::new(re, 0.0)),
            _ => Err(bad()),
        };
    };
    // split at the last sign that is not part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        other => other,
    };
    let re: f64 = re.parse().map_err(|_| bad())?;
    let im: f64 = im.parse().map_err(|_| bad())?;
    if !re.is_finite() || !im.is_finite() {
        return Err(bad());
    }
    Ok(ComplexValue::new(re, im))
}

pub fn real(text: &str) -> Result<f64, String> {
    let v: f64 = text
        .trim()
        .parse()
        .map_err(|_| format!("cannot parse '{text}' as a real number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("'{text}' is not finite"))
    }
}

/// A parameter value: integer, then real, then complex.
pub fn param_value(text: &str) -> Result<ParamValue, String> {
    if let Ok(v) = text.trim().parse::<i64>() {
        return Ok(ParamValue::Int(v));
    }
    let z = complex(text)?;
    Ok(if z.im == 0.0 {
        ParamValue::Real(z.re)
    } else {
        ParamValue::Complex([z.re, z.im])
    })
}

/// `name=value`
pub fn assignment(text: &str) -> Result<(String, ParamValue), String> {
    let (name, value) = text
        .split_once('=')
        .ok_or_else(|| format!("expected name=value, got '{text}'"))?;
    if name.is_empty() {
        return Err(format!("missing parameter name in '{text}'"));
    }
    Ok((name.to_string(), param_value(value)?))
}

/// Most points a single range may produce.
pub const MAX_RANGE_POINTS: usize = 100_000;

/// `name=start:stop:step`, inclusive of `stop` up to rounding.
#[derive(Debug, Clone, PartialEq)]
pub struct Range {
    pub name: String,
    pub values: Vec<f64>,
}

pub fn range(text: &str) -> Result<Range, String> {
    let (name, spec) = text
        .split_once('=')
        .ok_or_else(|| format!("expected name=start:stop:step, got '{text}'"))?;
    let parts: Vec<&str> = spec.split(':').collect();
    let [start, stop, step] = parts.as_slice() else {
        return Err(format!("expected start:stop:step, got '{spec}'"));
    };
    let (start, stop, step) = (real(start)?, real(stop)?, real(step)?);
    if name.is_empty() {
        return Err(format!("missing parameter name in '{text}'"));
    }
    if !(step > 0.0) || stop < start {
        return Err(format!("range '{spec}' needs step > 0 and stop >= start"));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    if count > MAX_RANGE_POINTS {
        return Err(format!("range '{spec}' has {count} points (limit {MAX_RANGE_POINTS})"));
    }
    let values = (0..count).map(|i| start + i as f64 * step).collect();
    Ok(Range {
        name: name.to_string(),
        values,
    })
}
