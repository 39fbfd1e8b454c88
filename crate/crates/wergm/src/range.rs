//! Parameter lists on the command line: `lo:hi:count`, comma lists, or a
//! single value.

pub fn parse_reals(text: &str) -> Result<Vec<f64>, String> {
    let text = text.trim();
    if text.is_empty() {
        return Err("empty value".into());
    }
    let parts: Vec<&str> = text.split(':').collect();
    match parts.len() {
        1 => text.split(',').map(parse_real).collect(),
        3 => {
            let lo = parse_real(parts[0])?;
            let hi = parse_real(parts[1])?;
            let count: usize = parts[2]
                .trim()
                .parse()
                .map_err(|_| format!("bad count '{}' in range '{text}'", parts[2]))?;
            linspace(lo, hi, count).ok_or_else(|| format!("range '{text}' needs count >= 1, or >= 2 when lo != hi"))
        }
        _ => Err(format!("'{text}' is neither lo:hi:count nor a comma list")),
    }
}

fn parse_real(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("'{}' is not a number", s.trim()))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("'{}' is not finite", s.trim()))
    }
}

/// `count` evenly spaced values from `lo` to `hi`, both ends included.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Option<Vec<f64>> {
    match count {
        0 => None,
        1 if lo == hi => Some(vec![lo]),
        1 => None,
        _ => {
            let step = (hi - lo) / (count - 1) as f64;
            Some((0..count).map(|i| if i + 1 == count { hi } else { lo + step * i as f64 }).collect())
        }
    }
}

pub fn parse_ints(text: &str) -> Result<Vec<u32>, String> {
    text.split(',')
        .map(|s| s.trim().parse().map_err(|_| format!("'{}' is not a non-negative integer", s.trim())))
        .collect()
}

/// A `beta1,beta2` pair.
pub fn parse_point(text: &str) -> Result<(f64, f64), String> {
    match text.split(',').collect::<Vec<_>>()[..] {
        [a, b] => Ok((parse_real(a)?, parse_real(b)?)),
        _ => Err(format!("point '{text}' must be beta1,beta2")),
    }
}

/// `value:probability` atoms separated by commas.
pub fn parse_atoms(text: &str) -> Result<Vec<(f64, f64)>, String> {
    text.split(',')
        .map(|atom| match atom.split(':').collect::<Vec<_>>()[..] {
            [v, p] => Ok((parse_real(v)?, parse_real(p)?)),
            _ => Err(format!("atom '{atom}' must be value:probability")),
        })
        .collect()
}
