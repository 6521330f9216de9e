//! Argument value parsers shared by the subcommands.

use intuitive_abel::{parse_rational, Rational};

/// A decimal or `p/q` literal.
pub fn rational(text: &str) -> Result<Rational, String> {
    parse_rational(text).map_err(|e| e.to_string())
}

/// Comma-separated rationals; an item `start:stop:step` expands to the
/// inclusive arithmetic progression, computed exactly.
pub fn grid(text: &str) -> Result<Vec<Rational>, String> {
    let mut out = Vec::new();
    for item in text.split(',') {
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [single] => out.push(rational(single)?),
            [start, stop, step] => {
                let (start, stop, step) = (rational(start)?, rational(stop)?, rational(step)?);
                if step <= Rational::from(0) {
                    return Err(format!("step must be positive in `{item}`"));
                }
                let mut v = start;
                while v <= stop {
                    out.push(v.clone());
                    v += step.clone();
                }
            }
            _ => return Err(format!("expected a value or start:stop:step, got `{item}`")),
        }
    }
    if out.is_empty() {
        return Err("empty grid".into());
    }
    Ok(out)
}

/// Comma-separated sizes; `a:b` and `a:b:step` expand inclusively.
pub fn sizes(text: &str) -> Result<Vec<usize>, String> {
    let num = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| format!("`{s}` is not a non-negative integer"))
    };
    let mut out = Vec::new();
    for item in text.split(',') {
        let parts: Vec<&str> = item.split(':').collect();
        let (start, stop, step) = match parts.as_slice() {
            [single] => {
                out.push(num(single)?);
                continue;
            }
            [a, b] => (num(a)?, num(b)?, 1),
            [a, b, c] => (num(a)?, num(b)?, num(c)?),
            _ => return Err(format!("expected n, a:b or a:b:step, got `{item}`")),
        };
        if step == 0 {
            return Err(format!("zero step in `{item}`"));
        }
        out.extend((start..=stop).step_by(step));
    }
    if out.is_empty() {
        return Err("empty size list".into());
    }
    Ok(out)
}

/// `lo,hi`
pub fn bracket(text: &str) -> Result<(Rational, Rational), String> {
    match text.split(',').collect::<Vec<_>>().as_slice() {
        [lo, hi] => Ok((rational(lo)?, rational(hi)?)),
        _ => Err(format!("expected lo,hi, got `{text}`")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids_and_ranges() {
        let g = grid("0.25:0.5:0.125,2/3").unwrap();
        let want: Vec<Rational> = ["1/4", "3/8", "1/2", "2/3"]
            .iter()
            .map(|s| rational(s).unwrap())
            .collect();
        assert_eq!(g, want);
        assert!(grid("1:2:0").is_err());
        assert!(grid("1:2").is_err());
        assert_eq!(
            sizes("1:4,8,10:20:5").unwrap(),
            vec![1, 2, 3, 4, 8, 10, 15, 20]
        );
        assert!(sizes("x").is_err());
        assert_eq!(bracket("0.1,1").unwrap().1, Rational::from(1));
        assert!(bracket("1").is_err());
    }
}
