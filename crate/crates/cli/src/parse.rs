//! Parsing of command-line values: shape lists, `h` ranges and time budgets.

use std::time::Duration;

use flagrank_core::FlagShape;

use crate::CliError;

/// Splits a list of shapes separated by commas or whitespace. Commas also
/// separate the `k` values inside a shape, so a shape ends at the digits
/// following its `;`.
pub fn parse_shape_list(text: &str) -> Result<Vec<FlagShape>, CliError> {
    let mut shapes = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let semi = rest
            .find(';')
            .ok_or_else(|| CliError::Usage(format!("shape list: missing ';n' in {:?}", rest)))?;
        let digits = rest[semi + 1..].bytes().take_while(u8::is_ascii_digit).count();
        let end = semi + 1 + digits;
        shapes.push(rest[..end].parse::<FlagShape>().map_err(CliError::from)?);
        let tail = &rest[end..];
        let separated = tail.trim_start();
        let separated = separated.strip_prefix(',').unwrap_or(separated).trim_start();
        if !tail.is_empty() && separated.len() == tail.len() {
            return Err(CliError::Usage(format!("shape list: unexpected {:?}", tail)));
        }
        rest = separated;
    }
    Ok(shapes)
}

/// `h` values: `2`, `1..4` (inclusive) or `2,3,5`. Zero is rejected.
pub fn parse_h_list(text: &str) -> Result<Vec<usize>, CliError> {
    let bad = || CliError::Usage(format!("invalid h value {:?}", text));
    let mut out = Vec::new();
    for piece in text.split(',') {
        let piece = piece.trim();
        if let Some((a, b)) = piece.split_once("..") {
            let (a, b): (usize, usize) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
            if a > b {
                return Err(bad());
            }
            out.extend(a..=b);
        } else {
            out.push(piece.parse().map_err(|_| bad())?);
        }
    }
    if out.is_empty() || out.contains(&0) {
        return Err(CliError::Usage("h must be at least 1".into()));
    }
    Ok(out)
}

/// Durations such as `90`, `90s`, `500ms`, `2m`, `1h`.
pub fn parse_budget(text: &str) -> Result<Duration, CliError> {
    let text = text.trim();
    let split = text.find(|c: char| !c.is_ascii_digit()).unwrap_or(text.len());
    let (number, unit) = text.split_at(split);
    let value: u64 = number.parse().map_err(|_| CliError::Usage(format!("invalid budget {:?}", text)))?;
    let seconds = |factor: u64| Duration::from_secs(value.saturating_mul(factor));
    match unit {
        "" | "s" => Ok(seconds(1)),
        "ms" => Ok(Duration::from_millis(value)),
        "m" | "min" => Ok(seconds(60)),
        "h" => Ok(seconds(3600)),
        _ => Err(CliError::Usage(format!("invalid budget unit {:?}", unit))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_lists() {
        let shapes = parse_shape_list("G:1;3,G:0,1;3,1,2;4").unwrap();
        let text: Vec<String> = shapes.iter().map(ToString::to_string).collect();
        assert_eq!(text, ["G:1;3", "G:0,1;3", "1,2;4"]);
        assert!(parse_shape_list("").unwrap().is_empty());
        assert_eq!(parse_shape_list(" 0,1;2  G:1;3 , 1;4").unwrap().len(), 3);
        assert!(parse_shape_list("1,2").is_err());
        assert!(parse_shape_list("1;3x").is_err());
        assert!(parse_shape_list("2,1;4").is_err());
    }

    #[test]
    fn h_lists() {
        assert_eq!(parse_h_list("2").unwrap(), [2]);
        assert_eq!(parse_h_list("1..3").unwrap(), [1, 2, 3]);
        assert_eq!(parse_h_list("2,5").unwrap(), [2, 5]);
        assert!(parse_h_list("0").is_err());
        assert!(parse_h_list("3..1").is_err());
    }

    #[test]
    fn budgets() {
        assert_eq!(parse_budget("60s").unwrap(), Duration::from_secs(60));
        assert_eq!(parse_budget("2m").unwrap(), Duration::from_secs(120));
        assert_eq!(parse_budget("15").unwrap(), Duration::from_secs(15));
        assert_eq!(parse_budget("250ms").unwrap(), Duration::from_millis(250));
        assert!(parse_budget("soon").is_err());
    }
}
