//! Text formats: connection-set files, truth tables, element lists, times.
//!
//! Elements are MSB-first binary strings (`110` is `x_1 = 1, x_2 = 1, x_3 = 0`)
//! or `0x`-prefixed hex masks read under the same convention.

use std::collections::BTreeSet;
use std::fmt;

use num_rational::Ratio;
use pest_lab::{BooleanFunction, ConnectionSet, GroupElement, MAX_M};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InputError {
    ZeroElement { line: usize },
    WidthMismatch { line: usize, m: u32 },
    BadElement { line: usize, text: String },
    MissingDimension,
    DimensionOutOfRange(u32),
    EmptySupport,
    BadTruthTable(String),
    BadJson(String),
    BadList(String),
    BadTime(String),
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputError::ZeroElement { line } => {
                write!(
                    f,
                    "line {line}: the zero element cannot be in a connection set"
                )
            }
            InputError::WidthMismatch { line, m } => {
                write!(f, "line {line}: element does not have width m = {m}")
            }
            InputError::BadElement { line, text } => {
                write!(f, "line {line}: cannot read element {text:?}")
            }
            InputError::MissingDimension => {
                write!(f, "hex elements need an explicit --m")
            }
            InputError::DimensionOutOfRange(m) => write!(f, "m = {m} outside 1..={MAX_M}"),
            InputError::EmptySupport => write!(f, "connection set is empty"),
            InputError::BadTruthTable(why) => write!(f, "truth table: {why}"),
            InputError::BadJson(why) => write!(f, "JSON input: {why}"),
            InputError::BadList(why) => write!(f, "element list: {why}"),
            InputError::BadTime(text) => write!(f, "cannot read time {text:?}"),
        }
    }
}

impl std::error::Error for InputError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedSupport {
    pub set: ConnectionSet,
    pub warnings: Vec<String>,
}

enum Token<'a> {
    Binary(&'a str),
    Hex(&'a str),
}

fn token(line: usize, text: &str) -> Result<Token<'_>, InputError> {
    let bad = || InputError::BadElement {
        line,
        text: text.to_string(),
    };
    if let Some(hex) = text.strip_prefix("0x").or_else(|| text.strip_prefix("0X")) {
        if hex.is_empty() || !hex.chars().all(|c| c.is_ascii_hexdigit()) {
            return Err(bad());
        }
        Ok(Token::Hex(hex))
    } else if !text.is_empty() && text.chars().all(|c| c == '0' || c == '1') {
        Ok(Token::Binary(text))
    } else {
        Err(bad())
    }
}

fn check_m(m: u32) -> Result<u32, InputError> {
    if (1..=MAX_M).contains(&m) {
        Ok(m)
    } else {
        Err(InputError::DimensionOutOfRange(m))
    }
}

fn value(line: usize, tok: &Token<'_>, m: u32) -> Result<GroupElement, InputError> {
    let width = InputError::WidthMismatch { line, m };
    let bits = match tok {
        Token::Binary(s) if s.len() != m as usize => return Err(width),
        Token::Binary(s) => u32::from_str_radix(s, 2).map_err(|_| width.clone())?,
        Token::Hex(s) => u32::from_str_radix(s, 16).map_err(|_| width.clone())?,
    };
    let z = GroupElement(bits);
    if !z.fits(m) {
        return Err(width);
    }
    Ok(z)
}

/// Parses one element given the dimension.
pub fn parse_element(text: &str, m: u32) -> Result<GroupElement, InputError> {
    let text = text.trim();
    value(1, &token(1, text)?, m)
}

/// Comma-separated elements, e.g. `000,001,101,100`.
pub fn parse_elements(text: &str, m: u32, count: usize) -> Result<Vec<GroupElement>, InputError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != count {
        return Err(InputError::BadList(format!(
            "expected {count} comma-separated elements, got {}",
            parts.len()
        )));
    }
    parts.iter().map(|p| parse_element(p, m)).collect()
}

/// Reads a connection-set file. Each non-comment line holds one element;
/// `#` starts a comment. A JSON document with a `support` array (as
/// written by `spectrum --json` and the lift commands) is also accepted.
pub fn parse_support(text: &str, m: Option<u32>) -> Result<ParsedSupport, InputError> {
    if text.trim_start().starts_with('{') {
        return parse_support_json(text, m);
    }
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect();
    parse_support_lines(&lines, m)
}

fn parse_support_json(text: &str, m: Option<u32>) -> Result<ParsedSupport, InputError> {
    let doc: serde_json::Value =
        serde_json::from_str(text).map_err(|e| InputError::BadJson(e.to_string()))?;
    let support = doc
        .get("support")
        .and_then(|s| s.as_array())
        .ok_or_else(|| InputError::BadJson("missing \"support\" array".into()))?;
    let lines = support
        .iter()
        .enumerate()
        .map(|(i, v)| {
            v.as_str().map(|s| (i + 1, s)).ok_or_else(|| {
                InputError::BadJson(format!("support entry {} is not a string", i + 1))
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let m = m.or_else(|| doc.get("m").and_then(|v| v.as_u64()).map(|v| v as u32));
    parse_support_lines(&lines, m)
}

fn parse_support_lines(
    lines: &[(usize, &str)],
    m: Option<u32>,
) -> Result<ParsedSupport, InputError> {
    let tokens = lines
        .iter()
        .map(|&(n, l)| token(n, l).map(|t| (n, t)))
        .collect::<Result<Vec<_>, _>>()?;
    if tokens.is_empty() {
        return Err(InputError::EmptySupport);
    }
    let longest = tokens
        .iter()
        .filter_map(|(_, t)| match t {
            Token::Binary(s) => Some(s.len() as u32),
            Token::Hex(_) => None,
        })
        .max();
    let m = check_m(m.or(longest).ok_or(InputError::MissingDimension)?)?;

    let mut seen = BTreeSet::new();
    let mut warnings = Vec::new();
    for (line, tok) in &tokens {
        let z = value(*line, tok, m)?;
        if z.is_zero() {
            return Err(InputError::ZeroElement { line: *line });
        }
        if !seen.insert(z) {
            warnings.push(format!(
                "line {line}: duplicate element {} ignored",
                z.to_binary(m)
            ));
        }
    }
    let set = ConnectionSet::new(m, seen).expect("elements validated above");
    Ok(ParsedSupport { set, warnings })
}

/// A truth table: one line of `2^m` characters in `{0, 1}`, index `x`
/// holding `f(x)` for the MSB-first reading of `x`.
pub fn parse_truth_table(text: &str, m: Option<u32>) -> Result<BooleanFunction, InputError> {
    let body: String = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .flat_map(|l| l.chars())
        .filter(|c| !c.is_whitespace())
        .collect();
    if body.is_empty() {
        return Err(InputError::BadTruthTable("no entries".into()));
    }
    if let Some(c) = body.chars().find(|c| *c != '0' && *c != '1') {
        return Err(InputError::BadTruthTable(format!(
            "unexpected character {c:?}"
        )));
    }
    let len = body.len();
    if !len.is_power_of_two() {
        return Err(InputError::BadTruthTable(format!(
            "length {len} is not a power of two"
        )));
    }
    let inferred = len.trailing_zeros();
    if let Some(m) = m {
        if m != inferred {
            return Err(InputError::BadTruthTable(format!(
                "length {len} does not match m = {m}"
            )));
        }
    }
    let m = check_m(inferred)?;
    BooleanFunction::new(m, body.chars().map(|c| c == '1').collect())
        .map_err(|e| InputError::BadTruthTable(e.to_string()))
}

/// A time as a coefficient of pi: `1/2`, `1/2pi`, `1/2π`, `3/4*pi`, `pi/4`.
pub fn parse_time(text: &str) -> Result<Ratio<i64>, InputError> {
    let bad = || InputError::BadTime(text.to_string());
    let t = text.trim();
    let t = t
        .strip_suffix('π')
        .or_else(|| t.strip_suffix("pi"))
        .map(|s| s.trim_end().trim_end_matches('*').trim_end())
        .map(|s| if s.is_empty() { "1" } else { s })
        .unwrap_or(t);
    let rational = if let Some(rest) = t.strip_prefix('π').or_else(|| t.strip_prefix("pi")) {
        if rest.is_empty() {
            "1".to_string()
        } else {
            format!("1{}", rest.trim())
        }
    } else {
        t.to_string()
    };
    let (num, den) = match rational.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (rational.as_str(), "1"),
    };
    let num: i64 = num.parse().map_err(|_| bad())?;
    let den: i64 = den.parse().map_err(|_| bad())?;
    if den <= 0 || num < 0 {
        return Err(bad());
    }
    Ok(Ratio::new(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn members(p: &ParsedSupport) -> Vec<u32> {
        p.set.members().iter().map(|z| z.0).collect()
    }

    #[test]
    fn binary_support() {
        let p = parse_support("001\n110\n010\n", None).unwrap();
        assert_eq!(p.set.m(), 3);
        assert_eq!(members(&p), vec![0b001, 0b010, 0b110]);
        assert!(p.warnings.is_empty());
    }

    #[test]
    fn hex_support_needs_m() {
        let p = parse_support("0x6\n0x5\n", Some(3)).unwrap();
        assert_eq!(members(&p), vec![0b101, 0b110]);
        assert_eq!(
            parse_support("0x6\n", None),
            Err(InputError::MissingDimension)
        );
        assert_eq!(
            parse_support("0x9\n", Some(3)),
            Err(InputError::WidthMismatch { line: 1, m: 3 })
        );
    }

    #[test]
    fn comments_and_duplicates() {
        let p = parse_support("# header\n001 # one\n\n001\n110\n", None).unwrap();
        assert_eq!(members(&p), vec![0b001, 0b110]);
        assert_eq!(
            p.warnings,
            vec!["line 4: duplicate element 001 ignored".to_string()]
        );
    }

    #[test]
    fn support_errors_name_the_line() {
        assert_eq!(
            parse_support("001\n000\n", None),
            Err(InputError::ZeroElement { line: 2 })
        );
        assert_eq!(
            parse_support("001\n01\n", None),
            Err(InputError::WidthMismatch { line: 2, m: 3 })
        );
        assert!(matches!(
            parse_support("001\n0a1\n", None),
            Err(InputError::BadElement { line: 2, .. })
        ));
        assert_eq!(
            parse_support("# nothing\n", None),
            Err(InputError::EmptySupport)
        );
    }

    #[test]
    fn json_support() {
        let doc = r#"{"schema": "pest-lab/1", "m": 3, "support": ["001", "110"]}"#;
        assert_eq!(
            members(&parse_support(doc, None).unwrap()),
            vec![0b001, 0b110]
        );
    }

    #[test]
    fn truth_tables() {
        let f = parse_truth_table("0110\n", None).unwrap();
        assert_eq!(f.m(), 2);
        assert_eq!(f.table(), &[false, true, true, false]);
        assert!(parse_truth_table("011", None).is_err());
        assert!(parse_truth_table("0110", Some(3)).is_err());
        assert!(parse_truth_table("0120", None).is_err());
    }

    #[test]
    fn times() {
        for text in ["1/2", "1/2pi", "1/2π", "1/2 * pi", "pi/2", "π/2"] {
            assert_eq!(parse_time(text).unwrap(), Ratio::new(1, 2), "{text}");
        }
        assert_eq!(parse_time("3/4").unwrap(), Ratio::new(3, 4));
        assert_eq!(parse_time("pi").unwrap(), Ratio::from_integer(1));
        assert!(parse_time("1/0").is_err());
        assert!(parse_time("half").is_err());
    }

    #[test]
    fn element_lists() {
        let v = parse_elements("000, 001,0x5,100", 3, 4).unwrap();
        assert_eq!(
            v,
            vec![
                GroupElement(0),
                GroupElement(1),
                GroupElement(5),
                GroupElement(4)
            ]
        );
        assert!(parse_elements("000,001", 3, 4).is_err());
    }
}
