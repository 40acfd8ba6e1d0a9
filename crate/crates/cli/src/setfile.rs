//! The text set-file format.
//!
//! ```text
//! # comment
//! group Z_4 x Z_4
//! 1,2
//! 3,3
//! ```
//!
//! The header names the ambient group: `Z`, `Z^<d>`, or `x`-separated
//! factors where each factor is `Z` or `Z_<m>`. Body lines are
//! comma-separated integers, one element per line; `#` starts a comment;
//! blank lines and CRLF endings are tolerated. Elements are canonicalized
//! on parse; duplicates after canonicalization are an error unless the
//! caller opts into deduplication.

use addspan_core::{canon, Element, Factor, GSet, GroupSpec};

#[derive(Debug, thiserror::Error)]
pub enum SetFileError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: duplicate element {coords:?} (pass --dedupe to fold duplicates)")]
    Duplicate { line: usize, coords: Vec<i64> },
    #[error(transparent)]
    Core(#[from] addspan_core::Error),
}

fn parse_factor(token: &str) -> Result<Factor, String> {
    let token = token.trim();
    if token == "Z" {
        return Ok(Factor::Z);
    }
    if let Some(m) = token.strip_prefix("Z_") {
        let m: u64 = m
            .parse()
            .map_err(|_| format!("bad modulus in factor '{token}'"))?;
        return Ok(Factor::Mod(m));
    }
    Err(format!(
        "unrecognized factor '{token}' (expected Z or Z_<m>)"
    ))
}

pub fn parse_group_spec(text: &str) -> Result<GroupSpec, String> {
    let text = text.trim();
    if let Some(d) = text.strip_prefix("Z^") {
        let d: usize = d.parse().map_err(|_| format!("bad rank in '{text}'"))?;
        return GroupSpec::integers(d).map_err(|e| e.to_string());
    }
    let factors = text
        .split('x')
        .map(parse_factor)
        .collect::<Result<Vec<_>, _>>()?;
    GroupSpec::new(factors).map_err(|e| e.to_string())
}

pub fn parse_element(text: &str, spec: &GroupSpec) -> Result<Element, String> {
    let coords = text
        .split(',')
        .map(|c| {
            c.trim()
                .parse::<i64>()
                .map_err(|_| format!("bad integer '{}'", c.trim()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    canon(&coords, spec).map_err(|e| e.to_string())
}

/// Parse a full set file. With `dedupe`, repeated elements fold silently;
/// otherwise they are an error pointing at the repeated line.
pub fn parse_set_file(text: &str, dedupe: bool) -> Result<GSet, SetFileError> {
    let mut spec: Option<GroupSpec> = None;
    let mut elems: Vec<Element> = Vec::new();
    let mut seen: std::collections::BTreeSet<Vec<i64>> = std::collections::BTreeSet::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw_line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        match &spec {
            None => {
                let Some(spec_text) = content.strip_prefix("group ") else {
                    return Err(SetFileError::Parse {
                        line,
                        message: format!("expected 'group <SPEC>' header, found '{content}'"),
                    });
                };
                spec = Some(
                    parse_group_spec(spec_text)
                        .map_err(|message| SetFileError::Parse { line, message })?,
                );
            }
            Some(spec) => {
                let e = parse_element(content, spec)
                    .map_err(|message| SetFileError::Parse { line, message })?;
                if !seen.insert(e.coords().to_vec()) && !dedupe {
                    return Err(SetFileError::Duplicate {
                        line,
                        coords: e.coords().to_vec(),
                    });
                }
                elems.push(e);
            }
        }
    }
    let Some(spec) = spec else {
        return Err(SetFileError::Parse {
            line: 0,
            message: "missing 'group <SPEC>' header".into(),
        });
    };
    Ok(GSet::from_elements(spec, elems)?)
}

/// Inverse of [`parse_set_file`] on canonical sets.
pub fn serialize_set_file(a: &GSet) -> String {
    let mut out = format!("group {}\n", a.spec());
    for e in a.iter() {
        let coords: Vec<String> = e.coords().iter().map(|c| c.to_string()).collect();
        out.push_str(&coords.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        let a = parse_set_file("group Z\n0\n1\n3\n", false).unwrap();
        assert_eq!(a, GSet::from_ints([0, 1, 3]));

        let b = parse_set_file("group Z_5\n7\n", false).unwrap();
        assert_eq!(b.elements()[0].coords(), &[2]);

        let c = parse_set_file("group Z_4 x Z_4\n1,2\n3,3\n", false).unwrap();
        assert_eq!(c.len(), 2);
    }

    #[test]
    fn comments_blank_lines_crlf() {
        let a = parse_set_file("# corpus\r\ngroup Z\r\n\r\n0 # zero\r\n2\r\n", false).unwrap();
        assert_eq!(a, GSet::from_ints([0, 2]));
    }

    #[test]
    fn header_variants() {
        assert_eq!(parse_group_spec("Z").unwrap().to_string(), "Z");
        assert_eq!(parse_group_spec("Z^3").unwrap().to_string(), "Z^3");
        assert_eq!(
            parse_group_spec("Z_5 x Z_7").unwrap().to_string(),
            "Z_5 x Z_7"
        );
        assert_eq!(parse_group_spec("Z x Z_4").unwrap().to_string(), "Z x Z_4");
        assert!(parse_group_spec("Q").is_err());
        assert!(parse_group_spec("Z_1").is_err());
    }

    #[test]
    fn duplicate_handling() {
        let text = "group Z_5\n2\n7\n";
        match parse_set_file(text, false) {
            Err(SetFileError::Duplicate { line: 3, coords }) => assert_eq!(coords, vec![2]),
            other => panic!("expected duplicate error, got {other:?}"),
        }
        let deduped = parse_set_file(text, true).unwrap();
        assert_eq!(deduped.len(), 1);
    }

    #[test]
    fn errors_carry_line_numbers() {
        match parse_set_file("group Z\n1\nx\n", false) {
            Err(SetFileError::Parse { line: 3, .. }) => {}
            other => panic!("expected parse error on line 3, got {other:?}"),
        }
        match parse_set_file("1\n2\n", false) {
            Err(SetFileError::Parse { line: 1, .. }) => {}
            other => panic!("expected header error, got {other:?}"),
        }
    }

    #[test]
    fn round_trip() {
        let cases = [
            GSet::from_ints([-3, 0, 7]),
            parse_set_file("group Z_4 x Z_4\n1,2\n3,3\n", false).unwrap(),
            parse_set_file("group Z^2\n-1,5\n2,2\n", false).unwrap(),
        ];
        for a in cases {
            assert_eq!(parse_set_file(&serialize_set_file(&a), false).unwrap(), a);
        }
    }

    #[test]
    fn round_trip_over_generator_corpus() {
        use addspan_core::corpus;
        let mut sets = vec![
            corpus::gen_ap(12, 3, -5).unwrap(),
            corpus::gen_geo(10).unwrap(),
            corpus::gen_sidon_greedy(9).unwrap(),
        ];
        for seed in 0..8 {
            sets.push(
                corpus::gen_box_random(10 + seed as usize, 64, 1 + seed as usize % 3, seed)
                    .unwrap(),
            );
            sets.push(corpus::gen_subgroup_union(5 + seed as usize % 3, 2, 2, seed).unwrap());
        }
        for a in sets {
            let text = serialize_set_file(&a);
            assert_eq!(parse_set_file(&text, false).unwrap(), a, "{text}");
        }
    }
}
