//! The line-oriented group-definition format.
//!
//! ```text
//! name f-dyadic
//! domain interval 0 1
//! meta slope_primes 2
//! gen x0
//!   0 1/2 1 0 0 2
//!   1/2 3/4 4 -1 0 4
//!   3/4 1 2 -1 0 1
//! end
//! ```
//!
//! A piece row is `left right a b c d` for `t ↦ (a t + b)/(c t + d)` on
//! `[left, right]`. Ends may be `-inf`/`inf`. Blank lines and `#` comments are
//! ignored. [`serialize`] writes the canonical form, which [`parse`] reads
//! back byte for byte.

use std::fmt::Write as _;

use crate::error::{Error, ParseErrorKind, Result};
use crate::flmap::FracLinearMap;
use crate::pmap::{Domain, Piece, PiecewiseMap};
use crate::point::ExtPoint;
use crate::rational::{fmt_rational, parse_rational, Rational};
use crate::spec::{Assertion, Generator, GroupSpec, Metadata};
use crate::word::is_identifier;

fn err(line: usize, kind: ParseErrorKind) -> Error {
    Error::Parse { line, kind }
}

fn lexical(line: usize, msg: impl Into<String>) -> Error {
    err(line, ParseErrorKind::Lexical(msg.into()))
}

fn structure(line: usize, msg: impl Into<String>) -> Error {
    err(line, ParseErrorKind::Structure(msg.into()))
}

fn strip_comment(s: &str) -> &str {
    s.split_once('#').map_or(s, |(a, _)| a).trim()
}

struct OpenGen {
    name: String,
    line: usize,
    pieces: Vec<(usize, Piece)>,
}

pub fn parse(text: &str) -> Result<GroupSpec> {
    let mut name: Option<String> = None;
    let mut domain: Option<Domain> = None;
    let mut metadata = Metadata::default();
    let mut gens: Vec<Generator> = Vec::new();
    let mut open: Option<OpenGen> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (keyword, rest) = trimmed
            .split_once(char::is_whitespace)
            .map_or((trimmed, ""), |(k, r)| (k, r.trim()));

        if let Some(g) = open.as_mut() {
            if keyword == "end" {
                let g = open.take().expect("open generator");
                gens.push(close_generator(g, domain.clone().expect("domain set"), line)?);
            } else {
                let piece = parse_piece(strip_comment(trimmed), line)?;
                check_adjacent(g.pieces.last(), &piece, line)?;
                g.pieces.push((line, piece));
            }
            continue;
        }

        match keyword {
            "name" => {
                if rest.is_empty() {
                    return Err(structure(line, "missing group name"));
                }
                name = Some(rest.to_string());
            }
            "domain" => {
                if domain.is_some() {
                    return Err(structure(line, "domain declared twice"));
                }
                domain = Some(parse_domain(strip_comment(rest), line)?);
            }
            "meta" => parse_meta(rest, line, &mut metadata)?,
            "gen" => {
                let n = strip_comment(rest);
                if domain.is_none() {
                    return Err(structure(line, "`gen` before `domain`"));
                }
                if !is_identifier(n) {
                    return Err(lexical(line, format!("bad generator name `{n}`")));
                }
                if gens.iter().any(|g| g.name == n) {
                    return Err(structure(line, format!("duplicate generator `{n}`")));
                }
                open = Some(OpenGen {
                    name: n.to_string(),
                    line,
                    pieces: Vec::new(),
                });
            }
            "end" => return Err(structure(line, "`end` without `gen`")),
            other => return Err(structure(line, format!("unknown keyword `{other}`"))),
        }
    }
    if let Some(g) = open {
        return Err(structure(g.line, format!("generator `{}` is missing `end`", g.name)));
    }
    let domain = domain.ok_or_else(|| structure(1, "missing `domain` line"))?;
    let spec = GroupSpec::new(name.unwrap_or_else(|| "group".to_string()), domain, gens)?;
    Ok(spec.with_metadata(metadata))
}

fn parse_domain(rest: &str, line: usize) -> Result<Domain> {
    let toks: Vec<&str> = rest.split_whitespace().collect();
    match toks.as_slice() {
        ["line"] => Ok(Domain::Line),
        ["interval", a, b] => {
            let a = parse_rational(a).ok_or_else(|| lexical(line, format!("bad rational `{a}`")))?;
            let b = parse_rational(b).ok_or_else(|| lexical(line, format!("bad rational `{b}`")))?;
            Domain::interval(a, b).map_err(|e| structure(line, e.to_string()))
        }
        _ => Err(structure(line, "expected `domain line` or `domain interval <a> <b>`")),
    }
}

fn parse_meta(rest: &str, line: usize, meta: &mut Metadata) -> Result<()> {
    let (key, value) = rest
        .split_once(char::is_whitespace)
        .map_or((rest, ""), |(k, v)| (k, v.trim()));
    match key {
        "slope_primes" => {
            for t in value.split_whitespace() {
                let p: u64 = t
                    .parse()
                    .map_err(|_| lexical(line, format!("bad prime `{t}`")))?;
                meta.slope_primes.push(p);
            }
        }
        "slope_generators" => {
            for t in value.split_whitespace() {
                let q = parse_rational(t).ok_or_else(|| lexical(line, format!("bad rational `{t}`")))?;
                meta.slope_generators.push(q);
            }
        }
        "coherent" => {
            let (flag, note) = value
                .split_once(char::is_whitespace)
                .map_or((value, ""), |(f, n)| (f, n.trim()));
            let flag = match flag {
                "true" => true,
                "false" => false,
                _ => return Err(lexical(line, format!("expected true/false, got `{flag}`"))),
            };
            meta.coherent = Some(Assertion {
                value: flag,
                note: note.to_string(),
            });
        }
        "breakpoints" => meta.breakpoints = Some(value.to_string()),
        "infinite_support" => meta.infinite_support = Some(value.to_string()),
        "note" => meta.notes.push(value.to_string()),
        other => return Err(structure(line, format!("unknown metadata key `{other}`"))),
    }
    Ok(())
}

fn parse_piece(row: &str, line: usize) -> Result<Piece> {
    let toks: Vec<&str> = row.split_whitespace().collect();
    if toks.len() != 6 {
        return Err(structure(
            line,
            format!("a piece needs 6 fields, found {}", toks.len()),
        ));
    }
    let end = |t: &str| ExtPoint::parse(t).ok_or_else(|| lexical(line, format!("bad point `{t}`")));
    let left = end(toks[0])?;
    let right = end(toks[1])?;
    let mut coeffs: [Rational; 4] = Default::default();
    for (slot, t) in coeffs.iter_mut().zip(&toks[2..]) {
        *slot = parse_rational(t).ok_or_else(|| lexical(line, format!("bad coefficient `{t}`")))?;
    }
    let map = FracLinearMap::from_rationals(&coeffs)
        .map_err(|e| err(line, ParseErrorKind::Orientation(e.to_string())))?;
    Ok(Piece::new(left, right, map))
}

fn check_adjacent(prev: Option<&(usize, Piece)>, next: &Piece, line: usize) -> Result<()> {
    let Some((_, prev)) = prev else {
        return Ok(());
    };
    if prev.right != next.left {
        return Err(err(
            line,
            ParseErrorKind::Continuity(format!(
                "piece starts at {} but the previous one ends at {}",
                next.left, prev.right
            )),
        ));
    }
    let l = prev.map.eval_ext(&prev.right);
    let r = next.map.eval_ext(&next.left);
    if l != r || l.is_none() {
        let show = |v: Option<ExtPoint>| v.map_or("pole".to_string(), |v| v.to_string());
        return Err(err(
            line,
            ParseErrorKind::Continuity(format!(
                "values at {} disagree: {} vs {}",
                next.left,
                show(l),
                show(r)
            )),
        ));
    }
    Ok(())
}

fn close_generator(g: OpenGen, domain: Domain, end_line: usize) -> Result<Generator> {
    let pieces = g.pieces.into_iter().map(|(_, p)| p).collect();
    let map = PiecewiseMap::canonicalize(domain, pieces).map_err(|e| {
        let kind = match &e {
            Error::Discontinuity { .. } => ParseErrorKind::Continuity(e.to_string()),
            Error::Orientation(_) | Error::NonMonotone(_) => ParseErrorKind::Orientation(e.to_string()),
            _ => ParseErrorKind::Validation(e.to_string()),
        };
        err(end_line, kind)
    })?;
    Ok(Generator { name: g.name, map })
}

pub fn serialize(spec: &GroupSpec) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "name {}", spec.name);
    let _ = writeln!(out, "domain {}", spec.domain);
    let m = &spec.metadata;
    if !m.slope_primes.is_empty() {
        let ps: Vec<String> = m.slope_primes.iter().map(u64::to_string).collect();
        let _ = writeln!(out, "meta slope_primes {}", ps.join(" "));
    }
    if !m.slope_generators.is_empty() {
        let gs: Vec<String> = m.slope_generators.iter().map(fmt_rational).collect();
        let _ = writeln!(out, "meta slope_generators {}", gs.join(" "));
    }
    if let Some(c) = &m.coherent {
        let _ = writeln!(out, "{}", join_nonempty(&format!("meta coherent {}", c.value), &c.note));
    }
    if let Some(b) = &m.breakpoints {
        let _ = writeln!(out, "{}", join_nonempty("meta breakpoints", b));
    }
    if let Some(s) = &m.infinite_support {
        let _ = writeln!(out, "{}", join_nonempty("meta infinite_support", s));
    }
    for n in &m.notes {
        let _ = writeln!(out, "{}", join_nonempty("meta note", n));
    }
    for g in spec.generators() {
        let _ = writeln!(out, "gen {}", g.name);
        for p in g.map.pieces() {
            let [a, b, c, d] = p.map.coefficients();
            let _ = writeln!(out, "  {} {} {} {} {} {}", p.left, p.right, a, b, c, d);
        }
        let _ = writeln!(out, "end");
    }
    out
}

fn join_nonempty(head: &str, tail: &str) -> String {
    if tail.is_empty() {
        head.to_string()
    } else {
        format!("{head} {tail}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    const X0: &str = "name f\ndomain interval 0 1\ngen x0\n  0 1/2 1 0 0 2\n  1/2 3/4 4 -1 0 4\n  3/4 1 2 -1 0 1\nend\n";

    #[test]
    fn round_trip_is_exact() {
        let spec = parse(X0).unwrap();
        assert_eq!(serialize(&spec), X0);
    }

    #[test]
    fn piece_row_semantics() {
        let spec = parse(X0).unwrap();
        let x0 = spec.generator("x0").unwrap();
        assert_eq!(x0.apply(&rat(1, 4)), Some(rat(1, 8)));
    }

    #[test]
    fn comments_and_rational_coefficients() {
        let text = "# comment\ndomain interval 0 1\n\ngen h\n  0 1 1/2 0 0 1/2   # identity written oddly\nend\n";
        let spec = parse(text).unwrap();
        assert!(spec.generator("h").unwrap().is_identity());
    }

    #[test]
    fn malformed_rational_is_lexical() {
        let text = "domain interval 0 1\ngen h\n  0 1/0 1 0 0 1\nend\n";
        match parse(text) {
            Err(Error::Parse { line: 3, kind: ParseErrorKind::Lexical(_) }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn continuity_violation_has_line() {
        let text = "domain interval 0 1\ngen h\n  0 1/2 1 0 0 2\n  1/2 1 1 0 0 1\nend\n";
        match parse(text) {
            Err(Error::Parse { line: 4, kind: ParseErrorKind::Continuity(_) }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn orientation_violation_has_line() {
        let text = "domain interval 0 1\ngen h\n  0 1 -1 1 0 1\nend\n";
        match parse(text) {
            Err(Error::Parse { line: 3, kind: ParseErrorKind::Orientation(_) }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn empty_generator_rejected() {
        let text = "domain line\ngen h\nend\n";
        assert!(matches!(parse(text), Err(Error::Parse { line: 3, .. })));
    }

    #[test]
    fn metadata_round_trip() {
        let text = "name s\ndomain line\nmeta slope_primes 2 3\nmeta slope_generators 4 8\nmeta coherent true asserted from literature\nmeta breakpoints Z[1/6]\nmeta infinite_support h\nmeta note first\nmeta note second\n";
        let spec = parse(text).unwrap();
        assert_eq!(spec.metadata.slope_primes, vec![2, 3]);
        assert_eq!(serialize(&spec), text);
    }
}
