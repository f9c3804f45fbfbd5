//! Line-oriented text format for diagrams.
//!
//! ```text
//! m=3                 # rank header
//! bottom 1 2          # optional boundary labels (default: empty); `m-1` also accepted
//! cap 1 order=rl
//! cross 2 1
//! dumbbell 1
//! cup 1
//! braid k=2 [1,-1]    # appends a braid closure; needs an empty current top
//! ```
//!
//! Statements are separated by newlines or `;`, and `#` starts a comment.

use std::fmt;
use std::fmt::Write as _;

use thiserror::Error;

use super::{braid_closure, CapOrder, CrossingType, DiagramError, Generator, Label, StrandSeq, TangleWord};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DslErrorKind {
    #[error("{0}")]
    Syntax(String),
    #[error("{0}")]
    Invalid(#[from] DiagramError),
}

/// Parse or validation failure at a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {col}: {kind}")]
pub struct DslError {
    pub line: usize,
    pub col: usize,
    pub kind: DslErrorKind,
}

impl DslError {
    /// True for structural validation failures, false for syntax errors.
    pub fn is_validation(&self) -> bool {
        matches!(self.kind, DslErrorKind::Invalid(_))
    }
}

struct Stmt<'a> {
    line: usize,
    col: usize,
    text: &'a str,
}

fn statements(text: &str) -> Vec<Stmt<'_>> {
    let mut out = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let code = raw.split('#').next().unwrap_or("");
        let mut start = 0;
        for piece in code.split(';') {
            let trimmed = piece.trim_start();
            let lead = piece.len() - trimmed.len();
            let body = trimmed.trim_end();
            if !body.is_empty() {
                out.push(Stmt {
                    line: ln + 1,
                    col: start + lead + 1,
                    text: body,
                });
            }
            start += piece.len() + 1;
        }
    }
    out
}

fn parse_usize(tok: &str, what: &str) -> Result<usize, String> {
    tok.parse::<usize>()
        .map_err(|_| format!("expected {what}, found `{tok}`"))
}

fn parse_rank(stmt: &str) -> Option<Result<u32, String>> {
    let rest = stmt.strip_prefix('m')?.trim_start().strip_prefix('=')?;
    let rest = rest.trim();
    Some(
        rest.parse::<u32>()
            .map_err(|_| format!("expected integer rank after `m=`, found `{rest}`")),
    )
}

fn parse_braid(rest: &str) -> Result<(usize, Vec<i64>), String> {
    let rest = rest.trim();
    let after_k = rest
        .strip_prefix("k")
        .and_then(|r| r.trim_start().strip_prefix('='))
        .ok_or_else(|| "expected `k=<int>` after `braid`".to_string())?
        .trim_start();
    let digits_end = after_k
        .find(|c: char| !c.is_ascii_digit())
        .unwrap_or(after_k.len());
    let k = parse_usize(&after_k[..digits_end], "strand count")?;
    let list = after_k[digits_end..].trim();
    let inner = list
        .strip_prefix('[')
        .and_then(|l| l.strip_suffix(']'))
        .ok_or_else(|| format!("expected `[letters]` after k={k}, found `{list}`"))?;
    let letters = inner
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<i64>()
                .map_err(|_| format!("expected signed braid letter, found `{t}`"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((k, letters))
}

fn parse_generator(keyword: &str, args: &[&str]) -> Result<Generator, String> {
    let need = |n: usize| -> Result<(), String> {
        if args.len() < n {
            Err(format!("`{keyword}` needs {n} argument(s)"))
        } else {
            Ok(())
        }
    };
    let slot = |t: &str| -> Result<usize, String> {
        let s = parse_usize(t, "slot index")?;
        if s == 0 {
            Err("slot indices are 1-based".to_string())
        } else {
            Ok(s)
        }
    };
    let g = match keyword {
        "cap" => {
            need(1)?;
            let order = match args.get(1) {
                None => CapOrder::FundDual,
                Some(&"order=lr") => CapOrder::FundDual,
                Some(&"order=rl") => CapOrder::DualFund,
                Some(other) => return Err(format!("expected `order=lr` or `order=rl`, found `{other}`")),
            };
            if args.len() > 2 {
                return Err(format!("unexpected token `{}`", args[2]));
            }
            Generator::Cap {
                slot: slot(args[0])?,
                order,
            }
        }
        "cup" => {
            need(1)?;
            Generator::Cup { slot: slot(args[0])? }
        }
        "cross" => {
            need(2)?;
            let kind = match args[1] {
                "1" => CrossingType::One,
                "2" => CrossingType::Two,
                other => return Err(format!("crossing type must be 1 or 2, found `{other}`")),
            };
            Generator::Cross {
                slot: slot(args[0])?,
                kind,
            }
        }
        "dumbbell" => {
            need(1)?;
            Generator::Dumbbell { slot: slot(args[0])? }
        }
        other => return Err(format!("unknown statement `{other}`")),
    };
    let max = if keyword == "cross" || (keyword == "cap" && args.len() == 2) {
        2
    } else {
        1
    };
    if args.len() > max {
        return Err(format!("unexpected token `{}`", args[max]));
    }
    Ok(g)
}

/// Parses a diagram. The `m=` header is required unless `rank` is given;
/// an explicit `rank` takes precedence over the header.
pub fn parse_dsl(text: &str, rank: Option<u32>) -> Result<TangleWord, DslError> {
    let stmts = statements(text);
    let syntax = |s: &Stmt<'_>, msg: String| DslError {
        line: s.line,
        col: s.col,
        kind: DslErrorKind::Syntax(msg),
    };
    let invalid = |s: &Stmt<'_>, e: DiagramError| DslError {
        line: s.line,
        col: s.col,
        kind: DslErrorKind::Invalid(e),
    };

    let mut idx = 0;
    let mut header = None;
    if let Some(s) = stmts.first() {
        if let Some(r) = parse_rank(s.text) {
            header = Some(r.map_err(|msg| syntax(s, msg))?);
            idx = 1;
        }
    }
    let m = match rank.or(header) {
        Some(m) => m,
        None => {
            let (line, col) = stmts.first().map_or((1, 1), |s| (s.line, s.col));
            return Err(DslError {
                line,
                col,
                kind: DslErrorKind::Syntax("missing `m=<int>` header".into()),
            });
        }
    };
    let mut bottom = StrandSeq::empty(m).map_err(|e| DslError {
        line: 1,
        col: 1,
        kind: DslErrorKind::Invalid(e),
    })?;

    let mut gens: Vec<Generator> = Vec::new();
    let mut top = bottom.clone();
    for s in &stmts[idx..] {
        let mut toks = s.text.split_whitespace();
        let keyword = toks.next().unwrap_or("");
        if parse_rank(s.text).is_some() {
            return Err(syntax(s, "`m=` header must be the first statement".into()));
        }
        match keyword {
            "bottom" => {
                if !gens.is_empty() || !bottom.is_empty() {
                    return Err(syntax(s, "`bottom` must precede all generators and appear once".into()));
                }
                let mut labels = Vec::new();
                for t in toks {
                    if t != "m-1" && t.parse::<u32>().is_err() {
                        return Err(syntax(s, format!("expected strand label, found `{t}`")));
                    }
                    labels.push(Label::from_token(t, m).map_err(|e| invalid(s, e))?);
                }
                bottom = StrandSeq::new(m, labels).map_err(|e| invalid(s, e))?;
                top = bottom.clone();
            }
            "braid" => {
                let (k, letters) = parse_braid(&s.text["braid".len()..]).map_err(|msg| syntax(s, msg))?;
                if !top.is_empty() {
                    return Err(syntax(
                        s,
                        format!("`braid` needs an empty current top, found {} strands", top.len()),
                    ));
                }
                let closure = braid_closure(k, &letters, m).map_err(|e| invalid(s, e))?;
                gens.extend_from_slice(closure.gens());
            }
            _ => {
                let args: Vec<&str> = toks.collect();
                let g = parse_generator(keyword, &args).map_err(|msg| syntax(s, msg))?;
                top = g.target(&top).map_err(|e| {
                    invalid(
                        s,
                        DiagramError::AtGenerator {
                            index: gens.len(),
                            generator: g,
                            source: Box::new(e),
                        },
                    )
                })?;
                gens.push(g);
            }
        }
    }
    let (line, col) = stmts.last().map_or((1, 1), |s| (s.line, s.col));
    TangleWord::new(bottom, gens).map_err(|e| DslError {
        line,
        col,
        kind: DslErrorKind::Invalid(e),
    })
}

/// Renders a word so that `parse_dsl(render_dsl(w), None) == w`.
pub fn render_dsl(word: &TangleWord) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "m={}", word.m());
    if !word.bottom().is_empty() {
        let vals: Vec<String> = word.bottom().labels().iter().map(|l| l.token(word.m())).collect();
        let _ = writeln!(out, "bottom {}", vals.join(" "));
    }
    for g in word.gens() {
        let _ = writeln!(out, "{g}");
    }
    out
}

/// Wrapper whose `Display` is the DSL rendering.
pub struct Dsl<'a>(pub &'a TangleWord);

impl fmt::Display for Dsl<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_dsl(self.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknot_one_line() {
        let w = parse_dsl("m=2; cap 1; cup 1", None).unwrap();
        assert_eq!(w, braid_closure(1, &[], 2).unwrap());
        assert!(w.is_closed());
    }

    #[test]
    fn braid_statement() {
        let w = parse_dsl("m=3; braid k=2 [1,1,1]", None).unwrap();
        assert_eq!(w, braid_closure(2, &[1, 1, 1], 3).unwrap());
        let w = parse_dsl("m=3\nbraid k=3 [1, -2 ,1 -2]\n", None).unwrap();
        assert_eq!(w, braid_closure(3, &[1, -2, 1, -2], 3).unwrap());
        let w = parse_dsl("m=2; braid k=1 []; braid k=1 []", None).unwrap();
        assert_eq!(w.gens().len(), 4);
    }

    #[test]
    fn comments_and_orders() {
        let text = "# a comment\nm = 4   # rank\ncap 1 order=rl\n\ncap 3 ; cup 3\ncup 1\n";
        let w = parse_dsl(text, None).unwrap();
        assert!(w.is_closed());
        assert_eq!(
            w.gens()[0],
            Generator::Cap {
                slot: 1,
                order: CapOrder::DualFund
            }
        );
    }

    #[test]
    fn rank_override() {
        let w = parse_dsl("cap 1\ncup 1", Some(3)).unwrap();
        assert_eq!(w.m(), 3);
        let w = parse_dsl("m=2\ncap 1\ncup 1", Some(5)).unwrap();
        assert_eq!(w.m(), 5);
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_dsl("m=2\ncap x", None).unwrap_err();
        assert_eq!((e.line, e.col), (2, 1));
        assert!(!e.is_validation());

        let e = parse_dsl("m=2\ncap 1\n  cup 0", None).unwrap_err();
        assert_eq!((e.line, e.col), (3, 3));

        let e = parse_dsl("m=4; cap 1; cup 1; cup 1", None).unwrap_err();
        assert_eq!((e.line, e.col), (1, 20));
        assert!(e.is_validation());

        let e = parse_dsl("cap 1", None).unwrap_err();
        assert!(e.to_string().contains("missing"));

        for bad in [
            "m=2; frob 1",
            "m=2; cross 1",
            "m=2; cross 1 3",
            "m=2; cap 1 order=xx",
            "m=2; cup 1 2",
            "m=2; braid [1]",
            "m=2; braid k=2 1,1",
            "m=2; braid k=2 [a]",
            "m=2; cap 1; m=3",
            "m=x",
        ] {
            let e = parse_dsl(bad, None).unwrap_err();
            assert!(!e.is_validation(), "{bad}: {e}");
        }
        let e = parse_dsl("m=2; braid k=2 [2]", None).unwrap_err();
        assert!(e.is_validation());
        let e = parse_dsl("m=3; cap 1; braid k=1 []", None).unwrap_err();
        assert!(!e.is_validation());
        let e = parse_dsl("m=4; bottom 1 2", None).unwrap_err();
        assert!(e.is_validation());
    }

    #[test]
    fn orientation_at_rank_two() {
        let text = "m=2\nbottom 1 m-1\ncup 1\n";
        let w = parse_dsl(text, None).unwrap();
        assert!(w.is_closed() || w.top().is_empty());
        assert_eq!(render_dsl(&w), text);
        let e = parse_dsl("m=2; bottom 1 1; cup 1", None).unwrap_err();
        assert!(e.is_validation());
    }

    #[test]
    fn round_trip_with_boundary() {
        let text = "m=3\nbottom 1 2 2\ncross 2 1\ndumbbell 2\ncap 4 order=rl\ncup 1\n";
        let w = parse_dsl(text, None).unwrap();
        assert_eq!(render_dsl(&w), text);
        assert_eq!(parse_dsl(&render_dsl(&w), None).unwrap(), w);
    }
}
