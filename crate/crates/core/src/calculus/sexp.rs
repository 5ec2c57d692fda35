//! S-expression encoding of derivations.
//!
//! ```text
//! ; A |- ~~A for A = p
//! (imp-r "p |- ~~p"
//!   (xl "~p, p |-" ...))
//! ```
//!
//! Each node is `(rule "conclusion" premise ...)`. Macro names (`nn-l`,
//! `nn-r`, `imp-l-star`, `imp-r-star`) are expanded on reading; the stated
//! conclusion must equal the one the macro produces. `;` starts a comment.

use std::fmt::Write as _;

use thiserror::Error;

use super::build::{macro_derivation, Macro, MacroError};
use super::{Derivation, Rule, Sequent};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SexpError {
    #[error("line {line}, column {col}: {msg}")]
    Syntax {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("line {line}: unknown rule `{name}`")]
    UnknownRule { line: usize, name: String },
    #[error("line {line}: bad sequent `{text}`: {msg}")]
    Sequent {
        line: usize,
        text: String,
        msg: String,
    },
    #[error("line {line}: {source}")]
    Macro { line: usize, source: MacroError },
    #[error("line {line}: {name} concludes `{found}`, but `{stated}` is stated")]
    MacroConclusion {
        line: usize,
        name: &'static str,
        stated: String,
        found: String,
    },
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Open,
    Close,
    Str(String),
    Sym(String),
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            chars: text.char_indices().peekable(),
            line: 1,
            col: 1,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let (_, c) = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn error(&self, msg: impl Into<String>) -> SexpError {
        SexpError::Syntax {
            line: self.line,
            col: self.col,
            msg: msg.into(),
        }
    }

    /// The next token with its line, or `None` at the end of input.
    fn next(&mut self) -> Result<Option<(Token, usize)>, SexpError> {
        loop {
            match self.chars.peek().map(|&(_, c)| c) {
                None => return Ok(None),
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some(';') => while !matches!(self.bump(), None | Some('\n')) {},
                Some(_) => break,
            }
        }
        let line = self.line;
        let tok = match self.bump().unwrap() {
            '(' => Token::Open,
            ')' => Token::Close,
            '"' => {
                let mut s = String::new();
                loop {
                    match self.bump() {
                        None => return Err(self.error("unterminated string")),
                        Some('"') => break,
                        Some('\\') => match self.bump() {
                            Some(c @ ('"' | '\\')) => s.push(c),
                            _ => return Err(self.error("bad escape in string")),
                        },
                        Some(c) => s.push(c),
                    }
                }
                Token::Str(s)
            }
            c => {
                let mut s = String::from(c);
                while let Some(&(_, c)) = self.chars.peek() {
                    if c.is_whitespace() || matches!(c, '(' | ')' | '"' | ';') {
                        break;
                    }
                    s.push(c);
                    self.bump();
                }
                Token::Sym(s)
            }
        };
        Ok(Some((tok, line)))
    }
}

fn node(lx: &mut Lexer<'_>, open_line: usize) -> Result<Derivation, SexpError> {
    let name = match lx.next()? {
        Some((Token::Sym(s), _)) => s,
        _ => return Err(lx.error("expected a rule name after `(`")),
    };
    let text = match lx.next()? {
        Some((Token::Str(s), _)) => s,
        _ => return Err(lx.error(format!("expected a quoted conclusion after `{name}`"))),
    };
    let conclusion: Sequent =
        text.parse()
            .map_err(|e: crate::syntax::ParseError| SexpError::Sequent {
                line: open_line,
                text: text.clone(),
                msg: e.to_string(),
            })?;
    let mut premises = Vec::new();
    loop {
        match lx.next()? {
            Some((Token::Open, line)) => premises.push(node(lx, line)?),
            Some((Token::Close, _)) => break,
            Some(_) => return Err(lx.error("expected `(` or `)`")),
            None => return Err(lx.error("unexpected end of input")),
        }
    }
    if let Ok(rule) = name.parse::<Rule>() {
        return Ok(Derivation::new(conclusion, rule, premises));
    }
    let Ok(m) = name.parse::<Macro>() else {
        return Err(SexpError::UnknownRule {
            line: open_line,
            name,
        });
    };
    let d = macro_derivation(m, premises).map_err(|source| SexpError::Macro {
        line: open_line,
        source,
    })?;
    if d.conclusion != conclusion {
        return Err(SexpError::MacroConclusion {
            line: open_line,
            name: m.name(),
            stated: conclusion.to_string(),
            found: d.conclusion.to_string(),
        });
    }
    Ok(d)
}

/// Reads one derivation, expanding macros.
pub fn read_derivation(text: &str) -> Result<Derivation, SexpError> {
    let mut lx = Lexer::new(text);
    let d = match lx.next()? {
        Some((Token::Open, line)) => node(&mut lx, line)?,
        Some(_) => return Err(lx.error("expected `(`")),
        None => return Err(lx.error("empty input")),
    };
    match lx.next()? {
        None => Ok(d),
        Some(_) => Err(lx.error("trailing input after the derivation")),
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Writes a derivation, one node per line, indented by depth.
pub fn write_derivation(d: &Derivation) -> String {
    let mut out = String::new();
    let mut stack = vec![(d, 0usize, 0usize)];
    // Each entry: node, depth, number of parens to close after it.
    while let Some((n, depth, closes)) = stack.pop() {
        let _ = write!(
            out,
            "{:indent$}({} {}",
            "",
            n.rule,
            quote(&n.conclusion.to_string()),
            indent = 2 * depth
        );
        if n.premises.is_empty() {
            out.push(')');
            out.push_str(&")".repeat(closes));
            out.push('\n');
        } else {
            out.push('\n');
            let k = n.premises.len();
            for (i, p) in n.premises.iter().enumerate().rev() {
                let c = if i + 1 == k { closes + 1 } else { 0 };
                stack.push((p, depth + 1, c));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{check_derivation, prove_bounded};

    #[test]
    fn round_trip() {
        for s in ["|- ~p | ~~p", "~~(p -> q) |- p -> q", "p | q |- q | p"] {
            let d = prove_bounded(&s.parse().unwrap(), 30).unwrap();
            let text = write_derivation(&d);
            assert_eq!(read_derivation(&text).unwrap(), d);
        }
    }

    #[test]
    fn leaf_and_comments() {
        let d = read_derivation("; identity\n(init \"p |- p\") ; done\n").unwrap();
        assert_eq!(d.rule, Rule::Init);
        assert!(check_derivation(&d).is_ok());
        assert_eq!(write_derivation(&d), "(init \"p |- p\")\n");
    }

    #[test]
    fn nested_layout() {
        let d = read_derivation("(wr \"p |- p, q\" (init \"p |- p\"))").unwrap();
        assert_eq!(
            write_derivation(&d),
            "(wr \"p |- p, q\"\n  (init \"p |- p\"))\n"
        );
    }

    #[test]
    fn macros_expand() {
        let d = read_derivation("(nn-r \"p |- ~~p\" (init \"p |- p\"))").unwrap();
        assert!(check_derivation(&d).is_ok());
        assert_eq!(d.conclusion.to_string(), "p |- ~~p");
        let e = read_derivation("(nn-r \"p |- p\" (init \"p |- p\"))").unwrap_err();
        assert!(matches!(e, SexpError::MacroConclusion { .. }));
    }

    #[test]
    fn errors() {
        assert!(matches!(
            read_derivation("(frob \"p |- p\")"),
            Err(SexpError::UnknownRule { .. })
        ));
        assert!(read_derivation("(init \"p |- \")").is_ok());
        assert!(matches!(
            read_derivation("(init \"p & |- p\")"),
            Err(SexpError::Sequent { .. })
        ));
        assert!(matches!(
            read_derivation("(init \"p |- p\""),
            Err(SexpError::Syntax { .. })
        ));
        assert!(matches!(
            read_derivation("(init \"p |- p\") x"),
            Err(SexpError::Syntax { .. })
        ));
        let Err(SexpError::UnknownRule { line, .. }) =
            read_derivation("(wl \"p |- p\"\n\n  (nope \"p |- p\"))")
        else {
            panic!()
        };
        assert_eq!(line, 3);
    }
}
