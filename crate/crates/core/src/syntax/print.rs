use std::fmt::{self, Display, Write};

use super::Formula;

// Precedence levels: 0 `->`, 1 `|`, 2 `&`, 3 negation and atoms.
fn write_at<A: Display>(f: &Formula<A>, level: u8, out: &mut impl Write) -> fmt::Result {
    if let Some(inner) = f.negated() {
        out.write_char('~')?;
        return write_at(inner, 3, out);
    }
    match f {
        Formula::Atom(a) => write!(out, "{a}"),
        Formula::Bot => out.write_str("_|_"),
        Formula::Imp(l, r) => bracket(level > 0, out, |out| {
            write_at(l, 1, out)?;
            out.write_str(" -> ")?;
            write_at(r, 0, out)
        }),
        Formula::Or(l, r) => bracket(level > 1, out, |out| {
            write_at(l, 1, out)?;
            out.write_str(" | ")?;
            write_at(r, 2, out)
        }),
        Formula::And(l, r) => bracket(level > 2, out, |out| {
            write_at(l, 2, out)?;
            out.write_str(" & ")?;
            write_at(r, 3, out)
        }),
    }
}

fn bracket<W: Write>(
    paren: bool,
    out: &mut W,
    body: impl FnOnce(&mut W) -> fmt::Result,
) -> fmt::Result {
    if paren {
        out.write_char('(')?;
    }
    body(out)?;
    if paren {
        out.write_char(')')?;
    }
    Ok(())
}

/// Minimal-parenthesis ASCII rendering; `A -> _|_` prints as `~A`.
impl<A: Display> Display for Formula<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_at(self, 0, f)
    }
}
