//! S-expression reader shared by the domain, problem and method file parsers.
//!
//! Symbols are lower-cased on read; the file formats are case-insensitive.

use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SExpr {
    Atom(String, Pos),
    List(Vec<SExpr>, Pos),
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{pos}: {message}")]
pub struct ParseError {
    pub pos: Pos,
    pub message: String,
}

impl ParseError {
    pub fn new(pos: Pos, message: impl Into<String>) -> ParseError {
        ParseError {
            pos,
            message: message.into(),
        }
    }
}

impl SExpr {
    pub fn pos(&self) -> Pos {
        match self {
            SExpr::Atom(_, p) | SExpr::List(_, p) => *p,
        }
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            SExpr::Atom(s, _) => Some(s),
            SExpr::List(..) => None,
        }
    }

    pub fn as_list(&self) -> Option<&[SExpr]> {
        match self {
            SExpr::List(items, _) => Some(items),
            SExpr::Atom(..) => None,
        }
    }

    pub fn atom(&self, what: &str) -> Result<&str, ParseError> {
        self.as_atom()
            .ok_or_else(|| ParseError::new(self.pos(), format!("expected {what}, found a list")))
    }

    pub fn list(&self, what: &str) -> Result<&[SExpr], ParseError> {
        self.as_list()
            .ok_or_else(|| ParseError::new(self.pos(), format!("expected {what}, found `{self}`")))
    }

    /// The head symbol of a list, if it has one.
    pub fn head(&self) -> Option<&str> {
        self.as_list()
            .and_then(|items| items.first())
            .and_then(SExpr::as_atom)
    }
}

impl fmt::Display for SExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SExpr::Atom(s, _) => f.write_str(s),
            SExpr::List(items, _) => {
                f.write_str("(")?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    item.fmt(f)?;
                }
                f.write_str(")")
            }
        }
    }
}

/// Reads exactly one top-level expression from `text`.
pub fn parse_one(text: &str) -> Result<SExpr, ParseError> {
    let mut all = parse_all(text)?;
    match all.len() {
        1 => Ok(all.remove(0)),
        0 => Err(ParseError::new(Pos { line: 1, col: 1 }, "empty input")),
        _ => Err(ParseError::new(
            all[1].pos(),
            "trailing input after top-level expression",
        )),
    }
}

pub fn parse_all(text: &str) -> Result<Vec<SExpr>, ParseError> {
    let mut stack: Vec<(Vec<SExpr>, Pos)> = Vec::new();
    let mut top = Vec::new();
    let mut line = 1;
    let mut col = 0;
    let mut chars = text.chars().peekable();
    let mut token = String::new();
    let mut token_pos = Pos::default();

    fn flush(token: &mut String, pos: Pos, stack: &mut [(Vec<SExpr>, Pos)], top: &mut Vec<SExpr>) {
        if token.is_empty() {
            return;
        }
        let atom = SExpr::Atom(token.to_lowercase(), pos);
        token.clear();
        match stack.last_mut() {
            Some((items, _)) => items.push(atom),
            None => top.push(atom),
        }
    }

    while let Some(c) = chars.next() {
        col += 1;
        let here = Pos { line, col };
        match c {
            '\n' => {
                flush(&mut token, token_pos, &mut stack, &mut top);
                line += 1;
                col = 0;
            }
            ';' => {
                flush(&mut token, token_pos, &mut stack, &mut top);
                while let Some(&n) = chars.peek() {
                    if n == '\n' {
                        break;
                    }
                    chars.next();
                }
            }
            '(' => {
                flush(&mut token, token_pos, &mut stack, &mut top);
                stack.push((Vec::new(), here));
            }
            ')' => {
                flush(&mut token, token_pos, &mut stack, &mut top);
                let (items, pos) = stack
                    .pop()
                    .ok_or_else(|| ParseError::new(here, "unbalanced `)`"))?;
                let list = SExpr::List(items, pos);
                match stack.last_mut() {
                    Some((items, _)) => items.push(list),
                    None => top.push(list),
                }
            }
            c if c.is_whitespace() => flush(&mut token, token_pos, &mut stack, &mut top),
            c => {
                if token.is_empty() {
                    token_pos = here;
                }
                token.push(c);
            }
        }
    }
    flush(&mut token, token_pos, &mut stack, &mut top);
    if let Some((_, pos)) = stack.last() {
        return Err(ParseError::new(*pos, "unclosed `(`"));
    }
    Ok(top)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_nested_lists_with_positions() {
        let e = parse_one("; header\n(define (Domain X)\n  (:action a))").unwrap();
        assert_eq!(e.to_string(), "(define (domain x) (:action a))");
        let items = e.as_list().unwrap();
        assert_eq!(items[1].pos(), Pos { line: 2, col: 9 });
        assert_eq!(items[2].pos(), Pos { line: 3, col: 3 });
    }

    #[test]
    fn reports_unbalanced_parens() {
        let err = parse_one("(a (b)").unwrap_err();
        assert_eq!(err.pos, Pos { line: 1, col: 1 });
        let err = parse_one("(a))").unwrap_err();
        assert_eq!(err.pos, Pos { line: 1, col: 4 });
    }
}
