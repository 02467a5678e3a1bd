//! Minimal SMT-LIB s-expression reader with source positions.

use super::ParseError;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SExpr {
    Symbol(String, Pos),
    Keyword(String, Pos),
    Str(String, Pos),
    Int(i64, Pos),
    List(Vec<SExpr>, Pos),
}

impl SExpr {
    pub fn pos(&self) -> Pos {
        match self {
            SExpr::Symbol(_, p)
            | SExpr::Keyword(_, p)
            | SExpr::Str(_, p)
            | SExpr::Int(_, p)
            | SExpr::List(_, p) => *p,
        }
    }

    pub fn as_symbol(&self) -> Option<&str> {
        match self {
            SExpr::Symbol(s, _) => Some(s),
            _ => None,
        }
    }
}

struct Reader<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl<'a> Reader<'a> {
    fn pos(&self) -> Pos {
        Pos {
            line: self.line,
            col: self.col,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == ';' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn err(&self, pos: Pos, msg: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            line: pos.line,
            col: pos.col,
            msg: msg.into(),
        }
    }

    fn read(&mut self) -> Result<Option<SExpr>, ParseError> {
        self.skip_ws();
        let pos = self.pos();
        let c = match self.chars.peek() {
            None => return Ok(None),
            Some(&c) => c,
        };
        match c {
            '(' => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_ws();
                    match self.chars.peek() {
                        None => return Err(self.err(pos, "unbalanced `(`")),
                        Some(')') => {
                            self.bump();
                            return Ok(Some(SExpr::List(items, pos)));
                        }
                        Some(_) => items.push(self.read()?.expect("peeked a character")),
                    }
                }
            }
            ')' => Err(self.err(pos, "unexpected `)`")),
            '"' => {
                self.bump();
                let mut s = String::new();
                loop {
                    match self.bump() {
                        None => return Err(self.err(pos, "unterminated string literal")),
                        Some('"') => {
                            if self.chars.peek() == Some(&'"') {
                                self.bump();
                                s.push('"');
                            } else {
                                break;
                            }
                        }
                        Some('\\') if self.chars.peek() == Some(&'u') => {
                            self.bump();
                            s.push(self.read_unicode_escape(pos)?);
                        }
                        Some(c) => s.push(c),
                    }
                }
                Ok(Some(SExpr::Str(s, pos)))
            }
            '|' => {
                self.bump();
                let mut s = String::new();
                loop {
                    match self.bump() {
                        None => return Err(self.err(pos, "unterminated quoted symbol")),
                        Some('|') => break,
                        Some(c) => s.push(c),
                    }
                }
                Ok(Some(SExpr::Symbol(s, pos)))
            }
            _ => {
                let mut s = String::new();
                while let Some(&c) = self.chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == '"' || c == ';' {
                        break;
                    }
                    s.push(c);
                    self.bump();
                }
                if let Some(k) = s.strip_prefix(':') {
                    Ok(Some(SExpr::Keyword(k.to_string(), pos)))
                } else if s.chars().all(|c| c.is_ascii_digit()) {
                    s.parse::<i64>()
                        .map(|n| Some(SExpr::Int(n, pos)))
                        .map_err(|_| self.err(pos, format!("integer literal `{s}` out of range")))
                } else {
                    Ok(Some(SExpr::Symbol(s, pos)))
                }
            }
        }
    }

    // `\u{X..}` or `\uXXXX`, the leading `\u` already consumed.
    fn read_unicode_escape(&mut self, pos: Pos) -> Result<char, ParseError> {
        let mut hex = String::new();
        if self.chars.peek() == Some(&'{') {
            self.bump();
            loop {
                match self.bump() {
                    Some('}') => break,
                    Some(c) if c.is_ascii_hexdigit() => hex.push(c),
                    _ => return Err(self.err(pos, "malformed \\u{...} escape")),
                }
            }
        } else {
            for _ in 0..4 {
                match self.bump() {
                    Some(c) if c.is_ascii_hexdigit() => hex.push(c),
                    _ => return Err(self.err(pos, "malformed \\uXXXX escape")),
                }
            }
        }
        u32::from_str_radix(&hex, 16)
            .ok()
            .and_then(char::from_u32)
            .ok_or_else(|| self.err(pos, "escape is not a valid character"))
    }
}

/// Reads every top-level s-expression of `text`.
pub fn read_all(text: &str) -> Result<Vec<SExpr>, ParseError> {
    let mut r = Reader {
        chars: text.chars().peekable(),
        line: 1,
        col: 1,
    };
    let mut out = Vec::new();
    while let Some(e) = r.read()? {
        out.push(e);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_nested_lists_with_positions() {
        let es = read_all("(a (b \"c\" 12)) ; comment\n:kw").unwrap();
        assert_eq!(es.len(), 2);
        match &es[0] {
            SExpr::List(items, p) => {
                assert_eq!(*p, Pos { line: 1, col: 1 });
                assert_eq!(items.len(), 2);
            }
            _ => panic!(),
        }
        assert_eq!(es[1], SExpr::Keyword("kw".into(), Pos { line: 2, col: 1 }));
    }

    #[test]
    fn string_escapes() {
        let es = read_all(r#""a""b" "\u{41}" "B""#).unwrap();
        let strs: Vec<_> = es
            .iter()
            .map(|e| match e {
                SExpr::Str(s, _) => s.clone(),
                _ => panic!(),
            })
            .collect();
        assert_eq!(strs, vec!["a\"b", "A", "B"]);
    }

    #[test]
    fn unbalanced_reports_position() {
        match read_all("\n  (a b") {
            Err(ParseError::Syntax { line, col, .. }) => assert_eq!((line, col), (2, 3)),
            other => panic!("{other:?}"),
        }
        assert!(read_all(")").is_err());
    }
}
