//! Compact textual regexes for tests, examples and the command line.
//!
//! `|` is union, juxtaposition concatenation, `*`, `+`, `?` are postfix,
//! `~` is prefix complement, `()` is the empty word and `∅` the empty
//! language. Any other character is a literal; `\` escapes one.

use super::{ParseError, Regex};

struct P<'a> {
    s: &'a [char],
    i: usize,
}

impl P<'_> {
    fn err(&self, msg: &str) -> ParseError {
        ParseError::Syntax {
            line: 1,
            col: self.i + 1,
            msg: msg.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.s.get(self.i).copied()
    }

    fn union(&mut self) -> Result<Regex, ParseError> {
        let mut r = self.concat()?;
        while self.peek() == Some('|') {
            self.i += 1;
            r = Regex::union(r, self.concat()?);
        }
        Ok(r)
    }

    fn concat(&mut self) -> Result<Regex, ParseError> {
        let mut parts = Vec::new();
        while let Some(c) = self.peek() {
            if c == '|' || c == ')' {
                break;
            }
            parts.push(self.postfix()?);
        }
        Ok(Regex::concat_all(parts))
    }

    fn postfix(&mut self) -> Result<Regex, ParseError> {
        let mut r = self.atom()?;
        while let Some(c) = self.peek() {
            r = match c {
                '*' => Regex::star(r),
                '+' => Regex::concat(r.clone(), Regex::star(r)),
                '?' => Regex::union(Regex::Epsilon, r),
                _ => break,
            };
            self.i += 1;
        }
        Ok(r)
    }

    fn atom(&mut self) -> Result<Regex, ParseError> {
        let c = self.peek().ok_or_else(|| self.err("unexpected end of regex"))?;
        self.i += 1;
        Ok(match c {
            '(' => {
                let r = self.union()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected `)`"));
                }
                self.i += 1;
                r
            }
            '~' => Regex::complement(self.postfix()?),
            '∅' => Regex::Empty,
            '*' | '+' | '?' => return Err(self.err("postfix operator without operand")),
            '\\' => {
                let c = self.peek().ok_or_else(|| self.err("dangling escape"))?;
                self.i += 1;
                Regex::lit(c)
            }
            c => Regex::lit(c),
        })
    }
}

pub fn parse_regex(text: &str) -> Result<Regex, ParseError> {
    let s: Vec<char> = text.chars().collect();
    let mut p = P { s: &s, i: 0 };
    let r = p.union()?;
    if p.i < s.len() {
        return Err(p.err("unbalanced `)`"));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::Alphabet;
    use crate::semantics::RegexMatcher;

    #[test]
    fn operators() {
        let mut m = RegexMatcher::new(Alphabet::new(['a', 'b']));
        let r = parse_regex("a(ab)*|~(b*)").unwrap();
        assert!(m.matches(&r, "aab") && m.matches(&r, "ba") && !m.matches(&r, "bb"));
        let r = parse_regex("()").unwrap();
        assert!(m.matches(&r, "") && !m.matches(&r, "a"));
        assert!(m.matches(&parse_regex("a+b?").unwrap(), "aab"));
        assert!(parse_regex("a)").is_err() && parse_regex("(a").is_err() && parse_regex("*").is_err());
    }
}
