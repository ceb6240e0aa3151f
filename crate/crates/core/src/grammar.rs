//! Text grammar for words.
//!
//! ```text
//! expr    := postfix (ws postfix)*
//! postfix := primary ('^' int)* ('^' postfix)?
//! primary := name | '1' | '(' expr ')' | '[' expr (',' expr)+ ']'
//! ```
//!
//! `u^v` is the conjugate `v⁻¹uv` and associates to the right; `u^-1`, `u^3`
//! are integer powers. Brackets are left-normed commutators.

use std::sync::Arc;

use crate::words::{Alphabet, Word, WordError};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    alphabet: &'a Arc<Alphabet>,
}

pub fn parse_word(text: &str, alphabet: &Arc<Alphabet>) -> Result<Word, WordError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        alphabet,
    };
    p.skip_ws();
    if p.at_end() {
        return Err(p.error("empty expression"));
    }
    let w = p.expr()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.error(format!("unexpected `{}`", p.peek().unwrap() as char)));
    }
    Ok(w)
}

/// Identifiers occurring in `text`, in order of first appearance.
pub fn identifiers(text: &str) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i].is_ascii_alphabetic() || bytes[i] == b'_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            let name = &text[start..i];
            if !out.iter().any(|n| n == name) {
                out.push(name.to_string());
            }
        } else if bytes[i].is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
        } else {
            i += 1;
        }
    }
    out
}

impl<'a> Parser<'a> {
    fn error(&self, msg: impl Into<String>) -> WordError {
        WordError::Syntax {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), WordError> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected `{}`", c as char)))
        }
    }

    fn starts_primary(&self) -> bool {
        matches!(self.peek(), Some(c) if c.is_ascii_alphabetic() || c == b'_' || c == b'(' || c == b'[' || c == b'1')
    }

    fn expr(&mut self) -> Result<Word, WordError> {
        let mut acc = self.postfix()?;
        loop {
            self.skip_ws();
            if !self.starts_primary() {
                return Ok(acc);
            }
            let next = self.postfix()?;
            acc = &acc * &next;
        }
    }

    fn postfix(&mut self) -> Result<Word, WordError> {
        let mut base = self.primary()?;
        loop {
            // No whitespace before `^`, so `a ^b` is rejected rather than guessed.
            if self.peek() != Some(b'^') {
                return Ok(base);
            }
            self.pos += 1;
            self.skip_ws();
            match self.peek() {
                Some(c) if c == b'-' || c == b'+' || c.is_ascii_digit() => {
                    let exp = self.integer()?;
                    base = base.pow(exp);
                }
                Some(_) if self.starts_primary() => {
                    let g = self.postfix()?;
                    return Ok(base.conjugate(&g).expect("same alphabet"));
                }
                _ => return Err(self.error("expected an exponent or a conjugator after `^`")),
            }
        }
    }

    fn integer(&mut self) -> Result<i64, WordError> {
        let start = self.pos;
        let mut neg = false;
        match self.peek() {
            Some(b'-') => {
                neg = true;
                self.pos += 1;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        let digits_start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if digits_start == self.pos {
            return Err(self.error("expected digits"));
        }
        let text = std::str::from_utf8(&self.src[digits_start..self.pos]).unwrap();
        let value: i64 = text.parse().map_err(|_| WordError::Syntax {
            pos: start,
            msg: "exponent out of range".into(),
        })?;
        Ok(if neg { -value } else { value })
    }

    fn primary(&mut self) -> Result<Word, WordError> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                self.skip_ws();
                let w = self.expr()?;
                self.expect(b')')?;
                Ok(w)
            }
            Some(b'[') => {
                self.pos += 1;
                self.skip_ws();
                let mut entries = vec![self.expr()?];
                loop {
                    self.skip_ws();
                    match self.peek() {
                        Some(b',') => {
                            self.pos += 1;
                            self.skip_ws();
                            entries.push(self.expr()?);
                        }
                        Some(b']') => {
                            self.pos += 1;
                            break;
                        }
                        _ => return Err(self.error("expected `,` or `]`")),
                    }
                }
                if entries.len() < 2 {
                    return Err(WordError::Syntax {
                        pos: start,
                        msg: "a commutator needs at least two entries".into(),
                    });
                }
                Word::left_normed_commutator(&entries)
            }
            Some(b'1') => {
                self.pos += 1;
                if matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
                    return Err(WordError::Syntax {
                        pos: start,
                        msg: "identifiers cannot start with a digit".into(),
                    });
                }
                Ok(Word::identity(self.alphabet))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match self.alphabet.lookup(name) {
                    Some(id) => Ok(Word::generator(self.alphabet, id)),
                    None => Err(WordError::UnknownGenerator(name.to_string())),
                }
            }
            Some(c) => Err(self.error(format!("unexpected `{}`", c as char))),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Arc<Alphabet> {
        Alphabet::numbered("x", 2)
    }

    fn parse(s: &str) -> Result<Word, WordError> {
        parse_word(s, &ab())
    }

    fn w(code: &[i32]) -> Word {
        Word::from_signed(&ab(), code).unwrap()
    }

    #[test]
    fn cancelling_pair() {
        assert!(parse("x1 x1^-1").unwrap().is_empty());
    }

    #[test]
    fn brackets() {
        assert_eq!(parse("[x1,x2]").unwrap(), w(&[-1, -2, 1, 2]));
        assert_eq!(
            parse("[[x1,x2],x1]").unwrap(),
            w(&[-2, -1, 2, -1, -2, 1, 2, 1])
        );
        assert_eq!(parse("[x1,x2,x1]").unwrap(), parse("[[x1,x2],x1]").unwrap());
    }

    #[test]
    fn conjugation_and_powers() {
        assert_eq!(parse("x1^x2").unwrap(), w(&[-2, 1, 2]));
        assert_eq!(parse("x1^3").unwrap(), w(&[1, 1, 1]));
        assert_eq!(parse("x1^-2").unwrap(), w(&[-1, -1]));
        // Right associative: x1^(x2^x1).
        assert_eq!(
            parse("x1^x2^x1").unwrap(),
            w(&[1]).conjugate(&w(&[-1, 2, 1])).unwrap()
        );
        // Binds tighter than juxtaposition.
        assert_eq!(parse("x1^x2 x1").unwrap(), w(&[-2, 1, 2, 1]));
        assert_eq!(
            parse("[x1,x2]^x1 (x2 x1)^-1").unwrap(),
            parse("x1^-1 [x1,x2] x1 x1^-1 x2^-1").unwrap()
        );
        assert!(parse("1").unwrap().is_empty());
        assert_eq!(parse("(x1 x2)^1").unwrap(), w(&[1, 2]));
    }

    #[test]
    fn errors() {
        assert_eq!(parse("x3"), Err(WordError::UnknownGenerator("x3".into())));
        assert!(matches!(parse("[x1"), Err(WordError::Syntax { .. })));
        assert!(matches!(parse("[x1]"), Err(WordError::Syntax { pos: 0, .. })));
        assert!(matches!(parse("x1 )"), Err(WordError::Syntax { pos: 3, .. })));
        assert!(matches!(parse(""), Err(WordError::Syntax { .. })));
        assert!(matches!(parse("x1^"), Err(WordError::Syntax { .. })));
    }

    #[test]
    fn identifier_scan() {
        assert_eq!(identifiers("[x1,x2]^x1 (y_0 x1)^-1"), vec!["x1", "x2", "y_0"]);
    }
}
