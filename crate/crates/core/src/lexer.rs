//! Tokenizer shared by the deformation expression language and the symbol grammar.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub pos: usize,
    /// Source text of the token, kept for integer-exponent checks.
    pub text: String,
}

pub(crate) fn tokenize(src: &str) -> Result<Vec<Token>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let simple = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = simple {
            out.push(Token { tok, pos: start, text: c.to_string() });
            i += 1;
            continue;
        }
        if c.is_ascii_digit() || c == '.' {
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            // exponent part: e, E followed by optional sign and at least one digit
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let text = &src[start..i];
            let value: f64 = text
                .parse()
                .map_err(|_| Error::parse(start, format!("malformed number `{text}`"), &["number"]))?;
            out.push(Token { tok: Tok::Num(value), pos: start, text: text.to_string() });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            let text = &src[start..i];
            out.push(Token { tok: Tok::Ident(text.to_string()), pos: start, text: text.to_string() });
            continue;
        }
        return Err(Error::parse(start, format!("unexpected character `{c}`"), &["operator", "number", "identifier"]));
    }
    out.push(Token { tok: Tok::End, pos: src.len(), text: String::new() });
    Ok(out)
}

/// Cursor over a token stream.
pub(crate) struct Cursor {
    toks: Vec<Token>,
    idx: usize,
}

impl Cursor {
    pub fn new(toks: Vec<Token>) -> Self {
        Cursor { toks, idx: 0 }
    }

    pub fn peek(&self) -> &Token {
        &self.toks[self.idx]
    }

    pub fn bump(&mut self) -> Token {
        let t = self.toks[self.idx].clone();
        if self.idx + 1 < self.toks.len() {
            self.idx += 1;
        }
        t
    }

    pub fn eat(&mut self, tok: &Tok) -> bool {
        if &self.peek().tok == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, tok: &Tok, name: &str) -> Result<Token> {
        if &self.peek().tok == tok {
            Ok(self.bump())
        } else {
            let t = self.peek();
            Err(Error::parse(t.pos, format!("unexpected `{}`", describe(t)), &[name]))
        }
    }

    pub fn expect_end(&self) -> Result<()> {
        let t = self.peek();
        if t.tok == Tok::End {
            Ok(())
        } else {
            Err(Error::parse(t.pos, format!("unexpected `{}`", describe(t)), &["operator", "end of input"]))
        }
    }
}

pub(crate) fn describe(t: &Token) -> String {
    if t.tok == Tok::End {
        "end of input".to_string()
    } else {
        t.text.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_with_exponents() {
        let toks = tokenize("1.5e-3*n + 2E2").unwrap();
        assert_eq!(toks[0].tok, Tok::Num(1.5e-3));
        assert_eq!(toks[4].tok, Tok::Num(200.0));
    }

    #[test]
    fn bad_character_reports_position() {
        match tokenize("n + $") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 4),
            other => panic!("unexpected {other:?}"),
        }
    }
}
