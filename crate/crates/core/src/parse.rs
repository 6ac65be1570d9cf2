//! Text format for polynomials.
//!
//! Terms are joined by `+`, factors `x<i>^<e>` by `*`. `^1` may be dropped,
//! whitespace (including newlines) is ignored, and the whole expression may be
//! wrapped in `[` `]`. `0` is the zero polynomial and `1` the unit monomial.
//! Repeated terms cancel, as they should over F₂.
//!
//! ```
//! use cohit::parse::parse_polynomial;
//!
//! let p = parse_polynomial("[x1^3*x2^3*x3^13*x4^13 + x1^7*x2^7*x3^9*x4^9]", 4).unwrap();
//! assert_eq!(p.len(), 2);
//! assert!(parse_polynomial("x1 + x1", 2).unwrap().is_zero());
//! ```

use std::iter::Peekable;
use std::str::CharIndices;

use crate::error::ParseError;
use crate::monomial::{Monomial, Polynomial};

struct Lexer<'a> {
    chars: Peekable<CharIndices<'a>>,
    line: usize,
    column: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            chars: text.char_indices().peekable(),
            line: 1,
            column: 1,
        }
    }

    fn skip_ws(&mut self) {
        while let Some(&(_, c)) = self.chars.peek() {
            if !c.is_whitespace() {
                break;
            }
            self.bump();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.peek().map(|&(_, c)| c)
    }

    fn bump(&mut self) -> Option<char> {
        let (_, c) = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }

    fn expect(&mut self, want: char) -> Result<(), ParseError> {
        match self.peek() {
            Some(c) if c == want => {
                self.bump();
                Ok(())
            }
            Some(c) => Err(self.error(format!("expected '{want}', found '{c}'"))),
            None => Err(self.error(format!("expected '{want}', found end of input"))),
        }
    }

    /// Digits directly at the cursor; whitespace inside a number is not allowed.
    fn number(&mut self) -> Result<u64, ParseError> {
        self.skip_ws();
        let (line, column) = (self.line, self.column);
        let mut digits = String::new();
        while let Some(&(_, c)) = self.chars.peek() {
            if !c.is_ascii_digit() {
                break;
            }
            digits.push(c);
            self.bump();
        }
        if digits.is_empty() {
            return Err(self.error("expected a number"));
        }
        digits.parse().map_err(|_| ParseError {
            line,
            column,
            message: format!("number {digits} is too large"),
        })
    }
}

/// Parses `text` as a polynomial in `x1..xk`.
pub fn parse_polynomial(text: &str, k: usize) -> Result<Polynomial, ParseError> {
    let mut lx = Lexer::new(text);
    let bracketed = lx.peek() == Some('[');
    if bracketed {
        lx.bump();
    }
    let mut poly = Polynomial::zero(k);
    loop {
        if let Some(m) = term(&mut lx, k)? {
            poly.toggle(m);
        }
        if lx.peek() == Some('+') {
            lx.bump();
        } else {
            break;
        }
    }
    if bracketed {
        lx.expect(']')?;
    }
    match lx.peek() {
        None => Ok(poly),
        Some(c) => Err(lx.error(format!("unexpected '{c}'"))),
    }
}

/// One product of factors; `None` for a literal `0`.
fn term(lx: &mut Lexer<'_>, k: usize) -> Result<Option<Monomial>, ParseError> {
    let mut exps = vec![0u32; k];
    let mut zero = false;
    loop {
        match lx.peek() {
            Some('x') => {
                lx.bump();
                let (line, column) = (lx.line, lx.column);
                let i = lx.number()?;
                if i == 0 || i > k as u64 {
                    return Err(ParseError {
                        line,
                        column,
                        message: format!("variable x{i} is outside x1..x{k}"),
                    });
                }
                let e = if lx.peek() == Some('^') {
                    lx.bump();
                    lx.number()?
                } else {
                    1
                };
                let slot = &mut exps[i as usize - 1];
                *slot = u32::try_from(e)
                    .ok()
                    .and_then(|e| slot.checked_add(e))
                    .ok_or_else(|| lx.error("exponent overflows u32"))?;
            }
            Some(c) if c.is_ascii_digit() => match lx.number()? {
                0 => zero = true,
                1 => {}
                c => return Err(lx.error(format!("coefficient {c} is not 0 or 1"))),
            },
            Some(c) => return Err(lx.error(format!("expected a factor, found '{c}'"))),
            None => return Err(lx.error("expected a factor, found end of input")),
        }
        if lx.peek() == Some('*') {
            lx.bump();
        } else {
            break;
        }
    }
    Ok((!zero).then(|| Monomial::new(exps)))
}
