//! Text input for polynomials and field elements.
//!
//! Two forms are accepted:
//! * expressions in `x` such as `x^3-1`, `(w+1)*x^2+x`, `2x+1`, where `w` is
//!   the field generator (index `p`) and integers are read modulo `p`;
//! * comma-separated coefficient lists ascending in `x`, e.g. `1,1,0,1`,
//!   each entry an element index or an expression in `w`.

use std::ops::Neg;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::poly::Poly;

/// Parses either accepted polynomial form.
pub fn parse_poly(field: &Field, text: &str) -> Result<Poly> {
    let text = text.trim();
    if text.contains(',') {
        let coeffs = text.split(',').map(|c| parse_coeff(field, c)).collect::<Result<Vec<_>>>()?;
        return Ok(Poly::from_coeffs(field, coeffs));
    }
    Parser::new(field, text)?.finish()
}

/// Parses a field element: an index `0..q` or an expression in `w`.
pub fn parse_elem(field: &Field, text: &str) -> Result<Elem> {
    let text = text.trim();
    if let Ok(v) = text.parse::<u64>() {
        return field.check(v);
    }
    let p = Parser::new(field, text)?.finish()?;
    match p.degree() {
        None => Ok(0),
        Some(0) => Ok(p.coeff(0)),
        Some(_) => Err(Error::Parse(format!("'{text}' is not a constant"))),
    }
}

fn parse_coeff(field: &Field, text: &str) -> Result<Elem> {
    let text = text.trim();
    if text.is_empty() {
        return Err(Error::Parse("empty coefficient".into()));
    }
    parse_elem(field, text)
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(u64),
    X,
    W,
    Plus,
    Minus,
    Star,
    Caret,
    Open,
    Close,
}

struct Parser<'a> {
    field: &'a Field,
    tokens: Vec<Token>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(field: &'a Field, text: &str) -> Result<Self> {
        let mut tokens = Vec::new();
        let mut chars = text.chars().peekable();
        while let Some(&c) = chars.peek() {
            match c {
                ' ' | '\t' => {
                    chars.next();
                }
                '0'..='9' => {
                    let mut v: u64 = 0;
                    while let Some(d) = chars.peek().and_then(|c| c.to_digit(10)) {
                        v = v
                            .checked_mul(10)
                            .and_then(|v| v.checked_add(d as u64))
                            .ok_or_else(|| Error::Parse("integer too large".into()))?;
                        chars.next();
                    }
                    tokens.push(Token::Num(v));
                }
                _ => {
                    chars.next();
                    tokens.push(match c {
                        'x' | 'X' => Token::X,
                        'w' | 'a' => Token::W,
                        '+' => Token::Plus,
                        '-' => Token::Minus,
                        '*' => Token::Star,
                        '^' => Token::Caret,
                        '(' => Token::Open,
                        ')' => Token::Close,
                        _ => return Err(Error::Parse(format!("unexpected character '{c}'"))),
                    });
                }
            }
        }
        if tokens.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        if tokens.contains(&Token::W) && field.degree() == 1 {
            return Err(Error::Parse(format!("'w' needs an extension field, got F_{}", field.size())));
        }
        Ok(Parser { field, tokens, pos: 0 })
    }

    fn finish(mut self) -> Result<Poly> {
        let p = self.expr()?;
        if self.pos != self.tokens.len() {
            return Err(Error::Parse(format!("unexpected {:?}", self.tokens[self.pos])));
        }
        Ok(p)
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = match self.peek() {
            Some(Token::Minus) => {
                self.pos += 1;
                self.term()?.neg()
            }
            Some(Token::Plus) => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        while let Some(op) = self.peek().cloned() {
            match op {
                Token::Plus => {
                    self.pos += 1;
                    acc = acc.try_add(&self.term()?)?;
                }
                Token::Minus => {
                    self.pos += 1;
                    acc = acc.try_sub(&self.term()?)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    /// Products, explicit (`2*x`) or by juxtaposition (`2x`, `(w+1)x^2`).
    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    acc = acc.try_mul(&self.power()?)?;
                }
                Some(Token::Num(_) | Token::X | Token::W | Token::Open) => {
                    acc = acc.try_mul(&self.power()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.peek() == Some(&Token::Caret) {
            self.pos += 1;
            match self.tokens.get(self.pos) {
                Some(&Token::Num(k)) => {
                    self.pos += 1;
                    let k = usize::try_from(k).ok().filter(|&k| k <= 1 << 20).ok_or_else(|| Error::Parse("exponent too large".into()))?;
                    return Ok(base.pow(k));
                }
                _ => return Err(Error::Parse("expected an integer exponent after '^'".into())),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly> {
        let f = self.field;
        let tok = self.tokens.get(self.pos).cloned().ok_or_else(|| Error::Parse("unexpected end of input".into()))?;
        self.pos += 1;
        match tok {
            Token::Num(v) => Ok(Poly::constant(f, f.from_int((v % f.characteristic() as u64) as i64))),
            Token::X => Ok(Poly::x(f)),
            Token::W => Ok(Poly::constant(f, f.characteristic())),
            Token::Open => {
                let inner = self.expr()?;
                if self.tokens.get(self.pos) != Some(&Token::Close) {
                    return Err(Error::Parse("missing ')'".into()));
                }
                self.pos += 1;
                Ok(inner)
            }
            Token::Minus => Ok(self.power()?.neg()),
            other => Err(Error::Parse(format!("unexpected {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::field_of_size;

    #[test]
    fn binary_examples() {
        let f2 = field_of_size(2).unwrap();
        assert_eq!(parse_poly(&f2, "x^3-1").unwrap(), Poly::from_coeffs(&f2, vec![1, 0, 0, 1]));
        assert_eq!(parse_poly(&f2, "1,1,0,1").unwrap(), Poly::from_coeffs(&f2, vec![1, 1, 0, 1]));
        assert_eq!(parse_poly(&f2, "x^3 + x + 1").unwrap(), parse_poly(&f2, "1,1,0,1").unwrap());
        assert_eq!(parse_poly(&f2, "x").unwrap(), Poly::x(&f2));
        assert_eq!(parse_poly(&f2, "(x+1)^2").unwrap(), parse_poly(&f2, "x^2+1").unwrap());
        assert!(parse_poly(&f2, "x^").is_err());
        assert!(parse_poly(&f2, "w+1").is_err());
        assert!(parse_poly(&f2, "").is_err());
        assert!(parse_poly(&f2, "1,,1").is_err());
        assert!(parse_poly(&f2, "1,2").is_err());
    }

    #[test]
    fn extension_examples() {
        let f4 = field_of_size(4).unwrap();
        assert_eq!(parse_poly(&f4, "x^2-w").unwrap(), Poly::from_coeffs(&f4, vec![2, 0, 1]));
        assert_eq!(parse_poly(&f4, "(w+1)*x^2").unwrap(), Poly::from_coeffs(&f4, vec![0, 0, 3]));
        assert_eq!(parse_poly(&f4, "(w+1)x^2").unwrap(), Poly::from_coeffs(&f4, vec![0, 0, 3]));
        assert_eq!(parse_poly(&f4, "3,w,1").unwrap(), Poly::from_coeffs(&f4, vec![3, 2, 1]));
        assert_eq!(parse_elem(&f4, "w^2").unwrap(), 3);
        assert_eq!(parse_elem(&f4, "2").unwrap(), 2);
        assert!(parse_elem(&f4, "4").is_err());
        assert!(parse_elem(&f4, "x").is_err());
        let f3 = field_of_size(3).unwrap();
        assert_eq!(parse_poly(&f3, "x^2-1").unwrap(), Poly::from_coeffs(&f3, vec![2, 0, 1]));
        assert_eq!(parse_poly(&f3, "-x+5").unwrap(), Poly::from_coeffs(&f3, vec![2, 2]));
    }

    #[test]
    fn display_round_trips() {
        for q in [2, 3, 4, 8, 9] {
            let f = field_of_size(q).unwrap();
            for i in 0..(q * q * q).min(800) {
                let p = Poly::from_indices(&f, &[i % q, (i / q) % q, (i / q / q) % q, 1]).unwrap();
                assert_eq!(parse_poly(&f, &p.to_string()).unwrap(), p, "q={q} {p}");
            }
        }
    }
}
