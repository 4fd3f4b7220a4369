//! Text syntax for polynomials.
//!
//! ```text
//! expr     := '-'? term (('+' | '-') term)*
//! term     := factor ('*' factor)*
//! factor   := atom ('^' natural)?
//! atom     := rational | variable | '(' expr ')' | '[' expr ',' expr ']'
//! variable := 'X' natural
//! rational := integer ('/' positive-integer)?
//! ```
//!
//! Whitespace is insignificant and `[a,b]` is the commutator `ab - ba`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::freealg::{commutator_of, Poly, Word};

/// Parses over the rationals.
pub fn parse_poly(src: &str) -> Result<Poly> {
    parse_poly_in(src, Field::Rational)
}

pub fn parse_poly_in(src: &str, field: Field) -> Result<Poly> {
    let mut p = Parser {
        chars: src.chars().collect(),
        pos: 0,
        field,
    };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(out)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    field: Field,
}

impl Parser {
    fn err(&self, message: &str) -> Error {
        Error::Syntax {
            offset: self.pos + 1,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{c}'")))
        }
    }

    fn expr(&mut self) -> Result<Poly> {
        let negate = self.eat('-');
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        while self.eat('*') {
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.eat('^') {
            self.skip_ws();
            let e = self.natural()?;
            let e = u32::try_from(&e).map_err(|_| self.err("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some('[') => {
                self.pos += 1;
                let a = self.expr()?;
                self.expect(',')?;
                let b = self.expr()?;
                self.expect(']')?;
                commutator_of(&a, &b)
            }
            Some('X') => {
                self.pos += 1;
                let start = self.pos;
                let i = self.natural()?;
                let i = u32::try_from(&i)
                    .ok()
                    .filter(|&i| i >= 1)
                    .ok_or(Error::Syntax {
                        offset: start + 1,
                        message: "variable index must be a positive integer".into(),
                    })?;
                Ok(Poly::var(self.field, i))
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.natural()?;
                let den = if self.eat('/') {
                    self.skip_ws();
                    let at = self.pos;
                    let d = self.natural()?;
                    if d.is_zero() {
                        return Err(Error::Syntax {
                            offset: at + 1,
                            message: "division by zero in rational literal".into(),
                        });
                    }
                    d
                } else {
                    BigInt::one()
                };
                let c = self
                    .field
                    .rational(&BigRational::new(num, den))
                    .map_err(|e| self.err(&e.to_string()))?;
                Ok(Poly::constant(c))
            }
            Some(_) => Err(self.err("expected a number, variable, '(' or '['")),
            None => Err(self.err("unexpected end of input")),
        }
    }

    /// Digits at the cursor, no whitespace skipping.
    fn natural(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        Ok(s.parse().expect("ascii digits"))
    }
}

/// Canonical text: degree-then-lexicographic terms, `p/q` coefficients, runs as powers.
pub fn render_poly(p: &Poly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, (w, c)) in p.terms().enumerate() {
        let (neg, mag) = if c.is_negative() {
            (true, -c)
        } else {
            (false, c.clone())
        };
        match (k, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&render_term(&mag, w));
    }
    out
}

fn render_term(c: &Scalar, w: &Word) -> String {
    if w.is_empty() {
        return c.to_string();
    }
    let word = render_word(w);
    if c.is_one() {
        word
    } else {
        format!("{c}*{word}")
    }
}

fn render_word(w: &Word) -> String {
    let mut parts: Vec<String> = Vec::new();
    let letters = w.letters();
    let mut i = 0;
    while i < letters.len() {
        let mut j = i;
        while j < letters.len() && letters[j] == letters[i] {
            j += 1;
        }
        if j - i == 1 {
            parts.push(format!("X{}", letters[i]));
        } else {
            parts.push(format!("X{}^{}", letters[i], j - i));
        }
        i = j;
    }
    parts.join("*")
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    fn x(i: u32) -> Poly {
        Poly::var(Q, i)
    }

    #[test]
    fn commutator_squared() {
        let p = parse_poly("[X1,X2]^2").unwrap();
        let c = commutator_of(&x(1), &x(2)).unwrap();
        assert_eq!(p, &c * &c);
        assert_eq!(p.num_terms(), 4);
        assert_eq!(p.degree(), Some(4));
    }

    #[test]
    fn explicit_commutator() {
        assert_eq!(
            parse_poly("X1*X2 - X2*X1").unwrap(),
            commutator_of(&x(1), &x(2)).unwrap()
        );
    }

    #[test]
    fn commutator_plus_third() {
        let p = parse_poly("[X1,X2] + 1/3").unwrap();
        assert_eq!(p.constant_term(), Q.parse_scalar("1/3").unwrap());
        assert_eq!(p.num_terms(), 3);
    }

    #[test]
    fn render_examples() {
        assert_eq!(render_poly(&Poly::zero(Q)), "0");
        assert_eq!(render_poly(&Poly::constant(Q.int(5))), "5");
        assert_eq!(render_poly(&commutator_of(&x(1), &x(2)).unwrap()), "X1*X2 - X2*X1");
        let p = parse_poly("-2/3*X2*X1*X1 + X1 - 4").unwrap();
        assert_eq!(render_poly(&p), "-4 + X1 - 2/3*X2*X1^2");
    }

    #[test]
    fn precedence_and_unary_minus() {
        let p = parse_poly("-X1 + X2*X1^2").unwrap();
        let q = &x(1).neg() + &(&x(2) * &(&x(1) * &x(1)));
        assert_eq!(p, q);
        assert_eq!(parse_poly("(X1+X2)^0").unwrap(), Poly::one(Q));
        assert_eq!(parse_poly("[-X1, X2]").unwrap(), commutator_of(&x(1), &x(2)).unwrap().neg());
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        match parse_poly("X1*") {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("{other:?}"),
        }
        match parse_poly("1/0 + X1") {
            Err(Error::Syntax { offset, message }) => {
                assert_eq!(offset, 3);
                assert!(message.contains("division by zero"));
            }
            other => panic!("{other:?}"),
        }
        assert!(parse_poly("X0").is_err());
        assert!(parse_poly("X1 X2").is_err());
        assert!(parse_poly("[X1 X2]").is_err());
        assert!(parse_poly("").is_err());
        assert!(parse_poly("2.5").is_err());
        assert!(parse_poly("X1 * - X2").is_err());
    }

    #[test]
    fn prime_field_literals() {
        let f5 = Field::Prime(5);
        let p = parse_poly_in("1/2*X1 - 3", f5).unwrap();
        assert_eq!(render_poly(&p), "2 + 3*X1");
        assert_eq!(parse_poly_in(&render_poly(&p), f5).unwrap(), p);
        assert!(parse_poly_in("1/5", f5).is_err());
    }
}
