use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::ncpoly::{NcMatrix, NcPoly};
use crate::scalar::ExactScalar;

use super::{is_polynomial, RatExpr};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(ExactScalar),
    Ident(String),
    LParen,
    RParen,
    Plus,
    Minus,
    Star,
    Prime,
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    pos: usize,
    /// Whitespace directly before the token.
    spaced: bool,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut k = 0;
    let mut spaced = false;
    while k < bytes.len() {
        let c = bytes[k] as char;
        if c.is_whitespace() {
            spaced = true;
            k += 1;
            continue;
        }
        let start = k;
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '\'' => Tok::Prime,
            '0'..='9' => {
                let (value, end) = lex_number(text, k)?;
                k = end;
                out.push(Token {
                    tok: Tok::Num(value),
                    pos: start,
                    spaced,
                });
                spaced = false;
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while k < bytes.len() && ((bytes[k] as char).is_ascii_alphanumeric() || bytes[k] == b'_') {
                    k += 1;
                }
                out.push(Token {
                    tok: Tok::Ident(text[start..k].to_string()),
                    pos: start,
                    spaced,
                });
                spaced = false;
                continue;
            }
            other => {
                return Err(Error::Syntax {
                    pos: start,
                    message: format!("unexpected character `{other}`"),
                })
            }
        };
        out.push(Token { tok, pos: start, spaced });
        spaced = false;
        k += 1;
    }
    out.push(Token {
        tok: Tok::End,
        pos: text.len(),
        spaced,
    });
    Ok(merge_complex_literals(out))
}

/// `digits ['/' digits] ['i']`.
fn lex_number(text: &str, start: usize) -> Result<(ExactScalar, usize)> {
    let bytes = text.as_bytes();
    let digits_end = |mut k: usize| {
        while k < bytes.len() && bytes[k].is_ascii_digit() {
            k += 1;
        }
        k
    };
    let mut k = digits_end(start);
    let num: BigInt = text[start..k].parse().expect("digits");
    let mut den = BigInt::from(1);
    if k < bytes.len() && bytes[k] == b'/' {
        let d_start = k + 1;
        let d_end = digits_end(d_start);
        if d_end == d_start {
            return Err(Error::Syntax {
                pos: k,
                message: "expected denominator after `/`".into(),
            });
        }
        den = text[d_start..d_end].parse().expect("digits");
        if den.is_zero() {
            return Err(Error::InvalidScalar(text[start..d_end].to_string()));
        }
        k = d_end;
    }
    let value = BigRational::new(num, den);
    let imaginary = k < bytes.len()
        && bytes[k] == b'i'
        && !bytes.get(k + 1).is_some_and(|b| b.is_ascii_alphanumeric() || *b == b'_');
    if imaginary {
        Ok((ExactScalar::new(BigRational::zero(), value), k + 1))
    } else {
        Ok((ExactScalar::from_real(value), k))
    }
}

/// Folds `a+bi` (optionally `-a+bi`) into one literal when it is written
/// without spaces, starts an expression or a parenthesized group, and is
/// not followed by `*` or `'`. Everywhere else the pieces stay separate
/// tokens, so `x1*2+3i` keeps its usual precedence.
fn merge_complex_literals(tokens: Vec<Token>) -> Vec<Token> {
    let mut out: Vec<Token> = Vec::with_capacity(tokens.len());
    let mut k = 0;
    while k < tokens.len() {
        if let Some((lit, used)) = complex_at(&tokens, k, out.last()) {
            out.push(lit);
            k += used;
        } else {
            out.push(tokens[k].clone());
            k += 1;
        }
    }
    out
}

fn complex_at(t: &[Token], k: usize, prev: Option<&Token>) -> Option<(Token, usize)> {
    if !matches!(prev.map(|p| &p.tok), None | Some(Tok::LParen)) {
        return None;
    }
    let (negate, j) = match t[k].tok {
        Tok::Minus => (true, k + 1),
        _ => (false, k),
    };
    let real = match &t.get(j)?.tok {
        Tok::Num(r) if r.is_real() => r.clone(),
        _ => return None,
    };
    if negate && t[j].spaced {
        return None;
    }
    let sign = t.get(j + 1)?;
    let imag_tok = t.get(j + 2)?;
    let after = t.get(j + 3)?;
    let minus = match sign.tok {
        Tok::Plus => false,
        Tok::Minus => true,
        _ => return None,
    };
    let imag = match &imag_tok.tok {
        Tok::Num(z) if z.re().is_zero() && !z.im().is_zero() => z.clone(),
        _ => return None,
    };
    if sign.spaced || imag_tok.spaced || matches!(after.tok, Tok::Star | Tok::Prime) {
        return None;
    }
    let real = if negate { -real } else { real };
    let imag = if minus { -imag } else { imag };
    Some((
        Token {
            tok: Tok::Num(real + imag),
            pos: t[k].pos,
            spaced: t[k].spaced,
        },
        j + 3 - k,
    ))
}

struct Parser {
    tokens: Vec<Token>,
    at: usize,
    n_vars: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.at]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.at].clone();
        if t.tok != Tok::End {
            self.at += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Syntax {
            pos: self.peek().pos,
            message: message.into(),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if self.peek().tok == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!("expected {what}")))
        }
    }

    fn expr(&mut self) -> Result<RatExpr> {
        let mut acc = self.term()?;
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.bump();
                    acc = RatExpr::add(acc, self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    acc = RatExpr::add(acc, RatExpr::neg(self.term()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RatExpr> {
        let mut acc = self.factor()?;
        while self.peek().tok == Tok::Star {
            self.bump();
            acc = RatExpr::mul(acc, self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<RatExpr> {
        if self.peek().tok != Tok::Minus {
            return self.postfix();
        }
        self.bump();
        let next = self.peek().clone();
        if let (Tok::Num(c), false) = (&next.tok, next.spaced) {
            // `-2` is a negative literal rather than a negation node
            self.bump();
            return self.suffixes(RatExpr::Const(-c));
        }
        Ok(RatExpr::neg(self.factor()?))
    }

    fn postfix(&mut self) -> Result<RatExpr> {
        let atom = self.atom()?;
        self.suffixes(atom)
    }

    fn suffixes(&mut self, mut e: RatExpr) -> Result<RatExpr> {
        while self.peek().tok == Tok::Prime {
            self.bump();
            e = RatExpr::adjoint_of(e);
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<RatExpr> {
        let t = self.bump();
        match t.tok {
            Tok::Num(c) => Ok(RatExpr::Const(c)),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(name) => self.ident(name, t.pos),
            Tok::End => Err(Error::Syntax {
                pos: t.pos,
                message: "unexpected end of input".into(),
            }),
            other => Err(Error::Syntax {
                pos: t.pos,
                message: format!("unexpected token {other:?}"),
            }),
        }
    }

    fn ident(&mut self, name: String, pos: usize) -> Result<RatExpr> {
        if name == "inv" {
            self.expect(Tok::LParen, "`(` after inv")?;
            let e = self.expr()?;
            self.expect(Tok::RParen, "`)`")?;
            return Ok(RatExpr::inv(e));
        }
        if name == "i" {
            return Ok(RatExpr::Const(ExactScalar::i()));
        }
        let index = name
            .strip_prefix('x')
            .filter(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()))
            .and_then(|d| d.parse::<usize>().ok());
        match index {
            Some(i) if (1..=self.n_vars).contains(&i) => Ok(RatExpr::Var(i)),
            _ => Err(Error::UnknownVariable { name, pos }),
        }
    }
}

/// Largest `k` among the variables `xk` mentioned in `text` (0 if none).
pub fn infer_n_vars(text: &str) -> usize {
    let bytes = text.as_bytes();
    let mut best = 0;
    for (k, &b) in bytes.iter().enumerate() {
        let starts_word = k == 0 || !(bytes[k - 1].is_ascii_alphanumeric() || bytes[k - 1] == b'_');
        if b == b'x' && starts_word {
            let digits: String = text[k + 1..].chars().take_while(char::is_ascii_digit).collect();
            if let Ok(v) = digits.parse::<usize>() {
                best = best.max(v);
            }
        }
    }
    best
}

/// Parses a rational expression in variables `x1 … x{n_vars}`.
///
/// Grammar, loosest binding first: sums and differences, products,
/// unary minus, then postfix adjoint `'` on atoms. Atoms are variables,
/// literals (`3`, `-3/2`, `2i`, `i`, `3/2+1/2i`), `inv(expr)` and
/// parenthesized expressions.
pub fn parse(text: &str, n_vars: usize) -> Result<RatExpr> {
    let mut p = Parser {
        tokens: lex(text)?,
        at: 0,
        n_vars,
    };
    let e = p.expr()?;
    if p.peek().tok != Tok::End {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

/// Parses an inverse-free expression into its expanded polynomial.
pub fn parse_poly(text: &str, n_vars: usize) -> Result<NcPoly> {
    let e = parse(text, n_vars)?;
    is_polynomial(&e, n_vars).ok_or_else(|| Error::Syntax {
        pos: 0,
        message: "expression contains inv(...) and is not a polynomial".into(),
    })
}

/// Parses `p11, p12; p21, p22` (rows separated by `;`, entries by `,`)
/// into a polynomial matrix. Optional surrounding brackets are ignored.
pub fn parse_matrix(text: &str, n_vars: usize) -> Result<NcMatrix> {
    let trimmed = text.trim();
    let body = trimmed
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .unwrap_or(trimmed);
    let offset = text.len() - text.trim_start().len() + usize::from(body.len() != trimmed.len());
    let mut rows = Vec::new();
    for (row_text, row_pos) in split_top(body, ';', offset)? {
        let mut row = Vec::new();
        for (entry, pos) in split_top(row_text, ',', row_pos)? {
            let p = parse_poly(entry, n_vars).map_err(|e| match e {
                Error::Syntax { pos: p, message } => Error::Syntax {
                    pos: pos + p,
                    message,
                },
                Error::UnknownVariable { name, pos: p } => Error::UnknownVariable { name, pos: pos + p },
                other => other,
            })?;
            row.push(p);
        }
        rows.push(row);
    }
    NcMatrix::from_rows(rows)
}

/// Splits at `sep` outside parentheses, returning pieces with their offsets.
fn split_top(text: &str, sep: char, offset: usize) -> Result<Vec<(&str, usize)>> {
    let mut depth = 0i64;
    let mut start = 0;
    let mut out = Vec::new();
    for (k, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push((&text[start..k], offset + start));
                start = k + 1;
            }
            _ => {}
        }
    }
    out.push((&text[start..], offset + start));
    if out.iter().any(|(s, _)| s.trim().is_empty()) {
        return Err(Error::Syntax {
            pos: offset,
            message: format!("empty entry in matrix (separator `{sep}`)"),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variable_count_is_inferred() {
        assert_eq!(infer_n_vars("x2*inv(x1*x2)*x1"), 2);
        assert_eq!(infer_n_vars("x1, 0; 0, x12'"), 12);
        assert_eq!(infer_n_vars("3/2"), 0);
    }

    fn x(i: usize) -> RatExpr {
        RatExpr::var(i)
    }

    fn c(re: i64, im: i64) -> RatExpr {
        RatExpr::Const(ExactScalar::from_ints(re, im))
    }

    #[test]
    fn product_with_inverse() {
        let e = parse("x2*inv(x1*x2)*x1", 2).unwrap();
        let expected = RatExpr::mul(
            RatExpr::mul(x(2), RatExpr::inv(RatExpr::mul(x(1), x(2)))),
            x(1),
        );
        assert_eq!(e, expected);
    }

    #[test]
    fn simple_forms() {
        assert_eq!(parse("inv(x1)", 1).unwrap(), RatExpr::inv(x(1)));
        assert_eq!(parse("x1 + (2+3i)", 1).unwrap(), RatExpr::add(x(1), c(2, 3)));
        assert_eq!(parse("(-2+3i)", 1).unwrap(), c(-2, 3));
        assert_eq!(parse("(2 + 3i)", 1).unwrap(), RatExpr::add(c(2, 0), c(0, 3)));
        assert_eq!(parse("-2", 1).unwrap(), c(-2, 0));
        assert_eq!(parse("- 2", 1).unwrap(), RatExpr::neg(c(2, 0)));
        assert_eq!(parse("i*x1", 1).unwrap(), RatExpr::mul(c(0, 1), x(1)));
        assert_eq!(
            parse("1/2i", 1).unwrap(),
            RatExpr::Const(ExactScalar::from_fraction(0, 1, 2))
        );
    }

    #[test]
    fn precedence() {
        assert_eq!(
            parse("x1*2+3i", 1).unwrap(),
            RatExpr::add(RatExpr::mul(x(1), c(2, 0)), c(0, 3))
        );
        assert_eq!(
            parse("-x1*x2", 2).unwrap(),
            RatExpr::mul(RatExpr::neg(x(1)), x(2))
        );
        assert_eq!(
            parse("x1*x2'", 2).unwrap(),
            RatExpr::mul(x(1), RatExpr::adjoint_of(x(2)))
        );
        assert_eq!(
            parse("x1 - x2 + x1", 2).unwrap(),
            RatExpr::add(RatExpr::add(x(1), RatExpr::neg(x(2))), x(1))
        );
    }

    #[test]
    fn errors_carry_positions() {
        assert!(matches!(parse("x1 + ", 1), Err(Error::Syntax { pos: 5, .. })));
        assert!(matches!(parse("x1 + y", 1), Err(Error::UnknownVariable { pos: 5, .. })));
        assert!(matches!(parse("x3", 2), Err(Error::UnknownVariable { .. })));
        assert!(matches!(parse("x0", 2), Err(Error::UnknownVariable { .. })));
        assert!(matches!(parse("(x1", 1), Err(Error::Syntax { pos: 3, .. })));
        assert!(matches!(parse("x1 x2", 2), Err(Error::Syntax { pos: 3, .. })));
        assert!(parse("1/0", 1).is_err());
        assert!(parse("x1 # 2", 1).is_err());
    }

    #[test]
    fn canonical_round_trip() {
        for text in [
            "x1 + (2+3i)",
            "x2*inv(x1*x2)*x1",
            "-(2)",
            "(x1 + x2)'*-3/2",
            "x1*(x2*x1)",
            "x1 + (x2 + x1)",
            "--x1",
            "(-1/2-1i)'",
            "inv(x1)''",
            "-(x1*x2) + -1i",
        ] {
            let e = parse(text, 2).unwrap();
            let printed = e.to_string();
            assert_eq!(parse(&printed, 2).unwrap(), e, "{text} -> {printed}");
        }
    }

    #[test]
    fn polynomial_text_round_trip() {
        let p = parse_poly("(3/2+1/2i)*x1*x2' + 1 - x2*x2", 2).unwrap();
        assert_eq!(parse_poly(&p.to_string(), 2).unwrap(), p);
    }

    #[test]
    fn matrix_text() {
        let m = parse_matrix("x1, x2; x2, x3", 3).unwrap();
        assert_eq!((m.nrows(), m.ncols()), (2, 2));
        assert_eq!(parse_matrix(&m.to_string(), 3).unwrap(), m);
        assert_eq!(parse_matrix("[x1, (1+2i)*x2]", 2).unwrap().ncols(), 2);
        assert!(parse_matrix("x1, x2; x1", 2).is_err());
        assert!(parse_matrix("x1,; x1", 2).is_err());
        assert!(parse_matrix("inv(x1)", 1).is_err());
    }
}
