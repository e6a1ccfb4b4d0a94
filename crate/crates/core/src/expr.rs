//! The expression language for algebra elements.
//!
//! ```text
//! expr    := ['-'] term (('+' | '-') term)*
//! term    := postfix postfix*              juxtaposition is the product
//! postfix := primary '*'*                  '*' is the adjoint
//! primary := 's(' word ')' ['@' vertex] | 'phi(' expr ')' | '(' expr ')'
//!          | integer ['/' integer] | 'i'
//! ```
//!
//! A word is a dot-separated list of edge names; `s()` is the identity and
//! needs `@v` when the graph has several vertices. Scalars act as multiples
//! of the unit `Σ_v p_v`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::algebra::{Element, Scalar};
use crate::error::{Error, Result};
use crate::graph::KGraph;

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Generator { word: String, at: Option<String> },
    Phi,
    Number(BigRational),
    I,
    Open,
    Close,
    Plus,
    Minus,
    Star,
}

fn reserved(c: char) -> bool {
    c.is_whitespace() || "#.*+()@^-".contains(c)
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |msg: String| Error::Expression(msg);
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let simple = match c {
            '(' => Some(Token::Open),
            ')' => Some(Token::Close),
            '+' => Some(Token::Plus),
            '-' => Some(Token::Minus),
            '*' => Some(Token::Star),
            _ => None,
        };
        if let Some(t) = simple {
            out.push(t);
            i += 1;
            continue;
        }
        let start = i;
        while i < chars.len() && !reserved(chars[i]) {
            i += 1;
        }
        let ident: String = chars[start..i].iter().collect();
        if ident.is_empty() {
            return Err(err(format!("unexpected character {c:?}")));
        }
        let opens = chars.get(i) == Some(&'(');
        match ident.as_str() {
            "s" if opens => {
                let close = chars[i..]
                    .iter()
                    .position(|&x| x == ')')
                    .ok_or_else(|| err("unclosed s(".into()))?;
                let word: String = chars[i + 1..i + close].iter().collect();
                i += close + 1;
                let mut at = None;
                if chars.get(i) == Some(&'@') {
                    let s = i + 1;
                    i = s;
                    while i < chars.len() && !reserved(chars[i]) {
                        i += 1;
                    }
                    at = Some(chars[s..i].iter().collect());
                }
                out.push(Token::Generator { word, at });
            }
            "phi" if opens => out.push(Token::Phi),
            "i" => out.push(Token::I),
            _ => out.push(Token::Number(parse_rational(&ident).ok_or_else(|| err(format!("unknown token {ident}")))?)),
        }
    }
    Ok(out)
}

fn parse_rational(text: &str) -> Option<BigRational> {
    let (n, d) = match text.split_once('/') {
        Some((n, d)) => (n, d),
        None => (text, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    (!d.is_zero()).then(|| BigRational::new(n, d))
}

#[derive(Clone, Debug)]
enum Value<'g> {
    Scalar(Scalar),
    Element(Element<'g>),
}

struct Parser<'g, 't> {
    graph: &'g KGraph,
    tokens: &'t [Token],
    pos: usize,
}

impl<'g> Value<'g> {
    fn into_element(self, g: &'g KGraph) -> Element<'g> {
        match self {
            Value::Scalar(c) => Element::unit(g).scale(&c),
            Value::Element(x) => x,
        }
    }
}

impl<'g> Parser<'g, '_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, t: Token) -> Result<()> {
        match self.next() {
            Some(x) if x == t => Ok(()),
            other => Err(Error::Expression(format!("expected {t:?}, found {other:?}"))),
        }
    }

    fn sum(&mut self, a: Value<'g>, b: Value<'g>, negate: bool) -> Result<Value<'g>> {
        let b = if negate { self.product(Value::Scalar(-&Scalar::one()), b)? } else { b };
        Ok(match (a, b) {
            (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(&x + &y),
            (a, b) => Value::Element(a.into_element(self.graph).add(&b.into_element(self.graph))?),
        })
    }

    fn product(&self, a: Value<'g>, b: Value<'g>) -> Result<Value<'g>> {
        Ok(match (a, b) {
            (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(&x * &y),
            (Value::Scalar(c), Value::Element(x)) | (Value::Element(x), Value::Scalar(c)) => Value::Element(x.scale(&c)),
            (Value::Element(x), Value::Element(y)) => Value::Element(x.multiply(&y)?),
        })
    }

    fn expr(&mut self) -> Result<Value<'g>> {
        let mut acc = if self.peek() == Some(&Token::Minus) {
            self.pos += 1;
            let t = self.term()?;
            self.product(Value::Scalar(-&Scalar::one()), t)?
        } else {
            self.term()?
        };
        while let Some(t) = self.peek() {
            let negate = match t {
                Token::Plus => false,
                Token::Minus => true,
                _ => break,
            };
            self.pos += 1;
            let rhs = self.term()?;
            acc = self.sum(acc, rhs, negate)?;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Value<'g>> {
        let mut acc = self.postfix()?;
        while matches!(
            self.peek(),
            Some(Token::Generator { .. } | Token::Phi | Token::Number(_) | Token::I | Token::Open)
        ) {
            let rhs = self.postfix()?;
            acc = self.product(acc, rhs)?;
        }
        Ok(acc)
    }

    fn postfix(&mut self) -> Result<Value<'g>> {
        let mut v = self.primary()?;
        while self.peek() == Some(&Token::Star) {
            self.pos += 1;
            v = match v {
                Value::Scalar(c) => Value::Scalar(c.conj()),
                Value::Element(x) => Value::Element(x.adjoint()),
            };
        }
        Ok(v)
    }

    fn primary(&mut self) -> Result<Value<'g>> {
        match self.next() {
            Some(Token::Generator { word, at }) => {
                let m = self.graph.parse_word(&word, at.as_deref())?;
                Ok(Value::Element(Element::s(self.graph, &m)))
            }
            Some(Token::Phi) => {
                self.expect(Token::Open)?;
                let inner = self.expr()?;
                self.expect(Token::Close)?;
                Ok(match inner {
                    Value::Scalar(c) => Value::Scalar(c),
                    Value::Element(x) => Value::Element(x.expectation()),
                })
            }
            Some(Token::Open) => {
                let inner = self.expr()?;
                self.expect(Token::Close)?;
                Ok(inner)
            }
            Some(Token::Number(r)) => Ok(Value::Scalar(Scalar::new(r, BigRational::zero()))),
            Some(Token::I) => Ok(Value::Scalar(Scalar::i())),
            other => Err(Error::Expression(format!("unexpected {other:?}"))),
        }
    }
}

/// Parses and evaluates an expression; the result is not canonicalized.
pub fn parse_expression<'g>(g: &'g KGraph, text: &str) -> Result<Element<'g>> {
    let tokens = tokenize(text)?;
    let mut p = Parser {
        graph: g,
        tokens: &tokens,
        pos: 0,
    };
    let v = p.expr()?;
    if p.pos != tokens.len() {
        return Err(Error::Expression(format!("trailing input at token {}", p.pos + 1)));
    }
    Ok(v.into_element(g))
}
