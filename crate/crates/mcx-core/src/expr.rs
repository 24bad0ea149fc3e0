//! Expression surface for the command line.
//!
//! Grammar, precedence low to high: sums, products, unary minus, integer
//! power, atoms. Atoms are decimal literals, unit words like `i1` or
//! `i1i2i3` (juxtaposition multiplies, repeats are legal), parenthesized
//! expressions, and the function calls `conj(e, [k, ...])`, `norm(e)`,
//! `proj(e, k)`, `inv(e)`, `lambda(e)`, `gamma(j)`, `gammap(j)`, `eps(k)`.
//! Unit and function indices are validated against the declared level at
//! parse time, so a parsed expression only fails later for value reasons
//! (division by a zero divisor and the like).

use num_complex::Complex64;

use crate::error::{McError, Result};
use crate::idempotent::{gamma, gamma_prime, to_idempotent, IdempotentRep, Multiperplex};
use crate::standard::{ConjugationMask, Level, Multicomplex, UnitIndexSet};

/// Lexical or grammatical failure, with a zero-based byte offset into the
/// source line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} at position {}", self.msg, self.pos)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Word(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
}

fn lex(src: &str) -> std::result::Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' => i += 1,
            '+' => {
                out.push((Tok::Plus, i));
                i += 1;
            }
            '-' => {
                out.push((Tok::Minus, i));
                i += 1;
            }
            '*' => {
                out.push((Tok::Star, i));
                i += 1;
            }
            '/' => {
                out.push((Tok::Slash, i));
                i += 1;
            }
            '^' => {
                out.push((Tok::Caret, i));
                i += 1;
            }
            '(' => {
                out.push((Tok::LParen, i));
                i += 1;
            }
            ')' => {
                out.push((Tok::RParen, i));
                i += 1;
            }
            '[' => {
                out.push((Tok::LBracket, i));
                i += 1;
            }
            ']' => {
                out.push((Tok::RBracket, i));
                i += 1;
            }
            ',' => {
                out.push((Tok::Comma, i));
                i += 1;
            }
            '0'..='9' | '.' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    i += 1;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                // exponent only when digits follow, so `2*eps(1)` and a
                // hypothetical `1e` word split correctly
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text = &src[start..i];
                let value: f64 = text.parse().map_err(|_| ParseError {
                    pos: start,
                    msg: format!("invalid number literal '{text}'"),
                })?;
                if !value.is_finite() {
                    return Err(ParseError {
                        pos: start,
                        msg: format!("number literal '{text}' overflows"),
                    });
                }
                out.push((Tok::Num(value), start));
            }
            'a'..='z' | 'A'..='Z' => {
                let start = i;
                while i < bytes.len() && (bytes[i] as char).is_ascii_alphanumeric() {
                    i += 1;
                }
                out.push((Tok::Word(src[start..i].to_string()), start));
            }
            _ => {
                return Err(ParseError {
                    pos: i,
                    msg: format!("unexpected character '{c}'"),
                })
            }
        }
    }
    Ok(out)
}

/// Parsed expression tree. Unit lists hold 1-based principal unit indices.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    /// Juxtaposed unit product, factors in source order.
    Units(Vec<usize>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, i64),
    Conj(Box<Expr>, Vec<usize>),
    Norm(Box<Expr>),
    Proj(Box<Expr>, usize),
    Inv(Box<Expr>),
    Lambda(Box<Expr>),
    Gamma(usize),
    GammaPrime(usize),
    Eps(usize),
}

struct Parser<'a> {
    toks: &'a [(Tok, usize)],
    at: usize,
    level: Level,
    end: usize,
}

/// Parses one expression, validating every unit and function index
/// against `level`.
pub fn parse(src: &str, level: Level) -> std::result::Result<Expr, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks: &toks,
        at: 0,
        level,
        end: src.len(),
    };
    let e = p.expr()?;
    if let Some((_, pos)) = p.peek_with_pos() {
        return Err(ParseError {
            pos,
            msg: "unexpected trailing input".into(),
        });
    }
    Ok(e)
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn peek_with_pos(&self) -> Option<(&Tok, usize)> {
        self.toks.get(self.at).map(|(t, p)| (t, *p))
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<&Tok> {
        let t = self.toks.get(self.at).map(|(t, _)| t);
        self.at += 1;
        t
    }

    fn expect(&mut self, want: &Tok, what: &str) -> std::result::Result<(), ParseError> {
        if self.peek() == Some(want) {
            self.at += 1;
            Ok(())
        } else {
            Err(ParseError {
                pos: self.pos(),
                msg: format!("expected {what}"),
            })
        }
    }

    fn expr(&mut self) -> std::result::Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.at += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.at += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> std::result::Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.at += 1;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(Tok::Slash) => {
                    self.at += 1;
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> std::result::Result<Expr, ParseError> {
        if self.peek() == Some(&Tok::Minus) {
            self.at += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> std::result::Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.at += 1;
        let negative = if self.peek() == Some(&Tok::Minus) {
            self.at += 1;
            true
        } else {
            false
        };
        let pos = self.pos();
        let k = match self.bump() {
            Some(Tok::Num(x)) if x.fract() == 0.0 && x.abs() <= i32::MAX as f64 => *x as i64,
            _ => {
                return Err(ParseError {
                    pos,
                    msg: "exponent must be an integer".into(),
                })
            }
        };
        if self.peek() == Some(&Tok::Caret) {
            return Err(ParseError {
                pos: self.pos(),
                msg: "chained '^' needs parentheses".into(),
            });
        }
        Ok(Expr::Pow(Box::new(base), if negative { -k } else { k }))
    }

    fn atom(&mut self) -> std::result::Result<Expr, ParseError> {
        let pos = self.pos();
        match self.bump().cloned() {
            Some(Tok::Num(x)) => Ok(Expr::Num(x)),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.expect(&Tok::RParen, "')'")?;
                Ok(e)
            }
            Some(Tok::Word(w)) => self.word(&w, pos),
            Some(other) => Err(ParseError {
                pos,
                msg: format!("unexpected token {other:?}"),
            }),
            None => Err(ParseError {
                pos,
                msg: "unexpected end of input".into(),
            }),
        }
    }

    fn word(&mut self, w: &str, pos: usize) -> std::result::Result<Expr, ParseError> {
        if let Some(units) = parse_unit_word(w) {
            for &k in &units {
                if k > self.level.get() {
                    return Err(ParseError {
                        pos,
                        msg: format!("unit i{k} exceeds level {}", self.level.get()),
                    });
                }
            }
            return Ok(Expr::Units(units));
        }
        match w {
            "conj" => {
                self.expect(&Tok::LParen, "'('")?;
                let e = self.expr()?;
                self.expect(&Tok::Comma, "','")?;
                let units = self.unit_list()?;
                self.expect(&Tok::RParen, "')'")?;
                Ok(Expr::Conj(Box::new(e), units))
            }
            "norm" | "inv" | "lambda" => {
                self.expect(&Tok::LParen, "'('")?;
                let e = Box::new(self.expr()?);
                self.expect(&Tok::RParen, "')'")?;
                Ok(match w {
                    "norm" => Expr::Norm(e),
                    "inv" => Expr::Inv(e),
                    _ => Expr::Lambda(e),
                })
            }
            "proj" => {
                self.expect(&Tok::LParen, "'('")?;
                let e = self.expr()?;
                self.expect(&Tok::Comma, "','")?;
                let k = self.index_arg("component index")?;
                self.expect(&Tok::RParen, "')'")?;
                if self.level.get() < 2 {
                    return Err(ParseError {
                        pos,
                        msg: "proj requires level >= 2".into(),
                    });
                }
                if k == 0 || k > self.level.component_count() {
                    return Err(ParseError {
                        pos,
                        msg: format!(
                            "component index {k} out of range 1..={}",
                            self.level.component_count()
                        ),
                    });
                }
                Ok(Expr::Proj(Box::new(e), k))
            }
            "gamma" | "gammap" => {
                self.expect(&Tok::LParen, "'('")?;
                let j = self.index_arg("level index")?;
                self.expect(&Tok::RParen, "')'")?;
                if self.level.get() < 2 {
                    return Err(ParseError {
                        pos,
                        msg: format!("{w} requires level >= 2"),
                    });
                }
                if j < 2 || j > self.level.get() {
                    return Err(ParseError {
                        pos,
                        msg: format!("level index {j} out of range 2..={}", self.level.get()),
                    });
                }
                Ok(if w == "gamma" {
                    Expr::Gamma(j)
                } else {
                    Expr::GammaPrime(j)
                })
            }
            "eps" => {
                self.expect(&Tok::LParen, "'('")?;
                let k = self.index_arg("component index")?;
                self.expect(&Tok::RParen, "')'")?;
                if self.level.get() < 2 {
                    return Err(ParseError {
                        pos,
                        msg: "eps requires level >= 2".into(),
                    });
                }
                if k == 0 || k > self.level.component_count() {
                    return Err(ParseError {
                        pos,
                        msg: format!(
                            "component index {k} out of range 1..={}",
                            self.level.component_count()
                        ),
                    });
                }
                Ok(Expr::Eps(k))
            }
            _ => Err(ParseError {
                pos,
                msg: format!("unknown name '{w}'"),
            }),
        }
    }

    fn index_arg(&mut self, what: &str) -> std::result::Result<usize, ParseError> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Num(x)) if x.fract() == 0.0 && *x >= 0.0 && *x <= u32::MAX as f64 => {
                Ok(*x as usize)
            }
            _ => Err(ParseError {
                pos,
                msg: format!("expected {what}"),
            }),
        }
    }

    fn unit_list(&mut self) -> std::result::Result<Vec<usize>, ParseError> {
        self.expect(&Tok::LBracket, "'['")?;
        let mut units = Vec::new();
        if self.peek() == Some(&Tok::RBracket) {
            self.at += 1;
            return Ok(units);
        }
        loop {
            let pos = self.pos();
            let k = self.index_arg("unit index")?;
            if k == 0 || k > self.level.get() {
                return Err(ParseError {
                    pos,
                    msg: format!("unit index {k} out of range 1..={}", self.level.get()),
                });
            }
            units.push(k);
            match self.bump() {
                Some(Tok::Comma) => continue,
                Some(Tok::RBracket) => return Ok(units),
                _ => {
                    return Err(ParseError {
                        pos: self.pos(),
                        msg: "expected ',' or ']'".into(),
                    })
                }
            }
        }
    }
}

/// Splits a word of the shape `i3i1i2` into its 1-based indices; returns
/// None when the word is not a pure unit product.
fn parse_unit_word(w: &str) -> Option<Vec<usize>> {
    let bytes = w.as_bytes();
    let mut units = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] != b'i' {
            return None;
        }
        i += 1;
        let start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        if i == start || bytes[start] == b'0' {
            return None;
        }
        units.push(w[start..i].parse().ok()?);
    }
    if units.is_empty() {
        None
    } else {
        Some(units)
    }
}

/// Evaluation result. Level 1 lives in the complex plane; higher levels
/// carry the component vector, and norms stay tagged as multiperplex so
/// they render in epsilon terms.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    M1(Complex64),
    Mc(IdempotentRep),
    Perplex(Multiperplex),
}

impl Value {
    pub fn as_rep(&self) -> Result<IdempotentRep> {
        match self {
            Value::M1(_) => Err(McError::LevelTooLow(1)),
            Value::Mc(r) => Ok(r.clone()),
            Value::Perplex(d) => Ok(d.to_rep()),
        }
    }
}

/// Evaluates a parsed expression. `tol` scales the null-cone test behind
/// division and inversion.
pub fn eval(e: &Expr, level: Level, tol: f64) -> Result<Value> {
    if level.get() == 1 {
        return Ok(Value::M1(eval1(e, tol)?));
    }
    eval_n(e, level, tol)
}

fn eval1(e: &Expr, tol: f64) -> Result<Complex64> {
    Ok(match e {
        Expr::Num(x) => Complex64::new(*x, 0.0),
        Expr::Units(units) => {
            let mut z = Complex64::new(1.0, 0.0);
            for _ in units {
                z *= Complex64::new(0.0, 1.0);
            }
            z
        }
        Expr::Add(a, b) => eval1(a, tol)? + eval1(b, tol)?,
        Expr::Sub(a, b) => eval1(a, tol)? - eval1(b, tol)?,
        Expr::Mul(a, b) => eval1(a, tol)? * eval1(b, tol)?,
        Expr::Div(a, b) => {
            let denom = eval1(b, tol)?;
            check1_invertible(denom, tol)?;
            eval1(a, tol)? / denom
        }
        Expr::Neg(a) => -eval1(a, tol)?,
        Expr::Pow(a, k) => {
            let base = eval1(a, tol)?;
            if *k < 0 {
                check1_invertible(base, tol)?;
            }
            base.powi(*k as i32)
        }
        Expr::Conj(a, units) => {
            let z = eval1(a, tol)?;
            if units.len() % 2 == 1 {
                z.conj()
            } else {
                z
            }
        }
        Expr::Norm(a) => Complex64::new(eval1(a, tol)?.norm(), 0.0),
        Expr::Inv(a) => {
            let z = eval1(a, tol)?;
            check1_invertible(z, tol)?;
            z.inv()
        }
        Expr::Lambda(a) => eval1(a, tol)?.conj(),
        Expr::Proj(..) | Expr::Gamma(_) | Expr::GammaPrime(_) | Expr::Eps(_) => {
            return Err(McError::LevelTooLow(1))
        }
    })
}

fn check1_invertible(z: Complex64, tol: f64) -> Result<()> {
    if z.norm() <= tol * (1.0 + z.norm()) {
        return Err(McError::NullCone { indices: vec![0] });
    }
    Ok(())
}

fn eval_n(e: &Expr, level: Level, tol: f64) -> Result<Value> {
    Ok(match e {
        Expr::Num(x) => Value::Mc(IdempotentRep::scalar(level, Complex64::new(*x, 0.0))?),
        Expr::Units(units) => {
            // fold the juxtaposed product over subset masks: each pair of
            // shared units contributes i^2 = -1
            let mut mask: u32 = 0;
            let mut sign = 1.0;
            for &k in units {
                let bit = 1u32 << (k - 1);
                if mask & bit != 0 {
                    sign = -sign;
                }
                mask ^= bit;
            }
            let set = UnitIndexSet::from_bits(mask);
            let unit = Multicomplex::unit(level, set)?;
            Value::Mc(to_idempotent(&unit.scale(sign))?)
        }
        Expr::Add(a, b) => binary(eval_n(a, level, tol)?, eval_n(b, level, tol)?, |x, y| {
            x.add_fast(y)
        })?,
        Expr::Sub(a, b) => binary(eval_n(a, level, tol)?, eval_n(b, level, tol)?, |x, y| {
            x.sub_fast(y)
        })?,
        Expr::Mul(a, b) => binary(eval_n(a, level, tol)?, eval_n(b, level, tol)?, |x, y| {
            x.mul_fast(y)
        })?,
        Expr::Div(a, b) => binary(eval_n(a, level, tol)?, eval_n(b, level, tol)?, |x, y| {
            x.mul_fast(&y.invert_with_tol(tol)?)
        })?,
        Expr::Neg(a) => match eval_n(a, level, tol)? {
            Value::Perplex(d) => Value::Perplex(d.to_rep().neg().split_perplex().0),
            v => Value::Mc(v.as_rep()?.neg()),
        },
        Expr::Pow(a, k) => {
            let v = eval_n(a, level, tol)?;
            let perplex = matches!(v, Value::Perplex(_));
            let rep = v.as_rep()?;
            let base = if *k < 0 {
                rep.invert_with_tol(tol)?
            } else {
                rep
            };
            let out = base.powi(k.abs())?;
            reperplex(out, perplex, tol)
        }
        Expr::Conj(a, units) => {
            let mask = ConjugationMask::from_units(level, units)?;
            let v = eval_n(a, level, tol)?;
            let perplex = matches!(v, Value::Perplex(_));
            reperplex(v.as_rep()?.conjugate(mask)?, perplex, tol)
        }
        Expr::Norm(a) => Value::Perplex(eval_n(a, level, tol)?.as_rep()?.mnorm()),
        Expr::Proj(a, k) => {
            let v = eval_n(a, level, tol)?;
            let perplex = matches!(v, Value::Perplex(_));
            let z = v.as_rep()?.project(k - 1)?;
            reperplex(IdempotentRep::scalar(level, z)?, perplex, tol)
        }
        Expr::Inv(a) => {
            let v = eval_n(a, level, tol)?;
            let perplex = matches!(v, Value::Perplex(_));
            reperplex(v.as_rep()?.invert_with_tol(tol)?, perplex, tol)
        }
        Expr::Lambda(a) => {
            let v = eval_n(a, level, tol)?;
            let perplex = matches!(v, Value::Perplex(_));
            reperplex(v.as_rep()?.lambda_conjugate(), perplex, tol)
        }
        Expr::Gamma(j) => Value::Mc(to_idempotent(&gamma(level, *j)?)?),
        Expr::GammaPrime(j) => Value::Mc(to_idempotent(&gamma_prime(level, *j)?)?),
        Expr::Eps(k) => Value::Mc(IdempotentRep::epsilon_rep(level, k - 1)?),
    })
}

/// Applies a componentwise binary operation; the multiperplex tag
/// survives only when both operands carry it, since the tagged shard is
/// closed under these operations.
fn binary(
    a: Value,
    b: Value,
    f: impl Fn(&IdempotentRep, &IdempotentRep) -> Result<IdempotentRep>,
) -> Result<Value> {
    let both = matches!((&a, &b), (Value::Perplex(_), Value::Perplex(_)));
    let out = f(&a.as_rep()?, &b.as_rep()?)?;
    Ok(reperplex(out, both, crate::standard::DEFAULT_TOL))
}

fn reperplex(rep: IdempotentRep, want: bool, tol: f64) -> Value {
    if want {
        if let Ok(d) = Multiperplex::from_rep(&rep, tol) {
            return Value::Perplex(d);
        }
    }
    Value::Mc(rep)
}
