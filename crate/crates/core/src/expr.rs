//! Scalar integrands in `x`, `y`, `z`.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' exponent)?
//! exponent:= integer ('^' exponent)?        right associative, folded
//! primary := number | x | y | z | func '(' expr ')' | '(' expr ')'
//! func    := sqrt | exp | sin | cos | log
//! ```
//!
//! Exponents are nonnegative integer literals so that polynomial degree is
//! decidable.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown identifier '{name}' at offset {offset}")]
    UnknownIdentifier { name: String, offset: usize },

    #[error("{message} in '{node}' at ({}, {}, {})", point[0], point[1], point[2])]
    Domain {
        message: String,
        node: String,
        point: [f64; 3],
    },
}

impl ExprError {
    pub fn is_domain(&self) -> bool {
        matches!(self, ExprError::Domain { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    X,
    Y,
    Z,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sqrt,
    Exp,
    Sin,
    Cos,
    Log,
}

impl Func {
    const ALL: [Func; 5] = [Func::Sqrt, Func::Exp, Func::Sin, Func::Cos, Func::Log];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sqrt => "sqrt",
            Func::Exp => "exp",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Log => "log",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(Var),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Call(Func, Box<Expr>),
}

pub fn parse(text: &str) -> Result<Expr, ExprError> {
    let mut p = Parser { src: text, pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < text.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.peek_raw() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek_raw(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.peek_raw()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn error(&self, message: &str) -> ExprError {
        ExprError::Syntax {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            let op = if self.eat('+') {
                BinOp::Add
            } else if self.eat('-') {
                BinOp::Sub
            } else {
                return Ok(lhs);
            };
            let rhs = self.term()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.eat('*') {
                BinOp::Mul
            } else if self.eat('/') {
                BinOp::Div
            } else {
                return Ok(lhs);
            };
            let rhs = self.unary()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if self.eat('-') {
            Ok(Expr::Neg(Box::new(self.unary()?)))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.primary()?;
        if self.eat('^') {
            let n = self.exponent()?;
            Ok(Expr::Pow(Box::new(base), n))
        } else {
            Ok(base)
        }
    }

    fn exponent(&mut self) -> Result<u32, ExprError> {
        self.skip_ws();
        let start = self.pos;
        let digits = self.src[start..]
            .chars()
            .take_while(|c| c.is_ascii_digit())
            .count();
        if digits == 0 {
            return Err(self.error("exponent must be a nonnegative integer literal"));
        }
        self.pos += digits;
        if matches!(self.peek_raw(), Some('.') | Some('e') | Some('E')) {
            self.pos = start;
            return Err(self.error("exponent must be a nonnegative integer literal"));
        }
        let base: u32 = self.src[start..self.pos]
            .parse()
            .map_err(|_| ExprError::Syntax {
                offset: start,
                message: "exponent too large".into(),
            })?;
        if self.eat('^') {
            let at = self.pos;
            let rest = self.exponent()?;
            base.checked_pow(rest).ok_or(ExprError::Syntax {
                offset: at,
                message: "exponent too large".into(),
            })
        } else {
            Ok(base)
        }
    }

    fn primary(&mut self) -> Result<Expr, ExprError> {
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == '_' => self.identifier(),
            Some(c) => Err(self.error(&format!("unexpected character '{c}'"))),
        }
    }

    fn number(&mut self) -> Result<Expr, ExprError> {
        let start = self.pos;
        let bytes = self.src.as_bytes();
        let mut i = start;
        while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
            i += 1;
        }
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
        let text = &self.src[start..i];
        match text.parse::<f64>() {
            Ok(v) if v.is_finite() => {
                self.pos = i;
                Ok(Expr::Num(v))
            }
            _ => Err(self.error(&format!("malformed number '{text}'"))),
        }
    }

    fn identifier(&mut self) -> Result<Expr, ExprError> {
        let start = self.pos;
        let len = self.src[start..]
            .chars()
            .take_while(|c| c.is_ascii_alphanumeric() || *c == '_')
            .count();
        let name = &self.src[start..start + len];
        self.pos += len;
        match name {
            "x" => return Ok(Expr::Var(Var::X)),
            "y" => return Ok(Expr::Var(Var::Y)),
            "z" => return Ok(Expr::Var(Var::Z)),
            _ => {}
        }
        let Some(func) = Func::ALL.into_iter().find(|f| f.name() == name) else {
            return Err(ExprError::UnknownIdentifier {
                name: name.to_string(),
                offset: start,
            });
        };
        if !self.eat('(') {
            return Err(self.error(&format!("expected '(' after {name}")));
        }
        let arg = self.expr()?;
        if !self.eat(')') {
            return Err(self.error("expected ')'"));
        }
        Ok(Expr::Call(func, Box::new(arg)))
    }
}

impl Expr {
    pub fn eval(&self, point: [f64; 3]) -> Result<f64, ExprError> {
        let domain = |message: &str, node: &Expr| ExprError::Domain {
            message: message.to_string(),
            node: node.to_string(),
            point,
        };
        Ok(match self {
            Expr::Num(v) => *v,
            Expr::Var(Var::X) => point[0],
            Expr::Var(Var::Y) => point[1],
            Expr::Var(Var::Z) => point[2],
            Expr::Neg(a) => -a.eval(point)?,
            Expr::Binary(op, a, b) => {
                let (a, b) = (a.eval(point)?, b.eval(point)?);
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => {
                        if b == 0.0 {
                            return Err(domain("division by zero", self));
                        }
                        a / b
                    }
                }
            }
            Expr::Pow(a, n) => pow(a.eval(point)?, *n),
            Expr::Call(f, a) => {
                let v = a.eval(point)?;
                match f {
                    Func::Sqrt if v < 0.0 => {
                        return Err(domain("square root of a negative value", self))
                    }
                    Func::Log if v <= 0.0 => {
                        return Err(domain("logarithm of a nonpositive value", self))
                    }
                    Func::Sqrt => v.sqrt(),
                    Func::Log => v.ln(),
                    Func::Exp => v.exp(),
                    Func::Sin => v.sin(),
                    Func::Cos => v.cos(),
                }
            }
        })
    }

    /// Evaluates at `(x, y, z)`.
    pub fn eval_xyz(&self, x: f64, y: f64, z: f64) -> Result<f64, ExprError> {
        self.eval([x, y, z])
    }

    fn has_vars(&self) -> bool {
        match self {
            Expr::Num(_) => false,
            Expr::Var(_) => true,
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Call(_, a) => a.has_vars(),
            Expr::Binary(_, a, b) => a.has_vars() || b.has_vars(),
        }
    }

    fn is_literal_arith(&self) -> bool {
        match self {
            Expr::Num(_) => true,
            Expr::Var(_) | Expr::Call(..) => false,
            Expr::Neg(a) | Expr::Pow(a, _) => a.is_literal_arith(),
            Expr::Binary(_, a, b) => a.is_literal_arith() && b.is_literal_arith(),
        }
    }

    /// Total degree when the expression is a polynomial in `x, y, z`.
    ///
    /// Functions of constant arguments count as constants; division is
    /// allowed only by a nonzero literal subexpression.
    pub fn polynomial_degree(&self) -> Option<u32> {
        match self {
            Expr::Num(_) => Some(0),
            Expr::Var(_) => Some(1),
            Expr::Neg(a) => a.polynomial_degree(),
            Expr::Pow(a, n) => a.polynomial_degree()?.checked_mul(*n),
            Expr::Call(_, a) => (!a.has_vars()).then_some(0),
            Expr::Binary(op, a, b) => {
                let da = a.polynomial_degree()?;
                match op {
                    BinOp::Add | BinOp::Sub => Some(da.max(b.polynomial_degree()?)),
                    BinOp::Mul => da.checked_add(b.polynomial_degree()?),
                    BinOp::Div => {
                        let divisor = b.eval([0.0; 3]).ok()?;
                        (b.is_literal_arith() && divisor != 0.0 && divisor.is_finite())
                            .then_some(da)
                    }
                }
            }
        }
    }
}

/// `x^n` by binary exponentiation; shared by every evaluator in the crate.
pub fn pow(x: f64, n: u32) -> f64 {
    match n {
        0 => 1.0,
        1 => x,
        _ => x.powi(n as i32),
    }
}

impl fmt::Display for Expr {
    /// Fully parenthesised except for atoms; reparses to the same tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v:?}"),
            Expr::Var(Var::X) => f.write_str("x"),
            Expr::Var(Var::Y) => f.write_str("y"),
            Expr::Var(Var::Z) => f.write_str("z"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Binary(op, a, b) => {
                let sym = match op {
                    BinOp::Add => '+',
                    BinOp::Sub => '-',
                    BinOp::Mul => '*',
                    BinOp::Div => '/',
                };
                write!(f, "({a} {sym} {b})")
            }
            Expr::Pow(a, n) => match **a {
                Expr::Num(_) | Expr::Var(_) | Expr::Call(..) => write!(f, "{a}^{n}"),
                _ => write!(f, "({a})^{n}"),
            },
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}
