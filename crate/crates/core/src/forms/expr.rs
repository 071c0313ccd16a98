//! Complex expressions over the coordinates, used to specify data in configs.
//!
//! Grammar:
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' unary)?
//! atom  := number | 'i' | 'pi' | var | func '(' expr ')' | '(' expr ')'
//! var   := ('x' | 'y' | 'z' | 'zb') '_'? digit+
//! func  := conj | abs | abs2 | re | im | exp | sqrt | log | sin | cos
//! ```
//!
//! `zb_j` is `conj(z_j)`. Integer exponents use repeated multiplication, so polynomials are exact.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::CPoint;

#[derive(Clone, Copy, Debug, PartialEq)]
enum Var {
    X,
    Y,
    Z,
    Zb,
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Func {
    Conj,
    Abs,
    Abs2,
    Re,
    Im,
    Exp,
    Sqrt,
    Log,
    Sin,
    Cos,
}

#[derive(Clone, Debug, PartialEq)]
enum Node {
    Const(Complex64),
    Var(Var, usize),
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    PowI(Box<Node>, i32),
    Pow(Box<Node>, Box<Node>),
    Call(Func, Box<Node>),
}

/// A parsed expression in `n` complex variables.
#[derive(Clone, PartialEq)]
pub struct Expr {
    n: usize,
    src: String,
    root: Node,
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({:?})", self.src)
    }
}

impl Expr {
    pub fn parse(src: &str, n: usize) -> Result<Expr> {
        let tokens = lex(src)?;
        let mut p = Parser { tokens, pos: 0, n };
        let root = p.expr()?;
        if p.pos != p.tokens.len() {
            return Err(Error::Expression(format!("unexpected {:?} in {src:?}", p.tokens[p.pos])));
        }
        Ok(Expr { n, src: src.to_string(), root })
    }

    pub fn source(&self) -> &str {
        &self.src
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn eval(&self, z: &CPoint) -> Complex64 {
        eval(&self.root, z)
    }

    /// True if the expression is the literal zero.
    pub fn is_zero(&self) -> bool {
        self.root == Node::Const(Complex64::new(0.0, 0.0))
    }
}

fn eval(node: &Node, z: &CPoint) -> Complex64 {
    match node {
        Node::Const(c) => *c,
        Node::Var(v, j) => {
            let c = z[*j];
            match v {
                Var::X => Complex64::new(c.re, 0.0),
                Var::Y => Complex64::new(c.im, 0.0),
                Var::Z => c,
                Var::Zb => c.conj(),
            }
        }
        Node::Neg(a) => -eval(a, z),
        Node::Add(a, b) => eval(a, z) + eval(b, z),
        Node::Sub(a, b) => eval(a, z) - eval(b, z),
        Node::Mul(a, b) => eval(a, z) * eval(b, z),
        Node::Div(a, b) => eval(a, z) / eval(b, z),
        Node::PowI(a, k) => eval(a, z).powi(*k),
        Node::Pow(a, b) => {
            let (a, b) = (eval(a, z), eval(b, z));
            if b.im == 0.0 && b.re.fract() == 0.0 && b.re.abs() < 64.0 {
                a.powi(b.re as i32)
            } else if b.im == 0.0 && a.im == 0.0 && a.re >= 0.0 {
                Complex64::new(a.re.powf(b.re), 0.0)
            } else {
                a.powc(b)
            }
        }
        Node::Call(f, a) => {
            let a = eval(a, z);
            let real = |v: f64| Complex64::new(v, 0.0);
            match f {
                Func::Conj => a.conj(),
                Func::Abs => real(a.norm()),
                Func::Abs2 => real(a.norm_sqr()),
                Func::Re => real(a.re),
                Func::Im => real(a.im),
                Func::Exp => a.exp(),
                Func::Sqrt => a.sqrt(),
                Func::Log => a.ln(),
                Func::Sin => a.sin(),
                Func::Cos => a.cos(),
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
}

fn lex(src: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut k = i + 1;
                if k < chars.len() && (chars[k] == '+' || chars[k] == '-') {
                    k += 1;
                }
                if k < chars.len() && chars[k].is_ascii_digit() {
                    i = k;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let s: String = chars[start..i].iter().collect();
            let v = s.parse().map_err(|_| Error::Expression(format!("bad number {s:?}")))?;
            out.push(Tok::Num(v));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^(),".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Expression(format!("unexpected character {c:?} in {src:?}")));
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Tok>,
    pos: usize,
    n: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, op: char) -> Result<()> {
        if self.eat(op) {
            Ok(())
        } else {
            Err(Error::Expression(format!("expected {op:?}, found {:?}", self.peek())))
        }
    }

    fn expr(&mut self) -> Result<Node> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Node::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Node::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Node> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Node::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Node::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Node> {
        if self.eat('-') {
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let exp = self.unary()?;
        let int_exp = match &exp {
            Node::Const(c) if c.im == 0.0 && c.re.fract() == 0.0 && c.re.abs() < 64.0 => Some(c.re as i32),
            Node::Neg(inner) => match **inner {
                Node::Const(c) if c.im == 0.0 && c.re.fract() == 0.0 && c.re.abs() < 64.0 => Some(-(c.re as i32)),
                _ => None,
            },
            _ => None,
        };
        Ok(match int_exp {
            Some(k) => Node::PowI(Box::new(base), k),
            None => Node::Pow(Box::new(base), Box::new(exp)),
        })
    }

    fn atom(&mut self) -> Result<Node> {
        let tok = self.peek().cloned().ok_or_else(|| Error::Expression("unexpected end of input".into()))?;
        self.pos += 1;
        match tok {
            Tok::Num(v) => Ok(Node::Const(Complex64::new(v, 0.0))),
            Tok::Op('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Op(c) => Err(Error::Expression(format!("unexpected {c:?}"))),
            Tok::Ident(name) => self.ident(&name),
        }
    }

    fn ident(&mut self, name: &str) -> Result<Node> {
        match name {
            "i" => return Ok(Node::Const(Complex64::new(0.0, 1.0))),
            "pi" => return Ok(Node::Const(Complex64::new(std::f64::consts::PI, 0.0))),
            _ => {}
        }
        let func = match name {
            "conj" => Some(Func::Conj),
            "abs" => Some(Func::Abs),
            "abs2" => Some(Func::Abs2),
            "re" => Some(Func::Re),
            "im" => Some(Func::Im),
            "exp" => Some(Func::Exp),
            "sqrt" => Some(Func::Sqrt),
            "log" => Some(Func::Log),
            "sin" => Some(Func::Sin),
            "cos" => Some(Func::Cos),
            _ => None,
        };
        if let Some(f) = func {
            self.expect('(')?;
            let arg = self.expr()?;
            self.expect(')')?;
            return Ok(Node::Call(f, Box::new(arg)));
        }
        let (var, rest) = if let Some(r) = name.strip_prefix("zbar").or_else(|| name.strip_prefix("zb")) {
            (Var::Zb, r)
        } else if let Some(r) = name.strip_prefix('z') {
            (Var::Z, r)
        } else if let Some(r) = name.strip_prefix('x') {
            (Var::X, r)
        } else if let Some(r) = name.strip_prefix('y') {
            (Var::Y, r)
        } else {
            return Err(Error::Expression(format!("unknown identifier {name:?}")));
        };
        let digits = rest.strip_prefix('_').unwrap_or(rest);
        let j: usize = digits.parse().map_err(|_| Error::Expression(format!("unknown identifier {name:?}")))?;
        if j == 0 || j > self.n {
            return Err(Error::Expression(format!("variable {name} out of range for n = {}", self.n)));
        }
        Ok(Node::Var(var, j - 1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn evaluates_polynomials_and_functions() {
        let z = CPoint::new(&[c(0.3, 0.4), c(-1.0, 2.0)]);
        let e = Expr::parse("z_1*z2 - 2*zb_1^2 + i*x_2 - y1", 2).unwrap();
        let want = z[0] * z[1] - 2.0 * z[0].conj().powi(2) + c(0.0, -1.0) - 0.4;
        assert!((e.eval(&z) - want).norm() < 1e-15);
        let e = Expr::parse("abs(z_1 - 1)^0.5 + abs2(z_2) + conj(z_2)", 2).unwrap();
        let want = (z[0] - 1.0).norm().sqrt() + z[1].norm_sqr() + z[1].conj();
        assert!((e.eval(&z) - want).norm() < 1e-14);
        let e = Expr::parse("-2^2 + 1e-1*pi", 2).unwrap();
        assert!((e.eval(&z) - c(-4.0 + 0.1 * std::f64::consts::PI, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Expr::parse("z_3", 2).is_err());
        assert!(Expr::parse("z_1 +", 2).is_err());
        assert!(Expr::parse("foo(z_1)", 2).is_err());
        assert!(Expr::parse("(z_1", 2).is_err());
        assert!(Expr::parse("z_1 $ 2", 2).is_err());
    }
}
