//! A small closed-form expression evaluator for curvature fields and
//! height profiles: arithmetic, powers, and the usual transcendentals,
//! over the variables x, y (disc coordinates), r2 = x^2 + y^2 and
//! d = hyperbolic distance to the origin.

use crate::error::AdsError;
use crate::Result;

#[derive(Debug, Clone)]
pub enum Expr {
    Num(f64),
    Var(Var),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    X,
    Y,
    R2,
    D,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Ln,
    Sin,
    Cos,
    Tan,
    Sqrt,
    Tanh,
    Cosh,
    Sinh,
    Abs,
    Atan,
}

impl Expr {
    pub fn parse(src: &str) -> Result<Expr> {
        let mut p = Parser {
            chars: src.chars().collect(),
            pos: 0,
            src,
        };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != p.chars.len() {
            return Err(p.err("trailing input"));
        }
        Ok(e)
    }

    /// Evaluate at disc coordinates (x, y) with d the hyperbolic distance
    /// to the origin.
    pub fn eval(&self, x: f64, y: f64, d: f64) -> f64 {
        match self {
            Expr::Num(v) => *v,
            Expr::Var(Var::X) => x,
            Expr::Var(Var::Y) => y,
            Expr::Var(Var::R2) => x * x + y * y,
            Expr::Var(Var::D) => d,
            Expr::Neg(e) => -e.eval(x, y, d),
            Expr::Add(a, b) => a.eval(x, y, d) + b.eval(x, y, d),
            Expr::Sub(a, b) => a.eval(x, y, d) - b.eval(x, y, d),
            Expr::Mul(a, b) => a.eval(x, y, d) * b.eval(x, y, d),
            Expr::Div(a, b) => a.eval(x, y, d) / b.eval(x, y, d),
            Expr::Pow(a, b) => a.eval(x, y, d).powf(b.eval(x, y, d)),
            Expr::Call(f, e) => {
                let v = e.eval(x, y, d);
                match f {
                    Func::Exp => v.exp(),
                    Func::Ln => v.ln(),
                    Func::Sin => v.sin(),
                    Func::Cos => v.cos(),
                    Func::Tan => v.tan(),
                    Func::Sqrt => v.sqrt(),
                    Func::Tanh => v.tanh(),
                    Func::Cosh => v.cosh(),
                    Func::Sinh => v.sinh(),
                    Func::Abs => v.abs(),
                    Func::Atan => v.atan(),
                }
            }
        }
    }

    /// Does the expression depend only on the radial variable d?
    pub fn is_radial(&self) -> bool {
        match self {
            Expr::Num(_) | Expr::Var(Var::D) => true,
            Expr::Var(_) => false,
            Expr::Neg(e) | Expr::Call(_, e) => e.is_radial(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b)
            | Expr::Pow(a, b) => a.is_radial() && b.is_radial(),
        }
    }
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    src: &'a str,
}

impl<'a> Parser<'a> {
    fn err(&self, what: &str) -> AdsError {
        AdsError::InvalidInput(format!(
            "expression error at byte {} of {:?}: {}",
            self.pos, self.src, what
        ))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some('-') => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Some('/') => {
                    self.pos += 1;
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        // unary minus binds looser than the power
        if self.peek() == Some('-') {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let exp = self.factor()?; // right associative, allows -n
            return Ok(Expr::Pow(Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => self.ident(),
            _ => Err(self.err("expected a number, name, or '('")),
        }
    }

    fn number(&mut self) -> Result<Expr> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() {
            let c = self.chars[self.pos];
            if c.is_ascii_digit() || c == '.' {
                self.pos += 1;
            } else if (c == 'e' || c == 'E')
                && self.pos > start
                && self
                    .chars
                    .get(self.pos + 1)
                    .is_some_and(|n| n.is_ascii_digit() || *n == '-' || *n == '+')
            {
                self.pos += 2;
            } else {
                break;
            }
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse::<f64>()
            .map(Expr::Num)
            .map_err(|_| self.err("malformed number"))
    }

    fn ident(&mut self) -> Result<Expr> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len()
            && (self.chars[self.pos].is_ascii_alphanumeric() || self.chars[self.pos] == '_')
        {
            self.pos += 1;
        }
        let name: String = self.chars[start..self.pos].iter().collect();
        let func = match name.as_str() {
            "x" => return Ok(Expr::Var(Var::X)),
            "y" => return Ok(Expr::Var(Var::Y)),
            "r2" => return Ok(Expr::Var(Var::R2)),
            "d" | "d_hyp" => return Ok(Expr::Var(Var::D)),
            "pi" => return Ok(Expr::Num(std::f64::consts::PI)),
            "exp" => Func::Exp,
            "ln" | "log" => Func::Ln,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "sqrt" => Func::Sqrt,
            "tanh" => Func::Tanh,
            "cosh" => Func::Cosh,
            "sinh" => Func::Sinh,
            "abs" => Func::Abs,
            "atan" => Func::Atan,
            _ => return Err(self.err(&format!("unknown name {name:?}"))),
        };
        if self.peek() != Some('(') {
            return Err(self.err("expected '(' after function name"));
        }
        self.pos += 1;
        let arg = self.expr()?;
        if self.peek() != Some(')') {
            return Err(self.err("expected ')'"));
        }
        self.pos += 1;
        Ok(Expr::Call(func, Box::new(arg)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_precedence() {
        let e = Expr::parse("1 + 2*3 - 4/2").unwrap();
        assert_eq!(e.eval(0.0, 0.0, 0.0), 5.0);
        let e = Expr::parse("2^3^2").unwrap(); // right assoc: 2^9
        assert_eq!(e.eval(0.0, 0.0, 0.0), 512.0);
        let e = Expr::parse("-(x + y)^2").unwrap();
        assert_eq!(e.eval(1.0, 2.0, 0.0), -9.0);
    }

    #[test]
    fn functions_and_variables() {
        let e = Expr::parse("-1 - exp(-d^2)").unwrap();
        assert!((e.eval(0.0, 0.0, 0.0) + 2.0).abs() < 1e-15);
        assert!(e.is_radial());
        let e = Expr::parse("cos(x) * sin(y)").unwrap();
        assert!(!e.is_radial());
        assert!((e.eval(0.0, std::f64::consts::FRAC_PI_2, 0.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn parse_errors() {
        assert!(Expr::parse("1 +").is_err());
        assert!(Expr::parse("foo(3)").is_err());
        assert!(Expr::parse("(1 + 2").is_err());
        assert!(Expr::parse("1 2").is_err());
    }
}
