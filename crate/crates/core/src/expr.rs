//! Arithmetic expressions over `x1..xn`, for objectives supplied as text.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-' factor | power
//! power  := atom ('^' factor)?
//! atom   := number | 'x' digits | name '(' expr (',' expr)* ')' | '(' expr ')'
//! ```
//!
//! `^` is right-associative and binds tighter than unary minus, so
//! `-x1^2` is `-(x1^2)` and `2^3^2` is `512`. There is no implicit
//! multiplication.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinaryOp {
    fn symbol(self) -> char {
        match self {
            BinaryOp::Add => '+',
            BinaryOp::Sub => '-',
            BinaryOp::Mul => '*',
            BinaryOp::Div => '/',
            BinaryOp::Pow => '^',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryOp {
    Neg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Cos,
    Sin,
    Exp,
    Floor,
    Abs,
    Sqrt,
    Log,
}

impl Func {
    pub const ALL: [Func; 7] = [
        Func::Cos,
        Func::Sin,
        Func::Exp,
        Func::Floor,
        Func::Abs,
        Func::Sqrt,
        Func::Log,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Cos => "cos",
            Func::Sin => "sin",
            Func::Exp => "exp",
            Func::Floor => "floor",
            Func::Abs => "abs",
            Func::Sqrt => "sqrt",
            Func::Log => "log",
        }
    }

    fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }

    fn apply(self, v: f64) -> Result<f64> {
        Ok(match self {
            Func::Cos => v.cos(),
            Func::Sin => v.sin(),
            Func::Exp => v.exp(),
            Func::Floor => v.floor(),
            Func::Abs => v.abs(),
            Func::Sqrt => {
                if v < 0.0 {
                    return Err(Error::Evaluation(format!("sqrt of negative value {v}")));
                }
                v.sqrt()
            }
            Func::Log => {
                if v <= 0.0 {
                    return Err(Error::Evaluation(format!("log of non-positive value {v}")));
                }
                v.ln()
            }
        })
    }
}

/// Expression tree. Variables are stored 0-based (`x1` is `Variable(0)`).
#[derive(Debug, Clone, PartialEq)]
pub enum ExprAst {
    Constant(f64),
    Variable(usize),
    Unary(UnaryOp, Box<ExprAst>),
    Binary(BinaryOp, Box<ExprAst>, Box<ExprAst>),
    Call(Func, Vec<ExprAst>),
}

impl ExprAst {
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        match self {
            ExprAst::Constant(c) => Ok(*c),
            ExprAst::Variable(i) => x.get(*i).copied().ok_or(Error::VariableOutOfRange {
                index: i + 1,
                dim: x.len(),
            }),
            ExprAst::Unary(UnaryOp::Neg, e) => Ok(-e.eval(x)?),
            ExprAst::Binary(op, l, r) => {
                let a = l.eval(x)?;
                let b = r.eval(x)?;
                Ok(match op {
                    BinaryOp::Add => a + b,
                    BinaryOp::Sub => a - b,
                    BinaryOp::Mul => a * b,
                    BinaryOp::Div => {
                        if b == 0.0 {
                            return Err(Error::Evaluation("division by zero".into()));
                        }
                        a / b
                    }
                    BinaryOp::Pow => a.powf(b),
                })
            }
            ExprAst::Call(f, args) => f.apply(args[0].eval(x)?),
        }
    }

    /// Largest variable index referenced (1-based), 0 if none.
    pub fn max_variable(&self) -> usize {
        match self {
            ExprAst::Constant(_) => 0,
            ExprAst::Variable(i) => i + 1,
            ExprAst::Unary(_, e) => e.max_variable(),
            ExprAst::Binary(_, l, r) => l.max_variable().max(r.max_variable()),
            ExprAst::Call(_, args) => args.iter().map(|a| a.max_variable()).max().unwrap_or(0),
        }
    }
}

/// Fully parenthesized; reparses to the same tree.
impl fmt::Display for ExprAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExprAst::Constant(c) => write!(f, "{c:?}"),
            ExprAst::Variable(i) => write!(f, "x{}", i + 1),
            ExprAst::Unary(UnaryOp::Neg, e) => write!(f, "(-{e})"),
            ExprAst::Binary(op, l, r) => write!(f, "({l} {} {r})", op.symbol()),
            ExprAst::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// A parsed expression together with its declared dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    ast: ExprAst,
    dim: usize,
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.ast.fmt(f)
    }
}

impl Expr {
    pub fn parse(src: &str, dim: usize) -> Result<Self> {
        Ok(Self {
            ast: parse(src, dim)?,
            dim,
        })
    }

    pub fn ast(&self) -> &ExprAst {
        &self.ast
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        eval(&self.ast, x)
    }
}

pub fn parse(src: &str, n: usize) -> Result<ExprAst> {
    let tokens = lex(src)?;
    if tokens.is_empty() {
        return Err(Error::Syntax {
            offset: 0,
            message: "empty expression".into(),
        });
    }
    let mut p = Parser {
        tokens,
        pos: 0,
        end: src.len(),
        dim: n,
    };
    let ast = p.expr()?;
    if let Some(t) = p.peek() {
        return Err(Error::Syntax {
            offset: t.offset,
            message: format!("unexpected {}", t.kind),
        });
    }
    Ok(ast)
}

pub fn eval(ast: &ExprAst, x: &[f64]) -> Result<f64> {
    ast.eval(x)
}

#[derive(Debug, Clone, PartialEq)]
enum TokenKind {
    Number(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
    Comma,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Number(v) => write!(f, "number {v}"),
            TokenKind::Ident(s) => write!(f, "`{s}`"),
            TokenKind::Op(c) => write!(f, "`{c}`"),
            TokenKind::LParen => write!(f, "`(`"),
            TokenKind::RParen => write!(f, "`)`"),
            TokenKind::Comma => write!(f, "`,`"),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    kind: TokenKind,
    offset: usize,
}

fn lex(src: &str) -> Result<Vec<Token>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' | b'-' | b'*' | b'/' | b'^' => {
                out.push(Token {
                    kind: TokenKind::Op(c as char),
                    offset: start,
                });
                i += 1;
            }
            b'(' | b')' | b',' => {
                let kind = match c {
                    b'(' => TokenKind::LParen,
                    b')' => TokenKind::RParen,
                    _ => TokenKind::Comma,
                };
                out.push(Token { kind, offset: start });
                i += 1;
            }
            b'0'..=b'9' | b'.' => {
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
                let text = &src[start..i];
                let v: f64 = text.parse().map_err(|_| Error::Syntax {
                    offset: start,
                    message: format!("malformed number `{text}`"),
                })?;
                out.push(Token {
                    kind: TokenKind::Number(v),
                    offset: start,
                });
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push(Token {
                    kind: TokenKind::Ident(src[start..i].to_string()),
                    offset: start,
                });
            }
            _ => {
                // U+2212 MINUS SIGN is accepted as '-'.
                if src[start..].starts_with('\u{2212}') {
                    out.push(Token {
                        kind: TokenKind::Op('-'),
                        offset: start,
                    });
                    i += '\u{2212}'.len_utf8();
                    continue;
                }
                let ch = src[start..].chars().next().unwrap_or('?');
                return Err(Error::Syntax {
                    offset: start,
                    message: format!("unexpected character `{ch}`"),
                });
            }
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    end: usize,
    dim: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn eat_op(&mut self, ops: &[char]) -> Option<char> {
        match self.peek() {
            Some(Token {
                kind: TokenKind::Op(c),
                ..
            }) if ops.contains(c) => {
                let c = *c;
                self.pos += 1;
                Some(c)
            }
            _ => None,
        }
    }

    fn here(&self) -> usize {
        self.peek().map_or(self.end, |t| t.offset)
    }

    fn expect(&mut self, want: TokenKind) -> Result<()> {
        let offset = self.here();
        match self.next() {
            Some(t) if t.kind == want => Ok(()),
            Some(t) => Err(Error::Syntax {
                offset,
                message: format!("expected {want}, found {}", t.kind),
            }),
            None => Err(Error::Syntax {
                offset,
                message: format!("expected {want}, found end of input"),
            }),
        }
    }

    fn expr(&mut self) -> Result<ExprAst> {
        let mut lhs = self.term()?;
        while let Some(c) = self.eat_op(&['+', '-']) {
            let op = if c == '+' { BinaryOp::Add } else { BinaryOp::Sub };
            let rhs = self.term()?;
            lhs = ExprAst::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<ExprAst> {
        let mut lhs = self.factor()?;
        while let Some(c) = self.eat_op(&['*', '/']) {
            let op = if c == '*' { BinaryOp::Mul } else { BinaryOp::Div };
            let rhs = self.factor()?;
            lhs = ExprAst::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<ExprAst> {
        if self.eat_op(&['-']).is_some() {
            return Ok(ExprAst::Unary(UnaryOp::Neg, Box::new(self.factor()?)));
        }
        let base = self.atom()?;
        if self.eat_op(&['^']).is_some() {
            let exponent = self.factor()?;
            return Ok(ExprAst::Binary(BinaryOp::Pow, Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<ExprAst> {
        let offset = self.here();
        let Some(tok) = self.next() else {
            return Err(Error::Syntax {
                offset,
                message: "unexpected end of input".into(),
            });
        };
        match tok.kind {
            TokenKind::Number(v) => Ok(ExprAst::Constant(v)),
            TokenKind::LParen => {
                let e = self.expr()?;
                self.expect(TokenKind::RParen)?;
                Ok(e)
            }
            TokenKind::Ident(name) => self.identifier(name, offset),
            other => Err(Error::Syntax {
                offset,
                message: format!("unexpected {other}"),
            }),
        }
    }

    fn identifier(&mut self, name: String, offset: usize) -> Result<ExprAst> {
        if let Some(digits) = name.strip_prefix('x') {
            if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) {
                let index: usize = digits.parse().map_err(|_| Error::Syntax {
                    offset,
                    message: format!("bad variable `{name}`"),
                })?;
                if index == 0 || index > self.dim {
                    return Err(Error::VariableOutOfRange { index, dim: self.dim });
                }
                return Ok(ExprAst::Variable(index - 1));
            }
        }
        let Some(func) = Func::from_name(&name) else {
            return Err(Error::UnknownFunction { name, offset });
        };
        self.expect(TokenKind::LParen)?;
        let mut args = vec![self.expr()?];
        while matches!(self.peek(), Some(Token { kind: TokenKind::Comma, .. })) {
            self.pos += 1;
            args.push(self.expr()?);
        }
        self.expect(TokenKind::RParen)?;
        if args.len() != 1 {
            return Err(Error::Syntax {
                offset,
                message: format!("{} takes 1 argument, got {}", func.name(), args.len()),
            });
        }
        Ok(ExprAst::Call(func, args))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ev(src: &str, x: &[f64]) -> f64 {
        parse(src, x.len()).unwrap().eval(x).unwrap()
    }

    #[test]
    fn basic_evaluation() {
        assert_eq!(ev("x1^2 + x2^2", &[3.0, 4.0]), 25.0);
        assert_eq!(ev("100*(x1^2-x2)^2+(1-x1)^2", &[1.0, 1.0]), 0.0);
        assert_eq!(ev("2^3^2", &[]), 512.0);
        assert_eq!(ev("floor(-5.12)", &[]), -6.0);
        assert_eq!(ev("-x1^2", &[3.0]), -9.0);
        assert_eq!(ev("2^-1", &[]), 0.5);
        assert_eq!(ev("1 - 2 - 3", &[]), -4.0);
        assert_eq!(ev("8 / 4 / 2", &[]), 1.0);
        assert_eq!(ev("1.5e2 + .5", &[]), 150.5);
        assert_eq!(ev("abs(\u{2212}3)", &[]), 3.0);
    }

    #[test]
    fn errors() {
        assert!(matches!(parse("x3", 2), Err(Error::VariableOutOfRange { index: 3, dim: 2 })));
        assert!(matches!(parse("x0", 2), Err(Error::VariableOutOfRange { .. })));
        assert!(matches!(parse("tan(x1)", 1), Err(Error::UnknownFunction { offset: 0, .. })));
        assert!(matches!(parse("1 + ", 1), Err(Error::Syntax { offset: 4, .. })));
        assert!(matches!(parse("(1", 1), Err(Error::Syntax { .. })));
        assert!(matches!(parse("1 2", 1), Err(Error::Syntax { offset: 2, .. })));
        assert!(matches!(parse("2x1", 1), Err(Error::Syntax { offset: 1, .. })));
        assert!(matches!(parse("", 1), Err(Error::Syntax { .. })));
        assert!(matches!(parse("cos(1, 2)", 1), Err(Error::Syntax { .. })));
        assert!(matches!(parse("1 $ 2", 1), Err(Error::Syntax { offset: 2, .. })));
    }

    #[test]
    fn evaluation_errors() {
        let e = parse("1/(x1-1)", 1).unwrap();
        assert!(matches!(e.eval(&[1.0]), Err(Error::Evaluation(_))));
        assert!(parse("log(x1)", 1).unwrap().eval(&[0.0]).is_err());
        assert!(parse("sqrt(x1)", 1).unwrap().eval(&[-1.0]).is_err());
    }

    #[test]
    fn easom_text_matches_builtin() {
        use rand::{Rng, SeedableRng};
        let e = parse(
            "-cos(x1)*cos(x2)*exp(-((x1-3.14159265)^2+(x2-3.14159265)^2))",
            2,
        )
        .unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let x = [rng.random_range(-5.0..10.0), rng.random_range(-5.0..10.0)];
            let d = e.eval(&x).unwrap() - crate::functions::easom(&x);
            assert!(d.abs() < 1e-6);
        }
    }

    fn arb_ast() -> impl Strategy<Value = ExprAst> {
        let leaf = prop_oneof![
            (0.0f64..100.0).prop_map(ExprAst::Constant),
            (0usize..3).prop_map(ExprAst::Variable),
        ];
        leaf.prop_recursive(5, 40, 3, |inner| {
            prop_oneof![
                inner.clone().prop_map(|e| ExprAst::Unary(UnaryOp::Neg, Box::new(e))),
                (
                    prop_oneof![
                        Just(BinaryOp::Add),
                        Just(BinaryOp::Sub),
                        Just(BinaryOp::Mul),
                        Just(BinaryOp::Div),
                        Just(BinaryOp::Pow)
                    ],
                    inner.clone(),
                    inner.clone()
                )
                    .prop_map(|(op, l, r)| ExprAst::Binary(op, Box::new(l), Box::new(r))),
                (0usize..7, inner).prop_map(|(i, e)| ExprAst::Call(Func::ALL[i], vec![e])),
            ]
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn print_parse_roundtrip(ast in arb_ast(), x in proptest::array::uniform3(-3.0f64..3.0)) {
            let printed = ast.to_string();
            let reparsed = parse(&printed, 3).unwrap();
            prop_assert_eq!(&reparsed, &ast);
            match (ast.eval(&x), reparsed.eval(&x)) {
                (Ok(a), Ok(b)) => prop_assert!(a.to_bits() == b.to_bits() || (a.is_nan() && b.is_nan())),
                (Err(_), Err(_)) => {}
                _ => prop_assert!(false, "evaluation disagreement"),
            }
        }
    }
}
