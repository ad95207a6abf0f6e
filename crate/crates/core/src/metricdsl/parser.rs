//! Recursive-descent parser producing an unresolved, positioned syntax tree.
//!
//! Precedence from tightest to loosest: `^` (right-associative, its exponent
//! may carry a unary minus), unary `-`, `*` and `/`, then `+` and `-`.

use num_rational::BigRational;

use super::error::{DslError, Pos};
use super::lexer::{Tok, Token};

/// Maximum nesting of parentheses and unary operators.
const MAX_DEPTH: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Ast {
    Num(BigRational),
    Ident(String, Pos),
    Neg(Box<Ast>),
    Bin(BinOp, Box<Ast>, Box<Ast>, Pos),
    Pow(Box<Ast>, Box<Ast>, Pos),
    Call(String, Box<Ast>, Pos),
}

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Stmt {
    Chart(Vec<(String, Pos)>, Pos),
    Metric { i: (BigRational, Pos), j: (BigRational, Pos), value: Ast, pos: Pos },
    PpWave(Ast, Pos),
    Potential(Ast, Pos),
    Mu(Ast, Pos),
    Param(String, Ast, Pos),
}

pub(crate) struct Parser<'a> {
    toks: &'a [Token],
    at: usize,
    depth: usize,
}

impl<'a> Parser<'a> {
    pub(crate) fn new(toks: &'a [Token]) -> Self {
        Parser { toks, at: 0, depth: 0 }
    }

    fn peek(&self) -> &Token {
        &self.toks[self.at.min(self.toks.len() - 1)]
    }

    fn bump(&mut self) -> Token {
        let t = self.peek().clone();
        if self.at < self.toks.len() - 1 {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, context: &str) -> Result<Token, DslError> {
        let t = self.peek();
        if t.tok == want {
            Ok(self.bump())
        } else {
            Err(DslError::syntax(t.pos, format!("expected {} {context}, found {}", want.describe(), t.tok.describe())))
        }
    }

    fn expect_ident(&mut self, context: &str) -> Result<(String, Pos), DslError> {
        let t = self.bump();
        match t.tok {
            Tok::Ident(s) => Ok((s, t.pos)),
            other => Err(DslError::syntax(t.pos, format!("expected identifier {context}, found {}", other.describe()))),
        }
    }

    fn expect_keyword(&mut self, word: &str, context: &str) -> Result<Pos, DslError> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Ident(s) if s == word => {
                self.bump();
                Ok(t.pos)
            }
            other => Err(DslError::syntax(t.pos, format!("expected `{word}` {context}, found {}", other.describe()))),
        }
    }

    pub(crate) fn pos(&self) -> Pos {
        self.peek().pos
    }

    pub(crate) fn at_eof(&self) -> bool {
        self.peek().tok == Tok::Eof
    }

    /// Parse a whole document into statements.
    pub(crate) fn statements(&mut self) -> Result<Vec<Stmt>, DslError> {
        let mut out = Vec::new();
        while !self.at_eof() {
            out.push(self.statement()?);
        }
        Ok(out)
    }

    fn statement(&mut self) -> Result<Stmt, DslError> {
        let head = self.peek().clone();
        let word = match &head.tok {
            Tok::Ident(s) => s.clone(),
            other => return Err(DslError::syntax(head.pos, format!("expected a statement, found {}", other.describe()))),
        };
        let stmt = match word.as_str() {
            "chart" => {
                self.bump();
                let mut names = Vec::new();
                while let Tok::Ident(_) = self.peek().tok {
                    names.push(self.expect_ident("in chart")?);
                }
                if names.is_empty() {
                    return Err(DslError::syntax(self.peek().pos, "chart needs at least one coordinate name"));
                }
                Stmt::Chart(names, head.pos)
            }
            "metric" | "g" => {
                if word == "metric" {
                    self.bump();
                }
                self.expect_keyword("g", "in metric entry")?;
                let i = self.index()?;
                let j = self.index()?;
                self.expect(Tok::Eq, "after metric index")?;
                let value = self.expr()?;
                Stmt::Metric { i, j, value, pos: head.pos }
            }
            "ppwave_H" => {
                self.bump();
                self.expect(Tok::Eq, "after `ppwave_H`")?;
                Stmt::PpWave(self.expr()?, head.pos)
            }
            "potential" => {
                self.bump();
                self.expect_keyword("f", "after `potential`")?;
                self.expect(Tok::Eq, "after `potential f`")?;
                Stmt::Potential(self.expr()?, head.pos)
            }
            "mu" => {
                self.bump();
                self.expect(Tok::Eq, "after `mu`")?;
                Stmt::Mu(self.expr()?, head.pos)
            }
            "param" => {
                self.bump();
                let (name, _) = self.expect_ident("after `param`")?;
                self.expect(Tok::Eq, "after parameter name")?;
                Stmt::Param(name, self.expr()?, head.pos)
            }
            other => return Err(DslError::syntax(head.pos, format!("unknown statement `{other}`"))),
        };
        self.expect(Tok::Semi, "to end the statement")?;
        Ok(stmt)
    }

    fn index(&mut self) -> Result<(BigRational, Pos), DslError> {
        self.expect(Tok::LBracket, "before metric index")?;
        let t = self.bump();
        let n = match t.tok {
            Tok::Number(n) => n,
            other => return Err(DslError::syntax(t.pos, format!("expected metric index, found {}", other.describe()))),
        };
        self.expect(Tok::RBracket, "after metric index")?;
        Ok((n, t.pos))
    }

    fn enter(&mut self) -> Result<(), DslError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(DslError::syntax(self.peek().pos, "expression nested too deeply"));
        }
        Ok(())
    }

    pub(crate) fn expr(&mut self) -> Result<Ast, DslError> {
        let mut lhs = self.product()?;
        loop {
            let t = self.peek().clone();
            let op = match t.tok {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.product()?;
            lhs = Ast::Bin(op, Box::new(lhs), Box::new(rhs), t.pos);
        }
    }

    fn product(&mut self) -> Result<Ast, DslError> {
        let mut lhs = self.unary()?;
        loop {
            let t = self.peek().clone();
            let op = match t.tok {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Ast::Bin(op, Box::new(lhs), Box::new(rhs), t.pos);
        }
    }

    fn unary(&mut self) -> Result<Ast, DslError> {
        self.enter()?;
        let out = if self.peek().tok == Tok::Minus {
            self.bump();
            self.unary().map(|a| Ast::Neg(Box::new(a)))
        } else {
            self.power()
        };
        self.depth -= 1;
        out
    }

    fn power(&mut self) -> Result<Ast, DslError> {
        let base = self.primary()?;
        let t = self.peek().clone();
        if t.tok == Tok::Caret {
            self.bump();
            let exp = self.unary()?;
            return Ok(Ast::Pow(Box::new(base), Box::new(exp), t.pos));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Ast, DslError> {
        let t = self.bump();
        match t.tok {
            Tok::Number(n) => Ok(Ast::Num(n)),
            Tok::Ident(name) => {
                if self.peek().tok == Tok::LParen {
                    self.bump();
                    self.enter()?;
                    let arg = self.expr()?;
                    self.depth -= 1;
                    self.expect(Tok::RParen, "to close function argument")?;
                    Ok(Ast::Call(name, Box::new(arg), t.pos))
                } else {
                    Ok(Ast::Ident(name, t.pos))
                }
            }
            Tok::LParen => {
                self.enter()?;
                let inner = self.expr()?;
                self.depth -= 1;
                self.expect(Tok::RParen, "to close parenthesis")?;
                Ok(inner)
            }
            other => Err(DslError::syntax(t.pos, format!("expected an expression, found {}", other.describe()))),
        }
    }
}
