use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow};

use super::error::{DslError, Pos};

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Tok {
    Ident(String),
    Number(BigRational),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Eq,
    Semi,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Number(n) => format!("number `{n}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

/// Longest accepted run of digits in a numeric literal.
const MAX_DIGITS: usize = 200;

pub(crate) fn tokenize(src: &str) -> Result<Vec<Token>, DslError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (1usize, 1usize);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        let advance = |i: &mut usize, col: &mut usize, k: usize| {
            *i += k;
            *col += k;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => advance(&mut i, &mut col, 1),
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                col += i - start;
                out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), pos });
            }
            c if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let int_part: String = chars[start..i].iter().collect();
                let mut frac_part = String::new();
                if i < chars.len() && chars[i] == '.' {
                    i += 1;
                    let fs = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    frac_part = chars[fs..i].iter().collect();
                }
                if i < chars.len() && (chars[i].is_ascii_alphabetic() || chars[i] == '_' || chars[i] == '.') {
                    return Err(DslError::syntax(
                        Pos { line, col: col + (i - start) },
                        format!("malformed number literal near `{}`", chars[i]),
                    ));
                }
                if int_part.len() + frac_part.len() > MAX_DIGITS {
                    return Err(DslError::syntax(pos, "number literal too long"));
                }
                col += i - start;
                out.push(Token { tok: Tok::Number(decimal_to_rational(&int_part, &frac_part)), pos });
            }
            _ => {
                let tok = match c {
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '[' => Tok::LBracket,
                    ']' => Tok::RBracket,
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '*' => Tok::Star,
                    '/' => Tok::Slash,
                    '^' => Tok::Caret,
                    '=' => Tok::Eq,
                    ';' => Tok::Semi,
                    other => return Err(DslError::syntax(pos, format!("unexpected character `{other}`"))),
                };
                out.push(Token { tok, pos });
                advance(&mut i, &mut col, 1);
            }
        }
    }
    out.push(Token { tok: Tok::Eof, pos: Pos { line, col } });
    Ok(out)
}

/// Exact value of a decimal literal such as `12.375`.
fn decimal_to_rational(int_part: &str, frac_part: &str) -> BigRational {
    let digits = format!("{int_part}{frac_part}");
    let digits = if digits.is_empty() { "0".to_string() } else { digits };
    let numer: BigInt = digits.parse().expect("digits only");
    let denom: BigInt = Pow::pow(BigInt::from(10), frac_part.len() as u32);
    if frac_part.is_empty() {
        BigRational::new(numer, BigInt::one())
    } else {
        BigRational::new(numer, denom)
    }
}
