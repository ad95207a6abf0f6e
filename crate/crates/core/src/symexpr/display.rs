//! Re-parseable infix rendering of canonical expressions.

use std::fmt::{self, Write};

use num_rational::BigRational;
use num_traits::{One, Signed};

use super::expr::{Atom, Expr, Exponent};

fn write_exponent(f: &mut fmt::Formatter<'_>, e: &Exponent) -> fmt::Result {
    if e.is_integer() && *e.numer() > 0 {
        write!(f, "^{}", e.numer())
    } else if e.is_integer() {
        write!(f, "^({})", e.numer())
    } else {
        write!(f, "^({}/{})", e.numer(), e.denom())
    }
}

fn write_atom(f: &mut fmt::Formatter<'_>, a: &Atom, e: &Exponent) -> fmt::Result {
    match a {
        Atom::Sym(s) => f.write_str(s.name())?,
        Atom::Func(func, arg) => write!(f, "{}({arg})", func.name())?,
        Atom::Group(b) => write!(f, "({b})")?,
    }
    if !e.is_one() {
        write_exponent(f, e)?;
    }
    Ok(())
}

fn write_rational(f: &mut fmt::Formatter<'_>, r: &BigRational) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_one() {
                write_rational(f, &mag)?;
                continue;
            }
            if !mag.is_one() {
                write_rational(f, &mag)?;
                f.write_char('*')?;
            }
            for (j, (a, e)) in m.0.iter().enumerate() {
                if j > 0 {
                    f.write_char('*')?;
                }
                write_atom(f, a, e)?;
            }
        }
        Ok(())
    }
}
