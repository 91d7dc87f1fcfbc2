//! A small expression language for naming groups.
//!
//! ```text
//! expr   := term (("x" | "×") term)*
//! term   := atom | "sd(" expr "," "C" int "," action ")"
//! atom   := "C" int | "D" int | "Dic" int | "Q8" | "S" int | "A" int
//!         | "Heis" int | "(" expr ")"
//! action := "inv" | "shift" | "pow:" ["-"] int
//! ```
//!
//! Whitespace is ignored. `D n` is the dihedral group of order `2n`, so the
//! dihedral group of order 8 is `D4`. Products associate to the left.

use std::fmt;

use crate::error::{ExprError, GroupError};
use crate::group::{FiniteGroup, GroupBuilder};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Atom {
    Cyclic(usize),
    Dihedral(usize),
    Dicyclic(usize),
    Quaternion,
    Symmetric(usize),
    Alternating(usize),
    Heisenberg(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ActionSpec {
    /// `x -> x^-1` on an abelian normal factor.
    Inv,
    /// Cyclic shift of the coordinates of a power `F x F x ... x F`.
    Shift,
    /// `x -> x^k`.
    Pow(i64),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupExpr {
    Named(Atom),
    Product(Box<GroupExpr>, Box<GroupExpr>),
    Semidirect { normal: Box<GroupExpr>, m: usize, action: ActionSpec },
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Cyclic(n) => write!(f, "C{n}"),
            Atom::Dihedral(n) => write!(f, "D{n}"),
            Atom::Dicyclic(n) => write!(f, "Dic{n}"),
            Atom::Quaternion => write!(f, "Q8"),
            Atom::Symmetric(n) => write!(f, "S{n}"),
            Atom::Alternating(n) => write!(f, "A{n}"),
            Atom::Heisenberg(n) => write!(f, "Heis{n}"),
        }
    }
}

impl fmt::Display for ActionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ActionSpec::Inv => write!(f, "inv"),
            ActionSpec::Shift => write!(f, "shift"),
            ActionSpec::Pow(k) => write!(f, "pow:{k}"),
        }
    }
}

impl fmt::Display for GroupExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupExpr::Named(a) => write!(f, "{a}"),
            GroupExpr::Product(l, r) => {
                if matches!(**r, GroupExpr::Product(..)) {
                    write!(f, "{l} x ({r})")
                } else {
                    write!(f, "{l} x {r}")
                }
            }
            GroupExpr::Semidirect { normal, m, action } => write!(f, "sd({normal}, C{m}, {action})"),
        }
    }
}

pub fn parse(input: &str) -> Result<GroupExpr, ExprError> {
    let mut p = Parser { src: input, pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != input.len() {
        return Err(p.syntax("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn syntax(&self, message: impl Into<String>) -> ExprError {
        ExprError::Syntax { offset: self.pos, message: message.into() }
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<(), ExprError> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.syntax(format!("expected `{token}`")))
        }
    }

    fn expr(&mut self) -> Result<GroupExpr, ExprError> {
        let mut left = self.term()?;
        while self.eat("x") || self.eat("×") {
            let right = self.term()?;
            left = GroupExpr::Product(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn letters(&mut self) -> &'a str {
        let rest = self.rest();
        let len = rest.find(|c: char| !c.is_ascii_alphabetic()).unwrap_or(rest.len());
        self.pos += len;
        &rest[..len]
    }

    fn int(&mut self) -> Result<usize, ExprError> {
        self.skip_ws();
        let rest = self.rest();
        let len = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
        if len == 0 {
            return Err(self.syntax("expected an integer"));
        }
        let value = rest[..len].parse().map_err(|_| self.syntax("integer out of range"))?;
        self.pos += len;
        Ok(value)
    }

    fn term(&mut self) -> Result<GroupExpr, ExprError> {
        self.skip_ws();
        if self.eat("(") {
            let inner = self.expr()?;
            self.expect(")")?;
            return Ok(inner);
        }
        let start = self.pos;
        let name = self.letters();
        if name == "sd" {
            self.expect("(")?;
            let normal = self.expr()?;
            self.expect(",")?;
            self.expect("C")?;
            let m = self.int()?;
            self.expect(",")?;
            let action = self.action()?;
            self.expect(")")?;
            return Ok(GroupExpr::Semidirect { normal: Box::new(normal), m, action });
        }
        if name.is_empty() {
            return Err(self.syntax("expected a group"));
        }
        let unknown = |p: &Self| ExprError::UnknownAtom { offset: start, atom: p.src[start..p.pos].to_string() };
        let ctor: fn(usize) -> Atom = match name {
            "C" => Atom::Cyclic,
            "D" => Atom::Dihedral,
            "Dic" => Atom::Dicyclic,
            "S" => Atom::Symmetric,
            "A" => Atom::Alternating,
            "Heis" => Atom::Heisenberg,
            "Q" => {
                if self.rest().starts_with('8') && !self.rest()[1..].starts_with(|c: char| c.is_ascii_digit()) {
                    self.pos += 1;
                    return Ok(GroupExpr::Named(Atom::Quaternion));
                }
                let _ = self.int();
                return Err(unknown(self));
            }
            _ => {
                let _ = self.int();
                return Err(unknown(self));
            }
        };
        if !self.rest().starts_with(|c: char| c.is_ascii_digit()) {
            return Err(self.syntax(format!("expected an integer after `{name}`")));
        }
        let n = self.int()?;
        Ok(GroupExpr::Named(ctor(n)))
    }

    fn action(&mut self) -> Result<ActionSpec, ExprError> {
        self.skip_ws();
        let start = self.pos;
        let malformed = |p: &Self| {
            let end = p.rest().find([',', ')']).map_or(p.src.len(), |i| p.pos + i);
            ExprError::MalformedAction { offset: start, action: p.src[start..end.max(p.pos)].trim().to_string() }
        };
        match self.letters() {
            "inv" => Ok(ActionSpec::Inv),
            "shift" => Ok(ActionSpec::Shift),
            "pow" => {
                if !self.eat(":") {
                    return Err(malformed(self));
                }
                let negative = self.eat("-");
                let k = self.int().map_err(|_| malformed(self))? as i64;
                Ok(ActionSpec::Pow(if negative { -k } else { k }))
            }
            _ => Err(malformed(self)),
        }
    }
}

impl GroupExpr {
    /// Order without building any table, saturating on overflow.
    pub fn order(&self) -> usize {
        match self {
            GroupExpr::Named(a) => match *a {
                Atom::Cyclic(n) => n,
                Atom::Dihedral(n) => n.saturating_mul(2),
                Atom::Dicyclic(n) => n.saturating_mul(4),
                Atom::Quaternion => 8,
                Atom::Symmetric(n) => factorial(n),
                Atom::Alternating(n) => (factorial(n) / 2).max(1),
                Atom::Heisenberg(n) => n.saturating_pow(3),
            },
            GroupExpr::Product(l, r) => l.order().saturating_mul(r.order()),
            GroupExpr::Semidirect { normal, m, .. } => normal.order().saturating_mul(*m),
        }
    }

    pub fn evaluate(&self) -> Result<FiniteGroup, ExprError> {
        self.evaluate_with(&GroupBuilder::default())
    }

    /// Builds the group; the result is labelled with the printed expression.
    pub fn evaluate_with(&self, builder: &GroupBuilder) -> Result<FiniteGroup, ExprError> {
        if self.order() > builder.order_cap {
            return Err(GroupError::OrderCapExceeded { order: self.order(), cap: builder.order_cap }.into());
        }
        let g = match self {
            GroupExpr::Named(a) => match *a {
                Atom::Cyclic(n) => builder.cyclic(n)?,
                Atom::Dihedral(n) => builder.dihedral(n)?,
                Atom::Dicyclic(n) => builder.dicyclic(n)?,
                Atom::Quaternion => builder.dicyclic(2)?,
                Atom::Symmetric(n) => builder.symmetric(n)?,
                Atom::Alternating(n) => builder.alternating(n)?,
                Atom::Heisenberg(n) => builder.heisenberg_mod(n)?,
            },
            GroupExpr::Product(l, r) => {
                builder.direct_product(&l.evaluate_with(builder)?, &r.evaluate_with(builder)?)?
            }
            GroupExpr::Semidirect { normal, m, action } => {
                let n = normal.evaluate_with(builder)?;
                let perm = self.action_permutation(normal, &n, *action)?;
                builder.semidirect_product(&n, *m, &perm)?
            }
        };
        Ok(g.with_label(self.to_string()))
    }

    fn action_permutation(
        &self,
        normal: &GroupExpr,
        n: &FiniteGroup,
        action: ActionSpec,
    ) -> Result<Vec<usize>, GroupError> {
        match action {
            ActionSpec::Inv => Ok(n.elements().map(|x| n.inv(x)).collect()),
            ActionSpec::Pow(k) => {
                let e = n.exponent() as i64;
                let k = k.rem_euclid(e) as usize;
                Ok(n.elements().map(|x| n.pow(x, k)).collect())
            }
            ActionSpec::Shift => {
                let mut factors = Vec::new();
                normal.leaves(&mut factors);
                let p = factors.len();
                if p < 2 || factors.iter().any(|f| *f != factors[0]) {
                    return Err(GroupError::InvalidParameter {
                        construction: "shift action",
                        reason: format!("`{normal}` is not a power F x ... x F"),
                    });
                }
                let q = factors[0].order();
                Ok(n.elements()
                    .map(|x| {
                        // mixed radix, most significant coordinate first
                        let mut digits = vec![0usize; p];
                        let mut rest = x;
                        for i in (0..p).rev() {
                            digits[i] = rest % q;
                            rest /= q;
                        }
                        digits.rotate_right(1);
                        digits.iter().fold(0, |acc, &d| acc * q + d)
                    })
                    .collect())
            }
        }
    }

    fn leaves<'s>(&'s self, out: &mut Vec<&'s GroupExpr>) {
        match self {
            GroupExpr::Product(l, r) => {
                l.leaves(out);
                r.leaves(out);
            }
            other => out.push(other),
        }
    }
}

fn factorial(n: usize) -> usize {
    (1..=n).fold(1usize, |acc, k| acc.saturating_mul(k))
}

/// Parses and evaluates in one step.
pub fn evaluate(input: &str) -> Result<FiniteGroup, ExprError> {
    parse(input)?.evaluate()
}
