//! A small expression language for combining knots.
//!
//! Grammar (whitespace insignificant, operators left-associative):
//!
//! ```text
//! expr := term (('#' | '|') term)*
//! term := atom | func
//! func := 'closure(' expr ')' | 'pow#(' expr ',' int ')' | 'powU(' expr ',' int ')'
//! atom := 'U' | FAM '(' int ')'          FAM in { T, L, W, H, O, TK }
//! ```
//!
//! `#` is connected sum, `|` is disjoint union, `pow#`/`powU` iterate them,
//! and `closure` is the closed connected sum. Expressions evaluate two ways:
//! `brute` builds the diagram and resolves all states; `laws` composes the
//! polynomial identities, touching a diagram only to solve a child's
//! components once per closure.

use crate::algebra::Polynomial;
use crate::diagram::{DiagramError, Shadow};
use crate::families::{self, Family, FamilySpec};
use crate::formulas::{
    self, closure_of_csum, closure_of_generated, components_solve, csum_poly, generated_poly,
    Components, FormulaError,
};
use num_traits::Zero;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExprError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown family `{name}` at byte {offset}")]
    UnknownFamily { offset: usize, name: String },
    #[error("closure needs a child with two canonical cut points")]
    ClosureUnsupported,
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Algebra(#[from] crate::algebra::AlgebraError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Family(#[from] families::FamilyError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PowerKind {
    CSum,
    Disjoint,
}

/// Abstract syntax tree of a knot expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KnotExpr {
    Atom(FamilySpec),
    CSum(Box<KnotExpr>, Box<KnotExpr>),
    Disjoint(Box<KnotExpr>, Box<KnotExpr>),
    Power {
        child: Box<KnotExpr>,
        n: usize,
        kind: PowerKind,
    },
    Closure(Box<KnotExpr>),
}

/// How [`eval_poly`] computes its answer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvalMethod {
    /// Build the diagram and enumerate all states.
    Brute,
    /// Compose the polynomial identities.
    Laws,
}

const ATOM_FAMILIES: [(&str, Family); 6] = [
    ("T", Family::TwistLoop),
    ("L", Family::Link),
    ("W", Family::TwistLink),
    ("H", Family::Hitch),
    ("O", Family::Overhand),
    ("TK", Family::TwistKnot),
];

pub fn parse(text: &str) -> Result<KnotExpr, ExprError> {
    let mut parser = Parser {
        bytes: text.as_bytes(),
        pos: 0,
    };
    let expr = parser.expr()?;
    parser.skip_ws();
    if parser.pos != parser.bytes.len() {
        return Err(parser.syntax("unexpected trailing input"));
    }
    Ok(expr)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn syntax(&self, message: &str) -> ExprError {
        ExprError::Syntax {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self
            .bytes
            .get(self.pos)
            .is_some_and(|b| b.is_ascii_whitespace())
        {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expect(&mut self, b: u8) -> Result<(), ExprError> {
        if self.peek() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.syntax(&format!("expected `{}`", b as char)))
        }
    }

    fn expr(&mut self) -> Result<KnotExpr, ExprError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'#') => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = KnotExpr::CSum(Box::new(acc), Box::new(rhs));
                }
                Some(b'|') => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = KnotExpr::Disjoint(Box::new(acc), Box::new(rhs));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<KnotExpr, ExprError> {
        self.skip_ws();
        let start = self.pos;
        let mut end = start;
        while self.bytes.get(end).is_some_and(|b| b.is_ascii_alphabetic()) {
            end += 1;
        }
        if end == start {
            return Err(self.syntax("expected an atom or function"));
        }
        // `pow#` carries its operator in the name
        let with_hash = self.bytes.get(end) == Some(&b'#');
        let word = std::str::from_utf8(&self.bytes[start..end]).unwrap();
        match (word, with_hash) {
            ("closure", false) => {
                self.pos = end;
                self.expect(b'(')?;
                let child = self.expr()?;
                self.expect(b')')?;
                Ok(KnotExpr::Closure(Box::new(child)))
            }
            ("pow", true) => {
                self.pos = end + 1;
                self.power(PowerKind::CSum)
            }
            ("powU", false) => {
                self.pos = end;
                self.power(PowerKind::Disjoint)
            }
            ("U", false) => {
                self.pos = end;
                Ok(KnotExpr::Atom(FamilySpec::new(Family::Unknot, 0)))
            }
            _ => {
                let family = ATOM_FAMILIES
                    .iter()
                    .find(|(name, _)| *name == word)
                    .map(|&(_, f)| f)
                    .ok_or_else(|| ExprError::UnknownFamily {
                        offset: start,
                        name: word.to_string(),
                    })?;
                self.pos = end;
                self.expect(b'(')?;
                let n = self.integer()?;
                self.expect(b')')?;
                Ok(KnotExpr::Atom(FamilySpec::new(family, n)))
            }
        }
    }

    fn power(&mut self, kind: PowerKind) -> Result<KnotExpr, ExprError> {
        self.expect(b'(')?;
        let child = self.expr()?;
        self.expect(b',')?;
        let n = self.integer()?;
        self.expect(b')')?;
        Ok(KnotExpr::Power {
            child: Box::new(child),
            n,
            kind,
        })
    }

    fn integer(&mut self) -> Result<usize, ExprError> {
        self.skip_ws();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.syntax("expected a nonnegative integer"));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.syntax("integer out of range"))
    }
}

/// Renders an expression in the grammar's own syntax.
pub fn render(expr: &KnotExpr) -> String {
    expr.to_string()
}

impl fmt::Display for KnotExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KnotExpr::Atom(spec) => match spec.family {
                Family::Unknot => write!(f, "U"),
                family => {
                    let name = ATOM_FAMILIES
                        .iter()
                        .find(|&&(_, fam)| fam == family)
                        .map(|&(name, _)| name)
                        .unwrap_or("?");
                    write!(f, "{}({})", name, spec.n)
                }
            },
            KnotExpr::CSum(a, b) => write!(f, "{a} # {b}"),
            KnotExpr::Disjoint(a, b) => write!(f, "{a} | {b}"),
            KnotExpr::Power { child, n, kind } => match kind {
                PowerKind::CSum => write!(f, "pow#({child}, {n})"),
                PowerKind::Disjoint => write!(f, "powU({child}, {n})"),
            },
            KnotExpr::Closure(child) => write!(f, "closure({child})"),
        }
    }
}

/// Builds the diagram an expression denotes.
pub fn eval_shadow(expr: &KnotExpr) -> Result<Shadow, ExprError> {
    match expr {
        KnotExpr::Atom(spec) => Ok(families::build(*spec)?),
        KnotExpr::CSum(a, b) => {
            let a = eval_shadow(a)?;
            let b = eval_shadow(b)?;
            Ok(a.connected_sum(a.exit_arc()?, &b, b.entry_arc()?)?)
        }
        KnotExpr::Disjoint(a, b) => Ok(eval_shadow(a)?.disjoint_union(&eval_shadow(b)?)),
        KnotExpr::Power { child, n, kind } => match kind {
            PowerKind::CSum => {
                if *n == 0 {
                    return Ok(Shadow::unknot());
                }
                let base = eval_shadow(child)?;
                let mut acc = base.clone();
                for _ in 1..*n {
                    acc = acc.connected_sum(acc.exit_arc()?, &base, base.entry_arc()?)?;
                }
                Ok(acc)
            }
            PowerKind::Disjoint => {
                if *n == 0 {
                    return Ok(Shadow::empty());
                }
                let base = eval_shadow(child)?;
                let mut acc = base.clone();
                for _ in 1..*n {
                    acc = acc.disjoint_union(&base);
                }
                Ok(acc)
            }
        },
        KnotExpr::Closure(child) => {
            let shadow = eval_shadow(child)?;
            if shadow.cut_points().len() < 2 {
                return Err(ExprError::ClosureUnsupported);
            }
            Ok(shadow.self_closure(shadow.entry_arc()?, shadow.exit_arc()?)?)
        }
    }
}

/// Evaluates the expression's polynomial by the chosen method; both methods
/// must agree.
pub fn eval_poly(
    expr: &KnotExpr,
    method: EvalMethod,
    guard: usize,
) -> Result<Polynomial, ExprError> {
    match method {
        EvalMethod::Brute => Ok(eval_shadow(expr)?.state_sum_guarded(guard)?),
        EvalMethod::Laws => laws_poly(expr, guard),
    }
}

fn laws_poly(expr: &KnotExpr, guard: usize) -> Result<Polynomial, ExprError> {
    match expr {
        KnotExpr::Atom(spec) => Ok(formulas::family_poly_closed(*spec)),
        KnotExpr::CSum(a, b) => {
            let pa = laws_poly(a, guard)?;
            let pb = laws_poly(b, guard)?;
            // a nonzero constant term marks the empty knot, which has no arc
            // to cut; mirror the diagram route's rejection
            if !pa.coeff(0).is_zero() || !pb.coeff(0).is_zero() {
                return Err(ExprError::Diagram(DiagramError::InvalidArc));
            }
            Ok(csum_poly(&pa, &pb)?)
        }
        KnotExpr::Disjoint(a, b) => Ok(&laws_poly(a, guard)? * &laws_poly(b, guard)?),
        KnotExpr::Power { child, n, kind } => match kind {
            // zeroth powers never look at the child, matching the builder
            PowerKind::CSum if *n == 0 => Ok(Polynomial::x()),
            PowerKind::Disjoint if *n == 0 => Ok(Polynomial::one()),
            // a 1-fold sum is the child itself; the law only enters at n >= 2
            PowerKind::CSum if *n == 1 => laws_poly(child, guard),
            PowerKind::CSum => Ok(generated_poly(&laws_poly(child, guard)?, *n)?),
            PowerKind::Disjoint => Ok(laws_poly(child, guard)?.pow(*n)),
        },
        KnotExpr::Closure(child) => laws_closure(child, guard),
    }
}

/// Polynomial of `closure(child)` via the composition laws.
fn laws_closure(child: &KnotExpr, guard: usize) -> Result<Polynomial, ExprError> {
    match child {
        // closure of an n-fold power from the generator's components
        KnotExpr::Power {
            child: base,
            n,
            kind: PowerKind::CSum,
        } => {
            if *n == 0 {
                return Ok(Polynomial::from_ints(&[0, 0, 1]));
            }
            let c = components_of(base, guard)?;
            Ok(closure_of_generated(&c, *n))
        }
        // closure of a sum from the left factor's components
        KnotExpr::CSum(a, b) => {
            let c = components_of(a, guard)?;
            let b_poly = laws_poly(b, guard)?;
            let b_closed = laws_closure(b, guard)?;
            Ok(closure_of_csum(&c, &b_poly, &b_closed))
        }
        // anything else: solve the child's components directly
        other => {
            let c = components_of(other, guard)?;
            Ok(&c.alpha.shift_up().shift_up() + &c.beta.shift_up())
        }
    }
}

/// Components of a sub-expression, obtained by brute-forcing its (small)
/// closure diagram once and solving the component equations.
fn components_of(expr: &KnotExpr, guard: usize) -> Result<Components, ExprError> {
    let shadow = eval_shadow(expr)?;
    if shadow.cut_points().len() < 2 {
        return Err(ExprError::ClosureUnsupported);
    }
    let poly = shadow.state_sum_guarded(guard)?;
    let closed = shadow
        .self_closure(shadow.entry_arc()?, shadow.exit_arc()?)?
        .state_sum_guarded(guard)?;
    Ok(components_solve(&poly, &closed)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::DEFAULT_CROSSING_GUARD;

    fn p(coeffs: &[i64]) -> Polynomial {
        Polynomial::from_ints(coeffs)
    }

    fn both(text: &str) -> (Polynomial, Polynomial) {
        let expr = parse(text).unwrap();
        (
            eval_poly(&expr, EvalMethod::Brute, DEFAULT_CROSSING_GUARD).unwrap(),
            eval_poly(&expr, EvalMethod::Laws, DEFAULT_CROSSING_GUARD).unwrap(),
        )
    }

    #[test]
    fn parse_examples() {
        let e = parse("closure(L(1) # T(3))").unwrap();
        assert_eq!(
            e,
            KnotExpr::Closure(Box::new(KnotExpr::CSum(
                Box::new(KnotExpr::Atom(FamilySpec::new(Family::Link, 1))),
                Box::new(KnotExpr::Atom(FamilySpec::new(Family::TwistLoop, 3)))
            )))
        );
        let e = parse("pow#(H(1), 2)").unwrap();
        assert_eq!(
            e,
            KnotExpr::Power {
                child: Box::new(KnotExpr::Atom(FamilySpec::new(Family::Hitch, 1))),
                n: 2,
                kind: PowerKind::CSum
            }
        );
        assert!(matches!(
            parse("T(1) # # T(1)"),
            Err(ExprError::Syntax { .. })
        ));
        assert!(matches!(
            parse("Q(1)"),
            Err(ExprError::UnknownFamily { .. })
        ));
    }

    #[test]
    fn syntax_errors_carry_byte_offsets() {
        match parse("T(1) # # T(1)") {
            Err(ExprError::Syntax { offset, .. }) => assert_eq!(offset, 7),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn eval_examples() {
        let (brute, laws) = both("closure(L(1) # T(1))");
        assert_eq!(brute, p(&[0, 3, 4, 1]));
        assert_eq!(laws, p(&[0, 3, 4, 1]));

        let (brute, laws) = both("U | U | U");
        assert_eq!(brute, p(&[0, 0, 0, 1]));
        assert_eq!(laws, p(&[0, 0, 0, 1]));

        let (brute, laws) = both("pow#(W(1), 2)");
        assert_eq!(brute, p(&[0, 4, 16, 24, 16, 4]));
        assert_eq!(laws, p(&[0, 4, 16, 24, 16, 4]));
    }

    #[test]
    fn eval_unknot() {
        let (brute, laws) = both("U");
        assert_eq!(brute, Polynomial::x());
        assert_eq!(laws, Polynomial::x());
    }

    #[test]
    fn powers_at_zero() {
        let (brute, laws) = both("pow#(H(2), 0)");
        assert_eq!(brute, Polynomial::x());
        assert_eq!(laws, Polynomial::x());
        let (brute, laws) = both("powU(H(2), 0)");
        assert_eq!(brute, Polynomial::one());
        assert_eq!(laws, Polynomial::one());
    }

    #[test]
    fn csum_is_commutative_and_associative_at_expression_level() {
        let ab = both("L(1) # T(2)").0;
        let ba = both("T(2) # L(1)").0;
        assert_eq!(ab, ba);

        let left = parse("L(1) # T(2) # H(1)").unwrap();
        let right = KnotExpr::CSum(
            Box::new(KnotExpr::Atom(FamilySpec::new(Family::Link, 1))),
            Box::new(KnotExpr::CSum(
                Box::new(KnotExpr::Atom(FamilySpec::new(Family::TwistLoop, 2))),
                Box::new(KnotExpr::Atom(FamilySpec::new(Family::Hitch, 1))),
            )),
        );
        for method in [EvalMethod::Brute, EvalMethod::Laws] {
            assert_eq!(
                eval_poly(&left, method, DEFAULT_CROSSING_GUARD).unwrap(),
                eval_poly(&right, method, DEFAULT_CROSSING_GUARD).unwrap()
            );
        }
    }

    #[test]
    fn nested_closures_agree() {
        let (brute, laws) = both("closure(pow#(closure(T(2)), 2))");
        assert_eq!(brute, laws);
        let (brute, laws) = both("closure(TK(2) # T(1))");
        assert_eq!(brute, laws);
    }

    #[test]
    fn render_round_trips() {
        for text in [
            "closure(L(1) # T(3))",
            "pow#(H(1), 2)",
            "U | U | U",
            "powU(T(4), 3) # U",
            "closure(TK(2))",
        ] {
            let expr = parse(text).unwrap();
            let rendered = render(&expr);
            assert_eq!(parse(&rendered).unwrap(), expr, "{text} -> {rendered}");
        }
    }

    #[test]
    fn guard_applies_to_brute_route() {
        let expr = parse("pow#(H(1), 4)").unwrap();
        assert!(matches!(
            eval_poly(&expr, EvalMethod::Brute, 5),
            Err(ExprError::Diagram(DiagramError::TooManyCrossings { .. }))
        ));
    }
}
