//! Mechanism expressions.
//!
//! An expression evaluates to a value token. Boolean connectives work on the
//! tokens `0` and `1`; `X == v` yields `1` or `0`; `case` selects the first
//! arm whose condition evaluates to `1`.

use std::collections::BTreeSet;
use std::fmt;

pub const TRUE: &str = "1";
pub const FALSE: &str = "0";

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    /// The value of a variable.
    Var(String),
    /// A constant value token.
    Const(String),
    /// `X == v`.
    Eq(String, String),
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
    Case {
        arms: Vec<(Expr, String)>,
        default: String,
    },
}

impl Expr {
    pub fn var(name: impl Into<String>) -> Self {
        Expr::Var(name.into())
    }

    pub fn constant(value: impl Into<String>) -> Self {
        Expr::Const(value.into())
    }

    pub fn eq(name: impl Into<String>, value: impl Into<String>) -> Self {
        Expr::Eq(name.into(), value.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(inner: Expr) -> Self {
        Expr::Not(Box::new(inner))
    }

    pub fn and(lhs: Expr, rhs: Expr) -> Self {
        Expr::And(Box::new(lhs), Box::new(rhs))
    }

    pub fn or(lhs: Expr, rhs: Expr) -> Self {
        Expr::Or(Box::new(lhs), Box::new(rhs))
    }

    /// Builds a `case` expression. With no arms this is just the constant.
    pub fn case(arms: Vec<(Expr, String)>, default: impl Into<String>) -> Self {
        let default = default.into();
        if arms.is_empty() {
            Expr::Const(default)
        } else {
            Expr::Case { arms, default }
        }
    }

    /// Left fold of `operands` with `&`; an empty conjunction is `1`.
    pub fn all(operands: impl IntoIterator<Item = Expr>) -> Self {
        operands
            .into_iter()
            .reduce(Expr::and)
            .unwrap_or_else(|| Expr::constant(TRUE))
    }

    /// Left fold of `operands` with `|`; an empty disjunction is `0`.
    pub fn any(operands: impl IntoIterator<Item = Expr>) -> Self {
        operands
            .into_iter()
            .reduce(Expr::or)
            .unwrap_or_else(|| Expr::constant(FALSE))
    }

    /// Variables mentioned syntactically.
    pub fn references(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_refs(&mut out);
        out
    }

    fn collect_refs<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Expr::Var(name) | Expr::Eq(name, _) => {
                out.insert(name.as_str());
            }
            Expr::Const(_) => {}
            Expr::Not(inner) => inner.collect_refs(out),
            Expr::And(a, b) | Expr::Or(a, b) => {
                a.collect_refs(out);
                b.collect_refs(out);
            }
            Expr::Case { arms, .. } => {
                for (cond, _) in arms {
                    cond.collect_refs(out);
                }
            }
        }
    }

    /// The set of tokens the expression can produce, given each variable's
    /// domain. Fails when a boolean operator receives a non-boolean operand,
    /// when a variable is unknown, or when `X == v` names a value outside
    /// `X`'s domain.
    pub(crate) fn output_tokens<'d, F>(&self, domain_of: &F) -> Result<BTreeSet<String>, TypeError>
    where
        F: Fn(&str) -> Option<&'d [String]>,
    {
        let boolean = || [FALSE.to_string(), TRUE.to_string()].into_iter().collect();
        match self {
            Expr::Var(name) => domain_of(name)
                .map(|d| d.iter().cloned().collect())
                .ok_or_else(|| TypeError::UnknownVariable(name.clone())),
            Expr::Const(v) => Ok(std::iter::once(v.clone()).collect()),
            Expr::Eq(name, value) => {
                let domain =
                    domain_of(name).ok_or_else(|| TypeError::UnknownVariable(name.clone()))?;
                if domain.iter().any(|d| d == value) {
                    Ok(boolean())
                } else {
                    Err(TypeError::ValueOutOfDomain {
                        variable: name.clone(),
                        value: value.clone(),
                    })
                }
            }
            Expr::Not(inner) => {
                expect_boolean(inner, domain_of)?;
                Ok(boolean())
            }
            Expr::And(a, b) | Expr::Or(a, b) => {
                expect_boolean(a, domain_of)?;
                expect_boolean(b, domain_of)?;
                Ok(boolean())
            }
            Expr::Case { arms, default } => {
                let mut out = BTreeSet::new();
                for (cond, value) in arms {
                    expect_boolean(cond, domain_of)?;
                    out.insert(value.clone());
                }
                out.insert(default.clone());
                Ok(out)
            }
        }
    }

    /// Evaluates against a token lookup. Assumes the expression type-checked.
    pub(crate) fn eval<'a, F>(&'a self, lookup: &F) -> &'a str
    where
        F: Fn(&str) -> &'a str,
    {
        match self {
            Expr::Var(name) => lookup(name),
            Expr::Const(v) => v,
            Expr::Eq(name, value) => bool_token(lookup(name) == value),
            Expr::Not(inner) => bool_token(inner.eval(lookup) != TRUE),
            Expr::And(a, b) => bool_token(a.eval(lookup) == TRUE && b.eval(lookup) == TRUE),
            Expr::Or(a, b) => bool_token(a.eval(lookup) == TRUE || b.eval(lookup) == TRUE),
            Expr::Case { arms, default } => arms
                .iter()
                .find(|(cond, _)| cond.eval(lookup) == TRUE)
                .map_or(default.as_str(), |(_, v)| v.as_str()),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Or(..) => 1,
            Expr::And(..) => 2,
            Expr::Not(..) => 3,
            _ => 4,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let wrap = self.precedence() < min;
        if wrap {
            f.write_str("(")?;
        }
        match self {
            Expr::Var(name) => f.write_str(name)?,
            Expr::Const(v) if is_numeric(v) => f.write_str(v)?,
            Expr::Const(v) => write!(f, "case {{ else -> {v} }}")?,
            Expr::Eq(name, value) => write!(f, "{name} == {value}")?,
            Expr::Not(inner) => {
                f.write_str("!")?;
                inner.fmt_prec(f, 3)?;
            }
            Expr::And(a, b) => {
                a.fmt_prec(f, 2)?;
                f.write_str(" & ")?;
                b.fmt_prec(f, 3)?;
            }
            Expr::Or(a, b) => {
                a.fmt_prec(f, 1)?;
                f.write_str(" | ")?;
                b.fmt_prec(f, 2)?;
            }
            Expr::Case { arms, default } => {
                f.write_str("case { ")?;
                for (cond, value) in arms {
                    cond.fmt_prec(f, 1)?;
                    write!(f, " -> {value}, ")?;
                }
                write!(f, "else -> {default} }}")?;
            }
        }
        if wrap {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

fn expect_boolean<'d, F>(expr: &Expr, domain_of: &F) -> Result<(), TypeError>
where
    F: Fn(&str) -> Option<&'d [String]>,
{
    let tokens = expr.output_tokens(domain_of)?;
    if tokens.iter().all(|t| t == TRUE || t == FALSE) {
        Ok(())
    } else {
        Err(TypeError::NotBoolean(expr.to_string()))
    }
}

fn bool_token(b: bool) -> &'static str {
    if b {
        TRUE
    } else {
        FALSE
    }
}

pub(crate) fn is_numeric(token: &str) -> bool {
    !token.is_empty() && token.bytes().all(|b| b.is_ascii_digit())
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TypeError {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("value `{value}` is not in the domain of `{variable}`")]
    ValueOutOfDomain { variable: String, value: String },
    #[error("operand `{0}` is not boolean (must range over {{0,1}})")]
    NotBoolean(String),
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bin(name: &str) -> Option<&'static [String]> {
        static BOOL: std::sync::OnceLock<Vec<String>> = std::sync::OnceLock::new();
        static TRI: std::sync::OnceLock<Vec<String>> = std::sync::OnceLock::new();
        match name {
            "T" => Some(TRI.get_or_init(|| vec!["a".into(), "b".into(), "c".into()])),
            "Z" => None,
            _ => Some(BOOL.get_or_init(|| vec!["0".into(), "1".into()])),
        }
    }

    #[test]
    fn printing_respects_precedence() {
        let e = Expr::or(Expr::and(Expr::var("C"), Expr::var("D")), Expr::var("A"));
        assert_eq!(e.to_string(), "C & D | A");
        let e = Expr::and(Expr::var("C"), Expr::or(Expr::var("D"), Expr::var("A")));
        assert_eq!(e.to_string(), "C & (D | A)");
        let e = Expr::not(Expr::eq("T", "a"));
        assert_eq!(e.to_string(), "!T == a");
        let e = Expr::and(Expr::var("A"), Expr::and(Expr::var("B"), Expr::var("C")));
        assert_eq!(e.to_string(), "A & (B & C)");
        assert_eq!(Expr::constant("red").to_string(), "case { else -> red }");
    }

    #[test]
    fn boolean_ops_reject_wide_domains() {
        let e = Expr::and(Expr::var("T"), Expr::var("A"));
        assert!(matches!(
            e.output_tokens(&bin),
            Err(TypeError::NotBoolean(_))
        ));
        let e = Expr::eq("T", "d");
        assert!(matches!(
            e.output_tokens(&bin),
            Err(TypeError::ValueOutOfDomain { .. })
        ));
        let e = Expr::var("Z");
        assert!(matches!(
            e.output_tokens(&bin),
            Err(TypeError::UnknownVariable(_))
        ));
    }

    #[test]
    fn case_selects_first_true_arm() {
        let e = Expr::case(
            vec![(Expr::var("A"), "x".into()), (Expr::var("B"), "y".into())],
            "z",
        );
        let tokens = e.output_tokens(&bin).unwrap();
        assert_eq!(tokens.into_iter().collect::<Vec<_>>(), ["x", "y", "z"]);
        let look = |a: &'static str, b: &'static str| move |n: &str| if n == "A" { a } else { b };
        assert_eq!(e.eval(&look("1", "1")), "x");
        assert_eq!(e.eval(&look("0", "1")), "y");
        assert_eq!(e.eval(&look("0", "0")), "z");
    }
}
