//! A small text format for models, contexts and queries.
//!
//! ```text
//! model backup {
//!   exo U : {0, 1}
//!   var Trainee : {0, 1} = U
//!   var Supervisor : {0, 1} = !Trainee
//!   var Victim : {0, 1} = Trainee | Supervisor
//!   context shot { U = 1 }
//! }
//! query ness cause Trainee=1 effect Victim=1 in backup given shot
//! ```
//!
//! Expressions use `!`, `&`, `|` over `{0,1}` variables, `X == v` tests and
//! `case { cond -> v, ..., else -> v }`. `!` binds tighter than `&`, which
//! binds tighter than `|`; `==` binds tighter than `!`. `#` starts a comment.

mod lexer;
mod parser;
mod printer;

use std::fmt;

pub use parser::parse_document;
pub use printer::print_document;

use crate::engine::{Definition, Setting};
use crate::model::{CausalModel, Context, Literal};

/// Location of a diagnostic. Lines and columns count from 1; offsets are
/// byte positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DiagnosticKind {
    SyntaxError,
    UndeclaredVariable,
    /// A query names a model or context that does not exist.
    UndeclaredName,
    DomainMismatch,
    DuplicateName,
    /// The declarations do not form a valid model, e.g. a cycle.
    InvalidModel,
}

impl fmt::Display for DiagnosticKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DiagnosticKind::SyntaxError => "syntax error",
            DiagnosticKind::UndeclaredVariable => "undeclared variable",
            DiagnosticKind::UndeclaredName => "undeclared name",
            DiagnosticKind::DomainMismatch => "domain mismatch",
            DiagnosticKind::DuplicateName => "duplicate name",
            DiagnosticKind::InvalidModel => "invalid model",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    pub span: SourceSpan,
    pub message: String,
}

impl Diagnostic {
    pub(crate) fn new(kind: DiagnosticKind, span: SourceSpan, message: impl Into<String>) -> Self {
        Diagnostic {
            kind,
            span,
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}: {}: {}",
            self.span.line, self.span.column, self.kind, self.message
        )
    }
}

/// Every problem found in one source text, in source order.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct Diagnostics(pub Vec<Diagnostic>);

impl fmt::Display for Diagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedContext {
    pub name: String,
    pub context: Context,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelDecl {
    pub name: String,
    pub model: CausalModel,
    pub contexts: Vec<NamedContext>,
}

impl ModelDecl {
    pub fn context(&self, name: &str) -> Option<&NamedContext> {
        self.contexts.iter().find(|c| c.name == name)
    }

    /// The model paired with the named context.
    pub fn setting(&self, context: &str) -> Option<Setting> {
        let ctx = self.context(context)?;
        Setting::new(self.model.clone(), ctx.context.clone()).ok()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    pub definition: Definition,
    pub cause: Literal,
    pub effect: Literal,
    pub model: String,
    pub context: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ModelDocument {
    pub models: Vec<ModelDecl>,
    pub queries: Vec<Query>,
}

impl ModelDocument {
    pub fn model(&self, name: &str) -> Option<&ModelDecl> {
        self.models.iter().find(|m| m.name == name)
    }
}

impl std::str::FromStr for ModelDocument {
    type Err = Diagnostics;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_document(s)
    }
}

impl fmt::Display for ModelDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_document(self))
    }
}
