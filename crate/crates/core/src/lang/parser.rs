use std::collections::{HashMap, HashSet};

use super::lexer::{tokenize, Tok, Token};
use super::{
    Diagnostic, DiagnosticKind, Diagnostics, ModelDecl, ModelDocument, NamedContext, Query,
    SourceSpan,
};
use crate::engine::Definition;
use crate::model::{CausalModel, Context, Expr, ModelBuilder, ModelError, VarKind};

const KEYWORDS: [&str; 11] = [
    "model", "exo", "var", "context", "query", "cause", "effect", "in", "given", "case", "else",
];

/// Parses a whole document. On failure every diagnostic found is returned,
/// sorted by position.
pub fn parse_document(text: &str) -> Result<ModelDocument, Diagnostics> {
    let (tokens, mut diags) = tokenize(text);
    let mut p = Parser {
        toks: &tokens,
        pos: 0,
        diags: Vec::new(),
    };
    let raw = p.document();
    diags.append(&mut p.diags);
    let doc = resolve(raw, &mut diags);
    if diags.is_empty() {
        Ok(doc)
    } else {
        diags.sort_by_key(|d| (d.span.start, d.span.end));
        Err(Diagnostics(diags))
    }
}

type Word = (String, SourceSpan);

enum RefUse {
    Var(Word),
    Eq(Word, Word),
}

struct RawVar {
    name: Word,
    values: Vec<Word>,
    expr: Option<(Expr, Vec<RefUse>)>,
}

struct RawContext {
    name: Word,
    pairs: Vec<(Word, Word)>,
}

struct RawModel {
    name: Word,
    vars: Vec<RawVar>,
    contexts: Vec<RawContext>,
    broken: bool,
}

struct RawQuery {
    def: Definition,
    cause: (Word, Word),
    effect: (Word, Word),
    model: Word,
    context: Word,
}

#[derive(Default)]
struct RawDocument {
    models: Vec<RawModel>,
    queries: Vec<RawQuery>,
}

/// Marker for an error already recorded in `Parser::diags`.
struct Reported;

type PResult<T> = Result<T, Reported>;

struct Parser<'t> {
    toks: &'t [Token],
    pos: usize,
    diags: Vec<Diagnostic>,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn span(&self) -> SourceSpan {
        self.toks[self.pos].span
    }

    fn advance(&mut self) -> &Token {
        let t = &self.toks[self.pos];
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn error<T>(&mut self, message: impl Into<String>) -> PResult<T> {
        let found = self.peek().describe();
        let span = self.span();
        self.diags.push(Diagnostic::new(
            DiagnosticKind::SyntaxError,
            span,
            format!("{}, found {found}", message.into()),
        ));
        Err(Reported)
    }

    fn expect(&mut self, want: Tok) -> PResult<SourceSpan> {
        if *self.peek() == want {
            Ok(self.advance().span)
        } else {
            self.error(format!("expected {}", want.describe()))
        }
    }

    fn keyword(&mut self, kw: &str) -> PResult<()> {
        if self.at_keyword(kw) {
            self.advance();
            Ok(())
        } else {
            self.error(format!("expected `{kw}`"))
        }
    }

    /// A variable, model or context name.
    fn name(&mut self) -> PResult<Word> {
        match self.peek().clone() {
            Tok::Ident(s) if KEYWORDS.contains(&s.as_str()) => {
                self.error(format!("`{s}` is a keyword and cannot be used as a name"))
            }
            Tok::Ident(s) => Ok((s, self.advance().span)),
            _ => self.error("expected a name"),
        }
    }

    /// A value token: any word.
    fn value(&mut self) -> PResult<Word> {
        match self.peek().clone() {
            Tok::Ident(s) | Tok::Value(s) => Ok((s, self.advance().span)),
            _ => self.error("expected a value"),
        }
    }

    /// Skips to the next token that can start an item.
    fn recover(&mut self) {
        loop {
            match self.peek() {
                Tok::Eof => return,
                Tok::Ident(s)
                    if matches!(s.as_str(), "model" | "query" | "exo" | "var" | "context") =>
                {
                    return
                }
                _ => {
                    self.advance();
                }
            }
        }
    }

    fn document(&mut self) -> RawDocument {
        let mut doc = RawDocument::default();
        loop {
            if *self.peek() == Tok::Eof {
                return doc;
            }
            if self.at_keyword("model") {
                doc.models.push(self.model());
            } else if self.at_keyword("query") {
                if let Ok(q) = self.query() {
                    doc.queries.push(q);
                } else {
                    self.recover_top();
                }
            } else {
                let _ = self.error::<()>("expected `model` or `query`");
                self.advance();
                self.recover_top();
            }
        }
    }

    fn recover_top(&mut self) {
        while !matches!(self.peek(), Tok::Eof)
            && !self.at_keyword("model")
            && !self.at_keyword("query")
        {
            self.advance();
        }
    }

    fn model(&mut self) -> RawModel {
        self.advance();
        let mut model = RawModel {
            name: (String::new(), self.span()),
            vars: Vec::new(),
            contexts: Vec::new(),
            broken: false,
        };
        match self
            .name()
            .and_then(|n| self.expect(Tok::LBrace).map(|_| n))
        {
            Ok(name) => model.name = name,
            Err(Reported) => {
                model.broken = true;
                self.recover();
            }
        }
        loop {
            let item = if self.at_keyword("exo") || self.at_keyword("var") {
                self.var().map(|v| model.vars.push(v))
            } else if self.at_keyword("context") {
                self.context().map(|c| model.contexts.push(c))
            } else if *self.peek() == Tok::RBrace {
                self.advance();
                return model;
            } else if matches!(self.peek(), Tok::Eof)
                || self.at_keyword("model")
                || self.at_keyword("query")
            {
                let _ =
                    self.error::<()>(format!("expected `}}` to close model `{}`", model.name.0));
                model.broken = true;
                return model;
            } else {
                self.error("expected `exo`, `var`, `context` or `}`")
            };
            if item.is_err() {
                model.broken = true;
                self.advance();
                self.recover();
            }
        }
    }

    fn var(&mut self) -> PResult<RawVar> {
        let exo = self.at_keyword("exo");
        self.advance();
        let name = self.name()?;
        self.expect(Tok::Colon)?;
        self.expect(Tok::LBrace)?;
        let mut values = Vec::new();
        if *self.peek() != Tok::RBrace {
            loop {
                values.push(self.value()?);
                if *self.peek() == Tok::Comma {
                    self.advance();
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::RBrace)?;
        let expr = if exo {
            None
        } else {
            self.expect(Tok::Assign)?;
            let mut refs = Vec::new();
            let e = self.or(&mut refs)?;
            Some((e, refs))
        };
        Ok(RawVar { name, values, expr })
    }

    fn or(&mut self, refs: &mut Vec<RefUse>) -> PResult<Expr> {
        let mut lhs = self.and(refs)?;
        while *self.peek() == Tok::Pipe {
            self.advance();
            lhs = Expr::or(lhs, self.and(refs)?);
        }
        Ok(lhs)
    }

    fn and(&mut self, refs: &mut Vec<RefUse>) -> PResult<Expr> {
        let mut lhs = self.unary(refs)?;
        while *self.peek() == Tok::Amp {
            self.advance();
            lhs = Expr::and(lhs, self.unary(refs)?);
        }
        Ok(lhs)
    }

    fn unary(&mut self, refs: &mut Vec<RefUse>) -> PResult<Expr> {
        if *self.peek() == Tok::Bang {
            self.advance();
            return Ok(Expr::not(self.unary(refs)?));
        }
        self.atom(refs)
    }

    fn atom(&mut self, refs: &mut Vec<RefUse>) -> PResult<Expr> {
        match self.peek().clone() {
            Tok::LParen => {
                self.advance();
                let e = self.or(refs)?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Value(v) => {
                self.advance();
                Ok(Expr::constant(v))
            }
            Tok::Ident(s) if s == "case" => self.case(refs),
            Tok::Ident(_) => {
                let name = self.name()?;
                if *self.peek() == Tok::EqEq {
                    self.advance();
                    let value = self.value()?;
                    let e = Expr::eq(name.0.clone(), value.0.clone());
                    refs.push(RefUse::Eq(name, value));
                    Ok(e)
                } else {
                    let e = Expr::var(name.0.clone());
                    refs.push(RefUse::Var(name));
                    Ok(e)
                }
            }
            _ => self.error("expected an expression"),
        }
    }

    fn case(&mut self, refs: &mut Vec<RefUse>) -> PResult<Expr> {
        self.advance();
        self.expect(Tok::LBrace)?;
        let mut arms = Vec::new();
        while !self.at_keyword("else") {
            let cond = self.or(refs)?;
            self.expect(Tok::Arrow)?;
            let value = self.value()?;
            arms.push((cond, value.0));
            self.expect(Tok::Comma)?;
        }
        self.advance();
        self.expect(Tok::Arrow)?;
        let default = self.value()?;
        if *self.peek() == Tok::Comma {
            self.advance();
        }
        self.expect(Tok::RBrace)?;
        Ok(Expr::case(arms, default.0))
    }

    fn context(&mut self) -> PResult<RawContext> {
        self.advance();
        let name = self.name()?;
        self.expect(Tok::LBrace)?;
        let mut pairs = Vec::new();
        if *self.peek() != Tok::RBrace {
            loop {
                let var = self.name()?;
                self.expect(Tok::Assign)?;
                pairs.push((var, self.value()?));
                if *self.peek() == Tok::Comma {
                    self.advance();
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::RBrace)?;
        Ok(RawContext { name, pairs })
    }

    fn literal(&mut self) -> PResult<(Word, Word)> {
        let var = self.name()?;
        self.expect(Tok::Assign)?;
        Ok((var, self.value()?))
    }

    fn query(&mut self) -> PResult<RawQuery> {
        self.advance();
        let def = match self.peek().clone() {
            Tok::Ident(s) => match s.parse::<Definition>() {
                Ok(d) => {
                    self.advance();
                    d
                }
                Err(e) => return self.error(e.to_string()),
            },
            _ => return self.error("expected a definition name"),
        };
        self.keyword("cause")?;
        let cause = self.literal()?;
        self.keyword("effect")?;
        let effect = self.literal()?;
        self.keyword("in")?;
        let model = self.name()?;
        self.keyword("given")?;
        let context = self.name()?;
        Ok(RawQuery {
            def,
            cause,
            effect,
            model,
            context,
        })
    }
}

fn diag(diags: &mut Vec<Diagnostic>, kind: DiagnosticKind, span: SourceSpan, message: String) {
    diags.push(Diagnostic::new(kind, span, message));
}

fn resolve(raw: RawDocument, diags: &mut Vec<Diagnostic>) -> ModelDocument {
    let mut doc = ModelDocument::default();
    let mut seen_models = HashSet::new();
    // Names whose declarations were rejected; queries against them stay quiet.
    let mut failed_models = HashSet::new();
    for m in &raw.models {
        if !seen_models.insert(m.name.0.clone()) {
            diag(
                diags,
                DiagnosticKind::DuplicateName,
                m.name.1,
                format!("model `{}` is declared twice", m.name.0),
            );
            continue;
        }
        match resolve_model(m, diags) {
            Some(decl) => doc.models.push(decl),
            None => {
                failed_models.insert(m.name.0.clone());
            }
        }
    }
    for q in &raw.queries {
        if let Some(query) = resolve_query(q, &doc, &failed_models, diags) {
            doc.queries.push(query);
        }
    }
    doc
}

fn resolve_model(m: &RawModel, diags: &mut Vec<Diagnostic>) -> Option<ModelDecl> {
    let before = diags.len();
    let mut by_name: HashMap<&str, &RawVar> = HashMap::new();
    for v in &m.vars {
        if by_name.insert(&v.name.0, v).is_some() {
            diag(
                diags,
                DiagnosticKind::DuplicateName,
                v.name.1,
                format!("variable `{}` is declared twice", v.name.0),
            );
        }
        if v.values.is_empty() {
            diag(
                diags,
                DiagnosticKind::DomainMismatch,
                v.name.1,
                format!("`{}` has an empty domain", v.name.0),
            );
        }
        let mut vals = HashSet::new();
        for (val, span) in &v.values {
            if !vals.insert(val) {
                diag(
                    diags,
                    DiagnosticKind::DuplicateName,
                    *span,
                    format!(
                        "value `{val}` appears twice in the domain of `{}`",
                        v.name.0
                    ),
                );
            }
        }
    }
    for v in &m.vars {
        let Some((_, refs)) = &v.expr else { continue };
        for r in refs {
            let (name, span) = match r {
                RefUse::Var(w) | RefUse::Eq(w, _) => w,
            };
            let Some(target) = by_name.get(name.as_str()) else {
                diag(
                    diags,
                    DiagnosticKind::UndeclaredVariable,
                    *span,
                    format!("`{name}` is not declared in model `{}`", m.name.0),
                );
                continue;
            };
            if name == &v.name.0 {
                diag(
                    diags,
                    DiagnosticKind::InvalidModel,
                    *span,
                    format!("the equation for `{name}` refers to `{name}`"),
                );
            }
            if let RefUse::Eq(_, (value, vspan)) = r {
                if !target.values.iter().any(|(t, _)| t == value) {
                    diag(
                        diags,
                        DiagnosticKind::DomainMismatch,
                        *vspan,
                        format!("`{value}` is not in the domain of `{name}`"),
                    );
                }
            }
        }
    }
    if m.broken || diags.len() > before {
        return None;
    }

    let mut builder = ModelBuilder::new();
    for v in &m.vars {
        let values = v.values.iter().map(|(t, _)| t.clone());
        match &v.expr {
            None => builder.exogenous(v.name.0.clone(), values),
            Some((e, _)) => builder.endogenous(v.name.0.clone(), values, e.clone()),
        };
    }
    let model = match builder.build() {
        Ok(model) => model,
        Err(err) => {
            let (kind, span) = match &err {
                ModelError::IllTypedMechanism { target, .. } => (
                    DiagnosticKind::DomainMismatch,
                    by_name.get(target.as_str()).map_or(m.name.1, |v| v.name.1),
                ),
                ModelError::ValueOutOfDomain { .. } => (DiagnosticKind::DomainMismatch, m.name.1),
                ModelError::InvalidToken(_) => (DiagnosticKind::SyntaxError, m.name.1),
                _ => (DiagnosticKind::InvalidModel, m.name.1),
            };
            diag(diags, kind, span, format!("model `{}`: {err}", m.name.0));
            return None;
        }
    };

    let mut contexts: Vec<NamedContext> = Vec::new();
    for c in &m.contexts {
        if contexts.iter().any(|o| o.name == c.name.0) {
            diag(
                diags,
                DiagnosticKind::DuplicateName,
                c.name.1,
                format!(
                    "context `{}` is declared twice in model `{}`",
                    c.name.0, m.name.0
                ),
            );
            continue;
        }
        if let Some(ctx) = resolve_context(&model, c, diags) {
            contexts.push(NamedContext {
                name: c.name.0.clone(),
                context: ctx,
            });
        }
    }
    (diags.len() == before).then(|| ModelDecl {
        name: m.name.0.clone(),
        model,
        contexts,
    })
}

fn resolve_context(
    model: &CausalModel,
    c: &RawContext,
    diags: &mut Vec<Diagnostic>,
) -> Option<Context> {
    let sig = model.signature();
    let before = diags.len();
    let mut pairs = Vec::new();
    for ((var, vspan), (value, valspan)) in &c.pairs {
        let Some(id) = sig.lookup(var) else {
            diag(
                diags,
                DiagnosticKind::UndeclaredVariable,
                *vspan,
                format!("`{var}` is not declared"),
            );
            continue;
        };
        if sig.kind(id) != VarKind::Exogenous {
            diag(
                diags,
                DiagnosticKind::InvalidModel,
                *vspan,
                format!("`{var}` is endogenous; contexts set exogenous variables only"),
            );
            continue;
        }
        if pairs.iter().any(|&(v, _)| v == id) {
            diag(
                diags,
                DiagnosticKind::DuplicateName,
                *vspan,
                format!("`{var}` is set twice in context `{}`", c.name.0),
            );
            continue;
        }
        match sig.domain(id).index_of(value) {
            Some(ix) => pairs.push((id, ix)),
            None => diag(
                diags,
                DiagnosticKind::DomainMismatch,
                *valspan,
                format!("`{value}` is not in the domain of `{var}`"),
            ),
        }
    }
    if diags.len() > before {
        return None;
    }
    match Context::new(sig, pairs) {
        Ok(ctx) => Some(ctx),
        Err(err) => {
            diag(
                diags,
                DiagnosticKind::InvalidModel,
                c.name.1,
                format!("context `{}`: {err}", c.name.0),
            );
            None
        }
    }
}

fn resolve_query(
    q: &RawQuery,
    doc: &ModelDocument,
    failed_models: &HashSet<String>,
    diags: &mut Vec<Diagnostic>,
) -> Option<Query> {
    let Some(decl) = doc.model(&q.model.0) else {
        if !failed_models.contains(&q.model.0) {
            diag(
                diags,
                DiagnosticKind::UndeclaredName,
                q.model.1,
                format!("no model named `{}`", q.model.0),
            );
        }
        return None;
    };
    let sig = decl.model.signature();
    let mut ok = true;
    if decl.context(&q.context.0).is_none() {
        diag(
            diags,
            DiagnosticKind::UndeclaredName,
            q.context.1,
            format!(
                "model `{}` has no context named `{}`",
                q.model.0, q.context.0
            ),
        );
        ok = false;
    }
    let mut literal = |((var, vspan), (value, valspan)): &(Word, Word)| {
        let Some(id) = sig.lookup(var) else {
            diag(
                diags,
                DiagnosticKind::UndeclaredVariable,
                *vspan,
                format!("`{var}` is not declared in model `{}`", q.model.0),
            );
            return None;
        };
        match sig.domain(id).index_of(value) {
            Some(ix) => Some(crate::model::Literal::new(id, ix)),
            None => {
                diag(
                    diags,
                    DiagnosticKind::DomainMismatch,
                    *valspan,
                    format!("`{value}` is not in the domain of `{var}`"),
                );
                None
            }
        }
    };
    let cause = literal(&q.cause);
    let effect = literal(&q.effect);
    if !ok {
        return None;
    }
    Some(Query {
        definition: q.def,
        cause: cause?,
        effect: effect?,
        model: q.model.0.clone(),
        context: q.context.0.clone(),
    })
}
