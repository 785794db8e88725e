use std::collections::HashMap;
use std::fmt;

use super::ModelError;

/// Index of a variable within its [`Signature`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(pub(crate) usize);

impl VarId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarKind {
    Exogenous,
    Endogenous,
}

/// Ordered finite set of value tokens. Declaration order is significant: it
/// fixes enumeration order everywhere.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Domain {
    values: Vec<String>,
}

impl Domain {
    pub fn new<I, S>(values: I) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let values: Vec<String> = values.into_iter().map(Into::into).collect();
        if values.is_empty() {
            return Err(ModelError::EmptyDomain);
        }
        for (i, v) in values.iter().enumerate() {
            if !is_value_token(v) {
                return Err(ModelError::InvalidToken(v.clone()));
            }
            if values[..i].contains(v) {
                return Err(ModelError::DuplicateValue(v.clone()));
            }
        }
        Ok(Domain { values })
    }

    pub fn boolean() -> Self {
        Domain {
            values: vec!["0".into(), "1".into()],
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[String] {
        &self.values
    }

    pub fn token(&self, index: usize) -> &str {
        &self.values[index]
    }

    pub fn index_of(&self, token: &str) -> Option<usize> {
        self.values.iter().position(|v| v == token)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub kind: VarKind,
    pub domain: Domain,
}

/// Exogenous and endogenous variables with their ranges, in declaration order.
#[derive(Debug, Clone)]
pub struct Signature {
    vars: Vec<Variable>,
    by_name: HashMap<String, VarId>,
}

impl PartialEq for Signature {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars
    }
}

impl Eq for Signature {}

impl Signature {
    pub(crate) fn new(vars: Vec<Variable>) -> Result<Self, ModelError> {
        let mut by_name = HashMap::with_capacity(vars.len());
        for (i, v) in vars.iter().enumerate() {
            if !is_identifier(&v.name) {
                return Err(ModelError::InvalidToken(v.name.clone()));
            }
            if by_name.insert(v.name.clone(), VarId(i)).is_some() {
                return Err(ModelError::DuplicateVariable(v.name.clone()));
            }
        }
        if !vars.iter().any(|v| v.kind == VarKind::Endogenous) {
            return Err(ModelError::NoEndogenous);
        }
        Ok(Signature { vars, by_name })
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn variables(&self) -> &[Variable] {
        &self.vars
    }

    pub fn ids(&self) -> impl Iterator<Item = VarId> + '_ {
        (0..self.vars.len()).map(VarId)
    }

    pub fn exogenous(&self) -> impl Iterator<Item = VarId> + '_ {
        self.ids().filter(|&id| self.kind(id) == VarKind::Exogenous)
    }

    pub fn endogenous(&self) -> impl Iterator<Item = VarId> + '_ {
        self.ids()
            .filter(|&id| self.kind(id) == VarKind::Endogenous)
    }

    pub fn lookup(&self, name: &str) -> Option<VarId> {
        self.by_name.get(name).copied()
    }

    pub fn id(&self, name: &str) -> Result<VarId, ModelError> {
        self.lookup(name)
            .ok_or_else(|| ModelError::UnknownVariable(name.to_string()))
    }

    pub fn var(&self, id: VarId) -> &Variable {
        &self.vars[id.0]
    }

    pub fn name(&self, id: VarId) -> &str {
        &self.vars[id.0].name
    }

    pub fn kind(&self, id: VarId) -> VarKind {
        self.vars[id.0].kind
    }

    pub fn is_endogenous(&self, id: VarId) -> bool {
        self.kind(id) == VarKind::Endogenous
    }

    pub fn domain(&self, id: VarId) -> &Domain {
        &self.vars[id.0].domain
    }

    /// Resolves `name = value` into a literal.
    pub fn literal(&self, name: &str, value: &str) -> Result<Literal, ModelError> {
        let var = self.id(name)?;
        let value =
            self.domain(var)
                .index_of(value)
                .ok_or_else(|| ModelError::ValueOutOfDomain {
                    variable: name.to_string(),
                    value: value.to_string(),
                })?;
        Ok(Literal { var, value })
    }

    /// Parses `NAME=value`.
    pub fn parse_literal(&self, text: &str) -> Result<Literal, ModelError> {
        let (name, value) = text
            .split_once('=')
            .ok_or_else(|| ModelError::MalformedLiteral(text.to_string()))?;
        self.literal(name.trim(), value.trim())
    }

    pub fn show(&self, lit: Literal) -> LiteralDisplay<'_> {
        LiteralDisplay { sig: self, lit }
    }

    pub fn show_all<'a>(&'a self, lits: &'a [Literal]) -> LiteralsDisplay<'a> {
        LiteralsDisplay { sig: self, lits }
    }
}

/// `X = x` with `x` stored as an index into `X`'s domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub var: VarId,
    pub value: usize,
}

impl Literal {
    pub fn new(var: VarId, value: usize) -> Self {
        Literal { var, value }
    }
}

pub struct LiteralDisplay<'a> {
    sig: &'a Signature,
    lit: Literal,
}

impl fmt::Display for LiteralDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}={}",
            self.sig.name(self.lit.var),
            self.sig.domain(self.lit.var).token(self.lit.value)
        )
    }
}

/// Comma-separated literals, no brackets.
pub struct LiteralsDisplay<'a> {
    sig: &'a Signature,
    lits: &'a [Literal],
}

impl fmt::Display for LiteralsDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, lit) in self.lits.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}", self.sig.show(*lit))?;
        }
        Ok(())
    }
}

/// A finite set of literals over pairwise distinct variables, kept sorted by
/// variable. Used for interventions, witnesses and sufficiency sets.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Assignment {
    literals: Vec<Literal>,
}

/// `X⃗ ← x⃗`.
pub type Intervention = Assignment;

impl Assignment {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new(literals: impl IntoIterator<Item = Literal>) -> Result<Self, ModelError> {
        let mut literals: Vec<Literal> = literals.into_iter().collect();
        literals.sort();
        for pair in literals.windows(2) {
            if pair[0].var == pair[1].var {
                return Err(ModelError::RepeatedVariable(pair[0].var));
            }
        }
        Ok(Assignment { literals })
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn contains_var(&self, var: VarId) -> bool {
        self.get(var).is_some()
    }

    pub fn get(&self, var: VarId) -> Option<usize> {
        self.literals
            .binary_search_by_key(&var, |l| l.var)
            .ok()
            .map(|i| self.literals[i].value)
    }

    /// Adds `lit`, failing if its variable is already assigned.
    pub fn with(&self, lit: Literal) -> Result<Self, ModelError> {
        Self::new(self.literals.iter().copied().chain(std::iter::once(lit)))
    }

    pub fn union(&self, other: &Assignment) -> Result<Self, ModelError> {
        Self::new(self.literals.iter().chain(other.literals()).copied())
    }
}

/// One value for every exogenous variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Context {
    values: Vec<(VarId, usize)>,
}

impl Context {
    pub fn new(
        sig: &Signature,
        values: impl IntoIterator<Item = (VarId, usize)>,
    ) -> Result<Self, ModelError> {
        let mut values: Vec<(VarId, usize)> = values.into_iter().collect();
        values.sort();
        for pair in values.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(ModelError::RepeatedVariable(pair[0].0));
            }
        }
        for &(var, value) in &values {
            if var.0 >= sig.len() {
                return Err(ModelError::UnknownVariable(format!("#{}", var.0)));
            }
            if sig.is_endogenous(var) {
                return Err(ModelError::NotExogenous(sig.name(var).to_string()));
            }
            if value >= sig.domain(var).len() {
                return Err(ModelError::ValueOutOfDomain {
                    variable: sig.name(var).to_string(),
                    value: format!("#{value}"),
                });
            }
        }
        if let Some(missing) = sig
            .exogenous()
            .find(|id| values.binary_search_by_key(id, |p| p.0).is_err())
        {
            return Err(ModelError::IncompleteContext(sig.name(missing).to_string()));
        }
        Ok(Context { values })
    }

    /// Builds a context from `(name, token)` pairs.
    pub fn from_names<'a>(
        sig: &Signature,
        pairs: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Self, ModelError> {
        let resolved = pairs
            .into_iter()
            .map(|(n, v)| sig.literal(n, v).map(|l| (l.var, l.value)))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(sig, resolved)
    }

    pub fn values(&self) -> &[(VarId, usize)] {
        &self.values
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub(crate) fn is_value_token(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}
