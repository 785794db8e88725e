use std::sync::Arc;

use super::expr::Expr;
use super::signature::{Assignment, Context, Domain, Literal, Signature, VarId, VarKind, Variable};
use super::ModelError;

/// Upper bound on the number of input combinations a single mechanism may
/// range over.
pub const MAX_TABLE_SIZE: usize = 1 << 20;

/// A structural equation: the expression as written plus its compiled
/// function table over the extensional parents of the target.
#[derive(Debug, Clone)]
pub struct Mechanism {
    target: VarId,
    expr: Expr,
    inputs: Vec<VarId>,
    strides: Vec<usize>,
    table: Vec<u16>,
}

impl Mechanism {
    fn compile(sig: &Signature, target: VarId, expr: Expr) -> Result<Self, ModelError> {
        let target_name = sig.name(target);
        let mut refs = Vec::new();
        for name in expr.references() {
            let id = sig.id(name)?;
            if id == target {
                return Err(ModelError::SelfReference(target_name.to_string()));
            }
            refs.push(id);
        }
        refs.sort();

        let domain_of = |n: &str| sig.lookup(n).map(|id| sig.domain(id).values());
        let ill_typed = |reason: String| ModelError::IllTypedMechanism {
            target: target_name.to_string(),
            reason,
        };
        let tokens = expr
            .output_tokens(&domain_of)
            .map_err(|e| ill_typed(e.to_string()))?;
        let target_domain = sig.domain(target);
        if let Some(bad) = tokens.iter().find(|t| target_domain.index_of(t).is_none()) {
            return Err(ill_typed(format!(
                "may produce `{bad}`, outside its domain"
            )));
        }

        let sizes: Vec<usize> = refs.iter().map(|&id| sig.domain(id).len()).collect();
        let total = sizes
            .iter()
            .try_fold(1usize, |acc, &s| {
                acc.checked_mul(s).filter(|&t| t <= MAX_TABLE_SIZE)
            })
            .ok_or_else(|| ModelError::MechanismTooLarge(target_name.to_string()))?;
        let strides = strides_for(&sizes);

        let names: Vec<&str> = refs.iter().map(|&id| sig.name(id)).collect();
        let mut digits = vec![0usize; refs.len()];
        let mut full = Vec::with_capacity(total);
        for idx in 0..total {
            decode(idx, &sizes, &mut digits);
            let lookup = |n: &str| {
                let pos = names
                    .iter()
                    .position(|&m| m == n)
                    .expect("referenced variable");
                sig.domain(refs[pos]).token(digits[pos])
            };
            let token = expr.eval(&lookup);
            let value = target_domain.index_of(token).expect("type-checked output");
            full.push(value as u16);
        }

        // A referenced variable is a parent iff changing it alone can change
        // the output somewhere.
        let relevant: Vec<bool> = (0..refs.len())
            .map(|i| {
                (0..total).any(|idx| {
                    (idx / strides[i]).is_multiple_of(sizes[i])
                        && (1..sizes[i]).any(|k| full[idx + k * strides[i]] != full[idx])
                })
            })
            .collect();

        let inputs: Vec<VarId> = refs
            .iter()
            .zip(&relevant)
            .filter_map(|(&id, &keep)| keep.then_some(id))
            .collect();
        let kept: Vec<usize> = (0..refs.len()).filter(|&i| relevant[i]).collect();
        let in_sizes: Vec<usize> = kept.iter().map(|&i| sizes[i]).collect();
        let in_strides = strides_for(&in_sizes);
        let in_total: usize = in_sizes.iter().product();
        let mut table = Vec::with_capacity(in_total);
        let mut in_digits = vec![0usize; kept.len()];
        for idx in 0..in_total {
            decode(idx, &in_sizes, &mut in_digits);
            let full_idx: usize = kept
                .iter()
                .zip(&in_digits)
                .map(|(&i, &d)| d * strides[i])
                .sum();
            table.push(full[full_idx]);
        }

        Ok(Mechanism {
            target,
            expr,
            inputs,
            strides: in_strides,
            table,
        })
    }

    fn constant(target: VarId, domain: &Domain, value: usize) -> Self {
        Mechanism {
            target,
            expr: Expr::constant(domain.token(value)),
            inputs: Vec::new(),
            strides: Vec::new(),
            table: vec![value as u16],
        }
    }

    pub fn target(&self) -> VarId {
        self.target
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    /// Extensional parents (exogenous included), ascending by id.
    pub fn parents(&self) -> &[VarId] {
        &self.inputs
    }

    /// Output value given a lookup for each parent.
    #[inline]
    pub fn eval_with(&self, mut value_of: impl FnMut(VarId) -> usize) -> usize {
        let idx: usize = self
            .inputs
            .iter()
            .zip(&self.strides)
            .map(|(&id, &s)| value_of(id) * s)
            .sum();
        self.table[idx] as usize
    }

    /// Output value given the parents' values, positionally as in
    /// [`Mechanism::parents`].
    #[inline]
    pub fn eval_inputs(&self, inputs: &[usize]) -> usize {
        let idx: usize = inputs.iter().zip(&self.strides).map(|(&v, &s)| v * s).sum();
        self.table[idx] as usize
    }

    /// Output value given values for all variables, indexed by id.
    #[inline]
    pub fn eval(&self, values: &[usize]) -> usize {
        self.eval_with(|id| values[id.0])
    }
}

fn strides_for(sizes: &[usize]) -> Vec<usize> {
    let mut acc = 1;
    sizes
        .iter()
        .map(|&s| {
            let stride = acc;
            acc *= s;
            stride
        })
        .collect()
}

fn decode(mut idx: usize, sizes: &[usize], digits: &mut [usize]) {
    for (d, &s) in digits.iter_mut().zip(sizes) {
        *d = idx % s;
        idx /= s;
    }
}

/// An acyclic causal model. Cheap to clone; interventions share untouched
/// mechanisms with the original.
#[derive(Debug, Clone)]
pub struct CausalModel {
    sig: Arc<Signature>,
    mechanisms: Vec<Option<Arc<Mechanism>>>,
    order: Arc<[VarId]>,
}

impl PartialEq for CausalModel {
    fn eq(&self, other: &Self) -> bool {
        self.sig == other.sig
            && self
                .mechanisms
                .iter()
                .zip(&other.mechanisms)
                .all(|(a, b)| a.as_ref().map(|m| &m.expr) == b.as_ref().map(|m| &m.expr))
    }
}

impl Eq for CausalModel {}

impl CausalModel {
    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    /// Endogenous variables in an order compatible with the parent relation.
    pub fn topological_order(&self) -> &[VarId] {
        &self.order
    }

    pub fn mechanism(&self, var: VarId) -> Option<&Mechanism> {
        self.mechanisms.get(var.0).and_then(|m| m.as_deref())
    }

    fn endogenous_mechanism(&self, var: VarId) -> Result<&Mechanism, ModelError> {
        if var.0 >= self.sig.len() {
            return Err(ModelError::UnknownVariable(format!("#{}", var.0)));
        }
        self.mechanism(var)
            .ok_or_else(|| ModelError::NotEndogenous(self.sig.name(var).to_string()))
    }

    /// All extensional parents of `var`, exogenous ones included.
    pub fn parents(&self, var: VarId) -> Result<&[VarId], ModelError> {
        Ok(self.endogenous_mechanism(var)?.parents())
    }

    pub fn endogenous_parents(&self, var: VarId) -> Result<Vec<VarId>, ModelError> {
        Ok(self
            .parents(var)?
            .iter()
            .copied()
            .filter(|&p| self.sig.is_endogenous(p))
            .collect())
    }

    /// `M_{X⃗←x⃗}`: each intervened variable's mechanism becomes a constant.
    pub fn intervene(&self, iv: &Assignment) -> Result<CausalModel, ModelError> {
        let mut mechanisms = self.mechanisms.clone();
        for lit in iv.literals() {
            self.endogenous_mechanism(lit.var)?;
            let domain = self.sig.domain(lit.var);
            if lit.value >= domain.len() {
                return Err(ModelError::ValueOutOfDomain {
                    variable: self.sig.name(lit.var).to_string(),
                    value: format!("#{}", lit.value),
                });
            }
            mechanisms[lit.var.0] = Some(Arc::new(Mechanism::constant(lit.var, domain, lit.value)));
        }
        // Removing parent edges keeps the old order valid.
        Ok(CausalModel {
            sig: Arc::clone(&self.sig),
            mechanisms,
            order: Arc::clone(&self.order),
        })
    }

    /// Single-literal intervention `[X ← x]`.
    pub fn intervene_one(&self, lit: Literal) -> Result<CausalModel, ModelError> {
        self.intervene(&Assignment::new([lit])?)
    }

    /// Checks that `ctx` assigns exactly this model's exogenous variables.
    pub fn check_context(&self, ctx: &Context) -> Result<(), ModelError> {
        let exo: Vec<VarId> = self.sig.exogenous().collect();
        let ok = ctx.values().len() == exo.len()
            && ctx
                .values()
                .iter()
                .zip(&exo)
                .all(|(&(var, value), &id)| var == id && value < self.sig.domain(id).len());
        if ok {
            Ok(())
        } else {
            Err(ModelError::ForeignContext)
        }
    }

    /// The unique solution in context `ctx`. The context must belong to this
    /// model (see [`CausalModel::check_context`]).
    pub fn solve(&self, ctx: &Context) -> Solution {
        let mut values = vec![0usize; self.sig.len()];
        for &(var, value) in ctx.values() {
            values[var.0] = value;
        }
        for &var in self.order.iter() {
            let mech = self.mechanisms[var.0].as_ref().expect("endogenous");
            values[var.0] = mech.eval(&values);
        }
        Solution { values }
    }
}

/// Values of every variable, indexed by [`VarId`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Solution {
    values: Vec<usize>,
}

impl Solution {
    pub fn get(&self, var: VarId) -> usize {
        self.values[var.0]
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn literal(&self, var: VarId) -> Literal {
        Literal::new(var, self.values[var.0])
    }

    pub fn holds(&self, lit: Literal) -> bool {
        self.values[lit.var.0] == lit.value
    }
}

#[derive(Debug, Clone)]
struct Decl {
    name: String,
    kind: VarKind,
    values: Vec<String>,
    expr: Option<Expr>,
}

/// Collects declarations and validates them into a [`CausalModel`].
#[derive(Debug, Clone, Default)]
pub struct ModelBuilder {
    decls: Vec<Decl>,
}

impl ModelBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn exogenous<I, S>(&mut self, name: impl Into<String>, values: I) -> &mut Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.decls.push(Decl {
            name: name.into(),
            kind: VarKind::Exogenous,
            values: values.into_iter().map(Into::into).collect(),
            expr: None,
        });
        self
    }

    pub fn endogenous<I, S>(&mut self, name: impl Into<String>, values: I, expr: Expr) -> &mut Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.decls.push(Decl {
            name: name.into(),
            kind: VarKind::Endogenous,
            values: values.into_iter().map(Into::into).collect(),
            expr: Some(expr),
        });
        self
    }

    /// Validates the declarations: domains, names, typing and totality of
    /// every mechanism, and acyclicity of the extensional parent relation.
    pub fn build(&self) -> Result<CausalModel, ModelError> {
        let vars = self
            .decls
            .iter()
            .map(|d| {
                Ok(Variable {
                    name: d.name.clone(),
                    kind: d.kind,
                    domain: Domain::new(d.values.iter().cloned())?,
                })
            })
            .collect::<Result<Vec<_>, ModelError>>()?;
        let sig = Signature::new(vars)?;

        let mut mechanisms = Vec::with_capacity(self.decls.len());
        for (i, decl) in self.decls.iter().enumerate() {
            let id = VarId(i);
            mechanisms.push(match (&decl.kind, &decl.expr) {
                (VarKind::Exogenous, _) => None,
                (VarKind::Endogenous, Some(expr)) => {
                    Some(Arc::new(Mechanism::compile(&sig, id, expr.clone())?))
                }
                (VarKind::Endogenous, None) => {
                    return Err(ModelError::MissingMechanism(decl.name.clone()))
                }
            });
        }
        let order = topological_order(&sig, &mechanisms)?;
        Ok(CausalModel {
            sig: Arc::new(sig),
            mechanisms,
            order: order.into(),
        })
    }
}

/// Kahn's algorithm; among ready variables the earliest declared goes first.
fn topological_order(
    sig: &Signature,
    mechanisms: &[Option<Arc<Mechanism>>],
) -> Result<Vec<VarId>, ModelError> {
    let endo_parents = |id: VarId| -> Vec<VarId> {
        mechanisms[id.0]
            .as_ref()
            .map(|m| {
                m.parents()
                    .iter()
                    .copied()
                    .filter(|&p| sig.is_endogenous(p))
                    .collect()
            })
            .unwrap_or_default()
    };
    let endo: Vec<VarId> = sig.endogenous().collect();
    let mut placed = vec![false; sig.len()];
    let mut order = Vec::with_capacity(endo.len());
    while order.len() < endo.len() {
        let next = endo
            .iter()
            .copied()
            .find(|&id| !placed[id.0] && endo_parents(id).iter().all(|p| placed[p.0]));
        match next {
            Some(id) => {
                placed[id.0] = true;
                order.push(id);
            }
            None => {
                // Every unplaced variable has an unplaced parent; walk parents
                // until one repeats.
                let start = endo
                    .iter()
                    .copied()
                    .find(|id| !placed[id.0])
                    .expect("unplaced");
                let mut walk = vec![start];
                loop {
                    let cur = *walk.last().expect("non-empty");
                    let parent = endo_parents(cur)
                        .into_iter()
                        .find(|p| !placed[p.0])
                        .expect("unplaced parent");
                    if let Some(pos) = walk.iter().position(|&w| w == parent) {
                        let mut cycle: Vec<String> = walk[pos..]
                            .iter()
                            .rev()
                            .map(|&w| sig.name(w).to_string())
                            .collect();
                        cycle.push(cycle[0].clone());
                        return Err(ModelError::CyclicModel { cycle });
                    }
                    walk.push(parent);
                }
            }
        }
    }
    Ok(order)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn backup() -> CausalModel {
        ModelBuilder::new()
            .exogenous("U", ["0", "1"])
            .endogenous("Trainee", ["0", "1"], Expr::var("U"))
            .endogenous("Supervisor", ["0", "1"], Expr::not(Expr::var("Trainee")))
            .endogenous(
                "Victim",
                ["0", "1"],
                Expr::or(Expr::var("Trainee"), Expr::var("Supervisor")),
            )
            .build()
            .unwrap()
    }

    fn names(m: &CausalModel, ids: &[VarId]) -> Vec<String> {
        ids.iter()
            .map(|&i| m.signature().name(i).to_string())
            .collect()
    }

    #[test]
    fn backup_order_and_parents() {
        let m = backup();
        assert_eq!(
            names(&m, m.topological_order()),
            ["Trainee", "Supervisor", "Victim"]
        );
        let victim = m.signature().id("Victim").unwrap();
        assert_eq!(
            names(&m, m.parents(victim).unwrap()),
            ["Trainee", "Supervisor"]
        );
    }

    #[test]
    fn declaration_order_does_not_constrain_causal_order() {
        let m = ModelBuilder::new()
            .endogenous(
                "Victim",
                ["0", "1"],
                Expr::or(Expr::var("Trainee"), Expr::var("Supervisor")),
            )
            .endogenous("Supervisor", ["0", "1"], Expr::not(Expr::var("Trainee")))
            .endogenous("Trainee", ["0", "1"], Expr::constant("1"))
            .build()
            .unwrap();
        assert_eq!(
            names(&m, m.topological_order()),
            ["Trainee", "Supervisor", "Victim"]
        );
    }

    #[test]
    fn single_constant_variable() {
        let m = ModelBuilder::new()
            .endogenous("X", ["0", "1"], Expr::constant("1"))
            .build()
            .unwrap();
        assert_eq!(names(&m, m.topological_order()), ["X"]);
        let ctx = Context::new(m.signature(), []).unwrap();
        assert_eq!(m.solve(&ctx).values(), &[1]);
    }

    #[test]
    fn two_cycle_is_rejected() {
        let err = ModelBuilder::new()
            .endogenous("A", ["0", "1"], Expr::var("B"))
            .endogenous("B", ["0", "1"], Expr::var("A"))
            .build()
            .unwrap_err();
        match err {
            ModelError::CyclicModel { cycle } => {
                assert_eq!(cycle.len(), 3);
                assert_eq!(cycle.first(), cycle.last());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn syntactic_cycle_through_irrelevant_reference_is_fine() {
        // X mentions B but does not depend on it.
        let m = ModelBuilder::new()
            .exogenous("U", ["0", "1"])
            .endogenous("A", ["0", "1"], Expr::var("U"))
            .endogenous(
                "X",
                ["0", "1"],
                Expr::or(
                    Expr::and(Expr::var("B"), Expr::not(Expr::var("B"))),
                    Expr::var("A"),
                ),
            )
            .endogenous("B", ["0", "1"], Expr::var("X"))
            .build()
            .unwrap();
        let x = m.signature().id("X").unwrap();
        assert_eq!(names(&m, m.parents(x).unwrap()), ["A"]);
    }

    #[test]
    fn parents_of_mixed_formula() {
        let m = ModelBuilder::new()
            .endogenous("A", ["0", "1"], Expr::constant("0"))
            .endogenous("C", ["0", "1"], Expr::constant("0"))
            .endogenous("D", ["0", "1"], Expr::constant("0"))
            .endogenous(
                "E",
                ["0", "1"],
                Expr::or(Expr::and(Expr::var("C"), Expr::var("D")), Expr::var("A")),
            )
            .build()
            .unwrap();
        let e = m.signature().id("E").unwrap();
        assert_eq!(names(&m, m.parents(e).unwrap()), ["A", "C", "D"]);
    }

    #[test]
    fn mechanism_errors() {
        let self_ref = ModelBuilder::new()
            .endogenous("X", ["0", "1"], Expr::not(Expr::var("X")))
            .build();
        assert_eq!(self_ref.unwrap_err(), ModelError::SelfReference("X".into()));

        let undeclared = ModelBuilder::new()
            .endogenous("X", ["0", "1"], Expr::var("Y"))
            .build();
        assert_eq!(
            undeclared.unwrap_err(),
            ModelError::UnknownVariable("Y".into())
        );

        let out_of_domain = ModelBuilder::new()
            .endogenous("X", ["0", "1"], Expr::constant("2"))
            .build();
        assert!(matches!(
            out_of_domain,
            Err(ModelError::IllTypedMechanism { .. })
        ));

        let non_boolean = ModelBuilder::new()
            .endogenous("T", ["a", "b"], Expr::constant("a"))
            .endogenous("X", ["0", "1"], Expr::not(Expr::var("T")))
            .build();
        assert!(matches!(
            non_boolean,
            Err(ModelError::IllTypedMechanism { .. })
        ));

        let no_endo = ModelBuilder::new().exogenous("U", ["0"]).build();
        assert_eq!(no_endo.unwrap_err(), ModelError::NoEndogenous);
    }

    #[test]
    fn solve_backup_shot() {
        let m = backup();
        let ctx = Context::from_names(m.signature(), [("U", "1")]).unwrap();
        let sol = m.solve(&ctx);
        let sig = m.signature();
        let get = |n: &str| {
            sig.domain(sig.id(n).unwrap())
                .token(sol.get(sig.id(n).unwrap()))
                .to_string()
        };
        assert_eq!(
            (get("Trainee"), get("Supervisor"), get("Victim")),
            ("1".into(), "0".into(), "1".into())
        );
    }

    #[test]
    fn intervention_replaces_mechanism_only() {
        let m = backup();
        let sig = m.signature();
        let t0 = sig.literal("Trainee", "0").unwrap();
        let mi = m.intervene_one(t0).unwrap();
        assert_eq!(mi.mechanism(t0.var).unwrap().expr(), &Expr::constant("0"));
        // The original is untouched.
        assert_eq!(m.mechanism(t0.var).unwrap().expr(), &Expr::var("U"));
        assert_eq!(m.intervene(&Assignment::empty()).unwrap(), m);

        let u = sig.literal("U", "1").unwrap();
        assert!(matches!(
            m.intervene_one(u),
            Err(ModelError::NotEndogenous(_))
        ));
        let bad = Literal::new(t0.var, 7);
        assert!(matches!(
            m.intervene_one(bad),
            Err(ModelError::ValueOutOfDomain { .. })
        ));
    }

    #[test]
    fn context_must_be_total() {
        let m = backup();
        assert_eq!(
            Context::from_names(m.signature(), []),
            Err(ModelError::IncompleteContext("U".into()))
        );
        assert!(matches!(
            Context::from_names(m.signature(), [("Trainee", "1"), ("U", "1")]),
            Err(ModelError::NotExogenous(_))
        ));
    }
}
