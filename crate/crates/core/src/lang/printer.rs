use std::fmt::Write;

use super::ModelDocument;
use crate::model::VarKind;

/// Canonical text for `doc`: models in order, variables in declaration
/// order, contexts after the variables, then queries.
pub fn print_document(doc: &ModelDocument) -> String {
    let mut out = String::new();
    for (i, decl) in doc.models.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let sig = decl.model.signature();
        let _ = writeln!(out, "model {} {{", decl.name);
        for id in sig.ids() {
            let var = sig.var(id);
            let domain = var.domain.values().join(", ");
            match var.kind {
                VarKind::Exogenous => {
                    let _ = writeln!(out, "  exo {} : {{{domain}}}", var.name);
                }
                VarKind::Endogenous => {
                    let expr = decl.model.mechanism(id).expect("endogenous").expr();
                    let _ = writeln!(out, "  var {} : {{{domain}}} = {expr}", var.name);
                }
            }
        }
        for ctx in &decl.contexts {
            let pairs: Vec<String> = ctx
                .context
                .values()
                .iter()
                .map(|&(v, x)| format!("{} = {}", sig.name(v), sig.domain(v).token(x)))
                .collect();
            if pairs.is_empty() {
                let _ = writeln!(out, "  context {} {{ }}", ctx.name);
            } else {
                let _ = writeln!(out, "  context {} {{ {} }}", ctx.name, pairs.join(", "));
            }
        }
        out.push_str("}\n");
    }
    if !doc.queries.is_empty() && !doc.models.is_empty() {
        out.push('\n');
    }
    for q in &doc.queries {
        let sig = doc
            .model(&q.model)
            .expect("query names a declared model")
            .model
            .signature();
        let _ = writeln!(
            out,
            "query {} cause {} effect {} in {} given {}",
            q.definition,
            sig.show(q.cause),
            sig.show(q.effect),
            q.model,
            q.context
        );
    }
    out
}
