//! Java source model, parser and traversal.

mod ast;
mod parse;
pub mod visit;

pub use ast::*;
pub use parse::parse_compilation_unit;

/// Every declaration in `unit` at every depth (nested, local, anonymous),
/// in preorder with siblings in source order.
pub fn enumerate_class_declarations(unit: &CompilationUnit) -> Vec<&Declaration> {
    fn push<'a>(decl: &'a Declaration, out: &mut Vec<&'a Declaration>) {
        out.push(decl);
        for inner in decl.inner_declarations() {
            push(inner, out);
        }
    }
    let mut out = Vec::new();
    for decl in &unit.declarations {
        push(decl, &mut out);
    }
    out
}

#[cfg(test)]
mod tests;
