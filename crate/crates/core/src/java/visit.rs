//! Depth-first walker over the Java AST.
//!
//! Each `visit_*` method defaults to the matching `walk_*` function, so an
//! implementor overrides only the nodes it cares about and calls `walk_*`
//! to keep descending. Inner declarations are split by how they are reached
//! so visitors can tell body members from local and anonymous classes.

use super::ast::*;

pub trait Visitor<'ast>: Sized {
    fn visit_declaration(&mut self, decl: &'ast Declaration) {
        walk_declaration(self, decl);
    }

    fn visit_nested_declaration(&mut self, decl: &'ast Declaration) {
        self.visit_declaration(decl);
    }

    fn visit_local_declaration(&mut self, decl: &'ast Declaration) {
        self.visit_declaration(decl);
    }

    fn visit_anonymous_declaration(&mut self, decl: &'ast Declaration) {
        self.visit_declaration(decl);
    }

    fn visit_field(&mut self, field: &'ast Field) {
        walk_field(self, field);
    }

    fn visit_method(&mut self, method: &'ast Method) {
        walk_method(self, method);
    }

    fn visit_initializer(&mut self, block: &'ast Statement) {
        self.visit_statement(block);
    }

    fn visit_statement(&mut self, stmt: &'ast Statement) {
        walk_statement(self, stmt);
    }

    fn visit_expression(&mut self, expr: &'ast Expression) {
        walk_expression(self, expr);
    }
}

pub fn walk_declaration<'ast, V: Visitor<'ast>>(visitor: &mut V, decl: &'ast Declaration) {
    for field in &decl.fields {
        visitor.visit_field(field);
    }
    for method in &decl.methods {
        visitor.visit_method(method);
    }
    for block in &decl.initializers {
        visitor.visit_initializer(block);
    }
    for nested in &decl.nested_declarations {
        visitor.visit_nested_declaration(nested);
    }
}

pub fn walk_field<'ast, V: Visitor<'ast>>(visitor: &mut V, field: &'ast Field) {
    if let Some(init) = &field.initializer {
        visitor.visit_expression(init);
    }
}

pub fn walk_method<'ast, V: Visitor<'ast>>(visitor: &mut V, method: &'ast Method) {
    if let Some(body) = &method.body {
        visitor.visit_statement(body);
    }
}

pub fn walk_statement<'ast, V: Visitor<'ast>>(visitor: &mut V, stmt: &'ast Statement) {
    if let Some(local) = &stmt.local_declaration {
        visitor.visit_local_declaration(local);
    }
    for expr in &stmt.expressions {
        visitor.visit_expression(expr);
    }
    for child in &stmt.children {
        visitor.visit_statement(child);
    }
}

pub fn walk_expression<'ast, V: Visitor<'ast>>(visitor: &mut V, expr: &'ast Expression) {
    for child in &expr.children {
        visitor.visit_expression(child);
    }
    for stmt in &expr.statements {
        visitor.visit_statement(stmt);
    }
    if let Some(anon) = &expr.anonymous_declaration {
        visitor.visit_anonymous_declaration(anon);
    }
}
