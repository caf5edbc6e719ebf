//! Java frontend: tree-sitter concrete syntax tree to [`CompilationUnit`].

use std::cell::RefCell;
use std::collections::HashMap;

use tree_sitter::{Node, Parser};

use super::ast::*;

thread_local! {
    static PARSER: RefCell<Option<Parser>> = const { RefCell::new(None) };
}

const TYPE_DECLARATIONS: &[&str] = &[
    "class_declaration",
    "interface_declaration",
    "enum_declaration",
    "annotation_type_declaration",
    "record_declaration",
];

const CONTROL_STATEMENTS: &[&str] = &[
    "if_statement",
    "while_statement",
    "for_statement",
    "enhanced_for_statement",
    "do_statement",
    "try_statement",
    "try_with_resources_statement",
    "synchronized_statement",
    "labeled_statement",
    "switch_expression",
];

const OTHER_STATEMENTS: &[&str] = &[
    "return_statement",
    "throw_statement",
    "break_statement",
    "continue_statement",
    "yield_statement",
    "assert_statement",
];

/// Parents under which a `switch_expression` is a statement rather than a value.
const STATEMENT_CONTAINERS: &[&str] = &[
    "block",
    "constructor_body",
    "switch_block_statement_group",
    "labeled_statement",
    "if_statement",
    "while_statement",
    "for_statement",
    "enhanced_for_statement",
    "do_statement",
];

const EXPRESSIONS: &[&str] = &[
    "assignment_expression",
    "binary_expression",
    "cast_expression",
    "instanceof_expression",
    "lambda_expression",
    "switch_expression",
    "ternary_expression",
    "unary_expression",
    "update_expression",
    "array_access",
    "array_creation_expression",
    "array_initializer",
    "class_literal",
    "field_access",
    "method_invocation",
    "method_reference",
    "object_creation_expression",
    "parenthesized_expression",
    "template_expression",
];

/// Parses one Java source file. Never fails: syntax errors come back as
/// [`ParseOutcome::Failed`] with the position of the first error node.
pub fn parse_compilation_unit(source: &str, file_path: &str) -> ParseOutcome {
    let tree = PARSER.with(|cell| {
        let mut slot = cell.borrow_mut();
        let parser = slot.get_or_insert_with(|| {
            let mut parser = Parser::new();
            parser
                .set_language(&tree_sitter_java::LANGUAGE.into())
                .expect("bundled Java grammar matches the tree-sitter ABI");
            parser
        });
        parser.parse(source, None)
    });
    let Some(tree) = tree else {
        return ParseOutcome::Failed(Diagnostic {
            message: "parser produced no tree".into(),
            line: 1,
            column: 1,
        });
    };
    let root = tree.root_node();
    if root.has_error() {
        return ParseOutcome::Failed(first_error(root));
    }
    let builder = Builder {
        src: source.as_bytes(),
    };
    ParseOutcome::Parsed(builder.unit(root, file_path))
}

fn first_error(root: Node<'_>) -> Diagnostic {
    let mut stack = vec![root];
    while let Some(node) = stack.pop() {
        if node.is_error() || node.is_missing() {
            let pos = node.start_position();
            let message = if node.is_missing() {
                format!("missing `{}`", node.kind())
            } else {
                "syntax error".to_string()
            };
            return Diagnostic {
                message,
                line: pos.row + 1,
                column: pos.column + 1,
            };
        }
        if !node.has_error() {
            continue;
        }
        let mut cursor = node.walk();
        let children: Vec<_> = node.children(&mut cursor).collect();
        stack.extend(children.into_iter().rev());
    }
    let pos = root.start_position();
    Diagnostic {
        message: "syntax error".into(),
        line: pos.row + 1,
        column: pos.column + 1,
    }
}

/// Naming state of the declaration currently being built.
struct Scope {
    qualified_id: String,
    anonymous: usize,
    locals: HashMap<String, usize>,
}

impl Scope {
    fn new(qualified_id: String) -> Self {
        Scope {
            qualified_id,
            anonymous: 0,
            locals: HashMap::new(),
        }
    }

    fn next_anonymous(&mut self) -> (String, String) {
        self.anonymous += 1;
        let name = self.anonymous.to_string();
        let id = format!("{}${}", self.qualified_id, name);
        (name, id)
    }

    fn next_local(&mut self, name: &str) -> String {
        let n = self.locals.entry(name.to_string()).or_insert(0);
        *n += 1;
        format!("{}${}{}", self.qualified_id, n, name)
    }

    fn member(&self, name: &str) -> String {
        format!("{}${}", self.qualified_id, name)
    }
}

struct Builder<'s> {
    src: &'s [u8],
}

fn named_children<'t>(node: Node<'t>) -> Vec<Node<'t>> {
    let mut cursor = node.walk();
    node.named_children(&mut cursor).collect()
}

fn position(node: Node<'_>) -> Position {
    let p = node.start_position();
    Position {
        line: p.row + 1,
        column: p.column + 1,
    }
}

impl<'s> Builder<'s> {
    fn text(&self, node: Node<'_>) -> String {
        node.utf8_text(self.src).unwrap_or_default().to_string()
    }

    fn unit(&self, root: Node<'_>, file_path: &str) -> CompilationUnit {
        let mut package_name = String::new();
        let mut declarations = Vec::new();
        for child in named_children(root) {
            match child.kind() {
                "package_declaration" => {
                    if let Some(name) = named_children(child)
                        .into_iter()
                        .find(|n| matches!(n.kind(), "scoped_identifier" | "identifier"))
                    {
                        package_name = self.text(name);
                    }
                }
                kind if TYPE_DECLARATIONS.contains(&kind) => {
                    let name = self.decl_name(child);
                    let id = if package_name.is_empty() {
                        name
                    } else {
                        format!("{package_name}.{name}")
                    };
                    declarations.push(self.type_declaration(child, id));
                }
                // imports, module declarations and stray top-level statements
                _ => {}
            }
        }
        CompilationUnit {
            file_path: file_path.to_string(),
            package_name,
            declarations,
        }
    }

    fn decl_name(&self, node: Node<'_>) -> String {
        node.child_by_field_name("name")
            .map(|n| self.text(n))
            .unwrap_or_default()
    }

    fn type_declaration(&self, node: Node<'_>, qualified_id: String) -> Declaration {
        let kind = match node.kind() {
            "interface_declaration" => DeclarationKind::Interface,
            "enum_declaration" => DeclarationKind::Enum,
            "annotation_type_declaration" => DeclarationKind::Annotation,
            _ => DeclarationKind::Class,
        };
        let mut decl = Declaration {
            name: self.decl_name(node),
            kind,
            methods: Vec::new(),
            fields: Vec::new(),
            nested_declarations: Vec::new(),
            initializers: Vec::new(),
            parent_names: self.parent_names(node),
            qualified_id: qualified_id.clone(),
            position: position(node),
        };
        let mut scope = Scope::new(qualified_id);
        if node.kind() == "record_declaration" {
            // record components are implicit private fields
            if let Some(params) = node.child_by_field_name("parameters") {
                for param in named_children(params) {
                    if let Some(name) = param.child_by_field_name("name") {
                        decl.fields.push(Field {
                            name: self.text(name),
                            initializer: None,
                        });
                    }
                }
            }
        }
        if let Some(body) = node.child_by_field_name("body") {
            self.body(body, &mut decl, &mut scope);
        }
        decl
    }

    fn anonymous_declaration(
        &self,
        creation: Node<'_>,
        body: Node<'_>,
        (name, qualified_id): (String, String),
    ) -> Declaration {
        let parent_names = creation
            .child_by_field_name("type")
            .map(|t| vec![strip_generics(&self.text(t))])
            .unwrap_or_default();
        let mut decl = Declaration {
            name,
            kind: DeclarationKind::Anonymous,
            methods: Vec::new(),
            fields: Vec::new(),
            nested_declarations: Vec::new(),
            initializers: Vec::new(),
            parent_names,
            qualified_id: qualified_id.clone(),
            position: position(creation),
        };
        let mut inner = Scope::new(qualified_id);
        self.body(body, &mut decl, &mut inner);
        decl
    }

    fn parent_names(&self, node: Node<'_>) -> Vec<String> {
        let mut out = Vec::new();
        for child in named_children(node) {
            match child.kind() {
                "superclass" | "super_interfaces" | "extends_interfaces" => {
                    for ty in named_children(child) {
                        if ty.kind() == "type_list" {
                            for t in named_children(ty) {
                                out.push(strip_generics(&self.text(t)));
                            }
                        } else {
                            out.push(strip_generics(&self.text(ty)));
                        }
                    }
                }
                _ => {}
            }
        }
        out
    }

    fn body(&self, body: Node<'_>, decl: &mut Declaration, scope: &mut Scope) {
        for member in named_children(body) {
            match member.kind() {
                "field_declaration" | "constant_declaration" => {
                    let mut cursor = member.walk();
                    let declarators: Vec<_> = member
                        .children_by_field_name("declarator", &mut cursor)
                        .collect();
                    for declarator in declarators {
                        let name = declarator
                            .child_by_field_name("name")
                            .map(|n| self.text(n))
                            .unwrap_or_default();
                        let initializer = declarator
                            .child_by_field_name("value")
                            .map(|v| self.expression(v, scope));
                        decl.fields.push(Field { name, initializer });
                    }
                }
                "method_declaration"
                | "constructor_declaration"
                | "compact_constructor_declaration"
                | "annotation_type_element_declaration" => {
                    let name = member
                        .child_by_field_name("name")
                        .map(|n| self.text(n))
                        .unwrap_or_else(|| decl.name.clone());
                    let body = member
                        .child_by_field_name("body")
                        .map(|b| self.statement(b, scope));
                    decl.methods.push(Method { name, body });
                }
                "block" => decl.initializers.push(self.statement(member, scope)),
                "static_initializer" => {
                    for block in named_children(member) {
                        if block.kind() == "block" {
                            decl.initializers.push(self.statement(block, scope));
                        }
                    }
                }
                "enum_constant" => {
                    let name = self.decl_name(member);
                    let mut expr = Expression {
                        kind: "enum_constant".into(),
                        method_call_name: None,
                        anonymous_declaration: None,
                        children: Vec::new(),
                        statements: Vec::new(),
                    };
                    let class_body = member.child_by_field_name("body");
                    let reserved = class_body.map(|_| scope.next_anonymous());
                    if let Some(args) = member.child_by_field_name("arguments") {
                        self.collect(args, scope, &mut expr.statements, &mut expr.children);
                    }
                    if let (Some(body), Some(ids)) = (class_body, reserved) {
                        expr.anonymous_declaration =
                            Some(Box::new(self.anonymous_declaration(member, body, ids)));
                    }
                    decl.fields.push(Field {
                        name,
                        initializer: Some(expr),
                    });
                }
                "enum_body_declarations" => self.body(member, decl, scope),
                kind if TYPE_DECLARATIONS.contains(&kind) => {
                    let id = scope.member(&self.decl_name(member));
                    decl.nested_declarations
                        .push(self.type_declaration(member, id));
                }
                _ => {}
            }
        }
    }

    fn statement(&self, node: Node<'_>, scope: &mut Scope) -> Statement {
        let kind = node.kind();
        if TYPE_DECLARATIONS.contains(&kind) {
            let id = scope.next_local(&self.decl_name(node));
            return Statement {
                kind: StatementKind::DeclarationLocal,
                children: Vec::new(),
                expressions: Vec::new(),
                local_declaration: Some(Box::new(self.type_declaration(node, id))),
            };
        }
        let kind = match kind {
            "block" | "constructor_body" => StatementKind::Block,
            "local_variable_declaration" => StatementKind::DeclarationLocal,
            "expression_statement" | "explicit_constructor_invocation" => {
                StatementKind::Expression
            }
            k if CONTROL_STATEMENTS.contains(&k) => StatementKind::Control,
            _ => StatementKind::Other,
        };
        let mut stmt = Statement {
            kind,
            children: Vec::new(),
            expressions: Vec::new(),
            local_declaration: None,
        };
        self.collect(node, scope, &mut stmt.children, &mut stmt.expressions);
        stmt
    }

    fn expression(&self, node: Node<'_>, scope: &mut Scope) -> Expression {
        let mut expr = Expression {
            kind: node.kind().to_string(),
            method_call_name: None,
            anonymous_declaration: None,
            children: Vec::new(),
            statements: Vec::new(),
        };
        match node.kind() {
            "method_invocation" => {
                expr.method_call_name = node.child_by_field_name("name").map(|n| self.text(n));
                self.collect(node, scope, &mut expr.statements, &mut expr.children);
            }
            "object_creation_expression" => {
                let children = named_children(node);
                let class_body = children.iter().copied().find(|c| c.kind() == "class_body");
                // the outer `new` precedes anything in its argument list
                let reserved = class_body.map(|_| scope.next_anonymous());
                for child in children {
                    if child.kind() != "class_body" {
                        self.collect_one(node, child, scope, &mut expr.statements, &mut expr.children);
                    }
                }
                if let (Some(body), Some(ids)) = (class_body, reserved) {
                    expr.anonymous_declaration =
                        Some(Box::new(self.anonymous_declaration(node, body, ids)));
                }
            }
            _ => self.collect(node, scope, &mut expr.statements, &mut expr.children),
        }
        expr
    }

    /// Gathers statements and expressions below `node`, looking through
    /// structural nodes such as argument lists and catch clauses.
    fn collect(
        &self,
        node: Node<'_>,
        scope: &mut Scope,
        stmts: &mut Vec<Statement>,
        exprs: &mut Vec<Expression>,
    ) {
        for child in named_children(node) {
            self.collect_one(node, child, scope, stmts, exprs);
        }
    }

    fn collect_one(
        &self,
        parent: Node<'_>,
        child: Node<'_>,
        scope: &mut Scope,
        stmts: &mut Vec<Statement>,
        exprs: &mut Vec<Expression>,
    ) {
        let kind = child.kind();
        let statement_like = match kind {
            "switch_expression" => STATEMENT_CONTAINERS.contains(&parent.kind()),
            // a for-loop's init clause is part of the loop header
            "local_variable_declaration" => parent.kind() != "for_statement",
            "block"
            | "constructor_body"
            | "expression_statement"
            | "explicit_constructor_invocation" => true,
            k => {
                TYPE_DECLARATIONS.contains(&k)
                    || CONTROL_STATEMENTS.contains(&k)
                    || OTHER_STATEMENTS.contains(&k)
            }
        };
        if statement_like {
            stmts.push(self.statement(child, scope));
        } else if EXPRESSIONS.contains(&kind) {
            exprs.push(self.expression(child, scope));
        } else if kind != "class_body" {
            self.collect(child, scope, stmts, exprs);
        }
    }
}

fn strip_generics(name: &str) -> String {
    name.split('<').next().unwrap_or(name).trim().to_string()
}
