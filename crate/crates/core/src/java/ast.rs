//! Data model for parsed Java sources.
//!
//! The shape follows the classic repository-mining `Declaration` schema:
//! declarations own methods, fields and body-level nested declarations,
//! while local classes hang off statements and anonymous classes hang off
//! expressions.

use std::fmt;

/// Kind of a type declaration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DeclarationKind {
    Class,
    Interface,
    Enum,
    Annotation,
    Anonymous,
}

impl DeclarationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DeclarationKind::Class => "CLASS",
            DeclarationKind::Interface => "INTERFACE",
            DeclarationKind::Enum => "ENUM",
            DeclarationKind::Annotation => "ANNOTATION",
            DeclarationKind::Anonymous => "ANONYMOUS",
        }
    }
}

impl fmt::Display for DeclarationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// 1-based source position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompilationUnit {
    pub file_path: String,
    pub package_name: String,
    pub declarations: Vec<Declaration>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Declaration {
    /// Simple name. Anonymous classes carry their ordinal (`"1"`, `"2"`, ...).
    pub name: String,
    pub kind: DeclarationKind,
    pub methods: Vec<Method>,
    pub fields: Vec<Field>,
    /// Body-level member types only. Local and anonymous classes are reached
    /// through statements and expressions.
    pub nested_declarations: Vec<Declaration>,
    /// Static and instance initializer blocks.
    pub initializers: Vec<Statement>,
    /// Supertype names as written; never resolved.
    pub parent_names: Vec<String>,
    pub qualified_id: String,
    pub position: Position,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Method {
    pub name: String,
    /// `None` for abstract, interface and annotation-element methods.
    pub body: Option<Statement>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Field {
    pub name: String,
    /// Initializer expression; enum constants carry their argument list and
    /// optional constant body here.
    pub initializer: Option<Expression>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StatementKind {
    Block,
    Expression,
    DeclarationLocal,
    Control,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Statement {
    pub kind: StatementKind,
    pub children: Vec<Statement>,
    pub expressions: Vec<Expression>,
    pub local_declaration: Option<Box<Declaration>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expression {
    /// Grammar node kind, e.g. `method_invocation` or `lambda_expression`.
    pub kind: String,
    pub method_call_name: Option<String>,
    pub anonymous_declaration: Option<Box<Declaration>>,
    pub children: Vec<Expression>,
    /// Statements embedded in the expression: lambda block bodies and
    /// switch-expression arms.
    pub statements: Vec<Statement>,
}

/// Parse diagnostic, 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub message: String,
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

/// Result of parsing one file. Syntax errors are data, not failures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseOutcome {
    Parsed(CompilationUnit),
    Failed(Diagnostic),
}

impl ParseOutcome {
    pub fn unit(&self) -> Option<&CompilationUnit> {
        match self {
            ParseOutcome::Parsed(unit) => Some(unit),
            ParseOutcome::Failed(_) => None,
        }
    }

    pub fn error(&self) -> Option<&Diagnostic> {
        match self {
            ParseOutcome::Parsed(_) => None,
            ParseOutcome::Failed(diag) => Some(diag),
        }
    }

    pub fn into_unit(self) -> Option<CompilationUnit> {
        match self {
            ParseOutcome::Parsed(unit) => Some(unit),
            ParseOutcome::Failed(_) => None,
        }
    }
}

impl Declaration {
    /// Direct inner declarations of every flavor (nested, local, anonymous),
    /// ordered by source position.
    pub fn inner_declarations(&self) -> Vec<&Declaration> {
        let mut out: Vec<&Declaration> = self.nested_declarations.iter().collect();
        for field in &self.fields {
            if let Some(init) = &field.initializer {
                collect_expression_inner(init, &mut out);
            }
        }
        for method in &self.methods {
            if let Some(body) = &method.body {
                collect_statement_inner(body, &mut out);
            }
        }
        for init in &self.initializers {
            collect_statement_inner(init, &mut out);
        }
        out.sort_by_key(|d| d.position);
        out
    }
}

fn collect_statement_inner<'a>(stmt: &'a Statement, out: &mut Vec<&'a Declaration>) {
    if let Some(local) = &stmt.local_declaration {
        out.push(local);
    }
    for expr in &stmt.expressions {
        collect_expression_inner(expr, out);
    }
    for child in &stmt.children {
        collect_statement_inner(child, out);
    }
}

fn collect_expression_inner<'a>(expr: &'a Expression, out: &mut Vec<&'a Declaration>) {
    if let Some(anon) = &expr.anonymous_declaration {
        out.push(anon);
    }
    for child in &expr.children {
        collect_expression_inner(child, out);
    }
    for stmt in &expr.statements {
        collect_statement_inner(stmt, out);
    }
}
