use super::*;

fn parse(src: &str) -> CompilationUnit {
    match parse_compilation_unit(src, "T.java") {
        ParseOutcome::Parsed(unit) => unit,
        ParseOutcome::Failed(diag) => panic!("unexpected parse failure: {diag}"),
    }
}

fn ids(unit: &CompilationUnit) -> Vec<String> {
    enumerate_class_declarations(unit)
        .into_iter()
        .map(|d| d.qualified_id.clone())
        .collect()
}

const NESTING_LISTING: &str = "class A {
    class B {
        class C {}
    }
    class D {}
}
";

/// Recursive count of every declaration reachable from the unit, written
/// against the raw AST rather than `inner_declarations`.
fn count_all(unit: &CompilationUnit) -> usize {
    fn decl(d: &Declaration) -> usize {
        1 + d.nested_declarations.iter().map(decl).sum::<usize>()
            + d.fields
                .iter()
                .filter_map(|f| f.initializer.as_ref())
                .map(expr)
                .sum::<usize>()
            + d.methods
                .iter()
                .filter_map(|m| m.body.as_ref())
                .map(stmt)
                .sum::<usize>()
            + d.initializers.iter().map(stmt).sum::<usize>()
    }
    fn stmt(s: &Statement) -> usize {
        s.local_declaration.as_deref().map_or(0, decl)
            + s.children.iter().map(stmt).sum::<usize>()
            + s.expressions.iter().map(expr).sum::<usize>()
    }
    fn expr(e: &Expression) -> usize {
        e.anonymous_declaration.as_deref().map_or(0, decl)
            + e.children.iter().map(expr).sum::<usize>()
            + e.statements.iter().map(stmt).sum::<usize>()
    }
    unit.declarations.iter().map(decl).sum()
}

#[test]
fn simple_class_structure() {
    let unit = parse("class A { int x; void f(){} }");
    assert_eq!(unit.declarations.len(), 1);
    let a = &unit.declarations[0];
    assert_eq!(a.kind, DeclarationKind::Class);
    assert_eq!(a.fields.len(), 1);
    assert_eq!(a.fields[0].name, "x");
    assert_eq!(a.methods.len(), 1);
    assert_eq!(a.methods[0].name, "f");
    assert_eq!(a.qualified_id, "A");
}

#[test]
fn unbalanced_source_reports_position() {
    let outcome = parse_compilation_unit("class A {", "A.java");
    let diag = outcome.error().expect("error outcome");
    assert_eq!(diag.line, 1);
    assert!(outcome.unit().is_none());

    let outcome = parse_compilation_unit("class A {\n  void f() {\n    int = ;\n  }\n}\n", "A.java");
    let diag = outcome.error().expect("error outcome");
    assert_eq!(diag.line, 3);
}

#[test]
fn nesting_listing_structure() {
    let unit = parse(NESTING_LISTING);
    let a = &unit.declarations[0];
    let nested: Vec<_> = a.nested_declarations.iter().map(|d| d.name.as_str()).collect();
    assert_eq!(nested, ["B", "D"]);
    let b = &a.nested_declarations[0];
    assert_eq!(b.nested_declarations.len(), 1);
    assert_eq!(b.nested_declarations[0].name, "C");
    assert_eq!(ids(&unit), ["A", "A$B", "A$B$C", "A$D"]);
}

#[test]
fn interface_only_and_empty_units() {
    let unit = parse("package p; interface I { void run(); int K = 1; }");
    assert_eq!(ids(&unit), ["p.I"]);
    let i = &unit.declarations[0];
    assert_eq!(i.kind, DeclarationKind::Interface);
    assert_eq!(i.methods.len(), 1);
    assert!(i.methods[0].body.is_none());
    assert_eq!(i.fields.len(), 1);

    let unit = parse("package a.b.c;\n");
    assert_eq!(unit.package_name, "a.b.c");
    assert!(ids(&unit).is_empty());
}

#[test]
fn anonymous_and_local_naming() {
    let unit = parse(
        "package q;
class Outer {
    Runnable r = new Runnable() { public void run() {} };
    void f() {
        class Local {}
        Object o = new Object() {};
    }
    void g() {
        class Local { Runnable x = new Runnable() { public void run() {} }; }
    }
}",
    );
    assert_eq!(
        ids(&unit),
        [
            "q.Outer",
            "q.Outer$1",
            "q.Outer$1Local",
            "q.Outer$2",
            "q.Outer$2Local",
            "q.Outer$2Local$1",
        ]
    );
    let outer = &unit.declarations[0];
    assert!(outer.nested_declarations.is_empty());
    let anon = outer.fields[0]
        .initializer
        .as_ref()
        .and_then(|e| e.anonymous_declaration.as_deref())
        .expect("anonymous field initializer");
    assert_eq!(anon.kind, DeclarationKind::Anonymous);
    assert_eq!(anon.parent_names, ["Runnable"]);
    assert_eq!(count_all(&unit), ids(&unit).len());
}

#[test]
fn outer_anonymous_numbered_before_argument_anonymous() {
    let unit = parse("class A { Object o = new Thread(new Runnable() { public void run() {} }) {}; }");
    let outer = unit.declarations[0].fields[0].initializer.as_ref().unwrap();
    let anon = outer.anonymous_declaration.as_ref().unwrap();
    assert_eq!(anon.qualified_id, "A$1");
    assert_eq!(ids(&unit), ["A", "A$1", "A$2"]);
}

#[test]
fn statement_tree_shape() {
    let unit = parse("class A { void f(){ int x = 1; if (x > 0) { g(); } else return; } }");
    let body = unit.declarations[0].methods[0].body.as_ref().unwrap();
    assert_eq!(body.kind, StatementKind::Block);
    assert_eq!(body.children.len(), 2);
    assert_eq!(body.children[0].kind, StatementKind::DeclarationLocal);
    let branch = &body.children[1];
    assert_eq!(branch.kind, StatementKind::Control);
    let kinds: Vec<_> = branch.children.iter().map(|s| s.kind).collect();
    assert_eq!(kinds, [StatementKind::Block, StatementKind::Other]);
    let call = &branch.children[0].children[0].expressions[0];
    assert_eq!(call.method_call_name.as_deref(), Some("g"));
}

#[test]
fn for_init_is_part_of_the_loop() {
    let unit = parse("class A { void f(){ for (int i = 0; i < 3; i++) { g(); } } }");
    let body = unit.declarations[0].methods[0].body.as_ref().unwrap();
    let lp = &body.children[0];
    assert_eq!(lp.kind, StatementKind::Control);
    let kinds: Vec<_> = lp.children.iter().map(|s| s.kind).collect();
    assert_eq!(kinds, [StatementKind::Block]);
}

#[test]
fn lambda_and_switch_bodies_are_statements_of_the_expression() {
    let unit = parse(
        "class A { void f(){ Runnable r = () -> { a(); b(); }; int y = switch (r.hashCode()) { case 1 -> 2; default -> { yield 3; } }; } }",
    );
    let body = unit.declarations[0].methods[0].body.as_ref().unwrap();
    let decl = &body.children[0];
    let lambda = &decl.expressions[0];
    assert_eq!(lambda.kind, "lambda_expression");
    assert_eq!(lambda.statements.len(), 1);
    assert_eq!(lambda.statements[0].children.len(), 2);
    let switch = &body.children[1].expressions[0];
    assert_eq!(switch.kind, "switch_expression");
    assert_eq!(switch.statements.len(), 2);
}

#[test]
fn enum_constants_and_bodies() {
    let unit = parse(
        "enum Op { PLUS { int apply() { return 1; } }, MINUS; int apply() { return 0; } static { init(); } }",
    );
    let op = &unit.declarations[0];
    assert_eq!(op.kind, DeclarationKind::Enum);
    let names: Vec<_> = op.fields.iter().map(|f| f.name.as_str()).collect();
    assert_eq!(names, ["PLUS", "MINUS"]);
    assert_eq!(op.methods.len(), 1);
    assert_eq!(op.initializers.len(), 1);
    assert_eq!(ids(&unit), ["Op", "Op$1"]);
}

#[test]
fn constructors_records_and_annotations() {
    let unit = parse(
        "class A { A() { this(1); } A(int x) { super(); } }
record P(int x, int y) { P { check(); } }
@interface Tag { String value() default \"\"; }",
    );
    let a = &unit.declarations[0];
    assert_eq!(a.methods.len(), 2);
    assert_eq!(a.methods[0].body.as_ref().unwrap().kind, StatementKind::Block);
    assert_eq!(a.methods[0].body.as_ref().unwrap().children[0].kind, StatementKind::Expression);
    let p = &unit.declarations[1];
    assert_eq!(p.kind, DeclarationKind::Class);
    assert_eq!(p.fields.len(), 2);
    assert_eq!(p.methods.len(), 1);
    let tag = &unit.declarations[2];
    assert_eq!(tag.kind, DeclarationKind::Annotation);
    assert_eq!(tag.methods.len(), 1);
}

#[test]
fn parent_names_are_kept_unresolved() {
    let unit = parse("class A extends b.Base<T> implements I, J<X> {}");
    assert_eq!(unit.declarations[0].parent_names, ["b.Base", "I", "J"]);
}

#[test]
fn parsing_is_stable() {
    let src = "package x; class A { class B { void f() { new Object() {}; class L {} } } }";
    assert_eq!(parse(src), parse(src));
}

#[test]
fn local_declarations_only_reachable_through_statements() {
    let unit = parse("class A { void f() { class L { void g() { new Object() {}; } } } }");
    let a = &unit.declarations[0];
    assert!(a.nested_declarations.is_empty());
    let stmt = &a.methods[0].body.as_ref().unwrap().children[0];
    let local = stmt.local_declaration.as_ref().expect("local class");
    assert_eq!(local.qualified_id, "A$1L");
    assert_eq!(ids(&unit), ["A", "A$1L", "A$1L$1"]);
    assert_eq!(count_all(&unit), 3);
}
