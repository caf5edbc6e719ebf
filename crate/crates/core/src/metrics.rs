//! Class-level metrics.
//!
//! Each metric has a direct recursive definition (`compute_*`). Whole
//! snapshots go through [`MetricsVisitor`], a single traversal that keeps a
//! stack of per-declaration accumulators: entering any inner declaration
//! pushes a fresh frame, so a container's counts never absorb those of its
//! nested, local or anonymous classes.

use std::collections::BTreeSet;

use crate::java::visit::{self, Visitor};
use crate::java::{
    CompilationUnit, Declaration, DeclarationKind, Expression, ParseOutcome, Statement,
    parse_compilation_unit,
};

/// Column names in output order (alphabetical).
pub const METRIC_NAMES: [&str; 12] = [
    "CNOAD", "CNOF", "CNOM", "CNOND", "CNOSIM", "MDODN", "NOAD", "NOF", "NOM", "NOND", "NOSIM",
    "RFC",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct MetricVector {
    pub nom: u64,
    pub nof: u64,
    pub nond: u64,
    pub nosim: u64,
    pub mdodn: u64,
    pub noad: u64,
    pub rfc: u64,
    pub cnom: u64,
    pub cnof: u64,
    pub cnosim: u64,
    pub cnoad: u64,
    pub cnond: u64,
}

impl MetricVector {
    /// Values in [`METRIC_NAMES`] order.
    pub fn values(&self) -> [u64; 12] {
        [
            self.cnoad,
            self.cnof,
            self.cnom,
            self.cnond,
            self.cnosim,
            self.mdodn,
            self.noad,
            self.nof,
            self.nom,
            self.nond,
            self.nosim,
            self.rfc,
        ]
    }

    pub fn get(&self, name: &str) -> Option<u64> {
        METRIC_NAMES
            .iter()
            .position(|n| n.eq_ignore_ascii_case(name))
            .map(|i| self.values()[i])
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricsRow {
    pub project_id: String,
    /// `<file_path>#<qualified_id>`
    pub class_id: String,
    pub kind: DeclarationKind,
    pub metrics: MetricVector,
    pub ncfix: Option<u64>,
}

impl MetricsRow {
    pub fn key(&self) -> String {
        row_key(&self.project_id, &self.class_id)
    }
}

/// Class identifier within a project: `<file_path>#<qualified_id>`.
pub fn class_id(file_path: &str, decl: &Declaration) -> String {
    format!("{file_path}#{}", decl.qualified_id)
}

/// Full row key: `<project_id>:<class_id>`.
pub fn row_key(project_id: &str, class_id: &str) -> String {
    format!("{project_id}:{class_id}")
}

/// `(nom, nof, nond)`: the lengths of the declaration's own member lists.
pub fn compute_declaration_counts(decl: &Declaration) -> (u64, u64, u64) {
    (
        decl.methods.len() as u64,
        decl.fields.len() as u64,
        decl.nested_declarations.len() as u64,
    )
}

/// Statement nodes (blocks included) in the declaration's own method bodies.
pub fn compute_nosim(decl: &Declaration) -> u64 {
    fn stmt(s: &Statement) -> u64 {
        // a local class declaration is one statement; its body is not ours
        1 + s.children.iter().map(stmt).sum::<u64>() + s.expressions.iter().map(expr).sum::<u64>()
    }
    fn expr(e: &Expression) -> u64 {
        e.children.iter().map(expr).sum::<u64>() + e.statements.iter().map(stmt).sum::<u64>()
    }
    decl.methods
        .iter()
        .filter_map(|m| m.body.as_ref())
        .map(stmt)
        .sum()
}

/// Deepest chain of body-level nesting below `decl`, which sits at depth 0.
pub fn compute_mdodn(decl: &Declaration) -> u64 {
    decl.nested_declarations
        .iter()
        .map(|d| 1 + compute_mdodn(d))
        .max()
        .unwrap_or(0)
}

/// Anonymous classes created directly in the declaration's own code: method
/// bodies, field initializers and initializer blocks.
pub fn compute_noad(decl: &Declaration) -> u64 {
    fn stmt(s: &Statement) -> u64 {
        s.children.iter().map(stmt).sum::<u64>() + s.expressions.iter().map(expr).sum::<u64>()
    }
    fn expr(e: &Expression) -> u64 {
        u64::from(e.anonymous_declaration.is_some())
            + e.children.iter().map(expr).sum::<u64>()
            + e.statements.iter().map(stmt).sum::<u64>()
    }
    let fields: u64 = decl
        .fields
        .iter()
        .filter_map(|f| f.initializer.as_ref())
        .map(expr)
        .sum();
    let methods: u64 = decl
        .methods
        .iter()
        .filter_map(|m| m.body.as_ref())
        .map(stmt)
        .sum();
    let inits: u64 = decl.initializers.iter().map(stmt).sum();
    fields + methods + inits
}

/// Declared methods plus distinct invoked names, found in the declaration's
/// own methods, that are not among the declared method names. Receivers are
/// not resolved, so same-named remote methods collapse into one.
pub fn compute_rfc(decl: &Declaration) -> u64 {
    fn stmt<'a>(s: &'a Statement, out: &mut BTreeSet<&'a str>) {
        for e in &s.expressions {
            expr(e, out);
        }
        for c in &s.children {
            stmt(c, out);
        }
    }
    fn expr<'a>(e: &'a Expression, out: &mut BTreeSet<&'a str>) {
        if let Some(name) = &e.method_call_name {
            out.insert(name);
        }
        for c in &e.children {
            expr(c, out);
        }
        for s in &e.statements {
            stmt(s, out);
        }
    }
    let mut invoked = BTreeSet::new();
    for body in decl.methods.iter().filter_map(|m| m.body.as_ref()) {
        stmt(body, &mut invoked);
    }
    let declared: BTreeSet<&str> = decl.methods.iter().map(|m| m.name.as_str()).collect();
    decl.methods.len() as u64 + invoked.difference(&declared).count() as u64
}

/// `(cnom, cnof, cnosim, cnoad, cnond)` summed over `decl` and every
/// transitively contained declaration.
pub fn compute_cumulative(decl: &Declaration) -> (u64, u64, u64, u64, u64) {
    let (nom, nof, nond) = compute_declaration_counts(decl);
    let mut acc = (nom, nof, compute_nosim(decl), compute_noad(decl), nond);
    for inner in decl.inner_declarations() {
        let c = compute_cumulative(inner);
        acc.0 += c.0;
        acc.1 += c.1;
        acc.2 += c.2;
        acc.3 += c.3;
        acc.4 += c.4;
    }
    acc
}

/// All twelve metrics for one declaration from the direct definitions.
pub fn compute_metric_vector(decl: &Declaration) -> MetricVector {
    let (nom, nof, nond) = compute_declaration_counts(decl);
    let (cnom, cnof, cnosim, cnoad, cnond) = compute_cumulative(decl);
    MetricVector {
        nom,
        nof,
        nond,
        nosim: compute_nosim(decl),
        mdodn: compute_mdodn(decl),
        noad: compute_noad(decl),
        rfc: compute_rfc(decl),
        cnom,
        cnof,
        cnosim,
        cnoad,
        cnond,
    }
}

#[derive(Default)]
struct Frame<'ast> {
    own: MetricVector,
    invoked: BTreeSet<&'ast str>,
    /// Nonzero while inside one of this declaration's method bodies.
    method_depth: usize,
    slot: usize,
}

/// Computes every metric for every declaration in one traversal.
pub struct MetricsVisitor<'ast> {
    stack: Vec<Frame<'ast>>,
    results: Vec<Option<(&'ast Declaration, MetricVector)>>,
}

impl<'ast> MetricsVisitor<'ast> {
    /// Metrics for every declaration in the unit, in traversal order.
    pub fn run(unit: &'ast CompilationUnit) -> Vec<(&'ast Declaration, MetricVector)> {
        let mut v = MetricsVisitor {
            stack: Vec::new(),
            results: Vec::new(),
        };
        for decl in &unit.declarations {
            v.visit_declaration(decl);
        }
        debug_assert!(v.stack.is_empty());
        v.results.into_iter().map(|r| r.expect("every frame popped")).collect()
    }

    fn top(&mut self) -> &mut Frame<'ast> {
        self.stack.last_mut().expect("visiting inside a declaration")
    }

    /// Pushes a frame, walks the declaration and folds its cumulative
    /// counts into the parent. Returns the finished vector.
    fn enter(&mut self, decl: &'ast Declaration) -> MetricVector {
        let slot = self.results.len();
        self.results.push(None);
        let (nom, nof, nond) = compute_declaration_counts(decl);
        self.stack.push(Frame {
            own: MetricVector {
                nom,
                nof,
                nond,
                cnom: nom,
                cnof: nof,
                cnond: nond,
                ..MetricVector::default()
            },
            slot,
            ..Frame::default()
        });
        visit::walk_declaration(self, decl);
        let frame = self.stack.pop().expect("frame pushed above");
        let mut m = frame.own;
        let declared: BTreeSet<&str> = decl.methods.iter().map(|m| m.name.as_str()).collect();
        m.rfc = m.nom + frame.invoked.difference(&declared).count() as u64;
        m.cnosim += m.nosim;
        m.cnoad += m.noad;
        if let Some(parent) = self.stack.last_mut() {
            parent.own.cnom += m.cnom;
            parent.own.cnof += m.cnof;
            parent.own.cnosim += m.cnosim;
            parent.own.cnoad += m.cnoad;
            parent.own.cnond += m.cnond;
        }
        self.results[frame.slot] = Some((decl, m));
        m
    }
}

impl<'ast> Visitor<'ast> for MetricsVisitor<'ast> {
    fn visit_declaration(&mut self, decl: &'ast Declaration) {
        self.enter(decl);
    }

    fn visit_nested_declaration(&mut self, decl: &'ast Declaration) {
        let m = self.enter(decl);
        let top = self.top();
        top.own.mdodn = top.own.mdodn.max(m.mdodn + 1);
    }

    fn visit_anonymous_declaration(&mut self, decl: &'ast Declaration) {
        self.top().own.noad += 1;
        self.enter(decl);
    }

    fn visit_method(&mut self, method: &'ast crate::java::Method) {
        self.top().method_depth += 1;
        visit::walk_method(self, method);
        self.top().method_depth -= 1;
    }

    fn visit_statement(&mut self, stmt: &'ast Statement) {
        let top = self.top();
        if top.method_depth > 0 {
            top.own.nosim += 1;
        }
        visit::walk_statement(self, stmt);
    }

    fn visit_expression(&mut self, expr: &'ast Expression) {
        let top = self.top();
        if top.method_depth > 0
            && let Some(name) = &expr.method_call_name
        {
            top.invoked.insert(name);
        }
        visit::walk_expression(self, expr);
    }
}

/// Metric rows for one parsed unit, via the visitor.
pub fn compute_unit(unit: &CompilationUnit, project_id: &str) -> Vec<MetricsRow> {
    MetricsVisitor::run(unit)
        .into_iter()
        .map(|(decl, metrics)| MetricsRow {
            project_id: project_id.to_string(),
            class_id: class_id(&unit.file_path, decl),
            kind: decl.kind,
            metrics,
            ncfix: None,
        })
        .collect()
}

/// A source file to measure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceFile {
    pub path: String,
    pub content: String,
}

/// One row per declaration in every parseable `.java` file, sorted by key.
/// Unparseable files are logged and skipped.
pub fn compute_all(files: &[SourceFile], project_id: &str) -> Vec<MetricsRow> {
    compute_all_with(files, project_id, crate::exec::Execution::default())
}

pub fn compute_all_with(
    files: &[SourceFile],
    project_id: &str,
    exec: crate::exec::Execution,
) -> Vec<MetricsRow> {
    let java: Vec<&SourceFile> = files.iter().filter(|f| is_java_path(&f.path)).collect();
    let per_file = exec.map(&java, |file| {
        match parse_compilation_unit(&file.content, &file.path) {
            ParseOutcome::Parsed(unit) => compute_unit(&unit, project_id),
            ParseOutcome::Failed(diag) => {
                log::warn!("{project_id}: skipping {}: {diag}", file.path);
                Vec::new()
            }
        }
    });
    let mut rows: Vec<MetricsRow> = per_file.into_iter().flatten().collect();
    rows.sort_by(|a, b| a.class_id.cmp(&b.class_id));
    rows
}

pub fn is_java_path(path: &str) -> bool {
    path.ends_with(".java")
}

/// Lines `<project_id>\t<class_id>\t<value>` for one metric, sorted by key.
pub fn metric_dump(rows: &[MetricsRow], metric: &str) -> Option<String> {
    let idx = METRIC_NAMES.iter().position(|n| n.eq_ignore_ascii_case(metric))?;
    let mut lines: Vec<(String, String)> = rows
        .iter()
        .map(|r| {
            (
                r.key(),
                format!("{}\t{}\t{}\n", r.project_id, r.class_id, r.metrics.values()[idx]),
            )
        })
        .collect();
    lines.sort();
    Some(lines.into_iter().map(|(_, l)| l).collect())
}
