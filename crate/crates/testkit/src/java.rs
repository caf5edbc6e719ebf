//! Random but always well-formed Java classes.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

const TYPES: [&str; 4] = ["int", "long", "String", "boolean"];

fn literal(ty: &str, rng: &mut ChaCha8Rng) -> String {
    match ty {
        "String" => format!("\"s{}\"", rng.random_range(0..100)),
        "boolean" => if rng.random_bool(0.5) { "true" } else { "false" }.into(),
        _ => rng.random_range(0..1000).to_string(),
    }
}

fn statement(rng: &mut ChaCha8Rng, callees: &[String], depth: usize) -> String {
    let callee = &callees[rng.random_range(0..callees.len())];
    let pick = if depth > 1 { rng.random_range(0..3) } else { rng.random_range(0..6) };
    match pick {
        0 => format!("int v{} = {};", rng.random_range(0..50), rng.random_range(0..9)),
        1 => format!("{callee}();"),
        2 => format!("System.out.println(\"{}\");", rng.random_range(0..99)),
        3 => format!(
            "if (counter > {}) {{ {} }}",
            rng.random_range(0..9),
            statement(rng, callees, depth + 1)
        ),
        4 => format!(
            "for (int i = 0; i < {}; i++) {{ {} }}",
            rng.random_range(1..5),
            statement(rng, callees, depth + 1)
        ),
        _ => format!(
            "while (counter < {}) {{ counter++; {} }}",
            rng.random_range(1..5),
            statement(rng, callees, depth + 1)
        ),
    }
}

/// A top-level class `name` in `package`; `revision` perturbs the bodies so
/// successive versions differ.
pub fn java_class(rng: &mut ChaCha8Rng, package: &str, name: &str, revision: u32) -> String {
    let mut out = format!("package {package};\n\n// revision {revision}\npublic class {name} {{\n");
    out.push_str("    private int counter;\n");
    for f in 0..rng.random_range(0..4) {
        let ty = TYPES[rng.random_range(0..TYPES.len())];
        out.push_str(&format!("    {ty} field{f} = {};\n", literal(ty, rng)));
    }
    let n_methods = rng.random_range(1..5);
    let names: Vec<String> = (0..n_methods).map(|m| format!("op{m}")).collect();
    for name in &names {
        out.push_str(&format!("    void {name}() {{\n"));
        for _ in 0..rng.random_range(0..5) {
            out.push_str(&format!("        {}\n", statement(rng, &names, 0)));
        }
        if rng.random_bool(0.2) {
            out.push_str("        Runnable r = new Runnable() { public void run() { counter++; } };\n");
        }
        if rng.random_bool(0.15) {
            out.push_str("        java.util.function.Supplier<Integer> s = () -> { return counter; };\n");
        }
        out.push_str("    }\n");
    }
    if rng.random_bool(0.3) {
        out.push_str("    static class Inner {\n        int depth;\n        void touch() { depth++; }\n");
        if rng.random_bool(0.3) {
            out.push_str("        class Deeper { void noop() {} }\n");
        }
        out.push_str("    }\n");
    }
    if rng.random_bool(0.1) {
        out.push_str("    enum Mode { ON, OFF }\n");
    }
    out.push_str("}\n");
    out
}
