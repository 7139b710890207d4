//! Parser and resolver tests: diagnostics with stable codes, round-trip
//! serialization, and the minimal config of the documentation.

use cocycle_cli::config::{parse_config_text, serialize_config, ExpectValue, TaskSpec};
use cocycle_cli::parse_config;
use cocycle_core::Budget;

fn budget() -> Budget {
    Budget::default()
}

#[test]
fn minimal_config_with_builtins_parses_and_resolves() {
    let text = r#"cocycle-config v1
extension E = Z2 -> Z4
task delta rp2_6 E generator
"#;
    let (ast, resolved) = parse_config(text, budget()).unwrap();
    assert_eq!(ast.tasks.len(), 1);
    assert!(matches!(ast.tasks[0].spec, TaskSpec::Delta { .. }));
    assert!(resolved.extensions.contains_key("E"));
    let ext = &resolved.extensions["E"];
    assert_eq!(ext.g().order(), 2);
    assert_eq!(ext.n().order(), 4);
    assert_eq!(ext.q().order(), 2);
}

#[test]
fn missing_header_is_a_version_error() {
    let err = parse_config_text("group G = builtin Z2\n").unwrap_err();
    assert_eq!(err.code, "E-VERSION");
}

#[test]
fn unknown_builtin_is_reported() {
    let text = "cocycle-config v1\ngroup G = builtin Z17\n";
    let err = parse_config(text, budget()).unwrap_err();
    assert_eq!(err.code, "E-BUILTIN");
}

#[test]
fn dangling_name_is_reported() {
    let text = "cocycle-config v1\ncochain q on rp2_6 over Mystery { }\n";
    let err = parse_config(text, budget()).unwrap_err();
    assert_eq!(err.code, "E-NAME");
}

#[test]
fn five_vertex_facets_are_a_dimension_error() {
    let text = "cocycle-config v1\ncomplex bad { facets = [(0,1,2,3,4)] }\n";
    let err = parse_config(text, budget()).unwrap_err();
    assert_eq!(err.code, "E-DIM");
}

#[test]
fn non_homomorphic_morphism_spec_is_reported() {
    // Sending the order-2 generator of Z2 to an order-4 element cannot
    // extend to a homomorphism.
    let text = r#"cocycle-config v1
extension E = Z2 -> Z4 { i = { "r" -> "r" } }
"#;
    let err = parse_config(text, budget()).unwrap_err();
    assert_eq!(err.code, "E-HOM");
}

#[test]
fn central_action_on_a_noncentral_subgroup_is_an_xmod_error() {
    // A3 is not central in S3, so declaring the trivial action violates
    // equivariance.
    let text = r#"cocycle-config v1
extension E = Z3 -> S3 { alpha = trivial }
"#;
    let err = parse_config(text, budget()).unwrap_err();
    assert_eq!(err.code, "E-XMOD");
}

#[test]
fn diagnostics_carry_positions() {
    let text = "cocycle-config v1\n\ngroup G = wrong {}\n";
    let err = parse_config_text(text).unwrap_err();
    assert_eq!(err.code, "E-PARSE");
    assert_eq!(err.line, 3);
    assert!(err.col > 0);
    assert!(err.to_string().contains("3:"));
}

#[test]
fn bad_group_table_is_a_group_error() {
    let text = "cocycle-config v1\ngroup G = table { order = 2; table = [1, 0, 0, 1] }\n";
    let err = parse_config(text, budget()).unwrap_err();
    assert_eq!(err.code, "E-GROUP");
}

#[test]
fn config_round_trips_through_the_canonical_serializer() {
    let text = r#"cocycle-config v1
group K4 = perm { degree = 4; generators = ["(0 1)(2 3)", "(0 2)(1 3)"] }
group C2 = table { order = 2; table = [0, 1, 1, 0]; names = ["e", "t"] }
group S = builtin S3
complex square { facets = [(0,1,2), (0,2,3)] }
complex T = builtin torus7
extension E = Z2 -> Z4
extension F = center(Q8) -> Q8
extension W = Z2 -> Z2xZ2 { i = { "r" -> "b" } }
cochain q on rp2_6 over Z2 { edge (0,1) = "r"; edge (0,2) = "r" }
cochain2 z on rp2_6 over Z2 { tri (1,3,5) = "r" }
budgets { nodes = 500000 }
task h1 torus7 Z2 expect count = 4
task abelian sphere3_pent Z 3
task delta rp2_6 E generator expect trivial = false
task lift rp2_6 E generator cocycle
task square circle3 Z3->S3 all
task gauge-classes circle3 center(Q8)->Q8 class 2
task realize rp2_6 E generator
"#;
    let ast = parse_config_text(text).unwrap();
    let serialized = serialize_config(&ast);
    let reparsed = parse_config_text(&serialized).unwrap();
    assert_eq!(ast, reparsed, "round trip changed the config");
    // And the round-tripped config still resolves.
    parse_config(&serialized, budget()).unwrap();
}

#[test]
fn expects_parse_into_typed_values() {
    let text = "cocycle-config v1\ntask h1 torus7 Z2 expect count = 4 expect ok = true\n";
    let ast = parse_config_text(text).unwrap();
    assert_eq!(
        ast.tasks[0].expects,
        vec![
            ("count".to_string(), ExpectValue::Int(4)),
            ("ok".to_string(), ExpectValue::Bool(true)),
        ]
    );
}

#[test]
fn budgets_block_overrides_defaults() {
    let text = "cocycle-config v1\nbudgets { nodes = 1234; group_cap = 100; aut_cap = 32 }\n";
    let (_, resolved) = parse_config(text, budget()).unwrap();
    assert_eq!(resolved.budget.max_nodes, 1234);
    assert_eq!(resolved.budget.group_order_cap, 100);
    assert_eq!(resolved.budget.aut_order_cap, 32);
}

#[test]
fn inferred_embedding_is_deterministic_and_lex_minimal() {
    // Z2 -> Z2xZ2 has three candidate subgroups; inference picks the
    // image of the lexicographically first valid generator assignment.
    let text = "cocycle-config v1\nextension E = Z2 -> Z2xZ2\n";
    let (_, resolved) = parse_config(text, budget()).unwrap();
    let ext = &resolved.extensions["E"];
    let image = ext.xm().i().apply(1);
    assert_eq!(ext.n().name(image), "a");
}

#[test]
fn explicit_alpha_table_is_validated() {
    // The nontrivial action of Z2 on Z3 by inversion, spelled out.
    let text = r#"cocycle-config v1
group Z3xZ2 = perm { degree = 5; generators = ["(0 1 2)", "(3 4)"] }
"#;
    // Direct product built from permutations: sanity-resolve only.
    parse_config(text, budget()).unwrap();
    // An explicit alpha entry that is not an automorphism is rejected.
    let bad = r#"cocycle-config v1
extension E = Z2 -> Z4 { alpha = explicit { "r" -> ("e" -> "r") } }
"#;
    let err = parse_config(bad, budget()).unwrap_err();
    assert_eq!(err.code, "E-XMOD");
}
