use nilorbit::corpus::{catalogue, jordan_orbit, split_rank_two, twisted_rank_four};
use nilorbit::format::{format_vector, parse_orbit, parse_target, serialize_orbit, FormatError};
use nilorbit::hodge::validate_orbit;
use nilorbit::linalg::{GScalar, GVector};

#[test]
fn catalogue_round_trips_byte_for_byte() {
    for r in catalogue() {
        let orbit = r.build().unwrap();
        let text = serialize_orbit(&orbit);
        let again = serialize_orbit(&parse_orbit(&text).unwrap());
        assert_eq!(text, again, "{}", r.name);
    }
}

#[test]
fn canonical_text_shape() {
    let text = serialize_orbit(&split_rank_two());
    assert!(text.ends_with("}\n"));
    let keys: Vec<usize> = ["\"F\"", "\"N\"", "\"label\"", "\"rank\"", "\"weight\""]
        .iter()
        .map(|k| text.find(k).unwrap())
        .collect();
    assert!(keys.windows(2).all(|w| w[0] < w[1]));
    assert!(text.contains("\"re\": \"1\""));
}

#[test]
fn unlisted_levels_follow_the_level_above() {
    // F^0 omitted follows F^1; an empty listing at -1 adds nothing, and
    // below the lowest listed level is the whole space
    let text = r#"{"rank": 2, "weight": -1, "N": [[0,0],[1,0]],
        "F": {"1": [[{"re":"1","im":"0"},{"re":"0","im":"0"}]], "-1": []}}"#;
    let orbit = parse_orbit(text).unwrap();
    assert_eq!(orbit.f(1).dim(), 1);
    assert_eq!(orbit.f(0).dim(), 1);
    assert_eq!(orbit.f(-1).dim(), 1);
    assert_eq!(orbit.f(-2).dim(), 2);
    assert_eq!(orbit.f(2).dim(), 0);
}

#[test]
fn fractions_are_reduced_on_output() {
    let text = r#"{"rank": 2, "weight": -1, "N": [[0,0],[1,0]],
        "F": {"0": [[{"re":"2/4","im":"0"},{"re":"0","im":"-3/6"}]]}}"#;
    let out = serialize_orbit(&parse_orbit(text).unwrap());
    // echelon basis is normalized to a leading 1
    assert!(out.contains("\"im\": \"-1\""), "{out}");
    assert!(!out.contains("/"), "{out}");
}

fn json_error(text: &str) -> (usize, usize, String) {
    match parse_orbit(text) {
        Err(FormatError::Json {
            line,
            column,
            message,
        }) => (line, column, message),
        other => panic!("expected a JSON error, got {other:?}"),
    }
}

#[test]
fn syntax_errors_carry_line_and_column() {
    let (line, column, _) =
        json_error("{\n  \"rank\": 2,\n  \"weight\": -1,\n  \"N\": [[0, 0], [1 0]]\n}");
    assert_eq!(line, 4);
    assert_eq!(column, 20);
}

#[test]
fn bad_scalars_are_located() {
    let text = "{\"rank\": 1, \"weight\": 0, \"N\": [[0]],\n \"F\": {\"0\": [[{\"re\": \"0.5\", \"im\": \"0\"}]]}}";
    let (line, _, message) = json_error(text);
    assert_eq!(line, 2);
    assert!(message.contains("0.5"), "{message}");
}

#[test]
fn missing_and_unknown_fields_are_json_errors() {
    let (_, _, m) = json_error(r#"{"rank": 1, "weight": 0, "F": {}}"#);
    assert!(m.contains("`N`"), "{m}");
    let (_, _, m) = json_error(r#"{"rank": 1, "weight": 0, "N": [[0]], "F": {}, "extra": 1}"#);
    assert!(m.contains("extra"), "{m}");
}

#[test]
fn shape_errors() {
    let bad = [
        r#"{"rank": 2, "weight": 0, "N": [[0]], "F": {}}"#,
        r#"{"rank": 1, "weight": 0, "N": [[0]], "F": {"x": []}}"#,
        r#"{"rank": 2, "weight": 0, "N": [[0,0],[0,0]], "F": {"0": [[{"re":"1","im":"0"}]]}}"#,
    ];
    for t in bad {
        assert!(matches!(parse_orbit(t), Err(FormatError::Shape(_))), "{t}");
    }
}

#[test]
fn invalid_orbits_parse_and_are_diagnosed() {
    // N not nilpotent
    let text = r#"{"rank": 1, "weight": 0, "N": [[1]], "F": {}}"#;
    let orbit = parse_orbit(text).unwrap();
    assert!(!validate_orbit(&orbit).all_pass());
}

#[test]
fn parsed_examples_equal_built_ones() {
    for orbit in [
        split_rank_two(),
        twisted_rank_four(),
        jordan_orbit(3, -1, 0).unwrap(),
    ] {
        let parsed = parse_orbit(&serialize_orbit(&orbit)).unwrap();
        assert_eq!(parsed.n_int(), orbit.n_int());
        assert_eq!(parsed.weight(), orbit.weight());
        assert_eq!(parsed.hodge().levels(), orbit.hodge().levels());
    }
}

#[test]
fn targets() {
    let v = parse_target("(1, 1/2+1/4i)").unwrap();
    assert_eq!(
        v,
        GVector(vec![GScalar::one(), GScalar::from_parts(1, 2, 1, 4)])
    );
    assert_eq!(format_vector(&v), "(1, 1/2+1/4i)");
    assert_eq!(parse_target(&format_vector(&v)).unwrap(), v);
    assert_eq!(parse_target("0").unwrap(), GVector::zeros(1));
    assert_eq!(parse_target("(-i)").unwrap(), GVector(vec![-GScalar::i()]));
    assert!(parse_target("(1, 2").is_err());
    assert!(parse_target("(1, x)").is_err());
}
