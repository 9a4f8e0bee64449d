use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).expect("exports return JSON")
}

#[test]
fn fano_blocks_by_label() {
    let v = parse(eaqldpc_web::design("PG", 2, 2, 3));
    assert_eq!(v["v"], 7);
    assert_eq!(v["b"], 7);
    assert_eq!(v["r"], 3);
    assert_eq!(v["blocks"].as_array().unwrap().len(), 3);
    assert_eq!(v["blocks"][0].as_array().unwrap().len(), 3);
}

#[test]
fn triple_system_source() {
    let v = parse(eaqldpc_web::design("sts", 9, 0, 100));
    assert_eq!(v["b"], 12);
    assert_eq!(v["blocks"].as_array().unwrap().len(), 12);
}

#[test]
fn params_of_small_codes() {
    let v = parse(eaqldpc_web::code_params("PG", 3, 2, "II"));
    assert_eq!((v["n"].as_u64(), v["k"].as_i64(), v["d"].as_u64(), v["c"].as_u64()), (Some(35), Some(14), Some(4), Some(1)));
    let v = parse(eaqldpc_web::code_params("EG", 2, 8, "I"));
    assert_eq!((v["n"].as_u64(), v["k"].as_i64(), v["d"].as_u64(), v["c"].as_u64()), (Some(63), Some(19), Some(9), Some(8)));
    assert_eq!(v["rate"], "0.3016");
}

#[test]
fn simulation_is_seeded() {
    let a = parse(eaqldpc_web::simulate("PG", 3, 2, "II", 0.03, 500, 4));
    let b = parse(eaqldpc_web::simulate("PG", 3, 2, "II", 0.03, 500, 4));
    assert_eq!(a, b);
    assert_eq!(a["trials"], 500);
    let zero = parse(eaqldpc_web::simulate("AG", 2, 4, "I", 0.0, 10, 1));
    assert_eq!(zero["errors"], 0);
}

#[test]
fn bad_input_is_reported() {
    for s in [
        eaqldpc_web::design("XG", 2, 2, 1),
        eaqldpc_web::design("PG", 2, 6, 1),
        eaqldpc_web::design("PG", 9, 16, 1),
        eaqldpc_web::code_params("PG", 2, 2, "III"),
        eaqldpc_web::simulate("PG", 2, 2, "II", 0.5, 0, 1),
    ] {
        assert!(parse(s).get("error").is_some());
    }
}
