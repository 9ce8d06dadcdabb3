use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cosegal::codec::{self, Annotations, Document};
use cosegal_core::base::Backend;
use cosegal_core::fixtures::*;

const BACKENDS: [Backend; 3] = [Backend::FinSet, Backend::VectQ, Backend::ChQ];

fn reencode(v: &serde_json::Value) -> (codec::Decoded, serde_json::Value) {
    let d = codec::decode(v).unwrap();
    assert!(d.warnings.is_empty(), "{:?}", d.warnings);
    let e = codec::encode(&d.document, &d.annotations);
    (d, e)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn precategories_survive_encoding(seed in any::<u64>(), b in 0..3usize, n in 1..3usize) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let f = random_pointed(&mut r, BACKENDS[b], n, 3, 2);
        let v = codec::encode_precategory(&f, &Annotations::default());
        let (d, e) = reencode(&v);
        match d.document {
            Document::Precategory(g) => prop_assert_eq!(&g, &*f),
            _ => prop_assert!(false),
        }
        prop_assert_eq!(codec::to_canonical_string(&e), codec::to_canonical_string(&v));
    }

    #[test]
    fn kobjects_survive_encoding(seed in any::<u64>(), b in 0..3usize) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let k = random_kobject(&mut r, BACKENDS[b], 2, 3, 2);
        let (d, e) = reencode(&codec::encode_kobject(&k));
        match d.document {
            Document::KObject(g) => prop_assert_eq!(&g, &k),
            _ => prop_assert!(false),
        }
        prop_assert_eq!(e, codec::encode_kobject(&k));
    }

    #[test]
    fn strict_and_two_constant_survive_encoding(seed in any::<u64>(), b in 0..3usize) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let c = random_strict(&mut r, BACKENDS[b]);
        let v = codec::encode_strict(&c, Some(2), &Annotations::default());
        let (d, e) = reencode(&v);
        match d.document {
            Document::Strict { category, truncation } => {
                prop_assert_eq!(category, c);
                prop_assert_eq!(truncation, Some(2));
            }
            _ => prop_assert!(false),
        }
        prop_assert_eq!(e, v);
        let c = random_strict(&mut r, Backend::ChQ);
        let t = random_two_constant_data(&mut r, &c);
        let v = codec::encode_two_constant(&t, None);
        let (_, e) = reencode(&v);
        prop_assert_eq!(e, v);
    }
}

#[test]
fn rationals_are_canonicalized_with_a_warning() {
    let v = serde_json::json!({
        "type": "strict-category", "backend": "vectq", "objects": ["A"],
        "homs": {"A.A": {"vectq": 1}},
        "comp": {"A.A.A": {"matrix": [["-6/4"]]}},
        "ids": {"A": {"matrix": [[3]]}}
    });
    let d = codec::decode(&v).unwrap();
    assert_eq!(d.warnings.len(), 1);
    assert!(d.warnings[0].contains("$.comp[\"A.A.A\"].matrix[0][0]"));
    let e = codec::encode(&d.document, &d.annotations);
    assert_eq!(e["comp"]["A.A.A"]["matrix"], serde_json::json!([["-3/2"]]));
    assert_eq!(e["ids"]["A"]["matrix"], serde_json::json!([["3"]]));
}

#[test]
fn schema_errors_carry_locations() {
    let cases = [
        (serde_json::json!([]), "$"),
        (serde_json::json!({"backend": "vectq", "objects": ["A"], "truncation": 0, "values": {}}), "$.truncation"),
        (serde_json::json!({"backend": "vectq", "objects": ["A", "A"], "truncation": 1, "values": {}}), "$.objects[1]"),
        (serde_json::json!({"backend": "vectq", "objects": ["A"], "truncation": 1, "values": {"A.A.A": {"vectq": 1}}}), "$.values[\"A.A.A\"]"),
        (serde_json::json!({"backend": "chq", "objects": ["A"], "truncation": 1, "values": {"A.A": {"chq": {"degrees": [0, 1], "diff": [["0", "0"], ["1", "0"]]}}}}), "$.values[\"A.A\"].chq"),
        (serde_json::json!({"backend": "finset", "objects": ["A"], "truncation": 2,
            "values": {"A.A": {"finset": ["x"]}, "A.A.A": {"finset": ["y"]}},
            "generators": {"A.A.A": {"1": {"function": [3]}}}}), "$.generators[\"A.A.A\"][\"1\"].function[0]"),
        (serde_json::json!({"type": "mystery"}), "$.type"),
    ];
    for (v, loc) in cases {
        let e = codec::decode(&v).unwrap_err();
        assert_eq!(e.location, loc, "{}", e);
    }
}
