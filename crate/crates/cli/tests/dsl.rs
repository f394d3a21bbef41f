use std::path::PathBuf;

use catv_cli::commands::check;
use catv_cli::dsl::parse;
use catv_cli::workspace::{elaborate, load};
use catv_core::Cap;
use proptest::prelude::*;

fn fixtures() -> Vec<(PathBuf, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    let mut out: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "catv"))
        .map(|p| {
            let text = std::fs::read_to_string(&p).unwrap();
            (p, text)
        })
        .collect();
    out.sort();
    out
}

#[test]
fn fixtures_reprint_to_equal_workspaces() {
    let all = fixtures();
    assert!(all.len() >= 8);
    for (path, text) in all {
        if path.ends_with("ev.catv") {
            continue;
        }
        let file = parse(&text).unwrap_or_else(|d| panic!("{}:{d}", path.display()));
        let printed = file.to_string();
        let again = parse(&printed)
            .unwrap_or_else(|d| panic!("reprinted {}:{d}\n{printed}", path.display()));
        assert_eq!(again, file, "{}", path.display());
        let a = check(&elaborate(file, Cap::default()).unwrap()).unwrap();
        let b = check(&elaborate(again, Cap::default()).unwrap()).unwrap();
        // positions move when reprinted; everything else must agree
        let strip = |mut j: serde_json::Value| {
            for a in j["assertions"].as_array_mut().unwrap() {
                a.as_object_mut().unwrap().remove("line");
            }
            j
        };
        assert_eq!(strip(a.json), strip(b.json), "{}", path.display());
        assert!(a.ok, "{}", path.display());
    }
}

#[test]
fn unknown_morphism_is_reported_where_it_is_used() {
    let text = "category Two = arrow\nsetfunctor F : Two -> Set {\n  obj a => 1 ; obj b => 1\n  mor v => [0]\n}\n";
    let d = load(text, Cap::default()).unwrap_err();
    assert_eq!((d.loc.line, d.loc.col), (4, 7));
    assert_eq!(d.message, "unknown morphism 'v' in Two");
}

#[test]
fn semantic_errors_carry_locations() {
    let cases = [
        ("category A = arrow\ncategory A = arrow", (2, 10), "duplicate category 'A'"),
        ("variance V = covariant(B)", (1, 24), "unknown category 'B'"),
        ("category S = symmetric(3)\nvariance V on S { E: \"(12)\" ; M: \"(13)\" }", (2, 10), "is not a variance"),
        (
            "category Two = arrow\nsetfunctor F : Two -> Set { obj a => 2 ; obj b => 1 ; mor u => [0] }",
            (2, 64),
            "expected 2 values",
        ),
        ("category Two = arrow\nassert natural t", (2, 16), "unknown transformation 't'"),
        ("category C = chain(0)", (1, 20), "expected a number in 1..=100"),
    ];
    for (text, at, msg) in cases {
        let d = load(text, Cap::default()).unwrap_err();
        assert_eq!((d.loc.line, d.loc.col), at, "{text}: {d}");
        assert!(d.message.contains(msg), "{text}: {d}");
    }
}

#[test]
fn non_functorial_data_is_rejected() {
    // u then v must go to the listed composite
    let text = "category C { objects: a, b, c ; mor u: a -> b ; mor v: b -> c ; mor w: a -> c ; compose v . u = w }
        setfunctor F : C -> Set { obj a => 1 ; obj b => 2 ; obj c => 2 ; mor u => [0] ; mor v => [1, 0] ; mor w => [0] }";
    let d = load(text, Cap::default()).unwrap_err();
    assert!(d.message.contains("not a functor"), "{d}");
}

fn ident() -> impl Strategy<Value = String> {
    "[a-z][a-z0-9_]{0,5}".prop_filter("not a keyword", |s| {
        !matches!(
            s.as_str(),
            "obj"
                | "mor"
                | "at"
                | "compose"
                | "objects"
                | "along"
                | "variance"
                | "size"
                | "count"
                | "not"
                | "table"
                | "elements"
                | "over"
                | "use"
                | "assert"
        )
    })
}

proptest! {
    #[test]
    fn chain_declarations_round_trip(names in prop::collection::hash_set(ident(), 2..6), quoted in any::<bool>()) {
        let names: Vec<String> = names.into_iter().collect();
        let q = |s: &str| if quoted { format!("\"{s}\"") } else { s.to_string() };
        let objects: Vec<String> = names.iter().map(|n| q(n)).collect();
        let mut text = format!("category C {{ objects: {}", objects.join(", "));
        for (i, w) in names.windows(2).enumerate() {
            text.push_str(&format!(" ; mor m{i}: {} -> {}", q(&w[0]), q(&w[1])));
        }
        text.push_str(" }\nspan D = diagonal(C)\n");
        let file = parse(&text).unwrap();
        let printed = file.to_string();
        prop_assert_eq!(parse(&printed).unwrap(), file);
    }
}
