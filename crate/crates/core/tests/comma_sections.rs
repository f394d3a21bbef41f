use std::sync::Arc;

use catv_core::comma::{build_comma, section_to_transformation, transformation_to_section};
use catv_core::fixtures::random::{random_chain_functor, random_gset, times_constant};
use catv_core::fixtures::{chain, cyclic};
use catv_core::mixfun::{hom_functor, VarFunctor};
use catv_core::natural::{
    build_span_from_partition, check_heuristic_naturality, derive_partition, Span,
};
use catv_core::target::{FinSet, Function};
use catv_core::Cap;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Every family `F L1 x -> G L2 x`.
fn all_families<F, G>(f: &F, g: &G, span: &Span) -> Vec<Vec<Function>>
where
    F: VarFunctor<Target = FinSet>,
    G: VarFunctor<Target = FinSet>,
{
    let mut out = vec![Vec::new()];
    for x in 0..span.apex().object_count() {
        let (a, b) = (
            f.object(span.left().object(x)),
            g.object(span.right().object(x)),
        );
        let choices = b.pow(a as u32);
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..choices).map(move |k| {
                    let mut v = prefix.clone();
                    v.push(Function::from_rank(a, b, k));
                    v
                })
            })
            .collect();
    }
    out
}

fn check_bijection<F, G>(f: &F, g: &G, span: &Span) -> (usize, usize)
where
    F: VarFunctor<Target = FinSet>,
    G: VarFunctor<Target = FinSet>,
{
    let cc = build_comma(f, g, span, Cap::default()).unwrap();
    assert!(cc.forgetful().is_faithful());
    let (mut sections, mut families) = (0, 0);
    for eta in all_families(f, g, span) {
        families += 1;
        let natural = check_heuristic_naturality(f, g, span, &eta, None)
            .unwrap()
            .is_natural();
        match transformation_to_section(&cc, &eta) {
            Ok(s) => {
                assert!(natural);
                assert_eq!(
                    s.then(&cc.forgetful()).unwrap(),
                    catv_core::fincat::PlainFunctor::identity(span.apex().clone())
                );
                assert_eq!(section_to_transformation(&cc, &s).unwrap(), eta);
                sections += 1;
            }
            Err(_) => assert!(!natural),
        }
    }
    (sections, families)
}

#[test]
fn sections_match_natural_families_on_chains() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let c3 = Arc::new(chain(3));
    let span = Span::diagonal(&c3);
    let mut any = 0;
    for _ in 0..20 {
        let f = random_chain_functor(&mut rng, &c3, 2);
        let g = random_chain_functor(&mut rng, &c3, 3);
        let (sections, families) = check_bijection(&f, &g, &span);
        assert!(sections <= families);
        any += sections;
    }
    assert!(any > 0);
}

#[test]
fn sections_match_equivariant_maps() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let z3 = Arc::new(cyclic(3));
    let span = Span::diagonal(&z3);
    for _ in 0..10 {
        let f = random_gset(&mut rng, &z3, 2);
        let g = random_gset(&mut rng, &z3, 2);
        check_bijection(&f, &g, &span);
    }
}

#[test]
fn sections_along_a_product_span() {
    let c3 = Arc::new(chain(3));
    let hom = hom_functor(&c3, Cap::default()).unwrap();
    let g = times_constant(&hom, 2);
    let pattern = derive_partition("F(x,y) -> G(x,y)").unwrap();
    let p = pattern
        .bind(&[c3.clone(), c3.clone()], &[c3.clone(), c3.clone()])
        .unwrap();
    let ps = build_span_from_partition(&p, Cap::default()).unwrap();
    let (sections, families) = check_bijection(&hom, &g, &ps.span);
    assert_eq!(families, 64);
    // both copies of the identity family, and nothing mixed
    assert_eq!(sections, 2);
}
