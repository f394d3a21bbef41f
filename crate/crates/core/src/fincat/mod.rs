//! Finite categories, plain functors, products and subgraphs.

mod category;
mod functor;
mod ops;
mod raw;

pub use category::{FinCategory, Mor, Obj};
pub use functor::{FunctorViolation, PlainFunctor};
pub use ops::{
    disjoint_union, equalizer, generated_closure, is_generating, opposite, path_components,
    product_category, subcategory, Subgraph,
};
pub use raw::{
    validate_category, CategoryBuilder, RawCategory, RawMorphism, ValidationReport, Violation,
};

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::fixtures::{chain, cyclic, symmetric, walking_arrow};
    use crate::Cap;

    #[test]
    fn walking_arrow_is_valid() {
        let c = walking_arrow();
        let report = validate_category(&c.to_raw()).unwrap();
        assert!(report.is_valid());
        assert_eq!(c.object_count(), 2);
        assert_eq!(c.morphism_count(), 3);
    }

    #[test]
    fn wrong_codomain_is_reported() {
        let mut b = CategoryBuilder::new();
        let a = b.object("a");
        let bb = b.object("b");
        let c = b.object("c");
        let u = b.morphism("u", a, bb);
        let v = b.morphism("v", bb, c);
        let w = b.morphism("w", a, bb); // wrong codomain for v . u
        b.compose(v, u, w);
        let report = validate_category(&b.into_raw()).unwrap();
        assert!(!report.is_valid());
        assert!(report.pairs().contains(&(v, u)));
    }

    #[test]
    fn missing_composite_is_reported() {
        let mut b = CategoryBuilder::new();
        let a = b.object("a");
        let bb = b.object("b");
        let c = b.object("c");
        let u = b.morphism("u", a, bb);
        let v = b.morphism("v", bb, c);
        let report = validate_category(&b.into_raw()).unwrap();
        assert_eq!(report.violations, vec![Violation::Missing { g: v, f: u }]);
    }

    #[test]
    fn out_of_range_is_structural() {
        let mut raw = walking_arrow().to_raw();
        raw.composites.push((7, 0, 0));
        assert!(matches!(
            validate_category(&raw),
            Err(crate::Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn non_associative_table_is_caught() {
        // a one-object "table" that is unital but not associative
        let labels: Vec<String> = ["e", "a", "b"].iter().map(|s| s.to_string()).collect();
        let table = vec![vec![0, 1, 2], vec![1, 0, 0], vec![2, 2, 0]];
        let err = FinCategory::from_monoid_table(&labels, &table).unwrap_err();
        assert!(matches!(err, crate::Error::InvalidCategory(_)));
    }

    #[test]
    fn product_sizes() {
        let two = Arc::new(walking_arrow());
        let p = product_category(&[two.clone(), two.clone()], Cap::default()).unwrap();
        assert_eq!((p.object_count(), p.morphism_count()), (4, 9));
        assert!(validate_category(&p.to_raw()).unwrap().is_valid());

        let s3 = Arc::new(symmetric(3));
        let q = product_category(&[s3.clone(), s3.clone()], Cap::default()).unwrap();
        assert_eq!((q.object_count(), q.morphism_count()), (1, 36));
        assert!(validate_category(&q.to_raw()).unwrap().is_valid());

        let single = product_category(std::slice::from_ref(&s3), Cap::default()).unwrap();
        assert_eq!(single, *s3);
    }

    #[test]
    fn product_cap_is_enforced() {
        let s3 = Arc::new(symmetric(3));
        let err = product_category(&[s3.clone(), s3.clone(), s3], Cap(100)).unwrap_err();
        assert_eq!(
            err,
            crate::Error::SizeCap {
                what: "product category",
                count: 216,
                cap: 100
            }
        );
    }

    #[test]
    fn product_hom_positions_match_hom_lists() {
        let two = Arc::new(walking_arrow());
        let c3 = Arc::new(chain(3));
        let p = product_category(&[two, c3], Cap::default()).unwrap();
        for x in 0..p.object_count() {
            for y in 0..p.object_count() {
                for (i, f) in p.hom(x, y).into_iter().enumerate() {
                    assert_eq!(p.hom_position(f), i);
                    assert_eq!((p.dom(f), p.cod(f)), (x, y));
                }
            }
        }
    }

    #[test]
    fn generation() {
        let two = walking_arrow();
        let u = two.find_morphism("u").unwrap();
        assert!(is_generating(&two, &Subgraph::new(&two, vec![u]).unwrap()));
        assert!(!is_generating(&two, &Subgraph::empty()));

        let s3 = symmetric(3);
        let t = s3.find_morphism("(12)").unwrap();
        let r = s3.find_morphism("(123)").unwrap();
        assert!(!is_generating(&s3, &Subgraph::new(&s3, vec![t]).unwrap()));
        assert!(is_generating(&s3, &Subgraph::new(&s3, vec![t, r]).unwrap()));
        assert!(is_generating(&s3, &Subgraph::all(&s3)));
    }

    #[test]
    fn coordinate_morphisms_generate_products() {
        let a = Arc::new(walking_arrow());
        let b = Arc::new(cyclic(3));
        let p = product_category(&[a.clone(), b.clone()], Cap::default()).unwrap();
        let coords: Vec<Mor> = (0..p.morphism_count())
            .filter(|&f| {
                let c = p.split_morphism(f);
                a.is_identity(c[0]) || b.is_identity(c[1])
            })
            .collect();
        assert!(is_generating(&p, &Subgraph::new(&p, coords).unwrap()));
    }

    #[test]
    fn components() {
        assert_eq!(path_components(&walking_arrow()), vec![vec![0, 1]]);
        let u = disjoint_union(&[&walking_arrow(), &symmetric(3)]);
        assert_eq!(path_components(&u), vec![vec![0, 1], vec![2]]);
        assert!(validate_category(&u.to_raw()).unwrap().is_valid());
        assert_eq!(path_components(&cyclic(5)).len(), 1);
    }

    #[test]
    fn functor_laws_and_faithfulness() {
        let c = Arc::new(chain(3));
        let id = PlainFunctor::identity(c.clone());
        assert!(id.validate().is_empty());
        assert!(id.is_faithful());

        let collapse =
            PlainFunctor::new_unchecked(c.clone(), c.clone(), vec![0, 0, 0], vec![0; 6]).unwrap();
        assert!(
            collapse.validate().is_empty(),
            "constant functor at an object is a functor"
        );
        let two = Arc::new(walking_arrow());
        let to_point =
            PlainFunctor::new(two.clone(), c.clone(), vec![0, 0], vec![0, 0, 0]).unwrap();
        assert!(
            to_point.is_faithful(),
            "the walking arrow has no parallel pairs"
        );
        let s3 = Arc::new(symmetric(3));
        let z1 = Arc::new(cyclic(1));
        let trivial = PlainFunctor::new(s3.clone(), z1, vec![0], vec![0; 6]).unwrap();
        assert!(trivial.check_faithful().is_err());
    }

    #[test]
    fn diagonal_and_projection() {
        let s3 = Arc::new(symmetric(3));
        let d = PlainFunctor::diagonal(&s3, 2, Cap::default()).unwrap();
        assert!(d.validate().is_empty());
        let p0 = PlainFunctor::projection(d.target(), 0).unwrap();
        assert_eq!(d.then(&p0).unwrap(), PlainFunctor::identity(s3));
    }

    #[test]
    fn equalizer_of_automorphisms() {
        // the swap on Z3 (x -> -x) agrees with the identity only at 0
        let z3 = Arc::new(cyclic(3));
        let id = PlainFunctor::identity(z3.clone());
        let neg = PlainFunctor::new(z3.clone(), z3.clone(), vec![0], vec![0, 2, 1]).unwrap();
        let (eq, inc) = equalizer(&id, &neg).unwrap();
        assert_eq!(eq.morphism_count(), 1);
        assert!(inc.validate().is_empty());
    }
}
