//! Generalized comma categories `F |L G`, sections of the forgetful functor
//! and lifting along faithful functors.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fincat::{is_generating, FinCategory, Mor, Obj, PlainFunctor, RawCategory, Subgraph};
use crate::mixfun::{Arrow, VarFunctor};
use crate::natural::{hexagon, Span};
use crate::target::Codomain;
use crate::Cap;

/// Objects `(x, alpha: F L1 x -> G L2 x)` and the `R`-morphisms whose hexagon
/// commutes.
///
/// Objects are ordered by `x` and then by the order of the candidate
/// arrows; morphisms by `(f, source, target)`.
#[derive(Clone, Debug)]
pub struct CommaCategory<A> {
    category: Arc<FinCategory>,
    apex: Arc<FinCategory>,
    objects: Vec<(Obj, A)>,
    underlying: Vec<Mor>,
    object_index: HashMap<(Obj, A), Obj>,
    morphism_index: HashMap<(Mor, Obj, Obj), Mor>,
}

impl<A: Clone + Eq + std::hash::Hash> CommaCategory<A> {
    pub fn category(&self) -> &Arc<FinCategory> {
        &self.category
    }

    /// `R`
    pub fn apex(&self) -> &Arc<FinCategory> {
        &self.apex
    }

    pub fn objects(&self) -> &[(Obj, A)] {
        &self.objects
    }

    /// The `R`-morphism under comma morphism `p`.
    pub fn underlying(&self, p: Mor) -> Mor {
        self.underlying[p]
    }

    pub fn find_object(&self, x: Obj, alpha: &A) -> Option<Obj> {
        self.object_index.get(&(x, alpha.clone())).copied()
    }

    pub fn find_morphism(&self, f: Mor, source: Obj, target: Obj) -> Option<Mor> {
        self.morphism_index.get(&(f, source, target)).copied()
    }

    /// `U: F |L G -> R`
    pub fn forgetful(&self) -> PlainFunctor {
        PlainFunctor::new_unchecked(
            self.category.clone(),
            self.apex.clone(),
            self.objects.iter().map(|(x, _)| *x).collect(),
            self.underlying.clone(),
        )
        .expect("projection is in range")
    }
}

/// The full comma category.
pub fn build_comma<F, G>(
    f: &F,
    g: &G,
    span: &Span,
    cap: Cap,
) -> Result<CommaCategory<Arrow<F::Target>>>
where
    F: VarFunctor,
    G: VarFunctor<Target = F::Target>,
{
    let r = span.apex();
    let t = f.target();
    let mut total = 0u128;
    let mut candidates = Vec::with_capacity(r.object_count());
    for x in 0..r.object_count() {
        let arrows = t.hom_arrows(
            f.object(span.left().object(x)),
            g.object(span.right().object(x)),
            cap,
        )?;
        total += arrows.len() as u128;
        if total > cap.0 as u128 {
            return Err(Error::SizeCap {
                what: "comma category objects",
                count: total,
                cap: cap.0,
            });
        }
        candidates.push(arrows);
    }
    build_comma_on(f, g, span, candidates, cap)
}

/// The full subcategory of `F |L G` on the objects `(x, alpha)` with
/// `alpha` in `candidates[x]`.
pub fn build_comma_on<F, G>(
    f: &F,
    g: &G,
    span: &Span,
    candidates: Vec<Vec<Arrow<F::Target>>>,
    cap: Cap,
) -> Result<CommaCategory<Arrow<F::Target>>>
where
    F: VarFunctor,
    G: VarFunctor<Target = F::Target>,
{
    let r = span.apex().clone();
    let t = f.target();
    if candidates.len() != r.object_count() {
        return Err(Error::Shape {
            expected: format!("candidates for {} objects", r.object_count()),
            found: candidates.len().to_string(),
        });
    }
    let mut objects = Vec::new();
    let mut first = Vec::with_capacity(r.object_count());
    for (x, arrows) in candidates.iter().enumerate() {
        let (s, d) = (
            f.object(span.left().object(x)),
            g.object(span.right().object(x)),
        );
        first.push(objects.len());
        for a in arrows {
            if t.arrow_source(a) != s || t.arrow_target(a) != d {
                return Err(Error::ComponentType(x));
            }
            objects.push((x, a.clone()));
        }
    }
    let pairs: u128 = (0..r.morphism_count())
        .map(|m| (candidates[r.dom(m)].len() * candidates[r.cod(m)].len()) as u128)
        .sum();
    if pairs > cap.0 as u128 {
        return Err(Error::SizeCap {
            what: "comma category morphism candidates",
            count: pairs,
            cap: cap.0,
        });
    }
    let triples: Vec<(Mor, Obj, Obj)> = crate::par::flat_map(r.morphism_count(), |m| {
        let (x, y) = (r.dom(m), r.cod(m));
        let mut out = Vec::new();
        for (i, a) in candidates[x].iter().enumerate() {
            for (j, b) in candidates[y].iter().enumerate() {
                let (upper, lower) = hexagon(f, g, span, m, a, b);
                if upper.is_some() && upper == lower {
                    out.push((m, first[x] + i, first[y] + j));
                }
            }
        }
        out
    });
    let mut raw = RawCategory::default();
    for (x, a) in &objects {
        raw.object_labels
            .push(format!("({},{})", r.object_label(*x), t.render_arrow(a)));
    }
    let morphism_index: HashMap<(Mor, Obj, Obj), Mor> =
        triples.iter().enumerate().map(|(i, &k)| (k, i)).collect();
    for &(m, s, d) in &triples {
        raw.push_morphism(&format!("{}:{}->{}", r.morphism_label(m), s, d), s, d);
    }
    for (i, (x, _)) in objects.iter().enumerate() {
        let id = morphism_index
            .get(&(r.identity(*x), i, i))
            .copied()
            .expect("identity squares commute");
        raw.identity.push(id);
    }
    // composites are inherited from R; each must land back in the comma
    let mut by_source: Vec<Vec<Mor>> = vec![Vec::new(); objects.len()];
    for (p, &(_, s, _)) in triples.iter().enumerate() {
        by_source[s].push(p);
    }
    for (p, &(m, s, d)) in triples.iter().enumerate() {
        for &q in &by_source[d] {
            let (m2, _, e) = triples[q];
            let c = r.compose(m2, m).expect("composable in R");
            match morphism_index.get(&(c, s, e)) {
                Some(&pq) => raw.composites.push((q, p, pq)),
                None => {
                    return Err(Error::InvalidCategory(format!(
                        "composite of comma morphisms {q} . {p} fails its square"
                    )))
                }
            }
        }
    }
    // U is injective on hom-sets and preserves the composites above, so the
    // identity and associativity laws are those of R
    let category = Arc::new(FinCategory::from_validated(&raw));
    let object_index = objects
        .iter()
        .enumerate()
        .map(|(i, (x, a))| ((*x, a.clone()), i))
        .collect();
    Ok(CommaCategory {
        category,
        apex: r,
        underlying: triples.iter().map(|&(m, _, _)| m).collect(),
        objects,
        object_index,
        morphism_index,
    })
}

/// `x |-> (x, eta_x)`, `f |-> f`.
pub fn transformation_to_section<A: Clone + Eq + std::hash::Hash>(
    cc: &CommaCategory<A>,
    eta: &[A],
) -> Result<PlainFunctor> {
    let r = &cc.apex;
    if eta.len() != r.object_count() {
        return Err(Error::Shape {
            expected: format!("{} components", r.object_count()),
            found: eta.len().to_string(),
        });
    }
    let obj_map: Vec<Obj> = eta
        .iter()
        .enumerate()
        .map(|(x, a)| cc.find_object(x, a).ok_or(Error::ComponentType(x)))
        .collect::<Result<_>>()?;
    let mor_map: Vec<Mor> = (0..r.morphism_count())
        .map(|m| {
            cc.find_morphism(m, obj_map[r.dom(m)], obj_map[r.cod(m)])
                .ok_or(Error::NotNatural(m))
        })
        .collect::<Result<_>>()?;
    PlainFunctor::new_unchecked(r.clone(), cc.category.clone(), obj_map, mor_map)
}

/// Read the components off a section `S` with `U S = id`.
pub fn section_to_transformation<A: Clone + Eq + std::hash::Hash>(
    cc: &CommaCategory<A>,
    s: &PlainFunctor,
) -> Result<Vec<A>> {
    let r = &cc.apex;
    if s.source() != r || s.target() != &cc.category {
        return Err(Error::NotSection("wrong source or target".into()));
    }
    for x in 0..r.object_count() {
        if cc.objects[s.object(x)].0 != x {
            return Err(Error::NotSection(format!("object {}", r.object_label(x))));
        }
    }
    let c = &cc.category;
    for m in 0..r.morphism_count() {
        let p = s.morphism(m);
        if cc.underlying[p] != m || c.dom(p) != s.object(r.dom(m)) || c.cod(p) != s.object(r.cod(m))
        {
            return Err(Error::NotSection(format!(
                "morphism {}",
                r.morphism_label(m)
            )));
        }
    }
    Ok((0..r.object_count())
        .map(|x| cc.objects[s.object(x)].1.clone())
        .collect())
}

/// Extend a graph morphism `S0: gens -> C` with `Fth S0 = L` on `gens` to
/// the unique functor `S: B -> C` with `Fth S = L`.
///
/// `s0_objects` gives `S` on every object of `B`; `s0` lists
/// `(generator, image)`.
pub fn componentwise_lift(
    fth: &PlainFunctor,
    l: &PlainFunctor,
    gens: &Subgraph,
    s0_objects: &[Obj],
    s0: &[(Mor, Mor)],
) -> Result<PlainFunctor> {
    let b = l.source();
    let c = fth.source();
    if fth.target() != l.target() {
        return Err(Error::Lift(
            "the two functors have different targets".into(),
        ));
    }
    if let Err((f, g)) = fth.check_faithful() {
        return Err(Error::NotFaithful(f, g));
    }
    if !is_generating(b, gens) {
        return Err(Error::NotGenerating);
    }
    if s0_objects.len() != b.object_count() {
        return Err(Error::Lift(format!(
            "{} object images for {} objects",
            s0_objects.len(),
            b.object_count()
        )));
    }
    for (x, &sx) in s0_objects.iter().enumerate() {
        if sx >= c.object_count() || fth.object(sx) != l.object(x) {
            return Err(Error::Lift(format!(
                "object {} is not lifted",
                b.object_label(x)
            )));
        }
    }
    let mut image: Vec<Option<Mor>> = vec![None; b.morphism_count()];
    for x in 0..b.object_count() {
        image[b.identity(x)] = Some(c.identity(s0_objects[x]));
    }
    for &(f, sf) in s0 {
        if !gens.contains(f) {
            return Err(Error::Lift(format!(
                "{} is not a generator",
                b.morphism_label(f)
            )));
        }
        if sf >= c.morphism_count()
            || c.dom(sf) != s0_objects[b.dom(f)]
            || c.cod(sf) != s0_objects[b.cod(f)]
            || fth.morphism(sf) != l.morphism(f)
        {
            return Err(Error::Lift(format!(
                "generator {} is not lifted",
                b.morphism_label(f)
            )));
        }
        if let Some(old) = image[f] {
            if old != sf {
                return Err(Error::Lift(format!(
                    "generator {} given two images",
                    b.morphism_label(f)
                )));
            }
        }
        image[f] = Some(sf);
    }
    if let Some(&f) = gens.morphisms().iter().find(|&&f| image[f].is_none()) {
        return Err(Error::Lift(format!(
            "generator {} has no image",
            b.morphism_label(f)
        )));
    }
    // extend along paths, postcomposing one generator at a time
    let mut frontier: Vec<Mor> = (0..b.morphism_count())
        .filter(|&f| image[f].is_some())
        .collect();
    while let Some(f) = frontier.pop() {
        let sf = image[f].expect("known");
        for &gen in gens.morphisms() {
            if b.dom(gen) != b.cod(f) {
                continue;
            }
            let h = b.compose(gen, f).expect("composable");
            let sh = c
                .compose(image[gen].expect("known"), sf)
                .expect("lifts compose");
            match image[h] {
                Some(old) => assert_eq!(old, sh, "faithfulness forces a unique extension"),
                None => {
                    image[h] = Some(sh);
                    frontier.push(h);
                }
            }
        }
    }
    let mor_map: Vec<Mor> = image
        .into_iter()
        .map(|s| s.expect("generators generate"))
        .collect();
    let s = PlainFunctor::new(b.clone(), c.clone(), s0_objects.to_vec(), mor_map)?;
    assert_eq!(&s.then(fth)?, l, "the lift covers L");
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{chain, symmetric, walking_arrow};
    use crate::mixfun::MixedFunctor;
    use crate::natural::{build_span_from_partition, check_heuristic_naturality, derive_partition};
    use crate::target::Function;

    fn covariant(p: &PlainFunctor) -> MixedFunctor<FinCategory> {
        MixedFunctor::from_plain(p)
    }

    fn is_faithful<A: Clone + Eq + std::hash::Hash>(cc: &CommaCategory<A>) -> bool {
        cc.forgetful().is_faithful()
    }

    #[test]
    fn identity_on_arrow() {
        let two = Arc::new(walking_arrow());
        let id = covariant(&PlainFunctor::identity(two.clone()));
        let span = Span::diagonal(&two);
        let cc = build_comma(&id, &id, &span, Cap::default()).unwrap();
        assert_eq!(cc.objects(), &[(0, 0), (1, 1)]);
        // oracle: classical squares G(f) alpha = beta F(f)
        let mut expected = 0;
        for f in 0..3 {
            for a in two.hom(two.dom(f), two.dom(f)) {
                for b in two.hom(two.cod(f), two.cod(f)) {
                    if two.compose(f, a) == two.compose(b, f) {
                        expected += 1;
                    }
                }
            }
        }
        assert_eq!(cc.category().morphism_count(), expected);
        assert_eq!(expected, 3);
        assert!(is_faithful(&cc));
        let s = transformation_to_section(&cc, &[0, 1]).unwrap();
        assert_eq!(
            s.then(&cc.forgetful()).unwrap(),
            PlainFunctor::identity(two.clone())
        );
        assert_eq!(section_to_transformation(&cc, &s).unwrap(), vec![0, 1]);
    }

    #[test]
    fn ordinary_comma() {
        // F: 2 -> 3 picking 0 < 1, G = identity on 3, along the identity span on 2 x 3
        let two = Arc::new(walking_arrow());
        let c3 = Arc::new(chain(3));
        let fp = PlainFunctor::new(
            two.clone(),
            c3.clone(),
            vec![0, 1],
            vec![0, 1, c3.find_morphism("0<1").unwrap()],
        )
        .unwrap();
        let gp = PlainFunctor::identity(c3.clone());
        let pat = derive_partition("F(x) -> G(y)").unwrap();
        let part = pat
            .bind(std::slice::from_ref(&two), std::slice::from_ref(&c3))
            .unwrap();
        let ps = build_span_from_partition(&part, Cap::default()).unwrap();
        let cc = build_comma(&covariant(&fp), &covariant(&gp), &ps.span, Cap::default()).unwrap();
        // classical F|G: (a, b, alpha: Fa -> b), (f, g) with g alpha = beta F f
        let mut objects = Vec::new();
        for a in 0..2 {
            for b in 0..3 {
                for alpha in c3.hom(fp.object(a), b) {
                    objects.push((a, b, alpha));
                }
            }
        }
        let mut morphisms = 0;
        for (a, b, alpha) in &objects {
            for (a2, b2, beta) in &objects {
                for f in two.hom(*a, *a2) {
                    for g in c3.hom(*b, *b2) {
                        if c3.compose(g, *alpha) == c3.compose(*beta, fp.morphism(f)) {
                            morphisms += 1;
                        }
                    }
                }
            }
        }
        assert_eq!(cc.objects().len(), objects.len());
        assert_eq!(cc.category().morphism_count(), morphisms);
        assert!(is_faithful(&cc));
    }

    #[test]
    fn algebras_on_s3() {
        // F = id, G = conjugation by (12); objects are the elements t of S3
        let s3 = Arc::new(symmetric(3));
        let c = s3.find_morphism("(12)").unwrap();
        let conj: Vec<Mor> = (0..6)
            .map(|f| s3.compose_path(&[c, f, c]).unwrap())
            .collect();
        let fp = PlainFunctor::identity(s3.clone());
        let gp = PlainFunctor::new(s3.clone(), s3.clone(), vec![0], conj.clone()).unwrap();
        let (f, g) = (covariant(&fp), covariant(&gp));
        let span = Span::diagonal(&s3);
        let cc = build_comma(&f, &g, &span, Cap::default()).unwrap();
        assert_eq!(cc.objects().len(), 6);
        // direct construction: f: t -> t' iff conj(f) t = t' f
        let mut direct = Vec::new();
        for m in 0..6 {
            for t in 0..6 {
                for t2 in 0..6 {
                    if s3.compose(conj[m], t) == s3.compose(t2, m) {
                        direct.push((m, t, t2));
                    }
                }
            }
        }
        assert_eq!(cc.category().morphism_count(), direct.len());
        for (m, t, t2) in direct {
            assert!(cc.find_morphism(m, t, t2).is_some());
        }
        assert!(is_faithful(&cc));
        // natural families id => conj are the elements t with conj(f) t = t f
        let mut natural = 0;
        for t in 0..6 {
            let eta = vec![t];
            let ok = check_heuristic_naturality(&f, &g, &span, &eta, None)
                .unwrap()
                .is_natural();
            match transformation_to_section(&cc, &eta) {
                Ok(s) => {
                    assert!(ok);
                    natural += 1;
                    assert_eq!(section_to_transformation(&cc, &s).unwrap(), eta);
                }
                Err(Error::NotNatural(_)) => assert!(!ok),
                Err(e) => panic!("{e}"),
            }
        }
        // (12) f (12) t = t f for every f forces t = (12)
        assert_eq!(natural, 1);
    }

    #[test]
    fn lift_from_generators() {
        let two = Arc::new(walking_arrow());
        let id = PlainFunctor::identity(two.clone());
        let u = two.find_morphism("u").unwrap();
        let gens = Subgraph::new(&two, vec![u]).unwrap();
        let s = componentwise_lift(&id, &id, &gens, &[0, 1], &[(u, u)]).unwrap();
        assert_eq!(s, id);

        // lift a section of U from its single-class values
        let s3 = Arc::new(symmetric(3));
        let hom = crate::mixfun::hom_functor(&s3, Cap::default()).unwrap();
        let part = derive_partition("F(x,y) -> G(x,y)")
            .unwrap()
            .bind(&[s3.clone(), s3.clone()], &[s3.clone(), s3.clone()])
            .unwrap();
        let ps = build_span_from_partition(&part, Cap::default()).unwrap();
        // the full comma has 6^6 objects; keep the identity and the left translations
        let translations: Vec<Function> = (0..6)
            .map(|t| Function::from_fn(6, 6, |h| s3.compose(t, h).unwrap()))
            .collect();
        let cc = build_comma_on(&hom, &hom, &ps.span, vec![translations], Cap::default()).unwrap();
        assert!(is_faithful(&cc));
        let eta = vec![Function::identity(6)];
        let full = transformation_to_section(&cc, &eta).unwrap();
        let gens = ps.single_class_generators();
        let s0: Vec<(Mor, Mor)> = gens
            .morphisms()
            .iter()
            .map(|&f| (f, full.morphism(f)))
            .collect();
        let lifted = componentwise_lift(
            &cc.forgetful(),
            &PlainFunctor::identity(ps.span.apex().clone()),
            &gens,
            full.object_map(),
            &s0,
        )
        .unwrap();
        assert_eq!(lifted, full);

        let z1 = Arc::new(crate::fixtures::cyclic(1));
        let collapse = PlainFunctor::new(s3.clone(), z1.clone(), vec![0], vec![0; 6]).unwrap();
        let l = PlainFunctor::identity(z1.clone());
        assert!(matches!(
            componentwise_lift(&collapse, &l, &Subgraph::all(&z1), &[0], &[]),
            Err(Error::NotFaithful(..))
        ));
    }
}
