use std::sync::Arc;

use crate::error::{Error, Result};
use crate::Cap;

use super::category::{FinCategory, Mor, Obj};
use super::functor::PlainFunctor;
use super::raw::RawCategory;

/// Product of finitely many categories, indices in lexicographic order with
/// the first factor most significant.
///
/// A single factor comes back as itself, so the identity index map is the
/// isomorphism.
pub fn product_category(factors: &[Arc<FinCategory>], cap: Cap) -> Result<FinCategory> {
    match factors {
        [] => Err(Error::Shape {
            expected: "at least one factor".into(),
            found: "none".into(),
        }),
        [only] => {
            if only.morphism_count() > cap.0 {
                return Err(Error::SizeCap {
                    what: "product category",
                    count: only.morphism_count() as u128,
                    cap: cap.0,
                });
            }
            Ok((**only).clone())
        }
        _ => FinCategory::product_of(factors, cap),
    }
}

/// Disjoint union; summand `i` keeps its indices shifted by the sizes of the
/// summands before it.
pub fn disjoint_union(parts: &[&FinCategory]) -> FinCategory {
    let mut raw = RawCategory::default();
    let (mut obj_off, mut mor_off) = (0, 0);
    for c in parts {
        for x in 0..c.object_count() {
            raw.object_labels.push(c.object_label(x));
            raw.identity.push(c.identity(x) + mor_off);
        }
        for f in 0..c.morphism_count() {
            raw.push_morphism(&c.morphism_label(f), c.dom(f) + obj_off, c.cod(f) + obj_off);
        }
        for (g, f) in c.composable_pairs() {
            let h = c.compose(g, f).expect("composable");
            raw.composites.push((g + mor_off, f + mor_off, h + mor_off));
        }
        obj_off += c.object_count();
        mor_off += c.morphism_count();
    }
    FinCategory::from_validated(&raw)
}

/// Connected components of the underlying undirected graph, each sorted,
/// ordered by smallest object.
pub fn path_components(c: &FinCategory) -> Vec<Vec<Obj>> {
    let n = c.object_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut y = x;
        while parent[y] != r {
            let next = parent[y];
            parent[y] = r;
            y = next;
        }
        r
    }
    for f in 0..c.morphism_count() {
        let (a, b) = (find(&mut parent, c.dom(f)), find(&mut parent, c.cod(f)));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut comps: Vec<Vec<Obj>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for x in 0..n {
        let r = find(&mut parent, x);
        if slot[r] == usize::MAX {
            slot[r] = comps.len();
            comps.push(Vec::new());
        }
        comps[slot[r]].push(x);
    }
    comps
}

/// Subcategory spanned by a morphism set. Objects are those whose identity is
/// in the set; the set must be closed under composition and typed inside
/// those objects. Returns the subcategory with its inclusion.
pub fn subcategory(
    c: &Arc<FinCategory>,
    morphisms: &[Mor],
) -> Result<(Arc<FinCategory>, PlainFunctor)> {
    let mut member = vec![false; c.morphism_count()];
    for &f in morphisms {
        if f >= c.morphism_count() {
            return Err(Error::OutOfRange {
                what: "morphism",
                index: f,
                limit: c.morphism_count(),
            });
        }
        member[f] = true;
    }
    let objects: Vec<Obj> = (0..c.object_count())
        .filter(|&x| member[c.identity(x)])
        .collect();
    let mut new_obj = vec![usize::MAX; c.object_count()];
    for (i, &x) in objects.iter().enumerate() {
        new_obj[x] = i;
    }
    let mors: Vec<Mor> = (0..c.morphism_count()).filter(|&f| member[f]).collect();
    let mut new_mor = vec![usize::MAX; c.morphism_count()];
    for (i, &f) in mors.iter().enumerate() {
        new_mor[f] = i;
    }
    let mut raw = RawCategory {
        object_labels: objects.iter().map(|&x| c.object_label(x)).collect(),
        identity: objects.iter().map(|&x| new_mor[c.identity(x)]).collect(),
        ..Default::default()
    };
    for &f in &mors {
        let (d, e) = (new_obj[c.dom(f)], new_obj[c.cod(f)]);
        if d == usize::MAX || e == usize::MAX {
            return Err(Error::NotWide {
                which: "subcategory",
                object: if d == usize::MAX { c.dom(f) } else { c.cod(f) },
            });
        }
        raw.push_morphism(&c.morphism_label(f), d, e);
    }
    for &f in &mors {
        for &g in c.outgoing(c.cod(f)).iter() {
            if !member[g] {
                continue;
            }
            let h = c.compose(g, f).expect("composable");
            if !member[h] {
                return Err(Error::NotClosed {
                    which: "subcategory",
                    g,
                    f,
                });
            }
            raw.composites.push((new_mor[g], new_mor[f], new_mor[h]));
        }
    }
    let sub = Arc::new(FinCategory::from_validated(&raw));
    let inclusion = PlainFunctor::new_unchecked(sub.clone(), c.clone(), objects, mors)?;
    Ok((sub, inclusion))
}

/// Equalizer of two parallel functors in the category of small categories.
pub fn equalizer(p: &PlainFunctor, q: &PlainFunctor) -> Result<(Arc<FinCategory>, PlainFunctor)> {
    if p.source() != q.source() || p.target() != q.target() {
        return Err(Error::Shape {
            expected: "parallel functors".into(),
            found: "different source or target".into(),
        });
    }
    let c = p.source();
    let agree: Vec<Mor> = (0..c.morphism_count())
        .filter(|&f| p.morphism(f) == q.morphism(f))
        .collect();
    subcategory(c, &agree)
}

/// A set of morphisms of an ambient category; identities always count as
/// generated.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Subgraph {
    morphisms: Vec<Mor>,
}

impl Subgraph {
    pub fn new(c: &FinCategory, mut morphisms: Vec<Mor>) -> Result<Subgraph> {
        morphisms.sort_unstable();
        morphisms.dedup();
        if let Some(&f) = morphisms.iter().find(|&&f| f >= c.morphism_count()) {
            return Err(Error::OutOfRange {
                what: "morphism",
                index: f,
                limit: c.morphism_count(),
            });
        }
        Ok(Subgraph { morphisms })
    }

    pub fn all(c: &FinCategory) -> Subgraph {
        Subgraph {
            morphisms: (0..c.morphism_count()).collect(),
        }
    }

    pub fn empty() -> Subgraph {
        Subgraph::default()
    }

    pub fn morphisms(&self) -> &[Mor] {
        &self.morphisms
    }

    pub fn len(&self) -> usize {
        self.morphisms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.morphisms.is_empty()
    }

    pub fn contains(&self, f: Mor) -> bool {
        self.morphisms.binary_search(&f).is_ok()
    }
}

/// Closure of identities under post-composition with subgraph morphisms.
pub fn generated_closure(c: &FinCategory, s: &Subgraph) -> Vec<bool> {
    let mut reached = vec![false; c.morphism_count()];
    let mut queue: Vec<Mor> = (0..c.object_count()).map(|x| c.identity(x)).collect();
    for &f in &queue {
        reached[f] = true;
    }
    let mut by_dom: Vec<Vec<Mor>> = vec![Vec::new(); c.object_count()];
    for &g in s.morphisms() {
        by_dom[c.dom(g)].push(g);
    }
    while let Some(h) = queue.pop() {
        for &g in &by_dom[c.cod(h)] {
            let gh = c.compose(g, h).expect("composable");
            if !reached[gh] {
                reached[gh] = true;
                queue.push(gh);
            }
        }
    }
    reached
}

/// Every morphism is a composite of subgraph morphisms and identities.
pub fn is_generating(c: &FinCategory, s: &Subgraph) -> bool {
    generated_closure(c, s).into_iter().all(|r| r)
}

/// Opposite category with the same indices: `dom` and `cod` swap and
/// `g .op f = f . g`.
pub fn opposite(c: &FinCategory) -> FinCategory {
    let mut raw = RawCategory {
        object_labels: (0..c.object_count()).map(|x| c.object_label(x)).collect(),
        identity: (0..c.object_count()).map(|x| c.identity(x)).collect(),
        ..Default::default()
    };
    for f in 0..c.morphism_count() {
        raw.push_morphism(&c.morphism_label(f), c.cod(f), c.dom(f));
    }
    for (g, f) in c.composable_pairs() {
        raw.composites
            .push((f, g, c.compose(g, f).expect("composable")));
    }
    FinCategory::from_validated(&raw)
}
