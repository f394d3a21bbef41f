use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::Cap;

use super::category::{FinCategory, Mor, Obj};
use super::ops::product_category;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FunctorViolation {
    Typing { f: Mor },
    Identity { x: Obj },
    Composition { g: Mor, f: Mor },
}

/// A covariant functor between finite categories.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlainFunctor {
    source: Arc<FinCategory>,
    target: Arc<FinCategory>,
    obj_map: Vec<Obj>,
    mor_map: Vec<Mor>,
}

impl PlainFunctor {
    /// Build and check all functor laws.
    pub fn new(
        source: Arc<FinCategory>,
        target: Arc<FinCategory>,
        obj_map: Vec<Obj>,
        mor_map: Vec<Mor>,
    ) -> Result<PlainFunctor> {
        let functor = PlainFunctor::new_unchecked(source, target, obj_map, mor_map)?;
        let violations = functor.validate();
        if let Some(v) = violations.first() {
            return Err(Error::InvalidFunctor(format!("{v:?}")));
        }
        Ok(functor)
    }

    /// Build with range checks only.
    pub fn new_unchecked(
        source: Arc<FinCategory>,
        target: Arc<FinCategory>,
        obj_map: Vec<Obj>,
        mor_map: Vec<Mor>,
    ) -> Result<PlainFunctor> {
        if obj_map.len() != source.object_count() || mor_map.len() != source.morphism_count() {
            return Err(Error::Shape {
                expected: format!(
                    "{} objects, {} morphisms",
                    source.object_count(),
                    source.morphism_count()
                ),
                found: format!("{}, {}", obj_map.len(), mor_map.len()),
            });
        }
        for &x in &obj_map {
            if x >= target.object_count() {
                return Err(Error::OutOfRange {
                    what: "object",
                    index: x,
                    limit: target.object_count(),
                });
            }
        }
        for &f in &mor_map {
            if f >= target.morphism_count() {
                return Err(Error::OutOfRange {
                    what: "morphism",
                    index: f,
                    limit: target.morphism_count(),
                });
            }
        }
        Ok(PlainFunctor {
            source,
            target,
            obj_map,
            mor_map,
        })
    }

    pub fn identity(c: Arc<FinCategory>) -> PlainFunctor {
        PlainFunctor {
            obj_map: (0..c.object_count()).collect(),
            mor_map: (0..c.morphism_count()).collect(),
            source: c.clone(),
            target: c,
        }
    }

    pub fn source(&self) -> &Arc<FinCategory> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FinCategory> {
        &self.target
    }

    pub fn object(&self, x: Obj) -> Obj {
        self.obj_map[x]
    }

    pub fn morphism(&self, f: Mor) -> Mor {
        self.mor_map[f]
    }

    pub fn object_map(&self) -> &[Obj] {
        &self.obj_map
    }

    pub fn morphism_map(&self) -> &[Mor] {
        &self.mor_map
    }

    pub fn validate(&self) -> Vec<FunctorViolation> {
        let (s, t) = (&*self.source, &*self.target);
        let mut out = Vec::new();
        for x in 0..s.object_count() {
            if self.mor_map[s.identity(x)] != t.identity(self.obj_map[x]) {
                out.push(FunctorViolation::Identity { x });
            }
        }
        for f in 0..s.morphism_count() {
            let image = self.mor_map[f];
            if t.dom(image) != self.obj_map[s.dom(f)] || t.cod(image) != self.obj_map[s.cod(f)] {
                out.push(FunctorViolation::Typing { f });
            }
        }
        if !out.is_empty() {
            return out;
        }
        out.extend(crate::par::flat_map(s.morphism_count(), |f| {
            s.outgoing(s.cod(f))
                .iter()
                .filter(|&&g| {
                    let gf = s.compose(g, f).expect("composable");
                    t.compose(self.mor_map[g], self.mor_map[f]) != Some(self.mor_map[gf])
                })
                .map(|&g| FunctorViolation::Composition { g, f })
                .collect()
        }));
        out
    }

    /// `other . self`
    pub fn then(&self, other: &PlainFunctor) -> Result<PlainFunctor> {
        if **other.source() != *self.target {
            return Err(Error::Shape {
                expected: "composable functors".into(),
                found: "target and source differ".into(),
            });
        }
        Ok(PlainFunctor {
            source: self.source.clone(),
            target: other.target.clone(),
            obj_map: self.obj_map.iter().map(|&x| other.obj_map[x]).collect(),
            mor_map: self.mor_map.iter().map(|&f| other.mor_map[f]).collect(),
        })
    }

    /// Ok when no two distinct parallel morphisms share an image; otherwise a
    /// witness pair.
    pub fn check_faithful(&self) -> std::result::Result<(), (Mor, Mor)> {
        let s = &*self.source;
        let mut seen: HashMap<(Obj, Obj, Mor), Mor> = HashMap::new();
        for f in 0..s.morphism_count() {
            if let Some(&other) = seen.get(&(s.dom(f), s.cod(f), self.mor_map[f])) {
                return Err((other, f));
            }
            seen.insert((s.dom(f), s.cod(f), self.mor_map[f]), f);
        }
        Ok(())
    }

    pub fn is_faithful(&self) -> bool {
        self.check_faithful().is_ok()
    }

    /// Projection of a product category onto factor `i`.
    pub fn projection(product: &Arc<FinCategory>, i: usize) -> Result<PlainFunctor> {
        let factors = product.factors().ok_or_else(|| Error::Shape {
            expected: "product category".into(),
            found: "explicit category".into(),
        })?;
        let target = factors[i].clone();
        Ok(PlainFunctor {
            obj_map: (0..product.object_count())
                .map(|x| product.split_object(x)[i])
                .collect(),
            mor_map: (0..product.morphism_count())
                .map(|f| product.component(f, i))
                .collect(),
            source: product.clone(),
            target,
        })
    }

    /// Universal map into the product of the legs' targets.
    pub fn pairing(legs: &[&PlainFunctor], cap: Cap) -> Result<PlainFunctor> {
        let source = legs[0].source.clone();
        if legs.iter().any(|l| *l.source != *source) {
            return Err(Error::Shape {
                expected: "legs with a common source".into(),
                found: "different sources".into(),
            });
        }
        let targets: Vec<Arc<FinCategory>> = legs.iter().map(|l| l.target.clone()).collect();
        let target = Arc::new(product_category(&targets, cap)?);
        let obj_map = (0..source.object_count())
            .map(|x| {
                let comps: Vec<Obj> = legs.iter().map(|l| l.obj_map[x]).collect();
                target.tuple_object(&comps)
            })
            .collect();
        let mor_map = (0..source.morphism_count())
            .map(|f| {
                let comps: Vec<Mor> = legs.iter().map(|l| l.mor_map[f]).collect();
                target.tuple_morphism(&comps)
            })
            .collect();
        Ok(PlainFunctor {
            source,
            target,
            obj_map,
            mor_map,
        })
    }

    /// Componentwise product `F1 x ... x Fn` between product categories.
    pub fn product(functors: &[&PlainFunctor], cap: Cap) -> Result<PlainFunctor> {
        let sources: Vec<Arc<FinCategory>> = functors.iter().map(|f| f.source.clone()).collect();
        let targets: Vec<Arc<FinCategory>> = functors.iter().map(|f| f.target.clone()).collect();
        let source = Arc::new(product_category(&sources, cap)?);
        let target = Arc::new(product_category(&targets, cap)?);
        let obj_map = (0..source.object_count())
            .map(|x| {
                let comps: Vec<Obj> = source
                    .split_object(x)
                    .into_iter()
                    .zip(functors)
                    .map(|(xi, fun)| fun.obj_map[xi])
                    .collect();
                target.tuple_object(&comps)
            })
            .collect();
        let mor_map = (0..source.morphism_count())
            .map(|f| {
                let comps: Vec<Mor> = source
                    .split_morphism(f)
                    .into_iter()
                    .zip(functors)
                    .map(|(fi, fun)| fun.mor_map[fi])
                    .collect();
                target.tuple_morphism(&comps)
            })
            .collect();
        Ok(PlainFunctor {
            source,
            target,
            obj_map,
            mor_map,
        })
    }

    /// `C -> C^n`, the n-fold diagonal.
    pub fn diagonal(c: &Arc<FinCategory>, n: usize, cap: Cap) -> Result<PlainFunctor> {
        let id = PlainFunctor::identity(c.clone());
        let legs: Vec<&PlainFunctor> = std::iter::repeat_n(&id, n).collect();
        PlainFunctor::pairing(&legs, cap)
    }
}
