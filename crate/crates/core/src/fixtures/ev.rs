//! Evaluation `ev_{a,b}: [a,b] x a -> b` in the skeleton of finite sets on
//! sizes 1..3.
//!
//! `F(x1, x2, x3) = [x1, x2] x x3` on `C^3` has index-variance `(1, 0, 0)`
//! and `G` is the inclusion `C -> FinSet`. The span is `R = C x C` with
//! `L1(a, b) = (a, b, a)` and `L2(a, b) = b`, i.e. the partition
//! `{1,3} {2,4}`. A pair `(psi, c)` is numbered `rank(psi) * |x3| + c`.

use std::sync::Arc;

use crate::error::Result;
use crate::fincat::{Mor, Obj};
use crate::mixfun::{ComputedSetFunctor, SetValuedMixedFunctor, VarFunctor};
use crate::natural::{build_span_from_partition, Classes, PartitionOfArguments, PartitionSpan};
use crate::target::{FinSet, Function};
use crate::variance::{covariant_variance, index_variance};
use crate::Cap;

use super::FinSetSkeleton;

pub struct EvExample {
    pub skeleton: FinSetSkeleton,
    pub f: ComputedSetFunctor,
    pub g: SetValuedMixedFunctor,
    pub partition: PartitionSpan,
    /// `eta_(a,b)`, indexed by objects of `R`
    pub eta: Vec<Function>,
}

/// A single changed value: component, element, new image.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Mutation {
    pub component: Obj,
    pub element: usize,
    pub value: usize,
}

pub fn ev_example(cap: Cap) -> Result<EvExample> {
    let skeleton = FinSetSkeleton::new(3);
    let c = skeleton.category.clone();
    let sizes = skeleton.sizes.clone();
    let functions = skeleton.functions.clone();
    let v = Arc::new(index_variance(
        &[c.clone(), c.clone(), c.clone()],
        &[1, 0, 0],
        cap,
    )?);
    let p = v.owner().clone();
    let obj_map: Vec<usize> = (0..p.object_count())
        .map(|x| {
            let s = p.split_object(x);
            sizes[s[1]].pow(sizes[s[0]] as u32) * sizes[s[2]]
        })
        .collect();
    let arrows = {
        let p = p.clone();
        move |m: Mor| {
            let s = p.split_morphism(m);
            let (f1, f2, f3) = (&functions[s[0]], &functions[s[1]], &functions[s[2]]);
            // [a', b] x c -> [a, b'] x c'
            let (a1, b, cc) = (f1.cod(), f2.dom(), f3.dom());
            let (a, b1, cc1) = (f1.dom(), f2.cod(), f3.cod());
            let dom = b.pow(a1 as u32) * cc;
            let cod = b1.pow(a as u32) * cc1;
            Function::from_fn(dom, cod, |k| {
                let psi = Function::from_rank(a1, b, k / cc);
                let moved = f1.then(&psi).and_then(|h| h.then(f2)).expect("composable");
                moved.rank() * cc1 + f3.apply(k % cc)
            })
        }
    };
    let f = ComputedSetFunctor::new(v, obj_map, arrows)?;
    let g = SetValuedMixedFunctor::new(
        Arc::new(covariant_variance(&c)),
        Arc::new(FinSet),
        sizes.clone(),
        skeleton.functions.clone(),
    )?;
    let part = PartitionOfArguments::new(
        vec![c.clone(), c.clone(), c.clone()],
        vec![c.clone()],
        Classes(vec![vec![1, 3], vec![2, 4]]),
    )?;
    let partition = build_span_from_partition(&part, cap)?;
    let r = partition.span.apex().clone();
    let eta = (0..r.object_count())
        .map(|xy| {
            let s = r.split_object(xy);
            let (a, b) = (sizes[s[0]], sizes[s[1]]);
            Function::from_fn(b.pow(a as u32) * a, b, |k| {
                Function::from_rank(a, b, k / a).apply(k % a)
            })
        })
        .collect();
    Ok(EvExample {
        skeleton,
        f,
        g,
        partition,
        eta,
    })
}

impl EvExample {
    /// Every way of changing one value of one component.
    pub fn mutations(&self) -> Vec<Mutation> {
        let mut out = Vec::new();
        for (x, e) in self.eta.iter().enumerate() {
            for k in 0..e.dom() {
                for value in 0..e.cod() {
                    if value != e.apply(k) {
                        out.push(Mutation {
                            component: x,
                            element: k,
                            value,
                        });
                    }
                }
            }
        }
        out
    }

    pub fn mutated(&self, m: Mutation) -> Vec<Function> {
        let mut eta = self.eta.clone();
        let e = &eta[m.component];
        let mut values = e.values().to_vec();
        values[m.element] = m.value;
        eta[m.component] = Function::new(e.cod(), values).expect("in range");
        eta
    }

    /// Morphisms of `R` whose hexagon involves component `x`.
    pub fn touching(&self, x: Obj) -> Vec<Mor> {
        let r = self.partition.span.apex();
        (0..r.morphism_count())
            .filter(|&m| r.dom(m) == x || r.cod(m) == x)
            .collect()
    }

    pub fn source_size(&self, x: Obj) -> usize {
        self.f.object(self.partition.span.left().object(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::natural::{check_heuristic_naturality, first_naturality_failure};

    #[test]
    fn shapes() {
        let ex = ev_example(Cap::default()).unwrap();
        assert_eq!(ex.skeleton.category.morphism_count(), 56);
        assert_eq!(ex.f.source().morphism_count(), 56 * 56 * 56);
        assert_eq!(ex.partition.span.apex().morphism_count(), 56 * 56);
        assert_eq!(ex.mutations().len(), 238);
        assert_eq!(ex.source_size(8), 27 * 3);
    }

    #[test]
    fn ev_is_natural_on_generators() {
        let ex = ev_example(Cap::default()).unwrap();
        let gens = ex.partition.single_class_generators();
        let report =
            check_heuristic_naturality(&ex.f, &ex.g, &ex.partition.span, &ex.eta, Some(&gens))
                .unwrap();
        assert!(report.is_natural());
        let m = ex.mutations()[0];
        let bad = ex.mutated(m);
        let touching = ex.touching(m.component);
        assert!(
            first_naturality_failure(&ex.f, &ex.g, &ex.partition.span, &bad, Some(&touching))
                .unwrap()
                .is_some()
        );
    }
}
