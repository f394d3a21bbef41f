//! Random set-valued functors and families for property tests.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::fincat::{FinCategory, Mor};
use crate::mixfun::{SetValuedMixedFunctor, VarFunctor};
use crate::natural::Span;
use crate::target::{FinSet, Function};
use crate::variance::{covariant_variance, index_variance, wide_subcategories, VarianceStruct};
use crate::Cap;

use super::walking_arrow;

pub fn random_function(rng: &mut impl Rng, dom: usize, cod: usize) -> Function {
    let values = (0..dom).map(|_| rng.gen_range(0..cod)).collect();
    Function::new(cod, values).expect("in range")
}

pub fn random_permutation(rng: &mut impl Rng, n: usize) -> Function {
    let mut values: Vec<usize> = (0..n).collect();
    values.shuffle(rng);
    Function::new(n, values).expect("a permutation")
}

/// Covariant functor on a chain `0 < 1 < ... < n-1` with set sizes in
/// `1..=max`.
pub fn random_chain_functor(
    rng: &mut impl Rng,
    chain: &Arc<FinCategory>,
    max: usize,
) -> SetValuedMixedFunctor {
    let n = chain.object_count();
    let sizes: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=max)).collect();
    let steps: Vec<Function> = (0..n.saturating_sub(1))
        .map(|i| random_function(rng, sizes[i], sizes[i + 1]))
        .collect();
    let mor_map = (0..chain.morphism_count())
        .map(|m| {
            let (i, j) = (chain.dom(m), chain.cod(m));
            (i..j).fold(Function::identity(sizes[i]), |acc, k| {
                acc.then(&steps[k]).expect("composable")
            })
        })
        .collect();
    SetValuedMixedFunctor::new(
        Arc::new(covariant_variance(chain)),
        Arc::new(FinSet),
        sizes,
        mor_map,
    )
    .expect("composites of steps are functorial")
}

/// A random `G`-set: a union of up to `orbits` coset spaces `G/H` of random
/// subgroups, with its elements shuffled.
pub fn random_gset(
    rng: &mut impl Rng,
    group: &Arc<FinCategory>,
    orbits: usize,
) -> SetValuedMixedFunctor {
    let (subgroups, _) = wide_subcategories(group, Cap::default());
    let n = group.morphism_count();
    // per orbit: coset representatives and, per group element, its coset
    let mut reps: Vec<Mor> = Vec::new();
    let mut coset_of: Vec<Vec<usize>> = Vec::new();
    let mut orbit_of: Vec<usize> = Vec::new();
    for orbit in 0..rng.gen_range(1..=orbits.max(1)) {
        let h = subgroups
            .choose(rng)
            .expect("the trivial subgroup exists")
            .morphisms();
        let mut which = vec![usize::MAX; n];
        for x in 0..n {
            if which[x] != usize::MAX {
                continue;
            }
            let id = reps.len();
            reps.push(x);
            orbit_of.push(orbit);
            for &k in &h {
                which[group.compose(x, k).expect("one object")] = id;
            }
        }
        coset_of.push(which);
    }
    let size = reps.len();
    let relabel = random_permutation(rng, size);
    let inverse = relabel.inverse().expect("bijective");
    let mor_map: Vec<Function> = (0..n)
        .map(|g| {
            Function::from_fn(size, size, |i| {
                let c = inverse.apply(i);
                let y = group.compose(g, reps[c]).expect("one object");
                relabel.apply(coset_of[orbit_of[c]][y])
            })
        })
        .collect();
    SetValuedMixedFunctor::new(
        Arc::new(covariant_variance(group)),
        Arc::new(FinSet),
        vec![size],
        mor_map,
    )
    .expect("coset actions are actions")
}

/// Functor on `2 x 2` with index-variance `(0, 1)`: a commuting square of
/// random maps `X -> Z <- Y` completed by their pullback (with a random
/// set mapping into it).
pub fn random_square_functor(rng: &mut impl Rng, max: usize) -> SetValuedMixedFunctor {
    let two = Arc::new(walking_arrow());
    let v = Arc::new(
        index_variance(&[two.clone(), two.clone()], &[0, 1], Cap::default()).expect("small"),
    );
    let (x, y, z) = (
        rng.gen_range(1..=max),
        rng.gen_range(1..=max),
        rng.gen_range(1..=max),
    );
    let r = random_function(rng, x, z);
    let s = random_function(rng, y, z);
    let pullback: Vec<(usize, usize)> = (0..x)
        .flat_map(|i| (0..y).map(move |j| (i, j)))
        .filter(|&(i, j)| r.apply(i) == s.apply(j))
        .collect();
    let w = if pullback.is_empty() {
        0
    } else {
        rng.gen_range(1..=max)
    };
    let into = random_function(rng, w, pullback.len());
    let p = Function::from_fn(w, x, |k| pullback[into.apply(k)].0);
    let q = Function::from_fn(w, y, |k| pullback[into.apply(k)].1);
    // S[i][j]: first coordinate covariant, second contravariant
    let set = [[x, w], [z, y]];
    let first = [r.clone(), q.clone()]; // S[0][j] -> S[1][j]
    let second = [p.clone(), s.clone()]; // S[i][1] -> S[i][0]
    let prod = v.owner().clone();
    let obj_map = (0..prod.object_count())
        .map(|o| {
            let c = prod.split_object(o);
            set[c[0]][c[1]]
        })
        .collect();
    let mor_map = (0..prod.morphism_count())
        .map(|m| {
            let c = prod.split_morphism(m);
            let (i, i1) = (two.dom(c[0]), two.cod(c[0]));
            let (j, j1) = (two.dom(c[1]), two.cod(c[1]));
            // F(i, j1) -> F(i1, j)
            let mut h = Function::identity(set[i][j1]);
            if j1 != j {
                h = h.then(&second[i]).expect("composable");
            }
            if i1 != i {
                h = h.then(&first[j]).expect("composable");
            }
            h
        })
        .collect();
    SetValuedMixedFunctor::new(v, Arc::new(FinSet), obj_map, mor_map).expect("the square commutes")
}

/// `(F x k)(a) = F(a) x k`, numbered `i * k + j`.
pub fn times_constant<F: VarFunctor<Target = FinSet>>(f: &F, k: usize) -> SetValuedMixedFunctor {
    let c = f.source();
    let obj_map = (0..c.object_count()).map(|x| f.object(x) * k).collect();
    let mor_map = (0..c.morphism_count())
        .map(|m| {
            let a = f.arrow(m);
            Function::from_fn(a.dom() * k, a.cod() * k, |i| a.apply(i / k) * k + i % k)
        })
        .collect();
    SetValuedMixedFunctor::new_unchecked(f.variance().clone(), Arc::new(FinSet), obj_map, mor_map)
        .expect("shapes")
}

/// Random components `F L1 x -> G L2 x`.
pub fn random_family<F, G>(rng: &mut impl Rng, f: &F, g: &G, span: &Span) -> Vec<Function>
where
    F: VarFunctor<Target = FinSet>,
    G: VarFunctor<Target = FinSet>,
{
    (0..span.apex().object_count())
        .map(|x| {
            let (a, b) = (
                f.object(span.left().object(x)),
                g.object(span.right().object(x)),
            );
            random_function(rng, a, b)
        })
        .collect()
}

/// A random mixed functor on a group with variance `v`, obtained by
/// inverting the contravariant part of a random `G`-set.
pub fn random_group_mixed(
    rng: &mut impl Rng,
    v: &Arc<VarianceStruct>,
    orbits: usize,
) -> SetValuedMixedFunctor {
    let gset = random_gset(rng, v.owner(), orbits);
    crate::mixfun::invert_contravariant(&gset, v.clone()).expect("group actions are invertible")
}
