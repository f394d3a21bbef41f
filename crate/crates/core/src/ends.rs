//! Wedges, ends and coends of finite-set-valued functors of variance, the
//! parameter functor and the Fubini transposition.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fincat::{is_generating, FinCategory, Mor, Obj, PlainFunctor, Subgraph};
use crate::mixfun::{Arrow, MixedFunctor, Reindexed, SetValuedMixedFunctor, VarFunctor};
use crate::target::{Codomain, FinSet, Function};
use crate::variance::index_variance;
use crate::Cap;

/// Marker carried by coend reports: the quotient formula is the formal dual
/// of the equalizer formula for ends.
pub const COEND_CONSTRUCTION: &str = "dualized construction";

/// An apex with one arrow per object of `R`: into `F(Lx)` for wedges, out of
/// it for cowedges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wedge<A> {
    pub apex: usize,
    pub family: Vec<A>,
}

fn check_leg<F: VarFunctor>(f: &F, l: &PlainFunctor) -> Result<()> {
    if l.target() != f.source() {
        return Err(Error::Shape {
            expected: "a span landing in the functor's domain".into(),
            found: "a different category".into(),
        });
    }
    Ok(())
}

fn checked(r: &FinCategory, gens: Option<&Subgraph>) -> Result<Vec<Mor>> {
    match gens {
        Some(s) if !is_generating(r, s) => Err(Error::NotGenerating),
        Some(s) => Ok(s.morphisms().to_vec()),
        None => Ok((0..r.morphism_count()).collect()),
    }
}

/// Morphisms `f: x -> y` of `R` with `F(L(f)^e) w_x != F(L(f)^m) w_y`.
pub fn check_wedge<F: VarFunctor>(
    f: &F,
    l: &PlainFunctor,
    w: &Wedge<Arrow<F::Target>>,
    gens: Option<&Subgraph>,
) -> Result<Vec<Mor>> {
    check_leg(f, l)?;
    let r = l.source();
    if w.family.len() != r.object_count() {
        return Err(Error::Shape {
            expected: format!("{} components", r.object_count()),
            found: w.family.len().to_string(),
        });
    }
    let t = f.target();
    for (x, a) in w.family.iter().enumerate() {
        if t.arrow_source(a) != w.apex || t.arrow_target(a) != f.object(l.object(x)) {
            return Err(Error::ComponentType(x));
        }
    }
    let morphisms = checked(r, gens)?;
    Ok(crate::par::filter_map(morphisms.len(), |i| {
        let m = morphisms[i];
        let k = f.variance().fac(l.morphism(m));
        let one = t.compose_arrows(&f.arrow(k.term_e), &w.family[r.dom(m)]);
        let two = t.compose_arrows(&f.arrow(k.term_m), &w.family[r.cod(m)]);
        (one.is_none() || one != two).then_some(m)
    }))
}

/// Morphisms `f: x -> y` of `R` with `w_x F(L(f)_m) != w_y F(L(f)_e)`.
pub fn check_cowedge<F: VarFunctor>(
    f: &F,
    l: &PlainFunctor,
    w: &Wedge<Arrow<F::Target>>,
) -> Result<Vec<Mor>> {
    check_leg(f, l)?;
    let r = l.source();
    let t = f.target();
    if w.family.len() != r.object_count() {
        return Err(Error::Shape {
            expected: format!("{} components", r.object_count()),
            found: w.family.len().to_string(),
        });
    }
    for (x, a) in w.family.iter().enumerate() {
        if t.arrow_target(a) != w.apex || t.arrow_source(a) != f.object(l.object(x)) {
            return Err(Error::ComponentType(x));
        }
    }
    Ok(crate::par::filter_map(r.morphism_count(), |m| {
        let k = f.variance().fac(l.morphism(m));
        let one = t.compose_arrows(&w.family[r.dom(m)], &f.arrow(k.start_m));
        let two = t.compose_arrows(&w.family[r.cod(m)], &f.arrow(k.start_e));
        (one.is_none() || one != two).then_some(m)
    }))
}

/// An end as a set of tuples `(a_x)_x` with `a_x` in `F(Lx)`, sorted
/// lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndResult {
    /// `|F(Lx)|` per object of `R`
    pub sizes: Vec<usize>,
    pub tuples: Vec<Vec<usize>>,
    /// morphisms whose conditions were imposed, when restricted
    pub generators: Option<Vec<Mor>>,
}

impl EndResult {
    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn index_of(&self, tuple: &[usize]) -> Option<usize> {
        self.tuples
            .binary_search_by(|t| t.as_slice().cmp(tuple))
            .ok()
    }

    /// `omega_x`
    pub fn projection(&self, x: Obj) -> Function {
        Function::from_fn(self.len(), self.sizes[x], |i| self.tuples[i][x])
    }

    pub fn universal_wedge(&self) -> Wedge<Function> {
        Wedge {
            apex: self.len(),
            family: (0..self.sizes.len()).map(|x| self.projection(x)).collect(),
        }
    }

    /// Whether the projections separate the elements.
    pub fn is_jointly_monic(&self) -> bool {
        let w = self.universal_wedge();
        (0..self.len())
            .all(|i| (i + 1..self.len()).all(|j| w.family.iter().any(|p| p.apply(i) != p.apply(j))))
    }
}

fn product_size(sizes: &[usize]) -> u128 {
    sizes
        .iter()
        .fold(1u128, |acc, &s| acc.saturating_mul(s as u128))
}

fn end_sizes<F: VarFunctor<Target = FinSet>>(
    f: &F,
    l: &PlainFunctor,
    cap: Cap,
) -> Result<Vec<usize>> {
    check_leg(f, l)?;
    let sizes: Vec<usize> = (0..l.source().object_count())
        .map(|x| f.object(l.object(x)))
        .collect();
    let total = product_size(&sizes);
    if total > cap.0 as u128 {
        return Err(Error::SizeCap {
            what: "product of end components",
            count: total,
            cap: cap.0,
        });
    }
    Ok(sizes)
}

/// `{ (a_x) : F(L(f)^e)(a_x) = F(L(f)^m)(a_y) }` over all `f` (or over a
/// generating subgraph). The conditions are grouped by the later of the two
/// objects and imposed while the tuple is being built.
pub fn compute_end<F: VarFunctor<Target = FinSet>>(
    f: &F,
    l: &PlainFunctor,
    gens: Option<&Subgraph>,
    cap: Cap,
) -> Result<EndResult> {
    let sizes = end_sizes(f, l, cap)?;
    let r = l.source();
    let morphisms = checked(r, gens)?;
    let n = sizes.len();
    // own(a_later) must equal theirs(a_other)
    struct Condition {
        other: Obj,
        own: Function,
        theirs: Function,
    }
    let mut by_last: Vec<Vec<Condition>> = (0..n).map(|_| Vec::new()).collect();
    let mut allowed: Vec<Vec<bool>> = sizes.iter().map(|&s| vec![true; s]).collect();
    let conditions: Vec<(Obj, Obj, Function, Function)> = crate::par::map(morphisms.len(), |i| {
        let m = morphisms[i];
        let k = f.variance().fac(l.morphism(m));
        (r.dom(m), r.cod(m), f.arrow(k.term_e), f.arrow(k.term_m))
    });
    for (x, y, p, q) in conditions {
        if x == y {
            for (a, ok) in allowed[x].iter_mut().enumerate() {
                *ok &= p.apply(a) == q.apply(a);
            }
        } else if x > y {
            by_last[x].push(Condition {
                other: y,
                own: p,
                theirs: q,
            });
        } else {
            by_last[y].push(Condition {
                other: x,
                own: q,
                theirs: p,
            });
        }
    }
    let tuples = if n == 0 {
        vec![Vec::new()]
    } else {
        let search = |first: usize| -> Vec<Vec<usize>> {
            let mut out = Vec::new();
            if !allowed[0][first] {
                return out;
            }
            let mut tuple = vec![0; n];
            tuple[0] = first;
            extend(1, &mut tuple, &sizes, &allowed, &by_last, &mut out);
            out
        };
        fn extend(
            depth: usize,
            tuple: &mut Vec<usize>,
            sizes: &[usize],
            allowed: &[Vec<bool>],
            by_last: &[Vec<Condition>],
            out: &mut Vec<Vec<usize>>,
        ) {
            if depth == sizes.len() {
                out.push(tuple.clone());
                return;
            }
            for a in 0..sizes[depth] {
                if !allowed[depth][a] {
                    continue;
                }
                if by_last[depth]
                    .iter()
                    .all(|c| c.own.apply(a) == c.theirs.apply(tuple[c.other]))
                {
                    tuple[depth] = a;
                    extend(depth + 1, tuple, sizes, allowed, by_last, out);
                }
            }
        }
        crate::par::flat_map(sizes[0], search)
    };
    Ok(EndResult {
        sizes,
        tuples,
        generators: gens.map(|s| s.morphisms().to_vec()),
    })
}

/// Every tuple of the product tested against every morphism of `R`.
pub fn oracle_end<F: VarFunctor<Target = FinSet>>(
    f: &F,
    l: &PlainFunctor,
    cap: Cap,
) -> Result<Vec<Vec<usize>>> {
    let sizes = end_sizes(f, l, cap)?;
    let r = l.source();
    let total = product_size(&sizes) as usize;
    let decode = |mut k: usize| -> Vec<usize> {
        let mut t = vec![0; sizes.len()];
        for (slot, &s) in t.iter_mut().zip(&sizes).rev() {
            *slot = k % s;
            k /= s;
        }
        t
    };
    let arrows: Vec<(Function, Function)> = (0..r.morphism_count())
        .map(|m| {
            let k = f.variance().fac(l.morphism(m));
            (f.arrow(k.term_e), f.arrow(k.term_m))
        })
        .collect();
    Ok(crate::par::filter_map(total, |k| {
        let t = decode(k);
        (0..r.morphism_count())
            .all(|m| arrows[m].0.apply(t[r.dom(m)]) == arrows[m].1.apply(t[r.cod(m)]))
            .then_some(t)
    }))
}

/// The unique map from a wedge's apex into the end commuting with the
/// projections; `None` when `w` is not a wedge.
pub fn mediating_map(end: &EndResult, w: &Wedge<Function>) -> Option<Function> {
    let values: Vec<usize> = (0..w.apex)
        .map(|c| {
            let tuple: Vec<usize> = w.family.iter().map(|p| p.apply(c)).collect();
            end.index_of(&tuple)
        })
        .collect::<Option<_>>()?;
    Function::new(end.len(), values).ok()
}

/// The parallel pair `s, t: prod_x F(Lx) -> prod_f F(L(f)_t)`.
pub struct ParallelPair {
    r: Arc<FinCategory>,
    arrows: Vec<(Function, Function)>,
}

impl ParallelPair {
    pub fn new<F: VarFunctor<Target = FinSet>>(f: &F, l: &PlainFunctor) -> Result<ParallelPair> {
        check_leg(f, l)?;
        let r = l.source().clone();
        let arrows = (0..r.morphism_count())
            .map(|m| {
                let k = f.variance().fac(l.morphism(m));
                (f.arrow(k.term_e), f.arrow(k.term_m))
            })
            .collect();
        Ok(ParallelPair { r, arrows })
    }

    /// `pi_f s = F(L(f)^e) pi_x`
    pub fn s(&self, tuple: &[usize]) -> Vec<usize> {
        (0..self.r.morphism_count())
            .map(|m| self.arrows[m].0.apply(tuple[self.r.dom(m)]))
            .collect()
    }

    /// `pi_f t = F(L(f)^m) pi_y`
    pub fn t(&self, tuple: &[usize]) -> Vec<usize> {
        (0..self.r.morphism_count())
            .map(|m| self.arrows[m].1.apply(tuple[self.r.cod(m)]))
            .collect()
    }

    /// Whether the cone `c -> prod_x F(Lx)` transposed from `w` equalizes.
    pub fn equalizes(&self, w: &Wedge<Function>) -> bool {
        (0..w.apex).all(|c| {
            let tuple: Vec<usize> = w.family.iter().map(|p| p.apply(c)).collect();
            self.s(&tuple) == self.t(&tuple)
        })
    }
}

/// `Set(F x, G y)` on `C x C` with index-variance `(1, 0)`, functions
/// numbered by rank.
pub fn hom_set_functor<F, G>(f: &F, g: &G, cap: Cap) -> Result<SetValuedMixedFunctor>
where
    F: VarFunctor<Target = FinSet>,
    G: VarFunctor<Target = FinSet>,
{
    let c = f.source().clone();
    if g.source() != &c
        || !f.variance().is_covariant_variance()
        || !g.variance().is_covariant_variance()
    {
        return Err(Error::Shape {
            expected: "two covariant functors on one category".into(),
            found: "other functors".into(),
        });
    }
    let v = Arc::new(index_variance(&[c.clone(), c.clone()], &[1, 0], cap)?);
    let p = v.owner().clone();
    let mut obj_map = Vec::with_capacity(p.object_count());
    for xy in 0..p.object_count() {
        let s = p.split_object(xy);
        let n = Function::count(f.object(s[0]), g.object(s[1]));
        if n > cap.0 as u128 {
            return Err(Error::SizeCap {
                what: "hom-set",
                count: n,
                cap: cap.0,
            });
        }
        obj_map.push(n as usize);
    }
    let mor_map = crate::par::map(p.morphism_count(), |fg| {
        let s = p.split_morphism(fg);
        let (a, b) = (f.arrow(s[0]), g.arrow(s[1]));
        // Set(F x', G y) -> Set(F x, G y'), h |-> G(g) h F(f)
        Function::from_fn(
            Function::count(a.cod(), b.dom()) as usize,
            Function::count(a.dom(), b.cod()) as usize,
            |rank| {
                let h = Function::from_rank(a.cod(), b.dom(), rank);
                a.then(&h)
                    .and_then(|ha| ha.then(&b))
                    .expect("composable")
                    .rank()
            },
        )
    });
    MixedFunctor::new_unchecked(v, Arc::new(FinSet), obj_map, mor_map)
}

/// Natural transformations `F => G` as the end of `Set(F-, G-)` over the
/// diagonal; each tuple lists the ranks of the components.
pub fn nat_set<F, G>(f: &F, g: &G, cap: Cap) -> Result<EndResult>
where
    F: VarFunctor<Target = FinSet>,
    G: VarFunctor<Target = FinSet>,
{
    let h = hom_set_functor(f, g, cap)?;
    let c = f.source();
    let diag = PlainFunctor::diagonal(c, 2, cap)?;
    // the diagonal lands in the plain product, which is h's domain
    compute_end(&h, &diag, None, cap)
}

/// Natural families counted directly: every choice of components checked
/// against every naturality square.
pub fn oracle_nat_count<F, G>(f: &F, g: &G, cap: Cap) -> Result<usize>
where
    F: VarFunctor<Target = FinSet>,
    G: VarFunctor<Target = FinSet>,
{
    let c = f.source();
    let sizes: Vec<u128> = (0..c.object_count())
        .map(|x| Function::count(f.object(x), g.object(x)))
        .collect();
    let total = sizes.iter().fold(1u128, |a, &s| a.saturating_mul(s));
    if total > cap.0 as u128 {
        return Err(Error::SizeCap {
            what: "families of components",
            count: total,
            cap: cap.0,
        });
    }
    let squares: Vec<(Obj, Obj, Function, Function)> = (0..c.morphism_count())
        .map(|m| (c.dom(m), c.cod(m), f.arrow(m), g.arrow(m)))
        .collect();
    let count = crate::par::filter_map(total as usize, |mut k| {
        let mut eta = vec![Function::identity(0); sizes.len()];
        for x in (0..sizes.len()).rev() {
            let s = sizes[x] as usize;
            eta[x] = Function::from_rank(f.object(x), g.object(x), k % s);
            k /= s;
        }
        squares
            .iter()
            .all(|(x, y, fm, gm)| eta[*x].then(gm) == fm.then(&eta[*y]))
            .then_some(())
    })
    .len();
    Ok(count)
}

/// A coend as the classes of `sum_x F(Lx)` under the relation generated by
/// `(x, F(L(f)_m) a) ~ (y, F(L(f)_e) a)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoendResult {
    pub sizes: Vec<usize>,
    /// members `(x, a)` of each class; classes ordered by smallest member
    pub classes: Vec<Vec<(Obj, usize)>>,
    /// class of `(x, a)`
    pub class_of: Vec<Vec<usize>>,
    pub construction: &'static str,
}

impl CoendResult {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// `iota_x: F(Lx) -> coend`
    pub fn injection(&self, x: Obj) -> Function {
        Function::from_fn(self.sizes[x], self.len(), |a| self.class_of[x][a])
    }

    pub fn universal_cowedge(&self) -> Wedge<Function> {
        Wedge {
            apex: self.len(),
            family: (0..self.sizes.len()).map(|x| self.injection(x)).collect(),
        }
    }

    /// The unique map out of the coend through which `w` factors, if `w` is
    /// a cowedge.
    pub fn mediating_map(&self, w: &Wedge<Function>) -> Option<Function> {
        let mut values = vec![None; self.len()];
        for (x, p) in w.family.iter().enumerate() {
            for a in 0..self.sizes[x] {
                let slot = &mut values[self.class_of[x][a]];
                match slot {
                    None => *slot = Some(p.apply(a)),
                    Some(v) if *v != p.apply(a) => return None,
                    Some(_) => {}
                }
            }
        }
        let values: Vec<usize> = values
            .into_iter()
            .map(|v| v.expect("classes are inhabited"))
            .collect();
        Some(Function::from_fn(self.len(), w.apex, |i| values[i]))
    }
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

pub fn compute_coend<F: VarFunctor<Target = FinSet>>(
    f: &F,
    l: &PlainFunctor,
    cap: Cap,
) -> Result<CoendResult> {
    check_leg(f, l)?;
    let r = l.source();
    let sizes: Vec<usize> = (0..r.object_count())
        .map(|x| f.object(l.object(x)))
        .collect();
    let total: u128 = sizes.iter().map(|&s| s as u128).sum();
    if total > cap.0 as u128 {
        return Err(Error::SizeCap {
            what: "coproduct of coend components",
            count: total,
            cap: cap.0,
        });
    }
    let offsets: Vec<usize> = sizes
        .iter()
        .scan(0, |acc, &s| {
            let o = *acc;
            *acc += s;
            Some(o)
        })
        .collect();
    let mut parent: Vec<usize> = (0..total as usize).collect();
    let relations: Vec<(Obj, Obj, Function, Function)> = crate::par::map(r.morphism_count(), |m| {
        let k = f.variance().fac(l.morphism(m));
        (r.dom(m), r.cod(m), f.arrow(k.start_m), f.arrow(k.start_e))
    });
    for (x, y, left, right) in relations {
        for a in 0..left.dom() {
            let i = find(&mut parent, offsets[x] + left.apply(a));
            let j = find(&mut parent, offsets[y] + right.apply(a));
            // keep the smaller index as the root so classes stay canonical
            let (lo, hi) = if i < j { (i, j) } else { (j, i) };
            parent[hi] = lo;
        }
    }
    let mut class_of: Vec<Vec<usize>> = sizes.iter().map(|&s| vec![0; s]).collect();
    let mut classes: Vec<Vec<(Obj, usize)>> = Vec::new();
    let mut root_class = vec![usize::MAX; total as usize];
    for x in 0..sizes.len() {
        for a in 0..sizes[x] {
            let root = find(&mut parent, offsets[x] + a);
            if root_class[root] == usize::MAX {
                root_class[root] = classes.len();
                classes.push(Vec::new());
            }
            class_of[x][a] = root_class[root];
            classes[root_class[root]].push((x, a));
        }
    }
    Ok(CoendResult {
        sizes,
        classes,
        class_of,
        construction: COEND_CONSTRUCTION,
    })
}

/// Count of cowedges into a `k`-element set, by brute force over all
/// families.
pub fn oracle_cowedge_count<F: VarFunctor<Target = FinSet>>(
    f: &F,
    l: &PlainFunctor,
    k: usize,
    cap: Cap,
) -> Result<usize> {
    check_leg(f, l)?;
    let r = l.source();
    let sizes: Vec<usize> = (0..r.object_count())
        .map(|x| f.object(l.object(x)))
        .collect();
    let counts: Vec<u128> = sizes.iter().map(|&s| Function::count(s, k)).collect();
    let total = counts.iter().fold(1u128, |a, &c| a.saturating_mul(c));
    if total > cap.0 as u128 {
        return Err(Error::SizeCap {
            what: "families of cowedge components",
            count: total,
            cap: cap.0,
        });
    }
    let relations: Vec<(Obj, Obj, Function, Function)> = (0..r.morphism_count())
        .map(|m| {
            let kk = f.variance().fac(l.morphism(m));
            (r.dom(m), r.cod(m), f.arrow(kk.start_m), f.arrow(kk.start_e))
        })
        .collect();
    Ok(crate::par::filter_map(total as usize, |mut code| {
        let mut w = vec![Function::identity(0); sizes.len()];
        for x in (0..sizes.len()).rev() {
            let c = counts[x] as usize;
            w[x] = Function::from_rank(sizes[x], k, code % c);
            code /= c;
        }
        relations
            .iter()
            .all(|(x, y, left, right)| left.then(&w[*x]) == right.then(&w[*y]))
            .then_some(())
    })
    .len())
}

/// `b |-> end of F(-, b)` over `l1`, extended to morphisms of `B` through
/// the universal wedges.
#[derive(Clone, Debug)]
pub struct ParameterFunctor {
    pub functor: SetValuedMixedFunctor,
    /// the end over `l1` at each object of `B`
    pub ends: Vec<EndResult>,
}

/// `F^b = F . (-, b)`, of the first factor's variance.
fn slice_at<F: VarFunctor<Target = FinSet>>(f: &F, b: Obj) -> Result<Reindexed<'_, F>> {
    let factors = f
        .variance()
        .factor_variances()
        .filter(|fs| fs.len() == 2)
        .ok_or_else(|| Error::Shape {
            expected: "product variance on A x B".into(),
            found: "another variance".into(),
        })?;
    let va = factors[0].clone();
    let p = f.source();
    let bb = factors[1].owner();
    let a = va.owner();
    let obj_map = (0..a.object_count())
        .map(|x| p.tuple_object(&[x, b]))
        .collect();
    let mor_map = (0..a.morphism_count())
        .map(|m| p.tuple_morphism(&[m, bb.identity(b)]))
        .collect();
    Reindexed::new(f, va, obj_map, mor_map)
}

pub fn parameter_functor<F: VarFunctor<Target = FinSet>>(
    f: &F,
    l1: &PlainFunctor,
    cap: Cap,
) -> Result<ParameterFunctor> {
    let factors = f
        .variance()
        .factor_variances()
        .filter(|fs| fs.len() == 2)
        .ok_or_else(|| Error::Shape {
            expected: "product variance on A x B".into(),
            found: "another variance".into(),
        })?;
    let vb = factors[1].clone();
    let b = vb.owner().clone();
    let a = factors[0].owner().clone();
    if l1.target() != &a {
        return Err(Error::Shape {
            expected: "a span on the first factor".into(),
            found: "a different category".into(),
        });
    }
    let p = f.source();
    let ends: Vec<EndResult> = (0..b.object_count())
        .map(|y| compute_end(&slice_at(f, y)?, l1, None, cap))
        .collect::<Result<_>>()?;
    let r1 = l1.source();
    let mor_map: Vec<Function> = (0..b.morphism_count())
        .map(|g| {
            let fac = vb.fac(g);
            let (from, to) = (&ends[fac.start_obj], &ends[fac.term_obj]);
            let values = from
                .tuples
                .iter()
                .map(|theta| {
                    let image: Vec<usize> = (0..r1.object_count())
                        .map(|x| {
                            f.arrow(p.tuple_morphism(&[a.identity(l1.object(x)), g]))
                                .apply(theta[x])
                        })
                        .collect();
                    to.index_of(&image).ok_or_else(|| {
                        Error::InvalidFunctor(format!(
                            "image under {} is not in the end",
                            b.morphism_label(g)
                        ))
                    })
                })
                .collect::<Result<Vec<usize>>>()?;
            Function::new(to.len(), values)
        })
        .collect::<Result<_>>()?;
    let functor = MixedFunctor::new_unchecked(
        vb,
        Arc::new(FinSet),
        ends.iter().map(|e| e.len()).collect(),
        mor_map,
    )?;
    Ok(ParameterFunctor { functor, ends })
}

/// Both ends of the Fubini comparison and the transposition between them.
#[derive(Clone, Debug)]
pub struct FubiniReport {
    /// end over `L = l1 x l2`
    pub total: EndResult,
    pub parameter: ParameterFunctor,
    /// end over `l2` of the parameter functor
    pub iterated: EndResult,
    /// `iterated` index to `total` index
    pub transposition: Vec<usize>,
    /// `None` if the transposition is a bijection commuting with both
    /// universal wedges, otherwise a description of the first defect
    pub defect: Option<String>,
}

impl FubiniReport {
    pub fn is_verified(&self) -> bool {
        self.defect.is_none()
    }
}

pub fn fubini_check<F: VarFunctor<Target = FinSet>>(
    f: &F,
    l1: &PlainFunctor,
    l2: &PlainFunctor,
    cap: Cap,
) -> Result<FubiniReport> {
    let l = PlainFunctor::product(&[l1, l2], cap)?;
    let total = compute_end(f, &l, None, cap)?;
    let parameter = parameter_functor(f, l1, cap)?;
    let iterated = compute_end(&parameter.functor, l2, None, cap)?;
    let r = l.source();
    let (r1, r2) = (l1.source(), l2.source());
    let mut defect = None;
    let mut transposition = Vec::with_capacity(iterated.len());
    for theta in &iterated.tuples {
        // theta~_{x,y} = omega^{L2 y}_x(theta_y)
        let mut tilde = vec![0; r.object_count()];
        for y in 0..r2.object_count() {
            let inner = &parameter.ends[l2.object(y)].tuples[theta[y]];
            for x in 0..r1.object_count() {
                tilde[r.tuple_object(&[x, y])] = inner[x];
            }
        }
        match total.index_of(&tilde) {
            Some(i) => transposition.push(i),
            None => {
                defect.get_or_insert_with(|| {
                    format!("transpose of {theta:?} is not in the end over L")
                });
                transposition.push(usize::MAX);
            }
        }
    }
    if defect.is_none() {
        let mut seen = vec![false; total.len()];
        for &i in &transposition {
            if std::mem::replace(&mut seen[i], true) {
                defect = Some("transposition is not injective".into());
            }
        }
        if defect.is_none() && seen.iter().any(|s| !s) {
            defect = Some("transposition is not surjective".into());
        }
    }
    if defect.is_none() {
        // omega_{(x,y)} . transposition = omega^{L2 y}_x . omega'_y
        'outer: for (k, theta) in iterated.tuples.iter().enumerate() {
            for y in 0..r2.object_count() {
                let inner = &parameter.ends[l2.object(y)];
                for x in 0..r1.object_count() {
                    let lhs = total
                        .projection(r.tuple_object(&[x, y]))
                        .apply(transposition[k]);
                    let rhs = inner.projection(x).apply(iterated.projection(y).apply(k));
                    if lhs != rhs || rhs != inner.tuples[theta[y]][x] {
                        defect = Some(format!("wedges disagree at ({x},{y})"));
                        break 'outer;
                    }
                }
            }
        }
    }
    Ok(FubiniReport {
        total,
        parameter,
        iterated,
        transposition,
        defect,
    })
}
