//! Functors of mixed variance.
//!
//! A functor `F` on a category with variance `(E, M)` sends `f: x -> y` to
//! `F(f): F(f_s) -> F(f_t)`: covariantly along `E`, contravariantly along
//! `M`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fincat::{FinCategory, Mor, Obj, PlainFunctor};
use crate::target::{Codomain, FinSet, Function};
use crate::variance::{
    covariant_variance, index_variance, product_variance, VarianceStruct, WideSubcategory,
};
use crate::Cap;

pub type Arrow<T> = <T as Codomain>::Arrow;

/// Read access shared by stored and computed functors of variance.
pub trait VarFunctor: Send + Sync {
    type Target: Codomain;

    fn variance(&self) -> &Arc<VarianceStruct>;
    fn target(&self) -> &Self::Target;
    fn object(&self, x: Obj) -> usize;
    fn arrow(&self, f: Mor) -> Arrow<Self::Target>;

    fn source(&self) -> &Arc<FinCategory> {
        self.variance().owner()
    }
}

/// A functor of variance with every value stored.
#[derive(Debug, PartialEq, Eq)]
pub struct MixedFunctor<T: Codomain> {
    variance: Arc<VarianceStruct>,
    target: Arc<T>,
    obj_map: Vec<usize>,
    mor_map: Vec<Arrow<T>>,
}

pub type SetValuedMixedFunctor = MixedFunctor<FinSet>;

impl<T: Codomain> Clone for MixedFunctor<T> {
    fn clone(&self) -> Self {
        MixedFunctor {
            variance: self.variance.clone(),
            target: self.target.clone(),
            obj_map: self.obj_map.clone(),
            mor_map: self.mor_map.clone(),
        }
    }
}

impl<T: Codomain> VarFunctor for MixedFunctor<T> {
    type Target = T;

    fn variance(&self) -> &Arc<VarianceStruct> {
        &self.variance
    }

    fn target(&self) -> &T {
        &self.target
    }

    fn object(&self, x: Obj) -> usize {
        self.obj_map[x]
    }

    fn arrow(&self, f: Mor) -> Arrow<T> {
        self.mor_map[f].clone()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum MixedViolation {
    /// `F(f)` is not an arrow `F(f_s) -> F(f_t)`
    Typing {
        f: Mor,
    },
    Identity {
        x: Obj,
    },
    /// first composite equation fails at `(g, f)`
    CompositeLeft {
        g: Mor,
        f: Mor,
    },
    /// second composite equation fails at `(g, f)`
    CompositeRight {
        g: Mor,
        f: Mor,
    },
}

impl fmt::Display for MixedViolation {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MixedViolation::Typing { f } => write!(out, "F({f}) has the wrong type"),
            MixedViolation::Identity { x } => write!(out, "identity on object {x} not preserved"),
            MixedViolation::CompositeLeft { g, f } => {
                write!(out, "F({g} . {f}) != F((g^e f^m)^e) F(f) F((g_m f_e)_m)")
            }
            MixedViolation::CompositeRight { g, f } => {
                write!(out, "F({g} . {f}) != F((g^e f^m)^m) F(g) F((g_m f_e)_e)")
            }
        }
    }
}

impl<T: Codomain> MixedFunctor<T> {
    /// Build and validate.
    pub fn new(
        variance: Arc<VarianceStruct>,
        target: Arc<T>,
        obj_map: Vec<usize>,
        mor_map: Vec<Arrow<T>>,
    ) -> Result<MixedFunctor<T>> {
        let f = MixedFunctor::new_unchecked(variance, target, obj_map, mor_map)?;
        if let Some(v) = validate_mixed_functor(&f).first() {
            return Err(Error::InvalidFunctor(v.to_string()));
        }
        Ok(f)
    }

    /// Shape checks only.
    pub fn new_unchecked(
        variance: Arc<VarianceStruct>,
        target: Arc<T>,
        obj_map: Vec<usize>,
        mor_map: Vec<Arrow<T>>,
    ) -> Result<MixedFunctor<T>> {
        let c = variance.owner();
        if obj_map.len() != c.object_count() || mor_map.len() != c.morphism_count() {
            return Err(Error::Shape {
                expected: format!(
                    "{} objects, {} morphisms",
                    c.object_count(),
                    c.morphism_count()
                ),
                found: format!("{}, {}", obj_map.len(), mor_map.len()),
            });
        }
        Ok(MixedFunctor {
            variance,
            target,
            obj_map,
            mor_map,
        })
    }

    /// Store every value of `f`.
    pub fn materialize<F: VarFunctor<Target = T>>(f: &F, target: Arc<T>) -> MixedFunctor<T> {
        let c = f.source();
        MixedFunctor {
            variance: f.variance().clone(),
            target,
            obj_map: (0..c.object_count()).map(|x| f.object(x)).collect(),
            mor_map: crate::par::map(c.morphism_count(), |m| f.arrow(m)),
        }
    }

    pub fn target_arc(&self) -> &Arc<T> {
        &self.target
    }

    pub fn object_map(&self) -> &[usize] {
        &self.obj_map
    }

    pub fn morphism_map(&self) -> &[Arrow<T>] {
        &self.mor_map
    }

    /// Replace one value, keeping the rest. Used to build corrupted copies.
    pub fn with_arrow(&self, f: Mor, a: Arrow<T>) -> MixedFunctor<T> {
        let mut out = self.clone();
        out.mor_map[f] = a;
        out
    }
}

impl MixedFunctor<FinCategory> {
    /// A plain functor seen under the covariant variance of its source.
    pub fn from_plain(f: &PlainFunctor) -> MixedFunctor<FinCategory> {
        MixedFunctor {
            variance: Arc::new(covariant_variance(f.source())),
            target: f.target().clone(),
            obj_map: f.object_map().to_vec(),
            mor_map: f.morphism_map().to_vec(),
        }
    }
}

/// Every failed identity, typing or composite condition, sorted.
pub fn validate_mixed_functor<F: VarFunctor>(f: &F) -> Vec<MixedViolation> {
    let v = f.variance();
    let c = &**v.owner();
    let t = f.target();
    let mut out: Vec<MixedViolation> = Vec::new();
    for x in 0..c.object_count() {
        if f.arrow(c.identity(x)) != t.identity_arrow(f.object(x)) {
            out.push(MixedViolation::Identity { x });
        }
    }
    let typing: Vec<MixedViolation> = crate::par::filter_map(c.morphism_count(), |m| {
        let a = f.arrow(m);
        let fac = v.fac(m);
        (t.arrow_source(&a) != f.object(fac.start_obj)
            || t.arrow_target(&a) != f.object(fac.term_obj))
        .then_some(MixedViolation::Typing { f: m })
    });
    if !typing.is_empty() {
        out.extend(typing);
        out.sort();
        return out;
    }
    out.extend(crate::par::flat_map(c.morphism_count(), |fm| {
        let ff = v.fac(fm);
        let mut local = Vec::new();
        for &g in c.outgoing(c.cod(fm)).iter() {
            let fg = v.fac(g);
            let gf = f.arrow(c.compose(g, fm).expect("composable"));
            let mid_t = v.fac(c.compose(fg.term_e, ff.term_m).expect("composable"));
            let mid_s = v.fac(c.compose(fg.start_m, ff.start_e).expect("composable"));
            let left = t
                .compose_arrows(&f.arrow(fm), &f.arrow(mid_s.start_m))
                .and_then(|a| t.compose_arrows(&f.arrow(mid_t.term_e), &a));
            if left.as_ref() != Some(&gf) {
                local.push(MixedViolation::CompositeLeft { g, f: fm });
            }
            let right = t
                .compose_arrows(&f.arrow(g), &f.arrow(mid_s.start_e))
                .and_then(|a| t.compose_arrows(&f.arrow(mid_t.term_m), &a));
            if right.as_ref() != Some(&gf) {
                local.push(MixedViolation::CompositeRight { g, f: fm });
            }
        }
        local
    }));
    out.sort();
    out
}

/// Morphisms where `F(f) = F(f^e) F(f_m) = F(f^m) F(f_e)` fails.
pub fn decomposition_failures<F: VarFunctor>(f: &F) -> Vec<Mor> {
    let v = f.variance();
    let t = f.target();
    crate::par::filter_map(v.owner().morphism_count(), |m| {
        let fac = v.fac(m);
        let a = Some(f.arrow(m));
        let one = t.compose_arrows(&f.arrow(fac.term_e), &f.arrow(fac.start_m));
        let two = t.compose_arrows(&f.arrow(fac.term_m), &f.arrow(fac.start_e));
        (one != a || two != a).then_some(m)
    })
}

/// A set-valued functor whose morphism values are computed on demand. Used
/// for domains too large to store.
#[derive(Clone)]
pub struct ComputedSetFunctor {
    variance: Arc<VarianceStruct>,
    obj_map: Vec<usize>,
    arrow_fn: Arc<dyn Fn(Mor) -> Function + Send + Sync>,
}

impl fmt::Debug for ComputedSetFunctor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ComputedSetFunctor")
            .field("objects", &self.obj_map)
            .finish_non_exhaustive()
    }
}

impl ComputedSetFunctor {
    pub fn new(
        variance: Arc<VarianceStruct>,
        obj_map: Vec<usize>,
        arrow_fn: impl Fn(Mor) -> Function + Send + Sync + 'static,
    ) -> Result<ComputedSetFunctor> {
        if obj_map.len() != variance.owner().object_count() {
            return Err(Error::Shape {
                expected: format!("{} objects", variance.owner().object_count()),
                found: obj_map.len().to_string(),
            });
        }
        Ok(ComputedSetFunctor {
            variance,
            obj_map,
            arrow_fn: Arc::new(arrow_fn),
        })
    }
}

static FINSET: FinSet = FinSet;

impl VarFunctor for ComputedSetFunctor {
    type Target = FinSet;

    fn variance(&self) -> &Arc<VarianceStruct> {
        &self.variance
    }

    fn target(&self) -> &FinSet {
        &FINSET
    }

    fn object(&self, x: Obj) -> usize {
        self.obj_map[x]
    }

    fn arrow(&self, f: Mor) -> Function {
        (self.arrow_fn)(f)
    }
}

/// Covariant values on `E` and contravariant values on `M` over one object
/// map.
#[derive(Debug, PartialEq, Eq)]
pub struct CompatiblePair<T: Codomain> {
    variance: Arc<VarianceStruct>,
    target: Arc<T>,
    obj_map: Vec<usize>,
    /// `G(e)` for `e` in `E`
    g: Vec<Option<Arrow<T>>>,
    /// `H(m): H(cod m) -> H(dom m)` for `m` in `M`
    h: Vec<Option<Arrow<T>>>,
}

impl<T: Codomain> Clone for CompatiblePair<T> {
    fn clone(&self) -> Self {
        CompatiblePair {
            variance: self.variance.clone(),
            target: self.target.clone(),
            obj_map: self.obj_map.clone(),
            g: self.g.clone(),
            h: self.h.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum PairViolation {
    CovariantTyping { e: Mor },
    CovariantComposition { g: Mor, f: Mor },
    ContravariantTyping { m: Mor },
    ContravariantComposition { g: Mor, f: Mor },
    Identity { x: Obj },
    Square { f: Mor },
}

impl<T: Codomain> CompatiblePair<T> {
    /// `g_values[f]` must be set exactly on `E`, `h_values[f]` exactly on
    /// `M`, and the two object maps must agree.
    pub fn new(
        variance: Arc<VarianceStruct>,
        target: Arc<T>,
        g_objects: Vec<usize>,
        h_objects: Vec<usize>,
        g_values: Vec<Option<Arrow<T>>>,
        h_values: Vec<Option<Arrow<T>>>,
    ) -> Result<CompatiblePair<T>> {
        if let Some(x) = (0..g_objects.len().max(h_objects.len()))
            .find(|&x| g_objects.get(x) != h_objects.get(x))
        {
            return Err(Error::ObjectMismatch(x));
        }
        let c = variance.owner();
        if g_objects.len() != c.object_count()
            || g_values.len() != c.morphism_count()
            || h_values.len() != c.morphism_count()
        {
            return Err(Error::Shape {
                expected: format!(
                    "{} objects, {} morphisms",
                    c.object_count(),
                    c.morphism_count()
                ),
                found: format!("{}, {}/{}", g_objects.len(), g_values.len(), h_values.len()),
            });
        }
        for f in 0..c.morphism_count() {
            if g_values[f].is_some() != variance.is_covariant(f)
                || h_values[f].is_some() != variance.is_contravariant(f)
            {
                return Err(Error::Shape {
                    expected: "values exactly on E and on M".into(),
                    found: format!("morphism {f}"),
                });
            }
        }
        Ok(CompatiblePair {
            variance,
            target,
            obj_map: g_objects,
            g: g_values,
            h: h_values,
        })
    }

    pub fn variance(&self) -> &Arc<VarianceStruct> {
        &self.variance
    }

    pub fn object(&self, x: Obj) -> usize {
        self.obj_map[x]
    }

    pub fn covariant(&self, e: Mor) -> Option<&Arrow<T>> {
        self.g[e].as_ref()
    }

    pub fn contravariant(&self, m: Mor) -> Option<&Arrow<T>> {
        self.h[m].as_ref()
    }

    pub fn with_contravariant(&self, m: Mor, a: Arrow<T>) -> CompatiblePair<T> {
        let mut out = self.clone();
        out.h[m] = Some(a);
        out
    }
}

/// Functoriality of both halves and the compatibility square
/// `G(f^e) H(f_m) = H(f^m) G(f_e)`.
pub fn check_compatible_pair<T: Codomain>(p: &CompatiblePair<T>) -> Vec<PairViolation> {
    let v = &p.variance;
    let c = &**v.owner();
    let t = &*p.target;
    let mut out = Vec::new();
    for x in 0..c.object_count() {
        let id = Some(t.identity_arrow(p.obj_map[x]));
        if p.g[c.identity(x)] != id || p.h[c.identity(x)] != id {
            out.push(PairViolation::Identity { x });
        }
    }
    for f in 0..c.morphism_count() {
        let (d, e) = (p.obj_map[c.dom(f)], p.obj_map[c.cod(f)]);
        if let Some(a) = &p.g[f] {
            if t.arrow_source(a) != d || t.arrow_target(a) != e {
                out.push(PairViolation::CovariantTyping { e: f });
            }
        }
        if let Some(a) = &p.h[f] {
            if t.arrow_source(a) != e || t.arrow_target(a) != d {
                out.push(PairViolation::ContravariantTyping { m: f });
            }
        }
    }
    if !out.is_empty() {
        return out;
    }
    for f in 0..c.morphism_count() {
        for &g in c.outgoing(c.cod(f)).iter() {
            let gf = c.compose(g, f).expect("composable");
            if let (Some(a), Some(b)) = (&p.g[g], &p.g[f]) {
                if t.compose_arrows(a, b).as_ref() != p.g[gf].as_ref() {
                    out.push(PairViolation::CovariantComposition { g, f });
                }
            }
            if let (Some(a), Some(b)) = (&p.h[g], &p.h[f]) {
                if t.compose_arrows(b, a).as_ref() != p.h[gf].as_ref() {
                    out.push(PairViolation::ContravariantComposition { g, f });
                }
            }
        }
    }
    for f in 0..c.morphism_count() {
        let fac = v.fac(f);
        let one = t.compose_arrows(
            p.g[fac.term_e].as_ref().expect("E"),
            p.h[fac.start_m].as_ref().expect("M"),
        );
        let two = t.compose_arrows(
            p.h[fac.term_m].as_ref().expect("M"),
            p.g[fac.start_e].as_ref().expect("E"),
        );
        if one.is_none() || one != two {
            out.push(PairViolation::Square { f });
        }
    }
    out.sort();
    out
}

/// Restrict a valid functor of variance to `E` and to `M`.
pub fn restrict_to_pair<T: Codomain>(f: &MixedFunctor<T>) -> Result<CompatiblePair<T>> {
    if let Some(v) = validate_mixed_functor(f).first() {
        return Err(Error::InvalidFunctor(v.to_string()));
    }
    let v = &f.variance;
    let n = v.owner().morphism_count();
    Ok(CompatiblePair {
        variance: v.clone(),
        target: f.target.clone(),
        obj_map: f.obj_map.clone(),
        g: (0..n)
            .map(|m| v.is_covariant(m).then(|| f.mor_map[m].clone()))
            .collect(),
        h: (0..n)
            .map(|m| v.is_contravariant(m).then(|| f.mor_map[m].clone()))
            .collect(),
    })
}

/// `F(f) = G(f^e) H(f_m)`.
pub fn assemble_mixed<T: Codomain>(p: &CompatiblePair<T>) -> Result<MixedFunctor<T>> {
    if let Some(violation) = check_compatible_pair(p).first() {
        return Err(match violation {
            PairViolation::Square { f } => Error::Incompatible(*f),
            other => Error::InvalidFunctor(format!("{other:?}")),
        });
    }
    let v = &p.variance;
    let t = &*p.target;
    let mor_map = (0..v.owner().morphism_count())
        .map(|f| {
            let fac = v.fac(f);
            t.compose_arrows(
                p.g[fac.term_e].as_ref().expect("E"),
                p.h[fac.start_m].as_ref().expect("M"),
            )
            .expect("typed by the check")
        })
        .collect();
    Ok(MixedFunctor {
        variance: v.clone(),
        target: p.target.clone(),
        obj_map: p.obj_map.clone(),
        mor_map,
    })
}

/// Rebuild a covariant functor from covariant functors on `E` and on `M`
/// (given on the subcategories built by [`WideSubcategory::as_category`]):
/// `F(f) = H(f^m) G(f^e)`. Fails when `H(f^m) G(f^e) != G(f_e) H(f_m)`.
pub fn assemble_covariant(
    v: &VarianceStruct,
    g: &PlainFunctor,
    h: &PlainFunctor,
) -> Result<PlainFunctor> {
    let c = v.owner();
    let (e_cat, e_inc) = v.covariant_part().as_category()?;
    let (m_cat, m_inc) = v.contravariant_part().as_category()?;
    if **g.source() != *e_cat || **h.source() != *m_cat || g.target() != h.target() {
        return Err(Error::Shape {
            expected: "functors on E and on M with a common target".into(),
            found: "mismatched source or target".into(),
        });
    }
    if let Some(x) = (0..c.object_count()).find(|&x| g.object(x) != h.object(x)) {
        return Err(Error::ObjectMismatch(x));
    }
    let back = |inc: &PlainFunctor| {
        let mut b = vec![usize::MAX; c.morphism_count()];
        for (i, &f) in inc.morphism_map().iter().enumerate() {
            b[f] = i;
        }
        b
    };
    let (eb, mb) = (back(&e_inc), back(&m_inc));
    let d = g.target();
    let mut mor_map = Vec::with_capacity(c.morphism_count());
    for f in 0..c.morphism_count() {
        let fac = v.fac(f);
        let one = d.compose(h.morphism(mb[fac.term_m]), g.morphism(eb[fac.term_e]));
        let two = d.compose(g.morphism(eb[fac.start_e]), h.morphism(mb[fac.start_m]));
        match (one, two) {
            (Some(a), Some(b)) if a == b => mor_map.push(a),
            _ => return Err(Error::Incompatible(f)),
        }
    }
    let obj_map = (0..c.object_count()).map(|x| g.object(x)).collect();
    PlainFunctor::new(c.clone(), d.clone(), obj_map, mor_map)
}

/// `Hom: C x C -> Set` of index-variance `(1, 0)`; `(f, g)` sends `h` to
/// `g . h . f`. Elements of `Hom(x, y)` are numbered by hom position.
pub fn hom_functor(c: &Arc<FinCategory>, cap: Cap) -> Result<SetValuedMixedFunctor> {
    let v = Arc::new(index_variance(&[c.clone(), c.clone()], &[1, 0], cap)?);
    let p = v.owner().clone();
    let obj_map: Vec<usize> = (0..p.object_count())
        .map(|xy| {
            let s = p.split_object(xy);
            c.hom_size(s[0], s[1])
        })
        .collect();
    let mor_map = crate::par::map(p.morphism_count(), |fg| {
        let s = p.split_morphism(fg);
        let (f, g) = (s[0], s[1]);
        let domain = c.hom(c.cod(f), c.dom(g));
        let codomain_size = c.hom_size(c.dom(f), c.cod(g));
        let values = domain
            .iter()
            .map(|&h| c.hom_position(c.compose_path(&[g, h, f]).expect("composable")))
            .collect();
        Function::new_unchecked(codomain_size, values)
    });
    Ok(MixedFunctor {
        variance: v,
        target: Arc::new(FinSet),
        obj_map,
        mor_map,
    })
}

/// `G(e) = F(e)`, `G(m) = F(m)^-1` for a covariant `f` and a variance `v` on
/// its source.
pub fn invert_contravariant<T: Codomain>(
    f: &MixedFunctor<T>,
    v: Arc<VarianceStruct>,
) -> Result<MixedFunctor<T>> {
    if v.owner() != f.variance.owner() || !f.variance.is_covariant_variance() {
        return Err(Error::Shape {
            expected: "covariant functor on the variance's category".into(),
            found: "other variance or category".into(),
        });
    }
    let t = &*f.target;
    let n = v.owner().morphism_count();
    let mut h = vec![None; n];
    for (m, slot) in h.iter_mut().enumerate() {
        if v.is_contravariant(m) {
            *slot = Some(
                t.inverse_arrow(&f.mor_map[m])
                    .ok_or(Error::NotInvertible(m))?,
            );
        }
    }
    let g = (0..n)
        .map(|e| v.is_covariant(e).then(|| f.mor_map[e].clone()))
        .collect();
    let pair = CompatiblePair {
        variance: v,
        target: f.target.clone(),
        obj_map: f.obj_map.clone(),
        g,
        h,
    };
    assemble_mixed(&pair)
}

/// Convenience for plain functors between finite categories.
pub fn invert_plain(f: &PlainFunctor, v: Arc<VarianceStruct>) -> Result<MixedFunctor<FinCategory>> {
    invert_contravariant(&MixedFunctor::from_plain(f), v)
}

/// Constant functor at a set of size `n`.
pub fn constant_set_functor(v: Arc<VarianceStruct>, n: usize) -> SetValuedMixedFunctor {
    let c = v.owner().clone();
    MixedFunctor {
        variance: v,
        target: Arc::new(FinSet),
        obj_map: vec![n; c.object_count()],
        mor_map: vec![Function::identity(n); c.morphism_count()],
    }
}

/// `(F1 x F2)(a, b) = F1(a) x F2(b)` on the product variance; the pair
/// `(i, j)` is numbered `i * |F2(b)| + j`.
pub fn external_product<A, B>(f1: &A, f2: &B, cap: Cap) -> Result<SetValuedMixedFunctor>
where
    A: VarFunctor<Target = FinSet>,
    B: VarFunctor<Target = FinSet>,
{
    let v = Arc::new(product_variance(
        &[f1.variance().clone(), f2.variance().clone()],
        cap,
    )?);
    let p = v.owner().clone();
    let obj_map: Vec<usize> = (0..p.object_count())
        .map(|ab| {
            let s = p.split_object(ab);
            f1.object(s[0]) * f2.object(s[1])
        })
        .collect();
    let mor_map = crate::par::map(p.morphism_count(), |fg| {
        let s = p.split_morphism(fg);
        let (a, b) = (f1.arrow(s[0]), f2.arrow(s[1]));
        Function::from_fn(a.dom() * b.dom(), a.cod() * b.cod(), |k| {
            a.apply(k / b.dom()) * b.cod() + b.apply(k % b.dom())
        })
    });
    Ok(MixedFunctor {
        variance: v,
        target: Arc::new(FinSet),
        obj_map,
        mor_map,
    })
}

/// Whether `g -> g^e` is multiplicative on a group with variance.
pub fn term_e_is_homomorphism(v: &VarianceStruct) -> bool {
    let c = &**v.owner();
    (0..c.morphism_count()).all(|g| {
        (0..c.morphism_count()).all(|h| {
            c.compose(g, h).map(|gh| v.fac(gh).term_e)
                == c.compose(v.fac(g).term_e, v.fac(h).term_e)
        })
    })
}

/// `g^e = g_e` for every `g`.
pub fn term_e_equals_start_e(v: &VarianceStruct) -> bool {
    v.table().iter().all(|f| f.term_e == f.start_e)
}

/// A functor on a contravariant variance rewritten as a covariant functor on
/// the opposite category, and back.
pub fn to_opposite_form<T: Codomain>(
    f: &MixedFunctor<T>,
) -> Result<(Arc<FinCategory>, MixedFunctor<T>)> {
    if !f.variance.is_contravariant_variance() {
        return Err(Error::Shape {
            expected: "contravariant variance".into(),
            found: "mixed or covariant".into(),
        });
    }
    let op = Arc::new(crate::fincat::opposite(f.variance.owner()));
    Ok((
        op.clone(),
        MixedFunctor {
            variance: Arc::new(covariant_variance(&op)),
            target: f.target.clone(),
            obj_map: f.obj_map.clone(),
            mor_map: f.mor_map.clone(),
        },
    ))
}

/// Inverse of [`to_opposite_form`]; `original` is the category whose
/// opposite carries `f`.
pub fn from_opposite_form<T: Codomain>(
    f: &MixedFunctor<T>,
    original: &Arc<FinCategory>,
) -> Result<MixedFunctor<T>> {
    if !f.variance.is_covariant_variance()
        || **f.variance.owner() != crate::fincat::opposite(original)
    {
        return Err(Error::Shape {
            expected: "covariant functor on the opposite category".into(),
            found: "other source".into(),
        });
    }
    Ok(MixedFunctor {
        variance: Arc::new(crate::variance::contravariant_variance(original)),
        target: f.target.clone(),
        obj_map: f.obj_map.clone(),
        mor_map: f.mor_map.clone(),
    })
}

/// `F . K` for a variance-preserving reindexing `K` given by its object and
/// morphism maps.
pub struct Reindexed<'a, F: VarFunctor> {
    base: &'a F,
    variance: Arc<VarianceStruct>,
    obj_map: Vec<Obj>,
    mor_map: Vec<Mor>,
}

impl<'a, F: VarFunctor> Reindexed<'a, F> {
    /// `K` must send covariant morphisms to covariant ones and contravariant
    /// to contravariant; it then preserves both factorizations.
    pub fn new(
        base: &'a F,
        variance: Arc<VarianceStruct>,
        obj_map: Vec<Obj>,
        mor_map: Vec<Mor>,
    ) -> Result<Self> {
        let c = variance.owner();
        let bv = base.variance();
        let b = bv.owner();
        if obj_map.len() != c.object_count() || mor_map.len() != c.morphism_count() {
            return Err(Error::Shape {
                expected: format!(
                    "{} objects, {} morphisms",
                    c.object_count(),
                    c.morphism_count()
                ),
                found: format!("{}, {}", obj_map.len(), mor_map.len()),
            });
        }
        for f in 0..c.morphism_count() {
            let k = mor_map[f];
            if k >= b.morphism_count()
                || b.dom(k) != obj_map[c.dom(f)]
                || b.cod(k) != obj_map[c.cod(f)]
            {
                return Err(Error::InvalidFunctor(format!(
                    "reindexing mistypes morphism {f}"
                )));
            }
            if (variance.is_covariant(f) && !bv.is_covariant(k))
                || (variance.is_contravariant(f) && !bv.is_contravariant(k))
            {
                return Err(Error::InvalidFunctor(format!(
                    "reindexing does not preserve the variance at {f}"
                )));
            }
        }
        Ok(Reindexed {
            base,
            variance,
            obj_map,
            mor_map,
        })
    }

    pub fn object_map(&self) -> &[Obj] {
        &self.obj_map
    }

    pub fn morphism_map(&self) -> &[Mor] {
        &self.mor_map
    }
}

impl<F: VarFunctor> VarFunctor for Reindexed<'_, F> {
    type Target = F::Target;

    fn variance(&self) -> &Arc<VarianceStruct> {
        &self.variance
    }

    fn target(&self) -> &F::Target {
        self.base.target()
    }

    fn object(&self, x: Obj) -> usize {
        self.base.object(self.obj_map[x])
    }

    fn arrow(&self, f: Mor) -> Arrow<F::Target> {
        self.base.arrow(self.mor_map[f])
    }
}

#[allow(unused)]
fn _assert_send_sync() {
    fn is<T: Send + Sync>() {}
    is::<SetValuedMixedFunctor>();
    is::<ComputedSetFunctor>();
    is::<WideSubcategory>();
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{chain, cyclic, symmetric, walking_arrow, FinSetSkeleton};
    use crate::variance::{build_variance, contravariant_variance};

    fn s4_variance() -> Arc<VarianceStruct> {
        let s4 = Arc::new(symmetric(4));
        let g = |l: &str| s4.find_morphism(l).unwrap();
        let e = WideSubcategory::generated(s4.clone(), &[g("(1234)"), g("(13)")]).unwrap();
        let m = WideSubcategory::generated(s4.clone(), &[g("(123)")]).unwrap();
        Arc::new(build_variance(e, m).unwrap())
    }

    #[test]
    fn hom_sizes() {
        let two = Arc::new(walking_arrow());
        let hom = hom_functor(&two, Cap::default()).unwrap();
        let p = hom.source().clone();
        assert_eq!(hom.object(p.tuple_object(&[0, 1])), 1);
        assert_eq!(hom.object(p.tuple_object(&[1, 0])), 0);
        assert!(validate_mixed_functor(&hom).is_empty());

        let s3 = Arc::new(symmetric(3));
        let hom = hom_functor(&s3, Cap::default()).unwrap();
        assert_eq!(hom.object(0), 6);
        assert!(validate_mixed_functor(&hom).is_empty());
        // action h -> g h f against the table
        let p = hom.source().clone();
        for f in 0..6 {
            for g in 0..6 {
                let a = hom.arrow(p.tuple_morphism(&[f, g]));
                for h in 0..6 {
                    assert_eq!(a.apply(h), s3.compose_path(&[g, h, f]).unwrap());
                }
            }
        }

        let fs = FinSetSkeleton::new(3);
        let hom = hom_functor(&fs.category, Cap::default()).unwrap();
        let p = hom.source().clone();
        assert_eq!(hom.object(p.tuple_object(&[1, 2])), 9);
    }

    #[test]
    fn hom_functor_corruption_is_reported() {
        let s3 = Arc::new(symmetric(3));
        let hom = hom_functor(&s3, Cap::default()).unwrap();
        let bad = hom.with_arrow(7, Function::identity(6));
        let report = validate_mixed_functor(&bad);
        assert!(!report.is_empty());
        assert!(report.iter().any(|v| matches!(
            v,
            MixedViolation::CompositeLeft { g: 7, .. }
                | MixedViolation::CompositeLeft { f: 7, .. }
                | MixedViolation::CompositeRight { g: 7, .. }
                | MixedViolation::CompositeRight { f: 7, .. }
        )));
    }

    #[test]
    fn plain_functor_is_covariant_functor_of_variance() {
        let c = Arc::new(chain(3));
        let f = MixedFunctor::from_plain(&PlainFunctor::identity(c));
        assert!(validate_mixed_functor(&f).is_empty());
        assert!(decomposition_failures(&f).is_empty());
    }

    #[test]
    fn s4_round_trip_and_swap() {
        let v = s4_variance();
        let s4 = v.owner().clone();
        let f = invert_plain(&PlainFunctor::identity(s4.clone()), v.clone()).unwrap();
        assert!(validate_mixed_functor(&f).is_empty());
        for m in 0..24 {
            if v.is_contravariant(m) {
                assert!(s4.is_identity(s4.compose(f.arrow(m), m).unwrap()));
            }
        }
        let pair = restrict_to_pair(&f).unwrap();
        assert!(check_compatible_pair(&pair).is_empty());
        assert_eq!(assemble_mixed(&pair).unwrap(), f);
        assert_eq!(
            restrict_to_pair(&assemble_mixed(&pair).unwrap()).unwrap(),
            pair
        );

        // swap H on the two non-identity elements of the order-3 subgroup
        let m: Vec<Mor> = v
            .contravariant_part()
            .morphisms()
            .into_iter()
            .filter(|&m| !s4.is_identity(m))
            .collect();
        let (a, b) = (
            *pair.contravariant(m[0]).unwrap(),
            *pair.contravariant(m[1]).unwrap(),
        );
        let swapped = pair.with_contravariant(m[0], b).with_contravariant(m[1], a);
        assert!(!check_compatible_pair(&swapped).is_empty());
    }

    #[test]
    fn covariant_and_contravariant_pairs() {
        let c = Arc::new(chain(3));
        let id = PlainFunctor::identity(c.clone());
        let cov = MixedFunctor::from_plain(&id);
        let pair = restrict_to_pair(&cov).unwrap();
        for f in 0..6 {
            assert_eq!(pair.contravariant(f).is_some(), c.is_identity(f));
        }
        assert_eq!(assemble_mixed(&pair).unwrap(), cov);

        // a contravariant functor on a one-object category: inversion on Z3
        let z3 = Arc::new(cyclic(3));
        let contra = Arc::new(contravariant_variance(&z3));
        let inv = invert_plain(&PlainFunctor::identity(z3.clone()), contra).unwrap();
        let pair = restrict_to_pair(&inv).unwrap();
        for f in 0..3 {
            assert_eq!(pair.covariant(f).is_some(), z3.is_identity(f));
        }
        assert_eq!(inv.arrow(1), 2);
    }

    #[test]
    fn covariant_reassembly() {
        let v = s4_variance();
        let (e_cat, e_inc) = v.covariant_part().as_category().unwrap();
        let (_, m_inc) = v.contravariant_part().as_category().unwrap();
        let f = assemble_covariant(&v, &e_inc, &m_inc).unwrap();
        assert_eq!(f, PlainFunctor::identity(v.owner().clone()));

        // any endomorphism of S4 agreeing with both inclusions is the identity
        let s4 = v.owner().clone();
        let gens = [
            s4.find_morphism("(12)").unwrap(),
            s4.find_morphism("(1234)").unwrap(),
        ];
        let mut extensions = 0;
        for a in 0..24 {
            for b in 0..24 {
                if let Some(map) = extend_homomorphism(&s4, &gens, &[a, b]) {
                    let agrees_e = e_inc.morphism_map().iter().all(|&x| map[x] == x);
                    let agrees_m = m_inc.morphism_map().iter().all(|&x| map[x] == x);
                    if agrees_e && agrees_m {
                        extensions += 1;
                    }
                }
            }
        }
        assert_eq!(extensions, 1);

        let bad_m = PlainFunctor::new_unchecked(
            m_inc.source().clone(),
            s4.clone(),
            vec![0],
            m_inc
                .morphism_map()
                .iter()
                .map(|&x| s4.compose(x, x).unwrap())
                .collect(),
        )
        .unwrap();
        assert!(matches!(
            assemble_covariant(&v, &e_inc, &bad_m),
            Err(Error::Incompatible(_))
        ));
        let _ = e_cat;
    }

    /// Extend generator images to a homomorphism of a one-object category by
    /// closure, if consistent.
    fn extend_homomorphism(c: &FinCategory, gens: &[Mor], images: &[Mor]) -> Option<Vec<Mor>> {
        let n = c.morphism_count();
        let mut map = vec![usize::MAX; n];
        map[c.identity(0)] = c.identity(0);
        let mut queue = vec![c.identity(0)];
        while let Some(x) = queue.pop() {
            for (&g, &img) in gens.iter().zip(images) {
                let y = c.compose(g, x).unwrap();
                let iy = c.compose(img, map[x]).unwrap();
                if map[y] == usize::MAX {
                    map[y] = iy;
                    queue.push(y);
                } else if map[y] != iy {
                    return None;
                }
            }
        }
        Some(map)
    }

    #[test]
    fn inversion_failure_on_non_bijection() {
        let two = Arc::new(walking_arrow());
        let cov = Arc::new(covariant_variance(&two));
        let f = MixedFunctor::new(
            cov,
            Arc::new(FinSet),
            vec![2, 1],
            vec![
                Function::identity(2),
                Function::identity(1),
                Function::constant(2, 1, 0),
            ],
        )
        .unwrap();
        let contra = Arc::new(contravariant_variance(&two));
        assert_eq!(
            invert_contravariant(&f, contra).unwrap_err(),
            Error::NotInvertible(2)
        );
        assert_eq!(invert_contravariant(&f, f.variance().clone()).unwrap(), f);
    }

    #[test]
    fn term_e_homomorphism_criterion() {
        let v = s4_variance();
        assert_eq!(term_e_is_homomorphism(&v), term_e_equals_start_e(&v));
        let z6 = Arc::new(cyclic(6));
        let e = WideSubcategory::generated(z6.clone(), &[2]).unwrap();
        let m = WideSubcategory::generated(z6.clone(), &[3]).unwrap();
        let v = build_variance(e, m).unwrap();
        assert!(term_e_is_homomorphism(&v));
        assert!(term_e_equals_start_e(&v));
    }

    #[test]
    fn opposite_adapter_round_trips() {
        let c = Arc::new(chain(3));
        let contra = Arc::new(contravariant_variance(&c));
        // constant functor is valid under any variance
        let f = constant_set_functor(contra, 2);
        let (_, op_form) = to_opposite_form(&f).unwrap();
        assert!(validate_mixed_functor(&op_form).is_empty());
        assert_eq!(from_opposite_form(&op_form, &c).unwrap(), f);
    }

    #[test]
    fn external_products_are_valid() {
        let s3 = Arc::new(symmetric(3));
        let z2 = Arc::new(cyclic(2));
        let f = external_product(
            &hom_functor(&s3, Cap::default()).unwrap(),
            &hom_functor(&z2, Cap::default()).unwrap(),
            Cap::default(),
        )
        .unwrap();
        assert_eq!(f.object(0), 12);
        assert!(validate_mixed_functor(&f).is_empty());
    }
}
