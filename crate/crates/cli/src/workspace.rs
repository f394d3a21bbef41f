//! Elaboration of a parsed file into categories, variances, functors, spans
//! and transformations, with every semantic check run eagerly.

use std::collections::HashMap;
use std::sync::Arc;

use catv_core::fincat::{disjoint_union, opposite, product_category, CategoryBuilder};
use catv_core::fixtures::ev::ev_example;
use catv_core::fixtures::{chain, cyclic, symmetric, walking_arrow, FinSetSkeleton};
use catv_core::mixfun::{
    assemble_mixed, constant_set_functor, external_product, hom_functor, Arrow, CompatiblePair,
    ComputedSetFunctor, MixedFunctor, SetValuedMixedFunctor, VarFunctor,
};
use catv_core::natural::{
    build_span_from_partition, derive_partition, Classes, PartitionOfArguments, PartitionSpan, Span,
};
use catv_core::variance::{
    build_variance, contravariant_variance, covariant_variance, index_variance,
    path_component_variance, product_variance, VarianceStruct, WideSubcategory,
};
use catv_core::{Cap, Codomain, FinCategory, FinSet, Function, Mor, Obj, PlainFunctor};

use crate::dsl::{
    parse, Assertion, Call, CategoryDef, Decl, Diagnostic, File, FunctorDef, Item, Loc, Name,
    PartitionDef, Ref, SpanDef, Value, VarianceDef,
};

type DResult<T> = Result<T, Diagnostic>;

/// Named values of one kind, in declaration order.
#[derive(Clone, Debug)]
pub struct Table<T> {
    entries: Vec<(String, T)>,
    index: HashMap<String, usize>,
}

impl<T> Default for Table<T> {
    fn default() -> Self {
        Table {
            entries: Vec::new(),
            index: HashMap::new(),
        }
    }
}

impl<T> Table<T> {
    fn insert(&mut self, kind: &str, name: &Name, value: T) -> DResult<()> {
        if self.index.contains_key(&name.text) {
            return Err(Diagnostic::new(
                name.loc,
                format!("duplicate {kind} '{}'", name.text),
            ));
        }
        self.index.insert(name.text.clone(), self.entries.len());
        self.entries.push((name.text.clone(), value));
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&T> {
        self.index.get(name).map(|&i| &self.entries[i].1)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &T)> {
        self.entries.iter().map(|(n, v)| (n.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// A set-valued functor, stored or computed on demand.
#[derive(Clone, Debug)]
pub enum SetFun {
    Stored(SetValuedMixedFunctor),
    Computed(ComputedSetFunctor),
}

impl VarFunctor for SetFun {
    type Target = FinSet;

    fn variance(&self) -> &Arc<VarianceStruct> {
        match self {
            SetFun::Stored(f) => f.variance(),
            SetFun::Computed(f) => f.variance(),
        }
    }

    fn target(&self) -> &FinSet {
        match self {
            SetFun::Stored(f) => f.target(),
            SetFun::Computed(f) => f.target(),
        }
    }

    fn object(&self, x: Obj) -> usize {
        match self {
            SetFun::Stored(f) => f.object(x),
            SetFun::Computed(f) => f.object(x),
        }
    }

    fn arrow(&self, m: Mor) -> Function {
        match self {
            SetFun::Stored(f) => f.arrow(m),
            SetFun::Computed(f) => f.arrow(m),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SetFunctorValue {
    pub functor: SetFun,
    /// element names per object, when the construction provides them
    pub labels: Option<Vec<Vec<String>>>,
}

impl SetFunctorValue {
    pub fn element(&self, x: Obj, i: usize) -> String {
        match &self.labels {
            Some(l) => l[x][i].clone(),
            None => i.to_string(),
        }
    }
}

#[derive(Clone, Debug)]
pub enum FunctorValue {
    Plain(PlainFunctor),
    Mixed(MixedFunctor<FinCategory>),
    Set(SetFunctorValue),
}

impl FunctorValue {
    pub fn source(&self) -> &Arc<FinCategory> {
        match self {
            FunctorValue::Plain(p) => p.source(),
            FunctorValue::Mixed(m) => m.source(),
            FunctorValue::Set(s) => s.functor.source(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SpanValue {
    pub span: Span,
    pub partition: Option<PartitionSpan>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Components {
    Set(Vec<Function>),
    Cat(Vec<Mor>),
}

#[derive(Clone, Debug)]
pub struct TransformationValue {
    pub f: String,
    pub g: String,
    pub span: String,
    pub components: Components,
}

#[derive(Clone, Debug)]
pub struct Workspace {
    pub file: File,
    pub cap: Cap,
    pub categories: Table<Arc<FinCategory>>,
    pub variances: Table<Arc<VarianceStruct>>,
    pub functors: Table<FunctorValue>,
    pub spans: Table<SpanValue>,
    pub partitions: Table<PartitionOfArguments>,
    pub transformations: Table<TransformationValue>,
    pub assertions: Vec<(Loc, Assertion)>,
}

pub fn load(text: &str, cap: Cap) -> DResult<Workspace> {
    elaborate(parse(text)?, cap)
}

pub fn elaborate(file: File, cap: Cap) -> DResult<Workspace> {
    let mut ws = Workspace {
        file: File::default(),
        cap,
        categories: Table::default(),
        variances: Table::default(),
        functors: Table::default(),
        spans: Table::default(),
        partitions: Table::default(),
        transformations: Table::default(),
        assertions: Vec::new(),
    };
    for d in &file.decls {
        ws.declare(d)?;
    }
    ws.file = file;
    Ok(ws)
}

fn err<T>(loc: Loc, message: impl Into<String>) -> DResult<T> {
    Err(Diagnostic::new(loc, message))
}

fn core<T>(loc: Loc, r: catv_core::Result<T>) -> DResult<T> {
    r.map_err(|e| Diagnostic::new(loc, e.to_string()))
}

pub fn number(n: &Name) -> DResult<usize> {
    n.text
        .parse()
        .map_err(|_| Diagnostic::new(n.loc, format!("expected a number, found '{}'", n.text)))
}

/// Resolve an object reference; tuples address product categories
/// coordinatewise.
pub fn resolve_object(c: &FinCategory, r: &Ref, what: &str) -> DResult<Obj> {
    if let (Ref::Tuple(parts, loc), Some(factors)) = (r, c.factors()) {
        if parts.len() != factors.len() {
            return err(
                *loc,
                format!(
                    "expected {} coordinates, found {}",
                    factors.len(),
                    parts.len()
                ),
            );
        }
        let comps = parts
            .iter()
            .zip(factors)
            .map(|(p, f)| resolve_object(f, p, what))
            .collect::<DResult<Vec<_>>>()?;
        return Ok(c.tuple_object(&comps));
    }
    c.find_object(&r.label()).ok_or_else(|| {
        Diagnostic::new(r.loc(), format!("unknown object '{}' in {what}", r.label()))
    })
}

pub fn resolve_morphism(c: &FinCategory, r: &Ref, what: &str) -> DResult<Mor> {
    if let (Ref::Tuple(parts, loc), Some(factors)) = (r, c.factors()) {
        if parts.len() != factors.len() {
            return err(
                *loc,
                format!(
                    "expected {} coordinates, found {}",
                    factors.len(),
                    parts.len()
                ),
            );
        }
        let comps = parts
            .iter()
            .zip(factors)
            .map(|(p, f)| resolve_morphism(f, p, what))
            .collect::<DResult<Vec<_>>>()?;
        return Ok(c.tuple_morphism(&comps));
    }
    c.find_morphism(&r.label()).ok_or_else(|| {
        Diagnostic::new(
            r.loc(),
            format!("unknown morphism '{}' in {what}", r.label()),
        )
    })
}

fn atom(n: &Name) -> Ref {
    Ref::Atom(n.clone())
}

/// Fill in images of unlisted morphisms by composing listed ones (and
/// identities). `compose(g, f)` returns the image of `g . f` from the images
/// of `g` and `f`. Fails on two conflicting images or a morphism that is not
/// reached.
fn close_under_composition<A: Clone + PartialEq>(
    c: &FinCategory,
    values: &mut [Option<A>],
    relevant: impl Fn(Mor) -> bool,
    compose: impl Fn(&A, &A) -> Option<A>,
) -> Result<(), String> {
    loop {
        let mut changed = false;
        for (g, f) in c.composable_pairs() {
            if !relevant(g) || !relevant(f) {
                continue;
            }
            let (Some(a), Some(b)) = (&values[g], &values[f]) else {
                continue;
            };
            let gf = c.compose(g, f).expect("composable");
            let Some(image) = compose(a, b) else {
                return Err(format!(
                    "images of {} and {} do not compose",
                    c.morphism_label(g),
                    c.morphism_label(f)
                ));
            };
            match &values[gf] {
                Some(existing) if *existing != image => {
                    return Err(format!(
                        "{} . {} = {} but the images disagree",
                        c.morphism_label(g),
                        c.morphism_label(f),
                        c.morphism_label(gf)
                    ))
                }
                Some(_) => {}
                None => {
                    values[gf] = Some(image);
                    changed = true;
                }
            }
        }
        if !changed {
            return Ok(());
        }
    }
}

/// A functor of variance from values on some morphisms: either all values
/// are given, or the values on `E` and `M` are determined by the listed ones
/// and the rest is assembled.
fn build_mixed<T: Codomain>(
    v: &Arc<VarianceStruct>,
    target: Arc<T>,
    obj_map: Vec<usize>,
    mut given: Vec<Option<Arrow<T>>>,
) -> Result<MixedFunctor<T>, String>
where
    Arrow<T>: PartialEq,
{
    let c = v.owner().clone();
    for x in 0..c.object_count() {
        given[c.identity(x)].get_or_insert_with(|| target.identity_arrow(obj_map[x]));
    }
    if given.iter().all(Option::is_some) {
        let mor_map = given.into_iter().map(|a| a.expect("all given")).collect();
        return MixedFunctor::new(v.clone(), target, obj_map, mor_map).map_err(|e| e.to_string());
    }
    let mut g: Vec<Option<Arrow<T>>> = (0..c.morphism_count())
        .map(|f| {
            if v.is_covariant(f) {
                given[f].clone()
            } else {
                None
            }
        })
        .collect();
    let t = target.clone();
    close_under_composition(
        &c,
        &mut g,
        |f| v.is_covariant(f),
        |a, b| t.compose_arrows(a, b),
    )?;
    let mut h: Vec<Option<Arrow<T>>> = (0..c.morphism_count())
        .map(|f| {
            if v.is_contravariant(f) {
                given[f].clone()
            } else {
                None
            }
        })
        .collect();
    close_under_composition(
        &c,
        &mut h,
        |f| v.is_contravariant(f),
        |a, b| t.compose_arrows(b, a),
    )?;
    for f in 0..c.morphism_count() {
        if (v.is_covariant(f) && g[f].is_none()) || (v.is_contravariant(f) && h[f].is_none()) {
            return Err(format!(
                "no value for {} and it is not a composite of listed ones",
                c.morphism_label(f)
            ));
        }
    }
    let pair = CompatiblePair::new(v.clone(), target, obj_map.clone(), obj_map, g, h)
        .map_err(|e| e.to_string())?;
    let f = assemble_mixed(&pair).map_err(|e| e.to_string())?;
    for (m, a) in given.iter().enumerate() {
        if let Some(a) = a {
            if f.arrow(m) != *a {
                return Err(format!(
                    "value of {} disagrees with the assembled one",
                    c.morphism_label(m)
                ));
            }
        }
    }
    Ok(f)
}

impl Workspace {
    pub fn category(&self, n: &Name) -> DResult<&Arc<FinCategory>> {
        self.categories
            .get(&n.text)
            .ok_or_else(|| Diagnostic::new(n.loc, format!("unknown category '{}'", n.text)))
    }

    pub fn variance(&self, n: &Name) -> DResult<&Arc<VarianceStruct>> {
        self.variances
            .get(&n.text)
            .ok_or_else(|| Diagnostic::new(n.loc, format!("unknown variance '{}'", n.text)))
    }

    pub fn functor(&self, n: &Name) -> DResult<&FunctorValue> {
        self.functors
            .get(&n.text)
            .ok_or_else(|| Diagnostic::new(n.loc, format!("unknown functor '{}'", n.text)))
    }

    pub fn set_functor(&self, n: &Name) -> DResult<&SetFunctorValue> {
        match self.functor(n)? {
            FunctorValue::Set(s) => Ok(s),
            _ => err(n.loc, format!("'{}' is not a set-valued functor", n.text)),
        }
    }

    pub fn plain(&self, n: &Name) -> DResult<&PlainFunctor> {
        match self.functor(n)? {
            FunctorValue::Plain(p) => Ok(p),
            _ => err(n.loc, format!("'{}' is not a plain functor", n.text)),
        }
    }

    pub fn span(&self, n: &Name) -> DResult<&SpanValue> {
        self.spans
            .get(&n.text)
            .ok_or_else(|| Diagnostic::new(n.loc, format!("unknown span '{}'", n.text)))
    }

    /// A functor `L: R -> A` for ends: a plain functor, or the first leg of a
    /// span. Also returns the partition generators when available.
    pub fn leg(&self, n: &Name) -> DResult<(PlainFunctor, Option<&PartitionSpan>)> {
        if let Some(s) = self.spans.get(&n.text) {
            return Ok((s.span.left().clone(), s.partition.as_ref()));
        }
        match self.functors.get(&n.text) {
            Some(FunctorValue::Plain(p)) => Ok((p.clone(), None)),
            _ => err(
                n.loc,
                format!("'{}' is neither a span nor a plain functor", n.text),
            ),
        }
    }

    pub fn partition(&self, n: &Name) -> DResult<&PartitionOfArguments> {
        self.partitions
            .get(&n.text)
            .ok_or_else(|| Diagnostic::new(n.loc, format!("unknown partition '{}'", n.text)))
    }

    pub fn transformation(&self, n: &Name) -> DResult<&TransformationValue> {
        self.transformations
            .get(&n.text)
            .ok_or_else(|| Diagnostic::new(n.loc, format!("unknown transformation '{}'", n.text)))
    }

    fn declare(&mut self, d: &Decl) -> DResult<()> {
        match d {
            Decl::Category { name, def } => {
                let c = match def {
                    CategoryDef::Call(call) => self.category_call(call)?,
                    CategoryDef::Explicit {
                        objects,
                        morphisms,
                        composites,
                    } => explicit_category(name, objects, morphisms, composites)?,
                };
                self.categories.insert("category", name, Arc::new(c))
            }
            Decl::Group {
                name,
                elements,
                rows,
            } => {
                let c = group_table(name, elements, rows)?;
                self.categories.insert("category", name, Arc::new(c))
            }
            Decl::Variance { name, def } => {
                let v = match def {
                    VarianceDef::Call(call) => self.variance_call(call)?,
                    VarianceDef::Explicit { on, e, m } => {
                        let c = self.category(on)?.clone();
                        let gens = |list: &[Name], which: &str| -> DResult<WideSubcategory> {
                            let ms = list
                                .iter()
                                .map(|n| resolve_morphism(&c, &atom(n), &on.text))
                                .collect::<DResult<Vec<_>>>()?;
                            WideSubcategory::generated(c.clone(), &ms)
                                .map_err(|e| Diagnostic::new(name.loc, format!("{which}: {e}")))
                        };
                        let (es, ms) = (gens(e, "E")?, gens(m, "M")?);
                        build_variance(es, ms).map_err(|e| {
                            Diagnostic::new(
                                name.loc,
                                format!("{} is not a variance: {e}", name.text),
                            )
                        })?
                    }
                };
                self.variances.insert("variance", name, Arc::new(v))
            }
            Decl::Functor { name, set, def } => {
                let f = match (def, set) {
                    (FunctorDef::Call(call), true) => {
                        FunctorValue::Set(self.set_functor_call(call)?)
                    }
                    (FunctorDef::Call(call), false) => FunctorValue::Plain(self.plain_call(call)?),
                    (
                        FunctorDef::Explicit {
                            source,
                            target,
                            variance,
                            items,
                        },
                        true,
                    ) => {
                        if target.text != "Set" {
                            return err(target.loc, "a setfunctor must have target Set");
                        }
                        FunctorValue::Set(self.explicit_set_functor(
                            name,
                            source,
                            variance.as_ref(),
                            items,
                        )?)
                    }
                    (
                        FunctorDef::Explicit {
                            source,
                            target,
                            variance: None,
                            items,
                        },
                        false,
                    ) => {
                        let s = self.category(source)?.clone();
                        let t = self.category(target)?.clone();
                        FunctorValue::Plain(explicit_plain(name, &s, &t, items)?)
                    }
                    (
                        FunctorDef::Explicit {
                            source,
                            target,
                            variance: Some(v),
                            items,
                        },
                        false,
                    ) => FunctorValue::Mixed(self.explicit_mixed(name, source, target, v, items)?),
                };
                self.functors.insert("functor", name, f)
            }
            Decl::Span { name, def } => {
                let span = match def {
                    SpanDef::Call(call) => self.span_call(call)?,
                    SpanDef::Explicit { apex, a, b, items } => {
                        let r = self.category(apex)?.clone();
                        let (ca, cb) = (self.category(a)?.clone(), self.category(b)?.clone());
                        let mut left = Vec::new();
                        let mut right = Vec::new();
                        for it in items {
                            match &it.value {
                                Value::Ref(Ref::Tuple(p, _)) if p.len() == 2 => {
                                    let mk = |v: &Ref| Item {
                                        kind: it.kind,
                                        key: it.key.clone(),
                                        value: Value::Ref(v.clone()),
                                    };
                                    left.push(mk(&p[0]));
                                    right.push(mk(&p[1]));
                                }
                                other => return err(other.loc(), "expected a pair (left, right)"),
                            }
                        }
                        let l1 = explicit_plain(name, &r, &ca, &left)?;
                        let l2 = explicit_plain(name, &r, &cb, &right)?;
                        core(name.loc, Span::new(l1, l2))?
                    }
                };
                self.spans.insert(
                    "span",
                    name,
                    SpanValue {
                        span,
                        partition: None,
                    },
                )
            }
            Decl::Partition {
                name,
                domain,
                codomain,
                def,
            } => {
                let cats = |list: &[Name]| {
                    list.iter()
                        .map(|n| self.category(n).cloned())
                        .collect::<DResult<Vec<_>>>()
                };
                let (dom, cod) = (cats(domain)?, cats(codomain)?);
                let p = match def {
                    PartitionDef::Classes(classes) => {
                        let classes = classes
                            .iter()
                            .map(|c| c.iter().map(number).collect::<DResult<Vec<_>>>())
                            .collect::<DResult<Vec<_>>>()?;
                        core(
                            name.loc,
                            PartitionOfArguments::new(dom, cod, Classes(classes)),
                        )?
                    }
                    PartitionDef::Expr(e) => {
                        let pattern = derive_partition(&e.text).map_err(|x| match x {
                            catv_core::Error::Parse { column, message } => Diagnostic::new(
                                Loc {
                                    line: e.loc.line,
                                    col: e.loc.col + column,
                                },
                                message,
                            ),
                            other => Diagnostic::new(e.loc, other.to_string()),
                        })?;
                        core(e.loc, pattern.bind(&dom, &cod))?
                    }
                };
                let ps = core(name.loc, build_span_from_partition(&p, self.cap))?;
                self.spans.insert(
                    "span",
                    name,
                    SpanValue {
                        span: ps.span.clone(),
                        partition: Some(ps),
                    },
                )?;
                self.partitions.insert("partition", name, p)
            }
            Decl::Transformation {
                name,
                f,
                g,
                span,
                items,
            } => {
                let t = self.explicit_transformation(f, g, span, items)?;
                self.transformations.insert("transformation", name, t)
            }
            Decl::Use(n) => match n.text.as_str() {
                "ev" => self.use_ev(n),
                other => err(n.loc, format!("unknown example '{other}' (available: ev)")),
            },
            Decl::Assert { loc, assertion } => {
                self.check_refs(assertion)?;
                self.assertions.push((*loc, assertion.clone()));
                Ok(())
            }
        }
    }

    fn check_refs(&self, a: &Assertion) -> DResult<()> {
        match a {
            Assertion::Natural { t, .. } | Assertion::Mutants { t } => {
                self.transformation(t).map(|_| ())
            }
            Assertion::End { f, span, size, .. } => {
                self.set_functor(f)?;
                self.leg(span)?;
                number(size).map(|_| ())
            }
            Assertion::Fubini { f, s1, s2, size } => {
                self.set_functor(f)?;
                self.leg(s1)?;
                self.leg(s2)?;
                number(size).map(|_| ())
            }
            Assertion::Extranatural {
                p,
                domain,
                codomain,
                ..
            } => {
                let p = self.partition(p)?;
                let (n, m) = (p.domain().len(), p.codomain().len());
                if domain.len() != n || codomain.len() != m {
                    return err(a_loc(domain, codomain), format!("expected {n} ; {m} flags"));
                }
                for f in domain.iter().chain(codomain) {
                    flag(f)?;
                }
                Ok(())
            }
            Assertion::Classes { p, classes } => {
                self.partition(p)?;
                for c in classes {
                    for n in c {
                        number(n)?;
                    }
                }
                Ok(())
            }
            Assertion::Variances { c, count } => {
                self.category(c)?;
                number(count).map(|_| ())
            }
            Assertion::Sections { f, g, span, count } => {
                self.functor(f)?;
                self.functor(g)?;
                self.span(span)?;
                number(count).map(|_| ())
            }
        }
    }

    fn args<'c>(call: &'c Call, shape: &[usize]) -> DResult<Vec<&'c [Name]>> {
        let ok = call.groups.len() == shape.len()
            && call
                .groups
                .iter()
                .zip(shape)
                .all(|(g, &n)| n == usize::MAX && !g.is_empty() || g.len() == n);
        if !ok {
            let want: Vec<String> = shape
                .iter()
                .map(|&n| {
                    if n == usize::MAX {
                        "1 or more".into()
                    } else {
                        n.to_string()
                    }
                })
                .collect();
            return err(
                call.func.loc,
                format!(
                    "wrong arguments for {}: expected groups of sizes [{}]",
                    call.func.text,
                    want.join("; ")
                ),
            );
        }
        Ok(call.groups.iter().map(|g| g.as_slice()).collect())
    }

    fn category_call(&self, call: &Call) -> DResult<FinCategory> {
        const MANY: usize = usize::MAX;
        let small = |n: &Name, limit: usize| -> DResult<usize> {
            let k = number(n)?;
            if k == 0 || k > limit {
                return err(n.loc, format!("expected a number in 1..={limit}"));
            }
            Ok(k)
        };
        Ok(match call.func.text.as_str() {
            "symmetric" => symmetric(small(&Self::args(call, &[1])?[0][0], 5)?),
            "cyclic" => cyclic(small(&Self::args(call, &[1])?[0][0], 1000)?),
            "chain" => chain(small(&Self::args(call, &[1])?[0][0], 100)?),
            "arrow" => {
                if !(call.groups.is_empty() || call.groups == vec![Vec::<Name>::new()]) {
                    return err(call.func.loc, "arrow takes no arguments");
                }
                walking_arrow()
            }
            "finset" => {
                let sk = FinSetSkeleton::new(small(&Self::args(call, &[1])?[0][0], 3)?);
                (*sk.category).clone()
            }
            "product" => {
                let cats = Self::args(call, &[MANY])?[0]
                    .iter()
                    .map(|n| self.category(n).cloned())
                    .collect::<DResult<Vec<_>>>()?;
                core(call.func.loc, product_category(&cats, self.cap))?
            }
            "opposite" => opposite(self.category(&Self::args(call, &[1])?[0][0])?),
            "union" => {
                let cats = Self::args(call, &[MANY])?[0]
                    .iter()
                    .map(|n| self.category(n).cloned())
                    .collect::<DResult<Vec<_>>>()?;
                disjoint_union(&cats.iter().map(|c| c.as_ref()).collect::<Vec<_>>())
            }
            other => {
                return err(
                    call.func.loc,
                    format!("unknown category constructor '{other}'"),
                )
            }
        })
    }

    fn variance_call(&self, call: &Call) -> DResult<VarianceStruct> {
        const MANY: usize = usize::MAX;
        let loc = call.func.loc;
        Ok(match call.func.text.as_str() {
            "covariant" => covariant_variance(self.category(&Self::args(call, &[1])?[0][0])?),
            "contravariant" => {
                contravariant_variance(self.category(&Self::args(call, &[1])?[0][0])?)
            }
            "index" => {
                let a = Self::args(call, &[MANY, MANY])?;
                let cats = a[0]
                    .iter()
                    .map(|n| self.category(n).cloned())
                    .collect::<DResult<Vec<_>>>()?;
                let flags = a[1].iter().map(flag).collect::<DResult<Vec<_>>>()?;
                if flags.len() != cats.len() {
                    return err(loc, "one flag per factor");
                }
                core(loc, index_variance(&cats, &flags, self.cap))?
            }
            "product" => {
                let vs = Self::args(call, &[MANY])?[0]
                    .iter()
                    .map(|n| self.variance(n).cloned())
                    .collect::<DResult<Vec<_>>>()?;
                core(loc, product_variance(&vs, self.cap))?
            }
            "path" => {
                let a = Self::args(call, &[1, MANY])?;
                let c = self.category(&a[0][0])?.clone();
                let j = a[1]
                    .iter()
                    .map(|n| resolve_object(&c, &atom(n), &a[0][0].text))
                    .collect::<DResult<Vec<_>>>()?;
                core(loc, path_component_variance(&c, &j))?
            }
            other => return err(loc, format!("unknown variance constructor '{other}'")),
        })
    }

    fn set_functor_call(&self, call: &Call) -> DResult<SetFunctorValue> {
        let loc = call.func.loc;
        Ok(match call.func.text.as_str() {
            "hom" => {
                let c = self.category(&Self::args(call, &[1])?[0][0])?.clone();
                let hom = core(loc, hom_functor(&c, self.cap))?;
                let p = hom.source().clone();
                let labels = (0..p.object_count())
                    .map(|xy| {
                        let s = p.split_object(xy);
                        c.hom(s[0], s[1])
                            .iter()
                            .map(|&m| c.morphism_label(m))
                            .collect()
                    })
                    .collect();
                SetFunctorValue {
                    functor: SetFun::Stored(hom),
                    labels: Some(labels),
                }
            }
            "constant" => {
                let a = Self::args(call, &[1, 1])?;
                let v = self.variance(&a[0][0])?.clone();
                SetFunctorValue {
                    functor: SetFun::Stored(constant_set_functor(v, number(&a[1][0])?)),
                    labels: None,
                }
            }
            "product" => {
                let a = Self::args(call, &[2])?;
                let (f, g) = (self.set_functor(&a[0][0])?, self.set_functor(&a[0][1])?);
                let prod = core(loc, external_product(&f.functor, &g.functor, self.cap))?;
                let labels = match (&f.labels, &g.labels) {
                    (Some(_), Some(_)) => {
                        let p = prod.source().clone();
                        Some(
                            (0..p.object_count())
                                .map(|xy| {
                                    let s = p.split_object(xy);
                                    let (n1, n2) = (f.functor.object(s[0]), g.functor.object(s[1]));
                                    (0..n1 * n2)
                                        .map(|k| {
                                            format!(
                                                "({},{})",
                                                f.element(s[0], k / n2),
                                                g.element(s[1], k % n2)
                                            )
                                        })
                                        .collect()
                                })
                                .collect(),
                        )
                    }
                    _ => None,
                };
                SetFunctorValue {
                    functor: SetFun::Stored(prod),
                    labels,
                }
            }
            "times" => {
                let a = Self::args(call, &[1, 1])?;
                let f = self.set_functor(&a[0][0])?;
                let k = number(&a[1][0])?;
                if k == 0 {
                    return err(a[1][0].loc, "expected a positive number");
                }
                SetFunctorValue {
                    functor: SetFun::Stored(catv_core::fixtures::random::times_constant(
                        &f.functor, k,
                    )),
                    labels: f.labels.as_ref().map(|l| {
                        l.iter()
                            .map(|xs| {
                                xs.iter()
                                    .flat_map(|x| (0..k).map(move |j| format!("{x}.{j}")))
                                    .collect()
                            })
                            .collect()
                    }),
                }
            }
            other => return err(loc, format!("unknown set functor constructor '{other}'")),
        })
    }

    fn plain_call(&self, call: &Call) -> DResult<PlainFunctor> {
        let loc = call.func.loc;
        Ok(match call.func.text.as_str() {
            "identity" => {
                PlainFunctor::identity(self.category(&Self::args(call, &[1])?[0][0])?.clone())
            }
            "diagonal" => {
                let a = Self::args(call, &[1, 1])?;
                let c = self.category(&a[0][0])?.clone();
                core(loc, PlainFunctor::diagonal(&c, number(&a[1][0])?, self.cap))?
            }
            other => return err(loc, format!("unknown functor constructor '{other}'")),
        })
    }

    fn span_call(&self, call: &Call) -> DResult<Span> {
        let loc = call.func.loc;
        match call.func.text.as_str() {
            "diagonal" => Ok(Span::diagonal(
                self.category(&Self::args(call, &[1])?[0][0])?,
            )),
            "legs" => {
                let a = Self::args(call, &[2])?;
                let (l1, l2) = (self.plain(&a[0][0])?.clone(), self.plain(&a[0][1])?.clone());
                core(loc, Span::new(l1, l2))
            }
            other => err(loc, format!("unknown span constructor '{other}'")),
        }
    }

    fn explicit_set_functor(
        &self,
        name: &Name,
        source: &Name,
        variance: Option<&Name>,
        items: &[Item],
    ) -> DResult<SetFunctorValue> {
        let c = self.category(source)?.clone();
        let v = match variance {
            Some(vn) => {
                let v = self.variance(vn)?.clone();
                if **v.owner() != *c {
                    return err(
                        vn.loc,
                        format!("variance '{}' is not on {}", vn.text, source.text),
                    );
                }
                v
            }
            None => Arc::new(covariant_variance(&c)),
        };
        let mut sizes: Vec<Option<usize>> = vec![None; c.object_count()];
        for it in items.iter().filter(|i| i.kind == crate::dsl::ItemKind::Obj) {
            let x = resolve_object(&c, &it.key, &source.text)?;
            let n = match &it.value {
                Value::Ref(Ref::Atom(n)) => number(n)?,
                other => return err(other.loc(), "expected a set size"),
            };
            if sizes[x].replace(n).is_some() {
                return err(
                    it.key.loc(),
                    format!("object '{}' listed twice", it.key.label()),
                );
            }
        }
        let obj_map = sizes
            .iter()
            .enumerate()
            .map(|(x, s)| {
                s.ok_or_else(|| {
                    Diagnostic::new(
                        name.loc,
                        format!("no size for object '{}'", c.object_label(x)),
                    )
                })
            })
            .collect::<DResult<Vec<_>>>()?;
        let mut given: Vec<Option<Function>> = vec![None; c.morphism_count()];
        for it in items.iter().filter(|i| i.kind == crate::dsl::ItemKind::Mor) {
            let m = resolve_morphism(&c, &it.key, &source.text)?;
            let fac = v.fac(m);
            let (dom, cod) = (obj_map[fac.start_obj], obj_map[fac.term_obj]);
            let a = match &it.value {
                Value::Array(vals, loc) => {
                    if vals.len() != dom {
                        return err(*loc, format!("expected {dom} values, found {}", vals.len()));
                    }
                    Function::new(cod, vals.clone())
                        .map_err(|_| Diagnostic::new(*loc, format!("values must be below {cod}")))?
                }
                other => return err(other.loc(), "expected an index array"),
            };
            if given[m].replace(a).is_some() {
                return err(
                    it.key.loc(),
                    format!("morphism '{}' listed twice", it.key.label()),
                );
            }
        }
        let f = build_mixed(&v, Arc::new(FinSet), obj_map, given).map_err(|e| {
            Diagnostic::new(name.loc, format!("{} is not a functor: {e}", name.text))
        })?;
        Ok(SetFunctorValue {
            functor: SetFun::Stored(f),
            labels: None,
        })
    }

    fn explicit_mixed(
        &self,
        name: &Name,
        source: &Name,
        target: &Name,
        vn: &Name,
        items: &[Item],
    ) -> DResult<MixedFunctor<FinCategory>> {
        let c = self.category(source)?.clone();
        let d = self.category(target)?.clone();
        let v = self.variance(vn)?.clone();
        if **v.owner() != *c {
            return err(
                vn.loc,
                format!("variance '{}' is not on {}", vn.text, source.text),
            );
        }
        let (obj_map, given) = images(name, &c, &d, items)?;
        build_mixed(&v, d, obj_map, given)
            .map_err(|e| Diagnostic::new(name.loc, format!("{} is not a functor: {e}", name.text)))
    }

    fn explicit_transformation(
        &self,
        f: &Name,
        g: &Name,
        span: &Name,
        items: &[Item],
    ) -> DResult<TransformationValue> {
        let s = self.span(span)?;
        let r = s.span.apex().clone();
        let (fv, gv) = (self.functor(f)?, self.functor(g)?);
        if fv.source() != s.span.left().target() {
            return err(
                f.loc,
                format!(
                    "'{}' is not defined on the left leg of '{}'",
                    f.text, span.text
                ),
            );
        }
        if gv.source() != s.span.right().target() {
            return err(
                g.loc,
                format!(
                    "'{}' is not defined on the right leg of '{}'",
                    g.text, span.text
                ),
            );
        }
        let mut values: Vec<Option<&Value>> = vec![None; r.object_count()];
        for it in items {
            let x = resolve_object(&r, &it.key, &span.text)?;
            if values[x].replace(&it.value).is_some() {
                return err(
                    it.key.loc(),
                    format!("component '{}' listed twice", it.key.label()),
                );
            }
        }
        let missing = values.iter().position(Option::is_none);
        if let Some(x) = missing {
            return err(span.loc, format!("no component at '{}'", r.object_label(x)));
        }
        let (l1, l2) = (s.span.left(), s.span.right());
        let components = match (fv, gv) {
            (FunctorValue::Set(a), FunctorValue::Set(b)) => Components::Set(
                values
                    .iter()
                    .enumerate()
                    .map(|(x, v)| {
                        let (dom, cod) = (
                            a.functor.object(l1.object(x)),
                            b.functor.object(l2.object(x)),
                        );
                        match v.expect("checked") {
                            Value::Array(vals, loc) if vals.len() == dom => {
                                Function::new(cod, vals.clone()).map_err(|_| {
                                    Diagnostic::new(*loc, format!("values must be below {cod}"))
                                })
                            }
                            Value::Array(vals, loc) => {
                                err(*loc, format!("expected {dom} values, found {}", vals.len()))
                            }
                            other => err(other.loc(), "expected an index array"),
                        }
                    })
                    .collect::<DResult<_>>()?,
            ),
            (FunctorValue::Mixed(a), FunctorValue::Mixed(b)) if a.target() == b.target() => {
                let d = a.target();
                Components::Cat(
                    values
                        .iter()
                        .enumerate()
                        .map(|(x, v)| {
                            let m = match v.expect("checked") {
                                Value::Ref(r) => resolve_morphism(d, r, "the target category")?,
                                other => return err(other.loc(), "expected a morphism"),
                            };
                            if d.dom(m) != a.object(l1.object(x))
                                || d.cod(m) != b.object(l2.object(x))
                            {
                                return err(
                                    v.expect("checked").loc(),
                                    "component has the wrong domain or codomain",
                                );
                            }
                            Ok(m)
                        })
                        .collect::<DResult<_>>()?,
                )
            }
            _ => {
                return err(
                    f.loc,
                    "both functors must be set-valued or share a target category",
                )
            }
        };
        Ok(TransformationValue {
            f: f.text.clone(),
            g: g.text.clone(),
            span: span.text.clone(),
            components,
        })
    }

    fn use_ev(&mut self, n: &Name) -> DResult<()> {
        let ex = core(n.loc, ev_example(self.cap))?;
        let name = |s: &str| Name {
            text: s.into(),
            loc: n.loc,
        };
        self.categories
            .insert("category", &name("FinSet3"), ex.skeleton.category.clone())?;
        self.functors.insert(
            "functor",
            &name("Exp"),
            FunctorValue::Set(SetFunctorValue {
                functor: SetFun::Computed(ex.f.clone()),
                labels: None,
            }),
        )?;
        self.functors.insert(
            "functor",
            &name("Incl"),
            FunctorValue::Set(SetFunctorValue {
                functor: SetFun::Stored(ex.g.clone()),
                labels: None,
            }),
        )?;
        self.spans.insert(
            "span",
            &name("EvSpan"),
            SpanValue {
                span: ex.partition.span.clone(),
                partition: Some(ex.partition.clone()),
            },
        )?;
        self.partitions
            .insert("partition", &name("EvSpan"), ex.partition.partition.clone())?;
        self.transformations.insert(
            "transformation",
            &name("ev"),
            TransformationValue {
                f: "Exp".into(),
                g: "Incl".into(),
                span: "EvSpan".into(),
                components: Components::Set(ex.eta.clone()),
            },
        )
    }
}

pub fn flag(n: &Name) -> DResult<u8> {
    match n.text.as_str() {
        "0" => Ok(0),
        "1" => Ok(1),
        _ => err(n.loc, "flags are 0 (covariant) or 1 (contravariant)"),
    }
}

fn a_loc(domain: &[Name], codomain: &[Name]) -> Loc {
    domain
        .first()
        .or(codomain.first())
        .map(|n| n.loc)
        .unwrap_or_default()
}

/// Object and morphism images of an explicit functor into a category.
fn images(
    name: &Name,
    c: &FinCategory,
    d: &FinCategory,
    items: &[Item],
) -> DResult<(Vec<Obj>, Vec<Option<Mor>>)> {
    let mut objs: Vec<Option<Obj>> = vec![None; c.object_count()];
    let mut mors: Vec<Option<Mor>> = vec![None; c.morphism_count()];
    for it in items {
        let Value::Ref(v) = &it.value else {
            return err(it.value.loc(), "expected an object or morphism");
        };
        let slot = match it.kind {
            crate::dsl::ItemKind::Obj => {
                let x = resolve_object(c, &it.key, "the source")?;
                objs[x].replace(resolve_object(d, v, "the target")?)
            }
            _ => {
                let m = resolve_morphism(c, &it.key, "the source")?;
                mors[m].replace(resolve_morphism(d, v, "the target")?)
            }
        };
        if slot.is_some() {
            return err(it.key.loc(), format!("'{}' listed twice", it.key.label()));
        }
    }
    let obj_map = objs
        .iter()
        .enumerate()
        .map(|(x, o)| {
            o.ok_or_else(|| {
                Diagnostic::new(
                    name.loc,
                    format!("no image for object '{}'", c.object_label(x)),
                )
            })
        })
        .collect::<DResult<Vec<_>>>()?;
    Ok((obj_map, mors))
}

fn explicit_plain(
    name: &Name,
    c: &Arc<FinCategory>,
    d: &Arc<FinCategory>,
    items: &[Item],
) -> DResult<PlainFunctor> {
    let (obj_map, mut mors) = images(name, c, d, items)?;
    for x in 0..c.object_count() {
        mors[c.identity(x)].get_or_insert(d.identity(obj_map[x]));
    }
    close_under_composition(c, &mut mors, |_| true, |g, f| d.compose(*g, *f))
        .map_err(|e| Diagnostic::new(name.loc, format!("{} is not a functor: {e}", name.text)))?;
    let mor_map = mors
        .iter()
        .enumerate()
        .map(|(m, v)| {
            v.ok_or_else(|| {
                Diagnostic::new(
                    name.loc,
                    format!("no image for morphism '{}'", c.morphism_label(m)),
                )
            })
        })
        .collect::<DResult<Vec<_>>>()?;
    PlainFunctor::new(c.clone(), d.clone(), obj_map, mor_map)
        .map_err(|e| Diagnostic::new(name.loc, format!("{} is not a functor: {e}", name.text)))
}

fn explicit_category(
    name: &Name,
    objects: &[Name],
    morphisms: &[(Name, Name, Name)],
    composites: &[(Name, Name, Name)],
) -> DResult<FinCategory> {
    let mut b = CategoryBuilder::new();
    for o in objects {
        if b.find_object(&o.text).is_some() {
            return err(o.loc, format!("duplicate object '{}'", o.text));
        }
        b.object(&o.text);
    }
    let obj = |b: &CategoryBuilder, n: &Name| {
        b.find_object(&n.text)
            .ok_or_else(|| Diagnostic::new(n.loc, format!("unknown object '{}'", n.text)))
    };
    for (m, d, c) in morphisms {
        if b.find_morphism(&m.text).is_some() {
            return err(m.loc, format!("duplicate morphism '{}'", m.text));
        }
        let (d, c) = (obj(&b, d)?, obj(&b, c)?);
        b.morphism(&m.text, d, c);
    }
    let mor = |b: &CategoryBuilder, n: &Name| {
        b.find_morphism(&n.text)
            .ok_or_else(|| Diagnostic::new(n.loc, format!("unknown morphism '{}'", n.text)))
    };
    for (g, f, h) in composites {
        let (gi, fi, hi) = (mor(&b, g)?, mor(&b, f)?, mor(&b, h)?);
        b.compose(gi, fi, hi);
    }
    let raw = b.into_raw();
    let report = core(name.loc, catv_core::fincat::validate_category(&raw))?;
    if !report.is_valid() {
        let label = |m: Mor| raw.morphisms[m].label.clone();
        let pairs: Vec<String> = report
            .pairs()
            .iter()
            .map(|&(g, f)| format!("{} . {}", label(g), label(f)))
            .collect();
        let detail = if pairs.is_empty() {
            report.to_string()
        } else {
            format!("check the composites {}", pairs.join(", "))
        };
        return err(
            name.loc,
            format!("{} is not a category: {detail}", name.text),
        );
    }
    core(name.loc, FinCategory::from_raw(&raw))
}

fn group_table(name: &Name, elements: &[Name], rows: &[(Name, Vec<Name>)]) -> DResult<FinCategory> {
    let labels: Vec<String> = elements.iter().map(|e| e.text.clone()).collect();
    let find = |n: &Name| {
        labels
            .iter()
            .position(|l| *l == n.text)
            .ok_or_else(|| Diagnostic::new(n.loc, format!("unknown element '{}'", n.text)))
    };
    let mut table = vec![None; labels.len()];
    for (g, row) in rows {
        let i = find(g)?;
        if row.len() != labels.len() {
            return err(
                g.loc,
                format!("row has {} entries, expected {}", row.len(), labels.len()),
            );
        }
        let values = row.iter().map(find).collect::<DResult<Vec<_>>>()?;
        if table[i].replace(values).is_some() {
            return err(g.loc, format!("row '{}' listed twice", g.text));
        }
    }
    let table = table
        .into_iter()
        .enumerate()
        .map(|(i, r)| {
            r.ok_or_else(|| Diagnostic::new(name.loc, format!("missing row '{}'", labels[i])))
        })
        .collect::<DResult<Vec<_>>>()?;
    core(name.loc, FinCategory::from_monoid_table(&labels, &table))
}
