use std::borrow::Cow;
use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::Cap;

use super::raw::{validate_category, RawCategory};

pub type Obj = usize;
pub type Mor = usize;

/// A finite category with dense integer indices.
///
/// Objects are `0..object_count()` and morphisms `0..morphism_count()`.
/// Explicit categories carry a composition table; products compose
/// componentwise on demand, which keeps large products usable as functor
/// domains without materializing their composable pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinCategory {
    n_objects: usize,
    dom: Vec<Obj>,
    cod: Vec<Obj>,
    identity: Vec<Mor>,
    shape: Shape,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Shape {
    Explicit(Explicit),
    Product(Product),
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Explicit {
    obj_labels: Vec<String>,
    mor_labels: Vec<String>,
    /// `outgoing[x]`: morphisms with domain `x`, ascending.
    outgoing: Vec<Vec<Mor>>,
    /// position of each morphism inside `outgoing[dom]`
    out_pos: Vec<usize>,
    /// position of each morphism inside `hom(dom, cod)`
    hom_pos: Vec<usize>,
    /// row of `f` starts at `offsets[f]`; column is `out_pos[g]` for `g` with `dom g = cod f`
    offsets: Vec<usize>,
    table: Vec<Mor>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Product {
    factors: Vec<Arc<FinCategory>>,
    obj_stride: Vec<usize>,
    mor_stride: Vec<usize>,
}

fn strides(sizes: impl DoubleEndedIterator<Item = usize> + ExactSizeIterator) -> Vec<usize> {
    let mut out = vec![0; sizes.len()];
    let mut acc = 1usize;
    for (i, n) in sizes.enumerate().rev() {
        out[i] = acc;
        acc *= n;
    }
    out
}

impl FinCategory {
    pub(crate) fn from_validated(raw: &RawCategory) -> FinCategory {
        let n_objects = raw.object_labels.len();
        let n = raw.morphisms.len();
        let dom: Vec<Obj> = raw.morphisms.iter().map(|m| m.dom).collect();
        let cod: Vec<Obj> = raw.morphisms.iter().map(|m| m.cod).collect();
        let mut outgoing = vec![Vec::new(); n_objects];
        for f in 0..n {
            outgoing[dom[f]].push(f);
        }
        let mut out_pos = vec![0; n];
        for list in &outgoing {
            for (i, &f) in list.iter().enumerate() {
                out_pos[f] = i;
            }
        }
        let mut hom_count: HashMap<(Obj, Obj), usize> = HashMap::new();
        let mut hom_pos = vec![0; n];
        for f in 0..n {
            let c = hom_count.entry((dom[f], cod[f])).or_insert(0);
            hom_pos[f] = *c;
            *c += 1;
        }
        let mut offsets = Vec::with_capacity(n);
        let mut total = 0;
        for f in 0..n {
            offsets.push(total);
            total += outgoing[cod[f]].len();
        }
        let mut table = vec![usize::MAX; total];
        for &(g, f, h) in &raw.composites {
            table[offsets[f] + out_pos[g]] = h;
        }
        FinCategory {
            n_objects,
            dom,
            cod,
            identity: raw.identity.clone(),
            shape: Shape::Explicit(Explicit {
                obj_labels: raw.object_labels.clone(),
                mor_labels: raw.morphisms.iter().map(|m| m.label.clone()).collect(),
                outgoing,
                out_pos,
                hom_pos,
                offsets,
                table,
            }),
        }
    }

    /// Validate `raw` and build the category, failing with the full
    /// violation list when any axiom fails.
    pub fn from_raw(raw: &RawCategory) -> Result<FinCategory> {
        let report = validate_category(raw)?;
        if !report.is_valid() {
            return Err(Error::InvalidCategory(report.to_string()));
        }
        Ok(FinCategory::from_validated(raw))
    }

    /// One-object category from a multiplication table, `table[g][f] = g . f`.
    pub fn from_monoid_table(labels: &[String], table: &[Vec<usize>]) -> Result<FinCategory> {
        let n = labels.len();
        if table.len() != n || table.iter().any(|row| row.len() != n) {
            return Err(Error::Shape {
                expected: format!("{n}x{n} table"),
                found: "ragged table".into(),
            });
        }
        let neutral = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::InvalidCategory("table has no neutral element".into()))?;
        let mut raw = RawCategory {
            object_labels: vec!["*".into()],
            identity: vec![neutral],
            ..Default::default()
        };
        for l in labels {
            raw.push_morphism(l, 0, 0);
        }
        for (g, row) in table.iter().enumerate() {
            for (f, &h) in row.iter().enumerate() {
                raw.composites.push((g, f, h));
            }
        }
        FinCategory::from_raw(&raw)
    }

    pub fn object_count(&self) -> usize {
        self.n_objects
    }

    pub fn morphism_count(&self) -> usize {
        self.dom.len()
    }

    pub fn dom(&self, f: Mor) -> Obj {
        self.dom[f]
    }

    pub fn cod(&self, f: Mor) -> Obj {
        self.cod[f]
    }

    pub fn identity(&self, x: Obj) -> Mor {
        self.identity[x]
    }

    pub fn is_identity(&self, f: Mor) -> bool {
        self.identity[self.dom[f]] == f
    }

    /// `g . f`, or `None` when `cod f != dom g`.
    pub fn compose(&self, g: Mor, f: Mor) -> Option<Mor> {
        if self.cod[f] != self.dom[g] {
            return None;
        }
        match &self.shape {
            Shape::Explicit(e) => Some(e.table[e.offsets[f] + e.out_pos[g]]),
            Shape::Product(p) => {
                let mut h = 0;
                for (i, c) in p.factors.iter().enumerate() {
                    let n = c.morphism_count();
                    let gi = (g / p.mor_stride[i]) % n;
                    let fi = (f / p.mor_stride[i]) % n;
                    h += c.compose(gi, fi)? * p.mor_stride[i];
                }
                Some(h)
            }
        }
    }

    /// Composite of a path given last-first: `path[0] . path[1] . ...`.
    pub fn compose_path(&self, path: &[Mor]) -> Option<Mor> {
        let (&last, rest) = path.split_last()?;
        rest.iter()
            .rev()
            .try_fold(last, |acc, &g| self.compose(g, acc))
    }

    /// Morphisms with domain `x`, ascending.
    pub fn outgoing(&self, x: Obj) -> Cow<'_, [Mor]> {
        match &self.shape {
            Shape::Explicit(e) => Cow::Borrowed(&e.outgoing[x]),
            Shape::Product(p) => {
                let comps = self.split_object(x);
                let lists: Vec<Cow<'_, [Mor]>> = p
                    .factors
                    .iter()
                    .zip(&comps)
                    .map(|(c, &xi)| Cow::Owned(c.outgoing(xi).into_owned()))
                    .collect();
                Cow::Owned(cartesian(&lists, &p.mor_stride))
            }
        }
    }

    /// `hom(x, y)` in ascending index order.
    pub fn hom(&self, x: Obj, y: Obj) -> Vec<Mor> {
        match &self.shape {
            Shape::Explicit(e) => e.outgoing[x]
                .iter()
                .copied()
                .filter(|&f| self.cod[f] == y)
                .collect(),
            Shape::Product(p) => {
                let xs = self.split_object(x);
                let ys = self.split_object(y);
                let lists: Vec<Cow<'_, [Mor]>> = p
                    .factors
                    .iter()
                    .enumerate()
                    .map(|(i, c)| Cow::Owned(c.hom(xs[i], ys[i])))
                    .collect();
                cartesian(&lists, &p.mor_stride)
            }
        }
    }

    pub fn hom_size(&self, x: Obj, y: Obj) -> usize {
        match &self.shape {
            Shape::Explicit(_) => self.hom(x, y).len(),
            Shape::Product(p) => {
                let xs = self.split_object(x);
                let ys = self.split_object(y);
                p.factors
                    .iter()
                    .enumerate()
                    .map(|(i, c)| c.hom_size(xs[i], ys[i]))
                    .product()
            }
        }
    }

    /// Index of `f` inside `hom(dom f, cod f)`.
    pub fn hom_position(&self, f: Mor) -> usize {
        match &self.shape {
            Shape::Explicit(e) => e.hom_pos[f],
            Shape::Product(p) => {
                let mut pos = 0;
                for (i, c) in p.factors.iter().enumerate() {
                    let fi = (f / p.mor_stride[i]) % c.morphism_count();
                    pos = pos * c.hom_size(c.dom(fi), c.cod(fi)) + c.hom_position(fi);
                }
                pos
            }
        }
    }

    /// Iterate `(g, f)` with `cod f = dom g`, ordered by `f` then `g`.
    pub fn composable_pairs(&self) -> impl Iterator<Item = (Mor, Mor)> + '_ {
        (0..self.morphism_count()).flat_map(move |f| {
            self.outgoing(self.cod[f])
                .into_owned()
                .into_iter()
                .map(move |g| (g, f))
        })
    }

    pub fn composable_pair_count(&self) -> usize {
        (0..self.morphism_count())
            .map(|f| self.outgoing(self.cod[f]).len())
            .sum()
    }

    pub fn object_label(&self, x: Obj) -> String {
        match &self.shape {
            Shape::Explicit(e) => e.obj_labels[x].clone(),
            Shape::Product(p) => {
                let parts: Vec<String> = p
                    .factors
                    .iter()
                    .zip(self.split_object(x))
                    .map(|(c, xi)| c.object_label(xi))
                    .collect();
                format!("({})", parts.join(","))
            }
        }
    }

    pub fn morphism_label(&self, f: Mor) -> String {
        match &self.shape {
            Shape::Explicit(e) => e.mor_labels[f].clone(),
            Shape::Product(p) => {
                let parts: Vec<String> = p
                    .factors
                    .iter()
                    .zip(self.split_morphism(f))
                    .map(|(c, fi)| c.morphism_label(fi))
                    .collect();
                format!("({})", parts.join(","))
            }
        }
    }

    /// Look up an object of an explicit category by label. Products are
    /// addressed through [`FinCategory::tuple_object`].
    pub fn find_object(&self, label: &str) -> Option<Obj> {
        match &self.shape {
            Shape::Explicit(e) => e.obj_labels.iter().position(|l| l == label),
            Shape::Product(_) => (0..self.n_objects).find(|&x| self.object_label(x) == label),
        }
    }

    pub fn find_morphism(&self, label: &str) -> Option<Mor> {
        match &self.shape {
            Shape::Explicit(e) => e.mor_labels.iter().position(|l| l == label),
            Shape::Product(_) => {
                (0..self.morphism_count()).find(|&f| self.morphism_label(f) == label)
            }
        }
    }

    /// Factor categories when this is a product, `None` otherwise.
    pub fn factors(&self) -> Option<&[Arc<FinCategory>]> {
        match &self.shape {
            Shape::Product(p) => Some(&p.factors),
            Shape::Explicit(_) => None,
        }
    }

    /// Number of product positions; an explicit category counts as one.
    pub fn arity(&self) -> usize {
        self.factors().map_or(1, |f| f.len())
    }

    pub fn split_object(&self, x: Obj) -> Vec<Obj> {
        match &self.shape {
            Shape::Explicit(_) => vec![x],
            Shape::Product(p) => p
                .factors
                .iter()
                .enumerate()
                .map(|(i, c)| (x / p.obj_stride[i]) % c.object_count())
                .collect(),
        }
    }

    pub fn split_morphism(&self, f: Mor) -> Vec<Mor> {
        match &self.shape {
            Shape::Explicit(_) => vec![f],
            Shape::Product(p) => p
                .factors
                .iter()
                .enumerate()
                .map(|(i, c)| (f / p.mor_stride[i]) % c.morphism_count())
                .collect(),
        }
    }

    /// Component `i` of `f`; for an explicit category only `i = 0` is valid.
    pub fn component(&self, f: Mor, i: usize) -> Mor {
        match &self.shape {
            Shape::Explicit(_) => f,
            Shape::Product(p) => (f / p.mor_stride[i]) % p.factors[i].morphism_count(),
        }
    }

    pub fn tuple_object(&self, comps: &[Obj]) -> Obj {
        match &self.shape {
            Shape::Explicit(_) => comps[0],
            Shape::Product(p) => comps.iter().zip(&p.obj_stride).map(|(c, s)| c * s).sum(),
        }
    }

    pub fn tuple_morphism(&self, comps: &[Mor]) -> Mor {
        match &self.shape {
            Shape::Explicit(_) => comps[0],
            Shape::Product(p) => comps.iter().zip(&p.mor_stride).map(|(c, s)| c * s).sum(),
        }
    }

    pub(crate) fn product_of(factors: &[Arc<FinCategory>], cap: Cap) -> Result<FinCategory> {
        let mor_count = factors
            .iter()
            .map(|c| c.morphism_count() as u128)
            .product::<u128>();
        if mor_count > cap.0 as u128 {
            return Err(Error::SizeCap {
                what: "product category",
                count: mor_count,
                cap: cap.0,
            });
        }
        let obj_stride = strides(factors.iter().map(|c| c.object_count()));
        let mor_stride = strides(factors.iter().map(|c| c.morphism_count()));
        let n_objects: usize = factors.iter().map(|c| c.object_count()).product();
        let n = mor_count as usize;
        let mut dom = vec![0; n];
        let mut cod = vec![0; n];
        for f in 0..n {
            let (mut d, mut e) = (0, 0);
            for (i, c) in factors.iter().enumerate() {
                let fi = (f / mor_stride[i]) % c.morphism_count();
                d += c.dom(fi) * obj_stride[i];
                e += c.cod(fi) * obj_stride[i];
            }
            dom[f] = d;
            cod[f] = e;
        }
        let identity = (0..n_objects)
            .map(|x| {
                factors
                    .iter()
                    .enumerate()
                    .map(|(i, c)| {
                        c.identity((x / obj_stride[i]) % c.object_count()) * mor_stride[i]
                    })
                    .sum()
            })
            .collect();
        Ok(FinCategory {
            n_objects,
            dom,
            cod,
            identity,
            shape: Shape::Product(Product {
                factors: factors.to_vec(),
                obj_stride,
                mor_stride,
            }),
        })
    }

    /// Rebuild this category as an explicit table, keeping its indices.
    pub fn to_raw(&self) -> RawCategory {
        let mut raw = RawCategory {
            object_labels: (0..self.n_objects).map(|x| self.object_label(x)).collect(),
            identity: self.identity.clone(),
            ..Default::default()
        };
        for f in 0..self.morphism_count() {
            raw.push_morphism(&self.morphism_label(f), self.dom[f], self.cod[f]);
        }
        for (g, f) in self.composable_pairs() {
            raw.composites
                .push((g, f, self.compose(g, f).expect("composable")));
        }
        raw
    }
}

fn cartesian(lists: &[Cow<'_, [Mor]>], stride: &[usize]) -> Vec<Mor> {
    let mut out = vec![0usize];
    for (list, &s) in lists.iter().zip(stride) {
        let mut next = Vec::with_capacity(out.len() * list.len());
        for &base in &out {
            for &m in list.iter() {
                next.push(base + m * s);
            }
        }
        out = next;
    }
    out
}
