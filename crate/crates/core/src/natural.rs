//! Spans, partitions of arguments and heuristic naturality.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fincat::{
    is_generating, product_category, FinCategory, Mor, Obj, PlainFunctor, Subgraph,
};
use crate::mixfun::{Arrow, Reindexed, VarFunctor};
use crate::target::Codomain;
use crate::variance::index_variance;
use crate::Cap;

/// A span `R -> A x B`, kept as its two legs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Span {
    left: PlainFunctor,
    right: PlainFunctor,
}

impl Span {
    pub fn new(left: PlainFunctor, right: PlainFunctor) -> Result<Span> {
        if left.source() != right.source() {
            return Err(Error::Shape {
                expected: "legs with a common apex".into(),
                found: "different sources".into(),
            });
        }
        Ok(Span { left, right })
    }

    /// Both legs the identity of `c`.
    pub fn diagonal(c: &Arc<FinCategory>) -> Span {
        let id = PlainFunctor::identity(c.clone());
        Span {
            left: id.clone(),
            right: id,
        }
    }

    pub fn apex(&self) -> &Arc<FinCategory> {
        self.left.source()
    }

    /// `L1 = pi_1 . L`
    pub fn left(&self) -> &PlainFunctor {
        &self.left
    }

    /// `L2 = pi_2 . L`
    pub fn right(&self) -> &PlainFunctor {
        &self.right
    }

    /// `L: R -> A x B`, when the product fits under the cap.
    pub fn pairing(&self, cap: Cap) -> Result<PlainFunctor> {
        PlainFunctor::pairing(&[&self.left, &self.right], cap)
    }
}

/// Variables of an expression `F(x, y, ...) -> G(...)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArgumentPattern {
    pub domain: String,
    pub domain_vars: Vec<String>,
    pub codomain: String,
    pub codomain_vars: Vec<String>,
}

/// Positions `1..` sharing a variable, per class, sorted by
/// smallest position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classes(pub Vec<Vec<usize>>);

impl fmt::Display for Classes {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|c| {
                let items: Vec<String> = c.iter().map(|i| i.to_string()).collect();
                format!("{{{}}}", items.join(","))
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl ArgumentPattern {
    pub fn arity(&self) -> (usize, usize) {
        (self.domain_vars.len(), self.codomain_vars.len())
    }

    /// Equivalence classes of positions, numbered across the domain list and
    /// then the codomain list, starting at 1.
    pub fn classes(&self) -> Classes {
        let vars: Vec<&String> = self.domain_vars.iter().chain(&self.codomain_vars).collect();
        let mut classes: Vec<(&String, Vec<usize>)> = Vec::new();
        for (i, v) in vars.iter().enumerate() {
            match classes.iter_mut().find(|(name, _)| name == v) {
                Some((_, c)) => c.push(i + 1),
                None => classes.push((v, vec![i + 1])),
            }
        }
        Classes(classes.into_iter().map(|(_, c)| c).collect())
    }

    /// Attach concrete factor categories.
    pub fn bind(
        &self,
        domain: &[Arc<FinCategory>],
        codomain: &[Arc<FinCategory>],
    ) -> Result<PartitionOfArguments> {
        if domain.len() != self.domain_vars.len() || codomain.len() != self.codomain_vars.len() {
            return Err(Error::Shape {
                expected: format!(
                    "{} and {} arguments",
                    self.domain_vars.len(),
                    self.codomain_vars.len()
                ),
                found: format!("{} and {}", domain.len(), codomain.len()),
            });
        }
        PartitionOfArguments::new(domain.to_vec(), codomain.to_vec(), self.classes())
    }
}

struct Lexer<'a> {
    text: &'a [u8],
    pos: usize,
}

impl Lexer<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            column: self.pos + 1,
            message: message.into(),
        }
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        if start < self.text.len()
            && (self.text[start].is_ascii_alphabetic() || self.text[start] == b'_')
        {
            self.pos += 1;
            while self.pos < self.text.len()
                && (self.text[self.pos].is_ascii_alphanumeric() || self.text[self.pos] == b'_')
            {
                self.pos += 1;
            }
            Ok(String::from_utf8_lossy(&self.text[start..self.pos]).into_owned())
        } else {
            Err(self.err("expected identifier"))
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        self.skip_ws();
        if self.text[self.pos..].starts_with(token.as_bytes()) {
            self.pos += token.len();
            Ok(())
        } else {
            Err(self.err(format!("expected `{token}`")))
        }
    }

    fn peek(&mut self, token: &str) -> bool {
        self.skip_ws();
        self.text[self.pos..].starts_with(token.as_bytes())
    }

    fn application(&mut self) -> Result<(String, Vec<String>)> {
        let name = self.ident()?;
        self.expect("(")?;
        let mut vars = vec![self.ident()?];
        while self.peek(",") {
            self.expect(",")?;
            vars.push(self.ident()?);
        }
        self.expect(")")?;
        Ok((name, vars))
    }
}

/// Parse `F(x, y, y) -> G(x, x, y)`.
pub fn derive_partition(expr: &str) -> Result<ArgumentPattern> {
    if let Some(i) = expr.bytes().position(|b| !b.is_ascii()) {
        return Err(Error::Parse {
            column: i + 1,
            message: "non-ASCII character".into(),
        });
    }
    let mut lx = Lexer {
        text: expr.as_bytes(),
        pos: 0,
    };
    let (domain, domain_vars) = lx.application()?;
    lx.expect("->")?;
    let (codomain, codomain_vars) = lx.application()?;
    lx.skip_ws();
    if lx.pos != lx.text.len() {
        return Err(lx.err("trailing input"));
    }
    Ok(ArgumentPattern {
        domain,
        domain_vars,
        codomain,
        codomain_vars,
    })
}

/// An equivalence relation on the positions of two argument lists whose
/// related positions carry the same category.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionOfArguments {
    domain: Vec<Arc<FinCategory>>,
    codomain: Vec<Arc<FinCategory>>,
    /// 0-based positions, each class sorted, classes ordered by minimum
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

impl PartitionOfArguments {
    /// `classes` uses 1-based positions.
    pub fn new(
        domain: Vec<Arc<FinCategory>>,
        codomain: Vec<Arc<FinCategory>>,
        classes: Classes,
    ) -> Result<Self> {
        let n = domain.len() + codomain.len();
        let mut class_of = vec![usize::MAX; n];
        let mut normalized: Vec<Vec<usize>> = Vec::new();
        for class in &classes.0 {
            if class.is_empty() {
                return Err(Error::MalformedPartition("empty class".into()));
            }
            let mut c = Vec::new();
            for &p in class {
                if p == 0 || p > n {
                    return Err(Error::MalformedPartition(format!(
                        "position {p} outside 1..{n}"
                    )));
                }
                c.push(p - 1);
            }
            c.sort_unstable();
            normalized.push(c);
        }
        normalized.sort();
        for (k, class) in normalized.iter().enumerate() {
            for &p in class {
                if class_of[p] != usize::MAX {
                    return Err(Error::MalformedPartition(format!(
                        "position {} appears twice",
                        p + 1
                    )));
                }
                class_of[p] = k;
            }
        }
        if let Some(p) = class_of.iter().position(|&k| k == usize::MAX) {
            return Err(Error::MalformedPartition(format!(
                "position {} is in no class",
                p + 1
            )));
        }
        let factor = |p: usize| {
            if p < domain.len() {
                &domain[p]
            } else {
                &codomain[p - domain.len()]
            }
        };
        for class in &normalized {
            for &p in &class[1..] {
                if factor(p) != factor(class[0]) {
                    return Err(Error::PartitionMismatch(class[0] + 1, p + 1));
                }
            }
        }
        Ok(PartitionOfArguments {
            domain,
            codomain,
            classes: normalized,
            class_of,
        })
    }

    /// All positions in their own class.
    pub fn discrete(
        domain: Vec<Arc<FinCategory>>,
        codomain: Vec<Arc<FinCategory>>,
    ) -> Result<Self> {
        let n = domain.len() + codomain.len();
        PartitionOfArguments::new(
            domain,
            codomain,
            Classes((1..=n).map(|p| vec![p]).collect()),
        )
    }

    pub fn domain(&self) -> &[Arc<FinCategory>] {
        &self.domain
    }

    pub fn codomain(&self) -> &[Arc<FinCategory>] {
        &self.codomain
    }

    /// Classes with 1-based positions.
    pub fn classes(&self) -> Classes {
        Classes(
            self.classes
                .iter()
                .map(|c| c.iter().map(|p| p + 1).collect())
                .collect(),
        )
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    fn factor(&self, p: usize) -> &Arc<FinCategory> {
        if p < self.domain.len() {
            &self.domain[p]
        } else {
            &self.codomain[p - self.domain.len()]
        }
    }
}

/// The span induced by a partition, with `R` the product over one
/// representative position per class.
#[derive(Clone, Debug)]
pub struct PartitionSpan {
    pub partition: PartitionOfArguments,
    pub span: Span,
    /// smallest position (0-based) of each class
    pub representatives: Vec<usize>,
}

fn leg(
    apex: &Arc<FinCategory>,
    target: &Arc<FinCategory>,
    positions: std::ops::Range<usize>,
    class_of: &[usize],
) -> Result<PlainFunctor> {
    let obj_map = (0..apex.object_count())
        .map(|x| {
            let comps = apex.split_object(x);
            let picked: Vec<Obj> = positions.clone().map(|p| comps[class_of[p]]).collect();
            target.tuple_object(&picked)
        })
        .collect();
    let mor_map = crate::par::map(apex.morphism_count(), |f| {
        let comps = apex.split_morphism(f);
        let picked: Vec<Mor> = positions.clone().map(|p| comps[class_of[p]]).collect();
        target.tuple_morphism(&picked)
    });
    PlainFunctor::new_unchecked(apex.clone(), target.clone(), obj_map, mor_map)
}

pub fn build_span_from_partition(p: &PartitionOfArguments, cap: Cap) -> Result<PartitionSpan> {
    let reps: Vec<usize> = p.classes.iter().map(|c| c[0]).collect();
    let rep_factors: Vec<Arc<FinCategory>> = reps.iter().map(|&r| p.factor(r).clone()).collect();
    let apex = Arc::new(product_category(&rep_factors, cap)?);
    let a = Arc::new(product_category(&p.domain, cap)?);
    let b = Arc::new(product_category(&p.codomain, cap)?);
    let nd = p.domain.len();
    let left = leg(&apex, &a, 0..nd, &p.class_of)?;
    let right = leg(&apex, &b, nd..nd + p.codomain.len(), &p.class_of)?;
    Ok(PartitionSpan {
        partition: p.clone(),
        span: Span { left, right },
        representatives: reps,
    })
}

impl PartitionSpan {
    /// `R -> prod(AB)`, the inclusion of `R` as the related morphisms.
    pub fn embedding(&self, cap: Cap) -> Result<PlainFunctor> {
        let p = &self.partition;
        let all: Vec<Arc<FinCategory>> = p.domain.iter().chain(&p.codomain).cloned().collect();
        let target = Arc::new(product_category(&all, cap)?);
        leg(self.span.apex(), &target, 0..all.len(), &p.class_of)
    }

    /// Morphisms of `R` that are identities outside at most one class.
    pub fn single_class_generators(&self) -> Subgraph {
        single_class_generators(self)
    }
}

/// Generators of `R`: morphisms non-identity in at most one class.
pub fn single_class_generators(ps: &PartitionSpan) -> Subgraph {
    let r = ps.span.apex();
    let factors: Vec<Arc<FinCategory>> = match r.factors() {
        Some(f) => f.to_vec(),
        None => vec![r.clone()],
    };
    let morphisms = (0..r.morphism_count())
        .filter(|&f| {
            r.split_morphism(f)
                .iter()
                .zip(&factors)
                .filter(|(fi, c)| !c.is_identity(**fi))
                .count()
                <= 1
        })
        .collect();
    Subgraph::new(r, morphisms).expect("indices in range")
}

/// Every class has two positions, and two positions differ in variance
/// exactly when they sit on the same side.
pub fn is_generalized_extranatural(
    p: &PartitionOfArguments,
    domain_flags: &[u8],
    codomain_flags: &[u8],
) -> bool {
    let nd = p.domain.len();
    if domain_flags.len() != nd || codomain_flags.len() != p.codomain.len() {
        return false;
    }
    let flag = |i: usize| {
        if i < nd {
            domain_flags[i]
        } else {
            codomain_flags[i - nd]
        }
    };
    p.classes.iter().all(|c| {
        c.len() == 2 && {
            let same_side = (c[0] < nd) == (c[1] < nd);
            let differ = flag(c[0]) != flag(c[1]);
            same_side == differ
        }
    })
}

/// One failing instance, with both composite sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NaturalityFailure<A> {
    pub f: Mor,
    /// `G(h^e) . eta_x . F(g_m)`
    pub upper: Option<A>,
    /// `G(h^m) . eta_y . F(g_e)`
    pub lower: Option<A>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NaturalityReport<A> {
    pub failures: Vec<NaturalityFailure<A>>,
    /// number of morphisms actually checked
    pub checked: usize,
}

impl<A> NaturalityReport<A> {
    pub fn is_natural(&self) -> bool {
        self.failures.is_empty()
    }
}

fn same_category(a: &Arc<FinCategory>, b: &Arc<FinCategory>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

pub(crate) fn check_family_shape<F, G>(
    f: &F,
    g: &G,
    span: &Span,
    eta: &[Arrow<F::Target>],
) -> Result<()>
where
    F: VarFunctor,
    G: VarFunctor<Target = F::Target>,
    F::Target: PartialEq,
{
    if f.target() != g.target() {
        return Err(Error::Shape {
            expected: "functors with one codomain".into(),
            found: "different codomains".into(),
        });
    }
    if !same_category(span.left.target(), f.source())
        || !same_category(span.right.target(), g.source())
    {
        return Err(Error::Shape {
            expected: "span legs landing in the functor domains".into(),
            found: "mismatched categories".into(),
        });
    }
    let r = span.apex();
    if eta.len() != r.object_count() {
        return Err(Error::Shape {
            expected: format!("{} components", r.object_count()),
            found: eta.len().to_string(),
        });
    }
    let t = f.target();
    for (x, a) in eta.iter().enumerate() {
        if t.arrow_source(a) != f.object(span.left.object(x))
            || t.arrow_target(a) != g.object(span.right.object(x))
        {
            return Err(Error::ComponentType(x));
        }
    }
    Ok(())
}

/// The two sides of a hexagon, `None` where a composite is undefined.
type Sides<A> = (Option<A>, Option<A>);

/// Both sides of the hexagon at `m: x -> y` for components `alpha` at `x`
/// and `beta` at `y`: `G(h^e) alpha F(g_m)` and `G(h^m) beta F(g_e)`.
pub(crate) fn hexagon<F, G>(
    f: &F,
    g: &G,
    span: &Span,
    m: Mor,
    alpha: &Arrow<F::Target>,
    beta: &Arrow<F::Target>,
) -> Sides<Arrow<F::Target>>
where
    F: VarFunctor,
    G: VarFunctor<Target = F::Target>,
{
    let t = f.target();
    let gl = f.variance().fac(span.left.morphism(m));
    let hr = g.variance().fac(span.right.morphism(m));
    let upper = t
        .compose_arrows(alpha, &f.arrow(gl.start_m))
        .and_then(|a| t.compose_arrows(&g.arrow(hr.term_e), &a));
    let lower = t
        .compose_arrows(beta, &f.arrow(gl.start_e))
        .and_then(|a| t.compose_arrows(&g.arrow(hr.term_m), &a));
    (upper, lower)
}

fn naturality_at<F, G>(
    f: &F,
    g: &G,
    span: &Span,
    eta: &[Arrow<F::Target>],
    m: Mor,
) -> Option<NaturalityFailure<Arrow<F::Target>>>
where
    F: VarFunctor,
    G: VarFunctor<Target = F::Target>,
{
    let r = span.apex();
    let (upper, lower) = hexagon(f, g, span, m, &eta[r.dom(m)], &eta[r.cod(m)]);
    (upper.is_none() || upper != lower).then_some(NaturalityFailure { f: m, upper, lower })
}

fn checked_morphisms(r: &FinCategory, gens: Option<&Subgraph>) -> Result<Vec<Mor>> {
    match gens {
        Some(s) => {
            if !is_generating(r, s) {
                return Err(Error::NotGenerating);
            }
            Ok(s.morphisms().to_vec())
        }
        None => Ok((0..r.morphism_count()).collect()),
    }
}

/// For each `f: x -> y` in `R` with `g = L1 f`, `h = L2 f`, require
/// `G(h^e) eta_x F(g_m) = G(h^m) eta_y F(g_e)`. With `gens`, only the
/// generators are checked, which suffices when they generate `R`.
pub fn check_heuristic_naturality<F, G>(
    f: &F,
    g: &G,
    span: &Span,
    eta: &[Arrow<F::Target>],
    gens: Option<&Subgraph>,
) -> Result<NaturalityReport<Arrow<F::Target>>>
where
    F: VarFunctor,
    G: VarFunctor<Target = F::Target>,
    F::Target: PartialEq,
{
    check_family_shape(f, g, span, eta)?;
    let checked = checked_morphisms(span.apex(), gens)?;
    let failures = crate::par::filter_map(checked.len(), |i| {
        naturality_at(f, g, span, eta, checked[i])
    });
    Ok(NaturalityReport {
        failures,
        checked: checked.len(),
    })
}

/// The first failing morphism in index order, if any. With `among`, only
/// those morphisms are searched, in the given order.
pub fn first_naturality_failure<F, G>(
    f: &F,
    g: &G,
    span: &Span,
    eta: &[Arrow<F::Target>],
    among: Option<&[Mor]>,
) -> Result<Option<NaturalityFailure<Arrow<F::Target>>>>
where
    F: VarFunctor,
    G: VarFunctor<Target = F::Target>,
    F::Target: PartialEq,
{
    check_family_shape(f, g, span, eta)?;
    Ok(match among {
        Some(ms) => crate::par::find_first(ms.len(), |i| naturality_at(f, g, span, eta, ms[i])),
        None => crate::par::find_first(span.apex().morphism_count(), |m| {
            naturality_at(f, g, span, eta, m)
        }),
    })
}

/// `F` and `G` rewritten over `R x R` with index-variance `(1, 0)`:
/// contravariant argument positions read the first `R` coordinate and
/// covariant ones the second.
pub struct DinaturalForm<'a, F: VarFunctor, G: VarFunctor> {
    pub f_bar: Reindexed<'a, F>,
    pub g_bar: Reindexed<'a, G>,
    pub apex: Arc<FinCategory>,
}

fn route<'a, H: VarFunctor>(
    base: &'a H,
    leg: &PlainFunctor,
    rr: &Arc<crate::variance::VarianceStruct>,
) -> Result<Reindexed<'a, H>> {
    let flags = base.variance().index_flags().ok_or_else(|| Error::Shape {
        expected: "functor of index-variance".into(),
        found: "general variance".into(),
    })?;
    let a = base.source().clone();
    let p = rr.owner().clone();
    let obj_map = (0..p.object_count())
        .map(|xy| {
            let s = p.split_object(xy);
            let (first, second) = (
                a.split_object(leg.object(s[0])),
                a.split_object(leg.object(s[1])),
            );
            let comps: Vec<Obj> = flags
                .iter()
                .enumerate()
                .map(|(i, &b)| if b == 1 { first[i] } else { second[i] })
                .collect();
            a.tuple_object(&comps)
        })
        .collect();
    let mor_map = crate::par::map(p.morphism_count(), |fg| {
        let s = p.split_morphism(fg);
        let (first, second) = (
            a.split_morphism(leg.morphism(s[0])),
            a.split_morphism(leg.morphism(s[1])),
        );
        let comps: Vec<Mor> = flags
            .iter()
            .enumerate()
            .map(|(i, &b)| if b == 1 { first[i] } else { second[i] })
            .collect();
        a.tuple_morphism(&comps)
    });
    Reindexed::new(base, rr.clone(), obj_map, mor_map)
}

pub fn to_dinatural<'a, F, G>(
    f: &'a F,
    g: &'a G,
    span: &Span,
    cap: Cap,
) -> Result<DinaturalForm<'a, F, G>>
where
    F: VarFunctor,
    G: VarFunctor<Target = F::Target>,
{
    let r = span.apex().clone();
    let rr = Arc::new(index_variance(&[r.clone(), r.clone()], &[1, 0], cap)?);
    Ok(DinaturalForm {
        f_bar: route(f, &span.left, &rr)?,
        g_bar: route(g, &span.right, &rr)?,
        apex: r,
    })
}

/// Morphisms `f: x -> y` of `R` where
/// `G(id_x, f) eta_x F(f, id_x) != G(f, id_y) eta_y F(id_y, f)`.
pub fn check_dinatural<F, G>(
    form: &DinaturalForm<'_, F, G>,
    eta: &[Arrow<F::Target>],
) -> Result<Vec<Mor>>
where
    F: VarFunctor,
    G: VarFunctor<Target = F::Target>,
{
    let r = &form.apex;
    let rr = form.f_bar.source().clone();
    let t = form.f_bar.target();
    if eta.len() != r.object_count() {
        return Err(Error::Shape {
            expected: format!("{} components", r.object_count()),
            found: eta.len().to_string(),
        });
    }
    for (x, a) in eta.iter().enumerate() {
        let xx = rr.tuple_object(&[x, x]);
        if t.arrow_source(a) != form.f_bar.object(xx) || t.arrow_target(a) != form.g_bar.object(xx)
        {
            return Err(Error::ComponentType(x));
        }
    }
    Ok(crate::par::filter_map(r.morphism_count(), |f| {
        let (x, y) = (r.dom(f), r.cod(f));
        let (ix, iy) = (r.identity(x), r.identity(y));
        let upper = t
            .compose_arrows(&eta[x], &form.f_bar.arrow(rr.tuple_morphism(&[f, ix])))
            .and_then(|a| t.compose_arrows(&form.g_bar.arrow(rr.tuple_morphism(&[ix, f])), &a));
        let lower = t
            .compose_arrows(&eta[y], &form.f_bar.arrow(rr.tuple_morphism(&[iy, f])))
            .and_then(|a| t.compose_arrows(&form.g_bar.arrow(rr.tuple_morphism(&[f, iy])), &a));
        (upper.is_none() || upper != lower).then_some(f)
    }))
}
