//! The subcommands. Each returns an [`Outcome`]; errors are diagnostics and
//! map to exit code 2.

use serde_json::{json, Value as Json};

use catv_core::comma::{
    build_comma, build_comma_on, section_to_transformation, transformation_to_section,
    CommaCategory,
};
use catv_core::ends::{compute_coend, compute_end, fubini_check, oracle_end};
use catv_core::mixfun::{Arrow, VarFunctor};
use catv_core::natural::{
    check_heuristic_naturality, derive_partition, first_naturality_failure,
    is_generalized_extranatural, Span,
};
use catv_core::variance::enumerate_variances;
use catv_core::{Cap, Codomain, Error, Mor, Obj, Subgraph};

use crate::dot::{role, Digraph, Edge};
use crate::dsl::{Assertion, Diagnostic, Loc, Name, Ref};
use crate::workspace::{
    flag, number, resolve_morphism, Components, FunctorValue, SetFunctorValue, TransformationValue,
    Workspace,
};

type DResult<T> = Result<T, Diagnostic>;

/// What a command reports. `ok == false` is a mathematical failure.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub ok: bool,
    pub text: String,
    pub json: Json,
    pub dot: Option<String>,
}

impl Outcome {
    fn new(ok: bool, lines: Vec<String>, json: Json) -> Outcome {
        let mut text = lines.join("\n");
        text.push('\n');
        Outcome {
            ok,
            text,
            json,
            dot: None,
        }
    }
}

/// Flags shared by the subcommands.
#[derive(Clone, Debug, Default)]
pub struct Options {
    pub variance: Vec<String>,
    pub functor: Vec<String>,
    pub span: Vec<String>,
    pub trans: Option<String>,
    pub mor: Option<String>,
    pub generators: bool,
    pub oracle: bool,
    pub dot: bool,
}

/// An error not tied to a place in the input file.
pub fn usage(message: impl Into<String>) -> Diagnostic {
    Diagnostic::new(Loc::default(), message)
}

fn core<T>(r: catv_core::Result<T>) -> DResult<T> {
    r.map_err(|e| usage(e.to_string()))
}

fn flag_name(s: &str) -> Name {
    Name {
        text: s.to_string(),
        loc: Loc::default(),
    }
}

fn one<'a>(list: &'a [String], what: &str) -> DResult<&'a str> {
    match list {
        [x] => Ok(x),
        [] => Err(usage(format!("--{what} is required"))),
        _ => Err(usage(format!("expected a single --{what}"))),
    }
}

fn labels(c: &catv_core::FinCategory, ms: &[Mor]) -> String {
    let ls: Vec<String> = ms.iter().map(|&m| c.morphism_label(m)).collect();
    format!("{{{}}}", ls.join(","))
}

pub fn partition(expr: &str) -> DResult<Outcome> {
    let p = derive_partition(expr).map_err(|e| match e {
        Error::Parse { column, message } => usage(format!("column {column}: {message}")),
        other => usage(other.to_string()),
    })?;
    let classes = p.classes().0;
    let text = classes
        .iter()
        .map(|c| {
            format!(
                "{{{}}}",
                c.iter()
                    .map(|i| i.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            )
        })
        .collect::<Vec<_>>()
        .join(" ");
    let (n, m) = p.arity();
    Ok(Outcome::new(
        true,
        vec![text],
        json!({ "expression": expr, "domain_arity": n, "codomain_arity": m, "classes": classes }),
    ))
}

pub fn factor(ws: &Workspace, opts: &Options) -> DResult<Outcome> {
    let v = ws.variance(&flag_name(one(&opts.variance, "variance")?))?;
    let c = v.owner();
    let mor = opts
        .mor
        .as_deref()
        .ok_or_else(|| usage("--mor is required"))?;
    let f = resolve_morphism(c, &Ref::Atom(flag_name(mor)), "the variance's category")?;
    let fac = v.fac(f);
    let rows = [
        ("f", c.morphism_label(f)),
        ("f^e", c.morphism_label(fac.term_e)),
        ("f^m", c.morphism_label(fac.term_m)),
        ("f_m", c.morphism_label(fac.start_m)),
        ("f_e", c.morphism_label(fac.start_e)),
        ("f_s", c.object_label(fac.start_obj)),
        ("f_t", c.object_label(fac.term_obj)),
    ];
    let lines = rows.iter().map(|(k, v)| format!("{k} = {v}")).collect();
    let json = json!({
        "morphism": rows[0].1, "term_e": rows[1].1, "term_m": rows[2].1,
        "start_m": rows[3].1, "start_e": rows[4].1, "start_obj": rows[5].1, "term_obj": rows[6].1,
    });
    Ok(Outcome::new(true, lines, json))
}

pub struct Witness {
    pub mor: Mor,
    pub upper: Option<String>,
    pub lower: Option<String>,
}

pub struct Naturality {
    pub checked: Vec<Mor>,
    pub failures: Vec<Witness>,
}

fn transformation_span<'w>(ws: &'w Workspace, t: &TransformationValue) -> &'w Span {
    &ws.spans.get(&t.span).expect("resolved when declared").span
}

fn set_functor<'w>(ws: &'w Workspace, name: &str) -> &'w SetFunctorValue {
    match ws.functors.get(name) {
        Some(FunctorValue::Set(s)) => s,
        _ => unreachable!("resolved when declared"),
    }
}

fn mixed<'w>(
    ws: &'w Workspace,
    name: &str,
) -> &'w catv_core::mixfun::MixedFunctor<catv_core::FinCategory> {
    match ws.functors.get(name) {
        Some(FunctorValue::Mixed(m)) => m,
        _ => unreachable!("resolved when declared"),
    }
}

/// The generating subgraph of a partition span, when asked for.
fn generators(ws: &Workspace, span: &str, wanted: bool) -> DResult<Option<Subgraph>> {
    if !wanted {
        return Ok(None);
    }
    match ws.spans.get(span).and_then(|s| s.partition.as_ref()) {
        Some(p) => Ok(Some(p.single_class_generators())),
        None => Err(usage(format!(
            "'{span}' does not come from a partition; --generators needs one"
        ))),
    }
}

fn naturality_of<F, G>(
    f: &F,
    g: &G,
    span: &Span,
    eta: &[Arrow<F::Target>],
    gens: Option<&Subgraph>,
) -> DResult<Naturality>
where
    F: VarFunctor,
    G: VarFunctor<Target = F::Target>,
    F::Target: PartialEq,
{
    let report = core(check_heuristic_naturality(f, g, span, eta, gens))?;
    let t = f.target();
    Ok(Naturality {
        checked: match gens {
            Some(s) => s.morphisms().to_vec(),
            None => (0..span.apex().morphism_count()).collect(),
        },
        failures: report
            .failures
            .into_iter()
            .map(|w| Witness {
                mor: w.f,
                upper: w.upper.map(|a| t.render_arrow(&a)),
                lower: w.lower.map(|a| t.render_arrow(&a)),
            })
            .collect(),
    })
}

pub fn naturality(
    ws: &Workspace,
    t: &TransformationValue,
    gens: Option<&Subgraph>,
) -> DResult<Naturality> {
    let span = transformation_span(ws, t);
    match &t.components {
        Components::Set(eta) => naturality_of(
            &set_functor(ws, &t.f).functor,
            &set_functor(ws, &t.g).functor,
            span,
            eta,
            gens,
        ),
        Components::Cat(eta) => naturality_of(mixed(ws, &t.f), mixed(ws, &t.g), span, eta, gens),
    }
}

/// Number of single-value changes of `t` and the first one that no
/// morphism touching its component detects.
pub fn mutants(ws: &Workspace, t: &TransformationValue) -> DResult<(usize, Option<String>)> {
    let span = transformation_span(ws, t);
    let r = span.apex();
    let touching = |x: Obj| -> Vec<Mor> {
        (0..r.morphism_count())
            .filter(|&m| r.dom(m) == x || r.cod(m) == x)
            .collect()
    };
    let mut total = 0;
    match &t.components {
        Components::Set(eta) => {
            let (f, g) = (
                &set_functor(ws, &t.f).functor,
                &set_functor(ws, &t.g).functor,
            );
            for (x, e) in eta.iter().enumerate() {
                let near = touching(x);
                for k in 0..e.dom() {
                    for value in (0..e.cod()).filter(|&v| v != e.apply(k)) {
                        total += 1;
                        let mut values = e.values().to_vec();
                        values[k] = value;
                        let mut bad = eta.clone();
                        bad[x] = catv_core::Function::new(e.cod(), values).expect("in range");
                        if core(first_naturality_failure(f, g, span, &bad, Some(&near)))?.is_none()
                        {
                            return Ok((
                                total,
                                Some(format!(
                                    "{} at element {k} sent to {value}",
                                    r.object_label(x)
                                )),
                            ));
                        }
                    }
                }
            }
        }
        Components::Cat(eta) => {
            let (f, g) = (mixed(ws, &t.f), mixed(ws, &t.g));
            let d = f.target();
            for (x, &e) in eta.iter().enumerate() {
                let near = touching(x);
                for alt in d.hom(d.dom(e), d.cod(e)).into_iter().filter(|&a| a != e) {
                    total += 1;
                    let mut bad = eta.clone();
                    bad[x] = alt;
                    if core(first_naturality_failure(f, g, span, &bad, Some(&near)))?.is_none() {
                        return Ok((
                            total,
                            Some(format!(
                                "{} replaced by {}",
                                r.object_label(x),
                                d.morphism_label(alt)
                            )),
                        ));
                    }
                }
            }
        }
    }
    Ok((total, None))
}

fn transformation_dot(
    ws: &Workspace,
    name: &str,
    t: &TransformationValue,
    nat: &Naturality,
) -> String {
    let span = transformation_span(ws, t);
    let r = span.apex();
    let variance = |n: &str| match ws.functors.get(n).expect("resolved") {
        FunctorValue::Set(s) => s.functor.variance().clone(),
        FunctorValue::Mixed(m) => m.variance().clone(),
        FunctorValue::Plain(_) => unreachable!("not a transformation endpoint"),
    };
    let (v1, v2) = (variance(&t.f), variance(&t.g));
    let failing: Vec<Mor> = nat.failures.iter().map(|w| w.mor).collect();
    let edges = nat
        .checked
        .iter()
        .filter(|&&m| !r.is_identity(m))
        .map(|&m| {
            let mut attrs = vec![
                (
                    "l1".to_string(),
                    role(&v1, span.left().morphism(m)).to_string(),
                ),
                (
                    "l2".to_string(),
                    role(&v2, span.right().morphism(m)).to_string(),
                ),
            ];
            if failing.contains(&m) {
                attrs.push(("color".into(), "red".into()));
            }
            Edge {
                from: r.dom(m),
                to: r.cod(m),
                label: r.morphism_label(m),
                attrs,
            }
        })
        .collect();
    Digraph {
        name: name.to_string(),
        nodes: (0..r.object_count()).map(|x| r.object_label(x)).collect(),
        edges,
    }
    .render()
}

pub fn natural(ws: &Workspace, opts: &Options) -> DResult<Outcome> {
    let name = opts
        .trans
        .as_deref()
        .ok_or_else(|| usage("--trans is required"))?;
    let t = ws.transformation(&flag_name(name))?;
    let gens = generators(ws, &t.span, opts.generators)?;
    let nat = naturality(ws, t, gens.as_ref())?;
    let r = transformation_span(ws, t).apex();
    let mut lines = Vec::new();
    let natural = nat.failures.is_empty();
    if natural {
        lines.push(format!(
            "{name} is natural ({} morphisms checked)",
            nat.checked.len()
        ));
    } else {
        lines.push(format!(
            "{name} is not natural ({} of {} morphisms fail)",
            nat.failures.len(),
            nat.checked.len()
        ));
        for w in nat.failures.iter().take(10) {
            lines.push(format!(
                "  at {}: upper = {}, lower = {}",
                r.morphism_label(w.mor),
                w.upper.as_deref().unwrap_or("undefined"),
                w.lower.as_deref().unwrap_or("undefined")
            ));
        }
    }
    let json = json!({
        "transformation": name,
        "natural": natural,
        "checked": nat.checked.len(),
        "failures": nat.failures.iter().map(|w| json!({
            "morphism": r.morphism_label(w.mor), "upper": w.upper, "lower": w.lower,
        })).collect::<Vec<_>>(),
    });
    let mut out = Outcome::new(natural, lines, json);
    if opts.dot {
        out.dot = Some(transformation_dot(ws, name, t, &nat));
    }
    Ok(out)
}

fn end_inputs<'w>(
    ws: &'w Workspace,
    opts: &Options,
) -> DResult<(
    &'w SetFunctorValue,
    catv_core::PlainFunctor,
    Option<Subgraph>,
)> {
    let f = ws.set_functor(&flag_name(one(&opts.functor, "functor")?))?;
    let span = one(&opts.span, "span")?;
    let (l, _) = ws.leg(&flag_name(span))?;
    let gens = generators(ws, span, opts.generators)?;
    Ok((f, l, gens))
}

pub fn end(ws: &Workspace, opts: &Options) -> DResult<Outcome> {
    let (f, l, gens) = end_inputs(ws, opts)?;
    let end = core(compute_end(&f.functor, &l, gens.as_ref(), ws.cap))?;
    let render = |t: &[usize]| -> String {
        let parts: Vec<String> = t
            .iter()
            .enumerate()
            .map(|(x, &a)| f.element(l.object(x), a))
            .collect();
        format!("({})", parts.join(","))
    };
    let mut lines = vec![format!("size={}", end.len())];
    lines.extend(end.tuples.iter().map(|t| render(t)));
    let mut ok = true;
    let mut json = json!({
        "size": end.len(),
        "tuples": end.tuples.iter().map(|t| render(t)).collect::<Vec<_>>(),
    });
    if opts.oracle {
        let mut oracle = core(oracle_end(&f.functor, &l, ws.cap))?;
        oracle.sort();
        let mut tuples = end.tuples.clone();
        tuples.sort();
        ok = oracle == tuples;
        lines.push(format!(
            "oracle: {}",
            if ok { "agrees" } else { "DISAGREES" }
        ));
        if !ok {
            lines.push(format!("oracle size={}", oracle.len()));
        }
        json["oracle_agrees"] = json!(ok);
    }
    Ok(Outcome::new(ok, lines, json))
}

pub fn coend(ws: &Workspace, opts: &Options) -> DResult<Outcome> {
    let (f, l, _) = end_inputs(ws, opts)?;
    let co = core(compute_coend(&f.functor, &l, ws.cap))?;
    let r = l.source();
    let render = |c: &[(Obj, usize)]| -> String {
        let parts: Vec<String> = c
            .iter()
            .map(|&(x, a)| format!("{}:{}", r.object_label(x), f.element(l.object(x), a)))
            .collect();
        format!("{{{}}}", parts.join(","))
    };
    let mut lines = vec![
        format!("size={}", co.len()),
        format!("construction: {}", co.construction),
    ];
    lines.extend(co.classes.iter().map(|c| render(c)));
    let json = json!({
        "size": co.len(),
        "construction": co.construction,
        "classes": co.classes.iter().map(|c| render(c)).collect::<Vec<_>>(),
    });
    Ok(Outcome::new(true, lines, json))
}

pub fn fubini(ws: &Workspace, opts: &Options) -> DResult<Outcome> {
    let f = ws.set_functor(&flag_name(one(&opts.functor, "functor")?))?;
    let [s1, s2] = opts.span.as_slice() else {
        return Err(usage("fubini needs two --span flags"));
    };
    let (l1, _) = ws.leg(&flag_name(s1))?;
    let (l2, _) = ws.leg(&flag_name(s2))?;
    let report = core(fubini_check(&f.functor, &l1, &l2, ws.cap))?;
    let ok = report.is_verified();
    let mut lines = vec![
        format!("end={}", report.total.len()),
        format!("iterated={}", report.iterated.len()),
    ];
    lines.push(match &report.defect {
        None => "bijection verified".to_string(),
        Some(d) => format!("defect: {d}"),
    });
    let json = json!({
        "end": report.total.len(),
        "iterated": report.iterated.len(),
        "verified": ok,
        "defect": report.defect,
    });
    Ok(Outcome::new(ok, lines, json))
}

/// Sections of the forgetful functor, counting at most `limit`.
pub fn count_sections<A: Clone + Eq + std::hash::Hash>(
    cc: &CommaCategory<A>,
    limit: usize,
) -> usize {
    let r = cc.apex();
    let n = r.object_count();
    let mut over: Vec<Vec<Obj>> = vec![Vec::new(); n];
    for (p, (x, _)) in cc.objects().iter().enumerate() {
        over[*x].push(p);
    }
    // morphisms to check once both ends are chosen, keyed by the later end
    let mut due: Vec<Vec<Mor>> = vec![Vec::new(); n];
    for m in 0..r.morphism_count() {
        due[r.dom(m).max(r.cod(m))].push(m);
    }
    fn go<A: Clone + Eq + std::hash::Hash>(
        cc: &CommaCategory<A>,
        over: &[Vec<Obj>],
        due: &[Vec<Mor>],
        chosen: &mut Vec<Obj>,
        count: &mut usize,
        limit: usize,
    ) {
        let x = chosen.len();
        if x == over.len() {
            *count += 1;
            return;
        }
        let r = cc.apex();
        for &p in &over[x] {
            chosen.push(p);
            if due[x].iter().all(|&m| {
                cc.find_morphism(m, chosen[r.dom(m)], chosen[r.cod(m)])
                    .is_some()
            }) {
                go(cc, over, due, chosen, count, limit);
            }
            chosen.pop();
            if *count >= limit {
                return;
            }
        }
    }
    let mut count = 0;
    go(cc, &over, &due, &mut Vec::new(), &mut count, limit);
    count
}

struct CommaSummary {
    lines: Vec<String>,
    json: Json,
    ok: bool,
    dot: Digraph,
}

fn comma_of<F, G>(
    f: &F,
    g: &G,
    span: &Span,
    eta: Option<&[Arrow<F::Target>]>,
    cap: Cap,
) -> DResult<CommaSummary>
where
    F: VarFunctor,
    G: VarFunctor<Target = F::Target>,
{
    let (cc, full) = match build_comma(f, g, span, cap) {
        Ok(cc) => (cc, true),
        Err(Error::SizeCap { .. }) if eta.is_some() => {
            let candidates = eta
                .expect("checked")
                .iter()
                .map(|a| vec![a.clone()])
                .collect();
            (core(build_comma_on(f, g, span, candidates, cap))?, false)
        }
        Err(e) => return Err(usage(e.to_string())),
    };
    let c = cc.category();
    let faithful = cc.forgetful().is_faithful();
    let mut lines = vec![
        format!(
            "{} comma category: {} objects, {} morphisms",
            if full { "full" } else { "restricted" },
            c.object_count(),
            c.morphism_count()
        ),
        format!(
            "forgetful functor faithful: {}",
            if faithful { "yes" } else { "no" }
        ),
    ];
    let mut json = json!({
        "full": full,
        "objects": c.object_count(),
        "morphisms": c.morphism_count(),
        "faithful": faithful,
    });
    let mut ok = faithful;
    if full {
        let n = count_sections(&cc, cap.0);
        lines.push(format!("sections={n}"));
        json["sections"] = json!(n);
    }
    if let Some(eta) = eta {
        match transformation_to_section(&cc, eta) {
            Ok(s) => {
                let back = core(section_to_transformation(&cc, &s))?;
                let round = back == eta;
                ok &= round;
                lines.push(format!(
                    "transformation is a section: yes, round trip {}",
                    if round { "ok" } else { "FAILED" }
                ));
                json["section"] = json!(true);
                json["round_trip"] = json!(round);
            }
            Err(e) => {
                ok = false;
                lines.push(format!("transformation is a section: no ({e})"));
                json["section"] = json!(false);
            }
        }
    }
    let t = f.target();
    let r = span.apex();
    let objects = cc.objects();
    let edges = (0..c.morphism_count())
        .filter(|&p| !c.is_identity(p))
        .map(|p| {
            let m = cc.underlying(p);
            Edge {
                from: c.dom(p),
                to: c.cod(p),
                label: r.morphism_label(m),
                attrs: vec![
                    (
                        "l1".into(),
                        role(f.variance(), span.left().morphism(m)).into(),
                    ),
                    (
                        "l2".into(),
                        role(g.variance(), span.right().morphism(m)).into(),
                    ),
                ],
            }
        })
        .collect();
    let dot = Digraph {
        name: "comma".into(),
        nodes: objects
            .iter()
            .map(|(x, a)| format!("{}: {}", r.object_label(*x), t.render_arrow(a)))
            .collect(),
        edges,
    };
    Ok(CommaSummary {
        lines,
        json,
        ok,
        dot,
    })
}

pub fn comma(ws: &Workspace, opts: &Options) -> DResult<Outcome> {
    let (f, g, span, trans) = match &opts.trans {
        Some(name) => {
            let t = ws.transformation(&flag_name(name))?;
            (t.f.clone(), t.g.clone(), t.span.clone(), Some(t))
        }
        None => match (opts.functor.as_slice(), opts.span.as_slice()) {
            ([f, g], [s]) => (f.clone(), g.clone(), s.clone(), None),
            _ => {
                return Err(usage(
                    "comma needs --trans, or two --functor flags and one --span",
                ))
            }
        },
    };
    let span_v = &ws.span(&flag_name(&span))?.span;
    let summary = match (ws.functor(&flag_name(&f))?, ws.functor(&flag_name(&g))?) {
        (FunctorValue::Set(a), FunctorValue::Set(b)) => {
            let eta = trans.map(|t| match &t.components {
                Components::Set(e) => e.as_slice(),
                Components::Cat(_) => unreachable!("set-valued endpoints"),
            });
            comma_of(&a.functor, &b.functor, span_v, eta, ws.cap)?
        }
        (FunctorValue::Mixed(a), FunctorValue::Mixed(b)) if a.target() == b.target() => {
            let eta = trans.map(|t| match &t.components {
                Components::Cat(e) => e.as_slice(),
                Components::Set(_) => unreachable!("category-valued endpoints"),
            });
            comma_of(a, b, span_v, eta, ws.cap)?
        }
        _ => {
            return Err(usage(
                "both functors must be set-valued or functors of variance into one category",
            ))
        }
    };
    let mut out = Outcome::new(summary.ok, summary.lines, summary.json);
    if opts.dot {
        out.dot = Some(summary.dot.render());
    }
    Ok(out)
}

pub fn enumerate(ws: &Workspace, category: &str) -> DResult<Outcome> {
    let c = ws.category(&flag_name(category))?;
    let en = enumerate_variances(c, ws.cap);
    let mut lines = vec![
        format!(
            "wide subcategories={}{}",
            en.subcategories.len(),
            if en.complete {
                ""
            } else {
                " (incomplete: size cap reached)"
            }
        ),
        format!("variances={}", en.pairs.len()),
    ];
    let mut pairs = Vec::new();
    for &(e, m) in &en.pairs {
        let (es, ms) = (
            en.subcategories[e].morphisms(),
            en.subcategories[m].morphisms(),
        );
        lines.push(format!(
            "|E|={} |M|={} E={} M={}",
            es.len(),
            ms.len(),
            labels(c, &es),
            labels(c, &ms)
        ));
        pairs.push(json!({ "E": labels(c, &es), "M": labels(c, &ms) }));
    }
    let json = json!({
        "subcategories": en.subcategories.len(),
        "complete": en.complete,
        "variances": pairs,
    });
    Ok(Outcome::new(en.complete, lines, json))
}

/// Whether an assertion holds, with a one-line account.
pub fn evaluate(ws: &Workspace, a: &Assertion) -> DResult<(bool, String)> {
    Ok(match a {
        Assertion::Natural { negated, t } => {
            let tv = ws.transformation(t)?;
            let gens = generators(
                ws,
                &tv.span,
                ws.spans
                    .get(&tv.span)
                    .is_some_and(|s| s.partition.is_some()),
            )?;
            let nat = naturality(ws, tv, gens.as_ref())?;
            let r = transformation_span(ws, tv).apex();
            let natural = nat.failures.is_empty();
            let detail = if natural {
                format!("natural, {} morphisms checked", nat.checked.len())
            } else {
                format!("not natural at {}", r.morphism_label(nat.failures[0].mor))
            };
            (natural != *negated, detail)
        }
        Assertion::Mutants { t } => {
            let (total, survivor) = mutants(ws, ws.transformation(t)?)?;
            match survivor {
                None => (true, format!("all {total} single-value changes detected")),
                Some(s) => (false, format!("change {s} is not detected")),
            }
        }
        Assertion::End {
            coend,
            f,
            span,
            size,
        } => {
            let fv = ws.set_functor(f)?;
            let (l, _) = ws.leg(span)?;
            let n = if *coend {
                core(compute_coend(&fv.functor, &l, ws.cap))?.len()
            } else {
                core(compute_end(&fv.functor, &l, None, ws.cap))?.len()
            };
            (n == number(size)?, format!("size {n}"))
        }
        Assertion::Fubini { f, s1, s2, size } => {
            let fv = ws.set_functor(f)?;
            let (l1, _) = ws.leg(s1)?;
            let (l2, _) = ws.leg(s2)?;
            let report = core(fubini_check(&fv.functor, &l1, &l2, ws.cap))?;
            let n = report.total.len();
            let detail = match &report.defect {
                None => format!("size {n} both ways, bijection verified"),
                Some(d) => format!("size {n}, defect: {d}"),
            };
            (report.is_verified() && n == number(size)?, detail)
        }
        Assertion::Extranatural {
            negated,
            p,
            domain,
            codomain,
        } => {
            let pv = ws.partition(p)?;
            let d = domain.iter().map(flag).collect::<DResult<Vec<_>>>()?;
            let c = codomain.iter().map(flag).collect::<DResult<Vec<_>>>()?;
            let holds = is_generalized_extranatural(pv, &d, &c);
            (
                holds != *negated,
                format!(
                    "generalized extranatural: {}",
                    if holds { "yes" } else { "no" }
                ),
            )
        }
        Assertion::Classes { p, classes } => {
            let mut want = classes
                .iter()
                .map(|c| {
                    let mut v = c.iter().map(number).collect::<DResult<Vec<_>>>()?;
                    v.sort();
                    Ok(v)
                })
                .collect::<DResult<Vec<_>>>()?;
            want.sort();
            let mut got: Vec<Vec<usize>> = ws.partition(p)?.classes().0;
            got.iter_mut().for_each(|c| c.sort());
            got.sort();
            let shown: Vec<String> = got
                .iter()
                .map(|c| {
                    format!(
                        "{{{}}}",
                        c.iter()
                            .map(|i| i.to_string())
                            .collect::<Vec<_>>()
                            .join(",")
                    )
                })
                .collect();
            (got == want, format!("classes {}", shown.join(" ")))
        }
        Assertion::Variances { c, count } => {
            let en = enumerate_variances(ws.category(c)?, ws.cap);
            let n = en.pairs.len();
            (en.complete && n == number(count)?, format!("{n} variances"))
        }
        Assertion::Sections { f, g, span, count } => {
            let s = &ws.span(span)?.span;
            let n = match (ws.functor(f)?, ws.functor(g)?) {
                (FunctorValue::Set(a), FunctorValue::Set(b)) => count_sections(
                    &core(build_comma(&a.functor, &b.functor, s, ws.cap))?,
                    ws.cap.0,
                ),
                (FunctorValue::Mixed(a), FunctorValue::Mixed(b)) if a.target() == b.target() => {
                    count_sections(&core(build_comma(a, b, s, ws.cap))?, ws.cap.0)
                }
                _ => {
                    return Err(Diagnostic::new(
                        f.loc,
                        "both functors must be set-valued or share a target",
                    ))
                }
            };
            (n == number(count)?, format!("{n} sections"))
        }
    })
}

fn describe_functor(f: &FunctorValue) -> String {
    let s = f.source();
    let kind = match f {
        FunctorValue::Plain(_) => "functor",
        FunctorValue::Mixed(_) => "functor of variance",
        FunctorValue::Set(_) => "set-valued functor",
    };
    format!(
        "{kind} on {} objects, {} morphisms",
        s.object_count(),
        s.morphism_count()
    )
}

pub fn check(ws: &Workspace) -> DResult<Outcome> {
    let mut lines = Vec::new();
    for (n, c) in ws.categories.iter() {
        lines.push(format!(
            "category {n}: {} objects, {} morphisms",
            c.object_count(),
            c.morphism_count()
        ));
    }
    for (n, v) in ws.variances.iter() {
        lines.push(format!(
            "variance {n}: |E|={} |M|={}",
            v.covariant_part().len(),
            v.contravariant_part().len()
        ));
    }
    for (n, f) in ws.functors.iter() {
        lines.push(format!("{n}: {}", describe_functor(f)));
    }
    for (n, s) in ws.spans.iter() {
        let r = s.span.apex();
        lines.push(format!(
            "span {n}: apex with {} objects, {} morphisms",
            r.object_count(),
            r.morphism_count()
        ));
    }
    for (n, t) in ws.transformations.iter() {
        let gens = generators(
            ws,
            &t.span,
            ws.spans.get(&t.span).is_some_and(|s| s.partition.is_some()),
        )?;
        let nat = naturality(ws, t, gens.as_ref())?;
        lines.push(format!(
            "transformation {n}: {}",
            if nat.failures.is_empty() {
                "natural"
            } else {
                "not natural"
            }
        ));
    }
    let mut failed = 0;
    let mut results = Vec::new();
    for (loc, a) in &ws.assertions {
        let (ok, detail) = evaluate(ws, a).map_err(|d| {
            if d.loc.line == 0 {
                Diagnostic::new(*loc, d.message)
            } else {
                d
            }
        })?;
        if !ok {
            failed += 1;
        }
        lines.push(format!(
            "{loc}: assert {a}: {} ({detail})",
            if ok { "ok" } else { "FAILED" }
        ));
        results.push(
            json!({ "line": loc.line, "assertion": a.to_string(), "ok": ok, "detail": detail }),
        );
    }
    lines.push(format!(
        "{} assertions, {failed} failed",
        ws.assertions.len()
    ));
    let json = json!({
        "categories": ws.categories.len(),
        "variances": ws.variances.len(),
        "functors": ws.functors.len(),
        "spans": ws.spans.len(),
        "transformations": ws.transformations.len(),
        "assertions": results,
        "failed": failed,
    });
    Ok(Outcome::new(failed == 0, lines, json))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::workspace::load;

    #[test]
    fn partition_output() {
        assert_eq!(
            partition("F(x,y,y) -> G(x,x,y)").unwrap().text,
            "{1,4,5} {2,3,6}\n"
        );
        assert_eq!(
            partition("F(x,x,x,y,z) -> G(x,z,z)").unwrap().text,
            "{1,2,3,6} {4} {5,7,8}\n"
        );
    }

    #[test]
    fn sections_of_a_chain_comma() {
        // natural maps between two copies of the 2-chain functor 1 -> 2
        let ws = load(
            "category Two = arrow
             setfunctor F : Two -> Set { obj a => 1 ; obj b => 2 ; mor u => [1] }
             span D = diagonal(Two)
             assert sections F, F along D count 2",
            Cap::default(),
        )
        .unwrap();
        let (ok, detail) = evaluate(&ws, &ws.assertions[0].1).unwrap();
        assert!(ok, "{detail}");
    }
}
