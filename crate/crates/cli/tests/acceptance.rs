//! One line per acceptance criterion. Run with
//! `cargo test -p catv-cli --test acceptance`.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::Arc;
use std::time::{Duration, Instant};

use catv_cli::dsl::{Assertion, Name};
use catv_cli::workspace::{load, Components, FunctorValue, Workspace};
use catv_core::comma::{
    build_comma, build_comma_on, section_to_transformation, transformation_to_section,
    CommaCategory,
};
use catv_core::ends::{
    compute_end, fubini_check, nat_set, oracle_end, oracle_nat_count, parameter_functor,
};
use catv_core::fincat::{product_category, FinCategory, Mor, PlainFunctor};
use catv_core::fixtures::ev::ev_example;
use catv_core::fixtures::random::{
    random_chain_functor, random_family, random_group_mixed, random_gset, random_square_functor,
    times_constant,
};
use catv_core::fixtures::{chain, cyclic, symmetric, variance_catalog, walking_arrow};
use catv_core::mixfun::{
    assemble_covariant, assemble_mixed, external_product, hom_functor, restrict_to_pair,
    validate_mixed_functor, Arrow, VarFunctor,
};
use catv_core::natural::{
    build_span_from_partition, check_dinatural, check_heuristic_naturality, derive_partition,
    first_naturality_failure, to_dinatural, PartitionSpan, Span,
};
use catv_core::target::{FinSet, Function};
use catv_core::variance::{
    check_sfs, check_variance, composite_equation_failures, enumerate_variances, is_group,
    wide_subcategories, WideSubcategory,
};
use catv_core::{Cap, Error as CoreError};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Err(format!($($msg)*));
        }
    };
}

fn cap() -> Cap {
    Cap::default()
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn fixture_paths() -> Vec<PathBuf> {
    let mut out: Vec<PathBuf> = std::fs::read_dir(root().join("fixtures"))
        .expect("fixtures directory")
        .map(|e| e.expect("entry").path())
        .filter(|p| p.extension().is_some_and(|e| e == "catv"))
        .collect();
    out.sort();
    out
}

fn fixture_workspaces() -> Result<Vec<(String, Workspace)>, String> {
    fixture_paths()
        .into_iter()
        .map(|p| {
            let text = std::fs::read_to_string(&p).map_err(err)?;
            let file = format!("fixtures/{}", p.file_name().unwrap().to_string_lossy());
            let ws = load(&text, cap()).map_err(|d| format!("{file}:{d}"))?;
            Ok((file, ws))
        })
        .collect()
}

fn name(s: &str) -> Name {
    Name {
        text: s.to_string(),
        loc: Default::default(),
    }
}

fn catv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_catv"))
        .args(args)
        .current_dir(root())
        .output()
        .expect("catv runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn within(start: Instant, limit: u64) -> Result<Duration, String> {
    let t = start.elapsed();
    ensure!(
        t < Duration::from_secs(limit),
        "took {t:.1?}, limit {limit} s"
    );
    Ok(t)
}

fn klein() -> Result<Arc<FinCategory>, String> {
    let z2 = Arc::new(cyclic(2));
    let p = product_category(&[z2.clone(), z2], cap()).map_err(err)?;
    Ok(Arc::new(FinCategory::from_raw(&p.to_raw()).map_err(err)?))
}

fn diagonal(c: &Arc<FinCategory>) -> Result<PlainFunctor, String> {
    PlainFunctor::diagonal(c, 2, cap()).map_err(err)
}

fn partition_span(expr: &str, c: &Arc<FinCategory>) -> Result<PartitionSpan, String> {
    let pattern = derive_partition(expr).map_err(err)?;
    let (i, j) = pattern.arity();
    let p = pattern
        .bind(&vec![c.clone(); i], &vec![c.clone(); j])
        .map_err(err)?;
    build_span_from_partition(&p, cap()).map_err(err)
}

fn s4_variances() -> Check {
    let start = Instant::now();
    let s4 = Arc::new(symmetric(4));
    let en = enumerate_variances(&s4, cap());
    ensure!(en.complete, "enumeration hit the size cap");
    let of_order = |k: usize| {
        en.subcategories
            .iter()
            .filter(|s| s.len() == k)
            .collect::<Vec<_>>()
    };
    let (eights, threes) = (of_order(8), of_order(3));
    ensure!(
        eights.len() == 3 && threes.len() == 4,
        "{} subgroups of order 8, {} of order 3",
        eights.len(),
        threes.len()
    );
    let mut pairs = 0;
    for e in &eights {
        for m in &threes {
            ensure!(
                check_variance(e, m).map_err(err)?.is_variance(),
                "an (E, M) pair is not a variance"
            );
            pairs += 1;
        }
    }
    ensure!(
        eights.iter().chain(&threes).all(|s| !s.is_normal()),
        "one of the subgroups is normal"
    );
    let t = within(start, 10)?;
    Ok(format!(
        "{} subgroups, {pairs} pairs of orders 8 and 3 are variances, none normal, {} variances in all, {t:.1?}",
        en.subcategories.len(),
        en.pairs.len()
    ))
}

fn factorization_identities() -> Check {
    let mut variances = variance_catalog();
    for (file, ws) in fixture_workspaces()? {
        for (n, v) in ws.variances.iter() {
            variances.push((format!("{file}:{n}"), v.clone()));
        }
    }
    // {0,2} twice on Z4 is not a factorization system, so it is left out
    let z4 = Arc::new(cyclic(4));
    let half = WideSubcategory::generated(z4, &[2]).map_err(err)?;
    ensure!(
        !check_sfs(&half, &half).map_err(err)?.is_sfs(),
        "Z4 with {{0,2}} twice was accepted"
    );
    let mut pairs = 0;
    for (n, v) in &variances {
        let failures = composite_equation_failures(v);
        ensure!(
            failures.is_empty(),
            "{n}: {} composable pairs fail",
            failures.len()
        );
        pairs += v.owner().composable_pair_count();
    }
    Ok(format!(
        "{} variances, all {pairs} composable pairs",
        variances.len()
    ))
}

fn small_groups() -> Result<Vec<(String, Arc<FinCategory>)>, String> {
    let mut out: Vec<(String, Arc<FinCategory>)> = (1..=12)
        .map(|n| (format!("Z{n}"), Arc::new(cyclic(n))))
        .collect();
    out.push(("S3".into(), Arc::new(symmetric(3))));
    out.push(("S4".into(), Arc::new(symmetric(4))));
    out.push(("Z24".into(), Arc::new(cyclic(24))));
    out.push(("Z2xZ2".into(), klein()?));
    Ok(out)
}

fn groupoid_promotion() -> Check {
    let groups = small_groups()?;
    let mut sfs = 0;
    for (n, g) in &groups {
        let (subs, complete) = wide_subcategories(g, cap());
        ensure!(complete, "{n}: subgroup enumeration incomplete");
        for e in &subs {
            for m in &subs {
                if check_sfs(e, m).map_err(err)?.is_sfs() {
                    sfs += 1;
                    ensure!(
                        check_variance(e, m).map_err(err)?.is_variance(),
                        "{n}: a counterexample"
                    );
                }
            }
        }
    }
    Ok(format!(
        "{} groups, {sfs} factorization systems, 0 counterexamples",
        groups.len()
    ))
}

fn decomposition() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(91);
    let groups: Vec<_> = variance_catalog()
        .into_iter()
        .filter(|(_, v)| is_group(v.owner()))
        .collect();
    let c3 = Arc::new(chain(3));
    for round in 0..200 {
        let f = match round % 3 {
            0 => {
                let (_, v) = &groups[rng.gen_range(0..groups.len())];
                random_group_mixed(&mut rng, v, 3)
            }
            1 => random_square_functor(&mut rng, 3),
            _ => random_chain_functor(&mut rng, &c3, 4),
        };
        let pair = restrict_to_pair(&f).map_err(err)?;
        let back = assemble_mixed(&pair).map_err(err)?;
        ensure!(
            back == f,
            "round {round}: assembling the restriction changed the functor"
        );
        ensure!(
            restrict_to_pair(&back).map_err(err)? == pair,
            "round {round}: restricting the assembly changed the pair"
        );
    }
    let catalog = variance_catalog();
    for (n, v) in &catalog {
        let (_, e) = v.covariant_part().as_category().map_err(err)?;
        let (_, m) = v.contravariant_part().as_category().map_err(err)?;
        let id = assemble_covariant(v, &e, &m).map_err(err)?;
        ensure!(
            id == PlainFunctor::identity(v.owner().clone()),
            "{n}: inclusions do not give the identity"
        );
    }
    Ok(format!(
        "200 round trips, inclusions give the identity on {} variances",
        catalog.len()
    ))
}

fn partition_derivation() -> Check {
    for (expr, want) in [
        ("F(x,y,y) -> G(x,x,y)", "{1,4,5} {2,3,6}\n"),
        ("F(x,x,x,y,z) -> G(x,z,z)", "{1,2,3,6} {4} {5,7,8}\n"),
    ] {
        let out = catv(&["partition", expr]);
        ensure!(
            out.status.code() == Some(0),
            "{expr}: exit code {:?}",
            out.status.code()
        );
        ensure!(stdout(&out) == want, "{expr}: printed {:?}", stdout(&out));
    }
    let classes = derive_partition("F(x,x,x,y,z) -> G(x,z,z)")
        .map_err(err)?
        .classes();
    ensure!(
        classes.0 == vec![vec![1, 2, 3, 6], vec![4], vec![5, 7, 8]],
        "library classes {:?}",
        classes.0
    );
    Ok("both expressions print the expected classes".into())
}

fn ev_naturality() -> Check {
    let start = Instant::now();
    let ex = ev_example(cap()).map_err(err)?;
    let span = &ex.partition.span;
    let report = check_heuristic_naturality(&ex.f, &ex.g, span, &ex.eta, None).map_err(err)?;
    ensure!(
        report.is_natural(),
        "ev fails at {} morphisms",
        report.failures.len()
    );
    let mutations = ex.mutations();
    for m in &mutations {
        let bad = ex.mutated(*m);
        let witness =
            first_naturality_failure(&ex.f, &ex.g, span, &bad, Some(&ex.touching(m.component)))
                .map_err(err)?;
        match witness {
            Some(w) => ensure!(w.upper != w.lower, "{m:?}: witness sides agree"),
            None => return Err(format!("{m:?} is not caught")),
        }
    }
    let t = within(start, 30)?;
    Ok(format!(
        "{} morphisms checked, all {} mutations caught with a witness, {t:.1?}",
        report.checked,
        mutations.len()
    ))
}

fn power(c: &FinCategory, h: Mor, k: usize) -> Mor {
    (0..k).fold(c.identity(c.dom(h)), |acc, _| {
        c.compose(h, acc).expect("an endomorphism")
    })
}

/// One value of one component moved.
fn mutate(rng: &mut impl Rng, eta: &[Function]) -> Vec<Function> {
    let mut out = eta.to_vec();
    let candidates: Vec<usize> = (0..out.len())
        .filter(|&x| out[x].dom() > 0 && out[x].cod() > 1)
        .collect();
    if candidates.is_empty() {
        return out;
    }
    let x = candidates[rng.gen_range(0..candidates.len())];
    let mut values = out[x].values().to_vec();
    let k = rng.gen_range(0..values.len());
    values[k] = (values[k] + rng.gen_range(1..out[x].cod())) % out[x].cod();
    out[x] = Function::new(out[x].cod(), values).expect("in range");
    out
}

fn dinatural_equivalence() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(92);
    let s3 = Arc::new(symmetric(3));
    let c3 = Arc::new(chain(3));
    let (mut yes, mut no) = (0, 0);
    for (c, expr) in [
        (&s3, "F(x,x) -> G(x,x)"),
        (&c3, "F(x,x) -> G(x,x)"),
        (&c3, "F(x,y) -> G(x,y)"),
        (&s3, "F(x,y) -> G(x,y)"),
    ] {
        let hom = hom_functor(c, cap()).map_err(err)?;
        let ps = partition_span(expr, c)?;
        let r = ps.span.apex().clone();
        for k in [1, 2] {
            let g = times_constant(&hom, k);
            let form = to_dinatural(&hom, &g, &ps.span, cap()).map_err(err)?;
            for p in 0..6 {
                // h |-> h^p on endomorphisms, a copy index per component
                let powers: Vec<Function> = (0..r.object_count())
                    .map(|x| {
                        let (a, b) = (ps.span.left().object(x), ps.span.right().object(x));
                        let tag = rng.gen_range(0..k);
                        let ends = hom.source().split_object(a);
                        Function::from_fn(hom.object(a), g.object(b), |i| {
                            let h = c.hom(ends[0], ends[1])[i];
                            let image = if ends[0] == ends[1] {
                                power(c, h, p)
                            } else {
                                h
                            };
                            c.hom_position(image) * k + tag
                        })
                    })
                    .collect();
                let changed = mutate(&mut rng, &powers);
                for eta in [powers, changed, random_family(&mut rng, &hom, &g, &ps.span)] {
                    let heuristic = check_heuristic_naturality(&hom, &g, &ps.span, &eta, None)
                        .map_err(err)?
                        .is_natural();
                    let dinatural = check_dinatural(&form, &eta).map_err(err)?.is_empty();
                    ensure!(heuristic == dinatural, "{expr}: the checkers disagree");
                    if heuristic {
                        yes += 1;
                    } else {
                        no += 1;
                    }
                }
            }
        }
    }
    ensure!(yes + no >= 100, "only {} families", yes + no);
    ensure!(yes > 0 && no > 0, "{yes} natural, {no} not");
    Ok(format!(
        "{} families agree, {yes} natural and {no} not",
        yes + no
    ))
}

fn ends() -> Check {
    let mut centers = Vec::new();
    for (c, want) in [
        (Arc::new(symmetric(3)), 1),
        (Arc::new(cyclic(4)), 4),
        (klein()?, 4),
    ] {
        let hom = hom_functor(&c, cap()).map_err(err)?;
        let l = diagonal(&c)?;
        let end = compute_end(&hom, &l, None, cap()).map_err(err)?;
        ensure!(
            end.len() == want,
            "end of Hom over a group of order {}: {}",
            c.morphism_count(),
            end.len()
        );
        ensure!(
            end.tuples == oracle_end(&hom, &l, cap()).map_err(err)?,
            "center disagrees with the oracle"
        );
        centers.push(end.len().to_string());
    }
    let mut instances = 0;
    for (file, ws) in fixture_workspaces()? {
        for (_, a) in &ws.assertions {
            let (f, legs) = match a {
                Assertion::End {
                    coend: false,
                    f,
                    span,
                    ..
                } => (f, vec![span]),
                Assertion::Fubini { f, s1, s2, .. } => (f, vec![s1, s2]),
                _ => continue,
            };
            let fv = ws.set_functor(f).map_err(err)?;
            let legs = legs
                .iter()
                .map(|s| ws.leg(s).map(|l| l.0))
                .collect::<Result<Vec<_>, _>>()
                .map_err(err)?;
            let l = match legs.as_slice() {
                [l] => l.clone(),
                ls => PlainFunctor::product(&ls.iter().collect::<Vec<_>>(), cap()).map_err(err)?,
            };
            let end = compute_end(&fv.functor, &l, None, cap()).map_err(err)?;
            ensure!(
                end.tuples == oracle_end(&fv.functor, &l, cap()).map_err(err)?,
                "{file}: {a} disagrees"
            );
            instances += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(93);
    let (c3, z3) = (Arc::new(chain(3)), Arc::new(cyclic(3)));
    for round in 0..60 {
        let (f, g) = if round % 2 == 0 {
            (
                random_chain_functor(&mut rng, &c3, 3),
                random_chain_functor(&mut rng, &c3, 3),
            )
        } else {
            (random_gset(&mut rng, &z3, 2), random_gset(&mut rng, &z3, 2))
        };
        let n = nat_set(&f, &g, cap()).map_err(err)?.len();
        let want = oracle_nat_count(&f, &g, cap()).map_err(err)?;
        ensure!(
            n == want,
            "round {round}: nat_set has {n}, brute force {want}"
        );
    }
    Ok(format!(
        "centers {}, {instances} fixture ends match the oracle, 60 random nat_set counts match",
        centers.join("/")
    ))
}

/// `None` when the unrestricted end is over the size cap.
fn weakening_agrees<F: VarFunctor<Target = FinSet>>(
    f: &F,
    ps: &PartitionSpan,
) -> Result<Option<bool>, String> {
    let gens = ps.single_class_generators();
    let full = match compute_end(f, ps.span.left(), None, cap()) {
        Ok(e) => e,
        Err(CoreError::SizeCap { .. }) => return Ok(None),
        Err(e) => return Err(err(e)),
    };
    let weak = compute_end(f, ps.span.left(), Some(&gens), cap()).map_err(err)?;
    Ok(Some(full.tuples == weak.tuples))
}

fn generating_subgraph() -> Check {
    let (mut instances, mut over_cap) = (0, 0);
    for (file, ws) in fixture_workspaces()? {
        for (sname, s) in ws.spans.iter() {
            let Some(ps) = &s.partition else { continue };
            for (fname, fv) in ws.functors.iter() {
                let FunctorValue::Set(fv) = fv else { continue };
                if fv.functor.source() != ps.span.left().target() {
                    continue;
                }
                match weakening_agrees(&fv.functor, ps)? {
                    Some(agree) => ensure!(agree, "{file}: end of {fname} along {sname}"),
                    None => {
                        over_cap += 1;
                        continue;
                    }
                }
                instances += 1;
            }
        }
    }
    for c in [
        Arc::new(symmetric(3)),
        Arc::new(chain(3)),
        Arc::new(cyclic(4)),
    ] {
        let hom = hom_functor(&c, cap()).map_err(err)?;
        let doubled = times_constant(&hom, 2);
        for expr in ["F(x,x) -> G(x)", "F(x,y) -> G(x)", "F(x,y) -> G(y,x)"] {
            let ps = partition_span(expr, &c)?;
            for f in [&hom, &doubled] {
                ensure!(
                    weakening_agrees(f, &ps)? == Some(true),
                    "{expr}: the restricted end differs"
                );
                instances += 1;
            }
        }
    }
    Ok(format!(
        "{instances} product-span instances agree, {over_cap} fixture instances over the size cap"
    ))
}

fn parameter_and_fubini() -> Check {
    let start = Instant::now();
    let mut fixture_legs = 0;
    for (file, ws) in fixture_workspaces()? {
        for (_, a) in &ws.assertions {
            let Assertion::Fubini { f, s1, s2, .. } = a else {
                continue;
            };
            let fv = ws.set_functor(f).map_err(err)?;
            let (l1, _) = ws.leg(s1).map_err(err)?;
            let (l2, _) = ws.leg(s2).map_err(err)?;
            let p = parameter_functor(&fv.functor, &l1, cap()).map_err(err)?;
            ensure!(
                validate_mixed_functor(&p.functor).is_empty(),
                "{file}: {a}: parameter functor invalid"
            );
            let report = fubini_check(&fv.functor, &l1, &l2, cap()).map_err(err)?;
            ensure!(report.is_verified(), "{file}: {a}: {:?}", report.defect);
            fixture_legs += 1;
        }
    }
    let s3 = Arc::new(symmetric(3));
    let z4 = Arc::new(cyclic(4));
    let f = external_product(
        &hom_functor(&s3, cap()).map_err(err)?,
        &hom_functor(&z4, cap()).map_err(err)?,
        cap(),
    )
    .map_err(err)?;
    let report = fubini_check(&f, &diagonal(&s3)?, &diagonal(&z4)?, cap()).map_err(err)?;
    ensure!(report.is_verified(), "S3 x Z4: {:?}", report.defect);
    ensure!(
        report.total.len() == 4 && report.iterated.len() == 4,
        "S3 x Z4: {} and {}",
        report.total.len(),
        report.iterated.len()
    );
    ensure!(
        validate_mixed_functor(&report.parameter.functor).is_empty(),
        "S3 x Z4 parameter functor invalid"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(94);
    let two = Arc::new(walking_arrow());
    let (c3, z3) = (Arc::new(chain(3)), Arc::new(cyclic(3)));
    for round in 0..50 {
        let (f, l1, l2) = match round % 3 {
            0 => (
                random_square_functor(&mut rng, 3),
                PlainFunctor::identity(two.clone()),
                PlainFunctor::identity(two.clone()),
            ),
            1 => (
                external_product(
                    &random_chain_functor(&mut rng, &c3, 3),
                    &random_gset(&mut rng, &z3, 2),
                    cap(),
                )
                .map_err(err)?,
                PlainFunctor::identity(c3.clone()),
                PlainFunctor::identity(z3.clone()),
            ),
            _ => {
                let hom = hom_functor(&s3, cap()).map_err(err)?;
                let sq = random_square_functor(&mut rng, 2);
                let l1 = PlainFunctor::identity(sq.source().clone());
                (
                    external_product(&sq, &hom, cap()).map_err(err)?,
                    l1,
                    diagonal(&s3)?,
                )
            }
        };
        let report = fubini_check(&f, &l1, &l2, cap()).map_err(err)?;
        ensure!(report.is_verified(), "round {round}: {:?}", report.defect);
        ensure!(
            validate_mixed_functor(&report.parameter.functor).is_empty(),
            "round {round}: parameter functor invalid"
        );
    }
    let t = within(start, 60)?;
    Ok(format!(
        "{fixture_legs} fixture Fubini instances verified, S3 x Z4 size 4 both ways, 50 random bijections, {t:.1?}"
    ))
}

/// The comma category, restricted to `eta` when the full one is over the cap.
fn comma_for<F, G>(
    f: &F,
    g: &G,
    span: &Span,
    eta: &[Arrow<F::Target>],
) -> Result<CommaCategory<Arrow<F::Target>>, String>
where
    F: VarFunctor,
    G: VarFunctor<Target = F::Target>,
{
    let cc = match build_comma(f, g, span, cap()) {
        Ok(cc) => cc,
        Err(_) => {
            let candidates = eta.iter().map(|a| vec![a.clone()]).collect();
            build_comma_on(f, g, span, candidates, cap()).map_err(err)?
        }
    };
    ensure!(
        cc.forgetful().is_faithful(),
        "the forgetful functor is not faithful"
    );
    Ok(cc)
}

/// Checks the section round trip against the heuristic checker.
fn section_round_trip<F, G>(
    cc: &CommaCategory<Arrow<F::Target>>,
    f: &F,
    g: &G,
    span: &Span,
    eta: &[Arrow<F::Target>],
) -> Result<bool, String>
where
    F: VarFunctor,
    G: VarFunctor<Target = F::Target>,
    F::Target: PartialEq,
{
    let natural = check_heuristic_naturality(f, g, span, eta, None)
        .map_err(err)?
        .is_natural();
    match transformation_to_section(cc, eta) {
        Ok(s) => {
            ensure!(natural, "a non-natural family gave a section");
            ensure!(
                section_to_transformation(cc, &s).map_err(err)? == eta,
                "the round trip changed the family"
            );
        }
        Err(_) => ensure!(!natural, "a natural family gave no section"),
    }
    Ok(natural)
}

fn comma_round_trip<F, G>(
    f: &F,
    g: &G,
    span: &Span,
    eta: &[Arrow<F::Target>],
) -> Result<bool, String>
where
    F: VarFunctor,
    G: VarFunctor<Target = F::Target>,
    F::Target: PartialEq,
{
    section_round_trip(&comma_for(f, g, span, eta)?, f, g, span, eta)
}

/// Every family `F L1 x -> G L2 x`.
fn all_families<F, G>(f: &F, g: &G, span: &Span) -> Vec<Vec<Function>>
where
    F: VarFunctor<Target = FinSet>,
    G: VarFunctor<Target = FinSet>,
{
    let mut out = vec![Vec::new()];
    for x in 0..span.apex().object_count() {
        let (a, b) = (
            f.object(span.left().object(x)),
            g.object(span.right().object(x)),
        );
        let choices = b.pow(a as u32);
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..choices).map(move |k| {
                    let mut v = prefix.clone();
                    v.push(Function::from_rank(a, b, k));
                    v
                })
            })
            .collect();
    }
    out
}

fn comma_bijection() -> Check {
    let (mut fixtures, mut natural) = (0, 0);
    for (file, ws) in fixture_workspaces()? {
        for (tname, t) in ws.transformations.iter() {
            let span = &ws.span(&name(&t.span)).map_err(err)?.span;
            let ok = match (&t.components, ws.functors.get(&t.f), ws.functors.get(&t.g)) {
                (Components::Set(eta), Some(FunctorValue::Set(a)), Some(FunctorValue::Set(b))) => {
                    comma_round_trip(&a.functor, &b.functor, span, eta)
                }
                (
                    Components::Cat(eta),
                    Some(FunctorValue::Mixed(a)),
                    Some(FunctorValue::Mixed(b)),
                ) => comma_round_trip(a, b, span, eta),
                _ => Err("unexpected endpoints".into()),
            }
            .map_err(|e| format!("{file}: {tname}: {e}"))?;
            let out = catv(&["comma", &file, "--trans", tname]);
            let text = stdout(&out);
            if ok {
                ensure!(
                    out.status.code() == Some(0) && text.contains("round trip ok"),
                    "catv comma {file} --trans {tname}: {text:?}"
                );
                natural += 1;
            } else {
                ensure!(
                    out.status.code() == Some(1) && text.contains("section: no"),
                    "catv comma {file} --trans {tname}: {text:?}"
                );
            }
            fixtures += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(95);
    let c3 = Arc::new(chain(3));
    let z3 = Arc::new(cyclic(3));
    let mut families = 0;
    for round in 0..20 {
        let (f, g, span) = if round % 2 == 0 {
            (
                random_chain_functor(&mut rng, &c3, 2),
                random_chain_functor(&mut rng, &c3, 2),
                Span::diagonal(&c3),
            )
        } else {
            (
                random_gset(&mut rng, &z3, 2),
                random_gset(&mut rng, &z3, 2),
                Span::diagonal(&z3),
            )
        };
        let cc = build_comma(&f, &g, &span, cap()).map_err(err)?;
        ensure!(
            cc.forgetful().is_faithful(),
            "the forgetful functor is not faithful"
        );
        for eta in all_families(&f, &g, &span) {
            section_round_trip(&cc, &f, &g, &span, &eta)?;
            families += 1;
        }
    }
    ensure!(fixtures > 0, "no fixture transformations");
    Ok(format!(
        "{fixtures} fixture transformations ({natural} natural), {families} exhaustive random families"
    ))
}

/// `f = f^m f^e` and `f = f_e f_m` by search over `E x M`.
fn factor_oracle(c: &FinCategory, e: &[Mor], m: &[Mor], f: Mor) -> String {
    let find = |outer: &[Mor], inner: &[Mor]| {
        outer
            .iter()
            .flat_map(|&a| inner.iter().map(move |&b| (a, b)))
            .find(|&(a, b)| c.compose(a, b) == Some(f))
            .expect("a factorization")
    };
    let (fm, fe) = find(m, e);
    let (ge, gm) = find(e, m);
    let l = |x: Mor| c.morphism_label(x);
    format!(
        "f = {}\nf^e = {}\nf^m = {}\nf_m = {}\nf_e = {}\nf_s = {}\nf_t = {}\n",
        l(f),
        l(fe),
        l(fm),
        l(gm),
        l(ge),
        c.object_label(c.cod(gm)),
        c.object_label(c.cod(fe))
    )
}

fn cli() -> Check {
    let paths = fixture_paths();
    for p in &paths {
        let out = catv(&["check", &p.to_string_lossy()]);
        ensure!(
            out.status.code() == Some(0),
            "catv check {} exited {:?}: {}{}",
            p.display(),
            out.status.code(),
            stdout(&out),
            String::from_utf8_lossy(&out.stderr)
        );
    }

    let out = catv(&["partition", "F(x,y,y) -> G(x,x,y)"]);
    ensure!(
        out.status.code() == Some(0) && stdout(&out) == "{1,4,5} {2,3,6}\n",
        "partition printed {:?}",
        stdout(&out)
    );

    let s4 = Arc::new(symmetric(4));
    let lab = |s: &str| s4.find_morphism(s).expect("a permutation");
    let e = WideSubcategory::generated(s4.clone(), &[lab("(1324)"), lab("(12)")]).map_err(err)?;
    let m = WideSubcategory::generated(s4.clone(), &[lab("(123)")]).map_err(err)?;
    let expected = factor_oracle(&s4, &e.morphisms(), &m.morphisms(), lab("(1234)"));
    let out = catv(&[
        "factor",
        "fixtures/s4.catv",
        "--variance",
        "V",
        "--mor",
        "(1234)",
    ]);
    ensure!(
        out.status.code() == Some(0) && stdout(&out) == expected,
        "factor printed {:?}, expected {expected:?}",
        stdout(&out)
    );

    let s3 = Arc::new(symmetric(3));
    let expected = format!("size=1\n({})\n", s3.morphism_label(s3.identity(0)));
    let out = catv(&[
        "end",
        "fixtures/s3hom.catv",
        "--functor",
        "Hom",
        "--span",
        "Diag",
    ]);
    ensure!(
        out.status.code() == Some(0) && stdout(&out) == expected,
        "end printed {:?}, expected {expected:?}",
        stdout(&out)
    );
    Ok(format!(
        "{} fixtures check with exit code 0, 3 examples match byte for byte",
        paths.len()
    ))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("S4 variance suite", s4_variances),
        ("factorization identities", factorization_identities),
        ("groupoid promotion", groupoid_promotion),
        ("decomposition round trips", decomposition),
        ("partition derivation", partition_derivation),
        ("evaluation naturality", ev_naturality),
        ("dinatural equivalence", dinatural_equivalence),
        ("ends", ends),
        ("generating-subgraph weakening", generating_subgraph),
        ("parameter functor and Fubini", parameter_and_fubini),
        ("comma bijection", comma_bijection),
        ("CLI", cli),
    ];
    let mut failed = 0;
    for (label, run) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let t = start.elapsed();
        match result {
            Ok(detail) => println!("[PASS] {label}: {detail} ({t:.1?})"),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {label}: {why} ({t:.1?})");
            }
        }
    }
    println!(
        "{} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
