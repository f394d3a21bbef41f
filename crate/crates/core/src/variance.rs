//! Strict factorization systems and variances.
//!
//! A [`VarianceStruct`] stores, for each morphism `f`, both factorizations
//! `f = f^m . f^e` (terminating) and `f = f_e . f_m` (starting) together with
//! the middle objects `f_t` and `f_s`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fincat::{
    path_components, product_category, subcategory, FinCategory, Mor, Obj, PlainFunctor,
};
use crate::Cap;

/// A set of morphisms containing every identity and closed under
/// composition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WideSubcategory {
    owner: Arc<FinCategory>,
    member: Vec<bool>,
}

impl WideSubcategory {
    /// Validate an explicit morphism set; identities must be listed.
    pub fn new(owner: Arc<FinCategory>, morphisms: &[Mor]) -> Result<WideSubcategory> {
        let mut member = vec![false; owner.morphism_count()];
        for &f in morphisms {
            if f >= member.len() {
                return Err(Error::OutOfRange {
                    what: "morphism",
                    index: f,
                    limit: member.len(),
                });
            }
            member[f] = true;
        }
        WideSubcategory::from_members(owner, member)
    }

    /// Like [`WideSubcategory::new`] with all identities added.
    pub fn with_identities(owner: Arc<FinCategory>, morphisms: &[Mor]) -> Result<WideSubcategory> {
        let mut all: Vec<Mor> = (0..owner.object_count())
            .map(|x| owner.identity(x))
            .collect();
        all.extend_from_slice(morphisms);
        WideSubcategory::new(owner, &all)
    }

    /// Smallest wide subcategory containing `generators`.
    pub fn generated(owner: Arc<FinCategory>, generators: &[Mor]) -> Result<WideSubcategory> {
        if let Some(&f) = generators.iter().find(|&&f| f >= owner.morphism_count()) {
            return Err(Error::OutOfRange {
                what: "morphism",
                index: f,
                limit: owner.morphism_count(),
            });
        }
        let mut member = vec![false; owner.morphism_count()];
        for x in 0..owner.object_count() {
            member[owner.identity(x)] = true;
        }
        close_under_composition(&owner, &mut member, generators);
        Ok(WideSubcategory { owner, member })
    }

    pub fn from_members(owner: Arc<FinCategory>, member: Vec<bool>) -> Result<WideSubcategory> {
        if member.len() != owner.morphism_count() {
            return Err(Error::Shape {
                expected: format!("{} membership flags", owner.morphism_count()),
                found: member.len().to_string(),
            });
        }
        if let Some(x) = (0..owner.object_count()).find(|&x| !member[owner.identity(x)]) {
            return Err(Error::NotWide {
                which: "wide subcategory",
                object: x,
            });
        }
        for f in (0..member.len()).filter(|&f| member[f]) {
            for &g in owner.outgoing(owner.cod(f)).iter() {
                if member[g] && !member[owner.compose(g, f).expect("composable")] {
                    return Err(Error::NotClosed {
                        which: "wide subcategory",
                        g,
                        f,
                    });
                }
            }
        }
        Ok(WideSubcategory { owner, member })
    }

    pub fn all(owner: Arc<FinCategory>) -> WideSubcategory {
        WideSubcategory {
            member: vec![true; owner.morphism_count()],
            owner,
        }
    }

    pub fn identities(owner: Arc<FinCategory>) -> WideSubcategory {
        let mut member = vec![false; owner.morphism_count()];
        for x in 0..owner.object_count() {
            member[owner.identity(x)] = true;
        }
        WideSubcategory { owner, member }
    }

    pub fn owner(&self) -> &Arc<FinCategory> {
        &self.owner
    }

    pub fn contains(&self, f: Mor) -> bool {
        self.member[f]
    }

    pub fn members(&self) -> &[bool] {
        &self.member
    }

    /// Morphisms in ascending order.
    pub fn morphisms(&self) -> Vec<Mor> {
        (0..self.member.len()).filter(|&f| self.member[f]).collect()
    }

    pub fn len(&self) -> usize {
        self.member.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The subcategory as a category in its own right, with its inclusion.
    pub fn as_category(&self) -> Result<(Arc<FinCategory>, PlainFunctor)> {
        subcategory(&self.owner, &self.morphisms())
    }

    /// Stable under conjugation. Only meaningful when the owner is a group.
    pub fn is_normal(&self) -> bool {
        let c = &*self.owner;
        if c.object_count() != 1 {
            return false;
        }
        let inverse = |g: Mor| {
            (0..c.morphism_count()).find(|&h| c.is_identity(c.compose(h, g).expect("one object")))
        };
        (0..c.morphism_count()).all(|g| match inverse(g) {
            Some(gi) => self
                .morphisms()
                .into_iter()
                .all(|s| self.member[c.compose_path(&[g, s, gi]).expect("one object")]),
            None => false,
        })
    }
}

fn close_under_composition(c: &FinCategory, member: &mut [bool], seeds: &[Mor]) {
    let mut queue: Vec<Mor> = Vec::new();
    for &f in seeds {
        if !member[f] {
            member[f] = true;
            queue.push(f);
        }
    }
    while let Some(f) = queue.pop() {
        // f on the right of existing members, and on the left
        let mut fresh = Vec::new();
        for &g in c.outgoing(c.cod(f)).iter() {
            if member[g] {
                fresh.push(c.compose(g, f).expect("composable"));
            }
        }
        for h in (0..member.len()).filter(|&h| member[h] && c.cod(h) == c.dom(f)) {
            fresh.push(c.compose(f, h).expect("composable"));
        }
        for h in fresh {
            if !member[h] {
                member[h] = true;
                queue.push(h);
            }
        }
    }
}

/// Morphisms that do not factor exactly once.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SfsReport {
    /// `(f, number of factorizations)` for every `f` with a count other than 1
    pub failures: Vec<(Mor, usize)>,
}

impl SfsReport {
    pub fn is_sfs(&self) -> bool {
        self.failures.is_empty()
    }
}

fn same_owner(e: &WideSubcategory, m: &WideSubcategory) -> Result<()> {
    if e.owner != m.owner {
        return Err(Error::Shape {
            expected: "subcategories of one category".into(),
            found: "different owners".into(),
        });
    }
    Ok(())
}

/// Every factorization `f = m . e` with `e` in `first`, `m` in `second`, as
/// `(f, e, m)`.
fn factorizations(first: &WideSubcategory, second: &WideSubcategory) -> Vec<(Mor, Mor, Mor)> {
    let c = &*first.owner;
    crate::par::flat_map(c.morphism_count(), |e| {
        if !first.member[e] {
            return Vec::new();
        }
        c.outgoing(c.cod(e))
            .iter()
            .filter(|&&m| second.member[m])
            .map(|&m| (c.compose(m, e).expect("composable"), e, m))
            .collect()
    })
}

fn count_factorizations(
    first: &WideSubcategory,
    second: &WideSubcategory,
) -> (Vec<usize>, Vec<(Mor, Mor)>) {
    let n = first.owner.morphism_count();
    let mut count = vec![0; n];
    let mut witness = vec![(usize::MAX, usize::MAX); n];
    for (f, e, m) in factorizations(first, second) {
        count[f] += 1;
        witness[f] = (e, m);
    }
    (count, witness)
}

/// Check that each morphism is `m . e` for exactly one `e` in `e_sub` and
/// `m` in `m_sub`.
pub fn check_sfs(e_sub: &WideSubcategory, m_sub: &WideSubcategory) -> Result<SfsReport> {
    same_owner(e_sub, m_sub)?;
    let (count, _) = count_factorizations(e_sub, m_sub);
    Ok(SfsReport {
        failures: count
            .into_iter()
            .enumerate()
            .filter(|&(_, k)| k != 1)
            .collect(),
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VarianceReport {
    /// `(E, M)` direction
    pub forward: SfsReport,
    /// `(M, E)` direction
    pub backward: SfsReport,
}

impl VarianceReport {
    pub fn is_variance(&self) -> bool {
        self.forward.is_sfs() && self.backward.is_sfs()
    }
}

pub fn check_variance(e_sub: &WideSubcategory, m_sub: &WideSubcategory) -> Result<VarianceReport> {
    Ok(VarianceReport {
        forward: check_sfs(e_sub, m_sub)?,
        backward: check_sfs(m_sub, e_sub)?,
    })
}

/// Both factorizations of one morphism.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Factorization {
    /// `f^e`, first leg of `f = f^m . f^e`
    pub term_e: Mor,
    /// `f^m`
    pub term_m: Mor,
    /// `f_m`, first leg of `f = f_e . f_m`
    pub start_m: Mor,
    /// `f_e`
    pub start_e: Mor,
    /// `f_s = cod f_m`
    pub start_obj: Obj,
    /// `f_t = cod f^e`
    pub term_obj: Obj,
}

/// A validated variance with its factorization table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarianceStruct {
    e: WideSubcategory,
    m: WideSubcategory,
    table: Vec<Factorization>,
    /// 0/1 per factor when built as an index-variance
    flags: Option<Vec<u8>>,
    /// factor variances when built as a product
    factors: Option<Vec<Arc<VarianceStruct>>>,
}

pub fn build_variance(e_sub: WideSubcategory, m_sub: WideSubcategory) -> Result<VarianceStruct> {
    same_owner(&e_sub, &m_sub)?;
    let (count_em, term) = count_factorizations(&e_sub, &m_sub);
    let (count_me, start) = count_factorizations(&m_sub, &e_sub);
    let bad_em = count_em.iter().filter(|&&k| k != 1).count();
    let bad_me = count_me.iter().filter(|&&k| k != 1).count();
    if bad_em + bad_me > 0 {
        let direction = if bad_em > 0 { "(E,M)" } else { "(M,E)" };
        return Err(Error::NotVariance(format!(
            "{direction} is not a strict factorization system ({} failing morphism(s))",
            bad_em.max(bad_me)
        )));
    }
    let c = e_sub.owner.clone();
    let table = (0..c.morphism_count())
        .map(|f| {
            let (te, tm) = term[f];
            let (sm, se) = start[f];
            Factorization {
                term_e: te,
                term_m: tm,
                start_m: sm,
                start_e: se,
                start_obj: c.cod(sm),
                term_obj: c.cod(te),
            }
        })
        .collect();
    Ok(VarianceStruct {
        e: e_sub,
        m: m_sub,
        table,
        flags: None,
        factors: None,
    })
}

impl VarianceStruct {
    pub fn owner(&self) -> &Arc<FinCategory> {
        &self.e.owner
    }

    pub fn covariant_part(&self) -> &WideSubcategory {
        &self.e
    }

    pub fn contravariant_part(&self) -> &WideSubcategory {
        &self.m
    }

    pub fn is_covariant(&self, f: Mor) -> bool {
        self.e.member[f]
    }

    pub fn is_contravariant(&self, f: Mor) -> bool {
        self.m.member[f]
    }

    pub fn factor(&self, f: Mor) -> Result<Factorization> {
        self.table.get(f).copied().ok_or(Error::OutOfRange {
            what: "morphism",
            index: f,
            limit: self.table.len(),
        })
    }

    /// Table lookup without the range check.
    pub fn fac(&self, f: Mor) -> &Factorization {
        &self.table[f]
    }

    pub fn table(&self) -> &[Factorization] {
        &self.table
    }

    /// 0 (covariant) / 1 (contravariant) per factor, for index-variances.
    pub fn index_flags(&self) -> Option<&[u8]> {
        self.flags.as_deref()
    }

    /// Factor variances, for product variances.
    pub fn factor_variances(&self) -> Option<&[Arc<VarianceStruct>]> {
        self.factors.as_deref()
    }

    /// All morphisms covariant.
    pub fn is_covariant_variance(&self) -> bool {
        self.e.member.iter().all(|&b| b)
    }

    pub fn is_contravariant_variance(&self) -> bool {
        self.m.member.iter().all(|&b| b)
    }
}

pub fn covariant_variance(c: &Arc<FinCategory>) -> VarianceStruct {
    let table = (0..c.morphism_count())
        .map(|f| Factorization {
            term_e: f,
            term_m: c.identity(c.cod(f)),
            start_m: c.identity(c.dom(f)),
            start_e: f,
            start_obj: c.dom(f),
            term_obj: c.cod(f),
        })
        .collect();
    VarianceStruct {
        e: WideSubcategory::all(c.clone()),
        m: WideSubcategory::identities(c.clone()),
        table,
        flags: None,
        factors: None,
    }
}

pub fn contravariant_variance(c: &Arc<FinCategory>) -> VarianceStruct {
    let table = (0..c.morphism_count())
        .map(|f| Factorization {
            term_e: c.identity(c.dom(f)),
            term_m: f,
            start_m: f,
            start_e: c.identity(c.cod(f)),
            start_obj: c.cod(f),
            term_obj: c.dom(f),
        })
        .collect();
    VarianceStruct {
        e: WideSubcategory::identities(c.clone()),
        m: WideSubcategory::all(c.clone()),
        table,
        flags: None,
        factors: None,
    }
}

/// Componentwise variance on the product of the factors' categories.
pub fn product_variance(factors: &[Arc<VarianceStruct>], cap: Cap) -> Result<VarianceStruct> {
    let owners: Vec<Arc<FinCategory>> = factors.iter().map(|v| v.owner().clone()).collect();
    if let [only] = factors {
        let mut v = (**only).clone();
        if v.factors.is_none() {
            v.factors = Some(vec![only.clone()]);
        }
        if let Some(flags) = &only.flags {
            v.flags = Some(flags.clone());
        }
        // keep the cap semantics of a product
        product_category(&owners, cap)?;
        return Ok(v);
    }
    let p = Arc::new(product_category(&owners, cap)?);
    let n = p.morphism_count();
    let k = factors.len();
    let rows = crate::par::map(n, |f| {
        let comps = p.split_morphism(f);
        let mut cov = true;
        let mut contra = true;
        let mut parts = [
            Vec::with_capacity(k),
            Vec::with_capacity(k),
            Vec::with_capacity(k),
            Vec::with_capacity(k),
        ];
        let mut s = Vec::with_capacity(k);
        let mut t = Vec::with_capacity(k);
        for (v, &fi) in factors.iter().zip(&comps) {
            cov &= v.is_covariant(fi);
            contra &= v.is_contravariant(fi);
            let fac = v.fac(fi);
            parts[0].push(fac.term_e);
            parts[1].push(fac.term_m);
            parts[2].push(fac.start_m);
            parts[3].push(fac.start_e);
            s.push(fac.start_obj);
            t.push(fac.term_obj);
        }
        let fac = Factorization {
            term_e: p.tuple_morphism(&parts[0]),
            term_m: p.tuple_morphism(&parts[1]),
            start_m: p.tuple_morphism(&parts[2]),
            start_e: p.tuple_morphism(&parts[3]),
            start_obj: p.tuple_object(&s),
            term_obj: p.tuple_object(&t),
        };
        (cov, contra, fac)
    });
    let mut e_member = Vec::with_capacity(n);
    let mut m_member = Vec::with_capacity(n);
    let mut table = Vec::with_capacity(n);
    for (cov, contra, fac) in rows {
        e_member.push(cov);
        m_member.push(contra);
        table.push(fac);
    }
    let flags = factors
        .iter()
        .map(|v| {
            if v.is_covariant_variance() {
                Some(0u8)
            } else if v.is_contravariant_variance() {
                Some(1u8)
            } else {
                None
            }
        })
        .collect::<Option<Vec<u8>>>();
    Ok(VarianceStruct {
        e: WideSubcategory {
            owner: p.clone(),
            member: e_member,
        },
        m: WideSubcategory {
            owner: p,
            member: m_member,
        },
        table,
        flags,
        factors: Some(factors.to_vec()),
    })
}

/// Product variance with factor `i` covariant when `flags[i] = 0` and
/// contravariant when `flags[i] = 1`.
pub fn index_variance(
    factors: &[Arc<FinCategory>],
    flags: &[u8],
    cap: Cap,
) -> Result<VarianceStruct> {
    if factors.len() != flags.len() {
        return Err(Error::Shape {
            expected: format!("{} flags", factors.len()),
            found: flags.len().to_string(),
        });
    }
    let parts = factors
        .iter()
        .zip(flags)
        .map(|(c, &b)| match b {
            0 => Ok(Arc::new(covariant_variance(c))),
            1 => Ok(Arc::new(contravariant_variance(c))),
            other => Err(Error::NotVariance(format!(
                "index flag {other} is not 0 or 1"
            ))),
        })
        .collect::<Result<Vec<_>>>()?;
    let mut v = product_variance(&parts, cap)?;
    v.flags = Some(flags.to_vec());
    Ok(v)
}

/// Morphisms with domain in `j` covariant, the rest contravariant. `j` must
/// be a union of path components.
pub fn path_component_variance(c: &Arc<FinCategory>, j: &[Obj]) -> Result<VarianceStruct> {
    let mut inside = vec![false; c.object_count()];
    for &x in j {
        if x >= inside.len() {
            return Err(Error::OutOfRange {
                what: "object",
                index: x,
                limit: inside.len(),
            });
        }
        inside[x] = true;
    }
    for comp in path_components(c) {
        if let Some(&x) = comp.iter().find(|&&x| inside[x] != inside[comp[0]]) {
            return Err(Error::SplitsComponent(x));
        }
    }
    let cov = covariant_variance(c);
    let contra = contravariant_variance(c);
    let table = (0..c.morphism_count())
        .map(|f| {
            if inside[c.dom(f)] {
                cov.table[f]
            } else {
                contra.table[f]
            }
        })
        .collect();
    let e_member = (0..c.morphism_count())
        .map(|f| inside[c.dom(f)] || c.is_identity(f))
        .collect();
    let m_member = (0..c.morphism_count())
        .map(|f| !inside[c.dom(f)] || c.is_identity(f))
        .collect();
    Ok(VarianceStruct {
        e: WideSubcategory {
            owner: c.clone(),
            member: e_member,
        },
        m: WideSubcategory {
            owner: c.clone(),
            member: m_member,
        },
        table,
        flags: None,
        factors: None,
    })
}

/// Restrict `v` to the subcategory spanned by `morphisms`. Fails with the
/// first morphism one of whose four factors leaves the set.
pub fn inherited_variance(
    v: &VarianceStruct,
    morphisms: &[Mor],
) -> Result<(VarianceStruct, PlainFunctor)> {
    let c = v.owner();
    let (sub, inclusion) = subcategory(c, morphisms)?;
    let mut member = vec![false; c.morphism_count()];
    for &f in morphisms {
        member[f] = true;
    }
    for f in inclusion.morphism_map().iter().copied() {
        let fac = v.fac(f);
        if [fac.term_e, fac.term_m, fac.start_m, fac.start_e]
            .iter()
            .any(|&h| !member[h])
        {
            return Err(Error::NotFactoringClosed(f));
        }
    }
    let mut back = vec![usize::MAX; c.morphism_count()];
    for (i, &f) in inclusion.morphism_map().iter().enumerate() {
        back[f] = i;
    }
    let mut obj_back = vec![usize::MAX; c.object_count()];
    for (i, &x) in inclusion.object_map().iter().enumerate() {
        obj_back[x] = i;
    }
    let table = inclusion
        .morphism_map()
        .iter()
        .map(|&f| {
            let fac = v.fac(f);
            Factorization {
                term_e: back[fac.term_e],
                term_m: back[fac.term_m],
                start_m: back[fac.start_m],
                start_e: back[fac.start_e],
                start_obj: obj_back[fac.start_obj],
                term_obj: obj_back[fac.term_obj],
            }
        })
        .collect();
    let e_member = inclusion
        .morphism_map()
        .iter()
        .map(|&f| v.is_covariant(f))
        .collect();
    let m_member = inclusion
        .morphism_map()
        .iter()
        .map(|&f| v.is_contravariant(f))
        .collect();
    Ok((
        VarianceStruct {
            e: WideSubcategory {
                owner: sub.clone(),
                member: e_member,
            },
            m: WideSubcategory {
                owner: sub,
                member: m_member,
            },
            table,
            flags: None,
            factors: None,
        },
        inclusion,
    ))
}

/// True when the category has one object and every morphism is invertible.
pub fn is_group(c: &FinCategory) -> bool {
    c.object_count() == 1
        && (0..c.morphism_count()).all(|g| {
            (0..c.morphism_count()).any(|h| c.is_identity(c.compose(h, g).expect("one object")))
        })
}

/// Every wide, composition-closed morphism set, ordered by size and then by
/// member list. For a group these are the subgroups. Stops after `cap`
/// subcategories and reports the list as incomplete.
pub fn wide_subcategories(c: &Arc<FinCategory>, cap: Cap) -> (Vec<WideSubcategory>, bool) {
    let base = WideSubcategory::identities(c.clone());
    let mut found: Vec<Vec<bool>> = vec![base.member.clone()];
    let mut seen: std::collections::HashSet<Vec<bool>> = found.iter().cloned().collect();
    let mut frontier = 0;
    let mut complete = true;
    'outer: while frontier < found.len() {
        let current = found[frontier].clone();
        frontier += 1;
        let extensions = crate::par::filter_map(c.morphism_count(), |f| {
            if current[f] {
                return None;
            }
            let mut next = current.clone();
            close_under_composition(c, &mut next, &[f]);
            Some(next)
        });
        for next in extensions {
            if seen.insert(next.clone()) {
                if found.len() >= cap.0 {
                    complete = false;
                    break 'outer;
                }
                found.push(next);
            }
        }
    }
    let mut subs: Vec<WideSubcategory> = found
        .into_iter()
        .map(|member| WideSubcategory {
            owner: c.clone(),
            member,
        })
        .collect();
    subs.sort_by_key(|s| (s.len(), s.morphisms()));
    (subs, complete)
}

/// Result of an exhaustive variance search.
#[derive(Clone, Debug)]
pub struct VarianceEnumeration {
    pub subcategories: Vec<WideSubcategory>,
    /// `(E, M)` indices into `subcategories`, in canonical order
    pub pairs: Vec<(usize, usize)>,
    pub complete: bool,
}

/// All variances `(E, M)` on `c`. On groups, candidate pairs are pruned to
/// `|E| |M| = |G|`; elsewhere to `E` and `M` meeting only in identities.
pub fn enumerate_variances(c: &Arc<FinCategory>, cap: Cap) -> VarianceEnumeration {
    let (subs, complete) = wide_subcategories(c, cap);
    let group = is_group(c);
    let n = subs.len();
    let idents = c.object_count();
    let pairs = crate::par::flat_map(n, |i| {
        (0..n)
            .filter(|&j| {
                let (e, m) = (&subs[i], &subs[j]);
                if group && e.len() * m.len() != c.morphism_count() {
                    return false;
                }
                let shared = (0..c.morphism_count())
                    .filter(|&f| e.member[f] && m.member[f])
                    .count();
                shared == idents
                    && check_variance(e, m)
                        .map(|r| r.is_variance())
                        .unwrap_or(false)
            })
            .map(|j| (i, j))
            .collect()
    });
    VarianceEnumeration {
        subcategories: subs,
        pairs,
        complete,
    }
}

/// Composable pairs `(g, f)` at which one of the composite factorization
/// equations fails.
pub fn composite_equation_failures(v: &VarianceStruct) -> Vec<(Mor, Mor)> {
    let c = &**v.owner();
    let comp = |g: Mor, f: Mor| c.compose(g, f).expect("composable");
    crate::par::flat_map(c.morphism_count(), |f| {
        let ff = v.fac(f);
        c.outgoing(c.cod(f))
            .iter()
            .copied()
            .filter(|&g| {
                let gf = v.fac(comp(g, f));
                let fg = v.fac(g);
                let mid_t = v.fac(comp(fg.term_e, ff.term_m));
                let mid_s = v.fac(comp(fg.start_m, ff.start_e));
                !(gf.term_m == comp(fg.term_m, mid_t.term_m)
                    && gf.term_e == comp(mid_t.term_e, ff.term_e)
                    && gf.start_m == comp(mid_s.start_m, ff.start_m)
                    && gf.start_e == comp(fg.start_e, mid_s.start_e)
                    && gf.start_obj == mid_s.start_obj
                    && gf.term_obj == mid_t.term_obj)
            })
            .map(|g| (g, f))
            .collect()
    })
}

/// Witnesses `(r, s)` with `s` and `r . s` in a part but `r` not in it,
/// checked for `E` and for `M`.
pub fn cancellation_failures(v: &VarianceStruct) -> Vec<(Mor, Mor)> {
    let c = &**v.owner();
    let mut out = Vec::new();
    for part in [&v.e, &v.m] {
        for s in (0..c.morphism_count()).filter(|&s| part.member[s]) {
            for &r in c.outgoing(c.cod(s)).iter() {
                if part.member[c.compose(r, s).expect("composable")] && !part.member[r] {
                    out.push((r, s));
                }
            }
        }
    }
    out
}

/// `E ∩ M` has only identities.
pub fn intersection_is_discrete(v: &VarianceStruct) -> bool {
    let c = &**v.owner();
    (0..c.morphism_count()).all(|f| !(v.e.member[f] && v.m.member[f]) || c.is_identity(f))
}

/// Split a positive integer along a partition of the primes: the covariant
/// part collects the prime powers for which `covariant(p)` holds.
pub fn factor_integer(n: u64, covariant: impl Fn(u64) -> bool) -> Option<(u64, u64)> {
    if n == 0 {
        return None;
    }
    let (mut e, mut m) = (1u64, 1u64);
    let mut rest = n;
    let mut p = 2;
    while p * p <= rest {
        while rest.is_multiple_of(p) {
            if covariant(p) {
                e *= p;
            } else {
                m *= p;
            }
            rest /= p;
        }
        p += 1;
    }
    if rest > 1 {
        if covariant(rest) {
            e *= rest;
        } else {
            m *= rest;
        }
    }
    Some((e, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::disjoint_union;
    use crate::fixtures::{chain, cyclic, symmetric, walking_arrow};

    fn brute_terminating(v: &VarianceStruct, f: Mor) -> Vec<(Mor, Mor)> {
        let c = v.owner();
        let mut out = Vec::new();
        for e in 0..c.morphism_count() {
            for m in 0..c.morphism_count() {
                if v.is_covariant(e) && v.is_contravariant(m) && c.compose(m, e) == Some(f) {
                    out.push((e, m));
                }
            }
        }
        out
    }

    #[test]
    fn arrow_covariant_is_sfs() {
        let c = Arc::new(walking_arrow());
        let r = check_sfs(
            &WideSubcategory::all(c.clone()),
            &WideSubcategory::identities(c),
        )
        .unwrap();
        assert!(r.is_sfs());
    }

    #[test]
    fn z4_with_half_subgroup_is_not_sfs() {
        let z4 = Arc::new(cyclic(4));
        let half = WideSubcategory::new(z4.clone(), &[0, 2]).unwrap();
        let r = check_sfs(&half, &half).unwrap();
        assert!(r.failures.contains(&(1, 0)));
        assert!(!r.is_sfs());
    }

    #[test]
    fn wide_subcategory_validation() {
        let z4 = Arc::new(cyclic(4));
        assert!(matches!(
            WideSubcategory::new(z4.clone(), &[2]),
            Err(Error::NotWide { object: 0, .. })
        ));
        assert!(matches!(
            WideSubcategory::new(z4.clone(), &[0, 1]),
            Err(Error::NotClosed { .. })
        ));
        assert_eq!(WideSubcategory::generated(z4, &[1]).unwrap().len(), 4);
    }

    #[test]
    fn covariant_and_contravariant_tables() {
        for c in [walking_arrow(), symmetric(3), chain(3)] {
            let c = Arc::new(c);
            let cov = covariant_variance(&c);
            let built = build_variance(
                WideSubcategory::all(c.clone()),
                WideSubcategory::identities(c.clone()),
            )
            .unwrap();
            assert_eq!(cov.table(), built.table());
            let contra = contravariant_variance(&c);
            let built = build_variance(
                WideSubcategory::identities(c.clone()),
                WideSubcategory::all(c.clone()),
            )
            .unwrap();
            assert_eq!(contra.table(), built.table());
            for f in 0..c.morphism_count() {
                assert_eq!(contra.fac(f).start_obj, c.cod(f));
                assert_eq!(contra.fac(f).term_obj, c.dom(f));
            }
        }
    }

    #[test]
    fn s4_sylow_variance() {
        let s4 = Arc::new(symmetric(4));
        let g = |l: &str| s4.find_morphism(l).unwrap();
        let e = WideSubcategory::generated(s4.clone(), &[g("(1234)"), g("(13)")]).unwrap();
        let m = WideSubcategory::generated(s4.clone(), &[g("(123)")]).unwrap();
        assert_eq!((e.len(), m.len()), (8, 3));
        assert!(check_variance(&e, &m).unwrap().is_variance());
        let v = build_variance(e, m).unwrap();
        for f in 0..24 {
            assert_eq!(
                brute_terminating(&v, f),
                vec![(v.fac(f).term_e, v.fac(f).term_m)]
            );
        }
        assert!(composite_equation_failures(&v).is_empty());
        assert!(!v.covariant_part().is_normal());
        assert!(!v.contravariant_part().is_normal());
    }

    #[test]
    fn product_of_s3_cov_contra() {
        let s3 = Arc::new(symmetric(3));
        let v = product_variance(
            &[
                Arc::new(covariant_variance(&s3)),
                Arc::new(contravariant_variance(&s3)),
            ],
            Cap::default(),
        )
        .unwrap();
        let p = v.owner().clone();
        assert!(check_variance(v.covariant_part(), v.contravariant_part())
            .unwrap()
            .is_variance());
        for f in 0..p.morphism_count() {
            let c = p.split_morphism(f);
            assert_eq!(p.split_morphism(v.fac(f).term_e), vec![c[0], 0]);
            assert_eq!(p.split_morphism(v.fac(f).term_m), vec![0, c[1]]);
            assert_eq!(
                brute_terminating(&v, f),
                vec![(v.fac(f).term_e, v.fac(f).term_m)]
            );
        }
        assert_eq!(v.index_flags(), Some(&[0u8, 1][..]));
        assert!(composite_equation_failures(&v).is_empty());
    }

    #[test]
    fn index_variance_extremes() {
        let two = Arc::new(walking_arrow());
        let all0 = index_variance(&[two.clone(), two.clone()], &[0, 0], Cap::default()).unwrap();
        assert!(all0.is_covariant_variance());
        let all1 = index_variance(&[two.clone(), two.clone()], &[1, 1], Cap::default()).unwrap();
        assert!(all1.is_contravariant_variance());
        let mixed = index_variance(&[two.clone(), two], &[0, 1], Cap::default()).unwrap();
        assert!(
            check_variance(mixed.covariant_part(), mixed.contravariant_part())
                .unwrap()
                .is_variance()
        );
    }

    #[test]
    fn path_components_variance() {
        let c = Arc::new(disjoint_union(&[&walking_arrow(), &symmetric(3)]));
        let all = path_component_variance(&c, &[0, 1, 2]).unwrap();
        assert!(all.is_covariant_variance());
        let none = path_component_variance(&c, &[]).unwrap();
        assert!(none.is_contravariant_variance());
        let mixed = path_component_variance(&c, &[0, 1]).unwrap();
        assert!(
            check_variance(mixed.covariant_part(), mixed.contravariant_part())
                .unwrap()
                .is_variance()
        );
        assert!(!mixed.is_covariant_variance() && !mixed.is_contravariant_variance());
        assert_eq!(
            path_component_variance(&c, &[0]).unwrap_err(),
            Error::SplitsComponent(1)
        );
    }

    #[test]
    fn inheritance() {
        let s4 = Arc::new(symmetric(4));
        let g = |l: &str| s4.find_morphism(l).unwrap();
        let e = WideSubcategory::generated(s4.clone(), &[g("(1234)"), g("(13)")]).unwrap();
        let m = WideSubcategory::generated(s4.clone(), &[g("(123)")]).unwrap();
        let v = build_variance(e.clone(), m).unwrap();
        let (whole, _) = inherited_variance(&v, &(0..24).collect::<Vec<_>>()).unwrap();
        assert_eq!(whole.table(), v.table());
        let (on_e, _) = inherited_variance(&v, &e.morphisms()).unwrap();
        assert!(on_e.is_covariant_variance());

        // the diagonal arrow of the square, under variance (0, 1)
        let two = Arc::new(walking_arrow());
        let sq = index_variance(&[two.clone(), two.clone()], &[0, 1], Cap::default()).unwrap();
        let p = sq.owner().clone();
        let uu = p.tuple_morphism(&[2, 2]);
        let r = vec![
            p.identity(p.tuple_object(&[0, 0])),
            p.identity(p.tuple_object(&[1, 1])),
            uu,
        ];
        assert_eq!(
            inherited_variance(&sq, &r).unwrap_err(),
            Error::NotFactoringClosed(uu)
        );
    }

    #[test]
    fn enumeration_small() {
        let z2 = Arc::new(cyclic(2));
        let en = enumerate_variances(&z2, Cap::default());
        let pairs: Vec<(usize, usize)> = en
            .pairs
            .iter()
            .map(|&(i, j)| (en.subcategories[i].len(), en.subcategories[j].len()))
            .collect();
        assert_eq!(pairs, vec![(1, 2), (2, 1)]);

        let two = Arc::new(walking_arrow());
        let en = enumerate_variances(&two, Cap::default());
        assert_eq!(en.subcategories.len(), 2);
        assert_eq!(en.pairs, vec![(0, 1), (1, 0)]);
        assert!(en.complete);
    }

    #[test]
    fn subgroups_of_s4() {
        let s4 = Arc::new(symmetric(4));
        let (subs, complete) = wide_subcategories(&s4, Cap::default());
        assert!(complete);
        assert_eq!(subs.len(), 30);
        assert_eq!(subs.iter().filter(|s| s.len() == 8).count(), 3);
        assert_eq!(subs.iter().filter(|s| s.len() == 3).count(), 4);
        let (_, complete) = wide_subcategories(&s4, Cap(5));
        assert!(!complete);
    }

    #[test]
    fn integer_factoring() {
        // primes 2 and 5 covariant
        assert_eq!(factor_integer(360, |p| p == 2 || p == 5), Some((40, 9)));
        assert_eq!(factor_integer(1, |_| true), Some((1, 1)));
        assert_eq!(factor_integer(0, |_| true), None);
    }
}
