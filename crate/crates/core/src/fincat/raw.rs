use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::par;

use super::category::{FinCategory, Mor, Obj};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawMorphism {
    pub label: String,
    pub dom: Obj,
    pub cod: Obj,
}

/// Unvalidated category data: the input to [`validate_category`].
///
/// `composites` lists `(g, f, g . f)`; identities are explicit.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawCategory {
    pub object_labels: Vec<String>,
    pub morphisms: Vec<RawMorphism>,
    pub identity: Vec<Mor>,
    pub composites: Vec<(Mor, Mor, Mor)>,
}

impl RawCategory {
    pub fn push_morphism(&mut self, label: &str, dom: Obj, cod: Obj) -> Mor {
        self.morphisms.push(RawMorphism {
            label: label.to_string(),
            dom,
            cod,
        });
        self.morphisms.len() - 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    IdentityTyping {
        object: Obj,
        morphism: Mor,
    },
    NotComposable {
        g: Mor,
        f: Mor,
    },
    Conflicting {
        g: Mor,
        f: Mor,
        first: Mor,
        second: Mor,
    },
    Missing {
        g: Mor,
        f: Mor,
    },
    CompositeDomain {
        g: Mor,
        f: Mor,
        h: Mor,
    },
    CompositeCodomain {
        g: Mor,
        f: Mor,
        h: Mor,
    },
    LeftIdentity {
        f: Mor,
    },
    RightIdentity {
        f: Mor,
    },
    Associativity {
        h: Mor,
        g: Mor,
        f: Mor,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::IdentityTyping { object, morphism } => {
                write!(
                    out,
                    "identity {morphism} of object {object} is not an endomorphism of it"
                )
            }
            Violation::NotComposable { g, f } => {
                write!(out, "composite given for non-composable pair ({g},{f})")
            }
            Violation::Conflicting {
                g,
                f,
                first,
                second,
            } => {
                write!(
                    out,
                    "pair ({g},{f}) given two composites {first} and {second}"
                )
            }
            Violation::Missing { g, f } => write!(out, "composite of pair ({g},{f}) is missing"),
            Violation::CompositeDomain { g, f, h } => {
                write!(out, "pair ({g},{f}): composite {h} has the wrong domain")
            }
            Violation::CompositeCodomain { g, f, h } => {
                write!(out, "pair ({g},{f}): composite {h} has the wrong codomain")
            }
            Violation::LeftIdentity { f } => write!(out, "left identity law fails at {f}"),
            Violation::RightIdentity { f } => write!(out, "right identity law fails at {f}"),
            Violation::Associativity { h, g, f } => {
                write!(out, "associativity fails at ({h},{g},{f})")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    /// Pairs `(g, f)` named by any violation.
    pub fn pairs(&self) -> Vec<(Mor, Mor)> {
        self.violations
            .iter()
            .filter_map(|v| match *v {
                Violation::NotComposable { g, f }
                | Violation::Conflicting { g, f, .. }
                | Violation::Missing { g, f }
                | Violation::CompositeDomain { g, f, .. }
                | Violation::CompositeCodomain { g, f, .. } => Some((g, f)),
                _ => None,
            })
            .collect()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        write!(out, "{}", parts.join("; "))
    }
}

fn check_range(what: &'static str, index: usize, limit: usize) -> Result<()> {
    if index >= limit {
        return Err(Error::OutOfRange { what, index, limit });
    }
    Ok(())
}

/// Check every category law on `raw`.
///
/// Out-of-range indices are a structural error; everything else is
/// collected in the report.
pub fn validate_category(raw: &RawCategory) -> Result<ValidationReport> {
    let n_obj = raw.object_labels.len();
    let n = raw.morphisms.len();
    for m in &raw.morphisms {
        check_range("object", m.dom, n_obj)?;
        check_range("object", m.cod, n_obj)?;
    }
    if raw.identity.len() != n_obj {
        return Err(Error::Shape {
            expected: format!("{n_obj} identities"),
            found: raw.identity.len().to_string(),
        });
    }
    for &i in &raw.identity {
        check_range("morphism", i, n)?;
    }
    for &(g, f, h) in &raw.composites {
        check_range("morphism", g, n)?;
        check_range("morphism", f, n)?;
        check_range("morphism", h, n)?;
    }

    let dom = |f: Mor| raw.morphisms[f].dom;
    let cod = |f: Mor| raw.morphisms[f].cod;
    let mut violations = Vec::new();
    for (x, &i) in raw.identity.iter().enumerate() {
        if dom(i) != x || cod(i) != x {
            violations.push(Violation::IdentityTyping {
                object: x,
                morphism: i,
            });
        }
    }

    let mut table: HashMap<(Mor, Mor), Mor> = HashMap::new();
    for &(g, f, h) in &raw.composites {
        if cod(f) != dom(g) {
            violations.push(Violation::NotComposable { g, f });
            continue;
        }
        match table.get(&(g, f)) {
            Some(&prev) if prev != h => violations.push(Violation::Conflicting {
                g,
                f,
                first: prev,
                second: h,
            }),
            Some(_) => {}
            None => {
                table.insert((g, f), h);
            }
        }
    }

    let mut outgoing = vec![Vec::new(); n_obj];
    for f in 0..n {
        outgoing[dom(f)].push(f);
    }
    for f in 0..n {
        for &g in &outgoing[cod(f)] {
            match table.get(&(g, f)) {
                None => violations.push(Violation::Missing { g, f }),
                Some(&h) => {
                    if dom(h) != dom(f) {
                        violations.push(Violation::CompositeDomain { g, f, h });
                    }
                    if cod(h) != cod(g) {
                        violations.push(Violation::CompositeCodomain { g, f, h });
                    }
                }
            }
        }
    }
    if !violations.is_empty() {
        // identity and associativity laws are meaningless on a broken table
        return Ok(ValidationReport { violations });
    }

    for f in 0..n {
        if table[&(raw.identity[cod(f)], f)] != f {
            violations.push(Violation::LeftIdentity { f });
        }
        if table[&(f, raw.identity[dom(f)])] != f {
            violations.push(Violation::RightIdentity { f });
        }
    }
    let assoc = par::flat_map(n, |f| {
        let mut bad = Vec::new();
        for &g in &outgoing[cod(f)] {
            let gf = table[&(g, f)];
            for &h in &outgoing[cod(g)] {
                let hg = table[&(h, g)];
                if table[&(h, gf)] != table[&(hg, f)] {
                    bad.push(Violation::Associativity { h, g, f });
                }
            }
        }
        bad
    });
    violations.extend(assoc);
    Ok(ValidationReport { violations })
}

/// Incremental construction of explicit categories with implicit identities.
///
/// Each object gets its identity morphism at declaration time, and composites
/// involving identities are filled in by [`CategoryBuilder::build`].
#[derive(Clone, Debug, Default)]
pub struct CategoryBuilder {
    raw: RawCategory,
}

impl CategoryBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn object(&mut self, label: &str) -> Obj {
        let x = self.raw.object_labels.len();
        self.raw.object_labels.push(label.to_string());
        let id = self.raw.push_morphism(&format!("id_{label}"), x, x);
        self.raw.identity.push(id);
        x
    }

    pub fn morphism(&mut self, label: &str, dom: Obj, cod: Obj) -> Mor {
        self.raw.push_morphism(label, dom, cod)
    }

    /// Record `g . f = h`.
    pub fn compose(&mut self, g: Mor, f: Mor, h: Mor) -> &mut Self {
        self.raw.composites.push((g, f, h));
        self
    }

    pub fn find_object(&self, label: &str) -> Option<Obj> {
        self.raw.object_labels.iter().position(|l| l == label)
    }

    pub fn find_morphism(&self, label: &str) -> Option<Mor> {
        self.raw.morphisms.iter().position(|m| m.label == label)
    }

    /// Raw data with identity composites filled in.
    pub fn into_raw(mut self) -> RawCategory {
        let n = self.raw.morphisms.len();
        let given: std::collections::HashSet<(Mor, Mor)> = self
            .raw
            .composites
            .iter()
            .map(|&(g, f, _)| (g, f))
            .collect();
        for f in 0..n {
            let RawMorphism { dom, cod, .. } = self.raw.morphisms[f];
            let (Some(&id_d), Some(&id_c)) =
                (self.raw.identity.get(dom), self.raw.identity.get(cod))
            else {
                continue;
            };
            if !given.contains(&(id_c, f)) {
                self.raw.composites.push((id_c, f, f));
            }
            if id_d != f && !given.contains(&(f, id_d)) {
                self.raw.composites.push((f, id_d, f));
            }
        }
        self.raw
    }

    pub fn build(self) -> Result<FinCategory> {
        FinCategory::from_raw(&self.into_raw())
    }
}
