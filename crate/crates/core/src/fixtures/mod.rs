//! Built-in categories: groups, chains, the walking arrow and a skeleton of
//! finite sets.

use std::sync::Arc;

use crate::fincat::{disjoint_union, CategoryBuilder, FinCategory, Mor};
use crate::target::Function;
use crate::variance::{
    build_variance, contravariant_variance, covariant_variance, enumerate_variances,
    index_variance, inherited_variance, path_component_variance, product_variance, VarianceStruct,
    WideSubcategory,
};
use crate::Cap;

pub mod ev;
pub mod random;

/// The walking arrow `a -> b`.
pub fn walking_arrow() -> FinCategory {
    chain(2)
}

/// The poset `0 < 1 < ... < n-1` as a category. Objects are labelled by
/// number; the morphism `i -> j` is `i<j` (identities `id_i`).
pub fn chain(n: usize) -> FinCategory {
    let mut b = CategoryBuilder::new();
    let names: Vec<String> = if n == 2 {
        vec!["a".into(), "b".into()]
    } else {
        (0..n).map(|i| i.to_string()).collect()
    };
    for name in &names {
        b.object(name);
    }
    let mut arrow = vec![vec![usize::MAX; n]; n];
    for (i, row) in arrow.iter_mut().enumerate() {
        row[i] = i;
    }
    for i in 0..n {
        for j in i + 1..n {
            let label = if n == 2 {
                "u".to_string()
            } else {
                format!("{i}<{j}")
            };
            arrow[i][j] = b.morphism(&label, i, j);
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                b.compose(arrow[j][k], arrow[i][j], arrow[i][k]);
            }
        }
    }
    b.build().expect("chains are categories")
}

/// Cyclic group `Z_n`, elements labelled `0..n-1`.
pub fn cyclic(n: usize) -> FinCategory {
    let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let table: Vec<Vec<usize>> = (0..n)
        .map(|g| (0..n).map(|f| (g + f) % n).collect())
        .collect();
    FinCategory::from_monoid_table(&labels, &table).expect("cyclic groups are groups")
}

/// All permutations of `0..n` in lexicographic order of their one-line form.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    loop {
        out.push(current.clone());
        // next permutation
        let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) else {
            break;
        };
        let j = (i..n)
            .rev()
            .find(|&j| current[j] > current[i - 1])
            .expect("pivot");
        current.swap(i - 1, j);
        current[i..].reverse();
    }
    out
}

/// Cycle notation on `1..n`, `e` for the identity.
pub fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        out.push('(');
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            out.push_str(&(i + 1).to_string());
            i = p[i];
        }
        out.push(')');
    }
    if out.is_empty() {
        "e".into()
    } else {
        out
    }
}

/// Symmetric group `S_n`; `g . f` applies `f` first.
pub fn symmetric(n: usize) -> FinCategory {
    let perms = permutations(n);
    let index = |p: &Vec<usize>| perms.binary_search(p).expect("permutation");
    let labels: Vec<String> = perms.iter().map(|p| cycle_notation(p)).collect();
    let table: Vec<Vec<usize>> = perms
        .iter()
        .map(|g| {
            perms
                .iter()
                .map(|f| index(&f.iter().map(|&i| g[i]).collect()))
                .collect()
        })
        .collect();
    FinCategory::from_monoid_table(&labels, &table).expect("symmetric groups are groups")
}

/// Skeleton of finite sets on sizes `1..=max` with every function.
#[derive(Clone, Debug)]
pub struct FinSetSkeleton {
    pub category: Arc<FinCategory>,
    /// cardinality of each object
    pub sizes: Vec<usize>,
    /// underlying function of each morphism
    pub functions: Vec<Function>,
}

impl FinSetSkeleton {
    pub fn new(max: usize) -> FinSetSkeleton {
        let sizes: Vec<usize> = (1..=max).collect();
        let mut b = CategoryBuilder::new();
        for s in &sizes {
            b.object(&s.to_string());
        }
        let mut functions: Vec<Function> = sizes.iter().map(|&s| Function::identity(s)).collect();
        for (x, &a) in sizes.iter().enumerate() {
            for (y, &c) in sizes.iter().enumerate() {
                for f in Function::all(a, c) {
                    if x == y && f == Function::identity(a) {
                        continue;
                    }
                    let digits: String = f.values().iter().map(|v| v.to_string()).collect();
                    b.morphism(&format!("f{a}{c}_{digits}"), x, y);
                    functions.push(f);
                }
            }
        }
        let lookup = |f: &Function, x: usize, y: usize| -> Mor {
            if x == y && *f == Function::identity(sizes[x]) {
                return x;
            }
            functions
                .iter()
                .enumerate()
                .skip(sizes.len())
                .find(|(_, g)| *g == f && g.dom() == sizes[x] && g.cod() == sizes[y])
                .map(|(i, _)| i)
                .expect("every function is a morphism")
        };
        let n = functions.len();
        let size_index = |s: usize| s - 1;
        let mut composites = Vec::new();
        for f in sizes.len()..n {
            for g in sizes.len()..n {
                if functions[f].cod() != functions[g].dom() {
                    continue;
                }
                let h = functions[f].then(&functions[g]).expect("composable");
                let x = size_index(functions[f].dom());
                let y = size_index(functions[g].cod());
                composites.push((g, f, lookup(&h, x, y)));
            }
        }
        for (g, f, h) in composites {
            b.compose(g, f, h);
        }
        FinSetSkeleton {
            category: Arc::new(b.build().expect("finite sets form a category")),
            sizes,
            functions,
        }
    }
}

/// Named variances on the built-in categories, one per construction.
pub fn variance_catalog() -> Vec<(String, Arc<VarianceStruct>)> {
    let cap = Cap::default();
    let two = Arc::new(walking_arrow());
    let c3 = Arc::new(chain(3));
    let s3 = Arc::new(symmetric(3));
    let s4 = Arc::new(symmetric(4));
    let z6 = Arc::new(cyclic(6));
    let mut out: Vec<(String, Arc<VarianceStruct>)> = vec![
        ("covariant 2".into(), Arc::new(covariant_variance(&two))),
        (
            "contravariant 2".into(),
            Arc::new(contravariant_variance(&two)),
        ),
        ("covariant S3".into(), Arc::new(covariant_variance(&s3))),
        (
            "contravariant 3-chain".into(),
            Arc::new(contravariant_variance(&c3)),
        ),
    ];
    let cov2 = out[0].1.clone();
    let con2 = out[1].1.clone();
    out.push((
        "product 2 x 2^op".into(),
        Arc::new(product_variance(&[cov2, con2], cap).expect("small")),
    ));
    out.push((
        "product S3 x S3^op".into(),
        Arc::new(
            product_variance(
                &[
                    Arc::new(covariant_variance(&s3)),
                    Arc::new(contravariant_variance(&s3)),
                ],
                cap,
            )
            .expect("small"),
        ),
    ));
    out.push((
        "index (1,0) on 3-chain".into(),
        Arc::new(index_variance(&[c3.clone(), c3.clone()], &[1, 0], cap).expect("small")),
    ));
    out.push((
        "index (1,0,0) on 2".into(),
        Arc::new(
            index_variance(&[two.clone(), two.clone(), two.clone()], &[1, 0, 0], cap)
                .expect("small"),
        ),
    ));
    let union = Arc::new(disjoint_union(&[&walking_arrow(), &symmetric(3)]));
    out.push((
        "path components of 2 + S3".into(),
        Arc::new(path_component_variance(&union, &[0, 1]).expect("a component")),
    ));
    let en = enumerate_variances(&s4, cap);
    for &(e, m) in &en.pairs {
        let (es, ms) = (&en.subcategories[e], &en.subcategories[m]);
        if es.len() == 8 && ms.len() == 3 {
            out.push((
                format!("S4 E{e} M{m}"),
                Arc::new(build_variance(es.clone(), ms.clone()).expect("enumerated")),
            ));
        }
    }
    let g = |k: Mor| WideSubcategory::generated(z6.clone(), &[k]).expect("cyclic");
    out.push((
        "Z6 <2> <3>".into(),
        Arc::new(build_variance(g(2), g(3)).expect("complementary")),
    ));
    let square = index_variance(&[two.clone(), two.clone()], &[0, 1], cap).expect("small");
    let p = square.owner().clone();
    let keep: Vec<Mor> = (0..p.morphism_count())
        .filter(|&f| two.is_identity(p.component(f, 1)))
        .collect();
    out.push((
        "inherited on 2 x {a, b}".into(),
        Arc::new(
            inherited_variance(&square, &keep)
                .expect("factoring closed")
                .0,
        ),
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(symmetric(3).morphism_count(), 6);
        assert_eq!(symmetric(4).morphism_count(), 24);
        assert_eq!(chain(3).morphism_count(), 6);
        let fs = FinSetSkeleton::new(3);
        assert_eq!(
            fs.category.morphism_count(),
            1 + 2 + 3 + 4 + 9 + 8 + 27 + 1 + 1
        );
    }

    #[test]
    fn cycle_labels() {
        assert_eq!(cycle_notation(&[1, 2, 3, 0]), "(1234)");
        assert_eq!(cycle_notation(&[1, 0, 3, 2]), "(12)(34)");
        assert_eq!(cycle_notation(&[0, 1, 2]), "e");
        let s4 = symmetric(4);
        assert!(s4.find_morphism("(1234)").is_some());
        assert_eq!(s4.find_morphism("e"), Some(s4.identity(0)));
    }

    #[test]
    fn catalog_covers_the_constructions() {
        let cat = variance_catalog();
        assert_eq!(cat.iter().filter(|(n, _)| n.starts_with("S4")).count(), 12);
        assert!(cat.len() >= 20);
    }
}
