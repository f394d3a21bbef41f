//! Codomains for functors of variance: a finite category, or finite sets with
//! explicit functions.

use std::fmt;
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::fincat::{FinCategory, Mor};
use crate::Cap;

/// What a functor of variance needs from its codomain.
///
/// Objects are plain indices: object indices for a [`FinCategory`], set sizes
/// for [`FinSet`].
pub trait Codomain: Send + Sync {
    type Arrow: Clone + Eq + Hash + fmt::Debug + Send + Sync;

    fn arrow_source(&self, a: &Self::Arrow) -> usize;
    fn arrow_target(&self, a: &Self::Arrow) -> usize;
    fn identity_arrow(&self, x: usize) -> Self::Arrow;
    /// `g . f`, `None` when not composable.
    fn compose_arrows(&self, g: &Self::Arrow, f: &Self::Arrow) -> Option<Self::Arrow>;
    /// All arrows `x -> y` in canonical order.
    fn hom_arrows(&self, x: usize, y: usize, cap: Cap) -> Result<Vec<Self::Arrow>>;
    fn inverse_arrow(&self, a: &Self::Arrow) -> Option<Self::Arrow>;
    fn render_arrow(&self, a: &Self::Arrow) -> String;
    fn render_object(&self, x: usize) -> String;
}

impl Codomain for FinCategory {
    type Arrow = Mor;

    fn arrow_source(&self, a: &Mor) -> usize {
        self.dom(*a)
    }

    fn arrow_target(&self, a: &Mor) -> usize {
        self.cod(*a)
    }

    fn identity_arrow(&self, x: usize) -> Mor {
        self.identity(x)
    }

    fn compose_arrows(&self, g: &Mor, f: &Mor) -> Option<Mor> {
        self.compose(*g, *f)
    }

    fn hom_arrows(&self, x: usize, y: usize, _cap: Cap) -> Result<Vec<Mor>> {
        Ok(self.hom(x, y))
    }

    fn inverse_arrow(&self, a: &Mor) -> Option<Mor> {
        let (x, y) = (self.dom(*a), self.cod(*a));
        self.hom(y, x).into_iter().find(|&b| {
            self.compose(b, *a) == Some(self.identity(x))
                && self.compose(*a, b) == Some(self.identity(y))
        })
    }

    fn render_arrow(&self, a: &Mor) -> String {
        self.morphism_label(*a)
    }

    fn render_object(&self, x: usize) -> String {
        self.object_label(x)
    }
}

/// The category of finite sets `{0..n}` and functions between them.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FinSet;

/// A function `{0..dom} -> {0..cod}` stored as its value array.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Function {
    cod: usize,
    map: Vec<usize>,
}

impl Function {
    pub fn new(cod: usize, map: Vec<usize>) -> Result<Function> {
        if let Some(&v) = map.iter().find(|&&v| v >= cod) {
            return Err(Error::OutOfRange {
                what: "function value",
                index: v,
                limit: cod,
            });
        }
        Ok(Function { cod, map })
    }

    pub(crate) fn new_unchecked(cod: usize, map: Vec<usize>) -> Function {
        debug_assert!(map.iter().all(|&v| v < cod));
        Function { cod, map }
    }

    pub fn identity(n: usize) -> Function {
        Function {
            cod: n,
            map: (0..n).collect(),
        }
    }

    pub fn constant(dom: usize, cod: usize, value: usize) -> Function {
        Function::new_unchecked(cod, vec![value; dom])
    }

    pub fn from_fn(dom: usize, cod: usize, f: impl Fn(usize) -> usize) -> Function {
        Function::new_unchecked(cod, (0..dom).map(f).collect())
    }

    pub fn dom(&self) -> usize {
        self.map.len()
    }

    pub fn cod(&self) -> usize {
        self.cod
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn values(&self) -> &[usize] {
        &self.map
    }

    /// `g . self`
    pub fn then(&self, g: &Function) -> Option<Function> {
        (self.cod == g.dom()).then(|| Function {
            cod: g.cod,
            map: self.map.iter().map(|&v| g.map[v]).collect(),
        })
    }

    pub fn is_bijective(&self) -> bool {
        if self.dom() != self.cod {
            return false;
        }
        let mut seen = vec![false; self.cod];
        for &v in &self.map {
            if std::mem::replace(&mut seen[v], true) {
                return false;
            }
        }
        true
    }

    pub fn inverse(&self) -> Option<Function> {
        if !self.is_bijective() {
            return None;
        }
        let mut inv = vec![0; self.cod];
        for (i, &v) in self.map.iter().enumerate() {
            inv[v] = i;
        }
        Some(Function {
            cod: self.dom(),
            map: inv,
        })
    }

    /// Rank among all functions `dom -> cod` in lexicographic order of the
    /// value array.
    pub fn rank(&self) -> usize {
        self.map.iter().fold(0, |acc, &v| acc * self.cod + v)
    }

    pub fn from_rank(dom: usize, cod: usize, mut rank: usize) -> Function {
        let mut map = vec![0; dom];
        for slot in map.iter_mut().rev() {
            *slot = rank % cod.max(1);
            rank /= cod.max(1);
        }
        Function { cod, map }
    }

    /// Number of functions `dom -> cod`, saturating.
    pub fn count(dom: usize, cod: usize) -> u128 {
        let mut acc: u128 = 1;
        for _ in 0..dom {
            acc = acc.saturating_mul(cod as u128);
        }
        acc
    }

    /// Every function `dom -> cod` in rank order.
    pub fn all(dom: usize, cod: usize) -> impl Iterator<Item = Function> {
        let total = Function::count(dom, cod) as usize;
        (0..total).map(move |r| Function::from_rank(dom, cod, r))
    }
}

impl fmt::Display for Function {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.map.iter().map(|v| v.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl Codomain for FinSet {
    type Arrow = Function;

    fn arrow_source(&self, a: &Function) -> usize {
        a.dom()
    }

    fn arrow_target(&self, a: &Function) -> usize {
        a.cod()
    }

    fn identity_arrow(&self, x: usize) -> Function {
        Function::identity(x)
    }

    fn compose_arrows(&self, g: &Function, f: &Function) -> Option<Function> {
        f.then(g)
    }

    fn hom_arrows(&self, x: usize, y: usize, cap: Cap) -> Result<Vec<Function>> {
        let count = Function::count(x, y);
        if count > cap.0 as u128 {
            return Err(Error::SizeCap {
                what: "function set",
                count,
                cap: cap.0,
            });
        }
        Ok(Function::all(x, y).collect())
    }

    fn inverse_arrow(&self, a: &Function) -> Option<Function> {
        a.inverse()
    }

    fn render_arrow(&self, a: &Function) -> String {
        a.to_string()
    }

    fn render_object(&self, x: usize) -> String {
        x.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_round_trips() {
        for f in Function::all(3, 2) {
            assert_eq!(Function::from_rank(3, 2, f.rank()), f);
        }
        assert_eq!(Function::all(2, 3).count(), 9);
        assert_eq!(Function::all(0, 3).count(), 1);
        assert_eq!(Function::all(2, 0).count(), 0);
    }

    #[test]
    fn composition_and_inverse() {
        let f = Function::new(3, vec![2, 0, 1]).unwrap();
        let g = f.inverse().unwrap();
        assert_eq!(f.then(&g).unwrap(), Function::identity(3));
        assert!(Function::new(2, vec![0, 0]).unwrap().inverse().is_none());
        assert!(Function::new(2, vec![2]).is_err());
    }
}
