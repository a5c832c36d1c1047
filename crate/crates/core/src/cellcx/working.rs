use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};

use super::complex::{CellComplex, CellId};

/// A subcomplex of a fixed ambient complex, tracked by an alive mask.
/// Collapses remove cells from it and expansions put them back.
#[derive(Clone, Debug)]
pub struct Working<'a> {
    k: &'a CellComplex,
    alive: Vec<bool>,
    n_alive: usize,
}

impl<'a> Working<'a> {
    pub fn full(k: &'a CellComplex) -> Self {
        Working {
            k,
            alive: vec![true; k.len()],
            n_alive: k.len(),
        }
    }

    pub fn from_mask(k: &'a CellComplex, alive: Vec<bool>) -> Result<Self> {
        let w = Working {
            k,
            n_alive: alive.iter().filter(|&&a| a).count(),
            alive,
        };
        if let Some(c) = w.first_unclosed() {
            return Err(Error::InvalidParams(format!(
                "cell {} lacks a face",
                k.cell_label(c)
            )));
        }
        Ok(w)
    }

    fn first_unclosed(&self) -> Option<CellId> {
        (0..self.k.len()).find(|&c| self.alive[c] && self.k.faces(c).iter().any(|&f| !self.alive[f]))
    }

    pub fn ambient(&self) -> &'a CellComplex {
        self.k
    }

    pub fn is_alive(&self, c: CellId) -> bool {
        self.alive[c]
    }

    pub fn mask(&self) -> &[bool] {
        &self.alive
    }

    pub fn len(&self) -> usize {
        self.n_alive
    }

    pub fn is_empty(&self) -> bool {
        self.n_alive == 0
    }

    pub fn alive_cells(&self) -> impl Iterator<Item = CellId> + '_ {
        (0..self.k.len()).filter(move |&c| self.alive[c])
    }

    pub fn alive_cofaces(&self, c: CellId) -> impl Iterator<Item = CellId> + '_ {
        self.k.cofaces(c).iter().copied().filter(move |&d| self.alive[d])
    }

    /// Alive cells strictly above `c`.
    pub fn strict_cofaces(&self, c: CellId) -> Vec<CellId> {
        let mut seen = HashSet::new();
        let mut stack = vec![c];
        while let Some(x) = stack.pop() {
            for y in self.alive_cofaces(x) {
                if seen.insert(y) {
                    stack.push(y);
                }
            }
        }
        let mut out: Vec<_> = seen.into_iter().collect();
        out.sort_unstable();
        out
    }

    /// Maximal alive cells strictly above `c`.
    pub fn facets_above(&self, c: CellId) -> Vec<CellId> {
        self.strict_cofaces(c)
            .into_iter()
            .filter(|&d| self.alive_cofaces(d).next().is_none())
            .collect()
    }

    /// The unique facet having `c` as a proper face, if there is exactly one.
    pub fn free_facet(&self, c: CellId) -> Option<CellId> {
        match self.facets_above(c).as_slice() {
            [f] => Some(*f),
            _ => None,
        }
    }

    /// `c` is free, its facet is `f`, and `f` covers `c`. Cheap test used by
    /// schedulers; the collapse itself re-verifies with the general predicates.
    pub fn is_free_pair(&self, c: CellId, f: CellId) -> bool {
        if !self.alive[c] || !self.alive[f] {
            return false;
        }
        let mut up = self.alive_cofaces(c);
        up.next() == Some(f) && up.next().is_none() && self.alive_cofaces(f).next().is_none()
    }

    /// Whether some alive cell is a coface of two distinct members of `cells`.
    pub fn first_shared_coface(&self, cells: &[CellId]) -> Option<(CellId, CellId)> {
        let mut owner: HashMap<CellId, CellId> = HashMap::new();
        for &m in cells {
            let mut closure = self.strict_cofaces(m);
            closure.push(m);
            for c in closure {
                if let Some(&o) = owner.get(&c) {
                    if o != m {
                        return Some((o, m));
                    }
                }
                owner.insert(c, m);
            }
        }
        None
    }

    pub fn remove(&mut self, c: CellId) {
        if std::mem::replace(&mut self.alive[c], false) {
            self.n_alive -= 1;
        }
    }

    pub fn insert(&mut self, c: CellId) {
        if !std::mem::replace(&mut self.alive[c], true) {
            self.n_alive += 1;
        }
    }

    pub fn to_complex(&self) -> Result<CellComplex> {
        self.k.subcomplex(&self.alive)
    }
}
