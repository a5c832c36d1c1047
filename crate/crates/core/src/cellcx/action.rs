use std::collections::HashMap;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::label::Label;

use super::complex::{CellComplex, CellId};

/// A permutation of `0..n`, used as an abstract group element.
pub type Perm = Vec<usize>;

/// Product used for right actions: `x·(g*h) = (x·g)·h` with `(g*h)(j) = g(h(j))`.
pub fn compose(g: &[usize], h: &[usize]) -> Perm {
    h.iter().map(|&j| g[j]).collect()
}

/// All of `S_r`, identity first, then lexicographic.
pub fn symmetric_group(r: usize) -> Vec<Perm> {
    (0..r).permutations(r).collect()
}

/// A right action of a finite group on a cell complex, induced by a
/// permutation of its vertices.
#[derive(Clone, Debug)]
pub struct GroupAction {
    elements: Vec<Perm>,
    product: Vec<Vec<usize>>,
    vertex_table: Vec<Vec<usize>>,
    cell_table: Vec<Vec<CellId>>,
}

impl GroupAction {
    pub fn trivial(k: &CellComplex) -> Self {
        GroupAction::from_vertex_map(k, vec![Vec::new()], |_, l| Some(l.clone()))
            .expect("identity is an action")
    }

    /// Builds the action from `image(g, vertex label)`, which must be a right
    /// action of `elements` (under [`compose`]) by face-preserving bijections.
    /// `elements[0]` must be the identity.
    pub fn from_vertex_map<F>(k: &CellComplex, elements: Vec<Perm>, mut image: F) -> Result<Self>
    where
        F: FnMut(usize, &Label) -> Option<Label>,
    {
        if elements.is_empty() {
            return Err(Error::InvalidAction("empty group".into()));
        }
        let index: HashMap<&Perm, usize> =
            elements.iter().enumerate().map(|(i, g)| (g, i)).collect();
        if index.len() != elements.len() {
            return Err(Error::InvalidAction("repeated group element".into()));
        }
        let mut product = vec![vec![0; elements.len()]; elements.len()];
        for (a, g) in elements.iter().enumerate() {
            for (b, h) in elements.iter().enumerate() {
                let gh = compose(g, h);
                product[a][b] = *index
                    .get(&gh)
                    .ok_or_else(|| Error::InvalidAction("elements not closed under product".into()))?;
            }
        }
        if (0..elements.len()).any(|g| product[0][g] != g) {
            return Err(Error::InvalidAction("first element is not the identity".into()));
        }

        let nv = k.num_vertices();
        let mut vertex_table = Vec::with_capacity(elements.len());
        for g in 0..elements.len() {
            let mut row = Vec::with_capacity(nv);
            let mut hit = vec![false; nv];
            for v in 0..nv {
                let l = k.vertex_label(v);
                let w = image(g, l)
                    .and_then(|m| k.vertex_id(&m))
                    .ok_or_else(|| Error::InvalidAction(format!("no image for vertex {l}")))?;
                if std::mem::replace(&mut hit[w], true) {
                    return Err(Error::InvalidAction(format!("element {g} is not injective")));
                }
                row.push(w);
            }
            vertex_table.push(row);
        }
        if vertex_table[0].iter().enumerate().any(|(v, &w)| v != w) {
            return Err(Error::InvalidAction("identity moves a vertex".into()));
        }

        let mut cell_table = Vec::with_capacity(elements.len());
        let mut buf = Vec::new();
        for row in &vertex_table {
            let mut cells = Vec::with_capacity(k.len());
            for c in 0..k.len() {
                buf.clear();
                buf.extend(k.verts(c).iter().map(|&v| row[v]));
                buf.sort_unstable();
                let d = k.cell(&buf).ok_or_else(|| {
                    Error::InvalidAction(format!("image of cell {} is not a cell", k.cell_label(c)))
                })?;
                if k.dim(d) != k.dim(c) {
                    return Err(Error::InvalidAction(format!(
                        "cell {} changes dimension",
                        k.cell_label(c)
                    )));
                }
                cells.push(d);
            }
            cell_table.push(cells);
        }

        let action = GroupAction {
            elements,
            product,
            vertex_table,
            cell_table,
        };
        action.check_law()?;
        Ok(action)
    }

    fn check_law(&self) -> Result<()> {
        let n = self.order();
        for g in 0..n {
            for h in 0..n {
                let gh = self.product[g][h];
                for v in 0..self.vertex_table[g].len() {
                    if self.vertex_table[gh][v] != self.vertex_table[h][self.vertex_table[g][v]] {
                        return Err(Error::InvalidAction(format!(
                            "right-action law fails for elements {g}, {h}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    /// Index of `g*h`.
    pub fn product(&self, g: usize, h: usize) -> usize {
        self.product[g][h]
    }

    pub fn inverse(&self, g: usize) -> usize {
        (0..self.order()).find(|&h| self.product[g][h] == 0).unwrap()
    }

    pub fn act(&self, g: usize, c: CellId) -> CellId {
        self.cell_table[g][c]
    }

    pub fn act_vertex(&self, g: usize, v: usize) -> usize {
        self.vertex_table[g][v]
    }

    /// Sorted orbit of `c`.
    pub fn orbit(&self, c: CellId) -> Vec<CellId> {
        let mut o: Vec<CellId> = self.cell_table.iter().map(|row| row[c]).collect();
        o.sort_unstable();
        o.dedup();
        o
    }

    /// Elements fixing `c`.
    pub fn stabilizer(&self, c: CellId) -> Vec<usize> {
        (0..self.order()).filter(|&g| self.cell_table[g][c] == c).collect()
    }

    /// No non-identity element fixes a cell.
    pub fn is_free(&self) -> bool {
        self.cell_table
            .iter()
            .skip(1)
            .all(|row| row.iter().enumerate().all(|(c, &d)| c != d))
    }

    /// One representative (minimal id) per orbit, in increasing id order.
    pub fn orbit_representatives(&self) -> Vec<CellId> {
        let n = self.cell_table[0].len();
        (0..n)
            .filter(|&c| self.cell_table.iter().all(|row| row[c] >= c))
            .collect()
    }

    /// Vertex-label image in the complex this action was built on.
    pub fn vertex_image(&self, k: &CellComplex, g: usize, l: &Label) -> Option<Label> {
        let v = k.vertex_id(l)?;
        Some(k.vertex_label(self.vertex_table[g][v]).clone())
    }

    /// The same action on a G-invariant subcomplex built over the same vertex labels.
    pub fn restrict(&self, parent: &CellComplex, sub: &CellComplex) -> Result<Self> {
        GroupAction::from_vertex_map(sub, self.elements.clone(), |g, l| {
            self.vertex_image(parent, g, l)
        })
    }

    /// The induced action on `sd K`, whose vertex `Int(i)` is cell `i` of `K`.
    pub fn subdivide(&self, sd: &CellComplex) -> Result<Self> {
        GroupAction::from_vertex_map(sd, self.elements.clone(), |g, l| {
            l.as_int().map(|c| Label::int(self.act(g, c)))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cellcx::complex::ComplexBuilder;
    use crate::error::Limits;

    fn hollow_triangle() -> CellComplex {
        let mut b = ComplexBuilder::new();
        for (x, y) in [(0, 1), (1, 2), (0, 2)] {
            b.add_labeled_simplex([Label::int(x), Label::int(y)]);
        }
        b.build_closure(&Limits::default()).unwrap()
    }

    #[test]
    fn rotation_on_triangle() {
        let k = hollow_triangle();
        let rot = vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]];
        let a = GroupAction::from_vertex_map(&k, rot, |g, l| {
            let v = l.as_int()?;
            Some(Label::int((v + g) % 3))
        })
        .unwrap();
        assert_eq!(a.order(), 3);
        assert!(a.is_free());
        assert_eq!(a.orbit(3), vec![3, 4, 5]);
        assert_eq!(a.orbit_representatives(), vec![0, 3]);
        assert_eq!(a.inverse(1), 2);
    }

    #[test]
    fn rejects_non_actions() {
        let k = hollow_triangle();
        // a map that is not a bijection
        let r = GroupAction::from_vertex_map(&k, vec![vec![0, 1], vec![1, 0]], |g, l| {
            if g == 0 {
                Some(l.clone())
            } else {
                Some(Label::int(0))
            }
        });
        assert!(matches!(r, Err(Error::InvalidAction(_))));
        // a vertex permutation that does not preserve cells
        let mut b = ComplexBuilder::new();
        b.add_labeled_simplex([Label::int(0), Label::int(1)]);
        b.add_labeled_simplex([Label::int(2)]);
        let path = b.build_closure(&Limits::default()).unwrap();
        let r = GroupAction::from_vertex_map(&path, vec![vec![0, 1], vec![1, 0]], |g, l| {
            let v = l.as_int()?;
            Some(Label::int(if g == 1 { [2, 1, 0][v] } else { v }))
        });
        assert!(matches!(r, Err(Error::InvalidAction(_))));
    }

    #[test]
    fn symmetric_group_order() {
        let s3 = symmetric_group(3);
        assert_eq!(s3.len(), 6);
        assert_eq!(s3[0], vec![0, 1, 2]);
        assert_eq!(compose(&[1, 0, 2], &[0, 2, 1]), vec![1, 2, 0]);
    }
}
