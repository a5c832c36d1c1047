use std::collections::{HashMap, HashSet};

use crate::error::{Error, Limits, Result};
use crate::label::Label;

pub type CellId = usize;

/// A finite graded cell complex stored as its face poset.
///
/// Every cell is identified by its (sorted) vertex set and carries a
/// dimension. For simplicial complexes `dim = |verts| - 1`; for polytopal
/// complexes (products of simplices, pyramids) the dimension is explicit.
/// The face relation is vertex-set inclusion. Cells are numbered densely in
/// `(dim, verts)` order and vertices in label order, so vertex `v` is also
/// the id of the 0-cell `{v}`.
#[derive(Clone, Debug)]
pub struct CellComplex {
    vertices: Vec<Label>,
    vertex_index: HashMap<Label, usize>,
    dims: Vec<usize>,
    verts: Vec<Vec<usize>>,
    faces: Vec<Vec<CellId>>,
    cofaces: Vec<Vec<CellId>>,
    index: HashMap<Vec<usize>, CellId>,
    simplicial: bool,
}

/// Collects vertices and cells, then canonicalizes them into a [`CellComplex`].
#[derive(Default)]
pub struct ComplexBuilder {
    vertices: Vec<Label>,
    vindex: HashMap<Label, usize>,
    cells: Vec<(usize, Vec<usize>)>,
}

impl ComplexBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(&mut self, label: Label) -> usize {
        if let Some(&v) = self.vindex.get(&label) {
            return v;
        }
        let v = self.vertices.len();
        self.vindex.insert(label.clone(), v);
        self.vertices.push(label);
        v
    }

    pub fn add_cell(&mut self, dim: usize, verts: Vec<usize>) {
        self.cells.push((dim, verts));
    }

    pub fn add_simplex(&mut self, verts: Vec<usize>) {
        let d = verts.len().saturating_sub(1);
        self.cells.push((d, verts));
    }

    pub fn add_labeled_simplex(&mut self, labels: impl IntoIterator<Item = Label>) {
        let vs: Vec<usize> = labels.into_iter().map(|l| self.vertex(l)).collect();
        self.add_simplex(vs);
    }

    /// Simplicial complex generated by the added simplices (closed under faces).
    pub fn build_closure(self, limits: &Limits) -> Result<CellComplex> {
        self.finish(true, limits)
    }

    /// Complex made of exactly the added cells; they must already be closed
    /// under taking faces.
    pub fn build(self, limits: &Limits) -> Result<CellComplex> {
        self.finish(false, limits)
    }

    fn finish(self, close: bool, limits: &Limits) -> Result<CellComplex> {
        let ComplexBuilder {
            vertices, cells, ..
        } = self;
        let mut order: Vec<usize> = (0..vertices.len()).collect();
        order.sort_by(|&a, &b| vertices[a].cmp(&vertices[b]));
        let mut rank = vec![0usize; vertices.len()];
        for (new, &old) in order.iter().enumerate() {
            rank[old] = new;
        }
        let mut table: HashMap<Vec<usize>, usize> = HashMap::with_capacity(cells.len());
        let mut stack = Vec::new();
        for (dim, vs) in cells {
            if vs.is_empty() {
                return Err(Error::InvalidParams("empty cell".into()));
            }
            let mut vs: Vec<usize> = vs.into_iter().map(|v| rank[v]).collect();
            vs.sort_unstable();
            if vs.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidParams("cell repeats a vertex".into()));
            }
            match table.get(&vs) {
                Some(&d) if d != dim => {
                    return Err(Error::InvalidParams(format!(
                        "cell {vs:?} given with dimensions {d} and {dim}"
                    )))
                }
                Some(_) => {}
                None => {
                    table.insert(vs.clone(), dim);
                    if close {
                        stack.push(vs);
                    }
                }
            }
            limits.check_cells("cell complex", table.len())?;
        }
        while let Some(vs) = stack.pop() {
            if vs.len() < 2 {
                continue;
            }
            for skip in 0..vs.len() {
                let mut f = vs.clone();
                f.remove(skip);
                if !table.contains_key(&f) {
                    table.insert(f.clone(), f.len() - 1);
                    limits.check_cells("cell complex", table.len())?;
                    stack.push(f);
                }
            }
        }
        let mut vertices_sorted: Vec<Label> = Vec::with_capacity(vertices.len());
        let mut vertices = vertices.into_iter().map(Some).collect::<Vec<_>>();
        for &old in &order {
            vertices_sorted.push(vertices[old].take().unwrap());
        }
        CellComplex::assemble(vertices_sorted, table.into_iter().map(|(v, d)| (d, v)).collect())
    }
}

impl CellComplex {
    pub fn empty() -> Self {
        CellComplex::assemble(Vec::new(), Vec::new()).unwrap()
    }

    /// `vertices` sorted; cells `(dim, sorted verts)` without duplicates.
    fn assemble(vertices: Vec<Label>, mut cells: Vec<(usize, Vec<usize>)>) -> Result<Self> {
        cells.sort_unstable();
        // drop vertices that no cell mentions
        let mut used = vec![false; vertices.len()];
        for (_, vs) in &cells {
            for &v in vs {
                used[v] = true;
            }
        }
        let (vertices, cells) = if used.iter().all(|&u| u) {
            (vertices, cells)
        } else {
            let mut remap = vec![usize::MAX; vertices.len()];
            let mut kept = Vec::new();
            for (v, l) in vertices.into_iter().enumerate() {
                if used[v] {
                    remap[v] = kept.len();
                    kept.push(l);
                }
            }
            let cells = cells
                .into_iter()
                .map(|(d, vs)| (d, vs.into_iter().map(|v| remap[v]).collect()))
                .collect();
            (kept, cells)
        };
        let n = cells.len();
        let mut dims = Vec::with_capacity(n);
        let mut verts = Vec::with_capacity(n);
        for (d, vs) in cells {
            dims.push(d);
            verts.push(vs);
        }
        for (v, l) in vertices.iter().enumerate() {
            if verts.get(v).map(|c| c.as_slice()) != Some(&[v][..]) || dims[v] != 0 {
                return Err(Error::InvalidParams(format!("vertex {l} has no 0-cell")));
            }
        }
        let index: HashMap<Vec<usize>, CellId> =
            verts.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        let simplicial_dims = dims.iter().zip(&verts).all(|(&d, v)| d + 1 == v.len());
        let mut faces: Vec<Vec<CellId>> = vec![Vec::new(); n];
        let mut simplicial = simplicial_dims;
        if simplicial_dims {
            let mut buf = Vec::new();
            'cells: for c in 0..n {
                let vs = &verts[c];
                if vs.len() < 2 {
                    continue;
                }
                for skip in 0..vs.len() {
                    buf.clear();
                    buf.extend(vs.iter().enumerate().filter(|&(k, _)| k != skip).map(|(_, &v)| v));
                    match index.get(&buf) {
                        Some(&f) => faces[c].push(f),
                        None => {
                            simplicial = false;
                            break 'cells;
                        }
                    }
                }
                faces[c].sort_unstable();
            }
        }
        if !simplicial {
            faces = generic_faces(&dims, &verts);
            if simplicial_dims {
                return Err(Error::InvalidParams(
                    "simplicial cells are not closed under faces".into(),
                ));
            }
        }
        let mut cofaces: Vec<Vec<CellId>> = vec![Vec::new(); n];
        for (c, fs) in faces.iter().enumerate() {
            for &f in fs {
                cofaces[f].push(c);
            }
        }
        let vertex_index = vertices
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i))
            .collect();
        Ok(CellComplex {
            vertices,
            vertex_index,
            dims,
            verts,
            faces,
            cofaces,
            index,
            simplicial,
        })
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn is_simplicial(&self) -> bool {
        self.simplicial
    }

    pub fn dim(&self, c: CellId) -> usize {
        self.dims[c]
    }

    /// Largest cell dimension, `None` for the empty complex.
    pub fn max_dim(&self) -> Option<usize> {
        self.dims.last().copied()
    }

    pub fn verts(&self, c: CellId) -> &[usize] {
        &self.verts[c]
    }

    /// Cells covered by `c` (codimension-one faces).
    pub fn faces(&self, c: CellId) -> &[CellId] {
        &self.faces[c]
    }

    /// Cells covering `c`.
    pub fn cofaces(&self, c: CellId) -> &[CellId] {
        &self.cofaces[c]
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_labels(&self) -> &[Label] {
        &self.vertices
    }

    pub fn vertex_label(&self, v: usize) -> &Label {
        &self.vertices[v]
    }

    pub fn vertex_id(&self, l: &Label) -> Option<usize> {
        self.vertex_index.get(l).copied()
    }

    /// Cell with the given sorted vertex set.
    pub fn cell(&self, verts: &[usize]) -> Option<CellId> {
        self.index.get(verts).copied()
    }

    pub fn cell_by_labels(&self, labels: &[Label]) -> Option<CellId> {
        let mut vs = labels
            .iter()
            .map(|l| self.vertex_id(l))
            .collect::<Option<Vec<_>>>()?;
        vs.sort_unstable();
        self.cell(&vs)
    }

    /// A cell's payload: the list of its vertex labels.
    pub fn cell_label(&self, c: CellId) -> Label {
        Label::List(self.verts[c].iter().map(|&v| self.vertices[v].clone()).collect())
    }

    pub fn cell_of_label(&self, l: &Label) -> Option<CellId> {
        self.cell_by_labels(l.as_list()?)
    }

    pub fn counts_by_dim(&self) -> Vec<usize> {
        let mut out = vec![0; self.max_dim().map_or(0, |d| d + 1)];
        for &d in &self.dims {
            out[d] += 1;
        }
        out
    }

    pub fn cells_of_dim(&self, d: usize) -> std::ops::Range<CellId> {
        let lo = self.dims.partition_point(|&x| x < d);
        let hi = self.dims.partition_point(|&x| x <= d);
        lo..hi
    }

    /// Maximal cells.
    pub fn facets(&self) -> Vec<CellId> {
        (0..self.len()).filter(|&c| self.cofaces[c].is_empty()).collect()
    }

    /// `a` is a (not necessarily proper) face of `b`.
    pub fn is_face(&self, a: CellId, b: CellId) -> bool {
        a == b || (self.dims[a] < self.dims[b] && is_subset(&self.verts[a], &self.verts[b]))
    }

    /// All cells strictly above `c`.
    pub fn strict_cofaces(&self, c: CellId) -> Vec<CellId> {
        let mut seen = HashSet::new();
        let mut stack = vec![c];
        while let Some(x) = stack.pop() {
            for &y in &self.cofaces[x] {
                if seen.insert(y) {
                    stack.push(y);
                }
            }
        }
        let mut out: Vec<_> = seen.into_iter().collect();
        out.sort_unstable();
        out
    }

    /// All cells strictly below `c`.
    pub fn strict_faces(&self, c: CellId) -> Vec<CellId> {
        let mut seen = HashSet::new();
        let mut stack = vec![c];
        while let Some(x) = stack.pop() {
            for &y in &self.faces[x] {
                if seen.insert(y) {
                    stack.push(y);
                }
            }
        }
        let mut out: Vec<_> = seen.into_iter().collect();
        out.sort_unstable();
        out
    }

    /// The subcomplex on the kept cells, which must be closed under faces.
    /// Ids are reassigned but the canonical order is preserved.
    pub fn subcomplex(&self, keep: &[bool]) -> Result<CellComplex> {
        for c in (0..self.len()).filter(|&c| keep[c]) {
            if let Some(&f) = self.faces[c].iter().find(|&&f| !keep[f]) {
                return Err(Error::InvalidParams(format!(
                    "kept cell {} has missing face {}",
                    self.cell_label(c),
                    self.cell_label(f)
                )));
            }
        }
        let cells = (0..self.len())
            .filter(|&c| keep[c])
            .map(|c| (self.dims[c], self.verts[c].clone()))
            .collect();
        CellComplex::assemble(self.vertices.clone(), cells)
    }

    /// Structural self-check used by tests and debug assertions.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        for c in 0..self.len() {
            for &f in &self.faces[c] {
                if self.dims[f] + 1 != self.dims[c] {
                    return Err(format!("cover {f} -> {c} does not drop dimension by one"));
                }
                if !is_subset(&self.verts[f], &self.verts[c]) {
                    return Err(format!("face {f} of {c} is not a vertex subset"));
                }
            }
            if self.dims[c] > 0 && self.faces[c].is_empty() {
                return Err(format!("cell {c} of positive dimension has no faces"));
            }
            // every vertex of a cell lies below it through covers
            let below: HashSet<CellId> = self.strict_faces(c).into_iter().collect();
            for &v in &self.verts[c] {
                if v != c && !below.contains(&v) {
                    return Err(format!("vertex {v} of cell {c} is not a face"));
                }
            }
            if self.simplicial && self.faces[c].len() != if self.dims[c] == 0 { 0 } else { self.verts[c].len() } {
                return Err(format!("simplex {c} is missing faces"));
            }
        }
        Ok(())
    }

    pub(crate) fn raw_cells(&self) -> impl Iterator<Item = (usize, &[usize])> {
        self.dims.iter().copied().zip(self.verts.iter().map(|v| v.as_slice()))
    }
}

pub(crate) fn is_subset(a: &[usize], b: &[usize]) -> bool {
    let mut it = b.iter();
    'outer: for x in a {
        for y in it.by_ref() {
            if y == x {
                continue 'outer;
            }
            if y > x {
                return false;
            }
        }
        return false;
    }
    true
}

pub(crate) fn intersect(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn generic_faces(dims: &[usize], verts: &[Vec<usize>]) -> Vec<Vec<CellId>> {
    let nv = verts.iter().flatten().max().map_or(0, |m| m + 1);
    let mut incidence: Vec<Vec<CellId>> = vec![Vec::new(); nv];
    for (c, vs) in verts.iter().enumerate() {
        for &v in vs {
            incidence[v].push(c);
        }
    }
    let mut faces = vec![Vec::new(); dims.len()];
    let mut seen = HashSet::new();
    for c in 0..dims.len() {
        if dims[c] == 0 {
            continue;
        }
        seen.clear();
        for &v in &verts[c] {
            for &f in &incidence[v] {
                if dims[f] + 1 == dims[c] && seen.insert(f) && is_subset(&verts[f], &verts[c]) {
                    faces[c].push(f);
                }
            }
        }
        faces[c].sort_unstable();
    }
    faces
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn simplex(n: usize) -> CellComplex {
        let mut b = ComplexBuilder::new();
        b.add_labeled_simplex((0..n).map(Label::int));
        b.build_closure(&Limits::default()).unwrap()
    }

    #[test]
    fn full_simplex_counts() {
        let k = simplex(3);
        assert_eq!(k.len(), 7);
        assert_eq!(k.counts_by_dim(), vec![3, 3, 1]);
        assert!(k.is_simplicial());
        k.check_invariants().unwrap();
        assert_eq!(k.facets(), vec![6]);
        assert_eq!(k.strict_cofaces(0), vec![3, 4, 6]);
    }

    #[test]
    fn vertex_ids_follow_labels() {
        let mut b = ComplexBuilder::new();
        b.add_labeled_simplex([Label::str("z"), Label::str("a")]);
        b.add_labeled_simplex([Label::str("m")]);
        let k = b.build_closure(&Limits::default()).unwrap();
        assert_eq!(k.vertex_labels(), &[Label::str("a"), Label::str("m"), Label::str("z")]);
        for v in 0..3 {
            assert_eq!(k.verts(v), &[v]);
        }
        assert_eq!(k.cell_by_labels(&[Label::str("z"), Label::str("a")]), Some(3));
    }

    #[test]
    fn polytopal_square() {
        // a square with vertices 0..4 in cyclic order
        let mut b = ComplexBuilder::new();
        for v in 0..4 {
            let x = b.vertex(Label::int(v));
            b.add_cell(0, vec![x]);
        }
        for v in 0..4 {
            b.add_cell(1, vec![v, (v + 1) % 4]);
        }
        b.add_cell(2, vec![0, 1, 2, 3]);
        let k = b.build(&Limits::default()).unwrap();
        assert!(!k.is_simplicial());
        assert_eq!(k.faces(8).len(), 4);
        k.check_invariants().unwrap();
    }

    #[test]
    fn guard_trips() {
        let mut b = ComplexBuilder::new();
        b.add_labeled_simplex((0..10).map(Label::int));
        let r = b.build_closure(&Limits::with_max_cells(100));
        assert!(matches!(r, Err(Error::SizeGuard { .. })));
    }

    #[test]
    fn subcomplex_preserves_order() {
        let k = simplex(3);
        let mut keep = vec![true; k.len()];
        keep[6] = false;
        let b = k.subcomplex(&keep).unwrap();
        assert_eq!(b.len(), 6);
        assert_eq!(b.cell_label(5), k.cell_label(5));
        keep[0] = false;
        assert!(k.subcomplex(&keep).is_err());
    }

    #[test]
    fn subset_helpers() {
        assert!(is_subset(&[1, 3], &[0, 1, 2, 3]));
        assert!(!is_subset(&[1, 4], &[0, 1, 2, 3]));
        assert!(is_subset(&[], &[0]));
        assert_eq!(intersect(&[0, 2, 4, 5], &[1, 2, 5, 7]), vec![2, 5]);
    }
}
