use crate::error::{Error, Limits, Result};
use crate::label::Label;

use super::complex::{CellComplex, ComplexBuilder};

/// A finite poset. `above[x]` holds every element strictly greater than `x`.
#[derive(Clone, Debug)]
pub struct Poset {
    labels: Vec<Label>,
    above: Vec<Vec<usize>>,
}

impl Poset {
    /// Poset generated by the strict relations `a < b`; fails on cycles.
    pub fn from_relations(labels: Vec<Label>, less: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        let mut up: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut indeg = vec![0usize; n];
        for &(a, b) in less {
            if a >= n || b >= n {
                return Err(Error::InvalidParams(format!("relation ({a},{b}) out of range")));
            }
            up[a].push(b);
            indeg[b] += 1;
        }
        // topological order, then closure from the top down
        let mut order = Vec::with_capacity(n);
        let mut ready: Vec<usize> = (0..n).filter(|&x| indeg[x] == 0).collect();
        while let Some(x) = ready.pop() {
            order.push(x);
            for &y in &up[x] {
                indeg[y] -= 1;
                if indeg[y] == 0 {
                    ready.push(y);
                }
            }
        }
        if order.len() != n {
            return Err(Error::InvalidParams("order relation has a cycle".into()));
        }
        let mut above: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &x in order.iter().rev() {
            let mut acc: Vec<usize> = Vec::new();
            for &y in &up[x] {
                acc.push(y);
                acc.extend_from_slice(&above[y]);
            }
            acc.sort_unstable();
            acc.dedup();
            above[x] = acc;
        }
        Ok(Poset { labels, above })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, x: usize) -> &Label {
        &self.labels[x]
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn less(&self, a: usize, b: usize) -> bool {
        self.above[a].binary_search(&b).is_ok()
    }

    pub fn above(&self, x: usize) -> &[usize] {
        &self.above[x]
    }

    /// Elements covering `x`: greater, with nothing strictly in between.
    pub fn covers(&self, x: usize) -> Vec<usize> {
        self.above[x]
            .iter()
            .copied()
            .filter(|&y| !self.above[x].iter().any(|&z| self.less(z, y)))
            .collect()
    }

    pub fn minimal(&self) -> Vec<usize> {
        let mut has_below = vec![false; self.len()];
        for a in &self.above {
            for &y in a {
                has_below[y] = true;
            }
        }
        (0..self.len()).filter(|&x| !has_below[x]).collect()
    }

    pub fn maximal(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.above[x].is_empty()).collect()
    }

    /// Every nonempty chain, listed in increasing order.
    pub fn chains(&self, limits: &Limits) -> Result<Vec<Vec<usize>>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        for x in 0..self.len() {
            cur.push(x);
            self.extend_chains(&mut cur, &mut out, limits)?;
            cur.pop();
        }
        Ok(out)
    }

    fn extend_chains(
        &self,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        limits: &Limits,
    ) -> Result<()> {
        out.push(cur.clone());
        limits.check_cells("order complex", out.len())?;
        let last = *cur.last().unwrap();
        for &y in &self.above[last] {
            cur.push(y);
            self.extend_chains(cur, out, limits)?;
            cur.pop();
        }
        Ok(())
    }
}

/// Poset of all cells ordered by the face relation; element `i` is cell `i`
/// and is labeled by its id.
pub fn face_poset(k: &CellComplex) -> Poset {
    let n = k.len();
    let mut above: Vec<Vec<usize>> = vec![Vec::new(); n];
    // cofaces have larger ids, so sweep downwards
    for c in (0..n).rev() {
        let mut acc = Vec::new();
        for &y in k.cofaces(c) {
            acc.push(y);
            acc.extend_from_slice(&above[y]);
        }
        acc.sort_unstable();
        acc.dedup();
        above[c] = acc;
    }
    Poset {
        labels: (0..n).map(Label::int).collect(),
        above,
    }
}

/// Simplicial complex whose simplices are the nonempty chains of `p`.
pub fn order_complex(p: &Poset, limits: &Limits) -> Result<CellComplex> {
    let chains = p.chains(limits)?;
    let mut b = ComplexBuilder::new();
    let ids: Vec<usize> = p.labels.iter().map(|l| b.vertex(l.clone())).collect();
    for ch in chains {
        b.add_simplex(ch.into_iter().map(|x| ids[x]).collect());
    }
    b.build(limits)
}

/// `sd K`: the order complex of the face poset. Vertex `Int(i)` is the
/// barycenter of cell `i` of `K`, so each cell's payload is a chain of
/// `K`-cell ids.
pub fn barycentric_subdivision(k: &CellComplex, limits: &Limits) -> Result<CellComplex> {
    order_complex(&face_poset(k), limits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cellcx::complex::ComplexBuilder;

    fn from_facets(facets: &[&[usize]]) -> CellComplex {
        let mut b = ComplexBuilder::new();
        for f in facets {
            b.add_labeled_simplex(f.iter().map(|&v| Label::int(v)));
        }
        b.build_closure(&Limits::default()).unwrap()
    }

    // Independent count of the chains of nonempty subsets of an n-set.
    fn boolean_chain_counts(n: usize) -> Vec<usize> {
        let sets: Vec<u32> = (1..(1u32 << n)).collect();
        let mut counts = vec![0usize; n];
        fn rec(last: u32, len: usize, sets: &[u32], counts: &mut [usize]) {
            counts[len - 1] += 1;
            for &s in sets {
                if s != last && s & last == last {
                    rec(s, len + 1, sets, counts);
                }
            }
        }
        for &s in &sets {
            rec(s, 1, &sets, &mut counts);
        }
        counts
    }

    #[test]
    fn face_poset_sizes() {
        assert_eq!(face_poset(&from_facets(&[&[0, 1, 2]])).len(), 7);
        assert_eq!(face_poset(&from_facets(&[&[0]])).len(), 1);
        assert_eq!(face_poset(&from_facets(&[&[0, 1], &[1, 2], &[0, 2]])).len(), 6);
    }

    #[test]
    fn order_complex_examples() {
        let l = Limits::default();
        let chain3 = Poset::from_relations(
            (0..3).map(Label::int).collect(),
            &[(0, 1), (1, 2)],
        )
        .unwrap();
        let oc = order_complex(&chain3, &l).unwrap();
        assert_eq!(oc.counts_by_dim(), vec![3, 3, 1]);

        let anti = Poset::from_relations((0..4).map(Label::int).collect(), &[]).unwrap();
        assert_eq!(order_complex(&anti, &l).unwrap().counts_by_dim(), vec![4]);

        let edge = from_facets(&[&[0, 1]]);
        let sd = order_complex(&face_poset(&edge), &l).unwrap();
        assert_eq!(sd.counts_by_dim(), vec![3, 2]);
    }

    #[test]
    fn subdivision_of_triangle_matches_enumeration() {
        let oracle = boolean_chain_counts(3);
        assert_eq!(oracle, vec![7, 12, 6]);
        let sd = barycentric_subdivision(&from_facets(&[&[0, 1, 2]]), &Limits::default()).unwrap();
        assert_eq!(sd.counts_by_dim(), oracle);
        sd.check_invariants().unwrap();
        let sd2 = barycentric_subdivision(&sd, &Limits::default()).unwrap();
        // (k+1)! facets per step
        assert_eq!(*sd2.counts_by_dim().last().unwrap(), 36);
    }

    #[test]
    fn isolated_points_stay_points() {
        let pts = from_facets(&[&[0], &[1], &[2]]);
        let sd = barycentric_subdivision(&pts, &Limits::default()).unwrap();
        assert_eq!(sd.counts_by_dim(), vec![3]);
    }

    #[test]
    fn covers_and_cycles() {
        let p = Poset::from_relations(
            (0..3).map(Label::int).collect(),
            &[(0, 1), (1, 2), (0, 2)],
        )
        .unwrap();
        assert!(p.less(0, 2));
        assert_eq!(p.covers(0), vec![1]);
        assert_eq!(p.minimal(), vec![0]);
        assert_eq!(p.maximal(), vec![2]);
        assert!(Poset::from_relations((0..2).map(Label::int).collect(), &[(0, 1), (1, 0)]).is_err());
    }
}
