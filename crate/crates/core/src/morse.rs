//! The equivariant matching on chains of box simplices that collapses
//! `sd B_edge(H)` onto the order complex of the image of `i`, together with
//! checks for general partial G-matchings.

use std::collections::HashMap;

use petgraph::algo::is_cyclic_directed;
use petgraph::graph::DiGraph;
use serde::{Deserialize, Serialize};

use crate::boxcx::{box_edge, BoxComplex};
use crate::cellcx::{barycentric_subdivision_g, intersect, is_subset, CellComplex, CellId, GroupAction};
use crate::error::{Error, Limits, Result};
use crate::rgraph::RGraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChainTag {
    Critical,
    Sigma1,
    Sigma2,
    Upper,
}

/// Classification of a chain `F_0 ⊊ … ⊊ F_n` of box simplices.
///
/// `l` is the first index with `i∘p(F_l) ≠ F_l`, and `r` the largest offset
/// with `F_{l+r} ⊆ i∘p(F_l)`; both are absent for critical chains.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChainClass {
    pub tag: ChainTag,
    pub l: Option<usize>,
    pub r: Option<usize>,
}

pub fn classify_chain(bx: &BoxComplex, chain: &[CellId]) -> ChainClass {
    let k = &bx.complex;
    let Some(l) = chain.iter().position(|&c| !bx.ip_fixed(c)) else {
        return ChainClass {
            tag: ChainTag::Critical,
            l: None,
            r: None,
        };
    };
    let top = bx.ip(chain[l]);
    let r = chain[l..]
        .iter()
        .take_while(|&&c| is_subset(k.verts(c), k.verts(top)))
        .count()
        - 1;
    let n = chain.len() - 1;
    let tag = if l + r == n {
        if chain.contains(&top) {
            ChainTag::Upper
        } else {
            ChainTag::Sigma1
        }
    } else {
        let next = chain[l + r + 1];
        let x = intersect(k.verts(top), k.verts(next));
        match k.cell(&x) {
            Some(c) if !chain.contains(&c) => ChainTag::Sigma2,
            _ => ChainTag::Upper,
        }
    };
    ChainClass {
        tag,
        l: Some(l),
        r: Some(r),
    }
}

/// `μ(F)`: append `i∘p(F_l)` (first kind) or insert `i∘p(F_l) ∩ F_{l+r+1}`
/// after `F_{l+r}` (second kind).
pub fn mu(bx: &BoxComplex, chain: &[CellId]) -> Result<Vec<CellId>> {
    let cls = classify_chain(bx, chain);
    let k = &bx.complex;
    match (cls.tag, cls.l, cls.r) {
        (ChainTag::Sigma1, Some(l), _) => {
            let mut out = chain.to_vec();
            out.push(bx.ip(chain[l]));
            Ok(out)
        }
        (ChainTag::Sigma2, Some(l), Some(r)) => {
            let x = intersect(k.verts(bx.ip(chain[l])), k.verts(chain[l + r + 1]));
            let c = k.cell(&x).expect("faces of simplices are simplices");
            let mut out = chain.to_vec();
            out.insert(l + r + 1, c);
            Ok(out)
        }
        _ => Err(Error::NotInSigma(chain.to_vec())),
    }
}

/// A partial matching on the cells of a complex: `sigma[k]` is matched
/// with `mu[k]`, and `critical` lists the unmatched cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    pub sigma: Vec<CellId>,
    pub mu: Vec<CellId>,
    pub critical: Vec<CellId>,
}

impl Matching {
    /// From pairs; the critical cells are everything else in `0..n`.
    pub fn from_pairs(n: usize, pairs: &[(CellId, CellId)]) -> Self {
        let mut hit = vec![false; n];
        for &(x, y) in pairs {
            hit[x] = true;
            hit[y] = true;
        }
        Matching {
            sigma: pairs.iter().map(|p| p.0).collect(),
            mu: pairs.iter().map(|p| p.1).collect(),
            critical: (0..n).filter(|&c| !hit[c]).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.sigma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigma.is_empty()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (CellId, CellId)> + '_ {
        self.sigma.iter().copied().zip(self.mu.iter().copied())
    }
}

fn invalid(reason: impl Into<String>, k: &CellComplex, c: CellId) -> Error {
    Error::MatchingInvalid {
        reason: reason.into(),
        chain: k.verts(c).to_vec(),
    }
}

/// Checks that `m` is an acyclic partial G-matching on the face poset of
/// `k`: `μ(x)` covers `x`, `μ` is injective with `Σ ∩ μ(Σ) = ∅`, `Σ` is
/// G-closed and `μ` equivariant, the critical list is exactly the unmatched
/// cells (and equals `expected_critical` when given), and there is no cycle.
pub fn verify_matching(
    k: &CellComplex,
    a: &GroupAction,
    m: &Matching,
    expected_critical: Option<&[bool]>,
) -> Result<()> {
    if m.sigma.len() != m.mu.len() {
        return Err(Error::MatchingInvalid {
            reason: "sigma and mu have different lengths".into(),
            chain: Vec::new(),
        });
    }
    let n = k.len();
    if let Some(&c) = m.sigma.iter().chain(&m.mu).chain(&m.critical).find(|&&c| c >= n) {
        return Err(Error::MatchingInvalid {
            reason: format!("cell id {c} out of range"),
            chain: Vec::new(),
        });
    }
    let mut role = vec![0u8; n];
    let mut partner: HashMap<CellId, CellId> = HashMap::with_capacity(m.len());
    for (x, y) in m.pairs() {
        if !k.faces(y).contains(&x) {
            return Err(invalid("mu(x) does not cover x", k, x));
        }
        if role[x] != 0 {
            return Err(invalid("cell matched twice", k, x));
        }
        role[x] = 1;
        if role[y] != 0 {
            return Err(invalid("mu is not injective or meets sigma", k, y));
        }
        role[y] = 2;
        partner.insert(x, y);
    }
    for (x, y) in m.pairs() {
        for g in 1..a.order() {
            match partner.get(&a.act(g, x)) {
                Some(&yg) if yg == a.act(g, y) => {}
                Some(_) => return Err(invalid("mu is not equivariant", k, x)),
                None => return Err(invalid("sigma is not closed under the group", k, x)),
            }
        }
    }
    let mut listed = vec![false; n];
    for &c in &m.critical {
        if role[c] != 0 || std::mem::replace(&mut listed[c], true) {
            return Err(invalid("critical list contains a matched or repeated cell", k, c));
        }
    }
    if let Some(c) = (0..n).find(|&c| role[c] == 0 && !listed[c]) {
        return Err(invalid("cell is neither matched nor critical", k, c));
    }
    if let Some(exp) = expected_critical {
        if let Some(c) = (0..n).find(|&c| exp[c] != (role[c] == 0)) {
            let why = if exp[c] {
                "expected critical cell is matched"
            } else {
                "cell should be matched but is critical"
            };
            return Err(invalid(why, k, c));
        }
    }
    if !verify_acyclic(k, m) {
        return Err(Error::MatchingInvalid {
            reason: "matching has a cycle".into(),
            chain: Vec::new(),
        });
    }
    Ok(())
}

/// No directed cycle in the graph on `Σ` with `x → y` when `y ≠ x` is a
/// codimension-one face of `μ(x)`.
pub fn verify_acyclic(k: &CellComplex, m: &Matching) -> bool {
    let pos: HashMap<CellId, usize> = m.sigma.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let mut g = DiGraph::<(), ()>::with_capacity(m.len(), m.len() * 4);
    let nodes: Vec<_> = (0..m.len()).map(|_| g.add_node(())).collect();
    for (i, (x, y)) in m.pairs().enumerate() {
        for &f in k.faces(y) {
            if f == x {
                continue;
            }
            if let Some(&j) = pos.get(&f) {
                g.add_edge(nodes[i], nodes[j], ());
            }
        }
    }
    !is_cyclic_directed(&g)
}

/// The matching on `sd B_edge(H)`, with everything needed to check and
/// serialize it.
#[derive(Clone, Debug)]
pub struct LemmaMatching {
    pub boxc: BoxComplex,
    /// `sd B_edge(H)`; vertex `Int(i)` is box simplex `i`.
    pub sd: CellComplex,
    pub sd_action: GroupAction,
    pub matching: Matching,
    pub classes: Vec<ChainClass>,
}

impl LemmaMatching {
    /// The chain of box simplices of an `sd` cell.
    pub fn chain(&self, c: CellId) -> &[CellId] {
        self.sd.verts(c)
    }

    /// Cells of `sd B_edge(H)` that are chains of `i(P)`.
    pub fn image_mask(&self) -> Vec<bool> {
        let fixed = self.boxc.image_mask();
        (0..self.sd.len())
            .map(|c| self.sd.verts(c).iter().all(|&b| fixed[b]))
            .collect()
    }

    pub fn count(&self, tag: ChainTag) -> usize {
        self.classes.iter().filter(|c| c.tag == tag).count()
    }

    /// Chains with some item not fixed by `i∘p`.
    pub fn d_len(&self) -> usize {
        self.classes.len() - self.count(ChainTag::Critical)
    }

    pub fn certificate(&self) -> MatchingCertificate {
        MatchingCertificate {
            sigma: self
                .matching
                .pairs()
                .map(|(x, y)| SigmaEntry {
                    chain: self.chain(x).to_vec(),
                    mu: self.chain(y).to_vec(),
                    class: match self.classes[x].tag {
                        ChainTag::Sigma2 => SigmaClass::S2,
                        _ => SigmaClass::S1,
                    },
                })
                .collect(),
            critical: self
                .matching
                .critical
                .iter()
                .map(|&c| self.chain(c).to_vec())
                .collect(),
        }
    }

    /// Reads a certificate against this build and re-runs every check,
    /// including the recorded classes.
    pub fn check_certificate(&self, cert: &MatchingCertificate) -> Result<Matching> {
        let lookup = |ch: &[CellId]| {
            self.sd.cell(ch).ok_or_else(|| Error::MatchingInvalid {
                reason: "not a chain of box simplices".into(),
                chain: ch.to_vec(),
            })
        };
        let mut m = Matching {
            sigma: Vec::with_capacity(cert.sigma.len()),
            mu: Vec::with_capacity(cert.sigma.len()),
            critical: Vec::with_capacity(cert.critical.len()),
        };
        for e in &cert.sigma {
            let x = lookup(&e.chain)?;
            let want = match e.class {
                SigmaClass::S1 => ChainTag::Sigma1,
                SigmaClass::S2 => ChainTag::Sigma2,
            };
            if self.classes[x].tag != want {
                return Err(invalid("recorded class disagrees", &self.sd, x));
            }
            m.sigma.push(x);
            m.mu.push(lookup(&e.mu)?);
        }
        for ch in &cert.critical {
            m.critical.push(lookup(ch)?);
        }
        verify_matching(&self.sd, &self.sd_action, &m, Some(&self.image_mask()))?;
        Ok(m)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SigmaClass {
    S1,
    S2,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaEntry {
    pub chain: Vec<CellId>,
    pub mu: Vec<CellId>,
    pub class: SigmaClass,
}

/// `{"sigma":[{"chain":[..],"mu":[..],"class":"S1"}], "critical":[[..]]}`;
/// chains are lists of box simplex ids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingCertificate {
    pub sigma: Vec<SigmaEntry>,
    pub critical: Vec<Vec<CellId>>,
}

/// Builds the matching on `sd B_edge(H)` and verifies it against the chains
/// of `i(P)`. Fails with a counterexample when some chain with a non-fixed
/// item is left unmatched.
pub fn build_matching(h: &RGraph, limits: &Limits) -> Result<LemmaMatching> {
    let boxc = box_edge(h, limits)?;
    let (sd, sd_action) = barycentric_subdivision_g(&boxc.complex, &boxc.action, limits)?;
    let classes: Vec<ChainClass> = (0..sd.len())
        .map(|c| classify_chain(&boxc, sd.verts(c)))
        .collect();
    let mut pairs = Vec::new();
    for c in 0..sd.len() {
        if matches!(classes[c].tag, ChainTag::Sigma1 | ChainTag::Sigma2) {
            let up = mu(&boxc, sd.verts(c))?;
            let y = sd
                .cell(&up)
                .ok_or_else(|| invalid("mu(F) is not a chain", &sd, c))?;
            if classes[y].tag != ChainTag::Upper {
                return Err(invalid("mu(F) is itself matched upwards", &sd, c));
            }
            pairs.push((c, y));
        }
    }
    let out = LemmaMatching {
        matching: Matching::from_pairs(sd.len(), &pairs),
        boxc,
        sd,
        sd_action,
        classes,
    };
    verify_matching(&out.sd, &out.sd_action, &out.matching, Some(&out.image_mask()))?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k122() -> RGraph {
        RGraph::complete_multipartite(&[1, 2, 2]).unwrap()
    }

    fn broken_simplex(h: &RGraph, bx: &BoxComplex) -> CellId {
        bx.simplex_of_json(h, &[vec!["a0", "b0", "c0"], vec!["a0", "b1", "c1"]])
            .unwrap()
    }

    #[test]
    fn classification_examples() {
        let h = k122();
        let bx = box_edge(&h, &Limits::default()).unwrap();
        let f = broken_simplex(&h, &bx);
        let c = classify_chain(&bx, &[f]);
        assert_eq!(c, ChainClass { tag: ChainTag::Sigma1, l: Some(0), r: Some(0) });
        assert_eq!(mu(&bx, &[f]).unwrap(), vec![f, bx.ip(f)]);
        assert_eq!(classify_chain(&bx, &[f, bx.ip(f)]).tag, ChainTag::Upper);
        assert!(matches!(mu(&bx, &[f, bx.ip(f)]), Err(Error::NotInSigma(_))));
        let top = bx.ip(f);
        assert_eq!(classify_chain(&bx, &[0, top]).tag, ChainTag::Critical);
    }

    #[test]
    fn trivial_cases() {
        for h in [RGraph::complete(3, 3).unwrap(), RGraph::complete_multipartite(&[1, 1, 2]).unwrap()] {
            let m = build_matching(&h, &Limits::default()).unwrap();
            assert_eq!(m.d_len(), 0);
            assert!(m.matching.is_empty());
        }
    }

    #[test]
    fn k122_matching() {
        let m = build_matching(&k122(), &Limits::default()).unwrap();
        assert!(!m.matching.is_empty());
        assert_eq!(2 * m.matching.len(), m.d_len());
        assert_eq!(m.matching.critical.len(), m.image_mask().iter().filter(|&&b| b).count());
        assert_eq!(m.count(ChainTag::Sigma2), 0);
        for (x, y) in m.matching.pairs() {
            assert_eq!(classify_chain(&m.boxc, m.chain(y)).tag, ChainTag::Upper);
            let cls = m.classes[x];
            let (l, r) = (cls.l.unwrap(), cls.r.unwrap());
            let ch = m.chain(x);
            let top = m.boxc.ip(ch[l]);
            assert!(m.boxc.complex.is_face(ch[l], top) && ch[l] != top);
            assert!(m.boxc.complex.is_face(ch[l + r], top));
        }
    }

    #[test]
    fn second_kind_insertion() {
        // the smallest graph where the second kind occurs
        let h = RGraph::complete_multipartite(&[1, 2, 3]).unwrap();
        let bx = box_edge(&h, &Limits::default()).unwrap();
        let (sd, _) = barycentric_subdivision_g(&bx.complex, &bx.action, &Limits::default()).unwrap();
        let c = (0..sd.len())
            .find(|&c| sd.verts(c).len() == 2 && classify_chain(&bx, sd.verts(c)).tag == ChainTag::Sigma2)
            .unwrap();
        let ch = sd.verts(c);
        let (f0, f2) = (ch[0], ch[1]);
        assert!(!bx.ip_fixed(f0));
        assert!(!bx.complex.is_face(f2, bx.ip(f0)));
        let up = mu(&bx, ch).unwrap();
        assert_eq!(up.len(), 3);
        assert_eq!((up[0], up[2]), (f0, f2));
        let x = intersect(bx.complex.verts(bx.ip(f0)), bx.complex.verts(f2));
        assert_eq!(bx.complex.verts(up[1]), x.as_slice());
    }

    #[test]
    fn uncovered_chains_are_reported() {
        let h = RGraph::complete_multipartite(&[1, 2, 3]).unwrap();
        match build_matching(&h, &Limits::default()) {
            Err(Error::MatchingInvalid { reason, chain }) => {
                assert!(reason.contains("critical"), "{reason}");
                assert!(!chain.is_empty());
            }
            other => panic!("expected a failed matching, got {:?}", other.map(|m| m.matching.len())),
        }
    }

    #[test]
    fn equivariance_of_mu() {
        let m = build_matching(&k122(), &Limits::default()).unwrap();
        for (x, y) in m.matching.pairs() {
            for g in 0..m.sd_action.order() {
                let xg = m.sd_action.act(g, x);
                let image = mu(&m.boxc, m.chain(xg)).unwrap();
                assert_eq!(image.as_slice(), m.chain(m.sd_action.act(g, y)));
            }
        }
    }

    #[test]
    fn acyclicity_detects_cycles() {
        // hollow triangle: vertices 0,1,2 and edges 3={0,1}, 4={0,2}, 5={1,2}
        let mut b = crate::cellcx::ComplexBuilder::new();
        for e in [[0usize, 1], [0, 2], [1, 2]] {
            b.add_labeled_simplex(e.iter().map(|&v| crate::Label::int(v)));
        }
        let k = b.build_closure(&Limits::default()).unwrap();
        let cyc = Matching::from_pairs(6, &[(0, 3), (1, 5), (2, 4)]);
        assert!(!verify_acyclic(&k, &cyc));
        let ok = Matching::from_pairs(6, &[(1, 3), (2, 4)]);
        assert!(verify_acyclic(&k, &ok));
        assert!(verify_acyclic(&k, &Matching::from_pairs(6, &[])));
        let triv = GroupAction::trivial(&k);
        assert!(verify_matching(&k, &triv, &ok, None).is_ok());
        assert!(matches!(
            verify_matching(&k, &triv, &cyc, None),
            Err(Error::MatchingInvalid { .. })
        ));
    }

    #[test]
    fn certificate_roundtrip() {
        let m = build_matching(&k122(), &Limits::default()).unwrap();
        let cert = m.certificate();
        let s = serde_json::to_string(&cert).unwrap();
        assert!(s.starts_with(r#"{"sigma":[{"chain":["#));
        let back: MatchingCertificate = serde_json::from_str(&s).unwrap();
        assert_eq!(m.check_certificate(&back).unwrap(), m.matching);
    }
}
