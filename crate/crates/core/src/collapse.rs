//! Elementary G-collapses, collapse sequences from matchings, the stellar
//! and barycentric subdivision deformations, and the end-to-end certificate
//! relating the Hom complex and the box complex.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::boxcx::{box_edge, BoxComplex};
use crate::cellcx::{
    barycentric_subdivision_g, check_g_isomorphism, stellar_cone_complex, stellar_g_subdivision,
    CellComplex, CellId, GroupAction, Working,
};
use crate::error::{Error, Limits, Result};
use crate::homcx::{hom_complex, HomComplex};
use crate::label::Label;
use crate::morse::{build_matching, LemmaMatching, Matching};
use crate::rgraph::{RGraph, RGraphJson};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Collapse,
    Expand,
}

/// One orbit of free pairs removed (or added back) at once. Ids refer to
/// the ambient complex of the enclosing segment.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollapseStep {
    pub direction: Direction,
    pub sigma: CellId,
    pub orbit: Vec<CellId>,
    pub facets: Vec<CellId>,
}

/// Steps applied inside one ambient complex, taking the subcomplex with
/// fingerprint `start` to the one with fingerprint `end`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub tag: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<Label>,
    pub ambient: String,
    pub start: String,
    pub end: String,
    pub steps: Vec<CollapseStep>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeformationCertificate {
    pub start: String,
    pub end: String,
    pub segments: Vec<Segment>,
}

impl DeformationCertificate {
    pub fn num_steps(&self) -> usize {
        self.segments.iter().map(|s| s.steps.len()).sum()
    }

    /// Consecutive segments must meet.
    pub fn check_chaining(&self) -> Result<()> {
        let mut at = &self.start;
        for s in &self.segments {
            if &s.start != at {
                return Err(Error::CertificateMismatch(format!(
                    "segment {} starts at {} but the previous one ends at {at}",
                    s.tag, s.start
                )));
            }
            at = &s.end;
        }
        if at != &self.end {
            return Err(Error::CertificateMismatch("last segment misses the endpoint".into()));
        }
        Ok(())
    }
}

/// Order-independent fingerprints of subcomplexes of a fixed complex.
///
/// Each cell hashes its dimension, the hashes of its vertex labels and the
/// hashes of the cells it covers, so equal cells of different complexes get
/// equal hashes. A subcomplex hashes to the wrapping sum over its cells.
pub struct Fingerprinter {
    hashes: Vec<u128>,
}

fn digest(bytes: &[u8]) -> u128 {
    let d = Sha256::digest(bytes);
    u128::from_be_bytes(d[..16].try_into().unwrap())
}

impl Fingerprinter {
    pub fn new(k: &CellComplex) -> Self {
        let vh: Vec<u128> = k
            .vertex_labels()
            .iter()
            .map(|l| digest(serde_json::to_string(l).unwrap().as_bytes()))
            .collect();
        let mut hashes: Vec<u128> = Vec::with_capacity(k.len());
        let mut buf = Vec::new();
        let mut hs = Vec::new();
        for c in 0..k.len() {
            buf.clear();
            buf.extend_from_slice(&(k.dim(c) as u64).to_be_bytes());
            hs.clear();
            hs.extend(k.verts(c).iter().map(|&v| vh[v]));
            hs.sort_unstable();
            for h in &hs {
                buf.extend_from_slice(&h.to_be_bytes());
            }
            buf.push(b'|');
            hs.clear();
            hs.extend(k.faces(c).iter().map(|&f| hashes[f]));
            hs.sort_unstable();
            for h in &hs {
                buf.extend_from_slice(&h.to_be_bytes());
            }
            hashes.push(digest(&buf));
        }
        Fingerprinter { hashes }
    }

    pub fn of_mask(&self, alive: &[bool]) -> String {
        let s = self
            .hashes
            .iter()
            .zip(alive)
            .filter(|(_, &a)| a)
            .fold(0u128, |acc, (&h, _)| acc.wrapping_add(h));
        format!("{s:032x}")
    }

    pub fn of_all(&self) -> String {
        let s = self.hashes.iter().fold(0u128, |acc, &h| acc.wrapping_add(h));
        format!("{s:032x}")
    }
}

/// Fingerprint of a whole complex.
pub fn fingerprint(k: &CellComplex) -> String {
    Fingerprinter::new(k).of_all()
}

/// Checks the three conditions of an elementary G-collapse at `sigma` and
/// returns the sorted orbit with the free facet of each member.
pub fn check_collapse(
    w: &Working,
    a: &GroupAction,
    sigma: CellId,
) -> Result<(Vec<CellId>, Vec<CellId>)> {
    let k = w.ambient();
    let orbit = a.orbit(sigma);
    let mut facets = Vec::with_capacity(orbit.len());
    for &m in &orbit {
        if !w.is_alive(m) {
            return Err(Error::NotFree(k.cell_label(m)));
        }
        let f = w.free_facet(m).ok_or_else(|| Error::NotFree(k.cell_label(m)))?;
        if k.dim(f) != k.dim(m) + 1 {
            return Err(Error::WrongCodimension {
                cell: k.cell_label(m),
                facet_dim: k.dim(f),
                expected: k.dim(m) + 1,
            });
        }
        facets.push(f);
    }
    if w.first_shared_coface(&orbit).is_some() {
        return Err(Error::OrbitNotIndependentlyFree(k.cell_label(sigma)));
    }
    Ok((orbit, facets))
}

/// Applies the elementary G-collapse at `sigma` to `w`.
pub fn apply_collapse(w: &mut Working, a: &GroupAction, sigma: CellId) -> Result<CollapseStep> {
    let (orbit, facets) = check_collapse(w, a, sigma)?;
    for (&m, &f) in orbit.iter().zip(&facets) {
        w.remove(m);
        w.remove(f);
    }
    Ok(CollapseStep {
        direction: Direction::Collapse,
        sigma,
        orbit,
        facets,
    })
}

/// `dl_{σG}(K)` after checking that the orbit of `sigma` may be collapsed.
pub fn elementary_g_collapse(
    k: &CellComplex,
    a: &GroupAction,
    sigma: CellId,
) -> Result<CellComplex> {
    let mut w = Working::full(k);
    apply_collapse(&mut w, a, sigma)?;
    w.to_complex()
}

/// Re-verifies and applies one recorded step.
pub fn replay_step(w: &mut Working, a: &GroupAction, step: &CollapseStep) -> Result<()> {
    let k = w.ambient();
    match step.direction {
        Direction::Collapse => {
            let (orbit, facets) = check_collapse(w, a, step.sigma)?;
            if orbit != step.orbit || facets != step.facets {
                return Err(Error::CertificateMismatch(format!(
                    "collapse at {} does not match the recorded orbit",
                    k.cell_label(step.sigma)
                )));
            }
            for (&m, &f) in orbit.iter().zip(&facets) {
                w.remove(m);
                w.remove(f);
            }
        }
        Direction::Expand => {
            if step.orbit.len() != step.facets.len()
                || step.orbit.iter().chain(&step.facets).any(|&c| c >= k.len() || w.is_alive(c))
            {
                return Err(Error::CertificateMismatch(format!(
                    "expansion at {} adds cells that are present or unknown",
                    step.sigma
                )));
            }
            for (&m, &f) in step.orbit.iter().zip(&step.facets) {
                w.insert(m);
                w.insert(f);
            }
            let missing = step
                .orbit
                .iter()
                .chain(&step.facets)
                .flat_map(|&c| k.faces(c).iter().copied())
                .find(|&f| !w.is_alive(f));
            if let Some(f) = missing {
                return Err(Error::CertificateMismatch(format!(
                    "expansion at {} needs the missing face {}",
                    k.cell_label(step.sigma),
                    k.cell_label(f)
                )));
            }
            let (orbit, facets) = check_collapse(w, a, step.sigma)?;
            if orbit != step.orbit || facets != step.facets {
                return Err(Error::CertificateMismatch(format!(
                    "expansion at {} is not an elementary expansion",
                    k.cell_label(step.sigma)
                )));
            }
        }
    }
    Ok(())
}

/// Collapses every pair `(x, μ(x))` of an equivariant matching, one orbit at
/// a time. Each pass scans the remaining orbits in id order and applies all
/// that are currently free pairs; a pass without progress means the matching
/// cannot be realized as a collapse.
pub fn collapse_pairs(
    w: &mut Working,
    a: &GroupAction,
    pairs: &[(CellId, CellId)],
) -> Result<Vec<CollapseStep>> {
    let partner: HashMap<CellId, CellId> = pairs.iter().copied().collect();
    let mut pending: BTreeMap<CellId, Vec<CellId>> = BTreeMap::new();
    for &(x, _) in pairs {
        let orbit = a.orbit(x);
        pending.entry(orbit[0]).or_insert(orbit);
    }
    let mut steps = Vec::new();
    while !pending.is_empty() {
        let mut done = Vec::new();
        for (&rep, orbit) in &pending {
            let ready = orbit.iter().all(|x| match partner.get(x) {
                Some(&y) => w.is_free_pair(*x, y),
                None => false,
            });
            if !ready {
                continue;
            }
            let step = apply_collapse(w, a, rep)?;
            if step.orbit.iter().zip(&step.facets).any(|(x, f)| partner.get(x) != Some(f)) {
                return Err(Error::CertificateMismatch(format!(
                    "collapse at {} used a facet outside the matching",
                    w.ambient().cell_label(rep)
                )));
            }
            steps.push(step);
            done.push(rep);
        }
        if done.is_empty() {
            let remaining = pending.values().map(|o| 2 * o.len()).sum();
            let (rep, _) = pending.iter().next().unwrap();
            return Err(Error::Stuck {
                remaining,
                reason: format!(
                    "no matched orbit is a free pair, first pending at {}",
                    w.ambient().cell_label(*rep)
                ),
            });
        }
        for rep in done {
            pending.remove(&rep);
        }
    }
    Ok(steps)
}

/// Result of collapsing a complex along a matching.
pub struct MatchingCollapse<'a> {
    pub certificate: DeformationCertificate,
    pub working: Working<'a>,
}

/// Collapse sequence from an acyclic equivariant matching; ends at the
/// subcomplex of critical cells.
pub fn matching_to_collapse<'a>(
    k: &'a CellComplex,
    a: &GroupAction,
    m: &Matching,
) -> Result<MatchingCollapse<'a>> {
    let fp = Fingerprinter::new(k);
    let mut w = Working::full(k);
    let pairs: Vec<(CellId, CellId)> = m.pairs().collect();
    let steps = collapse_pairs(&mut w, a, &pairs)?;
    let mut critical = vec![false; k.len()];
    for &c in &m.critical {
        critical[c] = true;
    }
    if w.mask() != critical.as_slice() {
        return Err(Error::Stuck {
            remaining: w.len(),
            reason: "collapse did not end at the critical cells".into(),
        });
    }
    let start = fp.of_all();
    let end = fp.of_mask(w.mask());
    Ok(MatchingCollapse {
        certificate: DeformationCertificate {
            start: start.clone(),
            end: end.clone(),
            segments: vec![Segment {
                tag: "matching".into(),
                center: None,
                ambient: start.clone(),
                start,
                end,
                steps,
            }],
        },
        working: w,
    })
}

/// One stellar subdivision realized as an expansion followed by a collapse.
pub struct StellarStage {
    pub certificate: DeformationCertificate,
    pub complex: CellComplex,
    pub action: GroupAction,
}

/// Cells of the cone complex that belong to `k`.
fn base_mask(k: &CellComplex, l: &CellComplex) -> Vec<bool> {
    let in_k: Vec<bool> = l
        .vertex_labels()
        .iter()
        .map(|v| k.vertex_id(v).is_some())
        .collect();
    (0..l.len())
        .map(|c| l.verts(c).iter().all(|&v| in_k[v]))
        .collect()
}

/// Greedily collapses every cell outside `base`, one orbit at a time,
/// preferring the highest cells.
fn collapse_onto(w: &mut Working, a: &GroupAction, base: &[bool]) -> Result<Vec<CollapseStep>> {
    let k = w.ambient();
    let extra: Vec<CellId> = (0..k.len()).filter(|&c| !base[c]).collect();
    let mut steps = Vec::new();
    loop {
        let mut progressed = false;
        for &x in extra.iter().rev() {
            if !w.is_alive(x) {
                continue;
            }
            let y = {
                let mut up = w.alive_cofaces(x);
                match (up.next(), up.next()) {
                    (Some(y), None) => y,
                    _ => continue,
                }
            };
            if base[y] || !w.is_free_pair(x, y) {
                continue;
            }
            let ok = a.orbit(x).into_iter().all(|m| {
                let mut up = w.alive_cofaces(m);
                match (up.next(), up.next()) {
                    (Some(f), None) => !base[f] && w.is_free_pair(m, f),
                    _ => false,
                }
            });
            if !ok || w.first_shared_coface(&a.orbit(x)).is_some() {
                continue;
            }
            steps.push(apply_collapse(w, a, x)?);
            progressed = true;
        }
        let left = extra.iter().filter(|&&c| w.is_alive(c)).count();
        if left == 0 {
            return Ok(steps);
        }
        if !progressed {
            return Err(Error::Stuck {
                remaining: left,
                reason: "cone cells admit no further equivariant collapse".into(),
            });
        }
    }
}

/// Certificate for `K ↗ L ↘ sd(K, σG)` where `L` is `K` with a cone over the
/// closed star of each `σg`. The first leg is found by a greedy collapse of
/// `L` onto `K`, recorded in reverse as expansions; the second collapses
/// each `τ ⊇ σg` with its cone.
pub fn stellar_deformation_certificate(
    k: &CellComplex,
    a: &GroupAction,
    sigma: CellId,
    limits: &Limits,
) -> Result<StellarStage> {
    let (l, la) = stellar_cone_complex(k, a, sigma, limits)?;
    let fp = Fingerprinter::new(&l);
    let base = base_mask(k, &l);
    let center = k.cell_label(sigma);

    let mut w = Working::full(&l);
    let mut up = collapse_onto(&mut w, &la, &base)?;
    up.reverse();
    for s in &mut up {
        s.direction = Direction::Expand;
    }
    let ambient = fp.of_all();
    let start = fp.of_mask(&base);
    let expand = Segment {
        tag: "cone".into(),
        center: Some(center.clone()),
        ambient: ambient.clone(),
        start: start.clone(),
        end: ambient.clone(),
        steps: up,
    };

    let mut pairs = Vec::new();
    for m in a.orbit(sigma) {
        let apex = l
            .vertex_id(&crate::cellcx::apex_label(k, m))
            .expect("apex present");
        let lm = l.cell_by_labels(k.cell_label(m).as_list().unwrap()).unwrap();
        let mut star = l.strict_cofaces(lm);
        star.push(lm);
        for t in star.into_iter().filter(|&t| base[t]) {
            let mut vs = l.verts(t).to_vec();
            vs.push(apex);
            vs.sort_unstable();
            pairs.push((t, l.cell(&vs).expect("cone cell")));
        }
    }
    let mut w = Working::full(&l);
    let down = collapse_pairs(&mut w, &la, &pairs)?;
    let (complex, action) = stellar_g_subdivision(k, a, sigma, limits)?;
    let end = fp.of_mask(w.mask());
    if end != fingerprint(&complex) {
        return Err(Error::CertificateMismatch(format!(
            "collapse at {center} does not end at the stellar subdivision"
        )));
    }
    let collapse = Segment {
        tag: "uncone".into(),
        center: Some(center),
        ambient: ambient.clone(),
        start: ambient,
        end: end.clone(),
        steps: down,
    };
    Ok(StellarStage {
        certificate: DeformationCertificate {
            start,
            end,
            segments: vec![expand, collapse],
        },
        complex,
        action,
    })
}

/// Orbit representatives (minimal ids) ordered by decreasing dimension.
pub fn subdivision_order(k: &CellComplex, a: &GroupAction) -> Vec<CellId> {
    let mut reps = a.orbit_representatives();
    reps.sort_by(|&x, &y| k.dim(y).cmp(&k.dim(x)).then(x.cmp(&y)));
    reps
}

/// `Bary([labels of c])` ↦ `Int(c)`: from iterated stellar subdivision to
/// the order complex of the face poset.
fn bary_to_sd(k: &CellComplex) -> impl Fn(&Label) -> Option<Label> + '_ {
    move |l| l.as_bary().and_then(|inner| k.cell_of_label(inner)).map(Label::int)
}

pub struct SdDeformation {
    pub certificate: DeformationCertificate,
    /// The end complex; its vertices are `Bary` labels of cells of `K`.
    pub complex: CellComplex,
    pub action: GroupAction,
    /// `sd K` with its action, verified G-isomorphic to `complex`.
    pub sd: CellComplex,
    pub sd_action: GroupAction,
}

/// `K` and `sd K` by stellar subdivisions at every orbit, highest first.
pub fn sd_deformation(k: &CellComplex, a: &GroupAction, limits: &Limits) -> Result<SdDeformation> {
    let mut cur = k.clone();
    let mut cur_a = a.clone();
    let start = fingerprint(k);
    let mut segments = Vec::new();
    for rep in subdivision_order(k, a) {
        let s = cur
            .cell_of_label(&k.cell_label(rep))
            .expect("unsubdivided cells keep their vertices");
        let stage = stellar_deformation_certificate(&cur, &cur_a, s, limits)?;
        segments.extend(stage.certificate.segments);
        cur = stage.complex;
        cur_a = stage.action;
    }
    let (sd, sd_action) = barycentric_subdivision_g(k, a, limits)?;
    check_g_isomorphism(&cur, &cur_a, &sd, &sd_action, bary_to_sd(k))?;
    let certificate = DeformationCertificate {
        start,
        end: fingerprint(&cur),
        segments,
    };
    certificate.check_chaining()?;
    Ok(SdDeformation {
        certificate,
        complex: cur,
        action: cur_a,
        sd,
        sd_action,
    })
}

/// Replays the certificate of [`sd_deformation`] starting from `k`, building
/// each cone complex afresh and re-checking every step. Returns the end
/// complex and its action.
pub fn replay_sd_deformation(
    k: &CellComplex,
    a: &GroupAction,
    cert: &DeformationCertificate,
    limits: &Limits,
) -> Result<(CellComplex, GroupAction)> {
    cert.check_chaining()?;
    if fingerprint(k) != cert.start {
        return Err(Error::CertificateMismatch("start complex differs".into()));
    }
    if !cert.segments.len().is_multiple_of(2) {
        return Err(Error::CertificateMismatch("segments must come in pairs".into()));
    }
    let mut cur = k.clone();
    let mut cur_a = a.clone();
    for pair in cert.segments.chunks(2) {
        let (up, down) = (&pair[0], &pair[1]);
        let center = up
            .center
            .as_ref()
            .filter(|_| up.center == down.center)
            .ok_or_else(|| Error::CertificateMismatch("segment pair without a common center".into()))?;
        let s = cur
            .cell_of_label(center)
            .ok_or_else(|| Error::CertificateMismatch(format!("no cell {center}")))?;
        let (l, la) = stellar_cone_complex(&cur, &cur_a, s, limits)?;
        let fp = Fingerprinter::new(&l);
        if fp.of_all() != up.ambient || up.ambient != down.ambient {
            return Err(Error::CertificateMismatch(format!("cone complex at {center} differs")));
        }
        let mut w = Working::from_mask(&l, base_mask(&cur, &l))?;
        for step in &up.steps {
            if step.direction != Direction::Expand {
                return Err(Error::CertificateMismatch("cone segment must expand".into()));
            }
            replay_step(&mut w, &la, step)?;
        }
        if w.len() != l.len() {
            return Err(Error::CertificateMismatch(format!("expansions at {center} miss cells")));
        }
        let mut w = Working::full(&l);
        for step in &down.steps {
            if step.direction != Direction::Collapse {
                return Err(Error::CertificateMismatch("uncone segment must collapse".into()));
            }
            replay_step(&mut w, &la, step)?;
        }
        if fp.of_mask(w.mask()) != down.end {
            return Err(Error::CertificateMismatch(format!("collapse at {center} ends elsewhere")));
        }
        let next = w.to_complex()?;
        cur_a = la.restrict(&l, &next)?;
        cur = next;
    }
    Ok((cur, cur_a))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    /// The segments lead from `start` to `end`.
    Deformation,
    /// A vertex map induces a G-isomorphism from `start` to `end`.
    Isomorphism,
}

/// One link of the end-to-end chain. `reversed` links are read from `end`
/// to `start`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stage {
    pub name: String,
    pub relation: Relation,
    pub reversed: bool,
    pub start: String,
    pub end: String,
    pub segments: Vec<Segment>,
}

impl Stage {
    fn reading(&self) -> (&str, &str) {
        if self.reversed {
            (&self.end, &self.start)
        } else {
            (&self.start, &self.end)
        }
    }
}

/// `Hom(K_r^r, H) ⇝ sd Hom ≅ Δ(i(P)) ⇜ sd B_edge(H) ≅ sd B_edge(H) ⇜ B_edge(H)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremCertificate {
    pub graph: RGraphJson,
    pub stages: Vec<Stage>,
}

impl TheoremCertificate {
    pub fn num_steps(&self) -> usize {
        self.stages
            .iter()
            .flat_map(|s| &s.segments)
            .map(|s| s.steps.len())
            .sum()
    }

    pub fn stage(&self, name: &str) -> Option<&Stage> {
        self.stages.iter().find(|s| s.name == name)
    }

    /// Stages read in order must meet end to start.
    pub fn check_chaining(&self) -> Result<()> {
        for (x, y) in self.stages.iter().zip(self.stages.iter().skip(1)) {
            if x.reading().1 != y.reading().0 {
                return Err(Error::CertificateMismatch(format!(
                    "stage {} does not continue stage {}",
                    y.name, x.name
                )));
            }
        }
        Ok(())
    }
}

pub const STAGE_HOM_SD: &str = "hom-subdivision";
pub const STAGE_HOM_ISO: &str = "hom-to-image-chains";
pub const STAGE_MATCHING: &str = "box-matching-collapse";
pub const STAGE_BOX_ISO: &str = "box-subdivision-relabel";
pub const STAGE_BOX_SD: &str = "box-subdivision";

/// Everything built while certifying, kept for further checks.
pub struct TheoremRun {
    pub certificate: TheoremCertificate,
    pub hom: HomComplex,
    pub lemma: LemmaMatching,
    pub image: CellComplex,
    pub image_action: GroupAction,
}

fn image_iso_map<'a>(
    hom: &'a HomComplex,
    bx: &'a BoxComplex,
) -> impl Fn(&Label) -> Option<Label> + 'a {
    move |l| {
        let c = hom.complex.cell_of_label(l.as_bary()?)?;
        bx.map_i(hom.multihom(c)).map(Label::int)
    }
}

/// Checks that `sd Hom(K_r^r, H)` is G-isomorphic to `image`, the chains of
/// `i(P)` inside `sd B_edge(H)`, via `Int(f) ↦ Int(i(f))`.
pub fn check_image_isomorphism(
    hom: &HomComplex,
    bx: &BoxComplex,
    image: &CellComplex,
    image_action: &GroupAction,
    limits: &Limits,
) -> Result<()> {
    let (sd, sd_a) = barycentric_subdivision_g(&hom.complex, &hom.action, limits)?;
    check_g_isomorphism(&sd, &sd_a, image, image_action, |l| {
        bx.map_i(hom.multihom(l.as_int()?)).map(Label::int)
    })
}

/// The chains of `i(P)` as a subcomplex of `sd B_edge(H)`, with its action.
pub fn image_subcomplex(lemma: &LemmaMatching) -> Result<(CellComplex, GroupAction)> {
    let image = lemma.sd.subcomplex(&lemma.image_mask())?;
    let action = lemma.sd_action.restrict(&lemma.sd, &image)?;
    Ok((image, action))
}

fn stage_err<T>(r: Result<T>, stage: &str) -> Result<T> {
    r.map_err(|e| e.in_stage(stage))
}

/// Certifies that `Hom(K_r^r, H)` and `B_edge(H)` have the same simple
/// `S_r`-homotopy type.
pub fn main_theorem_certificate(h: &RGraph, limits: &Limits) -> Result<TheoremRun> {
    let hom = stage_err(hom_complex(h, limits), "build")?;
    let hom_sd = stage_err(sd_deformation(&hom.complex, &hom.action, limits), STAGE_HOM_SD)?;

    let lemma = stage_err(build_matching(h, limits), STAGE_MATCHING)?;
    let mc = stage_err(
        matching_to_collapse(&lemma.sd, &lemma.sd_action, &lemma.matching),
        STAGE_MATCHING,
    )?;
    let image = stage_err(mc.working.to_complex(), STAGE_MATCHING)?;
    let image_action = stage_err(lemma.sd_action.restrict(&lemma.sd, &image), STAGE_MATCHING)?;
    stage_err(
        check_g_isomorphism(
            &hom_sd.complex,
            &hom_sd.action,
            &image,
            &image_action,
            image_iso_map(&hom, &lemma.boxc),
        ),
        STAGE_HOM_ISO,
    )?;

    let box_sd = stage_err(
        sd_deformation(&lemma.boxc.complex, &lemma.boxc.action, limits),
        STAGE_BOX_SD,
    )?;
    stage_err(
        check_g_isomorphism(
            &box_sd.complex,
            &box_sd.action,
            &lemma.sd,
            &lemma.sd_action,
            bary_to_sd(&lemma.boxc.complex),
        ),
        STAGE_BOX_ISO,
    )?;

    let mcert = mc.certificate;
    let stages = vec![
        Stage {
            name: STAGE_HOM_SD.into(),
            relation: Relation::Deformation,
            reversed: false,
            start: hom_sd.certificate.start.clone(),
            end: hom_sd.certificate.end.clone(),
            segments: hom_sd.certificate.segments,
        },
        Stage {
            name: STAGE_HOM_ISO.into(),
            relation: Relation::Isomorphism,
            reversed: false,
            start: hom_sd.certificate.end,
            end: mcert.end.clone(),
            segments: Vec::new(),
        },
        Stage {
            name: STAGE_MATCHING.into(),
            relation: Relation::Deformation,
            reversed: true,
            start: mcert.start.clone(),
            end: mcert.end,
            segments: mcert.segments,
        },
        Stage {
            name: STAGE_BOX_ISO.into(),
            relation: Relation::Isomorphism,
            reversed: true,
            start: box_sd.certificate.end.clone(),
            end: mcert.start,
            segments: Vec::new(),
        },
        Stage {
            name: STAGE_BOX_SD.into(),
            relation: Relation::Deformation,
            reversed: true,
            start: box_sd.certificate.start,
            end: box_sd.certificate.end,
            segments: box_sd.certificate.segments,
        },
    ];
    let certificate = TheoremCertificate {
        graph: h.to_json(),
        stages,
    };
    certificate.check_chaining()?;
    Ok(TheoremRun {
        certificate,
        hom,
        lemma,
        image,
        image_action,
    })
}

fn deformation_of(stage: &Stage) -> DeformationCertificate {
    DeformationCertificate {
        start: stage.start.clone(),
        end: stage.end.clone(),
        segments: stage.segments.clone(),
    }
}

fn expect_stage<'a>(cert: &'a TheoremCertificate, i: usize, name: &str) -> Result<&'a Stage> {
    match cert.stages.get(i) {
        Some(s) if s.name == name => Ok(s),
        _ => Err(Error::CertificateMismatch(format!("stage {i} should be {name}"))),
    }
}

/// Rebuilds both complexes from the graph in the certificate and re-checks
/// every stage: each step is re-verified and each isomorphism recomputed.
pub fn replay_theorem(cert: &TheoremCertificate, limits: &Limits) -> Result<()> {
    cert.check_chaining()?;
    let h = RGraph::from_json(&cert.graph)?;

    let hom = hom_complex(&h, limits)?;
    let s = expect_stage(cert, 0, STAGE_HOM_SD)?;
    let (hom_end, hom_end_a) =
        stage_err(replay_sd_deformation(&hom.complex, &hom.action, &deformation_of(s), limits), STAGE_HOM_SD)?;

    let bx = box_edge(&h, limits)?;
    let (sd, sd_a) = barycentric_subdivision_g(&bx.complex, &bx.action, limits)?;
    let s = expect_stage(cert, 2, STAGE_MATCHING)?;
    let fp = Fingerprinter::new(&sd);
    if fp.of_all() != s.start || s.segments.len() != 1 {
        return Err(Error::CertificateMismatch("matching stage starts elsewhere".into()).in_stage(STAGE_MATCHING));
    }
    let mut w = Working::full(&sd);
    for step in &s.segments[0].steps {
        if step.direction != Direction::Collapse {
            return Err(Error::CertificateMismatch("matching stage must collapse".into()));
        }
        stage_err(replay_step(&mut w, &sd_a, step), STAGE_MATCHING)?;
    }
    let fixed = bx.image_mask();
    let image_mask: Vec<bool> = (0..sd.len())
        .map(|c| sd.verts(c).iter().all(|&b| fixed[b]))
        .collect();
    if w.mask() != image_mask.as_slice() || fp.of_mask(w.mask()) != s.end {
        return Err(Error::CertificateMismatch("matching stage does not end at the image chains".into())
            .in_stage(STAGE_MATCHING));
    }
    let image = w.to_complex()?;
    let image_a = sd_a.restrict(&sd, &image)?;

    expect_stage(cert, 1, STAGE_HOM_ISO)?;
    stage_err(
        check_g_isomorphism(&hom_end, &hom_end_a, &image, &image_a, image_iso_map(&hom, &bx)),
        STAGE_HOM_ISO,
    )?;

    let s = expect_stage(cert, 4, STAGE_BOX_SD)?;
    let (box_end, box_end_a) =
        stage_err(replay_sd_deformation(&bx.complex, &bx.action, &deformation_of(s), limits), STAGE_BOX_SD)?;
    expect_stage(cert, 3, STAGE_BOX_ISO)?;
    stage_err(
        check_g_isomorphism(&box_end, &box_end_a, &sd, &sd_a, bary_to_sd(&bx.complex)),
        STAGE_BOX_ISO,
    )?;
    if cert.stages.len() != 5 {
        return Err(Error::CertificateMismatch("unexpected extra stages".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cellcx::ComplexBuilder;

    fn from_facets(facets: &[&[usize]]) -> CellComplex {
        let mut b = ComplexBuilder::new();
        for f in facets {
            b.add_labeled_simplex(f.iter().map(|&v| Label::int(v)));
        }
        b.build_closure(&Limits::default()).unwrap()
    }

    fn swap(k: &CellComplex, pairs: &'static [(usize, usize)]) -> GroupAction {
        GroupAction::from_vertex_map(k, vec![vec![0, 1], vec![1, 0]], |g, l| {
            let v = l.as_int()?;
            let w = if g == 0 {
                v
            } else {
                pairs
                    .iter()
                    .find_map(|&(a, b)| if a == v { Some(b) } else if b == v { Some(a) } else { None })
                    .unwrap_or(v)
            };
            Some(Label::int(w))
        })
        .unwrap()
    }

    fn z3_triangle() -> (CellComplex, GroupAction) {
        let k = from_facets(&[&[0, 1], &[1, 2], &[0, 2]]);
        let a = GroupAction::from_vertex_map(
            &k,
            vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]],
            |g, l| Some(Label::int((l.as_int()? + g) % 3)),
        )
        .unwrap();
        (k, a)
    }

    #[test]
    fn collapse_examples() {
        let t = from_facets(&[&[0, 1, 2]]);
        let e = t.cell_by_labels(&[Label::int(0), Label::int(1)]).unwrap();
        let out = elementary_g_collapse(&t, &GroupAction::trivial(&t), e).unwrap();
        assert_eq!(out.len(), 5);

        let two = from_facets(&[&[0, 1], &[2, 3]]);
        let a = swap(&two, &[(0, 2), (1, 3)]);
        let out = elementary_g_collapse(&two, &a, 0).unwrap();
        assert_eq!(out.counts_by_dim(), vec![2]);

        let edge = from_facets(&[&[0, 1]]);
        let a = swap(&edge, &[(0, 1)]);
        assert!(matches!(
            elementary_g_collapse(&edge, &a, 0),
            Err(Error::OrbitNotIndependentlyFree(_))
        ));
    }

    #[test]
    fn collapse_errors() {
        let t = from_facets(&[&[0, 1, 2]]);
        let triv = GroupAction::trivial(&t);
        // a vertex of a triangle is free but its facet is two dimensions up
        assert!(matches!(
            elementary_g_collapse(&t, &triv, 0),
            Err(Error::WrongCodimension { facet_dim: 2, expected: 1, .. })
        ));
        let path = from_facets(&[&[0, 1], &[1, 2]]);
        assert!(matches!(
            elementary_g_collapse(&path, &GroupAction::trivial(&path), 1),
            Err(Error::NotFree(_))
        ));
    }

    #[test]
    fn empty_matching_is_trivial() {
        let t = from_facets(&[&[0, 1, 2]]);
        let m = Matching::from_pairs(t.len(), &[]);
        let mc = matching_to_collapse(&t, &GroupAction::trivial(&t), &m).unwrap();
        assert_eq!(mc.certificate.num_steps(), 0);
        assert_eq!(mc.certificate.start, mc.certificate.end);
        assert_eq!(mc.working.len(), 7);
    }

    #[test]
    fn stuck_matching() {
        // pairs that cannot be removed: an interior vertex matched with an edge
        let path = from_facets(&[&[0, 1], &[1, 2]]);
        let e01 = path.cell_by_labels(&[Label::int(0), Label::int(1)]).unwrap();
        let m = Matching::from_pairs(path.len(), &[(1, e01)]);
        assert!(matches!(
            matching_to_collapse(&path, &GroupAction::trivial(&path), &m),
            Err(Error::Stuck { .. })
        ));
    }

    #[test]
    fn stellar_stage_examples() {
        let l = Limits::default();
        let edge = from_facets(&[&[0, 1]]);
        let st = stellar_deformation_certificate(&edge, &GroupAction::trivial(&edge), 2, &l).unwrap();
        assert_eq!(st.complex.counts_by_dim(), vec![3, 2]);
        st.certificate.check_chaining().unwrap();
        assert!(!st.certificate.segments[0].steps.is_empty());

        let (k, a) = z3_triangle();
        let st = stellar_deformation_certificate(&k, &a, 3, &l).unwrap();
        assert_eq!(st.complex.counts_by_dim(), vec![6, 6]);

        let t = from_facets(&[&[0, 1, 2]]);
        let st = stellar_deformation_certificate(&t, &GroupAction::trivial(&t), 0, &l).unwrap();
        assert_eq!(st.complex.counts_by_dim(), vec![3, 3, 1]);
    }

    #[test]
    fn sd_deformation_examples() {
        let l = Limits::default();
        let pts = from_facets(&[&[0], &[1], &[2]]);
        let d = sd_deformation(&pts, &GroupAction::trivial(&pts), &l).unwrap();
        assert_eq!(d.complex.len(), 3);

        let t = from_facets(&[&[0, 1, 2]]);
        let d = sd_deformation(&t, &GroupAction::trivial(&t), &l).unwrap();
        assert_eq!(d.sd.counts_by_dim(), vec![7, 12, 6]);
        let (back, _) = replay_sd_deformation(&t, &GroupAction::trivial(&t), &d.certificate, &l).unwrap();
        assert_eq!(fingerprint(&back), d.certificate.end);

        let (k, a) = z3_triangle();
        let d = sd_deformation(&k, &a, &l).unwrap();
        assert_eq!(d.complex.counts_by_dim(), vec![6, 6]);
    }

    #[test]
    fn tampered_sd_certificate_is_rejected() {
        let l = Limits::default();
        let t = from_facets(&[&[0, 1, 2]]);
        let triv = GroupAction::trivial(&t);
        let d = sd_deformation(&t, &triv, &l).unwrap();
        let mut bad = d.certificate.clone();
        let seg = bad.segments.iter_mut().find(|s| s.steps.len() > 1).unwrap();
        seg.steps.swap(0, 1);
        assert!(replay_sd_deformation(&t, &triv, &bad, &l).is_err());
    }

    #[test]
    fn fingerprints_ignore_ids() {
        let a = from_facets(&[&[0, 1], &[1, 2]]);
        let b = from_facets(&[&[1, 2], &[0, 1]]);
        assert_eq!(fingerprint(&a), fingerprint(&b));
        let c = from_facets(&[&[0, 1], &[0, 2]]);
        assert_ne!(fingerprint(&a), fingerprint(&c));
    }

    #[test]
    fn theorem_on_small_graphs() {
        let l = Limits::default();
        for h in [
            RGraph::complete(3, 3).unwrap(),
            RGraph::complete_multipartite(&[1, 1, 2]).unwrap(),
            RGraph::complete(3, 2).unwrap(),
        ] {
            let run = main_theorem_certificate(&h, &l).unwrap();
            assert_eq!(run.certificate.stage(STAGE_MATCHING).unwrap().segments[0].steps.len(), 0);
            replay_theorem(&run.certificate, &l).unwrap();
        }
    }
}
