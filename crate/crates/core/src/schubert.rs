//! Root systems of type A, D, E6, E7, minuscule W^Q lattices, colored
//! minuscule posets and their Schubert-variety data.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::poset::{bit, bits_iter, Bits, DistributiveLattice, Poset, PosetError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SchubertError {
    #[error("unknown Dynkin type `{0}`")]
    UnknownType(String),
    #[error("node {node} is not minuscule for {kind}")]
    NotMinuscule { kind: String, node: usize },
    #[error("`{0}` is not a reduced word of a W^Q element")]
    BadWord(String),
    #[error("rank guard exceeded: {0}")]
    RankGuard(String),
    #[error(transparent)]
    Poset(#[from] PosetError),
}

pub type Result<T> = std::result::Result<T, SchubertError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DynkinType {
    A(usize),
    D(usize),
    E6,
    E7,
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DynkinType::A(n) => write!(f, "A{n}"),
            DynkinType::D(n) => write!(f, "D{n}"),
            DynkinType::E6 => write!(f, "E6"),
            DynkinType::E7 => write!(f, "E7"),
        }
    }
}

impl std::str::FromStr for DynkinType {
    type Err = SchubertError;
    fn from_str(s: &str) -> Result<DynkinType> {
        let bad = || SchubertError::UnknownType(s.to_string());
        let s = s.trim();
        let (head, tail) = s.split_at(s.chars().next().map_or(0, |c| c.len_utf8()));
        let n: usize = tail.parse().map_err(|_| bad())?;
        match (head.to_ascii_uppercase().as_str(), n) {
            ("A", n) if n >= 1 => Ok(DynkinType::A(n)),
            ("D", n) if n >= 4 => Ok(DynkinType::D(n)),
            ("E", 6) => Ok(DynkinType::E6),
            ("E", 7) => Ok(DynkinType::E7),
            _ => Err(bad()),
        }
    }
}

/// Simply laced root system, Bourbaki labelling. Weights are written in the
/// basis of fundamental weights, so the pairing (α_i^∨, μ) is the i-th entry.
#[derive(Clone, Debug)]
pub struct RootSystem {
    pub kind: DynkinType,
    pub cartan: Vec<Vec<i32>>,
}

impl RootSystem {
    pub fn new(kind: DynkinType) -> RootSystem {
        let (n, edges): (usize, Vec<(usize, usize)>) = match kind {
            DynkinType::A(n) => (n, (1..n).map(|i| (i, i + 1)).collect()),
            DynkinType::D(n) => {
                let mut e: Vec<_> = (1..n - 1).map(|i| (i, i + 1)).collect();
                e.push((n - 2, n));
                (n, e)
            }
            DynkinType::E6 => (6, vec![(1, 3), (3, 4), (4, 5), (5, 6), (2, 4)]),
            DynkinType::E7 => (7, vec![(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (2, 4)]),
        };
        let mut cartan = vec![vec![0; n]; n];
        for (i, row) in cartan.iter_mut().enumerate() {
            row[i] = 2;
        }
        for (a, b) in edges {
            cartan[a - 1][b - 1] = -1;
            cartan[b - 1][a - 1] = -1;
        }
        RootSystem { kind, cartan }
    }

    pub fn rank(&self) -> usize {
        self.cartan.len()
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        i != j && self.cartan[i][j] != 0
    }

    /// 1-based minuscule nodes.
    pub fn minuscule_nodes(&self) -> Vec<usize> {
        match self.kind {
            DynkinType::A(n) => (1..=n).collect(),
            DynkinType::D(n) => vec![1, n - 1, n],
            DynkinType::E6 => vec![1, 6],
            DynkinType::E7 => vec![7],
        }
    }

    pub fn fundamental_weight(&self, node: usize) -> Vec<i32> {
        let mut w = vec![0; self.rank()];
        w[node - 1] = 1;
        w
    }

    /// s_i μ = μ − (α_i^∨, μ) α_i, with α_i = i-th row of the Cartan matrix.
    pub fn reflect(&self, i: usize, mu: &[i32]) -> Vec<i32> {
        let m = mu[i];
        mu.iter().zip(&self.cartan[i]).map(|(&x, &c)| x - m * c).collect()
    }

    /// Positive roots in simple-root coordinates.
    pub fn positive_roots(&self) -> Vec<Vec<i32>> {
        let n = self.rank();
        let mut roots: Vec<Vec<i32>> = (0..n)
            .map(|i| {
                let mut r = vec![0; n];
                r[i] = 1;
                r
            })
            .collect();
        let mut k = 0;
        while k < roots.len() {
            let r = roots[k].clone();
            for i in 0..n {
                // (α_i^∨, r) in a simply laced system
                let p: i32 = (0..n).map(|j| self.cartan[i][j] * r[j]).sum();
                if p < 0 {
                    let mut s = r.clone();
                    s[i] -= p;
                    if !roots.contains(&s) {
                        roots.push(s);
                    }
                }
            }
            k += 1;
        }
        roots
    }

    /// Express a root (simple-root coordinates) in fundamental-weight coordinates.
    pub fn root_to_weight(&self, r: &[i32]) -> Vec<i32> {
        let n = self.rank();
        (0..n).map(|j| (0..n).map(|i| r[i] * self.cartan[i][j]).sum()).collect()
    }
}

/// The Bruhat lattice W^Q of a minuscule G/Q, realized as the W-orbit of the
/// fundamental weight. Element 0 is the identity coset.
#[derive(Clone, Debug)]
pub struct WQLattice {
    pub rs: RootSystem,
    pub node: usize,
    weights: Vec<Vec<i32>>,
    index: HashMap<Vec<i32>, usize>,
    /// simple reflections in the order they were applied to λ
    words: Vec<Vec<usize>>,
    lengths: Vec<usize>,
    down: Vec<Vec<(usize, usize)>>,
    up: Vec<Vec<(usize, usize)>>,
    ideal: Vec<Bits>,
    ji: Vec<usize>,
}

impl WQLattice {
    pub fn generate(rs: &RootSystem, node: usize) -> Result<WQLattice> {
        if !rs.minuscule_nodes().contains(&node) {
            return Err(SchubertError::NotMinuscule { kind: rs.kind.to_string(), node });
        }
        let start = rs.fundamental_weight(node);
        let mut weights = vec![start.clone()];
        let mut index = HashMap::new();
        index.insert(start, 0usize);
        let mut words = vec![Vec::new()];
        let mut lengths = vec![0usize];
        let mut down: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
        let mut up: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
        let mut queue = VecDeque::from([0usize]);
        while let Some(k) = queue.pop_front() {
            let mu = weights[k].clone();
            for i in 0..rs.rank() {
                if mu[i] <= 0 {
                    continue;
                }
                let nu = rs.reflect(i, &mu);
                let j = match index.get(&nu) {
                    Some(&j) => j,
                    None => {
                        let j = weights.len();
                        index.insert(nu.clone(), j);
                        weights.push(nu);
                        let mut w = words[k].clone();
                        w.push(i);
                        words.push(w);
                        lengths.push(lengths[k] + 1);
                        down.push(Vec::new());
                        up.push(Vec::new());
                        queue.push_back(j);
                        j
                    }
                };
                up[k].push((j, i));
                down[j].push((k, i));
            }
        }
        let ji: Vec<usize> = (0..weights.len()).filter(|&k| down[k].len() == 1).collect();
        if ji.len() > crate::poset::MAX_ELEMENTS {
            return Err(SchubertError::RankGuard(format!("{} join-irreducibles", ji.len())));
        }
        let pos: HashMap<usize, usize> = ji.iter().enumerate().map(|(a, &k)| (k, a)).collect();
        // BFS order is by length, so lower covers are finished first
        let mut ideal = vec![0 as Bits; weights.len()];
        for k in 0..weights.len() {
            let mut b = 0;
            for &(j, _) in &down[k] {
                b |= ideal[j];
            }
            if let Some(&a) = pos.get(&k) {
                b |= bit(a);
            }
            ideal[k] = b;
        }
        Ok(WQLattice { rs: rs.clone(), node, weights, index, words, lengths, down, up, ideal, ji })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weight(&self, k: usize) -> &[i32] {
        &self.weights[k]
    }

    pub fn index_of_weight(&self, mu: &[i32]) -> Option<usize> {
        self.index.get(mu).copied()
    }

    pub fn length(&self, k: usize) -> usize {
        self.lengths[k]
    }

    pub fn lower_covers(&self, k: usize) -> &[(usize, usize)] {
        &self.down[k]
    }

    pub fn upper_covers(&self, k: usize) -> &[(usize, usize)] {
        &self.up[k]
    }

    pub fn longest(&self) -> usize {
        (0..self.len()).max_by_key(|&k| self.lengths[k]).unwrap_or(0)
    }

    /// Join-irreducible elements of W^Q, in BFS order.
    pub fn join_irreducibles(&self) -> &[usize] {
        &self.ji
    }

    /// Ideal of P_Q corresponding to w (bits index `join_irreducibles`).
    pub fn ideal_of(&self, k: usize) -> Bits {
        self.ideal[k]
    }

    fn sep(&self) -> &'static str {
        if self.rs.rank() >= 10 {
            "."
        } else {
            ""
        }
    }

    /// Reduced word (i j … k) = s_i s_j ⋯ s_k, rightmost applied first.
    pub fn word_string(&self, k: usize) -> String {
        let w: Vec<String> = self.words[k].iter().rev().map(|i| (i + 1).to_string()).collect();
        w.join(self.sep())
    }

    pub fn find_word(&self, word: &str) -> Result<usize> {
        let bad = || SchubertError::BadWord(word.to_string());
        let w = word.trim().trim_start_matches('(').trim_end_matches(')');
        let letters: Vec<usize> = if w.contains('.') || w.contains(',') || w.contains(' ') {
            w.split(|c| c == '.' || c == ',' || c == ' ')
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<usize>().map_err(|_| bad()))
                .collect::<Result<_>>()?
        } else {
            w.chars().map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad)).collect::<Result<_>>()?
        };
        let mut k = 0;
        for &l in letters.iter().rev() {
            if l == 0 || l > self.rs.rank() {
                return Err(bad());
            }
            k = self.up[k].iter().find(|&&(_, i)| i == l - 1).map(|&(j, _)| j).ok_or_else(bad)?;
        }
        Ok(k)
    }

    /// Number of saturated chains id → w in W^Q; by the minuscule Chevalley
    /// formula this is the degree of X(w).
    pub fn chevalley_degree(&self, w: usize) -> u128 {
        let mut c = vec![0u128; self.len()];
        c[0] = 1;
        for k in 1..self.len() {
            c[k] = self.down[k].iter().map(|&(j, _)| c[j]).sum();
        }
        c[w]
    }

    /// The full minuscule poset P_Q with its coloration.
    pub fn full_poset(&self) -> ColoredPoset {
        self.colored_poset(self.longest())
    }

    /// P_w: join-irreducibles below w, colored by the reflection of their unique lower cover.
    pub fn colored_poset(&self, w: usize) -> ColoredPoset {
        let sel = self.ideal[w];
        let elems: Vec<usize> = bits_iter(sel).collect();
        let names: Vec<String> = elems.iter().map(|&a| self.word_string(self.ji[a])).collect();
        let mut rel = Vec::new();
        for (x, &a) in elems.iter().enumerate() {
            let ia = self.ideal[self.ji[a]];
            for (y, &b) in elems.iter().enumerate() {
                if a != b && ia & bit(b) != 0 {
                    rel.push((x, y));
                }
            }
        }
        let poset = Poset::from_relation(names, &rel).expect("Bruhat order");
        let color = elems.iter().map(|&a| self.down[self.ji[a]][0].1).collect();
        let emb = poset.auto_embedding();
        let poset = match emb {
            Some(e) => poset.with_embedding(e).expect("computed embedding"),
            None => poset,
        };
        ColoredPoset { poset, color, rs: self.rs.clone() }
    }

    pub fn colored_poset_of_word(&self, word: &str) -> Result<ColoredPoset> {
        Ok(self.colored_poset(self.find_word(word)?))
    }

    /// Join in the Bruhat order, through the ideal isomorphism.
    pub fn join(&self, a: usize, b: usize) -> Option<usize> {
        let t = self.ideal[a] | self.ideal[b];
        (0..self.len()).find(|&k| self.ideal[k] == t)
    }

    pub fn meet(&self, a: usize, b: usize) -> Option<usize> {
        let t = self.ideal[a] & self.ideal[b];
        (0..self.len()).find(|&k| self.ideal[k] == t)
    }

    /// Checks that w ↦ ideal is an isomorphism W^Q ≅ J(P_Q): a bijection
    /// on ideals carrying Bruhat covers to inclusion covers.
    pub fn is_distributive(&self) -> bool {
        let pq = self.full_poset().poset;
        let Ok(l) = DistributiveLattice::new(&pq) else { return false };
        if l.len() != self.len() {
            return false;
        }
        let mut seen = std::collections::HashSet::new();
        for k in 0..self.len() {
            if !pq.is_ideal(self.ideal[k]) || !seen.insert(self.ideal[k]) {
                return false;
            }
            for &(j, _) in &self.down[k] {
                let diff = self.ideal[k] & !self.ideal[j];
                if diff.count_ones() != 1 || self.ideal[j] & !self.ideal[k] != 0 {
                    return false;
                }
            }
        }
        true
    }
}

/// A minuscule poset P_w with its coloration β: P_w → S (0-based root indices).
#[derive(Clone, Debug)]
pub struct ColoredPoset {
    pub poset: Poset,
    pub color: Vec<usize>,
    pub rs: RootSystem,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct PeaksHoles {
    pub peaks: Vec<usize>,
    pub holes: Vec<usize>,
    pub essential: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SingularComponent {
    pub hole: String,
    /// 1-based simple root
    pub color: usize,
    pub elements: Vec<String>,
    pub dimension: usize,
    pub degree: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct SchubertReport {
    pub dimension: usize,
    pub peaks: Vec<String>,
    pub holes: Vec<String>,
    pub essential_holes: Vec<String>,
    pub gorenstein: bool,
    pub fano_index: Option<usize>,
    pub locally_factorial: bool,
    pub degree: u128,
    pub anticanonical_coefficients: Vec<usize>,
    pub singular_components: Vec<SingularComponent>,
    /// codimension of the singular locus, `None` when X(w) is smooth
    pub singular_codim: Option<usize>,
}

impl ColoredPoset {
    /// Peaks, holes and essential holes, read literally: a hole is maximal in
    /// its color class and has exactly two elements above it whose color is
    /// linked to its own.
    pub fn peaks_holes(&self) -> PeaksHoles {
        let p = &self.poset;
        let peaks = p.maximal();
        let mut holes = Vec::new();
        for u in 0..p.len() {
            let c = self.color[u];
            let above = p.above(u);
            if bits_iter(above).any(|v| self.color[v] == c) {
                continue;
            }
            let linked = bits_iter(above).filter(|&v| self.rs.cartan[c][self.color[v]] != 0).count();
            if linked == 2 {
                holes.push(u);
            }
        }
        let essential = holes
            .iter()
            .copied()
            .filter(|&u| {
                let pu = self.complement_ideal(u);
                holes.iter().all(|&v| v == u || pu & bit(v) != 0)
            })
            .collect();
        PeaksHoles { peaks, holes, essential }
    }

    /// P^u = {v : v ⋡ u}.
    pub fn complement_ideal(&self, u: usize) -> Bits {
        self.poset.full() & !(self.poset.above(u) | bit(u))
    }

    pub fn report(&self) -> SchubertReport {
        let p = &self.poset;
        let ph = self.peaks_holes();
        let hs = p.heights();
        let degree = DistributiveLattice::new(p).and_then(|l| l.count_maximal_chains()).unwrap_or(0);
        let names = |v: &[usize]| v.iter().map(|&u| p.name(u).to_string()).collect::<Vec<_>>();
        let singular_components: Vec<SingularComponent> = ph
            .essential
            .iter()
            .map(|&u| {
                let pu = self.complement_ideal(u);
                let (sub, _) = p.subposet(pu);
                let deg = DistributiveLattice::new(&sub).and_then(|l| l.count_maximal_chains()).unwrap_or(0);
                SingularComponent {
                    hole: p.name(u).to_string(),
                    color: self.color[u] + 1,
                    elements: bits_iter(pu).map(|v| p.name(v).to_string()).collect(),
                    dimension: pu.count_ones() as usize,
                    degree: deg,
                }
            })
            .collect();
        let dim_sing = singular_components.iter().map(|c| c.dimension).max();
        SchubertReport {
            dimension: p.len(),
            peaks: names(&ph.peaks),
            holes: names(&ph.holes),
            essential_holes: names(&ph.essential),
            gorenstein: hs.pure,
            fano_index: hs.pure.then_some(hs.h_p),
            locally_factorial: ph.peaks.len() == 1,
            degree,
            anticanonical_coefficients: ph.peaks.iter().map(|&u| hs.h[u] + 1).collect(),
            singular_components,
            singular_codim: dim_sing.map(|d| p.len() - d),
        }
    }

    /// Dimension of the singular locus, `None` if smooth.
    pub fn singular_dimension(&self) -> Option<usize> {
        self.peaks_holes().essential.iter().map(|&u| self.complement_ideal(u).count_ones() as usize).max()
    }
}

/// Rank guards for the classification scan.
#[derive(Clone, Copy, Debug)]
pub struct RankGuards {
    pub max_a: usize,
    pub max_d: usize,
}

impl Default for RankGuards {
    fn default() -> Self {
        RankGuards { max_a: 12, max_d: 8 }
    }
}

/// All minuscule G/Q up to the guards, one node per diagram symmetry class.
pub fn minuscule_families(g: RankGuards) -> Vec<(DynkinType, usize)> {
    let mut out = Vec::new();
    for n in 1..=g.max_a {
        for k in 1..=(n + 1) / 2 {
            out.push((DynkinType::A(n), k));
        }
    }
    for n in 4..=g.max_d {
        out.push((DynkinType::D(n), 1));
        out.push((DynkinType::D(n), n));
    }
    out.push((DynkinType::E6, 1));
    out.push((DynkinType::E7, 7));
    out
}

/// One deformation class of smooth Calabi–Yau complete intersections.
#[derive(Clone, Debug)]
pub struct CicyClass {
    pub family: String,
    pub word: String,
    pub poset: Poset,
    pub degrees: Vec<usize>,
    /// core of the poset after stripping extensions, with the quadric rule applied
    pub core: Poset,
    pub extensions: usize,
    pub key_degrees: Vec<usize>,
    pub label: String,
    /// unique peak: X(w) is locally factorial and the 3-fold has Picard number one
    pub picard_one: bool,
    pub report: SchubertReport,
}

/// Partitions of `total` into exactly `parts` positive parts, nondecreasing.
pub fn degree_vectors(total: usize, parts: usize) -> Vec<Vec<usize>> {
    fn rec(total: usize, parts: usize, min: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 0 {
            if total == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for d in min..=total {
            if d * parts > total {
                break;
            }
            cur.push(d);
            rec(total - d, parts - 1, d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, parts, 1, &mut Vec::new(), &mut out);
    out
}

/// Canonical deformation key of P(d): strip extensions, trade the ℙ¹×ℙ¹ core
/// of a quadric for a degree-2 hypersurface in projective space, then use
/// linear sections to cancel cone directions.
pub fn canonical_key(p: &Poset, degrees: &[usize]) -> (Poset, usize, Vec<usize>) {
    let (mut core, mut e) = p.reduce_extensions();
    let mut degs = degrees.to_vec();
    if core.len() == 2 && core.covers().is_empty() {
        // iterated cone over ℙ¹×ℙ¹ = quadric in ℙ^{3+e}
        core = Poset::chain(1);
        e += 2;
        degs.push(2);
    }
    degs.sort_unstable();
    let ones = degs.iter().filter(|&&d| d == 1).count();
    let m = ones.min(e);
    degs.drain(..m);
    e -= m;
    (core, e, degs)
}

/// Scan every minuscule Schubert variety within the guards and keep the
/// smooth Calabi–Yau 3-fold complete intersections, one per deformation class.
pub fn classify_cicy3(g: RankGuards) -> Result<Vec<CicyClass>> {
    if g.max_a > 40 || g.max_d > 30 {
        return Err(SchubertError::RankGuard(format!("A{} / D{}", g.max_a, g.max_d)));
    }
    let labels = label_table();
    let mut classes: Vec<CicyClass> = Vec::new();
    for (kind, node) in minuscule_families(g) {
        let rs = RootSystem::new(kind);
        let l = WQLattice::generate(&rs, node)?;
        let mut seen_ideals = std::collections::HashSet::new();
        for w in 0..l.len() {
            let n = l.length(w);
            if n < 4 || !seen_ideals.insert(l.ideal_of(w)) {
                continue;
            }
            let cp = l.colored_poset(w);
            let hs = cp.poset.heights();
            if !hs.pure || n > hs.h_p + 3 {
                continue;
            }
            let r = n - 3;
            let dim_sing = cp.singular_dimension();
            if let Some(ds) = dim_sing {
                if r <= ds {
                    continue;
                }
            }
            for degs in degree_vectors(hs.h_p, r) {
                let (core, e, kd) = canonical_key(&cp.poset, &degs);
                let known = classes
                    .iter()
                    .position(|c| c.extensions == e && c.key_degrees == kd && c.core.is_isomorphic(&core));
                let cand_better = |c: &CicyClass| cp.poset.len() < c.poset.len();
                match known {
                    Some(i) if !cand_better(&classes[i]) => {}
                    _ => {
                        let label = label_for(&labels, &core, e, &kd)
                            .unwrap_or_else(|| format!("{kind}/P{node} ({})", l.word_string(w)));
                        let class = CicyClass {
                            family: format!("{kind}/P{node}"),
                            word: l.word_string(w),
                            poset: cp.poset.clone(),
                            degrees: degs.clone(),
                            core,
                            extensions: e,
                            key_degrees: kd,
                            label,
                            picard_one: cp.peaks_holes().peaks.len() == 1,
                            report: cp.report(),
                        };
                        match known {
                            Some(i) => classes[i] = class,
                            None => classes.push(class),
                        }
                    }
                }
            }
        }
    }
    Ok(classes)
}

struct LabelEntry {
    name: String,
    poset: Poset,
}

fn label_table() -> Vec<LabelEntry> {
    let mut t = Vec::new();
    for a in 2..=6 {
        for b in a..=8 {
            t.push(LabelEntry { name: format!("G({a},{})", a + b), poset: Poset::rectangle(a, b) });
        }
    }
    let d5 = WQLattice::generate(&RootSystem::new(DynkinType::D(5)), 5).expect("D5");
    t.push(LabelEntry { name: "OG(5,10)".into(), poset: d5.full_poset().poset });
    let e6 = WQLattice::generate(&RootSystem::new(DynkinType::E6), 1).expect("E6");
    t.push(LabelEntry { name: "Sigma".into(), poset: e6.colored_poset_of_word(SIGMA_WORD).expect("sigma").poset });
    t.push(LabelEntry { name: "OP2".into(), poset: e6.full_poset().poset });
    t
}

fn fmt_degrees(d: &[usize]) -> String {
    let mut parts = Vec::new();
    let mut i = 0;
    while i < d.len() {
        let mut j = i;
        while j < d.len() && d[j] == d[i] {
            j += 1;
        }
        if j - i == 1 {
            parts.push(d[i].to_string());
        } else {
            parts.push(format!("{}^{}", d[i], j - i));
        }
        i = j;
    }
    parts.join(",")
}

fn label_for(t: &[LabelEntry], core: &Poset, e: usize, kd: &[usize]) -> Option<String> {
    if core.len() == 1 {
        return Some(format!("P{}({})", e + 1, fmt_degrees(kd)));
    }
    for entry in t {
        let (c, d) = entry.poset.reduce_extensions();
        if c.is_isomorphic(core) {
            // rebuild the degree vector of the named ambient space
            let ones = d as isize - e as isize;
            if ones < 0 {
                continue;
            }
            let mut full = vec![1; ones as usize];
            full.extend_from_slice(kd);
            full.sort_unstable();
            return Some(format!("{}({})", entry.name, fmt_degrees(&full)));
        }
    }
    None
}

/// The reduced word of Σ in E6/P1.
pub const SIGMA_WORD: &str = "345134265431";

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orbit_sizes() {
        let e6 = WQLattice::generate(&RootSystem::new(DynkinType::E6), 1).unwrap();
        assert_eq!(e6.len(), 27);
        let e7 = WQLattice::generate(&RootSystem::new(DynkinType::E7), 7).unwrap();
        assert_eq!(e7.len(), 56);
        let a = WQLattice::generate(&RootSystem::new(DynkinType::A(4)), 1).unwrap();
        assert_eq!(a.len(), 5);
        assert!(a.full_poset().poset.is_isomorphic(&Poset::chain(4)));
        let g26 = WQLattice::generate(&RootSystem::new(DynkinType::A(5)), 2).unwrap();
        assert!(g26.full_poset().poset.is_isomorphic(&Poset::rectangle(2, 4)));
    }

    #[test]
    fn rejects_non_minuscule() {
        let e = WQLattice::generate(&RootSystem::new(DynkinType::E6), 2).unwrap_err();
        assert!(matches!(e, SchubertError::NotMinuscule { .. }));
    }

    #[test]
    fn positive_root_counts() {
        assert_eq!(RootSystem::new(DynkinType::E6).positive_roots().len(), 36);
        assert_eq!(RootSystem::new(DynkinType::E7).positive_roots().len(), 63);
        assert_eq!(RootSystem::new(DynkinType::D(5)).positive_roots().len(), 20);
        assert_eq!(RootSystem::new(DynkinType::A(4)).positive_roots().len(), 10);
    }

    #[test]
    fn sigma_word() {
        let e6 = WQLattice::generate(&RootSystem::new(DynkinType::E6), 1).unwrap();
        let w = e6.find_word(SIGMA_WORD).unwrap();
        assert_eq!(e6.length(w), 12);
        assert_eq!(e6.find_word(&e6.word_string(w)).unwrap(), w);
        assert_eq!(e6.chevalley_degree(w), 33);
        assert!(e6.find_word("22").is_err());
        assert_eq!(e6.colored_poset(0).poset.len(), 0);
        assert_eq!(e6.full_poset().poset.len(), 16);
    }

    #[test]
    fn degree_vector_enumeration() {
        assert_eq!(degree_vectors(5, 2), vec![vec![1, 4], vec![2, 3]]);
        assert_eq!(degree_vectors(9, 9), vec![vec![1; 9]]);
    }
}
