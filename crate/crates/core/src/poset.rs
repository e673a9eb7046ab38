//! Finite posets, bounded posets and the distributive lattice of order ideals.
//!
//! Elements are addressed by index; ids are kept only for I/O. Subsets of a
//! poset (ideals, fibers, cycles) are `Bits` masks over those indices.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Bits = u128;

/// Largest poset accepted. Two bits are reserved for 0̂ and 1̂ of the bounded poset.
pub const MAX_ELEMENTS: usize = 126;
pub const MAX_IDEALS: usize = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PosetError {
    #[error("duplicate element id `{0}`")]
    DuplicateId(String),
    #[error("unknown element id `{0}`")]
    UnknownId(String),
    #[error("cover relation contains a cycle")]
    Cycle,
    #[error("cover ({0}, {1}) is implied by transitivity")]
    RedundantCover(String, String),
    #[error("embedding inconsistent with covers at `{0}`")]
    BadEmbedding(String),
    #[error("embedding is not planar")]
    NonPlanar,
    #[error("poset has {0} elements, limit is {MAX_ELEMENTS}")]
    TooLarge(usize),
    #[error("more than {0} order ideals")]
    IdealGuard(usize),
    #[error("integer overflow while counting")]
    Overflow,
    #[error("not a lattice: {0}")]
    NotALattice(String),
    #[error("invalid contraction: {0}")]
    InvalidContraction(String),
}

pub type Result<T> = std::result::Result<T, PosetError>;

#[inline]
pub fn bit(i: usize) -> Bits {
    1u128 << i
}

pub fn bits_iter(mut b: Bits) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if b == 0 {
            None
        } else {
            let i = b.trailing_zeros() as usize;
            b &= b - 1;
            Some(i)
        }
    })
}

/// Left-to-right order of the Hasse diagram: the maxima under 1̂ and the
/// lower covers of each element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    pub top: Vec<usize>,
    pub down: Vec<Vec<usize>>,
}

#[derive(Clone, Debug)]
pub struct Poset {
    names: Vec<String>,
    index: HashMap<String, usize>,
    lower: Vec<Vec<usize>>,
    upper: Vec<Vec<usize>>,
    below: Vec<Bits>,
    above: Vec<Bits>,
    topo: Vec<usize>,
    embedding: Option<Embedding>,
}

impl Poset {
    pub fn new<S: AsRef<str>>(elements: &[S], covers: &[(S, S)]) -> Result<Poset> {
        let names: Vec<String> = elements.iter().map(|s| s.as_ref().to_string()).collect();
        let mut index = HashMap::new();
        for (i, n) in names.iter().enumerate() {
            if index.insert(n.clone(), i).is_some() {
                return Err(PosetError::DuplicateId(n.clone()));
            }
        }
        let look = |s: &str| index.get(s).copied().ok_or_else(|| PosetError::UnknownId(s.to_string()));
        let mut pairs = Vec::with_capacity(covers.len());
        for (u, v) in covers {
            pairs.push((look(u.as_ref())?, look(v.as_ref())?));
        }
        Poset::from_covers(names, &pairs)
    }

    /// Build from index pairs `(upper, lower)`.
    pub fn from_covers(names: Vec<String>, covers: &[(usize, usize)]) -> Result<Poset> {
        let n = names.len();
        if n > MAX_ELEMENTS {
            return Err(PosetError::TooLarge(n));
        }
        let mut index = HashMap::new();
        for (i, s) in names.iter().enumerate() {
            if index.insert(s.clone(), i).is_some() {
                return Err(PosetError::DuplicateId(s.clone()));
            }
        }
        let mut lower = vec![Vec::new(); n];
        let mut upper = vec![Vec::new(); n];
        for &(u, v) in covers {
            if u >= n || v >= n {
                return Err(PosetError::UnknownId(format!("#{}", u.max(v))));
            }
            if u == v {
                return Err(PosetError::Cycle);
            }
            if lower[u].contains(&v) {
                return Err(PosetError::RedundantCover(names[u].clone(), names[v].clone()));
            }
            lower[u].push(v);
            upper[v].push(u);
        }
        // Kahn, bottom-up
        let mut indeg: Vec<usize> = lower.iter().map(|l| l.len()).collect();
        let mut stack: Vec<usize> = (0..n).rev().filter(|&i| indeg[i] == 0).collect();
        let mut topo = Vec::with_capacity(n);
        while let Some(v) = stack.pop() {
            topo.push(v);
            for &u in upper[v].iter().rev() {
                indeg[u] -= 1;
                if indeg[u] == 0 {
                    stack.push(u);
                }
            }
        }
        if topo.len() != n {
            return Err(PosetError::Cycle);
        }
        let mut below = vec![0 as Bits; n];
        for &u in &topo {
            let mut b = 0;
            for &v in &lower[u] {
                b |= below[v] | bit(v);
            }
            below[u] = b;
        }
        for u in 0..n {
            for &v in &lower[u] {
                if lower[u].iter().any(|&w| w != v && below[w] & bit(v) != 0) {
                    return Err(PosetError::RedundantCover(names[u].clone(), names[v].clone()));
                }
            }
        }
        let mut above = vec![0 as Bits; n];
        for &u in topo.iter().rev() {
            let mut b = 0;
            for &v in &upper[u] {
                b |= above[v] | bit(v);
            }
            above[u] = b;
        }
        Ok(Poset { names, index, lower, upper, below, above, topo, embedding: None })
    }

    /// Poset generated by an arbitrary strict relation (pairs `(greater, smaller)`);
    /// the covers are its transitive reduction.
    pub fn from_relation(names: Vec<String>, rel: &[(usize, usize)]) -> Result<Poset> {
        let n = names.len();
        if n > MAX_ELEMENTS {
            return Err(PosetError::TooLarge(n));
        }
        let mut gt = vec![0 as Bits; n];
        for &(u, v) in rel {
            if u == v {
                return Err(PosetError::Cycle);
            }
            gt[u] |= bit(v);
        }
        // transitive closure
        loop {
            let mut changed = false;
            for u in 0..n {
                let mut b = gt[u];
                for v in bits_iter(gt[u]) {
                    b |= gt[v];
                }
                if b != gt[u] {
                    gt[u] = b;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        if (0..n).any(|u| gt[u] & bit(u) != 0) {
            return Err(PosetError::Cycle);
        }
        let mut covers = Vec::new();
        for u in 0..n {
            for v in bits_iter(gt[u]) {
                if !bits_iter(gt[u]).any(|w| w != v && gt[w] & bit(v) != 0) {
                    covers.push((u, v));
                }
            }
        }
        Poset::from_covers(names, &covers)
    }

    pub fn chain(n: usize) -> Poset {
        let names = (1..=n).map(|i| format!("c{i}")).collect();
        let covers: Vec<_> = (1..n).map(|i| (i, i - 1)).collect();
        let p = Poset::from_covers(names, &covers).expect("chain");
        let emb = p.auto_embedding();
        p.with_embedding_unchecked(emb)
    }

    pub fn antichain(n: usize) -> Poset {
        let names = (1..=n).map(|i| format!("a{i}")).collect();
        Poset::from_covers(names, &[]).expect("antichain")
    }

    /// Product of chains a × b, the poset of a Grassmannian G(a, a+b).
    pub fn rectangle(a: usize, b: usize) -> Poset {
        let mut names = Vec::new();
        for i in 0..a {
            for j in 0..b {
                names.push(format!("{},{}", i + 1, j + 1));
            }
        }
        let id = |i: usize, j: usize| i * b + j;
        let mut covers = Vec::new();
        for i in 0..a {
            for j in 0..b {
                if i + 1 < a {
                    covers.push((id(i + 1, j), id(i, j)));
                }
                if j + 1 < b {
                    covers.push((id(i, j + 1), id(i, j)));
                }
            }
        }
        Poset::from_covers(names, &covers).expect("rectangle")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn lower_covers(&self, u: usize) -> &[usize] {
        &self.lower[u]
    }

    pub fn upper_covers(&self, u: usize) -> &[usize] {
        &self.upper[u]
    }

    /// Strict down-set of `u`.
    pub fn below(&self, u: usize) -> Bits {
        self.below[u]
    }

    /// Strict up-set of `u`.
    pub fn above(&self, u: usize) -> Bits {
        self.above[u]
    }

    /// `u < v`.
    pub fn lt(&self, u: usize, v: usize) -> bool {
        self.below[v] & bit(u) != 0
    }

    pub fn le(&self, u: usize, v: usize) -> bool {
        u == v || self.lt(u, v)
    }

    pub fn comparable(&self, u: usize, v: usize) -> bool {
        self.le(u, v) || self.le(v, u)
    }

    pub fn full(&self) -> Bits {
        if self.len() == 128 {
            Bits::MAX
        } else {
            bit(self.len()) - 1
        }
    }

    /// Covers as `(upper, lower)` pairs.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.len() {
            for &v in &self.lower[u] {
                out.push((u, v));
            }
        }
        out
    }

    pub fn minimal(&self) -> Vec<usize> {
        (0..self.len()).filter(|&u| self.lower[u].is_empty()).collect()
    }

    pub fn maximal(&self) -> Vec<usize> {
        (0..self.len()).filter(|&u| self.upper[u].is_empty()).collect()
    }

    /// A linear extension, minimal elements first.
    pub fn linear_extension(&self) -> &[usize] {
        &self.topo
    }

    pub fn is_ideal(&self, s: Bits) -> bool {
        bits_iter(s).all(|u| self.below[u] & !s == 0)
    }

    /// Maximal elements of the subset `s`.
    pub fn max_of(&self, s: Bits) -> Bits {
        let mut m = 0;
        for u in bits_iter(s) {
            if self.above[u] & s == 0 {
                m |= bit(u);
            }
        }
        m
    }

    pub fn min_of(&self, s: Bits) -> Bits {
        let mut m = 0;
        for u in bits_iter(s) {
            if self.below[u] & s == 0 {
                m |= bit(u);
            }
        }
        m
    }

    pub fn down_closure(&self, s: Bits) -> Bits {
        let mut d = s;
        for u in bits_iter(s) {
            d |= self.below[u];
        }
        d
    }

    pub fn up_closure(&self, s: Bits) -> Bits {
        let mut d = s;
        for u in bits_iter(s) {
            d |= self.above[u];
        }
        d
    }

    /// Full subposet on `s`; element names are kept. The second value maps new
    /// indices to old ones.
    pub fn subposet(&self, s: Bits) -> (Poset, Vec<usize>) {
        let old: Vec<usize> = bits_iter(s).collect();
        let mut new_of = vec![usize::MAX; self.len()];
        for (i, &o) in old.iter().enumerate() {
            new_of[o] = i;
        }
        let names = old.iter().map(|&o| self.names[o].clone()).collect();
        let mut rel = Vec::new();
        for (i, &o) in old.iter().enumerate() {
            for v in bits_iter(self.below[o] & s) {
                rel.push((i, new_of[v]));
            }
        }
        let p = Poset::from_relation(names, &rel).expect("subposet of a poset");
        (p, old)
    }

    /// The order dual.
    pub fn dual(&self) -> Poset {
        let covers: Vec<_> = self.covers().into_iter().map(|(u, v)| (v, u)).collect();
        Poset::from_covers(self.names.clone(), &covers).expect("dual")
    }

    pub fn heights(&self) -> Heights {
        let n = self.len();
        let mut h = vec![0usize; n];
        for &u in &self.topo {
            h[u] = 1 + self.lower[u].iter().map(|&v| h[v]).max().unwrap_or(0);
        }
        let h_p = 1 + self.maximal().iter().map(|&u| h[u]).max().unwrap_or(0);
        let mut pure = self.maximal().iter().all(|&u| h[u] + 1 == h_p);
        for u in 0..n {
            if self.lower[u].iter().any(|&v| h[v] + 1 != h[u]) {
                pure = false;
            }
        }
        Heights { h, h_p, pure }
    }

    pub fn embedding(&self) -> Option<&Embedding> {
        self.embedding.as_ref()
    }

    /// Attach a planar embedding. Each list must be a permutation of the
    /// corresponding covers.
    pub fn with_embedding(mut self, emb: Embedding) -> Result<Poset> {
        let n = self.len();
        if emb.down.len() != n {
            return Err(PosetError::BadEmbedding("<size>".into()));
        }
        let same = |a: &[usize], b: &[usize]| {
            let mut x = a.to_vec();
            let mut y = b.to_vec();
            x.sort_unstable();
            y.sort_unstable();
            x == y
        };
        if !same(&emb.top, &self.maximal()) {
            return Err(PosetError::BadEmbedding("^".into()));
        }
        for u in 0..n {
            if !same(&emb.down[u], &self.lower[u]) {
                return Err(PosetError::BadEmbedding(self.names[u].clone()));
            }
        }
        for u in 0..n {
            self.lower[u] = emb.down[u].clone();
        }
        self.embedding = Some(emb);
        Ok(self)
    }

    fn with_embedding_unchecked(self, emb: Option<Embedding>) -> Poset {
        match emb {
            Some(e) => self.with_embedding(e).expect("computed embedding"),
            None => self,
        }
    }

    /// Search for a crossing-free layered drawing of a pure poset, levels given
    /// by height. Returns `None` for non-pure posets or when no drawing exists.
    pub fn auto_embedding(&self) -> Option<Embedding> {
        let hs = self.heights();
        if !hs.pure {
            return None;
        }
        let h_p = hs.h_p;
        // level index: h_P - h, so level 0 holds the maxima
        let mut levels: Vec<Vec<usize>> = vec![Vec::new(); h_p.saturating_sub(1)];
        for u in 0..self.len() {
            levels[h_p - 1 - hs.h[u]].push(u);
        }
        let mut pos = vec![0usize; self.len()];
        let mut chosen: Vec<Vec<usize>> = Vec::new();
        if !self.layout_rec(&levels, 0, &mut pos, &mut chosen) {
            return None;
        }
        let mut down = vec![Vec::new(); self.len()];
        for u in 0..self.len() {
            let mut l = self.lower[u].clone();
            l.sort_by_key(|&v| pos[v]);
            down[u] = l;
        }
        let top = chosen.first().cloned().unwrap_or_default();
        Some(Embedding { top, down })
    }

    fn layout_rec(
        &self,
        levels: &[Vec<usize>],
        k: usize,
        pos: &mut Vec<usize>,
        chosen: &mut Vec<Vec<usize>>,
    ) -> bool {
        if k == levels.len() {
            return true;
        }
        let mut perm = levels[k].clone();
        let mut found = false;
        permutations(&mut perm, 0, &mut |p| {
            for (i, &u) in p.iter().enumerate() {
                pos[u] = i;
            }
            if k > 0 && self.crosses(&chosen[k - 1], p, pos) {
                return false;
            }
            chosen.push(p.to_vec());
            if self.layout_rec(levels, k + 1, pos, chosen) {
                found = true;
                return true;
            }
            chosen.pop();
            for (i, &u) in p.iter().enumerate() {
                pos[u] = i;
            }
            false
        });
        found
    }

    fn crosses(&self, up_level: &[usize], low_level: &[usize], pos: &[usize]) -> bool {
        let _ = low_level;
        let mut edges = Vec::new();
        for &u in up_level {
            for &v in &self.lower[u] {
                edges.push((pos[u], pos[v]));
            }
        }
        for i in 0..edges.len() {
            for j in i + 1..edges.len() {
                let (a, b) = (edges[i], edges[j]);
                if (a.0 < b.0 && a.1 > b.1) || (a.0 > b.0 && a.1 < b.1) {
                    return true;
                }
            }
        }
        false
    }

    /// Left-to-right position of every element within its height level, read off
    /// the embedding. Fails if the embedding has crossings.
    pub fn level_positions(&self) -> Result<Vec<usize>> {
        let emb = self.embedding.as_ref().ok_or(PosetError::NonPlanar)?;
        let hs = self.heights();
        if !hs.pure {
            return Err(PosetError::NonPlanar);
        }
        let n = self.len();
        // leftmost path key from 1̂
        let mut key: Vec<Option<Vec<usize>>> = vec![None; n];
        for (i, &u) in emb.top.iter().enumerate() {
            key[u] = Some(vec![i]);
        }
        for &u in self.topo.iter().rev() {
            let ku = key[u].clone().expect("reachable from top");
            for (i, &v) in emb.down[u].iter().enumerate() {
                let mut kv = ku.clone();
                kv.push(i);
                if key[v].as_ref().map_or(true, |old| kv < *old) {
                    key[v] = Some(kv);
                }
            }
        }
        let mut levels: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for u in 0..n {
            levels.entry(hs.h[u]).or_default().push(u);
        }
        let mut pos = vec![0; n];
        for lv in levels.values_mut() {
            lv.sort_by(|&a, &b| key[a].cmp(&key[b]));
            for (i, &u) in lv.iter().enumerate() {
                pos[u] = i;
            }
        }
        for lv in levels.values() {
            if self.crosses(lv, &[], &pos) {
                return Err(PosetError::NonPlanar);
            }
            for &u in lv {
                if emb.down[u].windows(2).any(|w| pos[w[0]] > pos[w[1]]) {
                    return Err(PosetError::NonPlanar);
                }
            }
        }
        if emb.top.windows(2).any(|w| pos[w[0]] > pos[w[1]]) {
            return Err(PosetError::NonPlanar);
        }
        Ok(pos)
    }

    /// Add a new global maximum (`top = true`) or minimum.
    pub fn extend(&self, top: bool) -> Poset {
        let n = self.len();
        let mut k = 1;
        let new_name = loop {
            let c = if top { format!("top{k}") } else { format!("bot{k}") };
            if !self.index.contains_key(&c) {
                break c;
            }
            k += 1;
        };
        let mut names = self.names.clone();
        names.push(new_name);
        let mut covers = self.covers();
        if top {
            for u in self.maximal() {
                covers.push((n, u));
            }
        } else {
            for u in self.minimal() {
                covers.push((u, n));
            }
        }
        let p = Poset::from_covers(names, &covers).expect("extension");
        let emb = p.auto_embedding();
        p.with_embedding_unchecked(emb)
    }

    /// Strip iterated global maxima and minima. Stops at a single element.
    pub fn reduce_extensions(&self) -> (Poset, usize) {
        let mut keep = self.full();
        let mut d = 0;
        loop {
            if keep.count_ones() <= 1 {
                break;
            }
            let mx = self.max_of(keep);
            if mx.count_ones() == 1 {
                keep &= !mx;
                d += 1;
                continue;
            }
            let mn = self.min_of(keep);
            if mn.count_ones() == 1 {
                keep &= !mn;
                d += 1;
                continue;
            }
            break;
        }
        (self.subposet(keep).0, d)
    }

    /// Cheap isomorphism invariant: sorted (height, depth, #lower, #upper).
    pub fn signature(&self) -> Vec<(usize, usize, usize, usize)> {
        let h = self.heights().h;
        let d = self.dual().heights().h;
        let mut s: Vec<_> = (0..self.len())
            .map(|u| (h[u], d[u], self.lower[u].len(), self.upper[u].len()))
            .collect();
        s.sort_unstable();
        s
    }

    /// An isomorphism `self → other` as an index map, by backtracking over
    /// height-preserving assignments.
    pub fn isomorphism(&self, other: &Poset) -> Option<Vec<usize>> {
        if self.len() != other.len() || self.covers().len() != other.covers().len() {
            return None;
        }
        if self.signature() != other.signature() {
            return None;
        }
        let ha = self.heights().h;
        let da = self.dual().heights().h;
        let hb = other.heights().h;
        let db = other.dual().heights().h;
        let ka: Vec<_> =
            (0..self.len()).map(|u| (ha[u], da[u], self.lower[u].len(), self.upper[u].len())).collect();
        let kb: Vec<_> =
            (0..other.len()).map(|u| (hb[u], db[u], other.lower[u].len(), other.upper[u].len())).collect();
        let order = self.topo.clone();
        let mut map = vec![usize::MAX; self.len()];
        let mut used = vec![false; other.len()];
        fn rec(
            a: &Poset,
            b: &Poset,
            ka: &[(usize, usize, usize, usize)],
            kb: &[(usize, usize, usize, usize)],
            order: &[usize],
            i: usize,
            map: &mut Vec<usize>,
            used: &mut Vec<bool>,
        ) -> bool {
            if i == order.len() {
                return true;
            }
            let u = order[i];
            for v in 0..b.len() {
                if used[v] || ka[u] != kb[v] {
                    continue;
                }
                // every lower cover of u is already mapped (topological order)
                let ok = a.lower[u].iter().all(|&x| b.lower[v].contains(&map[x]));
                if !ok {
                    continue;
                }
                map[u] = v;
                used[v] = true;
                if rec(a, b, ka, kb, order, i + 1, map, used) {
                    return true;
                }
                used[v] = false;
                map[u] = usize::MAX;
            }
            false
        }
        if rec(self, other, &ka, &kb, &order, 0, &mut map, &mut used) {
            Some(map)
        } else {
            None
        }
    }

    pub fn is_isomorphic(&self, other: &Poset) -> bool {
        self.isomorphism(other).is_some()
    }
}

fn permutations(v: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    if k == v.len() {
        return f(v);
    }
    for i in k..v.len() {
        v.swap(k, i);
        if permutations(v, k + 1, f) {
            v.swap(k, i);
            return true;
        }
        v.swap(k, i);
    }
    false
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Heights {
    pub h: Vec<usize>,
    pub h_p: usize,
    pub pure: bool,
}

/// Node of the bounded poset P̂: elements of P keep their index, then 0̂ and 1̂.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    Bottom,
    Elem(usize),
    Top,
}

#[derive(Clone, Debug)]
pub struct BoundedPoset {
    pub base: Poset,
    /// Hasse edges of P̂ as (upper, lower) node indices, see [`BoundedPoset::node`].
    pub edges: Vec<(usize, usize)>,
    below: Vec<Bits>,
    above: Vec<Bits>,
    adj: Vec<Bits>,
}

impl BoundedPoset {
    pub fn new(base: &Poset) -> BoundedPoset {
        let n = base.len();
        let (bot, top) = (n, n + 1);
        let hs = base.heights();
        let pos = base.level_positions().ok();
        // edges listed top-down, left to right
        let mut edges: Vec<(usize, usize)> = Vec::new();
        let mut tops = base.maximal();
        if let Some(e) = base.embedding() {
            tops = e.top.clone();
        }
        for u in tops {
            edges.push((top, u));
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&u| (std::cmp::Reverse(hs.h[u]), pos.as_ref().map_or(u, |p| p[u]), u));
        for &u in &order {
            for &v in base.lower_covers(u) {
                edges.push((u, v));
            }
        }
        for &u in &order {
            if base.lower_covers(u).is_empty() {
                edges.push((u, bot));
            }
        }
        let all = base.full();
        let mut below = vec![0 as Bits; n + 2];
        let mut above = vec![0 as Bits; n + 2];
        for u in 0..n {
            below[u] = base.below(u) | bit(bot);
            above[u] = base.above(u) | bit(top);
        }
        below[top] = all | bit(bot);
        above[bot] = all | bit(top);
        let mut adj = vec![0 as Bits; n + 2];
        for &(u, v) in &edges {
            adj[u] |= bit(v);
            adj[v] |= bit(u);
        }
        BoundedPoset { base: base.clone(), edges, below, above, adj }
    }

    pub fn bottom(&self) -> usize {
        self.base.len()
    }

    pub fn top(&self) -> usize {
        self.base.len() + 1
    }

    pub fn node_count(&self) -> usize {
        self.base.len() + 2
    }

    pub fn node(&self, i: usize) -> Node {
        let n = self.base.len();
        if i == n {
            Node::Bottom
        } else if i == n + 1 {
            Node::Top
        } else {
            Node::Elem(i)
        }
    }

    pub fn node_name(&self, i: usize) -> String {
        match self.node(i) {
            Node::Bottom => "<0>".into(),
            Node::Top => "<1>".into(),
            Node::Elem(u) => self.base.name(u).to_string(),
        }
    }

    pub fn lt(&self, u: usize, v: usize) -> bool {
        self.below[v] & bit(u) != 0
    }

    pub fn below(&self, u: usize) -> Bits {
        self.below[u]
    }

    pub fn above(&self, u: usize) -> Bits {
        self.above[u]
    }

    pub fn adjacent(&self, u: usize) -> Bits {
        self.adj[u]
    }

    fn is_convex(&self, s: Bits) -> bool {
        for a in bits_iter(s) {
            for b in bits_iter(s & self.above[a]) {
                if self.above[a] & self.below[b] & !s != 0 {
                    return false;
                }
            }
        }
        true
    }

    fn is_connected(&self, s: Bits) -> bool {
        if s == 0 {
            return true;
        }
        let start = s.trailing_zeros() as usize;
        let mut seen = bit(start);
        let mut frontier = seen;
        while frontier != 0 {
            let mut next = 0;
            for u in bits_iter(frontier) {
                next |= self.adj[u] & s;
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen == s
    }

    /// Validate a fiber partition and build the contraction.
    pub fn contraction(&self, fibers: Vec<Bits>) -> Result<Contraction> {
        let nn = self.node_count();
        let all: Bits = bit(nn) - 1;
        let mut fiber_of = vec![usize::MAX; nn];
        let mut union = 0;
        for (i, &f) in fibers.iter().enumerate() {
            if f == 0 || union & f != 0 {
                return Err(PosetError::InvalidContraction("fibers must partition P̂".into()));
            }
            union |= f;
            for u in bits_iter(f) {
                fiber_of[u] = i;
            }
        }
        if union != all {
            return Err(PosetError::InvalidContraction("fibers must cover P̂".into()));
        }
        let (bot, top) = (self.bottom(), self.top());
        if fiber_of[bot] == fiber_of[top] {
            return Err(PosetError::InvalidContraction("0̂ and 1̂ share a fiber".into()));
        }
        for &f in &fibers {
            if !self.is_connected(f) {
                return Err(PosetError::InvalidContraction("disconnected fiber".into()));
            }
        }
        // tightness and induced relation
        let k = fibers.len();
        let mut lt = vec![0 as Bits; k];
        for i in 0..k {
            let mut down = 0;
            for u in bits_iter(fibers[i]) {
                down |= self.below[u];
            }
            for j in 0..k {
                if i != j && down & fibers[j] != 0 {
                    lt[i] |= bit(j);
                }
            }
        }
        for i in 0..k {
            for j in bits_iter(lt[i]) {
                if lt[j] & bit(i) != 0 {
                    return Err(PosetError::InvalidContraction("fibers are not tight".into()));
                }
            }
        }
        let names: Vec<String> = (0..k)
            .map(|i| bits_iter(fibers[i]).map(|u| self.node_name(u)).collect::<Vec<_>>().join("+"))
            .collect();
        let rel: Vec<(usize, usize)> =
            (0..k).flat_map(|i| bits_iter(lt[i]).map(move |j| (i, j))).collect();
        let full = Poset::from_relation(names, &rel)
            .map_err(|_| PosetError::InvalidContraction("induced relation has a cycle".into()))?;
        let (fb, ft) = (fiber_of[bot], fiber_of[top]);
        let keep: Bits = (0..k).filter(|&i| i != fb && i != ft).fold(0, |a, i| a | bit(i));
        let (quotient, _) = full.subposet(keep);
        let base_len = self.base.len();
        Ok(Contraction { fibers, fiber_of, quotient, codim: base_len - (k - 2) })
    }

    /// All contractions whose quotient has `|P| - codim` elements.
    pub fn enumerate_contractions(&self, codim: usize) -> Vec<Contraction> {
        let nn = self.node_count();
        if codim > self.base.len() {
            return Vec::new();
        }
        // connected node sets of size 2..=codim+1 that are convex
        let mut blocks: Vec<Bits> = Vec::new();
        let mut seen = std::collections::HashSet::new();
        let mut layer: Vec<Bits> = (0..nn).map(bit).collect();
        for _size in 2..=codim + 1 {
            let mut next = Vec::new();
            for &s in &layer {
                let mut nb = 0;
                for u in bits_iter(s) {
                    nb |= self.adj[u];
                }
                for v in bits_iter(nb & !s) {
                    let t = s | bit(v);
                    if seen.insert(t) {
                        next.push(t);
                    }
                }
            }
            for &t in &next {
                let bounds = bit(self.bottom()) | bit(self.top());
                if t & bounds != bounds && self.is_convex(t) {
                    blocks.push(t);
                }
            }
            layer = next;
        }
        blocks.sort_by_key(|b| (b.trailing_zeros(), *b));
        let mut out = Vec::new();
        let mut chosen = Vec::new();
        self.combine_blocks(&blocks, 0, codim, 0, &mut chosen, &mut out);
        out
    }

    fn combine_blocks(
        &self,
        blocks: &[Bits],
        start: usize,
        remaining: usize,
        used: Bits,
        chosen: &mut Vec<Bits>,
        out: &mut Vec<Contraction>,
    ) {
        if remaining == 0 {
            let nn = self.node_count();
            let mut fibers = chosen.clone();
            for u in 0..nn {
                if used & bit(u) == 0 {
                    fibers.push(bit(u));
                }
            }
            fibers.sort_by_key(|f| f.trailing_zeros());
            if let Ok(c) = self.contraction(fibers) {
                out.push(c);
            }
            return;
        }
        for i in start..blocks.len() {
            let b = blocks[i];
            let cost = b.count_ones() as usize - 1;
            if cost > remaining || b & used != 0 {
                continue;
            }
            // blocks are sorted by minimum node, keep chosen blocks in that order
            if let Some(&last) = chosen.last() {
                if b.trailing_zeros() <= last.trailing_zeros() {
                    continue;
                }
            }
            chosen.push(b);
            self.combine_blocks(blocks, i + 1, remaining - cost, used | b, chosen, out);
            chosen.pop();
        }
    }

    /// Contractions collapsing one minimal convex cycle to a point, every other
    /// fiber a singleton.
    pub fn minimal_convex_cycles(&self) -> Vec<Contraction> {
        let nn = self.node_count();
        let bounds = bit(self.bottom()) | bit(self.top());
        let mut cycles = Vec::new();
        for s in 0..nn {
            let mut path = vec![s];
            self.cycle_rec(s, &mut path, bit(s), &mut cycles);
        }
        let mut out = Vec::new();
        for c in cycles {
            if c & bounds == bounds || !self.is_convex(c) {
                continue;
            }
            let mut fibers = vec![c];
            for u in 0..nn {
                if c & bit(u) == 0 {
                    fibers.push(bit(u));
                }
            }
            fibers.sort_by_key(|f| f.trailing_zeros());
            if let Ok(k) = self.contraction(fibers) {
                out.push(k);
            }
        }
        out
    }

    // Induced cycles whose smallest node is path[0].
    fn cycle_rec(&self, s: usize, path: &mut Vec<usize>, on: Bits, out: &mut Vec<Bits>) {
        let last = *path.last().unwrap();
        let interior = on & !bit(s) & !bit(last);
        for v in bits_iter(self.adj[last] & !on) {
            if v < s {
                continue;
            }
            // chords to interior path nodes are forbidden
            if self.adj[v] & interior != 0 {
                continue;
            }
            let closes = path.len() >= 2 && self.adj[v] & bit(s) != 0;
            if closes {
                if path.len() >= 3 && path[1] < v {
                    out.push(on | bit(v));
                }
                continue;
            }
            path.push(v);
            self.cycle_rec(s, path, on | bit(v), out);
            path.pop();
        }
    }
}

/// A contraction of P̂: a partition into connected, tight fibers.
#[derive(Clone, Debug)]
pub struct Contraction {
    pub fibers: Vec<Bits>,
    pub fiber_of: Vec<usize>,
    /// P′: the induced order on the fibers other than those of 0̂ and 1̂.
    pub quotient: Poset,
    pub codim: usize,
}

impl Contraction {
    /// The fibers with more than one node.
    pub fn nontrivial_fibers(&self) -> Vec<Bits> {
        self.fibers.iter().copied().filter(|f| f.count_ones() > 1).collect()
    }
}

/// The lattice J(P) of order ideals, sorted by size.
#[derive(Clone, Debug)]
pub struct DistributiveLattice {
    ground: Vec<String>,
    ideals: Vec<Bits>,
    index: HashMap<Bits, usize>,
    /// lower covers: (removed element, ideal index)
    down: Vec<Vec<(usize, usize)>>,
    up: Vec<Vec<(usize, usize)>>,
}

impl DistributiveLattice {
    pub fn new(p: &Poset) -> Result<DistributiveLattice> {
        Self::with_guard(p, MAX_IDEALS)
    }

    pub fn with_guard(p: &Poset, guard: usize) -> Result<DistributiveLattice> {
        let n = p.len();
        let mut layer = vec![0 as Bits];
        let mut ideals = Vec::new();
        for size in 0..=n {
            layer.sort_unstable();
            ideals.extend_from_slice(&layer);
            if ideals.len() > guard {
                return Err(PosetError::IdealGuard(guard));
            }
            if size == n {
                break;
            }
            let mut next = std::collections::HashSet::new();
            for &i in &layer {
                for u in 0..n {
                    if i & bit(u) == 0 && p.below(u) & !i == 0 {
                        next.insert(i | bit(u));
                    }
                }
            }
            layer = next.into_iter().collect();
        }
        let index: HashMap<Bits, usize> = ideals.iter().enumerate().map(|(k, &b)| (b, k)).collect();
        let mut down = vec![Vec::new(); ideals.len()];
        let mut up = vec![Vec::new(); ideals.len()];
        for (k, &i) in ideals.iter().enumerate() {
            for u in bits_iter(p.max_of(i)) {
                let j = index[&(i & !bit(u))];
                down[k].push((u, j));
                up[j].push((u, k));
            }
        }
        Ok(DistributiveLattice { ground: p.names().to_vec(), ideals, index, down, up })
    }

    pub fn len(&self) -> usize {
        self.ideals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ideals.is_empty()
    }

    pub fn ground_size(&self) -> usize {
        self.ground.len()
    }

    pub fn ideal(&self, k: usize) -> Bits {
        self.ideals[k]
    }

    pub fn ideals(&self) -> &[Bits] {
        &self.ideals
    }

    pub fn index_of(&self, b: Bits) -> Option<usize> {
        self.index.get(&b).copied()
    }

    pub fn bottom(&self) -> usize {
        0
    }

    pub fn top(&self) -> usize {
        self.ideals.len() - 1
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.index[&(self.ideals[a] | self.ideals[b])]
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.index[&(self.ideals[a] & self.ideals[b])]
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.ideals[a] & !self.ideals[b] == 0
    }

    pub fn lower_covers(&self, k: usize) -> &[(usize, usize)] {
        &self.down[k]
    }

    pub fn upper_covers(&self, k: usize) -> &[(usize, usize)] {
        &self.up[k]
    }

    /// h(I) = Σ_{I' ⊆ I} f(I'), by inclusion-exclusion over the lower covers:
    /// the ideals strictly below I are the union of the down-sets of I∖{u}.
    pub fn down_sum(&self, f: &[i128]) -> Result<Vec<i128>> {
        let mut h = vec![0i128; self.len()];
        for k in 0..self.len() {
            let i = self.ideals[k];
            let maxes: Vec<usize> = self.down[k].iter().map(|&(u, _)| u).collect();
            let mut acc = f[k];
            for s in 1u32..(1 << maxes.len()) {
                let mut m = 0;
                for (t, &u) in maxes.iter().enumerate() {
                    if s & (1 << t) != 0 {
                        m |= bit(u);
                    }
                }
                let j = self.index[&(i & !m)];
                let term = h[j];
                acc = if s.count_ones() % 2 == 1 { acc.checked_add(term) } else { acc.checked_sub(term) }
                    .ok_or(PosetError::Overflow)?;
            }
            h[k] = acc;
        }
        Ok(h)
    }

    /// g'(I) = Σ over ideals I' ⊆ I with I ∖ I' an antichain of g(I').
    pub fn antichain_step(&self, g: &[i128]) -> Result<Vec<i128>> {
        let mut out = vec![0i128; self.len()];
        for k in 0..self.len() {
            let i = self.ideals[k];
            let maxes: Vec<usize> = self.down[k].iter().map(|&(u, _)| u).collect();
            let mut acc = 0i128;
            for s in 0u32..(1 << maxes.len()) {
                let mut m = 0;
                for (t, &u) in maxes.iter().enumerate() {
                    if s & (1 << t) != 0 {
                        m |= bit(u);
                    }
                }
                acc = acc.checked_add(g[self.index[&(i & !m)]]).ok_or(PosetError::Overflow)?;
            }
            out[k] = acc;
        }
        Ok(out)
    }

    pub fn count_maximal_chains(&self) -> Result<u128> {
        let mut c = vec![0u128; self.len()];
        c[0] = 1;
        for k in 1..self.len() {
            let mut s = 0u128;
            for &(_, j) in &self.down[k] {
                s = s.checked_add(c[j]).ok_or(PosetError::Overflow)?;
            }
            c[k] = s;
        }
        Ok(c[self.top()])
    }

    /// c_0 = 1 and, for i ≥ 1, c_i = number of chains I_0 ⊊ … ⊊ I_i of ideals.
    /// The last entry c_|P| is the number of maximal chains.
    pub fn chain_length_counts(&self) -> Result<Vec<u128>> {
        let n = self.ground.len();
        let mut cur = vec![1i128; self.len()];
        let mut out = vec![1u128];
        for _ in 1..=n {
            let h = self.down_sum(&cur)?;
            // strictly below: subtract the diagonal
            cur = h.iter().zip(&cur).map(|(a, b)| a - b).collect();
            let mut tot: i128 = 0;
            for &x in &cur {
                tot = tot.checked_add(x).ok_or(PosetError::Overflow)?;
            }
            out.push(tot as u128);
        }
        Ok(out)
    }

    /// The poset of join-irreducible ideals. Each is a principal ideal ↓u and
    /// carries the name of u.
    pub fn join_irreducibles(&self) -> Result<Poset> {
        if self.ideals.first() != Some(&0) {
            return Err(PosetError::NotALattice("missing bottom".into()));
        }
        let ji: Vec<usize> = (0..self.len()).filter(|&k| self.down[k].len() == 1).collect();
        let names: Vec<String> = ji.iter().map(|&k| self.ground[self.down[k][0].0].clone()).collect();
        let mut rel = Vec::new();
        for (a, &ka) in ji.iter().enumerate() {
            for (b, &kb) in ji.iter().enumerate() {
                if a != b && self.le(kb, ka) {
                    rel.push((a, b));
                }
            }
        }
        Poset::from_relation(names, &rel)
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq, Eq)]
pub struct PosetJson {
    pub elements: Vec<String>,
    pub covers: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub embedding: Option<BTreeMap<String, Vec<String>>>,
}

/// Key of the embedding map holding the left-to-right order of the maxima.
pub const TOP_KEY: &str = "^";

impl PosetJson {
    pub fn from_poset(p: &Poset) -> PosetJson {
        let covers = p.covers().into_iter().map(|(u, v)| (p.name(u).to_string(), p.name(v).to_string())).collect();
        let embedding = p.embedding().map(|e| {
            let mut m = BTreeMap::new();
            m.insert(TOP_KEY.to_string(), e.top.iter().map(|&u| p.name(u).to_string()).collect());
            for u in 0..p.len() {
                if !e.down[u].is_empty() {
                    m.insert(p.name(u).to_string(), e.down[u].iter().map(|&v| p.name(v).to_string()).collect());
                }
            }
            m
        });
        PosetJson { elements: p.names().to_vec(), covers, embedding }
    }

    pub fn to_poset(&self) -> Result<Poset> {
        let p = Poset::new(&self.elements, &self.covers)?;
        let Some(m) = &self.embedding else { return Ok(p) };
        let look = |s: &String| p.index_of(s).ok_or_else(|| PosetError::UnknownId(s.clone()));
        let top = match m.get(TOP_KEY) {
            Some(v) => v.iter().map(look).collect::<Result<Vec<_>>>()?,
            None => p.maximal(),
        };
        let mut down = vec![Vec::new(); p.len()];
        for (k, v) in m {
            if k == TOP_KEY {
                continue;
            }
            let u = look(k)?;
            down[u] = v.iter().map(look).collect::<Result<Vec<_>>>()?;
        }
        for u in 0..p.len() {
            if down[u].is_empty() && !p.lower_covers(u).is_empty() {
                return Err(PosetError::BadEmbedding(p.name(u).to_string()));
            }
        }
        p.with_embedding(Embedding { top, down })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diamond() -> Poset {
        Poset::rectangle(2, 2)
    }

    #[test]
    fn chain_and_antichain_basics() {
        let c = Poset::chain(4);
        assert_eq!(c.covers().len(), 3);
        assert_eq!(Poset::antichain(3).covers().len(), 0);
        let h = c.heights();
        assert_eq!(h.h_p, 5);
        assert!(h.pure);
    }

    #[test]
    fn rejects_bad_input() {
        let e = Poset::new(&["a", "a"], &[]).unwrap_err();
        assert_eq!(e, PosetError::DuplicateId("a".into()));
        let e = Poset::new(&["a", "b"], &[("a", "b"), ("b", "a")]).unwrap_err();
        assert_eq!(e, PosetError::Cycle);
        let e = Poset::new(&["a", "b", "c"], &[("c", "b"), ("b", "a"), ("c", "a")]).unwrap_err();
        assert!(matches!(e, PosetError::RedundantCover(..)));
    }

    #[test]
    fn nonpure_fence() {
        // a fence b > a < c, plus an isolated minimal element d below c
        let p = Poset::new(&["a", "b", "c", "d"], &[("b", "a"), ("c", "a"), ("c", "d")]).unwrap();
        assert!(p.heights().pure);
        let q = Poset::new(&["a", "b", "c", "d"], &[("b", "a"), ("c", "b"), ("c", "d")]).unwrap();
        assert!(!q.heights().pure);
    }

    #[test]
    fn lattice_sizes() {
        assert_eq!(DistributiveLattice::new(&Poset::antichain(4)).unwrap().len(), 16);
        assert_eq!(DistributiveLattice::new(&Poset::chain(5)).unwrap().len(), 6);
        let l = DistributiveLattice::new(&Poset::antichain(4)).unwrap();
        assert_eq!(l.count_maximal_chains().unwrap(), 24);
        assert_eq!(DistributiveLattice::new(&Poset::chain(5)).unwrap().count_maximal_chains().unwrap(), 1);
    }

    #[test]
    fn guard_trips() {
        let e = DistributiveLattice::with_guard(&Poset::antichain(10), 100).unwrap_err();
        assert_eq!(e, PosetError::IdealGuard(100));
    }

    #[test]
    fn birkhoff_small() {
        for p in [Poset::rectangle(2, 3), Poset::antichain(3), Poset::chain(4)] {
            let l = DistributiveLattice::new(&p).unwrap();
            assert!(l.join_irreducibles().unwrap().is_isomorphic(&p));
        }
    }

    #[test]
    fn diamond_has_one_cycle() {
        let b = BoundedPoset::new(&diamond());
        let cyc = b.minimal_convex_cycles();
        assert_eq!(cyc.len(), 1);
        assert_eq!(cyc[0].codim, 3);
        assert!(BoundedPoset::new(&Poset::chain(5)).minimal_convex_cycles().is_empty());
    }

    #[test]
    fn contractions_of_diamond() {
        let p = diamond();
        let b = BoundedPoset::new(&p);
        assert_eq!(b.enumerate_contractions(0).len(), 1);
        assert_eq!(b.enumerate_contractions(1).len(), b.edges.len());
        // vertices of the order polytope
        let l = DistributiveLattice::new(&p).unwrap();
        assert_eq!(b.enumerate_contractions(p.len()).len(), l.len());
    }

    #[test]
    fn extensions() {
        // a zigzag has no global extremum
        let z = Poset::new(&["a", "b", "c", "d"], &[("c", "a"), ("c", "b"), ("d", "b")]).unwrap();
        let (core, d) = z.extend(true).reduce_extensions();
        assert_eq!(d, 1);
        assert!(core.is_isomorphic(&z));
        // a rectangle is itself a double extension of its corner-free part
        let (core, d) = Poset::rectangle(2, 3).reduce_extensions();
        assert_eq!((core.len(), d), (4, 2));
        assert!(core.is_isomorphic(&z));
        let (core, d) = Poset::chain(5).reduce_extensions();
        assert_eq!((core.len(), d), (1, 4));
        assert!(Poset::chain(3).extend(true).is_isomorphic(&Poset::chain(4)));
    }

    #[test]
    fn embedding_round_trip() {
        let p = Poset::rectangle(2, 3);
        let e = p.auto_embedding().unwrap();
        let p = p.with_embedding(e).unwrap();
        let j = PosetJson::from_poset(&p);
        let q = j.to_poset().unwrap();
        assert_eq!(q.embedding(), p.embedding());
        assert!(q.level_positions().is_ok());
    }
}
