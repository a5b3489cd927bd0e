//! Multigraphs on `[n]` with self-loops: the index set `alpha` of the
//! cumulant sums.
//!
//! Vertex `0` plays the role of the distinguished vertex carried by the
//! estimated quantity `x = v_1`; cumulants are constant on isomorphism
//! classes that fix it, so everything here is organized around rooted
//! canonical forms. Graphs never exceed a handful of vertices (an
//! edge-count cap of 8 keeps supports at <= 9 vertices), so canonization
//! is an exhaustive search over label permutations.

use crate::error::{Error, Result};
use itertools::Itertools;
use num::{BigUint, One, Zero};
use std::collections::{BTreeMap, BTreeSet, HashMap};

/// Default cap on `|alpha|` for sub-multigraph iteration.
pub const SUB_CAP: usize = 12;
/// Default cap on edge count for class enumeration.
pub const ENUM_CAP: usize = 8;

/// Whether self-loops and multi-edges are allowed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphMode {
    Multigraph,
    Simple,
}

/// An edge multiset on nonnegative vertex labels; pairs stored with
/// `i <= j`, sorted, multiplicities >= 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Multigraph {
    edges: Vec<((u32, u32), u32)>,
}

impl Multigraph {
    pub fn empty() -> Self {
        Multigraph { edges: Vec::new() }
    }

    /// Build from a list of (possibly repeated) unordered pairs.
    pub fn from_pairs(pairs: &[(usize, usize)]) -> Self {
        let mut map: BTreeMap<(u32, u32), u32> = BTreeMap::new();
        for &(a, b) in pairs {
            let (i, j) = if a <= b { (a, b) } else { (b, a) };
            *map.entry((i as u32, j as u32)).or_insert(0) += 1;
        }
        Multigraph {
            edges: map.into_iter().collect(),
        }
    }

    pub fn from_multiplicities(entries: &[((usize, usize), u32)]) -> Self {
        let mut map: BTreeMap<(u32, u32), u32> = BTreeMap::new();
        for &((a, b), m) in entries {
            if m == 0 {
                continue;
            }
            let (i, j) = if a <= b { (a, b) } else { (b, a) };
            *map.entry((i as u32, j as u32)).or_insert(0) += m;
        }
        Multigraph {
            edges: map.into_iter().collect(),
        }
    }

    pub fn edges(&self) -> &[((u32, u32), u32)] {
        &self.edges
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Total edge count `|alpha|` (with multiplicity).
    pub fn edge_count(&self) -> usize {
        self.edges.iter().map(|&(_, m)| m as usize).sum()
    }

    /// Number of distinct pairs carrying at least one edge.
    pub fn distinct_pair_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_simple(&self) -> bool {
        self.edges.iter().all(|&((i, j), m)| i != j && m == 1)
    }

    /// Vertex support `V(alpha)`.
    pub fn support(&self) -> BTreeSet<usize> {
        let mut s = BTreeSet::new();
        for &((i, j), _) in &self.edges {
            s.insert(i as usize);
            s.insert(j as usize);
        }
        s
    }

    /// `|V(alpha)|`.
    pub fn support_size(&self) -> usize {
        self.support().len()
    }

    /// `|V(alpha) ∪ {0}|`.
    pub fn support_size_with_root(&self) -> usize {
        let mut s = self.support();
        s.insert(0);
        s.len()
    }

    pub fn contains_root(&self) -> bool {
        self.edges
            .iter()
            .any(|&((i, j), _)| i == 0 || j == 0)
    }

    /// `alpha! = prod alpha_ij!` over distinct pairs.
    pub fn alpha_factorial(&self) -> BigUint {
        let mut acc = BigUint::one();
        for &(_, m) in &self.edges {
            for k in 2..=m {
                acc *= BigUint::from(k);
            }
        }
        acc
    }

    /// Iterate over all `beta <= alpha` (entrywise) with `binom(alpha, beta)`.
    pub fn sub_multigraphs(&self) -> Result<Vec<(Multigraph, BigUint)>> {
        let d = self.edge_count();
        if d > SUB_CAP {
            return Err(Error::CapExceeded { got: d, cap: SUB_CAP });
        }
        let mut out = Vec::new();
        let slots = self.edges.len();
        let mut levels = vec![0u32; slots];
        loop {
            let mut entries = Vec::new();
            let mut binom = BigUint::one();
            for (idx, &lev) in levels.iter().enumerate() {
                let ((i, j), m) = self.edges[idx];
                if lev > 0 {
                    entries.push(((i as usize, j as usize), lev));
                }
                binom *= binomial(m as usize, lev as usize);
            }
            out.push((Multigraph::from_multiplicities(&entries), binom));
            // mixed-radix increment
            let mut k = 0;
            loop {
                if k == slots {
                    return Ok(out);
                }
                if levels[k] < self.edges[k].1 {
                    levels[k] += 1;
                    for l in levels.iter_mut().take(k) {
                        *l = 0;
                    }
                    break;
                }
                k += 1;
            }
        }
    }

    /// Entrywise difference `alpha - beta`; requires `beta <= alpha`.
    pub fn minus(&self, beta: &Multigraph) -> Multigraph {
        let mut map: BTreeMap<(u32, u32), u32> =
            self.edges.iter().cloned().collect();
        for &(pair, m) in &beta.edges {
            let e = map.get_mut(&pair).expect("beta not <= alpha");
            assert!(*e >= m, "beta not <= alpha");
            *e -= m;
            if *e == 0 {
                map.remove(&pair);
            }
        }
        Multigraph {
            edges: map.into_iter().collect(),
        }
    }

    /// Entrywise max `alpha ∨ beta` (for binary-model moment products).
    pub fn join(&self, other: &Multigraph) -> Multigraph {
        let mut map: BTreeMap<(u32, u32), u32> =
            self.edges.iter().cloned().collect();
        for &(pair, m) in &other.edges {
            let e = map.entry(pair).or_insert(0);
            *e = (*e).max(m);
        }
        Multigraph {
            edges: map.into_iter().collect(),
        }
    }

    /// Partition edges by vertex connectivity. Returns the components (as
    /// multigraphs) and whether some nonempty component contains vertex 0.
    pub fn connected_components(&self) -> Vec<Multigraph> {
        let sup: Vec<usize> = self.support().into_iter().collect();
        if sup.is_empty() {
            return Vec::new();
        }
        let index: HashMap<usize, usize> =
            sup.iter().enumerate().map(|(k, &v)| (v, k)).collect();
        let mut dsu: Vec<usize> = (0..sup.len()).collect();
        fn find(dsu: &mut Vec<usize>, x: usize) -> usize {
            if dsu[x] != x {
                let r = find(dsu, dsu[x]);
                dsu[x] = r;
            }
            dsu[x]
        }
        for &((i, j), _) in &self.edges {
            let a = find(&mut dsu, index[&(i as usize)]);
            let b = find(&mut dsu, index[&(j as usize)]);
            dsu[a] = b;
        }
        let mut groups: BTreeMap<usize, Vec<((usize, usize), u32)>> = BTreeMap::new();
        for &((i, j), m) in &self.edges {
            let r = find(&mut dsu, index[&(i as usize)]);
            groups
                .entry(r)
                .or_default()
                .push(((i as usize, j as usize), m));
        }
        groups
            .into_values()
            .map(|es| Multigraph::from_multiplicities(&es))
            .collect()
    }

    /// True iff some nonempty connected component avoids vertex 0 -- the
    /// vanishing condition under which `kappa_alpha = 0` and `w_alpha = 0`.
    pub fn has_component_avoiding_root(&self) -> bool {
        self.connected_components()
            .iter()
            .any(|c| !c.contains_root())
    }

    /// Rooted: connected with vertex 0 in the (nonempty) support.
    pub fn is_rooted_connected(&self) -> bool {
        let comps = self.connected_components();
        comps.len() == 1 && comps[0].contains_root()
    }

    /// Canonical form under relabelings of the support that fix vertex 0
    /// (when present). Returns the relabeled graph and the number of label
    /// permutations realizing the canonical encoding (= automorphism count).
    pub fn canonical(&self) -> (Multigraph, u64) {
        let sup: Vec<usize> = self.support().into_iter().collect();
        let rooted = sup.contains(&0);
        let free: Vec<usize> = sup.iter().cloned().filter(|&v| v != 0).collect();
        // Free vertices take labels 1..=free.len(); root keeps label 0.
        // Unrooted supports also start at label 1 so the key cannot collide
        // with a rooted class of the same shape.
        let mut best: Option<Vec<((u32, u32), u32)>> = None;
        let mut best_count = 0u64;
        let k = free.len();
        for perm in free.iter().permutations(k) {
            let mut map: HashMap<usize, u32> = HashMap::new();
            map.insert(0, 0);
            for (pos, &&v) in perm.iter().enumerate() {
                map.insert(v, (pos + 1) as u32);
            }
            let mut relabeled: Vec<((u32, u32), u32)> = self
                .edges
                .iter()
                .map(|&((i, j), m)| {
                    let a = map[&(i as usize)];
                    let b = map[&(j as usize)];
                    let p = if a <= b { (a, b) } else { (b, a) };
                    (p, m)
                })
                .collect();
            relabeled.sort();
            match &best {
                None => {
                    best = Some(relabeled);
                    best_count = 1;
                }
                Some(b) => {
                    use std::cmp::Ordering::*;
                    match relabeled.cmp(b) {
                        Less => {
                            best = Some(relabeled);
                            best_count = 1;
                        }
                        Equal => best_count += 1,
                        Greater => {}
                    }
                }
            }
        }
        let edges = best.unwrap_or_default();
        let _ = rooted;
        (Multigraph { edges }, best_count.max(1))
    }
}

/// An isomorphism class of rooted-connected (multi)graphs: the canonical
/// representative, its automorphism count fixing the root, and derived sizes.
#[derive(Debug, Clone)]
pub struct IsoClass {
    pub canon: Multigraph,
    pub aut: u64,
    pub edge_count: usize,
    /// `|V(alpha) ∪ {0}|`: total vertices including the root.
    pub vertex_count: usize,
}

impl IsoClass {
    /// Number of labeled members on vertex set `[n]` rooted at vertex 0:
    /// ordered placements of the non-root vertices divided by automorphisms.
    pub fn embed_count(&self, n: usize) -> BigUint {
        let m = self.vertex_count;
        if m > n {
            return BigUint::zero();
        }
        let mut acc = BigUint::one();
        for t in 0..m.saturating_sub(1) {
            acc *= BigUint::from(n - 1 - t);
        }
        let aut = BigUint::from(self.aut);
        assert!((&acc % &aut).is_zero(), "automorphism count must divide");
        acc / aut
    }

    pub fn embed_count_f64(&self, n: usize) -> f64 {
        use num::ToPrimitive;
        self.embed_count(n).to_f64().unwrap_or(f64::INFINITY)
    }
}

fn class_of(g: &Multigraph) -> IsoClass {
    let (canon, aut) = g.canonical();
    IsoClass {
        edge_count: canon.edge_count(),
        vertex_count: canon.support_size_with_root(),
        canon,
        aut,
    }
}

/// Enumerate every rooted-connected isomorphism class with exactly `d`
/// edges, growing edge by edge so that every prefix is connected and spans
/// the root, deduplicating by canonical form.
pub fn enumerate_rooted_connected(d: usize, mode: GraphMode) -> Result<Vec<IsoClass>> {
    Ok(enumerate_rooted_connected_upto(d, mode)?
        .into_iter()
        .filter(|c| c.edge_count == d)
        .collect())
}

/// All rooted-connected classes with `1 <= |alpha| <= d`.
pub fn enumerate_rooted_connected_upto(d: usize, mode: GraphMode) -> Result<Vec<IsoClass>> {
    if d > ENUM_CAP {
        return Err(Error::CapExceeded { got: d, cap: ENUM_CAP });
    }
    let mut out: Vec<IsoClass> = Vec::new();
    // level = set of canonical graphs with e edges
    let mut level: BTreeSet<Multigraph> = BTreeSet::new();
    level.insert(Multigraph::empty());
    for _e in 1..=d {
        let mut next: BTreeSet<Multigraph> = BTreeSet::new();
        for g in &level {
            let sup = g.support();
            // attachment points: current support, plus the root for the
            // first edge
            let mut attach: Vec<usize> = sup.iter().cloned().collect();
            if !attach.contains(&0) {
                attach.push(0);
            }
            let fresh = sup.iter().cloned().max().map_or(1, |m| m + 1).max(1);
            for &a in &attach {
                let mut targets: Vec<usize> = attach.clone();
                targets.push(fresh);
                for &b in &targets {
                    if mode == GraphMode::Simple && a == b {
                        continue;
                    }
                    let mut entries: Vec<((usize, usize), u32)> = g
                        .edges
                        .iter()
                        .map(|&((i, j), m)| ((i as usize, j as usize), m))
                        .collect();
                    entries.push(((a.min(b), a.max(b)), 1));
                    let h = Multigraph::from_multiplicities(&entries);
                    if mode == GraphMode::Simple && !h.is_simple() {
                        continue;
                    }
                    let (canon, _) = h.canonical();
                    next.insert(canon);
                }
            }
        }
        for g in &next {
            out.push(class_of(g));
        }
        level = next;
    }
    Ok(out)
}

/// Brute-force enumeration of labeled (multi)graphs on `[n]` with exactly
/// `d` edges; used as the ground-truth count for the class enumeration.
pub fn brute_force_labeled(n: usize, d: usize, mode: GraphMode) -> Vec<Multigraph> {
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..n {
        for j in i..n {
            if mode == GraphMode::Simple && i == j {
                continue;
            }
            pairs.push((i, j));
        }
    }
    let mut out = Vec::new();
    match mode {
        GraphMode::Simple => {
            for combo in pairs.iter().combinations(d) {
                let es: Vec<(usize, usize)> = combo.into_iter().cloned().collect();
                out.push(Multigraph::from_pairs(&es));
            }
        }
        GraphMode::Multigraph => {
            // multisets of d pairs = combinations with repetition
            for combo in (0..pairs.len()).combinations_with_replacement(d) {
                let es: Vec<(usize, usize)> = combo.into_iter().map(|k| pairs[k]).collect();
                out.push(Multigraph::from_pairs(&es));
            }
        }
    }
    out
}

/// Count of labeled rooted-connected (multi)graphs on `[n]` with `d` edges,
/// by exhaustive enumeration.
pub fn brute_force_rooted_connected_count(n: usize, d: usize, mode: GraphMode) -> u64 {
    brute_force_labeled(n, d, mode)
        .into_iter()
        .filter(|g| g.is_rooted_connected())
        .count() as u64
}

/// Counting bound for connected multigraphs with `d` edges spanning vertex 0
/// and `d + 1 - h` vertices: `(dn)^d (d/n)^h`, evaluated in log domain.
pub fn count_bound_general(d: usize, h: usize, n: usize) -> Result<f64> {
    if d == 0 || h > d {
        return Err(Error::OutOfRange(format!("need 1 <= h({h}) <= d({d})")));
    }
    let (d, n) = (d as f64, n as f64);
    Ok(((d * n).ln() * d + (d / n).ln() * h as f64).exp())
}

/// Refined counting bound: `2 (en)^{u-1} (3 d^2)^{d-u+1}` for connected
/// multigraphs with `d` edges, root spanned, and `u` vertices.
pub fn count_bound_refined(d: usize, u: usize, n: usize) -> Result<f64> {
    if d == 0 || u == 0 || u > d + 1 {
        return Err(Error::OutOfRange(format!("need 1 <= u({u}) <= d({d})+1")));
    }
    let (df, nf) = (d as f64, n as f64);
    let ln = std::f64::consts::LN_2
        + (u as f64 - 1.0) * (1.0 + nf.ln())
        + ((d + 1 - u) as f64) * (3.0 * df * df).ln();
    Ok(ln.exp())
}

/// Clique counting bound: graphs with `<= D` edges, root spanned, `t`
/// vertices: `n^{t-1} min{2^{t^2}, t^{2D}}`.
pub fn count_bound_clique(big_d: usize, t: usize, n: usize) -> Result<f64> {
    if t < 2 {
        return Err(Error::OutOfRange("need t >= 2".into()));
    }
    let (tf, nf) = (t as f64, n as f64);
    let ln_a = (tf * tf) * std::f64::consts::LN_2;
    let ln_b = 2.0 * big_d as f64 * tf.ln();
    Ok(((t as f64 - 1.0) * nf.ln() + ln_a.min(ln_b)).exp())
}

/// Exact count of `D`-edge trees on `[n]` spanning vertex 0:
/// `binom(n-1, D) (D+1)^{D-1}` by Cayley's formula.
pub fn cayley_tree_count(n: usize, big_d: usize) -> Result<BigUint> {
    if big_d < 1 || big_d > n.saturating_sub(1) {
        return Err(Error::OutOfRange(format!("need 1 <= D({big_d}) <= n-1")));
    }
    let mut acc = binomial(n - 1, big_d);
    let base = BigUint::from(big_d + 1);
    for _ in 0..big_d.saturating_sub(1) {
        acc *= &base;
    }
    Ok(acc)
}

/// Brute-force count of `D`-edge trees on `[n]` spanning vertex 0.
pub fn brute_force_tree_count(n: usize, big_d: usize) -> u64 {
    brute_force_labeled(n, big_d, GraphMode::Simple)
        .into_iter()
        .filter(|g| {
            g.is_rooted_connected() && g.support_size() == big_d + 1
        })
        .count() as u64
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let mut acc = BigUint::one();
    for t in 0..k.min(n - k) {
        acc = acc * BigUint::from(n - t) / BigUint::from(t + 1);
    }
    acc
}
