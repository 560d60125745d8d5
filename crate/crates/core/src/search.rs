//! Minimal length of an integer over a union of digit systems.
//!
//! The search works with unit terms `+-b^j`: a term `c*b^j` of weight `|c|` is
//! `|c|` copies of a unit, and carrying never increases weight, so the minimal
//! number of units equals the minimal length. Depth `h` is decided by a
//! meet-in-the-middle probe over layered partial sums. The oracle below works on
//! weighted pool elements with a shortest-path sweep and shares nothing else.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;
use std::sync::{Arc, Mutex, RwLock};

use indexmap::IndexMap;
use log::{debug, warn};
use serde::{Deserialize, Serialize};

use crate::bases::Bases;
use crate::digits::expand;
use crate::diophantine::lower_bound::MAX_PROVABLE_LENGTH;
use crate::diophantine::{prove_length_at_least, LowerBound, LowerBoundProof, ObstructionSearch};
use crate::error::{Error, Result};
use crate::term::{checked_pow, normalize_terms, sum_terms, total_weight, Term};

#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Starting cap on term magnitude; `None` picks [`default_cap`].
    pub initial_cap: Option<i128>,
    pub max_cap: i128,
    /// Double the cap until two consecutive caps give the same length.
    pub escalate: bool,
    /// Prove lengths up to 3 minimal via equation insolubility.
    pub certify: bool,
    /// Largest number of distinct partial sums kept per index.
    pub node_limit: usize,
    pub obstruction: ObstructionSearch,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            initial_cap: None,
            max_cap: 1 << 80,
            escalate: true,
            certify: true,
            node_limit: 20_000_000,
            obstruction: ObstructionSearch::default(),
        }
    }
}

impl SearchOptions {
    /// A single pass at a fixed cap, without escalation or proofs.
    pub fn fixed_cap(cap: i128) -> Self {
        SearchOptions {
            initial_cap: Some(cap),
            escalate: false,
            certify: false,
            ..Default::default()
        }
    }
}

/// Smallest power of two at or above `4 * max(|k|, max base) * 2^h`.
///
/// Using the largest base as well as `k` keeps the base itself in the pool
/// when it exceeds `k`, as in `11 = 1035 - 1024`.
pub fn default_cap(k: i128, bases: &Bases, h: u32) -> i128 {
    let scale = k.unsigned_abs().max(bases.max() as u128);
    let raw = scale
        .checked_mul(4)
        .and_then(|v| v.checked_mul(1u128.checked_shl(h.min(100))?));
    match raw.and_then(u128::checked_next_power_of_two) {
        Some(v) if v <= i128::MAX as u128 => v as i128,
        _ => i128::MAX,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LengthCertificate {
    pub k: i128,
    pub bases: Bases,
    pub length: u32,
    pub witness: Vec<Term>,
    pub cap_used: i128,
    /// The length was unchanged after doubling the cap.
    pub cap_stable: bool,
    pub exact: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower_bound: Option<LowerBoundProof>,
}

impl LengthCertificate {
    /// Recomputes the witness sum and weight.
    pub fn witness_is_valid(&self) -> bool {
        sum_terms(&self.witness) == Some(self.k)
            && total_weight(&self.witness) == self.length as u64
            && self.witness.iter().all(|t| {
                t.coeff != 0 && t.weight() <= (t.base / 2).max(1) && self.bases.contains(t.base)
            })
    }
}

/// Signed unit powers of the bases with magnitude at most `cap`, one per value.
pub fn unit_pool(bases: &Bases, cap: i128) -> Vec<(i128, Term)> {
    let mut by_value: BTreeMap<i128, Term> = BTreeMap::new();
    for b in bases.iter() {
        let mut j = 0;
        while let Some(p) = checked_pow(b as i128, j).filter(|&p| p <= cap) {
            by_value.entry(p).or_insert(Term::new(1, b, j));
            by_value.entry(-p).or_insert(Term::new(-1, b, j));
            j += 1;
        }
    }
    by_value.into_iter().collect()
}

#[derive(Clone, Copy, Debug)]
struct Node {
    parent: u32,
    unit: u32,
    depth: u32,
}

/// Every value reachable with at most `depth()` unit terms, each stored once at
/// its smallest depth. Layer `d` occupies a contiguous index range.
#[derive(Debug)]
pub struct SumIndex {
    pool: Vec<(i128, Term)>,
    nodes: IndexMap<i128, Node>,
    layer_ends: Vec<usize>,
}

impl SumIndex {
    pub fn new(bases: &Bases, cap: i128) -> Self {
        let mut nodes = IndexMap::new();
        nodes.insert(
            0,
            Node {
                parent: u32::MAX,
                unit: u32::MAX,
                depth: 0,
            },
        );
        SumIndex {
            pool: unit_pool(bases, cap),
            nodes,
            layer_ends: vec![1],
        }
    }

    pub fn depth(&self) -> u32 {
        (self.layer_ends.len() - 1) as u32
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn extend_to(&mut self, depth: u32, limit: usize, k: i128) -> Result<()> {
        while self.depth() < depth {
            let d = self.depth() as usize;
            let start = if d == 0 { 0 } else { self.layer_ends[d - 1] };
            let end = self.layer_ends[d];
            for idx in start..end {
                let (&v, _) = self.nodes.get_index(idx).expect("index in range");
                for (ui, &(p, _)) in self.pool.iter().enumerate() {
                    let u = v
                        .checked_add(p)
                        .ok_or(Error::Overflow("extending partial sums"))?;
                    self.nodes.entry(u).or_insert(Node {
                        parent: idx as u32,
                        unit: ui as u32,
                        depth: d as u32 + 1,
                    });
                }
                if self.nodes.len() > limit {
                    return Err(Error::SearchTooLarge { k, limit });
                }
            }
            self.layer_ends.push(self.nodes.len());
        }
        Ok(())
    }

    /// A split `k = r + (k - r)` with `r` using at most `h/2` units and the rest at most `h - h/2`.
    fn probe(&self, k: i128, h: u32) -> Option<(usize, usize)> {
        let small = (h / 2) as usize;
        let large = h - h / 2;
        for idx in 0..self.layer_ends[small] {
            let (&r, _) = self.nodes.get_index(idx)?;
            if let Some((j, _, node)) = self.nodes.get_full(&(k - r)) {
                if node.depth <= large {
                    return Some((idx, j));
                }
            }
        }
        None
    }

    fn units(&self, mut idx: usize) -> Vec<Term> {
        let mut out = Vec::new();
        while let Some((_, node)) = self.nodes.get_index(idx) {
            if node.parent == u32::MAX {
                break;
            }
            out.push(self.pool[node.unit as usize].1);
            idx = node.parent as usize;
        }
        out
    }

    /// Shortest representation of `k` with fewer than `below` units, by iterative deepening.
    pub fn shortest_below(
        &mut self,
        k: i128,
        below: u32,
        limit: usize,
    ) -> Result<Option<Vec<Term>>> {
        for h in 1..below {
            self.extend_to(h - h / 2, limit, k)?;
            if let Some((a, b)) = self.probe(k, h) {
                let mut units = self.units(a);
                units.extend(self.units(b));
                return Ok(Some(normalize_terms(&units)));
            }
        }
        Ok(None)
    }
}

/// Shares partial-sum indices across queries. Lookups take a read lock;
/// building a new index takes the write lock once.
type IndexCache = HashMap<(Bases, i128), Arc<Mutex<SumIndex>>>;

#[derive(Debug, Default)]
pub struct SearchContext {
    indices: RwLock<IndexCache>,
}

impl SearchContext {
    pub fn new() -> Self {
        Self::default()
    }

    fn index(&self, bases: &Bases, cap: i128) -> Arc<Mutex<SumIndex>> {
        let key = (bases.clone(), cap);
        if let Some(ix) = self.indices.read().expect("index cache poisoned").get(&key) {
            return Arc::clone(ix);
        }
        let mut w = self.indices.write().expect("index cache poisoned");
        Arc::clone(
            w.entry(key)
                .or_insert_with(|| Arc::new(Mutex::new(SumIndex::new(bases, cap)))),
        )
    }

    /// A representation with fewer than `below` terms, all of magnitude at most `cap`.
    pub fn shorter_than(
        &self,
        k: i128,
        bases: &Bases,
        below: u32,
        cap: i128,
        node_limit: usize,
    ) -> Result<Option<Vec<Term>>> {
        let ix = self.index(bases, cap);
        let mut ix = ix.lock().expect("index poisoned");
        ix.shortest_below(k, below, node_limit)
    }

    fn best_at_cap(
        &self,
        k: i128,
        bases: &Bases,
        cap: i128,
        upper: &(u32, Vec<Term>),
        limit: usize,
    ) -> Result<(u32, Vec<Term>)> {
        Ok(match self.shorter_than(k, bases, upper.0, cap, limit)? {
            Some(w) => (total_weight(&w) as u32, w),
            None => upper.clone(),
        })
    }

    pub fn min_length(
        &self,
        k: i128,
        bases: &Bases,
        opts: &SearchOptions,
    ) -> Result<LengthCertificate> {
        if k < 1 {
            return Err(Error::InvalidInput(format!("k must be >= 1, got {k}")));
        }
        let upper = single_base_bound(k, bases)?;
        let mut cap = opts
            .initial_cap
            .unwrap_or_else(|| default_cap(k, bases, upper.0))
            .min(opts.max_cap)
            .max(1);

        let mut best = match self.best_at_cap(k, bases, cap, &upper, opts.node_limit) {
            Ok(r) => r,
            Err(e @ Error::SearchTooLarge { .. }) => {
                warn!("{e}; reporting the single-base bound");
                return self.finish(k, bases, upper, cap, false, opts);
            }
            Err(e) => return Err(e),
        };
        let mut stable = false;
        if opts.escalate && best.0 > 1 {
            while let Some(next) = cap.checked_mul(2).filter(|&c| c <= opts.max_cap) {
                let again = match self.best_at_cap(k, bases, next, &best, opts.node_limit) {
                    Ok(r) => r,
                    Err(Error::SearchTooLarge { .. }) => break,
                    Err(e) => return Err(e),
                };
                cap = next;
                if again.0 == best.0 {
                    stable = true;
                    break;
                }
                debug!("k={k}: length dropped to {} at cap {next}", again.0);
                best = again;
            }
        } else if best.0 == 1 {
            stable = true;
        }
        self.finish(k, bases, best, cap, stable, opts)
    }

    fn finish(
        &self,
        k: i128,
        bases: &Bases,
        mut best: (u32, Vec<Term>),
        cap: i128,
        cap_stable: bool,
        opts: &SearchOptions,
    ) -> Result<LengthCertificate> {
        let mut lower_bound = None;
        if opts.certify && best.0 <= MAX_PROVABLE_LENGTH {
            loop {
                match prove_length_at_least(k, bases, best.0, &opts.obstruction)? {
                    LowerBound::Proven { proof } => {
                        lower_bound = Some(proof);
                        break;
                    }
                    LowerBound::Refuted { witness } => {
                        warn!("k={k}: equation check found a shorter representation than the cap search");
                        let w = normalize_terms(&witness);
                        best = (total_weight(&w) as u32, w);
                    }
                    LowerBound::Unknown { reason } => {
                        debug!("k={k}: no lower-bound proof: {reason}");
                        break;
                    }
                }
            }
        }
        let exact = cap_stable && (best.0 > MAX_PROVABLE_LENGTH || lower_bound.is_some());
        let cert = LengthCertificate {
            k,
            bases: bases.clone(),
            length: best.0,
            witness: best.1,
            cap_used: cap,
            cap_stable,
            exact,
            lower_bound,
        };
        debug_assert!(cert.witness_is_valid(), "bad witness {cert:?}");
        Ok(cert)
    }
}

/// The shortest single-base expansion, as `(length, terms)`.
pub fn single_base_bound(k: i128, bases: &Bases) -> Result<(u32, Vec<Term>)> {
    let mut best: Option<(u32, Vec<Term>)> = None;
    for b in bases.iter() {
        let e = expand(k, b)?;
        let len = e.length() as u32;
        if best.as_ref().is_none_or(|(l, _)| len < *l) {
            best = Some((len, e.terms()));
        }
    }
    Ok(best.expect("base sets are non-empty"))
}

pub fn min_length_union(k: i128, bases: &Bases, opts: &SearchOptions) -> Result<LengthCertificate> {
    SearchContext::new().min_length(k, bases, opts)
}

/// Certificates for every `k` in `1..=k_max`, sharing one index cache.
pub fn enumerate_lengths(
    bases: &Bases,
    k_max: i128,
    opts: &SearchOptions,
) -> Result<Vec<LengthCertificate>> {
    if k_max < 1 {
        return Err(Error::InvalidInput("k_max must be >= 1".into()));
    }
    let ctx = SearchContext::new();
    (1..=k_max)
        .map(|k| ctx.min_length(k, bases, opts))
        .collect()
}

/// Multiplying window size by pool size above this is refused.
pub const ORACLE_WORK_LIMIT: u128 = 4_000_000_000;
const ORACLE_WINDOW_LIMIT: u128 = 200_000_000;

/// Pool elements `c*b^j` with `1 <= c <= floor(b/2)` and `|c*b^j| <= cap`,
/// deduplicated by value at minimal weight and closed under negation.
pub fn weighted_pool(bases: &Bases, cap: i128) -> Vec<(i128, u32)> {
    let mut pool: BTreeMap<i128, u32> = BTreeMap::new();
    for b in bases.iter() {
        let mut j = 0;
        while let Some(p) = checked_pow(b as i128, j).filter(|&p| p <= cap) {
            for c in 1..=(b / 2).max(1) {
                let Some(v) = p.checked_mul(c as i128).filter(|&v| v <= cap) else {
                    break;
                };
                for s in [v, -v] {
                    let w = pool.entry(s).or_insert(c as u32);
                    *w = (*w).min(c as u32);
                }
            }
            j += 1;
        }
    }
    pool.into_iter().collect()
}

/// Exact minimal weights for a range of targets, from one shortest-path sweep
/// over the window `[min(0, lo) - cap, max(0, hi) + cap]`.
///
/// Any multiset of terms bounded by `cap` summing to `k` can be ordered so the
/// partial sums stay in that window (add a term pointing back toward the range
/// whenever a partial sum leaves it), so the restriction loses nothing.
#[derive(Debug, Clone)]
pub struct OracleTable {
    lo: i128,
    h_max: u32,
    dist: Vec<u8>,
}

impl OracleTable {
    pub fn build(bases: &Bases, h_max: u32, cap: i128, k_lo: i128, k_hi: i128) -> Result<Self> {
        if h_max == 0 || h_max >= u8::MAX as u32 {
            return Err(Error::InvalidInput(format!("h_max {h_max} out of range")));
        }
        if cap < 1 || k_lo > k_hi {
            return Err(Error::InvalidInput(
                "oracle needs cap >= 1 and k_lo <= k_hi".into(),
            ));
        }
        let pool = weighted_pool(bases, cap);
        let lo = k_lo.min(0) - cap;
        let hi = k_hi.max(0) + cap;
        let width = (hi - lo + 1) as u128;
        let work = width.saturating_mul(pool.len() as u128);
        if width > ORACLE_WINDOW_LIMIT || work > ORACLE_WORK_LIMIT {
            return Err(Error::PoolTooLarge {
                detail: format!(
                    "window of {width} values times {} pool elements exceeds the oracle limit",
                    pool.len()
                ),
            });
        }
        let width = width as usize;
        let mut dist = vec![u8::MAX; width];
        let mut buckets: Vec<Vec<u32>> = vec![Vec::new(); h_max as usize + 1];
        let origin = (-lo) as usize;
        dist[origin] = 0;
        buckets[0].push(origin as u32);
        for level in 0..=h_max as usize {
            let current = std::mem::take(&mut buckets[level]);
            for pos in current {
                if dist[pos as usize] as usize != level {
                    continue;
                }
                for &(v, w) in &pool {
                    let next_level = level + w as usize;
                    if next_level > h_max as usize {
                        continue;
                    }
                    let target = pos as i128 + v;
                    if target < 0 || target >= width as i128 {
                        continue;
                    }
                    let t = target as usize;
                    if (dist[t] as usize) > next_level {
                        dist[t] = next_level as u8;
                        buckets[next_level].push(t as u32);
                    }
                }
            }
        }
        Ok(OracleTable { lo, h_max, dist })
    }

    /// Minimal weight of `k`, or `None` if above `h_max` or outside the table.
    pub fn length(&self, k: i128) -> Option<u32> {
        let i = usize::try_from(k - self.lo).ok()?;
        let d = *self.dist.get(i)?;
        (d as u32 <= self.h_max).then_some(d as u32)
    }
}

/// Minimal weight of `k` using pool elements bounded by `cap`, if at most `h_max`.
pub fn brute_force_oracle(k: i128, bases: &Bases, h_max: u32, cap: i128) -> Result<Option<u32>> {
    Ok(OracleTable::build(bases, h_max, cap, k, k)?.length(k))
}

pub const CACHE_VERSION: u32 = 1;

/// Persistent table of exact lengths, one file per base set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LengthCache {
    pub version: u32,
    pub bases: Bases,
    /// Largest cap behind any stored length.
    pub cap: i128,
    pub lengths: BTreeMap<i128, u32>,
}

impl LengthCache {
    pub fn new(bases: Bases) -> Self {
        LengthCache {
            version: CACHE_VERSION,
            bases,
            cap: 0,
            lengths: BTreeMap::new(),
        }
    }

    /// Loads a cache for `bases`. Missing files, other base sets and other
    /// versions give an empty cache; a version mismatch is logged.
    pub fn load(path: &Path, bases: &Bases) -> Result<Self> {
        if !path.exists() {
            return Ok(Self::new(bases.clone()));
        }
        let text = std::fs::read_to_string(path)?;
        let raw: serde_json::Value = serde_json::from_str(&text)?;
        let version = raw.get("version").and_then(|v| v.as_u64());
        if version != Some(CACHE_VERSION as u64) {
            warn!(
                "ignoring length cache {} with version {:?} (expected {CACHE_VERSION})",
                path.display(),
                version
            );
            return Ok(Self::new(bases.clone()));
        }
        let cache: LengthCache = serde_json::from_value(raw)?;
        if &cache.bases != bases {
            debug!(
                "length cache {} is for bases {}",
                path.display(),
                cache.bases
            );
            return Ok(Self::new(bases.clone()));
        }
        Ok(cache)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }

    pub fn get(&self, k: i128) -> Option<u32> {
        self.lengths.get(&k).copied()
    }

    /// Stores exact results only.
    pub fn record(&mut self, cert: &LengthCertificate) {
        if cert.exact && cert.bases == self.bases {
            self.lengths.insert(cert.k, cert.length);
            self.cap = self.cap.max(cert.cap_used);
        }
    }
}
