//! Critical ideals: minors of the generalized Laplacian, triviality per
//! coefficient domain, variety points in integer boxes, and the co-rank γ.
//!
//! γ is computed as a sandwich. The zero forcing certificate minor gives a
//! lower bound valid over every ring; any evaluation `L(G, a)` of rank `r`
//! makes every `(r+1)`-minor vanish at `a`, an upper bound. Basis runs only
//! decide the indices strictly between the two.

use std::collections::{HashMap, HashSet};
use std::sync::Mutex;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::Adjacency;
use crate::laplacian::{Entry, SymbolicMatrix};
use crate::linalg::{rank_i64, rank_mod_p};
use crate::poly::groebner::{buchberger, is_trivial_over_field, linear_interreduce};
use crate::poly::{
    is_trivial_over_z, Budget, DomainTag, Integers, Monomial, MonomialOrder, PolyRing, Polynomial,
    PrimeField, Rationals, Ring, ZCertificate,
};
use crate::zero_forcing::{certificate_minor, zero_forcing_number};

/// Knobs for box searches and basis runs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Integer box `{-r..r}` for evaluation points.
    pub box_radius: i64,
    /// Points evaluated per box scan before giving up.
    pub max_points: usize,
    /// Primes tried for mod-p points and screening over `Z`.
    pub primes: Vec<u64>,
    pub budget: Budget,
    pub order: MonomialOrder,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            box_radius: 2,
            max_points: 2_000_000,
            primes: vec![2, 3, 5, 7, 11, 13],
            budget: Budget::default(),
            order: MonomialOrder::DegRevLex,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstantMinor {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub value: String,
}

/// All `size`-minors, expanded, nonzero and deduplicated up to sign.
#[derive(Debug, Clone)]
pub struct MinorSet {
    pub size: usize,
    pub generators: Vec<Polynomial<BigInt>>,
    /// First minor equal to `±1`, if any.
    pub unit_minor: Option<ConstantMinor>,
    /// One nonzero constant minor per distinct absolute value.
    pub constant_minors: Vec<ConstantMinor>,
    /// `false` when generation stopped at a unit minor.
    pub complete: bool,
}

fn bits(mask: u32) -> Vec<usize> {
    (0..32).filter(|&b| mask >> b & 1 == 1).collect()
}

/// All `k`-subsets of `0..n` as bitmasks in increasing order.
fn masks(n: usize, k: usize) -> Vec<u32> {
    if k > n {
        return Vec::new();
    }
    if k == 0 {
        return vec![0];
    }
    let mut out = Vec::new();
    let mut v: u32 = (1 << k) - 1;
    let limit: u64 = 1 << n;
    while (v as u64) < limit {
        out.push(v);
        // next subset with the same popcount
        let t = v | (v - 1);
        let Some(next) = t.checked_add(1) else { break };
        let w = next | (((!t & next) - 1) >> (v.trailing_zeros() + 1));
        if w <= v {
            break;
        }
        v = w;
    }
    out
}

/// Level-by-level Laplace expansion: the `j`-minors are built from the
/// `(j-1)`-minors along the smallest row, so shared sub-determinants are
/// expanded once.
pub struct MinorExpander<'a> {
    m: &'a SymbolicMatrix,
    ring: PolyRing<Integers>,
    level: usize,
    minors: HashMap<(u32, u32), Polynomial<BigInt>>,
}

impl MinorSet {
    /// A constant minor that is a unit over `domain`: `±1` over `Z`, any
    /// nonzero value over `Q`, one prime to `p` over `F_p`.
    pub fn unit_constant(&self, domain: DomainTag) -> Option<&ConstantMinor> {
        let value = |c: &ConstantMinor| c.value.parse::<BigInt>().expect("integer text");
        match domain {
            DomainTag::Integers => self.unit_minor.as_ref(),
            DomainTag::Rationals => self.constant_minors.first(),
            DomainTag::PrimeField(p) => self
                .constant_minors
                .iter()
                .find(|c| !(value(c) % BigInt::from(p)).is_zero()),
        }
    }
}

impl<'a> MinorExpander<'a> {
    pub fn new(m: &'a SymbolicMatrix, order: MonomialOrder) -> Result<Self> {
        let ring = PolyRing::new(Integers, m.n(), order)?;
        let mut minors = HashMap::new();
        minors.insert((0, 0), ring.one());
        Ok(MinorExpander {
            m,
            ring,
            level: 0,
            minors,
        })
    }

    pub fn ring(&self) -> &PolyRing<Integers> {
        &self.ring
    }

    pub fn level(&self) -> usize {
        self.level
    }

    fn advance(&mut self) {
        let n = self.m.n();
        let j = self.level + 1;
        let mut next = HashMap::new();
        for &rmask in &masks(n, j) {
            let rows = bits(rmask);
            let r0 = rows[0];
            let rest = rmask & !(1 << r0);
            for &cmask in &masks(n, j) {
                let cols = bits(cmask);
                let mut acc = self.ring.zero();
                for (k, &c) in cols.iter().enumerate() {
                    let Some(sub) = self.minors.get(&(rest, cmask & !(1 << c))) else {
                        continue;
                    };
                    let sign: i64 = if k % 2 == 0 { 1 } else { -1 };
                    match self.m.entry(r0, c) {
                        Entry::Var(u) => {
                            acc = self.ring.combine(
                                &acc,
                                &BigInt::from(sign),
                                &Monomial::var(u),
                                sub,
                            );
                        }
                        Entry::Const(0) => {}
                        Entry::Const(e) => {
                            acc = self.ring.combine(
                                &acc,
                                &BigInt::from(sign * e),
                                &Monomial::ONE,
                                sub,
                            );
                        }
                    }
                }
                if !acc.is_zero() {
                    next.insert((rmask, cmask), acc);
                }
            }
        }
        self.minors = next;
        self.level = j;
    }

    /// The `i`-minors (`1 ≤ i ≤ n`); levels only move forward.
    pub fn minors_of_size(&mut self, i: usize) -> MinorSet {
        assert!(i >= 1 && i <= self.m.n(), "minor size out of range");
        assert!(i >= self.level, "minor levels only move forward");
        while self.level < i {
            self.advance();
        }
        let n = self.m.n();
        let mut seen = HashSet::new();
        let mut generators = Vec::new();
        let mut unit_minor = None;
        let mut constant_minors: Vec<ConstantMinor> = Vec::new();
        let mut constant_values: Vec<BigInt> = Vec::new();
        for &rmask in &masks(n, i) {
            for &cmask in &masks(n, i) {
                let Some(p) = self.minors.get(&(rmask, cmask)) else {
                    continue;
                };
                let p = if p.leading().expect("nonzero").1.is_negative() {
                    self.ring.neg(p)
                } else {
                    p.clone()
                };
                if p.is_constant() {
                    let cm = ConstantMinor {
                        rows: bits(rmask),
                        cols: bits(cmask),
                        value: self
                            .ring
                            .render(self.minors.get(&(rmask, cmask)).expect("present")),
                    };
                    let value = p.terms()[0].1.clone();
                    if !constant_values.contains(&value) {
                        constant_values.push(value);
                        constant_minors.push(cm.clone());
                    }
                    if unit_minor.is_none() && p.terms()[0].1.is_one() {
                        unit_minor = Some(cm);
                    }
                }
                if seen.insert(p.terms().to_vec()) {
                    generators.push(p);
                }
            }
        }
        MinorSet {
            size: i,
            generators,
            unit_minor,
            constant_minors,
            complete: true,
        }
    }
}

/// The `i`-minors of `m` in one call.
pub fn minor_generators(m: &SymbolicMatrix, i: usize, order: MonomialOrder) -> Result<MinorSet> {
    let mut e = MinorExpander::new(m, order)?;
    Ok(e.minors_of_size(i))
}

/// How a single index was decided.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum Evidence {
    /// Triangular `±1` minor from a zero forcing record (all rings).
    ForcingMinor {
        rows: Vec<usize>,
        cols: Vec<usize>,
    },
    /// A constant minor that is a unit in the domain.
    ConstantMinor(ConstantMinor),
    /// `L(G, a)` has rank `rank` (over `F_prime` when set), so every larger
    /// minor vanishes at `a`.
    EvaluationPoint {
        point: Vec<i64>,
        prime: Option<u64>,
        rank: usize,
    },
    /// `I_n = <det>` and the determinant is not constant.
    Determinant,
    /// A basis computation.
    Groebner {
        summary: String,
        pairs_reduced: usize,
    },
    /// Implied by a decision at another index through `I_1 ⊇ I_2 ⊇ …`.
    Nesting {
        from: usize,
    },
    Undecided {
        reason: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexDecision {
    pub index: usize,
    pub trivial: Option<bool>,
    pub evidence: Evidence,
}

/// Result of a scan over evaluation points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxScan {
    /// First point in scan order with rank at most the target.
    pub hit: Option<(Vec<i64>, usize)>,
    /// Lowest-rank point seen (first in scan order among ties).
    pub best: Option<(Vec<i64>, usize)>,
    /// Every point of the box was examined (or a hit ended the scan early).
    pub complete: bool,
    pub points: usize,
}

/// Scans `values^n` ordered by max-norm, then lexicographically, computing
/// the rank of `L(G, a)` over `Q` or `F_p`; stops at the first point of rank
/// `≤ target`.
pub fn scan_box(
    m: &SymbolicMatrix,
    values: &[i64],
    prime: Option<u64>,
    target: usize,
    max_points: usize,
) -> BoxScan {
    let n = m.n();
    let mut vals: Vec<i64> = values.to_vec();
    if let Some(p) = prime {
        // keep one representative per residue class, smallest norm first
        vals.sort_by_key(|v| (v.abs(), *v));
        let mut seen = HashSet::new();
        vals.retain(|v| seen.insert(v.rem_euclid(p as i64)));
    }
    vals.sort_unstable();
    vals.dedup();
    let mut norms: Vec<i64> = vals.iter().map(|v| v.abs()).collect();
    norms.sort_unstable();
    norms.dedup();

    let mut scan = BoxScan {
        hit: None,
        best: None,
        complete: true,
        points: 0,
    };
    let rank_at = |a: &[i64]| -> usize {
        let l = m.evaluate(a);
        match prime {
            Some(p) => rank_mod_p(&l, p).rank,
            None => rank_i64(&l).rank,
        }
    };
    if n == 0 {
        scan.best = Some((Vec::new(), 0));
        scan.hit = Some((Vec::new(), 0));
        return scan;
    }
    for &level in &norms {
        let allowed: Vec<i64> = vals.iter().copied().filter(|v| v.abs() <= level).collect();
        let mut idx = vec![0usize; n];
        loop {
            let point: Vec<i64> = idx.iter().map(|&k| allowed[k]).collect();
            if point.iter().any(|v| v.abs() == level) {
                if scan.points >= max_points {
                    scan.complete = false;
                    return scan;
                }
                scan.points += 1;
                let r = rank_at(&point);
                if scan.best.as_ref().is_none_or(|(_, b)| r < *b) {
                    scan.best = Some((point.clone(), r));
                }
                if r <= target {
                    scan.hit = Some((point, r));
                    return scan;
                }
            }
            // odometer, last coordinate fastest
            let mut k = n;
            loop {
                if k == 0 {
                    break;
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < allowed.len() {
                    break;
                }
                idx[k] = 0;
                if k == 0 {
                    k = usize::MAX;
                    break;
                }
            }
            if k == usize::MAX {
                break;
            }
        }
    }
    scan
}

pub fn symmetric_box(radius: i64) -> Vec<i64> {
    (-radius..=radius).collect()
}

/// A point in `{-radius..radius}^n` with `rank L(G, a) ≤ r` over `Q`, the
/// first in scan order.
pub fn variety_box_search(m: &SymbolicMatrix, r: usize, radius: i64, max_points: usize) -> BoxScan {
    scan_box(m, &symmetric_box(radius), None, r, max_points)
}

/// Residue representatives scanned for `F_p`: the whole field when it fits
/// the point budget, otherwise the integer box reduced mod `p`.
fn residues_for(p: u64, n: usize, cfg: &SearchConfig) -> Vec<i64> {
    let full = (p as f64).powi(n as i32) <= cfg.max_points.min(20_000) as f64;
    if full {
        let half = (p / 2) as i64;
        (-half..=half).collect()
    } else {
        symmetric_box(cfg.box_radius)
    }
}

/// Evidence that `I_i` is proper over `domain`: a point where every
/// `i`-minor vanishes. Absence is inconclusive.
pub fn nontriviality_certificate(
    m: &SymbolicMatrix,
    i: usize,
    domain: DomainTag,
    cfg: &SearchConfig,
) -> Option<Evidence> {
    if i == 0 {
        return None;
    }
    let target = i - 1;
    let as_evidence = |scan: BoxScan, prime| {
        scan.hit
            .map(|(point, rank)| Evidence::EvaluationPoint { point, prime, rank })
    };
    match domain {
        DomainTag::Rationals => as_evidence(
            scan_box(
                m,
                &symmetric_box(cfg.box_radius),
                None,
                target,
                cfg.max_points,
            ),
            None,
        ),
        DomainTag::PrimeField(p) => as_evidence(
            scan_box(
                m,
                &residues_for(p, m.n(), cfg),
                Some(p),
                target,
                cfg.max_points,
            ),
            Some(p),
        ),
        DomainTag::Integers => cfg
            .primes
            .iter()
            .find_map(|&p| {
                as_evidence(
                    scan_box(
                        m,
                        &residues_for(p, m.n(), cfg),
                        Some(p),
                        target,
                        cfg.max_points,
                    ),
                    Some(p),
                )
            })
            .or_else(|| nontriviality_certificate(m, i, DomainTag::Rationals, cfg)),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct CacheEntry {
    key: String,
    domain: DomainTag,
    config: u64,
    decision: IndexDecision,
}

type CacheKey = (String, DomainTag, usize, u64);

/// Shared memo of basis-computation decisions.
///
/// Entries are keyed by the labeled input rather than its isomorphism class:
/// evidence mentions vertex labels and pair counts, and a replayed decision
/// must be exactly the one a fresh computation would produce.
#[derive(Debug, Default)]
pub struct DecisionCache {
    map: Mutex<HashMap<CacheKey, IndexDecision>>,
}

impl DecisionCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(
        &self,
        key: &str,
        domain: DomainTag,
        i: usize,
        cfg_hash: u64,
    ) -> Option<IndexDecision> {
        self.map
            .lock()
            .expect("cache lock")
            .get(&(key.to_string(), domain, i, cfg_hash))
            .cloned()
    }

    pub fn put(&self, key: &str, domain: DomainTag, cfg_hash: u64, decision: IndexDecision) {
        self.map.lock().expect("cache lock").insert(
            (key.to_string(), domain, decision.index, cfg_hash),
            decision,
        );
    }

    pub fn len(&self) -> usize {
        self.map.lock().expect("cache lock").len()
    }

    /// Reads entries written by [`DecisionCache::save`]; a missing file is an
    /// empty cache.
    pub fn load(path: &std::path::Path) -> Result<Self> {
        let cache = DecisionCache::new();
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(cache),
            Err(e) => return Err(crate::error::Error::Io(e.to_string())),
        };
        let entries: Vec<CacheEntry> = serde_json::from_str(&text)
            .map_err(|e| crate::error::Error::Io(format!("{}: {e}", path.display())))?;
        {
            let mut map = cache.map.lock().expect("cache lock");
            for e in entries {
                map.insert((e.key, e.domain, e.decision.index, e.config), e.decision);
            }
        }
        Ok(cache)
    }

    /// Writes all entries sorted by key, so equal caches give equal files.
    pub fn save(&self, path: &std::path::Path) -> Result<()> {
        let map = self.map.lock().expect("cache lock");
        let mut keys: Vec<&CacheKey> = map.keys().collect();
        keys.sort();
        let entries: Vec<CacheEntry> = keys
            .into_iter()
            .map(|k| CacheEntry {
                key: k.0.clone(),
                domain: k.1,
                config: k.3,
                decision: map[k].clone(),
            })
            .collect();
        let text = serde_json::to_string_pretty(&entries).expect("plain data");
        std::fs::write(path, text)
            .map_err(|e| crate::error::Error::Io(format!("{}: {e}", path.display())))
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub fn config_hash(cfg: &SearchConfig) -> u64 {
    use std::hash::{Hash, Hasher};
    let mut h = std::collections::hash_map::DefaultHasher::new();
    cfg.hash(&mut h);
    h.finish()
}

/// Decides triviality of `I_i` over `domain` from an already expanded
/// minor set. Budget exhaustion yields `trivial: None`.
pub fn decide_from_minors(
    ring: &PolyRing<Integers>,
    minors: &MinorSet,
    domain: DomainTag,
    cfg: &SearchConfig,
) -> IndexDecision {
    let i = minors.size;
    let decided = |trivial: bool, evidence| IndexDecision {
        index: i,
        trivial: Some(trivial),
        evidence,
    };
    let n = ring.nvars();
    let undecided = |reason: String| IndexDecision {
        index: i,
        trivial: None,
        evidence: Evidence::Undecided { reason },
    };
    if let Some(c) = minors.unit_constant(domain) {
        return decided(true, Evidence::ConstantMinor(c.clone()));
    }
    let over_q = |gens: &[Polynomial<BigInt>]| -> Result<(bool, usize)> {
        if minors.unit_constant(DomainTag::Rationals).is_some() {
            return Ok((true, 0));
        }
        let q = PolyRing::new(Rationals, n, ring.order())?;
        let qg: Vec<_> = gens
            .iter()
            .map(|g| ring.map_into(g, &q, |c| BigRational::from_integer(c.clone())))
            .collect();
        let t = is_trivial_over_field(&q, &qg, cfg.budget, false)?;
        Ok((t.trivial, t.basis.pairs_reduced))
    };
    let over_p = |gens: &[Polynomial<BigInt>], p: u64| -> Result<(bool, usize)> {
        let field = PrimeField::new(p)
            .ok_or_else(|| crate::error::Error::Budget(format!("{p} is not a usable prime")))?;
        let f = PolyRing::new(field, n, ring.order())?;
        let fg: Vec<_> = gens
            .iter()
            .map(|g| ring.map_into(g, &f, |c| field.from_int(c)))
            .collect();
        let t = is_trivial_over_field(&f, &fg, cfg.budget, false)?;
        Ok((t.trivial, t.basis.pairs_reduced))
    };
    let gens = &minors.generators;
    match domain {
        DomainTag::Rationals => match over_q(gens) {
            Ok((t, pairs)) => decided(
                t,
                Evidence::Groebner {
                    summary: format!(
                        "reduced basis over Q is {}",
                        if t { "{1}" } else { "proper" }
                    ),
                    pairs_reduced: pairs,
                },
            ),
            Err(e) => undecided(e.to_string()),
        },
        DomainTag::PrimeField(p) => match over_p(gens, p) {
            Ok((t, pairs)) => decided(
                t,
                Evidence::Groebner {
                    summary: format!(
                        "reduced basis over F{p} is {}",
                        if t { "{1}" } else { "proper" }
                    ),
                    pairs_reduced: pairs,
                },
            ),
            Err(e) => undecided(e.to_string()),
        },
        DomainTag::Integers => {
            match over_q(gens) {
                Ok((false, pairs)) => {
                    return decided(
                        false,
                        Evidence::Groebner {
                            summary: "proper over Q, hence over Z".into(),
                            pairs_reduced: pairs,
                        },
                    )
                }
                Ok(_) => {}
                Err(e) => return undecided(e.to_string()),
            }
            for &p in &cfg.primes {
                match over_p(gens, p) {
                    Ok((false, pairs)) => {
                        return decided(
                            false,
                            Evidence::Groebner {
                                summary: format!("proper modulo {p}"),
                                pairs_reduced: pairs,
                            },
                        )
                    }
                    Ok(_) => {}
                    Err(e) => return undecided(e.to_string()),
                }
            }
            match is_trivial_over_z(ring, gens, cfg.budget) {
                Ok(z) => {
                    let summary = match &z.certificate {
                        ZCertificate::Unit {
                            cleared_constant,
                            primes_checked,
                            ..
                        } => format!(
                            "integer cofactors for 1 (cleared constant {cleared_constant}, primes {primes_checked:?})"
                        ),
                        ZCertificate::RationalProper { .. } => "proper over Q".into(),
                        ZCertificate::PrimeProper { prime, .. } => format!("proper modulo {prime}"),
                    };
                    decided(
                        z.trivial,
                        Evidence::Groebner {
                            summary,
                            pairs_reduced: 0,
                        },
                    )
                }
                Err(e) => undecided(e.to_string()),
            }
        }
    }
}

/// Decides `I_i(G, X)` over `domain`: unit constant minor, then a variety
/// point, then basis computations.
pub fn ideal_trivial(
    m: &SymbolicMatrix,
    i: usize,
    domain: DomainTag,
    cfg: &SearchConfig,
) -> Result<IndexDecision> {
    let n = m.n();
    if i == 0 {
        return Ok(IndexDecision {
            index: 0,
            trivial: Some(true),
            evidence: Evidence::Nesting { from: 0 },
        });
    }
    if i > n {
        return Ok(IndexDecision {
            index: i,
            trivial: Some(false),
            evidence: Evidence::Nesting { from: n },
        });
    }
    let mut e = MinorExpander::new(m, cfg.order)?;
    let minors = e.minors_of_size(i);
    if let Some(u) = &minors.unit_minor {
        return Ok(IndexDecision {
            index: i,
            trivial: Some(true),
            evidence: Evidence::ConstantMinor(u.clone()),
        });
    }
    if i == n {
        return Ok(IndexDecision {
            index: i,
            trivial: Some(false),
            evidence: Evidence::Determinant,
        });
    }
    if let Some(ev) = nontriviality_certificate(m, i, domain, cfg) {
        return Ok(IndexDecision {
            index: i,
            trivial: Some(false),
            evidence: ev,
        });
    }
    Ok(decide_from_minors(e.ring(), &minors, domain, cfg))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaResult {
    pub domain: DomainTag,
    pub n: usize,
    pub lower: usize,
    pub upper: usize,
    pub value: Option<usize>,
    /// One entry per index `1..=n`.
    pub decisions: Vec<IndexDecision>,
    /// Indices decided by a basis computation (fresh or replayed from a cache).
    pub groebner_runs: usize,
}

impl GammaResult {
    pub fn closed_by_sandwich(&self) -> bool {
        self.value.is_some() && self.groebner_runs == 0
    }
}

/// Best evaluation rank over the domain (an upper bound for γ), stopping
/// once `floor` is reached.
pub fn evaluation_upper_bound(
    m: &SymbolicMatrix,
    domain: DomainTag,
    floor: usize,
    cfg: &SearchConfig,
) -> Option<Evidence> {
    fn consider(
        best: &mut Option<(Vec<i64>, Option<u64>, usize)>,
        scan: BoxScan,
        prime: Option<u64>,
    ) {
        if let Some((point, rank)) = scan.hit.or(scan.best) {
            if best.as_ref().is_none_or(|b| rank < b.2) {
                *best = Some((point, prime, rank));
            }
        }
    }
    let mut best = None;
    match domain {
        DomainTag::Rationals => consider(
            &mut best,
            scan_box(
                m,
                &symmetric_box(cfg.box_radius),
                None,
                floor,
                cfg.max_points,
            ),
            None,
        ),
        DomainTag::PrimeField(p) => consider(
            &mut best,
            scan_box(
                m,
                &residues_for(p, m.n(), cfg),
                Some(p),
                floor,
                cfg.max_points,
            ),
            Some(p),
        ),
        DomainTag::Integers => {
            // small fields first: they are cheap to scan in full
            for &p in &cfg.primes {
                if best.as_ref().is_some_and(|b| b.2 <= floor) {
                    break;
                }
                consider(
                    &mut best,
                    scan_box(
                        m,
                        &residues_for(p, m.n(), cfg),
                        Some(p),
                        floor,
                        cfg.max_points,
                    ),
                    Some(p),
                );
            }
            if best.as_ref().is_none_or(|b| b.2 > floor) {
                consider(
                    &mut best,
                    scan_box(
                        m,
                        &symmetric_box(cfg.box_radius),
                        None,
                        floor,
                        cfg.max_points,
                    ),
                    None,
                );
            }
        }
    }
    best.map(|(point, prime, rank)| Evidence::EvaluationPoint { point, prime, rank })
}

/// γ over `domain` with per-index provenance.
pub fn gamma<A: Adjacency + ?Sized>(
    g: &A,
    domain: DomainTag,
    cfg: &SearchConfig,
) -> Result<GammaResult> {
    gamma_with_cache(g, domain, cfg, None)
}

/// Cache key of a labeled (di)graph: direction, order and arc multiplicities.
pub fn labeled_key<A: Adjacency + ?Sized>(g: &A) -> String {
    let n = g.order();
    let mut key = format!("{}{n}:", if g.is_directed() { 'd' } else { 'g' });
    for u in 0..n {
        let mut out = g.out_neighbors(u).to_vec();
        out.sort_unstable();
        out.dedup();
        for v in out {
            let k = g.multiplicity(u, v);
            if u != v && k > 0 && (g.is_directed() || u < v) {
                key.push_str(&if k == 1 {
                    format!("{u}-{v},")
                } else {
                    format!("{u}-{v}*{k},")
                });
            }
        }
    }
    key.pop();
    key
}

/// As [`gamma`], replaying and recording basis decisions in `cache`.
pub fn gamma_with_cache<A: Adjacency + ?Sized>(
    g: &A,
    domain: DomainTag,
    cfg: &SearchConfig,
    cache: Option<&DecisionCache>,
) -> Result<GammaResult> {
    let m = SymbolicMatrix::checked(g)?;
    let n = m.n();
    let mut decisions: Vec<Option<IndexDecision>> = vec![None; n + 1];
    if n == 0 {
        return Ok(GammaResult {
            domain,
            n,
            lower: 0,
            upper: 0,
            value: Some(0),
            decisions: Vec::new(),
            groebner_runs: 0,
        });
    }

    // lower bound from the forcing certificate
    let zf = zero_forcing_number(g);
    let cert = certificate_minor(g, &zf.witness)?;
    let mut lower = cert.rows.len();
    for slot in decisions.iter_mut().take(lower + 1).skip(1) {
        *slot = Some(IndexDecision {
            index: 0,
            trivial: Some(true),
            evidence: Evidence::ForcingMinor {
                rows: cert.rows.clone(),
                cols: cert.cols.clone(),
            },
        });
    }

    // upper bound: the determinant, then evaluation points
    let mut upper = n - 1;
    let mut upper_evidence = Evidence::Determinant;
    if lower < upper {
        if let Some(ev) = evaluation_upper_bound(&m, domain, lower, cfg) {
            if let Evidence::EvaluationPoint { rank, .. } = ev {
                if rank < upper {
                    upper = rank;
                    upper_evidence = ev;
                }
            }
        }
    }
    for (i, slot) in decisions.iter_mut().enumerate().skip(upper + 1) {
        *slot = Some(IndexDecision {
            index: i,
            trivial: Some(false),
            evidence: if i == n {
                Evidence::Determinant
            } else {
                upper_evidence.clone()
            },
        });
    }

    // close the gap index by index
    let mut groebner_runs = 0;
    let cfg_hash = config_hash(cfg);
    if lower < upper {
        let mut expander = MinorExpander::new(&m, cfg.order)?;
        let key = cache.map(|_| labeled_key(g));
        let mut i = lower + 1;
        while i <= upper {
            let cached = cache
                .zip(key.as_deref())
                .and_then(|(c, k)| c.get(k, domain, i, cfg_hash));
            let decision = match cached {
                Some(d) => d,
                None => {
                    let minors = expander.minors_of_size(i);
                    let d = decide_from_minors(expander.ring(), &minors, domain, cfg);
                    if let (Some(c), Some(k)) = (cache, key.as_deref()) {
                        if d.trivial.is_some() && matches!(d.evidence, Evidence::Groebner { .. }) {
                            c.put(k, domain, cfg_hash, d.clone());
                        }
                    }
                    d
                }
            };
            if matches!(decision.evidence, Evidence::Groebner { .. }) {
                groebner_runs += 1;
            }
            match decision.trivial {
                Some(true) => {
                    lower = i;
                    decisions[i] = Some(decision);
                    i += 1;
                }
                Some(false) => {
                    for (k, slot) in decisions.iter_mut().enumerate().take(upper + 1).skip(i + 1) {
                        *slot = Some(IndexDecision {
                            index: k,
                            trivial: Some(false),
                            evidence: Evidence::Nesting { from: i },
                        });
                    }
                    upper = i - 1;
                    decisions[i] = Some(decision);
                    break;
                }
                None => {
                    decisions[i] = Some(decision);
                    break;
                }
            }
        }
    }

    let decisions: Vec<IndexDecision> = (1..=n)
        .map(|i| match decisions[i].take() {
            Some(mut d) => {
                d.index = i;
                d
            }
            None => IndexDecision {
                index: i,
                trivial: None,
                evidence: Evidence::Undecided {
                    reason: "not reached".into(),
                },
            },
        })
        .collect();
    Ok(GammaResult {
        domain,
        n,
        lower,
        upper,
        value: (lower == upper).then_some(lower),
        decisions,
        groebner_runs,
    })
}

/// A reduced basis of `I_i` for display, over `Q` or `F_p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportedBasis {
    pub index: usize,
    pub domain: DomainTag,
    pub order: MonomialOrder,
    pub generators: Vec<String>,
}

pub fn groebner_basis_of_critical_ideal(
    m: &SymbolicMatrix,
    i: usize,
    domain: DomainTag,
    cfg: &SearchConfig,
) -> Result<ReportedBasis> {
    let minors = minor_generators(m, i, cfg.order)?;
    let zring = PolyRing::new(Integers, m.n(), cfg.order)?;
    let generators = match domain {
        DomainTag::Rationals | DomainTag::Integers => {
            let q = PolyRing::new(Rationals, m.n(), cfg.order)?;
            let qg: Vec<_> = minors
                .generators
                .iter()
                .map(|g| zring.map_into(g, &q, |c| BigRational::from_integer(c.clone())))
                .collect();
            let rows = linear_interreduce(&q, &qg);
            let gb = buchberger(&q, &rows, cfg.budget, false)?;
            gb.generators.iter().map(|p| q.render(p)).collect()
        }
        DomainTag::PrimeField(p) => {
            let field = PrimeField::new(p)
                .ok_or_else(|| crate::error::Error::Budget(format!("{p} is not a usable prime")))?;
            let f = PolyRing::new(field, m.n(), cfg.order)?;
            let fg: Vec<_> = minors
                .generators
                .iter()
                .map(|g| zring.map_into(g, &f, |c| field.from_int(c)))
                .collect();
            let rows = linear_interreduce(&f, &fg);
            let gb = buchberger(&f, &rows, cfg.budget, false)?;
            gb.generators.iter().map(|q| f.render(q)).collect()
        }
    };
    Ok(ReportedBasis {
        index: i,
        domain,
        order: cfg.order,
        generators,
    })
}

/// Compares `I_i` with an ideal given by generator texts, over a field, by
/// mutual reduction of the two reduced bases.
pub fn critical_ideal_equals(
    m: &SymbolicMatrix,
    i: usize,
    field: DomainTag,
    claimed: &[&str],
    cfg: &SearchConfig,
) -> Result<bool> {
    use crate::poly::groebner::ideals_equal;
    let minors = minor_generators(m, i, cfg.order)?;
    let zring = PolyRing::new(Integers, m.n(), cfg.order)?;
    match field {
        DomainTag::PrimeField(p) => {
            let fd = PrimeField::new(p)
                .ok_or_else(|| crate::error::Error::Budget(format!("{p} is not a usable prime")))?;
            let f = PolyRing::new(fd, m.n(), cfg.order)?;
            let ours: Vec<_> = minors
                .generators
                .iter()
                .map(|g| zring.map_into(g, &f, |c| fd.from_int(c)))
                .collect();
            let theirs = claimed
                .iter()
                .map(|t| f.parse(t))
                .collect::<Result<Vec<_>>>()?;
            let ours = linear_interreduce(&f, &ours);
            Ok(ideals_equal(&f, &ours, &theirs, cfg.budget)?)
        }
        _ => {
            let q = PolyRing::new(Rationals, m.n(), cfg.order)?;
            let ours: Vec<_> = minors
                .generators
                .iter()
                .map(|g| zring.map_into(g, &q, |c| BigRational::from_integer(c.clone())))
                .collect();
            let theirs = claimed
                .iter()
                .map(|t| q.parse(t))
                .collect::<Result<Vec<_>>>()?;
            let ours = linear_interreduce(&q, &ours);
            Ok(ideals_equal(&q, &ours, &theirs, cfg.budget)?)
        }
    }
}

/// Compares `I_i` with a claimed ideal of `Z[x]`. Both inclusions are shown
/// by explicit integer combinations (generators times monomials, then
/// integer row reduction); `Some(true)` is a proof of equality, `None` means
/// the bounded search found no combination for some generator.
pub fn critical_ideal_equals_over_z(
    m: &SymbolicMatrix,
    i: usize,
    claimed: &[&str],
    cfg: &SearchConfig,
) -> Result<Option<bool>> {
    use crate::poly::contained_in_z_ideal;
    let minors = minor_generators(m, i, cfg.order)?;
    let zring = PolyRing::new(Integers, m.n(), cfg.order)?;
    let theirs = claimed
        .iter()
        .map(|t| zring.parse(t))
        .collect::<Result<Vec<_>>>()?;
    // a difference over Q or modulo a prime is a definite "not equal"
    let q_equal = critical_ideal_equals(m, i, DomainTag::Rationals, claimed, cfg)?;
    if !q_equal {
        return Ok(Some(false));
    }
    for &p in &cfg.primes {
        if !critical_ideal_equals(m, i, DomainTag::PrimeField(p), claimed, cfg)? {
            return Ok(Some(false));
        }
    }
    let max_deg = minors
        .generators
        .iter()
        .map(|g| g.total_degree())
        .max()
        .unwrap_or(0);
    let ours_in_theirs = contained_in_z_ideal(&zring, &theirs, &minors.generators, max_deg as u16);
    let theirs_in_ours =
        (0..=1).any(|d| contained_in_z_ideal(&zring, &minors.generators, &theirs, d));
    Ok((ours_in_theirs && theirs_in_ours).then_some(true))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{bull, complete, cycle, octahedron, path, petersen};

    fn q_cfg() -> SearchConfig {
        SearchConfig::default()
    }

    #[test]
    fn labeled_keys_separate_labelings() {
        assert_eq!(labeled_key(&path(3)), "g3:0-1,1-2");
        assert_ne!(
            labeled_key(&path(3)),
            labeled_key(&path(3).relabel(&[1, 0, 2]))
        );
        assert_eq!(labeled_key(&path(2).to_digraph()), "d2:0-1,1-0");
        assert_eq!(labeled_key(&crate::Graph::new(0)), "g0");
    }

    #[test]
    fn subset_masks() {
        assert_eq!(
            masks(4, 2),
            vec![0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100]
        );
        assert_eq!(masks(3, 3), vec![0b111]);
        assert_eq!(masks(3, 0), vec![0]);
        assert_eq!(masks(5, 1).len(), 5);
    }

    #[test]
    fn path_three_full_minor() {
        let m = SymbolicMatrix::of(&path(3));
        let s = minor_generators(&m, 3, MonomialOrder::DegRevLex).unwrap();
        assert_eq!(s.generators.len(), 1);
        let r = PolyRing::new(Integers, 3, MonomialOrder::DegRevLex).unwrap();
        assert_eq!(r.render(&s.generators[0]), "x0*x1*x2 - x0 - x2");
        let s2 = minor_generators(&m, 2, MonomialOrder::DegRevLex).unwrap();
        assert!(s2.unit_minor.is_some());
    }

    #[test]
    fn first_minors_are_entries() {
        let m = SymbolicMatrix::of(&path(3));
        let s = minor_generators(&m, 1, MonomialOrder::DegRevLex).unwrap();
        // x0, x1, x2 and the constant 1 (from -1 up to sign)
        assert_eq!(s.generators.len(), 4);
        assert!(s.unit_minor.is_some());
    }

    #[test]
    fn bull_has_unit_three_minor() {
        let m = SymbolicMatrix::of(&bull());
        let s = minor_generators(&m, 3, MonomialOrder::DegRevLex).unwrap();
        assert!(s.unit_minor.is_some());
    }

    #[test]
    fn octahedron_gamma_values() {
        let g = octahedron();
        let q = gamma(&g, DomainTag::Rationals, &q_cfg()).unwrap();
        assert_eq!(q.value, Some(3));
        let z = gamma(&g, DomainTag::Integers, &q_cfg()).unwrap();
        assert_eq!(z.value, Some(2));
        let m = SymbolicMatrix::of(&g);
        assert_eq!(rank_i64(&m.evaluate(&[0; 6])).rank, 3);
        let d = ideal_trivial(&m, 3, DomainTag::Integers, &q_cfg()).unwrap();
        assert_eq!(d.trivial, Some(false));
        let d = ideal_trivial(&m, 3, DomainTag::Rationals, &q_cfg()).unwrap();
        assert_eq!(d.trivial, Some(true));
    }

    #[test]
    fn octahedron_three_minors_over_z() {
        let m = SymbolicMatrix::of(&octahedron());
        let claimed = ["x0", "x1", "x2", "x3", "x4", "x5", "2"];
        assert_eq!(
            critical_ideal_equals_over_z(&m, 3, &claimed, &q_cfg()).unwrap(),
            Some(true)
        );
        let wrong = ["x0", "x1", "x2", "x3", "x4", "x5", "4"];
        assert_ne!(
            critical_ideal_equals_over_z(&m, 3, &wrong, &q_cfg()).unwrap(),
            Some(true)
        );
    }

    #[test]
    fn tripartite_three_three_three_over_z() {
        let g = crate::generators::complete_multipartite(&[3, 3, 3]);
        let r = gamma(&g, DomainTag::Integers, &q_cfg()).unwrap();
        assert_eq!(r.value, Some(2));
        assert_eq!(r.groebner_runs, 0);
        assert!(matches!(
            r.decisions[2].evidence,
            Evidence::EvaluationPoint { prime: Some(_), .. }
        ));
    }

    #[test]
    fn complete_graphs_have_corank_one() {
        for n in 2..=5 {
            for dom in [
                DomainTag::Rationals,
                DomainTag::Integers,
                DomainTag::PrimeField(3),
            ] {
                let r = gamma(&complete(n), dom, &q_cfg()).unwrap();
                assert_eq!(r.value, Some(1), "K{n} over {dom}");
            }
        }
        let m = SymbolicMatrix::of(&complete(4));
        let cert = nontriviality_certificate(&m, 2, DomainTag::Rationals, &q_cfg()).unwrap();
        match cert {
            Evidence::EvaluationPoint { rank, .. } => assert_eq!(rank, 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn single_vertex_has_corank_zero() {
        let r = gamma(&crate::graph::Graph::new(1), DomainTag::Integers, &q_cfg()).unwrap();
        assert_eq!(r.value, Some(0));
        assert_eq!(r.decisions[0].evidence, Evidence::Determinant);
    }

    #[test]
    fn petersen_closes_by_sandwich() {
        let mut cfg = q_cfg();
        cfg.box_radius = 1;
        for dom in [DomainTag::Rationals, DomainTag::Integers] {
            let r = gamma(&petersen(), dom, &cfg).unwrap();
            assert_eq!(r.value, Some(5));
            assert!(r.closed_by_sandwich());
        }
    }

    #[test]
    fn cycle_five_box_point() {
        let m = SymbolicMatrix::of(&cycle(5));
        let scan = variety_box_search(&m, 3, 2, 1_000_000);
        let (point, rank) = scan.hit.unwrap();
        assert!(rank <= 3);
        assert!(point.iter().map(|v| v.abs()).max().unwrap() <= 2);
    }

    #[test]
    fn k2_box_point() {
        let m = SymbolicMatrix::of(&complete(2));
        let scan = variety_box_search(&m, 1, 1, 100);
        let (point, rank) = scan.hit.unwrap();
        assert_eq!(rank, 1);
        assert_eq!(point, vec![-1, -1]);
    }

    #[test]
    fn scan_order_by_norm_then_lex() {
        let m = SymbolicMatrix::of(&complete(2));
        // target 0 is unreachable: the scan must be complete and visit 9 points
        let scan = scan_box(&m, &symmetric_box(1), None, 0, 100);
        assert!(scan.complete && scan.hit.is_none());
        assert_eq!(scan.points, 9);
        assert_eq!(scan.best.unwrap(), (vec![-1, -1], 1));
    }
}
