//! Representation-table construction.
//!
//! A table for `s` summands is built either by enumerating nondecreasing index
//! tuples with their multinomial multiplicity, or by convolving the tables for
//! `ceil(s/2)` and `floor(s/2)` summands. Chunk boundaries never depend on the
//! thread count and every merge runs in chunk order, so floating results are
//! bit-identical across pool sizes.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use super::amplitude::{AmpValue, Amplitude, BigGauss, GaussInt, NormAccumulator};
use super::keyspace::{KeySpace, LinearPacked, ModPacked, WideSpace};
use crate::arith::binomial;
use crate::error::{Error, Result};

const CONVOLVE_CHUNKS: usize = 64;

/// Per-point weights of a [`PointSet`].
#[derive(Debug, Clone, PartialEq)]
pub enum PointWeights {
    Ones,
    Gaussian(Vec<GaussInt>),
    Float(Vec<Complex64>),
}

/// Points given by their component values, each carrying a weight.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    pub values: Vec<Vec<BigInt>>,
    pub weights: PointWeights,
}

impl PointSet {
    pub fn unweighted(values: Vec<Vec<BigInt>>) -> Self {
        PointSet {
            values,
            weights: PointWeights::Ones,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `sum |re| + |im|` over the weights.
    fn l1_mass(&self) -> BigUint {
        match &self.weights {
            PointWeights::Ones => BigUint::from(self.values.len()),
            PointWeights::Gaussian(w) => w.iter().map(|g| BigUint::from(g.l1())).sum(),
            PointWeights::Float(_) => <BigUint as Zero>::zero(),
        }
    }
}

/// A product of point sets: the table of all tuples taking `summands` points
/// from each part in turn.
#[derive(Debug, Clone)]
pub struct TableSpec {
    pub arity: usize,
    /// Reduce every component modulo this value.
    pub modulus: Option<BigInt>,
    pub parts: Vec<(PointSet, usize)>,
}

impl TableSpec {
    pub fn single(arity: usize, modulus: Option<BigInt>, points: PointSet, s: usize) -> Self {
        TableSpec {
            arity,
            modulus,
            parts: vec![(points, s)],
        }
    }

    pub fn summands(&self) -> usize {
        self.parts.iter().map(|p| p.1).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Auto,
    Enumerate,
    Convolve,
}

#[derive(Debug, Clone)]
pub struct EngineConfig {
    /// Cap on estimated table bytes.
    pub memory_cap: u128,
    /// Largest multiset count enumerated directly under [`Strategy::Auto`].
    pub enumerate_threshold: u128,
    pub strategy: Strategy,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            memory_cap: 8 << 30,
            enumerate_threshold: 200_000_000,
            strategy: Strategy::Auto,
        }
    }
}

/// Kind of value stored in a table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AmpKind {
    Count,
    Gaussian,
    Float,
}

/// Type-erased view of a built table.
pub trait TableStore: Send + Sync {
    fn len(&self) -> usize;
    fn entry(&self, i: usize) -> (Vec<BigInt>, AmpValue);
    fn get(&self, m: &[BigInt]) -> Option<AmpValue>;
    /// Accumulated `sum_m |A(m)|^2`.
    fn norm(&self) -> NormAccumulator;
    fn mass(&self) -> AmpValue;
}

struct TypedTable<S: KeySpace, A> {
    space: S,
    summands: usize,
    entries: Vec<(S::Key, A)>,
}

impl<S: KeySpace, A: Amplitude> TableStore for TypedTable<S, A> {
    fn len(&self) -> usize {
        self.entries.len()
    }

    fn entry(&self, i: usize) -> (Vec<BigInt>, AmpValue) {
        let (k, a) = &self.entries[i];
        (self.space.decode(k, self.summands), a.value())
    }

    fn get(&self, m: &[BigInt]) -> Option<AmpValue> {
        let key = self.space.encode_vector(m, self.summands)?;
        let i = self.entries.binary_search_by(|e| e.0.cmp(&key)).ok()?;
        Some(self.entries[i].1.value())
    }

    fn norm(&self) -> NormAccumulator {
        let mut acc = NormAccumulator::default();
        for (_, a) in &self.entries {
            a.accumulate_norm(&mut acc);
        }
        acc
    }

    fn mass(&self) -> AmpValue {
        let mut total = A::zero();
        for (_, a) in &self.entries {
            total.add_assign(a);
        }
        total.value()
    }
}

/// A representation table in canonical (lexicographic) key order.
pub struct RepTable {
    store: Box<dyn TableStore>,
    arity: usize,
    summands: usize,
    kind: AmpKind,
    records: u128,
}

impl std::fmt::Debug for RepTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RepTable")
            .field("arity", &self.arity)
            .field("summands", &self.summands)
            .field("kind", &self.kind)
            .field("entries", &self.store.len())
            .finish()
    }
}

impl RepTable {
    pub fn len(&self) -> usize {
        self.store.len()
    }

    pub fn is_empty(&self) -> bool {
        self.store.len() == 0
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn summands(&self) -> usize {
        self.summands
    }

    pub fn kind(&self) -> AmpKind {
        self.kind
    }

    /// Upper bound on the number of terms folded into any single entry.
    pub fn records(&self) -> u128 {
        self.records
    }

    pub fn get(&self, m: &[BigInt]) -> Option<AmpValue> {
        self.store.get(m)
    }

    pub fn entry(&self, i: usize) -> (Vec<BigInt>, AmpValue) {
        self.store.entry(i)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vec<BigInt>, AmpValue)> + '_ {
        (0..self.store.len()).map(move |i| self.store.entry(i))
    }

    pub fn norm(&self) -> NormAccumulator {
        self.store.norm()
    }

    pub fn mass(&self) -> AmpValue {
        self.store.mass()
    }
}

/// Lifting of point weights into an amplitude type.
trait Lift: Amplitude {
    fn lift(w: &PointWeights, i: usize) -> Self;
}

impl Lift for u64 {
    fn lift(_: &PointWeights, _: usize) -> Self {
        1
    }
}

impl Lift for u128 {
    fn lift(_: &PointWeights, _: usize) -> Self {
        1
    }
}

impl Lift for BigUint {
    fn lift(_: &PointWeights, _: usize) -> Self {
        BigUint::one()
    }
}

impl Lift for GaussInt {
    fn lift(w: &PointWeights, i: usize) -> Self {
        match w {
            PointWeights::Gaussian(v) => v[i],
            _ => GaussInt::new(1, 0),
        }
    }
}

impl Lift for BigGauss {
    fn lift(w: &PointWeights, i: usize) -> Self {
        BigGauss::from(GaussInt::lift(w, i))
    }
}

impl Lift for Complex64 {
    fn lift(w: &PointWeights, i: usize) -> Self {
        match w {
            PointWeights::Ones => Complex64::new(1.0, 0.0),
            PointWeights::Gaussian(v) => v[i].to_complex(),
            PointWeights::Float(v) => v[i],
        }
    }
}

enum AmpPlan {
    U64,
    U128,
    Big,
    Gauss,
    BigGauss,
    Float,
}

fn amp_plan(spec: &TableSpec) -> (AmpPlan, AmpKind) {
    let float = spec
        .parts
        .iter()
        .any(|(p, _)| matches!(p.weights, PointWeights::Float(_)));
    let gauss = spec
        .parts
        .iter()
        .any(|(p, _)| matches!(p.weights, PointWeights::Gaussian(_)));
    if float {
        return (AmpPlan::Float, AmpKind::Float);
    }
    let mut bound = BigUint::one();
    for (p, s) in &spec.parts {
        bound *= p.l1_mass().pow(*s as u32);
    }
    if gauss {
        let plan = if bound < (BigUint::one() << 125u32) {
            AmpPlan::Gauss
        } else {
            AmpPlan::BigGauss
        };
        return (plan, AmpKind::Gaussian);
    }
    let plan = if bound <= BigUint::from(u64::MAX) {
        AmpPlan::U64
    } else if bound <= BigUint::from(u128::MAX) {
        AmpPlan::U128
    } else {
        AmpPlan::Big
    };
    (plan, AmpKind::Count)
}

/// Builds the representation table described by `spec`.
pub fn build_table(spec: &TableSpec, cfg: &EngineConfig) -> Result<RepTable> {
    if spec.parts.is_empty() || spec.parts.iter().any(|p| p.1 == 0) {
        return Err(Error::input("every part needs at least one summand"));
    }
    for (p, _) in &spec.parts {
        if p.values.iter().any(|v| v.len() != spec.arity) {
            return Err(Error::input("point arity does not match the table arity"));
        }
        let n = p.values.len();
        let ok = match &p.weights {
            PointWeights::Ones => true,
            PointWeights::Gaussian(w) => w.len() == n,
            PointWeights::Float(w) => w.len() == n,
        };
        if !ok {
            return Err(Error::input("weight count does not match point count"));
        }
    }
    if let Some(m) = &spec.modulus {
        if *m <= BigInt::zero() {
            return Err(Error::input("modulus must be positive"));
        }
    }
    let (amp, kind) = amp_plan(spec);
    let summands = spec.summands();
    let arity = spec.arity;
    let (store, records) = match &spec.modulus {
        Some(m) => {
            let m128 = m.to_u128();
            if let Some(sp) = m128.and_then(|m| ModPacked::<u64>::plan(m, arity)) {
                dispatch(sp, spec, amp, cfg)?
            } else if let Some(sp) = m128.and_then(|m| ModPacked::<u128>::plan(m, arity)) {
                dispatch(sp, spec, amp, cfg)?
            } else {
                dispatch(WideSpace::new(arity, Some(m.clone())), spec, amp, cfg)?
            }
        }
        None => {
            let all: Vec<Vec<BigInt>> = spec
                .parts
                .iter()
                .flat_map(|(p, _)| p.values.iter().cloned())
                .collect();
            if let Some(sp) = LinearPacked::<u64>::plan(&all, arity, summands) {
                dispatch(sp, spec, amp, cfg)?
            } else if let Some(sp) = LinearPacked::<u128>::plan(&all, arity, summands) {
                dispatch(sp, spec, amp, cfg)?
            } else {
                dispatch(WideSpace::new(arity, None), spec, amp, cfg)?
            }
        }
    };
    Ok(RepTable {
        store,
        arity,
        summands,
        kind,
        records,
    })
}

fn dispatch<S: KeySpace>(
    space: S,
    spec: &TableSpec,
    amp: AmpPlan,
    cfg: &EngineConfig,
) -> Result<(Box<dyn TableStore>, u128)> {
    match amp {
        AmpPlan::U64 => run::<S, u64>(space, spec, cfg),
        AmpPlan::U128 => run::<S, u128>(space, spec, cfg),
        AmpPlan::Big => run::<S, BigUint>(space, spec, cfg),
        AmpPlan::Gauss => run::<S, GaussInt>(space, spec, cfg),
        AmpPlan::BigGauss => run::<S, BigGauss>(space, spec, cfg),
        AmpPlan::Float => run::<S, Complex64>(space, spec, cfg),
    }
}

type Entries<S, A> = Vec<(<S as KeySpace>::Key, A)>;

fn run<S: KeySpace, A: Lift>(
    space: S,
    spec: &TableSpec,
    cfg: &EngineConfig,
) -> Result<(Box<dyn TableStore>, u128)> {
    let mut acc: Option<Entries<S, A>> = None;
    let mut records: u128 = 1;
    for (points, s) in &spec.parts {
        let pts: Entries<S, A> = points
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| (space.encode_point(v), A::lift(&points.weights, i)))
            .collect();
        let pts = sort_aggregate(pts);
        let mut part_records = 1;
        let table = part_table(&space, &pts, *s, cfg, &mut part_records)?;
        records = records.saturating_mul(part_records);
        acc = Some(match acc {
            None => table,
            Some(prev) => convolve(&space, &prev, &table, cfg)?,
        });
    }
    let entries = acc.unwrap_or_default();
    let summands = spec.summands();
    Ok((
        Box::new(TypedTable {
            space,
            summands,
            entries,
        }),
        records,
    ))
}

fn estimate_check(what: &'static str, entries: u128, bytes_per: usize, cfg: &EngineConfig) -> Result<()> {
    let needed = entries.saturating_mul(bytes_per as u128).saturating_mul(2);
    if needed > cfg.memory_cap {
        return Err(Error::Resource {
            what,
            needed,
            cap: cfg.memory_cap,
        });
    }
    Ok(())
}

fn part_table<S: KeySpace, A: Amplitude>(
    space: &S,
    pts: &[(S::Key, A)],
    s: usize,
    cfg: &EngineConfig,
    records: &mut u128,
) -> Result<Entries<S, A>> {
    let n = pts.len() as u64;
    if n == 0 {
        return Ok(Vec::new());
    }
    let multisets = binomial(n + s as u64 - 1, s as u64).to_u128().unwrap_or(u128::MAX);
    let enumerate = s == 1
        || (s <= 20
            && match cfg.strategy {
                Strategy::Enumerate => true,
                Strategy::Convolve => false,
                // a small key space (residues) makes products collapse quickly
                Strategy::Auto => {
                    multisets <= cfg.enumerate_threshold
                        && space.capacity().is_none_or(|c| multisets <= c.saturating_mul(16))
                }
            });
    if enumerate {
        let bytes = space.key_bytes() + std::mem::size_of::<A>();
        estimate_check("multiset enumeration", multisets, bytes, cfg)?;
        *records = records.saturating_mul(multisets);
        return Ok(enumerate_multisets(space, pts, s));
    }
    let hi = s.div_ceil(2);
    let lo = s / 2;
    let mut rec_hi = 1;
    let a = part_table(space, pts, hi, cfg, &mut rec_hi)?;
    if lo == hi {
        *records = records.saturating_mul(rec_hi).saturating_mul(rec_hi);
        convolve(space, &a, &a, cfg)
    } else {
        let mut rec_lo = 1;
        let b = part_table(space, pts, lo, cfg, &mut rec_lo)?;
        *records = records.saturating_mul(rec_hi).saturating_mul(rec_lo);
        convolve(space, &a, &b, cfg)
    }
}

struct Dfs<'a, S: KeySpace, A> {
    space: &'a S,
    pts: &'a [(S::Key, A)],
    s: usize,
    fact_s: u64,
    out: Vec<(S::Key, A)>,
}

impl<S: KeySpace, A: Amplitude> Dfs<'_, S, A> {
    fn go(&mut self, depth: usize, last: usize, run: u64, denom: u64, key: &S::Key, amp: &A) {
        if depth == self.s {
            self.out.push((key.clone(), amp.scale(self.fact_s / denom)));
            return;
        }
        for j in last..self.pts.len() {
            let (r, d) = if j == last {
                (run + 1, denom * (run + 1))
            } else {
                (1, denom)
            };
            let k = self.space.add(key, &self.pts[j].0);
            let a = amp.mul(&self.pts[j].1);
            self.go(depth + 1, j, r, d, &k, &a);
        }
    }
}

/// Enumerates nondecreasing index tuples, weighting each by `s!/prod(run!)`.
fn enumerate_multisets<S: KeySpace, A: Amplitude>(space: &S, pts: &[(S::Key, A)], s: usize) -> Entries<S, A> {
    let n = pts.len();
    let fact_s = crate::arith::factorial_u64(s).expect("enumeration is limited to s <= 20");
    let chunks: Vec<Entries<S, A>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let cap = binomial((n - i + s - 2) as u64, (s - 1) as u64)
                .to_usize()
                .unwrap_or(0);
            let mut dfs = Dfs {
                space,
                pts,
                s,
                fact_s,
                out: Vec::with_capacity(cap),
            };
            dfs.go(1, i, 1, 1, &pts[i].0, &pts[i].1);
            dfs.out
        })
        .collect();
    let total = chunks.iter().map(Vec::len).sum();
    let mut all = Vec::with_capacity(total);
    for c in chunks {
        all.extend(c);
    }
    sort_aggregate(all)
}

/// Stable sort by key, then fold equal keys in order and drop zeros.
fn sort_aggregate<K: Ord + Clone + Send, A: Amplitude>(mut v: Vec<(K, A)>) -> Vec<(K, A)> {
    v.par_sort_by(|a, b| a.0.cmp(&b.0));
    v.dedup_by(|later, kept| {
        if later.0 == kept.0 {
            kept.1.add_assign(&later.1);
            true
        } else {
            false
        }
    });
    v.retain(|e| !e.1.is_zero());
    v.shrink_to_fit();
    v
}

fn convolve<S: KeySpace, A: Amplitude>(
    space: &S,
    a: &[(S::Key, A)],
    b: &[(S::Key, A)],
    cfg: &EngineConfig,
) -> Result<Entries<S, A>> {
    if a.is_empty() || b.is_empty() {
        return Ok(Vec::new());
    }
    let products = (a.len() as u128) * (b.len() as u128);
    let distinct = space.capacity().map_or(products, |c| c.min(products));
    let bytes = space.key_bytes() + std::mem::size_of::<A>() + 16;
    estimate_check("table convolution", distinct, bytes, cfg)?;
    let chunk = a.len().div_ceil(CONVOLVE_CHUNKS);
    let maps: Vec<HashMap<S::Key, A>> = a
        .par_chunks(chunk)
        .map(|rows| {
            let mut m: HashMap<S::Key, A> = HashMap::new();
            for (ka, va) in rows {
                for (kb, vb) in b {
                    let k = space.add(ka, kb);
                    let v = va.mul(vb);
                    match m.get_mut(&k) {
                        Some(e) => e.add_assign(&v),
                        None => {
                            m.insert(k, v);
                        }
                    }
                }
            }
            m
        })
        .collect();
    let mut iter = maps.into_iter();
    let mut merged = iter.next().unwrap_or_default();
    for m in iter {
        for (k, v) in m {
            match merged.get_mut(&k) {
                Some(e) => e.add_assign(&v),
                None => {
                    merged.insert(k, v);
                }
            }
        }
    }
    let mut out: Vec<(S::Key, A)> = merged.into_iter().filter(|e| !e.1.is_zero()).collect();
    out.par_sort_by(|x, y| x.0.cmp(&y.0));
    Ok(out)
}
