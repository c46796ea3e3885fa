//! Black-box oracles `f : Z_q^n -> S` stored as dense value tables.
//!
//! The range `S` is encoded as the integers `[0, |S|)`. Tables are immutable
//! after construction and safe to query concurrently; [`CountingOracle`]
//! wraps a table with an exact query tally for complexity accounting.
//!
//! Generators draw from ChaCha8 with 64-bit seeds (see [`crate::seed`]), so
//! the same seed reproduces the same table everywhere. Tables round-trip
//! through a JSON document with fields `q`, `n`, `range_size`, `values`
//! (mixed-radix index order) and an optional `meta` provenance object.

use std::sync::atomic::{AtomicU64, Ordering};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::group::{GroupElement, GroupSpec};
use crate::{influence, seed, Error, Result};

/// Read access to a function `Z_q^n -> [0, range_size)`.
///
/// `query_index` is the hot path; `query` validates the element first.
pub trait Oracle {
    fn spec(&self) -> &GroupSpec;
    fn range_size(&self) -> u64;
    /// Table read by canonical index. Panics if the index is out of range.
    fn query_index(&self, index: usize) -> u64;

    fn query(&self, x: &GroupElement) -> Result<u64> {
        let index = self.spec().index_of(x)?;
        Ok(self.query_index(index))
    }
}

/// Optional provenance attached to a table: which generator produced it,
/// from which seed, and (for derived tables) the shift or tuple parameters.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableMeta {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shift: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_range: Option<u64>,
}

/// A dense table for `f : Z_q^n -> [0, range_size)`, indexed canonically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionTable {
    spec: GroupSpec,
    range_size: u64,
    values: Vec<u64>,
    meta: Option<TableMeta>,
}

impl FunctionTable {
    pub fn from_values(spec: GroupSpec, range_size: u64, values: Vec<u64>) -> Result<Self> {
        if range_size < 2 {
            return Err(Error::RangeTooSmall(range_size));
        }
        if values.len() != spec.order() {
            return Err(Error::TableLength {
                expected: spec.order(),
                got: values.len(),
            });
        }
        if let Some(&value) = values.iter().find(|&&v| v >= range_size) {
            return Err(Error::ValueOutOfRange { value, range_size });
        }
        Ok(Self {
            spec,
            range_size,
            values,
            meta: None,
        })
    }

    pub fn from_fn(
        spec: GroupSpec,
        range_size: u64,
        f: impl FnMut(usize) -> u64,
    ) -> Result<Self> {
        let values = (0..spec.order()).map(f).collect();
        Self::from_values(spec, range_size, values)
    }

    pub fn constant(spec: GroupSpec, range_size: u64, value: u64) -> Result<Self> {
        Self::from_values(spec, range_size, vec![value; spec.order()])
    }

    /// The injective reference table `values[i] = i` with `|S| = |G|`.
    pub fn identity_table(spec: GroupSpec) -> Result<Self> {
        Self::from_values(spec, spec.order() as u64, (0..spec.order() as u64).collect())
    }

    /// A uniformly random table; identical seeds give identical tables.
    pub fn random(spec: GroupSpec, range_size: u64, seed: u64) -> Result<Self> {
        if range_size < 2 {
            return Err(Error::RangeTooSmall(range_size));
        }
        let mut rng = seed::rng(seed);
        let values = (0..spec.order()).map(|_| rng.gen_range(0..range_size)).collect();
        let table = Self::from_values(spec, range_size, values)?;
        Ok(table.with_meta(TableMeta {
            generator: Some("random".into()),
            seed: Some(seed),
            ..TableMeta::default()
        }))
    }

    /// Rejection-samples a uniformly random non-periodic table. The expected
    /// number of redraws is close to zero: periodic tables have probability
    /// at most `q^n / |S|^(q^n / 2)`.
    pub fn random_non_periodic(spec: GroupSpec, range_size: u64, seed: u64) -> Result<Self> {
        if range_size < 2 {
            return Err(Error::RangeTooSmall(range_size));
        }
        let mut rng = seed::rng(seed);
        loop {
            let values: Vec<u64> =
                (0..spec.order()).map(|_| rng.gen_range(0..range_size)).collect();
            let table = Self::from_values(spec, range_size, values)?;
            if influence::periodic_witness(&table).is_none() {
                return Ok(table.with_meta(TableMeta {
                    generator: Some("random-non-periodic".into()),
                    seed: Some(seed),
                    ..TableMeta::default()
                }));
            }
        }
    }

    /// The left-translated table `f(x) = g(s + x)` where `g` is `self`.
    pub fn shifted(&self, s: &GroupElement) -> Result<Self> {
        let s_index = self.spec.index_of(s)?;
        let values = (0..self.spec.order())
            .map(|x| self.values[self.spec.combine_indices(s_index, x)])
            .collect();
        let table = Self::from_values(self.spec, self.range_size, values)?;
        Ok(table.with_meta(TableMeta {
            generator: Some("shifted".into()),
            shift: Some(s.digits().to_vec()),
            ..TableMeta::default()
        }))
    }

    /// The Maiorana–McFarland construction over `Z_2^{2k}`: splitting
    /// `x = (a, b)` with `a` the low `k` digits,
    /// `f(a, b) = <a, pi(b)> + aux[b] (mod 2)`.
    ///
    /// For any permutation `pi` of `[0, 2^k)` and any bit vector `aux` the
    /// result is bent.
    pub fn mm_bent(k: u32, pi: &[usize], aux: &[bool]) -> Result<Self> {
        if k == 0 {
            return Err(Error::DimensionZero);
        }
        let half = 1usize << k;
        if pi.len() != half {
            return Err(Error::NotBijection(half));
        }
        let mut seen = vec![false; half];
        for &image in pi {
            if image >= half || seen[image] {
                return Err(Error::NotBijection(half));
            }
            seen[image] = true;
        }
        if aux.len() != half {
            return Err(Error::AuxLength {
                expected: half,
                got: aux.len(),
            });
        }
        let spec = GroupSpec::new(2, 2 * k)?;
        let mask = half - 1;
        let values = (0..spec.order())
            .map(|x| {
                let a = x & mask;
                let b = x >> k;
                let dot = (a & pi[b]).count_ones() as u64 & 1;
                dot ^ aux[b] as u64
            })
            .collect();
        let table = Self::from_values(spec, 2, values)?;
        Ok(table.with_meta(TableMeta {
            generator: Some("mm-bent".into()),
            ..TableMeta::default()
        }))
    }

    pub fn with_meta(mut self, meta: TableMeta) -> Self {
        self.meta = Some(meta);
        self
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn range_size(&self) -> u64 {
        self.range_size
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn meta(&self) -> Option<&TableMeta> {
        self.meta.as_ref()
    }

    pub fn is_injective(&self) -> bool {
        self.first_collision().is_none()
    }

    /// The lexicographically least pair of indices with equal values.
    pub fn first_collision(&self) -> Option<(usize, usize)> {
        first_collision_in(&self.values)
    }

    pub fn collision_witness(&self) -> Option<(GroupElement, GroupElement)> {
        self.first_collision().map(|(x, y)| {
            (
                self.spec.element_at(x).expect("index in range"),
                self.spec.element_at(y).expect("index in range"),
            )
        })
    }

    pub fn counting(&self) -> CountingOracle<'_> {
        CountingOracle::new(self)
    }

    pub fn to_json(&self) -> String {
        let doc = OracleDocument {
            q: self.spec.q(),
            n: self.spec.n(),
            range_size: self.range_size,
            values: self.values.clone(),
            meta: self.meta.clone(),
        };
        serde_json::to_string(&doc).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: OracleDocument = serde_json::from_str(text)?;
        let spec = GroupSpec::new(doc.q, doc.n)?;
        let table = Self::from_values(spec, doc.range_size, doc.values)?;
        Ok(match doc.meta {
            Some(meta) => table.with_meta(meta),
            None => table,
        })
    }
}

impl Oracle for FunctionTable {
    fn spec(&self) -> &GroupSpec {
        &self.spec
    }
    fn range_size(&self) -> u64 {
        self.range_size
    }
    #[inline]
    fn query_index(&self, index: usize) -> u64 {
        self.values[index]
    }
}

/// Wraps a table with an exact, thread-safe query tally.
#[derive(Debug)]
pub struct CountingOracle<'a> {
    table: &'a FunctionTable,
    queries: AtomicU64,
}

impl<'a> CountingOracle<'a> {
    pub fn new(table: &'a FunctionTable) -> Self {
        Self {
            table,
            queries: AtomicU64::new(0),
        }
    }

    pub fn count(&self) -> u64 {
        self.queries.load(Ordering::Relaxed)
    }

    pub fn reset(&self) {
        self.queries.store(0, Ordering::Relaxed);
    }

    pub fn table(&self) -> &FunctionTable {
        self.table
    }
}

impl Oracle for CountingOracle<'_> {
    fn spec(&self) -> &GroupSpec {
        self.table.spec()
    }
    fn range_size(&self) -> u64 {
        self.table.range_size()
    }
    #[inline]
    fn query_index(&self, index: usize) -> u64 {
        self.queries.fetch_add(1, Ordering::Relaxed);
        self.table.query_index(index)
    }
}

/// Finds the lexicographically least pair `(i, j)`, `i < j`, with
/// `values[i] == values[j]`, via a stable sort on `(value, index)`.
pub(crate) fn first_collision_in(values: &[u64]) -> Option<(usize, usize)> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_unstable_by_key(|&i| (values[i], i));
    let mut best: Option<(usize, usize)> = None;
    let mut run = 0;
    for k in 1..order.len() {
        if values[order[k]] != values[order[run]] {
            run = k;
            continue;
        }
        // run indices are ascending, so the least pair of this run is its
        // first two entries
        if k == run + 1 {
            let pair = (order[run], order[k]);
            if best.is_none_or(|b| pair < b) {
                best = Some(pair);
            }
        }
    }
    best
}

#[derive(Serialize, Deserialize)]
struct OracleDocument {
    q: u64,
    n: u32,
    range_size: u64,
    values: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    meta: Option<TableMeta>,
}
