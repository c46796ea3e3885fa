//! Reduction of the injectivized hidden shift instance over `Z_2^n` to
//! period finding over `Z_2^{n+1}`, with an honest classical simulation of
//! the measurement sampling.
//!
//! The combined oracle is
//!
//! ```text
//! h(b || x) = f_V(x)  if b = 0
//!             g_V(x)  if b = 1
//! ```
//!
//! with the selector `b` as the most significant digit. Whenever
//! `f(x) = g(s + x)` holds, `h` has period `(1 || s)`. The sampler draws
//! from the exact distribution induced by measuring a uniform superposition
//! after applying `h` and a final Hadamard layer, computed from nothing but
//! `h`'s value table: it selects a preimage class `P_z` with probability
//! `|P_z| / 2^{n+1}` and then emits `y` with probability proportional to the
//! squared character sum `(sum over x in P_z of (-1)^{<x,y>})^2`. The hidden
//! shift never enters the sampler.

use std::collections::HashMap;

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use serde::Serialize;

use crate::group::{GroupElement, GroupSpec};
use crate::influence::wht_in_place;
use crate::injectivization::{build_fv, brute_force_shifts, InjectivizedTable, TupleV};
use crate::oracle::{CountingOracle, FunctionTable, Oracle};
use crate::{seed, Error, Result};

/// How many fresh tuples [`end_to_end_hidden_shift`] tries before reporting
/// failure.
pub const DEFAULT_RETRY_CAP: u32 = 3;

/// The combined oracle over `Z_2^{n+1}`, with its preimage classes
/// precomputed for sampling.
#[derive(Debug, Clone)]
pub struct SimonOracle {
    table: FunctionTable,
    base_dim: u32,
    m: u32,
    base_range: u64,
    classes: Vec<Vec<usize>>,
    class_of: Vec<u32>,
}

impl SimonOracle {
    /// The underlying table over `Z_2^{n+1}`.
    pub fn table(&self) -> &FunctionTable {
        &self.table
    }

    /// The dimension `n` of the base instance; the table lives on `n + 1` bits.
    pub fn base_dim(&self) -> u32 {
        self.base_dim
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn base_range(&self) -> u64 {
        self.base_range
    }

    /// Checks `h(z) = h(z XOR p)` for every `z`.
    pub fn has_period(&self, p_mask: usize) -> bool {
        if p_mask == 0 || p_mask >= self.table.spec().order() {
            return false;
        }
        let values = self.table.values();
        (0..values.len()).all(|z| values[z] == values[z ^ p_mask])
    }
}

/// Assembles the combined oracle from the two injectivized halves.
pub fn build_simon_oracle(
    fv: &InjectivizedTable,
    gv: &InjectivizedTable,
) -> Result<SimonOracle> {
    let spec = *fv.table().spec();
    if gv.table().spec() != &spec {
        return Err(Error::SpecMismatch);
    }
    if spec.q() != 2 {
        return Err(Error::GroupNotBinary);
    }
    if fv.m() != gv.m() || fv.base_range() != gv.base_range() {
        return Err(Error::SpecMismatch);
    }
    let combined_spec = GroupSpec::new(2, spec.n() + 1)?;
    let mut values = Vec::with_capacity(combined_spec.order());
    values.extend_from_slice(fv.table().values());
    values.extend_from_slice(gv.table().values());
    let table = FunctionTable::from_values(combined_spec, fv.table().range_size(), values)?;

    let mut ids: HashMap<u64, u32> = HashMap::new();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut class_of = Vec::with_capacity(combined_spec.order());
    for (x, &value) in table.values().iter().enumerate() {
        let id = *ids.entry(value).or_insert_with(|| {
            classes.push(Vec::new());
            (classes.len() - 1) as u32
        });
        classes[id as usize].push(x);
        class_of.push(id);
    }
    Ok(SimonOracle {
        table,
        base_dim: spec.n(),
        m: fv.m(),
        base_range: fv.base_range(),
        classes,
        class_of,
    })
}

/// One measurement sample from the exact post-Hadamard distribution.
///
/// Works for arbitrary `h`; a degraded oracle from a failed injectivization
/// simply produces its own (less informative) distribution.
pub fn simon_sample<R: Rng>(h: &SimonOracle, rng: &mut R) -> GroupElement {
    let size = h.table.spec().order();
    let anchor = rng.gen_range(0..size);
    let class = &h.classes[h.class_of[anchor] as usize];
    let y = match class.len() {
        // singleton class: the character sum has unit magnitude everywhere
        1 => rng.gen_range(0..size),
        // pair class: the squared sum is 4 on the hyperplane orthogonal to
        // the difference and 0 elsewhere
        2 => {
            let diff = class[0] ^ class[1];
            loop {
                let y = rng.gen_range(0..size);
                if (y & diff).count_ones() & 1 == 0 {
                    break y;
                }
            }
        }
        _ => {
            let mut sums = vec![0i64; size];
            for &x in class {
                sums[x] = 1;
            }
            wht_in_place(&mut sums);
            let weights = sums.iter().map(|&c| (c * c) as u64);
            let picker = WeightedIndex::new(weights).expect("class is nonempty");
            picker.sample(rng)
        }
    };
    h.table
        .spec()
        .element_at(y)
        .expect("sample index in range")
}

/// The exact sampling distribution over all of `Z_2^{n+1}`, as weights with
/// common denominator `2^{2(n+1)}`. The reference the sampler is tested
/// against.
pub fn sample_distribution(h: &SimonOracle) -> Vec<u64> {
    let size = h.table.spec().order();
    let mut weights = vec![0u64; size];
    for class in &h.classes {
        let mut sums = vec![0i64; size];
        for &x in class {
            sums[x] = 1;
        }
        wht_in_place(&mut sums);
        for (w, &c) in weights.iter_mut().zip(&sums) {
            *w += (c * c) as u64;
        }
    }
    weights
}

/// Incrementally row-reduced GF(2) samples with rank tracking.
///
/// Vectors are bitmasks in canonical index order (bit `j` is digit `j`);
/// pivots are chosen lowest index first.
#[derive(Debug, Clone)]
pub struct SampleMatrix {
    dim: u32,
    rows: Vec<u64>,
    basis: Vec<u64>,
}

impl SampleMatrix {
    pub fn new(dim: u32) -> Self {
        assert!((1..=63).contains(&dim), "dimension {dim} out of range");
        Self {
            dim,
            rows: Vec::new(),
            basis: Vec::new(),
        }
    }

    pub fn from_rows(dim: u32, rows: &[u64]) -> Self {
        let mut matrix = Self::new(dim);
        for &row in rows {
            matrix.add_row(row);
        }
        matrix
    }

    /// Records a sample; returns whether it increased the rank.
    pub fn add_row(&mut self, row: u64) -> bool {
        debug_assert!(row < (1u64 << self.dim));
        self.rows.push(row);
        let mut reduced = row;
        for &b in &self.basis {
            if reduced >> b.trailing_zeros() & 1 == 1 {
                reduced ^= b;
            }
        }
        if reduced == 0 {
            return false;
        }
        let position = self
            .basis
            .partition_point(|&b| b.trailing_zeros() < reduced.trailing_zeros());
        self.basis.insert(position, reduced);
        true
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// All raw samples in insertion order.
    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    /// A basis of `{ p : <y, p> = 0 for every collected y }`, ascending by
    /// free column.
    pub fn nullspace_basis(&self) -> Vec<u64> {
        // bring the basis to reduced row echelon form
        let mut rref = self.basis.clone();
        for i in 0..rref.len() {
            let pivot = rref[i].trailing_zeros();
            for j in 0..rref.len() {
                if j != i && rref[j] >> pivot & 1 == 1 {
                    rref[j] ^= rref[i];
                }
            }
        }
        let pivot_of_row: Vec<u32> = rref.iter().map(|r| r.trailing_zeros()).collect();
        let mut is_pivot = vec![false; self.dim as usize];
        for &p in &pivot_of_row {
            is_pivot[p as usize] = true;
        }
        let mut basis = Vec::new();
        for free in 0..self.dim {
            if is_pivot[free as usize] {
                continue;
            }
            let mut vector = 1u64 << free;
            for (row, &pivot) in rref.iter().zip(&pivot_of_row) {
                if row >> free & 1 == 1 {
                    vector |= 1u64 << pivot;
                }
            }
            basis.push(vector);
        }
        basis
    }
}

/// Outcome of a sampling run against one oracle.
#[derive(Debug, Clone)]
pub struct PeriodSearch {
    pub period: Option<GroupElement>,
    pub samples_drawn: usize,
    pub rank_reached: usize,
}

/// Draws samples until the matrix pins down a verified period, disproves any
/// period, or exhausts the budget.
///
/// At rank `n` the single nullspace candidate is checked against the table;
/// a failed check means the samples came from a degraded oracle, so the run
/// keeps sampling. Rank `n + 1` proves no nontrivial period exists.
pub fn period_search<R: Rng>(h: &SimonOracle, rng: &mut R, budget: usize) -> PeriodSearch {
    let n = h.base_dim() as usize;
    let dim = n + 1;
    let spec = *h.table().spec();
    let mut matrix = SampleMatrix::new(dim as u32);
    let mut drawn = 0;
    loop {
        if matrix.rank() == n {
            let candidate = matrix.nullspace_basis()[0];
            if h.has_period(candidate as usize) {
                let period = spec.element_at(candidate as usize).expect("mask in range");
                return PeriodSearch {
                    period: Some(period),
                    samples_drawn: drawn,
                    rank_reached: n,
                };
            }
        }
        if matrix.rank() == dim {
            return PeriodSearch {
                period: None,
                samples_drawn: drawn,
                rank_reached: dim,
            };
        }
        if drawn == budget {
            return PeriodSearch {
                period: None,
                samples_drawn: drawn,
                rank_reached: matrix.rank(),
            };
        }
        let y = simon_sample(h, rng);
        drawn += 1;
        matrix.add_row(spec.index_of(&y).expect("sampled element conforms") as u64);
    }
}

/// Seeded convenience wrapper around [`period_search`].
pub fn recover_period(h: &SimonOracle, seed_value: u64, budget: usize) -> Result<GroupElement> {
    let mut rng = seed::rng(seed_value);
    let search = period_search(h, &mut rng, budget);
    match search.period {
        Some(period) => Ok(period),
        None if search.rank_reached > h.base_dim() as usize => Err(Error::NoPeriod {
            samples: search.samples_drawn,
        }),
        None => Err(Error::BudgetExhausted {
            budget,
            rank: search.rank_reached,
        }),
    }
}

/// Splits the period `(1 || s)` into the shift `s`.
///
/// A zero selector bit means the period lives inside one half, i.e. `f_V`
/// itself is periodic and injectivization failed.
pub fn extract_shift(period: &GroupElement) -> Result<GroupElement> {
    let digits = period.digits();
    if digits.iter().all(|&d| d == 0) {
        return Err(Error::ZeroPeriod);
    }
    if digits[digits.len() - 1] != 1 {
        return Err(Error::PeriodSelectorZero);
    }
    let spec = GroupSpec::new(2, (digits.len() - 1) as u32)?;
    spec.element(digits[..digits.len() - 1].to_vec())
}

/// Which solver the pipeline used for the injective instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SolverPath {
    Simon,
    DelegatedBruteForce,
}

impl SolverPath {
    pub fn label(&self) -> &'static str {
        match self {
            SolverPath::Simon => "simon",
            SolverPath::DelegatedBruteForce => "injective-HSP solver delegated",
        }
    }
}

/// Diagnostics for one tuple attempt inside the pipeline.
#[derive(Debug, Clone, Serialize)]
pub struct AttemptReport {
    pub v_indices: Vec<usize>,
    pub fv_injective: bool,
    pub gv_injective: bool,
    pub samples_drawn: Option<usize>,
    pub rank_reached: Option<usize>,
    pub failure: Option<String>,
}

/// The pipeline result: the recovered shift (if any), per-attempt
/// diagnostics, and exact base-oracle query accounting.
#[derive(Debug, Clone, Serialize)]
pub struct RecoveryReport {
    pub path: SolverPath,
    pub shift: Option<GroupElement>,
    pub attempts: Vec<AttemptReport>,
    pub base_queries: u64,
}

impl RecoveryReport {
    pub fn succeeded(&self) -> bool {
        self.shift.is_some()
    }
}

/// Checks `f(x) = g(s + x)` on every point; two reads per point.
pub fn verify_shift<A: Oracle, B: Oracle>(f: &A, g: &B, s: &GroupElement) -> Result<bool> {
    if f.spec() != g.spec() || f.range_size() != g.range_size() {
        return Err(Error::SpecMismatch);
    }
    let spec = *f.spec();
    let s_index = spec.index_of(s)?;
    Ok((0..spec.order())
        .all(|x| f.query_index(x) == g.query_index(spec.combine_indices(s_index, x))))
}

/// Runs the whole reduction: sample a distinct tuple, injectivize both
/// oracles, recover the period (or delegate to brute force when `q > 2`),
/// extract the shift, and verify it against the original oracles before
/// returning. Each retry resamples only the tuple.
pub fn end_to_end_hidden_shift(
    f: &FunctionTable,
    g: &FunctionTable,
    m: usize,
    seed_value: u64,
    budget: usize,
) -> Result<RecoveryReport> {
    if f.spec() != g.spec() || f.range_size() != g.range_size() {
        return Err(Error::SpecMismatch);
    }
    let spec = *f.spec();
    let path = if spec.q() == 2 {
        SolverPath::Simon
    } else {
        SolverPath::DelegatedBruteForce
    };
    let counting_f = CountingOracle::new(f);
    let counting_g = CountingOracle::new(g);
    let mut attempts = Vec::new();
    let mut shift = None;

    for attempt in 0..DEFAULT_RETRY_CAP as u64 {
        let tuple = TupleV::sample_distinct(&spec, m, seed::derive(seed_value, 2 * attempt))?;
        let fv = build_fv(&counting_f, &tuple)?;
        let gv = build_fv(&counting_g, &tuple)?;
        let mut report = AttemptReport {
            v_indices: tuple.indices().to_vec(),
            fv_injective: fv.is_injective(),
            gv_injective: gv.is_injective(),
            samples_drawn: None,
            rank_reached: None,
            failure: None,
        };

        let candidate = match path {
            SolverPath::Simon => {
                let h = build_simon_oracle(&fv, &gv)?;
                let mut rng = seed::rng(seed::derive(seed_value, 2 * attempt + 1));
                let search = period_search(&h, &mut rng, budget);
                report.samples_drawn = Some(search.samples_drawn);
                report.rank_reached = Some(search.rank_reached);
                match search.period {
                    Some(period) => match extract_shift(&period) {
                        Ok(s) => Some(s),
                        Err(e) => {
                            report.failure = Some(e.to_string());
                            None
                        }
                    },
                    None => {
                        report.failure = Some(if search.rank_reached > spec.n() as usize {
                            format!(
                                "no nontrivial period after {} samples",
                                search.samples_drawn
                            )
                        } else {
                            format!(
                                "budget {} exhausted at rank {}",
                                budget, search.rank_reached
                            )
                        });
                        None
                    }
                }
            }
            SolverPath::DelegatedBruteForce => {
                let candidates = brute_force_shifts(fv.table(), gv.table())?;
                if candidates.len() == 1 {
                    Some(candidates.into_iter().next().expect("length checked"))
                } else {
                    report.failure =
                        Some(format!("{} candidate shifts on f_V", candidates.len()));
                    None
                }
            }
        };

        if let Some(s) = candidate {
            if verify_shift(&counting_f, &counting_g, &s)? {
                attempts.push(report);
                shift = Some(s);
                break;
            }
            report.failure = Some("candidate shift failed verification".into());
        }
        attempts.push(report);
    }

    Ok(RecoveryReport {
        path,
        shift,
        attempts,
        base_queries: counting_f.count() + counting_g.count(),
    })
}
