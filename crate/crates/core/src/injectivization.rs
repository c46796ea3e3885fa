//! The injectivization construction `f_V(x) = (f(x+v_1), ..., f(x+v_m))`,
//! tuple sampling, injectivity checking, exact failure bounds, and
//! brute-force reference solvers.
//!
//! Tuples of range values are packed as little-endian base-`|S|` integers so
//! injectivity checking is a sort over machine words. When `|S|^m` does not
//! fit 64 bits, [`fv_collision`] falls back to fixed-width big-endian byte
//! strings compared lexicographically.

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::Pow;
use rand::seq::index;

use crate::group::{GroupElement, GroupSpec};
use crate::oracle::{FunctionTable, Oracle, TableMeta};
use crate::{seed, Error, Result};

/// Enumeration guard for [`exact_failure_rate_over_f`].
pub const EXACT_OVER_F_GUARD: u128 = 1 << 20;
/// Enumeration guard for [`exact_failure_rate_over_v`].
pub const EXACT_OVER_V_GUARD: u128 = 1 << 24;

/// The tuple `V` of group elements driving injectivization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TupleV {
    spec: GroupSpec,
    components: Vec<GroupElement>,
    indices: Vec<usize>,
    distinct: bool,
}

impl TupleV {
    /// A tuple from explicit components; records `distinct = false`.
    pub fn new(spec: GroupSpec, components: Vec<GroupElement>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::EmptyTuple);
        }
        let indices = components
            .iter()
            .map(|c| spec.index_of(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            spec,
            components,
            indices,
            distinct: false,
        })
    }

    /// A tuple from explicit components, validating pairwise distinctness.
    pub fn new_distinct(spec: GroupSpec, components: Vec<GroupElement>) -> Result<Self> {
        let mut tuple = Self::new(spec, components)?;
        let mut sorted = tuple.indices.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::NotDistinct);
        }
        tuple.distinct = true;
        Ok(tuple)
    }

    pub fn from_indices(spec: GroupSpec, indices: Vec<usize>) -> Result<Self> {
        let components = indices
            .iter()
            .map(|&i| spec.element_at(i))
            .collect::<Result<Vec<_>>>()?;
        Self::new(spec, components)
    }

    /// Uniform sample without replacement; `distinct = true`.
    pub fn sample_distinct(spec: &GroupSpec, m: usize, seed_value: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::EmptyTuple);
        }
        if m > spec.order() {
            return Err(Error::TupleTooLong {
                m,
                order: spec.order(),
            });
        }
        let mut rng = seed::rng(seed_value);
        let indices = index::sample(&mut rng, spec.order(), m).into_vec();
        let components = indices
            .iter()
            .map(|&i| spec.element_at(i))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            spec: *spec,
            components,
            indices,
            distinct: true,
        })
    }

    /// Components drawn i.i.d. uniform, repetition allowed; `distinct = false`.
    pub fn sample_uniform(spec: &GroupSpec, m: usize, seed_value: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::EmptyTuple);
        }
        let mut rng = seed::rng(seed_value);
        let indices: Vec<usize> = (0..m)
            .map(|_| rand::Rng::gen_range(&mut rng, 0..spec.order()))
            .collect();
        let components = indices
            .iter()
            .map(|&i| spec.element_at(i))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            spec: *spec,
            components,
            indices,
            distinct: false,
        })
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn m(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[GroupElement] {
        &self.components
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn distinct(&self) -> bool {
        self.distinct
    }

    /// A copy extended by extra components (loses the distinct flag unless
    /// re-validated).
    pub fn extended(&self, extra: Vec<GroupElement>) -> Result<Self> {
        let mut components = self.components.clone();
        components.extend(extra);
        Self::new(self.spec, components)
    }
}

/// `f_V` stored densely with values packed in base `|S|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InjectivizedTable {
    table: FunctionTable,
    m: u32,
    base_range: u64,
}

impl InjectivizedTable {
    /// Reattaches the tuple parameters carried in a serialized table's
    /// `meta.m` / `meta.base_range` extension.
    pub fn from_table(table: FunctionTable) -> Result<Self> {
        let meta = table
            .meta()
            .ok_or_else(|| Error::Format("missing meta on injectivized table".into()))?;
        let (m, base_range) = match (meta.m, meta.base_range) {
            (Some(m), Some(base)) => (m, base),
            _ => {
                return Err(Error::Format(
                    "injectivized table needs meta.m and meta.base_range".into(),
                ))
            }
        };
        let expected = base_range
            .checked_pow(m)
            .ok_or(Error::EncodingOverflow {
                range_size: base_range,
                m,
            })?;
        if expected != table.range_size() || m == 0 {
            return Err(Error::Format(format!(
                "range {} is not {base_range}^{m}",
                table.range_size()
            )));
        }
        Ok(Self {
            table,
            m,
            base_range,
        })
    }

    pub fn table(&self) -> &FunctionTable {
        &self.table
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn base_range(&self) -> u64 {
        self.base_range
    }

    /// Unpacks the encoded value at an index into its `m` components.
    pub fn decode(&self, index: usize) -> Vec<u64> {
        let mut rest = self.table.query_index(index);
        (0..self.m)
            .map(|_| {
                let digit = rest % self.base_range;
                rest /= self.base_range;
                digit
            })
            .collect()
    }

    pub fn is_injective(&self) -> bool {
        self.table.is_injective()
    }

    pub fn first_collision(&self) -> Option<(usize, usize)> {
        self.table.first_collision()
    }

    pub fn collision_witness(&self) -> Option<(GroupElement, GroupElement)> {
        self.table.collision_witness()
    }
}

/// Builds `f_V` in one pass, issuing exactly `m * |G|` oracle queries.
pub fn build_fv<O: Oracle>(oracle: &O, tuple: &TupleV) -> Result<InjectivizedTable> {
    if oracle.spec() != tuple.spec() {
        return Err(Error::SpecMismatch);
    }
    let base = oracle.range_size();
    let m = tuple.m() as u32;
    let encoded_range = base
        .checked_pow(m)
        .ok_or(Error::EncodingOverflow { range_size: base, m })?;
    let spec = *oracle.spec();
    let mut values = vec![0u64; spec.order()];
    for (x, slot) in values.iter_mut().enumerate() {
        let mut acc = 0u64;
        let mut weight = 1u64;
        for (k, &v_index) in tuple.indices().iter().enumerate() {
            acc += oracle.query_index(spec.combine_indices(x, v_index)) * weight;
            if k + 1 < tuple.m() {
                weight *= base;
            }
        }
        *slot = acc;
    }
    let table = FunctionTable::from_values(spec, encoded_range, values)?.with_meta(TableMeta {
        generator: Some("injectivized".into()),
        m: Some(m),
        base_range: Some(base),
        ..TableMeta::default()
    });
    Ok(InjectivizedTable {
        table,
        m,
        base_range: base,
    })
}

/// Evaluates the decoded tuple `f_V(x)` at one point with exactly `m`
/// oracle queries.
pub fn eval_fv_at<O: Oracle>(oracle: &O, tuple: &TupleV, x_index: usize) -> Result<Vec<u64>> {
    if oracle.spec() != tuple.spec() {
        return Err(Error::SpecMismatch);
    }
    let spec = oracle.spec();
    if x_index >= spec.order() {
        return Err(Error::IndexOutOfRange {
            index: x_index,
            order: spec.order(),
        });
    }
    Ok(tuple
        .indices()
        .iter()
        .map(|&v| oracle.query_index(spec.combine_indices(x_index, v)))
        .collect())
}

/// Injectivity of `f_V` with the least collision witness, without requiring
/// `|S|^m` to fit the dense encoding. Falls back to fixed-width big-endian
/// byte strings in lexicographic order when it does not.
pub fn fv_collision<O: Oracle>(oracle: &O, tuple: &TupleV) -> Result<Option<(usize, usize)>> {
    if oracle.spec() != tuple.spec() {
        return Err(Error::SpecMismatch);
    }
    let base = oracle.range_size();
    if base.checked_pow(tuple.m() as u32).is_some() {
        return Ok(build_fv(oracle, tuple)?.first_collision());
    }

    let spec = *oracle.spec();
    let width = (64 - (base - 1).leading_zeros() as usize).div_ceil(8);
    let stride = tuple.m() * width;
    let mut data = vec![0u8; spec.order() * stride];
    for x in 0..spec.order() {
        for (k, &v_index) in tuple.indices().iter().enumerate() {
            let value = oracle.query_index(spec.combine_indices(x, v_index));
            let at = x * stride + k * width;
            data[at..at + width].copy_from_slice(&value.to_be_bytes()[8 - width..]);
        }
    }
    let row = |i: usize| &data[i * stride..(i + 1) * stride];
    let mut order_ix: Vec<usize> = (0..spec.order()).collect();
    order_ix.sort_unstable_by(|&a, &b| row(a).cmp(row(b)).then(a.cmp(&b)));
    let mut best: Option<(usize, usize)> = None;
    let mut run = 0;
    for k in 1..order_ix.len() {
        if row(order_ix[k]) != row(order_ix[run]) {
            run = k;
            continue;
        }
        if k == run + 1 {
            let pair = (order_ix[run], order_ix[k]);
            if best.is_none_or(|b| pair < b) {
                best = Some(pair);
            }
        }
    }
    Ok(best)
}

/// The exact upper bound `|G|^2 / |S|^ceil(m/2)` on the probability that
/// `f_V` is not injective, over a uniformly random `f` at any fixed `V`
/// with distinct components. Values above 1 are returned as-is (vacuous).
pub fn failure_bound(order: u64, range_size: u64, m: u32) -> BigRational {
    let numerator = BigInt::from(order) * BigInt::from(order);
    let denominator = Pow::pow(&BigInt::from(range_size), m.div_ceil(2));
    BigRational::new(numerator, denominator)
}

/// Tuple length preset for average-case instances:
/// `ceil((4 + epsilon) * log_|S| |G|)`.
pub fn recommended_tuple_len(order: u64, range_size: u64, epsilon: f64) -> u32 {
    let log = log_base(range_size, order);
    (((4.0 + epsilon) * log) - 1e-9).ceil().max(1.0) as u32
}

// exact when x is an integer power of the base, so presets at powers of two
// never pick up float round-off
fn log_base(base: u64, x: u64) -> f64 {
    let mut acc: u128 = 1;
    let mut k = 0u32;
    while acc < x as u128 {
        acc *= base as u128;
        k += 1;
    }
    if acc == x as u128 {
        k as f64
    } else {
        (x as f64).ln() / (base as f64).ln()
    }
}

/// Every `s` with `f(x) = g(s + x)` for all `x`, by exhaustive search.
/// The exact reference solver behind all pipeline verdicts.
pub fn brute_force_shifts(f: &FunctionTable, g: &FunctionTable) -> Result<Vec<GroupElement>> {
    if f.spec() != g.spec() || f.range_size() != g.range_size() {
        return Err(Error::SpecMismatch);
    }
    let spec = *f.spec();
    let mut shifts = Vec::new();
    for s in 0..spec.order() {
        if (0..spec.order()).all(|x| f.values()[x] == g.values()[spec.combine_indices(s, x)]) {
            shifts.push(spec.element_at(s)?);
        }
    }
    Ok(shifts)
}

/// The exact fraction of all functions `f : G -> [0, range_size)` whose
/// `f_V` is not injective at the fixed tuple. Enumerates `|S|^|G|`
/// functions; guarded by [`EXACT_OVER_F_GUARD`].
pub fn exact_failure_rate_over_f(range_size: u64, tuple: &TupleV) -> Result<Ratio<u64>> {
    if range_size < 2 {
        return Err(Error::RangeTooSmall(range_size));
    }
    let spec = *tuple.spec();
    let order = spec.order();
    let total = (range_size as u128)
        .checked_pow(order as u32)
        .unwrap_or(u128::MAX);
    if total > EXACT_OVER_F_GUARD {
        return Err(Error::Infeasible {
            size: total,
            guard: EXACT_OVER_F_GUARD,
        });
    }
    let m = tuple.m() as u32;
    range_size.checked_pow(m).ok_or(Error::EncodingOverflow {
        range_size,
        m,
    })?;

    let mut f_values = vec![0u64; order];
    let mut fv = vec![0u64; order];
    let mut failures = 0u64;
    for _ in 0..total {
        encode_fv_into(&spec, &f_values, range_size, tuple, &mut fv);
        if has_collision(&fv) {
            failures += 1;
        }
        advance_odometer(&mut f_values, range_size);
    }
    Ok(Ratio::new(failures, total as u64))
}

/// The exact fraction of all tuples `V` in `G^m` (repetition allowed) whose
/// `f_V` is not injective at the fixed function. Enumerates `|G|^m` tuples;
/// guarded by [`EXACT_OVER_V_GUARD`].
pub fn exact_failure_rate_over_v(f: &FunctionTable, m: u32) -> Result<Ratio<u64>> {
    if m == 0 {
        return Err(Error::EmptyTuple);
    }
    let spec = *f.spec();
    let order = spec.order();
    let total = (order as u128).checked_pow(m).unwrap_or(u128::MAX);
    if total > EXACT_OVER_V_GUARD {
        return Err(Error::Infeasible {
            size: total,
            guard: EXACT_OVER_V_GUARD,
        });
    }
    f.range_size().checked_pow(m).ok_or(Error::EncodingOverflow {
        range_size: f.range_size(),
        m,
    })?;

    let mut v_indices = vec![0usize; m as usize];
    let mut fv = vec![0u64; order];
    let mut failures = 0u64;
    for _ in 0..total {
        for (x, slot) in fv.iter_mut().enumerate() {
            let mut acc = 0u64;
            let mut weight = 1u64;
            for (k, &v) in v_indices.iter().enumerate() {
                acc += f.values()[spec.combine_indices(x, v)] * weight;
                if k + 1 < v_indices.len() {
                    weight *= f.range_size();
                }
            }
            *slot = acc;
        }
        if has_collision(&fv) {
            failures += 1;
        }
        // odometer over G^m
        for digit in v_indices.iter_mut() {
            *digit += 1;
            if *digit == order {
                *digit = 0;
            } else {
                break;
            }
        }
    }
    Ok(Ratio::new(failures, total as u64))
}

fn encode_fv_into(
    spec: &GroupSpec,
    f_values: &[u64],
    range_size: u64,
    tuple: &TupleV,
    fv: &mut [u64],
) {
    for (x, slot) in fv.iter_mut().enumerate() {
        let mut acc = 0u64;
        let mut weight = 1u64;
        for (k, &v) in tuple.indices().iter().enumerate() {
            acc += f_values[spec.combine_indices(x, v)] * weight;
            if k + 1 < tuple.m() {
                weight *= range_size;
            }
        }
        *slot = acc;
    }
}

fn advance_odometer(digits: &mut [u64], base: u64) {
    for d in digits.iter_mut() {
        *d += 1;
        if *d == base {
            *d = 0;
        } else {
            break;
        }
    }
}

// quadratic scan; used on the tiny tables of the exact enumerations
fn has_collision(values: &[u64]) -> bool {
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            if values[i] == values[j] {
                return true;
            }
        }
    }
    false
}
