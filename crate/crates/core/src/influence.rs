//! Generalized influence, periodicity detection, influence-based failure
//! bounds, and Walsh spectra.
//!
//! The influence of `v` over `f : G -> S` is
//! `gamma_v(f) = Pr_x[f(x) != f(x + v)]`, an exact rational with denominator
//! `|G|`. A function is periodic exactly when some nonzero `v` has
//! `gamma_v = 0`, which is what makes a hidden shift ambiguous. For Boolean
//! `f` on `Z_2^n` the Walsh spectrum of `(-1)^f` decides bentness: all
//! coefficients of magnitude `2^{n/2}`, equivalently `gamma_v = 1/2` for
//! every nonzero `v` (perfect nonlinearity).

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::Zero;

use crate::group::{GroupElement, GroupSpec};
use crate::oracle::FunctionTable;
use crate::{Error, Result};

/// `gamma_v` for every `v`, stored as difference counts over `|G|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfluenceProfile {
    spec: GroupSpec,
    counts: Vec<u64>,
}

impl InfluenceProfile {
    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    /// Difference counts: `counts[v] = #{x : f(x) != f(x + v)}`.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn gamma(&self, v_index: usize) -> Ratio<u64> {
        Ratio::new(self.counts[v_index], self.spec.order() as u64)
    }

    /// Minimum influence over nonzero `v`.
    pub fn gamma_min(&self) -> Ratio<u64> {
        Ratio::new(self.min_count(), self.spec.order() as u64)
    }

    fn min_count(&self) -> u64 {
        *self.counts[1..].iter().min().expect("order >= 2")
    }

    /// Zero minimum influence is exactly periodicity.
    pub fn is_periodic(&self) -> bool {
        self.min_count() == 0
    }

    /// CSV rows `v_index,gamma_numerator,gamma_denominator` (unreduced,
    /// denominator `|G|`).
    pub fn write_csv<W: std::io::Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "v_index,gamma_numerator,gamma_denominator")?;
        let order = self.spec.order() as u64;
        for (v, &count) in self.counts.iter().enumerate() {
            writeln!(out, "{v},{count},{order}")?;
        }
        Ok(())
    }
}

/// Exact `gamma_v(f)` for one direction.
pub fn influence_of(f: &FunctionTable, v: &GroupElement) -> Result<Ratio<u64>> {
    let spec = *f.spec();
    let v_index = spec.index_of(v)?;
    Ok(Ratio::new(
        difference_count(f, v_index),
        spec.order() as u64,
    ))
}

/// Exact `gamma_v(f)` for all `|G|` directions; costs `O(|G|^2)` table reads.
pub fn influence_profile(f: &FunctionTable) -> InfluenceProfile {
    let spec = *f.spec();
    let counts = (0..spec.order())
        .map(|v| difference_count(f, v))
        .collect();
    InfluenceProfile { spec, counts }
}

fn difference_count(f: &FunctionTable, v_index: usize) -> u64 {
    let spec = f.spec();
    let values = f.values();
    (0..spec.order())
        .filter(|&x| values[x] != values[spec.combine_indices(x, v_index)])
        .count() as u64
}

/// The least-index nonzero `v` with `gamma_v = 0`, if any.
pub fn periodic_witness(f: &FunctionTable) -> Option<GroupElement> {
    let spec = f.spec();
    let values = f.values();
    for v in 1..spec.order() {
        if (0..spec.order()).all(|x| values[x] == values[spec.combine_indices(x, v)]) {
            return Some(spec.element_at(v).expect("index in range"));
        }
    }
    None
}

pub fn is_periodic(f: &FunctionTable) -> bool {
    periodic_witness(f).is_some()
}

/// The pair of upper bounds on `Pr[f_V not injective]` for a uniformly
/// random `V` in `G^m` (components drawn independently, repetition allowed).
#[derive(Debug, Clone, PartialEq)]
pub struct InfluenceBounds {
    /// `(N/2) * sum over nonzero v of (1 - gamma_v)^m`.
    pub sum_bound: BigRational,
    /// `N^2 * (1 - gamma_min)^m`; meaningful only when `gamma_min > 0`.
    pub min_influence_bound: BigRational,
}

/// Evaluates both influence-based failure bounds exactly.
///
/// The identity direction is excluded from the sum: its term would be
/// `(1 - 0)^m = 1` and does not correspond to a pair of distinct points.
pub fn failure_bounds(profile: &InfluenceProfile, m: u32) -> InfluenceBounds {
    let order = BigInt::from(profile.spec.order());
    let denominator = pow(&order, m);
    let mut sum = BigRational::zero();
    for &count in &profile.counts[1..] {
        let agree = BigInt::from(profile.spec.order() as u64 - count);
        sum += BigRational::new(pow(&agree, m), denominator.clone());
    }
    let half_order = BigRational::new(order.clone(), BigInt::from(2));
    let sum_bound = half_order * sum;

    let min_agree = BigInt::from(profile.spec.order() as u64 - profile.min_count());
    let min_influence_bound = BigRational::new(
        &order * &order * pow(&min_agree, m),
        denominator,
    );
    InfluenceBounds {
        sum_bound,
        min_influence_bound,
    }
}

/// Tuple length preset for bent instances: `ceil((2 + epsilon) * n) + 1`.
pub fn recommended_tuple_len_bent(n: u32, epsilon: f64) -> u32 {
    // the 1e-9 slack keeps float round-off from bumping exact integers up
    ((2.0 + epsilon) * n as f64 - 1e-9).ceil() as u32 + 1
}

fn pow(base: &BigInt, exp: u32) -> BigInt {
    num_traits::Pow::pow(base, exp)
}

/// The spectrum `F(w) = sum_x (-1)^{f(x)} (-1)^{<x,w>}` of a Boolean table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalshSpectrum {
    n: u32,
    coefficients: Vec<i64>,
}

impl WalshSpectrum {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.coefficients
    }
}

/// Fast Walsh–Hadamard transform of `(-1)^{f(x)}`, `O(n * 2^n)`.
pub fn walsh_spectrum(f: &FunctionTable) -> Result<WalshSpectrum> {
    if f.spec().q() != 2 || f.range_size() != 2 {
        return Err(Error::BinaryOnly);
    }
    let mut coefficients: Vec<i64> = f
        .values()
        .iter()
        .map(|&b| if b == 0 { 1 } else { -1 })
        .collect();
    wht_in_place(&mut coefficients);
    Ok(WalshSpectrum {
        n: f.spec().n(),
        coefficients,
    })
}

/// A Boolean table is bent iff every spectrum magnitude equals `2^{n/2}`.
/// Odd dimensions never admit bent functions, so they return `false`.
pub fn is_bent(f: &FunctionTable) -> Result<bool> {
    if f.spec().q() != 2 || f.range_size() != 2 {
        return Err(Error::BinaryOnly);
    }
    let n = f.spec().n();
    if n % 2 == 1 {
        return Ok(false);
    }
    let target = 1i64 << (n / 2);
    let spectrum = walsh_spectrum(f)?;
    Ok(spectrum.coefficients().iter().all(|&c| c.abs() == target))
}

/// Transforms the squared spectrum: entry `v` is
/// `sum_w (-1)^{<v,w>} F(w)^2`, which is `2^n` times the autocorrelation
/// of `(-1)^f` at `v`. Exact integers throughout.
pub fn wht_squares_transform(spectrum: &WalshSpectrum) -> Vec<i64> {
    let mut data: Vec<i64> = spectrum.coefficients.iter().map(|&c| c * c).collect();
    wht_in_place(&mut data);
    data
}

/// In-place Walsh–Hadamard butterfly; length must be a power of two.
pub(crate) fn wht_in_place(data: &mut [i64]) {
    debug_assert!(data.len().is_power_of_two());
    let mut h = 1;
    while h < data.len() {
        for start in (0..data.len()).step_by(2 * h) {
            for j in start..start + h {
                let (a, b) = (data[j], data[j + h]);
                data[j] = a + b;
                data[j + h] = a - b;
            }
        }
        h *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2(n: u32) -> GroupSpec {
        GroupSpec::new(2, n).unwrap()
    }

    fn ratio(n: u64, d: u64) -> Ratio<u64> {
        Ratio::new(n, d)
    }

    fn inner_product_z2_2() -> FunctionTable {
        FunctionTable::mm_bent(1, &[0, 1], &[false, false]).unwrap()
    }

    #[test]
    fn influence_examples() {
        let spec = z2(3);
        let f = FunctionTable::random(spec, 3, 7).unwrap();
        assert_eq!(influence_of(&f, &spec.identity()).unwrap(), ratio(0, 1));

        let constant = FunctionTable::constant(spec, 2, 1).unwrap();
        for v in spec.elements() {
            assert_eq!(influence_of(&constant, &v).unwrap(), ratio(0, 1));
        }

        let bent = inner_product_z2_2();
        for v in bent.spec().elements().skip(1) {
            assert_eq!(influence_of(&bent, &v).unwrap(), ratio(1, 2));
        }
    }

    #[test]
    fn profile_parity_and_dictator() {
        let spec = z2(3);
        let parity = FunctionTable::from_fn(spec, 2, |x| (x.count_ones() & 1) as u64).unwrap();
        let profile = influence_profile(&parity);
        for v in 0..spec.order() {
            let expected = if v.count_ones() % 2 == 1 { ratio(1, 1) } else { ratio(0, 1) };
            assert_eq!(profile.gamma(v), expected);
        }
        assert_eq!(profile.gamma_min(), ratio(0, 1));
        assert!(profile.is_periodic());

        let dictator = FunctionTable::from_fn(spec, 2, |x| (x & 1) as u64).unwrap();
        let profile = influence_profile(&dictator);
        for v in 0..spec.order() {
            let expected = if v & 1 == 1 { ratio(1, 1) } else { ratio(0, 1) };
            assert_eq!(profile.gamma(v), expected);
        }
    }

    #[test]
    fn profile_of_bent_function_is_flat() {
        let f = FunctionTable::mm_bent(2, &[0, 1, 2, 3], &[false; 4]).unwrap();
        let profile = influence_profile(&f);
        for v in 1..f.spec().order() {
            assert_eq!(profile.gamma(v), ratio(1, 2));
        }
        assert_eq!(profile.gamma_min(), ratio(1, 2));
    }

    #[test]
    fn gamma_symmetry_under_inversion() {
        let spec = GroupSpec::new(3, 2).unwrap();
        for seed in 0..20 {
            let f = FunctionTable::random(spec, 3, seed).unwrap();
            let profile = influence_profile(&f);
            for v in 0..spec.order() {
                assert_eq!(profile.gamma(v), profile.gamma(spec.invert_index(v)));
            }
        }
    }

    #[test]
    fn periodicity_examples() {
        let spec = z2(2);
        let constant = FunctionTable::constant(spec, 2, 0).unwrap();
        let witness = periodic_witness(&constant).unwrap();
        assert_eq!(spec.index_of(&witness).unwrap(), 1);

        let injective = FunctionTable::identity_table(spec).unwrap();
        assert!(periodic_witness(&injective).is_none());

        let parity = FunctionTable::from_fn(spec, 2, |x| (x.count_ones() & 1) as u64).unwrap();
        let witness = periodic_witness(&parity).unwrap();
        assert_eq!(witness.digits(), &[1, 1]);
    }

    #[test]
    fn periodicity_matches_gamma_min() {
        let spec = z2(3);
        for seed in 0..40 {
            let f = FunctionTable::random(spec, 2, seed).unwrap();
            let profile = influence_profile(&f);
            assert_eq!(is_periodic(&f), profile.is_periodic());
            assert_eq!(
                profile.gamma_min() > Ratio::new(0, 1),
                periodic_witness(&f).is_none()
            );
        }
    }

    #[test]
    fn failure_bounds_on_bent_profiles() {
        // flat profile: sum bound (N/2)(N-1)(1/2)^m, min bound N^2 2^-m
        let f = FunctionTable::mm_bent(2, &[0, 1, 2, 3], &[false; 4]).unwrap();
        let profile = influence_profile(&f);
        let n = BigInt::from(16);
        for m in [1u32, 6, 12] {
            let bounds = failure_bounds(&profile, m);
            let half = BigRational::new(BigInt::from(1), BigInt::from(1 << m));
            let expected_sum = BigRational::new(n.clone() * 15, BigInt::from(2)) * half.clone();
            assert_eq!(bounds.sum_bound, expected_sum);
            let expected_min = BigRational::from(n.clone() * n.clone()) * half;
            assert_eq!(bounds.min_influence_bound, expected_min);
        }

        // the two-variable inner product at m=6: sum bound 2*3*(1/64) = 3/32
        let f = inner_product_z2_2();
        let bounds = failure_bounds(&influence_profile(&f), 6);
        assert_eq!(
            bounds.sum_bound,
            BigRational::new(BigInt::from(3), BigInt::from(32))
        );
    }

    #[test]
    fn failure_bounds_monotone_in_m() {
        let spec = z2(3);
        let f = FunctionTable::random(spec, 2, 11).unwrap();
        let profile = influence_profile(&f);
        let mut previous: Option<InfluenceBounds> = None;
        for m in 1..20 {
            let bounds = failure_bounds(&profile, m);
            if let Some(prev) = previous {
                assert!(bounds.sum_bound <= prev.sum_bound);
                assert!(bounds.min_influence_bound <= prev.min_influence_bound);
            }
            previous = Some(bounds);
        }
    }

    #[test]
    fn walsh_examples() {
        let spec = z2(3);
        let zero = FunctionTable::constant(spec, 2, 0).unwrap();
        let spectrum = walsh_spectrum(&zero).unwrap();
        assert_eq!(spectrum.coefficients()[0], 8);
        assert!(spectrum.coefficients()[1..].iter().all(|&c| c == 0));

        // linear <a, x> concentrates the spectrum at a
        let a = 0b101usize;
        let linear =
            FunctionTable::from_fn(spec, 2, |x| ((x & a).count_ones() & 1) as u64).unwrap();
        let spectrum = walsh_spectrum(&linear).unwrap();
        for (w, &c) in spectrum.coefficients().iter().enumerate() {
            assert_eq!(c, if w == a { 8 } else { 0 });
        }

        let bent = inner_product_z2_2();
        let spectrum = walsh_spectrum(&bent).unwrap();
        assert!(spectrum.coefficients().iter().all(|&c| c.abs() == 2));
    }

    #[test]
    fn parseval_holds() {
        let spec = z2(5);
        for seed in 0..10 {
            let f = FunctionTable::random(spec, 2, seed).unwrap();
            let spectrum = walsh_spectrum(&f).unwrap();
            let total: i64 = spectrum.coefficients().iter().map(|&c| c * c).sum();
            assert_eq!(total, 1 << (2 * spec.n()));
        }
    }

    #[test]
    fn bentness_examples() {
        assert!(is_bent(&inner_product_z2_2()).unwrap());

        let spec = z2(2);
        let linear = FunctionTable::from_fn(spec, 2, |x| (x & 1) as u64).unwrap();
        assert!(!is_bent(&linear).unwrap());

        // odd dimension: never bent
        for code in 0..256u64 {
            let f = FunctionTable::from_fn(z2(3), 2, |x| (code >> x) & 1).unwrap();
            assert!(!is_bent(&f).unwrap());
        }

        let ternary = FunctionTable::constant(GroupSpec::new(3, 2).unwrap(), 2, 0).unwrap();
        assert!(matches!(is_bent(&ternary), Err(Error::BinaryOnly)));
    }

    #[test]
    fn mm_constructions_are_bent_exhaustively() {
        // every permutation and aux choice at k = 1 and k = 2
        let perms1 = [[0usize, 1], [1, 0]];
        for pi in perms1 {
            for aux_bits in 0..4u32 {
                let aux = [(aux_bits & 1) != 0, (aux_bits & 2) != 0];
                let f = FunctionTable::mm_bent(1, &pi, &aux).unwrap();
                assert!(is_bent(&f).unwrap());
            }
        }
        let mut perm = [0usize, 1, 2, 3];
        let mut all_perms = Vec::new();
        permutations(&mut perm, 0, &mut all_perms);
        assert_eq!(all_perms.len(), 24);
        for pi in all_perms {
            for aux_bits in 0..16u32 {
                let aux: Vec<bool> = (0..4).map(|i| (aux_bits >> i) & 1 != 0).collect();
                let f = FunctionTable::mm_bent(2, &pi, &aux).unwrap();
                assert!(is_bent(&f).unwrap());
            }
        }
    }

    fn permutations(items: &mut [usize; 4], start: usize, out: &mut Vec<[usize; 4]>) {
        if start == items.len() {
            out.push(*items);
            return;
        }
        for i in start..items.len() {
            items.swap(start, i);
            permutations(items, start + 1, out);
            items.swap(start, i);
        }
    }

    #[test]
    fn recommended_bent_tuple_len() {
        assert_eq!(recommended_tuple_len_bent(4, 0.5), 11);
        assert_eq!(recommended_tuple_len_bent(6, 0.0), 13);
    }

    #[test]
    fn profile_csv_export() {
        let f = inner_product_z2_2();
        let profile = influence_profile(&f);
        let mut out = Vec::new();
        profile.write_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "v_index,gamma_numerator,gamma_denominator");
        assert_eq!(lines[1], "0,0,4");
        assert_eq!(lines[2], "1,2,4");
        assert_eq!(lines.len(), 5);
    }
}
