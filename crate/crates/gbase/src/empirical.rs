//! Brute-force ground truth: empirical CDFs, empirical characteristic
//! functions, Kolmogorov-Smirnov distances, and the prefix-mean weight
//! decomposition.
//!
//! Everything here enumerates `f(n)` for `n < N` directly, independent of
//! the transform recurrences, so the two routes cross-check each other:
//! `empirical_charfn(N = G_k)` must equal `H_k(t)/G_k`.
//!
//! Enumeration walks the greedy digit words with an odometer (amortized
//! cheap digit updates plus a level scan) instead of re-expanding every
//! integer; the odometer is cross-checked against the greedy codec.

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::base::LinearRecurrenceBase;
use crate::digits::greedy_expand;
use crate::gfun::GAdditiveFunction;
use crate::{Error, Result};

/// Above this range the distribution stores strided order statistics
/// (rank accuracy 1e-3) instead of every value.
pub const EXACT_LIMIT: u64 = 10_000_000;

/// Chunk length used both for deterministic parallel splitting and for the
/// sketch mode. Fixed so that results do not depend on the thread count.
const CHUNK: u64 = 1 << 20;

/// Per-chunk sampling stride of the sketch: keeps rank error below
/// `CHUNK * SKETCH_EPS` per chunk, hence below `SKETCH_EPS * N` overall.
const SKETCH_EPS: f64 = 5e-4;

/// Steps between full recomputations of the running `f` value, bounding
/// incremental float drift.
const RESYNC: u64 = 4096;

/// Walks greedy digit words in increasing value order over a u64 range,
/// maintaining the digit word and the running weight sum.
pub struct DigitOdometer {
    g: Vec<u64>,
    /// `weights[k][j] = f(j G_k)`.
    weights: Vec<Vec<f64>>,
    digits: Vec<u32>,
    /// Current word length (top nonzero level + 1).
    len: usize,
    value: u64,
    f_value: f64,
    steps_since_sync: u64,
}

impl DigitOdometer {
    /// Positions the odometer at `start`, able to run up to values below
    /// `end` (exclusive).
    pub fn new(
        base: &LinearRecurrenceBase,
        f: &GAdditiveFunction,
        start: u64,
        end: u64,
    ) -> Result<Self> {
        let end_big = BigUint::from(end.max(1) - 1);
        let levels = if end <= 1 {
            1
        } else {
            base.required_level(&end_big).max(1)
        };
        if levels > base.max_level() {
            return Err(Error::Capacity {
                required_level: levels,
                have_level: base.max_level(),
            });
        }
        let g: Vec<u64> = (0..=levels).map(|k| base.g_u64(k)).collect::<Result<_>>()?;
        let weights: Vec<Vec<f64>> = (0..=levels)
            .map(|k| (0..=base.frak_a()).map(|j| f.weight(j, k)).collect())
            .collect();
        let word = greedy_expand(base, &BigUint::from(start))?;
        let mut digits = vec![0u32; levels + 1];
        for (k, &e) in word.digits().iter().enumerate() {
            digits[k] = e;
        }
        let mut odo = DigitOdometer {
            g,
            weights,
            digits,
            len: word.digits().len(),
            value: start,
            f_value: 0.0,
            steps_since_sync: 0,
        };
        odo.f_value = odo.recompute_f();
        Ok(odo)
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn f_value(&self) -> f64 {
        self.f_value
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits[..self.len]
    }

    fn recompute_f(&self) -> f64 {
        self.digits[..self.len]
            .iter()
            .enumerate()
            .map(|(k, &e)| self.weights[k][e as usize])
            .sum()
    }

    /// Advances to the next integer. The carry target is the highest level
    /// `K` whose prefix sum satisfies `s_K + 1 = G_K`; everything below it
    /// resets to zero.
    pub fn step(&mut self) {
        let mut carry_to = 0usize;
        let mut prefix = 0u64;
        for k in 1..=self.len + 1 {
            if k >= self.g.len() {
                // A carry past the table would need value+1 >= G_top,
                // which the range bound rules out.
                break;
            }
            prefix += self.digits[k - 1] as u64 * self.g[k - 1];
            if prefix + 1 == self.g[k] {
                carry_to = k;
            }
        }
        if carry_to == 0 {
            let e = self.digits[0] as usize;
            self.digits[0] += 1;
            self.f_value += self.weights[0][e + 1] - self.weights[0][e];
        } else {
            for k in 0..carry_to {
                self.f_value -= self.weights[k][self.digits[k] as usize];
                self.digits[k] = 0;
            }
            let e = self.digits[carry_to] as usize;
            self.digits[carry_to] += 1;
            self.f_value += self.weights[carry_to][e + 1] - self.weights[carry_to][e];
            self.len = self.len.max(carry_to + 1);
        }
        self.value += 1;
        self.steps_since_sync += 1;
        if self.steps_since_sync >= RESYNC {
            self.f_value = self.recompute_f();
            self.steps_since_sync = 0;
        }
    }
}

fn check_range(base: &LinearRecurrenceBase, n_range: u64) -> Result<()> {
    if n_range == 0 {
        return Err(Error::IndexRange("empty enumeration range".into()));
    }
    let top = base.g(base.max_level())?;
    if &BigUint::from(n_range) > top {
        return Err(Error::Capacity {
            required_level: base.required_level(&BigUint::from(n_range - 1)),
            have_level: base.max_level(),
        });
    }
    Ok(())
}

/// Applies `op` to every `f(n)` for `n` in `[lo, hi)` and folds the chunk
/// result with `fold`. Chunks are fixed-size and folded in range order, so
/// the outcome is independent of the thread count.
fn map_ranges<T, R>(
    base: &LinearRecurrenceBase,
    f: &GAdditiveFunction,
    n_range: u64,
    chunk_op: T,
) -> Result<Vec<R>>
where
    T: Fn(&mut DigitOdometer, u64, u64) -> R + Sync,
    R: Send,
{
    let bounds: Vec<(u64, u64)> = (0..n_range.div_ceil(CHUNK))
        .map(|i| (i * CHUNK, ((i + 1) * CHUNK).min(n_range)))
        .collect();
    bounds
        .into_par_iter()
        .map(|(lo, hi)| {
            let mut odo = DigitOdometer::new(base, f, lo, n_range)?;
            Ok(chunk_op(&mut odo, lo, hi))
        })
        .collect()
}

/// Empirical distribution of `f(n)` for `n < N`: every value when the
/// range is small enough, strided order statistics beyond [`EXACT_LIMIT`].
#[derive(Debug, Clone)]
pub struct EmpiricalDistribution {
    pub n_range: u64,
    /// Sorted samples; each stands for `weight_per_sample` integers.
    pub values: Vec<f64>,
    pub weight_per_sample: f64,
    fingerprint: String,
}

fn fingerprint(base: &LinearRecurrenceBase, f: &GAdditiveFunction) -> String {
    format!("{};{}", base.coeffs(), f.spec_string())
}

/// Collects the distribution of `f` over `[0, N)`.
pub fn empirical_distribution(
    base: &LinearRecurrenceBase,
    f: &GAdditiveFunction,
    n_range: u64,
) -> Result<EmpiricalDistribution> {
    check_range(base, n_range)?;
    let exact = n_range <= EXACT_LIMIT;
    let stride = if exact {
        1
    } else {
        ((CHUNK as f64 * SKETCH_EPS) as u64).max(1)
    };
    let chunks = map_ranges(base, f, n_range, |odo, lo, hi| {
        let mut vals = Vec::with_capacity((hi - lo) as usize);
        for _ in lo..hi {
            vals.push(odo.f_value());
            odo.step();
        }
        if stride > 1 {
            vals.sort_by(f64::total_cmp);
            vals = vals
                .iter()
                .copied()
                .skip(stride as usize / 2)
                .step_by(stride as usize)
                .collect();
        }
        vals
    })?;
    let mut values: Vec<f64> = chunks.into_iter().flatten().collect();
    values.sort_by(f64::total_cmp);
    Ok(EmpiricalDistribution {
        n_range,
        weight_per_sample: if exact {
            1.0
        } else {
            n_range as f64 / values.len() as f64
        },
        values,
        fingerprint: fingerprint(base, f),
    })
}

impl EmpiricalDistribution {
    /// Right-continuous step CDF at `z`.
    pub fn cdf(&self, z: f64) -> f64 {
        let count = self.values.partition_point(|&v| v <= z);
        (count as f64 * self.weight_per_sample / self.n_range as f64).min(1.0)
    }
}

/// `F_N(z) = #{n < N : f(n) <= z} / N` at each grid point.
pub fn empirical_cdf(
    base: &LinearRecurrenceBase,
    f: &GAdditiveFunction,
    n_range: u64,
    z_grid: &[f64],
) -> Result<Vec<(f64, f64)>> {
    let dist = empirical_distribution(base, f, n_range)?;
    Ok(z_grid.iter().map(|&z| (z, dist.cdf(z))).collect())
}

/// `(1/N) sum_{n<N} e^{i t f(n)}`.
pub fn empirical_charfn(
    base: &LinearRecurrenceBase,
    f: &GAdditiveFunction,
    n_range: u64,
    t: f64,
) -> Result<Complex64> {
    Ok(empirical_charfn_many(base, f, n_range, &[t])?[0])
}

/// One enumeration pass accumulating the empirical characteristic function
/// at several frequencies.
pub fn empirical_charfn_many(
    base: &LinearRecurrenceBase,
    f: &GAdditiveFunction,
    n_range: u64,
    ts: &[f64],
) -> Result<Vec<Complex64>> {
    check_range(base, n_range)?;
    let chunks = map_ranges(base, f, n_range, |odo, lo, hi| {
        let mut acc = vec![Complex64::new(0.0, 0.0); ts.len()];
        for _ in lo..hi {
            let fv = odo.f_value();
            for (a, &t) in acc.iter_mut().zip(ts) {
                *a += Complex64::from_polar(1.0, t * fv);
            }
            odo.step();
        }
        acc
    })?;
    let mut total = vec![Complex64::new(0.0, 0.0); ts.len()];
    for chunk in chunks {
        for (tot, v) in total.iter_mut().zip(chunk) {
            *tot += v;
        }
    }
    let n = n_range as f64;
    Ok(total.into_iter().map(|z| z / n).collect())
}

/// Two-sample Kolmogorov-Smirnov distance, the sup over the union of jump
/// points. Both distributions must describe the same base and function.
pub fn ks_distance(d1: &EmpiricalDistribution, d2: &EmpiricalDistribution) -> Result<f64> {
    if d1.fingerprint != d2.fingerprint {
        return Err(Error::Mismatch(format!(
            "{} vs {}",
            d1.fingerprint, d2.fingerprint
        )));
    }
    let (v1, v2) = (&d1.values, &d2.values);
    let (n1, n2) = (d1.n_range as f64, d2.n_range as f64);
    let (w1, w2) = (d1.weight_per_sample, d2.weight_per_sample);
    let (mut i, mut j) = (0usize, 0usize);
    let mut sup = 0.0f64;
    while i < v1.len() || j < v2.len() {
        let x = match (v1.get(i), v2.get(j)) {
            (Some(&a), Some(&b)) => a.min(b),
            (Some(&a), None) => a,
            (None, Some(&b)) => b,
            (None, None) => break,
        };
        while i < v1.len() && v1[i] <= x {
            i += 1;
        }
        while j < v2.len() && v2[j] <= x {
            j += 1;
        }
        let diff = (i as f64 * w1 / n1 - j as f64 * w2 / n2).abs();
        sup = sup.max(diff);
    }
    Ok(sup.min(1.0))
}

/// Splits `S(N) = sum_{n<N} e^{i t f(n)}` along the greedy expansion of
/// `N` and reassembles it from the block prefix sums `S(G_q)`:
///
/// ```text
/// S(N) = sum_{q<=Q} ( sum_{j<e_q(N)} prod_{q<r<=Q} g(e_r G_r) g(j G_q) ) S(G_q)
/// ```
///
/// Returns the relative deviation between the direct sum and the
/// reassembled one (absolute when the direct sum is tiny).
pub fn chang_decomposition_residual(
    base: &LinearRecurrenceBase,
    f: &GAdditiveFunction,
    t: f64,
    n_range: u64,
) -> Result<f64> {
    let scan = chang_scan(base, f, t, n_range, &[])?;
    chang_residual_from_scan(base, f, t, n_range, &scan)
}

/// Prefix sums captured in one enumeration pass: `S(G_q)` for every stored
/// level with `G_q <= N`, the direct total `S(N)`, and `S` at any extra
/// requested cut points (which must be sorted).
pub struct ChangScan {
    /// `(q, S(G_q))` pairs.
    pub block_sums: Vec<(usize, Complex64)>,
    /// `S(N)` for the full range.
    pub total: Complex64,
    /// `S` at the requested cut points, in input order.
    pub at_cuts: Vec<Complex64>,
}

pub fn chang_scan(
    base: &LinearRecurrenceBase,
    f: &GAdditiveFunction,
    t: f64,
    n_range: u64,
    cuts: &[u64],
) -> Result<ChangScan> {
    check_range(base, n_range)?;
    debug_assert!(cuts.windows(2).all(|w| w[0] <= w[1]));
    let mut odo = DigitOdometer::new(base, f, 0, n_range)?;
    let mut block_sums = Vec::new();
    let mut at_cuts = vec![Complex64::new(0.0, 0.0); cuts.len()];
    let mut next_block = 0usize;
    let mut next_cut = 0usize;
    let mut running = Complex64::new(0.0, 0.0);
    for n in 0..n_range {
        while next_block <= base.max_level()
            && base.g_u64(next_block).map(|g| g == n).unwrap_or(false)
        {
            block_sums.push((next_block, running));
            next_block += 1;
        }
        while next_cut < cuts.len() && cuts[next_cut] == n {
            at_cuts[next_cut] = running;
            next_cut += 1;
        }
        running += Complex64::from_polar(1.0, t * odo.f_value());
        odo.step();
    }
    while next_block <= base.max_level() && base.g_u64(next_block)? == n_range {
        block_sums.push((next_block, running));
        next_block += 1;
    }
    while next_cut < cuts.len() && cuts[next_cut] == n_range {
        at_cuts[next_cut] = running;
        next_cut += 1;
    }
    Ok(ChangScan {
        block_sums,
        total: running,
        at_cuts,
    })
}

/// Reassembles `S(N)` from the block prefix sums.
pub fn chang_reassemble(
    base: &LinearRecurrenceBase,
    f: &GAdditiveFunction,
    t: f64,
    n_range: u64,
    block_sums: &[(usize, Complex64)],
) -> Result<Complex64> {
    let word = greedy_expand(base, &BigUint::from(n_range))?;
    let digits = word.digits();
    let s_of = |q: usize| -> Complex64 {
        block_sums
            .iter()
            .find(|&&(level, _)| level == q)
            .map(|&(_, s)| s)
            .unwrap_or_default()
    };

    // suffix_phase(q) = sum_{r>q} f(e_r G_r), so that
    // prod_{q<r<=Q} g(e_r G_r) = e^{i t suffix_phase(q)}.
    let mut reconstructed = Complex64::new(0.0, 0.0);
    let mut suffix = 0.0f64;
    for q in (0..digits.len()).rev() {
        let e_q = digits[q];
        if e_q > 0 {
            let mut outer = Complex64::new(0.0, 0.0);
            for j in 0..e_q {
                outer += Complex64::from_polar(1.0, t * (suffix + f.weight(j, q)));
            }
            reconstructed += outer * s_of(q);
            suffix += f.weight(e_q, q);
        }
    }
    Ok(reconstructed)
}

/// Relative deviation between a direct block sum and its reassembly
/// (absolute when the direct value is tiny).
pub fn chang_deviation(direct: Complex64, reassembled: Complex64) -> f64 {
    let diff = (direct - reassembled).norm();
    if direct.norm() > 1e-12 {
        diff / direct.norm()
    } else {
        diff
    }
}

/// Reassembles `S(N)` from a scan's block sums and compares with the
/// direct total.
pub fn chang_residual_from_scan(
    base: &LinearRecurrenceBase,
    f: &GAdditiveFunction,
    t: f64,
    n_range: u64,
    scan: &ChangScan,
) -> Result<f64> {
    let reassembled = chang_reassemble(base, f, t, n_range, &scan.block_sums)?;
    Ok(chang_deviation(scan.total, reassembled))
}

/// `G_q` levels that fit in the enumeration range, largest first omitted.
pub fn levels_below(base: &LinearRecurrenceBase, bound: u64) -> Vec<usize> {
    (0..=base.max_level())
        .take_while(|&k| {
            base.g(k)
                .ok()
                .and_then(|g| g.to_u64())
                .map(|g| g <= bound)
                .unwrap_or(false)
        })
        .collect()
}
