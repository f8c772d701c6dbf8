//! Named invariant suites behind `gbase verify --suite <name>`.
//!
//! Each check exercises a cross-module consistency property on the fixed
//! test bases (1,1), (1,1,1), (2,1) with the damped weight families. The
//! suites are deterministic (fixed seeds) and sized to run in seconds.

use num_bigint::BigUint;
use num_complex::Complex64;

use crate::base::{pisot_check, LinearRecurrenceBase, Pisot, RecurrenceCoefficients};
use crate::digits::{
    block_decompose, decode, greedy_expand, is_admissible, prefix_condition_holds, DigitExpansion,
};
use crate::empirical;
use crate::gfun::GAdditiveFunction;
use crate::series;
use crate::transform;
use crate::{Error, Result};

/// One verification outcome.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            pass,
            detail: detail.into(),
        }
    }
}

pub const SUITES: &[&str] = &["base", "digits", "transform", "series", "empirical", "all"];

/// Runs a named suite and returns its checks.
pub fn run_suite(name: &str) -> Result<Vec<Check>> {
    match name {
        "base" => suite_base(),
        "digits" => suite_digits(),
        "transform" => suite_transform(),
        "series" => suite_series(),
        "empirical" => suite_empirical(),
        "all" => {
            let mut all = Vec::new();
            for s in ["base", "digits", "transform", "series", "empirical"] {
                all.extend(run_suite(s)?);
            }
            Ok(all)
        }
        other => Err(Error::Parse(format!(
            "unknown suite {other:?}; expected one of {SUITES:?}"
        ))),
    }
}

fn test_bases(max_level: usize) -> Result<Vec<LinearRecurrenceBase>> {
    [&[1u32, 1][..], &[1, 1, 1], &[2, 1]]
        .iter()
        .map(|a| LinearRecurrenceBase::build(RecurrenceCoefficients::new(a.to_vec()), max_level))
        .collect()
}

fn geom_half() -> GAdditiveFunction {
    GAdditiveFunction::geom(0.5, &[1.0]).expect("valid parameters")
}

fn poly_two() -> GAdditiveFunction {
    GAdditiveFunction::poly(2.0, &[1.0]).expect("valid parameters")
}

/// Deterministic pseudo-random u64 stream (splitmix64).
struct SplitMix(u64);

impl SplitMix {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    fn below(&mut self, bound: u64) -> u64 {
        self.next() % bound
    }
}

fn suite_base() -> Result<Vec<Check>> {
    let mut checks = Vec::new();

    for b in test_bases(48)? {
        let d = b.order();
        let a = b.coeffs().as_slice();
        let mut exact = true;
        for n in 0..=(b.max_level() - d) {
            let mut v = BigUint::from(0u32);
            for j in 0..d {
                v += b.g(n + d - 1 - j)? * BigUint::from(a[j]);
            }
            exact &= &v == b.g(n + d)?;
        }
        checks.push(Check::new(
            format!("base/recurrence-exact[{}]", b.coeffs()),
            exact,
            "integer recurrence identity at every stored level",
        ));
        let res = b.perron_residual().abs();
        checks.push(Check::new(
            format!("base/perron-identity[{}]", b.coeffs()),
            res < 1e-12,
            format!("residual {res:e}"),
        ));
        checks.push(Check::new(
            format!("base/root-bracket[{}]", b.coeffs()),
            (a[0] as f64) < b.alpha() && b.alpha() < b.frak_a() as f64 + 1.0,
            format!("alpha = {}", b.alpha()),
        ));
    }

    let verdicts = [
        (vec![1u32, 1], Pisot::Yes),
        (vec![2, 1], Pisot::Yes),
        (vec![1, 2], Pisot::No),
        (vec![1, 1, 1], Pisot::Yes),
    ];
    for (coeffs, expected) in verdicts {
        let got = pisot_check(&RecurrenceCoefficients::new(coeffs.clone()))?.verdict;
        checks.push(Check::new(
            format!("base/pisot[{coeffs:?}]"),
            got == expected,
            format!("got {got}, expected {expected}"),
        ));
    }

    let zeck = LinearRecurrenceBase::build(RecurrenceCoefficients::new(vec![1, 1]), 64)?;
    let sqrt5 = 5.0f64.sqrt();
    let kappa_err = (zeck.kappa() - (3.0 + sqrt5) / (2.0 * sqrt5)).abs();
    checks.push(Check::new(
        "base/kappa-closed-form[1,1]",
        kappa_err < 1e-12,
        format!("|kappa - (3+sqrt5)/(2 sqrt5)| = {kappa_err:e}"),
    ));

    Ok(checks)
}

fn suite_digits() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for b in test_bases(32)? {
        let g12 = b.g_u64(12)?;
        let mut round_trip = true;
        for n in 0..g12 {
            let n_big = BigUint::from(n);
            let w = greedy_expand(&b, &n_big)?;
            round_trip &= decode(&b, &w)? == n_big && is_admissible(&b, &w)?;
        }
        checks.push(Check::new(
            format!("digits/round-trip-below-G12[{}]", b.coeffs()),
            round_trip,
            format!("all n < {g12}"),
        ));

        // Admissibility route equivalence over all words of length 8.
        let radix = b.frak_a() + 1;
        let len = 8usize;
        let mut agree = true;
        let mut word = vec![0u32; len];
        'words: loop {
            let w = DigitExpansion::from_lsf(word.clone());
            if is_admissible(&b, &w)? != prefix_condition_holds(&b, &w)? {
                agree = false;
                break;
            }
            let mut i = 0;
            loop {
                if i == len {
                    break 'words;
                }
                word[i] += 1;
                if word[i] < radix {
                    break;
                }
                word[i] = 0;
                i += 1;
            }
        }
        checks.push(Check::new(
            format!("digits/admissibility-routes-agree[{}]", b.coeffs()),
            agree,
            format!("all {radix}^{len} words"),
        ));

        // Block decomposition bijection for n <= 4.
        let d = b.order();
        let a = b.coeffs().as_slice();
        let mut bijective = true;
        for n in 0..=4usize {
            let total = b.g_u64(n + d)?;
            let mut seen = std::collections::HashSet::new();
            for u in 0..total {
                let (ell, k, v) = block_decompose(&b, n, &BigUint::from(u))?;
                let rebuilt = crate::digits::theta(&b, n + d - 1, ell)?
                    + b.g(n + d - 1 - ell)? * BigUint::from(k)
                    + &v;
                bijective &= rebuilt == BigUint::from(u)
                    && k < a[ell]
                    && &v < b.g(n + d - 1 - ell)?
                    && seen.insert((ell, k, v));
            }
            bijective &= seen.len() as u64 == total;
        }
        checks.push(Check::new(
            format!("digits/block-bijection[{}]", b.coeffs()),
            bijective,
            "unique block triple for every u < G_{n+d}, n <= 4",
        ));
    }

    let zeck = LinearRecurrenceBase::build(RecurrenceCoefficients::new(vec![1, 1]), 16)?;
    let mut count = 0u64;
    for bits in 0..(1u32 << 10) {
        let w: Vec<u32> = (0..10).map(|k| (bits >> k) & 1).collect();
        if is_admissible(&zeck, &DigitExpansion::from_lsf(w))? {
            count += 1;
        }
    }
    checks.push(Check::new(
        "digits/admissible-count-G10[1,1]",
        count == zeck.g_u64(10)?,
        format!("{count} admissible words of length 10 vs G_10 = {}", zeck.g_u64(10)?),
    ));

    Ok(checks)
}

fn suite_transform() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let f = geom_half();

    for b in test_bases(64)? {
        // H(0) = G.
        let trace0 = transform::h_sequence(&b, &f, 0.0, 60)?;
        let max_rel = (0..=60)
            .map(|k| (trace0.h[k] - b.g_f64(k).unwrap()).norm() / b.g_f64(k).unwrap())
            .fold(0.0f64, f64::max);
        checks.push(Check::new(
            format!("transform/h-at-zero[{}]", b.coeffs()),
            max_rel < 1e-9,
            format!("max relative deviation {max_rel:e} over k <= 60"),
        ));

        // Oracle equivalence against the independent enumeration route.
        let levels = empirical::levels_below(&b, 20_000);
        let k_top = *levels.last().unwrap();
        let mut worst = 0.0f64;
        for &t in &[0.3, 1.0, 2.5] {
            let trace = transform::h_sequence(&b, &f, t, k_top)?;
            for &k in levels.iter().filter(|&&k| k >= 1) {
                let emp = empirical::empirical_charfn(&b, &f, b.g_u64(k)?, t)?;
                let rec = trace.h[k] / b.g_f64(k)?;
                worst = worst.max((emp - rec).norm() / rec.norm().max(1e-30));
            }
        }
        checks.push(Check::new(
            format!("transform/oracle-equivalence[{}]", b.coeffs()),
            worst < 1e-10,
            format!("max relative deviation {worst:e}, G_k <= 2e4"),
        ));

        // Exact drift/deviation identity.
        let d = b.order();
        let mut worst = 0.0f64;
        for fam in [geom_half(), poly_two()] {
            for &t in &[0.5, 1.0] {
                for k in 2 * d..=30 {
                    worst = worst.max(transform::verify_uk_identity(&b, &fam, t, k)?);
                }
            }
        }
        checks.push(Check::new(
            format!("transform/uk-identity[{}]", b.coeffs()),
            worst < 1e-8,
            format!("max residual {worst:e} for k in [2d, 30]"),
        ));

        // Spectral dissipation, weak form.
        let alpha = b.alpha();
        let mut max_mod: f64 = 0.0;
        let mut lambda0_err: f64 = 0.0;
        let mut q_ok = true;
        for n in (d - 1).max(1)..=20 {
            let pc0 = transform::companion_at(&b, &f, 0.0, n)?;
            lambda0_err = lambda0_err.max((pc0.lambda - alpha).norm());
            let mut t = -2.0;
            while t <= 2.0 + 1e-12 {
                let pc = transform::companion_at(&b, &f, t, n)?;
                max_mod = max_mod.max(pc.lambda.norm());
                q_ok &= pc.q_energy >= 0.0;
                t += 0.25;
            }
        }
        checks.push(Check::new(
            format!("transform/dissipation[{}]", b.coeffs()),
            max_mod <= alpha + 1e-12 && lambda0_err < 1e-12 && q_ok,
            format!("max |lambda| - alpha = {:e}", max_mod - alpha),
        ));

        // Contraction constant and kernel sum.
        let l = transform::contraction_constant(&b);
        let kernel = transform::kernel_coefficients(&b, 60);
        let l_ok = l > 0.0 && l < 1.0 / (d - 1) as f64;
        let k_ok = kernel.coefficients.iter().all(|&x| x >= 0.0)
            && (kernel.partial_sum - kernel.total).abs() < 1e-6;
        checks.push(Check::new(
            format!("transform/contraction-kernel[{}]", b.coeffs()),
            l_ok && k_ok,
            format!("L = {l}, kernel partial {} vs total {}", kernel.partial_sum, kernel.total),
        ));
    }

    Ok(checks)
}

fn suite_series() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let zeck = LinearRecurrenceBase::build(RecurrenceCoefficients::new(vec![1, 1]), 256)?;

    let s2_geom = series::s2_terms(&zeck, &geom_half(), 60)?;
    let geom_err = (s2_geom.total() - 4.0 / 3.0).abs();
    checks.push(Check::new(
        "series/s2-geometric-total",
        geom_err < 1e-12,
        format!("|S2 - 4/3| = {geom_err:e} at 60 terms"),
    ));

    let s2_poly = series::s2_terms(&zeck, &poly_two(), 200)?;
    let zeta4 = std::f64::consts::PI.powi(4) / 90.0;
    let poly_err = (s2_poly.total() - zeta4).abs();
    checks.push(Check::new(
        "series/s2-polynomial-total",
        poly_err < 1e-6,
        format!("|S2 - pi^4/90| = {poly_err:e} at 200 terms"),
    ));

    // Linearity and the quadratic expansion, termwise.
    let f = geom_half();
    let g = poly_two();
    let s = GAdditiveFunction::sum(f.clone(), g.clone());
    let (rf, rg, rs) = (
        series::s1_terms(&zeck, &f, 60)?,
        series::s1_terms(&zeck, &g, 60)?,
        series::s1_terms(&zeck, &s, 60)?,
    );
    let lin = (0..60)
        .map(|n| (rs.terms[n] - rf.terms[n] - rg.terms[n]).abs())
        .fold(0.0f64, f64::max);
    checks.push(Check::new(
        "series/s1-linearity",
        lin < 1e-12,
        format!("max termwise residual {lin:e}"),
    ));

    let stab = series::stability_report(&zeck, &f, &g, 60)?;
    checks.push(Check::new(
        "series/stability-quadratic",
        stab.s1_residual.abs() < 1e-12
            && stab.s2_residual.abs() < 1e-12
            && stab.cauchy_schwarz_holds,
        format!(
            "s1 residual {:e}, s2 residual {:e}, |cross| <= CS bound: {}",
            stab.s1_residual, stab.s2_residual, stab.cauchy_schwarz_holds
        ),
    ));

    // Order-2 shift identity on every order-2 test base.
    for coeffs in [vec![1u32, 1], vec![2, 1], vec![2, 2]] {
        let b = LinearRecurrenceBase::build(RecurrenceCoefficients::new(coeffs.clone()), 64)?;
        let (first, _) = series::order2_series(&b, &f, 40)?;
        let m = series::s1_terms(&b, &f, 40)?;
        let worst = (1..40)
            .map(|n| (first.terms[n] - m.terms[n - 1]).abs())
            .fold(0.0f64, f64::max);
        checks.push(Check::new(
            format!("series/order2-shift[{coeffs:?}]"),
            worst < 1e-12,
            format!("max termwise deviation {worst:e}"),
        ));
    }

    Ok(checks)
}

fn suite_empirical() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let f = geom_half();

    for b in test_bases(64)? {
        // Prefix consistency between the enumeration and the recurrence.
        let levels = empirical::levels_below(&b, 20_000);
        let k_top = *levels.last().unwrap();
        let mut worst = 0.0f64;
        for &t in &[0.3, 1.0, 2.5] {
            let trace = transform::h_sequence(&b, &f, t, k_top)?;
            for &k in levels.iter().filter(|&&k| k >= 1) {
                let emp = empirical::empirical_charfn(&b, &f, b.g_u64(k)?, t)?;
                let rec = trace.h[k] / b.g_f64(k)?;
                worst = worst.max((emp - rec).norm() / rec.norm().max(1e-30));
            }
        }
        checks.push(Check::new(
            format!("empirical/prefix-consistency[{}]", b.coeffs()),
            worst < 1e-10,
            format!("max relative deviation {worst:e}"),
        ));
    }

    // Basic characteristic-function facts.
    let zeck = LinearRecurrenceBase::build(RecurrenceCoefficients::new(vec![1, 1]), 64)?;
    let mut ok = true;
    let mut detail = String::new();
    for &t in &[0.0, 0.7, 1.9, -1.3] {
        let z = empirical::empirical_charfn(&zeck, &f, 12345, t)?;
        if z.norm() > 1.0 + 1e-12 {
            ok = false;
            detail = format!("|Phi({t})| = {} > 1", z.norm());
        }
        if t == 0.0 && (z - Complex64::new(1.0, 0.0)).norm() > 1e-12 {
            ok = false;
            detail = format!("Phi(0) = {z}");
        }
    }
    checks.push(Check::new("empirical/charfn-bounds", ok, detail));

    // F_N monotone on a grid.
    let dist = empirical::empirical_distribution(&zeck, &f, 10_000)?;
    let mut monotone = true;
    let mut prev = -1.0;
    for i in 0..200 {
        let z = -0.5 + i as f64 * 0.02;
        let v = dist.cdf(z);
        monotone &= v >= prev;
        prev = v;
    }
    checks.push(Check::new(
        "empirical/cdf-monotone",
        monotone,
        "F_N nondecreasing on a 200-point grid",
    ));

    // Weight decomposition of prefix means at 20 pseudo-random ranges.
    let mut rng = SplitMix(0x5eed_2026);
    let mut cuts: Vec<u64> = (0..20).map(|_| 1 + rng.below(1_000_000)).collect();
    cuts.sort_unstable();
    let trib = LinearRecurrenceBase::build(RecurrenceCoefficients::new(vec![1, 1, 1]), 64)?;
    for b in [&zeck, &trib] {
        for fam in [geom_half(), poly_two()] {
            let t = 1.0;
            let max_n = *cuts.last().unwrap();
            let scan = empirical::chang_scan(b, &fam, t, max_n, &cuts)?;
            let mut worst = 0.0f64;
            for (i, &n) in cuts.iter().enumerate() {
                let blocks: Vec<(usize, Complex64)> = scan
                    .block_sums
                    .iter()
                    .copied()
                    .filter(|&(q, _)| b.g_u64(q).map(|g| g <= n).unwrap_or(false))
                    .collect();
                let re = empirical::chang_reassemble(b, &fam, t, n, &blocks)?;
                worst = worst.max(empirical::chang_deviation(scan.at_cuts[i], re));
            }
            checks.push(Check::new(
                format!("empirical/chang-weights[{};{}]", b.coeffs(), fam.spec_string()),
                worst < 1e-9,
                format!("max residual {worst:e} over 20 ranges below 1e6"),
            ));
        }
    }

    Ok(checks)
}
