//! The two canonical convergence series and their diagnostics.
//!
//! For a digit-weight function `f` on a base of order `d` with Perron root
//! `alpha`, the layer terms are
//!
//! ```text
//! (S1)  M_n = sum_{j<d} alpha^{-j} sum_{k<a_j} ( f(k G_{n+d-j})
//!                                 + sum_{l<j} f(a_l G_{n+d-l}) )
//! (S2)  S_2(n) = sum_{1<=k<=frak_a} f(k G_n)^2
//! ```
//!
//! and `f` has a limiting distribution exactly when both series converge.
//! Convergence cannot be decided from finitely many terms, so reports carry
//! a three-state verdict: `converged-numerically` requires the last ten
//! increments below tolerance plus a Cauchy-style doubling check; anything
//! ambiguous stays `inconclusive`.

use serde::Serialize;

use crate::base::LinearRecurrenceBase;
use crate::gfun::GAdditiveFunction;
use crate::{Error, Result};

/// Default tolerance for the numerical convergence verdict.
pub const SERIES_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    ConvergedNumerically,
    Diverging,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::ConvergedNumerically => write!(f, "converged-numerically"),
            Verdict::Diverging => write!(f, "diverging"),
            Verdict::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

/// Layer terms, running sums, and a convergence verdict.
#[derive(Debug, Clone)]
pub struct SeriesReport {
    pub terms: Vec<f64>,
    pub partial_sums: Vec<f64>,
    /// Geometric tail extrapolation where the decay ratio is stable,
    /// `None` otherwise.
    pub tail_estimate: Option<f64>,
    pub verdict: Verdict,
}

impl SeriesReport {
    /// Builds a report from raw layer terms.
    pub fn from_terms(terms: Vec<f64>, tol: f64) -> Self {
        let mut partial_sums = Vec::with_capacity(terms.len());
        let mut run = 0.0;
        for &t in &terms {
            run += t;
            partial_sums.push(run);
        }
        let verdict = assess(&terms, &partial_sums, tol);
        let tail_estimate = tail_estimate(&terms);
        SeriesReport {
            terms,
            partial_sums,
            tail_estimate,
            verdict,
        }
    }

    /// Recomputes the verdict under a different tolerance.
    pub fn reassess(&mut self, tol: f64) {
        self.verdict = assess(&self.terms, &self.partial_sums, tol);
    }

    pub fn total(&self) -> f64 {
        self.partial_sums.last().copied().unwrap_or(0.0)
    }
}

fn assess(terms: &[f64], sums: &[f64], tol: f64) -> Verdict {
    let n = terms.len();
    if n < 12 {
        return Verdict::Inconclusive;
    }
    let last10 = &terms[n - 10..];
    let small_tail = last10.iter().all(|t| t.abs() < tol);
    // Cauchy-style doubling check against the half-length partial sum.
    let doubling = (sums[n - 1] - sums[(n - 1) / 2]).abs() < tol;
    if small_tail && doubling {
        return Verdict::ConvergedNumerically;
    }
    let grew = terms[n - 1].abs() >= terms[n - 11].abs();
    let big_tail = last10.iter().all(|t| t.abs() >= tol);
    if sums[n - 1].abs() > 1e12 || (big_tail && grew) {
        return Verdict::Diverging;
    }
    Verdict::Inconclusive
}

fn tail_estimate(terms: &[f64]) -> Option<f64> {
    let n = terms.len();
    if n < 6 {
        return None;
    }
    let mut ratios = Vec::new();
    for k in n - 5..n {
        let prev = terms[k - 1].abs();
        if prev == 0.0 {
            return (terms[n - 5..].iter().all(|&t| t == 0.0)).then_some(0.0);
        }
        ratios.push(terms[k].abs() / prev);
    }
    let q = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let spread = ratios
        .iter()
        .map(|r| (r - q).abs())
        .fold(0.0f64, f64::max);
    (q < 0.99 && spread < 0.05 * q.max(1e-6)).then(|| terms[n - 1].abs() * q / (1.0 - q))
}

fn check_capacity(base: &LinearRecurrenceBase, top_level: usize) -> Result<()> {
    if top_level > base.max_level() {
        return Err(Error::Capacity {
            required_level: top_level,
            have_level: base.max_level(),
        });
    }
    Ok(())
}

/// Layer term `M_n` of the first canonical series.
pub fn s1_layer(base: &LinearRecurrenceBase, f: &GAdditiveFunction, n: usize) -> f64 {
    let d = base.order();
    let a = base.coeffs().as_slice();
    let alpha = base.alpha();
    let mut m = 0.0;
    let mut alpha_pow = 1.0;
    for j in 0..d {
        let mut inner = 0.0;
        for k in 0..a[j] {
            inner += f.weight(k, n + d - j);
            for l in 0..j {
                inner += f.weight(a[l], n + d - l);
            }
        }
        m += inner / alpha_pow;
        alpha_pow *= alpha;
    }
    m
}

/// First canonical series, layers `M_0..M_{N-1}`.
pub fn s1_terms(
    base: &LinearRecurrenceBase,
    f: &GAdditiveFunction,
    n_layers: usize,
) -> Result<SeriesReport> {
    if n_layers > 0 {
        check_capacity(base, n_layers - 1 + base.order())?;
    }
    let terms = (0..n_layers).map(|n| s1_layer(base, f, n)).collect();
    Ok(SeriesReport::from_terms(terms, SERIES_TOL))
}

/// Layer term of the quadratic digit-energy series.
pub fn s2_layer(base: &LinearRecurrenceBase, f: &GAdditiveFunction, n: usize) -> f64 {
    (1..=base.frak_a())
        .map(|k| {
            let w = f.weight(k, n);
            w * w
        })
        .sum()
}

/// Second canonical series, layers `0..N-1`.
pub fn s2_terms(
    base: &LinearRecurrenceBase,
    f: &GAdditiveFunction,
    n_layers: usize,
) -> Result<SeriesReport> {
    if n_layers > 0 {
        check_capacity(base, n_layers - 1)?;
    }
    let terms = (0..n_layers).map(|n| s2_layer(base, f, n)).collect();
    Ok(SeriesReport::from_terms(terms, SERIES_TOL))
}

/// Order-2 specialisation: for coefficients `(a, b)` the first series has
/// layers
///
/// ```text
/// sum_{k<a} f(k G_{n+1}) + (1/alpha) sum_{k<b} ( f(k G_n) + f(a G_{n+1}) )
/// ```
///
/// (the generic `M` layer after the index shift `n -> n-1`), the second is
/// the digit-energy series.
pub fn order2_series(
    base: &LinearRecurrenceBase,
    f: &GAdditiveFunction,
    n_layers: usize,
) -> Result<(SeriesReport, SeriesReport)> {
    if base.order() != 2 {
        return Err(Error::WrongOrder {
            expected: 2,
            got: base.order(),
        });
    }
    if n_layers > 0 {
        check_capacity(base, n_layers)?;
    }
    let a = base.coeffs().as_slice()[0];
    let b = base.coeffs().as_slice()[1];
    let alpha = base.alpha();
    let terms: Vec<f64> = (0..n_layers)
        .map(|n| {
            let mut first = 0.0;
            for k in 0..a {
                first += f.weight(k, n + 1);
            }
            let mut second = 0.0;
            for k in 0..b {
                second += f.weight(k, n) + f.weight(a, n + 1);
            }
            first + second / alpha
        })
        .collect();
    let first = SeriesReport::from_terms(terms, SERIES_TOL);
    let second = s2_terms(base, f, n_layers)?;
    Ok((first, second))
}

/// Additivity diagnostics for a pair of functions: (S1) is linear, (S2)
/// expands quadratically with a cross term bounded by Cauchy-Schwarz.
#[derive(Debug, Clone, Serialize)]
pub struct StabilityReport {
    /// `S1[f+g] - S1[f] - S1[g]` over the first `N` layers.
    pub s1_residual: f64,
    /// `S2[f+g] - S2[f] - S2[g] - 2 * cross_term`.
    pub s2_residual: f64,
    /// `sum_n sum_c f(c G_n) g(c G_n)`.
    pub cross_term: f64,
    /// `sqrt(S2[f] * S2[g])`.
    pub cauchy_schwarz_bound: f64,
    pub cauchy_schwarz_holds: bool,
}

pub fn stability_report(
    base: &LinearRecurrenceBase,
    f: &GAdditiveFunction,
    g: &GAdditiveFunction,
    n_layers: usize,
) -> Result<StabilityReport> {
    let sum_fg = GAdditiveFunction::sum(f.clone(), g.clone());
    let s1_f = s1_terms(base, f, n_layers)?.total();
    let s1_g = s1_terms(base, g, n_layers)?.total();
    let s1_sum = s1_terms(base, &sum_fg, n_layers)?.total();
    let s2_f = s2_terms(base, f, n_layers)?.total();
    let s2_g = s2_terms(base, g, n_layers)?.total();
    let s2_sum = s2_terms(base, &sum_fg, n_layers)?.total();

    let mut cross = 0.0;
    for n in 0..n_layers {
        for c in 1..=base.frak_a() {
            cross += f.weight(c, n) * g.weight(c, n);
        }
    }
    let cs_bound = (s2_f * s2_g).sqrt();
    Ok(StabilityReport {
        s1_residual: s1_sum - s1_f - s1_g,
        s2_residual: s2_sum - s2_f - s2_g - 2.0 * cross,
        cross_term: cross,
        cauchy_schwarz_bound: cs_bound,
        cauchy_schwarz_holds: cross.abs() <= cs_bound * (1.0 + 1e-12) + 1e-300,
    })
}

/// Atomicity diagnostic. The limit law is purely atomic exactly when the
/// weights vanish at all levels beyond some `J`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Atomicity {
    /// All weights `f(c G_j)` vanish for `j >= J` (structurally provable).
    AtomicByLevel(usize),
    /// No such level exists at or below the scan bound.
    NotEventuallyZero { scanned_up_to: usize },
}

/// Flattened view of a function as (geom by rho, poly by beta, merged
/// table), used to reason exactly about eventual vanishing. Components of
/// the same family and parameter are merged so that cancelling sums are
/// recognised.
fn flatten(
    f: &GAdditiveFunction,
    geoms: &mut Vec<(f64, Vec<f64>)>,
    polys: &mut Vec<(f64, Vec<f64>)>,
    table: &mut std::collections::BTreeMap<(u32, usize), f64>,
) {
    fn add_phi(slot: &mut Vec<f64>, phi: &[f64]) {
        if slot.len() < phi.len() {
            slot.resize(phi.len(), 0.0);
        }
        for (i, &p) in phi.iter().enumerate() {
            slot[i] += p;
        }
    }
    match f {
        GAdditiveFunction::Table { weights } => {
            for (&key, &w) in weights {
                *table.entry(key).or_insert(0.0) += w;
            }
        }
        GAdditiveFunction::GeomDamped { rho, phi } => {
            if let Some(slot) = geoms.iter_mut().find(|(r, _)| r == rho) {
                add_phi(&mut slot.1, phi);
            } else {
                geoms.push((*rho, phi.clone()));
            }
        }
        GAdditiveFunction::PolyDamped { beta, phi } => {
            if let Some(slot) = polys.iter_mut().find(|(b, _)| b == beta) {
                add_phi(&mut slot.1, phi);
            } else {
                polys.push((*beta, phi.clone()));
            }
        }
        GAdditiveFunction::Sum(a, b) => {
            flatten(a, geoms, polys, table);
            flatten(b, geoms, polys, table);
        }
    }
}

/// Smallest `J <= j_max` such that every weight at levels `>= J` vanishes,
/// or the negative verdict. Distinct damped families cannot cancel each
/// other identically, so the structural analysis is exact after merging
/// same-parameter components.
pub fn atomicity_check(f: &GAdditiveFunction, j_max: usize) -> Atomicity {
    let mut geoms = Vec::new();
    let mut polys = Vec::new();
    let mut table = std::collections::BTreeMap::new();
    flatten(f, &mut geoms, &mut polys, &mut table);

    let mut bound = 0usize;
    let mut max_digit = 0u32;
    for (rho, phi) in &geoms {
        max_digit = max_digit.max(phi.len().saturating_sub(1) as u32);
        if phi.iter().all(|&p| p == 0.0) {
            continue;
        }
        if *rho == 0.0 {
            bound = bound.max(1);
        } else {
            return Atomicity::NotEventuallyZero { scanned_up_to: j_max };
        }
    }
    for (_beta, phi) in &polys {
        max_digit = max_digit.max(phi.len().saturating_sub(1) as u32);
        if phi.iter().any(|&p| p != 0.0) {
            return Atomicity::NotEventuallyZero { scanned_up_to: j_max };
        }
    }
    for (&(j, k), &w) in &table {
        max_digit = max_digit.max(j);
        if w != 0.0 {
            bound = bound.max(k + 1);
        }
    }

    // Refine: components may cancel pointwise below the structural bound.
    let level_vanishes = |k: usize| (1..=max_digit).all(|c| f.weight(c, k) == 0.0);
    while bound > 0 && level_vanishes(bound - 1) {
        bound -= 1;
    }
    if bound <= j_max {
        Atomicity::AtomicByLevel(bound)
    } else {
        Atomicity::NotEventuallyZero { scanned_up_to: j_max }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::RecurrenceCoefficients;

    fn build(coeffs: &[u32], max_level: usize) -> LinearRecurrenceBase {
        LinearRecurrenceBase::build(RecurrenceCoefficients::new(coeffs.to_vec()), max_level)
            .unwrap()
    }

    fn zeck() -> LinearRecurrenceBase {
        build(&[1, 1], 64)
    }

    fn geom_half() -> GAdditiveFunction {
        GAdditiveFunction::geom(0.5, &[1.0]).unwrap()
    }

    #[test]
    fn s1_zero_function() {
        let b = zeck();
        let rep = s1_terms(&b, &GAdditiveFunction::zero(), 30).unwrap();
        assert!(rep.terms.iter().all(|&t| t == 0.0));
    }

    #[test]
    fn s1_zeckendorf_geometric_closed_form() {
        // For a_0 = a_1 = 1 only the (j=1, l=0) term survives:
        // M_n = f(G_{n+2}) / alpha = rho^{n+2} / alpha.
        let b = build(&[1, 1], 128);
        let f = geom_half();
        let rep = s1_terms(&b, &f, 80).unwrap();
        for (n, &t) in rep.terms.iter().enumerate() {
            let expected = 0.5f64.powi(n as i32 + 2) / b.alpha();
            assert!((t - expected).abs() < 1e-15, "layer {n}");
        }
        assert_eq!(rep.verdict, Verdict::ConvergedNumerically);
    }

    #[test]
    fn s1_multinacci_matches_corollary_form() {
        // All-ones coefficients reduce M_n to
        // sum_{1<=j<d} alpha^{-j} sum_{l<j} f(G_{n+d-l}).
        for d in [3usize, 4] {
            let b = build(&vec![1; d], 50);
            let f = geom_half();
            let alpha = b.alpha();
            let rep = s1_terms(&b, &f, 25).unwrap();
            for (n, &t) in rep.terms.iter().enumerate() {
                let mut expected = 0.0;
                for j in 1..d {
                    let mut inner = 0.0;
                    for l in 0..j {
                        inner += f.weight(1, n + d - l);
                    }
                    expected += inner / alpha.powi(j as i32);
                }
                assert!((t - expected).abs() < 1e-15, "d={d} layer {n}");
            }
        }
    }

    #[test]
    fn s2_closed_forms() {
        let b = zeck();
        let f = geom_half();
        let rep = s2_terms(&b, &f, 60).unwrap();
        for (n, &t) in rep.terms.iter().enumerate() {
            assert!((t - 0.25f64.powi(n as i32)).abs() < 1e-15);
        }
        assert!((rep.total() - 4.0 / 3.0).abs() < 1e-12);
        assert_eq!(rep.verdict, Verdict::ConvergedNumerically);

        let b200 = build(&[1, 1], 256);
        let p = GAdditiveFunction::poly(2.0, &[1.0]).unwrap();
        let rep = s2_terms(&b200, &p, 200).unwrap();
        let zeta4 = std::f64::consts::PI.powi(4) / 90.0;
        assert!((rep.total() - zeta4).abs() < 1e-6);
    }

    #[test]
    fn s2_zero_function() {
        let b = zeck();
        let rep = s2_terms(&b, &GAdditiveFunction::zero(), 30).unwrap();
        assert!(rep.total() == 0.0);
    }

    #[test]
    fn order2_shift_identity() {
        for coeffs in [vec![1, 1], vec![2, 1], vec![2, 2], vec![3, 2]] {
            let b = build(&coeffs, 64);
            let f = geom_half();
            let (first, _second) = order2_series(&b, &f, 40).unwrap();
            let m = s1_terms(&b, &f, 40).unwrap();
            for n in 1..40 {
                assert!(
                    (first.terms[n] - m.terms[n - 1]).abs() < 1e-12,
                    "shift identity at n={n} for {coeffs:?}"
                );
            }
        }
    }

    #[test]
    fn order2_totals_match_after_shift() {
        let b = zeck();
        let f = geom_half();
        let (first, _) = order2_series(&b, &f, 41).unwrap();
        let m = s1_terms(&b, &f, 40).unwrap();
        // first = layer -1 + shifted layers of M.
        let layer_minus_1 = first.terms[0];
        assert!((first.total() - layer_minus_1 - m.total()).abs() < 1e-12);
    }

    #[test]
    fn order2_unit_coefficients_reduce_to_single_weight() {
        let b = zeck();
        let f = geom_half();
        let (first, _) = order2_series(&b, &f, 30).unwrap();
        for (n, &t) in first.terms.iter().enumerate() {
            let expected = f.weight(1, n + 1) / b.alpha();
            assert!((t - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn order2_rejects_other_orders() {
        let trib = build(&[1, 1, 1], 32);
        assert!(matches!(
            order2_series(&trib, &geom_half(), 10),
            Err(Error::WrongOrder { expected: 2, got: 3 })
        ));
    }

    #[test]
    fn stability_zero_partner() {
        let b = zeck();
        let rep = stability_report(&b, &geom_half(), &GAdditiveFunction::zero(), 50).unwrap();
        assert_eq!(rep.s1_residual, 0.0);
        assert_eq!(rep.s2_residual, 0.0);
        assert_eq!(rep.cross_term, 0.0);
    }

    #[test]
    fn stability_self_pair_saturates_cauchy_schwarz() {
        let b = zeck();
        let f = geom_half();
        let rep = stability_report(&b, &f, &f, 60).unwrap();
        let s2 = s2_terms(&b, &f, 60).unwrap().total();
        assert!((rep.cross_term - s2).abs() < 1e-12);
        assert!((rep.cross_term - rep.cauchy_schwarz_bound).abs() < 1e-12);
        assert!(rep.cauchy_schwarz_holds);
    }

    #[test]
    fn stability_mixed_pair() {
        let b = zeck();
        let f = geom_half();
        let g = GAdditiveFunction::poly(2.0, &[1.0]).unwrap();
        let rep = stability_report(&b, &f, &g, 60).unwrap();
        assert!(rep.s1_residual.abs() < 1e-12);
        assert!(rep.s2_residual.abs() < 1e-12);
        assert!(rep.cross_term.abs() < rep.cauchy_schwarz_bound);
        assert!(rep.cauchy_schwarz_holds);
    }

    #[test]
    fn s1_linearity_termwise() {
        let b = zeck();
        let f = geom_half();
        let g = GAdditiveFunction::poly(1.5, &[0.4]).unwrap();
        let s = GAdditiveFunction::sum(f.clone(), g.clone());
        let rf = s1_terms(&b, &f, 40).unwrap();
        let rg = s1_terms(&b, &g, 40).unwrap();
        let rs = s1_terms(&b, &s, 40).unwrap();
        for n in 0..40 {
            assert!((rs.terms[n] - rf.terms[n] - rg.terms[n]).abs() < 1e-12);
        }
    }

    #[test]
    fn s2_quadratic_expansion_termwise() {
        let b = zeck();
        let f = geom_half();
        let g = GAdditiveFunction::poly(2.0, &[0.7]).unwrap();
        let s = GAdditiveFunction::sum(f.clone(), g.clone());
        let rf = s2_terms(&b, &f, 40).unwrap();
        let rg = s2_terms(&b, &g, 40).unwrap();
        let rs = s2_terms(&b, &s, 40).unwrap();
        for n in 0..40 {
            let cross: f64 = (1..=b.frak_a())
                .map(|c| f.weight(c, n) * g.weight(c, n))
                .sum();
            assert!((rs.terms[n] - rf.terms[n] - rg.terms[n] - 2.0 * cross).abs() < 1e-12);
        }
    }

    #[test]
    fn verdicts_match_known_convergence() {
        let b = build(&[1, 1], 300);
        // Geometric damping passes the strict 1e-10 test once the tail is
        // deep enough.
        for f in [
            GAdditiveFunction::geom(0.5, &[1.0]).unwrap(),
            GAdditiveFunction::geom(-0.8, &[2.0]).unwrap(),
        ] {
            let s2 = s2_terms(&b, &f, 256).unwrap();
            assert_eq!(s2.verdict, Verdict::ConvergedNumerically, "{}", f.spec_string());
            let s1 = s1_terms(&b, &f, 256).unwrap();
            assert_eq!(s1.verdict, Verdict::ConvergedNumerically, "{}", f.spec_string());
        }
        // Polynomial damping converges too slowly for 1e-10 at desk depth;
        // it must never read as diverging, and passes at a tolerance the
        // tail can actually meet.
        let p = GAdditiveFunction::poly(2.0, &[1.0]).unwrap();
        let mut s2 = s2_terms(&b, &p, 256).unwrap();
        assert_ne!(s2.verdict, Verdict::Diverging);
        s2.reassess(1e-6);
        assert_eq!(s2.verdict, Verdict::ConvergedNumerically);
        let mut s1 = s1_terms(&b, &p, 256).unwrap();
        assert_ne!(s1.verdict, Verdict::Diverging);
        s1.reassess(1e-2);
        assert_eq!(s1.verdict, Verdict::ConvergedNumerically);

        // Constant nonzero terms diverge.
        let rep = SeriesReport::from_terms(vec![1.0; 50], SERIES_TOL);
        assert_eq!(rep.verdict, Verdict::Diverging);
        // Harmonic-like decay is not resolvable either way, even loosely.
        let mut rep =
            SeriesReport::from_terms((1..257).map(|n| 1.0 / n as f64).collect(), SERIES_TOL);
        assert_eq!(rep.verdict, Verdict::Inconclusive);
        rep.reassess(1e-2);
        assert_eq!(rep.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn atomicity_cases() {
        let table = GAdditiveFunction::table((0..5).map(|k| (1u32, k, 1.0))).unwrap();
        assert_eq!(atomicity_check(&table, 20), Atomicity::AtomicByLevel(5));

        assert_eq!(
            atomicity_check(&geom_half(), 20),
            Atomicity::NotEventuallyZero { scanned_up_to: 20 }
        );

        assert_eq!(
            atomicity_check(&GAdditiveFunction::zero(), 20),
            Atomicity::AtomicByLevel(0)
        );

        // Cancelling sum of identical geometric parts is identically zero.
        let f = GAdditiveFunction::geom(0.5, &[1.0]).unwrap();
        let g = GAdditiveFunction::geom(0.5, &[-1.0]).unwrap();
        assert_eq!(
            atomicity_check(&GAdditiveFunction::sum(f, g), 20),
            Atomicity::AtomicByLevel(0)
        );

        // Table support past the scan bound yields the negative verdict.
        let far = GAdditiveFunction::table([(1u32, 30usize, 1.0)]).unwrap();
        assert_eq!(
            atomicity_check(&far, 20),
            Atomicity::NotEventuallyZero { scanned_up_to: 20 }
        );
    }

    #[test]
    fn capacity_errors() {
        let b = build(&[1, 1], 10);
        assert!(s1_terms(&b, &geom_half(), 9).is_ok());
        assert!(matches!(
            s1_terms(&b, &geom_half(), 10),
            Err(Error::Capacity { .. })
        ));
        assert!(matches!(
            s2_terms(&b, &geom_half(), 12),
            Err(Error::Capacity { .. })
        ));
    }
}
