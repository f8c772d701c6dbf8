//! Digit-level weight functions and their evaluation on integers.
//!
//! A function here is determined by its weights `f(j G_k)` for digits
//! `j >= 1` and levels `k >= 0`, with `f(0) = 0`, and extends to integers
//! by summing the weights of the greedy digits. Supported families:
//!
//! * `table`  - explicit finite weight table, zero beyond stored levels;
//! * `poly`   - `f(j G_n) = phi(j) / (n+1)^beta`;
//! * `geom`   - `f(j G_n) = rho^n phi(j)`;
//! * `sum`    - pointwise sum of two functions.
//!
//! CLI spec syntax: `geom:RHO:PHI1[,PHI2,...]`, `poly:BETA:PHI1[,...]`,
//! `table:PATH`, `sum:(SPEC)+(SPEC)`.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_complex::Complex64;
use serde::Deserialize;

use crate::base::LinearRecurrenceBase;
use crate::digits::greedy_expand;
use crate::{Error, Result};

/// A G-additive function, represented by its digit-level weights.
#[derive(Debug, Clone)]
pub enum GAdditiveFunction {
    /// Explicit weights keyed by `(digit, level)`; everything else is zero.
    Table { weights: BTreeMap<(u32, usize), f64> },
    /// `phi(j) / (n+1)^beta` with `beta > 0`.
    PolyDamped { beta: f64, phi: Vec<f64> },
    /// `rho^n phi(j)` with `|rho| < 1`.
    GeomDamped { rho: f64, phi: Vec<f64> },
    /// Pointwise sum.
    Sum(Box<GAdditiveFunction>, Box<GAdditiveFunction>),
}

/// On-disk form of a weight table: `{"weights": [[j, k, value], ...]}`.
#[derive(Deserialize)]
struct TableFile {
    weights: Vec<(u32, usize, f64)>,
}

fn check_phi(phi: &[f64]) -> Result<()> {
    if let Some(&p0) = phi.first() {
        if p0 != 0.0 {
            return Err(Error::Parse("phi(0) must be 0".into()));
        }
    }
    Ok(())
}

impl GAdditiveFunction {
    pub fn zero() -> Self {
        GAdditiveFunction::Table {
            weights: BTreeMap::new(),
        }
    }

    /// Builds a table function from `(digit, level, weight)` triples.
    /// Weights for digit 0 must be absent or zero.
    pub fn table(entries: impl IntoIterator<Item = (u32, usize, f64)>) -> Result<Self> {
        let mut weights = BTreeMap::new();
        for (j, k, w) in entries {
            if j == 0 {
                if w != 0.0 {
                    return Err(Error::Parse("table weight for digit 0 must be 0".into()));
                }
                continue;
            }
            if w != 0.0 {
                weights.insert((j, k), w);
            }
        }
        Ok(GAdditiveFunction::Table { weights })
    }

    /// `phi` is indexed by digit starting at 1: `phi_list[0] = phi(1)`.
    pub fn geom(rho: f64, phi_list: &[f64]) -> Result<Self> {
        if !rho.is_finite() || rho.abs() >= 1.0 {
            return Err(Error::Parse(format!("geom rho must be in (-1,1), got {rho}")));
        }
        let mut phi = vec![0.0];
        phi.extend_from_slice(phi_list);
        check_phi(&phi)?;
        Ok(GAdditiveFunction::GeomDamped { rho, phi })
    }

    /// `phi` is indexed by digit starting at 1: `phi_list[0] = phi(1)`.
    pub fn poly(beta: f64, phi_list: &[f64]) -> Result<Self> {
        if !beta.is_finite() || beta <= 0.0 {
            return Err(Error::Parse(format!("poly beta must be > 0, got {beta}")));
        }
        let mut phi = vec![0.0];
        phi.extend_from_slice(phi_list);
        check_phi(&phi)?;
        Ok(GAdditiveFunction::PolyDamped { beta, phi })
    }

    pub fn sum(f: GAdditiveFunction, g: GAdditiveFunction) -> Self {
        GAdditiveFunction::Sum(Box::new(f), Box::new(g))
    }

    /// Loads a table function from a JSON file.
    pub fn table_from_path(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let file: TableFile = serde_json::from_str(&text)?;
        Self::table(file.weights)
    }

    /// Weight `f(j G_k)`; total over all digits and levels, with zero for
    /// anything outside the stored/parametrized domain.
    pub fn weight(&self, j: u32, k: usize) -> f64 {
        if j == 0 {
            return 0.0;
        }
        match self {
            GAdditiveFunction::Table { weights } => weights.get(&(j, k)).copied().unwrap_or(0.0),
            GAdditiveFunction::PolyDamped { beta, phi } => {
                let p = phi.get(j as usize).copied().unwrap_or(0.0);
                p / ((k + 1) as f64).powf(*beta)
            }
            GAdditiveFunction::GeomDamped { rho, phi } => {
                let p = phi.get(j as usize).copied().unwrap_or(0.0);
                rho.powi(k as i32) * p
            }
            GAdditiveFunction::Sum(f, g) => f.weight(j, k) + g.weight(j, k),
        }
    }

    /// Weight with the digit checked against the base's alphabet.
    pub fn weight_checked(&self, base: &LinearRecurrenceBase, j: u32, k: usize) -> Result<f64> {
        if j > base.frak_a() {
            return Err(Error::DigitDomain {
                digit: j,
                max_digit: base.frak_a(),
            });
        }
        Ok(self.weight(j, k))
    }

    /// `f(n) = sum_k f(e_k(n) G_k)` over the greedy digits of `n`.
    ///
    /// The sum kind recurses so that `eval(f+g) = eval(f) + eval(g)` holds
    /// bit-for-bit, not just up to reassociation error.
    pub fn eval(&self, base: &LinearRecurrenceBase, n: &BigUint) -> Result<f64> {
        if let GAdditiveFunction::Sum(f, g) = self {
            return Ok(f.eval(base, n)? + g.eval(base, n)?);
        }
        let w = greedy_expand(base, n)?;
        Ok(w
            .digits()
            .iter()
            .enumerate()
            .map(|(k, &e)| self.weight(e, k))
            .sum())
    }

    /// `e^{i t f(n)}`.
    pub fn phase(&self, base: &LinearRecurrenceBase, n: &BigUint, t: f64) -> Result<Complex64> {
        Ok(Complex64::from_polar(1.0, t * self.eval(base, n)?))
    }

    /// Canonical textual form, reparseable by [`parse_function_spec`]
    /// (tables render their entries inline and are not reparseable).
    pub fn spec_string(&self) -> String {
        fn list(phi: &[f64]) -> String {
            phi.iter()
                .skip(1)
                .map(|p| format!("{p}"))
                .collect::<Vec<_>>()
                .join(",")
        }
        match self {
            GAdditiveFunction::Table { weights } => {
                let parts: Vec<String> = weights
                    .iter()
                    .map(|((j, k), w)| format!("[{j},{k},{w}]"))
                    .collect();
                format!("table:{{{}}}", parts.join(","))
            }
            GAdditiveFunction::PolyDamped { beta, phi } => format!("poly:{beta}:{}", list(phi)),
            GAdditiveFunction::GeomDamped { rho, phi } => format!("geom:{rho}:{}", list(phi)),
            GAdditiveFunction::Sum(f, g) => {
                format!("sum:({})+({})", f.spec_string(), g.spec_string())
            }
        }
    }
}

fn parse_phi_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("phi value {tok:?}: {e}")))
        })
        .collect()
}

/// Parses the function mini-language.
pub fn parse_function_spec(spec: &str) -> Result<GAdditiveFunction> {
    let spec = spec.trim();
    if let Some(rest) = spec.strip_prefix("geom:") {
        let (rho_s, phi_s) = rest
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("geom spec needs RHO:PHI..., got {spec:?}")))?;
        let rho: f64 = rho_s
            .trim()
            .parse()
            .map_err(|e| Error::Parse(format!("geom rho {rho_s:?}: {e}")))?;
        return GAdditiveFunction::geom(rho, &parse_phi_list(phi_s)?);
    }
    if let Some(rest) = spec.strip_prefix("poly:") {
        let (beta_s, phi_s) = rest
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("poly spec needs BETA:PHI..., got {spec:?}")))?;
        let beta: f64 = beta_s
            .trim()
            .parse()
            .map_err(|e| Error::Parse(format!("poly beta {beta_s:?}: {e}")))?;
        return GAdditiveFunction::poly(beta, &parse_phi_list(phi_s)?);
    }
    if let Some(path) = spec.strip_prefix("table:") {
        return GAdditiveFunction::table_from_path(std::path::Path::new(path.trim()));
    }
    if let Some(rest) = spec.strip_prefix("sum:") {
        let (lhs, rhs) = split_sum(rest)?;
        return Ok(GAdditiveFunction::sum(
            parse_function_spec(lhs)?,
            parse_function_spec(rhs)?,
        ));
    }
    Err(Error::Parse(format!(
        "unknown function spec {spec:?} (expected geom:, poly:, table:, sum:)"
    )))
}

/// Splits `(SPEC)+(SPEC)` at the top-level `+`, honoring nested parentheses.
fn split_sum(s: &str) -> Result<(&str, &str)> {
    let s = s.trim();
    if !s.starts_with('(') {
        return Err(Error::Parse(format!("sum spec must look like (A)+(B), got {s:?}")));
    }
    let mut depth = 0usize;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth = depth
                    .checked_sub(1)
                    .ok_or_else(|| Error::Parse("unbalanced parentheses in sum spec".into()))?;
                if depth == 0 {
                    let rest = s[i + 1..].trim_start();
                    let rhs = rest
                        .strip_prefix('+')
                        .ok_or_else(|| Error::Parse("sum spec missing '+'".into()))?
                        .trim();
                    let rhs = rhs
                        .strip_prefix('(')
                        .and_then(|r| r.strip_suffix(')'))
                        .ok_or_else(|| {
                            Error::Parse("second sum operand must be parenthesized".into())
                        })?;
                    return Ok((&s[1..i], rhs));
                }
            }
            _ => {}
        }
    }
    Err(Error::Parse("unbalanced parentheses in sum spec".into()))
}
