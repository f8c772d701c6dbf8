//! Greedy digit codec and the block decomposition behind the transform
//! recurrences.
//!
//! Digits are stored least-significant-first; display and serialization put
//! the most significant digit first, matching the usual block notation.
//! A digit word is in greedy normal form exactly when every prefix sums
//! below the next base element:
//!
//! ```text
//! sum_{k < K} e_k G_k < G_K        for every K up to the top index + 1
//! ```
//!
//! which is also the condition this module uses as the admissibility
//! cross-check. The authoritative admissibility test is greedy-recode
//! equality.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::base::LinearRecurrenceBase;
use crate::{Error, Result};

/// A finite greedy digit word, least-significant-first. The empty word
/// represents zero; otherwise the top digit is nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitExpansion {
    digits: Vec<u32>,
}

impl DigitExpansion {
    /// Wraps raw digits (least-significant-first), trimming top zeros.
    pub fn from_lsf(mut digits: Vec<u32>) -> Self {
        while digits.last() == Some(&0) {
            digits.pop();
        }
        Self { digits }
    }

    /// Digits least-significant-first.
    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    /// Digit at level `k` (0 beyond the stored word).
    pub fn digit(&self, k: usize) -> u32 {
        self.digits.get(k).copied().unwrap_or(0)
    }

    /// Index of the most significant digit, `None` for zero.
    pub fn top_level(&self) -> Option<usize> {
        self.digits.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.digits.is_empty()
    }

    /// Digits most-significant-first, for display.
    pub fn msf(&self) -> Vec<u32> {
        self.digits.iter().rev().copied().collect()
    }
}

impl std::fmt::Display for DigitExpansion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.digits.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.digits.iter().rev().map(|d| d.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Greedy expansion of `n` in the given base.
///
/// Fails with a capacity error (naming the level that would suffice) when
/// `n >= G_max_level`.
pub fn greedy_expand(base: &LinearRecurrenceBase, n: &BigUint) -> Result<DigitExpansion> {
    let top = base.max_level();
    if n >= base.g(top)? {
        return Err(Error::Capacity {
            required_level: base.required_level(n),
            have_level: top,
        });
    }
    if n.is_zero() {
        return Ok(DigitExpansion { digits: Vec::new() });
    }
    // Largest level with G_k <= n.
    let mut k = match base.g_all().partition_point(|g| g <= n) {
        0 => unreachable!("n >= 1 = G_0"),
        p => p - 1,
    };
    let mut digits = vec![0u32; k + 1];
    let mut rest = n.clone();
    loop {
        let gk = base.g(k)?;
        if gk <= &rest {
            let q = &rest / gk;
            rest -= &q * gk;
            digits[k] = q.try_into().map_err(|_| {
                Error::IndexRange(format!("digit at level {k} exceeds u32"))
            })?;
        }
        if k == 0 {
            break;
        }
        k -= 1;
    }
    Ok(DigitExpansion { digits })
}

/// Exact value `sum_k e_k G_k` of a digit word (admissible or not).
pub fn decode(base: &LinearRecurrenceBase, digits: &DigitExpansion) -> Result<BigUint> {
    let mut v = BigUint::zero();
    for (k, &e) in digits.digits.iter().enumerate() {
        if e > 0 {
            v += base.g(k)? * BigUint::from(e);
        }
    }
    Ok(v)
}

/// Authoritative admissibility: the word survives a decode / greedy-recode
/// round trip unchanged.
pub fn is_admissible(base: &LinearRecurrenceBase, digits: &DigitExpansion) -> Result<bool> {
    let trimmed = DigitExpansion::from_lsf(digits.digits.clone());
    let value = decode(base, &trimmed)?;
    Ok(greedy_expand(base, &value)? == trimmed)
}

/// Prefix-sum uniqueness condition: `sum_{k<K} e_k G_k < G_K` for every
/// `K <= top + 1`. Equivalent to greedy normal form; kept as an independent
/// diagnostic route.
pub fn prefix_condition_holds(
    base: &LinearRecurrenceBase,
    digits: &DigitExpansion,
) -> Result<bool> {
    let trimmed = DigitExpansion::from_lsf(digits.digits.clone());
    let Some(top) = trimmed.top_level() else {
        return Ok(true);
    };
    let mut prefix = BigUint::zero();
    for k in 0..=top {
        if trimmed.digit(k) > 0 {
            prefix += base.g(k)? * BigUint::from(trimmed.digit(k));
        }
        if &prefix >= base.g(k + 1)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `theta_{q,l} = sum_{j<l} a_j G_{q-j}`: the value whose greedy expansion
/// is the digit block `(a_0, ..., a_{l-1})` at positions `q, ..., q-l+1`
/// with zeros below.
pub fn theta(base: &LinearRecurrenceBase, q: usize, ell: usize) -> Result<BigUint> {
    if ell >= base.order() && ell > 0 {
        return Err(Error::IndexRange(format!(
            "theta block length {ell} must be < order {}",
            base.order()
        )));
    }
    if ell > 0 && q + 1 < ell {
        return Err(Error::IndexRange(format!(
            "theta({q},{ell}) would need negative levels"
        )));
    }
    let a = base.coeffs().as_slice();
    let mut v = BigUint::zero();
    for j in 0..ell {
        v += base.g(q - j)? * BigUint::from(a[j]);
    }
    Ok(v)
}

/// Unique representation `u = theta_{n+d-1,l} + k G_{n+d-1-l} + v` of
/// `u < G_{n_level+d}`, with `0 <= l < d`, `0 <= k < a_l`, and
/// `0 <= v < G_{n+d-1-l}`. The triples `(l, k, v)` enumerate `[0, G_{n+d})`
/// bijectively.
pub fn block_decompose(
    base: &LinearRecurrenceBase,
    n_level: usize,
    u: &BigUint,
) -> Result<(usize, u32, BigUint)> {
    let d = base.order();
    let q = n_level + d - 1;
    if u >= base.g(n_level + d)? {
        return Err(Error::IndexRange(format!(
            "block_decompose: u >= G_{}",
            n_level + d
        )));
    }
    // The intervals [theta_{q,l}, theta_{q,l+1}) partition [0, G_{n+d});
    // intervals with a_l = 0 are empty and get skipped automatically.
    let a = base.coeffs().as_slice();
    let mut lo = BigUint::zero();
    for (ell, &al) in a.iter().enumerate() {
        let width = base.g(q - ell)? * BigUint::from(al);
        let hi = &lo + &width;
        if u < &hi {
            let off = u - &lo;
            let g_cell = base.g(q - ell)?;
            let k = &off / g_cell;
            let v = off - &k * g_cell;
            let k: u32 = k
                .try_into()
                .map_err(|_| Error::IndexRange("block digit exceeds u32".into()))?;
            return Ok((ell, k, v));
        }
        lo = hi;
    }
    unreachable!("u < G_{{n+d}} = theta_{{q,d}} guarantees a block")
}
