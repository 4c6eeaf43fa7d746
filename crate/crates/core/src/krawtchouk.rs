//! Exact Krawtchouk sums `S_j = sum_i B_i K_j(i; n)`.
//!
//! `K_j(i; n)` is evaluated by the three-term recurrence
//! `(j+1) K_{j+1} = (n - 2i) K_j - (n - j + 1) K_{j-1}` for every distinct
//! weight `i` in lock-step. A checked `i128` pass runs first; any overflow
//! restarts the whole evaluation with arbitrary-precision integers, so the
//! result is exact either way.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{internal, Result};

/// When to stop increasing `j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Stop {
    /// Evaluate every `j` in `0..=jmax`.
    All,
    /// Stop at the first `j >= 1` with a nonzero sum.
    FirstNonzero,
}

/// Returns `S_0, S_1, ...` up to `jmax` (or the first nonzero `j >= 1`).
/// `hist` holds `(weight, count)` pairs with `weight <= n`.
pub(crate) fn sums(n: u64, hist: &[(u64, u64)], jmax: u64, stop: Stop) -> Result<Vec<BigInt>> {
    match sums_i128(n, hist, jmax, stop)? {
        Some(v) => Ok(v.into_iter().map(BigInt::from).collect()),
        None => sums_big(n, hist, jmax, stop),
    }
}

fn sums_i128(n: u64, hist: &[(u64, u64)], jmax: u64, stop: Stop) -> Result<Option<Vec<i128>>> {
    let n = i128::from(n);
    let mut prev = vec![0i128; hist.len()];
    let mut cur = vec![1i128; hist.len()];
    let mut out = Vec::with_capacity(jmax as usize + 1);
    let mut s0 = 0i128;
    for &(_, c) in hist {
        s0 += i128::from(c);
    }
    out.push(s0);
    for j in 0..jmax {
        let j = i128::from(j);
        let mut s = 0i128;
        for (k, &(w, c)) in hist.iter().enumerate() {
            let lin = n - 2 * i128::from(w);
            let Some(a) = lin.checked_mul(cur[k]) else {
                return Ok(None);
            };
            let Some(b) = (n - j + 1).checked_mul(prev[k]) else {
                return Ok(None);
            };
            let Some(num) = a.checked_sub(b) else {
                return Ok(None);
            };
            if num % (j + 1) != 0 {
                return Err(internal!(
                    "Krawtchouk recurrence not integral at j={}, i={w}",
                    j + 1
                ));
            }
            let next = num / (j + 1);
            prev[k] = cur[k];
            cur[k] = next;
            let Some(term) = i128::from(c).checked_mul(next) else {
                return Ok(None);
            };
            let Some(acc) = s.checked_add(term) else {
                return Ok(None);
            };
            s = acc;
        }
        out.push(s);
        if stop == Stop::FirstNonzero && s != 0 {
            break;
        }
    }
    Ok(Some(out))
}

fn sums_big(n: u64, hist: &[(u64, u64)], jmax: u64, stop: Stop) -> Result<Vec<BigInt>> {
    let nb = BigInt::from(n);
    let mut prev = vec![BigInt::zero(); hist.len()];
    let mut cur = vec![BigInt::from(1); hist.len()];
    let mut out = Vec::with_capacity(jmax as usize + 1);
    out.push(hist.iter().map(|&(_, c)| BigInt::from(c)).sum());
    for j in 0..jmax {
        let jb = BigInt::from(j);
        let denom = BigInt::from(j + 1);
        let back = &nb - &jb + 1;
        let mut s = BigInt::zero();
        for (k, &(w, c)) in hist.iter().enumerate() {
            let lin = &nb - BigInt::from(2 * w);
            let num = lin * &cur[k] - &back * &prev[k];
            let next = &num / &denom;
            if &next * &denom != num {
                return Err(internal!(
                    "Krawtchouk recurrence not integral at j={}, i={w}",
                    j + 1
                ));
            }
            s += BigInt::from(c) * &next;
            prev[k] = std::mem::replace(&mut cur[k], next);
        }
        let nonzero = !s.is_zero();
        out.push(s);
        if stop == Stop::FirstNonzero && nonzero {
            break;
        }
    }
    Ok(out)
}

/// `K_j(i; n)` by the defining sum `sum_s (-1)^s C(i, s) C(n - i, j - s)`.
/// Independent of the recurrence; used to cross-check it.
pub fn krawtchouk_direct(n: u64, j: u64, i: u64) -> BigInt {
    let mut total = BigInt::zero();
    for s in 0..=j.min(i) {
        if j - s > n - i {
            continue;
        }
        let term = binomial(i, s) * binomial(n - i, j - s);
        if s % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

pub(crate) fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::from(1);
    for t in 0..k {
        acc = acc * BigInt::from(n - t) / BigInt::from(t + 1);
    }
    acc
}

pub(crate) fn is_negative(v: &BigInt) -> bool {
    v.is_negative()
}
