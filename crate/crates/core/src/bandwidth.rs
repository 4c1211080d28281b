//! Repair-bandwidth accounting for layered codes.
//!
//! Closed forms for the per-helper download, and [`beta_oracle`], which gets
//! the same numbers by walking every block of an explicit design. All values
//! are exact rationals in units of one inner-code symbol.
//!
//! Three accounting modes are tracked for each repair:
//!
//! * `Msmr`: a group with `s` missing symbols and `h` helpers among its
//!   members downloads `s / (h - (r - m) + s)` symbols from each of them,
//!   which is the optimal multi-erasure repair bandwidth of an MSR inner code.
//! * `Naive`: the group downloads `r - m` whole symbols once (from its
//!   lowest-numbered helpers) and decodes, which is what the field-level
//!   repair in [`crate::layered`] actually does.
//! * `LayeredNaive`: every missing symbol is rebuilt on its own from `r - m`
//!   whole symbols, with no sharing between simultaneous failures.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::design::{BlockDesign, NodeId};
use crate::error::{Error, Result};
use crate::exact::{binomial, exact_div, int, rat, Rational, RationalJson};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Accounting {
    Naive,
    Msmr,
    LayeredNaive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BandwidthReport {
    pub accounting: Accounting,
    pub per_helper: BTreeMap<NodeId, Rational>,
    pub total: Rational,
}

impl BandwidthReport {
    pub fn zero(accounting: Accounting, helpers: &BTreeSet<NodeId>) -> Self {
        BandwidthReport {
            accounting,
            per_helper: helpers.iter().map(|&h| (h, Rational::zero())).collect(),
            total: Rational::zero(),
        }
    }

    fn credit(&mut self, helper: NodeId, amount: Rational) {
        self.total += &amount;
        *self.per_helper.entry(helper).or_insert_with(Rational::zero) += amount;
    }

    /// The common per-helper value if every helper downloads the same amount.
    pub fn uniform_per_helper(&self) -> Option<&Rational> {
        let mut it = self.per_helper.values();
        let first = it.next()?;
        it.all(|v| v == first).then_some(first)
    }

    /// Total divided by the number of helpers.
    pub fn mean_per_helper(&self) -> Rational {
        if self.per_helper.is_empty() {
            return Rational::zero();
        }
        &self.total / int(self.per_helper.len() as i64)
    }

    pub fn to_json(&self) -> ReportJson {
        ReportJson {
            accounting: self.accounting,
            total: (&self.total).into(),
            per_helper: self
                .per_helper
                .iter()
                .map(|(&h, v)| (h.to_string(), v.into()))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportJson {
    pub accounting: Accounting,
    pub total: RationalJson,
    pub per_helper: BTreeMap<String, RationalJson>,
}

/// Which closed form, if any, covers a design / failure-count combination.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Coverage {
    /// `t = r`: the double-sum formula applies.
    CompleteDesign,
    /// `t < r`, two failures: per-helper download equals lambda2.
    SteinerPairs,
    /// No closed form claims this case; the oracle value stands alone.
    Unvalidated,
}

pub fn coverage(design: &BlockDesign, failures: usize) -> Coverage {
    if design.t() == design.r() {
        Coverage::CompleteDesign
    } else if failures == 2 {
        Coverage::SteinerPairs
    } else {
        Coverage::Unvalidated
    }
}

/// Reports for all three accounting modes of one repair.
#[derive(Debug, Clone, PartialEq)]
pub struct RepairAccounting {
    pub msmr: BandwidthReport,
    pub naive: BandwidthReport,
    pub layered_naive: BandwidthReport,
    pub coverage: Coverage,
}

impl RepairAccounting {
    pub fn get(&self, accounting: Accounting) -> &BandwidthReport {
        match accounting {
            Accounting::Msmr => &self.msmr,
            Accounting::Naive => &self.naive,
            Accounting::LayeredNaive => &self.layered_naive,
        }
    }
}

pub(crate) fn check_repair_sets(
    n: u32,
    failed: &BTreeSet<NodeId>,
    helpers: &BTreeSet<NodeId>,
) -> Result<()> {
    if let Some(x) = failed.iter().chain(helpers).find(|&&x| x < 1 || x > n) {
        return Err(Error::params(format!("node {x} outside [1, {n}]")));
    }
    if let Some(x) = failed.intersection(helpers).next() {
        return Err(Error::params(format!(
            "node {x} is both failed and a helper"
        )));
    }
    Ok(())
}

/// Per-block walk producing all three accounting modes. `dimension` is the
/// inner-code dimension `r - m`.
pub(crate) fn account_blocks(
    design: &BlockDesign,
    dimension: usize,
    failed: &BTreeSet<NodeId>,
    helpers: &BTreeSet<NodeId>,
) -> Result<RepairAccounting> {
    check_repair_sets(design.n(), failed, helpers)?;
    let mut msmr = BandwidthReport::zero(Accounting::Msmr, helpers);
    let mut naive = BandwidthReport::zero(Accounting::Naive, helpers);
    let mut layered = BandwidthReport::zero(Accounting::LayeredNaive, helpers);
    for (j, block) in design.blocks().iter().enumerate() {
        let s = block.iter().filter(|x| failed.contains(x)).count();
        if s == 0 {
            continue;
        }
        let group_helpers: Vec<NodeId> =
            block.iter().copied().filter(|x| helpers.contains(x)).collect();
        let h = group_helpers.len();
        if h < dimension {
            return Err(Error::params(format!(
                "block {} has {h} helpers, fewer than its dimension {dimension}",
                j + 1
            )));
        }
        let share = rat(s as i64, (h - dimension + s) as i64);
        for &x in &group_helpers {
            msmr.credit(x, share.clone());
        }
        for &x in &group_helpers[..dimension] {
            naive.credit(x, int(1));
            layered.credit(x, int(s as i64));
        }
    }
    Ok(RepairAccounting {
        msmr,
        naive,
        layered_naive: layered,
        coverage: coverage(design, failed.len()),
    })
}

/// Bandwidth of repairing `failed` from `helpers` in a layered code over
/// `design` with erasure parameter `m`, obtained by enumerating blocks.
pub fn beta_oracle(
    design: &BlockDesign,
    m: u32,
    e: usize,
    d: usize,
    failed: &BTreeSet<NodeId>,
    helpers: &BTreeSet<NodeId>,
) -> Result<RepairAccounting> {
    if failed.len() != e || helpers.len() != d {
        return Err(Error::params(format!(
            "expected {e} failed and {d} helpers, got {} and {}",
            failed.len(),
            helpers.len()
        )));
    }
    if m >= design.r() {
        return Err(Error::params(format!(
            "m = {m} must be below the block size {}",
            design.r()
        )));
    }
    account_blocks(design, (design.r() - m) as usize, failed, helpers)
}

/// Per-helper MSMR-accounted download for `t = r` layered codes:
///
/// `sum_{s=1}^{e} C(e,s) sum_{p} C(d-1, r-p-1) C(n-d-e, p-s) s / (m-p+s)`
/// with `p` from `max(s, r-d)` to `min(n-d-e+s, r-1)`.
///
/// Accepts `n-m-e+1 <= d <= n-e`, the range where every `m-p+s` is positive;
/// repair through group codes alone is guaranteed for `d >= n-m`.
pub fn beta_formula(n: u32, e: u32, m: u32, r: u32, d: u32) -> Result<Rational> {
    if !(1 <= e && e <= m && m < r && r <= n) {
        return Err(Error::params(format!(
            "need 1 <= e <= m < r <= n, got n={n}, e={e}, m={m}, r={r}"
        )));
    }
    if d + e > n || d + m + e < n + 1 {
        return Err(Error::params(format!(
            "need n-m-e+1 <= d <= n-e, got d={d} for n={n}, m={m}, e={e}"
        )));
    }
    let (n, e, m, r, d) = (n as i64, e as i64, m as i64, r as i64, d as i64);
    let mut total = Rational::zero();
    for s in 1..=e {
        let outer = binomial(e, s);
        let lo = s.max(r - d);
        let hi = (n - d - e + s).min(r - 1);
        for p in lo..=hi {
            let count = &outer * binomial(d - 1, r - p - 1) * binomial(n - d - e, p - s);
            if count.is_zero() {
                continue;
            }
            total += Rational::from_integer(count) * rat(s, m - p + s);
        }
    }
    Ok(total)
}

/// Closed form of the per-helper download at `d = k`, `n = k + e`, `m = e`:
/// `C(k + e - 2, r - 2)`.
pub fn beta_closed_form_d_eq_k(k: u32, e: u32, r: u32) -> Result<BigInt> {
    if k < 1 || e < 1 || r < e + 1 || r > k + e {
        return Err(Error::params(format!(
            "need k, e >= 1 and e+1 <= r <= k+e, got k={k}, e={e}, r={r}"
        )));
    }
    Ok(binomial((k + e - 2) as i64, r as i64 - 2))
}

/// Code parameters of a two-failure layered code over a Steiner system.
#[derive(Debug, Clone, PartialEq)]
pub struct SteinerPoint {
    pub f: u64,
    pub alpha: u64,
    pub beta: u64,
    pub alpha_bar: Rational,
    pub beta_bar: Rational,
}

/// `(F, alpha, beta)` of the layered code over `S(t, r, n)` with `m = e = 2`
/// and `d = k = n - 2`.
pub fn beta_steiner_e2(n: u32, r: u32, t: u32) -> Result<SteinerPoint> {
    if !(2 <= t && t <= r && r <= n && r > 2) {
        return Err(Error::params(format!(
            "need 2 <= t <= r <= n and r > 2, got n={n}, r={r}, t={t}"
        )));
    }
    let (n, r, t) = (n as i64, r as i64, t as i64);
    let ratio = |a: BigInt, b: BigInt, what: &str| -> Result<u64> {
        exact_div(&a, &b)
            .and_then(|q| q.to_u64())
            .ok_or_else(|| Error::params(format!("{what} = {a}/{b} is not an integer")))
    };
    let blocks = ratio(binomial(n, t), binomial(r, t), "N")?;
    let alpha = ratio(binomial(n - 1, t - 1), binomial(r - 1, t - 1), "alpha")?;
    let beta = ratio(binomial(n - 2, t - 2), binomial(r - 2, t - 2), "beta")?;
    let f = (r as u64 - 2) * blocks;
    Ok(SteinerPoint {
        f,
        alpha,
        beta,
        alpha_bar: rat(r, n * (r - 2)),
        beta_bar: rat(r * (r - 1), n * (n - 1) * (r - 2)),
    })
}
