//! Storage/bandwidth tradeoff: functional-repair bounds, achievable points and
//! the corners of their space-sharing region.
//!
//! Coordinates are normalized, `alpha_bar = alpha / F` and
//! `beta_bar = beta / F`, and always exact. The corner set of the
//! `(k+e, k, k, e)` system is available in closed form through
//! [`corner_points`] and independently through [`hull_oracle`].

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use crate::bandwidth::{account_blocks, beta_formula, Accounting};
use crate::design::{BlockDesign, NodeId};
use crate::error::{Error, Result};
use crate::exact::{binomial, ceil, floor_shifted_sqrt_div, int, rat, to_f64, Rational};
use crate::precoded::rho;

/// Where an operating point comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PointLabel {
    Msmr,
    Mbcr,
    Construction1 { r: u32 },
    Construction2 { m: u32, r: u32 },
    Steiner { t: u32, r: u32 },
}

impl PointLabel {
    pub fn name(&self) -> &'static str {
        match self {
            PointLabel::Msmr => "MSMR",
            PointLabel::Mbcr => "MBCR",
            PointLabel::Construction1 { .. } => "construction1",
            PointLabel::Construction2 { .. } => "construction2",
            PointLabel::Steiner { .. } => "steiner",
        }
    }

    pub fn r(&self) -> Option<u32> {
        match *self {
            PointLabel::Construction1 { r }
            | PointLabel::Construction2 { r, .. }
            | PointLabel::Steiner { r, .. } => Some(r),
            _ => None,
        }
    }

    pub fn m(&self) -> Option<u32> {
        match *self {
            PointLabel::Construction2 { m, .. } => Some(m),
            _ => None,
        }
    }
}

impl fmt::Display for PointLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            PointLabel::Construction1 { r } => write!(f, "construction1(r={r})"),
            PointLabel::Construction2 { m, r } => write!(f, "construction2(m={m},r={r})"),
            PointLabel::Steiner { t, r } => write!(f, "steiner(t={t},r={r})"),
            other => f.write_str(other.name()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TradeoffPoint {
    pub alpha_bar: Rational,
    pub beta_bar: Rational,
    pub label: PointLabel,
}

impl TradeoffPoint {
    pub fn new(alpha_bar: Rational, beta_bar: Rational, label: PointLabel) -> Self {
        TradeoffPoint {
            alpha_bar,
            beta_bar,
            label,
        }
    }

    /// Both coordinates positive and `alpha_bar <= 1`.
    pub fn is_valid(&self) -> bool {
        self.alpha_bar.is_positive() && self.beta_bar.is_positive() && self.alpha_bar <= int(1)
    }

    pub fn same_coords(&self, other: &TradeoffPoint) -> bool {
        self.alpha_bar == other.alpha_bar && self.beta_bar == other.beta_bar
    }
}

/// Parameters of the functional-repair bound of a `(k, d, e)` system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundParams {
    pub k: u32,
    pub d: u32,
    pub e: u32,
    /// `ceil(k / e) - 1`, the number of linear bounds.
    pub q_bound: u32,
    /// `k - q_bound * e`, in `1..=e`.
    pub t_rem: u32,
}

impl BoundParams {
    pub fn new(k: u32, d: u32, e: u32) -> Result<Self> {
        if e == 0 || e >= k {
            return Err(Error::params(format!(
                "need 1 <= e < k, got k={k}, e={e} (for e >= k the tradeoff is a single point)"
            )));
        }
        if d < k {
            return Err(Error::params(format!("need d >= k, got k={k}, d={d}")));
        }
        let q_bound = k.div_ceil(e) - 1;
        Ok(BoundParams {
            k,
            d,
            e,
            q_bound,
            t_rem: k - q_bound * e,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundCheck {
    pub feasible: bool,
    /// `lhs - 1` of bound `p`, for `p = 0..q_bound`.
    pub slack: Vec<Rational>,
}

/// Evaluate the `q` linear functional-repair bounds
/// `(t + p e) a + sum_{i=p}^{q-1} (d - t - i e) b >= 1` at a point.
pub fn functional_bound_check(point: &TradeoffPoint, bound: &BoundParams) -> BoundCheck {
    let (d, e, t, q) = (
        bound.d as i64,
        bound.e as i64,
        bound.t_rem as i64,
        bound.q_bound as i64,
    );
    let slack: Vec<Rational> = (0..q)
        .map(|p| {
            let beta_coeff: i64 = (p..q).map(|i| d - t - i * e).sum();
            &point.alpha_bar * int(t + p * e) + &point.beta_bar * int(beta_coeff) - int(1)
        })
        .collect();
    BoundCheck {
        feasible: slack.iter().all(|s| !s.is_negative()),
        slack,
    }
}

/// MSMR and MBCR points of a `(k, d, e)` system.
pub fn extreme_points(k: u32, d: u32, e: u32) -> Result<(TradeoffPoint, TradeoffPoint)> {
    BoundParams::new(k, d, e)?;
    let (k, d, e) = (k as i64, d as i64, e as i64);
    let msmr = TradeoffPoint::new(rat(1, k), rat(e, k * (d - k + e)), PointLabel::Msmr);
    let den = k * (2 * d - k + e);
    let mbcr = TradeoffPoint::new(rat(2 * d + e - 1, den), rat(2 * e, den), PointLabel::Mbcr);
    Ok((msmr, mbcr))
}

/// A layered-code point together with its unnormalized parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct CodePoint {
    pub point: TradeoffPoint,
    pub f: BigInt,
    pub alpha: BigInt,
    pub beta: Rational,
}

/// Points of the `t = r`, `m = e` layered codes for the `(k+e, k, k, e)`
/// system, `r = e+1 ..= k+e`, in increasing `r`.
pub fn achievable_points_c1(k: u32, e: u32) -> Result<Vec<CodePoint>> {
    BoundParams::new(k, k, e)?;
    let (k, e) = (k as i64, e as i64);
    let n = k + e;
    Ok((e + 1..=n)
        .map(|r| {
            let point = TradeoffPoint::new(
                rat(r, n * (r - e)),
                rat(r * (r - 1), n * (n - 1) * (r - e)),
                PointLabel::Construction1 { r: r as u32 },
            );
            CodePoint {
                point,
                f: binomial(n, r) * (r - e),
                alpha: binomial(n - 1, r - 1),
                beta: Rational::from_integer(binomial(n - 2, r - 2)),
            }
        })
        .collect())
}

/// Slope of the segment from point `r` to point `r + 1` of
/// [`achievable_points_c1`]: `-r (r - 2e + 1) / (e (k + e - 1))`.
pub fn slope_c1(r: u32, k: u32, e: u32) -> Result<Rational> {
    if e == 0 || r < e + 1 || r >= k + e {
        return Err(Error::params(format!(
            "need e+1 <= r < k+e, got r={r}, k={k}, e={e}"
        )));
    }
    let (r, k, e) = (r as i64, k as i64, e as i64);
    Ok(rat(-r * (r - 2 * e + 1), e * (k + e - 1)))
}

/// `floor((sqrt(8 e (e-1) - 1) - 1) / 2)`: the largest `p` for which the point
/// `r = 2e + p` can stop being a corner as `k` grows.
pub fn p_max(e: u32) -> Result<u32> {
    if e < 2 {
        return Err(Error::params(format!("p_max needs e >= 2, got {e}")));
    }
    let e = e as i128;
    Ok(floor_shifted_sqrt_div(-1, 8 * e * (e - 1) - 1, 2) as u32)
}

/// Smallest `k` from which the point `r = 2e + p` (with `p <= p_max(e)`) is
/// beaten by space-sharing between point `r + 1` and MBCR.
pub fn k_th(e: u32, p: u32) -> Result<i64> {
    let pm = p_max(e)?;
    if p > pm {
        return Err(Error::params(format!(
            "k_th needs p <= p_max({e}) = {pm}, got {p}"
        )));
    }
    let (e, p) = (e as i64, p as i64);
    let tri = |x: i64| x * (x - 1) / 2;
    let num = (1 - e) * (tri(p + 1) + 2 * tri(e + 1) + e * p);
    let den = tri(p + 1) - 2 * tri(e);
    if den == 0 {
        return Err(Error::Invariant(format!("k_th denominator vanished at e={e}, p={p}")));
    }
    ceil(&rat(num, den))
        .to_i64()
        .ok_or_else(|| Error::Invariant("k_th out of range".into()))
}

/// `p*`: the smallest `p` such that `r = 2e + p` is a corner, from the
/// positive root of `N2(p)`.
pub fn p_star(k: u32, e: u32) -> Result<u32> {
    BoundParams::new(k, k, e)?;
    let (k, e) = (k as i128, e as i128);
    let lin = 2 * e * e - e + k - 1;
    let delta = lin * lin + 8 * (k + e - 1) * e * (e - 1) * (k - e - 1);
    let a = e - k - 2 * e * e + 1;
    Ok((floor_shifted_sqrt_div(a, delta, 2 * (e + k - 1)) + 1) as u32)
}

/// `p*` as `1 + max { p <= p_max(e) : k >= k_th(e, p) }`, for `e >= 2`.
pub fn p_star_max_form(k: u32, e: u32) -> Result<u32> {
    BoundParams::new(k, k, e)?;
    let pm = p_max(e)?;
    let mut best = None;
    for p in 0..=pm {
        if k as i64 >= k_th(e, p)? {
            best = Some(p);
        }
    }
    best.map(|p| p + 1)
        .ok_or_else(|| Error::Invariant(format!("no p satisfies k >= k_th at k={k}, e={e}")))
}

/// `N1` of the space-sharing gap, as a polynomial in `k`.
pub fn n1(k: i64, e: i64, p: i64) -> i64 {
    k * (-2 * e * e + 2 * e + p * p + p) - p * (-2 * e * e + e + 1) + 2 * e * (e * e - 1)
        + p * p * (e - 1)
}

/// `N2` of the space-sharing gap, as a polynomial in `p`.
pub fn n2(k: i64, e: i64, p: i64) -> i64 {
    (k + e - 1) * p * p + p * (2 * e * e + k - e - 1) + 2 * e * (e - 1) * (e + 1 - k)
}

/// Common positive denominator of the space-sharing gap.
pub fn gap_denominator(k: i64, e: i64, p: i64) -> i64 {
    (e + k) * (e + p) * (e + k - 1) * (e * e + p * e + k - p + k * p - 1)
}

/// `beta'_r - beta_r` for `r = 2e + p`: bandwidth of space-sharing between
/// MBCR and point `r + 1`, taken at the storage of point `r`, minus the
/// bandwidth of point `r`. Computed from the coordinates directly.
pub fn space_sharing_gap(k: u32, e: u32, p: u32) -> Result<Rational> {
    let r = 2 * e + p;
    if r < e + 1 || r + 1 > k + e {
        return Err(Error::params(format!(
            "need r = 2e+p and r+1 within e+1..=k+e, got k={k}, e={e}, p={p}"
        )));
    }
    let pts = achievable_points_c1(k, e)?;
    let (_, mbcr) = extreme_points(k, k, e)?;
    let at = |r: u32| &pts[(r - e - 1) as usize].point;
    let (here, next) = (at(r), at(r + 1));
    let slope = (&mbcr.beta_bar - &next.beta_bar) / (&mbcr.alpha_bar - &next.alpha_bar);
    let shared = &next.beta_bar + (&here.alpha_bar - &next.alpha_bar) * slope;
    Ok(shared - &here.beta_bar)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Region {
    /// Corners in decreasing `alpha_bar`; MBCR first.
    pub corner_points: Vec<TradeoffPoint>,
    pub p_star: u32,
    pub n_corners: u32,
}

impl Region {
    /// Strict lower convexity: every interior corner lies strictly below the
    /// chord of its neighbours.
    pub fn is_strictly_convex(&self) -> bool {
        self.corner_points
            .windows(3)
            .all(|w| cross(&w[2], &w[1], &w[0]).is_positive())
    }
}

/// Closed-form corners of the space-sharing region of the `(k+e, k, k, e)`
/// system: MBCR plus points `r = 2e + p` for `p* <= p <= k - e`.
pub fn corner_points(k: u32, e: u32) -> Result<Region> {
    let ps = p_star(k, e)?;
    let pts = achievable_points_c1(k, e)?;
    let (_, mbcr) = extreme_points(k, k, e)?;
    let mut corners = vec![mbcr];
    for p in ps..=k - e {
        let r = 2 * e + p;
        corners.push(pts[(r - e - 1) as usize].point.clone());
    }
    let n_corners = k - e + 2 - ps;
    if corners.len() != n_corners as usize {
        return Err(Error::Invariant(format!(
            "{} corners listed, count formula gives {n_corners}",
            corners.len()
        )));
    }
    Ok(Region {
        corner_points: corners,
        p_star: ps,
        n_corners,
    })
}

/// (b - a) x (c - a) in the (alpha_bar, beta_bar) plane.
fn cross(a: &TradeoffPoint, b: &TradeoffPoint, c: &TradeoffPoint) -> Rational {
    (&b.alpha_bar - &a.alpha_bar) * (&c.beta_bar - &a.beta_bar)
        - (&b.beta_bar - &a.beta_bar) * (&c.alpha_bar - &a.alpha_bar)
}

fn by_coords(a: &TradeoffPoint, b: &TradeoffPoint) -> Ordering {
    a.alpha_bar
        .cmp(&b.alpha_bar)
        .then_with(|| a.beta_bar.cmp(&b.beta_bar))
}

/// Lower-left convex hull of a point set, in decreasing `alpha_bar`.
///
/// Points dominated in both coordinates are dropped first, then a monotone
/// chain keeps only strict turns, so points lying exactly on a hull segment
/// are not reported. Duplicated coordinates keep their first occurrence.
pub fn hull_oracle(points: &[TradeoffPoint]) -> Vec<TradeoffPoint> {
    let mut sorted: Vec<&TradeoffPoint> = Vec::with_capacity(points.len());
    for p in points {
        if !sorted.iter().any(|q| q.same_coords(p)) {
            sorted.push(p);
        }
    }
    sorted.sort_by(|a, b| by_coords(a, b));
    let front: Vec<&TradeoffPoint> = sorted
        .iter()
        .copied()
        .filter(|p| {
            !sorted.iter().any(|q| {
                !q.same_coords(p) && q.alpha_bar <= p.alpha_bar && q.beta_bar <= p.beta_bar
            })
        })
        .collect();
    let mut hull: Vec<&TradeoffPoint> = Vec::with_capacity(front.len());
    for p in front {
        while hull.len() >= 2 && !cross(hull[hull.len() - 2], hull[hull.len() - 1], p).is_positive()
        {
            hull.pop();
        }
        hull.push(p);
    }
    hull.into_iter().rev().cloned().collect()
}

/// Layered-code points with `t = r` for a general `(n, k = n - m, d, e)`
/// system, `r = m+1 ..= n`.
pub fn achievable_points_layered(n: u32, d: u32, e: u32, m: u32) -> Result<Vec<CodePoint>> {
    (m + 1..=n)
        .map(|r| {
            let f = binomial(n as i64, r as i64) * (r - m);
            let alpha = binomial(n as i64 - 1, r as i64 - 1);
            let beta = beta_formula(n, e, m, r, d)?;
            Ok(normalized(f, alpha, beta, PointLabel::Construction1 { r }))
        })
        .collect()
}

fn normalized(f: BigInt, alpha: BigInt, beta: Rational, label: PointLabel) -> CodePoint {
    let fr = Rational::from_integer(f.clone());
    CodePoint {
        point: TradeoffPoint::new(
            Rational::from_integer(alpha.clone()) / &fr,
            &beta / &fr,
            label,
        ),
        f,
        alpha,
        beta,
    }
}

/// Points of the precoded construction for a general `(n, k, d, e)` system:
/// for each `e <= m <= n-k` and `m+1 <= r <= n`, `F = rho(n, k, m, r)`,
/// `alpha = C(n-1, r-1)` and the per-helper download of the layered code.
///
/// Values of `m` too small for the bandwidth formula at this `d`
/// (`d < n - m - e + 1`) are skipped.
pub fn achievable_points_general(n: u32, k: u32, d: u32, e: u32) -> Result<Vec<CodePoint>> {
    if !(1 <= e && 1 <= k && e + k <= n && k <= d && d + e <= n) {
        return Err(Error::params(format!(
            "need e >= 1, e <= n-k and k <= d <= n-e, got n={n}, k={k}, d={d}, e={e}"
        )));
    }
    let mut out = Vec::new();
    for m in e..=n - k {
        if d + m + e < n + 1 {
            continue;
        }
        for r in m + 1..=n {
            let f = BigInt::from(rho(n, k, m, r)?);
            let alpha = binomial(n as i64 - 1, r as i64 - 1);
            let beta = beta_formula(n, e, m, r, d)?;
            out.push(normalized(f, alpha, beta, PointLabel::Construction2 { m, r }));
        }
    }
    Ok(out)
}

/// Repair download of the `t = r` layered code of an `(n, k, d, e)` system
/// under one accounting mode, normalized by `d F`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModePoint {
    pub accounting: Accounting,
    pub r: u32,
    pub m: u32,
    pub alpha_bar: Rational,
    pub beta_bar: Rational,
}

/// MSMR-accounted and layered-naive curves over `r = m+1 ..= n` with
/// `m = n - k`, measured on the repair of nodes `1..=e` from the next `d`.
pub fn accounting_curves(n: u32, k: u32, d: u32, e: u32) -> Result<Vec<ModePoint>> {
    if !(1 <= e && 1 <= k && k < n && e <= n - k && k <= d && d + e <= n) {
        return Err(Error::params(format!(
            "need 1 <= e <= n-k and k <= d <= n-e, got n={n}, k={k}, d={d}, e={e}"
        )));
    }
    let m = n - k;
    let failed: BTreeSet<NodeId> = (1..=e).collect();
    let helpers: BTreeSet<NodeId> = (e + 1..=e + d).collect();
    let mut out = Vec::new();
    for r in m + 1..=n {
        let design = BlockDesign::complete(n, r)?;
        let acc = account_blocks(&design, (r - m) as usize, &failed, &helpers)?;
        let f = Rational::from_integer(binomial(n as i64, r as i64) * (r - m));
        let alpha_bar = Rational::from_integer(binomial(n as i64 - 1, r as i64 - 1)) / &f;
        for mode in [Accounting::LayeredNaive, Accounting::Msmr] {
            out.push(ModePoint {
                accounting: mode,
                r,
                m,
                alpha_bar: alpha_bar.clone(),
                beta_bar: &acc.get(mode).total / (&f * int(d as i64)),
            });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct ModeRow {
    pub mode: Accounting,
    pub r: u32,
    pub m: u32,
    pub alpha_bar_num: String,
    pub alpha_bar_den: String,
    pub beta_bar_num: String,
    pub beta_bar_den: String,
    pub alpha_bar_float: f64,
    pub beta_bar_float: f64,
}

impl From<&ModePoint> for ModeRow {
    fn from(p: &ModePoint) -> Self {
        ModeRow {
            mode: p.accounting,
            r: p.r,
            m: p.m,
            alpha_bar_num: p.alpha_bar.numer().to_string(),
            alpha_bar_den: p.alpha_bar.denom().to_string(),
            beta_bar_num: p.beta_bar.numer().to_string(),
            beta_bar_den: p.beta_bar.denom().to_string(),
            alpha_bar_float: to_f64(&p.alpha_bar),
            beta_bar_float: to_f64(&p.beta_bar),
        }
    }
}

pub fn write_rows<W: std::io::Write, R: Serialize>(out: W, rows: &[R]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

/// One CSV row of a point listing.
#[derive(Debug, Clone, Serialize)]
pub struct PointRow {
    pub label: String,
    pub r: Option<u32>,
    pub m: Option<u32>,
    pub alpha_bar_num: String,
    pub alpha_bar_den: String,
    pub beta_bar_num: String,
    pub beta_bar_den: String,
    pub alpha_bar_float: f64,
    pub beta_bar_float: f64,
    pub is_corner: bool,
}

impl PointRow {
    pub fn new(point: &TradeoffPoint, is_corner: bool) -> Self {
        PointRow {
            label: point.label.name().to_string(),
            r: point.label.r(),
            m: point.label.m(),
            alpha_bar_num: point.alpha_bar.numer().to_string(),
            alpha_bar_den: point.alpha_bar.denom().to_string(),
            beta_bar_num: point.beta_bar.numer().to_string(),
            beta_bar_den: point.beta_bar.denom().to_string(),
            alpha_bar_float: to_f64(&point.alpha_bar),
            beta_bar_float: to_f64(&point.beta_bar),
            is_corner,
        }
    }
}

/// Rows for `points`, flagging those whose coordinates are hull corners.
pub fn point_rows(points: &[TradeoffPoint]) -> Vec<PointRow> {
    let hull = hull_oracle(points);
    let mut flagged: Vec<bool> = vec![false; points.len()];
    for h in &hull {
        if let Some(i) = points.iter().position(|p| p.same_coords(h)) {
            flagged[i] = true;
        }
    }
    points
        .iter()
        .zip(flagged)
        .map(|(p, c)| PointRow::new(p, c))
        .collect()
}

pub fn write_point_rows<W: std::io::Write>(out: W, rows: &[PointRow]) -> Result<()> {
    write_rows(out, rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn pt(a: Rational, b: Rational) -> TradeoffPoint {
        TradeoffPoint::new(a, b, PointLabel::Msmr)
    }

    #[test]
    fn bound_params_shape() {
        let b = BoundParams::new(14, 14, 3).unwrap();
        assert_eq!((b.q_bound, b.t_rem), (4, 2));
        let b = BoundParams::new(6, 6, 2).unwrap();
        assert_eq!((b.q_bound, b.t_rem), (2, 2));
        assert!(BoundParams::new(3, 3, 3).is_err());
        assert!(BoundParams::new(4, 3, 1).is_err());
    }

    #[test]
    fn optimal_point_is_tight_on_last_bound() {
        let (k, e) = (6i64, 2i64);
        let p = pt(
            rat(k + e - 1, (k + e) * (k - 1)),
            rat(k + e - 2, (k + e) * (k - 1)),
        );
        let check = functional_bound_check(&p, &BoundParams::new(6, 6, 2).unwrap());
        assert!(check.feasible);
        assert!(check.slack.last().unwrap().is_zero());
    }

    #[test]
    fn msmr_is_feasible() {
        for k in 2..12 {
            for e in 1..k {
                for d in k..k + 6 {
                    let (msmr, mbcr) = extreme_points(k, d, e).unwrap();
                    let b = BoundParams::new(k, d, e).unwrap();
                    assert!(functional_bound_check(&msmr, &b).feasible, "k={k} d={d} e={e}");
                    assert!(functional_bound_check(&mbcr, &b).feasible, "k={k} d={d} e={e}");
                }
            }
        }
    }

    #[test]
    fn origin_is_infeasible() {
        let check = functional_bound_check(
            &pt(Rational::zero(), Rational::zero()),
            &BoundParams::new(7, 8, 2).unwrap(),
        );
        assert!(!check.feasible);
        assert!(check.slack.iter().all(|s| s.is_negative()));
    }

    #[test]
    fn extreme_point_values() {
        let (msmr, mbcr) = extreme_points(4, 4, 1).unwrap();
        assert_eq!((msmr.alpha_bar, msmr.beta_bar), (rat(1, 4), rat(1, 4)));
        assert_eq!((mbcr.alpha_bar, mbcr.beta_bar), (rat(2, 5), rat(1, 10)));
        let (_, mbcr) = extreme_points(14, 14, 3).unwrap();
        assert_eq!(mbcr.alpha_bar, rat(30, 14 * 17));
        assert_eq!(mbcr.beta_bar, rat(6, 14 * 17));
        for k in 2..10 {
            for e in 1..k {
                let (msmr, _) = extreme_points(k, k, e).unwrap();
                assert_eq!(msmr.alpha_bar, msmr.beta_bar);
            }
        }
    }

    #[test]
    fn c1_endpoints() {
        for k in 2..12u32 {
            for e in 1..k {
                let pts = achievable_points_c1(k, e).unwrap();
                let last = &pts.last().unwrap().point;
                let (msmr, _) = extreme_points(k, k, e).unwrap();
                assert!(last.same_coords(&msmr));
                let (ki, ei) = (k as i64, e as i64);
                let opt = &pts[pts.len() - 2].point;
                assert_eq!(opt.alpha_bar, rat(ki + ei - 1, (ki + ei) * (ki - 1)));
                assert_eq!(opt.beta_bar, rat(ki + ei - 2, (ki + ei) * (ki - 1)));
                for cp in &pts {
                    let f = Rational::from_integer(cp.f.clone());
                    assert_eq!(cp.point.alpha_bar, Rational::from_integer(cp.alpha.clone()) / &f);
                    assert_eq!(cp.point.beta_bar, &cp.beta / &f);
                }
            }
        }
    }

    #[test]
    fn remark2_point() {
        let pts = achievable_points_c1(4, 1).unwrap();
        let p = &pts[1].point;
        assert_eq!(p.label, PointLabel::Construction1 { r: 3 });
        assert_eq!((p.alpha_bar.clone(), p.beta_bar.clone()), (rat(3, 10), rat(3, 20)));
    }

    #[test]
    fn slope_matches_finite_difference() {
        for k in 2..16u32 {
            for e in 1..k {
                let pts = achievable_points_c1(k, e).unwrap();
                for w in pts.windows(2) {
                    let r = w[0].point.label.r().unwrap();
                    let fd = (&w[1].point.beta_bar - &w[0].point.beta_bar)
                        / (&w[1].point.alpha_bar - &w[0].point.alpha_bar);
                    assert_eq!(slope_c1(r, k, e).unwrap(), fd, "k={k} e={e} r={r}");
                }
            }
        }
    }

    #[test]
    fn slope_zero_at_2e_minus_1() {
        for e in 2..8u32 {
            let k = 2 * e;
            assert!(slope_c1(2 * e - 1, k, e).unwrap().is_zero());
            let pts = achievable_points_c1(k, e).unwrap();
            let b = |r: u32| pts[(r - e - 1) as usize].point.beta_bar.clone();
            assert_eq!(b(2 * e), b(2 * e - 1));
        }
    }

    #[test]
    fn slopes_strictly_decrease_from_2e() {
        let (k, e) = (14, 3);
        let slopes: Vec<Rational> = (2 * e..k + e).map(|r| slope_c1(r, k, e).unwrap()).collect();
        assert!(slopes.windows(2).all(|w| w[0] > w[1]));
        assert!(slope_c1(3, 14, 3).is_err());
        assert!(slope_c1(17, 14, 3).is_err());
    }

    #[test]
    fn p_max_values() {
        assert_eq!(p_max(3).unwrap(), 2);
        assert_eq!(p_max(2).unwrap(), 1);
        assert!(p_max(1).is_err());
    }

    #[test]
    fn k_th_values() {
        assert_eq!(k_th(3, 0).unwrap(), 4);
        assert_eq!(k_th(3, 2).unwrap(), 14);
        assert!(k_th(3, 3).is_err());
        // p = e - 1 requires e - 1 <= p_max(e), true for every e >= 2.
        for e in 2..=10 {
            assert_eq!(k_th(e, e - 1).unwrap(), 5 * e as i64 - 1);
            assert_eq!(k_th(e, 0).unwrap(), e as i64 + 1);
        }
    }

    #[test]
    fn p_star_values() {
        assert_eq!(p_star(14, 3).unwrap(), 3);
        assert_eq!(p_star_max_form(14, 3).unwrap(), 3);
        for k in 2..40 {
            assert_eq!(p_star(k, 1).unwrap(), 1);
        }
        for e in 1..10 {
            assert_eq!(p_star(e + 1, e).unwrap(), 1);
        }
    }

    #[test]
    fn region_14_3() {
        let region = corner_points(14, 3).unwrap();
        assert_eq!(region.p_star, 3);
        assert_eq!(region.n_corners, 10);
        let rs: Vec<Option<u32>> = region.corner_points.iter().map(|p| p.label.r()).collect();
        assert_eq!(rs[0], None);
        assert_eq!(&rs[1..], &(9..=17).map(Some).collect::<Vec<_>>()[..]);
        assert!(region.is_strictly_convex());
    }

    #[test]
    fn region_for_k_equal_e_plus_one_is_a_segment() {
        for e in 1..8 {
            let region = corner_points(e + 1, e).unwrap();
            assert_eq!(region.corner_points.len(), 2);
            assert_eq!(region.corner_points[0].label, PointLabel::Mbcr);
            let mut pts: Vec<TradeoffPoint> = achievable_points_c1(e + 1, e)
                .unwrap()
                .into_iter()
                .map(|c| c.point)
                .collect();
            pts.push(region.corner_points[0].clone());
            let hull = hull_oracle(&pts);
            assert_eq!(hull.len(), 2);
            // The optimal point sits on the MBCR-MSMR chord.
            let opt = &pts[pts.len() - 3];
            assert!(cross(&hull[0], &hull[1], opt).is_zero());
        }
    }

    #[test]
    fn e1_point_r2_coincides_with_mbcr() {
        for k in 2..15 {
            let pts = achievable_points_c1(k, 1).unwrap();
            let (_, mbcr) = extreme_points(k, k, 1).unwrap();
            assert!(pts[0].point.same_coords(&mbcr));
            let region = corner_points(k, 1).unwrap();
            assert_eq!(region.n_corners, k);
        }
    }

    #[test]
    fn hull_basics() {
        let a = pt(rat(1, 4), rat(1, 2));
        let b = pt(rat(1, 2), rat(1, 4));
        assert_eq!(hull_oracle(&[a.clone(), b.clone()]).len(), 2);
        let mid = pt(rat(3, 8), rat(3, 8));
        let hull = hull_oracle(&[a.clone(), mid, b.clone()]);
        assert_eq!(hull, vec![b.clone(), a.clone()]);
        let dominated = pt(rat(1, 2), rat(1, 2));
        assert_eq!(hull_oracle(&[a.clone(), b.clone(), dominated]).len(), 2);
    }

    #[test]
    fn gap_closed_forms() {
        for k in 2..=20i64 {
            for e in 1..k {
                for p in 0..k - e {
                    let direct = space_sharing_gap(k as u32, e as u32, p as u32).unwrap();
                    let d = gap_denominator(k, e, p);
                    assert!(d > 0);
                    assert_eq!(direct, rat(n2(k, e, p), d), "k={k} e={e} p={p}");
                    assert_eq!(n1(k, e, p), n2(k, e, p));
                }
                assert_eq!(n2(k, e, 0), -2 * e * (e - 1) * (k - e - 1));
                assert_eq!(n2(k, e, k - e - 1), (k - e) * (k + e - 1) * (k - e - 1));
            }
        }
    }

    #[test]
    fn optimal_point_gap() {
        for k in 3..=20u32 {
            for e in 1..k - 1 {
                let gap = space_sharing_gap(k, e, k - e - 1).unwrap();
                let (k, e) = (k as i64, e as i64);
                assert_eq!(gap, rat((k - e) * (k - e - 1), k * (k + e) * (k - 1) * (k - 1)));
                assert!(gap.is_positive());
            }
        }
    }

    #[test]
    fn mbcr_beats_point_2e_on_both_axes() {
        for k in 2..=30u32 {
            for e in 1..k {
                let pts = achievable_points_c1(k, e).unwrap();
                let (_, mbcr) = extreme_points(k, k, e).unwrap();
                let p2e = &pts[(e - 1) as usize].point;
                assert_eq!(p2e.label.r(), Some(2 * e));
                if e == 1 {
                    assert!(p2e.same_coords(&mbcr));
                } else {
                    assert!(mbcr.alpha_bar > p2e.alpha_bar);
                    assert!(mbcr.beta_bar < p2e.beta_bar);
                }
            }
        }
    }

    #[test]
    fn alpha_bar_decreases_in_r() {
        for k in 2..20 {
            for e in 1..k {
                let pts = achievable_points_c1(k, e).unwrap();
                assert!(pts.windows(2).all(|w| w[0].point.alpha_bar > w[1].point.alpha_bar));
            }
        }
    }

    #[test]
    fn p_star_levels_out_at_k_th_of_p_max() {
        let mut counterexamples = Vec::new();
        for e in 2..=10u32 {
            let pm = p_max(e).unwrap();
            let kt = k_th(e, pm).unwrap();
            for k in e + 1..=200 {
                let levelled = p_star(k, e).unwrap() == pm + 1;
                if levelled != (k as i64 >= kt) {
                    counterexamples.push((e, k));
                }
            }
        }
        assert!(counterexamples.is_empty(), "counterexamples: {counterexamples:?}");
    }

    #[test]
    fn radicand_root_is_never_odd() {
        for e in 2..=10_000u128 {
            let x = 8 * e * (e - 1) - 1;
            let s = x.isqrt();
            assert_ne!(s * s, x, "e={e}");
        }
    }

    #[test]
    fn general_points_at_m_n_minus_k_match_layered() {
        let general = achievable_points_general(19, 13, 14, 3).unwrap();
        let layered = achievable_points_layered(19, 14, 3, 6).unwrap();
        let m6: Vec<&CodePoint> = general
            .iter()
            .filter(|c| c.point.label.m() == Some(6))
            .collect();
        assert_eq!(m6.len(), layered.len());
        for (g, l) in m6.iter().zip(&layered) {
            assert!(g.point.same_coords(&l.point));
            assert_eq!(g.f, l.f);
        }
        let ms: std::collections::BTreeSet<u32> =
            general.iter().filter_map(|c| c.point.label.m()).collect();
        assert_eq!(ms, [3, 4, 5, 6].into());
    }

    #[test]
    fn general_points_skip_small_m() {
        // d = 6 is too few helpers for m = 1 at n = 8, e = 1.
        let general = achievable_points_general(8, 5, 6, 1).unwrap();
        let ms: std::collections::BTreeSet<u32> =
            general.iter().filter_map(|c| c.point.label.m()).collect();
        assert_eq!(ms, [2, 3].into());
        let p = general
            .iter()
            .find(|c| c.point.label == PointLabel::Construction2 { m: 2, r: 3 })
            .unwrap();
        assert_eq!(p.f, BigInt::from(rho(8, 5, 2, 3).unwrap()));
        assert_eq!(p.alpha, BigInt::from(21));
        assert!(achievable_points_general(8, 5, 4, 1).is_err());
    }

    #[test]
    fn msmr_curve_beats_layered_naive() {
        let curves = accounting_curves(10, 7, 7, 1).unwrap();
        assert_eq!(curves.len(), 2 * 7);
        let mut strict = 0;
        for pair in curves.chunks(2) {
            let (naive, msmr) = (&pair[0], &pair[1]);
            assert_eq!(naive.accounting, Accounting::LayeredNaive);
            assert_eq!(naive.alpha_bar, msmr.alpha_bar);
            assert!(msmr.beta_bar <= naive.beta_bar);
            if msmr.beta_bar < naive.beta_bar {
                strict += 1;
            }
            // MSMR total over d helpers matches the closed form.
            let beta = beta_formula(10, 1, 3, msmr.r, 7).unwrap();
            let f = Rational::from_integer(binomial(10, msmr.r as i64) * (msmr.r - 3));
            assert_eq!(msmr.beta_bar, beta / f);
        }
        assert!(strict > 0);
        // No slack to exploit when n = k + 1.
        for pair in accounting_curves(8, 7, 7, 1).unwrap().chunks(2) {
            assert_eq!(pair[0].beta_bar, pair[1].beta_bar);
        }
        assert!(accounting_curves(10, 7, 6, 1).is_err());
    }

    #[test]
    fn csv_rows_flag_corners() {
        let mut pts: Vec<TradeoffPoint> = achievable_points_c1(14, 3)
            .unwrap()
            .into_iter()
            .map(|c| c.point)
            .collect();
        pts.push(extreme_points(14, 14, 3).unwrap().1);
        let rows = point_rows(&pts);
        assert_eq!(rows.iter().filter(|r| r.is_corner).count(), 10);
        let mut buf = Vec::new();
        write_point_rows(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with(
            "label,r,m,alpha_bar_num,alpha_bar_den,beta_bar_num,beta_bar_den,alpha_bar_float,beta_bar_float,is_corner\n"
        ));
        assert_eq!(text.lines().count(), 16);
    }
}
