//! Self-checks run by `layered-regen verify`: every closed form against the
//! brute-force computation it summarizes, plus encode/repair round trips.

use std::collections::BTreeSet;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bandwidth::{beta_formula, beta_oracle};
use crate::design::{subsets_of, BlockDesign, NodeId};
use crate::error::Result;
use crate::gf::{BinaryField, Elem};
use crate::layered::{LayeredCode, SystemParams};
use crate::precoded::{rank_oracle, rho, PrecodedCode, PrecodedParams};
use crate::region::{
    achievable_points_c1, corner_points, extreme_points, hull_oracle, p_star, p_star_max_form,
    TradeoffPoint,
};

#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub cases: usize,
    pub detail: String,
    pub millis: u128,
}

type Check = fn(&mut ChaCha8Rng) -> Result<(usize, Option<String>)>;

const CHECKS: [(&str, Check); 6] = [
    ("beta-formula-vs-oracle", beta_vs_oracle),
    ("rho-vs-rank-oracle", rho_vs_rank),
    ("hull-vs-closed-form-corners", hull_vs_corners),
    ("p-star-forms", p_star_forms),
    ("layered-round-trips", layered_round_trips),
    ("precoded-round-trips", precoded_round_trips),
];

/// Run every suite. A suite that errors counts as failed.
pub fn run_all(seed: u64) -> Vec<CheckOutcome> {
    CHECKS
        .iter()
        .map(|&(name, check)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let start = Instant::now();
            let (passed, cases, detail) = match check(&mut rng) {
                Ok((cases, None)) => (true, cases, String::new()),
                Ok((cases, Some(why))) => (false, cases, why),
                Err(err) => (false, 0, err.to_string()),
            };
            CheckOutcome {
                name,
                passed,
                cases,
                detail,
                millis: start.elapsed().as_millis(),
            }
        })
        .collect()
}

fn random_repair(
    rng: &mut ChaCha8Rng,
    n: u32,
    e: usize,
    d: usize,
) -> (BTreeSet<NodeId>, BTreeSet<NodeId>) {
    let mut ids: Vec<NodeId> = (1..=n).collect();
    ids.shuffle(rng);
    let failed = ids[..e].iter().copied().collect();
    let helpers = ids[e..e + d].iter().copied().collect();
    (failed, helpers)
}

fn beta_vs_oracle(rng: &mut ChaCha8Rng) -> Result<(usize, Option<String>)> {
    let mut cases = 0;
    for n in 3..=8u32 {
        for m in 1..=3.min(n - 1) {
            for r in m + 1..=n {
                let design = BlockDesign::complete(n, r)?;
                for e in 1..=m {
                    for d in n - m..=n - e {
                        let want = beta_formula(n, e, m, r, d)?;
                        for _ in 0..5 {
                            let (failed, helpers) = random_repair(rng, n, e as usize, d as usize);
                            let report =
                                beta_oracle(&design, m, e as usize, d as usize, &failed, &helpers)?;
                            cases += 1;
                            if report.msmr.uniform_per_helper() != Some(&want) {
                                return Ok((
                                    cases,
                                    Some(format!("n={n} m={m} r={r} e={e} d={d}")),
                                ));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok((cases, None))
}

fn rho_vs_rank(_: &mut ChaCha8Rng) -> Result<(usize, Option<String>)> {
    let field = BinaryField::default();
    let mut cases = 0;
    for n in 2..=6u32 {
        let ids: Vec<NodeId> = (1..=n).collect();
        for k in 1..n {
            for m in 1..=n - k {
                for r in m + 1..=n {
                    let want = rho(n, k, m, r)? as usize;
                    for subset in subsets_of(&ids, k as usize) {
                        let set: BTreeSet<NodeId> = subset.into_iter().collect();
                        cases += 1;
                        if rank_oracle(n, k, m, r, &set, &field)? != want {
                            return Ok((cases, Some(format!("n={n} k={k} m={m} r={r} {set:?}"))));
                        }
                    }
                }
            }
        }
    }
    Ok((cases, None))
}

fn hull_vs_corners(_: &mut ChaCha8Rng) -> Result<(usize, Option<String>)> {
    let mut cases = 0;
    for k in 2..=20u32 {
        for e in 1..k {
            let mut pts: Vec<TradeoffPoint> = achievable_points_c1(k, e)?
                .into_iter()
                .map(|c| c.point)
                .collect();
            pts.push(extreme_points(k, k, e)?.1);
            let hull = hull_oracle(&pts);
            let closed = corner_points(k, e)?.corner_points;
            cases += 1;
            let same = hull.len() == closed.len()
                && hull.iter().zip(&closed).all(|(a, b)| a.same_coords(b));
            if !same {
                return Ok((cases, Some(format!("k={k} e={e}"))));
            }
        }
    }
    Ok((cases, None))
}

fn p_star_forms(_: &mut ChaCha8Rng) -> Result<(usize, Option<String>)> {
    let mut cases = 0;
    for e in 2..=12u32 {
        for k in e + 1..=60 {
            cases += 1;
            if p_star(k, e)? != p_star_max_form(k, e)? {
                return Ok((cases, Some(format!("k={k} e={e}"))));
            }
        }
    }
    Ok((cases, None))
}

fn random_data(field: &BinaryField, len: usize, rng: &mut ChaCha8Rng) -> Vec<Elem> {
    (0..len).map(|_| field.elem(rng.gen_range(0..field.order()))).collect()
}

fn layered_round_trips(rng: &mut ChaCha8Rng) -> Result<(usize, Option<String>)> {
    let field = BinaryField::default();
    let mut cases = 0;
    for (k, e, r) in [(4, 1, 4), (3, 2, 4), (5, 2, 6), (4, 3, 5)] {
        let code = LayeredCode::build_complete(SystemParams::symmetric(k, e, r), &field)?;
        let data = random_data(&field, code.data_len(), rng);
        let nodes = code.encode(&data)?;
        let ids: Vec<NodeId> = (1..=code.params().n).collect();
        for subset in subsets_of(&ids, k as usize) {
            let chosen: Vec<_> = nodes
                .iter()
                .filter(|nc| subset.contains(&nc.node))
                .cloned()
                .collect();
            cases += 1;
            if code.reconstruct(&chosen)? != data {
                return Ok((cases, Some(format!("reconstruct k={k} e={e} r={r} {subset:?}"))));
            }
        }
        for _ in 0..10 {
            let (failed, helpers) = random_repair(rng, code.params().n, e as usize, k as usize);
            let out = code.repair(&nodes, &failed, &helpers)?;
            cases += 1;
            for nc in &out.repaired {
                if *nc != nodes[nc.node as usize - 1] {
                    return Ok((cases, Some(format!("repair k={k} e={e} r={r} {failed:?}"))));
                }
            }
        }
    }
    Ok((cases, None))
}

fn precoded_round_trips(rng: &mut ChaCha8Rng) -> Result<(usize, Option<String>)> {
    let field = BinaryField::default();
    let mut cases = 0;
    for (n, k, m, r) in [(5, 3, 1, 3), (6, 4, 1, 3), (5, 2, 2, 4)] {
        let params = PrecodedParams {
            n,
            k,
            d: n - m,
            e: 1,
            m,
            r,
        };
        let code = PrecodedCode::new(params, &field)?;
        let data: Vec<Vec<Elem>> = (0..code.info_len())
            .map(|_| random_data(&field, code.kappa(), rng))
            .collect();
        let nodes = code.encode2(&data)?;
        let ids: Vec<NodeId> = (1..=n).collect();
        for subset in subsets_of(&ids, k as usize) {
            let chosen: Vec<_> = nodes
                .iter()
                .filter(|nc| subset.contains(&nc.node))
                .cloned()
                .collect();
            cases += 1;
            if code.reconstruct2(&chosen)? != data {
                return Ok((cases, Some(format!("n={n} k={k} m={m} r={r} {subset:?}"))));
            }
        }
    }
    Ok((cases, None))
}
