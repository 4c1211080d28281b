//! Precoded layered codes for systems with `k < n - m`.
//!
//! Data symbols live in an extension field GF(q^κ) with κ = F_c. A linearized
//! polynomial maps the F data symbols to F_c intermediate symbols, which are
//! then stored with a `t = r` layered code applied to each base-field
//! coordinate. Any k nodes see ρ independent base-field combinations of the
//! intermediate symbols, which is enough to recover F = ρ data symbols.
//!
//! When `m = n - k` the precode is skipped: κ = 1 and the code is the layered
//! code itself.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::bandwidth::RepairAccounting;
use crate::design::{BlockDesign, NodeId};
use crate::error::{Error, Result};
use crate::exact::binomial_u64;
use crate::extension::{ExtElem, ExtField};
use crate::gf::{BinaryField, Elem};
use crate::layered::{LayeredCode, NodeContents, SystemParams};
use crate::linalg::{rank, Echelon};
use crate::mds::MdsCodec;

fn check_rank_params(n: u32, k: u32, m: u32, r: u32) -> Result<()> {
    if !(m < r && r <= n && 1 <= k && k <= n) {
        return Err(Error::params(format!(
            "need m < r <= n and 1 <= k <= n, got n={n}, k={k}, m={m}, r={r}"
        )));
    }
    Ok(())
}

/// Rank of the columns of any `k` nodes in the generator of the `t = r`
/// layered code with group dimension `r - m`: a block meeting the `k` nodes
/// in `p` places contributes `min(p, r - m)`.
pub fn rho(n: u32, k: u32, m: u32, r: u32) -> Result<u64> {
    check_rank_params(n, k, m, r)?;
    let (n, k, m, r) = (n as u64, k as u64, m as u64, r as u64);
    let lo = 1.max(r.saturating_sub(n - k));
    let hi = k.min(r);
    Ok((lo..=hi)
        .map(|p| binomial_u64(k, p) * binomial_u64(n - k, r - p) * p.min(r - m))
        .sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RankProfile {
    pub rho: u64,
    /// `F_c = N (r - m)` generator rows.
    pub rows: u64,
    /// `n alpha` generator columns.
    pub cols: u64,
}

pub fn rank_profile(n: u32, k: u32, m: u32, r: u32) -> Result<RankProfile> {
    let rho = rho(n, k, m, r)?;
    let (n64, r64) = (n as u64, r as u64);
    Ok(RankProfile {
        rho,
        rows: binomial_u64(n64, r64) * (r64 - m as u64),
        cols: n64 * binomial_u64(n64 - 1, r64 - 1),
    })
}

/// Generator column of slot `(block, pos)`: which combination of the
/// intermediate symbols it stores.
fn generator_column(codec: &MdsCodec, block: usize, pos: usize, rows: usize) -> Vec<Elem> {
    let dim = codec.dimension();
    let mut col = vec![Elem::ZERO; rows];
    for (i, g) in codec.generator().iter().enumerate() {
        col[block * dim + i] = g[pos];
    }
    col
}

/// Rank, computed by elimination, of the columns of `nodes` in the explicit
/// generator of the `t = r` layered code over `field`.
pub fn rank_oracle(
    n: u32,
    k: u32,
    m: u32,
    r: u32,
    nodes: &BTreeSet<NodeId>,
    field: &BinaryField,
) -> Result<usize> {
    check_rank_params(n, k, m, r)?;
    if nodes.len() != k as usize || nodes.iter().any(|&x| x < 1 || x > n) {
        return Err(Error::params(format!(
            "need {k} distinct node ids in [1, {n}], got {nodes:?}"
        )));
    }
    let design = BlockDesign::complete(n, r)?;
    let codec = MdsCodec::new(field, r as usize, (r - m) as usize)?;
    let rows = design.num_blocks() * codec.dimension();
    let mut ech = Echelon::new(field, rows);
    for (j, block) in design.blocks().iter().enumerate() {
        for (pos, x) in block.iter().enumerate() {
            if nodes.contains(x) {
                ech.insert(&generator_column(&codec, j, pos, rows));
            }
        }
    }
    Ok(ech.rank())
}

/// `f(x) = sum_i v_i x^(q^i)` at `x`.
fn eval_linearized(ext: &ExtField, data: &[ExtElem], x: &[Elem]) -> ExtElem {
    let mut acc = ext.zero();
    let mut power = x.to_vec();
    for (i, v) in data.iter().enumerate() {
        if i > 0 {
            power = ext.frobenius(&power);
        }
        ext.add_assign(&mut acc, &ext.mul(v, &power));
    }
    acc
}

/// Evaluations `f(theta_1), ..., f(theta_Fc)` of the linearized polynomial
/// with coefficients `data`.
pub fn linearized_precode(
    ext: &ExtField,
    data: &[ExtElem],
    points: &[ExtElem],
) -> Result<Vec<ExtElem>> {
    if data.len() > points.len() {
        return Err(Error::params(format!(
            "{} data symbols exceed {} evaluation points",
            data.len(),
            points.len()
        )));
    }
    if let Some(bad) = data.iter().chain(points).find(|v| !ext.contains(v)) {
        return Err(Error::Field(format!("{bad:?} is not in the extension field")));
    }
    if rank(ext.base(), points) != points.len() {
        return Err(Error::params(
            "evaluation points are linearly dependent over the base field",
        ));
    }
    Ok(points
        .iter()
        .map(|theta| eval_linearized(ext, data, theta))
        .collect())
}

/// `(n, k, d, e)` system plus the construction parameters `(m, r)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecodedParams {
    pub n: u32,
    pub k: u32,
    pub d: u32,
    pub e: u32,
    pub m: u32,
    pub r: u32,
}

impl PrecodedParams {
    pub fn validate(&self) -> Result<()> {
        let PrecodedParams { n, k, d, e, m, r } = *self;
        let ok = 1 <= e
            && 1 <= k
            && e <= m
            && k + m <= n
            && m < r
            && r <= n
            && k <= d
            && d + e <= n;
        if !ok {
            return Err(Error::params(format!(
                "need e <= m <= n-k, m < r <= n and k <= d <= n-e: {self:?}"
            )));
        }
        Ok(())
    }

    /// Parameters of the layered code underneath, which has `k = n - m`.
    pub fn inner(&self) -> SystemParams {
        SystemParams {
            n: self.n,
            k: self.n - self.m,
            d: self.d.max(self.n - self.m),
            e: self.e,
            m: self.m,
            r: self.r,
            t: self.r,
        }
    }
}

/// Symbols stored by one node of a precoded code, each with κ base-field
/// coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrecodedNode {
    pub node: NodeId,
    pub symbols: Vec<(usize, ExtElem)>,
}

#[derive(Debug, Clone)]
pub struct PrecodedCode {
    params: PrecodedParams,
    inner: LayeredCode,
    /// `None` when `m = n - k` and the precode is the identity.
    ext: Option<ExtField>,
    info_len: usize,
    points: Vec<ExtElem>,
}

impl PrecodedCode {
    pub fn new(params: PrecodedParams, base: &BinaryField) -> Result<Self> {
        params.validate()?;
        let inner = LayeredCode::build_complete(params.inner(), base)?;
        let fc = inner.data_len();
        if params.m == params.n - params.k {
            return Ok(PrecodedCode {
                params,
                inner,
                ext: None,
                info_len: fc,
                points: Vec::new(),
            });
        }
        let info_len = rho(params.n, params.k, params.m, params.r)? as usize;
        let ext = ExtField::new(base, fc)?;
        let points = (0..fc).map(|i| ext.basis(i)).collect();
        Ok(PrecodedCode {
            params,
            inner,
            ext: Some(ext),
            info_len,
            points,
        })
    }

    pub fn params(&self) -> &PrecodedParams {
        &self.params
    }

    pub fn inner(&self) -> &LayeredCode {
        &self.inner
    }

    pub fn extension(&self) -> Option<&ExtField> {
        self.ext.as_ref()
    }

    pub fn is_precoded(&self) -> bool {
        self.ext.is_some()
    }

    /// Base-field coordinates per symbol.
    pub fn kappa(&self) -> usize {
        self.ext.as_ref().map_or(1, ExtField::degree)
    }

    /// Data symbols `F`.
    pub fn info_len(&self) -> usize {
        self.info_len
    }

    /// Intermediate symbols `F_c = N (r - m)`.
    pub fn intermediate_len(&self) -> usize {
        self.inner.data_len()
    }

    pub fn points(&self) -> &[ExtElem] {
        &self.points
    }

    fn check_symbol(&self, v: &[Elem]) -> Result<()> {
        let base = self.inner.field();
        if v.len() != self.kappa() || v.iter().any(|&c| !base.contains(c)) {
            return Err(Error::Field(format!(
                "symbol {v:?} is not {} coordinates in {base:?}",
                self.kappa()
            )));
        }
        Ok(())
    }

    fn check_node(&self, nc: &PrecodedNode) -> Result<()> {
        let expected = self.inner.design().blocks_of(nc.node);
        if nc.node < 1
            || nc.node > self.params.n
            || nc.symbols.len() != expected.len()
            || nc.symbols.iter().zip(&expected).any(|(s, &b)| s.0 != b)
        {
            return Err(Error::params(format!(
                "node {} does not hold the blocks {expected:?}",
                nc.node
            )));
        }
        nc.symbols.iter().try_for_each(|(_, v)| self.check_symbol(v))
    }

    pub fn encode2(&self, data: &[ExtElem]) -> Result<Vec<PrecodedNode>> {
        if data.len() != self.info_len {
            return Err(Error::params(format!(
                "data has {} symbols, code stores {}",
                data.len(),
                self.info_len
            )));
        }
        data.iter().try_for_each(|v| self.check_symbol(v))?;
        let intermediate = match &self.ext {
            Some(ext) => linearized_precode(ext, data, &self.points)?,
            None => data.to_vec(),
        };
        let per_coord = (0..self.kappa())
            .map(|c| {
                let slice: Vec<Elem> = intermediate.iter().map(|v| v[c]).collect();
                self.inner.encode(&slice)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(merge(per_coord))
    }

    /// Recover the data from at least `k` distinct nodes. Every supplied
    /// symbol is checked against the result.
    pub fn reconstruct2(&self, nodes: &[PrecodedNode]) -> Result<Vec<ExtElem>> {
        let ids: BTreeSet<NodeId> = nodes.iter().map(|nc| nc.node).collect();
        if ids.len() != nodes.len() {
            return Err(Error::params("duplicate node ids"));
        }
        if ids.len() < self.params.k as usize {
            return Err(Error::Insufficient(format!(
                "{} nodes supplied, reconstruction needs k = {}",
                ids.len(),
                self.params.k
            )));
        }
        for nc in nodes {
            self.check_node(nc)?;
        }
        let Some(ext) = &self.ext else {
            let data = self.inner.reconstruct(&coordinate(nodes, 0))?;
            return Ok(data.into_iter().map(|v| vec![v]).collect());
        };

        let rows = self.intermediate_len();
        let dim = self.inner.params().group_dimension();
        let mut ech = Echelon::new(ext.base(), rows);
        let mut gathered: Vec<(ExtElem, &ExtElem)> = Vec::new();
        let mut chosen: Vec<usize> = Vec::new();
        for nc in nodes {
            for (j, value) in &nc.symbols {
                let pos = self.inner.position(nc.node, *j).expect("layout checked");
                let codec = &self.inner.codecs()[*j];
                debug_assert_eq!(codec.dimension(), dim);
                // With the polynomial basis as evaluation points, the point
                // sum_l g_l theta_l has coordinates g.
                let gamma = generator_column(codec, *j, pos, rows);
                if chosen.len() < self.info_len && ech.insert(&gamma) {
                    chosen.push(gathered.len());
                }
                gathered.push((gamma, value));
            }
        }
        if chosen.len() < self.info_len {
            return Err(Error::Invariant(format!(
                "{} independent combinations from {} nodes, {} needed",
                chosen.len(),
                nodes.len(),
                self.info_len
            )));
        }

        let f = self.info_len;
        let mut matrix = Vec::with_capacity(f);
        let mut rhs = Vec::with_capacity(f);
        for &i in &chosen {
            let (gamma, value) = &gathered[i];
            let mut row = Vec::with_capacity(f);
            let mut power = gamma.clone();
            for l in 0..f {
                if l > 0 {
                    power = ext.frobenius(&power);
                }
                row.push(power.clone());
            }
            matrix.push(row);
            rhs.push((*value).clone());
        }
        let data = ext.solve(matrix, rhs)?;
        for (gamma, value) in &gathered {
            if eval_linearized(ext, &data, gamma) != **value {
                return Err(Error::Inconsistent(
                    "stored symbols disagree with the recovered data".into(),
                ));
            }
        }
        Ok(data)
    }

    /// Repair through the layered code, one base-field coordinate at a time.
    pub fn repair2(
        &self,
        state: &[PrecodedNode],
        failed: &BTreeSet<NodeId>,
        helpers: &BTreeSet<NodeId>,
    ) -> Result<(Vec<PrecodedNode>, RepairAccounting)> {
        for nc in state.iter().filter(|nc| helpers.contains(&nc.node)) {
            self.check_node(nc)?;
        }
        let mut accounting = None;
        let mut per_coord = Vec::with_capacity(self.kappa());
        for c in 0..self.kappa() {
            let outcome = self.inner.repair(&coordinate(state, c), failed, helpers)?;
            accounting.get_or_insert(outcome.accounting);
            per_coord.push(outcome.repaired);
        }
        Ok((merge(per_coord), accounting.expect("kappa >= 1")))
    }
}

fn coordinate(nodes: &[PrecodedNode], c: usize) -> Vec<NodeContents> {
    nodes
        .iter()
        .map(|nc| NodeContents {
            node: nc.node,
            symbols: nc.symbols.iter().map(|(j, v)| (*j, v[c])).collect(),
        })
        .collect()
}

fn merge(per_coord: Vec<Vec<NodeContents>>) -> Vec<PrecodedNode> {
    let mut out: Vec<PrecodedNode> = per_coord[0]
        .iter()
        .map(|nc| PrecodedNode {
            node: nc.node,
            symbols: nc
                .symbols
                .iter()
                .map(|&(j, _)| (j, Vec::with_capacity(per_coord.len())))
                .collect(),
        })
        .collect();
    for coord in &per_coord {
        for (dst, src) in out.iter_mut().zip(coord) {
            for (d, &(_, v)) in dst.symbols.iter_mut().zip(&src.symbols) {
                d.1.push(v);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bandwidth::{beta_formula, Accounting};
    use crate::design::subsets_of;
    use crate::exact::{binomial, Rational};
    use crate::region::achievable_points_general;
    use num_bigint::BigInt;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_data(code: &PrecodedCode, rng: &mut ChaCha8Rng) -> Vec<ExtElem> {
        let f = code.inner().field();
        (0..code.info_len())
            .map(|_| (0..code.kappa()).map(|_| f.elem(rng.gen_range(0..f.order()))).collect())
            .collect()
    }

    fn params(n: u32, k: u32, d: u32, e: u32, m: u32, r: u32) -> PrecodedParams {
        PrecodedParams { n, k, d, e, m, r }
    }

    #[test]
    fn rho_at_m_equal_n_minus_k_is_full() {
        for n in 2..10u32 {
            for k in 1..n {
                let m = n - k;
                for r in m + 1..=n {
                    let fc = binomial(n as i64, r as i64) * BigInt::from(r - m);
                    assert_eq!(BigInt::from(rho(n, k, m, r).unwrap()), fc);
                }
            }
        }
    }

    #[test]
    fn rho_with_all_nodes_is_full() {
        for n in 2..10u32 {
            for m in 0..n {
                for r in m + 1..=n {
                    let p = rank_profile(n, n, m, r).unwrap();
                    assert_eq!(p.rho, p.rows);
                }
            }
        }
    }

    #[test]
    fn rho_6_4_1_3_every_subset() {
        let f = BinaryField::default();
        assert_eq!(rho(6, 4, 1, 3).unwrap(), 36);
        let ids: Vec<u32> = (1..=6).collect();
        for subset in subsets_of(&ids, 4) {
            let set: BTreeSet<u32> = subset.into_iter().collect();
            assert_eq!(rank_oracle(6, 4, 1, 3, &set, &f).unwrap(), 36);
        }
    }

    #[test]
    fn rho_matches_rank_oracle_small() {
        let f = BinaryField::default();
        for n in 2..=6u32 {
            let ids: Vec<u32> = (1..=n).collect();
            for k in 1..=n {
                for m in 0..=n - k {
                    for r in m + 1..=n {
                        let want = rho(n, k, m, r).unwrap() as usize;
                        for subset in subsets_of(&ids, k as usize).into_iter().take(3) {
                            let set: BTreeSet<u32> = subset.into_iter().collect();
                            assert_eq!(
                                rank_oracle(n, k, m, r, &set, &f).unwrap(),
                                want,
                                "n={n} k={k} m={m} r={r} {set:?}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn rank_params_are_checked() {
        let f = BinaryField::default();
        assert!(rho(5, 3, 3, 3).is_err());
        assert!(rho(5, 6, 1, 3).is_err());
        assert!(rank_oracle(5, 2, 1, 3, &[1].into(), &f).is_err());
        assert!(rank_oracle(5, 2, 1, 3, &[1, 9].into(), &f).is_err());
        // Six-position codewords do not fit in GF(4).
        let tiny = BinaryField::new(2).unwrap();
        assert!(rank_oracle(6, 2, 1, 6, &[1, 2].into(), &tiny).is_err());
    }

    #[test]
    fn precode_edge_cases() {
        let f = BinaryField::new(4).unwrap();
        let ext = ExtField::new(&f, 3).unwrap();
        let points: Vec<ExtElem> = (0..3).map(|i| ext.basis(i)).collect();
        let zero = vec![ext.zero(); 2];
        assert!(linearized_precode(&ext, &zero, &points)
            .unwrap()
            .iter()
            .all(|v| ext.is_zero(v)));
        let v1 = vec![Elem(3), Elem(0), Elem(9)];
        let theta = vec![Elem(1), Elem(7), Elem(2)];
        let got = linearized_precode(&ext, &[v1.clone()], &[theta.clone()]).unwrap();
        assert_eq!(got, vec![ext.mul(&v1, &theta)]);
        let dependent = vec![ext.basis(0), ext.basis(1), ext.add(&ext.basis(0), &ext.basis(1))];
        assert!(linearized_precode(&ext, &zero, &dependent).is_err());
        assert!(linearized_precode(&ext, &vec![ext.one(); 4], &points).is_err());
    }

    #[test]
    fn precode_is_base_linear_and_bijective_at_full_rate() {
        let f = BinaryField::new(2).unwrap();
        let kappa = 3;
        let ext = ExtField::new(&f, kappa).unwrap();
        let points: Vec<ExtElem> = (0..kappa).map(|i| ext.basis(i)).collect();
        // Images of the kappa^2 base-field unit vectors of the data space.
        let mut images = Vec::new();
        for sym in 0..kappa {
            for c in 0..kappa {
                let mut data = vec![ext.zero(); kappa];
                data[sym][c] = Elem::ONE;
                let out = linearized_precode(&ext, &data, &points).unwrap();
                images.push(out.concat());
            }
        }
        assert_eq!(rank(&f, &images), kappa * kappa);

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut rand_ext = || -> ExtElem { (0..kappa).map(|_| Elem(rng.gen_range(0..4))).collect() };
        let u: Vec<ExtElem> = (0..kappa).map(|_| rand_ext()).collect();
        let v: Vec<ExtElem> = (0..kappa).map(|_| rand_ext()).collect();
        let a = Elem(2);
        let mix: Vec<ExtElem> = u.iter().zip(&v).map(|(x, y)| ext.add(&ext.scale(a, x), y)).collect();
        let fu = linearized_precode(&ext, &u, &points).unwrap();
        let fv = linearized_precode(&ext, &v, &points).unwrap();
        let want: Vec<ExtElem> = fu.iter().zip(&fv).map(|(x, y)| ext.add(&ext.scale(a, x), y)).collect();
        assert_eq!(linearized_precode(&ext, &mix, &points).unwrap(), want);
    }

    #[test]
    fn bypass_matches_layered_code() {
        let f = BinaryField::default();
        let code = PrecodedCode::new(params(5, 4, 4, 1, 1, 4), &f).unwrap();
        assert!(!code.is_precoded());
        assert_eq!(code.kappa(), 1);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let data = random_data(&code, &mut rng);
        let flat: Vec<Elem> = data.iter().map(|v| v[0]).collect();
        let nodes = code.encode2(&data).unwrap();
        let plain = code.inner().encode(&flat).unwrap();
        assert_eq!(coordinate(&nodes, 0), plain);
        assert_eq!(code.reconstruct2(&nodes[1..]).unwrap(), data);
    }

    #[test]
    fn round_trip_6_4_1_3_every_subset() {
        let f = BinaryField::default();
        let code = PrecodedCode::new(params(6, 4, 4, 1, 1, 3), &f).unwrap();
        assert_eq!((code.info_len(), code.intermediate_len(), code.kappa()), (36, 40, 40));
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let data = random_data(&code, &mut rng);
        let nodes = code.encode2(&data).unwrap();
        let ids: Vec<u32> = (1..=6).collect();
        for subset in subsets_of(&ids, 4) {
            let chosen: Vec<PrecodedNode> = nodes
                .iter()
                .filter(|nc| subset.contains(&nc.node))
                .cloned()
                .collect();
            assert_eq!(code.reconstruct2(&chosen).unwrap(), data, "{subset:?}");
        }
        assert!(matches!(
            code.reconstruct2(&nodes[..3]),
            Err(Error::Insufficient(_))
        ));
    }

    #[test]
    fn tampering_is_detected() {
        let f = BinaryField::default();
        let code = PrecodedCode::new(params(6, 4, 4, 1, 1, 3), &f).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let data = random_data(&code, &mut rng);
        let nodes = code.encode2(&data).unwrap();
        for (node, slot) in [(0, 0), (2, 5), (5, 9)] {
            let mut bad = nodes.clone();
            bad[node].symbols[slot].1[7] += Elem(0x10);
            assert!(
                matches!(code.reconstruct2(&bad), Err(Error::Inconsistent(_))),
                "node {node} slot {slot}"
            );
        }
    }

    #[test]
    fn gf2_single_nodes_are_injective() {
        // Exhaustive over every data word: each single node determines it.
        let f = BinaryField::new(1).unwrap();
        for p in [params(3, 1, 1, 1, 1, 2)] {
            let code = PrecodedCode::new(p, &f).unwrap();
            let bits = code.info_len() * code.kappa();
            assert!(bits <= 12);
            let mut seen: Vec<BTreeSet<Vec<Vec<Elem>>>> = vec![BTreeSet::new(); p.n as usize];
            for word in 0u32..1 << bits {
                let data: Vec<ExtElem> = (0..code.info_len())
                    .map(|s| {
                        (0..code.kappa())
                            .map(|c| Elem((word >> (s * code.kappa() + c) & 1) as u16))
                            .collect()
                    })
                    .collect();
                let nodes = code.encode2(&data).unwrap();
                for nc in &nodes {
                    let stored: Vec<Vec<Elem>> = nc.symbols.iter().map(|(_, v)| v.clone()).collect();
                    assert!(seen[nc.node as usize - 1].insert(stored), "{p:?} node {}", nc.node);
                }
                if word % 97 == 0 {
                    for nc in &nodes {
                        assert_eq!(code.reconstruct2(std::slice::from_ref(nc)).unwrap(), data);
                    }
                }
            }
        }
    }

    #[test]
    fn repair_uses_layered_path() {
        let f = BinaryField::default();
        let code = PrecodedCode::new(params(6, 4, 5, 1, 1, 3), &f).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let data = random_data(&code, &mut rng);
        let nodes = code.encode2(&data).unwrap();
        let failed: BTreeSet<u32> = [1].into();
        let helpers: BTreeSet<u32> = (2..=6).collect();
        let (repaired, accounting) = code.repair2(&nodes, &failed, &helpers).unwrap();
        assert_eq!(repaired, vec![nodes[0].clone()]);
        let beta = beta_formula(6, 1, 1, 3, 5).unwrap();
        let msmr = accounting.get(Accounting::Msmr);
        assert_eq!(msmr.uniform_per_helper(), Some(&beta));
        let general = achievable_points_general(6, 4, 5, 1).unwrap();
        let point = general
            .iter()
            .find(|c| c.point.label == crate::region::PointLabel::Construction2 { m: 1, r: 3 })
            .unwrap();
        let fr = Rational::from_integer(BigInt::from(code.info_len()));
        assert_eq!(point.point.beta_bar, beta / fr);
    }

    #[test]
    fn invalid_params() {
        let f = BinaryField::default();
        assert!(PrecodedCode::new(params(6, 4, 4, 1, 3, 4), &f).is_err());
        assert!(PrecodedCode::new(params(6, 4, 4, 2, 1, 3), &f).is_err());
        assert!(PrecodedCode::new(params(6, 4, 6, 1, 1, 3), &f).is_err());
    }
}
