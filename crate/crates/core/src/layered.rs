//! Layered codes: one MDS codeword per design block, spread over the nodes.
//!
//! Node `x` holds the symbol `c[x, J]` of every block `J` containing it, in
//! ascending block order. Block `J` carries the contiguous data slice
//! `data[j * (r - m) .. (j + 1) * (r - m)]` where `j` is its index in the
//! design. Within a block, codeword position `i` belongs to the `i`-th
//! smallest node of `J`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::bandwidth::{account_blocks, RepairAccounting};
use crate::design::{BlockDesign, NodeId};
use crate::error::{Error, Result};
use crate::gf::{BinaryField, Elem};
use crate::mds::MdsCodec;

/// `(n, k, d, e)` system plus the construction parameters `(m, r, t)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemParams {
    pub n: u32,
    pub k: u32,
    pub d: u32,
    pub e: u32,
    pub m: u32,
    pub r: u32,
    pub t: u32,
}

impl SystemParams {
    /// `t = r` parameters for the `(k + e, k, k, e)` system with `m = e`.
    pub fn symmetric(k: u32, e: u32, r: u32) -> Self {
        SystemParams {
            n: k + e,
            k,
            d: k,
            e,
            m: e,
            r,
            t: r,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let SystemParams { n, k, d, e, m, r, t } = *self;
        let fail = |why: &str| Err(Error::params(format!("{why}: {self:?}")));
        if e < 1 {
            return fail("need e >= 1");
        }
        if !(e <= m && m < r && r <= n) {
            return fail("need e <= m < r <= n");
        }
        if t < 1 || t > r {
            return fail("need 1 <= t <= r");
        }
        if k + m != n {
            return fail("need k = n - m");
        }
        if !(k <= d && d + e <= n) {
            return fail("need k <= d <= n - e");
        }
        if e > k {
            return fail("need e <= k");
        }
        Ok(())
    }

    /// Inner-code dimension `r - m`.
    pub fn group_dimension(&self) -> usize {
        (self.r - self.m) as usize
    }
}

/// Symbols stored by one node: `(block index, symbol)` in ascending block
/// order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeContents {
    pub node: NodeId,
    pub symbols: Vec<(usize, Elem)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RepairOutcome {
    pub repaired: Vec<NodeContents>,
    pub accounting: RepairAccounting,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayeredCode {
    params: SystemParams,
    design: BlockDesign,
    field: BinaryField,
    codecs: Vec<MdsCodec>,
}

impl LayeredCode {
    pub fn build(params: SystemParams, design: BlockDesign, field: &BinaryField) -> Result<Self> {
        params.validate()?;
        if (design.n(), design.r(), design.t()) != (params.n, params.r, params.t) {
            return Err(Error::params(format!(
                "design is S({}, {}, {}) but parameters ask for S({}, {}, {})",
                design.t(),
                design.r(),
                design.n(),
                params.t,
                params.r,
                params.n
            )));
        }
        let dim = params.group_dimension();
        let codec = MdsCodec::new(field, params.r as usize, dim)?;
        let codecs = vec![codec; design.num_blocks()];
        Ok(LayeredCode {
            params,
            design,
            field: field.clone(),
            codecs,
        })
    }

    /// `t = r` code over the complete design.
    pub fn build_complete(params: SystemParams, field: &BinaryField) -> Result<Self> {
        if params.t != params.r {
            return Err(Error::params("complete design requires t = r"));
        }
        let design = BlockDesign::complete(params.n, params.r)?;
        Self::build(params, design, field)
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn design(&self) -> &BlockDesign {
        &self.design
    }

    pub fn field(&self) -> &BinaryField {
        &self.field
    }

    pub fn codecs(&self) -> &[MdsCodec] {
        &self.codecs
    }

    /// Information symbols `F = N (r - m)`.
    pub fn data_len(&self) -> usize {
        self.design.num_blocks() * self.params.group_dimension()
    }

    /// Symbols per node, `N r / n`.
    pub fn alpha(&self) -> usize {
        self.design.num_blocks() * self.params.r as usize / self.params.n as usize
    }

    /// Codeword position of `node` in block `block`, if it belongs to it.
    pub fn position(&self, node: NodeId, block: usize) -> Option<usize> {
        self.design.blocks()[block].binary_search(&node).ok()
    }

    /// Whether the code matrix has a symbol at `(node, block)`.
    pub fn has_slot(&self, node: NodeId, block: usize) -> bool {
        self.position(node, block).is_some()
    }

    /// The code matrix as text: `c` for a symbol, `-` for an empty slot.
    pub fn layout_matrix(&self) -> Vec<String> {
        (1..=self.params.n)
            .map(|x| {
                (0..self.design.num_blocks())
                    .map(|j| if self.has_slot(x, j) { 'c' } else { '-' })
                    .collect()
            })
            .collect()
    }

    fn data_range(&self, block: usize) -> std::ops::Range<usize> {
        let dim = self.params.group_dimension();
        block * dim..(block + 1) * dim
    }

    fn check_node(&self, node: NodeId) -> Result<()> {
        if node < 1 || node > self.params.n {
            return Err(Error::params(format!(
                "node {node} outside [1, {}]",
                self.params.n
            )));
        }
        Ok(())
    }

    pub fn encode(&self, data: &[Elem]) -> Result<Vec<NodeContents>> {
        if data.len() != self.data_len() {
            return Err(Error::params(format!(
                "data has {} symbols, code stores {}",
                data.len(),
                self.data_len()
            )));
        }
        if let Some(bad) = data.iter().find(|&&v| !self.field.contains(v)) {
            return Err(Error::Field(format!("{bad:?} is not in {:?}", self.field)));
        }
        let mut nodes: Vec<NodeContents> = (1..=self.params.n)
            .map(|node| NodeContents {
                node,
                symbols: Vec::with_capacity(self.alpha()),
            })
            .collect();
        for (j, block) in self.design.blocks().iter().enumerate() {
            let codeword = self.codecs[j].encode(&data[self.data_range(j)])?;
            for (&x, &c) in block.iter().zip(&codeword) {
                nodes[x as usize - 1].symbols.push((j, c));
            }
        }
        Ok(nodes)
    }

    /// Check that a node's slot list matches the layout.
    fn check_contents(&self, nc: &NodeContents) -> Result<()> {
        self.check_node(nc.node)?;
        let expected = self.design.blocks_of(nc.node);
        if nc.symbols.len() != expected.len()
            || nc.symbols.iter().zip(&expected).any(|(&(j, _), &b)| j != b)
        {
            return Err(Error::params(format!(
                "node {} does not hold the blocks {:?}",
                nc.node, expected
            )));
        }
        Ok(())
    }

    /// Recover the data from at least `k` distinct nodes.
    pub fn reconstruct(&self, nodes: &[NodeContents]) -> Result<Vec<Elem>> {
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
        let mut per_block: Vec<BTreeMap<usize, Elem>> =
            vec![BTreeMap::new(); self.design.num_blocks()];
        for nc in nodes {
            self.check_contents(nc)?;
            for &(j, v) in &nc.symbols {
                let pos = self.position(nc.node, j).expect("layout checked");
                per_block[j].insert(pos, v);
            }
        }
        let mut data = vec![Elem::ZERO; self.data_len()];
        for (j, avail) in per_block.iter().enumerate() {
            let codeword = self.codecs[j].decode(avail).map_err(|err| match err {
                Error::Insufficient(msg) => Error::Insufficient(format!("block {}: {msg}", j + 1)),
                Error::Inconsistent(msg) => Error::Inconsistent(format!("block {}: {msg}", j + 1)),
                other => other,
            })?;
            let range = self.data_range(j);
            let dim = range.len();
            data[range].copy_from_slice(&codeword[..dim]);
        }
        Ok(data)
    }

    /// Exact repair of `failed` from `helpers`.
    ///
    /// `state` must contain the helpers' contents; other entries are ignored.
    /// Each affected group is decoded from the `r - m` lowest-numbered helpers
    /// it contains, which is what the naive accounting charges.
    pub fn repair(
        &self,
        state: &[NodeContents],
        failed: &BTreeSet<NodeId>,
        helpers: &BTreeSet<NodeId>,
    ) -> Result<RepairOutcome> {
        let p = &self.params;
        if failed.len() > p.m as usize {
            return Err(Error::params(format!(
                "{} failures exceed the tolerance m = {}",
                failed.len(),
                p.m
            )));
        }
        if !failed.is_empty() {
            let d = helpers.len() as u32;
            let e = failed.len() as u32;
            if d < p.k || d + e > p.n {
                return Err(Error::params(format!(
                    "{d} helpers for {e} failures; need k = {} <= d <= n - e = {}",
                    p.k,
                    p.n - e
                )));
            }
        }
        let accounting = account_blocks(&self.design, p.group_dimension(), failed, helpers)?;

        let by_node: BTreeMap<NodeId, &NodeContents> = state
            .iter()
            .filter(|nc| helpers.contains(&nc.node))
            .map(|nc| (nc.node, nc))
            .collect();
        for &h in helpers {
            let nc = by_node
                .get(&h)
                .ok_or_else(|| Error::params(format!("no contents for helper {h}")))?;
            self.check_contents(nc)?;
        }

        let mut repaired: BTreeMap<NodeId, Vec<(usize, Elem)>> =
            failed.iter().map(|&x| (x, Vec::new())).collect();
        let dim = p.group_dimension();
        for (j, block) in self.design.blocks().iter().enumerate() {
            if !block.iter().any(|x| failed.contains(x)) {
                continue;
            }
            let mut avail = BTreeMap::new();
            for (pos, x) in block.iter().enumerate() {
                if avail.len() == dim {
                    break;
                }
                if let Some(nc) = by_node.get(x) {
                    let v = nc
                        .symbols
                        .iter()
                        .find(|&&(b, _)| b == j)
                        .map(|&(_, v)| v)
                        .expect("layout checked");
                    avail.insert(pos, v);
                }
            }
            let codeword = self.codecs[j].decode(&avail)?;
            for (pos, x) in block.iter().enumerate() {
                if let Some(slots) = repaired.get_mut(x) {
                    slots.push((j, codeword[pos]));
                }
            }
        }
        Ok(RepairOutcome {
            repaired: repaired
                .into_iter()
                .map(|(node, symbols)| NodeContents { node, symbols })
                .collect(),
            accounting,
        })
    }

    /// Whether this is the `(k+e, k, k, e)` code with `r = t = k + e - 1` and
    /// `m = e` over a `t = r` Steiner system, the input regime of [`extend`].
    ///
    /// [`extend`]: LayeredCode::extend
    pub fn is_optimal_point(&self) -> bool {
        let p = self.params;
        p.n == p.k + p.e
            && p.d == p.k
            && p.m == p.e
            && p.r == p.k + p.e - 1
            && p.t == p.r
            && self.design.verify_steiner()
    }

    /// Grow a `(k+e, k, k, e)` optimal-point code into a `(k+e+1, k, k, e+1)`
    /// one: node `k+e+1` joins every old block, and the block `{1, ..., k+e}`
    /// is appended last. Old blocks keep their evaluation points, so every
    /// stored symbol survives unchanged.
    pub fn extend(&self) -> Result<LayeredCode> {
        if !self.is_optimal_point() {
            return Err(Error::params(format!(
                "extension needs the (k+e, k, k, e) code with r = t = k+e-1 and m = e, got {:?}",
                self.params
            )));
        }
        let p = self.params;
        let params = SystemParams {
            n: p.n + 1,
            k: p.k,
            d: p.d,
            e: p.e + 1,
            m: p.m + 1,
            r: p.r + 1,
            t: p.t + 1,
        };
        params.validate()?;
        let design = self.design.extended()?;
        let mut codecs = self
            .codecs
            .iter()
            .map(|c| c.lengthened(1))
            .collect::<Result<Vec<_>>>()?;
        codecs.push(MdsCodec::new(
            &self.field,
            params.r as usize,
            params.group_dimension(),
        )?);
        Ok(LayeredCode {
            params,
            design,
            field: self.field.clone(),
            codecs,
        })
    }

    /// Node contents of `extended` (the result of [`extend`] on `self`) given
    /// the current contents of all nodes and the `k - 1` symbols of new data
    /// carried by the added block.
    ///
    /// [`extend`]: LayeredCode::extend
    pub fn extend_contents(
        &self,
        extended: &LayeredCode,
        state: &[NodeContents],
        new_data: &[Elem],
    ) -> Result<Vec<NodeContents>> {
        let old_blocks = self.design.num_blocks();
        if extended.design.num_blocks() != old_blocks + 1
            || extended.params.n != self.params.n + 1
        {
            return Err(Error::params("second code is not an extension of this one"));
        }
        let by_node: BTreeMap<NodeId, &NodeContents> =
            state.iter().map(|nc| (nc.node, nc)).collect();
        if by_node.len() != self.params.n as usize {
            return Err(Error::params("extension needs the contents of every node"));
        }
        for nc in by_node.values() {
            self.check_contents(nc)?;
        }
        let new_node = extended.params.n;
        let new_block = old_blocks;
        let fresh = extended.codecs[new_block].encode(new_data)?;

        let mut out: Vec<NodeContents> = by_node
            .values()
            .map(|nc| {
                let mut symbols = nc.symbols.clone();
                let pos = extended.position(nc.node, new_block).expect("new block holds old nodes");
                symbols.push((new_block, fresh[pos]));
                NodeContents {
                    node: nc.node,
                    symbols,
                }
            })
            .collect();

        let mut grown = Vec::with_capacity(old_blocks);
        for (j, block) in self.design.blocks().iter().enumerate() {
            let avail: BTreeMap<usize, Elem> = block
                .iter()
                .enumerate()
                .map(|(pos, x)| {
                    let v = by_node[x]
                        .symbols
                        .iter()
                        .find(|&&(b, _)| b == j)
                        .map(|&(_, v)| v)
                        .expect("layout checked");
                    (pos, v)
                })
                .collect();
            let codeword = self.codecs[j].decode(&avail)?;
            let dim = self.params.group_dimension();
            let longer = extended.codecs[j].encode(&codeword[..dim])?;
            let pos = extended.position(new_node, j).expect("new node joins old blocks");
            grown.push((j, longer[pos]));
        }
        out.push(NodeContents {
            node: new_node,
            symbols: grown,
        });
        Ok(out)
    }
}
